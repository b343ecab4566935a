//! Fixtures shared by the kernel benchmarks.

use apes_core::rng::SeededRng;
use apes_core::{FeatureMatrix, PointCloud};

/// `n` points uniform in `[-1, 1]³`.
pub fn cloud(seed: u64, n: usize) -> PointCloud {
    let mut rng = SeededRng::new(seed);
    let pts = (0..n)
        .map(|_| [0.0; 3].map(|_: f64| 2.0 * rng.uniform() - 1.0))
        .collect();
    PointCloud::new(pts).expect("finite points")
}

/// `n x dim` standard Gaussian features.
pub fn features(seed: u64, n: usize, dim: usize) -> FeatureMatrix {
    let mut rng = SeededRng::new(seed);
    let data = (0..n * dim).map(|_| rng.gaussian()).collect();
    FeatureMatrix::new(data, n, dim).expect("finite features")
}
