#![allow(dead_code)]

pub mod oracles;

use apes_core::rng::SeededRng;
use apes_core::{FeatureMatrix, PointCloud};

pub fn random_points(seed: u64, n: usize) -> Vec<[f64; 3]> {
    let mut r = SeededRng::new(seed);
    (0..n)
        .map(|_| {
            [
                r.uniform() * 2.0 - 1.0,
                r.uniform() * 2.0 - 1.0,
                r.uniform() * 2.0 - 1.0,
            ]
        })
        .collect()
}

pub fn random_cloud(seed: u64, n: usize) -> PointCloud {
    PointCloud::new(random_points(seed, n)).unwrap()
}

pub fn random_features(seed: u64, n: usize, dim: usize) -> FeatureMatrix {
    let mut r = SeededRng::new(seed ^ 0xfeed);
    FeatureMatrix::new((0..n * dim).map(|_| r.gaussian()).collect(), n, dim).unwrap()
}

pub fn feature_rows(f: &FeatureMatrix) -> Vec<Vec<f64>> {
    (0..f.rows()).map(|i| f.row(i).to_vec()).collect()
}

pub fn map_rows(m: &apes_core::CorrelationMap) -> Vec<Vec<f64>> {
    m.row_iter().map(<[f64]>::to_vec).collect()
}
