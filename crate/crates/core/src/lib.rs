//! Attention-based point cloud edge sampling.
//!
//! Points are ranked by how their softmax-normalized attention rows look:
//!
//! - **local** scores use neighbor-to-point attention over each point's kNN
//!   patch; the population standard deviation `σ` of the row is high on
//!   edges and corners ([`samplers::apes_local`]).
//! - **global** scores use point-to-point self-attention over the whole
//!   cloud; the column sums `u` of the `N x N` map measure how much each
//!   point contributes to all others ([`samplers::apes_global`]).
//!
//! Both keep original indices, so any sample size `1 ≤ m ≤ N` can be
//! requested. The crate also ships the classical baselines (random, FPS,
//! voxel grid, inverse density), a 2D image version of the σ detector,
//! synthetic shapes with analytic edge labels and a metrics harness.
//!
//! ```
//! use apes_core::{evalkit, samplers, FeatureMatrix, ProjectionPair};
//!
//! let shape = evalkit::gen_cube(512, 7, 0.05).unwrap();
//! let features = FeatureMatrix::from_cloud(&shape.cloud);
//! let proj = ProjectionPair::identity(3).unwrap();
//! let picked = samplers::apes_local(&shape.cloud, &features, 128, 16, &proj).unwrap();
//! assert_eq!(picked.len(), 128);
//! ```

pub mod attention;
pub mod error;
pub mod evalkit;
pub mod image;
pub mod io;
pub mod neighbors;
pub mod rng;
pub mod samplers;
pub mod types;

pub use error::{Error, Result};
pub use samplers::{Direction, FpsStart, Method, SamplerConfig};
pub use types::{
    dist, dist2, validate, CorrelationMap, FeatureMatrix, MapKind, NeighborIndex, Point3,
    PointCloud, ProjectionPair, SampleSelection, ScoreKind, ScoreVector,
};
