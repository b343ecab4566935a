//! Evaluation toolkit: labeled synthetic shapes, curvature labels, metrics
//! and the comparison harness.
//!
//! Downstream task accuracy is not measured here; edge recall, chamfer and
//! Hausdorff distance serve as geometric proxies.

pub mod bench;
pub mod curvature;
pub mod metrics;
pub mod shapes;

pub use bench::{
    bench, successive_vs_direct, write_bench_csv, write_overlap_csv, BenchOptions, BenchRow,
    OverlapRow,
};
pub use curvature::{curvature_edge_labels, surface_variation, sym3_eigenvalues};
pub use metrics::{chamfer, directed_hausdorff, edge_recall, hausdorff};
pub use shapes::{gen_cube, gen_cylinder, gen_sphere, LabeledCloud};
