//! Geometric quality metrics for a sample against its source.

use rayon::prelude::*;

use super::shapes::LabeledCloud;
use crate::error::{Error, Result};
use crate::types::{dist2, PointCloud, SampleSelection};

/// Distance from every point of `from` to its nearest point in `to`.
fn nearest_distances(from: &PointCloud, to: &PointCloud) -> Vec<f64> {
    let targets = to.points();
    from.points()
        .par_iter()
        .map(|p| {
            targets
                .iter()
                .map(|q| dist2(p, q))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .collect()
}

/// Symmetric chamfer distance: the average of the mean nearest-neighbor
/// distances `a → b` and `b → a`.
pub fn chamfer(a: &PointCloud, b: &PointCloud) -> f64 {
    let mean = |v: Vec<f64>| {
        let n = v.len() as f64;
        v.into_iter().sum::<f64>() / n
    };
    0.5 * (mean(nearest_distances(a, b)) + mean(nearest_distances(b, a)))
}

/// Largest distance from a point of `a` to its nearest point of `b`.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> f64 {
    nearest_distances(a, b).into_iter().fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Fraction of labeled edge points that the selection contains.
pub fn edge_recall(selection: &SampleSelection, labels: &LabeledCloud) -> Result<f64> {
    let edges = labels.edge_count();
    if edges == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let n = labels.edge_mask.len();
    if let Some(&bad) = selection.indices().iter().find(|&&i| i >= n) {
        return Err(Error::InvalidParameter(format!(
            "selection index {bad} outside labeled cloud of {n} points"
        )));
    }
    let hit = selection
        .indices()
        .iter()
        .filter(|&&i| labels.edge_mask[i])
        .count();
    Ok(hit as f64 / edges as f64)
}
