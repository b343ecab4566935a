//! Brute-force k-nearest-neighbor patches.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{dist, dist2, NeighborIndex, PointCloud, ScoreKind, ScoreVector};

/// Builds the kNN patch of every point.
///
/// Row `i` holds `i` first, then the `k - 1` closest other points in
/// ascending squared Euclidean distance. Equal distances are ordered by
/// ascending point index, so coincident points are still distinct
/// neighbors. Rows are computed in parallel; the result does not depend
/// on the thread count.
pub fn knn(cloud: &PointCloud, k: usize) -> Result<NeighborIndex> {
    let n = cloud.len();
    if k == 0 {
        return Err(Error::KZero);
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let pts = cloud.points();
    let mut indices = vec![0usize; n * k];
    indices.par_chunks_mut(k).enumerate().for_each_init(
        Vec::new,
        |cand: &mut Vec<(f64, usize)>, (i, row)| {
            row[0] = i;
            if k == 1 {
                return;
            }
            cand.clear();
            cand.extend(
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (dist2(&pts[i], &pts[j]), j)),
            );
            let want = k - 1;
            if want < cand.len() {
                cand.select_nth_unstable_by(want - 1, cmp_candidate);
                cand.truncate(want);
            }
            cand.sort_unstable_by(cmp_candidate);
            for (slot, &(_, j)) in row[1..].iter_mut().zip(cand.iter()) {
                *slot = j;
            }
        },
    );
    Ok(NeighborIndex::from_raw(indices, n, k))
}

#[inline]
fn cmp_candidate(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Sum of Euclidean distances from each point to the members of its patch
/// (the point itself contributes zero). Used as an inverse density score.
pub fn pairwise_distance_sums(
    cloud: &PointCloud,
    neighbors: &NeighborIndex,
) -> Result<ScoreVector> {
    if neighbors.n() != cloud.len() {
        return Err(Error::SizeMismatch {
            what: "neighbor rows vs cloud points",
            expected: cloud.len(),
            got: neighbors.n(),
        });
    }
    let pts = cloud.points();
    let scores = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            neighbors
                .row(i)
                .iter()
                .map(|&j| dist(&pts[i], &pts[j]))
                .sum::<f64>()
        })
        .collect();
    Ok(ScoreVector::from_raw(scores, ScoreKind::Density))
}
