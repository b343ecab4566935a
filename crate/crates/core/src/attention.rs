//! Correlation maps and the edge scores derived from them.
//!
//! A local (neighbor-to-point) map scores each point's kNN patch with
//! `q_i · Wkᵀ(p_ij − p_i) / √d`; a global (point-to-point) map scores every
//! pair with `q_i · Wkᵀp_j / √d`. Both are row-wise softmax normalized, so
//! each row sums to one and has mean `1 / width`.
//!
//! The dense global map takes `8·N²` bytes plus `16·N·d` for the projected
//! queries and keys; its column sums add `8·N`. [`column_sums_streaming`] yields the same column sums,
//! bit for bit, without materializing the map.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{
    CorrelationMap, FeatureMatrix, MapKind, NeighborIndex, ProjectionPair, ScoreKind, ScoreVector,
};

/// Bytes held by a dense `N x N` global map.
pub fn dense_map_bytes(n: usize) -> usize {
    n.saturating_mul(n)
        .saturating_mul(std::mem::size_of::<f64>())
}

/// Default ceiling for materializing a dense global map (2 GiB, N ≈ 16k).
pub const DEFAULT_DENSE_LIMIT_BYTES: usize = 2 << 30;

/// Rows per block in the streaming column-sum path.
const STREAM_BLOCK_ROWS: usize = 128;

fn check_dims(features: &FeatureMatrix, proj: &ProjectionPair) -> Result<()> {
    if features.dim() != proj.d_in() {
        return Err(Error::SizeMismatch {
            what: "feature dimension vs projection input dimension",
            expected: proj.d_in(),
            got: features.dim(),
        });
    }
    Ok(())
}

/// Numerically stable in-place softmax (max subtraction).
pub(crate) fn softmax_in_place(row: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    let inv = 1.0 / sum;
    for v in row.iter_mut() {
        *v *= inv;
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Neighbor-to-point correlation map, one row per point in patch order.
pub fn n2p_map(
    features: &FeatureMatrix,
    neighbors: &NeighborIndex,
    proj: &ProjectionPair,
) -> Result<CorrelationMap> {
    check_dims(features, proj)?;
    if neighbors.n() != features.rows() {
        return Err(Error::SizeMismatch {
            what: "neighbor rows vs feature rows",
            expected: features.rows(),
            got: neighbors.n(),
        });
    }
    let (n, k, d, d_in) = (features.rows(), neighbors.k(), proj.d(), proj.d_in());
    let scale = 1.0 / (d as f64).sqrt();
    let mut data = vec![0.0; n * k];
    data.par_chunks_mut(k).enumerate().for_each_init(
        || (vec![0.0; d], vec![0.0; d_in], vec![0.0; d]),
        |(q, diff, key), (i, row)| {
            let center = features.row(i);
            proj.query_into(center, q);
            for (slot, &j) in row.iter_mut().zip(neighbors.row(i)) {
                for ((dv, a), b) in diff.iter_mut().zip(features.row(j)).zip(center) {
                    *dv = a - b;
                }
                proj.key_into(diff, key);
                *slot = dot(q, key) * scale;
            }
            softmax_in_place(row);
        },
    );
    Ok(CorrelationMap::from_raw(data, n, k, MapKind::Local))
}

/// Projected queries and keys, each `N x d` row-major.
fn project_all(features: &FeatureMatrix, proj: &ProjectionPair) -> (Vec<f64>, Vec<f64>) {
    let (n, d) = (features.rows(), proj.d());
    let mut q = vec![0.0; n * d];
    let mut k = vec![0.0; n * d];
    q.par_chunks_mut(d)
        .zip(k.par_chunks_mut(d))
        .enumerate()
        .for_each(|(i, (qi, ki))| {
            proj.query_into(features.row(i), qi);
            proj.key_into(features.row(i), ki);
        });
    (q, k)
}

/// Fills `out` with softmax row `i` of the global map. Shared by the dense
/// and streaming paths so both produce identical values.
#[inline]
fn global_row(query: &[f64], keys: &[f64], d: usize, scale: f64, out: &mut [f64]) {
    for (slot, key) in out.iter_mut().zip(keys.chunks_exact(d)) {
        *slot = dot(query, key) * scale;
    }
    softmax_in_place(out);
}

/// Point-to-point (self-attention) correlation map, dense `N x N`.
///
/// Allocates [`dense_map_bytes`]`(N)`; use [`p2p_map_checked`] or
/// [`column_sums_streaming`] when `N` is not known to be small.
pub fn p2p_map(features: &FeatureMatrix, proj: &ProjectionPair) -> Result<CorrelationMap> {
    check_dims(features, proj)?;
    let (n, d) = (features.rows(), proj.d());
    let scale = 1.0 / (d as f64).sqrt();
    let (q, k) = project_all(features, proj);
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n)
        .zip(q.par_chunks(d))
        .for_each(|(row, qi)| global_row(qi, &k, d, scale, row));
    Ok(CorrelationMap::from_raw(data, n, n, MapKind::Global))
}

/// [`p2p_map`] that refuses to allocate more than `limit_bytes`.
pub fn p2p_map_checked(
    features: &FeatureMatrix,
    proj: &ProjectionPair,
    limit_bytes: usize,
) -> Result<CorrelationMap> {
    let bytes = dense_map_bytes(features.rows());
    if bytes > limit_bytes {
        return Err(Error::MapTooLarge {
            n: features.rows(),
            bytes,
            limit: limit_bytes,
        });
    }
    p2p_map(features, proj)
}

/// Population standard deviation (divide by width) of every row.
///
/// Deviations are taken relative to the row's first entry before the
/// two-pass mean, so a constant row gives exactly zero.
pub fn row_std(map: &CorrelationMap) -> ScoreVector {
    let w = map.width() as f64;
    let scores = map
        .row_iter()
        .map(|row| {
            let shift = row[0];
            let mean = row.iter().map(|v| v - shift).sum::<f64>() / w;
            let var = row
                .iter()
                .map(|v| {
                    let dv = (v - shift) - mean;
                    dv * dv
                })
                .sum::<f64>()
                / w;
            var.sqrt()
        })
        .collect();
    ScoreVector::from_raw(scores, ScoreKind::Sigma)
}

/// Column sums `u_j = Σ_i m_ij` of a global map, accumulated over rows in
/// ascending index order.
pub fn column_sums(map: &CorrelationMap) -> Result<ScoreVector> {
    if map.kind() != MapKind::Global {
        return Err(Error::NotGlobalMap);
    }
    let n = map.width();
    let mut u = vec![0.0; n];
    // Columns are split across threads; each column still sums rows in order.
    const COLS: usize = 512;
    u.par_chunks_mut(COLS).enumerate().for_each(|(c, acc)| {
        let cols = c * COLS..c * COLS + acc.len();
        for row in map.row_iter() {
            for (a, v) in acc.iter_mut().zip(&row[cols.clone()]) {
                *a += v;
            }
        }
    });
    Ok(ScoreVector::from_raw(u, ScoreKind::ColSum))
}

/// Column sums of the global map without materializing it.
///
/// Rows are computed in parallel blocks and added in ascending row order,
/// so the result is bit-identical to `column_sums(&p2p_map(..))`.
pub fn column_sums_streaming(
    features: &FeatureMatrix,
    proj: &ProjectionPair,
) -> Result<ScoreVector> {
    check_dims(features, proj)?;
    let (n, d) = (features.rows(), proj.d());
    let scale = 1.0 / (d as f64).sqrt();
    let (q, k) = project_all(features, proj);
    let block = STREAM_BLOCK_ROWS.min(n);
    let mut buf = vec![0.0; block * n];
    let mut u = vec![0.0; n];
    for qb in q.chunks(block * d) {
        let rows = qb.len() / d;
        buf[..rows * n]
            .par_chunks_mut(n)
            .zip(qb.par_chunks(d))
            .for_each(|(row, qi)| global_row(qi, &k, d, scale, row));
        for row in buf[..rows * n].chunks_exact(n) {
            for (a, v) in u.iter_mut().zip(row) {
                *a += v;
            }
        }
    }
    Ok(ScoreVector::from_raw(u, ScoreKind::ColSum))
}
