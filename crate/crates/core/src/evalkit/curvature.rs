//! Curvature-based edge labels from neighborhood covariance.

use rayon::prelude::*;

use super::shapes::LabeledCloud;
use crate::error::{Error, Result};
use crate::neighbors::knn;
use crate::types::{PointCloud, ScoreKind, ScoreVector};

/// Off-diagonal magnitude at which the Jacobi sweep stops, relative to the
/// matrix scale.
const JACOBI_TOL: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigenvalues of a symmetric 3×3 matrix in descending order, by cyclic
/// Jacobi rotation. Residuals `det(A − λI)` are below 1e-12 relative to
/// the matrix scale.
#[allow(clippy::needless_range_loop)]
pub fn sym3_eigenvalues(m: [[f64; 3]; 3]) -> [f64; 3] {
    let mut a = m;
    let scale = a.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return [0.0; 3];
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // A <- Jᵀ A J with J the (p, q) rotation.
            for r in 0..3 {
                let (arp, arq) = (a[r][p], a[r][q]);
                a[r][p] = c * arp - s * arq;
                a[r][q] = s * arp + c * arq;
            }
            for r in 0..3 {
                let (apr, aqr) = (a[p][r], a[q][r]);
                a[p][r] = c * apr - s * aqr;
                a[q][r] = s * apr + c * aqr;
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;
        }
    }
    let mut ev = [a[0][0], a[1][1], a[2][2]];
    ev.sort_unstable_by(|x, y| y.total_cmp(x));
    ev
}

/// Population covariance of the given points.
#[allow(clippy::needless_range_loop)]
pub fn covariance(points: &[[f64; 3]]) -> [[f64; 3]; 3] {
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for p in points {
        for a in 0..3 {
            c[a] += p[a];
        }
    }
    c.iter_mut().for_each(|v| *v /= n);
    let mut cov = [[0.0; 3]; 3];
    for p in points {
        let d = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
        for r in 0..3 {
            for s in r..3 {
                cov[r][s] += d[r] * d[s];
            }
        }
    }
    for r in 0..3 {
        for s in r..3 {
            cov[r][s] /= n;
            cov[s][r] = cov[r][s];
        }
    }
    cov
}

/// Surface variation `λ₃ / (λ₁ + λ₂ + λ₃)` of each point's k-neighborhood
/// (the point included), in `[0, 1/3]`.
pub fn surface_variation(cloud: &PointCloud, k: usize) -> Result<ScoreVector> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "surface variation needs k >= 3, got {k}"
        )));
    }
    let neighbors = knn(cloud, k)?;
    let pts = cloud.points();
    let scores = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let patch: Vec<[f64; 3]> = neighbors.row(i).iter().map(|&j| pts[j]).collect();
            let ev = sym3_eigenvalues(covariance(&patch)).map(|v| v.max(0.0));
            let total = ev[0] + ev[1] + ev[2];
            if total == 0.0 {
                Err(Error::DegenerateNeighborhood(i))
            } else {
                Ok(ev[2] / total)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScoreVector::from_raw(scores, ScoreKind::Curvature))
}

/// Marks points whose surface variation is at least `threshold`.
pub fn curvature_edge_labels(cloud: &PointCloud, k: usize, threshold: f64) -> Result<LabeledCloud> {
    let variation = surface_variation(cloud, k)?;
    let mask = variation
        .as_slice()
        .iter()
        .map(|&v| v >= threshold)
        .collect();
    LabeledCloud::new(cloud.clone(), mask, threshold)
}
