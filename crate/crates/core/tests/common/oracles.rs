//! Independent reference implementations used only by tests. Everything
//! here is written from the definitions with plain loops and shares no
//! code path with the library kernels.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for t in 0..a.len() {
        s += (a[t] - b[t]) * (a[t] - b[t]);
    }
    s.sqrt()
}

/// Row i: i, then all other indices sorted by (distance, index), cut to k.
pub fn knn(points: &[[f64; 3]], k: usize) -> Vec<Vec<usize>> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| {
                euclid(&points[i], &points[a])
                    .partial_cmp(&euclid(&points[i], &points[b]))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let mut row = vec![i];
            row.extend(others.into_iter().take(k - 1));
            row
        })
        .collect()
}

fn apply(w: &[f64], d_in: usize, d: usize, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; d];
    for c in 0..d {
        for a in 0..d_in {
            out[c] += w[a * d + c] * x[a];
        }
    }
    out
}

fn softmax_plain(logits: &[f64]) -> Vec<f64> {
    let total: f64 = logits.iter().map(|l| l.exp()).sum();
    logits.iter().map(|l| l.exp() / total).collect()
}

/// Local map by definition: row i over the given patch order.
#[allow(clippy::too_many_arguments)]
pub fn n2p(
    feats: &[Vec<f64>],
    patches: &[Vec<usize>],
    wq: &[f64],
    wk: &[f64],
    d_in: usize,
    d: usize,
) -> Vec<Vec<f64>> {
    let scale = (d as f64).sqrt();
    patches
        .iter()
        .enumerate()
        .map(|(i, patch)| {
            let q = apply(wq, d_in, d, &feats[i]);
            let logits: Vec<f64> = patch
                .iter()
                .map(|&j| {
                    let diff: Vec<f64> = (0..d_in).map(|a| feats[j][a] - feats[i][a]).collect();
                    let key = apply(wk, d_in, d, &diff);
                    (0..d).map(|c| q[c] * key[c]).sum::<f64>() / scale
                })
                .collect();
            softmax_plain(&logits)
        })
        .collect()
}

/// Global map by definition, columns evaluated in `col_order` and stored
/// back in point order.
pub fn p2p_with_order(
    feats: &[Vec<f64>],
    wq: &[f64],
    wk: &[f64],
    d_in: usize,
    d: usize,
    col_order: &[usize],
) -> Vec<Vec<f64>> {
    let n = feats.len();
    let scale = (d as f64).sqrt();
    let keys: Vec<Vec<f64>> = feats.iter().map(|f| apply(wk, d_in, d, f)).collect();
    (0..n)
        .map(|i| {
            let q = apply(wq, d_in, d, &feats[i]);
            let mut logits = vec![0.0; n];
            for &j in col_order {
                logits[j] = (0..d).map(|c| q[c] * keys[j][c]).sum::<f64>() / scale;
            }
            softmax_plain(&logits)
        })
        .collect()
}

pub fn p2p(feats: &[Vec<f64>], wq: &[f64], wk: &[f64], d_in: usize, d: usize) -> Vec<Vec<f64>> {
    let order: Vec<usize> = (0..feats.len()).collect();
    p2p_with_order(feats, wq, wk, d_in, d, &order)
}

pub fn row_std(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.iter()
        .map(|r| {
            let w = r.len() as f64;
            let mean = r.iter().sum::<f64>() / w;
            (r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / w).sqrt()
        })
        .collect()
}

pub fn column_sums(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows[0].len();
    let mut u = vec![0.0; n];
    for j in 0..n {
        for r in rows {
            u[j] += r[j];
        }
    }
    u
}

/// Greedy max-min selection, recomputing every min-distance from scratch.
pub fn fps(points: &[[f64; 3]], m: usize, start: usize) -> Vec<usize> {
    let mut chosen = vec![start];
    while chosen.len() < m {
        let mut best = None;
        let mut best_d = -1.0;
        for j in 0..points.len() {
            if chosen.contains(&j) {
                continue;
            }
            let md = chosen
                .iter()
                .map(|&c| euclid(&points[c], &points[j]))
                .fold(f64::INFINITY, f64::min);
            if md > best_d {
                best_d = md;
                best = Some(j);
            }
        }
        chosen.push(best.unwrap());
    }
    chosen
}

/// Minimum distance from `j` to the points in `prefix`.
pub fn min_dist_to(points: &[[f64; 3]], prefix: &[usize], j: usize) -> f64 {
    prefix
        .iter()
        .map(|&c| euclid(&points[c], &points[j]))
        .fold(f64::INFINITY, f64::min)
}

pub fn chamfer(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let directed = |x: &[[f64; 3]], y: &[[f64; 3]]| {
        let mut total = 0.0;
        for p in x {
            let mut best = f64::INFINITY;
            for q in y {
                best = best.min(euclid(p, q));
            }
            total += best;
        }
        total / x.len() as f64
    };
    (directed(a, b) + directed(b, a)) / 2.0
}

pub fn hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let directed = |x: &[[f64; 3]], y: &[[f64; 3]]| {
        let mut worst: f64 = 0.0;
        for p in x {
            let mut best = f64::INFINITY;
            for q in y {
                best = best.min(euclid(p, q));
            }
            worst = worst.max(best);
        }
        worst
    };
    directed(a, b).max(directed(b, a))
}

/// Number of occupied voxels, origin at the bounding-box minimum.
pub fn occupied_voxels(points: &[[f64; 3]], edge: f64) -> usize {
    let mut lo = [f64::INFINITY; 3];
    for p in points {
        for a in 0..3 {
            if p[a] < lo[a] {
                lo[a] = p[a];
            }
        }
    }
    let keys: BTreeSet<(i64, i64, i64)> = points
        .iter()
        .map(|p| {
            (
                ((p[0] - lo[0]) / edge).floor() as i64,
                ((p[1] - lo[1]) / edge).floor() as i64,
                ((p[2] - lo[2]) / edge).floor() as i64,
            )
        })
        .collect();
    keys.len()
}

/// Eigenvalues of a symmetric 3x3 matrix, descending, by the closed-form
/// trigonometric solution of the characteristic cubic.
pub fn sym3_eigen_closed_form(a: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    if p1 == 0.0 {
        let mut e = [a[0][0], a[1][1], a[2][2]];
        e.sort_by(|x, y| y.partial_cmp(x).unwrap());
        return e;
    }
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            b[r][c] = (a[r][c] - if r == c { q } else { 0.0 }) / p;
        }
    }
    let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    [e1, e2, e3]
}

/// Pixel patch rows by definition, clamp-to-edge, logit (p_i+1)(p_j-p_i).
pub fn pixel_rows(h: usize, w: usize, px: &[f64], patch: usize) -> Vec<Vec<f64>> {
    let r = (patch / 2) as i64;
    let mut out = Vec::new();
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let c = px[(y as usize) * w + x as usize];
            let mut logits = Vec::new();
            for dy in -r..=r {
                for dx in -r..=r {
                    let yy = (y + dy).max(0).min(h as i64 - 1) as usize;
                    let xx = (x + dx).max(0).min(w as i64 - 1) as usize;
                    logits.push((c + 1.0) * (px[yy * w + xx] - c));
                }
            }
            out.push(softmax_plain(&logits));
        }
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
