//! Domain types shared by every module.
//!
//! All types are immutable once constructed; constructors check the
//! invariants and return [`Error`] on violation.

use crate::error::{Error, Result};

/// A 3D point.
pub type Point3 = [f64; 3];

/// Squared Euclidean distance between two points.
#[inline]
pub fn dist2(a: &Point3, b: &Point3) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

/// Euclidean distance between two points.
#[inline]
pub fn dist(a: &Point3, b: &Point3) -> f64 {
    dist2(a, b).sqrt()
}

/// A non-empty set of finite 3D points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point3>,
    normalized: bool,
}

impl PointCloud {
    pub fn new(points: Vec<Point3>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if let Some(row) = points.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFiniteValue {
                what: "point cloud",
                row,
            });
        }
        Ok(Self {
            points,
            normalized: false,
        })
    }

    /// Builds a cloud flagged as normalized. Every point must have norm
    /// at most `1 + 1e-6`.
    pub fn new_normalized(points: Vec<Point3>) -> Result<Self> {
        let mut cloud = Self::new(points)?;
        for (row, p) in cloud.points.iter().enumerate() {
            let norm = dist(p, &[0.0; 3]);
            if norm > 1.0 + 1e-6 {
                return Err(Error::NotNormalized { row, norm });
            }
        }
        cloud.normalized = true;
        Ok(cloud)
    }

    /// Rescales the cloud into the unit sphere (centroid at the origin,
    /// farthest point at norm 1).
    pub fn normalize_to_unit_sphere(&self) -> Self {
        let n = self.len() as f64;
        let mut c = [0.0; 3];
        for p in &self.points {
            for a in 0..3 {
                c[a] += p[a];
            }
        }
        c.iter_mut().for_each(|v| *v /= n);
        let shifted: Vec<Point3> = self
            .points
            .iter()
            .map(|p| [p[0] - c[0], p[1] - c[1], p[2] - c[2]])
            .collect();
        let r = shifted
            .iter()
            .map(|p| dist(p, &[0.0; 3]))
            .fold(0.0, f64::max);
        let scale = if r > 0.0 { 1.0 / r } else { 1.0 };
        let points = shifted
            .into_iter()
            .map(|p| [p[0] * scale, p[1] * scale, p[2] * scale])
            .collect();
        Self {
            points,
            normalized: true,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; clouds hold at least one point.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point3 {
        &self.points[i]
    }

    /// Gathers the points of `selection`, in selection order.
    pub fn gather(&self, indices: &[usize]) -> Self {
        Self {
            points: indices.iter().map(|&i| self.points[i]).collect(),
            normalized: self.normalized,
        }
    }
}

/// Per-point feature vectors stored row-major, `rows x dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: Vec<f64>,
    rows: usize,
    dim: usize,
}

impl FeatureMatrix {
    pub fn new(data: Vec<f64>, rows: usize, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "feature dimension must be >= 1".into(),
            ));
        }
        if rows == 0 {
            return Err(Error::EmptyCloud);
        }
        if data.len() != rows * dim {
            return Err(Error::SizeMismatch {
                what: "feature data length",
                expected: rows * dim,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                what: "feature matrix",
                row: pos / dim,
            });
        }
        Ok(Self { data, rows, dim })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::SizeMismatch {
                what: "feature row width",
                expected: dim,
                got: bad.len(),
            });
        }
        Self::new(rows.concat(), rows.len(), dim)
    }

    /// The default features: raw coordinates, `d_in = 3`.
    pub fn from_cloud(cloud: &PointCloud) -> Self {
        Self {
            data: cloud.points().iter().flatten().copied().collect(),
            rows: cloud.len(),
            dim: 3,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn gather(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            data,
            rows: indices.len(),
            dim: self.dim,
        }
    }
}

/// Checks that `features` describes the points of `cloud`.
pub fn validate(cloud: &PointCloud, features: &FeatureMatrix) -> Result<()> {
    if cloud.len() != features.rows() {
        return Err(Error::SizeMismatch {
            what: "feature rows vs cloud points",
            expected: cloud.len(),
            got: features.rows(),
        });
    }
    if let Some(row) = cloud
        .points()
        .iter()
        .position(|p| p.iter().any(|v| !v.is_finite()))
    {
        return Err(Error::NonFiniteValue {
            what: "point cloud",
            row,
        });
    }
    if let Some(pos) = features.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue {
            what: "feature matrix",
            row: pos / features.dim(),
        });
    }
    Ok(())
}

/// k-nearest-neighbor patches, one row of `k` indices per point. Row `i`
/// starts with `i` itself and holds distinct indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborIndex {
    indices: Vec<usize>,
    n: usize,
    k: usize,
}

impl NeighborIndex {
    pub fn new(indices: Vec<usize>, n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::KZero);
        }
        if k > n {
            return Err(Error::KTooLarge { k, n });
        }
        if indices.len() != n * k {
            return Err(Error::SizeMismatch {
                what: "neighbor index length",
                expected: n * k,
                got: indices.len(),
            });
        }
        let mut seen = vec![usize::MAX; n];
        for (row, patch) in indices.chunks_exact(k).enumerate() {
            if patch[0] != row {
                return Err(Error::InvalidNeighbor {
                    row,
                    value: patch[0],
                });
            }
            for &j in patch {
                if j >= n || seen[j] == row {
                    return Err(Error::InvalidNeighbor { row, value: j });
                }
                seen[j] = row;
            }
        }
        Ok(Self { indices, n, k })
    }

    pub(crate) fn from_raw(indices: Vec<usize>, n: usize, k: usize) -> Self {
        debug_assert_eq!(indices.len(), n * k);
        Self { indices, n, k }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.indices[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.indices.chunks_exact(self.k)
    }
}

/// Bias-free query and key projections, both `d_in x d`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    wq: Vec<f64>,
    wk: Vec<f64>,
    d_in: usize,
    d: usize,
}

impl ProjectionPair {
    pub fn new(wq: Vec<f64>, wk: Vec<f64>, d_in: usize, d: usize) -> Result<Self> {
        if d_in == 0 || d == 0 {
            return Err(Error::DimensionMismatch(format!(
                "projection dimensions must be >= 1 (d_in = {d_in}, d = {d})"
            )));
        }
        for (name, w) in [("Wq", &wq), ("Wk", &wk)] {
            if w.len() != d_in * d {
                return Err(Error::DimensionMismatch(format!(
                    "{name} has {} entries, expected d_in * d = {}",
                    w.len(),
                    d_in * d
                )));
            }
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteValue {
                    what: "projection weights",
                    row: 0,
                });
            }
        }
        Ok(Self { wq, wk, d_in, d })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut eye = vec![0.0; dim * dim];
        for i in 0..dim {
            eye[i * dim + i] = 1.0;
        }
        Self::new(eye.clone(), eye, dim, dim)
    }

    /// Entries drawn from N(0, 1/d_in) using the crate's deterministic
    /// generator; `Wq` is drawn first, then `Wk`.
    pub fn seeded_gaussian(seed: u64, d_in: usize, d: usize) -> Result<Self> {
        let mut rng = crate::rng::SeededRng::new(seed);
        let scale = 1.0 / (d_in.max(1) as f64).sqrt();
        let wq = (0..d_in * d).map(|_| rng.gaussian() * scale).collect();
        let wk = (0..d_in * d).map(|_| rng.gaussian() * scale).collect();
        Self::new(wq, wk, d_in, d)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn wq(&self) -> &[f64] {
        &self.wq
    }

    pub fn wk(&self) -> &[f64] {
        &self.wk
    }

    /// `out = Wqᵀ x`.
    pub fn query_into(&self, x: &[f64], out: &mut [f64]) {
        project(&self.wq, self.d, x, out);
    }

    /// `out = Wkᵀ x`.
    pub fn key_into(&self, x: &[f64], out: &mut [f64]) {
        project(&self.wk, self.d, x, out);
    }
}

#[inline]
fn project(w: &[f64], d: usize, x: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for (a, &xa) in x.iter().enumerate() {
        let row = &w[a * d..(a + 1) * d];
        for (o, &wv) in out.iter_mut().zip(row) {
            *o += xa * wv;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    /// `N x k` rows over kNN patches, columns in neighbor order.
    Local,
    /// `N x N` rows, columns in point order.
    Global,
}

/// Softmax-normalized attention rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMap {
    data: Vec<f64>,
    rows: usize,
    width: usize,
    kind: MapKind,
}

impl CorrelationMap {
    pub(crate) fn from_raw(data: Vec<f64>, rows: usize, width: usize, kind: MapKind) -> Self {
        debug_assert_eq!(data.len(), rows * width);
        Self {
            data,
            rows,
            width,
            kind,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.width)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest deviation of any row sum from 1.
    pub fn max_row_sum_error(&self) -> f64 {
        self.row_iter()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    Sigma,
    ColSum,
    Density,
    Curvature,
}

impl ScoreKind {
    pub fn name(self) -> &'static str {
        match self {
            ScoreKind::Sigma => "sigma",
            ScoreKind::ColSum => "colsum",
            ScoreKind::Density => "density",
            ScoreKind::Curvature => "curvature",
        }
    }
}

/// One finite score per source point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    scores: Vec<f64>,
    kind: ScoreKind,
}

impl ScoreVector {
    pub fn new(scores: Vec<f64>, kind: ScoreKind) -> Result<Self> {
        if let Some(row) = scores.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                what: "scores",
                row,
            });
        }
        Ok(Self { scores, kind })
    }

    pub(crate) fn from_raw(scores: Vec<f64>, kind: ScoreKind) -> Self {
        Self { scores, kind }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.scores
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.scores
    }
}

/// Distinct indices into the original cloud, in selection order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSelection {
    indices: Vec<usize>,
}

impl SampleSelection {
    /// Validates `1 <= M <= n`, range and distinctness.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() || indices.len() > n {
            return Err(Error::MTooLarge {
                m: indices.len(),
                n,
            });
        }
        let mut seen = vec![false; n];
        for (row, &i) in indices.iter().enumerate() {
            if i >= n || seen[i] {
                return Err(Error::InvalidParameter(format!(
                    "selection entry {row} ({i}) is out of range or repeated"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { indices })
    }

    pub(crate) fn from_raw(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.indices
    }

    /// Maps indices that refer to a subset back through `parent`, where
    /// `parent[i]` is the original index of subset point `i`.
    pub fn lift(&self, parent: &[usize]) -> Self {
        Self {
            indices: self.indices.iter().map(|&i| parent[i]).collect(),
        }
    }

    /// Membership mask of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &i in &self.indices {
            m[i] = true;
        }
        m
    }
}
