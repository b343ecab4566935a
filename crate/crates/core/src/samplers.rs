//! Point selection strategies.
//!
//! Every sampler returns indices into the cloud it was given; no
//! coordinates are synthesized. All of them except [`grid_sample`] take the
//! requested sample size `m` and return exactly `m` distinct indices.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::attention::{
    column_sums, column_sums_streaming, dense_map_bytes, n2p_map, p2p_map, row_std,
    DEFAULT_DENSE_LIMIT_BYTES,
};
use crate::error::{Error, Result};
use crate::neighbors::{knn, pairwise_distance_sums};
use crate::rng::{derive_seed, SeededRng};
use crate::types::{
    dist2, validate, FeatureMatrix, PointCloud, ProjectionPair, SampleSelection, ScoreVector,
};

/// Default patch size of the local sampler.
pub const DEFAULT_K: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Highest,
    Lowest,
}

fn check_m(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::MTooLarge { m, n });
    }
    Ok(())
}

fn ranked(
    scores: &[f64],
    direction: Direction,
) -> impl Fn(&usize, &usize) -> std::cmp::Ordering + '_ {
    move |&a, &b| {
        let by_score = match direction {
            Direction::Highest => scores[b].total_cmp(&scores[a]),
            Direction::Lowest => scores[a].total_cmp(&scores[b]),
        };
        by_score.then(a.cmp(&b))
    }
}

/// The `m` indices with the most extreme scores, best first; equal scores
/// are ordered by ascending index.
pub fn select_top(scores: &ScoreVector, m: usize, direction: Direction) -> Result<SampleSelection> {
    let s = scores.as_slice();
    check_m(m, s.len())?;
    let cmp = ranked(s, direction);
    let mut idx: Vec<usize> = (0..s.len()).collect();
    if m < idx.len() {
        idx.select_nth_unstable_by(m - 1, &cmp);
        idx.truncate(m);
    }
    idx.sort_unstable_by(&cmp);
    Ok(SampleSelection::from_raw(idx))
}

/// True when the `m`-th and `(m+1)`-th ranked scores are equal, i.e. the
/// tie-break rule rather than the scores decided the selection boundary.
pub fn boundary_tied(scores: &ScoreVector, m: usize, direction: Direction) -> bool {
    let s = scores.as_slice();
    if m == 0 || m >= s.len() {
        return false;
    }
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_unstable_by(ranked(s, direction));
    s[idx[m - 1]] == s[idx[m]]
}

/// Local edge scores: σ of each point's neighbor-to-point correlation row.
pub fn apes_local_scores(
    cloud: &PointCloud,
    features: &FeatureMatrix,
    k: usize,
    proj: &ProjectionPair,
) -> Result<ScoreVector> {
    validate(cloud, features)?;
    let neighbors = knn(cloud, k)?;
    Ok(row_std(&n2p_map(features, &neighbors, proj)?))
}

/// Selects the `m` points with the largest local σ.
pub fn apes_local(
    cloud: &PointCloud,
    features: &FeatureMatrix,
    m: usize,
    k: usize,
    proj: &ProjectionPair,
) -> Result<SampleSelection> {
    check_m(m, cloud.len())?;
    select_top(
        &apes_local_scores(cloud, features, k, proj)?,
        m,
        Direction::Highest,
    )
}

/// Global scores: column sums of the point-to-point correlation map. Uses
/// the dense map up to [`DEFAULT_DENSE_LIMIT_BYTES`] and the streaming path
/// beyond it; both give identical sums.
pub fn apes_global_scores(
    cloud: &PointCloud,
    features: &FeatureMatrix,
    proj: &ProjectionPair,
) -> Result<ScoreVector> {
    validate(cloud, features)?;
    if dense_map_bytes(features.rows()) <= DEFAULT_DENSE_LIMIT_BYTES {
        column_sums(&p2p_map(features, proj)?)
    } else {
        column_sums_streaming(features, proj)
    }
}

/// Selects the `m` points with the largest column sums.
pub fn apes_global(
    cloud: &PointCloud,
    features: &FeatureMatrix,
    m: usize,
    proj: &ProjectionPair,
) -> Result<SampleSelection> {
    check_m(m, cloud.len())?;
    select_top(
        &apes_global_scores(cloud, features, proj)?,
        m,
        Direction::Highest,
    )
}

/// `m` indices drawn uniformly without replacement, in draw order.
pub fn random_sample(cloud: &PointCloud, m: usize, seed: u64) -> Result<SampleSelection> {
    check_m(m, cloud.len())?;
    Ok(SampleSelection::from_raw(
        SeededRng::new(seed).sample_indices(cloud.len(), m),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpsStart {
    Index(usize),
    /// Start index drawn uniformly from the seeded generator.
    Seeded(u64),
}

impl Default for FpsStart {
    fn default() -> Self {
        FpsStart::Index(0)
    }
}

/// Farthest point sampling: each pick maximizes the minimum distance to the
/// points already chosen, ties going to the lower index.
pub fn fps(cloud: &PointCloud, m: usize, start: FpsStart) -> Result<SampleSelection> {
    let n = cloud.len();
    check_m(m, n)?;
    let first = match start {
        FpsStart::Index(i) if i < n => i,
        FpsStart::Index(i) => {
            return Err(Error::InvalidParameter(format!(
                "FPS start index {i} out of range for {n} points"
            )))
        }
        FpsStart::Seeded(seed) => SeededRng::new(seed).below(n),
    };
    let pts = cloud.points();
    let mut min_d = vec![f64::INFINITY; n];
    let mut chosen = Vec::with_capacity(m);
    let mut taken = vec![false; n];
    let mut current = first;
    loop {
        chosen.push(current);
        taken[current] = true;
        if chosen.len() == m {
            break;
        }
        let c = pts[current];
        let mut best = usize::MAX;
        let mut best_d = f64::NEG_INFINITY;
        for (j, (md, p)) in min_d.iter_mut().zip(pts).enumerate() {
            let d = dist2(&c, p);
            if d < *md {
                *md = d;
            }
            if !taken[j] && *md > best_d {
                best_d = *md;
                best = j;
            }
        }
        current = best;
    }
    Ok(SampleSelection::from_raw(chosen))
}

/// One point per occupied voxel of edge `voxel_edge`: the member closest to
/// the voxel's centroid (ties to the lower index). Output is ascending.
pub fn grid_sample(cloud: &PointCloud, voxel_edge: f64) -> Result<SampleSelection> {
    if !(voxel_edge.is_finite() && voxel_edge > 0.0) {
        return Err(Error::DegenerateVoxel(format!(
            "voxel edge must be positive and finite, got {voxel_edge}"
        )));
    }
    let pts = cloud.points();
    let mut lo = [f64::INFINITY; 3];
    for p in pts {
        for a in 0..3 {
            lo[a] = lo[a].min(p[a]);
        }
    }
    let mut voxels: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        let mut key = [0i64; 3];
        for a in 0..3 {
            let cell = ((p[a] - lo[a]) / voxel_edge).floor();
            if !cell.is_finite() || cell.abs() >= i64::MAX as f64 {
                return Err(Error::DegenerateVoxel(format!(
                    "cell coordinate {cell} of point {i} is not representable"
                )));
            }
            key[a] = cell as i64;
        }
        voxels.entry(key).or_default().push(i);
    }
    let mut picked: Vec<usize> = voxels
        .values()
        .map(|members| {
            let inv = 1.0 / members.len() as f64;
            let mut c = [0.0; 3];
            for &i in members {
                for a in 0..3 {
                    c[a] += pts[i][a];
                }
            }
            c.iter_mut().for_each(|v| *v *= inv);
            // members are ascending, so strict < keeps the lowest index on ties
            let mut best = members[0];
            let mut best_d = dist2(&pts[best], &c);
            for &i in &members[1..] {
                let d = dist2(&pts[i], &c);
                if d < best_d {
                    best = i;
                    best_d = d;
                }
            }
            best
        })
        .collect();
    picked.sort_unstable();
    Ok(SampleSelection::from_raw(picked))
}

/// Inverse density importance sampling: keeps the `m` points whose kNN
/// distance sums are smallest.
pub fn idis(cloud: &PointCloud, m: usize, k: usize) -> Result<SampleSelection> {
    check_m(m, cloud.len())?;
    let neighbors = knn(cloud, k)?;
    select_top(
        &pairwise_distance_sums(cloud, &neighbors)?,
        m,
        Direction::Lowest,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApesVariant {
    Local,
    Global,
}

/// Farthest point sampling to `2m`, then APES to `m` on that subset.
pub fn fps_then_apes(
    cloud: &PointCloud,
    features: &FeatureMatrix,
    m: usize,
    variant: ApesVariant,
    k: usize,
    proj: &ProjectionPair,
    start: FpsStart,
) -> Result<SampleSelection> {
    let n = cloud.len();
    if m == 0 || m.saturating_mul(2) > n {
        return Err(Error::MTooLarge { m, n });
    }
    validate(cloud, features)?;
    let pre = fps(cloud, 2 * m, start)?;
    let sub_cloud = cloud.gather(pre.indices());
    let sub_features = features.gather(pre.indices());
    let inner = match variant {
        ApesVariant::Local => apes_local(&sub_cloud, &sub_features, m, k, proj)?,
        ApesVariant::Global => apes_global(&sub_cloud, &sub_features, m, proj)?,
    };
    Ok(inner.lift(pre.indices()))
}

/// Size-controlled sampling methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Random,
    Fps,
    Idis,
    ApesLocal,
    ApesGlobal,
    FpsApesLocal,
    FpsApesGlobal,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Random,
        Method::Fps,
        Method::Idis,
        Method::ApesLocal,
        Method::ApesGlobal,
        Method::FpsApesLocal,
        Method::FpsApesGlobal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Random => "rs",
            Method::Fps => "fps",
            Method::Idis => "idis",
            Method::ApesLocal => "apes-local",
            Method::ApesGlobal => "apes-global",
            Method::FpsApesLocal => "fps+apes-local",
            Method::FpsApesGlobal => "fps+apes-global",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown sampling method `{s}`")))
    }
}

/// Parameters shared by all methods; each method reads the ones it needs.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub method: Method,
    pub k: usize,
    pub seed: u64,
    pub fps_start: FpsStart,
    pub proj: ProjectionPair,
}

impl SamplerConfig {
    /// Identity projections over `d_in`-dimensional features, `k = 32`.
    pub fn new(method: Method, d_in: usize) -> Result<Self> {
        Ok(Self {
            method,
            k: DEFAULT_K,
            seed: 0,
            fps_start: FpsStart::default(),
            proj: ProjectionPair::identity(d_in)?,
        })
    }
}

/// Runs `config.method` once, sampling `m` points.
pub fn sample(
    cloud: &PointCloud,
    features: &FeatureMatrix,
    m: usize,
    config: &SamplerConfig,
) -> Result<SampleSelection> {
    validate(cloud, features)?;
    let c = config;
    match c.method {
        Method::Random => random_sample(cloud, m, c.seed),
        Method::Fps => fps(cloud, m, c.fps_start),
        Method::Idis => idis(cloud, m, c.k),
        Method::ApesLocal => apes_local(cloud, features, m, c.k, &c.proj),
        Method::ApesGlobal => apes_global(cloud, features, m, &c.proj),
        Method::FpsApesLocal => fps_then_apes(
            cloud,
            features,
            m,
            ApesVariant::Local,
            c.k,
            &c.proj,
            c.fps_start,
        ),
        Method::FpsApesGlobal => fps_then_apes(
            cloud,
            features,
            m,
            ApesVariant::Global,
            c.k,
            &c.proj,
            c.fps_start,
        ),
    }
}

/// Per-point scores of a score-based method, or `None` for methods that do
/// not rank points (random, FPS and the composed pipelines).
pub fn method_scores(
    cloud: &PointCloud,
    features: &FeatureMatrix,
    config: &SamplerConfig,
) -> Result<Option<(ScoreVector, Direction)>> {
    Ok(match config.method {
        Method::ApesLocal => Some((
            apes_local_scores(cloud, features, config.k, &config.proj)?,
            Direction::Highest,
        )),
        Method::ApesGlobal => Some((
            apes_global_scores(cloud, features, &config.proj)?,
            Direction::Highest,
        )),
        Method::Idis => {
            validate(cloud, features)?;
            let nb = knn(cloud, config.k)?;
            Some((pairwise_distance_sums(cloud, &nb)?, Direction::Lowest))
        }
        _ => None,
    })
}

/// Applies the sampler stage by stage (`N → stages[0] → stages[1] → …`).
///
/// Each stage runs on the survivors of the previous one with gathered
/// features and freshly computed neighbors. Stage `s > 0` uses seed
/// `derive_seed(seed, s)` and starts FPS at the subset's first point.
/// Returned indices refer to the original cloud.
pub fn successive(
    cloud: &PointCloud,
    features: &FeatureMatrix,
    config: &SamplerConfig,
    stages: &[usize],
) -> Result<SampleSelection> {
    validate(cloud, features)?;
    if stages.is_empty() || stages.windows(2).any(|w| w[1] >= w[0]) || stages[stages.len() - 1] == 0
    {
        return Err(Error::NonDecreasingStages(stages.to_vec()));
    }
    check_m(stages[0], cloud.len())?;
    let mut survivors: Vec<usize> = (0..cloud.len()).collect();
    let mut sub_cloud = cloud.clone();
    let mut sub_features = features.clone();
    for (s, &m) in stages.iter().enumerate() {
        let mut stage_cfg = config.clone();
        if s > 0 {
            stage_cfg.seed = derive_seed(config.seed, s as u64);
            stage_cfg.fps_start = FpsStart::Index(0);
        }
        let picked = sample(&sub_cloud, &sub_features, m, &stage_cfg)?;
        survivors = picked.lift(&survivors).into_indices();
        sub_cloud = sub_cloud.gather(picked.indices());
        sub_features = sub_features.gather(picked.indices());
    }
    Ok(SampleSelection::from_raw(survivors))
}

/// |A ∩ B| / |A ∪ B| of two selections.
pub fn jaccard(a: &SampleSelection, b: &SampleSelection) -> f64 {
    let n = a
        .indices()
        .iter()
        .chain(b.indices())
        .max()
        .map_or(0, |&v| v + 1);
    let (ma, mb) = (a.mask(n), b.mask(n));
    let inter = ma.iter().zip(&mb).filter(|(x, y)| **x && **y).count();
    let union = ma.iter().zip(&mb).filter(|(x, y)| **x || **y).count();
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}
