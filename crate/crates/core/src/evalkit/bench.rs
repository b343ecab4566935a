//! Sampler comparison harness: metrics per (method, size, seed).

use std::io::Write;
use std::time::Instant;

use super::metrics::{chamfer, edge_recall, hausdorff};
use super::shapes::LabeledCloud;
use crate::error::{Error, Result};
use crate::samplers::{jaccard, sample, successive, FpsStart, Method, SamplerConfig};
use crate::types::{FeatureMatrix, ProjectionPair};

/// Sample sizes swept by default, for 1024-point inputs.
pub const DEFAULT_SIZES: [usize; 5] = [512, 256, 128, 64, 32];

pub const CSV_HEADER: &str = "method,size,seed,edge_recall,chamfer,hausdorff,ms";

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub k: usize,
    pub proj: ProjectionPair,
    pub fps_start: FpsStart,
    /// When false the `ms` column is written as 0 so reports are
    /// byte-reproducible.
    pub timing: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            k: crate::samplers::DEFAULT_K,
            proj: ProjectionPair::identity(3).expect("3x3 identity is valid"),
            fps_start: FpsStart::default(),
            timing: true,
        }
    }
}

/// One report line; metrics are means over the corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub size: usize,
    pub seed: u64,
    pub edge_recall: f64,
    pub chamfer: f64,
    pub hausdorff: f64,
    pub ms: f64,
}

/// Runs every method at every size and seed over the corpus. Features are
/// the raw coordinates. Rows come out in method, size, seed order.
pub fn bench(
    corpus: &[LabeledCloud],
    methods: &[Method],
    sizes: &[usize],
    seeds: &[u64],
    opts: &BenchOptions,
) -> Result<Vec<BenchRow>> {
    if methods.is_empty() {
        return Ok(Vec::new());
    }
    if corpus.is_empty() {
        return Err(Error::InvalidParameter("bench corpus is empty".into()));
    }
    let min_n = corpus.iter().map(|c| c.cloud.len()).min().unwrap_or(0);
    if let Some(&m) = sizes.iter().find(|&&m| m == 0 || m > min_n) {
        return Err(Error::MTooLarge { m, n: min_n });
    }
    let features: Vec<FeatureMatrix> = corpus
        .iter()
        .map(|c| FeatureMatrix::from_cloud(&c.cloud))
        .collect();
    let mut rows = Vec::with_capacity(methods.len() * sizes.len() * seeds.len());
    for &method in methods {
        for &size in sizes {
            for &seed in seeds {
                let cfg = SamplerConfig {
                    method,
                    k: opts.k,
                    seed,
                    fps_start: opts.fps_start,
                    proj: opts.proj.clone(),
                };
                let (mut rec, mut ch, mut hd, mut ms) = (0.0, 0.0, 0.0, 0.0);
                for (labeled, feats) in corpus.iter().zip(&features) {
                    let t0 = Instant::now();
                    let sel = sample(&labeled.cloud, feats, size, &cfg)?;
                    ms += t0.elapsed().as_secs_f64() * 1e3;
                    let sub = labeled.cloud.gather(sel.indices());
                    rec += edge_recall(&sel, labeled)?;
                    ch += chamfer(&sub, &labeled.cloud);
                    hd += hausdorff(&sub, &labeled.cloud);
                }
                let n = corpus.len() as f64;
                rows.push(BenchRow {
                    method,
                    size,
                    seed,
                    edge_recall: rec / n,
                    chamfer: ch / n,
                    hausdorff: hd / n,
                    ms: if opts.timing { ms / n } else { 0.0 },
                });
            }
        }
    }
    Ok(rows)
}

/// Writes the report as CSV with header [`CSV_HEADER`].
pub fn write_bench_csv<W: Write>(rows: &[BenchRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.3}",
            r.method, r.size, r.seed, r.edge_recall, r.chamfer, r.hausdorff, r.ms
        )?;
    }
    Ok(())
}

/// Overlap between successive (`N → half → quarter`) and direct
/// (`N → quarter`) sampling with the same configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapRow {
    pub method: Method,
    pub n: usize,
    pub half: usize,
    pub quarter: usize,
    pub jaccard: f64,
}

pub const OVERLAP_HEADER: &str = "method,n,half,quarter,jaccard";

pub fn successive_vs_direct(labeled: &LabeledCloud, config: &SamplerConfig) -> Result<OverlapRow> {
    let cloud = &labeled.cloud;
    let n = cloud.len();
    let (half, quarter) = (n / 2, n / 4);
    if quarter == 0 {
        return Err(Error::MTooLarge { m: quarter, n });
    }
    let features = FeatureMatrix::from_cloud(cloud);
    let staged = successive(cloud, &features, config, &[half, quarter])?;
    let direct = sample(cloud, &features, quarter, config)?;
    Ok(OverlapRow {
        method: config.method,
        n,
        half,
        quarter,
        jaccard: jaccard(&staged, &direct),
    })
}

pub fn write_overlap_csv<W: Write>(rows: &[OverlapRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{OVERLAP_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.method, r.n, r.half, r.quarter, r.jaccard
        )?;
    }
    Ok(())
}
