use std::fs;
use std::path::Path;

use apes_core::evalkit::{
    bench as run_bench, gen_cube, gen_cylinder, gen_sphere, successive_vs_direct, write_bench_csv,
    write_overlap_csv, BenchOptions, LabeledCloud,
};
use apes_core::image::{detect_edges, sigma_map, EdgeRule};
use apes_core::io;
use apes_core::samplers::{
    boundary_tied, grid_sample, method_scores, sample as run_sample, select_top, successive,
    FpsStart, Method, SamplerConfig,
};
use apes_core::{Error, FeatureMatrix, PointCloud};

use crate::{
    BenchArgs, CliError, CliResult, GenShapeArgs, ImageEdgeArgs, ModelArgs, SampleArgs, ScoreArgs,
    ScoreMethod, Shape,
};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|source| {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

fn load_inputs(input: &Path, model: &ModelArgs) -> CliResult<(PointCloud, FeatureMatrix)> {
    let cloud = io::read_cloud(input)?;
    let features = match &model.features {
        Some(p) => io::read_features(p)?,
        None => FeatureMatrix::from_cloud(&cloud),
    };
    if features.rows() != cloud.len() {
        return Err(Error::SizeMismatch {
            what: "feature rows vs points",
            expected: cloud.len(),
            got: features.rows(),
        }
        .into());
    }
    Ok((cloud, features))
}

fn config(method: Method, model: &ModelArgs, features: &FeatureMatrix) -> CliResult<SamplerConfig> {
    let mut cfg = SamplerConfig::new(method, features.dim())?;
    cfg.k = model.k;
    cfg.proj = io::read_weights(&model.weights, features.dim())?;
    Ok(cfg)
}

pub fn sample(a: &SampleArgs) -> CliResult<()> {
    let (cloud, features) = load_inputs(&a.input, &a.model)?;
    let selection = if a.method == "grid" {
        if a.m.is_some() || a.stages.is_some() {
            return Err(usage("grid takes --voxel, not --m or --stages"));
        }
        if a.out_scores.is_some() {
            return Err(usage("grid has no per-point scores"));
        }
        let voxel = a.voxel.ok_or_else(|| usage("grid requires --voxel"))?;
        grid_sample(&cloud, voxel)?
    } else {
        if a.voxel.is_some() {
            return Err(usage("--voxel applies only to grid"));
        }
        let method: Method = a.method.parse().map_err(|e: Error| usage(e.to_string()))?;
        let mut cfg = config(method, &a.model, &features)?;
        cfg.seed = a.seed;
        cfg.fps_start = match (a.start, a.start_seed) {
            (Some(i), _) => FpsStart::Index(i),
            (_, Some(s)) => FpsStart::Seeded(s),
            _ => FpsStart::default(),
        };
        let scores = method_scores(&cloud, &features, &cfg)?;
        if let Some(path) = &a.out_scores {
            let (s, _) = scores
                .as_ref()
                .ok_or_else(|| usage(format!("{method} has no per-point scores")))?;
            io::write_scores(path, s)?;
        }
        match (&a.stages, a.m) {
            (Some(stages), m) => {
                if m.is_some_and(|m| Some(&m) != stages.last()) {
                    return Err(usage("--m must equal the last of --stages"));
                }
                successive(&cloud, &features, &cfg, stages)?
            }
            (None, Some(m)) => match scores {
                Some((s, dir)) => {
                    if boundary_tied(&s, m, dir) {
                        eprintln!(
                            "warning: scores tie at the selection boundary; lower indices kept"
                        );
                    }
                    select_top(&s, m, dir)?
                }
                None => run_sample(&cloud, &features, m, &cfg)?,
            },
            (None, None) => return Err(usage("--m or --stages is required")),
        }
    };
    io::write_selection(&a.out, &selection)?;
    if let Some(path) = &a.out_cloud {
        io::write_cloud(path, &cloud.gather(selection.indices()))?;
    }
    Ok(())
}

pub fn score(a: &ScoreArgs) -> CliResult<()> {
    let (cloud, features) = load_inputs(&a.input, &a.model)?;
    let method = match a.method {
        ScoreMethod::ApesLocal => Method::ApesLocal,
        ScoreMethod::ApesGlobal => Method::ApesGlobal,
        ScoreMethod::Idis => Method::Idis,
    };
    let cfg = config(method, &a.model, &features)?;
    let (scores, _) = method_scores(&cloud, &features, &cfg)?.expect("score methods rank points");
    io::write_scores(&a.out, &scores)?;
    if let Some(path) = &a.out_ply {
        let colors = io::score_colors(scores.as_slice());
        io::write_ply(path, &cloud, Some(&colors))?;
    }
    Ok(())
}

fn generate(shape: Shape, n: usize, seed: u64, edge_eps: Option<f64>) -> CliResult<LabeledCloud> {
    Ok(match (shape, edge_eps) {
        (Shape::Sphere, None) => gen_sphere(n, seed)?,
        (Shape::Sphere, Some(_)) => return Err(usage("a sphere has no edges; drop --edge-eps")),
        (Shape::Cube, Some(eps)) => gen_cube(n, seed, eps)?,
        (Shape::Cylinder, Some(eps)) => gen_cylinder(n, seed, eps)?,
        (_, None) => return Err(usage("--edge-eps is required for cube and cylinder")),
    })
}

pub fn gen_shape(a: &GenShapeArgs) -> CliResult<()> {
    let shape = generate(a.shape, a.n, a.seed, a.edge_eps)?;
    io::write_cloud(&a.out, &shape.cloud)?;
    if let Some(path) = &a.out_mask {
        io::write_mask(path, &shape.edge_mask)?;
    }
    Ok(())
}

pub fn bench(a: &BenchArgs) -> CliResult<()> {
    let methods = a
        .methods
        .iter()
        .map(|m| m.parse::<Method>().map_err(|e| usage(e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    let corpus = if !a.shapes.is_empty() {
        let n = a.n.ok_or_else(|| usage("--shapes requires --n"))?;
        a.shapes
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let eps = if s == Shape::Sphere { None } else { a.edge_eps };
                generate(s, n, a.shape_seed.wrapping_add(i as u64), eps)
            })
            .collect::<CliResult<Vec<_>>>()?
    } else {
        if a.input.is_empty() {
            return Err(usage("bench needs --shapes or --in"));
        }
        if a.input.len() != a.mask.len() {
            return Err(usage("each --in needs a matching --mask"));
        }
        a.input
            .iter()
            .zip(&a.mask)
            .map(|(c, m)| {
                Ok(LabeledCloud::new(
                    io::read_cloud(c)?,
                    io::read_mask(m)?,
                    0.0,
                )?)
            })
            .collect::<CliResult<Vec<_>>>()?
    };
    let opts = BenchOptions {
        k: a.k,
        proj: io::read_weights(&a.weights, 3)?,
        fps_start: FpsStart::default(),
        timing: !a.no_timing,
    };
    let rows = run_bench(&corpus, &methods, &a.sizes, &a.seeds, &opts)?;
    let mut buf = Vec::new();
    write_bench_csv(&rows, &mut buf).expect("write to memory");
    write_file(&a.out, &buf)?;

    if let Some(path) = &a.overlap_out {
        let mut overlap = Vec::new();
        for &method in &methods {
            for labeled in &corpus {
                let cfg = SamplerConfig {
                    method,
                    k: opts.k,
                    seed: a.seeds.first().copied().unwrap_or(0),
                    fps_start: opts.fps_start,
                    proj: opts.proj.clone(),
                };
                let row = successive_vs_direct(labeled, &cfg)?;
                if method == Method::ApesLocal && row.jaccard < 0.5 {
                    eprintln!("warning: apes-local overlap {} is below 0.5", row.jaccard);
                }
                overlap.push(row);
            }
        }
        let mut buf = Vec::new();
        write_overlap_csv(&overlap, &mut buf).expect("write to memory");
        write_file(path, &buf)?;
    }
    Ok(())
}

pub fn image_edge(a: &ImageEdgeArgs) -> CliResult<()> {
    let img = io::read_pgm(&a.input)?;
    let rule = match (a.top, a.threshold) {
        (Some(f), None) => EdgeRule::TopFraction(f),
        (None, Some(t)) => EdgeRule::Threshold(t),
        _ => unreachable!("clap enforces exactly one rule"),
    };
    if let Some(path) = &a.out_sigma {
        io::write_sigma_pgm(path, &sigma_map(&img, a.patch)?)?;
    }
    io::write_pbm(&a.out, &detect_edges(&img, a.patch, rule)?)?;
    Ok(())
}
