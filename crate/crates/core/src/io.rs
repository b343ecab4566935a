//! Readers and writers for clouds, features, weights, scores, selections
//! and images.
//!
//! Formats:
//!
//! - XYZ: one point per line, three whitespace-separated numbers; blank
//!   lines and lines starting with `#` are ignored.
//! - Features: like XYZ but with any fixed number of columns.
//! - PLY: ASCII 1.0 only, `vertex` element with `x`, `y`, `z`; other
//!   elements and properties are skipped on read. The writer can attach
//!   `uchar red/green/blue` per vertex.
//! - Weights: JSON `{"d_in": .., "d": .., "wq": [..], "wk": [..]}` with
//!   row-major `d_in x d` matrices, or one of the literals `identity` and
//!   `seeded_gaussian:<seed>:<d>`.
//! - Scores: CSV `index,score`. Selections and masks: one integer per line.
//! - Images: PGM `P2`/`P5` in; PGM `P5` and PBM `P1` out.
//!
//! Floats are written as 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{EdgeMap, GrayImage, SigmaMap};
use crate::types::{FeatureMatrix, PointCloud, ProjectionPair, SampleSelection, ScoreVector};

/// Lossless decimal form of an `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_finite(tok: &str, path: &Path, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(path, line, format!("invalid number `{tok}`")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite value `{tok}`")));
    }
    Ok(v)
}

/// Parses whitespace-separated numeric rows, skipping blanks and comments.
/// With `width = None` the first data row fixes the width.
fn parse_table(text: &str, path: &Path, width: Option<usize>) -> Result<(Vec<f64>, usize, usize)> {
    let mut data = Vec::new();
    let mut cols = width;
    let mut rows = 0;
    for (no, line) in text.lines().enumerate() {
        let line_no = no + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let before = data.len();
        for tok in t.split_whitespace() {
            data.push(parse_finite(tok, path, line_no)?);
        }
        let got = data.len() - before;
        match cols {
            Some(c) if c != got => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {c} fields, found {got}"),
                ))
            }
            None => cols = Some(got),
            _ => {}
        }
        rows += 1;
    }
    Ok((data, rows, cols.unwrap_or(0)))
}

pub fn parse_xyz(text: &str, path: &Path) -> Result<PointCloud> {
    let (data, rows, _) = parse_table(text, path, Some(3))?;
    if rows == 0 {
        return Err(parse_err(path, 0, "no points"));
    }
    PointCloud::new(data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect())
}

pub fn read_xyz(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    parse_xyz(&read_text(path)?, path)
}

pub fn format_xyz(cloud: &PointCloud) -> String {
    let mut s = String::new();
    for p in cloud.points() {
        let _ = writeln!(s, "{} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2]));
    }
    s
}

pub fn write_xyz(path: impl AsRef<Path>, cloud: &PointCloud) -> Result<()> {
    write_bytes(path.as_ref(), format_xyz(cloud).as_bytes())
}

pub fn read_features(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let (data, rows, cols) = parse_table(&read_text(path)?, path, None)?;
    if rows == 0 {
        return Err(parse_err(path, 0, "no feature rows"));
    }
    FeatureMatrix::new(data, rows, cols)
}

pub fn write_features(path: impl AsRef<Path>, features: &FeatureMatrix) -> Result<()> {
    let mut s = String::new();
    for i in 0..features.rows() {
        let row: Vec<String> = features.row(i).iter().map(|&v| fmt_f64(v)).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    write_bytes(path.as_ref(), s.as_bytes())
}

struct PlyElement {
    name: String,
    count: usize,
    props: Vec<String>,
}

pub fn parse_ply(text: &str, path: &Path) -> Result<PointCloud> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "ply")) => {}
        _ => return Err(parse_err(path, 1, "missing `ply` magic")),
    }
    let mut elements: Vec<PlyElement> = Vec::new();
    let mut header_done = false;
    for (no, line) in lines.by_ref() {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("format") => {
                let kind = toks.next().unwrap_or("");
                if kind != "ascii" {
                    return Err(Error::UnsupportedFormat(format!(
                        "PLY format `{kind}` (only ascii is supported)"
                    )));
                }
                if toks.next() != Some("1.0") {
                    return Err(parse_err(path, no, "unsupported PLY version"));
                }
            }
            Some("comment") | Some("obj_info") | None => {}
            Some("element") => {
                let name = toks
                    .next()
                    .ok_or_else(|| parse_err(path, no, "element without name"))?;
                let count = toks
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| parse_err(path, no, "element without valid count"))?;
                elements.push(PlyElement {
                    name: name.to_string(),
                    count,
                    props: Vec::new(),
                });
            }
            Some("property") => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(path, no, "property before element"))?;
                let last = line.split_whitespace().last().unwrap_or("");
                el.props.push(last.to_string());
            }
            Some("end_header") => {
                header_done = true;
                break;
            }
            Some(other) => {
                return Err(parse_err(
                    path,
                    no,
                    format!("unknown header keyword `{other}`"),
                ))
            }
        }
    }
    if !header_done {
        return Err(parse_err(path, 0, "missing end_header"));
    }
    let mut points = Vec::new();
    for el in &elements {
        let axes = if el.name == "vertex" {
            let find = |n: &str| el.props.iter().position(|p| p == n);
            match (find("x"), find("y"), find("z")) {
                (Some(x), Some(y), Some(z)) => Some([x, y, z]),
                _ => return Err(parse_err(path, 0, "vertex element lacks x/y/z")),
            }
        } else {
            None
        };
        for _ in 0..el.count {
            let (no, line) = lines
                .next()
                .ok_or_else(|| parse_err(path, 0, format!("truncated `{}` data", el.name)))?;
            if let Some(axes) = axes {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() < el.props.len() {
                    return Err(parse_err(path, no, "too few vertex fields"));
                }
                let mut p = [0.0; 3];
                for (dst, &col) in p.iter_mut().zip(&axes) {
                    *dst = parse_finite(toks[col], path, no)?;
                }
                points.push(p);
            }
        }
    }
    if points.is_empty() {
        return Err(parse_err(path, 0, "no vertices"));
    }
    PointCloud::new(points)
}

pub fn read_ply(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    // Binary bodies are not UTF-8; check the header before decoding.
    let head = String::from_utf8_lossy(&bytes[..bytes.len().min(512)]);
    if head.lines().any(|l| l.trim().starts_with("format binary")) {
        return Err(Error::UnsupportedFormat("binary PLY".into()));
    }
    let text =
        String::from_utf8(bytes).map_err(|_| parse_err(path, 0, "PLY is not valid UTF-8 text"))?;
    parse_ply(&text, path)
}

pub fn format_ply(cloud: &PointCloud, colors: Option<&[[u8; 3]]>) -> Result<String> {
    if let Some(c) = colors {
        if c.len() != cloud.len() {
            return Err(Error::SizeMismatch {
                what: "vertex colors",
                expected: cloud.len(),
                got: c.len(),
            });
        }
    }
    let mut s = String::new();
    let _ = write!(
        s,
        "ply\nformat ascii 1.0\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\n",
        cloud.len()
    );
    if colors.is_some() {
        s.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    }
    s.push_str("end_header\n");
    for (i, p) in cloud.points().iter().enumerate() {
        let _ = write!(s, "{} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2]));
        if let Some(c) = colors {
            let [r, g, b] = c[i];
            let _ = write!(s, " {r} {g} {b}");
        }
        s.push('\n');
    }
    Ok(s)
}

pub fn write_ply(
    path: impl AsRef<Path>,
    cloud: &PointCloud,
    colors: Option<&[[u8; 3]]>,
) -> Result<()> {
    write_bytes(path.as_ref(), format_ply(cloud, colors)?.as_bytes())
}

/// Reads `.ply` files as PLY and everything else as XYZ.
pub fn read_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    if has_ext(path, "ply") {
        read_ply(path)
    } else {
        read_xyz(path)
    }
}

pub fn write_cloud(path: impl AsRef<Path>, cloud: &PointCloud) -> Result<()> {
    let path = path.as_ref();
    if has_ext(path, "ply") {
        write_ply(path, cloud, None)
    } else {
        write_xyz(path, cloud)
    }
}

fn has_ext(path: &Path, ext: &str) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

/// Linear blue-to-red ramp: the minimum score maps to (0, 0, 255), the
/// maximum to (255, 0, 0). Channels use round-half-up. Constant scores map
/// to blue.
pub fn score_colors(scores: &[f64]) -> Vec<[u8; 3]> {
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    scores
        .iter()
        .map(|&s| {
            let t = if span > 0.0 { (s - lo) / span } else { 0.0 };
            let r = round_half_up(255.0 * t);
            [r, 0, 255 - r]
        })
        .collect()
}

fn round_half_up(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

#[derive(Debug, Serialize, Deserialize)]
struct WeightsDoc {
    d_in: usize,
    d: usize,
    wq: Vec<f64>,
    wk: Vec<f64>,
}

/// Where projection weights come from.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSource {
    Identity,
    SeededGaussian { seed: u64, d: usize },
    File(PathBuf),
}

impl WeightSource {
    pub fn parse(spec: &str) -> Result<Self> {
        if spec == "identity" {
            return Ok(Self::Identity);
        }
        if let Some(rest) = spec.strip_prefix("seeded_gaussian:") {
            let bad = || {
                Error::InvalidParameter(format!(
                    "expected seeded_gaussian:<seed>:<d>, got `{spec}`"
                ))
            };
            let (seed, d) = rest.split_once(':').ok_or_else(bad)?;
            return Ok(Self::SeededGaussian {
                seed: seed.parse().map_err(|_| bad())?,
                d: d.parse().map_err(|_| bad())?,
            });
        }
        Ok(Self::File(PathBuf::from(spec)))
    }

    /// Builds the projections for `d_in`-dimensional features.
    pub fn resolve(&self, d_in: usize) -> Result<ProjectionPair> {
        match self {
            Self::Identity => ProjectionPair::identity(d_in),
            Self::SeededGaussian { seed, d } => ProjectionPair::seeded_gaussian(*seed, d_in, *d),
            Self::File(path) => {
                let proj = parse_weights_json(&read_text(path)?, path)?;
                if proj.d_in() != d_in {
                    return Err(Error::DimensionMismatch(format!(
                        "weights expect d_in = {}, features have {d_in}",
                        proj.d_in()
                    )));
                }
                Ok(proj)
            }
        }
    }
}

pub fn parse_weights_json(text: &str, path: &Path) -> Result<ProjectionPair> {
    let doc: WeightsDoc =
        serde_json::from_str(text).map_err(|e| parse_err(path, e.line(), e.to_string()))?;
    ProjectionPair::new(doc.wq, doc.wk, doc.d_in, doc.d)
}

/// Resolves a weights argument (literal or file path) for `d_in` inputs.
pub fn read_weights(spec: &str, d_in: usize) -> Result<ProjectionPair> {
    WeightSource::parse(spec)?.resolve(d_in)
}

pub fn write_weights(path: impl AsRef<Path>, proj: &ProjectionPair) -> Result<()> {
    let doc = WeightsDoc {
        d_in: proj.d_in(),
        d: proj.d(),
        wq: proj.wq().to_vec(),
        wk: proj.wk().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("weights serialize");
    s.push('\n');
    write_bytes(path.as_ref(), s.as_bytes())
}

pub fn format_scores(scores: &ScoreVector) -> String {
    let mut s = String::from("index,score\n");
    for (i, v) in scores.as_slice().iter().enumerate() {
        let _ = writeln!(s, "{i},{}", fmt_f64(*v));
    }
    s
}

pub fn write_scores(path: impl AsRef<Path>, scores: &ScoreVector) -> Result<()> {
    write_bytes(path.as_ref(), format_scores(scores).as_bytes())
}

pub fn format_indices(indices: &[usize]) -> String {
    let mut s = String::new();
    for i in indices {
        let _ = writeln!(s, "{i}");
    }
    s
}

pub fn write_selection(path: impl AsRef<Path>, selection: &SampleSelection) -> Result<()> {
    write_bytes(
        path.as_ref(),
        format_indices(selection.indices()).as_bytes(),
    )
}

fn parse_uints(text: &str, path: &Path) -> Result<Vec<usize>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(no, l)| {
            l.trim()
                .parse()
                .map_err(|_| parse_err(path, no + 1, format!("invalid index `{}`", l.trim())))
        })
        .collect()
}

/// Reads a selection file; `n` is the size of the cloud it refers to.
pub fn read_selection(path: impl AsRef<Path>, n: usize) -> Result<SampleSelection> {
    let path = path.as_ref();
    SampleSelection::new(parse_uints(&read_text(path)?, path)?, n)
}

pub fn write_mask(path: impl AsRef<Path>, mask: &[bool]) -> Result<()> {
    let s: String = mask
        .iter()
        .map(|&b| if b { "1\n" } else { "0\n" })
        .collect();
    write_bytes(path.as_ref(), s.as_bytes())
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<Vec<bool>> {
    let path = path.as_ref();
    parse_uints(&read_text(path)?, path)?
        .into_iter()
        .enumerate()
        .map(|(i, v)| match v {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(parse_err(path, i + 1, "mask entries must be 0 or 1")),
        })
        .collect()
}

/// Splits a PNM header into tokens, honoring `#` comments. Returns the
/// tokens and the byte offset just past the whitespace byte that follows
/// the last one.
fn pnm_header(bytes: &[u8], want: usize) -> Option<(Vec<String>, usize)> {
    let mut toks = Vec::new();
    let mut i = 0;
    while toks.len() < want {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'#' {
            i += 1;
        }
        if start == i {
            return None;
        }
        toks.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
    }
    Some((toks, i + 1))
}

pub fn parse_pgm(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let (head, offset) =
        pnm_header(bytes, 4).ok_or_else(|| parse_err(path, 1, "truncated PGM header"))?;
    let num = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| parse_err(path, 1, format!("invalid header field `{s}`")))
    };
    let (w, h, maxval) = (num(&head[1])?, num(&head[2])?, num(&head[3])?);
    if maxval == 0 || maxval > 65535 {
        return Err(parse_err(path, 1, format!("invalid maxval {maxval}")));
    }
    let count = w * h;
    let raw: Vec<usize> = match head[0].as_str() {
        "P2" => {
            let body = String::from_utf8_lossy(bytes.get(offset.min(bytes.len())..).unwrap_or(&[]));
            let vals: Vec<usize> = body
                .split_whitespace()
                .take(count)
                .map(num)
                .collect::<Result<_>>()?;
            vals
        }
        "P5" => {
            let body = bytes.get(offset..).unwrap_or(&[]);
            if maxval < 256 {
                body.iter().take(count).map(|&b| b as usize).collect()
            } else {
                body.chunks_exact(2)
                    .take(count)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]) as usize)
                    .collect()
            }
        }
        other => return Err(Error::UnsupportedFormat(format!("PNM magic `{other}`"))),
    };
    if raw.len() != count {
        return Err(parse_err(
            path,
            0,
            format!("expected {count} pixels, found {}", raw.len()),
        ));
    }
    if let Some(v) = raw.iter().find(|&&v| v > maxval) {
        return Err(parse_err(
            path,
            0,
            format!("pixel value {v} exceeds maxval {maxval}"),
        ));
    }
    let m = maxval as f64;
    GrayImage::new(h, w, raw.into_iter().map(|v| v as f64 / m).collect())
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_pgm(&bytes, path)
}

fn p5(height: usize, width: usize, pixels: impl Iterator<Item = u8>) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(pixels);
    out
}

/// 8-bit binary PGM of an image, intensities scaled by 255 (round half up).
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    p5(
        img.height(),
        img.width(),
        img.as_slice().iter().map(|&v| round_half_up(v * 255.0)),
    )
}

pub fn write_pgm(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    write_bytes(path.as_ref(), &encode_pgm(img))
}

/// 8-bit binary PGM of a σ map rescaled so the largest σ is 255 (round
/// half up); an all-zero map stays black.
pub fn encode_sigma_pgm(sigma: &SigmaMap) -> Vec<u8> {
    let hi = sigma.values.iter().copied().fold(0.0, f64::max);
    let scale = if hi > 0.0 { 255.0 / hi } else { 0.0 };
    p5(
        sigma.height,
        sigma.width,
        sigma.values.iter().map(|&v| round_half_up(v * scale)),
    )
}

pub fn write_sigma_pgm(path: impl AsRef<Path>, sigma: &SigmaMap) -> Result<()> {
    write_bytes(path.as_ref(), &encode_sigma_pgm(sigma))
}

/// Plain PBM (`P1`); `1` marks an edge pixel.
pub fn encode_pbm(edges: &EdgeMap) -> String {
    let mut s = format!("P1\n{} {}\n", edges.width, edges.height);
    for row in edges.mask.chunks(edges.width) {
        let line: Vec<&str> = row.iter().map(|&e| if e { "1" } else { "0" }).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn write_pbm(path: impl AsRef<Path>, edges: &EdgeMap) -> Result<()> {
    write_bytes(path.as_ref(), encode_pbm(edges).as_bytes())
}
