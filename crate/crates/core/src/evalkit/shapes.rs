//! Synthetic shapes with analytic edge labels.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::types::{Point3, PointCloud};

/// A cloud together with a per-point edge mask.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCloud {
    pub cloud: PointCloud,
    pub edge_mask: Vec<bool>,
    /// Threshold used to produce the mask: a distance for the analytic
    /// shapes, a surface-variation level for curvature labels.
    pub edge_eps: f64,
}

impl LabeledCloud {
    pub fn new(cloud: PointCloud, edge_mask: Vec<bool>, edge_eps: f64) -> Result<Self> {
        if edge_mask.len() != cloud.len() {
            return Err(Error::SizeMismatch {
                what: "edge mask length",
                expected: cloud.len(),
                got: edge_mask.len(),
            });
        }
        Ok(Self {
            cloud,
            edge_mask,
            edge_eps,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edge_mask.iter().filter(|&&e| e).count()
    }

    pub fn edge_fraction(&self) -> f64 {
        self.edge_count() as f64 / self.edge_mask.len() as f64
    }
}

fn check_eps(edge_eps: f64) -> Result<()> {
    if !(edge_eps.is_finite() && edge_eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "edge_eps must be positive, got {edge_eps}"
        )));
    }
    Ok(())
}

/// Distance from a point on the surface of the cube `[-½, ½]³` to the
/// nearest of its 12 edges.
pub fn cube_edge_distance(p: &Point3) -> f64 {
    (0..3)
        .map(|along| {
            let (b, c) = ((along + 1) % 3, (along + 2) % 3);
            let db = p[b].abs() - 0.5;
            let dc = p[c].abs() - 0.5;
            (db * db + dc * dc).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `n` points uniform on the surface of the axis-aligned unit cube centered
/// at the origin. A point is an edge point when it lies closer than
/// `edge_eps` to one of the 12 edges.
pub fn gen_cube(n: usize, seed: u64, edge_eps: f64) -> Result<LabeledCloud> {
    if n < 8 {
        return Err(Error::InvalidParameter(format!(
            "cube needs n >= 8, got {n}"
        )));
    }
    check_eps(edge_eps)?;
    let mut rng = SeededRng::new(seed);
    let points: Vec<Point3> = (0..n)
        .map(|_| {
            // All six faces have equal area, so a uniform face choice is
            // area-weighted.
            let face = rng.below(6);
            let axis = face / 2;
            let side = if face.is_multiple_of(2) { -0.5 } else { 0.5 };
            let u = rng.uniform() - 0.5;
            let v = rng.uniform() - 0.5;
            let mut p = [0.0; 3];
            p[axis] = side;
            p[(axis + 1) % 3] = u;
            p[(axis + 2) % 3] = v;
            p
        })
        .collect();
    let mask = points
        .iter()
        .map(|p| cube_edge_distance(p) < edge_eps)
        .collect();
    LabeledCloud::new(PointCloud::new(points)?, mask, edge_eps)
}

/// `n` points uniform on the unit sphere; the mask is all false.
pub fn gen_sphere(n: usize, seed: u64) -> Result<LabeledCloud> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "sphere needs n >= 4, got {n}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let points: Vec<Point3> = (0..n)
        .map(|_| {
            let z = 2.0 * rng.uniform() - 1.0;
            let phi = TAU * rng.uniform();
            let r = (1.0 - z * z).max(0.0).sqrt();
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect();
    LabeledCloud::new(PointCloud::new_normalized(points)?, vec![false; n], 0.0)
}

pub const CYLINDER_RADIUS: f64 = 0.5;
pub const CYLINDER_HALF_HEIGHT: f64 = 0.5;

/// Distance from a point to the nearer of the closed cylinder's two rim
/// circles.
pub fn cylinder_rim_distance(p: &Point3) -> f64 {
    let rho = p[0].hypot(p[1]);
    let dr = rho - CYLINDER_RADIUS;
    let dz = p[2].abs() - CYLINDER_HALF_HEIGHT;
    (dr * dr + dz * dz).sqrt()
}

/// `n` points uniform on a closed cylinder (radius ½, height 1, axis z,
/// centered at the origin), lateral surface and caps chosen by area. Edge
/// points lie within `edge_eps` of a rim circle.
pub fn gen_cylinder(n: usize, seed: u64, edge_eps: f64) -> Result<LabeledCloud> {
    if n < 8 {
        return Err(Error::InvalidParameter(format!(
            "cylinder needs n >= 8, got {n}"
        )));
    }
    check_eps(edge_eps)?;
    let (r, h) = (CYLINDER_RADIUS, CYLINDER_HALF_HEIGHT);
    let lateral = TAU * r * 2.0 * h;
    let cap = PI * r * r;
    let total = lateral + 2.0 * cap;
    let mut rng = SeededRng::new(seed);
    let points: Vec<Point3> = (0..n)
        .map(|_| {
            let pick = rng.uniform() * total;
            let phi = TAU * rng.uniform();
            let t = rng.uniform();
            if pick < lateral {
                [r * phi.cos(), r * phi.sin(), (2.0 * t - 1.0) * h]
            } else {
                let rho = r * t.sqrt();
                let z = if pick < lateral + cap { -h } else { h };
                [rho * phi.cos(), rho * phi.sin(), z]
            }
        })
        .collect();
    let mask = points
        .iter()
        .map(|p| cylinder_rim_distance(p) < edge_eps)
        .collect();
    LabeledCloud::new(PointCloud::new(points)?, mask, edge_eps)
}
