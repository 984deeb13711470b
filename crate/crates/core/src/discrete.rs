//! Polygonal curves and their discrete bending energy.
//!
//! The discrete curvature at vertex `i` is the turning angle over the dual
//! edge length, `κᵢ = 2θᵢ/(ℓᵢ₋₁ + ℓᵢ)`, so that
//! `B = Σ κᵢ² (ℓᵢ₋₁ + ℓᵢ)/2 = Σ 2θᵢ²/(ℓᵢ₋₁ + ℓᵢ)`. Endpoints of open curves
//! carry no curvature. A regular `N`-gon has `B̄ = L·B = 4π²` exactly.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::curves::{varpi_star, RigidMotion};
use crate::{Error, Point, Result};

/// Ordered vertices in `R²` (stored with `z = 0`) or `R³`, open or closed.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    vertices: Vec<Point>,
    closed: bool,
    dim: usize,
}

/// Length, bending energy, normalized energy and total curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    pub length: f64,
    pub bending: f64,
    pub bbar: f64,
    pub total_curvature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FenchelReport {
    pub bbar: f64,
    pub total_curvature: f64,
    pub pass: bool,
}

/// A point visited `r` times, with one arclength witness per visit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityReport {
    pub point: [f64; 3],
    pub r: usize,
    pub witnesses: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiYauReport {
    pub r: usize,
    #[serde(rename = "Bbar")]
    pub bbar: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub slack: f64,
    /// False when `r < 2`; the bound is then the closed-curve floor `4π²`.
    pub applicable: bool,
}

/// Default multiplicity radius as a fraction of the curve length.
pub const DEFAULT_EPS_FRACTION: f64 = 1e-3;
/// Relative discretization allowance in [`DiscreteCurve::liyau_check`].
pub const DEFAULT_TOL_DISC: f64 = 0.01;

pub(crate) fn turning_angle(a: &Point, b: &Point) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

impl DiscreteCurve {
    /// Builds a curve; `dim = 2` requires every `z` to be zero.
    pub fn new(vertices: Vec<Point>, closed: bool, dim: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::domain(format!("curve dimension must be 2 or 3, got {dim}")));
        }
        if vertices.len() < 3 {
            return Err(Error::domain(format!("a curve needs at least 3 vertices, got {}", vertices.len())));
        }
        if vertices.iter().any(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::domain("curve vertices must be finite"));
        }
        if dim == 2 && vertices.iter().any(|p| p.z != 0.0) {
            return Err(Error::domain("planar curve has a nonzero z coordinate"));
        }
        let curve = Self { vertices, closed, dim };
        if let Some(i) = curve.edge_lengths().iter().position(|&l| l == 0.0) {
            return Err(Error::domain(format!("edge {i} has zero length")));
        }
        Ok(curve)
    }

    /// Planar curve from `(x, y)` pairs.
    pub fn planar(points: &[[f64; 2]], closed: bool) -> Result<Self> {
        Self::new(points.iter().map(|p| Point::new(p[0], p[1], 0.0)).collect(), closed, 2)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge vectors, including the closing edge of a closed curve.
    pub fn edges(&self) -> Vec<Point> {
        let n = self.vertices.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(|i| self.vertices[(i + 1) % n] - self.vertices[i]).collect()
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges().iter().map(|e| e.norm()).collect()
    }

    pub fn length(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    /// Arclength at each vertex, starting from 0.
    pub fn arclength_params(&self) -> Vec<f64> {
        let mut s = Vec::with_capacity(self.vertices.len());
        let mut acc = 0.0;
        s.push(0.0);
        for l in self.edge_lengths().iter().take(self.vertices.len() - 1) {
            acc += l;
            s.push(acc);
        }
        s
    }

    /// Unsigned turning angle at every vertex (zero at open endpoints).
    pub fn turning_angles(&self) -> Vec<f64> {
        self.vertex_stencil(turning_angle).0
    }

    /// Signed turning angle at every vertex; planar curves only.
    pub fn signed_turning_angles(&self) -> Result<Vec<f64>> {
        if self.dim != 2 {
            return Err(Error::domain("signed turning angles need a planar curve"));
        }
        Ok(self.vertex_stencil(|a, b| a.cross(b).z.atan2(a.dot(b))).0)
    }

    /// Applies `f(e_prev, e_next)` at each vertex and also returns the dual
    /// lengths `ℓᵢ₋₁ + ℓᵢ` (zero at open endpoints).
    fn vertex_stencil(&self, f: impl Fn(&Point, &Point) -> f64) -> (Vec<f64>, Vec<f64>) {
        let edges = self.edges();
        let n = self.vertices.len();
        let mut angles = vec![0.0; n];
        let mut duals = vec![0.0; n];
        for i in 0..n {
            let (prev, next) = if self.closed {
                ((i + n - 1) % n, i)
            } else if i == 0 || i == n - 1 {
                continue;
            } else {
                (i - 1, i)
            };
            angles[i] = f(&edges[prev], &edges[next]);
            duals[i] = edges[prev].norm() + edges[next].norm();
        }
        (angles, duals)
    }

    /// Discrete curvature magnitudes `2θᵢ/(ℓᵢ₋₁ + ℓᵢ)`.
    pub fn curvatures(&self) -> Vec<f64> {
        let (theta, dual) = self.vertex_stencil(turning_angle);
        theta.iter().zip(&dual).map(|(t, d)| if *d > 0.0 { 2.0 * t / d } else { 0.0 }).collect()
    }

    /// Signed discrete curvatures of a planar curve.
    pub fn signed_curvatures(&self) -> Result<Vec<f64>> {
        if self.dim != 2 {
            return Err(Error::domain("signed curvature needs a planar curve"));
        }
        let (theta, dual) = self.vertex_stencil(|a, b| a.cross(b).z.atan2(a.dot(b)));
        Ok(theta.iter().zip(&dual).map(|(t, d)| if *d > 0.0 { 2.0 * t / d } else { 0.0 }).collect())
    }

    pub fn bending_energy(&self) -> f64 {
        let (theta, dual) = self.vertex_stencil(turning_angle);
        theta.iter().zip(&dual).filter(|(_, d)| **d > 0.0).map(|(t, d)| 2.0 * t * t / d).sum()
    }

    pub fn total_curvature(&self) -> f64 {
        self.turning_angles().iter().sum()
    }

    pub fn normalized_energy(&self) -> EnergyReport {
        let length = self.length();
        let bending = self.bending_energy();
        EnergyReport { length, bending, bbar: length * bending, total_curvature: self.total_curvature() }
    }

    /// Checks `B̄ ≥ TC² ≥ 4π²` up to `tol` (absolute, on `B̄` and on `TC`).
    pub fn fenchel_floor_check(&self, tol: f64) -> Result<FenchelReport> {
        if !self.closed {
            return Err(Error::domain("the closed-curve energy floor needs a closed curve"));
        }
        let r = self.normalized_energy();
        let tc = r.total_curvature;
        let pass = r.bbar >= tc * tc - tol && tc >= 2.0 * PI - tol;
        Ok(FenchelReport { bbar: r.bbar, total_curvature: tc, pass })
    }

    /// Resamples at equal arclength along the polyline: `n` vertices for a
    /// closed curve, `n + 1` (both ends kept) for an open one.
    pub fn resample_arclength(&self, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("resampling needs n >= 3, got {n}")));
        }
        let edges = self.edges();
        let lengths: Vec<f64> = edges.iter().map(|e| e.norm()).collect();
        let total: f64 = lengths.iter().sum();
        let count = if self.closed { n } else { n + 1 };
        let mut out = Vec::with_capacity(count);
        let mut seg = 0;
        let mut seg_start = 0.0;
        for k in 0..count {
            if !self.closed && k == n {
                out.push(*self.vertices.last().unwrap());
                break;
            }
            let target = total * k as f64 / n as f64;
            while seg + 1 < lengths.len() && seg_start + lengths[seg] < target {
                seg_start += lengths[seg];
                seg += 1;
            }
            let t = ((target - seg_start) / lengths[seg]).clamp(0.0, 1.0);
            out.push(self.vertices[seg] + edges[seg] * t);
        }
        Self::new(out, self.closed, self.dim)
    }

    /// Finds the point visited most often. Each vertex defines a ball of
    /// radius `eps`; the vertices inside it are split into visits wherever
    /// consecutive members are more than `3·eps` apart in arclength
    /// (cyclically for closed curves). The ball with the most visits wins and
    /// its member centroid is reported.
    pub fn detect_multiplicity(&self, eps: f64) -> Result<MultiplicityReport> {
        if !(eps > 0.0) {
            return Err(Error::domain(format!("multiplicity radius must be positive, got {eps}")));
        }
        let s = self.arclength_params();
        let total = self.length();
        let cell = |p: &Point| ((p.x / eps).floor() as i64, (p.y / eps).floor() as i64, (p.z / eps).floor() as i64);
        let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in self.vertices.iter().enumerate() {
            grid.entry(cell(p)).or_default().push(i);
        }
        let gap = 3.0 * eps;
        let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
        let mut members = Vec::new();
        for center in &self.vertices {
            members.clear();
            let (cx, cy, cz) = cell(center);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(ids) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                            members.extend(ids.iter().filter(|&&j| (self.vertices[j] - center).norm() <= eps));
                        }
                    }
                }
            }
            members.sort_unstable();
            // index into `members` where each visit starts
            let mut starts = vec![0];
            for w in 1..members.len() {
                if s[members[w]] - s[members[w - 1]] > gap {
                    starts.push(w);
                }
            }
            if self.closed && starts.len() > 1 {
                let wrap = s[members[0]] + total - s[*members.last().unwrap()];
                if wrap <= gap {
                    starts.remove(0);
                }
            }
            let r = starts.len();
            if best.as_ref().is_none_or(|(br, _, _)| r > *br) {
                best = Some((r, members.clone(), starts));
            }
        }
        let (r, members, starts) = best.expect("curve has vertices");
        let centroid = members.iter().map(|&j| self.vertices[j]).sum::<Point>() / members.len() as f64;
        let mut witnesses: Vec<f64> = (0..starts.len())
            .map(|v| {
                let lo = starts[v];
                let hi = if v + 1 < starts.len() { starts[v + 1] } else { members.len() };
                let mut visit: Vec<usize> = members[lo..hi].to_vec();
                if v + 1 == starts.len() && starts[0] > 0 {
                    visit.extend_from_slice(&members[..starts[0]]);
                }
                let j = *visit
                    .iter()
                    .min_by(|&&a, &&b| {
                        (self.vertices[a] - centroid).norm().total_cmp(&(self.vertices[b] - centroid).norm())
                    })
                    .unwrap();
                s[j]
            })
            .collect();
        witnesses.sort_by(f64::total_cmp);
        Ok(MultiplicityReport { point: [centroid.x, centroid.y, centroid.z], r, witnesses })
    }

    /// Compares `B̄` against `ϖ* r²`, with `r` from
    /// [`DiscreteCurve::detect_multiplicity`]. For `r < 2` the inequality does
    /// not apply and the bound falls back to `4π²`.
    pub fn liyau_check(&self, eps: f64, tol_disc: f64) -> Result<LiYauReport> {
        if !self.closed {
            return Err(Error::domain("the Li-Yau check needs a closed curve"));
        }
        let r = self.detect_multiplicity(eps)?.r;
        let bbar = self.normalized_energy().bbar;
        let applicable = r >= 2;
        let bound = if applicable { varpi_star() * (r * r) as f64 } else { 4.0 * PI * PI };
        Ok(LiYauReport { r, bbar, bound, satisfied: bbar >= bound * (1.0 - tol_disc), slack: bbar - bound, applicable })
    }

    /// [`DiscreteCurve::liyau_check`] with `eps = 1e-3·L` and a 1% allowance.
    pub fn liyau_check_default(&self) -> Result<LiYauReport> {
        self.liyau_check(DEFAULT_EPS_FRACTION * self.length(), DEFAULT_TOL_DISC)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.vertices.iter().map(|p| p * factor).collect(), self.closed, self.dim)
    }

    pub fn translated(&self, offset: &Point) -> Result<Self> {
        Self::new(self.vertices.iter().map(|p| p + offset).collect(), self.closed, self.dim)
    }

    /// Applies a rigid motion; the result is planar only if it stays in `z = 0`.
    pub fn transformed(&self, motion: &RigidMotion) -> Result<Self> {
        let vertices: Vec<Point> = self.vertices.iter().map(|p| motion.apply(p)).collect();
        let dim = if self.dim == 2 && vertices.iter().all(|p| p.z == 0.0) { 2 } else { 3 };
        Self::new(vertices, self.closed, dim)
    }

    /// Same vertices viewed as a curve in `R³`.
    pub fn lifted(&self) -> Self {
        Self { dim: 3, ..self.clone() }
    }
}
