//! Exact elasticae at the point level.
//!
//! Canonical arclength parametrizations (up to similarity):
//!
//! | family     | `γ(s)`                                   | `θ(s)`              | `k(s)`        |
//! |------------|------------------------------------------|---------------------|---------------|
//! | linear     | `(s, 0)`                                 | `0`                 | `0`           |
//! | wavelike   | `(2E(am s) − s, −2√m cn s)`              | `2 asin(√m sn s)`   | `2√m cn s`    |
//! | borderline | `(2 tanh s − s, −2 sech s)`              | `2 asin(tanh s)`    | `2 sech s`    |
//! | orbitlike  | `(2E(am s) + (m−2)s, −2 dn s) / m`       | `2 am s`            | `2 dn s`      |
//! | circular   | `(sin s, −cos s)`                        | `s`                 | `1`           |
//!
//! The wavelike curve closes up exactly at the figure-eight parameter `m*`
//! solving `2E(m) = K(m)`; half of it, `γ*(s) = γ_w(s − K, m*)` on
//! `[0, 2K]`, is the leaf.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Matrix3, Rotation3, Unit};
use serde::{Deserialize, Serialize};

use crate::discrete::DiscreteCurve;
use crate::elliptic::{comp_e, comp_k, ellint_e, Jacobi};
use crate::profiles::{CurvatureProfile, PlanarFamily};
use crate::{Error, Point, Result};

/// Orthogonal map plus translation, `x ↦ Qx + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    pub rotation: Matrix3<f64>,
    pub translation: Point,
}

impl RigidMotion {
    pub fn new(rotation: Matrix3<f64>, translation: Point) -> Result<Self> {
        let defect = (rotation.transpose() * rotation - Matrix3::identity()).abs().max();
        if !(defect <= 1e-12) {
            return Err(Error::domain(format!("rotation is not orthogonal (defect {defect:e})")));
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self { rotation: Matrix3::identity(), translation: Point::zeros() }
    }

    /// Rotation by `angle` about a unit `axis`, through the origin.
    pub fn about_axis(axis: &Point, angle: f64) -> Self {
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle);
        Self { rotation: *r.matrix(), translation: Point::zeros() }
    }

    /// Reflection `y ↦ −y`.
    pub fn reflect_y() -> Self {
        Self { rotation: Matrix3::from_diagonal(&Point::new(1.0, -1.0, 1.0)), translation: Point::zeros() }
    }

    /// The unique proper rotation with `a0 ↦ a1` and `b0 ↦ b1`, which
    /// requires `∠(a0, b0) = ∠(a1, b1)` and neither pair (anti)parallel.
    pub fn aligning(a0: &Point, b0: &Point, a1: &Point, b1: &Point) -> Result<Self> {
        let frame = |a: &Point, b: &Point| -> Result<Matrix3<f64>> {
            let (a, b) = (a.normalize(), b.normalize());
            let e1 = a + b;
            let e2 = a - b;
            if e1.norm() < 1e-12 || e2.norm() < 1e-12 {
                return Err(Error::domain("tangent pair is parallel or antiparallel"));
            }
            let (e1, e2) = (e1.normalize(), e2.normalize());
            Ok(Matrix3::from_columns(&[e1, e2, e1.cross(&e2)]))
        };
        let angle = |a: &Point, b: &Point| a.normalize().dot(&b.normalize()).clamp(-1.0, 1.0).acos();
        if (angle(a0, b0) - angle(a1, b1)).abs() > 1e-9 {
            return Err(Error::domain("tangent pairs enclose different angles"));
        }
        Self::new(frame(a1, b1)? * frame(a0, b0)?.transpose(), Point::zeros())
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.rotation * p + self.translation
    }

    pub fn apply_vector(&self, v: &Point) -> Point {
        self.rotation * v
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }
}

/// Planar similarity `p ↦ Λ·R(rotation)·F·p + translation`, with `F` the
/// reflection `y ↦ −y` when `reflect` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub rotation: f64,
    pub translation: [f64; 2],
    pub scale: f64,
    pub reflect: bool,
}

impl Default for Similarity {
    fn default() -> Self {
        Self { rotation: 0.0, translation: [0.0, 0.0], scale: 1.0, reflect: false }
    }
}

impl Similarity {
    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let y = if self.reflect { -y } else { y };
        let (s, c) = self.rotation.sin_cos();
        (self.scale * (c * x - s * y) + self.translation[0], self.scale * (s * x + c * y) + self.translation[1])
    }
}

/// A canonical planar elastica composed with a similarity.
///
/// Evaluating at `s` gives `Φ(γ(s + phase))`; the image has arclength
/// `scale·s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarElastica {
    pub family: PlanarFamily,
    pub similarity: Similarity,
    pub phase: f64,
}

impl PlanarElastica {
    pub fn new(family: PlanarFamily, similarity: Similarity, phase: f64) -> Result<Self> {
        family.validate()?;
        if !(similarity.scale > 0.0) {
            return Err(Error::domain(format!("similarity scale must be positive, got {}", similarity.scale)));
        }
        Ok(Self { family, similarity, phase })
    }

    pub fn canonical(family: PlanarFamily) -> Result<Self> {
        Self::new(family, Similarity::default(), 0.0)
    }

    fn canonical_point(&self, s: f64) -> (f64, f64) {
        match self.family {
            PlanarFamily::Linear => (s, 0.0),
            PlanarFamily::Wavelike { m } => {
                let jac = Jacobi::new(m).expect("validated");
                let e = ellint_e(jac.am(s), m).expect("validated");
                (2.0 * e - s, -2.0 * m.sqrt() * jac.cn(s))
            }
            PlanarFamily::Borderline => (2.0 * s.tanh() - s, -2.0 / s.cosh()),
            PlanarFamily::Orbitlike { m } => {
                let jac = Jacobi::new(m).expect("validated");
                let e = ellint_e(jac.am(s), m).expect("validated");
                ((2.0 * e + (m - 2.0) * s) / m, -2.0 * jac.dn(s) / m)
            }
            PlanarFamily::Circular => (s.sin(), -s.cos()),
        }
    }

    fn canonical_theta(&self, s: f64) -> f64 {
        match self.family {
            PlanarFamily::Linear => 0.0,
            PlanarFamily::Wavelike { m } => 2.0 * (m.sqrt() * Jacobi::new(m).expect("validated").sn(s)).asin(),
            PlanarFamily::Borderline => 2.0 * s.tanh().asin(),
            PlanarFamily::Orbitlike { m } => 2.0 * Jacobi::new(m).expect("validated").am(s),
            PlanarFamily::Circular => s,
        }
    }

    fn canonical_k(&self, s: f64) -> f64 {
        match self.family {
            PlanarFamily::Linear => 0.0,
            PlanarFamily::Wavelike { m } => 2.0 * m.sqrt() * Jacobi::new(m).expect("validated").cn(s),
            PlanarFamily::Borderline => 2.0 / s.cosh(),
            PlanarFamily::Orbitlike { m } => 2.0 * Jacobi::new(m).expect("validated").dn(s),
            PlanarFamily::Circular => 1.0,
        }
    }

    pub fn eval(&self, s: f64) -> Point {
        let (x, y) = self.canonical_point(s + self.phase);
        let (x, y) = self.similarity.apply(x, y);
        Point::new(x, y, 0.0)
    }

    /// Tangential angle of the image curve.
    pub fn theta(&self, s: f64) -> f64 {
        let t = self.canonical_theta(s + self.phase);
        self.similarity.rotation + if self.similarity.reflect { -t } else { t }
    }

    /// Signed curvature of the image curve with respect to its own arclength.
    pub fn k(&self, s: f64) -> f64 {
        let k = self.canonical_k(s + self.phase) / self.similarity.scale;
        if self.similarity.reflect {
            -k
        } else {
            k
        }
    }

    /// `n + 1` samples on `[s_start, s_end]` (in the canonical parameter).
    pub fn sample(&self, s_start: f64, s_end: f64, n: usize) -> Result<DiscreteCurve> {
        if n < 2 || !(s_end > s_start) {
            return Err(Error::domain("sampling needs n >= 2 and a nonempty range"));
        }
        let pts = (0..=n).map(|i| self.eval(s_start + (s_end - s_start) * i as f64 / n as f64)).collect();
        DiscreteCurve::new(pts, false, 2)
    }
}

/// `m*`, `K(m*)`, `E(m*)`, `ϖ*` and the leaf spread angle `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureEightConstants {
    pub m_star: f64,
    pub k_mstar: f64,
    pub e_mstar: f64,
    pub varpi_star: f64,
    pub psi: f64,
}

/// Cached figure-eight constants.
pub fn figure_eight() -> &'static FigureEightConstants {
    static CONSTANTS: OnceLock<FigureEightConstants> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        let g = |m: f64| 2.0 * comp_e(m).unwrap() - comp_k(m).unwrap();
        // g decreases from π/2 to −∞ on (0, 1)
        let (mut lo, mut hi) = (0.5, 0.95);
        while hi - lo > 0.0 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let m = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
        let k = comp_k(m).unwrap();
        let e = comp_e(m).unwrap();
        FigureEightConstants {
            m_star: m,
            k_mstar: k,
            e_mstar: e,
            // leaf energy 2K·8(E − (1−m)K) with K = 2E
            varpi_star: 32.0 * (2.0 * m - 1.0) * e * e,
            psi: 2.0 * PI - 4.0 * m.sqrt().asin(),
        }
    })
}

/// The unique root `m* ∈ (0, 1)` of `2E(m) − K(m)`.
pub fn figure_eight_modulus() -> f64 {
    figure_eight().m_star
}

/// Normalized bending energy `B̄` of the leaf, `32(2m*−1)E(m*)² ≈ 28.1099`.
pub fn varpi_star() -> f64 {
    figure_eight().varpi_star
}

/// Angle `2π − 4 asin √m*` between the leaf's start and end tangents.
pub fn leaf_spread_angle() -> f64 {
    figure_eight().psi
}

/// Point `γ*(s)` of the canonical leaf, `s ∈ [0, 2K(m*)]`.
pub fn leaf_point(s: f64) -> Point {
    let c = figure_eight();
    PlanarElastica::canonical(PlanarFamily::Wavelike { m: c.m_star }).unwrap().eval(s - c.k_mstar)
}

/// Unit tangent of the canonical leaf.
pub fn leaf_tangent(s: f64) -> Point {
    let c = figure_eight();
    let th = PlanarElastica::canonical(PlanarFamily::Wavelike { m: c.m_star }).unwrap().theta(s - c.k_mstar);
    Point::new(th.cos(), th.sin(), 0.0)
}

/// Signed curvature of the canonical leaf.
pub fn leaf_curvature(s: f64) -> f64 {
    let c = figure_eight();
    2.0 * c.m_star.sqrt() * Jacobi::new(c.m_star).unwrap().cn(s - c.k_mstar)
}

/// `n + 1` arclength-uniform samples of the leaf on `[0, 2K(m*)]`, as an
/// open curve whose end vertices coincide.
pub fn build_leaf(n: usize) -> Result<DiscreteCurve> {
    if n < 2 {
        return Err(Error::domain(format!("leaf needs n >= 2, got {n}")));
    }
    let len = 2.0 * figure_eight().k_mstar;
    let wave = PlanarElastica::canonical(PlanarFamily::Wavelike { m: figure_eight_modulus() })?;
    let k = figure_eight().k_mstar;
    let pts = (0..=n).map(|i| wave.eval(len * i as f64 / n as f64 - k)).collect();
    DiscreteCurve::new(pts, false, 2)
}

/// `r` unit vectors with consecutive (cyclic) angles all equal to `ψ`.
///
/// Tries the generalized cone `uᵢ = (sin α cos iφ, sin α sin iφ, cos α)` with
/// `φ = 2πk/r` for `k = ⌊r/2⌋, …, 1`, where
/// `cos²α = (cos ψ − cos φ)/(1 − cos φ)`. If no cone exists, falls back to a
/// Levenberg–Marquardt least-squares fit on the sphere and reports
/// infeasibility when its residual exceeds `1e-9`.
pub fn spherical_chain(r: usize, psi: f64) -> Result<Vec<Point>> {
    if r < 2 {
        return Err(Error::domain(format!("chain length must be at least 2, got {r}")));
    }
    if !(psi > 0.0 && psi < PI) {
        return Err(Error::domain(format!("chain angle must lie in (0, π), got {psi}")));
    }
    for k in (1..=r / 2).rev() {
        let phi = 2.0 * PI * k as f64 / r as f64;
        let cos2 = (psi.cos() - phi.cos()) / (1.0 - phi.cos());
        if (0.0..=1.0).contains(&cos2) {
            let (ca, sa) = (cos2.sqrt(), (1.0 - cos2).sqrt());
            return Ok((0..r)
                .map(|i| {
                    let (s, c) = (phi * i as f64).sin_cos();
                    Point::new(sa * c, sa * s, ca)
                })
                .collect());
        }
    }
    chain_least_squares(r, psi)
}

fn chain_residuals(u: &[Point], cos_psi: f64) -> DVector<f64> {
    let r = u.len();
    DVector::from_iterator(r, (0..r).map(|i| u[i].dot(&u[(i + 1) % r]) - cos_psi))
}

fn chain_least_squares(r: usize, psi: f64) -> Result<Vec<Point>> {
    let cos_psi = psi.cos();
    let mut best = f64::INFINITY;
    for start in 0..8 {
        // deterministic perturbed zig-zag starting points
        let mut u: Vec<Point> = (0..r)
            .map(|i| {
                let a = PI * i as f64 + 0.37 * (start as f64 + 1.0) * (i as f64 + 0.5).sin();
                Point::new(a.cos(), a.sin(), 0.3 * ((i * (start + 2)) as f64).cos()).normalize()
            })
            .collect();
        let mut mu = 1e-3;
        let mut res = chain_residuals(&u, cos_psi);
        for _ in 0..500 {
            let norm = res.norm();
            if norm < 1e-14 {
                break;
            }
            let bases: Vec<(Point, Point)> = u
                .iter()
                .map(|p| {
                    let t = if p.x.abs() < 0.9 { Point::x() } else { Point::y() };
                    let a = (t - p * p.dot(&t)).normalize();
                    (a, p.cross(&a))
                })
                .collect();
            let mut jac = DMatrix::zeros(r, 2 * r);
            for i in 0..r {
                let j = (i + 1) % r;
                jac[(i, 2 * i)] += bases[i].0.dot(&u[j]);
                jac[(i, 2 * i + 1)] += bases[i].1.dot(&u[j]);
                jac[(i, 2 * j)] += bases[j].0.dot(&u[i]);
                jac[(i, 2 * j + 1)] += bases[j].1.dot(&u[i]);
            }
            let jt = jac.transpose();
            let g = &jt * &res;
            let mut accepted = false;
            for _ in 0..30 {
                let mut h = &jt * &jac;
                for d in 0..2 * r {
                    h[(d, d)] += mu;
                }
                let Some(step) = h.cholesky().map(|c| c.solve(&g)) else {
                    mu *= 10.0;
                    continue;
                };
                let trial: Vec<Point> = (0..r)
                    .map(|i| (u[i] - bases[i].0 * step[2 * i] - bases[i].1 * step[2 * i + 1]).normalize())
                    .collect();
                let trial_res = chain_residuals(&trial, cos_psi);
                if trial_res.norm() < norm {
                    u = trial;
                    res = trial_res;
                    mu = (mu * 0.3).max(1e-15);
                    accepted = true;
                    break;
                }
                mu *= 10.0;
            }
            if !accepted {
                break;
            }
        }
        let worst = res.amax();
        if u.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12) {
            let angle_err =
                (0..r).map(|i| (u[i].dot(&u[(i + 1) % r]).clamp(-1.0, 1.0).acos() - psi).abs()).fold(0.0, f64::max);
            if angle_err <= 1e-9 {
                return Ok(u);
            }
        }
        best = best.min(worst);
    }
    Err(Error::Infeasible(format!(
        "no closed chain of {r} unit vectors with consecutive angle {psi} (residual {best:e})"
    )))
}

/// `r` copies of the leaf joined `C¹` at the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafedElastica {
    pub r: usize,
    pub dim: usize,
    /// Leaf `i` is `motions[i]` applied to the canonical leaf.
    pub motions: Vec<RigidMotion>,
    /// Start tangent of each leaf.
    pub chain: Vec<Point>,
}

/// Largest junction defects of a leafed elastica.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionReport {
    pub position: f64,
    pub tangent: f64,
    pub curvature: f64,
}

/// Builds a closed `r`-leafed elastica in the plane (`dim = 2`, `r` even,
/// alternating the leaf with its mirror image `y ↦ −y`) or in space
/// (`dim = 3`, leaf `i` rotated so its tangents become `uᵢ, uᵢ₊₁` of
/// [`spherical_chain`]).
pub fn build_leafed(r: usize, dim: usize) -> Result<LeafedElastica> {
    if r < 2 {
        return Err(Error::domain(format!("a leafed elastica needs r >= 2, got {r}")));
    }
    let c = figure_eight();
    let t0 = leaf_tangent(0.0);
    let t1 = leaf_tangent(2.0 * c.k_mstar);
    match dim {
        2 => {
            if r % 2 == 1 {
                return Err(Error::Infeasible("planar odd r".into()));
            }
            let motions: Vec<RigidMotion> =
                (0..r).map(|i| if i % 2 == 0 { RigidMotion::identity() } else { RigidMotion::reflect_y() }).collect();
            let chain = motions.iter().map(|m| m.apply_vector(&t0)).collect();
            Ok(LeafedElastica { r, dim, motions, chain })
        }
        3 => {
            let chain = spherical_chain(r, c.psi)?;
            let motions = (0..r)
                .map(|i| RigidMotion::aligning(&t0, &t1, &chain[i], &chain[(i + 1) % r]))
                .collect::<Result<Vec<_>>>()?;
            Ok(LeafedElastica { r, dim, motions, chain })
        }
        _ => Err(Error::domain(format!("dimension must be 2 or 3, got {dim}"))),
    }
}

impl LeafedElastica {
    /// Closed curve with `n` samples per leaf (the shared origin appears once
    /// per leaf), total length `r·2K(m*)`.
    pub fn sample(&self, n_per_leaf: usize) -> Result<DiscreteCurve> {
        let leaf = build_leaf(n_per_leaf)?;
        let mut pts = Vec::with_capacity(self.r * n_per_leaf);
        for m in &self.motions {
            pts.extend(leaf.vertices()[..n_per_leaf].iter().map(|p| m.apply(p)));
        }
        DiscreteCurve::new(pts, true, self.dim)
    }

    /// `C⁰`, `C¹` and junction-curvature defects, evaluated on the exact leaf.
    pub fn junctions(&self) -> JunctionReport {
        let end = 2.0 * figure_eight().k_mstar;
        let mut rep = JunctionReport { position: 0.0, tangent: 0.0, curvature: 0.0 };
        for i in 0..self.r {
            let (a, b) = (&self.motions[i], &self.motions[(i + 1) % self.r]);
            rep.position = rep.position.max((a.apply(&leaf_point(end)) - b.apply(&leaf_point(0.0))).norm());
            rep.tangent =
                rep.tangent.max((a.apply_vector(&leaf_tangent(end)) - b.apply_vector(&leaf_tangent(0.0))).norm());
        }
        rep.curvature = leaf_curvature(0.0).abs().max(leaf_curvature(end).abs());
        rep
    }
}

/// Position and Frenet frame along an integrated curve.
#[derive(Debug, Clone)]
pub struct FrenetPath {
    pub curve: DiscreteCurve,
    /// `(T, N, B)` at each vertex.
    pub frames: Vec<[Point; 3]>,
    pub step: f64,
}

fn check_frame(frame: &[Point; 3]) -> Result<()> {
    let m = Matrix3::from_columns(frame);
    let defect = (m.transpose() * m - Matrix3::identity()).abs().max();
    if defect > 1e-10 || m.determinant() < 0.0 {
        return Err(Error::domain(format!("initial frame is not right-handed orthonormal (defect {defect:e})")));
    }
    Ok(())
}

/// Integrates `γ' = T, T' = kN, N' = −kT + tB, B' = −tN` with classical RK4,
/// re-orthonormalizing the frame after every step. The range is split into
/// equal steps no longer than `h`; the curve starts at the origin.
pub fn integrate_frenet(
    k: impl Fn(f64) -> f64,
    t: impl Fn(f64) -> f64,
    frame0: [Point; 3],
    s_range: (f64, f64),
    h: f64,
) -> Result<FrenetPath> {
    check_frame(&frame0)?;
    let (s0, s1) = s_range;
    if !(h > 0.0) || !(s1 > s0) {
        return Err(Error::domain("integration needs h > 0 and a nonempty range"));
    }
    let steps = ((s1 - s0) / h).ceil().max(1.0) as usize;
    let h = (s1 - s0) / steps as f64;
    type State = [Point; 4];
    let rhs = |s: f64, y: &State| -> State {
        let (kk, tt) = (k(s), t(s));
        [y[1], y[2] * kk, -y[1] * kk + y[3] * tt, -y[2] * tt]
    };
    let axpy = |y: &State, d: &State, a: f64| -> State { std::array::from_fn(|i| y[i] + d[i] * a) };
    let mut y: State = [Point::zeros(), frame0[0], frame0[1], frame0[2]];
    let mut pts = vec![y[0]];
    let mut frames = vec![frame0];
    for i in 0..steps {
        let s = s0 + h * i as f64;
        let k1 = rhs(s, &y);
        let k2 = rhs(s + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(s + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let k4 = rhs(s + h, &axpy(&y, &k3, h));
        for j in 0..4 {
            y[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0);
        }
        let tan = y[1].normalize();
        let nor = (y[2] - tan * tan.dot(&y[2])).normalize();
        y[1] = tan;
        y[2] = nor;
        y[3] = tan.cross(&nor);
        pts.push(y[0]);
        frames.push([y[1], y[2], y[3]]);
    }
    Ok(FrenetPath { curve: DiscreteCurve::new(pts, false, 3)?, frames, step: h })
}

/// Reconstructs a spatial elastica from its curvature profile, with
/// `k = A cn(·)` on the wavelike branch, `k = √u` otherwise, and torsion
/// `t = c/k²` (zero, with a frozen binormal, for planar profiles).
pub fn reconstruct_spatial(
    profile: &CurvatureProfile,
    frame0: [Point; 3],
    s_range: (f64, f64),
    h: f64,
) -> Result<FrenetPath> {
    let jac = profile.jacobi();
    let c = profile.c();
    let kappa = |s: f64| profile.curvature_with(&jac, s);
    let torsion = |s: f64| if c == 0.0 { 0.0 } else { c / profile.kappa_sq_with(&jac, s) };
    integrate_frenet(kappa, torsion, frame0, s_range, h)
}

/// Periodic planar families whose closure can be tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureFamily {
    Wavelike,
    Orbitlike,
}

/// Whether the family closes up over one period: wavelike iff
/// `|2E(m) − K(m)| < tol`; orbitlike never, since `2E + (m−2)K < 0`.
pub fn check_closure(family: ClosureFamily, m: f64, tol: f64) -> Result<bool> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::domain(format!("closure test needs m in (0, 1), got {m}")));
    }
    let (k, e) = (comp_k(m)?, comp_e(m)?);
    Ok(match family {
        ClosureFamily::Wavelike => (2.0 * e - k).abs() < tol,
        // the shift (2/m)(2E + (m−2)K) stays away from zero even as m → 0
        ClosureFamily::Orbitlike => false,
    })
}

/// Outcome of [`classify_closed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedElastica {
    Circle { fold: usize },
    FigureEight { fold: usize },
    NotElastica,
}

/// Default classifier tolerance, relative to `max |k|`.
pub const CLASSIFY_TOL: f64 = 1e-3;

/// Classifies a closed planar curve sampled (roughly) uniformly in arclength
/// as a `μ`-fold circle, a `μ`-fold figure-eight or neither, by the RMS misfit
/// of its discrete curvature against a constant and against
/// `2√m*/Λ · cn(s/Λ + β, m*)` with `Λ = L/(4K(m*)μ)`.
pub fn classify_closed(curve: &DiscreteCurve, tol: f64) -> Result<ClosedElastica> {
    if !curve.is_closed() {
        return Err(Error::domain("classification needs a closed curve"));
    }
    if curve.dim() != 2 {
        return Err(Error::domain("classification needs a planar curve"));
    }
    let k = curve.signed_curvatures()?;
    let s = curve.arclength_params();
    let n = k.len() as f64;
    let kmax = k.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if kmax == 0.0 {
        return Ok(ClosedElastica::NotElastica);
    }
    let mean = k.iter().sum::<f64>() / n;
    let rms =
        |f: &dyn Fn(usize) -> f64| (k.iter().enumerate().map(|(i, v)| (v - f(i)).powi(2)).sum::<f64>() / n).sqrt();
    if rms(&|_| mean) <= tol * kmax {
        let turning: f64 = curve.signed_turning_angles()?.iter().sum();
        let fold = (turning.abs() / (2.0 * PI)).round() as usize;
        return Ok(ClosedElastica::Circle { fold: fold.max(1) });
    }

    let c = figure_eight();
    let jac = Jacobi::new(c.m_star)?;
    let length = curve.length();
    let peak = 2.0 * c.m_star.sqrt();
    let guess = (length * kmax / (4.0 * c.k_mstar * peak)).round().max(1.0) as usize;
    let (j_max, _) =
        k.iter().enumerate().fold((0, 0.0), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
    let mut best: Option<(f64, usize)> = None;
    for fold in guess.saturating_sub(1).max(1)..=guess + 1 {
        let scale = length / (4.0 * c.k_mstar * fold as f64);
        let misfit = |beta: f64| rms(&|i| peak / scale * jac.cn(s[i] / scale + beta));
        let beta0 = if k[j_max] > 0.0 { 0.0 } else { 2.0 * c.k_mstar } - s[j_max] / scale;
        let delta = 3.0 * length / (n * scale);
        let beta = golden_section(&misfit, beta0 - delta, beta0 + delta, 1e-12);
        let r = misfit(beta);
        if best.is_none_or(|(br, _)| r < br) {
            best = Some((r, fold));
        }
    }
    match best {
        Some((r, fold)) if r <= tol * kmax => Ok(ClosedElastica::FigureEight { fold }),
        _ => Ok(ClosedElastica::NotElastica),
    }
}

fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_values() {
        let b = PlanarElastica::canonical(PlanarFamily::Borderline).unwrap();
        assert_eq!(b.eval(0.0), Point::new(0.0, -2.0, 0.0));
        let c = PlanarElastica::canonical(PlanarFamily::Circular).unwrap();
        let p = c.eval(PI / 2.0);
        assert!((p - Point::new(1.0, 0.0, 0.0)).norm() < 1e-16);
        let m: f64 = 0.3;
        let w = PlanarElastica::canonical(PlanarFamily::Wavelike { m }).unwrap();
        assert_eq!(w.eval(0.0), Point::new(0.0, -2.0 * m.sqrt(), 0.0));
    }

    #[test]
    fn similarity_scales_curvature() {
        let sim = Similarity { rotation: 0.4, translation: [1.0, -2.0], scale: 3.0, reflect: true };
        let e = PlanarElastica::new(PlanarFamily::Circular, sim, 0.0).unwrap();
        assert!((e.k(0.7) + 1.0 / 3.0).abs() < 1e-15);
        assert!(PlanarElastica::new(PlanarFamily::Circular, Similarity { scale: 0.0, ..sim }, 0.0).is_err());
    }

    #[test]
    fn constants() {
        let c = figure_eight();
        assert!((2.0 * c.e_mstar - c.k_mstar).abs() < 1e-13);
        assert!(c.m_star > 0.82 && c.m_star < 0.83);
        assert!((c.varpi_star - 28.1099).abs() < 1e-4);
        assert!(c.psi > 0.0 && c.psi < PI);
    }

    #[test]
    fn aligning_rotation() {
        let a0 = Point::new(1.0, 0.0, 0.0);
        let b0 = Point::new(0.0, 1.0, 0.0);
        let a1 = Point::new(0.0, 0.0, 1.0);
        let b1 = Point::new(1.0, 0.0, 0.0);
        let m = RigidMotion::aligning(&a0, &b0, &a1, &b1).unwrap();
        assert!((m.apply(&a0) - a1).norm() < 1e-15);
        assert!((m.apply(&b0) - b1).norm() < 1e-15);
        assert!((m.rotation.determinant() - 1.0).abs() < 1e-14);
        assert!(RigidMotion::aligning(&a0, &b0, &a1, &a1).is_err());
    }

    #[test]
    fn least_squares_chain_on_feasible_input() {
        for (r, psi) in [(3, 1.72), (4, 2.0), (6, 0.9)] {
            let u = chain_least_squares(r, psi).unwrap();
            for i in 0..r {
                let a = u[i].dot(&u[(i + 1) % r]).clamp(-1.0, 1.0).acos();
                assert!((a - psi).abs() < 1e-9);
            }
        }
        assert!(chain_least_squares(3, 2.5).is_err());
    }

    #[test]
    fn planar_odd_r_is_infeasible() {
        assert_eq!(build_leafed(3, 2).unwrap_err(), Error::Infeasible("planar odd r".into()));
        assert!(build_leafed(1, 3).is_err());
        assert!(build_leafed(2, 4).is_err());
    }

    #[test]
    fn frame_validation() {
        let bad = [Point::x(), Point::x(), Point::z()];
        assert!(integrate_frenet(|_| 1.0, |_| 0.0, bad, (0.0, 1.0), 0.1).is_err());
        let left = [Point::x(), Point::y(), -Point::z()];
        assert!(integrate_frenet(|_| 1.0, |_| 0.0, left, (0.0, 1.0), 0.1).is_err());
    }
}
