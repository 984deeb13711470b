//! Fixed-length minimization of the discrete bending energy with pinned or
//! clamped ends.
//!
//! A curve of `N` edges of length `h = L0/N` is stored through its unit edge
//! directions `t_j`, so every edge-length constraint holds by construction
//! and only the closing condition `h Σ t_j = P1 − P0` remains. Each iteration
//! takes a Newton step in tangent coordinates of the directions, using a
//! finite-difference Hessian of the exact gradient, then backtracks with an
//! Armijo test and projects back onto the closing condition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{build_leaf, figure_eight, varpi_star};
use crate::discrete::{turning_angle, DiscreteCurve};
use crate::{Error, Point, Result};

/// Endpoints, total length and number of edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinnedProblem {
    pub p0: Point,
    pub p1: Point,
    pub length: f64,
    pub n: usize,
    pub dim: usize,
}

impl PinnedProblem {
    pub fn new(p0: Point, p1: Point, length: f64, n: usize, dim: usize) -> Result<Self> {
        let p = Self { p0, p1, length, n, dim };
        p.check()?;
        let d = (p1 - p0).norm();
        if d >= length {
            return Err(Error::domain(format!("pinned ends need |P0 − P1| < L0, got {d} >= {length}")));
        }
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if self.dim != 2 && self.dim != 3 {
            return Err(Error::domain(format!("dimension must be 2 or 3, got {}", self.dim)));
        }
        if self.n < 8 {
            return Err(Error::domain(format!("at least 8 edges are needed, got {}", self.n)));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::domain(format!("length must be positive, got {}", self.length)));
        }
        for p in [self.p0, self.p1] {
            if !p.iter().all(|c| c.is_finite()) || (self.dim == 2 && p.z != 0.0) {
                return Err(Error::domain(format!("invalid endpoint {:?} for dimension {}", p.as_slice(), self.dim)));
            }
        }
        Ok(())
    }

    pub fn edge_length(&self) -> f64 {
        self.length / self.n as f64
    }
}

/// Pinned data plus unit end tangents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClampedProblem {
    pub ends: PinnedProblem,
    pub v0: Point,
    pub v1: Point,
}

impl ClampedProblem {
    /// The tangents must have unit length within `1e-9`; they are renormalized.
    pub fn new(p0: Point, p1: Point, v0: Point, v1: Point, length: f64, n: usize, dim: usize) -> Result<Self> {
        let ends = PinnedProblem { p0, p1, length, n, dim };
        ends.check()?;
        for v in [v0, v1] {
            if !v.iter().all(|c| c.is_finite()) || (v.norm() - 1.0).abs() > 1e-9 || (dim == 2 && v.z != 0.0) {
                return Err(Error::domain(format!("end tangent {:?} is not a unit vector", v.as_slice())));
            }
        }
        let p = Self { ends, v0: v0.normalize(), v1: v1.normalize() };
        if p.is_straight() {
            return Ok(p);
        }
        let d = (p1 - p0).norm();
        if d >= length * (1.0 - 1e-12) {
            return Err(Error::domain(format!("|P0 − P1| = {d} leaves no admissible curve of length {length}")));
        }
        let h = ends.edge_length();
        let inner = (p1 - v1 * h - (p0 + v0 * h)).norm();
        if inner >= (n - 2) as f64 * h {
            return Err(Error::domain("the end tangents leave no admissible curve of this length"));
        }
        Ok(p)
    }

    /// `|P1 − P0| = L0` with both tangents along the segment.
    pub fn is_straight(&self) -> bool {
        let d = self.ends.p1 - self.ends.p0;
        let len = d.norm();
        len > 0.0
            && (len - self.ends.length).abs() <= 1e-12 * self.ends.length
            && (self.v0 - d / len).norm() <= 1e-9
            && (self.v1 - d / len).norm() <= 1e-9
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Constrained Newton steps with backtracking.
    Newton,
    /// Projected steepest descent with backtracking; slow.
    Gradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    /// Projected-gradient tolerance; `None` means `1e-8·N`.
    pub tol: Option<f64>,
    pub max_iters: usize,
    pub method: Method,
    pub seed: u64,
    /// Amplitude in radians of the smooth random perturbation applied to the
    /// initial arc.
    pub perturbation: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { tol: None, max_iters: 500, method: Method::Newton, seed: 0, perturbation: 0.0 }
    }
}

/// One line of the convergence log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationLog {
    pub iteration: usize,
    #[serde(rename = "B")]
    pub bending: f64,
    pub grad_norm: f64,
    pub max_constraint_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizeResult {
    #[serde(skip)]
    pub curve: DiscreteCurve,
    #[serde(rename = "B")]
    pub bending: f64,
    #[serde(rename = "Bbar")]
    pub bbar: f64,
    /// `None` when the curve is too straight for a fit.
    pub lambda_est: Option<f64>,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Whether a saddle was detected and perturbed away from.
    pub saddle_perturbed: bool,
    /// Largest relative edge-length error of the returned curve.
    pub max_constraint_residual: f64,
    #[serde(skip)]
    pub log: Vec<IterationLog>,
}

/// Exact gradient of [`DiscreteCurve::bending_energy`] with respect to every
/// vertex.
pub fn energy_gradient(curve: &DiscreteCurve) -> Vec<Point> {
    let x = curve.vertices();
    let n = x.len();
    let mut g = vec![Point::zeros(); n];
    for i in 0..n {
        let (ia, ic) = if curve.is_closed() {
            ((i + n - 1) % n, (i + 1) % n)
        } else if i == 0 || i == n - 1 {
            continue;
        } else {
            (i - 1, i + 1)
        };
        let a = x[i] - x[ia];
        let b = x[ic] - x[i];
        let (la, lb) = (a.norm(), b.norm());
        let (ua, ub) = (a / la, b / lb);
        let d = la + lb;
        let theta = turning_angle(&a, &b);
        let cos = theta.cos();
        let ratio = theta_over_sin(theta);
        let da = -(ub - ua * cos) * (4.0 * ratio / (d * la)) - ua * (2.0 * theta * theta / (d * d));
        let db = -(ua - ub * cos) * (4.0 * ratio / (d * lb)) - ub * (2.0 * theta * theta / (d * d));
        g[i] += da - db;
        g[ia] -= da;
        g[ic] += db;
    }
    g
}

fn theta_over_sin(theta: f64) -> f64 {
    if theta < 1e-6 {
        1.0 + theta * theta / 6.0
    } else {
        theta / theta.sin()
    }
}

/// Square band matrix with `kl` sub- and `ku` super-diagonals, stored by
/// rows with room for the fill-in of partial pivoting.
#[derive(Debug, Clone)]
struct Band {
    n: usize,
    kl: usize,
    ku: usize,
    w: usize,
    a: Vec<f64>,
}

struct BandLu {
    band: Band,
    piv: Vec<usize>,
}

impl Band {
    fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let w = 2 * kl + ku + 1;
        Self { n, kl, ku, w, a: vec![0.0; n * w] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.w + (j + self.kl - i)
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.a[k] += v;
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku {
            0.0
        } else {
            self.a[self.idx(i, j)]
        }
    }

    fn max_diag(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).abs()).fold(0.0, f64::max)
    }

    fn quad_form(&self, x: &DVector<f64>) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            s += x[i] * (lo..=hi).map(|j| self.get(i, j) * x[j]).sum::<f64>();
        }
        s
    }

    fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    #[allow(clippy::needless_range_loop)]
    fn lu(mut self) -> Option<BandLu> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.kl + self.ku;
        let mut piv = vec![0; n];
        for c in 0..n {
            let last = (c + kl).min(n - 1);
            let mut p = c;
            let mut best = self.a[self.idx(c, c)].abs();
            for i in c + 1..=last {
                let v = self.a[self.idx(i, c)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > 0.0 && best.is_finite()) {
                return None;
            }
            piv[c] = p;
            let cmax = (c + ku).min(n - 1);
            if p != c {
                for j in c..=cmax {
                    let (x, y) = (self.idx(c, j), self.idx(p, j));
                    self.a.swap(x, y);
                }
            }
            let d = self.a[self.idx(c, c)];
            for i in c + 1..=last {
                let li = self.idx(i, c);
                let l = self.a[li] / d;
                self.a[li] = l;
                if l != 0.0 {
                    for j in c + 1..=cmax {
                        let (x, y) = (self.idx(i, j), self.idx(c, j));
                        self.a[x] -= l * self.a[y];
                    }
                }
            }
        }
        Some(BandLu { band: self, piv })
    }
}

impl BandLu {
    fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let m = &self.band;
        let n = m.n;
        let ku = m.kl + m.ku;
        let mut x = b.clone();
        for c in 0..n {
            let p = self.piv[c];
            if p != c {
                x.swap_rows(c, p);
            }
            for i in c + 1..=(c + m.kl).min(n - 1) {
                x[i] -= m.a[m.idx(i, c)] * x[c];
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + ku).min(n - 1) {
                s -= m.a[m.idx(i, j)] * x[j];
            }
            x[i] = s / m.a[m.idx(i, i)];
        }
        x
    }
}

/// Unit vector orthogonal to `t`.
fn perpendicular(t: &Point, dim: usize) -> Point {
    if dim == 2 {
        return Point::new(-t.y, t.x, 0.0);
    }
    let axis = if t.x.abs() <= t.y.abs() && t.x.abs() <= t.z.abs() {
        Point::x()
    } else if t.y.abs() <= t.z.abs() {
        Point::y()
    } else {
        Point::z()
    };
    (axis - t * t.dot(&axis)).normalize()
}

/// Closing-condition tolerance relative to the length.
const CLOSURE_TOL: f64 = 1e-14;
/// Finite-difference step (radians) for the Hessian.
const FD_STEP: f64 = 1e-5;

/// Edge directions of an equal-edge curve; edges `lo..=hi` are free.
#[derive(Debug, Clone)]
struct Chain {
    t: Vec<Point>,
    lo: usize,
    hi: usize,
    h: f64,
    p0: Point,
    p1: Point,
    dim: usize,
    /// Tangent coordinates per edge.
    k: usize,
}

impl Chain {
    fn nvar(&self) -> usize {
        (self.hi - self.lo + 1) * self.k
    }

    fn length(&self) -> f64 {
        self.h * self.t.len() as f64
    }

    fn basis(&self, j: usize) -> [Point; 2] {
        let u = perpendicular(&self.t[j], self.dim);
        [u, self.t[j].cross(&u)]
    }

    /// Directions after moving free edge `j` to `normalize(t_j + Σ δ_c b_c)`,
    /// with the norms of the unnormalized vectors.
    fn retract(&self, delta: &DVector<f64>) -> (Vec<Point>, Vec<f64>) {
        let mut t = self.t.clone();
        let mut norms = vec![1.0; t.len()];
        for j in self.lo..=self.hi {
            let b = self.basis(j);
            let mut w = self.t[j];
            for c in 0..self.k {
                w += b[c] * delta[(j - self.lo) * self.k + c];
            }
            norms[j] = w.norm();
            t[j] = w / norms[j];
        }
        (t, norms)
    }

    fn closure(&self, t: &[Point]) -> Point {
        t.iter().sum::<Point>() * self.h - (self.p1 - self.p0)
    }

    fn energy(&self, t: &[Point]) -> f64 {
        t.windows(2).map(|w| turning_angle(&w[0], &w[1]).powi(2)).sum::<f64>() / self.h
    }

    /// Gradient of the energy with respect to unit directions; orthogonal to
    /// each direction.
    fn direction_gradient(&self, t: &[Point]) -> Vec<Point> {
        let mut g = vec![Point::zeros(); t.len()];
        for i in 1..t.len() {
            let (a, b) = (t[i - 1], t[i]);
            let theta = turning_angle(&a, &b);
            let cos = theta.cos();
            let f = -2.0 * theta_over_sin(theta) / self.h;
            g[i - 1] += (b - a * cos) * f;
            g[i] += (a - b * cos) * f;
        }
        g
    }

    /// Gradient of `δ ↦ B(retract(δ))`.
    fn pullback_gradient(&self, delta: &DVector<f64>) -> DVector<f64> {
        let (t, norms) = self.retract(delta);
        let g = self.direction_gradient(&t);
        let mut out = DVector::zeros(self.nvar());
        for j in self.lo..=self.hi {
            let b = self.basis(j);
            for c in 0..self.k {
                out[(j - self.lo) * self.k + c] = b[c].dot(&g[j]) / norms[j];
            }
        }
        out
    }

    /// Jacobian of the closing condition at `δ = 0`, `dim × nvar`.
    fn jacobian(&self) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.dim, self.nvar());
        for j in self.lo..=self.hi {
            let b = self.basis(j);
            for c in 0..self.k {
                for r in 0..self.dim {
                    jac[(r, (j - self.lo) * self.k + c)] = self.h * b[c][r];
                }
            }
        }
        jac
    }

    fn closure_vec(&self) -> DVector<f64> {
        let c = self.closure(&self.t);
        DVector::from_fn(self.dim, |r, _| c[r])
    }

    /// Restores `h Σ t_j = P1 − P0` by minimal-norm Newton corrections.
    fn project(&mut self) -> Result<()> {
        let tol = CLOSURE_TOL * self.length();
        for _ in 0..60 {
            let c = self.closure_vec();
            let size = c.amax();
            if !size.is_finite() {
                break;
            }
            if size <= tol {
                return Ok(());
            }
            let jac = self.jacobian();
            let y = (&jac * jac.transpose())
                .lu()
                .solve(&c)
                .ok_or_else(|| Error::domain("closing condition is singular"))?;
            let delta = -(jac.transpose() * y);
            if delta.amax() > 1.0 {
                break;
            }
            self.t = self.retract(&delta).0;
        }
        Err(Error::domain("projection onto the closing condition did not converge"))
    }

    /// Least-squares multipliers `μ` of `g = Jᵀμ` and the projected gradient.
    fn multipliers(&self, g: &DVector<f64>, jac: &DMatrix<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
        let mu = (jac * jac.transpose())
            .lu()
            .solve(&(jac * g))
            .ok_or_else(|| Error::domain("closing condition is singular"))?;
        let r = g - jac.transpose() * &mu;
        Ok((mu, r))
    }

    /// Hessian of the Lagrangian `B − μ·C` in tangent coordinates.
    fn lagrangian_hessian(&self, mu: &DVector<f64>) -> Band {
        let n = self.nvar();
        let bw = 2 * self.k - 1;
        let mut hess = Band::zeros(n, bw, bw);
        for color in 0..3 {
            for c in 0..self.k {
                let mut e = DVector::zeros(n);
                let cols: Vec<usize> = (self.lo..=self.hi).filter(|j| (j - self.lo) % 3 == color).collect();
                for &j in &cols {
                    e[(j - self.lo) * self.k + c] = FD_STEP;
                }
                let diff = (self.pullback_gradient(&e) - self.pullback_gradient(&-&e)) / (2.0 * FD_STEP);
                for &j in &cols {
                    let q = (j - self.lo) * self.k + c;
                    for jr in j.saturating_sub(1).max(self.lo)..=(j + 1).min(self.hi) {
                        for cr in 0..self.k {
                            let p = (jr - self.lo) * self.k + cr;
                            if p == q {
                                hess.add(p, q, diff[p]);
                            } else {
                                hess.add(p, q, 0.5 * diff[p]);
                                hess.add(q, p, 0.5 * diff[p]);
                            }
                        }
                    }
                }
            }
        }
        for j in self.lo..=self.hi {
            let tj = self.t[j];
            let dot: f64 = (0..self.dim).map(|r| mu[r] * tj[r]).sum();
            for c in 0..self.k {
                let p = (j - self.lo) * self.k + c;
                hess.add(p, p, self.h * dot);
            }
        }
        hess
    }

    /// Constrained Newton step with Levenberg regularization; `None` if no
    /// regularization yields a descent direction.
    fn newton_direction(&self, g: &DVector<f64>, jac: &DMatrix<f64>, hess: &Band) -> Option<DVector<f64>> {
        let scale = hess.max_diag().max(f64::MIN_POSITIVE);
        let c0 = self.closure_vec();
        let mut tau = 1e-9 * scale;
        for _ in 0..30 {
            let mut a = hess.clone();
            for i in 0..a.n {
                a.add(i, i, tau);
            }
            if let Some(lu) = a.lu() {
                let z = lu.solve(g);
                let y: Vec<DVector<f64>> = (0..self.dim).map(|r| lu.solve(&jac.row(r).transpose())).collect();
                let s = DMatrix::from_fn(self.dim, self.dim, |r, q| jac.row(r).dot(&y[q].transpose()));
                if let Some(nu) = s.lu().solve(&(&c0 - jac * &z)) {
                    let mut p = -z;
                    for (r, yr) in y.iter().enumerate() {
                        p -= yr * nu[r];
                    }
                    if p.iter().all(|v| v.is_finite()) && g.dot(&p) < 0.0 && hess.quad_form(&p) > 0.0 {
                        return Some(p);
                    }
                }
            }
            tau = (10.0 * tau).max(1e-6 * scale);
        }
        None
    }

    /// Most negative curvature of the Lagrangian on the tangent space of the
    /// closing condition, with its direction.
    fn lowest_curvature(&self, hess: &Band, jac: &DMatrix<f64>) -> Option<(f64, DVector<f64>)> {
        let n = self.nvar();
        let jjt = (jac * jac.transpose()).try_inverse()?;
        let proj = DMatrix::identity(n, n) - jac.transpose() * jjt * jac;
        let shift = hess.max_diag().max(1.0);
        let m = &proj * hess.to_dense() * &proj + (DMatrix::identity(n, n) - &proj) * shift;
        let eig = SymmetricEigen::new(m);
        let (i, v) = eig.eigenvalues.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| {
                if v < acc.1 {
                    (i, v)
                } else {
                    acc
                }
            },
        );
        Some((v, eig.eigenvectors.column(i).into_owned()))
    }

    /// Vertices from `P0`, with the last one set to `P1`, and the largest
    /// relative edge-length error.
    fn vertices(&self) -> (Vec<Point>, f64) {
        let mut x = Vec::with_capacity(self.t.len() + 1);
        x.push(self.p0);
        for t in &self.t {
            let last = *x.last().unwrap();
            x.push(last + t * self.h);
        }
        *x.last_mut().unwrap() = self.p1;
        let residual = x.windows(2).map(|w| ((w[1] - w[0]).norm() / self.h - 1.0).abs()).fold(0.0, f64::max);
        (x, residual)
    }

    fn perturb(&mut self, amplitude: f64, seed: u64) -> Result<()> {
        if amplitude == 0.0 {
            return Ok(());
        }
        let base = self.t.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = self.hi - self.lo + 1;
        let coeffs: Vec<[f64; 2]> =
            (0..4 * self.k).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        let mut amp = amplitude;
        for _ in 0..10 {
            let delta = DVector::from_fn(self.nvar(), |i, _| {
                let (j, c) = (i / self.k, i % self.k);
                let s = (j as f64 + 0.5) / count as f64;
                (1..=4)
                    .map(|m| {
                        let [a, b] = coeffs[(m - 1) * self.k + c];
                        let x = m as f64 * std::f64::consts::PI * s;
                        (a * x.sin() + b * x.cos()) / m as f64
                    })
                    .sum::<f64>()
                    * amp
            });
            self.t = self.retract(&delta).0;
            if self.project().is_ok() {
                return Ok(());
            }
            self.t = base.clone();
            amp *= 0.5;
        }
        self.project()
    }
}

/// `edges + 1` points with consecutive distance `h` on a circular arc from
/// `a` to `b`; for `a = b` a full circle leaving along `heading`.
fn arc(a: &Point, b: &Point, edges: usize, h: f64, heading: &Point, dim: usize) -> Vec<Point> {
    let chord = b - a;
    let d = chord.norm();
    let (u, nrm) = if d > 0.0 {
        let u = chord / d;
        let side = heading - u * u.dot(heading);
        let nrm = if side.norm() > 1e-12 { side.normalize() } else { perpendicular(&u, dim) };
        (u, nrm)
    } else {
        let u = -heading.normalize();
        (u, perpendicular(&u, dim))
    };
    // d/h = sin(edges·β/2)/sin(β/2) on (0, 2π/edges]
    let q = d / h;
    let f = |beta: f64| (edges as f64 * beta / 2.0).sin() / (beta / 2.0).sin() - q;
    let (mut lo, mut hi) = (1e-300, 2.0 * std::f64::consts::PI / edges as f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let radius = h / (2.0 * (beta / 2.0).sin());
    let half = edges as f64 * beta / 2.0;
    let mid = (a + b) / 2.0;
    let mut pts: Vec<Point> = (0..=edges)
        .map(|i| {
            let phi = -half + beta * i as f64;
            mid + u * (radius * phi.sin()) + nrm * (radius * (phi.cos() - half.cos()))
        })
        .collect();
    pts[0] = *a;
    pts[edges] = *b;
    pts
}

fn directions(points: &[Point]) -> Vec<Point> {
    points.windows(2).map(|w| (w[1] - w[0]).normalize()).collect()
}

fn default_tol(opts: &MinimizeOptions, n: usize) -> f64 {
    opts.tol.unwrap_or(1e-8 * n as f64)
}

/// Minimizes the bending energy among curves of `N` equal edges and length
/// `L0` from `P0` to `P1`, starting from a circular arc (perturbed when
/// `opts.perturbation > 0`).
pub fn minimize_pinned(problem: &PinnedProblem, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    let p = PinnedProblem::new(problem.p0, problem.p1, problem.length, problem.n, problem.dim)?;
    let h = p.edge_length();
    let pts = arc(&p.p0, &p.p1, p.n, h, &Point::x(), p.dim);
    let mut chain = Chain { t: directions(&pts), lo: 0, hi: p.n - 1, h, p0: p.p0, p1: p.p1, dim: p.dim, k: p.dim - 1 };
    chain.project()?;
    chain.perturb(opts.perturbation, opts.seed)?;
    run(chain, opts, default_tol(opts, p.n))
}

/// As [`minimize_pinned`] with the first and last edges fixed along `V0`
/// and `V1`.
pub fn minimize_clamped(problem: &ClampedProblem, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    let p = ClampedProblem::new(
        problem.ends.p0,
        problem.ends.p1,
        problem.v0,
        problem.v1,
        problem.ends.length,
        problem.ends.n,
        problem.ends.dim,
    )?;
    let e = p.ends;
    let h = e.edge_length();
    if p.is_straight() {
        let x: Vec<Point> = (0..=e.n).map(|i| e.p0 + (e.p1 - e.p0) * (i as f64 / e.n as f64)).collect();
        let curve = DiscreteCurve::new(x, false, e.dim)?;
        let entry = IterationLog { iteration: 0, bending: 0.0, grad_norm: 0.0, max_constraint_residual: 0.0 };
        return Ok(MinimizeResult {
            bending: curve.bending_energy(),
            bbar: curve.normalized_energy().bbar,
            curve,
            lambda_est: None,
            grad_norm: 0.0,
            iterations: 0,
            converged: true,
            saddle_perturbed: false,
            max_constraint_residual: 0.0,
            log: vec![entry],
        });
    }
    let a = e.p0 + p.v0 * h;
    let b = e.p1 - p.v1 * h;
    let mut t = vec![p.v0];
    t.extend(directions(&arc(&a, &b, e.n - 2, h, &p.v0, e.dim)));
    t.push(p.v1);
    let mut chain = Chain { t, lo: 1, hi: e.n - 2, h, p0: e.p0, p1: e.p1, dim: e.dim, k: e.dim - 1 };
    chain.project()?;
    chain.perturb(opts.perturbation, opts.seed)?;
    run(chain, opts, default_tol(opts, e.n))
}

const ARMIJO: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
/// Negative curvature below `-SADDLE_TOL·max diag` marks a saddle.
const SADDLE_TOL: f64 = 1e-6;
/// Largest tangent-coordinate change (radians) of the saddle perturbation.
const SADDLE_KICK: f64 = 1e-2;

fn run(mut chain: Chain, opts: &MinimizeOptions, tol: f64) -> Result<MinimizeResult> {
    let mut log = Vec::new();
    let mut perturbed = false;
    let mut converged = false;
    let mut iterations = 0;
    let mut grad_norm;
    loop {
        let zero = DVector::zeros(chain.nvar());
        let g = chain.pullback_gradient(&zero);
        let jac = chain.jacobian();
        let (mu, r) = chain.multipliers(&g, &jac)?;
        grad_norm = r.norm();
        let energy = chain.energy(&chain.t);
        log.push(IterationLog {
            iteration: iterations,
            bending: energy,
            grad_norm,
            max_constraint_residual: chain.vertices().1,
        });
        if grad_norm < tol {
            if !perturbed {
                let hess = chain.lagrangian_hessian(&mu);
                if let Some((lowest, dir)) = chain.lowest_curvature(&hess, &jac) {
                    if lowest < -SADDLE_TOL * hess.max_diag() {
                        perturbed = true;
                        chain.t = chain.retract(&(dir.clone() * (SADDLE_KICK / dir.amax()))).0;
                        chain.project()?;
                        continue;
                    }
                }
            }
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        let (p, alpha0) = match opts.method {
            Method::Newton => {
                let hess = chain.lagrangian_hessian(&mu);
                match chain.newton_direction(&g, &jac, &hess) {
                    Some(p) => (p, 1.0),
                    None => gradient_step(&chain, &r),
                }
            }
            Method::Gradient => gradient_step(&chain, &r),
        };
        let slope = g.dot(&p);
        let mut alpha = alpha0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial = chain.clone();
            trial.t = chain.retract(&(&p * alpha)).0;
            if trial.project().is_ok() && trial.energy(&trial.t) <= energy + ARMIJO * alpha * slope {
                accepted = Some(trial);
                break;
            }
            alpha *= BACKTRACK;
        }
        match accepted {
            Some(next) => chain = next,
            None => break,
        }
        iterations += 1;
    }
    let (x, residual) = chain.vertices();
    let curve = DiscreteCurve::new(x, false, chain.dim)?;
    let rep = curve.normalized_energy();
    Ok(MinimizeResult {
        lambda_est: estimate_multiplier(&curve).ok(),
        bending: rep.bending,
        bbar: rep.bbar,
        curve,
        grad_norm,
        iterations,
        converged,
        saddle_perturbed: perturbed,
        max_constraint_residual: residual,
        log,
    })
}

/// Steepest descent along the projected gradient, first trial moving the
/// fastest edge by one radian.
fn gradient_step(chain: &Chain, r: &DVector<f64>) -> (DVector<f64>, f64) {
    let largest = (0..chain.hi - chain.lo + 1)
        .map(|j| (0..chain.k).map(|c| r[j * chain.k + c].powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    (-r, 1.0 / largest.max(f64::MIN_POSITIVE))
}

/// The curve expressed in coordinates of its best-fit plane; errors if it is
/// not planar to `1e-9·L`.
fn planar_view(curve: &DiscreteCurve) -> Result<DiscreteCurve> {
    if curve.dim() == 2 {
        return Ok(curve.clone());
    }
    let x = curve.vertices();
    let centroid = x.iter().sum::<Point>() / x.len() as f64;
    let cov = x.iter().fold(nalgebra::Matrix3::zeros(), |acc, p| acc + (p - centroid) * (p - centroid).transpose());
    let eig = cov.symmetric_eigen();
    let mut order = [0, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let (e1, e2, nrm) =
        (eig.eigenvectors.column(order[0]), eig.eigenvectors.column(order[1]), eig.eigenvectors.column(order[2]));
    let off = x.iter().map(|p| (p - centroid).dot(&nrm).abs()).fold(0.0, f64::max);
    if off > 1e-9 * curve.length() {
        return Err(Error::domain("the multiplier fit needs a planar curve"));
    }
    let pts: Vec<Point> = x.iter().map(|p| Point::new((p - centroid).dot(&e1), (p - centroid).dot(&e2), 0.0)).collect();
    DiscreteCurve::new(pts, curve.is_closed(), 2)
}

/// Least-squares `λ` in `2κ_ss + κ³ − λκ = 0` over the vertices where the
/// second difference of the discrete signed curvature is available.
pub fn estimate_multiplier(curve: &DiscreteCurve) -> Result<f64> {
    let c = planar_view(curve)?;
    let k = c.signed_curvatures()?;
    let s = c.arclength_params();
    let n = k.len();
    let total = c.length();
    let interior = if c.is_closed() { n } else { n.saturating_sub(2) };
    if interior < 16 {
        return Err(Error::domain(format!("the multiplier fit needs 16 interior vertices, got {interior}")));
    }
    let kmax = k.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if kmax * total < 1e-8 {
        return Err(Error::Indeterminate("curvature vanishes; the multiplier is undetermined".into()));
    }
    let idx: Vec<usize> = if c.is_closed() { (0..n).collect() } else { (2..n - 2).collect() };
    let (mut num, mut den) = (0.0, 0.0);
    for i in idx {
        let (im, ip) = ((i + n - 1) % n, (i + 1) % n);
        let mut dm = s[i] - s[im];
        let mut dp = s[ip] - s[i];
        if dm <= 0.0 {
            dm += total;
        }
        if dp <= 0.0 {
            dp += total;
        }
        let kss = 2.0 * ((k[ip] - k[i]) / dp - (k[i] - k[im]) / dm) / (dm + dp);
        let w = 0.5 * (dm + dp);
        num += w * k[i] * (2.0 * kss + k[i].powi(3));
        den += w * k[i] * k[i];
    }
    if den <= 1e-16 * kmax * kmax * total {
        return Err(Error::Indeterminate("curvature vanishes; the multiplier is undetermined".into()));
    }
    Ok(num / den)
}

/// Curvature at each end of an open curve, extrapolated linearly from the
/// first two interior vertices.
pub fn endpoint_curvatures(curve: &DiscreteCurve) -> Result<(f64, f64)> {
    if curve.is_closed() || curve.len() < 5 {
        return Err(Error::domain("endpoint curvature needs an open curve with at least 5 vertices"));
    }
    let k = curve.curvatures();
    let s = curve.arclength_params();
    let n = k.len();
    let extrap = |k1: f64, k2: f64, d1: f64, d2: f64| (k1 - d1 * (k2 - k1) / (d2 - d1)).abs();
    let start = extrap(k[1], k[2], s[1], s[2]);
    let end = extrap(k[n - 2], k[n - 3], s[n - 1] - s[n - 2], s[n - 1] - s[n - 3]);
    Ok((start, end))
}

/// Hausdorff distance between the vertex sets after the best orthogonal
/// alignment of corresponding vertices (either traversal direction).
pub fn congruence_distance(a: &DiscreteCurve, b: &DiscreteCurve) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::domain("congruence needs curves with equal vertex counts"));
    }
    let pa = a.vertices();
    let ca = pa.iter().sum::<Point>() / pa.len() as f64;
    let mut best = f64::INFINITY;
    for reversed in [false, true] {
        let mut pb: Vec<Point> = b.vertices().to_vec();
        if reversed {
            pb.reverse();
        }
        let cb = pb.iter().sum::<Point>() / pb.len() as f64;
        let cross =
            pa.iter().zip(&pb).fold(nalgebra::Matrix3::zeros(), |acc, (p, q)| acc + (q - cb) * (p - ca).transpose());
        let svd = cross.svd(true, true);
        let rot = svd.v_t.unwrap().transpose() * svd.u.unwrap().transpose();
        let moved: Vec<Point> = pb.iter().map(|q| rot * (q - cb) + ca).collect();
        best = best.min(hausdorff(pa, &moved));
    }
    Ok(best)
}

fn hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let one_sided = |x: &[Point], y: &[Point]| {
        x.iter().map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Amplitude (radians) of the initial perturbation in the leaf experiment.
pub const LEAF_PERTURBATION: f64 = 0.3;

/// Outcome of the multi-seed leaf experiment.
#[derive(Debug, Clone, Serialize)]
pub struct LeafMinimality {
    pub n: usize,
    pub seeds: usize,
    pub bbar: Vec<f64>,
    pub converged: Vec<bool>,
    pub min_bbar: f64,
    pub median_bbar: f64,
    /// `min B̄/ϖ* − 1`.
    pub deviation: f64,
    /// Every run ends with `B̄ ≥ ϖ*(1 − 0.01)`.
    pub all_above: bool,
    /// Distance of the best run to the leaf of length 1.
    pub leaf_distance: f64,
    /// Largest pairwise congruence distance between runs.
    pub congruence: f64,
    pub lambda_est: Option<f64>,
    pub pass: bool,
}

/// The pinned problem `P0 = P1 = 0`, `L0 = 1` used by the leaf experiment.
pub fn leaf_problem(n: usize) -> Result<PinnedProblem> {
    PinnedProblem::new(Point::zeros(), Point::zeros(), 1.0, n, 2)
}

/// Options of seed `seed` in the leaf experiment.
pub fn leaf_options(seed: u64) -> MinimizeOptions {
    MinimizeOptions { seed, perturbation: LEAF_PERTURBATION, ..MinimizeOptions::default() }
}

/// Summarizes runs of [`leaf_problem`].
pub fn leaf_minimality_report(n: usize, runs: &[MinimizeResult]) -> Result<LeafMinimality> {
    if runs.is_empty() {
        return Err(Error::domain("no runs to summarize"));
    }
    let floor = varpi_star();
    let bbar: Vec<f64> = runs.iter().map(|r| r.bbar).collect();
    let mut sorted = bbar.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let best = runs.iter().min_by(|a, b| a.bbar.total_cmp(&b.bbar)).unwrap();
    let leaf = build_leaf(best.curve.len() - 1)?.scaled(1.0 / (2.0 * figure_eight().k_mstar))?;
    let leaf_distance = congruence_distance(&best.curve, &leaf)?;
    let mut congruence: f64 = 0.0;
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            congruence = congruence.max(congruence_distance(&runs[i].curve, &runs[j].curve)?);
        }
    }
    let deviation = sorted[0] / floor - 1.0;
    let all_above = bbar.iter().all(|b| *b >= floor * (1.0 - 0.01));
    Ok(LeafMinimality {
        n,
        seeds: runs.len(),
        converged: runs.iter().map(|r| r.converged).collect(),
        min_bbar: sorted[0],
        median_bbar: median,
        deviation,
        all_above,
        leaf_distance,
        congruence,
        lambda_est: best.lambda_est,
        pass: deviation.abs() <= 0.01 && all_above,
        bbar,
    })
}

/// Runs [`leaf_problem`] from `seeds` perturbed starts and summarizes them.
pub fn verify_leaf_minimality(n: usize, seeds: usize) -> Result<LeafMinimality> {
    if n < 100 {
        return Err(Error::domain(format!("the leaf experiment needs N >= 100, got {n}")));
    }
    let problem = leaf_problem(n)?;
    let runs = (0..seeds as u64).map(|s| minimize_pinned(&problem, &leaf_options(s))).collect::<Result<Vec<_>>>()?;
    leaf_minimality_report(n, &runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_lu_matches_dense() {
        let n = 12;
        let mut b = Band::zeros(n, 2, 2);
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
                b.add(i, j, ((i * 7 + j * 3) % 5) as f64 - 2.0 + if i == j { 0.5 } else { 0.0 });
            }
        }
        let dense = b.to_dense();
        let rhs = DVector::from_fn(n, |i, _| i as f64 - 3.0);
        let x = b.lu().unwrap().solve(&rhs);
        assert!((dense * x - rhs).amax() < 1e-10);
    }

    #[test]
    fn arc_has_equal_chords() {
        for (a, b) in [(Point::zeros(), Point::new(0.3, 0.1, 0.0)), (Point::zeros(), Point::zeros())] {
            let pts = arc(&a, &b, 40, 0.025, &Point::x(), 2);
            assert_eq!(pts[0], a);
            assert_eq!(pts[40], b);
            assert!(pts.windows(2).all(|w| ((w[1] - w[0]).norm() - 0.025).abs() < 1e-12));
        }
    }

    #[test]
    fn doubly_covered_circle_is_a_saddle_in_space() {
        let n = 120;
        let h = 2.0 / n as f64;
        let t = (0..n)
            .map(|j| {
                let a = 4.0 * std::f64::consts::PI * j as f64 / (n - 1) as f64;
                Point::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        let mut chain = Chain { t, lo: 1, hi: n - 2, h, p0: Point::zeros(), p1: Point::zeros(), dim: 3, k: 2 };
        chain.project().unwrap();
        let start = chain.energy(&chain.t);
        let r = run(chain, &MinimizeOptions::default(), 1e-8 * n as f64).unwrap();
        assert!(r.converged && r.saddle_perturbed);
        assert!(r.bending < 0.9 * start, "{} vs {start}", r.bending);
    }

    #[test]
    fn rejects_bad_problems() {
        assert!(PinnedProblem::new(Point::zeros(), Point::new(1.0, 0.0, 0.0), 1.0, 20, 2).is_err());
        assert!(PinnedProblem::new(Point::zeros(), Point::zeros(), 1.0, 4, 2).is_err());
        let v = Point::y();
        assert!(ClampedProblem::new(Point::zeros(), Point::new(1.0, 0.0, 0.0), v, v, 1.0, 20, 2).is_err());
        assert!(ClampedProblem::new(Point::zeros(), Point::zeros(), v * 2.0, v, 1.0, 20, 2).is_err());
    }
}
