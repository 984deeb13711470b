//! Initial-value integration of the elastica equation in position form,
//!
//! ```text
//! 2γ'''' + 6⟨γ'', γ'''⟩γ' + 3|γ''|²γ'' − λγ'' = 0,
//! ```
//!
//! as the first-order system for `(γ, d1, d2, d3) = (γ, γ', γ'', γ''')`.
//! Steps are classical RK4 with a fixed step; each step is checked against
//! two half steps and rejected when they disagree by more than the limit.
//! Nothing is re-projected, so conservation monitors stay honest.

use nalgebra::Matrix3;
use serde::Serialize;

use crate::profiles::CurvatureProfile;
use crate::{Error, Point, Result};

/// Position and the first three arclength derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElasticaState {
    pub gamma: Point,
    pub d1: Point,
    pub d2: Point,
    pub d3: Point,
    /// 2 for data confined to `z = 0` and treated as planar, otherwise 3.
    pub dim: usize,
}

/// Tolerance on `|d1| = 1` and `⟨d1, d2⟩ = 0` at initialization.
pub const INITIAL_STATE_TOL: f64 = 1e-9;

impl ElasticaState {
    pub fn new(gamma: Point, d1: Point, d2: Point, d3: Point) -> Result<Self> {
        if (d1.norm() - 1.0).abs() > INITIAL_STATE_TOL {
            return Err(Error::domain(format!("initial tangent has length {}", d1.norm())));
        }
        if d1.dot(&d2).abs() > INITIAL_STATE_TOL {
            return Err(Error::domain("initial d2 is not orthogonal to the tangent"));
        }
        Ok(Self { gamma, d1, d2, d3, dim: 3 })
    }

    /// Marks the state as planar; every vector must lie in `z = 0`.
    pub fn into_planar(self) -> Result<Self> {
        if [self.gamma, self.d1, self.d2, self.d3].iter().any(|v| v.z != 0.0) {
            return Err(Error::domain("planar state must lie in z = 0"));
        }
        Ok(Self { dim: 2, ..self })
    }

    /// State of an arclength curve with curvature `k`, its derivative `k'`
    /// and torsion `t` in the Frenet frame `(T, N, B)`:
    /// `d2 = kN`, `d3 = −k²T + k'N + ktB`.
    pub fn from_frenet(gamma: Point, frame: [Point; 3], k: f64, k_prime: f64, t: f64) -> Result<Self> {
        let [tan, nor, bin] = frame;
        Self::new(gamma, tan, nor * k, tan * (-k * k) + nor * k_prime + bin * (k * t))
    }

    /// Initial state at arclength `s` of the elastica with the given profile,
    /// placed at the origin with Frenet frame `(e1, e2, e3)`.
    pub fn from_profile(profile: &CurvatureProfile, s: f64) -> Result<Self> {
        let k = profile.curvature(s);
        let kp = profile.curvature_prime(s);
        let c = profile.c();
        let t = if c == 0.0 { 0.0 } else { c / (k * k) };
        Self::from_frenet(Point::zeros(), [Point::x(), Point::y(), Point::z()], k, kp, t)
    }

    fn to_array(self) -> [Point; 4] {
        [self.gamma, self.d1, self.d2, self.d3]
    }

    fn from_array(y: [Point; 4], dim: usize) -> Self {
        Self { gamma: y[0], d1: y[1], d2: y[2], d3: y[3], dim }
    }

    /// `det(d1, d2, d3)`.
    pub fn det(&self) -> f64 {
        Matrix3::from_columns(&[self.d1, self.d2, self.d3]).determinant()
    }
}

/// States `h` apart in arclength, starting at `s = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub h: f64,
    pub lambda: f64,
    /// Dimension of the initial state.
    pub dim: usize,
    pub states: Vec<ElasticaState>,
    /// Largest half-step error estimate seen.
    pub max_error_estimate: f64,
}

/// Integration options.
#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions {
    /// Reject a step whose half-step error estimate exceeds this.
    pub error_limit: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { error_limit: 1e-6 }
    }
}

fn rhs(y: &[Point; 4], lambda: f64) -> [Point; 4] {
    let [_, d1, d2, d3] = *y;
    let d4 = (d1 * (-6.0 * d2.dot(&d3)) - d2 * (3.0 * d2.norm_squared()) + d2 * lambda) * 0.5;
    [d1, d2, d3, d4]
}

fn rk4_step(y: &[Point; 4], lambda: f64, h: f64) -> [Point; 4] {
    let axpy = |y: &[Point; 4], d: &[Point; 4], a: f64| -> [Point; 4] { std::array::from_fn(|i| y[i] + d[i] * a) };
    let k1 = rhs(y, lambda);
    let k2 = rhs(&axpy(y, &k1, 0.5 * h), lambda);
    let k3 = rhs(&axpy(y, &k2, 0.5 * h), lambda);
    let k4 = rhs(&axpy(y, &k3, h), lambda);
    std::array::from_fn(|i| y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
}

/// Integrates from `s = 0` to `s_end` with step `h` (the last step is
/// shortened to land on `s_end`).
pub fn integrate_elastica(
    initial: ElasticaState,
    lambda: f64,
    s_end: f64,
    h: f64,
    opts: IntegrateOptions,
) -> Result<Trajectory> {
    if !(h > 0.0) || !(s_end > 0.0) || !lambda.is_finite() {
        return Err(Error::domain("integration needs h > 0, s_end > 0 and a finite multiplier"));
    }
    let steps = (s_end / h - 1e-9).ceil() as usize;
    let mut y = initial.to_array();
    let mut states = Vec::with_capacity(steps + 1);
    states.push(initial);
    let mut max_err: f64 = 0.0;
    for i in 0..steps {
        let step = h.min(s_end - h * i as f64);
        let full = rk4_step(&y, lambda, step);
        let half = rk4_step(&rk4_step(&y, lambda, 0.5 * step), lambda, 0.5 * step);
        let err = (0..4).map(|j| (full[j] - half[j]).amax()).fold(0.0, f64::max) / 15.0;
        if !(err <= opts.error_limit) {
            return Err(Error::StepRejected { s: h * i as f64, estimate: err, limit: opts.error_limit });
        }
        max_err = max_err.max(err);
        y = full;
        states.push(ElasticaState::from_array(y, initial.dim));
    }
    Ok(Trajectory { h, lambda, dim: initial.dim, states, max_error_estimate: max_err })
}

impl Trajectory {
    pub fn arclength(&self, i: usize) -> f64 {
        self.h * i as f64
    }

    /// `det(γ', γ'', γ''')` at every state; needs a spatial trajectory.
    pub fn monitor_det(&self) -> Result<Vec<f64>> {
        if self.dim != 3 {
            return Err(Error::domain("the determinant monitor needs a trajectory in R^3"));
        }
        Ok(self.states.iter().map(ElasticaState::det).collect())
    }

    /// Largest `||γ'| − 1|`.
    pub fn unit_speed_drift(&self) -> f64 {
        self.states.iter().map(|s| (s.d1.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// The constant `a` of `(u')² = −u³ + 2λu² + 4au − 4c²` recovered at each
    /// state from `u = |γ''|²`, `u' = 2⟨γ'', γ'''⟩` and `c = det(γ', γ'', γ''')`.
    /// Undefined (NaN) where `u = 0`.
    pub fn first_integral(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|st| {
                let u = st.d2.norm_squared();
                let up = 2.0 * st.d2.dot(&st.d3);
                let c = st.det();
                if u == 0.0 {
                    f64::NAN
                } else {
                    (up * up + u * u * u - 2.0 * self.lambda * u * u + 4.0 * c * c) / (4.0 * u)
                }
            })
            .collect()
    }

    /// Largest distance of the positions from the initial osculating plane;
    /// the initial derivatives must span at most two dimensions.
    pub fn planarity_drift(&self, tol: f64) -> Result<f64> {
        let first = self.states.first().ok_or_else(|| Error::domain("empty trajectory"))?;
        if dimension_of_span(first, tol) == 3 {
            return Err(Error::domain("initial derivatives span three dimensions"));
        }
        let normal = least_singular_direction(first);
        Ok(self.states.iter().map(|s| (s.gamma - first.gamma).dot(&normal).abs()).fold(0.0, f64::max))
    }
}

fn span_matrix(state: &ElasticaState) -> Matrix3<f64> {
    Matrix3::from_columns(&[state.d1, state.d2, state.d3])
}

fn least_singular_direction(state: &ElasticaState) -> Point {
    let svd = span_matrix(state).svd(true, false);
    let u = svd.u.expect("requested");
    let (idx, _) =
        svd.singular_values.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| {
                if v < acc.1 {
                    (i, v)
                } else {
                    acc
                }
            },
        );
    u.column(idx).into_owned()
}

/// Numerical rank of `(γ', γ'', γ''')`, dropping singular values below
/// `tol·σ_max`.
pub fn dimension_of_span(state: &ElasticaState, tol: f64) -> usize {
    let sv = span_matrix(state).singular_values();
    let max = sv.max();
    sv.iter().filter(|&&v| v > tol * max).count().max(1)
}
