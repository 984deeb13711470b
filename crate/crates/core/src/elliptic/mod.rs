//! Jacobi elliptic integrals and functions.
//!
//! Everything is indexed by the *parameter* `m ∈ [0, 1]` (not the modulus
//! `k = √m`). Complete integrals use the arithmetic–geometric mean,
//! incomplete integrals use Carlson's symmetric forms, and `sn`, `cn`, `dn`
//! use the descending Landen sequence (see [`Jacobi`]).
//!
//! Accuracy target: absolute error below `1e-12` for `m ≤ 1 − 1e-9` and
//! `|x| ≤ 100`. Operations that involve `K(m)` refuse `m > 1 − 1e-9`.

mod carlson;
mod jacobi;

use std::f64::consts::{FRAC_PI_2, PI};

use crate::{Error, Result};

pub use jacobi::{cn, dn, sn, Jacobi};

/// Largest parameter accepted by operations that depend on `K(m)`.
pub const K_PARAMETER_LIMIT: f64 = 1.0 - 1e-9;

/// `K'(0) = π/8`, the limit of [`dk_dm`] as `m → 0`.
pub const DK_DM_AT_ZERO: f64 = PI / 8.0;

/// `E'(0) = −π/8`, the limit of [`de_dm`] as `m → 0`.
pub const DE_DM_AT_ZERO: f64 = -PI / 8.0;

/// A validated elliptic parameter `m ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&m) {
            Ok(Self(m))
        } else {
            Err(Error::domain(format!("elliptic parameter m = {m} outside [0, 1]")))
        }
    }

    /// Rejects `m` beyond [`K_PARAMETER_LIMIT`], where `K` diverges.
    pub fn below_one(m: f64) -> Result<Self> {
        let p = Self::new(m)?;
        if m > K_PARAMETER_LIMIT {
            return Err(Error::domain(format!("m = {m} too close to 1 (K(m) diverges; limit is 1 - 1e-9)")));
        }
        Ok(p)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for EllipticParameter {
    type Error = Error;
    fn try_from(m: f64) -> Result<Self> {
        Self::new(m)
    }
}

impl From<EllipticParameter> for f64 {
    fn from(p: EllipticParameter) -> f64 {
        p.0
    }
}

/// A value together with an a-posteriori absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticValue {
    pub value: f64,
    pub est_abs_error: f64,
}

/// Arithmetic–geometric mean sequence for `(1, √(1−m))`.
///
/// Returns the limit `a_N` and `Σ 2^{n−1} c_n²` (with `c_0² = m`), which
/// gives `E/K = 1 − Σ`.
fn agm_sequence(m: f64) -> (f64, f64, f64) {
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut sum = 0.5 * m;
    let mut pow = 0.5;
    let mut last_gap = (a - b).abs();
    for _ in 0..64 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
        last_gap = c.abs();
    }
    (a, sum, last_gap)
}

/// Complete elliptic integral of the first kind, `K(m) = F(π/2, m)`.
pub fn comp_k(m: f64) -> Result<f64> {
    comp_k_est(m).map(|v| v.value)
}

pub fn comp_k_est(m: f64) -> Result<EllipticValue> {
    let m = EllipticParameter::below_one(m)?.value();
    if m == 0.0 {
        return Ok(EllipticValue { value: FRAC_PI_2, est_abs_error: 0.0 });
    }
    let (a, _, gap) = agm_sequence(m);
    let value = PI / (2.0 * a);
    // quadratic convergence: the residual gap is squared by the next step
    let est_abs_error = value * (8.0 * f64::EPSILON + gap * gap);
    Ok(EllipticValue { value, est_abs_error })
}

/// Complete elliptic integral of the second kind, `E(m) = E(π/2, m)`.
/// Defined on the closed interval, with `E(1) = 1`.
pub fn comp_e(m: f64) -> Result<f64> {
    comp_e_est(m).map(|v| v.value)
}

pub fn comp_e_est(m: f64) -> Result<EllipticValue> {
    let m = EllipticParameter::new(m)?.value();
    if m == 0.0 {
        return Ok(EllipticValue { value: FRAC_PI_2, est_abs_error: 0.0 });
    }
    if m == 1.0 {
        return Ok(EllipticValue { value: 1.0, est_abs_error: 0.0 });
    }
    let (a, sum, gap) = agm_sequence(m);
    let k = PI / (2.0 * a);
    let value = k * (1.0 - sum);
    // E = K(1 − Σ) loses about K·ε to cancellation as m → 1
    let est_abs_error = k * (4.0 * f64::EPSILON + gap * gap);
    Ok(EllipticValue { value, est_abs_error })
}

/// Splits `x = jπ + r` with `|r| ≤ π/2`.
fn reduce_half_period(x: f64) -> (f64, f64) {
    let j = (x / PI).round();
    (j, x - j * PI)
}

/// Incomplete elliptic integral of the first kind
/// `F(x, m) = ∫₀ˣ (1 − m sin²θ)^{−1/2} dθ`.
pub fn ellint_f(x: f64, m: f64) -> Result<f64> {
    ellint_f_est(x, m).map(|v| v.value)
}

pub fn ellint_f_est(x: f64, m: f64) -> Result<EllipticValue> {
    let m = EllipticParameter::below_one(m)?.value();
    if !x.is_finite() {
        return Err(Error::domain(format!("ellint_f: non-finite argument {x}")));
    }
    if m == 0.0 {
        return Ok(EllipticValue { value: x, est_abs_error: 0.0 });
    }
    let (j, r) = reduce_half_period(x);
    let (s, c) = r.sin_cos();
    let reduced = s * carlson::rf(c * c, 1.0 - m * s * s, 1.0);
    let mut value = reduced;
    let mut est = 8.0 * f64::EPSILON * reduced.abs();
    if j != 0.0 {
        let k = comp_k_est(m)?;
        value += 2.0 * j * k.value;
        est += 2.0 * j.abs() * k.est_abs_error + f64::EPSILON * (x.abs() + value.abs());
    }
    Ok(EllipticValue { value, est_abs_error: est })
}

/// Incomplete elliptic integral of the second kind
/// `E(x, m) = ∫₀ˣ (1 − m sin²θ)^{1/2} dθ`.
pub fn ellint_e(x: f64, m: f64) -> Result<f64> {
    ellint_e_est(x, m).map(|v| v.value)
}

pub fn ellint_e_est(x: f64, m: f64) -> Result<EllipticValue> {
    let m = EllipticParameter::below_one(m)?.value();
    if !x.is_finite() {
        return Err(Error::domain(format!("ellint_e: non-finite argument {x}")));
    }
    if m == 0.0 {
        return Ok(EllipticValue { value: x, est_abs_error: 0.0 });
    }
    let (j, r) = reduce_half_period(x);
    let reduced = incomplete_e_reduced(r, m);
    let mut value = reduced;
    let mut est = 16.0 * f64::EPSILON * reduced.abs().max(1.0);
    if j != 0.0 {
        let e = comp_e_est(m)?;
        value += 2.0 * j * e.value;
        est += 2.0 * j.abs() * e.est_abs_error + f64::EPSILON * (x.abs() + value.abs());
    }
    Ok(EllipticValue { value, est_abs_error: est })
}

/// `E(r, m)` for `|r| ≤ π/2` and `0 < m < 1`.
fn incomplete_e_reduced(r: f64, m: f64) -> f64 {
    let (s, c) = r.sin_cos();
    let (x, y) = (c * c, 1.0 - m * s * s);
    s * carlson::rf(x, y, 1.0) - m * s * s * s * carlson::rd(x, y, 1.0) / 3.0
}

/// Jacobi amplitude, the inverse of `F(·, m)`.
///
/// Newton iteration on `F` from the seed `x·π/(2K)`, falling back to
/// bisection on the bracket `[−π/2, π/2]` after reducing `x` modulo `2K`.
pub fn am(x: f64, m: f64) -> Result<f64> {
    let m = EllipticParameter::below_one(m)?.value();
    if !x.is_finite() {
        return Err(Error::domain(format!("am: non-finite argument {x}")));
    }
    if m == 0.0 {
        return Ok(x);
    }
    let k = comp_k(m)?;
    let j = (x / (2.0 * k)).round();
    let r = x - 2.0 * j * k;
    Ok(j * PI + invert_reduced_f(r, m, k))
}

/// Solves `F(φ, m) = r` for `|r| ≤ K`, `φ ∈ [−π/2, π/2]`.
fn invert_reduced_f(r: f64, m: f64, k: f64) -> f64 {
    let f = |phi: f64| {
        let (s, c) = phi.sin_cos();
        s * carlson::rf(c * c, 1.0 - m * s * s, 1.0)
    };
    let (lo0, hi0) = (-FRAC_PI_2, FRAC_PI_2);
    let mut phi = (r * FRAC_PI_2 / k).clamp(lo0, hi0);
    for _ in 0..40 {
        let residual = f(phi) - r;
        let slope_inv = (1.0 - m * phi.sin().powi(2)).sqrt();
        let step = residual * slope_inv;
        let next = phi - step;
        if !(lo0..=hi0).contains(&next) || !next.is_finite() {
            break;
        }
        phi = next;
        if step.abs() <= 4.0 * f64::EPSILON * phi.abs().max(1e-300) {
            return phi;
        }
    }
    // Newton failed to settle; bisect.
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn open_unit_interval(m: f64, what: &str) -> Result<f64> {
    if m > 0.0 && m < 1.0 {
        Ok(m)
    } else {
        Err(Error::domain(format!(
            "{what}: closed form requires 0 < m < 1, got {m} (limits at 0 are DK_DM_AT_ZERO / DE_DM_AT_ZERO)"
        )))
    }
}

/// `K'(m) = (E − (1−m)K) / (2m(1−m))`.
pub fn dk_dm(m: f64) -> Result<f64> {
    let m = open_unit_interval(m, "dk_dm")?;
    let (k, e) = (comp_k(m)?, comp_e(m)?);
    Ok((e - (1.0 - m) * k) / (2.0 * m * (1.0 - m)))
}

/// `E'(m) = (E − K) / (2m)`.
pub fn de_dm(m: f64) -> Result<f64> {
    let m = open_unit_interval(m, "de_dm")?;
    let (k, e) = (comp_k(m)?, comp_e(m)?);
    Ok((e - k) / (2.0 * m))
}

/// `∂ₘF(x, m) = E/(2m(1−m)) − F/(2m) − sin x cos x / (2(1−m)√(1 − m sin²x))`.
pub fn d_ellint_f_dm(x: f64, m: f64) -> Result<f64> {
    let m = open_unit_interval(m, "d_ellint_f_dm")?;
    let (f, e) = (ellint_f(x, m)?, ellint_e(x, m)?);
    let (s, c) = x.sin_cos();
    Ok(e / (2.0 * m * (1.0 - m)) - f / (2.0 * m) - s * c / (2.0 * (1.0 - m) * (1.0 - m * s * s).sqrt()))
}

/// `∂ₘE(x, m) = (E(x, m) − F(x, m)) / (2m)`.
pub fn d_ellint_e_dm(x: f64, m: f64) -> Result<f64> {
    let m = open_unit_interval(m, "d_ellint_e_dm")?;
    Ok((ellint_e(x, m)? - ellint_f(x, m)?) / (2.0 * m))
}

/// Coefficients `((2n−1)!!/(2n)!!)²` of the Maclaurin series of `2K/π`.
fn central_ratio_squares(terms: usize) -> impl Iterator<Item = (usize, f64)> {
    (0..terms).scan(1.0_f64, |ratio, n| {
        if n > 0 {
            *ratio *= (2 * n - 1) as f64 / (2 * n) as f64;
        }
        Some((n, *ratio * *ratio))
    })
}

/// Truncated power series `K(m) ≈ (π/2) Σ ((2n−1)!!/(2n)!!)² mⁿ`.
pub fn comp_k_series(m: f64, terms: usize) -> f64 {
    let mut pow = 1.0;
    let mut sum = 0.0;
    for (_, coef) in central_ratio_squares(terms) {
        sum += coef * pow;
        pow *= m;
    }
    FRAC_PI_2 * sum
}

/// Truncated power series `E(m) ≈ (π/2) Σ ((2n−1)!!/(2n)!!)² mⁿ / (1 − 2n)`.
pub fn comp_e_series(m: f64, terms: usize) -> f64 {
    let mut pow = 1.0;
    let mut sum = 0.0;
    for (n, coef) in central_ratio_squares(terms) {
        sum += coef * pow / (1.0 - 2.0 * n as f64);
        pow *= m;
    }
    FRAC_PI_2 * sum
}
