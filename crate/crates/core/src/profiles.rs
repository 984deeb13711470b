//! Curvature-level solutions of the elastica equation.
//!
//! For an arclength-parametrised elastica the squared curvature `u = |κ|²`
//! solves `(u')² = −u³ + 2λu² + 4a·u − 4c² =: P(u)`, and every non-straight
//! solution is captured by four numbers `(m, w, A, s0)`:
//!
//! ```text
//! |κ(s)|² = A² (1 − (m/w) sn²(A s / (2√w) + s0, m)),   0 ≤ m ≤ w ≤ 1, w > 0, A > 0
//! λ = A² (3w − m − 1) / (2w)
//! 4c² = A⁶ (1 − w)(w − m) / w²
//! ```
//!
//! The roots of `P` are `α₁ = A²(1 − 1/w) ≤ 0 ≤ α₂ = A²(1 − m/w) ≤ α₃ = A²`.

use serde::{Deserialize, Serialize};

use crate::elliptic::Jacobi;
use crate::{Error, Result};

/// Curvature profile `(m, w, A, s0)` of a general (planar or spatial) elastica.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub m: f64,
    pub w: f64,
    /// Peak curvature, in inverse length units.
    pub amplitude: f64,
    /// Phase, added to the scaled arclength inside `sn`.
    pub s0: f64,
}

impl CurvatureProfile {
    pub fn new(m: f64, w: f64, amplitude: f64, s0: f64) -> Result<Self> {
        if !(0.0 <= m && m <= w && w <= 1.0 && w > 0.0) {
            return Err(Error::domain(format!("profile requires 0 <= m <= w <= 1 and w > 0, got m = {m}, w = {w}")));
        }
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::domain(format!("profile amplitude must be positive, got {amplitude}")));
        }
        if !s0.is_finite() {
            return Err(Error::domain("profile phase must be finite"));
        }
        Ok(Self { m, w, amplitude, s0 })
    }

    /// Multiplier `λ = A²(3w − m − 1)/(2w)`.
    pub fn lambda(&self) -> f64 {
        let a2 = self.amplitude * self.amplitude;
        a2 * (3.0 * self.w - self.m - 1.0) / (2.0 * self.w)
    }

    /// Nonnegative root of `4c² = A⁶(1 − w)(w − m)/w²`.
    pub fn c(&self) -> f64 {
        let a2 = self.amplitude * self.amplitude;
        let c2 = a2 * a2 * a2 * (1.0 - self.w) * (self.w - self.m) / (4.0 * self.w * self.w);
        c2.max(0.0).sqrt()
    }

    /// Roots `(α₁, α₂, α₃)` of the cubic `P`.
    pub fn roots(&self) -> (f64, f64, f64) {
        let a2 = self.amplitude * self.amplitude;
        (a2 * (1.0 - 1.0 / self.w), a2 * (1.0 - self.m / self.w), a2)
    }

    /// The integration constant `a` with `4a = −(α₁α₂ + α₂α₃ + α₃α₁)`.
    pub fn energy_constant(&self) -> f64 {
        let (a1, a2, a3) = self.roots();
        -(a1 * a2 + a2 * a3 + a3 * a1) / 4.0
    }

    /// Evaluates the cubic `P(u) = −u³ + 2λu² + 4a·u − 4c²`.
    pub fn cubic(&self, u: f64) -> f64 {
        let c = self.c();
        -u * u * u + 2.0 * self.lambda() * u * u + 4.0 * self.energy_constant() * u - 4.0 * c * c
    }

    /// True when the profile belongs to a planar elastica (`c = 0`).
    pub fn is_planar(&self) -> bool {
        self.w == 1.0 || self.w == self.m
    }

    fn frequency(&self) -> f64 {
        self.amplitude / (2.0 * self.w.sqrt())
    }

    /// Scaled argument `A s/(2√w) + s0` fed to the elliptic functions.
    pub fn phase_at(&self, s: f64) -> f64 {
        self.frequency() * s + self.s0
    }

    /// Arclength period of `|κ|²`, i.e. `2K(m)` in the scaled argument.
    /// Infinite for `m = 1`.
    pub fn period(&self) -> f64 {
        let k = Jacobi::new(self.m).map(|j| j.quarter_period()).unwrap_or(f64::INFINITY);
        2.0 * k / self.frequency()
    }

    pub fn jacobi(&self) -> Jacobi {
        Jacobi::new(self.m).expect("profile parameter validated at construction")
    }

    /// `|κ|²(s)`.
    pub fn kappa_sq(&self, s: f64) -> f64 {
        self.kappa_sq_with(&self.jacobi(), s)
    }

    pub fn kappa_sq_with(&self, jac: &Jacobi, s: f64) -> f64 {
        let sn = jac.sn(self.phase_at(s));
        let a2 = self.amplitude * self.amplitude;
        a2 * (1.0 - self.m / self.w * sn * sn)
    }

    /// Derivative of `|κ|²` in arclength.
    pub fn kappa_sq_prime(&self, s: f64) -> f64 {
        let (sn, cn, dn) = self.jacobi().sncndn(self.phase_at(s));
        let a2 = self.amplitude * self.amplitude;
        -a2 * self.m / self.w * 2.0 * sn * cn * dn * self.frequency()
    }

    /// Curvature as a smooth function: signed `A cn(·)` on the wavelike
    /// branch `m = w`, otherwise `√u` (which is bounded away from zero unless
    /// `m = w`).
    pub fn curvature(&self, s: f64) -> f64 {
        let jac = self.jacobi();
        self.curvature_with(&jac, s)
    }

    pub fn curvature_with(&self, jac: &Jacobi, s: f64) -> f64 {
        if self.m == self.w && self.m > 0.0 {
            self.amplitude * jac.cn(self.phase_at(s))
        } else {
            self.kappa_sq_with(jac, s).max(0.0).sqrt()
        }
    }

    /// Derivative of [`CurvatureProfile::curvature`].
    pub fn curvature_prime(&self, s: f64) -> f64 {
        let (sn, cn, dn) = self.jacobi().sncndn(self.phase_at(s));
        if self.m == self.w && self.m > 0.0 {
            -self.amplitude * sn * dn * self.frequency()
        } else {
            let k = self.curvature(s);
            if k == 0.0 {
                return 0.0;
            }
            let a2 = self.amplitude * self.amplitude;
            -a2 * self.m / self.w * sn * cn * dn * self.frequency() / k
        }
    }

    /// Torsion `t = c/|κ|²`. Planar profiles have no torsion.
    pub fn torsion(&self, s: f64) -> Result<f64> {
        let c = self.c();
        if c == 0.0 {
            return Err(Error::domain("torsion undefined for a planar profile (c = 0)"));
        }
        Ok(c / self.kappa_sq(s))
    }

    /// Plain-text `key = value` record.
    pub fn to_record(&self, sign: f64) -> String {
        format!(
            "m = {:.17e}\nw = {:.17e}\nA = {:.17e}\ns0 = {:.17e}\nsign = {}\n",
            self.m,
            self.w,
            self.amplitude,
            self.s0,
            if sign < 0.0 { -1 } else { 1 }
        )
    }

    /// Parses the record written by [`CurvatureProfile::to_record`];
    /// returns the profile and its sign (`±1`, default `+1`).
    pub fn from_record(text: &str) -> Result<(Self, f64)> {
        let kv = crate::io::parse_key_values(text)?;
        let get = |k: &str| -> Result<f64> {
            kv.get(k)
                .ok_or_else(|| Error::Parse(format!("profile record missing key `{k}`")))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("profile key `{k}`: {e}")))
        };
        let s0 = if kv.contains_key("s0") { get("s0")? } else { 0.0 };
        let sign = if kv.contains_key("sign") { get("sign")?.signum() } else { 1.0 };
        Ok((Self::new(get("m")?, get("w")?, get("A")?, s0)?, sign))
    }
}

/// Solution of `(u')² = (α₁ − u)(α₂ − u)(α₃ − u)`.
#[derive(Debug, Clone)]
pub enum CubicOdeSolution {
    /// `u ≡ α₂` or `u ≡ α₃`.
    Constant(f64),
    /// `u(s) = α₃ − (α₃ − α₂) sn²(√(α₃−α₁) s/2 + s0, (α₃−α₂)/(α₃−α₁))`.
    Elliptic { roots: (f64, f64, f64), s0: f64, jacobi: Jacobi },
}

impl CubicOdeSolution {
    /// Non-constant solution for roots `α₁ ≤ 0 ≤ α₂ < α₃`.
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64, s0: f64) -> Result<Self> {
        if !(alpha1 <= 0.0 && 0.0 <= alpha2 && alpha2 < alpha3) {
            return Err(Error::domain(format!(
                "cubic roots must satisfy a1 <= 0 <= a2 < a3, got ({alpha1}, {alpha2}, {alpha3})"
            )));
        }
        let m = (alpha3 - alpha2) / (alpha3 - alpha1);
        Ok(Self::Elliptic { roots: (alpha1, alpha2, alpha3), s0, jacobi: Jacobi::new(m)? })
    }

    /// One of the two constant solutions; `value` must equal `α₂` or `α₃`.
    pub fn constant(alpha1: f64, alpha2: f64, alpha3: f64, value: f64) -> Result<Self> {
        if !(alpha1 <= 0.0 && 0.0 <= alpha2 && alpha2 <= alpha3) {
            return Err(Error::domain("cubic roots must satisfy a1 <= 0 <= a2 <= a3"));
        }
        if value != alpha2 && value != alpha3 {
            return Err(Error::domain(format!(
                "constant solution must be a2 = {alpha2} or a3 = {alpha3}, got {value}"
            )));
        }
        Ok(Self::Constant(value))
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Elliptic { roots: (a1, a2, a3), s0, jacobi } => {
                let sn = jacobi.sn((a3 - a1).sqrt() * s / 2.0 + s0);
                a3 - (a3 - a2) * sn * sn
            }
        }
    }

    /// `P(u) = (α₁ − u)(α₂ − u)(α₃ − u)`, zero for constant solutions.
    pub fn cubic(&self, u: f64) -> f64 {
        match self {
            Self::Constant(_) => 0.0,
            Self::Elliptic { roots: (a1, a2, a3), .. } => (a1 - u) * (a2 - u) * (a3 - u),
        }
    }
}

/// The five planar curvature families, up to sign and phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum PlanarFamily {
    Linear,
    Wavelike { m: f64 },
    Borderline,
    Orbitlike { m: f64 },
    Circular,
}

impl PlanarFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Wavelike { m } | Self::Orbitlike { m } if !(m > 0.0 && m < 1.0) => {
                Err(Error::domain(format!("family parameter m = {m} must lie in (0, 1)")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Wavelike { .. } => "wavelike",
            Self::Borderline => "borderline",
            Self::Orbitlike { .. } => "orbitlike",
            Self::Circular => "circular",
        }
    }
}

/// Signed planar curvature `k(s) = ±A f(αs + β)` with `f ∈ {0, cn, sech, dn, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarCurvature {
    pub family: PlanarFamily,
    /// Peak `|k|`; ignored for the linear family.
    pub amplitude: f64,
    pub phase: f64,
    /// `+1` or `−1`.
    pub sign: f64,
}

impl PlanarCurvature {
    pub fn new(family: PlanarFamily, amplitude: f64, phase: f64, sign: f64) -> Result<Self> {
        family.validate()?;
        if family != PlanarFamily::Linear && !(amplitude > 0.0) {
            return Err(Error::domain(format!("amplitude must be positive, got {amplitude}")));
        }
        if sign != 1.0 && sign != -1.0 {
            return Err(Error::domain(format!("sign must be +1 or -1, got {sign}")));
        }
        Ok(Self { family, amplitude, phase, sign })
    }

    /// Frequency `α` tied to the amplitude: `A² = 4α²m` (wavelike),
    /// `A² = 4α²` (borderline, orbitlike); `0` otherwise.
    pub fn frequency(&self) -> f64 {
        match self.family {
            PlanarFamily::Wavelike { m } => self.amplitude / (2.0 * m.sqrt()),
            PlanarFamily::Borderline | PlanarFamily::Orbitlike { .. } => self.amplitude / 2.0,
            PlanarFamily::Linear | PlanarFamily::Circular => 0.0,
        }
    }

    /// The multiplier of the family; `None` for lines, which solve every λ.
    pub fn lambda(&self) -> Option<f64> {
        let a2 = self.amplitude * self.amplitude;
        match self.family {
            PlanarFamily::Linear => None,
            PlanarFamily::Wavelike { m } => Some(a2 * (2.0 * m - 1.0) / (2.0 * m)),
            PlanarFamily::Borderline => Some(a2 / 2.0),
            PlanarFamily::Orbitlike { m } => Some(a2 * (2.0 - m) / 2.0),
            PlanarFamily::Circular => Some(a2),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        let x = self.frequency() * s + self.phase;
        let magnitude = match self.family {
            PlanarFamily::Linear => return 0.0,
            PlanarFamily::Wavelike { m } => crate::elliptic::cn(x, m).expect("validated m"),
            PlanarFamily::Borderline => 1.0 / x.cosh(),
            PlanarFamily::Orbitlike { m } => crate::elliptic::dn(x, m).expect("validated m"),
            PlanarFamily::Circular => 1.0,
        };
        self.sign * self.amplitude * magnitude
    }
}

/// Central-difference residual `2k'' + k³ − λk` of the planar equation.
pub fn residual_planar(k: impl Fn(f64) -> f64, lambda: f64, s: f64, h: f64) -> f64 {
    let k0 = k(s);
    let kss = (k(s + h) - 2.0 * k0 + k(s - h)) / (h * h);
    2.0 * kss + k0 * k0 * k0 - lambda * k0
}

/// Central-difference residual `2k'' + k³ − λk − 2c²/k³` of the spatial
/// equation; `k` must stay away from zero.
pub fn residual_spatial(k: impl Fn(f64) -> f64, lambda: f64, c: f64, s: f64, h: f64) -> f64 {
    let k0 = k(s);
    let torsion_term = if c == 0.0 { 0.0 } else { 2.0 * c * c / (k0 * k0 * k0) };
    residual_planar(k, lambda, s, h) - torsion_term
}
