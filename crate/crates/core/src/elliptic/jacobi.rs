use std::f64::consts::PI;

use super::EllipticParameter;
use crate::Result;

/// Jacobi elliptic functions for a fixed parameter.
///
/// Precomputes the descending Landen (AGM) sequence once, so repeated
/// evaluation along a curve only costs a handful of `asin` calls. The
/// argument is first reduced modulo the real period `4K`; at `m = 1` the
/// closed hyperbolic forms are used.
#[derive(Debug, Clone)]
pub struct Jacobi {
    m: f64,
    quarter_period: f64,
    /// `c_n / a_n` for n = 1..=N.
    ratios: Vec<f64>,
    /// `2^N a_N`.
    scale: f64,
}

impl Jacobi {
    pub fn new(m: f64) -> Result<Self> {
        let m = EllipticParameter::new(m)?.value();
        if m == 1.0 {
            return Ok(Self { m, quarter_period: f64::INFINITY, ratios: Vec::new(), scale: 1.0 });
        }
        let mut a = 1.0_f64;
        let mut b = (1.0 - m).sqrt();
        let mut ratios = Vec::new();
        let mut scale = 1.0;
        let mut c = m.sqrt();
        while c.abs() > f64::EPSILON * a && ratios.len() < 64 {
            let an = 0.5 * (a + b);
            c = 0.5 * (a - b);
            b = (a * b).sqrt();
            a = an;
            scale *= 2.0;
            ratios.push(c / a);
        }
        Ok(Self { m, quarter_period: PI / (2.0 * a), ratios, scale: scale * a })
    }

    pub fn parameter(&self) -> f64 {
        self.m
    }

    /// `K(m)`; infinite at `m = 1`.
    pub fn quarter_period(&self) -> f64 {
        self.quarter_period
    }

    /// Amplitude `am(x)` from the Landen recursion, continuous in `x`.
    /// At `m = 1` this is the Gudermannian.
    pub fn am(&self, x: f64) -> f64 {
        if self.m == 1.0 {
            return x.sinh().atan();
        }
        let period = 4.0 * self.quarter_period;
        let j = (x / period).round();
        let r = x - j * period;
        let mut phi = self.scale * r;
        for &ratio in self.ratios.iter().rev() {
            phi = 0.5 * (phi + (ratio * phi.sin()).asin());
        }
        phi + 2.0 * PI * j
    }

    /// Returns `(sn, cn, dn)` at `x`.
    pub fn sncndn(&self, x: f64) -> (f64, f64, f64) {
        if self.m == 1.0 {
            let sech = 1.0 / x.cosh();
            return (x.tanh(), sech, sech);
        }
        let (s, c) = self.am(x).sin_cos();
        // (1 − m) + m cn² has no cancellation, unlike 1 − m sn²
        let d = ((1.0 - self.m) + self.m * c * c).sqrt();
        (s, c, d)
    }

    pub fn sn(&self, x: f64) -> f64 {
        self.sncndn(x).0
    }

    pub fn cn(&self, x: f64) -> f64 {
        self.sncndn(x).1
    }

    pub fn dn(&self, x: f64) -> f64 {
        self.sncndn(x).2
    }
}

/// Elliptic sine; `m = 1` gives `tanh`.
pub fn sn(x: f64, m: f64) -> Result<f64> {
    Ok(Jacobi::new(m)?.sn(x))
}

/// Elliptic cosine; `m = 1` gives `sech`.
pub fn cn(x: f64, m: f64) -> Result<f64> {
    Ok(Jacobi::new(m)?.cn(x))
}

/// Delta amplitude; `m = 1` gives `sech`.
pub fn dn(x: f64, m: f64) -> Result<f64> {
    Ok(Jacobi::new(m)?.dn(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::comp_k;

    #[test]
    fn hyperbolic_limit() {
        let j = Jacobi::new(1.0).unwrap();
        assert_eq!(j.sn(0.9), 0.9_f64.tanh());
        assert_eq!(j.cn(0.9), 1.0 / 0.9_f64.cosh());
        assert_eq!(j.dn(0.9), j.cn(0.9));
    }

    #[test]
    fn circular_limit() {
        let j = Jacobi::new(0.0).unwrap();
        let (s, c, d) = j.sncndn(0.8);
        assert!((s - 0.8_f64.sin()).abs() < 1e-16);
        assert!((c - 0.8_f64.cos()).abs() < 1e-16);
        assert_eq!(d, 1.0);
    }

    #[test]
    fn quarter_period_values() {
        let m = 0.3;
        let k = comp_k(m).unwrap();
        let j = Jacobi::new(m).unwrap();
        assert!((j.quarter_period() - k).abs() < 1e-15);
        assert!(j.cn(k).abs() < 1e-15);
        assert!((j.dn(k) - (1.0 - m).sqrt()).abs() < 1e-15);
        assert!((j.sn(k) - 1.0).abs() < 1e-15);
        assert!((j.cn(2.0 * k) + 1.0).abs() < 1e-15);
        assert!((j.sn(3.0 * k) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameter() {
        assert!(Jacobi::new(1.000_001).is_err());
        assert!(sn(0.1, -0.5).is_err());
    }
}
