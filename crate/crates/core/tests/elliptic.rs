mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{agm_k, central_diff, integrate, quad_e, quad_f, rng};
use elastica::elliptic::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn quadrature_oracle_self_check() {
    assert!((integrate(|x: f64| x.sin(), 0.0, PI, 1e-15) - 2.0).abs() < 1e-14);
    assert!((integrate(|x: f64| x.exp(), 0.0, 1.0, 1e-15) - (1f64.exp() - 1.0)).abs() < 1e-14);
    assert!((quad_f(FRAC_PI_2, 0.5) - agm_k(0.5)).abs() < 1e-14);
}

#[test]
fn ellint_f_examples() {
    assert_eq!(ellint_f(0.7, 0.0).unwrap(), 0.7);
    assert_eq!(ellint_f(-1.1, 0.3).unwrap(), -ellint_f(1.1, 0.3).unwrap());
    let k_oracle = agm_k(0.5);
    assert!((k_oracle - 1.854_074_677_301_37).abs() < 1e-13);
    assert!((ellint_f(FRAC_PI_2, 0.5).unwrap() - k_oracle).abs() < 1e-13);
}

#[test]
fn ellint_e_examples() {
    assert_eq!(ellint_e(0.7, 0.0).unwrap(), 0.7);
    assert!((ellint_e(PI, 0.5).unwrap() - 2.0 * comp_e(0.5).unwrap()).abs() < 1e-14);
    let oracle = quad_e(1.0, 0.5);
    assert!((ellint_e(1.0, 0.5).unwrap() - oracle).abs() < 1e-13);
}

#[test]
fn complete_integral_examples() {
    assert_eq!(comp_k(0.0).unwrap(), FRAC_PI_2);
    assert!((comp_k(0.5).unwrap() - agm_k(0.5)).abs() < 1e-14);
    assert!((comp_k(0.1).unwrap() - comp_k_series(0.1, 30)).abs() < 1e-12);
    assert_eq!(comp_e(0.0).unwrap(), FRAC_PI_2);
    assert_eq!(comp_e(1.0).unwrap(), 1.0);
    let e_oracle = quad_e(FRAC_PI_2, 0.5);
    assert!((e_oracle - 1.350_643_881_047_68).abs() < 1e-13);
    assert!((comp_e(0.5).unwrap() - e_oracle).abs() < 1e-13);
}

#[test]
fn complete_integrals_against_quadrature_grid() {
    for i in 0..=40 {
        let m = 0.999 * i as f64 / 40.0;
        let (k, e) = (comp_k(m).unwrap(), comp_e(m).unwrap());
        assert!((k - quad_f(FRAC_PI_2, m)).abs() < 1e-12, "K({m})");
        assert!((e - quad_e(FRAC_PI_2, m)).abs() < 1e-12, "E({m})");
        assert!((k - agm_k(m)).abs() < 1e-12, "K({m}) vs AGM");
        assert!(k >= FRAC_PI_2 && (1.0..=FRAC_PI_2).contains(&e));
        assert!(k >= e);
    }
}

#[test]
fn complete_integrals_monotone() {
    let mut prev = (comp_k(0.0).unwrap(), comp_e(0.0).unwrap());
    for i in 1..=100 {
        let m = i as f64 / 100.0 * 0.999_999;
        let cur = (comp_k(m).unwrap(), comp_e(m).unwrap());
        assert!(cur.0 > prev.0 && cur.1 < prev.1);
        prev = cur;
    }
}

#[test]
fn amplitude_examples() {
    assert_eq!(am(0.0, 0.4).unwrap(), 0.0);
    let k = comp_k(0.5).unwrap();
    assert!((am(k, 0.5).unwrap() - FRAC_PI_2).abs() < 1e-14);
    let phi = am(1.3, 0.7).unwrap();
    assert!((ellint_f(phi, 0.7).unwrap() - 1.3).abs() < 1e-12);
    // independent route: quadrature of F at the returned amplitude
    assert!((quad_f(phi, 0.7) - 1.3).abs() < 1e-12);
}

#[test]
fn amplitude_quasi_periodic() {
    let mut r = rng(7);
    for _ in 0..200 {
        let m = r.gen_range(0.0..0.99);
        let x = r.gen_range(-40.0..40.0);
        let k = comp_k(m).unwrap();
        let a = am(x, m).unwrap();
        assert!((am(x + 2.0 * k, m).unwrap() - a - PI).abs() < 1e-12);
        assert!((ellint_f(a, m).unwrap() - x).abs() < 1e-12);
    }
}

#[test]
fn elliptic_function_examples() {
    assert!((sn(0.9, 1.0).unwrap() - 0.9_f64.tanh()).abs() < 1e-16);
    let m = 0.3;
    let k = comp_k(m).unwrap();
    assert!(cn(k, m).unwrap().abs() < 1e-14);
    assert!((dn(k, m).unwrap() - (1.0 - m).sqrt()).abs() < 1e-14);
    // Landen route vs Newton-inverted amplitude
    let via_am = am(0.4, 0.6).unwrap().sin();
    assert!((sn(0.4, 0.6).unwrap() - via_am).abs() < 1e-13);
}

#[test]
fn jacobi_agrees_with_amplitude_route() {
    let mut r = rng(11);
    for _ in 0..500 {
        let m = r.gen_range(0.0..K_PARAMETER_LIMIT);
        let x = r.gen_range(-100.0..100.0);
        let phi = am(x, m).unwrap();
        let (s, c, d) = Jacobi::new(m).unwrap().sncndn(x);
        assert!((s - phi.sin()).abs() < 1e-12, "sn({x},{m})");
        assert!((c - phi.cos()).abs() < 1e-12, "cn({x},{m})");
        assert!((d - (1.0 - m * phi.sin().powi(2)).sqrt()).abs() < 1e-12, "dn({x},{m})");
    }
}

#[test]
fn parameter_derivative_examples() {
    let de = de_dm(0.5).unwrap();
    let oracle = (quad_e(FRAC_PI_2, 0.5) - agm_k(0.5)) / 1.0;
    assert!((de - oracle).abs() < 1e-12);
    assert!((de + 0.503_43).abs() < 1e-5);
    for &m in &[0.1, 0.5, 0.9] {
        assert!(dk_dm(m).unwrap() > 0.0);
        assert!(de_dm(m).unwrap() < 0.0);
    }
    let fd = central_diff(|m| comp_k(m).unwrap(), 0.4, 1e-6);
    assert!((fd - dk_dm(0.4).unwrap()).abs() < 1e-6);
    // limits at zero
    assert!((dk_dm(1e-6).unwrap() - DK_DM_AT_ZERO).abs() < 1e-5);
    assert!((de_dm(1e-6).unwrap() - DE_DM_AT_ZERO).abs() < 1e-5);
}

#[test]
fn incomplete_parameter_derivatives() {
    for &(x, m) in &[(0.3, 0.2), (1.2, 0.5), (2.9, 0.8), (-4.0, 0.35)] {
        let fd_e = central_diff(|mm| ellint_e(x, mm).unwrap(), m, 1e-6);
        let fd_f = central_diff(|mm| ellint_f(x, mm).unwrap(), m, 1e-6);
        assert!((fd_e - d_ellint_e_dm(x, m).unwrap()).abs() < 1e-7 * (1.0 + fd_e.abs()));
        assert!((fd_f - d_ellint_f_dm(x, m).unwrap()).abs() < 1e-7 * (1.0 + fd_f.abs()));
        assert!(d_ellint_f_dm(x.abs(), m).unwrap() > 0.0);
        assert!(d_ellint_e_dm(x.abs(), m).unwrap() < 0.0);
    }
}

#[test]
fn series_expansions() {
    for i in 0..=30 {
        let m = 0.3 * i as f64 / 30.0;
        assert!((comp_k_series(m, 40) - comp_k(m).unwrap()).abs() < 1e-12);
        assert!((comp_e_series(m, 40) - comp_e(m).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn f_dominates_e() {
    for i in 1..20 {
        let x = i as f64 * 0.3;
        assert_eq!(ellint_f(x, 0.0).unwrap(), ellint_e(x, 0.0).unwrap());
        for &m in &[0.2, 0.6, 0.95] {
            assert!(ellint_f(x, m).unwrap() > ellint_e(x, m).unwrap());
            assert!(ellint_f(-x, m).unwrap() < ellint_e(-x, m).unwrap());
        }
    }
}

#[test]
fn monotone_in_parameter() {
    for &x in &[0.4, 1.5, 3.0, 7.5] {
        let mut prev = (ellint_f(x, 0.0).unwrap(), ellint_e(x, 0.0).unwrap());
        for i in 1..50 {
            let m = i as f64 / 50.0;
            let cur = (ellint_f(x, m).unwrap(), ellint_e(x, m).unwrap());
            assert!(cur.0 > prev.0 && cur.1 < prev.1, "x={x} m={m}");
            prev = cur;
        }
    }
}

proptest! {
    #[test]
    fn pythagorean_identities(x in -100.0f64..100.0, m in 0.0f64..=1.0) {
        let (s, c, d) = Jacobi::new(m).unwrap().sncndn(x);
        prop_assert!((s * s + c * c - 1.0).abs() < 1e-12);
        prop_assert!((d * d + m * s * s - 1.0).abs() < 1e-12);
        prop_assert!((d * d - m * c * c - (1.0 - m)).abs() < 1e-12);
    }

    #[test]
    fn derivative_formulae(x in -20.0f64..20.0, m in 0.0f64..=1.0) {
        let j = Jacobi::new(m).unwrap();
        let h = 1e-5;
        let (s, c, d) = j.sncndn(x);
        let checks = [
            (central_diff(|t| j.sn(t), x, h), c * d),
            (central_diff(|t| j.cn(t), x, h), -s * d),
            (central_diff(|t| j.dn(t), x, h), -m * s * c),
        ];
        for (fd, exact) in checks {
            prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1e-3));
        }
    }

    #[test]
    fn parity_and_periods(x in -50.0f64..50.0, m in 0.0f64..0.999) {
        let j = Jacobi::new(m).unwrap();
        let k = j.quarter_period();
        let (s, c, d) = j.sncndn(x);
        let (sm, cm, dm) = j.sncndn(-x);
        prop_assert!((s + sm).abs() < 1e-12 && (c - cm).abs() < 1e-12 && (d - dm).abs() < 1e-12);
        let (sp, cp, dp) = j.sncndn(x + 2.0 * k);
        prop_assert!((s + sp).abs() < 1e-12 && (c + cp).abs() < 1e-12 && (d - dp).abs() < 1e-12);
    }

    #[test]
    fn incomplete_quasi_periodicity(x in -90.0f64..90.0, m in 0.0f64..0.999_999) {
        let k = comp_k(m).unwrap();
        let e = comp_e(m).unwrap();
        prop_assert!((ellint_f(x + PI, m).unwrap() - ellint_f(x, m).unwrap() - 2.0 * k).abs() < 1e-12);
        prop_assert!((ellint_e(x + PI, m).unwrap() - ellint_e(x, m).unwrap() - 2.0 * e).abs() < 1e-12);
    }

    #[test]
    fn variable_derivatives(x in -10.0f64..10.0, m in 0.0f64..0.99) {
        let sin2 = x.sin().powi(2);
        let df = central_diff(|t| ellint_f(t, m).unwrap(), x, 1e-5);
        let de = central_diff(|t| ellint_e(t, m).unwrap(), x, 1e-5);
        let exact_f = 1.0 / (1.0 - m * sin2).sqrt();
        prop_assert!((df - exact_f).abs() < 1e-6 * exact_f);
        prop_assert!(exact_f >= 1.0 && exact_f <= 1.0 / (1.0 - m).sqrt() + 1e-15);
        prop_assert!((de - (1.0 - m * sin2).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn incomplete_against_quadrature(x in -6.0f64..6.0, m in 0.0f64..0.99) {
        prop_assert!((ellint_f(x, m).unwrap() - quad_f(x, m)).abs() < 1e-12);
        prop_assert!((ellint_e(x, m).unwrap() - quad_e(x, m)).abs() < 1e-12);
    }
}
