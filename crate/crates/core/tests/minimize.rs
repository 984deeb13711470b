mod common;

use std::f64::consts::PI;

use common::rng;
use elastica::curves::{build_leafed, figure_eight, varpi_star};
use elastica::discrete::DiscreteCurve;
use elastica::elliptic::{comp_e, comp_k, Jacobi};
use elastica::minimize::{
    congruence_distance, endpoint_curvatures, energy_gradient, estimate_multiplier, leaf_minimality_report,
    leaf_options, leaf_problem, minimize_clamped, minimize_pinned, verify_leaf_minimality, ClampedProblem, Method,
    MinimizeOptions, PinnedProblem,
};
use elastica::{Error, Point};
use rand::Rng;

fn circle(n: usize, radius: f64) -> DiscreteCurve {
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            [radius * t.cos(), radius * t.sin()]
        })
        .collect();
    DiscreteCurve::planar(&pts, true).unwrap()
}

fn random_curve(g: &mut impl Rng, n: usize, closed: bool, dim: usize) -> DiscreteCurve {
    let pts = (0..n)
        .map(|i| {
            let t = i as f64 / n as f64 * if closed { 2.0 * PI } else { 4.0 };
            let z = if dim == 3 { g.gen_range(-0.3..0.3) } else { 0.0 };
            Point::new(t.cos() + g.gen_range(-0.2..0.2), t.sin() + g.gen_range(-0.2..0.2), z)
        })
        .collect();
    DiscreteCurve::new(pts, closed, dim).unwrap()
}

fn fd_gradient(c: &DiscreteCurve, h: f64) -> Vec<Point> {
    let base = c.vertices().to_vec();
    let mut out = vec![Point::zeros(); base.len()];
    for i in 0..base.len() {
        for k in 0..c.dim() {
            let energy = |step: f64| {
                let mut v = base.clone();
                v[i][k] += step;
                DiscreteCurve::new(v, c.is_closed(), c.dim()).unwrap().bending_energy()
            };
            out[i][k] = (energy(h) - energy(-h)) / (2.0 * h);
        }
    }
    out
}

#[test]
fn gradient_matches_finite_differences() {
    let mut g = rng(17);
    for (closed, dim) in [(true, 2), (false, 2), (true, 3), (false, 3)] {
        let c = random_curve(&mut g, 32, closed, dim);
        let exact = energy_gradient(&c);
        let fd = fd_gradient(&c, 1e-6);
        let scale = exact.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = exact.iter().zip(&fd).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-5 * scale, "closed = {closed}, dim = {dim}: {err} vs {scale}");
    }
}

#[test]
fn gradient_of_straight_line_vanishes() {
    let line = DiscreteCurve::planar(&[[0.0, 0.0], [1.0, 0.0], [1.5, 0.0], [3.0, 0.0], [4.0, 0.0]], false).unwrap();
    assert!(energy_gradient(&line).iter().all(|v| v.norm() == 0.0));
}

#[test]
fn tangential_motion_of_a_circle_costs_nothing() {
    let c = circle(64, 1.0);
    let g = energy_gradient(&c);
    let x = c.vertices();
    let n = x.len();
    let dir: Vec<Point> = (0..n).map(|i| (x[(i + 1) % n] - x[(i + n - 1) % n]).normalize()).collect();
    let exact: f64 = g.iter().zip(&dir).map(|(a, b)| a.dot(b)).sum();
    let moved = |eps: f64| {
        let v = x.iter().zip(&dir).map(|(p, d)| p + d * eps).collect();
        DiscreteCurve::new(v, true, 2).unwrap().bending_energy()
    };
    let fd = (moved(1e-6) - moved(-1e-6)) / 2e-6;
    assert!(exact.abs() < 1e-9 && fd.abs() < 1e-6, "{exact} {fd}");
}

#[test]
fn multiplier_of_known_curves() {
    let lam = estimate_multiplier(&circle(512, 1.0)).unwrap();
    assert!((lam - 1.0).abs() < 1e-4, "{lam}");
    let eight = build_leafed(2, 2).unwrap().sample(2048).unwrap();
    let m = figure_eight().m_star;
    let lam = estimate_multiplier(&eight).unwrap();
    assert!((lam / (2.0 * (2.0 * m - 1.0)) - 1.0).abs() < 1e-3, "{lam}");
    for scale in [0.25, 3.0] {
        let scaled = estimate_multiplier(&eight.scaled(scale).unwrap()).unwrap();
        assert!((scaled * scale * scale / lam - 1.0).abs() < 0.02);
    }
    let tilted =
        eight.lifted().transformed(&elastica::curves::RigidMotion::about_axis(&Point::new(1.0, 1.0, 0.0), 0.7));
    let lam3 = estimate_multiplier(&tilted.unwrap()).unwrap();
    assert!((lam3 / lam - 1.0).abs() < 1e-9);
}

#[test]
fn multiplier_errors() {
    let pts: Vec<[f64; 2]> = (0..40).map(|i| [i as f64, 0.0]).collect();
    let line = DiscreteCurve::planar(&pts, false).unwrap();
    assert!(matches!(estimate_multiplier(&line), Err(Error::Indeterminate(_))));
    let short = DiscreteCurve::planar(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], true).unwrap();
    assert!(matches!(estimate_multiplier(&short), Err(Error::Domain(_))));
}

#[test]
fn leaf_is_the_pinned_minimizer() {
    let runs: Vec<_> =
        (0..5).map(|s| minimize_pinned(&leaf_problem(200).unwrap(), &leaf_options(s)).unwrap()).collect();
    let floor = varpi_star();
    for r in &runs {
        assert!(r.converged);
        assert!(r.grad_norm < 1e-8 * 200.0);
        assert!(r.max_constraint_residual < 1e-10);
        assert!(r.bbar >= floor * 0.99);
        assert_eq!(r.curve.vertices()[0], Point::zeros());
        assert_eq!(r.curve.vertices()[200], Point::zeros());
        // energy never increases
        assert!(r.log.windows(2).all(|w| w[1].bending <= w[0].bending));
        let (a, b) = endpoint_curvatures(&r.curve).unwrap();
        let kmax = r.curve.curvatures().iter().cloned().fold(0.0, f64::max);
        assert!(a <= 5e-2 * kmax && b <= 5e-2 * kmax, "{a} {b} {kmax}");
    }
    let rep = leaf_minimality_report(200, &runs).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.deviation.abs() < 0.01);
    assert!(rep.leaf_distance < 1e-2 && rep.congruence < 1e-2, "{rep:?}");
    let k = figure_eight().k_mstar;
    let m = figure_eight().m_star;
    let expected = 2.0 * (2.0 * m - 1.0) * (2.0 * k).powi(2);
    let lam = rep.lambda_est.unwrap();
    assert!((lam / expected - 1.0).abs() < 0.02, "{lam} vs {expected}");
}

#[test]
fn leaf_experiment_refines() {
    let coarse = verify_leaf_minimality(200, 5).unwrap();
    let fine = verify_leaf_minimality(400, 5).unwrap();
    assert!(coarse.pass && fine.pass);
    assert!(fine.deviation.abs() < coarse.deviation.abs());
    assert!(matches!(verify_leaf_minimality(50, 1), Err(Error::Domain(_))));
}

#[test]
fn spatial_leaf_problem_finds_the_planar_leaf() {
    let p = PinnedProblem::new(Point::zeros(), Point::zeros(), 1.0, 200, 3).unwrap();
    let r = minimize_pinned(&p, &MinimizeOptions { seed: 4, perturbation: 0.2, ..Default::default() }).unwrap();
    assert!(r.converged);
    assert!((r.bbar / varpi_star() - 1.0).abs() < 0.01, "{}", r.bbar);
    assert!(r.lambda_est.is_some());
}

#[test]
fn nearly_straight_pinned_curves() {
    let mut last = f64::INFINITY;
    for gap in [1e-2, 1e-3, 1e-4] {
        let p = PinnedProblem::new(Point::zeros(), Point::new(1.0 - gap, 0.0, 0.0), 1.0, 100, 2).unwrap();
        let r = minimize_pinned(&p, &MinimizeOptions::default()).unwrap();
        assert!(r.converged, "gap {gap}");
        assert!(r.bbar < last);
        last = r.bbar;
    }
    assert!(last < 1.0);
}

/// Pinned ends one wavelike arch apart: the minimizer has curvature
/// `2K·2√m cn(2K s − K)` for unit length.
#[test]
fn pinned_arch_matches_the_wavelike_profile() {
    let m: f64 = 0.5;
    let (k, e) = (comp_k(m).unwrap(), comp_e(m).unwrap());
    let chord = (2.0 * e - k) / k;
    let p = PinnedProblem::new(Point::zeros(), Point::new(chord, 0.0, 0.0), 1.0, 200, 2).unwrap();
    let r = minimize_pinned(&p, &MinimizeOptions::default()).unwrap();
    assert!(r.converged);
    let jac = Jacobi::new(m).unwrap();
    let kappa = r.curve.curvatures();
    let s = r.curve.arclength_params();
    let peak = 2.0 * k * 2.0 * m.sqrt();
    for i in 1..200 {
        let exact = peak * jac.cn(2.0 * k * s[i] - k).abs();
        assert!((kappa[i] - exact).abs() < 1e-2 * peak, "s = {}: {} vs {exact}", s[i], kappa[i]);
    }
    let lam = r.lambda_est.unwrap();
    let expected = 2.0 * (2.0 * m - 1.0) * (2.0 * k).powi(2);
    assert!((lam - expected).abs() < 0.02 * (2.0 * k).powi(2), "{lam} vs {expected}");
}

#[test]
fn clamped_buckled_arc() {
    let x = Point::x();
    let p = ClampedProblem::new(Point::zeros(), Point::new(0.5, 0.0, 0.0), x, x, 1.0, 120, 2).unwrap();
    let r = minimize_clamped(&p, &MinimizeOptions::default()).unwrap();
    assert!(r.converged && r.grad_norm < 1e-8 * 120.0);
    assert!(r.bbar.is_finite() && r.max_constraint_residual < 1e-10);
    let v = r.curve.vertices();
    assert!(((v[1] - v[0]) / (1.0 / 120.0) - x).norm() < 1e-8);
    assert!(((v[120] - v[119]) / (1.0 / 120.0) - x).norm() < 1e-8);
    // mirror symmetric about x = 1/4
    for i in 0..=120 {
        let a = v[i];
        let b = v[120 - i];
        assert!((a.x + b.x - 0.5).abs() < 1e-6 && (a.y - b.y).abs() < 1e-6, "vertex {i}");
    }
    assert!(r.log.windows(2).all(|w| w[1].bending <= w[0].bending));
}

#[test]
fn clamped_straight_segment() {
    let x = Point::x();
    let p = ClampedProblem::new(Point::zeros(), Point::new(2.0, 0.0, 0.0), x, x, 2.0, 40, 2).unwrap();
    let r = minimize_clamped(&p, &MinimizeOptions::default()).unwrap();
    assert!(r.converged);
    assert_eq!(r.bending, 0.0);
}

#[test]
fn clamped_costs_at_least_pinned() {
    let up = Point::y();
    let p = ClampedProblem::new(Point::zeros(), Point::zeros(), up, -up, 1.0, 200, 2).unwrap();
    let clamped = minimize_clamped(&p, &MinimizeOptions::default()).unwrap();
    assert!(clamped.converged);
    let pinned = minimize_pinned(&leaf_problem(200).unwrap(), &MinimizeOptions::default()).unwrap();
    assert!(clamped.bbar > pinned.bbar * (1.0 + 1e-3), "{} vs {}", clamped.bbar, pinned.bbar);

    let mut g = rng(5);
    for _ in 0..5 {
        let p1 = Point::new(g.gen_range(-0.4..0.4), g.gen_range(-0.4..0.4), 0.0);
        let a: f64 = g.gen_range(0.0..2.0 * PI);
        let b: f64 = g.gen_range(0.0..2.0 * PI);
        let v0 = Point::new(a.cos(), a.sin(), 0.0);
        let v1 = Point::new(b.cos(), b.sin(), 0.0);
        let cp = ClampedProblem::new(Point::zeros(), p1, v0, v1, 1.0, 100, 2).unwrap();
        let c = minimize_clamped(&cp, &MinimizeOptions::default()).unwrap();
        let pp = PinnedProblem::new(Point::zeros(), p1, 1.0, 100, 2).unwrap();
        let q = minimize_pinned(&pp, &MinimizeOptions::default()).unwrap();
        assert!(c.converged && q.converged);
        assert!(c.bending >= q.bending * (1.0 - 1e-9), "{} < {}", c.bending, q.bending);
    }
}

#[test]
fn gradient_method_decreases_energy() {
    let p = leaf_problem(100).unwrap();
    let opts = MinimizeOptions { method: Method::Gradient, max_iters: 300, ..Default::default() };
    let r = minimize_pinned(&p, &opts).unwrap();
    assert!(r.log.windows(2).all(|w| w[1].bending <= w[0].bending));
    assert!(r.log.last().unwrap().bending < r.log[0].bending);
    assert!(r.max_constraint_residual < 1e-10);
}

#[test]
fn longer_leaf_problem_has_the_same_normalized_energy() {
    let p = PinnedProblem::new(Point::zeros(), Point::zeros(), 2.0, 160, 2).unwrap();
    let r = minimize_pinned(&p, &MinimizeOptions::default()).unwrap();
    assert!(r.converged);
    assert!((r.bbar / varpi_star() - 1.0).abs() < 0.01, "{}", r.bbar);
    assert!((r.bending * 2.0 / r.bbar - 1.0).abs() < 1e-12);
}

#[test]
fn infeasible_problems_are_rejected() {
    assert!(matches!(PinnedProblem::new(Point::zeros(), Point::new(1.0, 0.0, 0.0), 1.0, 50, 2), Err(Error::Domain(_))));
    let up = Point::y();
    assert!(ClampedProblem::new(Point::zeros(), Point::new(1.0, 0.0, 0.0), up, up, 1.0, 50, 2).is_err());
}

#[test]
fn congruence_of_moved_copies() {
    let eight = build_leafed(2, 2).unwrap().sample(256).unwrap();
    let motion = elastica::curves::RigidMotion::about_axis(&Point::z(), 1.2);
    let moved = eight.transformed(&motion).unwrap().translated(&Point::new(3.0, -1.0, 0.0)).unwrap();
    assert!(congruence_distance(&eight, &moved).unwrap() < 1e-12);
    assert!(congruence_distance(&eight, &circle(512, 1.0)).unwrap() > 0.1);
}
