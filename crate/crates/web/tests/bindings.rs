use elastica_web::{leafed, m_star, minimize_loop, sample_planar, varpi_star};

#[test]
fn propeller() {
    let c = leafed(3, 3, 1024).unwrap();
    assert!(c.closed());
    assert_eq!(c.multiplicity(), 3);
    assert_eq!(c.xs().len(), 3 * 1024);
    assert!((c.bbar() / (9.0 * varpi_star()) - 1.0).abs() < 1e-3);
    assert!((c.bound() / (9.0 * varpi_star()) - 1.0).abs() < 1e-14);
}

#[test]
fn figure_eight_closes() {
    let c = sample_planar("wavelike", m_star(), 1.0, 4000).unwrap();
    assert!(c.closed());
    assert!((c.bbar() / (4.0 * varpi_star()) - 1.0).abs() < 1e-3);
    let open = sample_planar("wavelike", 0.5, 1.0, 400).unwrap();
    assert!(!open.closed() && open.multiplicity() == 0);
}

#[test]
fn loop_minimizer_finds_the_leaf() {
    let c = minimize_loop(200, 1, 0.3).unwrap();
    assert!(c.converged() && c.iterations() > 0);
    assert!((c.bbar() / varpi_star() - 1.0).abs() < 0.01);
}
