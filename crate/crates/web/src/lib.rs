//! Browser bindings for the demo page in `www/`.

use elastica::curves::{build_leafed, figure_eight, PlanarElastica};
use elastica::discrete::DiscreteCurve;
use elastica::minimize::{leaf_problem, minimize_pinned, MinimizeOptions};
use elastica::profiles::PlanarFamily;
use wasm_bindgen::prelude::*;

/// A polyline with a few numbers to show next to it.
#[wasm_bindgen]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    zs: Vec<f64>,
    closed: bool,
    bbar: f64,
    multiplicity: usize,
    bound: f64,
    iterations: usize,
    converged: bool,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn zs(&self) -> Vec<f64> {
        self.zs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn closed(&self) -> bool {
        self.closed
    }

    /// Normalized bending energy `L·B`.
    #[wasm_bindgen(getter)]
    pub fn bbar(&self) -> f64 {
        self.bbar
    }

    /// Detected multiplicity; 0 for open curves.
    #[wasm_bindgen(getter)]
    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// `ϖ* r²` for closed curves with `r ≥ 2`, else `4π²` (0 when open).
    #[wasm_bindgen(getter)]
    pub fn bound(&self) -> f64 {
        self.bound
    }

    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    #[wasm_bindgen(getter)]
    pub fn converged(&self) -> bool {
        self.converged
    }
}

fn wrap(curve: &DiscreteCurve) -> Result<Curve, JsError> {
    let v = curve.vertices();
    let (multiplicity, bound) = if curve.is_closed() {
        let rep = curve.liyau_check_default()?;
        (rep.r, rep.bound)
    } else {
        (0, 0.0)
    };
    Ok(Curve {
        xs: v.iter().map(|p| p.x).collect(),
        ys: v.iter().map(|p| p.y).collect(),
        zs: v.iter().map(|p| p.z).collect(),
        closed: curve.is_closed(),
        bbar: curve.normalized_energy().bbar,
        multiplicity,
        bound,
        iterations: 0,
        converged: true,
    })
}

#[wasm_bindgen]
pub fn varpi_star() -> f64 {
    figure_eight().varpi_star
}

#[wasm_bindgen]
pub fn m_star() -> f64 {
    figure_eight().m_star
}

/// Samples `periods` curvature periods of a planar elastica with `n` edges.
/// `family` is one of `wavelike`, `orbitlike`, `borderline`, `circular`.
#[wasm_bindgen]
pub fn sample_planar(family: &str, m: f64, periods: f64, n: usize) -> Result<Curve, JsError> {
    let fam = match family {
        "wavelike" => PlanarFamily::Wavelike { m },
        "orbitlike" => PlanarFamily::Orbitlike { m },
        "borderline" => PlanarFamily::Borderline,
        "circular" => PlanarFamily::Circular,
        other => return Err(JsError::new(&format!("unknown family `{other}`"))),
    };
    fam.validate()?;
    let period = match fam {
        PlanarFamily::Wavelike { m } => 4.0 * elastica::elliptic::comp_k(m)?,
        PlanarFamily::Orbitlike { m } => 2.0 * elastica::elliptic::comp_k(m)?,
        PlanarFamily::Circular => 2.0 * std::f64::consts::PI,
        _ => 4.0,
    };
    let (a, b) =
        if fam == PlanarFamily::Borderline { (-periods * period, periods * period) } else { (0.0, periods * period) };
    let open = PlanarElastica::canonical(fam)?.sample(a, b, n)?;
    let v = open.vertices();
    if (v[n] - v[0]).norm() <= 1e-6 * open.length() {
        wrap(&DiscreteCurve::new(v[..n].to_vec(), true, 2)?)
    } else {
        wrap(&open)
    }
}

/// The closed curve of `r` leaves, in the plane (`dim = 2`, even `r`) or in
/// space (`dim = 3`).
#[wasm_bindgen]
pub fn leafed(r: usize, dim: usize, n_per_leaf: usize) -> Result<Curve, JsError> {
    wrap(&build_leafed(r, dim)?.sample(n_per_leaf)?)
}

/// Minimizes bending energy over curves of length 1 from the origin back to
/// the origin, starting from a randomly perturbed circle.
#[wasm_bindgen]
pub fn minimize_loop(n: usize, seed: u64, perturbation: f64) -> Result<Curve, JsError> {
    let opts = MinimizeOptions { seed, perturbation, ..MinimizeOptions::default() };
    let r = minimize_pinned(&leaf_problem(n)?, &opts)?;
    let mut c = wrap(&r.curve)?;
    c.iterations = r.iterations;
    c.converged = r.converged;
    Ok(c)
}
