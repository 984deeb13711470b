use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{Read, Write as _};
use std::path::{Path, PathBuf};

use elastica::curves::{build_leafed, classify_closed, figure_eight, PlanarElastica};
use elastica::discrete::{DiscreteCurve, DEFAULT_EPS_FRACTION};
use elastica::elliptic::comp_k;
use elastica::io::{read_curve_csv, write_curve_csv, write_curve_csv_at, write_svg};
use elastica::minimize::{
    minimize_clamped, minimize_pinned, ClampedProblem, Method, MinimizeOptions, MinimizeResult, PinnedProblem,
};
use elastica::odeint::{integrate_elastica, ElasticaState, IntegrateOptions};
use elastica::profiles::{CurvatureProfile, PlanarFamily};
use elastica::Point;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::record::Record;
use crate::{Cli, Command, Failure, FamilyArg, Format};

pub fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.jobs == 0 {
        return Err(Failure::Input("--jobs must be at least 1".into()));
    }
    match &cli.command {
        Command::Constants => constants(cli),
        Command::Sample { family, m, n, periods, range } => sample(cli, *family, *m, *n, *periods, *range),
        Command::Energy { input } => energy(cli, input),
        Command::Liyau { input, eps, tol_disc } => liyau(cli, input, *eps, *tol_disc),
        Command::Minimize { problem, log } => minimize(cli, problem, log.as_deref()),
        Command::Integrate { ic } => integrate(cli, ic),
        Command::Leafed { r, dim, n } => leafed(cli, *r, *dim, *n),
        Command::Classify { input, tol } => classify(cli, input, *tol),
    }
}

fn format_of(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Input(format!("format {f:?} is not available for this subcommand").to_lowercase()))
    }
}

/// Prints the resolved configuration to standard error as one JSON line.
fn echo(cli: &Cli, command: &str, format: Format, options: Value) {
    let config = json!({
        "command": command,
        "out": cli.out.as_ref().map(|p| p.display().to_string()),
        "format": format,
        "seed": cli.seed,
        "jobs": cli.jobs,
        "quiet": cli.quiet,
        "options": options,
    });
    eprintln!("config {config}");
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Failure::Internal(format!("cannot write standard output: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Failure::Internal(e.to_string()))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Input(format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_curve(path: &Path) -> Result<DiscreteCurve, Failure> {
    Ok(read_curve_csv(&read_input(path)?)?.curve)
}

/// Decimal rendering with 15 significant digits.
fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    let exp = if rounded.abs() >= 10f64.powi(exp + 1) { exp + 1 } else { exp };
    format!("{:.*}", (14 - exp).max(1) as usize, rounded)
}

fn constants(cli: &Cli) -> Result<(), Failure> {
    let format = format_of(cli, Format::Json, &[Format::Json, Format::Csv])?;
    echo(cli, "constants", format, json!({}));
    let c = figure_eight();
    let fields = [
        ("m_star", c.m_star),
        ("varpi_star", c.varpi_star),
        ("psi", c.psi),
        ("K_mstar", c.k_mstar),
        ("E_mstar", c.e_mstar),
        ("four_pi_sq", 4.0 * PI * PI),
    ];
    let mut out = String::new();
    if format == Format::Json {
        let body: Vec<String> = fields.iter().map(|(k, v)| format!("  \"{k}\": {}", sig15(*v))).collect();
        let _ = writeln!(out, "{{\n{}\n}}", body.join(",\n"));
    } else {
        out.push_str("name,value\n");
        for (k, v) in fields {
            let _ = writeln!(out, "{k},{}", sig15(v));
        }
    }
    emit(cli, &out)
}

fn sample(
    cli: &Cli,
    family: FamilyArg,
    m: Option<f64>,
    n: usize,
    periods: Option<f64>,
    range: Option<(f64, f64)>,
) -> Result<(), Failure> {
    let format = format_of(cli, Format::Csv, &[Format::Csv, Format::Svg, Format::Json])?;
    let needs_m = matches!(family, FamilyArg::Wavelike | FamilyArg::Orbitlike);
    let m = match (needs_m, m) {
        (true, Some(m)) => Some(m),
        (true, None) => return Err(Failure::Input(format!("--m is required for {family:?}").to_lowercase())),
        (false, Some(_)) => return Err(Failure::Input(format!("--m does not apply to {family:?}").to_lowercase())),
        (false, None) => None,
    };
    let fam = match family {
        FamilyArg::Linear => PlanarFamily::Linear,
        FamilyArg::Wavelike => PlanarFamily::Wavelike { m: m.unwrap_or_default() },
        FamilyArg::Borderline => PlanarFamily::Borderline,
        FamilyArg::Orbitlike => PlanarFamily::Orbitlike { m: m.unwrap_or_default() },
        FamilyArg::Circular => PlanarFamily::Circular,
    };
    fam.validate()?;
    let period = match fam {
        PlanarFamily::Wavelike { m } => Some(4.0 * comp_k(m)?),
        PlanarFamily::Orbitlike { m } => Some(2.0 * comp_k(m)?),
        PlanarFamily::Circular => Some(2.0 * PI),
        PlanarFamily::Linear | PlanarFamily::Borderline => None,
    };
    let (a, b) = match (range, periods, period) {
        (Some(r), _, _) => r,
        (None, Some(p), Some(t)) if p > 0.0 && p.is_finite() => (0.0, p * t),
        (None, Some(p), Some(_)) => return Err(Failure::Input(format!("--periods must be positive, got {p}"))),
        (None, Some(_), None) => return Err(Failure::Input("--periods needs a periodic family; use --range".into())),
        (None, None, Some(t)) => (0.0, t),
        (None, None, None) if fam == PlanarFamily::Borderline => (-4.0, 4.0),
        (None, None, None) => (0.0, 1.0),
    };
    echo(cli, "sample", format, json!({ "family": family, "m": m, "N": n, "range": [a, b] }));
    let el = PlanarElastica::canonical(fam)?;
    let open = el.sample(a, b, n)?;
    let s: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let k: Vec<f64> = s.iter().map(|&t| el.k(t)).collect();
    let pts = open.vertices();
    let gap = (pts[n] - pts[0]).norm();
    let closed = gap <= 1e-6 * open.length();
    let (curve, k) =
        if closed { (DiscreteCurve::new(pts[..n].to_vec(), true, 2)?, k[..n].to_vec()) } else { (open, k) };
    let out = match format {
        Format::Csv => write_curve_csv_at(&curve, &s, &[("k", &k)])?,
        Format::Svg => write_svg(&[&curve]),
        Format::Json => {
            let rep = curve.normalized_energy();
            to_json(&json!({
                "closed": closed,
                "endpoint_gap": gap,
                "length": rep.length,
                "B": rep.bending,
                "Bbar": rep.bbar,
                "total_curvature": rep.total_curvature,
            }))?
        }
    };
    emit(cli, &out)
}

fn energy(cli: &Cli, input: &Path) -> Result<(), Failure> {
    let format = format_of(cli, Format::Json, &[Format::Json])?;
    echo(cli, "energy", format, json!({ "input": input.display().to_string() }));
    let curve = read_curve(input)?;
    let rep = curve.normalized_energy();
    emit(
        cli,
        &to_json(&json!({
            "closed": curve.is_closed(),
            "dim": curve.dim(),
            "vertices": curve.len(),
            "length": rep.length,
            "B": rep.bending,
            "Bbar": rep.bbar,
            "total_curvature": rep.total_curvature,
        }))?,
    )
}

fn liyau(cli: &Cli, input: &Path, eps: Option<f64>, tol_disc: f64) -> Result<(), Failure> {
    let format = format_of(cli, Format::Json, &[Format::Json])?;
    let curve = read_curve(input)?;
    if !curve.is_closed() {
        return Err(Failure::Input("liyau needs a closed curve".into()));
    }
    let eps = eps.unwrap_or(DEFAULT_EPS_FRACTION * curve.length());
    echo(cli, "liyau", format, json!({ "input": input.display().to_string(), "eps": eps, "tol_disc": tol_disc }));
    let rep = curve.liyau_check(eps, tol_disc)?;
    emit(cli, &to_json(&rep)?)?;
    if rep.satisfied {
        Ok(())
    } else {
        Err(Failure::Unsatisfied)
    }
}

fn classify(cli: &Cli, input: &Path, tol: f64) -> Result<(), Failure> {
    let format = format_of(cli, Format::Json, &[Format::Json])?;
    echo(cli, "classify", format, json!({ "input": input.display().to_string(), "tol": tol }));
    let curve = read_curve(input)?;
    let kind = classify_closed(&curve, tol)?;
    emit(cli, &(serde_json::to_string(&kind).map_err(|e| Failure::Internal(e.to_string()))? + "\n"))
}

fn leafed(cli: &Cli, r: usize, dim: usize, n: usize) -> Result<(), Failure> {
    let format = format_of(cli, Format::Csv, &[Format::Csv, Format::Svg, Format::Json])?;
    echo(cli, "leafed", format, json!({ "r": r, "dim": dim, "N": n }));
    let leafed = build_leafed(r, dim)?;
    let curve = leafed.sample(n)?;
    let out = match format {
        Format::Csv => write_curve_csv(&curve, &[("k", &curve.curvatures())])?,
        Format::Svg => write_svg(&[&curve]),
        Format::Json => {
            let rep = curve.normalized_energy();
            let j = leafed.junctions();
            to_json(&json!({
                "r": r,
                "dim": dim,
                "vertices": curve.len(),
                "length": rep.length,
                "Bbar": rep.bbar,
                "junction_defects": { "position": j.position, "tangent": j.tangent, "curvature": j.curvature },
            }))?
        }
    };
    emit(cli, &out)
}

enum Problem {
    Pinned(PinnedProblem),
    Clamped(ClampedProblem),
}

fn vector_json(p: &Point, dim: usize) -> Value {
    json!(p.as_slice()[..dim])
}

fn minimize(cli: &Cli, path: &Path, log: Option<&Path>) -> Result<(), Failure> {
    let format = format_of(cli, Format::Csv, &[Format::Csv, Format::Svg, Format::Json])?;
    let mut rec = Record::parse(&read_input(path)?)?;
    let (p0, d0) = Record::require(rec.point("P0")?, "P0")?;
    let (p1, d1) = Record::require(rec.point("P1")?, "P1")?;
    let v0 = rec.point("V0")?;
    let v1 = rec.point("V1")?;
    let length = Record::require(rec.f64("L0")?, "L0")?;
    let n = rec.usize("N")?.unwrap_or(200);
    let tol = rec.f64("tol")?;
    let max_iters = rec.usize("max_iters")?.unwrap_or(MinimizeOptions::default().max_iters);
    let file_seed = rec.u64("seed")?;
    let seeds = rec.usize("seeds")?.unwrap_or(1);
    let perturbation = rec.f64("perturbation")?.unwrap_or(0.0);
    let method = match rec.string("method").as_deref() {
        None | Some("newton") => Method::Newton,
        Some("gradient") => Method::Gradient,
        Some(other) => return Err(Failure::Input(format!("key `method`: unknown method `{other}`"))),
    };
    rec.finish()?;
    if d0 != d1 || v0.is_some_and(|v| v.1 != d0) || v1.is_some_and(|v| v.1 != d0) {
        return Err(Failure::Input("all vectors in a problem must have the same dimension".into()));
    }
    if seeds == 0 {
        return Err(Failure::Input("key `seeds` must be at least 1".into()));
    }
    if tol.is_some_and(|t| t <= 0.0) || perturbation < 0.0 {
        return Err(Failure::Input("`tol` must be positive and `perturbation` nonnegative".into()));
    }
    let dim = d0;
    let problem = match (v0, v1) {
        (None, None) => Problem::Pinned(PinnedProblem::new(p0, p1, length, n, dim)?),
        (Some((v0, _)), Some((v1, _))) => Problem::Clamped(ClampedProblem::new(p0, p1, v0, v1, length, n, dim)?),
        _ => return Err(Failure::Input("clamped problems need both V0 and V1".into())),
    };
    let seed = cli.seed.or(file_seed).unwrap_or(0);
    let opts = MinimizeOptions { tol: Some(tol.unwrap_or(1e-8 * n as f64)), max_iters, method, seed, perturbation };
    let log_path: Option<PathBuf> = log.map(Path::to_path_buf).or_else(|| {
        cli.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".log.jsonl");
            PathBuf::from(s)
        })
    });
    let mut options = json!({
        "problem": path.display().to_string(),
        "P0": vector_json(&p0, dim),
        "P1": vector_json(&p1, dim),
        "L0": length,
        "N": n,
        "dim": dim,
        "tol": opts.tol,
        "max_iters": max_iters,
        "method": method,
        "perturbation": perturbation,
        "seed": seed,
        "seeds": seeds,
        "log": log_path.as_ref().map(|p| p.display().to_string()),
    });
    if let Problem::Clamped(c) = &problem {
        options["V0"] = vector_json(&c.v0, dim);
        options["V1"] = vector_json(&c.v1, dim);
    }
    echo(cli, "minimize", format, options);

    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build().map_err(|e| Failure::Internal(e.to_string()))?;
    let runs: Vec<(u64, MinimizeResult)> = pool.install(|| {
        (0..seeds as u64)
            .into_par_iter()
            .map(|i| {
                let o = MinimizeOptions { seed: seed + i, ..opts };
                let r = match &problem {
                    Problem::Pinned(p) => minimize_pinned(p, &o),
                    Problem::Clamped(c) => minimize_clamped(c, &o),
                };
                r.map(|r| (seed + i, r))
            })
            .collect::<elastica::Result<Vec<_>>>()
    })?;

    let mut log_text = String::new();
    for (s, r) in &runs {
        for entry in &r.log {
            let mut line = serde_json::to_value(entry).map_err(|e| Failure::Internal(e.to_string()))?;
            line["seed"] = json!(s);
            let _ = writeln!(log_text, "{line}");
        }
    }
    match &log_path {
        Some(p) => {
            std::fs::write(p, &log_text).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", p.display())))?
        }
        None if !cli.quiet => eprint!("{log_text}"),
        None => {}
    }
    let summaries: Vec<Value> = runs
        .iter()
        .map(|(s, r)| {
            let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
            v["seed"] = json!(s);
            v
        })
        .collect();
    if !cli.quiet {
        for v in &summaries {
            eprintln!("result {v}");
        }
    }
    // lowest energy wins, ties to the earliest seed
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.bbar.total_cmp(&b.1 .1.bbar).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let (best_seed, result) = &runs[best];
    let out = match format {
        Format::Csv => {
            let k = if dim == 2 { result.curve.signed_curvatures()? } else { result.curve.curvatures() };
            write_curve_csv(&result.curve, &[("k", &k)])?
        }
        Format::Svg => write_svg(&[&result.curve]),
        Format::Json => to_json(&json!({ "best_seed": best_seed, "runs": summaries }))?,
    };
    emit(cli, &out)
}

fn integrate(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let format = format_of(cli, Format::Csv, &[Format::Csv, Format::Svg, Format::Json])?;
    let mut rec = Record::parse(&read_input(path)?)?;
    let s_end = Record::require(rec.f64("s_end")?, "s_end")?;
    let h = rec.f64("h")?.unwrap_or(1e-3);
    let error_limit = rec.f64("error_limit")?.unwrap_or(IntegrateOptions::default().error_limit);
    let planar = rec.bool("planar")?.unwrap_or(false);
    let lambda = rec.f64("lambda")?;
    let gamma = rec.point("gamma")?.map(|p| p.0).unwrap_or_else(Point::zeros);
    let frame = [Point::x(), Point::y(), Point::z()];
    let (state, lambda, mode) = if rec.has("d1") {
        let d1 = Record::require(rec.point("d1")?, "d1")?.0;
        let d2 = Record::require(rec.point("d2")?, "d2")?.0;
        let d3 = rec.point("d3")?.map(|p| p.0).unwrap_or_else(Point::zeros);
        (ElasticaState::new(gamma, d1, d2, d3)?, Record::require(lambda, "lambda")?, "derivatives")
    } else if rec.has("k") {
        let k = Record::require(rec.f64("k")?, "k")?;
        let kp = rec.f64("k_prime")?.unwrap_or(0.0);
        let t = rec.f64("torsion")?.unwrap_or(0.0);
        (ElasticaState::from_frenet(gamma, frame, k, kp, t)?, Record::require(lambda, "lambda")?, "frenet")
    } else if rec.has("m") {
        let m = Record::require(rec.f64("m")?, "m")?;
        let w = Record::require(rec.f64("w")?, "w")?;
        let a = Record::require(rec.f64("A")?, "A")?;
        let s0 = rec.f64("s0")?.unwrap_or(0.0);
        if lambda.is_some() {
            return Err(Failure::Input("`lambda` is determined by the profile; remove it".into()));
        }
        let p = CurvatureProfile::new(m, w, a, s0)?;
        let st = ElasticaState::from_profile(&p, 0.0)?;
        let st = ElasticaState::new(st.gamma + gamma, st.d1, st.d2, st.d3)?;
        (st, p.lambda(), "profile")
    } else {
        return Err(Failure::Input("initial data needs `d1`/`d2`, `k` or a profile `m`, `w`, `A`".into()));
    };
    rec.finish()?;
    let state = if planar { state.into_planar()? } else { state };
    echo(
        cli,
        "integrate",
        format,
        json!({
            "ic": path.display().to_string(),
            "mode": mode,
            "lambda": lambda,
            "s_end": s_end,
            "h": h,
            "error_limit": error_limit,
            "planar": planar,
            "gamma": state.gamma.as_slice(),
            "d1": state.d1.as_slice(),
            "d2": state.d2.as_slice(),
            "d3": state.d3.as_slice(),
        }),
    );
    let traj = integrate_elastica(state, lambda, s_end, h, IntegrateOptions { error_limit })?;
    let dim = traj.dim;
    let pts: Vec<Point> = traj.states.iter().map(|s| s.gamma).collect();
    let curve = DiscreteCurve::new(pts, false, dim)?;
    let out = match format {
        Format::Csv => {
            let s: Vec<f64> = (0..traj.states.len()).map(|i| traj.arclength(i)).collect();
            let k: Vec<f64> = traj.states.iter().map(|s| s.d2.norm()).collect();
            let speed: Vec<f64> = traj.states.iter().map(|s| s.d1.norm()).collect();
            if dim == 3 {
                let det = traj.monitor_det()?;
                write_curve_csv_at(&curve, &s, &[("k", &k), ("speed", &speed), ("det", &det)])?
            } else {
                write_curve_csv_at(&curve, &s, &[("k", &k), ("speed", &speed)])?
            }
        }
        Format::Svg => write_svg(&[&curve]),
        Format::Json => {
            let fi = traj.first_integral();
            let spread = |v: &[f64]| {
                v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - v.iter().fold(f64::INFINITY, |a, &b| a.min(b))
            };
            let det = if dim == 3 { Some(spread(&traj.monitor_det()?)) } else { None };
            to_json(&json!({
                "states": traj.states.len(),
                "dim": dim,
                "unit_speed_drift": traj.unit_speed_drift(),
                "max_error_estimate": traj.max_error_estimate,
                "first_integral_drift": spread(&fi),
                "det_drift": det,
                "planarity_drift": traj.planarity_drift(1e-9).ok(),
            }))?
        }
    };
    emit(cli, &out)
}
