//! Plain-text formats: `key = value` records, curve CSV and SVG plots.
//!
//! Curve CSV has the header `s,x,y[,z]` followed by any number of extra
//! columns (for example `k`). A leading `# closed=true|false` line states the
//! topology explicitly; without it a curve whose last row repeats the first
//! (within `1e-6·L`) is read as closed and the duplicate row is dropped.
//! Closed curves are always written with the first vertex repeated at the end.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::discrete::DiscreteCurve;
use crate::{Error, Point, Result};

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse(format!("line {}: empty key", lineno + 1)));
        }
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(out)
}

/// Parses a comma- or whitespace-separated vector of 2 or 3 numbers,
/// optionally wrapped in parentheses or brackets.
pub fn parse_point(text: &str) -> Result<(Point, usize)> {
    let inner = text.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let values = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("bad coordinate `{t}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    match values.as_slice() {
        [x, y] => Ok((Point::new(*x, *y, 0.0), 2)),
        [x, y, z] => Ok((Point::new(*x, *y, *z), 3)),
        _ => Err(Error::Parse(format!("expected 2 or 3 coordinates, got `{text}`"))),
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a curve as CSV. `extra` supplies additional named per-vertex
/// columns; for closed curves their first value is repeated on the final row.
pub fn write_curve_csv(curve: &DiscreteCurve, extra: &[(&str, &[f64])]) -> Result<String> {
    let mut s = curve.arclength_params();
    if curve.is_closed() {
        s.push(curve.length());
    }
    write_curve_csv_at(curve, &s, extra)
}

/// As [`write_curve_csv`] with the `s` column given explicitly, one value per
/// written row (vertex count plus one for closed curves).
pub fn write_curve_csv_at(curve: &DiscreteCurve, s: &[f64], extra: &[(&str, &[f64])]) -> Result<String> {
    let n = curve.vertices().len();
    let rows = if curve.is_closed() { n + 1 } else { n };
    if s.len() != rows {
        return Err(Error::domain(format!("`s` has {} values for {rows} rows", s.len())));
    }
    for (name, col) in extra {
        if col.len() != n {
            return Err(Error::domain(format!("column `{name}` has {} values for {n} vertices", col.len())));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "# closed={}", curve.is_closed());
    out.push_str(if curve.dim() == 3 { "s,x,y,z" } else { "s,x,y" });
    for (name, _) in extra {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (row, si) in s.iter().enumerate() {
        let i = row % n;
        let p = curve.vertices()[i];
        let _ = write!(out, "{},{},{}", fmt17(*si), fmt17(p.x), fmt17(p.y));
        if curve.dim() == 3 {
            let _ = write!(out, ",{}", fmt17(p.z));
        }
        for (_, col) in extra {
            let _ = write!(out, ",{}", fmt17(col[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// A curve read from CSV together with every named column.
#[derive(Debug, Clone)]
pub struct CurveTable {
    pub curve: DiscreteCurve,
    pub columns: BTreeMap<String, Vec<f64>>,
}

/// Reads curve CSV; see the module documentation for the conventions.
pub fn read_curve_csv(text: &str) -> Result<CurveTable> {
    let mut closed_flag = None;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
    while let Some(line) = lines.peek() {
        let Some(comment) = line.strip_prefix('#') else { break };
        if let Some((k, v)) = comment.split_once('=') {
            if k.trim() == "closed" {
                closed_flag = Some(match v.trim() {
                    "true" => true,
                    "false" => false,
                    other => return Err(Error::Parse(format!("bad closed flag `{other}`"))),
                });
            }
        }
        lines.next();
    }
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?
        .split(',')
        .map(|h| h.trim().to_string())
        .collect();
    if header.len() < 3 || header[0] != "s" || header[1] != "x" || header[2] != "y" {
        return Err(Error::Parse(format!("CSV header must start with s,x,y; got `{}`", header.join(","))));
    }
    let dim = if header.get(3).map(String::as_str) == Some("z") { 3 } else { 2 };
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (lineno, line) in lines.enumerate() {
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::Parse(format!(
                "data row {}: expected {} fields, got {}",
                lineno + 1,
                header.len(),
                fields.len()
            )));
        }
        for (col, f) in columns.iter_mut().zip(&fields) {
            col.push(
                f.trim().parse::<f64>().map_err(|e| Error::Parse(format!("data row {}: `{f}`: {e}", lineno + 1)))?,
            );
        }
    }
    let z = |i: usize| if dim == 3 { columns[3][i] } else { 0.0 };
    let mut vertices: Vec<Point> =
        (0..columns[0].len()).map(|i| Point::new(columns[1][i], columns[2][i], z(i))).collect();
    if vertices.len() < 2 {
        return Err(Error::Parse("CSV has fewer than two rows".into()));
    }
    let first = vertices[0];
    let last = *vertices.last().unwrap();
    let polyline_length: f64 = vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    let repeats = (last - first).norm() <= 1e-6 * polyline_length;
    let closed = closed_flag.unwrap_or(repeats);
    if closed && repeats {
        vertices.pop();
        for col in &mut columns {
            col.pop();
        }
    }
    let curve = DiscreteCurve::new(vertices, closed, dim)?;
    let columns = header.into_iter().zip(columns).collect();
    Ok(CurveTable { curve, columns })
}

/// Renders the `xy` projection of one or more polylines as an SVG document
/// scaled into a unit box, coordinates at 6 significant digits.
pub fn write_svg(curves: &[&DiscreteCurve]) -> String {
    let pts = curves.iter().flat_map(|c| c.vertices().iter());
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(f64::MIN_POSITIVE);
    let margin = 0.05;
    let scale = (1.0 - 2.0 * margin) / span;
    let cx = 0.5 * (xmin + xmax);
    let cy = 0.5 * (ymin + ymax);
    let mut out =
        String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" width=\"512\" height=\"512\">\n");
    for c in curves {
        out.push_str("<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.003\" points=\"");
        let n = c.vertices().len();
        let rows = if c.is_closed() { n + 1 } else { n };
        for row in 0..rows {
            let p = c.vertices()[row % n];
            let x = 0.5 + (p.x - cx) * scale;
            let y = 0.5 - (p.y - cy) * scale;
            let _ = write!(out, "{x:.6},{y:.6} ");
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</svg>\n");
    out
}
