//! The `TMGD 1` drawing file format, SVG rendering and tabular reports.
//!
//! ```text
//! TMGD 1
//! # comment
//! V <id> <x> <y>
//! E <id> <u> <v> <x1> <y1> ... <xk> <yk>
//! ```
//!
//! Coordinates are exact rationals written `p/q` or `p`. The coordinate
//! list of an edge is its whole polyline from `u` to `v`; a list that does
//! not start at `u` and end at `v` is read as the interior bends only.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::drawing::{Drawing, DrawingError, Edge, EdgeId, Provenance, Vertex, VertexId};
use crate::geometry::{Point, Polyline, Scalar};

pub const FORMAT_HEADER: &str = "TMGD 1";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl From<DrawingError> for IoError {
    fn from(e: DrawingError) -> Self {
        IoError::InvariantViolation(e.to_string())
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parse `p/q` or `p` with optional sign on `p`.
pub fn parse_rational(s: &str) -> Result<Scalar, String> {
    let int = |t: &str| -> Result<BigInt, String> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("malformed rational {s:?}"));
        }
        t.parse::<BigInt>().map_err(|e| format!("malformed rational {s:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Scalar::from_integer(int(s)?)),
        Some((p, q)) => {
            if q.starts_with(['-', '+']) {
                return Err(format!("malformed rational {s:?}: signed denominator"));
            }
            let q = int(q)?;
            if q.is_zero() {
                return Err(format!("malformed rational {s:?}: zero denominator"));
            }
            Ok(Scalar::new(int(p)?, q))
        }
    }
}

/// Parse a drawing, checking structure only (ids, loops, attachments).
pub fn parse_drawing_unchecked(text: &str) -> Result<Drawing, IoError> {
    let mut header = false;
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut records: Vec<(usize, EdgeId, VertexId, VertexId, Vec<Point>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(first) = toks.first() else { continue };
        if !header {
            if toks.len() == 2 && first.text == "TMGD" && toks[1].text == "1" {
                header = true;
                continue;
            }
            return Err(parse_error(line_no, first.column, format!("expected header {FORMAT_HEADER:?}")));
        }
        let coord = |t: &Token| {
            parse_rational(t.text).map_err(|m| parse_error(line_no, t.column, m))
        };
        match first.text {
            "V" => {
                if toks.len() != 4 {
                    let col = toks.get(4).map_or(raw.len() + 1, |t| t.column);
                    return Err(parse_error(line_no, col, "vertex record needs: V <id> <x> <y>"));
                }
                vertices.push(Vertex {
                    id: VertexId(toks[1].text.to_string()),
                    location: Point::new(coord(&toks[2])?, coord(&toks[3])?),
                    provenance: Provenance::Original,
                });
            }
            "E" => {
                if toks.len() < 4 || (toks.len() - 4) % 2 != 0 {
                    let col = toks.last().map_or(1, |t| t.column);
                    return Err(parse_error(
                        line_no,
                        col,
                        "edge record needs: E <id> <u> <v> followed by coordinate pairs",
                    ));
                }
                let mut pts = Vec::new();
                for pair in toks[4..].chunks(2) {
                    pts.push(Point::new(coord(&pair[0])?, coord(&pair[1])?));
                }
                records.push((
                    line_no,
                    EdgeId(toks[1].text.to_string()),
                    VertexId(toks[2].text.to_string()),
                    VertexId(toks[3].text.to_string()),
                    pts,
                ));
            }
            other => {
                return Err(parse_error(line_no, first.column, format!("unknown record type {other:?}")));
            }
        }
    }
    if !header {
        return Err(parse_error(1, 1, format!("missing header {FORMAT_HEADER:?}")));
    }
    let by_id: std::collections::HashMap<&VertexId, &Point> =
        vertices.iter().map(|v| (&v.id, &v.location)).collect();
    let location = |id: &VertexId| by_id.get(id).map(|&p| p.clone());
    let mut edges = Vec::with_capacity(records.len());
    for (line_no, id, u, v, pts) in records {
        if u == v {
            return Err(IoError::InvariantViolation(format!("line {line_no}: edge {id} is a loop at {u}")));
        }
        let (Some(pu), Some(pv)) = (location(&u), location(&v)) else {
            let missing = if location(&u).is_none() { &u } else { &v };
            return Err(IoError::InvariantViolation(format!(
                "line {line_no}: edge {id} uses unknown vertex {missing}"
            )));
        };
        let full = pts.len() >= 2 && pts[0] == pu && pts[pts.len() - 1] == pv;
        let points = if full {
            pts
        } else {
            let mut all = vec![pu];
            all.extend(pts);
            all.push(pv);
            all
        };
        let curve = Polyline::new(points)
            .map_err(|e| IoError::InvariantViolation(format!("line {line_no}: edge {id}: {e}")))?;
        edges.push(Edge { id, u, v, curve });
    }
    Ok(Drawing::new(vertices, edges)?)
}

/// Parse a drawing and require general position.
pub fn parse_drawing(text: &str) -> Result<Drawing, IoError> {
    let d = parse_drawing_unchecked(text)?;
    let report = d.validate();
    if !report.is_empty() {
        return Err(IoError::InvariantViolation(report.to_string()));
    }
    Ok(d)
}

pub fn serialize_drawing(d: &Drawing) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    for v in d.vertices() {
        let _ = writeln!(out, "V {} {} {}", v.id, v.location.x, v.location.y);
    }
    for e in d.edges() {
        let _ = write!(out, "E {} {} {}", e.id, e.u, e.v);
        for p in e.curve.points() {
            let _ = write!(out, " {} {}", p.x, p.y);
        }
        out.push('\n');
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Clone, Debug, Default)]
pub struct SvgOptions {
    pub crossings: bool,
    pub lenses: bool,
    /// Hash recorded in the header comment; defaults to the hash of the
    /// serialized drawing.
    pub source_hash: Option<String>,
}

impl SvgOptions {
    pub fn full() -> Self {
        SvgOptions {
            crossings: true,
            lenses: true,
            source_hash: None,
        }
    }
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn svg_path(points: &[Point], close: bool) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = p.to_f64();
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, fmt_num(x), fmt_num(-y));
    }
    if close {
        d.push_str(" Z");
    }
    d
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG 1.1 with one path per edge, one circle per vertex, and optionally a
/// marker per crossing and a shaded region per empty lens. The y axis points
/// up as in the drawing.
pub fn render_svg(d: &Drawing, opts: &SvgOptions) -> String {
    let hash = opts
        .source_hash
        .clone()
        .unwrap_or_else(|| sha256_hex(serialize_drawing(d).as_bytes()));
    let mut pts = d.vertices().iter().map(|v| v.location.to_f64()).collect::<Vec<_>>();
    pts.extend(d.edges().iter().flat_map(|e| e.curve.points().iter().map(|p| p.to_f64())));
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    if let Some(&(x, y)) = pts.first() {
        (x0, y0, x1, y1) = (x, y, x, y);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = span * 0.05;
    let r = span * 0.008;
    let stroke = span * 0.002;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<!-- source sha256 {hash} -->");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        fmt_num(x0 - pad),
        fmt_num(-y1 - pad),
        fmt_num(x1 - x0 + 2.0 * pad),
        fmt_num(y1 - y0 + 2.0 * pad)
    );
    let valid = d.is_valid();
    if opts.lenses && valid {
        out.push_str("<g class=\"lenses\" fill=\"#f4a261\" fill-opacity=\"0.45\" stroke=\"none\">\n");
        for l in d.empty_lenses().unwrap_or_default() {
            let _ = writeln!(
                out,
                "<path class=\"lens\" data-edges=\"{} {}\" d=\"{}\"/>",
                escape(&l.parts.0.edge.0),
                escape(&l.parts.1.edge.0),
                svg_path(l.boundary.points(), true)
            );
        }
        out.push_str("</g>\n");
    }
    let _ = writeln!(
        out,
        "<g class=\"edges\" fill=\"none\" stroke=\"#264653\" stroke-width=\"{}\" stroke-linejoin=\"round\">",
        fmt_num(stroke)
    );
    for e in d.edges() {
        let _ = writeln!(
            out,
            "<path class=\"edge\" id=\"edge-{}\" d=\"{}\"/>",
            escape(&e.id.0),
            svg_path(e.curve.points(), false)
        );
    }
    out.push_str("</g>\n");
    if opts.crossings && valid {
        let _ = writeln!(out, "<g class=\"crossings\" fill=\"#e63946\" stroke=\"none\">");
        for c in d.crossings().unwrap_or_default() {
            let (x, y) = c.point.to_f64();
            let _ = writeln!(
                out,
                "<circle class=\"crossing\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                fmt_num(x),
                fmt_num(-y),
                fmt_num(r * 0.6)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("<g class=\"vertices\" fill=\"#2a9d8f\" stroke=\"none\">\n");
    for v in d.vertices() {
        let (x, y) = v.location.to_f64();
        let _ = writeln!(
            out,
            "<circle class=\"vertex\" id=\"vertex-{}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            escape(&v.id.0),
            fmt_num(x),
            fmt_num(-y),
            fmt_num(r)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Delimited,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "delimited" | "tsv" => Ok(ReportFormat::Delimited),
            "json" | "structured" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?}; expected table, delimited or json")),
        }
    }
}

/// Rows under fixed columns, rendered as an aligned table, tab-separated
/// values or JSON `{"columns": [...], "rows": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width matches the columns");
        self.rows.push(row);
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
                s.push('\n');
                s
            }
            ReportFormat::Delimited => {
                let mut s = self.columns.join("\t");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.join("\t"));
                    s.push('\n');
                }
                for n in &self.notes {
                    let _ = writeln!(s, "# {n}");
                }
                s
            }
            ReportFormat::Table => {
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|c| {
                        self.rows
                            .iter()
                            .map(|r| r[c].chars().count())
                            .chain(std::iter::once(self.columns[c].len()))
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |cells: &[String]| {
                    let parts: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect();
                    parts.join("  ").trim_end().to_string()
                };
                let mut s = line(&self.columns);
                s.push('\n');
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                s.push_str(&rule.join("  "));
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&line(r));
                    s.push('\n');
                }
                for n in &self.notes {
                    let _ = writeln!(s, "note: {n}");
                }
                s
            }
        }
    }
}

fn sci(v: Option<f64>) -> String {
    v.map_or("-".into(), |v| format!("{v:.4e}"))
}

/// The crossing-number-versus-bound table: generic and headline bounds side
/// by side. Footers of the reports become table notes.
pub fn bound_table(reports: &[crate::bounds::BoundReport]) -> Table {
    let mut t = Table::new(&["style", "n", "e", "cr", "bound", "headline", "headline_bound", "ratio", "verdict"]);
    for r in reports {
        t.push(vec![
            r.style.clone(),
            r.n.to_string(),
            r.e.to_string(),
            r.cr.to_string(),
            sci(r.bound),
            r.headline.formula.clone(),
            sci(r.headline.value),
            sci(r.ratio),
            r.verdict().to_string(),
        ]);
        if let Some(f) = &r.footer {
            if !t.notes.contains(f) {
                t.notes.push(f.clone());
            }
        }
    }
    t
}

/// Floating value of an exact scalar for presentation.
pub fn approx(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{convex_complete, empty_lens_gadget};
    use crate::drawing::LensKind;

    const X: &str = "TMGD 1\n# an X\nV a 0 0\nV b 2 2\nV c 0 2\nV d 2 0\nE e1 a b\nE e2 c d 0 2 1/2 1 2 0\n";

    #[test]
    fn parse_x() {
        let d = parse_drawing(X).unwrap();
        assert_eq!((d.num_vertices(), d.num_edges()), (4, 2));
        assert_eq!(d.crossing_number().unwrap(), 1);
        assert_eq!(d.edges()[1].curve.points().len(), 3);
    }

    #[test]
    fn round_trip() {
        for d in [convex_complete(6), empty_lens_gadget(LensKind::BetweenCrossings), parse_drawing(X).unwrap()] {
            let text = serialize_drawing(&d);
            let back = parse_drawing(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(serialize_drawing(&back), text);
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), Scalar::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), Scalar::from_integer(7.into()));
        for bad in ["1/0", "1/-2", "x", "", "1.5", "/2", "1/"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = parse_drawing("TMGD 1\nV a 0 1/0\n").unwrap_err();
        assert_eq!(
            e,
            IoError::Parse {
                line: 2,
                column: 7,
                message: "malformed rational \"1/0\": zero denominator".into()
            }
        );
        assert!(matches!(parse_drawing("V a 0 0\n"), Err(IoError::Parse { line: 1, column: 1, .. })));
        assert!(matches!(parse_drawing("TMGD 1\nQ\n"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(parse_drawing(""), Err(IoError::Parse { .. })));
        assert!(matches!(
            parse_drawing("TMGD 1\nE e a b 0\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn invariant_violations() {
        let e = parse_drawing("TMGD 1\nV a 0 0\nE e a a 1 1\n").unwrap_err();
        assert!(matches!(e, IoError::InvariantViolation(ref m) if m.contains("loop")), "{e}");
        let e = parse_drawing("TMGD 1\nV a 0 0\nV b 2 0\nV w 1 0\nE e a b\n").unwrap_err();
        assert!(matches!(e, IoError::InvariantViolation(ref m) if m.contains("VertexOnEdgeInterior")));
        assert!(parse_drawing_unchecked("TMGD 1\nV a 0 0\nV b 2 0\nV w 1 0\nE e a b\n").is_ok());
    }

    #[test]
    fn svg_counts() {
        let d = parse_drawing(X).unwrap();
        let svg = render_svg(&d, &SvgOptions::full());
        assert_eq!(svg.matches("class=\"edge\"").count(), 2);
        assert_eq!(svg.matches("class=\"vertex\"").count(), 4);
        assert_eq!(svg.matches("class=\"crossing\"").count(), 1);
        assert!(svg.contains(&sha256_hex(serialize_drawing(&d).as_bytes())));
        assert_eq!(svg, render_svg(&d, &SvgOptions::full()));
        let empty = render_svg(&Drawing::empty(), &SvgOptions::default());
        assert!(empty.contains("<svg") && empty.ends_with("</svg>\n"));
        let lens = render_svg(&empty_lens_gadget(LensKind::BetweenCrossings), &SvgOptions::full());
        assert_eq!(lens.matches("class=\"lens\"").count(), 1);
    }

    #[test]
    fn table_formats() {
        let mut t = Table::new(&["a", "bb"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(ReportFormat::Delimited), "a\tbb\n1\t2\n");
        assert_eq!(t.render(ReportFormat::Table), "a  bb\n-  --\n1  2\n");
        let v: serde_json::Value = serde_json::from_str(&t.render(ReportFormat::Json)).unwrap();
        assert_eq!(v["columns"][1], "bb");
        assert_eq!(v["rows"][0][0], "1");
    }
}
