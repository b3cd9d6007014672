//! Text formats: `.plc` configurations, `.pts` point sets, `.tubes` families.
//!
//! Floats are written with 17 significant digits so that a write/read round
//! trip is exact. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::{PointLineConfiguration, PointLinePair};
use crate::error::{Error, Result};
use crate::geom::metric::dist_to_line;
use crate::geom::{Dim, Line, Point, Tube};
use crate::tubes::Tube2D;
use crate::vec3::Vec3;

/// Tolerance for unit directions and point-on-line checks when reading.
pub const READ_TOL: f64 = 1e-6;

/// A planar or spatial tube family. In `.tubes` files `w` is the full width
/// for planar tubes and the radius for tubes in space.
#[derive(Debug, Clone, PartialEq)]
pub enum TubeFamily {
    Planar(Vec<Tube2D>),
    Space(Vec<Tube>),
}

impl TubeFamily {
    pub fn len(&self) -> usize {
        match self {
            TubeFamily::Planar(t) => t.len(),
            TubeFamily::Space(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> Dim {
        match self {
            TubeFamily::Planar(_) => Dim::Two,
            TubeFamily::Space(_) => Dim::Three,
        }
    }
}

/// One problem found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// 1-based line number; 0 for whole-file problems.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub kind: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Stores lines as a configuration: each line is paired with the midpoint
/// of its chord through the unit cube. Lines missing the cube are rejected.
pub fn lines_config(dim: Dim, lines: &[Line]) -> Result<PointLineConfiguration> {
    let pairs = lines
        .iter()
        .map(|l| {
            dim.check(l.dim())?;
            let (b, v) = (l.base(), l.dir());
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for k in 0..dim.get() {
                if v[k].abs() < 1e-300 {
                    if !(0.0..=1.0).contains(&b[k]) {
                        hi = lo;
                    }
                    continue;
                }
                let (a, c) = ((0.0 - b[k]) / v[k], (1.0 - b[k]) / v[k]);
                lo = lo.max(a.min(c));
                hi = hi.min(a.max(c));
            }
            if !(lo < hi) {
                return Err(Error::Degenerate(format!("line through {:?} misses the unit cube", b)));
            }
            let mut m = b + v * (0.5 * (lo + hi));
            for k in 0..dim.get() {
                m.0[k] = m.0[k].clamp(0.0, 1.0);
            }
            PointLinePair::from_dir(Point::from_vec(m, dim), v)
        })
        .collect::<Result<Vec<_>>>()?;
    PointLineConfiguration::new(dim, pairs)
}

fn fmt_f(out: &mut String, v: f64) {
    let _ = write!(out, " {v:.16e}");
}

fn fmt_vec(out: &mut String, tag: &str, v: Vec3, d: usize) {
    out.push_str(tag);
    for k in 0..d {
        fmt_f(out, v[k]);
    }
}

pub fn write_plc(x: &PointLineConfiguration) -> String {
    let d = x.dim().get();
    let mut out = format!("plc v1 dim={d} n={}\n", x.len());
    for pr in x.pairs() {
        fmt_vec(&mut out, "p", pr.point().vec(), d);
        fmt_vec(&mut out, " q", pr.line().base(), d);
        fmt_vec(&mut out, " v", pr.line().dir(), d);
        out.push('\n');
    }
    out
}

pub fn write_pts(pts: &[Point]) -> Result<String> {
    let d = pts.first().map_or(2, |p| p.dim().get());
    let mut out = format!("pts v1 dim={d} n={}\n", pts.len());
    for p in pts {
        if p.dim().get() != d {
            return Err(Error::DimensionMismatch { expected: d, got: p.dim().get() });
        }
        let mut line = String::new();
        for k in 0..d {
            fmt_f(&mut line, p.vec()[k]);
        }
        out.push_str(line.trim_start());
        out.push('\n');
    }
    Ok(out)
}

pub fn write_tubes(f: &TubeFamily) -> String {
    let d = f.dim().get();
    let mut out = format!("tubes v1 dim={d} n={}\n", f.len());
    let mut row = |c: Vec3, v: Vec3, w: f64, l: f64| {
        fmt_vec(&mut out, "c", c, d);
        fmt_vec(&mut out, " v", v, d);
        out.push_str(" w");
        fmt_f(&mut out, w);
        out.push_str(" l");
        fmt_f(&mut out, l);
        out.push('\n');
    };
    match f {
        TubeFamily::Planar(ts) => {
            for t in ts {
                row(t.center(), t.dir(), t.width(), t.length());
            }
        }
        TubeFamily::Space(ts) => {
            for t in ts {
                row(t.axis().base(), t.axis().dir(), t.radius(), t.length().unwrap_or(1.0));
            }
        }
    }
    out
}

struct Header {
    dim: Dim,
    n: usize,
}

fn parse_header(line: &str, magic: &str, lineno: usize) -> Result<Header> {
    let err = |msg: String| Error::Parse { line: lineno, msg };
    let mut it = line.split_whitespace();
    if it.next() != Some(magic) || it.next() != Some("v1") {
        return Err(err(format!("expected header `{magic} v1 dim=<d> n=<count>`")));
    }
    let mut dim = None;
    let mut n = None;
    for tok in it {
        if let Some(v) = tok.strip_prefix("dim=") {
            let d: usize = v.parse().map_err(|_| err(format!("bad dim {v:?}")))?;
            dim = Some(Dim::from_usize(d).map_err(|e| err(e.to_string()))?);
        } else if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse().map_err(|_| err(format!("bad count {v:?}")))?);
        } else {
            return Err(err(format!("unexpected header token {tok:?}")));
        }
    }
    match (dim, n) {
        (Some(dim), Some(n)) => Ok(Header { dim, n }),
        _ => Err(err("header needs dim= and n=".into())),
    }
}

/// Non-comment lines with their 1-based numbers.
fn body(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `tag f f [f]` groups in order.
fn tagged(line: &str, tags: &[(&str, usize)]) -> std::result::Result<Vec<Vec<f64>>, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let mut pos = 0;
    let mut out = Vec::new();
    for &(tag, k) in tags {
        if toks.get(pos) != Some(&tag) {
            return Err(format!("expected `{tag}` at field {}", pos + 1));
        }
        pos += 1;
        let mut v = Vec::with_capacity(k);
        for _ in 0..k {
            let t = toks.get(pos).ok_or_else(|| format!("missing value after `{tag}`"))?;
            let f: f64 = t.parse().map_err(|_| format!("bad number {t:?}"))?;
            if !f.is_finite() {
                return Err(format!("non-finite number {t:?}"));
            }
            v.push(f);
            pos += 1;
        }
        out.push(v);
    }
    if pos != toks.len() {
        return Err(format!("{} trailing fields", toks.len() - pos));
    }
    Ok(out)
}

fn vec_of(v: &[f64]) -> Vec3 {
    Vec3::new(v[0], v[1], v.get(2).copied().unwrap_or(0.0))
}

fn point_of(v: &[f64], dim: Dim) -> std::result::Result<Point, String> {
    let p = Point::new(v).map_err(|e| e.to_string())?;
    if p.dim() != dim {
        return Err("point dimension differs from header".into());
    }
    Ok(p)
}

fn unit_check(v: Vec3) -> std::result::Result<(), String> {
    let n = v.norm();
    if (n - 1.0).abs() > READ_TOL {
        return Err(format!("direction has norm {n}, not 1"));
    }
    Ok(())
}

/// Parses a `.plc` text, collecting every violation.
fn scan_plc(text: &str) -> (Option<PointLineConfiguration>, Vec<Violation>) {
    let mut viol = Vec::new();
    let mut lines = body(text);
    let Some((hl, head)) = lines.next() else {
        return (None, vec![Violation { line: 0, message: "empty file".into() }]);
    };
    let h = match parse_header(head, "plc", hl) {
        Ok(h) => h,
        Err(e) => return (None, vec![Violation { line: hl, message: e.to_string() }]),
    };
    let d = h.dim.get();
    let mut pairs = Vec::new();
    for (ln, l) in lines {
        let pr = tagged(l, &[("p", d), ("q", d), ("v", d)]).and_then(|f| {
            let p = point_of(&f[0], h.dim)?;
            let q = vec_of(&f[1]);
            let v = vec_of(&f[2]);
            unit_check(v)?;
            let line = Line::new(Point::from_vec(q, h.dim), v).map_err(|e| e.to_string())?;
            let off = dist_to_line(p.vec(), &line);
            if off > READ_TOL {
                return Err(format!("point is {off:e} away from its line"));
            }
            if !p.in_unit_cube(1e-9) {
                return Err(format!("point {:?} outside the unit cube", p.coords()));
            }
            PointLinePair::from_dir(p, v).map_err(|e| e.to_string())
        });
        match pr {
            Ok(pr) => pairs.push(pr),
            Err(m) => viol.push(Violation { line: ln, message: m }),
        }
    }
    if viol.is_empty() && pairs.len() != h.n {
        viol.push(Violation { line: hl, message: format!("header says n={} but {} pairs follow", h.n, pairs.len()) });
    }
    if !viol.is_empty() {
        return (None, viol);
    }
    match PointLineConfiguration::new(h.dim, pairs) {
        Ok(x) => (Some(x), viol),
        Err(e) => (None, vec![Violation { line: 0, message: e.to_string() }]),
    }
}

fn scan_pts(text: &str) -> (Option<Vec<Point>>, Vec<Violation>) {
    let mut viol = Vec::new();
    let mut lines = body(text);
    let Some((hl, head)) = lines.next() else {
        return (None, vec![Violation { line: 0, message: "empty file".into() }]);
    };
    let h = match parse_header(head, "pts", hl) {
        Ok(h) => h,
        Err(e) => return (None, vec![Violation { line: hl, message: e.to_string() }]),
    };
    let mut pts = Vec::new();
    for (ln, l) in lines {
        let vals: std::result::Result<Vec<f64>, String> = l
            .split_whitespace()
            .map(|t| t.parse::<f64>().ok().filter(|f| f.is_finite()).ok_or_else(|| format!("bad number {t:?}")))
            .collect();
        match vals.and_then(|v| {
            if v.len() != h.dim.get() {
                return Err(format!("expected {} coordinates, got {}", h.dim.get(), v.len()));
            }
            point_of(&v, h.dim)
        }) {
            Ok(p) => pts.push(p),
            Err(m) => viol.push(Violation { line: ln, message: m }),
        }
    }
    if viol.is_empty() && pts.len() != h.n {
        viol.push(Violation { line: hl, message: format!("header says n={} but {} points follow", h.n, pts.len()) });
    }
    if viol.is_empty() {
        (Some(pts), viol)
    } else {
        (None, viol)
    }
}

fn scan_tubes(text: &str) -> (Option<TubeFamily>, Vec<Violation>) {
    let mut viol = Vec::new();
    let mut lines = body(text);
    let Some((hl, head)) = lines.next() else {
        return (None, vec![Violation { line: 0, message: "empty file".into() }]);
    };
    let h = match parse_header(head, "tubes", hl) {
        Ok(h) => h,
        Err(e) => return (None, vec![Violation { line: hl, message: e.to_string() }]),
    };
    let d = h.dim.get();
    let mut planar = Vec::new();
    let mut space = Vec::new();
    for (ln, l) in lines {
        let r = tagged(l, &[("c", d), ("v", d), ("w", 1), ("l", 1)]).and_then(|f| {
            let (c, v, w, len) = (vec_of(&f[0]), vec_of(&f[1]), f[2][0], f[3][0]);
            unit_check(v)?;
            match h.dim {
                Dim::Two => {
                    planar.push(Tube2D::new([c.x(), c.y()], [v.x(), v.y()], w, len).map_err(|e| e.to_string())?)
                }
                Dim::Three => {
                    let axis = Line::new(Point::from_vec(c, Dim::Three), v).map_err(|e| e.to_string())?;
                    space.push(Tube::new(axis, w, Some(len)).map_err(|e| e.to_string())?)
                }
            }
            Ok(())
        });
        if let Err(m) = r {
            viol.push(Violation { line: ln, message: m });
        }
    }
    let fam = match h.dim {
        Dim::Two => TubeFamily::Planar(planar),
        Dim::Three => TubeFamily::Space(space),
    };
    if viol.is_empty() && fam.len() != h.n {
        viol.push(Violation { line: hl, message: format!("header says n={} but {} tubes follow", h.n, fam.len()) });
    }
    if viol.is_empty() {
        (Some(fam), viol)
    } else {
        (None, viol)
    }
}

fn first_error(v: Vec<Violation>) -> Error {
    let f = &v[0];
    Error::Parse { line: f.line, msg: f.message.clone() }
}

pub fn parse_plc(text: &str) -> Result<PointLineConfiguration> {
    match scan_plc(text) {
        (Some(x), _) => Ok(x),
        (None, v) => Err(first_error(v)),
    }
}

pub fn parse_pts(text: &str) -> Result<Vec<Point>> {
    match scan_pts(text) {
        (Some(x), _) => Ok(x),
        (None, v) => Err(first_error(v)),
    }
}

pub fn parse_tubes(text: &str) -> Result<TubeFamily> {
    match scan_tubes(text) {
        (Some(x), _) => Ok(x),
        (None, v) => Err(first_error(v)),
    }
}

pub fn read_plc(path: &Path) -> Result<PointLineConfiguration> {
    parse_plc(&std::fs::read_to_string(path)?)
}

pub fn read_pts(path: &Path) -> Result<Vec<Point>> {
    parse_pts(&std::fs::read_to_string(path)?)
}

pub fn read_tubes(path: &Path) -> Result<TubeFamily> {
    parse_tubes(&std::fs::read_to_string(path)?)
}

/// Checks a text by its header kind (`plc`, `pts` or `tubes`).
pub fn validate_text(text: &str) -> ValidationReport {
    let kind = body(text)
        .next()
        .and_then(|(_, l)| l.split_whitespace().next())
        .unwrap_or("")
        .to_string();
    let violations = match kind.as_str() {
        "plc" => scan_plc(text).1,
        "pts" => scan_pts(text).1,
        "tubes" => scan_tubes(text).1,
        _ => vec![Violation { line: 1, message: format!("unknown file kind {kind:?}") }],
    };
    ValidationReport { kind, violations }
}

/// Reads and checks a file; only an unreadable file is an error.
pub fn validate(path: &Path) -> Result<ValidationReport> {
    Ok(validate_text(&std::fs::read_to_string(path)?))
}
