use std::path::Path;

use clap::ValueEnum;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heilbronn_core::conc::{
    dyadic_ladder, katz_tao_constant_segments, katz_tao_fit_segments, m_config, m_lines, m_points,
    plane_reduction_check, uniformize, Segment, UniformizeOptions,
};
use heilbronn_core::config::{
    generate_bush, generate_erdos_parabola, generate_plane_example, generate_st_grid, generate_vertical,
    min_config_distance_witness, PointLineConfiguration, PointLinePair,
};
use heilbronn_core::highlow::{
    double_count_check, dyadic_scan, initial_estimate_check, normalized_b, rhs_basic, rhs_few_directions,
    rhs_refined, rhs_wellspaced, WellSpacedParams,
};
use heilbronn_core::io::{self, TubeFamily};
use heilbronn_core::search::{
    anneal_max_dx, anneal_max_triangle, envelope, exponent_estimate, AnnealSchedule, Family,
};
use heilbronn_core::triangles::{min_triangle_brute, min_triangle_fast, triangle_via_pointline};
use heilbronn_core::tubes::{
    check_planar_brush, check_space_brush, generate_katz_tao_tubes, generate_katz_tao_tubes_2d,
    two_ends_decompose, PlanarBrushParams, Shading, SolidTube, SpaceBrushParams, TwoEndsParams,
};
use heilbronn_core::{Dim, Line, Point, Vec3};

use crate::cli::*;
use crate::failure::{Failure, Outcome};
use crate::table::{int, num, Table};

/// A finished command: its table, where it goes, and the exit code.
pub struct Report {
    pub table: Table,
    /// The table goes to stdout even when `--out` is given.
    pub stdout_only: bool,
    pub code: i32,
}

impl Report {
    fn ok(table: Table) -> Report {
        Report { table, stdout_only: false, code: 0 }
    }
}

pub fn execute(cmd: &Command, seed: u64, out: Option<&Path>) -> Outcome<Report> {
    let name = cmd.name();
    match cmd {
        Command::Gen(a) => gen(a, seed, out),
        Command::Validate(a) => validate(a, seed),
        Command::Dx(a) => dx(a, seed).map(Report::ok),
        Command::MinTriangle(a) => min_triangle(a, seed).map(Report::ok),
        Command::PairPipeline(a) => pair_pipeline(a, seed).map(Report::ok),
        Command::Conc(a) => conc(a, seed).map(Report::ok),
        Command::KatzTao(a) => katz_tao(a, seed).map(Report::ok),
        Command::PlaneCheck(a) => plane_check(a, seed).map(Report::ok),
        Command::Uniformize(a) => uniformize_cmd(a, seed).map(Report::ok),
        Command::ScanB(a) => scan_b(a, seed).map(Report::ok),
        Command::HighlowCheck(a) => highlow(a, seed).map(Report::ok),
        Command::InitialEst(a) => scale_check(a, seed, name, false).map(Report::ok),
        Command::DoubleCount(a) => scale_check(a, seed, name, true).map(Report::ok),
        Command::TwoEnds(a) => two_ends(a, seed).map(Report::ok),
        Command::BrushCheck(a) => brush(a, seed).map(Report::ok),
        Command::Anneal(a) => anneal(a, seed).map(Report::ok),
        Command::Exponent(a) => exponent(a, seed).map(Report::ok),
        Command::Run(_) => Err(Failure::Usage("run cannot be nested".into())),
    }
}

fn dim_of(d: usize) -> Outcome<Dim> {
    Dim::from_usize(d).map_err(|e| Failure::Usage(e.to_string()))
}

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &Path, text: &str) -> Outcome<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn kind_of(text: &str) -> &str {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or("")
}

fn load_config(path: &Path) -> Outcome<PointLineConfiguration> {
    Ok(io::parse_plc(&read(path)?)?)
}

/// Points from a `.pts` file, or the points of a `.plc` file.
fn load_points(path: &Path) -> Outcome<Vec<Point>> {
    let text = read(path)?;
    if kind_of(&text) == "plc" {
        Ok(io::parse_plc(&text)?.points())
    } else {
        Ok(io::parse_pts(&text)?)
    }
}

fn load_incidence(input: &IncidenceInput) -> Outcome<(Vec<Point>, Vec<Line>)> {
    match (&input.points, &input.lines, &input.config) {
        (Some(p), Some(l), _) => Ok((load_points(p)?, load_config(l)?.lines())),
        (_, _, Some(x)) => {
            let x = load_config(x)?;
            Ok((x.points(), x.lines()))
        }
        _ => Err(Failure::Usage("give --points and --lines, or --config".into())),
    }
}

fn load_tubes(path: &Path) -> Outcome<TubeFamily> {
    Ok(io::parse_tubes(&read(path)?)?)
}

fn random_points(n: usize, dim: Dim, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..n)
        .map(|_| match dim {
            Dim::Two => Point::xy(rng.gen(), rng.gen()),
            Dim::Three => Point::xyz(rng.gen(), rng.gen(), rng.gen()),
        })
        .collect()
}

fn random_direction(dim: Dim, rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let z = if dim == Dim::Three { rng.gen_range(-1.0..1.0) } else { 0.0 };
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), z);
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

fn gen(a: &GenArgs, seed: u64, out: Option<&Path>) -> Outcome<Report> {
    let out = out.ok_or_else(|| Failure::Usage("gen needs --out".into()))?;
    let dim = dim_of(a.dim)?;
    let kind = a.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let delta = || a.delta.ok_or_else(|| Failure::Usage(format!("gen {kind} needs --delta")));
    let n = || a.n.ok_or_else(|| Failure::Usage(format!("gen {kind} needs --n")));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = None;
    let (text, count) = match a.kind {
        GenKind::Vertical => {
            let x = generate_vertical(delta()?, dim)?;
            (io::write_plc(&x), x.len())
        }
        GenKind::Bush | GenKind::Plane | GenKind::StGrid => {
            let (d, (p, l)) = match a.kind {
                GenKind::Bush => (dim, generate_bush(delta()?, dim, a.bushes, seed)?),
                GenKind::Plane => (Dim::Three, generate_plane_example(delta()?)?),
                _ => (Dim::Two, generate_st_grid(n()?)?),
            };
            points = Some(p);
            (io::write_plc(&io::lines_config(d, &l)?), l.len())
        }
        GenKind::Parabola => {
            let p = generate_erdos_parabola(n()?)?;
            (io::write_pts(&p)?, p.len())
        }
        GenKind::RandomPoints => {
            let p = random_points(n()?, dim, &mut rng);
            (io::write_pts(&p)?, p.len())
        }
        GenKind::RandomConfig => {
            let pairs = random_points(n()?, dim, &mut rng)
                .into_iter()
                .map(|p| {
                    let v = random_direction(dim, &mut rng);
                    PointLinePair::from_dir(p, v)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let x = PointLineConfiguration::new(dim, pairs)?;
            (io::write_plc(&x), x.len())
        }
        GenKind::KatzTao => {
            let fam = match dim {
                Dim::Two => {
                    let f = generate_katz_tao_tubes_2d(delta()?, a.t1, n()?, seed)?;
                    TubeFamily::Planar(f.tubes_2d()?)
                }
                Dim::Three => {
                    let f = generate_katz_tao_tubes(delta()?, a.t1, a.t2, n()?, seed)?;
                    TubeFamily::Space(f.tubes()?)
                }
            };
            (io::write_tubes(&fam), fam.len())
        }
    };
    write_file(out, &text)?;
    let mut t = Table::new("gen", seed, &[("kind", "generator"), ("count", "items written"), ("points", "points written")]);
    let mut n_points = 0;
    if let (Some(p), Some(path)) = (&points, &a.points_out) {
        write_file(path, &io::write_pts(p)?)?;
        n_points = p.len();
    }
    t.row(vec![kind, int(count), int(n_points)]);
    Ok(Report { table: t, stdout_only: true, code: 0 })
}

fn validate(a: &ValidateArgs, seed: u64) -> Outcome<Report> {
    let rep = io::validate(&a.path)?;
    let mut t = Table::new("validate", seed, &[("line", "1-based line number, 0 for the whole file"), ("message", "violation")]);
    t.note(format!("kind={}", rep.kind));
    for v in &rep.violations {
        t.row(vec![int(v.line), v.message.clone()]);
    }
    let code = if rep.is_valid() { 0 } else { 3 };
    Ok(Report { table: t, stdout_only: false, code })
}

fn dx(a: &ConfigArg, seed: u64) -> Outcome<Table> {
    let x = load_config(&a.config)?;
    let (d, i, j) = min_config_distance_witness(&x)?;
    let env = envelope(&x)?;
    let mut t = Table::new(
        "dx",
        seed,
        &[
            ("n", "number of pairs"),
            ("dim", "ambient dimension"),
            ("dx", "minimum over i != j of the larger point-to-line distance"),
            ("i", "first witness pair"),
            ("j", "second witness pair"),
            ("vertical", "vertical construction size at the same distance"),
            ("trivial", "trivial size bound 10*dx^-d"),
            ("within_envelope", "vertical <= n <= trivial"),
        ],
    );
    t.row(vec![
        int(x.len()),
        int(x.dim().get()),
        num(d),
        int(i),
        int(j),
        int(env.vertical),
        num(env.trivial),
        env.holds().to_string(),
    ]);
    Ok(t)
}

fn min_triangle(a: &MinTriangleArgs, seed: u64) -> Outcome<Table> {
    let pts = load_points(&a.points)?;
    let (w, method) = match a.method {
        TriangleMethod::Fast => (min_triangle_fast(&pts)?, "fast"),
        TriangleMethod::Brute => (min_triangle_brute(&pts)?, "brute"),
    };
    let mut t = Table::new(
        "min-triangle",
        seed,
        &[
            ("n", "number of points"),
            ("method", "search method"),
            ("i", "first vertex"),
            ("j", "second vertex"),
            ("k", "third vertex"),
            ("area", "smallest triangle area"),
        ],
    );
    let (i, j, k) = w.indices;
    t.row(vec![int(pts.len()), method.into(), int(i), int(j), int(k), num(w.area)]);
    Ok(t)
}

fn pair_pipeline(a: &PointsArg, seed: u64) -> Outcome<Table> {
    let pts = load_points(&a.points)?;
    let (w, r) = triangle_via_pointline(&pts)?;
    let mut t = Table::new(
        "pair-pipeline",
        seed,
        &[
            ("n", "number of points"),
            ("m", "extracted close pairs"),
            ("delta", "minimum point-to-line distance over the pair lines"),
            ("max_pair_length", "longest extracted pair"),
            ("pair_constant", "C with every pair length <= 2C n^-1/3"),
            ("area_bound", "max_pair_length * delta / 2"),
            ("degenerate", "a coincident pair ended the search"),
            ("i", "first vertex"),
            ("j", "second vertex"),
            ("k", "third vertex"),
            ("area", "area of the returned triangle"),
        ],
    );
    let (i, j, k) = w.indices;
    t.row(vec![
        int(pts.len()),
        int(r.m),
        num(r.delta),
        num(r.max_pair_length),
        num(r.pair_constant),
        num(r.area_bound),
        r.degenerate.to_string(),
        int(i),
        int(j),
        int(k),
        num(w.area),
    ]);
    Ok(t)
}

fn conc(a: &ConcArgs, seed: u64) -> Outcome<Table> {
    let x = load_config(&a.config)?;
    if !(a.wmin > 0.0 && a.wmin <= a.wmax && a.wmax <= 1.0) {
        return Err(Failure::Validation(format!("need 0 < wmin <= wmax <= 1, got {} and {}", a.wmin, a.wmax)));
    }
    let ladder = dyadic_ladder(a.wmax, a.wmin);
    let d = x.dim().get() as i32;
    let size = x.len() as f64;
    let mut t = Table::new(
        "conc",
        seed,
        &[
            ("u", "first scale"),
            ("v", "direction scale"),
            ("w", "last scale"),
            ("value", "measured concentration number"),
            ("bound", "count expected of a uniformly spread family, at least 1"),
            ("ratio", "value / bound"),
        ],
    );
    let mode = match a.mode {
        ConcMode::Points => "points",
        ConcMode::Lines => "lines",
        ConcMode::Full => "full",
    };
    t.note(format!("mode={mode}"));
    let mut push = |u: f64, v: f64, w: f64, value: usize, frac: f64| {
        let bound = (size * frac).max(1.0);
        t.row(vec![num(u), num(v), num(w), int(value), num(bound), num(value as f64 / bound)]);
    };
    match a.mode {
        ConcMode::Points => {
            let pts = x.points();
            for &w in &ladder {
                push(w, w, w, m_points(&pts, w)?, w.powi(d));
            }
        }
        ConcMode::Lines => {
            let lines = x.lines();
            for &w in &ladder {
                for &u in ladder.iter().filter(|&&u| u <= w) {
                    let frac = if d == 3 { u * u * w * w } else { u * u };
                    push(u, 1.0, w, m_lines(&lines, u, w)?, frac);
                }
            }
        }
        ConcMode::Full => {
            for &u in &ladder {
                for &v in &ladder {
                    for &w in &ladder {
                        let frac = u.powi(d) * v.powi(d - 1) * w.powi(2 * d - 2);
                        push(u, v, w, m_config(&x, u, v, w)?, frac);
                    }
                }
            }
        }
    }
    Ok(t)
}

fn tube_segments(f: &TubeFamily) -> Outcome<Vec<Segment>> {
    let seg = |c: Vec3, v: Vec3, l: f64| Segment::new(c, v, -0.5 * l, 0.5 * l);
    Ok(match f {
        TubeFamily::Planar(ts) => ts.iter().map(|t| seg(t.center(), t.dir(), t.length())).collect::<Result<_, _>>()?,
        TubeFamily::Space(ts) => ts
            .iter()
            .map(|t| seg(t.axis().base(), t.axis().dir(), t.length().unwrap_or(1.0)))
            .collect::<Result<_, _>>()?,
    })
}

fn katz_tao(a: &KatzTaoArgs, seed: u64) -> Outcome<Table> {
    let (segs, dim) = match (&a.config, &a.tubes) {
        (Some(x), _) => {
            let x = load_config(x)?;
            (x.lines().iter().map(Segment::line).collect::<Vec<_>>(), x.dim())
        }
        (None, Some(t)) => {
            let f = load_tubes(t)?;
            (tube_segments(&f)?, f.dim())
        }
        _ => return Err(Failure::Usage("give --config or --tubes".into())),
    };
    let fit = katz_tao_fit_segments(&segs, a.delta, dim)?;
    let mut t = Table::new(
        "katz-tao",
        seed,
        &[
            ("u", "box width"),
            ("w", "box height"),
            ("count", "most members in one u x w x 1 box"),
            ("residual", "log residual of the fit"),
        ],
    );
    t.note(format!("t1={}", fit.t1));
    t.note(format!("t2={}", fit.t2));
    t.note(format!("fitted_constant={}", fit.fitted_constant));
    t.note(format!("constant={}", fit.constant));
    if let (Some(t1), Some(t2)) = (a.t1, a.t2) {
        let c = katz_tao_constant_segments(&segs, a.delta, t1, t2, dim)?;
        t.note(format!("constant_at_t1_t2={c}"));
    }
    for c in &fit.cells {
        t.row(vec![num(c.u), num(c.w), int(c.count), num(c.residual)]);
    }
    Ok(t)
}

fn plane_check(a: &PlaneCheckArgs, seed: u64) -> Outcome<Table> {
    let x = load_config(&a.config)?;
    let r = plane_reduction_check(&x, a.delta, a.gamma)?;
    let mut t = Table::new(
        "plane-check",
        seed,
        &[
            ("u", "slab width"),
            ("w", "slab height"),
            ("measured", "most lines in one u x w x 1 box"),
            ("bound", "delta^-3 u^(1+gamma) w^(2-gamma)"),
            ("ratio", "measured / bound"),
            ("restricted", "pairs kept after restriction to the best slab"),
            ("restricted_reference", "(u/w)^(-2+gamma)"),
        ],
    );
    t.note(format!("delta={}", r.delta));
    t.note(format!("gamma={}", r.gamma));
    t.note(format!("separation={}", r.separation));
    t.note(format!("separation_ok={}", r.separation_ok));
    t.note(format!("constant={}", r.constant));
    for row in &r.rows {
        t.row(vec![
            num(row.u),
            num(row.w),
            int(row.measured),
            num(row.bound),
            num(row.measured as f64 / row.bound),
            int(row.restricted),
            num(row.restricted_reference),
        ]);
    }
    Ok(t)
}

fn uniformize_cmd(a: &UniformizeArgs, seed: u64) -> Outcome<Table> {
    let x = load_config(&a.config)?;
    let mut opts = UniformizeOptions::new(a.delta, a.k);
    opts.separation_gap = a.gap;
    let (y, cert) = uniformize(&x, &opts)?;
    if let Some(path) = &a.config_out {
        write_file(path, &io::write_plc(&y))?;
    }
    let mut t = Table::new(
        "uniformize",
        seed,
        &[
            ("i", "point scale index"),
            ("j", "direction scale index"),
            ("k", "line scale index"),
            ("min_count", "smallest anchored count over kept pairs"),
            ("max_count", "largest anchored count over kept pairs"),
            ("ratio", "min_count / max_count"),
        ],
    );
    t.note(format!("size_before={}", cert.size_before));
    t.note(format!("size_after={}", cert.size_after));
    t.note(format!("worst_ratio={}", cert.worst_ratio()));
    t.note(format!("valid={}", cert.is_valid()));
    t.note(format!("log_exponent={}", cert.log_exponent()));
    for c in &cert.checks {
        t.row(vec![int(c.i), int(c.j), int(c.k), int(c.min_count), int(c.max_count), num(c.ratio())]);
    }
    Ok(t)
}

fn scan_b(a: &ScanArgs, seed: u64) -> Outcome<Table> {
    let (pts, lines) = load_incidence(&a.input)?;
    let rep = dyadic_scan(&pts, &lines, a.wmin, a.wmax)?;
    let mut t = Table::new(
        "scan-b",
        seed,
        &[
            ("w", "scale"),
            ("b", "normalized incidence count B(w)"),
            ("diff", "B(w) - B(2w), empty on the coarsest row"),
            ("m_points", "most points in one w-cube"),
            ("m_lines", "most lines in one w x ... x w x 1 box"),
            ("rhs_basic", "basic high-low right-hand side"),
            ("rhs_refined", "refined high-low right-hand side"),
            ("ratio", "diff^2 / rhs_basic"),
        ],
    );
    for r in &rep.rows {
        t.row(vec![
            num(r.w),
            num(r.b),
            r.diff.map(num).unwrap_or_default(),
            int(r.m_points),
            int(r.m_lines),
            num(r.rhs_basic),
            num(r.rhs_refined),
            r.diff.map(|d| num(d * d / r.rhs_basic)).unwrap_or_default(),
        ]);
    }
    Ok(t)
}

fn highlow(a: &HighlowArgs, seed: u64) -> Outcome<Table> {
    let (pts, lines) = load_incidence(&a.input)?;
    let d = a.delta;
    let mut t = Table::new(
        "highlow-check",
        seed,
        &[
            ("variant", "inequality checked"),
            ("delta", "scale"),
            ("lhs", "(B(delta) - B(2 delta))^2, or |B(delta/2) - B(delta)|^(9/2) for wellspaced"),
            ("rhs", "right-hand side"),
            ("ratio", "lhs / rhs"),
        ],
    );
    let sq = |a: f64, b: f64| (a - b) * (a - b);
    let (name, lhs, rhs) = match a.variant {
        HighlowVariant::Basic => {
            let l = sq(normalized_b(d, &pts, &lines)?, normalized_b(2.0 * d, &pts, &lines)?);
            ("basic", l, rhs_basic(d, &pts, &lines, a.eps)?.value)
        }
        HighlowVariant::Refined => {
            let l = sq(normalized_b(d, &pts, &lines)?, normalized_b(2.0 * d, &pts, &lines)?);
            ("refined", l, rhs_refined(d, &pts, &lines, a.eps)?.value)
        }
        HighlowVariant::FewDirections => {
            let l = sq(normalized_b(d, &pts, &lines)?, normalized_b(2.0 * d, &pts, &lines)?);
            ("few-directions", l, rhs_few_directions(d, &pts, &lines, a.nu, a.kappa, a.m, a.eps)?)
        }
        HighlowVariant::Wellspaced => {
            let p = WellSpacedParams { t1: a.t1, t2: a.t2, k: a.k, a: a.a, c0: a.c0, eps: a.eps };
            let r = rhs_wellspaced(d, &pts, &lines, p)?;
            t.note(format!("alpha={}", r.alpha));
            t.note(format!("katz_tao_constant={}", r.katz_tao_constant));
            ("wellspaced", r.lhs, r.value)
        }
    };
    t.row(vec![name.into(), num(d), num(lhs), num(rhs), num(lhs / rhs)]);
    Ok(t)
}

fn scale_check(a: &ScaleArgs, seed: u64, name: &str, double: bool) -> Outcome<Table> {
    let x = load_config(&a.config)?;
    let mut cols = vec![
        ("w", "scale"),
        ("anchor", "anchor pair"),
        ("lhs", "left-hand side"),
        ("rhs", "right-hand side"),
        ("slack", "rhs / lhs; the lower bound lhs >= rhs / slack is tight at this value"),
    ];
    if double {
        let r = double_count_check(&x, a.w, a.anchor)?;
        let mut t = Table::new(name, seed, &cols);
        t.row(vec![num(r.w), int(a.anchor), num(r.lhs), num(r.rhs), num(r.slack())]);
        return Ok(t);
    }
    cols.push(("theta_rescaled", "direction covering number of the rescaled configuration"));
    cols.push(("line_cover", "line covering number at scale w"));
    let r = initial_estimate_check(&x, a.w, a.anchor)?;
    let mut t = Table::new(name, seed, &cols);
    t.row(vec![
        num(r.w),
        int(a.anchor),
        num(r.lhs),
        num(r.rhs),
        num(r.slack()),
        int(r.theta_rescaled),
        int(r.line_cover),
    ]);
    Ok(t)
}

fn key_value(name: &str, seed: u64) -> Table {
    Table::new(name, seed, &[("quantity", "reported quantity"), ("value", "its value")])
}

fn two_ends(a: &TwoEndsArgs, seed: u64) -> Outcome<Table> {
    let TubeFamily::Planar(tubes) = load_tubes(&a.tubes)? else {
        return Err(Failure::Validation("two-ends needs a planar tube family".into()));
    };
    let params = TwoEndsParams { c1: a.c1, rounds: a.rounds, net_step: a.net_step };
    let r = two_ends_decompose(&tubes, a.delta, a.big_delta, &params)?;
    let mut t = key_value("two-ends", seed);
    let mut kv = |k: &str, v: String| t.row(vec![k.to_string(), v]);
    kv("n_tubes", int(r.n_tubes));
    kv("delta", num(r.delta));
    kv("Delta", num(r.big_delta));
    kv("c1", num(r.c1));
    kv("net_step", num(r.net_step));
    kv("richness_threshold", int(r.r));
    kv("rounds", int(r.rounds));
    kv("rounds_run", int(r.rounds_run));
    for (k, n) in r.rich_per_round.iter().enumerate() {
        kv(&format!("rich_points_round_{k}"), int(*n));
    }
    kv("overlap", int(r.overlap));
    kv("overlap_bound", num(r.overlap_bound()));
    kv("overlap_constant", num(r.overlap_constant()));
    kv("max_selection", int(r.max_selection()));
    kv("log_scale", num(r.log_scale()));
    kv("selection_constant", num(r.selection_constant()));
    kv("exhausted", r.exhausted().to_string());
    Ok(t)
}

fn brush(a: &BrushArgs, seed: u64) -> Outcome<Table> {
    let fam = load_tubes(&a.tubes)?;
    if fam.is_empty() {
        return Err(Failure::Validation("empty tube family".into()));
    }
    let rep = match &fam {
        TubeFamily::Planar(ts) => {
            let lengths: Vec<f64> = ts.iter().map(|t| t.length()).collect();
            let y = Shading::regular(&lengths, a.lambda, a.pieces, 0.0)?;
            let mut p = PlanarBrushParams::new(a.delta.unwrap_or(ts[0].width()), a.t, a.k);
            p.eps = a.eps;
            p.u = a.u;
            p.resolution = a.resolution;
            check_planar_brush(ts, &y, &p)?
        }
        TubeFamily::Space(ts) => {
            let lengths: Vec<f64> = ts.iter().map(|t| SolidTube::length(t)).collect();
            let y = Shading::regular(&lengths, a.lambda, a.pieces, 0.0)?;
            let mut p = SpaceBrushParams::new(a.delta.unwrap_or(ts[0].radius()), a.t1, a.t2, a.k);
            p.eps = a.eps;
            p.resolution = a.resolution;
            check_space_brush(ts, &y, &p)?
        }
    };
    let mut t = key_value("brush-check", seed);
    let mut kv = |k: &str, v: String| t.row(vec![k.to_string(), v]);
    kv("n_tubes", int(fam.len()));
    kv("measured", num(rep.measured));
    kv("bound", num(rep.bound));
    kv("lambda", num(rep.lambda));
    kv("katz_tao_measured", num(rep.katz_tao_measured));
    kv("exponent", num(rep.exponent));
    kv("constant", num(rep.constant));
    kv("max_constant", num(rep.max_constant));
    kv("holds", rep.holds().to_string());
    Ok(t)
}

fn schedule(s: &ScheduleArgs, seed: u64) -> Outcome<AnnealSchedule> {
    let sch = AnnealSchedule { t0: s.t0, cooling: s.cooling, moves_per_epoch: s.moves, epochs: s.epochs, seed };
    sch.validate()?;
    Ok(sch)
}

fn anneal(a: &AnnealArgs, seed: u64) -> Outcome<Table> {
    let dim = dim_of(a.dim)?;
    let sch = schedule(&a.schedule, seed)?;
    let (trace, objective, accepted, moves, text, what) = match a.target {
        AnnealTarget::Dx => {
            let r = anneal_max_dx(a.n, dim, &sch)?;
            (r.trace, r.objective, r.accepted, r.moves, io::write_plc(&r.best), "dx")
        }
        AnnealTarget::Triangle => {
            let r = anneal_max_triangle(a.n, dim, &sch)?;
            (r.trace, r.objective, r.accepted, r.moves, io::write_pts(&r.best)?, "triangle")
        }
    };
    if let Some(path) = &a.config_out {
        write_file(path, &text)?;
    }
    let mut t = Table::new("anneal", seed, &[("epoch", "epoch index"), ("best", "best objective so far")]);
    t.note(format!("target={what}"));
    t.note(format!("n={}", a.n));
    t.note(format!("objective={objective}"));
    t.note(format!("accepted={accepted}"));
    t.note(format!("moves={moves}"));
    for (e, b) in trace.iter().enumerate() {
        t.row(vec![int(e), num(*b)]);
    }
    Ok(t)
}

/// Parses `0.25`, `1/16` or `1e-3`.
fn parse_rung(s: &str) -> Outcome<f64> {
    let bad = || Failure::Usage(format!("bad ladder value {s:?}"));
    let v = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().map_err(|_| bad())? / b.trim().parse::<f64>().map_err(|_| bad())?,
        None => s.trim().parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn exponent(a: &ExponentArgs, seed: u64) -> Outcome<Table> {
    let dim = dim_of(a.dim)?;
    let sch = schedule(&a.schedule, seed)?;
    let family = Family::from_tag(&a.family, dim, sch)?;
    let ladder = a.ladder.split(',').map(parse_rung).collect::<Outcome<Vec<f64>>>()?;
    let seeds = match &a.seeds {
        Some(s) => s
            .split(',')
            .map(|v| v.trim().parse::<u64>().map_err(|_| Failure::Usage(format!("bad seed {v:?}"))))
            .collect::<Outcome<Vec<u64>>>()?,
        None => vec![seed],
    };
    let fit = exponent_estimate(&family, &ladder, &seeds)?;
    let mut t = Table::new(
        "exponent",
        seed,
        &[
            ("rung", "ladder value"),
            ("value", "median over seeds"),
            ("samples", "valid seeds at this rung"),
        ],
    );
    t.note(format!("family={}", fit.family));
    t.note(format!("seeds={}", seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(";")));
    t.note(format!("slope={}", fit.slope));
    t.note(format!("intercept={}", fit.intercept));
    t.note(format!("r_squared={}", fit.r_squared));
    for ((r, v), s) in fit.ladder.iter().zip(&fit.values).zip(&fit.samples) {
        t.row(vec![num(*r), num(*v), int(s.len())]);
    }
    Ok(t)
}
