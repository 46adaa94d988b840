use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use teich::coords::{self, classify_with, d_fn, d_inf, d_ls_lower_bound, density_table, CurveFamily, FamilyKind, FnVector};
use teich::deform::{self, apply_mcg, nondiscreteness_experiment, MappingClassFs};
use teich::document::Spec;
use teich::holonomy::XKind;
use teich::hyptrig::{arc_bounds, collar_width, hexagon_side_bounds, hexagon_solve, Quadrilateral};
use teich::qc::{self, beltrami_modulus, dilatation_twist, wolpert_sample, TwistMapParams, WolpertSample};
use teich::{Error, Exec};

use crate::table::{num, opt, Table};
use crate::{Cli, Command, Denominator, DistanceArgs, DeformArgs, Experiment, Family, Metric, Trig};

/// A failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Precondition(String),
    Numeric(String),
    Io(String),
    Check(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Numeric(_) => 5,
            CliError::Io(_) => 6,
            CliError::Check(_) => 7,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) | CliError::Numeric(m) | CliError::Io(m) => f.write_str(m),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::Parse { .. } | Error::Malformed(_) => CliError::Parse(m),
            Error::Precondition(_) | Error::IncompatibleBase | Error::InvalidIndex(_) | Error::Unsupported(_) => {
                CliError::Precondition(m)
            }
            Error::Domain(_) | Error::Infeasible(_) | Error::NonHyperbolic { .. } | Error::Arity { .. } => {
                CliError::Numeric(m)
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Twist(i64, f64),
    Lengthen(i64, f64),
    Dehn(i64, i32),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Twist(i, t) => write!(f, "twist:{i}:{t}"),
            Step::Lengthen(i, r) => write!(f, "lengthen:{i}:{r}"),
            Step::Dehn(i, n) => write!(f, "dehn:{i}:{n}"),
        }
    }
}

fn field<T: FromStr>(s: &str, what: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("invalid {what} {s:?}"))
}

pub fn parse_step(s: &str) -> std::result::Result<Step, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [op, i, v] = parts[..] else {
        return Err(format!("expected OP:CURVE:VALUE, got {s:?}"));
    };
    let i = field(i, "curve index")?;
    match op {
        "twist" => Ok(Step::Twist(i, field(v, "twist")?)),
        "lengthen" => Ok(Step::Lengthen(i, field(v, "log-ratio")?)),
        "dehn" => Ok(Step::Dehn(i, field(v, "power")?)),
        _ => Err(format!("unknown step {op:?}; expected twist, lengthen or dehn")),
    }
}

fn load(path: &Path) -> Result<Spec> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Spec::parse(&text)?)
}

fn lookup<'a>(spec: &'a Spec, id: &str) -> Result<&'a FnVector> {
    spec.vector(id).map_err(|_| CliError::Precondition(format!("no vector with id {id:?}")))
}

fn flag(b: bool) -> String {
    u8::from(b).to_string()
}

pub fn run(cli: &Cli) -> Result<()> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let table = match &cli.command {
        Command::Trig(t) => trig(t)?,
        Command::Classify { spec, denominator } => classify(&load(spec)?, *denominator)?,
        Command::Distance(a) => distance(a)?,
        Command::Deform(a) => deform(a)?,
        Command::Experiment(e) => experiment(e, cli, exec)?,
    };
    table.write_to(cli.out.as_deref())?;
    Ok(())
}

fn trig(t: &Trig) -> Result<Table> {
    Ok(match *t {
        Trig::Hexagon { a, b, c } => {
            let h = hexagon_solve(a, b, c)?;
            let mut out = Table::new(&["a", "b", "c", "a_opp", "b_opp", "c_opp", "cosine_residual", "sine_residual"]);
            out.push(
                [h.a, h.b, h.c, h.a_opp, h.b_opp, h.c_opp, h.cosine_rule_residual(), h.sine_rule_residual()]
                    .map(num)
                    .to_vec(),
            );
            out
        }
        Trig::Quad { a, b, base, concave } => {
            let q = Quadrilateral::new(a, b, base, !concave)?;
            let mut out = Table::new(&["a", "b", "base", "convex", "c", "alpha", "beta", "side_residual", "angle_residual"]);
            out.push(vec![
                num(q.a),
                num(q.b),
                num(q.base),
                flag(q.convex),
                num(q.c),
                num(q.alpha),
                num(q.beta),
                num(q.side_residual()),
                num(q.angle_relation_residual()),
            ]);
            out
        }
        Trig::Collar { ref lengths } => {
            let mut out = Table::new(&["length", "collar_width", "theta0"]);
            for &l in lengths {
                out.push(vec![num(l), num(collar_width(l)?), num(qc::theta0_from_collar(l)?)]);
            }
            out
        }
        Trig::Bounds { m } => {
            let (hl, hu) = hexagon_side_bounds(m)?;
            let (al, au) = arc_bounds(m)?;
            let mut out = Table::new(&["m", "hexagon_lower", "hexagon_upper", "arc_lower", "arc_upper"]);
            out.push([m, hl, hu, al, au].map(num).to_vec());
            out
        }
        Trig::TwistMap { t, theta0, length } => {
            let p = match (theta0, length) {
                (Some(th), _) => TwistMapParams::new(t, th)?,
                (None, Some(l)) => TwistMapParams::from_collar(l, t)?,
                (None, None) => unreachable!("clap requires one of --theta0, --length"),
            };
            let mut out = Table::new(&["t", "theta0", "beltrami_modulus", "dilatation"]);
            out.push([p.t(), p.theta0(), beltrami_modulus(&p), dilatation_twist(&p)].map(num).to_vec());
            out
        }
    })
}

fn classify(spec: &Spec, denominator: Denominator) -> Result<Table> {
    let denominator = match denominator {
        Denominator::Base => coords::Denominator::Base,
        Denominator::Target => coords::Denominator::Target,
    };
    let p = spec.base.predicates();
    let mut out = Table::new(&[
        "id",
        "finest",
        "fs",
        "zero_qc",
        "zero_ls",
        "qc",
        "ls",
        "support",
        "length_sup",
        "twist_sup",
        "length_tail",
        "twist_tail",
        "twist_ratio_tail",
        "upper_bounded",
        "lower_bounded",
        "shiga",
        "short_curves",
    ]);
    for (id, x) in &spec.vectors {
        let c = classify_with(x, denominator)?;
        let m = c.memberships;
        out.push(vec![
            id.clone(),
            c.finest.to_string(),
            flag(m.fs),
            flag(m.zero_qc),
            flag(m.zero_ls),
            flag(m.qc),
            flag(m.ls),
            opt(c.support),
            num(c.length_sup),
            num(c.twist_sup),
            c.length_tail.to_string(),
            c.twist_tail.to_string(),
            c.twist_ratio_tail.to_string(),
            flag(p.upper_bounded),
            flag(p.lower_bounded),
            flag(p.shiga),
            flag(p.admits_short_curves),
        ]);
    }
    Ok(out)
}

fn distance(a: &DistanceArgs) -> Result<Table> {
    let spec = load(&a.spec)?;
    let (x, y) = (lookup(&spec, &a.x)?, lookup(&spec, &a.y)?);
    Ok(match a.metric {
        Metric::Inf | Metric::Fn => {
            let (name, v) = match a.metric {
                Metric::Inf => ("inf", d_inf(x, y)?),
                _ => ("fn", d_fn(x, y)?),
            };
            let mut out = Table::new(&["x", "y", "metric", "value"]);
            out.push(vec![a.x.clone(), a.y.clone(), name.into(), num(v)]);
            out
        }
        Metric::LsLower => {
            let kind = match a.family {
                Family::Decomposition => FamilyKind::Decomposition,
                Family::Crossing => FamilyKind::Crossing,
                Family::All => FamilyKind::All,
            };
            let mut family = CurveFamily::around(kind, x, y, a.window);
            family.depth = a.depth;
            let b = d_ls_lower_bound(x, y, &family)?;
            let mut out = Table::new(&["x", "y", "metric", "value", "curve", "word", "family_size"]);
            out.push(vec![
                a.x.clone(),
                a.y.clone(),
                "ls-lower".into(),
                num(b.value),
                opt(b.curve),
                b.word.unwrap_or_else(|| "-".into()),
                family.curves.len().to_string(),
            ]);
            out
        }
    })
}

fn deform(a: &DeformArgs) -> Result<Table> {
    let mut spec = load(&a.spec)?;
    let source = lookup(&spec, &a.id)?.clone();
    let mut out = Table::new(&["step", "op", "curve", "length", "twist", "d_inf_from_source"]);
    let mut x = source.clone();
    for (k, step) in a.steps.iter().enumerate() {
        let (curve, op) = match *step {
            Step::Twist(i, t) => (i, deform::twist(&x, i, t)?),
            Step::Lengthen(i, r) => (i, deform::lengthen(&x, i, r)?),
            Step::Dehn(i, n) => (i, apply_mcg(&x, &MappingClassFs::dehn(i, n))?),
        };
        x = op;
        let c = x.coord(curve)?;
        out.push(vec![
            (k + 1).to_string(),
            step.to_string(),
            curve.to_string(),
            num(c.length),
            num(c.twist),
            num(d_inf(&source, &x)?),
        ]);
    }
    if let Some(path) = &a.spec_out {
        let id = a.id_out.clone().unwrap_or_else(|| format!("{}'", a.id));
        if spec.vectors.iter().any(|(name, _)| *name == id) {
            return Err(CliError::Precondition(format!("vector id {id:?} already exists")));
        }
        spec.vectors.push((id, x));
        fs::write(path, spec.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(out)
}

fn experiment(e: &Experiment, cli: &Cli, exec: Exec) -> Result<Table> {
    Ok(match e {
        Experiment::Density { spec, id, max_n } => {
            let spec = load(spec)?;
            let x = lookup(&spec, id)?;
            let ns: Vec<u64> = (1..=*max_n).collect();
            let mut out = Table::new(&["n", "d_inf"]);
            for (n, d) in density_table(x, &ns, exec) {
                out.push(vec![n.to_string(), num(d)]);
            }
            out
        }
        Experiment::Nondiscrete { spec, id, max_n } => {
            let spec = load(spec)?;
            let x = match id {
                Some(id) => lookup(&spec, id)?.clone(),
                None => FnVector::base(spec.base.clone()),
            };
            let report = nondiscreteness_experiment(&x, *max_n, exec)?;
            let mut out = Table::new(&["n", "epsilon", "bound", "measured", "certified", "residual", "ok"]);
            for r in &report.rows {
                let ok = r.measured <= r.bound + r.residual + cli.tolerance;
                out.push(vec![
                    r.n.to_string(),
                    num(r.epsilon),
                    num(r.bound),
                    num(r.measured),
                    num(r.certified),
                    num(r.residual),
                    flag(ok),
                ]);
            }
            let bad = report.violations(cli.tolerance).len();
            if bad > 0 {
                out.write_to(cli.out.as_deref())?;
                return Err(CliError::Check(format!("{bad} rows exceed bound + residual")));
            }
            out
        }
        Experiment::Wolpert { lengths, twists, random } => {
            let samples = match random {
                None => qc::wolpert_grid(*lengths, *twists, exec)?,
                Some(n) => wolpert_random(*n, cli.seed, exec)?,
            };
            let mut out = Table::new(&[
                "kind",
                "length",
                "t",
                "dilatation",
                "ratio_bound",
                "min_ratio",
                "max_ratio",
                "wolpert_ok",
                "ratio_bound_ok",
            ]);
            let mut bad = 0;
            for s in &samples {
                let kind = match s.kind {
                    XKind::OneHoled => "1,1",
                    XKind::FourHoled => "0,4",
                };
                let ok = wolpert_within(s, cli.tolerance);
                bad += usize::from(!ok);
                out.push(vec![
                    kind.into(),
                    num(s.length),
                    num(s.t),
                    num(s.dilatation),
                    num(s.ratio_bound),
                    num(s.min_ratio),
                    num(s.max_ratio),
                    flag(ok),
                    flag(s.ratio_bound_ok()),
                ]);
            }
            if bad > 0 {
                out.write_to(cli.out.as_deref())?;
                return Err(CliError::Check(format!("{bad} samples outside [1/K, K]")));
            }
            out
        }
    })
}

fn wolpert_within(s: &WolpertSample, tol: f64) -> bool {
    s.min_ratio * s.dilatation >= 1.0 - tol && s.max_ratio <= s.dilatation * (1.0 + tol)
}

/// `n` uniform points per X-piece kind over the grid's box, with random boundary lengths.
fn wolpert_random(n: usize, seed: u64, exec: Exec) -> Result<Vec<WolpertSample>> {
    let rows = exec.map_seeded(2 * n, seed, |k, rng| {
        let kind = if k < n { XKind::OneHoled } else { XKind::FourHoled };
        let l = rng.random_range(0.1..4.0);
        let t = rng.random_range(-4.0..4.0);
        let tau = rng.random_range(-2.0..2.0);
        let boundary: Vec<f64> = (0..kind.boundary_count()).map(|_| rng.random_range(0.2..4.0)).collect();
        wolpert_sample(kind, l, tau, &boundary, t)
    });
    Ok(rows.into_iter().collect::<teich::Result<Vec<_>>>()?)
}
