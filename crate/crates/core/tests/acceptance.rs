//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness so
//! the summary is always printed.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use teich::coords::{classify, d_inf, embed, truncate, Class, FnVector, Profile, TailRule};
use teich::deform::{nondiscreteness_bound, nondiscreteness_experiment, twist_ratio_bound};
use teich::holonomy::{dehn_twist_word, xpiece_rep, CurveWord, XKind};
use teich::hyptrig::{collar_width, hexagon_solve};
use teich::qc::wolpert_grid;
use teich::surface::{BaseRule, BaseStructure, Coord, LengthRule, PantsGraph};
use teich::Exec;

const SEED: u64 = 0x7e1c;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit: Option<f64>) -> bool {
    limit.is_none_or(|s| elapsed.as_secs_f64() < s)
}

fn max(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn hexagon_kernel(exec: Exec) -> Outcome {
    let worst = exec.map_seeded(100_000, SEED, |_, rng| {
        let a = rng.random_range(0.05..8.0);
        let b = rng.random_range(0.05..8.0);
        let c = rng.random_range(0.05..8.0);
        let h = hexagon_solve(a, b, c).unwrap();
        h.cosine_rule_residual().max(h.sine_rule_residual())
    });
    let worst = max(worst);
    let s = 2f64.acosh();
    let reg = hexagon_solve(s, s, s).unwrap();
    let reg_err = max([reg.a_opp, reg.b_opp, reg.c_opp].map(|x| (x - s).abs()));
    check(worst < 1e-9 && reg_err < 1e-12, format!("max residual {worst:.2e}, regular {reg_err:.2e}"))
}

/// `(ℓ, τ, ℓ_∂)` in `[0.1, 4] × [-4, 4] × [0.2, 6]`.
fn torus_sample(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    (rng.random_range(0.1..4.0), rng.random_range(-4.0..4.0), rng.random_range(0.2..6.0))
}

fn holonomy_validity(exec: Exec) -> Outcome {
    let rows = exec.map_seeded(10_000, SEED + 1, |_, rng| {
        let (l, tau, bd) = torus_sample(rng);
        let rep = xpiece_rep(XKind::OneHoled, l, tau, &[bd]).unwrap();
        (rep.fricke_residual().unwrap(), rep.trace_residual())
    });
    let fricke = max(rows.iter().map(|r| r.0));
    let trace = max(rows.iter().map(|r| r.1));
    check(fricke < 1e-8 && trace < 1e-8, format!("fricke {fricke:.2e}, boundary trace {trace:.2e}"))
}

fn full_twist_relabeling(exec: Exec) -> Outcome {
    let kind = XKind::OneHoled;
    let beta = CurveWord::beta(kind);
    let words: Vec<CurveWord> =
        (0..=3).map(|n| dehn_twist_word(&CurveWord::dual(kind), &beta, n).unwrap()).collect();
    let worst = exec.map_seeded(10_000, SEED + 1, |_, rng| {
        let (l, tau, bd) = torus_sample(rng);
        let here = xpiece_rep(kind, l, tau, &[bd]).unwrap();
        let moved = xpiece_rep(kind, l, tau + l, &[bd]).unwrap();
        max(words.iter().map(|w| {
            let relabelled = dehn_twist_word(w, &beta, 1).unwrap();
            (moved.curve_length(w).unwrap() - here.curve_length(&relabelled).unwrap()).abs()
        }))
    });
    let worst = max(worst);
    check(worst < 1e-8, format!("max |Δℓ| {worst:.2e} over 4 words"))
}

fn collar_and_dehn_bounds(exec: Exec) -> Outcome {
    let rows = exec.map_seeded(2_000, SEED + 2, |k, rng| {
        let kind = if k % 2 == 0 { XKind::OneHoled } else { XKind::FourHoled };
        let l = rng.random_range(0.1..4.0);
        let tau = rng.random_range(-4.0..4.0);
        let t = rng.random_range(-4.0..4.0);
        let boundary: Vec<f64> = (0..kind.boundary_count()).map(|_| rng.random_range(0.2..6.0)).collect();
        let rep = xpiece_rep(kind, l, tau, &boundary).unwrap();
        let turned = xpiece_rep(kind, l, tau + t, &boundary).unwrap();
        let omega = collar_width(l).unwrap();
        let beta = CurveWord::beta(kind);
        let (mut dehn, mut collar, mut ratio) = (f64::MIN, f64::MIN, f64::MIN);
        for m in -2..=2 {
            let alpha = dehn_twist_word(&CurveWord::dual(kind), &beta, m).unwrap();
            let i = alpha.intersection() as f64;
            let la = rep.curve_length(&alpha).unwrap();
            collar = collar.max(i * omega - la);
            for n in 1..=4 {
                let tn = dehn_twist_word(&alpha, &beta, n).unwrap();
                dehn = dehn.max(rep.curve_length(&tn).unwrap() - la - n as f64 * i * l);
            }
            let r = turned.curve_length(&alpha).unwrap() / la;
            let bound = twist_ratio_bound(l, t).unwrap();
            ratio = ratio.max(r - bound).max(1.0 / r - bound);
        }
        (dehn, collar, ratio)
    });
    let dehn = rows.iter().map(|r| r.0).fold(f64::MIN, f64::max);
    let collar = rows.iter().map(|r| r.1).fold(f64::MIN, f64::max);
    let ratio = rows.iter().map(|r| r.2).fold(f64::MIN, f64::max);
    check(
        dehn <= 1e-8 && collar <= 0.0 && ratio <= 0.0,
        format!("worst margins (negative holds): dehn {dehn:.3e}, collar {collar:.3}, ratio {ratio:.3}"),
    )
}

fn random_profile(rng: &mut ChaCha8Rng) -> Profile {
    match rng.random_range(0..5) {
        0 => Profile::Zero,
        1 => Profile::Decay { scale: rng.random_range(-2.0..2.0), exponent: rng.random_range(0.2..3.0) },
        2 => Profile::Const { value: rng.random_range(-2.0..2.0) },
        3 => Profile::LogGrowth { scale: rng.random_range(-1.0..1.0) },
        _ => Profile::PowerGrowth { scale: rng.random_range(-1.0..1.0), exponent: rng.random_range(0.1..1.5) },
    }
}

fn bounded_profile(rng: &mut ChaCha8Rng) -> Profile {
    loop {
        let p = random_profile(rng);
        if p.series().is_bounded() {
            return p;
        }
    }
}

fn random_vector(base: &Arc<BaseStructure>, rng: &mut ChaCha8Rng, profile: fn(&mut ChaCha8Rng) -> Profile) -> FnVector {
    let mut overrides = BTreeMap::new();
    for _ in 0..rng.random_range(0..5) {
        let c = Coord { length: rng.random_range(0.1..5.0), twist: rng.random_range(-3.0..3.0) };
        overrides.insert(rng.random_range(1..40), c);
    }
    let tail = TailRule { length: profile(rng), twist: profile(rng) };
    FnVector::new(base.clone(), overrides, tail).unwrap()
}

fn bases() -> Vec<Arc<BaseStructure>> {
    let rules = [
        LengthRule::Constant { value: 1.0 },
        LengthRule::Constant { value: 2.5 },
        LengthRule::PowerDecay { scale: 1.0, exponent: 1.0 },
        LengthRule::PowerDecay { scale: 0.5, exponent: 2.0 },
        LengthRule::CappedGrowth { scale: 0.1, exponent: 1.0, cap: Some(3.0) },
    ];
    let graphs = [PantsGraph::ladder(), PantsGraph::flute(1.0).unwrap()];
    graphs
        .iter()
        .flat_map(|g| rules.iter().map(move |r| Arc::new(BaseStructure::new(g.clone(), BaseRule::new(*r)).unwrap())))
        .collect()
}

fn classification(exec: Exec) -> Outcome {
    let bases = bases();
    let rows = exec.map_seeded(10_000, SEED + 3, |k, rng| {
        let x = random_vector(&bases[k % bases.len()], rng, random_profile);
        let c = classify(&x).unwrap();
        (c.memberships.is_nested(), c.finest)
    });
    let violations = rows.iter().filter(|r| !r.0).count();
    let distinct: std::collections::BTreeSet<Class> = rows.iter().map(|r| r.1).collect();

    let flat = Arc::new(BaseStructure::new(PantsGraph::ladder(), BaseRule::constant(1.0)).unwrap());
    let short = Arc::new(
        BaseStructure::new(PantsGraph::flute(1.0).unwrap(), BaseRule::new(LengthRule::PowerDecay { scale: 1.0, exponent: 1.0 }))
            .unwrap(),
    );
    let witnesses = [
        (FnVector::base(flat.clone()), Class::Fs),
        (FnVector::with_tail(flat.clone(), TailRule::log_decay(1.0, 1.0, 0.0, 1.0)).unwrap(), Class::ZeroQc),
        (FnVector::with_tail(flat, TailRule::const_offset(0.0, 5.0)).unwrap(), Class::Qc),
        (
            FnVector::with_tail(short, TailRule { length: Profile::Zero, twist: Profile::LogGrowth { scale: 0.5 } }).unwrap(),
            Class::Ls,
        ),
    ];
    let wrong: Vec<String> = witnesses
        .iter()
        .filter_map(|(x, want)| {
            let got = classify(x).unwrap().finest;
            (got != *want).then(|| format!("{want} classified as {got}"))
        })
        .collect();
    check(
        violations == 0 && wrong.is_empty(),
        format!("{violations} nesting violations, {} classes seen, witnesses {}", distinct.len(), if wrong.is_empty() { "ok".into() } else { wrong.join("; ") }),
    )
}

fn density() -> Outcome {
    let base = Arc::new(BaseStructure::new(PantsGraph::flute(1.0).unwrap(), BaseRule::constant(1.0)).unwrap());
    let x = FnVector::with_tail(base, TailRule::log_decay(1.0, 1.0, 0.0, 1.0)).unwrap();
    let mut worst = 0.0f64;
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for n in 1..=1000u64 {
        let d = d_inf(&truncate(&x, n), &x).unwrap();
        worst = worst.max((d - 1.0 / (n + 1) as f64).abs());
        monotone &= d < prev;
        prev = d;
    }
    check(worst < 1e-12 && monotone, format!("max |d - 1/(n+1)| {worst:.2e}, strictly decreasing: {monotone}"))
}

fn nondiscreteness(exec: Exec) -> Outcome {
    let rule = BaseRule::new(LengthRule::PowerDecay { scale: 1.0, exponent: 1.0 });
    let base = Arc::new(BaseStructure::new(PantsGraph::flute(1.0).unwrap(), rule).unwrap());
    let first_below = (2..=10_000u64).find(|&n| nondiscreteness_bound(1.0 / n as f64).unwrap() < 1e-3);
    let at_end = nondiscreteness_bound(1e-4).unwrap();
    let report = nondiscreteness_experiment(&FnVector::base(base), 1000, exec).unwrap();
    let violations = report.violations(0.0).len();
    let worst_gap = report.rows.iter().map(|r| r.measured - r.bound - r.residual).fold(f64::MIN, f64::max);
    check(
        at_end < 1e-3 && violations == 0 && report.converges(1e-3),
        format!(
            "bound < 1e-3 from n = {}, bound(1e4) = {at_end:.2e}; {} rows, {violations} above bound + residual (max gap {worst_gap:.2e})",
            first_below.map_or("-".into(), |n| n.to_string()),
            report.rows.len()
        ),
    )
}

fn wolpert(exec: Exec) -> Outcome {
    let samples = wolpert_grid(25, 20, exec).unwrap();
    let bad = samples.iter().filter(|s| !s.wolpert_ok()).count();
    let slack = samples.iter().map(|s| s.max_ratio.max(1.0 / s.min_ratio) / s.dilatation).fold(0.0, f64::max);
    check(bad == 0, format!("{} grid points, {bad} violations, max ratio/K {slack:.3}", samples.len()))
}

fn embedding_isometry(exec: Exec) -> Outcome {
    let bases = bases();
    let rows = exec.map_seeded(1_000, SEED + 4, |k, rng| {
        let b = &bases[k % bases.len()];
        let [x, y, z] = [(); 3].map(|_| random_vector(b, rng, bounded_profile));
        let (xy, yx) = (d_inf(&x, &y).unwrap(), d_inf(&y, &x).unwrap());
        let exact = xy == embed(&x).sub(&embed(&y)).unwrap().sup_norm();
        let triangle = d_inf(&x, &z).unwrap() - xy - d_inf(&y, &z).unwrap();
        let identity = d_inf(&x, &x).unwrap();
        (exact, (xy - yx).abs().max(triangle).max(identity))
    });
    let inexact = rows.iter().filter(|r| !r.0).count();
    let axioms = rows.iter().map(|r| r.1).fold(f64::MIN, f64::max);
    check(inexact == 0 && axioms <= 1e-12, format!("{inexact} inexact pairs, worst axiom slack {axioms:.2e}"))
}

/// Name, wall-clock limit in seconds, and the check.
type Criterion = (&'static str, Option<f64>, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let exec = Exec::default();
    let criteria: [Criterion; 9] = [
        ("hexagon kernel", Some(5.0), Box::new(move || hexagon_kernel(exec))),
        ("holonomy validity", Some(10.0), Box::new(move || holonomy_validity(exec))),
        ("full-twist relabeling", None, Box::new(move || full_twist_relabeling(exec))),
        ("collar and Dehn bounds", None, Box::new(move || collar_and_dehn_bounds(exec))),
        ("classification", None, Box::new(move || classification(exec))),
        ("density", Some(1.0), Box::new(density)),
        ("non-discreteness", Some(30.0), Box::new(move || nondiscreteness(exec))),
        ("wolpert harness", None, Box::new(move || wolpert(exec))),
        ("embedding isometry", None, Box::new(move || embedding_isometry(exec))),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let timely = within(elapsed, *limit);
        let pass = out.pass && timely;
        failed += usize::from(!pass);
        let budget = limit.map_or(String::new(), |s| format!(" (limit {s} s)"));
        println!(
            "{} {}. {name}: {} [{:.3} s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
