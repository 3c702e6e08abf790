//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed; exits non-zero if any line fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;

use nonclassical::cli::presets;
use nonclassical::cli::validate::standard_grid;
use nonclassical::error::{Error, Result};
use nonclassical::oracle::OracleState;
use nonclassical::states::{self, ClosedForm, DetectorSpec, Family, StateSpec, SupParams};
use nonclassical::witnesses::{self, Note};
use nonclassical::MomentProvider;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        id,
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b.abs() <= 1e-12 {
        (a - b).abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn sup(s: f64) -> SupParams {
    SupParams::with_positive_t(s).unwrap()
}

fn socs(s: f64, alpha: f64) -> StateSpec {
    StateSpec::socs(sup(s), Complex64::new(alpha, 0.0)).unwrap()
}

fn sots(s: f64, nbar: f64) -> StateSpec {
    StateSpec::sots(sup(s), nbar).unwrap()
}

fn oracle_equivalence() -> Result<Vec<Outcome>> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut at = String::new();
    for spec in standard_grid() {
        let closed = ClosedForm::new(&spec)?;
        let oracle = OracleState::from_spec(&spec, 6)?;
        for m in 0..=6 {
            for n in 0..=6 {
                let (c, o) = (closed.moment(m, n)?, oracle.moment(m, n)?);
                let err = if c.norm() <= 1e-12 { (c - o).norm() } else { (c - o).norm() / c.norm() };
                if err > worst {
                    worst = err;
                    at = format!("{spec:?} m={m} n={n}");
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(vec![
        outcome("1 moments closed vs oracle", worst <= 1e-9, format!("max rel err {worst:.2e} at {at}")),
        outcome("1 runtime", secs < 10.0, format!("{secs:.2} s")),
    ])
}

fn normalization() -> Result<Vec<Outcome>> {
    let (mut norm_err, mut prob_err) = (0.0f64, 0.0f64);
    for spec in standard_grid() {
        let closed = ClosedForm::new(&spec)?;
        let oracle = OracleState::from_spec(&spec, 6)?;
        norm_err = norm_err
            .max((closed.moment(0, 0)? - 1.0).norm())
            .max((oracle.moment(0, 0)? - 1.0).norm());
        let total: f64 = (0..=oracle.cutoff()).map(|m| closed.photon_prob(m)).sum::<Result<f64>>()?;
        prob_err = prob_err.max((total - 1.0).abs());
    }
    Ok(vec![
        outcome("2 moment(0,0) = 1", norm_err <= 1e-12, format!("max err {norm_err:.2e}")),
        outcome("2 probabilities sum to 1", prob_err <= 1e-10, format!("max err {prob_err:.2e}")),
    ])
}

fn coherent_boundary() -> Result<Vec<Outcome>> {
    let (mut q, mut d, mut dd, mut sq) = ((0.0f64, 0), (0.0f64, 0), (0.0f64, 0), (0.0f64, 0));
    for alpha in [0.5, 1.0, 2.0] {
        let oracle = OracleState::coherent(Complex64::new(alpha, 0.0), 8)?;
        for l in 2..=8 {
            let v = witnesses::mandel_q(&oracle, l)?.value.abs();
            if v > q.0 {
                q = (v, l);
            }
            let v = witnesses::hoa(&oracle, l)?.value.abs();
            if v > d.0 {
                d = (v, l);
            }
            let v = witnesses::hosps(&oracle, l)?.value.abs();
            if v > dd.0 {
                dd = (v, l);
            }
            if l % 2 == 0 {
                let v = witnesses::hos(&oracle, l)?.value.abs();
                if v > sq.0 {
                    sq = (v, l);
                }
            }
        }
    }
    let line = |id, (v, l): (f64, usize)| outcome(id, v <= 1e-10, format!("max |value| {v:.3e} (l={l})"));
    let oracle = OracleState::coherent(Complex64::new(2.0, 0.0), 8)?;
    let per_order = (2..=8)
        .map(|l| Ok(format!("l={l}: {:.3e}", witnesses::mandel_q(&oracle, l)?.value)))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        outcome(
            "3 coherent Mandel Q",
            q.0 <= 1e-10,
            format!("max |value| {:.3e} (l={}); alpha=2: {}", q.0, q.1, per_order.join(", ")),
        ),
        line("3 coherent HOA", d),
        line("3 coherent HOSPS", dd),
        line("3 coherent HOS", sq),
    ])
}

fn identity() -> Result<Vec<Outcome>> {
    let mut worst = 0.0f64;
    for spec in standard_grid() {
        let c = ClosedForm::new(&spec)?;
        let hosps = witnesses::hosps(&c, 2)?.value;
        let hoa = witnesses::hoa(&c, 2)?.value;
        let mean = c.moment(1, 1)?.re;
        let q = witnesses::mandel_q(&c, 2)?.value;
        worst = worst.max((hosps - hoa).abs()).max((hoa - mean * q).abs());
    }
    Ok(vec![outcome(
        "4 hosps(2) = hoa(2) = <N> q(2)",
        worst <= 1e-10,
        format!("max diff {worst:.2e}"),
    )])
}

fn klyshko_pattern() -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for (id, spec) in [("5 Klyshko pattern SOCS", socs(0.2, 2.0)), ("5 Klyshko pattern SOTS", sots(0.2, 2.0))] {
        let c = ClosedForm::new(&spec)?;
        let b = (0..=6)
            .map(|m| Ok(witnesses::klyshko(&c, m)?.value))
            .collect::<Result<Vec<f64>>>()?;
        let pass = b[0] < 0.0 && b[1] < 0.0 && b[2..].iter().all(|&v| v >= 0.0);
        let text: Vec<String> = b.iter().map(|v| format!("{v:.3e}")).collect();
        out.push(outcome(id, pass, format!("B(0..6) = [{}]", text.join(", "))));
    }
    Ok(out)
}

fn husimi() -> Result<Vec<Outcome>> {
    let spec = socs(0.2, 1.0);
    let p = spec.sup();
    let alpha = Complex64::new(1.0, 0.0);
    let beta0 = -p.s() / (p.slope() * alpha.conj());
    let q0 = states::husimi(&spec, beta0)?;

    let start = Instant::now();
    let mut worst = 0.0f64;
    for spec in standard_grid() {
        let total = witnesses::husimi_integral(witnesses::husimi_radius(&spec), 0.1, |b| states::husimi(&spec, b))?;
        worst = worst.max((total - 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(vec![
        outcome("6 Husimi zero at analytic beta0", q0 < 1e-15, format!("Q(beta0) = {q0:.3e} at {beta0}")),
        outcome("6 Husimi plane integral", worst <= 1e-6, format!("max |integral - 1| {worst:.2e}")),
        outcome("6 runtime", secs < 5.0, format!("{secs:.2} s")),
    ])
}

fn a3_bounds() -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for family in [Family::Socs, Family::Sots] {
        let (mut lo, mut hi, mut poles) = (f64::INFINITY, f64::NEG_INFINITY, 0);
        let (mut lo_at, mut hi_at) = (String::new(), String::new());
        for spec in standard_grid().into_iter().filter(|s| s.family() == family) {
            let r = witnesses::agarwal_tara(&ClosedForm::new(&spec)?)?;
            if r.note == Some(Note::Singular) {
                poles += 1;
                continue;
            }
            if r.value < lo {
                lo = r.value;
                lo_at = format!("{spec:?}");
            }
            if r.value > hi {
                hi = r.value;
                hi_at = format!("{spec:?}");
            }
        }
        let name = family.name().to_uppercase();
        out.push(outcome(
            if family == Family::Socs { "7 A3 lower bound SOCS" } else { "7 A3 lower bound SOTS" },
            lo >= -1.0 - 1e-10,
            format!("{name} min {lo:.6} at {lo_at}; {poles} pole point(s) skipped"),
        ));
        out.push(outcome(
            if family == Family::Socs { "7 A3 upper bound SOCS" } else { "7 A3 upper bound SOTS" },
            hi <= 1e-10,
            format!("{name} max {hi:.6} at {hi_at}"),
        ));
    }
    let vac = witnesses::agarwal_tara(&ClosedForm::new(&socs(0.5, 0.0))?)?.value;
    out.push(outcome("7 A3 SOCS alpha=0", vac.abs() <= 1e-12, format!("A3 = {vac:e}")));
    let one = witnesses::agarwal_tara(&OracleState::fock(1, 4)?)?.value;
    out.push(outcome("7 A3 single-photon Fock", (one + 1.0).abs() <= 1e-10, format!("A3 = {one}")));
    Ok(out)
}

fn hos_lower_order() -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for family in [Family::Socs, Family::Sots] {
        let mut worst = (f64::INFINITY, 0.0, 0.0);
        for s in [0.2, 0.5, 0.8] {
            for i in 0..41 {
                let g = 2.0 * i as f64 / 40.0;
                let spec = StateSpec::from_gamma(family, sup(s), g, 0.0, DetectorSpec::ideal())?;
                let v = witnesses::hos(&ClosedForm::new(&spec)?, 2)?.value;
                if v < worst.0 {
                    worst = (v, s, g);
                }
            }
        }
        out.push(outcome(
            if family == Family::Socs { "8 S(2) >= 0 SOCS" } else { "8 S(2) >= 0 SOTS" },
            worst.0 >= -1e-10,
            format!("min S(2) {:.6e} at s={} gamma={}", worst.0, worst.1, worst.2),
        ));
    }
    Ok(out)
}

/// Moments straight from the lossless closed forms, probabilities from the
/// photon-number distribution written out by hand.
struct LosslessPath(StateSpec);

impl MomentProvider for LosslessPath {
    fn moment(&self, m: usize, n: usize) -> Result<Complex64> {
        match self.0 {
            StateSpec::Socs { sup, coherent, .. } => states::moment_socs(m, n, &sup, &coherent),
            StateSpec::Sots { sup, thermal, .. } => {
                Ok(Complex64::new(states::moment_sots(m, n, &sup, &thermal)?, 0.0))
            }
        }
    }

    fn photon_prob(&self, k: usize) -> Result<f64> {
        let p = self.0.sup();
        let g = p.g(k as f64);
        match self.0 {
            StateSpec::Socs { sup, coherent, .. } => {
                let x = coherent.intensity();
                let lf: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
                let pois = (-x + k as f64 * x.ln() - lf).exp();
                Ok(g * g * pois / states::normalization_socs(&sup, &coherent)?)
            }
            StateSpec::Sots { sup, thermal, .. } => {
                let nb = thermal.nbar();
                let w = (nb / (1.0 + nb)).powi(k as i32) / (1.0 + nb);
                Ok(g * g * w / states::normalization_sots(&sup, &thermal)?)
            }
        }
    }

    fn order_bound(&self) -> usize {
        64
    }
}

fn eval_all(mp: &dyn MomentProvider) -> Vec<Result<f64>> {
    let mut v = Vec::new();
    for l in 2..=6 {
        v.push(witnesses::mandel_q(mp, l).map(|r| r.value));
        v.push(witnesses::hoa(mp, l).map(|r| r.value));
        v.push(witnesses::hosps(mp, l).map(|r| r.value));
    }
    for l in [2, 4, 6] {
        v.push(witnesses::hos(mp, l).map(|r| r.value));
    }
    v.push(witnesses::agarwal_tara(mp).map(|r| r.value));
    for m in 0..=6 {
        v.push(witnesses::klyshko(mp, m).map(|r| r.value));
    }
    v
}

fn detector_reduction() -> Result<Vec<Outcome>> {
    let mut worst = 0.0f64;
    let mut mismatched = 0;
    for spec in standard_grid().into_iter().filter(|s| s.detector().eta() == 0.0) {
        let lossy = spec.with_detector(DetectorSpec::new(0.0)?);
        let a = eval_all(&ClosedForm::new(&lossy)?);
        let b = eval_all(&LosslessPath(spec));
        for (x, y) in a.iter().zip(&b) {
            match (x, y) {
                (Ok(x), Ok(y)) => worst = worst.max(rel(*x, *y)),
                (Err(_), Err(_)) => {}
                _ => mismatched += 1,
            }
        }
    }
    let dark = socs(0.5, 1.5).with_detector(DetectorSpec::new(1.0)?);
    let c = ClosedForm::new(&dark)?;
    let q_undefined = matches!(witnesses::mandel_q(&c, 2), Err(Error::UndefinedWitness(_)));
    let p0 = c.photon_prob(0)?;
    Ok(vec![
        outcome(
            "9 eta=0 matches lossless path",
            worst <= 1e-12 && mismatched == 0,
            format!("max rel diff {worst:.2e}, {mismatched} definedness mismatch(es)"),
        ),
        outcome(
            "9 eta=1 SOCS is vacuum",
            q_undefined && (p0 - 1.0).abs() <= 1e-12,
            format!("Mandel Q undefined: {q_undefined}, p0 = {p0}"),
        ),
    ])
}

fn eta_report() -> Result<Vec<Outcome>> {
    let t = presets::eta_report()?;
    let col = |name: &str| t.column(name).expect("report column");
    let notes: Vec<String> = col("note").iter().map(|c| c.to_string()).collect();
    let fams: Vec<String> = col("family").iter().map(|c| c.to_string()).collect();
    let etas: Vec<f64> = col("eta").iter().map(|c| c.as_f64().unwrap()).collect();
    let flagged = (0..notes.len())
        .filter(|&i| fams[i] == "sots" && etas[i] == 0.0 && notes[i] == "printed normalization vanishes")
        .count();
    let sots_eta0 = (0..notes.len()).filter(|&i| fams[i] == "sots" && etas[i] == 0.0).count();
    let points: std::collections::BTreeSet<String> = t
        .rows()
        .iter()
        .map(|r| format!("{},{},{},{}", r[0], r[1], r[3], r[4]))
        .collect();
    let recorded = col("definition_value").iter().all(|c| c.as_f64().is_some());
    let pass = flagged > 0 && flagged == sots_eta0 && points.len() >= 27 && recorded;
    Ok(vec![outcome(
        "10 eta discrepancy report",
        pass,
        format!("{} rows, {} grid points, {flagged} flagged degenerate rows", t.rows().len(), points.len()),
    )])
}

fn mandel_higher_order() -> Result<Vec<Outcome>> {
    let mut found = Vec::new();
    let mut min_q5 = f64::INFINITY;
    for family in [Family::Socs, Family::Sots] {
        for i in 1..=400 {
            let g = 4.0 * i as f64 / 400.0;
            let spec = StateSpec::from_gamma(family, sup(0.2), g, 0.0, DetectorSpec::ideal())?;
            let c = ClosedForm::new(&spec)?;
            let q2 = witnesses::mandel_q(&c, 2)?.value;
            let q5 = witnesses::mandel_q(&c, 5)?.value;
            min_q5 = min_q5.min(if q2 >= 0.0 { q5 } else { f64::INFINITY });
            if q5 < 0.0 && q2 >= 0.0 {
                found.push(format!("{} gamma={g}", family.name()));
            }
        }
    }
    let detail = match found.first() {
        Some(w) => format!("first witness {w}"),
        None => format!("none on 400-point sweeps; min Q(5) where Q(2) >= 0 is {min_q5:.4}"),
    };
    Ok(vec![outcome("11 Q(5) < 0 <= Q(2) exists", !found.is_empty(), detail)])
}

type Group = fn() -> Result<Vec<Outcome>>;

fn main() -> ExitCode {
    let groups: [(&str, Group); 11] = [
        ("1", oracle_equivalence),
        ("2", normalization),
        ("3", coherent_boundary),
        ("4", identity),
        ("5", klyshko_pattern),
        ("6", husimi),
        ("7", a3_bounds),
        ("8", hos_lower_order),
        ("9", detector_reduction),
        ("10", eta_report),
        ("11", mandel_higher_order),
    ];
    let mut failed = 0;
    for (id, run) in groups {
        match run() {
            Ok(lines) => {
                for o in lines {
                    let tag = if o.pass { "PASS" } else { "FAIL" };
                    if !o.pass {
                        failed += 1;
                    }
                    println!("{tag} [{}] {}", o.id, o.detail);
                }
            }
            Err(e) => {
                failed += 1;
                println!("FAIL [{id}] error: {e}");
            }
        }
    }
    println!("acceptance: {failed} failing line(s)");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
