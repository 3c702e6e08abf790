//! Closed-form versus oracle validation over the standard grid.

use std::f64::consts::FRAC_PI_4;
use std::fmt::{self, Write as _};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::oracle::OracleState;
use crate::states::{ClosedForm, DetectorSpec, StateSpec, SupParams};
use crate::witnesses::{self, Criterion, MomentProvider};

pub const MOMENT_TOLERANCE: f64 = 1e-9;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;
pub const PROBABILITY_TOLERANCE: f64 = 1e-10;
pub const WITNESS_TOLERANCE: f64 = 1e-9;
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
const ABSOLUTE_FLOOR: f64 = 1e-12;
const MAX_ORDER: usize = 8;

/// Deliberate faults used to check that validation can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perturbation {
    /// Negates the closed-form `⟨a†a⟩`.
    FlipMeanSign,
}

struct Perturbed<'a> {
    inner: &'a ClosedForm,
    perturbation: Option<Perturbation>,
}

impl MomentProvider for Perturbed<'_> {
    fn moment(&self, m: usize, n: usize) -> Result<Complex64> {
        let v = self.inner.moment(m, n)?;
        Ok(match self.perturbation {
            Some(Perturbation::FlipMeanSign) if (m, n) == (1, 1) => -v,
            _ => v,
        })
    }

    fn photon_prob(&self, m: usize) -> Result<f64> {
        self.inner.photon_prob(m)
    }

    fn order_bound(&self) -> usize {
        self.inner.order_bound()
    }
}

/// The standard grid: `s ∈ {0.2, 0.5, 0.8}`, `|α| ∈ {0.5, 1, 2}` at phases
/// `0` and `π/4`, `n̄ ∈ {0.5, 1, 2}`, `η ∈ {0, 0.25, 0.5}`.
pub fn standard_grid() -> Vec<StateSpec> {
    let mut out = Vec::new();
    for s in [0.2, 0.5, 0.8] {
        let sup = SupParams::with_positive_t(s).expect("unit-circle s");
        for eta in [0.0, 0.25, 0.5] {
            let det = DetectorSpec::new(eta).expect("eta in range");
            for g in [0.5, 1.0, 2.0] {
                for phase in [0.0, FRAC_PI_4] {
                    let alpha = Complex64::from_polar(g, phase);
                    out.push(StateSpec::socs(sup, alpha).expect("finite").with_detector(det));
                }
                out.push(StateSpec::sots(sup, g).expect("finite").with_detector(det));
            }
        }
    }
    out
}

/// `socs s=0.5 alpha=1+0i` / `sots s=0.5 nbar=1`, plus ` eta=…` when lossy.
pub fn describe(spec: &StateSpec) -> String {
    let mut out = match spec {
        StateSpec::Socs { sup, coherent, .. } => format!("socs s={} alpha={}", sup.s(), coherent.alpha()),
        StateSpec::Sots { sup, thermal, .. } => format!("sots s={} nbar={}", sup.s(), thermal.nbar()),
    };
    let eta = spec.detector().eta();
    if eta != 0.0 {
        let _ = write!(out, " eta={eta}");
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub tolerance: f64,
    pub max_error: f64,
    pub failures: Vec<String>,
}

impl CheckSummary {
    fn new(name: &'static str, tolerance: f64) -> Self {
        CheckSummary {
            name,
            tolerance,
            max_error: 0.0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, err: f64, context: impl FnOnce() -> String) {
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.max_error = self.max_error.max(err);
        if err > self.tolerance {
            self.failures.push(format!("{} err={err:e}", context()));
        }
    }

    fn merge(&mut self, other: CheckSummary) {
        self.max_error = self.max_error.max(other.max_error);
        self.failures.extend(other.failures);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckSummary>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check,max_error,tolerance,status")?;
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            writeln!(f, "{},{:.3e},{:.0e},{}", c.name, c.max_error, c.tolerance, status)?;
        }
        for c in &self.checks {
            for line in &c.failures {
                writeln!(f, "{}: {line}", c.name)?;
            }
        }
        Ok(())
    }
}

fn relative(a: f64, b: f64) -> f64 {
    if b.abs() <= ABSOLUTE_FLOOR {
        (a - b).abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn relative_c(a: Complex64, b: Complex64) -> f64 {
    if b.norm() <= ABSOLUTE_FLOOR {
        (a - b).norm()
    } else {
        (a - b).norm() / b.norm()
    }
}

const WITNESS_SET: [(Criterion, usize); 14] = [
    (Criterion::MandelQ, 2),
    (Criterion::MandelQ, 5),
    (Criterion::Hoa, 2),
    (Criterion::Hoa, 4),
    (Criterion::Hosps, 2),
    (Criterion::Hosps, 4),
    (Criterion::Hos, 2),
    (Criterion::Hos, 4),
    (Criterion::Hos, 6),
    (Criterion::AgarwalTara, 3),
    (Criterion::Klyshko, 0),
    (Criterion::Klyshko, 1),
    (Criterion::Klyshko, 4),
    (Criterion::Klyshko, 6),
];

fn evaluate(mp: &dyn MomentProvider, c: Criterion, order: usize) -> Result<f64> {
    Ok(match c {
        Criterion::MandelQ => witnesses::mandel_q(mp, order)?.value,
        Criterion::Hoa => witnesses::hoa(mp, order)?.value,
        Criterion::Hosps => witnesses::hosps(mp, order)?.value,
        Criterion::Hos => witnesses::hos(mp, order)?.value,
        Criterion::AgarwalTara => witnesses::agarwal_tara(mp)?.value,
        Criterion::Klyshko => witnesses::klyshko(mp, order)?.value,
        Criterion::Husimi => unreachable!("husimi is not moment based"),
    })
}

fn validate_point(spec: &StateSpec, perturbation: Option<Perturbation>) -> Result<Vec<CheckSummary>> {
    let closed_inner = ClosedForm::new(spec)?;
    let closed = Perturbed {
        inner: &closed_inner,
        perturbation,
    };
    let oracle = OracleState::from_spec(spec, MAX_ORDER)?;
    let label = describe(spec);

    let mut moments = CheckSummary::new("moments", MOMENT_TOLERANCE);
    for m in 0..=6 {
        for n in 0..=6 {
            let (c, o) = (closed.moment(m, n)?, oracle.moment(m, n)?);
            moments.record(relative_c(o, c), || format!("{label} m={m} n={n}"));
        }
    }

    let mut norm = CheckSummary::new("normalization", NORMALIZATION_TOLERANCE);
    norm.record((closed.moment(0, 0)? - 1.0).norm(), || format!("{label} backend=closed"));
    norm.record((oracle.moment(0, 0)? - 1.0).norm(), || format!("{label} backend=oracle"));

    let mut probs = CheckSummary::new("probabilities", PROBABILITY_TOLERANCE);
    let total: f64 = (0..=oracle.cutoff())
        .map(|m| closed.photon_prob(m))
        .sum::<Result<f64>>()?;
    probs.record((total - 1.0).abs(), || format!("{label} cutoff={}", oracle.cutoff()));

    // an error on either side counts as an unbounded discrepancy
    let mut wit = CheckSummary::new("witnesses", WITNESS_TOLERANCE);
    for (c, order) in WITNESS_SET {
        let err = match (evaluate(&closed, c, order), evaluate(&oracle, c, order)) {
            (Ok(a), Ok(b)) => relative(b, a),
            _ => f64::INFINITY,
        };
        wit.record(err, || format!("{label} criterion={c} order={order}"));
    }

    let mut ident = CheckSummary::new("identities", IDENTITY_TOLERANCE);
    let values = (|| -> Result<[f64; 4]> {
        Ok([
            witnesses::hosps(&closed, 2)?.value,
            witnesses::hoa(&closed, 2)?.value,
            closed.moment(1, 1)?.re,
            witnesses::mandel_q(&closed, 2)?.value,
        ])
    })();
    let [hosps, hoa, mean, q] = values.unwrap_or([f64::INFINITY; 4]);
    ident.record((hosps - hoa).abs(), || format!("{label} hosps2-hoa2"));
    ident.record((hoa - mean * q).abs(), || format!("{label} hoa2-mean*q2"));

    Ok(vec![moments, norm, probs, wit, ident])
}

/// Runs every check on the standard grid.
pub fn validate(perturbation: Option<Perturbation>) -> Result<ValidationReport> {
    let per_point = standard_grid()
        .par_iter()
        .map(|spec| validate_point(spec, perturbation))
        .collect::<Result<Vec<_>>>()?;
    let mut checks: Vec<CheckSummary> = Vec::new();
    for point in per_point {
        if checks.is_empty() {
            checks = point;
        } else {
            for (acc, c) in checks.iter_mut().zip(point) {
                acc.merge(c);
            }
        }
    }
    Ok(ValidationReport { checks })
}
