//! Higher-order nonclassicality witnesses for SUP-operated coherent and
//! thermal states.
//!
//! The [`states`] module holds closed-form moments, [`oracle`] rebuilds the
//! same states in a truncated Fock space, and [`witnesses`] evaluates the
//! criteria against either backend through [`witnesses::MomentProvider`].

pub mod algebra;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod states;
pub mod witnesses;

use std::fmt;
use std::str::FromStr;

pub use error::{Error, Result};
pub use states::{ClosedForm, DetectorSpec, Family, StateSpec, SupParams};
pub use witnesses::{Criterion, MomentProvider, WitnessResult};

/// Which implementation answers moment queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Closed,
    Oracle,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Closed => "closed",
            Backend::Oracle => "oracle",
        }
    }

}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Backend::Closed),
            "oracle" => Ok(Backend::Oracle),
            other => Err(Error::InvalidArgument(format!("unknown backend {other:?}"))),
        }
    }
}

/// Provider order needed to evaluate `criterion` at `order`.
pub fn required_order(criterion: Criterion, order: usize) -> usize {
    match criterion {
        Criterion::AgarwalTara => 4,
        Criterion::Klyshko => order + 2,
        Criterion::Husimi => 0,
        _ => order,
    }
}

/// One state prepared for a backend, reusable across criteria.
pub struct Evaluator {
    spec: StateSpec,
    backend: Backend,
    closed: ClosedForm,
    oracle: Option<oracle::OracleState>,
}

impl Evaluator {
    /// `max_order` sizes the oracle cutoff; the closed form ignores it.
    pub fn new(spec: &StateSpec, backend: Backend, max_order: usize) -> Result<Self> {
        let closed = ClosedForm::new(spec)?;
        let oracle = match backend {
            Backend::Closed => None,
            Backend::Oracle => Some(oracle::OracleState::from_spec(spec, max_order.max(1))?),
        };
        Ok(Evaluator {
            spec: *spec,
            backend,
            closed,
            oracle,
        })
    }

    pub fn spec(&self) -> &StateSpec {
        &self.spec
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn provider(&self) -> &dyn MomentProvider {
        match &self.oracle {
            Some(o) => o,
            None => &self.closed,
        }
    }

    pub fn husimi(&self, beta: num_complex::Complex64) -> Result<f64> {
        match &self.oracle {
            Some(o) => Ok(o.husimi(beta)),
            None => states::husimi(&self.spec, beta),
        }
    }

    pub fn evaluate(&self, criterion: Criterion, order: usize) -> Result<WitnessResult> {
        let mp = self.provider();
        match criterion {
            Criterion::MandelQ => witnesses::mandel_q(mp, order),
            Criterion::Hoa => witnesses::hoa(mp, order),
            Criterion::Hosps => witnesses::hosps(mp, order),
            Criterion::Hos => witnesses::hos(mp, order),
            Criterion::AgarwalTara => witnesses::agarwal_tara(mp),
            Criterion::Klyshko => witnesses::klyshko(mp, order),
            Criterion::Husimi => {
                let radius = witnesses::husimi_radius(&self.spec);
                witnesses::husimi_witness_with(&self.spec, radius, |b| self.husimi(b))
            }
        }
    }
}
