//! Parameter sweeps over γ, evaluated in parallel and emitted in grid order.

use rayon::prelude::*;

use super::csv_table::{Cell, CsvTable};
use crate::error::{Error, Result};
use crate::states::{DetectorSpec, Family, StateSpec, SupParams};
use crate::witnesses::Criterion;
use crate::{required_order, Backend, Evaluator};

/// `count` evenly spaced points from `start` to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Linspace {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Linspace {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidArgument(format!("sweep needs at least 2 points, got {count}")));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidArgument("sweep range must be finite".into()));
        }
        Ok(Linspace { start, stop, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepJob {
    pub family: Family,
    pub sup: SupParams,
    pub gamma: Linspace,
    pub phase: f64,
    pub detector: DetectorSpec,
    pub witnesses: Vec<(Criterion, usize)>,
    pub backends: Vec<Backend>,
}

impl SweepJob {
    pub fn column_names(&self) -> Vec<String> {
        let mut cols = vec!["gamma".to_string()];
        for (c, order) in &self.witnesses {
            for b in &self.backends {
                cols.push(format!("{}_{}_{}", c.tag(), order, b.name()));
            }
        }
        cols
    }

    pub fn spec_at(&self, gamma: f64) -> Result<StateSpec> {
        StateSpec::from_gamma(self.family, self.sup, gamma, self.phase, self.detector)
    }
}

/// Largest provider order any of `witnesses` asks for.
pub fn max_required_order(witnesses: &[(Criterion, usize)]) -> usize {
    witnesses
        .iter()
        .map(|&(c, o)| required_order(c, o))
        .max()
        .unwrap_or(0)
}

/// Errors that mean "no value at this point" rather than a failure.
pub fn is_undefined(err: &Error) -> bool {
    err.exit_code() == 3
}

/// `Ok(None)` for degenerate states and undefined witnesses.
pub fn witness_value(ev: &Evaluator, criterion: Criterion, order: usize) -> Result<Option<f64>> {
    match ev.evaluate(criterion, order) {
        Ok(r) => Ok(Some(r.value)),
        Err(e) if is_undefined(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Builds an evaluator, mapping a degenerate state to `None`.
pub fn evaluator(spec: &StateSpec, backend: Backend, max_order: usize) -> Result<Option<Evaluator>> {
    match Evaluator::new(spec, backend, max_order) {
        Ok(ev) => Ok(Some(ev)),
        Err(e) if is_undefined(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluates `row` at every point in parallel, keeping the input order.
pub fn parallel_rows<T, F>(points: &[T], row: F) -> Result<Vec<Vec<Cell>>>
where
    T: Sync,
    F: Fn(&T) -> Result<Vec<Cell>> + Sync + Send,
{
    points.par_iter().map(row).collect()
}

pub fn run_sweep(job: &SweepJob) -> Result<CsvTable> {
    if job.witnesses.is_empty() || job.backends.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one witness and backend".into()));
    }
    let max_order = max_required_order(&job.witnesses);
    let rows = parallel_rows(&job.gamma.points(), |&gamma| {
        let spec = job.spec_at(gamma)?;
        let evs = job
            .backends
            .iter()
            .map(|&b| evaluator(&spec, b, max_order))
            .collect::<Result<Vec<_>>>()?;
        let mut row = vec![Cell::Float(gamma)];
        for &(c, order) in &job.witnesses {
            for ev in &evs {
                let value = match ev {
                    Some(ev) => witness_value(ev, c, order)?,
                    None => None,
                };
                row.push(value.into());
            }
        }
        Ok(row)
    })?;
    let mut table = CsvTable::new(job.column_names());
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}

/// Largest `|closed - oracle|` per row over matching column pairs.
pub fn backend_discrepancy(table: &CsvTable) -> Vec<f64> {
    let header = table.header();
    let pairs: Vec<(usize, usize)> = header
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            let stem = h.strip_suffix("_closed")?;
            let j = header.iter().position(|o| *o == format!("{stem}_oracle"))?;
            Some((i, j))
        })
        .collect();
    table
        .rows()
        .iter()
        .map(|row| {
            pairs
                .iter()
                .filter_map(|&(i, j)| Some((row[i].as_f64()? - row[j].as_f64()?).abs()))
                .fold(0.0, f64::max)
        })
        .collect()
}
