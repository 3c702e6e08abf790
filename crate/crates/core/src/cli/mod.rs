//! Command-line front end. All output is CSV on stdout or in files;
//! diagnostics go to stderr and never carry color codes.

pub mod csv_table;
pub mod presets;
pub mod sweep;
pub mod validate;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::oracle::OracleState;
use crate::states::{DetectorSpec, Family, StateSpec, SupParams};
use crate::witnesses::{Criterion, Note};
use crate::{required_order, Backend, Evaluator};
use csv_table::{Cell, CsvTable};
use sweep::{Linspace, SweepJob};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "nonclassical", version, about = "Nonclassicality witnesses for SUP-operated coherent and thermal states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one criterion at one state, one row per order.
    Witness(WitnessArgs),
    /// Sweep γ (|α| or n̄) and write one column per criterion, order and backend.
    Sweep(SweepArgs),
    /// Write the CSV panels of a figure preset, or the η discrepancy report.
    Preset(PresetArgs),
    /// Compare the closed forms against the Fock-space oracle on the standard grid.
    Validate(ValidateArgs),
    /// Print the truncated Fock representation of a state.
    Dump(DumpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Socs,
    Sots,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Socs => Family::Socs,
            FamilyArg::Sots => Family::Sots,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Closed,
    Oracle,
    Both,
}

impl BackendArg {
    fn backends(self) -> Vec<Backend> {
        match self {
            BackendArg::Closed => vec![Backend::Closed],
            BackendArg::Oracle => vec![Backend::Oracle],
            BackendArg::Both => vec![Backend::Closed, Backend::Oracle],
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    #[arg(long = "state", value_enum)]
    pub family: FamilyArg,
    /// SUP weight of a a†.
    #[arg(long, allow_hyphen_values = true)]
    pub s: f64,
    /// SUP weight of a† a; defaults to +sqrt(1 - s^2).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Phase of α (coherent input only).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phase: f64,
    /// Detector inefficiency η in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
}

impl StateArgs {
    fn sup(&self) -> Result<SupParams> {
        match self.t {
            Some(t) => SupParams::new(self.s, t),
            None => SupParams::with_positive_t(self.s),
        }
    }

    fn spec(&self, gamma: f64) -> Result<StateSpec> {
        StateSpec::from_gamma(
            self.family.into(),
            self.sup()?,
            gamma,
            self.phase,
            DetectorSpec::new(self.eta)?,
        )
    }
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// |α| for socs, n̄ for sots.
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub criterion: String,
    /// Single order, comma list, or inclusive range such as 0..6.
    #[arg(long, default_value = "2")]
    pub order: String,
    #[arg(long, value_enum, default_value_t = BackendArg::Closed)]
    pub backend: BackendArg,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 0.0)]
    pub gamma_start: f64,
    #[arg(long, default_value_t = 4.0)]
    pub gamma_stop: f64,
    #[arg(long, default_value_t = 81)]
    pub count: usize,
    /// Comma-separated criteria.
    #[arg(long)]
    pub criterion: String,
    #[arg(long, default_value = "2")]
    pub order: String,
    #[arg(long, value_enum, default_value_t = BackendArg::Closed)]
    pub backend: BackendArg,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PresetArgs {
    /// fig1..fig13, eta-q, eta-hoa, eta-hosps, eta-hos, eta-husimi, eta-a3,
    /// eta-klyshko or eta-report.
    pub name: String,
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long, hide = true)]
    pub inject_perturbation: bool,
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub gamma: f64,
    /// Moment order the cutoff is sized for.
    #[arg(long, default_value_t = 8)]
    pub max_order: usize,
}

/// Parses `"4"`, `"2,5,7"`, `"0..6"` or `"0..=6"`; ranges are inclusive.
pub fn parse_orders(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("cannot parse order list {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

pub fn parse_criteria(text: &str) -> Result<Vec<Criterion>> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect()
}

/// Orders actually evaluated for `criterion`; order-free criteria collapse to one.
fn effective_orders(criterion: Criterion, orders: &[usize]) -> Vec<usize> {
    match criterion {
        Criterion::AgarwalTara => vec![3],
        Criterion::Husimi => vec![0],
        _ => orders.to_vec(),
    }
}

pub fn cmd_witness(args: &WitnessArgs) -> Result<CsvTable> {
    let criterion: Criterion = args.criterion.parse()?;
    let orders = effective_orders(criterion, &parse_orders(&args.order)?);
    let spec = args.state.spec(args.gamma)?;
    let max_order = orders.iter().map(|&o| required_order(criterion, o)).max().unwrap_or(0);
    let mut table = CsvTable::new(["criterion", "order", "value", "nonclassical", "backend"]);
    for backend in args.backend.backends() {
        let ev = Evaluator::new(&spec, backend, max_order)?;
        for &order in &orders {
            let r = ev.evaluate(criterion, order)?;
            let verdict = match r.note {
                Some(Note::Singular) => Cell::Empty,
                _ => Cell::Bool(r.nonclassical),
            };
            table.push(vec![
                criterion.tag().into(),
                r.order.into(),
                r.value.into(),
                verdict,
                backend.name().into(),
            ])?;
        }
    }
    Ok(table)
}

pub fn sweep_job(args: &SweepArgs) -> Result<SweepJob> {
    let criteria = parse_criteria(&args.criterion)?;
    let orders = parse_orders(&args.order)?;
    let mut witnesses = Vec::new();
    for c in criteria {
        for o in effective_orders(c, &orders) {
            witnesses.push((c, o));
        }
    }
    Ok(SweepJob {
        family: args.state.family.into(),
        sup: args.state.sup()?,
        gamma: Linspace::new(args.gamma_start, args.gamma_stop, args.count)?,
        phase: args.state.phase,
        detector: DetectorSpec::new(args.state.eta)?,
        witnesses,
        backends: args.backend.backends(),
    })
}

fn report(err: &Error, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {err}");
    err.exit_code()
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => report(&e, stderr),
    }
}

fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Witness(args) => {
            cmd_witness(args)?.write(stdout)?;
        }
        Command::Sweep(args) => {
            let table = sweep::run_sweep(&sweep_job(args)?)?;
            match &args.output {
                Some(path) => table.write(fs::File::create(path)?)?,
                None => table.write(&mut *stdout)?,
            }
            let undefined = table.empty_cells();
            if undefined > 0 {
                writeln!(stderr, "note: {undefined} undefined cell(s) left empty")?;
            }
        }
        Command::Preset(args) => {
            for path in presets::run_preset(&args.name, &args.output)? {
                writeln!(stdout, "{}", path.display())?;
            }
        }
        Command::Validate(args) => {
            let perturbation = args
                .inject_perturbation
                .then_some(validate::Perturbation::FlipMeanSign);
            let rep = validate::validate(perturbation)?;
            write!(stdout, "{rep}")?;
            if !rep.passed() {
                return Ok(EXIT_VALIDATION);
            }
        }
        Command::Dump(args) => {
            let spec = args.state.spec(args.gamma)?;
            OracleState::from_spec(&spec, args.max_order)?.dump(&mut *stdout)?;
        }
    }
    Ok(EXIT_OK)
}
