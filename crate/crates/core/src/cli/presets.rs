//! Figure presets. Each one fixes the parameters named in a figure caption and
//! writes one CSV per sub-panel; nothing here asserts curve values.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::csv_table::{Cell, CsvTable};
use super::sweep::{evaluator, parallel_rows, witness_value, Linspace};
use crate::error::{Error, Result};
use crate::states::{self, printed, CoherentSpec, DetectorSpec, Family, StateSpec, SupParams, ThermalSpec};
use crate::witnesses::Criterion;
use crate::{required_order, Backend};

pub const PRESET_NAMES: [&str; 21] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
    "fig12", "fig13", "eta-q", "eta-hoa", "eta-hosps", "eta-hos", "eta-husimi", "eta-a3",
    "eta-klyshko", "eta-report",
];

const FAMILIES: [Family; 2] = [Family::Socs, Family::Sots];

#[derive(Clone, Copy, Debug)]
enum Axis {
    /// γ varies at fixed `s`.
    Gamma { range: (f64, f64, usize), s: f64 },
    /// `s` varies at fixed γ.
    S { range: (f64, f64, usize), gamma: f64 },
}

#[derive(Clone, Debug)]
enum Panel {
    Curve {
        file: String,
        axis: Axis,
        criterion: Criterion,
        order: usize,
        eta: f64,
    },
    HusimiPlane {
        file: String,
        gamma: f64,
        s: f64,
        eta: f64,
    },
    KlyshkoSeries {
        file: String,
        gamma: f64,
        s: f64,
        eta: f64,
    },
    AllCriteria {
        file: String,
        family: Family,
        s: f64,
        order: usize,
        klyshko_m: usize,
    },
}

const GAMMA_RANGE: (f64, f64, usize) = (0.0, 4.0, 81);
const GAMMA_RANGE_SHORT: (f64, f64, usize) = (0.0, 2.0, 41);
const S_RANGE: (f64, f64, usize) = (0.0, 1.0, 101);
const LETTERS: &str = "abcdefghi";

fn letter(i: usize) -> char {
    LETTERS.as_bytes()[i] as char
}

/// Nine panels: `s ∈ {0.2, 0.5, 0.8}` by three orders.
fn gamma_grid(fig: &str, criterion: Criterion, orders: [usize; 3], range: (f64, f64, usize)) -> Vec<Panel> {
    let mut out = Vec::new();
    for (i, s) in [0.2, 0.5, 0.8].into_iter().enumerate() {
        for (j, order) in orders.into_iter().enumerate() {
            out.push(Panel::Curve {
                file: format!("{fig}{}.csv", letter(3 * i + j)),
                axis: Axis::Gamma { range, s },
                criterion,
                order,
                eta: 0.0,
            });
        }
    }
    out
}

fn s_panels(fig: &str, criterion: Criterion, cases: &[(f64, usize)]) -> Vec<Panel> {
    cases
        .iter()
        .enumerate()
        .map(|(i, &(gamma, order))| Panel::Curve {
            file: format!("{fig}{}.csv", letter(i)),
            axis: Axis::S { range: S_RANGE, gamma },
            criterion,
            order,
            eta: 0.0,
        })
        .collect()
}

fn eta_curves(fig: &str, criterion: Criterion, cases: &[(usize, f64)]) -> Vec<Panel> {
    cases
        .iter()
        .enumerate()
        .map(|(i, &(order, eta))| Panel::Curve {
            file: format!("{fig}{}.csv", letter(i)),
            axis: Axis::Gamma { range: GAMMA_RANGE, s: 0.2 },
            criterion,
            order,
            eta,
        })
        .collect()
}

fn panels(name: &str) -> Result<Vec<Panel>> {
    use Criterion::*;
    Ok(match name {
        "fig1" => gamma_grid("fig1", MandelQ, [2, 5, 7], GAMMA_RANGE),
        "fig2" => s_panels("fig2", MandelQ, &[(3.0, 2), (3.37, 5), (3.69, 7)]),
        "fig3" => gamma_grid("fig3", Hoa, [2, 3, 4], GAMMA_RANGE),
        "fig4" => s_panels("fig4", Hoa, &[(0.1, 2), (0.2, 3), (0.3, 4)]),
        "fig5" => gamma_grid("fig5", Hosps, [2, 3, 4], GAMMA_RANGE),
        "fig6" => s_panels("fig6", Hosps, &[(0.2, 2), (0.2, 3), (0.2, 4)]),
        "fig7" => gamma_grid("fig7", Hos, [2, 4, 6], GAMMA_RANGE_SHORT),
        "fig8" => s_panels("fig8", Hos, &[(0.01, 2), (0.01, 4), (0.01, 6)]),
        "fig9" => husimi_planes("fig9", &[(1.0, 0.2, 0.0), (0.1, 0.5, 0.0), (0.01, 0.8, 0.0)]),
        "fig10" => [0.01, 0.1, 0.2]
            .into_iter()
            .enumerate()
            .map(|(i, s)| Panel::Curve {
                file: format!("fig10{}.csv", letter(i)),
                axis: Axis::Gamma { range: GAMMA_RANGE, s },
                criterion: AgarwalTara,
                order: 3,
                eta: 0.0,
            })
            .collect(),
        "fig11" => s_panels("fig11", AgarwalTara, &[(0.1, 3), (0.5, 3), (0.7, 3)]),
        "fig12" => klyshko_series("fig12", &[(2.0, 0.2, 0.0), (1.5, 0.5, 0.0), (1.0, 0.8, 0.0)]),
        "fig13" => FAMILIES
            .into_iter()
            .map(|family| Panel::AllCriteria {
                file: format!("fig13_{}.csv", family.name()),
                family,
                s: 0.5,
                order: 4,
                klyshko_m: 4,
            })
            .collect(),
        "eta-q" => eta_curves("eta-q", MandelQ, &[(2, 0.25), (5, 0.5), (7, 0.75)]),
        "eta-hoa" => eta_curves("eta-hoa", Hoa, &[(2, 0.75), (3, 0.5), (4, 0.25)]),
        "eta-hosps" => eta_curves("eta-hosps", Hosps, &[(2, 0.3), (3, 0.6), (4, 0.9)]),
        "eta-hos" => eta_curves("eta-hos", Hos, &[(2, 0.4), (4, 0.6), (6, 0.8)]),
        "eta-husimi" => husimi_planes("eta-husimi", &[(1.0, 0.2, 0.1), (0.1, 0.5, 0.4), (0.01, 0.8, 0.7)]),
        "eta-a3" => [(0.01, 0.8), (0.1, 0.5), (0.2, 0.2)]
            .into_iter()
            .enumerate()
            .map(|(i, (s, eta))| Panel::Curve {
                file: format!("eta-a3{}.csv", letter(i)),
                axis: Axis::Gamma { range: GAMMA_RANGE, s },
                criterion: AgarwalTara,
                order: 3,
                eta,
            })
            .collect(),
        "eta-klyshko" => klyshko_series("eta-klyshko", &[(2.0, 0.2, 0.4), (1.5, 0.5, 0.6), (1.0, 0.8, 0.8)]),
        other => return Err(Error::InvalidArgument(format!("unknown preset {other:?}"))),
    })
}

fn husimi_planes(fig: &str, cases: &[(f64, f64, f64)]) -> Vec<Panel> {
    cases
        .iter()
        .enumerate()
        .map(|(i, &(gamma, s, eta))| Panel::HusimiPlane {
            file: format!("{fig}{}.csv", letter(i)),
            gamma,
            s,
            eta,
        })
        .collect()
}

fn klyshko_series(fig: &str, cases: &[(f64, f64, f64)]) -> Vec<Panel> {
    cases
        .iter()
        .enumerate()
        .map(|(i, &(gamma, s, eta))| Panel::KlyshkoSeries {
            file: format!("{fig}{}.csv", letter(i)),
            gamma,
            s,
            eta,
        })
        .collect()
}

fn spec(family: Family, s: f64, gamma: f64, eta: f64) -> Result<StateSpec> {
    StateSpec::from_gamma(
        family,
        SupParams::with_positive_t(s)?,
        gamma,
        0.0,
        DetectorSpec::new(eta)?,
    )
}

fn value_at(spec: &StateSpec, criterion: Criterion, order: usize) -> Result<Cell> {
    let Some(ev) = evaluator(spec, Backend::Closed, required_order(criterion, order))? else {
        return Ok(Cell::Empty);
    };
    Ok(witness_value(&ev, criterion, order)?.into())
}

fn render(panel: &Panel) -> Result<(String, CsvTable)> {
    match panel {
        Panel::Curve {
            file,
            axis,
            criterion,
            order,
            eta,
        } => {
            let (axis_name, (a, b, n)) = match axis {
                Axis::Gamma { range, .. } => ("gamma", *range),
                Axis::S { range, .. } => ("s", *range),
            };
            let cols = FAMILIES.map(|f| format!("{}_{}_{}", f.name(), criterion.tag(), order));
            let mut table = CsvTable::new([axis_name.to_string(), cols[0].clone(), cols[1].clone()]);
            let rows = parallel_rows(&Linspace::new(a, b, n)?.points(), |&x| {
                let (s, gamma) = match axis {
                    Axis::Gamma { s, .. } => (*s, x),
                    Axis::S { gamma, .. } => (x, *gamma),
                };
                let mut row = vec![Cell::Float(x)];
                for f in FAMILIES {
                    row.push(value_at(&spec(f, s, gamma, *eta)?, *criterion, *order)?);
                }
                Ok(row)
            })?;
            for row in rows {
                table.push(row)?;
            }
            Ok((file.clone(), table))
        }
        Panel::HusimiPlane { file, gamma, s, eta } => {
            let specs = FAMILIES
                .iter()
                .map(|&f| spec(f, *s, *gamma, *eta))
                .collect::<Result<Vec<_>>>()?;
            let axis: Vec<f64> = (0..=80).map(|i| -4.0 + 0.1 * i as f64).collect();
            let points: Vec<(f64, f64)> = axis
                .iter()
                .flat_map(|&re| axis.iter().map(move |&im| (re, im)))
                .collect();
            let mut table = CsvTable::new(["re", "im", "socs_husimi", "sots_husimi"]);
            let rows = parallel_rows(&points, |&(re, im)| {
                let mut row = vec![Cell::Float(re), Cell::Float(im)];
                for sp in &specs {
                    row.push(states::husimi(sp, Complex64::new(re, im))?.into());
                }
                Ok(row)
            })?;
            for row in rows {
                table.push(row)?;
            }
            Ok((file.clone(), table))
        }
        Panel::KlyshkoSeries { file, gamma, s, eta } => {
            let mut table = CsvTable::new(["m", "socs_klyshko", "sots_klyshko"]);
            for m in 0..=10usize {
                let mut row = vec![Cell::from(m)];
                for f in FAMILIES {
                    row.push(value_at(&spec(f, *s, *gamma, *eta)?, Criterion::Klyshko, m)?);
                }
                table.push(row)?;
            }
            Ok((file.clone(), table))
        }
        Panel::AllCriteria {
            file,
            family,
            s,
            order,
            klyshko_m,
        } => {
            let columns: Vec<(Criterion, usize)> = Criterion::ALL
                .iter()
                .map(|&c| match c {
                    Criterion::Klyshko => (c, *klyshko_m),
                    Criterion::AgarwalTara => (c, 3),
                    Criterion::Husimi => (c, 0),
                    _ => (c, *order),
                })
                .collect();
            let mut header = vec!["gamma".to_string()];
            header.extend(columns.iter().map(|(c, o)| format!("{}_{}", c.tag(), o)));
            let mut table = CsvTable::new(header);
            let rows = parallel_rows(&Linspace::new(GAMMA_RANGE.0, GAMMA_RANGE.1, GAMMA_RANGE.2)?.points(), |&g| {
                let sp = spec(*family, *s, g, 0.0)?;
                let mut row = vec![Cell::Float(g)];
                for &(c, o) in &columns {
                    row.push(value_at(&sp, c, o)?);
                }
                Ok(row)
            })?;
            for row in rows {
                table.push(row)?;
            }
            Ok((file.clone(), table))
        }
    }
}

pub const ETA_REPORT_COLUMNS: [&str; 11] = [
    "family",
    "s",
    "t",
    "gamma",
    "eta",
    "m",
    "n",
    "paper_value",
    "definition_value",
    "abs_diff",
    "note",
];

/// Printed η-dependent moments next to the definition-based ones.
pub fn eta_report() -> Result<CsvTable> {
    let mut table = CsvTable::new(ETA_REPORT_COLUMNS);
    for family in FAMILIES {
        let orders: &[(usize, usize)] = match family {
            Family::Socs => &[(0, 0), (1, 1), (2, 1), (2, 2)],
            Family::Sots => &[(0, 0), (1, 1), (2, 2)],
        };
        for s in [0.2, 0.5, 0.8] {
            let sup = SupParams::with_positive_t(s)?;
            for gamma in [0.5, 1.0, 2.0] {
                for eta in [0.0, 0.25, 0.5] {
                    let det = DetectorSpec::new(eta)?;
                    let sp = StateSpec::from_gamma(family, sup, gamma, 0.0, det)?;
                    let closed = states::ClosedForm::new(&sp)?;
                    for &(m, n) in orders {
                        let definition = crate::MomentProvider::moment(&closed, m, n)?.re;
                        let printed_value = match family {
                            Family::Socs => printed::moment_socs_eta(
                                m,
                                n,
                                &sup,
                                &CoherentSpec::from_polar(gamma, 0.0)?,
                                &det,
                            )
                            .map(|z| z.re),
                            Family::Sots => {
                                printed::moment_sots_eta(n, &sup, &ThermalSpec::new(gamma)?, &det)
                            }
                        };
                        let (printed_cell, diff, note) = match printed_value {
                            Ok(p) => (
                                Cell::Float(p),
                                Cell::Float((p - definition).abs()),
                                format!("ratio {:.16e}", p / definition),
                            ),
                            Err(Error::DegenerateDenominator(_)) => (
                                Cell::Empty,
                                Cell::Empty,
                                "printed normalization vanishes".to_string(),
                            ),
                            Err(e) => return Err(e),
                        };
                        table.push(vec![
                            family.name().into(),
                            s.into(),
                            sup.t().into(),
                            gamma.into(),
                            eta.into(),
                            m.into(),
                            n.into(),
                            printed_cell,
                            definition.into(),
                            diff,
                            Cell::Text(note),
                        ])?;
                    }
                }
            }
        }
    }
    Ok(table)
}

/// Renders every panel of `name` into memory.
pub fn render_preset(name: &str) -> Result<Vec<(String, CsvTable)>> {
    if name == "eta-report" {
        return Ok(vec![("eta-report.csv".to_string(), eta_report()?)]);
    }
    panels(name)?.iter().map(render).collect()
}

/// Writes the panels of `name` under `dir`, returning the paths written.
pub fn run_preset(name: &str, dir: &Path) -> Result<Vec<PathBuf>> {
    let rendered = render_preset(name)?;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (file, table) in rendered {
        let path = dir.join(file);
        table.write(fs::File::create(&path)?)?;
        written.push(path);
    }
    Ok(written)
}
