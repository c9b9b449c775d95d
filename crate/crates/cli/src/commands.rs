use rayon::prelude::*;
use surface_modes_core::eigenmodes::make_pair;
use surface_modes_core::eigensolver::{eigen_bracket, find_eigenvalue, scan};
use surface_modes_core::localization::{localization_report, radial_profile};
use surface_modes_core::verify::{self, check_interlacing, check_lemma1, check_sign_change, standard_checks};
use surface_modes_core::{BoundCheck, Dimension, EigenCase, Error, ModeIndex, Normalization};

use crate::config::RunConfig;
use crate::output::{Cell, Table};
use crate::CliError;

/// Interlacing rows in `cmd_verify` cover `s ≤ INTERLACING_S_MAX`.
pub const INTERLACING_S_MAX: u32 = 5;

/// A rendered table plus the failures that decide the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: Table,
    pub failures: Vec<String>,
}

fn core_error(e: Error) -> CliError {
    match e {
        Error::Domain { .. } | Error::DegenerateContrast => CliError::Config(e.to_string()),
        other => CliError::Failure(other.to_string()),
    }
}

pub fn cmd_eigenvalues(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let n = config.single_n()?;
    let medium = config.medium(n)?;
    let result = scan(&medium, config.s0, config.m_min..=config.m_max, &config.solver_options()).map_err(core_error)?;
    let dual = n < 1.0;
    let mut columns = vec![
        "m",
        "s0",
        "n",
        "dim",
        "bracket_lo",
        "bracket_hi",
        "k",
        "residual",
        "sign_change_found",
        "probe_root_count",
    ];
    if dual {
        columns.push("dual_of");
    }
    let mut table = Table::new(columns);
    let mut failures = Vec::new();
    let dim = u32::from(config.dim.as_u8());
    for entry in &result.entries {
        let m = entry.m;
        let mut row = vec![Cell::from(m), Cell::from(config.s0), Cell::from(n), Cell::from(dim)];
        match &entry.outcome {
            Ok(e) => {
                row.extend([
                    Cell::from(e.bracket.lo),
                    Cell::from(e.bracket.hi),
                    Cell::from(e.k),
                    Cell::from(e.residual),
                    Cell::from(true),
                    Cell::from(e.probe_root_count),
                ]);
                if dual {
                    row.push(Cell::from(e.dual_of));
                }
            }
            Err(Error::NoSignChange { .. }) => {
                let bracket = eigen_bracket(&medium, ModeIndex { m, s0: config.s0 }).map_err(core_error)?;
                row.extend([
                    Cell::from(bracket.lo),
                    Cell::from(bracket.hi),
                    Cell::Missing,
                    Cell::Missing,
                    Cell::from(false),
                    Cell::Missing,
                ]);
                if dual {
                    row.push(Cell::Missing);
                }
            }
            Err(err) => {
                failures.push(format!("m = {m}: {err}"));
                row.extend(std::iter::repeat_n(Cell::Missing, table.columns.len() - 4));
            }
        }
        table.push(row);
    }
    Ok(CommandOutput { table, failures })
}

pub fn cmd_localize(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let n = config.single_n()?;
    let medium = config.medium(n)?;
    let solver = config.solver_options();
    let quad = config.quad_options();
    let per_m: Vec<Result<Vec<Vec<Cell>>, String>> = (config.m_min..=config.m_max)
        .into_par_iter()
        .map(|m| {
            let fail = |e: Error| format!("m = {m}: {e}");
            let eigen = match find_eigenvalue(&medium, ModeIndex { m, s0: config.s0 }, &solver) {
                Ok(e) => e,
                Err(Error::NoSignChange { .. }) => return Ok(Vec::new()),
                Err(e) => return Err(fail(e)),
            };
            let pair = make_pair(&eigen, Normalization::default_for(config.dim)).map_err(fail)?;
            let case = if n > 1.0 { Some(EigenCase::from_pair(pair).map_err(fail)?) } else { None };
            let in_regime = match &case {
                Some(c) => c.in_regime,
                None => verify::in_regime(1.0 / n, config.s0, m, config.dim).map_err(fail)?,
            };
            let mut rows = Vec::new();
            for &tau in &config.tau {
                let report = localization_report(&pair, tau, &quad).map_err(fail)?;
                let gg1 = case.as_ref().map(|c| verify::gg1_rhs(c, tau));
                let decay = match &case {
                    Some(c) if config.dim == Dimension::Two && c.k() < f64::from(m) => {
                        Some(verify::final_decay_rhs(c, tau).map_err(fail)?)
                    }
                    _ => None,
                };
                rows.push(vec![
                    Cell::from(m),
                    Cell::from(eigen.k),
                    Cell::from(tau),
                    Cell::from(report.ratio_v),
                    Cell::from(report.ratio_w),
                    Cell::from(report.log10_ratio_v),
                    Cell::from(report.log10_ratio_w),
                    Cell::from(gg1),
                    Cell::from(decay),
                    Cell::from(in_regime),
                ]);
            }
            Ok(rows)
        })
        .collect();
    let mut table = Table::new(vec![
        "m",
        "k",
        "tau",
        "ratio_v",
        "ratio_w",
        "log10_ratio_v",
        "log10_ratio_w",
        "bound_gg1_rhs",
        "final_decay_rhs",
        "in_regime",
    ]);
    let mut failures = Vec::new();
    for rows in per_m {
        match rows {
            Ok(rows) => rows.into_iter().for_each(|r| table.push(r)),
            Err(msg) => failures.push(msg),
        }
    }
    Ok(CommandOutput { table, failures })
}

fn verify_point(config: &RunConfig, n: f64, m: u32) -> Result<Vec<BoundCheck>, String> {
    let fail = |e: Error| format!("n = {n}, m = {m}: {e}");
    let medium = config.medium(n).map_err(|e| e.to_string())?;
    match EigenCase::solve(&medium, ModeIndex { m, s0: config.s0 }, &config.solver_options()) {
        Ok(case) => standard_checks(&case, &config.tau, &config.quad_options()).map_err(fail),
        Err(Error::NoSignChange { .. }) => {
            let mut checks = Vec::new();
            if config.dim == Dimension::Two {
                checks.push(check_lemma1(n, config.s0, m).map_err(fail)?);
            }
            checks.push(check_sign_change(n, config.s0, m, config.dim).map_err(fail)?);
            Ok(checks)
        }
        Err(e) => Err(fail(e)),
    }
}

pub fn cmd_verify(config: &RunConfig) -> Result<CommandOutput, CliError> {
    if let Some(n) = config.n.iter().find(|n| **n <= 1.0) {
        return Err(CliError::Config(format!("verify needs every contrast above 1, got {n}")));
    }
    let mut checks = if config.dim == Dimension::Two {
        check_interlacing(config.m_max, INTERLACING_S_MAX).map_err(core_error)?
    } else {
        Vec::new()
    };
    let grid: Vec<(f64, u32)> =
        config.n.iter().flat_map(|&n| (config.m_min..=config.m_max).map(move |m| (n, m))).collect();
    let results: Vec<Result<Vec<BoundCheck>, String>> =
        grid.par_iter().map(|&(n, m)| verify_point(config, n, m)).collect();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(c) => checks.extend(c),
            Err(msg) => failures.push(msg),
        }
    }
    let mut table = Table::new(vec![
        "check_name",
        "n",
        "dim",
        "m",
        "s0",
        "s",
        "tau",
        "k",
        "x",
        "lhs",
        "rhs",
        "margin",
        "passed",
        "in_regime",
    ]);
    for c in &checks {
        let i = &c.inputs;
        table.push(vec![
            Cell::Text(c.name.clone()),
            Cell::from(i.n),
            Cell::from(i.dim.map(u32::from)),
            Cell::from(i.m),
            Cell::from(i.s0),
            Cell::from(i.s),
            Cell::from(i.tau),
            Cell::from(i.k),
            Cell::from(i.x),
            Cell::from(c.lhs),
            Cell::from(c.rhs),
            Cell::from(c.margin),
            Cell::from(c.passed),
            Cell::from(c.in_regime),
        ]);
        if c.in_regime && !c.passed {
            failures.push(format!("{} failed: {:?} lhs = {:e}, rhs = {:e}", c.name, c.inputs, c.lhs, c.rhs));
        }
    }
    Ok(CommandOutput { table, failures })
}

pub fn cmd_profile(config: &RunConfig, samples: usize) -> Result<CommandOutput, CliError> {
    let n = config.single_n()?;
    if config.m_min != config.m_max {
        return Err(CliError::Config(format!("profile needs a single m, got {}:{}", config.m_min, config.m_max)));
    }
    if samples < 2 {
        return Err(CliError::Config(format!("--samples must be at least 2, got {samples}")));
    }
    let m = config.m_min;
    let medium = config.medium(n)?;
    let fail = |e: Error| CliError::Failure(format!("m = {m}: {e}"));
    let eigen = find_eigenvalue(&medium, ModeIndex { m, s0: config.s0 }, &config.solver_options()).map_err(fail)?;
    let pair = make_pair(&eigen, Normalization::default_for(config.dim)).map_err(fail)?;
    let rows = radial_profile(&pair, samples).map_err(fail)?;
    let mut table = Table::new(vec!["r", "abs_w_normalized", "abs_v_normalized"]);
    table.header = vec![
        ("k", Cell::from(eigen.k)),
        ("n", Cell::from(n)),
        ("m", Cell::from(m)),
        ("s0", Cell::from(config.s0)),
        ("dim", Cell::from(u32::from(config.dim.as_u8()))),
    ];
    for row in rows {
        table.push(vec![Cell::from(row.r), Cell::from(row.abs_w), Cell::from(row.abs_v)]);
    }
    Ok(CommandOutput { table, failures: Vec::new() })
}
