use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde::Serialize;

use super::{CliError, CliResult, Output};
use crate::error::Error;
use crate::he_solver::{
    closed_form_w, curvature_convergence, solve_annulus, solve_radial_bvp, AnnulusGrid, CartesianGrid, SGrid,
    SolverConfig,
};
use crate::io::{fmt_f64, parse_key_values, KeyValues};

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Flat `key = value` file; see docs/formats.md for the keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `theta` from the config.
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum SolveCmd {
    /// Radial boundary-value problem on `[s_min, s_max]`.
    Radial(SolveArgs),
    /// Two-dimensional solve on the annulus `[s_min, s_max] × S¹`.
    Annulus(SolveArgs),
    /// Gauss curvature of the cone conformal factor under refinement.
    Curvature(SolveArgs),
}

fn load(args: &SolveArgs) -> CliResult<KeyValues> {
    match &args.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            Ok(parse_key_values(&text)?)
        }
        None => Ok(KeyValues::default()),
    }
}

fn solver_config(kv: &mut KeyValues) -> crate::Result<SolverConfig> {
    let d = SolverConfig::default();
    let c = SolverConfig {
        max_iterations: kv.take("max_iterations", d.max_iterations)?,
        tolerance: kv.take("tolerance", d.tolerance)?,
        max_halvings: kv.take("max_halvings", d.max_halvings)?,
        fd_order: kv.take("fd_order", d.fd_order)?,
    };
    c.validate()?;
    Ok(c)
}

fn theta(args: &SolveArgs, kv: &mut KeyValues, default: f64) -> crate::Result<f64> {
    let from_file = kv.take("theta", default)?;
    Ok(args.theta.unwrap_or(from_file))
}

/// Save the residual history of a failed Newton run before reporting it.
fn numerical<T>(out: &Output, result: crate::Result<T>) -> CliResult<T> {
    match result {
        Ok(v) => Ok(v),
        Err(e) => {
            if let Error::NotConverged { history, .. } = &e {
                let mut w = csv::Writer::from_writer(Vec::new());
                let write = |w: &mut csv::Writer<Vec<u8>>| -> csv::Result<()> {
                    w.write_record(["iteration", "residual"])?;
                    for (k, r) in history.iter().enumerate() {
                        w.write_record([k.to_string(), fmt_f64(*r)])?;
                    }
                    w.flush()?;
                    Ok(())
                };
                write(&mut w).map_err(|e| CliError::Validation(e.to_string()))?;
                let bytes = w.into_inner().map_err(|e| CliError::Validation(e.to_string()))?;
                out.write_now("residual_history.csv", &bytes)?;
            }
            Err(e.into())
        }
    }
}

#[derive(Serialize)]
struct RadialSummary {
    theta: f64,
    grid: SGrid,
    solver: SolverConfig,
    iterations: usize,
    history: Vec<f64>,
    sup_error: f64,
    max_residual: f64,
}

#[derive(Serialize)]
struct AnnulusSummary {
    theta: f64,
    grid: AnnulusGrid,
    solver: SolverConfig,
    iterations: usize,
    history: Vec<f64>,
    sup_error: f64,
    angular_content: f64,
    max_residual: f64,
}

#[derive(Serialize)]
struct CurvatureSummary {
    theta: f64,
    nodes: Vec<usize>,
    max_errors: Vec<f64>,
    orders: Vec<f64>,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn run(cmd: &SolveCmd, out: &mut Output) -> CliResult<()> {
    match cmd {
        SolveCmd::Radial(args) => {
            let mut kv = load(args)?;
            let theta = theta(args, &mut kv, 0.5)?;
            let grid = SGrid::new(kv.take("s_min", 1.0)?, kv.take("s_max", 8.0)?, kv.take("nodes", 400)?)?;
            let config = solver_config(&mut kv)?;
            kv.finish()?;
            let sol = numerical(out, solve_radial_bvp(theta, &grid, &config))?;
            let s = sol.s();
            let n = s.len();
            // The residual is only defined on interior nodes.
            let rows: Vec<Vec<String>> = s
                .iter()
                .zip(&sol.w)
                .enumerate()
                .map(|(i, (s, w))| {
                    let r = if i == 0 || i + 1 == n { 0.0 } else { sol.residual[i - 1] };
                    vec![fmt_f64(*s), fmt_f64(*w), fmt_f64(closed_form_w(theta, *s)), fmt_f64(r)]
                })
                .collect();
            out.csv("radial", &["s", "w", "oracle", "residual"], &rows)?;
            let summary = RadialSummary {
                theta,
                grid,
                solver: config,
                iterations: sol.iterations,
                max_residual: sup(&sol.residual),
                history: sol.history,
                sup_error: sol.sup_error,
            };
            out.json("summary", "solve.radial", &summary);
        }
        SolveCmd::Annulus(args) => {
            let mut kv = load(args)?;
            let theta = theta(args, &mut kv, 0.5)?;
            let grid = AnnulusGrid::new(
                kv.take("s_min", 1.0)?,
                kv.take("s_max", 4.0)?,
                kv.take("n_s", 64)?,
                kv.take("n_angle", 64)?,
            )?;
            let config = solver_config(&mut kv)?;
            kv.finish()?;
            let sol = numerical(out, solve_annulus(theta, &grid, &config))?;
            let mut rows = Vec::with_capacity(sol.w.len());
            for i in 0..grid.n_s {
                for j in 0..grid.n_angle {
                    let r = if i == 0 || i + 1 == grid.n_s { 0.0 } else { sol.residual[(i - 1) * grid.n_angle + j] };
                    rows.push(vec![
                        fmt_f64(grid.s(i)),
                        fmt_f64(grid.angle(j)),
                        fmt_f64(sol.w[i * grid.n_angle + j]),
                        fmt_f64(r),
                    ]);
                }
            }
            out.csv("annulus", &["s", "angle", "w", "residual"], &rows)?;
            let summary = AnnulusSummary {
                theta,
                grid,
                solver: config,
                iterations: sol.iterations,
                max_residual: sup(&sol.residual),
                history: sol.history,
                sup_error: sol.sup_error,
                angular_content: sol.angular_content,
            };
            out.json("summary", "solve.annulus", &summary);
        }
        SolveCmd::Curvature(args) => {
            let mut kv = load(args)?;
            let theta = theta(args, &mut kv, 0.5)?;
            let base = CartesianGrid::new(
                kv.take("x_min", 0.2)?,
                kv.take("x_max", 0.5)?,
                kv.take("y_min", 0.2)?,
                kv.take("y_max", 0.5)?,
                kv.take("n", 9)?,
            )?;
            let levels: usize = kv.take("levels", 4)?;
            kv.finish()?;
            if levels == 0 {
                return Err(CliError::Validation("levels must be at least 1".into()));
            }
            let study = curvature_convergence(theta, &base, levels)?;
            let rows: Vec<Vec<String>> =
                study.nodes.iter().zip(&study.max_errors).map(|(n, e)| vec![n.to_string(), fmt_f64(*e)]).collect();
            out.csv("curvature", &["nodes", "max_abs_k_plus_1"], &rows)?;
            let summary =
                CurvatureSummary { theta, nodes: study.nodes, max_errors: study.max_errors, orders: study.orders };
            out.json("summary", "solve.curvature", &summary);
        }
    }
    Ok(())
}
