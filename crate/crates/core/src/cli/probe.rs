use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use super::{CliError, CliResult, Output};
use crate::analyticity::{
    analyticity_fit, monodromy_convergence, solve_family, FamilyConfig, FamilyMode, FamilyTable, FitReport,
    MonodromyConvergence, DEFAULT_PROBES,
};
use crate::io::{fmt_f64, Axis, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeMode {
    #[value(name = "closed_form", alias = "closed-form")]
    ClosedForm,
    #[value(name = "radial_solver", alias = "radial-solver")]
    RadialSolver,
    /// Control fixture `|θ - 0.4|`, which must fail certification.
    Kink,
    /// Control fixture `3θ - 1`, exact at degree 1.
    Linear,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1.0)]
    s_min: f64,
    #[arg(long, default_value_t = 8.0)]
    s_max: f64,
    #[arg(long, default_value_t = 400)]
    nodes: usize,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

impl SolverArgs {
    fn config(&self, jobs: usize) -> FamilyConfig {
        let mut c = FamilyConfig { jobs, ..FamilyConfig::default() };
        c.grid.s_min = self.s_min;
        c.grid.s_max = self.s_max;
        c.grid.nodes = self.nodes;
        c.solver.tolerance = self.tolerance;
        c
    }
}

#[derive(Debug, Subcommand)]
pub enum ProbeCmd {
    /// Polynomial-fit certification of analytic dependence on θ.
    Analyticity {
        #[arg(long, value_enum, default_value = "closed_form")]
        mode: ProbeMode,
        /// θ-window as LO,HI.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.1, 0.7])]
        window: Vec<f64>,
        /// Equally spaced θ samples across the window, endpoints included.
        #[arg(long, default_value_t = 25)]
        samples: usize,
        /// Probe points `s₀`.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PROBES)]
        probes: Vec<f64>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Also write residual-versus-degree plots.
        #[arg(long)]
        svg: bool,
    },
    /// Distance of the u-frame monodromy to its cusp limit.
    Monodromy {
        /// Strictly decreasing cone parameters in (0, 1).
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625])]
        thetas: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long)]
        svg: bool,
    },
    /// Probe table of the family `θ ↦ w_θ(s₀)`.
    Family {
        /// Strictly increasing cone parameters in [0, 1).
        #[arg(long, value_delimiter = ',', required = true)]
        thetas: Vec<f64>,
        #[arg(long, value_enum, default_value = "closed_form")]
        mode: ProbeMode,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PROBES)]
        probes: Vec<f64>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

fn family_mode(mode: ProbeMode) -> CliResult<FamilyMode> {
    match mode {
        ProbeMode::ClosedForm => Ok(FamilyMode::ClosedForm),
        ProbeMode::RadialSolver => Ok(FamilyMode::RadialSolver),
        _ => Err(CliError::Validation("control fixtures are only available for `probe analyticity`".into())),
    }
}

fn table(mode: ProbeMode, thetas: &[f64], probes: &[f64], solver: &SolverArgs, jobs: usize) -> CliResult<FamilyTable> {
    let t = match mode {
        ProbeMode::Kink => FamilyTable::synthetic(thetas, |t| (t - 0.4).abs())?,
        ProbeMode::Linear => FamilyTable::synthetic(thetas, |t| 3.0 * t - 1.0)?,
        m => solve_family(thetas, family_mode(m)?, probes, &solver.config(jobs))?,
    };
    Ok(t)
}

#[derive(Serialize)]
struct AnalyticityDoc {
    mode: FamilyMode,
    certification: &'static str,
    reports: Vec<FitReport>,
}

#[derive(Serialize)]
struct FamilyDoc<'a> {
    table: &'a FamilyTable,
}

pub fn run(cmd: &ProbeCmd, jobs: usize, out: &mut Output) -> CliResult<()> {
    match cmd {
        ProbeCmd::Analyticity { mode, window, samples, probes, solver, svg } => {
            let (lo, hi) = (window[0], window[1]);
            if !(lo < hi) || *samples < 2 {
                return Err(CliError::Validation("need LO < HI and at least 2 samples".into()));
            }
            let thetas: Vec<f64> = (0..*samples).map(|k| lo + (hi - lo) * k as f64 / (*samples - 1) as f64).collect();
            let t = table(*mode, &thetas, probes, solver, jobs)?;
            let reports =
                (0..t.probes.len()).map(|p| analyticity_fit(&t, p, (lo, hi))).collect::<crate::Result<Vec<_>>>()?;
            let certified = reports.iter().all(|r| r.certified);
            let mut rows = Vec::new();
            for r in &reports {
                for f in &r.fits {
                    rows.push(vec![
                        fmt_f64(r.probe),
                        f.degree.to_string(),
                        fmt_f64(f.rms_residual),
                        fmt_f64(f.max_residual),
                    ]);
                }
            }
            out.csv("analyticity", &["probe", "degree", "rms_residual", "max_residual"], &rows)?;
            if *svg {
                let series: Vec<Series> = reports
                    .iter()
                    .map(|r| Series {
                        label: format!("s0 = {}", r.probe),
                        points: r.fits.iter().map(|f| (f.degree as f64, f.rms_residual)).collect(),
                    })
                    .collect();
                out.svg(
                    "analyticity",
                    "Fit residual by degree",
                    ("degree", "rms residual"),
                    (Axis::Linear, Axis::Log),
                    &series,
                );
            }
            let doc = AnalyticityDoc { mode: t.mode, certification: if certified { "pass" } else { "fail" }, reports };
            out.json("analyticity", "probe.analyticity", &doc);
        }
        ProbeCmd::Monodromy { thetas, beta, svg } => {
            let rep: MonodromyConvergence = monodromy_convergence(thetas, *beta)?;
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        fmt_f64(r.theta),
                        fmt_f64(r.frobenius),
                        fmt_f64(r.trace_gap),
                        fmt_f64(r.eigenvalue_gap),
                        fmt_f64(r.det_gap),
                    ]
                })
                .collect();
            out.csv("monodromy", &["theta", "frobenius", "trace_gap", "eigenvalue_gap", "det_gap"], &rows)?;
            if *svg {
                let series = [Series {
                    label: "distance to cusp limit".into(),
                    points: rep.rows.iter().map(|r| (r.theta, r.frobenius)).collect(),
                }];
                out.svg(
                    "monodromy",
                    "Monodromy distance",
                    ("theta", "Frobenius distance"),
                    (Axis::Log, Axis::Log),
                    &series,
                );
            }
            out.json("monodromy", "probe.monodromy", &rep);
        }
        ProbeCmd::Family { thetas, mode, probes, solver } => {
            let t = solve_family(thetas, family_mode(*mode)?, probes, &solver.config(jobs))?;
            let mut header = vec!["theta".to_string()];
            header.extend(t.probes.iter().map(|s| format!("w_at_{s}")));
            for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                header.push(format!("m{i}{j}_re"));
                header.push(format!("m{i}{j}_im"));
            }
            let rows: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| {
                    let mut row = vec![fmt_f64(r.theta)];
                    row.extend(r.values.iter().map(|v| fmt_f64(*v)));
                    for z in &r.monodromy_u {
                        row.push(fmt_f64(z.re));
                        row.push(fmt_f64(z.im));
                    }
                    row
                })
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            out.csv("family", &header, &rows)?;
            out.json("family", "probe.family", &FamilyDoc { table: &t });
        }
    }
    Ok(())
}
