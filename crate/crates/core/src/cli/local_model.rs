use clap::{Args, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use super::{CliError, CliResult, Output};
use crate::io::fmt_f64;
use crate::linalg::Mat2;
use crate::local_model::{
    check_flatness, eval_chern_connection, eval_cone_metric, eval_curvature, eval_higgs_adjoint, flatness_convergence,
    monodromy, section_growth_exponent, transport_monodromy, AnnularGrid, FlatnessReport, FrameBasis, LocalModelParams,
    SectionTag,
};

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Cone parameter in [0, 1); 0 is the cusp.
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

impl ModelArgs {
    fn params(&self) -> CliResult<LocalModelParams> {
        Ok(LocalModelParams::new(self.theta, self.beta)?)
    }
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    /// Single radius; overrides the range.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    r_min: f64,
    #[arg(long, default_value_t = 0.5)]
    r_max: f64,
    /// Log-spaced samples over the range.
    #[arg(long, default_value_t = 50)]
    points: usize,
}

impl RadiusArgs {
    fn radii(&self) -> CliResult<Vec<f64>> {
        if let Some(r) = self.r {
            return Ok(vec![r]);
        }
        if self.points < 2 || !(self.r_min > 0.0 && self.r_max > self.r_min) {
            return Err(CliError::Validation("need --points >= 2 and 0 < r_min < r_max".into()));
        }
        let (a, b) = (self.r_min.ln(), self.r_max.ln());
        Ok((0..self.points).map(|k| (a + (b - a) * k as f64 / (self.points - 1) as f64).exp()).collect())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisArg {
    S,
    U,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SectionArg {
    W10,
    W01,
    Zw01,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('x').ok_or_else(|| format!("expected NRxNGAMMA, got {s:?}"))?;
    let n_r = a.trim().parse().map_err(|_| format!("bad radial count {a:?}"))?;
    let n_g = b.trim().parse().map_err(|_| format!("bad angular count {b:?}"))?;
    Ok((n_r, n_g))
}

#[derive(Debug, Subcommand)]
pub enum LocalModelCmd {
    /// Metric `k_{β,θ}` at one radius or over a log-spaced range.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        radii: RadiusArgs,
    },
    /// Curvature, adjoint-Higgs coefficient and their balance.
    Curvature {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        radii: RadiusArgs,
    },
    /// Finite-difference flatness residuals of the flat frames.
    Flatness {
        #[command(flatten)]
        model: ModelArgs,
        /// Annulus nodes as NRxNGAMMA.
        #[arg(long, default_value = "64x32", value_parser = parse_grid)]
        grid: (usize, usize),
        /// Refinement levels for the order study.
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Monodromy around the puncture in the s- or u-frame.
    Monodromy {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "u")]
        basis: BasisArg,
        /// Also integrate parallel transport with this many RK4 steps.
        #[arg(long)]
        transport_steps: Option<usize>,
        #[arg(long, default_value_t = 0.3)]
        transport_r: f64,
    },
    /// Fitted small-radius growth exponent of a holomorphic section.
    Growth {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "w10")]
        section: SectionArg,
        #[arg(long, default_value_t = 1e-8)]
        r_min: f64,
        #[arg(long, default_value_t = 1e-5)]
        r_max: f64,
        #[arg(long, default_value_t = 16)]
        points: usize,
    },
}

#[derive(Serialize)]
struct EvalRow {
    r: f64,
    h11: f64,
    h22: f64,
}

#[derive(Serialize)]
struct CurvatureRow {
    r: f64,
    curvature: f64,
    adjoint: f64,
    connection: f64,
    /// `4 r² f + c`.
    balance: f64,
}

#[derive(Serialize)]
struct ModelHeader {
    theta: f64,
    beta: f64,
}

#[derive(Serialize)]
struct Rows<'a, T> {
    model: ModelHeader,
    rows: &'a [T],
}

#[derive(Serialize)]
struct FlatnessDoc<'a> {
    reports: &'a [FlatnessReport],
    orders: &'a [f64],
    min_order: f64,
}

#[derive(Serialize)]
struct GrowthDoc<'a> {
    section: SectionTag,
    radii: &'a [f64],
    #[serde(flatten)]
    fit: crate::local_model::GrowthFit,
}

#[derive(Serialize)]
struct MatrixDoc {
    basis: &'static str,
    matrix: [[Complex64; 2]; 2],
    trace: Complex64,
    det: Complex64,
    transport: Option<TransportDoc>,
}

#[derive(Serialize)]
struct TransportDoc {
    steps: usize,
    r: f64,
    matrix: [[Complex64; 2]; 2],
    frobenius_gap: f64,
}

fn rows_of(m: &Mat2) -> [[Complex64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

pub fn run(cmd: &LocalModelCmd, out: &mut Output) -> CliResult<()> {
    match cmd {
        LocalModelCmd::Eval { model, radii } => {
            let p = model.params()?;
            let rows = radii
                .radii()?
                .into_iter()
                .map(|r| eval_cone_metric(&p, r).map(|h| EvalRow { r, h11: h.a, h22: h.d }))
                .collect::<crate::Result<Vec<_>>>()?;
            let csv: Vec<Vec<String>> =
                rows.iter().map(|x| vec![fmt_f64(x.r), fmt_f64(x.h11), fmt_f64(x.h22)]).collect();
            out.csv("metric", &["r", "h11", "h22"], &csv)?;
            out.json(
                "metric",
                "local_model.eval",
                &Rows { model: ModelHeader { theta: model.theta, beta: model.beta }, rows: &rows },
            );
        }
        LocalModelCmd::Curvature { model, radii } => {
            let p = model.params()?;
            let mut rows = Vec::new();
            for r in radii.radii()? {
                let f = eval_curvature(&p, r)?;
                let c = eval_higgs_adjoint(&p, r)?;
                let a = eval_chern_connection(&p, r)?;
                rows.push(CurvatureRow { r, curvature: f, adjoint: c, connection: a, balance: 4.0 * r * r * f + c });
            }
            let csv: Vec<Vec<String>> = rows
                .iter()
                .map(|x| {
                    vec![
                        fmt_f64(x.r),
                        fmt_f64(x.curvature),
                        fmt_f64(x.adjoint),
                        fmt_f64(x.connection),
                        fmt_f64(x.balance),
                    ]
                })
                .collect();
            out.csv("curvature", &["r", "curvature", "adjoint", "connection", "balance"], &csv)?;
            out.json(
                "curvature",
                "local_model.curvature",
                &Rows { model: ModelHeader { theta: model.theta, beta: model.beta }, rows: &rows },
            );
        }
        LocalModelCmd::Flatness { model, grid, levels } => {
            let p = model.params()?;
            let g = AnnularGrid::standard(grid.0, grid.1)?;
            let (reports, orders) = if *levels <= 1 {
                (vec![check_flatness(&p, &g)?], Vec::new())
            } else {
                flatness_convergence(&p, &g, *levels)?
            };
            let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
            let csv: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.n_r.to_string(),
                        r.n_gamma.to_string(),
                        r.s_frame.map(fmt_f64).unwrap_or_default(),
                        fmt_f64(r.u_frame),
                        r.simpson_u_frame.map(fmt_f64).unwrap_or_default(),
                        fmt_f64(r.dbar_v),
                        fmt_f64(r.d_prime_v),
                    ]
                })
                .collect();
            out.csv(
                "flatness",
                &["n_r", "n_gamma", "s_frame", "u_frame", "simpson_u_frame", "dbar_v", "d_prime_v"],
                &csv,
            )?;
            out.json(
                "flatness",
                "local_model.flatness",
                &FlatnessDoc { reports: &reports, orders: &orders, min_order },
            );
        }
        LocalModelCmd::Monodromy { model, basis, transport_steps, transport_r } => {
            let p = model.params()?;
            let (basis, name) = match basis {
                BasisArg::S => (FrameBasis::SFrame, "s"),
                BasisArg::U => (FrameBasis::UFrame, "u"),
            };
            let m = monodromy(&p, basis)?;
            let transport = match transport_steps {
                Some(steps) => {
                    let t = transport_monodromy(&p, basis, *transport_r, *steps)?;
                    Some(TransportDoc {
                        steps: *steps,
                        r: *transport_r,
                        matrix: rows_of(&t.m),
                        frobenius_gap: crate::linalg::frobenius_distance(&t.m, &m.m),
                    })
                }
                None => None,
            };
            let doc = MatrixDoc { basis: name, matrix: rows_of(&m.m), trace: m.trace(), det: m.det(), transport };
            let csv: Vec<Vec<String>> = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| vec![i.to_string(), j.to_string(), fmt_f64(m.m[(i, j)].re), fmt_f64(m.m[(i, j)].im)])
                .collect();
            out.csv("monodromy", &["row", "col", "re", "im"], &csv)?;
            out.json("monodromy", "local_model.monodromy", &doc);
        }
        LocalModelCmd::Growth { model, section, r_min, r_max, points } => {
            let p = model.params()?;
            let tag = match section {
                SectionArg::W10 => SectionTag::W10,
                SectionArg::W01 => SectionTag::W01,
                SectionArg::Zw01 => SectionTag::ZW01,
            };
            let radii = RadiusArgs { r: None, r_min: *r_min, r_max: *r_max, points: *points }.radii()?;
            let fit = section_growth_exponent(&p, tag, &radii)?;
            out.csv(
                "growth",
                &["section", "fitted", "predicted"],
                &[vec![format!("{tag:?}"), fmt_f64(fit.fitted), fmt_f64(fit.predicted)]],
            )?;
            out.json("growth", "local_model.growth", &GrowthDoc { section: tag, radii: &radii, fit });
        }
    }
    Ok(())
}
