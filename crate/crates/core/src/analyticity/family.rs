use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::he_solver::{closed_form_w, solve_radial_bvp, SGrid, SolverConfig};
use crate::local_model::{monodromy, FrameBasis, LocalModelParams};

pub const DEFAULT_PROBES: [f64; 3] = [1.5, 2.5, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMode {
    ClosedForm,
    RadialSolver,
    /// Values supplied directly (control fixtures).
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub grid: SGrid,
    pub solver: SolverConfig,
    /// Worker threads for independent members; 1 runs sequentially.
    pub jobs: usize,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self { grid: SGrid { s_min: 1.0, s_max: 8.0, nodes: 400 }, solver: SolverConfig::default(), jobs: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub theta: f64,
    /// `w_θ(s₀)` at each probe.
    pub values: Vec<f64>,
    /// Row-major u-frame monodromy of the untwisted model.
    pub monodromy_u: [Complex64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyTable {
    pub mode: FamilyMode,
    pub probes: Vec<f64>,
    pub rows: Vec<FamilyRow>,
    /// Accuracy floor of the values: round-off for closed forms, the Newton
    /// tolerance for solver output.
    pub noise_floor: f64,
}

impl FamilyTable {
    pub fn thetas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.theta).collect()
    }

    pub fn column(&self, probe: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.values[probe]).collect()
    }

    /// Table whose single probe column is `f(θ)`.
    pub fn synthetic<F: Fn(f64) -> f64>(thetas: &[f64], f: F) -> Result<Self> {
        check_thetas(thetas)?;
        let zero = Complex64::new(0.0, 0.0);
        let rows = thetas.iter().map(|&t| FamilyRow { theta: t, values: vec![f(t)], monodromy_u: [zero; 4] }).collect();
        Ok(Self { mode: FamilyMode::Synthetic, probes: vec![f64::NAN], rows, noise_floor: 1e-13 })
    }
}

fn check_thetas(thetas: &[f64]) -> Result<()> {
    if thetas.is_empty() {
        return Err(Error::InvalidInput("empty theta list".into()));
    }
    if thetas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("theta samples must be strictly increasing".into()));
    }
    Ok(())
}

/// Cubic Lagrange interpolation of nodal values on a uniform grid.
fn interpolate(grid: &SGrid, w: &[f64], s: f64) -> f64 {
    let x = (s - grid.s_min) / grid.ds();
    let base = (x.floor() as isize - 1).clamp(0, grid.nodes as isize - 4) as usize;
    let mut total = 0.0;
    for a in 0..4 {
        let mut l = 1.0;
        for b in 0..4 {
            if a != b {
                l *= (x - (base + b) as f64) / (a as f64 - b as f64);
            }
        }
        total += l * w[base + a];
    }
    total
}

fn member(theta: f64, mode: FamilyMode, probes: &[f64], config: &FamilyConfig) -> Result<FamilyRow> {
    let p = LocalModelParams::new(theta, 0.0)?;
    let m = monodromy(&p, FrameBasis::UFrame)?.m;
    let monodromy_u = [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]];
    let values = match mode {
        FamilyMode::ClosedForm => probes.iter().map(|&s| closed_form_w(theta, s)).collect(),
        FamilyMode::RadialSolver => {
            let sol = solve_radial_bvp(theta, &config.grid, &config.solver)?;
            probes.iter().map(|&s| interpolate(&config.grid, &sol.w, s)).collect()
        }
        FamilyMode::Synthetic => {
            return Err(Error::InvalidInput("synthetic tables are built with FamilyTable::synthetic".into()))
        }
    };
    Ok(FamilyRow { theta, values, monodromy_u })
}

/// Evaluate the metric family at the probe points for every `θ`.
/// Members are independent; with `jobs > 1` they run on a rayon pool and
/// are collected in input order.
pub fn solve_family(thetas: &[f64], mode: FamilyMode, probes: &[f64], config: &FamilyConfig) -> Result<FamilyTable> {
    check_thetas(thetas)?;
    if let Some(&t) = thetas.iter().find(|t| !(0.0..1.0).contains(*t)) {
        return Err(Error::Domain(format!("theta = {t} outside [0, 1)")));
    }
    if mode == FamilyMode::RadialSolver {
        if let Some(&s) = probes.iter().find(|&&s| !(s >= config.grid.s_min && s <= config.grid.s_max)) {
            return Err(Error::InvalidInput(format!("probe s = {s} outside the solver grid")));
        }
        SGrid::new(config.grid.s_min, config.grid.s_max, config.grid.nodes)?;
        if config.grid.nodes < 4 {
            return Err(Error::GridTooCoarse("probe interpolation needs at least 4 nodes".into()));
        }
    }
    if probes.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidInput("probe points must be positive".into()));
    }
    let run = |&theta: &f64| {
        member(theta, mode, probes, config).map_err(|e| Error::FamilyMember { theta, source: Box::new(e) })
    };
    let rows: Result<Vec<FamilyRow>> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(|| thetas.par_iter().map(run).collect())
    } else {
        thetas.iter().map(run).collect()
    };
    let noise_floor = match mode {
        FamilyMode::RadialSolver => 10.0 * config.solver.tolerance,
        _ => 1e-13,
    };
    Ok(FamilyTable { mode, probes: probes.to_vec(), rows: rows?, noise_floor })
}
