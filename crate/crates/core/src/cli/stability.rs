use std::path::PathBuf;

use clap::Subcommand;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{CliError, CliResult, Output};
use crate::parabolic::{
    is_stable, mcowen_bundle, mcowen_stable, BundleJson, ConeAngles, FilteredBundleSpec, Parabolic, SnapReport,
    Stability, SubobjectSpec,
};

#[derive(Debug, Subcommand)]
pub enum StabilityCmd {
    /// Cone-angle constraint for the McOwen bundle of a marked surface.
    Mcowen {
        #[arg(long)]
        genus: u32,
        /// Number of marked points; must match the length of --angles.
        #[arg(long)]
        points: usize,
        /// Cone parameters in [0, 1), comma separated. Decimals are snapped
        /// to the nearest rational with denominator at most 10^6.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        angles: Vec<f64>,
    },
    /// Slope test of a bundle against candidate subobjects read from JSON.
    Check {
        /// `{"bundle": {...}, "subobjects": [{...}, ...]}`.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Serialize)]
struct Exact {
    exact: String,
    value: f64,
}

impl From<&BigRational> for Exact {
    fn from(q: &BigRational) -> Self {
        Self { exact: q.to_string(), value: q.to_f64().unwrap_or(f64::NAN) }
    }
}

#[derive(Serialize)]
struct McowenDoc {
    genus: u32,
    points: usize,
    stable: bool,
    /// Verdict of the general slope test on the constructed bundle.
    slope_test: Stability,
    degree: Exact,
    bundle_slope: Exact,
    sub_slope: Exact,
    /// `2g - 2 + m - Σθ`.
    constraint_value: Exact,
    angles: Vec<SnapReport>,
}

#[derive(Deserialize)]
struct CheckInput {
    bundle: BundleJson,
    #[serde(default)]
    subobjects: Vec<BundleJson>,
}

#[derive(Serialize)]
struct CheckDoc {
    verdict: Stability,
    witness: Option<usize>,
    degree: Exact,
    bundle_slope: Exact,
    sub_slopes: Vec<Exact>,
    vacuous: bool,
    phi_invariance_unverified: bool,
}

pub fn run(cmd: &StabilityCmd, out: &mut Output) -> CliResult<()> {
    match cmd {
        StabilityCmd::Mcowen { genus, points, angles } => {
            if *points != angles.len() {
                return Err(CliError::Validation(format!("--points {points} but {} angles given", angles.len())));
            }
            let (cone, snaps) = ConeAngles::from_f64(angles)?;
            let b = mcowen_bundle(*genus, &cone)?;
            let stable = mcowen_stable(*genus, &cone)?;
            let report = is_stable(&b.bundle, std::slice::from_ref(&b.sub))?;
            let constraint =
                BigRational::from_integer((2 * i64::from(*genus) - 2 + *points as i64).into()) - cone.sum();
            let doc = McowenDoc {
                genus: *genus,
                points: *points,
                stable,
                slope_test: report.verdict,
                degree: (&b.bundle.algebraic_degree()).into(),
                bundle_slope: (&report.bundle_slope).into(),
                sub_slope: (&report.sub_slopes[0]).into(),
                constraint_value: (&constraint).into(),
                angles: snaps,
            };
            out.json("mcowen", "stability.mcowen", &doc);
        }
        StabilityCmd::Check { input } => {
            let text = std::fs::read_to_string(input)?;
            let parsed: CheckInput =
                serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", input.display())))?;
            let bundle = FilteredBundleSpec::try_from(&parsed.bundle)?;
            let subs = parsed.subobjects.iter().map(SubobjectSpec::try_from).collect::<crate::Result<Vec<_>>>()?;
            let r = is_stable(&bundle, &subs)?;
            let doc = CheckDoc {
                verdict: r.verdict,
                witness: r.witness,
                degree: (&bundle.algebraic_degree()).into(),
                bundle_slope: (&r.bundle_slope).into(),
                sub_slopes: r.sub_slopes.iter().map(Exact::from).collect(),
                vacuous: r.vacuous,
                phi_invariance_unverified: r.phi_invariance_unverified,
            };
            out.json("stability", "stability.check", &doc);
        }
    }
    Ok(())
}
