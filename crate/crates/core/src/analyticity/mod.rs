//! Evidence for analytic dependence of the model family on the cone
//! parameter: probe tables, polynomial-fit decay, Richardson derivatives
//! and monodromy convergence toward the cusp.

mod derivative;
mod family;
mod fit;
mod monodromy;

pub use derivative::{derivative_samples, finite_difference_derivative, DerivativeEstimate};
pub use family::{solve_family, FamilyConfig, FamilyMode, FamilyRow, FamilyTable, DEFAULT_PROBES};
pub use fit::{analyticity_fit, fit_samples, DegreeFit, FitBasis, FitReport, DECAY_RATIO, MAX_DEGREE, MIN_DECAY_STEPS};
pub use monodromy::{monodromy_convergence, MonodromyConvergence, MonodromyDistance};
