//! Numerical Hermitian–Einstein solves for the diagonal rank-2 ansatz.
//!
//! With `w = log h₁₁` in the cylinder coordinate `s = -log r`, the
//! equation for the model reduces to `w_ss + w_φφ + e^{-2w} = 0`, solved
//! exactly by `log(sinh(θs)/θ)` and, for the cusp, by `log s`.

mod annulus;
mod curvature;
mod general;
mod newton;
mod radial;

pub use annulus::{angular_fourier_content, solve_annulus, solve_annulus_with, AnnulusGrid, AnnulusSolution};
pub use curvature::{
    cone_conformal_factor, cone_conformal_factor_sinh, cone_factor_log_slope, curvature_convergence, gauss_curvature,
    CartesianGrid, ConformalFactor, CurvatureStudy,
};
pub use general::{he_residual_general, DiagonalHiggsField, GeneralResidual};
pub use newton::SolverConfig;
pub use radial::{closed_form_w, reduced_residual, solve_radial_bvp, solve_radial_from, RadialSolution, SGrid};
