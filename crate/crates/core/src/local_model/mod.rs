//! Closed-form rank-2 harmonic bundles on the punctured disk.
//!
//! The Higgs field is `φ = [[0, 0], [z^β/2, 0]] z^{-1} dz` in the frame
//! `{w^{1,0}, w^{0,1}}`, and the harmonic metric is the diagonal cone
//! metric `k_{β,θ}` with cone angle `2πθ`. `θ = 0` is the cusp model and is
//! evaluated through series-stabilised limits, never by dividing by zero.

mod checks;
mod frames;
mod growth;
mod metric;
mod monodromy;
mod params;

pub use checks::{
    check_flatness, check_hermitian_einstein, flatness_convergence, he_convergence, AnnularGrid, FlatnessReport,
    HeReport, RadialGrid,
};
pub use frames::{
    dbar_holomorphic_frame, flat_frame_s, flat_frame_u, frame_at, s_to_u_change_of_basis, FrameSample, FrameTag,
};
pub use growth::{predicted_growth_exponent, section_growth_exponent, GrowthFit, SectionTag};
pub use metric::{
    connection_matrices, eval_chern_connection, eval_cone_metric, eval_curvature, eval_cusp_metric, eval_higgs_adjoint,
    simpson_cusp_connection, ConnectionMatrices,
};
pub use monodromy::{monodromy, transport_monodromy, FrameBasis, MonodromyMatrix};
pub use params::{DiskPoint, LocalModelParams, MetricSample};
