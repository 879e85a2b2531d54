//! Numerical checks of the stability machinery: the cutoff tangent field X,
//! its weak formulation, the pointwise estimate, Gronwall control of F,
//! weak-strong stability, the flow-map constants and the drift mechanism.

mod flow;
mod gronwall;
mod illposed;
mod lipschitz;
mod pointwise;
mod tubular;
mod weakform;
mod weakstrong;

pub use flow::RigidFlow;
pub use gronwall::{
    best_shift, gronwall_experiment, gronwall_report, paired_run, track_sigma, BaseAlignment, GronwallConfig,
    GronwallConstants, GronwallReport, GronwallRow, PairedRun, SigmaTrack, GRONWALL_ABS_TOL,
};
pub use illposed::{drift_cross_check, illposed_experiment, CrossCheckConfig, DriftCrossCheck, DriftReport};
pub use lipschitz::{flow_lipschitz_experiment, sobolev_norms_squared, LipschitzConfig, LipschitzReport, LipschitzRun};
pub use pointwise::{
    pointwise_constant, pointwise_estimate_check, pointwise_sample, PointwiseReport, PointwiseSample, POINTWISE_SLACK,
};
pub use tubular::{FdSettings, Foot, TubularField, FD_STEP, RICHARDSON_LEVELS};
pub use weakform::{weak_formulation_residual, WeakFormReport, WeakFormRow};
pub use weakstrong::{weak_strong_experiment, WeakStrongReport, WeakStrongRow};
