//! Motion of the dumbbell: exact propagation of the delay equation, the
//! truncated third-order model, and diagnostics (growth rate, spectrum).
//!
//! Units are c = d = 1 throughout.

mod analysis;
mod exact;
mod trajectory;
mod truncated;

use thiserror::Error;

use crate::geometry::{solve_retarded_time, GeometryError};

pub use analysis::{
    estimate_growth_rate, estimate_spectrum, exponential_gain, growth_rate_of_signal, linear_window,
    perturbed_uniform_run, spectrum_of_signal,
    GrowthEstimate, PerturbedRun, SpectralPeak,
};
pub use exact::{propagate_exact, ExactConfig, SeedHistory, SeedKind};
pub use trajectory::{Trajectory, TrajectoryMeta};
pub use truncated::{integrate_truncated, truncated_rhs};

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("grid step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("time-reversed grids are not propagated")]
    TimeReversed,
    #[error("smoothing width {0} must be positive with a fit window below one delay")]
    BadSmoothing(f64),
    #[error("|beta| = {beta} reaches the light barrier at t = {t}")]
    Superluminal { t: f64, beta: f64 },
    #[error("arrival times stop increasing at emission time {t}")]
    ArrivalFold { t: f64, partial: Box<Trajectory> },
    #[error("velocity reaches the light barrier at t = {t}")]
    LightBarrier { t: f64, partial: Box<Trajectory> },
    #[error("equation-of-motion residual {residual:e} exceeds the audit tolerance at t = {t}")]
    ResidualExceeded { t: f64, residual: f64, partial: Box<Trajectory> },
    #[error("bad history table: {0}")]
    BadTable(String),
    #[error("window [{0}, {1}] holds no usable samples")]
    BadWindow(f64, f64),
    #[error("signal is constant or zero in the window")]
    Degenerate,
    #[error("need at least {need} samples, have {have}")]
    TooFewSamples { need: usize, have: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl DynamicsError {
    /// The trajectory computed before a breakdown, if any.
    pub fn partial(&self) -> Option<&Trajectory> {
        match self {
            DynamicsError::ArrivalFold { partial, .. }
            | DynamicsError::LightBarrier { partial, .. }
            | DynamicsError::ResidualExceeded { partial, .. } => Some(partial),
            _ => None,
        }
    }

    /// Time at which a run broke down, for the errors that carry a partial
    /// trajectory.
    pub fn breakdown_time(&self) -> Option<f64> {
        match self {
            DynamicsError::ArrivalFold { t, .. }
            | DynamicsError::LightBarrier { t, .. }
            | DynamicsError::ResidualExceeded { t, .. } => Some(*t),
            _ => None,
        }
    }
}

/// Equation-of-motion residual at time t:
/// (1 − β²)(x(t) − x(t_r) − r·β) − β̇, with the right-hand kinematics taken
/// at the retarded time from the implicit light-cone solver. The position
/// difference is formed from offsets to the reference motion.
pub fn residual_eom(traj: &Trajectory, t: f64) -> Result<f64, DynamicsError> {
    let g = solve_retarded_time(traj, t)?;
    let base = traj.base_velocity();
    let (xi_r, v, a) = traj.eval_offset(g.t_r);
    let xi_t = traj.eval_offset(t).0;
    let b = base + v;
    // x(t) − x(t_r) − r·β = β_ref(t − t_r − r) + (ξ(t) − ξ(t_r) − r·ξ'(t_r))
    let gap = base * ((t - g.t_r) - g.r) + (xi_t - xi_r - g.r * v);
    Ok((1.0 - b) * (1.0 + b) * gap - a)
}

/// Largest |residual| over knots from `t_from` on, visiting every
/// `stride`-th knot.
pub fn max_residual(traj: &Trajectory, t_from: f64, stride: usize) -> Result<f64, DynamicsError> {
    let mut worst = 0.0f64;
    let mut i = traj.index_at_or_after(t_from);
    while i < traj.len() {
        worst = worst.max(residual_eom(traj, traj.time(i))?.abs());
        i += stride.max(1);
    }
    Ok(worst)
}
