//! The truncated model: self-force kept to the jerk and the leading
//! nonlinear term. With m = ħα/(4dc) the coefficients reduce to
//!
//! ```text
//! 12mc²/(ħα)     = 3c/d
//! 5ħαd/(32mc³)   = 5d²/(8c²)
//! ```
//!
//! giving ȧ = 3a(1 − 5a²/8) − 3a²v in c = d = 1 units.

use crate::model::KinematicState;

use super::trajectory::{Trajectory, TrajectoryMeta};
use super::DynamicsError;

/// Right-hand side of (ẋ, v̇, ȧ).
pub fn truncated_rhs(s: [f64; 3]) -> [f64; 3] {
    let [_, v, a] = s;
    [v, a, 3.0 * a * (1.0 - 0.625 * a * a) - 3.0 * a * a * v]
}

fn rk4_step(s: [f64; 3], h: f64) -> [f64; 3] {
    let add = |s: [f64; 3], k: [f64; 3], f: f64| [s[0] + f * k[0], s[1] + f * k[1], s[2] + f * k[2]];
    let k1 = truncated_rhs(s);
    let k2 = truncated_rhs(add(s, k1, 0.5 * h));
    let k3 = truncated_rhs(add(s, k2, 0.5 * h));
    let k4 = truncated_rhs(add(s, k3, h));
    [
        s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        s[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

/// Classical fourth-order Runge-Kutta from `state0` to `t_end`.
///
/// The truncated model has no light barrier of its own, so reaching
/// |β| ≥ 1 stops the run with the partial trajectory.
pub fn integrate_truncated(state0: &KinematicState, t_end: f64, step: f64) -> Result<Trajectory, DynamicsError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(DynamicsError::BadStep(step));
    }
    if !(state0.beta.abs() < 1.0) {
        return Err(DynamicsError::Superluminal { t: state0.t, beta: state0.beta });
    }
    let n = ((t_end - state0.t) / step).round().max(1.0) as usize;
    let mut x = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    let mut a = Vec::with_capacity(n + 1);
    let meta = TrajectoryMeta {
        integrator: "truncated-rk4".into(),
        step,
        seed: format!("beta {} beta_dot {}", state0.beta, state0.beta_dot),
        base_velocity: 0.0,
    };
    let mut s = [state0.x, state0.beta, state0.beta_dot];
    for i in 0..=n {
        x.push(s[0]);
        v.push(s[1]);
        a.push(s[2]);
        if i == n {
            break;
        }
        let next = rk4_step(s, step);
        if !(next[1].abs() < 1.0) {
            let partial = if x.len() >= 2 {
                Trajectory::new(state0.t, step, x, v, a, meta).ok()
            } else {
                None
            };
            let t = state0.t + (i + 1) as f64 * step;
            return match partial {
                Some(p) => Err(DynamicsError::LightBarrier { t, partial: Box::new(p) }),
                None => Err(DynamicsError::Superluminal { t, beta: next[1] }),
            };
        }
        s = next;
    }
    Trajectory::new(state0.t, step, x, v, a, meta)
}
