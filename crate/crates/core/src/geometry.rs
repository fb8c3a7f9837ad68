//! Retarded-time geometry of the dumbbell in c = d = 1 units.
//!
//! Each charge sees the other through a light signal emitted at t_r. With r
//! the delay distance and l the advance along the axis, r² = l² + 1.
//!
//! The closed forms below hold only on trajectories that satisfy the
//! equation of motion, so they are gated by [`Shell`]. Off-shell callers go
//! through [`solve_retarded_time`].
//!
//! With S = √(1 + y) and y = γ⁶β̇²:
//!
//! ```text
//! r = γS + γ⁴ββ̇
//! l = γβS + γ⁴β̇        (signed; its square is the usual radical)
//! r − lβ = S/γ
//! ```

use thiserror::Error;

use crate::model::{lorentz_gamma, KinematicState, ModelError};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("closed forms require an on-shell state")]
    OffShell,
    #[error("history too short: needs data before t = {needed}, starts at {start}")]
    HistoryTooShort { needed: f64, start: f64 },
    #[error("variational delay needs uniform motion, got beta_dot = {0}")]
    NotUniform(f64),
}

/// Whether a state is known to lie on a solution of the equation of motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shell {
    On,
    Off,
}

/// Anything that can report a position at a past time.
pub trait History {
    fn position(&self, t: f64) -> f64;
    /// Earliest time at which `position` is valid.
    fn start(&self) -> f64;
}

impl<F: Fn(f64) -> f64> History for (F, f64) {
    fn position(&self, t: f64) -> f64 {
        (self.0)(t)
    }
    fn start(&self) -> f64 {
        self.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedGeometry {
    pub r: f64,
    pub l: f64,
    pub t_r: f64,
}

fn parts(s: &KinematicState) -> Result<(f64, f64), ModelError> {
    let g = lorentz_gamma(s.beta)?;
    let g3 = g * g * g;
    let root = (1.0 + g3 * g3 * s.beta_dot * s.beta_dot).sqrt();
    Ok((g, root))
}

/// Delay distance from the kinematics at the retarded time.
pub fn retarded_r_closed(s: &KinematicState) -> Result<f64, ModelError> {
    let (g, root) = parts(s)?;
    let g4 = g * g * g * g;
    Ok(g * root + g4 * s.beta * s.beta_dot)
}

/// Signed advance l; its sign is that of x(t) − x(t_r).
pub fn retarded_l_closed(s: &KinematicState) -> Result<f64, ModelError> {
    let (g, root) = parts(s)?;
    let g4 = g * g * g * g;
    Ok(g * s.beta * root + g4 * s.beta_dot)
}

/// |l| evaluated from the radical form. Loses precision when the two
/// contributions nearly cancel; kept as a cross-check.
pub fn retarded_l_radical(s: &KinematicState) -> Result<f64, ModelError> {
    let (g, root) = parts(s)?;
    let (b, bd) = (s.beta, s.beta_dot);
    let radicand = g.powi(2) * b * b + g.powi(8) * bd * bd * (1.0 + b * b) + 2.0 * g.powi(5) * b * bd * root;
    Ok(radicand.max(0.0).sqrt())
}

/// r − lβ, the self-potential denominator. Equals √(1 + y)/γ.
pub fn potential_denominator(s: &KinematicState) -> Result<f64, ModelError> {
    let (g, root) = parts(s)?;
    Ok(root / g)
}

/// Closed-form geometry for a state at the retarded time `s.t`.
pub fn closed_geometry(s: &KinematicState, shell: Shell) -> Result<RetardedGeometry, GeometryError> {
    if shell == Shell::Off {
        return Err(GeometryError::OffShell);
    }
    let r = retarded_r_closed(s)?;
    let l = retarded_l_closed(s)?;
    // s.t is the emission time, so the observation happens at s.t + r.
    Ok(RetardedGeometry { r, l, t_r: s.t })
}

/// First-order change of the delay around uniform motion.
pub fn variational_delay(s: &KinematicState, delta_ydot: f64, delta_gamma: f64) -> Result<f64, GeometryError> {
    if s.beta_dot != 0.0 {
        return Err(GeometryError::NotUniform(s.beta_dot));
    }
    let g = lorentz_gamma(s.beta)?;
    Ok(g.powi(4) * s.beta * delta_ydot + delta_gamma)
}

// Relative to the delay.
const RESIDUAL_TOL: f64 = 8.0 * f64::EPSILON;

/// Finds t_r with t − t_r = √((x(t) − x(t_r))² + 1).
///
/// The defining function is increasing in the delay for any subluminal
/// history, so a bracket found by doubling from 1 contains the only root.
pub fn solve_retarded_time<H: History + ?Sized>(h: &H, t: f64) -> Result<RetardedGeometry, GeometryError> {
    let xt = h.position(t);
    let g = |delta: f64| {
        let dx = xt - h.position(t - delta);
        (delta - (dx * dx + 1.0).sqrt(), dx)
    };
    let check = |delta: f64| {
        if t - delta < h.start() {
            Err(GeometryError::HistoryTooShort { needed: t - delta, start: h.start() })
        } else {
            Ok(())
        }
    };

    let mut lo = 1.0;
    check(lo)?;
    let (mut g_lo, dx) = g(lo);
    if g_lo == 0.0 {
        return Ok(RetardedGeometry { r: lo, l: dx, t_r: t - lo });
    }
    let mut hi = 2.0;
    loop {
        // Don't step past the start of the history unless the root is
        // beyond it.
        let room = t - h.start();
        if hi > room && room > lo {
            hi = room;
        }
        check(hi)?;
        let (g_hi, dx) = g(hi);
        if g_hi == 0.0 {
            return Ok(RetardedGeometry { r: hi, l: dx, t_r: t - hi });
        }
        if g_hi > 0.0 {
            return Ok(refine(&g, lo, g_lo, hi, g_hi, t));
        }
        if hi == room {
            check(2.0 * hi)?;
        }
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
    }
}

// A few bisections, then Illinois-safeguarded secant steps.
fn refine(
    g: &impl Fn(f64) -> (f64, f64),
    mut lo: f64,
    mut g_lo: f64,
    mut hi: f64,
    mut g_hi: f64,
    t: f64,
) -> RetardedGeometry {
    for _ in 0..8 {
        let mid = 0.5 * (lo + hi);
        let (gm, dx) = g(mid);
        if gm.abs() < RESIDUAL_TOL * mid {
            return RetardedGeometry { r: mid, l: dx, t_r: t - mid };
        }
        if gm < 0.0 {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
            g_hi = gm;
        }
    }
    let mut side = 0i8;
    let mut best = (f64::INFINITY, lo, 0.0);
    for _ in 0..200 {
        let mut x = hi - g_hi * (hi - lo) / (g_hi - g_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let (gx, dx) = g(x);
        if gx.abs() < best.0 {
            best = (gx.abs(), x, dx);
        }
        if gx.abs() < RESIDUAL_TOL * x || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        if gx < 0.0 {
            lo = x;
            g_lo = gx;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            g_hi = gx;
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
        }
    }
    RetardedGeometry { r: best.1, l: best.2, t_r: t - best.1 }
}
