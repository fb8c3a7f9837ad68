//! Exact propagation of the delay equation of motion.
//!
//! A state at time s fixes the position at the arrival time s + r:
//!
//! ```text
//! x(s + r) = x(s) + l,   r, l from (β(s), β̇(s))
//! ```
//!
//! so every known knot emits one future constraint. New grid positions are
//! interpolated from the arrival points; velocity and acceleration at a knot
//! follow once enough later positions exist. Positions are carried as the
//! offset ξ = x − β_ref·t from a reference uniform motion, which keeps
//! uniform motion exact in floating point.

use nalgebra::{DMatrix, DVector};

use crate::geometry::{retarded_l_closed, retarded_r_closed};
use crate::model::{lorentz_gamma, KinematicState};
use crate::roots::rest_instability_rate;

use super::trajectory::{Trajectory, TrajectoryMeta};
use super::{residual_eom, DynamicsError};

#[derive(Debug, Clone, PartialEq)]
pub enum SeedKind {
    /// Rest, plus an acceleration bump A(1 − u²)⁴ over the last unit of
    /// history (u running from −1 to 1).
    RestKick,
    /// Uniform motion at `beta`, plus a perturbation of velocity amplitude A
    /// along the real growing mode e^{λt}, λ = λ_rest/γ. Zero amplitude is
    /// pure uniform motion.
    UniformMotion { beta: f64 },
    /// Uniform motion at `beta` plus a velocity perturbation A·e^{rate·t},
    /// whatever the rate.
    Exponential { beta: f64, rate: f64 },
    /// A user-supplied history on the propagation grid; propagation starts
    /// at its last knot.
    Table(Trajectory),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedHistory {
    pub kind: SeedKind,
    pub amplitude: f64,
    /// Length of history before t = 0. Raised to at least max(3, 2γ).
    pub span: f64,
}

impl SeedHistory {
    pub fn rest_kick(amplitude: f64) -> Self {
        SeedHistory { kind: SeedKind::RestKick, amplitude, span: 3.0 }
    }

    /// Kick along the real growing mode of rest.
    pub fn mode_kick(amplitude: f64) -> Self {
        Self::uniform(0.0, amplitude)
    }

    pub fn uniform(beta: f64, amplitude: f64) -> Self {
        SeedHistory { kind: SeedKind::UniformMotion { beta }, amplitude, span: 3.0 }
    }

    pub fn exponential(beta: f64, rate: f64, amplitude: f64) -> Self {
        SeedHistory { kind: SeedKind::Exponential { beta, rate }, amplitude, span: 3.0 }
    }

    pub fn table(history: Trajectory) -> Self {
        let span = history.end() - history.start();
        SeedHistory { kind: SeedKind::Table(history), amplitude: 0.0, span }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            SeedKind::RestKick => format!("rest_kick amplitude {:e}", self.amplitude),
            SeedKind::UniformMotion { beta } if *beta == 0.0 => format!("mode_kick amplitude {:e}", self.amplitude),
            SeedKind::UniformMotion { beta } => format!("uniform beta {beta} kick {:e}", self.amplitude),
            SeedKind::Exponential { beta, rate } => format!("uniform beta {beta} exponential rate {rate} kick {:e}", self.amplitude),
            SeedKind::Table(t) => format!("table {} knots", t.len()),
        }
    }

    fn base_velocity(&self) -> f64 {
        match &self.kind {
            SeedKind::UniformMotion { beta } | SeedKind::Exponential { beta, .. } => *beta,
            _ => 0.0,
        }
    }
}

/// Knobs of the exact propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Width σ (in d/c) of the Gaussian weights used to fit local
    /// polynomials for velocity and acceleration. The fit spans ±4σ.
    pub smoothing: f64,
    pub fit_degree: usize,
    /// Largest accepted |residual| of the equation of motion, audited at
    /// every propagated knot and midpoint. Infinity turns the audit off.
    pub residual_tolerance: f64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { dt: 1e-3, t_end: 100.0, smoothing: 0.05, fit_degree: 4, residual_tolerance: 1e-6 }
    }
}

// Bump antiderivatives in u = 2(t + 1/2).
fn bump_p1(u: f64) -> f64 {
    u - 4.0 * u.powi(3) / 3.0 + 6.0 * u.powi(5) / 5.0 - 4.0 * u.powi(7) / 7.0 + u.powi(9) / 9.0
}

fn bump_p2(u: f64) -> f64 {
    u * u / 2.0 - u.powi(4) / 3.0 + u.powi(6) / 5.0 - u.powi(8) / 14.0 + u.powi(10) / 90.0
}

/// (ξ, ξ', ξ'') of the seed at time t ≤ 0.
fn seed_offset(kind: &SeedKind, amp: f64, t: f64) -> (f64, f64, f64) {
    match kind {
        SeedKind::RestKick => {
            if t <= -1.0 {
                return (0.0, 0.0, 0.0);
            }
            let u = 2.0 * (t + 0.5);
            let a = amp * (1.0 - u * u).powi(4);
            let b = 0.5 * amp * (bump_p1(u) - bump_p1(-1.0));
            let x = 0.25 * amp * (bump_p2(u) - bump_p2(-1.0) - bump_p1(-1.0) * (u + 1.0));
            (x, b, a)
        }
        SeedKind::UniformMotion { beta } => {
            if amp == 0.0 {
                return (0.0, 0.0, 0.0);
            }
            let lam = rest_instability_rate() / lorentz_gamma(*beta).unwrap_or(f64::INFINITY);
            exponential_offset(lam, amp, t)
        }
        SeedKind::Exponential { rate, .. } => {
            if amp == 0.0 {
                return (0.0, 0.0, 0.0);
            }
            exponential_offset(*rate, amp, t)
        }
        SeedKind::Table(_) => unreachable!("tables carry their own samples"),
    }
}

fn exponential_offset(rate: f64, amp: f64, t: f64) -> (f64, f64, f64) {
    let e = (rate * t).exp();
    (amp / rate * e, amp * e, amp * rate * e)
}

/// Weights turning 2m + 1 equally spaced samples into first and second
/// derivatives at the centre, from a Gaussian-weighted polynomial fit.
pub(crate) fn derivative_weights(m: usize, degree: usize, sigma_knots: f64) -> (Vec<f64>, Vec<f64>) {
    let n = 2 * m + 1;
    let p = degree.min(n - 1);
    let scale = m.max(1) as f64;
    let v = DMatrix::from_fn(n, p + 1, |i, k| ((i as f64 - m as f64) / scale).powi(k as i32));
    let w = DVector::from_fn(n, |i, _| {
        let z = (i as f64 - m as f64) / sigma_knots;
        (-0.5 * z * z).exp()
    });
    let vtw = DMatrix::from_fn(p + 1, n, |k, i| v[(i, k)] * w[i]);
    let gram = &vtw * &v;
    let inv = gram.try_inverse().expect("fit matrix is positive definite");
    let k = inv * vtw;
    let d1: Vec<f64> = (0..n).map(|i| k[(1, i)] / scale).collect();
    let d2: Vec<f64> = (0..n).map(|i| if p >= 2 { 2.0 * k[(2, i)] / (scale * scale) } else { 0.0 }).collect();
    // Exact antisymmetry/symmetry keeps a zero signal at exactly zero and
    // a linear one exact up to rounding.
    let d1 = (0..n).map(|i| 0.5 * (d1[i] - d1[n - 1 - i])).collect();
    let d2 = (0..n).map(|i| 0.5 * (d2[i] + d2[n - 1 - i])).collect();
    (d1, d2)
}

fn lagrange4(ts: &[f64], ys: &[f64], t: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        let mut w = 1.0;
        for q in 0..4 {
            if q != i {
                w *= (t - ts[q]) / (ts[i] - ts[q]);
            }
        }
        s += w * ys[i];
    }
    s
}

/// Propagates the seed history forward to `cfg.t_end`.
///
/// Fails with the partial trajectory when arrival times stop increasing, a
/// knot reaches the light barrier, or the residual audit fails. None of
/// these is repaired; the partial trajectory ends before the first of them.
pub fn propagate_exact(seed: &SeedHistory, cfg: &ExactConfig) -> Result<Trajectory, DynamicsError> {
    let raw = propagate_unaudited(seed, cfg);
    if !(cfg.residual_tolerance < f64::INFINITY) {
        return raw;
    }
    let traj = match &raw {
        Ok(t) => t,
        Err(e) => match e.partial() {
            Some(p) => p,
            None => return raw,
        },
    };
    let t_start = match &seed.kind {
        SeedKind::Table(tr) => tr.end(),
        _ => 0.0,
    };
    match audit(traj, t_start, cfg.residual_tolerance) {
        Some(e) => Err(e),
        None => raw,
    }
}

// First knot (or midpoint) after t_start whose residual exceeds tol.
fn audit(traj: &Trajectory, t_start: f64, tol: f64) -> Option<DynamicsError> {
    let first = traj.index_at_or_after(t_start).max(1);
    for i in first..traj.len() {
        for t in [traj.time(i) - 0.5 * traj.dt(), traj.time(i)] {
            if t <= t_start {
                continue;
            }
            // Too little history for the light cone: nothing to audit yet.
            let Ok(r) = residual_eom(traj, t) else { continue };
            if !(r.abs() <= tol) {
                let partial = traj.window(traj.start(), traj.time(i.max(2) - 1)).ok()?;
                return Some(DynamicsError::ResidualExceeded { t, residual: r, partial: Box::new(partial) });
            }
        }
    }
    None
}

fn propagate_unaudited(seed: &SeedHistory, cfg: &ExactConfig) -> Result<Trajectory, DynamicsError> {
    let h = cfg.dt;
    if !h.is_finite() || h == 0.0 {
        return Err(DynamicsError::BadStep(h));
    }
    if h < 0.0 {
        return Err(DynamicsError::TimeReversed);
    }
    if !(cfg.smoothing > 0.0 && 4.0 * cfg.smoothing < 0.9) {
        return Err(DynamicsError::BadSmoothing(cfg.smoothing));
    }
    let beta_ref = seed.base_velocity();
    let gamma_ref = lorentz_gamma(beta_ref).map_err(|_| DynamicsError::Superluminal { t: 0.0, beta: beta_ref })?;
    let m = ((4.0 * cfg.smoothing / h).round() as usize).max(2);
    let (w1, w2) = derivative_weights(m, cfg.fit_degree, cfg.smoothing / h);

    // History knots.
    let (t_start, mut xi, mut bd, mut ac) = match &seed.kind {
        SeedKind::Table(tr) => {
            if (tr.dt() - h).abs() > 1e-9 * h {
                return Err(DynamicsError::BadTable(format!("table step {} differs from grid step {h}", tr.dt())));
            }
            (tr.end(), tr.xs().to_vec(), tr.betas().to_vec(), tr.beta_dots().to_vec())
        }
        kind => {
            let span = seed.span.max(3.0).max(2.0 * gamma_ref) + 4.0 * cfg.smoothing;
            let n_hist = (span / h).ceil() as usize + 1;
            let mut xi = Vec::with_capacity(n_hist);
            let mut bd = Vec::with_capacity(n_hist);
            let mut ac = Vec::with_capacity(n_hist);
            for j in 0..n_hist {
                let t = -((n_hist - 1 - j) as f64) * h;
                let (x, b, a) = seed_offset(kind, seed.amplitude, t);
                if !((beta_ref + b).abs() < 1.0) || !b.is_finite() {
                    return Err(DynamicsError::Superluminal { t, beta: beta_ref + b });
                }
                xi.push(x);
                bd.push(b);
                ac.push(a);
            }
            (0.0, xi, bd, ac)
        }
    };
    let n_hist = xi.len();
    let t0 = t_start - (n_hist - 1) as f64 * h;
    let time = |j: usize| t0 + j as f64 * h;
    // m extra knots so derivatives are known up to t_end.
    let n_out = ((cfg.t_end - t_start) / h).round().max(0.0) as usize;
    let n_new = n_out + m;
    let total = n_hist + n_new;
    xi.reserve(n_new);
    bd.reserve(n_new);
    ac.reserve(n_new);

    let meta = TrajectoryMeta {
        integrator: "exact-emitter".into(),
        step: h,
        seed: seed.describe(),
        base_velocity: beta_ref,
    };
    // Full trajectory from the knots whose derivatives are known.
    let build = |xi: &[f64], bd: &[f64], ac: &[f64], known: usize| -> Trajectory {
        let b = bd[..known].iter().map(|v| beta_ref + v).collect();
        Trajectory::from_offsets(t0, h, xi[..known].to_vec(), b, ac[..known].to_vec(), meta.clone())
            .expect("knots were checked on the way")
    };

    let mut arr_t: Vec<f64> = Vec::with_capacity(total);
    let mut arr_x: Vec<f64> = Vec::with_capacity(total);
    let mut known = n_hist; // knots with velocity and acceleration
    for j in n_hist..total {
        let tj = time(j);
        // Emit until two arrivals lie beyond tj.
        while arr_t.len() < 3 || arr_t[arr_t.len() - 3] <= tj {
            let k = arr_t.len();
            if k >= known {
                // The delay became shorter than the derivative window.
                return Err(DynamicsError::ArrivalFold { t: time(k), partial: Box::new(build(&xi, &bd, &ac, known)) });
            }
            let st = KinematicState::moving(beta_ref + bd[k], ac[k]).map_err(|_| DynamicsError::Superluminal {
                t: time(k),
                beta: beta_ref + bd[k],
            })?;
            let r = retarded_r_closed(&st).expect("subluminal");
            let l = retarded_l_closed(&st).expect("subluminal");
            let ta = time(k) + r;
            if let Some(&prev) = arr_t.last() {
                if ta <= prev {
                    return Err(DynamicsError::ArrivalFold { t: time(k), partial: Box::new(build(&xi, &bd, &ac, known)) });
                }
            }
            arr_t.push(ta);
            arr_x.push(xi[k] + l - beta_ref * r);
        }
        let mut k = arr_t.len() - 3;
        while k > 1 && arr_t[k] > tj {
            k -= 1;
        }
        xi.push(lagrange4(&arr_t[k - 1..k + 3], &arr_x[k - 1..k + 3], tj));
        bd.push(0.0);
        ac.push(0.0);

        if j >= n_hist + m {
            let c = j - m;
            let window = &xi[c - m..=c + m];
            let d1: f64 = w1.iter().zip(window).map(|(w, x)| w * x).sum::<f64>() / h;
            let d2: f64 = w2.iter().zip(window).map(|(w, x)| w * x).sum::<f64>() / (h * h);
            bd[c] = d1;
            ac[c] = d2;
            if !((beta_ref + d1).abs() < 1.0) {
                return Err(DynamicsError::LightBarrier { t: time(c), partial: Box::new(build(&xi, &bd, &ac, known)) });
            }
            known = c + 1;
        }
    }
    Ok(build(&xi, &bd, &ac, known.min(n_hist + n_out)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_differentiate_polynomials() {
        let (w1, w2) = derivative_weights(20, 4, 10.0);
        let h = 0.01;
        let f = |t: f64| 0.3 + 0.2 * t - 0.7 * t * t + 0.1 * t.powi(3) + 0.05 * t.powi(4);
        let s: Vec<f64> = (-20..=20).map(|i| f(0.25 + i as f64 * h)).collect();
        let d1: f64 = w1.iter().zip(&s).map(|(w, x)| w * x).sum::<f64>() / h;
        let d2: f64 = w2.iter().zip(&s).map(|(w, x)| w * x).sum::<f64>() / (h * h);
        let t = 0.25f64;
        assert!((d1 - (0.2 - 1.4 * t + 0.3 * t * t + 0.2 * t.powi(3))).abs() < 1e-9);
        assert!((d2 - (-1.4 + 0.6 * t + 0.6 * t * t)).abs() < 1e-7);
    }

    #[test]
    fn bump_is_consistent() {
        // Velocity and position from the exact antiderivatives agree with
        // numerical integration of the bump.
        let k = SeedKind::RestKick;
        let n = 20000;
        let h = 1.0 / n as f64;
        let (mut b, mut x) = (0.0, 0.0);
        let mut prev = seed_offset(&k, 1.0, -1.0).2;
        let mut prev_b = 0.0;
        for i in 1..=n {
            let t = -1.0 + i as f64 * h;
            let a = seed_offset(&k, 1.0, t).2;
            b += 0.5 * h * (a + prev);
            x += 0.5 * h * (b + prev_b);
            prev = a;
            prev_b = b;
        }
        let (x0, b0, a0) = seed_offset(&k, 1.0, 0.0);
        assert!((b - b0).abs() < 1e-8 && (x - x0).abs() < 1e-8);
        assert_eq!(a0, 0.0);
    }

    #[test]
    fn time_reversed_grid_refused() {
        let cfg = ExactConfig { dt: -1e-3, t_end: 1.0, ..Default::default() };
        assert!(matches!(propagate_exact(&SeedHistory::mode_kick(1e-6), &cfg), Err(DynamicsError::TimeReversed)));
    }

    #[test]
    fn superluminal_seed_refused() {
        let cfg = ExactConfig { t_end: 1.0, ..Default::default() };
        assert!(matches!(
            propagate_exact(&SeedHistory::uniform(0.9, 0.2), &cfg),
            Err(DynamicsError::Superluminal { .. })
        ));
        assert!(matches!(
            propagate_exact(&SeedHistory::uniform(1.0, 0.0), &cfg),
            Err(DynamicsError::Superluminal { .. })
        ));
    }
}
