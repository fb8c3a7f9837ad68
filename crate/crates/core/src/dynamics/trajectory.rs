use crate::geometry::History;
use crate::model::KinematicState;

use super::DynamicsError;

/// Provenance of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub integrator: String,
    pub step: f64,
    pub seed: String,
    /// Velocity of the reference uniform motion perturbations are measured
    /// against (0 for motion about rest).
    pub base_velocity: f64,
}

/// Samples (x, β, β̇) on a uniform time grid with a quintic Hermite dense
/// evaluator, so position, velocity and acceleration stay consistent
/// between knots.
///
/// Alongside x the offset ξ = x − β_ref·t from the reference motion is
/// kept; interpolation works on ξ so rounding in x (which grows with t)
/// does not reach the acceleration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    t0: f64,
    dt: f64,
    x: Vec<f64>,
    xi: Vec<f64>,
    beta: Vec<f64>,
    beta_dot: Vec<f64>,
    meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(
        t0: f64,
        dt: f64,
        x: Vec<f64>,
        beta: Vec<f64>,
        beta_dot: Vec<f64>,
        meta: TrajectoryMeta,
    ) -> Result<Self, DynamicsError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(DynamicsError::BadStep(dt));
        }
        let base = meta.base_velocity;
        let xi = x.iter().enumerate().map(|(i, x)| x - base * (t0 + i as f64 * dt)).collect();
        Self::checked(t0, dt, x, xi, beta, beta_dot, meta)
    }

    /// Builds from offsets ξ relative to `meta.base_velocity`.
    pub fn from_offsets(
        t0: f64,
        dt: f64,
        xi: Vec<f64>,
        beta: Vec<f64>,
        beta_dot: Vec<f64>,
        meta: TrajectoryMeta,
    ) -> Result<Self, DynamicsError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(DynamicsError::BadStep(dt));
        }
        let base = meta.base_velocity;
        let x = xi.iter().enumerate().map(|(i, v)| base * (t0 + i as f64 * dt) + v).collect();
        Self::checked(t0, dt, x, xi, beta, beta_dot, meta)
    }

    fn checked(
        t0: f64,
        dt: f64,
        x: Vec<f64>,
        xi: Vec<f64>,
        beta: Vec<f64>,
        beta_dot: Vec<f64>,
        meta: TrajectoryMeta,
    ) -> Result<Self, DynamicsError> {
        if x.len() < 2 || x.len() != beta.len() || x.len() != beta_dot.len() {
            return Err(DynamicsError::BadTable("need at least two knots with matching columns".into()));
        }
        if let Some(i) = beta.iter().position(|b| !(b.abs() < 1.0)) {
            return Err(DynamicsError::Superluminal { t: t0 + i as f64 * dt, beta: beta[i] });
        }
        Ok(Trajectory { t0, dt, x, xi, beta, beta_dot, meta })
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    /// Velocity of the reference motion the offsets are taken against.
    pub fn base_velocity(&self) -> f64 {
        self.meta.base_velocity
    }

    /// Replaces the provenance text, keeping the reference motion.
    pub fn set_provenance(&mut self, integrator: &str, seed: &str) {
        self.meta.integrator = integrator.into();
        self.meta.seed = seed.into();
    }

    /// Builds a trajectory from rows (t, x, β, β̇) on a uniform grid.
    pub fn from_rows(rows: &[[f64; 4]], meta: TrajectoryMeta) -> Result<Self, DynamicsError> {
        if rows.len() < 2 {
            return Err(DynamicsError::BadTable("need at least two rows".into()));
        }
        let t0 = rows[0][0];
        let dt = (rows[rows.len() - 1][0] - t0) / (rows.len() - 1) as f64;
        for (i, r) in rows.iter().enumerate() {
            let want = t0 + i as f64 * dt;
            if (r[0] - want).abs() > 1e-9 * dt.max(want.abs()) {
                return Err(DynamicsError::BadTable(format!("row {} is off the uniform grid", i + 1)));
            }
        }
        let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
        Self::new(t0, dt, col(1), col(2), col(3), TrajectoryMeta { step: dt, ..meta })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn start(&self) -> f64 {
        self.t0
    }

    pub fn end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn xs(&self) -> &[f64] {
        &self.x
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    pub fn beta_dots(&self) -> &[f64] {
        &self.beta_dot
    }

    pub fn knot(&self, i: usize) -> KinematicState {
        KinematicState {
            t: self.time(i),
            x: self.x[i],
            beta: self.beta[i],
            beta_dot: self.beta_dot[i],
            beta_ddot: None,
            beta_dddot: None,
        }
    }

    /// Index of the first knot at or after t.
    pub fn index_at_or_after(&self, t: f64) -> usize {
        (((t - self.t0) / self.dt).ceil().max(0.0) as usize).min(self.len() - 1)
    }

    /// Dense (x, β, β̇) at time t, clamped to the knot range.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let base = self.meta.base_velocity;
        let (xi, v, a) = self.eval_offset(t);
        (base * t + xi, base + v, a)
    }

    /// Dense (ξ, ξ', ξ'') at time t, clamped to the knot range.
    pub fn eval_offset(&self, t: f64) -> (f64, f64, f64) {
        let n = self.len();
        let base = self.meta.base_velocity;
        let s = (t - self.t0) / self.dt;
        let j = (s.floor().max(0.0) as usize).min(n - 2);
        let u = s - j as f64;
        let h = self.dt;
        let (x0, v0, a0) = (self.xi[j], (self.beta[j] - base) * h, self.beta_dot[j] * h * h);
        let (x1, v1, a1) = (self.xi[j + 1], (self.beta[j + 1] - base) * h, self.beta_dot[j + 1] * h * h);
        let (u2, u3) = (u * u, u * u * u);
        let (u4, u5) = (u3 * u, u3 * u2);

        // Written in the knot difference so rounding scales with the step,
        // not with |ξ|.
        let d = x1 - x0;
        let x = x0
            + (10.0 * u3 - 15.0 * u4 + 6.0 * u5) * d
            + (u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5) * v0
            + (0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5) * a0
            + (-4.0 * u3 + 7.0 * u4 - 3.0 * u5) * v1
            + (0.5 * u3 - u4 + 0.5 * u5) * a1;
        let dx = (30.0 * u2 - 60.0 * u3 + 30.0 * u4) * d
            + (1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4) * v0
            + (u - 4.5 * u2 + 6.0 * u3 - 2.5 * u4) * a0
            + (-12.0 * u2 + 28.0 * u3 - 15.0 * u4) * v1
            + (1.5 * u2 - 4.0 * u3 + 2.5 * u4) * a1;
        let ddx = (60.0 * u - 180.0 * u2 + 120.0 * u3) * d
            + (-36.0 * u + 96.0 * u2 - 60.0 * u3) * v0
            + (-24.0 * u + 84.0 * u2 - 60.0 * u3) * v1
            + (1.0 - 9.0 * u + 18.0 * u2 - 10.0 * u3) * a0
            + (3.0 * u - 12.0 * u2 + 10.0 * u3) * a1;
        (x, dx / h, ddx / (h * h))
    }

    pub fn state_at(&self, t: f64) -> KinematicState {
        let (x, beta, beta_dot) = self.eval(t);
        KinematicState { t, x, beta, beta_dot, beta_ddot: None, beta_dddot: None }
    }

    /// The same motion run backwards: t → −t, x unchanged, β → −β.
    pub fn reversed(&self) -> Trajectory {
        let rev = |v: &[f64], s: f64| v.iter().rev().map(|a| s * a).collect::<Vec<_>>();
        // ξ keeps its values: x(−t') + β_ref·t' = ξ(t) with β_ref negated.
        Trajectory {
            t0: -self.end(),
            dt: self.dt,
            x: rev(&self.x, 1.0),
            xi: rev(&self.xi, 1.0),
            beta: rev(&self.beta, -1.0),
            beta_dot: rev(&self.beta_dot, 1.0),
            meta: TrajectoryMeta {
                seed: format!("reversed {}", self.meta.seed),
                base_velocity: -self.meta.base_velocity,
                ..self.meta.clone()
            },
        }
    }

    /// Keeps knots in [t_from, t_to].
    pub fn window(&self, t_from: f64, t_to: f64) -> Result<Trajectory, DynamicsError> {
        let i0 = self.index_at_or_after(t_from);
        let i1 = (((t_to - self.t0) / self.dt).floor().max(0.0) as usize).min(self.len() - 1);
        if i1 <= i0 {
            return Err(DynamicsError::BadWindow(t_from, t_to));
        }
        Self::checked(
            self.time(i0),
            self.dt,
            self.x[i0..=i1].to_vec(),
            self.xi[i0..=i1].to_vec(),
            self.beta[i0..=i1].to_vec(),
            self.beta_dot[i0..=i1].to_vec(),
            self.meta.clone(),
        )
    }
}

impl History for Trajectory {
    fn position(&self, t: f64) -> f64 {
        self.eval(t).0
    }
    fn start(&self) -> f64 {
        self.t0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> TrajectoryMeta {
        TrajectoryMeta { integrator: "test".into(), step: 0.1, seed: "none".into(), base_velocity: 0.0 }
    }

    #[test]
    fn quintic_reproduces_quintics() {
        let p = |t: f64| 0.01 * (1.0 + t - 0.5 * t * t + 0.2 * t.powi(3) - 0.05 * t.powi(4) + 0.01 * t.powi(5));
        let dp = |t: f64| 0.01 * (1.0 - t + 0.6 * t * t - 0.2 * t.powi(3) + 0.05 * t.powi(4));
        let ddp = |t: f64| 0.01 * (-1.0 + 1.2 * t - 0.6 * t * t + 0.2 * t.powi(3));
        let n = 11;
        let ts: Vec<f64> = (0..n).map(|i| i as f64 * 0.1).collect();
        let tr = Trajectory::new(
            0.0,
            0.1,
            ts.iter().map(|&t| p(t)).collect(),
            ts.iter().map(|&t| dp(t)).collect(),
            ts.iter().map(|&t| ddp(t)).collect(),
            meta(),
        )
        .unwrap();
        for t in [0.0, 0.037, 0.55, 0.999, 1.0] {
            let (x, v, a) = tr.eval(t);
            assert!((x - p(t)).abs() < 1e-15);
            assert!((v - dp(t)).abs() < 1e-13);
            assert!((a - ddp(t)).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Trajectory::new(0.0, 0.1, vec![0.0; 3], vec![0.0, 1.0, 0.0], vec![0.0; 3], meta()).is_err());
        assert!(Trajectory::new(0.0, -0.1, vec![0.0; 3], vec![0.0; 3], vec![0.0; 3], meta()).is_err());
        assert!(Trajectory::from_rows(&[[0.0, 0.0, 0.0, 0.0], [0.1, 0.0, 0.0, 0.0], [0.35, 0.0, 0.0, 0.0]], meta()).is_err());
    }

    #[test]
    fn reversal_flips_velocity() {
        let tr = Trajectory::new(0.0, 0.5, vec![0.0, 0.1, 0.3], vec![0.1, 0.3, 0.5], vec![0.4, 0.4, 0.4], meta()).unwrap();
        let r = tr.reversed();
        assert_eq!(r.start(), -1.0);
        assert_eq!(r.knot(0).x, 0.3);
        assert_eq!(r.knot(0).beta, -0.5);
        assert_eq!(r.knot(0).beta_dot, 0.4);
    }

    #[test]
    fn offsets_track_the_reference_motion() {
        let m = TrajectoryMeta { base_velocity: 0.6, ..meta() };
        let tr = Trajectory::from_offsets(10.0, 0.5, vec![0.0, 1e-9, 3e-9], vec![0.6; 3], vec![0.0; 3], m).unwrap();
        assert_eq!(tr.xs()[2], 0.6 * 11.0 + 3e-9);
        let xi = tr.eval_offset(10.25).0;
        assert!(xi > 0.0 && xi < 1e-9);
        let r = tr.reversed();
        assert_eq!(r.base_velocity(), -0.6);
        assert_eq!(r.eval_offset(-11.0).0, 3e-9);
        assert_eq!(r.eval(-11.0).0, tr.xs()[2]);
    }
}
