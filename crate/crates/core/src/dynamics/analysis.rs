//! Growth-rate and spectral estimates from sampled motion.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::model::lorentz_gamma;
use crate::roots::{line_fit, real_unstable_root, rest_instability_rate};

use super::exact::{propagate_exact, ExactConfig, SeedHistory};
use super::trajectory::Trajectory;
use super::DynamicsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthEstimate {
    pub rate: f64,
    pub stderr: f64,
    /// Whether the envelope came from oscillation extrema.
    pub oscillatory: bool,
    pub points: usize,
}

/// Slope of log|envelope| for samples of a signal. The envelope is the
/// per-half-cycle peak when the signal oscillates through zero, otherwise
/// the signal's magnitude itself.
pub fn growth_rate_of_signal(t: &[f64], v: &[f64]) -> Result<GrowthEstimate, DynamicsError> {
    let n = t.len().min(v.len());
    if n < 3 {
        return Err(DynamicsError::TooFewSamples { need: 3, have: n });
    }
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let vmin = v.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let spread = v.iter().fold(0.0f64, |m, x| m.max((x - v[0]).abs()));
    if vmax == 0.0 || spread <= 1e-12 * vmax {
        return Err(DynamicsError::Degenerate);
    }

    // One envelope point per half-cycle: the refined peak of |v| between
    // consecutive sign changes.
    let mut et = Vec::new();
    let mut ev = Vec::new();
    let crossings: Vec<usize> = (1..n).filter(|&i| v[i - 1] * v[i] < 0.0).collect();
    for pair in crossings.windows(2) {
        let (i0, i1) = (pair[0], pair[1]);
        let k = (i0..i1).max_by(|&p, &q| v[p].abs().total_cmp(&v[q].abs())).unwrap_or(i0);
        let (mut tk, mut pk) = (t[k], v[k].abs());
        if k > 0 && k + 1 < n {
            let (a, b, c) = (v[k - 1].abs(), v[k].abs(), v[k + 1].abs());
            let den = a - 2.0 * b + c;
            if den < 0.0 {
                let off = 0.5 * (a - c) / den;
                tk += off * (t[k + 1] - t[k]);
                pk = b - 0.25 * (a - c) * off;
            }
        }
        et.push(tk);
        ev.push(pk);
    }
    let oscillatory = et.len() >= 4;
    let (xs, ys): (Vec<f64>, Vec<f64>) = if oscillatory {
        (et, ev.iter().map(|x| x.ln()).collect())
    } else {
        if vmin == 0.0 {
            return Err(DynamicsError::Degenerate);
        }
        (t[..n].to_vec(), v[..n].iter().map(|x| x.abs().ln()).collect())
    };
    let (slope, intercept, _) = line_fit(&xs, &ys);
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let stderr = if m > 2.0 { (ss / (m - 2.0) / sxx).sqrt() } else { f64::NAN };
    Ok(GrowthEstimate { rate: slope, stderr, oscillatory, points: xs.len() })
}

/// Growth rate of β − β_ref over the window.
pub fn estimate_growth_rate(traj: &Trajectory, window: (f64, f64)) -> Result<GrowthEstimate, DynamicsError> {
    let w = traj.window(window.0, window.1)?;
    let base = traj.base_velocity();
    let t: Vec<f64> = (0..w.len()).map(|i| w.time(i)).collect();
    let v: Vec<f64> = w.betas().iter().map(|b| b - base).collect();
    growth_rate_of_signal(&t, &v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPeak {
    /// Cycles per unit time.
    pub frequency: f64,
    pub angular: f64,
    pub magnitude: f64,
}

pub const MIN_SPECTRUM_SAMPLES: usize = 256;

/// Peaks of the Hann-windowed, mean-removed spectrum of uniform samples,
/// strongest first. Peaks below 10% of the strongest are dropped.
pub fn spectrum_of_signal(dt: f64, v: &[f64]) -> Result<Vec<SpectralPeak>, DynamicsError> {
    let n = v.len();
    if n < MIN_SPECTRUM_SAMPLES {
        return Err(DynamicsError::TooFewSamples { need: MIN_SPECTRUM_SAMPLES, have: n });
    }
    let mean = v.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = v
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos();
            Complex::new((x - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf[..n / 2 + 1].iter().map(|c| c.norm()).collect();
    let top = mag.iter().skip(1).fold(0.0f64, |m, x| m.max(*x));
    if top == 0.0 {
        return Err(DynamicsError::Degenerate);
    }
    let df = 1.0 / (n as f64 * dt);
    let mut peaks = Vec::new();
    for k in 1..mag.len() - 1 {
        let (a, b, c) = (mag[k - 1], mag[k], mag[k + 1]);
        if b > a && b >= c && b >= 0.1 * top {
            let den = a - 2.0 * b + c;
            let off = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            let f = (k as f64 + off) * df;
            peaks.push(SpectralPeak { frequency: f, angular: 2.0 * PI * f, magnitude: b - 0.25 * (a - c) * off });
        }
    }
    peaks.sort_by(|p, q| q.magnitude.total_cmp(&p.magnitude).then(p.frequency.total_cmp(&q.frequency)));
    Ok(peaks)
}

/// Spectral peaks of β − β_ref over the window.
pub fn estimate_spectrum(traj: &Trajectory, window: (f64, f64)) -> Result<Vec<SpectralPeak>, DynamicsError> {
    let w = traj.window(window.0, window.1)?;
    let base = traj.base_velocity();
    let v: Vec<f64> = w.betas().iter().map(|b| b - base).collect();
    spectrum_of_signal(w.dt(), &v)
}

/// Outcome of a kicked uniform-motion measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedRun {
    pub beta: f64,
    pub gamma: f64,
    /// Growth rate the exact propagator sustains.
    pub measured: f64,
    /// Spread of the log gain over the comparison window at that rate.
    pub gain_spread: f64,
    /// Real root of the moving-frame characteristic equation divided by γ.
    pub predicted: f64,
    /// The rest rate divided by γ.
    pub rest_scaled: f64,
    /// Where a free run seeded at the measured rate stopped, if before
    /// `t_end`.
    pub breakdown: Option<f64>,
}

/// Log of the factor one delay of exact propagation applies to an
/// exponential kick on uniform motion, averaged over the first delay
/// (where every emitter lies in the seed), with its spread.
pub fn exponential_gain(beta: f64, rate: f64, kick: f64, cfg: &ExactConfig) -> Result<(f64, f64), DynamicsError> {
    let gamma = lorentz_gamma(beta).map_err(|_| DynamicsError::Superluminal { t: 0.0, beta })?;
    let cfg = ExactConfig { t_end: 0.9 * gamma, ..*cfg };
    let traj = propagate_exact(&SeedHistory::exponential(beta, rate, kick), &cfg)?;
    let (a, b) = (0.2 * gamma, 0.8 * gamma);
    let n = 64;
    let logs: Vec<f64> = (0..=n)
        .map(|i| {
            let t = a + (b - a) * i as f64 / n as f64;
            (traj.eval_offset(t).0 / (kick / rate * (rate * t).exp())).ln()
        })
        .collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    let spread = logs.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    if !mean.is_finite() {
        return Err(DynamicsError::Degenerate);
    }
    Ok((mean, spread))
}

/// Kicks uniform motion at `beta` with exponential perturbations and finds
/// the rate the exact propagator reproduces with unit gain over one delay.
/// Any exponential seed keeps its own rate through the first delay, so the
/// rate is read from the gain rather than from a fitted slope. Rates from
/// 0.05 to 10 are scanned for a sign change, then bisected.
pub fn perturbed_uniform_run(beta: f64, kick: f64, t_end: f64, cfg: &ExactConfig) -> Result<PerturbedRun, DynamicsError> {
    let gamma = lorentz_gamma(beta).map_err(|_| DynamicsError::Superluminal { t: 0.0, beta })?;
    let gain = |mu: f64| exponential_gain(beta, mu, kick, cfg).map(|g| g.0);
    let mut lo = 0.05;
    let mut g_lo = gain(lo)?;
    let mut hi = lo;
    let mut found = false;
    while hi < 10.0 {
        hi = lo + 0.1;
        let g_hi = gain(hi)?;
        if g_lo.signum() != g_hi.signum() {
            found = true;
            break;
        }
        (lo, g_lo) = (hi, g_hi);
    }
    if !found {
        return Err(DynamicsError::Degenerate);
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let g = gain(mid)?;
        if g.signum() == g_lo.signum() {
            (lo, g_lo) = (mid, g);
        } else {
            hi = mid;
        }
    }
    let measured = 0.5 * (lo + hi);
    let gain_spread = exponential_gain(beta, measured, kick, cfg)?.1;
    let free = propagate_exact(
        &SeedHistory::exponential(beta, measured, kick),
        &ExactConfig { t_end, ..*cfg },
    );
    let breakdown = free.err().and_then(|e| e.breakdown_time());
    let predicted = real_unstable_root(beta).map_err(|_| DynamicsError::Superluminal { t: 0.0, beta })? / gamma;
    Ok(PerturbedRun {
        beta,
        gamma,
        measured,
        gain_spread,
        predicted,
        rest_scaled: rest_instability_rate() / gamma,
        breakdown,
    })
}

/// From t = 0.5 until |β − β_ref| first exceeds 10³ × kick.
pub fn linear_window(traj: &Trajectory, kick: f64) -> Result<(f64, f64), DynamicsError> {
    let base = traj.base_velocity();
    let i0 = traj.index_at_or_after(0.5);
    let mut end = traj.end();
    for i in i0..traj.len() {
        if (traj.betas()[i] - base).abs() > 1e3 * kick.abs() {
            end = traj.time(i);
            break;
        }
    }
    if end - 0.5 < 0.5 {
        return Err(DynamicsError::BadWindow(0.5, end));
    }
    Ok((0.5, end))
}
