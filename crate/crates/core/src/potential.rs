//! Self-potential of the dumbbell and its acceleration-dependent part.
//!
//! Energies are in units of m_e c² with m_e = ħα/(4dc), so the prefactor
//! ħαc/(4d) of the closed form is exactly one.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive};
use thiserror::Error;

use crate::geometry::potential_denominator;
use crate::model::{KinematicState, ModelError, PhysicalConstants};

#[derive(Debug, Error, PartialEq)]
pub enum PotentialError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("series index must be at least 1, got {0}")]
    BadIndex(u32),
    #[error("series diverges for y = {0} >= 1")]
    Divergent(f64),
}

/// qₙ = (2n − 1)!! / (2ⁿ n!), the mean of cos²ⁿ over a period.
pub fn q_coeff(n: u32) -> Result<BigRational, PotentialError> {
    if n < 1 {
        return Err(PotentialError::BadIndex(n));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 1..=n {
        num *= BigInt::from(2 * k - 1);
        den *= BigInt::from(2 * k);
    }
    Ok(BigRational::new(num, den))
}

pub fn q_coeff_f64(n: u32) -> Result<f64, PotentialError> {
    Ok(q_coeff(n)?.to_f64().unwrap_or(f64::NAN))
}

/// Composite Simpson estimate of ∫₀¹ cos²ⁿ(2πx) dx.
pub fn q_quadrature(n: u32, intervals: usize) -> f64 {
    let m = intervals + intervals % 2;
    let h = 1.0 / m as f64;
    let f = |x: f64| (2.0 * std::f64::consts::PI * x).cos().powi(2 * n as i32);
    let mut s = f(0.0) + f(1.0);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    s * h / 3.0
}

/// U, Q and the series variable at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSample {
    pub u: f64,
    pub q: f64,
    pub gamma: f64,
    pub y: f64,
}

pub fn sample(s: &KinematicState) -> Result<PotentialSample, PotentialError> {
    Ok(PotentialSample { u: self_potential_closed(s)?, q: quantum_potential(s)?, gamma: s.gamma()?, y: s.y()? })
}

/// U = 1/(r − lβ) in m_e c² units.
pub fn self_potential_closed(s: &KinematicState) -> Result<f64, PotentialError> {
    Ok(1.0 / potential_denominator(s)?)
}

/// γ + γ Σ_{n=1..N} qₙ (−y)ⁿ. Errors for y ≥ 1, where the sum diverges.
pub fn self_potential_series(s: &KinematicState, n_terms: u32) -> Result<f64, PotentialError> {
    Ok(*self_potential_partial_sums(s, n_terms)?.last().unwrap_or(&s.gamma()?))
}

/// Partial sums for N = 1 … n_terms.
pub fn self_potential_partial_sums(s: &KinematicState, n_terms: u32) -> Result<Vec<f64>, PotentialError> {
    let g = s.gamma()?;
    let y = s.y()?;
    if y >= 1.0 {
        return Err(PotentialError::Divergent(y));
    }
    let mut out = Vec::with_capacity(n_terms as usize);
    let mut acc = 0.0;
    let mut term = 1.0;
    for n in 1..=n_terms {
        // qₙ/qₙ₋₁ = (2n − 1)/(2n)
        term *= -y * (2 * n - 1) as f64 / (2 * n) as f64;
        acc += term;
        out.push(g + g * acc);
    }
    Ok(out)
}

/// Q = −γ(1 − 1/√(1 + y)); the part of U that vanishes without acceleration.
pub fn quantum_potential(s: &KinematicState) -> Result<f64, PotentialError> {
    let g = s.gamma()?;
    let den = potential_denominator(s)?;
    // 1/den = γ/√(1+y)
    Ok(1.0 / den - g)
}

/// Exact check that ħ²α²/(2m·32r_e²) = mc² when m = ħα/(4dc), r_e = d/2.
/// The symbols are replaced by the given rationals.
pub fn prefactor_identity(hbar: &BigRational, alpha: &BigRational, c: &BigRational, d: &BigRational) -> bool {
    let m = hbar * alpha / (BigRational::from_integer(4.into()) * d * c);
    let r_e = d / BigRational::from_integer(2.into());
    let lhs = hbar * hbar * alpha * alpha / (BigRational::from_integer(64.into()) * &m * &r_e * &r_e);
    lhs == &m * c * c
}

/// Two-term conservative approximation with position in units of d and
/// energy in units of m_e c²: Q_c = −(x²/2 − 3x⁴/8).
pub fn duffing_potential(x: f64) -> f64 {
    let x2 = x * x;
    -(0.5 * x2 - 0.375 * x2 * x2)
}

/// −dQ_c/dx.
pub fn duffing_force(x: f64) -> f64 {
    x - 1.5 * x * x * x
}

/// Points where the Duffing force vanishes, ascending.
pub fn duffing_stationary_points() -> [f64; 3] {
    let s = (2.0f64 / 3.0).sqrt();
    [-s, 0.0, s]
}

/// ħω/2 with ω = αc/(2d), in joules; the SI scale of [`duffing_potential`].
pub fn duffing_energy_scale(k: &PhysicalConstants) -> f64 {
    let d = crate::model::electron_size(k);
    k.hbar * k.alpha * k.c / (4.0 * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(b: f64, bd: f64) -> KinematicState {
        KinematicState::moving(b, bd).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn q_sequence() {
        let want = [r(1, 2), r(3, 8), r(5, 16), r(35, 128), r(63, 256)];
        for (n, w) in (1..=5).zip(want) {
            assert_eq!(q_coeff(n).unwrap(), w);
        }
        assert!(q_coeff(0).is_err());
        assert!((q_quadrature(1, 64) - 0.5).abs() < 1e-14);
        for n in 1..=8 {
            assert!((q_quadrature(n, 256) - q_coeff_f64(n).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_values() {
        assert_eq!(self_potential_closed(&st(0.0, 0.0)).unwrap(), 1.0);
        assert!((self_potential_closed(&st(0.6, 0.0)).unwrap() - 1.25).abs() < 1e-15);
        assert!((self_potential_closed(&st(0.0, 0.5)).unwrap() - 1.0 / 1.25f64.sqrt()).abs() < 1e-15);
        assert!((self_potential_closed(&st(0.0, 0.5)).unwrap() - 0.8944).abs() < 1e-4);
    }

    #[test]
    fn quantum_values() {
        assert_eq!(quantum_potential(&st(0.7, 0.0)).unwrap(), 0.0);
        let q = quantum_potential(&st(0.0, 0.5)).unwrap();
        assert!((q + (1.0 - 1.0 / 1.25f64.sqrt())).abs() < 1e-15);
        assert!((q + 0.1056).abs() < 1e-4);
        let far = quantum_potential(&st(0.3, 1e6)).unwrap();
        let g = st(0.3, 0.0).gamma().unwrap();
        assert!((far + g).abs() < 1e-6 && far > -g);
    }

    #[test]
    fn series_cases() {
        assert_eq!(self_potential_series(&st(0.4, 0.0), 7).unwrap(), st(0.4, 0.0).gamma().unwrap());
        let s = st(0.2, 0.3);
        let (g, y) = (s.gamma().unwrap(), s.y().unwrap());
        assert!((self_potential_series(&s, 1).unwrap() - g * (1.0 - y / 2.0)).abs() < 1e-15);
        assert!(matches!(self_potential_series(&st(0.0, 1.0), 3), Err(PotentialError::Divergent(_))));
    }

    #[test]
    fn prefactor() {
        assert!(prefactor_identity(&r(7, 3), &r(1, 137), &r(5, 1), &r(2, 9)));
        assert!(prefactor_identity(&r(1, 1), &r(1, 1), &r(1, 1), &r(1, 1)));
    }

    #[test]
    fn duffing() {
        assert_eq!(duffing_potential(0.0), 0.0);
        for x in duffing_stationary_points() {
            assert!(duffing_force(x).abs() < 1e-15);
        }
        // Origin is a maximum.
        assert!(duffing_potential(1e-3) < 0.0 && duffing_potential(-1e-3) < 0.0);
        assert_eq!(duffing_potential(0.7), duffing_potential(-0.7));
    }

    #[test]
    fn duffing_from_series_terms() {
        // Harmonic motion x = cos t at unit frequency: a = −x, β small,
        // so y ≈ x² and the first two series terms give Q_c.
        for &x in &[0.1, 0.3, -0.45] {
            let y = x * x;
            let two = -q_coeff_f64(1).unwrap() * y + q_coeff_f64(2).unwrap() * y * y;
            assert!((two - duffing_potential(x)).abs() < 1e-15);
        }
    }
}
