//! Physical constants, the c = d = 1 unit system and the kinematic state.
//!
//! Everything outside this module works in units where the speed of light
//! and the dumbbell size are both one, so time is measured in d/c.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use thiserror::Error;

/// Environment variable naming a constants file.
pub const CONSTANTS_ENV: &str = "ZITTERLAB_CONSTANTS";

/// Classical electron radius e²/(4πε₀ m_e c²), CODATA 2018 (m).
pub const CLASSICAL_ELECTRON_RADIUS: f64 = 2.817_940_326_2e-15;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("speed |beta| = {0} is not below the light barrier")]
    Superluminal(f64),
    #[error("constant `{0}` must be strictly positive and finite")]
    NonPositive(&'static str),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("cannot read constants file: {0}")]
    Io(String),
}

/// SI constants. Defaults are CODATA 2018.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub c: f64,
    pub hbar: f64,
    pub alpha: f64,
    pub eps0: f64,
    pub e_charge: f64,
    pub m_electron: f64,
    /// Replaces the derived dumbbell size when set.
    pub d_override: Option<f64>,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

impl PhysicalConstants {
    pub fn codata2018() -> Self {
        PhysicalConstants {
            c: 299_792_458.0,
            hbar: 1.054_571_817e-34,
            alpha: 7.297_352_569_3e-3,
            eps0: 8.854_187_812_8e-12,
            e_charge: 1.602_176_634e-19,
            m_electron: 9.109_383_701_5e-31,
            d_override: None,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let fields = [
            ("c", self.c),
            ("hbar", self.hbar),
            ("alpha", self.alpha),
            ("eps0", self.eps0),
            ("e_charge", self.e_charge),
            ("m_electron", self.m_electron),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(ModelError::NonPositive(name));
            }
        }
        if let Some(d) = self.d_override {
            if !(d.is_finite() && d > 0.0) {
                return Err(ModelError::NonPositive("d_override"));
            }
        }
        Ok(())
    }

    /// Relative mismatch |ħαc − e²/(4πε₀)| / (ħαc).
    pub fn sommerfeld_mismatch(&self) -> f64 {
        let lhs = self.hbar * self.alpha * self.c;
        let rhs = self.e_charge * self.e_charge / (4.0 * PI * self.eps0);
        (lhs - rhs).abs() / lhs
    }

    /// Parses the flat `key = value` format. Blank lines and `#` comments are
    /// skipped; keys not listed in the format are rejected.
    pub fn parse_config(text: &str) -> Result<Self, ModelError> {
        let mut k = Self::codata2018();
        let mut seen = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ModelError::Config {
                line: line_no,
                msg: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let value = parse_decimal(value.trim()).ok_or_else(|| ModelError::Config {
                line: line_no,
                msg: format!("`{}` is not a decimal number", value.trim()),
            })?;
            if seen.insert(key.to_string(), line_no).is_some() {
                return Err(ModelError::Config { line: line_no, msg: format!("duplicate key `{key}`") });
            }
            match key {
                "c" => k.c = value,
                "hbar" => k.hbar = value,
                "alpha" => k.alpha = value,
                "eps0" => k.eps0 = value,
                "m_electron" => k.m_electron = value,
                "d_override" => k.d_override = Some(value),
                other => {
                    return Err(ModelError::Config { line: line_no, msg: format!("unknown key `{other}`") })
                }
            }
        }
        k.validate()?;
        Ok(k)
    }

    pub fn from_file(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::Io(format!("{}: {e}", path.display())))?;
        Self::parse_config(&text)
    }

    /// Reads the file named by `ZITTERLAB_CONSTANTS`, or the defaults.
    pub fn from_env() -> Result<Self, ModelError> {
        match std::env::var_os(CONSTANTS_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::codata2018()),
        }
    }
}

// Plain decimal literals only: digits, optional sign, point and exponent.
// Rust's float parser rounds correctly, so the value is the nearest double
// to the exact decimal.
fn parse_decimal(s: &str) -> Option<f64> {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
    let points = mantissa.chars().filter(|&c| c == '.').count();
    if digits == 0 || points > 1 || mantissa.chars().any(|c| !(c.is_ascii_digit() || c == '.')) {
        return None;
    }
    if let Some(e) = exponent {
        let e = e.strip_prefix(['+', '-']).unwrap_or(e);
        if e.is_empty() || !e.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
    }
    s.parse().ok()
}

/// Dumbbell size d = ħα/(4 m_e c), in metres.
pub fn electron_size(k: &PhysicalConstants) -> f64 {
    k.d_override
        .unwrap_or(k.hbar * k.alpha / (4.0 * k.m_electron * k.c))
}

/// Dumbbell radius r_e = d/2.
pub fn dumbbell_radius(k: &PhysicalConstants) -> f64 {
    electron_size(k) / 2.0
}

/// Oscillation period 4π r_e / c for a radius in metres.
pub fn zitter_period(r_e: f64, c: f64) -> f64 {
    4.0 * PI * r_e / c
}

pub fn lorentz_gamma(beta: f64) -> Result<f64, ModelError> {
    if !(beta.abs() < 1.0) {
        return Err(ModelError::Superluminal(beta));
    }
    Ok(1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelScales {
    /// Dumbbell size (m).
    pub d: f64,
    /// d/c (s).
    pub time_unit: f64,
    pub c: f64,
}

impl ModelScales {
    pub fn new(k: &PhysicalConstants) -> Result<Self, ModelError> {
        k.validate()?;
        let d = electron_size(k);
        Ok(ModelScales { d, time_unit: d / k.c, c: k.c })
    }

    /// m_e c² in joules.
    pub fn rest_energy(&self, k: &PhysicalConstants) -> f64 {
        k.m_electron * k.c * k.c
    }

    pub fn to_si(&self, s: &KinematicState) -> SiState {
        let acc = self.c * self.c / self.d;
        SiState {
            t: s.t * self.time_unit,
            x: s.x * self.d,
            v: s.beta * self.c,
            a: s.beta_dot * acc,
            jerk: s.beta_ddot.map(|j| j * acc / self.time_unit),
            snap: s.beta_dddot.map(|j| j * acc / (self.time_unit * self.time_unit)),
        }
    }

    pub fn from_si(&self, s: &SiState) -> KinematicState {
        let acc = self.c * self.c / self.d;
        KinematicState {
            t: s.t / self.time_unit,
            x: s.x / self.d,
            beta: s.v / self.c,
            beta_dot: s.a / acc,
            beta_ddot: s.jerk.map(|j| j / acc * self.time_unit),
            beta_dddot: s.snap.map(|j| j / acc * self.time_unit * self.time_unit),
        }
    }
}

/// The same kinematics in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiState {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub a: f64,
    pub jerk: Option<f64>,
    pub snap: Option<f64>,
}

/// One-dimensional kinematics of the dumbbell centre in c = d = 1 units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KinematicState {
    pub t: f64,
    pub x: f64,
    pub beta: f64,
    pub beta_dot: f64,
    pub beta_ddot: Option<f64>,
    pub beta_dddot: Option<f64>,
}

impl KinematicState {
    pub fn new(t: f64, x: f64, beta: f64, beta_dot: f64) -> Result<Self, ModelError> {
        if !(beta.abs() < 1.0) {
            return Err(ModelError::Superluminal(beta));
        }
        Ok(KinematicState { t, x, beta, beta_dot, beta_ddot: None, beta_dddot: None })
    }

    /// State with only velocity and acceleration set.
    pub fn moving(beta: f64, beta_dot: f64) -> Result<Self, ModelError> {
        Self::new(0.0, 0.0, beta, beta_dot)
    }

    pub fn gamma(&self) -> Result<f64, ModelError> {
        lorentz_gamma(self.beta)
    }

    /// y = γ⁶β̇², the argument of the acceleration corrections.
    pub fn y(&self) -> Result<f64, ModelError> {
        let g = self.gamma()?;
        Ok(g.powi(6) * self.beta_dot * self.beta_dot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn dumbbell_size_codata() {
        let k = PhysicalConstants::codata2018();
        let d = electron_size(&k);
        assert!(close(d, 7.04e-16, 1e-3), "{d}");
        assert!(close(dumbbell_radius(&k), 3.52e-16, 5e-3));
    }

    #[test]
    fn unit_scaling_gives_unit_size() {
        let k = PhysicalConstants { c: 1.0, hbar: 4.0, alpha: 1.0, m_electron: 1.0, ..PhysicalConstants::codata2018() };
        assert_eq!(electron_size(&k), 1.0);
    }

    #[test]
    fn periods() {
        let c = PhysicalConstants::codata2018().c;
        assert!(close(zitter_period(2.818e-15, c), 1.18e-22, 1e-2));
        assert!(close(zitter_period(3.52e-16, c), 1.475e-23, 1e-3));
        assert!(close(zitter_period(c / (4.0 * PI), c), 1.0, 1e-15));
    }

    #[test]
    fn gamma_values() {
        assert_eq!(lorentz_gamma(0.0).unwrap(), 1.0);
        assert!(close(lorentz_gamma(0.6).unwrap(), 1.25, 1e-15));
        assert!(close(lorentz_gamma(0.99).unwrap(), 7.0888, 1e-4));
        assert!(lorentz_gamma(1.0).is_err());
        assert!(lorentz_gamma(-1.5).is_err());
        assert!(lorentz_gamma(f64::NAN).is_err());
    }

    #[test]
    fn sommerfeld() {
        assert!(PhysicalConstants::codata2018().sommerfeld_mismatch() < 1e-3);
    }

    #[test]
    fn doubling_c_halves_d() {
        let k = PhysicalConstants::codata2018();
        let k2 = PhysicalConstants { c: 2.0 * k.c, ..k };
        assert!(close(electron_size(&k2), electron_size(&k) / 2.0, 1e-15));
    }

    #[test]
    fn config_parsing() {
        let k = PhysicalConstants::parse_config("# test\nc = 1\nhbar=4\n alpha = 1.0e0 \nm_electron = 1\n").unwrap();
        assert_eq!(electron_size(&k), 1.0);
        let k = PhysicalConstants::parse_config("d_override = 2.5e-16").unwrap();
        assert_eq!(electron_size(&k), 2.5e-16);
        assert!(PhysicalConstants::parse_config("mass = 1").is_err());
        assert!(PhysicalConstants::parse_config("c = fast").is_err());
        assert!(PhysicalConstants::parse_config("c = inf").is_err());
        assert!(PhysicalConstants::parse_config("c = 0x10").is_err());
        assert!(PhysicalConstants::parse_config("c = -1").is_err());
        assert!(PhysicalConstants::parse_config("c = 1\nc = 2").is_err());
        assert!(PhysicalConstants::parse_config("c 1").is_err());
    }

    #[test]
    fn si_round_trip() {
        let s = ModelScales::new(&PhysicalConstants::codata2018()).unwrap();
        let st = KinematicState {
            t: 3.25,
            x: -0.75,
            beta: 0.31,
            beta_dot: 0.02,
            beta_ddot: Some(-1.5),
            beta_dddot: Some(4.0),
        };
        let back = s.from_si(&s.to_si(&st));
        for (a, b) in [(back.t, st.t), (back.x, st.x), (back.beta, st.beta), (back.beta_dot, st.beta_dot)] {
            assert!(close(a, b, 1e-14));
        }
        assert!(close(back.beta_ddot.unwrap(), -1.5, 1e-14));
        assert!(close(back.beta_dddot.unwrap(), 4.0, 1e-14));
    }
}
