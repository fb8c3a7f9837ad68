//! Roots of the characteristic quasi-polynomial
//!
//! ```text
//! f(z) = z² + z + (1 − e^z)(1 − β²)
//! ```
//!
//! in the c = d = 1 units, where z = λγ for a perturbation growing like
//! e^{λt}. At β = 0 this is the rest-instability equation, with a double root
//! at the origin and a single positive real root near 9/5.
//!
//! Roots are located by Newton iteration from a grid of seeds. Completeness
//! is only ever claimed relative to a scanned rectangle; [`winding_count`]
//! gives an independent argument-principle count for auditing.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{lorentz_gamma, ModelError};

pub type C64 = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum RootsError {
    #[error("beta must lie in [0, 1), got {0}")]
    BadBeta(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("region must have positive area and finite bounds")]
    EmptyRegion,
    #[error("grid density must be positive and finite")]
    BadDensity,
    #[error("image dimensions {0}x{1} are not representable")]
    Dimensions(usize, usize),
    #[error("contour passes through or near a root at {0}")]
    ContourOnRoot(C64),
    #[error("count must be at least 2")]
    BadCount,
    #[error("found {found} roots with positive imaginary part, {wanted} requested")]
    TooFewRoots { found: usize, wanted: usize },
}

/// The characteristic function for a fixed speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharEq {
    beta: f64,
    k: f64,
}

// e^z − 1 without cancellation near zero.
fn expm1(z: C64) -> C64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    C64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

impl CharEq {
    pub fn new(beta: f64) -> Result<Self, RootsError> {
        if !(0.0..1.0).contains(&beta) {
            return Err(RootsError::BadBeta(beta));
        }
        Ok(CharEq { beta, k: (1.0 - beta) * (1.0 + beta) })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eval(&self, z: C64) -> C64 {
        z * z + z - expm1(z) * self.k
    }

    /// e^{−max(Re z, 0)}·f(z). Same zeros and phase, never overflows.
    pub fn eval_scaled(&self, z: C64) -> C64 {
        self.eval_pair(z).0
    }

    /// Scaled value and scaled first derivative.
    fn eval_pair(&self, z: C64) -> (C64, C64) {
        if z.re <= 700.0 {
            let s = if z.re > 0.0 { (-z.re).exp() } else { 1.0 };
            let e = z.exp();
            return (self.eval(z) * s, (2.0 * z + 1.0 - e * self.k) * s);
        }
        // Overflow guard: only the scaled form is evaluated out here.
        let s = (-z.re).exp();
        let ez = C64::from_polar(1.0, z.im);
        let f = (z * z + z) * s + (s - ez) * self.k;
        let df = (2.0 * z + 1.0) * s - ez * self.k;
        (f, df)
    }

    /// Scaled k-th derivative.
    fn scaled_derivative(&self, z: C64, k: u32) -> C64 {
        let s = if z.re > 0.0 { (-z.re).exp() } else { 1.0 };
        let ez = C64::from_polar((z.re - z.re.max(0.0)).exp(), z.im);
        match k {
            0 => self.eval_pair(z).0,
            1 => self.eval_pair(z).1,
            2 => 2.0 * s - ez * self.k,
            _ => -ez * self.k,
        }
    }

    pub fn residual(&self, z: C64) -> f64 {
        self.eval_pair(z).0.norm()
    }
}

/// f(z) for a given β.
pub fn chareq_eval(z: C64, beta: f64) -> Result<C64, RootsError> {
    Ok(CharEq::new(beta)?.eval(z))
}

/// The uniform-motion form λ²γ² + γλ + (1 − β²)(1 − e^{λγ}).
pub fn chareq_uniform_eval(lambda: C64, beta: f64) -> Result<C64, RootsError> {
    let g = lorentz_gamma(beta)?;
    let k = (1.0 - beta) * (1.0 + beta);
    let m = lambda * g;
    Ok(m * m + m - expm1(m) * k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Region {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self, RootsError> {
        let r = Region { x0, x1, y0, y1 };
        if [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x1 > x0 && y1 > y0 {
            Ok(r)
        } else {
            Err(RootsError::EmptyRegion)
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: C64,
    /// |e^{−max(Re z, 0)} f(z)| at `value`.
    pub residual: f64,
    pub newton_iterations: u32,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SeedStats {
    pub seeds: usize,
    pub converged: usize,
    /// Seeds that hit the iteration cap or escaped.
    pub non_converged: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Sorted by real part, then imaginary part.
    pub roots: Vec<Root>,
    pub region: Region,
    pub grid_density: f64,
    pub stats: SeedStats,
}

impl RootSet {
    /// Number of roots counted with multiplicity.
    pub fn count_with_multiplicity(&self) -> u32 {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn count_inside(&self, r: &Region) -> u32 {
        self.roots.iter().filter(|x| r.contains(x.value)).map(|x| x.multiplicity).sum()
    }
}

pub const MAX_ITERATIONS: u32 = 50;
pub const DEDUPE_RADIUS: f64 = 1e-6;
pub const RESIDUAL_ACCEPT: f64 = 1e-10;
pub const RESIDUAL_POLISH: f64 = 1e-12;

fn multiplicity_at(eq: &CharEq, z: C64) -> u32 {
    // A derivative is treated as vanishing when it is small compared with the
    // next one; f itself is already ≈ 0 here.
    let mut m = 1;
    while m < 4 {
        let dm = eq.scaled_derivative(z, m).norm();
        let next = eq.scaled_derivative(z, m + 1).norm().max(1e-300);
        if dm > 1e-6 * next.max(1.0) {
            break;
        }
        m += 1;
    }
    m
}

fn newton(eq: &CharEq, seed: C64) -> Option<Root> {
    let mut z = seed;
    let mut m = 1u32;
    for it in 1..=MAX_ITERATIONS {
        let (f, df) = eq.eval_pair(z);
        if !(f.re.is_finite() && f.im.is_finite()) {
            return None;
        }
        if f.norm() == 0.0 {
            return finish(eq, z, it);
        }
        if df.norm() == 0.0 {
            return None;
        }
        let step = f / df * m as f64;
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) || z.re > 745.0 {
            return None;
        }
        if step.norm() < 1e-9 * z.norm().max(1.0) && m == 1 {
            m = multiplicity_at(eq, z);
        }
        if step.norm() <= 1e-13 * z.norm().max(1.0) {
            return finish(eq, z, it);
        }
    }
    None
}

fn finish(eq: &CharEq, mut z: C64, iterations: u32) -> Option<Root> {
    let m = multiplicity_at(eq, z);
    let mut best = (eq.residual(z), z);
    for _ in 0..6 {
        if best.0 < RESIDUAL_POLISH * 1e-3 {
            break;
        }
        let (f, df) = eq.eval_pair(z);
        if df.norm() == 0.0 {
            break;
        }
        z -= f / df * m as f64;
        let r = eq.residual(z);
        if r < best.0 {
            best = (r, z);
        }
    }
    let (mut residual, mut value) = best;
    // Real roots come out with rounding noise in the imaginary part.
    if value.im != 0.0 && value.im.abs() < 1e-9 * value.norm().max(1.0) {
        let real = C64::new(value.re, 0.0);
        let r = eq.residual(real);
        if r <= residual.max(RESIDUAL_POLISH) {
            value = real;
            residual = r;
        }
    }
    // Same for the real part (the double root at the origin).
    if value.re != 0.0 && value.re.abs() < 1e-9 * value.norm().max(1.0) {
        let imag = C64::new(0.0, value.im);
        let r = eq.residual(imag);
        if r <= residual.max(RESIDUAL_POLISH) {
            value = imag;
            residual = r;
        }
    }
    // No signed zeros in the output.
    let value = C64::new(value.re + 0.0, value.im + 0.0);
    (residual < RESIDUAL_ACCEPT).then_some(Root { value, residual, newton_iterations: iterations, multiplicity: m })
}

fn order(a: &Root, b: &Root) -> Ordering {
    a.value
        .re
        .total_cmp(&b.value.re)
        .then(a.value.im.total_cmp(&b.value.im))
        .then(a.residual.total_cmp(&b.residual))
}

fn dedupe(mut cands: Vec<Root>) -> Vec<Root> {
    cands.sort_by(order);
    let mut kept: Vec<Root> = Vec::new();
    for c in cands {
        let mut hit = None;
        for (i, k) in kept.iter().enumerate().rev() {
            if k.value.re < c.value.re - DEDUPE_RADIUS {
                // kept is sorted by real part only approximately after
                // replacements, so keep scanning a little further.
                if k.value.re < c.value.re - 10.0 * DEDUPE_RADIUS {
                    break;
                }
                continue;
            }
            if (k.value - c.value).norm() <= DEDUPE_RADIUS {
                hit = Some(i);
                break;
            }
        }
        match hit {
            Some(i) if c.residual < kept[i].residual => kept[i] = c,
            Some(_) => {}
            None => kept.push(c),
        }
    }
    kept.sort_by(order);
    kept
}

/// Newton from every grid seed in the region, polished and deduplicated.
pub fn find_roots(eq: &CharEq, region: &Region, grid_density: f64) -> Result<RootSet, RootsError> {
    if !(grid_density.is_finite() && grid_density > 0.0) {
        return Err(RootsError::BadDensity);
    }
    let region = Region::new(region.x0, region.x1, region.y0, region.y1)?;
    let nx = ((region.width() * grid_density).ceil() as usize).max(1);
    let ny = ((region.height() * grid_density).ceil() as usize).max(1);
    let dx = region.width() / nx as f64;
    let dy = region.height() / ny as f64;

    let results: Vec<Option<Root>> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            let seed = C64::new(region.x0 + (i as f64 + 0.5) * dx, region.y0 + (j as f64 + 0.5) * dy);
            newton(eq, seed)
        })
        .collect();

    let converged = results.iter().filter(|r| r.is_some()).count();
    let stats = SeedStats { seeds: results.len(), converged, non_converged: results.len() - converged };
    let mut cands: Vec<Root> = results.into_iter().flatten().filter(|r| region.contains(r.value)).collect();

    // Conjugate closure, wherever the mirror image is inside the region.
    let mirrors: Vec<Root> = cands
        .iter()
        .filter(|r| r.value.im != 0.0)
        .map(|r| Root { value: r.value.conj(), ..*r })
        .filter(|r| region.contains(r.value))
        .collect();
    cands.extend(mirrors);

    Ok(RootSet { roots: dedupe(cands), region, grid_density, stats })
}

/// Argument-principle count of zeros (with multiplicity) inside the region.
pub fn winding_count(eq: &CharEq, region: &Region) -> Result<i64, RootsError> {
    let r = Region::new(region.x0, region.x1, region.y0, region.y1)?;
    let corners = [
        C64::new(r.x0, r.y0),
        C64::new(r.x1, r.y0),
        C64::new(r.x1, r.y1),
        C64::new(r.x0, r.y1),
    ];
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let n = (((b - a).norm() * 8.0).ceil() as usize).max(16);
        let mut prev = a;
        let mut fprev = eq.eval_scaled(a);
        for i in 1..=n {
            let z = a + (b - a) * (i as f64 / n as f64);
            let fz = eq.eval_scaled(z);
            total += phase_change(eq, prev, fprev, z, fz, 0)?;
            prev = z;
            fprev = fz;
        }
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn phase_change(eq: &CharEq, a: C64, fa: C64, b: C64, fb: C64, depth: u32) -> Result<f64, RootsError> {
    let tiny = 1e-12;
    if fa.norm() < tiny {
        return Err(RootsError::ContourOnRoot(a));
    }
    if fb.norm() < tiny {
        return Err(RootsError::ContourOnRoot(b));
    }
    let d = (fb / fa).arg();
    if d.abs() < PI / 4.0 {
        return Ok(d);
    }
    if depth > 40 {
        return Err(RootsError::ContourOnRoot(0.5 * (a + b)));
    }
    let m = 0.5 * (a + b);
    let fm = eq.eval_scaled(m);
    Ok(phase_change(eq, a, fa, m, fm, depth + 1)? + phase_change(eq, m, fm, b, fb, depth + 1)?)
}

/// Positive real root of f for the given β, by bisection.
pub fn real_unstable_root(beta: f64) -> Result<f64, RootsError> {
    let eq = CharEq::new(beta)?;
    let f = |x: f64| eq.eval(C64::new(x, 0.0)).re;
    // f > 0 on (0, 1.79) for every β, and f → −∞.
    let mut lo = 0.25;
    let mut hi = 1.0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The real positive root at β = 0, ≈ 1.7933.
pub fn rest_instability_rate() -> f64 {
    real_unstable_root(0.0).expect("beta = 0 is valid")
}

/// Imaginary parts of the first roots above the real axis and a line fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub beta: f64,
    pub roots: Vec<C64>,
    pub etas: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn spectrum(beta: f64, count: usize) -> Result<Spectrum, RootsError> {
    if count < 2 {
        return Err(RootsError::BadCount);
    }
    let eq = CharEq::new(beta)?;
    // Zeros sit near Im ≈ 2πn, Re ≈ 2 ln Im.
    let y1 = 2.0 * PI * (count as f64 + 2.0) + 10.0;
    let x1 = 2.0 * y1.ln() + 4.0;
    let region = Region::new(-3.0, x1, 0.1, y1)?;
    let set = find_roots(&eq, &region, 10.0)?;
    let mut roots: Vec<C64> = set.roots.iter().map(|r| r.value).filter(|z| z.im > 0.0).collect();
    roots.sort_by(|a, b| a.im.total_cmp(&b.im));
    if roots.len() < count {
        return Err(RootsError::TooFewRoots { found: roots.len(), wanted: count });
    }
    roots.truncate(count);
    let etas: Vec<f64> = roots.iter().map(|z| z.im).collect();
    let xs: Vec<f64> = (1..=count).map(|n| n as f64).collect();
    let (slope, intercept, r_squared) = line_fit(&xs, &etas);
    Ok(Spectrum { beta, roots, etas, slope, intercept, r_squared })
}

/// Least-squares line y = slope·x + intercept and its R².
pub fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    (slope, intercept, 1.0 - ss_res / syy)
}

/// RGB image with the phase sample behind each pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainImage {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first, 3 bytes per pixel.
    pub rgb: Vec<u8>,
    /// arg f at each pixel centre, in (−π, π].
    pub phase: Vec<f64>,
}

impl DomainImage {
    /// Binary PPM (P6), no comments.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.rgb);
        out
    }

    pub fn phase_at(&self, col: usize, row: usize) -> f64 {
        self.phase[row * self.width + col]
    }

    /// Complex coordinate of a pixel centre.
    pub fn pixel_center(region: &Region, width: usize, height: usize, col: usize, row: usize) -> C64 {
        C64::new(
            region.x0 + (col as f64 + 0.5) * region.width() / width as f64,
            region.y1 - (row as f64 + 0.5) * region.height() / height as f64,
        )
    }
}

const MAX_PIXELS: usize = 1 << 28;

fn hsv_to_rgb(h: f64, v: f64) -> [u8; 3] {
    let h6 = h * 6.0;
    let sector = (h6.floor() as i64).rem_euclid(6);
    let f = h6 - h6.floor();
    let (p, qv, t) = (0.0, v * (1.0 - f), v * f);
    let (r, g, b) = match sector {
        0 => (v, t, p),
        1 => (qv, v, p),
        2 => (p, v, t),
        3 => (p, qv, v),
        4 => (t, p, v),
        _ => (v, p, qv),
    };
    let to = |c: f64| (c * 255.0).round().clamp(0.0, 255.0) as u8;
    [to(r), to(g), to(b)]
}

/// Hue from arg f, brightness stepping at every integer level of |f|.
pub fn render_domain_coloring(eq: &CharEq, region: &Region, width: usize, height: usize) -> Result<DomainImage, RootsError> {
    let region = Region::new(region.x0, region.x1, region.y0, region.y1)?;
    let pixels = width.checked_mul(height).filter(|&p| p > 0 && p <= MAX_PIXELS);
    if pixels.is_none() {
        return Err(RootsError::Dimensions(width, height));
    }
    let rows: Vec<(Vec<u8>, Vec<f64>)> = (0..height)
        .into_par_iter()
        .map(|row| {
            let mut rgb = Vec::with_capacity(3 * width);
            let mut ph = Vec::with_capacity(width);
            for col in 0..width {
                let z = DomainImage::pixel_center(&region, width, height, col, row);
                let fs = eq.eval_scaled(z);
                let phase = fs.arg();
                let modulus = if z.re < 700.0 { eq.eval(z).norm() } else { f64::INFINITY };
                let band = if modulus.is_finite() && modulus < 1e6 { modulus.fract() } else { 0.0 };
                let v = 0.7 + 0.3 * band;
                let hue = (phase / (2.0 * PI)).rem_euclid(1.0);
                rgb.extend_from_slice(&hsv_to_rgb(hue, v));
                ph.push(phase);
            }
            (rgb, ph)
        })
        .collect();
    let mut rgb = Vec::with_capacity(3 * width * height);
    let mut phase = Vec::with_capacity(width * height);
    for (r, p) in rows {
        rgb.extend(r);
        phase.extend(p);
    }
    Ok(DomainImage { width, height, rgb, phase })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_values() {
        let eq = CharEq::new(0.0).unwrap();
        assert_eq!(eq.eval(C64::new(0.0, 0.0)), C64::new(0.0, 0.0));
        let v = eq.eval(C64::new(1.8, 0.0)).re;
        assert!((v - (3.24 + 1.8 + 1.0 - 1.8f64.exp())).abs() < 1e-12);
        assert!((v + 0.0096).abs() < 1e-4);
        let near = CharEq::new(1.0 - 1e-12).unwrap();
        assert!(near.eval(C64::new(-1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn scaled_matches_unscaled() {
        let eq = CharEq::new(0.4).unwrap();
        for z in [C64::new(2.0, 3.0), C64::new(-1.0, 0.5), C64::new(30.0, -7.0)] {
            let s = if z.re > 0.0 { (-z.re).exp() } else { 1.0 };
            let a = eq.eval_scaled(z);
            let b = eq.eval(z) * s;
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "{z}");
            assert!((eq.eval_pair(z).0 - a).norm() < 1e-12 * a.norm().max(1.0));
        }
        assert!(eq.eval_scaled(C64::new(800.0, 1.0)).norm().is_finite());
    }

    #[test]
    fn uniform_form() {
        assert_eq!(chareq_uniform_eval(C64::new(0.0, 0.0), 0.5).unwrap(), C64::new(0.0, 0.0));
        let l = C64::new(0.7, 2.0);
        let g = lorentz_gamma(0.6).unwrap();
        let a = chareq_uniform_eval(l, 0.6).unwrap();
        let b = chareq_eval(l * g, 0.6).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert!(chareq_uniform_eval(l, 1.0).is_err());
    }

    #[test]
    fn bad_inputs() {
        assert!(CharEq::new(1.0).is_err());
        assert!(CharEq::new(-0.1).is_err());
        let eq = CharEq::new(0.0).unwrap();
        assert!(find_roots(&eq, &Region { x0: 1.0, x1: 1.0, y0: 0.0, y1: 1.0 }, 10.0).is_err());
        assert!(find_roots(&eq, &Region { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 }, 0.0).is_err());
        assert!(render_domain_coloring(&eq, &Region { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 }, 0, 3).is_err());
        assert!(spectrum(0.0, 1).is_err());
    }

    #[test]
    fn rest_roots() {
        let eq = CharEq::new(0.0).unwrap();
        let set = find_roots(&eq, &Region::new(-1.0, 3.0, -1.0, 1.0).unwrap(), 10.0).unwrap();
        assert_eq!(set.roots.len(), 2, "{:?}", set.roots);
        assert!(set.roots[0].value.norm() < 1e-12);
        assert_eq!(set.roots[0].multiplicity, 2);
        let lam = set.roots[1].value;
        assert_eq!(lam.im, 0.0);
        // Bisection oracle on the real function.
        let f = |x: f64| x * x + x + 1.0 - x.exp();
        let (mut lo, mut hi) = (1.5, 2.0);
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if f(m) > 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        assert!((lam.re - lo).abs() < 1e-12);
        assert!((rest_instability_rate() - lo).abs() < 1e-12);
        assert!(set.roots.iter().all(|r| r.residual < RESIDUAL_ACCEPT));
    }

    #[test]
    fn empty_region() {
        let eq = CharEq::new(0.0).unwrap();
        let r = Region::new(-9.0, -8.0, 50.0, 51.0).unwrap();
        assert!(find_roots(&eq, &r, 10.0).unwrap().roots.is_empty());
        assert_eq!(winding_count(&eq, &r).unwrap(), 0);
    }

    #[test]
    fn winding_matches_rest_roots() {
        let eq = CharEq::new(0.0).unwrap();
        let r = Region::new(-1.0, 3.0, -1.0, 1.0).unwrap();
        assert_eq!(winding_count(&eq, &r).unwrap(), 3);
        assert!(winding_count(&eq, &Region::new(0.0, 3.0, -1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn conjugate_closed() {
        let eq = CharEq::new(0.3).unwrap();
        let set = find_roots(&eq, &Region::new(-2.0, 9.0, -30.0, 30.0).unwrap(), 4.0).unwrap();
        for r in &set.roots {
            let c = r.value.conj();
            assert!(set.roots.iter().any(|s| (s.value - c).norm() < DEDUPE_RADIUS));
        }
    }

    #[test]
    fn real_root_monotone_in_beta() {
        let a = real_unstable_root(0.3).unwrap();
        let b = real_unstable_root(0.6).unwrap();
        assert!(a > rest_instability_rate() && b > a);
        let eq = CharEq::new(0.6).unwrap();
        assert!(eq.residual(C64::new(b, 0.0)) < 1e-12);
    }

    #[test]
    fn fit() {
        let (m, c, r2) = line_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]);
        assert!((m - 2.0).abs() < 1e-15 && (c - 1.0).abs() < 1e-15 && (r2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hue_quadrants_around_roots() {
        let eq = CharEq::new(0.0).unwrap();
        for centre in [0.0, rest_instability_rate()] {
            let r = Region::new(centre - 0.03, centre + 0.03, -0.03, 0.03).unwrap();
            let img = render_domain_coloring(&eq, &r, 3, 3).unwrap();
            let mut seen = [false; 4];
            for p in &img.phase {
                let q = ((p + PI) / (PI / 2.0)).floor() as usize;
                seen[q.min(3)] = true;
            }
            assert!(seen.iter().all(|&s| s), "{centre}");
        }
    }

    #[test]
    fn ppm_header() {
        let eq = CharEq::new(0.2).unwrap();
        let img = render_domain_coloring(&eq, &Region::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 4, 2).unwrap();
        let ppm = img.to_ppm();
        assert!(ppm.starts_with(b"P6\n4 2\n255\n"));
        assert_eq!(ppm.len(), 11 + 24);
    }
}
