//! Exact truncated power series with rational polynomial coefficients.
//!
//! Coefficients are polynomials in the kinematic variables at the retarded
//! time: β (index 0), a (index 1) and the derivatives of a (index k + 1 for
//! the k-th derivative). Units are c = 1; the expansion variable is either
//! the delay distance r or the dumbbell size d.
//!
//! No floating point is used anywhere in this module.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("series mismatch: {0}")]
    Mismatch(String),
    #[error("constant term must be 1, got {0}")]
    ConstantTerm(String),
    #[error("reversion needs a zero constant term and a nonzero rational linear coefficient")]
    NotRevertible,
    #[error("expansion does not terminate under the chosen truncation")]
    NonTerminating,
    #[error("order {got} is too low, need at least {need}")]
    InsufficientOrder { got: usize, need: usize },
}

/// Kinematic variable indices.
pub const BETA: usize = 0;
pub const ACC: usize = 1;

/// Variable index of the k-th time derivative of the acceleration.
pub fn acc_derivative(k: usize) -> usize {
    ACC + k
}

/// Exponent vector with trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut v = exps.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    /// Monomial from (variable, exponent) pairs.
    pub fn of(pairs: &[(usize, u32)]) -> Self {
        let len = pairs.iter().map(|p| p.0 + 1).max().unwrap_or(0);
        let mut v = vec![0; len];
        for &(var, e) in pairs {
            v[var] += e;
        }
        Self::from_exponents(&v)
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v: Vec<u32> = (0..n).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial(v)
    }
}

fn var_name(i: usize) -> String {
    match i {
        BETA => "beta".into(),
        ACC => "a".into(),
        k => format!("a{}", k - ACC),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", var_name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Sparse polynomial in the kinematic variables. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KinPoly(BTreeMap<Monomial, Q>);

impl KinPoly {
    pub fn zero() -> Self {
        KinPoly(BTreeMap::new())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(i: usize) -> Self {
        Self::term(Q::one(), Monomial::of(&[(i, 1)]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.0.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The rational constant if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 => self.0.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &KinPoly) -> KinPoly {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> KinPoly {
        KinPoly(self.0.iter().map(|(m, c)| (m.clone(), -c.clone())).collect())
    }

    pub fn sub(&self, o: &KinPoly) -> KinPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Q) -> KinPoly {
        if s.is_zero() {
            return KinPoly::zero();
        }
        KinPoly(self.0.iter().map(|(m, c)| (m.clone(), c * s)).collect())
    }

    fn mul_with(&self, o: &KinPoly, keep: &impl Fn(&Monomial) -> bool) -> KinPoly {
        let mut r = KinPoly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                let m = m1.mul(m2);
                if keep(&m) {
                    r.add_term(m, c1 * c2);
                }
            }
        }
        r
    }

    pub fn mul(&self, o: &KinPoly) -> KinPoly {
        self.mul_with(o, &|_| true)
    }

    /// Drops every monomial for which `keep` is false.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> KinPoly {
        KinPoly(self.0.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect())
    }

    pub fn max_beta_degree(&self) -> u32 {
        self.0.keys().map(|m| m.exponent(BETA)).max().unwrap_or(0)
    }
}

impl fmt::Display for KinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if *m == Monomial::one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Which variable the series is expanded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    R,
    D,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::R => "r",
            Var::D => "d",
        })
    }
}

/// How many powers of β to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaTruncation {
    FirstOrder,
    Degree(u32),
}

impl BetaTruncation {
    fn max(self) -> u32 {
        match self {
            BetaTruncation::FirstOrder => 1,
            BetaTruncation::Degree(k) => k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub order: usize,
    pub beta: BetaTruncation,
    /// Cap on the total degree in the kinematic variables (1 = linearized).
    pub max_degree: Option<u32>,
}

impl Truncation {
    pub fn new(order: usize, beta: BetaTruncation) -> Self {
        Truncation { order, beta, max_degree: None }
    }

    pub fn linear(order: usize) -> Self {
        Truncation { order, beta: BetaTruncation::FirstOrder, max_degree: Some(1) }
    }

    fn keeps(&self, m: &Monomial) -> bool {
        m.exponent(BETA) <= self.beta.max() && self.max_degree.is_none_or(|d| m.degree() <= d)
    }
}

/// Power series c₀ + c₁x + … + c_N x^N with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<KinPoly>,
    var: Var,
    trunc: Truncation,
}

impl TruncatedSeries {
    pub fn zero(var: Var, trunc: Truncation) -> Self {
        TruncatedSeries { coeffs: vec![KinPoly::zero(); trunc.order + 1], var, trunc }
    }

    pub fn from_coeffs(var: Var, trunc: Truncation, coeffs: Vec<KinPoly>) -> Self {
        let mut s = Self::zero(var, trunc);
        for (i, c) in coeffs.into_iter().enumerate().take(trunc.order + 1) {
            s.coeffs[i] = c.filter(|m| trunc.keeps(m));
        }
        s
    }

    pub fn constant(var: Var, trunc: Truncation, c: KinPoly) -> Self {
        Self::from_coeffs(var, trunc, vec![c])
    }

    /// The expansion variable itself.
    pub fn identity(var: Var, trunc: Truncation) -> Self {
        Self::from_coeffs(var, trunc, vec![KinPoly::zero(), KinPoly::constant(Q::one())])
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> usize {
        self.trunc.order
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn coeff(&self, n: usize) -> &KinPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[KinPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(KinPoly::is_zero)
    }

    /// Same coefficients under a new variable tag.
    pub fn retag(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    fn check(&self, o: &Self) -> Result<(), SeriesError> {
        if self.var != o.var || self.trunc != o.trunc {
            return Err(SeriesError::Mismatch(format!(
                "{}^{} vs {}^{}",
                self.var, self.trunc.order, o.var, o.trunc.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect();
        Ok(TruncatedSeries { coeffs, ..self.clone() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SeriesError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(KinPoly::neg).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: &Q) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(), ..self.clone() }
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn scale_poly(&self, p: &KinPoly) -> Self {
        let t = self.trunc;
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c.mul_with(p, &|m| t.keeps(m))).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let n = self.trunc.order;
        let t = self.trunc;
        let mut coeffs = vec![KinPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul_with(b, &|m| t.keeps(m)));
            }
        }
        TruncatedSeries { coeffs, ..self.clone() }
    }

    /// Σₖ cₖ wᵏ where w = self − (constant term of self if `centered`).
    /// Stops when the powers of w vanish under truncation.
    fn apply_power_series(&self, w: &Self, coeff: impl Fn(u32) -> Q) -> Result<Self, SeriesError> {
        let mut result = Self::constant(self.var, self.trunc, KinPoly::constant(coeff(0)));
        let mut power = Self::constant(self.var, self.trunc, KinPoly::constant(Q::one()));
        let cap = self.trunc.order as u32 + self.trunc.beta.max() + self.trunc.max_degree.unwrap_or(0) + 2;
        for k in 1.. {
            power = power.mul_unchecked(w);
            if power.is_zero() {
                return Ok(result);
            }
            if k > cap {
                return Err(SeriesError::NonTerminating);
            }
            result = result.add(&power.scale(&coeff(k)))?;
        }
        unreachable!()
    }

    /// √s for a series whose constant term is exactly 1.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != KinPoly::constant(Q::one()) {
            return Err(SeriesError::ConstantTerm(self.coeffs[0].to_string()));
        }
        let mut w = self.clone();
        w.coeffs[0] = KinPoly::zero();
        self.apply_power_series(&w, binomial_half)
    }

    /// 1/s for a series with a nonzero rational constant term.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| SeriesError::ConstantTerm(self.coeffs[0].to_string()))?;
        let inv = c0.recip();
        let mut w = self.scale(&inv);
        w.coeffs[0] = KinPoly::zero();
        // 1/(1 + w) = Σ (−w)ᵏ
        let s = self.apply_power_series(&w, |k| if k % 2 == 0 { Q::one() } else { -Q::one() })?;
        Ok(s.scale(&inv))
    }

    /// self(inner(x)); inner must have a zero constant term. The result is
    /// tagged with inner's variable.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if self.trunc != inner.trunc {
            return Err(SeriesError::Mismatch("truncation differs".into()));
        }
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::Mismatch("inner series has a constant term".into()));
        }
        let mut acc = Self::constant(inner.var, inner.trunc, self.coeffs[self.trunc.order].clone());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul_unchecked(inner);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        Ok(acc)
    }

    /// d/dx of the series; the top coefficient becomes zero.
    pub fn derivative(&self) -> Self {
        let n = self.trunc.order;
        let mut coeffs = vec![KinPoly::zero(); n + 1];
        for k in 1..=n {
            coeffs[k - 1] = self.coeffs[k].scale(&Q::from_integer(BigInt::from(k)));
        }
        TruncatedSeries { coeffs, ..self.clone() }
    }

    /// Compositional inverse, returned in the swapped variable.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        let c1 = self.coeffs.get(1).and_then(KinPoly::as_constant).filter(|c| !c.is_zero());
        let (true, Some(c1)) = (self.coeffs[0].is_zero(), c1) else {
            return Err(SeriesError::NotRevertible);
        };
        let out = match self.var {
            Var::R => Var::D,
            Var::D => Var::R,
        };
        let y = Self::identity(out, self.trunc);
        let ds = self.derivative();
        // Newton on s(g) = y; the number of correct orders doubles each step.
        let mut g = y.scale(&c1.recip());
        let mut correct = 1usize;
        while correct < self.trunc.order {
            let resid = self.compose(&g)?.sub(&y)?;
            let slope = ds.compose(&g)?.recip()?;
            g = g.sub(&resid.mul(&slope)?)?;
            correct *= 2;
        }
        Ok(g)
    }

    /// Divides by x^k, requiring the first k coefficients to vanish. The
    /// order drops by k.
    pub fn shift_down(&self, k: usize) -> Result<Self, SeriesError> {
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::Mismatch(format!("leading {k} coefficients are not zero")));
        }
        let trunc = Truncation { order: self.trunc.order - k, ..self.trunc };
        Ok(TruncatedSeries { coeffs: self.coeffs[k..].to_vec(), var: self.var, trunc })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let trunc = Truncation { order, ..self.trunc };
        TruncatedSeries { coeffs: self.coeffs[..=order].to_vec(), var: self.var, trunc }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{}^{n}", self.var)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.trunc.order + 1)
    }
}

/// binom(1/2, k) (−1)ᵏ: the coefficients of √(1 − w).
fn binomial_sqrt_one_minus(k: u32) -> Q {
    let b = binomial_half(k);
    if k.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

/// binom(1/2, k).
fn binomial_half(k: u32) -> Q {
    let half = q(1, 2);
    (0..k).fold(Q::one(), |acc, j| acc * (&half - Q::from_integer(BigInt::from(j))) / Q::from_integer(BigInt::from(j + 1)))
}

/// Advance l(r) = βr + Σ_{n≥2} a^{(n−2)} rⁿ/n!.
pub fn l_series(trunc: Truncation) -> TruncatedSeries {
    let mut coeffs = vec![KinPoly::zero(); trunc.order + 1];
    if trunc.order >= 1 {
        coeffs[1] = KinPoly::var(BETA);
    }
    for n in 2..=trunc.order {
        let c = Q::new(BigInt::one(), factorial(n as u32));
        coeffs[n] = KinPoly::term(c, Monomial::of(&[(acc_derivative(n - 2), 1)]));
    }
    TruncatedSeries::from_coeffs(Var::R, trunc, coeffs)
}

/// Dumbbell size as a series in r: d = r√(1 − (l/r)²).
pub fn d_series(trunc: Truncation) -> Result<TruncatedSeries, SeriesError> {
    // z = l/r is l_series shifted down by one power; one extra order of l
    // is needed to keep z exact through r^(order − 1).
    let wide = Truncation { order: trunc.order + 1, ..trunc };
    let z = l_series(wide).shift_down(1)?;
    let w = z.mul(&z)?;
    let one = TruncatedSeries::constant(Var::R, trunc, KinPoly::zero());
    let root = one.apply_power_series(&w, binomial_sqrt_one_minus)?;
    // Multiply by r.
    let mut coeffs = vec![KinPoly::zero()];
    coeffs.extend(root.coeffs[..trunc.order].iter().cloned());
    Ok(TruncatedSeries::from_coeffs(Var::R, trunc, coeffs))
}

/// Delay distance as a series in d.
pub fn r_of_d(trunc: Truncation) -> Result<TruncatedSeries, SeriesError> {
    d_series(trunc)?.revert()
}

/// One term of the expanded self-force.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForceTerm {
    /// Power of d multiplying the term.
    pub d_power: i32,
    pub monomial: Monomial,
    pub coeff: Q,
}

impl fmt::Display for ForceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {} * d^{}", self.coeff, self.monomial, self.d_power)
    }
}

/// Self-force F in units of e²/(8πε₀), c = 1, to first order in β.
///
/// F ∝ N/D³ with N = (l − rβ)(1 − β²) − d²a and D = r − lβ, both evaluated
/// through the reverted delay r(d). Terms up to d^(order − 1) are returned,
/// sorted by power of d, then monomial.
pub fn self_force_series(order: usize) -> Result<Vec<ForceTerm>, SeriesError> {
    self_force_with(order, Truncation::new(order + 2, BetaTruncation::FirstOrder))
}

fn self_force_with(order: usize, trunc: Truncation) -> Result<Vec<ForceTerm>, SeriesError> {
    if order < 2 {
        return Err(SeriesError::InsufficientOrder { got: order, need: 2 });
    }
    let f = self_force_times_d(trunc)?;
    let mut out = Vec::new();
    for k in 0..=order {
        for (m, c) in f.coeff(k).terms() {
            out.push(ForceTerm { d_power: k as i32 - 1, monomial: m.clone(), coeff: c.clone() });
        }
    }
    Ok(out)
}

/// d·F as a series in d, through d^(trunc.order − 2).
fn self_force_times_d(trunc: Truncation) -> Result<TruncatedSeries, SeriesError> {
    let r = r_of_d(trunc)?;
    let l = l_series(trunc).compose(&r)?;
    let beta = KinPoly::var(BETA);
    let one_minus_b2 = KinPoly::constant(Q::one()).sub(&beta.mul(&beta));
    let d2a = TruncatedSeries::from_coeffs(
        Var::D,
        trunc,
        vec![KinPoly::zero(), KinPoly::zero(), KinPoly::var(ACC)],
    );
    let n = l.sub(&r.scale_poly(&beta))?.scale_poly(&one_minus_b2).sub(&d2a)?;
    let den = r.sub(&l.scale_poly(&beta))?;
    // (N/d²)·(D/d)⁻³
    let n2 = n.shift_down(2)?;
    let d1 = den.shift_down(1)?.truncate(n2.order());
    let inv = d1.recip()?;
    n2.mul(&inv.mul(&inv)?.mul(&inv)?)
}

/// Linearized chain: d·F = Σₙ cₙ a^{(n)} dⁿ. Returns c₀ … c_{n_max}.
pub fn linear_chain_coeffs(n_max: usize) -> Result<Vec<Q>, SeriesError> {
    if n_max < 1 {
        return Err(SeriesError::InsufficientOrder { got: n_max, need: 1 });
    }
    let f = self_force_times_d(Truncation::linear(n_max + 2))?;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let m = Monomial::of(&[(acc_derivative(n), 1)]);
        let c = f.coeff(n);
        // Nothing but the single derivative may appear at this order.
        if c.len() > 1 || (c.len() == 1 && c.coeff(&m).is_zero()) {
            return Err(SeriesError::Mismatch(format!("unexpected linear term {c}")));
        }
        out.push(c.coeff(&m));
    }
    Ok(out)
}

/// Maclaurin coefficients of e^μ − 1 − μ − μ², through μ^n.
pub fn exp_closed_form_coeffs(n: usize) -> Vec<Q> {
    (0..=n)
        .map(|k| {
            let e = Q::new(BigInt::one(), factorial(k as u32));
            match k {
                0 | 1 => Q::zero(),
                2 => e - Q::one(),
                _ => e,
            }
        })
        .collect()
}

/// One checked identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub id: String,
    pub coefficient: String,
    pub pass: bool,
}

fn poly(terms: &[(i64, i64, &[(usize, u32)])]) -> KinPoly {
    terms.iter().fold(KinPoly::zero(), |acc, (n, d, m)| acc.add(&KinPoly::term(q(*n, *d), Monomial::of(m))))
}

/// Runs every published coefficient identity.
pub fn verify_identities() -> Result<Vec<IdentityCheck>, SeriesError> {
    let a1 = acc_derivative(1);
    let a2 = acc_derivative(2);
    let mut out = Vec::new();
    let mut push = |id: &str, got: &KinPoly, want: &KinPoly| {
        out.push(IdentityCheck { id: id.into(), coefficient: want.to_string(), pass: got == want });
    };

    let full = |k| Truncation::new(6, BetaTruncation::Degree(k));
    let first = Truncation::new(6, BetaTruncation::FirstOrder);

    let l = l_series(full(4));
    push("l_series.r1", l.coeff(1), &poly(&[(1, 1, &[(BETA, 1)])]));
    push("l_series.r2", l.coeff(2), &poly(&[(1, 2, &[(ACC, 1)])]));
    push("l_series.r3", l.coeff(3), &poly(&[(1, 6, &[(a1, 1)])]));
    push("l_series.r4", l.coeff(4), &poly(&[(1, 24, &[(a2, 1)])]));

    let sq = l.mul(&l)?;
    push("l_series_squared.r2", sq.coeff(2), &poly(&[(1, 1, &[(BETA, 2)])]));
    push("l_series_squared.r3", sq.coeff(3), &poly(&[(1, 1, &[(BETA, 1), (ACC, 1)])]));

    let w = TruncatedSeries::from_coeffs(Var::R, full(4), vec![KinPoly::constant(Q::one()), KinPoly::zero(), KinPoly::constant(-Q::one())]);
    let root = w.sqrt()?;
    push("sqrt_one_minus_z2.z2", root.coeff(2), &KinPoly::constant(q(-1, 2)));
    push("sqrt_one_minus_z2.z4", root.coeff(4), &KinPoly::constant(q(-1, 8)));

    let d4 = d_series(full(4))?;
    push("d_series_full.r1", d4.coeff(1), &poly(&[(1, 1, &[]), (-1, 2, &[(BETA, 2)]), (-1, 8, &[(BETA, 4)])]));
    let d3 = d_series(full(3))?;
    push("d_series_full.r2", d3.coeff(2), &poly(&[(-1, 2, &[(ACC, 1), (BETA, 1)]), (-1, 4, &[(ACC, 1), (BETA, 3)])]));
    push(
        "d_series_full.r3",
        d3.coeff(3),
        &poly(&[
            (-1, 8, &[(ACC, 2)]),
            (-3, 16, &[(ACC, 2), (BETA, 2)]),
            (-1, 6, &[(a1, 1), (BETA, 1)]),
            (-1, 12, &[(a1, 1), (BETA, 3)]),
        ]),
    );

    let d1 = d_series(first)?;
    push("d_series_first.r1", d1.coeff(1), &KinPoly::constant(Q::one()));
    push("d_series_first.r2", d1.coeff(2), &poly(&[(-1, 2, &[(ACC, 1), (BETA, 1)])]));
    push("d_series_first.r3", d1.coeff(3), &poly(&[(-1, 8, &[(ACC, 2)]), (-1, 6, &[(a1, 1), (BETA, 1)])]));

    let r = d1.revert()?;
    push("reversion.d1", r.coeff(1), &KinPoly::constant(Q::one()));
    push("reversion.d2", r.coeff(2), &poly(&[(1, 2, &[(ACC, 1), (BETA, 1)])]));
    push("reversion.d3", r.coeff(3), &poly(&[(1, 8, &[(ACC, 2)]), (1, 6, &[(a1, 1), (BETA, 1)])]));

    let sf = self_force_series(2)?;
    let find = |dp: i32, m: Monomial| {
        sf.iter()
            .find(|t| t.d_power == dp && t.monomial == m)
            .map(|t| KinPoly::constant(t.coeff.clone()))
            .unwrap_or_default()
    };
    push("self_force.mass", &find(-1, Monomial::of(&[(ACC, 1)])), &KinPoly::constant(q(-1, 2)));
    push("self_force.jerk", &find(0, Monomial::of(&[(a1, 1)])), &KinPoly::constant(q(1, 6)));
    push("self_force.a2v", &find(0, Monomial::of(&[(ACC, 2), (BETA, 1)])), &KinPoly::constant(q(1, 2)));
    push("self_force.a3", &find(1, Monomial::of(&[(ACC, 3)])), &KinPoly::constant(q(5, 16)));
    push("self_force.snap", &find(1, Monomial::of(&[(a2, 1)])), &KinPoly::constant(q(1, 24)));

    let chain = linear_chain_coeffs(8)?;
    for (n, c) in chain.iter().enumerate() {
        let want = if n == 0 { q(-1, 2) } else { Q::new(BigInt::one(), factorial(n as u32 + 2)) };
        push(&format!("linear_chain.n{n}"), &KinPoly::constant(c.clone()), &KinPoly::constant(want));
    }
    // μ²·P(μ) against e^μ − 1 − μ − μ², term by term.
    let closed = exp_closed_form_coeffs(chain.len() + 1);
    for (k, want) in closed.iter().enumerate() {
        let got = if k >= 2 { chain[k - 2].clone() } else { Q::zero() };
        push(&format!("exp_closed_form.mu{k}"), &KinPoly::constant(got), &KinPoly::constant(want.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64, d: i64) -> KinPoly {
        KinPoly::constant(q(n, d))
    }

    fn first(order: usize) -> Truncation {
        Truncation::new(order, BetaTruncation::FirstOrder)
    }

    #[test]
    fn ring_basics() {
        let t = first(2);
        let a = TruncatedSeries::from_coeffs(Var::R, t, vec![c(1, 1), c(1, 1)]);
        let b = TruncatedSeries::from_coeffs(Var::R, t, vec![c(1, 1), c(-1, 1)]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, TruncatedSeries::from_coeffs(Var::R, t, vec![c(1, 1), KinPoly::zero(), c(-1, 1)]));
        assert!(a.mul(&TruncatedSeries::zero(Var::R, t)).unwrap().is_zero());
        assert!(a.mul(&a.clone().retag(Var::D)).is_err());
        assert!(a.add(&TruncatedSeries::zero(Var::R, first(3))).is_err());
    }

    #[test]
    fn sqrt_rejects_bad_constant() {
        let t = first(3);
        let s = TruncatedSeries::constant(Var::R, t, c(2, 1));
        assert!(matches!(s.sqrt(), Err(SeriesError::ConstantTerm(_))));
        let one = TruncatedSeries::constant(Var::R, t, c(1, 1));
        assert_eq!(one.sqrt().unwrap(), one);
    }

    #[test]
    fn revert_identity_and_errors() {
        let t = first(5);
        let x = TruncatedSeries::identity(Var::R, t);
        assert_eq!(x.revert().unwrap(), TruncatedSeries::identity(Var::D, t));
        let shifted = TruncatedSeries::from_coeffs(Var::R, t, vec![c(1, 1), c(1, 1)]);
        assert_eq!(shifted.revert(), Err(SeriesError::NotRevertible));
        let symbolic = TruncatedSeries::from_coeffs(Var::R, t, vec![KinPoly::zero(), KinPoly::var(ACC)]);
        assert_eq!(symbolic.revert(), Err(SeriesError::NotRevertible));
    }

    #[test]
    fn all_published_identities() {
        let bad: Vec<_> = verify_identities().unwrap().into_iter().filter(|c| !c.pass).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn zero_kinematics() {
        // Setting every variable to zero keeps only constant monomials.
        let l = l_series(first(5));
        for co in l.coeffs() {
            assert!(co.as_constant().is_none_or(|v| v.is_zero()));
        }
        let d = d_series(first(5)).unwrap();
        assert_eq!(d.coeff(1).coeff(&Monomial::one()), Q::one());
        for co in &d.coeffs()[2..] {
            assert!(co.coeff(&Monomial::one()).is_zero());
        }
    }

    #[test]
    fn pythagoras_closure() {
        for t in [Truncation::new(7, BetaTruncation::Degree(4)), first(8)] {
            let l = l_series(t);
            let d = d_series(t).unwrap();
            let lhs = l.mul(&l).unwrap().add(&d.mul(&d).unwrap()).unwrap();
            let r = TruncatedSeries::identity(Var::R, t);
            assert_eq!(lhs, r.mul(&r).unwrap());
        }
    }

    #[test]
    fn reversion_round_trip() {
        let t = first(7);
        let d = d_series(t).unwrap();
        let r = d.revert().unwrap();
        assert_eq!(d.compose(&r).unwrap(), TruncatedSeries::identity(Var::D, t));
        assert_eq!(r.compose(&d).unwrap(), TruncatedSeries::identity(Var::R, t));
    }

    #[test]
    fn self_force_extra_terms() {
        // The d¹ order also carries a β-dependent cross term.
        let sf = self_force_series(2).unwrap();
        let m = Monomial::of(&[(ACC, 1), (acc_derivative(1), 1), (BETA, 1)]);
        let t = sf.iter().find(|t| t.d_power == 1 && t.monomial == m).unwrap();
        assert_eq!(t.coeff, q(5, 12));
        assert_eq!(self_force_series(1), Err(SeriesError::InsufficientOrder { got: 1, need: 2 }));
    }

    #[test]
    fn linear_chain_values() {
        let ch = linear_chain_coeffs(8).unwrap();
        assert_eq!(ch[0], q(-1, 2));
        assert_eq!(ch[1], q(1, 6));
        assert_eq!(ch[2], q(1, 24));
        assert_eq!(ch[8], Q::new(BigInt::one(), factorial(10)));
        assert!(linear_chain_coeffs(0).is_err());
    }

    #[test]
    fn display() {
        let p = poly(&[(-1, 8, &[(ACC, 2)]), (1, 1, &[(BETA, 1)])]);
        assert_eq!(p.to_string(), "-1/8*a^2 + beta");
    }
}
