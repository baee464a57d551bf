//! Truncated series in the times `t_k`, `t̄_k` with weighted degree
//! `deg t_k = deg t̄_k = k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::BigRational;

use super::scalar::{forward_binop, rat, ratio, BetaMode, ParamScalar};
use crate::error::{Error, Result};

/// Largest supported truncation degree (exponents are packed in nibbles).
pub const MAX_DEGREE: u32 = 15;

/// `Err` if `d` exceeds [`MAX_DEGREE`].
pub fn check_degree(d: u32) -> Result<()> {
    if d > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            requested: d,
            limit: MAX_DEGREE,
        });
    }
    Ok(())
}

/// A time variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T(u32),
    TBar(u32),
}

impl Var {
    pub fn weight(self) -> u32 {
        match self {
            Var::T(k) | Var::TBar(k) => k,
        }
    }

    fn shift(self) -> u32 {
        match self {
            Var::T(k) => {
                assert!((1..=MAX_DEGREE).contains(&k), "time index {k} out of range");
                4 * (32 - k)
            }
            Var::TBar(k) => {
                assert!((1..=MAX_DEGREE).contains(&k), "time index {k} out of range");
                4 * (16 - k)
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T(k) => write!(f, "t{k}"),
            Var::TBar(k) => write!(f, "tb{k}"),
        }
    }
}

/// Monomial in the times, packed four bits per exponent.
///
/// Ordering is graded: first by weighted degree, then lexicographically on
/// the exponent vector `(e(t_1), …, e(t_15), e(t̄_1), …, e(t̄_15))`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    deg: u8,
    bits: u128,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { deg: 0, bits: 0 };

    pub fn var(v: Var) -> Monomial {
        Monomial {
            deg: v.weight() as u8,
            bits: 1u128 << v.shift(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn exponent(&self, v: Var) -> u32 {
        ((self.bits >> v.shift()) & 0xf) as u32
    }

    /// Builds from `(k, e)` lists; fails if the degree exceeds [`MAX_DEGREE`].
    pub fn from_pairs(t: &[(u32, u32)], tbar: &[(u32, u32)]) -> Result<Monomial> {
        let mut m = Monomial::ONE;
        let mut deg = 0u32;
        for (vars, make) in [(t, Var::T as fn(u32) -> Var), (tbar, Var::TBar)] {
            for &(k, e) in vars {
                if k == 0 || k > MAX_DEGREE {
                    return Err(Error::Parse(format!("time index {k} out of range")));
                }
                deg += k * e;
                if deg > MAX_DEGREE {
                    return Err(Error::DegreeTooLarge {
                        requested: deg,
                        limit: MAX_DEGREE,
                    });
                }
                let v = make(k);
                let cur = m.exponent(v);
                m.bits = (m.bits & !(0xf << v.shift())) | (((cur + e) as u128) << v.shift());
            }
        }
        m.deg = deg as u8;
        Ok(m)
    }

    fn exps(&self, hi_base: u32) -> Vec<(u32, u32)> {
        (1..=MAX_DEGREE)
            .filter_map(|k| {
                let e = ((self.bits >> (4 * (hi_base - k))) & 0xf) as u32;
                (e > 0).then_some((k, e))
            })
            .collect()
    }

    /// Nonzero `(k, e)` pairs of the `t` part.
    pub fn t_exponents(&self) -> Vec<(u32, u32)> {
        self.exps(32)
    }

    /// Nonzero `(k, e)` pairs of the `t̄` part.
    pub fn tbar_exponents(&self) -> Vec<(u32, u32)> {
        self.exps(16)
    }

    /// Weighted degree of the `t` part.
    pub fn t_degree(&self) -> u32 {
        self.t_exponents().iter().map(|(k, e)| k * e).sum()
    }

    /// Product; the caller guarantees the degree stays within [`MAX_DEGREE`].
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: Monomial) -> Monomial {
        debug_assert!(self.deg as u32 + o.deg as u32 <= MAX_DEGREE);
        Monomial {
            deg: self.deg + o.deg,
            bits: self.bits + o.bits,
        }
    }

    /// Product, `None` when it would exceed [`MAX_DEGREE`].
    pub fn mul_checked(self, o: Monomial) -> Option<Monomial> {
        (self.degree() + o.degree() <= MAX_DEGREE).then(|| self.mul(o))
    }

    /// `self / v`, `None` if `v` does not divide.
    pub fn div_var(self, v: Var) -> Option<Monomial> {
        (self.exponent(v) > 0).then(|| Monomial {
            deg: self.deg - v.weight() as u8,
            bits: self.bits - (1u128 << v.shift()),
        })
    }

    /// Variables with positive exponent.
    pub fn vars(&self) -> Vec<(Var, u32)> {
        let mut out: Vec<(Var, u32)> = self
            .t_exponents()
            .into_iter()
            .map(|(k, e)| (Var::T(k), e))
            .collect();
        out.extend(
            self.tbar_exponents()
                .into_iter()
                .map(|(k, e)| (Var::TBar(k), e)),
        );
        out
    }

    /// Exchanges `t_k` and `t̄_k`.
    pub fn swap_t_tbar(self) -> Monomial {
        let hi = self.bits >> 64;
        let lo = self.bits & ((1u128 << 64) - 1);
        Monomial {
            deg: self.deg,
            bits: (lo << 64) | hi,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if vars.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in vars.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Series in `t`, `t̄` truncated above weighted degree `D`, with
/// [`ParamScalar`] coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct TSeries {
    d: u32,
    mode: BetaMode,
    terms: BTreeMap<Monomial, ParamScalar>,
}

impl TSeries {
    pub fn zero(d: u32, mode: BetaMode) -> Self {
        assert!(
            d <= MAX_DEGREE,
            "truncation degree {d} exceeds {MAX_DEGREE}"
        );
        TSeries {
            d,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: u32, mode: BetaMode) -> Self {
        Self::constant(ParamScalar::one(mode), d)
    }

    pub fn constant(c: ParamScalar, d: u32) -> Self {
        let mut out = Self::zero(d, c.mode());
        out.add_term(Monomial::ONE, c);
        out
    }

    /// The variable `v` (zero if its weight exceeds `d`).
    pub fn var(v: Var, d: u32, mode: BetaMode) -> Self {
        Self::monomial(Monomial::var(v), ParamScalar::one(mode), d)
    }

    pub fn monomial(m: Monomial, c: ParamScalar, d: u32) -> Self {
        let mut out = Self::zero(d, c.mode());
        out.add_term(m, c);
        out
    }

    pub fn degree_bound(&self) -> u32 {
        self.d
    }

    pub fn mode(&self) -> BetaMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ParamScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| ParamScalar::zero(self.mode))
    }

    pub fn constant_term(&self) -> ParamScalar {
        self.coeff(&Monomial::ONE)
    }

    /// Smallest degree carrying a term, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: ParamScalar) {
        if m.degree() > self.d || c.is_zero() {
            return;
        }
        assert_eq!(c.mode(), self.mode, "beta mode mismatch");
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_product_term(&mut self, m: Monomial, a: &ParamScalar, b: &ParamScalar) {
        let slot = self
            .terms
            .entry(m)
            .or_insert_with(|| ParamScalar::zero(a.mode()));
        slot.add_product(a, b);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DegreeMismatch {
                left: self.d,
                right: other.d,
            });
        }
        if self.mode != other.mode {
            return Err(Error::BetaModeMismatch {
                left: self.mode.to_string(),
                right: other.mode.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.d, self.mode);
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = other.terms.iter().collect();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                // terms are sorted by degree, so the rest of `b` is too high
                if ma.degree() + mb.degree() > self.d {
                    break;
                }
                out.add_product_term(ma.mul(**mb), ca, cb);
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scalar_mul(&self, c: &ParamScalar) -> Self {
        let mut out = Self::zero(self.d, self.mode);
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&rat(n))
    }

    pub fn map_coeffs(&self, f: impl Fn(&ParamScalar) -> ParamScalar) -> Self {
        let mut out = Self::zero(self.d, self.mode);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Like [`map_coeffs`](Self::map_coeffs) but lets the coefficient mode change.
    pub fn map_coeffs_mode(&self, mode: BetaMode, f: impl Fn(&ParamScalar) -> ParamScalar) -> Self {
        let mut out = Self::zero(self.d, mode);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Re-reads coefficients in another `β` mode; see [`ParamScalar::with_mode`].
    pub fn with_mode(&self, mode: BetaMode) -> Result<Self> {
        let mut out = Self::zero(self.d, mode);
        for (m, c) in &self.terms {
            out.add_term(*m, c.with_mode(mode)?);
        }
        Ok(out)
    }

    /// Multiplies by a monomial in the times.
    pub fn mul_monomial(&self, m: Monomial) -> Self {
        let mut out = Self::zero(self.d, self.mode);
        for (k, c) in &self.terms {
            if k.degree() + m.degree() <= self.d {
                out.add_term(k.mul(m), c.clone());
            }
        }
        out
    }

    /// Multiplies by `m` and raises the truncation degree by `deg m`.
    /// Sound: if `self` is exact through `D`, the product is exact through
    /// `D + deg m`.
    pub fn mul_monomial_lift(&self, m: Monomial) -> Self {
        let d = (self.d + m.degree()).min(MAX_DEGREE);
        let mut out = Self::zero(d, self.mode);
        for (k, c) in &self.terms {
            if k.degree() + m.degree() <= d {
                out.add_term(k.mul(m), c.clone());
            }
        }
        out
    }

    /// Drops everything above degree `d` (which must not exceed the current bound).
    pub fn truncate(&self, d: u32) -> Result<Self> {
        if d > self.d {
            return Err(Error::DegreeTooLarge {
                requested: d,
                limit: self.d,
            });
        }
        let mut out = Self::zero(d, self.mode);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    /// Homogeneous component of degree `g`.
    pub fn homogeneous(&self, g: u32) -> Self {
        let mut out = Self::zero(self.d, self.mode);
        for (m, c) in self.terms.iter().filter(|(m, _)| m.degree() == g) {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Keeps the terms selected by `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial, &ParamScalar) -> bool) -> Self {
        let mut out = Self::zero(self.d, self.mode);
        for (m, c) in self.terms.iter().filter(|(m, c)| keep(m, c)) {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.d, self.mode);
        for _ in 0..n {
            out = &out * self;
            if out.is_zero() {
                break;
            }
        }
        out
    }

    /// Largest `n` for which `x^n` can be nonzero when `x` has no constant term.
    fn nil_bound(&self) -> u32 {
        self.d
    }

    /// `exp(f)`. The constant term must vanish, or be a `β`-nilpotent scalar.
    pub fn exp_series(&self) -> Result<Self> {
        let c = self.constant_term();
        let x = self.filter(|m, _| m.degree() > 0);
        let mut acc = Self::one(self.d, self.mode);
        let mut power = Self::one(self.d, self.mode);
        for k in 1..=self.nil_bound() {
            power = (&power * &x).scale(&ratio(1, k as i64));
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        if c.is_zero() {
            Ok(acc)
        } else {
            Ok(acc.scalar_mul(&c.exp_nilpotent()?))
        }
    }

    /// `log(1 + x)` for `x` without constant term.
    fn log1p_nilpotent(x: &Self) -> Self {
        let mut acc = Self::zero(x.d, x.mode);
        let mut power = Self::one(x.d, x.mode);
        for k in 1..=x.nil_bound() {
            power = &power * x;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += &power.scale(&ratio(sign, k as i64));
        }
        acc
    }

    /// Splits `f = c · exp(g)` with `c` the constant term and `g(0) = 0`.
    pub fn log_unit(&self) -> Result<(ParamScalar, Self)> {
        let c = self.constant_term();
        let c_inv = c.inverse()?;
        let x = self.scalar_mul(&c_inv).filter(|m, _| m.degree() > 0);
        Ok((c, Self::log1p_nilpotent(&x)))
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let c_inv = self.constant_term().inverse()?;
        let x = -self.scalar_mul(&c_inv).filter(|m, _| m.degree() > 0);
        let mut acc = Self::one(self.d, self.mode);
        let mut power = Self::one(self.d, self.mode);
        for _ in 1..=self.nil_bound() {
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        Ok(acc.scalar_mul(&c_inv))
    }

    /// `∂f/∂v`. The result is exact only through degree `D - weight(v)`,
    /// which becomes its truncation degree.
    pub fn derive(&self, v: Var) -> Self {
        let d = self.d.saturating_sub(v.weight());
        let mut out = Self::zero(d, self.mode);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(
                    m.div_var(v).expect("exponent checked"),
                    c.scale_int(e as i64),
                );
            }
        }
        out
    }

    /// `∂/∂s` on the coefficients.
    pub fn d_s(&self) -> Self {
        self.map_coeffs(ParamScalar::d_s)
    }

    /// `∂/∂β` on the coefficients; see [`ParamScalar::d_beta`] for the mode change.
    pub fn d_beta(&self) -> Self {
        let mode = match self.mode {
            BetaMode::Poly => BetaMode::Poly,
            BetaMode::Trunc(n) => BetaMode::Trunc(n.saturating_sub(1)),
        };
        self.map_coeffs_mode(mode, ParamScalar::d_beta)
    }

    /// Divides every coefficient by `β`.
    pub fn div_beta(&self) -> Result<Self> {
        let mode = match self.mode {
            BetaMode::Poly => BetaMode::Poly,
            BetaMode::Trunc(n) => BetaMode::Trunc(n.saturating_sub(1)),
        };
        let mut out = Self::zero(self.d, mode);
        for (m, c) in &self.terms {
            out.add_term(*m, c.div_beta()?);
        }
        Ok(out)
    }

    /// Exchanges `t_k ↔ t̄_k`.
    pub fn swap_t_tbar(&self) -> Self {
        let mut out = Self::zero(self.d, self.mode);
        for (m, c) in &self.terms {
            out.add_term(m.swap_t_tbar(), c.clone());
        }
        out
    }

    /// Substitutes series for variables, keeping unassigned variables.
    ///
    /// Every image must be zero or have all terms of degree at least the
    /// weight of the variable it replaces; otherwise truncated content of
    /// `self` could feed low degrees and the result is rejected.
    pub fn substitute(&self, assignment: &BTreeMap<Var, TSeries>) -> Result<Self> {
        for (v, img) in assignment {
            self.check(img)?;
            if let Some(low) = img.min_degree() {
                if low < v.weight() {
                    return Err(Error::UnsoundSubstitution(format!(
                        "{v} ↦ series with a degree-{low} term"
                    )));
                }
            }
        }
        let mut cache: HashMap<(Var, u32), TSeries> = HashMap::new();
        let mut out = Self::zero(self.d, self.mode);
        for (m, c) in &self.terms {
            let mut term = TSeries::constant(c.clone(), self.d);
            for (v, e) in m.vars() {
                let factor = match assignment.get(&v) {
                    Some(img) => cache.entry((v, e)).or_insert_with(|| img.pow(e)).clone(),
                    None => TSeries::monomial(
                        Monomial::var(v).pow_unchecked(e),
                        ParamScalar::one(self.mode),
                        self.d,
                    ),
                };
                term = &term * &factor;
                if term.is_zero() {
                    break;
                }
            }
            out += &term;
        }
        Ok(out)
    }

    /// Sets variables to scalar values; unassigned variables stay.
    ///
    /// A term of the result of degree `g` collects source terms of degree
    /// `g` plus the weight of the evaluated part, so the result is exact
    /// only through a degree the caller must know. `result_degree` is that
    /// bound; for a series whose `t`- and `t̄`-degrees agree termwise,
    /// evaluating all of one side gives `D / 2`.
    pub fn evaluate(
        &self,
        values: &BTreeMap<Var, ParamScalar>,
        result_degree: u32,
    ) -> Result<Self> {
        if result_degree > self.d {
            return Err(Error::DegreeTooLarge {
                requested: result_degree,
                limit: self.d,
            });
        }
        let mut out = Self::zero(result_degree, self.mode);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::ONE;
            for (v, e) in m.vars() {
                match values.get(&v) {
                    Some(x) => coeff = &coeff * &x.pow(e),
                    None => rest = rest.mul(Monomial::var(v).pow_unchecked(e)),
                }
                if coeff.is_zero() {
                    break;
                }
            }
            if rest.degree() <= result_degree {
                out.add_term(rest, coeff);
            }
        }
        Ok(out)
    }
}

impl Monomial {
    fn pow_unchecked(self, e: u32) -> Monomial {
        Monomial {
            deg: self.deg * e as u8,
            bits: self.bits * e as u128,
        }
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.degree() == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [D={}, {}]", self.d, self.mode)
    }
}

forward_binop!(Add, add, checked_add, TSeries);
forward_binop!(Sub, sub, checked_sub, TSeries);
forward_binop!(Mul, mul, checked_mul, TSeries);

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        -&self
    }
}

impl AddAssign<&TSeries> for TSeries {
    fn add_assign(&mut self, rhs: &TSeries) {
        self.check(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl TSeries {
    /// True if every coefficient is zero after rational comparison.
    pub fn is_exactly(&self, other: &Self) -> bool {
        self.check(other).is_ok() && (self - other).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: BetaMode = BetaMode::Poly;

    fn t(k: u32, d: u32) -> TSeries {
        TSeries::var(Var::T(k), d, P)
    }
    fn tb(k: u32, d: u32) -> TSeries {
        TSeries::var(Var::TBar(k), d, P)
    }

    #[test]
    fn difference_of_squares() {
        let one = TSeries::one(4, P);
        let x = &one + &t(1, 4);
        let y = &one - &t(1, 4);
        assert_eq!(&x * &y, &one - &t(1, 4).pow(2));
    }

    #[test]
    fn product_truncates() {
        assert!((&t(2, 4) * &tb(3, 4)).is_zero());
        assert!(!(&t(2, 5) * &tb(3, 5)).is_zero());
    }

    #[test]
    fn degree_mismatch_errors() {
        assert!(matches!(
            t(1, 3).checked_add(&t(1, 4)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn exp_of_t1() {
        let e = t(1, 3).exp_series().unwrap();
        let expected = &(&(&TSeries::one(3, P) + &t(1, 3)) + &t(1, 3).pow(2).scale(&ratio(1, 2)))
            + &t(1, 3).pow(3).scale(&ratio(1, 6));
        assert_eq!(e, expected);
        assert_eq!(
            TSeries::zero(3, P).exp_series().unwrap(),
            TSeries::one(3, P)
        );
    }

    #[test]
    fn exp_log_round_trip() {
        let f = &TSeries::one(6, P) + &t(2, 6);
        let (c, g) = f.log_unit().unwrap();
        assert!(c.is_one());
        assert_eq!(g.exp_series().unwrap(), f);
        assert!(TSeries::constant(ParamScalar::one(P), 3)
            .log_unit()
            .unwrap()
            .1
            .is_zero());
    }

    #[test]
    fn nonnilpotent_exp_rejected() {
        let f = TSeries::one(3, P);
        assert!(matches!(
            f.exp_series(),
            Err(Error::NonNilpotentConstant(_))
        ));
    }

    #[test]
    fn derivative_examples() {
        let d = t(2, 6).pow(2).derive(Var::T(2));
        assert_eq!(d, t(2, 4).scale_int(2));
        assert_eq!(d.degree_bound(), 4);
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::from_pairs(&[(1, 2)], &[]).unwrap();
        let b = Monomial::from_pairs(&[(3, 1)], &[]).unwrap();
        let c = Monomial::from_pairs(&[], &[(1, 1)]).unwrap();
        assert!(c < a && a < b);
        assert_eq!(
            a.swap_t_tbar(),
            Monomial::from_pairs(&[], &[(1, 2)]).unwrap()
        );
        assert_eq!(a.to_string(), "t1^2");
    }

    #[test]
    fn scalar_substitution_example() {
        let d = 4;
        let mut f = TSeries::zero(d, P);
        for k in 1..=d {
            let term = (&t(k, d) * &tb(k, d)).scale_int(-(k as i64));
            f += &term.scalar_mul(&ParamScalar::q_pow(k as i32, P));
        }
        let e = f.exp_series().unwrap();
        let mut values = BTreeMap::new();
        values.insert(Var::TBar(1), ParamScalar::from_int(-1, P));
        for k in 2..=d {
            values.insert(Var::TBar(k), ParamScalar::zero(P));
        }
        let got = e.evaluate(&values, d / 2).unwrap();
        let expected = TSeries::var(Var::T(1), d / 2, P)
            .scalar_mul(&ParamScalar::q_pow(1, P))
            .exp_series()
            .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn unsound_substitution_rejected() {
        let mut a = BTreeMap::new();
        a.insert(Var::T(2), t(1, 4));
        assert!(matches!(
            t(2, 4).substitute(&a),
            Err(Error::UnsoundSubstitution(_))
        ));
        let mut a = BTreeMap::new();
        a.insert(Var::T(1), t(2, 4));
        assert_eq!(t(1, 4).pow(2).substitute(&a).unwrap(), t(2, 4).pow(2));
    }
}
