//! Exact coefficients with formal parameters.
//!
//! A [`ParamScalar`] is a finite sum `Σ r · β^a s^b Q^q B^e c^k ħ^h` with
//! rational `r`. `β` and `s` carry non-negative exponents, the others are
//! Laurent generators. `B` stands for `Q·e^{βs}`: it is algebraically
//! independent but differentiates as `∂_s B = βB`, `∂_β B = sB`.
//! `c` and `ħ` are auxiliary bookkeeping generators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// How the coefficient ring treats `β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BetaMode {
    /// `β` is a polynomial variable.
    Poly,
    /// `β` is a power series variable; terms `β^a` with `a >= N` are dropped.
    Trunc(u32),
}

impl BetaMode {
    #[inline]
    pub fn keeps(self, e_beta: u32) -> bool {
        match self {
            BetaMode::Poly => true,
            BetaMode::Trunc(n) => e_beta < n,
        }
    }
}

impl fmt::Display for BetaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaMode::Poly => f.write_str("poly"),
            BetaMode::Trunc(n) => write!(f, "trunc({n})"),
        }
    }
}

/// Exponent vector of a parameter monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParamMonomial {
    pub beta: u32,
    pub s: u32,
    pub q: i32,
    pub b: i32,
    pub c: i32,
    pub hbar: i32,
}

impl ParamMonomial {
    pub const ONE: ParamMonomial = ParamMonomial {
        beta: 0,
        s: 0,
        q: 0,
        b: 0,
        c: 0,
        hbar: 0,
    };

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: ParamMonomial) -> ParamMonomial {
        ParamMonomial {
            beta: self.beta + o.beta,
            s: self.s + o.s,
            q: self.q + o.q,
            b: self.b + o.b,
            c: self.c + o.c,
            hbar: self.hbar + o.hbar,
        }
    }

    /// Inverse, defined only when no `β` or `s` appears.
    pub fn inverse(self) -> Option<ParamMonomial> {
        (self.beta == 0 && self.s == 0).then_some(ParamMonomial {
            beta: 0,
            s: 0,
            q: -self.q,
            b: -self.b,
            c: -self.c,
            hbar: -self.hbar,
        })
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, name: &str, e: i64| -> fmt::Result {
            if e == 0 {
                return Ok(());
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                f.write_str(name)
            } else {
                write!(f, "{name}^{e}")
            }
        };
        put(f, "beta", self.beta as i64)?;
        put(f, "s", self.s as i64)?;
        put(f, "Q", self.q as i64)?;
        put(f, "B", self.b as i64)?;
        put(f, "c", self.c as i64)?;
        put(f, "hbar", self.hbar as i64)?;
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Element of `ℚ[β, s, Q^±, B^±, c^±, ħ^±]`, with `β` optionally truncated.
#[derive(Clone, PartialEq, Eq)]
pub struct ParamScalar {
    mode: BetaMode,
    terms: BTreeMap<ParamMonomial, BigRational>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ParamScalar {
    pub fn zero(mode: BetaMode) -> Self {
        ParamScalar {
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(mode: BetaMode) -> Self {
        Self::from_rational(BigRational::one(), mode)
    }

    pub fn from_int(n: i64, mode: BetaMode) -> Self {
        Self::from_rational(rat(n), mode)
    }

    pub fn from_rational(r: BigRational, mode: BetaMode) -> Self {
        Self::term(r, ParamMonomial::ONE, mode)
    }

    /// `r · m`, dropped if `r == 0` or `m` is truncated by `mode`.
    pub fn term(r: BigRational, m: ParamMonomial, mode: BetaMode) -> Self {
        let mut out = Self::zero(mode);
        out.add_term(m, r);
        out
    }

    pub fn beta(mode: BetaMode) -> Self {
        Self::monomial(
            ParamMonomial {
                beta: 1,
                ..ParamMonomial::ONE
            },
            mode,
        )
    }

    pub fn s(mode: BetaMode) -> Self {
        Self::monomial(
            ParamMonomial {
                s: 1,
                ..ParamMonomial::ONE
            },
            mode,
        )
    }

    pub fn q_pow(e: i32, mode: BetaMode) -> Self {
        Self::monomial(
            ParamMonomial {
                q: e,
                ..ParamMonomial::ONE
            },
            mode,
        )
    }

    pub fn b_pow(e: i32, mode: BetaMode) -> Self {
        Self::monomial(
            ParamMonomial {
                b: e,
                ..ParamMonomial::ONE
            },
            mode,
        )
    }

    pub fn c_pow(e: i32, mode: BetaMode) -> Self {
        Self::monomial(
            ParamMonomial {
                c: e,
                ..ParamMonomial::ONE
            },
            mode,
        )
    }

    pub fn hbar_pow(e: i32, mode: BetaMode) -> Self {
        Self::monomial(
            ParamMonomial {
                hbar: e,
                ..ParamMonomial::ONE
            },
            mode,
        )
    }

    pub fn monomial(m: ParamMonomial, mode: BetaMode) -> Self {
        Self::term(BigRational::one(), m, mode)
    }

    pub fn mode(&self) -> BetaMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&ParamMonomial::ONE)
                .is_some_and(|r| r.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &ParamMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the empty monomial.
    pub fn constant(&self) -> BigRational {
        self.coeff(&ParamMonomial::ONE)
    }

    /// Is this a plain rational (no parameters)?
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&ParamMonomial::ONE).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: ParamMonomial, r: BigRational) {
        if r.is_zero() || !self.mode.keeps(m.beta) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += r;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_mode(&self, other: &Self) -> Result<()> {
        if self.mode == other.mode {
            Ok(())
        } else {
            Err(Error::BetaModeMismatch {
                left: self.mode.to_string(),
                right: other.mode.to_string(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_mode(other)?;
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.add_term(*m, r.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_mode(other)?;
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.add_term(*m, -r.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_mode(other)?;
        let mut out = Self::zero(self.mode);
        for (ma, ra) in &self.terms {
            for (mb, rb) in &other.terms {
                out.add_term(ma.mul(*mb), ra * rb);
            }
        }
        Ok(out)
    }

    /// In-place `self += other`; panics on mode mismatch.
    pub fn add_assign_ref(&mut self, other: &Self) {
        assert_eq!(self.mode, other.mode, "beta mode mismatch");
        for (m, r) in &other.terms {
            self.add_term(*m, r.clone());
        }
    }

    /// `self += a * b` without an intermediate allocation per term.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        assert!(
            self.mode == a.mode && a.mode == b.mode,
            "beta mode mismatch"
        );
        for (ma, ra) in &a.terms {
            for (mb, rb) in &b.terms {
                self.add_term(ma.mul(*mb), ra * rb);
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero(self.mode);
        }
        ParamScalar {
            mode: self.mode,
            terms: self.terms.iter().map(|(m, c)| (*m, c * r)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&rat(n))
    }

    /// Multiplies by a single parameter monomial.
    pub fn mul_monomial(&self, m: ParamMonomial) -> Self {
        let mut out = Self::zero(self.mode);
        for (k, r) in &self.terms {
            out.add_term(k.mul(m), r.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.mode);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// The part of `self` without `β`.
    pub fn beta_free_part(&self) -> Self {
        ParamScalar {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.beta == 0)
                .map(|(m, r)| (*m, r.clone()))
                .collect(),
        }
    }

    /// Coefficient of `β^k` as a `β`-free scalar.
    pub fn beta_coeff(&self, k: u32) -> Self {
        ParamScalar {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.beta == k)
                .map(|(m, r)| (ParamMonomial { beta: 0, ..*m }, r.clone()))
                .collect(),
        }
    }

    /// Nilpotent in the truncated ring: every term carries `β`.
    pub fn is_beta_nilpotent(&self) -> bool {
        matches!(self.mode, BetaMode::Trunc(_)) && self.terms.keys().all(|m| m.beta > 0)
    }

    /// Multiplicative inverse.
    ///
    /// The `β`-free part must be a single monomial without `s`; any `β`
    /// tail is inverted geometrically, which needs truncated `β`.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self.beta_free_part();
        let (m, r) = match lead.terms.iter().next() {
            Some((m, r)) if lead.terms.len() == 1 => (*m, r.clone()),
            _ => return Err(Error::NotInvertible(self.to_string())),
        };
        let m_inv = m
            .inverse()
            .ok_or_else(|| Error::NotInvertible(self.to_string()))?;
        let lead_inv = Self::term(r.recip(), m_inv, self.mode);
        let rest = self - &lead;
        if rest.is_zero() {
            return Ok(lead_inv);
        }
        let BetaMode::Trunc(n) = self.mode else {
            return Err(Error::NotInvertible(self.to_string()));
        };
        let x = -(&lead_inv * &rest);
        let mut acc = Self::one(self.mode);
        let mut power = Self::one(self.mode);
        for _ in 1..n {
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        Ok(&lead_inv * &acc)
    }

    /// `exp(self)` for a `β`-nilpotent element of the truncated ring.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::one(self.mode));
        }
        if !self.is_beta_nilpotent() {
            return Err(Error::NonNilpotentConstant(self.to_string()));
        }
        let mut acc = Self::one(self.mode);
        let mut power = Self::one(self.mode);
        let mut k = 1i64;
        loop {
            power = (&power * self).scale(&ratio(1, k));
            if power.is_zero() {
                break;
            }
            acc += &power;
            k += 1;
        }
        Ok(acc)
    }

    /// `∂/∂s` with `∂_s B = βB`.
    pub fn d_s(&self) -> Self {
        let mut out = Self::zero(self.mode);
        for (m, r) in &self.terms {
            if m.s > 0 {
                out.add_term(ParamMonomial { s: m.s - 1, ..*m }, r * rat(m.s as i64));
            }
            if m.b != 0 {
                out.add_term(
                    ParamMonomial {
                        beta: m.beta + 1,
                        ..*m
                    },
                    r * rat(m.b as i64),
                );
            }
        }
        out
    }

    /// `∂/∂β` with `∂_β B = sB`. In truncated mode `Trunc(N)` the result is
    /// only known below `β^{N-1}` and is returned in mode `Trunc(N-1)`.
    pub fn d_beta(&self) -> Self {
        let mode = match self.mode {
            BetaMode::Poly => BetaMode::Poly,
            BetaMode::Trunc(n) => BetaMode::Trunc(n.saturating_sub(1)),
        };
        let mut out = Self::zero(mode);
        for (m, r) in &self.terms {
            if m.beta > 0 {
                out.add_term(
                    ParamMonomial {
                        beta: m.beta - 1,
                        ..*m
                    },
                    r * rat(m.beta as i64),
                );
            }
            if m.b != 0 {
                out.add_term(ParamMonomial { s: m.s + 1, ..*m }, r * rat(m.b as i64));
            }
        }
        out
    }

    /// Divides by `β`; fails if some term lacks a `β` factor.
    pub fn div_beta(&self) -> Result<Self> {
        if self.terms.keys().any(|m| m.beta == 0) {
            return Err(Error::NotDivisibleByBeta(self.to_string()));
        }
        let mode = match self.mode {
            BetaMode::Poly => BetaMode::Poly,
            BetaMode::Trunc(n) => BetaMode::Trunc(n.saturating_sub(1)),
        };
        let mut out = Self::zero(mode);
        for (m, r) in &self.terms {
            out.add_term(
                ParamMonomial {
                    beta: m.beta - 1,
                    ..*m
                },
                r.clone(),
            );
        }
        Ok(out)
    }

    /// Re-reads the coefficients under another mode. Allowed when the
    /// target keeps no more `β` orders than `self` does.
    pub fn with_mode(&self, mode: BetaMode) -> Result<Self> {
        let ok = match (self.mode, mode) {
            (a, b) if a == b => true,
            (BetaMode::Poly, BetaMode::Trunc(_)) => true,
            (BetaMode::Trunc(n), BetaMode::Trunc(m)) => m <= n,
            _ => false,
        };
        if !ok {
            return Err(Error::BetaModeMismatch {
                left: self.mode.to_string(),
                right: mode.to_string(),
            });
        }
        let mut out = Self::zero(mode);
        for (m, r) in &self.terms {
            out.add_term(*m, r.clone());
        }
        Ok(out)
    }

    /// Ring homomorphism given by the image of each monomial (with unit
    /// coefficient); results are summed with the original coefficients.
    pub fn substitute_monomials(&self, image: impl Fn(&ParamMonomial) -> ParamScalar) -> Self {
        let mut out = Self::zero(self.mode);
        for (m, r) in &self.terms {
            let img = image(m);
            assert_eq!(img.mode, self.mode, "beta mode mismatch");
            for (k, c) in &img.terms {
                out.add_term(*k, r * c);
            }
        }
        out
    }

    /// Keeps the terms selected by `keep`.
    pub fn filter(&self, keep: impl Fn(&ParamMonomial) -> bool) -> Self {
        ParamScalar {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, r)| (*m, r.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, r)) in self.terms.iter().enumerate() {
            let neg = r.is_negative();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let a = r.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [{}]", self.mode)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident, $ty:ty) => {
        impl $tr<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

forward_binop!(Add, add, checked_add, ParamScalar);
forward_binop!(Sub, sub, checked_sub, ParamScalar);
forward_binop!(Mul, mul, checked_mul, ParamScalar);

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            mode: self.mode,
            terms: self.terms.iter().map(|(m, r)| (*m, -r.clone())).collect(),
        }
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        -&self
    }
}

impl AddAssign<&ParamScalar> for ParamScalar {
    fn add_assign(&mut self, rhs: &ParamScalar) {
        self.add_assign_ref(rhs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: BetaMode = BetaMode::Poly;

    #[test]
    fn ring_basics() {
        let b = ParamScalar::beta(P);
        let one = ParamScalar::one(P);
        let x = &one + &b;
        let y = &one - &b;
        assert_eq!(&x * &y, &one - &b.pow(2));
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn truncation_drops_high_beta() {
        let m = BetaMode::Trunc(2);
        let b = ParamScalar::beta(m);
        assert!(b.pow(2).is_zero());
        assert!(!b.is_zero());
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let a = ParamScalar::one(P);
        let b = ParamScalar::one(BetaMode::Trunc(3));
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::BetaModeMismatch { .. })
        ));
    }

    #[test]
    fn s_derivative_of_b() {
        let b2 = ParamScalar::b_pow(2, P);
        let expected = (&ParamScalar::beta(P) * &b2).scale_int(2);
        assert_eq!(b2.d_s(), expected);
        assert_eq!(ParamScalar::s(P).d_s(), ParamScalar::one(P));
    }

    #[test]
    fn inverse_of_unit_with_beta_tail() {
        let m = BetaMode::Trunc(5);
        let x = &ParamScalar::q_pow(2, m) + &(&ParamScalar::beta(m) * &ParamScalar::q_pow(2, m));
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert!(ParamScalar::s(P).inverse().is_err());
        assert!((&ParamScalar::one(P) + &ParamScalar::beta(P))
            .inverse()
            .is_err());
    }

    #[test]
    fn exp_of_beta() {
        let m = BetaMode::Trunc(4);
        let e = ParamScalar::beta(m).exp_nilpotent().unwrap();
        assert_eq!(
            e.coeff(&ParamMonomial {
                beta: 3,
                ..ParamMonomial::ONE
            }),
            ratio(1, 6)
        );
        let back = (-ParamScalar::beta(m)).exp_nilpotent().unwrap();
        assert!((&e * &back).is_one());
        assert!(ParamScalar::beta(P).exp_nilpotent().is_err());
    }

    #[test]
    fn div_beta_checks() {
        let b = ParamScalar::beta(P);
        assert!(b.div_beta().unwrap().is_one());
        assert!(ParamScalar::one(P).div_beta().is_err());
    }

    #[test]
    fn display() {
        let x = &ParamScalar::b_pow(-1, P).scale(&ratio(-1, 2)) + &ParamScalar::beta(P);
        assert_eq!(x.to_string(), "-1/2*B^-1 + beta");
        assert_eq!(ParamScalar::zero(P).to_string(), "0");
    }
}
