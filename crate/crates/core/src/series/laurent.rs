//! Laurent series in the symbol `p` with [`TSeries`] coefficients.
//!
//! Every value has a finite top exponent. An optional floor drops all
//! exponents below it after each product; without a floor the series is a
//! Laurent polynomial and products are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::BigRational;

use super::scalar::{forward_binop, rat, ratio, BetaMode, ParamScalar};
use super::tseries::{TSeries, Var};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct PLaurent {
    d: u32,
    mode: BetaMode,
    floor: Option<i32>,
    terms: BTreeMap<i32, TSeries>,
}

fn min_floor(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    }
}

impl PLaurent {
    pub fn zero(d: u32, mode: BetaMode) -> Self {
        PLaurent {
            d,
            mode,
            floor: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: u32, mode: BetaMode) -> Self {
        Self::from_series(TSeries::one(d, mode), 0)
    }

    /// `c · p^n`.
    pub fn from_series(c: TSeries, n: i32) -> Self {
        let mut out = Self::zero(c.degree_bound(), c.mode());
        out.add_term(n, c);
        out
    }

    /// `p^n`.
    pub fn p_pow(n: i32, d: u32, mode: BetaMode) -> Self {
        Self::from_series(TSeries::one(d, mode), n)
    }

    /// Sets the truncation floor, dropping exponents below it.
    pub fn with_floor(mut self, floor: Option<i32>) -> Self {
        self.floor = floor;
        if let Some(f) = floor {
            self.terms.retain(|&n, _| n >= f);
        }
        self
    }

    pub fn floor(&self) -> Option<i32> {
        self.floor
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

    /// Highest exponent present.
    pub fn top(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent present.
    pub fn bottom(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &TSeries)> {
        self.terms.iter()
    }

    fn add_term(&mut self, n: i32, c: TSeries) {
        if c.is_zero() || self.floor.is_some_and(|f| n < f) {
            return;
        }
        match self.terms.entry(n) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Coefficient of `p^n`. Exponents below the floor are unknown and
    /// rejected; above the top the coefficient is genuinely zero.
    pub fn coeff(&self, n: i32) -> Result<TSeries> {
        if let Some(f) = self.floor {
            if n < f {
                return Err(Error::OutsideWindow {
                    exponent: n,
                    lo: f,
                    hi: self.top().unwrap_or(f),
                });
            }
        }
        Ok(self
            .terms
            .get(&n)
            .cloned()
            .unwrap_or_else(|| TSeries::zero(self.d, self.mode)))
    }

    /// `res(f dp)`, the coefficient of `p^{-1}`.
    pub fn residue(&self) -> Result<TSeries> {
        self.coeff(-1)
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
        let mut out = self.clone().with_floor(min_floor(self.floor, other.floor));
        for (n, c) in &other.terms {
            out.add_term(*n, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone().with_floor(min_floor(self.floor, other.floor));
        for (n, c) in &other.terms {
            out.add_term(*n, -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.d, self.mode).with_floor(min_floor(self.floor, other.floor));
        for (na, ca) in &self.terms {
            for (nb, cb) in &other.terms {
                let n = na + nb;
                if out.floor.is_some_and(|f| n < f) {
                    continue;
                }
                out.add_term(n, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by the series `c`.
    pub fn series_mul(&self, c: &TSeries) -> Self {
        let mut out = Self::zero(self.d, self.mode).with_floor(self.floor);
        for (n, a) in &self.terms {
            out.add_term(*n, a * c);
        }
        out
    }

    pub fn scalar_mul(&self, c: &ParamScalar) -> Self {
        self.map_coeffs(|a| a.scalar_mul(c))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self.map_coeffs(|a| a.scale(r))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&rat(n))
    }

    pub fn map_coeffs(&self, f: impl Fn(&TSeries) -> TSeries) -> Self {
        let mut out = Self::zero(self.d, self.mode).with_floor(self.floor);
        for (n, a) in &self.terms {
            out.add_term(*n, f(a));
        }
        out
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i32) -> Self {
        let mut out = Self::zero(self.d, self.mode).with_floor(self.floor.map(|f| f + k));
        for (n, a) in &self.terms {
            out.add_term(n + k, a.clone());
        }
        out
    }

    /// Exponents `>= 0`.
    pub fn project_nonneg(&self) -> Self {
        self.filter_exponents(|n| n >= 0)
    }

    /// Exponents `< 0`.
    pub fn project_neg(&self) -> Self {
        self.filter_exponents(|n| n < 0)
    }

    fn filter_exponents(&self, keep: impl Fn(i32) -> bool) -> Self {
        let mut out = Self::zero(self.d, self.mode).with_floor(self.floor);
        for (n, a) in self.terms.iter().filter(|(n, _)| keep(**n)) {
            out.add_term(*n, a.clone());
        }
        out
    }

    /// Truncates the coefficients to `t`-degree `d`.
    pub fn truncate(&self, d: u32) -> Result<Self> {
        let mut out = Self::zero(d, self.mode).with_floor(self.floor);
        for (n, a) in &self.terms {
            out.add_term(*n, a.truncate(d)?);
        }
        Ok(out)
    }

    /// `∂/∂p`.
    pub fn derive_p(&self) -> Self {
        let mut out = Self::zero(self.d, self.mode).with_floor(self.floor.map(|f| f - 1));
        for (n, a) in &self.terms {
            if *n != 0 {
                out.add_term(n - 1, a.scale_int(*n as i64));
            }
        }
        out
    }

    /// `∂/∂s` on the coefficients (through `∂_s B = βB`).
    pub fn derive_s(&self) -> Self {
        self.map_coeffs(TSeries::d_s)
    }

    /// `∂/∂v` of each coefficient; the truncation degree drops by the weight of `v`.
    pub fn derive_t(&self, v: Var) -> Self {
        let d = self.d.saturating_sub(v.weight());
        let mut out = Self::zero(d, self.mode).with_floor(self.floor);
        for (n, a) in &self.terms {
            out.add_term(*n, a.derive(v));
        }
        out
    }

    /// `β`-free check and division of every coefficient by `β`.
    pub fn div_beta(&self) -> Result<Self> {
        let mode = match self.mode {
            BetaMode::Poly => BetaMode::Poly,
            BetaMode::Trunc(n) => BetaMode::Trunc(n.saturating_sub(1)),
        };
        let mut out = Self::zero(self.d, mode).with_floor(self.floor);
        for (n, a) in &self.terms {
            out.add_term(*n, a.div_beta()?);
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.d, self.mode).with_floor(self.floor);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// True if no coefficient has a `t`-constant term.
    pub fn is_t_nilpotent(&self) -> bool {
        self.terms.values().all(|a| a.constant_term().is_zero())
    }

    /// Splits `f = a · p^lead · (1 + g)` with `a` the coefficient of
    /// `p^lead` and `g` free of `t`-constant terms.
    fn unit_split(&self, lead: i32) -> Result<(TSeries, Self)> {
        let a = self.coeff(lead)?;
        let a_inv = a.inverse()?;
        let mut g = self.shift(-lead).series_mul(&a_inv);
        g = &g - &Self::one(self.d, self.mode).with_floor(g.floor);
        if !g.is_t_nilpotent() {
            return Err(Error::NotInvertible(format!(
                "series is not a unit times p^{lead}"
            )));
        }
        Ok((a, g))
    }

    /// Multiplicative inverse of `a · p^lead · (1 + g)` where `g` has no
    /// `t`-constant terms.
    pub fn inverse(&self, lead: i32) -> Result<Self> {
        let (a, g) = self.unit_split(lead)?;
        let minus_g = -&g;
        let mut acc = Self::one(self.d, self.mode).with_floor(g.floor);
        let mut power = acc.clone();
        for _ in 1..=self.d {
            power = &power * &minus_g;
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        Ok(acc.series_mul(&a.inverse()?).shift(-lead))
    }

    /// `exp(f)` for `f` without `t`-constant terms.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.is_t_nilpotent() {
            return Err(Error::NonNilpotentConstant(
                "p-series with a t-constant coefficient".into(),
            ));
        }
        let mut acc = Self::one(self.d, self.mode).with_floor(self.floor);
        let mut power = acc.clone();
        for k in 1..=self.d {
            power = (&power * self).scale(&ratio(1, k as i64));
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        Ok(acc)
    }

    /// `log(1 + g)` for `g` without `t`-constant terms.
    pub fn log1p_nilpotent(g: &Self) -> Result<Self> {
        if !g.is_t_nilpotent() {
            return Err(Error::NonNilpotentConstant(
                "p-series with a t-constant coefficient".into(),
            ));
        }
        let mut acc = Self::zero(g.d, g.mode).with_floor(g.floor);
        let mut power = Self::one(g.d, g.mode).with_floor(g.floor);
        for k in 1..=g.d {
            power = &power * g;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += &power.scale(&ratio(sign, k as i64));
        }
        Ok(acc)
    }

    /// Writes `f = c · p^lead · exp(series)` with `c` a scalar.
    pub fn log_laurent(&self, lead: i32) -> Result<LogLaurent> {
        let (a, g) = self.unit_split(lead)?;
        let (c, log_a) = a.log_unit()?;
        let series = &Self::log1p_nilpotent(&g)? + &Self::from_series(log_a, 0).with_floor(g.floor);
        Ok(LogLaurent { c, lead, series })
    }
}

impl fmt::Display for PLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (n, a)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{a}]*p^{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{self} [D={}, {}, floor={:?}]",
            self.d, self.mode, self.floor
        )
    }
}

forward_binop!(Add, add, checked_add, PLaurent);
forward_binop!(Sub, sub, checked_sub, PLaurent);
forward_binop!(Mul, mul, checked_mul, PLaurent);

impl Neg for &PLaurent {
    type Output = PLaurent;
    fn neg(self) -> PLaurent {
        self.map_coeffs(|a| -a)
    }
}

impl Neg for PLaurent {
    type Output = PLaurent;
    fn neg(self) -> PLaurent {
        -&self
    }
}

impl AddAssign<&PLaurent> for PLaurent {
    fn add_assign(&mut self, rhs: &PLaurent) {
        *self = &*self + rhs;
    }
}

/// `c · p^lead · exp(series)`, i.e. `log f = log c + lead · log p + series`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogLaurent {
    pub c: ParamScalar,
    pub lead: i32,
    pub series: PLaurent,
}

/// Functions whose `p`- and `s`-derivatives are available as Laurent series.
pub trait Poisson {
    fn dp(&self) -> Result<PLaurent>;
    fn ds(&self) -> Result<PLaurent>;
}

impl Poisson for PLaurent {
    fn dp(&self) -> Result<PLaurent> {
        Ok(self.derive_p())
    }
    fn ds(&self) -> Result<PLaurent> {
        Ok(self.derive_s())
    }
}

impl Poisson for LogLaurent {
    fn dp(&self) -> Result<PLaurent> {
        let d = self.series.degree_bound();
        let mode = self.series.mode();
        let lead = PLaurent::p_pow(-1, d, mode).scale_int(self.lead as i64);
        Ok(&lead + &self.series.derive_p())
    }
    fn ds(&self) -> Result<PLaurent> {
        let d = self.series.degree_bound();
        let c_part = &self.c.d_s() * &self.c.inverse()?;
        let c_part = PLaurent::from_series(TSeries::constant(c_part, d), 0);
        Ok(&c_part + &self.series.derive_s())
    }
}

/// `{F, G} = p (∂_p F ∂_s G − ∂_s F ∂_p G)`.
pub fn poisson(f: &impl Poisson, g: &impl Poisson) -> Result<PLaurent> {
    let fp = f.dp()?;
    let fs = f.ds()?;
    let gp = g.dp()?;
    let gs = g.ds()?;
    let inner = (&fp * &gs).checked_sub(&(&fs * &gp))?;
    Ok(inner.shift(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: BetaMode = BetaMode::Poly;

    fn t1(d: u32) -> TSeries {
        TSeries::var(Var::T(1), d, P)
    }

    #[test]
    fn product_with_floor() {
        let d = 3;
        let f = (&PLaurent::p_pow(1, d, P) + &PLaurent::from_series(t1(d), 0)).with_floor(Some(-1));
        let g = PLaurent::p_pow(-1, d, P).with_floor(Some(-1));
        let expected = &PLaurent::one(d, P) + &PLaurent::from_series(t1(d), -1);
        assert_eq!(&f * &g, expected.with_floor(Some(-1)));
        let deep = &g * &g;
        assert!(deep.is_zero());
        assert!(deep.coeff(-2).is_err());
    }

    #[test]
    fn residues_and_projections() {
        let d = 3;
        let u1 = TSeries::var(Var::T(1), d, P);
        let u2 = TSeries::var(Var::T(2), d, P);
        let f = &(&PLaurent::p_pow(1, d, P) + &PLaurent::from_series(u1.clone(), 0))
            + &PLaurent::from_series(u2.clone(), -1);
        assert_eq!(f.coeff(-1).unwrap(), u2);
        assert_eq!(
            f.project_nonneg(),
            &PLaurent::p_pow(1, d, P) + &PLaurent::from_series(u1, 0)
        );
        assert_eq!(&f.project_nonneg() + &f.project_neg(), f);
        assert!(f.derive_p().residue().unwrap().is_zero());
        assert!(PLaurent::p_pow(-1, d, P).residue().unwrap() == TSeries::one(d, P));
    }

    #[test]
    fn inverse_and_log() {
        let d = 4;
        let f =
            &PLaurent::p_pow(1, d, P) + &PLaurent::from_series(TSeries::var(Var::TBar(1), d, P), 0);
        let inv = f.inverse(1).unwrap();
        assert_eq!(&f * &inv, PLaurent::one(d, P));
        let lg = f.log_laurent(1).unwrap();
        assert!(lg.c.is_one());
        let back = lg.series.exp_nilpotent().unwrap().shift(1);
        assert_eq!(back, f);
    }

    #[test]
    fn poisson_basics() {
        let d = 2;
        let p = PLaurent::p_pow(1, d, P);
        let s = PLaurent::one(d, P).scalar_mul(&ParamScalar::s(P));
        assert_eq!(poisson(&p, &s).unwrap(), p);
        let pb = p.scalar_mul(&ParamScalar::b_pow(1, P));
        assert_eq!(poisson(&pb, &s).unwrap(), pb);
        assert!(poisson(&pb, &pb).unwrap().is_zero());
    }
}
