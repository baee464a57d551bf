//! Complete homogeneous and Schur functions in the time variables.
//!
//! `h_m` is the `z^m` coefficient of `exp(Σ t_k z^k)`, and
//! `s_λ = det(h_{λ_i − i + j})` (Jacobi–Trudi). Power sums are `p_k = k t_k`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::combinat::{character, class_data, dim_irrep, factorial, partitions_of, Partition};
use crate::error::{Error, Result};
use crate::series::{check_degree, ratio, BetaMode, Monomial, ParamScalar, TSeries, Var};

/// Which family of times a symmetric function is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Times {
    /// `t_k`
    T,
    /// `t̄_k`
    TBar,
    /// `−t_k`
    NegT,
    /// `−t̄_k`
    NegTBar,
}

impl Times {
    fn var(self, k: u32) -> Var {
        match self {
            Times::T | Times::NegT => Var::T(k),
            Times::TBar | Times::NegTBar => Var::TBar(k),
        }
    }

    fn sign(self) -> i64 {
        match self {
            Times::T | Times::TBar => 1,
            Times::NegT | Times::NegTBar => -1,
        }
    }
}

type HKey = (Times, u32, BetaMode);

thread_local! {
    static H_TABLES: RefCell<HashMap<HKey, Vec<TSeries>>> = RefCell::new(HashMap::new());
}

/// `[h_0, …, h_D]` via `m h_m = Σ_k k t_k h_{m−k}`.
fn h_table(vars: Times, d: u32, mode: BetaMode) -> Vec<TSeries> {
    let key = (vars, d, mode);
    if let Some(t) = H_TABLES.with(|c| c.borrow().get(&key).cloned()) {
        return t;
    }
    let mut h = vec![TSeries::one(d, mode)];
    for m in 1..=d {
        let mut acc = TSeries::zero(d, mode);
        for k in 1..=m {
            let tk = TSeries::var(vars.var(k), d, mode).scale_int(vars.sign() * k as i64);
            acc += &(&tk * &h[(m - k) as usize]);
        }
        h.push(acc.scale(&ratio(1, m as i64)));
    }
    H_TABLES.with(|c| c.borrow_mut().insert(key, h.clone()));
    h
}

/// `h_m` in the chosen times; zero for `m < 0`.
pub fn complete_homog(m: i64, vars: Times, d: u32, mode: BetaMode) -> Result<TSeries> {
    if m < 0 {
        return Ok(TSeries::zero(d, mode));
    }
    if m > d as i64 {
        return Err(Error::DegreeTooLarge {
            requested: m as u32,
            limit: d,
        });
    }
    Ok(h_table(vars, d, mode)[m as usize].clone())
}

/// `s_λ` by the Jacobi–Trudi determinant, expanded row by row with the
/// minors memoized on the set of used columns.
pub fn schur(lambda: &Partition, vars: Times, d: u32, mode: BetaMode) -> Result<TSeries> {
    check_degree(d)?;
    if lambda.size() > d {
        return Err(Error::DegreeTooLarge {
            requested: lambda.size(),
            limit: d,
        });
    }
    let n = lambda.len();
    if n == 0 {
        return Ok(TSeries::one(d, mode));
    }
    let h = h_table(vars, d, mode);
    let zero = TSeries::zero(d, mode);
    let entry = |i: usize, j: usize| -> &TSeries {
        let idx = lambda.part(i) as i64 - i as i64 + j as i64;
        if idx < 0 || idx > d as i64 {
            &zero
        } else {
            &h[idx as usize]
        }
    };

    // memo[mask] = determinant of the minor on rows popcount(mask).. and
    // columns outside mask
    let mut memo: HashMap<u32, TSeries> = HashMap::new();
    fn minor<'a>(
        row: usize,
        used: u32,
        n: usize,
        entry: &dyn Fn(usize, usize) -> &'a TSeries,
        memo: &mut HashMap<u32, TSeries>,
        d: u32,
        mode: BetaMode,
    ) -> TSeries {
        if row == n {
            return TSeries::one(d, mode);
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = TSeries::zero(d, mode);
        for j in 0..n {
            if used & (1 << j) != 0 {
                continue;
            }
            let a = entry(row, j);
            if a.is_zero() {
                continue;
            }
            let rest = minor(row + 1, used | (1 << j), n, entry, memo, d, mode);
            if rest.is_zero() {
                continue;
            }
            let inversions = (used >> (j + 1)).count_ones();
            let term = a * &rest;
            if inversions.is_multiple_of(2) {
                acc += &term;
            } else {
                acc += &(-term);
            }
        }
        memo.insert(used, acc.clone());
        acc
    }
    Ok(minor(0, 0, n, &entry, &mut memo, d, mode))
}

/// `s_λ[1, 0, 0, …] = dim λ / |λ|!`.
pub fn schur_principal(lambda: &Partition) -> BigRational {
    BigRational::new(
        BigInt::from(dim_irrep(lambda)),
        BigInt::from(factorial(lambda.size())),
    )
}

/// The power-sum product `p_μ = Π_i p_{μ_i}` with `p_k = k t_k`, written as
/// `factor · t_μ` where `t_μ = Π_i t_{μ_i}` and `factor = Π_i μ_i`.
///
/// This is the only place the `p ↔ t` normalization enters.
pub fn power_sum_monomial(mu: &Partition, vars: Times) -> Result<(BigInt, Monomial)> {
    let mut pairs: Vec<(u32, u32)> = mu.multiplicities();
    pairs.retain(|&(_, m)| m > 0);
    let m = match vars {
        Times::T | Times::NegT => Monomial::from_pairs(&pairs, &[])?,
        Times::TBar | Times::NegTBar => Monomial::from_pairs(&[], &pairs)?,
    };
    let factor: BigInt = mu
        .parts()
        .iter()
        .map(|&k| BigInt::from(k as i64 * vars.sign()))
        .product();
    Ok((factor, m))
}

/// `Σ_{|μ|=d} χ_λ(μ)/z_μ · p_μ`, the character expansion of `s_λ`.
pub fn schur_frobenius(lambda: &Partition, vars: Times, d: u32, mode: BetaMode) -> Result<TSeries> {
    if lambda.size() > d {
        return Err(Error::DegreeTooLarge {
            requested: lambda.size(),
            limit: d,
        });
    }
    let mut out = TSeries::zero(d, mode);
    for mu in partitions_of(lambda.size()) {
        let chi = character(lambda, &mu)?;
        if chi == 0 {
            continue;
        }
        let z = class_data(&mu).z;
        let (factor, m) = power_sum_monomial(&mu, vars)?;
        let c = BigRational::new(BigInt::from(chi) * factor, BigInt::from(z));
        out += &TSeries::monomial(m, ParamScalar::from_rational(c, mode), d);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::transpose;

    const P: BetaMode = BetaMode::Poly;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn t(k: u32, d: u32) -> TSeries {
        TSeries::var(Var::T(k), d, P)
    }

    #[test]
    fn small_examples() {
        let d = 4;
        assert_eq!(
            complete_homog(0, Times::T, d, P).unwrap(),
            TSeries::one(d, P)
        );
        assert_eq!(complete_homog(1, Times::T, d, P).unwrap(), t(1, d));
        let h2 = &t(1, d).pow(2).scale(&ratio(1, 2)) + &t(2, d);
        assert_eq!(complete_homog(2, Times::T, d, P).unwrap(), h2);
        assert!(complete_homog(5, Times::T, d, P).is_err());
        assert!(complete_homog(-1, Times::T, d, P).unwrap().is_zero());

        assert_eq!(schur(&p(&[1]), Times::T, d, P).unwrap(), t(1, d));
        assert_eq!(schur(&p(&[2]), Times::T, d, P).unwrap(), h2);
        let s11 = &t(1, d).pow(2).scale(&ratio(1, 2)) - &t(2, d);
        assert_eq!(schur(&p(&[1, 1]), Times::T, d, P).unwrap(), s11);
        let s21 = &t(1, d).pow(3).scale(&ratio(1, 3)) - &t(3, d);
        assert_eq!(schur(&p(&[2, 1]), Times::T, d, P).unwrap(), s21);
        assert!(schur(&p(&[3, 2]), Times::T, d, P).is_err());
    }

    #[test]
    fn principal_values() {
        assert_eq!(schur_principal(&p(&[1])), ratio(1, 1));
        assert_eq!(schur_principal(&p(&[2, 1])), ratio(1, 3));
        for d in 1..=6u32 {
            let total: BigRational = partitions_of(d)
                .iter()
                .map(|l| {
                    let x = schur_principal(l);
                    &x * &x
                })
                .sum();
            let df = BigRational::from_integer(BigInt::from(factorial(d)));
            assert_eq!(total * &df * &df, df);
        }
    }

    #[test]
    fn frobenius_matches_jacobi_trudi() {
        let d = 6;
        for n in 0..=d {
            for l in partitions_of(n) {
                assert_eq!(
                    schur_frobenius(&l, Times::T, d, P).unwrap(),
                    schur(&l, Times::T, d, P).unwrap(),
                    "{l}"
                );
            }
        }
    }

    #[test]
    fn transpose_identity() {
        let d = 6;
        for n in 0..=d {
            for l in partitions_of(n) {
                let lhs = schur(&l, Times::T, d, P).unwrap();
                let rhs = schur(&transpose(&l), Times::NegT, d, P).unwrap();
                let sign = if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(lhs, rhs.scale_int(sign), "{l}");
            }
        }
    }
}
