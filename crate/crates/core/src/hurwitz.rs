//! Hurwitz numbers and their generating functions.
//!
//! `H_d(μ¹,…,μʳ)` is computed from characters (Burnside) and, at small
//! size, by counting factorizations `σ₁⋯σ_r = 1` with `σ_k ∈ C(μᵏ)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinat::{dim_irrep, f_class, factorial, kappa, partitions_of, Partition};
use crate::error::{Error, Result};
use crate::schur::{power_sum_monomial, schur, schur_principal, Times};
use crate::series::{
    check_degree, ratio, BetaMode, Monomial, ParamMonomial, ParamScalar, TSeries, Var,
};

/// Degree and ramification profiles of a branched cover of the sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationProfile {
    d: u32,
    profiles: Vec<Partition>,
}

impl RamificationProfile {
    pub fn new(d: u32, profiles: Vec<Partition>) -> Result<Self> {
        for mu in &profiles {
            if mu.size() != d {
                return Err(Error::SizeMismatch {
                    expected: d as usize,
                    found: mu.size() as usize,
                });
            }
        }
        Ok(RamificationProfile { d, profiles })
    }

    /// Parses `"[2,1,1];[4]"`; an empty string means no profiles.
    pub fn parse(d: u32, text: &str) -> Result<Self> {
        let profiles = text
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Partition>>>()?;
        Self::new(d, profiles)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn profiles(&self) -> &[Partition] {
        &self.profiles
    }
}

/// `Σ_{|λ|=d} (dim λ / d!)² Π_k f_λ(μᵏ)`.
pub fn hurwitz_burnside(rp: &RamificationProfile) -> Result<BigRational> {
    let df = BigRational::from_integer(BigInt::from(factorial(rp.d)));
    let mut total = BigRational::zero();
    for lambda in partitions_of(rp.d) {
        let w = BigRational::from_integer(BigInt::from(dim_irrep(&lambda))) / &df;
        let mut term = &w * &w;
        for mu in &rp.profiles {
            term *= f_class(&lambda, mu)?;
        }
        total += term;
    }
    Ok(total)
}

/// Size limits for the factorization count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceBounds {
    pub max_d: u32,
    pub max_r: usize,
}

impl Default for BruteForceBounds {
    fn default() -> Self {
        BruteForceBounds { max_d: 6, max_r: 4 }
    }
}

type Perm = Vec<u8>;

fn all_perms(d: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i as u8);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

fn cycle_type(p: &[u8]) -> Partition {
    let mut seen = vec![false; p.len()];
    let mut parts = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::new(parts)
}

/// `(a ∘ b)(x) = a(b(x))`.
fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// `(1/d!) · #{(σ₁,…,σ_r) : σ_k ∈ C(μᵏ), σ₁⋯σ_r = 1}`.
pub fn hurwitz_bruteforce(
    rp: &RamificationProfile,
    bounds: BruteForceBounds,
) -> Result<BigRational> {
    if rp.d > bounds.max_d || rp.profiles.len() > bounds.max_r {
        return Err(Error::ResourceBound(format!(
            "brute force limited to d <= {}, r <= {} (got d = {}, r = {})",
            bounds.max_d,
            bounds.max_r,
            rp.d,
            rp.profiles.len()
        )));
    }
    let d = rp.d as usize;
    let perms = all_perms(d);
    let classes: Vec<Vec<Perm>> = rp
        .profiles
        .iter()
        .map(|mu| {
            perms
                .iter()
                .filter(|p| cycle_type(p) == *mu)
                .cloned()
                .collect()
        })
        .collect();
    let identity: Perm = (0..d as u8).collect();
    let count: u64 = match classes.split_last() {
        None => 1,
        Some((_, init)) => {
            let last_type = &rp.profiles[rp.profiles.len() - 1];
            // σ_r is forced to be the inverse of the partial product; only its
            // cycle type needs checking, and inversion preserves it.
            fn rec(prod: &Perm, rest: &[Vec<Perm>], target: &Partition) -> u64 {
                match rest.split_first() {
                    None => (cycle_type(prod) == *target) as u64,
                    Some((class, tail)) => class
                        .iter()
                        .map(|s| rec(&compose(prod, s), tail, target))
                        .sum(),
                }
            }
            match init.split_first() {
                None => rec(&identity, &[], last_type),
                Some((first, tail)) => first.par_iter().map(|s| rec(s, tail, last_type)).sum(),
            }
        }
    };
    Ok(BigRational::new(
        BigInt::from(count),
        BigInt::from(factorial(rp.d)),
    ))
}

/// `Σ_{|λ|=d} (dim λ / d!)² (κ_λ/2)^r f_λ(μ)`.
pub fn simple_hurwitz(d: u32, r: u32, mu: &Partition) -> Result<BigRational> {
    if mu.size() != d {
        return Err(Error::SizeMismatch {
            expected: d as usize,
            found: mu.size() as usize,
        });
    }
    let df = BigRational::from_integer(BigInt::from(factorial(d)));
    let mut total = BigRational::zero();
    for lambda in partitions_of(d) {
        let w = BigRational::from_integer(BigInt::from(dim_irrep(&lambda))) / &df;
        let k = ratio(kappa(&lambda), 2);
        let mut kr = BigRational::one();
        for _ in 0..r {
            kr *= &k;
        }
        total += &w * &w * kr * f_class(&lambda, mu)?;
    }
    Ok(total)
}

fn require_trunc(mode: BetaMode) -> Result<u32> {
    match mode {
        BetaMode::Trunc(n) => Ok(n),
        BetaMode::Poly => Err(Error::BetaModeMismatch {
            left: "poly".into(),
            right: "trunc".into(),
        }),
    }
}

/// `e^{βκ_λ/2} Q^{|λ|}` in the truncated ring.
pub fn hurwitz_weight(lambda: &Partition, mode: BetaMode) -> Result<ParamScalar> {
    let x = ParamScalar::beta(mode).scale(&ratio(kappa(lambda), 2));
    Ok(&x.exp_nilpotent()? * &ParamScalar::q_pow(lambda.size() as i32, mode))
}

/// `Σ_{|λ|≤D} (dim λ/|λ|!) e^{βκ_λ/2} Q^{|λ|} s_λ[t]`.
pub fn z_simple(d: u32, n_beta: u32) -> Result<TSeries> {
    check_degree(d)?;
    let mode = BetaMode::Trunc(n_beta);
    let mut out = TSeries::zero(d, mode);
    for n in 0..=d {
        for lambda in partitions_of(n) {
            let c = hurwitz_weight(&lambda, mode)?.scale(&schur_principal(&lambda));
            out += &schur(&lambda, Times::T, d, mode)?.scalar_mul(&c);
        }
    }
    Ok(out)
}

/// `Σ_λ e^{βκ_λ/2} Q^{|λ|} s_λ[t] s_λ[−t̄]`, truncated at total weighted
/// degree `D` (so only `|λ| ≤ D/2` contribute).
pub fn z_double(d: u32, n_beta: u32) -> Result<TSeries> {
    check_degree(d)?;
    let mode = BetaMode::Trunc(n_beta);
    let mut out = TSeries::zero(d, mode);
    for n in 0..=d / 2 {
        for lambda in partitions_of(n) {
            let c = hurwitz_weight(&lambda, mode)?;
            let s = schur(&lambda, Times::T, d, mode)?;
            let sb = schur(&lambda, Times::NegTBar, d, mode)?;
            out += &(&s * &sb).scalar_mul(&c);
        }
    }
    Ok(out)
}

/// `e^{Q t₁}`.
pub fn exp_q_t1(d: u32, mode: BetaMode) -> Result<TSeries> {
    TSeries::var(Var::T(1), d, mode)
        .scalar_mul(&ParamScalar::q_pow(1, mode))
        .exp_series()
}

/// `−Σ_k Q^k k t_k t̄_k`.
pub fn cauchy_exponent(d: u32, mode: BetaMode) -> TSeries {
    let mut f = TSeries::zero(d, mode);
    for k in 1..=d {
        let m = Monomial::var(Var::T(k)).mul_checked(Monomial::var(Var::TBar(k)));
        if let Some(m) = m.filter(|m| m.degree() <= d) {
            let c = ParamScalar::q_pow(k as i32, mode).scale_int(-(k as i64));
            f += &TSeries::monomial(m, c, d);
        }
    }
    f
}

/// `exp(−Σ_k Q^k k t_k t̄_k)`.
pub fn cauchy_kernel(d: u32, mode: BetaMode) -> Result<TSeries> {
    cauchy_exponent(d, mode).exp_series()
}

fn rewrite_t_monomials(
    f: &TSeries,
    rule: impl Fn(Monomial, &[(u32, u32)], &mut BTreeMap<Monomial, BigRational>),
) -> TSeries {
    let d = f.degree_bound();
    let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
    let mut out = TSeries::zero(d, f.mode());
    for (m, c) in f.terms() {
        acc.clear();
        rule(*m, &m.t_exponents(), &mut acc);
        for (nm, r) in &acc {
            if !r.is_zero() {
                out += &TSeries::monomial(*nm, c.scale(r), d);
            }
        }
    }
    out
}

/// The join half `½ Σ_{k,l≥1} kl t_k t_l ∂_{t_{k+l}}`.
pub fn join_part(f: &TSeries) -> TSeries {
    rewrite_t_monomials(f, |m, exps, acc| {
        for &(j, ej) in exps {
            let base = m.div_var(Var::T(j)).expect("present");
            for k in 1..j {
                let l = j - k;
                let nm = base
                    .mul(Monomial::var(Var::T(k)))
                    .mul(Monomial::var(Var::T(l)));
                *acc.entry(nm).or_insert_with(BigRational::zero) += ratio((k * l * ej) as i64, 2);
            }
        }
    })
}

/// The cut half `½ Σ_{k,l≥1} (k+l) t_{k+l} ∂_{t_k}∂_{t_l}`.
pub fn cut_part(f: &TSeries) -> TSeries {
    rewrite_t_monomials(f, |m, exps, acc| {
        for &(k, ek) in exps {
            for &(l, el) in exps {
                let mult = if k == l { ek * (ek - 1) } else { ek * el };
                if mult == 0 {
                    continue;
                }
                let base = m
                    .div_var(Var::T(k))
                    .and_then(|x| x.div_var(Var::T(l)))
                    .expect("present");
                let nm = base.mul(Monomial::var(Var::T(k + l)));
                *acc.entry(nm).or_insert_with(BigRational::zero) +=
                    ratio(((k + l) * mult) as i64, 2);
            }
        }
    })
}

/// The cut-and-join operator
/// `½ Σ_{k,l≥1} (kl t_k t_l ∂_{t_{k+l}} + (k+l) t_{k+l} ∂_{t_k}∂_{t_l})`
/// acting on the `t` variables (the `t̄` are inert). It preserves weighted
/// degree, so the result is exact through the same `D`.
pub fn cut_and_join(f: &TSeries) -> TSeries {
    &join_part(f) + &cut_part(f)
}

/// `Σ_{n<N_β} βⁿ M₀ⁿ f / n!` where `N_β` is the truncation order of `f`.
pub fn exp_cut_and_join(f: &TSeries) -> Result<TSeries> {
    let n_beta = require_trunc(f.mode())?;
    let mode = f.mode();
    let mut out = f.clone();
    let mut term = f.clone();
    for n in 1..n_beta {
        term = cut_and_join(&term).scalar_mul(&ParamScalar::beta(mode).scale(&ratio(1, n as i64)));
        if term.is_zero() {
            break;
        }
        out += &term;
    }
    Ok(out)
}

/// Coefficient of `β^r Q^d t_μ` in `Z_simple` predicted by `simple_hurwitz`:
/// `H · Π μ_i / r!`.
pub fn z_simple_coefficient(d: u32, r: u32, mu: &Partition) -> Result<(Monomial, BigRational)> {
    let h = simple_hurwitz(d, r, mu)?;
    let (factor, m) = power_sum_monomial(mu, Times::T)?;
    let rf = BigRational::from_integer(BigInt::from(factorial(r)));
    Ok((m, h * BigRational::from_integer(factor) / rf))
}

/// Reads the coefficient of `β^r Q^d` at monomial `m` of a series.
pub fn read_beta_q(f: &TSeries, m: &Monomial, r: u32, d: i32) -> BigRational {
    f.coeff(m).coeff(&ParamMonomial {
        beta: r,
        q: d,
        ..ParamMonomial::ONE
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::partitions_up_to;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn rp(d: u32, ps: &[&[u32]]) -> RamificationProfile {
        RamificationProfile::new(d, ps.iter().map(|x| p(x)).collect()).unwrap()
    }

    #[test]
    fn burnside_examples() {
        assert_eq!(hurwitz_burnside(&rp(1, &[])).unwrap(), ratio(1, 1));
        assert_eq!(
            hurwitz_burnside(&rp(2, &[&[2], &[2]])).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            hurwitz_burnside(&rp(3, &[&[3], &[3]])).unwrap(),
            ratio(1, 3)
        );
        assert!(RamificationProfile::new(3, vec![p(&[2])]).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let b = BruteForceBounds::default();
        assert_eq!(
            hurwitz_bruteforce(&rp(2, &[&[2], &[2]]), b).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            hurwitz_bruteforce(&rp(3, &[&[2, 1], &[2, 1]]), b).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            hurwitz_bruteforce(&rp(1, &[&[1], &[1], &[1]]), b).unwrap(),
            ratio(1, 1)
        );
        assert!(matches!(
            hurwitz_bruteforce(&rp(7, &[]), b),
            Err(Error::ResourceBound(_))
        ));
    }

    #[test]
    fn simple_examples() {
        assert_eq!(simple_hurwitz(2, 0, &p(&[1, 1])).unwrap(), ratio(1, 2));
        assert_eq!(simple_hurwitz(2, 1, &p(&[2])).unwrap(), ratio(1, 2));
        assert_eq!(simple_hurwitz(2, 2, &p(&[1, 1])).unwrap(), ratio(1, 2));
    }

    /// Generic second-order operator built from derivatives, as an
    /// independent check of the monomial rewrite.
    fn cut_and_join_by_derivatives(f: &TSeries) -> TSeries {
        let d = f.degree_bound();
        let mode = f.mode();
        let mut out = TSeries::zero(d, mode);
        for k in 1..d {
            for l in 1..=(d - k) {
                let tk_tl = Monomial::var(Var::T(k)).mul(Monomial::var(Var::T(l)));
                let join = f.derive(Var::T(k + l)).mul_monomial_lift(tk_tl);
                out += &join.scale(&ratio((k * l) as i64, 2));
                let cut = f
                    .derive(Var::T(k))
                    .derive(Var::T(l))
                    .mul_monomial_lift(Monomial::var(Var::T(k + l)));
                out += &cut.scale(&ratio((k + l) as i64, 2));
            }
        }
        out
    }

    #[test]
    fn cut_and_join_examples() {
        let m = BetaMode::Poly;
        let d = 4;
        let t1 = TSeries::var(Var::T(1), d, m);
        assert!(cut_and_join(&t1).is_zero());
        assert_eq!(
            cut_and_join(&t1.pow(2)),
            TSeries::var(Var::T(2), d, m).scale_int(2)
        );
    }

    #[test]
    fn cut_and_join_matches_derivative_form() {
        let m = BetaMode::Poly;
        let d = 6;
        let f = cauchy_kernel(d, m).unwrap();
        let g = &exp_q_t1(d, m).unwrap() + &schur(&p(&[3, 1]), Times::T, d, m).unwrap();
        for x in [f, g] {
            assert_eq!(cut_and_join(&x), cut_and_join_by_derivatives(&x));
        }
    }

    #[test]
    fn schur_eigenfunctions() {
        let m = BetaMode::Poly;
        let d = 6;
        for l in partitions_up_to(d) {
            let s = schur(&l, Times::T, d, m).unwrap();
            assert_eq!(cut_and_join(&s), s.scale(&ratio(kappa(&l), 2)), "{l}");
        }
    }

    #[test]
    fn exponential_representations() {
        let (d, nb) = (4, 4);
        let mode = BetaMode::Trunc(nb);
        assert_eq!(
            exp_cut_and_join(&exp_q_t1(d, mode).unwrap()).unwrap(),
            z_simple(d, nb).unwrap()
        );
        assert_eq!(
            exp_cut_and_join(&cauchy_kernel(d, mode).unwrap()).unwrap(),
            z_double(d, nb).unwrap()
        );
        let one = BetaMode::Trunc(1);
        let f = exp_q_t1(d, one).unwrap();
        assert_eq!(exp_cut_and_join(&f).unwrap(), f);
    }

    #[test]
    fn z_simple_coefficients_are_hurwitz_numbers() {
        let (d, nb) = (4, 4);
        let z = z_simple(d, nb).unwrap();
        for n in 1..=d {
            for mu in partitions_of(n) {
                for r in 0..nb {
                    let (m, expected) = z_simple_coefficient(n, r, &mu).unwrap();
                    assert_eq!(read_beta_q(&z, &m, r, n as i32), expected, "{mu} r={r}");
                }
            }
        }
    }

    #[test]
    fn z_double_specializes_to_z_simple() {
        let (d, nb) = (6, 3);
        let mode = BetaMode::Trunc(nb);
        let z = z_double(d, nb).unwrap();
        let mut values = BTreeMap::new();
        values.insert(Var::TBar(1), ParamScalar::from_int(-1, mode));
        for k in 2..=d {
            values.insert(Var::TBar(k), ParamScalar::zero(mode));
        }
        assert_eq!(
            z.evaluate(&values, d / 2).unwrap(),
            z_simple(d / 2, nb).unwrap()
        );
    }

    #[test]
    fn z_double_swap_symmetry() {
        let (d, nb) = (6, 4);
        let mode = BetaMode::Trunc(nb);
        let z = z_double(d, nb).unwrap();
        let flipped = z.swap_t_tbar().map_coeffs(|c| {
            c.substitute_monomials(|m| {
                let sign = if m.beta % 2 == 0 { 1 } else { -1 };
                ParamScalar::monomial(*m, mode).scale_int(sign)
            })
        });
        assert_eq!(flipped, z);
    }
}
