//! The `ħ`-expansion `log Z_{ħβ,Q}[ħ⁻¹t, ħ⁻¹t̄] = Σ_n ħ^{2n−2} F_n`.
//!
//! The tower `F_0, F_1, …` is obtained by integrating in `β`
//!
//! `∂_β F_n = ½Σ kl t_k t_l ∂_{k+l}F_n + ½Σ (k+l) t_{k+l} ∂_k∂_l F_{n−1}
//!            + ½Σ (k+l) t_{k+l} Σ_{m=0}^{n} ∂_k F_m ∂_l F_{n−m}`
//!
//! from `F_n|_{β=0} = −δ_{n0} Σ_k Q^k k t_k t̄_k`, and checked against the
//! logarithm of the rescaled double generating function.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{partitions_of, Partition};
use crate::dispersionless::StringSolution;
use crate::error::{Error, Result};
use crate::hurwitz::{cauchy_exponent, cut_part, hurwitz_weight, join_part};
use crate::schur::{schur, Times};
use crate::series::{
    check_degree, ratio, BetaMode, Monomial, ParamMonomial, ParamScalar, TSeries, Var,
};

/// `F_0 … F_{n_max}` in `β`-truncated mode.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeEnergyTower {
    pub n_max: u32,
    pub d: u32,
    pub n_beta: u32,
    pub f: Vec<TSeries>,
}

/// `½ Σ_{k,l} (k+l) t_{k+l} ∂_k f ∂_l g`, degree-preserving.
pub fn cut_pair(f: &TSeries, g: &TSeries) -> TSeries {
    let d = f.degree_bound();
    let mode = f.mode();
    let mut acc: BTreeMap<Monomial, ParamScalar> = BTreeMap::new();
    for (m1, c1) in f.terms() {
        let e1 = m1.t_exponents();
        if e1.is_empty() {
            continue;
        }
        for (m2, c2) in g.terms() {
            // after removing t_k, t_l and adding t_{k+l} the degree is the sum
            if m1.degree() + m2.degree() > d {
                continue;
            }
            let e2 = m2.t_exponents();
            let prod = c1 * c2;
            for &(k, ek) in &e1 {
                let b1 = m1.div_var(Var::T(k)).expect("present");
                for &(l, el) in &e2 {
                    let b2 = m2.div_var(Var::T(l)).expect("present");
                    let Some(nm) = b1
                        .mul_checked(b2)
                        .and_then(|x| x.mul_checked(Monomial::var(Var::T(k + l))))
                    else {
                        continue;
                    };
                    let c = prod.scale(&ratio(((k + l) * ek * el) as i64, 2));
                    acc.entry(nm).and_modify(|x| *x += &c).or_insert(c);
                }
            }
        }
    }
    let mut out = TSeries::zero(d, mode);
    for (m, c) in acc {
        out += &TSeries::monomial(m, c, d);
    }
    out
}

/// Right-hand side of the `F_n` equation.
pub fn tower_rhs(f: &[TSeries], n: usize) -> TSeries {
    let mut out = join_part(&f[n]);
    if n >= 1 {
        out += &cut_part(&f[n - 1]);
    }
    for m in 0..=n {
        out += &cut_pair(&f[m], &f[n - m]);
    }
    out
}

fn beta_slice(f: &TSeries, j: u32) -> TSeries {
    f.map_coeffs(|c| c.beta_coeff(j))
}

fn check_bounds(d: u32, n_beta: u32) -> Result<()> {
    check_degree(d)?;
    if n_beta == 0 {
        return Err(Error::BetaModeMismatch {
            left: "trunc(0)".into(),
            right: "trunc(>=1)".into(),
        });
    }
    Ok(())
}

/// Integrates the tower order by order in `β`: the `β^j` part of the
/// right-hand side involves only orders `≤ j`, and fixes the `β^{j+1}` term.
pub fn solve_tower(n_max: u32, d: u32, n_beta: u32) -> Result<FreeEnergyTower> {
    check_bounds(d, n_beta)?;
    let mode = BetaMode::Trunc(n_beta);
    let mut f = vec![TSeries::zero(d, mode); n_max as usize + 1];
    f[0] = cauchy_exponent(d, mode);
    for j in 0..n_beta.saturating_sub(1) {
        let beta_pow = ParamScalar::term(
            ratio(1, j as i64 + 1),
            ParamMonomial {
                beta: j + 1,
                ..ParamMonomial::ONE
            },
            mode,
        );
        let increments: Vec<TSeries> = (0..=n_max as usize)
            .map(|n| beta_slice(&tower_rhs(&f, n), j).scalar_mul(&beta_pow))
            .collect();
        for (fn_, inc) in f.iter_mut().zip(&increments) {
            *fn_ += inc;
        }
    }
    Ok(FreeEnergyTower {
        n_max,
        d,
        n_beta,
        f,
    })
}

/// Per-`n` check that `∂_β F_n` equals the right-hand side through order
/// `N_β − 1`.
pub fn pde_residuals(tower: &FreeEnergyTower) -> Result<Vec<TSeries>> {
    let lower = BetaMode::Trunc(tower.n_beta.saturating_sub(1).max(1));
    let mut out = Vec::new();
    for n in 0..tower.f.len() {
        let lhs = tower.f[n].d_beta().with_mode(lower)?;
        let rhs = tower_rhs(&tower.f, n).with_mode(lower)?;
        out.push(lhs.checked_sub(&rhs)?);
    }
    Ok(out)
}

/// `log Z_{ħβ,Q}[ħ⁻¹t, ħ⁻¹t̄]` with `ħ` kept as a formal symbol: every
/// `t_k` and `t̄_k` carries one `ħ⁻¹`, every `β` one `ħ`.
pub fn log_rescaled_z(d: u32, n_beta: u32) -> Result<TSeries> {
    check_bounds(d, n_beta)?;
    let mode = BetaMode::Trunc(n_beta);
    let lambdas: Vec<Partition> = (0..=d / 2).flat_map(partitions_of).collect();
    let parts: Vec<Result<TSeries>> = lambdas
        .par_iter()
        .map(|l| {
            // β ↦ ħβ: each β^j picks up ħ^j
            let w = hurwitz_weight(l, mode)?.substitute_monomials(|m| {
                ParamScalar::monomial(
                    ParamMonomial {
                        hbar: m.hbar + m.beta as i32,
                        ..*m
                    },
                    mode,
                )
            });
            let s = schur(l, Times::T, d, mode)?;
            let sb = schur(l, Times::NegTBar, d, mode)?;
            let prod = &s * &sb;
            let mut out = TSeries::zero(d, mode);
            for (m, c) in prod.terms() {
                let count: u32 = m.vars().iter().map(|(_, e)| e).sum();
                let c = c.mul_monomial(ParamMonomial {
                    hbar: -(count as i32),
                    ..ParamMonomial::ONE
                });
                out += &TSeries::monomial(*m, c, d);
            }
            Ok(out.scalar_mul(&w))
        })
        .collect();
    let mut z = TSeries::zero(d, mode);
    for p in parts {
        z += &p?;
    }
    let (c, g) = z.log_unit()?;
    if !c.is_one() {
        return Err(Error::NotInvertible(format!("leading term {c} is not 1")));
    }
    Ok(g)
}

fn hbar_coeff(f: &TSeries, e: i32) -> TSeries {
    f.map_coeffs(|c| {
        c.filter(|m| m.hbar == e).substitute_monomials(|m| {
            ParamScalar::monomial(ParamMonomial { hbar: 0, ..*m }, c.mode())
        })
    })
}

/// All `ħ` exponents occurring in `f`.
pub fn hbar_exponents(f: &TSeries) -> BTreeSet<i32> {
    f.terms()
        .flat_map(|(_, c)| c.terms().map(|(m, _)| m.hbar).collect::<Vec<_>>())
        .collect()
}

/// `n ↦` coefficient of `ħ^{2n−2}` in [`log_rescaled_z`].
pub fn oracle_hbar_expansion(d: u32, n_beta: u32, n_max: u32) -> Result<BTreeMap<u32, TSeries>> {
    let g = log_rescaled_z(d, n_beta)?;
    Ok((0..=n_max)
        .map(|n| (n, hbar_coeff(&g, 2 * n as i32 - 2)))
        .collect())
}

/// `𝓕 = βs³/6 + (s²/2) log Q + F_0(β, e^{βs}Q, t, t̄)`, with `e^{βs}Q`
/// written as `B` and the `log Q` coefficient reported separately.
#[derive(Clone, Debug, PartialEq)]
pub struct FullFreeEnergy {
    pub series: TSeries,
    pub log_q_coeff: ParamScalar,
}

pub fn assemble_full_free_energy(tower: &FreeEnergyTower) -> FullFreeEnergy {
    let mode = BetaMode::Trunc(tower.n_beta);
    let f0 = tower.f[0].map_coeffs(|c| {
        c.substitute_monomials(|m| {
            ParamScalar::monomial(
                ParamMonomial {
                    q: 0,
                    b: m.b + m.q,
                    ..*m
                },
                mode,
            )
        })
    });
    let s = ParamScalar::s(mode);
    let s2 = &s * &s;
    let cubic = (&(&ParamScalar::beta(mode) * &s2) * &s).scale(&ratio(1, 6));
    let series = &TSeries::constant(cubic, tower.d) + &f0;
    FullFreeEnergy {
        series,
        log_q_coeff: s2.scale(&ratio(1, 2)),
    }
}

/// `F_n` at `t̄_k = −δ_{k1}`, exact through `t`-degree `D/2`.
pub fn simple_specialization(tower: &FreeEnergyTower) -> Result<Vec<TSeries>> {
    let mode = BetaMode::Trunc(tower.n_beta);
    let mut values = BTreeMap::new();
    for k in 1..=tower.d {
        let v = if k == 1 { -1 } else { 0 };
        values.insert(Var::TBar(k), ParamScalar::from_int(v, mode));
    }
    tower
        .f
        .iter()
        .map(|f| f.evaluate(&values, tower.d / 2))
        .collect()
}

/// Differences between the tower and the oracle, as `(n, monomial)` labels.
pub fn oracle_mismatches(tower: &FreeEnergyTower) -> Result<Vec<String>> {
    let oracle = oracle_hbar_expansion(tower.d, tower.n_beta, tower.n_max)?;
    let mut bad = Vec::new();
    for (n, f) in tower.f.iter().enumerate() {
        let diff = f - &oracle[&(n as u32)];
        bad.extend(diff.terms().take(3).map(|(m, _)| format!("F_{n} at {m}")));
    }
    Ok(bad)
}

/// Odd `ħ` exponents present in the log of the rescaled generating function.
pub fn odd_hbar_exponents(d: u32, n_beta: u32) -> Result<Vec<i32>> {
    let g = log_rescaled_z(d, n_beta)?;
    Ok(hbar_exponents(&g)
        .into_iter()
        .filter(|e| e % 2 != 0)
        .collect())
}

/// Report of the free-energy checks.
#[derive(Clone, Debug, Serialize)]
pub struct FreeEnergyReport {
    pub n_max: u32,
    pub d: u32,
    pub n_beta: u32,
    pub pde_residual_zero: bool,
    pub oracle_mismatches: Vec<String>,
    pub odd_hbar_exponents: Vec<i32>,
    pub initial_conditions: bool,
}

impl FreeEnergyReport {
    pub fn all_pass(&self) -> bool {
        self.pde_residual_zero
            && self.oracle_mismatches.is_empty()
            && self.odd_hbar_exponents.is_empty()
            && self.initial_conditions
    }
}

pub fn verify_tower(tower: &FreeEnergyTower) -> Result<FreeEnergyReport> {
    let mode = BetaMode::Trunc(tower.n_beta);
    let pde = pde_residuals(tower)?.iter().all(TSeries::is_zero);
    let init = tower.f.iter().enumerate().all(|(n, f)| {
        let at_zero = beta_slice(f, 0);
        if n == 0 {
            at_zero == cauchy_exponent(tower.d, mode)
        } else {
            at_zero.is_zero()
        }
    }) && tower.f.iter().all(|f| f.constant_term().is_zero());
    Ok(FreeEnergyReport {
        n_max: tower.n_max,
        d: tower.d,
        n_beta: tower.n_beta,
        pde_residual_zero: pde,
        oracle_mismatches: oracle_mismatches(tower)?,
        odd_hbar_exponents: odd_hbar_exponents(tower.d, tower.n_beta)?,
        initial_conditions: init,
    })
}

/// Coefficient of `β^j` at a monomial, as an exact rational per parameter
/// monomial (used for small hand-checked values).
pub fn coefficient(f: &TSeries, m: &Monomial, j: u32) -> BTreeMap<ParamMonomial, BigRational> {
    f.coeff(m)
        .beta_coeff(j)
        .terms()
        .filter(|(_, r)| !r.is_zero())
        .map(|(pm, r)| (*pm, r.clone()))
        .collect()
}

/// Comparison of the string-equation coefficients with derivatives of
/// `F_0(β, e^{βs}Q, t, t̄)`: `v_n` against `∂_{t_n}` and `v̄_n` against
/// `−∂_{t̄_n}`, each through degree `D − n` and `β`-order `N_β`.
#[derive(Clone, Debug, Serialize)]
pub struct DerivativeReport {
    pub d: u32,
    pub n_beta: u32,
    pub v_matches: Vec<bool>,
    pub vbar_matches: Vec<bool>,
}

impl DerivativeReport {
    pub fn all_match(&self) -> bool {
        self.v_matches.iter().chain(&self.vbar_matches).all(|x| *x)
    }
}

pub fn compare_with_string_solution(sol: &StringSolution, n_beta: u32) -> Result<DerivativeReport> {
    let d = sol.d;
    let mode = BetaMode::Trunc(n_beta);
    let full = assemble_full_free_energy(&solve_tower(0, d, n_beta)?);
    let mut v_matches = Vec::new();
    let mut vbar_matches = Vec::new();
    for n in 1..=d {
        let i = n as usize - 1;
        let v = sol.v[i].with_mode(mode)?.truncate(d - n)?;
        let vb = sol.vbar[i].with_mode(mode)?.truncate(d - n)?;
        v_matches.push(v == full.series.derive(Var::T(n)));
        vbar_matches.push(vb == -&full.series.derive(Var::TBar(n)));
    }
    Ok(DerivativeReport {
        d,
        n_beta,
        v_matches,
        vbar_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::z_double;

    fn mono(t: &[(u32, u32)], tb: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(t, tb).unwrap()
    }

    fn q(e: i32) -> ParamMonomial {
        ParamMonomial {
            q: e,
            ..ParamMonomial::ONE
        }
    }

    #[test]
    fn f0_low_orders() {
        let tower = solve_tower(1, 4, 3).unwrap();
        let f0 = &tower.f[0];
        // β⁰: −Σ Q^k k t_k t̄_k
        assert_eq!(
            coefficient(f0, &mono(&[(1, 1)], &[(1, 1)]), 0),
            BTreeMap::from([(q(1), ratio(-1, 1))])
        );
        assert_eq!(
            coefficient(f0, &mono(&[(2, 1)], &[(2, 1)]), 0),
            BTreeMap::from([(q(2), ratio(-2, 1))])
        );
        // β¹: Q²(t₂t̄₁² − t₁²t̄₂)
        assert_eq!(
            coefficient(f0, &mono(&[(2, 1)], &[(1, 2)]), 1),
            BTreeMap::from([(q(2), ratio(1, 1))])
        );
        assert_eq!(
            coefficient(f0, &mono(&[(1, 2)], &[(2, 1)]), 1),
            BTreeMap::from([(q(2), ratio(-1, 1))])
        );
        assert!(beta_slice(&tower.f[1], 0).is_zero());
    }

    #[test]
    fn tower_matches_oracle() {
        for (d, nb, nmax) in [(4, 3, 1), (5, 4, 2), (6, 5, 2)] {
            let tower = solve_tower(nmax, d, nb).unwrap();
            let rep = verify_tower(&tower).unwrap();
            assert!(rep.all_pass(), "{rep:?}");
        }
        // n = 2 first appears at β⁴
        let tower = solve_tower(2, 6, 5).unwrap();
        assert!(!tower.f[2].is_zero());
        assert!(solve_tower(2, 6, 4).unwrap().f[2].is_zero());
    }

    #[test]
    fn oracle_at_beta_zero_is_cauchy() {
        let d = 6;
        let g = log_rescaled_z(d, 1).unwrap();
        let mode = BetaMode::Trunc(1);
        // every term is t_k t̄_k, two variables
        let want = cauchy_exponent(d, mode).scalar_mul(&ParamScalar::hbar_pow(-2, mode));
        assert_eq!(g, want);
    }

    #[test]
    fn summing_the_tower_gives_log_z_double() {
        let (d, nb) = (6, 5);
        let tower = solve_tower(2, d, nb).unwrap();
        let mut sum = TSeries::zero(d, BetaMode::Trunc(nb));
        for f in &tower.f {
            sum += f;
        }
        let (c, log_z) = z_double(d, nb).unwrap().log_unit().unwrap();
        assert!(c.is_one());
        assert_eq!(sum, log_z);
    }

    #[test]
    fn assembled_free_energy() {
        let tower = solve_tower(0, 4, 3).unwrap();
        let full = assemble_full_free_energy(&tower);
        let mode = BetaMode::Trunc(3);
        let s = ParamScalar::s(mode);
        let s3 = &(&s * &s) * &s;
        let cubic = (&ParamScalar::beta(mode) * &s3).scale(&ratio(1, 6));
        assert_eq!(full.series.constant_term(), cubic);
        assert_eq!(full.log_q_coeff, (&s * &s).scale(&ratio(1, 2)));
        // ∂_β at t = t̄ = 0 gives s³/6
        let dbeta = full.series.d_beta().constant_term();
        assert_eq!(
            dbeta,
            s3.scale(&ratio(1, 6))
                .with_mode(BetaMode::Trunc(2))
                .unwrap()
        );
        // no Q left, B carries it
        assert!(full
            .series
            .terms()
            .all(|(_, c)| c.terms().all(|(m, _)| m.q == 0)));
    }

    #[test]
    fn string_coefficients_are_derivatives() {
        for d in 1..=4 {
            let sol = crate::dispersionless::solve(d).unwrap();
            let rep = compare_with_string_solution(&sol, d + 1).unwrap();
            assert!(rep.all_match(), "{rep:?}");
        }
    }

    #[test]
    fn simple_specialization_values() {
        let tower = solve_tower(1, 6, 3).unwrap();
        let simple = simple_specialization(&tower).unwrap();
        let f0 = &simple[0];
        assert_eq!(
            coefficient(f0, &mono(&[(1, 1)], &[]), 0),
            BTreeMap::from([(q(1), ratio(1, 1))])
        );
        assert_eq!(beta_slice(f0, 0).len(), 1);
        // β¹Q²: t₂ + ½t₁² from Q²(t₂t̄₁² − t₁²t̄₂) and the k = 2 initial term
        assert_eq!(
            coefficient(f0, &mono(&[(2, 1)], &[]), 1),
            BTreeMap::from([(q(2), ratio(1, 1))])
        );
        assert!(beta_slice(&simple[1], 0).is_zero());
    }
}
