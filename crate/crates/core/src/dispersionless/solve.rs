//! Power-series solution of the classical string equations
//! `𝓛 = Q 𝓛̄ e^{β𝓜̄}`, `𝓛̄⁻¹ = Q 𝓛⁻¹ e^{β𝓜}`.
//!
//! Writing `log(𝓛p⁻¹) = Σ α_n p^{−n}` and `log(𝓛̄⁻¹p) = log ū₀ + Σ ᾱ_n p^n`,
//! the unknowns satisfy
//!
//! * `α_n = −β Σ_{k≥n} k t̄_k (𝓛̄^{−k})_{−n}`
//! * `ᾱ_n =  β Σ_{k≥n} k t_k (𝓛^k)_n`
//! * `ū₀ = B exp(Σ_k k α_k ᾱ_k)` with `B = Q e^{βs}`.
//!
//! Every right-hand side carries a time variable, so iterating the map from
//! `α = ᾱ = 0`, `ū₀ = B` fixes one more weighted degree per pass.

use crate::error::{Error, Result};
use crate::series::{BetaMode, PLaurent, ParamScalar, TSeries, Var, MAX_DEGREE};

pub(crate) const MODE: BetaMode = BetaMode::Poly;

/// Values substituted for the times; index `k − 1` holds `t_k` (or `t̄_k`).
#[derive(Clone, Debug)]
pub struct TimeValues {
    pub d: u32,
    pub t: Vec<TSeries>,
    pub tbar: Vec<TSeries>,
}

impl TimeValues {
    /// The free times `t_k`, `t̄_k`, `k ≤ D`.
    pub fn generic(d: u32) -> Self {
        TimeValues {
            d,
            t: (1..=d).map(|k| TSeries::var(Var::T(k), d, MODE)).collect(),
            tbar: (1..=d)
                .map(|k| TSeries::var(Var::TBar(k), d, MODE))
                .collect(),
        }
    }

    /// `t̄_k = t̄₁ δ_{k1}` with free `t_k`.
    pub fn case_i(d: u32) -> Self {
        let mut tv = Self::generic(d);
        for x in tv.tbar.iter_mut().skip(1) {
            *x = TSeries::zero(d, MODE);
        }
        tv
    }

    /// Sets every `t_k` to zero.
    pub fn without_t(mut self) -> Self {
        for x in self.t.iter_mut() {
            *x = TSeries::zero(self.d, MODE);
        }
        self
    }

    /// `t_k ↦ c^{−k} t_k`, `t̄_k ↦ c^k t̄_k` with `c` the auxiliary generator.
    pub fn scaled(mut self) -> Self {
        for (i, x) in self.t.iter_mut().enumerate() {
            *x = x.scalar_mul(&ParamScalar::c_pow(-(i as i32 + 1), MODE));
        }
        for (i, x) in self.tbar.iter_mut().enumerate() {
            *x = x.scalar_mul(&ParamScalar::c_pow(i as i32 + 1, MODE));
        }
        self
    }

    pub fn t(&self, k: u32) -> &TSeries {
        &self.t[k as usize - 1]
    }

    pub fn tbar(&self, k: u32) -> &TSeries {
        &self.tbar[k as usize - 1]
    }
}

/// Which residue formula determines `v_n`, `v̄_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VFormula {
    /// `βv_n = res((log(𝓛p⁻¹) + log(𝓛̄⁻¹p)) 𝓛^n dlog𝓛)` and the mirror
    /// formula for `v̄_n`: the coefficient extraction of the log string
    /// equations with both logarithms kept.
    Full,
    /// `βv_n = res(log(𝓛p⁻¹) 𝓛^n dlog𝓛)`,
    /// `βv̄_n = res(log(𝓛̄⁻¹p) 𝓛̄^{−n} dlog𝓛̄)`.
    SingleLog,
}

/// Solved coefficients through weighted degree `D`; vectors are indexed by
/// `n − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct StringSolution {
    pub d: u32,
    pub ubar0: TSeries,
    pub u: Vec<TSeries>,
    pub ubar: Vec<TSeries>,
    pub v: Vec<TSeries>,
    pub vbar: Vec<TSeries>,
    pub alpha: Vec<TSeries>,
    pub alphabar: Vec<TSeries>,
    pub times: TimeValues,
}

impl PartialEq for TimeValues {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d && self.t == o.t && self.tbar == o.tbar
    }
}

fn beta() -> ParamScalar {
    ParamScalar::beta(MODE)
}

fn b_series(d: u32) -> TSeries {
    TSeries::constant(ParamScalar::b_pow(1, MODE), d)
}

/// `Σ_n c_n p^{sign·n}`.
pub(crate) fn p_series(coeffs: &[TSeries], sign: i32, d: u32) -> PLaurent {
    let mut out = PLaurent::zero(d, MODE);
    for (i, c) in coeffs.iter().enumerate() {
        out += &PLaurent::from_series(c.clone(), sign * (i as i32 + 1));
    }
    out
}

/// One application of the fixed-point map.
fn step(
    tv: &TimeValues,
    alpha: &[TSeries],
    alphabar: &[TSeries],
    ubar0: &TSeries,
) -> Result<(Vec<TSeries>, Vec<TSeries>, TSeries)> {
    let d = tv.d;
    let a = p_series(alpha, -1, d);
    let abar = p_series(alphabar, 1, d);
    // (𝓛^k)_n = [p^{n−k}] e^{kA},  (𝓛̄^{−k})_{−n} = ū₀^k [p^{k−n}] e^{kĀ}
    let mut ea = Vec::new();
    let mut eab = Vec::new();
    for k in 1..=d {
        ea.push(a.scale_int(k as i64).exp_nilpotent()?);
        eab.push(abar.scale_int(k as i64).exp_nilpotent()?);
    }
    let mut new_alpha = Vec::new();
    let mut new_alphabar = Vec::new();
    for n in 1..=d {
        let mut acc = TSeries::zero(d, MODE);
        let mut accb = TSeries::zero(d, MODE);
        for k in n..=d {
            let (ki, ni) = (k as i32, n as i32);
            let tb = tv.tbar(k);
            if !tb.is_zero() {
                let c = &ubar0.pow(k) * &eab[k as usize - 1].coeff(ki - ni)?;
                acc += &(tb * &c).scale_int(k as i64);
            }
            let t = tv.t(k);
            if !t.is_zero() {
                let c = ea[k as usize - 1].coeff(ni - ki)?;
                accb += &(t * &c).scale_int(k as i64);
            }
        }
        new_alpha.push(acc.scalar_mul(&-beta()));
        new_alphabar.push(accb.scalar_mul(&beta()));
    }
    let mut sum = TSeries::zero(d, MODE);
    for (k, (x, y)) in new_alpha.iter().zip(&new_alphabar).enumerate() {
        sum += &(x * y).scale_int(k as i64 + 1);
    }
    let new_ubar0 = &b_series(d) * &sum.exp_series()?;
    Ok((new_alpha, new_alphabar, new_ubar0))
}

/// `v_n`, `v̄_n` from `α`, `ᾱ`, `ū₀`.
pub(crate) fn v_coefficients(
    d: u32,
    alpha: &[TSeries],
    alphabar: &[TSeries],
    ubar0: &TSeries,
    formula: VFormula,
) -> Result<(Vec<TSeries>, Vec<TSeries>)> {
    let a = p_series(alpha, -1, d);
    let abar = p_series(alphabar, 1, d);
    let inv_p = PLaurent::p_pow(-1, d, MODE);
    // ∂_p log 𝓛 = 1/p + A',  ∂_p log 𝓛̄ = 1/p − Ā'
    let dlog_l = &inv_p + &a.derive_p();
    let dlog_lbar = &inv_p - &abar.derive_p();
    let (wl, wlb) = match formula {
        VFormula::Full => (&a + &abar, &a + &abar),
        VFormula::SingleLog => (a.clone(), abar.clone()),
    };
    let mut v = Vec::new();
    let mut vbar = Vec::new();
    for n in 1..=d {
        let ni = n as i32;
        // 𝓛^n = p^n e^{nA},  𝓛̄^{−n} = ū₀^n p^{−n} e^{nĀ}
        let ln = a.scale_int(n as i64).exp_nilpotent()?.shift(ni);
        let lbn = abar
            .scale_int(n as i64)
            .exp_nilpotent()?
            .series_mul(&ubar0.pow(n))
            .shift(-ni);
        let r = (&(&wl * &ln) * &dlog_l).residue()?;
        let rb = (&(&wlb * &lbn) * &dlog_lbar).residue()?;
        v.push(r.div_beta()?);
        vbar.push(rb.div_beta()?);
    }
    Ok((v, vbar))
}

/// `u_n = [p^{−n}] e^{A}`, `ū_n = ū₀ [p^n] e^{Ā}`.
pub(crate) fn u_coefficients(
    d: u32,
    alpha: &[TSeries],
    alphabar: &[TSeries],
    ubar0: &TSeries,
) -> Result<(Vec<TSeries>, Vec<TSeries>)> {
    let ea = p_series(alpha, -1, d).exp_nilpotent()?;
    let eab = p_series(alphabar, 1, d).exp_nilpotent()?;
    let mut u = Vec::new();
    let mut ubar = Vec::new();
    for n in 1..=d as i32 {
        u.push(ea.coeff(-n)?);
        ubar.push(&eab.coeff(n)? * ubar0);
    }
    Ok((u, ubar))
}

fn check_d(d: u32) -> Result<()> {
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            requested: d,
            limit: MAX_DEGREE,
        });
    }
    Ok(())
}

/// Solves with the given time values and residue formula.
pub fn solve_with(tv: TimeValues, formula: VFormula) -> Result<StringSolution> {
    let d = tv.d;
    check_d(d)?;
    let mut alpha = vec![TSeries::zero(d, MODE); d as usize];
    let mut alphabar = alpha.clone();
    let mut ubar0 = b_series(d);
    for _ in 0..d {
        (alpha, alphabar, ubar0) = step(&tv, &alpha, &alphabar, &ubar0)?;
    }
    // one more pass must be a no-op
    let again = step(&tv, &alpha, &alphabar, &ubar0)?;
    if again.0 != alpha || again.1 != alphabar || again.2 != ubar0 {
        return Err(Error::ResourceBound(
            "string equation iteration did not stabilize".into(),
        ));
    }
    let (u, ubar) = u_coefficients(d, &alpha, &alphabar, &ubar0)?;
    let (v, vbar) = v_coefficients(d, &alpha, &alphabar, &ubar0, formula)?;
    Ok(StringSolution {
        d,
        ubar0,
        u,
        ubar,
        v,
        vbar,
        alpha,
        alphabar,
        times: tv,
    })
}

/// The solution in the free times through weighted degree `D`.
pub fn solve(d: u32) -> Result<StringSolution> {
    solve_with(TimeValues::generic(d), VFormula::Full)
}

/// `𝓛 = p + Σ u_n p^{1−n}`.
pub fn build_l(sol: &StringSolution) -> PLaurent {
    &PLaurent::p_pow(1, sol.d, MODE) + &p_series(&sol.u, -1, sol.d).shift(1)
}

/// `𝓛̄⁻¹ = ū₀ p⁻¹ + Σ ū_n p^{n−1}`.
pub fn build_lbar_inv(sol: &StringSolution) -> PLaurent {
    &PLaurent::from_series(sol.ubar0.clone(), -1) + &p_series(&sol.ubar, 1, sol.d).shift(-1)
}

fn s_term(d: u32) -> PLaurent {
    PLaurent::from_series(TSeries::constant(ParamScalar::s(MODE), d), 0)
}

/// `𝓜 = Σ k t_k 𝓛^k + s + Σ v_n 𝓛^{−n}`.
pub fn build_m(sol: &StringSolution) -> Result<PLaurent> {
    let d = sol.d;
    let l = build_l(sol);
    let linv = l.inverse(1)?;
    let mut out = s_term(d);
    let (mut lk, mut lmk) = (PLaurent::one(d, MODE), PLaurent::one(d, MODE));
    for k in 1..=d {
        lk = &lk * &l;
        lmk = &lmk * &linv;
        out += &lk.series_mul(&sol.times.t(k).scale_int(k as i64));
        out += &lmk.series_mul(&sol.v[k as usize - 1]);
    }
    Ok(out)
}

/// `𝓜̄ = −Σ k t̄_k 𝓛̄^{−k} + s + Σ v̄_n 𝓛̄^n`.
pub fn build_mbar(sol: &StringSolution) -> Result<PLaurent> {
    let d = sol.d;
    let lbi = build_lbar_inv(sol);
    let lb = lbi.inverse(-1)?;
    let mut out = s_term(d);
    let (mut lk, mut lmk) = (PLaurent::one(d, MODE), PLaurent::one(d, MODE));
    for k in 1..=d {
        lmk = &lmk * &lbi;
        lk = &lk * &lb;
        out += &lmk.series_mul(&sol.times.tbar(k).scale_int(-(k as i64)));
        out += &lk.series_mul(&sol.vbar[k as usize - 1]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Monomial;

    fn var(v: Var, d: u32) -> TSeries {
        TSeries::var(v, d, MODE)
    }

    #[test]
    fn low_degree_terms() {
        let d = 3;
        let sol = solve(d).unwrap();
        let b = ParamScalar::b_pow(1, MODE);
        let bt = &beta() * &b;
        // ū₀ = B + O(deg 2)
        assert_eq!(sol.ubar0.homogeneous(0), b_series(d));
        assert!(sol.ubar0.homogeneous(1).is_zero());
        // u₁ = −β t̄₁ B, ū₁ = β t₁ B at degree 1
        assert_eq!(
            sol.u[0].homogeneous(1),
            var(Var::TBar(1), d).scalar_mul(&-bt.clone())
        );
        assert_eq!(
            sol.ubar[0].homogeneous(1),
            var(Var::T(1), d).scalar_mul(&bt)
        );
        // u_n = −βn t̄_n B^n + higher, ū_n = βn t_n B + higher
        for n in 1..=d {
            let i = n as usize - 1;
            let bn = &beta() * &ParamScalar::b_pow(n as i32, MODE);
            assert_eq!(
                sol.u[i].coeff(&Monomial::var(Var::TBar(n))),
                bn.scale_int(-(n as i64))
            );
            assert_eq!(
                sol.ubar[i].coeff(&Monomial::var(Var::T(n))),
                (&beta() * &b).scale_int(n as i64)
            );
            assert!(sol.u[n as usize - 1].min_degree().unwrap_or(n) >= n);
        }
    }

    #[test]
    fn zero_times() {
        let d = 3;
        let sol = solve_with(TimeValues::generic(d).without_t(), VFormula::Full).unwrap();
        let l = build_l(&sol);
        let zero = |x: &TSeries| x.filter(|m, _| m.degree() == 0);
        assert_eq!(l.map_coeffs(zero), PLaurent::p_pow(1, d, MODE));
        let lb = build_lbar_inv(&sol);
        assert_eq!(lb.map_coeffs(zero), PLaurent::from_series(b_series(d), -1));
        assert_eq!(sol.ubar0, b_series(d));
    }
}
