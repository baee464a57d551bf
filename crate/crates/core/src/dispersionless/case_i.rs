//! The specialization `t̄_k = t̄₁ δ_{k1}`, where `𝓛 = p e^{α₁/p}` with
//! `α₁ = −βt̄₁ū₀`, and its Lambert-curve form at `t = 0`.

use serde::Serialize;

use crate::error::Result;
use crate::series::{ratio, PLaurent, ParamScalar, TSeries, Var};

use super::solve::{
    build_l, build_lbar_inv, u_coefficients, v_coefficients, StringSolution, TimeValues, VFormula,
    MODE,
};

/// `(k α₁)^j / j!`.
fn power_over_factorial(x: &TSeries, j: u32) -> TSeries {
    let mut out = TSeries::one(x.degree_bound(), MODE);
    for i in 1..=j {
        out = (&out * x).scale(&ratio(1, i as i64));
    }
    out
}

/// Solves case (i) directly from the explicit formulas
/// `(𝓛^k)_n = (kα₁)^{k−n}/(k−n)!` and
/// `log ū₀ = log Q + βs + βΣ_k k t_k (kα₁)^k/k!`.
pub fn solve_case_i_with(tv: TimeValues) -> Result<StringSolution> {
    let d = tv.d;
    let beta = ParamScalar::beta(MODE);
    let b = TSeries::constant(ParamScalar::b_pow(1, MODE), d);
    let tb1 = tv.tbar(1).clone();
    let alpha1 = |ubar0: &TSeries| (&tb1 * ubar0).scalar_mul(&-beta.clone());
    let mut ubar0 = b.clone();
    for _ in 0..=d {
        let a1 = alpha1(&ubar0);
        let mut sum = TSeries::zero(d, MODE);
        for k in 1..=d {
            let t = tv.t(k);
            if t.is_zero() {
                continue;
            }
            let lk0 = power_over_factorial(&a1.scale_int(k as i64), k);
            sum += &(t * &lk0).scale_int(k as i64);
        }
        ubar0 = &b * &sum.scalar_mul(&beta).exp_series()?;
    }
    let a1 = alpha1(&ubar0);
    let mut alpha = vec![TSeries::zero(d, MODE); d as usize];
    alpha[0] = a1.clone();
    let mut alphabar = Vec::new();
    for n in 1..=d {
        let mut acc = TSeries::zero(d, MODE);
        for k in n..=d {
            let lkn = power_over_factorial(&a1.scale_int(k as i64), k - n);
            acc += &(tv.t(k) * &lkn).scale_int(k as i64);
        }
        alphabar.push(acc.scalar_mul(&beta));
    }
    let (u, ubar) = u_coefficients(d, &alpha, &alphabar, &ubar0)?;
    let (v, vbar) = v_coefficients(d, &alpha, &alphabar, &ubar0, VFormula::Full)?;
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

/// Case (i) with free `t_k`.
pub fn solve_case_i(d: u32) -> Result<StringSolution> {
    solve_case_i_with(TimeValues::case_i(d))
}

/// Checks of the Lambert form `x = y e^y` with `c = βt̄₁ū₀`,
/// `x = c 𝓛⁻¹`, `y = c p⁻¹`, on a case-(i) solution at `t = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct LambertReport {
    pub d: u32,
    /// `ū₀ = B` (i.e. `Qe^{βs}`).
    pub ubar0_is_b: bool,
    /// `𝓛̄⁻¹ = ū₀ p⁻¹`.
    pub lbar_inv_monomial: bool,
    /// `𝓛 = ū₀ 𝓛̄ e^{−βt̄₁𝓛̄⁻¹}`.
    pub l_from_lbar: bool,
    /// Coefficients of `p⁻¹` and `p⁻²` in `x` and `y e^y` agree.
    pub low_orders: bool,
    /// `x = y e^y` through `p^{−D}`.
    pub full_window: bool,
}

impl LambertReport {
    pub fn all_pass(&self) -> bool {
        self.ubar0_is_b
            && self.lbar_inv_monomial
            && self.l_from_lbar
            && self.low_orders
            && self.full_window
    }
}

pub fn lambert_form(sol: &StringSolution) -> Result<LambertReport> {
    let d = sol.d;
    let b = TSeries::constant(ParamScalar::b_pow(1, MODE), d);
    let beta = ParamScalar::beta(MODE);
    let l = build_l(sol);
    let lbi = build_lbar_inv(sol);
    let lb = lbi.inverse(-1)?;
    let tb1 = TSeries::var(Var::TBar(1), d, MODE);

    let e = lbi
        .series_mul(&tb1.scalar_mul(&-beta.clone()))
        .exp_nilpotent()?;
    let l_from_lbar = l == (&lb * &e).series_mul(&sol.ubar0);

    let c = (&tb1 * &sol.ubar0).scalar_mul(&beta);
    let x = l.inverse(1)?.series_mul(&c);
    let y = PLaurent::from_series(c, -1);
    let rhs = &y * &y.exp_nilpotent()?;
    let mut low = true;
    for n in [-1, -2] {
        low &= x.coeff(n)? == rhs.coeff(n)?;
    }
    let full = (-(d as i32)..=0).all(|n| x.coeff(n).ok() == rhs.coeff(n).ok()) && x == rhs;
    Ok(LambertReport {
        d,
        ubar0_is_b: sol.ubar0 == b,
        lbar_inv_monomial: lbi == PLaurent::from_series(sol.ubar0.clone(), -1),
        l_from_lbar,
        low_orders: low,
        full_window: full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersionless::solve::solve_with;
    use crate::dispersionless::verify::verify_string_equations;

    #[test]
    fn matches_general_solver() {
        for d in 1..=4 {
            let direct = solve_case_i(d).unwrap();
            let general = solve_with(TimeValues::case_i(d), VFormula::Full).unwrap();
            assert_eq!(direct, general, "D={d}");
        }
    }

    #[test]
    fn specialized_solution_is_a_solution() {
        let sol = solve_case_i(4).unwrap();
        let rep = verify_string_equations(&sol, false).unwrap();
        assert_eq!(rep.string_eq, [Some(4), Some(4)]);
    }

    #[test]
    fn lambert_identity() {
        for d in 1..=5 {
            let sol = solve_case_i_with(TimeValues::case_i(d).without_t()).unwrap();
            let rep = lambert_form(&sol).unwrap();
            assert!(rep.all_pass(), "{rep:?}");
        }
    }

    #[test]
    fn second_order_coefficient() {
        let d = 3;
        let sol = solve_case_i_with(TimeValues::case_i(d).without_t()).unwrap();
        let c = (&TSeries::var(Var::TBar(1), d, MODE) * &sol.ubar0)
            .scalar_mul(&ParamScalar::beta(MODE));
        let x = build_l(&sol).inverse(1).unwrap().series_mul(&c);
        assert_eq!(x.coeff(-1).unwrap(), c);
        assert_eq!(x.coeff(-2).unwrap(), &c * &c);
    }
}
