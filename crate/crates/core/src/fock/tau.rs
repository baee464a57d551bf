//! Matrix elements of exponentials of currents and the charge-`s` tau
//! function `τ_s = ⟨s| e^{Σ t_k Ĵ_k} g e^{−Σ t̄_k Ĵ_{−k}} |s⟩`.
//!
//! `Ĵ_k` (`k > 0`) removes `k` boxes, so `e^{Σ t_k Ĵ_{−k}}|s⟩` is expanded by
//! repeatedly applying the box-adding currents, each step raising the
//! weighted degree by the same amount as `|λ|`.

use std::collections::BTreeMap;

use crate::combinat::{partitions_up_to, Partition};
use crate::error::{Error, Result};
use crate::hurwitz::z_double;
use crate::schur::Times;
use crate::series::{ratio, BetaMode, Monomial, ParamScalar, TSeries, Var, MAX_DEGREE};

use super::maya::{bilinear_action, FockIndex};

/// A vector in one charge sector with series coefficients.
pub type StateVector = BTreeMap<Partition, TSeries>;

fn time(vars: Times, k: u32) -> (Var, i64) {
    match vars {
        Times::T => (Var::T(k), 1),
        Times::TBar => (Var::TBar(k), 1),
        Times::NegT => (Var::T(k), -1),
        Times::NegTBar => (Var::TBar(k), -1),
    }
}

fn check_degree(d: u32) -> Result<()> {
    if d > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            requested: d,
            limit: MAX_DEGREE,
        });
    }
    Ok(())
}

/// `X v` with `X = Σ_k x_k Ĵ_{∓k}`: `raise` selects box-adding currents.
fn apply_currents(v: &StateVector, s: i64, vars: Times, d: u32, raise: bool) -> StateVector {
    let mut out: StateVector = BTreeMap::new();
    for (mu, c) in v {
        let size = mu.size();
        let kmax = if raise {
            d.saturating_sub(size)
        } else {
            size.min(d)
        };
        for k in 1..=kmax {
            let (var, sign) = time(vars, k);
            let scaled = c.mul_monomial(Monomial::var(var)).scale_int(sign);
            if scaled.is_zero() {
                continue;
            }
            let m = if raise { -(k as i64) } else { k as i64 };
            for (target, _, sg) in bilinear_action(&FockIndex::new(mu.clone(), s), m) {
                let term = scaled.scale_int(sg);
                out.entry(target.lambda)
                    .and_modify(|x| *x += &term)
                    .or_insert(term);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `⟨λ, s| e^{Σ_k x_k Ĵ_{−k}} |s⟩` for all `|λ| ≤ D`, where `x` are the
/// chosen times truncated at weighted degree `D`.
pub fn exp_current_state(s: i64, vars: Times, d: u32, mode: BetaMode) -> Result<StateVector> {
    check_degree(d)?;
    let mut term: StateVector = BTreeMap::new();
    term.insert(Partition::empty(), TSeries::one(d, mode));
    let mut total = term.clone();
    let mut n = 1;
    loop {
        term = apply_currents(&term, s, vars, d, true);
        if term.is_empty() {
            break;
        }
        let inv = ratio(1, n);
        for (l, c) in &term {
            let c = c.scale(&inv);
            total
                .entry(l.clone())
                .and_modify(|x| *x += &c)
                .or_insert(c.clone());
        }
        for c in term.values_mut() {
            *c = c.scale(&inv);
        }
        n += 1;
    }
    total.retain(|_, c| !c.is_zero());
    Ok(total)
}

/// `⟨s| e^{Σ_k x_k Ĵ_k} |λ, s⟩`.
pub fn exp_current_costate(
    lambda: &Partition,
    s: i64,
    vars: Times,
    d: u32,
    mode: BetaMode,
) -> Result<TSeries> {
    check_degree(d)?;
    let mut term: StateVector = BTreeMap::new();
    term.insert(lambda.clone(), TSeries::one(d, mode));
    let vac = Partition::empty();
    let mut total = TSeries::zero(d, mode);
    if lambda.is_empty() {
        total = TSeries::one(d, mode);
    }
    let mut n = 1;
    while !term.is_empty() {
        term = apply_currents(&term, s, vars, d, false);
        let inv = ratio(1, n);
        for c in term.values_mut() {
            *c = c.scale(&inv);
        }
        if let Some(c) = term.get(&vac) {
            total += c;
        }
        n += 1;
    }
    Ok(total)
}

/// `τ_s` through weighted degree `D` from the diagonal of `g`:
/// `Σ_λ ⟨s|e^{Σ t_k Ĵ_k}|λ,s⟩ g_λ ⟨λ,s|e^{−Σ t̄_k Ĵ_{−k}}|s⟩`.
pub fn tau_expand(s: i64, d: u32, n_beta: u32) -> Result<TSeries> {
    check_degree(d)?;
    let mode = BetaMode::Trunc(n_beta);
    let kets = exp_current_state(s, Times::NegTBar, d, mode)?;
    let g = super::bilinear::build_g(d / 2, s, n_beta);
    let mut out = TSeries::zero(d, mode);
    for lambda in partitions_up_to(d / 2) {
        let Some(ket) = kets.get(&lambda) else {
            continue;
        };
        let bra = exp_current_costate(&lambda, s, Times::T, d, mode)?;
        let gl = g.diagonal(&lambda).expect("inside basis");
        out += &(&bra * ket).scalar_mul(&gl);
    }
    Ok(out)
}

/// The normalization `e^{βs(s+1)(2s+1)/12} Q^{s(s+1)/2}` times
/// `Z_double` with `Q^e ↦ Q^e e^{eβ(s+½)}`, the expected value of `τ_s`.
pub fn tau_from_z_double(s: i64, d: u32, n_beta: u32) -> Result<TSeries> {
    let mode = BetaMode::Trunc(n_beta);
    let z = z_double(d, n_beta)?;
    let beta = ParamScalar::beta(mode);
    let shift = |e: i32| -> ParamScalar {
        beta.scale(&ratio(e as i64 * (2 * s + 1), 2))
            .exp_nilpotent()
            .expect("nilpotent")
    };
    let z = z
        .map_coeffs(|c| c.substitute_monomials(|m| &shift(m.q) * &ParamScalar::monomial(*m, mode)));
    let pre = &beta
        .scale(&ratio(s * (s + 1) * (2 * s + 1), 12))
        .exp_nilpotent()?
        * &ParamScalar::q_pow((s * (s + 1) / 2) as i32, mode);
    Ok(z.scalar_mul(&pre))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::cauchy_kernel;
    use crate::schur::schur;

    const P: BetaMode = BetaMode::Poly;

    #[test]
    fn ket_coefficients_are_schur() {
        let d = 5;
        for s in -2..=2 {
            let v = exp_current_state(s, Times::T, d, P).unwrap();
            for l in partitions_up_to(d) {
                let want = schur(&l, Times::T, d, P).unwrap();
                let got = v.get(&l).cloned().unwrap_or_else(|| TSeries::zero(d, P));
                assert_eq!(got, want, "{l} s={s}");
            }
            assert!(v.keys().all(|l| l.size() <= d));
        }
    }

    #[test]
    fn costate_coefficients_are_schur() {
        let d = 5;
        for s in -1..=1 {
            for l in partitions_up_to(d) {
                let got = exp_current_costate(&l, s, Times::T, d, P).unwrap();
                assert_eq!(got, schur(&l, Times::T, d, P).unwrap(), "{l} s={s}");
            }
        }
    }

    #[test]
    fn small_examples() {
        let v = exp_current_state(0, Times::T, 3, P).unwrap();
        assert_eq!(v[&Partition::empty()], TSeries::one(3, P));
        assert_eq!(v[&Partition::new(vec![1])], TSeries::var(Var::T(1), 3, P));
    }

    #[test]
    fn tau_at_zero_charge_is_shifted_z_double() {
        let (d, n) = (4, 3);
        let tau = tau_expand(0, d, n).unwrap();
        let mode = BetaMode::Trunc(n);
        // Q ↦ e^{β/2} Q, applied term by term: Q^e picks up e^{eβ/2}
        let mut want = TSeries::zero(d, mode);
        for (m, c) in z_double(d, n).unwrap().terms() {
            let mut shifted = ParamScalar::zero(mode);
            for (pm, r) in c.terms() {
                let f = ParamScalar::beta(mode)
                    .scale(&ratio(pm.q as i64, 2))
                    .exp_nilpotent()
                    .unwrap();
                shifted = &shifted + &f.mul_monomial(*pm).scale(r);
            }
            want += &TSeries::monomial(*m, shifted, d);
        }
        assert_eq!(tau, want);
        assert_ne!(tau, z_double(d, n).unwrap());
    }

    #[test]
    fn tau_with_charge() {
        let (d, n) = (4, 3);
        for s in [-2, -1, 1, 2] {
            assert_eq!(
                tau_expand(s, d, n).unwrap(),
                tau_from_z_double(s, d, n).unwrap(),
                "s={s}"
            );
        }
    }

    #[test]
    fn tau_beta_zero_is_cauchy() {
        let d = 6;
        let tau = tau_expand(0, d, 2).unwrap();
        let mode = BetaMode::Trunc(2);
        let zeroth = tau.map_coeffs(|c| c.filter(|m| m.beta == 0));
        assert_eq!(zeroth, cauchy_kernel(d, mode).unwrap());
    }
}
