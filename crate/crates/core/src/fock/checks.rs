//! The operator identities of the truncated Fock sectors as runnable checks.
//! Each check returns a list of failure descriptions; comparisons between
//! matrices use only columns that are truncation-exact in both operands.

use std::sync::Arc;

use rayon::prelude::*;

use crate::combinat::kappa;
use crate::error::Result;
use crate::report::{run_check, CheckReport};
use crate::schur::{schur, Times};
use crate::series::{ratio, BetaMode, ParamScalar, TSeries};

use super::bilinear::{
    bilinear_on, build_g, build_j, build_l0, build_m0_fermionic, build_w0, commutator_with_cocycle,
    exp_w0, q_pow_l0, spec_j, spec_l0, spec_lambda_exp, spec_quantum_torus, spec_w0, Basis,
    BilinearOp, BilinearSpec,
};
use super::tau::{exp_current_state, tau_expand, tau_from_z_double};

/// Parameters of the Fock suite.
#[derive(Clone, Debug)]
pub struct FockSuite {
    pub d_max: u32,
    pub charges: Vec<i64>,
    pub n_beta: u32,
    /// Largest `k` in the intertwining and adjoint checks.
    pub k_max: i64,
    /// Weighted degree for the tau and Schur checks.
    pub tau_degree: u32,
}

impl Default for FockSuite {
    fn default() -> Self {
        FockSuite {
            d_max: 8,
            charges: (-3..=3).collect(),
            n_beta: 5,
            k_max: 3,
            tau_degree: 5,
        }
    }
}

fn exp_beta(c: i64, den: i64, mode: BetaMode) -> ParamScalar {
    ParamScalar::beta(mode)
        .scale(&ratio(c, den))
        .exp_nilpotent()
        .expect("beta is nilpotent in truncated mode")
}

fn describe(kind: &str, s: i64, mism: &[(crate::Partition, crate::Partition)]) -> Vec<String> {
    mism.iter()
        .map(|(l, m)| format!("{kind} s={s} at ({l},{m})"))
        .collect()
}

/// `L₀`, `W₀`, `J₀` diagonals against their closed forms.
pub fn check_diagonal_closed_forms(d_max: u32, s: i64) -> Vec<String> {
    let mode = BetaMode::Poly;
    let (l0, w0, j0) = (
        build_l0(d_max, s, mode),
        build_w0(d_max, s, mode),
        build_j(0, d_max, s, mode),
    );
    let mut bad = Vec::new();
    for op in [&l0, &w0, &j0] {
        if !op.is_diagonal() {
            bad.push(format!("s={s}: not diagonal"));
        }
    }
    for l in &l0.basis().parts {
        let size = l.size() as i64;
        let want_l = ParamScalar::from_int(size + s * (s + 1) / 2, mode);
        let want_w = ParamScalar::from_int(
            kappa(l) + (2 * s + 1) * size + s * (s + 1) * (2 * s + 1) / 6,
            mode,
        );
        if l0.diagonal(l) != Some(want_l) {
            bad.push(format!("L0 s={s} {l}"));
        }
        if w0.diagonal(l) != Some(want_w) {
            bad.push(format!("W0 s={s} {l}"));
        }
        if j0.diagonal(l) != Some(ParamScalar::from_int(s, mode)) {
            bad.push(format!("J0 s={s} {l}"));
        }
    }
    bad
}

/// `M₀` eigenvalues `κ_λ/2 + s|λ| + (4s³ − s)/24`.
pub fn check_m0_eigenvalues(d_max: u32, s: i64) -> Result<Vec<String>> {
    let mode = BetaMode::Poly;
    let m0 = build_m0_fermionic(d_max, s, mode)?;
    let mut bad = Vec::new();
    if !m0.is_diagonal() {
        bad.push(format!("M0 s={s}: not diagonal"));
    }
    for l in &m0.basis().parts {
        let want = &ParamScalar::from_rational(ratio(kappa(l), 2), mode)
            + &ParamScalar::from_rational(
                ratio(24 * s * l.size() as i64 + 4 * s * s * s - s, 24),
                mode,
            );
        if m0.diagonal(l) != Some(want) {
            bad.push(format!("M0 s={s} {l}"));
        }
    }
    Ok(bad)
}

/// `Q^{L₀} Ĵ_m Q^{−L₀} = Q^{−m} Ĵ_m` and
/// `e^{−βW₀/2} Ĵ_m e^{βW₀/2} = e^{−βm²/2} Σ e^{βmn} :ψ_{−n+m} ψ*_n:`.
pub fn check_adjoint(d_max: u32, s: i64, n_beta: u32, m_max: i64) -> Result<Vec<String>> {
    let mode = BetaMode::Trunc(n_beta);
    let basis = Arc::new(Basis::new(d_max));
    let qp = q_pow_l0(1, d_max, s, mode)?;
    let qm = q_pow_l0(-1, d_max, s, mode)?;
    let ep = exp_w0(1, d_max, s, mode)?;
    let em = exp_w0(-1, d_max, s, mode)?;
    let mut bad = Vec::new();
    for m in -m_max..=m_max {
        if m == 0 {
            continue;
        }
        let j = bilinear_on(&spec_j(m, mode), basis.clone(), s);
        let lhs = qp.mul(&j)?.mul(&qm)?;
        let rhs = j.scalar_mul(&ParamScalar::q_pow(-m as i32, mode));
        bad.extend(describe(&format!("Q^L0 J_{m}"), s, &lhs.mismatches(&rhs)?));

        let lhs = em.mul(&j)?.mul(&ep)?;
        let spec = BilinearSpec::new(mode).band(m, move |n| exp_beta(m * n, 1, mode));
        let rhs = bilinear_on(&spec, basis.clone(), s).scalar_mul(&exp_beta(-m * m, 2, mode));
        bad.extend(describe(&format!("e^W0 J_{m}"), s, &lhs.mismatches(&rhs)?));
    }
    Ok(bad)
}

/// `Ĵ_k g = g Q^k e^{−βk²/2} hat(Λ^k e^{βkΔ})` and
/// `g Ĵ_{−k} = Q^k e^{βk²/2} hat(Λ^{−k} e^{βkΔ}) g` for `1 ≤ k ≤ k_max`.
pub fn check_intertwining(d_max: u32, s: i64, n_beta: u32, k_max: i64) -> Result<Vec<String>> {
    let mode = BetaMode::Trunc(n_beta);
    let g = build_g(d_max, s, n_beta);
    let basis = Arc::new(Basis::new(d_max));
    let mut bad = Vec::new();
    for k in 1..=k_max {
        let jk = bilinear_on(&spec_j(k, mode), basis.clone(), s);
        let jmk = bilinear_on(&spec_j(-k, mode), basis.clone(), s);
        let cp = bilinear_on(&spec_lambda_exp(k, 1, mode), basis.clone(), s);
        let cm = bilinear_on(&spec_lambda_exp(k, -1, mode), basis.clone(), s);
        let qk = ParamScalar::q_pow(k as i32, mode);

        let lhs = jk.mul(&g)?;
        let rhs = g.mul(&cp)?.scalar_mul(&(&qk * &exp_beta(-k * k, 2, mode)));
        if lhs.complete_count() == 0 {
            bad.push(format!("J_{k} g s={s}: no exact columns"));
        }
        bad.extend(describe(&format!("J_{k} g"), s, &lhs.mismatches(&rhs)?));

        let lhs = g.mul(&jmk)?;
        let rhs = cm.mul(&g)?.scalar_mul(&(&qk * &exp_beta(k * k, 2, mode)));
        if lhs.complete_count() == 0 {
            bad.push(format!("g J_-{k} s={s}: no exact columns"));
        }
        bad.extend(describe(&format!("g J_-{k}"), s, &lhs.mismatches(&rhs)?));
    }
    Ok(bad)
}

fn bracket_specs(mode: BetaMode) -> Vec<(String, BilinearSpec)> {
    vec![
        ("J_1".into(), spec_j(1, mode)),
        ("J_-1".into(), spec_j(-1, mode)),
        ("J_-2".into(), spec_j(-2, mode)),
        ("L0".into(), spec_l0(mode)),
        ("W0".into(), spec_w0(mode)),
        ("V(1)_1".into(), spec_quantum_torus(1, 1, mode)),
        ("V(1)_-1".into(), spec_quantum_torus(1, -1, mode)),
        ("V(2)_2".into(), spec_quantum_torus(2, 2, mode)),
    ]
}

/// `[Â, B̂] = hat([A, B]) + γ(A, B)` over a fixed family of bilinears.
pub fn check_commutators(d_max: u32, s: i64, n_beta: u32) -> Result<Vec<String>> {
    let mode = BetaMode::Trunc(n_beta);
    let basis = Arc::new(Basis::new(d_max));
    let specs = bracket_specs(mode);
    let mut bad = Vec::new();
    for (na, a) in &specs {
        for (nb, b) in &specs {
            let (c, gamma) = commutator_with_cocycle(a, b, d_max, s)?;
            let rhs = bilinear_on(&a.bracket(b), basis.clone(), s)
                .add(&BilinearOp::identity(basis.clone(), s, mode).scalar_mul(&gamma))?;
            bad.extend(describe(&format!("[{na},{nb}]"), s, &c.mismatches(&rhs)?));
        }
    }
    let (_, g) = commutator_with_cocycle(&spec_j(1, mode), &spec_j(-1, mode), d_max, s)?;
    if !g.is_one() {
        bad.push(format!("cocycle(Λ, Λ^-1) = {g}"));
    }
    Ok(bad)
}

/// `V^{(k)}_0` diagonal against the re-summed level sums, `k = 1, 2`.
pub fn check_quantum_torus_diagonal(d_max: u32, s: i64, n_beta: u32) -> Vec<String> {
    let mode = BetaMode::Trunc(n_beta);
    let basis = Arc::new(Basis::new(d_max));
    let mut bad = Vec::new();
    for k in 1..=2i64 {
        let v = bilinear_on(&spec_quantum_torus(k, 0, mode), basis.clone(), s);
        let q = |n: i64| exp_beta(k * n, 1, mode);
        let mut vac = ParamScalar::zero(mode);
        if s > 0 {
            for n in 1..=s {
                vac = &vac + &q(n);
            }
        } else {
            for n in (s + 1)..=0 {
                vac = &vac - &q(n);
            }
        }
        for l in &basis.parts {
            let mut want = vac.clone();
            for i in 1..=l.len() as i64 {
                let lam = l.part(i as usize - 1) as i64;
                want = &(&want + &q(lam + s - i + 1)) - &q(s - i + 1);
            }
            if v.diagonal(l) != Some(want) {
                bad.push(format!("V({k})_0 s={s} {l}"));
            }
        }
    }
    let v00 = bilinear_on(&spec_quantum_torus(0, 0, mode), basis.clone(), s);
    let j0 = bilinear_on(&spec_j(0, mode), basis, s);
    if let Ok(m) = v00.mismatches(&j0) {
        bad.extend(describe("V(0)_0", s, &m));
    }
    bad
}

/// Matrix elements of `e^{Σ t_k Ĵ_{−k}}` against Jacobi–Trudi Schur functions.
pub fn check_schur_states(d: u32, s: i64) -> Result<Vec<String>> {
    let mode = BetaMode::Poly;
    let v = exp_current_state(s, Times::T, d, mode)?;
    let mut bad = Vec::new();
    for l in crate::combinat::partitions_up_to(d) {
        let got = v.get(&l).cloned().unwrap_or_else(|| TSeries::zero(d, mode));
        if got != schur(&l, Times::T, d, mode)? {
            bad.push(format!("s={s} {l}"));
        }
    }
    Ok(bad)
}

/// `τ_s` against the normalized, `Q`-shifted double generating function.
pub fn check_tau(s: i64, d: u32, n_beta: u32) -> Result<Vec<String>> {
    let got = tau_expand(s, d, n_beta)?;
    let want = tau_from_z_double(s, d, n_beta)?;
    let diff = &got - &want;
    Ok(diff
        .terms()
        .take(3)
        .map(|(m, c)| format!("s={s} coefficient of {m} off by {c}"))
        .collect())
}

fn range_of(charges: &[i64]) -> String {
    match (charges.first(), charges.last()) {
        (Some(a), Some(b)) => format!("s={a}..{b}"),
        _ => "s=none".into(),
    }
}

fn per_charge(
    charges: &[i64],
    f: impl Fn(i64) -> Result<Vec<String>> + Sync,
) -> Result<Vec<String>> {
    let parts: Vec<Result<Vec<String>>> = charges.par_iter().map(|&s| f(s)).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Runs every Fock check.
pub fn run_suite(cfg: &FockSuite) -> Vec<CheckReport> {
    let cs = &cfg.charges;
    let range = |extra: String| format!("{} {extra}", range_of(cs));
    let (d, n, k) = (cfg.d_max, cfg.n_beta, cfg.k_max);
    vec![
        run_check(
            "diagonal_closed_forms",
            &range(format!("|λ|<={d}")),
            || per_charge(cs, |s| Ok(check_diagonal_closed_forms(d, s))),
        ),
        run_check("m0_eigenvalues", &range(format!("|λ|<={d}")), || {
            per_charge(cs, |s| check_m0_eigenvalues(d, s))
        }),
        run_check(
            "adjoint_action",
            &range(format!("|λ|<={d} |m|<={k} N_beta={n}")),
            || per_charge(cs, |s| check_adjoint(d, s, n, k)),
        ),
        run_check(
            "intertwining",
            &range(format!("|λ|<={d} k<={k} N_beta={n}")),
            || per_charge(cs, |s| check_intertwining(d, s, n, k)),
        ),
        run_check(
            "commutator_cocycle",
            &range(format!("|λ|<={} N_beta={n}", d.min(6))),
            || per_charge(cs, |s| check_commutators(d.min(6), s, n)),
        ),
        run_check(
            "quantum_torus_diagonal",
            &range(format!("|λ|<={d} k=0,1,2 N_beta={n}")),
            || per_charge(cs, |s| Ok(check_quantum_torus_diagonal(d, s, n))),
        ),
        run_check(
            "schur_matrix_elements",
            &range(format!("|λ|<={}", cfg.tau_degree)),
            || per_charge(cs, |s| check_schur_states(cfg.tau_degree, s)),
        ),
        run_check(
            "tau_expansion",
            &format!("|s|<=2 D={} N_beta={}", cfg.tau_degree, n.min(4)),
            || {
                let small: Vec<i64> = (-2..=2).collect();
                per_charge(&small, |s| check_tau(s, cfg.tau_degree, n.min(4)))
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = FockSuite {
            d_max: 5,
            charges: vec![-1, 0, 2],
            n_beta: 3,
            k_max: 2,
            tau_degree: 4,
        };
        for r in run_suite(&cfg) {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn adjoint_detects_wrong_sign() {
        // with the opposite exponent the relation must fail
        let mode = BetaMode::Trunc(3);
        let basis = Arc::new(Basis::new(4));
        let qp = q_pow_l0(1, 4, 0, mode).unwrap();
        let qm = q_pow_l0(-1, 4, 0, mode).unwrap();
        let j = bilinear_on(&spec_j(1, mode), basis, 0);
        let lhs = qp.mul(&j).unwrap().mul(&qm).unwrap();
        let wrong = j.scalar_mul(&ParamScalar::q_pow(1, mode));
        assert!(!lhs.mismatches(&wrong).unwrap().is_empty());
    }
}
