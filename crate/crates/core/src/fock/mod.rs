//! Charge sectors of the free-fermion Fock space, truncated to
//! `{|λ, s⟩ : |λ| ≤ d_max}`, and the bilinears acting on them.

mod bilinear;
mod checks;
mod maya;
mod tau;

pub use bilinear::{
    bilinear, bilinear_on, build_g, build_j, build_l0, build_m0_fermionic, build_w0, cocycle,
    commutator_with_cocycle, exp_w0, q_pow_l0, spec_j, spec_l0, spec_lambda_exp, spec_m0,
    spec_quantum_torus, spec_w0, Basis, BilinearOp, BilinearSpec, Weight,
};
pub use checks::{
    check_adjoint, check_commutators, check_diagonal_closed_forms, check_intertwining,
    check_m0_eigenvalues, check_quantum_torus_diagonal, check_schur_states, check_tau, run_suite,
    FockSuite,
};
pub use maya::{apply_mode, apply_word, bra_word, ket_word, pairing, FockIndex, MayaState, Mode};
pub use tau::{exp_current_costate, exp_current_state, tau_expand, tau_from_z_double, StateVector};

/// `V^{(k)}_m` on the truncated sector with `β` truncated at order `n_beta`.
pub fn quantum_torus(k: i64, m: i64, d_max: u32, s: i64, n_beta: u32) -> BilinearOp {
    bilinear(
        &spec_quantum_torus(k, m, crate::BetaMode::Trunc(n_beta)),
        d_max,
        s,
    )
}
