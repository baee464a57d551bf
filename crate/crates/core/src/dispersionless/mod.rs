//! The classical limit of the string equations: Lax and Orlov–Schulman
//! functions as Laurent series in `p` with coefficients in the times.

mod case_i;
mod solve;
mod verify;

pub use case_i::{lambert_form, solve_case_i, solve_case_i_with, LambertReport};
pub use solve::{
    build_l, build_lbar_inv, build_m, build_mbar, solve, solve_with, StringSolution, TimeValues,
    VFormula,
};
pub use verify::{
    alpha_consistency, ccr_residuals, lax_t1_residual, log_bracket_residual, perturbed,
    power_residual, reduced_zero_mode_residuals, scaling_failures, string_residuals,
    vanishing_degree, verify_string_equations, StringReport,
};
