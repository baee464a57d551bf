//! Exact computation of Hurwitz numbers, their Toda tau-function generating
//! series, free-fermion operators, the dispersionless string equations and
//! the genus expansion of the free energy.
//!
//! All arithmetic is over exact rationals extended by formal parameters
//! (see [`ParamScalar`]).

pub mod combinat;
pub mod dispersionless;
pub mod error;
pub mod fock;
pub mod free_energy;
pub mod hurwitz;
pub mod report;
pub mod schur;
pub mod series;
pub mod verify;

pub use combinat::{ClassData, Partition};
pub use error::{Error, Result};
pub use series::{BetaMode, Monomial, PLaurent, ParamMonomial, ParamScalar, TSeries, Var};
