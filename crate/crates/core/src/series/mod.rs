//! Coefficient ring, truncated time series and Laurent series in `p`.

mod json;
mod laurent;
mod scalar;
mod tseries;

pub use json::{
    scalar_from_dump, scalar_to_dump, series_from_json, series_to_json, CoeffDump, ParamsDump,
    SeriesDump, TermDump,
};
pub use laurent::{poisson, LogLaurent, PLaurent, Poisson};
pub use scalar::{BetaMode, ParamMonomial, ParamScalar};
pub use tseries::{check_degree, Monomial, TSeries, Var, MAX_DEGREE};

#[allow(unused_imports)]
pub(crate) use scalar::{rat, ratio};
