//! JSON dump format for [`TSeries`].
//!
//! ```json
//! {"D": 4, "params": {"beta_mode": "trunc", "N_beta": 3},
//!  "terms": [{"t": [[1, 2]], "tbar": [], "coeff": [
//!     {"e_beta": 0, "e_s": 0, "e_Q": 2, "e_B": 0, "value": "1/2"}]}]}
//! ```
//!
//! Terms follow the graded monomial order of [`Monomial`]; coefficient
//! entries are sorted by `(e_beta, e_s, e_Q, e_B, e_c, e_hbar)`. The
//! `e_c` and `e_hbar` keys are omitted when zero.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::scalar::{BetaMode, ParamMonomial, ParamScalar};
use super::tseries::{Monomial, TSeries, MAX_DEGREE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDump {
    #[serde(rename = "D")]
    pub d: u32,
    pub params: ParamsDump,
    pub terms: Vec<TermDump>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDump {
    pub beta_mode: String,
    #[serde(rename = "N_beta", default, skip_serializing_if = "Option::is_none")]
    pub n_beta: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDump {
    pub t: Vec<[u32; 2]>,
    pub tbar: Vec<[u32; 2]>,
    pub coeff: Vec<CoeffDump>,
}

fn is_zero(x: &i32) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffDump {
    pub e_beta: u32,
    pub e_s: u32,
    #[serde(rename = "e_Q")]
    pub e_q: i32,
    #[serde(rename = "e_B")]
    pub e_b: i32,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub e_c: i32,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub e_hbar: i32,
    pub value: String,
}

fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.contains('/') {
        BigRational::from_str(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
    } else {
        BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
    }
}

pub fn scalar_to_dump(c: &ParamScalar) -> Vec<CoeffDump> {
    c.terms()
        .map(|(m, r)| CoeffDump {
            e_beta: m.beta,
            e_s: m.s,
            e_q: m.q,
            e_b: m.b,
            e_c: m.c,
            e_hbar: m.hbar,
            value: format_rational(r),
        })
        .collect()
}

pub fn scalar_from_dump(entries: &[CoeffDump], mode: BetaMode) -> Result<ParamScalar> {
    let mut out = ParamScalar::zero(mode);
    for e in entries {
        let m = ParamMonomial {
            beta: e.e_beta,
            s: e.e_s,
            q: e.e_q,
            b: e.e_b,
            c: e.e_c,
            hbar: e.e_hbar,
        };
        out.add_term(m, parse_rational(&e.value)?);
    }
    Ok(out)
}

impl SeriesDump {
    pub fn from_series(f: &TSeries) -> Self {
        let params = match f.mode() {
            BetaMode::Poly => ParamsDump {
                beta_mode: "poly".into(),
                n_beta: None,
            },
            BetaMode::Trunc(n) => ParamsDump {
                beta_mode: "trunc".into(),
                n_beta: Some(n),
            },
        };
        let terms = f
            .terms()
            .map(|(m, c)| TermDump {
                t: m.t_exponents().into_iter().map(|(k, e)| [k, e]).collect(),
                tbar: m
                    .tbar_exponents()
                    .into_iter()
                    .map(|(k, e)| [k, e])
                    .collect(),
                coeff: scalar_to_dump(c),
            })
            .collect();
        SeriesDump {
            d: f.degree_bound(),
            params,
            terms,
        }
    }

    pub fn to_series(&self) -> Result<TSeries> {
        if self.d > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                requested: self.d,
                limit: MAX_DEGREE,
            });
        }
        let mode = match (self.params.beta_mode.as_str(), self.params.n_beta) {
            ("poly", _) => BetaMode::Poly,
            ("trunc", Some(n)) => BetaMode::Trunc(n),
            (m, _) => return Err(Error::Parse(format!("unknown beta mode {m:?}"))),
        };
        let mut out = TSeries::zero(self.d, mode);
        for term in &self.terms {
            let pairs = |v: &[[u32; 2]]| v.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>();
            let m = Monomial::from_pairs(&pairs(&term.t), &pairs(&term.tbar))?;
            if m.degree() > self.d {
                return Err(Error::DegreeTooLarge {
                    requested: m.degree(),
                    limit: self.d,
                });
            }
            out += &TSeries::monomial(m, scalar_from_dump(&term.coeff, mode)?, self.d);
        }
        Ok(out)
    }
}

/// Serializes a series to a JSON value in the dump format.
pub fn series_to_json(f: &TSeries) -> serde_json::Value {
    serde_json::to_value(SeriesDump::from_series(f)).expect("dump serializes")
}

/// Parses a series from a JSON value in the dump format.
pub fn series_from_json(v: &serde_json::Value) -> Result<TSeries> {
    let dump: SeriesDump =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    dump.to_series()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Var;

    #[test]
    fn round_trip() {
        let m = BetaMode::Trunc(3);
        let d = 4;
        let t1 = TSeries::var(Var::T(1), d, m);
        let tb2 = TSeries::var(Var::TBar(2), d, m);
        let c = &ParamScalar::beta(m) + &ParamScalar::q_pow(-2, m).scale_int(3);
        let f = &(&t1 * &tb2).scalar_mul(&c) + &t1.pow(2).scalar_mul(&ParamScalar::hbar_pow(1, m));
        let json = series_to_json(&f);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"N_beta\":3"));
        assert!(text.contains("\"e_hbar\":1"));
        let back = series_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_input() {
        let v = serde_json::json!({"D": 2, "params": {"beta_mode": "poly"},
            "terms": [{"t": [[3, 1]], "tbar": [], "coeff": []}]});
        assert!(series_from_json(&v).is_err());
        let v = serde_json::json!({"D": 2, "params": {"beta_mode": "weird"}, "terms": []});
        assert!(series_from_json(&v).is_err());
    }
}
