//! Every invariant suite of the crate behind one entry point.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinat::{
    character, class_data, dim_irrep, factorial, kappa, partitions_of, partitions_up_to, transpose,
    Partition,
};
use crate::dispersionless::{
    lambert_form, solve, solve_case_i, solve_case_i_with, solve_with, verify_string_equations,
    TimeValues, VFormula,
};
use crate::error::{Error, Result};
use crate::fock::{run_suite, FockSuite};
use crate::free_energy::{simple_specialization, solve_tower, verify_tower};
use crate::hurwitz::{
    cauchy_kernel, cut_and_join, exp_cut_and_join, exp_q_t1, hurwitz_bruteforce, hurwitz_burnside,
    read_beta_q, z_double, z_simple, z_simple_coefficient, BruteForceBounds, RamificationProfile,
};
use crate::report::{run_check, CheckReport};
use crate::schur::{schur, schur_frobenius, schur_principal, Times};
use crate::series::{
    ratio, BetaMode, Monomial, PLaurent, ParamMonomial, ParamScalar, TSeries, Var, MAX_DEGREE,
};

/// Deliberate defects, used to confirm that the suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// `κ_{(2)}` reported with the wrong sign.
    KappaSign,
}

/// Bounds of [`verify_all`].
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest `|λ|` for the partition and Schur identities.
    pub dmax: u32,
    /// Largest `d` compared against brute force, and largest `r`.
    pub oracle_d: u32,
    pub oracle_r: usize,
    /// Degree and `β` order of the generating-function identities.
    pub genfun_d: u32,
    pub n_beta: u32,
    pub fock: FockSuite,
    /// Weighted degree of the string-equation solution.
    pub string_d: u32,
    /// `(n_max, D, N_β)` of the free-energy tower.
    pub free_energy: (u32, u32, u32),
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            dmax: 8,
            oracle_d: 5,
            oracle_r: 3,
            genfun_d: 6,
            n_beta: 6,
            fock: FockSuite::default(),
            string_d: 5,
            free_energy: (2, 6, 5),
            seed: 1,
            fault: None,
        }
    }
}

impl VerifyConfig {
    /// Default bounds, each capped at `dmax`.
    pub fn with_dmax(dmax: u32) -> Self {
        let base = VerifyConfig::default();
        let (n, d, nb) = base.free_energy;
        VerifyConfig {
            dmax,
            oracle_d: base.oracle_d.min(dmax),
            genfun_d: base.genfun_d.min(dmax),
            fock: FockSuite {
                d_max: dmax,
                tau_degree: base.fock.tau_degree.min(dmax),
                k_max: base.fock.k_max.min(dmax as i64),
                ..base.fock.clone()
            },
            string_d: base.string_d.min(dmax).max(1),
            free_energy: (n, d.min(dmax), nb),
            ..base
        }
    }

    fn validate(&self) -> Result<()> {
        let bf = BruteForceBounds::default();
        if self.oracle_d > bf.max_d || self.oracle_r > bf.max_r {
            return Err(Error::ResourceBound(format!(
                "brute force limited to d <= {}, r <= {}",
                bf.max_d, bf.max_r
            )));
        }
        if self.dmax > 12 {
            return Err(Error::ResourceBound(format!("dmax {} > 12", self.dmax)));
        }
        let degrees = [
            self.dmax,
            self.genfun_d,
            self.fock.tau_degree,
            self.string_d,
            self.free_energy.1,
        ];
        if let Some(&d) = degrees.iter().find(|&&d| d > MAX_DEGREE) {
            return Err(Error::DegreeTooLarge {
                requested: d,
                limit: MAX_DEGREE,
            });
        }
        if self.n_beta == 0 || self.free_energy.2 == 0 || self.string_d == 0 {
            return Err(Error::ResourceBound("orders must be positive".into()));
        }
        Ok(())
    }
}

fn kappa_with(fault: Option<Fault>, l: &Partition) -> i64 {
    match fault {
        Some(Fault::KappaSign) if l.parts() == [2] => -kappa(l),
        _ => kappa(l),
    }
}

pub fn combinat_checks(dmax: u32, fault: Option<Fault>) -> Vec<CheckReport> {
    let all = partitions_up_to(dmax);
    let range = format!("|λ|<={dmax}");
    let k = |l: &Partition| kappa_with(fault, l);
    vec![
        run_check("dim_transpose", &range, || {
            Ok(all
                .iter()
                .filter(|l| dim_irrep(l) != dim_irrep(&transpose(l)))
                .map(|l| l.to_string())
                .collect())
        }),
        run_check("dim_square_sum", &format!("d<={dmax}"), || {
            Ok((0..=dmax)
                .filter(|&d| {
                    partitions_of(d)
                        .iter()
                        .map(|l| dim_irrep(l).pow(2))
                        .sum::<u64>()
                        != factorial(d)
                })
                .map(|d| format!("d={d}"))
                .collect())
        }),
        run_check("kappa_antisymmetry", &range, || {
            Ok(all
                .iter()
                .filter(|l| k(&transpose(l)) != -k(l))
                .map(|l| l.to_string())
                .collect())
        }),
        run_check("kappa_content_sum", &range, || {
            Ok(all
                .iter()
                .filter(|l| {
                    let content: i64 = l.cells().map(|(i, j)| j as i64 - i as i64).sum();
                    k(l) != 2 * content
                })
                .map(|l| l.to_string())
                .collect())
        }),
        run_check(
            "character_orthogonality",
            &format!("d<={}", dmax.min(6)),
            || {
                let mut bad = Vec::new();
                for d in 0..=dmax.min(6) {
                    let ps = partitions_of(d);
                    for a in &ps {
                        for b in &ps {
                            let mut sum = BigRational::from_integer(0.into());
                            for mu in &ps {
                                let z = class_data(mu).z;
                                sum += ratio(character(a, mu)? * character(b, mu)?, z as i64);
                            }
                            let want = ratio((a == b) as i64, 1);
                            if sum != want {
                                bad.push(format!("<{a},{b}>"));
                            }
                        }
                    }
                }
                Ok(bad)
            },
        ),
        run_check("class_sizes", &format!("d<={dmax}"), || {
            Ok((0..=dmax)
                .filter(|&d| {
                    partitions_of(d)
                        .iter()
                        .map(|m| class_data(m).class_size)
                        .sum::<u64>()
                        != factorial(d)
                })
                .map(|d| format!("d={d}"))
                .collect())
        }),
    ]
}

fn random_series(rng: &mut ChaCha8Rng, d: u32, mode: BetaMode) -> TSeries {
    let vars = [Var::T(1), Var::T(2), Var::TBar(1), Var::TBar(2), Var::T(3)];
    let mut f = TSeries::zero(d, mode);
    for _ in 0..rng.random_range(1..6) {
        let mut m = Monomial::ONE;
        for _ in 0..rng.random_range(1..4) {
            let v = vars[rng.random_range(0..vars.len())];
            m = m.mul(Monomial::var(v));
        }
        if m.degree() > d {
            continue;
        }
        let pm = ParamMonomial {
            beta: rng.random_range(0..3),
            q: rng.random_range(-1..2),
            ..ParamMonomial::ONE
        };
        let c = ParamScalar::term(
            ratio(rng.random_range(-5..6), rng.random_range(1..4)),
            pm,
            mode,
        );
        f += &TSeries::monomial(m, c, d);
    }
    f
}

/// Ring axioms, `exp∘log`, Leibniz and residues of `p`-derivatives on
/// seeded random elements.
pub fn series_checks(seed: u64, samples: usize) -> Vec<CheckReport> {
    let d = 5;
    let mode = BetaMode::Trunc(4);
    let range = format!("D={d} N_beta=4 samples={samples} seed={seed}");
    let draw = |salt: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
        (0..samples)
            .map(|_| {
                (
                    random_series(&mut rng, d, mode),
                    random_series(&mut rng, d, mode),
                    random_series(&mut rng, d, mode),
                )
            })
            .collect::<Vec<_>>()
    };
    vec![
        run_check("ring_axioms", &range, || {
            let mut bad = Vec::new();
            for (i, (a, b, c)) in draw(0).iter().enumerate() {
                if &(a * b) * c != a * &(b * c) {
                    bad.push(format!("associativity #{i}"));
                }
                if a * &(b + c) != &(a * b) + &(a * c) {
                    bad.push(format!("distributivity #{i}"));
                }
                if a * b != b * a {
                    bad.push(format!("commutativity #{i}"));
                }
            }
            Ok(bad)
        }),
        run_check("exp_log", &range, || {
            let mut bad = Vec::new();
            for (i, (a, _, _)) in draw(1).iter().enumerate() {
                let a = a.filter(|m, _| m.degree() > 0);
                let (c, g) = (&TSeries::one(d, mode) + &a).log_unit()?;
                if !c.is_one() || g.exp_series()? != &TSeries::one(d, mode) + &a {
                    bad.push(format!("exp(log(1+f)) #{i}"));
                }
                if a.exp_series()?.log_unit()?.1 != a {
                    bad.push(format!("log(exp f) #{i}"));
                }
            }
            Ok(bad)
        }),
        run_check("leibniz", &range, || {
            let mut bad = Vec::new();
            for (i, (a, b, _)) in draw(2).iter().enumerate() {
                for v in [Var::T(1), Var::TBar(2)] {
                    let lhs = (a * b).derive(v);
                    let low = d - v.weight();
                    let rhs =
                        &(&a.derive(v) * &b.truncate(low)?) + &(&a.truncate(low)? * &b.derive(v));
                    if lhs != rhs {
                        bad.push(format!("{v} #{i}"));
                    }
                }
            }
            Ok(bad)
        }),
        run_check("residue_of_derivative", &range, || {
            let mut bad = Vec::new();
            for (i, (a, b, c)) in draw(3).iter().enumerate() {
                let f = &(&PLaurent::from_series(a.clone(), -2)
                    + &PLaurent::from_series(b.clone(), -1))
                    + &PLaurent::from_series(c.clone(), 3);
                if !f.derive_p().residue()?.is_zero() {
                    bad.push(format!("#{i}"));
                }
            }
            Ok(bad)
        }),
    ]
}

pub fn schur_checks(dmax: u32) -> Vec<CheckReport> {
    let poly = BetaMode::Poly;
    let six = dmax.min(6);
    vec![
        run_check("schur_homogeneity", &format!("|λ|<={six}"), || {
            let c = ParamScalar::c_pow(1, poly);
            let mut bad = Vec::new();
            for l in partitions_up_to(six) {
                let s = schur(&l, Times::T, six, poly)?;
                // t_k ↦ c^k t_k, monomial by monomial
                let mut scaled = TSeries::zero(six, poly);
                for (m, x) in s.terms() {
                    scaled += &TSeries::monomial(*m, x * &c.pow(m.degree()), six);
                }
                if scaled != s.scalar_mul(&c.pow(l.size())) {
                    bad.push(l.to_string());
                }
            }
            Ok(bad)
        }),
        run_check("cauchy_identity", &format!("D<={dmax}"), || {
            let mut bad = Vec::new();
            for d in 1..=dmax {
                let mut sum = TSeries::zero(d, poly);
                for l in partitions_up_to(d / 2) {
                    let q = ParamScalar::q_pow(l.size() as i32, poly);
                    sum += &(&schur(&l, Times::T, d, poly)? * &schur(&l, Times::NegTBar, d, poly)?)
                        .scalar_mul(&q);
                }
                if sum != cauchy_kernel(d, poly)? {
                    bad.push(format!("D={d}"));
                }
            }
            Ok(bad)
        }),
        run_check("schur_transpose", &format!("|λ|<={six}"), || {
            let mut bad = Vec::new();
            for l in partitions_up_to(six) {
                let sign = if l.size() % 2 == 0 { 1 } else { -1 };
                let lhs = schur(&l, Times::T, six, poly)?;
                let rhs = schur(&transpose(&l), Times::NegT, six, poly)?.scale_int(sign);
                if lhs != rhs {
                    bad.push(l.to_string());
                }
            }
            Ok(bad)
        }),
        run_check("frobenius", &format!("|λ|<={six}"), || {
            let mut bad = Vec::new();
            for l in partitions_up_to(six) {
                if schur_frobenius(&l, Times::T, six, poly)? != schur(&l, Times::T, six, poly)? {
                    bad.push(l.to_string());
                }
            }
            Ok(bad)
        }),
        run_check("schur_principal", &format!("|λ|<={dmax}"), || {
            let mut bad = Vec::new();
            for l in partitions_up_to(dmax) {
                let s = schur(&l, Times::T, dmax, poly)?;
                let mut values = BTreeMap::new();
                values.insert(Var::T(1), ParamScalar::one(poly));
                for k in 2..=dmax {
                    values.insert(Var::T(k), ParamScalar::zero(poly));
                }
                let at = s.evaluate(&values, 0)?.constant_term();
                if at != ParamScalar::from_rational(schur_principal(&l), poly) {
                    bad.push(l.to_string());
                }
            }
            Ok(bad)
        }),
    ]
}

fn profile_tuples(d: u32, r: usize) -> Vec<Vec<Partition>> {
    let ps = partitions_of(d);
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t| {
                ps.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    out
}

pub fn hurwitz_checks(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let (od, or) = (cfg.oracle_d, cfg.oracle_r);
    let (gd, nb) = (cfg.genfun_d, cfg.n_beta);
    let fault = cfg.fault;
    vec![
        run_check(
            "burnside_vs_bruteforce",
            &format!("d<={od} r<={or}"),
            || {
                let mut jobs = Vec::new();
                for d in 1..=od {
                    for r in 0..=or {
                        jobs.extend(profile_tuples(d, r).into_iter().map(|t| (d, t)));
                    }
                }
                let results: Vec<Result<Option<String>>> = jobs
                    .par_iter()
                    .map(|(d, t)| {
                        let rp = RamificationProfile::new(*d, t.clone())?;
                        let a = hurwitz_burnside(&rp)?;
                        let b = hurwitz_bruteforce(&rp, BruteForceBounds::default())?;
                        let label = t
                            .iter()
                            .map(|p| p.to_string())
                            .collect::<Vec<_>>()
                            .join(";");
                        Ok((a != b).then(|| format!("d={d} {label}: {a} vs {b}")))
                    })
                    .collect();
                let mut bad = Vec::new();
                for r in results {
                    bad.extend(r?);
                }
                Ok(bad)
            },
        ),
        run_check(
            "cut_and_join_eigen",
            &format!("|λ|<={} D={}", cfg.dmax, cfg.dmax),
            || {
                let d = cfg.dmax;
                let results: Vec<Result<Option<String>>> = partitions_up_to(d)
                    .par_iter()
                    .map(|l| {
                        let s = schur(l, Times::T, d, BetaMode::Poly)?;
                        let want = s.scale(&ratio(kappa_with(fault, l), 2));
                        Ok((cut_and_join(&s) != want).then(|| l.to_string()))
                    })
                    .collect();
                let mut bad = Vec::new();
                for r in results {
                    bad.extend(r?);
                }
                Ok(bad)
            },
        ),
        run_check(
            "exponential_representations",
            &format!("D={gd} N_beta={nb}"),
            || {
                let mode = BetaMode::Trunc(nb);
                let mut bad = Vec::new();
                if exp_cut_and_join(&exp_q_t1(gd, mode)?)? != z_simple(gd, nb)? {
                    bad.push("Z_simple".into());
                }
                if exp_cut_and_join(&cauchy_kernel(gd, mode)?)? != z_double(gd, nb)? {
                    bad.push("Z_double".into());
                }
                Ok(bad)
            },
        ),
        run_check("z_simple_coefficients", "d<=4 r<=3", || {
            let z = z_simple(4, 4)?;
            let mut bad = Vec::new();
            for n in 1..=4 {
                for mu in partitions_of(n) {
                    for r in 0..=3 {
                        let (m, want) = z_simple_coefficient(n, r, &mu)?;
                        if read_beta_q(&z, &m, r, n as i32) != want {
                            bad.push(format!("{mu} r={r}"));
                        }
                    }
                }
            }
            Ok(bad)
        }),
        run_check(
            "z_double_swap_symmetry",
            &format!("D={gd} N_beta={nb}"),
            || {
                let mode = BetaMode::Trunc(nb);
                let z = z_double(gd, nb)?;
                let flipped = z.swap_t_tbar().map_coeffs(|c| {
                    c.substitute_monomials(|m| {
                        let sign = if m.beta % 2 == 0 { 1 } else { -1 };
                        ParamScalar::monomial(*m, mode).scale_int(sign)
                    })
                });
                Ok(if flipped == z {
                    vec![]
                } else {
                    vec!["t<->tbar, beta->-beta".into()]
                })
            },
        ),
    ]
}

pub fn dispersionless_checks(d: u32) -> Vec<CheckReport> {
    vec![
        run_check("string_equations", &format!("D={d}"), || {
            let rep = verify_string_equations(&solve(d)?, true)?;
            Ok(if rep.all_pass() {
                vec![]
            } else {
                vec![format!("{rep:?}")]
            })
        }),
        run_check("case_i_matches_general", &format!("D<={d}"), || {
            let mut bad = Vec::new();
            for k in 1..=d {
                if solve_case_i(k)? != solve_with(TimeValues::case_i(k), VFormula::Full)? {
                    bad.push(format!("D={k}"));
                }
            }
            Ok(bad)
        }),
        run_check("lambert", &format!("D={d} t=0"), || {
            let sol = solve_case_i_with(TimeValues::case_i(d).without_t())?;
            let rep = lambert_form(&sol)?;
            Ok(if rep.all_pass() {
                vec![]
            } else {
                vec![format!("{rep:?}")]
            })
        }),
    ]
}

pub fn free_energy_checks(n_max: u32, d: u32, n_beta: u32) -> Vec<CheckReport> {
    let range = format!("n<={n_max} D={d} N_beta={n_beta}");
    vec![
        run_check("free_energy_tower", &range, || {
            let rep = verify_tower(&solve_tower(n_max, d, n_beta)?)?;
            Ok(if rep.all_pass() {
                vec![]
            } else {
                vec![format!("{rep:?}")]
            })
        }),
        run_check("simple_specialization", &range, || {
            let tower = solve_tower(n_max, d, n_beta)?;
            let simple = simple_specialization(&tower)?;
            let want = TSeries::var(Var::T(1), d / 2, BetaMode::Trunc(n_beta))
                .scalar_mul(&ParamScalar::q_pow(1, BetaMode::Trunc(n_beta)));
            let at_zero = simple[0].map_coeffs(|c| c.beta_coeff(0));
            let mut bad = Vec::new();
            if d >= 2 && at_zero != want {
                bad.push(format!("F_0 at beta=0: {at_zero}"));
            }
            Ok(bad)
        }),
    ]
}

/// Runs every suite; errors only for bounds that cannot be honoured.
pub fn verify_all(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let mut out = combinat_checks(cfg.dmax, cfg.fault);
    out.extend(series_checks(cfg.seed, 8));
    out.extend(schur_checks(cfg.dmax));
    out.extend(hurwitz_checks(cfg));
    out.extend(run_suite(&cfg.fock));
    out.extend(dispersionless_checks(cfg.string_d));
    let (n, d, nb) = cfg.free_energy;
    out.extend(free_energy_checks(n, d, nb));
    Ok(out)
}
