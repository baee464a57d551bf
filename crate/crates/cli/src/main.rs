//! `hurwitz-toda`: exact Hurwitz numbers, generating functions, fermionic
//! checks, dispersionless string equations and free energies.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
//! 3 resource bound exceeded.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hurwitz_toda::dispersionless::{
    lambert_form, solve_case_i_with, solve_with, verify_string_equations, StringSolution,
    TimeValues, VFormula,
};
use hurwitz_toda::fock::{run_suite, FockSuite};
use hurwitz_toda::free_energy::{
    compare_with_string_solution, pde_residuals, simple_specialization, solve_tower, verify_tower,
};
use hurwitz_toda::hurwitz::{
    cauchy_kernel, exp_cut_and_join, exp_q_t1, hurwitz_bruteforce, hurwitz_burnside, z_double,
    z_simple, BruteForceBounds, RamificationProfile,
};
use hurwitz_toda::report::CheckReport;
use hurwitz_toda::schur::{schur, Times};
use hurwitz_toda::series::{check_degree, series_to_json};
use hurwitz_toda::verify::{verify_all, Fault, VerifyConfig};
use hurwitz_toda::{BetaMode, Error, Partition, TSeries};

#[derive(Parser)]
#[command(
    name = "hurwitz-toda",
    version,
    about = "Hurwitz numbers and the Toda hierarchy, exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone, Copy)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long)]
    json: bool,
}

impl Output {
    fn resolve(self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format.unwrap_or(default)
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InjectedFault {
    KappaSign,
}

#[derive(Subcommand)]
enum Command {
    /// Hurwitz number H_d(μ¹,…,μʳ) from characters.
    Hurwitz {
        #[arg(long)]
        d: u32,
        /// Profiles such as "[2,1];[3]".
        #[arg(long, default_value = "")]
        profiles: String,
        /// Also count factorizations directly (d <= 6).
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Z_simple (default) or Z_double.
    Genfun {
        #[arg(long, conflicts_with = "simple")]
        double: bool,
        #[arg(long)]
        simple: bool,
        #[arg(long = "D")]
        degree: u32,
        #[arg(long = "beta-order", default_value_t = 4)]
        beta_order: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Schur function s_λ[t].
    Schur {
        #[arg(long)]
        lambda: String,
        /// Truncation degree, |λ| by default.
        #[arg(long = "D")]
        degree: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Free-fermion operator identities on truncated Fock sectors.
    FockVerify {
        #[arg(long, default_value_t = 8)]
        dmax: u32,
        /// Charge range "a..b".
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        charges: String,
        /// A single charge, overriding --charges.
        #[arg(long, allow_hyphen_values = true)]
        charge: Option<i64>,
        #[arg(long = "beta-order", default_value_t = 5)]
        beta_order: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Series solution of the dispersionless string equations.
    StringSolve {
        #[arg(long = "D")]
        degree: u32,
        /// Only t̄₁ nonzero.
        #[arg(long)]
        case_i: bool,
        /// All t_k = 0.
        #[arg(long)]
        t_zero: bool,
        /// Report the Lambert form (implies --case-i --t-zero).
        #[arg(long)]
        lambert: bool,
        /// Also compare v_n, v̄_n with derivatives of the genus-zero free
        /// energy (informational; does not affect the exit code).
        #[arg(long)]
        compare_free_energy: bool,
        /// β-order of that comparison, D + 1 by default.
        #[arg(long = "beta-order")]
        beta_order: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Free energies F_0 … F_n.
    FreeEnergy {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long = "D")]
        degree: u32,
        #[arg(long = "beta-order", default_value_t = 5)]
        beta_order: u32,
        /// Also print t̄_k = −δ_{k1}.
        #[arg(long)]
        simple: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Every invariant suite.
    VerifyAll {
        /// Cap on all size bounds.
        #[arg(long)]
        dmax: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<InjectedFault>,
        #[command(flatten)]
        out: Output,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceBound(_) | Error::DegreeTooLarge { .. } => 3,
            Error::Parse(_) | Error::SizeMismatch { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Rendered output plus whether every check in it passed.
struct Rendered {
    text: String,
    ok: bool,
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn series_csv(f: &TSeries) -> String {
    let mut out = String::from("monomial,coefficient\n");
    for (m, c) in f.terms() {
        out.push_str(&format!("{m},\"{c}\"\n"));
    }
    out
}

fn reports_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} {} [{}]", r.check, r.range));
        if !r.detail.is_empty() {
            out.push_str(&format!(" {}", r.detail));
        }
        out.push('\n');
    }
    out
}

fn reports_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from("check,range,status\n");
    for r in reports {
        let status = if r.passed() { "pass" } else { "fail" };
        out.push_str(&format!("{},\"{}\",{status}\n", r.check, r.range));
    }
    out
}

fn render_reports(reports: Vec<CheckReport>, format: Format) -> Rendered {
    let ok = reports.iter().all(CheckReport::passed);
    let text = match format {
        Format::Json => pretty(&json!({ "passed": ok, "checks": reports })),
        Format::Csv => reports_csv(&reports),
        Format::Text => reports_text(&reports),
    };
    Rendered { text, ok }
}

fn render_series(f: &TSeries, report: Vec<CheckReport>, format: Format) -> Rendered {
    let ok = report.iter().all(CheckReport::passed);
    let text = match format {
        Format::Json => pretty(&json!({ "series": series_to_json(f), "report": report })),
        Format::Csv => series_csv(f),
        Format::Text => format!("{f}\n{}", reports_text(&report)),
    };
    Rendered { text, ok }
}

fn check(name: &str, range: String, holds: bool) -> CheckReport {
    let failures = if holds {
        vec![]
    } else {
        vec![name.to_string()]
    };
    CheckReport::new(name, range, &failures)
}

fn cmd_hurwitz(d: u32, profiles: &str, oracle: bool, format: Format) -> Result<Rendered, Failure> {
    let rp = RamificationProfile::parse(d, profiles)?;
    let value = hurwitz_burnside(&rp)?;
    let brute = if oracle {
        Some(hurwitz_bruteforce(&rp, BruteForceBounds::default())?)
    } else {
        None
    };
    let ok = brute.as_ref().is_none_or(|b| *b == value);
    let text = match format {
        Format::Json => pretty(&json!({
            "d": d,
            "profiles": rp.profiles(),
            "value": value.to_string(),
            "bruteforce": brute.as_ref().map(ToString::to_string),
        })),
        Format::Csv => {
            let mut s = String::from("d,profiles,value");
            if brute.is_some() {
                s.push_str(",bruteforce");
            }
            s.push_str(&format!("\n{d},\"{profiles}\",{value}"));
            if let Some(b) = &brute {
                s.push_str(&format!(",{b}"));
            }
            s
        }
        Format::Text => match &brute {
            Some(b) => format!("{value}\t(brute force: {b})"),
            None => value.to_string(),
        },
    };
    Ok(Rendered { text, ok })
}

fn cmd_genfun(double: bool, d: u32, n_beta: u32, format: Format) -> Result<Rendered, Failure> {
    if n_beta == 0 {
        return Err(usage("--beta-order must be positive"));
    }
    let mode = BetaMode::Trunc(n_beta);
    let range = format!("D={d} N_beta={n_beta}");
    let (z, report) = if double {
        let z = z_double(d, n_beta)?;
        let kernel = cauchy_kernel(d, mode)?;
        let beta0 = z.map_coeffs(|c| c.beta_coeff(0));
        let reps = vec![
            check("beta0_is_cauchy_kernel", range.clone(), beta0 == kernel),
            check(
                "exponential_representation",
                range,
                exp_cut_and_join(&kernel)? == z,
            ),
        ];
        (z, reps)
    } else {
        let z = z_simple(d, n_beta)?;
        let ok = exp_cut_and_join(&exp_q_t1(d, mode)?)? == z;
        (z, vec![check("exponential_representation", range, ok)])
    };
    Ok(render_series(&z, report, format))
}

fn cmd_schur(lambda: &str, d: Option<u32>, format: Format) -> Result<Rendered, Failure> {
    let l: Partition = lambda.parse()?;
    let s = schur(&l, Times::T, d.unwrap_or(l.size()), BetaMode::Poly)?;
    Ok(render_series(&s, vec![], format))
}

fn parse_range(text: &str) -> Result<Vec<i64>, Failure> {
    let bad = || usage(format!("charge range must look like a..b, got {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn cmd_fock_verify(
    dmax: u32,
    charges: Vec<i64>,
    n_beta: u32,
    format: Format,
) -> Result<Rendered, Failure> {
    if dmax > 12 {
        return Err(Error::ResourceBound(format!("dmax {dmax} > 12")).into());
    }
    if n_beta == 0 {
        return Err(usage("--beta-order must be positive"));
    }
    let suite = FockSuite {
        d_max: dmax,
        charges,
        n_beta,
        k_max: 3.min(dmax as i64),
        tau_degree: 5.min(dmax),
    };
    Ok(render_reports(run_suite(&suite), format))
}

fn solution_json(sol: &StringSolution) -> Value {
    let dump = |v: &[TSeries]| v.iter().map(series_to_json).collect::<Vec<_>>();
    json!({
        "D": sol.d,
        "ubar0": series_to_json(&sol.ubar0),
        "u": dump(&sol.u),
        "ubar": dump(&sol.ubar),
        "v": dump(&sol.v),
        "vbar": dump(&sol.vbar),
        "alpha": dump(&sol.alpha),
        "alphabar": dump(&sol.alphabar),
    })
}

struct StringArgs {
    d: u32,
    case_i: bool,
    t_zero: bool,
    lambert: bool,
    compare: Option<u32>,
}

fn cmd_string_solve(args: StringArgs, format: Format) -> Result<Rendered, Failure> {
    let StringArgs {
        d,
        case_i,
        t_zero,
        lambert,
        compare,
    } = args;
    if d == 0 {
        return Err(usage("--D must be positive"));
    }
    check_degree(d)?;
    if lambert {
        let sol = solve_case_i_with(TimeValues::case_i(d).without_t())?;
        let rep = lambert_form(&sol)?;
        let ok = rep.all_pass();
        let text = match format {
            Format::Json => pretty(&rep),
            _ if ok => format!("Lambert identity x = y e^y: exact through p^-{d}"),
            _ => format!("Lambert identity x = y e^y: FAILED {rep:?}"),
        };
        return Ok(Rendered { text, ok });
    }
    let mut tv = if case_i {
        TimeValues::case_i(d)
    } else {
        TimeValues::generic(d)
    };
    if t_zero {
        tv = tv.without_t();
    }
    let sol = if case_i {
        solve_case_i_with(tv)?
    } else {
        solve_with(tv, VFormula::Full)?
    };
    let rep = verify_string_equations(&sol, true)?;
    let ok = rep.all_pass();
    let derivs = match compare {
        Some(0) => return Err(usage("--beta-order must be positive")),
        Some(nb) => Some(compare_with_string_solution(&sol, nb)?),
        None => None,
    };
    let text = match format {
        Format::Json => {
            let mut v = json!({ "solution": solution_json(&sol), "report": rep });
            if let Some(dr) = &derivs {
                v["free_energy_derivatives"] = json!(dr);
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut s = String::from("name,n,series\n");
            s.push_str(&format!("ubar0,0,\"{}\"\n", sol.ubar0));
            for (name, v) in [
                ("u", &sol.u),
                ("ubar", &sol.ubar),
                ("v", &sol.v),
                ("vbar", &sol.vbar),
            ] {
                for (i, x) in v.iter().enumerate() {
                    s.push_str(&format!("{name},{},\"{x}\"\n", i + 1));
                }
            }
            s
        }
        Format::Text => {
            let mut s = format!("ubar0 = {}\n", sol.ubar0);
            for (name, v) in [
                ("u", &sol.u),
                ("ubar", &sol.ubar),
                ("v", &sol.v),
                ("vbar", &sol.vbar),
            ] {
                for (i, x) in v.iter().enumerate() {
                    s.push_str(&format!("{name}_{} = {x}\n", i + 1));
                }
            }
            s.push_str(&format!(
                "string equations: {}\n",
                if ok { "pass" } else { "FAIL" }
            ));
            s.push_str(&format!("{rep:?}"));
            if let Some(dr) = &derivs {
                s.push_str(&format!(
                    "\nv_n = dF_0/dt_n, vbar_n = -dF_0/dtbar_n (N_beta={}): {}",
                    dr.n_beta,
                    if dr.all_match() { "match" } else { "differ" }
                ));
            }
            s
        }
    };
    Ok(Rendered { text, ok })
}

fn cmd_free_energy(
    n: u32,
    d: u32,
    n_beta: u32,
    simple: bool,
    format: Format,
) -> Result<Rendered, Failure> {
    if n_beta == 0 {
        return Err(usage("--beta-order must be positive"));
    }
    let tower = solve_tower(n, d, n_beta)?;
    let rep = verify_tower(&tower)?;
    let residuals: Vec<String> = pde_residuals(&tower)?
        .iter()
        .map(ToString::to_string)
        .collect();
    let simple = if simple {
        Some(simple_specialization(&tower)?)
    } else {
        None
    };
    let ok = rep.all_pass();
    let text = match format {
        Format::Json => {
            let mut v = json!({
                "n_max": n,
                "D": d,
                "N_beta": n_beta,
                "F": tower.f.iter().map(series_to_json).collect::<Vec<_>>(),
                "pde_residual": residuals,
                "report": rep,
            });
            if let Some(sp) = &simple {
                v["F_simple"] = sp.iter().map(series_to_json).collect();
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut s = String::from("n,series,pde_residual\n");
            for (i, f) in tower.f.iter().enumerate() {
                s.push_str(&format!("{i},\"{f}\",\"{}\"\n", residuals[i]));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (i, f) in tower.f.iter().enumerate() {
                s.push_str(&format!("F_{i} = {f}\n  PDE residual: {}\n", residuals[i]));
            }
            if let Some(sp) = &simple {
                for (i, f) in sp.iter().enumerate() {
                    s.push_str(&format!("F_{i}|simple = {f}\n"));
                }
            }
            s.push_str(&format!("oracle: {}", if ok { "pass" } else { "FAIL" }));
            s
        }
    };
    Ok(Rendered { text, ok })
}

fn cmd_verify_all(
    dmax: Option<u32>,
    seed: u64,
    fault: Option<InjectedFault>,
    format: Format,
) -> Result<Rendered, Failure> {
    let mut cfg = match dmax {
        Some(d) => VerifyConfig::with_dmax(d),
        None => VerifyConfig::default(),
    };
    cfg.seed = seed;
    cfg.fault = fault.map(|f| match f {
        InjectedFault::KappaSign => Fault::KappaSign,
    });
    Ok(render_reports(verify_all(&cfg)?, format))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("HURWITZ_TODA_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        usage(format!(
            "HURWITZ_TODA_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Rendered, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Hurwitz {
            d,
            profiles,
            oracle,
            out,
        } => cmd_hurwitz(d, &profiles, oracle, out.resolve(Format::Text)),
        Command::Genfun {
            double,
            simple: _,
            degree,
            beta_order,
            out,
        } => cmd_genfun(double, degree, beta_order, out.resolve(Format::Text)),
        Command::Schur {
            lambda,
            degree,
            out,
        } => cmd_schur(&lambda, degree, out.resolve(Format::Text)),
        Command::FockVerify {
            dmax,
            charges,
            charge,
            beta_order,
            out,
        } => {
            let charges = match charge {
                Some(s) => vec![s],
                None => parse_range(&charges)?,
            };
            cmd_fock_verify(dmax, charges, beta_order, out.resolve(Format::Json))
        }
        Command::StringSolve {
            degree,
            case_i,
            t_zero,
            lambert,
            compare_free_energy,
            beta_order,
            out,
        } => cmd_string_solve(
            StringArgs {
                d: degree,
                case_i,
                t_zero,
                lambert,
                compare: compare_free_energy.then(|| beta_order.unwrap_or(degree + 1)),
            },
            out.resolve(Format::Text),
        ),
        Command::FreeEnergy {
            n,
            degree,
            beta_order,
            simple,
            out,
        } => cmd_free_energy(n, degree, beta_order, simple, out.resolve(Format::Text)),
        Command::VerifyAll {
            dmax,
            seed,
            inject_fault,
            out,
        } => cmd_verify_all(dmax, seed, inject_fault, out.resolve(Format::Json)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => {
            println!("{}", r.text.trim_end());
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
