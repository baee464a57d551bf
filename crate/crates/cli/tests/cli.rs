use std::process::{Command, Output};

use hurwitz_toda::hurwitz::{cauchy_kernel, z_double};
use hurwitz_toda::series::series_from_json;
use hurwitz_toda::BetaMode;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz-toda"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn hurwitz_values() {
    for (args, want) in [
        (vec!["hurwitz", "--d", "2", "--profiles", "[2];[2]"], "1/2"),
        (vec!["hurwitz", "--d", "1"], "1"),
        (vec!["hurwitz", "--d", "3", "--profiles", "[3];[3]"], "1/3"),
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), want);
    }
    let o = run(&[
        "hurwitz",
        "--d",
        "4",
        "--profiles",
        "[2,1,1];[2,1,1];[4]",
        "--oracle",
        "--json",
    ]);
    let v = json(&o);
    assert_eq!(v["value"], v["bruteforce"]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["hurwitz", "--d", "3", "--profiles", "[3;[3]"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["hurwitz", "--d", "3", "--profiles", "[2]"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&["fock-verify", "--charges", "3..-3"]).status.code(),
        Some(2)
    );
}

#[test]
fn resource_bounds_exit_3() {
    assert_eq!(run(&["verify-all", "--dmax", "40"]).status.code(), Some(3));
    assert_eq!(
        run(&["hurwitz", "--d", "8", "--profiles", "[8];[8]", "--oracle"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["genfun", "--D", "99"]).status.code(), Some(3));
}

#[test]
fn lambert_report() {
    let o = run(&["string-solve", "--D", "3", "--t-zero", "--lambert"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exact through p^-3"));
}

#[test]
fn free_energy_residuals_are_zero() {
    let o = run(&[
        "free-energy",
        "--n",
        "1",
        "--D",
        "4",
        "--beta-order",
        "3",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["F"].as_array().unwrap().len(), 2);
    assert_eq!(v["pde_residual"], serde_json::json!(["0", "0"]));
}

#[test]
fn genfun_double_round_trips() {
    let o = run(&[
        "genfun",
        "--double",
        "--D",
        "3",
        "--beta-order",
        "2",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let z = series_from_json(&v["series"]).unwrap();
    assert_eq!(z, z_double(3, 2).unwrap());
    let beta0 = z.map_coeffs(|c| c.beta_coeff(0));
    assert_eq!(beta0, cauchy_kernel(3, BetaMode::Trunc(2)).unwrap());
}

#[test]
fn string_solve_json() {
    let o = run(&["string-solve", "--D", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["solution"]["u"].as_array().unwrap().len(), 3);
    series_from_json(&v["solution"]["ubar0"]).unwrap();
    assert_eq!(v["report"]["string_eq"], serde_json::json!([3, 3]));
}

#[test]
fn verify_all_minimal_and_fault() {
    let o = run(&["verify-all", "--dmax", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(json(&o)["passed"], Value::Bool(true));

    let o = run(&["verify-all", "--dmax", "4", "--inject-fault", "kappa-sign"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"kappa_antisymmetry"), "{failed:?}");
    assert!(!failed.contains(&"burnside_vs_bruteforce"));
}

#[test]
fn fock_verify_report() {
    let o = run(&[
        "fock-verify",
        "--dmax",
        "4",
        "--charges",
        "-1..1",
        "--beta-order",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass", "{c}");
        assert!(c["range"].is_string());
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "free-energy",
        "--n",
        "2",
        "--D",
        "5",
        "--beta-order",
        "4",
        "--simple",
        "--json",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["schur", "--lambda", "[3,1]", "--format", "csv"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn thread_cap_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz-toda"))
        .args(["hurwitz", "--d", "2", "--profiles", "[2];[2]"])
        .env("HURWITZ_TODA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz-toda"))
        .args(["hurwitz", "--d", "1"])
        .env("HURWITZ_TODA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn free_energy_comparison_is_informational() {
    let o = run(&[
        "string-solve",
        "--D",
        "3",
        "--compare-free-energy",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let dr = &v["free_energy_derivatives"];
    assert_eq!(dr["n_beta"], 4);
    assert_eq!(dr["v_matches"], serde_json::json!([true, true, true]));
    assert_eq!(dr["vbar_matches"], serde_json::json!([true, true, true]));
}
