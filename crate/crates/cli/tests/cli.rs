use std::process::{Command, Output};

fn ucp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucp"))
        .args(args)
        .env_remove("UCP_THREADS")
        .output()
        .expect("spawn ucp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = ucp(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn phi_json_is_exact_and_stable() {
    let args = ["phi", "12", "--unitary", "--format", "json"];
    let o = ucp(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"schema\":1,\"n\":12,\"kind\":\"unitary\",\"degree\":6,\"coeffs_ascending\":[1,-1,0,1,0,-1,1]}\n"
    );
    assert_eq!(ucp(&args).stdout, o.stdout);
}

#[test]
fn every_algorithm_prints_the_same_polynomial() {
    let reference = stdout(&ucp(&["phi", "360", "--unitary"]));
    for alg in ["mobius-product", "cyclo-factors", "kernel-reduction", "quotient-tower"] {
        assert_eq!(stdout(&ucp(&["phi", "360", "--unitary", "--algorithm", alg])), reference, "{alg}");
    }
}

#[test]
fn text_output_round_trips_through_identify() {
    let text = stdout(&ucp(&["phi", "40", "--unitary"]));
    let v = json(&["identify", "--poly", text.trim(), "--format", "json"]);
    assert_eq!(v["tier"], "unitary_cyclotomic");
    assert_eq!(v["n"], 40);
    assert_eq!(v["cyclotomic_factors"], serde_json::json!({"10": 1, "20": 1, "40": 1}));
}

#[test]
fn identify_small_examples() {
    let o = ucp(&["identify", "--poly", "x^2 - x + 1"]);
    let text = stdout(&o);
    assert!(text.contains("tier: unitary_cyclotomic"));
    assert!(text.contains("n: 6"));
    let q = stdout(&ucp(&["qpoly", "--rho", "5,6"]));
    let v = json(&["identify", "--poly", q.trim(), "--format", "json"]);
    assert_eq!(v["tier"], "inclusion_exclusion");
    assert_eq!(v["rho"], serde_json::json!([5, 6]));
    let v = json(&["identify", "--poly", "[1,0,0,0,0,-1,1]", "--format", "json"]);
    assert_eq!(v["tier"], "not_kronecker");
}

#[test]
fn eval_and_ramanujan() {
    assert_eq!(stdout(&ucp(&["eval", "12", "--unitary", "--at", "-1"])), "3\n");
    assert_eq!(stdout(&ucp(&["eval", "9", "--unitary", "--at", "1"])), "9\n");
    assert_eq!(stdout(&ucp(&["eval", "6", "--at", "2"])), "3\n");
    let v = json(&["ramanujan", "12", "4", "--unitary", "--format", "json"]);
    assert_eq!(v["value"], -3);
    assert_eq!(stdout(&ucp(&["ramanujan", "12", "6"])), "-4\n");
}

#[test]
fn qpoly_json() {
    let v = json(&["qpoly", "--rho", "3,4", "--format", "json"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rho"], serde_json::json!([3, 4]));
    assert_eq!(v["n0"], 12);
    assert_eq!(v["coeffs_ascending"], serde_json::json!([1, -1, 0, 1, 0, -1, 1]));
}

#[test]
fn scan_heights_lines_and_summary() {
    let o = ucp(&["scan-heights", "--primes", "2,3,5", "--limit", "1000", "--require-all-primes", "--threads", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "60\t2"));
    assert!(text.ends_with("max height 2 at n = 60 over 19 values below 1000\n"));
    let v = json(&["scan-heights", "--limit", "1000", "--require-all-primes", "--format", "json"]);
    assert_eq!((v["max_height"].as_u64(), v["argmax_n"].as_u64(), v["count"].as_u64()), (Some(2), Some(60), Some(19)));
}

#[test]
fn scan_heights_threads_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ucp"))
        .args(["scan-heights", "--limit", "100000", "--require-all-primes"])
        .env("UCP_THREADS", "3")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(o.stdout, ucp(&["scan-heights", "--limit", "100000", "--require-all-primes", "--threads", "1"]).stdout);
}

#[test]
fn scan_heights_respects_memory_budget() {
    let o = ucp(&["scan-heights", "--limit", "100000", "--memory-budget", "1K"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("memory budget"));
}

#[test]
fn witness_search() {
    let v = json(&["witness", "--value", "-2", "--nmax", "200", "--format", "json"]);
    assert_eq!((v["n"].as_u64(), v["j"].as_u64()), (Some(60), Some(5)));
    let v = json(&["witness", "--value", "-2", "--nmax", "59", "--format", "json"]);
    assert_eq!(v["found"], false);
}

#[test]
fn verify_suites_pass() {
    let o = ucp(&["verify", "--suite", "identities", "--nmax", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&["verify", "--suite", "all", "--nmax", "60", "--format", "json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 6);
}

#[test]
fn exit_codes() {
    assert_eq!(ucp(&["phi", "0"]).status.code(), Some(1));
    assert_eq!(ucp(&["qpoly", "--rho", "4,6"]).status.code(), Some(1));
    assert_eq!(ucp(&["identify", "--poly", "x^^2"]).status.code(), Some(1));
    assert_eq!(ucp(&["phi", "12", "--bogus"]).status.code(), Some(64));
    assert_eq!(ucp(&["phi", "12", "--algorithm", "cyclo-factors"]).status.code(), Some(64));
    assert_eq!(ucp(&["verify", "--suite", "everything"]).status.code(), Some(64));
    assert_eq!(ucp(&["--help"]).status.code(), Some(0));
    assert_eq!(ucp(&["--version"]).status.code(), Some(0));
}
