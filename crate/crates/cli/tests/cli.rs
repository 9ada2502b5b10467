use std::process::{Command, Output};

use serde_json::Value;

fn regsub(args: &[&str]) -> Output {
    regsub_env(args, &[])
}

fn regsub_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_regsub"));
    cmd.args(args).env_remove("REGSUB_ENUM_CAP").env_remove("REGSUB_CLOSURE_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn census_sweeps_k_and_passes() {
    let out = regsub(&["census", "--p", "3"]);
    assert_eq!(code(&out), 0);
    let docs = json(&out);
    let docs = docs.as_array().unwrap();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0]["k"], 3);
    assert_eq!(docs[1]["k"], 4);
    assert_eq!(docs[0]["reg_count_enumerated"], 27);
    assert_eq!(docs[1]["reg_count_enumerated"], 1);
}

#[test]
fn report_has_exact_schema() {
    fn sorted(mut v: Vec<&str>) -> Vec<&str> {
        v.sort_unstable();
        v
    }
    let out = regsub(&["orbits", "--p", "3", "--k", "3"]);
    let doc = &json(&out)[0];
    let keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        sorted(vec![
            "p", "k", "dims", "gamma_order_exp", "reg_count_exp", "reg_count_enumerated", "d", "b_H",
            "orbit_sizes", "m_k", "M_k", "bounds", "checks", "skipped",
        ])
    );
    let dims: Vec<&str> = doc["dims"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(dims, sorted(vec!["I_k", "I_k1", "A_k", "B_k"]));
    let bounds: Vec<&str> = doc["bounds"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(bounds, sorted(vec!["eq090616a_lower", "eq090616a_upper", "lemma070616a3", "theorem251015b"]));
    let check = doc["checks"][0].as_object().unwrap();
    assert!(check.contains_key("name") && check.contains_key("status"));
}

#[test]
fn census_over_cap_is_skipped_not_failed() {
    let out = regsub(&["census", "--p", "5", "--k", "5"]);
    assert_eq!(code(&out), 0);
    let doc = &json(&out)[0];
    assert_eq!(doc["reg_count_exp"], 12);
    assert_eq!(doc["reg_count_enumerated"], Value::Null);
    assert_eq!(doc["skipped"][0], "enumeration");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&regsub(&["census", "--p", "4"])), 2);
    assert_eq!(code(&regsub(&["census", "--p", "3", "--k", "5"])), 2);
    assert_eq!(code(&regsub(&["orbits", "--p", "3", "--k", "2"])), 2);
    assert_eq!(code(&regsub(&["verify", "--p", "1"])), 2);
    assert_eq!(code(&regsub(&["census"])), 2);
}

#[test]
fn orbits_record_b_h_and_bounds() {
    let out = regsub(&["orbits", "--p", "3", "--k", "3"]);
    assert_eq!(code(&out), 0);
    let doc = &json(&out)[0];
    assert_eq!(doc["b_H"], 27);
    for v in doc["bounds"].as_object().unwrap().values() {
        assert_eq!(v, &Value::Bool(true));
    }

    let out = regsub(&["orbits", "--p", "5", "--k", "7"]);
    assert_eq!(code(&out), 0);
    let doc = &json(&out)[0];
    assert_eq!(doc["b_H"], 125);
    assert_eq!(doc["bounds"]["eq090616a_lower"], true);
    assert_eq!(doc["bounds"]["eq090616a_upper"], true);
}

#[test]
fn orbits_over_cap_exit_3_with_partial_report() {
    let out = regsub(&["orbits", "--p", "5", "--k", "5"]);
    assert_eq!(code(&out), 3);
    let doc = &json(&out)[0];
    assert_eq!(doc["dims"]["I_k"], 10);
    assert_eq!(doc["b_H"], Value::Null);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn oracle_agrees_on_small_primes_and_refuses_large() {
    for (p, k) in [("3", "3"), ("2", "2")] {
        let out = regsub(&["oracle", "--p", p, "--k", k]);
        assert_eq!(code(&out), 0, "p={p}");
        let doc = &json(&out)[0];
        let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
        assert!(names.contains(&"oracle_subgroups_match"));
        assert!(names.contains(&"oracle_bH_match"));
    }
    let out = regsub(&["oracle", "--p", "5", "--k", "7"]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("p <= 3"));
}

#[test]
fn verify_json_is_byte_identical_across_runs() {
    let first = regsub(&["verify", "--p", "3", "--emit", "json"]);
    let second = regsub(&["verify", "--p", "3", "--emit", "json"]);
    assert_eq!(code(&first), 0);
    assert_eq!(code(&second), 0);
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);
    let doc = json(&first);
    assert_eq!(doc["p"], 3);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail"));
}

#[test]
fn csv_has_one_row_per_k() {
    let out = regsub(&["orbits", "--p", "3", "--emit", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("p,k,dims.I_k,"));
    assert!(lines[1].starts_with("3,3,"));
    assert!(lines[2].starts_with("3,4,"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.json");
    let out = regsub(&["census", "--p", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc[0]["reg_count_enumerated"], 1);
}

#[test]
fn env_caps_apply_and_flags_win() {
    let out = regsub_env(&["census", "--p", "3", "--k", "3"], &[("REGSUB_ENUM_CAP", "10")]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)[0]["skipped"][0], "enumeration");

    let out = regsub_env(
        &["census", "--p", "3", "--k", "3", "--enum-cap", "1000"],
        &[("REGSUB_ENUM_CAP", "10")],
    );
    assert_eq!(json(&out)[0]["reg_count_enumerated"], 27);

    let out = regsub_env(&["oracle", "--p", "3", "--k", "3"], &[("REGSUB_CLOSURE_CAP", "5")]);
    assert_eq!(code(&out), 3);
}
