use std::process::{Command, Output};

use hqcf::io::{cf_from_json, CfJson};

fn hqcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hqcf")).args(args).output().unwrap()
}

fn hqcf_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hqcf"))
        .args(args)
        .env("HQCF_THREADS", threads)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_default_count_and_prefix() {
    let o = hqcf(&["expand", "--quartic", "--p", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("p = 13, 200 partial quotients\n"));
    let lines: Vec<&str> = s.lines().skip(1).collect();
    assert_eq!(lines.len(), 200);
    assert_eq!(
        &lines[..6],
        [
            "a_1 = T",
            "a_2 = 12*T",
            "a_3 = 7*T",
            "a_4 = 11*T",
            "a_5 = 8*T",
            "a_6 = 5*T"
        ]
    );
}

#[test]
fn expand_json_round_trips() {
    let o = hqcf(&["expand", "--quartic", "--p", "7", "--n", "40", "--json"]);
    let s = stdout(&o);
    let cf = cf_from_json(s.trim()).unwrap();
    assert_eq!(cf.len(), 40);
    assert_eq!(serde_json::to_string(&CfJson::from(&cf)).unwrap(), s.trim());
}

#[test]
fn annotations_name_the_a_polynomials() {
    let s = stdout(&hqcf(&["expand", "--quartic", "--p", "7", "--n", "4", "--k", "2"]));
    assert!(s.contains("a_4 = 3*T^3 + 6*T = 3·A_{1,2}"), "{s}");
    let s = stdout(&hqcf(&[
        "generate",
        "--p",
        "7",
        "--k",
        "2",
        "--e1",
        "3",
        "--e2",
        "5",
        "--lambdas",
        "2,6,6",
        "--n",
        "4",
    ]));
    assert!(s.contains("a_1 = 2*T = 2·A_{0,2}"), "{s}");
}

#[test]
fn generate_matches_expand() {
    let g = stdout(&hqcf(&[
        "generate",
        "--p",
        "7",
        "--k",
        "2",
        "--e1",
        "3",
        "--e2",
        "5",
        "--lambdas",
        "2,6,6",
        "--n",
        "60",
        "--json",
    ]));
    let e = stdout(&hqcf(&["expand", "--quartic", "--p", "7", "--n", "60", "--json"]));
    let g: serde_json::Value = serde_json::from_str(&g).unwrap();
    let e: serde_json::Value = serde_json::from_str(&e).unwrap();
    assert_eq!(g["pq"], e["pq"]);
    assert_eq!(g["indices"].as_array().unwrap().len(), 60);
}

#[test]
fn verify_prop1_prints_theta() {
    let o = hqcf(&["verify", "prop1", "--p", "13", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass  theta_4 = 2  v = [7, "));
}

#[test]
fn verify_conj1_json_schema() {
    let o = hqcf(&["verify", "conj1", "--p", "7", "--n", "200", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(
        (v["epsilon1"].clone(), v["epsilon2"].clone(), v["a"].clone()),
        (3.into(), 5.into(), 6.into())
    );
    assert_eq!(v["a_equals_8_27"], true);
    assert_eq!(v["compared_terms"], 200);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 7);
}

#[test]
fn negative_control_exits_one() {
    let o = hqcf(&["verify", "conj2", "--p", "5", "--n", "40", "--l", "13"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hqcf(&["verify", "conj2", "--p", "5", "--n", "40"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["expand", "--quartic", "--p", "9"][..],
        &["expand", "--p", "7"],
        &["expand", "--p", "7", "--poly", "X/7"],
        &["expand", "--p", "7", "--poly", "[{\"p\":7}]"],
        &["expand", "--p", "7", "--poly", "X^2 - T*X - 1", "--quartic"],
        &["verify", "conj1", "--p", "11"],
        &["generate", "--p", "7", "--e1", "3", "--e2", "5"],
        &["expand", "--quartic", "--p", "7", "--n", "0"],
    ] {
        let o = hqcf(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn parsed_polynomial_equals_builtin_quartic() {
    let a = stdout(&hqcf(&[
        "expand",
        "--p",
        "13",
        "--n",
        "30",
        "--poly",
        "-X^4/12 - T*X^3 + X^2 + 1",
    ]));
    let b = stdout(&hqcf(&["expand", "--p", "13", "--n", "30", "--quartic"]));
    assert_eq!(a, b);
}

#[test]
fn output_is_deterministic_across_thread_caps() {
    let args = ["verify", "prop2", "--p", "11", "--json"];
    let base = hqcf(&args).stdout;
    assert_eq!(hqcf_env(&args, "1").stdout, base);
    assert_eq!(hqcf_env(&args, "3").stdout, base);
    let args = ["exponent", "--quartic", "--p", "13", "--n", "120", "--json"];
    assert_eq!(hqcf(&args).stdout, hqcf(&args).stdout);
}

#[test]
fn exponent_reports_closed_form_separately() {
    let v: serde_json::Value =
        serde_json::from_slice(&hqcf(&["exponent", "--quartic", "--p", "7", "--n", "100", "--json"]).stdout).unwrap();
    assert_eq!(v["nu_closed"], "8/3");
    assert_eq!(v["window"], 99);
    let v: serde_json::Value =
        serde_json::from_slice(&hqcf(&["exponent", "--quartic", "--p", "5", "--n", "50", "--json"]).stdout).unwrap();
    assert!(v["nu_closed"].is_null());
}
