use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmbasin")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

const FIELD: [&str; 6] = ["--p", "3", "--ext", "unramified", "--delta", "-1"];

fn with_field<'a>(cmd: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend(FIELD);
    v.extend(rest);
    v
}

#[test]
fn documented_examples() {
    let r = json(&with_field("intersect", &["--tau", "1,0;0,1/3", "--lambda", "1,0", "--level", "full", "--variant", "corollary"]));
    assert_eq!(r["m"], "4/1");
    assert_eq!(r["factors"]["I_E"], 4);
    assert_eq!(r["integer"], true);
    assert_eq!(r["variant"], "corollary");
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert!(keys.contains(&"integral_histogram") && keys.contains(&"integral_depth"));

    assert_eq!(json(&with_field("msdegree", &["--s", "2"]))["m_s"], "12/1");
    assert_eq!(json(&with_field("basin", &["--tau", "1,0;0,1/27", "--level", "principal:1"]))["basin"], "[1:0]");
    assert_eq!(json(&with_field("conductor", &["--tau", "1,0;0,1/27"]))["conductor"], 3);
    let c = json(&["components", "--p", "3", "--level", "principal:1"]);
    assert_eq!(c["components"].as_array().unwrap().len(), 4);
    assert_eq!(c["index"], "48");
}

#[test]
fn key_order_is_fixed() {
    let out = run(&with_field("intersect", &["--tau", "1,0;0,1/3", "--lambda", "0,1", "--level", "principal:1"]));
    let text = String::from_utf8(out.stdout).unwrap();
    let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap_or_else(|| panic!("missing {k}"));
    let order = ["m", "factors", "integral_histogram", "integral_depth", "integer", "variant"];
    assert!(order.windows(2).all(|w| pos(w[0]) < pos(w[1])));
    let section = &text[pos("factors")..];
    let factors = ["zeta", "I_E", "I_F", "e", "q_pow_s", "integral", "vol_U"];
    let fpos: Vec<usize> = factors.iter().map(|k| section.find(&format!("\"{k}\":")).unwrap()).collect();
    assert!(fpos.windows(2).all(|w| w[0] < w[1]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["m"], "1/3");
    assert_eq!(v["integer"], false);
}

#[test]
fn theorem_b_variant_reports_ratio() {
    let args = ["--p", "3", "--ext", "ramified", "--tau", "1,0;0,1/3", "--lambda", "1,0", "--level", "full"];
    let mut cor = vec!["intersect"];
    cor.extend(args);
    let mut thb = cor.clone();
    thb.extend(["--variant", "theorem_b"]);
    assert_eq!(json(&cor)["m"], "6/1");
    let b = json(&thb);
    assert_eq!(b["m"], "3/1");
    assert_eq!(b["factors"]["ratio_to_corollary"], "1/2");
    thb.extend(["--residue-degree", "2"]);
    assert_eq!(json(&thb)["m"], "6/1");
}

#[test]
fn inputs_echo_canonically_and_rationals_round_trip() {
    let r = json(&with_field("integral", &["--tau", "2/2,0;0,3/9", "--lambda", "1,0", "--level", "full"]));
    assert_eq!(r["input"]["tau"], "1,0;0,1/3");
    assert_eq!(r["input"]["delta"], "-1/1");
    assert_eq!(r["value"], "1/3");
    for pair in r["histogram"].as_array().unwrap() {
        let mu = pair[1].as_str().unwrap();
        let (n, d) = mu.split_once('/').unwrap();
        let (n, d): (i64, i64) = (n.parse().unwrap(), d.parse().unwrap());
        assert_eq!(format!("{n}/{d}"), mu);
        assert!(d > 0);
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["intersect", "--p", "3", "--frobnicate"]), 2);
    assert_eq!(code(&with_field("conductor", &["--tau", "1,0;0,1/2"])), 2);
    assert_eq!(code(&with_field("basin", &["--tau", "1,0;0,1", "--level", "principal:1"])), 3);
    assert_eq!(code(&["msdegree", "--p", "3", "--delta", "4", "--s", "1"]), 3);
    assert_eq!(code(&with_field("integral", &["--tau", "1,0;0,1/3", "--lambda", "3,3", "--level", "full"])), 3);
    assert_eq!(code(&["components", "--p", "3", "--level", "weird"]), 2);

    let out = run(&["msdegree", "--p", "3", "--delta", "4", "--s", "1"]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "SplitAlgebra");
    assert!(err["message"].is_string());
    let out = run(&with_field("basin", &["--tau", "1,0;0,1", "--level", "principal:1"]));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ConductorTooSmall");
}

#[test]
fn out_flag_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    let p = path.to_str().unwrap();
    let out = run(&with_field("equidist", &["--level", "principal:1", "--s-range", "1..3", "--out", p]));
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["profiles"].as_array().unwrap().len(), 3);
    assert_eq!(v["verdicts"]["non_basin_decreasing"], true);
    let csv = std::fs::read_to_string(dir.path().join("family.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("s,lambda,m,MT,exponent"));
    assert!(csv.contains("1,[1:0],3/1,24,0.125\n"));
    assert!(csv.contains("1,[0:1],1/3,24,0.0138888888889\n"));
    assert_eq!(csv.lines().count(), 1 + 3 * 4);
    // No stray temporaries left behind.
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cases: Vec<Vec<&str>> = vec![
        with_field("intersect", &["--tau", "1,1/9;0,1", "--lambda", "1,2", "--level", "iwahori:2"]),
        with_field("equidist", &["--level", "principal:1", "--s-range", "1..5"]),
        with_field("integral", &["--tau", "1,0;0,1/27", "--lambda", "0,1", "--level", "full"]),
        vec!["selftest"],
    ];
    for args in cases {
        let outputs: Vec<Vec<u8>> = ["1", "2", "8"]
            .iter()
            .map(|t| {
                let mut a = args.clone();
                a.extend(["--threads", t]);
                let o = run(&a);
                assert!(o.status.success(), "{a:?}");
                o.stdout
            })
            .collect();
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
        assert_eq!(run(&args).stdout, outputs[0]);
    }
}

#[test]
fn selftest_passes_and_detects_faults() {
    let ok = run(&["selftest"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("checks passed"));

    let bad = run(&["selftest", "--inject-fault", "zeta-off-by-one"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8(bad.stdout).unwrap().contains("FAIL  zeta_q(3,1)"));
}
