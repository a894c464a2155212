use std::process::{Command, Output};

fn dwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwork")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = dwork(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn rows(v: &serde_json::Value) -> &Vec<serde_json::Value> {
    v["rows"].as_array().unwrap()
}

#[test]
fn count_naive_and_greene_agree_at_13() {
    let v = json(&["count", "--d", "4", "--q", "13", "--methods", "naive,greene", "--format", "json"]);
    let rows = rows(&v);
    assert_eq!(rows.len(), 24);
    for method in ["naive", "greene"] {
        assert_eq!(rows.iter().filter(|r| r["method"] == method).count(), 12);
    }
    assert!(rows.iter().all(|r| r["status"] == "reference" || r["status"] == "match"));
    let l2 = rows.iter().find(|r| r["method"] == "greene" && r["lambda"] == 2).unwrap();
    assert_eq!(l2["value"], "320");
}

#[test]
fn greene_is_inapplicable_when_q_is_3_mod_4() {
    let v = json(&["count", "--d", "4", "--q", "7", "--methods", "greene", "--format", "json"]);
    assert_eq!(rows(&v).len(), 6);
    assert!(rows(&v).iter().all(|r| r["status"] == "inapplicable"));
}

#[test]
fn padic_residues_match_enumeration() {
    let v = json(&["count", "--d", "4", "--p", "7", "--methods", "naive,padic", "--k", "2", "--format", "json"]);
    let padic: Vec<_> = rows(&v).iter().filter(|r| r["method"] == "padic").collect();
    assert_eq!(padic.len(), 6);
    assert!(padic.iter().all(|r| r["status"] == "match" && r["modulus"] == 49));
}

#[test]
fn verify_truncation_theorems() {
    let out = dwork(&["verify", "--theorems", "3.1,3.3", "--p", "5,13"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("trunc-2f1: ") && text.contains("trunc-dfd: "));
    assert!(text.contains(" 0 fail"));
}

#[test]
fn conjecture_rows_are_labelled() {
    let v = json(&["verify", "--theorems", "conj8.2", "--d", "5", "--p", "3,7,13", "--format", "json"]);
    assert!(!rows(&v).is_empty());
    for r in rows(&v) {
        assert_eq!(r["status"], "conjecture");
        assert_eq!(r["outcome"], "pass");
    }
}

#[test]
fn hasse_davenport_over_prime_powers() {
    let v = json(&["verify", "--theorems", "hasse-davenport", "--q", "5,13,25", "--format", "json"]);
    let qs: Vec<u64> = rows(&v).iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert!(qs.contains(&25));
    assert!(qs.windows(2).all(|w| w[0] <= w[1]));
    assert!(rows(&v).iter().all(|r| r["status"] == "pass"));
}

#[test]
fn json_is_reproducible() {
    let args = ["count", "--d", "4", "--q", "13", "--methods", "naive,koblitz", "--format", "json", "--jobs", "2"];
    let a = dwork(&args);
    let b = dwork(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = dwork(&["scan", "--q", "5,7,13", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let mut rd = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rd.headers().unwrap(), vec!["q", "lambda_count", "naive_ns", "formula_ns", "speedup"]);
    let recs: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(recs.len(), 3);
    assert_eq!(&recs[1][3], "");
    assert_eq!(&recs[2][1], "12");
}

#[test]
fn bad_configuration_exits_2() {
    for args in [
        vec!["count", "--q", "12"],
        vec!["count", "--q", "8"],
        vec!["verify", "--theorems", "9.9", "--p", "5"],
        vec!["count", "--p", "9"],
        vec!["count", "--q", "13", "--lambda", "x"],
        vec!["count"],
        vec!["count", "--q", "101", "--d", "6", "--methods", "naive"],
    ] {
        assert_eq!(dwork(&args).status.code(), Some(2), "{args:?}");
    }
}
