use std::path::Path;
use std::process::{Command, Output};

use bipartid::automata::{parse_system_table, Dfa};
use bipartid::data;
use bipartid::holonomic::{bir_operator, birp_operator, CertificateJson, QDiffOperator};
use bipartid_cli::emit::SystemJson;

fn bipartid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bipartid")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bipartid(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Printed-table name of each canonically named state of the built automaton.
fn printed_name(canonical: &str) -> String {
    let built = bipartid_cli::emit::built_dfa().unwrap();
    let iso = built.isomorphism(&data::golden_dfa().unwrap()).unwrap();
    let s = (0..built.num_states()).find(|&s| Dfa::state_name(s) == canonical).unwrap();
    Dfa::state_name(iso[s])
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn csv_series_has_the_contract_header() {
    let out = stdout(&["emit", "bir", "--format", "csv", "--qorder", "10"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x_exp,q_exp,coeff"));
    assert_eq!(lines.next(), Some("0,0,1"));
    assert!(lines.all(|l| l.split(',').count() == 3));
}

#[test]
fn dot_automaton_has_six_nodes() {
    let out = stdout(&["emit", "dfa", "--format", "dot"]);
    let nodes = out.lines().filter(|l| l.contains("[shape=circle]") || l.contains("[shape=doublecircle]")).count();
    assert_eq!(nodes, 6);
    assert_eq!(out.matches("doublecircle").count(), 1);
}

#[test]
fn emitted_system_matches_the_printed_matrix() {
    let sys: SystemJson = serde_json::from_str(&stdout(&["emit", "system", "--format", "json"])).unwrap();
    let (names, rows) = parse_system_table(data::GOLDEN_SYSTEM).unwrap();
    let m = sys.polynomial_matrix().unwrap();
    let printed: Vec<String> = sys.states.iter().map(|s| printed_name(s)).collect();
    assert_eq!(sys.unit, 3);
    for (i, a) in names.iter().enumerate() {
        let r = printed.iter().position(|s| s == a).unwrap();
        for (j, b) in names.iter().enumerate() {
            let c = printed.iter().position(|s| s == b).unwrap();
            assert_eq!(m[r][c], rows[i][j], "entry ({a}, {b})");
        }
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let commands: &[&[&str]] = &[
        &["emit", "birp", "--format", "json", "--qorder", "15"],
        &["emit", "cylindric", "--profile", "2,1,0", "--format", "csv", "--qorder", "15"],
        &["emit", "system", "--format", "dot"],
        &["emit", "operator:bir", "--format", "csv"],
        &["emit", "certificate:birp"],
        &["series", "--class", "birp", "--source", "automaton", "--qorder", "12", "--format", "csv"],
        &["enumerate", "--conditions", "D1,D3", "--max-size", "8"],
        &["dfa", "--golden"],
        &["verify-all", "--qorder", "10"],
    ];
    for args in commands {
        assert_eq!(bipartid(args).stdout, bipartid(args).stdout, "{args:?}");
    }
}

#[test]
fn verify_all_preconditions_and_exit_codes() {
    assert_eq!(bipartid(&["verify-all", "--qorder", "0"]).status.code(), Some(2));
    assert_eq!(bipartid(&["verify-all", "--qorder", "9"]).status.code(), Some(2));
    let out = bipartid(&["verify-all", "--qorder", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(reports.iter().all(|r| r["status"] == "pass" && r.get("wall_ms").is_none()));
}

#[test]
fn certify_round_trip_and_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let term = write(dir.path(), "t.json", &stdout(&["emit", "term:g300"]));
    let cert_text = stdout(&["emit", "certificate:g300"]);
    let cert = write(dir.path(), "c.json", &cert_text);
    assert!(bipartid(&["certify", "--term", &term, "--cert", &cert]).status.success());

    let mut j: CertificateJson = serde_json::from_str(&cert_text).unwrap();
    let p1 = &mut j.families.get_mut("p").unwrap()[1];
    p1.add_term(vec![0; p1.vars().len()], 1.into());
    let bad = write(dir.path(), "bad.json", &serde_json::to_string(&j).unwrap());
    let out = bipartid(&["certify", "--term", &term, "--cert", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "fail");
    assert!(report["witness"]["detail"].as_str().unwrap().starts_with("residual"));
}

#[test]
fn builtin_certificates_report_how_they_verified() {
    let r: serde_json::Value = serde_json::from_str(&stdout(&["certify", "--builtin", "bir"])).unwrap();
    assert_eq!(r["inputs"]["outcome"], "emended");
    let r: serde_json::Value = serde_json::from_str(&stdout(&["certify", "--builtin", "g300"])).unwrap();
    assert_eq!(r["inputs"]["outcome"], "verbatim");
}

#[test]
fn uncouple_from_emitted_system() {
    let dir = tempfile::tempdir().unwrap();
    let sys_text = stdout(&["emit", "system"]);
    let sys = write(dir.path(), "s.json", &sys_text);
    let states = serde_json::from_str::<SystemJson>(&sys_text).unwrap().states;
    for (name, printed) in [("q0", bir_operator()), ("q2", birp_operator())] {
        let c = states.iter().position(|s| printed_name(s) == name).unwrap().to_string();
        let op: QDiffOperator = serde_json::from_str(&stdout(&["uncouple", "--system", &sys, "--component", &c])).unwrap();
        assert_eq!(op, printed.primitive().unwrap(), "{name}");
    }
    let text = write(dir.path(), "t.json", r#"{"unit":3,"matrix":[["1+xq"]]}"#);
    let op: QDiffOperator = serde_json::from_str(&stdout(&["uncouple", "--system", &text, "--component", "0"])).unwrap();
    assert_eq!(op, QDiffOperator::from_strs(3, &["1", "-1-xq"]).unwrap());
    assert_eq!(bipartid(&["uncouple", "--system", &text, "--component", "1"]).status.code(), Some(2));
}

#[test]
fn celine_finds_a_two_term_recurrence() {
    let dir = tempfile::tempdir().unwrap();
    let term = write(
        dir.path(),
        "rr.json",
        r#"{"vars":[],"matrix":[[2]],"linear":[0],"constant":0,
            "denominators":[{"form":{"coeffs":[1],"constant":0},"base":1}],
            "x_exponent":{"coeffs":[1],"constant":0}}"#,
    );
    let j: CertificateJson = serde_json::from_str(&stdout(&["celine", "--term", &term, "--order", "1", "--deg", "2", "--kdeg", "0"])).unwrap();
    assert_eq!(j.order, 1);
    let none = bipartid(&["celine", "--term", &term, "--order", "0", "--deg", "2", "--kdeg", "0"]);
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn sources_agree_at_x_one() {
    let via = |src: &str| stdout(&["series", "--class", "bir", "--source", src, "--qorder", "20", "--at-x-one", "--format", "csv"]);
    let product = via("product");
    assert!(product.starts_with("q_exp,coeff\n0,1\n1,2\n2,2\n3,4\n"));
    for src in ["enumeration", "sum", "automaton"] {
        assert_eq!(via(src), product, "{src}");
    }
}

#[test]
fn bad_targets_and_formats_are_errors() {
    assert_eq!(bipartid(&["emit", "nothing"]).status.code(), Some(2));
    assert_eq!(bipartid(&["emit", "bir", "--format", "dot"]).status.code(), Some(2));
    assert_eq!(bipartid(&["emit", "bir", "--format", "xml"]).status.code(), Some(2));
}
