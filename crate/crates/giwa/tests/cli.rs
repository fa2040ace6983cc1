use std::path::PathBuf;
use std::process::{Command, Output};

const B3: &str = r#"{"vertices": ["v"], "edges": [["v", "v"], ["v", "v"], ["v", "v"]]}"#;

fn write_spec(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn giwa(args: &[&str], spec: Option<&PathBuf>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_giwa"));
    cmd.args(args).env_remove("GIWA_VERTEX_CAP");
    if let Some(p) = spec {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn example_1_tower() -> PathBuf {
    write_spec(
        "ex1_tower.json",
        &format!(
            r#"{{"graph": {B3}, "ell": 3, "alpha": {{"s1": 1, "s2": 4, "s3": 20}}, "levels": 3}}"#
        ),
    )
}

#[test]
fn invariants_reports_mu_lambda_nu() {
    let out = giwa(&["invariants"], Some(&example_1_tower()));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("f(T) = -417T^2 + 417T^3"), "{text}");
    assert_eq!(text.lines().last(), Some("μ=0 λ=5 ν=-2 (n≥1)"));
}

#[test]
fn json_output_is_deterministic() {
    let spec = example_1_tower();
    let a = stdout(&giwa(&["invariants", "--json"], Some(&spec)));
    let b = stdout(&giwa(&["invariants", "--json"], Some(&spec)));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["invariants"]["lambda"], 5);
    assert_eq!(v["invariants"]["nu"], -2);
    assert_eq!(v["levels"][3]["kappa"], "3175683045789705408");
}

#[test]
fn kida_prints_the_degree_identity() {
    let spec = write_spec(
        "ex1_kida.json",
        &format!(
            r#"{{"graph": {B3}, "ell": 3, "alpha": {{"s1": 1, "s2": 4, "s3": 20}},
                "group": {{"type": "product", "factors": [{{"type": "cyclic", "order": 3}}, {{"type": "cyclic", "order": 3}}]}},
                "beta": {{"s1": "(1,0)", "s2": "(0,1)", "s3": "(1,0)"}}}}"#
        ),
    );
    let out = giwa(&["kida"], Some(&spec));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("53+1 = 9×(5+1) ✓"));
}

#[test]
fn graph_checks_and_zeta() {
    let spec = write_spec("b3.json", B3);
    let out = giwa(&["checks"], Some(&spec));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("h'(1) = -2 chi kappa: 4 = 4 ✓"));
    let out = giwa(&["zeta"], Some(&spec));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("h(u)     = 1 - 6u + 5u^2"));
}

#[test]
fn abelian_cover_identities() {
    let spec = write_spec(
        "c5_cover.json",
        &format!(
            r#"{{"graph": {B3}, "group": {{"type": "cyclic", "order": 5}}, "alpha": {{"s1": "1", "s2": "0", "s3": "2"}}}}"#
        ),
    );
    let out = giwa(&["checks"], Some(&spec));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("625 = 625 ✓"));
}

#[test]
fn disconnected_cover_is_refused() {
    let spec = write_spec(
        "c5_trivial.json",
        &format!(
            r#"{{"graph": {B3}, "group": {{"type": "cyclic", "order": 5}}, "alpha": {{"s1": "0", "s2": "0", "s3": "0"}}}}"#
        ),
    );
    let out = giwa(&["checks"], Some(&spec));
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    assert!(stdout(&out).contains("refused"));
}

#[test]
fn malformed_input_exits_2() {
    let spec = write_spec("truncated.json", r#"{"graph":"#);
    let out = giwa(&["invariants"], Some(&spec));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated.json:"));

    let spec = write_spec(
        "bad_edge.json",
        &format!(r#"{{"graph": {B3}, "ell": 3, "alpha": {{"s9": 1}}}}"#),
    );
    assert_eq!(giwa(&["invariants"], Some(&spec)).status.code(), Some(2));

    let spec = write_spec(
        "not_prime.json",
        &format!(r#"{{"graph": {B3}, "ell": 4, "alpha": {{"s1": 1, "s2": 1, "s3": 1}}}}"#),
    );
    assert_eq!(giwa(&["invariants"], Some(&spec)).status.code(), Some(2));
}

#[test]
fn vertex_cap_from_environment_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_giwa"))
        .arg("invariants")
        .arg(example_1_tower())
        .env("GIWA_VERTEX_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap is 5"));
}

#[test]
fn examples_ex2_and_sl2_reproduce() {
    let out = giwa(&["examples", "ex2", "sl2"], None);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains('✗'));
}
