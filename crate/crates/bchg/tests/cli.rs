mod common;

use std::process::{Command, Output};

fn bchg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bchg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn eval_rank_one_golden() {
    let o = bchg(&["eval", "--rank", "1", "--mult", "4,0,3", "--lambda", "2.5", "--x", "1.0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o)["value"][0].as_f64().unwrap();
    assert!((v - common::GOLDEN_RANK1).abs() < 1e-9 * common::GOLDEN_RANK1, "{v}");
}

#[test]
fn eval_at_rho_is_one() {
    let o = bchg(&["eval", "--rank", "2", "--mult", "2,2,1", "--lambda", "rho", "--x", "0.8,1.7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert!((j["value"][0].as_f64().unwrap() - 1.0).abs() <= 1e-8);
    assert!(j["value"][1].as_f64().unwrap().abs() <= 1e-8);
}

#[test]
fn eval_at_origin_is_exactly_one() {
    let o = bchg(&["eval", "--mult", "2,2,1", "--lambda", "0.3+1i,2", "--x", "0,0", "--format", "json"]);
    let j = json(&o);
    assert_eq!(j["value"][0].as_f64(), Some(1.0));
    assert_eq!(j["value"][1].as_f64(), Some(0.0));
    assert_eq!(j["method"], "exact");
}

#[test]
fn eval_deformed_rho_ell_is_one_after_undoing_the_factor() {
    // F_{rho(m(l))}(m(l)) = 1, so F_{l, rho(m(l))}(m) = u^{-l}
    let o = bchg(&["eval", "--mult", "2,0,3", "--deform", "0.5", "--lambda", "rho-ell", "--x", "0.7", "--format", "json"]);
    let v = json(&o)["value"][0].as_f64().unwrap();
    assert!((v - 0.7f64.cosh().powf(-0.5)).abs() < 1e-8, "{v}");
}

#[test]
fn classify_text() {
    let o = bchg(&["classify", "--mult", "4,1,-1"]);
    assert_eq!(stdout(&o), "M0 M1 M3 MC0; ell_range=[-2, 1]\n");
}

#[test]
fn catalog_lookup() {
    let o = bchg(&["catalog", "--name", "sp(2,1)", "--n", "1", "--format", "json"]);
    let e = &json(&o)[0];
    assert_eq!(e["baseMult"]["short"], 4.0);
    assert_eq!(e["baseMult"]["long"], 3.0);
    assert_eq!(e["deform"]["ell"], 2.0);
    assert_eq!(e["sigmaTauMult"]["short"], 8.0);
    assert_eq!(e["sigmaTauMult"]["long"], -1.0);
    assert_eq!(e["rhoCoords"][0], 5.0);
    let all = bchg(&["catalog"]);
    assert!(stdout(&all).lines().count() >= 20);
}

#[test]
fn cfun_and_bounded() {
    let o = bchg(&["cfun", "--mult", "2,2,1", "--lambda", "rho", "--rank", "2", "--format", "json"]);
    let j = json(&o);
    assert!((j["c"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(j["b0Nonsingular"], true);

    let o = bchg(&["bounded", "--rank", "2", "--mult", "2,2,1", "--lambda", "1.2*rho", "--format", "json"]);
    assert_eq!(json(&o)["verdict"], "unbounded");
    let o = bchg(&["bounded", "--rank", "2", "--mult", "2,2,1", "--lambda", "0.5+3i,1-2i", "--format", "json"]);
    assert_eq!(json(&o)["verdict"], "bounded");
    let o = bchg(&["bounded", "--rank", "2", "--mult", "2,0,1", "--deform", "1.5,0.5", "--lambda", "rho", "--format", "json"]);
    let j = json(&o);
    assert_eq!(j["verdict"], "bounded");
    assert_eq!(j["advisory"], false);
    // ell = ell_max is outside the open interval the theorem covers
    let o = bchg(&["bounded", "--rank", "2", "--mult", "2,0,1", "--deform", "2,0.5", "--lambda", "rho", "--format", "json"]);
    let j = json(&o);
    assert_eq!(j["hypothesesOk"], false);
    assert_eq!(j["advisory"], true);
}

#[test]
fn scan_csv_columns() {
    let o = bchg(&["scan", "--mult", "2,2,1", "--lambda", "1,2", "--ray", "1,2", "--steps", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<_> = s.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "id,m_s,m_m,m_l,ell,ellTilde,lambda_re_1,lambda_re_2,lambda_im_1,lambda_im_2,x_1,x_2,value_re,value_im,method,err_est");
    let b = bchg(&["scan", "--mult", "2,2,1", "--lambda", "1,2", "--box", "0,1", "--steps", "2", "--format", "csv"]);
    assert_eq!(stdout(&b).lines().count(), 10);
}

#[test]
fn exit_codes_and_error_objects() {
    let o = bchg(&["eval", "--mult", "-3,0,1", "--lambda", "1", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "domain");

    let o = bchg(&["eval", "--mult", "2,2,1", "--lambda", "1,2", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bchg(&["eval", "--mult", "2,2,1", "--lambda", "1.3,2.7", "--x", "0.5,0.51", "--method", "series"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["exitCode"], 3);
    assert_eq!(e["error"]["kind"], "wall_too_close");

    assert_eq!(bchg(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bchg(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_small_suite() {
    let o = bchg(&["verify", "--suite", "bounded", "--probes", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["schemaVersion"], 1);
    assert_eq!(j["passed"], true);
    assert_eq!(j["checks"].as_array().unwrap().len(), 4);
}
