use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conesing"))
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("conesing-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn couple_json(terms: &[(&str, &str)]) -> String {
    let parts: Vec<String> = terms
        .iter()
        .map(|(pt, c)| {
            let point = if *pt == "inf" {
                r#"{"t":"inf"}"#.to_string()
            } else {
                format!(r#"{{"t":"fin","x":"{pt}"}}"#)
            };
            format!(r#"{{"point":{point},"coeff":"{c}"}}"#)
        })
        .collect();
    format!(r#"{{"divisor":[{}]}}"#, parts.join(","))
}

fn run(cmd: &mut Command) -> (i32, Value, Output) {
    let out = cmd.output().unwrap();
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v, out)
}

#[test]
fn describe_quadric_cone() {
    let s = Scratch::new("describe");
    let c = s.file("c.json", &couple_json(&[("0", "2")]));
    let (code, v, _) = run(bin().args(["describe", "--couple"]).arg(&c));
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "conesing/1");
    assert_eq!(v["mld"], "1");
    assert_eq!(v["a_E0"], "1");
    assert_eq!(v["smooth"], false);
}

#[test]
fn describe_smooth_cone() {
    let s = Scratch::new("smooth");
    let c = s.file("c.json", &couple_json(&[("0", "1")]));
    let (code, v, _) = run(bin().args(["describe", "--couple"]).arg(&c));
    assert_eq!(code, 0);
    assert_eq!(v["smooth"], true);
    assert_eq!(v["mld"], "2");
}

#[test]
fn exit_codes() {
    let s = Scratch::new("codes");
    let bad = s.file("bad.json", "{not json");
    let (code, _, _) = run(bin().args(["describe", "--couple"]).arg(&bad));
    assert_eq!(code, 2);
    let neg = s.file("neg.json", &couple_json(&[("0", "-1")]));
    let (code, _, _) = run(bin().args(["describe", "--couple"]).arg(&neg));
    assert_eq!(code, 3);
    let (code, _, _) = run(bin().args(["enumerate", "--epsilon", "3/2", "--isotropy-bound", "1"]));
    assert_eq!(code, 3);
    let (code, _, _) = run(bin().args(["enumerate", "--epsilon", "x", "--isotropy-bound", "1"]));
    assert_eq!(code, 2);
    let (code, _, _) = run(bin().args(["describe", "--couple", "a.json", "--bogus"]));
    assert_eq!(code, 2);
    let missing = s.0.join("missing.json");
    let (code, _, _) = run(bin().args(["resolve", "--couple"]).arg(&missing));
    assert_eq!(code, 2);
}

#[test]
fn enumerate_and_audit_round_trip() {
    let s = Scratch::new("enum");
    let out = s.0.join("cat.json");
    let (code, _, _) = run(bin()
        .args(["enumerate", "--epsilon", "1", "--isotropy-bound", "1", "--out"])
        .arg(&out));
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "conesing/1");
    assert_eq!(v["summary"]["count"], 2);
    assert_eq!(v["summary"]["mld_spectrum"], serde_json::json!(["1", "2"]));
    let (code, v, _) = run(bin().args(["audit", "--catalog"]).arg(&out));
    assert_eq!(code, 0);
    assert_eq!(v["audit"]["failures"], serde_json::json!([]));

    let tampered = text.replace(r#""coeff": "2""#, r#""coeff": "5/3""#);
    let t = s.file("tampered.json", &tampered);
    let (code, v, _) = run(bin().args(["audit", "--catalog"]).arg(&t));
    assert_eq!(code, 1);
    assert_eq!(v["audit"]["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let a = bin()
        .args(["--jobs", "1", "enumerate", "--epsilon", "1/2", "--isotropy-bound", "2"])
        .output()
        .unwrap();
    let b = bin()
        .args(["--jobs", "3", "enumerate", "--epsilon", "1/2", "--isotropy-bound", "2"])
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn mld_set() {
    let (code, v, _) = run(bin().args(["mld-set", "--epsilon", "2/5", "--isotropy-bound", "1"]));
    assert_eq!(code, 0);
    assert_eq!(v["mld_spectrum"], serde_json::json!(["2/5", "1/2", "2/3", "1", "2"]));
}

#[test]
fn resolve_rational_normal_cone() {
    let s = Scratch::new("resolve");
    let c = s.file("c.json", &couple_json(&[("0", "5")]));
    let (code, v, _) = run(bin().args(["resolve", "--couple"]).arg(&c));
    assert_eq!(code, 0);
    assert_eq!(v["graph"]["matrix"], serde_json::json!([[-5]]));
    assert_eq!(v["mld"], "2/5");
}

#[test]
fn presentation_and_hilbert() {
    let s = Scratch::new("pres");
    let c = s.file("c.json", &couple_json(&[("0", "2")]));
    let (code, v, _) = run(bin().args(["presentation", "--couple"]).arg(&c));
    assert_eq!(code, 0);
    assert_eq!(v["generator_degrees"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["equations"], serde_json::json!(["x0*x2 - x1^2"]));
    let (code, v, _) = run(bin().args(["hilbert", "--through", "5", "--couple"]).arg(&c));
    assert_eq!(code, 0);
    assert_eq!(v["values"].as_array().unwrap()[..6], [1, 3, 5, 7, 9, 11]);
    assert_eq!(v["L"], 1);
}

#[test]
fn discrepancy_with_conditions() {
    let s = Scratch::new("disc");
    let c = s.file("c.json", &couple_json(&[("0", "1/2"), ("1", "1/2")]));
    let (code, v, _) = run(bin()
        .args(["discrepancy", "--epsilon", "1", "--isotropy-bound", "2", "--couple"])
        .arg(&c));
    assert_eq!(code, 0);
    assert_eq!(v["a_E0"], "1");
    assert_eq!(v["eps_lc"], true);
    assert_eq!(v["necessary_conditions"]["pair_threshold"], "1/2");
}

#[test]
fn toric_check_and_seed() {
    let s = Scratch::new("toric");
    let fan = s.file("fan.json", r#"{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[2,0]]}"#);
    let div = s.file("d.json", r#"["0","0","1"]"#);
    let (code, v, _) = run(bin().args(["toric-check", "--fan"]).arg(&fan).arg("--divisor").arg(&div));
    assert_eq!(code, 0);
    assert_eq!(v["comparison"]["violations"], 0);
    let (_, a, _) = run(bin()
        .env("CONESING_SEED", "5")
        .args(["toric-check", "--fan"])
        .arg(&fan)
        .arg("--divisor")
        .arg(&div));
    let (_, b, _) = run(bin()
        .args(["toric-check", "--seed", "5", "--fan"])
        .arg(&fan)
        .arg("--divisor")
        .arg(&div));
    assert_eq!(a["seed"], 5);
    assert_eq!(a, b);
    let (code, _, _) = run(bin()
        .env("CONESING_SEED", "nope")
        .args(["toric-check", "--fan"])
        .arg(&fan)
        .arg("--divisor")
        .arg(&div));
    assert_eq!(code, 2);
    let bad = s.file("bad.json", r#"{"rank":2,"rays":[[2,0],[0,1]],"cones":[[0,1]]}"#);
    let (code, _, _) = run(bin().args(["toric-check", "--fan"]).arg(&bad).arg("--divisor").arg(&div));
    assert_eq!(code, 2);
}

#[test]
fn verify_examples_reports_cartier_claim() {
    let (code, v, _) = run(bin().args(["verify-examples", "--an-n", "5", "--an-box", "20", "--rnc-max", "6"]));
    assert_eq!(v["schema"], "conesing/1");
    assert_eq!(v["an_pass"], true);
    assert_eq!(v["diagonal_pass"], true);
    assert_eq!(v["rnc"]["cartier_mismatches"], serde_json::json!([2, 4, 6]));
    assert_eq!(code, 1);
    let (code, v, _) = run(bin().args(["verify-examples", "--an-n", "3", "--an-box", "5", "--rnc-max", "1"]));
    assert_eq!(code, 0);
    assert_eq!(v["rnc_pass"], true);
}
