use std::fs;
use std::path::PathBuf;

use legendrian_cost::cli::run;

fn legcost(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["legcost"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

fn tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("legcost-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn invariants_of_a_file() {
    let p = tmp("unknot.front", "L1 R1\n");
    let (code, out, _) = legcost(&["invariants", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["tb"].as_i64(), v["rot"].as_i64()), (Some(-1), Some(0)));
}

#[test]
fn cost_simple_example() {
    let (code, out, _) = legcost(&["cost-simple", "--type", "unknot", "--a", "-1,0", "--b", "-3,0"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["kind"].as_str(), v["value"].as_u64()), (Some("Exact"), Some(2)));
    let (code, _, err) = legcost(&["cost-simple", "--type", "unknot", "--a", "-1,0", "--b", "-2,0"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn graph_example() {
    let (code, out, _) = legcost(&["graph", "--type", "unknot", "--floor", "-3", "--format", "json"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
    let (_, dot, _) = legcost(&["graph", "--type", "unknot", "--floor", "-1", "--format", "dot"]);
    assert!(dot.contains("\"(-1,0)\""));
    let (_, again, _) = legcost(&["graph", "--type", "unknot", "--floor", "-3", "--format", "json"]);
    assert_eq!(again, out);
}

#[test]
fn verify_and_descriptor_files() {
    let (code, out, _) = legcost(&["verify", "--type", "trefoil-r", "--floor", "-2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["violations"].as_array().unwrap().len(), 0);
    let d = tmp("nt.json", r#"{"name":"nt","simple":"unknown","peaks":[[-1,0]],"unique_destabilization":true,"invertible":true}"#);
    let (code, _, err) = legcost(&["graph", "--desc", d.to_str().unwrap(), "--floor", "-2"]);
    assert_eq!(code, 1);
    assert!(err.contains("simple"));
}

#[test]
fn gen_stabilize_sum_round_trip() {
    let (code, out, _) = legcost(&["gen", "trefoil-l", "--class", "-7,0"]);
    assert_eq!(code, 0);
    let p = tmp("lt.front", &out);
    let (_, inv, _) = legcost(&["invariants", p.to_str().unwrap()]);
    assert_eq!((json(&inv)["tb"].as_i64(), json(&inv)["rot"].as_i64()), (Some(-7), Some(0)));
    // the reversed orientation survives the file format
    let (_, rev, _) = legcost(&["gen", "trefoil-l", "--class", "-6,1"]);
    let q = tmp("ltr.front", &rev);
    let (_, inv, _) = legcost(&["invariants", q.to_str().unwrap()]);
    assert_eq!(json(&inv)["rot"].as_i64(), Some(1));
    let (code, s, _) = legcost(&["stabilize", q.to_str().unwrap(), "--sign", "-", "--site", "2"]);
    assert_eq!(code, 0);
    let s = tmp("s.front", &s);
    let (_, inv, _) = legcost(&["invariants", s.to_str().unwrap()]);
    assert_eq!((json(&inv)["tb"].as_i64(), json(&inv)["rot"].as_i64()), (Some(-7), Some(0)));
    let (code, sum, _) = legcost(&["sum", p.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(code, 0);
    let sm = tmp("sum.front", &sum);
    let (_, inv, _) = legcost(&["invariants", sm.to_str().unwrap()]);
    assert_eq!((json(&inv)["tb"].as_i64(), json(&inv)["rot"].as_i64()), (Some(-12), Some(1)));
    let (code, e, _) = legcost(&["gen", "e", "2,3"]);
    assert_eq!(code, 0);
    assert!(e.starts_with("L1 L3"));
}

#[test]
fn isotopy_and_cost() {
    let a = tmp("a.front", "L1 R1");
    let b = tmp("b.front", "L1 L1 R2 R1");
    let (code, out, _) = legcost(&["cost", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["kind"].as_str(), v["value"].as_u64()), (Some("Exact"), Some(1)));
    let (_, out, _) = legcost(&["isotopy", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(json(&out)["status"], "distinct");
    let t = tmp("t.front", "L1 L3 X2 X2 X2 R1 R1");
    let (_, st, _) = legcost(&["stabilize", t.to_str().unwrap(), "--sign", "+"]);
    let (_, st2, _) = legcost(&["stabilize", t.to_str().unwrap(), "--sign", "+", "--site", "6"]);
    let (x, y) = (tmp("x.front", &st), tmp("y.front", &st2));
    let (code, out, _) = legcost(&["isotopy", x.to_str().unwrap(), y.to_str().unwrap(), "--max-states", "2", "--threads", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["status"], "unknown");
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(legcost(&["bogus"]).0, 2);
    assert_eq!(legcost(&["graph", "--floor", "-3"]).0, 2);
    assert_eq!(legcost(&["stabilize", "x", "--sign", "*"]).0, 2);
    assert_eq!(legcost(&["invariants", "/nonexistent/file.front"]).0, 1);
    let bad = tmp("bad.front", "L1 L1 R1 R1");
    let (code, _, err) = legcost(&["invariants", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("components"));
    let (code, out, _) = legcost(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["invariants", "stabilize", "sum", "isotopy", "cost", "cost-simple", "gen", "graph", "verify"] {
        assert!(out.contains(sub), "{sub}");
    }
}
