use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use kcontact::cli::run_with;

struct Run {
    code: i32,
    out: String,
    err: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.out).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.out))
    }
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kcontact").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.display().to_string()
}

fn example(dir: &Path, k: &str) -> String {
    let r = run(&["construct", "example", "--k", k]);
    assert_eq!(r.code, 0, "{}", r.err);
    write(dir, &format!("example_k{k}.json"), &r.json())
}

#[test]
fn documented_examples() {
    let dir = tempfile::tempdir().unwrap();
    let f = example(dir.path(), "2");
    let r = run(&["validate", &f]);
    assert_eq!((r.code, r.json()), (0, json!({"is_good": true})));
    let r = run(&["invariants", &f, "--face", "1"]);
    assert_eq!((r.code, r.json()), (0, json!({"b": 2, "f": 0, "blowdown": false})));
    let r = run(&["blowdown", &f, "--face", "1"]);
    assert_eq!(r.code, 1);
    let rep = r.json();
    assert_eq!(rep["blowdown"], json!(false));
    assert_eq!(rep["delzant_pair"], json!(false));
    assert!(r.err.contains("DelzantPair"), "{}", r.err);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"normals\": [[1, 0, 0],\n  [0, 1 0]]}").unwrap();
    let r = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("bad.json:2:"), "{}", r.err);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["invariants"]).code, 2);
    assert_eq!(run(&["validate", "/nonexistent/x.json"]).code, 2);
    assert_eq!(run(&["toric-check", "--vmin", "1,0", "--vmax", "1"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
    let notgood = write(dir.path(), "ng.json", &json!({"normals": [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]}));
    let r = run(&["validate", &notgood]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["is_good"], json!(false));
}

#[test]
fn reeb_commands() {
    let dir = tempfile::tempdir().unwrap();
    let f = example(dir.path(), "2");
    let r = run(&["rank", &f]);
    assert_eq!(r.json(), json!({"rank": 2, "admissible": true}));
    let r = run(&["profile", &f]);
    assert_eq!(r.json()["flats"], json!([0, 3]));
    let r = run(&["graph", &f]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["nontrivial_chains"], json!(1));
    let r = run(&["euler-check", &f]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.json()["ok"], json!(true));
    // a Reeb ray without "d" picks up --d
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    doc["reeb"].as_object_mut().unwrap().remove("d");
    let g = write(dir.path(), "nod.json", &doc);
    let r = run(&["--d", "3", "profile", &g]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.json()["polygon"][0][0]["d"], json!(3), "{}", r.out);
    let simplex = write(dir.path(), "s.json", &json!({"normals": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}));
    assert_eq!(run(&["rank", &simplex]).code, 2);
}

#[test]
fn surgery_commands() {
    let dir = tempfile::tempdir().unwrap();
    let simplex = write(dir.path(), "s.json", &json!({"normals": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}));
    let r = run(&["blowup", &simplex, "--t", "-1,1,1"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let out = r.json();
    assert_eq!(out["kind"], json!({"orbit_blowup": 1}));
    let big = write(dir.path(), "big.json", &out["cone"]);
    let r = run(&["blowdown", &big, "--face", &out["inserted"].to_string()]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.json()["cone"], json!({"normals": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}));
    assert_eq!(run(&["blowup", &simplex, "--t", "0,1,1"]).code, 1);

    let f = example(dir.path(), "3");
    let r = run(&["plan", &f, "--keep", "0,4,5"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let out = r.json();
    assert_eq!(out["result"]["normals"].as_array().unwrap().len(), 4);
    let plan = write(dir.path(), "plan.json", &out["plan"]);
    let r = run(&["plan", &f, "--replay", &plan]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.json()["result"], out["result"]);
    let mut tampered = out["plan"].clone();
    tampered[0]["post"] = json!("00");
    let tp = write(dir.path(), "tampered.json", &tampered);
    let r = run(&["plan", &f, "--replay", &tp]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("step 0"), "{}", r.err);

    let reduced = write(dir.path(), "reduced.json", &out["result"]);
    let r = run(&["blowdown", &reduced, "--face", "1", "--find", "--v0", "1,2,-1", "--value", "1"]);
    assert_eq!(r.code, 0, "{}", r.err);
}

#[test]
fn construct_and_close() {
    let a = run(&["construct", "obstructed", "--k", "4", "--seed", "9"]);
    let b = run(&["construct", "obstructed", "--k", "4", "--seed", "9"]);
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    assert_eq!(a.json()["steps"].as_array().unwrap().len(), 4);
    assert_eq!(run(&["construct", "example", "--k", "1"]).code, 1);

    let dir = tempfile::tempdir().unwrap();
    let chain = write(dir.path(), "chain.json", &json!([[0, 1, 0], [-1, 1, 1], [0, 0, 1]]));
    let r = run(&["close", &chain]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.json()["cone"]["normals"].as_array().unwrap().len(), 4);

    let r = run(&["toric-check", "--vmin", "1,0", "--vmax", "-1,1"]);
    assert_eq!(r.json(), json!({"v": [0, 1]}));
    let r = run(&["toric-check", "--vmin", "1,0", "--vmax", "1,3"]);
    assert_eq!((r.code, r.json()), (0, json!({"v": null})));
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = example(dir.path(), "2");
    let out = dir.path().join("k2.svg");
    let r = run(&["render", &f, "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    let first = fs::read_to_string(&out).unwrap();
    run(&["render", &f, "--out", out.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(&out).unwrap(), first);
    assert_eq!(first.matches("<line").count(), 5);
    let r = run(&["render", &f]);
    assert_eq!(r.out, first);

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    for key in ["p", "q"] {
        let flipped: Vec<Value> = doc["reeb"][key]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| json!(format!("-{}", x.as_str().unwrap()).replace("--", "")))
            .collect();
        doc["reeb"][key] = json!(flipped);
    }
    let g = write(dir.path(), "neg.json", &doc);
    assert_eq!(run(&["render", &g]).code, 1);
}

#[test]
fn catalog() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    let s = store.to_str().unwrap();
    let r = run(&["catalog", "list", "--store", s]);
    assert_eq!((r.code, r.json()), (0, json!([])));
    let f = example(dir.path(), "2");
    let r = run(&["catalog", "add", &f, "--store", s]);
    assert_eq!(r.code, 0, "{}", r.err);
    let hash = r.json()["hash"].as_str().unwrap().to_string();
    let r = run(&["catalog", "get", &hash, "--store", s]);
    let original: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(r.json(), original);
    assert_eq!(run(&["catalog", "list", "--store", s]).json().as_array().unwrap().len(), 1);
    let bad = write(dir.path(), "bad.json", &json!({"normals": [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]}));
    let r = run(&["catalog", "add", &bad, "--store", s]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["is_good"], json!(false));
    assert_eq!(run(&["catalog", "get", "abc123", "--store", s]).code, 1);
}
