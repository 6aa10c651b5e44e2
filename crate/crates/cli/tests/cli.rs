use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ncprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncprob")).current_dir(root()).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ncprob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn enumerates_nc4() {
    let o = ncprob(&["nc", "enum", "--n", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["count"], 14);
    assert_eq!(v["partitions"].as_array().unwrap().len(), 14);
    assert!(stdout(&ncprob(&["nc", "enum", "--n", "4"])).ends_with("14 partitions\n"));
}

#[test]
fn mobius_and_kreweras() {
    let o = ncprob(&["nc", "mobius", "--n", "3", "--lower", "[[1],[2],[3]]", "--upper", "[[1,2,3]]"]);
    assert_eq!(stdout(&o).trim(), "2/1");
    let o = ncprob(&["nc", "kreweras", "--n", "4", "--pi", "[[1,2],[3],[4]]"]);
    assert_eq!(stdout(&o).trim(), "[[1],[2,3,4]]");
    let o = ncprob(&["nc", "kreweras", "--n", "4", "--pi", "[[1,3],[2,4]]"]);
    assert_eq!(o.status.code(), Some(2), "crossing input is rejected");
}

#[test]
fn compat_on_tower3_passes() {
    let o = ncprob(&["verify", "compat", "--ctx", "fixtures/tower3.json", "--k", "1", "--i", "2", "--j", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&ncprob(&["verify", "compat", "--ctx", "fixtures/tower3.json", "--k", "1", "--i", "2", "--j", "3", "--format", "json"]));
    assert_eq!(v["pass"], true);
    assert!(v["checks"][0]["lhs"].is_array());
}

#[test]
fn aliases_reach_the_level_verifiers() {
    assert_eq!(ncprob(&["verify", "thm210", "--ctx", "fixtures/levels-free.json"]).status.code(), Some(0));
    assert_eq!(ncprob(&["verify", "levels", "--ctx", "fixtures/levels-dependent.json"]).status.code(), Some(1));
    assert_eq!(ncprob(&["verify", "thm214", "--ctx", "fixtures/amalgamated-free.json"]).status.code(), Some(0));
    assert_eq!(ncprob(&["verify", "amalgamated-levels", "--ctx", "fixtures/amalgamated-dependent.json"]).status.code(), Some(1));
}

#[test]
fn ladder_perturbation_is_reported() {
    assert_eq!(ncprob(&["ladder", "verify", "--file", "fixtures/ladder-diagonal.json"]).status.code(), Some(0));
    assert_eq!(ncprob(&["ladder", "verify", "--file", "fixtures/ladder-perturbed.json"]).status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(ncprob(&["nc", "enum"]).status.code(), Some(2));
    assert_eq!(ncprob(&["verify", "compat", "--ctx", "no-such-file.json"]).status.code(), Some(2));
    let bad = tmp("bad-algebra.json");
    // the span of a nilpotent has no unit
    std::fs::write(&bad, r#"{"ambient_size": 2, "basis": [["0","1","0","0"]]}"#).unwrap();
    assert_eq!(ncprob(&["alg", "verify", "--file", bad.to_str().unwrap()]).status.code(), Some(3));
    let garbled = tmp("garbled.json");
    std::fs::write(&garbled, "{").unwrap();
    assert_eq!(ncprob(&["alg", "verify", "--file", garbled.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn diagonal_algebra_verifies() {
    let f = tmp("d2.json");
    std::fs::write(&f, r#"{"ambient_size": 2, "basis": [["1","0","0","0"], ["0","0","0","1"]]}"#).unwrap();
    assert_eq!(ncprob(&["alg", "verify", "--file", f.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn tower_compose_shapes() {
    let v = json(&ncprob(&["tower", "compose", "--file", "fixtures/tower3.json", "--k", "1", "--j", "3", "--format", "json"]));
    assert_eq!(v["target_dim"], 2);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 2);
    assert_eq!(ncprob(&["tower", "compose", "--file", "fixtures/tower3.json", "--k", "3", "--j", "1"]).status.code(), Some(2));
}

fn scalar_series(path: &Path, kind: &str, values: &[&str]) {
    let entries: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, v)| format!(r#"{{"word": [{}], "at": [{}], "value": ["{v}"]}}"#, vec!["1"; i + 1].join(","), vec!["1"; i].join(",")))
        .collect();
    let body = format!(
        r#"{{"kind": "{kind}", "family": {{"s": 1, "degree": {}, "base": {{"ambient_size": 1, "basis": [["1"]]}}, "entries": [{}]}}}}"#,
        values.len(),
        entries.join(",")
    );
    std::fs::write(path, body).unwrap();
}

#[test]
fn scalar_boxconv_of_degree_one_multiplies() {
    let (f, g) = (tmp("f.json"), tmp("g.json"));
    scalar_series(&f, "rtransform", &["2/3"]);
    scalar_series(&g, "rtransform", &["-3/5"]);
    let o = ncprob(&["series", "boxconv", "--scalar", "--left", f.to_str().unwrap(), "--right", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["family"]["entries"][0]["value"][0], "-2/5");
}

#[test]
fn moments_and_cumulants_round_trip_through_files() {
    let (m, c, back) = (tmp("m.json"), tmp("c.json"), tmp("back.json"));
    // semicircle moments 0, 1, 0, 2
    scalar_series(&m, "moment", &["0", "1", "0", "2"]);
    let fam: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    std::fs::write(&m, fam["family"].to_string()).unwrap();
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    assert_eq!(ncprob(&["mc", "m2c", "--in", &s(&m), "--out", &s(&c)]).status.code(), Some(0));
    let cum: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&c).unwrap()).unwrap();
    let entries = cum["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1, "only κ₂ survives: {entries:?}");
    assert_eq!(entries[0]["word"], serde_json::json!([1, 1]));
    assert_eq!(ncprob(&["mc", "c2m", "--in", &s(&c), "--out", &s(&back)]).status.code(), Some(0));
    let again: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    let nonzero: Vec<_> = again["entries"].as_array().unwrap().iter().map(|e| (e["word"].clone(), e["value"][0].clone())).collect();
    assert_eq!(nonzero, vec![(serde_json::json!([1, 1]), serde_json::json!("1/1")), (serde_json::json!([1, 1, 1, 1]), serde_json::json!("2/1"))]);
    let o = ncprob(&["mc", "eval", "--in", &s(&c), "--pi", "[[1,4],[2,3]]", "--word", "1,1,1,1"]);
    assert_eq!(stdout(&o).trim(), "[1/1]");
}

#[test]
fn dist_commands() {
    let spec = "fixtures/compress-b1-a1.json";
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(root().join(spec)).unwrap()).unwrap();
    let s = tmp("spec.json");
    std::fs::write(&s, doc["spec"].to_string()).unwrap();
    let s = s.to_str().unwrap();
    let o = ncprob(&["dist", "arefree", "--spec", s, "--groups", "x1;y1;p", "--format", "json"]);
    assert_eq!(json(&o)["free"], true);
    let o = ncprob(&["dist", "moment", "--spec", s, "--word", "p,p"]);
    assert_eq!(stdout(&o).trim(), "[1/1]");
    let o = ncprob(&["dist", "adjoinproj", "--spec", s, "--alpha", "1/2", "--label", "q"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["labels"].as_array().unwrap().last().unwrap(), "q");
    assert_eq!(ncprob(&["dist", "adjoinproj", "--spec", s, "--alpha", "0"]).status.code(), Some(1));
}

#[test]
fn fixtures_on_disk_match_the_generators() {
    let o = ncprob(&["fixtures", "check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn quick_selftest_is_deterministic() {
    let a = ncprob(&["selftest", "--quick", "--format", "json"]);
    let b = ncprob(&["selftest", "--quick", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupted_fixture_exits_3() {
    let dir = tmp("corrupt");
    std::fs::create_dir_all(&dir).unwrap();
    for e in std::fs::read_dir(root().join("fixtures")).unwrap() {
        let e = e.unwrap();
        std::fs::copy(e.path(), dir.join(e.file_name())).unwrap();
    }
    std::fs::write(dir.join("tower3.json"), "{\"levels\": 3").unwrap();
    let o = ncprob(&["selftest", "--quick", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}
