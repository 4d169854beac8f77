use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fsig_core::rational::{parse_rational, to_fraction_string};
use serde_json::Value;
use tempfile::TempDir;

fn write_spec(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, json).unwrap();
    path
}

fn fsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsig")).args(args).output().expect("binary runs")
}

fn run(cmd: &str, spec: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--spec", spec.to_str().unwrap()];
    args.extend_from_slice(extra);
    fsig(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_of(cmd: &str, spec: &Path, extra: &[&str]) -> Value {
    let mut args = extra.to_vec();
    args.push("--json");
    let o = run(cmd, spec, &args);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

const QUADRIC: &str = r#"{"ring":{"type":"hypersurface","equation":"x*y - z*w","p":3},"options":{"e_max":3}}"#;

#[test]
fn quadric_table_decreases_toward_two_thirds() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "quadric", QUADRIC);
    let o = run("compute", &spec, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    for row in ["19/27", "163/243", "1459/2187", "0.703704", "0.670782", "0.667124"] {
        assert!(text.contains(row), "missing {row} in\n{text}");
    }
    let report = json_of("compute", &spec, &[]);
    assert_eq!(report["backend"], "sequence");
    let a: Vec<u64> = report["sequence"]["records"].as_array().unwrap().iter().map(|r| r["a_e"].as_u64().unwrap()).collect();
    assert_eq!(a, [19, 489, 13131]);
    assert_eq!(report["sequence"]["estimate"]["inverse_q_model_consistent"], false);
}

#[test]
fn regular_ring_table_is_constant_one() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "regular", r#"{"ring":{"type":"regular","nvars":2,"p":5},"options":{"e_max":3}}"#);
    let report = json_of("compute", &spec, &["--backend", "sequence"]);
    for r in report["sequence"]["records"].as_array().unwrap() {
        assert_eq!(r["normalized"], "1/1");
    }
    let auto = json_of("compute", &spec, &[]);
    assert_eq!(auto["backend"], "toric_exact");
    assert_eq!(auto["s"], "1/1");
    let bounds = json_of("bounds", &spec, &[]);
    assert_eq!(bounds["bound"]["bound"], 1);
}

#[test]
fn toric_backend_prints_one_exact_line() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "q3", r#"{"ring":{"type":"quotient","n":3,"weights":[1,1],"p":5}}"#);
    let o = run("compute", &spec, &["--backend", "toric"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("s = 1/3 (0.333333)"), "{text}");
}

#[test]
fn toric_backend_without_toric_model_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "quadric", QUADRIC);
    let o = run("compute", &spec, &["--backend", "toric"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("backend"));
}

#[test]
fn a1_double_cover_passes_all_checks() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "a1", r#"{"cover":{"type":"quotient_cover","n":2,"weights":[1,1],"p":3,"degree":2}}"#);
    let report = json_of("verify", &spec, &[]);
    assert_eq!(report["all_pass"], true);
    assert_eq!(report["transformation"]["lhs"], "1/1");
    assert_eq!(report["doubling"]["equality"], true);
    assert_eq!(report["trace_summands"], 1);
}

#[test]
fn root_cover_with_half_boundary_passes() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "root", r#"{"cover":{"type":"root_cover","n":2,"along":"x0","p":5,"pair_t":"1/2"}}"#);
    let report = json_of("verify", &spec, &[]);
    assert_eq!(report["all_pass"], true);
    assert_eq!(report["transformation"]["s_lower"], "1/2");
    assert_eq!(report["transformation"]["delta_y"]["facet_coeffs"], serde_json::json!(["0/1", "0/1"]));
}

#[test]
fn wrong_claimed_degree_exits_4() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "bad", r#"{"cover":{"type":"quotient_cover","n":2,"weights":[1,1],"p":3,"degree":3}}"#);
    let o = run("verify", &spec, &[]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("degree mismatch"), "{}", stderr(&o));
    assert!(stdout(&o).contains("claimed 3, actual 2"));
}

#[test]
fn ramified_cover_without_boundary_names_the_facet() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "ram", r#"{"cover":{"type":"root_cover","n":3,"along":"x1","p":5}}"#);
    let o = run("verify", &spec, &[]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("facet 1"), "{}", stderr(&o));
}

#[test]
fn p_dividing_group_order_exits_2() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "pn", r#"{"ring":{"type":"quotient","n":6,"weights":[1,5],"p":3}}"#);
    for cmd in ["compute", "bounds", "chain"] {
        let o = run(cmd, &spec, &[]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(stderr(&o).contains("ring.n"), "{}", stderr(&o));
    }
}

#[test]
fn schema_errors_name_the_field() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"{"ring":{"type":"quotient","n":3,"weigts":[1,1],"p":5}}"#, "weigts"),
        (r#"{"ring":{"type":"regular","nvars":2,"p":4}}"#, "ring.p"),
        (r#"{"ring":{"type":"quotient","n":3,"weights":[1,1],"p":5},"pair":{"facet_coeffs":["0.5","0"]}}"#, "pair.facet_coeffs[0]"),
        (r#"{"ring":{"type":"hypersurface","equation":"x*y -* z","p":5}}"#, "ring.equation"),
        (r#"{"options":{}}"#, "ring"),
    ];
    for (i, (json, field)) in cases.iter().enumerate() {
        let spec = write_spec(dir.path(), &format!("s{i}"), json);
        let o = run("compute", &spec, &[]);
        assert_eq!(o.status.code(), Some(2), "{json}");
        assert!(stderr(&o).contains(field), "{json}: {}", stderr(&o));
    }
    let o = fsig(&["compute", "--spec", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_3() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "quadric", QUADRIC);
    let o = run("compute", &spec, &["--budget", "1e-9"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn chain_over_one_eighth_has_four_rows() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "q8", r#"{"ring":{"type":"quotient","n":8,"weights":[1,7],"p":3}}"#);
    let o = run("chain", &spec, &[]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = text.lines().filter(|l| l.starts_with("mu_")).count();
    assert_eq!(rows, 4, "{text}");
    let report = json_of("chain", &spec, &[]);
    let chains = report["chains"].as_array().unwrap();
    assert_eq!(chains.len(), 1);
    assert_eq!(chains[0]["orders"], serde_json::json!([8, 4, 2, 1]));
    assert_eq!(chains[0]["stabilization_index"], 3);
    assert_eq!(report["all_pass"], true);
}

#[test]
fn purity_reports_covers_for_toric_rings() {
    let dir = TempDir::new().unwrap();
    let a1 = write_spec(dir.path(), "a1", r#"{"ring":{"type":"quotient","n":2,"weights":[1,1],"p":5}}"#);
    let report = json_of("purity", &a1, &[]);
    assert_eq!(report["covers_found"], serde_json::json!([2]));
    assert_eq!(report["verdict"]["purity_forced"], false);
    let segre = write_spec(dir.path(), "segre", r#"{"ring":{"type":"toric","rays":[[1,0,0],[0,1,0],[0,0,1],[1,1,-1]],"p":3}}"#);
    let report = json_of("purity", &segre, &[]);
    assert_eq!(report["verdict"]["s"], "2/3");
    assert_eq!(report["verdict"]["purity_forced"], true);
    assert_eq!(report["covers_found"], serde_json::json!([]));
}

fn collect_fractions(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) if s.contains('/') => out.push(s.clone()),
        Value::Array(a) => a.iter().for_each(|x| collect_fractions(x, out)),
        Value::Object(m) => m.values().for_each(|x| collect_fractions(x, out)),
        _ => {}
    }
}

#[test]
fn reports_round_trip_and_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let specs = [
        ("compute", write_spec(dir.path(), "quadric", QUADRIC)),
        ("verify", write_spec(dir.path(), "root", r#"{"cover":{"type":"root_cover","n":3,"along":"x0","p":7,"pair_t":"2/3"}}"#)),
        ("chain", write_spec(dir.path(), "q12", r#"{"ring":{"type":"quotient","n":12,"weights":[1,5],"p":5}}"#)),
        ("bounds", write_spec(dir.path(), "q5", r#"{"ring":{"type":"quotient","n":5,"weights":[1,2],"p":3}}"#)),
    ];
    for (cmd, spec) in &specs {
        let out_a = dir.path().join(format!("{cmd}-a.json"));
        let out_b = dir.path().join(format!("{cmd}-b.json"));
        assert!(run(cmd, spec, &["--out", out_a.to_str().unwrap()]).status.success());
        assert!(run(cmd, spec, &["--out", out_b.to_str().unwrap()]).status.success());
        let a = std::fs::read(&out_a).unwrap();
        assert_eq!(a, std::fs::read(&out_b).unwrap(), "{cmd} report not byte-identical");
        assert!(dir.path().join(format!("{cmd}-a.json.timing.json")).exists());

        let value: Value = serde_json::from_slice(&a).unwrap();
        assert!(value.get("elapsed_secs").is_none());
        let reparsed: Value = serde_json::from_str(&serde_json::to_string(&value).unwrap()).unwrap();
        assert_eq!(reparsed, value);
        let mut fractions = Vec::new();
        collect_fractions(&value, &mut fractions);
        assert!(!fractions.is_empty());
        for f in fractions {
            let r = parse_rational(&f).unwrap();
            assert_eq!(to_fraction_string(&r), f);
        }
    }
}

#[test]
fn golden_files_are_created_then_compared() {
    let dir = TempDir::new().unwrap();
    let golden = dir.path().join("golden");
    let spec = write_spec(dir.path(), "q3", r#"{"ring":{"type":"quotient","n":3,"weights":[1,2],"p":2}}"#);
    let g = golden.to_str().unwrap();
    assert!(run("compute", &spec, &["--golden", g]).status.success());
    let file = golden.join("compute-q3.json");
    assert!(file.exists());
    assert!(run("compute", &spec, &["--golden", g]).status.success());

    std::fs::write(&file, std::fs::read_to_string(&file).unwrap().replace("1/3", "1/4")).unwrap();
    let o = run("compute", &spec, &["--golden", g]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("golden"));
}
