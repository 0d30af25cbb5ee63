use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ripscollapse")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(args: &[&str]) -> (Value, Option<i32>) {
    let mut all = vec!["--json", "-"];
    all.extend_from_slice(args);
    let out = run(&all);
    let value: Value = serde_json::from_slice(&out.stdout).expect("valid JSON report");
    (value, out.status.code())
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let args = ["verify", "theorem2", "--seed", "5", "--n", "6"];
    let (mut a, code_a) = json(&args);
    let (mut b, code_b) = json(&args);
    assert_eq!(code_a, Some(0));
    assert_eq!(code_a, code_b);
    for v in [&mut a, &mut b] {
        v.as_object_mut().unwrap().remove("wall_time_ms");
    }
    assert_eq!(a, b);
    assert_eq!(a["passed"], Value::Bool(true));
    assert!(a["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn report_schema_fields() {
    let (v, code) = json(&["analyze", &data("counterexample.txt")]);
    assert_eq!(code, Some(0));
    for key in ["command", "input_digest", "parameters", "results", "assertions", "passed", "wall_time_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["results"]["delta"]["value"]["exact"], "1");
    assert_eq!(v["results"]["nu"]["value"]["exact"], "5");
    assert_eq!(v["results"]["threshold"]["exact"], "14");
}

#[test]
fn json_file_and_text_together() {
    let dir = std::env::temp_dir().join(format!("ripscollapse-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&["--json", path.to_str().unwrap(), "verify", "h1-surjectivity", "--seed", "2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[PASS]"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analyze", &data("counterexample.txt")]).status.code(), Some(0));
    let fail = run(&["verify", "apparent-collapse", &data("counterexample.txt"), "--u", "15", "--t", "14"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("[FAIL]"));
    assert_eq!(run(&["analyze", "no/such/file.txt"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "tree", "analyze", &data("counterexample.txt")]).status.code(), Some(2));
    assert_eq!(run(&["--budget", "5", "vr", &data("counterexample.txt")]).status.code(), Some(3));
}

#[test]
fn json_report_on_error() {
    let (v, code) = json(&["analyze", "no/such/file.txt"]);
    assert_eq!(code, Some(2));
    assert_eq!(v["passed"], Value::Bool(false));
    assert!(v["results"]["error"].as_str().unwrap().contains("no/such/file.txt"));
}

#[test]
fn gen_is_deterministic_and_loadable() {
    let a = run(&["gen", "random-tree", "--n", "5", "--seed", "1"]);
    let b = run(&["gen", "random-tree", "--n", "5", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().filter(|l| !l.starts_with("root")).count(), 4);
    let other = run(&["gen", "random-tree", "--n", "5", "--seed", "2"]);
    assert_ne!(a.stdout, other.stdout);

    let dir = std::env::temp_dir().join(format!("ripscollapse-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("metric.txt");
    let out = run(&["gen", "random-metric", "--n", "4", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["analyze", path.to_str().unwrap()]).status.code(), Some(0));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn gen_grid_sample_checks_its_defect() {
    let out = run(&["gen", "grid-sample-of-tree", "--n", "3", "--seed", "4", "--high", "3", "--step", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[PASS] geodesic defect"));
}

#[test]
fn gen_rejects_bad_parameters() {
    assert_eq!(run(&["gen", "random-tree", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "random-tree", "--low", "5", "--high", "2"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "grid-sample-of-tree", "--step", "0"]).status.code(), Some(2));
}

#[test]
fn vr_dump_is_sorted_by_diameter() {
    let out = run(&["vr", &data("counterexample.txt"), "--t", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let diameters: Vec<i64> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.rsplit(" : ").next().unwrap().parse().unwrap())
        .collect();
    assert!(diameters.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(diameters.last(), Some(&5));
}

#[test]
fn perturbed_gradient_of_unit_star() {
    let (v, code) = json(&["--format", "tree", "gradient", &data("unit_star.tree"), "--kind", "perturbed", "--order", "compatible"]);
    assert_eq!(code, Some(0));
    let intervals: Vec<(String, String)> = v["results"]["intervals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_str().unwrap().to_string(), p[1].as_str().unwrap().to_string()))
        .collect();
    let want = [("{a,c}", "{a,b,c}"), ("{a,d}", "{a,b,d}"), ("{c,d}", "{a,b,c,d}")];
    assert_eq!(intervals.len(), 3);
    for (rho, phi) in want {
        assert!(intervals.contains(&(rho.to_string(), phi.to_string())), "missing [{rho}, {phi}]");
    }
}

#[test]
fn generic_gradient_needs_distinct_distances() {
    let out = run(&["--format", "tree", "gradient", &data("unit_star.tree"), "--kind", "generic"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reverse_compatible_persistence_needs_no_additions() {
    let (v, code) = json(&["--format", "tree", "persistence", &data("generic_tree.tree"), "--order", "reverse-compatible", "--max-degree", "2"]);
    assert_eq!(code, Some(0));
    let per_degree = v["results"]["stats"]["per_degree"].as_array().unwrap();
    for d in &per_degree[1..] {
        assert_eq!(d["additions"], 0);
    }
    assert!(v["results"]["barcode"][1].as_array().unwrap().is_empty());
}

#[test]
fn counterexample_persistence_reports_critical_columns_at_15() {
    let (v, _) = json(&["persistence", &data("counterexample.txt")]);
    assert!(v["results"]["barcode"][1].as_array().unwrap().is_empty());
    let by_level = &v["results"]["stats"]["per_degree"][1]["non_apparent_by_level"];
    assert!(by_level["15"].as_u64().unwrap() >= 1);
}

#[test]
fn collapse_to_point_and_forest() {
    let out = run(&["collapse", &data("counterexample.txt"), "--kind", "filtered-cone", "--target", "point"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = run(&["--format", "tree", "collapse", &data("generic_tree.tree"), "--kind", "canonical", "--target", "forest", "--u", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn verify_rejects_incompatible_orders_unless_allowed() {
    let args = ["--format", "tree", "verify", "theorem2", &data("generic_tree.tree"), "--vertex-order", "d,c,b,a"];
    assert_eq!(run(&args).status.code(), Some(2));
    let mut allowed = args.to_vec();
    allowed.push("--allow-incompatible");
    assert!(matches!(run(&allowed).status.code(), Some(0 | 1)));
}

#[test]
fn order_command() {
    let out = run(&["--format", "tree", "order", &data("generic_tree.tree"), "--root", "d"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let order: Vec<&str> = text.lines().last().unwrap().split(' ').collect();
    assert_eq!(order.first(), Some(&"d"));
    assert_eq!(order.get(1), Some(&"b"));
}

#[test]
fn every_tree_pipeline_passes_on_a_generated_instance() {
    for pipeline in ["theorem1", "theorem2", "canonical", "perturbed", "generic", "refinement", "h1-surjectivity"] {
        let out = run(&["verify", pipeline, "--seed", "7", "--n", "6"]);
        assert_eq!(out.status.code(), Some(0), "{pipeline}: {}", stdout(&out));
    }
}
