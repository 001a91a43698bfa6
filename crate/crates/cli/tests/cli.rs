use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const THREE_LEAF_TREES: &str = "a,b,c
0.69089925,7.022836,7.022836
0.53495974,1.641369,1.641369
0.02082164,3.101557,3.101557
0.23519336,3.968678,3.968678
0.19730562,5.960980,5.960980
0.73804678,1.090399,1.090399
";

fn tropca(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropca")).args(args).current_dir(dir).output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = tropca(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read_json(p: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn without_duration(mut v: Value) -> Value {
    v["manifest"].as_object_mut().unwrap().remove("duration_seconds");
    v
}

#[test]
fn simulate_writes_one_tree_per_line() {
    let d = TempDir::new().unwrap();
    ok(&["simulate", "--n", "250", "--leaves", "8", "--mode", "msc", "--seed", "7", "--out", "g.nwk"], d.path());
    let nwk = std::fs::read_to_string(d.path().join("g.nwk")).unwrap();
    assert_eq!(nwk.lines().count(), 250);
    let trees = tropca::parse_newick_lines(&nwk).unwrap();
    assert!(trees.iter().all(|t| t.num_leaves() == 8 && t.cophenetic().ultrametric));
    let csv = std::fs::read_to_string(d.path().join("g.csv")).unwrap();
    assert_eq!(csv.lines().count(), 251);
    assert!(csv.starts_with("pair:a-b,pair:a-c,"));
}

#[test]
fn simulate_single_small_tree() {
    let d = TempDir::new().unwrap();
    ok(&["simulate", "--n", "1", "--leaves", "3", "--out", "t.nwk"], d.path());
    let t = tropca::parse_newick(std::fs::read_to_string(d.path().join("t.nwk")).unwrap().trim()).unwrap();
    assert_eq!(t.num_leaves(), 3);
    assert!(t.cophenetic().ultrametric);
}

#[test]
fn simulate_is_byte_identical_per_seed() {
    let d = TempDir::new().unwrap();
    for out in ["x.nwk", "y.nwk"] {
        ok(&["simulate", "--n", "20", "--mode", "kingman", "--seed", "3", "--out", out], d.path());
    }
    let read = |n: &str| std::fs::read(d.path().join(n)).unwrap();
    assert_eq!(read("x.nwk"), read("y.nwk"));
    assert_eq!(read("x.csv"), read("y.csv"));
}

#[test]
fn simulate_rejects_bad_flags() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&tropca(&["simulate", "--n", "many", "--out", "x.nwk"], d.path())), 2);
    assert_eq!(code(&tropca(&["simulate", "--n", "5", "--leaves", "1", "--out", "x.nwk"], d.path())), 2);
    let out = tropca(&["simulate", "--n", "5", "--out", "missing/dir/x.nwk"], d.path());
    assert_eq!(code(&out), 1);
}

#[test]
fn polytope_enumeration_fits_three_leaf_trees_exactly() {
    let d = TempDir::new().unwrap();
    write(d.path(), "trees.csv", THREE_LEAF_TREES);
    ok(&["pca", "--input", "trees.csv", "--method", "polytope", "--mode", "enumerate", "--out", "fit"], d.path());
    let v = read_json(d.path().join("fit/fit.json"));
    assert!(v["result"]["total_distance"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["result"]["model"]["kind"], "polytope");
    assert_eq!(v["manifest"]["command"], "pca");
    assert_eq!(v["manifest"]["seed"], 0);
    let proj = std::fs::read_to_string(d.path().join("fit/projections.csv")).unwrap();
    assert_eq!(proj.lines().count(), 7);
    assert!(proj.starts_with("a,b,c\n"));
}

fn simulated(d: &Path, n: &str) {
    ok(&["simulate", "--n", n, "--seed", "5", "--out", "g.nwk"], d);
}

#[test]
fn stiefel_dominates_polytope_on_the_same_proposals() {
    let d = TempDir::new().unwrap();
    simulated(d.path(), "12");
    for mode in ["enumerate", "sample"] {
        let mut totals = Vec::new();
        for method in ["stiefel", "polytope"] {
            let out = format!("{method}-{mode}");
            // With the window above the iteration cap both searches see the
            // same sequence of proposals.
            ok(
                &["pca", "--input", "g.nwk", "--method", method, "--mode", mode, "--seed", "9", "--window", "500",
                  "--max-iter", "200", "--out", &out],
                d.path(),
            );
            totals.push(read_json(d.path().join(out).join("fit.json"))["result"]["total_distance"].as_f64().unwrap());
        }
        assert!(totals[0] <= totals[1] + 1e-9, "{mode}: {totals:?}");
    }
}

#[test]
fn pca_is_deterministic_apart_from_duration() {
    let d = TempDir::new().unwrap();
    simulated(d.path(), "30");
    for out in ["a", "b"] {
        ok(&["pca", "--input", "g.nwk", "--method", "polytope", "--seed", "4", "--out", out], d.path());
    }
    let a = without_duration(read_json(d.path().join("a/fit.json")));
    let mut b = without_duration(read_json(d.path().join("b/fit.json")));
    b["manifest"]["config"]["out"] = a["manifest"]["config"]["out"].clone();
    assert_eq!(a, b);
    for f in ["projections.csv", "topologies.csv", "projection_topologies.csv"] {
        assert_eq!(std::fs::read(d.path().join("a").join(f)).unwrap(), std::fs::read(d.path().join("b").join(f)).unwrap());
    }
}

#[test]
fn tree_input_writes_topology_tables() {
    let d = TempDir::new().unwrap();
    simulated(d.path(), "25");
    ok(&["pca", "--input", "g.nwk", "--method", "polytope", "--out", "fit"], d.path());
    let table = std::fs::read_to_string(d.path().join("fit/topologies.csv")).unwrap();
    let input: usize = table.lines().filter(|l| l.starts_with("input,")).map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum();
    let projected: usize = table.lines().filter(|l| l.starts_with("projected,")).map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(input, 25);
    // Polytopes with ultrametric vertices project onto ultrametrics.
    assert_eq!(projected, 25);
}

#[test]
fn exclusions_drop_rows_and_keep_input_indices() {
    let d = TempDir::new().unwrap();
    simulated(d.path(), "10");
    write(d.path(), "skip.txt", "# outliers\n0\n3\n\n7\n");
    ok(&["pca", "--input", "g.nwk", "--method", "stiefel", "--mode", "enumerate", "--exclude", "skip.txt", "--out", "fit"], d.path());
    let v = read_json(d.path().join("fit/fit.json"));
    assert_eq!(v["excluded"], serde_json::json!([0, 3, 7]));
    assert_eq!(v["result"]["distances"].as_array().unwrap().len(), 7);
    for i in v["result"]["generating_indices"].as_array().unwrap() {
        assert!(![0, 3, 7].contains(&i.as_u64().unwrap()));
    }
    write(d.path(), "bad.txt", "42\n");
    assert_eq!(code(&tropca(&["pca", "--input", "g.nwk", "--method", "stiefel", "--exclude", "bad.txt", "--out", "f"], d.path())), 2);
}

#[test]
fn pca_input_errors() {
    let d = TempDir::new().unwrap();
    write(d.path(), "empty.csv", "");
    assert_eq!(code(&tropca(&["pca", "--input", "empty.csv", "--method", "stiefel", "--out", "x"], d.path())), 2);
    assert_eq!(code(&tropca(&["pca", "--input", "absent.csv", "--method", "stiefel", "--out", "x"], d.path())), 1);
    assert_eq!(code(&tropca(&["pca", "--input", "empty.csv", "--method", "pca", "--out", "x"], d.path())), 2);
}

#[test]
fn non_ultrametric_trees_need_opt_in() {
    let d = TempDir::new().unwrap();
    let line = "((a:1,b:1):1,(c:1,d:3):1);\n";
    write(d.path(), "nu.nwk", &line.repeat(3));
    let out = tropca(&["pca", "--input", "nu.nwk", "--method", "polytope", "--out", "x"], d.path());
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not an ultrametric"));
    ok(&["pca", "--input", "nu.nwk", "--method", "polytope", "--allow-non-ultrametric", "--out", "x"], d.path());
}

#[test]
fn export_milp_has_one_delta_per_point() {
    let d = TempDir::new().unwrap();
    write(d.path(), "trees.csv", THREE_LEAF_TREES);
    ok(&["export-milp", "--input", "trees.csv", "--out", "trees.lp"], d.path());
    let lp = std::fs::read_to_string(d.path().join("trees.lp")).unwrap();
    let model = tropca::milp::read_lp(&lp).unwrap();
    assert_eq!(model.count_prefix("Delta_"), 6);
    let stdout = ok(&["export-milp", "--input", "trees.csv"], d.path());
    assert_eq!(stdout, lp);
}

#[test]
fn export_milp_checks_solutions() {
    let d = TempDir::new().unwrap();
    write(d.path(), "trees.csv", THREE_LEAF_TREES);
    write(d.path(), "v.json", r#"{"vertices": [[1,1.352352,1.352352],[1,2.106409,2.106409],[1,7.331937,7.331937]]}"#);
    let v: Value = serde_json::from_str(&ok(&["export-milp", "--input", "trees.csv", "--check", "v.json"], d.path())).unwrap();
    assert_eq!(v["feasible"], true);
    assert!(v["objective"].as_f64().unwrap() <= 1e-4);
    assert_eq!(v["manifest"]["command"], "export-milp");

    let rows: Vec<tropca::Point<f64>> =
        THREE_LEAF_TREES.lines().skip(1).map(|l| tropca::Point::new(l.split(',').map(|x| x.parse().unwrap()).collect()).unwrap()).collect();
    let milp = tropca::build_model(&rows).unwrap();
    let poly = tropca::Polytope::new(vec![rows[0].clone(), rows[1].clone(), rows[2].clone()]).unwrap();
    let flat = milp.assignment_for(&poly).unwrap();
    write(d.path(), "flat.json", &serde_json::to_string(&flat).unwrap());
    let v: Value = serde_json::from_str(&ok(&["export-milp", "--input", "trees.csv", "--check", "flat.json"], d.path())).unwrap();
    assert_eq!(v["feasible"], true);
    assert!((v["objective"].as_f64().unwrap() - v["hull_distance"].as_f64().unwrap()).abs() < 1e-9);

    write(d.path(), "partial.json", r#"{"Delta_1": 0}"#);
    assert_eq!(code(&tropca(&["export-milp", "--input", "trees.csv", "--check", "partial.json"], d.path())), 2);
}

#[test]
fn malformed_csv_reports_position() {
    let d = TempDir::new().unwrap();
    write(d.path(), "bad.csv", "1,2,3\n1,x,3\n");
    let out = tropca(&["export-milp", "--input", "bad.csv"], d.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2, column 2"));
}

#[test]
fn plot_marks_vertices() {
    let d = TempDir::new().unwrap();
    write(d.path(), "v.csv", "0,1,2\n0,3,-1\n0,-2,0\n");
    ok(&["plot", "--input", "v.csv", "--vertices", "v.csv", "--out", "v.svg"], d.path());
    let svg = std::fs::read_to_string(d.path().join("v.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="vertex""#).count(), 3);
}

#[test]
fn plot_exact_fit_projections_with_distance() {
    let d = TempDir::new().unwrap();
    write(d.path(), "trees.csv", THREE_LEAF_TREES);
    ok(&["pca", "--input", "trees.csv", "--method", "polytope", "--mode", "enumerate", "--out", "fit"], d.path());
    ok(&["plot", "--input", "fit/projections.csv", "--vertices", "fit/fit.json", "--out", "p.svg"], d.path());
    let svg = std::fs::read_to_string(d.path().join("p.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="point""#).count(), 6);
    assert_eq!(svg.matches(r#"class="vertex""#).count(), 3);
    assert!(svg.contains(r#"class="distance""#));
}

#[test]
fn plot_legend_matches_topology_tally() {
    let d = TempDir::new().unwrap();
    ok(&["simulate", "--n", "40", "--leaves", "3", "--mode", "kingman", "--seed", "2", "--out", "g.nwk"], d.path());
    ok(&["pca", "--input", "g.nwk", "--method", "polytope", "--out", "fit"], d.path());
    ok(&["plot", "--input", "fit/projections.csv", "--topologies", "fit/projection_topologies.csv", "--out", "p.svg"], d.path());
    let svg = std::fs::read_to_string(d.path().join("p.svg")).unwrap();
    let legend: Vec<(usize, String)> = svg
        .lines()
        .filter(|l| l.contains(r#"class="legend""#))
        .map(|l| {
            let text = &l[l.find('>').unwrap() + 1..l.rfind('<').unwrap()];
            let (n, sig) = text.split_once("  ").unwrap();
            (n.parse().unwrap(), sig.to_string())
        })
        .collect();

    let csv = std::fs::read_to_string(d.path().join("fit/projections.csv")).unwrap();
    let table = tropca::io::read_points_csv(csv.as_bytes()).unwrap();
    let labels = table.pair_labels().unwrap();
    let trees: Vec<_> = table
        .rows
        .iter()
        .map(|r| tropca::ultrametric_to_tree(&tropca::phylo::positive_representative(r), &labels).unwrap())
        .collect();
    let tally: Vec<(usize, String)> =
        tropca::topology_tally(&trees).unwrap().into_iter().map(|(s, n)| (n, s.0)).collect();
    assert_eq!(legend, tally);
    assert!(legend.len() > 1, "expected mixed topologies");
}

#[test]
fn plot_needs_three_coordinates() {
    let d = TempDir::new().unwrap();
    write(d.path(), "four.csv", "0,1,2,3\n1,0,2,2\n");
    let out = tropca(&["plot", "--input", "four.csv", "--out", "x.svg"], d.path());
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--coords"));
    ok(&["plot", "--input", "four.csv", "--coords", "1,3,4", "--out", "x.svg"], d.path());
    assert_eq!(code(&tropca(&["plot", "--input", "four.csv", "--coords", "1,3,9", "--out", "x.svg"], d.path())), 2);
}

#[test]
fn thread_cap_from_environment() {
    let d = TempDir::new().unwrap();
    write(d.path(), "trees.csv", THREE_LEAF_TREES);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_tropca"))
            .args(["pca", "--input", "trees.csv", "--method", "stiefel", "--s", "2", "--out", "fit"])
            .env("TROPCA_THREADS", threads)
            .current_dir(d.path())
            .output()
            .unwrap()
    };
    assert!(run("1").status.success());
    assert_eq!(code(&run("zero")), 2);
}
