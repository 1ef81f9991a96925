use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use bireg_core::canon::certificate;
use bireg_core::codec::decode;
use bireg_core::graph::named;
use bireg_core::Graph;

fn bireg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bireg")).args(args).output().expect("binary runs")
}

fn bireg_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bireg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn graphs(o: &Output) -> Vec<Graph> {
    stdout(o).lines().map(|l| decode(l).unwrap()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn manifest(o: &Output) -> serde_json::Value {
    let err = stderr(o);
    let line = err.lines().find_map(|l| l.strip_prefix("manifest ")).expect("manifest line");
    serde_json::from_str(line).unwrap()
}

#[test]
fn generate_prints_graphs_and_count() {
    let o = bireg(&["generate", "3", "4", "5", "13"]);
    assert!(o.status.success());
    let gs = graphs(&o);
    assert_eq!(gs.len(), 4);
    assert!(gs.iter().all(|g| g.degree_set() == [3, 4].into()));
    assert!(stderr(&o).contains("counted 4 graphs of order 13"));
    let m = manifest(&o);
    assert_eq!(m["subcommand"], "generate");
    assert_eq!(m["result"]["count"], 4);
    assert!(m["wall_ms"].is_u64());
}

#[test]
fn count_only_and_regular_mode() {
    let o = bireg(&["generate", "3", "5", "14", "--regular", "--count-only"]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("counted 9 graphs of order 14"));
}

#[test]
fn residues_cover_the_family() {
    let mut union = BTreeSet::new();
    for r in 0..4 {
        let split = format!("{r}/4");
        let o = bireg(&["generate", "3", "5", "5", "16", "--mod", &split]);
        assert!(o.status.success());
        union.extend(graphs(&o).iter().map(certificate));
    }
    assert_eq!(union.len(), 20);
}

#[test]
fn merged_residues_dedup_to_the_family() {
    let mut all = String::new();
    for r in 0..3 {
        all += &stdout(&bireg(&["generate", "3", "4", "5", "14", "--mod", &format!("{r}/3")]));
    }
    let o = bireg_stdin(&["convert", "-", "--dedup"], &all);
    assert!(o.status.success());
    assert_eq!(graphs(&o).len(), 14);
}

#[test]
fn workers_give_the_same_family() {
    let serial = bireg(&["generate", "3", "4", "5", "15"]);
    let parallel = Command::new(env!("CARGO_BIN_EXE_bireg"))
        .args(["generate", "3", "4", "5", "15"])
        .env("BIREG_WORKERS", "3")
        .output()
        .unwrap();
    let a: BTreeSet<_> = graphs(&serial).iter().map(certificate).collect();
    let b: Vec<_> = graphs(&parallel).iter().map(certificate).collect();
    assert_eq!(b.len(), 149);
    assert_eq!(a, b.into_iter().collect());
}

#[test]
fn disabled_rules_do_not_change_the_count() {
    let o = bireg(&["generate", "3", "4", "5", "14", "--no-prune", "dmin", "--no-prune", "placement", "--count-only"]);
    assert!(stderr(&o).contains("counted 14 graphs"));
    assert_eq!(manifest(&o)["result"]["disabled"], serde_json::json!(["dmin", "placement"]));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["generate", "3", "4", "5"][..],
        &["generate", "4", "3", "5", "13"],
        &["generate", "3", "4", "5", "13", "--mod", "4/4"],
        &["generate", "3", "4", "5", "13", "--mod", "x"],
        &["generate", "3", "4", "5", "200"],
        &["bounds", "3", "3", "5"],
        &["family", "2"],
    ] {
        let o = bireg(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn bounds_report() {
    let o = bireg(&["bounds", "3", "4", "7", "--n", "35"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("biregMoore\t29"));
    assert!(out.contains("maxPlacement\t<1,2,6>"));
    assert!(out.contains("placements\t12"));
}

#[test]
fn family_and_analysis() {
    let fam = bireg(&["family", "7"]);
    let line = stdout(&fam);
    let g = decode(line.trim()).unwrap();
    assert_eq!(g.order(), 22);
    let o = bireg_stdin(&["analyze", "--r", "3", "--m", "7", "--hamilton"], &line);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("r\tm\tg\tn\tcount\tdmin\tvmMin\tvmMax\n3\t7\t5\t22\t1\tinf\t1\t1\n"));
    assert!(out.contains("1\t22\t5\tfalse\ttrue"));
}

#[test]
fn analyze_groups_by_order() {
    let cages = stdout(&bireg(&["generate", "3", "4", "5", "13"]));
    let path = scratch("cages13.g6");
    std::fs::write(&path, &cages).unwrap();
    let o = bireg(&["analyze", path.to_str().unwrap(), "--r", "3", "--m", "4"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("3\t4\t5\t13\t4\t2\t1\t3"));
    let m = manifest(&o);
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn convert_round_trip() {
    let path = scratch("heawood.g6");
    std::fs::write(&path, format!("{}\n", bireg_core::codec::encode_graph6(&named::heawood()).unwrap())).unwrap();
    let o = bireg(&["convert", path.to_str().unwrap(), "--to", "sparse6"]);
    assert!(stdout(&o).starts_with(':'));
    let back = graphs(&o);
    assert_eq!(back, vec![named::heawood()]);
}

#[test]
fn glue_heawood() {
    let path = scratch("heawood-glue.g6");
    std::fs::write(&path, format!("{}\n", bireg_core::codec::encode_graph6(&named::heawood()).unwrap())).unwrap();
    let o = bireg(&["glue", path.to_str().unwrap(), "--m", "9", "--g", "6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let g = &graphs(&o)[0];
    assert_eq!(g.order(), 38);
    assert_eq!(g.degree_set(), [3, 9].into());
    assert!(stderr(&o).contains("case=1 s=2 k=3"));
}

#[test]
fn construct_scan() {
    let seeds = stdout(&bireg(&["generate", "3", "5", "16", "--regular"]));
    let path = scratch("cubic16.g6");
    std::fs::write(&path, seeds).unwrap();
    let out = scratch("constr1.g6");
    let o = bireg(&["construct", path.to_str().unwrap(), "--which", "1", "--g", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r\tm\tg\torder\tseed_line\trecipe"));
    let row: Vec<&str> = lines.next().expect("one row").split('\t').collect();
    assert_eq!(&row[..4], ["3", "4", "5", "16"]);
    let best = std::fs::read_to_string(&out).unwrap();
    let g = decode(best.lines().next().unwrap()).unwrap();
    assert_eq!(g.degree_set(), [3, 4].into());
    let bad = bireg(&["construct", path.to_str().unwrap(), "--which", "2", "--t", "1", "--g", "5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn crosscheck_agrees() {
    let o = bireg(&["crosscheck", "3", "4", "5", "14"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n\tgenerator\toracle\tagree\n13\t4\t4\ttrue\n14\t14\t14\ttrue\n");
    let reg = bireg(&["crosscheck", "3", "5", "12", "--regular"]);
    assert!(stdout(&reg).contains("12\t2\t2\ttrue"));
}

#[test]
fn manifest_sidecar() {
    let path = scratch("run.json");
    let o = bireg(&["--manifest", path.to_str().unwrap(), "bounds", "3", "4", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["subcommand"], "bounds");
    assert_eq!(v["exit"], 0);
}

#[test]
fn unreadable_input_fails() {
    let o = bireg(&["convert", "/nonexistent/file.g6"]);
    assert_eq!(o.status.code(), Some(1));
    let path = scratch("garbage.g6");
    std::fs::write(&path, "not a graph ~~~\n").unwrap();
    let o = bireg(&["analyze", path.to_str().unwrap(), "--r", "3", "--m", "4"]);
    assert!(!o.status.success());
}
