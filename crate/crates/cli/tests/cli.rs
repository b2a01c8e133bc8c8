use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use homonym::corpus::write_corpus;
use homonym::evaluation::sign_test_pvalue;
use homonym::fixtures::toy_corpus;
use tempfile::TempDir;

const TOY_GROUPS: &str = r#"{"Kim": [
  {"paper_id": "1", "group": "g1"}, {"paper_id": "5", "group": "g1"},
  {"paper_id": "2", "group": "g2"},
  {"paper_id": "3", "group": "g3"}, {"paper_id": "4", "group": "g3"},
  {"paper_id": "6", "group": "g4"}
]}"#;

fn homonym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homonym"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = homonym(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn toy_inputs(dir: &Path) -> (PathBuf, PathBuf) {
    let corpus = dir.join("toy.jsonl");
    let mut buf = Vec::new();
    write_corpus(&toy_corpus(), &mut buf).unwrap();
    fs::write(&corpus, buf).unwrap();
    let groups = dir.join("groups.json");
    fs::write(&groups, TOY_GROUPS).unwrap();
    (corpus, groups)
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn f_score(scores_csv: &Path) -> f64 {
    let text = fs::read_to_string(scores_csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "f").unwrap();
    row[col].parse().unwrap()
}

#[test]
fn build_net_on_toy_corpus() {
    let dir = TempDir::new().unwrap();
    let (corpus, groups) = toy_inputs(dir.path());
    let out = dir.path().join("net");
    let stdout = ok(&["build-net", "--corpus", s(&corpus), "--ambiguous", s(&groups), "--out", s(&out)]);
    assert!(stdout.starts_with("nodes 12 "), "{stdout}");
    assert!(stdout.contains("ambiguous 4"), "{stdout}");
    let nodes = fs::read_to_string(out.join("nodes.tsv")).unwrap();
    assert_eq!(nodes.lines().count(), 12);
    assert_eq!(nodes.lines().filter(|l| l.ends_with("\t1")).count(), 4);
}

#[test]
fn build_net_rerun_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (corpus, groups) = toy_inputs(dir.path());
    let out = dir.path().join("net");
    let args = ["build-net", "--corpus", s(&corpus), "--ambiguous", s(&groups), "--out", s(&out)];
    ok(&args);
    let first = read_all(&out);
    ok(&args);
    assert_eq!(first, read_all(&out));
}

#[test]
fn missing_corpus_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let (_, groups) = toy_inputs(dir.path());
    let missing = dir.path().join("nope.jsonl");
    let out = homonym(&["build-net", "--corpus", s(&missing), "--ambiguous", s(&groups), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.jsonl"));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(homonym(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(homonym(&["disambiguate"]).status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    ok(&["synth", "--demo", "--out", s(dir.path())]);
    let config = dir.path().join("config.txt");
    let bad_lambda = homonym(&["disambiguate", "--config", s(&config), "--lambda", "1.5"]);
    assert_eq!(bad_lambda.status.code(), Some(1));
    let bad_key = dir.path().join("bad.txt");
    fs::write(&bad_key, "gamma = 3\n").unwrap();
    assert_eq!(homonym(&["disambiguate", "--config", s(&bad_key)]).status.code(), Some(1));
    assert_eq!(homonym(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_graph_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.tsv");
    fs::write(&graph, "V 3\n0\t1\t-1\n").unwrap();
    let out = homonym(&["disambiguate", "--graph", s(&graph), "--direct", "--k", "2", "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("g.tsv"));
}

#[test]
fn demo_network_files() {
    let dir = TempDir::new().unwrap();
    let stdout = ok(&["synth", "--demo", "--out", s(dir.path())]);
    assert!(stdout.starts_with("nodes 15 "), "{stdout}");
    let truth = fs::read_to_string(dir.path().join("truth.csv")).unwrap();
    let mut sizes = [0usize; 3];
    for line in truth.lines().skip(1) {
        let class: usize = line.split(',').nth(1).unwrap().parse().unwrap();
        sizes[class] += 1;
    }
    assert_eq!(sizes, [4, 6, 5]);
}

#[test]
fn demo_run_with_fixed_seed_is_reproducible() {
    let dir = TempDir::new().unwrap();
    ok(&["synth", "--demo", "--out", s(dir.path())]);
    let config = dir.path().join("config.txt");
    let run = dir.path().join("run");
    let first_stdout = ok(&["disambiguate", "--config", s(&config), "--seed", "11"]);
    let first = read_all(&run);
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    for expected in ["assignment.tsv", "domination.csv", "scores.csv", "state.json", "trajectory.txt"] {
        assert!(names.contains(&expected), "missing {expected}");
    }
    assert!(first_stdout.contains("iterations 1000"), "{first_stdout}");
    let second_stdout = ok(&["disambiguate", "--config", s(&config), "--seed", "11"]);
    assert_eq!(first_stdout, second_stdout);
    assert_eq!(first, read_all(&run));
}

#[test]
fn separable_synthetic_corpus_is_solved() {
    let dir = TempDir::new().unwrap();
    ok(&["synth", "--eta", "2", "--p-cross", "0", "--seed", "4", "--out", s(dir.path())]);
    let config = dir.path().join("config.txt");
    let stdout = ok(&["disambiguate", "--config", s(&config)]);
    assert!(stdout.contains("f 1.0000"), "{stdout}");
    let run = dir.path().join("run");
    assert_eq!(f_score(&run.join("scores.csv")), 1.0);
    let mentions = fs::read_to_string(run.join("mentions.csv")).unwrap();
    assert_eq!(mentions.lines().count(), 1 + 16);
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    ok(&["synth", "--demo", "--out", s(dir.path())]);
    let config = dir.path().join("config.txt");
    let out = dir.path().join("other");
    ok(&["disambiguate", "--config", s(&config), "--lambda", "0.3", "--max-iters", "50", "--out", s(&out)]);
    let echoed = fs::read_to_string(out.join("config.txt")).unwrap();
    assert!(echoed.contains("lambda = 0.3\n"));
    assert!(echoed.contains("max_iters = 50\n"));
    assert!(echoed.contains("positions = 1,3,12\n"));
}

#[test]
fn sweep_is_reproducible_and_sign_tests_match() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let args = |out: &Path| {
        vec![
            "sweep".to_string(),
            "--eta".into(),
            "2,3".into(),
            "--seeds".into(),
            "1..4".into(),
            "--max-iters".into(),
            "400".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let run = |out: &Path| {
        let v = args(out);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>())
    };
    run(&a);
    run(&b);
    for name in ["scores.csv", "summary.csv", "signtest.csv"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name} differs"
        );
    }
    let scores = fs::read_to_string(a.join("scores.csv")).unwrap();
    assert_eq!(scores.lines().count(), 1 + 2 * 4 * 3);

    let tests = fs::read_to_string(a.join("signtest.csv")).unwrap();
    let mut lines = tests.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let mut rows = 0;
    for line in lines {
        let row: Vec<&str> = line.split(',').collect();
        let wins: u32 = row[col("wins")].parse().unwrap();
        let trials: u32 = row[col("trials")].parse().unwrap();
        let chance: f64 = row[col("chance")].parse().unwrap();
        let p: f64 = row[col("p_value")].parse().unwrap();
        assert_eq!(trials, 4);
        let expected = sign_test_pvalue(wins, trials, chance).unwrap();
        assert!((p - expected).abs() <= 1e-12 * expected.max(1e-300), "{line}");
        rows += 1;
    }
    assert_eq!(rows, 4);
}

#[test]
fn empty_sweep_grid_is_rejected() {
    let dir = TempDir::new().unwrap();
    let out = homonym(&["sweep", "--seeds", "", "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn synth_files_follow_the_seed() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    ok(&["synth", "--eta", "3", "--seed", "9", "--out", s(&a)]);
    ok(&["synth", "--eta", "3", "--seed", "9", "--out", s(&b)]);
    ok(&["synth", "--eta", "3", "--seed", "10", "--out", s(&c)]);
    for name in ["corpus.jsonl", "ambiguous.txt", "truth.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    assert_ne!(fs::read(a.join("corpus.jsonl")).unwrap(), fs::read(c.join("corpus.jsonl")).unwrap());
    let truth = fs::read_to_string(a.join("truth.csv")).unwrap();
    let entities: std::collections::BTreeSet<&str> =
        truth.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(entities.len(), 3);
}
