//! CLI contract: exit codes, output file shapes, and flag validation.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("no signal")
}

struct Workdir {
    dir: tempfile::TempDir,
}

impl Workdir {
    fn new() -> Self {
        Workdir {
            dir: tempfile::tempdir().expect("tempdir"),
        }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }

    fn file(&self, name: &str, content: &str) -> String {
        let path = self.dir.path().join(name);
        fs::write(&path, content).expect("writable tempdir");
        path.display().to_string()
    }
}

#[test]
fn help_lists_defaults() {
    let out = run(&["cluster", "--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).expect("utf8 help");
    assert!(text.contains("[default: auto]"));
    assert!(text.contains("[default: 100]"));
    assert!(text.contains("CBN_THREADS"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(exit_code(&["cluster", "--nope"]), 2);
    assert_eq!(exit_code(&["frobnicate"]), 2);
}

#[test]
fn generate_requires_a_layout() {
    let w = Workdir::new();
    let out = w.path("x.csv");
    assert_eq!(exit_code(&["generate", "--out", &out]), 2);
}

#[test]
fn baseline_flags_are_validated() {
    let w = Workdir::new();
    let pts = w.file("pts.csv", "x,y\n0,0\n1,0\n0,1\n5,5\n");
    let out = w.path("p.csv");
    assert_eq!(
        exit_code(&[
            "baseline",
            "--input",
            &pts,
            "--algorithm",
            "kmeans",
            "--out",
            &out
        ]),
        2
    );
    assert_eq!(
        exit_code(&[
            "baseline",
            "--input",
            &pts,
            "--algorithm",
            "dbscan",
            "--out",
            &out
        ]),
        2
    );
    assert_eq!(
        exit_code(&[
            "baseline",
            "--input",
            &pts,
            "--algorithm",
            "hierarchical",
            "--cut-height",
            "1.0",
            "--clusters",
            "2",
            "--out",
            &out,
        ]),
        2
    );
}

#[test]
fn unparseable_input_exits_3() {
    let w = Workdir::new();
    let bad = w.file("bad.csv", "x,y\n1,oops\n2,3\n");
    let out = w.path("p.csv");
    assert_eq!(
        exit_code(&["cluster", "--input", &bad, "--k", "2", "--out", &out]),
        3
    );

    let missing = w.path("missing.csv");
    assert_eq!(
        exit_code(&["cluster", "--input", &missing, "--k", "2", "--out", &out]),
        3
    );

    let no_label = w.file("nolabel.csv", "id,cluster\na,0\n");
    let part = w.file("part.csv", "id,label\na,0\n");
    assert_eq!(
        exit_code(&["evaluate", "--reference", &no_label, "--candidate", &part]),
        3
    );
}

#[test]
fn evaluate_rejects_mismatched_ids() {
    let w = Workdir::new();
    let reference = w.file("r.csv", "id,label\na,0\nb,0\nc,1\n");
    let renamed = w.file("c1.csv", "id,label\na,0\nb,0\nd,1\n");
    let shorter = w.file("c2.csv", "id,label\na,0\nb,0\n");
    assert_eq!(
        exit_code(&[
            "evaluate",
            "--reference",
            &reference,
            "--candidate",
            &renamed
        ]),
        3
    );
    assert_eq!(
        exit_code(&[
            "evaluate",
            "--reference",
            &reference,
            "--candidate",
            &shorter
        ]),
        3
    );
}

#[test]
fn degenerate_algorithm_input_exits_4() {
    let w = Workdir::new();
    let single = w.file("one.csv", "x,y\n1,2\n");
    let out = w.path("p.csv");
    assert_eq!(
        exit_code(&["cluster", "--input", &single, "--k", "2", "--out", &out]),
        4
    );
}

#[test]
fn partition_file_uses_the_id_column() {
    let w = Workdir::new();
    let pts = w.file(
        "pts.csv",
        "name,x,y\np0,0,0\np1,1,0\np2,0,1\np3,20,20\np4,21,20\np5,20,21\n",
    );
    let out = w.path("p.csv");
    let result = run(&[
        "baseline",
        "--input",
        &pts,
        "--algorithm",
        "kmeans",
        "--k",
        "2",
        "--seed",
        "1",
        "--col-id",
        "name",
        "--out",
        &out,
    ]);
    assert!(result.status.success());
    let text = fs::read_to_string(PathBuf::from(&out)).expect("partition written");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,label"));
    assert!(lines.next().expect("row").starts_with("p0,"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn generate_marks_noise_points() {
    let w = Workdir::new();
    let out = w.path("d.csv");
    let result = run(&["generate", "--benchmark13", "--noise", "5", "--out", &out]);
    assert!(result.status.success());
    let text = fs::read_to_string(PathBuf::from(&out)).expect("dataset written");
    let noise_rows: Vec<&str> = text.lines().filter(|l| l.ends_with(",1")).collect();
    assert_eq!(noise_rows.len(), 5);
    assert!(noise_rows.iter().all(|l| l.split(',').nth(2) == Some("-1")));
    assert_eq!(text.lines().count(), 3806);
}

#[test]
fn evaluate_reports_perfect_agreement_for_identical_partitions() {
    let w = Workdir::new();
    let part = w.file("p.csv", "id,label\na,0\nb,0\nc,1\nd,-1\ne,-1\n");
    let out = run(&["evaluate", "--reference", &part, "--candidate", &part]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).expect("utf8 report");
    assert!(text.contains("\"rand_index\":1.0"));
    assert!(text.contains("\"jaccard_index\":1.0"));
}

#[test]
fn ingest_rejects_unusable_observations() {
    let w = Workdir::new();
    let bad = w.file("obs.csv", "station,date,value\nA,not-a-date,1.0\n");
    let out = w.path("cloud.csv");
    assert_eq!(
        exit_code(&[
            "ingest",
            "--input",
            &bad,
            "--window",
            "1990-01:1990-12",
            "--out",
            &out
        ]),
        3
    );
    assert_eq!(
        exit_code(&[
            "ingest",
            "--input",
            &bad,
            "--window",
            "1990-13:1991-01",
            "--out",
            &out
        ]),
        2
    );
}
