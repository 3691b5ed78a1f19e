mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use anchorradar::formats::{load_dataset, read_key_values, read_split};
use common::Planted;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anchorradar"))
}

fn run(args: &[&str], paths: &[(&str, &Path)]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    for (flag, path) in paths {
        cmd.arg(flag).arg(path);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Fixture {
    dir: tempfile::TempDir,
    data: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.tsv");
    let h = Planted {
        nodes: 200,
        edges: 800,
        gamma: 1.2,
        noise: 0.2,
        seed: 5,
    }
    .generate();
    common::write_dataset_file(&h, &data);
    Fixture { dir, data }
}

impl Fixture {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

#[test]
fn split_is_byte_identical_across_invocations() {
    let f = fixture();
    let (a, b) = (f.path("a.tsv"), f.path("b.tsv"));
    for out in [&a, &b] {
        let o = run(
            &["split", "--ratios", "0.075,0.025,0.9", "--seed", "7"],
            &[("--data", &f.data), ("--out", out)],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let h = load_dataset(&f.data).unwrap();
    read_split(&h, fs::File::open(&a).unwrap()).unwrap();
}

#[test]
fn train_predict_eval_round_trip() {
    let f = fixture();
    let out = f.path("run");
    let o = run(
        &["train", "--seed", "2", "--lr2", "0.1"],
        &[("--data", &f.data), ("--out", &out)],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    // the resolved configuration is echoed
    assert!(stdout(&o).contains("lr2 = 0.1"));
    for name in [
        "config.txt",
        "split.tsv",
        "model.txt",
        "strengths.tsv",
        "predictions.tsv",
        "rankings.tsv",
        "metrics.tsv",
    ] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    let metrics = read_key_values(fs::File::open(out.join("metrics.tsv")).unwrap()).unwrap();
    let accuracy: f64 = metrics["accuracy"].parse().unwrap();

    let o = run(
        &["eval"],
        &[
            ("--data", &f.data),
            ("--split", &out.join("split.tsv")),
            ("--pred", &out.join("predictions.tsv")),
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("accuracy\t")).unwrap();
    let evaluated: f64 = line.split('\t').nth(1).unwrap().parse().unwrap();
    assert_eq!(evaluated, accuracy);
    assert!(text.contains("ndcg\t") && text.contains("mrr\t"));

    let again = f.path("again");
    let o = run(&["predict"], &[("--model", &out), ("--out", &again)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(out.join("predictions.tsv")).unwrap(),
        fs::read(again.join("predictions.tsv")).unwrap()
    );
}

#[test]
fn inductive_prediction_on_another_dataset() {
    let f = fixture();
    let out = f.path("run");
    let o = run(
        &["train", "--seed", "1", "--epochs1", "5", "--epochs2", "5"],
        &[("--data", &f.data), ("--out", &out)],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let other = f.path("other.tsv");
    fs::write(&other, "a,b,c\ta\nb,c\tc\nc,d,e\te\n").unwrap();
    let pred = f.path("inductive");
    let o = run(
        &["predict", "--inductive"],
        &[("--model", &out), ("--data", &other), ("--out", &pred)],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(pred.join("predictions.tsv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn zero_epochs_still_succeeds() {
    let f = fixture();
    let out = f.path("run");
    let o = run(
        &["train", "--epochs1", "0", "--epochs2", "0"],
        &[("--data", &f.data), ("--out", &out)],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("metrics.tsv").exists());
}

#[test]
fn stage2_only_forces_alpha_to_zero() {
    let f = fixture();
    let (a, b) = (f.path("a"), f.path("b"));
    for (out, alpha) in [(&a, "0"), (&b, "0.7")] {
        let o = run(
            &["train", "--ablation", "stage2-only", "--alpha", alpha],
            &[("--data", &f.data), ("--out", out)],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(
        fs::read(a.join("strengths.tsv")).unwrap(),
        fs::read(b.join("strengths.tsv")).unwrap()
    );
    assert!(!a.join("model.txt").exists());
}

#[test]
fn single_point_tune_matches_train() {
    let f = fixture();
    let (t, r) = (f.path("tune"), f.path("train"));
    let flags = [
        "--seed", "4", "--lr1", "0.01", "--lr2", "0.1", "--alpha", "0.3", "--w", "2",
    ];
    let mut tune_args = vec!["tune"];
    tune_args.extend(flags);
    tune_args.extend([
        "--lr1-grid",
        "0.01",
        "--lr2-grid",
        "0.1",
        "--alpha-grid",
        "0.3",
        "--w-grid",
        "2",
    ]);
    let o = run(&tune_args, &[("--data", &f.data), ("--out", &t)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut train_args = vec!["train"];
    train_args.extend(flags);
    let o = run(&train_args, &[("--data", &f.data), ("--out", &r)]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in [
        "predictions.tsv",
        "strengths.tsv",
        "metrics.tsv",
        "model.txt",
    ] {
        assert_eq!(
            fs::read(t.join(name)).unwrap(),
            fs::read(r.join(name)).unwrap(),
            "{name}"
        );
    }
    let table = fs::read_to_string(t.join("tune.tsv")).unwrap();
    assert_eq!(table.lines().count(), 2);
}

#[test]
fn repeat_writes_per_seed_runs_and_summary() {
    let f = fixture();
    let out = f.path("rep");
    let o = run(
        &[
            "train",
            "--repeat",
            "3",
            "--seed-base",
            "1",
            "--epochs1",
            "10",
            "--epochs2",
            "10",
        ],
        &[("--data", &f.data), ("--out", &out)],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for seed in 1..=3 {
        assert!(out.join(format!("run_{seed}")).join("metrics.tsv").exists());
    }
    let summary = fs::read_to_string(out.join("summary.tsv")).unwrap();
    assert!(summary.starts_with("metric\tmean\tstd\truns"));
    assert!(stdout(&o).contains('±'));
}

#[test]
fn stats_and_features_commands() {
    let f = fixture();
    let o = run(
        &["stats", "--subset", "train", "--seed", "1"],
        &[("--data", &f.data)],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);

    let out = f.path("x.tsv");
    let o = run(
        &["features", "dump"],
        &[("--data", &f.data), ("--out", &out)],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("edge_idx\tnode_id\tf0\t"));
    assert_eq!(header.split('\t').count(), 2 + 33);
}

#[test]
fn failures_exit_nonzero_without_metrics() {
    let f = fixture();
    let bad = f.path("bad.tsv");
    fs::write(&bad, "a,b\ta\nc,d\tz\n").unwrap();
    let out = f.path("run");
    let o = run(&["train"], &[("--data", &bad), ("--out", &out)]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert!(!out.join("metrics.tsv").exists());

    let o = run(
        &["train", "--lr1", "-1"],
        &[("--data", &f.data), ("--out", &out)],
    );
    assert!(!o.status.success());
    let o = run(
        &["train", "--ablation", "stage1-only", "--ablation", "no-ga"],
        &[("--data", &f.data), ("--out", &out)],
    );
    assert!(!o.status.success());
    assert!(!out.join("metrics.tsv").exists());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let f = fixture();
    let cfg = f.path("run.conf");
    fs::write(
        &cfg,
        format!("data = {}\nlr2 = 0.001\nseed = 9\n", f.data.display()),
    )
    .unwrap();
    let out = f.path("run");
    let o = run(
        &["train", "--lr2", "0.1", "--epochs1", "1", "--epochs2", "1"],
        &[("--config", &cfg), ("--out", &out)],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let echoed = fs::read_to_string(out.join("config.txt")).unwrap();
    assert!(echoed.contains("lr2 = 0.1"));
    assert!(echoed.contains("seed = 9"));
}
