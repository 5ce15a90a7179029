use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use aggro::config::{preset, preset_names, RunConfig};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn aggro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aggro"))
        .arg("--quiet")
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn train(dir: &Path, preset: &str, extra: &[&str]) -> (Output, PathBuf) {
    let model = dir.join("model.txt");
    let (train, dev) = (data("sample_train.tsv"), data("sample_dev.tsv"));
    let mut args = vec![
        "train",
        "--preset",
        preset,
        "--train",
        s(&train),
        "--validation",
        s(&dev),
        "--model",
        s(&model),
    ];
    args.extend_from_slice(extra);
    (aggro(&args), model)
}

#[test]
fn build_dict_counts_tokens() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.tsv");
    std::fs::write(&corpus, "1\ta a b\n").unwrap();
    let out = dir.path().join("dict.tsv");
    let o = aggro(&["build-dict", "--corpus", s(&corpus), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["a\t2", "b\t1"]);
}

#[test]
fn train_predict_evaluate_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let report_dir = dir.path().join("train_report");
    let (o, model) = train(dir.path(), "en-U+C3+C4+C5", &["--report-dir", s(&report_dir)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("validation weighted F1"));
    assert!(report_dir.join("metrics.tsv").is_file());

    let preds = dir.path().join("pred.tsv");
    let o = aggro(&[
        "predict",
        "--model",
        s(&model),
        "--corpus",
        s(&data("sample_dev.tsv")),
        "--out",
        s(&preds),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&preds).unwrap();
    let dev = std::fs::read_to_string(data("sample_dev.tsv")).unwrap();
    let ids: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
    let gold_ids: Vec<&str> = dev.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(ids, gold_ids);
    for line in text.lines() {
        let label = line.rsplit('\t').next().unwrap();
        assert!(["NAG", "CAG", "OAG"].contains(&label), "{line}");
    }

    // Row order of the predictions does not matter.
    let mut rows: Vec<&str> = text.lines().collect();
    rows.reverse();
    let shuffled = dir.path().join("shuffled.tsv");
    std::fs::write(&shuffled, rows.join("\n") + "\n").unwrap();
    let mut reports = Vec::new();
    for (i, p) in [&preds, &shuffled].into_iter().enumerate() {
        let out_dir = dir.path().join(format!("eval{i}"));
        let o = aggro(&[
            "evaluate",
            "--gold",
            s(&data("sample_dev.tsv")),
            "--predictions",
            s(p),
            "--out-dir",
            s(&out_dir),
            "--baseline",
            "trials=50,seed=1",
            "--model",
            s(&model),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        for f in ["metrics.tsv", "confusion.tsv", "confusion.svg", "top_features.tsv"] {
            assert!(out_dir.join(f).is_file(), "missing {f}");
        }
        reports.push(std::fs::read_to_string(out_dir.join("metrics.tsv")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    assert!(reports[0].starts_with("metric\tvalue\n"));

    // A missing prediction is an error that names the id.
    let partial = dir.path().join("partial.tsv");
    std::fs::write(&partial, rows[1..].join("\n") + "\n").unwrap();
    let missing = rows[0].split('\t').next().unwrap();
    let o = aggro(&[
        "evaluate",
        "--gold",
        s(&data("sample_dev.tsv")),
        "--predictions",
        s(&partial),
        "--out-dir",
        s(&dir.path().join("bad")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(missing), "{}", stderr(&o));

    let o = aggro(&["inspect", "--model", s(&model), "-k", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.starts_with("rank\tNAG\tCAG\tOAG\n"));
    assert!(table.lines().count() <= 4);
}

#[test]
fn merge_validation_trains_without_scoring() {
    let dir = tempfile::tempdir().unwrap();
    let (o, model) = train(dir.path(), "en-U", &["--merge-validation"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!String::from_utf8_lossy(&o.stdout).contains("validation weighted F1"));
    assert!(model.is_file());
}

#[test]
fn missing_resource_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let (o, model) = train(
        dir.path(),
        "en-W2V",
        &["--set", "embeddings=/nonexistent/vectors.txt"],
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("/nonexistent/vectors.txt"));
    assert!(!model.exists());
}

#[test]
fn dense_blocks_with_demo_resources() {
    let dir = tempfile::tempdir().unwrap();
    let emb = format!("embeddings={}", s(&data("demo_embeddings.txt")));
    let liwc = format!("liwc_lexicon={}", s(&data("demo_liwc.tsv")));
    let gender = format!("gender_lexicon={}", s(&data("demo_gender.tsv")));
    let (o, model) = train(
        dir.path(),
        "en-U",
        &[
            "--set", "blocks=U+W2V+S+LIWC+GP",
            "--set", &emb,
            "--set", &liwc,
            "--set", &gender,
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = aggro(&["inspect", "--model", s(&model), "--long", "-k", "50"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn hindi_rejects_english_only_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = train(dir.path(), "hi-U", &["--set", "blocks=U+S"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn hindi_mixed_script_trains() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("hi.txt");
    let o = aggro(&[
        "train",
        "--preset",
        "hi-U+C3+C4+C5",
        "--train",
        s(&data("sample_hi.tsv")),
        "--model",
        s(&model),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn translit_table_dump() {
    let o = aggro(&["dump-translit-table"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() > 40);
    assert!(text.contains('क'));
}

#[test]
fn usage_errors_exit_one() {
    let o = aggro(&["train", "--preset", "en-U"]);
    assert_eq!(o.status.code(), Some(1));
    let o = aggro(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn shipped_configs_match_presets() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let names = preset_names();
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_str().unwrap().to_string();
        let loaded = RunConfig::load(&path).unwrap();
        assert_eq!(loaded, preset(&name).unwrap(), "{name}");
        seen += 1;
    }
    assert_eq!(seen, names.len());
}
