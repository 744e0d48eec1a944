use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn accent() -> Command {
    Command::new(env!("CARGO_BIN_EXE_accent"))
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(rel)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn encode_prints_one_vector_per_phone() {
    let o = accent().args(["encode", "sneɪk"]).output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4);

    let o = accent().args(["encode", "tʃiz"]).output().unwrap();
    assert_eq!(stdout(&o).lines().count(), 3);
    assert!(stdout(&o).lines().next().unwrap().ends_with("(C,7,4,2,1)"));
}

#[test]
fn encode_errors() {
    let o = accent().args(["encode", ""]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));

    let o = accent().args(["encode", "ab5"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("\"5\" at byte 2"), "{}", stderr(&o));
}

#[test]
fn invalid_constant_is_a_usage_error() {
    let o = accent().args(["--p-ins", "1.5", "encode", "a"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_lexicon_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-lexicon.tsv");
    let o = accent()
        .arg("--lexicon")
        .arg(&missing)
        .arg("evaluate")
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no-such-lexicon.tsv"));
}

fn rates(csv: &str, speaker: &str) -> (f64, f64) {
    let get = |cond: &str| {
        csv.lines()
            .find(|l| l.starts_with(&format!("{speaker},")) && l.contains(&format!(",{cond},")))
            .and_then(|l| l.rsplit(',').next())
            .unwrap()
            .parse::<f64>()
            .unwrap()
    };
    (get("before"), get("after"))
}

#[test]
fn french8_with_paragraph_lexicon_improves() {
    let dir = tempfile::tempdir().unwrap();
    let o = accent()
        .arg("--lexicon")
        .arg(data("lexicon/paragraph.tsv"))
        .arg("evaluate")
        .arg("--transcripts")
        .arg(data("transcripts/French8.tsv"))
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("rates.csv")).unwrap();
    let (before, after) = rates(&csv, "French8");
    assert!(after > before, "{before} -> {after}");
    assert!(dir.path().join("French8.txt").exists());
    let table = std::fs::read_to_string(dir.path().join("French8_transformations.tsv")).unwrap();
    assert!(!table.contains("\tNO\n"), "{table}");
}

#[test]
fn evaluate_is_deterministic_and_honours_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = accent()
            .args(["evaluate", "--jobs", "3"])
            .env("ACCENT_OUT_DIR", &out)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        (
            std::fs::read(out.join("rates.csv")).unwrap(),
            std::fs::read(out.join("summary.txt")).unwrap(),
        )
    };
    let (a, b) = (run("one"), run("two"));
    assert_eq!(a, b);
    let csv = String::from_utf8(a.0).unwrap();
    assert_eq!(csv.lines().count(), 1 + 19 * 2);
    assert!(csv.starts_with("speaker,group,condition,rate\n"));
}

#[test]
fn params_dump_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("naive.json");
    let second = dir.path().join("again.json");
    assert!(accent()
        .args(["params", "dump", "--out"])
        .arg(&first)
        .output()
        .unwrap()
        .status
        .success());
    let o = accent()
        .args(["params", "load"])
        .arg(&first)
        .arg("--out")
        .arg(&second)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());

    let json: String = std::fs::read_to_string(&first).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, json.replace("accent-params/1", "other")).unwrap();
    let o = accent().args(["params", "load"]).arg(&bad).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("format"));
}

#[test]
fn adapt_writes_loadable_params_used_by_recognize() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("french8.json");
    let o = accent()
        .args(["adapt", "--speaker", "French8", "--params-out"])
        .arg(&params)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let o = accent()
        .arg("--params-in")
        .arg(&params)
        .args(["recognize", "bʀɑdœʀ"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("best: brother"), "{}", stdout(&o));

    let o = accent().args(["adapt", "--speaker", "French8"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "p-ins = 2.0\n").unwrap();
    let o = accent()
        .arg("--config")
        .arg(&cfg)
        .args(["encode", "a"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = accent()
        .arg("--config")
        .arg(&cfg)
        .args(["--p-ins", "0.02", "encode", "a"])
        .output()
        .unwrap();
    assert!(o.status.success());

    std::fs::write(&cfg, "colour = 1\n").unwrap();
    let o = accent()
        .arg("--config")
        .arg(&cfg)
        .args(["encode", "a"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
