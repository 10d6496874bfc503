use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn actionable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_actionable")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = actionable(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Relative path to file bytes for every file under `root`.
fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn full_run(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let d = dir.to_str().unwrap();
    for cmd in [
        &["synth"][..],
        &["ingest"],
        &["lexicon", "build"],
        &["lexicon", "dump"],
        &["train"],
        &["select", "--strategy", "D"],
        &["evaluate"],
        &["report", "mi"],
    ] {
        let mut args = vec!["--seed", "11"];
        args.extend_from_slice(cmd);
        args.extend_from_slice(&["--report_dir", d]);
        ok(&args);
    }
    snapshot(dir)
}

#[test]
fn pipeline_reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = full_run(a.path());
    let second = full_run(b.path());
    assert_eq!(first.keys().collect::<Vec<_>>(), second.keys().collect::<Vec<_>>());
    for (name, bytes) in &first {
        assert!(bytes == &second[name], "{name} differs between runs");
    }
    for expected in ["evaluation.tsv", "census.txt", "mi.tsv", "registry/v1/manifest", "selections.tsv"] {
        assert!(first.contains_key(expected), "missing {expected}");
    }
    let census = String::from_utf8(first["census.txt"].clone()).unwrap();
    assert!(census.contains("{c,l,s}") && census.contains('%'));
}

#[test]
fn classify_labels_known_domains_and_skips_unknown_ones() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for cmd in [&["synth"][..], &["select", "--strategy", "C"]] {
        let mut args = cmd.to_vec();
        args.extend_from_slice(&["--report_dir", d]);
        ok(&args);
    }
    let input = dir.path().join("in.jsonl");
    fs::write(
        &input,
        concat!(
            r#"{"id":"a","text":"@acme my order never arrived?","company":"acme","language":"en","source":"tw"}"#,
            "\n",
            r#"{"id":"b","text":"hello","company":"nobody","language":"en","source":"tw"}"#,
            "\n"
        ),
    )
    .unwrap();
    let output = dir.path().join("out.tsv");
    let out = actionable(&["classify", "--report_dir", d, "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nobody"));
    let rows = fs::read_to_string(&output).unwrap();
    let lines: Vec<&str> = rows.lines().collect();
    assert_eq!(lines.len(), 1, "{rows}");
    let fields: Vec<&str> = lines[0].split('\t').collect();
    assert_eq!(fields[0], "a");
    assert!(fields[1] == "actionable" || fields[1] == "non_actionable");
    assert!(fields[2].parse::<f64>().unwrap().is_finite());

    let empty = dir.path().join("empty.jsonl");
    fs::write(&empty, "").unwrap();
    let empty_out = dir.path().join("empty.tsv");
    let out = actionable(&["classify", "--report_dir", d, "--input", empty.to_str().unwrap(), "--output", empty_out.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(&empty_out).unwrap(), "");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [&["frobnicate"][..], &["train", "--no_such_key", "1"], &["train", "--cv", "zero"], &["train", "stray"]] {
        let out = actionable(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert!(stderr.starts_with("error\tkind="), "{stderr}");
        assert_eq!(stderr.lines().count(), 1, "{stderr}");
    }
}

#[test]
fn missing_data_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = actionable(&["train", "--report_dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let out = actionable(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for sub in ["synth", "ingest", "lexicon", "train", "select", "evaluate", "classify", "report"] {
        assert!(text.contains(sub), "{sub}");
    }
}
