//! Black-box tests of the binary: exit codes, fixture replay and the
//! recorded toy-benchmark accuracies.

use sangam_core::scoring::{
    canonical_json, Backend, Exchange, FixtureBackend, MockBackend, RecordingBackend, ScoreRequest,
};
use serde::Deserialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::{Arc, Mutex};

fn toy(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy").join(path)
}

fn data(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(path)
}

fn sangam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sangam"))
        .args(args)
        .output()
        .expect("spawn sangam")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().unwrap_or(-1)
}

#[test]
fn unknown_flag_exits_1() {
    let output = sangam(&["curate", "--frobnicate"]);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn help_exits_0() {
    let output = sangam(&["--help"]);
    assert_eq!(exit_code(&output), 0);
}

#[test]
fn bad_backend_scheme_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = sangam(&[
        "eval",
        "--items", toy("benchmark.jsonl").to_str().unwrap(),
        "--backend", "carrier-pigeon://coop",
        "--out", dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2, "stderr: {}", String::from_utf8_lossy(&output.stderr));
}

#[test]
fn missing_input_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let output = sangam(&[
        "curate",
        "--manifest", dir.path().join("nope.csv").to_str().unwrap(),
        "--corpus", toy("corpus.jsonl").to_str().unwrap(),
        "--out", dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 3);
}

#[test]
fn invalid_corpus_rows_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.jsonl");
    // MCQ with a single option and a wrong cultural flag.
    std::fs::write(
        &corpus,
        r#"{"id":"bad-1","task":"mcq","input_fields":["q"],"options":["only"],"output":"o","language":"en","domain":"d","source":"India Law","is_cultural":false}"#,
    )
    .unwrap();
    let output = sangam(&[
        "curate",
        "--manifest", toy("manifest.csv").to_str().unwrap(),
        "--corpus", corpus.to_str().unwrap(),
        "--out", dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 4);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("options < 2"), "stderr: {stderr}");
    assert!(stderr.contains("cultural flag mismatch"), "stderr: {stderr}");
}

#[test]
fn unreachable_backend_exits_5_for_order() {
    let dir = tempfile::tempdir().unwrap();
    let output = sangam(&[
        "order",
        "--in", toy("corpus.jsonl").to_str().unwrap(),
        "--out", dir.path().join("ordered.jsonl").to_str().unwrap(),
        "--length-mode", "backend",
        "--backend", "http://127.0.0.1:9",
        "--model", "none",
    ]);
    assert_eq!(exit_code(&output), 5, "stderr: {}", String::from_utf8_lossy(&output.stderr));
}

#[test]
fn partial_eval_exits_6_unless_allowed() {
    let dir = tempfile::tempdir().unwrap();

    // Record exchanges for one item only, then evaluate two.
    let item_one = r#"{"id":"p1","benchmark":"ARC-C","question":"Q one","choices":["aa","bb"],"gold_index":0,"language":"en"}"#;
    let item_two = r#"{"id":"p2","benchmark":"ARC-C","question":"Q two","choices":["cc","dd"],"gold_index":1,"language":"en"}"#;
    let one = dir.path().join("one.jsonl");
    std::fs::write(&one, format!("{item_one}\n")).unwrap();
    let two = dir.path().join("two.jsonl");
    std::fs::write(&two, format!("{item_one}\n{item_two}\n")).unwrap();

    let fixture = dir.path().join("fixture.jsonl");
    let record = sangam(&[
        "eval",
        "--items", one.to_str().unwrap(),
        "--backend", "mock://1024",
        "--model", "default",
        "--record", fixture.to_str().unwrap(),
        "--out", dir.path().join("record").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&record), 0);

    let fixture_url = format!("fixture://{}", fixture.display());
    let partial = sangam(&[
        "eval",
        "--items", two.to_str().unwrap(),
        "--backend", &fixture_url,
        "--model", "default",
        "--out", dir.path().join("partial").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&partial), 6, "stderr: {}", String::from_utf8_lossy(&partial.stderr));

    let allowed = sangam(&[
        "eval",
        "--items", two.to_str().unwrap(),
        "--backend", &fixture_url,
        "--model", "default",
        "--allow-partial",
        "--out", dir.path().join("allowed").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&allowed), 0);

    // The unscored item is recorded, not dropped.
    let results: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("allowed/results.json")).unwrap(),
    )
    .unwrap();
    let unscored = &results["results"][0]["unscored"];
    assert_eq!(unscored.as_array().unwrap().len(), 1);
    assert_eq!(unscored[0]["id"], "p2");
}

#[derive(Clone, Default)]
struct SharedBuffer(Arc<Mutex<Vec<u8>>>);

impl Write for SharedBuffer {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0.lock().unwrap().extend_from_slice(buf);
        Ok(buf.len())
    }
    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

/// The checked-in fixture must stay byte-identical to a fresh recording of
/// the same exchange against the mock backend.
#[test]
fn checked_in_score_fixture_replays_byte_exactly() {
    let fixture_path = data("score_fixture.jsonl");
    let checked_in = std::fs::read_to_string(&fixture_path).unwrap();

    let request = ScoreRequest {
        model: "mock".into(),
        prompt: "Q ### A) x, B) y ### MCQ ### :".into(),
        continuations: vec!["x".into(), "y".into()],
    };

    let buffer = SharedBuffer::default();
    let recorder = RecordingBackend::new(MockBackend::new(1024), Box::new(buffer.clone()));
    let live = recorder.score(&request).unwrap();
    let fresh = String::from_utf8(buffer.0.lock().unwrap().clone()).unwrap();
    assert_eq!(fresh, checked_in, "fresh recording differs from fixture");

    // And replay returns the identical response.
    let replay = FixtureBackend::load(&fixture_path).unwrap();
    let replayed = replay.score(&request).unwrap();
    assert_eq!(canonical_json(&replayed), canonical_json(&live));

    // Canonicalization: a shuffled-key version of the fixture parses to the
    // same canonical bytes.
    let exchange: Exchange = serde_json::from_str(checked_in.trim()).unwrap();
    let value: serde_json::Value = serde_json::from_str(checked_in.trim()).unwrap();
    let reserialized: Exchange = serde_json::from_value(value).unwrap();
    assert_eq!(canonical_json(&exchange), canonical_json(&reserialized));
}

#[derive(Deserialize)]
struct ExpectedGroup {
    benchmark: String,
    language: String,
    n_items: usize,
    n_correct: usize,
}

#[derive(Deserialize)]
struct ExpectedEval {
    backend: String,
    groups: Vec<ExpectedGroup>,
}

/// The bundled toy benchmark scored with mock://1024 must reproduce the
/// recorded per-group accuracies.
#[test]
fn toy_benchmark_matches_recorded_accuracies() {
    let expected: ExpectedEval =
        serde_json::from_str(&std::fs::read_to_string(data("toy_eval_expected.json")).unwrap())
            .unwrap();

    let dir = tempfile::tempdir().unwrap();
    let output = sangam(&[
        "eval",
        "--items", toy("benchmark.jsonl").to_str().unwrap(),
        "--backend", &expected.backend,
        "--model", "toy",
        "--out", dir.path().join("eval").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);

    let results: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("eval/results.json")).unwrap(),
    )
    .unwrap();
    let groups = results["results"].as_array().unwrap();
    assert_eq!(groups.len(), expected.groups.len());
    for expected_group in &expected.groups {
        let found = groups
            .iter()
            .find(|g| {
                g["benchmark"] == expected_group.benchmark.as_str()
                    && g["language"] == expected_group.language.as_str()
            })
            .unwrap_or_else(|| {
                panic!("{}/{} missing", expected_group.benchmark, expected_group.language)
            });
        assert_eq!(found["n_items"].as_u64().unwrap() as usize, expected_group.n_items);
        assert_eq!(
            found["n_correct"].as_u64().unwrap() as usize,
            expected_group.n_correct,
            "{}/{}",
            expected_group.benchmark,
            expected_group.language
        );
    }
}

/// Same seed, same outputs: the curate manifest records equal digests.
#[test]
fn curate_is_reproducible_across_processes() {
    let mut digests = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("curated");
        let output = sangam(&[
            "curate",
            "--manifest", toy("manifest.csv").to_str().unwrap(),
            "--corpus", toy("corpus.jsonl").to_str().unwrap(),
            "--seed", "1024",
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&output), 0);
        let manifest: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(out.join("run_manifest.json")).unwrap(),
        )
        .unwrap();
        let digest = manifest["outputs"]
            .as_object()
            .unwrap()
            .iter()
            .find(|(path, _)| path.ends_with("curated.jsonl"))
            .map(|(_, digest)| digest.as_str().unwrap().to_string())
            .unwrap();
        digests.push(digest);
    }
    assert_eq!(digests[0], digests[1]);
}

#[test]
fn order_emits_formatted_prompts_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let ordered = dir.path().join("ordered.jsonl");
    let formatted = dir.path().join("formatted.jsonl");
    let output = sangam(&[
        "order",
        "--in", toy("corpus.jsonl").to_str().unwrap(),
        "--out", ordered.to_str().unwrap(),
        "--batch", "5",
        "--accum", "2",
        "--length-mode", "ws",
        "--formatted-out", formatted.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);

    let ordered_lines = std::fs::read_to_string(&ordered).unwrap();
    let formatted_lines = std::fs::read_to_string(&formatted).unwrap();
    assert_eq!(ordered_lines.lines().count(), formatted_lines.lines().count());

    let first: serde_json::Value =
        serde_json::from_str(formatted_lines.lines().next().unwrap()).unwrap();
    for key in ["id", "prompt", "target", "language"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert!(first["prompt"].as_str().unwrap().ends_with(" ### :"));
}

#[test]
fn sweep_plan_writes_twenty_lines() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.jsonl");
    let output = sangam(&[
        "sweep-plan",
        "--models", "qwen14b",
        "--ratios", "10..100",
        "--domain-flags", "both",
        "--out", plan.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let lines = std::fs::read_to_string(&plan).unwrap();
    assert_eq!(lines.lines().count(), 20);
    let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(first["model"], "qwen14b");
    assert_eq!(first["hindi_ratio"], 10);
    assert_eq!(first["include_domain_data"], false);
}
