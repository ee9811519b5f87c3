use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn baba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baba"))
        .args(args)
        .env_remove("BABA_EXTRACTOR_URL")
        .env_remove("BABA_CLASSIFIER_URL")
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn mine_mock(corpus: &str, out: &Path) -> Output {
    baba(&[
        "mine",
        p(&fixture(&format!("{corpus}.md"))),
        "--out",
        p(out),
        "--mock",
        "--relations",
        p(&fixture(&format!("{corpus}_relations.json"))),
    ])
}

#[test]
fn solve_lists_k_largest_admissible_sets() {
    let out = baba(&["solve", p(&fixture("g1.json")), "--k", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{b} (size 1)\n{} (size 0)\n");

    let out = baba(&[
        "solve",
        p(&fixture("g2.json")),
        "--k",
        "3",
        "--semantics",
        "stable",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{b} (size 1)\n");
}

#[test]
fn solve_writes_json_and_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("ext.json");
    let cnf = dir.path().join("g3.cnf");
    let out = baba(&[
        "solve",
        p(&fixture("g3.json")),
        "--k",
        "5",
        "--out",
        p(&report),
        "--dimacs",
        p(&cnf),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["complete"], true);
    let sets: Vec<Vec<String>> = v["extensions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| serde_json::from_value(e["members"].clone()).unwrap())
        .collect();
    assert_eq!(sets, vec![vec!["a", "c"], vec!["c"], vec![]]);
    let cnf = std::fs::read_to_string(&cnf).unwrap();
    assert!(cnf.lines().any(|l| l.starts_with("p cnf ")));
    assert!(cnf.contains("c var 1 a\n"));
}

#[test]
fn empty_graph_has_one_empty_extension() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("empty.json");
    std::fs::write(&g, baba::ArgumentGraph::new().to_json()).unwrap();
    let out = baba(&["solve", p(&g), "--k", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{} (size 0)\n");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&baba(&["solve", p(&missing)])), 2);
    assert_eq!(
        code(&baba(&["solve", p(&fixture("g1.json")), "--k", "0"])),
        2
    );
    assert_eq!(
        code(&baba(&[
            "solve",
            p(&fixture("g1.json")),
            "--semantics",
            "grounded"
        ])),
        2
    );
    assert_eq!(code(&baba(&["frobnicate"])), 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = baba(&["stats", p(&bad)]);
    assert_eq!(code(&out), 2);

    // Missing facts file: the graph must not be touched.
    let g = dir.path().join("g.json");
    std::fs::copy(fixture("g1.json"), &g).unwrap();
    let before = std::fs::read(&g).unwrap();
    let out = baba(&[
        "factcheck",
        p(&g),
        p(&dir.path().join("facts.md")),
        "--mock",
    ]);
    assert_eq!(code(&out), 2);
    assert_eq!(std::fs::read(&g).unwrap(), before);

    // No endpoint configured and no --mock.
    let out = baba(&[
        "mine",
        p(&fixture("risk.md")),
        "--out",
        p(&dir.path().join("x.json")),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("extractor_url"));
    let out = baba(&[
        "mine",
        p(&fixture("risk.md")),
        "--out",
        p(&dir.path().join("x.json")),
        "--mock",
        "--max-chars",
        "10",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("max_chars"));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn unreachable_endpoint_exits_four_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("g.json");
    let out = baba(&[
        "mine",
        p(&fixture("risk.md")),
        "--out",
        p(&out_path),
        "--extractor-url",
        "http://127.0.0.1:1/extract",
        "--classifier-url",
        "http://127.0.0.1:1/classify",
    ]);
    assert_eq!(code(&out), 4);
    assert!(!out_path.exists());
}

#[test]
fn mined_fixtures_have_expected_ratios() {
    let dir = tempfile::tempdir().unwrap();
    for (corpus, ratio) in [("risk", "1:12"), ("debate", "1:4")] {
        let g = dir.path().join(format!("{corpus}.json"));
        let out = mine_mock(corpus, &g);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let out = baba(&["stats", p(&g), "--json"]);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        let got = format!("{}:{}", v["ratio"]["attack"], v["ratio"]["support"]);
        assert_eq!(got, ratio, "{corpus}");
    }
}

#[test]
fn mining_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(code(&mine_mock("risk", &a)), 0);
    assert_eq!(code(&mine_mock("risk", &b)), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn factcheck_reports_planted_contradictions() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("risk.json");
    assert_eq!(code(&mine_mock("risk", &g)), 0);
    let extended = dir.path().join("risk_facts.json");
    let out = baba(&[
        "factcheck",
        p(&g),
        p(&fixture("risk_facts.md")),
        "--out",
        p(&extended),
        "--mock",
        "--relations",
        p(&fixture("risk_relations.json")),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut got: Vec<(String, String)> = v["report"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["literal"].as_str().unwrap().to_string(),
                e["fact"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    got.sort();
    assert_eq!(got, baba::fixtures::risk_fact_attacks());
    assert_eq!(v["summary"]["discarded_reverse"], 1);

    // The extended graph is what the report's hash names.
    let bytes = std::fs::read(&extended).unwrap();
    assert_eq!(v["graph_sha256"], baba::graph::content_hash(&bytes));
}

#[test]
fn feedback_depth_limits_chains() {
    let depth = fixture("depth.json");
    let chains = |m: &str| -> Vec<Vec<String>> {
        let out = baba(&["feedback", p(&depth), "--m", m, "--top-j", "1", "--json"]);
        assert_eq!(code(&out), 0);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["key_literals"][0]["literal"], "t");
        v["key_literals"][0]["chains"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| serde_json::from_value(c["nodes"].clone()).unwrap())
            .collect()
    };
    assert_eq!(chains("1"), vec![vec!["x1", "t"]]);
    let deep = chains("3");
    let attackers: Vec<&str> = deep.iter().map(|c| c[0].as_str()).collect();
    assert_eq!(attackers, ["x1", "x2", "x3"]);
    assert_eq!(code(&baba(&["feedback", p(&depth), "--m", "0"])), 2);
}

#[test]
fn feedback_file_and_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("feedback.md");
    let log = dir.path().join("checkpoints.jsonl");
    let depth = fixture("depth.json");
    let args = [
        "feedback",
        p(&depth),
        "--out",
        p(&file),
        "--checkpoint",
        p(&log),
        "--timestamp",
        "2024-01-01T00:00:00Z",
    ];
    let first = baba(&args);
    assert_eq!(code(&first), 0);
    let second = baba(&args);
    assert_eq!(first.stdout, second.stdout);

    let text = std::fs::read_to_string(&file).unwrap();
    let hash = baba::graph::content_hash(&std::fs::read(fixture("depth.json")).unwrap());
    assert!(text.starts_with(&format!(
        "---\ngraph_sha256: {hash}\nconfig: m=3 chain_depth=4 top_j=5\ntimestamp: 2024-01-01T00:00:00Z\n---\n\n"
    )));
    assert!(text.ends_with(&stdout(&first)));

    let lines: Vec<Value> = std::fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["graph_sha256"], hash);
    assert_eq!(lines[0]["message"], stdout(&first));
}

#[test]
fn source_date_epoch_sets_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("feedback.md");
    let out = Command::new(env!("CARGO_BIN_EXE_baba"))
        .args(["feedback", p(&fixture("g1.json")), "--out", p(&file)])
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.contains("timestamp: 1970-01-01T00:00:00Z\n"));
}

#[test]
fn fixture_command_reproduces_bundled_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = baba(&["fixture", "all", "--out", p(dir.path())]);
    assert_eq!(code(&out), 0);
    for name in [
        "risk.md",
        "risk_facts.md",
        "risk_relations.json",
        "debate.md",
        "debate_relations.json",
        "g1.json",
        "g2.json",
        "g3.json",
        "depth.json",
    ] {
        assert_eq!(
            std::fs::read(dir.path().join(name)).unwrap(),
            std::fs::read(fixture(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn solver_timeout_writes_partial_result_and_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("partial.json");
    let out = baba(&[
        "solve",
        p(&fixture("depth.json")),
        "--timeout",
        "0.000000001",
        "--out",
        p(&report),
    ]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["complete"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("timed out"));
}
