// Copyright 2026 The orderdeps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(file)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderdeps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn taxes(args: &[&str]) -> Output {
    let (csv, schema) = (data("taxes.csv"), data("taxes.json"));
    let mut all = args.to_vec();
    all.extend(["--input", &csv, "--schema", &schema]);
    run(&all)
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn od_texts(report: &Value) -> Vec<String> {
    report["result"]["ods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["text"].as_str().unwrap().to_string())
        .collect()
}

fn lines(out: &Output) -> Vec<String> {
    stdout(out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn premise_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn discover_matches_the_oracle_and_round_trips() {
    let fast = taxes(&["discover", "--format", "json"]);
    assert_eq!(code(&fast), 0);
    let report = json(&fast);
    assert_eq!(report["result"]["algorithm"], "fastod");
    assert_eq!(report["result"]["complete"], true);
    assert_eq!(report["input"]["rows"], 6);
    assert_eq!(report["input"]["columns"], 9);
    assert_eq!(report["input"]["schema_sha256"].as_str().unwrap().len(), 64);
    let ods = od_texts(&report);
    assert!(ods.contains(&"{posit}: [] |-> bin".to_string()));
    assert!(ods.contains(&"{sal}: [] |-> tax".to_string()));

    let oracle = json(&taxes(&["discover", "--oracle", "--format", "json"]));
    assert_eq!(oracle["result"]["algorithm"], "oracle");
    assert_eq!(od_texts(&oracle), ods);

    for od in &ods {
        let out = taxes(&["validate", od]);
        assert_eq!(code(&out), 0, "{od}");
        assert_eq!(lines(&out), ["true"]);
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = taxes(&["discover", "--format", "json", "--seed", "11"]);
    let b = taxes(&["discover", "--format", "json", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["flags"]["seed"], 11);
    assert!(json(&a).get("wall_time_ms").is_none());

    let threaded = json(&taxes(&["discover", "--format", "json", "--threads", "4"]));
    assert_eq!(threaded["result"], json(&a)["result"]);
    assert_eq!(threaded["stats"], json(&a)["stats"]);

    let timed = json(&taxes(&["discover", "--format", "json", "--timing"]));
    assert!(timed["wall_time_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn max_level_keeps_a_prefix_of_the_lattice() {
    let full = od_texts(&json(&taxes(&["discover", "--format", "json"])));
    let capped = json(&taxes(&[
        "discover",
        "--format",
        "json",
        "--max-level",
        "2",
    ]));
    assert_eq!(capped["result"]["complete"], false);
    let entries = capped["result"]["ods"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        assert!(e["level"].as_u64().unwrap() <= 2);
        assert!(full.contains(&e["text"].as_str().unwrap().to_string()));
    }
    let full_low = json(&taxes(&["discover", "--format", "json"]))["result"]["ods"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["level"].as_u64().unwrap() <= 2)
        .count();
    assert_eq!(entries.len(), full_low);
}

#[test]
fn no_prune_changes_only_the_stats() {
    let pruned = json(&taxes(&["discover", "--format", "json"]));
    let unpruned = json(&taxes(&["discover", "--format", "json", "--no-prune"]));
    assert_eq!(unpruned["result"]["algorithm"], "fastod_unpruned");
    assert_eq!(od_texts(&pruned), od_texts(&unpruned));
    let nodes = |r: &Value| -> u64 {
        r["stats"]["levels"]
            .as_array()
            .unwrap()
            .iter()
            .map(|l| l["nodes_generated"].as_u64().unwrap())
            .sum()
    };
    assert!(nodes(&pruned) < nodes(&unpruned));
}

#[test]
fn validate_lists_split_witnesses() {
    let out = taxes(&["validate", "{posit}: [] |-> sal", "--witnesses"]);
    assert_eq!(code(&out), 1);
    assert_eq!(lines(&out), ["false"]);
    assert!(stdout(&out).contains("# split {posit}: [] |-> sal: (t1,t4) (t2,t5) (t3,t6)"));

    let report = json(&taxes(&[
        "validate",
        "{posit}: [] |-> sal",
        "--witnesses",
        "--format",
        "json",
    ]));
    let w = &report["result"]["witnesses"][0];
    assert_eq!(w["kind"], "split");
    assert_eq!(w["pairs"], serde_json::json!([[1, 4], [2, 5], [3, 6]]));
}

#[test]
fn validate_list_ods() {
    let out = taxes(&["validate", "[yr,sal] -> [yr,bin]"]);
    assert_eq!(code(&out), 0);
    assert_eq!(lines(&out), ["true"]);

    let report = json(&taxes(&[
        "validate",
        "[sal] -> [subg]",
        "--witnesses",
        "--format",
        "json",
    ]));
    assert_eq!(report["result"]["form"], "list");
    assert_eq!(report["result"]["valid"], false);
    let swaps: Vec<&Value> = report["result"]["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|w| w["kind"] == "swap")
        .collect();
    assert_eq!(swaps.len(), 1);
    assert!(swaps[0]["pairs"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([1, 2])));
}

#[test]
fn validate_rejects_bad_input() {
    assert_eq!(code(&taxes(&["validate", "{posit}: posit ~ sal"])), 2);
    assert_eq!(code(&taxes(&["validate", "{nope}: [] |-> sal"])), 2);
    assert_eq!(code(&taxes(&["validate", "{posit: [] |-> sal"])), 2);
    assert_eq!(code(&run(&["validate", "{}: [] |-> A"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn map_examples() {
    let out = run(&["map", "[A,B] -> [C,D]"]);
    assert_eq!(code(&out), 0);
    let mut got = lines(&out);
    got.sort();
    let mut expected = vec![
        "{A,B}: [] |-> C",
        "{A,B}: [] |-> D",
        "{}: A ~ C",
        "{A}: B ~ C",
        "{C}: A ~ D",
        "{A,C}: B ~ D",
    ];
    expected.sort();
    assert_eq!(got, expected);

    assert!(lines(&run(&["map", "[A] -> [A]"])).is_empty());
    assert_eq!(lines(&run(&["map", "[] -> [A]"])), ["{}: [] |-> A"]);

    let report = json(&run(&["map", "[B,A] -> [C]", "--format", "json"]));
    assert_eq!(
        report["result"]["attributes"],
        serde_json::json!(["B", "A", "C"])
    );
    assert_eq!(report["input"], Value::Null);
}

#[test]
fn infer_examples() {
    let p = premise_file("{sal}: [] |-> tax\n");
    let path = p.path().to_str().unwrap();
    let out = run(&["infer", "{sal}: tax ~ yr", "--premises", path, "--trace"]);
    assert_eq!(code(&out), 0);
    assert_eq!(lines(&out), ["yes"]);
    assert!(stdout(&out).contains("by Propagate"));

    assert_eq!(code(&run(&["infer", "{A}: B ~ C"])), 1);

    let p = premise_file("# one premise\n\n{B}: [] |-> A\n");
    let out = run(&[
        "infer",
        "{B,C}: [] |-> A",
        "--premises",
        p.path().to_str().unwrap(),
        "--trace",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["result"]["answer"], "derivable");
    let steps = report["result"]["derivation"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["rule"], "Augmentation-I");
}

#[test]
fn infer_reads_json_premises_and_reports_limits() {
    let p = premise_file(
        r#"{"universe": ["A","B","C","D","E","F"], "premises": [], "limits": {"max_chain_length": 1}}"#,
    );
    let path = p.path().to_str().unwrap();
    let out = run(&["infer", "{}: A ~ B", "--premises", path, "--format", "json"]);
    assert_eq!(code(&out), 3);
    let report = json(&out);
    assert_eq!(report["result"]["answer"], "not_derivable_within_limits");
    assert_eq!(report["result"]["limits"]["max_chain_length"], 1);
    assert_eq!(report["result"]["limits"]["exhaustive"], false);

    // unknown names are rejected once a universe is given
    assert_eq!(code(&run(&["infer", "{}: A ~ Z", "--premises", path])), 2);

    let p = premise_file(r#"{"premises": ["[A] -> [B]"], "bogus": 1}"#);
    assert_eq!(
        code(&run(&[
            "infer",
            "{}: A ~ B",
            "--premises",
            p.path().to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn infer_accepts_list_ods() {
    let p = premise_file("[A] -> [B]\n[B] -> [C]\n");
    let path = p.path().to_str().unwrap();
    assert_eq!(code(&run(&["infer", "[A] -> [C]", "--premises", path])), 0);
    assert_eq!(code(&run(&["infer", "[C] -> [A]", "--premises", path])), 1);
}

#[test]
fn discovered_ods_feed_back_as_premises() {
    let out = taxes(&["discover"]);
    let p = premise_file(&stdout(&out));
    let schema = data("taxes.json");
    let path = p.path().to_str().unwrap();
    // implied by {sal}: [] |-> tax and friends
    for target in [
        "{sal,yr}: [] |-> tax",
        "[sal] -> [sal,tax]",
        "{yr}: bin ~ sal",
    ] {
        let out = run(&["infer", target, "--premises", path, "--schema", &schema]);
        assert_eq!(code(&out), 0, "{target}: {}", stdout(&out));
    }
}

#[test]
fn input_errors() {
    assert_eq!(code(&run(&["discover"])), 2);
    assert_eq!(code(&run(&["discover", "--input", "/no/such/file.csv"])), 2);
    let out = taxes(&["discover", "--oracle", "--budget", "10"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn schema_is_inferred_when_absent() {
    let out = run(&[
        "discover",
        "--input",
        &data("taxes.csv"),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let with_schema = json(&taxes(&["discover", "--format", "json"]));
    assert_eq!(od_texts(&json(&out)), od_texts(&with_schema));
}
