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

//! Run reports. Field order in the structs below is the key order of the
//! JSON output.

use std::fmt::Write as _;

use orderdeps::discovery::DiscoveryStats;
use orderdeps::odmodel::syntax::format_canonical;
use orderdeps::{CanonicalOD, OdForm};
use serde::Serialize;

use crate::Opts;

#[derive(Debug, Serialize)]
pub struct InputFingerprint {
    pub path: String,
    pub rows: usize,
    pub columns: usize,
    /// SHA-256 of the effective schema as JSON.
    pub schema_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct OdEntry {
    pub text: String,
    pub kind: &'static str,
    pub level: usize,
    pub context: Vec<String>,
    pub attributes: Vec<String>,
}

impl OdEntry {
    pub fn new<S: AsRef<str>>(od: &CanonicalOD, names: &[S]) -> Self {
        let name = |a: usize| names[a].as_ref().to_string();
        let (kind, attributes) = match od.form() {
            OdForm::Constant(a) => ("constant", vec![name(a)]),
            OdForm::OrderCompat(a, b) => ("order_compatible", vec![name(a), name(b)]),
        };
        OdEntry {
            text: format_canonical(od, names),
            kind,
            level: od.level(),
            context: od.context().iter().map(name).collect(),
            attributes,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DiscoverResult {
    pub algorithm: &'static str,
    pub complete: bool,
    pub levels_processed: usize,
    pub count: usize,
    pub ods: Vec<OdEntry>,
}

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub od: String,
    pub valid: bool,
}

#[derive(Debug, Serialize)]
pub struct Witness {
    pub od: String,
    pub kind: &'static str,
    /// 1-based tuple ids.
    pub pairs: Vec<[usize; 2]>,
}

#[derive(Debug, Serialize)]
pub struct ValidateResult {
    pub od: String,
    pub form: &'static str,
    pub valid: bool,
    /// Canonical members of a list OD with their own verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mapped: Option<Vec<Verdict>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Witness>>,
}

#[derive(Debug, Serialize)]
pub struct MapResult {
    pub od: String,
    pub attributes: Vec<String>,
    pub count: usize,
    pub canonical: Vec<OdEntry>,
}

#[derive(Debug, Serialize)]
pub struct LimitsOut {
    /// `null` means unbounded.
    pub max_context_size: Option<usize>,
    pub max_chain_length: usize,
    pub exhaustive: bool,
}

#[derive(Debug, Serialize)]
pub struct StepOut {
    pub conclusion: String,
    pub rule: String,
    pub premises: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct InferResult {
    pub universe: Vec<String>,
    pub premises: Vec<String>,
    pub target: String,
    pub limits: LimitsOut,
    /// `derivable`, `not_derivable` or `not_derivable_within_limits`.
    pub answer: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Vec<StepOut>>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Discover(DiscoverResult),
    Validate(ValidateResult),
    Map(MapResult),
    Infer(InferResult),
}

/// What a command hands back before the report is assembled.
pub struct Done {
    pub input: Option<InputFingerprint>,
    pub result: Payload,
    pub stats: Option<DiscoveryStats>,
    pub exit_code: u8,
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub flags: Opts,
    pub input: Option<InputFingerprint>,
    pub result: Payload,
    pub stats: Option<DiscoveryStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &'static str, flags: Opts, done: Done) -> Self {
        RunReport {
            command,
            flags,
            input: done.input,
            result: done.result,
            stats: done.stats,
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain output: result lines first, then `#` comment lines, so the OD
    /// lines can be fed back to `validate` or used as premises.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.result {
            Payload::Discover(d) => {
                for od in &d.ods {
                    let _ = writeln!(out, "{}", od.text);
                }
                let _ = writeln!(
                    out,
                    "# {} ODs by {}, {} levels{}",
                    d.count,
                    d.algorithm,
                    d.levels_processed,
                    if d.complete {
                        ""
                    } else {
                        ", stopped at --max-level"
                    }
                );
            }
            Payload::Validate(v) => {
                let _ = writeln!(out, "{}", v.valid);
                for m in v.mapped.iter().flatten() {
                    let _ = writeln!(
                        out,
                        "# {}  {}",
                        if m.valid { "holds" } else { "fails" },
                        m.od
                    );
                }
                for w in v.witnesses.iter().flatten() {
                    let pairs: Vec<String> = w
                        .pairs
                        .iter()
                        .map(|[s, t]| format!("(t{s},t{t})"))
                        .collect();
                    let _ = writeln!(out, "# {} {}: {}", w.kind, w.od, pairs.join(" "));
                }
            }
            Payload::Map(m) => {
                for od in &m.canonical {
                    let _ = writeln!(out, "{}", od.text);
                }
                let _ = writeln!(out, "# {} maps to {} canonical ODs", m.od, m.count);
            }
            Payload::Infer(i) => {
                let answer = match i.answer {
                    "derivable" => "yes",
                    "not_derivable" => "no",
                    _ => "not derivable within limits",
                };
                let _ = writeln!(out, "{answer}");
                for s in i.derivation.iter().flatten() {
                    if s.premises.is_empty() {
                        let _ = writeln!(out, "# {}  by {}", s.conclusion, s.rule);
                    } else {
                        let _ = writeln!(
                            out,
                            "# {}  by {} from {}",
                            s.conclusion,
                            s.rule,
                            s.premises.join("; ")
                        );
                    }
                }
            }
        }
        if let Some(stats) = &self.stats {
            for l in &stats.levels {
                let _ = writeln!(
                    out,
                    "# level {}: {} nodes, {} pruned, {} constant checks, {} swap checks, {} keys, {} constants, {} order compatible",
                    l.level,
                    l.nodes_generated,
                    l.nodes_pruned,
                    l.constant_checks,
                    l.swap_checks,
                    l.keys_found,
                    l.constants_found,
                    l.order_compat_found
                );
            }
        }
        if let Some(input) = &self.input {
            let _ = writeln!(
                out,
                "# input {}: {} rows, {} columns, schema {}",
                input.path,
                input.rows,
                input.columns,
                &input.schema_sha256[..16]
            );
        }
        if let Some(seed) = self.flags.seed {
            let _ = writeln!(out, "# seed {seed}");
        }
        if let Some(ms) = self.wall_time_ms {
            let _ = writeln!(out, "# wall time {ms:.3} ms");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use orderdeps::AttributeSet;

    #[test]
    fn od_entries_name_their_parts() {
        let names = ["a", "b", "c"];
        let od = CanonicalOD::order_compat(AttributeSet::single(0), 2, 1).unwrap();
        let e = OdEntry::new(&od, &names);
        assert_eq!(e.text, "{a}: b ~ c");
        assert_eq!(e.kind, "order_compatible");
        assert_eq!(e.level, 3);
        assert_eq!(e.context, ["a"]);
        assert_eq!(e.attributes, ["b", "c"]);
    }

    #[test]
    fn text_output_puts_results_before_comments() {
        let od = CanonicalOD::constant(AttributeSet::EMPTY, 0).unwrap();
        let done = Done {
            input: None,
            result: Payload::Map(MapResult {
                od: "[] -> [x]".into(),
                attributes: vec!["x".into()],
                count: 1,
                canonical: vec![OdEntry::new(&od, &["x"])],
            }),
            stats: None,
            exit_code: 0,
        };
        let opts = <crate::Cli as clap::Parser>::parse_from([
            "orderdeps",
            "map",
            "[] -> [x]",
            "--seed",
            "3",
        ])
        .opts;
        let rep = RunReport::new("map", opts, done);
        assert_eq!(
            rep.to_text(),
            "{}: [] |-> x\n# [] -> [x] maps to 1 canonical ODs\n# seed 3\n"
        );
        let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(json["result"]["canonical"][0]["kind"], "constant");
        assert_eq!(json["flags"]["seed"], 3);
    }
}
