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

use std::collections::BTreeSet;
use std::fs::File;
use std::path::Path;

use orderdeps::inference::{derive, Derivation, Step};
use orderdeps::odmodel::syntax::{
    format_canonical, format_list, parse_od, parse_raw, ParsedOd, RawOd,
};
use orderdeps::odmodel::{
    find_splits, find_swaps, map_list_to_canonical, validate_canonical, validate_list_od,
};
use orderdeps::oracle::{brute_discover, OracleConfig, DEFAULT_CHECK_BUDGET};
use orderdeps::relation::infer_schema;
use orderdeps::{
    discover, AttrId, Attribute, AttributeSet, CanonicalOD, DataType, DerivationLimit,
    DiscoveryConfig, Error, NullPolicy, ODSet, OdForm, Relation, Schema,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::report::{
    DiscoverResult, Done, InferResult, InputFingerprint, LimitsOut, MapResult, OdEntry, Payload,
    StepOut, ValidateResult, Verdict, Witness,
};
use crate::{Command, Opts};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => EXIT_LIMIT,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: &Command, opts: &Opts) -> Result<Done> {
    match command {
        Command::Discover => cmd_discover(opts),
        Command::Validate { od } => cmd_validate(opts, od),
        Command::Map { od } => cmd_map(od),
        Command::Infer { target } => cmd_infer(opts, target),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::usage(format!("{}: {e}", path.display()))
}

fn load(opts: &Opts) -> Result<(Relation, InputFingerprint)> {
    let path = opts
        .input
        .as_deref()
        .ok_or_else(|| CliError::usage("--input is required"))?;
    let policy = opts.null_policy.map(NullPolicy::from);
    let schema = match &opts.schema {
        Some(p) => {
            let s = Schema::from_json_file(p)?;
            match policy {
                Some(np) => s.with_null_policy(np),
                None => s,
            }
        }
        None => {
            if opts.no_header {
                return Err(CliError::usage("--no-header needs --schema"));
            }
            let file = File::open(path).map_err(|e| io_error(path, e))?;
            infer_schema(file, policy.unwrap_or_default())?
        }
    };
    let hash = Sha256::digest(schema.to_json().as_bytes());
    let rel = Relation::load_csv(path, schema, !opts.no_header)?;
    let fp = InputFingerprint {
        path: path.display().to_string(),
        rows: rel.row_count(),
        columns: rel.attr_count(),
        schema_sha256: format!("{hash:x}"),
    };
    Ok((rel, fp))
}

fn cmd_discover(opts: &Opts) -> Result<Done> {
    let (rel, input) = load(opts)?;
    let names = rel.schema().names();
    let max_level = opts.max_level.map(|l| l as usize);
    let entries =
        |set: &ODSet| -> Vec<OdEntry> { set.iter().map(|od| OdEntry::new(od, &names)).collect() };
    if opts.oracle {
        let cfg = OracleConfig {
            max_level: max_level.unwrap_or(rel.attr_count()),
            check_budget: Some(opts.budget.unwrap_or(DEFAULT_CHECK_BUDGET)),
        };
        let found = brute_discover(&rel, &cfg)?;
        let ods = entries(&found);
        return Ok(Done {
            input: Some(input),
            result: Payload::Discover(DiscoverResult {
                algorithm: "oracle",
                complete: cfg.max_level >= rel.attr_count(),
                levels_processed: cfg.max_level.min(rel.attr_count()),
                count: ods.len(),
                ods,
            }),
            stats: None,
            exit_code: EXIT_OK,
        });
    }
    let cfg = DiscoveryConfig {
        max_level,
        prune: !opts.no_prune,
        threads: opts.threads as usize,
    };
    let res = discover(&rel, &cfg);
    let ods = entries(&res.minimal_ods);
    Ok(Done {
        input: Some(input),
        result: Payload::Discover(DiscoverResult {
            algorithm: if cfg.prune {
                "fastod"
            } else {
                "fastod_unpruned"
            },
            complete: res.complete,
            levels_processed: res.levels_processed,
            count: ods.len(),
            ods,
        }),
        stats: Some(res.stats),
        exit_code: EXIT_OK,
    })
}

fn witness(rel: &Relation, od: &CanonicalOD, names: &[String]) -> Result<Witness> {
    let report = match od.form() {
        OdForm::Constant(a) => find_splits(rel, od.context(), AttributeSet::single(a))?,
        OdForm::OrderCompat(a, b) => find_swaps(rel, od.context(), a, b)?,
    };
    Ok(Witness {
        od: format_canonical(od, names),
        kind: if od.is_constant() { "split" } else { "swap" },
        pairs: report.pairs.iter().map(|&(s, t)| [s, t]).collect(),
    })
}

fn cmd_validate(opts: &Opts, text: &str) -> Result<Done> {
    let (rel, input) = load(opts)?;
    let names = rel.schema().names();
    let result = match parse_od(text, rel.schema())? {
        ParsedOd::Canonical(od) => {
            let valid = validate_canonical(&rel, &od)?;
            let witnesses = match (opts.witnesses, valid) {
                (true, false) => Some(vec![witness(&rel, &od, &names)?]),
                (true, true) => Some(Vec::new()),
                _ => None,
            };
            ValidateResult {
                od: format_canonical(&od, &names),
                form: "canonical",
                valid,
                mapped: None,
                witnesses,
            }
        }
        ParsedOd::List(od) => {
            let valid = validate_list_od(&rel, &od)?;
            let mut mapped = Vec::new();
            let mut witnesses = Vec::new();
            for c in map_list_to_canonical(&od) {
                let ok = validate_canonical(&rel, &c)?;
                if !ok && opts.witnesses {
                    witnesses.push(witness(&rel, &c, &names)?);
                }
                mapped.push(Verdict {
                    od: format_canonical(&c, &names),
                    valid: ok,
                });
            }
            ValidateResult {
                od: format_list(&od, &names),
                form: "list",
                valid,
                mapped: Some(mapped),
                witnesses: opts.witnesses.then_some(witnesses),
            }
        }
    };
    let exit_code = if result.valid { EXIT_OK } else { EXIT_FALSE };
    Ok(Done {
        input: Some(input),
        result: Payload::Validate(result),
        stats: None,
        exit_code,
    })
}

/// Resolves names against a fixed universe, or interns them in order of
/// first appearance when `fixed` is false.
struct Names {
    names: Vec<String>,
    fixed: bool,
}

impl Names {
    fn lookup(&mut self, name: &str) -> orderdeps::Result<AttrId> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        if self.fixed {
            return Err(Error::UnknownAttribute(name.to_string()));
        }
        if self.names.len() == 64 {
            return Err(Error::TooManyAttributes(65));
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    fn resolve(&mut self, raw: &RawOd) -> orderdeps::Result<ParsedOd> {
        raw.resolve(|n| self.lookup(n))
    }
}

fn cmd_map(text: &str) -> Result<Done> {
    let raw = parse_raw(text)?;
    let mut names = Names {
        names: Vec::new(),
        fixed: false,
    };
    let (od, set) = match names.resolve(&raw)? {
        ParsedOd::List(l) => (format_list(&l, &names.names), map_list_to_canonical(&l)),
        ParsedOd::Canonical(c) => (format_canonical(&c, &names.names), BTreeSet::from([c])),
    };
    let canonical: Vec<OdEntry> = set.iter().map(|c| OdEntry::new(c, &names.names)).collect();
    Ok(Done {
        input: None,
        result: Payload::Map(MapResult {
            od,
            attributes: names.names,
            count: canonical.len(),
            canonical,
        }),
        stats: None,
        exit_code: EXIT_OK,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PremiseFile {
    universe: Option<Vec<String>>,
    #[serde(default)]
    premises: Vec<String>,
    limits: Option<LimitsFile>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitsFile {
    max_context_size: Option<usize>,
    max_chain_length: Option<usize>,
}

fn read_premises(opts: &Opts) -> Result<PremiseFile> {
    let Some(path) = &opts.premises else {
        return Ok(PremiseFile {
            universe: None,
            premises: Vec::new(),
            limits: None,
        });
    };
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    // OD text is never valid JSON, so any JSON object is a premise file
    if let Ok(serde_json::Value::Object(_)) = serde_json::from_str(&text) {
        return serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())));
    }
    let premises = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect();
    Ok(PremiseFile {
        universe: None,
        premises,
        limits: None,
    })
}

/// Canonical members of a parsed OD; a list OD stands for its mapping.
fn canonical_members(od: ParsedOd) -> BTreeSet<CanonicalOD> {
    match od {
        ParsedOd::List(l) => map_list_to_canonical(&l),
        ParsedOd::Canonical(c) => BTreeSet::from([c]),
    }
}

fn step_out(step: &Step, names: &[String]) -> StepOut {
    StepOut {
        conclusion: format_canonical(&step.conclusion, names),
        rule: step.rule.to_string(),
        premises: step
            .premises
            .iter()
            .map(|p| format_canonical(p, names))
            .collect(),
    }
}

fn cmd_infer(opts: &Opts, target_text: &str) -> Result<Done> {
    let file = read_premises(opts)?;
    let mut names = match (&opts.schema, &file.universe) {
        (Some(path), _) => Names {
            names: Schema::from_json_file(path)?.names(),
            fixed: true,
        },
        (None, Some(u)) => {
            // the schema constructor enforces unique, non-empty names
            let attrs = u.iter().map(|n| Attribute::new(n.as_str(), DataType::Text));
            Schema::new(attrs.collect(), NullPolicy::default())?;
            Names {
                names: u.clone(),
                fixed: true,
            }
        }
        (None, None) => Names {
            names: Vec::new(),
            fixed: false,
        },
    };

    let mut premises = BTreeSet::new();
    for text in &file.premises {
        let raw = parse_raw(text)?;
        premises.extend(canonical_members(names.resolve(&raw)?));
    }
    let target_raw = parse_raw(target_text)?;
    let target_parsed = names.resolve(&target_raw)?;
    let target_label = match &target_parsed {
        ParsedOd::List(l) => format_list(l, &names.names),
        ParsedOd::Canonical(c) => format_canonical(c, &names.names),
    };
    let targets = canonical_members(target_parsed);

    let universe = AttributeSet::full(names.names.len());
    let set = ODSet::from_ods(universe, premises.iter().cloned())?;

    let from_file = file.limits.unwrap_or_default();
    let defaults = DerivationLimit::default();
    let lim = DerivationLimit {
        max_context_size: opts
            .max_context
            .or(from_file.max_context_size)
            .unwrap_or(defaults.max_context_size),
        max_chain_length: opts
            .max_chain
            .or(from_file.max_chain_length)
            .unwrap_or(defaults.max_chain_length),
    };

    let mut steps: Vec<Step> = Vec::new();
    let mut answer = "derivable";
    for t in &targets {
        match derive(&set, t, lim) {
            Derivation::Derivable(path) => {
                for s in path {
                    if !steps.contains(&s) {
                        steps.push(s);
                    }
                }
            }
            Derivation::NotDerivable => answer = "not_derivable",
            Derivation::NotDerivableWithinLimits => {
                if answer == "derivable" {
                    answer = "not_derivable_within_limits";
                }
            }
        }
    }
    let exit_code = match answer {
        "derivable" => EXIT_OK,
        "not_derivable" => EXIT_FALSE,
        _ => EXIT_LIMIT,
    };
    let derivation = (opts.trace && answer == "derivable")
        .then(|| steps.iter().map(|s| step_out(s, &names.names)).collect());
    let result = InferResult {
        premises: premises
            .iter()
            .map(|p| format_canonical(p, &names.names))
            .collect(),
        target: target_label,
        limits: LimitsOut {
            max_context_size: (lim.max_context_size != usize::MAX).then_some(lim.max_context_size),
            max_chain_length: lim.max_chain_length,
            exhaustive: lim.is_exhaustive(universe),
        },
        answer,
        derivation,
        universe: names.names,
    };
    Ok(Done {
        input: None,
        result: Payload::Infer(result),
        stats: None,
        exit_code,
    })
}
