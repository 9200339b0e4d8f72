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

//! `orderdeps` command-line tool.
//!
//! Exit codes: 0 success, 1 the OD does not hold or does not follow,
//! 2 usage or parse error, 3 a budget or derivation limit was hit.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orderdeps::NullPolicy;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "orderdeps",
    version,
    about = "Order dependency discovery and reasoning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Debug)]
pub enum Command {
    /// Discover a complete, minimal set of canonical ODs in a CSV file.
    Discover,
    /// Check a list or canonical OD against a CSV file.
    Validate {
        /// e.g. "[yr,sal] -> [yr,bin]" or "{posit}: [] |-> bin"
        od: String,
    },
    /// Rewrite a list OD as an equivalent set of canonical ODs.
    Map { od: String },
    /// Decide whether an OD follows from a set of premises.
    Infer { target: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Discover => "discover",
            Command::Validate { .. } => "validate",
            Command::Map { .. } => "map",
            Command::Infer { .. } => "infer",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NullArg {
    First,
    Last,
    Reject,
}

impl From<NullArg> for NullPolicy {
    fn from(n: NullArg) -> Self {
        match n {
            NullArg::First => NullPolicy::NullsFirst,
            NullArg::Last => NullPolicy::NullsLast,
            NullArg::Reject => NullPolicy::Reject,
        }
    }
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct Opts {
    /// CSV input with a header row unless --no-header is given.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// JSON schema; column types are guessed from the data when absent.
    #[arg(long, global = true)]
    pub schema: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest lattice level to process.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_level: Option<u32>,
    /// Disable node pruning and the superkey shortcuts.
    #[arg(long, global = true)]
    pub no_prune: bool,
    /// Use the exhaustive reference search instead of the lattice traversal.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Candidate validation budget for --oracle.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// List violating tuple pairs for ODs that do not hold.
    #[arg(long, global = true)]
    pub witnesses: bool,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Overrides the schema's null placement.
    #[arg(long, global = true, value_enum)]
    pub null_policy: Option<NullArg>,
    /// The CSV has no header row. Requires --schema.
    #[arg(long, global = true)]
    pub no_header: bool,
    /// Echoed in the report; every algorithm here is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Premises for `infer`: one OD per line, or a JSON object.
    #[arg(long, global = true)]
    pub premises: Option<PathBuf>,
    /// Largest context the inference search may build.
    #[arg(long, global = true)]
    pub max_context: Option<usize>,
    /// Most intermediate attributes in one Chain step.
    #[arg(long, global = true)]
    pub max_chain: Option<usize>,
    /// Print a derivation for `infer` answers of yes.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Record wall time in the report. Off by default so reruns are
    /// byte-identical.
    #[arg(long, global = true)]
    pub timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match commands::run(&cli.command, &cli.opts) {
        Ok(done) => {
            let code = done.exit_code;
            let mut rep = report::RunReport::new(cli.command.name(), cli.opts.clone(), done);
            if cli.opts.timing {
                rep.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            match cli.opts.format {
                Format::Json => println!("{}", rep.to_json()),
                Format::Text => print!("{}", rep.to_text()),
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
