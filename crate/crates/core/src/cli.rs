//! Argument parsing shared by the `qsi` binary and the C bindings.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::costs::ChannelKind;
use crate::error::{QsiError, Result};
use crate::report::{run, Command, RunOptions, RunReport, DEFAULT_TOL};

/// Resource costs of quantum state transfer with side information.
#[derive(Parser, Debug)]
#[command(name = "qsi", version, about)]
pub struct Cli {
    /// Emit one JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Tolerance for every identity check.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Seed for random state kinds that do not set one.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Args, Debug)]
pub struct StateArg {
    /// State document (JSON).
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Optimal rates for one usage selection.
    Costs {
        #[command(flatten)]
        state: StateArg,
        #[arg(long, value_name = "I")]
        use_alice: usize,
        #[arg(long, value_name = "J")]
        use_bob: usize,
        #[arg(long, default_value = "quantum", value_parser = parse_channel)]
        channel: ChannelKind,
    },
    /// All four rates over every (i, j).
    Grid {
        #[command(flatten)]
        state: StateArg,
    },
    /// Effects of side information, with closed forms and identity checks.
    Effects {
        #[command(flatten)]
        state: StateArg,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Starting usage for additional effects.
        #[arg(long, num_args = 2, value_names = ["I1", "J1"])]
        from: Option<Vec<usize>>,
    },
    /// Chain-rule audit of I(target; chain).
    Chain {
        #[command(flatten)]
        state: StateArg,
        /// Target labels, joined with '+'.
        #[arg(long)]
        target: String,
        /// Comma-separated groups; labels within a group joined with '+'.
        #[arg(long)]
        chain: String,
        /// Split point; all splits when omitted.
        #[arg(long)]
        split: Option<usize>,
    },
    /// Petz recovery of C from S1 onto C S1 S2.
    Recover {
        #[command(flatten)]
        state: StateArg,
        #[arg(long, num_args = 1.., required = true)]
        c: Vec<String>,
        #[arg(long, num_args = 1.., required = true)]
        s1: Vec<String>,
        #[arg(long, num_args = 1.., required = true)]
        s2: Vec<String>,
    },
    /// The protocols applicable to the instance.
    Catalog {
        #[command(flatten)]
        state: StateArg,
    },
}

fn parse_channel(s: &str) -> Result<ChannelKind, String> {
    s.parse().map_err(|e: QsiError| e.to_string())
}

fn split_labels(s: &str) -> Vec<String> {
    s.split('+').map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect()
}

pub fn into_command(cmd: Cmd) -> (Command, PathBuf) {
    match cmd {
        Cmd::Costs {
            state,
            use_alice,
            use_bob,
            channel,
        } => (
            Command::Costs {
                use_alice,
                use_bob,
                channel,
            },
            state.state,
        ),
        Cmd::Grid { state } => (Command::Grid, state.state),
        Cmd::Effects { state, i, j, from } => (
            Command::Effects {
                i,
                j,
                from: from.map(|v| (v[0], v[1])),
            },
            state.state,
        ),
        Cmd::Chain {
            state,
            target,
            chain,
            split,
        } => (
            Command::Chain {
                target: split_labels(&target),
                chain: chain.split(',').map(split_labels).collect(),
                split,
            },
            state.state,
        ),
        Cmd::Recover { state, c, s1, s2 } => (Command::Recover { c, s1, s2 }, state.state),
        Cmd::Catalog { state } => (Command::Catalog, state.state),
    }
}


impl Cli {
    /// Reads the state document and runs the command. `args` excludes the
    /// program name and is echoed into the report.
    pub fn execute(self, args: Vec<String>) -> Result<RunReport> {
        let options = RunOptions {
            tol: self.tol,
            seed: self.seed,
        };
        let (command, path) = into_command(self.command);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| QsiError::Document(format!("cannot read {}: {e}", path.display())))?;
        run(&command, &text, &options, args)
    }
}
