//! Command-line front end of the `repcat` engine.
//!
//! Every command loads a session file (see [`session`]), runs one
//! computation and produces a [`Report`], printed as text or, with
//! `--json`, as pretty JSON. Exit codes: 0 success or true, 1 a
//! well-formed question answered "no", 2 input error, 3 unknown name,
//! 4 internal invariant breach.

pub mod commands;
pub mod session;
pub mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use repcat::interp::Budget;
use repcat::Rational;
use serde::Serialize;
use serde_json::Value;

pub use session::{Session, SessionError};

#[derive(Debug, Parser)]
#[command(name = "engine", version, about = "Regular theories of quiver representations, exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Session file (text or JSON).
    #[arg(long)]
    pub session: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub max_ctx_vars: Option<usize>,
    #[arg(long)]
    pub max_bound_vars: Option<usize>,
    #[arg(long)]
    pub max_eqs: Option<usize>,
    #[arg(long)]
    pub max_path_len: Option<usize>,
    /// Comma-separated rationals, e.g. `-1,0,1,2`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// Most monomials in one equation.
    #[arg(long)]
    pub max_terms: Option<usize>,
}

impl BudgetArgs {
    /// `base` with every given flag applied.
    pub fn apply(&self, base: Budget) -> Result<Budget, CliError> {
        let mut b = base;
        if let Some(n) = self.max_ctx_vars {
            b.max_ctx_vars = n;
        }
        if let Some(n) = self.max_bound_vars {
            b.max_bound_vars = n;
        }
        if let Some(n) = self.max_eqs {
            b.max_eqs = n;
        }
        if let Some(n) = self.max_path_len {
            b.max_path_len = n;
        }
        if let Some(n) = self.max_terms {
            b.max_terms = n;
        }
        if let Some(list) = &self.coeffs {
            b.coeffs = list
                .split(',')
                .map(|c| c.trim().parse::<Rational>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Input(format!("--coeffs: {e}")))?;
        }
        Ok(b)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interpret a named formula in a representation.
    Interp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        formula: String,
    },
    /// Decide whether `lhs ⊢ rhs` holds in a representation.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Compare the regular theories of two representations within a budget.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Exactly two representation names.
        #[arg(long, num_args = 2, required = true)]
        rep: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Endomorphism algebra of a representation restricted to some vertices.
    End {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rep: String,
        /// Comma-separated vertex names; all vertices when omitted.
        #[arg(long)]
        vertices: Option<String>,
    },
    /// Constructions in the category of definable objects.
    Cat {
        #[command(subcommand)]
        command: CatCommand,
    },
    /// Run the invariant suite on every representation of a session.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Objects are written `PHI/PSI` with formula names, or `PHI` for `PHI/0`.
#[derive(Debug, Subcommand)]
pub enum CatCommand {
    Object {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        obj: String,
    },
    Morphism {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arrow: ArrowArgs,
    },
    Kernel {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arrow: ArrowArgs,
    },
    Cokernel {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arrow: ArrowArgs,
    },
    Biproduct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rep: String,
        /// Exactly two objects.
        #[arg(long, num_args = 2, required = true)]
        obj: Vec<String>,
    },
    Hom {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        dom: String,
        #[arg(long)]
        cod: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ArrowArgs {
    #[arg(long)]
    pub rep: String,
    #[arg(long)]
    pub dom: String,
    #[arg(long)]
    pub cod: String,
    /// Formula in the context `dom ++ cod` defining the graph.
    #[arg(long)]
    pub theta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}{}{source}", if matches!(source, SessionError::Syntax { .. }) { ":" } else { ": " })]
    Session { path: String, source: SessionError },
    #[error("{0}")]
    Input(String),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("invariant breach: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Session { .. } | CliError::Input(_) => 2,
            CliError::UnknownName { .. } => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_BREACH: i32 = 4;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub arguments: BTreeMap<String, Value>,
    pub session_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
    pub result: Value,
    pub exit_code: i32,
    /// Wall-clock time; the only field that varies between runs.
    pub timing_ms: f64,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}  (session {})\n", self.command, &self.session_sha256[..12.min(self.session_sha256.len())]);
        if let Some(b) = &self.budget {
            let coeffs: Vec<String> = b.coeffs.iter().map(ToString::to_string).collect();
            out.push_str(&format!(
                "budget: ctx {} bound {} eqs {} path {} terms {} coeffs {{{}}}\n",
                b.max_ctx_vars,
                b.max_bound_vars,
                b.max_eqs,
                b.max_path_len,
                b.max_terms,
                coeffs.join(",")
            ));
        }
        for l in &self.text {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

/// Parses the process arguments and runs the command, returning the
/// rendered output and the exit code.
pub fn run_cli<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return if e.use_stderr() { (String::new(), e.to_string(), code) } else { (e.to_string(), String::new(), code) };
        }
    };
    let json = cli.command.json();
    match commands::execute(&cli.command) {
        Ok(r) => (if json { r.to_json() } else { r.to_text() }, String::new(), r.exit_code),
        Err(e) => (String::new(), format!("error: {e}\n"), e.exit_code()),
    }
}

impl Command {
    pub fn json(&self) -> bool {
        self.common().json
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Interp { common, .. }
            | Command::Check { common, .. }
            | Command::Compare { common, .. }
            | Command::End { common, .. }
            | Command::Verify { common, .. } => common,
            Command::Cat { command } => match command {
                CatCommand::Object { common, .. }
                | CatCommand::Morphism { common, .. }
                | CatCommand::Kernel { common, .. }
                | CatCommand::Cokernel { common, .. }
                | CatCommand::Biproduct { common, .. }
                | CatCommand::Hom { common, .. } => common,
            },
        }
    }
}
