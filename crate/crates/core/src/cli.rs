//! Command-line front end. [`run`] does all the work so tests can drive it
//! without spawning a process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::instance::{parse_instance, render_instance, InstanceError};
use crate::multispace::{
    additive_formula_check, is_multi_subspace, Caps, MultiVectorSpace, OperationPolicy,
};
use crate::search::{find_formula_discrepancies, minimize_counterexample, GeneratorConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CAP: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "multispace",
    version,
    about = "Exact multi-vector spaces over prime fields"
)]
pub struct Cli {
    /// Override the policy given in instance files (TOTAL or CLOSED).
    #[arg(long, global = true, value_parser = parse_policy)]
    pub policy: Option<OperationPolicy>,

    /// Enumeration cap.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

fn parse_policy(s: &str) -> Result<OperationPolicy, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms by exhaustive enumeration.
    Validate { instance: PathBuf },
    /// Print the greedy basis, one vector per line.
    Basis { instance: PathBuf },
    /// Compare the greedy dimension with the inclusion-exclusion value.
    Dim { instance: PathBuf },
    /// Decide whether the candidate is a multi-vector subspace of the instance.
    CheckSubspace {
        instance: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
    },
    /// Check dim(V ∪ W) = dim V + dim W - dim(V ∩ W) against another instance.
    Compare {
        instance: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Search random instances for dimension formula disagreements.
    Search {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated primes to draw fields from.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long, default_value_t = 4)]
        max_components: usize,
        #[arg(long, default_value_t = 2)]
        max_ambients: usize,
        /// Shrink each finding before printing it.
        #[arg(long)]
        minimize: bool,
    },
}

enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(e) if e.is_cap_exceeded() => EXIT_CAP,
            _ => EXIT_INPUT,
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

struct Loader {
    policy: Option<OperationPolicy>,
    caps: Caps,
}

impl Loader {
    fn load(&self, path: &Path) -> Result<MultiVectorSpace, Failure> {
        let bytes =
            std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8(bytes)
            .map_err(|_| Failure::Input(format!("{}: not valid UTF-8", path.display())))?;
        let m = parse_instance(&text)
            .map_err(|e: InstanceError| Failure::Input(format!("{}: {e}", path.display())))?;
        let m = m.with_caps(self.caps);
        Ok(match self.policy {
            Some(p) => m.with_policy(p),
            None => m,
        })
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = match &f {
                Failure::Input(msg) => writeln!(err, "error: {msg}"),
                Failure::Core(e) => writeln!(err, "error: {e}"),
            };
            f.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let mut caps = Caps::default();
    if let Some(cap) = cli.cap {
        caps.enumeration = cap;
    }
    let loader = Loader {
        policy: cli.policy,
        caps,
    };
    let mut text = String::new();
    match &cli.command {
        Command::Validate { instance } => {
            let m = loader.load(instance)?;
            let r = m.validate_axioms()?;
            text += &format!("policy={} components={}\n", m.policy(), m.k());
            text += &format!(
                "closure checked={} violations={}\n",
                r.closure_checks,
                r.closure_violations.len()
            );
            text += &format!(
                "associativity checked={} violations={}\n",
                r.associativity_checks,
                r.associativity_violations.len()
            );
            text += &format!(
                "distributivity checked={} violations={}\n",
                r.distributivity_checks,
                r.distributivity_violations.len()
            );
            for v in r
                .closure_violations
                .iter()
                .chain(&r.associativity_violations)
                .chain(&r.distributivity_violations)
            {
                text += &format!("  violation: {v}\n");
            }
            text += &format!("valid={}\n", yes_no(r.is_valid()));
        }
        Command::Basis { instance } => {
            let m = loader.load(instance)?;
            for v in m.greedy_basis(None)? {
                let coords: Vec<String> = v.coords().iter().map(|x| x.to_string()).collect();
                text += &format!("{} {}\n", v.ambient().label(), coords.join(","));
            }
        }
        Command::Dim { instance } => {
            let m = loader.load(instance)?;
            let greedy = m.dim_greedy()?;
            let ie = m.dim_inclusion_exclusion()?;
            text += &format!(
                "greedy={greedy} inclusion-exclusion={ie} agree={}\n",
                yes_no(greedy as i64 == ie)
            );
        }
        Command::CheckSubspace {
            instance,
            candidate,
        } => {
            let parent = loader.load(instance)?;
            let cand = loader.load(candidate)?;
            let verdict = is_multi_subspace(&cand, &parent)?;
            text += &format!("multi-subspace={}\n", yes_no(verdict));
        }
        Command::Compare { instance, other } => {
            let first = loader.load(instance)?;
            let second = loader.load(other)?;
            let r = additive_formula_check(&first, &second)?;
            text += &format!(
                "dim-union={} dim-first={} dim-second={} dim-intersection={} right-side={} agree={}\n",
                r.union_dim,
                r.first_dim,
                r.second_dim,
                r.intersection_dim,
                r.right_side(),
                yes_no(r.agree())
            );
        }
        Command::Search {
            trials,
            seed,
            primes,
            max_dim,
            max_components,
            max_ambients,
            minimize,
        } => {
            let cfg = GeneratorConfig {
                primes: primes.clone(),
                max_ambient_dim: *max_dim,
                max_components: *max_components,
                max_ambients: *max_ambients,
                policy: cli.policy.unwrap_or_default(),
                seed: *seed,
            };
            let reports = find_formula_discrepancies(&cfg, *trials).map_err(|e| match e {
                e if e.is_cap_exceeded() => Failure::Core(e),
                e => Failure::Input(format!("invalid search configuration: {e}")),
            })?;
            for r in &reports {
                let r = if *minimize {
                    minimize_counterexample(r)
                } else {
                    r.clone()
                };
                text += &format!(
                    "finding draw={} seed={} inclusion-exclusion={} greedy={}\n",
                    r.draw, r.seed, r.ie_value, r.greedy_value
                );
                for line in render_instance(&r.instance).lines() {
                    text += &format!("  {line}\n");
                }
                text += "end\n";
            }
            text += &format!("trials={} findings={}\n", trials, reports.len());
        }
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Input(format!("writing output: {e}")))?;
    Ok(())
}
