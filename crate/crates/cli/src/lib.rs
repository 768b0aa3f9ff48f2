//! The `multival` command line.
//!
//! Every command writes a line-oriented report of `KEY: value` lines. Each
//! numeric claim is backed by a `WITNESS:` line that [`witness::check_line`]
//! re-verifies from its text alone; `--audit` runs that check over the
//! report before it is printed.
//!
//! Exit codes: 0 success or holds, 1 usage error, 2 refutation or
//! counterexample, 3 unknown within the search bounds.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod demo;
pub mod input;
pub mod report;
pub mod witness;

use input::CliError;
use report::{Report, EXIT_OK, EXIT_REFUTED, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "multival", version, about = "Exact valuations, semilocal rings and field topologies on Q and Q(i)")]
pub struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of randomized trials.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: u64,
    /// Re-verify every witness line before printing.
    #[arg(long, global = true)]
    pub audit: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct ElementArgs {
    /// `Q` or `Qi`; defaults to the field of the valuations.
    #[arg(long)]
    pub field: Option<String>,
    /// Comma-separated valuations, e.g. `Q:2,Q:3` or `Qi:2+1*i`.
    #[arg(long)]
    pub vals: String,
    #[arg(required = true, allow_hyphen_values = true)]
    pub elements: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Valuations of field elements.
    Val(ElementArgs),
    /// Extended residues of field elements.
    Residue(ElementArgs),
    /// Solve a weak-approximation system.
    Approx {
        #[arg(long)]
        field: Option<String>,
        /// `Q:2=1`, `Q:3>=0`, `Q:5>-1` or `Q:3:x-1>=2`.
        #[arg(long = "target", required = true, allow_hyphen_values = true)]
        targets: Vec<String>,
    },
    /// Scramble a tuple by integer row operations.
    Scramble {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        vals: String,
        /// `;`-separated nonzero entries.
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
    },
    /// Questions about a ring spec such as `mv(Q:2,Q:3)`.
    Ring {
        #[arg(long)]
        spec: String,
        #[command(subcommand)]
        op: RingOp,
    },
    /// Questions about the topology of a ring spec.
    Topo {
        #[arg(long)]
        spec: String,
        #[command(subcommand)]
        op: TopoOp,
    },
    /// Local sentences: syntax and polarity checks, bounded evaluation.
    Locsent {
        #[command(subcommand)]
        op: LocsentOp,
    },
    /// Worked examples, fully verified.
    Demo {
        #[command(subcommand)]
        which: DemoOp,
    },
    /// Re-verify the witness lines of a saved report.
    Audit { file: String },
}

#[derive(Subcommand, Debug)]
pub enum RingOp {
    Contains {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    Unit {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Membership in the Jacobson radical.
    Jacobson {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    #[command(name = "local?", alias = "local")]
    Local,
    /// Membership of `x` in the module generated by `--gens`.
    Member {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
    },
    /// A single generator of a finitely generated module.
    Generator {
        #[arg(allow_hyphen_values = true)]
        gens: String,
    },
    Independent {
        #[arg(allow_hyphen_values = true)]
        tuple: String,
    },
    #[command(name = "integral-witness")]
    IntegralWitness {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    Localizations,
    Closure,
    /// Whether `c * spec` lies in `--into` for some nonzero `c`.
    Embeds {
        #[arg(long)]
        into: String,
    },
    #[command(name = "co-embeddable")]
    CoEmbeddable { other: String },
    /// Write `x` as a quotient of ring elements.
    Fraction {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// A scrambled tuple none of whose `a`-multiples lies in the span of the others.
    #[command(name = "re-slide")]
    ReSlide {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TopoOp {
    Components,
    #[command(name = "v-coarsenings")]
    VCoarsenings,
    #[command(name = "local?", alias = "local")]
    Local,
    /// Independent-sum check against the local components or `--parts`.
    #[command(name = "indep-sum")]
    IndepSum {
        /// `;`-separated ring specs.
        #[arg(long)]
        parts: Option<String>,
    },
    /// Whether this topology is coarser than `other`.
    Coarser { other: String },
    /// Associativity of independent sums over random prime triples.
    Associativity,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Sentence file; `-` reads standard input.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    pub file: Option<String>,
    /// `locality`, `generation` or `generation-converse`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// A ring spec for `tau`, or `NAME=SPEC`; repeatable.
    #[arg(long = "spec", required = true)]
    pub specs: Vec<String>,
    #[arg(long, default_value_t = 4)]
    pub scale_bound: i64,
    #[arg(long, default_value_t = 1000)]
    pub height: i64,
    #[arg(long, default_value_t = 12)]
    pub samples: u64,
    #[arg(long, default_value_t = 2_000_000)]
    pub budget: u64,
    /// Extra field elements for the search, `;`-separated.
    #[arg(long = "seed-elements", allow_hyphen_values = true)]
    pub seed_elements: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum LocsentOp {
    /// Parse a sentence file and check its polarity.
    Check { file: String },
    Eval(EvalArgs),
    /// Print a built-in sentence.
    Builtin { name: String },
}

#[derive(Subcommand, Debug)]
pub enum DemoOp {
    /// The residue-glued ring over the two primes above 5.
    Ww,
    /// Decomposition of the topology of `Z_(p) ∩ Z_(q) ∩ ...`.
    Decompose {
        #[arg(long, default_value = "2,3,5")]
        primes: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(mut report) => {
            let mut stderr = String::new();
            if cli.audit {
                let (checked, failed) = witness::audit_text(&report.text());
                report.kv("AUDIT", format!("{}/{checked} witnesses re-verified", checked - failed.len()));
                for (line, why) in &failed {
                    stderr.push_str(&format!("audit failed ({why}): {line}\n"));
                }
                if !failed.is_empty() {
                    report.escalate(EXIT_REFUTED);
                }
            }
            Output {
                code: report.code,
                stdout: report.text(),
                stderr,
            }
        }
        Err(CliError { code, message }) => Output {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Val(a) => commands::val(a),
        Command::Residue(a) => commands::residue(a),
        Command::Approx { field, targets } => commands::approx(field.as_deref(), targets),
        Command::Scramble { field, vals, tuple } => commands::scramble(field.as_deref(), vals, tuple),
        Command::Ring { spec, op } => commands::ring(spec, op),
        Command::Topo { spec, op } => commands::topo(spec, op, cli.trials, cli.seed),
        Command::Locsent { op } => commands::locsent(op, cli.seed),
        Command::Demo { which } => match which {
            DemoOp::Ww => demo::ww(),
            DemoOp::Decompose { primes } => demo::decompose(primes, cli.trials, cli.seed),
        },
        Command::Audit { file } => commands::audit_file(file),
    }
}
