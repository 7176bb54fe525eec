//! `kstruct`: batch front end. Every run prints (or writes under `--out`) its
//! artifacts plus a manifest echoing what produced them.

mod commands;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "kstruct", version, about = "Exact structure functions over finite description systems")]
struct Cli {
    /// Directory for artifacts and manifest.json; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Format for curve outputs; reports are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct SystemArg {
    /// Descriptor file, or `builtin:fixture-a`, `builtin:hamming:N`,
    /// `builtin:patches:N:M`, `builtin:cylinder:N:P`.
    #[arg(long)]
    system: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure function, MDL and deficiency profiles.
    Profile {
        #[command(flatten)]
        system: SystemArg,
        /// One string; every universe element when absent.
        #[arg(long)]
        x: Option<String>,
        /// Largest model complexity; the longest set program by default.
        #[arg(long)]
        alpha_max: Option<u32>,
        /// Additive slack for the minimal sufficient statistic; c_sub by default.
        #[arg(long, allow_hyphen_values = true)]
        slack: Option<i64>,
    },
    /// Anytime best-so-far traces over seeded enumeration orders.
    Search {
        #[command(flatten)]
        system: SystemArg,
        /// String to model.
        #[arg(long)]
        x: String,
        /// Model complexity bound.
        #[arg(long)]
        alpha: u32,
        /// Objective: `mdl`, `ml` or `direct`.
        #[arg(long, default_value = "mdl")]
        mode: String,
        /// Enumeration seed; repeat for several runs.
        #[arg(long, required = true)]
        seed: Vec<u64>,
        /// Also audit large code-length drops with this constant.
        #[arg(long)]
        audit_c: Option<f64>,
    },
    /// Online synthesis of sets realizing a target curve.
    Synth {
        /// Event stream file; otherwise an adversarial stream is generated.
        #[arg(long, conflicts_with_all = ["target", "n"])]
        stream: Option<PathBuf>,
        /// Comma-separated target curve for the adversarial run.
        #[arg(long, requires = "n")]
        target: Option<String>,
        /// Universe length for the adversarial run.
        #[arg(long)]
        n: Option<u32>,
        /// Seed for the adversarial stream.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Cover frequently covered elements with few blocks.
    Cover {
        /// Records file: `universe` line then `record<TAB>k<TAB>k_cond<TAB>members`.
        #[arg(long)]
        records: PathBuf,
        /// String whose first containing record fixes the block size.
        #[arg(long)]
        x: String,
        /// Multiplicity exponent; derived from the first record by default.
        #[arg(long)]
        delta: Option<u32>,
    },
    /// Enumeration indexes, blocks and reconstruction.
    Unistat(commands::UnistatArgs),
    /// Snooping curves of prediction strategies or mass functions.
    Snoop {
        #[command(flatten)]
        system: SystemArg,
        /// String to predict.
        #[arg(long)]
        x: String,
        /// Largest model complexity; the longest set program by default.
        #[arg(long)]
        alpha_max: Option<u32>,
        /// Model class built from the system's sets.
        #[arg(long, value_enum, default_value_t = commands::SnoopClass::Strategy)]
        class: commands::SnoopClass,
    },
    /// Conversions between sets, mass functions, total functions and strategies.
    Convert(commands::ConvertArgs),
    /// Kraft sums, c_sub, deficiency-of-randomness diagnostics and gap reports.
    Audit {
        #[command(flatten)]
        system: SystemArg,
        /// Add the measured-gap report.
        #[arg(long)]
        gaps: bool,
        /// Largest model complexity for the gap report.
        #[arg(long)]
        alpha_max: Option<u32>,
        /// Search seeds for the gap report; repeat for several.
        #[arg(long)]
        seed: Vec<u64>,
        /// Strings sampled for the improvement and search audits.
        #[arg(long, default_value_t = 16)]
        sample: usize,
    },
    /// Plant strings that are not stochastic below a chosen complexity.
    Nonstoch {
        /// Universe length.
        #[arg(long)]
        n: u32,
        /// Deficiency kept below `--alpha0`.
        #[arg(long)]
        level: u32,
        /// Complexity at which the planted singletons become available.
        #[arg(long)]
        alpha0: u32,
        /// Number of planted strings.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Profile { .. } => "profile",
            Command::Search { .. } => "search",
            Command::Synth { .. } => "synth",
            Command::Cover { .. } => "cover",
            Command::Unistat(_) => "unistat",
            Command::Snoop { .. } => "snoop",
            Command::Convert(_) => "convert",
            Command::Audit { .. } => "audit",
            Command::Nonstoch { .. } => "nonstoch",
        }
    }
}

/// A named output file.
pub struct Artifact {
    pub name: String,
    pub body: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, body: impl Into<String>) -> Self {
        Artifact {
            name: name.into(),
            body: body.into(),
        }
    }

    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Self {
        let mut body = serde_json::to_string_pretty(value).expect("serializable report");
        body.push('\n');
        Artifact::new(name, body)
    }
}

#[derive(Debug)]
pub enum CliError {
    Domain(kstruct::Error),
    Usage(String),
    Io(String),
}

impl From<kstruct::Error> for CliError {
    fn from(e: kstruct::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.kind(),
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Domain(e) => e.to_string(),
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Serialize, Default)]
pub struct Input {
    pub path: String,
    pub bytes: usize,
}

/// Records the inputs a command read, for the manifest.
#[derive(Default)]
pub struct Context {
    pub inputs: Vec<Input>,
}

impl Context {
    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.inputs.push(Input {
            path: path.display().to_string(),
            bytes: text.len(),
        });
        Ok(text)
    }

    pub fn builtin(&mut self, spec: &str) {
        self.inputs.push(Input {
            path: spec.to_string(),
            bytes: 0,
        });
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    args: &'a [String],
    inputs: &'a [Input],
    seeds: Vec<u64>,
    alpha_max: Option<u32>,
    out: Option<String>,
    format: Format,
    artifacts: Vec<&'a str>,
}

fn seeds_and_alpha(cmd: &Command) -> (Vec<u64>, Option<u32>) {
    match cmd {
        Command::Profile { alpha_max, .. } | Command::Snoop { alpha_max, .. } => (vec![], *alpha_max),
        Command::Search { seed, alpha, .. } => (seed.clone(), Some(*alpha)),
        Command::Synth { seed, .. } => (seed.iter().copied().collect(), None),
        Command::Audit { seed, alpha_max, .. } => (seed.clone(), *alpha_max),
        Command::Nonstoch { seed, alpha0, .. } => (vec![*seed], Some(*alpha0)),
        Command::Cover { .. } | Command::Unistat(_) | Command::Convert(_) => (vec![], None),
    }
}

fn dispatch(cli: &Cli, ctx: &mut Context) -> CliResult<Vec<Artifact>> {
    let fmt = cli.format;
    match &cli.command {
        Command::Profile {
            system,
            x,
            alpha_max,
            slack,
        } => commands::profile(ctx, &system.system, x.as_deref(), *alpha_max, *slack, fmt),
        Command::Search {
            system,
            x,
            alpha,
            mode,
            seed,
            audit_c,
        } => commands::search(ctx, &system.system, x, *alpha, mode, seed, *audit_c, fmt),
        Command::Synth { stream, target, n, seed } => {
            commands::synth(ctx, stream.as_deref(), target.as_deref(), *n, *seed)
        }
        Command::Cover { records, x, delta } => commands::cover(ctx, records, x, *delta),
        Command::Unistat(args) => commands::unistat(ctx, args, fmt),
        Command::Snoop {
            system,
            x,
            alpha_max,
            class,
        } => commands::snoop(ctx, &system.system, x, *alpha_max, *class, fmt),
        Command::Convert(args) => commands::convert(ctx, args),
        Command::Audit {
            system,
            gaps,
            alpha_max,
            seed,
            sample,
        } => commands::audit(ctx, &system.system, *gaps, *alpha_max, seed, *sample),
        Command::Nonstoch {
            n,
            level,
            alpha0,
            count,
            seed,
        } => commands::nonstoch(*n, *level, *alpha0, *count, *seed),
    }
}

fn emit(cli: &Cli, args: &[String], ctx: &Context, artifacts: &[Artifact]) -> CliResult<()> {
    let (seeds, alpha_max) = seeds_and_alpha(&cli.command);
    let manifest = Manifest {
        tool: "kstruct",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        args,
        inputs: &ctx.inputs,
        seeds,
        alpha_max,
        out: cli.out.as_ref().map(|p| p.display().to_string()),
        format: cli.format,
        artifacts: artifacts.iter().map(|a| a.name.as_str()).collect(),
    };
    match &cli.out {
        Some(dir) => {
            let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
            fs::create_dir_all(dir).map_err(io)?;
            for a in artifacts {
                fs::write(dir.join(&a.name), &a.body).map_err(io)?;
            }
            let m = Artifact::json("manifest.json", &manifest);
            fs::write(dir.join(&m.name), &m.body).map_err(io)?;
        }
        None => {
            for a in artifacts {
                print!("{}", a.body);
            }
            eprintln!("{}", serde_json::json!({ "manifest": manifest }));
        }
    }
    Ok(())
}

fn fail(command: &str, e: &CliError) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::json!({ "error": e.kind(), "message": e.message(), "command": command })
    );
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let e = CliError::Usage(e.to_string().trim_end().to_string());
            return fail("", &e);
        }
        Err(e) => e.exit(),
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut ctx = Context::default();
    let result = dispatch(&cli, &mut ctx).and_then(|arts| emit(&cli, &args, &ctx, &arts));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(cli.command.name(), &e),
    }
}
