use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use permgf::class::{enumerate_simples, wreath_closure_basis, ClassSpec, SimpleSet};
use permgf::pipeline::{prepare, run, PipelineError, RunOptions, SpecFile, DEFAULT_ORDER};
use permgf::Permutation;

#[derive(Parser)]
#[command(name = "permgf", version, about = "Generating functions of permutation classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the substitution decomposition of a permutation.
    Decompose { perm: String },
    /// List the simple permutations of a class by length.
    Simples(SpecArgs),
    /// Print the algebraic system.
    System {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        involutions: bool,
    },
    /// Count the class and optionally eliminate and cross-check.
    Count {
        #[command(flatten)]
        spec: SpecArgs,
        /// Number of coefficients.
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        n: usize,
        #[arg(long)]
        involutions: bool,
        #[arg(long)]
        eliminate: bool,
        /// Compare with brute force up to this length (8 if no value).
        #[arg(long, num_args = 0..=1, default_missing_value = "8")]
        oracle_check: Option<usize>,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Basis of the wreath closure of a class's simples, or of listed simples.
    WreathBasis {
        spec: Option<PathBuf>,
        /// Comma-separated simples, instead of a spec file.
        #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
        simples: Vec<String>,
        #[arg(long)]
        max_simple_length: Option<usize>,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// Spec file (TOML).
    spec: PathBuf,
    #[arg(long)]
    max_simple_length: Option<usize>,
    #[arg(long)]
    max_oracle_length: Option<usize>,
}

fn load(path: &Path, max_simple: Option<usize>, max_oracle: Option<usize>) -> Result<ClassSpec, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: SpecFile = text.parse().map_err(|e: PipelineError| format!("{}: {e}", path.display()))?;
    let mut spec = file.class_spec().map_err(|e| e.to_string())?;
    if let Some(m) = max_simple {
        spec.caps.max_simple_length = m;
    }
    if let Some(m) = max_oracle {
        spec.caps.max_oracle_length = m;
    }
    Ok(spec)
}

impl SpecArgs {
    fn load(&self) -> Result<ClassSpec, String> {
        load(&self.spec, self.max_simple_length, self.max_oracle_length)
    }
}

fn complete_simples(spec: &ClassSpec) -> Result<SimpleSet, String> {
    let simples = enumerate_simples(spec);
    if !simples.complete {
        return Err(PipelineError::InfiniteSimples.to_string());
    }
    Ok(simples)
}

fn execute(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Decompose { perm } => {
            let p: Permutation = perm.trim().parse().map_err(|e| format!("`{perm}`: {e}"))?;
            println!("{}", p.decompose());
        }
        Command::Simples(args) => {
            let spec = args.load()?;
            let simples = enumerate_simples(&spec);
            for (i, level) in simples.by_length.iter().enumerate().skip(1) {
                let names: Vec<String> = level.iter().map(ToString::to_string).collect();
                println!("{i:>3} {:>5}  {}", level.len(), names.join(" "));
            }
            let counts: Vec<String> = simples.counts().iter().map(ToString::to_string).collect();
            println!("counts: {}", counts.join(", "));
            if !simples.complete {
                return Err(PipelineError::InfiniteSimples.to_string());
            }
            println!("complete");
        }
        Command::System { spec, involutions } => {
            let spec = spec.load()?;
            let prep = prepare(&spec, involutions).map_err(|e| e.to_string())?;
            print!("{}", prep.system);
        }
        Command::Count { spec, n, involutions, eliminate, oracle_check, json } => {
            let spec = spec.load()?;
            let opts = RunOptions { order: n, involutions, eliminate, oracle_check };
            let report = run(&spec, &opts).map_err(|e| e.to_string())?;
            print!("{report}");
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
                fs::write(&path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
                println!("report: {}", path.display());
            }
            return Ok(report.all_match());
        }
        Command::WreathBasis { spec, simples, max_simple_length } => {
            let set = match spec {
                Some(path) => complete_simples(&load(&path, max_simple_length, None)?)?,
                None if !simples.is_empty() => {
                    let list = simples
                        .iter()
                        .map(|s| s.trim().parse::<Permutation>().map_err(|e| format!("`{s}`: {e}")))
                        .collect::<Result<Vec<_>, _>>()?;
                    SimpleSet::from_list(&list)
                }
                None => return Err("give a spec file or --simples".to_string()),
            };
            let cap = set.max_length() + 2;
            let basis = wreath_closure_basis(&set, cap).map_err(|e| e.to_string())?;
            let names: Vec<String> = basis.iter().map(ToString::to_string).collect();
            println!("{}", names.join(", "));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("oracle mismatch");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
