//! `ufss`: decompose families of small sets into injective pieces and check
//! the result exactly on rational sample grids.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ufss::error::Error;
use ufss::model::DecompositionResult;
use ufss::pipeline::{self, Case, Instance};
use ufss::verify::{SampleGrid, VerificationReport};

#[derive(Parser)]
#[command(name = "ufss", version, about = "Exact injective decompositions of uniform families of small sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Rcf,
    Linear,
    Indep,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::Rcf => Case::Rcf,
            CaseArg::Linear => Case::Linear,
            CaseArg::Indep => Case::Indep,
        }
    }
}

#[derive(clap::Args)]
struct GridArgs {
    /// Per-coordinate ranges `lo:hi:step,...`; defaults to at least 100 points.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra seeded random points.
    #[arg(long, default_value_t = 0)]
    random: usize,
    /// Write the verification report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Fail when enumerative fallback pieces were needed.
    #[arg(long)]
    fail_on_fallback: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an instance.
    Decompose {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        emit_trace: Option<PathBuf>,
    },
    /// Check a decomposition against its instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        decomposition: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Decompose, then verify.
    Roundtrip {
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        emit_trace: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Write a deterministic instance corpus.
    Gen {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Input problems exit with 2, everything else that fails with 1.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn from_engine(e: Error) -> Failure {
    let code = match e {
        Error::Parse { .. } | Error::Arity(_) | Error::NotNormalized(_) => 2,
        _ => 1,
    };
    Failure { code, message: e.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: 2, message: format!("cannot write {}: {e}", path.display()) })
}

fn load_instance(path: &Path, case: Option<CaseArg>) -> Result<Instance, Failure> {
    let inst = pipeline::parse_instance(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    if let Some(c) = case {
        if inst.case() != Case::from(c) {
            return Err(input_error(format!("{} is a {:?} instance", path.display(), inst.case())));
        }
    }
    Ok(inst)
}

fn decompose(inst: &Instance, output: Option<&Path>, trace: Option<&Path>) -> Result<DecompositionResult, Failure> {
    let out = pipeline::decompose(inst).map_err(from_engine)?;
    for step in &out.steps {
        eprintln!("step: {step}");
    }
    if let Some(p) = output {
        write(p, &serde_json::to_string_pretty(&out.result).expect("serializable"))?;
    }
    if let Some(p) = trace {
        write(p, &serde_json::to_string_pretty(&out.result.trace).expect("serializable"))?;
    }
    Ok(out.result)
}

fn check(inst: &Instance, dec: &DecompositionResult, args: &GridArgs) -> Result<(), Failure> {
    let k = inst.original().map_err(from_engine)?.k;
    let grid = match &args.grid {
        Some(g) => SampleGrid::parse(g, args.seed).map_err(|e| input_error(format!("--grid: {e}")))?,
        None => SampleGrid::default_for(k, args.seed),
    }
    .with_random(args.random);
    let report: VerificationReport = pipeline::verify(inst, dec, &grid).map_err(from_engine)?;
    print!("{}", report.summary_table());
    if let Some(p) = &args.report {
        write(p, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    }
    if !report.passed() {
        if let Some(w) = report.first_failure().and_then(|c| c.witness.as_ref()) {
            eprintln!("witness: {}", serde_json::to_string(w).expect("serializable"));
        }
        return Err(Failure { code: 1, message: "verification failed".into() });
    }
    if args.fail_on_fallback && !dec.fallback_pieces.is_empty() {
        return Err(Failure { code: 1, message: format!("{} fallback piece(s)", dec.fallback_pieces.len()) });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose { case, input, output, emit_trace } => {
            let inst = load_instance(&input, Some(case))?;
            let dec = decompose(&inst, Some(&output), emit_trace.as_deref())?;
            eprintln!("{} piece(s), {} fallback", dec.pieces.len(), dec.fallback_pieces.len());
            Ok(())
        }
        Command::Verify { instance, decomposition, grid } => {
            let inst = load_instance(&instance, None)?;
            let dec = pipeline::parse_decomposition(&read(&decomposition)?)
                .map_err(|e| input_error(format!("{}: {e}", decomposition.display())))?;
            check(&inst, &dec, &grid)
        }
        Command::Roundtrip { case, input, output, emit_trace, grid } => {
            let inst = load_instance(&input, case)?;
            let dec = decompose(&inst, output.as_deref(), emit_trace.as_deref())?;
            check(&inst, &dec, &grid)
        }
        Command::Gen { count, seed, out } => {
            fs::create_dir_all(&out).map_err(|e| input_error(format!("cannot create {}: {e}", out.display())))?;
            for (name, inst) in ufss::gen::corpus(count, seed) {
                write(&out.join(format!("{name}.json")), &inst.to_json())?;
            }
            eprintln!("wrote {count} instance(s) to {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
