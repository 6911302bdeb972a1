use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use subadditive_cli::{parse_spec, run, verify_certificate, AnalysisSpec, Status, Task};

#[derive(Parser)]
#[command(name = "subadditive", version, about = "Unions of sets of lengths in subadditive families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a specification and write the report bundle.
    Analyze {
        spec: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Re-verify a certificate against a fresh profile of the spec's family.
    Verify { certificate: PathBuf, spec: PathBuf },
    /// Compare the engine with the brute-force oracle.
    OracleCheck {
        spec: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Override `k_horizon`.
    #[arg(long)]
    kmax: Option<u64>,
    /// Override the pattern window `M`.
    #[arg(long)]
    window: Option<u64>,
    /// Override the nesting depth.
    #[arg(long)]
    imax: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Add the oracle cross-check to the tasks.
    #[arg(long)]
    oracle: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn load_spec(path: &PathBuf) -> Result<AnalysisSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_spec(&text).with_context(|| format!("invalid spec {}", path.display()))
}

fn apply(spec: &mut AnalysisSpec, opts: &Overrides) -> Result<()> {
    if let Some(k) = opts.kmax {
        spec.k_horizon = k;
    }
    if let Some(w) = opts.window {
        spec.window = Some(w);
    }
    if let Some(i) = opts.imax {
        spec.i_max = Some(i);
    }
    if opts.oracle && !spec.has(Task::OracleCheck) {
        spec.tasks.push(Task::OracleCheck);
        spec.tasks.sort();
    }
    spec.validate().context("invalid overrides")?;
    Ok(())
}

fn analyze(mut spec: AnalysisSpec, opts: &Overrides) -> Result<i32> {
    apply(&mut spec, opts)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build_global()
        .context("configuring the thread pool")?;
    let bundle = run(&spec);
    bundle
        .write_to(&opts.out)
        .with_context(|| format!("writing {}", opts.out.display()))?;
    for t in &bundle.report.tasks {
        let status = match t.status {
            Status::Ok => "ok",
            Status::Refused => "refused",
            Status::Error => "error",
        };
        match &t.message {
            Some(m) => println!("{:<12} {status}: {m}", t.task),
            None => println!("{:<12} {status}", t.task),
        }
    }
    Ok(bundle.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { spec, opts } => load_spec(&spec).and_then(|s| analyze(s, &opts)),
        Command::OracleCheck { spec, opts } => load_spec(&spec).and_then(|mut s| {
            s.tasks = vec![Task::OracleCheck];
            analyze(s, &opts)
        }),
        Command::Verify { certificate, spec } => load_spec(&spec).and_then(|s| {
            let text = std::fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            match verify_certificate(&text, &s) {
                Ok(msg) => {
                    println!("{msg}");
                    Ok(0)
                }
                Err(msg) => {
                    eprintln!("error: certificate rejected: {msg}");
                    Ok(1)
                }
            }
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
