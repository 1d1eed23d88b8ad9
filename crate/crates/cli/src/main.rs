use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser};

use seqprob_cli::{catalog, run_to_dir, CliError, Format, ScenarioConfig};

/// Runs the seqprob scenarios. With no arguments, lists them.
#[derive(Debug, Parser)]
#[command(name = "seqprob", version)]
struct Args {
    /// Scenario name; overrides the one in --config.
    #[arg(long)]
    scenario: Option<String>,
    /// Scenario configuration or a manifest.json from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: out/<scenario>].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Exit with status 1 when any assertion fails.
    #[arg(long)]
    check: bool,
    /// Worker threads for the numerical kernels.
    #[arg(long, env = "SEQPROB_THREADS")]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print the scenario catalog.
    #[arg(long)]
    list: bool,
}

fn print_catalog(format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&catalog()).expect("catalog serialises")),
        Format::Csv => {
            for e in catalog() {
                println!("{:<20} [{}] {}", e.name, e.topic, e.description);
            }
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list || (args.scenario.is_none() && args.config.is_none()) {
        print_catalog(args.format);
        return ExitCode::SUCCESS;
    }
    match run(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("{}", Args::command().render_usage());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: Args) -> Result<u8, CliError> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_file(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(s) = args.scenario {
        cfg.scenario = s;
    }
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    let dir = args
        .out
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.scenario));
    let start = Instant::now();
    let (manifest, report) = run_to_dir(&cfg, &dir, args.format)?;
    for a in &report.assertions {
        println!("{} {:<40} {:.6e}", if a.pass { "PASS" } else { "FAIL" }, a.name, a.value);
    }
    println!(
        "{}: {} files in {} ({:.2} s)",
        manifest.scenario,
        manifest.files.len() + 1,
        dir.display(),
        start.elapsed().as_secs_f64()
    );
    Ok(if args.check && !report.passed() { 1 } else { 0 })
}
