use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pa_forge::bench::{self, BenchConfig, BenchReport};
use pa_forge::ntt::{NttPlan, Radix};
use pa_forge::pa::{compress, PaParams};
use pa_forge::params::{self, PRODUCTION_GAMMA};
use pa_forge::selftest::{self, SelftestOptions};
use pa_forge::Error;

/// Exit status for parameter and security-condition violations.
const EXIT_INVALID: u8 = 3;
/// Exit status when the key material runs out before `k` blocks are accepted.
const EXIT_INSUFFICIENT: u8 = 4;
/// Exit status for a failed self-test.
const EXIT_SELFTEST: u8 = 5;

const PLAN_CACHE_ENV: &str = "PA_FORGE_PLAN_CACHE";

#[derive(Parser, Debug)]
#[command(name = "pa-forge", version, about = "MMH-MH privacy amplification with NTT multiplication")]
struct Cli {
    /// NTT butterfly radix.
    #[arg(long, global = true, default_value = "16", value_parser = parse_radix)]
    radix: Radix,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compress one block of key material into the final key.
    Compress(CompressArgs),
    /// Measure compression throughput on random input.
    Bench(BenchArgs),
    /// Tabulate k, block size and final key rate from a compression-ratio curve.
    Keyrate(KeyrateArgs),
    /// Run the built-in verification suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct CompressArgs {
    /// Raw key material; k·γ bits plus γ bits per rejected block.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Seed file: a_1..a_k, b, c as ⌈γ/8⌉-byte little-endian values.
    #[arg(long, required_unless_present = "seed", conflicts_with = "seed")]
    seed_file: Option<PathBuf>,
    /// Expand the seeds deterministically from this value instead of a seed file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = PRODUCTION_GAMMA)]
    gamma: u64,
    #[arg(long)]
    k: usize,
    /// Final key length in bits.
    #[arg(long)]
    r: usize,
    /// Security parameter in bits; requires r < γ - s.
    #[arg(long)]
    s: usize,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = PRODUCTION_GAMMA)]
    gamma: u64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Seed for the simulated key source and hash seeds.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args, Debug)]
struct KeyrateArgs {
    /// CSV with header `distance_km,r_pa,sifted_rate_bps`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = PRODUCTION_GAMMA)]
    gamma: u64,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Negative control: corrupt the twiddle tables before testing.
    #[arg(long, hide = true)]
    inject_twiddle_fault: bool,
}

fn parse_radix(s: &str) -> Result<Radix, String> {
    s.parse::<Radix>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compress(args) => cmd_compress(&args, cli.radix),
        Command::Bench(args) => cmd_bench(&args, cli.radix),
        Command::Keyrate(args) => cmd_keyrate(&args),
        Command::Selftest(args) => cmd_selftest(&args, cli.radix),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InsufficientMaterial { .. }) => EXIT_INSUFFICIENT,
        Some(Error::Io(_)) | Some(Error::Csv(_)) | None => 1,
        Some(_) => EXIT_INVALID,
    }
}

fn build_plan(params: &PaParams, radix: Radix) -> Result<NttPlan> {
    let size = NttPlan::size_for_operand_limbs(params.modulus().limbs());
    let plan = match std::env::var_os(PLAN_CACHE_ENV) {
        Some(dir) if !dir.is_empty() => NttPlan::load_or_build(size, radix, Path::new(&dir))?,
        _ => params.plan(radix)?,
    };
    Ok(plan)
}

fn cmd_compress(args: &CompressArgs, radix: Radix) -> Result<ExitCode> {
    let params = match (&args.seed_file, args.seed) {
        (Some(path), _) => {
            let bytes = fs::read(path).with_context(|| format!("reading seed file {}", path.display()))?;
            PaParams::from_seed_bytes(args.gamma, args.k, args.r, args.s, &bytes)?
        }
        (None, Some(seed)) => PaParams::from_seed(args.gamma, args.k, args.r, args.s, seed)?,
        (None, None) => unreachable!("clap requires a seed source"),
    };
    let material = fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let plan = build_plan(&params, radix)?;
    let output = compress(&params, &material, &plan)?;
    fs::write(&args.out, output.key.as_bytes()).with_context(|| format!("writing {}", args.out.display()))?;
    println!("rejected_blocks={}", output.rejected_blocks);
    println!("key_bits={}", output.key.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs, radix: Radix) -> Result<ExitCode> {
    let config = BenchConfig {
        gamma: args.gamma,
        k: args.k,
        r: args.r,
        s: args.s,
        radix,
        trials: args.trials,
        threads: args.threads,
        seed: args.seed,
    };
    let report = bench::run(&config)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{}", BenchReport::CSV_HEADER)?;
    writeln!(out, "{}", report.csv_row())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_keyrate(args: &KeyrateArgs) -> Result<ExitCode> {
    let file = fs::File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let curve = params::read_curve_csv(file)?;
    let rows = params::tabulate_keyrate(&curve, args.gamma)?;
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            params::write_table_csv(&rows, file)?;
        }
        None => params::write_table_csv(&rows, io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(args: &SelftestArgs, radix: Radix) -> Result<ExitCode> {
    let results = selftest::run(&SelftestOptions {
        radix,
        corrupt_twiddles: args.inject_twiddle_fault,
    });
    let mut failed = 0;
    for r in &results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    if failed > 0 {
        println!("{failed} of {} checks failed", results.len());
        return Ok(ExitCode::from(EXIT_SELFTEST));
    }
    println!("all {} checks passed", results.len());
    Ok(ExitCode::SUCCESS)
}
