//! Command-line front end for the floodmin library.
//!
//! Exit codes: 0 on success, 1 when a verification finds a mismatch, 2 on
//! usage, file, or parse errors.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use floodmin::{
    equivalent, extract_function, generate, minimize, parse_cover_sop, parse_pla, qm_minimum_cover,
    read_function, sweep_with, to_csv, write_cover_pla, write_cover_sop, write_function, GenMode,
    GenSpec, InstanceFormat, MinimizeOptions, SweepOptions, TruthFunction, VarNames, MAX_DIMENSION,
};

#[derive(Parser)]
#[command(name = "floodmin", version, about = "Two-level logic minimization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize an instance and print its cover plus a summary line
    Minimize(MinimizeArgs),
    /// Check a sum-of-products expression against an instance
    Verify(VerifyArgs),
    /// Write a seeded random instance
    Generate(GenerateArgs),
    /// Print an exact minimum cover (small dimensions only)
    Oracle(OracleArgs),
    /// Run a dimension by density sweep and write CSV records
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Espresso-style PLA text
    Pla,
    /// One `<bits> <bit>` truth-table row per line
    Table,
    /// `n=<dims>` header plus decimal ON indices
    Minterms,
}

impl From<FormatArg> for InstanceFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Pla => InstanceFormat::Pla,
            FormatArg::Table => InstanceFormat::TruthTable,
            FormatArg::Minterms => InstanceFormat::MintermList,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverOutArg {
    /// Sum-of-products expression text
    Sop,
    /// Single-output PLA rows
    Pla,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// ON-set size is exactly round(density * 2^n)
    Exact,
    /// Independent coin flip per coordinate
    Bernoulli,
}

impl From<ModeArg> for GenMode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Exact => GenMode::ExactCount,
            ModeArg::Bernoulli => GenMode::Bernoulli,
        }
    }
}

#[derive(Args)]
struct MinimizeArgs {
    /// Instance file, or '-' for standard input
    input: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Pla)]
    format: FormatArg,
    /// Cover rendering
    #[arg(long, value_enum, default_value_t = CoverOutArg::Sop)]
    out: CoverOutArg,
    /// PLA output column to minimize
    #[arg(long, default_value_t = 0)]
    output_index: usize,
    /// Shuffle candidate subset order with this seed instead of the
    /// canonical deterministic order
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on flip subsets tried per free-dimension level (default: all)
    #[arg(long)]
    budget: Option<usize>,
    /// Skip the equivalence check; the summary then reports verified=false
    #[arg(long)]
    no_verify: bool,
    /// Also run the exact minimum-cover search and report its counts
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file, or '-' for standard input
    input: String,
    /// Sum-of-products expression to check, e.g. "A'C' + A'BD"
    #[arg(long)]
    cover: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Pla)]
    format: FormatArg,
    #[arg(long, default_value_t = 0)]
    output_index: usize,
    /// Seed for the sampled check used above the exhaustive limit
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    dims: u32,
    #[arg(long)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Instance format to write
    #[arg(long, value_enum, default_value_t = FormatArg::Pla)]
    format: FormatArg,
    /// Destination file, or '-' for standard output
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct OracleArgs {
    /// Instance file, or '-' for standard input
    input: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Pla)]
    format: FormatArg,
    #[arg(long, value_enum, default_value_t = CoverOutArg::Sop)]
    out: CoverOutArg,
    #[arg(long, default_value_t = 0)]
    output_index: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated dimension list, e.g. 10,12,14
    #[arg(long, value_delimiter = ',', required_unless_present = "dims_range", conflicts_with = "dims_range")]
    dims: Vec<u32>,
    /// Inclusive dimension range LO..HI, e.g. 16..22
    #[arg(long)]
    dims_range: Option<String>,
    /// Comma-separated density list, e.g. 0.1,0.2,0.3,0.4
    #[arg(long, value_delimiter = ',', required = true)]
    densities: Vec<f64>,
    /// Instances per (dims, density) cell
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Base seed for the per-instance seed chain
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// CSV destination, '-' for standard output
    #[arg(long, default_value = "-")]
    csv: String,
    /// Verify every cell, even past the exhaustive limit (sampled check)
    #[arg(long, conflicts_with = "no_verify")]
    verify: bool,
    /// Verify no cell
    #[arg(long)]
    no_verify: bool,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe, as `floodmin generate ... | head` should,
    // instead of panicking when a print hits EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Minimize(args) => run_minimize(args),
        Command::Verify(args) => run_verify(args),
        Command::Generate(args) => run_generate(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("standard input: {e}"))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn write_output(path: &str, text: &str) -> Result<(), String> {
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| format!("{path}: {e}"))
    }
}

/// Loads an instance plus the variable names to render covers with: the
/// file's `.ilb` labels when they are usable as expression names, defaults
/// otherwise.
fn load_instance(
    path: &str,
    format: FormatArg,
    output_index: usize,
) -> Result<(TruthFunction, VarNames), String> {
    let text = read_input(path)?;
    match format {
        FormatArg::Pla => {
            let doc = parse_pla(&text).map_err(|e| e.to_string())?;
            let f = extract_function(&doc, output_index).map_err(|e| e.to_string())?;
            let names = doc
                .input_labels
                .and_then(|labels| VarNames::new(labels).ok())
                .unwrap_or_else(|| VarNames::default_for(f.dimension()));
            Ok((f, names))
        }
        _ => {
            let f = read_function(&text, format.into(), output_index).map_err(|e| e.to_string())?;
            let names = VarNames::default_for(f.dimension());
            Ok((f, names))
        }
    }
}

fn print_cover(cover: &floodmin::Cover, names: &VarNames, out: CoverOutArg) {
    match out {
        CoverOutArg::Sop => println!("{}", write_cover_sop(cover, names)),
        CoverOutArg::Pla => print!("{}", write_cover_pla(cover)),
    }
}

fn run_minimize(args: MinimizeArgs) -> Result<ExitCode, String> {
    let (f, names) = load_instance(&args.input, args.format, args.output_index)?;
    let options = MinimizeOptions {
        subset_budget: args.budget.unwrap_or(usize::MAX),
        deterministic: args.seed.is_none(),
        seed: args.seed.unwrap_or(0),
    };
    let started = Instant::now();
    let cover = minimize(&f, &options);
    let elapsed = started.elapsed().as_secs_f64();
    print_cover(&cover, &names, args.out);

    let mut mismatch = false;
    let verified = if args.no_verify {
        false
    } else {
        let report = equivalent(&f, &cover, 0);
        if !report.equivalent {
            mismatch = true;
            if let Some(c) = report.counterexample {
                eprintln!(
                    "error: cover disagrees with the instance at {}",
                    c.bit_string(f.dimension())
                );
            }
        }
        report.equivalent
    };
    if args.oracle {
        let best = qm_minimum_cover(&f).map_err(|e| e.to_string())?;
        println!("oracle_implicants={} oracle_literals={}", best.len(), best.literal_count());
    }
    println!(
        "implicants={} literals={} time={:.6}s verified={}",
        cover.len(),
        cover.literal_count(),
        elapsed,
        verified
    );
    Ok(if mismatch { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let (f, names) = load_instance(&args.input, args.format, args.output_index)?;
    let cover =
        parse_cover_sop(&args.cover, f.dimension(), &names).map_err(|e| e.to_string())?;
    let report = equivalent(&f, &cover, args.seed);
    if report.equivalent {
        println!("EQUIVALENT");
        Ok(ExitCode::SUCCESS)
    } else {
        match report.counterexample {
            Some(c) => println!("NOT-EQUIVALENT counterexample={}", c.bit_string(f.dimension())),
            None => println!("NOT-EQUIVALENT"),
        }
        Ok(ExitCode::from(1))
    }
}

fn run_generate(args: GenerateArgs) -> Result<ExitCode, String> {
    let spec = GenSpec::new(args.dims, args.density, args.seed, args.mode.into())
        .map_err(|e| e.to_string())?;
    let f = generate(&spec);
    write_output(&args.output, &write_function(&f, args.format.into()))?;
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(args: OracleArgs) -> Result<ExitCode, String> {
    let (f, names) = load_instance(&args.input, args.format, args.output_index)?;
    let cover = qm_minimum_cover(&f).map_err(|e| e.to_string())?;
    print_cover(&cover, &names, args.out);
    println!("implicants={} literals={}", cover.len(), cover.literal_count());
    Ok(ExitCode::SUCCESS)
}

fn run_bench(args: BenchArgs) -> Result<ExitCode, String> {
    let dims = if let Some(range) = &args.dims_range {
        parse_dims_range(range)?
    } else {
        args.dims.clone()
    };
    for &n in &dims {
        if n == 0 || n > MAX_DIMENSION {
            return Err(format!("dimension {n} is outside 1..={MAX_DIMENSION}"));
        }
    }
    for &d in &args.densities {
        if !(0.0..=1.0).contains(&d) {
            return Err(format!("density {d} is outside [0, 1]"));
        }
    }
    let mut options = SweepOptions { gen_mode: args.mode.into(), ..Default::default() };
    if args.verify {
        options.force_verify = true;
    }
    if args.no_verify {
        options.verify_limit = 0;
    }
    let records = sweep_with(&dims, &args.densities, args.repeats, args.seed, &options);
    write_output(&args.csv, &to_csv(&records))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_dims_range(range: &str) -> Result<Vec<u32>, String> {
    let parts: Vec<&str> = range.split("..").collect();
    let bad = || format!("expected an inclusive range LO..HI, found {range:?}");
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: u32 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: u32 = parts[1].trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(format!("range {range:?} is empty"));
    }
    Ok((lo..=hi).collect())
}
