//! `ccc`: encode payloads into clustering-constrained strand sets, decode
//! them back, check constraints, simulate noisy reads, repair clusters, and
//! evaluate bounds and brute-force oracles.

mod commands;
mod output;

use std::process;

use clap::{Parser, Subcommand};

use ccc::channel::Mode;

#[derive(Parser)]
#[command(name = "ccc", version, about, max_term_width = 100)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all processors,
    /// or the CCC_THREADS environment variable)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a payload file into a strand-set file
    Encode {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "M")]
        m: usize,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        t: usize,
        /// Payload file (raw bytes, exactly M*(L - log2 M) - 1 bits)
        #[arg(long = "in")]
        input: String,
        /// Strand-set file to write
        #[arg(long)]
        out: String,
    },
    /// Decode a strand-set file back into its payload
    Decode {
        /// Strand-set file (parameters come from its header)
        #[arg(long = "in")]
        input: String,
        /// Payload file to write
        #[arg(long)]
        out: String,
    },
    /// Check the clustering constraint and list violations
    Check {
        /// Index-distance bound (default: the file header's value)
        #[arg(long)]
        e: Option<usize>,
        /// Data-distance bound (default: the file header's value)
        #[arg(long)]
        t: Option<usize>,
        #[arg(long = "in")]
        input: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Draw noisy reads from a stored strand set
    Simulate {
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        rho: usize,
        #[arg(long = "N")]
        n: usize,
        /// uniform, coverage, or adversarial
        #[arg(long)]
        mode: String,
        #[arg(long)]
        seed: u64,
        #[arg(long = "in")]
        input: String,
        /// Reads file to write
        #[arg(long)]
        out: String,
    },
    /// Cluster reads by index, detect and reassign outliers
    Cluster {
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        rho: usize,
        /// Reads file
        #[arg(long = "in")]
        input: String,
        /// Evaluate against the reads' #src ground-truth annotations
        #[arg(long)]
        truth: bool,
        /// Write the full machine-readable report to this path
        #[arg(long)]
        report: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate size and redundancy bounds
    Bounds {
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long = "M")]
        m: Option<usize>,
        #[arg(long)]
        e: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        /// Sweep a parameter grid instead of a single point
        #[arg(long)]
        grid: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Exhaustive code counting and round-trip fuzzing
    Oracle {
        #[arg(long = "M")]
        m: usize,
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        t: usize,
        /// Run seeded round-trip fuzzing instead of exhaustive counting
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn consample_threads(requested: Option<usize>) {
    let threads = requested
        .or_else(|| {
            std::env::var("CCC_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    // only configurable once; later calls keep the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

fn main() {
    let cli = Cli::parse();
    consample_threads(cli.threads);
    let result = match cli.command {
        Command::Encode {
            l,
            m,
            e,
            t,
            input,
            out,
        } => commands::encode(l, m, e, t, &input, &out),
        Command::Decode { input, out } => commands::decode(&input, &out),
        Command::Check {
            e,
            t,
            input,
            format,
        } => commands::check(e, t, &input, format),
        Command::Simulate {
            tau,
            rho,
            n,
            mode,
            seed,
            input,
            out,
        } => {
            let parsed: Result<Mode, _> = mode.parse();
            parsed.and_then(|mode| commands::simulate(tau, rho, n, mode, seed, &input, &out))
        }
        Command::Cluster {
            tau,
            rho,
            input,
            truth,
            report,
            format,
        } => commands::cluster(tau, rho, &input, truth, report.as_deref(), format),
        Command::Bounds {
            l,
            m,
            e,
            t,
            grid,
            format,
        } => commands::bounds(l, m, e, t, grid, format),
        Command::Oracle {
            m,
            l,
            e,
            t,
            trials,
            seed,
            format,
        } => commands::oracle(m, l, e, t, trials, seed, format),
    };
    match result {
        Ok(code) => process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            process::exit(if err.is_io_or_parse() { 2 } else { 1 });
        }
    }
}
