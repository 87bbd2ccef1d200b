//! One function per subcommand. Each returns the process exit code on
//! success; emitted documents are deterministic given the flags, with
//! timing sent to stderr only.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read as _, Write as _};

use ccc::channel::{self, ChannelConfig, Mode};
use ccc::clustering::{self, Clustering};
use ccc::codec;
use ccc::error::Result;
use ccc::strand::{read_strand_set, write_strand_set};
use ccc::{bounds, make_params, oracle, Error};

use crate::output;
use crate::Format;

pub fn encode(l: usize, m: usize, e: usize, t: usize, input: &str, out: &str) -> Result<i32> {
    let params = make_params(l, m, e, t)?;
    let mut payload = Vec::new();
    File::open(input)?.read_to_end(&mut payload)?;
    let inputs = codec::unpack_payload(&payload, &params)?;
    let set = codec::encode(&inputs, &params)?;
    let mut writer = BufWriter::new(File::create(out)?);
    write_strand_set(&mut writer, &set, &params)?;
    writer.flush()?;
    eprintln!(
        "encoded {} payload bits into {} strands of {} bits",
        codec::payload_bit_len(&params),
        m,
        l
    );
    Ok(0)
}

pub fn decode(input: &str, out: &str) -> Result<i32> {
    let (params, set) = read_strand_set(BufReader::new(File::open(input)?))?;
    let vectors = codec::decode(&set, &params)?;
    let payload = codec::pack_payload(&vectors, &params)?;
    let mut writer = BufWriter::new(File::create(out)?);
    writer.write_all(&payload)?;
    writer.flush()?;
    eprintln!("decoded {} payload bytes", payload.len());
    Ok(0)
}

pub fn check(e: Option<usize>, t: Option<usize>, input: &str, format: Format) -> Result<i32> {
    let (params, set) = read_strand_set(BufReader::new(File::open(input)?))?;
    let e = e.unwrap_or(params.e());
    let t = t.unwrap_or(params.t());
    let violations = ccc::constraint::violations(&set, e, t);
    output::print_check(&params, e, t, &violations, format)?;
    Ok(if violations.is_empty() { 0 } else { 1 })
}

pub fn simulate(
    tau: usize,
    rho: usize,
    n: usize,
    mode: Mode,
    seed: u64,
    input: &str,
    out: &str,
) -> Result<i32> {
    let (_, set) = read_strand_set(BufReader::new(File::open(input)?))?;
    let cfg = ChannelConfig {
        tau,
        rho,
        n,
        mode,
        seed,
    };
    let reads = channel::simulate(&set, &cfg)?;
    let mut writer = BufWriter::new(File::create(out)?);
    channel::write_reads(&mut writer, &reads)?;
    writer.flush()?;
    eprintln!("simulated {n} reads (tau={tau}, rho={rho}, mode={mode}, seed={seed})");
    Ok(0)
}

fn infer_m(reads: &[channel::Read]) -> Result<usize> {
    let first = reads
        .first()
        .ok_or_else(|| Error::InvalidInput("cannot infer M from an empty reads file".into()))?;
    let log_m = first.index.len();
    if log_m == 0 || log_m > 30 {
        return Err(Error::InvalidInput(format!(
            "index width {log_m} outside the supported range"
        )));
    }
    Ok(1 << log_m)
}

pub fn cluster(
    tau: usize,
    rho: usize,
    input: &str,
    truth: bool,
    report_path: Option<&str>,
    format: Format,
) -> Result<i32> {
    let reads = channel::replay(input)?;
    let m = infer_m(&reads)?;
    let clustering: Clustering = clustering::cluster_by_index(reads, m)?
        .detect_outliers(rho)
        .reassign(tau, rho);
    let evaluation = if truth {
        Some(clustering.evaluate()?)
    } else {
        None
    };
    let doc = output::cluster_report_json(&clustering, tau, rho, evaluation.as_ref());
    if let Some(path) = report_path {
        let mut writer = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut writer, &doc)
            .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
        writer.write_all(b"\n")?;
        writer.flush()?;
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("json")),
        Format::Text => output::print_cluster_summary(&clustering, evaluation.as_ref()),
    }
    Ok(0)
}

pub fn bounds(
    l: Option<usize>,
    m: Option<usize>,
    e: Option<usize>,
    t: Option<usize>,
    grid: bool,
    format: Format,
) -> Result<i32> {
    if grid {
        return output::print_bounds_grid(format);
    }
    let (l, m, e, t) = match (l, m, e, t) {
        (Some(l), Some(m), Some(e), Some(t)) => (l, m, e, t),
        _ => {
            return Err(Error::InvalidInput(
                "bounds needs --L --M --e --t (or --grid)".into(),
            ))
        }
    };
    let params = make_params(l, m, e, t)?;
    let report = bounds::report(&params)?;
    let max_t = codec::max_feasible_t(l, m, e)?;
    output::print_bounds_point(&report, max_t, format)?;
    Ok(0)
}

pub fn oracle(
    m: usize,
    l: usize,
    e: usize,
    t: usize,
    trials: Option<u64>,
    seed: u64,
    format: Format,
) -> Result<i32> {
    match trials {
        None => {
            let report = oracle::exhaustive_report(m, l, e, t)?;
            eprintln!("elapsed: {:.3}s", report.elapsed_secs);
            output::print_oracle_count(&report, format);
        }
        Some(trials) => {
            let params = make_params(l, m, e, t)?;
            let report = oracle::roundtrip_fuzz(&params, trials, seed)?;
            eprintln!("elapsed: {:.3}s", report.elapsed_secs);
            output::print_oracle_fuzz(m, l, e, t, seed, &report, format);
        }
    }
    Ok(0)
}
