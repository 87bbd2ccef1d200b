//! Noisy-read channel: draws `N` reads from a stored strand set with at most
//! `tau` substitutions in the index field and `rho` in the data field,
//! keeping ground truth for evaluation.
//!
//! Reads file format: one read per line, `<index bits> <data bits>`, with an
//! optional trailing ` #src=<i>` carrying the ground-truth source.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::strand::StrandSet;

/// One sequencer read: possibly erroneous index and data fields, plus the
/// hidden source strand (used only by evaluation, never by decoding paths).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Read {
    pub index: BitVec,
    pub data: BitVec,
    pub source: Option<usize>,
}

/// How read sources and error counts are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Sources i.i.d. uniform; error counts uniform on `[0, tau]`, `[0, rho]`.
    Uniform,
    /// Round-robin sources with the majority assumption enforced: every
    /// cluster keeps at least one clean-index read and clean-index reads
    /// strictly outnumber mis-indexed ones.
    Coverage,
    /// Exactly `tau` index errors and exactly `rho` data errors per read,
    /// round-robin sources.
    Adversarial,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Uniform => "uniform",
            Mode::Coverage => "coverage",
            Mode::Adversarial => "adversarial",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "uniform" => Ok(Mode::Uniform),
            "coverage" => Ok(Mode::Coverage),
            "adversarial" => Ok(Mode::Adversarial),
            other => Err(Error::InvalidInput(format!(
                "unknown channel mode {other:?} (expected uniform, coverage, or adversarial)"
            ))),
        }
    }
}

/// Channel configuration. Output is fully determined by `seed`: each read's
/// randomness is drawn from a stream keyed by `(seed, read ordinal)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelConfig {
    pub tau: usize,
    pub rho: usize,
    pub n: usize,
    pub mode: Mode,
    pub seed: u64,
}

fn flip_positions(v: &mut BitVec, rng: &mut ChaCha8Rng, count: usize) {
    for p in rand::seq::index::sample(rng, v.len(), count) {
        v.flip(p);
    }
}

/// Draws `cfg.n` reads from `set`.
pub fn simulate(set: &StrandSet, cfg: &ChannelConfig) -> Result<Vec<Read>> {
    let m = set.m();
    let log_m = set.log_m();
    let data_len = set.data_len();
    if cfg.tau > log_m {
        return Err(Error::InvalidParams(format!(
            "tau = {} exceeds the index width {log_m}",
            cfg.tau
        )));
    }
    if cfg.rho > data_len {
        return Err(Error::InvalidParams(format!(
            "rho = {} exceeds the data width {data_len}",
            cfg.rho
        )));
    }
    if cfg.mode == Mode::Coverage && cfg.n < m {
        return Err(Error::InvalidParams(format!(
            "coverage mode needs N >= M ({} < {m})",
            cfg.n
        )));
    }

    // per-cluster counts of clean-index and mis-indexed reads emitted so far
    let mut clean = vec![0usize; m];
    let mut dirty = vec![0usize; m];
    let mut out = Vec::with_capacity(cfg.n);

    for ordinal in 0..cfg.n {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(ordinal as u64);

        let source = match cfg.mode {
            Mode::Uniform => rng.gen_range(0..m),
            Mode::Coverage | Mode::Adversarial => ordinal % m,
        };
        let strand = set.strand(source);

        let mut index_errors = match cfg.mode {
            Mode::Adversarial => cfg.tau,
            _ => rng.gen_range(0..=cfg.tau),
        };
        if cfg.mode == Mode::Coverage && ordinal < m {
            // the first pass stays clean so every cluster is seeded
            index_errors = 0;
        }

        let mut index = strand.index.clone();
        if index_errors > 0 {
            let mut corrupted = index.clone();
            flip_positions(&mut corrupted, &mut rng, index_errors);
            let target = corrupted.value();
            let accept = cfg.mode != Mode::Coverage || clean[target] >= dirty[target] + 2;
            if accept {
                index = corrupted;
            } else {
                index_errors = 0;
            }
        }

        let data_errors = match cfg.mode {
            Mode::Adversarial => cfg.rho,
            _ => rng.gen_range(0..=cfg.rho),
        };
        let mut data = strand.data.clone();
        flip_positions(&mut data, &mut rng, data_errors);

        if index_errors == 0 {
            clean[source] += 1;
        } else {
            dirty[index.value()] += 1;
        }
        out.push(Read {
            index,
            data,
            source: Some(source),
        });
    }
    Ok(out)
}

/// Serializes reads, with ground truth when present.
pub fn write_reads<W: Write>(w: &mut W, reads: &[Read]) -> Result<()> {
    let mut out = String::new();
    for r in reads {
        out.push_str(&r.index.to_string());
        out.push(' ');
        out.push_str(&r.data.to_string());
        if let Some(src) = r.source {
            out.push_str(&format!(" #src={src}"));
        }
        out.push('\n');
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

/// Loads a fixed read set from a file, e.g. to replay a recorded run.
pub fn replay<P: AsRef<std::path::Path>>(path: P) -> Result<Vec<Read>> {
    let file = std::fs::File::open(path)?;
    read_reads(std::io::BufReader::new(file))
}

/// Parses a reads file; used by [`replay`].
pub fn read_reads<R: BufRead>(r: R) -> Result<Vec<Read>> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (index, data) = match (tokens.next(), tokens.next()) {
            (Some(i), Some(d)) => (i, d),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `<index bits> <data bits>`, found {line:?}"),
                })
            }
        };
        let source = match tokens.next() {
            None => None,
            Some(tag) => match tag.strip_prefix("#src=") {
                Some(v) => Some(v.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid source tag {tag:?}"),
                })?),
                None => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unexpected trailing token {tag:?}"),
                    })
                }
            },
        };
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "unexpected trailing tokens".into(),
            });
        }
        let index = BitVec::parse(index).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let data = BitVec::parse(data).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        out.push(Read {
            index,
            data,
            source,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strand::StrandSet;
    use std::io::Cursor;

    fn bv(s: &str) -> BitVec {
        BitVec::parse(s).unwrap()
    }

    fn sample_set() -> StrandSet {
        StrandSet::from_data_fields(vec![bv("110011"), bv("001000"), bv("111100"), bv("000111")])
            .unwrap()
    }

    fn sample_reads_text() -> &'static str {
        "10 111100 #src=2\n\
         01 001000 #src=1\n\
         10 110011 #src=0\n\
         00 110111 #src=0\n\
         00 110011 #src=0\n\
         10 111101 #src=2\n"
    }

    #[test]
    fn noiseless_channel_copies_strands() {
        let set = sample_set();
        for mode in [Mode::Uniform, Mode::Coverage, Mode::Adversarial] {
            let cfg = ChannelConfig {
                tau: 0,
                rho: 0,
                n: 8,
                mode,
                seed: 7,
            };
            for r in simulate(&set, &cfg).unwrap() {
                let src = r.source.unwrap();
                assert_eq!(&r.index, &set.strand(src).index);
                assert_eq!(&r.data, &set.strand(src).data);
            }
        }
    }

    #[test]
    fn adversarial_hits_exact_error_counts() {
        let set = sample_set();
        let cfg = ChannelConfig {
            tau: 1,
            rho: 1,
            n: 40,
            mode: Mode::Adversarial,
            seed: 3,
        };
        for r in simulate(&set, &cfg).unwrap() {
            let src = r.source.unwrap();
            assert_eq!(r.index.distance_to(&set.strand(src).index), 1);
            assert_eq!(r.data.distance_to(&set.strand(src).data), 1);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let set = sample_set();
        let cfg = ChannelConfig {
            tau: 1,
            rho: 1,
            n: 64,
            mode: Mode::Uniform,
            seed: 11,
        };
        assert_eq!(simulate(&set, &cfg).unwrap(), simulate(&set, &cfg).unwrap());
        let other = ChannelConfig { seed: 12, ..cfg };
        assert_ne!(
            simulate(&set, &cfg).unwrap(),
            simulate(&set, &other).unwrap()
        );
    }

    #[test]
    fn error_bounds_hold_over_many_reads() {
        let set = sample_set();
        for seed in 0..20 {
            let cfg = ChannelConfig {
                tau: 1,
                rho: 2,
                n: 500,
                mode: Mode::Uniform,
                seed,
            };
            for r in simulate(&set, &cfg).unwrap() {
                let src = r.source.unwrap();
                assert!(r.index.distance_to(&set.strand(src).index) <= 1);
                assert!(r.data.distance_to(&set.strand(src).data) <= 2);
            }
        }
    }

    #[test]
    fn coverage_enforces_clean_majority() {
        let set = sample_set();
        for seed in 0..50 {
            let cfg = ChannelConfig {
                tau: 1,
                rho: 1,
                n: 24,
                mode: Mode::Coverage,
                seed,
            };
            let reads = simulate(&set, &cfg).unwrap();
            let mut clean = [0usize; 4];
            let mut dirty = [0usize; 4];
            for r in &reads {
                let src = r.source.unwrap();
                if r.index.value() == src {
                    clean[src] += 1;
                } else {
                    dirty[r.index.value()] += 1;
                }
            }
            for c in 0..4 {
                assert!(clean[c] >= 1, "seed {seed}: cluster {c} has no clean read");
                assert!(
                    clean[c] > dirty[c],
                    "seed {seed}: cluster {c} clean {} <= dirty {}",
                    clean[c],
                    dirty[c]
                );
            }
        }
    }

    #[test]
    fn coverage_requires_enough_reads() {
        let set = sample_set();
        let cfg = ChannelConfig {
            tau: 0,
            rho: 0,
            n: 3,
            mode: Mode::Coverage,
            seed: 0,
        };
        assert!(simulate(&set, &cfg).is_err());
    }

    #[test]
    fn replay_sample_reads() {
        let reads = read_reads(Cursor::new(sample_reads_text())).unwrap();
        assert_eq!(reads.len(), 6);
        let mut sizes = [0usize; 4];
        for r in &reads {
            sizes[r.index.value()] += 1;
        }
        assert_eq!(sizes, [2, 1, 3, 0]);
        assert_eq!(reads[2].source, Some(0));
    }

    #[test]
    fn replay_edge_cases() {
        assert!(read_reads(Cursor::new("")).unwrap().is_empty());
        let err = read_reads(Cursor::new("10 1102\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = read_reads(Cursor::new("10 110011\n10\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn reads_roundtrip_through_text() {
        let set = sample_set();
        let cfg = ChannelConfig {
            tau: 1,
            rho: 1,
            n: 12,
            mode: Mode::Coverage,
            seed: 5,
        };
        let reads = simulate(&set, &cfg).unwrap();
        let mut buf = Vec::new();
        write_reads(&mut buf, &reads).unwrap();
        assert_eq!(read_reads(Cursor::new(buf)).unwrap(), reads);
    }

    #[test]
    fn tau_wider_than_index_rejected() {
        let set = sample_set();
        let cfg = ChannelConfig {
            tau: 3,
            rho: 0,
            n: 4,
            mode: Mode::Uniform,
            seed: 0,
        };
        assert!(simulate(&set, &cfg).is_err());
    }
}
