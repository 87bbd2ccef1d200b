//! Independent brute-force references: exhaustive counting of
//! constraint-satisfying strand sets, a reference repelling-vector search,
//! a closed-form cross-check, and seeded round-trip fuzzing.
//!
//! Everything here deliberately avoids the code paths it validates: counting
//! works on raw integer masks with its own adjacency scan, and the repelling
//! search collects all candidates before picking the minimum.

use std::time::Instant;

use num_bigint::BigUint;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::BitVec;
use crate::codec;
use crate::constraint;
use crate::error::{Error, Result};
use crate::params::CodeParams;

/// Result of one exhaustive count.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub m: usize,
    pub l: usize,
    pub e: usize,
    pub t: usize,
    pub exact_count: u64,
    pub elapsed_secs: f64,
}

const ENUM_BUDGET_BITS: usize = 24;

fn enumeration_geometry(m: usize, l: usize) -> Result<(usize, usize)> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::InvalidParams(format!(
            "M = {m} must be a power of two of at least 2"
        )));
    }
    let log_m = m.trailing_zeros() as usize;
    if l <= log_m {
        return Err(Error::InvalidParams(format!(
            "L = {l} leaves no data field for log2(M) = {log_m}"
        )));
    }
    Ok((log_m, l - log_m))
}

/// Index pairs `i < j` at Hamming distance at most `e`, by direct popcount.
fn adjacent_pairs(m: usize, e: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if (i ^ j).count_ones() as usize <= e {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Counts the assignments of `M` data fields that satisfy the clustering
/// constraint, over the full space of `2^(M * data_len)` assignments.
///
/// Enumeration walks a Gray code over the concatenated data fields, so each
/// step flips one bit and updates the affected pair distances incrementally;
/// the range is partitioned over a fixed prefix of high bits and the partial
/// counts are summed, which keeps the result independent of scheduling.
pub fn exhaustive_count(m: usize, l: usize, e: usize, t: usize) -> Result<u64> {
    let (_, data_len) = enumeration_geometry(m, l)?;
    let total_bits = m * data_len;
    if total_bits > ENUM_BUDGET_BITS {
        return Err(Error::BudgetExceeded(format!(
            "M * data_len = {total_bits} exceeds the {ENUM_BUDGET_BITS}-bit enumeration budget"
        )));
    }
    let pairs = adjacent_pairs(m, e);
    if t == 0 || pairs.is_empty() {
        return Ok(1u64 << total_bits);
    }

    // pairs touching each strand, as indices into `pairs`
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (pi, &(i, j)) in pairs.iter().enumerate() {
        touching[i].push(pi);
        touching[j].push(pi);
    }

    let prefix_bits = total_bits.saturating_sub(16);
    let suffix_bits = total_bits - prefix_bits;

    let count_partition = |prefix: u64| -> u64 {
        let mut fields = vec![0u32; m];
        for b in 0..prefix_bits {
            if prefix >> b & 1 == 1 {
                let global = suffix_bits + b;
                fields[global / data_len] ^= 1 << (global % data_len);
            }
        }
        let mut dist: Vec<u32> = pairs
            .iter()
            .map(|&(i, j)| (fields[i] ^ fields[j]).count_ones())
            .collect();
        let mut violating = dist.iter().filter(|&&d| (d as usize) < t).count();
        let mut count = u64::from(violating == 0);

        for step in 1u64..1 << suffix_bits {
            let global = step.trailing_zeros() as usize;
            let s = global / data_len;
            let bit = 1u32 << (global % data_len);
            fields[s] ^= bit;
            for &pi in &touching[s] {
                let (i, j) = pairs[pi];
                let other = if i == s { j } else { i };
                let equal_now = (fields[s] ^ fields[other]) & bit == 0;
                let old = dist[pi];
                let new = if equal_now { old - 1 } else { old + 1 };
                dist[pi] = new;
                if (old as usize) < t && (new as usize) >= t {
                    violating -= 1;
                } else if (old as usize) >= t && (new as usize) < t {
                    violating += 1;
                }
            }
            count += u64::from(violating == 0);
        }
        count
    };

    Ok((0u64..1 << prefix_bits)
        .into_par_iter()
        .map(count_partition)
        .sum())
}

/// [`exhaustive_count`] wrapped with timing for reporting.
pub fn exhaustive_report(m: usize, l: usize, e: usize, t: usize) -> Result<OracleReport> {
    let start = Instant::now();
    let exact_count = exhaustive_count(m, l, e, t)?;
    Ok(OracleReport {
        m,
        l,
        e,
        t,
        exact_count,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Full recount without Gray-code bookkeeping: every assignment is checked
/// from scratch. Slow; exists to spot-check [`exhaustive_count`].
pub fn naive_count(m: usize, l: usize, e: usize, t: usize) -> Result<u64> {
    let (_, data_len) = enumeration_geometry(m, l)?;
    let total_bits = m * data_len;
    if total_bits > 20 {
        return Err(Error::BudgetExceeded(format!(
            "M * data_len = {total_bits} exceeds the naive recount budget of 20"
        )));
    }
    let mask = (1u64 << data_len) - 1;
    let mut count = 0u64;
    for word in 0u64..1 << total_bits {
        let field = |i: usize| word >> (i * data_len) & mask;
        let mut ok = true;
        'scan: for i in 0..m {
            for j in i + 1..m {
                if (i ^ j).count_ones() as usize <= e
                    && ((field(i) ^ field(j)).count_ones() as usize) < t
                {
                    ok = false;
                    break 'scan;
                }
            }
        }
        count += u64::from(ok);
    }
    Ok(count)
}

/// Proper colorings of an n-cycle with q colors: `(q-1)^n + (-1)^n (q-1)`.
/// Cross-checks the `M = 4, e = 1, t = 1` count, whose adjacency graph is a
/// 4-cycle over the data fields with `2^data_len` colors.
pub fn cycle_colorings(q: u64, n: usize) -> Result<BigUint> {
    if q < 2 || n < 3 {
        return Err(Error::InvalidParams(format!(
            "cycle colorings need q >= 2 and n >= 3, got q = {q}, n = {n}"
        )));
    }
    let base = BigUint::from(q - 1);
    let power = base.pow(n as u32);
    Ok(if n.is_multiple_of(2) {
        power + base
    } else {
        power - base
    })
}

/// Reference repelling-vector search: scans all `2^len` candidates, keeps
/// the valid ones, and returns the lexicographic minimum.
pub fn brute_repelling(prefixes: &[BitVec], t: usize, len: usize) -> Result<BitVec> {
    if len > ENUM_BUDGET_BITS {
        return Err(Error::BudgetExceeded(format!(
            "repelling scan over {len} bits exceeds the {ENUM_BUDGET_BITS}-bit budget"
        )));
    }
    for p in prefixes {
        if p.len() != len {
            return Err(Error::LengthMismatch {
                left: p.len(),
                right: len,
            });
        }
    }
    let mut valid: Vec<BitVec> = Vec::new();
    for candidate in 0u64..1 << len {
        let v = BitVec::from_uint(u128::from(candidate), len);
        if prefixes.iter().all(|p| p.distance_to(&v) >= t) {
            valid.push(v);
        }
    }
    valid.into_iter().min().ok_or(Error::NoRepellingVector)
}

/// Result of a fuzzing run; any failure aborts with the failing trial seed
/// instead.
#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub trials: u64,
    pub corrections_seen: u64,
    pub elapsed_secs: f64,
}

fn random_inputs(rng: &mut ChaCha8Rng, params: &CodeParams) -> Vec<BitVec> {
    let n = params.data_len();
    (0..params.m())
        .map(|i| {
            let want = if i == params.m() - 1 { n - 1 } else { n };
            BitVec::from_bools((0..want).map(|_| rng.gen()).collect())
        })
        .collect()
}

/// Encodes `trials` seeded random inputs, asserting constraint satisfaction,
/// decode identity, and the single redundancy bit for each.
pub fn roundtrip_fuzz(params: &CodeParams, trials: u64, seed: u64) -> Result<FuzzReport> {
    codec::layout(params)?;
    let start = Instant::now();
    let mut corrections_seen = 0u64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let inputs = random_inputs(&mut rng, params);
        let fail = |what: &str| {
            Error::Internal(format!(
                "round-trip fuzz failed ({what}) at trial {trial}, seed {seed}"
            ))
        };

        let set = codec::encode(&inputs, params).map_err(|e| fail(&e.to_string()))?;
        if !constraint::check(&set, params.e(), params.t()) {
            return Err(fail("constraint violated"));
        }
        let input_bits: usize = inputs.iter().map(BitVec::len).sum();
        if params.m() * params.data_len() != input_bits + 1 {
            return Err(fail("redundancy is not exactly one bit"));
        }
        // the chain root keeps flag 1 whenever any strand was repaired
        if set.data(params.m() - 1).get(params.data_len() - 1) {
            corrections_seen += 1;
        }
        let decoded = codec::decode(&set, params).map_err(|e| fail(&e.to_string()))?;
        if decoded != inputs {
            return Err(fail("decode mismatch"));
        }
    }
    Ok(FuzzReport {
        trials,
        corrections_seen,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Exhaustive decode-encode identity over every input, for parameter sets
/// whose total input width `M * data_len - 1` is at most `budget_bits`.
pub fn exhaustive_roundtrip(params: &CodeParams, budget_bits: usize) -> Result<u64> {
    codec::layout(params)?;
    let n = params.data_len();
    let m = params.m();
    let total_bits = m * n - 1;
    if total_bits > budget_bits.min(30) {
        return Err(Error::BudgetExceeded(format!(
            "input space of 2^{total_bits} exceeds the requested budget"
        )));
    }
    let count = (0u64..1 << total_bits)
        .into_par_iter()
        .map(|word| {
            let all = BitVec::from_uint(u128::from(word), total_bits);
            let mut inputs = Vec::with_capacity(m);
            for i in 0..m - 1 {
                inputs.push(all.slice(i * n, n));
            }
            inputs.push(all.slice((m - 1) * n, n - 1));
            let set = codec::encode(&inputs, params).expect("encode failed in exhaustive sweep");
            assert!(
                constraint::check(&set, params.e(), params.t()),
                "constraint violated for input {word:b}"
            );
            assert_eq!(
                codec::decode(&set, params).expect("decode failed in exhaustive sweep"),
                inputs,
                "decode mismatch for input {word:b}"
            );
            1u64
        })
        .sum();
    Ok(count)
}
