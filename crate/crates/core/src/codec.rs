//! Single-redundancy-bit construction of constraint-satisfying strand sets,
//! and its exact inverse.
//!
//! The encoder stores `M * data_len - 1` payload bits across `M` data fields
//! (the last field donates one bit as a chain flag). Violating pairs are
//! repaired one strand at a time: the repaired strand's data field is
//! replaced by a *repelling vector* (far from every neighbor's corresponding
//! window) followed by compact difference records that let the decoder undo
//! the repair. Repairs are threaded into a chain through pointer and flag
//! bits, rooted at strand `M - 1`, which the decoder walks backwards.

use std::collections::BTreeSet;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::One;

use crate::bits::{hamming, index_bits, BitVec};
use crate::bounds::{ball, ball_clamped};
use crate::constraint;
use crate::error::{Error, Result};
use crate::params::CodeParams;
use crate::strand::StrandSet;

fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Smallest `len >= 1` with `2^len > (B_log2(M)(e) - 1) * B_len(t - 1)`,
/// i.e. the shortest repelling vector guaranteed to exist whatever the
/// neighbors' windows hold. Requires `e <= log2(M)` and `m` a power of two.
pub fn min_repelling_len(e: usize, t: usize, m: usize) -> usize {
    assert!(m.is_power_of_two() && m >= 2);
    let log_m = m.trailing_zeros() as usize;
    assert!(e <= log_m, "e = {e} exceeds log2(M) = {log_m}");
    let neighbors = ball(log_m, e).expect("e clamped") - BigUint::one();
    let mut len = 1usize;
    loop {
        let space = BigUint::one() << len;
        if space > &neighbors * ball_clamped(len, t.saturating_sub(1)) {
            return len;
        }
        len += 1;
        assert!(len <= 4096, "repelling length scan diverged");
    }
}

/// Bit layout of a repaired strand's data field.
///
/// `[0, log2(M))` is the pointer region (chain pointer, or the displaced
/// head of the last input vector on the final chain strand);
/// `[log2(M), log2(M) + record_len)` holds the repelling vector, the index
/// difference record, and the data difference record; the last bit is the
/// chain flag. Difference records use fixed-width position slots with an
/// explicit sentinel (`log2(M)` resp. `data_len`) marking unused slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepLayout {
    log_m: usize,
    data_len: usize,
    pub repelling_len: usize,
    pub index_slot_count: usize,
    pub index_slot_width: usize,
    pub data_slot_count: usize,
    pub data_slot_width: usize,
    pub record_len: usize,
}

impl RepLayout {
    pub fn pointer_region(&self) -> Range<usize> {
        0..self.log_m
    }

    pub fn record_region(&self) -> Range<usize> {
        self.log_m..self.log_m + self.record_len
    }

    pub fn flag_pos(&self) -> usize {
        self.data_len - 1
    }

    fn index_sentinel(&self) -> usize {
        self.log_m
    }

    fn data_sentinel(&self) -> usize {
        self.data_len
    }
}

/// Computes the record layout for `params`, failing when the pointer
/// region, record, and flag bit do not fit the data field.
pub fn layout(params: &CodeParams) -> Result<RepLayout> {
    let log_m = params.log_m();
    let data_len = params.data_len();
    if params.e() > log_m {
        return Err(Error::InvalidParams(format!(
            "e = {} exceeds log2(M) = {log_m}",
            params.e()
        )));
    }
    let repelling_len = min_repelling_len(params.e(), params.t(), params.m());
    let index_slot_width = ceil_log2(log_m + 1);
    let data_slot_width = ceil_log2(data_len + 1);
    let index_slot_count = params.e();
    let data_slot_count = params.t() - 1;
    let record_len =
        repelling_len + index_slot_count * index_slot_width + data_slot_count * data_slot_width;
    if log_m + record_len > data_len - 1 {
        return Err(Error::Infeasible(format!(
            "log2(M) + record = {log_m} + {record_len} > data_len - 1 = {}",
            data_len - 1
        )));
    }
    Ok(RepLayout {
        log_m,
        data_len,
        repelling_len,
        index_slot_count,
        index_slot_width,
        data_slot_count,
        data_slot_width,
        record_len,
    })
}

/// Largest `t` for which [`layout`] succeeds at `(l, m, e)`, by exact scan;
/// 0 when even `t = 1` is infeasible.
pub fn max_feasible_t(l: usize, m: usize, e: usize) -> Result<usize> {
    let mut t = 0usize;
    loop {
        match CodeParams::new(l, m, e, t + 1).and_then(|p| layout(&p)) {
            Ok(_) => t += 1,
            Err(Error::Infeasible(_)) => return Ok(t),
            Err(other) => return Err(other),
        }
    }
}

/// Closed-form estimate of the largest feasible `t` for the single-bit
/// construction:
/// `(data_len - log2(M) - e*log2(log2(M)) + log2(data_len)) /
///  (log2(data_len) + e*log2(log2(M)))`.
///
/// Derived from asymptotic ball-size bounds; at small lengths the exact scan
/// of [`max_feasible_t`] can fall short of it, so treat it as an estimate,
/// not a guarantee.
pub fn single_bit_t_estimate(l: usize, m: usize, e: usize) -> Result<f64> {
    let params = CodeParams::new(l, m, e, 1)?;
    let log_m = params.log_m() as f64;
    let n = params.data_len() as f64;
    let loglog = log_m.log2();
    let logn = n.log2();
    Ok((n - log_m - e as f64 * loglog + logn) / (logn + e as f64 * loglog))
}

/// Lexicographically smallest length-`len` vector at Hamming distance at
/// least `t` from every prefix.
pub fn repelling_vector(prefixes: &[BitVec], t: usize, len: usize) -> Result<BitVec> {
    if len > 127 {
        return Err(Error::OutOfRange(format!(
            "repelling length {len} exceeds the supported width of 127"
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
    let masks: Vec<u128> = prefixes.iter().map(|p| p.to_uint()).collect();
    for candidate in 0..(1u128 << len) {
        if masks
            .iter()
            .all(|&m| (candidate ^ m).count_ones() as usize >= t)
        {
            return Ok(BitVec::from_uint(candidate, len));
        }
    }
    Err(Error::NoRepellingVector)
}

fn diff_positions(a: &BitVec, b: &BitVec) -> Vec<usize> {
    (0..a.len()).filter(|&p| a.get(p) != b.get(p)).collect()
}

fn encode_slots(
    positions: &[usize],
    slot_count: usize,
    slot_width: usize,
    sentinel: usize,
) -> BitVec {
    let mut out = BitVec::new();
    for s in 0..slot_count {
        let value = positions.get(s).copied().unwrap_or(sentinel);
        for bit in BitVec::from_uint(value as u128, slot_width).iter() {
            out.push(bit);
        }
    }
    out
}

/// Index difference record: the positions where `ind_i` and `ind_j` differ,
/// ascending, one fixed-width slot each, sentinel-padded to `e` slots.
pub fn encode_index_diff(ind_i: &BitVec, ind_j: &BitVec, lay: &RepLayout) -> Result<BitVec> {
    let d = hamming(ind_i, ind_j)?;
    if d == 0 || d > lay.index_slot_count {
        return Err(Error::InvalidInput(format!(
            "index distance {d} outside [1, {}]",
            lay.index_slot_count
        )));
    }
    Ok(encode_slots(
        &diff_positions(ind_i, ind_j),
        lay.index_slot_count,
        lay.index_slot_width,
        lay.index_sentinel(),
    ))
}

/// Inverse of [`encode_index_diff`]: flips the recorded positions of `ind_i`.
pub fn apply_index_diff(ind_i: &BitVec, code: &BitVec, lay: &RepLayout) -> Result<BitVec> {
    if code.len() != lay.index_slot_count * lay.index_slot_width {
        return Err(Error::CorruptCodeword(format!(
            "malformed record: index diff has {} bits, expected {}",
            code.len(),
            lay.index_slot_count * lay.index_slot_width
        )));
    }
    let mut out = ind_i.clone();
    for s in 0..lay.index_slot_count {
        let value = code
            .slice(s * lay.index_slot_width, lay.index_slot_width)
            .value();
        if value > lay.index_sentinel() {
            return Err(Error::CorruptCodeword(format!(
                "malformed record: index slot value {value} exceeds {}",
                lay.index_sentinel()
            )));
        }
        if value < lay.index_sentinel() {
            out.flip(value);
        }
    }
    Ok(out)
}

/// Data difference record: positions where the data fields differ,
/// ascending, sentinel-padded to `t - 1` slots.
pub fn encode_data_diff(u_i: &BitVec, u_j: &BitVec, lay: &RepLayout) -> Result<BitVec> {
    let d = hamming(u_i, u_j)?;
    if d > lay.data_slot_count {
        return Err(Error::InvalidInput(format!(
            "data distance {d} exceeds {}",
            lay.data_slot_count
        )));
    }
    Ok(encode_slots(
        &diff_positions(u_i, u_j),
        lay.data_slot_count,
        lay.data_slot_width,
        lay.data_sentinel(),
    ))
}

/// Inverse of [`encode_data_diff`]: flips the recorded positions of `u_j`,
/// reconstructing `u_i` bit-exactly.
pub fn apply_data_diff(u_j: &BitVec, code: &BitVec, lay: &RepLayout) -> Result<BitVec> {
    if code.len() != lay.data_slot_count * lay.data_slot_width {
        return Err(Error::CorruptCodeword(format!(
            "malformed record: data diff has {} bits, expected {}",
            code.len(),
            lay.data_slot_count * lay.data_slot_width
        )));
    }
    let mut out = u_j.clone();
    for s in 0..lay.data_slot_count {
        let value = code
            .slice(s * lay.data_slot_width, lay.data_slot_width)
            .value();
        if value > lay.data_sentinel() {
            return Err(Error::CorruptCodeword(format!(
                "malformed record: data slot value {value} exceeds {}",
                lay.data_sentinel()
            )));
        }
        if value < lay.data_sentinel() {
            out.flip(value);
        }
    }
    Ok(out)
}

fn neighbor_table(m: usize, log_m: usize, e: usize) -> Result<Vec<Vec<usize>>> {
    let radius = e.min(log_m);
    (0..m)
        .map(|i| {
            let ind = index_bits(i, log_m)?;
            Ok(crate::bits::ball_indices(&ind, radius)?
                .into_iter()
                .map(|v| v.value())
                .filter(|&j| j != i)
                .collect())
        })
        .collect()
}

/// Encodes `M` input vectors (the first `M - 1` of `data_len` bits, the last
/// of `data_len - 1` bits) into a strand set satisfying the clustering
/// constraint, using exactly one bit of redundancy.
pub fn encode(inputs: &[BitVec], params: &CodeParams) -> Result<StrandSet> {
    let lay = layout(params)?;
    let m = params.m();
    let n = params.data_len();
    let (e, t) = (params.e(), params.t());
    if inputs.len() != m {
        return Err(Error::InvalidInput(format!(
            "expected {m} input vectors, found {}",
            inputs.len()
        )));
    }
    for (i, v) in inputs.iter().enumerate() {
        let want = if i == m - 1 { n - 1 } else { n };
        if v.len() != want {
            return Err(Error::InvalidInput(format!(
                "input vector {i} has {} bits, expected {want}",
                v.len()
            )));
        }
    }

    let mut data: Vec<BitVec> = inputs[..m - 1].to_vec();
    let mut last = inputs[m - 1].clone();
    last.push(false); // chain flag, clear until a repair happens
    data.push(last);

    let indices: Vec<BitVec> = (0..m)
        .map(|i| index_bits(i, params.log_m()))
        .collect::<Result<_>>()?;
    let neighbors = neighbor_table(m, params.log_m(), e)?;

    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..m {
        for &j in &neighbors[i] {
            if j > i && data[i].distance_to(&data[j]) < t {
                pending.insert((i, j));
            }
        }
    }

    let mut chain_prev = m - 1;
    let mut corrected = vec![false; m];
    let mut iterations = 0usize;
    while let Some(&(i, j)) = pending.iter().next() {
        iterations += 1;
        if iterations > m || corrected[i] {
            return Err(Error::Internal(
                "repair loop exceeded its bound; a strand would be corrected twice".into(),
            ));
        }
        corrected[i] = true;

        // Reference value for the data difference record, taken before the
        // header write below. The only strand that write can touch is the
        // chain root m - 1, and then only in the first iteration; the record
        // must encode against the root's pre-header value because the
        // decoder restores the root before performing its final undo.
        let reference = data[j].clone();

        // thread the chain through the previous strand
        data[chain_prev].set(lay.flag_pos(), true);
        data[chain_prev].write_at(0, &indices[i]);
        if chain_prev == m - 1 {
            // this header write lands on an unrepaired strand and can create
            // violations outside the initial scan
            for &x in &neighbors[m - 1] {
                if data[x].distance_to(&data[m - 1]) < t {
                    pending.insert((x, m - 1));
                }
            }
        }
        chain_prev = i;

        let w_start = lay.record_region().start;
        let prefixes: Vec<BitVec> = neighbors[i]
            .iter()
            .map(|&nb| data[nb].slice(w_start, lay.repelling_len))
            .collect();
        let w = repelling_vector(&prefixes, t, lay.repelling_len)?;
        let d1 = encode_index_diff(&indices[i], &indices[j], &lay)?;
        let d2 = encode_data_diff(&data[i], &reference, &lay)?;
        let mut record = w;
        for bit in d1.iter().chain(d2.iter()) {
            record.push(bit);
        }
        debug_assert_eq!(record.len(), lay.record_len);
        data[i].write_at(w_start, &record);

        pending.retain(|&(a, b)| data[a].distance_to(&data[b]) < t);
    }

    // close the chain: clear the final flag and stash the displaced head of
    // the last input vector in the now-free pointer region
    data[chain_prev].set(lay.flag_pos(), false);
    data[chain_prev].write_at(0, &inputs[m - 1].slice(0, params.log_m()));

    let set = StrandSet::from_data_fields(data)?;
    if !constraint::check(&set, e, t) {
        return Err(Error::Internal(
            "encoded set violates the clustering constraint".into(),
        ));
    }
    Ok(set)
}

/// Exact inverse of [`encode`].
pub fn decode(set: &StrandSet, params: &CodeParams) -> Result<Vec<BitVec>> {
    let lay = layout(params)?;
    let m = params.m();
    let n = params.data_len();
    if set.m() != m || set.data_len() != n {
        return Err(Error::InvalidInput(format!(
            "strand set geometry (M={}, data bits={}) does not match parameters (M={m}, data bits={n})",
            set.m(),
            set.data_len()
        )));
    }
    let log_m = params.log_m();
    let mut data: Vec<BitVec> = set.strands().iter().map(|s| s.data.clone()).collect();

    if data[m - 1].get(lay.flag_pos()) {
        // walk the repair chain from the root
        let mut chain = Vec::new();
        let mut visited = vec![false; m];
        visited[m - 1] = true;
        let mut cur = data[m - 1].slice(0, log_m).value();
        loop {
            // a revisit also catches any walk of more than M - 1 hops
            if visited[cur] {
                return Err(Error::CorruptCodeword("pointer cycle".into()));
            }
            visited[cur] = true;
            chain.push(cur);
            if !data[cur].get(lay.flag_pos()) {
                break;
            }
            cur = data[cur].slice(0, log_m).value();
        }
        let displaced = data[*chain.last().expect("nonempty chain")].slice(0, log_m);

        let indices: Vec<BitVec> = (0..m)
            .map(|i| index_bits(i, log_m))
            .collect::<Result<_>>()?;
        // undo newest repair first so every referenced neighbor still holds
        // the value it had when the difference record was written
        for (pos, &c) in chain.iter().enumerate().rev() {
            if pos == 0 {
                // the first repair's record was written against the chain
                // root's pre-header value, so restore the root before this
                // final undo
                data[m - 1].write_at(0, &displaced);
                data[m - 1].set(lay.flag_pos(), false);
            }
            let record = data[c].slice(log_m, lay.record_len);
            let d1 = record.slice(
                lay.repelling_len,
                lay.index_slot_count * lay.index_slot_width,
            );
            let d2 = record.slice(
                lay.repelling_len + lay.index_slot_count * lay.index_slot_width,
                lay.data_slot_count * lay.data_slot_width,
            );
            let j = apply_index_diff(&indices[c], &d1, &lay)?.value();
            let reference = data[j].clone();
            data[c] = apply_data_diff(&reference, &d2, &lay)?;
        }
    }

    let mut out = data;
    let last = out.pop().expect("m >= 2");
    out.push(last.slice(0, n - 1)); // strip the flag bit
    Ok(out)
}

/// Number of payload bits one strand set carries: `M * data_len - 1`.
pub fn payload_bit_len(params: &CodeParams) -> usize {
    params.m() * params.data_len() - 1
}

/// Byte length of a payload file for `params`.
pub fn payload_byte_len(params: &CodeParams) -> usize {
    payload_bit_len(params).div_ceil(8)
}

/// Splits a payload byte buffer (bits consumed MSB-first) into encoder
/// input vectors. The buffer must be exactly [`payload_byte_len`] bytes and
/// any unused low bits of the final byte must be zero.
pub fn unpack_payload(bytes: &[u8], params: &CodeParams) -> Result<Vec<BitVec>> {
    let bits = payload_bit_len(params);
    let expected = payload_byte_len(params);
    if bytes.len() != expected {
        return Err(Error::InvalidInput(format!(
            "payload is {} bytes, expected exactly {expected} ({bits} bits)",
            bytes.len()
        )));
    }
    let pad = expected * 8 - bits;
    if pad > 0 && bytes[expected - 1] & ((1u8 << pad) - 1) != 0 {
        return Err(Error::InvalidInput(
            "unused low bits of the final payload byte must be 0".into(),
        ));
    }
    let bit_at = |k: usize| bytes[k / 8] >> (7 - k % 8) & 1 == 1;
    let n = params.data_len();
    let mut out = Vec::with_capacity(params.m());
    let mut k = 0usize;
    for i in 0..params.m() {
        let want = if i == params.m() - 1 { n - 1 } else { n };
        let mut v = BitVec::new();
        for _ in 0..want {
            v.push(bit_at(k));
            k += 1;
        }
        out.push(v);
    }
    debug_assert_eq!(k, bits);
    Ok(out)
}

/// Inverse of [`unpack_payload`]: packs decoder output back into bytes,
/// MSB-first, zero-padding the final byte.
pub fn pack_payload(vectors: &[BitVec], params: &CodeParams) -> Result<Vec<u8>> {
    let n = params.data_len();
    if vectors.len() != params.m() {
        return Err(Error::InvalidInput(format!(
            "expected {} vectors, found {}",
            params.m(),
            vectors.len()
        )));
    }
    for (i, v) in vectors.iter().enumerate() {
        let want = if i == params.m() - 1 { n - 1 } else { n };
        if v.len() != want {
            return Err(Error::InvalidInput(format!(
                "vector {i} has {} bits, expected {want}",
                v.len()
            )));
        }
    }
    let mut bytes = vec![0u8; payload_byte_len(params)];
    let mut k = 0usize;
    for v in vectors {
        for bit in v.iter() {
            if bit {
                bytes[k / 8] |= 1 << (7 - k % 8);
            }
            k += 1;
        }
    }
    Ok(bytes)
}
