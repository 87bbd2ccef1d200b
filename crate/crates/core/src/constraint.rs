//! The clustering constraint: whenever two strands' indices are within
//! Hamming distance `e`, their data fields must be at distance at least `t`.

use crate::bits::{ball_indices, BitVec};
use crate::error::Result;
use crate::strand::StrandSet;

/// A pair of strands violating the constraint, with both distances recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationPair {
    pub i: usize,
    pub j: usize,
    pub index_distance: usize,
    pub data_distance: usize,
}

/// Index values within distance `e` of strand `i`'s index, the strand itself
/// included. Ordered by ascending (distance, index value).
pub(crate) fn neighbor_indices(set: &StrandSet, i: usize, e: usize) -> Vec<usize> {
    let log_m = set.log_m();
    let radius = e.min(log_m);
    let ball = ball_indices(&set.strand(i).index, radius).expect("radius clamped to index width");
    ball.into_iter().map(|ind| ind.value()).collect()
}

/// The neighbor set `S(e, i)`: all `(j, data_j)` with index distance at most
/// `e` from strand `i`, including `j = i` itself at distance 0.
pub fn neighbor_data(set: &StrandSet, i: usize, e: usize) -> Vec<(usize, BitVec)> {
    neighbor_indices(set, i, e)
        .into_iter()
        .map(|j| (j, set.data(j).clone()))
        .collect()
}

/// Every pair `i < j` with index distance <= `e` and data distance < `t`,
/// sorted by `(i, j)`.
///
/// Enumerates each index's Hamming ball rather than all M^2 pairs; output is
/// identical to the naive double loop.
pub fn violations(set: &StrandSet, e: usize, t: usize) -> Vec<ViolationPair> {
    let mut out = Vec::new();
    for i in 0..set.m() {
        for j in neighbor_indices(set, i, e) {
            if j <= i {
                continue;
            }
            let data_distance = set.data(i).distance_to(set.data(j));
            if data_distance < t {
                let index_distance = set.strand(i).index.distance_to(&set.strand(j).index);
                out.push(ViolationPair {
                    i,
                    j,
                    index_distance,
                    data_distance,
                });
            }
        }
    }
    out.sort_by_key(|v| (v.i, v.j));
    out
}

/// True iff the set satisfies the `(e, t)`-clustering constraint.
pub fn check(set: &StrandSet, e: usize, t: usize) -> bool {
    if t == 0 {
        return true;
    }
    for i in 0..set.m() {
        for j in neighbor_indices(set, i, e) {
            if j > i && set.data(i).distance_to(set.data(j)) < t {
                return false;
            }
        }
    }
    true
}

/// Violations recomputed with a plain double loop; kept here for parity
/// tests against the ball-based enumeration.
pub fn naive_violation_pairs(set: &StrandSet, e: usize, t: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 0..set.m() {
        for j in i + 1..set.m() {
            let di = crate::bits::hamming(&set.strand(i).index, &set.strand(j).index)?;
            let dd = crate::bits::hamming(set.data(i), set.data(j))?;
            if di <= e && dd < t {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}
