//! Code parameters: strand geometry plus the two clustering-constraint
//! distances, validated once and passed around by reference.

use crate::error::{Error, Result};

/// Validated `(L, M, e, t)` with the derived quantities every module needs.
///
/// `M` strands of `L` bits each; the first `log2(M)` bits of a strand are its
/// index field and the remaining `data_len = L - log2(M)` bits its data
/// field. `e` bounds the index distance and `t` the data distance of the
/// clustering constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    l: usize,
    m: usize,
    log_m: usize,
    data_len: usize,
    e: usize,
    t: usize,
}

impl CodeParams {
    /// Validates and derives. Does not check codec feasibility; that is
    /// [`crate::codec::layout`].
    pub fn new(l: usize, m: usize, e: usize, t: usize) -> Result<CodeParams> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("M = {m} must be at least 2")));
        }
        if !m.is_power_of_two() {
            return Err(Error::InvalidParams(format!(
                "M = {m} must be a power of two"
            )));
        }
        let log_m = m.trailing_zeros() as usize;
        if l <= log_m {
            return Err(Error::InvalidParams(format!(
                "L = {l} leaves no data field for log2(M) = {log_m}"
            )));
        }
        let data_len = l - log_m;
        if data_len < log_m + 1 {
            return Err(Error::InvalidParams(format!(
                "data field of {data_len} bits is shorter than log2(M) + 1 = {}",
                log_m + 1
            )));
        }
        if e < 1 {
            return Err(Error::InvalidParams("e must be at least 1".into()));
        }
        if t < 1 {
            return Err(Error::InvalidParams("t must be at least 1".into()));
        }
        Ok(CodeParams {
            l,
            m,
            log_m,
            data_len,
            e,
            t,
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn log_m(&self) -> usize {
        self.log_m
    }

    /// Data-field length `L - log2(M)`.
    pub fn data_len(&self) -> usize {
        self.data_len
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Index fraction `log2(M) / L`. The `data_len >= log_m + 1` invariant
    /// keeps this strictly below 1/2.
    pub fn beta(&self) -> f64 {
        self.log_m as f64 / self.l as f64
    }
}

/// Convenience constructor mirroring [`CodeParams::new`].
pub fn make_params(l: usize, m: usize, e: usize, t: usize) -> Result<CodeParams> {
    CodeParams::new(l, m, e, t)
}
