//! Fixed-width bit vectors with MSB-first positions, plus Hamming-space
//! helpers (distance, fixed-width index encoding, ball enumeration).
//!
//! Position 0 is always the leftmost (most significant) bit. All slicing and
//! writing is `(start, length)`: `slice(i, l)` covers positions `i..i+l`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// An ordered sequence of bits. Equality is positionwise; the textual form
/// is the left-to-right bit string; `Ord` is lexicographic, which for equal
/// lengths coincides with numeric order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVec {
    bits: Vec<bool>,
}

impl BitVec {
    pub fn new() -> Self {
        BitVec { bits: Vec::new() }
    }

    pub fn zeros(len: usize) -> Self {
        BitVec {
            bits: vec![false; len],
        }
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        BitVec { bits }
    }

    /// The low `width` bits of `value`, most significant first.
    /// `value` must fit in `width` bits.
    pub fn from_uint(value: u128, width: usize) -> Self {
        assert!(width <= 128, "width {width} exceeds 128");
        assert!(
            width == 128 || value >> width == 0,
            "value {value} does not fit in {width} bits"
        );
        let bits = (0..width)
            .map(|p| (value >> (width - 1 - p)) & 1 == 1)
            .collect();
        BitVec { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, pos: usize) -> bool {
        self.bits[pos]
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        self.bits[pos] = value;
    }

    pub fn flip(&mut self, pos: usize) {
        self.bits[pos] = !self.bits[pos];
    }

    pub fn push(&mut self, value: bool) {
        self.bits.push(value);
    }

    /// Subvector of `len` positions starting at `start`; requires
    /// `start + len <= self.len()`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(
            start + len <= self.bits.len(),
            "slice [{start}, {len}] out of bounds for length {}",
            self.bits.len()
        );
        BitVec {
            bits: self.bits[start..start + len].to_vec(),
        }
    }

    /// Overwrites positions `start..start + src.len()` with `src`.
    pub fn write_at(&mut self, start: usize, src: &BitVec) {
        assert!(
            start + src.len() <= self.bits.len(),
            "write [{start}, {}] out of bounds for length {}",
            src.len(),
            self.bits.len()
        );
        self.bits[start..start + src.len()].copy_from_slice(&src.bits);
    }

    /// Numeric value, reading the bits MSB-first. Requires `len() <= 128`.
    pub fn to_uint(&self) -> u128 {
        assert!(self.bits.len() <= 128, "bit vector too long for u128");
        self.bits
            .iter()
            .fold(0u128, |acc, &b| (acc << 1) | u128::from(b))
    }

    /// Numeric value as `usize`; requires the value to fit.
    pub fn value(&self) -> usize {
        let v = self.to_uint();
        usize::try_from(v).expect("bit vector value exceeds usize")
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Hamming distance to `other`; panics on length mismatch (callers that
    /// cannot guarantee equal lengths should use [`hamming`]).
    pub fn distance_to(&self, other: &BitVec) -> usize {
        assert_eq!(self.bits.len(), other.bits.len(), "incompatible lengths");
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Parses a string of `'0'`/`'1'` characters.
    pub fn parse(s: &str) -> Result<BitVec> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "invalid bit character {other:?} at offset {i}"
                    )))
                }
            }
        }
        Ok(BitVec { bits })
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<BitVec> {
        BitVec::parse(s)
    }
}

/// Hamming distance between two equal-length vectors.
pub fn hamming(x: &BitVec, y: &BitVec) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.distance_to(y))
}

/// Fixed-width binary representation of `i`, MSB first.
pub fn index_bits(i: usize, log_m: usize) -> Result<BitVec> {
    if log_m > 63 {
        return Err(Error::OutOfRange(format!(
            "index width {log_m} exceeds supported maximum of 63"
        )));
    }
    if i >= (1usize << log_m) {
        return Err(Error::OutOfRange(format!(
            "index {i} does not fit in {log_m} bits"
        )));
    }
    Ok(BitVec::from_uint(i as u128, log_m))
}

/// All vectors within Hamming distance `radius` of `ind`, ordered by
/// ascending `(distance, numeric value)`.
pub fn ball_indices(ind: &BitVec, radius: usize) -> Result<Vec<BitVec>> {
    if radius > ind.len() {
        return Err(Error::OutOfRange(format!(
            "ball radius {radius} exceeds vector length {}",
            ind.len()
        )));
    }
    let mut out = Vec::new();
    for d in 0..=radius {
        let mut shell: Vec<BitVec> = (0..ind.len())
            .combinations(d)
            .map(|positions| {
                let mut v = ind.clone();
                for p in positions {
                    v.flip(p);
                }
                v
            })
            .collect();
        shell.sort();
        out.extend(shell);
    }
    Ok(out)
}
