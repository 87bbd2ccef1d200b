//! Strands and strand sets, plus the line-oriented text format used to store
//! them.
//!
//! File layout (`CCC1` format):
//!
//! ```text
//! CCC1 L=<L> M=<M> e=<e> t=<t>
//! <index bits> <data bits>      (M lines, index-ascending)
//! ```

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::bits::{index_bits, BitVec};
use crate::error::{Error, Result};
use crate::params::CodeParams;

/// One stored strand: a fixed-width index field and a data field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub index: BitVec,
    pub data: BitVec,
}

/// Exactly `M` strands, one per index value in `[0, M)`.
///
/// Stored index-sorted; set semantics are preserved by the one-strand-per-
/// index invariant, so positional access by index value is well-defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandSet {
    strands: Vec<Strand>,
}

impl StrandSet {
    /// Validates that the strands cover every index exactly once and share a
    /// common geometry, then stores them index-ascending.
    pub fn new(mut strands: Vec<Strand>) -> Result<StrandSet> {
        let m = strands.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "strand count {m} is not a power of two of at least 2"
            )));
        }
        let log_m = m.trailing_zeros() as usize;
        let data_len = strands[0].data.len();
        let mut seen = vec![false; m];
        for s in &strands {
            if s.index.len() != log_m {
                return Err(Error::InvalidInput(format!(
                    "index field {} does not have log2({m}) = {log_m} bits",
                    s.index
                )));
            }
            if s.data.len() != data_len {
                return Err(Error::InvalidInput(format!(
                    "data field of strand {} has {} bits, expected {data_len}",
                    s.index,
                    s.data.len()
                )));
            }
            let v = s.index.value();
            if seen[v] {
                return Err(Error::InvalidInput(format!("duplicate index {}", s.index)));
            }
            seen[v] = true;
        }
        strands.sort_by_key(|s| s.index.value());
        Ok(StrandSet { strands })
    }

    /// Builds a set from data fields alone; strand `i` receives index `i`.
    pub fn from_data_fields(data: Vec<BitVec>) -> Result<StrandSet> {
        let m = data.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "strand count {m} is not a power of two of at least 2"
            )));
        }
        let log_m = m.trailing_zeros() as usize;
        let strands = data
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                Ok(Strand {
                    index: index_bits(i, log_m)?,
                    data: d,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        StrandSet::new(strands)
    }

    pub fn m(&self) -> usize {
        self.strands.len()
    }

    pub fn log_m(&self) -> usize {
        self.strands.len().trailing_zeros() as usize
    }

    pub fn data_len(&self) -> usize {
        self.strands[0].data.len()
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    /// The strand with index value `i`.
    pub fn strand(&self, i: usize) -> &Strand {
        &self.strands[i]
    }

    /// Data field of the strand with index value `i`.
    pub fn data(&self, i: usize) -> &BitVec {
        &self.strands[i].data
    }
}

/// Serializes a strand set with its parameters as the version header.
pub fn write_strand_set<W: Write>(w: &mut W, set: &StrandSet, params: &CodeParams) -> Result<()> {
    if set.m() != params.m() || set.data_len() != params.data_len() {
        return Err(Error::InvalidInput(format!(
            "strand set geometry (M={}, data bits={}) does not match parameters (M={}, data bits={})",
            set.m(),
            set.data_len(),
            params.m(),
            params.data_len()
        )));
    }
    let mut out = String::new();
    writeln!(
        out,
        "CCC1 L={} M={} e={} t={}",
        params.l(),
        params.m(),
        params.e(),
        params.t()
    )
    .expect("string write");
    for s in set.strands() {
        writeln!(out, "{} {}", s.index, s.data).expect("string write");
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

fn parse_header_field(token: Option<&str>, key: &str) -> Result<usize> {
    let token = token.ok_or_else(|| Error::Parse {
        line: 1,
        msg: format!("missing header field {key}="),
    })?;
    let value = token.strip_prefix(key).and_then(|t| t.strip_prefix('='));
    match value {
        Some(v) => v.parse::<usize>().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("invalid value for {key}: {v:?}"),
        }),
        None => Err(Error::Parse {
            line: 1,
            msg: format!("expected {key}=<value>, found {token:?}"),
        }),
    }
}

/// Parses a `CCC1` strand-set file, returning the declared parameters and
/// the validated set.
pub fn read_strand_set<R: BufRead>(r: R) -> Result<(CodeParams, StrandSet)> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        msg: "empty file, expected CCC1 header".into(),
    })?;
    let header = header?;
    let mut tokens = header.split_whitespace();
    match tokens.next() {
        Some("CCC1") => {}
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected CCC1 magic, found {other:?}"),
            })
        }
    }
    let l = parse_header_field(tokens.next(), "L")?;
    let m = parse_header_field(tokens.next(), "M")?;
    let e = parse_header_field(tokens.next(), "e")?;
    let t = parse_header_field(tokens.next(), "t")?;
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected trailing header token {extra:?}"),
        });
    }
    let params = CodeParams::new(l, m, e, t).map_err(|err| Error::Parse {
        line: 1,
        msg: err.to_string(),
    })?;

    let mut strands = Vec::with_capacity(m);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (index, data) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(i), Some(d), None) => (i, d),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `<index bits> <data bits>`, found {line:?}"),
                })
            }
        };
        let index = BitVec::parse(index).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let data = BitVec::parse(data).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        if index.len() != params.log_m() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "index field has {} bits, header declares log2(M) = {}",
                    index.len(),
                    params.log_m()
                ),
            });
        }
        if data.len() != params.data_len() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "data field has {} bits, header declares {}",
                    data.len(),
                    params.data_len()
                ),
            });
        }
        if index.value() != strands.len() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "strands must be index-ascending: expected index {}, found {}",
                    strands.len(),
                    index.value()
                ),
            });
        }
        strands.push(Strand { index, data });
    }
    if strands.len() != m {
        return Err(Error::Parse {
            line: m + 1,
            msg: format!("expected {m} strand lines, found {}", strands.len()),
        });
    }
    let set = StrandSet::new(strands).map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    Ok((params, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use std::io::Cursor;

    fn bv(s: &str) -> BitVec {
        BitVec::parse(s).unwrap()
    }

    pub(crate) fn sample_set() -> StrandSet {
        StrandSet::from_data_fields(vec![bv("110011"), bv("001000"), bv("111100"), bv("000111")])
            .unwrap()
    }

    #[test]
    fn roundtrips_through_text() {
        let params = make_params(8, 4, 1, 4).unwrap();
        let set = sample_set();
        let mut buf = Vec::new();
        write_strand_set(&mut buf, &set, &params).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("CCC1 L=8 M=4 e=1 t=4\n"));
        let (parsed_params, parsed_set) = read_strand_set(Cursor::new(buf)).unwrap();
        assert_eq!(parsed_params, params);
        assert_eq!(parsed_set, set);
    }

    #[test]
    fn rejects_duplicate_index() {
        let strands = vec![
            Strand {
                index: bv("00"),
                data: bv("0000"),
            },
            Strand {
                index: bv("00"),
                data: bv("0001"),
            },
            Strand {
                index: bv("10"),
                data: bv("0010"),
            },
            Strand {
                index: bv("11"),
                data: bv("0011"),
            },
        ];
        assert!(StrandSet::new(strands).is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "CCC1 L=8 M=4 e=1 t=4\n00 110011\n01 0010x0\n";
        let err = read_strand_set(Cursor::new(text)).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn strand_count_enforced() {
        let text = "CCC1 L=8 M=4 e=1 t=4\n00 110011\n";
        assert!(read_strand_set(Cursor::new(text)).is_err());
    }
}
