//! Clustering-correcting codes for unordered-strand storage.
//!
//! A stored message is a set of `M` strands, each an index field of
//! `log2(M)` bits followed by a data field. The clustering constraint keeps
//! the data fields of any two strands with nearby indices far apart, so a
//! read whose index was corrupted still lands recognizably far from the
//! cluster it falls into and can be routed back to its source. This crate
//! provides:
//!
//! - [`codec`]: an encoder that turns arbitrary payloads into
//!   constraint-satisfying strand sets at the cost of a single redundancy
//!   bit, and its exact inverse;
//! - [`channel`]: a seeded simulator for reads with bounded substitution
//!   errors in the index and data fields;
//! - [`clustering`]: index-based clustering with outlier detection,
//!   reassignment, and majority reconstruction;
//! - [`bounds`]: exact and log-domain evaluation of code-size and
//!   redundancy bounds;
//! - [`oracle`]: independent brute-force references (exhaustive counts,
//!   repelling-vector search, round-trip fuzzing) that validate the rest.

pub mod bits;
pub mod bounds;
pub mod channel;
pub mod clustering;
pub mod codec;
pub mod constraint;
pub mod error;
pub mod oracle;
pub mod params;
pub mod strand;

pub use bits::{ball_indices, hamming, index_bits, BitVec};
pub use error::{Error, Result};
pub use params::{make_params, CodeParams};
pub use strand::{Strand, StrandSet};
