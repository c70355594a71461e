//! Locally recoverable codes with local error detection.
//!
//! A recovery set `R` for coordinate `i` detects `t` errors when the code
//! punctured to `R ∪ {i}` has minimum distance above `t + 1`. Such a set
//! repairs an erased `x_i` and, when at most `t` helper symbols are
//! corrupted, either flags the corruption or returns the correct value.
//!
//! * [`galois`]: finite fields GF(p^m) and polynomials.
//! * [`codeops`]: linear codes, puncturing/shortening/duals, distance,
//!   generalized Hamming weights, locality search and bounds.
//! * [`rscodes`]: Reed-Solomon and LRC Reed-Solomon constructions.
//! * [`localrepair`]: recovery plans, detection and repair.
//! * [`storagesim`]: seeded fault-injection simulation and byte ingestion.
//! * [`descriptor`]: JSON code descriptors.

pub mod codeops;
pub mod descriptor;
pub mod galois;
pub mod localrepair;
pub mod rscodes;
pub mod storagesim;

pub use codeops::{CoordSet, LinearCode, SearchMode};
pub use galois::{Felt, Field, FieldSpec, Poly};
pub use localrepair::{RecoveryPlan, RepairOutcome, Verdict};
