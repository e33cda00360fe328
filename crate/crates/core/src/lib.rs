//! Exact-arithmetic workbench for completed-cycle Hurwitz numbers, their
//! cohomological-field-theory expressions, spectral-curve amplitudes, and the
//! finite matrix-integral identities tying the three together.
//!
//! Everything is computed over Q or over the cyclotomic extension
//! Q(ζ_r)[α]/(α² + 2/r); there is no floating point anywhere, so any two
//! pipelines that are supposed to agree are compared with `==`.

pub mod cohft;
pub mod exact;
pub mod hurwitz;
pub mod matrix_model;
pub mod partitions;
pub mod psi;
pub mod spectral;

pub use exact::{CycExt, MPoly, Rat, TruncSeries};
