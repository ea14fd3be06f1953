//! Exact computational matroid toolkit.
//!
//! Matroids on at most 16 labeled elements, matrices over partial fields,
//! connectivity and fan structure, delta-wye exchange, fragility and gadget
//! classification, and checkers that evaluate structural lemmas about
//! excluded minors on concrete instances.

pub mod bits;
pub mod connectivity;
pub mod error;
pub mod fragility;
pub mod io;
pub mod matroid;
pub mod pfield;
pub mod pmatrix;
pub mod structure;
pub mod verify;

/// Element identifier.
pub type Label = u32;

pub use error::{Error, Result};
pub use matroid::Matroid;
pub use pfield::{PartialField, RingValue};
pub use pmatrix::PMatrix;
