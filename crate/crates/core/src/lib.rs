//! Linear-programming decoding of linear codes over `Z_q` and `GF(p^m)`.
//!
//! Three polytope formulations are provided for the same relaxation: the
//! local-codeword polytope, the count-profile polytope, and the cascaded
//! polytope built from an equivalent code whose checks have degree at most
//! three. All LPs are solved in exact rational arithmetic so objective values
//! can be compared for equality, and the [`decomposition`] module turns the
//! equivalence between the first two into explicit point conversions.

pub mod battery;
pub mod channel;
pub mod code;
pub mod decoder;
pub mod decomposition;
pub mod error;
pub mod lp_exact;
pub mod polytopes;
pub mod ring;

pub use error::{Error, Result};
