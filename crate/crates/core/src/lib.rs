//! Exact computations around the refined Bloch–Wigner sequence for SL₂ over finite rings.
//!
//! * [`ring`]: finite ring arithmetic, unit data, 2×2 matrices.
//! * [`fgab`]: finitely generated abelian groups over Z with exact (big integer) elimination.
//! * [`scissors`]: P(A), RP(A), the maps λ, λ₁, λ₂ and the Bloch groups.
//! * [`xcomplex`]: the complex of unimodular-vector tuples, orbit canonicalization, ∂̄₄.
//! * [`chains`]: formal bar / homogeneous chains over SL₂(A) and the pushdowns to A^×.
//! * [`certify`]: chain-level certificates and the condition / order report.

pub mod certify;
pub mod chains;
pub mod error;
pub mod fgab;
pub mod ring;
pub mod scissors;
pub mod xcomplex;

pub use error::{Error, Result};
pub use ring::{Mat2, Ring, RingElem, RingSpec};
