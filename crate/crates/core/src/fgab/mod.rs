//! Finitely generated abelian groups: integer matrices, Smith forms, presentations,
//! multilinear constructions, Tor and bar homology of finite abelian groups.

pub mod bar;
pub mod coeff;
pub mod echelon;
pub mod matrix;
pub mod multilinear;
pub mod presentation;
pub mod snf;
pub mod tor;

pub use echelon::Echelon;
pub use matrix::{sparse_from_terms, IntMatrix};
pub use multilinear::{sym2z, tensor_self, wedge2, wedge3, MultiOp, Multilinear};
pub use presentation::{AbInvariants, AbMap, AbPresentation, Subquotient, SubquotientResult};
pub use snf::{smith_normal_form, Smith};
pub use tor::{tor1, TorData};
pub use bar::{bar_homology, bar_homology_invariants, orbit_homology, BarHomology, FiniteAbelian, OrbitHomology};
