//! Polynomial automorphisms of affine space.
//!
//! Exact sparse polynomial arithmetic, polynomial self-maps and their
//! iterates, degree-growth classification, orbit-based contraction evidence
//! and truncated Poincaré–Dulac linearization of non-resonant contractions.
//!
//! The crate is `no_std` (with `alloc`); IO and the command line live in the
//! `polydyn` companion crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod coeff;
pub mod dynamics;
pub mod families;
pub mod iterate;
pub mod linalg;
pub mod linearize;
pub mod map;
pub mod monomial;
pub mod poly;

pub use coeff::{parse_rational, rat, Coefficient, Rational};
pub use families::{make_elementary, make_gamma3, make_gamma_d, make_henon, RangeCheck};
pub use iterate::{degree_sequence, iterate, DegreeEntry, DegreeSequence, DegreeSequenceError, IterateCache};
pub use map::{JacobianMatrix, MapError, PolyMap};
pub use monomial::Monomial;
pub use num_complex::Complex64;
pub use poly::{PolyError, Polynomial};
