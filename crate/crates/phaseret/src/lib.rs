//! Entire-function pairs with matching magnitudes on lines.
//!
//! Non-uniqueness in phase retrieval of entire functions is governed by
//! root-multiset symmetries: magnitudes agreeing on a line force a mirror
//! symmetry between the root sets, a second line upgrades it to a rotation
//! or translation symmetry, and the Hadamard factorisation turns those
//! symmetries into explicit pairs `(f, g)` with `|f| = |g|` on the lines
//! yet `f != e^{i alpha} g`.
//!
//! The crate provides
//!
//! * canonical-product evaluation with certified truncation error
//!   ([`hadamard`]), built on Weierstrass primary factors ([`primary`]),
//! * root multisets with symbolic orbits and the shared/exclusive
//!   decomposition ([`roots`]),
//! * generators for every constraint class: single line, rational-angle
//!   intersecting lines, two parallel lines, infinitely many equidistant
//!   lines, and a universal family defeating all spacings at once
//!   ([`pairs`]),
//! * numerical Gabor and Bargmann transforms plus the inverse Bargmann
//!   map, which transfer the pairs to square-integrable signals
//!   ([`gabor`]),
//! * verification instruments: magnitude-agreement reports, a
//!   Jensen-formula root-count bound, the lattice-density dichotomy, and
//!   series/integral identities ([`verify`]).

pub mod gabor;
pub mod hadamard;
pub mod pairs;
pub mod primary;
pub mod roots;
pub mod series;
pub mod verify;

pub use num_complex::Complex64;
