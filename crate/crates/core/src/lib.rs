//! Exact linear algebra over Q for Weil algebras: ideals, derivations,
//! automorphisms, near-points and jets, and decision procedures for affine
//! bundle structures.

pub mod algebra;
pub mod criteria;
pub mod derivation;
pub mod error;
pub mod ideal;
pub mod linalg;
pub mod points;
pub mod poly;
pub mod seed;
pub mod serialize;

pub use algebra::{
    algebra_from_table, quotient, quotient_algebra, subalgebra_generated, truncated_algebra,
    AlgebraElement, AlgebraMorphism, AlgebraRef, Quotient, WeilAlgebra,
};
pub use criteria::{affine_report, scan_truncated, AffineReport, ScanRow, Subject};
pub use error::{Result, WeilError};
pub use ideal::{annihilator, ideal_span, maximal_power, Ideal};
pub use linalg::{Matrix, Q};
