//! Exact computations with commutative differential graded algebras over the
//! rationals: cohomology, Massey products, minimal Sullivan models, models of
//! spherical fibrations and formality verdicts.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod dsl;
pub mod fibration;
pub mod formality;
pub mod qlinalg;
pub mod sullivan;
