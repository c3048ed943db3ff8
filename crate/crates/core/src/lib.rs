//! Exact structure-constant computations for finite-dimensional Hopf algebras,
//! their Drinfeld and Heisenberg doubles, and the Taft algebra example at a
//! root of unity.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cyclotomic;
pub mod error;
pub mod linalg;
pub mod report;
pub mod sweep;
pub mod hopf;
pub mod doubles;
pub mod rewrite;
pub mod taft;
pub mod rep_theory;
pub mod derham;

pub use cyclotomic::{CycField, CycNumber, HalfInt};
pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace, Vector};
pub use report::{CheckReport, Status};
