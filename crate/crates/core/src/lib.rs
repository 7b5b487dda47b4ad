//! Exact computation of bimodule differential fibrations and the associated
//! Leray-Serre spectral sequences over finite-dimensional algebras.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod connection;
pub mod dga;
pub mod examples;
pub mod fibration;
pub mod ksgns;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod spectral;

pub use linalg::{Matrix, Subspace, Vector};
pub use scalar::{Rational, Scalar, ScalarError};
