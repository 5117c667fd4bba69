//! Exact supercharacter theory for pattern groups carved out by lattice
//! polytopes.
//!
//! A composition `beta` together with a normal subposet `P` of the chain on
//! its parts cuts a right-justified shape out of the strictly upper block
//! triangle of an `N x N` matrix. Nonnegative integer fillings of that shape
//! with bounded row and column sums are the lattice points of a polytope,
//! and they index both the superclasses and the supercharacters of the
//! corresponding unipotent pattern group over a finite field.
//!
//! The crate enumerates those fillings, evaluates the closed character
//! formulas exactly (no floating point anywhere), and cross-checks every
//! formula against a brute-force finite field oracle that works directly
//! with matrices over `F_q`.
//!
//! Modules, bottom up:
//!
//! * [`qarith`]: big integers and rationals, Gaussian binomials, orders of
//!   finite general linear groups, integer combinations of roots of unity.
//! * [`posets`]: normal subposets of a chain, their Ferrers shapes and Dyck
//!   words, strict interval posets, compositions and block refinement.
//! * [`polytope`]: the bounded-filling polytope, its tableaux, lattice point
//!   enumeration and dilation counting.
//! * [`stats`]: tableau statistics entering the character formulas
//!   (dimension exponents, crossings, nestings, local data).
//! * [`chars`]: supercharacter values, degrees, class sizes, character
//!   tables, orthogonality, and representative matrices.
//! * [`fforacle`]: the independent finite field oracle (rank labels, orbit
//!   closures, character values as explicit root-of-unity sums).

pub mod chars;
pub mod fforacle;
pub mod polytope;
pub mod posets;
pub mod qarith;
pub mod stats;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input failed validation; the message names the violated constraint.
    Invalid(String),
    /// An enumeration would exceed its work budget. `estimate` is the size of
    /// the workload that was asked for.
    Budget {
        limit: u64,
        estimate: num::BigInt,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::Budget { limit, estimate } => {
                write!(f, "budget exceeded: limit {limit}, workload {estimate}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
