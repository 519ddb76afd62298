//! Factoring a unimodular monomial map along a valuation of maximal rational
//! rank into an alternating chain of blowup sequences, and checking such
//! chains independently.

mod adjoint;
mod verify;
mod zigzag;

pub use adjoint::{clear_adjoint_row, invariant_tuples, InvariantTuple};
pub use verify::{verify_zigzag, Verdict};
pub use zigzag::{zigzag_factor, zigzag_factor_capped, Arrow, ZigzagCert, ZIGZAG_DEFAULT_CAP};
