//! Exact factorization of monomial maps along valuations of maximal rational
//! rank, and monomialization of polynomials by Perron transforms.
//!
//! Values live in [`values`], the Jacobi–Perron machinery in [`perron`],
//! monomial maps and their elementary moves in [`monomaps`], zigzag
//! factorization and its checker in [`factor`], polynomial monomialization
//! in [`uniformize`], and the interchange format in [`json`].

pub mod error;
pub mod factor;
pub mod json;
pub mod matrix;
pub mod monomaps;
pub mod perron;
pub mod uniformize;
pub mod values;

pub use error::{Error, Result};
pub use factor::{
    clear_adjoint_row, invariant_tuples, verify_zigzag, zigzag_factor, zigzag_factor_capped, Arrow,
    InvariantTuple, Verdict, ZigzagCert, ZIGZAG_DEFAULT_CAP,
};
pub use matrix::IntMatrix;
pub use monomaps::{
    blowup, imt, replay, solve_unit_row, ElementaryMove, MapState, MonoMap, UnitRow,
};
pub use perron::{
    clear_to_regular, make_divisible, perron_accumulate, perron_step, type2_matrix, Cap,
    ExponentVector, PerronExpansion, PerronMatrix, PerronStep,
};
pub use uniformize::{
    monomialize, monomialize_capped, poly_value, substitute, MonomialForm, Polynomial,
};
pub use values::{compare, floor_ratio, SurdBasis, Value};
