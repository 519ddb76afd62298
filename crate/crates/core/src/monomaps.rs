//! Monomial maps `x_i = Π_j y_j^{a_ij}` between regular parameter systems and
//! the elementary moves that relate them.
//!
//! Rows of the exponent matrix index the fixed base variables `x`, columns
//! index the variables `y` of the current ring. A blowup along the valuation
//! (`y_r = y'_r·y'_s`, allowed when `ν(y_r) > ν(y_s)`) adds column `r` to
//! column `s`; an inverse monoidal transform subtracts it again.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::values::{combine, common_basis, compare, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoMap {
    matrix: IntMatrix,
}

impl MonoMap {
    pub fn new(matrix: IntMatrix) -> Result<MonoMap> {
        if matrix.rows() == 0 {
            return Err(Error::DimensionTooSmall);
        }
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        Ok(MonoMap { matrix })
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<MonoMap> {
        MonoMap::new(IntMatrix::from_i64_rows(rows)?)
    }

    pub fn identity(n: usize) -> MonoMap {
        MonoMap {
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn det(&self) -> BigInt {
        self.matrix.det().expect("square by construction")
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.matrix.is_nonnegative()
    }

    /// Values of the base variables, `ν(x_i) = Σ_j a_ij ν(y_j)`.
    pub fn x_values(&self, weights: &[Value]) -> Result<Vec<Value>> {
        if weights.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: weights.len(),
            });
        }
        (0..self.n())
            .map(|i| combine(self.matrix.row(i), weights))
            .collect()
    }

    /// The unique `w` with `M·w = x_values`, solved exactly over ℚ.
    pub fn solve_weights(&self, x_values: &[Value]) -> Result<Vec<Value>> {
        let basis = common_basis(x_values)?.clone();
        if x_values.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: x_values.len(),
            });
        }
        let rhs: Vec<Vec<BigRational>> = (0..basis.len())
            .map(|t| x_values.iter().map(|v| v.coeffs()[t].clone()).collect())
            .collect();
        let sol = self.matrix.solve_rational(&rhs)?;
        (0..self.n())
            .map(|j| Value::new(basis.clone(), sol.iter().map(|col| col[j].clone()).collect()))
            .collect()
    }
}

impl fmt::Display for MonoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// A single step between neighbouring rings. Indices are 0-based here and
/// 1-based in every serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryMove {
    /// `col_s += col_r`, requires `ν(y_r) > ν(y_s)`.
    Blowup { r: usize, s: usize },
    /// `col_s −= col_r`, requires the result to stay nonnegative.
    Imt { r: usize, s: usize },
    /// New variable `k` is old variable `perm[k]`.
    Relabel { perm: Vec<usize> },
}

impl fmt::Display for ElementaryMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryMove::Blowup { r, s } => write!(f, "blowup({},{})", r + 1, s + 1),
            ElementaryMove::Imt { r, s } => write!(f, "imt({},{})", r + 1, s + 1),
            ElementaryMove::Relabel { perm } => {
                let p: Vec<String> = perm.iter().map(|k| (k + 1).to_string()).collect();
                write!(f, "relabel({})", p.join(","))
            }
        }
    }
}

/// A monomial map together with the current variable values and the moves
/// applied so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapState {
    map: MonoMap,
    weights: Vec<Value>,
    log: Vec<ElementaryMove>,
}

impl MapState {
    pub fn new(map: MonoMap, weights: Vec<Value>) -> Result<MapState> {
        if weights.len() != map.n() {
            return Err(Error::DimensionMismatch {
                expected: map.n(),
                found: weights.len(),
            });
        }
        common_basis(&weights)?;
        if weights.iter().any(|w| w.signum() != Ordering::Greater) {
            return Err(Error::NonpositiveWeight);
        }
        if map.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(MapState {
            map,
            weights,
            log: Vec::new(),
        })
    }

    pub fn map(&self) -> &MonoMap {
        &self.map
    }

    pub fn weights(&self) -> &[Value] {
        &self.weights
    }

    pub fn log(&self) -> &[ElementaryMove] {
        &self.log
    }

    pub fn n(&self) -> usize {
        self.map.n()
    }

    pub fn x_values(&self) -> Vec<Value> {
        self.map
            .x_values(&self.weights)
            .expect("weights match the map dimension")
    }

    /// Removes and returns the moves recorded so far.
    pub fn take_log(&mut self) -> Vec<ElementaryMove> {
        std::mem::take(&mut self.log)
    }

    pub(crate) fn extend_log(&mut self, moves: Vec<ElementaryMove>) {
        self.log.extend(moves);
    }

    /// Same map and weights with an empty log.
    pub fn without_log(&self) -> MapState {
        MapState {
            map: self.map.clone(),
            weights: self.weights.clone(),
            log: Vec::new(),
        }
    }

    fn check_pair(&self, r: usize, s: usize) -> Result<()> {
        let n = self.n();
        for i in [r, s] {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
        }
        if r == s {
            return Err(Error::DegenerateCenter);
        }
        Ok(())
    }

    pub fn blowup(&self, r: usize, s: usize) -> Result<MapState> {
        self.check_pair(r, s)?;
        if compare(&self.weights[r], &self.weights[s])? != Ordering::Greater {
            return Err(Error::NotAllowable);
        }
        let mut matrix = self.map.matrix.clone();
        matrix.add_col_multiple(s, r, &BigInt::one());
        let mut weights = self.weights.clone();
        weights[r] = weights[r].try_sub(&weights[s])?;
        Ok(self.successor(matrix, weights, ElementaryMove::Blowup { r, s }))
    }

    pub fn imt(&self, r: usize, s: usize) -> Result<MapState> {
        self.check_pair(r, s)?;
        let mut matrix = self.map.matrix.clone();
        matrix.add_col_multiple(s, r, &-BigInt::one());
        if (0..self.n()).any(|i| matrix[(i, s)].is_negative()) {
            return Err(Error::ImtUndefined);
        }
        // the unique solution of M'·w' = x is w with w_r replaced by w_r + w_s
        let mut weights = self.weights.clone();
        weights[r] = weights[r].try_add(&weights[s])?;
        if weights.iter().any(|w| w.signum() != Ordering::Greater) {
            return Err(Error::ImtNotDominated);
        }
        Ok(self.successor(matrix, weights, ElementaryMove::Imt { r, s }))
    }

    pub fn relabel(&self, perm: &[usize]) -> Result<MapState> {
        check_permutation(perm, self.n())?;
        let matrix = self.map.matrix.permute_cols(perm);
        let weights = perm.iter().map(|&p| self.weights[p].clone()).collect();
        Ok(self.successor(
            matrix,
            weights,
            ElementaryMove::Relabel {
                perm: perm.to_vec(),
            },
        ))
    }

    pub fn apply(&self, mv: &ElementaryMove) -> Result<MapState> {
        match mv {
            ElementaryMove::Blowup { r, s } => self.blowup(*r, *s),
            ElementaryMove::Imt { r, s } => self.imt(*r, *s),
            ElementaryMove::Relabel { perm } => self.relabel(perm),
        }
    }

    fn successor(&self, matrix: IntMatrix, weights: Vec<Value>, mv: ElementaryMove) -> MapState {
        let mut log = self.log.clone();
        log.push(mv);
        MapState {
            map: MonoMap { matrix },
            weights,
            log,
        }
    }
}

pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation);
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation);
        }
        seen[p] = true;
    }
    Ok(())
}

pub fn blowup(state: &MapState, r: usize, s: usize) -> Result<MapState> {
    state.blowup(r, s)
}

pub fn imt(state: &MapState, r: usize, s: usize) -> Result<MapState> {
    state.imt(r, s)
}

/// Applies `moves` in order. Errors carry the 1-based index of the first
/// move whose precondition fails.
pub fn replay(initial: &MapState, moves: &[ElementaryMove]) -> Result<MapState> {
    let mut state = initial.without_log();
    for (i, mv) in moves.iter().enumerate() {
        state = state.apply(mv).map_err(|e| Error::Move {
            index: i + 1,
            source: Box::new(e),
        })?;
        state.log.clear();
    }
    state.log = initial.log.iter().chain(moves).cloned().collect();
    Ok(state)
}

/// The integer vector `z` with `M·z = e_1`: entry `j` is the cofactor of
/// `(1, j)` divided by `det M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitRow(pub Vec<BigInt>);

impl UnitRow {
    /// Indices of the nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, z)| !z.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Row after `blowup(r, s)`: `z_r −= z_s`.
    pub fn after_blowup(&self, r: usize, s: usize) -> UnitRow {
        let mut z = self.0.clone();
        z[r] = &z[r] - &z[s];
        UnitRow(z)
    }

    /// Row after `imt(r, s)`: `z_r += z_s`.
    pub fn after_imt(&self, r: usize, s: usize) -> UnitRow {
        let mut z = self.0.clone();
        z[r] = &z[r] + &z[s];
        UnitRow(z)
    }

    pub fn after_relabel(&self, perm: &[usize]) -> UnitRow {
        UnitRow(perm.iter().map(|&p| self.0[p].clone()).collect())
    }

    pub fn after(&self, mv: &ElementaryMove) -> UnitRow {
        match mv {
            ElementaryMove::Blowup { r, s } => self.after_blowup(*r, *s),
            ElementaryMove::Imt { r, s } => self.after_imt(*r, *s),
            ElementaryMove::Relabel { perm } => self.after_relabel(perm),
        }
    }
}

pub fn solve_unit_row(map: &MonoMap) -> Result<UnitRow> {
    let det = map.det();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular);
    }
    let m = map.matrix();
    (0..map.n())
        .map(|j| Ok(m.cofactor(0, j)? * &det))
        .collect::<Result<Vec<_>>>()
        .map(UnitRow)
}
