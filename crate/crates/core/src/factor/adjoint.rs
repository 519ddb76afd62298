//! Driving the unit row of a unimodular monomial map down to at most two
//! nonzero entries using blowups along the valuation.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::monomaps::{solve_unit_row, ElementaryMove, MapState, UnitRow};
use crate::perron::Cap;
use crate::values::compare;

/// Termination measure of [`clear_adjoint_row`], compared lexicographically.
///
/// `alpha` counts nonzero unit-row entries. The other three are taken over
/// the indices that still occur as a blowup center later in the run:
/// `beta` is the largest absolute entry among them, `gamma` their number and
/// `delta` the number of indices attaining `beta`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InvariantTuple {
    pub alpha: usize,
    pub beta: BigInt,
    pub gamma: usize,
    pub delta: usize,
}

/// First pair `(i, j)`, `i < j`, of nonzero unit-row entries with the same sign.
fn allowable_pair(z: &UnitRow) -> Option<(usize, usize)> {
    let n = z.0.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| {
            let (a, b) = (&z.0[i], &z.0[j]);
            !a.is_zero() && !b.is_zero() && a.signum() == b.signum()
        })
}

/// Applies allowable blowups (centers whose unit-row entries are nonzero
/// with equal signs) until at most two entries of the unit row are nonzero.
/// The pair is always the lexicographically first allowable one, and the
/// variable of larger value is the one divided out.
///
/// The returned state extends the input's log with the blowups applied.
pub fn clear_adjoint_row(state: &MapState, cap: Cap) -> Result<MapState> {
    if !state.map().is_nonnegative() {
        return Err(Error::NegativeEntry);
    }
    let mut z = solve_unit_row(state.map())?;
    let mut current = state.without_log();
    let mut moves = Vec::new();
    while z.support().len() > 2 {
        let (i, j) = allowable_pair(&z)
            .ok_or_else(|| Error::Assertion("three nonzero entries without a same-sign pair".into()))?;
        let (r, s) = match compare(&current.weights()[i], &current.weights()[j])? {
            Ordering::Greater => (i, j),
            Ordering::Less => (j, i),
            Ordering::Equal => return Err(Error::DependentWeights),
        };
        if moves.len() >= cap.0 {
            return Err(Error::CapExceeded("adjoint row clearing"));
        }
        current = current.blowup(r, s)?;
        moves.extend(current.take_log());
        z = z.after_blowup(r, s);
    }
    let mut log = state.log().to_vec();
    log.extend(moves);
    current.extend_log(log);
    Ok(current)
}

/// The invariant tuple before each move and after the last one, for a run
/// of blowups starting from the unit row `initial`.
pub fn invariant_tuples(initial: &UnitRow, moves: &[ElementaryMove]) -> Vec<InvariantTuple> {
    let mut rows = vec![initial.clone()];
    for mv in moves {
        let next = rows.last().expect("nonempty").after(mv);
        rows.push(next);
    }
    // indices used as a center at step k or later
    let mut tracked: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); moves.len() + 1];
    for k in (0..moves.len()).rev() {
        let mut set = tracked[k + 1].clone();
        match &moves[k] {
            ElementaryMove::Blowup { r, s } | ElementaryMove::Imt { r, s } => {
                set.insert(*r);
                set.insert(*s);
            }
            ElementaryMove::Relabel { perm } => set.extend(perm.iter().copied()),
        }
        tracked[k] = set;
    }
    rows.iter()
        .zip(&tracked)
        .map(|(z, t)| {
            let beta = t.iter().map(|&i| z.0[i].abs()).max().unwrap_or_default();
            let delta = t.iter().filter(|&&i| z.0[i].abs() == beta).count();
            InvariantTuple {
                alpha: z.support().len(),
                beta,
                gamma: t.len(),
                delta: if t.is_empty() { 0 } else { delta },
            }
        })
        .collect()
}
