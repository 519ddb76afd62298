//! The Jacobi–Perron algorithm on weight vectors and the unimodular
//! monomial transforms built from it.
//!
//! One step maps `τ = (τ_1, …, τ_s)` to `τ' = (τ_2 − a_2τ_1, …, τ_s − a_sτ_1, τ_1)`
//! with digits `a_j = ⌊τ_j / τ_1⌋`, so that `τ = P·τ'` for the step matrix
//! `P` (row 1 = `e_s`, row j = `e_{j−1} + a_j·e_s`). Accumulating steps gives
//! `τ(0) = A·τ(h)` with `A = P(0)⋯P(h−1)` nonnegative and `det A = (−1)^{h(s−1)}`.
//!
//! Read as a change of variables `x_i = Π_j x'_j^{A[i][j]}`, a monomial
//! `x^v` becomes `x'^{Aᵀv}` and keeps its value.

use std::cmp::Ordering;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::values::{combine, common_basis, compare, floor_ratio, rationally_independent, Value};

/// Upper bound on the number of steps any search may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cap(pub usize);

impl Cap {
    pub const DEFAULT: Cap = Cap(10_000);
}

impl Default for Cap {
    fn default() -> Self {
        Cap::DEFAULT
    }
}

/// Integer exponent vector of a (Laurent) monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<BigInt>);

impl ExponentVector {
    pub fn from_i64(v: &[i64]) -> Self {
        ExponentVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![BigInt::zero(); n])
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// `(v⁺, v⁻)` with `v = v⁺ − v⁻`.
    pub fn split_signs(&self) -> (ExponentVector, ExponentVector) {
        let pos = self.0.iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() });
        let neg = self.0.iter().map(|x| if x.is_negative() { -x } else { BigInt::zero() });
        (ExponentVector(pos.collect()), ExponentVector(neg.collect()))
    }

    /// Image under the substitution with exponent matrix `a`: `aᵀ·v`.
    pub fn transform(&self, a: &IntMatrix) -> Result<ExponentVector> {
        a.transpose_mul_vec(&self.0).map(ExponentVector)
    }

    /// `ν(x^v) = Σ v_i τ_i`.
    pub fn value(&self, tau: &[Value]) -> Result<Value> {
        combine(&self.0, tau)
    }
}

impl Deref for ExponentVector {
    type Target = [BigInt];

    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

/// A single step of the algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronStep {
    /// `a_2, …, a_s`.
    pub digits: Vec<BigInt>,
    pub matrix: IntMatrix,
}

impl PerronStep {
    fn from_digits(digits: Vec<BigInt>) -> PerronStep {
        let s = digits.len() + 1;
        let mut p = IntMatrix::zeros(s, s);
        p[(0, s - 1)] = BigInt::one();
        for j in 1..s {
            p[(j, j - 1)] = BigInt::one();
            p[(j, s - 1)] += &digits[j - 1];
        }
        PerronStep { digits, matrix: p }
    }
}

/// `A = P(0)·P(1)⋯P(h−1)`; `A[i][j]` is the exponent of `x'_j` in `x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronMatrix {
    pub h: usize,
    pub matrix: IntMatrix,
}

impl PerronMatrix {
    pub fn identity(s: usize) -> PerronMatrix {
        PerronMatrix {
            h: 0,
            matrix: IntMatrix::identity(s),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `(−1)^{h(s−1)}`, the determinant every accumulated matrix must have.
    pub fn expected_det(&self) -> BigInt {
        if (self.h * (self.dim().saturating_sub(1))) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        }
    }
}

impl Deref for PerronMatrix {
    type Target = IntMatrix;

    fn deref(&self) -> &IntMatrix {
        &self.matrix
    }
}

fn check_weights(tau: &[Value]) -> Result<()> {
    if tau.len() < 2 {
        return Err(Error::DimensionTooSmall);
    }
    common_basis(tau)?;
    if tau.iter().any(|t| t.signum() != Ordering::Greater) {
        return Err(Error::NonpositiveWeight);
    }
    Ok(())
}

/// One step of the algorithm: digits, step matrix and the next weights.
pub fn perron_step(tau: &[Value]) -> Result<(PerronStep, Vec<Value>)> {
    check_weights(tau)?;
    let s = tau.len();
    let first = &tau[0];
    let mut digits = Vec::with_capacity(s - 1);
    let mut next = Vec::with_capacity(s);
    for t in &tau[1..] {
        let a = floor_ratio(t, first)?;
        let rem = t.try_sub(&first.scale(&a))?;
        // a zero remainder means τ_j is an integer multiple of τ_1
        if rem.is_zero() {
            return Err(Error::DependentWeights);
        }
        digits.push(a);
        next.push(rem);
    }
    next.push(first.clone());
    Ok((PerronStep::from_digits(digits), next))
}

/// Incremental run of the algorithm, one step at a time.
#[derive(Clone, Debug)]
pub struct PerronExpansion {
    matrix: PerronMatrix,
    tau: Vec<Value>,
    digits: Vec<Vec<BigInt>>,
}

impl PerronExpansion {
    pub fn new(tau: Vec<Value>) -> Result<PerronExpansion> {
        common_basis(&tau)?;
        if tau.iter().any(|t| t.signum() != Ordering::Greater) {
            return Err(Error::NonpositiveWeight);
        }
        Ok(PerronExpansion {
            matrix: PerronMatrix::identity(tau.len()),
            tau,
            digits: Vec::new(),
        })
    }

    pub fn advance(&mut self) -> Result<PerronStep> {
        let (step, next) = perron_step(&self.tau)?;
        self.matrix = PerronMatrix {
            h: self.matrix.h + 1,
            matrix: self.matrix.matrix.mul(&step.matrix)?,
        };
        self.tau = next;
        self.digits.push(step.digits.clone());
        Ok(step)
    }

    pub fn matrix(&self) -> &PerronMatrix {
        &self.matrix
    }

    /// Current weights `τ(h)`.
    pub fn tau(&self) -> &[Value] {
        &self.tau
    }

    /// Digits of every step taken so far.
    pub fn digits(&self) -> &[Vec<BigInt>] {
        &self.digits
    }

    pub fn into_parts(self) -> (PerronMatrix, Vec<Value>, Vec<Vec<BigInt>>) {
        (self.matrix, self.tau, self.digits)
    }
}

/// `h` steps accumulated: `τ(0) = A·τ(h)`.
pub fn perron_accumulate(tau: &[Value], h: usize) -> Result<PerronExpansion> {
    let mut run = PerronExpansion::new(tau.to_vec())?;
    for _ in 0..h {
        run.advance()?;
    }
    Ok(run)
}

/// Smallest accumulated matrix `A` with `Aᵀv1 ≤ Aᵀv2` componentwise, i.e.
/// the first transform after which `x^{v1}` divides `x^{v2}`.
///
/// Requires `ν(v1) < ν(v2)`.
pub fn make_divisible(
    v1: &ExponentVector,
    v2: &ExponentVector,
    tau: &[Value],
    cap: Cap,
) -> Result<PerronMatrix> {
    let s = tau.len();
    for v in [v1, v2] {
        if v.len() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                found: v.len(),
            });
        }
    }
    if compare(&v1.value(tau)?, &v2.value(tau)?)? != Ordering::Less {
        return Err(Error::ValueOrderViolated);
    }
    let mut run = PerronExpansion::new(tau.to_vec())?;
    let mut a = v1.clone();
    let mut b = v2.clone();
    loop {
        if a.divides(&b) {
            return Ok(run.matrix);
        }
        if run.matrix.h >= cap.0 {
            return Err(Error::CapExceeded("divisibility search"));
        }
        let step = run.advance()?;
        a = a.transform(&step.matrix)?;
        b = b.transform(&step.matrix)?;
    }
}

/// Accumulated matrix `A` with `Aᵀv ≥ 0`, for a Laurent monomial of
/// positive value.
pub fn clear_to_regular(v: &ExponentVector, tau: &[Value], cap: Cap) -> Result<PerronMatrix> {
    if v.len() != tau.len() {
        return Err(Error::DimensionMismatch {
            expected: tau.len(),
            found: v.len(),
        });
    }
    if v.value(tau)?.signum() != Ordering::Greater {
        return Err(Error::NonpositiveValue);
    }
    let (pos, neg) = v.split_signs();
    make_divisible(&neg, &pos, tau, cap)
}

/// Exponent matrix of a transform that trivializes one rational relation
/// `λ·τ_r = Σ λ_i τ_i` among `s + 1` variables.
///
/// The result `C` is `(s+1)×(s+1)`, nonnegative, with `det C = ±1`. Its rows
/// express `(x_1, …, x_s, x_r)` as monomials in new generators
/// `(N_1, …, N_s, N_r)`; the generators satisfy `ν(N_k) > 0` for `k ≤ s` and
/// `ν(N_r) = 0`.
///
/// The construction alternates Perron runs on the independent part (until
/// every relation coefficient is positive) with a shear that swaps the
/// dependent variable into an independent slot and strictly reduces `λ`,
/// and finishes with `N_r = x_r / Π x_k^{λ_k}` once `λ = 1`.
pub fn type2_matrix(
    tau: &[Value],
    lambda: &BigInt,
    lambda_i: &[BigInt],
    cap: Cap,
) -> Result<IntMatrix> {
    let s = tau.len();
    if s == 0 {
        return Err(Error::DimensionTooSmall);
    }
    if lambda_i.len() != s {
        return Err(Error::DimensionMismatch {
            expected: s,
            found: lambda_i.len(),
        });
    }
    common_basis(tau)?;
    if tau.iter().any(|t| t.signum() != Ordering::Greater) {
        return Err(Error::NonpositiveWeight);
    }
    if !rationally_independent(tau) {
        return Err(Error::DependentWeights);
    }
    if !lambda.is_positive() {
        return Err(Error::ImprimitiveRelation);
    }
    let g = lambda_i.iter().fold(lambda.clone(), |g, x| g.gcd(x));
    if !g.is_one() {
        return Err(Error::ImprimitiveRelation);
    }
    let dependent = combine(lambda_i, tau)?;
    if dependent.signum() != Ordering::Greater {
        return Err(Error::NonpositiveDependentValue);
    }
    let mut dependent = dependent.scale_rational(&num_rational::BigRational::new(
        BigInt::one(),
        lambda.clone(),
    ));

    let r = s; // slot of the dependent variable
    let mut total = IntMatrix::identity(s + 1);
    let mut indep = tau.to_vec();
    let mut lam = lambda.clone();
    let mut coeffs = lambda_i.to_vec();
    let mut steps = 0usize;

    loop {
        // Perron steps on the independent block until every coefficient is > 0.
        // With s = 1 the single coefficient is already positive.
        while coeffs.iter().any(|c| !c.is_positive()) {
            if steps >= cap.0 {
                return Err(Error::CapExceeded("type II relation search"));
            }
            steps += 1;
            let (step, next) = perron_step(&indep)?;
            coeffs = step.matrix.transpose_mul_vec(&coeffs)?;
            total = total.mul(&embed(&step.matrix))?;
            indep = next;
        }
        if lam.is_one() {
            break;
        }
        let i = coeffs
            .iter()
            .position(|c| !c.is_multiple_of(&lam))
            .ok_or_else(|| Error::Assertion("relation coefficients share a factor".into()))?;
        let (mu, rem) = coeffs[i].div_rem(&lam);
        // x_i = x'_r,  x_r = x'_i · x'_r^μ
        let mut shear = IntMatrix::identity(s + 1);
        shear[(i, i)] = BigInt::zero();
        shear[(i, r)] = BigInt::one();
        shear[(r, r)] = mu.clone();
        shear[(r, i)] = BigInt::one();
        total = total.mul(&shear)?;

        let new_indep = dependent.try_sub(&indep[i].scale(&mu))?;
        if new_indep.signum() != Ordering::Greater {
            return Err(Error::Assertion("sheared weight is not positive".into()));
        }
        dependent = std::mem::replace(&mut indep[i], new_indep);
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = if k == i { lam.clone() } else { -&*c };
        }
        lam = rem;
    }

    // x_r = N_r · Π x_k^{λ_k}
    let mut last = IntMatrix::identity(s + 1);
    for (k, c) in coeffs.iter().enumerate() {
        last[(r, k)] = c.clone();
    }
    total.mul(&last)
}

fn embed(block: &IntMatrix) -> IntMatrix {
    let s = block.rows();
    let mut out = IntMatrix::identity(s + 1);
    for i in 0..s {
        for j in 0..s {
            out[(i, j)] = block[(i, j)].clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::SurdBasis;
    use std::sync::Arc;

    fn b12() -> Arc<SurdBasis> {
        SurdBasis::new(vec![1, 2]).unwrap()
    }

    fn v(b: &Arc<SurdBasis>, c: &[i64]) -> Value {
        Value::from_ints(b, c).unwrap()
    }

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn step_examples() {
        let b = b12();
        let (step, next) = perron_step(&[v(&b, &[1, 0]), v(&b, &[0, 1])]).unwrap();
        assert_eq!(step.digits, vec![BigInt::from(1)]);
        assert_eq!(step.matrix, m(&[&[0, 1], &[1, 1]]));
        assert_eq!(next, vec![v(&b, &[-1, 1]), v(&b, &[1, 0])]);

        let (step, next) = perron_step(&next).unwrap();
        assert_eq!(step.digits, vec![BigInt::from(2)]);
        assert_eq!(step.matrix, m(&[&[0, 1], &[1, 2]]));
        assert_eq!(next, vec![v(&b, &[3, -2]), v(&b, &[-1, 1])]);

        let (step, next) = perron_step(&[v(&b, &[0, 1]), v(&b, &[1, 0])]).unwrap();
        assert_eq!(step.digits, vec![BigInt::from(0)]);
        assert_eq!(step.matrix, m(&[&[0, 1], &[1, 0]]));
        assert_eq!(next, vec![v(&b, &[1, 0]), v(&b, &[0, 1])]);
    }

    #[test]
    fn step_errors() {
        let b = b12();
        assert_eq!(perron_step(&[v(&b, &[1, 0])]).unwrap_err(), Error::DimensionTooSmall);
        assert_eq!(
            perron_step(&[v(&b, &[1, 0]), v(&b, &[1, -1])]).unwrap_err(),
            Error::NonpositiveWeight
        );
        assert_eq!(
            perron_step(&[v(&b, &[1, 0]), v(&b, &[2, 0])]).unwrap_err(),
            Error::DependentWeights
        );
    }

    #[test]
    fn accumulate_examples() {
        let b = b12();
        let run = perron_accumulate(&[v(&b, &[1, 0]), v(&b, &[0, 1])], 2).unwrap();
        assert_eq!(run.matrix().matrix, m(&[&[1, 2], &[1, 3]]));
        assert_eq!(run.matrix().det().unwrap(), BigInt::one());

        let run = perron_accumulate(&[v(&b, &[0, 1]), v(&b, &[1, 0])], 3).unwrap();
        assert_eq!(run.matrix().matrix, m(&[&[1, 3], &[1, 2]]));
        assert_eq!(run.matrix().det().unwrap(), -BigInt::one());
        assert_eq!(run.matrix().expected_det(), -BigInt::one());

        let tau = vec![v(&b, &[0, 1]), v(&b, &[1, 0])];
        let run = perron_accumulate(&tau, 0).unwrap();
        assert!(run.matrix().is_identity());
        assert_eq!(run.tau(), &tau[..]);
    }

    #[test]
    fn make_divisible_examples() {
        let b = b12();
        let tau = [v(&b, &[0, 1]), v(&b, &[1, 0])];
        let a = make_divisible(
            &ExponentVector::from_i64(&[2, 0]),
            &ExponentVector::from_i64(&[0, 3]),
            &tau,
            Cap::DEFAULT,
        )
        .unwrap();
        assert_eq!(a.matrix, m(&[&[1, 3], &[1, 2]]));

        let tau2 = [v(&b, &[1, 0]), v(&b, &[0, 1])];
        let a = make_divisible(
            &ExponentVector::from_i64(&[1, 0]),
            &ExponentVector::from_i64(&[1, 1]),
            &tau2,
            Cap::DEFAULT,
        )
        .unwrap();
        assert!(a.is_identity());

        let err = make_divisible(
            &ExponentVector::from_i64(&[0, 3]),
            &ExponentVector::from_i64(&[2, 0]),
            &tau,
            Cap::DEFAULT,
        )
        .unwrap_err();
        assert_eq!(err, Error::ValueOrderViolated);
    }

    #[test]
    fn make_divisible_cap() {
        let b = b12();
        let tau = [v(&b, &[0, 1]), v(&b, &[1, 0])];
        let err = make_divisible(
            &ExponentVector::from_i64(&[2, 0]),
            &ExponentVector::from_i64(&[0, 3]),
            &tau,
            Cap(2),
        )
        .unwrap_err();
        assert_eq!(err, Error::CapExceeded("divisibility search"));
    }

    #[test]
    fn clear_to_regular_examples() {
        let b = b12();
        let tau = [v(&b, &[0, 1]), v(&b, &[1, 0])];
        let v1 = ExponentVector::from_i64(&[1, -1]);
        let a = clear_to_regular(&v1, &tau, Cap::DEFAULT).unwrap();
        assert!(v1.transform(&a).unwrap().is_nonnegative());

        let a = clear_to_regular(&ExponentVector::from_i64(&[1, 0]), &tau, Cap::DEFAULT).unwrap();
        assert!(a.is_identity());

        assert_eq!(
            clear_to_regular(&ExponentVector::from_i64(&[-1, 1]), &tau, Cap::DEFAULT).unwrap_err(),
            Error::NonpositiveValue
        );
    }

    #[test]
    fn type2_single_variable_example() {
        let b = b12();
        let c = type2_matrix(&[v(&b, &[0, 1])], &BigInt::from(2), &[BigInt::from(3)], Cap::DEFAULT)
            .unwrap();
        assert_eq!(c, m(&[&[2, 1], &[3, 1]]));
    }

    #[test]
    fn type2_errors() {
        let b = b12();
        let tau = [v(&b, &[0, 1])];
        assert_eq!(
            type2_matrix(&tau, &BigInt::from(2), &[BigInt::from(4)], Cap::DEFAULT).unwrap_err(),
            Error::ImprimitiveRelation
        );
        assert_eq!(
            type2_matrix(&tau, &BigInt::from(2), &[BigInt::from(-3)], Cap::DEFAULT).unwrap_err(),
            Error::NonpositiveDependentValue
        );
    }
}
