//! Exact elements of a value group of rational rank `s` embedded in the reals.
//!
//! A [`Value`] is a rational combination `Σ q_i √d_i` over a fixed
//! [`SurdBasis`] of distinct squarefree radicands. Square roots of distinct
//! squarefree integers are linearly independent over ℚ, so a value is zero
//! exactly when its coefficient vector is zero, and the sign of a nonzero
//! value can always be found by refining interval enclosures of the roots.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::rational_rank;

/// Radicands larger than this are rejected so squarefree testing by trial
/// division stays cheap.
pub const MAX_RADICAND: u64 = u32::MAX as u64;

/// Bits of precision used for the first enclosure of each square root.
const INITIAL_PRECISION_BITS: u64 = 32;

/// Ascending list of distinct squarefree radicands `d_1 < … < d_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdBasis {
    radicands: Vec<u64>,
}

impl SurdBasis {
    pub fn new(radicands: Vec<u64>) -> Result<Arc<SurdBasis>> {
        if radicands.is_empty() {
            return Err(Error::InvalidBasis("empty basis".into()));
        }
        for (i, &d) in radicands.iter().enumerate() {
            if d == 0 || d > MAX_RADICAND {
                return Err(Error::InvalidBasis(format!("radicand {d} out of range")));
            }
            if !is_squarefree(d) {
                return Err(Error::InvalidBasis(format!("radicand {d} not squarefree")));
            }
            if i > 0 && radicands[i - 1] >= d {
                return Err(Error::InvalidBasis(
                    "radicands must be distinct and ascending".into(),
                ));
            }
        }
        Ok(Arc::new(SurdBasis { radicands }))
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    pub fn len(&self) -> usize {
        self.radicands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radicands.is_empty()
    }

    pub fn position(&self, d: u64) -> Option<usize> {
        self.radicands.binary_search(&d).ok()
    }
}

pub fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// `Σ coeffs[i] · √basis[i]`, with every rational in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Value {
    basis: Arc<SurdBasis>,
    coeffs: Vec<BigRational>,
}

impl Value {
    pub fn new(basis: Arc<SurdBasis>, coeffs: Vec<BigRational>) -> Result<Value> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        Ok(Value { basis, coeffs })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(basis: &Arc<SurdBasis>, coeffs: &[(i64, i64)]) -> Result<Value> {
        let coeffs = coeffs
            .iter()
            .map(|&(p, q)| {
                if q == 0 {
                    Err(Error::InvalidBasis("zero denominator".into()))
                } else {
                    Ok(BigRational::new(p.into(), q.into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Value::new(basis.clone(), coeffs)
    }

    /// Integer coefficients.
    pub fn from_ints(basis: &Arc<SurdBasis>, coeffs: &[i64]) -> Result<Value> {
        Value::new(
            basis.clone(),
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    pub fn zero(basis: &Arc<SurdBasis>) -> Value {
        Value {
            basis: basis.clone(),
            coeffs: vec![BigRational::zero(); basis.len()],
        }
    }

    /// `√basis[index]`.
    pub fn surd(basis: &Arc<SurdBasis>, index: usize) -> Value {
        let mut v = Value::zero(basis);
        v.coeffs[index] = BigRational::one();
        v
    }

    pub fn basis(&self) -> &Arc<SurdBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn same_basis(&self, other: &Value) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis
    }

    /// Syntactic zero test; exact because the basis is independent over ℚ.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Sign of the real number, as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let terms: Vec<(BigInt, u64)> = self
            .coeffs
            .iter()
            .zip(&self.basis.radicands)
            .filter(|(q, _)| !q.is_zero())
            .map(|(q, &d)| (q.numer() * (&lcm / q.denom()), d))
            .collect();
        let mut bits = INITIAL_PRECISION_BITS;
        loop {
            let (lo, hi) = enclosure(&terms, bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn try_add(&self, other: &Value) -> Result<Value> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Value) -> Result<Value> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &BigInt) -> Value {
        let k = BigRational::from_integer(k.clone());
        self.scale_rational(&k)
    }

    pub fn scale_rational(&self, k: &BigRational) -> Value {
        Value {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Value,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<Value> {
        if !self.same_basis(other) {
            return Err(Error::IncompatibleBases);
        }
        Ok(Value {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Floating-point approximation, for display and tracing only.
    pub fn approx_f64(&self) -> f64 {
        let bits = 64;
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let terms: Vec<(BigInt, u64)> = self
            .coeffs
            .iter()
            .zip(&self.basis.radicands)
            .map(|(q, &d)| (q.numer() * (&lcm / q.denom()), d))
            .collect();
        let (lo, _) = enclosure(&terms, bits);
        let num = BigRational::new(lo, lcm << bits as usize);
        ratio_to_f64(&num)
    }
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Integer bounds `lo ≤ 2^bits · Σ c·√d ≤ hi`.
fn enclosure(terms: &[(BigInt, u64)], bits: u64) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for (c, d) in terms {
        if *d == 1 {
            let t = c << bits as usize;
            lo += &t;
            hi += t;
            continue;
        }
        // r ≤ √d·2^bits < r + 1
        let r = BigInt::from((BigUint::from(*d) << (2 * bits) as usize).sqrt());
        let r1 = &r + 1;
        if c.is_positive() {
            lo += c * &r;
            hi += c * r1;
        } else {
            lo += c * r1;
            hi += c * r;
        }
    }
    (lo, hi)
}

/// Order of the real numbers `a` and `b`.
pub fn compare(a: &Value, b: &Value) -> Result<Ordering> {
    if !a.same_basis(b) {
        return Err(Error::IncompatibleBases);
    }
    if a.coeffs == b.coeffs {
        return Ok(Ordering::Equal);
    }
    Ok(a.try_sub(b)?.signum())
}

/// The unique `q ≥ 0` with `q·b ≤ a < (q+1)·b`.
pub fn floor_ratio(a: &Value, b: &Value) -> Result<BigInt> {
    if !a.same_basis(b) {
        return Err(Error::IncompatibleBases);
    }
    if b.signum() != Ordering::Greater {
        return Err(Error::NonpositiveDivisor);
    }
    if a.signum() == Ordering::Less {
        return Err(Error::NegativeDividend);
    }
    let fits = |q: &BigInt| -> Result<bool> {
        Ok(compare(&b.scale(q), a)? != Ordering::Greater)
    };
    let mut hi = BigInt::one();
    while fits(&hi)? {
        hi <<= 1;
    }
    let mut lo = if hi.is_one() { BigInt::zero() } else { &hi >> 1 };
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) >> 1;
        if fits(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `Σ k_i · values[i]`.
pub fn combine(coeffs: &[BigInt], values: &[Value]) -> Result<Value> {
    let first = values.first().ok_or(Error::DimensionTooSmall)?;
    if coeffs.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: values.len(),
            found: coeffs.len(),
        });
    }
    let mut acc = Value::zero(first.basis());
    for (k, v) in coeffs.iter().zip(values) {
        if !k.is_zero() {
            acc = acc.try_add(&v.scale(k))?;
        }
    }
    Ok(acc)
}

/// Checks that all values share one basis.
pub fn common_basis(values: &[Value]) -> Result<&Arc<SurdBasis>> {
    let first = values.first().ok_or(Error::DimensionTooSmall)?;
    if values.iter().all(|v| v.same_basis(first)) {
        Ok(first.basis())
    } else {
        Err(Error::IncompatibleBases)
    }
}

/// True when the values are linearly independent over ℚ.
pub fn rationally_independent(values: &[Value]) -> bool {
    if values.is_empty() {
        return true;
    }
    if common_basis(values).is_err() {
        return false;
    }
    let rows: Vec<Vec<BigRational>> = values.iter().map(|v| v.coeffs.clone()).collect();
    rational_rank(rows) == values.len()
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (q, d) in self.coeffs.iter().zip(&self.basis.radicands) {
            if q.is_zero() {
                continue;
            }
            let sign = if q.is_negative() { "-" } else { "+" };
            if first {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = q.abs();
            match (*d, a.is_one()) {
                (1, _) => write!(f, "{a}")?,
                (d, true) => write!(f, "√{d}")?,
                (d, false) => write!(f, "{a}√{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Value({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis12() -> Arc<SurdBasis> {
        SurdBasis::new(vec![1, 2]).unwrap()
    }

    #[test]
    fn basis_validation() {
        assert!(SurdBasis::new(vec![1, 2, 3]).is_ok());
        assert!(SurdBasis::new(vec![1, 4]).is_err());
        assert!(SurdBasis::new(vec![2, 1]).is_err());
        assert!(SurdBasis::new(vec![2, 2]).is_err());
        assert!(SurdBasis::new(vec![0]).is_err());
        assert!(SurdBasis::new(vec![]).is_err());
        assert!(is_squarefree(30) && !is_squarefree(12) && !is_squarefree(49));
    }

    #[test]
    fn compare_examples() {
        let b = basis12();
        let sqrt2 = Value::surd(&b, 1);
        let one = Value::surd(&b, 0);
        assert_eq!(compare(&sqrt2, &one).unwrap(), Ordering::Greater);
        // 3 - 2√2 ∈ (0.171, 0.172)
        let a = Value::from_ints(&b, &[3, -2]).unwrap();
        assert_eq!(compare(&a, &Value::zero(&b)).unwrap(), Ordering::Greater);
        assert_eq!(
            compare(&Value::zero(&b), &Value::zero(&b)).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn compare_rejects_foreign_basis() {
        let a = Value::surd(&basis12(), 0);
        let b = Value::surd(&SurdBasis::new(vec![1, 3]).unwrap(), 0);
        assert_eq!(compare(&a, &b), Err(Error::IncompatibleBases));
    }

    #[test]
    fn tight_sign() {
        // 816/577 < √2 < 577/408, both within 3e-6
        let b = basis12();
        let lo = Value::from_ratios(&b, &[(816, 577), (-1, 1)]).unwrap();
        let hi = Value::from_ratios(&b, &[(577, 408), (-1, 1)]).unwrap();
        assert_eq!(lo.signum(), Ordering::Less);
        assert_eq!(hi.signum(), Ordering::Greater);
        // a Pell-sized gap needs more than 32 bits
        let a = Value::from_ints(&b, &[665_857, -470_832]).unwrap();
        assert_eq!(a.signum(), Ordering::Greater);
        let big = Value::from_ints(&b, &[1_855_077_841, -1_311_738_121]).unwrap();
        assert_eq!(big.signum(), Ordering::Less);
    }

    #[test]
    fn floor_ratio_examples() {
        let b = basis12();
        let sqrt2 = Value::surd(&b, 1);
        let one = Value::surd(&b, 0);
        assert_eq!(floor_ratio(&sqrt2, &one).unwrap(), BigInt::from(1));
        let five = Value::from_ints(&b, &[5, 0]).unwrap();
        let two = Value::from_ints(&b, &[2, 0]).unwrap();
        assert_eq!(floor_ratio(&five, &two).unwrap(), BigInt::from(2));
        let d = Value::from_ints(&b, &[-1, 1]).unwrap();
        assert_eq!(floor_ratio(&one, &d).unwrap(), BigInt::from(2));
        assert_eq!(floor_ratio(&Value::zero(&b), &one).unwrap(), BigInt::from(0));
    }

    #[test]
    fn floor_ratio_errors() {
        let b = basis12();
        let one = Value::surd(&b, 0);
        let neg = Value::from_ints(&b, &[1, -1]).unwrap();
        assert_eq!(floor_ratio(&one, &Value::zero(&b)), Err(Error::NonpositiveDivisor));
        assert_eq!(floor_ratio(&one, &neg), Err(Error::NonpositiveDivisor));
        assert_eq!(floor_ratio(&neg, &one), Err(Error::NegativeDividend));
    }

    #[test]
    fn independence() {
        let b = SurdBasis::new(vec![1, 2, 3]).unwrap();
        let x = Value::from_ints(&b, &[0, 1, 0]).unwrap();
        let y = Value::from_ints(&b, &[1, 1, 0]).unwrap();
        let z = Value::from_ints(&b, &[2, 3, 0]).unwrap();
        assert!(rationally_independent(&[x.clone(), y.clone()]));
        assert!(!rationally_independent(&[x, y, z]));
    }

    #[test]
    fn display() {
        let b = basis12();
        assert_eq!(Value::from_ratios(&b, &[(3, 1), (-2, 3)]).unwrap().to_string(), "3 - 2/3√2");
        assert_eq!(Value::zero(&b).to_string(), "0");
        assert_eq!(Value::surd(&b, 1).to_string(), "√2");
    }
}
