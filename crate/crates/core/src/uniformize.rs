//! Monomialization of polynomials under a monomial valuation whose weights
//! are rationally independent, one weight per variable, using Perron
//! substitutions only.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::perron::{Cap, ExponentVector, PerronExpansion, PerronMatrix};
use crate::values::{common_basis, compare, rationally_independent, Value};

/// Polynomial over ℚ in `n` variables. Terms are kept sorted by exponent
/// and never carry a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Polynomial {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Sums the given terms; like terms are merged and zeros dropped.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (ExponentVector, BigRational)>,
    {
        let mut p = Polynomial::zero(n);
        for (exp, coef) in terms {
            if exp.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: exp.len(),
                });
            }
            if !exp.is_nonnegative() {
                return Err(Error::NegativeExponent);
            }
            p.add_term(exp, coef);
        }
        Ok(p)
    }

    /// Convenience constructor with integer exponents and coefficients.
    pub fn from_i64_terms(n: usize, terms: &[(&[i64], i64)]) -> Result<Polynomial> {
        Polynomial::from_terms(
            n,
            terms
                .iter()
                .map(|(e, c)| (ExponentVector::from_i64(e), BigRational::from_integer(BigInt::from(*c)))),
        )
    }

    pub fn monomial(exp: ExponentVector) -> Result<Polynomial> {
        let n = exp.len();
        Polynomial::from_terms(n, [(exp, BigRational::one())])
    }

    fn add_term(&mut self, exp: ExponentVector, coef: BigRational) {
        let entry = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&ExponentVector::zeros(self.n))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `x^exp · self`.
    pub fn shift(&self, exp: &ExponentVector) -> Result<Polynomial> {
        if exp.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: exp.len(),
            });
        }
        Polynomial::from_terms(
            self.n,
            self.terms.iter().map(|(e, c)| {
                let sum = e.iter().zip(exp.iter()).map(|(a, b)| a + b).collect();
                (ExponentVector(sum), c.clone())
            }),
        )
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exp, coef)) in self.terms.iter().enumerate() {
            let (sign, mag) = if coef.is_negative() { ("-", -coef) } else { ("+", coef.clone()) };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let vars: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(i, e)| if e.is_one() { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                .collect();
            match (mag.is_one(), vars.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", vars.join("*"))?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

fn check_tau(n: usize, tau: &[Value]) -> Result<()> {
    if tau.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: tau.len(),
        });
    }
    common_basis(tau)?;
    if tau.iter().any(|t| t.signum() != Ordering::Greater) {
        return Err(Error::NonpositiveWeight);
    }
    Ok(())
}

/// Smallest value of a term of `f` and the exponent attaining it.
pub fn poly_value(f: &Polynomial, tau: &[Value]) -> Result<(Value, ExponentVector)> {
    check_tau(f.n, tau)?;
    let mut best: Option<(Value, &ExponentVector)> = None;
    for exp in f.terms.keys() {
        let v = exp.value(tau)?;
        best = match best {
            None => Some((v, exp)),
            Some((b, e)) => match compare(&v, &b)? {
                Ordering::Less => Some((v, exp)),
                Ordering::Greater => Some((b, e)),
                Ordering::Equal => return Err(Error::DependentWeights),
            },
        };
    }
    best.map(|(v, e)| (v, e.clone())).ok_or(Error::ZeroPolynomial)
}

/// Substitution `x_i = Π_j x'_j^{a[i][j]}`: every exponent `v` becomes `aᵀv`.
pub fn substitute(f: &Polynomial, a: &IntMatrix) -> Result<Polynomial> {
    if a.rows() != f.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            found: a.rows(),
        });
    }
    if !a.is_nonnegative() {
        return Err(Error::NegativeEntry);
    }
    let terms = f
        .terms
        .iter()
        .map(|(e, c)| Ok((e.transform(a)?, c.clone())))
        .collect::<Result<Vec<_>>>()?;
    Polynomial::from_terms(a.cols(), terms)
}

/// `substitute(f, transform) = x^monomial · unit` with `unit(0) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialForm {
    pub transform: PerronMatrix,
    /// Weights of the new variables.
    pub tau: Vec<Value>,
    pub monomial: ExponentVector,
    pub unit: Polynomial,
}

/// Monomializes with the default step cap.
pub fn monomialize(f: &Polynomial, tau: &[Value]) -> Result<MonomialForm> {
    monomialize_capped(f, tau, Cap::DEFAULT)
}

/// Takes Perron steps until the term of least value divides every other
/// term, then factors it out.
pub fn monomialize_capped(f: &Polynomial, tau: &[Value], cap: Cap) -> Result<MonomialForm> {
    let (_, min_exp) = poly_value(f, tau)?;
    if !rationally_independent(tau) {
        return Err(Error::DependentWeights);
    }
    let mut run = PerronExpansion::new(tau.to_vec())?;
    let mut exps: Vec<ExponentVector> = f.terms.keys().cloned().collect();
    let mut min = min_exp;
    let mut steps = 0;
    while !exps.iter().all(|e| min.divides(e)) {
        if steps >= cap.0 {
            return Err(Error::CapExceeded("monomialization"));
        }
        steps += 1;
        let step = run.advance()?;
        exps = exps.iter().map(|e| e.transform(&step.matrix)).collect::<Result<_>>()?;
        min = min.transform(&step.matrix)?;
    }
    let unit = Polynomial::from_terms(
        f.n,
        exps.into_iter().zip(f.terms.values()).map(|(e, c)| {
            let rest = e.iter().zip(min.iter()).map(|(a, b)| a - b).collect();
            (ExponentVector(rest), c.clone())
        }),
    )?;
    let (transform, tau, _) = run.into_parts();
    Ok(MonomialForm {
        transform,
        tau,
        monomial: min,
        unit,
    })
}
