//! Random instance generators and independent oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use valfactor_core::values::rationally_independent;
use valfactor_core::{
    compare, ElementaryMove, ExponentVector, IntMatrix, MonoMap, Polynomial, SurdBasis, Value,
    ZigzagCert,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const SQUAREFREE: [u64; 12] = [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17];

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `n` positive, rationally independent values over a random basis of `n`
/// radicands. Each value mixes up to all basis elements.
pub fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<Value> {
    let mut radicands: Vec<u64> = SQUAREFREE.choose_multiple(rng, n).copied().collect();
    radicands.sort_unstable();
    let basis = SurdBasis::new(radicands).unwrap();
    loop {
        let values: Vec<Value> = (0..n)
            .map(|_| {
                let coeffs = (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.4) {
                            BigRational::zero()
                        } else {
                            ratio(rng.gen_range(-3..=5), rng.gen_range(1..=4))
                        }
                    })
                    .collect();
                Value::new(basis.clone(), coeffs).unwrap()
            })
            .collect();
        if values.iter().all(Value::is_positive) && rationally_independent(&values) {
            return values;
        }
    }
}

/// `(c_1·√d_1, …)` with distinct radicands and positive rational scales.
pub fn random_surd_weights(rng: &mut impl Rng, n: usize) -> Vec<Value> {
    let mut radicands: Vec<u64> = SQUAREFREE.choose_multiple(rng, n).copied().collect();
    radicands.sort_unstable();
    let basis = SurdBasis::new(radicands).unwrap();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
        .into_iter()
        .map(|i| Value::surd(&basis, i).scale_rational(&ratio(rng.gen_range(1..=7), rng.gen_range(1..=5))))
        .collect()
}

/// Product of up to `ops` elementary additions `I + e_ij`, multiplied on
/// either side, so the result is nonnegative with determinant one.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, ops: usize) -> MonoMap {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let count = rng.gen_range(0..=ops);
    for _ in 0..count {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_bool(0.5) {
            // column j += column i
            for row in m.iter_mut() {
                row[j] += row[i];
            }
        } else {
            // row i += row j
            let add = m[j].clone();
            for (a, b) in m[i].iter_mut().zip(add) {
                *a += b;
            }
        }
    }
    MonoMap::from_i64_rows(&m).unwrap()
}

pub fn random_polynomial(rng: &mut impl Rng, n: usize, max_deg: i64, max_terms: usize) -> Polynomial {
    loop {
        let count = rng.gen_range(1..=max_terms);
        let terms = (0..count).map(|_| {
            let exp = ExponentVector::from_i64(&(0..n).map(|_| rng.gen_range(0..=max_deg)).collect::<Vec<_>>());
            let mut c = rng.gen_range(-9..=9);
            if c == 0 {
                c = 1;
            }
            (exp, ratio(c, rng.gen_range(1..=3)))
        });
        let f = Polynomial::from_terms(n, terms.collect::<Vec<_>>()).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_exponent(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> ExponentVector {
    ExponentVector::from_i64(&(0..n).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>())
}

// ---- oracles ----

/// Determinant by cofactor expansion along the first row.
pub fn det_by_expansion(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = &rows[0][j] * det_by_expansion(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `Σ_j m[i][j]·w_j` computed coefficientwise.
pub fn apply_to_values(m: &IntMatrix, w: &[Value]) -> Vec<Value> {
    let basis = w[0].basis().clone();
    (0..m.rows())
        .map(|i| {
            let coeffs = (0..basis.len())
                .map(|t| {
                    (0..m.cols()).fold(BigRational::zero(), |acc, j| {
                        acc + BigRational::from_integer(m[(i, j)].clone()) * &w[j].coeffs()[t]
                    })
                })
                .collect();
            Value::new(basis.clone(), coeffs).unwrap()
        })
        .collect()
}

type Terms = BTreeMap<Vec<BigInt>, BigRational>;

fn terms_of(f: &Polynomial) -> Terms {
    f.terms().iter().map(|(e, c)| (e.0.clone(), c.clone())).collect()
}

/// Substitution `x_i = Π_j y_j^{a_ij}` term by term, merging like terms.
pub fn substitute_oracle(f: &Polynomial, a: &IntMatrix) -> Terms {
    let mut out = Terms::new();
    for (e, c) in f.terms() {
        let image: Vec<BigInt> = (0..a.cols())
            .map(|j| (0..a.rows()).fold(BigInt::zero(), |acc, i| acc + &a[(i, j)] * &e.0[i]))
            .collect();
        *out.entry(image).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `x^a · u` expanded.
pub fn monomial_times(a: &ExponentVector, u: &Polynomial) -> Terms {
    let mut out = Terms::new();
    for (e, c) in terms_of(u) {
        let shifted = e.iter().zip(a.iter()).map(|(x, y)| x + y).collect();
        *out.entry(shifted).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn terms_equal(p: &Polynomial, t: &Terms) -> bool {
    &terms_of(p) == t
}

/// A replay of blowups and relabelings written directly on integer rows,
/// sharing nothing with the library's move code.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleState {
    pub rows: Vec<Vec<BigInt>>,
    pub weights: Vec<Value>,
}

impl OracleState {
    pub fn apply(&self, mv: &ElementaryMove) -> Option<OracleState> {
        let n = self.rows.len();
        let mut next = self.clone();
        match mv {
            ElementaryMove::Blowup { r, s } => {
                let (r, s) = (*r, *s);
                if r >= n || s >= n || r == s {
                    return None;
                }
                if compare(&self.weights[r], &self.weights[s]).ok()? != Ordering::Greater {
                    return None;
                }
                for row in next.rows.iter_mut() {
                    let add = row[r].clone();
                    row[s] += add;
                }
                next.weights[r] = self.weights[r].try_sub(&self.weights[s]).ok()?;
            }
            ElementaryMove::Relabel { perm } => {
                let mut seen = HashSet::new();
                if perm.len() != n || !perm.iter().all(|&p| p < n && seen.insert(p)) {
                    return None;
                }
                for (row, old) in next.rows.iter_mut().zip(&self.rows) {
                    *row = perm.iter().map(|&p| old[p].clone()).collect();
                }
                next.weights = perm.iter().map(|&p| self.weights[p].clone()).collect();
            }
            ElementaryMove::Imt { .. } => return None,
        }
        Some(next)
    }
}

fn rows_of(m: &MonoMap) -> Vec<Vec<BigInt>> {
    m.matrix().to_rows()
}

/// Solves `rows·w = x` exactly, column by column over the basis.
fn solve_oracle(rows: &[Vec<BigInt>], x: &[Value]) -> Option<Vec<Value>> {
    let n = rows.len();
    let basis = x[0].basis().clone();
    let mut cols: Vec<Vec<BigRational>> = vec![Vec::new(); n];
    for t in 0..basis.len() {
        let mut aug: Vec<Vec<BigRational>> = rows
            .iter()
            .zip(x)
            .map(|(r, v)| {
                r.iter()
                    .map(|e| BigRational::from_integer(e.clone()))
                    .chain(std::iter::once(v.coeffs()[t].clone()))
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
            aug.swap(c, p);
            let piv = aug[c][c].clone();
            for k in c..=n {
                let v = &aug[c][k] / &piv;
                aug[c][k] = v;
            }
            for i in 0..n {
                if i != c && !aug[i][c].is_zero() {
                    let f = aug[i][c].clone();
                    for k in c..=n {
                        let v = &aug[c][k] * &f;
                        aug[i][k] -= v;
                    }
                }
            }
        }
        for (j, col) in cols.iter_mut().enumerate() {
            col.push(aug[j][n].clone());
        }
    }
    cols.into_iter().map(|c| Value::new(basis.clone(), c).ok()).collect()
}

/// Recomputed weights of a node, from the base values of the certificate.
pub fn oracle_node_weights(cert: &ZigzagCert, node: &MonoMap) -> Option<Vec<Value>> {
    let x = apply_to_values(cert.input.matrix(), &cert.weights);
    solve_oracle(&rows_of(node), &x)
}

/// Full check of a certificate, written from its definition only.
pub fn oracle_cert_valid(cert: &ZigzagCert) -> bool {
    let n = cert.n;
    if n < 2 || cert.input.n() != n || cert.weights.len() != n {
        return false;
    }
    if cert.weights.iter().any(|w| !w.same_basis(&cert.weights[0]) || !w.is_positive()) {
        return false;
    }
    if !rationally_independent(&cert.weights) {
        return false;
    }
    if cert.nodes.len() != 2 * cert.arrows.len() + 1 || cert.nodes.iter().any(|m| m.n() != n) {
        return false;
    }
    if cert.nodes[0] != MonoMap::identity(n) || cert.nodes.last() != Some(&cert.input) {
        return false;
    }
    for node in &cert.nodes {
        let rows = rows_of(node);
        if rows.iter().flatten().any(|e| e.is_negative()) || !det_by_expansion(&rows).abs().is_one() {
            return false;
        }
        match oracle_node_weights(cert, node) {
            Some(w) if w.iter().all(Value::is_positive) => {}
            _ => return false,
        }
    }
    for (k, arrow) in cert.arrows.iter().enumerate() {
        for (moves, src) in [(&arrow.left, 2 * k), (&arrow.right, 2 * k + 2)] {
            let Some(weights) = oracle_node_weights(cert, &cert.nodes[src]) else {
                return false;
            };
            let mut st = OracleState {
                rows: rows_of(&cert.nodes[src]),
                weights,
            };
            for mv in moves {
                match st.apply(mv) {
                    Some(next) => st = next,
                    None => return false,
                }
            }
            if st.rows != rows_of(&cert.nodes[2 * k + 1]) {
                return false;
            }
        }
    }
    true
}

/// Breadth-first search over at most `depth` allowable blowups from the
/// base ring, looking for `target` up to a column permutation.
pub fn bfs_direct_factorization(target: &MonoMap, weights: &[Value], depth: usize) -> bool {
    let n = target.n();
    let x = apply_to_values(target.matrix(), weights);
    let goal = {
        let mut cols: Vec<Vec<BigInt>> = (0..n).map(|j| target.matrix().col(j)).collect();
        cols.sort();
        cols
    };
    let key = |rows: &[Vec<BigInt>]| {
        let mut cols: Vec<Vec<BigInt>> = (0..n).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        cols.sort();
        cols
    };
    let start = OracleState {
        rows: rows_of(&MonoMap::identity(n)),
        weights: x,
    };
    let mut seen = HashSet::new();
    seen.insert(key(&start.rows));
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((st, d)) = queue.pop_front() {
        if key(&st.rows) == goal {
            return true;
        }
        if d == depth {
            continue;
        }
        for r in 0..n {
            for s in 0..n {
                if let Some(next) = st.apply(&ElementaryMove::Blowup { r, s }) {
                    if seen.insert(key(&next.rows)) {
                        queue.push_back((next, d + 1));
                    }
                }
            }
        }
    }
    false
}

pub fn basis_of(values: &[Value]) -> Arc<SurdBasis> {
    values[0].basis().clone()
}

pub fn median(values: &mut [usize]) -> usize {
    values.sort_unstable();
    values[values.len() / 2]
}

/// Rejection sampling of nonnegative matrices with small entries and
/// determinant ±1. Unlike products of additions these often admit no
/// inverse monoidal transform at all.
pub fn random_small_unimodular(rng: &mut impl Rng, n: usize, max_entry: i64) -> MonoMap {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=max_entry)).collect()).collect();
        let m = MonoMap::from_i64_rows(&rows).unwrap();
        if m.is_unimodular() {
            return m;
        }
    }
}
