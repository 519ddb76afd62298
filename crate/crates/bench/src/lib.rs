//! Deterministic inputs shared by the benchmarks.

use valfactor_core::{MonoMap, Polynomial, SurdBasis, Value};

const RADICANDS: [u64; 5] = [2, 3, 5, 7, 11];

/// `(√2, √3, …)` truncated to `n` entries, as values over one basis.
pub fn surd_weights(n: usize) -> Vec<Value> {
    let basis = SurdBasis::new(RADICANDS[..n].to_vec()).expect("squarefree radicands");
    (0..n).map(|i| Value::surd(&basis, i)).collect()
}

/// Product of `ops` elementary additions cycling over all index pairs,
/// alternating column and row operations.
pub fn unimodular_map(n: usize, ops: usize) -> MonoMap {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    for k in 0..ops {
        let (i, j) = pairs[(k * 7) % pairs.len()];
        if k % 2 == 0 {
            for row in m.iter_mut() {
                row[j] += row[i];
            }
        } else {
            let add = m[j].clone();
            for (a, b) in m[i].iter_mut().zip(add) {
                *a += b;
            }
        }
    }
    MonoMap::from_i64_rows(&m).expect("square")
}

/// Dense polynomial in `n` variables with every exponent up to `deg` in the
/// first two variables and alternating coefficients.
pub fn dense_polynomial(n: usize, deg: i64) -> Polynomial {
    let mut terms = Vec::new();
    for a in 0..=deg {
        for b in 0..=deg - a {
            let mut e = vec![0i64; n];
            e[0] = a;
            if n > 1 {
                e[1] = b;
            }
            e[n - 1] += (a + b) % 2;
            terms.push((e, if (a + b) % 3 == 0 { -1 } else { 1 + a }));
        }
    }
    let refs: Vec<(&[i64], i64)> = terms.iter().map(|(e, c)| (e.as_slice(), *c)).collect();
    Polynomial::from_i64_terms(n, &refs).expect("nonnegative exponents")
}
