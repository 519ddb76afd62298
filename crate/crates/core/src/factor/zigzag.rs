//! Zigzag factorization of a nonnegative unimodular monomial map into
//! alternating sequences of blowups along the valuation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::adjoint::clear_adjoint_row;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::monomaps::{replay, solve_unit_row, ElementaryMove, MapState, MonoMap, UnitRow};
use crate::perron::Cap;
use crate::values::{rationally_independent, Value};

/// The two move sequences meeting at an upper node: `left` starts at the
/// lower node before it, `right` at the lower node after it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Arrow {
    pub left: Vec<ElementaryMove>,
    pub right: Vec<ElementaryMove>,
}

/// A factorization `L_0 → U_1 ← L_1 → U_2 ← … ← L_k` where `L_0` is the
/// identity, `L_k` is `input`, every node is a map relative to the base ring
/// and every arrow is a sequence of blowups and relabelings.
///
/// `weights` are the values of the variables of `input`; the weights at any
/// other node follow from the base values `input · weights`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagCert {
    pub n: usize,
    pub input: MonoMap,
    pub weights: Vec<Value>,
    /// `L_0, U_1, L_1, …, U_k, L_k`.
    pub nodes: Vec<MonoMap>,
    /// Arrow `i` meets at node `2i + 1`.
    pub arrows: Vec<Arrow>,
}

impl ZigzagCert {
    pub fn upper_nodes(&self) -> impl Iterator<Item = &MonoMap> {
        self.nodes.iter().skip(1).step_by(2)
    }

    pub fn upper_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn lower_nodes(&self) -> impl Iterator<Item = &MonoMap> {
        self.nodes.iter().step_by(2)
    }
}

/// Default bound on the moves of a single descent. Certificates grow with
/// the entries of the maps met along the way, which can be large.
pub const ZIGZAG_DEFAULT_CAP: Cap = Cap(1_000_000);

/// Factors `map` with [`ZIGZAG_DEFAULT_CAP`].
pub fn zigzag_factor(map: &MonoMap, weights: &[Value]) -> Result<ZigzagCert> {
    zigzag_factor_capped(map, weights, ZIGZAG_DEFAULT_CAP)
}

/// Factors `map`, whose columns carry the values `weights`. Adjoint-row
/// clearing and every descent are each limited to `cap` moves.
pub fn zigzag_factor_capped(map: &MonoMap, weights: &[Value], cap: Cap) -> Result<ZigzagCert> {
    let n = map.n();
    if n < 2 {
        return Err(Error::DimensionTooSmall);
    }
    if !map.is_nonnegative() {
        return Err(Error::NegativeEntry);
    }
    if !map.is_unimodular() {
        return Err(Error::NotUnimodular);
    }
    let state = MapState::new(map.clone(), weights.to_vec())?;
    if !rationally_independent(weights) {
        return Err(Error::DependentWeights);
    }
    let (nodes, arrows) = factor_state(&state, cap)?;
    Ok(ZigzagCert {
        n,
        input: map.clone(),
        weights: weights.to_vec(),
        nodes,
        arrows,
    })
}

type Chain = (Vec<MonoMap>, Vec<Arrow>);

fn factor_state(state: &MapState, cap: Cap) -> Result<Chain> {
    if state.map().matrix().is_identity() {
        return Ok((vec![state.map().clone()], Vec::new()));
    }
    if state.n() == 2 {
        factor_plane(state, cap)
    } else {
        factor_higher(state, cap)
    }
}

fn is_permutation(m: &IntMatrix) -> bool {
    (0..m.cols()).all(|j| {
        let col = m.col(j);
        col.iter().filter(|e| e.is_one()).count() == 1 && col.iter().filter(|e| !e.is_zero()).count() == 1
    })
}

fn dominates(a: &[BigInt], b: &[BigInt]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

fn swap_perm(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(a, b);
    perm
}

fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

/// The blowup sequence undoing a descent made of IMTs and relabelings.
fn reverse_descent(moves: &[ElementaryMove]) -> Result<Vec<ElementaryMove>> {
    moves
        .iter()
        .rev()
        .map(|mv| match mv {
            ElementaryMove::Imt { r, s } => Ok(ElementaryMove::Blowup { r: *r, s: *s }),
            ElementaryMove::Relabel { perm } => Ok(ElementaryMove::Relabel {
                perm: invert_perm(perm),
            }),
            ElementaryMove::Blowup { .. } => Err(Error::Assertion("blowup inside a descent".into())),
        })
        .collect()
}

/// The base ring with the base values as weights.
fn base_state(state: &MapState) -> Result<MapState> {
    MapState::new(MonoMap::identity(state.n()), state.x_values())
}

/// A run of IMTs and relabelings with the moves kept outside the state.
struct Descent {
    state: MapState,
    moves: Vec<ElementaryMove>,
    cap: Cap,
}

impl Descent {
    fn new(state: MapState, cap: Cap) -> Descent {
        Descent {
            state,
            moves: Vec::new(),
            cap,
        }
    }

    fn imt(&mut self, r: usize, s: usize) -> Result<()> {
        if self.moves.len() >= self.cap.0 {
            return Err(Error::CapExceeded("zigzag descent"));
        }
        let mut next = self.state.imt(r, s).map_err(|e| match e {
            Error::ImtUndefined | Error::ImtNotDominated => Error::Assertion(format!(
                "imt({},{}) promised by the case analysis failed: {e}",
                r + 1,
                s + 1
            )),
            other => other,
        })?;
        self.moves.extend(next.take_log());
        self.state = next;
        Ok(())
    }

    /// `times` IMTs at `(r, s)`, tracking the unit row alongside.
    fn imt_times(&mut self, r: usize, s: usize, times: &BigInt, z: &mut UnitRow) -> Result<()> {
        let mut k = BigInt::zero();
        while &k < times {
            self.imt(r, s)?;
            *z = z.after_imt(r, s);
            k += 1;
        }
        Ok(())
    }

    fn relabel(&mut self, perm: &[usize]) -> Result<()> {
        let mut next = self.state.relabel(perm)?;
        self.moves.extend(next.take_log());
        self.state = next;
        Ok(())
    }
}

/// Two variables: peel the dominating column until a permutation remains,
/// then read the peeled steps backwards as blowups out of the base ring.
fn factor_plane(state: &MapState, cap: Cap) -> Result<Chain> {
    let mut descent = Descent::new(state.without_log(), cap);
    while !is_permutation(descent.state.map().matrix()) {
        let m = descent.state.map().matrix();
        let (r, s) = if dominates(&m.col(1), &m.col(0)) {
            (0, 1)
        } else if dominates(&m.col(0), &m.col(1)) {
            (1, 0)
        } else {
            return Err(Error::Assertion("columns of a 2x2 map are not comparable".into()));
        };
        loop {
            descent.imt(r, s)?;
            let m = descent.state.map().matrix();
            if is_permutation(m) || !dominates(&m.col(s), &m.col(r)) {
                break;
            }
        }
    }
    let mut left = Vec::new();
    if !descent.state.map().matrix().is_identity() {
        left.push(ElementaryMove::Relabel { perm: vec![1, 0] });
    }
    left.extend(reverse_descent(&descent.moves)?);
    let rebuilt = replay(&base_state(state)?, &left).map_err(|e| {
        Error::Assertion(format!("peeled blowup sequence is not allowable: {e}"))
    })?;
    if rebuilt.map() != state.map() {
        return Err(Error::Assertion("peeled blowup sequence does not rebuild the map".into()));
    }
    let map = state.map().clone();
    Ok((
        vec![MonoMap::identity(2), map.clone(), map],
        vec![Arrow {
            left,
            right: Vec::new(),
        }],
    ))
}

fn factor_higher(state: &MapState, cap: Cap) -> Result<Chain> {
    let n = state.n();
    let start = state.without_log();
    let cleared = clear_adjoint_row(&start, cap)?;
    let right = cleared.log().to_vec();
    let upper = cleared.map().clone();

    let mut descent = Descent::new(cleared.without_log(), cap);
    let mut z = solve_unit_row(descent.state.map())?;
    let c = loop {
        let support = z.support();
        match support.len() {
            1 => break support[0],
            2 => {}
            k => return Err(Error::Assertion(format!("unit row has {k} nonzero entries"))),
        }
        let (p, q) = (support[0], support[1]);
        let (u, v) = match (z.0[p].is_negative(), z.0[q].is_negative()) {
            (true, false) => (p, q),
            (false, true) => (q, p),
            (false, false) => {
                return Err(Error::Assertion("both surviving unit-row entries are positive".into()))
            }
            (true, true) => {
                return Err(Error::Assertion("both surviving unit-row entries are negative".into()))
            }
        };
        let (neg, pos) = (z.0[u].abs(), z.0[v].clone());
        if neg >= pos {
            descent.imt_times(u, v, &neg.div_floor(&pos), &mut z)?;
        } else if neg.is_one() {
            descent.imt_times(v, u, &(&pos - 1), &mut z)?;
            descent.imt_times(u, v, &BigInt::one(), &mut z)?;
        } else {
            descent.imt_times(v, u, &pos.div_floor(&neg), &mut z)?;
        }
    };

    if !z.0[c].is_one() {
        return Err(Error::Assertion("surviving unit-row entry is not 1".into()));
    }
    let col_c = descent.state.map().matrix().col(c);
    if !col_c.iter().enumerate().all(|(i, e)| if i == 0 { e.is_one() } else { e.is_zero() }) {
        return Err(Error::Assertion("no column equals the first basis vector".into()));
    }
    for j in (0..n).filter(|&j| j != c) {
        let times = descent.state.map().matrix()[(0, j)].clone();
        descent.imt_times(c, j, &times, &mut z)?;
    }
    if c != 0 {
        descent.relabel(&swap_perm(n, 0, c))?;
    }
    let current = descent.state;
    let m = current.map().matrix();
    let bordered = (0..n).all(|k| {
        let one = if k == 0 { BigInt::one() } else { BigInt::zero() };
        m[(0, k)] == one && m[(k, 0)] == one
    });
    if !bordered {
        return Err(Error::Assertion("map is not in bordered form after clearing".into()));
    }

    let block = IntMatrix::from_rows((1..n).map(|i| m.row(i)[1..].to_vec()).collect())?;
    let sub_state = MapState::new(MonoMap::new(block)?, current.weights()[1..].to_vec())?;
    let (sub_nodes, sub_arrows) = factor_state(&sub_state, cap)?;

    let mut nodes: Vec<MonoMap> = sub_nodes.iter().map(border).collect::<Result<_>>()?;
    let mut arrows: Vec<Arrow> = sub_arrows
        .iter()
        .map(|a| Arrow {
            left: a.left.iter().map(shift_move).collect(),
            right: a.right.iter().map(shift_move).collect(),
        })
        .collect();
    if nodes.last() != Some(current.map()) {
        return Err(Error::Assertion("lifted chain does not end at the bordered map".into()));
    }
    let left = reverse_descent(&descent.moves)?;
    if !left.is_empty() || !right.is_empty() {
        nodes.push(upper);
        nodes.push(state.map().clone());
        arrows.push(Arrow { left, right });
    }
    Ok((nodes, arrows))
}

/// `[[1, 0], [0, block]]`.
fn border(block: &MonoMap) -> Result<MonoMap> {
    let n = block.n() + 1;
    let mut m = IntMatrix::zeros(n, n);
    m[(0, 0)] = BigInt::one();
    for i in 1..n {
        for j in 1..n {
            m[(i, j)] = block.matrix()[(i - 1, j - 1)].clone();
        }
    }
    MonoMap::new(m)
}

fn shift_move(mv: &ElementaryMove) -> ElementaryMove {
    match mv {
        ElementaryMove::Blowup { r, s } => ElementaryMove::Blowup { r: r + 1, s: s + 1 },
        ElementaryMove::Imt { r, s } => ElementaryMove::Imt { r: r + 1, s: s + 1 },
        ElementaryMove::Relabel { perm } => ElementaryMove::Relabel {
            perm: std::iter::once(0).chain(perm.iter().map(|p| p + 1)).collect(),
        },
    }
}
