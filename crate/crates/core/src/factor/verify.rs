//! Independent checking of zigzag certificates.

use std::fmt;

use super::zigzag::ZigzagCert;
use crate::error::Error;
use crate::monomaps::{replay, ElementaryMove, MapState, MonoMap};
use crate::values::{common_basis, rationally_independent, Value};

/// Outcome of [`verify_zigzag`]. A rejection names the first failing check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { reason: String, location: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "accept"),
            Verdict::Reject { reason, location } => write!(f, "reject: {reason} at {location}"),
        }
    }
}

fn reject(reason: impl Into<String>, location: impl Into<String>) -> Verdict {
    Verdict::Reject {
        reason: reason.into(),
        location: location.into(),
    }
}

macro_rules! ensure {
    ($cond:expr, $reason:expr, $location:expr) => {
        if !$cond {
            return reject($reason, $location);
        }
    };
}

/// Checks every claim a certificate makes, replaying each arrow from
/// scratch. Never panics on malformed certificates.
pub fn verify_zigzag(cert: &ZigzagCert) -> Verdict {
    let n = cert.n;
    ensure!(n >= 2, "dimension too small", "n");
    ensure!(cert.input.n() == n, "input dimension differs from n", "input");
    ensure!(cert.weights.len() == n, "wrong number of weights", "weights");
    ensure!(common_basis(&cert.weights).is_ok(), "weights use different bases", "weights");
    for (i, w) in cert.weights.iter().enumerate() {
        ensure!(w.is_positive(), "nonpositive weight", format!("weights[{i}]"));
    }
    ensure!(
        rationally_independent(&cert.weights),
        "weights are not rationally independent",
        "weights"
    );
    ensure!(cert.input.is_nonnegative(), "negative entry in input map", "input");
    ensure!(cert.input.is_unimodular(), "input map is not unimodular", "input");
    ensure!(
        cert.nodes.len() == 2 * cert.arrows.len() + 1,
        "node count does not match arrow count",
        "nodes"
    );
    for (i, node) in cert.nodes.iter().enumerate() {
        ensure!(node.n() == n, "node dimension differs from n", format!("nodes[{i}]"));
    }

    let x_values = match cert.input.x_values(&cert.weights) {
        Ok(x) => x,
        Err(e) => return reject(e.to_string(), "weights"),
    };
    let node_weights = |i: usize| -> Result<Vec<Value>, Verdict> {
        cert.nodes[i]
            .solve_weights(&x_values)
            .map_err(|e| reject(e.to_string(), format!("nodes[{i}]")))
    };

    for (k, arrow) in cert.arrows.iter().enumerate() {
        let upper = 2 * k + 1;
        for (side, moves, source) in [("left", &arrow.left, 2 * k), ("right", &arrow.right, 2 * k + 2)] {
            if let Some(idx) = moves
                .iter()
                .position(|mv| matches!(mv, ElementaryMove::Imt { .. }))
            {
                return reject("arrow contains an inverse transform", format!("arrows[{k}].{side}[{idx}]"));
            }
            let weights = match node_weights(source) {
                Ok(w) => w,
                Err(v) => return v,
            };
            let start = match MapState::new(cert.nodes[source].clone(), weights) {
                Ok(s) => s,
                Err(e) => return reject(node_error(&e), format!("nodes[{source}]")),
            };
            let end = match replay(&start, moves) {
                Ok(s) => s,
                Err(Error::Move { index, source }) => {
                    return reject(move_error(&source), format!("arrows[{k}].{side}[{}]", index - 1))
                }
                Err(e) => return reject(e.to_string(), format!("arrows[{k}].{side}")),
            };
            ensure!(
                end.map() == &cert.nodes[upper],
                format!("arrow replay mismatch at node {upper}"),
                format!("arrows[{k}].{side}")
            );
        }
    }

    for (i, node) in cert.nodes.iter().enumerate() {
        let loc = format!("nodes[{i}]");
        ensure!(node.is_nonnegative(), "negative entry: node does not contain the base ring", loc.clone());
        ensure!(node.is_unimodular(), "node is not unimodular", loc.clone());
        let weights = match node_weights(i) {
            Ok(w) => w,
            Err(v) => return v,
        };
        ensure!(
            weights.iter().all(Value::is_positive),
            "node not dominated by the valuation",
            loc
        );
    }

    ensure!(
        cert.nodes[0] == MonoMap::identity(n),
        "first node is not the identity",
        "nodes[0]"
    );
    ensure!(
        cert.nodes.last() == Some(&cert.input),
        "final node does not match input map",
        format!("nodes[{}]", cert.nodes.len() - 1)
    );
    Verdict::Accept
}

fn node_error(e: &Error) -> String {
    match e {
        Error::NonpositiveWeight => "node not dominated by the valuation".into(),
        other => other.to_string(),
    }
}

fn move_error(e: &Error) -> String {
    match e {
        Error::NotAllowable => "move not allowable along valuation".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::zigzag_factor;
    use crate::values::SurdBasis;

    fn cert() -> ZigzagCert {
        let b = SurdBasis::new(vec![1, 2, 3]).unwrap();
        let w = vec![Value::surd(&b, 1), Value::surd(&b, 2), Value::surd(&b, 0)];
        let map = MonoMap::from_i64_rows(&[[2, 1, 1], [1, 1, 1], [1, 0, 1]]).unwrap();
        zigzag_factor(&map, &w).unwrap()
    }

    fn reason(v: Verdict) -> String {
        match v {
            Verdict::Accept => "accept".into(),
            Verdict::Reject { reason, .. } => reason,
        }
    }

    #[test]
    fn accepts_factorizer_output() {
        assert_eq!(verify_zigzag(&cert()), Verdict::Accept);
    }

    #[test]
    fn incremented_entry_is_a_mismatch() {
        let mut c = cert();
        let mut m = c.nodes[1].matrix().clone();
        m[(0, 0)] += 1;
        c.nodes[1] = MonoMap::new(m).unwrap();
        assert!(reason(verify_zigzag(&c)).starts_with("arrow replay mismatch at node"));
    }

    #[test]
    fn swapped_blowup_is_not_allowable() {
        let mut c = cert();
        let (k, side, idx) = c
            .arrows
            .iter()
            .enumerate()
            .find_map(|(k, a)| {
                a.left
                    .iter()
                    .position(|m| matches!(m, ElementaryMove::Blowup { .. }))
                    .map(|i| (k, 0, i))
                    .or_else(|| {
                        a.right
                            .iter()
                            .position(|m| matches!(m, ElementaryMove::Blowup { .. }))
                            .map(|i| (k, 1, i))
                    })
            })
            .expect("certificate has a blowup");
        let list = if side == 0 { &mut c.arrows[k].left } else { &mut c.arrows[k].right };
        if let ElementaryMove::Blowup { r, s } = list[idx] {
            list[idx] = ElementaryMove::Blowup { r: s, s: r };
        }
        assert_eq!(reason(verify_zigzag(&c)), "move not allowable along valuation");
    }

    #[test]
    fn structural_rejections() {
        let mut c = cert();
        c.n = 4;
        assert!(!verify_zigzag(&c).is_accept());
        let mut c = cert();
        c.nodes.pop();
        assert!(!verify_zigzag(&c).is_accept());
        let mut c = cert();
        let last = c.nodes.len() - 1;
        c.nodes[last] = MonoMap::identity(3);
        assert!(!verify_zigzag(&c).is_accept());
        let mut c = cert();
        c.weights.swap(0, 1);
        c.weights[0] = c.weights[1].clone();
        assert!(!verify_zigzag(&c).is_accept());
    }
}
