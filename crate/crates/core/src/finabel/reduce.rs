//! Reducing a generating tuple by elementary moves.
//!
//! Starting from the largest cyclic factor, a Euclidean pass concentrates the
//! coordinate onto a single entry; the remaining entries then lie in the
//! complement and the same pass runs one coordinate lower. After `rank`
//! passes at most `rank` entries can be nonzero.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::{Element, FinAbGroup};
use crate::error::{Error, Result};

/// One logged step. Indices are positions in the tuple (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementaryOp {
    /// `xi[target] -= times * xi[source]`
    Subtract { target: usize, source: usize, times: u64 },
    Swap(usize, usize),
}

impl fmt::Display for ElementaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ElementaryOp::Subtract { target, source, times } => {
                write!(f, "x{target} -= {times}*x{source}")
            }
            ElementaryOp::Swap(i, j) => write!(f, "swap x{i} x{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleReduction {
    pub ops: Vec<ElementaryOp>,
    pub reduced: Vec<Element>,
}

impl TupleReduction {
    pub fn nonzero_count(&self) -> usize {
        self.reduced.iter().filter(|x| !x.is_zero()).count()
    }
}

fn apply(a: &FinAbGroup, xi: &mut [Element], op: ElementaryOp) {
    match op {
        ElementaryOp::Subtract { target, source, times } => {
            let s = a.scale(&xi[source], times as i64);
            xi[target] = a.sub(&xi[target], &s);
        }
        ElementaryOp::Swap(i, j) => xi.swap(i, j),
    }
}

/// Reduce `xi` to a tuple with at most `rank(a)` nonzero entries generating
/// the same subgroup. Needs `xi.len() >= rank(a)`.
pub fn reduce_tuple(a: &FinAbGroup, xi: &[Element]) -> Result<TupleReduction> {
    let r = a.rank();
    if xi.len() < r {
        return Err(Error::Precondition(format!(
            "tuple of length {} is shorter than the rank {r}",
            xi.len()
        )));
    }
    for x in xi {
        a.check(x)?;
    }
    let mut cur: Vec<Element> = xi.to_vec();
    let mut ops = Vec::new();
    let mut step = |cur: &mut Vec<Element>, op: ElementaryOp| {
        apply(a, cur, op);
        ops.push(op);
    };

    let mut first = 0usize;
    for c in (0..r).rev() {
        for j in first + 1..cur.len() {
            loop {
                let x = cur[first].coords()[c];
                let y = cur[j].coords()[c];
                if y == 0 {
                    break;
                }
                if x == 0 {
                    step(&mut cur, ElementaryOp::Swap(first, j));
                } else if x > y {
                    step(&mut cur, ElementaryOp::Subtract { target: first, source: j, times: x / y });
                } else {
                    step(&mut cur, ElementaryOp::Subtract { target: j, source: first, times: y / x });
                }
            }
        }
        first += 1;
    }
    debug_assert!(cur[r..].iter().all(Element::is_zero));
    Ok(TupleReduction { ops, reduced: cur })
}

/// Re-apply a log of operations to `xi`.
pub fn replay(a: &FinAbGroup, xi: &[Element], ops: &[ElementaryOp]) -> Result<Vec<Element>> {
    for x in xi {
        a.check(x)?;
    }
    let n = xi.len();
    let mut cur = xi.to_vec();
    for &op in ops {
        let ok = match op {
            ElementaryOp::Subtract { target, source, .. } => target < n && source < n && target != source,
            ElementaryOp::Swap(i, j) => i < n && j < n,
        };
        if !ok {
            return Err(Error::Precondition(format!("operation {op} out of range for a {n}-tuple")));
        }
        apply(a, &mut cur, op);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finabel::subgroup_from_generators;
    use alloc::vec;

    fn g(inv: &[u64]) -> FinAbGroup {
        FinAbGroup::new(inv).unwrap()
    }

    fn el(a: &FinAbGroup, c: &[u64]) -> Element {
        a.element(c).unwrap()
    }

    #[test]
    fn rank_one_elimination() {
        let a = g(&[2]);
        let xi = vec![el(&a, &[1]); 3];
        let out = reduce_tuple(&a, &xi).unwrap();
        assert_eq!(out.reduced, vec![el(&a, &[1]), el(&a, &[0]), el(&a, &[0])]);
        assert_eq!(
            out.ops,
            vec![
                ElementaryOp::Subtract { target: 1, source: 0, times: 1 },
                ElementaryOp::Subtract { target: 2, source: 0, times: 1 },
            ]
        );
    }

    #[test]
    fn euclid_on_z6() {
        let a = g(&[6]);
        let xi = vec![el(&a, &[2]), el(&a, &[3])];
        let out = reduce_tuple(&a, &xi).unwrap();
        // 3 - 2 = 1, then 2 - 2*1 = 0, then the survivor moves to the front
        assert_eq!(
            out.ops,
            vec![
                ElementaryOp::Subtract { target: 1, source: 0, times: 1 },
                ElementaryOp::Subtract { target: 0, source: 1, times: 2 },
                ElementaryOp::Swap(0, 1),
            ]
        );
        assert_eq!(out.reduced, vec![el(&a, &[1]), el(&a, &[0])]);
    }

    #[test]
    fn klein_three_generators() {
        let a = g(&[2, 2]);
        let xi = vec![el(&a, &[1, 0]), el(&a, &[0, 1]), el(&a, &[1, 1])];
        let out = reduce_tuple(&a, &xi).unwrap();
        assert_eq!(out.nonzero_count(), 2);
        assert_eq!(replay(&a, &xi, &out.ops).unwrap(), out.reduced);
    }

    #[test]
    fn short_tuple_rejected() {
        let a = g(&[2, 2]);
        let err = reduce_tuple(&a, &[el(&a, &[1, 0])]).unwrap_err();
        assert_eq!(err.code(), "precondition");
    }

    #[test]
    fn replay_checks_indices() {
        let a = g(&[4]);
        let xi = vec![el(&a, &[1])];
        assert!(replay(&a, &xi, &[ElementaryOp::Swap(0, 1)]).is_err());
    }

    #[test]
    fn every_pair_in_small_groups() {
        for inv in [&[4u64][..], &[2, 2], &[2, 4], &[3, 3]] {
            let a = g(inv);
            let elems: Vec<Element> = a.elements().collect();
            for x in &elems {
                for y in &elems {
                    for z in &elems {
                        let xi = vec![x.clone(), y.clone(), z.clone()];
                        let out = reduce_tuple(&a, &xi).unwrap();
                        assert!(out.nonzero_count() <= a.rank());
                        assert_eq!(replay(&a, &xi, &out.ops).unwrap(), out.reduced);
                        assert_eq!(
                            subgroup_from_generators(&a, &xi).unwrap(),
                            subgroup_from_generators(&a, &out.reduced).unwrap()
                        );
                    }
                }
            }
        }
    }
}
