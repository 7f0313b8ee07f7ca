//! Finite abelian groups in invariant-factor form.
//!
//! A group is `Z/d_1 x ... x Z/d_k` with `d_1 | d_2 | ... | d_k` and every
//! `d_i >= 2`; elements are coordinate vectors with `0 <= x_i < d_i`.

mod enumerate;
mod reduce;
mod subgroup;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::qz::QmodZ;

pub use enumerate::{embeds_into, enumerate_subgroups, for_each_subgroup, subgroup_types};
pub use reduce::{reduce_tuple, replay, ElementaryOp, TupleReduction};
pub use subgroup::{quotient, subgroup_from_generators, Subgroup};

pub(crate) use enumerate::walk_subgroups;

/// Largest group order the exhaustive searches will accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnumLimit(pub u64);

impl EnumLimit {
    pub const DEFAULT: EnumLimit = EnumLimit(4096);

    pub fn check(self, order: u64) -> Result<()> {
        if order > self.0 {
            Err(Error::EnumerationBound { order, bound: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumLimit {
    fn default() -> Self {
        EnumLimit::DEFAULT
    }
}

/// Prime factorization by trial division, primes ascending.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// A finite abelian group given by its invariant-factor chain.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinAbGroup {
    invariants: Arc<[u64]>,
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup{:?}", &*self.invariants)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.invariants.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl FinAbGroup {
    /// Builds the group `Z/d_1 x ... x Z/d_k` for arbitrary `d_i >= 2`,
    /// canonicalizing to the invariant-factor chain (so `[2,3]` becomes `[6]`
    /// and `[4,2]` becomes `[2,4]`). An empty list is the trivial group.
    pub fn new(factors: &[u64]) -> Result<FinAbGroup> {
        if let Some(&bad) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidInvariant(bad));
        }
        // primary components, exponents sorted descending per prime
        let mut primes: Vec<(u64, Vec<u32>)> = Vec::new();
        for &d in factors {
            for (p, e) in factorize(d) {
                match primes.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, es)) => es.push(e),
                    None => primes.push((p, vec![e])),
                }
            }
        }
        let mut rank = 0;
        for (_, es) in primes.iter_mut() {
            es.sort_unstable_by(|a, b| b.cmp(a));
            rank = rank.max(es.len());
        }
        // largest invariant first, then reverse
        let mut inv: Vec<u64> = (0..rank)
            .map(|i| {
                primes
                    .iter()
                    .filter_map(|(p, es)| es.get(i).map(|&e| p.pow(e)))
                    .product()
            })
            .collect();
        inv.reverse();
        Ok(FinAbGroup { invariants: inv.into() })
    }

    /// Wraps an invariant list that is already a divisibility chain.
    pub(crate) fn from_chain(inv: Vec<u64>) -> FinAbGroup {
        debug_assert!(inv.iter().all(|&d| d >= 2));
        debug_assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
        FinAbGroup { invariants: inv.into() }
    }

    pub fn trivial() -> FinAbGroup {
        FinAbGroup { invariants: Arc::from(Vec::new()) }
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Exponent of the group; 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    /// The character group. Finite abelian groups are self-dual, so this has
    /// the same invariants; coordinates of a character `chi` pair with `a`
    /// through [`FinAbGroup::eval_character`].
    pub fn dual(&self) -> FinAbGroup {
        self.clone()
    }

    /// If the order is a power of a prime `p` (order > 1), returns `p`.
    pub fn prime(&self) -> Option<u64> {
        match factorize(self.order()).as_slice() {
            [(p, _)] => Some(*p),
            _ => None,
        }
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// Validated element constructor; coordinates must already be reduced.
    pub fn element(&self, coords: &[u64]) -> Result<Element> {
        let e = Element(coords.to_vec());
        self.check(&e)?;
        Ok(e)
    }

    /// Element from arbitrary integer coordinates, reduced modulo each `d_i`.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::ElementOutOfRange {
                coords: coords.iter().map(|&c| c as u64).collect(),
                invariants: self.invariants.to_vec(),
            });
        }
        Ok(Element(
            coords
                .iter()
                .zip(self.invariants.iter())
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        ))
    }

    pub(crate) fn reduce_vec(&self, coords: &[i64]) -> Element {
        Element(
            coords
                .iter()
                .zip(self.invariants.iter())
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        )
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.0.len() == self.rank() && x.0.iter().zip(self.invariants.iter()).all(|(c, d)| c < d)
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                coords: x.0.clone(),
                invariants: self.invariants.to_vec(),
            })
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element(
            x.0.iter()
                .zip(&y.0)
                .zip(self.invariants.iter())
                .map(|((a, b), d)| (a + b) % d)
                .collect(),
        )
    }

    pub fn neg(&self, x: &Element) -> Element {
        Element(x.0.iter().zip(self.invariants.iter()).map(|(a, d)| (d - a) % d).collect())
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &Element, k: i64) -> Element {
        Element(
            x.0.iter()
                .zip(self.invariants.iter())
                .map(|(&a, &d)| ((a as i128 * k as i128).rem_euclid(d as i128)) as u64)
                .collect(),
        )
    }

    /// Order of an element.
    pub fn element_order(&self, x: &Element) -> u64 {
        x.0.iter()
            .zip(self.invariants.iter())
            .map(|(&a, &d)| d / crate::qz::gcd(a, d))
            .fold(1, crate::qz::lcm)
    }

    /// Position of `x` in the lexicographic order of coordinate vectors.
    pub fn index_of(&self, x: &Element) -> usize {
        x.0.iter()
            .zip(self.invariants.iter())
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Element {
        let mut coords = vec![0u64; self.rank()];
        for (c, &d) in coords.iter_mut().zip(self.invariants.iter()).rev() {
            *c = (index % d as usize) as u64;
            index /= d as usize;
        }
        Element(coords)
    }

    /// All elements in lexicographic order of coordinates.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    /// `chi(a)` as an element of `Q/Z`: `sum_i chi_i a_i / d_i`.
    pub fn eval_character(&self, chi: &Element, a: &Element) -> Result<QmodZ> {
        if !self.contains(chi) || !self.contains(a) {
            return Err(Error::PairingMismatch(format!(
                "character {chi} and element {a} must both lie over {self}"
            )));
        }
        let n = self.exponent();
        let s: i128 = chi
            .0
            .iter()
            .zip(&a.0)
            .zip(self.invariants.iter())
            .map(|((&c, &x), &d)| (c as i128 * x as i128) * (n / d) as i128)
            .sum();
        Ok(QmodZ::new(s, n))
    }

    /// `self x other` as an abstract group.
    pub fn product(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut all: Vec<u64> = self.invariants.to_vec();
        all.extend_from_slice(&other.invariants);
        FinAbGroup::new(&all).expect("invariants are >= 2")
    }
}

/// `make_group` under its operational name.
pub fn make_group(invariants: &[u64]) -> Result<FinAbGroup> {
    FinAbGroup::new(invariants)
}

pub fn dual_group(a: &FinAbGroup) -> FinAbGroup {
    a.dual()
}

pub fn eval_character(a: &FinAbGroup, chi: &Element, x: &Element) -> Result<QmodZ> {
    a.eval_character(chi, x)
}

/// A coordinate vector. Which group it belongs to is tracked by the caller;
/// every group operation validates membership.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub(crate) Vec<u64>);

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub(crate) fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&c| c as i64).collect()
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
