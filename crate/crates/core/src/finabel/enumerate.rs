//! Exhaustive subgroup enumeration.
//!
//! Rather than closing generator sets and deduplicating, the walker builds
//! every reduced Hermite basis directly, last row first. Row `i` is
//! `(0, .., 0, h, a_{i+1}, .., a_{k-1})` with `h | d_i` and `0 <= a_j < h_j`;
//! it is admissible iff `(d_i / h) * row - d_i e_i` already lies in the
//! lattice spanned by the rows below, which is exactly the condition for the
//! finished lattice to contain `d_i e_i`. Each subgroup is produced once.
//!
//! The rows below row `i` always generate a subgroup of the final one, so any
//! property inherited by subgroups (isotropy, containment in a fixed
//! subgroup) can be used to prune at every level.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::{EnumLimit, Element, FinAbGroup, Subgroup};
use crate::error::Result;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Odometer step, last coordinate fastest. False once it wraps around.
pub(crate) fn advance(digits: &mut [i64], bounds: &[i64]) -> bool {
    for pos in (0..digits.len()).rev() {
        digits[pos] += 1;
        if digits[pos] < bounds[pos] {
            return true;
        }
        digits[pos] = 0;
    }
    false
}

struct Walk<'a, A, V> {
    ambient: &'a FinAbGroup,
    k: usize,
    hnf: Vec<i64>,
    lower: Vec<Element>,
    accept: A,
    visit: V,
}

impl<A, V> Walk<'_, A, V>
where
    A: FnMut(&Element, &[Element]) -> bool,
    V: FnMut(&[i64]) -> ControlFlow<()>,
{
    fn tail_in_lattice(&self, i: usize, scale: i64, tail: &[i64]) -> bool {
        let k = self.k;
        let mut v: Vec<i64> = tail.iter().map(|&t| t * scale).collect();
        for j in i + 1..k {
            let p = self.hnf[j * k + j];
            let x = v[j - i - 1];
            if x % p != 0 {
                return false;
            }
            let q = x / p;
            if q != 0 {
                for l in j..k {
                    v[l - i - 1] -= q * self.hnf[j * k + l];
                }
            }
        }
        true
    }

    fn level(&mut self, i: usize) -> ControlFlow<()> {
        let k = self.k;
        let d = self.ambient.invariants()[i];
        let bounds: Vec<i64> = (i + 1..k).map(|j| self.hnf[j * k + j]).collect();
        for h in divisors(d) {
            let scale = (d / h) as i64;
            let mut tail = vec![0i64; k - i - 1];
            loop {
                if self.tail_in_lattice(i, scale, &tail) {
                    let mut row = vec![0i64; k];
                    row[i] = h as i64;
                    row[i + 1..].copy_from_slice(&tail);
                    let elem = self.ambient.reduce_vec(&row);
                    if (self.accept)(&elem, &self.lower) {
                        self.hnf[i * k..(i + 1) * k].copy_from_slice(&row);
                        self.lower.push(elem);
                        let flow = if i == 0 { (self.visit)(&self.hnf) } else { self.level(i - 1) };
                        self.lower.pop();
                        flow?;
                    }
                }
                if !advance(&mut tail, &bounds) {
                    break;
                }
            }
        }
        ControlFlow::Continue(())
    }
}

/// Walks the Hermite bases of all subgroups passing `accept`, which sees each
/// candidate row (reduced into the group) and the rows already fixed below it.
pub(crate) fn walk_subgroups<A, V>(ambient: &FinAbGroup, accept: A, mut visit: V)
where
    A: FnMut(&Element, &[Element]) -> bool,
    V: FnMut(&[i64]) -> ControlFlow<()>,
{
    let k = ambient.rank();
    if k == 0 {
        let _ = visit(&[]);
        return;
    }
    let mut w = Walk { ambient, k, hnf: vec![0; k * k], lower: Vec::new(), accept, visit };
    let _ = w.level(k - 1);
}

/// Calls `f` on every subgroup of `a` (in walk order, not sorted).
pub fn for_each_subgroup<F>(a: &FinAbGroup, limit: EnumLimit, mut f: F) -> Result<()>
where
    F: FnMut(Subgroup) -> ControlFlow<()>,
{
    limit.check(a.order())?;
    walk_subgroups(a, |_, _| true, |h| f(Subgroup::from_hnf(a.clone(), h.to_vec())));
    Ok(())
}

/// All subgroups in canonical order: by order, then by Hermite basis.
pub fn enumerate_subgroups(a: &FinAbGroup, limit: EnumLimit) -> Result<Vec<Subgroup>> {
    let mut out = Vec::new();
    for_each_subgroup(a, limit, |s| {
        out.push(s);
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// How many subgroups of each isomorphism type `a` has.
pub fn subgroup_types(a: &FinAbGroup, limit: EnumLimit) -> Result<BTreeMap<Vec<u64>, u64>> {
    let mut counts = BTreeMap::new();
    for_each_subgroup(a, limit, |s| {
        *counts.entry(s.invariants().to_vec()).or_insert(0) += 1;
        ControlFlow::Continue(())
    })?;
    Ok(counts)
}

/// Whether `a` is isomorphic to a subgroup of `b` (equivalently, to a
/// quotient of `b`).
pub fn embeds_into(a: &FinAbGroup, b: &FinAbGroup, limit: EnumLimit) -> Result<bool> {
    limit.check(b.order())?;
    if !b.order().is_multiple_of(a.order()) || a.rank() > b.rank() {
        return Ok(false);
    }
    let mut found = false;
    for_each_subgroup(b, limit, |s| {
        if s.invariants() == a.invariants() {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}
