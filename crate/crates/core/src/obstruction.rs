//! Lower bounds on splitting groups and splitting degrees.
//!
//! Everything here reduces to counting: orders of isotropic subgroups of
//! symplectic `p`-modules, and the smallest partitions `n_1 >= n_2 >= ...`
//! satisfying `n_v + n_{v+1} >= [r/v] - e`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::finabel::{factorize, is_prime, EnumLimit};
use crate::qzforms::SkewForm;

/// Largest `r` accepted by [`min_splitting_exponent`].
pub const MAX_SEARCH_R: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ObstructionQuery {
    pub p: u64,
    pub r: u32,
    pub e: u32,
}

impl ObstructionQuery {
    pub fn new(p: u64, r: u32, e: u32) -> Result<ObstructionQuery> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::Precondition("r must be at least 1".into()));
        }
        Ok(ObstructionQuery { p, r, e })
    }
}

/// Exponents of `Z/p^{n_1} x Z/p^{n_2} x ...`, nonincreasing and positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartitionCandidate(Vec<u32>);

impl PartitionCandidate {
    pub fn new(parts: Vec<u32>) -> Result<PartitionCandidate> {
        if parts.contains(&0) {
            return Err(Error::Precondition("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition("partition parts must be nonincreasing".into()));
        }
        Ok(PartitionCandidate(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `n_v` with 1-based `v`, zero past the end.
    fn n(&self, v: usize) -> u32 {
        self.0.get(v - 1).copied().unwrap_or(0)
    }
}

impl fmt::Display for PartitionCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(")")
    }
}

fn checked_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k).ok_or_else(|| Error::Precondition(format!("{p}^{k} does not fit in 64 bits")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm13Bound {
    /// `max(0, 2r - 2e - 2)`
    pub exponent: u32,
    pub bound: u64,
    /// `r >= 2e + 3`: the bound then exceeds what a crossed product allows.
    pub noncrossed: bool,
}

/// `p^{max(0, 2r-2e-2)}` divides the order of every splitting group. Needs
/// `e <= r - 1`.
pub fn thm13_bound(q: &ObstructionQuery) -> Result<Thm13Bound> {
    if q.e + 1 > q.r {
        return Err(Error::HypothesisViolation(format!("e = {} exceeds r - 1 = {}", q.e, q.r - 1)));
    }
    let exponent = (2 * q.r).saturating_sub(2 * q.e + 2);
    Ok(Thm13Bound { exponent, bound: checked_pow(q.p, exponent)?, noncrossed: q.r >= 2 * q.e + 3 })
}

/// Smallest nonnegative integer `>= x / 2`.
fn half_ceil_nonneg(x: i64) -> u32 {
    if x <= 0 {
        0
    } else {
        ((x + 1) / 2) as u32
    }
}

/// `r + sum_{v >= 3} {[r/v] / 2}`.
pub fn f(r: u32) -> u32 {
    f_e(r, 0)
}

/// `(r - e) + sum_{v >= 3} {([r/v] - e) / 2}`, every term clamped at 0.
pub fn f_e(r: u32, e: u32) -> u32 {
    let lead = r.saturating_sub(e);
    lead + (3..=r).map(|v| half_ceil_nonneg((r / v) as i64 - e as i64)).sum::<u32>()
}

/// `c_v = max(0, [r/v] - e)` for `v = 1..=r`, 1-based (index 0 unused).
fn constraints(r: u32, e: u32) -> Vec<u32> {
    let mut c = vec![0u32; r as usize + 2];
    for v in 1..=r {
        c[v as usize] = (r / v).saturating_sub(e);
    }
    c
}

/// `n_v + n_{v+1} >= max(0, [r/v] - e)` for every `v >= 1`.
pub fn ta_feasible(q: &ObstructionQuery, c: &PartitionCandidate) -> bool {
    let cons = constraints(q.r, q.e);
    (1..=q.r as usize).all(|v| c.n(v) + c.n(v + 1) >= cons[v])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingExponent {
    /// Minimal `sum n_i` over feasible partitions.
    pub total: u32,
    /// Lexicographically least feasible partition with that total.
    pub witness: PartitionCandidate,
    /// `f_e(r)`, reported next to the minimum so any gap is visible.
    pub f_e: u32,
}

/// Exact minimum of `sum n_i` subject to [`ta_feasible`].
///
/// `cost[v][x]` is the least possible `n_{v+1} + n_{v+2} + ...` once
/// `n_v = x`; the witness is then read off greedily, smallest part first.
pub fn min_splitting_exponent(q: &ObstructionQuery) -> Result<SplittingExponent> {
    if q.r > MAX_SEARCH_R {
        return Err(Error::SearchBound { r: q.r, max: MAX_SEARCH_R });
    }
    let r = q.r as usize;
    let c = constraints(q.r, q.e);
    let max_part = c[1].max(1) as usize;
    const INF: u32 = u32::MAX / 2;
    // tail_free[v]: every constraint from v on is vacuous
    let mut tail_free = vec![true; r + 2];
    for v in (1..=r).rev() {
        tail_free[v] = tail_free[v + 1] && c[v] == 0;
    }
    let mut cost = vec![vec![INF; max_part + 1]; r + 2];
    for x in 0..=max_part {
        cost[r + 1][x] = 0;
    }
    for v in (1..=r).rev() {
        for x in 0..=max_part {
            let mut best = INF;
            if x == 0 {
                // the sequence has ended
                best = if tail_free[v] { 0 } else { INF };
            } else {
                for y in 0..=x {
                    if x as u32 + y as u32 >= c[v] {
                        let tail = if y == 0 {
                            if tail_free[v + 1] { 0 } else { INF }
                        } else {
                            cost[v + 1][y]
                        };
                        best = best.min(y as u32 + tail);
                    }
                }
            }
            cost[v][x] = best;
        }
    }
    let total = if tail_free[1] {
        0
    } else {
        (1..=max_part).map(|x| x as u32 + cost[1][x]).min().unwrap_or(INF)
    };
    if total >= INF {
        return Err(Error::Internal("no feasible partition".into()));
    }

    let mut parts = Vec::new();
    if total > 0 {
        let mut x = (1..=max_part).find(|&x| x as u32 + cost[1][x] == total).expect("minimum is attained");
        parts.push(x as u32);
        let mut spent = x as u32;
        let mut v = 1;
        while spent < total {
            let y = (1..=x)
                .find(|&y| x + y >= c[v] as usize && spent + y as u32 + cost[v + 1][y] == total)
                .expect("minimum is attained");
            parts.push(y as u32);
            spent += y as u32;
            x = y;
            v += 1;
        }
    }
    let witness = PartitionCandidate(parts);
    let bound = f_e(q.r, q.e);
    if !ta_feasible(q, &witness) || total < bound {
        return Err(Error::Internal(format!("search result {witness} contradicts the divisibility bound {bound}")));
    }
    Ok(SplittingExponent { total, witness, f_e: bound })
}

/// The prime of a `p`-group of order > 1.
fn prime_of(order: u64) -> Result<u64> {
    match factorize(order).as_slice() {
        [(p, _)] => Ok(*p),
        _ => Err(Error::NotPGroup(order)),
    }
}

fn log_p(p: u64, mut n: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

/// `m` with `m^2 = |H / rad|`; the index of any splitting subgroup is a
/// multiple of it.
pub fn index_divisor(w: &SkewForm) -> Result<u64> {
    let quotient = w.group().order() / w.radical().order();
    let m = (0..=quotient).find(|m| m * m >= quotient).unwrap_or(0);
    if m * m != quotient {
        return Err(Error::Internal(format!("|H/rad| = {quotient} is not a square")));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicBound {
    pub min_order: u64,
    /// Isomorphism types of the isotropic subgroups of order `min_order`.
    pub types: BTreeSet<Vec<u64>>,
}

/// `(p, r)` with `|H| = p^{2r}` for a nondegenerate form.
fn symplectic_shape(w: &SkewForm) -> Result<(u64, u32)> {
    if !w.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let order = w.group().order();
    if order == 1 {
        return Err(Error::Precondition("the module is trivial".into()));
    }
    let p = prime_of(order)?;
    Ok((p, log_p(p, order) / 2))
}

/// Types of isotropic subgroups of order exactly `target`.
fn isotropic_types(w: &SkewForm, target: u64, limit: EnumLimit) -> Result<BTreeSet<Vec<u64>>> {
    let mut types = BTreeSet::new();
    w.for_each_isotropic(limit, |s| {
        if s.order() == target {
            types.insert(s.invariants().to_vec());
        }
        ControlFlow::Continue(())
    })?;
    Ok(types)
}

/// A splitting group must contain an isotropic subgroup of order `p^{r-e}`;
/// lists the shapes such a subgroup can have.
pub fn splitting_group_isotropic_bound(w: &SkewForm, e: u32, limit: EnumLimit) -> Result<IsotropicBound> {
    let (p, r) = symplectic_shape(w)?;
    if e > r {
        return Err(Error::HypothesisViolation(format!("e = {e} exceeds r = {r}")));
    }
    let min_order = checked_pow(p, r - e)?;
    let types = isotropic_types(w, min_order, limit)?;
    Ok(IsotropicBound { min_order, types })
}

/// Exponent partition of a `p`-group type, largest first.
fn exponents(p: u64, inv: &[u64]) -> Vec<u32> {
    let mut e: Vec<u32> = inv.iter().map(|&d| log_p(p, d)).collect();
    e.sort_unstable_by(|a, b| b.cmp(a));
    e
}

/// Order of the largest group embedding in both types.
fn meet_order(p: u64, t1: &[u64], t2: &[u64]) -> u64 {
    let (e1, e2) = (exponents(p, t1), exponents(p, t2));
    let k: u32 = e1.iter().zip(&e2).map(|(a, b)| *a.min(b)).sum();
    p.pow(k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonBound {
    /// `min |I_1| |I_2| / |meet|` over the admissible type pairs.
    pub bound: u64,
    /// The pair attaining it.
    pub witness: (Vec<u64>, Vec<u64>),
    /// `p^{min rank * min exponent}`, which always caps the meet.
    pub coarse_cap: u64,
    pub types1: BTreeSet<Vec<u64>>,
    pub types2: BTreeSet<Vec<u64>>,
}

/// Smallest possible `|<I_1, I_2>|` in an abelian `p`-group containing an
/// isotropic subgroup of order `p^{r_i - e}` for each module.
pub fn comparison_bound(w1: &SkewForm, w2: &SkewForm, e: u32, limit: EnumLimit) -> Result<ComparisonBound> {
    let b1 = splitting_group_isotropic_bound(w1, e, limit)?;
    let b2 = splitting_group_isotropic_bound(w2, e, limit)?;
    let p = prime_of(w1.group().order())?;
    if prime_of(w2.group().order())? != p {
        return Err(Error::Precondition("the two modules have different primes".into()));
    }
    let mut best: Option<(u64, Vec<u64>, Vec<u64>)> = None;
    let mut coarse_cap = 0;
    for t1 in &b1.types {
        for t2 in &b2.types {
            let meet = meet_order(p, t1, t2);
            let rank = t1.len().min(t2.len()) as u32;
            let exp = exponents(p, t1).first().copied().unwrap_or(0).min(exponents(p, t2).first().copied().unwrap_or(0));
            let cap = checked_pow(p, rank * exp)?;
            if meet > cap {
                return Err(Error::Internal(format!("meet {meet} exceeds the coarse cap {cap}")));
            }
            coarse_cap = coarse_cap.max(cap);
            let size1: u64 = t1.iter().product();
            let size2: u64 = t2.iter().product();
            let bound = size1 * size2 / meet;
            if best.as_ref().is_none_or(|(b, _, _)| bound < *b) {
                best = Some((bound, t1.clone(), t2.clone()));
            }
        }
    }
    let (bound, a, b) = best.ok_or_else(|| Error::Internal("no isotropic subgroups of the required order".into()))?;
    Ok(ComparisonBound { bound, witness: (a, b), coarse_cap, types1: b1.types, types2: b2.types })
}
