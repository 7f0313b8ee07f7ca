//! Alternating `Q/Z`-valued forms on finite abelian groups.
//!
//! A form is stored through its Gram matrix on the canonical generators,
//! scaled by the group exponent `N`: entry `c` stands for `c/N`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::finabel::{
    quotient, subgroup_from_generators, subgroup_types, walk_subgroups, EnumLimit, Element, FinAbGroup,
    Subgroup,
};
use crate::intmat;
use crate::qz::QmodZ;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewForm {
    group: FinAbGroup,
    modulus: u64,
    /// k x k row-major, entries in `[0, modulus)`.
    gram: Vec<u64>,
}

impl SkewForm {
    /// Validates an explicit Gram matrix on the canonical generators.
    pub fn new(group: FinAbGroup, gram: &[Vec<QmodZ>]) -> Result<SkewForm> {
        let k = group.rank();
        if gram.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: gram.len() });
        }
        if let Some(row) = gram.iter().find(|r| r.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: row.len() });
        }
        let n = group.exponent();
        let inv = group.invariants();
        let mut scaled = vec![0u64; k * k];
        for i in 0..k {
            for j in 0..k {
                let g = gram[i][j];
                if i == j && !g.is_zero() {
                    return Err(Error::InvalidForm(format!("diagonal entry ({i},{i}) is {g}, not 0")));
                }
                if gram[j][i] != -g {
                    return Err(Error::InvalidForm(format!("entries ({i},{j}) and ({j},{i}) are not opposite")));
                }
                if !g.scale(inv[i] as i128).is_zero() {
                    return Err(Error::InvalidForm(format!(
                        "entry ({i},{j}) = {g} is not killed by the generator order {}",
                        inv[i]
                    )));
                }
                scaled[i * k + j] = g.numerator_over(n).ok_or_else(|| {
                    Error::InvalidForm(format!("entry ({i},{j}) = {g} has denominator not dividing {n}"))
                })?;
            }
        }
        Ok(SkewForm { group, modulus: n, gram: scaled })
    }

    pub fn zero(group: &FinAbGroup) -> SkewForm {
        let k = group.rank();
        SkewForm { group: group.clone(), modulus: group.exponent(), gram: vec![0; k * k] }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn gram(&self) -> Vec<Vec<QmodZ>> {
        let k = self.group.rank();
        (0..k)
            .map(|i| (0..k).map(|j| QmodZ::new(self.gram[i * k + j] as i128, self.modulus)).collect())
            .collect()
    }

    pub fn evaluate(&self, x: &Element, y: &Element) -> Result<QmodZ> {
        self.group.check(x)?;
        self.group.check(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    pub(crate) fn eval_unchecked(&self, x: &Element, y: &Element) -> QmodZ {
        QmodZ::new(self.eval_scaled(x, y) as i128, self.modulus)
    }

    /// `omega(x, y) * N` as a residue mod `N`.
    fn eval_scaled(&self, x: &Element, y: &Element) -> u64 {
        let k = self.group.rank();
        let n = self.modulus as u128;
        let (x, y) = (x.coords(), y.coords());
        let mut acc: u128 = 0;
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            let mut row: u128 = 0;
            for j in 0..k {
                row += y[j] as u128 * self.gram[i * k + j] as u128;
            }
            acc = (acc + x[i] as u128 * (row % n)) % n;
        }
        acc as u64
    }

    fn check_subgroup(&self, s: &Subgroup) -> Result<()> {
        if s.ambient() != &self.group {
            return Err(Error::AmbientMismatch(format!(
                "subgroup of {} used with a form on {}",
                s.ambient(),
                self.group
            )));
        }
        Ok(())
    }

    /// `{h : omega(h, -) = 0}`, by integer elimination on the scaled Gram matrix.
    pub fn radical(&self) -> Subgroup {
        let k = self.group.rank();
        let n = self.modulus as i64;
        let mut rows = Vec::with_capacity(2 * k);
        for i in 0..k {
            let mut r = vec![0i64; 2 * k];
            for j in 0..k {
                r[j] = self.gram[i * k + j] as i64;
            }
            r[k + i] = 1;
            rows.push(r);
        }
        for j in 0..k {
            let mut r = vec![0i64; 2 * k];
            r[j] = n;
            rows.push(r);
        }
        let (basis, pivots) = intmat::hnf(&rows, 2 * k);
        let kernel: Vec<Element> = basis
            .iter()
            .zip(&pivots)
            .filter(|(_, &p)| p >= k)
            .map(|(r, _)| self.group.reduce_vec(&r[k..]))
            .collect();
        subgroup_from_generators(&self.group, &kernel).expect("kernel vectors lie in the group")
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().order() == 1
    }

    /// The form pulled back along the adapted generators of `s`, as a form on
    /// `s.as_group()`.
    pub fn restrict(&self, s: &Subgroup) -> Result<SkewForm> {
        self.check_subgroup(s)?;
        let group = s.as_group();
        let gens = s.generators();
        let gram: Vec<Vec<QmodZ>> =
            gens.iter().map(|x| gens.iter().map(|y| self.eval_unchecked(x, y)).collect()).collect();
        SkewForm::new(group, &gram)
    }

    pub fn is_isotropic(&self, s: &Subgroup) -> Result<bool> {
        self.check_subgroup(s)?;
        let b = s.basis();
        Ok(b.iter().enumerate().all(|(i, x)| b[i + 1..].iter().all(|y| self.eval_scaled(x, y) == 0)))
    }

    pub fn is_lagrangian(&self, s: &Subgroup) -> Result<bool> {
        self.check_subgroup(s)?;
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        Ok(s.order() * s.order() == self.group.order() && self.is_isotropic(s)?)
    }

    /// Walks every isotropic subgroup.
    pub fn for_each_isotropic<F>(&self, limit: EnumLimit, mut f: F) -> Result<()>
    where
        F: FnMut(Subgroup) -> ControlFlow<()>,
    {
        self.isotropic_within(limit, None, &mut f)
    }

    fn isotropic_within<F>(&self, limit: EnumLimit, inside: Option<&Subgroup>, f: &mut F) -> Result<()>
    where
        F: FnMut(Subgroup) -> ControlFlow<()>,
    {
        limit.check(self.group.order())?;
        walk_subgroups(
            &self.group,
            |x, lower| {
                inside.is_none_or(|h| h.contains(x)) && lower.iter().all(|y| self.eval_scaled(x, y) == 0)
            },
            |h| f(Subgroup::from_hnf(self.group.clone(), h.to_vec())),
        );
        Ok(())
    }

    /// Largest isotropic subgroups: their order, the first one in canonical
    /// order, their isomorphism types and how many there are.
    pub fn max_isotropic(&self, limit: EnumLimit) -> Result<MaxIsotropic> {
        let mut best: Option<MaxIsotropic> = None;
        self.for_each_isotropic(limit, |s| {
            match &mut best {
                Some(b) if s.order() < b.order => {}
                Some(b) if s.order() == b.order => {
                    b.types.insert(s.invariants().to_vec());
                    b.count += 1;
                    if s < b.witness {
                        b.witness = s;
                    }
                }
                _ => {
                    let mut types = BTreeSet::new();
                    types.insert(s.invariants().to_vec());
                    best = Some(MaxIsotropic { order: s.order(), witness: s, types, count: 1 });
                }
            }
            ControlFlow::Continue(())
        })?;
        Ok(best.expect("the trivial subgroup is isotropic"))
    }

    /// Every Lagrangian subgroup, in canonical order.
    pub fn lagrangians(&self, limit: EnumLimit) -> Result<Vec<Subgroup>> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let target = self.group.order();
        let mut out = Vec::new();
        self.for_each_isotropic(limit, |s| {
            if s.order() * s.order() == target {
                out.push(s);
            }
            ControlFlow::Continue(())
        })?;
        out.sort();
        Ok(out)
    }

    /// `H / L` for a Lagrangian `L`; it always has the same type as `L`.
    pub fn quotient_by_lagrangian(&self, l: &Subgroup) -> Result<FinAbGroup> {
        if !self.is_lagrangian(l)? {
            return Err(Error::NotLagrangian);
        }
        let q = quotient(&self.group, l)?;
        if q.invariants() != l.invariants() {
            return Err(Error::Internal(format!(
                "quotient {:?} differs from Lagrangian type {:?}",
                q.invariants(),
                l.invariants()
            )));
        }
        Ok(q)
    }

    /// A rank-`2s` subgroup on which the form stays nondegenerate, built from
    /// `s` hyperbolic pairs. Only for nondegenerate forms on `(Z/p)^{2r}`.
    pub fn symplectic_submodule(&self, s: usize) -> Result<Subgroup> {
        let p = match self.group.invariants() {
            [] => 1,
            [d, rest @ ..] if rest.iter().all(|x| x == d) && crate::finabel::is_prime(*d) => *d,
            _ => {
                return Err(Error::Precondition(format!("{} is not elementary abelian", self.group)));
            }
        };
        let k = self.group.rank();
        if k % 2 == 1 || !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        if s > k / 2 {
            return Err(Error::Precondition(format!("s = {s} exceeds half the rank {}", k / 2)));
        }
        let b = |x: &[u64], y: &[u64]| -> u64 {
            let ex = self.group.element(x).expect("reduced");
            let ey = self.group.element(y).expect("reduced");
            self.eval_scaled(&ex, &ey)
        };
        let combine = |v: &[u64], c: u64, w: &[u64]| -> Vec<u64> {
            v.iter().zip(w).map(|(a, b)| (a + c * b) % p).collect()
        };
        let mut pool: Vec<Vec<u64>> = (0..k)
            .map(|i| {
                let mut v = vec![0u64; k];
                v[i] = 1;
                v
            })
            .collect();
        let mut gens = Vec::with_capacity(2 * s);
        for _ in 0..s {
            let e = pool.iter().find(|v| v.iter().any(|&c| c != 0)).cloned().ok_or_else(|| {
                Error::Internal("ran out of vectors in the orthogonal complement".into())
            })?;
            let f0 = pool
                .iter()
                .find(|v| b(&e, v) != 0)
                .cloned()
                .ok_or_else(|| Error::Internal("no hyperbolic partner found".into()))?;
            // scale so that omega(e, f) = 1/p
            let c = b(&e, &f0);
            let inv = (1..p).find(|t| t * c % p == 1).expect("p is prime");
            let f: Vec<u64> = f0.iter().map(|x| x * inv % p).collect();
            for v in pool.iter_mut() {
                let (ve, vf) = (b(v, &e), b(v, &f));
                let t = combine(v, p - vf, &e);
                *v = combine(&t, ve, &f);
            }
            gens.push(self.group.element(&e)?);
            gens.push(self.group.element(&f)?);
        }
        subgroup_from_generators(&self.group, &gens)
    }

    /// Transfers an isotropic `i` inside `h1` to an isotropic subgroup of the
    /// whole module whose type embeds in `h1 / i` and with `|h1|` dividing
    /// `n |I1|`, where `|H| = n^2`. Choices are always the first candidate in
    /// canonical order.
    pub fn isotropic_transfer(&self, h1: &Subgroup, i: &Subgroup, limit: EnumLimit) -> Result<IsotropicTransfer> {
        self.check_subgroup(h1)?;
        self.check_subgroup(i)?;
        limit.check(self.group.order())?;
        if !i.is_subgroup_of(h1) {
            return Err(Error::Precondition("I is not contained in H1".into()));
        }
        if !self.is_isotropic(i)? {
            return Err(Error::NotIsotropic);
        }
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let order = self.group.order();
        let n = (1..=order).find(|n| n * n >= order).unwrap_or(1);
        if n * n != order {
            return Err(Error::Precondition(format!("|H| = {order} is not a square")));
        }

        let mut i_max: Option<Subgroup> = None;
        self.isotropic_within(limit, Some(h1), &mut |s: Subgroup| {
            if i.is_subgroup_of(&s) {
                let better = match &i_max {
                    None => true,
                    Some(b) => s.order() > b.order() || (s.order() == b.order() && s < *b),
                };
                if better {
                    i_max = Some(s);
                }
            }
            ControlFlow::Continue(())
        })?;
        let i_max = i_max.expect("I itself qualifies");

        let mut lagrangian: Option<Subgroup> = None;
        self.isotropic_within(limit, None, &mut |s: Subgroup| {
            if s.order() == n && i_max.is_subgroup_of(&s) && lagrangian.as_ref().is_none_or(|b| s < *b) {
                lagrangian = Some(s);
            }
            ControlFlow::Continue(())
        })?;
        let lagrangian =
            lagrangian.ok_or_else(|| Error::Internal("no Lagrangian contains the maximal isotropic".into()))?;
        if h1.intersection(&lagrangian)? != i_max {
            return Err(Error::Internal("H1 meets the Lagrangian beyond the maximal isotropic".into()));
        }

        let quotient_type = h1.quotient_invariants(&i_max)?;
        let mut i1: Option<Subgroup> = None;
        walk_subgroups(
            &self.group,
            |x, _| lagrangian.contains(x),
            |h| {
                let s = Subgroup::from_hnf(self.group.clone(), h.to_vec());
                if s.invariants() == quotient_type.as_slice() && i1.as_ref().is_none_or(|b| s < *b) {
                    i1 = Some(s);
                }
                ControlFlow::Continue(())
            },
        );
        let i1 = i1.ok_or_else(|| Error::Internal("the Lagrangian has no subgroup of the quotient type".into()))?;

        let target = FinAbGroup::from_chain(h1.quotient_invariants(i)?);
        let fits = subgroup_types(&target, limit)?;
        let mut minimal_order = i1.order();
        self.isotropic_within(limit, None, &mut |s: Subgroup| {
            if s.order() < minimal_order && (n * s.order()).is_multiple_of(h1.order()) && fits.contains_key(s.invariants()) {
                minimal_order = s.order();
            }
            ControlFlow::Continue(())
        })?;

        Ok(IsotropicTransfer { i1, i_max, lagrangian, quotient_type, minimal_order })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxIsotropic {
    pub order: u64,
    pub witness: Subgroup,
    pub types: BTreeSet<Vec<u64>>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicTransfer {
    pub i1: Subgroup,
    /// First largest isotropic `J` with `I <= J <= H1`.
    pub i_max: Subgroup,
    /// First Lagrangian containing `i_max`.
    pub lagrangian: Subgroup,
    /// Type of `H1 / i_max`, which is also the type of `i1`.
    pub quotient_type: Vec<u64>,
    /// Smallest order of any isotropic subgroup meeting both conclusions.
    pub minimal_order: u64,
}

/// The module `A x A*` with `omega((a, x), (b, y)) = x(b) - y(a)`.
///
/// Coordinates interleave: `(a_1, x_1, a_2, x_2, ...)`, so the invariants are
/// `[d_1, d_1, d_2, d_2, ...]` and need no reordering.
pub fn standard_module(a: &FinAbGroup) -> SkewForm {
    let inv: Vec<u64> = a.invariants().iter().flat_map(|&d| [d, d]).collect();
    let group = FinAbGroup::from_chain(inv);
    let k = group.rank();
    let n = group.exponent();
    let mut gram = vec![0u64; k * k];
    for (i, &d) in a.invariants().iter().enumerate() {
        let unit = n / d;
        gram[(2 * i) * k + 2 * i + 1] = n - unit;
        gram[(2 * i + 1) * k + 2 * i] = unit;
    }
    SkewForm { group, modulus: n, gram }
}

/// The element `(a, chi)` of the standard module of `a_group`.
pub fn standard_pair(a_group: &FinAbGroup, a: &Element, chi: &Element) -> Result<Element> {
    a_group.check(a)?;
    a_group.check(chi)?;
    let coords: Vec<u64> = a.coords().iter().zip(chi.coords()).flat_map(|(&x, &c)| [x, c]).collect();
    let group = FinAbGroup::from_chain(a_group.invariants().iter().flat_map(|&d| [d, d]).collect());
    group.element(&coords)
}

/// `A x {1}` inside the standard module.
pub fn primal_subgroup(a_group: &FinAbGroup) -> Subgroup {
    let w = standard_module(a_group);
    let k = a_group.rank();
    let gens: Vec<Element> = (0..k)
        .map(|i| {
            let mut c = vec![0u64; 2 * k];
            c[2 * i] = 1;
            w.group().element(&c).expect("unit vector")
        })
        .collect();
    subgroup_from_generators(w.group(), &gens).expect("generators lie in the module")
}
