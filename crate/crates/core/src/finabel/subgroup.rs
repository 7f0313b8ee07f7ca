//! Subgroups as lattices `D Z^k <= L <= Z^k`, where `D = diag(d_1, ..., d_k)`.
//!
//! The canonical representative of a subgroup is the row Hermite normal form
//! of its lattice: upper triangular, positive pivots, entries above each pivot
//! reduced into `[0, pivot)`. Two subgroups are equal iff their bases are.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Element, FinAbGroup};
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    ambient: FinAbGroup,
    order: u64,
    /// k x k row-major upper-triangular Hermite basis of the lattice.
    hnf: Vec<i64>,
    sub_invariants: Vec<u64>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("ambient", &self.ambient)
            .field("order", &self.order)
            .field("invariants", &self.sub_invariants)
            .field("basis", &self.basis())
            .finish()
    }
}

/// Coordinates `m` with `m * outer = target`, for an upper-triangular `outer`
/// with positive diagonal. `None` if `target` is not in the row lattice.
fn solve_upper(outer: &[i64], k: usize, target: &[i64]) -> Option<Vec<i64>> {
    let mut m = vec![0i64; k];
    for j in 0..k {
        let mut rest = target[j];
        for l in 0..j {
            rest -= m[l] * outer[l * k + j];
        }
        let p = outer[j * k + j];
        if rest % p != 0 {
            return None;
        }
        m[j] = rest / p;
    }
    Some(m)
}

/// Invariant factors of `L_outer / L_inner` for full-rank triangular bases.
fn relative_smith(inner: &[i64], outer: &[i64], k: usize) -> Option<(Mat, intmat::Smith)> {
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        rows.push(solve_upper(outer, k, &inner[i * k..(i + 1) * k])?);
    }
    let m = Mat::from_rows(&rows, k);
    let s = intmat::smith(&m);
    Some((m, s))
}

fn nontrivial(diag: &[i64]) -> Vec<u64> {
    diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect()
}

fn relation_diag(ambient: &FinAbGroup) -> Vec<i64> {
    let k = ambient.rank();
    let mut d = vec![0i64; k * k];
    for (i, &di) in ambient.invariants().iter().enumerate() {
        d[i * k + i] = di as i64;
    }
    d
}

impl Subgroup {
    /// Builds the subgroup from a reduced Hermite basis that is known to
    /// contain `D Z^k`.
    pub(crate) fn from_hnf(ambient: FinAbGroup, hnf: Vec<i64>) -> Subgroup {
        let k = ambient.rank();
        debug_assert_eq!(hnf.len(), k * k);
        let index: u64 = (0..k).map(|i| hnf[i * k + i] as u64).product();
        let order = ambient.order() / index;
        let d = relation_diag(&ambient);
        let (_, s) = relative_smith(&d, &hnf, k).expect("D Z^k lies in every subgroup lattice");
        let sub_invariants = nontrivial(&s.diag);
        debug_assert_eq!(sub_invariants.iter().product::<u64>(), order);
        Subgroup { ambient, order, hnf, sub_invariants }
    }

    pub fn trivial(ambient: &FinAbGroup) -> Subgroup {
        Subgroup::from_hnf(ambient.clone(), relation_diag(ambient))
    }

    pub fn whole(ambient: &FinAbGroup) -> Subgroup {
        let k = ambient.rank();
        Subgroup::from_hnf(ambient.clone(), Mat::identity(k).data)
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Invariant factors of the subgroup as an abstract group.
    pub fn invariants(&self) -> &[u64] {
        &self.sub_invariants
    }

    /// The subgroup as an abstract group.
    pub fn as_group(&self) -> FinAbGroup {
        FinAbGroup::from_chain(self.sub_invariants.clone())
    }

    /// Raw canonical basis: the Hermite rows, row-major `k x k`.
    pub fn hnf(&self) -> &[i64] {
        &self.hnf
    }

    pub fn hnf_rows(&self) -> Vec<Vec<i64>> {
        let k = self.ambient.rank();
        (0..k).map(|i| self.hnf[i * k..(i + 1) * k].to_vec()).collect()
    }

    /// The canonical basis rows reduced into the ambient group, zero rows
    /// removed. Generates the subgroup.
    pub fn basis(&self) -> Vec<Element> {
        let k = self.ambient.rank();
        (0..k)
            .map(|i| self.ambient.reduce_vec(&self.hnf[i * k..(i + 1) * k]))
            .filter(|e| !e.is_zero())
            .collect()
    }

    /// Generators adapted to the invariant factors: the `i`-th one has order
    /// `invariants()[i]` and the subgroup is their internal direct sum.
    pub fn generators(&self) -> Vec<Element> {
        let k = self.ambient.rank();
        let d = relation_diag(&self.ambient);
        let (_, s) = relative_smith(&d, &self.hnf, k).expect("subgroup lattice contains D");
        let h = Mat { rows: k, cols: k, data: self.hnf.clone() };
        let mut gens = Vec::new();
        for (i, &di) in s.diag.iter().enumerate() {
            if di > 1 {
                let y = intmat::vec_mul(s.v_inv.row(i), &h);
                gens.push(self.ambient.reduce_vec(&y));
            }
        }
        gens
    }

    pub fn contains(&self, x: &Element) -> bool {
        if !self.ambient.contains(x) {
            return false;
        }
        solve_upper(&self.hnf, self.ambient.rank(), &x.to_i64()).is_some()
    }

    /// Every element, enumerated through the adapted generators.
    pub fn elements(&self) -> Vec<Element> {
        let gens = self.generators();
        let mut out = vec![self.ambient.zero()];
        for (g, &n) in gens.iter().zip(&self.sub_invariants) {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            let mut step = self.ambient.zero();
            for _ in 0..n {
                next.extend(out.iter().map(|x| self.ambient.add(x, &step)));
                step = self.ambient.add(&step, g);
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        let k = self.ambient.rank();
        (0..k).all(|i| solve_upper(&other.hnf, k, &self.hnf[i * k..(i + 1) * k]).is_some())
    }

    /// Invariant factors of `self / inner`; requires `inner <= self`.
    pub fn quotient_invariants(&self, inner: &Subgroup) -> Result<Vec<u64>> {
        if !inner.is_subgroup_of(self) {
            return Err(Error::AmbientMismatch(format!(
                "{:?} is not contained in {:?}",
                inner.sub_invariants, self.sub_invariants
            )));
        }
        let (_, s) = relative_smith(&inner.hnf, &self.hnf, self.ambient.rank())
            .expect("containment checked above");
        Ok(nontrivial(&s.diag))
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        let mut gens = self.basis();
        gens.extend(other.basis());
        subgroup_from_generators(&self.ambient, &gens)
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch("subgroups of different groups".into()));
        }
        let (small, big) = if self.order <= other.order { (self, other) } else { (other, self) };
        let common: Vec<Element> = small.elements().into_iter().filter(|x| big.contains(x)).collect();
        subgroup_from_generators(&self.ambient, &common)
    }
}

/// The subgroup generated by `gens`, in canonical form. No generators gives
/// the trivial subgroup.
pub fn subgroup_from_generators(ambient: &FinAbGroup, gens: &[Element]) -> Result<Subgroup> {
    let k = ambient.rank();
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(gens.len() + k);
    for (i, &d) in ambient.invariants().iter().enumerate() {
        let mut r = vec![0i64; k];
        r[i] = d as i64;
        rows.push(r);
    }
    for g in gens {
        ambient.check(g)?;
        rows.push(g.to_i64());
    }
    let (basis, pivots) = intmat::hnf(&rows, k);
    if pivots.len() != k {
        return Err(Error::Internal("subgroup lattice lost full rank".into()));
    }
    let hnf: Vec<i64> = basis.into_iter().flatten().collect();
    Ok(Subgroup::from_hnf(ambient.clone(), hnf))
}

/// Invariant factors of `A / S`.
pub fn quotient(ambient: &FinAbGroup, s: &Subgroup) -> Result<FinAbGroup> {
    if s.ambient() != ambient {
        return Err(Error::AmbientMismatch(format!(
            "subgroup of {} used with {}",
            s.ambient(),
            ambient
        )));
    }
    let whole = Subgroup::whole(ambient);
    Ok(FinAbGroup::from_chain(whole.quotient_invariants(s)?))
}
