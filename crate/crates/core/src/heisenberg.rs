//! Monomial matrices indexed by a finite abelian group and the embedding of
//! `A x A*` into `PGL_n`, `n = |A|`.
//!
//! Roots of unity are exponents mod `N = exp(A)`: the residue `c` stands for
//! `exp(2 pi i c / N)`. Basis vectors are indexed by the elements of `A` in
//! lexicographic order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::finabel::{factorize, EnumLimit, Element, FinAbGroup};
use crate::intmat::{self, Mat};
use crate::qz::QmodZ;
use crate::qzforms::SkewForm;

/// `M e_b = zeta^{diag[b]} e_{perm[b]}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialMatrix {
    group: FinAbGroup,
    modulus: u64,
    perm: Vec<u32>,
    diag: Vec<u64>,
}

impl MonomialMatrix {
    pub fn identity(a: &FinAbGroup) -> MonomialMatrix {
        MonomialMatrix::scalar(a, 0)
    }

    /// `zeta^c` times the identity.
    pub fn scalar(a: &FinAbGroup, c: u64) -> MonomialMatrix {
        let n = a.order() as usize;
        let modulus = a.exponent();
        MonomialMatrix { group: a.clone(), modulus, perm: (0..n as u32).collect(), diag: vec![c % modulus; n] }
    }

    /// Checks that `perm` is a bijection of the index set and every exponent
    /// is below `modulus`, which must be the exponent of `a`.
    pub fn from_parts(a: &FinAbGroup, perm: Vec<u32>, diag: Vec<u64>, modulus: u64) -> Result<MonomialMatrix> {
        let n = a.order() as usize;
        if modulus != a.exponent() {
            return Err(Error::Precondition(format!(
                "modulus {modulus} differs from the group exponent {}",
                a.exponent()
            )));
        }
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: perm.len() });
        }
        if diag.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: diag.len() });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            let p = p as usize;
            if p >= n || seen[p] {
                return Err(Error::Precondition("perm is not a permutation".into()));
            }
            seen[p] = true;
        }
        if let Some(&d) = diag.iter().find(|&&d| d >= modulus) {
            return Err(Error::Precondition(format!("exponent {d} is not reduced mod {modulus}")));
        }
        Ok(MonomialMatrix { group: a.clone(), modulus, perm, diag })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn diag(&self) -> &[u64] {
        &self.diag
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Exponent of the `(row, col)` entry, `None` where the entry is zero.
    pub fn entry(&self, row: usize, col: usize) -> Option<u64> {
        (self.perm[col] as usize == row).then(|| self.diag[col])
    }

    fn same_group(&self, other: &MonomialMatrix) -> Result<()> {
        if self.group != other.group {
            return Err(Error::AmbientMismatch(format!(
                "matrices indexed by {} and {}",
                self.group, other.group
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &MonomialMatrix) -> Result<MonomialMatrix> {
        self.same_group(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, y: &MonomialMatrix) -> MonomialMatrix {
        let n = self.modulus;
        let perm = y.perm.iter().map(|&p| self.perm[p as usize]).collect();
        let diag = y.diag.iter().zip(&y.perm).map(|(&d, &p)| (d + self.diag[p as usize]) % n).collect();
        MonomialMatrix { group: self.group.clone(), modulus: n, perm, diag }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let n = self.modulus;
        let mut perm = vec![0u32; self.dim()];
        let mut diag = vec![0u64; self.dim()];
        for (b, (&p, &d)) in self.perm.iter().zip(&self.diag).enumerate() {
            perm[p as usize] = b as u32;
            diag[p as usize] = (n - d) % n;
        }
        MonomialMatrix { group: self.group.clone(), modulus: n, perm, diag }
    }

    pub fn pow(&self, k: i64) -> MonomialMatrix {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = MonomialMatrix::identity(&self.group);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        acc
    }

    pub fn is_scalar(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i) && self.diag.windows(2).all(|w| w[0] == w[1])
    }

    /// The scalar `c` of `zeta^c Id`, as `c / N` in `Q/Z`.
    pub fn scalar_exponent(&self) -> Result<QmodZ> {
        if !self.is_scalar() {
            return Err(Error::NotScalar);
        }
        Ok(QmodZ::new(self.diag.first().copied().unwrap_or(0) as i128, self.modulus))
    }

    /// Adds `c` to every exponent, i.e. multiplies by the scalar `zeta^c`.
    pub fn twist(&self, c: u64) -> MonomialMatrix {
        let n = self.modulus;
        let diag = self.diag.iter().map(|&d| (d + c) % n).collect();
        MonomialMatrix { diag, ..self.clone() }
    }
}

/// Translation `P_a e_b = e_{a+b}`.
pub fn perm_matrix(a_group: &FinAbGroup, a: &Element) -> Result<MonomialMatrix> {
    a_group.check(a)?;
    let perm = a_group.elements().map(|b| a_group.index_of(&a_group.add(a, &b)) as u32).collect();
    let n = a_group.order() as usize;
    Ok(MonomialMatrix { group: a_group.clone(), modulus: a_group.exponent(), perm, diag: vec![0; n] })
}

/// `D_chi e_b = chi(b) e_b`.
pub fn diag_matrix(a_group: &FinAbGroup, chi: &Element) -> Result<MonomialMatrix> {
    a_group.check(chi)?;
    let n = a_group.exponent();
    let diag = a_group
        .elements()
        .map(|b| a_group.eval_character(chi, &b).map(|q| q.numerator_over(n).expect("denominator divides N")))
        .collect::<Result<Vec<u64>>>()?;
    let perm = (0..a_group.order() as u32).collect();
    Ok(MonomialMatrix { group: a_group.clone(), modulus: n, perm, diag })
}

/// `x y x^{-1} y^{-1}`.
pub fn commutator(x: &MonomialMatrix, y: &MonomialMatrix) -> Result<MonomialMatrix> {
    x.same_group(y)?;
    Ok(x.mul_unchecked(y).mul_unchecked(&x.inverse()).mul_unchecked(&y.inverse()))
}

/// A monomial matrix modulo scalars, normalized so the exponent at index 0 is 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectiveElement {
    lift: MonomialMatrix,
}

impl ProjectiveElement {
    pub fn new(m: MonomialMatrix) -> ProjectiveElement {
        let c = m.diag.first().copied().unwrap_or(0);
        let lift = m.twist((m.modulus - c) % m.modulus);
        ProjectiveElement { lift }
    }

    pub fn identity(a: &FinAbGroup) -> ProjectiveElement {
        ProjectiveElement { lift: MonomialMatrix::identity(a) }
    }

    /// The normalized lift.
    pub fn lift(&self) -> &MonomialMatrix {
        &self.lift
    }

    pub fn mul(&self, other: &ProjectiveElement) -> Result<ProjectiveElement> {
        Ok(ProjectiveElement::new(self.lift.mul(&other.lift)?))
    }

    pub fn inverse(&self) -> ProjectiveElement {
        ProjectiveElement::new(self.lift.inverse())
    }

    pub fn pow(&self, k: i64) -> ProjectiveElement {
        ProjectiveElement::new(self.lift.pow(k))
    }

    pub fn is_identity(&self) -> bool {
        self.lift.is_scalar()
    }
}

/// The class of `P_a D_chi`.
pub fn phi(a_group: &FinAbGroup, a: &Element, chi: &Element) -> Result<ProjectiveElement> {
    let m = perm_matrix(a_group, a)?.mul_unchecked(&diag_matrix(a_group, chi)?);
    Ok(ProjectiveElement::new(m))
}

/// A finite subgroup of `PGL_n` that is abelian, together with an explicit
/// isomorphism onto an abstract [`FinAbGroup`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PglSubgroup {
    index_group: FinAbGroup,
    generators: Vec<ProjectiveElement>,
    abstract_group: FinAbGroup,
    /// Image of the `i`-th canonical generator of `abstract_group`.
    abstract_generators: Vec<ProjectiveElement>,
    /// Every element with its abstract coordinates.
    elements: BTreeMap<ProjectiveElement, Element>,
    form: SkewForm,
}

impl PglSubgroup {
    /// The subgroup generated by `gens`, all indexed by `a`. Fails unless
    /// every pair of generators commutes up to a scalar.
    pub fn generated_by(a: &FinAbGroup, gens: &[ProjectiveElement], limit: EnumLimit) -> Result<PglSubgroup> {
        for g in gens {
            if g.lift.group != *a {
                return Err(Error::AmbientMismatch(format!(
                    "generator indexed by {} in a subgroup indexed by {a}",
                    g.lift.group
                )));
            }
        }
        for (i, x) in gens.iter().enumerate() {
            for y in &gens[i + 1..] {
                if !commutator(&x.lift, &y.lift)?.is_scalar() {
                    return Err(Error::NotAbelianInPgl);
                }
            }
        }

        // closure, one generator at a time, recording the relation
        // t_i e_i = (coordinates of g_i^{t_i}) in the earlier generators
        let m = gens.len();
        let mut elems: Vec<ProjectiveElement> = vec![ProjectiveElement::identity(a)];
        let mut coords: Vec<Vec<i64>> = vec![vec![0; m]];
        let mut lookup: BTreeMap<ProjectiveElement, usize> = BTreeMap::new();
        lookup.insert(elems[0].clone(), 0);
        let mut relations = Mat::zeros(m, m);
        for (i, g) in gens.iter().enumerate() {
            let base = elems.len();
            let mut power = g.clone();
            let mut t = 1i64;
            while !lookup.contains_key(&power) {
                power = power.mul(g)?;
                t += 1;
                let order = base as u64 * t as u64;
                if order > limit.0 {
                    return Err(Error::EnumerationBound { order, bound: limit.0 });
                }
            }
            let hit = &coords[lookup[&power]];
            for j in 0..m {
                relations.set(i, j, -hit[j]);
            }
            relations.set(i, i, t);
            let mut step = g.clone();
            for s in 1..t {
                for x in 0..base {
                    let y = elems[x].mul(&step)?;
                    let mut c = coords[x].clone();
                    c[i] = s;
                    lookup.insert(y.clone(), elems.len());
                    elems.push(y);
                    coords.push(c);
                }
                step = step.mul(g)?;
            }
        }

        let snf = intmat::smith(&relations);
        let keep: Vec<usize> = (0..snf.diag.len()).filter(|&i| snf.diag[i] > 1).collect();
        let abstract_group = FinAbGroup::from_chain(keep.iter().map(|&i| snf.diag[i] as u64).collect());
        let abstract_generators: Vec<ProjectiveElement> = keep
            .iter()
            .map(|&i| {
                let w = snf.v_inv.row(i);
                gens.iter()
                    .zip(w)
                    .try_fold(ProjectiveElement::identity(a), |acc, (g, &e)| acc.mul(&g.pow(e)))
            })
            .collect::<Result<_>>()?;
        let mut elements = BTreeMap::new();
        for (x, c) in elems.into_iter().zip(coords) {
            let y = intmat::vec_mul(&c, &snf.v);
            let ab: Vec<i64> = keep.iter().map(|&i| y[i]).collect();
            elements.insert(x, abstract_group.reduce_vec(&ab));
        }

        let gram: Vec<Vec<QmodZ>> = abstract_generators
            .iter()
            .map(|x| {
                abstract_generators
                    .iter()
                    .map(|y| commutator(&x.lift, &y.lift).and_then(|c| c.scalar_exponent()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let form = SkewForm::new(abstract_group.clone(), &gram)?;

        Ok(PglSubgroup {
            index_group: a.clone(),
            generators: gens.to_vec(),
            abstract_group,
            abstract_generators,
            elements,
            form,
        })
    }

    /// `phi(A x A*)`, generated by `phi(e_i, 0)` and `phi(0, e_i^*)` in
    /// alternation, matching the coordinates of the standard module.
    pub fn heisenberg_image(a: &FinAbGroup, limit: EnumLimit) -> Result<PglSubgroup> {
        let k = a.rank();
        let zero = a.zero();
        let mut gens = Vec::with_capacity(2 * k);
        for i in 0..k {
            let mut c = vec![0u64; k];
            c[i] = 1;
            let e = a.element(&c)?;
            gens.push(phi(a, &e, &zero)?);
            gens.push(phi(a, &zero, &e)?);
        }
        PglSubgroup::generated_by(a, &gens, limit)
    }

    pub fn index_group(&self) -> &FinAbGroup {
        &self.index_group
    }

    pub fn generators(&self) -> &[ProjectiveElement] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn abstract_group(&self) -> &FinAbGroup {
        &self.abstract_group
    }

    pub fn abstract_generators(&self) -> &[ProjectiveElement] {
        &self.abstract_generators
    }

    pub fn elements(&self) -> impl Iterator<Item = &ProjectiveElement> {
        self.elements.keys()
    }

    /// Abstract coordinates of a member, `None` for non-members.
    pub fn coordinates(&self, x: &ProjectiveElement) -> Option<&Element> {
        self.elements.get(x)
    }

    /// The commutator pairing on the abstract group.
    pub fn alpha_form(&self) -> &SkewForm {
        &self.form
    }

    pub fn is_toral(&self) -> bool {
        self.form.radical().order() == self.order()
    }

    /// `log_p` of the index of a largest isotropic subgroup.
    pub fn depth(&self, limit: EnumLimit) -> Result<u32> {
        let order = self.order();
        if order == 1 {
            return Ok(0);
        }
        let f = factorize(order);
        if f.len() != 1 {
            return Err(Error::NotPGroup(order));
        }
        let p = f[0].0;
        let best = self.form.max_isotropic(limit)?.order;
        let mut index = order / best;
        let mut d = 0;
        while index > 1 {
            index /= p;
            d += 1;
        }
        Ok(d)
    }
}
