//! Quadratic forms over GF(2).
//!
//! A form on `GF(2)^m` is an upper-triangular bit matrix `Q` with
//! `q(x) = x^T Q x`. Row `i` is a `u32` whose bit `j >= i` is `Q[i][j]`, and a
//! vector is a `u32` whose bit `i` is coordinate `i`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest dimension for which exhaustive counting is allowed.
pub const MAX_COUNT_DIM: usize = 24;
/// Largest dimension a form can have at all.
pub const MAX_DIM: usize = 32;

#[inline]
fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

fn low_mask(m: usize) -> u32 {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

/// Rank over GF(2) of a list of bit vectors.
pub fn f2_rank(vectors: &[u32]) -> usize {
    let mut pivots: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &p in &pivots {
            v = v.min(v ^ p);
        }
        if v != 0 {
            pivots.push(v);
            pivots.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    pivots.len()
}

/// The four indecomposable pieces every form splits into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    /// `x y`
    H,
    /// `x^2 + x y + y^2`
    A,
    /// `0` on a line
    Zero,
    /// `x^2` on a line
    One,
}

impl Block {
    pub fn dim(self) -> usize {
        match self {
            Block::H | Block::A => 2,
            Block::Zero | Block::One => 1,
        }
    }

    /// `(|q^{-1}(0)|, |q^{-1}(1)|)`.
    pub fn counts(self) -> (u64, u64) {
        match self {
            Block::H => (3, 1),
            Block::A => (1, 3),
            Block::Zero => (2, 0),
            Block::One => (1, 1),
        }
    }

    fn rows(self) -> &'static [u32] {
        match self {
            Block::H => &[0b10, 0],
            Block::A => &[0b11, 0b10],
            Block::Zero => &[0],
            Block::One => &[1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Block::H => "h",
            Block::A => "a",
            Block::Zero => "zero",
            Block::One => "one",
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Block {
    type Err = Error;
    fn from_str(s: &str) -> Result<Block> {
        match s.trim() {
            "h" => Ok(Block::H),
            "a" => Ok(Block::A),
            "zero" | "0" => Ok(Block::Zero),
            "one" | "1" => Ok(Block::One),
            other => Err(Error::Parse(alloc::format!("unknown block {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2QuadForm {
    dim: usize,
    rows: Vec<u32>,
}

impl F2QuadForm {
    /// Bits below the diagonal or beyond `dim` are rejected.
    pub fn new(dim: usize, rows: Vec<u32>) -> Result<F2QuadForm> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        if rows.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: rows.len() });
        }
        for (i, &r) in rows.iter().enumerate() {
            let allowed = low_mask(dim) & !low_mask(i);
            if r & !allowed != 0 {
                return Err(Error::InvalidForm(alloc::format!("row {i} = {r:#x} is not upper triangular")));
            }
        }
        Ok(F2QuadForm { dim, rows })
    }

    pub fn zero(dim: usize) -> F2QuadForm {
        F2QuadForm { dim, rows: vec![0; dim] }
    }

    pub fn from_blocks(blocks: &[Block]) -> Result<F2QuadForm> {
        let dim: usize = blocks.iter().map(|b| b.dim()).sum();
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        let mut rows = Vec::with_capacity(dim);
        for b in blocks {
            let shift = rows.len();
            rows.extend(b.rows().iter().map(|r| r << shift));
        }
        Ok(F2QuadForm { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    fn check_vec(&self, v: u32) -> Result<()> {
        if v & !low_mask(self.dim) != 0 {
            return Err(Error::DimensionMismatch { expected: self.dim, found: 32 - v.leading_zeros() as usize });
        }
        Ok(())
    }

    #[inline]
    fn q_raw(&self, x: u32) -> u8 {
        let mut acc = 0;
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= parity(self.rows[i] & x);
            bits &= bits - 1;
        }
        acc
    }

    pub fn eval(&self, x: u32) -> Result<u8> {
        self.check_vec(x)?;
        Ok(self.q_raw(x))
    }

    /// Rows of the symmetric matrix `Q + Q^T` of the polar form.
    fn polar_rows(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.dim];
        for i in 0..self.dim {
            let off = self.rows[i] & !(1 << i);
            out[i] |= off;
            let mut bits = off;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                out[j] |= 1 << i;
                bits &= bits - 1;
            }
        }
        out
    }

    #[inline]
    fn b_raw(polar: &[u32], v: u32, w: u32) -> u8 {
        let mut acc = 0;
        let mut bits = v;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= parity(polar[i] & w);
            bits &= bits - 1;
        }
        acc
    }

    /// `q(v + w) + q(v) + q(w)`.
    pub fn bilinear(&self, v: u32, w: u32) -> Result<u8> {
        self.check_vec(v)?;
        self.check_vec(w)?;
        Ok(self.q_raw(v ^ w) ^ self.q_raw(v) ^ self.q_raw(w))
    }

    /// A basis of the kernel of the polar form.
    pub fn radical(&self) -> Vec<u32> {
        let polar = self.polar_rows();
        // solve polar * x = 0 by elimination on columns of the symmetric matrix
        let m = self.dim;
        let mut rows = polar.clone();
        let mut pivot_col = Vec::new();
        let mut r = 0;
        for c in 0..m {
            let Some(p) = (r..m).find(|&i| rows[i] >> c & 1 == 1) else { continue };
            rows.swap(r, p);
            for i in 0..m {
                if i != r && rows[i] >> c & 1 == 1 {
                    rows[i] ^= rows[r];
                }
            }
            pivot_col.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..m).filter(|c| !pivot_col.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = 1u32 << f;
                for (row, &pc) in rows.iter().zip(&pivot_col) {
                    if row >> f & 1 == 1 {
                        x |= 1 << pc;
                    }
                }
                x
            })
            .collect()
    }

    /// `|q^{-1}(1)|` by walking all vectors in Gray-code order.
    pub fn count_anisotropic(&self) -> Result<u64> {
        if self.dim > MAX_COUNT_DIM {
            return Err(Error::DimensionTooLarge { dim: self.dim, max: MAX_COUNT_DIM });
        }
        let polar = self.polar_rows();
        let diag: Vec<u8> = (0..self.dim).map(|i| (self.rows[i] >> i & 1) as u8).collect();
        let mut x = 0u32;
        let mut qx = 0u8;
        let mut ones = 0u64;
        for step in 1u64..(1u64 << self.dim) {
            let i = step.trailing_zeros() as usize;
            // q(x + e_i) = q(x) + q(e_i) + b(x, e_i)
            qx ^= diag[i] ^ parity(polar[i] & x);
            x ^= 1 << i;
            ones += qx as u64;
        }
        Ok(ones)
    }

    /// The form `y -> q(sum y_i basis_i)` on `GF(2)^{basis.len()}`.
    pub fn transform(&self, basis: &[u32]) -> Result<F2QuadForm> {
        if basis.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim: basis.len(), max: MAX_DIM });
        }
        for &v in basis {
            self.check_vec(v)?;
        }
        let polar = self.polar_rows();
        let rows = (0..basis.len())
            .map(|i| {
                let mut r = (self.q_raw(basis[i]) as u32) << i;
                for j in i + 1..basis.len() {
                    r |= (Self::b_raw(&polar, basis[i], basis[j]) as u32) << j;
                }
                r
            })
            .collect();
        Ok(F2QuadForm { dim: basis.len(), rows })
    }

    /// Normalized block decomposition; see [`Decomposition`].
    pub fn decompose(&self) -> Result<Vec<Block>> {
        Ok(self.decompose_with_basis()?.blocks)
    }

    /// Splits off hyperbolic pairs greedily (first basis vector with a
    /// partner, first partner), then splits the radical.
    ///
    /// Normal form: at most one `a`, and none at all next to a `one`
    /// (`a + a = h + h`, `a + one = h + one`). Order is `a`, `h`s, `one`,
    /// `zero`s. The returned basis realizes exactly the returned blocks.
    pub fn decompose_with_basis(&self) -> Result<Decomposition> {
        if self.dim > MAX_COUNT_DIM {
            return Err(Error::DimensionTooLarge { dim: self.dim, max: MAX_COUNT_DIM });
        }
        let polar = self.polar_rows();
        let b = |v: u32, w: u32| Self::b_raw(&polar, v, w);
        let mut pool: Vec<u32> = (0..self.dim).map(|i| 1u32 << i).collect();
        let mut planes: Vec<(u32, u32)> = Vec::new();
        loop {
            let found = pool.iter().enumerate().find_map(|(i, &v)| {
                pool.iter().enumerate().skip(i + 1).find(|&(_, &w)| b(v, w) == 1).map(|(j, _)| (i, j))
            });
            let Some((i, j)) = found else { break };
            let (v, w) = (pool[i], pool[j]);
            pool.remove(j);
            pool.remove(i);
            for u in pool.iter_mut() {
                let (uv, uw) = (b(*u, v), b(*u, w));
                if uw == 1 {
                    *u ^= v;
                }
                if uv == 1 {
                    *u ^= w;
                }
            }
            planes.push((v, w));
        }
        // what is left spans the radical, on which q is additive
        let rad = pool;
        let mut one_vec = None;
        let mut zeros = Vec::new();
        for &r in &rad {
            if self.q_raw(r) == 1 {
                match one_vec {
                    None => one_vec = Some(r),
                    Some(o) => zeros.push(r ^ o),
                }
            } else {
                zeros.push(r);
            }
        }

        // classify each plane, then normalize to the standard pair
        let mut h_planes = Vec::new();
        let mut a_planes = Vec::new();
        for (v, w) in planes {
            let ones = self.q_raw(v) + self.q_raw(w) + self.q_raw(v ^ w);
            if ones == 1 {
                h_planes.push(to_h(self, v, w));
            } else {
                a_planes.push((v, w));
            }
        }
        while a_planes.len() >= 2 {
            let (p1, p2) = (a_planes.pop().unwrap(), a_planes.pop().unwrap());
            let (h1, h2) = a_pair_to_h(p1, p2);
            h_planes.push(h1);
            h_planes.push(h2);
        }
        if let (Some(o), Some(&(x, y))) = (one_vec, a_planes.first()) {
            // a + one: (x + o, y + o) is hyperbolic and o stays anisotropic
            a_planes.clear();
            let (hx, hy) = (x ^ o, y ^ o);
            h_planes.insert(0, to_h(self, hx, hy));
        }

        let mut blocks = Vec::new();
        let mut basis = Vec::new();
        for (x, y) in a_planes {
            blocks.push(Block::A);
            basis.extend([x, y]);
        }
        for (x, y) in h_planes {
            blocks.push(Block::H);
            basis.extend([x, y]);
        }
        if let Some(o) = one_vec {
            blocks.push(Block::One);
            basis.push(o);
        }
        for z in zeros {
            blocks.push(Block::Zero);
            basis.push(z);
        }
        debug_assert_eq!(self.transform(&basis).ok(), F2QuadForm::from_blocks(&blocks).ok());
        Ok(Decomposition { blocks, basis })
    }
}

/// A plane with one anisotropic vector, rebased so `q(x) = q(y) = 0`.
fn to_h(q: &F2QuadForm, v: u32, w: u32) -> (u32, u32) {
    let zeros: Vec<u32> = [v, w, v ^ w].into_iter().filter(|&x| q.q_raw(x) == 0).collect();
    (zeros[0], zeros[1])
}

/// `a + a = h + h`. For standard `a` pairs `(x1, y1)`, `(x2, y2)` the planes
/// `<x1 + x2, x1 + y2>` and `<y1 + x2 + y2, x1 + y1 + x2 + y2>` are
/// orthogonal, and each given basis is isotropic with pairing 1.
fn a_pair_to_h(p1: (u32, u32), p2: (u32, u32)) -> ((u32, u32), (u32, u32)) {
    let ((x1, y1), (x2, y2)) = (p1, p2);
    let s = y1 ^ x2 ^ y2;
    ((x1 ^ x2, x1 ^ y2), (s, x1 ^ s))
}

/// Blocks and the basis vectors (in the original coordinates) realizing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
    pub basis: Vec<u32>,
}

/// Folds `(zeros, ones)` over orthogonal summands.
pub fn count_by_recursion(blocks: &[Block]) -> Result<(u64, u64)> {
    let dim: usize = blocks.iter().map(|b| b.dim()).sum();
    if dim > 62 {
        return Err(Error::DimensionTooLarge { dim, max: 62 });
    }
    Ok(blocks.iter().fold((1, 0), |(z, o), b| {
        let (zb, ob) = b.counts();
        (z * zb + o * ob, z * ob + o * zb)
    }))
}

/// One isomorphism class in the seven-dimensional census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusClass {
    pub name: &'static str,
    pub blocks: Vec<Block>,
    pub anisotropic: u64,
}

/// The three classes of 7-dimensional forms whose polar form has a
/// 1-dimensional radical, each counted by brute force.
pub fn lemma_quad_classes() -> Vec<CensusClass> {
    use Block::*;
    let classes: [(&'static str, Vec<Block>); 3] = [
        ("h+h+h+one", vec![H, H, H, One]),
        ("h+h+h+zero", vec![H, H, H, Zero]),
        ("a+h+h+zero", vec![A, H, H, Zero]),
    ];
    classes
        .into_iter()
        .map(|(name, blocks)| {
            let q = F2QuadForm::from_blocks(&blocks).expect("dimension 7");
            let anisotropic = q.count_anisotropic().expect("dimension 7");
            CensusClass { name, blocks, anisotropic }
        })
        .collect()
}

/// The set of anisotropic counts over [`lemma_quad_classes`].
pub fn lemma_quad_census() -> BTreeSet<u64> {
    lemma_quad_classes().into_iter().map(|c| c.anisotropic).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct E8TorusCensus {
    /// `|q^{-1}(1)|`
    pub type_a: u64,
    /// nonzero vectors with `q = 0`
    pub type_b: u64,
    /// pairwise orthogonal hyperbolic planes found by the decomposition
    pub hyperbolic_planes: usize,
}

/// Counts for the split nonsingular form `h+h+h+h` on `GF(2)^8`.
pub fn e8_torus_census() -> E8TorusCensus {
    let q = F2QuadForm::from_blocks(&[Block::H; 4]).expect("dimension 8");
    let type_a = q.count_anisotropic().expect("dimension 8");
    let type_b = 255 - type_a;
    let d = q.decompose_with_basis().expect("dimension 8");
    let polar = q.polar_rows();
    let planes: Vec<(u32, u32)> = d
        .blocks
        .iter()
        .zip(d.basis.chunks(2))
        .filter(|(b, _)| **b == Block::H)
        .map(|(_, p)| (p[0], p[1]))
        .collect();
    let orthogonal = planes.iter().enumerate().all(|(i, &(x, y))| {
        planes[i + 1..].iter().all(|&(u, v)| {
            [(x, u), (x, v), (y, u), (y, v)].iter().all(|&(s, t)| F2QuadForm::b_raw(&polar, s, t) == 0)
        })
    });
    let hyperbolic_planes = if orthogonal { planes.len() } else { 0 };
    E8TorusCensus { type_a, type_b, hyperbolic_planes }
}

/// `GF(2)^8 = A_1 x A_2` with `A_1 = <e_1, e_2, e_3>`, `A_2 = <e_4, .., e_8>`,
/// `R = <e_7, e_8>`, and the distinguished set `S = (A_2 - R) u (A_1 R - R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ec8Model {
    pub a1: Vec<u32>,
    pub a2: Vec<u32>,
    pub r: Vec<u32>,
    type_a: Vec<u32>,
}

fn span(basis: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &b in basis {
        let more: Vec<u32> = out.iter().map(|x| x ^ b).collect();
        out.extend(more);
    }
    out.sort_unstable();
    out.dedup();
    out
}

impl Ec8Model {
    pub fn standard() -> Ec8Model {
        let e = |i: u32| 1u32 << (i - 1);
        let a1 = vec![e(1), e(2), e(3)];
        let a2 = vec![e(4), e(5), e(6), e(7), e(8)];
        let r = vec![e(7), e(8)];
        let r_set = span(&r);
        let mut a1r_basis = a1.clone();
        a1r_basis.extend(&r);
        let mut type_a: Vec<u32> = span(&a2).into_iter().filter(|x| !r_set.contains(x)).collect();
        type_a.extend(span(&a1r_basis).into_iter().filter(|x| !r_set.contains(x)));
        type_a.sort_unstable();
        type_a.dedup();
        Ec8Model { a1, a2, r, type_a }
    }

    /// Same subspaces, different distinguished set.
    pub fn with_type_a(&self, mut type_a: Vec<u32>) -> Ec8Model {
        type_a.retain(|&x| x != 0 && x < 256);
        type_a.sort_unstable();
        type_a.dedup();
        Ec8Model { type_a, ..self.clone() }
    }

    pub fn type_a(&self) -> &[u32] {
        &self.type_a
    }

    pub fn type_a_count(&self) -> usize {
        self.type_a.len()
    }

    pub fn type_b_count(&self) -> usize {
        255 - self.type_a.len()
    }

    /// `|A_2 - R|`
    pub fn a2_minus_r(&self) -> usize {
        span(&self.a2).len() - span(&self.r).len()
    }

    /// `|A_1 R - R|`
    pub fn a1r_minus_r(&self) -> usize {
        let mut b = self.a1.clone();
        b.extend(&self.r);
        span(&b).len() - span(&self.r).len()
    }

    /// For each of the 255 hyperplanes, how many distinguished elements it
    /// contains; reports the extremes.
    pub fn hyperplane_census(&self) -> HyperplaneCensus {
        let mut max_contained = 0;
        let mut min_missed = usize::MAX;
        for f in 1u32..256 {
            let inside = self.type_a.iter().filter(|&&x| parity(x & f) == 0).count();
            max_contained = max_contained.max(inside);
            min_missed = min_missed.min(self.type_a.len() - inside);
        }
        HyperplaneCensus { hyperplanes: 255, max_contained, min_missed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperplaneCensus {
    pub hyperplanes: usize,
    pub max_contained: usize,
    pub min_missed: usize,
}

/// Whether the distinguished set spans all of `GF(2)^8`.
pub fn ec8_generation_check(m: &Ec8Model) -> bool {
    f2_rank(&m.type_a) == 8
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use Block::*;

    /// Oracle: evaluate `x^T Q x` entry by entry.
    fn q_naive(q: &F2QuadForm, x: u32) -> u8 {
        let m = q.dim();
        let mut acc = 0;
        for i in 0..m {
            for j in i..m {
                acc ^= (q.rows()[i] >> j & 1 & x >> i & x >> j & 1) as u8;
            }
        }
        acc
    }

    fn count_naive(q: &F2QuadForm) -> u64 {
        (0..1u32 << q.dim()).map(|x| q_naive(q, x) as u64).sum()
    }

    fn random_form(rng: &mut ChaCha8Rng, m: usize) -> F2QuadForm {
        let rows = (0..m).map(|i| rng.random::<u32>() & low_mask(m) & !low_mask(i)).collect();
        F2QuadForm::new(m, rows).unwrap()
    }

    fn random_invertible(rng: &mut ChaCha8Rng, m: usize) -> Vec<u32> {
        loop {
            let b: Vec<u32> = (0..m).map(|_| rng.random::<u32>() & low_mask(m)).collect();
            if f2_rank(&b) == m {
                return b;
            }
        }
    }

    #[test]
    fn block_counts() {
        for b in [H, A, Zero, One] {
            let q = F2QuadForm::from_blocks(&[b]).unwrap();
            let ones = count_naive(&q);
            assert_eq!(b.counts(), ((1 << b.dim()) - ones, ones));
        }
    }

    #[test]
    fn bilinear_examples() {
        let h = F2QuadForm::from_blocks(&[H]).unwrap();
        assert_eq!(h.bilinear(0b01, 0b10).unwrap(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let q = random_form(&mut rng, 9);
            let v = rng.random::<u32>() & 0x1ff;
            let w = rng.random::<u32>() & 0x1ff;
            let u = rng.random::<u32>() & 0x1ff;
            assert_eq!(q.bilinear(v, v).unwrap(), 0);
            assert_eq!(q.bilinear(v, w).unwrap(), q.bilinear(w, v).unwrap());
            assert_eq!(q.bilinear(v ^ u, w).unwrap(), q.bilinear(v, w).unwrap() ^ q.bilinear(u, w).unwrap());
            assert_eq!(q.eval(v).unwrap(), q_naive(&q, v));
        }
        assert!(h.bilinear(0b100, 0).is_err());
    }

    #[test]
    fn radical_examples() {
        assert_eq!(F2QuadForm::from_blocks(&[H, H, H, Zero]).unwrap().radical().len(), 1);
        assert_eq!(F2QuadForm::from_blocks(&[H, H, H, H]).unwrap().radical().len(), 0);
        assert_eq!(F2QuadForm::zero(5).radical().len(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let q = random_form(&mut rng, 8);
            let rad = q.radical();
            let brute: Vec<u32> =
                (0..256u32).filter(|&v| (0..8).all(|i| q.bilinear(v, 1 << i).unwrap() == 0)).collect();
            assert_eq!(1usize << rad.len(), brute.len());
            assert_eq!(f2_rank(&rad), rad.len());
            for r in rad {
                assert!(brute.contains(&r));
            }
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(F2QuadForm::from_blocks(&[H]).unwrap().count_anisotropic().unwrap(), 1);
        assert_eq!(F2QuadForm::from_blocks(&[A]).unwrap().count_anisotropic().unwrap(), 3);
        assert_eq!(F2QuadForm::from_blocks(&[H, H, H, Zero]).unwrap().count_anisotropic().unwrap(), 56);
        assert_eq!(F2QuadForm::from_blocks(&[H, H, H, H]).unwrap().count_anisotropic().unwrap(), 120);
        assert_eq!(F2QuadForm::zero(25).count_anisotropic().unwrap_err().code(), "dimension-too-large");
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(count_by_recursion(&[H, H]).unwrap(), (10, 6));
        assert_eq!(count_by_recursion(&[H, H, H, Zero]).unwrap().1, 56);
        for blocks in [vec![H, A, Zero], vec![A, A], vec![Zero, Zero, H], vec![]] {
            let mut with_one = blocks.clone();
            with_one.push(One);
            let m: usize = blocks.iter().map(|b| b.dim()).sum();
            assert_eq!(count_by_recursion(&with_one).unwrap().1, 1 << m);
        }
    }

    #[test]
    fn recursion_agrees_with_brute_force() {
        for m in 0..=4 {
            for code in 0u64..(1 << (m * (m + 1) / 2)) {
                let mut rows = vec![0u32; m];
                let mut bit = 0;
                for i in 0..m {
                    for j in i..m {
                        if code >> bit & 1 == 1 {
                            rows[i] |= 1 << j;
                        }
                        bit += 1;
                    }
                }
                let q = F2QuadForm::new(m, rows).unwrap();
                let ones = q.count_anisotropic().unwrap();
                assert_eq!(ones, count_naive(&q));
                assert_eq!(count_by_recursion(&q.decompose().unwrap()).unwrap(), ((1 << m) - ones, ones));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let m = rng.random_range(5..=10);
            let q = random_form(&mut rng, m);
            let ones = q.count_anisotropic().unwrap();
            assert_eq!(ones, count_naive(&q));
            assert_eq!(count_by_recursion(&q.decompose().unwrap()).unwrap(), ((1 << m) - ones, ones));
        }
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(F2QuadForm::from_blocks(&[A, A]).unwrap().decompose().unwrap(), vec![H, H]);
        assert_eq!(F2QuadForm::from_blocks(&[H]).unwrap().decompose().unwrap(), vec![H]);
        assert_eq!(F2QuadForm::from_blocks(&[A, One]).unwrap().decompose().unwrap(), vec![H, One]);
        assert_eq!(F2QuadForm::from_blocks(&[Zero, A, H, A, A]).unwrap().decompose().unwrap(), vec![A, H, H, H, Zero]);
    }

    #[test]
    fn decompose_basis_realizes_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let m = rng.random_range(1..=12);
            let q = random_form(&mut rng, m);
            let d = q.decompose_with_basis().unwrap();
            assert_eq!(f2_rank(&d.basis), m);
            assert_eq!(q.transform(&d.basis).unwrap(), F2QuadForm::from_blocks(&d.blocks).unwrap());
            assert!(d.blocks.iter().filter(|&&b| b == A).count() <= 1);
            assert!(!(d.blocks.contains(&A) && d.blocks.contains(&One)));
        }
    }

    #[test]
    fn decomposition_is_a_congruence_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let m = rng.random_range(2..=9);
            let q = random_form(&mut rng, m);
            let g = random_invertible(&mut rng, m);
            let q2 = q.transform(&g).unwrap();
            assert_eq!(q.decompose().unwrap(), q2.decompose().unwrap());
            assert_eq!(q.count_anisotropic().unwrap(), q2.count_anisotropic().unwrap());
        }
    }

    #[test]
    fn census() {
        assert_eq!(lemma_quad_census().into_iter().collect::<Vec<_>>(), vec![56, 64, 72]);
        let classes = lemma_quad_classes();
        assert_eq!(classes[0].anisotropic, 64);
        assert_eq!(classes[2].anisotropic, 72);
        for c in &classes {
            let q = F2QuadForm::from_blocks(&c.blocks).unwrap();
            assert_eq!(q.dim(), 7);
            assert_eq!(q.radical().len(), 1);
        }
    }

    #[test]
    fn random_rank_seven_forms_land_in_census() {
        let set = lemma_quad_census();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut hits = 0;
        while hits < 1000 {
            let q = random_form(&mut rng, 7);
            if q.radical().len() != 1 {
                continue;
            }
            hits += 1;
            assert!(set.contains(&q.count_anisotropic().unwrap()));
            let ones = count_by_recursion(&q.decompose().unwrap()).unwrap().1;
            assert!(set.contains(&ones));
        }
    }

    #[test]
    fn e8_torus() {
        let c = e8_torus_census();
        assert_eq!((c.type_a, c.type_b), (120, 135));
        assert_eq!(c.type_a + c.type_b, 255);
        assert_eq!(c.hyperbolic_planes, 4);
    }

    #[test]
    fn ec8() {
        let m = Ec8Model::standard();
        assert_eq!(m.type_a_count(), 56);
        assert_eq!(m.a2_minus_r(), 28);
        assert_eq!(m.a1r_minus_r(), 28);
        assert_eq!(m.type_b_count(), 199);
        assert!(ec8_generation_check(&m));
        let census = m.hyperplane_census();
        assert!(census.max_contained < 56);
        assert!(census.min_missed >= 1);

        let a2_only: Vec<u32> = span(&m.a2).into_iter().filter(|x| !span(&m.r).contains(x)).collect();
        let partial = m.with_type_a(a2_only);
        assert_eq!(f2_rank(partial.type_a()), 5);
        assert!(!ec8_generation_check(&partial));
    }

    #[test]
    fn new_rejects_lower_bits() {
        assert!(F2QuadForm::new(2, vec![0, 1]).is_err());
        assert!(F2QuadForm::new(2, vec![0b100, 0]).is_err());
        assert!(F2QuadForm::new(2, vec![0]).is_err());
    }
}
