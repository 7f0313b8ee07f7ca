//! Dense integer matrices with Hermite and Smith normal forms.
//!
//! Sizes here are tiny (rank of a finite abelian group, number of generators
//! of a subgroup), so everything is plain `Vec<i64>` row-major storage.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Mat {
        let mut m = Mat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            debug_assert_eq!(r.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i64) {
        if q != 0 {
            for j in 0..self.cols {
                let v = self.get(src, j);
                self.data[dst * self.cols + j] += q * v;
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i64) {
        if q != 0 {
            for i in 0..self.rows {
                let v = self.get(i, src);
                self.data[i * self.cols + dst] += q * v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }
}

/// Extended gcd: returns `(g, x, y)` with `g = x*a + y*b >= 0`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Output rows are in echelon order with strictly increasing pivot columns,
/// positive pivots, and every entry above a pivot reduced into `[0, pivot)`.
/// Zero rows are dropped. Returns the basis together with the pivot columns.
pub(crate) fn hnf(rows: &[Vec<i64>], cols: usize) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut by_pivot: Vec<Option<Vec<i64>>> = vec![None; cols];
    for r in rows {
        insert_row(&mut by_pivot, r.clone());
    }
    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    for (c, slot) in by_pivot.into_iter().enumerate() {
        if let Some(r) = slot {
            basis.push(r);
            pivots.push(c);
        }
    }
    // reduce entries above each pivot
    for t in 0..basis.len() {
        let c = pivots[t];
        let p = basis[t][c];
        for s in 0..t {
            let q = basis[s][c].div_euclid(p);
            if q != 0 {
                let src = basis[t].clone();
                for (x, y) in basis[s].iter_mut().zip(src) {
                    *x -= q * y;
                }
            }
        }
    }
    (basis, pivots)
}

fn insert_row(by_pivot: &mut [Option<Vec<i64>>], mut v: Vec<i64>) {
    let cols = v.len();
    for c in 0..cols {
        if v[c] == 0 {
            continue;
        }
        match &mut by_pivot[c] {
            None => {
                if v[c] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                by_pivot[c] = Some(v);
                return;
            }
            Some(b) => {
                let (g, x, y) = ext_gcd(b[c], v[c]);
                let (bc, vc) = (b[c] / g, v[c] / g);
                let nb: Vec<i64> = b.iter().zip(&v).map(|(p, q)| x * p + y * q).collect();
                let nv: Vec<i64> = b.iter().zip(&v).map(|(p, q)| bc * q - vc * p).collect();
                *b = nb;
                v = nv;
                debug_assert_eq!(v[c], 0);
            }
        }
    }
}

/// Smith normal form `U * M * V = diag(d)` with `d_1 | d_2 | ...`, all `d_i >= 0`.
///
/// Only `V` and `V^{-1}` are tracked; callers never need `U`. A matrix that
/// is already diagonal with a nonnegative divisibility chain is left untouched,
/// so `V` stays the identity.
#[derive(Debug, Clone)]
pub(crate) struct Smith {
    pub diag: Vec<i64>,
    pub v: Mat,
    pub v_inv: Mat,
}

pub(crate) fn smith(m: &Mat) -> Smith {
    let mut a = m.clone();
    let mut v = Mat::identity(a.cols);
    let mut v_inv = Mat::identity(a.cols);
    let n = a.rows.min(a.cols);
    let mut diag = Vec::with_capacity(n);

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block, first in row-major order
            let mut best: Option<(usize, usize, i64)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    let x = a.get(i, j).abs();
                    if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                        best = Some((i, j, x));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                // trailing block is zero
                diag.resize(n, 0);
                return Smith { diag, v, v_inv };
            };
            a.swap_rows(t, pi);
            if pj != t {
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                v_inv.swap_rows(t, pj);
            }
            let p = a.get(t, t);
            let mut clean = true;
            for i in t + 1..a.rows {
                let q = a.get(i, t) / p;
                a.add_row(i, t, -q);
                if a.get(i, t) != 0 {
                    clean = false;
                }
            }
            for j in t + 1..a.cols {
                let q = a.get(t, j) / p;
                if q != 0 {
                    a.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                    v_inv.add_row(t, j, q);
                }
                if a.get(t, j) != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let mut bad_row = None;
            'scan: for i in t + 1..a.rows {
                for j in t + 1..a.cols {
                    if a.get(i, j) % p != 0 {
                        bad_row = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(i) => a.add_row(t, i, 1),
                None => break,
            }
        }
        if a.get(t, t) < 0 {
            a.negate_row(t);
        }
        diag.push(a.get(t, t));
    }
    Smith { diag, v, v_inv }
}

/// Multiply a row vector by a matrix.
pub(crate) fn vec_mul(x: &[i64], m: &Mat) -> Vec<i64> {
    debug_assert_eq!(x.len(), m.rows);
    let mut out = vec![0i64; m.cols];
    for (i, &xi) in x.iter().enumerate() {
        if xi != 0 {
            for (j, o) in out.iter_mut().enumerate() {
                *o += xi * m.get(i, j);
            }
        }
    }
    out
}
