//! Sparse exact matrices and row reduction over any [`Field`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("matrix dimension {dim} exceeds the configured bound {bound}")]
    TooLarge { dim: usize, bound: usize },
}

/// A sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// Row-major sparse matrix with no stored zeros.
#[derive(Clone, PartialEq)]
pub struct SparseMat<F> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| F::one()).collect())
    }

    pub fn diagonal(d: Vec<F>) -> Self {
        let n = d.len();
        let data = d
            .into_iter()
            .enumerate()
            .map(|(i, x)| if x.is_zero() { Vec::new() } else { vec![(i, x)] })
            .collect();
        SparseMat { rows: n, cols: n, data }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, F)>>(rows: usize, cols: usize, it: I) -> Self {
        let mut maps: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); rows];
        for (i, j, x) in it {
            assert!(i < rows && j < cols, "triplet ({i},{j}) outside {rows}x{cols}");
            let e = maps[i].entry(j).or_insert_with(F::zero);
            *e = e.add(&x);
        }
        let data = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        SparseMat { rows, cols, data }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec<F>>) -> Self {
        for r in &data {
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(r.iter().all(|(j, x)| *j < cols && !x.is_zero()));
        }
        SparseMat { rows: data.len(), cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, F)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(p) => self.data[i][p].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, *j, x)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec<F>> = vec![Vec::new(); self.cols];
        for (i, j, x) in self.iter() {
            data[j].push((i, x.clone()));
        }
        SparseMat { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> SparseMat<G> {
        self.try_map::<G, ()>(|x| Ok(f(x))).unwrap()
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<SparseMat<G>, E> {
        let mut data = Vec::with_capacity(self.rows);
        for r in &self.data {
            let mut out = Vec::with_capacity(r.len());
            for (j, x) in r {
                let y = f(x)?;
                if !y.is_zero() {
                    out.push((*j, y));
                }
            }
            data.push(out);
        }
        Ok(SparseMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|x| x.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    fn check_same(&self, o: &Self) -> Result<(), LinalgError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(LinalgError::Shape(self.rows, self.cols, o.rows, o.cols));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, LinalgError> {
        self.check_same(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| vec_axpy(a, b, &F::one())).collect();
        Ok(SparseMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("matrix add")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_same(o).expect("matrix sub");
        let m1 = F::one().neg();
        let data = self.data.iter().zip(&o.data).map(|(a, b)| vec_axpy(a, b, &m1)).collect();
        SparseMat { rows: self.rows, cols: self.cols, data }
    }

    /// `self + c·I`.
    pub fn add_identity(&self, c: &F) -> Self {
        assert!(self.is_square());
        self.add(&Self::identity(self.rows).scale(c))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::Shape(self.rows, self.cols, o.rows, o.cols));
        }
        let mut acc: Vec<Option<F>> = vec![None; o.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for r in &self.data {
            for (k, a) in r {
                for (j, b) in &o.data[*k] {
                    let p = a.mul(b);
                    match &mut acc[*j] {
                        Some(x) => *x = x.add(&p),
                        slot @ None => {
                            *slot = Some(p);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                if let Some(x) = acc[j].take() {
                    if !x.is_zero() {
                        out.push((j, x));
                    }
                }
            }
            touched.clear();
            data.push(out);
        }
        Ok(SparseMat { rows: self.rows, cols: o.cols, data })
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("matrix mul")
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.rows), |acc, _| acc.mul(self))
    }

    /// `[self, o] = self·o − o·self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Kronecker product; the left factor indexes the slower digit.
    pub fn kron(&self, o: &Self) -> Self {
        let mut data = Vec::with_capacity(self.rows * o.rows);
        for ra in &self.data {
            for rb in &o.data {
                let mut out = Vec::with_capacity(ra.len() * rb.len());
                for (ja, a) in ra {
                    for (jb, b) in rb {
                        out.push((ja * o.cols + jb, a.mul(b)));
                    }
                }
                data.push(out);
            }
        }
        SparseMat { rows: self.rows * o.rows, cols: self.cols * o.cols, data }
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t.add(&self.get(i, i));
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().fold(F::zero(), |acc, (j, x)| acc.add(&x.mul(&v[*j]))))
            .collect()
    }

    /// `v^T · self`.
    pub fn vec_mul(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![F::zero(); self.cols];
        for (i, j, x) in self.iter() {
            if !v[i].is_zero() {
                out[j] = out[j].add(&v[i].mul(x));
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(p, c)| (*c, p)).collect();
        let data = rows
            .iter()
            .map(|&i| {
                let mut r: SparseVec<F> = self.data[i]
                    .iter()
                    .filter_map(|(j, x)| pos.get(j).map(|p| (*p, x.clone())))
                    .collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        SparseMat { rows: rows.len(), cols: cols.len(), data }
    }

    /// First position where the two matrices differ.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize)> {
        if self.rows != o.rows || self.cols != o.cols {
            return Some((self.rows.min(o.rows), self.cols.min(o.cols)));
        }
        for i in 0..self.rows {
            if self.data[i] != o.data[i] {
                let a: BTreeMap<usize, &F> = self.data[i].iter().map(|(j, x)| (*j, x)).collect();
                let b: BTreeMap<usize, &F> = o.data[i].iter().map(|(j, x)| (*j, x)).collect();
                let j = a.keys().chain(b.keys()).copied().find(|j| a.get(j) != b.get(j)).unwrap_or(0);
                return Some((i, j));
            }
        }
        None
    }

    /// First nonzero entry, for witnesses of failed zero checks.
    pub fn first_nonzero(&self) -> Option<(usize, usize, F)> {
        self.iter().next().map(|(i, j, x)| (i, j, x.clone()))
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.cols]; self.rows];
        for (i, j, x) in self.iter() {
            out[i][j] = x.clone();
        }
        out
    }

    pub fn from_dense(d: &[Vec<F>]) -> Self {
        let cols = d.first().map_or(0, Vec::len);
        let data = d
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect())
            .collect();
        SparseMat { rows: d.len(), cols, data }
    }

    /// Row-major flattening, used to treat matrices as vectors.
    pub fn flatten(&self) -> SparseVec<F> {
        self.iter().map(|(i, j, x)| (i * self.cols + j, x.clone())).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }
}

impl<F: Field> fmt::Debug for SparseMat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMat {}x{} ({} nonzeros)", self.rows, self.cols, self.nnz())?;
        for (i, j, x) in self.iter().take(64) {
            writeln!(f, "  ({i},{j}) {x:?}")?;
        }
        Ok(())
    }
}

/// `a + c·b` for sorted sparse vectors.
pub fn vec_axpy<F: Field>(a: &[(usize, F)], b: &[(usize, F)], c: &F) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let y = b[j].1.mul(c);
            if !y.is_zero() {
                out.push((b[j].0, y));
            }
            j += 1;
        } else {
            let y = a[i].1.add(&b[j].1.mul(c));
            if !y.is_zero() {
                out.push((a[i].0, y));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally maintained row-echelon basis of a subspace of `F^n`.
///
/// Each stored row has leading coefficient 1 at its pivot.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the remainder.
    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        let mut start = 0;
        loop {
            let Some(pos) = v[start..].iter().position(|(j, _)| self.rows.contains_key(j)) else {
                return v;
            };
            let p = start + pos;
            let (col, c) = (v[p].0, v[p].1.clone());
            let row = &self.rows[&col];
            v = vec_axpy(&v, row, &c.neg());
            // Entries before the eliminated pivot are untouched.
            start = p;
        }
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero lead");
        let r: SparseVec<F> = r.into_iter().map(|(j, x)| (j, x.mul(&inv))).collect();
        self.rows.insert(p, r);
        true
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    /// Fully reduced basis rows (reduced row echelon form), ordered by pivot.
    pub fn rref(&self) -> Vec<SparseVec<F>> {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let mut done: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
        for &p in pivots.iter().rev() {
            let mut r = self.rows[&p].clone();
            // clear entries at later pivots, which are already reduced
            loop {
                let hit = r.iter().find(|(j, _)| *j != p && done.contains_key(j)).cloned();
                let Some((j, c)) = hit else { break };
                r = vec_axpy(&r, &done[&j], &c.neg());
            }
            done.insert(p, r);
        }
        done.into_values().collect()
    }
}

/// Rank of a list of sparse rows.
pub fn rank<F: Field>(rows: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : A x = 0}` for `A` given by its sparse rows over `ncols` unknowns.
pub fn nullspace<F: Field>(rows: impl IntoIterator<Item = SparseVec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let rref = e.rref();
    let pivots: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !is_pivot[*c]) {
        let mut x = vec![F::zero(); ncols];
        x[free] = F::one();
        for (r, &p) in rref.iter().zip(&pivots) {
            if let Ok(k) = r.binary_search_by_key(&free, |e| e.0) {
                x[p] = r[k].1.neg();
            }
        }
        basis.push(x);
    }
    basis
}

/// Kernel of a matrix.
pub fn kernel<F: Field>(m: &SparseMat<F>) -> Vec<Vec<F>> {
    nullspace((0..m.nrows()).map(|i| m.row(i).to_vec()), m.ncols())
}

/// Matrix rank.
pub fn matrix_rank<F: Field>(m: &SparseMat<F>) -> usize {
    rank((0..m.nrows()).map(|i| m.row(i).to_vec()))
}

pub fn to_sparse<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect()
}

/// Coordinates of `x` in the span of `basis`, or `None` if `x` lies outside it.
/// The basis vectors must be independent.
pub fn solve_in_span<F: Field>(basis: &[Vec<F>], x: &[F]) -> Option<Vec<F>> {
    let m = basis.len();
    let rows = (0..x.len()).map(|p| {
        let mut r: SparseVec<F> = basis.iter().enumerate().filter(|(_, b)| !b[p].is_zero()).map(|(j, b)| (j, b[p].clone())).collect();
        if !x[p].is_zero() {
            r.push((m, x[p].neg()));
        }
        r
    });
    let sol = nullspace(rows, m + 1).into_iter().find(|v| !v[m].is_zero())?;
    let inv = sol[m].inv()?;
    Some(sol[..m].iter().map(|c| c.mul(&inv)).collect())
}

/// Characteristic polynomial `det(x I - A)` by the Berkowitz algorithm
/// (division free). Coefficients are returned lowest degree first.
pub fn char_poly<F: Field>(a: &[Vec<F>]) -> Vec<F> {
    let n = a.len();
    // Berkowitz: build the Toeplitz products step by step.
    let mut c: Vec<F> = vec![F::one()]; // char poly of the empty matrix, highest first
    for k in 0..n {
        // leading k x k block is a[0..k][0..k]; new row/col index k
        let r: Vec<F> = (0..k).map(|j| a[k][j].clone()).collect(); // row k, cols < k
        let s: Vec<F> = (0..k).map(|i| a[i][k].clone()).collect(); // col k, rows < k
        let akk = a[k][k].clone();
        // vector t_i = r · M^i · s for i = 0..k-1, where M is the leading block
        let mut t: Vec<F> = Vec::with_capacity(k + 1);
        let mut v = s.clone();
        for _ in 0..k {
            let dot = r.iter().zip(&v).fold(F::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
            t.push(dot);
            v = (0..k)
                .map(|i| (0..k).fold(F::zero(), |acc, j| acc.add(&a[i][j].mul(&v[j]))))
                .collect();
        }
        // Toeplitz column: [1, -akk, -t0, -t1, ..., -t_{k-1}]
        let mut col = vec![F::one(), akk.neg()];
        col.extend(t.iter().map(|x| x.neg()));
        // new c = T · c where T is (k+2) x (k+1) lower triangular Toeplitz
        let mut next = vec![F::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *slot = slot.add(&col[i - j].mul(cj));
                }
            }
        }
        c = next;
    }
    c.reverse();
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn m(d: &[&[i64]]) -> SparseMat<BigRational> {
        SparseMat::from_dense(&d.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn span_coordinates() {
        let b = vec![vec![r(1), r(0), r(1)], vec![r(0), r(1), r(1)]];
        assert_eq!(solve_in_span(&b, &[r(2), r(3), r(5)]), Some(vec![r(2), r(3)]));
        assert_eq!(solve_in_span(&b, &[r(2), r(3), r(4)]), None);
    }

    #[test]
    fn mul_and_transpose() {
        let a = m(&[&[1, 2], &[0, 3]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), m(&[&[2, 1], &[3, 0]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn kron_mixed_product() {
        let a = m(&[&[1, 2], &[0, 3]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let c = m(&[&[2, 0], &[1, 1]]);
        let d = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
        assert_eq!(a.kron(&b).get(1, 0), r(1));
    }

    #[test]
    fn nullspace_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(matrix_rank(&a), 2);
        let k = kernel(&a);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Field::is_zero));
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![(0, r(1)), (2, r(1))]));
        assert!(e.insert(vec![(1, r(2))]));
        assert!(!e.insert(vec![(0, r(3)), (1, r(4)), (2, r(3))]));
        assert!(e.contains(vec![(1, r(5))]));
        assert!(!e.contains(vec![(2, r(1))]));
    }

    #[test]
    fn char_poly_small() {
        // [[2,1],[1,2]] : x^2 - 4x + 3
        let a = vec![vec![r(2), r(1)], vec![r(1), r(2)]];
        assert_eq!(char_poly(&a), vec![r(3), r(-4), r(1)]);
        // companion-like 3x3
        let b = vec![vec![r(0), r(0), r(6)], vec![r(1), r(0), r(-11)], vec![r(0), r(1), r(6)]];
        assert_eq!(char_poly(&b), vec![r(-6), r(11), r(-6), r(1)]);
    }
}
