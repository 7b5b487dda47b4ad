//! Exact dense linear algebra over [`Scalar`].
//!
//! Gaussian elimination always picks the first nonzero entry scanning a column top to
//! bottom, so every basis produced here is deterministic.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
}

pub type Vector = Vec<Scalar>;

pub fn zero_vec(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `acc += c * v`.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

pub fn scale_vec(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x * y;
        }
    }
    acc
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            f.write_str("  ")?;
            for c in 0..self.cols {
                write!(f, "{}  ", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        f.write_str("]")
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vector>, cols: usize) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        Self::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[Scalar]) {
        for (r, x) in v.iter().enumerate() {
            self[(r, c)] = x.clone();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = &out[(r, c)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        let mut out = zero_vec(self.rows);
        for (r, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(r), v);
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.rows, "vector-matrix dimension mismatch");
        let mut out = zero_vec(self.cols);
        for (r, x) in v.iter().enumerate() {
            axpy(&mut out, x, self.row(r));
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add_vec(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub_vec(&self.data, &other.data),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: scale_vec(c, &self.data),
        }
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                m[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        m
    }

    /// Submatrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(p) = (pr..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, pr);
            let inv = m[(pr, c)].try_inv().expect("pivot is nonzero");
            for j in c..m.cols {
                if !m[(pr, j)].is_zero() {
                    m[(pr, j)] = &m[(pr, j)] * &inv;
                }
            }
            for r in 0..m.rows {
                if r == pr || m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for j in c..m.cols {
                    let x = &m[(pr, j)];
                    if !x.is_zero() {
                        let v = &m[(r, j)] - &(&f * x);
                        m[(r, j)] = v;
                    }
                }
            }
            pivots.push(c);
            pr += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let aug = self.hstack(&Matrix::identity(n)).rref();
        if aug.pivots.len() < n || aug.pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(aug.matrix.select(&rows, &cols))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self[(r, c)] == self[(c, r)]))
    }
}

/// Basis of the null space `{x : M x = 0}`, one vector per free column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let Rref { matrix, pivots } = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = zero_vec(m.cols);
        v[free] = Scalar::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -&matrix[(i, free)];
        }
        basis.push(v);
    }
    basis
}

/// Basis of the column space: the original columns at pivot positions.
pub fn image_basis(m: &Matrix) -> Vec<Vector> {
    m.rref().pivots.iter().map(|&c| m.column(c)).collect()
}

/// Outcome of solving `B c = v` for a spanning set `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanSolution {
    InSpan(Vector),
    NotInSpan,
}

/// Coordinates of `v` in terms of the columns of `basis`, if `v` lies in their span.
pub fn solve_in_span(basis: &Matrix, v: &[Scalar]) -> SpanSolution {
    let n = basis.cols();
    let aug = basis.hstack(&Matrix::from_columns(basis.rows(), &[v.to_vec()]).unwrap());
    let Rref { matrix, pivots } = aug.rref();
    if pivots.last() == Some(&n) {
        return SpanSolution::NotInSpan;
    }
    let mut c = zero_vec(n);
    for (i, &p) in pivots.iter().enumerate() {
        c[p] = matrix[(i, n)].clone();
    }
    SpanSolution::InSpan(c)
}

/// A subspace of `K^n` stored by a basis, with a cached left inverse for fast coordinates.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivot_rows: Vec<usize>,
    pivot_inverse: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivot_rows: Vec::new(),
            pivot_inverse: Matrix::zeros(0, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_basis(ambient, (0..ambient).map(|i| unit_vec(ambient, i)).collect())
            .expect("standard basis is independent")
    }

    /// Span of arbitrary vectors; keeps the first independent subset in order.
    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_columns(ambient, vectors).expect("vector length matches ambient");
        let basis = image_basis(&m);
        Self::from_basis(ambient, basis).expect("pivot columns are independent")
    }

    pub fn from_basis(ambient: usize, basis: Vec<Vector>) -> Result<Self, LinalgError> {
        if basis.is_empty() {
            return Ok(Self::zero(ambient));
        }
        for b in &basis {
            if b.len() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    found: b.len(),
                });
            }
        }
        let k = basis.len();
        let bt = Matrix::from_rows(basis.clone())?;
        let pivot_rows = bt.rref().pivots;
        if pivot_rows.len() < k {
            return Err(LinalgError::Dependent);
        }
        let b = bt.transpose();
        let cols: Vec<usize> = (0..k).collect();
        let pivot_inverse = b.select(&pivot_rows, &cols).inverse()?;
        Ok(Subspace {
            ambient,
            basis,
            pivot_rows,
            pivot_inverse,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        if self.basis.is_empty() {
            return is_zero_vec(v).then(Vec::new);
        }
        let vp: Vector = self.pivot_rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.pivot_inverse.mul_vec(&vp);
        (self.combine(&c) == v).then_some(c)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `sum c_i b_i`.
    pub fn combine(&self, c: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.ambient);
        for (x, b) in c.iter().zip(&self.basis) {
            axpy(&mut out, x, b);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.basis.is_empty() || other.basis.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|b| scale_vec(&-Scalar::one(), b)));
        let m = Matrix::from_columns(self.ambient, &cols).unwrap();
        let k = self.basis.len();
        let vecs: Vec<Vector> = kernel_basis(&m)
            .iter()
            .map(|c| self.combine(&c[..k]))
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// Image of this subspace under `m`.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        let imgs: Vec<Vector> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Subspace::span(m.rows(), &imgs)
    }

    /// `{x in self : m x in target}`.
    pub fn preimage_within(&self, m: &Matrix, target: &Subspace) -> Subspace {
        if self.basis.is_empty() {
            return self.clone();
        }
        let q = QuotientSpace::new(target);
        let imgs: Vec<Vector> = self
            .basis
            .iter()
            .map(|b| q.project(&m.mul_vec(b)))
            .collect();
        let proj = Matrix::from_columns(q.dim(), &imgs).unwrap();
        let vecs: Vec<Vector> = kernel_basis(&proj)
            .iter()
            .map(|c| self.combine(c))
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis).unwrap()
    }
}

/// `K^n / S` with representatives the standard basis vectors outside the pivot columns of `S`.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    ambient: usize,
    sub_rref: Matrix,
    sub_pivots: Vec<usize>,
    reps: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(sub: &Subspace) -> Self {
        let ambient = sub.ambient_dim();
        let (sub_rref, sub_pivots) = if sub.dim() == 0 {
            (Matrix::zeros(0, ambient), Vec::new())
        } else {
            let r = Matrix::from_rows(sub.basis().to_vec()).unwrap().rref();
            (r.matrix, r.pivots)
        };
        let mut is_pivot = vec![false; ambient];
        for &p in &sub_pivots {
            is_pivot[p] = true;
        }
        let reps = (0..ambient).filter(|&c| !is_pivot[c]).collect();
        QuotientSpace {
            ambient,
            sub_rref,
            sub_pivots,
            reps,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Ambient indices of the representative standard basis vectors.
    pub fn representative_indices(&self) -> &[usize] {
        &self.reps
    }

    pub fn representative(&self, i: usize) -> Vector {
        unit_vec(self.ambient, self.reps[i])
    }

    /// Lift of quotient coordinates to the ambient space.
    pub fn lift(&self, c: &[Scalar]) -> Vector {
        let mut v = zero_vec(self.ambient);
        for (x, &r) in c.iter().zip(&self.reps) {
            v[r] = x.clone();
        }
        v
    }

    /// Coordinates of the class of `v`.
    pub fn project(&self, v: &[Scalar]) -> Vector {
        let mut w = v.to_vec();
        for (i, &p) in self.sub_pivots.iter().enumerate() {
            let c = v[p].clone();
            if !c.is_zero() {
                let row = self.sub_rref.row(i);
                for &r in &self.reps {
                    if !row[r].is_zero() {
                        w[r] = &w[r] - &(&c * &row[r]);
                    }
                }
            }
        }
        self.reps.iter().map(|&r| w[r].clone()).collect()
    }
}

/// `Z / B` for subspaces `B <= Z` of a common ambient space.
#[derive(Debug, Clone)]
pub struct Subquotient {
    top: Subspace,
    quotient: QuotientSpace,
}

impl Subquotient {
    pub fn new(top: &Subspace, bottom: &Subspace) -> Result<Self, LinalgError> {
        let mut coords = Vec::with_capacity(bottom.dim());
        for b in bottom.basis() {
            coords.push(top.coordinates(b).ok_or(LinalgError::NotContained)?);
        }
        let inner = Subspace::span(top.dim(), &coords);
        Ok(Subquotient {
            top: top.clone(),
            quotient: QuotientSpace::new(&inner),
        })
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn top(&self) -> &Subspace {
        &self.top
    }

    /// Class coordinates of `v`, or `None` if `v` is not in the top space.
    pub fn class_of(&self, v: &[Scalar]) -> Option<Vector> {
        self.top.coordinates(v).map(|c| self.quotient.project(&c))
    }

    /// An ambient representative of the class with the given coordinates.
    pub fn lift(&self, c: &[Scalar]) -> Vector {
        self.top.combine(&self.quotient.lift(c))
    }

    pub fn representatives(&self) -> Vec<Vector> {
        (0..self.dim())
            .map(|i| self.lift(&unit_vec(self.dim(), i)))
            .collect()
    }
}

/// Result of the exact positive semidefiniteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsdVerdict {
    PositiveSemidefinite,
    NotSymmetric,
    /// A negative pivot occurred at the given index.
    NegativePivot(usize),
    /// A zero pivot whose row is not zero; the matrix has an indefinite 2x2 minor.
    IndefiniteZeroPivot(usize),
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::PositiveSemidefinite)
    }
}

/// Exact PSD test by symmetric elimination (LDL^T with diagonal pivoting).
pub fn psd_test(m: &Matrix) -> PsdVerdict {
    if !m.is_symmetric() {
        return PsdVerdict::NotSymmetric;
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut alive = vec![true; n];
    loop {
        let live: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        if live.is_empty() {
            return PsdVerdict::PositiveSemidefinite;
        }
        let pivot = live.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let Some(p) = pivot else {
            // All remaining diagonal entries vanish, so every remaining entry must vanish.
            for &i in &live {
                if live.iter().any(|&j| !a[(i, j)].is_zero()) {
                    return PsdVerdict::IndefiniteZeroPivot(i);
                }
            }
            return PsdVerdict::PositiveSemidefinite;
        };
        if a[(p, p)].signum() == Ordering::Less {
            return PsdVerdict::NegativePivot(p);
        }
        let inv = a[(p, p)].try_inv().unwrap();
        alive[p] = false;
        for &i in &live {
            if i == p || a[(i, p)].is_zero() {
                continue;
            }
            let f = &a[(i, p)] * &inv;
            for &j in &live {
                if j != p && !a[(p, j)].is_zero() {
                    a[(i, j)] = &a[(i, j)] - &(&f * &a[(p, j)]);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![v(&[-2, 1, 0]), v(&[-3, 0, 1])]);
        assert_eq!(image_basis(&m), vec![v(&[1, 2])]);
    }

    #[test]
    fn pivot_is_first_nonzero_from_top() {
        let m = Matrix::from_i64(&[&[0, 1], &[2, 0], &[3, 0]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.matrix.row(0), v(&[1, 0]).as_slice());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.try_mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(
            Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse(),
            Err(LinalgError::Singular)
        );
    }

    #[test]
    fn solve_reports_not_in_span() {
        let b = Matrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]);
        assert_eq!(
            solve_in_span(&b, &v(&[3, 4, 0])),
            SpanSolution::InSpan(v(&[3, 4]))
        );
        assert_eq!(solve_in_span(&b, &v(&[0, 0, 1])), SpanSolution::NotInSpan);
    }

    #[test]
    fn quotient_representatives_skip_pivots() {
        let s = Subspace::span(3, &[v(&[1, 1, 0])]);
        let q = QuotientSpace::new(&s);
        assert_eq!(q.representative_indices(), &[1, 2]);
        assert_eq!(q.project(&v(&[1, 1, 0])), v(&[0, 0]));
        assert_eq!(q.project(&v(&[1, 0, 0])), v(&[-1, 0]));
    }

    #[test]
    fn subquotient_classes() {
        let z = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[1, 1, 0])]);
        let sq = Subquotient::new(&z, &b).unwrap();
        assert_eq!(sq.dim(), 1);
        assert_eq!(sq.class_of(&v(&[0, 0, 1])), None);
        let c1 = sq.class_of(&v(&[1, 0, 0])).unwrap();
        let c2 = sq.class_of(&v(&[0, -1, 0])).unwrap();
        assert_eq!(c1, c2);
        let lifted = sq.lift(&c1);
        assert_eq!(sq.class_of(&lifted).unwrap(), c1);
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[0, 5, 0])));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn psd_cases() {
        assert!(psd_test(&Matrix::from_i64(&[&[2, 1], &[1, 2]])).is_psd());
        assert!(psd_test(&Matrix::from_i64(&[&[1, 1], &[1, 1]])).is_psd());
        assert!(psd_test(&Matrix::from_i64(&[&[0, 0], &[0, 3]])).is_psd());
        assert_eq!(
            psd_test(&Matrix::from_i64(&[&[1, 2], &[2, 1]])),
            PsdVerdict::NegativePivot(1)
        );
        assert_eq!(
            psd_test(&Matrix::from_i64(&[&[0, 1], &[1, 0]])),
            PsdVerdict::IndefiniteZeroPivot(0)
        );
        assert_eq!(
            psd_test(&Matrix::from_i64(&[&[1, 2], &[0, 1]])),
            PsdVerdict::NotSymmetric
        );
    }

    #[test]
    fn psd_with_sqrt3_entries() {
        let s = Scalar::sqrt(3).unwrap();
        let m = Matrix::from_rows(vec![
            vec![Scalar::from_int(1), s.clone()],
            vec![s.clone(), Scalar::from_int(3)],
        ])
        .unwrap();
        assert!(psd_test(&m).is_psd());
        let m2 = Matrix::from_rows(vec![
            vec![Scalar::from_int(1), s.clone()],
            vec![s, Scalar::from_int(2)],
        ])
        .unwrap();
        assert!(!psd_test(&m2).is_psd());
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-3i64..4, rows * cols).prop_map(move |xs| {
            let rows_v = xs
                .chunks(cols)
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect();
            Matrix::from_rows_with_cols(rows_v, cols).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix(4, 5)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(k.len() + m.rank(), 5);
            for x in &k {
                prop_assert!(is_zero_vec(&m.mul_vec(x)));
            }
        }

        #[test]
        fn quotient_dims(m in arb_matrix(5, 3)) {
            let s = Subspace::span(5, &m.columns());
            let q = QuotientSpace::new(&s);
            prop_assert_eq!(q.dim() + s.dim(), 5);
            for b in s.basis() {
                prop_assert!(is_zero_vec(&q.project(b)));
            }
            for i in 0..q.dim() {
                prop_assert_eq!(q.project(&q.representative(i)), unit_vec(q.dim(), i));
            }
        }

        #[test]
        fn gram_matrices_are_psd(m in arb_matrix(3, 4)) {
            let g = m.transpose().try_mul(&m).unwrap();
            prop_assert!(psd_test(&g).is_psd());
            let neg = g.scale(&Scalar::from_int(-1));
            prop_assert_eq!(psd_test(&neg).is_psd(), g.is_zero());
        }

        #[test]
        fn coordinates_round_trip(m in arb_matrix(4, 3), c in proptest::collection::vec(-3i64..4, 3)) {
            let s = Subspace::span(4, &m.columns());
            let x = m.mul_vec(&c.iter().map(|&t| Scalar::from_int(t)).collect::<Vec<_>>());
            let coords = s.coordinates(&x).unwrap();
            prop_assert_eq!(s.combine(&coords), x);
        }
    }
}
