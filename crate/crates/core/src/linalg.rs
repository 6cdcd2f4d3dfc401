//! Dense linear algebra over a [`Field`]: row reduction, kernels, solving,
//! characteristic polynomials, Fitting decompositions and subspaces in RREF.

use std::fmt;

use thiserror::Error;

use crate::field::{Fe, Field, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    Ambient(usize, usize),
    #[error("operands belong to different fields")]
    MixedFields,
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&a| self.field.format(a)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_data(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Matrix, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!("{} entries for {rows}x{cols}", data.len())));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Result<Matrix, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Matrix::from_data(field, rows.len(), cols, rows.concat())
    }

    /// Integer entries reduced into the prime field.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vec<Fe>> = rows.iter().map(|r| r.iter().map(|&a| field.from_int(a)).collect()).collect();
        Matrix::from_rows(field, &rows).expect("rectangular integer matrix")
    }

    /// Matrix whose j-th column is `cols[j]`.
    pub fn from_columns(field: &Field, nrows: usize, cols: &[Vec<Fe>]) -> Matrix {
        let mut m = Matrix::zeros(field, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length");
            for (i, &a) in c.iter().enumerate() {
                m.set(i, j, a);
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.mul_add(out.data[idx], a, other.get(k, j));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Fe) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert!(self.is_square());
        let mut r = Matrix::identity(&self.field, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        (0..self.rows).map(|r| self.row(r).iter().zip(v).fold(Fe::ZERO, |acc, (&a, &b)| f.mul_add(acc, a, b))).collect()
    }

    /// Reduced row echelon form and rank.
    pub fn rref(&self) -> (Matrix, usize) {
        let mut m = self.clone();
        let pivots = rref_in_place(&self.field, &mut m.data, self.rows, self.cols);
        (m, pivots.len())
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let f = &self.field;
        let mut data = self.data.clone();
        let pivots = rref_in_place(f, &mut data, self.rows, self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<Fe>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[fc] = Fe::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(data[r * self.cols + fc]);
                }
                v
            })
            .collect();
        Subspace::span(f, self.cols, &basis)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        let cols: Vec<Vec<Fe>> = (0..self.cols).map(|c| self.column(c)).collect();
        Subspace::span(&self.field, self.rows, &cols)
    }

    /// One solution of `M x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Fe]) -> Result<Option<Vec<Fe>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape(format!("rhs of length {} for {} rows", b.len(), self.rows)));
        }
        let f = &self.field;
        let w = self.cols + 1;
        let mut aug = Vec::with_capacity(self.rows * w);
        for (r, &br) in b.iter().enumerate() {
            aug.extend_from_slice(self.row(r));
            aug.push(br);
        }
        let pivots = rref_in_place(f, &mut aug, self.rows, w);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[r * w + self.cols];
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        let w = 2 * n;
        let mut aug = vec![Fe::ZERO; n * w];
        for r in 0..n {
            aug[r * w..r * w + n].copy_from_slice(self.row(r));
            aug[r * w + n + r] = Fe::ONE;
        }
        let pivots = rref_in_place(f, &mut aug, n, w);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = (0..n).flat_map(|r| aug[r * w + n..r * w + w].to_vec()).collect();
        Some(Matrix { field: f.clone(), rows: n, cols: n, data })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Characteristic polynomial `det(T I - A)`, monic of degree n.
    pub fn char_poly(&self) -> Result<Poly, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut h = self.data.clone();
        Ok(Poly::new(char_poly_in_place(&self.field, &mut h, self.rows)))
    }

    /// Evaluates a polynomial at this (square) matrix.
    pub fn eval_poly(&self, p: &Poly) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Matrix::identity(&self.field, n).scale(c));
        }
        acc
    }

    /// Fitting decomposition: generalized kernel and stable image of `A^n`.
    pub fn fitting(&self) -> Result<(Subspace, Subspace), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let an = self.pow(self.rows as u32);
        Ok((an.kernel(), an.image()))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u32).is_zero()
    }
}

/// In-place reduced row echelon form of a `rows x cols` row-major block.
/// Returns the pivot columns.
pub fn rref_in_place(f: &Field, a: &mut [Fe], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]);
        for j in c..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..cols {
                let v = a[r * cols + j];
                a[i * cols + j] = f.mul_add(a[i * cols + j], nf, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Characteristic polynomial coefficients (ascending, length n+1) by reduction
/// to upper Hessenberg form followed by the standard determinant recurrence.
/// Division-free apart from pivot inverses, so valid in every characteristic.
pub fn char_poly_in_place(f: &Field, h: &mut [Fe], n: usize) -> Vec<Fe> {
    let at = |i: usize, j: usize| i * n + j;
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h[at(i, m - 1)].is_zero()) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                h.swap(at(i, j), at(m, j));
            }
            for j in 0..n {
                h.swap(at(j, i), at(j, m));
            }
        }
        let inv = f.inv(h[at(m, m - 1)]);
        for i in m + 1..n {
            let u = f.mul(h[at(i, m - 1)], inv);
            if u.is_zero() {
                continue;
            }
            let nu = f.neg(u);
            for j in 0..n {
                let v = h[at(m, j)];
                h[at(i, j)] = f.mul_add(h[at(i, j)], nu, v);
            }
            for j in 0..n {
                let v = h[at(j, i)];
                h[at(j, m)] = f.mul_add(h[at(j, m)], u, v);
            }
        }
    }
    // p[k] is the characteristic polynomial of the leading k x k block.
    let mut p: Vec<Vec<Fe>> = Vec::with_capacity(n + 1);
    p.push(vec![Fe::ONE]);
    for m in 1..=n {
        let hmm = h[at(m - 1, m - 1)];
        let prev = &p[m - 1];
        let mut next = vec![Fe::ZERO; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = f.add(next[k + 1], c);
            next[k] = f.sub(next[k], f.mul(hmm, c));
        }
        let mut t = Fe::ONE;
        for i in 1..m {
            t = f.mul(t, h[at(m - i, m - i - 1)]);
            let coef = f.mul(h[at(m - i - 1, m - 1)], t);
            if coef.is_zero() {
                continue;
            }
            for (k, &c) in p[m - i - 1].iter().enumerate() {
                next[k] = f.sub(next[k], f.mul(coef, c));
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// A linear subspace of `F^n`, stored as its RREF basis, so equality is syntactic.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    n: usize,
    basis: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: ", self.dim(), self.n)?;
        for b in &self.basis {
            let row: Vec<String> = b.iter().map(|&a| self.field.format(a)).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, ")")
    }
}

/// Lattice operation selector for [`subspace_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersect,
    Contains,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceOpResult {
    Space(Subspace),
    Bool(bool),
}

pub fn subspace_op(u: &Subspace, v: &Subspace, op: SubspaceOp) -> Result<SubspaceOpResult, LinalgError> {
    if u.n != v.n {
        return Err(LinalgError::Ambient(u.n, v.n));
    }
    if u.field != v.field {
        return Err(LinalgError::MixedFields);
    }
    Ok(match op {
        SubspaceOp::Sum => SubspaceOpResult::Space(u.sum(v)),
        SubspaceOp::Intersect => SubspaceOpResult::Space(u.intersect(v)),
        SubspaceOp::Contains => SubspaceOpResult::Bool(v.is_subspace_of(u)),
        SubspaceOp::Equal => SubspaceOpResult::Bool(u == v),
    })
}

impl Subspace {
    pub fn zero(field: &Field, n: usize) -> Subspace {
        Subspace { field: field.clone(), n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &Field, n: usize) -> Subspace {
        let basis = (0..n)
            .map(|i| {
                let mut v = vec![Fe::ZERO; n];
                v[i] = Fe::ONE;
                v
            })
            .collect();
        Subspace { field: field.clone(), n, basis, pivots: (0..n).collect() }
    }

    /// Span of arbitrary vectors of length `n`.
    pub fn span(field: &Field, n: usize, vectors: &[Vec<Fe>]) -> Subspace {
        let mut data: Vec<Fe> = Vec::with_capacity(vectors.len() * n);
        for v in vectors {
            assert_eq!(v.len(), n, "vector length");
            data.extend_from_slice(v);
        }
        let pivots = rref_in_place(field, &mut data, vectors.len(), n);
        let basis = (0..pivots.len()).map(|r| data[r * n..(r + 1) * n].to_vec()).collect();
        Subspace { field: field.clone(), n, basis, pivots }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates outside the pivot columns; their unit vectors span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.n).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// `v` minus its component along the pivot columns.
    pub fn reduce(&self, v: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut w = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for (x, &y) in w.iter_mut().zip(b) {
                *x = f.mul_add(*x, nc, y);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        self.reduce(v).iter().all(|a| a.is_zero())
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    /// Linear combination of basis vectors.
    pub fn combine(&self, coords: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.n];
        for (b, &c) in self.basis.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(b) {
                *x = f.mul_add(*x, c, y);
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.n, other.n, "ambient dimension");
        let vs: Vec<Vec<Fe>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(&self.field, self.n, &vs)
    }

    pub fn with_vector(&self, v: &[Fe]) -> Subspace {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Subspace::span(&self.field, self.n, &vs)
    }

    /// Intersection through the kernel of `[U | -V]` acting on coefficient pairs.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.n, other.n, "ambient dimension");
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(f, self.n);
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|b| b.iter().map(|&a| f.neg(a)).collect::<Vec<_>>()));
        let m = Matrix::from_columns(f, self.n, &cols);
        let ker = m.kernel();
        let vs: Vec<Vec<Fe>> = ker.basis().iter().map(|k| self.combine(&k[..self.dim()])).collect();
        Subspace::span(f, self.n, &vs)
    }

    /// Rows of the basis as a `dim x n` matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_data(&self.field, self.dim(), self.n, self.basis.concat()).expect("rectangular")
    }

    /// Image under a linear map.
    pub fn map(&self, a: &Matrix) -> Subspace {
        let vs: Vec<Vec<Fe>> = self.basis.iter().map(|b| a.apply(b)).collect();
        Subspace::span(&self.field, a.rows(), &vs)
    }
}

/// Incremental semi-echelon basis used in hot loops. Rows have a unit pivot and
/// zeros in the pivot columns of earlier rows.
#[derive(Clone)]
pub struct EchelonBuilder {
    n: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl EchelonBuilder {
    pub fn new(n: usize) -> EchelonBuilder {
        EchelonBuilder { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    fn reduce_in_place(&self, f: &Field, w: &mut [Fe]) {
        for (b, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for (x, &y) in w.iter_mut().zip(b) {
                *x = f.mul_add(*x, nc, y);
            }
        }
    }

    /// Adds `v` if it is independent; returns the normalized new row when added.
    pub fn insert(&mut self, f: &Field, v: &[Fe]) -> Option<&[Fe]> {
        let mut w = v.to_vec();
        self.reduce_in_place(f, &mut w);
        let pc = w.iter().position(|a| !a.is_zero())?;
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push(w);
        self.pivots.push(pc);
        self.rows.last().map(|r| r.as_slice())
    }

    pub fn contains(&self, f: &Field, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(f, &mut w);
        w.iter().all(|a| a.is_zero())
    }

    pub fn to_subspace(&self, f: &Field) -> Subspace {
        Subspace::span(f, self.n, &self.rows)
    }
}
