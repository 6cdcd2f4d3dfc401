//! Lie algebras given by structure constants, their structural series and
//! ideals, derivations and centroid, and the standard ways of combining them.

use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::field::{Fe, Field, FieldError};
use crate::linalg::{EchelonBuilder, LinalgError, Matrix, Subspace};

/// Default cap on ideal-closure computations per sweep.
pub const DEFAULT_SWEEP_BUDGET: u64 = 2_000_000;

/// Largest supported dimension. Derivation algebras of small abelian
/// algebras are the largest objects built.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("bracket entry ({0}, {1}) needs 0 <= i < j < dim")]
    BadPair(usize, usize),
    #[error("bracket entry ({0}, {1}) appears twice")]
    DuplicatePair(usize, usize),
    #[error("expected length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("dimension {0} is not supported")]
    Dimension(usize),
    #[error("operands live over different fields")]
    MixedFields,
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("subspace is not a subalgebra")]
    NotSubalgebra,
    #[error("action is not a representation on basis pair ({0}, {1})")]
    NotRepresentation(usize, usize),
    #[error("action of basis element {0} is not a derivation")]
    NotDerivation(usize),
    #[error("cocycle identity fails on basis triple ({0}, {1}, {2})")]
    Cocycle(usize, usize, usize),
    #[error("sweep budget of {0} closure computations exceeded")]
    Budget(u64),
    #[error("restriction of scalars: {0}")]
    Restriction(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One row of an integer bracket table: `(i, j, [(k, c), ...])`.
pub type IntBracket<'a> = (usize, usize, &'a [(usize, i64)]);

/// Finite-dimensional Lie algebra with a fixed basis `b_0..b_{n-1}`.
#[derive(Clone)]
pub struct LieAlgebra {
    field: Field,
    dim: usize,
    // Full antisymmetric tensor: coordinate k of [b_i, b_j] at (i * n + j) * n + k.
    sc: Vec<Fe>,
    basis_names: Option<Vec<String>>,
    name: Option<String>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.sc == other.sc
    }
}

impl Eq for LieAlgebra {}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {} over GF({}^{})", self.dim, self.field.p(), self.field.m())?;
        if let Some(n) = &self.name {
            write!(f, ", {n}")?;
        }
        write!(f, ")")
    }
}

/// Calls `visit` once per line through the origin in `F^n`, with the
/// representative whose first nonzero coordinate is 1.
pub fn for_each_line<B>(field: &Field, n: usize, mut visit: impl FnMut(&[Fe]) -> ControlFlow<B>) -> ControlFlow<B> {
    let q = field.q() as u16;
    let mut v = vec![Fe::ZERO; n];
    for lead in 0..n {
        v.iter_mut().for_each(|a| *a = Fe::ZERO);
        v[lead] = Fe::ONE;
        loop {
            visit(&v)?;
            let mut k = n;
            loop {
                if k == lead + 1 {
                    break;
                }
                k -= 1;
                if v[k].0 + 1 < q {
                    v[k].0 += 1;
                    break;
                }
                v[k] = Fe::ZERO;
            }
            if v[lead + 1..].iter().all(|a| a.is_zero()) {
                break;
            }
        }
    }
    ControlFlow::Continue(())
}

/// Number of lines through the origin in `F^n`.
pub fn line_count(q: usize, n: usize) -> u128 {
    ((q as u128).pow(n as u32) - 1) / (q as u128 - 1)
}

impl LieAlgebra {
    /// Builds an algebra from the nonzero brackets `[b_i, b_j]`, `i < j`.
    pub fn new(field: &Field, dim: usize, brackets: &[(usize, usize, Vec<Fe>)]) -> Result<LieAlgebra, LieError> {
        let alg = LieAlgebra::new_unchecked(field, dim, brackets)?;
        alg.check_jacobi()?;
        Ok(alg)
    }

    fn new_unchecked(field: &Field, dim: usize, brackets: &[(usize, usize, Vec<Fe>)]) -> Result<LieAlgebra, LieError> {
        if dim > MAX_DIM {
            return Err(LieError::Dimension(dim));
        }
        let n = dim;
        let mut sc = vec![Fe::ZERO; n * n * n];
        let mut seen = vec![false; n * n];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= j || j >= n {
                return Err(LieError::BadPair(i, j));
            }
            if v.len() != n {
                return Err(LieError::Length { expected: n, got: v.len() });
            }
            if std::mem::replace(&mut seen[i * n + j], true) {
                return Err(LieError::DuplicatePair(i, j));
            }
            for k in 0..n {
                sc[(i * n + j) * n + k] = v[k];
                sc[(j * n + i) * n + k] = field.neg(v[k]);
            }
        }
        Ok(LieAlgebra { field: field.clone(), dim, sc, basis_names: None, name: None })
    }

    /// Builds an algebra from a bracket function evaluated on pairs `i < j`.
    pub fn from_fn(
        field: &Field,
        dim: usize,
        mut f: impl FnMut(usize, usize) -> Vec<Fe>,
    ) -> Result<LieAlgebra, LieError> {
        let mut brackets = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let v = f(i, j);
                if v.iter().any(|a| !a.is_zero()) {
                    brackets.push((i, j, v));
                }
            }
        }
        LieAlgebra::new(field, dim, &brackets)
    }

    /// Sparse integer table: `(i, j, [(k, c), ...])` means `[b_i, b_j] = sum c b_k`.
    /// Pairs may be listed in either order.
    pub fn from_int_table(field: &Field, dim: usize, table: &[IntBracket]) -> Result<LieAlgebra, LieError> {
        let mut brackets: Vec<(usize, usize, Vec<Fe>)> = Vec::new();
        for &(i, j, terms) in table {
            let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
            let mut v = vec![Fe::ZERO; dim];
            for &(k, c) in terms {
                if k >= dim {
                    return Err(LieError::BadPair(i, j));
                }
                v[k] = field.add(v[k], field.from_int(sign * c));
            }
            brackets.push((a, b, v));
        }
        LieAlgebra::new(field, dim, &brackets)
    }

    pub fn abelian(field: &Field, dim: usize) -> LieAlgebra {
        LieAlgebra::new(field, dim, &[]).expect("abelian algebra")
    }

    pub fn with_basis_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> LieAlgebra {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert_eq!(names.len(), self.dim, "one name per basis vector");
        self.basis_names = Some(names);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> LieAlgebra {
        self.name = Some(name.into());
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis_names.as_deref()
    }

    /// Index of a named basis vector.
    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis_names.as_ref()?.iter().position(|n| n == name)
    }

    pub fn unit(&self, i: usize) -> Vec<Fe> {
        let mut v = vec![Fe::ZERO; self.dim];
        v[i] = Fe::ONE;
        v
    }

    /// Coordinates of `[b_i, b_j]`.
    #[inline]
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Fe] {
        let n = self.dim;
        &self.sc[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// Nonzero brackets `[b_i, b_j]` with `i < j`, in lexicographic order.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<Fe>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.bracket_basis(i, j);
                if v.iter().any(|a| !a.is_zero()) {
                    out.push((i, j, v.to_vec()));
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.sc.iter().all(|a| a.is_zero())
    }

    pub fn bracket(&self, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
        assert_eq!(x.len(), self.dim, "vector length");
        assert_eq!(y.len(), self.dim, "vector length");
        let f = &self.field;
        let n = self.dim;
        let mut out = vec![Fe::ZERO; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (o, &s) in out.iter_mut().zip(self.bracket_basis(i, j)) {
                    *o = f.mul_add(*o, c, s);
                }
            }
        }
        out
    }

    /// `[b_i, y]`
    pub fn bracket_with_basis(&self, i: usize, y: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let n = self.dim;
        let mut out = vec![Fe::ZERO; n];
        for (j, &yj) in y.iter().enumerate() {
            if yj.is_zero() || i == j {
                continue;
            }
            for (o, &s) in out.iter_mut().zip(self.bracket_basis(i, j)) {
                *o = f.mul_add(*o, yj, s);
            }
        }
        out
    }

    /// Matrix of `y -> [x, y]`.
    pub fn ad(&self, x: &[Fe]) -> Matrix {
        let n = self.dim;
        let cols: Vec<Vec<Fe>> = (0..n).map(|j| self.bracket(x, &self.unit(j))).collect();
        Matrix::from_columns(&self.field, n, &cols)
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        self.ad(&self.unit(i))
    }

    /// Jacobi identity on all basis triples `i < j < k`.
    pub fn check_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim;
        let f = &self.field;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket(self.bracket_basis(i, j), &self.unit(k));
                    let b = self.bracket(self.bracket_basis(j, k), &self.unit(i));
                    let c = self.bracket(self.bracket_basis(k, i), &self.unit(j));
                    if (0..n).any(|t| !f.add(f.add(a[t], b[t]), c[t]).is_zero()) {
                        return Err(LieError::Jacobi(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn whole(&self) -> Subspace {
        Subspace::full(&self.field, self.dim)
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(&self.field, self.dim)
    }

    pub fn span(&self, vectors: &[Vec<Fe>]) -> Subspace {
        Subspace::span(&self.field, self.dim, vectors)
    }

    /// `[U, V]`, the span of brackets of basis vectors.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in u.basis() {
            for b in v.basis() {
                vs.push(self.bracket(a, b));
            }
        }
        self.span(&vs)
    }

    /// `L, L^(1), L^(2), ...` up to and including the first repeated term.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().unwrap();
            if last.is_zero() {
                return series;
            }
            let next = self.product_space(last, last);
            if next == *last {
                return series;
            }
            series.push(next);
        }
    }

    /// `L, [L,L], [L,[L,L]], ...` up to stabilization.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let whole = self.whole();
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_zero() {
                return series;
            }
            let next = self.product_space(&whole, last);
            if next == *last {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_zero()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_zero()
    }

    pub fn is_perfect(&self) -> bool {
        self.product_space(&self.whole(), &self.whole()).is_full()
    }

    /// Whether the subalgebra spanned by `rows` is solvable.
    pub fn span_is_solvable(&self, rows: &[Vec<Fe>]) -> bool {
        let mut cur = self.span(rows);
        loop {
            if cur.is_zero() {
                return true;
            }
            let next = self.product_space(&cur, &cur);
            if next.dim() == cur.dim() {
                return false;
            }
            cur = next;
        }
    }

    pub fn subspace_is_solvable(&self, u: &Subspace) -> bool {
        self.span_is_solvable(u.basis())
    }

    pub fn center(&self) -> Subspace {
        self.centralizer(&self.whole())
    }

    /// `{x : [x, U] = 0}`
    pub fn centralizer(&self, u: &Subspace) -> Subspace {
        let n = self.dim;
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for b in u.basis() {
            // x -> [x, b] = -[b, x]
            let adb = self.ad(b);
            for r in 0..n {
                rows.push(adb.row(r).to_vec());
            }
        }
        if rows.is_empty() {
            return self.whole();
        }
        Matrix::from_rows(&self.field, &rows).expect("rectangular").kernel()
    }

    pub fn is_ideal(&self, u: &Subspace) -> bool {
        (0..self.dim).all(|i| u.basis().iter().all(|b| u.contains(&self.bracket_with_basis(i, b))))
    }

    pub fn is_subalgebra(&self, u: &Subspace) -> bool {
        let b = u.basis();
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| u.contains(&self.bracket(&b[i], &b[j]))))
    }

    /// Smallest ideal containing `v`.
    pub fn ideal_closure(&self, v: &[Fe]) -> Subspace {
        self.closure_limited(v, self.dim).expect("no limit").to_subspace(&self.field)
    }

    /// Ideal closure, abandoned as soon as its dimension exceeds `limit`.
    fn closure_limited(&self, v: &[Fe], limit: usize) -> Option<EchelonBuilder> {
        let f = &self.field;
        let mut eb = EchelonBuilder::new(self.dim);
        let mut queue: Vec<Vec<Fe>> = Vec::new();
        if let Some(r) = eb.insert(f, v) {
            queue.push(r.to_vec());
        }
        if eb.dim() > limit {
            return None;
        }
        while let Some(u) = queue.pop() {
            for i in 0..self.dim {
                let w = self.bracket_with_basis(i, &u);
                if let Some(r) = eb.insert(f, &w) {
                    let r = r.to_vec();
                    if eb.dim() > limit {
                        return None;
                    }
                    queue.push(r);
                }
            }
        }
        Some(eb)
    }

    /// The solvable radical, by summing the solvable single-generator ideal closures.
    pub fn radical(&self) -> Result<Subspace, LieError> {
        self.radical_with_budget(DEFAULT_SWEEP_BUDGET)
    }

    pub fn radical_with_budget(&self, budget: u64) -> Result<Subspace, LieError> {
        if self.is_solvable() {
            return Ok(self.whole());
        }
        // A nonsolvable algebra has a semisimple quotient of dimension at least 3.
        let limit = self.dim - 3;
        let f = &self.field;
        let mut rad = self.zero_subspace();
        let mut count = 0u64;
        let flow = for_each_line(f, self.dim, |v| {
            // Only vectors vanishing on the pivots of the current sum are needed:
            // every coset of the sum has exactly one such representative.
            if rad.pivots().iter().any(|&pc| !v[pc].is_zero()) {
                return ControlFlow::Continue(());
            }
            count += 1;
            if count > budget {
                return ControlFlow::Break(());
            }
            if let Some(c) = self.closure_limited(v, limit) {
                if self.span_is_solvable(c.rows()) {
                    rad = rad.sum(&c.to_subspace(f));
                }
            }
            ControlFlow::Continue(())
        });
        match flow {
            ControlFlow::Break(()) => Err(LieError::Budget(budget)),
            ControlFlow::Continue(()) => Ok(rad),
        }
    }

    pub fn is_simple(&self) -> Result<bool, LieError> {
        self.is_simple_with_budget(DEFAULT_SWEEP_BUDGET)
    }

    /// Nonabelian, and every nonzero vector generates the whole algebra as an ideal.
    pub fn is_simple_with_budget(&self, budget: u64) -> Result<bool, LieError> {
        if self.is_abelian() {
            return Ok(false);
        }
        let mut count = 0u64;
        let flow = for_each_line(&self.field, self.dim, |v| {
            count += 1;
            if count > budget {
                return ControlFlow::Break(Err(LieError::Budget(budget)));
            }
            let c = self.closure_limited(v, self.dim).expect("no limit");
            if c.dim() < self.dim {
                return ControlFlow::Break(Ok(false));
            }
            ControlFlow::Continue(())
        });
        match flow {
            ControlFlow::Break(r) => r,
            ControlFlow::Continue(()) => Ok(true),
        }
    }

    /// `L / I`, on the complement spanned by the non-pivot coordinates of `I`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient, LieError> {
        if ideal.ambient() != self.dim {
            return Err(LieError::Length { expected: self.dim, got: ideal.ambient() });
        }
        if !self.is_ideal(ideal) {
            return Err(LieError::NotIdeal);
        }
        let comp = ideal.non_pivots();
        let d = comp.len();
        let project = |v: &[Fe]| -> Vec<Fe> {
            let r = ideal.reduce(v);
            comp.iter().map(|&c| r[c]).collect()
        };
        let cols: Vec<Vec<Fe>> = (0..self.dim).map(|j| project(&self.unit(j))).collect();
        let projection = Matrix::from_columns(&self.field, d, &cols);
        let algebra = LieAlgebra::from_fn(&self.field, d, |a, b| project(self.bracket_basis(comp[a], comp[b])))?;
        let algebra = match &self.basis_names {
            Some(names) => algebra.with_basis_names(comp.iter().map(|&c| names[c].clone())),
            None => algebra,
        };
        Ok(Quotient { algebra, projection, complement: comp })
    }

    /// The subalgebra `U` as an algebra on its RREF basis.
    pub fn subalgebra(&self, u: &Subspace) -> Result<LieAlgebra, LieError> {
        if !self.is_subalgebra(u) {
            return Err(LieError::NotSubalgebra);
        }
        let b = u.basis();
        LieAlgebra::from_fn(&self.field, b.len(), |i, j| {
            u.coordinates(&self.bracket(&b[i], &b[j])).expect("closed under bracket")
        })
    }

    /// Linear maps commuting with every `ad b_i`, flattened row-major.
    pub fn centroid(&self) -> Subspace {
        let n = self.dim;
        let f = &self.field;
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut rows = Vec::new();
        for a in &ads {
            for r in 0..n {
                for c in 0..n {
                    // (X A - A X)[r][c]
                    let mut row = vec![Fe::ZERO; n * n];
                    for k in 0..n {
                        row[r * n + k] = f.add(row[r * n + k], a.get(k, c));
                        row[k * n + c] = f.sub(row[k * n + c], a.get(r, k));
                    }
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return Subspace::full(f, n * n);
        }
        Matrix::from_rows(f, &rows).expect("rectangular").kernel()
    }

    /// Derivations `D[x,y] = [Dx,y] + [x,Dy]`, as a Lie algebra under commutator.
    pub fn derivation_algebra(&self) -> Result<DerivationAlgebra, LieError> {
        let n = self.dim;
        let f = &self.field;
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    // Unknown D[r][c] sits at r * n + c; D b_i is column i.
                    let mut row = vec![Fe::ZERO; n * n];
                    let cij = self.bracket_basis(i, j);
                    for l in 0..n {
                        row[k * n + l] = f.add(row[k * n + l], cij[l]);
                        row[l * n + i] = f.sub(row[l * n + i], self.bracket_basis(l, j)[k]);
                        row[l * n + j] = f.sub(row[l * n + j], self.bracket_basis(i, l)[k]);
                    }
                    rows.push(row);
                }
            }
        }
        let space = if rows.is_empty() {
            Subspace::full(f, n * n)
        } else {
            Matrix::from_rows(f, &rows).expect("rectangular").kernel()
        };
        let matrices: Vec<Matrix> =
            space.basis().iter().map(|b| Matrix::from_data(f, n, n, b.clone()).expect("square")).collect();
        let d = matrices.len();
        let algebra = LieAlgebra::from_fn(f, d, |a, b| {
            let c = matrices[a].commutator(&matrices[b]);
            space.coordinates(c.data()).expect("derivations are closed under commutator")
        })?;
        let inner_cols: Vec<Vec<Fe>> =
            (0..n).map(|i| space.coordinates(self.ad_basis(i).data()).expect("inner derivation")).collect();
        let inner = Matrix::from_columns(f, d, &inner_cols);
        Ok(DerivationAlgebra { algebra, matrices, inner, space })
    }

    /// Whether `d` is a derivation.
    pub fn is_derivation(&self, d: &Matrix) -> bool {
        let n = self.dim;
        if d.rows() != n || d.cols() != n {
            return false;
        }
        let cols: Vec<Vec<Fe>> = (0..n).map(|i| d.column(i)).collect();
        let f = &self.field;
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let lhs = d.apply(self.bracket_basis(i, j));
                let a = self.bracket(&cols[i], &self.unit(j));
                let b = self.bracket(&self.unit(i), &cols[j]);
                (0..n).all(|k| lhs[k] == f.add(a[k], b[k]))
            })
        })
    }

    /// Whether `m` (columns are images of basis vectors) is an automorphism.
    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        let n = self.dim;
        if m.rows() != n || m.cols() != n || !m.is_invertible() {
            return false;
        }
        let cols: Vec<Vec<Fe>> = (0..n).map(|i| m.column(i)).collect();
        (0..n).all(|i| (i + 1..n).all(|j| self.bracket(&cols[i], &cols[j]) == m.apply(self.bracket_basis(i, j))))
    }

    /// Structure constants in the basis given by the columns of `m`.
    pub fn change_basis(&self, m: &Matrix) -> Result<LieAlgebra, LieError> {
        let inv = m.inverse().ok_or(LieError::Linalg(LinalgError::Shape("singular basis change".into())))?;
        let cols: Vec<Vec<Fe>> = (0..self.dim).map(|i| m.column(i)).collect();
        LieAlgebra::from_fn(&self.field, self.dim, |i, j| inv.apply(&self.bracket(&cols[i], &cols[j])))
    }
}

/// A quotient algebra with its projection (a `dim(L/I) x dim L` matrix).
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: LieAlgebra,
    pub projection: Matrix,
    /// Coordinates of `L` whose unit vectors map to the quotient basis.
    pub complement: Vec<usize>,
}

/// The derivation algebra with explicit matrices.
#[derive(Debug, Clone)]
pub struct DerivationAlgebra {
    /// Structure constants on the basis `matrices`.
    pub algebra: LieAlgebra,
    pub matrices: Vec<Matrix>,
    /// Column `i` holds the coordinates of `ad b_i`.
    pub inner: Matrix,
    /// The derivations as a subspace of flattened `n x n` matrices.
    pub space: Subspace,
}

impl DerivationAlgebra {
    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    /// Dimension of the space of inner derivations.
    pub fn inner_dim(&self) -> usize {
        self.inner.rank()
    }
}

/// A representation given by the action matrices of the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    source: LieAlgebra,
    actions: Vec<Matrix>,
}

impl Representation {
    pub fn new(source: &LieAlgebra, actions: Vec<Matrix>) -> Result<Representation, LieError> {
        let n = source.dim();
        if actions.len() != n {
            return Err(LieError::Length { expected: n, got: actions.len() });
        }
        let d = actions.first().map_or(0, Matrix::rows);
        if actions.iter().any(|a| a.rows() != d || a.cols() != d) {
            return Err(LieError::Linalg(LinalgError::Shape("action matrices must be square of one size".into())));
        }
        if actions.iter().any(|a| a.field() != source.field()) {
            return Err(LieError::MixedFields);
        }
        let rep = Representation { source: source.clone(), actions };
        for i in 0..n {
            for j in i + 1..n {
                if rep.act(source.bracket_basis(i, j)) != rep.actions[i].commutator(&rep.actions[j]) {
                    return Err(LieError::NotRepresentation(i, j));
                }
            }
        }
        Ok(rep)
    }

    pub fn trivial(source: &LieAlgebra, d: usize) -> Representation {
        let z = Matrix::zeros(source.field(), d, d);
        Representation::new(source, vec![z; source.dim()]).expect("trivial module")
    }

    pub fn adjoint(source: &LieAlgebra) -> Representation {
        let acts = (0..source.dim()).map(|i| source.ad_basis(i)).collect();
        Representation::new(source, acts).expect("adjoint module")
    }

    pub fn source(&self) -> &LieAlgebra {
        &self.source
    }

    pub fn module_dim(&self) -> usize {
        self.actions.first().map_or(0, Matrix::rows)
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    /// `rho(x)` for a coordinate vector `x`.
    pub fn act(&self, x: &[Fe]) -> Matrix {
        let f = self.source.field();
        let d = self.module_dim();
        let mut m = Matrix::zeros(f, d, d);
        for (a, &c) in self.actions.iter().zip(x) {
            if !c.is_zero() {
                m = m.add(&a.scale(c));
            }
        }
        m
    }

    /// The contragredient module, `x -> -rho(x)^T`.
    pub fn dual(&self) -> Representation {
        let f = self.source.field();
        let acts = self.actions.iter().map(|a| a.transpose().scale(f.neg(Fe::ONE))).collect();
        Representation::new(&self.source, acts).expect("dual of a module")
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, LieError> {
        if self.source != other.source {
            return Err(LieError::MixedFields);
        }
        let f = self.source.field();
        let (d1, d2) = (self.module_dim(), other.module_dim());
        let acts = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(f, d1 + d2, d1 + d2);
                for r in 0..d1 {
                    for c in 0..d1 {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..d2 {
                    for c in 0..d2 {
                        m.set(d1 + r, d1 + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        Representation::new(&self.source, acts)
    }
}

/// A scalar 2-cocycle, stored as an antisymmetric `n x n` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle2 {
    source: LieAlgebra,
    values: Matrix,
}

impl Cocycle2 {
    /// `values` lists `omega(b_i, b_j)` for `i < j`; omitted pairs are zero.
    pub fn new(source: &LieAlgebra, values: &[(usize, usize, Fe)]) -> Result<Cocycle2, LieError> {
        let n = source.dim();
        let f = source.field();
        let mut m = Matrix::zeros(f, n, n);
        for &(i, j, v) in values {
            if i >= j || j >= n {
                return Err(LieError::BadPair(i, j));
            }
            m.set(i, j, v);
            m.set(j, i, f.neg(v));
        }
        let c = Cocycle2 { source: source.clone(), values: m };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = c.eval(source.bracket_basis(i, j), &source.unit(k));
                    let b = c.eval(source.bracket_basis(j, k), &source.unit(i));
                    let d = c.eval(source.bracket_basis(k, i), &source.unit(j));
                    if !f.add(f.add(a, b), d).is_zero() {
                        return Err(LieError::Cocycle(i, j, k));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn zero(source: &LieAlgebra) -> Cocycle2 {
        Cocycle2::new(source, &[]).expect("zero cocycle")
    }

    pub fn eval(&self, x: &[Fe], y: &[Fe]) -> Fe {
        let f = self.source.field();
        let my = self.values.apply(y);
        x.iter().zip(&my).fold(Fe::ZERO, |acc, (&a, &b)| f.mul_add(acc, a, b))
    }
}

fn check_same_field(a: &LieAlgebra, b: &LieAlgebra) -> Result<(), LieError> {
    if a.field != b.field {
        Err(LieError::MixedFields)
    } else {
        Ok(())
    }
}

fn concat_names(a: &LieAlgebra, b: &LieAlgebra) -> Option<Vec<String>> {
    let an = a.basis_names.clone()?;
    let bn = b.basis_names.clone()?;
    Some(an.into_iter().chain(bn).collect())
}

/// `A ⊕ B` with `[A, B] = 0`; basis of `A` first.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Result<LieAlgebra, LieError> {
    check_same_field(a, b)?;
    let (na, nb) = (a.dim, b.dim);
    let n = na + nb;
    let alg = LieAlgebra::from_fn(&a.field, n, |i, j| {
        let mut v = vec![Fe::ZERO; n];
        if j < na {
            v[..na].copy_from_slice(a.bracket_basis(i, j));
        } else if i >= na {
            v[na..].copy_from_slice(b.bracket_basis(i - na, j - na));
        }
        v
    })?;
    Ok(match concat_names(a, b) {
        Some(names) => alg.with_basis_names(names),
        None => alg,
    })
}

/// `P ⋉ R` with `[p, r] = rho(p) r`; basis of `P` first.
pub fn semidirect_sum(p: &LieAlgebra, rep: &Representation, r: &LieAlgebra) -> Result<LieAlgebra, LieError> {
    check_same_field(p, r)?;
    if rep.source() != p {
        return Err(LieError::MixedFields);
    }
    if rep.module_dim() != r.dim {
        return Err(LieError::Length { expected: r.dim, got: rep.module_dim() });
    }
    for (i, a) in rep.actions().iter().enumerate() {
        if !r.is_derivation(a) {
            return Err(LieError::NotDerivation(i));
        }
    }
    let (np, nr) = (p.dim, r.dim);
    let n = np + nr;
    let alg = LieAlgebra::from_fn(&p.field, n, |i, j| {
        let mut v = vec![Fe::ZERO; n];
        if j < np {
            v[..np].copy_from_slice(p.bracket_basis(i, j));
        } else if i < np {
            v[np..].copy_from_slice(&rep.actions()[i].column(j - np));
        } else {
            v[np..].copy_from_slice(r.bracket_basis(i - np, j - np));
        }
        v
    })?;
    Ok(match concat_names(p, r) {
        Some(names) => alg.with_basis_names(names),
        None => alg,
    })
}

/// `L ⊕ kz` with `[x, y]' = [x, y] + omega(x, y) z`; `z` is the last basis vector.
pub fn central_extension(l: &LieAlgebra, omega: &Cocycle2) -> Result<LieAlgebra, LieError> {
    if &omega.source != l {
        return Err(LieError::MixedFields);
    }
    let n = l.dim;
    let alg = LieAlgebra::from_fn(&l.field, n + 1, |i, j| {
        let mut v = vec![Fe::ZERO; n + 1];
        if j < n {
            v[..n].copy_from_slice(l.bracket_basis(i, j));
            v[n] = omega.values.get(i, j);
        }
        v
    })?;
    Ok(match &l.basis_names {
        Some(names) => alg.with_basis_names(names.iter().cloned().chain(["z".to_string()])),
        None => alg,
    })
}

/// `kd ⊕ L` with `[d, x] = D x`; `d` is the first basis vector.
pub fn adjoin_derivation(l: &LieAlgebra, d: &Matrix) -> Result<LieAlgebra, LieError> {
    if !l.is_derivation(d) {
        return Err(LieError::NotDerivation(0));
    }
    let n = l.dim;
    let alg = LieAlgebra::from_fn(&l.field, n + 1, |i, j| {
        let mut v = vec![Fe::ZERO; n + 1];
        if i == 0 {
            v[1..].copy_from_slice(&d.column(j - 1));
        } else {
            v[1..].copy_from_slice(l.bracket_basis(i - 1, j - 1));
        }
        v
    })?;
    Ok(match &l.basis_names {
        Some(names) => alg.with_basis_names(["d".to_string()].into_iter().chain(names.iter().cloned())),
        None => alg,
    })
}

/// Views an algebra over `K = GF(p^{2m})` as an algebra over `k = GF(p^m)`.
///
/// The embedding `k -> K` sends `x` to the enumeration-least root of the
/// modulus of `k` in `K`, and `theta` is the least element of `K` outside
/// the image. The result has basis `b_0..b_{n-1}, theta b_0..theta b_{n-1}`.
pub fn restrict_scalars(l: &LieAlgebra, small: &Field) -> Result<LieAlgebra, LieError> {
    let big = l.field();
    if big.p() != small.p() || big.m() != 2 * small.m() {
        return Err(LieError::Restriction(format!(
            "GF({}^{}) is not a quadratic extension of GF({}^{})",
            big.p(),
            big.m(),
            small.p(),
            small.m()
        )));
    }
    let modulus = small.modulus();
    let root = big
        .elements()
        .find(|&r| {
            let val = modulus.iter().rev().fold(Fe::ZERO, |acc, &c| big.add(big.mul(acc, r), big.from_int(c as i64)));
            val.is_zero()
        })
        .ok_or_else(|| LieError::Restriction("modulus has no root in the extension".into()))?;
    let embed: Vec<Fe> = small
        .elements()
        .map(|a| {
            small.coeffs(a).iter().rev().fold(Fe::ZERO, |acc, &c| big.add(big.mul(acc, root), big.from_int(c as i64)))
        })
        .collect();
    let theta = big.elements().find(|t| !embed.contains(t)).expect("proper extension");
    // coords[K element] = (u, v) with element = u + v theta.
    let mut coords = vec![(Fe::ZERO, Fe::ZERO); big.q()];
    for u in small.elements() {
        for v in small.elements() {
            let e = big.add(embed[u.code()], big.mul(embed[v.code()], theta));
            coords[e.code()] = (u, v);
        }
    }
    let n = l.dim();
    let scal = [Fe::ONE, theta];
    LieAlgebra::from_fn(small, 2 * n, |a, b| {
        let (i, si) = (a % n, a / n);
        let (j, sj) = (b % n, b / n);
        let s = big.mul(scal[si], scal[sj]);
        let mut v = vec![Fe::ZERO; 2 * n];
        for (k, &c) in l.bracket_basis(i, j).iter().enumerate() {
            let (u, w) = coords[big.mul(s, c).code()];
            v[k] = u;
            v[n + k] = w;
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg(f: &Field) -> LieAlgebra {
        LieAlgebra::from_int_table(f, 3, &[(0, 1, &[(2, 1)])]).unwrap()
    }

    fn sl2(f: &Field) -> LieAlgebra {
        // (e, h, f)
        LieAlgebra::from_int_table(f, 3, &[(1, 0, &[(0, 2)]), (1, 2, &[(2, -2)]), (0, 2, &[(1, 1)])]).unwrap()
    }

    #[test]
    fn jacobi_violation_reports_triple() {
        let f = Field::prime(3).unwrap();
        // [a,b]=a, [b,c]=b, [a,c]=0 fails Jacobi on (0,1,2).
        let err = LieAlgebra::from_int_table(&f, 3, &[(0, 1, &[(0, 1)]), (1, 2, &[(1, 1)])]).unwrap_err();
        assert_eq!(err, LieError::Jacobi(0, 1, 2));
    }

    #[test]
    fn rejects_malformed_tables() {
        let f = Field::prime(3).unwrap();
        let v = vec![Fe::ONE, Fe::ZERO, Fe::ZERO];
        assert_eq!(LieAlgebra::new(&f, 3, &[(1, 0, v.clone())]), Err(LieError::BadPair(1, 0)));
        assert_eq!(LieAlgebra::new(&f, 3, &[(0, 1, v.clone()), (0, 1, v)]), Err(LieError::DuplicatePair(0, 1)));
    }

    #[test]
    fn sl2_structure() {
        let f = Field::prime(5).unwrap();
        let l = sl2(&f);
        let adh = l.ad_basis(1);
        assert_eq!((adh.get(0, 0), adh.get(1, 1), adh.get(2, 2)), (Fe(2), Fe(0), Fe(3)));
        assert!(l.center().is_zero());
        assert!(l.is_perfect());
        assert!(l.is_simple().unwrap());
        assert!(l.radical().unwrap().is_zero());
        assert_eq!(l.centroid().dim(), 1);
        assert_eq!(l.derivation_algebra().unwrap().dim(), 3);
    }

    #[test]
    fn heisenberg_structure() {
        let f = Field::prime(3).unwrap();
        let l = heisenberg(&f);
        assert!(l.ad_basis(2).is_zero());
        assert_eq!(l.center().basis(), &[vec![Fe(0), Fe(0), Fe(1)]]);
        assert_eq!(l.ideal_closure(&l.unit(2)).dim(), 1);
        assert!(l.is_nilpotent());
        let q = l.quotient(&l.center()).unwrap();
        assert!(q.algebra.is_abelian());
        assert_eq!(q.algebra.dim(), 2);
    }

    #[test]
    fn line_enumeration_counts() {
        let f = Field::new(2, 2, None).unwrap();
        let mut n = 0;
        let _ = for_each_line::<()>(&f, 3, |_| {
            n += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(n as u128, line_count(4, 3));
    }

    #[test]
    fn gl2_radical_is_center() {
        let f = Field::prime(3).unwrap();
        let gl2 = direct_sum(&sl2(&f), &LieAlgebra::abelian(&f, 1)).unwrap();
        let rad = gl2.radical().unwrap();
        assert_eq!(rad, gl2.center());
        assert_eq!(rad.dim(), 1);
        let q = gl2.quotient(&rad).unwrap();
        assert!(!q.algebra.is_solvable());
    }

    #[test]
    fn restriction_doubles_dimension() {
        let f3 = Field::prime(3).unwrap();
        let f9 = Field::new(3, 2, None).unwrap();
        let r = restrict_scalars(&sl2(&f9), &f3).unwrap();
        assert_eq!(r.dim(), 6);
        assert_eq!(r.centroid().dim(), 2);
        assert!(r.radical().unwrap().is_zero());
        assert!(r.is_simple().unwrap());
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::new(2, 2, None).unwrap();
        assert!(restrict_scalars(&LieAlgebra::abelian(&f4, 1), &f2).unwrap().is_abelian());
        assert!(restrict_scalars(&sl2(&f9), &Field::prime(5).unwrap()).is_err());
    }

    #[test]
    fn non_ideal_quotient_rejected() {
        let f = Field::prime(5).unwrap();
        let l = sl2(&f);
        let u = l.span(&[l.unit(0)]);
        assert!(matches!(l.quotient(&u), Err(LieError::NotIdeal)));
    }
}
