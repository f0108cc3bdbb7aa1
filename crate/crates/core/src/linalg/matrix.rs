//! Dense matrices over a [`Field`] with exact Gauss-Jordan elimination.
//!
//! Entries are stored row by row. Every routine here is a pure function of its
//! inputs; shape errors between internally constructed matrices are bugs and
//! panic, while user-facing entry points (`solve`, `try_kron`) report them.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::{Field, Scalar};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Colimit of the chain `X -f-> X -f-> X -> ...` as `X / ker f^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainColimit {
    pub dim: usize,
    /// Canonical map from the first copy of `X` onto the colimit.
    pub projection: Matrix,
    /// First `N` with `rank f^N = rank f^(N+1)`.
    pub index: usize,
    /// `rank f^0, rank f^1, ..., rank f^(N+1)`.
    pub rank_trace: Vec<usize>,
    /// Basis (as columns) of the stable kernel `ker f^N`.
    pub stable_kernel: Matrix,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::input(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::input(format!(
                        "entry over {} in a matrix over {field}",
                        x.field()
                    )));
                }
                data.push(x);
            }
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds a matrix from row-major scalars with an explicit shape, which
    /// also covers matrices with zero rows or columns.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        debug_assert!(data.iter().all(|x| x.field() == field));
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Integer literal convenience, mostly for tests and the corpus.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c);
                row.iter().map(|&v| field.from_i64(v))
            })
            .collect();
        Matrix {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn column_vector(field: Field, entries: Vec<Scalar>) -> Matrix {
        let n = entries.len();
        Matrix::from_vec(field, n, 1, entries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        let cols = self.cols;
        self.data[r * cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in product");
        assert_eq!(
            self.cols,
            other.rows,
            "shape mismatch in product: {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!(self.field, other.field);
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Kronecker product; the basis vector `e_i (x) e_j` sits at index
    /// `i * dim_b + j`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in kron");
        let (ar, ac) = self.shape();
        let (br, bc) = other.shape();
        let mut out = Matrix::zeros(self.field, ar * br, ac * bc);
        for i in 0..ar {
            for j in 0..ac {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * br + k, j * bc + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn try_kron(&self, other: &Matrix) -> Result<Matrix, Error> {
        if self.field != other.field {
            return Err(Error::input(format!(
                "kron of matrices over {} and {}",
                self.field, other.field
            )));
        }
        Ok(self.kron(other))
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend(self.row(r).iter().cloned());
        }
        Matrix {
            field: self.field,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, len: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut out = Matrix::zeros(field, len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), len);
            for (i, x) in col.iter().enumerate() {
                out.set(i, j, x.clone());
            }
        }
        out
    }

    /// Row-major flattening, used to compare morphisms as vectors.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    /// Unique reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c) - &(&factor * m.get(row, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref {
            matrix: m,
            pivots,
            rank,
        }
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
        self.rref().rank
    }

    /// Columns form a basis of the null space. Free variable `f` contributes
    /// the vector with a 1 in slot `f`, so the basis is canonical.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { matrix, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            out.set(f, j, self.field.one());
            for (r, &p) in pivots.iter().enumerate() {
                out.set(p, j, -matrix.get(r, f));
            }
        }
        out
    }

    /// Some `x` with `self * x = b`, or `Ok(None)` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>, Error> {
        if self.rows != b.rows {
            return Err(Error::input(format!(
                "solve: coefficient matrix has {} rows, right-hand side {}",
                self.rows, b.rows
            )));
        }
        if self.field != b.field {
            return Err(Error::input("solve: field mismatch".to_string()));
        }
        let aug = self.hstack(b);
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, matrix.get(r, self.cols + j).clone());
            }
        }
        debug_assert_eq!(&self.mul(&x), b);
        Ok(Some(x))
    }

    /// Solves for a single column vector.
    pub fn solve_vec(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let rhs = Matrix::column_vector(self.field, b.to_vec());
        self.solve(&rhs)
            .expect("shape checked by caller")
            .map(|x| x.column(0))
    }

    /// Canonical basis of the column space: the nonzero rows of
    /// `rref(self^T)`, returned as columns.
    pub fn column_space(&self) -> Matrix {
        let Rref { matrix, rank, .. } = self.transpose().rref();
        let rows: Vec<usize> = (0..rank).collect();
        matrix.select_rows(&rows).transpose()
    }

    /// True when the column spans coincide.
    pub fn same_span(&self, other: &Matrix) -> bool {
        assert_eq!(self.rows, other.rows);
        self.column_space() == other.column_space()
    }

    /// True when every column of `other` lies in the column span of `self`.
    pub fn span_contains(&self, other: &Matrix) -> bool {
        assert_eq!(self.rows, other.rows);
        self.rank() == self.hstack(other).rank()
    }

    /// Canonical projection `F^n -> F^n / W` where `W` is spanned by the
    /// columns of `sub`. The quotient keeps the coordinates of the non-pivot
    /// columns of `rref(W^T)`, so the class of `e_j` for a non-pivot `j` is a
    /// basis vector of the quotient.
    pub fn quotient_projection(sub: &Matrix) -> Matrix {
        let n = sub.rows;
        let field = sub.field;
        let Rref { matrix, pivots, rank } = sub.transpose().rref();
        let keep: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut pi = Matrix::zeros(field, keep.len(), n);
        // x ~ x - sum_r x_{p_r} w_r, which vanishes on pivot slots.
        for (i, &k) in keep.iter().enumerate() {
            pi.set(i, k, field.one());
            for (r, &p) in pivots.iter().enumerate().take(rank) {
                let w = matrix.get(r, k);
                if !w.is_zero() {
                    pi.set(i, p, -w);
                }
            }
        }
        pi
    }

    /// Canonical projection onto the cokernel of `self`.
    pub fn cokernel_projection(&self) -> Matrix {
        Matrix::quotient_projection(self)
    }

    /// Right inverse `s` with `self * s = I`, for a surjective matrix.
    pub fn right_inverse(&self) -> Option<Matrix> {
        let id = Matrix::identity(self.field, self.rows);
        self.solve(&id).expect("square identity right-hand side")
    }

    /// `g` with `g * epi = f`, when `ker epi` is contained in `ker f`.
    pub fn factor_through_epi(f: &Matrix, epi: &Matrix) -> Option<Matrix> {
        let s = epi.right_inverse()?;
        let g = f.mul(&s);
        (g.mul(epi) == *f).then_some(g)
    }

    /// `g` with `mono * g = f`, when the image of `f` lies in that of `mono`.
    pub fn factor_through_mono(f: &Matrix, mono: &Matrix) -> Option<Matrix> {
        mono.solve(f).expect("row counts agree")
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let inv = self.right_inverse()?;
        (inv.mul(self) == Matrix::identity(self.field, self.rows)).then_some(inv)
    }

    /// Colimit of `X -self-> X -self-> ...`.
    pub fn chain_colimit(&self) -> Result<ChainColimit, Error> {
        if !self.is_square() {
            return Err(Error::input(format!(
                "chain colimit needs a square map, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut power = Matrix::identity(self.field, n);
        let mut trace = vec![n];
        let mut index = 0;
        loop {
            let next = power.mul(self);
            let r = next.rank();
            trace.push(r);
            if r == trace[index] {
                break;
            }
            power = next;
            index += 1;
        }
        assert!(index <= n, "chain stabilization index exceeds dimension");
        let stable_kernel = power.kernel_basis();
        let projection = Matrix::quotient_projection(&stable_kernel);
        Ok(ChainColimit {
            dim: projection.rows,
            projection,
            index,
            rank_trace: trace,
            stable_kernel,
        })
    }

    /// Colimit of an explicitly finite chain `X_0 -> X_1 -> ... -> X_k`: the
    /// last object, reached by the composite. The flag reports whether the
    /// chain had visibly stopped changing (last map invertible); a `false`
    /// flag means an intended infinite chain was cut short.
    pub fn finite_chain_colimit(maps: &[Matrix]) -> Result<(Matrix, bool), Error> {
        let Some(first) = maps.first() else {
            return Err(Error::input("empty chain".to_string()));
        };
        let mut comp = Matrix::identity(first.field, first.cols);
        for (i, m) in maps.iter().enumerate() {
            if m.cols != comp.rows {
                return Err(Error::input(format!("chain map {i} does not compose")));
            }
            comp = m.mul(&comp);
        }
        let settled = maps.last().is_some_and(Matrix::is_invertible);
        Ok((comp, settled))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Serialized form: row-major nested lists of scalar strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&Matrix> for MatrixRecord {
    fn from(m: &Matrix) -> Self {
        MatrixRecord {
            field: m.field,
            rows: m.rows,
            cols: m.cols,
            entries: (0..m.rows)
                .map(|r| m.row(r).iter().map(Scalar::to_machine_string).collect())
                .collect(),
        }
    }
}

impl TryFrom<&MatrixRecord> for Matrix {
    type Error = Error;

    fn try_from(rec: &MatrixRecord) -> Result<Matrix, Error> {
        if rec.entries.len() != rec.rows || rec.entries.iter().any(|r| r.len() != rec.cols) {
            return Err(Error::input("matrix record shape mismatch".to_string()));
        }
        let data = rec
            .entries
            .iter()
            .flatten()
            .map(|s| rec.field.parse_scalar(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_vec(rec.field, rec.rows, rec.cols, data))
    }
}
