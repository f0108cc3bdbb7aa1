//! Finite-dimensional commutative algebras over the base field, given by
//! structure constants. Elements are coordinate vectors.

mod decide;
pub mod poly;

pub use decide::{DomainVerdict, LocalAtPrime, NilpotentWitness};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

pub type Elem = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureRing {
    field: Field,
    /// `left[i]` is the matrix of multiplication by the `i`-th basis element.
    left: Vec<Matrix>,
    one: Elem,
}

impl StructureRing {
    /// Validates associativity, commutativity and the unit law exactly.
    pub fn new(field: Field, left: Vec<Matrix>, one: Elem) -> Result<StructureRing> {
        let ring = StructureRing::new_unchecked(field, left, one);
        let d = ring.dim();
        if ring.one.len() != d || ring.left.iter().any(|m| m.shape() != (d, d)) {
            return Err(Error::input("structure constants have the wrong shape"));
        }
        if let Some(msg) = ring.axiom_failure() {
            return Err(Error::input(msg));
        }
        Ok(ring)
    }

    pub(crate) fn new_unchecked(field: Field, left: Vec<Matrix>, one: Elem) -> StructureRing {
        StructureRing { field, left, one }
    }

    /// From products of basis elements: `table[i][j]` is `b_i b_j`.
    pub fn from_products(field: Field, table: &[Vec<Elem>], one: Elem) -> Result<StructureRing> {
        let d = table.len();
        let left = table
            .iter()
            .map(|row| Matrix::from_columns(field, d, row))
            .collect();
        StructureRing::new(field, left, one)
    }

    /// The zero ring.
    pub fn zero_ring(field: Field) -> StructureRing {
        StructureRing {
            field,
            left: Vec::new(),
            one: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.left.len()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.dim() == 0
    }

    pub fn one(&self) -> Elem {
        self.one.clone()
    }

    pub fn zero(&self) -> Elem {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Elem {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    /// Products of basis elements, `b_i b_j`.
    pub fn product_table(&self) -> Vec<Vec<Elem>> {
        self.left
            .iter()
            .map(|m| (0..self.dim()).map(|j| m.column(j)).collect())
            .collect()
    }

    pub fn mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let d = self.dim();
        let mut acc = Matrix::zeros(self.field, d, d);
        for (c, m) in x.iter().zip(&self.left) {
            if !c.is_zero() {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Elem {
        self.mult_matrix(x).mul_vec(y)
    }

    pub fn add(&self, x: &[Scalar], y: &[Scalar]) -> Elem {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &[Scalar], y: &[Scalar]) -> Elem {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, c: &Scalar, x: &[Scalar]) -> Elem {
        x.iter().map(|a| c * a).collect()
    }

    pub fn pow(&self, x: &[Scalar], mut e: u64) -> Elem {
        let mut base = x.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero_elem(x: &[Scalar]) -> bool {
        x.iter().all(Scalar::is_zero)
    }

    /// Inverse of `x`, verified by multiplication.
    pub fn inverse(&self, x: &[Scalar]) -> Option<Elem> {
        if self.is_zero_ring() {
            return Some(Vec::new());
        }
        let y = self.mult_matrix(x).solve_vec(&self.one)?;
        (self.mul(x, &y) == self.one).then_some(y)
    }

    pub fn is_unit(&self, x: &[Scalar]) -> bool {
        self.inverse(x).is_some()
    }

    /// Names the first violated ring axiom, if any.
    pub fn axiom_failure(&self) -> Option<String> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if self.left[i].column(j) != self.left[j].column(i) {
                    return Some(format!("not commutative: b{i}*b{j} != b{j}*b{i}"));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                let bij = self.left[i].column(j);
                for k in 0..d {
                    let lhs = self.mul(&bij, &self.basis_vector(k));
                    let rhs = self.left[i].mul_vec(&self.left[j].column(k));
                    if lhs != rhs {
                        return Some(format!("not associative at (b{i}*b{j})*b{k}"));
                    }
                }
            }
        }
        let u = self.mult_matrix(&self.one);
        if u != Matrix::identity(self.field, d) {
            return Some("unit coordinates do not act as the identity".into());
        }
        None
    }

    /// Canonical basis (as columns) of the ideal generated by `gens`.
    pub fn ideal(&self, gens: &[Elem]) -> Matrix {
        let d = self.dim();
        let mut cols = Vec::new();
        for g in gens {
            let m = self.mult_matrix(g);
            cols.extend((0..d).map(|j| m.column(j)));
        }
        Matrix::from_columns(self.field, d, &cols).column_space()
    }

    pub fn ideal_contains(ideal: &Matrix, x: &[Scalar]) -> bool {
        let v = Matrix::column_vector(ideal.field(), x.to_vec());
        ideal.span_contains(&v)
    }

    pub fn is_unit_ideal(&self, ideal: &Matrix) -> bool {
        ideal.cols() == self.dim()
    }

    /// Coefficients `s_i` with `Σ s_i g_i = target`, if the target lies in
    /// the ideal. The identity is re-verified before returning.
    pub fn express(&self, gens: &[Elem], target: &[Scalar]) -> Option<Vec<Elem>> {
        let d = self.dim();
        if d == 0 {
            return Some(vec![Vec::new(); gens.len()]);
        }
        if gens.is_empty() {
            return Self::is_zero_elem(target).then(Vec::new);
        }
        // Unknown (i, k) is coordinate k of s_i; its column is b_k g_i.
        let mut cols = Vec::with_capacity(gens.len() * d);
        for g in gens {
            let m = self.mult_matrix(g);
            cols.extend((0..d).map(|k| m.column(k)));
        }
        let a = Matrix::from_columns(self.field, d, &cols);
        let sol = a.solve_vec(target)?;
        let coeffs: Vec<Elem> = sol.chunks(d).map(<[Scalar]>::to_vec).collect();
        let mut acc = self.zero();
        for (s, g) in coeffs.iter().zip(gens) {
            acc = self.add(&acc, &self.mul(s, g));
        }
        (acc == target).then_some(coeffs)
    }

    /// `I·J`, spanned by products of basis vectors.
    pub fn ideal_product(&self, i: &Matrix, j: &Matrix) -> Matrix {
        let mut cols = Vec::new();
        for a in 0..i.cols() {
            for b in 0..j.cols() {
                cols.push(self.mul(&i.column(a), &j.column(b)));
            }
        }
        Matrix::from_columns(self.field, self.dim(), &cols).column_space()
    }

    /// The stable power `I^∞ = I^n` for large `n`, with the first `n` at
    /// which it settles.
    pub fn stable_power(&self, ideal: &Matrix) -> (Matrix, usize) {
        let mut cur = ideal.column_space();
        let mut n = 1;
        loop {
            let next = self.ideal_product(&cur, ideal);
            if next.cols() == cur.cols() {
                return (cur, n);
            }
            cur = next;
            n += 1;
        }
    }

    /// `{x : x I = 0}`.
    pub fn annihilator(&self, ideal: &Matrix) -> Matrix {
        let d = self.dim();
        // x ↦ (x·v_1, ..., x·v_k) stacked; its kernel.
        let mut blocks: Option<Matrix> = None;
        for c in 0..ideal.cols() {
            let m = self.mult_matrix(&ideal.column(c));
            blocks = Some(match blocks {
                None => m,
                Some(b) => b.vstack(&m),
            });
        }
        match blocks {
            None => Matrix::identity(self.field, d),
            Some(b) => b.kernel_basis(),
        }
    }

    /// Quotient ring `R/I` and the canonical projection.
    pub fn quotient(&self, ideal: &Matrix) -> (StructureRing, Matrix) {
        let pi = Matrix::quotient_projection(ideal);
        let q = pi.rows();
        if q == 0 {
            return (StructureRing::zero_ring(self.field), pi);
        }
        let lift = pi.right_inverse().expect("canonical projection is onto");
        let lifts: Vec<Elem> = (0..q).map(|a| lift.column(a)).collect();
        let left = lifts
            .iter()
            .map(|la| {
                let cols: Vec<Elem> = lifts.iter().map(|lb| pi.mul_vec(&self.mul(la, lb))).collect();
                Matrix::from_columns(self.field, q, &cols)
            })
            .collect();
        let ring = StructureRing::new_unchecked(self.field, left, pi.mul_vec(&self.one));
        (ring, pi)
    }

    /// Checks that `m` (columns = images of basis elements) is a unital ring
    /// map into `target`.
    pub fn is_ring_map(&self, m: &Matrix, target: &StructureRing) -> bool {
        if m.shape() != (target.dim(), self.dim()) || m.mul_vec(&self.one) != target.one {
            return false;
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let lhs = m.mul_vec(&self.left[i].column(j));
                let rhs = target.mul(&m.column(i), &m.column(j));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// An isomorphism test against `other` through a given linear bijection.
    pub fn is_iso_via(&self, m: &Matrix, other: &StructureRing) -> bool {
        m.is_invertible() && self.is_ring_map(m, other)
    }

    /// All elements, for rings over a finite field. `None` over ℚ.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        let scalars = self.field.elements()?;
        let mut out: Vec<Elem> = vec![Vec::new()];
        for _ in 0..self.dim() {
            out = out
                .into_iter()
                .flat_map(|v| {
                    scalars.iter().map(move |s| {
                        let mut w = v.clone();
                        w.push(s.clone());
                        w
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// Smallest `k` and coefficients `c` with `x^k = Σ_{i<k} c_i x^i`.
    pub fn min_poly(&self, x: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim();
        let mut powers = vec![self.one()];
        loop {
            let next = self.mul(powers.last().expect("nonempty"), x);
            let a = Matrix::from_columns(self.field, d, &powers);
            if let Some(c) = a.solve_vec(&next) {
                return c;
            }
            powers.push(next);
        }
    }

    /// Image of the ideal generated by `gens` under a ring map `m: self -> target`.
    pub fn extend_ideal(m: &Matrix, gens: &[Elem], target: &StructureRing) -> Matrix {
        let images: Vec<Elem> = gens.iter().map(|g| m.mul_vec(g)).collect();
        target.ideal(&images)
    }
}

#[cfg(test)]
mod tests;
