//! Exact decisions on finite-dimensional commutative algebras: nilradical,
//! domain/field test with witnesses, localization at a prime.

use num_rational::BigRational;
use serde::Serialize;

use super::poly::RatPoly;
use super::{Elem, StructureRing};
use crate::linalg::{Field, Matrix, Scalar};

/// A nonzero `x` with `x^index = 0` and `x^(index-1) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentWitness {
    pub element: Elem,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainVerdict {
    ZeroRing,
    /// A field; `route` says how that was decided.
    Field {
        route: String,
    },
    /// Nonzero `x`, `y` with `xy = 0`.
    ZeroDivisors {
        x: Elem,
        y: Elem,
    },
}

impl DomainVerdict {
    pub fn is_domain(&self) -> bool {
        matches!(self, DomainVerdict::Field { .. })
    }
}

/// Localization `R_P` of an Artinian ring at a prime ideal `P`, realized as
/// `R / P^∞`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalAtPrime {
    #[serde(skip)]
    pub ring: StructureRing,
    #[serde(skip)]
    pub projection: Matrix,
    /// Basis of the maximal ideal `P R_P` (columns).
    #[serde(skip)]
    pub maximal: Matrix,
    /// Idempotent `e` of `R` with `R e ≅ R_P`.
    #[serde(skip)]
    pub idempotent: Elem,
    pub stable_power_index: usize,
    pub maximal_nilpotency: usize,
}

impl StructureRing {
    /// Nilradical basis. In characteristic p it is the kernel of a power of
    /// Frobenius; over ℚ it is the radical of the trace form.
    pub fn nilradical(&self) -> Matrix {
        let d = self.dim();
        match self.field() {
            Field::Prime(p) => {
                let frob_cols: Vec<Elem> = (0..d).map(|j| self.pow(&self.basis_vector(j), p)).collect();
                let frob = Matrix::from_columns(self.field(), d, &frob_cols);
                let mut k = 1u32;
                while (p as u128).pow(k) < d as u128 {
                    k += 1;
                }
                frob.pow(k as usize).kernel_basis()
            }
            Field::Rational => {
                let f = self.field();
                let mut rows = Vec::with_capacity(d);
                for i in 0..d {
                    let row = (0..d)
                        .map(|j| {
                            let prod = self.mul(&self.basis_vector(i), &self.basis_vector(j));
                            trace(&self.mult_matrix(&prod))
                        })
                        .collect();
                    rows.push(row);
                }
                if d == 0 {
                    return Matrix::zeros(f, 0, 0);
                }
                Matrix::from_rows(f, rows).expect("square").kernel_basis()
            }
        }
    }

    pub fn nilpotency_index(&self, x: &[Scalar]) -> Option<usize> {
        let mut power = x.to_vec();
        for k in 1..=self.dim() + 1 {
            if Self::is_zero_elem(&power) {
                return Some(k);
            }
            power = self.mul(&power, x);
        }
        None
    }

    /// `None` when reduced.
    pub fn nilpotent_witness(&self) -> Option<NilpotentWitness> {
        let nil = self.nilradical();
        if nil.cols() == 0 {
            return None;
        }
        let x = nil.column(0);
        let index = self
            .nilpotency_index(&x)
            .expect("nilradical element is nilpotent");
        Some(NilpotentWitness { element: x, index })
    }

    /// Decides whether the ring is a field (equivalently a domain, at finite
    /// dimension), returning an explicit pair of zero divisors otherwise.
    pub fn decide_domain(&self) -> DomainVerdict {
        if self.is_zero_ring() {
            return DomainVerdict::ZeroRing;
        }
        if let Some(w) = self.nilpotent_witness() {
            let prev = self.pow(&w.element, (w.index - 1) as u64);
            return DomainVerdict::ZeroDivisors {
                x: prev,
                y: w.element,
            };
        }
        match self.field() {
            Field::Prime(p) => self.decide_reduced_prime(p),
            Field::Rational => self.decide_reduced_rational(),
        }
    }

    /// Reduced over F_p: a product of finite fields, one per dimension of the
    /// Frobenius-fixed subalgebra.
    fn decide_reduced_prime(&self, p: u64) -> DomainVerdict {
        let d = self.dim();
        let f = self.field();
        let frob_cols: Vec<Elem> = (0..d).map(|j| self.pow(&self.basis_vector(j), p)).collect();
        let frob = Matrix::from_columns(f, d, &frob_cols);
        let fixed = frob.sub(&Matrix::identity(f, d)).kernel_basis();
        if fixed.cols() == 1 {
            return DomainVerdict::Field {
                route: "reduced, Frobenius-fixed subalgebra is the prime field".into(),
            };
        }
        let one = Matrix::column_vector(f, self.one());
        let x = (0..fixed.cols())
            .map(|c| fixed.column(c))
            .find(|v| !one.span_contains(&Matrix::column_vector(f, v.clone())))
            .expect("fixed subalgebra is larger than the prime field");
        // x^p = x, so Π_c (x - c) = 0 and some factor is a zero divisor.
        for c in f.elements().expect("finite field") {
            let z = self.sub(&x, &self.scale(&c, &self.one));
            let ker = self.mult_matrix(&z).kernel_basis();
            if ker.cols() > 0 {
                return DomainVerdict::ZeroDivisors {
                    x: z,
                    y: ker.column(0),
                };
            }
        }
        unreachable!("some x - c must be a zero divisor")
    }

    /// Reduced over ℚ: étale, so a primitive element exists; the ring is a
    /// field iff its minimal polynomial is irreducible.
    fn decide_reduced_rational(&self) -> DomainVerdict {
        let d = self.dim();
        let x = self
            .primitive_element()
            .expect("reduced rational algebras have a primitive element");
        let c = self.min_poly(&x);
        debug_assert_eq!(c.len(), d);
        // f(T) = T^d - Σ c_i T^i.
        let mut coeffs: Vec<BigRational> = c
            .iter()
            .map(|s| -s.as_rational().expect("rational").clone())
            .collect();
        coeffs.push(BigRational::from_integer(1.into()));
        let f = RatPoly::new(coeffs);
        match f.find_factor() {
            None => DomainVerdict::Field {
                route: format!(
                    "reduced, primitive element with irreducible minimal polynomial of degree {d}"
                ),
            },
            Some((g, h)) => DomainVerdict::ZeroDivisors {
                x: self.eval_poly(&g, &x),
                y: self.eval_poly(&h, &x),
            },
        }
    }

    fn eval_poly(&self, g: &RatPoly, x: &[Scalar]) -> Elem {
        let mut acc = self.zero();
        for c in g.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.scale(&Scalar::Rational(c.clone()), &self.one));
        }
        acc
    }

    /// An element whose powers span the ring, searched over small integer
    /// coordinates in a fixed order.
    pub fn primitive_element(&self) -> Option<Elem> {
        let d = self.dim();
        let f = self.field();
        let generates = |x: &Elem| self.min_poly(x).len() == d;
        for i in 0..d {
            let b = self.basis_vector(i);
            if generates(&b) {
                return Some(b);
            }
        }
        for bound in 1..=3i64 {
            let width = (2 * bound + 1) as usize;
            let total = width.checked_pow(d as u32)?;
            for mut code in 0..total {
                let x: Elem = (0..d)
                    .map(|_| {
                        let digit = (code % width) as i64 - bound;
                        code /= width;
                        f.from_i64(digit)
                    })
                    .collect();
                if generates(&x) {
                    return Some(x);
                }
            }
        }
        None
    }

    /// `R_P = R / P^∞` for a prime `P` (given by a basis), with the
    /// idempotent cutting out the local factor.
    pub fn localize_at_prime(&self, prime: &Matrix) -> LocalAtPrime {
        let (stable, index) = self.stable_power(prime);
        let (ring, projection) = self.quotient(&stable);
        let maximal = projection.mul(prime).column_space();
        let mut nil = 1;
        let mut power = maximal.clone();
        while power.cols() > 0 {
            power = ring.ideal_product(&power, &maximal);
            nil += 1;
        }
        // 1 = e + b with e ∈ Ann(P^∞), b ∈ P^∞.
        let ann = self.annihilator(&stable);
        let both = ann.hstack(&stable);
        let sol = both.solve_vec(&self.one()).expect("R = Ann(P^∞) ⊕ P^∞");
        let idempotent = ann.mul_vec(&sol[..ann.cols()]);
        LocalAtPrime {
            ring,
            projection,
            maximal,
            idempotent,
            stable_power_index: index,
            maximal_nilpotency: nil,
        }
    }
}

fn trace(m: &Matrix) -> Scalar {
    let mut acc = m.field().zero();
    for i in 0..m.rows() {
        acc = &acc + m.get(i, i);
    }
    acc
}
