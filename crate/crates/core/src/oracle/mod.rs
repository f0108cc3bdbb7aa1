//! Brute-force classical commutative algebra on structure constants.
//!
//! Everything here goes through [`crate::linalg`] only, so that engine
//! results can be checked against a route that shares no code with the
//! categorical constructions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

#[cfg(test)]
mod tests;

pub type Vector = Vec<Scalar>;

/// Exhaustive searches stay below `3^9` candidates.
pub const SEARCH_LIMIT: u64 = 19_683;

/// A finite-dimensional commutative unital algebra over a field, given by
/// the products of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalRing {
    field: Field,
    /// `table[i][j]` holds the coordinates of `b_i b_j`.
    table: Vec<Vec<Vector>>,
    unit: Vector,
}

impl ClassicalRing {
    pub fn new(field: Field, table: Vec<Vec<Vector>>, unit: Vector) -> Result<ClassicalRing> {
        let n = unit.len();
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return Err(Error::input("structure constants do not match the unit's dimension"));
        }
        let r = ClassicalRing { field, table, unit };
        r.check_axioms()?;
        Ok(r)
    }

    /// From an `n × n²` multiplication matrix, column `i·n + j` being `b_i b_j`.
    pub fn from_mult_matrix(mult: &Matrix, unit: Vector) -> Result<ClassicalRing> {
        let n = unit.len();
        if mult.shape() != (n, n * n) {
            return Err(Error::input("multiplication matrix must be n × n²"));
        }
        let table = (0..n).map(|i| (0..n).map(|j| mult.column(i * n + j)).collect()).collect();
        ClassicalRing::new(mult.field(), table, unit)
    }

    pub fn zero_ring(field: Field) -> ClassicalRing {
        ClassicalRing {
            field,
            table: Vec::new(),
            unit: Vec::new(),
        }
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.dim();
        let b = |i: usize| self.basis(i);
        for i in 0..n {
            if self.mul(&self.unit, &b(i)) != b(i) {
                return Err(Error::input(format!("unit law fails on basis vector {i}")));
            }
            for j in 0..n {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::input(format!("not commutative at ({i}, {j})")));
                }
                for k in 0..n {
                    let left = self.mul(&self.table[i][j], &b(k));
                    let right = self.mul(&b(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::input(format!("not associative at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn one(&self) -> Vector {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vector {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn add(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, c) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = &*o + &(&ab * c);
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[Scalar], e: usize) -> Vector {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    /// Matrix of `y ↦ x y`.
    pub fn mult_by(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    pub fn inverse(&self, x: &[Scalar]) -> Option<Vector> {
        self.mult_by(x).solve_vec(&self.unit)
    }

    /// All elements, when there are at most `limit` of them.
    pub fn elements(&self, limit: u64) -> Option<Vec<Vector>> {
        let q = self.field.order()?;
        let size = q.checked_pow(u32::try_from(self.dim()).ok()?)?;
        if size > limit {
            return None;
        }
        let digits = self.field.elements()?;
        let mut out = vec![Vec::new()];
        for _ in 0..self.dim() {
            out = out
                .into_iter()
                .flat_map(|v: Vector| {
                    digits.iter().map(move |d| {
                        let mut w = v.clone();
                        w.push(d.clone());
                        w
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// `m` (columns: images of the basis) is a unital ring map into `target`.
    pub fn is_ring_map(&self, m: &Matrix, target: &ClassicalRing) -> bool {
        if m.shape() != (target.dim(), self.dim()) || m.mul_vec(&self.unit) != target.unit {
            return false;
        }
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| {
                m.mul_vec(&self.table[i][j]) == target.mul(&m.column(i), &m.column(j))
            })
        })
    }

    /// The ideal generated by `gens`, as a column basis.
    pub fn ideal(&self, gens: &[Vector]) -> Matrix {
        let cols: Vec<Vector> = gens
            .iter()
            .flat_map(|g| (0..self.dim()).map(move |j| self.mul(g, &self.basis(j))))
            .collect();
        Matrix::from_columns(self.field, self.dim(), &cols).column_space()
    }
}

fn contains(span: &Matrix, v: &[Scalar]) -> bool {
    span.cols() == 0 && v.iter().all(Scalar::is_zero)
        || span.cols() > 0 && span.solve_vec(v).is_some()
}

/// `R_t` as `eR` for the idempotent `e` cutting out the part of `R` where
/// `t` is invertible (Fitting decomposition of multiplication by `t`).
#[derive(Clone, Debug)]
pub struct OracleLocalization {
    pub ring: ClassicalRing,
    /// `R -> R_t`, `x ↦ e x` in the basis of `eR`.
    pub map: Matrix,
    pub idempotent: Vector,
    /// Outcome of the exhaustive universal-quotient search, when run.
    pub brute_force: Option<bool>,
}

pub fn oracle_localize(r: &ClassicalRing, t: &[Scalar]) -> Result<OracleLocalization> {
    if t.len() != r.dim() {
        return Err(Error::input("element has the wrong length"));
    }
    let n = r.dim();
    let f = r.field();
    let power = r.mult_by(t).pow(n);
    let image = power.column_space();
    let kernel = power.kernel_basis();
    let m = image.cols();
    // 1 = k + e with k ∈ ker t^n and e ∈ im t^n.
    let split = kernel
        .hstack(&image)
        .solve_vec(&r.one())
        .expect("Fitting decomposition spans R");
    let e_coords = split[kernel.cols()..].to_vec();
    let idempotent = image.mul_vec(&e_coords);
    let in_image = |v: &[Scalar]| -> Vector {
        if m == 0 {
            Vec::new()
        } else {
            image.solve_vec(v).expect("eR is an ideal inside the image")
        }
    };
    let table: Vec<Vec<Vector>> = (0..m)
        .map(|a| (0..m).map(|b| in_image(&r.mul(&image.column(a), &image.column(b)))).collect())
        .collect();
    let ring = if m == 0 {
        ClassicalRing::zero_ring(f)
    } else {
        ClassicalRing::new(f, table, e_coords)?
    };
    let cols: Vec<Vector> = (0..n).map(|j| in_image(&r.mul(&idempotent, &r.basis(j)))).collect();
    let map = Matrix::from_columns(f, m, &cols);
    let brute_force = universal_inverting_ideal(r, t).map(|min| match min {
        Some(i) => i.same_span(&kernel_of(&map, n, f)),
        None => false,
    });
    Ok(OracleLocalization {
        ring,
        map,
        idempotent,
        brute_force,
    })
}

fn kernel_of(map: &Matrix, n: usize, f: Field) -> Matrix {
    if map.rows() == 0 {
        Matrix::identity(f, n)
    } else {
        map.kernel_basis()
    }
}

/// Over a small prime field: among all ideals `I` with `t` invertible in
/// `R/I`, the one contained in all others. `None` when not run.
fn universal_inverting_ideal(r: &ClassicalRing, t: &[Scalar]) -> Option<Option<Matrix>> {
    if r.field().order()? > 3 || r.dim() > 4 {
        return None;
    }
    let elems = r.elements(81)?;
    let ideals = all_ideals(r, &elems);
    let one = r.one();
    let inverting: Vec<&Matrix> = ideals
        .iter()
        .filter(|i| elems.iter().any(|y| contains(i, &r.sub(&r.mul(t, y), &one))))
        .collect();
    let minimal = inverting
        .iter()
        .find(|i| inverting.iter().all(|j| spans_within(i, j)))
        .map(|i| (*i).clone());
    Some(minimal)
}

fn spans_within(small: &Matrix, big: &Matrix) -> bool {
    small.cols() == 0 || big.cols() > 0 && big.span_contains(small)
}

fn all_ideals(r: &ClassicalRing, elems: &[Vector]) -> Vec<Matrix> {
    let mut ideals: Vec<Matrix> = Vec::new();
    let push = |m: Matrix, ideals: &mut Vec<Matrix>| {
        if !ideals.contains(&m) {
            ideals.push(m);
        }
    };
    for x in elems {
        push(r.ideal(std::slice::from_ref(x)), &mut ideals);
    }
    loop {
        let before = ideals.len();
        let snapshot = ideals.clone();
        for a in &snapshot {
            for b in &snapshot {
                push(a.hstack(b).column_space(), &mut ideals);
            }
        }
        if ideals.len() == before {
            return ideals;
        }
    }
}

/// `target ∈ (gens)` with coefficients `s_j` such that `Σ s_j g_j = target`.
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    pub coefficients: Option<Vec<Vector>>,
    /// Verdict of the exhaustive search over coefficient tuples, when run.
    pub exhaustive: Option<bool>,
}

pub fn oracle_ideal_membership(r: &ClassicalRing, gens: &[Vector], target: &[Scalar]) -> Result<Membership> {
    let n = r.dim();
    if target.len() != n || gens.iter().any(|g| g.len() != n) {
        return Err(Error::input("element has the wrong length"));
    }
    let f = r.field();
    let cols: Vec<Vector> = gens
        .iter()
        .flat_map(|g| (0..n).map(move |i| r.mul(&r.basis(i), g)))
        .collect();
    let coefficients = if cols.is_empty() {
        target.iter().all(Scalar::is_zero).then(Vec::new)
    } else {
        Matrix::from_columns(f, n, &cols)
            .solve_vec(target)
            .map(|c| c.chunks(n).map(|s| s.to_vec()).collect::<Vec<Vector>>())
    };
    if let Some(s) = &coefficients {
        let sum = gens.iter().zip(s).fold(r.zero(), |acc, (g, s)| r.add(&acc, &r.mul(s, g)));
        if sum != target {
            return Err(Error::self_test("membership coefficients do not recombine"));
        }
    }
    let exhaustive = exhaustive_membership(r, gens, target);
    Ok(Membership {
        member: coefficients.is_some(),
        coefficients,
        exhaustive,
    })
}

fn exhaustive_membership(r: &ClassicalRing, gens: &[Vector], target: &[Scalar]) -> Option<bool> {
    let q = r.field().order()?;
    if q > 3 || r.dim() > 3 {
        return None;
    }
    let elems = r.elements(27)?;
    let space = (elems.len() as u64).checked_pow(gens.len() as u32)?;
    if space > SEARCH_LIMIT {
        return None;
    }
    // Sums reachable with the first k generators.
    let mut reachable = vec![r.zero()];
    for g in gens {
        let multiples: Vec<Vector> = elems.iter().map(|s| r.mul(s, g)).collect();
        let mut next = Vec::new();
        for a in &reachable {
            for m in &multiples {
                let v = r.add(a, m);
                if !next.contains(&v) {
                    next.push(v);
                }
            }
        }
        reachable = next;
    }
    Some(reachable.iter().any(|v| v == target))
}

/// A domain of finite dimension is already a field: the ring with an
/// inverse table.
#[derive(Clone, Debug)]
pub struct OracleField {
    pub ring: ClassicalRing,
    pub inverses: Vec<(Vector, Vector)>,
}

pub fn oracle_fraction_field(r: &ClassicalRing) -> Result<OracleField> {
    if let Some(x) = zero_divisor(r)? {
        return Err(Error::input(format!("not a domain: {} is a zero divisor", show(&x))));
    }
    let sample: Vec<Vector> = match r.elements(SEARCH_LIMIT) {
        Some(all) => all,
        None => (0..r.dim()).map(|i| r.basis(i)).chain(std::iter::once(r.one())).collect(),
    };
    let mut inverses = Vec::new();
    for x in sample {
        if x.iter().all(Scalar::is_zero) {
            continue;
        }
        let y = r
            .inverse(&x)
            .ok_or_else(|| Error::self_test("nonzero element of a domain has no inverse"))?;
        if r.mul(&x, &y) != r.one() {
            return Err(Error::self_test("inverse does not multiply to one"));
        }
        inverses.push((x, y));
    }
    Ok(OracleField {
        ring: r.clone(),
        inverses,
    })
}

fn show(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Some nonzero non-invertible element, or `None` for a field. Decided by
/// enumeration when the ring is small, otherwise through a primitive
/// element and a root test on its minimal polynomial (degree ≤ 3).
pub fn zero_divisor(r: &ClassicalRing) -> Result<Option<Vector>> {
    let n = r.dim();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if n == 1 {
        return Ok(None);
    }
    let singular = |x: &Vector| !x.iter().all(Scalar::is_zero) && !r.mult_by(x).is_invertible();
    if let Some(all) = r.elements(SEARCH_LIMIT) {
        return Ok(all.into_iter().find(singular));
    }
    let grid = small_grid(r);
    if let Some(x) = grid.iter().find(|x| singular(x)) {
        return Ok(Some(x.clone()));
    }
    let Some((x, poly)) = grid.iter().find_map(|x| {
        let p = min_poly(r, x);
        (p.len() == n + 1).then(|| (x.clone(), p))
    }) else {
        return Err(Error::input("oracle found no primitive element to decide the domain property"));
    };
    if n > 3 {
        return Err(Error::input("oracle decides irreducibility only up to degree 3"));
    }
    match polynomial_root(r.field(), &poly)? {
        // x - a is a zero divisor when a is a root of the minimal polynomial.
        Some(a) => {
            let a_one: Vector = r.one().iter().map(|u| u * &a).collect();
            Ok(Some(r.sub(&x, &a_one)))
        }
        None => Ok(None),
    }
}

/// Elements with coordinates in `{-1, 0, 1, 2}`.
fn small_grid(r: &ClassicalRing) -> Vec<Vector> {
    let f = r.field();
    let digits: Vec<Scalar> = [-1, 0, 1, 2].iter().map(|&d| f.from_i64(d)).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..r.dim() {
        out = out
            .into_iter()
            .flat_map(|v: Vector| {
                digits.iter().map(move |d| {
                    let mut w = v.clone();
                    w.push(d.clone());
                    w
                })
            })
            .collect();
    }
    out.retain(|v| !v.iter().all(Scalar::is_zero));
    out
}

/// Monic minimal polynomial, coefficients from the constant term up.
pub fn min_poly(r: &ClassicalRing, x: &[Scalar]) -> Vector {
    let f = r.field();
    let mut powers = vec![r.one()];
    loop {
        let next = r.mul(powers.last().expect("nonempty"), x);
        let m = Matrix::from_columns(f, r.dim(), &powers);
        if let Some(c) = m.solve_vec(&next) {
            let mut poly: Vector = c.iter().map(|v| -v).collect();
            poly.push(f.one());
            return poly;
        }
        powers.push(next);
    }
}

fn eval(poly: &[Scalar], a: &Scalar) -> Scalar {
    poly.iter().rev().fold(a.field().zero(), |acc, c| &(&acc * a) + c)
}

/// A root in the base field, if any.
fn polynomial_root(f: Field, poly: &[Scalar]) -> Result<Option<Scalar>> {
    match f {
        Field::Prime(p) => {
            if p > 1 << 16 {
                return Err(Error::input("oracle root search is limited to small primes"));
            }
            Ok((0..p as i64).map(|v| f.from_i64(v)).find(|a| eval(poly, a).is_zero()))
        }
        Field::Rational => rational_root(poly),
    }
}

/// Rational root theorem on the polynomial with denominators cleared.
fn rational_root(poly: &[Scalar]) -> Result<Option<Scalar>> {
    let rats: Vec<_> = poly.iter().map(|c| c.as_rational().expect("rational field").clone()).collect();
    let lcm = rats.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|c| (c.numer() * &lcm) / c.denom()).collect();
    let lowest = ints.iter().position(|c| !c.is_zero()).expect("monic");
    if lowest > 0 {
        return Ok(Some(Field::Rational.zero()));
    }
    let small = |b: &BigInt| {
        b.abs()
            .to_i64()
            .filter(|&v| v <= 1_000_000)
            .ok_or_else(|| Error::input("coefficients too large for the oracle root search"))
    };
    let (a0, an) = (small(&ints[0])?, small(ints.last().expect("nonempty"))?);
    let divisors = |v: i64| (1..=v).filter(move |d| v % d == 0);
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1, -1] {
                let a = Field::Rational.from_ratio(sign * p, q);
                if eval(poly, &a).is_zero() {
                    return Ok(Some(a));
                }
            }
        }
    }
    Ok(None)
}
