//! Univariate polynomials over the rationals, just enough to decide
//! irreducibility of a minimal polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<BigRational>);

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> RatPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().expect("nonempty") / &lead;
            for (i, dc) in d.0.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Primitive integer polynomial with the same roots (positive leading
    /// coefficient).
    fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let mut out: Vec<BigInt> = ints.into_iter().map(|c| c / &content).collect();
        if out.last().is_some_and(Signed::is_negative) {
            out.iter_mut().for_each(|c| *c = -c.clone());
        }
        out
    }

    /// A nontrivial factorization `self = g * h` over the rationals, or
    /// `None` when the polynomial is irreducible. Uses Kronecker's method, so
    /// it is meant for the small degrees that occur here.
    pub fn find_factor(&self) -> Option<(RatPoly, RatPoly)> {
        let n = self.degree()?;
        if n <= 1 {
            return None;
        }
        let ints = self.primitive_integer();
        let eval_int = |x: &BigInt| ints.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
        // Sample points 0, 1, -1, 2, -2, ...; a root gives a linear factor.
        let mut points = Vec::new();
        let mut k: i64 = 0;
        while points.len() <= n / 2 {
            let a = BigInt::from(k);
            let v = eval_int(&a);
            if v.is_zero() {
                let lin = RatPoly::new(vec![BigRational::from_integer(-a), BigRational::one()]);
                let (q, _) = self.div_rem(&lin);
                return Some((lin, q));
            }
            points.push((a, v));
            k = if k <= 0 { -k + 1 } else { -k };
        }
        for deg in 1..=n / 2 {
            let pts = &points[..=deg];
            let divisor_sets: Vec<Vec<BigInt>> = pts.iter().map(|(_, v)| signed_divisors(v)).collect();
            let mut choice = vec![0usize; pts.len()];
            loop {
                let values: Vec<BigInt> = choice
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| divisor_sets[i][c].clone())
                    .collect();
                if let Some(g) = interpolate(pts, &values) {
                    if g.degree() == Some(deg) {
                        let (q, r) = self.div_rem(&g);
                        if r.is_zero() {
                            return Some((g, q));
                        }
                    }
                }
                // Odometer over divisor choices.
                let mut i = 0;
                loop {
                    if i == choice.len() {
                        break;
                    }
                    choice[i] += 1;
                    if choice[i] < divisor_sets[i].len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == choice.len() {
                    break;
                }
            }
        }
        None
    }
}

fn signed_divisors(v: &BigInt) -> Vec<BigInt> {
    let v = v.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= v {
        if (&v % &d).is_zero() {
            let e = &v / &d;
            out.push(d.clone());
            out.push(-d.clone());
            if e != d {
                out.push(e.clone());
                out.push(-e);
            }
        }
        d += 1;
    }
    out
}

/// Lagrange interpolation; `None` unless every coefficient is an integer.
fn interpolate(points: &[(BigInt, BigInt)], values: &[BigInt]) -> Option<RatPoly> {
    let mut acc = RatPoly(Vec::new());
    for (i, (xi, _)) in points.iter().enumerate() {
        let mut basis = RatPoly::new(vec![BigRational::one()]);
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&RatPoly::new(vec![
                BigRational::from_integer(-xj.clone()),
                BigRational::one(),
            ]));
            denom *= BigRational::from_integer(xi - xj);
        }
        let scale = BigRational::from_integer(values[i].clone()) / denom;
        let term = RatPoly::new(basis.0.iter().map(|c| c * &scale).collect());
        acc = add(&acc, &term);
    }
    acc.0.iter().all(|c| c.is_integer()).then_some(acc)
}

fn add(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.0.len().max(b.0.len());
    let coeffs = (0..n)
        .map(|i| {
            let x = a.0.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.0.get(i).cloned().unwrap_or_else(BigRational::zero);
            x + y
        })
        .collect();
    RatPoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    #[test]
    fn irreducible_examples() {
        assert!(poly(&[-2, 0, 1]).find_factor().is_none());
        assert!(poly(&[1, 1, 1]).find_factor().is_none());
        assert!(poly(&[-2, 0, 0, 1]).find_factor().is_none());
        // x^4 + 1 has no rational roots and no quadratic factors.
        assert!(poly(&[1, 0, 0, 0, 1]).find_factor().is_none());
    }

    #[test]
    fn reducible_examples() {
        let (g, h) = poly(&[0, 0, 1]).find_factor().unwrap();
        assert_eq!(g.mul(&h), poly(&[0, 0, 1]));
        // (x^2 + 1)(x^2 - 2): no linear factor, found at degree 2.
        let f = poly(&[1, 0, 1]).mul(&poly(&[-2, 0, 1]));
        let (g, h) = f.find_factor().unwrap();
        assert_eq!(g.mul(&h), f);
        assert_eq!(g.degree(), Some(2));
    }
}
