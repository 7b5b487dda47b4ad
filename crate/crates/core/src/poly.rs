//! Univariate polynomials with scalar coefficients, used for residuals that
//! depend on a free parameter.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Coefficients in increasing degree, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let z = Scalar::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.0.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Display with the given variable name.
    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = format!("{c}");
            let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
            parts.push(match i {
                0 => coeff,
                1 if c.is_one() => String::from(var),
                1 => format!("{coeff}*{var}"),
                _ if c.is_one() => format!("{var}^{i}"),
                _ => format!("{coeff}*{var}^{i}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format("x"))
    }
}

/// A row vector of polynomials.
pub type PolyVec = Vec<Poly>;

pub fn poly_vec(v: &[Scalar]) -> PolyVec {
    v.iter().map(|c| Poly::constant(c.clone())).collect()
}

/// Row vector times a scalar matrix.
pub fn row_times(v: &[Poly], m: &Matrix) -> PolyVec {
    (0..m.cols())
        .map(|j| {
            v.iter()
                .enumerate()
                .fold(Poly::zero(), |acc, (i, p)| acc.add(&p.scale(&m[(i, j)])))
        })
        .collect()
}

pub fn add_rows(a: &[Poly], b: &[Poly]) -> PolyVec {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn sub_rows(a: &[Poly], b: &[Poly]) -> PolyVec {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn is_zero_row(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

pub fn format_row(v: &[Poly], var: &str) -> String {
    let parts: Vec<String> = v.iter().map(|p| p.format(var)).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-5i64..=5, 0..4)
            .prop_map(|v| Poly::new(v.into_iter().map(Scalar::from_int).collect()))
    }

    #[test]
    fn basics() {
        let p = Poly::x().add(&Poly::constant(Scalar::from_int(-1)));
        assert_eq!(p.mul(&p).coeffs(), &[1, -2, 1].map(Scalar::from_int));
        assert_eq!(p.eval(&Scalar::one()), Scalar::zero());
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.format("b"), "-1 + b");
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_map(p in small(), q in small(), x in -4i64..=4) {
            let x = Scalar::from_int(x);
            prop_assert_eq!(p.mul(&q).eval(&x), &p.eval(&x) * &q.eval(&x));
            prop_assert_eq!(p.add(&q).eval(&x), &p.eval(&x) + &q.eval(&x));
        }
    }
}
