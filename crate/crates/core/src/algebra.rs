//! Finite-dimensional star-algebras: group algebras, matrix algebras and general
//! algebras given by structure constants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("structure constants are not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("the given unit is not a two-sided identity")]
    BadUnit,
    #[error("star is not an involutive antihomomorphism (basis pair ({0}, {1}))")]
    BadStar(usize, usize),
    #[error("elements belong to different algebras")]
    ParentMismatch,
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Closure of the given permutations (0-based images). The product `xy` means
    /// "apply `x`, then `y`". Elements are listed breadth first and named by the
    /// shortest generator word reaching them, with `e` for the identity.
    pub fn from_permutations(
        generator_names: &[&str],
        permutations: &[Vec<usize>],
    ) -> Result<Self, AlgebraError> {
        if generator_names.len() != permutations.len() || permutations.is_empty() {
            return Err(AlgebraError::InvalidGroup(
                "need one name per generating permutation".into(),
            ));
        }
        let n = permutations[0].len();
        for p in permutations {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&i| i >= n || core::mem::replace(&mut seen[i], true)) {
                return Err(AlgebraError::InvalidGroup(format!("{p:?} is not a permutation")));
            }
        }
        let compose = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().map(|&i| y[i]).collect() };
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        let mut names: Vec<String> = vec!["e".into()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(perms[0].clone(), 0);
        let mut head = 0;
        while head < perms.len() {
            for (g, p) in permutations.iter().enumerate() {
                let next = compose(&perms[head], p);
                if !index.contains_key(&next) {
                    let base = if head == 0 { String::new() } else { names[head].clone() };
                    index.insert(next.clone(), perms.len());
                    names.push(base + generator_names[g]);
                    perms.push(next);
                }
            }
            head += 1;
        }
        let table = perms
            .iter()
            .map(|x| perms.iter().map(|y| index[&compose(x, y)]).collect())
            .collect();
        let generators = permutations.iter().map(|p| index[p]).collect();
        let mut g = Self::from_table(names, table)?;
        g.generators = generators;
        Ok(g)
    }

    /// Validates a Cayley table.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let n = names.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(AlgebraError::InvalidGroup("table shape".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| AlgebraError::InvalidGroup("no identity".into()))?;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(AlgebraError::InvalidGroup("not associative".into()));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity)
                .ok_or_else(|| AlgebraError::InvalidGroup(format!("{} has no inverse", names[x])))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup {
            names,
            table,
            inverse,
            identity,
            generators: Vec::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Element indices of the generators used to build the group, if any.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    Group(FiniteGroup),
    /// Full matrix algebra `M_n` with basis `E_ij` in row-major order.
    Matrix(usize),
    General,
}

/// Sparse basis expansion `sum c_k e_k`.
pub type SparseTerms = Vec<(usize, Scalar)>;

/// A finite-dimensional associative unital star-algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDimAlgebra {
    labels: Vec<String>,
    products: Vec<Vec<SparseTerms>>,
    unit: Vector,
    star: Vec<Vector>,
    kind: AlgebraKind,
}

fn sparse(v: &[Scalar]) -> SparseTerms {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

impl FiniteDimAlgebra {
    /// Builds and validates an algebra from dense structure constants
    /// `products[i][j]` = coordinates of `e_i e_j`.
    pub fn new(
        labels: Vec<String>,
        products: Vec<Vec<Vector>>,
        unit: Vector,
        star: Vec<Vector>,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        let check = |v: &Vector| {
            if v.len() == n {
                Ok(())
            } else {
                Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                })
            }
        };
        check(&unit)?;
        if products.len() != n || star.len() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                found: products.len().min(star.len()),
            });
        }
        for row in &products {
            if row.len() != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            row.iter().try_for_each(check)?;
        }
        star.iter().try_for_each(check)?;
        let alg = FiniteDimAlgebra {
            labels,
            products: products
                .iter()
                .map(|r| r.iter().map(|v| sparse(v)).collect())
                .collect(),
            unit,
            star,
            kind: AlgebraKind::General,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            let ei = unit_vec(n, i);
            if self.mul(&self.unit, &ei) != ei || self.mul(&ei, &self.unit) != ei {
                return Err(AlgebraError::BadUnit);
            }
        }
        for i in 0..n {
            let ei = unit_vec(n, i);
            for j in 0..n {
                let ej = unit_vec(n, j);
                let ij = self.mul(&ei, &ej);
                for k in 0..n {
                    let ek = unit_vec(n, k);
                    if self.mul(&ij, &ek) != self.mul(&ei, &self.mul(&ej, &ek)) {
                        return Err(AlgebraError::NotAssociative(i, j, k));
                    }
                }
                let lhs = self.star(&ij);
                let rhs = self.mul(&self.star[j], &self.star[i]);
                if lhs != rhs {
                    return Err(AlgebraError::BadStar(i, j));
                }
            }
            if self.star(&self.star[i]) != ei {
                return Err(AlgebraError::BadStar(i, i));
            }
        }
        Ok(())
    }

    /// Group algebra `K G` with star `g* = g^-1`.
    pub fn group_algebra(group: FiniteGroup) -> Self {
        let n = group.order();
        let products = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| vec![(group.mul(x, y), Scalar::one())])
                    .collect()
            })
            .collect();
        let star = (0..n).map(|x| unit_vec(n, group.inverse(x))).collect();
        FiniteDimAlgebra {
            labels: group.names().to_vec(),
            products,
            unit: unit_vec(n, group.identity()),
            star,
            kind: AlgebraKind::Group(group),
        }
    }

    /// Matrix algebra `M_n` with basis `E_ij` (labels 1-based) and star the transpose.
    pub fn matrix_algebra(n: usize) -> Self {
        let dim = n * n;
        let idx = |i: usize, j: usize| i * n + j;
        let mut labels = Vec::with_capacity(dim);
        for i in 0..n {
            for j in 0..n {
                labels.push(format!("E{}{}", i + 1, j + 1));
            }
        }
        let products = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| {
                        let (i, j) = (a / n, a % n);
                        let (k, l) = (b / n, b % n);
                        if j == k {
                            vec![(idx(i, l), Scalar::one())]
                        } else {
                            Vec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut unit = zero_vec(dim);
        for i in 0..n {
            unit[idx(i, i)] = Scalar::one();
        }
        let star = (0..dim)
            .map(|a| unit_vec(dim, idx(a % n, a / n)))
            .collect();
        FiniteDimAlgebra {
            labels,
            products,
            unit,
            star,
            kind: AlgebraKind::Matrix(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            AlgebraKind::Group(g) => Some(g),
            _ => None,
        }
    }

    pub fn matrix_size(&self) -> Option<usize> {
        match self.kind {
            AlgebraKind::Matrix(n) => Some(n),
            _ => None,
        }
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vec(self.dim(), i)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i][j]
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim());
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (k, s) in &self.products[i][j] {
                    out[*k] = &out[*k] + &(&c * s);
                }
            }
        }
        out
    }

    /// Conjugate-linear extension of the star on basis elements.
    pub fn star(&self, a: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim());
        for (i, x) in a.iter().enumerate() {
            axpy(&mut out, &x.conj(), &self.star[i]);
        }
        out
    }

    pub fn star_basis(&self, i: usize) -> &Vector {
        &self.star[i]
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.products[i][j] == self.products[j][i]))
    }

    /// Matrix of `x -> a x` in the algebra basis.
    pub fn left_mul_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.mul(a, &unit_vec(n, j))).collect();
        Matrix::from_columns(n, &cols).unwrap()
    }

    /// Matrix of `x -> x a` in the algebra basis.
    pub fn right_mul_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.mul(&unit_vec(n, j), a)).collect();
        Matrix::from_columns(n, &cols).unwrap()
    }

    /// Concrete matrix realisation: the element itself for `M_n`, otherwise the
    /// left regular representation.
    pub fn represent(&self, a: &[Scalar]) -> Matrix {
        match self.kind {
            AlgebraKind::Matrix(n) => matrix_of(n, a),
            _ => self.left_mul_matrix(a),
        }
    }

    pub fn is_zero(&self, a: &[Scalar]) -> bool {
        is_zero_vec(a)
    }

    /// Index of the basis element with the given label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn format(&self, a: &[Scalar]) -> String {
        format_terms(a, &self.labels)
    }
}

/// `n x n` matrix from `M_n` coordinates.
pub fn matrix_of(n: usize, a: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[i * n + j].clone();
        }
    }
    m
}

/// `M_n` coordinates of an `n x n` matrix.
pub fn coords_of_matrix(m: &Matrix) -> Vector {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        v.extend_from_slice(m.row(i));
    }
    v
}

/// Renders `sum c_i label_i`, with `0` for the empty sum.
pub fn format_terms(coords: &[Scalar], labels: &[String]) -> String {
    let mut out = String::new();
    for (x, l) in coords.iter().zip(labels) {
        if x.is_zero() {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        if x.is_one() {
            out.push_str(l);
        } else if matches!(x, Scalar::Rational(_)) {
            out.push_str(&format!("{x}*{l}"));
        } else {
            out.push_str(&format!("({x})*{l}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// An element bound to its parent algebra.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    algebra: Arc<FiniteDimAlgebra>,
    coords: Vector,
}

impl AlgebraElement {
    pub fn new(algebra: Arc<FiniteDimAlgebra>, coords: Vector) -> Result<Self, AlgebraError> {
        if coords.len() != algebra.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: algebra.dim(),
                found: coords.len(),
            });
        }
        Ok(AlgebraElement { algebra, coords })
    }

    pub fn basis(algebra: Arc<FiniteDimAlgebra>, i: usize) -> Self {
        let coords = algebra.basis(i);
        AlgebraElement { algebra, coords }
    }

    pub fn algebra(&self) -> &Arc<FiniteDimAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    fn same_parent(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(AlgebraError::ParentMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_parent(other)?;
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords: crate::linalg::add_vec(&self.coords, &other.coords),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_parent(other)?;
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.algebra.mul(&self.coords, &other.coords),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: crate::linalg::scale_vec(c, &self.coords),
        }
    }

    pub fn star(&self) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.algebra.star(&self.coords),
        }
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_parent(other).is_ok() && self.coords == other.coords
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.algebra.format(&self.coords))
    }
}

/// The symmetric group `S_3` generated by the transpositions `u = (12)` and `v = (23)`.
/// Elements are `e, u, v, uv, vu, uvu`.
pub fn s3_group() -> FiniteGroup {
    FiniteGroup::from_permutations(&["u", "v"], &[vec![1, 0, 2], vec![0, 2, 1]])
        .expect("transpositions generate S3")
}

/// The cyclic group of order two, elements `e, w`.
pub fn z2_group() -> FiniteGroup {
    FiniteGroup::from_permutations(&["w"], &[vec![1, 0]]).expect("a transposition generates Z2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn s3_elements_and_relations() {
        let g = s3_group();
        assert_eq!(g.names(), &["e", "u", "v", "uv", "vu", "uvu"]);
        let (u, v) = (1, 2);
        assert_eq!(g.mul(u, u), g.identity());
        assert_eq!(g.mul(v, v), g.identity());
        let uvu = g.mul(g.mul(u, v), u);
        let vuv = g.mul(g.mul(v, u), v);
        assert_eq!(uvu, vuv);
        assert_eq!(g.names()[uvu], "uvu");
        assert_eq!(g.inverse(3), 4);
        assert_eq!(g.generators(), &[1, 2]);
    }

    #[test]
    fn group_algebra_is_valid_star_algebra() {
        let a = FiniteDimAlgebra::group_algebra(s3_group());
        a.validate().unwrap();
        assert_eq!(a.dim(), 6);
        assert!(!a.is_commutative());
        assert_eq!(a.star_basis(3), &a.basis(4));
    }

    #[test]
    fn matrix_algebra_is_valid_star_algebra() {
        let m = FiniteDimAlgebra::matrix_algebra(3);
        m.validate().unwrap();
        assert_eq!(m.labels()[1], "E12");
        let e12 = m.basis(1);
        let e21 = m.basis(3);
        assert_eq!(m.mul(&e12, &e21), m.basis(0));
        assert_eq!(m.star(&e12), e21);
        assert_eq!(matrix_of(3, m.unit()), Matrix::identity(3));
    }

    #[test]
    fn general_constructor_rejects_bad_data() {
        // Two-dimensional algebra K[x]/(x^2) with a wrong unit.
        let labels = vec!["1".to_string(), "x".to_string()];
        let z = || zero_vec(2);
        let products = vec![
            vec![unit_vec(2, 0), unit_vec(2, 1)],
            vec![unit_vec(2, 1), z()],
        ];
        let star = vec![unit_vec(2, 0), unit_vec(2, 1)];
        assert!(FiniteDimAlgebra::new(labels.clone(), products.clone(), unit_vec(2, 0), star.clone()).is_ok());
        assert_eq!(
            FiniteDimAlgebra::new(labels.clone(), products.clone(), unit_vec(2, 1), star),
            Err(AlgebraError::BadUnit)
        );
        let bad_star = vec![unit_vec(2, 0), unit_vec(2, 0)];
        assert!(matches!(
            FiniteDimAlgebra::new(labels, products, unit_vec(2, 0), bad_star),
            Err(AlgebraError::BadStar(..))
        ));
    }

    #[test]
    fn non_associative_constants_rejected() {
        // e_0 unit, e_1 e_1 = e_0, e_1 e_2 = e_2, e_2 e_1 = e_1, e_2 e_2 = e_2 (not associative).
        let labels = (0..3).map(|i| format!("e{i}")).collect();
        let u = |i| unit_vec(3, i);
        let products = vec![
            vec![u(0), u(1), u(2)],
            vec![u(1), u(0), u(2)],
            vec![u(2), u(1), u(2)],
        ];
        let star = vec![u(0), u(1), u(2)];
        assert!(matches!(
            FiniteDimAlgebra::new(labels, products, u(0), star),
            Err(AlgebraError::NotAssociative(..))
        ));
    }

    #[test]
    fn elements_check_parent() {
        let a = Arc::new(FiniteDimAlgebra::matrix_algebra(2));
        let b = Arc::new(FiniteDimAlgebra::group_algebra(z2_group()));
        let x = AlgebraElement::basis(a.clone(), 1);
        let y = AlgebraElement::basis(b, 1);
        assert_eq!(x.try_mul(&y), Err(AlgebraError::ParentMismatch));
        let z = AlgebraElement::basis(a, 2);
        assert_eq!(x.try_mul(&z).unwrap().to_string(), "E11");
        assert_eq!(x.star().to_string(), "E21");
    }

    #[test]
    fn regular_representation_is_multiplicative() {
        let a = FiniteDimAlgebra::group_algebra(s3_group());
        let x = a.basis(3);
        let y = a.basis(1);
        let lhs = a.represent(&a.mul(&x, &y));
        let rhs = a.represent(&x).try_mul(&a.represent(&y)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
