//! Inner products on bimodules, the positive maps `phi(b) = <e0, b e0>` they
//! induce, and the algebra-map, complete-positivity and cochain-map checks.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{AlgebraKind, FiniteDimAlgebra};
use crate::connection::{Bimodule, Connection};
use crate::linalg::{axpy, psd_test, unit_vec, zero_vec, Matrix, PsdVerdict, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KsgnsError {
    #[error("pairing table has the wrong shape")]
    Shape,
    #[error("the calculus on A has no star on forms")]
    NoStar,
    #[error("nabla(e0) != 0")]
    NotCovariantlyConstant,
    #[error("the connection does not preserve the inner product (E basis {0}, {1})")]
    MetricNotPreserved(usize, usize),
    #[error("the domain is neither a matrix nor a group algebra")]
    UnsupportedDomain,
}

/// Which identity an inner product fails, with the basis indices involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InnerProductViolation {
    RightLinear { x: usize, y: usize, a: usize },
    MiddleB { x: usize, y: usize, b: usize },
    Hermitian { x: usize, y: usize },
}

/// `<x, y>` in `A`, conjugate linear in `x`, given on basis pairs.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    bimodule: Arc<Bimodule>,
    /// `table[i][j] = <e_i, e_j>`.
    table: Vec<Vec<Vector>>,
}

impl InnerProduct {
    pub fn new(bimodule: Arc<Bimodule>, table: Vec<Vec<Vector>>) -> Result<Self, KsgnsError> {
        let n = bimodule.dim();
        let na = bimodule.right_algebra().dim();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != na)) {
            return Err(KsgnsError::Shape);
        }
        Ok(InnerProduct { bimodule, table })
    }

    /// `<x, y> = x* y` for `E = A` with the regular right action.
    pub fn regular(bimodule: Arc<Bimodule>) -> Result<Self, KsgnsError> {
        let a = bimodule.right_algebra().clone();
        if bimodule.dim() != a.dim() {
            return Err(KsgnsError::Shape);
        }
        let table = (0..a.dim())
            .map(|i| (0..a.dim()).map(|j| a.mul(a.star_basis(i), &a.basis(j))).collect())
            .collect();
        Self::new(bimodule, table)
    }

    /// `<x, y> = x^T y` for `E = M_{m,n}` with basis `e_ij` at `i * n + j`.
    pub fn rectangular(bimodule: Arc<Bimodule>) -> Result<Self, KsgnsError> {
        let n = bimodule.right_algebra().matrix_size().ok_or(KsgnsError::Shape)?;
        let m = bimodule.left_algebra().matrix_size().ok_or(KsgnsError::Shape)?;
        if bimodule.dim() != m * n {
            return Err(KsgnsError::Shape);
        }
        // e_ij^T e_kl = delta_ik E_jl
        let table = (0..m * n)
            .map(|x| {
                (0..m * n)
                    .map(|y| {
                        let (i, j) = (x / n, x % n);
                        let (k, l) = (y / n, y % n);
                        let mut v = zero_vec(n * n);
                        if i == k {
                            v[j * n + l] = Scalar::one();
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Self::new(bimodule, table)
    }

    /// Multiplies `<e_i, e_j>` by `c` on that one ordered pair.
    pub fn scaled(&self, i: usize, j: usize, c: &Scalar) -> Self {
        let mut out = self.clone();
        out.table[i][j] = out.table[i][j].iter().map(|x| x * c).collect();
        out
    }

    pub fn bimodule(&self) -> &Arc<Bimodule> {
        &self.bimodule
    }

    fn a(&self) -> &FiniteDimAlgebra {
        self.bimodule.right_algebra()
    }

    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.a().dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let xc = xi.conj();
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    axpy(&mut out, &(&xc * yj), &self.table[i][j]);
                }
            }
        }
        out
    }

    /// Right `A`-linearity, middle `B`-compatibility and hermitian symmetry on bases.
    pub fn check(&self) -> Result<(), InnerProductViolation> {
        let e = &self.bimodule;
        let a = e.right_algebra();
        let b = e.left_algebra();
        let n = e.dim();
        for x in 0..n {
            let ex = unit_vec(n, x);
            for y in 0..n {
                let ey = unit_vec(n, y);
                let p = self.pair(&ex, &ey);
                for k in 0..a.dim() {
                    let ak = a.basis(k);
                    if self.pair(&ex, &e.act_right(&ey, &ak)) != a.mul(&p, &ak) {
                        return Err(InnerProductViolation::RightLinear { x, y, a: k });
                    }
                }
                for k in 0..b.dim() {
                    let bk = b.basis(k);
                    let lhs = self.pair(&e.act_left(&bk, &ex), &ey);
                    let rhs = self.pair(&ex, &e.act_left(b.star_basis(k), &ey));
                    if lhs != rhs {
                        return Err(InnerProductViolation::MiddleB { x, y, b: k });
                    }
                }
                if a.star(&p) != self.pair(&ey, &ex) {
                    return Err(InnerProductViolation::Hermitian { x, y });
                }
            }
        }
        Ok(())
    }
}

/// `d<e1, e2> = <e1, nabla(e2)_1> nabla(e2)_2 + nabla(e1)_2* <nabla(e1)_1, e2>`
/// on all basis pairs; returns the first failing pair.
pub fn metric_preservation_check(conn: &Connection, ip: &InnerProduct) -> Result<Option<(usize, usize)>, KsgnsError> {
    let t = conn.tensors();
    let total = t.total();
    let ne = t.e_dim();
    let nm = total.num_monomials(1);
    let mstars: Vec<Vector> = (0..nm)
        .map(|m| total.star_form(1, &total.monomial_form(1, m)).ok_or(KsgnsError::NoStar))
        .collect::<Result<_, _>>()?;
    for i in 0..ne {
        let ei = unit_vec(ne, i);
        let ni = conn.nabla().column(i);
        for j in 0..ne {
            let ej = unit_vec(ne, j);
            let nj = conn.nabla().column(j);
            let lhs = total.d(0, &ip.pair(&ei, &ej));
            let mut rhs = zero_vec(total.dim(1));
            for (idx, c) in nj.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (k, m) = (idx / nm, idx % nm);
                let p = ip.pair(&ei, &unit_vec(ne, k));
                axpy(&mut rhs, c, &total.left_mul(1, &p, &total.monomial_form(1, m)));
            }
            for (idx, c) in ni.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (k, m) = (idx / nm, idx % nm);
                let p = ip.pair(&unit_vec(ne, k), &ej);
                axpy(&mut rhs, &c.conj(), &total.right_mul(&mstars[m], &p));
            }
            if lhs != rhs {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Matrix of `phi(b) = <e0, b e0>`, columns indexed by the basis of `B`.
pub fn ksgns_map(ip: &InnerProduct, e0: &[Scalar]) -> Matrix {
    let e = ip.bimodule();
    let b = e.left_algebra();
    let cols: Vec<Vector> = (0..b.dim())
        .map(|k| ip.pair(e0, &e.act_left(&b.basis(k), e0)))
        .collect();
    Matrix::from_columns(e.right_algebra().dim(), &cols).unwrap()
}

/// Failure of the algebra-map property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraMapWitness {
    /// `phi(1) != 1`; carries `phi(1)`.
    Unit(Vector),
    /// `phi(b_i b_j) != phi(b_i) phi(b_j)`.
    Multiplicative(usize, usize),
}

pub fn is_algebra_map(phi: &Matrix, domain: &FiniteDimAlgebra, codomain: &FiniteDimAlgebra) -> Result<(), AlgebraMapWitness> {
    let one = phi.mul_vec(domain.unit());
    if &one != codomain.unit() {
        return Err(AlgebraMapWitness::Unit(one));
    }
    for i in 0..domain.dim() {
        for j in 0..domain.dim() {
            let lhs = phi.mul_vec(&domain.mul(&domain.basis(i), &domain.basis(j)));
            let rhs = codomain.mul(&phi.column(i), &phi.column(j));
            if lhs != rhs {
                return Err(AlgebraMapWitness::Multiplicative(i, j));
            }
        }
    }
    Ok(())
}

/// Whether `phi(x*) = phi(x)*` on a basis.
pub fn preserves_star(phi: &Matrix, domain: &FiniteDimAlgebra, codomain: &FiniteDimAlgebra) -> bool {
    (0..domain.dim()).all(|i| phi.mul_vec(domain.star_basis(i)) == codomain.star(&phi.column(i)))
}

/// Block matrix of `phi` used for the complete-positivity test:
/// the Choi matrix `sum E_ij (x) phi(E_ij)` for `M_m`, and `[phi(g^-1 h)]_{g,h}`
/// for a group algebra. Codomain elements are realised concretely.
pub fn choi_matrix(phi: &Matrix, domain: &FiniteDimAlgebra, codomain: &FiniteDimAlgebra) -> Result<Matrix, KsgnsError> {
    let (k, entry): (usize, alloc::boxed::Box<dyn Fn(usize, usize) -> usize>) = match domain.kind() {
        AlgebraKind::Matrix(m) => {
            let m = *m;
            (m, alloc::boxed::Box::new(move |i, j| i * m + j))
        }
        AlgebraKind::Group(g) => {
            let g = g.clone();
            (g.order(), alloc::boxed::Box::new(move |i, j| g.mul(g.inverse(i), j)))
        }
        AlgebraKind::General => return Err(KsgnsError::UnsupportedDomain),
    };
    let blocks: Vec<Vec<Matrix>> = (0..k)
        .map(|i| (0..k).map(|j| codomain.represent(&phi.column(entry(i, j)))).collect())
        .collect();
    let s = blocks[0][0].rows();
    let mut out = Matrix::zeros(k * s, k * s);
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            for r in 0..s {
                for c in 0..s {
                    out[(i * s + r, j * s + c)] = b[(r, c)].clone();
                }
            }
        }
    }
    Ok(out)
}

pub fn completely_positive(phi: &Matrix, domain: &FiniteDimAlgebra, codomain: &FiniteDimAlgebra) -> Result<PsdVerdict, KsgnsError> {
    Ok(psd_test(&choi_matrix(phi, domain, codomain)?))
}

/// `(id_{M_k} (x) phi)(P)` for `P` in `M_k(M_m)` given as a `km x km` matrix;
/// the result is realised in `M_k` of the concrete codomain.
pub fn amplify(phi: &Matrix, m: usize, codomain: &FiniteDimAlgebra, k: usize, p: &Matrix) -> Matrix {
    let mut blocks = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let mut x = zero_vec(m * m);
            for r in 0..m {
                for c in 0..m {
                    x[r * m + c] = p[(i * m + r, j * m + c)].clone();
                }
            }
            blocks.push(codomain.represent(&phi.mul_vec(&x)));
        }
    }
    let s = blocks[0].rows();
    let mut out = Matrix::zeros(k * s, k * s);
    for i in 0..k {
        for j in 0..k {
            let b = &blocks[i * k + j];
            for r in 0..s {
                for c in 0..s {
                    out[(i * s + r, j * s + c)] = b[(r, c)].clone();
                }
            }
        }
    }
    out
}

/// `phi_n(xi) = (<,> (x) id)(e0 (x) sigma_n(xi (x) e0))` as a matrix `Omega^n_B -> Omega^n_A`.
pub fn form_map(conn: &Connection, ip: &InnerProduct, e0: &[Scalar], n: usize) -> Matrix {
    let t = conn.tensors();
    let total = t.total();
    let base = t.base();
    let ne = t.e_dim();
    let nm = total.num_monomials(n);
    let sigma_n = conn.sigma_matrix_degree(n);
    let pairs: Vec<Vector> = (0..ne).map(|i| ip.pair(e0, &unit_vec(ne, i))).collect();
    let cols: Vec<Vector> = (0..base.dim(n))
        .map(|k| {
            let s = sigma_n.mul_vec(&t.canonical_s(n, &unit_vec(base.dim(n), k), e0));
            let mut out = zero_vec(total.dim(n));
            for (idx, c) in s.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (i, m) = (idx / nm, idx % nm);
                axpy(&mut out, c, &total.left_mul(n, &pairs[i], &total.monomial_form(n, m)));
            }
            out
        })
        .collect();
    Matrix::from_columns(total.dim(n), &cols).unwrap()
}

/// Checks `d phi_n = phi_{n+1} d` for `n < max_degree`, after the hypotheses
/// `nabla(e0) = 0` and metric preservation. Returns the first failing degree.
pub fn cochain_map_check(
    conn: &Connection,
    ip: &InnerProduct,
    e0: &[Scalar],
    max_degree: usize,
) -> Result<Option<usize>, KsgnsError> {
    if !conn.annihilates(e0) {
        return Err(KsgnsError::NotCovariantlyConstant);
    }
    if let Some((i, j)) = metric_preservation_check(conn, ip)? {
        return Err(KsgnsError::MetricNotPreserved(i, j));
    }
    let t = conn.tensors();
    let top = max_degree
        .min(t.base().max_degree())
        .min(t.total().max_degree());
    let mut phi = form_map(conn, ip, e0, 0);
    for n in 0..top {
        let next = form_map(conn, ip, e0, n + 1);
        let lhs = t.total().d_matrix(n).try_mul(&phi).unwrap();
        let rhs = next.try_mul(&t.base().d_matrix(n)).unwrap();
        if lhs != rhs {
            return Ok(Some(n));
        }
        phi = next;
    }
    Ok(None)
}

/// Whether `<b e0, b e0>` is positive in the concrete realisation of `A`.
pub fn pairing_positive(ip: &InnerProduct, e0: &[Scalar], b: &[Scalar]) -> bool {
    let be = ip.bimodule().act_left(b, e0);
    let p = ip.pair(&be, &be);
    psd_test(&ip.bimodule().right_algebra().represent(&p)).is_psd()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{m3_over_m2, s3_over_z2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn transpose_map(m: usize) -> Matrix {
        let mut t = Matrix::zeros(m * m, m * m);
        for i in 0..m {
            for j in 0..m {
                t[(j * m + i, i * m + j)] = Scalar::one();
            }
        }
        t
    }

    fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect()).collect();
        let v = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect()).unwrap();
        v.try_mul(&v.transpose()).unwrap()
    }

    #[test]
    fn group_inner_product_and_inclusion() {
        let g = s3_over_z2(&Scalar::one(), 3).unwrap();
        let e = g.connection.tensors().bimodule().clone();
        let ip = InnerProduct::regular(e.clone()).unwrap();
        assert_eq!(ip.check(), Ok(()));
        assert_eq!(metric_preservation_check(&g.connection, &ip).unwrap(), None);
        let a = e.right_algebra();
        let b = e.left_algebra();
        let phi = ksgns_map(&ip, a.unit());
        for (k, &img) in g.embedding.iter().enumerate() {
            assert_eq!(phi.column(k), a.basis(img));
        }
        assert_eq!(is_algebra_map(&phi, b, a), Ok(()));
        assert!(completely_positive(&phi, b, a).unwrap().is_psd());
        assert_eq!(cochain_map_check(&g.connection, &ip, a.unit(), 3).unwrap(), None);
    }

    #[test]
    fn matrix_ksgns() {
        let m = m3_over_m2(3).unwrap();
        let e = m.connection.tensors().bimodule().clone();
        let ip = InnerProduct::rectangular(e.clone()).unwrap();
        assert_eq!(ip.check(), Ok(()));
        assert_eq!(metric_preservation_check(&m.connection, &ip).unwrap(), None);
        let (a, b) = (e.right_algebra().clone(), e.left_algebra().clone());
        let phi = ksgns_map(&ip, &m.e0);
        // e0 = 2(e11 + e22) gives e0^T e0 = 4(E11 + E22).
        let mut expected = zero_vec(9);
        expected[0] = Scalar::from_int(4);
        expected[4] = Scalar::from_int(4);
        assert_eq!(phi.mul_vec(b.unit()), expected);
        assert_eq!(is_algebra_map(&phi, &b, &a), Err(AlgebraMapWitness::Unit(expected)));
        assert!(completely_positive(&phi, &b, &a).unwrap().is_psd());
        assert!(preserves_star(&phi, &b, &a));
        assert_eq!(cochain_map_check(&m.connection, &ip, &m.e0, 3).unwrap(), None);

        let bad = ip.scaled(0, 1, &Scalar::from_int(2));
        assert!(metric_preservation_check(&m.connection, &bad).unwrap().is_some());
        assert!(matches!(
            cochain_map_check(&m.connection, &bad, &m.e0, 3),
            Err(KsgnsError::MetricNotPreserved(_, _))
        ));
        assert_eq!(
            cochain_map_check(&m.connection, &ip, &unit_vec(6, 0), 3),
            Err(KsgnsError::NotCovariantlyConstant)
        );
        assert!(ksgns_map(&ip, &zero_vec(6)).is_zero());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let bv: Vector = (0..4).map(|_| Scalar::from_int(rng.random_range(-4..=4))).collect();
            assert!(pairing_positive(&ip, &m.e0, &bv));
            let p = random_psd(&mut rng, 4);
            assert!(psd_test(&amplify(&phi, 2, &a, 2, &p)).is_psd());
        }
    }

    #[test]
    fn transpose_is_positive_but_not_completely_positive() {
        let m2 = FiniteDimAlgebra::matrix_algebra(2);
        let t = transpose_map(2);
        let id = Matrix::identity(4);
        assert!(completely_positive(&id, &m2, &m2).unwrap().is_psd());
        assert!(!completely_positive(&t, &m2, &m2).unwrap().is_psd());
        assert_eq!(is_algebra_map(&id, &m2, &m2), Ok(()));
        assert!(preserves_star(&t, &m2, &m2));
        // Amplification on the rank-one projector onto e1 (x) e1 + e2 (x) e2.
        let p = choi_matrix(&id, &m2, &m2).unwrap();
        assert!(psd_test(&amplify(&id, 2, &m2, 2, &p)).is_psd());
        assert!(!psd_test(&amplify(&t, 2, &m2, 2, &p)).is_psd());
        // Transpose is positive on M_2 itself.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = random_psd(&mut rng, 2);
            let v: Vector = (0..4).map(|i| x[(i / 2, i % 2)].clone()).collect();
            assert!(psd_test(&m2.represent(&t.mul_vec(&v))).is_psd());
        }
    }

    /// One-sided check against a grid: a negative value of `v^T C v` on a grid
    /// vector means the verdict must be "not CP".
    #[test]
    fn choi_verdict_agrees_with_grid() {
        let m2 = FiniteDimAlgebra::matrix_algebra(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid: Vec<Vector> = (0..4usize.pow(4))
            .map(|k| (0..4).map(|i| Scalar::from_int(((k >> (2 * i)) & 3) as i64 - 1)).collect())
            .collect();
        for round in 0..40 {
            // Alternate arbitrary maps with Kraus-form maps x -> K x K^T.
            let phi = if round % 2 == 0 {
                let rows: Vec<Vec<Scalar>> = (0..4)
                    .map(|_| (0..4).map(|_| Scalar::from_int(rng.random_range(-2..=2))).collect())
                    .collect();
                Matrix::from_rows(rows).unwrap()
            } else {
                let k = Matrix::from_rows(
                    (0..2).map(|_| (0..2).map(|_| Scalar::from_int(rng.random_range(-2..=2))).collect()).collect(),
                )
                .unwrap();
                let cols: Vec<Vector> = (0..4)
                    .map(|e| {
                        let x = m2.represent(&m2.basis(e));
                        let y = k.try_mul(&x).unwrap().try_mul(&k.transpose()).unwrap();
                        (0..4).map(|i| y[(i / 2, i % 2)].clone()).collect()
                    })
                    .collect();
                Matrix::from_columns(4, &cols).unwrap()
            };
            let choi = choi_matrix(&phi, &m2, &m2).unwrap();
            let cp = psd_test(&choi).is_psd();
            if round % 2 == 1 {
                assert!(cp);
            }
            let negative = choi.is_symmetric()
                && grid.iter().any(|v| {
                    let cv = choi.mul_vec(v);
                    v.iter().zip(&cv).fold(Scalar::zero(), |a, (x, y)| &a + &(x * y)).is_negative()
                });
            if negative {
                assert!(!cp);
            }
            if cp {
                assert!(!negative);
            }
        }
    }
}
