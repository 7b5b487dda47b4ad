//! Calculi, bimodules and connections of the two worked examples.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{s3_group, FiniteDimAlgebra, FiniteGroup};
use crate::connection::{Bimodule, Connection, Tensors};
use crate::dga::{Calculus, CalculusKind, GroupCalculusSpec, InnerCalculusSpec, RewriteRule};
use crate::linalg::{axpy, kernel_basis, unit_vec, zero_vec, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

use super::ExampleError;

pub const S3_U: usize = 1;
pub const S3_V: usize = 2;

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// `rho(u) = diag(1, -1)`, `rho(v) = 1/2 [[-1, sqrt3], [sqrt3, 1]]`.
pub fn s3_rho() -> (Matrix, Matrix) {
    let half = Scalar::from_frac(1, 2);
    let s3 = Scalar::sqrt(3).expect("3 is square-free");
    let hs3 = &half * &s3;
    let rho_u = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
    let rho_v = Matrix::from_rows(vec![vec![-half.clone(), hs3.clone()], vec![hs3, half]]).unwrap();
    (rho_u, rho_v)
}

/// `omega(u) = (0, 1)`, `omega(v) = b (-sqrt3, 1)`.
pub fn s3_omega(b: &Scalar) -> (Vector, Vector) {
    let s3 = Scalar::sqrt(3).expect("3 is square-free");
    (
        vec![Scalar::zero(), Scalar::one()],
        vec![-(b * &s3), b.clone()],
    )
}

pub fn s3_calculus(b: &Scalar, max_degree: usize) -> Result<Calculus, ExampleError> {
    let (rho_u, rho_v) = s3_rho();
    let (om_u, om_v) = s3_omega(b);
    let spec = GroupCalculusSpec {
        group: s3_group(),
        rho: vec![(S3_U, rho_u), (S3_V, rho_v)],
        omega: vec![(S3_U, om_u), (S3_V, om_v)],
        generator_names: names(&["e_u", "e_v"]),
        require_connected: true,
    };
    Ok(spec.build(max_degree)?)
}

/// The subgroup generated by the given elements, listed breadth first.
pub fn subgroup(group: &FiniteGroup, generators: &[usize]) -> (FiniteGroup, Vec<usize>) {
    let mut elems = vec![group.identity()];
    let mut head = 0;
    while head < elems.len() {
        for &g in generators {
            let y = group.mul(elems[head], g);
            if !elems.contains(&y) {
                elems.push(y);
            }
        }
        head += 1;
    }
    let pos = |x: usize| elems.iter().position(|&y| y == x).unwrap();
    let table = elems
        .iter()
        .map(|&x| elems.iter().map(|&y| pos(group.mul(x, y))).collect())
        .collect();
    let sub_names = elems.iter().map(|&x| group.names()[x].clone()).collect();
    let sub = FiniteGroup::from_table(sub_names, table).expect("closed under multiplication");
    (sub, elems)
}

/// The calculus on a subgroup `G` of `X` obtained by restricting `omega` to
/// `W = span omega(G)`, with the connection `nabla = d` on `E = CX` and
/// `sigma(xi (x) x) = 1 (x) xi . x`.
#[derive(Debug, Clone)]
pub struct GroupFibrationData {
    pub base: Arc<Calculus>,
    pub total: Arc<Calculus>,
    pub connection: Connection,
    /// Element indices of the subgroup inside the big group.
    pub embedding: Vec<usize>,
    /// Rows span `W` and `W^perp` in the coordinates of `V`.
    pub w: Matrix,
    pub w_perp: Matrix,
}

pub fn group_fibration(
    total: Arc<Calculus>,
    subgroup_generators: &[usize],
) -> Result<GroupFibrationData, ExampleError> {
    let data = match total.kind() {
        CalculusKind::Group(d) => d.clone(),
        _ => return Err(ExampleError::Construction("the total calculus must be a group calculus".into())),
    };
    let a_alg = total.algebra().clone();
    let big = a_alg.group().expect("group calculus over a group algebra").clone();
    let dim_v = data.rho[0].rows();
    for x in 0..big.order() {
        let r = &data.rho[x];
        if r.try_mul(&r.transpose()).unwrap() != Matrix::identity(dim_v) {
            return Err(ExampleError::Construction(format!(
                "the dot product is not invariant under rho({})",
                big.names()[x]
            )));
        }
    }
    let (small, embedding) = subgroup(&big, subgroup_generators);
    let w_rows: Vec<Vector> = subgroup_generators.iter().map(|&g| data.omega[g].clone()).collect();
    let w_space = Subspace::span(dim_v, &w_rows);
    let all_omega: Vec<Vector> = embedding.iter().map(|&g| data.omega[g].clone()).collect();
    if w_space.dim() != w_rows.len() || !Subspace::span(dim_v, &all_omega).is_subspace_of(&w_space) {
        return Err(ExampleError::Construction(
            "omega on the subgroup generators must be a basis of W".into(),
        ));
    }
    let w = Matrix::from_rows(w_rows.clone()).unwrap();
    let perp_rows = kernel_basis(&w);
    let w_perp = Matrix::from_rows_with_cols(perp_rows.clone(), dim_v).unwrap();
    let perp_space = Subspace::span(dim_v, &perp_rows);
    for &g in &embedding {
        let r = &data.rho[g];
        let closed = |s: &Subspace| s.basis().iter().all(|v| s.contains(&r.vec_mul(v)));
        if !closed(&w_space) || !closed(&perp_space) {
            return Err(ExampleError::Construction(format!(
                "W or W^perp is not closed under rho({})",
                big.names()[g]
            )));
        }
    }
    // rho restricted to W in the basis omega(generators).
    let k = w_rows.len();
    let rho_w: Vec<(usize, Matrix)> = subgroup_generators
        .iter()
        .map(|&g| {
            let rows: Vec<Vector> = w_rows
                .iter()
                .map(|row| w_space.coordinates(&data.rho[g].vec_mul(row)).unwrap())
                .collect();
            let local = embedding.iter().position(|&y| y == g).unwrap();
            (local, Matrix::from_rows(rows).unwrap())
        })
        .collect();
    let omega_w: Vec<(usize, Vector)> = subgroup_generators
        .iter()
        .enumerate()
        .map(|(i, &g)| (embedding.iter().position(|&y| y == g).unwrap(), unit_vec(k, i)))
        .collect();
    let gen_names = subgroup_generators
        .iter()
        .map(|&g| format!("e'_{}", big.names()[g]))
        .collect();
    let spec = GroupCalculusSpec {
        group: small,
        rho: rho_w,
        omega: omega_w,
        generator_names: gen_names,
        require_connected: true,
    };
    let base = Arc::new(spec.build(total.max_degree())?);
    let b_alg = base.algebra().clone();
    let iota: Vec<Vector> = embedding.iter().map(|&x| unit_vec(a_alg.dim(), x)).collect();
    let bimodule = Arc::new(Bimodule::regular(b_alg, a_alg.clone(), &iota)?);
    let tensors = Arc::new(Tensors::new(bimodule, base.clone(), total.clone())?);
    let nabla = Connection::nabla_from_cyclic(&tensors, a_alg.unit())?;
    // Generators of Omega^1_B as forms on A: W-vector -> generator coordinates of A.
    let basis_inv = data.generator_basis.inverse().expect("generator basis is invertible");
    let ne = tensors.e_dim();
    let mut sigma = Matrix::zeros(tensors.t_dim(1), tensors.s_dim(1));
    for (g, row) in w_rows.iter().enumerate() {
        let c = basis_inv.vec_mul(row);
        let mut form = zero_vec(total.dim(1));
        for (j, cj) in c.iter().enumerate() {
            axpy(&mut form, cj, &total.monomial_form(1, j));
        }
        for x in 0..ne {
            let xi_x = total.right_mul(&form, &a_alg.basis(x));
            let col = tensors.embed(1, a_alg.unit(), &xi_x);
            sigma.set_column(tensors.s_index(x, g), &col);
        }
    }
    let connection = Connection::new(tensors, nabla, sigma)?;
    Ok(GroupFibrationData {
        base,
        total,
        connection,
        embedding,
        w,
        w_perp,
    })
}

pub fn s3_over_z2(b: &Scalar, max_degree: usize) -> Result<GroupFibrationData, ExampleError> {
    let total = Arc::new(s3_calculus(b, max_degree)?);
    group_fibration(total, &[S3_U])
}

/// Inner calculus on `M_3` with `theta = E12 s + E21 t + E33 u` and
/// `ts -> st, us -> su, ut -> tu, uu -> st`.
pub fn m3_calculus(max_degree: usize) -> Result<Calculus, ExampleError> {
    let alg = Arc::new(FiniteDimAlgebra::matrix_algebra(3));
    let one = Scalar::one;
    let spec = InnerCalculusSpec {
        algebra: alg,
        generator_names: names(&["s", "t", "u"]),
        theta: vec![unit_vec(9, 1), unit_vec(9, 3), unit_vec(9, 8)],
        relations: vec![
            RewriteRule::new(vec![1, 0], vec![(one(), vec![0, 1])]),
            RewriteRule::new(vec![2, 0], vec![(one(), vec![0, 2])]),
            RewriteRule::new(vec![2, 1], vec![(one(), vec![1, 2])]),
            RewriteRule::new(vec![2, 2], vec![(one(), vec![0, 1])]),
        ],
        generator_star: None,
    };
    Ok(spec.build(max_degree)?)
}

/// Inner calculus on `M_2` with `theta' = E12 s' + E21 t'` and `t's' -> s't'`.
pub fn m2_calculus(max_degree: usize) -> Result<Calculus, ExampleError> {
    let alg = Arc::new(FiniteDimAlgebra::matrix_algebra(2));
    let spec = InnerCalculusSpec {
        algebra: alg,
        generator_names: names(&["s'", "t'"]),
        theta: vec![unit_vec(4, 1), unit_vec(4, 2)],
        relations: vec![RewriteRule::new(vec![1, 0], vec![(Scalar::one(), vec![0, 1])])],
        generator_star: None,
    };
    Ok(spec.build(max_degree)?)
}

/// `e0 = [[2,0,0],[0,2,0]]` in `M_{2,3}`.
pub fn matrix_e0() -> Vector {
    let mut e0 = zero_vec(6);
    e0[0] = Scalar::from_int(2);
    e0[4] = Scalar::from_int(2);
    e0
}

#[derive(Debug, Clone)]
pub struct MatrixFibrationData {
    pub base: Arc<Calculus>,
    pub total: Arc<Calculus>,
    pub connection: Connection,
    pub e0: Vector,
}

/// Which corruption to apply to the braiding of the matrix example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixSigma {
    /// `sigma(s' (x) e) = e (x) s`, `sigma(t' (x) e) = e (x) t`.
    Standard,
    /// `s'` and `t'` exchange their images.
    Swapped,
    /// Both `s'` and `t'` go to `e (x) s`.
    Collapsed,
    /// The images of `e11` and `e12` are exchanged, which is not a bimodule map.
    PermutedBasis,
}

pub fn matrix_sigma(tensors: &Tensors, kind: MatrixSigma) -> Matrix {
    let total = tensors.total();
    let ne = tensors.e_dim();
    let images: [usize; 2] = match kind {
        MatrixSigma::Swapped => [1, 0],
        MatrixSigma::Collapsed => [0, 0],
        _ => [0, 1],
    };
    let mut sigma = Matrix::zeros(tensors.t_dim(1), tensors.s_dim(1));
    for (g, &img) in images.iter().enumerate() {
        for i in 0..ne {
            let target = match (kind, i) {
                (MatrixSigma::PermutedBasis, 0) => 1,
                (MatrixSigma::PermutedBasis, 1) => 0,
                _ => i,
            };
            let col = tensors.embed(1, &unit_vec(ne, target), &total.monomial_form(1, img));
            sigma.set_column(tensors.s_index(i, g), &col);
        }
    }
    sigma
}

pub fn m3_over_m2(max_degree: usize) -> Result<MatrixFibrationData, ExampleError> {
    let total = Arc::new(m3_calculus(max_degree)?);
    let base = Arc::new(m2_calculus(max_degree)?);
    let bimodule = Arc::new(Bimodule::rectangular(base.algebra().clone(), total.algebra().clone())?);
    let tensors = Arc::new(Tensors::new(bimodule, base.clone(), total.clone())?);
    let e0 = matrix_e0();
    let nabla = Connection::nabla_from_cyclic(&tensors, &e0)?;
    let sigma = matrix_sigma(&tensors, MatrixSigma::Standard);
    let connection = Connection::new(tensors, nabla, sigma)?;
    Ok(MatrixFibrationData {
        base,
        total,
        connection,
        e0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::ExtendabilityWitness;
    use crate::dga::DgaError;

    #[test]
    fn s3_calculus_dims_and_derivatives() {
        let c = s3_calculus(&Scalar::one(), 3).unwrap();
        assert_eq!(c.dims(), vec![6, 12, 6, 0]);
        assert_eq!(c.kernel_of_d0_dim(), 1);
        // d(u) = -e_u . u
        let mut du = zero_vec(12);
        du[S3_U] = -Scalar::one();
        assert_eq!(c.d(0, &unit_vec(6, S3_U)), du);
        assert!(crate::linalg::is_zero_vec(&c.d(0, c.algebra().unit())));
    }

    #[test]
    fn s3_rejects_degenerate_parameters() {
        let half = Scalar::from_frac(1, 2);
        assert_eq!(
            s3_calculus(&half, 3).unwrap_err(),
            ExampleError::Dga(DgaError::Disconnected("uvu".into()))
        );
        assert_eq!(
            s3_calculus(&Scalar::zero(), 3).unwrap_err(),
            ExampleError::Dga(DgaError::NotSurjective)
        );
        assert!(s3_calculus(&Scalar::from_int(2), 2).is_ok());
    }

    #[test]
    fn matrix_calculi_dims() {
        let m3 = m3_calculus(3).unwrap();
        assert_eq!(m3.dims(), vec![9, 27, 45, 63]);
        assert_eq!(m3.kernel_of_d0_dim(), 2);
        assert!(crate::linalg::is_zero_vec(&m3.d(0, &unit_vec(9, 8))));
        let theta = m3.theta().unwrap().clone();
        for g in 0..3 {
            let gf = m3.monomial_form(1, g);
            let two_g_theta = crate::linalg::scale_vec(&Scalar::from_int(2), &m3.wedge(1, &gf, 1, &theta));
            assert_eq!(m3.d(1, &gf), two_g_theta);
        }
        let m2 = m2_calculus(3).unwrap();
        assert_eq!(m2.dims(), vec![4, 8, 12, 16]);
    }

    #[test]
    fn group_connection_is_flat_and_extendable() {
        let data = s3_over_z2(&Scalar::one(), 3).unwrap();
        let c = &data.connection;
        assert!(c.is_flat().unwrap());
        let derived = Connection::derive_braiding(c.tensors(), c.nabla()).unwrap();
        assert_eq!(&derived, c.sigma());
        c.extendability_check(3).unwrap();
        for n in 0..=1 {
            assert!(c.lemma_check(n).unwrap());
        }
        for n in 0..=2 {
            assert!(c.nabla_sigma_check(n).unwrap(), "n = {n}");
        }
        assert_eq!(c.kernel_dim(), 1);
    }

    #[test]
    fn matrix_connection_is_flat_and_extendable() {
        let data = m3_over_m2(3).unwrap();
        let c = &data.connection;
        assert!(c.annihilates(&data.e0));
        assert!(c.is_flat().unwrap());
        let derived = Connection::derive_braiding(c.tensors(), c.nabla()).unwrap();
        assert_eq!(&derived, c.sigma());
        c.extendability_check(3).unwrap();
        for n in 0..=1 {
            assert!(c.lemma_check(n).unwrap());
            c.extension_well_defined(n).unwrap();
        }
        for n in 0..=2 {
            assert!(c.nabla_sigma_check(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn matrix_sigma_mutants() {
        let data = m3_over_m2(3).unwrap();
        let t = data.connection.tensors().clone();
        let swapped = data.connection.with_sigma(matrix_sigma(&t, MatrixSigma::Swapped)).unwrap();
        assert!(swapped.validate().is_err());
        assert!(swapped.extendability_check(3).is_ok());
        assert!(swapped.nabla_sigma_check(0).unwrap());
        assert!(!swapped.nabla_sigma_check(1).unwrap());
        let permuted = data.connection.with_sigma(matrix_sigma(&t, MatrixSigma::PermutedBasis)).unwrap();
        assert!(matches!(
            permuted.extendability_check(3),
            Err(ExtendabilityWitness::NotBimoduleMap { degree: 1, .. })
        ));
    }
}
