//! Bicovariant-style calculi on group algebras from a right representation and a cocycle.
//!
//! For a right action `v <| x = v rho(x)` with `rho(xy) = rho(x) rho(y)` and a cocycle
//! `omega(xy) = omega(x) rho(y) + omega(y)`, forms are `Lambda(V) . x` with
//! `x . v = (v <| x^-1) . x` and `dx = (omega(x) <| x^-1) . x`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{FiniteDimAlgebra, FiniteGroup};
use crate::linalg::{is_zero_vec, zero_vec, Matrix, Vector};
use crate::scalar::Scalar;

use super::{Calculus, CalculusKind, DgaError, RewriteSystem};

/// Input data for a group calculus.
#[derive(Debug, Clone)]
pub struct GroupCalculusSpec {
    pub group: FiniteGroup,
    /// `rho` on each group generator (element index, matrix acting on row vectors).
    pub rho: Vec<(usize, Matrix)>,
    /// `omega` on each group generator; these values become the 1-form generators.
    pub omega: Vec<(usize, Vector)>,
    /// Names of the 1-form generators, one per entry of `omega`.
    pub generator_names: Vec<String>,
    pub require_connected: bool,
}

/// Representation, cocycle and change of basis retained by a group calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupData {
    /// `rho(x)` for every element, in standard coordinates of `V`.
    pub rho: Vec<Matrix>,
    /// `omega(x)` for every element, in standard coordinates of `V`.
    pub omega: Vec<Vector>,
    /// Rows are the 1-form generators in standard coordinates.
    pub generator_basis: Matrix,
}

fn bfs_words(group: &FiniteGroup, gens: &[usize]) -> Result<Vec<(usize, usize, usize)>, DgaError> {
    // (element, parent, generator) in discovery order.
    let n = group.order();
    let mut seen = vec![false; n];
    seen[group.identity()] = true;
    let mut order = vec![group.identity()];
    let mut steps = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        for &g in gens {
            let y = group.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                order.push(y);
                steps.push((y, x, g));
            }
        }
        head += 1;
    }
    if order.len() != n {
        return Err(DgaError::InvalidData("the given elements do not generate the group".into()));
    }
    Ok(steps)
}

/// Extends `rho` from generators by `rho(xg) = rho(x) rho(g)` and checks it is a
/// homomorphism on all pairs.
pub fn extend_representation(
    group: &FiniteGroup,
    rho_gens: &[(usize, Matrix)],
) -> Result<Vec<Matrix>, DgaError> {
    let dim = rho_gens
        .first()
        .map(|(_, m)| m.rows())
        .ok_or_else(|| DgaError::InvalidData("no generators".into()))?;
    if rho_gens.iter().any(|(_, m)| m.rows() != dim || m.cols() != dim) {
        return Err(DgaError::InvalidData("representation matrices must be square".into()));
    }
    let gens: Vec<usize> = rho_gens.iter().map(|(g, _)| *g).collect();
    let mut rho: Vec<Option<Matrix>> = vec![None; group.order()];
    rho[group.identity()] = Some(Matrix::identity(dim));
    for (y, x, g) in bfs_words(group, &gens)? {
        let rg = &rho_gens.iter().find(|(h, _)| *h == g).unwrap().1;
        rho[y] = Some(rho[x].as_ref().unwrap().try_mul(rg)?);
    }
    let rho: Vec<Matrix> = rho.into_iter().map(Option::unwrap).collect();
    for x in 0..group.order() {
        for y in 0..group.order() {
            if rho[group.mul(x, y)] != rho[x].try_mul(&rho[y])? {
                return Err(DgaError::NotARepresentation(x, y));
            }
        }
    }
    Ok(rho)
}

/// Extends `omega` from generators by `omega(xg) = omega(x) rho(g) + omega(g)`.
pub fn extend_cocycle(
    group: &FiniteGroup,
    rho: &[Matrix],
    omega_gens: &[(usize, Vector)],
) -> Result<Vec<Vector>, DgaError> {
    let dim = rho[0].rows();
    let gens: Vec<usize> = omega_gens.iter().map(|(g, _)| *g).collect();
    let mut omega: Vec<Vector> = vec![zero_vec(dim); group.order()];
    for (y, x, g) in bfs_words(group, &gens)? {
        let og = &omega_gens.iter().find(|(h, _)| *h == g).unwrap().1;
        omega[y] = crate::linalg::add_vec(&rho[g].vec_mul(&omega[x]), og);
    }
    Ok(omega)
}

/// Checks `omega(xy) = omega(x) rho(y) + omega(y)` on all pairs in element order and
/// returns the first failing pair.
pub fn cocycle_check(
    group: &FiniteGroup,
    rho: &[Matrix],
    omega: &[Vector],
) -> Result<(), (usize, usize)> {
    for x in 0..group.order() {
        for y in 0..group.order() {
            let rhs = crate::linalg::add_vec(&rho[y].vec_mul(&omega[x]), &omega[y]);
            if omega[group.mul(x, y)] != rhs {
                return Err((x, y));
            }
        }
    }
    Ok(())
}

impl GroupCalculusSpec {
    pub fn build(&self, max_degree: usize) -> Result<Calculus, DgaError> {
        let group = &self.group;
        let rho = extend_representation(group, &self.rho)?;
        let omega = extend_cocycle(group, &rho, &self.omega)?;
        cocycle_check(group, &rho, &omega).map_err(|(x, y)| DgaError::CocycleFailure(x, y))?;
        let dim_v = rho[0].rows();
        if self.omega.len() != dim_v || self.generator_names.len() != dim_v {
            return Err(DgaError::NotSurjective);
        }
        let basis = Matrix::from_rows(self.omega.iter().map(|(_, v)| v.clone()).collect())?;
        let basis_inv = basis.inverse().map_err(|_| DgaError::NotSurjective)?;
        if self.require_connected {
            for x in 0..group.order() {
                if x != group.identity() && is_zero_vec(&omega[x]) {
                    return Err(DgaError::Disconnected(group.names()[x].clone()));
                }
            }
        }
        // rho in generator coordinates: c -> c B rho B^-1.
        let rho_gen: Vec<Matrix> = rho
            .iter()
            .map(|r| basis.try_mul(r).and_then(|m| m.try_mul(&basis_inv)))
            .collect::<Result<_, _>>()?;
        let algebra = Arc::new(FiniteDimAlgebra::group_algebra(group.clone()));
        let na = algebra.dim();
        let k = dim_v;
        let commutation: Vec<Vec<Vector>> = (0..na)
            .map(|x| {
                let xinv = group.inverse(x);
                (0..k)
                    .map(|g| {
                        let mut v = zero_vec(k * na);
                        for j in 0..k {
                            v[j * na + x] = rho_gen[xinv][(g, j)].clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let rewrite = RewriteSystem::exterior(self.generator_names.clone());
        let calc = Calculus::structure(algebra, rewrite, commutation, max_degree)?;
        let d0: Vec<Vector> = (0..na)
            .map(|x| {
                let w = rho[group.inverse(x)].vec_mul(&omega[x]);
                let c = basis_inv.vec_mul(&w);
                let mut v = zero_vec(k * na);
                for j in 0..k {
                    v[j * na + x] = c[j].clone();
                }
                v
            })
            .collect();
        let d2 = if max_degree >= 2 { calc.dim(2) } else { 0 };
        let dgen = vec![zero_vec(d2); k];
        let minus_one = -Scalar::one();
        let star = (0..k)
            .map(|g| {
                let mut v = zero_vec(k);
                v[g] = minus_one.clone();
                v
            })
            .collect();
        let data = GroupData {
            rho,
            omega,
            generator_basis: basis,
        };
        calc.finish(d0, dgen, Some(star), CalculusKind::Group(data))
    }
}

impl GroupData {
    /// `rho(x)` expressed in the basis of 1-form generators.
    pub fn rho_in_generators(&self, x: usize) -> Matrix {
        let inv = self.generator_basis.inverse().expect("generator basis is invertible");
        self.generator_basis
            .try_mul(&self.rho[x])
            .and_then(|m| m.try_mul(&inv))
            .expect("square matrices")
    }

    pub fn describe_omega(&self, group: &FiniteGroup) -> Vec<String> {
        (0..group.order())
            .map(|x| {
                let parts: Vec<String> = self.omega[x].iter().map(|c| format!("{c}")).collect();
                format!("omega({}) = ({})", group.names()[x], parts.join(", "))
            })
            .collect()
    }
}
