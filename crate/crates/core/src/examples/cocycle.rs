//! Derivation of the one-parameter family of cocycles `omega: S_3 -> K^2` for the
//! right representation `rho`, checked by polynomial residuals in the parameter.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{kernel_basis, Matrix, Vector};
use crate::poly::{add_rows, format_row, is_zero_row, poly_vec, row_times, sub_rows, Poly, PolyVec};
use crate::scalar::Scalar;

use super::{s3_rho, ExampleError};

/// Result of the derivation; residuals are polynomials in the named variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleFamily {
    /// `omega(u) (rho(u) + 1)` for `omega(u) = (c, 1)`, in `c`.
    pub u_residual_generic: PolyVec,
    pub u_kernel: Vec<Vector>,
    pub omega_u: PolyVec,
    /// `omega(u^2)` at the solved `omega(u)`.
    pub u_residual: PolyVec,
    pub v_kernel: Vec<Vector>,
    /// `b (-sqrt3, 1)`, in `b`.
    pub omega_v: PolyVec,
    pub v_residual: PolyVec,
    /// `omega(v^2)` with the wrong sign `a = +sqrt3 b`.
    pub v_residual_wrong_sign: PolyVec,
    /// `omega(uvu) - omega(vuv)`.
    pub braid_residual: PolyVec,
    pub omega_uvu: PolyVec,
    /// Values of `b` at which `omega(uvu)` vanishes.
    pub degenerate_b: Vec<Scalar>,
    pub trace: Vec<String>,
}

/// `omega(g_1 ... g_k)` from `omega(xy) = omega(x) rho(y) + omega(y)`.
fn omega_word(word: &[usize], omega: &[PolyVec; 2], rho: &[Matrix; 2]) -> PolyVec {
    match word.split_first() {
        None => vec![Poly::zero(); 2],
        Some((&x, rest)) => {
            let rho_rest = rest
                .iter()
                .fold(Matrix::identity(2), |acc, &g| acc.try_mul(&rho[g]).unwrap());
            add_rows(&row_times(&omega[x], &rho_rest), &omega_word(rest, omega, rho))
        }
    }
}

/// Left kernel of `m`, each vector scaled so that its last nonzero entry is 1.
fn left_kernel(m: &Matrix) -> Vec<Vector> {
    kernel_basis(&m.transpose())
        .into_iter()
        .map(|v| {
            let last = v.iter().rev().find(|c| !c.is_zero()).cloned().expect("nonzero kernel vector");
            let inv = last.try_inv().unwrap();
            v.iter().map(|c| c * &inv).collect()
        })
        .collect()
}

pub fn solve_s3_cocycle_family() -> Result<CocycleFamily, ExampleError> {
    let (rho_u, rho_v) = s3_rho();
    let rho = [rho_u.clone(), rho_v.clone()];
    let id = Matrix::identity(2);
    let mut trace = Vec::new();
    let b = Poly::x();

    // u^2 = e: omega(u) (rho(u) + 1) = 0.
    let ru = rho_u.add(&id);
    let generic_u = vec![Poly::x(), Poly::constant(Scalar::one())];
    let u_residual_generic = row_times(&generic_u, &ru);
    trace.push(format!("omega(u^2) for omega(u) = (c, 1): {}", format_row(&u_residual_generic, "c")));
    let u_kernel = left_kernel(&ru);
    if u_kernel.len() != 1 {
        return Err(ExampleError::Construction("left kernel of rho(u) + 1 is not a line".into()));
    }
    let omega_u = poly_vec(&u_kernel[0]);
    trace.push(format!("hence c = 0; omega(u) = {}", format_row(&omega_u, "b")));

    // v^2 = e: omega(v) (rho(v) + 1) = 0.
    let rv = rho_v.add(&id);
    let v_kernel = left_kernel(&rv);
    if v_kernel.len() != 1 {
        return Err(ExampleError::Construction("left kernel of rho(v) + 1 is not a line".into()));
    }
    let omega_v: PolyVec = v_kernel[0].iter().map(|c| b.scale(c)).collect();
    trace.push(format!("left kernel of rho(v) + 1 gives a = -sqrt(3) b; omega(v) = {}", format_row(&omega_v, "b")));

    let omega = [omega_u.clone(), omega_v.clone()];
    let u_residual = omega_word(&[0, 0], &omega, &rho);
    let v_residual = omega_word(&[1, 1], &omega, &rho);
    let s3 = Scalar::sqrt(3).expect("square-free");
    let wrong = [omega_u.clone(), vec![b.scale(&s3), b.clone()]];
    let v_residual_wrong_sign = omega_word(&[1, 1], &wrong, &rho);
    trace.push(format!("omega(u^2) = {}", format_row(&u_residual, "b")));
    trace.push(format!("omega(v^2) = {}", format_row(&v_residual, "b")));
    trace.push(format!("omega(v^2) with a = +sqrt(3) b: {}", format_row(&v_residual_wrong_sign, "b")));

    let omega_uvu = omega_word(&[0, 1, 0], &omega, &rho);
    let omega_vuv = omega_word(&[1, 0, 1], &omega, &rho);
    let braid_residual = sub_rows(&omega_uvu, &omega_vuv);
    trace.push(format!("omega(uvu) - omega(vuv) = {}", format_row(&braid_residual, "b")));
    trace.push(format!("omega(uvu) = {}", format_row(&omega_uvu, "b")));

    // Common roots of the linear entries of omega(uvu).
    let mut degenerate_b: Option<Scalar> = None;
    let mut consistent = true;
    for p in &omega_uvu {
        match p.degree() {
            None => {}
            Some(0) => consistent = false,
            Some(1) => {
                let root = (-&p.coeffs()[0]).try_div(&p.coeffs()[1]).unwrap();
                match &degenerate_b {
                    Some(r) if r != &root => consistent = false,
                    _ => degenerate_b = Some(root),
                }
            }
            Some(_) => return Err(ExampleError::Construction("omega(uvu) is not linear in b".into())),
        }
    }
    let degenerate_b: Vec<Scalar> = if consistent { degenerate_b.into_iter().collect() } else { Vec::new() };
    for r in &degenerate_b {
        trace.push(format!("omega(uvu) = 0 at b = {r}, where the calculus is not connected"));
    }
    if !is_zero_row(&u_residual) || !is_zero_row(&v_residual) || !is_zero_row(&braid_residual) {
        return Err(ExampleError::Construction("cocycle residuals do not vanish".into()));
    }
    Ok(CocycleFamily {
        u_residual_generic,
        u_kernel,
        omega_u,
        u_residual,
        v_kernel,
        omega_v,
        v_residual,
        v_residual_wrong_sign,
        braid_residual,
        omega_uvu,
        degenerate_b,
        trace,
    })
}
