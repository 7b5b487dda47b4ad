//! Inner calculi `da = [theta, a]` with central 1-form generators.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::FiniteDimAlgebra;
use crate::linalg::{axpy, sub_vec, zero_vec, Vector};
use crate::scalar::Scalar;

use super::{Calculus, CalculusKind, DgaError, RewriteRule, RewriteSystem};

/// Input data for an inner calculus with `theta = sum_g g . theta_g`.
#[derive(Debug, Clone)]
pub struct InnerCalculusSpec {
    pub algebra: Arc<FiniteDimAlgebra>,
    pub generator_names: Vec<String>,
    /// Algebra coefficient `theta_g` of each generator.
    pub theta: Vec<Vector>,
    pub relations: Vec<RewriteRule>,
    /// Star on generators as combinations of generators. When absent it is derived
    /// for matrix algebras whose `theta` coefficients are matrix units closed under
    /// transposition: `g* = -h` where `theta_h = theta_g^T`.
    pub generator_star: Option<Vec<Vector>>,
}

impl InnerCalculusSpec {
    pub fn build(&self, max_degree: usize) -> Result<Calculus, DgaError> {
        let na = self.algebra.dim();
        let k = self.generator_names.len();
        if self.theta.len() != k || self.theta.iter().any(|t| t.len() != na) {
            return Err(DgaError::InvalidData("theta needs one coefficient per generator".into()));
        }
        let rewrite = RewriteSystem::new(self.generator_names.clone(), self.relations.clone())?;
        // Central generators: x . g = g . x.
        let commutation: Vec<Vec<Vector>> = (0..na)
            .map(|x| {
                (0..k)
                    .map(|g| {
                        let mut v = zero_vec(k * na);
                        v[g * na + x] = Scalar::one();
                        v
                    })
                    .collect()
            })
            .collect();
        let calc = Calculus::structure(self.algebra.clone(), rewrite, commutation, max_degree)?;
        let mut theta = zero_vec(calc.dim(1));
        for (g, t) in self.theta.iter().enumerate() {
            theta[g * na..(g + 1) * na].clone_from_slice(t);
        }
        let d0: Vec<Vector> = (0..na)
            .map(|a| {
                let ab = self.algebra.basis(a);
                sub_vec(&calc.right_mul(&theta, &ab), &calc.left_mul(1, &ab, &theta))
            })
            .collect();
        let dgen: Vec<Vector> = if max_degree >= 2 {
            (0..k)
                .map(|g| {
                    let gf = calc.monomial_form(1, g);
                    let mut v = calc.wedge(1, &theta, 1, &gf);
                    axpy(&mut v, &Scalar::one(), &calc.wedge(1, &gf, 1, &theta));
                    v
                })
                .collect()
        } else {
            (0..k).map(|_| Vec::new()).collect()
        };
        let star = match &self.generator_star {
            Some(s) => Some(s.clone()),
            None => self.derive_star(),
        };
        calc.finish(d0, dgen, star, CalculusKind::Inner { theta })
    }

    fn derive_star(&self) -> Option<Vec<Vector>> {
        let k = self.generator_names.len();
        let n = self.algebra.matrix_size()?;
        let unit_index = |t: &Vector| -> Option<usize> {
            let mut nz = t.iter().enumerate().filter(|(_, c)| !c.is_zero());
            let (i, c) = nz.next()?;
            (c.is_one() && nz.next().is_none()).then_some(i)
        };
        let units: Vec<usize> = self.theta.iter().map(unit_index).collect::<Option<_>>()?;
        let mut star = Vec::with_capacity(k);
        for &u in &units {
            let transposed = (u % n) * n + u / n;
            let h = units.iter().position(|&v| v == transposed)?;
            let mut s = zero_vec(k);
            s[h] = -Scalar::one();
            star.push(s);
        }
        Some(star)
    }
}
