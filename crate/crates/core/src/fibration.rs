//! Filtration of `C^n = E (x)_A Omega^n_A` by the images of `sigma ^ id`, the
//! quotients `M_{p,q}`, the fibre complex `N_q = M_{0,q}`, the comparison map `g`,
//! the induced connections on fibre cohomology and the resulting sheaf cohomology.
//!
//! `Omega^p_B (x)_B X` is realized as `Lambda^p_B (x) X` (index `m * dim X + j`)
//! because `Omega^p_B` is right free on its normal monomials.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::connection::{Connection, ConnectionError, ExtendabilityWitness};
use crate::dga::Calculus;
use crate::linalg::{axpy, unit_vec, zero_vec, Matrix, Subquotient, Subspace, Vector};
use crate::scalar::Scalar;
use crate::spectral::{FilteredComplex, SpectralError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibrationError {
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("the connection is not flat")]
    NotFlat,
    #[error("the connection is not extendable: {0:?}")]
    NotExtendable(ExtendabilityWitness),
    #[error("the calculi stop below degree {0}")]
    DegreeTooHigh(usize),
    #[error("g is not well defined at ({p}, {q})")]
    GNotWellDefined { p: usize, q: usize },
    #[error("g is not an isomorphism at ({p}, {q})")]
    GNotIsomorphism { p: usize, q: usize },
    #[error("no decomposition of nabla^[{q}] through sigma ^ id: {reason}")]
    Decomposition { q: usize, reason: String },
}

/// The matrix of `g: Omega^p_B (x)_B N_q -> M_{p,q}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMap {
    pub p: usize,
    pub q: usize,
    pub matrix: Matrix,
    pub rank: usize,
    pub is_isomorphism: bool,
}

/// Per-cell entry of a fibration verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GCell {
    pub p: usize,
    pub q: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub well_defined: bool,
    pub is_isomorphism: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationVerdict {
    pub connection_error: Option<ConnectionError>,
    pub flat: bool,
    pub extendability: Option<ExtendabilityWitness>,
    pub filtration_error: Option<SpectralError>,
    pub cells: Vec<GCell>,
    pub holds: bool,
}

impl FibrationVerdict {
    /// First cell where `g` fails.
    pub fn witness(&self) -> Option<&GCell> {
        self.cells.iter().find(|c| !c.is_isomorphism)
    }
}

/// `nabla_q` on `H^q(N)` with its checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedConnection {
    pub q: usize,
    /// `H^q -> Lambda^1_B (x) H^q`.
    pub matrix: Matrix,
    pub well_defined: bool,
    pub leibniz: bool,
    pub flat: bool,
}

/// The filtered complex of a connection together with its quotients.
#[derive(Debug, Clone)]
pub struct Fibration {
    connection: Connection,
    complex: FilteredComplex,
    /// `M_{p,q}` for `p + q <= N`.
    cells: BTreeMap<(usize, usize), Subquotient>,
}

impl Fibration {
    /// Checks flatness and extendability, then builds and validates the filtered
    /// complex in degrees `0..=top`.
    pub fn new(connection: &Connection, top: usize) -> Result<Self, FibrationError> {
        connection.validate()?;
        if !connection.is_flat()? {
            return Err(FibrationError::NotFlat);
        }
        connection
            .extendability_check(top)
            .map_err(FibrationError::NotExtendable)?;
        let f = Self::new_unchecked(connection, top)?;
        f.complex.validate()?;
        Ok(f)
    }

    /// Builds the complex without checking the connection or the filtration axioms.
    pub fn new_unchecked(connection: &Connection, top: usize) -> Result<Self, FibrationError> {
        let t = connection.tensors();
        if t.total().max_degree() < top || t.base().max_degree() < top {
            return Err(FibrationError::DegreeTooHigh(top));
        }
        let dims: Vec<usize> = (0..=top).map(|n| t.t_dim(n)).collect();
        let d: Vec<Matrix> = (0..top).map(|n| connection.nabla_n(n)).collect::<Result<_, _>>()?;
        let sigmas: Vec<Matrix> = (0..=top).map(|m| connection.sigma_matrix_degree(m)).collect();
        let filtration: Vec<Vec<Subspace>> = (0..=top)
            .map(|n| {
                (0..=top + 1)
                    .map(|m| {
                        if m > n {
                            return Subspace::zero(dims[n]);
                        }
                        let j = n - m;
                        let dim_j = t.total().dim(j);
                        let mut vecs = Vec::new();
                        for s in sigmas[m].columns() {
                            for k in 0..dim_j {
                                vecs.push(t.t_wedge(m, &s, j, &unit_vec(dim_j, k)));
                            }
                        }
                        Subspace::span(dims[n], &vecs)
                    })
                    .collect()
            })
            .collect();
        let complex = FilteredComplex::new_unchecked(dims, d, filtration)?;
        let mut cells = BTreeMap::new();
        for n in 0..=top {
            for p in 0..=n {
                let fp = complex.f(p as i64, n);
                let fp1 = complex.f(p as i64 + 1, n).intersection(&fp);
                cells.insert((p, n - p), Subquotient::new(&fp, &fp1).expect("intersection is contained"));
            }
        }
        Ok(Fibration {
            connection: connection.clone(),
            complex,
            cells,
        })
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn complex(&self) -> &FilteredComplex {
        &self.complex
    }

    pub fn top(&self) -> usize {
        self.complex.top_degree()
    }

    fn base(&self) -> &Calculus {
        self.connection.tensors().base()
    }

    /// `M_{p,q}`; zero outside the computed range.
    pub fn m_cell(&self, p: usize, q: usize) -> Option<&Subquotient> {
        self.cells.get(&(p, q))
    }

    pub fn m_dim(&self, p: usize, q: usize) -> usize {
        self.m_cell(p, q).map(Subquotient::dim).unwrap_or(0)
    }

    pub fn n_dim(&self, q: usize) -> usize {
        self.m_dim(0, q)
    }

    /// Induced `M_{p,q} -> M_{p,q+1}`, for `p + q < N`.
    pub fn m_differential(&self, p: usize, q: usize) -> Matrix {
        let n = p + q;
        let src = &self.cells[&(p, q)];
        let dst = &self.cells[&(p, q + 1)];
        let d = self.complex.d(n);
        let cols: Vec<Vector> = src
            .representatives()
            .iter()
            .map(|x| dst.class_of(&d.mul_vec(x)).unwrap_or_else(|| zero_vec(dst.dim())))
            .collect();
        Matrix::from_columns(dst.dim(), &cols).unwrap()
    }

    /// `H^{p+q}(M_{p,.})` as a subquotient of `M_{p,q}` coordinates, for `p + q < N`.
    pub fn m_cohomology(&self, p: usize, q: usize) -> Subquotient {
        let dim = self.m_dim(p, q);
        let ker = Subspace::full(dim).preimage_within(&self.m_differential(p, q), &Subspace::zero(self.m_dim(p, q + 1)));
        let im = if q > 0 {
            Subspace::full(self.m_dim(p, q - 1)).image_under(&self.m_differential(p, q - 1))
        } else {
            Subspace::zero(dim)
        };
        Subquotient::new(&ker, &im.intersection(&ker)).expect("contained")
    }

    /// `H^q(N)` in `N_q` coordinates.
    pub fn fibre_cohomology(&self, q: usize) -> Subquotient {
        self.m_cohomology(0, q)
    }

    /// `(sigma_p ^ id)(m (x) x)` for a monomial `m` of `Lambda^p_B` and `x` in `T^q`.
    fn sigma_wedge(&self, sigma_p: &Matrix, p: usize, m: usize, q: usize, x: &[Scalar]) -> Vector {
        let t = self.connection.tensors();
        let nm = t.total().num_monomials(q);
        let mut out = zero_vec(t.t_dim(p + q));
        for (idx, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = (idx / nm, idx % nm);
            let s = sigma_p.column(t.s_index(i, m));
            axpy(&mut out, c, &t.t_wedge_mono(p, &s, q, j));
        }
        out
    }

    /// Checks that `g` maps `Lambda^p (x) F^1 C^q` into `F^{p+1}`, then returns its matrix.
    pub fn g_map(&self, p: usize, q: usize) -> Result<GMap, FibrationError> {
        let n = p + q;
        let target = self
            .cells
            .get(&(p, q))
            .ok_or(FibrationError::DegreeTooHigh(n))?;
        let sigma_p = self.connection.sigma_matrix_degree(p);
        let nmp = self.base().num_monomials(p);
        let fp = self.complex.f(p as i64, n);
        let fp1 = self.complex.f(p as i64 + 1, n);
        for m in 0..nmp {
            for x in self.complex.f(1, q).basis() {
                if !fp1.contains(&self.sigma_wedge(&sigma_p, p, m, q, x)) {
                    return Err(FibrationError::GNotWellDefined { p, q });
                }
            }
        }
        let nq = &self.cells[&(0, q)];
        let reps = nq.representatives();
        let mut cols = Vec::with_capacity(nmp * reps.len());
        for m in 0..nmp {
            for x in &reps {
                let y = self.sigma_wedge(&sigma_p, p, m, q, x);
                if !fp.contains(&y) {
                    return Err(FibrationError::GNotWellDefined { p, q });
                }
                cols.push(target.class_of(&y).expect("inside F^p"));
            }
        }
        let matrix = Matrix::from_columns(target.dim(), &cols).unwrap();
        let rank = matrix.rank();
        let is_isomorphism = rank == target.dim() && rank == cols.len();
        Ok(GMap {
            p,
            q,
            matrix,
            rank,
            is_isomorphism,
        })
    }

    /// `[nabla] o g = g o ((-1)^p id (x) [nabla])` on `Lambda^p (x) N_q`, for `p + q < N`.
    pub fn commuting_square(&self, p: usize, q: usize) -> Result<bool, FibrationError> {
        let g = self.g_map(p, q)?.matrix;
        let g1 = self.g_map(p, q + 1)?.matrix;
        let lhs = self.m_differential(p, q).try_mul(&g).unwrap();
        let dn = self.m_differential(0, q);
        let nmp = self.base().num_monomials(p);
        let mut id_dn = Matrix::zeros(nmp * dn.rows(), nmp * dn.cols());
        let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        for m in 0..nmp {
            for r in 0..dn.rows() {
                for c in 0..dn.cols() {
                    id_dn[(m * dn.rows() + r, m * dn.cols() + c)] = &sign * &dn[(r, c)];
                }
            }
        }
        Ok(lhs == g1.try_mul(&id_dn).unwrap())
    }

    /// Per-cell `g` report plus the connection checks.
    pub fn verdict(&self, max_degree: usize) -> FibrationVerdict {
        let connection_error = self.connection.validate().err();
        let flat = self.connection.is_flat().unwrap_or(false);
        let extendability = self.connection.extendability_check(max_degree).err();
        let filtration_error = self.complex.validate().err();
        let mut cells = Vec::new();
        for n in 0..=max_degree.min(self.top()) {
            for p in 0..=n {
                let q = n - p;
                let source_dim = self.base().num_monomials(p) * self.n_dim(q);
                let target_dim = self.m_dim(p, q);
                let cell = match self.g_map(p, q) {
                    Ok(g) => GCell {
                        p,
                        q,
                        source_dim,
                        target_dim,
                        rank: g.rank,
                        well_defined: true,
                        is_isomorphism: g.is_isomorphism,
                    },
                    Err(_) => GCell {
                        p,
                        q,
                        source_dim,
                        target_dim,
                        rank: 0,
                        well_defined: false,
                        is_isomorphism: false,
                    },
                };
                cells.push(cell);
            }
        }
        let holds = connection_error.is_none()
            && flat
            && extendability.is_none()
            && filtration_error.is_none()
            && cells.iter().all(|c| c.is_isomorphism);
        FibrationVerdict {
            connection_error,
            flat,
            extendability,
            filtration_error,
            cells,
            holds,
        }
    }

    /// Left action of the basis element `b` of `B` on `N_q`.
    pub fn n_action(&self, q: usize, b: usize) -> Matrix {
        let t = self.connection.tensors();
        let bb = t.base().algebra().basis(b);
        let nq = &self.cells[&(0, q)];
        let cols: Vec<Vector> = nq
            .representatives()
            .iter()
            .map(|x| nq.class_of(&t.t_left(q, &bb, x)).expect("T^q is the top space"))
            .collect();
        Matrix::from_columns(nq.dim(), &cols).unwrap()
    }

    /// Left action of the basis element `b` on `H^q(N)`.
    pub fn h_action(&self, h: &Subquotient, q: usize, b: usize) -> Matrix {
        let act = self.n_action(q, b);
        let cols: Vec<Vector> = h
            .representatives()
            .iter()
            .map(|y| h.class_of(&act.mul_vec(y)).expect("B preserves cycles"))
            .collect();
        Matrix::from_columns(h.dim(), &cols).unwrap()
    }

    fn h_actions(&self, h: &Subquotient, q: usize) -> Vec<Matrix> {
        (0..self.base().algebra().dim()).map(|b| self.h_action(h, q, b)).collect()
    }

    /// `w (x) h` in `Lambda^p (x) X` for a `p`-form `w` over `B` in right-form
    /// coordinates, given the `B` action on `X`.
    pub fn form_tensor(&self, p: usize, w: &[Scalar], h: &[Scalar], action: &[Matrix]) -> Vector {
        let nb = self.base().algebra().dim();
        let dim = h.len();
        let mut out = zero_vec(self.base().num_monomials(p) * dim);
        for (k, c) in w.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (m, b) = (k / nb, k % nb);
            let bh = action[b].mul_vec(h);
            for (j, x) in bh.iter().enumerate() {
                if !x.is_zero() {
                    let slot = &mut out[m * dim + j];
                    *slot = &*slot + &(c * x);
                }
            }
        }
        out
    }

    /// `x -> g^{-1}[dx]`, projected to `Lambda^1 (x) H^q`, for `x` in `T^q` with
    /// `dx` in `F^1`.
    fn phi(&self, q: usize, h: &Subquotient, ginv: &Matrix, x: &[Scalar]) -> Result<Vector, FibrationError> {
        let dx = self.complex.d(q).mul_vec(x);
        let cell = &self.cells[&(1, q)];
        let c = cell.class_of(&dx).ok_or_else(|| FibrationError::Decomposition {
            q,
            reason: "dx is not in F^1".into(),
        })?;
        let y = ginv.mul_vec(&c);
        let nq = self.n_dim(q);
        let nm = self.base().num_monomials(1);
        let mut out = Vec::with_capacity(nm * h.dim());
        for m in 0..nm {
            let ym = &y[m * nq..(m + 1) * nq];
            out.extend(h.class_of(ym).ok_or_else(|| FibrationError::Decomposition {
                q,
                reason: "component is not a fibre cycle".into(),
            })?);
        }
        Ok(out)
    }

    /// `nabla_q([[e (x) xi]]) = eta (x) [[f (x) kappa]]` where
    /// `nabla^[q](e (x) xi) = sigma(eta (x) f) ^ kappa`, for `q < N`.
    pub fn induced_connection(&self, q: usize) -> Result<InducedConnection, FibrationError> {
        let h = self.fibre_cohomology(q);
        let g = self.g_map(1, q)?;
        if !g.is_isomorphism {
            return Err(FibrationError::GNotIsomorphism { p: 1, q });
        }
        let ginv = g.matrix.inverse().map_err(SpectralError::from)?;
        let nq = &self.cells[&(0, q)];
        let mut cols = Vec::with_capacity(h.dim());
        for y in h.representatives() {
            cols.push(self.phi(q, &h, &ginv, &nq.lift(&y))?);
        }
        let nm = self.base().num_monomials(1);
        let matrix = Matrix::from_columns(nm * h.dim(), &cols).unwrap();

        // Different representatives: F^1 C^q and boundaries map to zero.
        let mut well_defined = true;
        let mut others: Vec<Vector> = self.complex.f(1, q).basis().to_vec();
        if q > 0 {
            others.extend(self.complex.d(q - 1).columns());
        }
        for x in &others {
            if self.phi(q, &h, &ginv, x)?.iter().any(|c| !c.is_zero()) {
                well_defined = false;
            }
        }

        let actions = self.h_actions(&h, q);
        let base = self.base();
        let mut leibniz = true;
        for b in 0..base.algebra().dim() {
            let bb = base.algebra().basis(b);
            let db = base.d(0, &bb);
            for k in 0..h.dim() {
                let hk = unit_vec(h.dim(), k);
                let lhs = matrix.mul_vec(&actions[b].mul_vec(&hk));
                let mut rhs = self.form_tensor(1, &db, &hk, &actions);
                let nh = matrix.column(k);
                axpy(&mut rhs, &Scalar::one(), &self.left_act_forms(1, &bb, &nh, h.dim(), &actions));
                if lhs != rhs {
                    leibniz = false;
                }
            }
        }
        let mut ic = InducedConnection {
            q,
            matrix,
            well_defined,
            leibniz,
            flat: false,
        };
        ic.flat = if base.max_degree() >= 2 {
            let d1 = self.extended_connection(&ic, &actions, 1);
            d1.try_mul(&ic.matrix).unwrap().is_zero()
        } else {
            true
        };
        Ok(ic)
    }

    /// `b . z` for `z` in `Lambda^p (x) X`.
    fn left_act_forms(&self, p: usize, b: &[Scalar], z: &[Scalar], dim: usize, action: &[Matrix]) -> Vector {
        let base = self.base();
        let mut out = zero_vec(base.num_monomials(p) * dim);
        for m in 0..base.num_monomials(p) {
            let bm = base.left_mul(p, b, &base.monomial_form(p, m));
            axpy(&mut out, &Scalar::one(), &self.form_tensor(p, &bm, &z[m * dim..(m + 1) * dim], action));
        }
        out
    }

    /// `nabla_q^[p]: Lambda^p (x) H^q -> Lambda^{p+1} (x) H^q`,
    /// `m (x) h -> dm (x) h + (-1)^p m ^ nabla_q(h)`.
    pub fn extended_connection(&self, ic: &InducedConnection, actions: &[Matrix], p: usize) -> Matrix {
        let base = self.base();
        let dim = ic.matrix.cols();
        let nm = base.num_monomials(p);
        let n1 = base.num_monomials(1);
        let rows = base.num_monomials(p + 1) * dim;
        let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let mut out = Matrix::zeros(rows, nm * dim);
        for m in 0..nm {
            let mf = base.monomial_form(p, m);
            let dm = base.d(p, &mf);
            for k in 0..dim {
                let hk = unit_vec(dim, k);
                let mut col = self.form_tensor(p + 1, &dm, &hk, actions);
                let nh = ic.matrix.column(k);
                for g in 0..n1 {
                    let comp = &nh[g * dim..(g + 1) * dim];
                    if comp.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    let w = base.wedge(p, &mf, 1, &base.monomial_form(1, g));
                    axpy(&mut col, &sign, &self.form_tensor(p + 1, &w, comp, actions));
                }
                out.set_column(m * dim + k, &col);
            }
        }
        out
    }

    /// `H^p(B, H^q(N), nabla_q)` for `p = 0..=pmax`, with `pmax < N` the base degree cap.
    pub fn sheaf_cohomology(&self, q: usize, pmax: usize) -> Result<Vec<Subquotient>, FibrationError> {
        let ic = self.induced_connection(q)?;
        let h = self.fibre_cohomology(q);
        let actions = self.h_actions(&h, q);
        let top = pmax.min(self.base().max_degree().saturating_sub(1));
        let maps: Vec<Matrix> = (0..=top).map(|p| self.extended_connection(&ic, &actions, p)).collect();
        Ok((0..=top)
            .map(|p| {
                let dim = maps[p].cols();
                let ker = Subspace::full(dim).preimage_within(&maps[p], &Subspace::zero(maps[p].rows()));
                let im = if p > 0 {
                    Subspace::full(maps[p - 1].cols()).image_under(&maps[p - 1])
                } else {
                    Subspace::zero(dim)
                };
                Subquotient::new(&ker, &im.intersection(&ker)).expect("contained")
            })
            .collect())
    }
}

/// Builds the complex without gating and reports every check.
pub fn is_fibration(connection: &Connection, max_degree: usize) -> Result<FibrationVerdict, FibrationError> {
    let f = Fibration::new_unchecked(connection, max_degree)?;
    Ok(f.verdict(max_degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{m3_over_m2, matrix_sigma, s3_over_z2, MatrixSigma, S3_U};
    use crate::linalg::sub_vec;

    fn group() -> Fibration {
        let g = s3_over_z2(&Scalar::one(), 4).unwrap();
        Fibration::new(&g.connection, 4).unwrap()
    }

    fn matrix() -> Fibration {
        let m = m3_over_m2(4).unwrap();
        Fibration::new(&m.connection, 4).unwrap()
    }

    fn common_checks(f: &Fibration) {
        let base = f.connection().tensors().base().clone();
        for n in 0..=f.top() {
            for m in n + 1..=f.top() + 1 {
                assert_eq!(f.complex().f(m as i64, n).dim(), 0);
            }
        }
        for n in 0..f.top() {
            for p in 0..=n {
                let q = n - p;
                assert!(f.commuting_square(p, q).unwrap(), "square at ({p}, {q})");
                let h = f.fibre_cohomology(q).dim();
                assert_eq!(f.m_cohomology(p, q).dim(), base.num_monomials(p) * h, "({p}, {q})");
            }
        }
        for q in 0..f.top() {
            assert_eq!(f.g_map(0, q).unwrap().matrix, Matrix::identity(f.n_dim(q)));
        }
        // E_1 from the spectral module agrees with the cohomology of M_{p,.};
        // E_2 agrees with the sheaf cohomology.
        let ss = f.complex().run().unwrap();
        assert_eq!(ss.stable_page, 2);
        for n in 0..f.top() {
            for p in 0..=n {
                assert_eq!(ss.pages[1].dim(p, n - p), f.m_cohomology(p, n - p).dim());
            }
        }
        for q in 0..2 {
            let ic = f.induced_connection(q).unwrap();
            assert!(ic.well_defined && ic.leibniz && ic.flat);
            let sheaf = f.sheaf_cohomology(q, 2).unwrap();
            for (p, s) in sheaf.iter().enumerate() {
                if p + q < f.top() {
                    assert_eq!(ss.pages[2].dim(p, q), s.dim(), "E_2 at ({p}, {q})");
                }
            }
        }
    }

    #[test]
    fn group_example() {
        let f = group();
        assert_eq!(&f.complex().dims()[..3], &[6, 12, 6]);
        assert_eq!((f.n_dim(0), f.n_dim(1), f.n_dim(2)), (6, 6, 0));
        assert_eq!(f.fibre_cohomology(0).dim(), 2);
        assert_eq!(f.fibre_cohomology(1).dim(), 2);
        for q in 0..2 {
            let dims: Vec<usize> = f.sheaf_cohomology(q, 1).unwrap().iter().map(Subquotient::dim).collect();
            assert_eq!(dims, vec![1, 1]);
        }
        assert!(f.verdict(3).holds);
        common_checks(&f);
        assert_eq!(f.complex().run().unwrap().converged[..3], [1, 2, 1]);
    }

    #[test]
    fn group_induced_connection_on_u() {
        let f = group();
        let h = f.fibre_cohomology(0);
        let nq = f.m_cell(0, 0).unwrap();
        let u = h.class_of(&nq.class_of(&unit_vec(6, S3_U)).unwrap()).unwrap();
        let e = h.class_of(&nq.class_of(&unit_vec(6, 0)).unwrap()).unwrap();
        let ic = f.induced_connection(0).unwrap();
        assert!(ic.matrix.mul_vec(&e).iter().all(Scalar::is_zero));
        let actions = f.h_actions(&h, 0);
        let base = f.connection().tensors().base();
        let minus_gen: Vector = base.monomial_form(1, 0).iter().map(|c| -c).collect();
        assert_eq!(ic.matrix.mul_vec(&u), f.form_tensor(1, &minus_gen, &u, &actions));
    }

    #[test]
    fn matrix_example() {
        let f = matrix();
        assert_eq!(&f.complex().dims()[..2], &[6, 18]);
        for n in 2..=f.top() {
            for q in 2..=n {
                assert_eq!(f.m_dim(n - q, q), 0);
            }
        }
        assert_eq!((f.n_dim(0), f.n_dim(1)), (6, 6));
        assert_eq!(f.fibre_cohomology(0).dim(), 4);
        assert_eq!(f.fibre_cohomology(1).dim(), 4);
        let ic = f.induced_connection(0).unwrap();
        assert_eq!(ic.matrix.rank(), 3);
        assert_eq!(ic.matrix.cols() - ic.matrix.rank(), 1);
        assert!(f.verdict(3).holds);
        common_checks(&f);
    }

    #[test]
    fn matrix_induced_connection_on_e12() {
        let data = m3_over_m2(4).unwrap();
        let f = Fibration::new(&data.connection, 4).unwrap();
        let t = f.connection().tensors().clone();
        let a = t.total().algebra().clone();
        let e0 = &data.e0;
        let x = t.bimodule().act_right(e0, &a.basis(1));
        let y = sub_vec(
            &t.bimodule().act_right(e0, &a.basis(4)),
            &t.bimodule().act_right(e0, &a.basis(0)),
        );
        let h = f.fibre_cohomology(0);
        let nq = f.m_cell(0, 0).unwrap();
        let hx = h.class_of(&nq.class_of(&x).unwrap()).unwrap();
        let hy = h.class_of(&nq.class_of(&y).unwrap()).unwrap();
        let ic = f.induced_connection(0).unwrap();
        let actions = f.h_actions(&h, 0);
        let tp = t.base().monomial_index(1, &[1]).unwrap();
        let expected = f.form_tensor(1, &t.base().monomial_form(1, tp), &hy, &actions);
        assert_eq!(ic.matrix.mul_vec(&hx), expected);
    }

    #[test]
    fn corrupted_sigma_is_not_a_fibration() {
        let data = m3_over_m2(4).unwrap();
        let t = data.connection.tensors().clone();
        let bad = data.connection.with_sigma(matrix_sigma(&t, MatrixSigma::Collapsed)).unwrap();
        let v = is_fibration(&bad, 3).unwrap();
        assert!(!v.holds);
        let w = v.witness().unwrap();
        assert_eq!((w.p, w.q), (1, 0));
        assert!(w.rank < w.source_dim);
        assert!(matches!(Fibration::new(&bad, 3), Err(FibrationError::Connection(_))));
    }
}
