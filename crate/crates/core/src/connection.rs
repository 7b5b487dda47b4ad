//! Bimodules, their tensor products with forms, and right bimodule connections.
//!
//! For a `B`-`A` bimodule `E` the spaces used throughout are
//!
//! * `T^n = E (x)_A Omega^n_A`, identified with `E (x) Lambda^n_A` through the left
//!   freeness of `Omega^n_A` over normal monomials; index `i * |Lambda^n_A| + m`.
//! * `S^p = Omega^p_B (x)_B E`, identified with `Lambda^p_B (x) E` through right
//!   freeness; index `m * dim(E) + i`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{FiniteDimAlgebra, SparseTerms};
use crate::dga::{Calculus, Word};
use crate::linalg::{axpy, is_zero_vec, kernel_basis, solve_in_span, unit_vec, zero_vec, Matrix, SpanSolution, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConnectionError {
    #[error("bimodule action is not valid: {0}")]
    InvalidBimodule(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("right Leibniz rule fails for E basis {e} and A basis {a}")]
    RightLeibniz { e: usize, a: usize },
    #[error("sigma is not a bimodule map ({side:?} action by basis {by}, on S^1 basis {at})")]
    SigmaNotBimodule { side: Side, by: usize, at: usize },
    #[error("nabla(b e) != sigma(db (x) e) + b nabla(e) for B basis {b} and E basis {e}")]
    BraidingIdentity { b: usize, e: usize },
    #[error("nabla^[{n}] is not well defined: F(e a, w) != F(e, a w) for e={e}, a={a}, w={w}")]
    ExtensionNotWellDefined { n: usize, e: usize, a: usize, w: usize },
    #[error("the generator does not generate E: basis element {0} is not a multiple")]
    NotCyclic(usize),
    #[error("nabla is not well defined: e0 . a = 0 but e0 (x) da != 0 for a = {0}")]
    NablaNotWellDefined(String),
    #[error("sigma cannot be derived: {0}")]
    NoBraiding(String),
    #[error("degree {degree} exceeds the available cap {max}")]
    DegreeTooHigh { degree: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A finite-dimensional `B`-`A` bimodule given by action matrices on a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    left: Arc<FiniteDimAlgebra>,
    right: Arc<FiniteDimAlgebra>,
    labels: Vec<String>,
    /// `left_action[b]`: column `j` is `b . e_j`.
    left_action: Vec<Matrix>,
    /// `right_action[a]`: column `j` is `e_j . a`.
    right_action: Vec<Matrix>,
}

impl Bimodule {
    pub fn new(
        left: Arc<FiniteDimAlgebra>,
        right: Arc<FiniteDimAlgebra>,
        labels: Vec<String>,
        left_action: Vec<Matrix>,
        right_action: Vec<Matrix>,
    ) -> Result<Self, ConnectionError> {
        let n = labels.len();
        let bad = |s: &str| ConnectionError::InvalidBimodule(s.into());
        if left_action.len() != left.dim() || right_action.len() != right.dim() {
            return Err(bad("one action matrix per algebra basis element is required"));
        }
        if left_action.iter().chain(&right_action).any(|m| m.rows() != n || m.cols() != n) {
            return Err(bad("action matrices must be square of the module dimension"));
        }
        let m = Bimodule {
            left,
            right,
            labels,
            left_action,
            right_action,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), ConnectionError> {
        let bad = |s: &str| ConnectionError::InvalidBimodule(s.into());
        let n = self.dim();
        if self.act_left_matrix(self.left.unit()) != Matrix::identity(n) {
            return Err(bad("left unit does not act as the identity"));
        }
        if self.act_right_matrix(self.right.unit()) != Matrix::identity(n) {
            return Err(bad("right unit does not act as the identity"));
        }
        for x in 0..self.left.dim() {
            for y in 0..self.left.dim() {
                let xy = self.left.mul(&self.left.basis(x), &self.left.basis(y));
                let lhs = self.act_left_matrix(&xy);
                let rhs = self.left_action[x].try_mul(&self.left_action[y]).unwrap();
                if lhs != rhs {
                    return Err(bad("left action is not multiplicative"));
                }
            }
        }
        for x in 0..self.right.dim() {
            for y in 0..self.right.dim() {
                let xy = self.right.mul(&self.right.basis(x), &self.right.basis(y));
                let lhs = self.act_right_matrix(&xy);
                // (e . x) . y
                let rhs = self.right_action[y].try_mul(&self.right_action[x]).unwrap();
                if lhs != rhs {
                    return Err(bad("right action is not multiplicative"));
                }
            }
        }
        for b in &self.left_action {
            for a in &self.right_action {
                if b.try_mul(a).unwrap() != a.try_mul(b).unwrap() {
                    return Err(bad("left and right actions do not commute"));
                }
            }
        }
        Ok(())
    }

    /// `A` as an `A`-`A` bimodule, or as a `B`-`A` bimodule through an algebra map
    /// `iota: B -> A` given on basis elements.
    pub fn regular(
        left: Arc<FiniteDimAlgebra>,
        right: Arc<FiniteDimAlgebra>,
        iota: &[Vector],
    ) -> Result<Self, ConnectionError> {
        let left_action = iota.iter().map(|i| right.left_mul_matrix(i)).collect();
        let right_action = (0..right.dim())
            .map(|a| right.right_mul_matrix(&right.basis(a)))
            .collect();
        let labels = right.labels().to_vec();
        Self::new(left, right, labels, left_action, right_action)
    }

    /// Rectangular matrices `M_{m,n}` as an `M_m`-`M_n` bimodule.
    pub fn rectangular(left: Arc<FiniteDimAlgebra>, right: Arc<FiniteDimAlgebra>) -> Result<Self, ConnectionError> {
        let bad = || ConnectionError::InvalidBimodule("rectangular bimodules need matrix algebras".into());
        let m = left.matrix_size().ok_or_else(bad)?;
        let n = right.matrix_size().ok_or_else(bad)?;
        let dim = m * n;
        let idx = |i: usize, j: usize| i * n + j;
        let mut labels = Vec::with_capacity(dim);
        for i in 0..m {
            for j in 0..n {
                labels.push(alloc::format!("e{}{}", i + 1, j + 1));
            }
        }
        let left_action = (0..m * m)
            .map(|b| {
                let (k, l) = (b / m, b % m);
                let mut mat = Matrix::zeros(dim, dim);
                for j in 0..n {
                    mat[(idx(k, j), idx(l, j))] = Scalar::one();
                }
                mat
            })
            .collect();
        let right_action = (0..n * n)
            .map(|a| {
                let (k, l) = (a / n, a % n);
                let mut mat = Matrix::zeros(dim, dim);
                for i in 0..m {
                    mat[(idx(i, l), idx(i, k))] = Scalar::one();
                }
                mat
            })
            .collect();
        Self::new(left, right, labels, left_action, right_action)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn left_algebra(&self) -> &Arc<FiniteDimAlgebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<FiniteDimAlgebra> {
        &self.right
    }

    pub fn left_action(&self, b: usize) -> &Matrix {
        &self.left_action[b]
    }

    pub fn right_action(&self, a: usize) -> &Matrix {
        &self.right_action[a]
    }

    pub fn act_left_matrix(&self, b: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, c) in b.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.left_action[i].scale(c));
            }
        }
        m
    }

    pub fn act_right_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.right_action[i].scale(c));
            }
        }
        m
    }

    pub fn act_left(&self, b: &[Scalar], e: &[Scalar]) -> Vector {
        self.act_left_matrix(b).mul_vec(e)
    }

    pub fn act_right(&self, e: &[Scalar], a: &[Scalar]) -> Vector {
        self.act_right_matrix(a).mul_vec(e)
    }
}

/// The spaces `T^n` and `S^p` with their actions and canonical maps.
#[derive(Debug, Clone)]
pub struct Tensors {
    bimodule: Arc<Bimodule>,
    base: Arc<Calculus>,
    total: Arc<Calculus>,
    /// `[n][i * dim(Omega^n_A) + k]`: `e_i (x) w_k` in `T^n`.
    embed: Vec<Vec<SparseTerms>>,
}

fn nonzero(v: &[Scalar]) -> impl Iterator<Item = (usize, &Scalar)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero())
}

fn sparse(v: &[Scalar]) -> SparseTerms {
    nonzero(v).map(|(i, x)| (i, x.clone())).collect()
}

impl Tensors {
    pub fn new(bimodule: Arc<Bimodule>, base: Arc<Calculus>, total: Arc<Calculus>) -> Result<Self, ConnectionError> {
        if base.algebra() != bimodule.left_algebra() || total.algebra() != bimodule.right_algebra() {
            return Err(ConnectionError::Shape("calculi do not match the bimodule algebras".into()));
        }
        let ne = bimodule.dim();
        let na = total.algebra().dim();
        let mut embed = Vec::new();
        for n in 0..=total.max_degree() {
            let nm = total.num_monomials(n);
            let dim = total.dim(n);
            let to_left = total.to_left(n);
            let mut table = Vec::with_capacity(ne * dim);
            for i in 0..ne {
                // e_i . a for every algebra basis element a.
                let ea: Vec<Vector> = (0..na).map(|a| bimodule.right_action(a).column(i)).collect();
                for k in 0..dim {
                    let mut out = zero_vec(ne * nm);
                    for r in 0..dim {
                        let c = &to_left[(r, k)];
                        if c.is_zero() {
                            continue;
                        }
                        let (m, a) = (r / na, r % na);
                        for (j, x) in nonzero(&ea[a]) {
                            let slot = &mut out[j * nm + m];
                            *slot = &*slot + &(c * x);
                        }
                    }
                    table.push(sparse(&out));
                }
            }
            embed.push(table);
        }
        Ok(Tensors {
            bimodule,
            base,
            total,
            embed,
        })
    }

    pub fn bimodule(&self) -> &Arc<Bimodule> {
        &self.bimodule
    }

    pub fn base(&self) -> &Arc<Calculus> {
        &self.base
    }

    pub fn total(&self) -> &Arc<Calculus> {
        &self.total
    }

    pub fn e_dim(&self) -> usize {
        self.bimodule.dim()
    }

    pub fn t_dim(&self, n: usize) -> usize {
        self.e_dim() * self.total.num_monomials(n)
    }

    pub fn s_dim(&self, p: usize) -> usize {
        self.base.num_monomials(p) * self.e_dim()
    }

    pub fn t_index(&self, n: usize, i: usize, m: usize) -> usize {
        i * self.total.num_monomials(n) + m
    }

    pub fn s_index(&self, i: usize, m: usize) -> usize {
        m * self.e_dim() + i
    }

    /// `e (x) w` in `T^n` for `w` in right-form coordinates.
    pub fn embed(&self, n: usize, e: &[Scalar], w: &[Scalar]) -> Vector {
        let dim = self.total.dim(n);
        let mut out = zero_vec(self.t_dim(n));
        for (i, ei) in nonzero(e) {
            for (k, wk) in nonzero(w) {
                let c = ei * wk;
                for (r, s) in &self.embed[n][i * dim + k] {
                    let slot = &mut out[*r];
                    *slot = &*slot + &(&c * s);
                }
            }
        }
        out
    }

    /// `(m (x) e)` in `S^p` from `w (x) e` with `w` in right-form coordinates over `B`.
    pub fn canonical_s(&self, p: usize, w: &[Scalar], e: &[Scalar]) -> Vector {
        let nb = self.base.algebra().dim();
        let ne = self.e_dim();
        let mut out = zero_vec(self.s_dim(p));
        for (k, c) in nonzero(w) {
            let (m, b) = (k / nb, k % nb);
            let be = self.bimodule.left_action(b).mul_vec(e);
            for (i, x) in nonzero(&be) {
                let slot = &mut out[m * ne + i];
                *slot = &*slot + &(c * x);
            }
        }
        out
    }

    /// `t ^ m` for a monomial `m` of degree `j`.
    pub fn t_wedge_mono(&self, n: usize, t: &[Scalar], j: usize, m: usize) -> Vector {
        let nm = self.total.num_monomials(n);
        let nm2 = self.total.num_monomials(n + j);
        let mut out = zero_vec(self.t_dim(n + j));
        for (idx, c) in nonzero(t) {
            let (i, m1) = (idx / nm, idx % nm);
            for (m3, s) in self.total.mono_product(n, m1, j, m) {
                let slot = &mut out[i * nm2 + m3];
                *slot = &*slot + &(c * s);
            }
        }
        out
    }

    /// `t ^ w` for a form `w` of degree `j` in right-form coordinates.
    pub fn t_wedge(&self, n: usize, t: &[Scalar], j: usize, w: &[Scalar]) -> Vector {
        let nm = self.total.num_monomials(n);
        let ne = self.e_dim();
        let mut out = zero_vec(self.t_dim(n + j));
        for (idx, c) in nonzero(t) {
            let (i, m1) = (idx / nm, idx % nm);
            let prod = self.total.wedge(n, &self.total.monomial_form(n, m1), j, w);
            let v = self.embed(n + j, &unit_vec(ne, i), &prod);
            axpy(&mut out, c, &v);
        }
        out
    }

    /// `b . t` in `T^n`.
    pub fn t_left(&self, n: usize, b: &[Scalar], t: &[Scalar]) -> Vector {
        let nm = self.total.num_monomials(n);
        let bm = self.bimodule.act_left_matrix(b);
        let mut out = zero_vec(self.t_dim(n));
        for (idx, c) in nonzero(t) {
            let (i, m) = (idx / nm, idx % nm);
            for j in 0..self.e_dim() {
                let x = &bm[(j, i)];
                if !x.is_zero() {
                    let slot = &mut out[j * nm + m];
                    *slot = &*slot + &(c * x);
                }
            }
        }
        out
    }

    /// `t . a` in `T^n`.
    pub fn t_right(&self, n: usize, t: &[Scalar], a: &[Scalar]) -> Vector {
        let nm = self.total.num_monomials(n);
        let ne = self.e_dim();
        let mut out = zero_vec(self.t_dim(n));
        for (idx, c) in nonzero(t) {
            let (i, m) = (idx / nm, idx % nm);
            let w = self.total.right_mul(&self.total.monomial_form(n, m), a);
            axpy(&mut out, c, &self.embed(n, &unit_vec(ne, i), &w));
        }
        out
    }

    /// `b . s` in `S^p`.
    pub fn s_left(&self, p: usize, b: &[Scalar], s: &[Scalar]) -> Vector {
        let ne = self.e_dim();
        let mut out = zero_vec(self.s_dim(p));
        for (idx, c) in nonzero(s) {
            let (m, i) = (idx / ne, idx % ne);
            let bm = self.base.left_mul(p, b, &self.base.monomial_form(p, m));
            axpy(&mut out, c, &self.canonical_s(p, &bm, &unit_vec(ne, i)));
        }
        out
    }

    /// `s . a` in `S^p`.
    pub fn s_right(&self, p: usize, s: &[Scalar], a: &[Scalar]) -> Vector {
        let ne = self.e_dim();
        let am = self.bimodule.act_right_matrix(a);
        let mut out = zero_vec(self.s_dim(p));
        for (idx, c) in nonzero(s) {
            let (m, i) = (idx / ne, idx % ne);
            for j in 0..ne {
                let x = &am[(j, i)];
                if !x.is_zero() {
                    let slot = &mut out[m * ne + j];
                    *slot = &*slot + &(c * x);
                }
            }
        }
        out
    }

    pub fn format_t(&self, n: usize, t: &[Scalar]) -> String {
        let nm = self.total.num_monomials(n);
        let mut parts = Vec::new();
        for (idx, c) in nonzero(t) {
            let (i, m) = (idx / nm, idx % nm);
            let mono = self.total.rewrite().format_word(&self.total.monomials(n)[m]);
            let coeff = if c.is_one() { String::new() } else { alloc::format!("({c})*") };
            parts.push(alloc::format!("{coeff}{} (x) {mono}", self.bimodule.labels()[i]));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Failure found by [`Connection::extendability_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendabilityWitness {
    /// The recursive extension along a word disagrees with its normal form.
    RelationMismatch { word: Word, e: usize },
    /// `sigma_n` fails to commute with an action.
    NotBimoduleMap { degree: usize, side: Side, by: usize, at: usize },
}

/// A right connection `nabla: E -> E (x)_A Omega^1_A` with a braiding
/// `sigma: Omega^1_B (x)_B E -> E (x)_A Omega^1_A`.
#[derive(Debug, Clone)]
pub struct Connection {
    tensors: Arc<Tensors>,
    /// Column `i` is `nabla(e_i)` in `T^1`.
    nabla: Matrix,
    /// Column `s` is `sigma` of the `s`-th basis element of `S^1`.
    sigma: Matrix,
}

impl Connection {
    /// Builds and validates a bimodule connection.
    pub fn new(tensors: Arc<Tensors>, nabla: Matrix, sigma: Matrix) -> Result<Self, ConnectionError> {
        let c = Self::new_unchecked(tensors, nabla, sigma)?;
        c.validate()?;
        Ok(c)
    }

    /// Builds without the bimodule-connection checks (shapes are still checked).
    pub fn new_unchecked(tensors: Arc<Tensors>, nabla: Matrix, sigma: Matrix) -> Result<Self, ConnectionError> {
        let t1 = tensors.t_dim(1);
        if nabla.rows() != t1 || nabla.cols() != tensors.e_dim() {
            return Err(ConnectionError::Shape("nabla must be T^1 x E".into()));
        }
        if sigma.rows() != t1 || sigma.cols() != tensors.s_dim(1) {
            return Err(ConnectionError::Shape("sigma must be T^1 x S^1".into()));
        }
        Ok(Connection { tensors, nabla, sigma })
    }

    /// `nabla(e0 . a) = e0 (x) da` for a cyclic generator `e0` of `E` as a right module.
    /// Checks that `e0 (x) da = 0` whenever `e0 . a = 0`.
    pub fn nabla_from_cyclic(tensors: &Tensors, e0: &[Scalar]) -> Result<Matrix, ConnectionError> {
        let total = tensors.total();
        let alg = total.algebra();
        let ne = tensors.e_dim();
        let cols: Vec<Vector> = (0..alg.dim())
            .map(|a| tensors.bimodule().act_right(e0, &alg.basis(a)))
            .collect();
        let m = Matrix::from_columns(ne, &cols).unwrap();
        for k in kernel_basis(&m) {
            if !is_zero_vec(&tensors.embed(1, e0, &total.d(0, &k))) {
                return Err(ConnectionError::NablaNotWellDefined(alg.format(&k)));
            }
        }
        let mut nabla = Matrix::zeros(tensors.t_dim(1), ne);
        for i in 0..ne {
            let a = match solve_in_span(&m, &unit_vec(ne, i)) {
                SpanSolution::InSpan(a) => a,
                SpanSolution::NotInSpan => return Err(ConnectionError::NotCyclic(i)),
            };
            nabla.set_column(i, &tensors.embed(1, e0, &total.d(0, &a)));
        }
        Ok(nabla)
    }

    /// Solves `sigma(db (x) e) = nabla(b e) - b nabla(e)` on a spanning set of `S^1`.
    pub fn derive_braiding(tensors: &Tensors, nabla: &Matrix) -> Result<Matrix, ConnectionError> {
        let base = tensors.base();
        let nb = base.algebra().dim();
        let ne = tensors.e_dim();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for b in 0..nb {
            let bb = base.algebra().basis(b);
            let db = base.d(0, &bb);
            for i in 0..ne {
                let ei = unit_vec(ne, i);
                xs.push(tensors.canonical_s(1, &db, &ei));
                let be = tensors.bimodule().act_left(&bb, &ei);
                let mut y = nabla.mul_vec(&be);
                let bn = tensors.t_left(1, &bb, &nabla.column(i));
                y = crate::linalg::sub_vec(&y, &bn);
                ys.push(y);
            }
        }
        let s1 = tensors.s_dim(1);
        let xm = Matrix::from_columns(s1, &xs).unwrap();
        let pivots = xm.rref().pivots;
        if pivots.len() < s1 {
            return Err(ConnectionError::NoBraiding("db (x) e does not span S^1".into()));
        }
        let rows: Vec<usize> = (0..s1).collect();
        let xp = xm.select(&rows, &pivots);
        let yp = Matrix::from_columns(tensors.t_dim(1), &pivots.iter().map(|&p| ys[p].clone()).collect::<Vec<_>>()).unwrap();
        let sigma = yp.try_mul(&xp.inverse().unwrap()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            if &sigma.mul_vec(x) != y {
                return Err(ConnectionError::NoBraiding("inconsistent values on the spanning set".into()));
            }
        }
        Ok(sigma)
    }

    pub fn tensors(&self) -> &Arc<Tensors> {
        &self.tensors
    }

    pub fn nabla(&self) -> &Matrix {
        &self.nabla
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    fn base(&self) -> &Calculus {
        self.tensors.base()
    }

    fn total(&self) -> &Calculus {
        self.tensors.total()
    }

    fn check_degree(&self, degree: usize, max: usize) -> Result<(), ConnectionError> {
        if degree > max {
            Err(ConnectionError::DegreeTooHigh { degree, max })
        } else {
            Ok(())
        }
    }

    /// Right Leibniz rule, bimodule property of `sigma` and the braiding identity.
    pub fn validate(&self) -> Result<(), ConnectionError> {
        let t = &self.tensors;
        let a_alg = self.total().algebra().clone();
        let b_alg = self.base().algebra().clone();
        let ne = t.e_dim();
        for i in 0..ne {
            let ei = unit_vec(ne, i);
            let ne_i = self.nabla.column(i);
            for a in 0..a_alg.dim() {
                let ab = a_alg.basis(a);
                let lhs = self.nabla.mul_vec(&t.bimodule().act_right(&ei, &ab));
                let mut rhs = t.t_right(1, &ne_i, &ab);
                axpy(&mut rhs, &Scalar::one(), &t.embed(1, &ei, &self.total().d(0, &ab)));
                if lhs != rhs {
                    return Err(ConnectionError::RightLeibniz { e: i, a });
                }
            }
        }
        self.check_sigma_bimodule()?;
        for b in 0..b_alg.dim() {
            let bb = b_alg.basis(b);
            let db = self.base().d(0, &bb);
            for i in 0..ne {
                let ei = unit_vec(ne, i);
                let lhs = self.nabla.mul_vec(&t.bimodule().act_left(&bb, &ei));
                let mut rhs = self.sigma.mul_vec(&t.canonical_s(1, &db, &ei));
                axpy(&mut rhs, &Scalar::one(), &t.t_left(1, &bb, &self.nabla.column(i)));
                if lhs != rhs {
                    return Err(ConnectionError::BraidingIdentity { b, e: i });
                }
            }
        }
        Ok(())
    }

    fn check_sigma_bimodule(&self) -> Result<(), ConnectionError> {
        match self.sigma_n_bimodule_witness(1, &self.sigma_matrix_degree(1)) {
            None => Ok(()),
            Some((side, by, at)) => Err(ConnectionError::SigmaNotBimodule { side, by, at }),
        }
    }

    fn sigma_n_bimodule_witness(&self, n: usize, sigma_n: &Matrix) -> Option<(Side, usize, usize)> {
        let t = &self.tensors;
        let b_alg = self.base().algebra();
        let a_alg = self.total().algebra();
        for s in 0..t.s_dim(n) {
            let x = unit_vec(t.s_dim(n), s);
            let sx = sigma_n.column(s);
            for b in 0..b_alg.dim() {
                let bb = b_alg.basis(b);
                let lhs = sigma_n.mul_vec(&t.s_left(n, &bb, &x));
                if lhs != t.t_left(n, &bb, &sx) {
                    return Some((Side::Left, b, s));
                }
            }
            for a in 0..a_alg.dim() {
                let ab = a_alg.basis(a);
                let lhs = sigma_n.mul_vec(&t.s_right(n, &x, &ab));
                if lhs != t.t_right(n, &sx, &ab) {
                    return Some((Side::Right, a, s));
                }
            }
        }
        None
    }

    /// `nabla^[n]: T^n -> T^{n+1}`, `e (x) w -> e (x) dw + nabla(e) ^ w`.
    pub fn nabla_n(&self, n: usize) -> Result<Matrix, ConnectionError> {
        self.check_degree(n + 1, self.total().max_degree())?;
        let t = &self.tensors;
        let ne = t.e_dim();
        let nm = self.total().num_monomials(n);
        let mut m = Matrix::zeros(t.t_dim(n + 1), t.t_dim(n));
        for i in 0..ne {
            let ei = unit_vec(ne, i);
            let ni = self.nabla.column(i);
            for mono in 0..nm {
                let w = self.total().monomial_form(n, mono);
                let mut col = t.embed(n + 1, &ei, &self.total().d(n, &w));
                axpy(&mut col, &Scalar::one(), &t.t_wedge_mono(1, &ni, n, mono));
                m.set_column(t.t_index(n, i, mono), &col);
            }
        }
        Ok(m)
    }

    /// `F(e, w) = e (x) dw + nabla(e) ^ w` on the free product `E (x) Omega^n_A`.
    fn extension_free(&self, n: usize, e: &[Scalar], w: &[Scalar]) -> Vector {
        let t = &self.tensors;
        let mut out = t.embed(n + 1, e, &self.total().d(n, w));
        let ne = self.nabla.mul_vec(e);
        axpy(&mut out, &Scalar::one(), &t.t_wedge(1, &ne, n, w));
        out
    }

    /// Checks `F(e . a, w) = F(e, a . w)` on all basis triples.
    pub fn extension_well_defined(&self, n: usize) -> Result<(), ConnectionError> {
        self.check_degree(n + 1, self.total().max_degree())?;
        let t = &self.tensors;
        let a_alg = self.total().algebra();
        let ne = t.e_dim();
        let dim = self.total().dim(n);
        for i in 0..ne {
            let ei = unit_vec(ne, i);
            for a in 0..a_alg.dim() {
                let ab = a_alg.basis(a);
                let ea = t.bimodule().act_right(&ei, &ab);
                for k in 0..dim {
                    let w = unit_vec(dim, k);
                    let aw = self.total().left_mul(n, &ab, &w);
                    if self.extension_free(n, &ea, &w) != self.extension_free(n, &ei, &aw) {
                        return Err(ConnectionError::ExtensionNotWellDefined { n, e: i, a, w: k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Curvature `R = nabla^[1] nabla: E -> T^2`.
    pub fn curvature(&self) -> Result<Matrix, ConnectionError> {
        Ok(self.nabla_n(1)?.try_mul(&self.nabla).unwrap())
    }

    pub fn is_flat(&self) -> Result<bool, ConnectionError> {
        Ok(self.curvature()?.is_zero())
    }

    /// Whether `R(e . a) = R(e) . a` on bases.
    pub fn curvature_is_module_map(&self) -> Result<bool, ConnectionError> {
        let r = self.curvature()?;
        let t = &self.tensors;
        let a_alg = self.total().algebra();
        for i in 0..t.e_dim() {
            for a in 0..a_alg.dim() {
                let ab = a_alg.basis(a);
                let ea = t.bimodule().act_right(&unit_vec(t.e_dim(), i), &ab);
                if r.mul_vec(&ea) != t.t_right(2, &r.column(i), &ab) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `(R ^ id)` on `T^n`.
    pub fn curvature_wedge(&self, n: usize) -> Result<Matrix, ConnectionError> {
        let r = self.curvature()?;
        let t = &self.tensors;
        let nm = self.total().num_monomials(n);
        let mut m = Matrix::zeros(t.t_dim(n + 2), t.t_dim(n));
        for i in 0..t.e_dim() {
            let ri = r.column(i);
            for mono in 0..nm {
                m.set_column(t.t_index(n, i, mono), &t.t_wedge_mono(2, &ri, n, mono));
            }
        }
        Ok(m)
    }

    /// Checks `nabla^[n+1] nabla^[n] = R ^ id` on `T^n`.
    pub fn lemma_check(&self, n: usize) -> Result<bool, ConnectionError> {
        let lhs = self.nabla_n(n + 1)?.try_mul(&self.nabla_n(n)?).unwrap();
        Ok(lhs == self.curvature_wedge(n)?)
    }

    /// `sigma` extended along an arbitrary word: `sigma(g ^ w (x) e) = (sigma ^ id)(g (x) sigma(w (x) e))`.
    pub fn sigma_word(&self, word: &[usize], e: usize) -> Vector {
        let t = &self.tensors;
        let ne = t.e_dim();
        if word.is_empty() {
            return t.embed(0, &unit_vec(ne, e), &self.total().monomial_form(0, 0));
        }
        let inner = self.sigma_word(&word[1..], e);
        let n = word.len() - 1;
        let nm = self.total().num_monomials(n);
        let g = word[0];
        let mut out = zero_vec(t.t_dim(n + 1));
        for (idx, c) in nonzero(&inner) {
            let (j, m) = (idx / nm, idx % nm);
            let sg = self.sigma.column(t.s_index(j, g));
            axpy(&mut out, c, &t.t_wedge_mono(1, &sg, n, m));
        }
        out
    }

    /// Matrix of `sigma_n: S^n -> T^n` on normal monomials.
    pub fn sigma_matrix_degree(&self, n: usize) -> Matrix {
        let t = &self.tensors;
        let ne = t.e_dim();
        let mut m = Matrix::zeros(t.t_dim(n), t.s_dim(n));
        for (mi, word) in self.base().monomials(n).iter().enumerate() {
            for i in 0..ne {
                m.set_column(t.s_index(i, mi), &self.sigma_word(word, i));
            }
        }
        m
    }

    pub fn sigma_n(&self, n: usize) -> Result<Matrix, ConnectionError> {
        self.check_degree(n, self.base().max_degree().min(self.total().max_degree()))?;
        Ok(self.sigma_matrix_degree(n))
    }

    /// Checks that `sigma_n` is well defined on the relations of `Omega_B` and is a
    /// bimodule map, for all degrees up to `max_degree`.
    pub fn extendability_check(&self, max_degree: usize) -> Result<(), ExtendabilityWitness> {
        let t = &self.tensors;
        let base = self.base();
        let k = base.num_generators();
        let ne = t.e_dim();
        let top = max_degree.min(base.max_degree()).min(self.total().max_degree());
        let mut words: Vec<Word> = vec![Vec::new()];
        for n in 1..=top {
            let mut next = Vec::new();
            for w in &words {
                for g in 0..k {
                    let mut nw = w.clone();
                    nw.push(g);
                    next.push(nw);
                }
            }
            words = next;
            let sigma_n = self.sigma_matrix_degree(n);
            for w in &words {
                let nf = base.rewrite().normalize(w);
                for e in 0..ne {
                    let direct = self.sigma_word(w, e);
                    let mut via = zero_vec(t.t_dim(n));
                    for (c, nw) in &nf {
                        let m = base.monomial_index(n, nw).expect("normal word");
                        axpy(&mut via, c, &sigma_n.column(t.s_index(e, m)));
                    }
                    if direct != via {
                        return Err(ExtendabilityWitness::RelationMismatch { word: w.clone(), e });
                    }
                }
            }
            if let Some((side, by, at)) = self.sigma_n_bimodule_witness(n, &sigma_n) {
                return Err(ExtendabilityWitness::NotBimoduleMap { degree: n, side, by, at });
            }
        }
        Ok(())
    }

    /// Checks `nabla^[n] sigma_n = sigma_{n+1}(d (x) id) + (-1)^n (sigma ^ id)(id (x) nabla)` on `S^n`.
    pub fn nabla_sigma_check(&self, n: usize) -> Result<bool, ConnectionError> {
        self.check_degree(n + 1, self.base().max_degree().min(self.total().max_degree()))?;
        let t = &self.tensors;
        let ne = t.e_dim();
        let sn = self.sigma_matrix_degree(n);
        let sn1 = self.sigma_matrix_degree(n + 1);
        let lhs = self.nabla_n(n)?.try_mul(&sn).unwrap();
        let nm_total = self.total().num_monomials(1);
        let sign = if n % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        for (mi, _) in self.base().monomials(n).iter().enumerate() {
            let mform = self.base().monomial_form(n, mi);
            let dm = self.base().d(n, &mform);
            for i in 0..ne {
                let col = t.s_index(i, mi);
                let mut rhs = sn1.mul_vec(&t.canonical_s(n + 1, &dm, &unit_vec(ne, i)));
                let ni = self.nabla.column(i);
                for (idx, c) in nonzero(&ni) {
                    let (j, g) = (idx / nm_total, idx % nm_total);
                    let s = sn.column(t.s_index(j, mi));
                    axpy(&mut rhs, &(&sign * c), &t.t_wedge_mono(n, &s, 1, g));
                }
                if lhs.column(col) != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Kernel dimension of `nabla` (covariantly constant sections).
    pub fn kernel_dim(&self) -> usize {
        self.nabla.cols() - self.nabla.rank()
    }

    /// Whether `nabla(e) = 0`.
    pub fn annihilates(&self, e: &[Scalar]) -> bool {
        is_zero_vec(&self.nabla.mul_vec(e))
    }

    /// A connection with `nabla` replaced, keeping `sigma`; not validated.
    pub fn with_nabla(&self, nabla: Matrix) -> Result<Self, ConnectionError> {
        Self::new_unchecked(self.tensors.clone(), nabla, self.sigma.clone())
    }

    /// A connection with `sigma` replaced, keeping `nabla`; not validated.
    pub fn with_sigma(&self, sigma: Matrix) -> Result<Self, ConnectionError> {
        Self::new_unchecked(self.tensors.clone(), self.nabla.clone(), sigma)
    }
}
