//! Differential graded algebras of forms over a finite-dimensional algebra.
//!
//! `Omega^n` is spanned by `m . a` with `m` a normal generator monomial of degree `n`
//! and `a` an algebra basis element. Coordinates are indexed by `m * dim(A) + a`
//! ("right form"). Left multiplication by the algebra is governed by a commutation
//! rule `x . g = sum_k g_k . c_k(x, g)`.

pub mod group;
pub mod inner;
pub mod rewrite;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{AlgebraError, FiniteDimAlgebra, SparseTerms};
use crate::linalg::{axpy, is_zero_vec, scale_vec, unit_vec, zero_vec, LinalgError, Matrix, Vector};
use crate::scalar::Scalar;

pub use group::{cocycle_check, extend_cocycle, extend_representation, GroupCalculusSpec};
pub use inner::InnerCalculusSpec;
pub use rewrite::{RewriteRule, RewriteSystem, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DgaError {
    #[error("rewrite rule {0} is malformed")]
    InvalidRule(usize),
    #[error("rewrite rule {0} does not decrease words, so rewriting may not terminate")]
    NotTerminating(usize),
    #[error("rewrite system is not confluent on word {0:?}")]
    NotConfluent(Word),
    #[error("commutation rule is not an algebra action (basis {0}, {1}, generator {2})")]
    CommutationNotAction(usize, usize, usize),
    #[error("commutation rule does not respect relation {rule} for algebra basis {element}")]
    CommutationIncompatible { rule: usize, element: usize },
    #[error("Omega^{0} is not free as a left module on the normal monomials")]
    NotLeftFree(usize),
    #[error("d^2 != 0 on Omega^{0}")]
    DSquaredNonzero(usize),
    #[error("graded Leibniz rule fails for basis forms {0} (degree {1}) and {2} (degree {3})")]
    LeibnizFailure(usize, usize, usize, usize),
    #[error("d is incompatible with relation {0}")]
    DifferentialIncompatible(usize),
    #[error("theta^theta is not central")]
    ThetaSquareNotCentral,
    #[error("inner formula disagrees with Leibniz differential in degree {0}")]
    InnerFormulaMismatch(usize),
    #[error("star on generators is incompatible: {0}")]
    StarIncompatible(String),
    #[error("rho is not a homomorphism at elements ({0}, {1})")]
    NotARepresentation(usize, usize),
    #[error("cocycle condition fails at elements ({0}, {1})")]
    CocycleFailure(usize, usize),
    #[error("cocycle values on the generators do not form a basis of the representation")]
    NotSurjective,
    #[error("calculus is not connected: omega({0}) = 0")]
    Disconnected(String),
    #[error("degree {degree} exceeds the calculus cap {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("forms belong to different calculi")]
    ParentMismatch,
    #[error("invalid calculus data: {0}")]
    InvalidData(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Data specific to how a calculus was constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CalculusKind {
    Group(group::GroupData),
    /// `d` is the graded commutator with `theta`.
    Inner { theta: Vector },
    General,
}

/// A graded differential algebra of forms, enumerated up to a degree cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calculus {
    algebra: Arc<FiniteDimAlgebra>,
    rewrite: RewriteSystem,
    max_degree: usize,
    monomials: Vec<Vec<Word>>,
    mono_index: Vec<BTreeMap<Word, usize>>,
    /// `[p][q][i][j]`: normal form of monomial product, present for `p + q <= max`.
    mono_product: Vec<Vec<Vec<Vec<SparseTerms>>>>,
    /// `[x][g]`: `x . g` as `(k, c)` pairs meaning `g_k . c`.
    commutation: Vec<Vec<Vec<(usize, Vector)>>>,
    /// `[n][x][m]`: right-form coordinates of `x . m`.
    left_mul: Vec<Vec<Vec<SparseTerms>>>,
    /// `[n]`: converts right-form coordinates to left-form coordinates `sum a . m`.
    to_left: Vec<Matrix>,
    d0: Vec<Vector>,
    dgen: Vec<Vector>,
    /// `[n][i]`: `d` of the `i`-th basis form of degree `n`.
    d_basis: Vec<Vec<SparseTerms>>,
    gen_star: Option<Vec<Vector>>,
    kind: CalculusKind,
}

fn to_sparse(v: &[Scalar]) -> SparseTerms {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn nonzero(v: &[Scalar]) -> impl Iterator<Item = (usize, &Scalar)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero())
}

impl Calculus {
    /// Builds the multiplicative structure: normal monomials, products, left action
    /// and left-freeness, with the differential still unset.
    pub(crate) fn structure(
        algebra: Arc<FiniteDimAlgebra>,
        rewrite: RewriteSystem,
        commutation: Vec<Vec<Vector>>,
        max_degree: usize,
    ) -> Result<Self, DgaError> {
        let na = algebra.dim();
        let k = rewrite.generators().len();
        rewrite.check_confluence(max_degree.max(2))?;
        let monomials: Vec<Vec<Word>> = (0..=max_degree).map(|n| rewrite.normal_words(n)).collect();
        let mono_index: Vec<BTreeMap<Word, usize>> = monomials
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
            .collect();
        let mut mono_product = Vec::new();
        for p in 0..=max_degree {
            let mut row = Vec::new();
            for q in 0..=max_degree - p {
                let table: Vec<Vec<SparseTerms>> = monomials[p]
                    .iter()
                    .map(|m1| {
                        monomials[q]
                            .iter()
                            .map(|m2| {
                                let mut w = m1.clone();
                                w.extend_from_slice(m2);
                                rewrite
                                    .normalize(&w)
                                    .into_iter()
                                    .map(|(c, nw)| (mono_index[p + q][&nw], c))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                row.push(table);
            }
            mono_product.push(row);
        }
        if commutation.len() != na || commutation.iter().any(|r| r.len() != k) {
            return Err(DgaError::InvalidData("commutation table shape".into()));
        }
        let commutation: Vec<Vec<Vec<(usize, Vector)>>> = commutation
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        (0..k)
                            .map(|g| (g, v[g * na..(g + 1) * na].to_vec()))
                            .filter(|(_, c)| !is_zero_vec(c))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut calc = Calculus {
            algebra,
            rewrite,
            max_degree,
            monomials,
            mono_index,
            mono_product,
            commutation,
            left_mul: Vec::new(),
            to_left: Vec::new(),
            d0: Vec::new(),
            dgen: Vec::new(),
            d_basis: Vec::new(),
            gen_star: None,
            kind: CalculusKind::General,
        };
        calc.check_commutation_action()?;
        calc.build_left_mul();
        calc.check_commutation_relations()?;
        calc.build_to_left()?;
        Ok(calc)
    }

    /// Installs the differential and optional generator star, then validates.
    pub(crate) fn finish(
        mut self,
        d0: Vec<Vector>,
        dgen: Vec<Vector>,
        gen_star: Option<Vec<Vector>>,
        kind: CalculusKind,
    ) -> Result<Self, DgaError> {
        if d0.len() != self.algebra.dim() || d0.iter().any(|v| v.len() != self.dim(1)) {
            return Err(DgaError::InvalidData("d on the algebra has the wrong shape".into()));
        }
        let k = self.num_generators();
        let d2 = if self.max_degree >= 2 { self.dim(2) } else { 0 };
        if dgen.len() != k || dgen.iter().any(|v| v.len() != d2) {
            return Err(DgaError::InvalidData("d on generators has the wrong shape".into()));
        }
        self.d0 = d0;
        self.dgen = dgen;
        self.gen_star = gen_star;
        self.kind = kind;
        self.build_differential();
        self.validate_differential()?;
        if self.gen_star.is_some() {
            self.validate_star()?;
        }
        Ok(self)
    }

    fn check_commutation_action(&self) -> Result<(), DgaError> {
        let na = self.algebra.dim();
        let k = self.num_generators();
        for g in 0..k {
            // 1 . g = g . 1
            let unit = self.algebra.unit();
            let mut lhs = zero_vec(k * na);
            for (x, c) in nonzero(unit) {
                axpy(&mut lhs, c, &self.commute_vec(x, g));
            }
            let mut rhs = zero_vec(k * na);
            rhs[g * na..(g + 1) * na].clone_from_slice(unit);
            if lhs != rhs {
                return Err(DgaError::CommutationNotAction(usize::MAX, usize::MAX, g));
            }
            for x in 0..na {
                for y in 0..na {
                    let xy = self.algebra.mul(&self.algebra.basis(x), &self.algebra.basis(y));
                    let mut lhs = zero_vec(k * na);
                    for (z, c) in nonzero(&xy) {
                        axpy(&mut lhs, c, &self.commute_vec(z, g));
                    }
                    // x . (g_j . c) = (x . g_j) . c
                    let mut rhs = zero_vec(k * na);
                    for (j, c) in &self.commutation[y][g] {
                        let xg = self.commute_vec(x, *j);
                        rhs = crate::linalg::add_vec(&rhs, &self.right_mul(&xg, c));
                    }
                    if lhs != rhs {
                        return Err(DgaError::CommutationNotAction(x, y, g));
                    }
                }
            }
        }
        Ok(())
    }

    /// `x . g` as an `Omega^1` coordinate vector.
    fn commute_vec(&self, x: usize, g: usize) -> Vector {
        let na = self.algebra.dim();
        let mut v = zero_vec(self.num_generators() * na);
        for (k, c) in &self.commutation[x][g] {
            for (a, s) in nonzero(c) {
                v[k * na + a] = s.clone();
            }
        }
        v
    }

    fn build_left_mul(&mut self) {
        let na = self.algebra.dim();
        let mut tables: Vec<Vec<Vec<SparseTerms>>> = Vec::new();
        tables.push((0..na).map(|x| vec![vec![(x, Scalar::one())]]).collect());
        for n in 1..=self.max_degree {
            let mut per_x = Vec::with_capacity(na);
            for x in 0..na {
                let mut per_m = Vec::with_capacity(self.monomials[n].len());
                for m in &self.monomials[n] {
                    let rest = self.mono_index[n - 1][&m[1..]];
                    let mut out = zero_vec(self.monomials[n].len() * na);
                    for (gk, c) in &self.commutation[x][m[0]] {
                        // g_k ^ (c . rest)
                        for (y, cy) in nonzero(c) {
                            for (idx, s) in &tables[n - 1][y][rest] {
                                let (m2, a) = (idx / na, idx % na);
                                for (m3, t) in &self.mono_product[1][n - 1][*gk][m2] {
                                    let coeff = cy * &(s * t);
                                    let slot = &mut out[m3 * na + a];
                                    *slot = &*slot + &coeff;
                                }
                            }
                        }
                    }
                    per_m.push(to_sparse(&out));
                }
                per_x.push(per_m);
            }
            tables.push(per_x);
        }
        self.left_mul = tables;
    }

    /// Pushes `x` through an arbitrary word letter by letter, normalising only at the end.
    fn push_word(&self, x: usize, word: &[usize]) -> Vector {
        let na = self.algebra.dim();
        // Terms: (prefix word, algebra coefficient vector).
        let mut terms: Vec<(Word, Vector)> = vec![(Vec::new(), unit_vec(na, x))];
        for &g in word {
            let mut next = Vec::new();
            for (w, c) in &terms {
                for (y, cy) in nonzero(c) {
                    for (k, cc) in &self.commutation[y][g] {
                        let mut nw = w.clone();
                        nw.push(*k);
                        next.push((nw, scale_vec(cy, cc)));
                    }
                }
            }
            terms = next;
        }
        let n = word.len();
        let mut out = zero_vec(self.monomials[n].len() * na);
        for (w, c) in terms {
            for (coef, nw) in self.rewrite.normalize(&w) {
                let m = self.mono_index[n][&nw];
                for (a, s) in nonzero(&c) {
                    let slot = &mut out[m * na + a];
                    *slot = &*slot + &(&coef * s);
                }
            }
        }
        out
    }

    fn check_commutation_relations(&self) -> Result<(), DgaError> {
        for (ri, rule) in self.rewrite.rules().iter().enumerate() {
            let n = rule.lhs.len();
            if n > self.max_degree {
                continue;
            }
            for x in 0..self.algebra.dim() {
                let lhs = self.push_word(x, &rule.lhs);
                let mut rhs = zero_vec(lhs.len());
                for (c, w) in &rule.rhs {
                    axpy(&mut rhs, c, &self.push_word(x, w));
                }
                if lhs != rhs {
                    return Err(DgaError::CommutationIncompatible { rule: ri, element: x });
                }
            }
        }
        Ok(())
    }

    fn build_to_left(&mut self) -> Result<(), DgaError> {
        let na = self.algebra.dim();
        let mut mats = Vec::new();
        for n in 0..=self.max_degree {
            let dim = self.dim(n);
            let mut l = Matrix::zeros(dim, dim);
            for m in 0..self.monomials[n].len() {
                for a in 0..na {
                    for (r, c) in &self.left_mul[n][a][m] {
                        l[(*r, m * na + a)] = c.clone();
                    }
                }
            }
            mats.push(l.inverse().map_err(|_| DgaError::NotLeftFree(n))?);
        }
        self.to_left = mats;
        Ok(())
    }

    fn build_differential(&mut self) {
        let na = self.algebra.dim();
        // d on monomials with unit coefficient, degree by degree.
        let mut dmono: Vec<Vec<Vector>> = Vec::new();
        for n in 0..self.max_degree {
            let mut row = Vec::new();
            for m in 0..self.monomials[n].len() {
                if n == 0 {
                    row.push(zero_vec(self.dim(1)));
                    continue;
                }
                let word = self.monomials[n][m].clone();
                let g = word[0];
                let rest = self.mono_index[n - 1][&word[1..]];
                let rest_form = self.monomial_form(n - 1, rest);
                // d(g ^ rest) = dg ^ rest - g ^ d(rest)
                let mut v = self.wedge(2, &self.dgen[g], n - 1, &rest_form);
                let gform = self.monomial_form(1, g);
                let t = self.wedge(1, &gform, n, &dmono[n - 1][rest]);
                v = crate::linalg::sub_vec(&v, &t);
                row.push(v);
            }
            dmono.push(row);
        }
        let mut d_basis = Vec::new();
        for n in 0..self.max_degree {
            let sign = if n % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            let mut row = Vec::with_capacity(self.dim(n));
            for m in 0..self.monomials[n].len() {
                let mform = self.monomial_form(n, m);
                for a in 0..na {
                    // d(m . a) = dm . a + (-1)^n m ^ da
                    let mut v = self.right_mul(&dmono[n][m], &self.algebra.basis(a));
                    let w = self.wedge(n, &mform, 1, &self.d0[a]);
                    axpy(&mut v, &sign, &w);
                    row.push(to_sparse(&v));
                }
            }
            d_basis.push(row);
        }
        self.d_basis = d_basis;
    }

    fn validate_differential(&self) -> Result<(), DgaError> {
        for n in 0..self.max_degree.saturating_sub(1) {
            for i in 0..self.dim(n) {
                let once = self.d(n, &unit_vec(self.dim(n), i));
                if !is_zero_vec(&self.d(n + 1, &once)) {
                    return Err(DgaError::DSquaredNonzero(n));
                }
            }
        }
        let cap = self.max_degree.min(3);
        for (ri, rule) in self.rewrite.rules().iter().enumerate() {
            let n = rule.lhs.len();
            if n + 1 > self.max_degree {
                continue;
            }
            let lhs = self.d_word(&rule.lhs);
            let mut rhs = zero_vec(self.dim(n + 1));
            for (c, w) in &rule.rhs {
                axpy(&mut rhs, c, &self.d_word(w));
            }
            if lhs != rhs {
                return Err(DgaError::DifferentialIncompatible(ri));
            }
        }
        self.check_leibniz(cap)?;
        if let CalculusKind::Inner { theta } = &self.kind {
            let t2 = self.wedge(1, theta, 1, theta);
            if self.max_degree >= 2 {
                for a in 0..self.algebra.dim() {
                    let ab = self.algebra.basis(a);
                    if self.left_mul(2, &ab, &t2) != self.right_mul(&t2, &ab) {
                        return Err(DgaError::ThetaSquareNotCentral);
                    }
                }
            }
            for n in 0..self.max_degree {
                for i in 0..self.dim(n) {
                    let x = unit_vec(self.dim(n), i);
                    if self.inner_formula(n, &x).as_ref() != Some(&self.d(n, &x)) {
                        return Err(DgaError::InnerFormulaMismatch(n));
                    }
                }
            }
        }
        Ok(())
    }

    /// `d` of a generator word computed letter by letter with the Leibniz rule.
    fn d_word(&self, word: &[usize]) -> Vector {
        let n = word.len();
        let mut out = zero_vec(self.dim(n + 1));
        for i in 0..n {
            let left = self.word_form(&word[..i]);
            let right = self.word_form(&word[i + 1..]);
            let t = self.wedge(i, &left, 2, &self.dgen[word[i]]);
            let t = self.wedge(i + 2, &t, n - i - 1, &right);
            let sign = if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            axpy(&mut out, &sign, &t);
        }
        out
    }

    /// The form of an arbitrary generator word (with unit coefficient).
    pub fn word_form(&self, word: &[usize]) -> Vector {
        let n = word.len();
        let mut out = zero_vec(self.dim(n));
        for (c, w) in self.rewrite.normalize(word) {
            let m = self.mono_index[n][&w];
            axpy(&mut out, &c, &self.monomial_form(n, m));
        }
        out
    }

    /// Checks `d(x ^ y) = dx ^ y + (-1)^p x ^ dy` on all basis pairs of total degree
    /// below `max_total`.
    pub fn check_leibniz(&self, max_total: usize) -> Result<(), DgaError> {
        let top = max_total.min(self.max_degree);
        for p in 0..top {
            for q in 0..top - p {
                for i in 0..self.dim(p) {
                    let x = unit_vec(self.dim(p), i);
                    let dx = self.d(p, &x);
                    for j in 0..self.dim(q) {
                        let y = unit_vec(self.dim(q), j);
                        if !self.leibniz_holds(p, &x, &dx, q, &y) {
                            return Err(DgaError::LeibnizFailure(i, p, j, q));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn leibniz_holds(&self, p: usize, x: &[Scalar], dx: &[Scalar], q: usize, y: &[Scalar]) -> bool {
        let lhs = self.d(p + q, &self.wedge(p, x, q, y));
        let mut rhs = self.wedge(p + 1, dx, q, y);
        let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        axpy(&mut rhs, &sign, &self.wedge(p, x, q + 1, &self.d(q, y)));
        lhs == rhs
    }

    fn validate_star(&self) -> Result<(), DgaError> {
        let stars = self.gen_star.as_ref().expect("star present");
        let k = self.num_generators();
        if stars.len() != k || stars.iter().any(|s| s.len() != k) {
            return Err(DgaError::StarIncompatible("shape".into()));
        }
        // Involutive on generators.
        for g in 0..k {
            let mut back = zero_vec(k);
            for (h, c) in nonzero(&stars[g]) {
                axpy(&mut back, &c.conj(), &stars[h]);
            }
            if back != unit_vec(k, g) {
                return Err(DgaError::StarIncompatible(format!("not involutive on generator {g}")));
            }
        }
        for (ri, rule) in self.rewrite.rules().iter().enumerate() {
            let n = rule.lhs.len();
            if n > self.max_degree {
                continue;
            }
            let lhs = self.star_word(&rule.lhs);
            let mut rhs = zero_vec(self.dim(n));
            for (c, w) in &rule.rhs {
                axpy(&mut rhs, &c.conj(), &self.star_word(w));
            }
            if lhs != rhs {
                return Err(DgaError::StarIncompatible(format!("relation {ri}")));
            }
        }
        if self.max_degree >= 1 {
            for a in 0..self.algebra.dim() {
                let da_star = self.star_form(1, &self.d0[a]).expect("star present");
                let a_star = self.algebra.star_basis(a).clone();
                let d_astar = self.d(0, &a_star);
                if da_star != d_astar {
                    return Err(DgaError::StarIncompatible(format!(
                        "(da)* != d(a*) for a = {}",
                        self.algebra.labels()[a]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(g_1 ... g_n)* = (-1)^{n(n-1)/2} g_n* ... g_1*` as a form.
    fn star_word(&self, word: &[usize]) -> Vector {
        let stars = self.gen_star.as_ref().expect("star present");
        let n = word.len();
        let mut out = self.monomial_form(0, 0);
        for (deg, &g) in word.iter().rev().enumerate() {
            let mut gs = zero_vec(self.dim(1));
            for (h, c) in nonzero(&stars[g]) {
                axpy(&mut gs, c, &self.monomial_form(1, h));
            }
            out = self.wedge(deg, &out, 1, &gs);
        }
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            out = scale_vec(&-Scalar::one(), &out);
        }
        out
    }

    // ---- accessors ----

    pub fn algebra(&self) -> &Arc<FiniteDimAlgebra> {
        &self.algebra
    }

    pub fn rewrite(&self) -> &RewriteSystem {
        &self.rewrite
    }

    pub fn kind(&self) -> &CalculusKind {
        &self.kind
    }

    pub fn theta(&self) -> Option<&Vector> {
        match &self.kind {
            CalculusKind::Inner { theta } => Some(theta),
            _ => None,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn num_generators(&self) -> usize {
        self.rewrite.generators().len()
    }

    pub fn generator_names(&self) -> &[String] {
        self.rewrite.generators()
    }

    pub fn monomials(&self, n: usize) -> &[Word] {
        &self.monomials[n]
    }

    pub fn num_monomials(&self, n: usize) -> usize {
        self.monomials[n].len()
    }

    pub fn monomial_index(&self, n: usize, word: &[usize]) -> Option<usize> {
        self.mono_index.get(n)?.get(word).copied()
    }

    /// Dimension of `Omega^n`; panics above the degree cap.
    pub fn dim(&self, n: usize) -> usize {
        assert!(n <= self.max_degree, "degree {n} exceeds cap {}", self.max_degree);
        self.monomials[n].len() * self.algebra.dim()
    }

    pub fn try_dim(&self, n: usize) -> Result<usize, DgaError> {
        if n > self.max_degree {
            Err(DgaError::DegreeTooHigh {
                degree: n,
                max: self.max_degree,
            })
        } else {
            Ok(self.dim(n))
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|n| self.dim(n)).collect()
    }

    pub fn form_index(&self, m: usize, a: usize) -> usize {
        m * self.algebra.dim() + a
    }

    /// Normal form of the product of two monomials, as `(monomial index, coefficient)`.
    pub fn mono_product(&self, p: usize, i: usize, q: usize, j: usize) -> &[(usize, Scalar)] {
        &self.mono_product[p][q][i][j]
    }

    /// The form `m . 1`.
    pub fn monomial_form(&self, n: usize, m: usize) -> Vector {
        let na = self.algebra.dim();
        let mut v = zero_vec(self.dim(n));
        for (a, c) in nonzero(self.algebra.unit()) {
            v[m * na + a] = c.clone();
        }
        v
    }

    /// Right-form coordinates of `x . m` for algebra basis `x` and monomial `m`.
    pub fn left_mul_basis(&self, n: usize, x: usize, m: usize) -> &[(usize, Scalar)] {
        &self.left_mul[n][x][m]
    }

    /// `x . g` for algebra basis `x` and generator `g`, as `(g_k, c_k)` pairs.
    pub fn commutation(&self, x: usize, g: usize) -> &[(usize, Vector)] {
        &self.commutation[x][g]
    }

    /// Matrix converting right-form coordinates of `Omega^n` into left-form
    /// coordinates, indexed `m * dim(A) + a` for `a . m`.
    pub fn to_left(&self, n: usize) -> &Matrix {
        &self.to_left[n]
    }

    pub fn d0(&self, a: usize) -> &Vector {
        &self.d0[a]
    }

    pub fn dgen(&self, g: usize) -> &Vector {
        &self.dgen[g]
    }

    pub fn gen_star(&self) -> Option<&[Vector]> {
        self.gen_star.as_deref()
    }

    // ---- operations on coordinate vectors ----

    pub fn wedge(&self, p: usize, x: &[Scalar], q: usize, y: &[Scalar]) -> Vector {
        let na = self.algebra.dim();
        let mut out = zero_vec(self.dim(p + q));
        for (i, xi) in nonzero(x) {
            let (m1, a) = (i / na, i % na);
            for (j, yj) in nonzero(y) {
                let (m2, b) = (j / na, j % na);
                let c = xi * yj;
                for (idx, s) in &self.left_mul[q][a][m2] {
                    let (mp, ap) = (idx / na, idx % na);
                    let cs = &c * s;
                    for (m3, t) in &self.mono_product[p][q][m1][mp] {
                        let cst = &cs * t;
                        for (r, u) in self.algebra.basis_product(ap, b) {
                            let slot = &mut out[m3 * na + r];
                            *slot = &*slot + &(&cst * u);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn d(&self, n: usize, x: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim(n + 1));
        for (i, xi) in nonzero(x) {
            for (j, c) in &self.d_basis[n][i] {
                let slot = &mut out[*j];
                *slot = &*slot + &(xi * c);
            }
        }
        out
    }

    pub fn d_basis(&self, n: usize, i: usize) -> &[(usize, Scalar)] {
        &self.d_basis[n][i]
    }

    pub fn d_matrix(&self, n: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dim(n + 1), self.dim(n));
        for i in 0..self.dim(n) {
            for (j, c) in &self.d_basis[n][i] {
                m[(*j, i)] = c.clone();
            }
        }
        m
    }

    /// `x . a` for an algebra element `a`; works in every degree.
    pub fn right_mul(&self, x: &[Scalar], a: &[Scalar]) -> Vector {
        let na = self.algebra.dim();
        let mut out = zero_vec(x.len());
        for (i, xi) in nonzero(x) {
            let (m, b) = (i / na, i % na);
            for (c, ac) in nonzero(a) {
                let coeff = xi * ac;
                for (r, s) in self.algebra.basis_product(b, c) {
                    let slot = &mut out[m * na + r];
                    *slot = &*slot + &(&coeff * s);
                }
            }
        }
        out
    }

    /// `a . x` for an algebra element `a`.
    pub fn left_mul(&self, n: usize, a: &[Scalar], x: &[Scalar]) -> Vector {
        let na = self.algebra.dim();
        let mut out = zero_vec(self.dim(n));
        for (y, ay) in nonzero(a) {
            for (i, xi) in nonzero(x) {
                let (m, b) = (i / na, i % na);
                let c = ay * xi;
                for (idx, s) in &self.left_mul[n][y][m] {
                    let (mp, ap) = (idx / na, idx % na);
                    let cs = &c * s;
                    for (r, t) in self.algebra.basis_product(ap, b) {
                        let slot = &mut out[mp * na + r];
                        *slot = &*slot + &(&cs * t);
                    }
                }
            }
        }
        out
    }

    /// `theta ^ x - (-1)^n x ^ theta` for inner calculi.
    pub fn inner_formula(&self, n: usize, x: &[Scalar]) -> Option<Vector> {
        let theta = self.theta()?;
        let mut v = self.wedge(1, theta, n, x);
        let w = self.wedge(n, x, 1, theta);
        let sign = if n % 2 == 0 { -Scalar::one() } else { Scalar::one() };
        axpy(&mut v, &sign, &w);
        Some(v)
    }

    /// Star of a form, `(m . a)* = a* . m*`, if a generator star is defined.
    pub fn star_form(&self, n: usize, x: &[Scalar]) -> Option<Vector> {
        self.gen_star.as_ref()?;
        let na = self.algebra.dim();
        let mut out = zero_vec(self.dim(n));
        let mstars: Vec<Vector> = self.monomials[n].iter().map(|w| self.star_word(w)).collect();
        for (i, xi) in nonzero(x) {
            let (m, a) = (i / na, i % na);
            let astar = self.algebra.star_basis(a);
            let t = self.left_mul(n, astar, &mstars[m]);
            axpy(&mut out, &xi.conj(), &t);
        }
        Some(out)
    }

    /// Kernel dimension of `d: A -> Omega^1`.
    pub fn kernel_of_d0_dim(&self) -> usize {
        self.algebra.dim() - self.d_matrix(0).rank()
    }

    pub fn format_form(&self, n: usize, x: &[Scalar]) -> String {
        let na = self.algebra.dim();
        let mut parts = Vec::new();
        for (i, c) in nonzero(x) {
            let (m, a) = (i / na, i % na);
            let mono = self.rewrite.format_word(&self.monomials[n][m]);
            let coeff = if c.is_one() {
                String::new()
            } else if matches!(c, Scalar::Rational(_)) {
                format!("{c}*")
            } else {
                format!("({c})*")
            };
            parts.push(format!("{coeff}{mono}.{}", self.algebra.labels()[a]));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// A form bound to its calculus.
#[derive(Debug, Clone)]
pub struct FormElement {
    calculus: Arc<Calculus>,
    degree: usize,
    coords: Vector,
}

impl FormElement {
    pub fn new(calculus: Arc<Calculus>, degree: usize, coords: Vector) -> Result<Self, DgaError> {
        let dim = calculus.try_dim(degree)?;
        if coords.len() != dim {
            return Err(DgaError::InvalidData(format!(
                "expected {dim} coordinates, found {}",
                coords.len()
            )));
        }
        Ok(FormElement {
            calculus,
            degree,
            coords,
        })
    }

    /// The basis form `m . a`.
    pub fn basis(calculus: Arc<Calculus>, degree: usize, m: usize, a: usize) -> Result<Self, DgaError> {
        let dim = calculus.try_dim(degree)?;
        let coords = unit_vec(dim, calculus.form_index(m, a));
        Ok(FormElement {
            calculus,
            degree,
            coords,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn calculus(&self) -> &Arc<Calculus> {
        &self.calculus
    }

    /// Nonzero terms as `(monomial, algebra basis, coefficient)`.
    pub fn terms(&self) -> Vec<(Word, usize, Scalar)> {
        let na = self.calculus.algebra.dim();
        nonzero(&self.coords)
            .map(|(i, c)| (self.calculus.monomials[self.degree][i / na].clone(), i % na, c.clone()))
            .collect()
    }

    fn same(&self, other: &Self) -> Result<(), DgaError> {
        if Arc::ptr_eq(&self.calculus, &other.calculus) {
            Ok(())
        } else {
            Err(DgaError::ParentMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, DgaError> {
        self.same(other)?;
        if self.degree != other.degree {
            return Err(DgaError::InvalidData("cannot add forms of different degree".into()));
        }
        Ok(FormElement {
            calculus: self.calculus.clone(),
            degree: self.degree,
            coords: crate::linalg::add_vec(&self.coords, &other.coords),
        })
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, DgaError> {
        self.same(other)?;
        let n = self.degree + other.degree;
        self.calculus.try_dim(n)?;
        Ok(FormElement {
            calculus: self.calculus.clone(),
            degree: n,
            coords: self
                .calculus
                .wedge(self.degree, &self.coords, other.degree, &other.coords),
        })
    }

    pub fn d(&self) -> Result<Self, DgaError> {
        self.calculus.try_dim(self.degree + 1)?;
        Ok(FormElement {
            calculus: self.calculus.clone(),
            degree: self.degree + 1,
            coords: self.calculus.d(self.degree, &self.coords),
        })
    }

    pub fn left_mul(&self, a: &[Scalar]) -> Self {
        FormElement {
            calculus: self.calculus.clone(),
            degree: self.degree,
            coords: self.calculus.left_mul(self.degree, a, &self.coords),
        }
    }

    pub fn right_mul(&self, a: &[Scalar]) -> Self {
        FormElement {
            calculus: self.calculus.clone(),
            degree: self.degree,
            coords: self.calculus.right_mul(&self.coords, a),
        }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }
}

impl PartialEq for FormElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.calculus, &other.calculus)
            && self.degree == other.degree
            && self.coords == other.coords
    }
}

impl fmt::Display for FormElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.calculus.format_form(self.degree, &self.coords))
    }
}
