//! Spectral sequence of a filtered cochain complex.
//!
//! Pages use the approximants `Z_r^p = {x in F^p : dx in F^{p+r}}` and
//! `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`, so every page is computed
//! directly from the complex and the page-to-page rule can be checked independently.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{unit_vec, LinalgError, Matrix, Subquotient, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("filtration axiom violated: {0}")]
    Axiom(AxiomViolation),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d^2 != 0 from degree {0}")]
    DSquaredNonzero(usize),
    #[error("no stable page within {0} pages")]
    NotStable(usize),
    #[error("page {r} is not the cohomology of page {prev} at cell ({p}, {q})", prev = r - 1)]
    PageMismatch { r: usize, p: usize, q: usize },
    #[error("d_{r} o d_{r} != 0 at cell ({p}, {q})")]
    PageDSquared { r: usize, p: usize, q: usize },
    #[error("converged dimension {converged} differs from direct cohomology {direct} in degree {k}")]
    ConvergenceMismatch { k: usize, converged: usize, direct: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The four conditions on a filtration, with the offending `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `d F^m C^n` is not contained in `F^m C^{n+1}`.
    NotDifferential { m: usize, n: usize },
    /// `F^{m+1} C^n` is not contained in `F^m C^n`.
    NotDecreasing { m: usize, n: usize },
    /// `F^0 C^n != C^n`.
    NotExhaustive { n: usize },
    /// `F^m C^n != 0` for some `m > n`.
    NotBounded { m: usize, n: usize },
}

impl core::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AxiomViolation::NotDifferential { m, n } => write!(f, "d F^{m}C^{n} is not inside F^{m}C^{}", n + 1),
            AxiomViolation::NotDecreasing { m, n } => write!(f, "F^{}C^{n} is not inside F^{m}C^{n}", m + 1),
            AxiomViolation::NotExhaustive { n } => write!(f, "F^0C^{n} != C^{n}"),
            AxiomViolation::NotBounded { m, n } => write!(f, "F^{m}C^{n} != 0"),
        }
    }
}

/// One axiom instance and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub m: usize,
    pub n: usize,
    pub holds: bool,
}

/// A cochain complex `C^0 -> ... -> C^N` (with `d = 0` out of `C^N`) and a
/// decreasing filtration `F^m C^n`, `m = 0..=N+1`.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    dims: Vec<usize>,
    d: Vec<Matrix>,
    filtration: Vec<Vec<Subspace>>,
}

impl FilteredComplex {
    pub fn new(dims: Vec<usize>, d: Vec<Matrix>, filtration: Vec<Vec<Subspace>>) -> Result<Self, SpectralError> {
        let fc = Self::new_unchecked(dims, d, filtration)?;
        fc.validate()?;
        Ok(fc)
    }

    /// Checks shapes only.
    pub fn new_unchecked(
        dims: Vec<usize>,
        d: Vec<Matrix>,
        filtration: Vec<Vec<Subspace>>,
    ) -> Result<Self, SpectralError> {
        let top = dims.len().checked_sub(1).ok_or_else(|| SpectralError::Shape("empty complex".into()))?;
        if d.len() != top {
            return Err(SpectralError::Shape(format!("expected {top} differentials, found {}", d.len())));
        }
        for (n, m) in d.iter().enumerate() {
            if m.cols() != dims[n] || m.rows() != dims[n + 1] {
                return Err(SpectralError::Shape(format!("d_{n} has the wrong shape")));
            }
        }
        if filtration.len() != dims.len() {
            return Err(SpectralError::Shape("one filtration per degree is required".into()));
        }
        for (n, fs) in filtration.iter().enumerate() {
            if fs.len() != top + 2 || fs.iter().any(|s| s.ambient_dim() != dims[n]) {
                return Err(SpectralError::Shape(format!("filtration of C^{n} has the wrong shape")));
            }
        }
        Ok(FilteredComplex { dims, d, filtration })
    }

    /// The trivial filtration `F^0 = C`, `F^1 = 0`.
    pub fn one_column(dims: Vec<usize>, d: Vec<Matrix>) -> Result<Self, SpectralError> {
        let top = dims.len().saturating_sub(1);
        let filtration = dims
            .iter()
            .map(|&n| {
                let mut fs = vec![Subspace::full(n)];
                fs.extend((0..=top).map(|_| Subspace::zero(n)));
                fs
            })
            .collect();
        Self::new(dims, d, filtration)
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d: C^n -> C^{n+1}`; zero out of the top degree.
    pub fn d(&self, n: usize) -> Matrix {
        self.d
            .get(n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(0, self.dims[n]))
    }

    /// `F^m C^n`, with `F^m = C` for `m <= 0`.
    pub fn f(&self, m: i64, n: usize) -> Subspace {
        if m <= 0 {
            return Subspace::full(self.dims[n]);
        }
        let fs = &self.filtration[n];
        fs[(m as usize).min(fs.len() - 1)].clone()
    }

    pub fn filtration_dims(&self) -> Vec<Vec<usize>> {
        self.filtration.iter().map(|fs| fs.iter().map(Subspace::dim).collect()).collect()
    }

    /// Every axiom instance for `m, n <= max`.
    pub fn axiom_checks(&self, max: usize) -> Vec<AxiomCheck> {
        let top = self.top_degree();
        let mut out = Vec::new();
        for n in 0..=top.min(max) {
            let full = self.filtration[n][0].dim() == self.dims[n];
            out.push(AxiomCheck { axiom: "exhaustive", m: 0, n, holds: full });
            for m in 0..=max.min(top + 1) {
                let fm = &self.filtration[n][m];
                if m < top + 1 {
                    let next = &self.filtration[n][m + 1];
                    out.push(AxiomCheck { axiom: "decreasing", m, n, holds: next.is_subspace_of(fm) });
                }
                if n < top {
                    let img = fm.image_under(&self.d[n]);
                    let holds = img.is_subspace_of(&self.filtration[n + 1][m]);
                    out.push(AxiomCheck { axiom: "differential", m, n, holds });
                }
                if m > n {
                    out.push(AxiomCheck { axiom: "bounded", m, n, holds: fm.dim() == 0 });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        for n in 0..self.d.len().saturating_sub(1) {
            if !self.d[n + 1].try_mul(&self.d[n])?.is_zero() {
                return Err(SpectralError::DSquaredNonzero(n));
            }
        }
        for c in self.axiom_checks(self.top_degree() + 1) {
            if !c.holds {
                let (m, n) = (c.m, c.n);
                let v = match c.axiom {
                    "exhaustive" => AxiomViolation::NotExhaustive { n },
                    "decreasing" => AxiomViolation::NotDecreasing { m, n },
                    "differential" => AxiomViolation::NotDifferential { m, n },
                    _ => AxiomViolation::NotBounded { m, n },
                };
                return Err(SpectralError::Axiom(v));
            }
        }
        Ok(())
    }

    /// `Z_r^p` in degree `n`.
    fn z(&self, r: i64, p: i64, n: usize) -> Subspace {
        let fp = self.f(p, n);
        if n == self.top_degree() {
            return fp;
        }
        fp.preimage_within(&self.d[n], &self.f(p + r, n + 1))
    }

    /// `Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}` in degree `n`.
    fn b(&self, r: i64, p: i64, n: usize) -> Subspace {
        let mut s = self.z(r - 1, p + 1, n);
        if n > 0 {
            let src = self.z(r - 1, p - r + 1, n - 1);
            s = s.sum(&src.image_under(&self.d[n - 1]));
        }
        s
    }

    /// Page `r`: cells `(p, q)` with `p + q <= N`.
    pub fn page(&self, r: usize) -> SpectralPage {
        let top = self.top_degree();
        let ri = r as i64;
        let mut cells = BTreeMap::new();
        for n in 0..=top {
            for p in 0..=n {
                let z = self.z(ri, p as i64, n);
                let b = self.b(ri, p as i64, n);
                let sq = Subquotient::new(&z, &b).expect("boundaries lie in cycles");
                cells.insert((p, n - p), sq);
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(p, q), cell) in &cells {
            let n = p + q;
            let tq = (q + 1).checked_sub(r);
            let target = tq.and_then(|tq| cells.get(&(p + r, tq)));
            let cols: Vec<Vector> = cell
                .representatives()
                .iter()
                .map(|x| match (target, n < top) {
                    (Some(t), true) => t
                        .class_of(&self.d[n].mul_vec(x))
                        .expect("d maps Z_r^p into Z_r^{p+r}"),
                    _ => Vec::new(),
                })
                .collect();
            let rows = target.map(Subquotient::dim).unwrap_or(0);
            let m = if rows == 0 {
                Matrix::zeros(0, cell.dim())
            } else {
                Matrix::from_columns(rows, &cols).unwrap()
            };
            differentials.insert((p, q), m);
        }
        SpectralPage { r, cells, differentials }
    }

    /// `H^k = ker d_k / im d_{k-1}` for every degree.
    pub fn direct_cohomology(&self) -> Vec<Subquotient> {
        (0..=self.top_degree())
            .map(|n| {
                let ker = if n < self.top_degree() {
                    Subspace::full(self.dims[n]).preimage_within(&self.d[n], &Subspace::zero(self.dims[n + 1]))
                } else {
                    Subspace::full(self.dims[n])
                };
                let im = if n > 0 {
                    Subspace::full(self.dims[n - 1]).image_under(&self.d[n - 1])
                } else {
                    Subspace::zero(self.dims[n])
                };
                Subquotient::new(&ker, &im).expect("d^2 = 0")
            })
            .collect()
    }

    pub fn direct_cohomology_dims(&self) -> Vec<usize> {
        self.direct_cohomology().iter().map(Subquotient::dim).collect()
    }

    /// Pages `0..=N+2`, the first stable index and the diagonal sums of `E_infinity`.
    pub fn run(&self) -> Result<SpectralSequence, SpectralError> {
        let last = self.top_degree() + 2;
        let pages: Vec<SpectralPage> = (0..=last).map(|r| self.page(r)).collect();
        for page in &pages {
            page.check_d_squared()?;
        }
        for r in 1..pages.len() {
            pages[r - 1].check_next(&pages[r])?;
        }
        let dims: Vec<BTreeMap<(usize, usize), usize>> = pages.iter().map(SpectralPage::dims).collect();
        let stable_page = (1..=last)
            .find(|&r| dims[r..].iter().all(|d| d == &dims[r]))
            .ok_or(SpectralError::NotStable(last))?;
        let infinity = &pages[last];
        let converged: Vec<usize> = (0..=self.top_degree()).map(|k| infinity.diagonal_dim(k)).collect();
        let direct = self.direct_cohomology_dims();
        for (k, (&c, &d)) in converged.iter().zip(&direct).enumerate() {
            if c != d {
                return Err(SpectralError::ConvergenceMismatch { k, converged: c, direct: d });
            }
        }
        Ok(SpectralSequence {
            pages,
            stable_page,
            converged,
            direct,
        })
    }
}

/// Cells and differentials `d_r: E_r^{p,q} -> E_r^{p+r, q-r+1}` of one page.
#[derive(Debug, Clone)]
pub struct SpectralPage {
    pub r: usize,
    pub cells: BTreeMap<(usize, usize), Subquotient>,
    pub differentials: BTreeMap<(usize, usize), Matrix>,
}

impl SpectralPage {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.cells.get(&(p, q)).map(Subquotient::dim).unwrap_or(0)
    }

    pub fn dims(&self) -> BTreeMap<(usize, usize), usize> {
        self.cells.iter().map(|(k, c)| (*k, c.dim())).collect()
    }

    pub fn diagonal_dim(&self, k: usize) -> usize {
        (0..=k).map(|p| self.dim(p, k - p)).sum()
    }

    /// `d_r` landing in `(p, q)`, from `(p - r, q + r - 1)`.
    fn incoming(&self, p: usize, q: usize) -> Option<&Matrix> {
        let sp = p.checked_sub(self.r)?;
        let sq = (q + self.r).checked_sub(1)?;
        self.differentials.get(&(sp, sq))
    }

    pub fn check_d_squared(&self) -> Result<(), SpectralError> {
        for (&(p, q), m) in &self.differentials {
            let Some(tq) = (q + 1).checked_sub(self.r) else { continue };
            if let Some(next) = self.differentials.get(&(p + self.r, tq)) {
                if m.rows() > 0 && next.cols() == m.rows() && !next.try_mul(m)?.is_zero() {
                    return Err(SpectralError::PageDSquared { r: self.r, p, q });
                }
            }
        }
        Ok(())
    }

    /// `dim E_{r+1} = dim ker d_r - dim im d_r` cellwise.
    pub fn check_next(&self, next: &SpectralPage) -> Result<(), SpectralError> {
        for (&(p, q), cell) in &self.cells {
            let out_rank = self.differentials[&(p, q)].rank();
            let in_rank = self.incoming(p, q).map(Matrix::rank).unwrap_or(0);
            let expected = cell.dim() - out_rank - in_rank;
            if next.dim(p, q) != expected {
                return Err(SpectralError::PageMismatch { r: next.r, p, q });
            }
        }
        Ok(())
    }

    /// Aligned table with `q` decreasing downwards and `p` increasing to the right.
    pub fn render(&self) -> String {
        let maxp = self.cells.keys().map(|k| k.0).max().unwrap_or(0);
        let maxq = self.cells.keys().map(|k| k.1).max().unwrap_or(0);
        let mut out = String::new();
        out.push_str("q\\p");
        for p in 0..=maxp {
            out.push_str(&format!(" {p:>4}"));
        }
        out.push('\n');
        for q in (0..=maxq).rev() {
            out.push_str(&format!("{q:>3}"));
            for p in 0..=maxp {
                match self.cells.get(&(p, q)) {
                    Some(c) => out.push_str(&format!(" {:>4}", c.dim())),
                    None => out.push_str("    ."),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SpectralSequence {
    pub pages: Vec<SpectralPage>,
    pub stable_page: usize,
    /// `sum_{p+q=k} dim E_infinity^{p,q}` for every degree of the complex.
    pub converged: Vec<usize>,
    pub direct: Vec<usize>,
}

impl SpectralSequence {
    pub fn infinity(&self) -> &SpectralPage {
        self.pages.last().expect("at least one page")
    }
}

/// Random filtered complex: a direct sum of elementary pieces `x -> y` placed at
/// random filtration levels, conjugated by random filtration-preserving
/// automorphisms. `rand(k)` must return a value in `0..k`.
pub fn random_filtered_complex(dims: &[usize], rand: &mut dyn FnMut(usize) -> usize) -> FilteredComplex {
    let top = dims.len() - 1;
    // Levels of the standard basis vectors, sorted so that higher levels come later.
    let levels: Vec<Vec<usize>> = dims
        .iter()
        .enumerate()
        .map(|(n, &dim)| {
            let mut l: Vec<usize> = (0..dim).map(|_| rand(n + 1)).collect();
            l.sort_unstable();
            l
        })
        .collect();
    // Pair unused basis vectors x in C^n with y in C^{n+1}, level(y) >= level(x).
    let mut used: Vec<Vec<bool>> = dims.iter().map(|&d| vec![false; d]).collect();
    let mut std_d: Vec<Matrix> = (0..top).map(|n| Matrix::zeros(dims[n + 1], dims[n])).collect();
    for n in 0..top {
        for x in 0..dims[n] {
            if used[n][x] || rand(3) == 0 {
                continue;
            }
            let candidates: Vec<usize> = (0..dims[n + 1])
                .filter(|&y| !used[n + 1][y] && levels[n + 1][y] >= levels[n][x])
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let y = candidates[rand(candidates.len())];
            used[n][x] = true;
            used[n + 1][y] = true;
            std_d[n][(y, x)] = Scalar::one();
        }
    }
    // Filtration-preserving automorphisms: unit diagonal, entries (i, j) only when
    // level(i) >= level(j).
    let autos: Vec<(Matrix, Matrix)> = (0..=top)
        .map(|n| {
            let dim = dims[n];
            let mut g = Matrix::identity(dim);
            for i in 0..dim {
                for j in 0..dim {
                    if i != j && levels[n][i] >= levels[n][j] && i > j {
                        g[(i, j)] = Scalar::from_int(rand(5) as i64 - 2);
                    }
                }
            }
            let inv = g.inverse().expect("unit lower triangular");
            (g, inv)
        })
        .collect();
    let d: Vec<Matrix> = (0..top)
        .map(|n| {
            autos[n + 1]
                .0
                .try_mul(&std_d[n])
                .and_then(|m| m.try_mul(&autos[n].1))
                .unwrap()
        })
        .collect();
    let filtration = (0..=top)
        .map(|n| {
            (0..=top + 1)
                .map(|m| {
                    let vecs: Vec<Vector> = (0..dims[n])
                        .filter(|&i| levels[n][i] >= m)
                        .map(|i| autos[n].0.mul_vec(&unit_vec(dims[n], i)))
                        .collect();
                    Subspace::span(dims[n], &vecs)
                })
                .collect()
        })
        .collect();
    FilteredComplex::new(dims.to_vec(), d, filtration).expect("construction preserves the axioms")
}

/// Sum of `dim E^{p,q}` along each diagonal.
pub fn diagonal_sums(dims: &BTreeMap<(usize, usize), usize>, top: usize) -> Vec<usize> {
    let mut out = vec![0; top + 1];
    for (&(p, q), &d) in dims {
        if p + q <= top {
            out[p + q] += d;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_step() -> (Vec<usize>, Vec<Matrix>) {
        // C^0 = Q, C^1 = Q^2, d = (1, 0)^T.
        (vec![1, 2], vec![Matrix::from_i64(&[&[1], &[0]])])
    }

    #[test]
    fn one_column_is_stable_at_page_one() {
        let (dims, d) = two_step();
        let fc = FilteredComplex::one_column(dims, d).unwrap();
        let ss = fc.run().unwrap();
        assert_eq!(ss.stable_page, 1);
        assert_eq!(ss.converged, vec![0, 1]);
        assert_eq!(ss.pages[0].dim(0, 1), 2);
        assert_eq!(ss.pages[1].dim(0, 1), 1);
    }

    #[test]
    fn shifted_filtration_needs_d1() {
        // F^1 C^1 = C^1: the differential crosses columns and is seen by d_1.
        let (dims, d) = two_step();
        let filtration = vec![
            vec![Subspace::full(1), Subspace::zero(1), Subspace::zero(1)],
            vec![Subspace::full(2), Subspace::full(2), Subspace::zero(2)],
        ];
        let fc = FilteredComplex::new(dims, d, filtration).unwrap();
        let ss = fc.run().unwrap();
        assert_eq!(ss.pages[1].dim(0, 0), 1);
        assert_eq!(ss.pages[1].dim(1, 0), 2);
        assert_eq!(ss.pages[1].differentials[&(0, 0)].rank(), 1);
        assert_eq!(ss.stable_page, 2);
        assert_eq!(ss.converged, vec![0, 1]);
    }

    #[test]
    fn axiom_violations_are_named() {
        let (dims, d) = two_step();
        let filtration = vec![
            vec![Subspace::full(1), Subspace::full(1), Subspace::zero(1)],
            vec![Subspace::full(2), Subspace::zero(2), Subspace::zero(2)],
        ];
        let err = FilteredComplex::new(dims.clone(), d.clone(), filtration).unwrap_err();
        assert_eq!(err, SpectralError::Axiom(AxiomViolation::NotDifferential { m: 1, n: 0 }));
        let filtration = vec![
            vec![Subspace::full(1), Subspace::zero(1), Subspace::zero(1)],
            vec![Subspace::full(2), Subspace::zero(2), Subspace::full(2)],
        ];
        let err = FilteredComplex::new(dims, d, filtration).unwrap_err();
        assert!(matches!(err, SpectralError::Axiom(AxiomViolation::NotDecreasing { m: 1, n: 1 })));
    }

    #[test]
    fn d_squared_is_rejected() {
        let d = vec![Matrix::from_i64(&[&[1]]), Matrix::from_i64(&[&[1]])];
        let err = FilteredComplex::one_column(vec![1, 1, 1], d).unwrap_err();
        assert_eq!(err, SpectralError::DSquaredNonzero(0));
    }

    #[test]
    fn random_complexes_converge() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..120 {
            let len = rng.random_range(1..=4);
            let dims: Vec<usize> = (0..len).map(|_| rng.random_range(0..=8)).collect();
            let fc = random_filtered_complex(&dims, &mut |k| rng.random_range(0..k));
            let ss = fc.run().unwrap();
            assert_eq!(ss.converged, ss.direct);
            assert!(ss.stable_page >= 1 && ss.stable_page <= dims.len() + 1);
        }
    }
}
