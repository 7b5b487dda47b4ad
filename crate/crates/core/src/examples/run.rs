//! End-to-end runs of the worked examples, collected into one plain record.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::connection::Connection;
use crate::fibration::{Fibration, GCell};
use crate::ksgns::{
    cochain_map_check, completely_positive, is_algebra_map, ksgns_map, metric_preservation_check, AlgebraMapWitness,
    InnerProduct,
};
use crate::linalg::Vector;
use crate::scalar::Scalar;

use super::{m3_over_m2, s3_over_z2, ExampleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleName {
    S3OverZ2,
    M3OverM2,
}

impl ExampleName {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "s3" | "s3_over_z2" => Some(ExampleName::S3OverZ2),
            "matrix" | "m3_over_m2" => Some(ExampleName::M3OverM2),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleName::S3OverZ2 => "s3_over_z2",
            ExampleName::M3OverM2 => "m3_over_m2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleSpec {
    pub name: ExampleName,
    /// Cocycle parameter of the group example.
    pub b: Scalar,
    pub max_degree: usize,
    /// Pages `0..=pages` are recorded.
    pub pages: usize,
}

impl ExampleSpec {
    pub fn new(name: ExampleName) -> Self {
        ExampleSpec {
            name,
            b: Scalar::one(),
            max_degree: 3,
            pages: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDim {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSummary {
    pub valid: bool,
    pub flat: bool,
    pub extendable: bool,
    pub kernel_dim: usize,
    /// `nabla^[n+1] nabla^[n] = R ^ id` for `n = 0..max_degree-1`.
    pub lemma: Vec<bool>,
    /// The `nabla sigma` identity for `n = 0..max_degree-1`.
    pub nabla_sigma: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSummary {
    pub q: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub well_defined: bool,
    pub leibniz: bool,
    pub flat: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageSummary {
    pub r: usize,
    pub cells: Vec<CellDim>,
    /// Rank of `d_r` out of each cell.
    pub ranks: Vec<CellDim>,
    pub table: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KsgnsSummary {
    pub inner_product_valid: bool,
    pub metric_preserved: bool,
    /// `phi(1)` in the basis of `A`, as labelled terms.
    pub phi_unit: String,
    pub is_algebra_map: bool,
    pub algebra_map_witness: Option<String>,
    pub completely_positive: bool,
    pub cochain_map: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleRun {
    pub name: ExampleName,
    pub b: Option<Scalar>,
    pub max_degree: usize,
    pub base_dims: Vec<usize>,
    pub total_dims: Vec<usize>,
    pub connection: ConnectionSummary,
    pub complex_dims: Vec<usize>,
    /// `filtration_dims[n][m] = dim F^m C^n` for `m, n <= max_degree`.
    pub filtration_dims: Vec<Vec<usize>>,
    pub filtration_axioms_hold: bool,
    pub m_dims: Vec<CellDim>,
    pub n_dims: Vec<usize>,
    pub fibre_cohomology_dims: Vec<usize>,
    pub is_fibration: bool,
    pub g_cells: Vec<GCell>,
    pub induced: Vec<InducedSummary>,
    pub sheaf_cohomology: Vec<CellDim>,
    pub pages: Vec<PageSummary>,
    pub stable_page: usize,
    pub converged: Vec<usize>,
    pub direct: Vec<usize>,
    pub ksgns: KsgnsSummary,
}

fn ksgns_summary(conn: &Connection, ip: &InnerProduct, e0: &Vector) -> Result<KsgnsSummary, ExampleError> {
    let e = ip.bimodule();
    let (a, b) = (e.right_algebra(), e.left_algebra());
    let phi = ksgns_map(ip, e0);
    let metric_preserved = metric_preservation_check(conn, ip)?.is_none();
    let am = is_algebra_map(&phi, b, a);
    let witness = am.as_ref().err().map(|w| match w {
        AlgebraMapWitness::Unit(v) => format!("phi(1) = {} != 1", a.format(v)),
        AlgebraMapWitness::Multiplicative(i, j) => {
            format!("phi({} {}) != phi({}) phi({})", b.labels()[*i], b.labels()[*j], b.labels()[*i], b.labels()[*j])
        }
    });
    let cochain_map = matches!(cochain_map_check(conn, ip, e0, 3), Ok(None));
    Ok(KsgnsSummary {
        inner_product_valid: ip.check().is_ok(),
        metric_preserved,
        phi_unit: a.format(&phi.mul_vec(b.unit())),
        is_algebra_map: am.is_ok(),
        algebra_map_witness: witness,
        completely_positive: completely_positive(&phi, b, a)?.is_psd(),
        cochain_map,
    })
}

pub fn run_example(spec: &ExampleSpec) -> Result<ExampleRun, ExampleError> {
    let max = spec.max_degree;
    let top = max + 1;
    let (connection, ip, e0, b) = match spec.name {
        ExampleName::S3OverZ2 => {
            let g = s3_over_z2(&spec.b, top)?;
            let e = g.connection.tensors().bimodule().clone();
            let ip = InnerProduct::regular(e.clone())?;
            let e0 = e.right_algebra().unit().clone();
            (g.connection, ip, e0, Some(spec.b.clone()))
        }
        ExampleName::M3OverM2 => {
            let m = m3_over_m2(top)?;
            let ip = InnerProduct::rectangular(m.connection.tensors().bimodule().clone())?;
            (m.connection, ip, m.e0, None)
        }
    };
    let t = connection.tensors().clone();
    let summary = ConnectionSummary {
        valid: connection.validate().is_ok(),
        flat: connection.is_flat()?,
        extendable: connection.extendability_check(max).is_ok(),
        kernel_dim: connection.kernel_dim(),
        lemma: (0..max).map(|n| connection.lemma_check(n)).collect::<Result<_, _>>()?,
        nabla_sigma: (0..max).map(|n| connection.nabla_sigma_check(n)).collect::<Result<_, _>>()?,
    };
    let f = Fibration::new(&connection, top)?;
    let fc = f.complex();
    let in_range = |p: usize, q: usize| p + q <= max;

    let mut m_dims = Vec::new();
    for n in 0..=max {
        for p in 0..=n {
            m_dims.push(CellDim { p, q: n - p, dim: f.m_dim(p, n - p) });
        }
    }
    let fibre: Vec<usize> = (0..=max).map(|q| f.fibre_cohomology(q).dim()).collect();
    let mut induced = Vec::new();
    let mut sheaf = Vec::new();
    for q in 0..=max {
        if fibre[q] == 0 {
            for p in 0..=max - q {
                sheaf.push(CellDim { p, q, dim: 0 });
            }
            continue;
        }
        let ic = f.induced_connection(q)?;
        let rank = ic.matrix.rank();
        induced.push(InducedSummary {
            q,
            kernel_dim: ic.matrix.cols() - rank,
            image_dim: rank,
            well_defined: ic.well_defined,
            leibniz: ic.leibniz,
            flat: ic.flat,
        });
        for (p, s) in f.sheaf_cohomology(q, max - q)?.iter().enumerate() {
            sheaf.push(CellDim { p, q, dim: s.dim() });
        }
    }

    let ss = fc.run()?;
    let restricted = |r: usize| -> Vec<CellDim> {
        ss.pages[r]
            .cells
            .iter()
            .filter(|(k, _)| in_range(k.0, k.1))
            .map(|(k, c)| CellDim { p: k.0, q: k.1, dim: c.dim() })
            .collect()
    };
    let last = ss.pages.len() - 1;
    let stable_page = (1..=last)
        .find(|&r| (r..=last).all(|s| restricted(s) == restricted(r)))
        .unwrap_or(last);
    let pages = (0..=spec.pages.min(last))
        .map(|r| {
            let page = &ss.pages[r];
            let ranks = page
                .differentials
                .iter()
                .filter(|(k, _)| in_range(k.0, k.1))
                .map(|(k, d)| CellDim { p: k.0, q: k.1, dim: d.rank() })
                .collect();
            let mut trimmed = page.clone();
            trimmed.cells.retain(|k, _| in_range(k.0, k.1));
            PageSummary {
                r,
                cells: restricted(r),
                ranks,
                table: trimmed.render(),
            }
        })
        .collect();
    let verdict = f.verdict(max);
    Ok(ExampleRun {
        name: spec.name,
        b,
        max_degree: max,
        base_dims: (0..=max).map(|n| t.base().dim(n)).collect(),
        total_dims: (0..=max).map(|n| t.total().dim(n)).collect(),
        connection: summary,
        complex_dims: fc.dims()[..=max].to_vec(),
        filtration_dims: fc.filtration_dims()[..=max].iter().map(|r| r[..=max].to_vec()).collect(),
        filtration_axioms_hold: fc.axiom_checks(max).iter().all(|c| c.holds),
        m_dims,
        n_dims: (0..=max).map(|q| f.n_dim(q)).collect(),
        fibre_cohomology_dims: fibre,
        is_fibration: verdict.holds,
        g_cells: verdict.cells,
        induced,
        sheaf_cohomology: sheaf,
        pages,
        stable_page,
        converged: ss.converged[..=max].to_vec(),
        direct: ss.direct[..=max].to_vec(),
        ksgns: ksgns_summary(&connection, &ip, &e0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_run() {
        let r = run_example(&ExampleSpec::new(ExampleName::S3OverZ2)).unwrap();
        assert_eq!(r.converged, vec![1, 2, 1, 0]);
        assert_eq!(r.stable_page, 2);
        assert!(r.is_fibration && r.filtration_axioms_hold);
    }

    #[test]
    fn matrix_run() {
        let r = run_example(&ExampleSpec::new(ExampleName::M3OverM2)).unwrap();
        assert_eq!(r.fibre_cohomology_dims[..2], [4, 4]);
        for ic in &r.induced {
            assert_eq!((ic.kernel_dim, ic.image_dim), (1, 3));
            assert!(ic.well_defined && ic.leibniz && ic.flat);
        }
        assert_eq!(r.converged, r.direct);
        assert_eq!(r.converged, vec![1, 1, 0, 0]);
        assert_eq!(r.stable_page, 2);
        assert!(!r.ksgns.is_algebra_map && r.ksgns.completely_positive && r.ksgns.cochain_map);
        assert_eq!(r.ksgns.phi_unit, "4*E11 + 4*E22");
    }
}
