//! Serializable report records. Text output is rendered from these, never from
//! the in-memory computation directly.

use ncfib_core::examples::{CellDim, ExampleRun};
use ncfib_core::fibration::GCell;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

impl From<&CellDim> for Cell {
    fn from(c: &CellDim) -> Self {
        Cell { p: c.p, q: c.q, dim: c.dim }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionReport {
    pub valid: bool,
    pub flat: bool,
    pub extendable: bool,
    pub kernel_dim: usize,
    pub lemma: Vec<bool>,
    pub nabla_sigma: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GCellReport {
    pub p: usize,
    pub q: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub well_defined: bool,
    pub is_isomorphism: bool,
}

impl From<&GCell> for GCellReport {
    fn from(g: &GCell) -> Self {
        GCellReport {
            p: g.p,
            q: g.q,
            source_dim: g.source_dim,
            target_dim: g.target_dim,
            rank: g.rank,
            well_defined: g.well_defined,
            is_isomorphism: g.is_isomorphism,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InducedReport {
    pub q: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub well_defined: bool,
    pub leibniz: bool,
    pub flat: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageReport {
    pub r: usize,
    pub cells: Vec<Cell>,
    /// Rank of `d_r` leaving each cell.
    pub ranks: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsgnsReport {
    pub inner_product_valid: bool,
    pub metric_preserved: bool,
    pub phi_unit: String,
    pub is_algebra_map: bool,
    pub algebra_map_witness: Option<String>,
    pub completely_positive: bool,
    pub cochain_map: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleReport {
    pub schema_version: u32,
    pub example: String,
    pub b: Option<String>,
    pub max_degree: usize,
    pub base_dims: Vec<usize>,
    pub total_dims: Vec<usize>,
    pub connection: ConnectionReport,
    pub complex_dims: Vec<usize>,
    /// `filtration_dims[n][m] = dim F^m C^n`.
    pub filtration_dims: Vec<Vec<usize>>,
    pub filtration_axioms_hold: bool,
    pub m_dims: Vec<Cell>,
    pub n_dims: Vec<usize>,
    pub fibre_cohomology_dims: Vec<usize>,
    pub is_fibration: bool,
    pub g_cells: Vec<GCellReport>,
    pub induced: Vec<InducedReport>,
    pub sheaf_cohomology: Vec<Cell>,
    pub pages: Vec<PageReport>,
    pub stable_page: usize,
    pub converged: Vec<usize>,
    pub direct: Vec<usize>,
    pub ksgns: KsgnsReport,
}

impl From<&ExampleRun> for ExampleReport {
    fn from(r: &ExampleRun) -> Self {
        let cells = |v: &[CellDim]| v.iter().map(Cell::from).collect::<Vec<_>>();
        let c = &r.connection;
        let k = &r.ksgns;
        ExampleReport {
            schema_version: SCHEMA_VERSION,
            example: r.name.as_str().to_string(),
            b: r.b.as_ref().map(|b| b.to_string()),
            max_degree: r.max_degree,
            base_dims: r.base_dims.clone(),
            total_dims: r.total_dims.clone(),
            connection: ConnectionReport {
                valid: c.valid,
                flat: c.flat,
                extendable: c.extendable,
                kernel_dim: c.kernel_dim,
                lemma: c.lemma.clone(),
                nabla_sigma: c.nabla_sigma.clone(),
            },
            complex_dims: r.complex_dims.clone(),
            filtration_dims: r.filtration_dims.clone(),
            filtration_axioms_hold: r.filtration_axioms_hold,
            m_dims: cells(&r.m_dims),
            n_dims: r.n_dims.clone(),
            fibre_cohomology_dims: r.fibre_cohomology_dims.clone(),
            is_fibration: r.is_fibration,
            g_cells: r.g_cells.iter().map(GCellReport::from).collect(),
            induced: r
                .induced
                .iter()
                .map(|i| InducedReport {
                    q: i.q,
                    kernel_dim: i.kernel_dim,
                    image_dim: i.image_dim,
                    well_defined: i.well_defined,
                    leibniz: i.leibniz,
                    flat: i.flat,
                })
                .collect(),
            sheaf_cohomology: cells(&r.sheaf_cohomology),
            pages: r
                .pages
                .iter()
                .map(|p| PageReport { r: p.r, cells: cells(&p.cells), ranks: cells(&p.ranks) })
                .collect(),
            stable_page: r.stable_page,
            converged: r.converged.clone(),
            direct: r.direct.clone(),
            ksgns: KsgnsReport {
                inner_product_valid: k.inner_product_valid,
                metric_preserved: k.metric_preserved,
                phi_unit: k.phi_unit.clone(),
                is_algebra_map: k.is_algebra_map,
                algebra_map_witness: k.algebra_map_witness.clone(),
                completely_positive: k.completely_positive,
                cochain_map: k.cochain_map,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckItem {
    pub name: String,
    pub holds: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub schema_version: u32,
    pub kind: String,
    pub max_degree: usize,
    pub generators: Vec<String>,
    pub dims: Vec<usize>,
    pub kernel_d0_dim: usize,
    pub connected: bool,
    pub checks: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}
