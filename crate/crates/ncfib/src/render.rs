//! Plain-text rendering of reports.

use std::fmt::Write;

use crate::report::{Cell, CheckReport, ExampleReport};

fn list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Lattice of cell values with `q` increasing upwards and `p` to the right.
pub fn lattice(cells: &[Cell], max: usize) -> String {
    let get = |p: usize, q: usize| cells.iter().find(|c| c.p == p && c.q == q).map(|c| c.dim);
    let width = cells.iter().map(|c| c.dim.to_string().len()).max().unwrap_or(1).max(1);
    let mut out = String::new();
    for q in (0..=max).rev() {
        let _ = write!(out, "  q={q} |");
        for p in 0..=max {
            match get(p, q) {
                Some(d) => {
                    let _ = write!(out, " {d:>width$}");
                }
                None => {
                    let _ = write!(out, " {:>width$}", ".");
                }
            }
        }
        out.push('\n');
    }
    let _ = write!(out, "      +");
    for _ in 0..=max {
        let _ = write!(out, "{}", "-".repeat(width + 1));
    }
    out.push('\n');
    let _ = write!(out, "       ");
    for p in 0..=max {
        let _ = write!(out, " {:>width$}", p);
    }
    out.push_str("  p\n");
    out
}

pub fn example_text(r: &ExampleReport) -> String {
    let mut o = String::new();
    let max = r.max_degree;
    let _ = writeln!(o, "example: {}", r.example);
    if let Some(b) = &r.b {
        let _ = writeln!(o, "b: {b}");
    }
    let _ = writeln!(o, "max degree: {max}");
    let _ = writeln!(o, "schema version: {}", r.schema_version);
    o.push('\n');
    let _ = writeln!(o, "base form dims:  {}", list(&r.base_dims));
    let _ = writeln!(o, "total form dims: {}", list(&r.total_dims));
    let _ = writeln!(o, "dim C^n:         {}", list(&r.complex_dims));
    o.push('\n');

    let c = &r.connection;
    let _ = writeln!(o, "connection");
    let _ = writeln!(o, "  bimodule connection: {}", yes(c.valid));
    let _ = writeln!(o, "  flat: {}", yes(c.flat));
    let _ = writeln!(o, "  extendable: {}", yes(c.extendable));
    let _ = writeln!(o, "  dim ker nabla: {}", c.kernel_dim);
    let _ = writeln!(o, "  curvature identity by degree: {:?}", c.lemma);
    let _ = writeln!(o, "  sigma identity by degree: {:?}", c.nabla_sigma);
    o.push('\n');

    let _ = writeln!(o, "filtration dims F^m C^n (rows n, columns m)");
    for (n, row) in r.filtration_dims.iter().enumerate() {
        let _ = writeln!(o, "  n={n}: {}", list(row));
    }
    let _ = writeln!(o, "  axioms hold: {}", yes(r.filtration_axioms_hold));
    o.push('\n');

    let _ = writeln!(o, "dim M_(p,q)");
    o.push_str(&lattice(&r.m_dims, max));
    let _ = writeln!(o, "dim N_q:       {}", list(&r.n_dims));
    let _ = writeln!(o, "dim H^q(N):    {}", list(&r.fibre_cohomology_dims));
    o.push('\n');

    let _ = writeln!(o, "fibration: {}", yes(r.is_fibration));
    for g in &r.g_cells {
        let _ = writeln!(
            o,
            "  g at ({}, {}): {} -> {}, rank {}, iso {}",
            g.p,
            g.q,
            g.source_dim,
            g.target_dim,
            g.rank,
            yes(g.is_isomorphism)
        );
    }
    o.push('\n');

    let _ = writeln!(o, "induced connections on H^q(N)");
    for i in &r.induced {
        let _ = writeln!(
            o,
            "  q={}: ker {}, im {}, well defined {}, leibniz {}, flat {}",
            i.q,
            i.kernel_dim,
            i.image_dim,
            yes(i.well_defined),
            yes(i.leibniz),
            yes(i.flat)
        );
    }
    let _ = writeln!(o, "dim H^p(B, H^q(N))");
    o.push_str(&lattice(&r.sheaf_cohomology, max));
    o.push('\n');

    for page in &r.pages {
        let _ = writeln!(o, "page E_{}", page.r);
        o.push_str(&lattice(&page.cells, max));
        let nonzero: Vec<String> = page
            .ranks
            .iter()
            .filter(|c| c.dim > 0)
            .map(|c| format!("({},{}):{}", c.p, c.q, c.dim))
            .collect();
        if !nonzero.is_empty() {
            let _ = writeln!(o, "  rank d_{}: {}", page.r, nonzero.join(" "));
        }
        o.push('\n');
    }
    let _ = writeln!(o, "stable page: {}", r.stable_page);
    let _ = writeln!(o, "converged: {}", list(&r.converged));
    let _ = writeln!(o, "direct:    {}", list(&r.direct));
    o.push('\n');

    let k = &r.ksgns;
    let _ = writeln!(o, "ksgns");
    let _ = writeln!(o, "  inner product valid: {}", yes(k.inner_product_valid));
    let _ = writeln!(o, "  metric preserved: {}", yes(k.metric_preserved));
    let _ = writeln!(o, "  phi(1) = {}", k.phi_unit);
    let _ = writeln!(o, "  algebra map: {}", yes(k.is_algebra_map));
    if let Some(w) = &k.algebra_map_witness {
        let _ = writeln!(o, "    witness: {w}");
    }
    let _ = writeln!(o, "  completely positive: {}", yes(k.completely_positive));
    let _ = writeln!(o, "  cochain map: {}", yes(k.cochain_map));
    o
}

pub fn check_text(r: &CheckReport) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "calculus: {}", r.kind);
    let _ = writeln!(o, "generators: {}", r.generators.join(", "));
    let _ = writeln!(o, "max degree: {}", r.max_degree);
    let _ = writeln!(o, "dim Omega^n: {}", list(&r.dims));
    let _ = writeln!(o, "dim ker d0: {} (connected: {})", r.kernel_d0_dim, yes(r.connected));
    for c in &r.checks {
        let status = if c.holds { "ok" } else { "FAILED" };
        match &c.detail {
            Some(d) => {
                let _ = writeln!(o, "{}: {status} ({d})", c.name);
            }
            None => {
                let _ = writeln!(o, "{}: {status}", c.name);
            }
        }
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_layout() {
        let cells = vec![
            Cell { p: 0, q: 0, dim: 1 },
            Cell { p: 1, q: 0, dim: 1 },
            Cell { p: 0, q: 1, dim: 12 },
        ];
        let t = lattice(&cells, 1);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "  q=1 | 12  .");
        assert_eq!(lines[1], "  q=0 |  1  1");
        assert!(lines[3].ends_with("0  1  p"));
    }
}
