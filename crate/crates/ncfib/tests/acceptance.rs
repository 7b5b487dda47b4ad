//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;

use ncfib_core::connection::Connection;
use ncfib_core::dga::{Calculus, DgaError};
use ncfib_core::examples::{
    m2_calculus, m3_calculus, m3_over_m2, matrix_sigma, run_example, s3_calculus, s3_over_z2,
    solve_s3_cocycle_family, CellDim, ExampleError, ExampleName, ExampleRun, ExampleSpec, MatrixSigma,
};
use ncfib_core::fibration::{is_fibration, Fibration};
use ncfib_core::ksgns::{
    cochain_map_check, completely_positive, is_algebra_map, ksgns_map, metric_preservation_check, InnerProduct,
};
use ncfib_core::linalg::{unit_vec, Matrix};
use ncfib_core::poly::is_zero_row;
use ncfib_core::spectral::random_filtered_complex;
use ncfib_core::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Named sub-checks of one criterion.
#[derive(Default)]
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, actual: T, expected: T) {
        let ok = actual == expected;
        let label = if ok { name.to_string() } else { format!("{name}: got {actual:?}, expected {expected:?}") };
        self.add(label, ok);
    }
}

fn runs() -> (ExampleRun, ExampleRun) {
    let g = run_example(&ExampleSpec::new(ExampleName::S3OverZ2)).expect("group example");
    let m = run_example(&ExampleSpec::new(ExampleName::M3OverM2)).expect("matrix example");
    (g, m)
}

fn cell(cells: &[CellDim], p: usize, q: usize) -> Option<usize> {
    cells.iter().find(|c| c.p == p && c.q == q).map(|c| c.dim)
}

fn criterion_1(g: &ExampleRun) -> Checks {
    let mut c = Checks::default();
    c.eq("converged dims", &g.converged[..3], &[1, 2, 1][..]);
    c.eq("stable page", g.stable_page, 2);
    for p in 0..2 {
        for q in 0..2 {
            c.eq(&format!("H^{p}(B, H^{q}(N))"), cell(&g.sheaf_cohomology, p, q), Some(1));
        }
    }
    c
}

fn criterion_2(m: &ExampleRun) -> Checks {
    let mut c = Checks::default();
    c.eq("converged dims", &m.converged[..3], &[1, 6, 5][..]);
    c.eq("dim H^0(N), H^1(N)", &m.fibre_cohomology_dims[..2], &[4, 4][..]);
    for q in 0..2 {
        let ic = m.induced.iter().find(|i| i.q == q);
        c.eq(&format!("ker, im of nabla_{q}"), ic.map(|i| (i.kernel_dim, i.image_dim)), Some((1, 3)));
        c.eq(&format!("H^1(B, H^{q}(N))"), cell(&m.sheaf_cohomology, 1, q), Some(5));
    }
    c
}

fn criterion_3(g: &ExampleRun, m: &ExampleRun) -> Checks {
    let mut c = Checks::default();
    c.eq("group: E_inf diagonals = direct", &g.converged, &g.direct);
    c.eq("matrix: E_inf diagonals = direct", &m.converged, &m.direct);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = 0;
    let total = 150;
    for _ in 0..total {
        let len = rng.random_range(1..=4);
        let dims: Vec<usize> = (0..len).map(|_| rng.random_range(0..=8)).collect();
        let fc = random_filtered_complex(&dims, &mut |k| rng.random_range(0..k));
        let ok = fc.run().map(|ss| ss.converged == ss.direct && ss.converged == fc.direct_cohomology_dims());
        if ok != Ok(true) {
            bad += 1;
        }
    }
    c.eq(&format!("{total} random filtered complexes disagreeing"), bad, 0);
    c
}

/// `nabla' = nabla + alpha` with `alpha(e) = e (x) s` for the central generator `s`
/// of the `M_3` calculus; a right connection with nonzero curvature.
fn perturbed(conn: &Connection) -> Connection {
    let t = conn.tensors();
    let s = t.total().monomial_form(1, 0);
    let mut nabla: Matrix = conn.nabla().clone();
    for i in 0..t.e_dim() {
        let extra = t.embed(1, &unit_vec(t.e_dim(), i), &s);
        let col: Vec<Scalar> = nabla.column(i).iter().zip(&extra).map(|(a, b)| a + b).collect();
        nabla.set_column(i, &col);
    }
    conn.with_nabla(nabla).expect("shapes unchanged")
}

fn lemma_suite(c: &mut Checks, label: &str, conn: &Connection) {
    for n in 0..=2 {
        c.eq(&format!("{label}: curvature identity n={n}"), conn.lemma_check(n).ok(), Some(true));
        c.eq(&format!("{label}: sigma identity n={n}"), conn.nabla_sigma_check(n).ok(), Some(true));
    }
    c.add(format!("{label}: extendable to degree 3"), conn.extendability_check(3).is_ok());
}

fn criterion_4() -> Checks {
    let mut c = Checks::default();
    let g = s3_over_z2(&Scalar::one(), 4).expect("group connection");
    let m = m3_over_m2(4).expect("matrix connection");
    lemma_suite(&mut c, "group", &g.connection);
    lemma_suite(&mut c, "matrix", &m.connection);
    let p = perturbed(&m.connection);
    c.eq("perturbation is flat", p.is_flat().ok(), Some(false));
    for n in 0..=2 {
        c.eq(&format!("perturbation: curvature identity n={n}"), p.lemma_check(n).ok(), Some(true));
    }
    c
}

fn criterion_5() -> Checks {
    let mut c = Checks::default();
    let g = s3_over_z2(&Scalar::one(), 4).expect("group connection");
    let m = m3_over_m2(4).expect("matrix connection");
    for (label, conn) in [("group", &g.connection), ("matrix", &m.connection)] {
        let f = Fibration::new(conn, 4).expect("fibration complex");
        let checks = f.complex().axiom_checks(3);
        let axioms: std::collections::BTreeSet<&str> = checks.iter().map(|a| a.axiom).collect();
        c.eq(&format!("{label}: axioms covered"), axioms.len(), 4);
        for a in checks.iter().filter(|a| !a.holds) {
            c.add(format!("{label}: {} at m={}, n={}", a.axiom, a.m, a.n), false);
        }
        c.add(format!("{label}: all axioms at m, n <= 3"), checks.iter().all(|a| a.holds));
    }
    c
}

fn criterion_6(g: &ExampleRun, m: &ExampleRun) -> Checks {
    let mut c = Checks::default();
    for (label, r) in [("group", g), ("matrix", m)] {
        c.add(format!("{label}: g iso on every in-range cell"), r.g_cells.iter().all(|x| x.is_isomorphism));
        c.eq(&format!("{label}: cells examined"), r.g_cells.len(), 10);
        c.add(format!("{label}: fibration verdict"), r.is_fibration);
    }
    let data = m3_over_m2(4).expect("matrix connection");
    let t = data.connection.tensors().clone();
    let mutant = data.connection.with_sigma(matrix_sigma(&t, MatrixSigma::Collapsed)).expect("shapes");
    match is_fibration(&mutant, 3) {
        Ok(v) => {
            c.add("collapsed sigma rejected", !v.holds);
            c.eq("collapsed sigma witness", v.witness().map(|w| (w.p, w.q)), Some((1, 0)));
        }
        Err(e) => c.add(format!("collapsed sigma: {e}"), false),
    }
    c
}

fn transpose_map(n: usize) -> Matrix {
    let mut t = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            t[(j * n + i, i * n + j)] = Scalar::one();
        }
    }
    t
}

fn criterion_7() -> Checks {
    let mut c = Checks::default();

    let g = s3_over_z2(&Scalar::one(), 4).expect("group connection");
    let e = g.connection.tensors().bimodule().clone();
    let ip = InnerProduct::regular(e.clone()).expect("inner product");
    let (a, b) = (e.right_algebra().clone(), e.left_algebra().clone());
    c.eq("group: metric preserved", metric_preservation_check(&g.connection, &ip).ok(), Some(None));
    let phi = ksgns_map(&ip, a.unit());
    let inclusion = g.embedding.iter().enumerate().all(|(k, &img)| phi.column(k) == a.basis(img));
    c.add("group: phi is the inclusion", inclusion);
    c.add("group: phi is an algebra map", is_algebra_map(&phi, &b, &a).is_ok());
    c.eq("group: phi CP", completely_positive(&phi, &b, &a).ok().map(|v| v.is_psd()), Some(true));

    let m = m3_over_m2(4).expect("matrix connection");
    let e = m.connection.tensors().bimodule().clone();
    let ip = InnerProduct::rectangular(e.clone()).expect("inner product");
    let (a, b) = (e.right_algebra().clone(), e.left_algebra().clone());
    c.eq("matrix: metric preserved", metric_preservation_check(&m.connection, &ip).ok(), Some(None));
    let phi = ksgns_map(&ip, &m.e0);
    let phi_unit = phi.mul_vec(b.unit());
    let four_i3: Vec<Scalar> = a.unit().iter().map(|x| x * &Scalar::from_int(4)).collect();
    let label = format!("matrix: phi(I2) = 4 I3 (got {})", a.format(&phi_unit));
    c.add(label, phi_unit == four_i3);
    c.add("matrix: phi is not an algebra map", is_algebra_map(&phi, &b, &a).is_err());
    c.eq("matrix: phi CP", completely_positive(&phi, &b, &a).ok().map(|v| v.is_psd()), Some(true));
    c.eq("matrix: cochain map", cochain_map_check(&m.connection, &ip, &m.e0, 3).ok(), Some(None));

    let m2 = b.clone();
    let t = transpose_map(2);
    c.eq("transpose on M2 CP", completely_positive(&t, &m2, &m2).ok().map(|v| v.is_psd()), Some(false));
    c
}

fn criterion_8() -> Checks {
    let mut c = Checks::default();
    match solve_s3_cocycle_family() {
        Ok(f) => {
            c.add("u^2 = e residual vanishes", is_zero_row(&f.u_residual));
            c.add("v^2 = e residual vanishes", is_zero_row(&f.v_residual));
            c.add("braid residual vanishes", is_zero_row(&f.braid_residual));
            c.add("wrong sign gives a nonzero residual", !is_zero_row(&f.v_residual_wrong_sign));
            c.eq("degenerate b", f.degenerate_b, vec![Scalar::from_frac(1, 2)]);
        }
        Err(e) => c.add(format!("derivation: {e}"), false),
    }
    let half = Scalar::from_frac(1, 2);
    let rejected = matches!(s3_calculus(&half, 3), Err(ExampleError::Dga(DgaError::Disconnected(_))));
    c.add("b = 1/2 calculus rejected", rejected);
    let mut spec = ExampleSpec::new(ExampleName::S3OverZ2);
    spec.b = half;
    c.add("b = 1/2 example rejected", run_example(&spec).is_err());
    c
}

fn calculus_suite(c: &mut Checks, label: &str, calc: &Calculus, rng: &mut ChaCha8Rng) {
    for n in 0..3 {
        let dd = calc.d_matrix(n + 1).try_mul(&calc.d_matrix(n)).map(|m| m.is_zero());
        c.eq(&format!("{label}: d^2 = 0 on Omega^{n}"), dd.ok(), Some(true));
    }
    c.eq(&format!("{label}: graded Leibniz, total degree <= 3"), calc.check_leibniz(4).ok(), Some(()));
    c.eq(&format!("{label}: confluence to degree 3"), calc.rewrite().check_confluence(3).ok(), Some(()));
    let mut assoc = true;
    for _ in 0..200 {
        let (p, q) = (rng.random_range(0..=2), rng.random_range(0..=2));
        let r = rng.random_range(0..=(4 - p - q).min(2));
        let (dp, dq, dr) = (calc.dim(p), calc.dim(q), calc.dim(r));
        if dp * dq * dr == 0 {
            continue;
        }
        let x = unit_vec(dp, rng.random_range(0..dp));
        let y = unit_vec(dq, rng.random_range(0..dq));
        let z = unit_vec(dr, rng.random_range(0..dr));
        let left = calc.wedge(p + q, &calc.wedge(p, &x, q, &y), r, &z);
        let right = calc.wedge(p, &x, q + r, &calc.wedge(q, &y, r, &z));
        if left != right {
            assoc = false;
        }
    }
    c.add(format!("{label}: wedge associativity, total degree <= 4"), assoc);
}

fn criterion_9() -> Checks {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s3 = s3_calculus(&Scalar::one(), 4).expect("S3 calculus");
    let m3 = m3_calculus(4).expect("M3 calculus");
    let m2 = m2_calculus(4).expect("M2 calculus");
    calculus_suite(&mut c, "S3", &s3, &mut rng);
    calculus_suite(&mut c, "M3", &m3, &mut rng);
    calculus_suite(&mut c, "M2", &m2, &mut rng);
    c.eq("S3 connected", s3.kernel_of_d0_dim(), 1);
    c.eq("M3 kernel of d0", m3.kernel_of_d0_dim(), 2);
    c
}

fn main() -> ExitCode {
    let (g, m) = runs();
    let criteria: Vec<(&str, Checks)> = vec![
        ("group example end to end", criterion_1(&g)),
        ("matrix example end to end", criterion_2(&m)),
        ("spectral sequence vs direct cohomology", criterion_3(&g, &m)),
        ("connection identities", criterion_4()),
        ("filtration axioms", criterion_5()),
        ("fibration predicate", criterion_6(&g, &m)),
        ("KSGNS maps", criterion_7()),
        ("cocycle derivation", criterion_8()),
        ("calculus properties", criterion_9()),
    ];
    let mut failed = 0;
    for (i, (name, checks)) in criteria.iter().enumerate() {
        let ok = checks.0.iter().all(|(_, ok)| *ok);
        println!("criterion {} {}: {name}", i + 1, if ok { "PASS" } else { "FAIL" });
        for (what, ok) in &checks.0 {
            if !ok {
                println!("    failed: {what}");
            }
        }
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
