//! One test per acceptance criterion. Each prints a PASS/FAIL line with the
//! measured quantities before asserting.

mod common;

use std::time::{Duration, Instant};

use common::*;
use nepritz::bounds::TheoremId;
use nepritz::experiments::{
    builtin_suite, jordan_signature_case, random_nep, run_example1, run_example2, run_instance, run_jordan_sweep,
    run_sweep, verify_all, PipelineOptions, ProblemKind, SelectionMode,
};
use nepritz::extraction::{refined_vector, ritz_vector, sin_angle};
use nepritz::linalg::{fix_phase, norm, orthonormalize, svd, sub_vec, unit_vector, ComplexMatrix, C64, ZERO};
use nepritz::model::{fixtures, MatrixFunction};
use nepritz::projection::{deviation, project, Subspace};
use nepritz::random::{gaussian_matrix, seeded, unit_vector as random_unit};

fn report(criterion: u32, ok: bool, detail: &str) {
    println!("criterion {criterion}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_1_exact_subspace_demo() {
    let start = Instant::now();
    let run = run_example1(SelectionMode::Oracle, false, &PipelineOptions::default()).unwrap();
    let elapsed = start.elapsed();

    // Direct recomputation on the fixture, independent of the pipeline report.
    let (t, r) = fixtures::example_rep();
    let s = Subspace::new(fixtures::example_basis()).unwrap();
    let b0 = project(&t, &s).unwrap().eval(ZERO, 0).unwrap();
    let zero_sv = svd(&b0).unwrap().singular_values.iter().filter(|v| **v <= 1e-12).count();
    let ritz = ritz_vector(&t, ZERO, &s).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let balanced = norm(&t.eval(ZERO, 0).unwrap().mul_vec(&[C64::new(h, 0.0), ZERO, C64::new(h, 0.0)]));
    let refined = refined_vector(&t, ZERO, &s).unwrap();
    let mut x_hat = refined.x_hat.clone();
    fix_phase(&mut x_hat);
    let refined_err = norm(&sub_vec(&x_hat, &r.x_star));

    let ok = run.passed()
        && run.mu.norm() <= 1e-10
        && zero_sv == 2
        && ritz.nonunique_flag
        && (balanced - h).abs() <= 1e-14
        && refined.sigma_hat_1 <= 1e-12
        && refined_err <= 1e-10
        && elapsed < Duration::from_secs(1);
    report(
        1,
        ok,
        &format!(
            "|mu| {:.1e}, zero singular values of B(0) {zero_sv}, balanced residual {balanced:.6}, \
             refined error {refined_err:.1e}, {} ms",
            run.mu.norm(),
            elapsed.as_millis()
        ),
    );
    for c in run.checks.iter().filter(|c| !c.passed) {
        println!("  failed check {}: {}", c.name, c.detail);
    }
    assert!(ok);
}

#[test]
fn criterion_2_perturbed_subspace_medians() {
    let sigma = 1e-4;
    let seeds: Vec<u64> = (42..62).collect();
    let start = Instant::now();
    let run = run_example2(sigma, &seeds, &PipelineOptions::default()).unwrap();
    let elapsed = start.elapsed();

    // Every perturbed basis must stay within a few sigma of the exact one.
    let worst_dev = run.records.iter().map(|rec| rec.epsilon).fold(0.0, f64::max);

    let ok = run.passed()
        && run.records.len() == 20
        && worst_dev < 10.0 * sigma
        && run.median_sin_refined >= sigma / 10.0
        && run.median_sin_refined <= 10.0 * sigma
        && run.median_sin_ritz >= 1e-2
        && run.median_ratio <= 100.0 * sigma
        && run.max_abs_mu <= 10.0 * sigma
        && elapsed < Duration::from_secs(10);
    report(
        2,
        ok,
        &format!(
            "max deviation {worst_dev:.2e}, median sin Ritz {:.3}, median sin refined {:.2e}, median residual ratio {:.2e}, max |mu| {:.2e}, {} ms",
            run.median_sin_ritz,
            run.median_sin_refined,
            run.median_ratio,
            run.max_abs_mu,
            elapsed.as_millis()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_3_bound_suite() {
    let start = Instant::now();
    let suite = builtin_suite(42).unwrap();
    let outcome = verify_all(&suite, &PipelineOptions::default());
    let elapsed = start.elapsed();

    let identities: Vec<_> = outcome
        .instances
        .iter()
        .flat_map(|i| i.reports.iter())
        .filter(|r| r.theorem_id == TheoremId::RitzRefinedAngleIdentity)
        .collect();
    let identity_worst = identities.iter().map(|r| (r.lhs - r.rhs).abs()).fold(0.0, f64::max);

    let ok = suite.len() >= 30
        && outcome.passed()
        && !identities.is_empty()
        && identity_worst <= 1e-8
        && elapsed < Duration::from_secs(60);
    report(
        3,
        ok,
        &format!(
            "{} instances, {} reports, {} inapplicable, {} failures, {} errors, identity gap {identity_worst:.1e}, {} ms",
            suite.len(),
            outcome.report_count(),
            outcome.inapplicable_count(),
            outcome.failures.len(),
            outcome.errors.len(),
            elapsed.as_millis()
        ),
    );
    for (id, theorem) in &outcome.failures {
        println!("  failure {id}: {}", theorem.as_str());
    }
    for (id, msg) in &outcome.errors {
        println!("  error {id}: {msg}");
    }
    assert!(ok);
}

#[test]
fn criterion_4_rates_and_signature() {
    let options = PipelineOptions::default();
    let (t, r) = random_nep(ProblemKind::Polynomial, 8, 7).unwrap();
    let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];
    let simple = run_sweep(&t, &r, &eps, 5, Some(3), 11, &options).unwrap();
    let simple_slope = simple.distance_slope.unwrap_or(f64::NAN);
    let refined_slope = simple.refined_slope.unwrap_or(f64::NAN);

    let tilts = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let jordan = run_jordan_sweep(&tilts, 5, 13, &options).unwrap();
    let jordan_slope = jordan.distance_slope.unwrap_or(f64::NAN);

    // Independent check of the measured slopes from the raw records.
    let pairs: Vec<_> = jordan.records.iter().map(|rec| (rec.measured_epsilon, rec.distance)).collect();
    let refit = nepritz::experiments::log_log_slope(&pairs).unwrap_or(f64::NAN);

    let mut signatures = Vec::new();
    for block in 1..=3 {
        for seed in 0..3 {
            let case = jordan_signature_case(block, 2e-3, seed, 1e-2).unwrap();
            signatures.push((block, case.detected_m_mu, case.jordan_order));
        }
    }
    let signatures_ok = signatures.iter().all(|(k, d, j)| d == k && j == k);

    let ok = simple.passed()
        && jordan.passed()
        && (simple_slope - 1.0).abs() <= 0.2
        && (refined_slope - 1.0).abs() <= 0.2
        && (jordan_slope - 0.5).abs() <= 0.2
        && (refit - jordan_slope).abs() <= 1e-9
        && signatures_ok;
    report(
        4,
        ok,
        &format!(
            "simple slope {simple_slope:.3}, refined slope {refined_slope:.3}, Jordan slope {jordan_slope:.3}, \
             signatures (block, detected, staircase) {signatures:?}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_5_kernel_properties() {
    let mut rng = seeded(5005);
    let mut worst_svd: f64 = 0.0;
    for k in 0..100 {
        let rows = 1 + k % 9;
        let cols = 1 + (k * 5) % 9;
        let a = gaussian_matrix(&mut rng, rows, cols, 1.0);
        let dec = svd(&a).unwrap();
        let scale = a.norm2().max(1.0);
        let u = &dec.left_vectors;
        let v = &dec.right_vectors;
        let e = (dec.reconstruct().sub(&a).max_abs() / scale)
            .max(u.adjoint().matmul(u).distance_from_identity())
            .max(v.adjoint().matmul(v).distance_from_identity());
        let oracle = oracle_singular_values(&a);
        let sv_gap = dec
            .singular_values
            .iter()
            .zip(&oracle)
            .map(|(s, o)| (s - o).abs() / scale)
            .fold(0.0, f64::max);
        worst_svd = worst_svd.max(e).max(sv_gap);
    }

    let mut worst_root: f64 = 0.0;
    for k in 0..24 {
        let m = 1 + k % 4;
        let degree = 1 + (k / 4) % 3;
        let coeffs: Vec<ComplexMatrix> = (0..=degree).map(|_| gaussian_matrix(&mut rng, m, m, 1.0)).collect();
        let b = MatrixFunction::polynomial(&coeffs).unwrap();
        let oracle: Vec<C64> = scalar_roots(&det_polynomial(&coeffs)).into_iter().filter(|z| z.norm() < 50.0).collect();
        let ours: Vec<C64> = nepritz::solver::solve_projected(&b, ZERO, 60.0)
            .unwrap()
            .values()
            .into_iter()
            .filter(|z| z.norm() < 50.0)
            .collect();
        let scale = oracle.iter().map(|z| z.norm()).fold(1.0, f64::max);
        worst_root = worst_root.max(match_distance(&ours, &oracle) / scale);
    }

    let mut worst_pyth: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 9;
        let m = 1 + k % (n - 1);
        let s = Subspace::new(orthonormalize(&gaussian_matrix(&mut rng, n, m, 1.0)).unwrap()).unwrap();
        let x = random_unit(&mut rng, n);
        let eps = deviation(&s, &x).unwrap();
        let c = norm(&s.coordinates(&x));
        worst_pyth = worst_pyth.max((eps * eps + c * c - 1.0).abs());
    }

    let ok = worst_svd <= 1e-12 && worst_root <= 1e-8 && worst_pyth <= 1e-12;
    report(
        5,
        ok,
        &format!("SVD error {worst_svd:.1e}, root error {worst_root:.1e}, Pythagoras error {worst_pyth:.1e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_6_refined_minimality() {
    let options = PipelineOptions::default();
    let suite = builtin_suite(42).unwrap();
    let mut rng = seeded(6006);
    let mut violations = 0usize;
    let mut not_below_ritz = 0usize;
    let mut checked = 0usize;
    for inst in &suite {
        let run = run_instance(&inst.id, &inst.t, &inst.subspace, &inst.reference, &options).unwrap();
        let a = &run.analysis;
        let tw = a.t_mu.matmul(inst.subspace.basis());
        let sigma_hat_1 = a.refined.sigma_hat_1;
        for _ in 0..200 {
            let v = random_unit(&mut rng, inst.subspace.dim());
            if sigma_hat_1 > norm(&tw.mul_vec(&v)) + 1e-12 {
                violations += 1;
            }
            checked += 1;
        }
        if sigma_hat_1 > a.ritz.residual_norm + 1e-12 {
            not_below_ritz += 1;
        }
    }
    // The refined vector itself attains the minimum.
    let (t, _) = fixtures::example_rep();
    let s = Subspace::new(fixtures::example_basis()).unwrap();
    let refined = refined_vector(&t, ZERO, &s).unwrap();
    let attained = (norm(&t.eval(ZERO, 0).unwrap().mul_vec(&refined.x_hat)) - refined.sigma_hat_1).abs();
    let ok = violations == 0 && not_below_ritz == 0 && attained <= 1e-14 && sin_angle(&refined.x_hat, &unit_vector(3, 2)) < 1e-12;
    report(
        6,
        ok,
        &format!(
            "{} instances, {checked} random directions, {violations} below the refined residual, \
             {not_below_ritz} Ritz residuals below it",
            suite.len()
        ),
    );
    assert!(ok);
}
