//! Acceptance suite. One test per criterion; each prints a single
//! pass/fail line (run with `--nocapture` to see them) and pins the
//! tolerance stated for it.

use std::time::Instant;

use gramian_kit::construction::build;
use gramian_kit::isometry::classify;
use gramian_kit::lab::{
    remark_counterexample, run_suite, sample_partial_isometry, split_seed, SuiteConfig,
};
use gramian_kit::matrix::{inv_sqrt_series, ComplexMatrix, Tolerances, C64};
use gramian_kit::space::{boundedness_certificate, GramianOperator, SpaceShape};
use gramian_kit::GramianError;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn report(number: u32, title: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {number} ({title}): {verdict} — {detail}");
    assert!(ok, "acceptance criterion {number} failed: {detail}");
}

fn standard_shapes() -> Vec<SpaceShape> {
    SuiteConfig::standard(1, 0).shapes
}

fn ginibre_operator(shape: SpaceShape, seed: u64) -> GramianOperator {
    let flat = shape.flat_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<C64> = (0..flat * flat)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    GramianOperator::endo(
        shape,
        ComplexMatrix::from_entries(flat, flat, &entries).unwrap(),
    )
    .unwrap()
}

#[test]
fn criterion_1_soundness_sweep() {
    let start = Instant::now();
    let config = SuiteConfig::standard(200, 42);
    let report_out = run_suite(&config).unwrap();
    let elapsed = start.elapsed();
    let max_residual = report_out
        .worst_residuals
        .values()
        .fold(0.0f64, |acc, &v| acc.max(v));
    let ok = report_out.passes == 200
        && report_out.hypothesis_failures == 0
        && report_out.failing_seeds.is_empty()
        && max_residual <= 1e-8
        && elapsed.as_secs_f64() < 10.0;
    report(
        1,
        "construction soundness sweep",
        ok,
        &format!(
            "passes {}/200, max residual {:.3e}, elapsed {:.2?}",
            report_out.passes, max_residual, elapsed
        ),
    );
}

#[test]
fn criterion_2_exact_2x2_golden_case() {
    let tol = Tolerances::default();
    let shape = SpaceShape::new(2, 1).unwrap();
    let s3 = 3.0f64.sqrt();
    let p = GramianOperator::endo(
        shape,
        ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
    )
    .unwrap();
    let q = GramianOperator::endo(
        shape,
        ComplexMatrix::from_real_entries(2, 2, &[0.75, s3 / 4.0, s3 / 4.0, 0.25]).unwrap(),
    )
    .unwrap();
    let result = build(&p, &q, &tol, 50, 42).unwrap();

    let a_expect = ComplexMatrix::from_real_diagonal(&[0.75, 1.0]);
    let t_expect = ComplexMatrix::from_real_entries(2, 2, &[s3 / 2.0, 0.0, 0.5, 0.0]).unwrap();
    let a_err = (result.a.matrix() - &a_expect).spectral_norm();
    let t_err = (result.t.matrix() - &t_expect).spectral_norm();
    let tstar_t = &result.t.adjoint() * &result.t;
    let t_tstar = &result.t * &result.t.adjoint();
    let p_err = (tstar_t.matrix() - p.matrix()).spectral_norm();
    let q_err = (t_tstar.matrix() - q.matrix()).spectral_norm();

    let ok = a_err <= 1e-12 && t_err <= 1e-12 && p_err <= 1e-12 && q_err <= 1e-12;
    report(
        2,
        "exact 2x2 golden case",
        ok,
        &format!("|A| err {a_err:.2e}, |T| err {t_err:.2e}, T*T-P {p_err:.2e}, TT*-Q {q_err:.2e}"),
    );
}

#[test]
fn criterion_3_proof_identity_certification() {
    let config = SuiteConfig::standard(200, 42);
    let suite = run_suite(&config).unwrap();
    // Every pass requires verify_trace, which also enforces the two
    // Loewner facts TT* <= Q and I - TT* <= I - Q.
    let mut worst_name = String::new();
    let mut worst_value = 0.0f64;
    for (name, &value) in &suite.worst_residuals {
        if value > worst_value {
            worst_value = value;
            worst_name = name.clone();
        }
    }
    let all_identities_present = suite.worst_residuals.len() == 11;
    let ok = suite.passes == 200 && worst_value <= 1e-8 && all_identities_present;
    report(
        3,
        "proof-identity certification",
        ok,
        &format!(
            "{} identities tracked, worst {} = {:.3e}, Loewner order checks enforced on all {} passes",
            suite.worst_residuals.len(),
            worst_name,
            worst_value,
            suite.passes
        ),
    );
}

#[test]
fn criterion_4_square_root_cross_validation() {
    let tol = Tolerances::default();
    let config = SuiteConfig::standard(200, 42);
    let suite = run_suite(&config).unwrap();
    let agreement = suite
        .worst_residuals
        .get("sqrt_method_agreement")
        .copied()
        .unwrap_or(f64::INFINITY);

    // The series must reject ||A - I|| >= 1 - 1e-6.
    let too_far = ComplexMatrix::from_real_diagonal(&[1e-7, 1.0]);
    let rejected = matches!(
        inv_sqrt_series(&too_far, &tol),
        Err(GramianError::SeriesDiverges { .. })
    );

    let ok = agreement <= 1e-9 && rejected;
    report(
        4,
        "square-root cross-validation",
        ok,
        &format!("series vs spectral worst {agreement:.3e}, divergence guard engaged: {rejected}"),
    );
}

#[test]
fn criterion_5_equivalence_of_partial_isometry_conditions() {
    let tol = Tolerances::default();
    let shapes = standard_shapes();
    let mut coincidences = 0usize;
    let mut true_verdicts = 0usize;
    let mut worst_pi_residual = 0.0f64;
    let mut checked = 0usize;

    for case in 0..200usize {
        let shape = shapes[case % shapes.len()];
        let flat = shape.flat_dim();
        let seed = split_seed(4242, case as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = rng.random_range(1..=flat);
        let t = sample_partial_isometry(shape, rank, seed).unwrap();
        let t = if case < 100 {
            t
        } else {
            // Perturbed non-example: push the operator well off the
            // partial-isometry manifold.
            let noise = ginibre_operator(shape, seed ^ 0xFEED);
            let scale = 0.05 / (1.0 + noise.op_norm());
            GramianOperator::endo(
                shape,
                &t.matrix().clone() + &noise.matrix().scaled(scale),
            )
            .unwrap()
        };
        let rep = classify(&t, &tol);
        let verdicts = [
            rep.cond_ii.ok,
            rep.cond_iii.ok,
            rep.cstar_residual <= tol.eq_rel,
            rep.cond_iv_ok,
        ];
        if verdicts.iter().all(|&v| v == verdicts[0]) {
            coincidences += 1;
        }
        if case < 100 {
            assert!(
                rep.is_partial_isometry,
                "sampled partial isometry classified false (case {case})"
            );
            true_verdicts += 1;
            worst_pi_residual = worst_pi_residual.max(rep.worst_residual());
        } else {
            assert!(
                !rep.is_partial_isometry,
                "perturbed non-example classified true (case {case})"
            );
        }
        checked += 1;
    }

    let ok = coincidences == checked && true_verdicts == 100 && worst_pi_residual <= 1e-10;
    report(
        5,
        "four-condition equivalence",
        ok,
        &format!(
            "verdicts coincide in {coincidences}/{checked} cases, sampled isometries all true, worst residual {worst_pi_residual:.3e}"
        ),
    );
}

#[test]
fn criterion_6_initial_final_projection_cross_check() {
    let tol = Tolerances::default();
    let shapes = standard_shapes();
    let mut worst_initial = 0.0f64;
    let mut worst_final = 0.0f64;
    for case in 0..100usize {
        let shape = shapes[case % shapes.len()];
        let flat = shape.flat_dim();
        let seed = split_seed(6006, case as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = rng.random_range(1..=flat);
        let t = sample_partial_isometry(shape, rank, seed).unwrap();
        let rep = classify(&t, &tol);
        assert!(rep.is_partial_isometry);
        worst_initial = worst_initial.max(rep.agreement_residuals.initial_vs_adjoint_range);
        worst_final = worst_final.max(rep.agreement_residuals.final_vs_range);
    }
    let ok = worst_initial <= 1e-8 && worst_final <= 1e-8;
    report(
        6,
        "projection identification cross-check",
        ok,
        &format!(
            "T*T vs range(T*) worst {worst_initial:.3e}, TT* vs range(T) worst {worst_final:.3e}"
        ),
    );
}

#[test]
fn criterion_7_boundedness_certificate() {
    let tol = Tolerances::default();
    let shapes = standard_shapes();
    let mut worst_norm_gap = 0.0f64;
    let mut all_pass = true;
    let mut all_fail_below = true;
    for case in 0..100usize {
        let shape = shapes[case % shapes.len()];
        let seed = split_seed(7007, case as u64);
        let t = ginibre_operator(shape, seed);
        let bound = t.op_norm();

        let cert = boundedness_certificate(&t, bound, 50, seed ^ 0xBEEF, &tol);
        all_pass &= cert.global_ok && cert.sampled_ok;

        let cert_low = boundedness_certificate(&t, bound * (1.0 - 1e-3), 50, seed ^ 0xBEEF, &tol);
        all_fail_below &= !cert_low.global_ok;

        let norm_gap = (t.adjoint().op_norm() - bound).abs() / (1.0 + bound);
        worst_norm_gap = worst_norm_gap.max(norm_gap);
    }
    let ok = all_pass && all_fail_below && worst_norm_gap <= 1e-12;
    report(
        7,
        "boundedness certificate sharpness",
        ok,
        &format!(
            "pass at ||T||: {all_pass}, global fail at 0.999||T||: {all_fail_below}, worst adjoint-norm gap {worst_norm_gap:.3e}"
        ),
    );
}

#[test]
fn criterion_8_norm_one_pair_non_necessity() {
    let tol = Tolerances::default();
    let mut ok = true;
    let mut detail = String::new();
    for (n, d) in [(2usize, 1usize), (4, 1), (3, 2)] {
        let shape = SpaceShape::new(n, d).unwrap();
        let (p, q, t) = remark_counterexample(shape).unwrap();
        let gap = (&p - &q).op_norm();
        let tstar_t = &t.adjoint() * &t;
        let t_tstar = &t * &t.adjoint();
        let exact_initial = (tstar_t.matrix() - p.matrix()).spectral_norm();
        let exact_final = (t_tstar.matrix() - q.matrix()).spectral_norm();
        let classified = classify(&t, &tol).is_partial_isometry;
        let rejected = matches!(
            build(&p, &q, &tol, 10, 0),
            Err(GramianError::HypothesisViolated { .. })
        );
        let this_ok = (gap - 1.0).abs() <= 1e-12
            && exact_initial == 0.0
            && exact_final == 0.0
            && classified
            && rejected;
        ok &= this_ok;
        detail = format!(
            "last shape ({n},{d}): gap {gap:.12}, T*T=P and TT*=Q exact, build rejected: {rejected}"
        );
    }
    report(8, "norm-one pair is still realizable", ok, &detail);
}

#[test]
fn criterion_9_suite_determinism() {
    let config = SuiteConfig::standard(200, 42);
    let first = serde_json::to_vec(&run_suite(&config).unwrap()).unwrap();
    let second = serde_json::to_vec(&run_suite(&config).unwrap()).unwrap();
    let ok = first == second;
    report(
        9,
        "suite determinism",
        ok,
        &format!("two 200-trial reports, {} bytes each, byte-identical: {ok}", first.len()),
    );
}
