//! The projection-pair construction.
//!
//! Given gramian selfadjoint projections `P`, `Q` on the same space with
//! `||P - Q|| < 1`, the operator `A = I + P(Q - P)P` is invertible and
//! positive, and `T = Q A^{-1/2} P` is a partial gramian isometry with
//! `T*T = P` and `TT* = Q`. [`build`] carries out the construction and
//! certifies every identity the argument rests on as a relative residual
//! in a [`ProofTrace`]; [`verify_trace`] recomputes the whole trace from
//! the stored operators so a serialized result can be re-audited.
//!
//! `A^{-1/2}` is computed along two independent routes: the binomial
//! series in `A - I` (valid precisely because `||I - A|| <= ||P - Q|| < 1`)
//! and the spectral route through the Hermitian eigendecomposition. The
//! series result is the one used for `T`; the spectral result
//! cross-checks it in `sqrt_method_agreement`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GramianError, Result};
use crate::isometry::{classify, ClassificationReport};
use crate::matrix::{
    eigh, inv_sqrt_series, loewner_leq, rel_residual, sqrt_psd, ComplexMatrix, Tolerances,
};
use crate::space::{
    gramian, is_gramian_projection, GramianOperator, GramianVector,
};

/// Pairs with `||P - Q|| >= 1 - HYPOTHESIS_MARGIN` are rejected: the
/// series route loses all conditioning as the gap approaches 1.
pub const HYPOTHESIS_MARGIN: f64 = 1e-9;

/// Relative residuals for every identity used by the construction, plus
/// the two Loewner-order facts that force `TT* = Q`.
///
/// On a successful build each scalar is expected at or below `eq_rel`
/// and both order flags are expected true.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofTrace {
    /// Excess of `||I - A||` over `||P - Q||` (the series convergence bound).
    pub neumann_bound: f64,
    /// Worst positivity deficit of `A`: the eigenvalue bound
    /// `lambda_min(A) >= 1 - gap - eq_rel` and, on sampled unit vectors,
    /// the quadratic-form split `[Ah,h] = [(I-P)h,h] + [QPh,Ph]` with a
    /// PSD check on `[Ah,h]`.
    pub positivity_worst: f64,
    /// `PA = AP`.
    pub pa_commute: f64,
    /// `PA = PQP`.
    pub pa_eq_pqp: f64,
    /// `P` commutes with both `A^{1/2}` and `A^{-1/2}`.
    pub sqrt_commute: f64,
    /// `T* = P A^{-1/2} Q`.
    pub tstar_formula: f64,
    /// `TP = T = Q P A^{-1/2}`.
    pub tp_eq_t: f64,
    /// `T*T = P`.
    pub tstar_t_eq_p: f64,
    /// `TT* = Q A^{-1} P Q`.
    pub ttstar_formula: f64,
    /// `TT* = Q`.
    pub ttstar_eq_q: f64,
    /// Series `A^{-1/2}` against the spectral one.
    pub sqrt_method_agreement: f64,
    /// Loewner check `TT* <= Q`.
    pub ttstar_leq_q: bool,
    /// Loewner check `I - TT* <= I - Q`.
    pub complement_leq: bool,
}

impl ProofTrace {
    /// All scalar residuals, in trace order, with their identity names.
    pub fn residuals(&self) -> [(&'static str, f64); 11] {
        [
            ("neumann_bound", self.neumann_bound),
            ("positivity_worst", self.positivity_worst),
            ("pa_commute", self.pa_commute),
            ("pa_eq_pqp", self.pa_eq_pqp),
            ("sqrt_commute", self.sqrt_commute),
            ("tstar_formula", self.tstar_formula),
            ("tp_eq_t", self.tp_eq_t),
            ("tstar_t_eq_p", self.tstar_t_eq_p),
            ("ttstar_formula", self.ttstar_formula),
            ("ttstar_eq_q", self.ttstar_eq_q),
            ("sqrt_method_agreement", self.sqrt_method_agreement),
        ]
    }

    /// The identity with the largest residual.
    pub fn worst(&self) -> (&'static str, f64) {
        let mut worst = ("neumann_bound", self.neumann_bound);
        for (name, value) in self.residuals() {
            if value > worst.1 {
                worst = (name, value);
            }
        }
        worst
    }

    pub fn max_residual(&self) -> f64 {
        self.worst().1
    }

    /// Every scalar within `eq_rel` and both Loewner checks true.
    pub fn within(&self, eq_rel: f64) -> bool {
        self.max_residual() <= eq_rel && self.ttstar_leq_q && self.complement_leq
    }
}

/// Output of [`build`]: the partial isometry, the auxiliary operators,
/// the measured gap, the residual trace, and the classification of `T`.
/// The inputs `P`, `Q` and the sampling parameters are retained so the
/// trace can be recomputed from the serialized value alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub p: GramianOperator,
    pub q: GramianOperator,
    pub t: GramianOperator,
    pub a: GramianOperator,
    pub sqrt_a: GramianOperator,
    pub inv_sqrt_a: GramianOperator,
    /// Measured `||P - Q||`.
    pub gap: f64,
    /// Number of sampled vectors in the positivity split.
    pub samples: usize,
    /// Seed of the sampled-vector stream.
    pub seed: u64,
    pub trace: ProofTrace,
    pub classification: ClassificationReport,
}

/// Outcome of re-auditing a [`ConstructionResult`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceVerdict {
    pub pass: bool,
    /// Identity with the largest recomputed residual.
    pub worst_identity: String,
    pub worst_residual: f64,
    /// The full recomputed trace.
    pub trace: ProofTrace,
}

/// Spectral inverse square root `U diag(1/sqrt(lambda)) U*`; the
/// independent cross-check for the series route.
fn spectral_inv_sqrt(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let decomp = eigh(a)?;
    let scale = decomp
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let lambda_min = decomp.eigenvalues[0];
    if lambda_min <= tol.psd_abs * scale {
        return Err(GramianError::NotPositive { lambda_min });
    }
    let inv_roots: Vec<f64> = decomp
        .eigenvalues
        .iter()
        .map(|&l| 1.0 / l.sqrt())
        .collect();
    let u = &decomp.eigenvectors;
    Ok((&(u * &ComplexMatrix::from_real_diagonal(&inv_roots)) * &u.adjoint()).hermitized())
}

fn check_projection_input(
    which: &'static str,
    p: &GramianOperator,
    tol: &Tolerances,
) -> Result<()> {
    let check = is_gramian_projection(p, tol)?;
    if !check.ok {
        return Err(GramianError::InvalidProjection {
            which,
            selfadjoint: check.selfadjoint_residual,
            idempotent: check.idempotent_residual,
        });
    }
    Ok(())
}

/// Recompute the full residual trace from the operators alone.
#[allow(clippy::too_many_arguments)]
fn compute_trace(
    p: &GramianOperator,
    q: &GramianOperator,
    t: &GramianOperator,
    a: &GramianOperator,
    sqrt_a: &GramianOperator,
    inv_sqrt_a: &GramianOperator,
    tol: &Tolerances,
    samples: usize,
    seed: u64,
) -> Result<ProofTrace> {
    let shape = p.shape_in();
    let pm = p.matrix();
    let qm = q.matrix();
    let tm = t.matrix();
    let am = a.matrix();
    let sm = sqrt_a.matrix();
    let rm = inv_sqrt_a.matrix();
    let id = ComplexMatrix::identity(shape.flat_dim());

    let gap = (pm - qm).spectral_norm();

    // ||I - A|| <= ||P - Q||, the bound that drives the series.
    let neumann_bound = ((&id - am).spectral_norm() - gap).max(0.0) / (1.0 + gap);

    // Positivity of A: sharp eigenvalue bound lambda_min >= 1 - gap - eq_rel.
    let decomp = eigh(am)?;
    let lambda_min = decomp.eigenvalues[0];
    let mut positivity_worst = ((1.0 - gap - tol.eq_rel) - lambda_min).max(0.0);

    // Quadratic-form split [Ah,h] = [(I-P)h,h] + [QPh,Ph] on sampled
    // unit vectors, including a PSD check of the Z-element [Ah,h].
    let id_op = GramianOperator::identity(shape);
    let complement = &id_op - p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let h = GramianVector::random_unit(shape, &mut rng);
        let ah = a.apply(&h)?;
        let za = gramian(&ah, &h)?;
        let z1 = gramian(&complement.apply(&h)?, &h)?;
        let ph = p.apply(&h)?;
        let z2 = gramian(&q.apply(&ph)?, &ph)?;
        let scale = 1.0 + za.spectral_norm();
        let split = (&za - &(&z1 + &z2)).spectral_norm() / scale;
        let psd = eigh(&za.hermitized())?;
        let deficit = (-psd.eigenvalues[0]).max(0.0) / scale;
        positivity_worst = positivity_worst.max(split).max(deficit);
    }

    let pa = pm * am;
    let pa_commute = rel_residual(&pa, &(am * pm));
    let pa_eq_pqp = rel_residual(&pa, &(&(pm * qm) * pm));

    let sqrt_commute = rel_residual(&(pm * sm), &(sm * pm))
        .max(rel_residual(&(pm * rm), &(rm * pm)));

    let tstar = tm.adjoint();
    let tstar_formula = rel_residual(&tstar, &(&(pm * rm) * qm));
    let tp_eq_t =
        rel_residual(&(tm * pm), tm).max(rel_residual(&(&(qm * pm) * rm), tm));
    let tstar_t_eq_p = rel_residual(&(&tstar * tm), pm);

    let ttstar = tm * &tstar;
    let a_inv = rm * rm;
    let ttstar_formula = rel_residual(&ttstar, &(&(&(qm * &a_inv) * pm) * qm));
    let ttstar_eq_q = rel_residual(&ttstar, qm);

    let sqrt_method_agreement = rel_residual(rm, &spectral_inv_sqrt(am, tol)?);

    let ttstar_leq_q = loewner_leq(&ttstar, qm, tol)?;
    let complement_leq = loewner_leq(&(&id - &ttstar), &(&id - qm), tol)?;

    Ok(ProofTrace {
        neumann_bound,
        positivity_worst,
        pa_commute,
        pa_eq_pqp,
        sqrt_commute,
        tstar_formula,
        tp_eq_t,
        tstar_t_eq_p,
        ttstar_formula,
        ttstar_eq_q,
        sqrt_method_agreement,
        ttstar_leq_q,
        complement_leq,
    })
}

/// Run the construction: validate the inputs, measure the gap, form
/// `A = I + P(Q-P)P`, take `A^{-1/2}` by series (cross-checked
/// spectrally), assemble `T = Q A^{-1/2} P`, and certify the whole
/// argument as a residual trace.
///
/// `samples` and `seed` drive the sampled positivity split; the same
/// values are stored in the result so [`verify_trace`] reproduces the
/// trace exactly.
pub fn build(
    p: &GramianOperator,
    q: &GramianOperator,
    tol: &Tolerances,
    samples: usize,
    seed: u64,
) -> Result<ConstructionResult> {
    tol.validate()?;
    if !p.is_endomorphism() || !q.is_endomorphism() || p.shape_in() != q.shape_in() {
        return Err(GramianError::ShapeMismatch(format!(
            "construction needs two projections on one space, got {} -> {} and {} -> {}",
            p.shape_in(),
            p.shape_out(),
            q.shape_in(),
            q.shape_out()
        )));
    }
    check_projection_input("P", p, tol)?;
    check_projection_input("Q", q, tol)?;

    let gap = (p - q).op_norm();
    if gap >= 1.0 - HYPOTHESIS_MARGIN {
        return Err(GramianError::HypothesisViolated { gap });
    }

    let shape = p.shape_in();
    let id = GramianOperator::identity(shape);
    let a = &id + &(&(p * &(q - p)) * p);

    // Series route: the operator actually used to assemble T.
    let inv_sqrt_a_matrix = inv_sqrt_series(a.matrix(), tol).map_err(|e| match e {
        GramianError::SeriesDiverges { .. } | GramianError::NoConvergence { .. } => {
            GramianError::Numeric(format!(
                "inverse-square-root series failed despite gap {gap:.9} < 1: {e}"
            ))
        }
        other => other,
    })?;
    let inv_sqrt_a = GramianOperator::endo(shape, inv_sqrt_a_matrix)
        .expect("series output keeps the operator shape");
    let sqrt_a = GramianOperator::endo(shape, sqrt_psd(a.matrix(), tol)?)
        .expect("spectral root keeps the operator shape");

    let t = &(q * &inv_sqrt_a) * p;

    let trace = compute_trace(p, q, &t, &a, &sqrt_a, &inv_sqrt_a, tol, samples, seed)?;
    let classification = classify(&t, tol);

    Ok(ConstructionResult {
        p: p.clone(),
        q: q.clone(),
        t,
        a,
        sqrt_a,
        inv_sqrt_a,
        gap,
        samples,
        seed,
        trace,
        classification,
    })
}

/// Re-audit a construction result: every residual is recomputed from the
/// stored operators (same sample count and seed, hence deterministic)
/// and compared against `eq_rel`.
pub fn verify_trace(result: &ConstructionResult, tol: &Tolerances) -> Result<TraceVerdict> {
    let trace = compute_trace(
        &result.p,
        &result.q,
        &result.t,
        &result.a,
        &result.sqrt_a,
        &result.inv_sqrt_a,
        tol,
        result.samples,
        result.seed,
    )?;
    let (worst_identity, worst_residual) = trace.worst();
    Ok(TraceVerdict {
        pass: trace.within(tol.eq_rel),
        worst_identity: worst_identity.to_string(),
        worst_residual,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceShape;

    fn shape2() -> SpaceShape {
        SpaceShape::new(2, 1).unwrap()
    }

    fn projector(entries: &[f64]) -> GramianOperator {
        GramianOperator::endo(
            shape2(),
            ComplexMatrix::from_real_entries(2, 2, entries).unwrap(),
        )
        .unwrap()
    }

    /// The angle-pi/6 pair: P onto e1, Q onto (cos pi/6, sin pi/6).
    fn golden_pair() -> (GramianOperator, GramianOperator) {
        let s3 = 3.0f64.sqrt();
        let p = projector(&[1.0, 0.0, 0.0, 0.0]);
        let q = projector(&[0.75, s3 / 4.0, s3 / 4.0, 0.25]);
        (p, q)
    }

    #[test]
    fn equal_projections_give_a_identity_and_t_p() {
        let tol = Tolerances::default();
        let p = projector(&[0.5, 0.5, 0.5, 0.5]);
        let result = build(&p, &p, &tol, 10, 1).unwrap();
        assert!(result.gap < 1e-15);
        assert!(rel_residual(result.a.matrix(), &ComplexMatrix::identity(2)) < 1e-14);
        assert!(rel_residual(result.t.matrix(), p.matrix()) < 1e-14);
        assert!(result.trace.within(tol.eq_rel));
    }

    #[test]
    fn golden_case_exact_values() {
        let tol = Tolerances::default();
        let (p, q) = golden_pair();
        let result = build(&p, &q, &tol, 25, 42).unwrap();
        assert!((result.gap - 0.5).abs() < 1e-12);

        let a_expect = ComplexMatrix::from_real_diagonal(&[0.75, 1.0]);
        assert!((result.a.matrix() - &a_expect).spectral_norm() < 1e-12);

        let s3 = 3.0f64.sqrt();
        let t_expect =
            ComplexMatrix::from_real_entries(2, 2, &[s3 / 2.0, 0.0, 0.5, 0.0]).unwrap();
        assert!((result.t.matrix() - &t_expect).spectral_norm() < 1e-12);

        let tstar_t = &result.t.adjoint() * &result.t;
        assert!((tstar_t.matrix() - p.matrix()).spectral_norm() < 1e-12);
        let t_tstar = &result.t * &result.t.adjoint();
        assert!((t_tstar.matrix() - q.matrix()).spectral_norm() < 1e-12);

        assert!(result.trace.within(tol.eq_rel));
        assert!(result.classification.is_partial_isometry);
    }

    #[test]
    fn zero_projections() {
        let tol = Tolerances::default();
        let z = GramianOperator::zero(shape2(), shape2());
        let result = build(&z, &z, &tol, 10, 3).unwrap();
        assert!(rel_residual(result.a.matrix(), &ComplexMatrix::identity(2)) < 1e-15);
        assert_eq!(result.t.op_norm(), 0.0);
        assert!(result.trace.within(tol.eq_rel));
    }

    #[test]
    fn orthogonal_pair_violates_hypothesis() {
        let tol = Tolerances::default();
        let p = projector(&[1.0, 0.0, 0.0, 0.0]);
        let q = projector(&[0.0, 0.0, 0.0, 1.0]);
        match build(&p, &q, &tol, 10, 3) {
            Err(GramianError::HypothesisViolated { gap }) => {
                assert!((gap - 1.0).abs() < 1e-12)
            }
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn non_projection_input_is_rejected() {
        let tol = Tolerances::default();
        let p = projector(&[1.0, 1.0, 0.0, 0.0]);
        let q = projector(&[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            build(&p, &q, &tol, 10, 3),
            Err(GramianError::InvalidProjection { which: "P", .. })
        ));
    }

    #[test]
    fn verify_trace_passes_on_build_output() {
        let tol = Tolerances::default();
        let (p, q) = golden_pair();
        let result = build(&p, &q, &tol, 25, 42).unwrap();
        let verdict = verify_trace(&result, &tol).unwrap();
        assert!(verdict.pass);
        assert!(verdict.worst_residual <= tol.eq_rel);
    }

    #[test]
    fn verify_trace_catches_perturbed_t() {
        use rand::RngExt;
        let tol = Tolerances::default();
        let (p, q) = golden_pair();
        let mut result = build(&p, &q, &tol, 25, 42).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let noise = ComplexMatrix::from_real_entries(
            2,
            2,
            &[
                1e-3 * rng.random::<f64>(),
                1e-3 * rng.random::<f64>(),
                1e-3 * rng.random::<f64>(),
                1e-3 * rng.random::<f64>(),
            ],
        )
        .unwrap();
        result.t =
            GramianOperator::endo(shape2(), result.t.matrix() + &noise).unwrap();

        let verdict = verify_trace(&result, &tol).unwrap();
        assert!(!verdict.pass);
        assert!(
            verdict.worst_identity == "tstar_t_eq_p" || verdict.worst_identity == "ttstar_eq_q",
            "perturbing T must break an isometry identity, got {}",
            verdict.worst_identity
        );
    }

    #[test]
    fn verify_trace_catches_replaced_a() {
        let tol = Tolerances::default();
        let (p, q) = golden_pair();
        let mut result = build(&p, &q, &tol, 25, 42).unwrap();
        result.a = GramianOperator::identity(shape2());
        let verdict = verify_trace(&result, &tol).unwrap();
        assert!(!verdict.pass);
        assert_eq!(verdict.worst_identity, "pa_eq_pqp");
    }

    #[test]
    fn result_round_trips_through_json() {
        let tol = Tolerances::default();
        let (p, q) = golden_pair();
        let result = build(&p, &q, &tol, 25, 42).unwrap();
        let text = serde_json::to_string(&result).unwrap();
        let back: ConstructionResult = serde_json::from_str(&text).unwrap();
        assert_eq!(result.t.matrix(), back.t.matrix());
        assert_eq!(result.trace.max_residual(), back.trace.max_residual());
        // Bit-stable: serializing again gives the same bytes.
        assert_eq!(text, serde_json::to_string(&back).unwrap());
    }
}
