//! Browser playground for the projection-pair construction.
//!
//! Three operations are exported to JavaScript, each returning a JSON
//! string (an object with an `"error"` key on failure) so the static
//! page can render matrices and residual traces without any framework:
//!
//! - [`explore_construction`]: sample a projection pair at a chosen gap,
//!   run the construction, return operators plus the residual trace;
//! - [`classify_perturbed`]: sample a partial isometry, push it off the
//!   manifold by a chosen amount, return the classification report;
//! - [`norm_one_example`]: the orthogonal pair with gap exactly 1 whose
//!   partial isometry exists anyway, plus the rejected build.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use gramian_kit::construction::{build, ProofTrace};
use gramian_kit::isometry::{classify, ClassificationReport};
use gramian_kit::lab::{
    remark_counterexample, sample_gaussian_operator, sample_partial_isometry,
    sample_projection_pair, split_seed, SampleSpec,
};
use gramian_kit::{GramianError, GramianOperator, SpaceShape, Tolerances};

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value)
        .unwrap_or_else(|e| format!("{{\"error\":\"serialization failed: {e}\"}}"))
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

#[derive(Serialize)]
struct GapErrorBody {
    error: &'static str,
    gap: f64,
}

fn error_body(message: impl std::fmt::Display) -> String {
    json(&ErrorBody {
        error: message.to_string(),
    })
}

#[derive(Serialize)]
struct ConstructionView {
    p: GramianOperator,
    q: GramianOperator,
    t: GramianOperator,
    a: GramianOperator,
    gap: f64,
    trace: ProofTrace,
    is_partial_isometry: bool,
    marginal: bool,
}

#[derive(Serialize)]
struct ClassificationView {
    t: GramianOperator,
    perturbation: f64,
    report: ClassificationReport,
}

#[derive(Serialize)]
struct NormOneView {
    p: GramianOperator,
    q: GramianOperator,
    t: GramianOperator,
    gap: f64,
    t_is_partial_isometry: bool,
    build_rejected: bool,
}

fn checked_shape(n: u32, d: u32) -> Result<SpaceShape, String> {
    SpaceShape::new(n as usize, d as usize).map_err(|e| e.to_string())
}

/// Sample an equal-rank projection pair with `||P - Q||` equal to `gap`,
/// run the construction, and report everything the page needs. A gap of
/// 1 (or an infeasible rank) comes back as an error object, which is the
/// interesting boundary to show.
#[wasm_bindgen]
pub fn explore_construction(n: u32, d: u32, rank: u32, gap: f64, seed: u32) -> String {
    let shape = match checked_shape(n, d) {
        Ok(s) => s,
        Err(e) => return error_body(e),
    };
    let spec = SampleSpec {
        shape,
        target_gap: Some(gap),
        rank_p: rank as usize,
        rank_q: rank as usize,
        seed: split_seed(u64::from(seed), 0),
    };
    let (p, q) = match sample_projection_pair(&spec) {
        Ok(pair) => pair,
        Err(e) => return error_body(e),
    };
    let tol = Tolerances::default();
    match build(&p, &q, &tol, 25, split_seed(u64::from(seed), 1)) {
        Ok(result) => json(&ConstructionView {
            p: result.p,
            q: result.q,
            t: result.t,
            a: result.a,
            gap: result.gap,
            trace: result.trace,
            is_partial_isometry: result.classification.is_partial_isometry,
            marginal: result.classification.marginal,
        }),
        Err(GramianError::HypothesisViolated { gap }) => json(&GapErrorBody {
            error: "hypothesis-violated",
            gap,
        }),
        Err(other) => error_body(other),
    }
}

/// Sample a rank-`rank` partial isometry, add `perturbation` times a
/// normalized Gaussian operator, and classify the result. At zero
/// perturbation all four condition verdicts hold; raising it shows how
/// the residuals grow through the tolerance band together.
#[wasm_bindgen]
pub fn classify_perturbed(n: u32, d: u32, rank: u32, perturbation: f64, seed: u32) -> String {
    let shape = match checked_shape(n, d) {
        Ok(s) => s,
        Err(e) => return error_body(e),
    };
    if !perturbation.is_finite() || perturbation < 0.0 {
        return error_body("perturbation must be a nonnegative number");
    }
    let base = match sample_partial_isometry(shape, rank as usize, split_seed(u64::from(seed), 0))
    {
        Ok(t) => t,
        Err(e) => return error_body(e),
    };
    let t = if perturbation > 0.0 {
        let noise = sample_gaussian_operator(shape, split_seed(u64::from(seed), 1));
        let scale = perturbation / (1.0 + noise.op_norm());
        match GramianOperator::endo(shape, base.matrix() + &noise.matrix().scaled(scale)) {
            Ok(t) => t,
            Err(e) => return error_body(e),
        }
    } else {
        base
    };
    let report = classify(&t, &Tolerances::default());
    json(&ClassificationView {
        t,
        perturbation,
        report,
    })
}

/// The gap-1 pair that still has an exact partial isometry between its
/// ranges: the sufficient condition is not necessary.
#[wasm_bindgen]
pub fn norm_one_example(n: u32, d: u32) -> String {
    let shape = match checked_shape(n, d) {
        Ok(s) => s,
        Err(e) => return error_body(e),
    };
    let (p, q, t) = match remark_counterexample(shape) {
        Ok(triple) => triple,
        Err(e) => return error_body(e),
    };
    let gap = (&p - &q).op_norm();
    let tol = Tolerances::default();
    let verdict = classify(&t, &tol).is_partial_isometry;
    let rejected = matches!(
        build(&p, &q, &tol, 4, 0),
        Err(GramianError::HypothesisViolated { .. })
    );
    json(&NormOneView {
        p,
        q,
        t,
        gap,
        t_is_partial_isometry: verdict,
        build_rejected: rejected,
    })
}
