//! Partial gramian isometry classification.
//!
//! An operator `T` is a partial gramian isometry exactly when any one of
//! the following holds: `T*T` is a gramian selfadjoint projection, `TT*`
//! is one, `TT*T = T`, or `T*` is itself a partial isometry. The
//! classifier evaluates all four conditions independently and reports
//! every residual; the initial projection is `T*T`, the final one `TT*`,
//! and both are cross-checked against SVD-rank column-space projectors
//! of `T*` and `T` so that the identification is a genuine test rather
//! than a tautology.

use serde::{Deserialize, Serialize};

use crate::error::{GramianError, Result};
use crate::matrix::{column_space_projector, Tolerances, RANK_CUTOFF};
use crate::space::{is_gramian_projection, op_residual, GramianOperator, ProjectionCheck};

/// Residuals tying the algebraic projections `T*T`, `TT*` to the
/// SVD-computed geometry of `T`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgreementResiduals {
    /// `T*T` against the column-space projector of `T*`.
    pub initial_vs_adjoint_range: f64,
    /// `TT*` against the column-space projector of `T`.
    pub final_vs_range: f64,
    /// `T*T + P_kernel` against the identity on the domain.
    pub initial_plus_kernel_vs_identity: f64,
}

/// Full classification verdict for one operator.
///
/// When `is_partial_isometry` is true, `initial_projection` and
/// `final_projection` are the projections onto the initial space
/// `N(T)^perp` and the final space `R(T)`. `marginal` flags verdicts
/// decided within one decade of `eq_rel`; such inputs sit on the
/// numerical boundary and the boolean alone should not be trusted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub is_partial_isometry: bool,
    pub marginal: bool,
    /// Condition (ii): `T*T` is a gramian selfadjoint projection.
    pub cond_ii: ProjectionCheck,
    /// Condition (iii): `TT*` is a gramian selfadjoint projection.
    pub cond_iii: ProjectionCheck,
    /// C*-identity residual `||TT*T - T|| / (1 + ||T||)`.
    pub cstar_residual: f64,
    /// Condition (iv): the adjoint passes its own (ii) and (iii).
    pub cond_iv_ok: bool,
    /// `T*T`.
    pub initial_projection: GramianOperator,
    /// `TT*`.
    pub final_projection: GramianOperator,
    /// `I - P_{R(T*)}`, computed from the SVD numerical rank of `T*`.
    pub kernel_projection: GramianOperator,
    /// `P_{R(T)}`, computed from the SVD numerical rank of `T`.
    pub range_projection: GramianOperator,
    pub agreement_residuals: AgreementResiduals,
    /// Singular-value cutoff (relative to `sigma_max`) behind the
    /// kernel/range projectors.
    pub rank_cutoff: f64,
}

struct ConditionChecks {
    cond_ii: ProjectionCheck,
    cond_iii: ProjectionCheck,
    cstar_residual: f64,
}

fn condition_checks(t: &GramianOperator, tol: &Tolerances) -> ConditionChecks {
    let adj = t.adjoint();
    let tstar_t = &adj * t;
    let t_tstar = t * &adj;
    let cond_ii = is_gramian_projection(&tstar_t, tol).expect("T*T is square by construction");
    let cond_iii = is_gramian_projection(&t_tstar, tol).expect("TT* is square by construction");
    let cstar_residual = op_residual(&(&t_tstar * t), t);
    ConditionChecks {
        cond_ii,
        cond_iii,
        cstar_residual,
    }
}

fn near_threshold(residual: f64, eq_rel: f64) -> bool {
    residual > 0.1 * eq_rel && residual < 10.0 * eq_rel
}

/// Classify `T` against the equivalent partial-isometry conditions and
/// extract initial/final/kernel/range data. All diagnostics live in the
/// report; nothing is thrown.
pub fn classify(t: &GramianOperator, tol: &Tolerances) -> ClassificationReport {
    let checks = condition_checks(t, tol);
    let adjoint_checks = condition_checks(&t.adjoint(), tol);

    let cstar_ok = checks.cstar_residual <= tol.eq_rel;
    let cond_iv_ok = adjoint_checks.cond_ii.ok
        && adjoint_checks.cond_iii.ok
        && adjoint_checks.cstar_residual <= tol.eq_rel;
    let is_partial_isometry = checks.cond_ii.ok && checks.cond_iii.ok && cstar_ok && cond_iv_ok;

    // The four conditions are equivalent in exact arithmetic; if the
    // verdicts split, the input sits on the tolerance boundary and must
    // be flagged marginal.
    let verdicts = [checks.cond_ii.ok, checks.cond_iii.ok, cstar_ok, cond_iv_ok];
    let split = verdicts.iter().any(|&v| v != verdicts[0]);

    let residuals = [
        checks.cond_ii.selfadjoint_residual,
        checks.cond_ii.idempotent_residual,
        checks.cond_iii.selfadjoint_residual,
        checks.cond_iii.idempotent_residual,
        checks.cstar_residual,
    ];
    let marginal = split || residuals.iter().any(|&r| near_threshold(r, tol.eq_rel));

    let adj = t.adjoint();
    let initial_projection = &adj * t;
    let final_projection = t * &adj;
    let adjoint_range =
        GramianOperator::endo(t.shape_in(), column_space_projector(adj.matrix()))
            .expect("projector dimensions follow from T");
    let range_projection =
        GramianOperator::endo(t.shape_out(), column_space_projector(t.matrix()))
            .expect("projector dimensions follow from T");
    let kernel_projection = &GramianOperator::identity(t.shape_in()) - &adjoint_range;

    let agreement_residuals = AgreementResiduals {
        initial_vs_adjoint_range: op_residual(&initial_projection, &adjoint_range),
        final_vs_range: op_residual(&final_projection, &range_projection),
        initial_plus_kernel_vs_identity: op_residual(
            &(&initial_projection + &kernel_projection),
            &GramianOperator::identity(t.shape_in()),
        ),
    };

    ClassificationReport {
        is_partial_isometry,
        marginal,
        cond_ii: checks.cond_ii,
        cond_iii: checks.cond_iii,
        cstar_residual: checks.cstar_residual,
        cond_iv_ok,
        initial_projection,
        final_projection,
        kernel_projection,
        range_projection,
        agreement_residuals,
        rank_cutoff: RANK_CUTOFF,
    }
}

impl ClassificationReport {
    /// Worst residual among the decisive conditions.
    pub fn worst_residual(&self) -> f64 {
        self.cond_ii
            .selfadjoint_residual
            .max(self.cond_ii.idempotent_residual)
            .max(self.cond_iii.selfadjoint_residual)
            .max(self.cond_iii.idempotent_residual)
            .max(self.cstar_residual)
    }
}

fn require_partial_isometry(t: &GramianOperator, tol: &Tolerances) -> Result<ClassificationReport> {
    let report = classify(t, tol);
    if !report.is_partial_isometry {
        return Err(GramianError::NotPartialIsometry {
            residual: report.worst_residual(),
        });
    }
    Ok(report)
}

/// `T*T`, the projection onto the initial space `N(T)^perp`; verified
/// against the SVD range projector of `T*` before being returned.
pub fn initial_projection(t: &GramianOperator, tol: &Tolerances) -> Result<GramianOperator> {
    let report = require_partial_isometry(t, tol)?;
    if report.agreement_residuals.initial_vs_adjoint_range > tol.eq_rel {
        return Err(GramianError::Numeric(format!(
            "initial projection disagrees with the range of T*: residual {:.3e}",
            report.agreement_residuals.initial_vs_adjoint_range
        )));
    }
    Ok(report.initial_projection)
}

/// `TT*`, the projection onto the final space `R(T)`; verified against
/// the SVD range projector of `T`.
pub fn final_projection(t: &GramianOperator, tol: &Tolerances) -> Result<GramianOperator> {
    let report = require_partial_isometry(t, tol)?;
    if report.agreement_residuals.final_vs_range > tol.eq_rel {
        return Err(GramianError::Numeric(format!(
            "final projection disagrees with the range of T: residual {:.3e}",
            report.agreement_residuals.final_vs_range
        )));
    }
    Ok(report.final_projection)
}
