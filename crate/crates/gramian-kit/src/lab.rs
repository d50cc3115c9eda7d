//! Deterministic generators and the batch verification suite.
//!
//! Projection pairs with a prescribed gap are built from principal
//! angles: for equal-rank projections, `||P - Q||` equals the sine of
//! the largest principal angle between the ranges, so placing `P` on
//! `span(e_1..e_r)` and `Q` on rotated copies `cos(t_i) e_i + sin(t_i) e_{r+i}`
//! with `t_1 = arcsin(gap)` hits the target exactly; a Haar-random
//! unitary conjugation then hides the basis. All randomness flows from
//! one named generator (ChaCha8) seeded per call, with per-trial seeds
//! derived by counter-based splitting, so results never depend on
//! scheduling.

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::construction::{build, verify_trace, HYPOTHESIS_MARGIN};
use crate::error::{GramianError, Result};
use crate::isometry::classify;
use crate::matrix::{ComplexMatrix, Tolerances, C64};
use crate::space::{GramianOperator, SpaceShape};

/// Vectors sampled per build when the suite certifies positivity splits.
const SUITE_BUILD_SAMPLES: usize = 25;

/// Counter-based seed splitting (splitmix64 finalizer): deterministic,
/// collision-resistant derivation of independent sub-seeds.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix, with the
/// phases of R's diagonal folded into Q so the distribution is exact.
pub fn haar_unitary<R: rand::Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = nalgebra::DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = nalgebra::QR::new(g);
    let r = qr.r();
    let phases: Vec<C64> = (0..dim)
        .map(|j| {
            let rij = r[(j, j)];
            let m = rij.norm();
            if m == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                rij / m
            }
        })
        .collect();
    let mut q = qr.q();
    for j in 0..dim {
        let phase = phases[j];
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_dmatrix(q)
}

/// Specification for one projection pair.
///
/// `target_gap = Some(g)` with `g < 1` requires equal ranks (unequal
/// ranks force `||P - Q|| = 1`); `None` leaves the angles random for
/// equal ranks and zero for unequal ones.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleSpec {
    pub shape: SpaceShape,
    pub target_gap: Option<f64>,
    pub rank_p: usize,
    pub rank_q: usize,
    pub seed: u64,
}

impl SampleSpec {
    fn validate(&self) -> Result<()> {
        let flat = self.shape.flat_dim();
        if self.rank_p > flat || self.rank_q > flat {
            return Err(GramianError::InfeasibleSpec(format!(
                "ranks ({}, {}) exceed the flattened dimension {}",
                self.rank_p, self.rank_q, flat
            )));
        }
        if let Some(gap) = self.target_gap {
            if !(0.0..=1.0).contains(&gap) {
                return Err(GramianError::InfeasibleSpec(format!(
                    "target gap {gap} outside [0, 1]"
                )));
            }
            if gap < 1.0 && self.rank_p != self.rank_q {
                return Err(GramianError::InfeasibleSpec(format!(
                    "gap {} < 1 is impossible for ranks ({}, {}): unequal ranks force gap 1",
                    gap, self.rank_p, self.rank_q
                )));
            }
            if gap > 0.0 && self.rank_p == 0 && self.rank_q == 0 {
                return Err(GramianError::InfeasibleSpec(
                    "a positive gap needs at least one nonzero rank".into(),
                ));
            }
        }
        Ok(())
    }
}

/// The canonical basis-form pair: `P` projects onto `span(e_0..e_{rank_p-1})`,
/// `Q` onto directions `cos(t_i) e_i + sin(t_i) e_{rank_p+i}` (plus fresh
/// basis directions when `rank_q > rank_p`). No random conjugation; with
/// `angles.len() == min(rank_p, rank_q)` the gap of an equal-rank pair is
/// exactly `sin(max t_i)`.
pub fn projection_pair_with_angles(
    shape: SpaceShape,
    rank_p: usize,
    rank_q: usize,
    angles: &[f64],
) -> Result<(GramianOperator, GramianOperator)> {
    let flat = shape.flat_dim();
    let m = rank_p.min(rank_q);
    if rank_p > flat || rank_q > flat {
        return Err(GramianError::InfeasibleSpec(format!(
            "ranks ({rank_p}, {rank_q}) exceed the flattened dimension {flat}"
        )));
    }
    if angles.len() != m {
        return Err(GramianError::InfeasibleSpec(format!(
            "expected {} principal angles, got {}",
            m,
            angles.len()
        )));
    }
    if angles
        .iter()
        .any(|&t| !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&t))
    {
        return Err(GramianError::InfeasibleSpec(
            "principal angles must lie in [0, pi/2]".into(),
        ));
    }
    for (i, &t) in angles.iter().enumerate() {
        if t > 0.0 && rank_p + i >= flat {
            return Err(GramianError::InfeasibleSpec(format!(
                "angle {i} needs partner direction {} but the space has dimension {flat}",
                rank_p + i
            )));
        }
    }

    let any_rotation = angles.iter().any(|&t| t > 0.0);
    let extra_base = if any_rotation { rank_p + m } else { rank_p };
    let extras = rank_q - m;
    if extras > 0 && extra_base + extras > flat {
        return Err(GramianError::InfeasibleSpec(format!(
            "{} extra directions starting at {} do not fit in dimension {}",
            extras, extra_base, flat
        )));
    }

    let mut p = nalgebra::DMatrix::<C64>::zeros(flat, flat);
    for i in 0..rank_p {
        p[(i, i)] = C64::new(1.0, 0.0);
    }

    let mut q = nalgebra::DMatrix::<C64>::zeros(flat, flat);
    for (i, &t) in angles.iter().enumerate() {
        // Rank-one projector onto cos(t) e_i + sin(t) e_{rank_p + i}.
        let (c, s) = (t.cos(), t.sin());
        q[(i, i)] += C64::new(c * c, 0.0);
        if s != 0.0 {
            let j = rank_p + i;
            q[(i, j)] += C64::new(c * s, 0.0);
            q[(j, i)] += C64::new(c * s, 0.0);
            q[(j, j)] += C64::new(s * s, 0.0);
        }
    }
    for k in 0..extras {
        let j = extra_base + k;
        q[(j, j)] = C64::new(1.0, 0.0);
    }

    Ok((
        GramianOperator::endo(shape, ComplexMatrix::from_dmatrix(p))
            .expect("projector matches the shape"),
        GramianOperator::endo(shape, ComplexMatrix::from_dmatrix(q))
            .expect("projector matches the shape"),
    ))
}

/// Sample the projection pair described by `spec`, conjugated by one Haar unitary
/// drawn from the seeded generator. The measured gap is self-checked
/// against the target to 1e-9 before the pair is returned.
pub fn sample_projection_pair(
    spec: &SampleSpec,
) -> Result<(GramianOperator, GramianOperator)> {
    spec.validate()?;
    let shape = spec.shape;
    let flat = shape.flat_dim();
    let m = spec.rank_p.min(spec.rank_q);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut angles = vec![0.0f64; m];
    match spec.target_gap {
        Some(gap) if gap > 0.0 => {
            let theta1 = gap.asin();
            if spec.rank_p >= flat {
                return Err(GramianError::InfeasibleSpec(format!(
                    "gap {gap} > 0 needs a direction outside the rank-{} range in dimension {flat}",
                    spec.rank_p
                )));
            }
            angles[0] = theta1;
            for (i, slot) in angles.iter_mut().enumerate().skip(1) {
                if spec.rank_p + i < flat {
                    *slot = rng.random::<f64>() * theta1;
                }
            }
        }
        Some(_) => {} // gap 0: all angles zero, P == Q when ranks match
        None => {
            if spec.rank_p == spec.rank_q {
                for (i, slot) in angles.iter_mut().enumerate() {
                    if spec.rank_p + i < flat {
                        *slot = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
                    }
                }
            }
            // Unequal ranks: angles stay zero; the rank excess already
            // forces gap 1.
        }
    }

    let (p0, q0) = projection_pair_with_angles(shape, spec.rank_p, spec.rank_q, &angles)?;
    let u = haar_unitary(flat, &mut rng);
    let u_adj = u.adjoint();
    let p = GramianOperator::endo(shape, (&(&u * p0.matrix()) * &u_adj).hermitized())
        .expect("conjugation keeps the shape");
    let q = GramianOperator::endo(shape, (&(&u * q0.matrix()) * &u_adj).hermitized())
        .expect("conjugation keeps the shape");

    let expected = match spec.target_gap {
        Some(gap) => gap,
        None if spec.rank_p != spec.rank_q => 1.0,
        None => angles.iter().fold(0.0f64, |acc, &t| acc.max(t)).sin(),
    };
    let measured = (&p - &q).op_norm();
    if (measured - expected).abs() > 1e-9 {
        return Err(GramianError::Numeric(format!(
            "sampler self-check failed: measured gap {measured:.12} vs expected {expected:.12}"
        )));
    }
    Ok((p, q))
}

/// Random operator with independent standard complex Gaussian entries.
pub fn sample_gaussian_operator(shape: SpaceShape, seed: u64) -> GramianOperator {
    let flat = shape.flat_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = ComplexMatrix::from_dmatrix(nalgebra::DMatrix::from_fn(flat, flat, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }));
    GramianOperator::endo(shape, data).expect("dimensions match by construction")
}

/// Random partial isometry `U D V*` of the given rank, with `U`, `V`
/// Haar unitaries and `D` the rank-`r` diagonal 0/1 matrix.
pub fn sample_partial_isometry(
    shape: SpaceShape,
    rank: usize,
    seed: u64,
) -> Result<GramianOperator> {
    let flat = shape.flat_dim();
    if rank > flat {
        return Err(GramianError::InfeasibleSpec(format!(
            "rank {rank} exceeds the flattened dimension {flat}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = haar_unitary(flat, &mut rng);
    let v = haar_unitary(flat, &mut rng);
    let mut diag = vec![0.0f64; flat];
    for slot in diag.iter_mut().take(rank) {
        *slot = 1.0;
    }
    let d = ComplexMatrix::from_real_diagonal(&diag);
    GramianOperator::endo(shape, &(&u * &d) * &v.adjoint())
}

/// The norm-one witness: two orthogonal equal-rank projections `P`, `Q`
/// (rank `floor(nd / 2)`) with `PQ = 0` and `||P - Q|| = 1`, together
/// with the block shift `T` mapping the range of `P` onto the range of
/// `Q`, so `T*T = P` and `TT* = Q` hold exactly even though the gap
/// hypothesis fails. The pair is fed to [`build`] to confirm the
/// hypothesis rejection before returning.
pub fn remark_counterexample(
    shape: SpaceShape,
) -> Result<(GramianOperator, GramianOperator, GramianOperator)> {
    let flat = shape.flat_dim();
    if flat < 2 {
        return Err(GramianError::InfeasibleSpec(
            "the norm-one example needs flattened dimension at least 2".into(),
        ));
    }
    let k = flat / 2;
    let mut p = nalgebra::DMatrix::<C64>::zeros(flat, flat);
    let mut q = nalgebra::DMatrix::<C64>::zeros(flat, flat);
    let mut t = nalgebra::DMatrix::<C64>::zeros(flat, flat);
    for i in 0..k {
        p[(i, i)] = C64::new(1.0, 0.0);
        q[(k + i, k + i)] = C64::new(1.0, 0.0);
        t[(k + i, i)] = C64::new(1.0, 0.0);
    }
    let p = GramianOperator::endo(shape, ComplexMatrix::from_dmatrix(p))?;
    let q = GramianOperator::endo(shape, ComplexMatrix::from_dmatrix(q))?;
    let t = GramianOperator::endo(shape, ComplexMatrix::from_dmatrix(t))?;

    match build(&p, &q, &Tolerances::default(), 4, 0) {
        Err(GramianError::HypothesisViolated { .. }) => Ok((p, q, t)),
        Ok(_) => Err(GramianError::Numeric(
            "norm-one pair unexpectedly satisfied the gap hypothesis".into(),
        )),
        Err(other) => Err(other),
    }
}

/// Configuration of a verification sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub shapes: Vec<SpaceShape>,
    pub gaps: Vec<f64>,
    pub tol: Tolerances,
    pub seed: u64,
}

impl SuiteConfig {
    /// The standard sweep: shapes `(2,1), (4,1), (8,1), (2,2), (3,2), (2,3)`
    /// crossed with gaps `0.1, 0.3, 0.5, 0.7, 0.9, 0.95`.
    pub fn standard(trials: usize, seed: u64) -> Self {
        let shapes = [(2, 1), (4, 1), (8, 1), (2, 2), (3, 2), (2, 3)]
            .iter()
            .map(|&(n, d)| SpaceShape { n, d })
            .collect();
        Self {
            trials,
            shapes,
            gaps: vec![0.1, 0.3, 0.5, 0.7, 0.9, 0.95],
            tol: Tolerances::default(),
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(GramianError::InvalidInput("suite needs trials >= 1".into()));
        }
        if self.shapes.is_empty() || self.gaps.is_empty() {
            return Err(GramianError::InvalidInput(
                "suite needs at least one shape and one gap".into(),
            ));
        }
        self.tol.validate()
    }
}

/// Summary of one sweep. `worst_residuals` holds, per proof identity,
/// the largest residual observed across all successful builds;
/// `failing_seeds` carries the per-trial seeds of unexpected failures so
/// any failure is reproducible in isolation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub trials: usize,
    pub passes: usize,
    pub hypothesis_failures: usize,
    pub worst_residuals: BTreeMap<String, f64>,
    pub failing_seeds: Vec<u64>,
}

/// Run `sample -> build -> verify_trace -> classify` per trial, cycling
/// through every shape x gap combination. Deterministic for a fixed
/// config: per-trial seeds come from [`split_seed`], so the outcome is
/// independent of any execution order.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let combos = config.shapes.len() * config.gaps.len();
    let mut passes = 0usize;
    let mut hypothesis_failures = 0usize;
    let mut worst_residuals: BTreeMap<String, f64> = BTreeMap::new();
    let mut failing_seeds = Vec::new();

    for trial in 0..config.trials {
        let trial_seed = split_seed(config.seed, trial as u64);
        let combo = trial % combos;
        let shape = config.shapes[combo % config.shapes.len()];
        let gap = config.gaps[combo / config.shapes.len()];
        let flat = shape.flat_dim();

        let mut rank_rng = ChaCha8Rng::seed_from_u64(split_seed(trial_seed, 0));
        let max_rank = (flat / 2).max(1);
        let rank = rank_rng.random_range(1..=max_rank);

        let spec = SampleSpec {
            shape,
            target_gap: Some(gap),
            rank_p: rank,
            rank_q: rank,
            seed: split_seed(trial_seed, 1),
        };

        let expected_rejection = gap >= 1.0 - HYPOTHESIS_MARGIN;
        let outcome = sample_projection_pair(&spec).and_then(|(p, q)| {
            build(&p, &q, &config.tol, SUITE_BUILD_SAMPLES, split_seed(trial_seed, 2))
        });

        match outcome {
            Ok(result) => {
                let verdict = verify_trace(&result, &config.tol)?;
                for (name, value) in verdict.trace.residuals() {
                    let slot = worst_residuals.entry(name.to_string()).or_insert(0.0);
                    if value > *slot {
                        *slot = value;
                    }
                }
                let classification = classify(&result.t, &config.tol);
                if verdict.pass && classification.is_partial_isometry && !expected_rejection {
                    passes += 1;
                } else {
                    failing_seeds.push(trial_seed);
                }
            }
            Err(GramianError::HypothesisViolated { .. }) if expected_rejection => {
                hypothesis_failures += 1;
            }
            Err(_) => failing_seeds.push(trial_seed),
        }
    }

    Ok(SuiteReport {
        trials: config.trials,
        passes,
        hypothesis_failures,
        worst_residuals,
        failing_seeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{eigh, rel_residual};
    use crate::space::{is_gramian_projection, op_residual};

    fn shape(n: usize, d: usize) -> SpaceShape {
        SpaceShape::new(n, d).unwrap()
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for dim in [1, 2, 5, 8] {
            let u = haar_unitary(dim, &mut rng);
            let gram = &u.adjoint() * &u;
            assert!(rel_residual(&gram, &ComplexMatrix::identity(dim)) < 1e-13);
        }
    }

    #[test]
    fn zero_gap_gives_equal_projections() {
        let spec = SampleSpec {
            shape: shape(3, 1),
            target_gap: Some(0.0),
            rank_p: 2,
            rank_q: 2,
            seed: 5,
        };
        let (p, q) = sample_projection_pair(&spec).unwrap();
        assert!(op_residual(&p, &q) < 1e-15);
    }

    #[test]
    fn basis_pair_at_pi_over_6_is_the_golden_pair() {
        let theta = std::f64::consts::FRAC_PI_6;
        let (p, q) = projection_pair_with_angles(shape(2, 1), 1, 1, &[theta]).unwrap();
        let s3 = 3.0f64.sqrt();
        let p_expect = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let q_expect = ComplexMatrix::from_real_entries(
            2,
            2,
            &[0.75, s3 / 4.0, s3 / 4.0, 0.25],
        )
        .unwrap();
        assert!((p.matrix() - &p_expect).spectral_norm() < 1e-12);
        assert!((q.matrix() - &q_expect).spectral_norm() < 1e-12);

        // Eigenvalues of the rank-1 difference at angle t are +-sin(t).
        let diff = p.matrix() - q.matrix();
        let decomp = eigh(&diff).unwrap();
        assert!((decomp.eigenvalues[0] + 0.5).abs() < 1e-12);
        assert!((decomp.eigenvalues[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampled_pairs_hit_the_target_gap() {
        let tol = Tolerances::default();
        for (i, &gap) in [0.1, 0.5, 0.9, 0.95].iter().enumerate() {
            let spec = SampleSpec {
                shape: shape(3, 2),
                target_gap: Some(gap),
                rank_p: 2,
                rank_q: 2,
                seed: 100 + i as u64,
            };
            let (p, q) = sample_projection_pair(&spec).unwrap();
            let check = is_gramian_projection(&p, &tol).unwrap();
            assert!(check.selfadjoint_residual < 1e-12 && check.idempotent_residual < 1e-12);
            let check = is_gramian_projection(&q, &tol).unwrap();
            assert!(check.selfadjoint_residual < 1e-12 && check.idempotent_residual < 1e-12);
            assert!(((&p - &q).op_norm() - gap).abs() < 1e-9);
        }
    }

    #[test]
    fn a_thousand_samples_hit_their_targets() {
        // The sampler self-checks |measured - target| <= 1e-9 on every
        // call and errors otherwise, so surviving the loop is the assertion.
        let shapes = [shape(2, 1), shape(4, 1), shape(3, 2)];
        for i in 0..1000u64 {
            let gap = f64::from((i % 20) as u32) / 20.0;
            let spec = SampleSpec {
                shape: shapes[(i % 3) as usize],
                target_gap: Some(gap),
                rank_p: 1,
                rank_q: 1,
                seed: split_seed(0xACC, i),
            };
            let (p, q) = sample_projection_pair(&spec).unwrap();
            assert!(((&p - &q).op_norm() - gap).abs() <= 1e-9);
        }
    }

    #[test]
    fn unequal_ranks_measure_gap_one() {
        let spec = SampleSpec {
            shape: shape(4, 1),
            target_gap: None,
            rank_p: 2,
            rank_q: 1,
            seed: 17,
        };
        let (p, q) = sample_projection_pair(&spec).unwrap();
        assert!(((&p - &q).op_norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        let spec = SampleSpec {
            shape: shape(2, 1),
            target_gap: Some(0.5),
            rank_p: 2,
            rank_q: 1,
            seed: 0,
        };
        assert!(matches!(
            sample_projection_pair(&spec),
            Err(GramianError::InfeasibleSpec(_))
        ));

        // Full-rank P leaves no room for a rotated direction.
        let spec = SampleSpec {
            shape: shape(2, 1),
            target_gap: Some(0.5),
            rank_p: 2,
            rank_q: 2,
            seed: 0,
        };
        assert!(matches!(
            sample_projection_pair(&spec),
            Err(GramianError::InfeasibleSpec(_))
        ));
    }

    #[test]
    fn sampled_partial_isometries_classify_true() {
        let tol = Tolerances::default();
        let s = shape(2, 1);
        let full = sample_partial_isometry(s, 2, 3).unwrap();
        let report = classify(&full, &tol);
        assert!(report.is_partial_isometry);
        // Full rank: a gramian unitary.
        assert!(op_residual(&report.initial_projection, &GramianOperator::identity(s)) < 1e-12);

        let zero = sample_partial_isometry(s, 0, 3).unwrap();
        assert_eq!(zero.op_norm(), 0.0);

        let one = sample_partial_isometry(s, 1, 77).unwrap();
        let report = classify(&one, &tol);
        assert!(report.is_partial_isometry);
        assert!(report.worst_residual() <= 1e-12);
    }

    #[test]
    fn counterexample_small_cases() {
        let tol = Tolerances::default();
        let (p, q, t) = remark_counterexample(shape(2, 1)).unwrap();
        assert!((p.matrix() - &ComplexMatrix::from_real_diagonal(&[1.0, 0.0])).spectral_norm() == 0.0);
        assert!((q.matrix() - &ComplexMatrix::from_real_diagonal(&[0.0, 1.0])).spectral_norm() == 0.0);
        let t_expect = ComplexMatrix::from_real_entries(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(t.matrix(), &t_expect);

        // P Q = 0 exactly, gap exactly 1, T*T = P and TT* = Q exactly.
        assert_eq!((p.matrix() * q.matrix()).spectral_norm(), 0.0);
        assert!(((&p - &q).op_norm() - 1.0).abs() < 1e-12);
        assert_eq!((&(&t.adjoint() * &t) - &p).op_norm(), 0.0);
        assert_eq!((&(&t * &t.adjoint()) - &q).op_norm(), 0.0);
        assert!(classify(&t, &tol).is_partial_isometry);

        // Doubled block version.
        let (p, q, t) = remark_counterexample(shape(4, 1)).unwrap();
        assert!(((&p - &q).op_norm() - 1.0).abs() < 1e-12);
        assert!(classify(&t, &tol).is_partial_isometry);
        assert_eq!((p.matrix() * q.matrix()).spectral_norm(), 0.0);

        assert!(matches!(
            remark_counterexample(shape(1, 1)),
            Err(GramianError::InfeasibleSpec(_))
        ));
    }

    #[test]
    fn single_trial_suite_passes() {
        let config = SuiteConfig {
            trials: 1,
            shapes: vec![shape(2, 1)],
            gaps: vec![0.0],
            tol: Tolerances::default(),
            seed: 9,
        };
        let report = run_suite(&config).unwrap();
        assert_eq!(report.passes, 1);
        assert!(report.failing_seeds.is_empty());
    }

    #[test]
    fn gap_one_trials_count_as_hypothesis_failures() {
        let config = SuiteConfig {
            trials: 6,
            shapes: vec![shape(2, 1), shape(2, 2)],
            gaps: vec![1.0],
            tol: Tolerances::default(),
            seed: 4,
        };
        let report = run_suite(&config).unwrap();
        assert_eq!(report.hypothesis_failures, 6);
        assert_eq!(report.passes, 0);
        assert!(report.failing_seeds.is_empty());
    }

    #[test]
    fn suite_reports_are_byte_identical() {
        let config = SuiteConfig::standard(24, 42);
        let a = serde_json::to_vec(&run_suite(&config).unwrap()).unwrap();
        let b = serde_json::to_vec(&run_suite(&config).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
