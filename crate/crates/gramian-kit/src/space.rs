//! The pseudo-Hilbert module `H = Z^n` over `Z = M_d(C)`.
//!
//! Elements are `n`-tuples of `d x d` blocks, flattened to `(n d) x d`
//! complex matrices; adjointable operators between such modules are
//! plain `(n_out d) x (n_in d)` matrices acting by multiplication. In
//! this realization every operator is adjointable and bounded, with the
//! gramian adjoint equal to the conjugate transpose and the module
//! operator norm equal to the spectral norm of the flattened matrix —
//! the hierarchy of linear / bounded / adjointable operator classes
//! collapses here, which is exactly what makes everything computable.

use rand::{Rng, RngExt};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GramianError, Result};
use crate::matrix::{
    column_space_projector, eigh, loewner_leq, rel_residual, ComplexMatrix, Tolerances, C64,
};

/// Shape `(n, d)` of the module `H = Z^n` over `Z = M_d(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceShape {
    /// Module rank: number of `Z`-coordinates.
    pub n: usize,
    /// Degree of the coefficient algebra `M_d(C)`.
    pub d: usize,
}

impl SpaceShape {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(GramianError::InvalidInput(
                "space shape needs n >= 1 and d >= 1".into(),
            ));
        }
        Ok(Self { n, d })
    }

    /// Dimension of the flattened complex carrier, `n * d`.
    pub fn flat_dim(&self) -> usize {
        self.n * self.d
    }
}

impl std::fmt::Display for SpaceShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z^{} over M_{}(C)", self.n, self.d)
    }
}

/// Element of `H = Z^n`: `n` stacked `d x d` blocks, stored `(n d) x d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorWire", into = "VectorWire")]
pub struct GramianVector {
    shape: SpaceShape,
    data: ComplexMatrix,
}

impl GramianVector {
    pub fn new(shape: SpaceShape, data: ComplexMatrix) -> Result<Self> {
        if data.rows() != shape.flat_dim() || data.cols() != shape.d {
            return Err(GramianError::ShapeMismatch(format!(
                "vector in {} must be {}x{}, got {}x{}",
                shape,
                shape.flat_dim(),
                shape.d,
                data.rows(),
                data.cols()
            )));
        }
        Ok(Self { shape, data })
    }

    /// The `i`-th module basis vector: block `i` is the `d x d` identity.
    pub fn basis(shape: SpaceShape, index: usize) -> Result<Self> {
        if index >= shape.n {
            return Err(GramianError::InvalidInput(format!(
                "basis index {} out of range for {}",
                index, shape
            )));
        }
        let mut data = ComplexMatrix::zeros(shape.flat_dim(), shape.d);
        for k in 0..shape.d {
            data.data[(index * shape.d + k, k)] = C64::new(1.0, 0.0);
        }
        Ok(Self { shape, data })
    }

    /// Standard complex Gaussian entries, then scaled to unit Frobenius
    /// norm. Sampling is deterministic in the generator state.
    pub fn random_unit<R: Rng>(shape: SpaceShape, rng: &mut R) -> Self {
        loop {
            let data = ComplexMatrix::from_dmatrix(nalgebra::DMatrix::from_fn(
                shape.flat_dim(),
                shape.d,
                |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            ));
            let norm = data.frobenius_norm();
            if norm > 0.0 {
                return Self {
                    shape,
                    data: data.scaled(1.0 / norm),
                };
            }
        }
    }

    pub fn shape(&self) -> SpaceShape {
        self.shape
    }

    pub fn data(&self) -> &ComplexMatrix {
        &self.data
    }
}

/// Adjointable operator `H -> K` between modules over the same `M_d(C)`,
/// stored as the `(n_out d) x (n_in d)` matrix acting on flattened vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorWire", into = "OperatorWire")]
pub struct GramianOperator {
    shape_in: SpaceShape,
    shape_out: SpaceShape,
    data: ComplexMatrix,
}

impl GramianOperator {
    pub fn new(shape_in: SpaceShape, shape_out: SpaceShape, data: ComplexMatrix) -> Result<Self> {
        if shape_in.d != shape_out.d {
            return Err(GramianError::ShapeMismatch(format!(
                "operator endpoints must share the coefficient algebra: {} vs {}",
                shape_in, shape_out
            )));
        }
        if data.rows() != shape_out.flat_dim() || data.cols() != shape_in.flat_dim() {
            return Err(GramianError::ShapeMismatch(format!(
                "operator {} -> {} must be {}x{}, got {}x{}",
                shape_in,
                shape_out,
                shape_out.flat_dim(),
                shape_in.flat_dim(),
                data.rows(),
                data.cols()
            )));
        }
        Ok(Self {
            shape_in,
            shape_out,
            data,
        })
    }

    /// Operator on a single space (`H -> H`).
    pub fn endo(shape: SpaceShape, data: ComplexMatrix) -> Result<Self> {
        Self::new(shape, shape, data)
    }

    pub fn identity(shape: SpaceShape) -> Self {
        Self {
            shape_in: shape,
            shape_out: shape,
            data: ComplexMatrix::identity(shape.flat_dim()),
        }
    }

    pub fn zero(shape_in: SpaceShape, shape_out: SpaceShape) -> Self {
        Self {
            shape_in,
            shape_out,
            data: ComplexMatrix::zeros(shape_out.flat_dim(), shape_in.flat_dim()),
        }
    }

    pub fn shape_in(&self) -> SpaceShape {
        self.shape_in
    }

    pub fn shape_out(&self) -> SpaceShape {
        self.shape_out
    }

    pub fn is_endomorphism(&self) -> bool {
        self.shape_in == self.shape_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.data
    }

    /// Gramian adjoint; in this realization the conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            shape_in: self.shape_out,
            shape_out: self.shape_in,
            data: self.data.adjoint(),
        }
    }

    /// Operator norm in the boundedness inequality
    /// `[Th, Th] <= M^2 [h, h]`: the spectral norm of the flattened matrix.
    pub fn op_norm(&self) -> f64 {
        self.data.spectral_norm()
    }

    /// Apply to a vector: plain matrix multiplication of flattened forms.
    pub fn apply(&self, h: &GramianVector) -> Result<GramianVector> {
        if h.shape() != self.shape_in {
            return Err(GramianError::ShapeMismatch(format!(
                "operator expects input in {}, vector lives in {}",
                self.shape_in,
                h.shape()
            )));
        }
        GramianVector::new(self.shape_out, &self.data * h.data())
    }
}

impl std::ops::Add for &GramianOperator {
    type Output = GramianOperator;
    fn add(self, rhs: &GramianOperator) -> GramianOperator {
        assert_eq!(self.shape_in, rhs.shape_in, "operator addition shape mismatch");
        assert_eq!(self.shape_out, rhs.shape_out, "operator addition shape mismatch");
        GramianOperator {
            shape_in: self.shape_in,
            shape_out: self.shape_out,
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub for &GramianOperator {
    type Output = GramianOperator;
    fn sub(self, rhs: &GramianOperator) -> GramianOperator {
        assert_eq!(self.shape_in, rhs.shape_in, "operator subtraction shape mismatch");
        assert_eq!(self.shape_out, rhs.shape_out, "operator subtraction shape mismatch");
        GramianOperator {
            shape_in: self.shape_in,
            shape_out: self.shape_out,
            data: &self.data - &rhs.data,
        }
    }
}

/// Composition `self . rhs` (apply `rhs` first).
impl std::ops::Mul for &GramianOperator {
    type Output = GramianOperator;
    fn mul(self, rhs: &GramianOperator) -> GramianOperator {
        assert_eq!(
            self.shape_in, rhs.shape_out,
            "operator composition shape mismatch"
        );
        GramianOperator {
            shape_in: rhs.shape_in,
            shape_out: self.shape_out,
            data: &self.data * &rhs.data,
        }
    }
}

/// The `Z`-valued inner product `[h, k] = h* k`, conjugate-linear in the
/// first argument. With this convention `[h, h]` is a positive
/// semidefinite element of `M_d(C)` by construction.
pub fn gramian(h: &GramianVector, k: &GramianVector) -> Result<ComplexMatrix> {
    if h.shape() != k.shape() {
        return Err(GramianError::ShapeMismatch(format!(
            "gramian of vectors in different spaces: {} vs {}",
            h.shape(),
            k.shape()
        )));
    }
    Ok(&h.data().adjoint() * k.data())
}

/// Selfadjointness and idempotency residuals for a candidate projection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionCheck {
    /// `||P - P*|| / (1 + ||P||)`.
    pub selfadjoint_residual: f64,
    /// `||P^2 - P|| / (1 + ||P||)`.
    pub idempotent_residual: f64,
    /// Both residuals within `eq_rel`.
    pub ok: bool,
}

/// Check that `P` is a gramian selfadjoint projection: `P = P* = P^2`
/// up to the relative residual bound.
pub fn is_gramian_projection(p: &GramianOperator, tol: &Tolerances) -> Result<ProjectionCheck> {
    if !p.is_endomorphism() {
        return Err(GramianError::ShapeMismatch(format!(
            "projection candidate must act on one space, got {} -> {}",
            p.shape_in(),
            p.shape_out()
        )));
    }
    let norm = p.op_norm();
    let scale = 1.0 + norm;
    let selfadjoint_residual = (p.matrix() - &p.matrix().adjoint()).spectral_norm() / scale;
    let idempotent_residual = (&(p.matrix() * p.matrix()) - p.matrix()).spectral_norm() / scale;
    Ok(ProjectionCheck {
        selfadjoint_residual,
        idempotent_residual,
        ok: selfadjoint_residual <= tol.eq_rel && idempotent_residual <= tol.eq_rel,
    })
}

/// Gramian selfadjoint projection onto the submodule generated by the
/// given vectors: the column-space projector of their horizontal
/// concatenation. An empty generator list yields the zero projector on
/// the stated shape.
pub fn submodule_projection(
    shape: SpaceShape,
    generators: &[GramianVector],
) -> Result<GramianOperator> {
    for g in generators {
        if g.shape() != shape {
            return Err(GramianError::ShapeMismatch(format!(
                "generator lives in {}, expected {}",
                g.shape(),
                shape
            )));
        }
    }
    let Some(first) = generators.first() else {
        return Ok(GramianOperator::zero(shape, shape));
    };
    let mut stacked = first.data().clone();
    for g in &generators[1..] {
        stacked = stacked.hstack(g.data())?;
    }
    GramianOperator::endo(shape, column_space_projector(&stacked))
}

/// Certificate for the boundedness inequality `[Th, Th] <= M^2 [h, h]`.
///
/// `global_ok` is the operator-level Loewner check `T*T <= M^2 I`;
/// `sampled_ok` re-verifies the inequality as a `Z`-element on random
/// unit vectors. `worst_residual` is the largest (normalized) eigenvalue
/// deficit seen across the samples, 0 when every sampled difference was
/// positive semidefinite outright.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundednessCertificate {
    pub operator: GramianOperator,
    pub bound: f64,
    pub global_ok: bool,
    pub sampled_ok: bool,
    pub worst_residual: f64,
    pub samples: usize,
}

/// Check `[Th, Th] <= M^2 [h, h]` both globally (Loewner order on
/// `M^2 I - T*T`) and on `samples` random unit vectors drawn from the
/// seeded generator. Failures are reported in the certificate, never thrown.
pub fn boundedness_certificate(
    t: &GramianOperator,
    bound: f64,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> BoundednessCertificate {
    use rand::SeedableRng;
    let m2 = bound * bound;
    let tstar_t = &t.adjoint() * t;
    let scaled_id = GramianOperator::identity(t.shape_in());
    let scaled_id = GramianOperator {
        shape_in: scaled_id.shape_in,
        shape_out: scaled_id.shape_out,
        data: scaled_id.data.scaled(m2),
    };
    let global_ok = loewner_leq(tstar_t.matrix(), scaled_id.matrix(), tol)
        .expect("shapes agree by construction");

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst_residual = 0.0f64;
    let mut sampled_ok = true;
    for _ in 0..samples {
        let h = GramianVector::random_unit(t.shape_in(), &mut rng);
        let th = t.apply(&h).expect("shape fixed by sampler");
        let lhs = gramian(&th, &th).expect("same space");
        let rhs = gramian(&h, &h).expect("same space").scaled(m2);
        let diff = (&rhs - &lhs).hermitized();
        let decomp = eigh(&diff).expect("square by construction");
        let scale = 1.0 + diff.spectral_norm();
        let deficit = (-decomp.eigenvalues[0]).max(0.0) / scale;
        worst_residual = worst_residual.max(deficit);
        if decomp.eigenvalues[0] < -tol.psd_abs * scale {
            sampled_ok = false;
        }
    }
    BoundednessCertificate {
        operator: t.clone(),
        bound,
        global_ok,
        sampled_ok,
        worst_residual,
        samples,
    }
}

/// Relative distance between two operators on matching spaces.
pub fn op_residual(a: &GramianOperator, b: &GramianOperator) -> f64 {
    rel_residual(a.matrix(), b.matrix())
}

#[derive(Serialize, Deserialize)]
struct VectorWire {
    n: usize,
    d: usize,
    matrix: ComplexMatrix,
}

impl From<GramianVector> for VectorWire {
    fn from(v: GramianVector) -> Self {
        Self {
            n: v.shape.n,
            d: v.shape.d,
            matrix: v.data,
        }
    }
}

impl TryFrom<VectorWire> for GramianVector {
    type Error = GramianError;
    fn try_from(w: VectorWire) -> Result<Self> {
        GramianVector::new(SpaceShape::new(w.n, w.d)?, w.matrix)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorWire {
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_in: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_out: Option<usize>,
    d: usize,
    matrix: ComplexMatrix,
}

impl From<GramianOperator> for OperatorWire {
    fn from(t: GramianOperator) -> Self {
        if t.is_endomorphism() {
            Self {
                n: Some(t.shape_in.n),
                n_in: None,
                n_out: None,
                d: t.shape_in.d,
                matrix: t.data,
            }
        } else {
            Self {
                n: None,
                n_in: Some(t.shape_in.n),
                n_out: Some(t.shape_out.n),
                d: t.shape_in.d,
                matrix: t.data,
            }
        }
    }
}

impl TryFrom<OperatorWire> for GramianOperator {
    type Error = GramianError;
    fn try_from(w: OperatorWire) -> Result<Self> {
        let (n_in, n_out) = match (w.n, w.n_in, w.n_out) {
            (Some(n), None, None) => (n, n),
            (None, Some(n_in), Some(n_out)) => (n_in, n_out),
            _ => {
                return Err(GramianError::InvalidInput(
                    "operator JSON needs either \"n\" or both \"n_in\" and \"n_out\"".into(),
                ))
            }
        };
        GramianOperator::new(
            SpaceShape::new(n_in, w.d)?,
            SpaceShape::new(n_out, w.d)?,
            w.matrix,
        )
    }
}
