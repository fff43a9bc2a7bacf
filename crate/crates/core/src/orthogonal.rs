//! The continuous layer: maximal totally null subspaces of R^{n,n} as forms
//! `(u, s)`, their normal form `(I, t)` with `t` in `O(n)`, and the
//! experimental search for `O(n)` elements outside the clauses' cover.
//!
//! A form `(u, s)` is the column span of the stacked `2n x n` block
//! `[u; s]`. The quadratic form is `(x, y)^2 = x^2 - y^2`.
//!
//! Classification into the `2^n` classes is partial: only symmetric
//! involutions get a label, everything else is reported as unclassified.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::lattice::AtomSet;
use crate::null_geometry::{atom_of_lambda, o1n_cover_test, tprime_of_clause, SignatureLambda};
use crate::sat::{CnfFormula, Status};
use crate::{check_guard, Error, Result};

pub type Matrix = DMatrix<f64>;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_CONDITION_BOUND: f64 = 1e8;
pub const DEFAULT_GIVENS_STEPS: u32 = 16;

/// Residuals in `(eps, INDETERMINATE_FACTOR * eps]` are flagged rather than
/// classified or rejected.
pub const INDETERMINATE_FACTOR: f64 = 100.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceForm {
    pub first: Matrix,
    pub second: Matrix,
}

impl SubspaceForm {
    pub fn new(first: Matrix, second: Matrix) -> Result<Self> {
        let n = first.nrows();
        if !first.is_square() || second.shape() != (n, n) {
            return Err(Error::InvalidParameters(format!(
                "form blocks must be equal square matrices, got {:?} and {:?}",
                first.shape(),
                second.shape()
            )));
        }
        Ok(Self { first, second })
    }

    /// `(I, t)`.
    pub fn graph(t: &Matrix) -> Self {
        Self {
            first: Matrix::identity(t.nrows(), t.nrows()),
            second: t.clone(),
        }
    }

    /// `P = (I, I)`.
    pub fn reference(n: usize) -> Self {
        Self::graph(&Matrix::identity(n, n))
    }

    /// `Q = (I, -I)`.
    pub fn opposite(n: usize) -> Self {
        Self::graph(&-Matrix::identity(n, n))
    }

    pub fn dimension(&self) -> usize {
        self.first.nrows()
    }

    /// The `2n x n` column block `[first; second]`.
    pub fn stacked(&self) -> Matrix {
        let n = self.dimension();
        let mut out = Matrix::zeros(2 * n, n);
        out.view_mut((0, 0), (n, n)).copy_from(&self.first);
        out.view_mut((n, 0), (n, n)).copy_from(&self.second);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix(Matrix);

impl OrthogonalMatrix {
    pub fn new(m: Matrix, tolerance: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidParameters(format!(
                "orthogonal matrix must be square, got {:?}",
                m.shape()
            )));
        }
        let residual = orthogonality_residual(&m);
        if residual > tolerance {
            return Err(Error::Tolerance {
                what: "orthogonality",
                residual,
                tolerance,
            });
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n, n))
    }

    pub fn from_lambda(l: &SignatureLambda) -> Self {
        Self(l.to_matrix())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_inner(self) -> Matrix {
        self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.nrows()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn residual(&self) -> f64 {
        orthogonality_residual(&self.0)
    }
}

/// `||m^T m - I||_F`.
pub fn orthogonality_residual(m: &Matrix) -> f64 {
    (m.transpose() * m - Matrix::identity(m.ncols(), m.ncols())).norm()
}

pub fn condition_number(m: &Matrix) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `min_X ||b X - a||_F`, relative to `max(1, ||a||_F)`. `b` must have full
/// column rank; otherwise the residual is infinite.
pub fn span_residual(a: &Matrix, b: &Matrix) -> f64 {
    if b.ncols() > b.nrows() {
        return f64::INFINITY;
    }
    let qr = b.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let Some(x) = r.solve_upper_triangular(&(q.transpose() * a)) else {
        return f64::INFINITY;
    };
    (b * x - a).norm() / a.norm().max(1.0)
}

/// Mutual least-squares residual of two column spans.
pub fn spans_residual(a: &Matrix, b: &Matrix) -> f64 {
    span_residual(a, b).max(span_residual(b, a))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericOptions {
    pub tolerance: f64,
    pub condition_bound: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            condition_bound: DEFAULT_CONDITION_BOUND,
        }
    }
}

/// `(u, s) -> (I, s u^{-1})`, checking that both forms span the same subspace.
pub fn normalize_form(f: &SubspaceForm, opts: NumericOptions) -> Result<SubspaceForm> {
    let condition = condition_number(&f.first);
    if condition.is_nan() || condition > opts.condition_bound {
        return Err(Error::IllConditioned { condition });
    }
    let inv = f
        .first
        .clone()
        .try_inverse()
        .ok_or(Error::IllConditioned { condition })?;
    let out = SubspaceForm::graph(&(&f.second * inv));
    let residual = spans_residual(&f.stacked(), &out.stacked());
    if residual > opts.tolerance {
        return Err(Error::Tolerance {
            what: "span",
            residual,
            tolerance: opts.tolerance,
        });
    }
    Ok(out)
}

/// The Gram matrix of the columns under the `(n, n)` metric vanishes.
pub fn is_totally_null(f: &SubspaceForm, tolerance: f64) -> bool {
    let utu = f.first.transpose() * &f.first;
    let gram = &utu - f.second.transpose() * &f.second;
    let scale = (utu.norm() / (f.dimension() as f64).sqrt()).max(1.0);
    gram.norm() <= tolerance * scale
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    /// Image of `(I, t1)`; always `(I, I)`.
    pub reference: SubspaceForm,
    /// Image of `(I, t2)`: `(I, u^T t1^T t2 u)`.
    pub transformed: SubspaceForm,
    /// `||B W' - W||_F`.
    pub reconstruction_residual: f64,
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut out = Matrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (n, n)).copy_from(b);
    out
}

/// Moves the pair `(I, t1)`, `(I, t2)` into the orthogonal basis
/// `B = diag(u, t1 u)` of R^{n,n}, where the first becomes `(I, I)` and the
/// second `(I, u^T t1^T t2 u)`.
pub fn basis_change(
    t1: &OrthogonalMatrix,
    t2: &OrthogonalMatrix,
    u: &OrthogonalMatrix,
    opts: NumericOptions,
) -> Result<BasisChange> {
    let n = t1.dimension();
    if t2.dimension() != n || u.dimension() != n {
        return Err(Error::DimensionMismatch {
            left: n as u32,
            right: t2.dimension().max(u.dimension()) as u32,
        });
    }
    for (m, _) in [(t1, "t1"), (t2, "t2"), (u, "u")] {
        let residual = m.residual();
        if residual > opts.tolerance {
            return Err(Error::Tolerance {
                what: "orthogonality",
                residual,
                tolerance: opts.tolerance,
            });
        }
    }
    let (t1m, t2m, um) = (t1.matrix(), t2.matrix(), u.matrix());
    let id = Matrix::identity(n, n);

    let mut w = Matrix::zeros(2 * n, 2 * n);
    w.view_mut((0, 0), (n, n)).copy_from(&id);
    w.view_mut((0, n), (n, n)).copy_from(&id);
    w.view_mut((n, 0), (n, n)).copy_from(t1m);
    w.view_mut((n, n), (n, n)).copy_from(t2m);

    let b = block_diag(um, &(t1m * um));
    let metric = block_diag(&id, &-id.clone());
    let isometry = (b.transpose() * &metric * &b - &metric).norm();
    if isometry > opts.tolerance {
        return Err(Error::Tolerance {
            what: "basis isometry",
            residual: isometry,
            tolerance: opts.tolerance,
        });
    }

    let w_prime = b.transpose() * &w;
    let reconstruction_residual = (&b * &w_prime - &w).norm();
    if reconstruction_residual > opts.tolerance {
        return Err(Error::Tolerance {
            what: "basis reconstruction",
            residual: reconstruction_residual,
            tolerance: opts.tolerance,
        });
    }

    let half = |col: usize| {
        SubspaceForm::new(
            w_prime.view((0, col), (n, n)).into_owned(),
            w_prime.view((n, col), (n, n)).into_owned(),
        )
    };
    let reference = normalize_form(&half(0)?, opts)?;
    let transformed = normalize_form(&half(n)?, opts)?;

    let expected = um.transpose() * t1m.transpose() * t2m * um;
    let residual = (&transformed.second - &expected).norm();
    if residual > opts.tolerance {
        return Err(Error::Tolerance {
            what: "transformed form",
            residual,
            tolerance: opts.tolerance,
        });
    }
    Ok(BasisChange {
        reference,
        transformed,
        reconstruction_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassLabel {
    /// A symmetric involution with its `lambda`. `axis_weights[i]` is the
    /// diagonal of the projector onto the `-1` eigenspace; the `-1` signs go
    /// to the axes with the largest weights (ties to the lower index).
    Class {
        lambda: SignatureLambda,
        axis_weights: Vec<f64>,
    },
    /// Within `INDETERMINATE_FACTOR` of the involution tolerance.
    Indeterminate { residual: f64 },
    Unclassified,
}

impl ClassLabel {
    pub fn lambda(&self) -> Option<&SignatureLambda> {
        match self {
            ClassLabel::Class { lambda, .. } => Some(lambda),
            _ => None,
        }
    }
}

/// Residual of `t` as a symmetric involution: `max(||t - t^T||, ||t^2 - I||)`.
pub fn involution_residual(t: &Matrix) -> f64 {
    let n = t.nrows();
    let sym = (t - t.transpose()).norm();
    let inv = (t * t - Matrix::identity(n, n)).norm();
    sym.max(inv)
}

pub fn classify(t: &OrthogonalMatrix, tolerance: f64) -> ClassLabel {
    let m = t.matrix();
    let n = m.nrows();
    let residual = involution_residual(m);
    if residual > tolerance {
        return if residual <= INDETERMINATE_FACTOR * tolerance {
            ClassLabel::Indeterminate { residual }
        } else {
            ClassLabel::Unclassified
        };
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut axis_weights = vec![0.0; n];
    let mut minus = 0usize;
    for (k, &value) in eig.eigenvalues.iter().enumerate() {
        if value < 0.0 {
            minus += 1;
            let v = eig.eigenvectors.column(k);
            for (i, w) in axis_weights.iter_mut().enumerate() {
                *w += v[i] * v[i];
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| axis_weights[b].total_cmp(&axis_weights[a]).then(a.cmp(&b)));
    let mask = order[..minus].iter().fold(0u64, |m, &i| m | 1 << i);
    ClassLabel::Class {
        lambda: SignatureLambda::from_mask(n as u32, mask),
        axis_weights,
    }
}

/// Haar-distributed element of `O(n)`: QR of a Gaussian matrix with the
/// column signs fixed by the diagonal of `R`.
pub fn haar_sample_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> OrthogonalMatrix {
    let g = Matrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        if r[(j, j)] < 0.0 {
            col.neg_mut();
        }
    }
    OrthogonalMatrix(q)
}

pub fn haar_sample(n: usize, seed: u64) -> OrthogonalMatrix {
    haar_sample_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `prod G(i, j, theta_ij)` over pairs `i < j` in lexicographic order.
pub fn givens_compose(n: usize, angles: &[f64]) -> Result<OrthogonalMatrix> {
    let expected = n * n.saturating_sub(1) / 2;
    if angles.len() != expected {
        return Err(Error::InvalidParameters(format!(
            "{} Givens angles given, n = {n} needs {expected}",
            angles.len()
        )));
    }
    let mut out = Matrix::identity(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (s, c) = angles[k].sin_cos();
            k += 1;
            // right-multiply by the rotation in the (i, j) plane
            for row in 0..n {
                let (a, b) = (out[(row, i)], out[(row, j)]);
                out[(row, i)] = c * a + s * b;
                out[(row, j)] = -s * a + c * b;
            }
        }
    }
    Ok(OrthogonalMatrix(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub haar_samples: u64,
    pub givens_samples: u64,
    /// Samples `u^T diag(lambda) u` with Haar `u` and uniform `lambda`.
    pub involution_samples: u64,
    pub givens_steps: u32,
    pub tolerance: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            haar_samples: 1000,
            givens_samples: 1000,
            involution_samples: 8000,
            givens_steps: DEFAULT_GIVENS_STEPS,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl SamplerConfig {
    pub fn total(&self) -> u64 {
        self.haar_samples + self.givens_samples + self.involution_samples
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassHit {
    pub lambda: SignatureLambda,
    pub hits: u64,
    pub covered: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSearchReport {
    pub samples: u64,
    pub classified: u64,
    pub indeterminate: u64,
    pub unclassified: u64,
    pub unclassified_fraction: f64,
    pub class_hits: Vec<ClassHit>,
    /// Distinct classified labels outside every `T_{z_j}`.
    pub uncovered: Vec<SignatureLambda>,
    pub witnesses_verified: bool,
    pub o1n_status: Status,
    pub consistent: bool,
    pub convention: String,
    pub experimental: bool,
}

const LABEL_CONVENTION: &str =
    "-1 signs on the axes with the largest diagonal of the -1 eigenprojector, ties to the lower index";

/// Samples `O(n)`, classifies what it can and reports classified samples
/// that fall outside `union_j T_{z_j}`. Each such label is a candidate
/// solution and is checked against the formula.
pub fn cover_search(f: &CnfFormula, config: &SamplerConfig) -> Result<CoverSearchReport> {
    let n = f.num_vars();
    check_guard(n)?;
    if config.givens_steps == 0 {
        return Err(Error::InvalidParameters("givens steps must be positive".into()));
    }
    let mut covered_set = AtomSet::empty(n)?;
    for c in f.clauses() {
        covered_set.or_assign(tprime_of_clause(c, n)?.as_atom_set());
    }
    let o1n = o1n_cover_test(f)?;

    let dim = n as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut hits: BTreeMap<SignatureLambda, u64> = BTreeMap::new();
    let (mut classified, mut indeterminate, mut unclassified) = (0u64, 0u64, 0u64);

    let mut record = |t: &OrthogonalMatrix| match classify(t, config.tolerance) {
        ClassLabel::Class { lambda, .. } => {
            classified += 1;
            *hits.entry(lambda).or_default() += 1;
        }
        ClassLabel::Indeterminate { .. } => indeterminate += 1,
        ClassLabel::Unclassified => unclassified += 1,
    };

    for _ in 0..config.haar_samples {
        record(&haar_sample_with(dim, &mut rng));
    }
    let pairs = dim * dim.saturating_sub(1) / 2;
    let step = 2.0 * PI / config.givens_steps as f64;
    for _ in 0..config.givens_samples {
        let angles: Vec<f64> = (0..pairs)
            .map(|_| rng.random_range(0..config.givens_steps) as f64 * step)
            .collect();
        let mut t = givens_compose(dim, &angles)?.into_inner();
        // half the grid samples land in the det = -1 component
        if dim > 0 && rng.random_bool(0.5) {
            t.row_mut(0).neg_mut();
        }
        record(&OrthogonalMatrix(t));
    }
    for _ in 0..config.involution_samples {
        let mask = if n == 0 { 0 } else { rng.random::<u64>() & ((1u64 << n) - 1) };
        let lambda = SignatureLambda::from_mask(n, mask).to_matrix();
        let u = haar_sample_with(dim, &mut rng).into_inner();
        record(&OrthogonalMatrix(u.transpose() * lambda * u));
    }

    let samples = config.total();
    let mut uncovered = Vec::new();
    let class_hits = hits
        .into_iter()
        .map(|(lambda, count)| {
            let covered = covered_set.contains_bits(lambda.minus_mask());
            if !covered {
                uncovered.push(lambda);
            }
            ClassHit {
                lambda,
                hits: count,
                covered,
            }
        })
        .collect();
    let witnesses_verified = uncovered
        .iter()
        .all(|l| f.is_satisfied_by(&atom_of_lambda(l)));
    let consistent = witnesses_verified && (o1n.status == Status::Sat || uncovered.is_empty());
    Ok(CoverSearchReport {
        samples,
        classified,
        indeterminate,
        unclassified,
        unclassified_fraction: if samples == 0 {
            0.0
        } else {
            unclassified as f64 / samples as f64
        },
        class_hits,
        uncovered,
        witnesses_verified,
        o1n_status: o1n.status,
        consistent,
        convention: LABEL_CONVENTION.to_string(),
        experimental: true,
    })
}
