//! Channels as Kraus families: validation, application, instruments, exact
//! branch enumeration, Choi matrices and channel fidelity.

use crate::error::{Error, Result};
use crate::matlin::{self, ComplexMatrix, Factor};
use crate::schemes::{CorrectionChannel, FeedbackPolicy};
use num_complex::Complex64;

/// Hard cap on exact branch enumeration; exceeding it is an error, never a
/// silent truncation.
pub const BRANCH_CAP: u64 = 1_000_000;

/// Default validation tolerance (operator norm, relative).
pub const DEFAULT_TOL: f64 = 1e-9;

/// One evolution step T(ρ) = Σ_x t_x ρ t_x† with the decomposition fixed by
/// the environment measurement.
#[derive(Debug, Clone)]
pub struct KrausStep {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
    label: Option<String>,
}

impl KrausStep {
    pub fn new(dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::EmptyKraus);
        }
        for k in &kraus {
            let n = k.require_square()?;
            if n != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: n,
                });
            }
        }
        Ok(Self {
            dim,
            kraus,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn outcome_count(&self) -> usize {
        self.kraus.len()
    }

    /// Normalization defect ‖Σ t†t − I‖ (operator norm) and pass/fail at tol.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for t in &self.kraus {
            sum = sum.add(&t.adjoint().mul(t));
        }
        let defect = matlin::operator_norm(&sum.sub(&ComplexMatrix::identity(self.dim)))
            .unwrap_or(f64::INFINITY);
        ValidationReport {
            defect,
            tol,
            passed: defect <= tol,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    pub defect: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Decomposed multi-step channel T = T^(n)∘…∘T^(1); `steps[0]` acts first.
#[derive(Debug, Clone)]
pub struct MultiStepChannel {
    dim: usize,
    steps: Vec<KrausStep>,
}

impl MultiStepChannel {
    pub fn new(steps: Vec<KrausStep>) -> Result<Self> {
        let dim = steps.first().ok_or(Error::EmptyKraus)?.dim();
        for s in &steps {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
        }
        Ok(Self { dim, steps })
    }

    pub fn single(step: KrausStep) -> Self {
        Self {
            dim: step.dim(),
            steps: vec![step],
        }
    }

    /// The same step iterated `n` times.
    pub fn iterated(step: KrausStep, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyKraus);
        }
        Ok(Self {
            dim: step.dim(),
            steps: vec![step; n],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[KrausStep] {
        &self.steps
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn validate(&self, tol: f64) -> Vec<ValidationReport> {
        self.steps.iter().map(|s| s.validate(tol)).collect()
    }

    /// Total number of measurement records, or an error past the branch cap.
    pub fn record_count(&self) -> Result<u64> {
        let mut count: u64 = 1;
        for s in &self.steps {
            count = count
                .checked_mul(s.outcome_count() as u64)
                .filter(|&c| c <= BRANCH_CAP)
                .ok_or(Error::BranchCapExceeded { cap: BRANCH_CAP })?;
        }
        Ok(count)
    }
}

/// Ordered list of 0-based measurement outcomes (x₁,…,x_k).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OutcomeRecord(pub Vec<usize>);

impl OutcomeRecord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, outcome: usize) -> Self {
        let mut v = self.0.clone();
        v.push(outcome);
        Self(v)
    }

    /// Check every index against the channel's per-step outcome counts.
    pub fn validate_for(&self, ms: &MultiStepChannel) -> Result<()> {
        if self.0.len() > ms.n_steps() {
            return Err(Error::DimensionMismatch {
                expected: ms.n_steps(),
                got: self.0.len(),
            });
        }
        for (k, &x) in self.0.iter().enumerate() {
            let outcomes = ms.steps()[k].outcome_count();
            if x >= outcomes {
                return Err(Error::BadOutcome {
                    step: k,
                    index: x,
                    outcomes,
                });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for OutcomeRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.require_square()?;
        let scale = matlin::operator_norm(&matrix)?.max(1e-300);
        if matrix.hermitian_defect() > 1e-9 * scale {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        if (matrix.trace().re - 1.0).abs() > 1e-9 || matrix.trace().im.abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "trace {} is not 1",
                matrix.trace()
            )));
        }
        let (vals, _) = matlin::hermitian_eig(&matrix)?;
        if let Some(&min) = vals.last() {
            if min < -1e-9 * scale {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(Self { dim, matrix })
    }

    /// Internal constructor for states produced by trace-preserving updates.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        let dim = matrix.rows();
        Self { dim, matrix }
    }

    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let n = ket.len();
        let m = ComplexMatrix::from_fn(n, n, |i, j| ket[i] * ket[j].conj() / (norm * norm));
        Self::new(m)
    }

    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        let mut ket = vec![Complex64::new(0.0, 0.0); dim];
        ket[index] = Complex64::new(1.0, 0.0);
        Self::pure(&ket)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    /// Normalized maximally entangled state Ω on H⊗H (dimension dim²).
    pub fn maximally_entangled(dim: usize) -> Result<Self> {
        let n2 = dim * dim;
        if n2 > matlin::MAX_DIM {
            return Err(Error::DimensionTooLarge(n2));
        }
        let mut ket = vec![Complex64::new(0.0, 0.0); n2];
        let amp = 1.0 / (dim as f64).sqrt();
        for i in 0..dim {
            ket[i * dim + i] = Complex64::new(amp, 0.0);
        }
        let m = ComplexMatrix::from_fn(n2, n2, |i, j| ket[i] * ket[j].conj());
        Ok(Self { dim: n2, matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Choi matrix (T⊗id)|Ω'⟩⟨Ω'| with unnormalized Ω' = Σ|ii⟩ and the output
/// factor first, so trace preservation reads tr_out C = I.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n2 = matrix.require_square()?;
        if n2 != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: n2,
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let dim = kraus.first().ok_or(Error::EmptyKraus)?.require_square()?;
        let n2 = dim * dim;
        let mut m = ComplexMatrix::zeros(n2, n2);
        for t in kraus {
            let v = matlin::vec_mat(t);
            for i in 0..n2 {
                for j in 0..n2 {
                    m[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        Ok(Self { dim, matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Partial trace over the output factor; equals I for a CPTP map.
    pub fn trace_out_output(&self) -> ComplexMatrix {
        matlin::partial_trace(&self.matrix, self.dim, Factor::First)
            .expect("choi matrix has consistent dimensions")
    }

    /// Trace-preservation defect ‖tr_out C − I‖ (operator norm).
    pub fn tp_defect(&self) -> f64 {
        let d = self
            .trace_out_output()
            .sub(&ComplexMatrix::identity(self.dim));
        matlin::operator_norm(&d).unwrap_or(f64::INFINITY)
    }
}

/// Apply one step to a state.
pub fn apply(step: &KrausStep, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if step.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: step.dim(),
            got: rho.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(step.dim(), step.dim());
    for t in step.kraus() {
        out = out.add(&t.mul(rho.matrix()).mul(&t.adjoint()));
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Outcome probabilities tr(t_x ρ t_x†) of the instrument at a state.
pub fn instrument_probabilities(step: &KrausStep, rho: &DensityMatrix) -> Result<Vec<f64>> {
    if step.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: step.dim(),
            got: rho.dim(),
        });
    }
    Ok(step
        .kraus()
        .iter()
        .map(|t| t.mul(rho.matrix()).mul(&t.adjoint()).trace().re)
        .collect())
}

/// Every branch product t^(n)_{x_n}⋯t^(1)_{x_1} keyed by its record, in
/// lexicographic record order.
pub fn branch_operators(ms: &MultiStepChannel) -> Result<Vec<(OutcomeRecord, ComplexMatrix)>> {
    let total = ms.record_count()?;
    let mut out = Vec::with_capacity(total as usize);
    // Depth-first in outcome order yields lexicographic leaves.
    fn walk(
        ms: &MultiStepChannel,
        rec: &OutcomeRecord,
        acc: &ComplexMatrix,
        out: &mut Vec<(OutcomeRecord, ComplexMatrix)>,
    ) {
        let k = rec.len();
        if k == ms.n_steps() {
            out.push((rec.clone(), acc.clone()));
            return;
        }
        for (x, t) in ms.steps()[k].kraus().iter().enumerate() {
            walk(ms, &rec.child(x), &t.mul(acc), out);
        }
    }
    walk(
        ms,
        &OutcomeRecord::empty(),
        &ComplexMatrix::identity(ms.dim()),
        &mut out,
    );
    Ok(out)
}

/// Choi matrix of a single step.
pub fn choi(step: &KrausStep) -> Result<ChoiMatrix> {
    ChoiMatrix::from_kraus(step.kraus())
}

/// Channel fidelity F = (1/N²) Σ_x |tr t_x|² of a Kraus family or branch
/// list; 1 exactly when the family implements the identity channel.
pub fn channel_fidelity<'a>(kraus: impl IntoIterator<Item = &'a ComplexMatrix>) -> f64 {
    let mut sum = 0.0;
    let mut dim = 0usize;
    for t in kraus {
        dim = t.rows();
        sum += t.trace().norm_sqr();
    }
    if dim == 0 {
        return 0.0;
    }
    sum / (dim * dim) as f64
}

/// A full corrected-branch key: measurement outcomes interleaved with the
/// Kraus indices of the corrections applied after each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectedBranch {
    pub outcomes: OutcomeRecord,
    pub correction_indices: Vec<usize>,
}

fn policy_entry<'p>(
    policy: &'p FeedbackPolicy,
    prefix: &OutcomeRecord,
    identity: &'p CorrectionChannel,
) -> &'p CorrectionChannel {
    policy.get(prefix).unwrap_or(identity)
}

/// Enumerate the Kraus branches of the corrected channel
/// r^(x1..xn)_{j_n} t^(n)_{x_n} ⋯ r^(x1)_{j_1} t^(1)_{x_1}.
pub fn compose_corrected(
    ms: &MultiStepChannel,
    policy: &FeedbackPolicy,
) -> Result<Vec<(CorrectedBranch, ComplexMatrix)>> {
    check_policy_dim(ms, policy)?;
    let identity = CorrectionChannel::identity(ms.dim());
    let mut out = Vec::new();
    let mut budget = BRANCH_CAP;
    walk_corrected(
        ms,
        policy,
        &identity,
        &OutcomeRecord::empty(),
        &mut Vec::new(),
        &ComplexMatrix::identity(ms.dim()),
        &mut |branch, op| {
            out.push((branch, op.clone()));
        },
        &mut budget,
    )?;
    Ok(out)
}

/// Fidelity of the corrected channel without materializing branches.
pub fn corrected_fidelity(ms: &MultiStepChannel, policy: &FeedbackPolicy) -> Result<f64> {
    check_policy_dim(ms, policy)?;
    let identity = CorrectionChannel::identity(ms.dim());
    let mut sum = 0.0;
    let mut budget = BRANCH_CAP;
    walk_corrected(
        ms,
        policy,
        &identity,
        &OutcomeRecord::empty(),
        &mut Vec::new(),
        &ComplexMatrix::identity(ms.dim()),
        &mut |_, op| {
            sum += op.trace().norm_sqr();
        },
        &mut budget,
    )?;
    Ok(sum / (ms.dim() * ms.dim()) as f64)
}

fn check_policy_dim(ms: &MultiStepChannel, policy: &FeedbackPolicy) -> Result<()> {
    if policy.dim() != ms.dim() {
        return Err(Error::PolicyDimMismatch {
            policy: policy.dim(),
            channel: ms.dim(),
        });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn walk_corrected(
    ms: &MultiStepChannel,
    policy: &FeedbackPolicy,
    identity: &CorrectionChannel,
    rec: &OutcomeRecord,
    correction_indices: &mut Vec<usize>,
    acc: &ComplexMatrix,
    sink: &mut impl FnMut(CorrectedBranch, &ComplexMatrix),
    budget: &mut u64,
) -> Result<()> {
    let k = rec.len();
    if k == ms.n_steps() {
        if *budget == 0 {
            return Err(Error::BranchCapExceeded { cap: BRANCH_CAP });
        }
        *budget -= 1;
        sink(
            CorrectedBranch {
                outcomes: rec.clone(),
                correction_indices: correction_indices.clone(),
            },
            acc,
        );
        return Ok(());
    }
    for (x, t) in ms.steps()[k].kraus().iter().enumerate() {
        let rec2 = rec.child(x);
        let after_step = t.mul(acc);
        let correction = policy_entry(policy, &rec2, identity);
        for (j, r) in correction.kraus().iter().enumerate() {
            correction_indices.push(j);
            walk_corrected(
                ms,
                policy,
                identity,
                &rec2,
                correction_indices,
                &r.mul(&after_step),
                sink,
                budget,
            )?;
            correction_indices.pop();
        }
    }
    Ok(())
}
