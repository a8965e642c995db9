//! Pre- and post-selected ensembles: two-time outcome probabilities,
//! elements of reality and weak values.
//!
//! An ensemble is a pair of normalized states, `pre` prepared at t1 and
//! `post` found at t2, with no evolution in between. For an intermediate
//! measurement of a projector decomposition `{P_a}` the probability of
//! outcome `a` is
//!
//! ```text
//! p(a) = |⟨post|P_a|pre⟩|² / Σ_b |⟨post|P_b|pre⟩|²
//! ```
//!
//! The decomposition matters, not just the projector of interest. In the
//! three-box setup, opening box A alone is the two-outcome measurement
//! `{P_A, 1 - P_A}` and finds the particle in A with certainty, while
//! opening all three boxes at once is the three-outcome measurement
//! `{P_A, P_B, P_C}` and finds it in each box with probability 1/3.
//!
//! Weak values `⟨post|A|pre⟩ / ⟨post|pre⟩` are kept as full complex numbers.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{inner, Amplitude, Operator, StateVector, STRUCTURE_TOL};

/// Default tolerance for declaring an outcome certain.
pub const DEFAULT_CERTAINTY_TOL: f64 = 1e-9;

/// Denominators below this are treated as zero.
pub const SELECTION_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PrePostEnsemble {
    pre: StateVector,
    post: StateVector,
}

impl PrePostEnsemble {
    /// Both states must be normalized and of equal dimension. Orthogonal
    /// pairs are accepted; operations that divide by the overlap fail later.
    pub fn new(pre: StateVector, post: StateVector) -> Result<Self> {
        pre.ensure_normalized()?;
        post.ensure_normalized()?;
        if pre.dim() != post.dim() {
            return Err(Error::DimensionMismatch { expected: pre.dim(), actual: post.dim() });
        }
        Ok(Self { pre, post })
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn post(&self) -> &StateVector {
        &self.post
    }

    pub fn dim(&self) -> usize {
        self.pre.dim()
    }

    /// `⟨post|pre⟩`.
    pub fn overlap(&self) -> Amplitude {
        inner(&self.post, &self.pre).expect("dimensions checked at construction")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub outcome: String,
    pub eigenvalue: f64,
    pub projector: Operator,
}

impl Branch {
    pub fn new(outcome: impl Into<String>, eigenvalue: f64, projector: Operator) -> Self {
        Self { outcome: outcome.into(), eigenvalue, projector }
    }
}

/// An observable given by its spectral decomposition: orthogonal projectors
/// summing to the identity, each tagged with an outcome label and a distinct
/// eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorDecomposition {
    label: String,
    branches: Vec<Branch>,
}

impl ProjectorDecomposition {
    pub fn new(label: impl Into<String>, branches: Vec<Branch>) -> Result<Self> {
        let label = label.into();
        let invalid = |reason: String| Error::InvalidDecomposition { label: label.clone(), reason };

        let first = branches.first().ok_or_else(|| invalid("no branches".into()))?;
        let dim = first.projector.dim();
        for (i, b) in branches.iter().enumerate() {
            if b.projector.dim() != dim {
                return Err(invalid(format!(
                    "branch {i} has dimension {}, expected {dim}",
                    b.projector.dim()
                )));
            }
            if !b.eigenvalue.is_finite() {
                return Err(invalid(format!("branch {i} eigenvalue is not finite")));
            }
            if !b.projector.is_projector(STRUCTURE_TOL) {
                return Err(invalid(format!("branch {i} (`{}`) is not a projector", b.outcome)));
            }
            for (j, other) in branches[..i].iter().enumerate() {
                if other.outcome == b.outcome {
                    return Err(invalid(format!("duplicate outcome label `{}`", b.outcome)));
                }
                if other.eigenvalue == b.eigenvalue {
                    return Err(invalid(format!("branches {j} and {i} share eigenvalue {}", b.eigenvalue)));
                }
                let cross = other.projector.matmul(&b.projector)?;
                let zero = Operator::zeros(dim)?;
                if cross.max_abs_diff(&zero)? > STRUCTURE_TOL {
                    return Err(invalid(format!("branches {j} and {i} are not orthogonal")));
                }
            }
        }

        let mut sum = Operator::zeros(dim)?;
        for b in &branches {
            sum = sum.add(&b.projector)?;
        }
        if sum.max_abs_diff(&Operator::identity(dim)?)? > STRUCTURE_TOL {
            return Err(invalid("projectors do not sum to the identity".into()));
        }

        Ok(Self { label, branches })
    }

    /// Two-outcome decomposition `{P, 1 - P}` with eigenvalues `{1, 0}`.
    pub fn binary(
        label: impl Into<String>,
        yes: impl Into<String>,
        no: impl Into<String>,
        projector: Operator,
    ) -> Result<Self> {
        let complement = Operator::identity(projector.dim())?.sub(&projector)?;
        Self::new(
            label,
            vec![Branch::new(yes, 1.0, projector), Branch::new(no, 0.0, complement)],
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn dim(&self) -> usize {
        self.branches[0].projector.dim()
    }

    pub fn branch(&self, outcome: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.outcome == outcome)
    }

    /// The observable `Σ_a λ_a P_a`.
    pub fn observable(&self) -> Operator {
        let mut acc = Operator::zeros(self.dim()).expect("valid dimension");
        for b in &self.branches {
            let term = b.projector.scale(Amplitude::new(b.eigenvalue, 0.0)).expect("finite");
            acc = acc.add(&term).expect("same dimension");
        }
        acc
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.branches.iter().map(|b| b.eigenvalue.abs()).fold(0.0, f64::max)
    }
}

/// Outcome probabilities in branch order.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    entries: Vec<(String, f64)>,
}

impl Distribution {
    pub fn get(&self, outcome: &str) -> Option<f64> {
        self.entries.iter().find(|(o, _)| o == outcome).map(|&(_, p)| p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(o, p)| (o.as_str(), *p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

/// Single-time Born probabilities `‖P_a|ψ⟩‖²`.
pub fn born(state: &StateVector, obs: &ProjectorDecomposition) -> Result<Distribution> {
    state.ensure_normalized()?;
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: obs.dim(), actual: state.dim() });
    }
    let entries = obs
        .branches
        .iter()
        .map(|b| Ok((b.outcome.clone(), b.projector.apply(state)?.norm_sqr())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Distribution { entries })
}

/// Two-time outcome probabilities for an intermediate measurement.
pub fn abl(ens: &PrePostEnsemble, obs: &ProjectorDecomposition) -> Result<Distribution> {
    if ens.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: obs.dim(), actual: ens.dim() });
    }
    let weights = obs
        .branches
        .iter()
        .map(|b| Ok(b.projector.sandwich(&ens.post, &ens.pre)?.norm_sqr()))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = weights.iter().sum();
    if total <= SELECTION_EPS {
        return Err(Error::ZeroSelectionProbability);
    }
    let entries = obs
        .branches
        .iter()
        .zip(weights)
        .map(|(b, w)| (b.outcome.clone(), w / total))
        .collect();
    Ok(Distribution { entries })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementOfReality {
    pub observable: String,
    pub outcome: String,
    pub eigenvalue: f64,
}

impl fmt::Display for ElementOfReality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} ({})", self.observable, self.eigenvalue, self.outcome)
    }
}

/// Returns the outcome whose two-time probability is at least `1 - tol`, if any.
pub fn infer_element_of_reality(
    ens: &PrePostEnsemble,
    obs: &ProjectorDecomposition,
    tol: f64,
) -> Result<Option<ElementOfReality>> {
    let dist = abl(ens, obs)?;
    let found = obs
        .branches
        .iter()
        .zip(dist.iter())
        .find(|(_, (_, p))| *p >= 1.0 - tol)
        .map(|(b, _)| ElementOfReality {
            observable: obs.label.clone(),
            outcome: b.outcome.clone(),
            eigenvalue: b.eigenvalue,
        });
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValue(pub Amplitude);

impl WeakValue {
    pub fn value(self) -> Amplitude {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }
}

/// `⟨post|A|pre⟩ / ⟨post|pre⟩`.
pub fn weak_value(ens: &PrePostEnsemble, op: &Operator) -> Result<WeakValue> {
    let overlap = ens.overlap();
    if overlap.norm() <= SELECTION_EPS {
        return Err(Error::OrthogonalSelection);
    }
    let numerator = op.sandwich(&ens.post, &ens.pre)?;
    let value = numerator / overlap;
    if !value.is_finite() {
        return Err(Error::OrthogonalSelection);
    }
    Ok(WeakValue(value))
}
