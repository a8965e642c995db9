//! JSON scenario files.
//!
//! ```json
//! {
//!   "name": "three-box",
//!   "dim": 3,
//!   "pre":  [[0.577, 0.0], [0.577, 0.0], [0.577, 0.0]],
//!   "post": [[0.577, 0.0], [0.577, 0.0], [-0.577, 0.0]],
//!   "observables": [
//!     {"label": "open-A", "branches": [
//!       {"outcome_label": "in_A", "eigenvalue": 1.0, "projector": [[[1.0, 0.0], ...], ...]},
//!       ...]}
//!   ],
//!   "constraint_set": {
//!     "universe": [{"party": "A", "observable": "x"}, ...],
//!     "constraints": [{"settings": [{"party": "A", "observable": "x"}, ...], "required_product": -1}]
//!   }
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are lists of rows.
//! `name` and `constraint_set` are optional. Every violation is reported
//! with the JSON path of the offending value.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::lhv::{ConstraintSet, ProductConstraint, Setting, Sign};
use crate::linalg::{Amplitude, Operator, StateVector, MAX_DIM};
use crate::pps::{Branch, PrePostEnsemble, ProjectorDecomposition};
use crate::scenarios::NamedScenario;

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub pre: Vec<ComplexPair>,
    pub post: Vec<ComplexPair>,
    pub observables: Vec<ObservableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint_set: Option<ConstraintSetSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub label: String,
    pub branches: Vec<BranchSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub outcome_label: String,
    pub eigenvalue: f64,
    pub projector: Vec<Vec<ComplexPair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSetSpec {
    pub universe: Vec<Setting>,
    pub constraints: Vec<ConstraintSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub settings: Vec<Setting>,
    pub required_product: i64,
}

/// A schema or invariant violation at a JSON path such as
/// `$.observables[0].branches[1].projector`.
#[derive(Debug, Clone, PartialEq)]
pub struct FileError {
    pub path: String,
    pub message: String,
}

impl FileError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self { path: path.into(), message: message.to_string() }
    }
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for FileError {}

fn json_path(p: &serde_path_to_error::Path) -> String {
    let s = p.to_string();
    if s == "." {
        "$".to_string()
    } else {
        format!("$.{s}")
    }
}

fn amp(pair: &ComplexPair) -> Amplitude {
    Amplitude::new(pair[0], pair[1])
}

fn pair(z: Amplitude) -> ComplexPair {
    [z.re, z.im]
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = json_path(e.path());
            FileError::at(path, e.into_inner())
        })
    }

    pub fn load(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FileError::at("$", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    fn state(&self, field: &str, values: &[ComplexPair]) -> Result<StateVector, FileError> {
        let path = format!("$.{field}");
        if values.len() != self.dim {
            return Err(FileError::at(path, format!("expected {} amplitudes, got {}", self.dim, values.len())));
        }
        if let Some(i) = values.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(FileError::at(format!("{path}[{i}]"), "amplitude is not finite"));
        }
        let v = StateVector::new(values.iter().map(amp).collect()).map_err(|e| FileError::at(&path, e))?;
        if !v.is_normalized() {
            return Err(FileError::at(path, format!("state is not normalized (norm = {})", v.norm())));
        }
        Ok(v)
    }

    fn observable(&self, index: usize, spec: &ObservableSpec) -> Result<ProjectorDecomposition, FileError> {
        let base = format!("$.observables[{index}]");
        let mut branches = Vec::with_capacity(spec.branches.len());
        for (j, b) in spec.branches.iter().enumerate() {
            let path = format!("{base}.branches[{j}].projector");
            if b.projector.len() != self.dim {
                return Err(FileError::at(path, format!("expected {} rows, got {}", self.dim, b.projector.len())));
            }
            let mut entries = Vec::with_capacity(self.dim * self.dim);
            for (r, row) in b.projector.iter().enumerate() {
                if row.len() != self.dim {
                    return Err(FileError::at(
                        format!("{path}[{r}]"),
                        format!("expected {} entries, got {}", self.dim, row.len()),
                    ));
                }
                entries.extend(row.iter().map(amp));
            }
            let projector = Operator::new(self.dim, entries).map_err(|e| FileError::at(&path, e))?;
            branches.push(Branch::new(b.outcome_label.clone(), b.eigenvalue, projector));
        }
        ProjectorDecomposition::new(spec.label.clone(), branches).map_err(|e| FileError::at(base, e))
    }

    fn constraint_set(spec: &ConstraintSetSpec) -> Result<ConstraintSet, FileError> {
        let base = "$.constraint_set";
        let mut constraints = Vec::with_capacity(spec.constraints.len());
        for (k, c) in spec.constraints.iter().enumerate() {
            let path = format!("{base}.constraints[{k}]");
            let sign = Sign::from_value(c.required_product).ok_or_else(|| {
                FileError::at(format!("{path}.required_product"), "must be +1 or -1")
            })?;
            constraints.push(ProductConstraint::new(c.settings.clone(), sign).map_err(|e| FileError::at(path, e))?);
        }
        ConstraintSet::new(spec.universe.clone(), constraints).map_err(|e| FileError::at(base, e))
    }

    /// Checks every embedded object against its invariants.
    pub fn validate(&self, fallback_name: &str) -> Result<NamedScenario, FileError> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(FileError::at("$.dim", format!("must be between 1 and {MAX_DIM}")));
        }
        let pre = self.state("pre", &self.pre)?;
        let post = self.state("post", &self.post)?;
        let ensemble = PrePostEnsemble::new(pre, post).map_err(|e| FileError::at("$", e))?;
        let observables = self
            .observables
            .iter()
            .enumerate()
            .map(|(i, o)| self.observable(i, o))
            .collect::<Result<Vec<_>, _>>()?;
        let constraint_set = self.constraint_set.as_ref().map(Self::constraint_set).transpose()?;
        Ok(NamedScenario {
            name: self.name.clone().unwrap_or_else(|| fallback_name.to_string()),
            ensemble: Some(ensemble),
            observables,
            constraint_set,
        })
    }

    /// Exports a scenario that has a pre/post ensemble.
    pub fn from_scenario(s: &NamedScenario) -> Option<Self> {
        let ens = s.ensemble.as_ref()?;
        let observables = s
            .observables
            .iter()
            .map(|o| ObservableSpec {
                label: o.label().to_string(),
                branches: o
                    .branches()
                    .iter()
                    .map(|b| BranchSpec {
                        outcome_label: b.outcome.clone(),
                        eigenvalue: b.eigenvalue,
                        projector: b
                            .projector
                            .entries()
                            .chunks(b.projector.dim())
                            .map(|row| row.iter().copied().map(pair).collect())
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        let constraint_set = s.constraint_set.as_ref().map(|cs| ConstraintSetSpec {
            universe: cs.universe().to_vec(),
            constraints: cs
                .constraints()
                .iter()
                .map(|c| ConstraintSpec {
                    settings: c.settings().to_vec(),
                    required_product: i64::from(c.required().value()),
                })
                .collect(),
        });
        Some(Self {
            name: Some(s.name.clone()),
            dim: ens.dim(),
            pre: ens.pre().amps().iter().copied().map(pair).collect(),
            post: ens.post().amps().iter().copied().map(pair).collect(),
            observables,
            constraint_set,
        })
    }
}
