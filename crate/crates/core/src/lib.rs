//! Finite-dimensional toolkit for pre/post-selected quantum systems.
//!
//! - [`linalg`]: dense complex vectors and matrices, tensor products.
//! - [`pps`]: two-time outcome probabilities, elements of reality, weak values.
//! - [`weakmeas`]: pointer-model simulation of a weak measurement.
//! - [`lhv`]: local hidden-variable assignments and parity refutation.
//! - [`scenarios`]: GHZ, three-box and interaction-free measurement setups.
//! - [`scenario_file`] and [`report`]: JSON input and output for the `qcf` binary.

pub mod error;
pub mod lhv;
pub mod linalg;
pub mod pps;
pub mod report;
pub mod scenario_file;
pub mod scenarios;
pub mod weakmeas;

pub use error::{Error, Result};
pub use lhv::{parity_certificate, satisfies, search, Assignment, ConstraintSet, ProductConstraint, Setting, Sign};
pub use linalg::{inner, tensor, validate, Amplitude, Operator, StateVector, Tensor, Validation};
pub use pps::{
    abl, born, infer_element_of_reality, weak_value, Branch, Distribution, ElementOfReality, PrePostEnsemble,
    ProjectorDecomposition, WeakValue,
};
pub use report::{run_named, run_scenario, Report, RunOptions};
pub use scenario_file::{FileError, ScenarioFile};
pub use scenarios::{MachZehnderOutcome, NamedScenario, ScenarioName};
pub use weakmeas::{simulate_pointer, PointerGrid, PointerState, WeakMeasurementReport};
