//! Builders for the canonical setups: the GHZ state and its parity
//! constraints, the three-box ensemble, and the interaction-free
//! Mach-Zehnder measurement.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lhv::{ConstraintSet, ProductConstraint, Setting, Sign};
use crate::linalg::{pauli_x, pauli_y, tensor_all, Amplitude, Operator, StateVector, STRUCTURE_TOL};
use crate::pps::{Branch, PrePostEnsemble, ProjectorDecomposition};

const PARTIES: [&str; 3] = ["A", "B", "C"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpinAxis {
    X,
    Y,
}

impl SpinAxis {
    pub fn operator(self) -> Operator {
        match self {
            SpinAxis::X => pauli_x(),
            SpinAxis::Y => pauli_y(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinAxis::X => "x",
            SpinAxis::Y => "y",
        }
    }
}

/// One of the four product equations satisfied by the GHZ state: the
/// three-particle spin product along `axes` has eigenvalue `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhzProduct {
    pub axes: [SpinAxis; 3],
    pub expected: Sign,
}

impl GhzProduct {
    pub fn label(&self) -> String {
        self.axes.iter().map(|a| a.name().to_uppercase()).collect()
    }

    /// `σ_A ⊗ σ_B ⊗ σ_C`, particle A leftmost.
    pub fn operator(&self) -> Operator {
        let factors: Vec<Operator> = self.axes.iter().map(|a| a.operator()).collect();
        tensor_all(&factors).expect("dimension 8")
    }

    /// `{(1 + O)/2, (1 - O)/2}` with eigenvalues `{+1, -1}`.
    pub fn decomposition(&self) -> ProjectorDecomposition {
        let op = self.operator();
        let id = Operator::identity(8).expect("dimension 8");
        let half = Amplitude::new(0.5, 0.0);
        let plus = id.add(&op).and_then(|m| m.scale(half)).expect("dimension 8");
        let minus = id.sub(&op).and_then(|m| m.scale(half)).expect("dimension 8");
        ProjectorDecomposition::new(
            self.label(),
            vec![Branch::new("+1", 1.0, plus), Branch::new("-1", -1.0, minus)],
        )
        .expect("spin products square to the identity")
    }

    pub fn constraint(&self) -> ProductConstraint {
        let settings = PARTIES.iter().zip(self.axes).map(|(p, a)| Setting::new(*p, a.name())).collect();
        ProductConstraint::new(settings, self.expected).expect("three distinct parties")
    }
}

pub const GHZ_PRODUCTS: [GhzProduct; 4] = [
    GhzProduct { axes: [SpinAxis::X, SpinAxis::X, SpinAxis::X], expected: Sign::Minus },
    GhzProduct { axes: [SpinAxis::X, SpinAxis::Y, SpinAxis::Y], expected: Sign::Plus },
    GhzProduct { axes: [SpinAxis::Y, SpinAxis::X, SpinAxis::Y], expected: Sign::Plus },
    GhzProduct { axes: [SpinAxis::Y, SpinAxis::Y, SpinAxis::X], expected: Sign::Plus },
];

/// `(|↑↑↑⟩ - |↓↓↓⟩)/√2`.
pub fn ghz_state() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Amplitude::new(0.0, 0.0); 8];
    amps[0] = Amplitude::new(h, 0.0);
    amps[7] = Amplitude::new(-h, 0.0);
    StateVector::new(amps).expect("dimension 8")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductCheck {
    pub label: String,
    pub expected: Sign,
    /// Largest entrywise `|O ψ - λ ψ|`.
    pub residual: f64,
    pub holds: bool,
}

pub fn ghz_quantum_check(state: &StateVector) -> Result<Vec<ProductCheck>> {
    ghz_quantum_check_with(state, &GHZ_PRODUCTS)
}

pub fn ghz_quantum_check_with(state: &StateVector, products: &[GhzProduct]) -> Result<Vec<ProductCheck>> {
    if state.dim() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, actual: state.dim() });
    }
    products
        .iter()
        .map(|p| {
            let image = p.operator().apply(state)?;
            let target = state.scale(Amplitude::new(f64::from(p.expected.value()), 0.0))?;
            let residual = image.max_abs_diff(&target)?;
            Ok(ProductCheck {
                label: p.label(),
                expected: p.expected,
                residual,
                holds: residual <= STRUCTURE_TOL,
            })
        })
        .collect()
}

/// Universe `{A, B, C} × {x, y}` with the four GHZ product constraints.
pub fn ghz_constraint_set() -> ConstraintSet {
    let universe = PARTIES
        .iter()
        .flat_map(|p| [SpinAxis::X, SpinAxis::Y].map(|a| Setting::new(*p, a.name())))
        .collect();
    ConstraintSet::new(universe, GHZ_PRODUCTS.iter().map(GhzProduct::constraint).collect())
        .expect("six settings")
}

pub fn ghz_observables() -> Vec<ProjectorDecomposition> {
    GHZ_PRODUCTS.iter().map(GhzProduct::decomposition).collect()
}

pub const BOXES: [&str; 3] = ["A", "B", "C"];

/// Pre-selected `(|A⟩ + |B⟩ + |C⟩)/√3`, post-selected `(|A⟩ + |B⟩ - |C⟩)/√3`.
pub fn three_box_ensemble() -> PrePostEnsemble {
    let s = 1.0 / 3f64.sqrt();
    let pre = StateVector::from_real(&[s, s, s]).expect("dimension 3");
    let post = StateVector::from_real(&[s, s, -s]).expect("dimension 3");
    PrePostEnsemble::new(pre, post).expect("unit vectors")
}

/// Occupation projector for box `index` (0 = A, 1 = B, 2 = C).
pub fn box_projector(index: usize) -> Operator {
    Operator::projector_onto(&StateVector::basis(3, index).expect("box index")).expect("unit vector")
}

/// Opening a single box (`open-A`, `open-B`, `open-C`, outcomes `in_X` with
/// eigenvalue 1 and `not_X` with eigenvalue 0), followed by opening all boxes
/// (`open-all`, outcomes `A`, `B`, `C` with eigenvalues 0, 1, 2).
pub fn box_observables() -> Vec<ProjectorDecomposition> {
    let mut out: Vec<ProjectorDecomposition> = BOXES
        .iter()
        .enumerate()
        .map(|(i, b)| {
            ProjectorDecomposition::binary(format!("open-{b}"), format!("in_{b}"), format!("not_{b}"), box_projector(i))
                .expect("rank-one projector")
        })
        .collect();
    let all = BOXES
        .iter()
        .enumerate()
        .map(|(i, b)| Branch::new(*b, i as f64, box_projector(i)))
        .collect();
    out.push(ProjectorDecomposition::new("open-all", all).expect("box basis"));
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachZehnderOutcome {
    pub p_dark: f64,
    pub p_bright: f64,
    pub p_absorbed: f64,
}

impl MachZehnderOutcome {
    pub fn total(&self) -> f64 {
        self.p_dark + self.p_bright + self.p_absorbed
    }
}

/// Symmetric beam splitter `(1/√2)[[1, i], [i, 1]]`.
pub fn beam_splitter() -> Operator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (r, t) = (Amplitude::new(h, 0.0), Amplitude::new(0.0, h));
    Operator::new(2, vec![r, t, t, r]).expect("2x2")
}

/// Single photon entering port 0 of a balanced interferometer. Output port 0
/// is dark when both arms are open. An obstacle in arm 1 is a perfect
/// absorber; the absorbed probability is reported, not renormalized away.
pub fn mach_zehnder(obstacle_present: bool) -> MachZehnderOutcome {
    let bs = beam_splitter();
    let input = StateVector::basis(2, 0).expect("two modes");
    let mut arms = bs.apply(&input).expect("two modes");
    let mut p_absorbed = 0.0;
    if obstacle_present {
        p_absorbed = arms.amp(1).norm_sqr();
        arms = StateVector::new(vec![arms.amp(0), Amplitude::new(0.0, 0.0)]).expect("two modes");
    }
    let out = bs.apply(&arms).expect("two modes");
    MachZehnderOutcome { p_dark: out.amp(0).norm_sqr(), p_bright: out.amp(1).norm_sqr(), p_absorbed }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioName {
    Ghz,
    ThreeBox,
    Ifm,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 3] = [ScenarioName::Ghz, ScenarioName::ThreeBox, ScenarioName::Ifm];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Ghz => "ghz",
            ScenarioName::ThreeBox => "three-box",
            ScenarioName::Ifm => "ifm",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedScenario {
    pub name: String,
    pub ensemble: Option<PrePostEnsemble>,
    pub observables: Vec<ProjectorDecomposition>,
    pub constraint_set: Option<ConstraintSet>,
}

impl NamedScenario {
    /// GHZ is exposed as the ensemble with pre = post = GHZ state, so each
    /// spin product becomes a certain outcome. The interferometer has no
    /// ensemble form.
    pub fn build(name: ScenarioName) -> Self {
        match name {
            ScenarioName::Ghz => Self {
                name: name.to_string(),
                ensemble: Some(PrePostEnsemble::new(ghz_state(), ghz_state()).expect("unit vector")),
                observables: ghz_observables(),
                constraint_set: Some(ghz_constraint_set()),
            },
            ScenarioName::ThreeBox => Self {
                name: name.to_string(),
                ensemble: Some(three_box_ensemble()),
                observables: box_observables(),
                constraint_set: None,
            },
            ScenarioName::Ifm => Self {
                name: name.to_string(),
                ensemble: None,
                observables: Vec::new(),
                constraint_set: None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lhv::search;
    use crate::linalg::inner;
    use crate::pps::{abl, weak_value};

    #[test]
    fn ghz_amplitudes() {
        let g = ghz_state();
        let h = 1.0 / 2f64.sqrt();
        assert_eq!(g.dim(), 8);
        assert!((g.amp(0).re - h).abs() < 1e-15);
        assert!((g.amp(7).re + h).abs() < 1e-15);
        for i in 1..7 {
            assert_eq!(g.amp(i), Amplitude::new(0.0, 0.0));
        }
        assert!((g.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_products_hold() {
        let checks = ghz_quantum_check(&ghz_state()).unwrap();
        let labels: Vec<&str> = checks.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["XXX", "XYY", "YXY", "YYX"]);
        assert!(checks.iter().all(|c| c.holds && c.residual <= 1e-9));
    }

    #[test]
    fn product_state_fails_xxx() {
        let up = StateVector::basis(8, 0).unwrap();
        let checks = ghz_quantum_check(&up).unwrap();
        assert!(!checks[0].holds);
    }

    #[test]
    fn flipped_sign_fails() {
        let mut flipped = GHZ_PRODUCTS;
        flipped[0].expected = Sign::Plus;
        let checks = ghz_quantum_check_with(&ghz_state(), &flipped).unwrap();
        assert!(!checks[0].holds);
        assert!(checks[1..].iter().all(|c| c.holds));
    }

    #[test]
    fn ghz_check_needs_dim_8() {
        assert!(ghz_quantum_check(&StateVector::basis(4, 0).unwrap()).is_err());
    }

    #[test]
    fn ghz_constraints_shape() {
        let cs = ghz_constraint_set();
        assert_eq!(cs.constraints().len(), 4);
        assert_eq!(cs.universe().len(), 6);
        let signs: Vec<i8> = cs.constraints().iter().map(|c| c.required().value()).collect();
        assert_eq!(signs, [-1, 1, 1, 1]);
        assert!(!search(&cs).unwrap().satisfiable());
    }

    #[test]
    fn ghz_observables_certain_on_ghz() {
        let ens = PrePostEnsemble::new(ghz_state(), ghz_state()).unwrap();
        for (obs, p) in ghz_observables().iter().zip(GHZ_PRODUCTS) {
            let d = abl(&ens, obs).unwrap();
            let certain = if p.expected == Sign::Minus { "-1" } else { "+1" };
            assert!((d.get(certain).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn three_box_builders() {
        let ens = three_box_ensemble();
        assert!((inner(ens.post(), ens.pre()).unwrap() - Amplitude::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let obs = box_observables();
        assert_eq!(obs.len(), 4);
        let d = abl(&ens, &obs[0]).unwrap();
        assert!((d.get("in_A").unwrap() - 1.0).abs() < 1e-12);
        let w = weak_value(&ens, &box_projector(1)).unwrap();
        assert!((w.value() - Amplitude::new(1.0, 0.0)).norm() < 1e-12);
        let eig: Vec<f64> = obs[0].branches().iter().map(|b| b.eigenvalue).collect();
        assert_eq!(eig, [1.0, 0.0]);
        let sum = box_projector(0).add(&box_projector(1)).unwrap().add(&box_projector(2)).unwrap();
        assert!(sum.max_abs_diff(&Operator::identity(3).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn mach_zehnder_values() {
        let open = mach_zehnder(false);
        assert!(open.p_dark.abs() < 1e-12);
        assert!((open.p_bright - 1.0).abs() < 1e-12);
        assert_eq!(open.p_absorbed, 0.0);
        let blocked = mach_zehnder(true);
        assert!((blocked.p_dark - 0.25).abs() < 1e-12);
        assert!((blocked.p_bright - 0.25).abs() < 1e-12);
        assert!((blocked.p_absorbed - 0.5).abs() < 1e-12);
        for o in [open, blocked] {
            assert!((o.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn beam_splitter_is_unitary() {
        let bs = beam_splitter();
        let prod = bs.dagger().matmul(&bs).unwrap();
        assert!(prod.max_abs_diff(&Operator::identity(2).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn scenario_names() {
        for n in ScenarioName::ALL {
            assert_eq!(n.as_str().parse::<ScenarioName>().unwrap(), n);
        }
        assert!("bell".parse::<ScenarioName>().is_err());
    }
}
