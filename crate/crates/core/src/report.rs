//! Runs scenarios and collects the results into a serializable report.
//!
//! Field order in the JSON output is fixed by the struct declarations and
//! outcome maps keep branch order, so identical inputs give byte-identical
//! output. Floats are written in shortest round-trip form.

use std::fmt::{self, Write as _};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::Error;
use crate::lhv::{parity_certificate, search, ConstraintSet};
use crate::linalg::Amplitude;
use crate::pps::{abl, infer_element_of_reality, weak_value, PrePostEnsemble, DEFAULT_CERTAINTY_TOL};
use crate::scenarios::{
    box_projector, ghz_quantum_check, ghz_state, mach_zehnder, MachZehnderOutcome, NamedScenario, ScenarioName,
    BOXES,
};
use crate::weakmeas::{simulate_pointer, PointerGrid};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Certainty tolerance for elements of reality.
    pub tol: f64,
    /// Pointer coupling ε.
    pub coupling: f64,
    pub sigma: f64,
    pub grid: PointerGrid,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_CERTAINTY_TOL, coupling: 0.01, sigma: 1.0, grid: PointerGrid::default() }
    }
}

/// Outcome-keyed values serialized as a JSON object in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedMap<T>(pub Vec<(String, T)>);

impl<T> OrderedMap<T> {
    pub fn get(&self, key: &str) -> Option<&T> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl<T: Serialize> Serialize for OrderedMap<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// A computation result or the error that prevented it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Entry<T> {
    Ok(T),
    Err { error: String },
}

impl<T> Entry<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Entry::Ok(v) => Some(v),
            Entry::Err { .. } => None,
        }
    }

    pub fn error(&self) -> Option<&str> {
        match self {
            Entry::Ok(_) => None,
            Entry::Err { error } => Some(error),
        }
    }
}

impl<T> From<Result<T, Error>> for Entry<T> {
    fn from(r: Result<T, Error>) -> Self {
        match r {
            Ok(v) => Entry::Ok(v),
            Err(e) => Entry::Err { error: e.to_string() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Amplitude> for ComplexValue {
    fn from(z: Amplitude) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub dim: usize,
    pub overlap: ComplexValue,
    pub overlap_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementOut {
    pub outcome: String,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableResult {
    pub label: String,
    pub abl: Entry<OrderedMap<f64>>,
    pub element_of_reality: Entry<Option<ElementOut>>,
    pub weak_value: Entry<ComplexValue>,
    pub branch_weak_values: Entry<OrderedMap<ComplexValue>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointerOut {
    pub coupling: f64,
    pub sigma: f64,
    pub pointer_mean: f64,
    pub postselection_probability: f64,
    pub inferred_weak_value_re: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointerResult {
    pub observable: String,
    #[serde(flatten)]
    pub outcome: Entry<PointerOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOut {
    pub label: String,
    pub expected: i8,
    pub residual: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LhvOut {
    pub constraints: Vec<String>,
    pub universe_size: usize,
    pub assignments_checked: u64,
    pub satisfiable: bool,
    pub satisfier_count: u64,
    pub first_assignment: Option<OrderedMap<i8>>,
    pub parity_certificate: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferometerOut {
    pub p_dark: f64,
    pub p_bright: f64,
    pub p_absorbed: f64,
}

impl From<MachZehnderOutcome> for InterferometerOut {
    fn from(o: MachZehnderOutcome) -> Self {
        Self { p_dark: o.p_dark, p_bright: o.p_bright, p_absorbed: o.p_absorbed }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<Entry<EnsembleSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observables: Option<Vec<ObservableResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_values: Option<OrderedMap<Entry<ComplexValue>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointer: Option<Vec<PointerResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum_check: Option<Vec<CheckOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhv: Option<Entry<LhvOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub without_obstacle: Option<InterferometerOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with_obstacle: Option<InterferometerOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub tool_version: String,
    pub results: Results,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn summarize(ens: &PrePostEnsemble) -> EnsembleSummary {
    let overlap = ens.overlap();
    EnsembleSummary { dim: ens.dim(), overlap: overlap.into(), overlap_probability: overlap.norm_sqr() }
}

fn observable_results(
    ens: &PrePostEnsemble,
    scenario: &NamedScenario,
    opts: &RunOptions,
) -> Vec<ObservableResult> {
    scenario
        .observables
        .iter()
        .map(|obs| ObservableResult {
            label: obs.label().to_string(),
            abl: abl(ens, obs).map(|d| OrderedMap(d.iter().map(|(o, p)| (o.to_string(), p)).collect())).into(),
            element_of_reality: infer_element_of_reality(ens, obs, opts.tol)
                .map(|e| e.map(|e| ElementOut { outcome: e.outcome, eigenvalue: e.eigenvalue }))
                .into(),
            weak_value: weak_value(ens, &obs.observable()).map(|w| w.value().into()).into(),
            branch_weak_values: obs
                .branches()
                .iter()
                .map(|b| Ok((b.outcome.clone(), weak_value(ens, &b.projector)?.value().into())))
                .collect::<Result<Vec<_>, Error>>()
                .map(OrderedMap)
                .into(),
        })
        .collect()
}

fn lhv_results(cs: &ConstraintSet) -> Entry<LhvOut> {
    search(cs)
        .map(|r| LhvOut {
            constraints: cs.constraints().iter().map(|c| c.to_string()).collect(),
            universe_size: cs.universe().len(),
            assignments_checked: 1u64 << cs.universe().len(),
            satisfiable: r.satisfiable(),
            satisfier_count: r.count,
            first_assignment: r
                .first
                .map(|a| OrderedMap(a.iter().map(|(s, v)| (s.to_string(), v.value())).collect())),
            parity_certificate: parity_certificate(cs),
        })
        .into()
}

/// Ensemble summary, per-observable tables and LHV search: the parts shared
/// by named scenarios and scenario files.
pub fn evaluate(scenario: &NamedScenario, opts: &RunOptions) -> Results {
    let mut results = Results::default();
    if let Some(ens) = &scenario.ensemble {
        results.ensemble = Some(Entry::Ok(summarize(ens)));
        results.observables = Some(observable_results(ens, scenario, opts));
    }
    results.lhv = scenario.constraint_set.as_ref().map(lhv_results);
    results
}

pub fn run_named(name: ScenarioName, opts: &RunOptions) -> Report {
    let scenario = NamedScenario::build(name);
    let mut results = evaluate(&scenario, opts);
    match name {
        ScenarioName::Ghz => {
            let checks = ghz_quantum_check(&ghz_state()).expect("dimension 8");
            results.quantum_check = Some(
                checks
                    .into_iter()
                    .map(|c| CheckOut {
                        label: c.label,
                        expected: c.expected.value(),
                        residual: c.residual,
                        holds: c.holds,
                    })
                    .collect(),
            );
        }
        ScenarioName::ThreeBox => {
            let ens = scenario.ensemble.as_ref().expect("three-box has an ensemble");
            results.weak_values = Some(OrderedMap(
                BOXES
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (format!("P_{b}"), weak_value(ens, &box_projector(i)).map(|w| w.value().into()).into()))
                    .collect(),
            ));
            results.pointer = Some(
                scenario
                    .observables
                    .iter()
                    .map(|obs| PointerResult {
                        observable: obs.label().to_string(),
                        outcome: simulate_pointer(ens, obs, opts.coupling, opts.sigma, opts.grid)
                            .map(|r| PointerOut {
                                coupling: r.coupling,
                                sigma: opts.sigma,
                                pointer_mean: r.pointer_mean,
                                postselection_probability: r.postselection_probability,
                                inferred_weak_value_re: r.inferred_weak_value_re,
                            })
                            .into(),
                    })
                    .collect(),
            );
        }
        ScenarioName::Ifm => {
            results.without_obstacle = Some(mach_zehnder(false).into());
            results.with_obstacle = Some(mach_zehnder(true).into());
        }
    }
    Report { scenario: name.to_string(), tool_version: TOOL_VERSION.to_string(), results }
}

pub fn run_scenario(scenario: &NamedScenario, opts: &RunOptions) -> Report {
    Report {
        scenario: scenario.name.clone(),
        tool_version: TOOL_VERSION.to_string(),
        results: evaluate(scenario, opts),
    }
}

fn fmt_complex(z: &ComplexValue) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6} {} {:.6}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
    }
}

fn fmt_entry<T>(e: &Entry<T>, f: impl FnOnce(&T) -> String) -> String {
    match e {
        Entry::Ok(v) => f(v),
        Entry::Err { error } => format!("error: {error}"),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.results;
        writeln!(f, "scenario: {} (qcf {})", self.scenario, self.tool_version)?;

        if let Some(ens) = &r.ensemble {
            let line = fmt_entry(ens, |e| {
                format!(
                    "dim {}, <post|pre> = {}, |<post|pre>|^2 = {:.6}",
                    e.dim,
                    fmt_complex(&e.overlap),
                    e.overlap_probability
                )
            });
            writeln!(f, "\nensemble: {line}")?;
        }

        if let Some(obs) = &r.observables {
            writeln!(f, "\nobservables:")?;
            for o in obs {
                writeln!(f, "  {}", o.label)?;
                let probs = fmt_entry(&o.abl, |m| {
                    m.0.iter().fold(String::new(), |mut s, (k, p)| {
                        let _ = write!(s, "  {k}: {p:.6}");
                        s
                    })
                });
                writeln!(f, "    two-time probabilities:{probs}")?;
                let eor = fmt_entry(&o.element_of_reality, |e| match e {
                    Some(e) => format!("{} = {} ({})", o.label, e.eigenvalue, e.outcome),
                    None => "none".to_string(),
                });
                writeln!(f, "    element of reality: {eor}")?;
                writeln!(f, "    weak value: {}", fmt_entry(&o.weak_value, fmt_complex))?;
            }
        }

        if let Some(wv) = &r.weak_values {
            writeln!(f, "\nweak values:")?;
            for (k, v) in &wv.0 {
                writeln!(f, "  ({k})_w = {}", fmt_entry(v, fmt_complex))?;
            }
        }

        if let Some(ptr) = &r.pointer {
            writeln!(f, "\npointer simulation:")?;
            for p in ptr {
                let line = fmt_entry(&p.outcome, |o| {
                    format!(
                        "eps = {}, mean = {:.6e}, inferred = {:.6}, p(post) = {:.6}",
                        o.coupling, o.pointer_mean, o.inferred_weak_value_re, o.postselection_probability
                    )
                });
                writeln!(f, "  {:<10} {line}", p.observable)?;
            }
        }

        if let Some(checks) = &r.quantum_check {
            writeln!(f, "\nquantum product checks:")?;
            for c in checks {
                writeln!(
                    f,
                    "  {} = {:+}: {} (residual {:.1e})",
                    c.label,
                    c.expected,
                    if c.holds { "holds" } else { "fails" },
                    c.residual
                )?;
            }
        }

        if let Some(lhv) = &r.lhv {
            writeln!(f, "\nlocal hidden variables:")?;
            match lhv {
                Entry::Ok(l) => {
                    for c in &l.constraints {
                        writeln!(f, "  {c}")?;
                    }
                    writeln!(
                        f,
                        "  checked {} assignments: {} satisfying",
                        l.assignments_checked, l.satisfier_count
                    )?;
                    if let Some(a) = &l.first_assignment {
                        let vals: Vec<String> = a.0.iter().map(|(k, v)| format!("{k}={v:+}")).collect();
                        writeln!(f, "  first: {}", vals.join(" "))?;
                    }
                    match &l.parity_certificate {
                        Some(c) => writeln!(f, "  parity certificate: constraints {c:?}")?,
                        None => writeln!(f, "  parity certificate: none")?,
                    }
                }
                Entry::Err { error } => writeln!(f, "  error: {error}")?,
            }
        }

        for (name, mz) in [("without obstacle", &r.without_obstacle), ("with obstacle", &r.with_obstacle)] {
            if let Some(m) = mz {
                writeln!(
                    f,
                    "\ninterferometer {name}: dark {:.6}, bright {:.6}, absorbed {:.6}",
                    m.p_dark, m.p_bright, m.p_absorbed
                )?;
            }
        }
        Ok(())
    }
}
