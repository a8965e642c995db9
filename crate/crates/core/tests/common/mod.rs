#![allow(dead_code)]

use std::collections::BTreeMap;

use qcf_core::lhv::{ConstraintSet, ProductConstraint, Setting, Sign};
use qcf_core::linalg::{Amplitude, Operator, StateVector};
use qcf_core::pps::{Branch, PrePostEnsemble, ProjectorDecomposition};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    let amps = (0..dim)
        .map(|_| Amplitude::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::new(amps).unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let v = random_vector(rng, dim);
        if v.norm() > 1e-3 {
            return v.normalize().unwrap();
        }
    }
}

/// Orthonormal basis by Gram-Schmidt on random vectors.
pub fn random_basis<R: Rng>(rng: &mut R, dim: usize) -> Vec<StateVector> {
    let mut basis: Vec<StateVector> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = random_vector(rng, dim);
        for b in &basis {
            let c = qcf_core::inner(b, &v).unwrap();
            v = v.sub(&b.scale(c).unwrap()).unwrap();
        }
        if v.norm() > 1e-3 {
            basis.push(v.normalize().unwrap());
        }
    }
    basis
}

pub fn random_operator<R: Rng>(rng: &mut R, dim: usize) -> Operator {
    let entries = (0..dim * dim)
        .map(|_| Amplitude::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Operator::new(dim, entries).unwrap()
}

/// Random projective measurement: a random orthonormal basis split into
/// 1..=dim non-empty groups, each group tagged with a distinct eigenvalue.
pub fn random_decomposition<R: Rng>(rng: &mut R, dim: usize) -> ProjectorDecomposition {
    let mut basis = random_basis(rng, dim);
    basis.shuffle(rng);
    let groups = rng.gen_range(1..=dim);
    let mut owner: Vec<usize> = (0..dim).map(|i| if i < groups { i } else { rng.gen_range(0..groups) }).collect();
    owner.shuffle(rng);
    let mut eigenvalues: Vec<f64> = Vec::with_capacity(groups);
    while eigenvalues.len() < groups {
        let e = (rng.gen_range(-3.0f64..3.0) * 8.0).round() / 8.0;
        if !eigenvalues.contains(&e) {
            eigenvalues.push(e);
        }
    }
    let branches = (0..groups)
        .map(|g| {
            let mut p = Operator::zeros(dim).unwrap();
            for (v, _) in basis.iter().zip(&owner).filter(|(_, &o)| o == g) {
                p = p.add(&Operator::projector_onto(v).unwrap()).unwrap();
            }
            Branch::new(format!("o{g}"), eigenvalues[g], p)
        })
        .collect();
    ProjectorDecomposition::new("random", branches).unwrap()
}

pub fn random_ensemble<R: Rng>(rng: &mut R, dim: usize) -> PrePostEnsemble {
    PrePostEnsemble::new(random_state(rng, dim), random_state(rng, dim)).unwrap()
}

/// An ensemble/decomposition pair in which outcome `target` is certain:
/// `post` is drawn orthogonal to every `P_b|pre⟩` with `b != target`.
/// Returns `None` if the draw is degenerate (tiny overlap or no room left).
pub fn ensemble_with_certainty<R: Rng>(
    rng: &mut R,
    pre: StateVector,
    obs: &ProjectorDecomposition,
    target: usize,
    min_overlap: f64,
) -> Option<PrePostEnsemble> {
    let dim = pre.dim();
    let mut excluded: Vec<StateVector> = Vec::new();
    for (i, b) in obs.branches().iter().enumerate() {
        if i == target {
            continue;
        }
        let mut v = b.projector.apply(&pre).unwrap();
        for e in &excluded {
            let c = qcf_core::inner(e, &v).unwrap();
            v = v.sub(&e.scale(c).unwrap()).unwrap();
        }
        if v.norm() > 1e-9 {
            excluded.push(v.normalize().unwrap());
        }
    }
    let mut post = random_vector(rng, dim);
    for e in &excluded {
        let c = qcf_core::inner(e, &post).unwrap();
        post = post.sub(&e.scale(c).unwrap()).unwrap();
    }
    if post.norm() < 1e-6 {
        return None;
    }
    let ens = PrePostEnsemble::new(pre, post.normalize().unwrap()).ok()?;
    if ens.overlap().norm() < min_overlap {
        return None;
    }
    Some(ens)
}

/// Random parity constraints over `k` settings named P0..P{k-1}.
pub fn random_constraint_set<R: Rng>(rng: &mut R, k: usize, m: usize) -> ConstraintSet {
    let universe: Vec<Setting> = (0..k).map(|i| Setting::new(format!("P{i:02}"), "z")).collect();
    let constraints = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=k.min(4));
            let settings: Vec<Setting> = universe.choose_multiple(rng, size).cloned().collect();
            let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            ProductConstraint::new(settings, sign).unwrap()
        })
        .collect();
    ConstraintSet::new(universe, constraints).unwrap()
}

/// Independent brute force: builds every ±1 table as a plain map, multiplies
/// values as integers and counts tables meeting every constraint. Returns the
/// count and the first satisfying table in the canonical counter order.
pub fn brute_force(cs: &ConstraintSet) -> (u64, Option<BTreeMap<Setting, i32>>) {
    let mut settings: Vec<Setting> = cs.universe().to_vec();
    settings.sort_by(|a, b| (a.party.as_str(), a.observable.as_str()).cmp(&(b.party.as_str(), b.observable.as_str())));
    let k = settings.len();
    let mut count = 0;
    let mut first = None;
    for n in 0..(1u64 << k) {
        let table: BTreeMap<Setting, i32> = settings
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let bit = (n >> (k - 1 - i)) & 1;
                (s.clone(), if bit == 1 { -1 } else { 1 })
            })
            .collect();
        let ok = cs.constraints().iter().all(|c| {
            let product: i32 = c.settings().iter().map(|s| table[s]).product();
            product == i32::from(c.required().value())
        });
        if ok {
            count += 1;
            if first.is_none() {
                first = Some(table);
            }
        }
    }
    (count, first)
}
