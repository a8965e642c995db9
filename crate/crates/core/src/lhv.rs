//! Deterministic local hidden-variable assignments and parity constraints.
//!
//! A hidden-variable model fixes a ±1 outcome for every (party, setting)
//! pair in advance. A [`ConstraintSet`] lists products of such outcomes that
//! the model must reproduce. [`search`] enumerates every assignment in a
//! fixed order; [`parity_certificate`] looks for a subset of constraints that
//! is contradictory on parity grounds alone.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest universe [`search`] will enumerate (2^24 assignments).
pub const MAX_UNIVERSE: usize = 24;

/// Largest constraint count [`parity_certificate`] will search.
pub const MAX_CERTIFICATE_CONSTRAINTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Setting {
    pub party: String,
    pub observable: String,
}

impl Setting {
    pub fn new(party: impl Into<String>, observable: impl Into<String>) -> Self {
        Self { party: party.into(), observable: observable.into() }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.party, self.observable)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<Setting, Sign>,
}

impl Assignment {
    pub fn new(values: BTreeMap<Setting, Sign>) -> Self {
        Self { values }
    }

    pub fn get(&self, s: &Setting) -> Option<Sign> {
        self.values.get(s).copied()
    }

    /// Values in canonical setting order.
    pub fn iter(&self) -> impl Iterator<Item = (&Setting, Sign)> {
        self.values.iter().map(|(s, v)| (s, *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromIterator<(Setting, Sign)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Setting, Sign)>>(iter: I) -> Self {
        Self { values: iter.into_iter().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductConstraint {
    settings: Vec<Setting>,
    required: Sign,
}

impl ProductConstraint {
    pub fn new(settings: Vec<Setting>, required: Sign) -> Result<Self> {
        if settings.is_empty() {
            return Err(Error::InvalidConstraint("constraint has no settings".into()));
        }
        for (i, s) in settings.iter().enumerate() {
            if settings[..i].contains(s) {
                return Err(Error::InvalidConstraint(format!("setting {s} repeated in one constraint")));
            }
        }
        Ok(Self { settings, required })
    }

    pub fn settings(&self) -> &[Setting] {
        &self.settings
    }

    pub fn required(&self) -> Sign {
        self.required
    }
}

impl fmt::Display for ProductConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.settings.iter().map(|s| format!("{{{s}}}")).collect();
        write!(f, "{} = {:+}", names.join(" "), self.required.value())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    universe: Vec<Setting>,
    constraints: Vec<ProductConstraint>,
}

impl ConstraintSet {
    /// The universe is stored sorted by (party, observable).
    pub fn new(universe: Vec<Setting>, constraints: Vec<ProductConstraint>) -> Result<Self> {
        let mut sorted = universe;
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidConstraint(format!("setting {} repeated in universe", w[0])));
        }
        if sorted.len() > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge { size: sorted.len(), max: MAX_UNIVERSE });
        }
        for (i, c) in constraints.iter().enumerate() {
            if let Some(s) = c.settings.iter().find(|s| sorted.binary_search(s).is_err()) {
                return Err(Error::InvalidConstraint(format!("constraint {i} uses {s} outside the universe")));
            }
        }
        Ok(Self { universe: sorted, constraints })
    }

    pub fn universe(&self) -> &[Setting] {
        &self.universe
    }

    pub fn constraints(&self) -> &[ProductConstraint] {
        &self.constraints
    }

    /// Same universe, only the constraints at `indices`.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            universe: self.universe.clone(),
            constraints: indices.iter().map(|&i| self.constraints[i].clone()).collect(),
        }
    }

    fn bit_of(&self, s: &Setting) -> u32 {
        let pos = self.universe.binary_search(s).expect("setting in universe");
        (self.universe.len() - 1 - pos) as u32
    }

    fn mask(&self, c: &ProductConstraint) -> u32 {
        c.settings.iter().fold(0, |m, s| m | (1 << self.bit_of(s)))
    }

    /// Assignment number `n` of the canonical counter. The first setting in
    /// universe order is the most significant bit; a set bit means -1.
    pub fn assignment(&self, n: u32) -> Assignment {
        self.universe
            .iter()
            .map(|s| {
                let sign = if n >> self.bit_of(s) & 1 == 1 { Sign::Minus } else { Sign::Plus };
                (s.clone(), sign)
            })
            .collect()
    }
}

pub fn satisfies(a: &Assignment, c: &ProductConstraint) -> Result<bool> {
    let mut product = Sign::Plus;
    for s in &c.settings {
        product = product * a.get(s).ok_or_else(|| Error::MissingSetting(s.to_string()))?;
    }
    Ok(product == c.required)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub first: Option<Assignment>,
    pub count: u64,
}

impl SearchResult {
    pub fn satisfiable(&self) -> bool {
        self.first.is_some()
    }
}

/// Exhaustive enumeration of all `2^|universe|` assignments in counter order.
pub fn search(cs: &ConstraintSet) -> Result<SearchResult> {
    let k = cs.universe.len();
    if k > MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge { size: k, max: MAX_UNIVERSE });
    }
    // Each constraint holds iff the number of -1 values among its settings
    // has the parity of its required sign.
    let checks: Vec<(u32, u32)> = cs
        .constraints
        .iter()
        .map(|c| (cs.mask(c), u32::from(c.required == Sign::Minus)))
        .collect();
    let mut first = None;
    let mut count = 0u64;
    for n in 0..(1u32 << k) {
        if checks.iter().all(|&(mask, parity)| (n & mask).count_ones() & 1 == parity) {
            if first.is_none() {
                first = Some(n);
            }
            count += 1;
        }
    }
    Ok(SearchResult { first: first.map(|n| cs.assignment(n)), count })
}

/// Smallest subset of constraints (lexicographically first among equal
/// sizes) in which every setting occurs an even number of times while the
/// required signs multiply to -1. Such a subset cannot be satisfied by any
/// assignment. Returns `None` when there is none, or when the set has more
/// than [`MAX_CERTIFICATE_CONSTRAINTS`] constraints.
pub fn parity_certificate(cs: &ConstraintSet) -> Option<Vec<usize>> {
    let m = cs.constraints.len();
    if m > MAX_CERTIFICATE_CONSTRAINTS {
        return None;
    }
    let rows: Vec<(u32, bool)> =
        cs.constraints.iter().map(|c| (cs.mask(c), c.required == Sign::Minus)).collect();
    let mut subsets: Vec<u32> = (1..(1u32 << m)).collect();
    // Within one size, descending reversed bits is lexicographic order of index lists.
    subsets.sort_by_key(|&s| (s.count_ones(), std::cmp::Reverse(s.reverse_bits())));
    subsets.into_iter().find_map(|s| {
        let (mask, odd) = (0..m)
            .filter(|i| s >> i & 1 == 1)
            .fold((0u32, false), |(mask, odd), i| (mask ^ rows[i].0, odd ^ rows[i].1));
        (mask == 0 && odd).then(|| (0..m).filter(|i| s >> i & 1 == 1).collect())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(p: &str, o: &str) -> Setting {
        Setting::new(p, o)
    }

    fn xxx(required: Sign) -> ProductConstraint {
        ProductConstraint::new(vec![st("A", "x"), st("B", "x"), st("C", "x")], required).unwrap()
    }

    fn all_plus(c: &ProductConstraint) -> Assignment {
        c.settings().iter().map(|s| (s.clone(), Sign::Plus)).collect()
    }

    #[test]
    fn satisfies_examples() {
        let plus = xxx(Sign::Plus);
        assert!(satisfies(&all_plus(&plus), &plus).unwrap());
        let minus = xxx(Sign::Minus);
        assert!(!satisfies(&all_plus(&minus), &minus).unwrap());
        let flipped: Assignment = [
            (st("A", "x"), Sign::Minus),
            (st("B", "x"), Sign::Plus),
            (st("C", "x"), Sign::Plus),
        ]
        .into_iter()
        .collect();
        assert!(satisfies(&flipped, &minus).unwrap());
    }

    #[test]
    fn satisfies_missing_setting() {
        let a: Assignment = [(st("A", "x"), Sign::Plus)].into_iter().collect();
        assert_eq!(satisfies(&a, &xxx(Sign::Plus)), Err(Error::MissingSetting("B_x".into())));
    }

    #[test]
    fn empty_constraint_set() {
        let cs = ConstraintSet::new(vec![st("A", "x"), st("B", "x")], vec![]).unwrap();
        let r = search(&cs).unwrap();
        assert_eq!(r.count, 4);
        let first = r.first.unwrap();
        assert!(first.iter().all(|(_, v)| v == Sign::Plus));
    }

    #[test]
    fn canonical_counter_order() {
        let cs = ConstraintSet::new(vec![st("B", "x"), st("A", "x")], vec![]).unwrap();
        assert_eq!(cs.universe()[0], st("A", "x"));
        // n = 1 flips the last setting in universe order.
        let a = cs.assignment(1);
        assert_eq!(a.get(&st("A", "x")), Some(Sign::Plus));
        assert_eq!(a.get(&st("B", "x")), Some(Sign::Minus));
        let a = cs.assignment(2);
        assert_eq!(a.get(&st("A", "x")), Some(Sign::Minus));
    }

    #[test]
    fn first_satisfier_is_canonical() {
        let cs = ConstraintSet::new(
            vec![st("A", "x"), st("B", "x"), st("C", "x")],
            vec![xxx(Sign::Minus)],
        )
        .unwrap();
        let r = search(&cs).unwrap();
        assert_eq!(r.count, 4);
        // 001: C_x = -1 is the first odd-weight counter value.
        let a = r.first.unwrap();
        assert_eq!(a.get(&st("C", "x")), Some(Sign::Minus));
        assert_eq!(a.get(&st("A", "x")), Some(Sign::Plus));
    }

    #[test]
    fn constraint_validation() {
        assert!(ProductConstraint::new(vec![], Sign::Plus).is_err());
        assert!(ProductConstraint::new(vec![st("A", "x"), st("A", "x")], Sign::Plus).is_err());
        assert!(ConstraintSet::new(vec![st("A", "x")], vec![xxx(Sign::Plus)]).is_err());
        assert!(ConstraintSet::new(vec![st("A", "x"), st("A", "x")], vec![]).is_err());
        let big: Vec<Setting> = (0..25).map(|i| st(&format!("P{i:02}"), "x")).collect();
        assert!(matches!(ConstraintSet::new(big, vec![]), Err(Error::UniverseTooLarge { size: 25, .. })));
    }

    #[test]
    fn certificate_examples() {
        let universe = vec![st("A", "x"), st("B", "x"), st("C", "x")];
        let single = ConstraintSet::new(universe.clone(), vec![xxx(Sign::Minus)]).unwrap();
        assert_eq!(parity_certificate(&single), None);

        let pair = ConstraintSet::new(universe.clone(), vec![xxx(Sign::Plus), xxx(Sign::Minus)]).unwrap();
        assert_eq!(parity_certificate(&pair), Some(vec![0, 1]));

        let consistent = ConstraintSet::new(universe, vec![xxx(Sign::Plus), xxx(Sign::Plus)]).unwrap();
        assert_eq!(parity_certificate(&consistent), None);
    }

    #[test]
    fn certificate_prefers_smallest_subset() {
        let universe = vec![st("A", "x"), st("B", "x"), st("C", "x")];
        let c = ProductConstraint::new(vec![st("A", "x")], Sign::Plus).unwrap();
        let cs = ConstraintSet::new(
            universe,
            vec![c.clone(), xxx(Sign::Plus), xxx(Sign::Minus), ProductConstraint::new(vec![st("A", "x")], Sign::Minus).unwrap()],
        )
        .unwrap();
        assert_eq!(parity_certificate(&cs), Some(vec![0, 3]));
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::Plus * Sign::Minus, Sign::Minus);
        assert_eq!(Sign::from_value(-1), Some(Sign::Minus));
        assert_eq!(Sign::from_value(0), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(xxx(Sign::Minus).to_string(), "{A_x} {B_x} {C_x} = -1");
    }
}
