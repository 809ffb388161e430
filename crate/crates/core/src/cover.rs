//! Measured sets, covers, and the (generalized) Steinhaus distance.
//!
//! Members are interned to dense `u32` ids. Measures are exact: the counting
//! measure uses integer masses and weighted measures use rational weights, so
//! every Steinhaus value is an exact [`Fraction`] and is converted to `f64`
//! only when asked.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for masses and Steinhaus values.
pub type Fraction = num::rational::Ratio<i128>;

pub type MemberId = u32;

pub fn fraction_to_f64(f: &Fraction) -> f64 {
    f.to_f64().unwrap_or(f64::NAN)
}

/// Maps member names to dense ids, in first-seen order.
#[derive(Clone, Debug, Default)]
pub struct Interner {
    names: Vec<String>,
    ids: HashMap<String, MemberId>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> MemberId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as MemberId;
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<MemberId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: MemberId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> Arc<Vec<String>> {
        Arc::new(self.names.clone())
    }
}

/// A measure on member ids: counting, or explicit positive weights where
/// members missing from the map weigh 1.
#[derive(Clone, Debug, Default)]
pub enum Measure {
    #[default]
    Counting,
    Weighted(Arc<HashMap<MemberId, Fraction>>),
}

impl PartialEq for Measure {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Measure::Counting, Measure::Counting) => true,
            (Measure::Weighted(a), Measure::Weighted(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Measure {
    pub fn weighted(weights: HashMap<MemberId, Fraction>) -> Result<Self> {
        if let Some((id, w)) = weights.iter().find(|(_, w)| **w <= Fraction::zero()) {
            return Err(Error::NonPositiveWeight {
                member: id.to_string(),
                weight: w.to_string(),
            });
        }
        Ok(Measure::Weighted(Arc::new(weights)))
    }

    pub fn is_counting(&self) -> bool {
        matches!(self, Measure::Counting)
    }

    pub fn weight(&self, id: MemberId) -> Fraction {
        match self {
            Measure::Counting => Fraction::one(),
            Measure::Weighted(w) => w.get(&id).copied().unwrap_or_else(Fraction::one),
        }
    }

    /// Mass of a set of distinct members.
    pub fn mass(&self, members: &[MemberId]) -> Fraction {
        match self {
            Measure::Counting => Fraction::from_integer(members.len() as i128),
            Measure::Weighted(w) => members.iter().fold(Fraction::zero(), |acc, id| {
                acc + w.get(id).copied().unwrap_or_else(Fraction::one)
            }),
        }
    }

    /// Two measures are compatible when they agree on every member both
    /// weigh explicitly. The merged measure takes the union of both maps.
    pub fn merge(&self, other: &Measure) -> Option<Measure> {
        match (self, other) {
            (Measure::Counting, Measure::Counting) => Some(Measure::Counting),
            (Measure::Weighted(a), Measure::Weighted(b)) => {
                if Arc::ptr_eq(a, b) {
                    return Some(self.clone());
                }
                let mut merged = (**a).clone();
                for (id, w) in b.iter() {
                    match merged.get(id) {
                        Some(existing) if existing != w => return None,
                        _ => {
                            merged.insert(*id, *w);
                        }
                    }
                }
                Some(Measure::Weighted(Arc::new(merged)))
            }
            _ => None,
        }
    }
}

/// Finite set of members with a positive measure.
#[derive(Clone, Debug)]
pub struct MeasuredSet {
    label: String,
    members: Vec<MemberId>,
    measure: Measure,
    mass: Fraction,
}

impl MeasuredSet {
    /// Duplicate members collapse. Zero-measure sets are rejected.
    pub fn new(
        label: impl Into<String>,
        members: impl IntoIterator<Item = MemberId>,
        measure: Measure,
    ) -> Result<Self> {
        let label = label.into();
        let mut members: Vec<MemberId> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        let mass = measure.mass(&members);
        if mass <= Fraction::zero() {
            return Err(Error::ZeroMeasure(label));
        }
        Ok(Self {
            label,
            members,
            measure,
            mass,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sorted, distinct member ids.
    pub fn members(&self) -> &[MemberId] {
        &self.members
    }

    pub fn measure_kind(&self) -> &Measure {
        &self.measure
    }

    pub fn measure(&self) -> Fraction {
        self.mass
    }

    pub fn contains(&self, id: MemberId) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for MeasuredSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({} members)", self.label, self.members.len())
    }
}

pub fn intersect_sorted(a: &[MemberId], b: &[MemberId]) -> Vec<MemberId> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn union_sorted(a: &[MemberId], b: &[MemberId]) -> Vec<MemberId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn symmetric_difference_sorted(a: &[MemberId], b: &[MemberId]) -> Vec<MemberId> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `1 - shared/total`, with `total > 0`.
pub(crate) fn steinhaus_from_masses(shared: Fraction, total: Fraction) -> Fraction {
    Fraction::one() - shared / total
}

/// Steinhaus distance `1 - μ(a∩b)/μ(a∪b)` under `a`'s measure.
pub fn steinhaus_distance(a: &MeasuredSet, b: &MeasuredSet) -> Fraction {
    debug_assert!(a.measure == b.measure, "sets must share a measure");
    let shared = a.measure.mass(&intersect_sorted(&a.members, &b.members));
    let total = a.mass + b.mass - shared;
    steinhaus_from_masses(shared, total)
}

/// Generalized Steinhaus distance `1 - μ(⋂)/μ(⋃)` of a nonempty collection.
pub fn generalized_steinhaus(sets: &[&MeasuredSet]) -> Result<Fraction> {
    let (first, rest) = sets.split_first().ok_or(Error::EmptyCollection)?;
    if rest.is_empty() {
        return Ok(Fraction::zero());
    }
    let mut inter = first.members.clone();
    let mut union = first.members.clone();
    for s in rest {
        inter = intersect_sorted(&inter, &s.members);
        union = union_sorted(&union, &s.members);
    }
    let measure = &first.measure;
    Ok(steinhaus_from_masses(measure.mass(&inter), measure.mass(&union)))
}

/// μ(a △ b), measured with `measure`.
pub fn symmetric_difference_measure(a: &MeasuredSet, b: &MeasuredSet, measure: &Measure) -> Fraction {
    measure.mass(&symmetric_difference_sorted(&a.members, &b.members))
}

/// Ordered, labeled collection of measured sets sharing one measure. The
/// universe is the union of the elements, so the cover property holds by
/// construction.
#[derive(Clone, Debug)]
pub struct Cover {
    elements: Vec<MeasuredSet>,
    universe: Vec<MemberId>,
    measure: Measure,
    member_names: Option<Arc<Vec<String>>>,
}

impl Cover {
    pub fn new(measure: Measure, elements: Vec<(String, Vec<MemberId>)>) -> Result<Self> {
        let sets = elements
            .into_iter()
            .map(|(label, members)| MeasuredSet::new(label, members, measure.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sets(sets, measure)
    }

    pub fn from_sets(elements: Vec<MeasuredSet>, measure: Measure) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut universe = Vec::new();
        for e in &elements {
            if !seen.insert(e.label.as_str()) {
                return Err(Error::DuplicateLabel(e.label.clone()));
            }
            if e.measure != measure {
                return Err(Error::MeasureMismatch);
            }
            universe = union_sorted(&universe, &e.members);
        }
        Ok(Self {
            elements,
            universe,
            measure,
            member_names: None,
        })
    }

    /// Counting-measure cover from plain member lists, labeled `0, 1, ...`.
    pub fn counting<I, J>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = MemberId>,
    {
        let elements = elements
            .into_iter()
            .enumerate()
            .map(|(i, m)| (i.to_string(), m.into_iter().collect()))
            .collect();
        Self::new(Measure::Counting, elements)
    }

    pub fn with_member_names(mut self, names: Arc<Vec<String>>) -> Self {
        self.member_names = Some(names);
        self
    }

    pub fn member_name(&self, id: MemberId) -> String {
        self.member_names
            .as_ref()
            .and_then(|n| n.get(id as usize).cloned())
            .unwrap_or_else(|| id.to_string())
    }

    pub fn member_names(&self) -> Option<&Arc<Vec<String>>> {
        self.member_names.as_ref()
    }

    pub fn elements(&self) -> &[MeasuredSet] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &MeasuredSet {
        &self.elements[i]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn universe(&self) -> &[MemberId] {
        &self.universe
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + Clone {
        self.elements.iter().map(|e| e.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.label == label)
    }

    /// Smallest element measure; `None` for an empty cover.
    pub fn min_measure(&self) -> Option<Fraction> {
        self.elements.iter().map(|e| e.mass).min()
    }

    /// Generalized Steinhaus distance of the elements at `indices`.
    pub fn steinhaus_of(&self, indices: &[usize]) -> Result<Fraction> {
        let sets: Vec<&MeasuredSet> = indices.iter().map(|&i| &self.elements[i]).collect();
        generalized_steinhaus(&sets)
    }
}
