//! Bottleneck distance between covers of equal cardinality, and a checker
//! for the birth shift between their Steinhaus nerves.

use std::collections::BTreeSet;

use num::Zero;
use rand::Rng;
use serde::Serialize;

use crate::cover::{fraction_to_f64, symmetric_difference_measure, Cover, Fraction};
use crate::error::{Error, Result};
use crate::matching::bottleneck_assignment;
use crate::nerve::{build_steinhaus_nerve, NerveOptions};

/// A bijection between element indices and its largest pair cost.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverMatching {
    /// `(i, j)`: element `i` of the first cover matched to element `j` of the second.
    pub pairs: Vec<(usize, usize)>,
    /// max over pairs of μ(U_i △ V_j)
    pub cost: Fraction,
}

impl CoverMatching {
    pub fn partner(&self, i: usize) -> usize {
        self.pairs[i].1
    }
}

/// Bottleneck distance `min over matchings of max μ(U △ V)` and one optimal
/// matching.
pub fn cover_bottleneck(u: &Cover, v: &Cover) -> Result<(Fraction, CoverMatching)> {
    if u.len() != v.len() {
        return Err(Error::UnequalCardinality(u.len(), v.len()));
    }
    let measure = u.measure().merge(v.measure()).ok_or(Error::MeasureMismatch)?;
    let costs: Vec<Vec<Option<Fraction>>> = u
        .elements()
        .iter()
        .map(|a| {
            v.elements()
                .iter()
                .map(|b| Some(symmetric_difference_measure(a, b, &measure)))
                .collect()
        })
        .collect();
    let (cost, assignment) = bottleneck_assignment(&costs).expect("complete bipartite graph");
    let cost = cost.unwrap_or_else(Fraction::zero);
    let pairs = assignment.into_iter().enumerate().collect();
    Ok((cost, CoverMatching { pairs, cost }))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MetricReport {
    pub covers: usize,
    pub triples_checked: usize,
    pub identity_violations: usize,
    pub symmetry_violations: usize,
    pub triangle_violations: usize,
}

impl MetricReport {
    pub fn is_clean(&self) -> bool {
        self.identity_violations == 0 && self.symmetry_violations == 0 && self.triangle_violations == 0
    }
}

/// Checks d(U,U) = 0 for every cover, then symmetry and the triangle
/// inequality on `trials` sampled triples.
pub fn verify_metric_axioms<R: Rng + ?Sized>(
    covers: &[Cover],
    trials: usize,
    rng: &mut R,
) -> Result<MetricReport> {
    let mut report = MetricReport {
        covers: covers.len(),
        ..Default::default()
    };
    for c in covers {
        if !cover_bottleneck(c, c)?.0.is_zero() {
            report.identity_violations += 1;
        }
    }
    if covers.is_empty() {
        return Ok(report);
    }
    for _ in 0..trials {
        let (a, b, c) = (
            &covers[rng.random_range(0..covers.len())],
            &covers[rng.random_range(0..covers.len())],
            &covers[rng.random_range(0..covers.len())],
        );
        let ab = cover_bottleneck(a, b)?.0;
        let ba = cover_bottleneck(b, a)?.0;
        let bc = cover_bottleneck(b, c)?.0;
        let ac = cover_bottleneck(a, c)?.0;
        if ab != ba {
            report.symmetry_violations += 1;
        }
        if ac > ab + bc {
            report.triangle_violations += 1;
        }
        report.triples_checked += 1;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexShift {
    /// Element indices in the first cover.
    pub simplex: Vec<usize>,
    /// The same simplex through the matching.
    pub matched: Vec<usize>,
    pub birth_u: Fraction,
    pub birth_v: Fraction,
    pub shift: Fraction,
}

#[derive(Clone, Debug)]
pub struct InterleavingReport {
    /// Bottleneck distance between the covers.
    pub alpha: Fraction,
    /// Smallest element measure over both covers.
    pub m: Fraction,
    pub max_birth_shift: Fraction,
    /// alpha / m
    pub bound: Fraction,
    pub satisfied: bool,
    pub matching: CoverMatching,
    pub simplices_checked: usize,
    /// Matched simplices whose birth shift exceeds the bound.
    pub violations: Vec<SimplexShift>,
}

/// JSON shape of [`InterleavingReport`].
#[derive(Debug, Serialize)]
pub struct InterleavingSummary {
    pub alpha: f64,
    pub m: f64,
    pub max_birth_shift: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub alpha_exact: String,
    pub bound_exact: String,
    pub max_birth_shift_exact: String,
    pub simplices_checked: usize,
    pub violations: usize,
}

impl InterleavingReport {
    pub fn summary(&self) -> InterleavingSummary {
        InterleavingSummary {
            alpha: fraction_to_f64(&self.alpha),
            m: fraction_to_f64(&self.m),
            max_birth_shift: fraction_to_f64(&self.max_birth_shift),
            bound: fraction_to_f64(&self.bound),
            satisfied: self.satisfied,
            alpha_exact: self.alpha.to_string(),
            bound_exact: self.bound.to_string(),
            max_birth_shift_exact: self.max_birth_shift.to_string(),
            simplices_checked: self.simplices_checked,
            violations: self.violations.len(),
        }
    }
}

/// Compares the Steinhaus nerves of `u` and `v` simplex by simplex through
/// an optimal element matching. Every simplex of either nerve (up to
/// `max_dim`) is checked; a collection with empty intersection has birth 1.
/// Births are exact, so the comparison against `alpha / m` has no tolerance.
pub fn certify_interleaving(u: &Cover, v: &Cover, max_dim: usize) -> Result<InterleavingReport> {
    let (alpha, matching) = cover_bottleneck(u, v)?;
    let m = match (u.min_measure(), v.min_measure()) {
        (Some(a), Some(b)) => a.min(b),
        _ => Fraction::from_integer(1),
    };
    let bound = alpha / m;
    let opts = NerveOptions::with_max_dim(max_dim);
    let nerve_u = build_steinhaus_nerve(u, &opts)?;
    let nerve_v = build_steinhaus_nerve(v, &opts)?;

    let forward: Vec<usize> = matching.pairs.iter().map(|&(_, j)| j).collect();
    let mut backward = vec![0usize; forward.len()];
    for (i, &j) in forward.iter().enumerate() {
        backward[j] = i;
    }
    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    simplices.extend(nerve_u.simplices().iter().map(|s| s.vertices.clone()));
    simplices.extend(nerve_v.simplices().iter().map(|s| {
        let mut mapped: Vec<usize> = s.vertices.iter().map(|&j| backward[j]).collect();
        mapped.sort_unstable();
        mapped
    }));

    let mut max_shift = Fraction::zero();
    let mut violations = Vec::new();
    for simplex in &simplices {
        let mut matched: Vec<usize> = simplex.iter().map(|&i| forward[i]).collect();
        matched.sort_unstable();
        let birth_u = u.steinhaus_of(simplex)?;
        let birth_v = v.steinhaus_of(&matched)?;
        let shift = if birth_u > birth_v { birth_u - birth_v } else { birth_v - birth_u };
        if shift > max_shift {
            max_shift = shift;
        }
        if shift > bound {
            violations.push(SimplexShift {
                simplex: simplex.clone(),
                matched,
                birth_u,
                birth_v,
                shift,
            });
        }
    }
    Ok(InterleavingReport {
        alpha,
        m,
        max_birth_shift: max_shift,
        bound,
        satisfied: violations.is_empty(),
        matching,
        simplices_checked: simplices.len(),
        violations,
    })
}
