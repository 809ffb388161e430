//! H0/H1 persistence diagrams over Z/2 and their bottleneck distance.
//!
//! H0 comes from a union-find sweep with the elder rule; H1 from reducing
//! the triangle-to-edge boundary columns.

use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::bottleneck_assignment;
use crate::nerve::FilteredComplex;
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    /// `f64::INFINITY` for essential classes.
    pub death: f64,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    /// Born and killed at the same filtration value.
    pub fn is_zero_persistence(&self) -> bool {
        self.birth == self.death
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// Persistence pairs in dimensions `0..=max_hom_dim` (at most 1). Pairs
/// with zero persistence are kept.
pub fn persistence_diagram(complex: &FilteredComplex, max_hom_dim: usize) -> Vec<PersistencePair> {
    let simplices = complex.simplices();
    let n_vertices = simplices
        .iter()
        .filter(|s| s.vertices.len() == 1)
        .map(|s| s.vertices[0] + 1)
        .max()
        .unwrap_or(0);
    let mut vertex_birth = vec![f64::NAN; n_vertices];
    let mut uf = UnionFind::new(n_vertices);
    // per root: (birth, oldest vertex)
    let mut component: Vec<(f64, usize)> = (0..n_vertices).map(|v| (f64::NAN, v)).collect();
    let mut pairs = Vec::new();
    let mut positive_edges: Vec<usize> = Vec::new();
    let mut edge_column: HashMap<usize, usize> = HashMap::new();

    for (pos, s) in simplices.iter().enumerate() {
        match s.vertices.len() {
            1 => {
                let v = s.vertices[0];
                vertex_birth[v] = s.birth;
                component[v] = (s.birth, v);
            }
            2 => {
                let (ru, rv) = (uf.find(s.vertices[0]), uf.find(s.vertices[1]));
                if ru == rv {
                    edge_column.insert(pos, positive_edges.len());
                    positive_edges.push(pos);
                    continue;
                }
                let (cu, cv) = (component[ru], component[rv]);
                let u_is_elder = cu.0 < cv.0 || (cu.0 == cv.0 && cu.1 < cv.1);
                let (elder, younger) = if u_is_elder { (cu, cv) } else { (cv, cu) };
                pairs.push(PersistencePair {
                    dim: 0,
                    birth: younger.0,
                    death: s.birth,
                });
                uf.union(ru, rv);
                let root = uf.find(ru);
                component[root] = elder;
            }
            _ => {}
        }
    }
    for v in 0..n_vertices {
        if uf.find(v) == v && !vertex_birth[v].is_nan() {
            pairs.push(PersistencePair {
                dim: 0,
                birth: component[v].0,
                death: f64::INFINITY,
            });
        }
    }
    if max_hom_dim >= 1 {
        pairs.extend(h1_pairs(complex, &positive_edges, &edge_column));
    }
    pairs
}

fn h1_pairs(
    complex: &FilteredComplex,
    positive_edges: &[usize],
    edge_column: &HashMap<usize, usize>,
) -> Vec<PersistencePair> {
    let simplices = complex.simplices();
    let mut killed = vec![false; positive_edges.len()];
    // pivot (position of the latest edge) -> reduced column
    let mut reduced: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut pairs = Vec::new();
    for (pos, s) in simplices.iter().enumerate() {
        if s.vertices.len() != 3 {
            continue;
        }
        let mut column = complex.boundary(pos);
        column.sort_unstable();
        while let Some(&pivot) = column.last() {
            match reduced.get(&pivot) {
                Some(other) => column = xor_sorted(&column, other),
                None => break,
            }
        }
        if let Some(&pivot) = column.last() {
            let idx = edge_column[&pivot];
            killed[idx] = true;
            pairs.push(PersistencePair {
                dim: 1,
                birth: simplices[pivot].birth,
                death: s.birth,
            });
            reduced.insert(pivot, column);
        }
    }
    for (idx, &pos) in positive_edges.iter().enumerate() {
        if !killed[idx] {
            pairs.push(PersistencePair {
                dim: 1,
                birth: simplices[pos].birth,
                death: f64::INFINITY,
            });
        }
    }
    pairs
}

fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
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
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Pairs of one homology dimension.
pub fn of_dim(pairs: &[PersistencePair], dim: usize) -> Vec<PersistencePair> {
    pairs.iter().copied().filter(|p| p.dim == dim).collect()
}

/// Bottleneck distance between two diagrams of the same homology dimension.
/// Finite points may match the diagonal at half their persistence; essential
/// classes only match essential classes, and a count mismatch gives infinity.
pub fn diagram_bottleneck(a: &[PersistencePair], b: &[PersistencePair]) -> Result<f64> {
    let dim = a.iter().chain(b).map(|p| p.dim).next();
    if let Some(dim) = dim {
        if a.iter().chain(b).any(|p| p.dim != dim) {
            return Err(Error::MixedDimensions);
        }
    }
    let (ess_a, fin_a): (Vec<&PersistencePair>, Vec<_>) = a.iter().partition(|p| p.is_essential());
    let (ess_b, fin_b): (Vec<&PersistencePair>, Vec<_>) = b.iter().partition(|p| p.is_essential());
    if ess_a.len() != ess_b.len() {
        return Ok(f64::INFINITY);
    }
    let mut births_a: Vec<f64> = ess_a.iter().map(|p| p.birth).collect();
    let mut births_b: Vec<f64> = ess_b.iter().map(|p| p.birth).collect();
    births_a.sort_by(f64::total_cmp);
    births_b.sort_by(f64::total_cmp);
    let essential = births_a
        .iter()
        .zip(&births_b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let (n, k) = (fin_a.len(), fin_b.len());
    let size = n + k;
    let half = |p: &PersistencePair| (p.death - p.birth) / 2.0;
    let costs: Vec<Vec<Option<f64>>> = (0..size)
        .map(|row| {
            (0..size)
                .map(|col| {
                    Some(match (row < n, col < k) {
                        (true, true) => {
                            let (p, q) = (fin_a[row], fin_b[col]);
                            (p.birth - q.birth).abs().max((p.death - q.death).abs())
                        }
                        (true, false) => half(fin_a[row]),
                        (false, true) => half(fin_b[col]),
                        (false, false) => 0.0,
                    })
                })
                .collect()
        })
        .collect();
    let finite: f64 = bottleneck_assignment(&costs)
        .and_then(|(c, _)| c)
        .unwrap_or(0.0);
    Ok(finite.max(essential))
}

/// `dim,birth,death` with `inf` for essential classes.
pub fn write_diagram_csv<W: Write>(pairs: &[PersistencePair], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["dim", "birth", "death"])?;
    for p in pairs {
        let death = if p.is_essential() {
            "inf".to_owned()
        } else {
            p.death.to_string()
        };
        writer.write_record([p.dim.to_string(), p.birth.to_string(), death])?;
    }
    writer.flush()?;
    Ok(())
}
