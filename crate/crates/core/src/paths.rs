//! Stable paths in the 1-skeleton of a cover filtration.
//!
//! A path is ρ-stable when its largest edge weight (its *instability*) is at
//! most ρ. The frontier search repeatedly takes a fewest-hops path, records
//! it under its hop count, and deletes every edge at least as unstable as
//! that path, until the endpoints disconnect.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::union_find::UnionFind;

/// Read access to an undirected weighted graph, possibly computed lazily.
pub trait PathGraph {
    fn vertex_count(&self) -> usize;
    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize, f64));
}

impl PathGraph for WeightedGraph {
    fn vertex_count(&self) -> usize {
        WeightedGraph::vertex_count(self)
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize, f64)) {
        for &(u, w) in self.neighbors(v) {
            f(u, w);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParetoEntry {
    pub path: Vec<usize>,
    pub hops: usize,
    pub instability: f64,
}

/// Which edges a search may use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeBound {
    Unbounded,
    /// weight < ρ
    Below(f64),
    /// weight ≤ ρ
    AtMost(f64),
}

impl EdgeBound {
    fn admits(self, w: f64) -> bool {
        match self {
            EdgeBound::Unbounded => true,
            EdgeBound::Below(r) => w < r,
            EdgeBound::AtMost(r) => w <= r,
        }
    }
}

/// Largest edge weight along `path`; 0 for a single vertex.
pub fn path_instability(g: &WeightedGraph, path: &[usize]) -> Result<f64> {
    if let Some(&v) = path.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::UnknownVertex(v));
    }
    path.windows(2).try_fold(0.0f64, |acc, pair| {
        g.weight(pair[0], pair[1])
            .map(|w| acc.max(w))
            .ok_or_else(|| Error::NotAPath(g.label(pair[0]).to_owned(), g.label(pair[1]).to_owned()))
    })
}

pub fn is_rho_stable(g: &WeightedGraph, path: &[usize], rho: f64) -> Result<bool> {
    Ok(path_instability(g, path)? <= rho)
}

/// Fewest-hops `s`–`t` path over admissible edges. Among those, the one with
/// the smallest instability, then the lexicographically smallest vertex
/// sequence.
pub fn fewest_hops_path<G: PathGraph + ?Sized>(
    g: &G,
    s: usize,
    t: usize,
    bound: EdgeBound,
) -> Option<ParetoEntry> {
    let n = g.vertex_count();
    if s >= n || t >= n {
        return None;
    }
    if s == t {
        return Some(ParetoEntry {
            path: vec![s],
            hops: 0,
            instability: 0.0,
        });
    }
    // BFS from t, stopping once the layer holding s is complete.
    let mut dist = vec![usize::MAX; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    dist[t] = 0;
    queue.push_back(t);
    while let Some(v) = queue.pop_front() {
        if dist[s] != usize::MAX && dist[v] >= dist[s] {
            break;
        }
        order.push(v);
        let next = dist[v] + 1;
        g.for_each_neighbor(v, &mut |u, w| {
            if dist[u] == usize::MAX && bound.admits(w) {
                dist[u] = next;
                queue.push_back(u);
            }
        });
    }
    if dist[s] == usize::MAX {
        return None;
    }
    order.push(s);

    // best[v]: smallest bottleneck of a shortest v–t path
    let mut best = vec![f64::INFINITY; n];
    best[t] = f64::NEG_INFINITY;
    for &v in order.iter().skip(1) {
        if dist[v] > dist[s] {
            continue;
        }
        let mut b = f64::INFINITY;
        g.for_each_neighbor(v, &mut |u, w| {
            if dist[u] != usize::MAX && dist[u] + 1 == dist[v] && bound.admits(w) {
                b = b.min(w.max(best[u]));
            }
        });
        best[v] = b;
    }

    let target = best[s];
    let mut path = vec![s];
    let mut cur = s;
    while cur != t {
        let mut pick = usize::MAX;
        g.for_each_neighbor(cur, &mut |u, w| {
            if u < pick
                && dist[u] != usize::MAX
                && dist[u] + 1 == dist[cur]
                && bound.admits(w)
                && w <= target
                && best[u] <= target
            {
                pick = u;
            }
        });
        debug_assert!(pick != usize::MAX);
        path.push(pick);
        cur = pick;
    }
    Some(ParetoEntry {
        hops: path.len() - 1,
        path,
        instability: target,
    })
}

/// Minimax `s`–`t` edge weight, by adding edges in increasing weight order
/// until `s` and `t` join.
pub fn minimax_value(g: &WeightedGraph, s: usize, t: usize) -> Option<f64> {
    if s == t {
        return Some(0.0);
    }
    let mut edges: Vec<_> = g.edges().to_vec();
    edges.sort_by(|a, b| a.weight.total_cmp(&b.weight));
    let mut uf = UnionFind::new(g.vertex_count());
    for e in edges {
        uf.union(e.u, e.v);
        if uf.find(s) == uf.find(t) {
            return Some(e.weight);
        }
    }
    None
}

/// Most stable `s`–`t` path, fewest hops among equally stable ones.
pub fn maximally_stable_path(g: &WeightedGraph, s: usize, t: usize) -> Result<ParetoEntry> {
    for v in [s, t] {
        if v >= g.vertex_count() {
            return Err(Error::UnknownVertex(v));
        }
    }
    let no_path = || Error::NoPath(g.label(s).to_owned(), g.label(t).to_owned());
    let rho = minimax_value(g, s, t).ok_or_else(no_path)?;
    fewest_hops_path(g, s, t, EdgeBound::AtMost(rho)).ok_or_else(no_path)
}

/// Hops/instability Pareto frontier between `s` and `t`, sorted by hops.
/// Empty when `s` and `t` are disconnected.
pub fn pareto_frontier<G: PathGraph + ?Sized>(g: &G, s: usize, t: usize) -> Vec<ParetoEntry> {
    let mut list: Vec<ParetoEntry> = Vec::new();
    let mut bound = EdgeBound::Unbounded;
    while let Some(entry) = fewest_hops_path(g, s, t, bound) {
        let rho = entry.instability;
        let trivial = entry.hops == 0;
        match list.iter_mut().find(|e| e.hops == entry.hops) {
            None => list.push(entry),
            Some(existing) if rho < existing.instability => *existing = entry,
            Some(_) => {}
        }
        if trivial {
            break;
        }
        // drop every edge with weight >= rho
        bound = EdgeBound::Below(rho);
    }
    list.sort_by_key(|e| e.hops);
    debug_assert!(is_strictly_monotone(&list));
    list
}

/// Hops strictly increase and instability strictly decreases.
pub fn is_strictly_monotone(frontier: &[ParetoEntry]) -> bool {
    frontier
        .windows(2)
        .all(|w| w[0].hops < w[1].hops && w[0].instability > w[1].instability)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        // s=0, a=1, t=2
        WeightedGraph::from_edges(3, [(0, 2, 0.95), (0, 1, 0.9), (1, 2, 0.9)]).unwrap()
    }

    #[test]
    fn rho_stability_is_inclusive() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 0.2), (1, 2, 0.5)]).unwrap();
        assert!(is_rho_stable(&g, &[0, 1, 2], 0.5).unwrap());
        assert!(!is_rho_stable(&g, &[0, 1, 2], 0.49).unwrap());
        assert!(is_rho_stable(&g, &[1], 0.0).unwrap());
        assert!(matches!(is_rho_stable(&g, &[0, 2], 1.0), Err(Error::NotAPath(..))));
    }

    #[test]
    fn maximally_stable_on_triangle() {
        let p = maximally_stable_path(&triangle(), 0, 2).unwrap();
        assert_eq!(p.path, vec![0, 1, 2]);
        assert_eq!(p.instability, 0.9);
    }

    #[test]
    fn maximally_stable_trivial_cases() {
        let p = maximally_stable_path(&triangle(), 1, 1).unwrap();
        assert_eq!((p.hops, p.instability), (0, 0.0));
        let g = WeightedGraph::from_edges(2, [(0, 1, 0.3)]).unwrap();
        let p = maximally_stable_path(&g, 0, 1).unwrap();
        assert_eq!((p.path, p.instability), (vec![0, 1], 0.3));
        let g = WeightedGraph::with_vertices(2);
        assert!(matches!(maximally_stable_path(&g, 0, 1), Err(Error::NoPath(..))));
    }

    #[test]
    fn frontier_on_triangle() {
        let f = pareto_frontier(&triangle(), 0, 2);
        let summary: Vec<(usize, f64)> = f.iter().map(|e| (e.hops, e.instability)).collect();
        assert_eq!(summary, vec![(1, 0.95), (2, 0.9)]);
    }

    #[test]
    fn frontier_single_entry_when_direct_edge_is_lightest() {
        let g = WeightedGraph::from_edges(3, [(0, 2, 0.1), (0, 1, 0.5), (1, 2, 0.6)]).unwrap();
        let f = pareto_frontier(&g, 0, 2);
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].hops, f[0].instability), (1, 0.1));
    }

    #[test]
    fn frontier_disconnected_is_empty() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 0.1), (2, 3, 0.1)]).unwrap();
        assert!(pareto_frontier(&g, 0, 3).is_empty());
    }

    #[test]
    fn equal_hop_ties_prefer_stable_then_lexicographic() {
        // two 2-hop routes 0-1-3 and 0-2-3, both with bottleneck 0.5
        let g = WeightedGraph::from_edges(4, [(0, 2, 0.5), (2, 3, 0.1), (0, 1, 0.1), (1, 3, 0.5)]).unwrap();
        let p = fewest_hops_path(&g, 0, 3, EdgeBound::Unbounded).unwrap();
        assert_eq!(p.path, vec![0, 1, 3]);
        // make the second route more stable
        let g = WeightedGraph::from_edges(4, [(0, 2, 0.4), (2, 3, 0.1), (0, 1, 0.1), (1, 3, 0.5)]).unwrap();
        let p = fewest_hops_path(&g, 0, 3, EdgeBound::Unbounded).unwrap();
        assert_eq!((p.path, p.instability), (vec![0, 2, 3], 0.4));
    }
}
