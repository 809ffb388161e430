//! Undirected weighted graphs (the 1-skeleton of a filtration).

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Simple undirected graph with labeled vertices and nonnegative weights.
#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    labels: Vec<String>,
    adjacency: Vec<Vec<(usize, f64)>>,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            adjacency: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    /// Vertices labeled `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut g = Self::with_vertices(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.adjacency.push(Vec::new());
        self.labels.len() - 1
    }

    /// Rejects self-loops, duplicate edges, and weights that are negative or
    /// not finite.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<()> {
        let n = self.labels.len();
        if u >= n {
            return Err(Error::UnknownVertex(u));
        }
        if v >= n {
            return Err(Error::UnknownVertex(v));
        }
        if u == v {
            return Err(Error::InvalidGeometry(format!("self-loop at vertex {u}")));
        }
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidGeometry(format!("edge weight {weight} must be finite and nonnegative")));
        }
        if self.weight(u, v).is_some() {
            return Err(Error::InvalidGeometry(format!("duplicate edge {u}-{v}")));
        }
        let pos = self.adjacency[u].partition_point(|&(x, _)| x < v);
        self.adjacency[u].insert(pos, (v, weight));
        let pos = self.adjacency[v].partition_point(|&(x, _)| x < u);
        self.adjacency[v].insert(pos, (u, weight));
        let (u, v) = (u.min(v), u.max(v));
        self.edges.push(Edge { u, v, weight });
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Neighbors of `v` sorted by index.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let adj = self.adjacency.get(u)?;
        adj.binary_search_by_key(&v, |&(x, _)| x).ok().map(|i| adj[i].1)
    }
}

/// Read `u<TAB>v<TAB>weight` edge lines; a line holding a single label
/// declares an isolated vertex. Weights must lie in `[0, 1)`.
pub fn read_graph<R: BufRead>(reader: R) -> Result<WeightedGraph> {
    let mut graph = WeightedGraph::default();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut vertex = |graph: &mut WeightedGraph, label: &str| -> usize {
        *ids.entry(label.to_owned())
            .or_insert_with(|| graph.add_vertex(label))
    };
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        match fields.as_slice() {
            [label] => {
                vertex(&mut graph, label);
            }
            [u, v, w] => {
                let weight: f64 = w
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad weight `{w}`")))?;
                if !(0.0..1.0).contains(&weight) {
                    return Err(Error::parse(line_no, format!("weight {weight} outside [0, 1)")));
                }
                let (u, v) = (vertex(&mut graph, u), vertex(&mut graph, v));
                graph
                    .add_edge(u, v, weight)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
            }
            _ => return Err(Error::parse(line_no, "expected `u<TAB>v<TAB>weight` or `label`")),
        }
    }
    Ok(graph)
}

pub fn write_graph<W: Write>(graph: &WeightedGraph, mut out: W) -> Result<()> {
    for (v, adj) in graph.adjacency.iter().enumerate() {
        if adj.is_empty() {
            writeln!(out, "{}", graph.labels[v])?;
        }
    }
    for e in &graph.edges {
        writeln!(out, "{}\t{}\t{}", graph.labels[e.u], graph.labels[e.v], e.weight)?;
    }
    Ok(())
}
