//! Steinhaus nerves and weighted clique-rank filtrations.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use num::Zero;
use rayon::prelude::*;

use crate::cover::{fraction_to_f64, intersect_sorted, union_sorted, Cover, Fraction, MemberId};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub const DEFAULT_MAX_DIM: usize = 2;
pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    /// Strictly increasing vertex indices.
    pub vertices: Vec<usize>,
    pub birth: f64,
    /// Exact birth when the complex came from a cover.
    pub exact: Option<Fraction>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Compares births exactly when both sides carry an exact value.
    pub fn cmp_birth(&self, other: &Simplex) -> Ordering {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a.cmp(b),
            _ => self.birth.total_cmp(&other.birth),
        }
    }

    /// Filtration order: birth, then dimension, then vertex list.
    pub fn filtration_cmp(&self, other: &Simplex) -> Ordering {
        self.cmp_birth(other)
            .then(self.vertices.len().cmp(&other.vertices.len()))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }

    /// Codimension-one faces.
    pub fn facets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let k = self.vertices.len();
        (0..if k > 1 { k } else { 0 }).map(move |skip| {
            self.vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect()
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiltrationViolation {
    MissingFace { simplex: Vec<usize>, face: Vec<usize> },
    FaceBornLater { simplex: Vec<usize>, face: Vec<usize> },
    FaceOrderedAfter { simplex: Vec<usize>, face: Vec<usize> },
    NotSorted { position: usize },
}

/// Simplices stored in filtration order.
#[derive(Clone, Debug, Default)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Vec<usize>, usize>,
    labels: Vec<String>,
}

impl FilteredComplex {
    /// Sorts `simplices` into filtration order. `labels` names the vertices.
    pub fn new(mut simplices: Vec<Simplex>, labels: Vec<String>) -> Self {
        simplices.sort_by(Simplex::filtration_cmp);
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.vertices.clone(), i))
            .collect();
        Self {
            simplices,
            index,
            labels,
        }
    }

    /// Keeps the given order. Used to check externally ordered input.
    pub fn from_ordered(simplices: Vec<Simplex>, labels: Vec<String>) -> Self {
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.vertices.clone(), i))
            .collect();
        Self {
            simplices,
            index,
            labels,
        }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.simplices.iter().filter(|s| s.vertices.len() == 1).count()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    pub fn count_of_dim(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == dim).count()
    }

    pub fn position(&self, vertices: &[usize]) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    pub fn get(&self, vertices: &[usize]) -> Option<&Simplex> {
        self.position(vertices).map(|i| &self.simplices[i])
    }

    /// Simplices born at or before `alpha`.
    pub fn sublevel(&self, alpha: f64) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |s| s.birth <= alpha)
    }

    /// Positions of the facets of the simplex at `pos`.
    pub fn boundary(&self, pos: usize) -> Vec<usize> {
        self.simplices[pos]
            .facets()
            .filter_map(|f| self.position(&f))
            .collect()
    }

    /// Checks closure under faces, face births, and faces-before-cofaces.
    pub fn validate(&self) -> Vec<FiltrationViolation> {
        let mut violations = Vec::new();
        for (pos, window) in self.simplices.windows(2).enumerate() {
            if window[0].cmp_birth(&window[1]) == Ordering::Greater {
                violations.push(FiltrationViolation::NotSorted { position: pos + 1 });
            }
        }
        for (pos, s) in self.simplices.iter().enumerate() {
            for face in s.facets() {
                match self.position(&face) {
                    None => violations.push(FiltrationViolation::MissingFace {
                        simplex: s.vertices.clone(),
                        face,
                    }),
                    Some(fpos) => {
                        if self.simplices[fpos].cmp_birth(s) == Ordering::Greater {
                            violations.push(FiltrationViolation::FaceBornLater {
                                simplex: s.vertices.clone(),
                                face: face.clone(),
                            });
                        }
                        if fpos > pos {
                            violations.push(FiltrationViolation::FaceOrderedAfter {
                                simplex: s.vertices.clone(),
                                face,
                            });
                        }
                    }
                }
            }
        }
        violations
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NerveOptions {
    pub max_dim: usize,
    /// Abort once the estimated simplex count exceeds this.
    pub budget: usize,
}

impl Default for NerveOptions {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl NerveOptions {
    pub fn with_max_dim(max_dim: usize) -> Self {
        Self {
            max_dim,
            ..Self::default()
        }
    }
}

struct Node {
    vertices: Vec<usize>,
    inter: Vec<MemberId>,
    // only kept while the node may still be extended
    union: Vec<MemberId>,
    union_mass: Fraction,
    birth: Fraction,
}

/// Steinhaus nerve of `cover` up to `opts.max_dim`, with exact births.
///
/// A `(k+1)`-simplex is only tried when all of its `k`-faces exist, and only
/// with elements that share a member with the cached intersection of its
/// parent.
pub fn build_steinhaus_nerve(cover: &Cover, opts: &NerveOptions) -> Result<FilteredComplex> {
    let n = cover.len();
    let measure = cover.measure();
    let mut member_index: HashMap<MemberId, Vec<usize>> = HashMap::new();
    for (i, e) in cover.elements().iter().enumerate() {
        for &m in e.members() {
            member_index.entry(m).or_default().push(i);
        }
    }

    let mut level: Vec<Node> = cover
        .elements()
        .iter()
        .enumerate()
        .map(|(i, e)| Node {
            vertices: vec![i],
            inter: e.members().to_vec(),
            union: Vec::new(),
            union_mass: e.measure(),
            birth: Fraction::zero(),
        })
        .collect();
    let mut total = n;
    check_budget(total, opts.budget)?;
    let mut simplices: Vec<Simplex> = Vec::new();

    for dim in 1..=opts.max_dim {
        if level.is_empty() {
            break;
        }
        let existing: HashSet<&[usize]> = level.iter().map(|n| n.vertices.as_slice()).collect();
        let candidates: Vec<Vec<usize>> = level
            .par_iter()
            .map(|node| {
                let last = *node.vertices.last().expect("nonempty simplex");
                let mut cands: Vec<usize> = node
                    .inter
                    .iter()
                    .flat_map(|m| member_index[m].iter().copied())
                    .filter(|&w| w > last)
                    .collect();
                cands.sort_unstable();
                cands.dedup();
                cands.retain(|&w| {
                    dim == 1
                        || (0..node.vertices.len()).all(|skip| {
                            let mut face: Vec<usize> = node
                                .vertices
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &v)| v)
                                .collect();
                            face.push(w);
                            existing.contains(face.as_slice())
                        })
                });
                cands
            })
            .collect();
        let estimated = total + candidates.iter().map(Vec::len).sum::<usize>();
        check_budget(estimated, opts.budget)?;

        let keep_union = dim < opts.max_dim;
        let next: Vec<Node> = level
            .par_iter()
            .zip(candidates.par_iter())
            .flat_map_iter(|(node, cands)| {
                cands.iter().map(move |&w| {
                    let element = cover.element(w);
                    let inter = intersect_sorted(&node.inter, element.members());
                    let inter_mass = measure.mass(&inter);
                    let (union, union_mass) = if node.vertices.len() == 1 {
                        let u_mass = node.union_mass + element.measure() - inter_mass;
                        let union = if keep_union {
                            union_sorted(&node.inter, element.members())
                        } else {
                            Vec::new()
                        };
                        (union, u_mass)
                    } else {
                        let union = union_sorted(&node.union, element.members());
                        let mass = measure.mass(&union);
                        (if keep_union { union } else { Vec::new() }, mass)
                    };
                    let mut vertices = node.vertices.clone();
                    vertices.push(w);
                    Node {
                        vertices,
                        inter,
                        union,
                        union_mass,
                        birth: Fraction::from_integer(1) - inter_mass / union_mass,
                    }
                })
            })
            .collect();
        total += next.len();
        let finished = std::mem::replace(&mut level, next);
        simplices.extend(finished.into_iter().map(node_to_simplex));
    }
    simplices.extend(level.into_iter().map(node_to_simplex));
    let labels = cover.labels().map(str::to_owned).collect();
    Ok(FilteredComplex::new(simplices, labels))
}

fn node_to_simplex(node: Node) -> Simplex {
    Simplex {
        birth: fraction_to_f64(&node.birth),
        exact: Some(node.birth),
        vertices: node.vertices,
    }
}

fn check_budget(estimated: usize, budget: usize) -> Result<()> {
    if estimated > budget {
        log::warn!("nerve needs an estimated {estimated} simplices, over the budget of {budget}");
        return Err(Error::NerveBudgetExceeded { estimated, budget });
    }
    Ok(())
}

/// Every clique of at most `max_dim + 1` vertices, born at its largest edge
/// weight. Vertices are born at 0.
pub fn build_clique_rank_filtration(graph: &WeightedGraph, max_dim: usize) -> FilteredComplex {
    let n = graph.vertex_count();
    let mut simplices: Vec<Simplex> = (0..n)
        .map(|v| Simplex {
            vertices: vec![v],
            birth: 0.0,
            exact: None,
        })
        .collect();
    // (clique, birth, common higher neighbors)
    let mut frontier: Vec<(Vec<usize>, f64, Vec<usize>)> = (0..n)
        .map(|v| {
            let higher = graph
                .neighbors(v)
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| u > v)
                .collect();
            (vec![v], 0.0, higher)
        })
        .collect();
    for _ in 1..=max_dim {
        let mut next = Vec::new();
        for (clique, birth, common) in &frontier {
            for (ci, &w) in common.iter().enumerate() {
                let new_birth = clique
                    .iter()
                    .map(|&u| graph.weight(u, w).expect("common neighbor"))
                    .fold(*birth, f64::max);
                let rest: Vec<usize> = common[ci + 1..]
                    .iter()
                    .copied()
                    .filter(|&x| graph.weight(w, x).is_some())
                    .collect();
                let mut vertices = clique.clone();
                vertices.push(w);
                simplices.push(Simplex {
                    vertices: vertices.clone(),
                    birth: new_birth,
                    exact: None,
                });
                next.push((vertices, new_birth, rest));
            }
        }
        frontier = next;
    }
    FilteredComplex::new(simplices, graph.labels().to_vec())
}

/// Vertices and edges of `complex`, edge births as weights.
pub fn one_skeleton(complex: &FilteredComplex) -> WeightedGraph {
    let n = complex
        .simplices()
        .iter()
        .flat_map(|s| s.vertices.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let labels = if complex.labels().len() >= n {
        complex.labels().to_vec()
    } else {
        (0..n).map(|i| i.to_string()).collect()
    };
    let mut graph = WeightedGraph::new(labels);
    for s in complex.simplices().iter().filter(|s| s.vertices.len() == 2) {
        graph
            .add_edge(s.vertices[0], s.vertices[1], s.birth)
            .expect("complex edges are distinct and weights finite");
    }
    graph
}

/// One line per simplex in filtration order: `dim<TAB>v0,v1,...<TAB>birth`.
pub fn write_complex<W: Write>(complex: &FilteredComplex, mut out: W) -> Result<()> {
    for s in complex.simplices() {
        let vertices: Vec<String> = s.vertices.iter().map(usize::to_string).collect();
        writeln!(out, "{}\t{}\t{}", s.dim(), vertices.join(","), s.birth)?;
    }
    Ok(())
}

/// Reads the export format back, keeping the file's order.
pub fn read_complex<R: BufRead>(reader: R) -> Result<FilteredComplex> {
    let mut simplices = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [dim, verts, birth] = fields.as_slice() else {
            return Err(Error::parse(line_no, "expected `dim<TAB>vertices<TAB>birth`"));
        };
        let dim: usize = dim
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad dimension `{dim}`")))?;
        let vertices = verts
            .split(',')
            .map(|v| v.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(line_no, format!("bad vertex list `{verts}`")))?;
        if vertices.len() != dim + 1 || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(line_no, "vertex list must be strictly increasing with dim+1 entries"));
        }
        let birth: f64 = birth
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad birth `{birth}`")))?;
        simplices.push(Simplex {
            vertices,
            birth,
            exact: None,
        });
    }
    let n = simplices
        .iter()
        .flat_map(|s| s.vertices.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    Ok(FilteredComplex::from_ordered(
        simplices,
        (0..n).map(|i| i.to_string()).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i128, d: i128) -> Fraction {
        Fraction::new(n, d)
    }

    #[test]
    fn two_element_nerve() {
        let cover = Cover::counting([vec![1, 2], vec![2, 3]]).unwrap();
        let k = build_steinhaus_nerve(&cover, &NerveOptions::with_max_dim(1)).unwrap();
        assert_eq!(k.len(), 3);
        assert_eq!(k.get(&[0]).unwrap().birth, 0.0);
        assert_eq!(k.get(&[1]).unwrap().birth, 0.0);
        assert_eq!(k.get(&[0, 1]).unwrap().exact, Some(frac(2, 3)));
    }

    #[test]
    fn singleton_cover() {
        let cover = Cover::counting([vec![7]]).unwrap();
        let k = build_steinhaus_nerve(&cover, &NerveOptions::default()).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k.simplices()[0].birth, 0.0);
    }

    #[test]
    fn disjoint_cover_has_no_edges() {
        let cover = Cover::counting([vec![1], vec![2], vec![3]]).unwrap();
        let k = build_steinhaus_nerve(&cover, &NerveOptions::default()).unwrap();
        assert_eq!(k.len(), 3);
        assert_eq!(k.count_of_dim(1), 0);
    }

    #[test]
    fn triple_intersection_birth() {
        let cover = Cover::counting([vec![1, 2], vec![2, 3], vec![2, 4]]).unwrap();
        let k = build_steinhaus_nerve(&cover, &NerveOptions::default()).unwrap();
        assert_eq!(k.get(&[0, 1, 2]).unwrap().exact, Some(frac(3, 4)));
        assert!(k.validate().is_empty());
    }

    #[test]
    fn budget_exceeded() {
        let cover = Cover::counting((0..6).map(|_| vec![1, 2, 3])).unwrap();
        let opts = NerveOptions {
            max_dim: 3,
            budget: 10,
        };
        let err = build_steinhaus_nerve(&cover, &opts).unwrap_err();
        assert!(matches!(err, Error::NerveBudgetExceeded { .. }));
    }

    #[test]
    fn clique_rank_max_of_edges() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 0.2), (1, 2, 0.3), (0, 2, 0.4)]).unwrap();
        let k = build_clique_rank_filtration(&g, 2);
        assert_eq!(k.get(&[0, 1, 2]).unwrap().birth, 0.4);
        assert!(k.validate().is_empty());
    }

    #[test]
    fn clique_rank_edgeless() {
        let k = build_clique_rank_filtration(&WeightedGraph::with_vertices(4), 2);
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn clique_rank_respects_dimension_cap() {
        let edges = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v, 0.5)));
        let g = WeightedGraph::from_edges(4, edges).unwrap();
        let k = build_clique_rank_filtration(&g, 2);
        assert_eq!(k.count_of_dim(2), 4);
        assert_eq!(k.count_of_dim(3), 0);
        assert!(k.simplices().iter().filter(|s| s.dim() == 2).all(|s| s.birth == 0.5));
    }

    #[test]
    fn skeleton_of_small_complexes() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 0.1), (1, 2, 0.2)]).unwrap();
        let sk = one_skeleton(&build_clique_rank_filtration(&g, 2));
        assert_eq!((sk.vertex_count(), sk.edge_count()), (3, 2));

        let sk = one_skeleton(&build_clique_rank_filtration(&WeightedGraph::with_vertices(2), 1));
        assert_eq!((sk.vertex_count(), sk.edge_count()), (2, 0));

        let g = WeightedGraph::from_edges(3, [(0, 1, 0.1), (1, 2, 0.2), (0, 2, 0.3)]).unwrap();
        let sk = one_skeleton(&build_clique_rank_filtration(&g, 2));
        assert_eq!(sk.edge_count(), 3);
    }

    #[test]
    fn complex_export_round_trip() {
        let cover = Cover::counting([vec![1, 2, 3], vec![2, 3], vec![3, 4]]).unwrap();
        let k = build_steinhaus_nerve(&cover, &NerveOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_complex(&k, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("0\t0\t0\n"));
        let back = read_complex(buf.as_slice()).unwrap();
        assert_eq!(back.len(), k.len());
        for (a, b) in back.simplices().iter().zip(k.simplices()) {
            assert_eq!(a.vertices, b.vertices);
            assert_eq!(a.birth, b.birth);
        }
        assert!(back.validate().is_empty());
    }

    #[test]
    fn validate_flags_bad_order() {
        let simplices = vec![
            Simplex { vertices: vec![0, 1], birth: 0.5, exact: None },
            Simplex { vertices: vec![0], birth: 0.0, exact: None },
            Simplex { vertices: vec![1], birth: 0.7, exact: None },
        ];
        let k = FilteredComplex::from_ordered(simplices, vec![]);
        let v = k.validate();
        assert!(v.iter().any(|x| matches!(x, FiltrationViolation::FaceBornLater { .. })));
        assert!(v.iter().any(|x| matches!(x, FiltrationViolation::FaceOrderedAfter { .. })));
    }
}
