//! Random generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use cover_filtration::cover::{Cover, Fraction, Measure, MemberId};
use cover_filtration::nerve::FilteredComplex;
use cover_filtration::WeightedGraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp};

pub fn frac(n: i128, d: i128) -> Fraction {
    Fraction::new(n, d)
}

const WEIGHTS: [(i128, i128); 6] = [(1, 4), (1, 2), (1, 1), (2, 1), (3, 1), (5, 2)];

pub fn random_measure<R: Rng>(rng: &mut R, universe: u32) -> Measure {
    let weights = (0..universe)
        .map(|m| {
            let (n, d) = WEIGHTS[rng.random_range(0..WEIGHTS.len())];
            (m, frac(n, d))
        })
        .collect();
    Measure::weighted(weights).unwrap()
}

pub fn random_subset<R: Rng>(rng: &mut R, universe: u32, density: f64) -> Vec<MemberId> {
    let mut s: Vec<MemberId> = (0..universe).filter(|_| rng.random_bool(density)).collect();
    if s.is_empty() {
        s.push(rng.random_range(0..universe));
    }
    s
}

/// `k` nonempty elements over `0..universe`, counting or random weights.
pub fn random_cover<R: Rng>(rng: &mut R, k: usize, universe: u32, weighted: bool) -> Cover {
    let measure = if weighted {
        random_measure(rng, universe)
    } else {
        Measure::Counting
    };
    let density = rng.random_range(0.05..0.6);
    let elements = (0..k)
        .map(|i| (format!("e{i}"), random_subset(rng, universe, density)))
        .collect();
    Cover::new(measure, elements).unwrap()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn sym_diff_mass(a: &[MemberId], b: &[MemberId], measure: &Measure) -> Fraction {
    let only_a: Vec<MemberId> = a.iter().copied().filter(|x| !b.contains(x)).collect();
    let only_b: Vec<MemberId> = b.iter().copied().filter(|x| !a.contains(x)).collect();
    measure.mass(&only_a) + measure.mass(&only_b)
}

/// Minimum over all bijections of the largest matched symmetric difference.
pub fn brute_cover_bottleneck(u: &Cover, v: &Cover) -> Fraction {
    let measure = u.measure().merge(v.measure()).unwrap();
    permutations(u.len())
        .into_iter()
        .map(|perm| {
            perm.iter()
                .enumerate()
                .map(|(i, &j)| sym_diff_mass(u.element(i).members(), v.element(j).members(), &measure))
                .max()
                .unwrap_or_default()
        })
        .min()
        .unwrap_or_default()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, discrete: bool) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                let w = if discrete {
                    f64::from(rng.random_range(0..10u8)) / 10.0
                } else {
                    rng.random_range(0.0..1.0)
                };
                g.add_edge(u, v, w).unwrap();
            }
        }
    }
    g
}

/// `w × h` grid with right, down and down-right diagonal edges, weights
/// `1/(1 + X)` with `X ~ Exp(1)`.
pub fn triangulated_grid<R: Rng>(rng: &mut R, w: usize, h: usize) -> WeightedGraph {
    let exp = Exp::new(1.0).unwrap();
    let mut g = WeightedGraph::with_vertices(w * h);
    let id = |x: usize, y: usize| y * w + x;
    for y in 0..h {
        for x in 0..w {
            let mut link = |a: usize, b: usize, g: &mut WeightedGraph| {
                let weight = 1.0 / (1.0 + exp.sample(rng));
                g.add_edge(a, b, weight).unwrap();
            };
            if x + 1 < w {
                link(id(x, y), id(x + 1, y), &mut g);
            }
            if y + 1 < h {
                link(id(x, y), id(x, y + 1), &mut g);
            }
            if x + 1 < w && y + 1 < h {
                link(id(x, y), id(x + 1, y + 1), &mut g);
            }
        }
    }
    g
}

/// Pareto set of (hops, bottleneck) over every simple `s`–`t` path.
pub fn brute_pareto(g: &WeightedGraph, s: usize, t: usize) -> Vec<(usize, f64)> {
    fn dfs(
        g: &WeightedGraph,
        v: usize,
        t: usize,
        hops: usize,
        bottleneck: f64,
        seen: &mut [bool],
        best: &mut HashMap<usize, f64>,
    ) {
        if v == t {
            let e = best.entry(hops).or_insert(f64::INFINITY);
            *e = e.min(bottleneck);
            return;
        }
        for &(u, w) in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                dfs(g, u, t, hops + 1, bottleneck.max(w), seen, best);
                seen[u] = false;
            }
        }
    }
    let mut best = HashMap::new();
    let mut seen = vec![false; g.vertex_count()];
    seen[s] = true;
    dfs(g, s, t, 0, if s == t { 0.0 } else { f64::NEG_INFINITY }, &mut seen, &mut best);
    let mut by_hops: Vec<(usize, f64)> = best.into_iter().collect();
    by_hops.sort_by_key(|&(h, _)| h);
    let mut frontier = Vec::new();
    let mut floor = f64::INFINITY;
    for (h, b) in by_hops {
        if b < floor {
            frontier.push((h, b));
            floor = b;
        }
    }
    frontier
}

/// Standard left-to-right Z/2 reduction of the full boundary matrix with
/// dense columns. Returns sorted `(dim, birth, death)` triples for
/// dimensions 0 and 1, `inf` for essential classes.
pub fn naive_persistence(complex: &FilteredComplex) -> Vec<(usize, f64, f64)> {
    let simplices = complex.simplices();
    let n = simplices.len();
    let index: HashMap<&[usize], usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices.as_slice(), i))
        .collect();
    let mut columns: Vec<Vec<bool>> = simplices
        .iter()
        .map(|s| {
            let mut col = vec![false; n];
            if s.vertices.len() > 1 {
                for skip in 0..s.vertices.len() {
                    let face: Vec<usize> = s
                        .vertices
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    col[index[face.as_slice()]] = true;
                }
            }
            col
        })
        .collect();
    let low = |col: &[bool]| col.iter().rposition(|&b| b);
    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    for j in 0..n {
        while let Some(l) = low(&columns[j]) {
            match low_owner.get(&l) {
                Some(&i) => {
                    let other = columns[i].clone();
                    for (x, y) in columns[j].iter_mut().zip(other) {
                        *x ^= y;
                    }
                }
                None => {
                    low_owner.insert(l, j);
                    break;
                }
            }
        }
    }
    let mut out = Vec::new();
    for (&l, &j) in &low_owner {
        let dim = simplices[l].vertices.len() - 1;
        if dim <= 1 {
            out.push((dim, simplices[l].birth, simplices[j].birth));
        }
    }
    for i in 0..n {
        let dim = simplices[i].vertices.len() - 1;
        if dim <= 1 && low(&columns[i]).is_none() && !low_owner.contains_key(&i) {
            out.push((dim, simplices[i].birth, f64::INFINITY));
        }
    }
    sort_triples(&mut out);
    out
}

pub fn sort_triples(v: &mut [(usize, f64, f64)]) {
    v.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
}

pub fn shuffled<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Planar lens: intersection area of two radius-`r` discs `d` apart, and
/// the resulting Steinhaus distance.
pub fn lens_steinhaus(r: f64, d: f64) -> f64 {
    let lens = 2.0 * r * r * (d / (2.0 * r)).acos() - (d / 2.0) * (4.0 * r * r - d * d).sqrt();
    let disc = std::f64::consts::PI * r * r;
    1.0 - lens / (2.0 * disc - lens)
}
