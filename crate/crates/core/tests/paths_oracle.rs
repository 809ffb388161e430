mod common;

use common::*;
use cover_filtration::paths::{
    fewest_hops_path, is_rho_stable, is_strictly_monotone, maximally_stable_path, pareto_frontier, path_instability,
    EdgeBound,
};
use cover_filtration::WeightedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instances(seed: u64, count: usize) -> Vec<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(2..=9);
            let p = rng.random_range(0.2..0.9);
            random_graph(&mut rng, n, p, i % 2 == 0)
        })
        .collect()
}

#[test]
fn frontier_equals_brute_force() {
    for (i, g) in random_instances(31, 400).iter().enumerate() {
        let t = g.vertex_count() - 1;
        let got: Vec<(usize, f64)> = pareto_frontier(g, 0, t).iter().map(|e| (e.hops, e.instability)).collect();
        assert_eq!(got, brute_pareto(g, 0, t), "graph {i}");
    }
}

#[test]
fn entries_are_stable_and_minimal_in_hops() {
    for g in random_instances(32, 200) {
        let t = g.vertex_count() - 1;
        for entry in pareto_frontier(&g, 0, t) {
            assert!(is_rho_stable(&g, &entry.path, entry.instability).unwrap());
            // no path with fewer hops is stable at this instability
            let fewer = fewest_hops_path(&g, 0, t, EdgeBound::AtMost(entry.instability)).unwrap();
            assert_eq!(fewer.hops, entry.hops);
        }
    }
}

#[test]
fn maximally_stable_is_last_frontier_entry() {
    for g in random_instances(33, 300) {
        let t = g.vertex_count() - 1;
        let frontier = pareto_frontier(&g, 0, t);
        match maximally_stable_path(&g, 0, t) {
            Ok(best) => {
                let last = frontier.last().unwrap();
                assert_eq!(best.instability, last.instability);
                assert_eq!(best.hops, last.hops);
                assert_eq!(path_instability(&g, &best.path).unwrap(), best.instability);
            }
            Err(_) => assert!(frontier.is_empty()),
        }
    }
}

#[test]
fn stability_is_nested() {
    let g = WeightedGraph::from_edges(4, [(0, 1, 0.3), (1, 2, 0.6), (2, 3, 0.1)]).unwrap();
    let path = [0, 1, 2, 3];
    for rho in [0.6, 0.61, 0.9] {
        assert!(is_rho_stable(&g, &path, rho).unwrap());
    }
    assert!(!is_rho_stable(&g, &path, 0.59).unwrap());
}

#[test]
fn grids_give_monotone_frontiers() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..50 {
        let (w, h) = (rng.random_range(3..=9), rng.random_range(3..=9));
        let g = triangulated_grid(&mut rng, w, h);
        let t = w * h - 1;
        let frontier = pareto_frontier(&g, 0, t);
        assert!(is_strictly_monotone(&frontier));
        assert_eq!(frontier[0].hops, w.max(h) - 1);
        assert_eq!(
            frontier.last().unwrap().instability,
            maximally_stable_path(&g, 0, t).unwrap().instability
        );
    }
}
