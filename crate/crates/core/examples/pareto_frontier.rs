// Hops against instability on a triangulated grid with random weights.

use cover_filtration::paths::{is_strictly_monotone, maximally_stable_path, pareto_frontier};
use cover_filtration::WeightedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(w: usize, h: usize, seed: u64) -> cover_filtration::Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::with_vertices(w * h);
    let id = |x: usize, y: usize| y * w + x;
    for y in 0..h {
        for x in 0..w {
            for (dx, dy) in [(1, 0), (0, 1), (1, 1)] {
                if x + dx < w && y + dy < h {
                    g.add_edge(id(x, y), id(x + dx, y + dy), rng.random_range(0.0..1.0))?;
                }
            }
        }
    }
    Ok(g)
}

pub fn main() -> cover_filtration::Result<()> {
    let (w, h) = (12, 8);
    let g = grid(w, h, 7)?;
    let (s, t) = (0, w * h - 1);

    let frontier = pareto_frontier(&g, s, t);
    println!(" hops  instability");
    for entry in &frontier {
        println!("{:>5}  {:.4}", entry.hops, entry.instability);
    }
    assert!(is_strictly_monotone(&frontier));

    let best = maximally_stable_path(&g, s, t)?;
    println!("most stable path: {} hops, instability {:.4}", best.hops, best.instability);
    println!("  {:?}", best.path);
    Ok(())
}
