// Persistence diagrams of two nearby clique-rank filtrations.

use cover_filtration::persistence::{diagram_bottleneck, of_dim, persistence_diagram};
use cover_filtration::{build_clique_rank_filtration, WeightedGraph};

// a ring coned off by a hub vertex, so the loop fills in at the spoke weight
fn wheel(n: usize, jitter: f64) -> cover_filtration::Result<WeightedGraph> {
    let mut g = WeightedGraph::with_vertices(n + 1);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n, 0.1 + jitter * (i % 3) as f64)?;
        g.add_edge(i, n, 0.8 - jitter)?;
    }
    Ok(g)
}

pub fn main() -> cover_filtration::Result<()> {
    let a = persistence_diagram(&build_clique_rank_filtration(&wheel(8, 0.0)?, 2), 1);
    let b = persistence_diagram(&build_clique_rank_filtration(&wheel(8, 0.05)?, 2), 1);
    for p in a.iter().filter(|p| !p.is_zero_persistence()) {
        let death = if p.is_essential() { "inf".to_owned() } else { format!("{:.3}", p.death) };
        println!("H{} [{:.3}, {death})", p.dim, p.birth);
    }
    for dim in 0..=1 {
        let d = diagram_bottleneck(&of_dim(&a, dim), &of_dim(&b, dim))?;
        println!("H{dim} bottleneck distance {d:.4}");
    }
    Ok(())
}
