// Rips persistence of planar landmarks against the sampled Steinhaus nerve of
// their balls.

use cover_filtration::geometry::{compare_filtrations, MonteCarloConfig};
use cover_filtration::persistence::of_dim;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn main() -> cover_filtration::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let landmarks: Vec<Vec<f64>> = (0..16)
        .map(|i| {
            let angle = i as f64 * std::f64::consts::TAU / 16.0;
            let r = 0.3 + rng.random_range(-0.02..0.02);
            vec![0.35 + r * angle.cos(), 0.35 + r * angle.sin()]
        })
        .collect();

    let cmp = compare_filtrations(&landmarks, 0.5, &MonteCarloConfig::new(100_000, 11), 2)?;
    println!("{} landmarks, {} samples", landmarks.len(), cmp.samples);
    println!("edges: rips {}, steinhaus {}", cmp.rips_edges, cmp.steinhaus_edges);
    println!("max edge error {:.5} (3 std errors: {:.5})", cmp.max_edge_error, 3.0 * cmp.edge_error_bound);
    println!("bottleneck to rescaled rips: H0 {:.5}, H1 {:.5}", cmp.bottleneck_h0, cmp.bottleneck_h1);

    let loops = of_dim(&cmp.steinhaus, 1);
    for p in loops.iter().filter(|p| !p.is_zero_persistence()) {
        println!("steinhaus loop [{:.4}, {:.4})", p.birth, p.death);
    }
    Ok(())
}
