// Steinhaus nerve of a small cover next to its clique-rank filtration.

use cover_filtration::{build_clique_rank_filtration, build_steinhaus_nerve, one_skeleton, Cover, NerveOptions};

pub fn main() -> cover_filtration::Result<()> {
    let cover = Cover::counting([
        vec![1, 2, 3, 4],
        vec![3, 4, 5, 6],
        vec![4, 6, 7, 8],
        vec![1, 4, 8, 9],
    ])?;
    let nerve = build_steinhaus_nerve(&cover, &NerveOptions::with_max_dim(3))?;
    println!("nerve: {} simplices", nerve.len());
    for s in nerve.simplices() {
        println!("  dim {} {:?} born at {:.4}", s.dim(), s.vertices, s.birth);
    }

    // same edges, but higher simplices appear as soon as their edges do
    let clique = build_clique_rank_filtration(&one_skeleton(&nerve), 3);
    for s in nerve.simplices().iter().filter(|s| s.dim() >= 2) {
        let c = clique.get(&s.vertices).expect("nerve simplices are cliques");
        println!("  {:?}: steinhaus {:.4}, clique-rank {:.4}", s.vertices, s.birth, c.birth);
    }
    Ok(())
}
