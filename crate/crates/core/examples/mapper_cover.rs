// Nerve of a Mapper-style cover of a circle, before and after one overlap is
// removed.

use cover_filtration::ingest::export_mapper_cover;
use cover_filtration::persistence::{of_dim, persistence_diagram};
use cover_filtration::NerveOptions;

fn describe(name: &str, text: &str) -> cover_filtration::Result<()> {
    let complex = export_mapper_cover(text.as_bytes(), &NerveOptions::default())?;
    let labels = complex.labels();
    println!("{name}:");
    for s in complex.simplices().iter().filter(|s| s.dim() == 1) {
        println!("  {} - {} at {:.4}", labels[s.vertices[0]], labels[s.vertices[1]], s.birth);
    }
    let diagram = persistence_diagram(&complex, 1);
    let loops = of_dim(&diagram, 1).into_iter().filter(|p| p.is_essential()).count();
    println!("  essential loops: {loops}");
    Ok(())
}

pub fn main() -> cover_filtration::Result<()> {
    describe("circle", "A\t0,1,2\nB\t2,3\nC\t3,4,5\nD\t5,6,0\n")?;
    describe("cut", "A\t0,1\nB\t2,3\nC\t3,4,5\nD\t5,6,0\n")?;
    Ok(())
}
