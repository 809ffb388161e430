// Covers, measures and Steinhaus distances.

use cover_filtration::cover::fraction_to_f64;
use cover_filtration::cover_io::{format_fraction, read_cover_str};
use cover_filtration::{generalized_steinhaus, steinhaus_distance, Interner};

const COVER: &str = "\
# label<TAB>member[:weight],...
breakfast\teggs,toast,coffee:2
lunch\ttoast,soup,salad,coffee:2
dinner\tsoup,pasta:3/2,wine
";

pub fn main() -> cover_filtration::Result<()> {
    let mut interner = Interner::new();
    let cover = read_cover_str(COVER, &mut interner)?;
    println!("{} elements over {} members", cover.len(), cover.universe().len());

    let e = cover.elements();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let d = steinhaus_distance(&e[i], &e[j]);
            println!("d({}, {}) = {} ~ {:.4}", e[i].label(), e[j].label(), format_fraction(&d), fraction_to_f64(&d));
        }
    }

    let all: Vec<_> = e.iter().collect();
    let d = generalized_steinhaus(&all)?;
    println!("all three: {}", format_fraction(&d));
    Ok(())
}
