// Bottleneck distance between covers and the resulting shift of nerve births.

use cover_filtration::cover_io::format_fraction;
use cover_filtration::metrics::{certify_interleaving, cover_bottleneck};
use cover_filtration::Cover;

pub fn main() -> cover_filtration::Result<()> {
    let u = Cover::counting([vec![1, 2, 3, 4, 5], vec![4, 5, 6, 7], vec![7, 8, 9, 1]])?;
    let v = Cover::counting([vec![7, 8, 9, 1], vec![1, 2, 3, 4], vec![4, 5, 6, 7, 8]])?;

    let (d, matching) = cover_bottleneck(&u, &v)?;
    println!("bottleneck distance {}", format_fraction(&d));
    for (i, j) in &matching.pairs {
        println!("  {} -> {}", u.element(*i).label(), v.element(*j).label());
    }

    let report = certify_interleaving(&u, &v, 2)?;
    println!(
        "largest birth shift {} against alpha/m = {}: {}",
        format_fraction(&report.max_birth_shift),
        format_fraction(&report.bound),
        if report.satisfied { "within" } else { "exceeded" }
    );

    // two copies of one set, each losing a different member
    let a: Vec<u32> = (0..6).collect();
    let twin = Cover::counting([a.clone(), a.clone()])?;
    let split = Cover::counting([a[1..].to_vec(), a[..5].to_vec()])?;
    let report = certify_interleaving(&twin, &split, 1)?;
    println!(
        "duplicated element: shift {} against alpha/m = {}: {}",
        format_fraction(&report.max_birth_shift),
        format_fraction(&report.bound),
        if report.satisfied { "within" } else { "exceeded" }
    );
    Ok(())
}
