// Stable paths between items of a ratings table. The synthetic table has
// three user communities and one bridge item between each neighboring pair.

use cover_filtration::ingest::{run_query, shared_members, synthetic_ratings, QueryMode, SyntheticConfig, ToolConfig};
use cover_filtration::ingest::ingest_ratings;

pub fn main() -> cover_filtration::Result<()> {
    let data = synthetic_ratings(&SyntheticConfig { seed: 2, ..Default::default() });
    let cover = ingest_ratings(data.csv.as_bytes(), &ToolConfig::default())?;
    println!("{} items, {} raters", cover.len(), cover.universe().len());

    let (from, to) = (data.genre_item(0), data.genre_item(2));
    for path in run_query(&cover, &from, &to, QueryMode::Frontier)? {
        let marked: Vec<String> = path
            .path
            .iter()
            .map(|l| if data.is_bridge(l) { format!("[{l}]") } else { l.clone() })
            .collect();
        println!("{} hops, instability {:.4}: {}", path.hops, path.instability, marked.join(" > "));
    }

    for &(id, a, b) in &data.bridges {
        let bridge = cover.index_of(&id.to_string()).expect("bridge survives filtering");
        let left = cover.index_of(&data.genre_item(a)).expect("genre item");
        let right = cover.index_of(&data.genre_item(b)).expect("genre item");
        println!(
            "bridge {id}: {} raters shared with genre {a}, {} with genre {b}",
            shared_members(&cover, bridge, left),
            shared_members(&cover, bridge, right)
        );
    }
    Ok(())
}
