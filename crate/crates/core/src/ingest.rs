//! Ratings data to covers, stable-path queries on them, and a synthetic
//! ratings generator with planted bridge items.
//!
//! Each item becomes a cover element holding the users who rated it. Rating
//! values are ignored; any rating counts as membership.

use std::cell::RefCell;
use std::collections::HashMap;
use std::io::{BufRead, Read};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cover::{fraction_to_f64, intersect_sorted, steinhaus_distance, Cover, Interner, Measure, MemberId};
use crate::cover_io::read_cover;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::nerve::{build_steinhaus_nerve, one_skeleton, FilteredComplex, NerveOptions};
use crate::paths::{fewest_hops_path, pareto_frontier, EdgeBound, ParetoEntry, PathGraph};

#[derive(Clone, Debug)]
pub struct ToolConfig {
    /// Items with fewer ratings are dropped.
    pub min_ratings: usize,
    pub max_dim: usize,
    pub budget: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Default for ToolConfig {
    fn default() -> Self {
        let nerve = NerveOptions::default();
        Self {
            min_ratings: 10,
            max_dim: nerve.max_dim,
            budget: nerve.budget,
            seed: 0,
            output: None,
        }
    }
}

impl ToolConfig {
    pub fn nerve_options(&self) -> NerveOptions {
        NerveOptions {
            max_dim: self.max_dim,
            budget: self.budget,
        }
    }
}

/// Item memberships from a ratings file, items in first-appearance order.
#[derive(Clone, Debug, Default)]
pub struct RatingsTable {
    users: Interner,
    item_ids: Vec<u64>,
    item_index: HashMap<u64, usize>,
    raters: Vec<Vec<MemberId>>,
    titles: HashMap<u64, String>,
    rows: usize,
}

impl RatingsTable {
    /// Reads `userId,movieId,rating,timestamp` or `user,item` CSV with a
    /// header row.
    pub fn read<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = csv.headers()?.clone();
        let find = |names: &[&str]| headers.iter().position(|h| names.contains(&h));
        let (user_col, item_col) = match (find(&["userId", "user"]), find(&["movieId", "item"])) {
            (Some(u), Some(i)) => (u, i),
            _ => {
                return Err(Error::parse(
                    1,
                    "expected header `userId,movieId,rating,timestamp` or `user,item`",
                ))
            }
        };
        let rating_col = find(&["rating"]);

        let mut table = RatingsTable::default();
        for record in csv.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let field = |col: usize, name: &str| {
                record
                    .get(col)
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| Error::parse(line, format!("missing {name}")))
            };
            let user = field(user_col, "user id")?;
            user.parse::<u64>()
                .map_err(|_| Error::parse(line, format!("user id `{user}` is not a nonnegative integer")))?;
            let item_text = field(item_col, "item id")?;
            let item = item_text
                .parse::<u64>()
                .map_err(|_| Error::parse(line, format!("item id `{item_text}` is not a nonnegative integer")))?;
            if let Some(col) = rating_col {
                let rating = field(col, "rating")?;
                rating
                    .parse::<f64>()
                    .map_err(|_| Error::parse(line, format!("rating `{rating}` is not a number")))?;
            }
            let user = table.users.intern(user);
            let idx = *table.item_index.entry(item).or_insert_with(|| {
                table.item_ids.push(item);
                table.raters.push(Vec::new());
                table.item_ids.len() - 1
            });
            table.raters[idx].push(user);
            table.rows += 1;
        }
        for r in &mut table.raters {
            r.sort_unstable();
            r.dedup();
        }
        Ok(table)
    }

    /// Reads `movieId,title,...` and uses the titles as element labels.
    pub fn attach_titles<R: Read>(&mut self, reader: R) -> Result<()> {
        let mut csv = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
        for record in csv.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let (Some(id), Some(title)) = (record.get(0), record.get(1)) else {
                return Err(Error::parse(line, "expected `movieId,title`"));
            };
            let id = id
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(line, format!("item id `{id}` is not a nonnegative integer")))?;
            self.titles.insert(id, title.to_owned());
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn item_count(&self) -> usize {
        self.item_ids.len()
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    /// Rating count of every item, in first-appearance order.
    pub fn rating_counts(&self) -> Vec<(u64, usize)> {
        self.item_ids.iter().zip(&self.raters).map(|(&id, r)| (id, r.len())).collect()
    }

    fn label(&self, item: u64) -> String {
        self.titles.get(&item).cloned().unwrap_or_else(|| item.to_string())
    }

    /// Counting-measure cover of the items with at least `min_ratings`
    /// distinct raters.
    pub fn to_cover(&self, min_ratings: usize) -> Result<Cover> {
        let mut used: HashMap<String, usize> = HashMap::new();
        let mut elements = Vec::new();
        for (&item, raters) in self.item_ids.iter().zip(&self.raters) {
            if raters.len() < min_ratings.max(1) {
                continue;
            }
            let mut label = self.label(item);
            let seen = used.entry(label.clone()).or_insert(0);
            *seen += 1;
            if *seen > 1 {
                label = format!("{label} [{item}]");
            }
            elements.push((label, raters.clone()));
        }
        if elements.is_empty() {
            return Err(Error::NoElementsSurvive);
        }
        Ok(Cover::new(Measure::Counting, elements)?.with_member_names(self.users.names()))
    }
}

pub fn ingest_ratings<R: Read>(reader: R, cfg: &ToolConfig) -> Result<Cover> {
    RatingsTable::read(reader)?.to_cover(cfg.min_ratings)
}

/// 1-skeleton of a cover computed on demand: a vertex's edges are evaluated
/// the first time a search visits it.
pub struct LazyCoverGraph<'a> {
    cover: &'a Cover,
    member_index: HashMap<MemberId, Vec<usize>>,
    cache: RefCell<HashMap<usize, Vec<(usize, f64)>>>,
}

impl<'a> LazyCoverGraph<'a> {
    pub fn new(cover: &'a Cover) -> Self {
        let mut member_index: HashMap<MemberId, Vec<usize>> = HashMap::new();
        for (i, e) in cover.elements().iter().enumerate() {
            for &m in e.members() {
                member_index.entry(m).or_default().push(i);
            }
        }
        Self {
            cover,
            member_index,
            cache: RefCell::new(HashMap::new()),
        }
    }

    /// Vertices whose edges have been evaluated so far.
    pub fn evaluated(&self) -> usize {
        self.cache.borrow().len()
    }

    fn compute(&self, v: usize) -> Vec<(usize, f64)> {
        let element = self.cover.element(v);
        let mut others: Vec<usize> = element
            .members()
            .iter()
            .flat_map(|m| self.member_index[m].iter().copied())
            .filter(|&w| w != v)
            .collect();
        others.sort_unstable();
        others.dedup();
        others
            .into_iter()
            .map(|w| {
                let d = steinhaus_distance(element, self.cover.element(w));
                (w, fraction_to_f64(&d))
            })
            .collect()
    }
}

impl PathGraph for LazyCoverGraph<'_> {
    fn vertex_count(&self) -> usize {
        self.cover.len()
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize, f64)) {
        let neighbors = {
            let mut cache = self.cache.borrow_mut();
            cache.entry(v).or_insert_with(|| self.compute(v)).clone()
        };
        for (u, w) in neighbors {
            f(u, w);
        }
    }
}

/// Eager 1-skeleton through the nerve builder.
pub fn cover_graph(cover: &Cover, budget: usize) -> Result<WeightedGraph> {
    let opts = NerveOptions { max_dim: 1, budget };
    Ok(one_skeleton(&build_steinhaus_nerve(cover, &opts)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryMode {
    Frontier,
    Stable,
    Shortest,
}

impl std::str::FromStr for QueryMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "frontier" => Ok(QueryMode::Frontier),
            "stable" => Ok(QueryMode::Stable),
            "shortest" => Ok(QueryMode::Shortest),
            other => Err(format!("unknown mode `{other}` (frontier, stable, shortest)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabeledPath {
    pub path: Vec<String>,
    pub hops: usize,
    pub instability: f64,
}

impl LabeledPath {
    pub fn from_entry(entry: &ParetoEntry, label: impl Fn(usize) -> String) -> Self {
        Self {
            path: entry.path.iter().map(|&v| label(v)).collect(),
            hops: entry.hops,
            instability: entry.instability,
        }
    }
}

/// Up to three labels closest to `label`.
pub fn nearest_labels<'a>(label: &str, candidates: impl Iterator<Item = &'a str>) -> Vec<String> {
    let needle = label.to_lowercase();
    let mut scored: Vec<(f64, &str)> = candidates
        .map(|c| (strsim::jaro_winkler(&needle, &c.to_lowercase()), c))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    scored.into_iter().take(3).map(|(_, c)| c.to_owned()).collect()
}

pub fn resolve_label<'a>(label: &str, labels: impl Iterator<Item = &'a str> + Clone) -> Result<usize> {
    labels.clone().position(|l| l == label).ok_or_else(|| Error::UnknownLabel {
        label: label.to_owned(),
        suggestions: nearest_labels(label, labels),
    })
}

/// Runs a path query between two element labels of `cover` on the lazily
/// built 1-skeleton. `Frontier` returns the whole frontier (empty when
/// disconnected); `Stable` returns its last entry, the most stable path with
/// fewest hops; `Shortest` returns the fewest-hops path.
pub fn run_query(cover: &Cover, from: &str, to: &str, mode: QueryMode) -> Result<Vec<LabeledPath>> {
    let s = resolve_label(from, cover.labels())?;
    let t = resolve_label(to, cover.labels())?;
    let graph = LazyCoverGraph::new(cover);
    let entries = match mode {
        QueryMode::Frontier => pareto_frontier(&graph, s, t),
        QueryMode::Stable => pareto_frontier(&graph, s, t).pop().into_iter().collect(),
        QueryMode::Shortest => fewest_hops_path(&graph, s, t, EdgeBound::Unbounded).into_iter().collect(),
    };
    let label = |v: usize| cover.element(v).label().to_owned();
    Ok(entries.iter().map(|e| LabeledPath::from_entry(e, label)).collect())
}

/// Steinhaus nerve of a cover file, for example the refined pullback cover
/// exported from a Mapper run.
pub fn export_mapper_cover<R: BufRead>(reader: R, opts: &NerveOptions) -> Result<FilteredComplex> {
    let mut interner = Interner::new();
    let cover = read_cover(reader, &mut interner)?;
    build_steinhaus_nerve(&cover, opts)
}

/// Shape of the planted-bridge ratings generator.
#[derive(Clone, Debug)]
pub struct SyntheticConfig {
    pub users: usize,
    pub communities: usize,
    pub items_per_genre: usize,
    /// Chance that a user rates an item of their own genre.
    pub within: f64,
    /// Chance that a user rates an item of another genre.
    pub noise: f64,
    /// Chance that a user of either linked community rates a bridge item.
    pub bridge: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            users: 2000,
            communities: 3,
            items_per_genre: 66,
            within: 0.15,
            noise: 0.002,
            bridge: 0.15,
            seed: 0,
        }
    }
}

/// Generated ratings with the planted structure recorded.
#[derive(Clone, Debug)]
pub struct SyntheticDataset {
    /// `userId,movieId,rating,timestamp` CSV.
    pub csv: String,
    /// Genre of each item id; `None` for bridges.
    pub genre: Vec<Option<usize>>,
    /// Bridge item ids and the two communities each one links.
    pub bridges: Vec<(u64, usize, usize)>,
}

impl SyntheticDataset {
    pub fn is_bridge(&self, label: &str) -> bool {
        self.bridges.iter().any(|(id, _, _)| id.to_string() == label)
    }

    /// First item of genre `g`.
    pub fn genre_item(&self, g: usize) -> String {
        self.genre
            .iter()
            .position(|&x| x == Some(g))
            .expect("genre has items")
            .to_string()
    }
}

/// Users split into `communities` blocks; each block rates its own genre
/// densely and other genres rarely. Bridge item `k` is rated by communities
/// `k` and `k + 1`, so it carries the only dense overlap between them.
pub fn synthetic_ratings(cfg: &SyntheticConfig) -> SyntheticDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut genre: Vec<Option<usize>> = (0..cfg.communities)
        .flat_map(|g| std::iter::repeat_n(Some(g), cfg.items_per_genre))
        .collect();
    let mut bridges = Vec::new();
    for k in 0..cfg.communities.saturating_sub(1) {
        bridges.push((genre.len() as u64, k, k + 1));
        genre.push(None);
    }
    let community = |user: usize| user * cfg.communities / cfg.users;

    let mut csv = String::from("userId,movieId,rating,timestamp\n");
    let mut timestamp = 1_000_000_000u64;
    for user in 0..cfg.users {
        let c = community(user);
        for (item, g) in genre.iter().enumerate() {
            let p = match g {
                Some(g) if *g == c => cfg.within,
                Some(_) => cfg.noise,
                None => {
                    let (_, a, b) = bridges[item - cfg.communities * cfg.items_per_genre];
                    if c == a || c == b {
                        cfg.bridge
                    } else {
                        cfg.noise
                    }
                }
            };
            if rng.random_bool(p) {
                let rating = f64::from(rng.random_range(1..=10u8)) / 2.0;
                timestamp += 1;
                csv.push_str(&format!("{user},{item},{rating},{timestamp}\n"));
            }
        }
    }
    SyntheticDataset { csv, genre, bridges }
}

/// Shared raters of two cover elements.
pub fn shared_members(cover: &Cover, a: usize, b: usize) -> usize {
    intersect_sorted(cover.element(a).members(), cover.element(b).members()).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover_io::cover_to_string;
    use crate::cover::Fraction;

    fn ratings(rows: &[(u32, u32)]) -> String {
        let mut s = String::from("user,item\n");
        for (u, i) in rows {
            s.push_str(&format!("{u},{i}\n"));
        }
        s
    }

    #[test]
    fn filter_drops_sparse_items() {
        let data = ratings(&[(1, 7), (2, 7), (3, 7)]);
        let err = ingest_ratings(data.as_bytes(), &ToolConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NoElementsSurvive));
        assert_eq!(err.to_string(), "no elements survive filter");
    }

    #[test]
    fn two_item_example() {
        // users 0..12 rate A, users 7..18 rate B, so 7..12 (5 users) rate both
        let mut rows: Vec<(u32, u32)> = (0..12).map(|u| (u, 100)).collect();
        rows.extend((7..18).map(|u| (u, 200)));
        let cover = ingest_ratings(ratings(&rows).as_bytes(), &ToolConfig::default()).unwrap();
        assert_eq!(cover.labels().collect::<Vec<_>>(), ["100", "200"]);
        assert_eq!(cover.element(0).len(), 12);
        assert_eq!(cover.element(1).len(), 11);
        let g = cover_graph(&cover, 1000).unwrap();
        let expected = fraction_to_f64(&(Fraction::from_integer(1) - Fraction::new(5, 18)));
        assert_eq!(g.weight(0, 1), Some(expected));
    }

    #[test]
    fn min_ratings_zero_keeps_everything() {
        let data = ratings(&[(1, 7), (2, 8), (2, 9)]);
        let cfg = ToolConfig {
            min_ratings: 0,
            ..Default::default()
        };
        assert_eq!(ingest_ratings(data.as_bytes(), &cfg).unwrap().len(), 3);
    }

    #[test]
    fn duplicate_rows_collapse() {
        let data = ratings(&[(1, 7), (1, 7), (2, 7)]);
        let cfg = ToolConfig {
            min_ratings: 2,
            ..Default::default()
        };
        assert_eq!(ingest_ratings(data.as_bytes(), &cfg).unwrap().element(0).len(), 2);
    }

    #[test]
    fn movielens_header_and_line_numbers() {
        let data = "userId,movieId,rating,timestamp\n1,5,4.0,100\n2,x,3.5,101\n";
        match ingest_ratings(data.as_bytes(), &ToolConfig::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad = "a,b\n1,2\n";
        assert!(matches!(RatingsTable::read(bad.as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn titles_become_labels() {
        let mut t = RatingsTable::read("user,item\n1,5\n2,6\n".as_bytes()).unwrap();
        t.attach_titles("movieId,title,genres\n5,Alpha (1999),Drama\n6,\"Beta, The (2001)\",Comedy\n".as_bytes())
            .unwrap();
        let cover = t.to_cover(0).unwrap();
        assert_eq!(cover.labels().collect::<Vec<_>>(), ["Alpha (1999)", "Beta, The (2001)"]);
    }

    #[test]
    fn ingestion_round_trips_through_cover_file() {
        let data = ratings(&[(1, 7), (2, 7), (2, 8), (3, 8)]);
        let cfg = ToolConfig {
            min_ratings: 0,
            ..Default::default()
        };
        let cover = ingest_ratings(data.as_bytes(), &cfg).unwrap();
        let text = cover_to_string(&cover);
        let mut interner = Interner::new();
        let back = read_cover(text.as_bytes(), &mut interner).unwrap();
        assert_eq!(cover_to_string(&back), text);
    }

    fn query_cover() -> Cover {
        let elements = vec![
            ("a".into(), vec![1, 2, 3]),
            ("b".into(), vec![3, 4]),
            ("c".into(), vec![4, 5, 6]),
            ("far".into(), vec![9]),
        ];
        Cover::new(Measure::Counting, elements).unwrap()
    }

    #[test]
    fn trivial_and_disconnected_queries() {
        let cover = query_cover();
        let same = run_query(&cover, "a", "a", QueryMode::Frontier).unwrap();
        assert_eq!(same.len(), 1);
        assert_eq!((same[0].hops, same[0].instability), (0, 0.0));
        assert!(run_query(&cover, "a", "far", QueryMode::Frontier).unwrap().is_empty());
    }

    #[test]
    fn unknown_label_suggests() {
        match run_query(&query_cover(), "fat", "a", QueryMode::Frontier) {
            Err(Error::UnknownLabel { suggestions, .. }) => assert_eq!(suggestions[0], "far"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lazy_matches_eager() {
        let data = synthetic_ratings(&SyntheticConfig {
            users: 300,
            items_per_genre: 10,
            seed: 4,
            ..Default::default()
        });
        let cover = ingest_ratings(data.csv.as_bytes(), &ToolConfig::default()).unwrap();
        let eager = cover_graph(&cover, 1_000_000).unwrap();
        let lazy = LazyCoverGraph::new(&cover);
        for (s, t) in [(0, 25), (3, 12), (0, 1)] {
            assert_eq!(pareto_frontier(&eager, s, t), pareto_frontier(&lazy, s, t));
        }
    }

    #[test]
    fn synthetic_is_deterministic() {
        let cfg = SyntheticConfig {
            users: 100,
            seed: 9,
            ..Default::default()
        };
        assert_eq!(synthetic_ratings(&cfg).csv, synthetic_ratings(&cfg).csv);
        assert_eq!(synthetic_ratings(&cfg).genre.len(), 200);
    }

    #[test]
    fn mapper_cover_nerve() {
        let text = "left\tp1,p2,p3\nright\tp3,p4\n";
        let complex = export_mapper_cover(text.as_bytes(), &NerveOptions::default()).unwrap();
        assert_eq!(complex.count_of_dim(0), 2);
        assert_eq!(complex.count_of_dim(1), 1);
        let disjoint = export_mapper_cover("a\tx\nb\ty\n".as_bytes(), &NerveOptions::default()).unwrap();
        assert_eq!(disjoint.len(), 2);
    }
}
