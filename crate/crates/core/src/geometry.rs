//! Steinhaus distances between Euclidean balls of equal radius.
//!
//! Covers by balls of radius `R` relate the Steinhaus filtration to the Čech
//! and Rips filtrations. On the line the relation is exact: a set of centers
//! with Čech birth radius `c` has Steinhaus birth `1 - (R - c)/(R + c)`. In
//! `R^n` two balls at distance `d` have Steinhaus distance
//! `(2 - 2I)/(2 - I)` with `I = I_z((n+1)/2, 1/2)`, `z = 1 - d²/(4R²)`, the
//! regularized incomplete beta giving the lens volume as a fraction of one
//! ball.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::cover::{Cover, Measure};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::nerve::{build_clique_rank_filtration, build_steinhaus_nerve, one_skeleton, NerveOptions};
use crate::persistence::{diagram_bottleneck, of_dim, persistence_diagram, PersistencePair};

/// Čech birth radius of a set of points on the line: half their spread.
pub fn cech_birth_1d(points: &[f64]) -> Result<f64> {
    let (lo, hi) = extent(points)?;
    Ok((hi - lo) / 2.0)
}

/// Generalized Steinhaus distance (Lebesgue measure) of the radius-`radius`
/// intervals centered at `points`.
pub fn steinhaus_birth_1d(points: &[f64], radius: f64) -> Result<f64> {
    let (lo, hi) = extent(points)?;
    let half_spread = (hi - lo) / 2.0;
    if !(radius > half_spread) {
        return Err(Error::BallsDoNotIntersect { radius, half_spread });
    }
    let intersection = (lo + radius) - (hi - radius);
    let union = (hi + radius) - (lo - radius);
    Ok(1.0 - intersection / union)
}

/// Inverse of the 1-D birth map: `c = R d / (2 - d)`.
pub fn cech_from_steinhaus_1d(steinhaus: f64, radius: f64) -> f64 {
    radius * steinhaus / (2.0 - steinhaus)
}

/// Forward 1-D birth map: `1 - (R - c)/(R + c)`.
pub fn steinhaus_from_cech_1d(cech: f64, radius: f64) -> f64 {
    1.0 - (radius - cech) / (radius + cech)
}

fn extent(points: &[f64]) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(Error::InvalidGeometry("empty point set".into()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidGeometry("non-finite coordinate".into()));
    }
    let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Steinhaus distance of two radius-`radius` balls in `R^n` whose centers
/// are `dist` apart. Returns 1 once the balls are disjoint.
pub fn ball_steinhaus_nd(n: usize, radius: f64, dist: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidGeometry("dimension must be positive".into()));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidGeometry(format!("radius {radius} must be positive")));
    }
    if !(dist >= 0.0) {
        return Err(Error::InvalidGeometry(format!("distance {dist} must be nonnegative")));
    }
    if dist >= 2.0 * radius {
        return Ok(1.0);
    }
    let z = 1.0 - (dist * dist) / (4.0 * radius * radius);
    let lens = regularized_incomplete_beta(z, (n as f64 + 1.0) / 2.0, 0.5);
    Ok(((2.0 - 2.0 * lens) / (2.0 - lens)).clamp(0.0, 1.0))
}

/// `I_z(a, b)` for `a >= 1`, `b >= 1/2`, by adaptive Gauss–Kronrod
/// quadrature after substituting `u = 1 - t²`, which removes the
/// `(1-u)^(b-1)` endpoint singularity:
/// `∫_0^z u^(a-1) (1-u)^(b-1) du = ∫_{√(1-z)}^1 2 t^(2b-1) (1-t²)^(a-1) dt`.
pub fn regularized_incomplete_beta(z: f64, a: f64, b: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    if z >= 1.0 {
        return 1.0;
    }
    let integrand = |t: f64| 2.0 * t.powf(2.0 * b - 1.0) * (1.0 - t * t).max(0.0).powf(a - 1.0);
    let partial = integrate(&integrand, (1.0 - z).sqrt(), 1.0, 1e-14);
    let log_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    (partial / log_beta.exp()).clamp(0.0, 1.0)
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = K15_WEIGHTS[7] * f_center;
    let mut gauss = G7_WEIGHTS[3] * f_center;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let sum = f(center - dx) + f(center + dx);
        kronrod += K15_WEIGHTS[i] * sum;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gauss_kronrod(f, a, b);
        if err <= tol.max(1e-15 * value.abs()) || depth >= 40 {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, tol / 2.0, depth + 1) + recurse(f, mid, b, tol / 2.0, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    recurse(f, a, b, tol, 0)
}

/// Equal-radius balls in `R^n`.
#[derive(Clone, Debug)]
pub struct BallCover {
    dim: usize,
    centers: Vec<Vec<f64>>,
    radius: f64,
}

impl BallCover {
    pub fn new(centers: Vec<Vec<f64>>, radius: f64) -> Result<Self> {
        let dim = centers.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::InvalidGeometry("need at least one center with a coordinate".into()));
        }
        if centers.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidGeometry("centers have mixed dimensions".into()));
        }
        if centers.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite coordinate".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGeometry(format!("radius {radius} must be positive")));
        }
        Ok(Self { dim, centers, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn contains(&self, ball: usize, point: &[f64]) -> bool {
        squared_distance(&self.centers[ball], point) <= self.radius * self.radius
    }

    /// Tight axis-aligned box around the balls at `indices`.
    pub fn bounding_box(&self, indices: &[usize]) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for &i in indices {
            for (k, &x) in self.centers[i].iter().enumerate() {
                lo[k] = lo[k].min(x - self.radius);
                hi[k] = hi[k].max(x + self.radius);
            }
        }
        (lo, hi)
    }

    /// Largest pairwise center distance.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, a) in self.centers.iter().enumerate() {
            for b in &self.centers[i + 1..] {
                best = best.max(squared_distance(a, b).sqrt());
            }
        }
        best
    }
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Clone, Debug)]
pub struct MonteCarloConfig {
    pub samples: usize,
    pub seed: u64,
    /// Sampling box; `None` means the tight box around the balls in use.
    pub bounds: Option<(Vec<f64>, Vec<f64>)>,
}

impl MonteCarloConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            bounds: None,
        }
    }

    fn sampling_box(&self, cover: &BallCover, balls: &[usize]) -> Result<(Vec<f64>, Vec<f64>)> {
        if self.samples == 0 {
            return Err(Error::InvalidGeometry("sample count must be positive".into()));
        }
        let tight = cover.bounding_box(balls);
        match &self.bounds {
            None => Ok(tight),
            Some((lo, hi)) => {
                let inside = lo.len() == cover.dim()
                    && hi.len() == cover.dim()
                    && (0..cover.dim()).all(|k| lo[k] <= tight.0[k] && hi[k] >= tight.1[k]);
                if !inside {
                    return Err(Error::InvalidGeometry("sampling box does not contain every ball".into()));
                }
                Ok((lo.clone(), hi.clone()))
            }
        }
    }
}

/// Uniform samples in the box `[lo, hi)`, reproducible from `seed`.
pub fn sample_box(lo: &[f64], hi: &[f64], samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            lo.iter()
                .zip(hi)
                .map(|(&l, &h)| if h > l { rng.random_range(l..h) } else { l })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits_all: usize,
    pub hits_any: usize,
}

impl MonteCarloEstimate {
    fn from_counts(hits_all: usize, hits_any: usize) -> Result<Self> {
        if hits_any == 0 {
            return Err(Error::InsufficientSamples);
        }
        let p = hits_all as f64 / hits_any as f64;
        Ok(Self {
            estimate: 1.0 - p,
            std_error: (p * (1.0 - p) / hits_any as f64).sqrt(),
            hits_all,
            hits_any,
        })
    }
}

/// Monte Carlo Steinhaus distance of the balls at `balls`:
/// `1 - #(in all)/#(in any)` over uniform samples, with a binomial standard
/// error.
pub fn monte_carlo_steinhaus(
    cover: &BallCover,
    balls: &[usize],
    cfg: &MonteCarloConfig,
) -> Result<MonteCarloEstimate> {
    if balls.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let (lo, hi) = cfg.sampling_box(cover, balls)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut point = vec![0.0; cover.dim()];
    let (mut hits_all, mut hits_any) = (0usize, 0usize);
    for _ in 0..cfg.samples {
        for (k, x) in point.iter_mut().enumerate() {
            *x = if hi[k] > lo[k] { rng.random_range(lo[k]..hi[k]) } else { lo[k] };
        }
        let inside = balls.iter().filter(|&&b| cover.contains(b, &point)).count();
        if inside > 0 {
            hits_any += 1;
        }
        if inside == balls.len() {
            hits_all += 1;
        }
    }
    MonteCarloEstimate::from_counts(hits_all, hits_any)
}

/// Persistence diagrams of a Rips filtration and of a sampled Steinhaus
/// filtration on the same landmarks.
#[derive(Clone, Debug, Serialize)]
pub struct FiltrationComparison {
    /// Rips filtration, Euclidean edge lengths.
    pub rips: Vec<PersistencePair>,
    /// Rips edges mapped through the closed-form two-ball Steinhaus distance.
    pub rescaled_rips: Vec<PersistencePair>,
    /// Sampled edge births, completed by taking the maximum over edges.
    pub steinhaus: Vec<PersistencePair>,
    /// Largest binomial standard error over the sampled edges.
    pub edge_error_bound: f64,
    /// Largest |sampled - closed form| over edges present in both.
    pub max_edge_error: f64,
    pub bottleneck_h0: f64,
    pub bottleneck_h1: f64,
    pub rips_edges: usize,
    pub steinhaus_edges: usize,
    pub samples: usize,
}

impl FiltrationComparison {
    pub fn bottleneck(&self) -> f64 {
        self.bottleneck_h0.max(self.bottleneck_h1)
    }
}

/// Builds (a) the Rips filtration of `landmarks`, (b) its edges rescaled by
/// [`ball_steinhaus_nd`], and (c) the approximate Steinhaus filtration of the
/// radius-`radius` balls from one shared cloud of uniform samples in the
/// tight box around all balls. Each ball becomes the set of samples it
/// contains, so edge births are exact Steinhaus distances of that finite
/// cover; higher simplices take the maximum birth of their edges.
pub fn compare_filtrations(
    landmarks: &[Vec<f64>],
    radius: f64,
    cfg: &MonteCarloConfig,
    max_dim: usize,
) -> Result<FiltrationComparison> {
    let balls = BallCover::new(landmarks.to_vec(), radius)?;
    let n = balls.len();
    let all: Vec<usize> = (0..n).collect();
    let (lo, hi) = cfg.sampling_box(&balls, &all)?;
    let cloud = sample_box(&lo, &hi, cfg.samples, cfg.seed);

    let mut members: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (idx, p) in cloud.iter().enumerate() {
        for (b, m) in members.iter_mut().enumerate() {
            if balls.contains(b, p) {
                m.push(idx as u32);
            }
        }
    }
    if members.iter().any(Vec::is_empty) {
        return Err(Error::InsufficientSamples);
    }
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let sample_cover = Cover::new(Measure::Counting, labels.iter().cloned().zip(members).collect())?;
    let nerve = build_steinhaus_nerve(&sample_cover, &NerveOptions::with_max_dim(1))?;
    let sampled_graph = one_skeleton(&nerve);

    let mut edge_error_bound: f64 = 0.0;
    let mut max_edge_error: f64 = 0.0;
    for e in sampled_graph.edges() {
        let a = sample_cover.element(e.u).len();
        let b = sample_cover.element(e.v).len();
        let shared = crate::cover::intersect_sorted(
            sample_cover.element(e.u).members(),
            sample_cover.element(e.v).members(),
        )
        .len();
        let est = MonteCarloEstimate::from_counts(shared, a + b - shared)?;
        edge_error_bound = edge_error_bound.max(est.std_error);
        let d = squared_distance(&landmarks[e.u], &landmarks[e.v]).sqrt();
        let exact = ball_steinhaus_nd(balls.dim(), radius, d)?;
        max_edge_error = max_edge_error.max((exact - e.weight).abs());
    }

    let mut rips_graph = WeightedGraph::new(labels.clone());
    let mut rescaled_graph = WeightedGraph::new(labels);
    for i in 0..n {
        for j in i + 1..n {
            let d = squared_distance(&landmarks[i], &landmarks[j]).sqrt();
            rips_graph.add_edge(i, j, d)?;
            if d < 2.0 * radius {
                rescaled_graph.add_edge(i, j, ball_steinhaus_nd(balls.dim(), radius, d)?)?;
            }
        }
    }
    let hom_dim = usize::from(max_dim >= 2);
    let diagram = |g: &WeightedGraph| persistence_diagram(&build_clique_rank_filtration(g, max_dim), hom_dim);
    let rips = diagram(&rips_graph);
    let rescaled_rips = diagram(&rescaled_graph);
    let steinhaus = diagram(&sampled_graph);
    let bottleneck_h0 = diagram_bottleneck(&of_dim(&rescaled_rips, 0), &of_dim(&steinhaus, 0))?;
    let bottleneck_h1 = diagram_bottleneck(&of_dim(&rescaled_rips, 1), &of_dim(&steinhaus, 1))?;
    Ok(FiltrationComparison {
        rips,
        rescaled_rips,
        steinhaus,
        edge_error_bound,
        max_edge_error,
        bottleneck_h0,
        bottleneck_h1,
        rips_edges: rips_graph.edge_count(),
        steinhaus_edges: sampled_graph.edge_count(),
        samples: cfg.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cech_examples() {
        assert_eq!(cech_birth_1d(&[0.0, 1.0]).unwrap(), 0.5);
        assert_eq!(cech_birth_1d(&[3.0]).unwrap(), 0.0);
        assert_eq!(cech_birth_1d(&[0.0, 0.4, 1.0]).unwrap(), 0.5);
    }

    #[test]
    fn steinhaus_1d_examples() {
        let d = steinhaus_birth_1d(&[0.0, 1.0], 2.0).unwrap();
        assert!((d - 0.4).abs() < 1e-15);
        assert_eq!(steinhaus_birth_1d(&[0.7, 0.7], 0.1).unwrap(), 0.0);
        assert!((cech_from_steinhaus_1d(d, 2.0) - 0.5).abs() < 1e-15);
        assert!(matches!(
            steinhaus_birth_1d(&[0.0, 1.0], 0.5),
            Err(Error::BallsDoNotIntersect { .. })
        ));
    }

    #[test]
    fn ball_formula_endpoints() {
        for n in 1..6 {
            assert_eq!(ball_steinhaus_nd(n, 1.3, 0.0).unwrap(), 0.0);
            assert_eq!(ball_steinhaus_nd(n, 1.3, 2.6).unwrap(), 1.0);
            assert_eq!(ball_steinhaus_nd(n, 1.3, 9.0).unwrap(), 1.0);
        }
        assert!(ball_steinhaus_nd(2, 1.0, -0.1).is_err());
    }

    #[test]
    fn planar_lens() {
        let lens = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
        let expected = (2.0 * PI - 2.0 * lens) / (2.0 * PI - lens);
        assert!((ball_steinhaus_nd(2, 1.0, 1.0).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn incomplete_beta_against_statrs() {
        for &(z, a) in &[(0.1, 1.0), (0.5, 1.5), (0.75, 2.0), (0.99, 3.5), (0.3, 5.0)] {
            let ours = regularized_incomplete_beta(z, a, 0.5);
            let reference = statrs::function::beta::beta_reg(a, 0.5, z);
            assert!((ours - reference).abs() < 1e-10, "z={z} a={a}: {ours} vs {reference}");
        }
    }

    #[test]
    fn monte_carlo_exact_cases() {
        let cover = BallCover::new(vec![vec![0.0, 0.0], vec![5.0, 0.0]], 1.0).unwrap();
        let cfg = MonteCarloConfig::new(2000, 7);
        assert_eq!(monte_carlo_steinhaus(&cover, &[0], &cfg).unwrap().estimate, 0.0);
        assert_eq!(monte_carlo_steinhaus(&cover, &[0, 1], &cfg).unwrap().estimate, 1.0);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let cover = BallCover::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], 1.0).unwrap();
        let cfg = MonteCarloConfig::new(5000, 42);
        let a = monte_carlo_steinhaus(&cover, &[0, 1], &cfg).unwrap();
        let b = monte_carlo_steinhaus(&cover, &[0, 1], &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampling_box_must_contain_balls() {
        let cover = BallCover::new(vec![vec![0.0, 0.0]], 1.0).unwrap();
        let cfg = MonteCarloConfig {
            samples: 10,
            seed: 1,
            bounds: Some((vec![-0.5, -0.5], vec![0.5, 0.5])),
        };
        assert!(monte_carlo_steinhaus(&cover, &[0], &cfg).is_err());
    }

    #[test]
    fn two_landmark_comparison() {
        let cmp = compare_filtrations(
            &[vec![0.0, 0.0], vec![0.6, 0.0]],
            0.5,
            &MonteCarloConfig::new(20_000, 3),
            2,
        )
        .unwrap();
        for diagram in [&cmp.rips, &cmp.steinhaus] {
            let h0 = of_dim(diagram, 0);
            assert_eq!(h0.len(), 2);
            assert!(h0.iter().all(|p| p.birth == 0.0));
            assert_eq!(h0.iter().filter(|p| p.is_essential()).count(), 1);
        }
        let rips_death = of_dim(&cmp.rips, 0).iter().find(|p| !p.is_essential()).unwrap().death;
        assert!((rips_death - 0.6).abs() < 1e-12);
    }

    #[test]
    fn single_landmark() {
        let cmp = compare_filtrations(&[vec![0.0, 0.0]], 0.5, &MonteCarloConfig::new(1000, 3), 2).unwrap();
        assert_eq!(cmp.rips.len(), 1);
        assert_eq!(cmp.steinhaus.len(), 1);
        assert!(cmp.steinhaus[0].is_essential());
    }
}
