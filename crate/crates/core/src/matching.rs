//! Maximum bipartite matching and min-max (bottleneck) assignment.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Hopcroft–Karp. `adjacency[l]` lists right vertices reachable from left
/// vertex `l`. Returns the matching size and the partner of each left vertex.
pub fn hopcroft_karp(n_right: usize, adjacency: &[Vec<usize>]) -> (usize, Vec<Option<usize>>) {
    let n_left = adjacency.len();
    let mut match_left = vec![FREE; n_left];
    let mut match_right = vec![FREE; n_right];
    let mut layer = vec![0usize; n_left];
    let mut size = 0;

    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if match_left[l] == FREE {
                layer[l] = 0;
                queue.push_back(l);
            } else {
                layer[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adjacency[l] {
                let next = match_right[r];
                if next == FREE {
                    found = true;
                } else if layer[next] == usize::MAX {
                    layer[next] = layer[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut cursor = vec![0usize; n_left];
        for l in 0..n_left {
            if match_left[l] == FREE
                && augment(l, adjacency, &mut match_left, &mut match_right, &mut layer, &mut cursor)
            {
                size += 1;
            }
        }
    }
    let partners = match_left.into_iter().map(|r| (r != FREE).then_some(r)).collect();
    (size, partners)
}

fn augment(
    l: usize,
    adjacency: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    layer: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    while cursor[l] < adjacency[l].len() {
        let r = adjacency[l][cursor[l]];
        cursor[l] += 1;
        let next = match_right[r];
        let ok = next == FREE
            || (layer[next] == layer[l] + 1
                && augment(next, adjacency, match_left, match_right, layer, cursor));
        if ok {
            match_left[l] = r;
            match_right[r] = l;
            return true;
        }
    }
    layer[l] = usize::MAX;
    false
}

/// Square bottleneck assignment: the permutation minimizing the largest
/// assigned cost. `None` entries are forbidden pairs. Returns `None` when no
/// perfect matching exists.
///
/// Binary search over the sorted distinct costs, testing each threshold for
/// a perfect matching.
pub fn bottleneck_assignment<T>(costs: &[Vec<Option<T>>]) -> Option<(Option<T>, Vec<usize>)>
where
    T: Copy + PartialOrd,
{
    let n = costs.len();
    if n == 0 {
        return Some((None, Vec::new()));
    }
    let mut values: Vec<T> = costs.iter().flatten().flatten().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("costs are totally ordered"));
    values.dedup_by(|a, b| a == b);

    let feasible = |limit: T| -> Option<Vec<usize>> {
        let adjacency: Vec<Vec<usize>> = costs
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| matches!(c, Some(c) if *c <= limit))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let (size, partners) = hopcroft_karp(n, &adjacency);
        (size == n).then(|| partners.into_iter().map(|p| p.expect("perfect")).collect())
    };

    let last = *values.last()?;
    let mut best = feasible(last)?;
    let (mut lo, mut hi) = (0usize, values.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(values[mid]) {
            Some(assign) => {
                best = assign;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Some((Some(values[lo]), best))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_matching_found() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let (size, partners) = hopcroft_karp(3, &adj);
        assert_eq!(size, 3);
        assert_eq!(partners[1], Some(0));
    }

    #[test]
    fn deficient_matching() {
        let adj = vec![vec![0], vec![0], vec![0]];
        assert_eq!(hopcroft_karp(1, &adj).0, 1);
    }

    #[test]
    fn bottleneck_beats_min_sum() {
        // min-sum picks the diagonal (1 + 10), min-max picks the anti-diagonal (6, 6)
        let costs = vec![vec![Some(1), Some(6)], vec![Some(6), Some(10)]];
        let (value, assign) = bottleneck_assignment(&costs).unwrap();
        assert_eq!(value, Some(6));
        assert_eq!(assign, vec![1, 0]);
    }

    #[test]
    fn forbidden_pairs() {
        let costs = vec![vec![None, Some(2)], vec![None, Some(1)]];
        assert!(bottleneck_assignment(&costs).is_none());
    }
}
