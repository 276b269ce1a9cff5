use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Coverage, CutSet, Segment};
use crate::map::edge_of;
use crate::net::{sector_deficit, DualNet};

/// Above this many candidate subsets the exhaustive choice at a vertex
/// falls back to a sector-by-sector pick.
const SUBSET_LIMIT: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VertexOrder {
    /// Ascending vertex id.
    #[default]
    ById,
    /// Seeded shuffle.
    Random(u64),
}

impl VertexOrder {
    fn arrange(&self, mut vertices: Vec<usize>) -> Vec<usize> {
        if let VertexOrder::Random(seed) = *self {
            vertices.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        vertices
    }
}

/// Saturates every vertex by shooting segments, starting from `seed`.
///
/// Positive-exponent vertices are visited in `order`. At each one the
/// smallest set of uncovered incident edges that saturates it is chosen;
/// among those the set with the shortest total shot length wins, ties going
/// to the lexicographically smallest edge ids.
pub fn greedy_rectangulate(net: &DualNet, seed: &CutSet, order: VertexOrder) -> CutSet {
    let mut segments = seed.segments.clone();
    let mut cover = Coverage::of(net, &segments);
    let targets: Vec<usize> = (0..net.num_vertices())
        .filter(|&v| net.exponent(v) > 0)
        .collect();
    for v in order.arrange(targets) {
        let k = net.relative_exponent(v, &|e| cover.edge_segment[e].is_some());
        if k == 0 {
            continue;
        }
        let shots = choose_shots(net, &cover, v, k);
        for h in shots {
            if cover.edge_segment[edge_of(h)].is_some() {
                continue;
            }
            let s = net
                .shoot_segment(h, &cover)
                .expect("uncovered interior edge");
            cover.add(net, &s);
            segments.push(s);
        }
        debug_assert_eq!(
            net.relative_exponent(v, &|e| cover.edge_segment[e].is_some()),
            0
        );
    }
    CutSet::new(segments)
}

/// Outgoing half-edges at `v` to shoot along.
fn choose_shots(net: &DualNet, cover: &Coverage, v: usize, k: usize) -> Vec<usize> {
    let rot = net.map.rotation(v);
    let d = rot.len();
    let base: Vec<bool> = rot
        .iter()
        .map(|&h| net.is_border_edge(edge_of(h)) || cover.edge_segment[edge_of(h)].is_some())
        .collect();
    let square: Vec<bool> = (0..d).map(|i| net.corner_is_square(v, i)).collect();
    let free: Vec<usize> = (0..d).filter(|&i| !base[i]).collect();
    let regular = net.is_regular(v);

    for size in k..=free.len() {
        if binomial(free.len(), size) > SUBSET_LIMIT {
            break;
        }
        let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
        for subset in Subsets::new(free.len(), size) {
            let mut marked = base.clone();
            for &i in &subset {
                marked[free[i]] = true;
            }
            if sector_deficit(&marked, &square, regular) != 0 {
                continue;
            }
            let mut halves: Vec<usize> = subset.iter().map(|&i| rot[free[i]]).collect();
            halves.sort_by_key(|&h| edge_of(h));
            let length = simulate(net, cover, &halves);
            let ids: Vec<usize> = halves.iter().map(|&h| edge_of(h)).collect();
            let better = match &best {
                None => true,
                Some((l, b, _)) => (length, &ids) < (*l, b),
            };
            if better {
                best = Some((length, ids, halves));
            }
        }
        if let Some((_, _, halves)) = best {
            return halves;
        }
    }
    fallback(net, &base, &square, v)
}

/// Total length of the segments shot along `halves` in order.
fn simulate(net: &DualNet, cover: &Coverage, halves: &[usize]) -> usize {
    let mut c = cover.clone();
    let mut total = 0;
    for &h in halves {
        if c.edge_segment[edge_of(h)].is_some() {
            continue;
        }
        let s: Segment = net.shoot_segment(h, &c).expect("uncovered interior edge");
        total += s.len();
        c.add(net, &s);
    }
    total
}

/// Splits every over-full sector by marking every second free position.
fn fallback(net: &DualNet, base: &[bool], square: &[bool], v: usize) -> Vec<usize> {
    let rot = net.map.rotation(v);
    let d = rot.len();
    let mut marked = base.to_vec();
    let start = marked.iter().position(|&m| m).unwrap_or(0);
    let mut since = 0;
    for step in 0..d {
        let i = (start + step) % d;
        if marked[i] && step > 0 {
            since = 0;
        } else if !marked[i] && since >= 2 {
            marked[i] = true;
            since = 0;
        }
        if square[i] {
            since += 1;
        }
    }
    if !marked.iter().any(|&m| m) {
        marked[0] = true;
    }
    let mut halves: Vec<usize> = (0..d)
        .filter(|&i| marked[i] && !base[i])
        .map(|i| rot[i])
        .collect();
    halves.sort_by_key(|&h| edge_of(h));
    halves
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// k-subsets of `0..n` in lexicographic order.
struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
