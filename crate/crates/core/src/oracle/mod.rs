//! Exhaustive solvers used as ground truth at desk scale.

pub mod ortho;
pub mod partition;
pub mod verify;

use std::collections::HashSet;

use crate::bipartite::{gain_def, GainGraph};
use crate::error::{Error, Result};
use crate::map::{edge_of, twin};
use crate::net::DualNet;
use crate::rectangulation::{
    ambiguous_vertices, delimiting_cutset, hole_incidences, rectangulation_from_partition,
    Rectangulation, TieBreak,
};
use partition::ExactCover;

/// Default square cap of the rectangulation oracle.
pub const DEFAULT_CAP: usize = 20;
/// Optimal partitions enumerated for the delta and hole statistics.
pub const PARTITION_LIMIT: usize = 5000;

/// Cap from `BUNDLE_ORACLE_CAP`, falling back to [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    std::env::var("BUNDLE_ORACLE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .map_or(DEFAULT_CAP, |c: usize| c.min(64))
}

/// One step across side `dir` (0 up, 1 right, 2 down, 3 left) of a square
/// with orientation offset `off`.
fn step(net: &DualNet, face: usize, off: usize, dir: usize) -> Option<(usize, usize)> {
    let h = net.map.face(face)[(dir + off) % 4];
    if net.is_border_edge(edge_of(h)) {
        return None;
    }
    let g = net.map.face_of(twin(h));
    if !net.is_square_face(g) || net.map.face(g).len() != 4 {
        return None;
    }
    let entry = net.map.face(g).iter().position(|&x| x == twin(h))?;
    Some((g, (entry + 8 - dir - 2) % 4))
}

/// Every rectangle of the net as a bitmask over crossing indices.
pub fn candidate_rectangles(net: &DualNet) -> Vec<u64> {
    assert!(net.num_squares() <= 64);
    let mut out = HashSet::new();
    for &f in &net.square_face {
        if net.map.face(f).len() != 4 {
            continue;
        }
        for off in 0..4 {
            let mut top: Vec<(usize, usize)> = vec![(f, off)];
            loop {
                let mut rows = vec![top.clone()];
                loop {
                    let Some(mask) = valid_block(net, &rows) else {
                        break;
                    };
                    out.insert(mask);
                    let next: Option<Vec<(usize, usize)>> = rows
                        .last()
                        .unwrap()
                        .iter()
                        .map(|&(g, o)| step(net, g, o, 2))
                        .collect();
                    match next {
                        Some(r) => rows.push(r),
                        None => break,
                    }
                }
                let &(g, o) = top.last().unwrap();
                match step(net, g, o, 1) {
                    Some(n) if !top.iter().any(|t| t.0 == n.0) => top.push(n),
                    _ => break,
                }
                if top.len() > net.num_squares() {
                    break;
                }
            }
        }
    }
    let mut v: Vec<u64> = out.into_iter().collect();
    v.sort_unstable();
    v
}

/// Mask of a block of rows if it is a rectangle: distinct squares,
/// consistent right-steps, and no adjacency other than grid adjacency.
fn valid_block(net: &DualNet, rows: &[Vec<(usize, usize)>]) -> Option<u64> {
    let mut mask = 0u64;
    let mut at = std::collections::HashMap::new();
    for (y, row) in rows.iter().enumerate() {
        for (x, &(f, off)) in row.iter().enumerate() {
            let c = net.square_crossing(f)?;
            if mask & (1 << c) != 0 {
                return None;
            }
            mask |= 1 << c;
            at.insert(f, (x, y, off));
        }
    }
    for (y, row) in rows.iter().enumerate() {
        for (x, &(f, off)) in row.iter().enumerate() {
            if x + 1 < row.len() && step(net, f, off, 1) != Some(row[x + 1]) {
                return None;
            }
            for dir in 0..4 {
                let Some((g, goff)) = step(net, f, off, dir) else {
                    continue;
                };
                if let Some(&(gx, gy, o)) = at.get(&g) {
                    let (dx, dy) = [(0i64, -1i64), (1, 0), (0, 1), (-1, 0)][dir];
                    if (gx as i64, gy as i64) != (x as i64 + dx, y as i64 + dy) || o != goff {
                        return None;
                    }
                }
            }
        }
    }
    Some(mask)
}

/// Ground truth for one net.
#[derive(Debug, Clone)]
pub struct OptStats {
    pub r_opt: usize,
    pub s_opt: usize,
    /// Minimum over the optimal partitions of the smallest hole incidence.
    pub delta: usize,
    pub h: usize,
    pub h_odd: usize,
    /// Largest number of holes with at most two incidences over optimal partitions.
    pub h2: usize,
    pub t: usize,
    pub witness: Rectangulation,
    pub optimal_count: usize,
    /// Whether every optimal partition was enumerated.
    pub complete: bool,
    /// With `R_opt >= 2`: every optimal partition gives each hole two incidences.
    pub holes_meet_two: bool,
    /// Segment count of the witness under the flipped tie-break.
    pub s_flipped: usize,
    pub tie_vertices: usize,
}

/// Minimum rectangulation by exact cover over all rectangles.
pub fn brute_force_min_rectangulation(net: &DualNet, cap: usize) -> Result<OptStats> {
    let n = net.num_squares();
    let cap = cap.min(64);
    if n > cap {
        return Err(Error::TooLarge { size: n, cap });
    }
    if n == 0 {
        return Err(Error::InvalidPartition("net without squares".into()));
    }
    let mut cover = ExactCover::new(n, candidate_rectangles(net));
    let r_opt = cover
        .minimum()
        .ok_or_else(|| Error::InvalidPartition("squares admit no rectangle partition".into()))?;
    let (parts, complete) = cover.optimal_partitions(PARTITION_LIMIT);
    let to_rect_of = |part: &[u64]| -> Vec<usize> {
        let mut rect_of = vec![0; n];
        for (i, &m) in part.iter().enumerate() {
            for (c, r) in rect_of.iter_mut().enumerate() {
                if m & (1 << c) != 0 {
                    *r = i;
                }
            }
        }
        rect_of
    };
    let mut delta = usize::MAX;
    let mut h2 = 0;
    let mut holes_meet_two = true;
    let mut witness: Option<Rectangulation> = None;
    for part in &parts {
        let rect = rectangulation_from_partition(net, &to_rect_of(part))?;
        let inc = hole_incidences(net, &rect.cutset);
        let low = inc.iter().copied().min().unwrap_or(0);
        delta = delta.min(low);
        h2 = h2.max(inc.iter().filter(|&&k| k <= 2).count());
        if r_opt >= 2 && low < 2 {
            holes_meet_two = false;
        }
        if witness.is_none() {
            witness = Some(rect);
        }
    }
    let witness = witness.expect("at least one optimal partition");
    let flipped = delimiting_cutset(net, &witness.rect_of, TieBreak::Flipped);
    Ok(OptStats {
        r_opt,
        s_opt: witness.s,
        delta,
        h: net.hole_count(),
        h_odd: net.odd_hole_count(),
        h2,
        t: net.toothed_count(),
        optimal_count: parts.len(),
        complete,
        holes_meet_two,
        s_flipped: flipped.len(),
        tie_vertices: ambiguous_vertices(net, &witness.rect_of).len(),
        witness,
    })
}

/// Largest gain over all subsets of `B`, with the smallest such subset.
pub fn brute_force_max_gain(
    net: &DualNet,
    gb: &GainGraph,
    cap: usize,
) -> Result<(i64, Vec<usize>)> {
    let m = gb.b.len();
    if m > cap.min(24) {
        return Err(Error::TooLarge {
            size: m,
            cap: cap.min(24),
        });
    }
    let mut best = (0i64, Vec::new());
    for mask in 1u32..(1u32 << m) {
        let subset: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let g = gain_def(net, &gb.segments_of(&subset)).g;
        if g > best.0 || (g == best.0 && subset.len() < best.1.len()) {
            best = (g, subset);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::build_planarization;
    use crate::generate::{grid, toothed};
    use crate::net::net_of;

    #[test]
    fn grid_is_one_rectangle() {
        let net = net_of(&build_planarization(&grid(3, 3).unwrap()).unwrap()).unwrap();
        let stats = brute_force_min_rectangulation(&net, 20).unwrap();
        assert_eq!((stats.r_opt, stats.s_opt, stats.h), (1, 0, 1));
        assert_eq!(stats.optimal_count, 1);
    }

    #[test]
    fn cap_is_enforced() {
        let net = net_of(&build_planarization(&grid(5, 5).unwrap()).unwrap()).unwrap();
        assert!(matches!(
            brute_force_min_rectangulation(&net, 20),
            Err(Error::TooLarge { size: 25, cap: 20 })
        ));
    }

    #[test]
    fn toothed_has_two_rectangles() {
        let net = net_of(&build_planarization(&toothed(2).unwrap()).unwrap()).unwrap();
        let stats = brute_force_min_rectangulation(&net, 20).unwrap();
        assert_eq!(stats.r_opt, 2);
        assert_eq!(stats.h, 3);
        assert_eq!(stats.t, 2);
        assert_eq!(stats.s_opt, stats.r_opt + stats.h - 2);
    }
}
