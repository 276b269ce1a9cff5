//! Minimum rectangulation of orthogonal polygons given as unit cells.
//!
//! Grid points are lattice corners; cell `(x, y)` spans `[x, x+1] x [y, y+1]`.
//! A concave corner is a lattice point with exactly three of its four cells
//! inside. Good segments join two concave corners along a chord that leaves
//! each corner in a direction resolving it; a maximum set of pairwise
//! non-conflicting good segments comes from a bipartite matching.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rand::Rng;

use super::partition::ExactCover;
use crate::error::{Error, Result};

type Cell = (i64, i64);
type Pt = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoPolygon {
    cells: BTreeSet<Cell>,
}

/// A concave corner and the directions that resolve it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub at: Pt,
    /// Unit step away from the missing cell, horizontally.
    pub dx: i64,
    /// Unit step away from the missing cell, vertically.
    pub dy: i64,
}

/// Axis-parallel segment between lattice points, `a < b` lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridSegment {
    pub a: Pt,
    pub b: Pt,
}

impl GridSegment {
    fn new(p: Pt, q: Pt) -> Self {
        GridSegment {
            a: p.min(q),
            b: p.max(q),
        }
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.1 == self.b.1
    }

    fn points(&self) -> impl Iterator<Item = Pt> + '_ {
        let (dx, dy) = (
            (self.b.0 - self.a.0).signum(),
            (self.b.1 - self.a.1).signum(),
        );
        let n = (self.b.0 - self.a.0).abs() + (self.b.1 - self.a.1).abs();
        (0..=n).map(move |k| (self.a.0 + k * dx, self.a.1 + k * dy))
    }

    fn conflicts(&self, other: &GridSegment) -> bool {
        let shared = [self.a, self.b]
            .iter()
            .any(|p| *p == other.a || *p == other.b);
        if shared {
            return true;
        }
        if self.is_horizontal() == other.is_horizontal() {
            return false;
        }
        let (h, v) = if self.is_horizontal() {
            (self, other)
        } else {
            (other, self)
        };
        let (x, y) = (v.a.0, h.a.1);
        h.a.0 <= x && x <= h.b.0 && v.a.1 <= y && y <= v.b.1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoSolution {
    pub segments: Vec<GridSegment>,
    pub rectangles: usize,
}

impl OrthoSolution {
    pub fn s(&self) -> usize {
        self.segments.len()
    }
}

impl OrthoPolygon {
    /// Checks that the cells form a simply connected polygon without pinches.
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let poly = OrthoPolygon {
            cells: cells.into_iter().collect(),
        };
        if poly.cells.is_empty() {
            return Err(Error::DegeneratePolygon("zero area".into()));
        }
        if !poly.is_connected() {
            return Err(Error::DegeneratePolygon("cells are not connected".into()));
        }
        if poly.has_pinch() {
            return Err(Error::DegeneratePolygon(
                "two cells touch only at a corner".into(),
            ));
        }
        if poly.has_hole() {
            return Err(Error::DegeneratePolygon("polygon has a hole".into()));
        }
        Ok(poly)
    }

    pub fn rectangle(w: i64, h: i64) -> Self {
        OrthoPolygon {
            cells: (0..w).flat_map(|x| (0..h).map(move |y| (x, y))).collect(),
        }
    }

    /// Random polygon grown cell by cell.
    pub fn random(target: usize, rng: &mut impl Rng) -> Self {
        let mut poly = OrthoPolygon {
            cells: BTreeSet::from([(0, 0)]),
        };
        let mut attempts = 0;
        while poly.cells.len() < target && attempts < 50 * target {
            attempts += 1;
            let frontier: Vec<Cell> = poly
                .cells
                .iter()
                .flat_map(|&(x, y)| [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)])
                .filter(|c| !poly.cells.contains(c))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let c = frontier[rng.gen_range(0..frontier.len())];
            poly.cells.insert(c);
            if poly.has_pinch() || poly.has_hole() {
                poly.cells.remove(&c);
            }
        }
        poly
    }

    /// Random staircase: the region between two monotone lattice paths.
    pub fn random_staircase(max_cells: usize, rng: &mut impl Rng) -> Self {
        loop {
            let w = rng.gen_range(1..=8i64);
            let mut lo = 0i64;
            let mut hi = rng.gen_range(1..=4i64);
            let mut cells = BTreeSet::new();
            for x in 0..w {
                if x > 0 {
                    // both bounds rise; keep consecutive columns overlapping
                    let nlo = lo + rng.gen_range(0..=1);
                    let nhi = hi + rng.gen_range(0..=2);
                    lo = nlo.min(hi - 1);
                    hi = nhi.max(lo + 1);
                }
                for y in lo..hi {
                    cells.insert((x, y));
                }
            }
            if cells.len() <= max_cells {
                if let Ok(p) = OrthoPolygon::new(cells) {
                    return p;
                }
            }
        }
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    fn has(&self, c: Cell) -> bool {
        self.cells.contains(&c)
    }

    fn is_connected(&self) -> bool {
        let start = *self.cells.iter().next().unwrap();
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((x, y)) = queue.pop_front() {
            for n in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if self.has(n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == self.cells.len()
    }

    fn bounds(&self) -> (i64, i64, i64, i64) {
        let xs = self.cells.iter().map(|c| c.0);
        let ys = self.cells.iter().map(|c| c.1);
        (
            xs.clone().min().unwrap(),
            xs.max().unwrap(),
            ys.clone().min().unwrap(),
            ys.max().unwrap(),
        )
    }

    fn has_pinch(&self) -> bool {
        let (x0, x1, y0, y1) = self.bounds();
        for x in x0 - 1..=x1 {
            for y in y0 - 1..=y1 {
                let q = [
                    self.has((x, y)),
                    self.has((x + 1, y)),
                    self.has((x, y + 1)),
                    self.has((x + 1, y + 1)),
                ];
                if (q == [true, false, false, true]) || (q == [false, true, true, false]) {
                    return true;
                }
            }
        }
        false
    }

    fn has_hole(&self) -> bool {
        let (x0, x1, y0, y1) = self.bounds();
        let inside = |(x, y): Cell| x >= x0 - 1 && x <= x1 + 1 && y >= y0 - 1 && y <= y1 + 1;
        let total = ((x1 - x0 + 3) * (y1 - y0 + 3)) as usize - self.cells.len();
        let start = (x0 - 1, y0 - 1);
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((x, y)) = queue.pop_front() {
            for n in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if inside(n) && !self.has(n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() != total
    }

    /// Maximal horizontal runs `(y, x_first, x_last)`.
    pub fn row_runs(&self) -> Vec<(i64, i64, i64)> {
        let mut out = Vec::new();
        let mut rows: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for &(x, y) in &self.cells {
            rows.entry(y).or_default().push(x);
        }
        for (y, xs) in rows {
            let mut start = xs[0];
            for w in xs.windows(2) {
                if w[1] != w[0] + 1 {
                    out.push((y, start, w[0]));
                    start = w[1];
                }
            }
            out.push((y, start, *xs.last().unwrap()));
        }
        out
    }

    /// Maximal vertical runs `(x, y_first, y_last)`.
    pub fn column_runs(&self) -> Vec<(i64, i64, i64)> {
        let t = OrthoPolygon {
            cells: self.cells.iter().map(|&(x, y)| (y, x)).collect(),
        };
        t.row_runs()
    }

    /// Cells around lattice point `p`: lower-left, lower-right, upper-left, upper-right.
    fn around(&self, (x, y): Pt) -> [bool; 4] {
        [
            self.has((x - 1, y - 1)),
            self.has((x, y - 1)),
            self.has((x - 1, y)),
            self.has((x, y)),
        ]
    }

    fn is_interior(&self, p: Pt) -> bool {
        self.around(p).iter().all(|&b| b)
    }

    pub fn concave_corners(&self) -> Vec<Corner> {
        let (x0, x1, y0, y1) = self.bounds();
        let mut out = Vec::new();
        for x in x0..=x1 + 1 {
            for y in y0..=y1 + 1 {
                let a = self.around((x, y));
                if a.iter().filter(|&&b| b).count() != 3 {
                    continue;
                }
                let missing = a.iter().position(|&b| !b).unwrap();
                // missing cell on the left (index 0, 2) means step right
                let dx = if missing % 2 == 0 { 1 } else { -1 };
                let dy = if missing < 2 { 1 } else { -1 };
                out.push(Corner { at: (x, y), dx, dy });
            }
        }
        out
    }

    /// Chords between concave corners that resolve both of them.
    pub fn good_segments(&self) -> Vec<GridSegment> {
        let corners = self.concave_corners();
        let by_point: HashMap<Pt, Corner> = corners.iter().map(|c| (c.at, *c)).collect();
        let mut out = BTreeSet::new();
        for c in &corners {
            for (sx, sy) in [(c.dx, 0), (0, c.dy)] {
                let mut p = c.at;
                loop {
                    p = (p.0 + sx, p.1 + sy);
                    if self.is_interior(p) {
                        continue;
                    }
                    if let Some(d) = by_point.get(&p) {
                        let back = if sx != 0 { d.dx == -sx } else { d.dy == -sy };
                        if back && self.edge_inside(c.at, p) {
                            out.insert(GridSegment::new(c.at, p));
                        }
                    }
                    break;
                }
            }
        }
        out.into_iter().collect()
    }

    /// Whether every unit step between `p` and `q` has cells on both sides.
    fn edge_inside(&self, p: Pt, q: Pt) -> bool {
        let s = GridSegment::new(p, q);
        let pts: Vec<Pt> = s.points().collect();
        pts.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            if a.1 == b.1 {
                let x = a.0.min(b.0);
                self.has((x, a.1 - 1)) && self.has((x, a.1))
            } else {
                let y = a.1.min(b.1);
                self.has((a.0 - 1, y)) && self.has((a.0, y))
            }
        })
    }

    /// Minimum rectangulation from a maximum independent set of good
    /// segments plus one shot per remaining corner.
    pub fn exact(&self) -> Result<OrthoSolution> {
        let good = self.good_segments();
        let (h, v): (Vec<usize>, Vec<usize>) =
            (0..good.len()).partition(|&i| good[i].is_horizontal());
        let adj: Vec<Vec<usize>> = h
            .iter()
            .map(|&i| {
                (0..v.len())
                    .filter(|&j| good[i].conflicts(&good[v[j]]))
                    .collect()
            })
            .collect();
        let (in_left, in_right) = maximum_independent_set(h.len(), v.len(), &adj);
        let mut chosen: Vec<GridSegment> = Vec::new();
        chosen.extend(
            h.iter()
                .zip(&in_left)
                .filter(|(_, &k)| k)
                .map(|(&i, _)| good[i]),
        );
        chosen.extend(
            v.iter()
                .zip(&in_right)
                .filter(|(_, &k)| k)
                .map(|(&i, _)| good[i]),
        );
        let mut cut = Cuts::default();
        for s in &chosen {
            cut.add(s);
        }
        let mut segments = chosen;
        for c in self.concave_corners() {
            if !cut.resolves(&c) {
                let s = self.shoot(&c, &cut);
                cut.add(&s);
                segments.push(s);
            }
        }
        self.finish(segments, &cut)
    }

    /// One horizontal shot per unresolved corner, in corner order.
    pub fn greedy(&self) -> Result<OrthoSolution> {
        let mut cut = Cuts::default();
        let mut segments = Vec::new();
        for c in self.concave_corners() {
            if !cut.resolves(&c) {
                let s = self.shoot(&c, &cut);
                cut.add(&s);
                segments.push(s);
            }
        }
        self.finish(segments, &cut)
    }

    fn shoot(&self, c: &Corner, cut: &Cuts) -> GridSegment {
        let mut p = c.at;
        loop {
            p = (p.0 + c.dx, p.1);
            if !self.is_interior(p) || cut.points.contains(&p) {
                return GridSegment::new(c.at, p);
            }
        }
    }

    fn finish(&self, segments: Vec<GridSegment>, cut: &Cuts) -> Result<OrthoSolution> {
        let rects = self.rectangles_of(cut)?;
        if rects != segments.len() + 1 {
            return Err(Error::InvalidPartition(format!(
                "orthogonal rectangulation with {} segments has {} rectangles",
                segments.len(),
                rects
            )));
        }
        Ok(OrthoSolution {
            segments,
            rectangles: rects,
        })
    }

    /// Number of pieces after cutting; each piece must be a rectangle.
    fn rectangles_of(&self, cut: &Cuts) -> Result<usize> {
        let mut seen: HashSet<Cell> = HashSet::new();
        let mut count = 0;
        for &start in &self.cells {
            if seen.contains(&start) {
                continue;
            }
            count += 1;
            let mut comp = vec![start];
            seen.insert(start);
            let mut i = 0;
            while i < comp.len() {
                let (x, y) = comp[i];
                i += 1;
                let steps = [
                    ((x + 1, y), cut.vertical.contains(&(x + 1, y))),
                    ((x - 1, y), cut.vertical.contains(&(x, y))),
                    ((x, y + 1), cut.horizontal.contains(&(x, y + 1))),
                    ((x, y - 1), cut.horizontal.contains(&(x, y))),
                ];
                for (n, blocked) in steps {
                    if !blocked && self.has(n) && seen.insert(n) {
                        comp.push(n);
                    }
                }
            }
            let xs = comp.iter().map(|c| c.0);
            let ys = comp.iter().map(|c| c.1);
            let w = xs.clone().max().unwrap() - xs.min().unwrap() + 1;
            let h = ys.clone().max().unwrap() - ys.min().unwrap() + 1;
            if (w * h) as usize != comp.len() {
                return Err(Error::InvalidPartition("a piece is not a rectangle".into()));
            }
        }
        Ok(count)
    }

    /// Cell-level minimum number of rectangles.
    pub fn brute_force_min(&self) -> Result<usize> {
        if self.cells.len() > 64 {
            return Err(Error::TooLarge {
                size: self.cells.len(),
                cap: 64,
            });
        }
        let index: HashMap<Cell, usize> = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut cands = Vec::new();
        for &(x, y) in &self.cells {
            let mut w = 1;
            while self.has((x + w - 1, y)) {
                let mut h = 1;
                loop {
                    let mut mask = 0u64;
                    let mut ok = true;
                    'outer: for dx in 0..w {
                        for dy in 0..h {
                            match index.get(&(x + dx, y + dy)) {
                                Some(&i) => mask |= 1 << i,
                                None => {
                                    ok = false;
                                    break 'outer;
                                }
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                    cands.push(mask);
                    h += 1;
                }
                w += 1;
            }
        }
        ExactCover::new(self.cells.len(), cands)
            .minimum()
            .ok_or_else(|| Error::InvalidPartition("no rectangle partition".into()))
    }
}

#[derive(Default)]
struct Cuts {
    /// Unit edge from `(x, y)` to `(x + 1, y)`.
    horizontal: HashSet<Pt>,
    /// Unit edge from `(x, y)` to `(x, y + 1)`.
    vertical: HashSet<Pt>,
    points: HashSet<Pt>,
}

impl Cuts {
    fn add(&mut self, s: &GridSegment) {
        let pts: Vec<Pt> = s.points().collect();
        for w in pts.windows(2) {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            if a.1 == b.1 {
                self.horizontal.insert(a);
            } else {
                self.vertical.insert(a);
            }
        }
        self.points.extend(pts);
    }

    fn resolves(&self, c: &Corner) -> bool {
        let (x, y) = c.at;
        let h = if c.dx > 0 { (x, y) } else { (x - 1, y) };
        let v = if c.dy > 0 { (x, y) } else { (x, y - 1) };
        self.horizontal.contains(&h) || self.vertical.contains(&v)
    }
}

/// Maximum independent set of a bipartite graph via Kuhn matching and
/// König's theorem. Returns membership flags for both sides.
pub fn maximum_independent_set(
    left: usize,
    right: usize,
    adj: &[Vec<usize>],
) -> (Vec<bool>, Vec<bool>) {
    let mut match_r: Vec<Option<usize>> = vec![None; right];
    let mut match_l: Vec<Option<usize>> = vec![None; left];
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        match_r: &mut [Option<usize>],
        match_l: &mut [Option<usize>],
    ) -> bool {
        for &w in &adj[u] {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if match_r[w].is_none() || augment(match_r[w].unwrap(), adj, seen, match_r, match_l) {
                match_r[w] = Some(u);
                match_l[u] = Some(w);
                return true;
            }
        }
        false
    }
    for u in 0..left {
        let mut seen = vec![false; right];
        augment(u, adj, &mut seen, &mut match_r, &mut match_l);
    }
    // alternating reachability from unmatched left vertices
    let mut zl = vec![false; left];
    let mut zr = vec![false; right];
    let mut queue: VecDeque<usize> = (0..left).filter(|&u| match_l[u].is_none()).collect();
    for &u in &queue {
        zl[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !zr[w] {
                zr[w] = true;
                if let Some(m) = match_r[w] {
                    if !zl[m] {
                        zl[m] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
    }
    // cover = (L \ Z) + (R & Z); independent set is its complement
    (zl, zr.iter().map(|&z| !z).collect())
}
