//! Cut-sets, saturation, rectangulations, and bundlings.

mod gamma;
mod greedy;

pub use gamma::{build_gamma, dual_map, gamma_checks, is_simple, FaceTag, GammaGraph, GammaReport};
pub use greedy::{greedy_rectangulate, VertexOrder};

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::arrangement::Color;
use crate::error::{Error, Result};
use crate::map::{edge_of, twin};
use crate::net::{DualNet, VertexClass};

/// A straight path of the net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Directed net half-edges in path order.
    pub half_edges: Vec<usize>,
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn new(net: &DualNet, half_edges: Vec<usize>) -> Segment {
        assert!(!half_edges.is_empty(), "empty segment");
        let start = net.map.origin(half_edges[0]);
        let end = net.map.head(*half_edges.last().unwrap());
        Segment {
            half_edges,
            start,
            end,
        }
    }

    pub fn len(&self) -> usize {
        self.half_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.half_edges.iter().map(|&h| edge_of(h))
    }

    /// Vertices strictly between the two ends.
    pub fn interior_vertices<'a>(&'a self, net: &'a DualNet) -> impl Iterator<Item = usize> + 'a {
        self.half_edges[..self.half_edges.len() - 1]
            .iter()
            .map(move |&h| net.map.head(h))
    }

    pub fn ends(&self) -> [usize; 2] {
        [self.start, self.end]
    }

    /// Color shared by the segment's edges, if uniform.
    pub fn color(&self, net: &DualNet) -> Option<Color> {
        let first = net.edge_color[edge_of(self.half_edges[0])];
        self.edges()
            .all(|e| net.edge_color[e] == first)
            .then_some(first)
            .flatten()
    }

    /// Canonical orientation: starts at the smaller of the two half-edge choices.
    pub fn canonical(&self, net: &DualNet) -> Segment {
        let reversed: Vec<usize> = self.half_edges.iter().rev().map(|&h| twin(h)).collect();
        if reversed[0] < self.half_edges[0] {
            Segment::new(net, reversed)
        } else {
            self.clone()
        }
    }
}

/// Edge and interior-vertex occupancy of a set of segments.
#[derive(Debug, Clone)]
pub struct Coverage {
    pub edge_segment: Vec<Option<usize>>,
    pub interior_count: Vec<usize>,
    count: usize,
}

impl Coverage {
    pub fn new(net: &DualNet) -> Coverage {
        Coverage {
            edge_segment: vec![None; net.num_edges()],
            interior_count: vec![0; net.num_vertices()],
            count: 0,
        }
    }

    pub fn of(net: &DualNet, segments: &[Segment]) -> Coverage {
        let mut c = Coverage::new(net);
        for s in segments {
            c.add(net, s);
        }
        c
    }

    pub fn add(&mut self, net: &DualNet, s: &Segment) {
        for e in s.edges() {
            self.edge_segment[e] = Some(self.count);
        }
        for v in s.interior_vertices(net) {
            self.interior_count[v] += 1;
        }
        self.count += 1;
    }

    pub fn edge_mask(&self) -> Vec<bool> {
        self.edge_segment.iter().map(Option::is_some).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentEnd {
    VertexHole(usize),
    Border(usize),
    /// Ends inside segment `segment` at `vertex`.
    Interior {
        vertex: usize,
        segment: usize,
    },
    /// Not a valid end; only produced for malformed input.
    Dangling(usize),
}

/// A set of edge-disjoint segments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CutSet {
    pub segments: Vec<Segment>,
}

impl CutSet {
    pub fn new(segments: Vec<Segment>) -> CutSet {
        CutSet { segments }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn edge_mask(&self, net: &DualNet) -> Vec<bool> {
        let mut mask = vec![false; net.num_edges()];
        for e in self.segments.iter().flat_map(Segment::edges) {
            mask[e] = true;
        }
        mask
    }

    pub fn coverage(&self, net: &DualNet) -> Coverage {
        Coverage::of(net, &self.segments)
    }

    /// End descriptors for both ends of every segment.
    pub fn end_kinds(&self, net: &DualNet) -> Vec<[SegmentEnd; 2]> {
        let mut interior_of: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, s) in self.segments.iter().enumerate() {
            for v in s.interior_vertices(net) {
                interior_of.entry(v).or_default().push(i);
            }
        }
        self.segments
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.ends().map(|v| match net.class[v] {
                    VertexClass::VertexHole => SegmentEnd::VertexHole(v),
                    VertexClass::Border => SegmentEnd::Border(v),
                    VertexClass::Regular => interior_of
                        .get(&v)
                        .and_then(|segs| segs.iter().find(|&&j| j != i))
                        .map_or(SegmentEnd::Dangling(v), |&j| SegmentEnd::Interior {
                            vertex: v,
                            segment: j,
                        }),
                })
            })
            .collect()
    }

    /// Checks the cut-set conditions: straight, interior, edge-disjoint,
    /// and every end on a hole or inside another segment.
    pub fn validate(&self, net: &DualNet) -> Result<()> {
        let mut used = vec![false; net.num_edges()];
        for (i, s) in self.segments.iter().enumerate() {
            for (k, &h) in s.half_edges.iter().enumerate() {
                let e = edge_of(h);
                if net.is_border_edge(e) {
                    return Err(Error::NotCutSet(format!(
                        "segment {i} uses border edge {e}"
                    )));
                }
                if used[e] {
                    return Err(Error::NotCutSet(format!("edge {e} used twice")));
                }
                used[e] = true;
                if k + 1 < s.half_edges.len() {
                    let next = s.half_edges[k + 1];
                    if net.straight_continuation(h) != Some(next) {
                        return Err(Error::NotCutSet(format!(
                            "segment {i} is not straight at edge {e}"
                        )));
                    }
                }
            }
        }
        for (i, ends) in self.end_kinds(net).iter().enumerate() {
            for end in ends {
                if let SegmentEnd::Dangling(v) = end {
                    return Err(Error::NotCutSet(format!(
                        "segment {i} dangles at vertex {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Hole touched by a segment end at `v`, if any: vertex-holes by vertex id,
/// boundary-holes offset by the vertex count.
pub fn hole_at(net: &DualNet, v: usize) -> Option<usize> {
    match net.class[v] {
        VertexClass::Regular => None,
        VertexClass::VertexHole => Some(v),
        VertexClass::Border => (0..net.degree(v))
            .map(|i| net.map.corner_face(v, i))
            .find(|&f| !net.is_square_face(f))
            .map(|f| net.num_vertices() + f),
    }
}

/// Segment ends per hole, vertex-holes first, then boundary-hole faces.
pub fn hole_incidences(net: &DualNet, cutset: &CutSet) -> Vec<usize> {
    let mut slot = vec![usize::MAX; net.num_vertices() + net.map.num_faces()];
    let mut count = Vec::new();
    for v in net.vertex_holes() {
        slot[v] = count.len();
        count.push(0);
    }
    for f in net.hole_faces() {
        slot[net.num_vertices() + f] = count.len();
        count.push(0);
    }
    for s in &cutset.segments {
        for v in s.ends() {
            if let Some(k) = hole_at(net, v) {
                count[slot[k]] += 1;
            }
        }
    }
    count
}

/// Whether the edge set saturates `v`.
pub fn saturates(net: &DualNet, edges: &[bool], v: usize) -> bool {
    net.relative_exponent_mask(v, edges) == 0
}

/// Whether a cut-set saturates every vertex.
pub fn is_saturating(net: &DualNet, cutset: &CutSet) -> bool {
    let mask = cutset.edge_mask(net);
    (0..net.num_vertices()).all(|v| saturates(net, &mask, v))
}

/// A rectangle: squares (crossing indices) with their grid coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rectangle {
    pub crossings: Vec<usize>,
    /// `(column, row)` per crossing, normalized to start at 0.
    pub labels: Vec<(usize, usize)>,
    pub columns: usize,
    pub rows: usize,
}

#[derive(Debug, Clone)]
pub struct Rectangulation {
    /// Rectangle index of every crossing.
    pub rect_of: Vec<usize>,
    pub rectangles: Vec<Rectangle>,
    pub cutset: CutSet,
    pub r: usize,
    pub s: usize,
    pub h: usize,
}

impl Rectangulation {
    /// `R - S + H`.
    pub fn euler(&self) -> i64 {
        self.r as i64 - self.s as i64 + self.h as i64
    }
}

const DIRS: [(i64, i64); 4] = [(0, -1), (1, 0), (0, 1), (-1, 0)];

/// Grid labeling of a set of square faces, moving across edges accepted by
/// `internal`. Returns `None` when the set is not a rectangle.
pub fn grid_label(
    net: &DualNet,
    faces: &[usize],
    internal: &dyn Fn(usize) -> bool,
) -> Option<Rectangle> {
    let member: HashMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut coord: Vec<Option<(i64, i64, usize)>> = vec![None; faces.len()];
    coord[0] = Some((0, 0, 0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let f = faces[i];
        let (x, y, off) = coord[i].unwrap();
        let walk = net.map.face(f);
        if walk.len() != 4 {
            return None;
        }
        for (side, &h) in walk.iter().enumerate() {
            if !internal(edge_of(h)) {
                continue;
            }
            let g = net.map.face_of(twin(h));
            let &j = member.get(&g)?;
            let entry = net.map.face(g).iter().position(|&x| x == twin(h))?;
            let dir = (side + 4 - off) % 4;
            let (dx, dy) = DIRS[dir];
            let goff = (entry + 4 - (dir + 2) % 4) % 4;
            let target = (x + dx, y + dy, goff);
            match coord[j] {
                None => {
                    coord[j] = Some(target);
                    queue.push_back(j);
                }
                Some(c) if c == target => {}
                Some(_) => return None,
            }
        }
    }
    let coords: Vec<(i64, i64, usize)> = coord.into_iter().collect::<Option<Vec<_>>>()?;
    let minx = coords.iter().map(|c| c.0).min()?;
    let maxx = coords.iter().map(|c| c.0).max()?;
    let miny = coords.iter().map(|c| c.1).min()?;
    let maxy = coords.iter().map(|c| c.1).max()?;
    let columns = (maxx - minx + 1) as usize;
    let rows = (maxy - miny + 1) as usize;
    if columns * rows != faces.len() {
        return None;
    }
    let at: HashMap<(i64, i64), usize> = coords
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.0, c.1), i))
        .collect();
    if at.len() != faces.len() {
        return None;
    }
    // grid neighbours must share an internal edge
    for (i, &(x, y, off)) in coords.iter().enumerate() {
        let walk = net.map.face(faces[i]);
        for (dir, &(dx, dy)) in DIRS.iter().enumerate() {
            if let Some(&j) = at.get(&(x + dx, y + dy)) {
                let h = walk[(dir + off) % 4];
                if !internal(edge_of(h)) || net.map.face_of(twin(h)) != faces[j] {
                    return None;
                }
            }
        }
    }
    let crossings = faces
        .iter()
        .map(|&f| net.square_crossing(f).expect("square face"))
        .collect();
    let labels = coords
        .iter()
        .map(|c| ((c.0 - minx) as usize, (c.1 - miny) as usize))
        .collect();
    Some(Rectangle {
        crossings,
        labels,
        columns,
        rows,
    })
}

/// Rectangles from a partition of squares (rectangle id per crossing).
fn rectangles_of_partition(net: &DualNet, rect_of: &[usize]) -> Result<Vec<Rectangle>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (c, &r) in rect_of.iter().enumerate() {
        groups.entry(r).or_default().push(net.square_face[c]);
    }
    let square_rect = |f: usize| net.square_crossing(f).map(|c| rect_of[c]);
    groups
        .into_values()
        .map(|faces| {
            let rid = square_rect(faces[0]);
            let internal = |e: usize| {
                !net.is_border_edge(e)
                    && square_rect(net.map.face_of(2 * e)) == rid
                    && square_rect(net.map.face_of(2 * e + 1)) == rid
            };
            let mut crossings: Vec<usize> = faces
                .iter()
                .map(|&f| net.square_crossing(f).unwrap())
                .collect();
            crossings.sort_unstable();
            grid_label(net, &faces, &internal).ok_or(Error::NotRectangle(crossings))
        })
        .collect()
}

/// Rectangles cut out by a saturating cut-set.
pub fn extract_rectangulation(net: &DualNet, cutset: &CutSet) -> Result<Rectangulation> {
    cutset.validate(net)?;
    let mask = cutset.edge_mask(net);
    if let Some(v) = (0..net.num_vertices()).find(|&v| !saturates(net, &mask, v)) {
        return Err(Error::NotSaturating(v));
    }
    let nc = net.num_squares();
    let mut rect_of = vec![usize::MAX; nc];
    let mut count = 0;
    for c in 0..nc {
        if rect_of[c] != usize::MAX {
            continue;
        }
        rect_of[c] = count;
        let mut stack = vec![net.square_face[c]];
        while let Some(f) = stack.pop() {
            for &h in net.map.face(f) {
                let e = edge_of(h);
                if net.is_border_edge(e) || mask[e] {
                    continue;
                }
                let g = net.map.face_of(twin(h));
                if let Some(d) = net.square_crossing(g) {
                    if rect_of[d] == usize::MAX {
                        rect_of[d] = count;
                        stack.push(g);
                    }
                }
            }
        }
        count += 1;
    }
    let rectangles = rectangles_of_partition(net, &rect_of)?;
    // a segment edge inside one rectangle means the cut-set does not delimit it
    for e in (0..net.num_edges()).filter(|&e| mask[e]) {
        let a = net.square_crossing(net.map.face_of(2 * e));
        let b = net.square_crossing(net.map.face_of(2 * e + 1));
        if let (Some(a), Some(b)) = (a, b) {
            if rect_of[a] == rect_of[b] {
                let mut crossings: Vec<usize> =
                    (0..nc).filter(|&c| rect_of[c] == rect_of[a]).collect();
                crossings.sort_unstable();
                return Err(Error::NotRectangle(crossings));
            }
        }
    }
    let rect = Rectangulation {
        rect_of,
        r: rectangles.len(),
        rectangles,
        s: cutset.len(),
        h: net.hole_count(),
        cutset: cutset.clone(),
    };
    if rect.euler() != 2 {
        return Err(Error::InvalidPartition(format!(
            "R - S + H = {} - {} + {} != 2",
            rect.r, rect.s, rect.h
        )));
    }
    Ok(rect)
}

/// Choice of through-pair at a regular vertex whose four edges separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// The opposite pair containing the lowest edge id continues.
    LowestId,
    /// The other pair continues.
    Flipped,
}

/// Separating edges of a partition (rectangle id per crossing).
pub fn separating_edges(net: &DualNet, rect_of: &[usize]) -> Vec<bool> {
    (0..net.num_edges())
        .map(|e| {
            if net.is_border_edge(e) {
                return false;
            }
            match (
                net.square_crossing(net.map.face_of(2 * e)),
                net.square_crossing(net.map.face_of(2 * e + 1)),
            ) {
                (Some(a), Some(b)) => rect_of[a] != rect_of[b],
                _ => false,
            }
        })
        .collect()
}

/// Regular vertices whose four edges all separate.
pub fn ambiguous_vertices(net: &DualNet, rect_of: &[usize]) -> Vec<usize> {
    let sep = separating_edges(net, rect_of);
    (0..net.num_vertices())
        .filter(|&v| net.is_regular(v) && net.map.rotation(v).iter().all(|&h| sep[edge_of(h)]))
        .collect()
}

/// Canonical cut-set delimiting a partition of the squares.
pub fn delimiting_cutset(net: &DualNet, rect_of: &[usize], tie: TieBreak) -> CutSet {
    let sep = separating_edges(net, rect_of);
    let mut covered = vec![false; net.num_edges()];
    let continues = |h: usize, covered: &[bool]| -> Option<usize> {
        let next = net.straight_continuation(h)?;
        let ne = edge_of(next);
        if !sep[ne] || covered[ne] {
            return None;
        }
        let w = net.map.head(h);
        let rot = net.map.rotation(w);
        if rot.iter().all(|&x| sep[edge_of(x)]) {
            let lowest = rot.iter().map(|&x| edge_of(x)).min().unwrap();
            let in_pair = edge_of(h) == lowest || ne == lowest;
            let through = match tie {
                TieBreak::LowestId => in_pair,
                TieBreak::Flipped => !in_pair,
            };
            if !through {
                return None;
            }
        }
        Some(next)
    };
    let mut segments = Vec::new();
    for e in 0..net.num_edges() {
        if !sep[e] || covered[e] {
            continue;
        }
        covered[e] = true;
        let mut forward = vec![2 * e];
        while let Some(next) = continues(*forward.last().unwrap(), &covered) {
            covered[edge_of(next)] = true;
            forward.push(next);
        }
        let mut backward = vec![2 * e + 1];
        while let Some(next) = continues(*backward.last().unwrap(), &covered) {
            covered[edge_of(next)] = true;
            backward.push(next);
        }
        let mut path: Vec<usize> = backward[1..].iter().rev().map(|&h| twin(h)).collect();
        path.extend(forward);
        segments.push(Segment::new(net, path));
    }
    CutSet::new(segments)
}

/// Rectangulation of a given partition of squares, with its delimiting cut-set.
pub fn rectangulation_from_partition(net: &DualNet, rect_of: &[usize]) -> Result<Rectangulation> {
    if rect_of.len() != net.num_squares() {
        return Err(Error::InvalidPartition(
            "one rectangle id per crossing required".into(),
        ));
    }
    // renumber ids densely by first appearance
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let dense: Vec<usize> = rect_of
        .iter()
        .map(|&r| {
            let n = ids.len();
            *ids.entry(r).or_insert(n)
        })
        .collect();
    let rectangles = rectangles_of_partition(net, &dense)?;
    let cutset = delimiting_cutset(net, &dense, TieBreak::LowestId);
    let rect = Rectangulation {
        rect_of: dense,
        r: rectangles.len(),
        rectangles,
        s: cutset.len(),
        h: net.hole_count(),
        cutset,
    };
    Ok(rect)
}

/// Assignment of crossings to bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bundling {
    /// Bundle index per crossing index.
    pub bundle_of: Vec<usize>,
    /// Crossing ids per bundle.
    pub bundles: Vec<Vec<i64>>,
}

impl Bundling {
    pub fn count(&self) -> usize {
        self.bundles.len()
    }
}

/// Crossing-to-bundle map of a rectangulation, checked against the
/// planarization: grid neighbours must be joined by a string arc.
pub fn to_bundling(net: &DualNet, rect: &Rectangulation) -> Result<Bundling> {
    let p = net.planarization();
    let arr = &p.arrangement;
    let joined = |a: usize, b: usize| {
        p.map
            .rotation(p.crossing_vertex(a))
            .iter()
            .any(|&h| p.map.head(h) == p.crossing_vertex(b))
    };
    let mut bundles = Vec::with_capacity(rect.rectangles.len());
    for r in &rect.rectangles {
        let at: HashMap<(usize, usize), usize> = r
            .labels
            .iter()
            .zip(&r.crossings)
            .map(|(&l, &c)| (l, c))
            .collect();
        for (&(x, y), &c) in &at {
            for (nx, ny) in [(x + 1, y), (x, y + 1)] {
                if let Some(&d) = at.get(&(nx, ny)) {
                    if !joined(c, d) {
                        return Err(Error::NotRectangle(r.crossings.clone()));
                    }
                }
            }
        }
        let mut ids: Vec<i64> = r.crossings.iter().map(|&c| arr.crossings[c].id).collect();
        ids.sort_unstable();
        bundles.push(ids);
    }
    Ok(Bundling {
        bundle_of: rect.rect_of.clone(),
        bundles,
    })
}

/// JSON document for a bundling run.
#[derive(Debug, Clone, Serialize)]
pub struct BundlingOutput {
    pub bundles: Vec<Vec<i64>>,
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "H")]
    pub h: usize,
    pub t: usize,
}
