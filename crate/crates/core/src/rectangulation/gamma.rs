//! The cubic helper graph of a rectangulation and its dual.

use std::collections::{BTreeSet, HashSet};

use super::Rectangulation;
use crate::map::{edge_of, twin, HalfEdgeMap};
use crate::net::{DualNet, FaceKind, VertexClass};

/// What a face of the helper graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceTag {
    Rect(usize),
    /// Boundary-hole, by net face id.
    BoundaryHole(usize),
    /// Vertex-hole, by net vertex id.
    VertexHole(usize),
}

impl FaceTag {
    pub fn is_hole(self) -> bool {
        !matches!(self, FaceTag::Rect(_))
    }
}

#[derive(Debug, Clone)]
pub struct GammaGraph {
    pub map: HalfEdgeMap,
    /// Tag of the face on the left of every half-edge.
    pub left_tag: Vec<FaceTag>,
    /// Segment carried by every edge (`None` for border pieces).
    pub segment_of: Vec<Option<usize>>,
    /// Closed chains of degree-2 vertices that vanished entirely.
    pub free_cycles: usize,
    /// Whether tags were consistent around every face before suppression.
    pub tags_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub s: usize,
    pub r: usize,
    pub h: usize,
    pub cubic: bool,
    pub counts_ok: bool,
    pub tags_ok: bool,
    pub dual_triangulated: bool,
    pub holes_independent: bool,
    pub gamma_simple: bool,
    pub dual_simple: bool,
    /// Smallest number of helper-graph edges around a hole face.
    pub min_hole_incidence: Option<usize>,
    /// `S = 0`: the helper graph has no vertices.
    pub degenerate: bool,
}

impl GammaReport {
    /// Whether the simplicity claim holds: Gamma and its dual are simple
    /// whenever every hole meets three segments. Not part of [`Self::passed`];
    /// an end rectangle bounded by a single segment breaks it.
    pub fn simplicity_ok(&self) -> bool {
        match self.min_hole_incidence {
            Some(m) if m >= 3 => self.gamma_simple && self.dual_simple,
            _ => true,
        }
    }

    pub fn passed(&self) -> bool {
        if self.degenerate {
            return self.r == 1 && self.h == 1;
        }
        self.cubic
            && self.counts_ok
            && self.tags_ok
            && self.dual_triangulated
            && self.holes_independent
    }
}

struct Builder {
    rotation: Vec<Vec<usize>>,
    left_tag: Vec<FaceTag>,
    segment: Vec<Option<usize>>,
}

impl Builder {
    fn new_edge(&mut self, forward: FaceTag, backward: FaceTag, segment: Option<usize>) -> usize {
        let e = self.segment.len();
        self.left_tag.push(forward);
        self.left_tag.push(backward);
        self.segment.push(segment);
        e
    }

    fn new_vertex(&mut self, rot: Vec<usize>) {
        self.rotation.push(rot);
    }
}

fn net_face_tag(net: &DualNet, rect: &Rectangulation, f: usize) -> FaceTag {
    match net.face_kind[f] {
        FaceKind::Square(c) => FaceTag::Rect(rect.rect_of[c]),
        FaceKind::Hole(_) => FaceTag::BoundaryHole(f),
    }
}

/// Builds the helper graph: border and segment edges, split regular
/// crossings, paths at border vertices, cycles at vertex-holes, with
/// degree-2 vertices suppressed.
pub fn build_gamma(net: &DualNet, rect: &Rectangulation) -> GammaGraph {
    let ne = net.num_edges();
    let mut segment_of = vec![None; ne];
    for (i, s) in rect.cutset.segments.iter().enumerate() {
        for e in s.edges() {
            segment_of[e] = Some(i);
        }
    }
    let in_h = |e: usize| net.is_border_edge(e) || segment_of[e].is_some();
    let h_edges: Vec<usize> = (0..ne).filter(|&e| in_h(e)).collect();
    let mut index = vec![usize::MAX; ne];
    let mut b = Builder {
        rotation: Vec::new(),
        left_tag: Vec::new(),
        segment: Vec::new(),
    };
    for &e in &h_edges {
        index[e] = b.new_edge(
            net_face_tag(net, rect, net.map.face_of(2 * e)),
            net_face_tag(net, rect, net.map.face_of(2 * e + 1)),
            segment_of[e],
        );
    }
    // net half-edge of an H-edge to its builder half-edge
    let hb = |h: usize| 2 * index[edge_of(h)] + (h & 1);

    for v in 0..net.num_vertices() {
        let rot = net.map.rotation(v);
        let positions: Vec<usize> = (0..rot.len()).filter(|&i| in_h(edge_of(rot[i]))).collect();
        let d = positions.len();
        if d == 0 {
            continue;
        }
        match net.class[v] {
            VertexClass::Regular if d == 4 => {
                let hs: Vec<usize> = positions.iter().map(|&i| rot[i]).collect();
                // the through segment owns an opposite pair
                let through = |a: usize, c: usize| {
                    segment_of[edge_of(hs[a])].is_some()
                        && segment_of[edge_of(hs[a])] == segment_of[edge_of(hs[c])]
                };
                let shift = if through(0, 2) { 0 } else { 1 };
                let [a, bb, a2, b2] = [0, 1, 2, 3].map(|k| hs[(k + shift) % 4]);
                let link = b.new_edge(
                    net_face_tag(net, rect, net.map.face_of(b2)),
                    net_face_tag(net, rect, net.map.face_of(bb)),
                    segment_of[edge_of(a)],
                );
                b.new_vertex(vec![hb(a), hb(bb), 2 * link]);
                b.new_vertex(vec![hb(a2), hb(b2), 2 * link + 1]);
            }
            VertexClass::Regular => {
                b.new_vertex(positions.iter().map(|&i| hb(rot[i])).collect());
            }
            VertexClass::Border | VertexClass::VertexHole => {
                let border = net.class[v] == VertexClass::Border;
                // start right after the gap that contains the hole corner
                let hole_gap = if border {
                    (0..d).find_map(|k| {
                        let from = positions[k];
                        let to = positions[(k + 1) % d];
                        let span = (to + rot.len() - from) % rot.len();
                        let span = if span == 0 { rot.len() } else { span };
                        (0..span)
                            .map(|j| net.map.corner_face(v, (from + j) % rot.len()))
                            .find(|&f| !net.is_square_face(f))
                            .map(|f| (k, f))
                    })
                } else {
                    None
                };
                let start = hole_gap.map_or(0, |(k, _)| (k + 1) % d);
                let inner = match hole_gap {
                    Some((_, f)) => FaceTag::BoundaryHole(f),
                    None => FaceTag::VertexHole(v),
                };
                let hs: Vec<usize> = (0..d).map(|k| rot[positions[(start + k) % d]]).collect();
                let links = if border { d - 1 } else { d };
                let first = b.segment.len();
                for k in 0..links {
                    let outer = net_face_tag(net, rect, net.map.face_of(hs[k]));
                    b.new_edge(inner, outer, None);
                }
                for k in 0..d {
                    let mut r = vec![hb(hs[k])];
                    if k < links {
                        r.push(2 * (first + k));
                    }
                    if k > 0 {
                        r.push(2 * (first + k - 1) + 1);
                    } else if !border {
                        r.push(2 * (first + d - 1) + 1);
                    }
                    b.new_vertex(r);
                }
            }
        }
    }

    let raw = HalfEdgeMap::from_rotations(b.rotation);
    let tags_consistent = raw
        .faces()
        .iter()
        .all(|walk| walk.iter().all(|&h| b.left_tag[h] == b.left_tag[walk[0]]));
    suppress(raw, &b.left_tag, &b.segment, tags_consistent)
}

fn suppress(
    raw: HalfEdgeMap,
    tags: &[FaceTag],
    segment: &[Option<usize>],
    tags_consistent: bool,
) -> GammaGraph {
    let kept: Vec<usize> = (0..raw.num_vertices())
        .filter(|&v| raw.degree(v) != 2)
        .collect();
    let mut new_id = vec![usize::MAX; raw.num_vertices()];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v] = i;
    }
    let mut gamma_half = vec![usize::MAX; raw.num_half_edges()];
    let mut left_tag = Vec::new();
    let mut segment_of = Vec::new();
    let mut used = vec![false; raw.num_half_edges()];
    for &u in &kept {
        for &h in raw.rotation(u) {
            if gamma_half[h] != usize::MAX {
                continue;
            }
            let mut cur = h;
            let mut seg = segment[edge_of(h)];
            used[h] = true;
            used[twin(h)] = true;
            while raw.degree(raw.head(cur)) == 2 {
                cur = raw.ccw_next(twin(cur));
                used[cur] = true;
                used[twin(cur)] = true;
                seg = seg.or(segment[edge_of(cur)]);
            }
            let k = segment_of.len();
            gamma_half[h] = 2 * k;
            gamma_half[twin(cur)] = 2 * k + 1;
            left_tag.push(tags[h]);
            left_tag.push(tags[twin(cur)]);
            segment_of.push(seg);
        }
    }
    // closed chains that never meet a kept vertex
    let mut free_cycles = 0;
    for h in 0..raw.num_half_edges() {
        if used[h] {
            continue;
        }
        free_cycles += 1;
        let mut cur = h;
        loop {
            used[cur] = true;
            used[twin(cur)] = true;
            cur = raw.ccw_next(twin(cur));
            if used[cur] {
                break;
            }
        }
    }
    let rotation: Vec<Vec<usize>> = kept
        .iter()
        .map(|&u| raw.rotation(u).iter().map(|&h| gamma_half[h]).collect())
        .collect();
    GammaGraph {
        map: HalfEdgeMap::from_rotations(rotation),
        left_tag,
        segment_of,
        free_cycles,
        tags_consistent,
    }
}

/// Plane dual: vertex per face, rotation along the face walk.
pub fn dual_map(map: &HalfEdgeMap) -> HalfEdgeMap {
    // dual half-edge h leaves face_of(h); faces are walked with the face on
    // the left, so reversing each walk gives a counterclockwise rotation
    let rotation = map
        .faces()
        .iter()
        .map(|walk| walk.iter().rev().copied().collect())
        .collect();
    HalfEdgeMap::from_rotations(rotation)
}

impl GammaGraph {
    pub fn report(&self, rect: &Rectangulation) -> GammaReport {
        let m = &self.map;
        let (v, e) = (m.num_vertices(), m.num_edges());
        let f = if v == 0 {
            self.free_cycles + 1
        } else {
            m.num_faces()
        };
        let degenerate = rect.s == 0;
        let cubic = (0..v).all(|x| m.degree(x) == 3);
        let counts_ok = v == 2 * rect.s && e == 3 * rect.s && f == rect.r + rect.h;

        let face_tags: Vec<FaceTag> = m.faces().iter().map(|w| self.left_tag[w[0]]).collect();
        let consistent = m
            .faces()
            .iter()
            .all(|w| w.iter().all(|&h| self.left_tag[h] == self.left_tag[w[0]]));
        let distinct: BTreeSet<FaceTag> = face_tags.iter().copied().collect();
        let rects = distinct.iter().filter(|t| !t.is_hole()).count();
        let holes = distinct.iter().filter(|t| t.is_hole()).count();
        let tags_ok = self.tags_consistent
            && consistent
            && (v == 0
                || (distinct.len() == face_tags.len() && rects == rect.r && holes == rect.h));

        let dual = dual_map(m);
        let dual_triangulated = v > 0 && dual.faces().iter().all(|w| w.len() == 3);
        let holes_independent =
            (0..e).all(|x| !(self.left_tag[2 * x].is_hole() && self.left_tag[2 * x + 1].is_hole()));

        let gamma_simple = is_simple(m);
        let dual_simple = is_simple(&dual);
        let min_hole_incidence = m
            .faces()
            .iter()
            .filter(|w| self.left_tag[w[0]].is_hole())
            .map(Vec::len)
            .min();
        GammaReport {
            vertices: v,
            edges: e,
            faces: f,
            s: rect.s,
            r: rect.r,
            h: rect.h,
            cubic,
            counts_ok,
            tags_ok,
            dual_triangulated,
            holes_independent,
            gamma_simple,
            dual_simple,
            min_hole_incidence,
            degenerate,
        }
    }
}

/// No loops and no parallel edges.
pub fn is_simple(m: &HalfEdgeMap) -> bool {
    let mut seen = HashSet::new();
    (0..m.num_edges()).all(|e| {
        let (a, b) = (m.origin(2 * e), m.head(2 * e));
        a != b && seen.insert((a.min(b), a.max(b)))
    })
}

/// Convenience: build and check in one call.
pub fn gamma_checks(net: &DualNet, rect: &Rectangulation) -> GammaReport {
    build_gamma(net, rect).report(rect)
}
