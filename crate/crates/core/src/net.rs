//! The dual net of a grounded arrangement and its classifications.
//!
//! Net vertices are the cells of the grounded map that are not enclosed by a
//! boundary curve. A face of the planarization without string endpoints is a
//! single cell; a face with `k` endpoints is cut by its boundary curve into
//! `k` border cells. Net half-edge `h` is dual to planarization half-edge `h`:
//! it starts in the cell on the left of `h` and crosses `h` to the right.
//! The net therefore shares half-edge and edge numbering with the
//! planarization, and net edge `e` is dual to string arc `e`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::arrangement::{
    ground, validate_pseudosegments, Color, GroundedArrangement, Planarization, ValidationReport,
    VertexKind, Violation,
};
use crate::error::{Error, Result};
use crate::map::{edge_of, twin, HalfEdgeMap};
use crate::rectangulation::{Coverage, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// Square around the crossing with this index.
    Square(usize),
    /// Boundary-hole of this boundary curve.
    Hole(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    Regular,
    VertexHole,
    Border,
}

#[derive(Debug, Clone)]
pub struct DualNet {
    pub grounded: GroundedArrangement,
    pub map: HalfEdgeMap,
    /// Face of the planarization containing each cell.
    pub cell_face: Vec<usize>,
    pub face_kind: Vec<FaceKind>,
    /// Net face of every crossing.
    pub square_face: Vec<usize>,
    pub class: Vec<VertexClass>,
    pub border_edge: Vec<bool>,
    pub edge_color: Vec<Option<Color>>,
}

/// Builds the net of a grounded, connected arrangement.
pub fn build_net(g: &GroundedArrangement) -> DualNet {
    let p = &g.planarization;
    let mut rotation: Vec<Vec<usize>> = Vec::new();
    let mut cell_face = Vec::new();
    let mut border_cell = Vec::new();
    for (f, walk) in p.map.faces().iter().enumerate() {
        let arrivals: Vec<usize> = walk
            .iter()
            .enumerate()
            .filter(|(_, &h)| p.is_endpoint(p.map.head(h)))
            .map(|(i, _)| i)
            .collect();
        if arrivals.is_empty() {
            rotation.push(walk.clone());
            cell_face.push(f);
            border_cell.push(false);
            continue;
        }
        let n = walk.len();
        for (k, &a) in arrivals.iter().enumerate() {
            let b = arrivals[(k + 1) % arrivals.len()];
            let mut run = Vec::new();
            let mut i = (a + 1) % n;
            loop {
                run.push(walk[i]);
                if i == b {
                    break;
                }
                i = (i + 1) % n;
            }
            rotation.push(run);
            cell_face.push(f);
            border_cell.push(true);
        }
    }
    let map = HalfEdgeMap::from_rotations(rotation);

    let mut face_kind = Vec::with_capacity(map.num_faces());
    let mut square_face = vec![usize::MAX; p.arrangement.crossings.len()];
    for (f, walk) in map.faces().iter().enumerate() {
        let v = p.map.head(walk[0]);
        match p.vertex_kind[v] {
            VertexKind::Crossing(c) => {
                square_face[c] = f;
                face_kind.push(FaceKind::Square(c));
            }
            VertexKind::Endpoint { .. } => {
                let curve =
                    g.face_curve[p.map.face_of(walk[0])].expect("endpoint face is grounded");
                face_kind.push(FaceKind::Hole(curve));
            }
        }
    }

    let class = (0..map.num_vertices())
        .map(|v| {
            if border_cell[v] {
                VertexClass::Border
            } else if map.degree(v) == 4 {
                VertexClass::Regular
            } else {
                VertexClass::VertexHole
            }
        })
        .collect();
    let border_edge = (0..map.num_edges()).map(|e| p.is_end_arc(e)).collect();
    let edge_color = (0..map.num_edges()).map(|e| p.arc_color(e)).collect();
    DualNet {
        grounded: g.clone(),
        map,
        cell_face,
        face_kind,
        square_face,
        class,
        border_edge,
        edge_color,
    }
}

/// Grounds a connected planarization and builds its net.
pub fn net_of(p: &Planarization) -> Result<DualNet> {
    Ok(build_net(&ground(p)?))
}

/// Minimum number of extra marks that saturate a vertex.
///
/// `marked[i]` tells whether rotation position `i` carries an edge of the
/// current edge set (or the border); `square[i]` whether the corner after
/// position `i` is a square. A vertex without marks needs at least one unless
/// it is regular.
pub fn sector_deficit(marked: &[bool], square: &[bool], regular: bool) -> usize {
    let d = marked.len();
    debug_assert_eq!(square.len(), d);
    let Some(first) = marked.iter().position(|&m| m) else {
        if regular {
            return 0;
        }
        let q = square.iter().filter(|&&s| s).count();
        return q.div_ceil(2).max(1);
    };
    let mut deficit = 0;
    let mut q: usize = 0;
    for step in 0..d {
        let i = (first + step) % d;
        if step > 0 && marked[i] {
            deficit += q.div_ceil(2).saturating_sub(1);
            q = 0;
        }
        if square[i] {
            q += 1;
        }
    }
    deficit + q.div_ceil(2).saturating_sub(1)
}

impl DualNet {
    pub fn planarization(&self) -> &Planarization {
        &self.grounded.planarization
    }

    pub fn num_vertices(&self) -> usize {
        self.map.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.map.num_edges()
    }

    pub fn num_squares(&self) -> usize {
        self.square_face.len()
    }

    pub fn num_boundary_holes(&self) -> usize {
        self.grounded.curves.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.map.degree(v)
    }

    pub fn is_regular(&self, v: usize) -> bool {
        self.class[v] == VertexClass::Regular
    }

    pub fn is_border_edge(&self, e: usize) -> bool {
        self.border_edge[e]
    }

    pub fn is_square_face(&self, f: usize) -> bool {
        matches!(self.face_kind[f], FaceKind::Square(_))
    }

    pub fn hole_faces(&self) -> Vec<usize> {
        (0..self.face_kind.len())
            .filter(|&f| !self.is_square_face(f))
            .collect()
    }

    pub fn vertex_holes(&self) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| self.class[v] == VertexClass::VertexHole)
            .collect()
    }

    /// `H`: vertex-holes plus boundary-holes.
    pub fn hole_count(&self) -> usize {
        self.vertex_holes().len() + self.hole_faces().len()
    }

    /// `H_odd`: vertex-holes of odd degree.
    pub fn odd_hole_count(&self) -> usize {
        self.vertex_holes()
            .into_iter()
            .filter(|&v| self.degree(v) % 2 == 1)
            .count()
    }

    /// Crossing enclosed by a square face.
    pub fn square_crossing(&self, f: usize) -> Option<usize> {
        match self.face_kind[f] {
            FaceKind::Square(c) => Some(c),
            FaceKind::Hole(_) => None,
        }
    }

    /// Whether the corner after rotation position `i` at `v` is a square.
    pub fn corner_is_square(&self, v: usize, i: usize) -> bool {
        self.is_square_face(self.map.corner_face(v, i))
    }

    /// Exponent by the closed formula.
    pub fn exponent(&self, v: usize) -> usize {
        let d = self.degree(v);
        match self.class[v] {
            VertexClass::Regular => 0,
            VertexClass::Border => (d / 2).saturating_sub(1),
            VertexClass::VertexHole => d.div_ceil(2),
        }
    }

    pub fn exponents(&self) -> Vec<usize> {
        (0..self.num_vertices()).map(|v| self.exponent(v)).collect()
    }

    /// `exp(N)`.
    pub fn total_exponent(&self) -> usize {
        (0..self.num_vertices()).map(|v| self.exponent(v)).sum()
    }

    fn marks(&self, v: usize, in_set: &dyn Fn(usize) -> bool) -> (Vec<bool>, Vec<bool>) {
        let rot = self.map.rotation(v);
        let marked = rot
            .iter()
            .map(|&h| {
                let e = edge_of(h);
                self.border_edge[e] || in_set(e)
            })
            .collect();
        let square = (0..rot.len())
            .map(|i| self.corner_is_square(v, i))
            .collect();
        (marked, square)
    }

    /// Exponent of `v` relative to the edge set `in_set`.
    pub fn relative_exponent(&self, v: usize, in_set: &dyn Fn(usize) -> bool) -> usize {
        let (marked, square) = self.marks(v, in_set);
        sector_deficit(&marked, &square, self.is_regular(v))
    }

    /// Exponent of `v` relative to an explicit edge mask.
    pub fn relative_exponent_mask(&self, v: usize, edges: &[bool]) -> usize {
        self.relative_exponent(v, &|e| edges[e])
    }

    /// Relative exponent summed over all vertices.
    pub fn total_relative_exponent(&self, edges: &[bool]) -> usize {
        (0..self.num_vertices())
            .map(|v| self.relative_exponent_mask(v, edges))
            .sum()
    }

    /// Net half-edge opposite to the arrival through `h` at the head of `h`.
    pub fn straight_continuation(&self, h: usize) -> Option<usize> {
        let w = self.map.head(h);
        if !self.is_regular(w) {
            return None;
        }
        let back = twin(h);
        let rot = self.map.rotation(w);
        Some(rot[(self.map.position(back) + 2) % 4])
    }

    /// Shoots a segment from `v` along its outgoing half-edge `h`.
    ///
    /// The path runs straight through regular vertices and stops at the
    /// first non-regular vertex or interior vertex of a segment in `cover`.
    pub fn shoot_segment(&self, h: usize, cover: &Coverage) -> Result<Segment> {
        let e = edge_of(h);
        if self.border_edge[e] {
            return Err(Error::NotInterior(e));
        }
        if cover.edge_segment[e].is_some() {
            return Err(Error::EdgeCovered(e));
        }
        let mut path = vec![h];
        let mut visited = vec![self.map.origin(h)];
        let mut cur = h;
        loop {
            let w = self.map.head(cur);
            if !self.is_regular(w) || cover.interior_count[w] > 0 || visited.contains(&w) {
                break;
            }
            visited.push(w);
            let next = self.straight_continuation(cur).expect("regular vertex");
            let ne = edge_of(next);
            if cover.edge_segment[ne].is_some() || self.border_edge[ne] {
                break;
            }
            path.push(next);
            cur = next;
        }
        Ok(Segment::new(self, path))
    }

    /// Distinct vertices on the boundary of a face.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .map
            .face(f)
            .iter()
            .map(|&h| self.map.origin(h))
            .collect();
        set.into_iter().collect()
    }

    /// Boundary-holes with degree pattern `7, 3, ..., 3` or `5, 5, 3, ..., 3`.
    pub fn toothed_holes(&self) -> Vec<usize> {
        self.hole_faces()
            .into_iter()
            .filter(|&f| {
                let degs: Vec<usize> = self
                    .face_vertices(f)
                    .iter()
                    .map(|&v| self.degree(v))
                    .collect();
                let threes = degs.iter().filter(|&&d| d == 3).count();
                let fives = degs.iter().filter(|&&d| d == 5).count();
                let sevens = degs.iter().filter(|&&d| d == 7).count();
                (sevens == 1 && threes + 1 == degs.len())
                    || (fives == 2 && threes + 2 == degs.len())
            })
            .collect()
    }

    /// `t(N)`.
    pub fn toothed_count(&self) -> usize {
        self.toothed_holes().len()
    }

    /// Textual dump with stable ordering.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "net V={} E={} F={} squares={} holes={}",
            self.num_vertices(),
            self.num_edges(),
            self.map.num_faces(),
            self.num_squares(),
            self.hole_count()
        );
        for v in 0..self.num_vertices() {
            let class = match self.class[v] {
                VertexClass::Regular => "regular",
                VertexClass::VertexHole => "vertex-hole",
                VertexClass::Border => "border",
            };
            let nbrs: Vec<String> = self
                .map
                .rotation(v)
                .iter()
                .map(|&h| format!("{}:e{}", self.map.head(h), edge_of(h)))
                .collect();
            let _ = writeln!(
                out,
                "v{v} {class} deg={} exp={} [{}]",
                self.degree(v),
                self.exponent(v),
                nbrs.join(" ")
            );
        }
        for e in 0..self.num_edges() {
            let color = self.edge_color[e].map_or("-".to_string(), |c| c.to_string());
            let kind = if self.border_edge[e] {
                "border"
            } else {
                "interior"
            };
            let _ = writeln!(
                out,
                "e{e} {}-{} {kind} {color}",
                self.map.origin(2 * e),
                self.map.head(2 * e)
            );
        }
        for (f, kind) in self.face_kind.iter().enumerate() {
            let tag = match kind {
                FaceKind::Square(c) => format!(
                    "square c{}",
                    self.planarization().arrangement.crossings[*c].id
                ),
                FaceKind::Hole(b) => format!("hole b{b}"),
            };
            let edges: Vec<String> = self
                .map
                .face(f)
                .iter()
                .map(|&h| format!("e{}", edge_of(h)))
                .collect();
            let _ = writeln!(out, "f{f} {tag} [{}]", edges.join(" "));
        }
        out
    }

    /// Side index of half-edge `h` inside its square face walk.
    fn side_index(&self, h: usize) -> usize {
        let f = self.map.face_of(h);
        self.map
            .face(f)
            .iter()
            .position(|&x| x == h)
            .expect("half-edge in face")
    }

    /// Walks straight across opposite sides starting from side `side` of
    /// square face `f`; returns how the walk re-enters `f`, if it does.
    fn straight_square_walk(&self, f: usize, side: usize) -> Option<usize> {
        let mut face = f;
        let mut exit = side;
        for _ in 0..=self.num_squares() {
            let h = self.map.face(face)[exit];
            let across = twin(h);
            let next = self.map.face_of(across);
            if !self.is_square_face(next) || self.map.face(next).len() != 4 {
                return None;
            }
            let entry = self.side_index(across);
            if next == f {
                return Some(entry);
            }
            face = next;
            exit = (entry + 2) % 4;
        }
        None
    }

    /// Square-rings, square-loops, and hole configurations impossible for
    /// pseudosegments.
    pub fn forbidden_patterns(&self) -> Vec<String> {
        let mut found = Vec::new();
        let mut rings: BTreeSet<usize> = BTreeSet::new();
        let mut loops: BTreeSet<usize> = BTreeSet::new();
        for f in 0..self.face_kind.len() {
            if !self.is_square_face(f) || self.map.face(f).len() != 4 {
                continue;
            }
            for side in 0..4 {
                match self.straight_square_walk(f, side) {
                    Some(entry) if entry == (side + 2) % 4 => {
                        rings.insert(f);
                    }
                    Some(entry) if entry != side => {
                        loops.insert(f);
                    }
                    _ => {}
                }
            }
        }
        if !rings.is_empty() {
            found.push(format!("square-ring through faces {:?}", rings));
        }
        if !loops.is_empty() {
            found.push(format!("square-loop at faces {:?}", loops));
        }
        for v in self.vertex_holes() {
            if self.degree(v) <= 2 {
                found.push(format!("vertex-hole v{v} of degree {}", self.degree(v)));
            }
        }
        for f in self.hole_faces() {
            let degs: Vec<usize> = self
                .face_vertices(f)
                .iter()
                .map(|&v| self.degree(v))
                .collect();
            let threes = degs.iter().filter(|&&d| d == 3).count();
            let fives = degs.iter().filter(|&&d| d == 5).count();
            if threes == degs.len() {
                found.push(format!("boundary-hole f{f} with all vertices of degree 3"));
            } else if fives == 1 && threes + 1 == degs.len() {
                found.push(format!(
                    "boundary-hole f{f} with one degree-5 vertex, rest degree 3"
                ));
            }
        }
        for f in 0..self.face_kind.len() {
            if self.is_square_face(f) && self.map.face(f).len() != 4 {
                found.push(format!("square f{f} with {} sides", self.map.face(f).len()));
            }
        }
        found
    }
}

/// String-level validation plus the forbidden net patterns.
pub fn check_pseudosegments(p: &Planarization) -> ValidationReport {
    let mut report = validate_pseudosegments(p);
    if p.components == 1 {
        if let Ok(net) = net_of(p) {
            report.violations.extend(
                net.forbidden_patterns()
                    .into_iter()
                    .map(Violation::NetPattern),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_planarization, Arrangement};

    fn net(text: &str) -> DualNet {
        net_of(&build_planarization(&Arrangement::parse(text).unwrap()).unwrap()).unwrap()
    }

    const PLUS: &str = r#"{"strings":[{"id":0,"color":"blue","crossings":[0]},{"id":1,"color":"red","crossings":[0]}],"crossings":[{"id":0,"strings":[0,1],"sign":1}]}"#;

    #[test]
    fn plus_sign_net_is_a_four_cycle() {
        let n = net(PLUS);
        assert_eq!((n.num_vertices(), n.num_edges()), (4, 4));
        assert_eq!(n.map.num_faces(), 2);
        assert_eq!(n.num_squares(), 1);
        assert_eq!(n.hole_count(), 1);
        assert_eq!(n.odd_hole_count(), 0);
        assert!(n.class.iter().all(|&c| c == VertexClass::Border));
        assert!((0..4).all(|v| n.degree(v) == 2 && n.exponent(v) == 0));
        assert_eq!(n.total_exponent(), 0);
        assert_eq!(n.toothed_count(), 0);
        assert!(n.forbidden_patterns().is_empty());
        assert!(n.dump().starts_with("net V=4 E=4 F=2"));
    }

    #[test]
    fn closed_formula_examples() {
        // border vertex of degree 5: four squares, no extra edges
        assert_eq!(
            sector_deficit(
                &[true, false, false, false, true],
                &[true, true, true, true, false],
                false
            ),
            1
        );
        // vertex-hole of degree 6
        assert_eq!(sector_deficit(&[false; 6], &[true; 6], false), 3);
        assert_eq!(sector_deficit(&[false; 4], &[true; 4], true), 0);
        // regular vertex touched by a single edge
        assert_eq!(
            sector_deficit(&[true, false, false, false], &[true; 4], true),
            1
        );
        // three alternating edges saturate a degree-6 vertex-hole
        assert_eq!(
            sector_deficit(&[true, false, true, false, true, false], &[true; 6], false),
            0
        );
    }

    #[test]
    fn relative_exponent_on_high_degree_border() {
        // degree 7: border marks at 0 and 6, squares after positions 0..=5
        let square = [true, true, true, true, true, true, false];
        let mut marked = [true, false, false, false, false, false, true];
        assert_eq!(sector_deficit(&marked, &square, false), 2);
        marked[2] = true; // splits the six squares 2 + 4
        assert_eq!(sector_deficit(&marked, &square, false), 1);
        // degree 6 with an edge splitting five squares 2 + 3
        let square6 = [true, true, true, true, true, false];
        let marked6 = [true, false, true, false, false, true];
        assert_eq!(sector_deficit(&marked6, &square6, false), 1);
    }
}
