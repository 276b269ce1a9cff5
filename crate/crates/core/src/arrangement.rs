//! Good drawings given combinatorially: strings, crossings, and the
//! planarization that every other module consumes.
//!
//! A string is described by the ordered list of crossings it passes through.
//! A crossing of strings `(a, b)` with sign `+1` has the counterclockwise
//! rotation `(a_in, b_in, a_out, b_out)`, where `x_in` points back along `x`
//! and `x_out` points forward; sign `-1` is the mirror image
//! `(a_in, b_out, a_out, b_in)`.

use std::collections::{BTreeMap, HashMap};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::HalfEdgeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Color::Blue => "blue",
            Color::Red => "red",
        })
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// One string as it appears in an instance file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringRecord {
    pub id: i64,
    pub color: Option<Color>,
    pub crossings: Vec<i64>,
    /// Closed curves only occur in negative test instances.
    #[serde(default, skip_serializing_if = "is_false")]
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub id: i64,
    pub strings: Vec<i64>,
    pub sign: i64,
}

/// Serialized form of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub strings: Vec<StringRecord>,
    pub crossings: Vec<CrossingRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringCurve {
    pub id: i64,
    pub color: Option<Color>,
    /// Crossing indices (into `Arrangement::crossings`) in order along the string.
    pub crossings: Vec<usize>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub id: i64,
    /// String indices; equal for a self-crossing.
    pub strings: (usize, usize),
    pub sign: i8,
}

/// Strings and crossings with referential integrity checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub strings: Vec<StringCurve>,
    pub crossings: Vec<Crossing>,
}

impl Arrangement {
    /// Parses an instance file (JSON).
    pub fn parse(text: &str) -> Result<Arrangement> {
        let file: InstanceFile = serde_json::from_str(text)?;
        Arrangement::from_file(&file)
    }

    pub fn from_file(file: &InstanceFile) -> Result<Arrangement> {
        let mut crossing_index = HashMap::new();
        let mut crossings = Vec::with_capacity(file.crossings.len());
        for c in &file.crossings {
            if c.strings.len() != 2 {
                return Err(Error::CrossingArity {
                    crossing: c.id,
                    count: c.strings.len(),
                });
            }
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::InconsistentCrossing {
                    crossing: c.id,
                    reason: format!("sign {} is not 1 or -1", c.sign),
                });
            }
            if crossing_index.insert(c.id, crossing_index.len()).is_some() {
                return Err(Error::DuplicateId(c.id));
            }
            crossings.push(c);
        }

        // Uncrossed strings carry no bundle information.
        let mut string_index = HashMap::new();
        let mut kept = Vec::new();
        for s in &file.strings {
            if string_index.contains_key(&s.id) {
                return Err(Error::DuplicateId(s.id));
            }
            if s.crossings.is_empty() {
                warn!("dropping uncrossed string {}", s.id);
                string_index.insert(s.id, usize::MAX);
                continue;
            }
            string_index.insert(s.id, kept.len());
            kept.push(s);
        }

        let mut strings = Vec::with_capacity(kept.len());
        let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); crossings.len()];
        for (si, s) in kept.iter().enumerate() {
            let mut seq = Vec::with_capacity(s.crossings.len());
            for &cid in &s.crossings {
                let &ci = crossing_index.get(&cid).ok_or(Error::DanglingCrossing {
                    string: s.id,
                    crossing: cid,
                })?;
                occurrences[ci].push(si);
                seq.push(ci);
            }
            strings.push(StringCurve {
                id: s.id,
                color: s.color,
                crossings: seq,
                closed: s.closed,
            });
        }

        let mut out = Vec::with_capacity(crossings.len());
        for (ci, c) in crossings.iter().enumerate() {
            let mut ends = [0usize; 2];
            for (k, sid) in c.strings.iter().enumerate() {
                match string_index.get(sid) {
                    Some(&i) if i != usize::MAX => ends[k] = i,
                    _ => {
                        return Err(Error::InconsistentCrossing {
                            crossing: c.id,
                            reason: format!("string {sid} does not list this crossing"),
                        })
                    }
                }
            }
            let mut expected = vec![ends[0], ends[1]];
            expected.sort_unstable();
            let mut seen = occurrences[ci].clone();
            seen.sort_unstable();
            if seen != expected {
                return Err(Error::InconsistentCrossing {
                    crossing: c.id,
                    reason: format!(
                        "listed by strings {:?}, declared on {:?}",
                        seen.iter().map(|&i| strings[i].id).collect::<Vec<_>>(),
                        c.strings
                    ),
                });
            }
            out.push(Crossing {
                id: c.id,
                strings: (ends[0], ends[1]),
                sign: c.sign as i8,
            });
        }
        Ok(Arrangement {
            strings,
            crossings: out,
        })
    }

    /// Canonical file form: arrays sorted by id.
    pub fn to_file(&self) -> InstanceFile {
        let mut strings: Vec<StringRecord> = self
            .strings
            .iter()
            .map(|s| StringRecord {
                id: s.id,
                color: s.color,
                crossings: s.crossings.iter().map(|&c| self.crossings[c].id).collect(),
                closed: s.closed,
            })
            .collect();
        strings.sort_by_key(|s| s.id);
        let mut crossings: Vec<CrossingRecord> = self
            .crossings
            .iter()
            .map(|c| CrossingRecord {
                id: c.id,
                strings: vec![self.strings[c.strings.0].id, self.strings[c.strings.1].id],
                sign: c.sign as i64,
            })
            .collect();
        crossings.sort_by_key(|c| c.id);
        InstanceFile { strings, crossings }
    }

    /// Canonical JSON serialization.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("instance serializes")
    }

    pub fn num_arcs(&self) -> usize {
        self.strings
            .iter()
            .map(|s| s.crossings.len() + usize::from(!s.closed))
            .sum()
    }

    /// True when every string is colored and every crossing joins two colors.
    pub fn is_bipartite(&self) -> bool {
        self.strings.iter().all(|s| s.color.is_some())
            && self
                .crossings
                .iter()
                .all(|c| self.strings[c.strings.0].color != self.strings[c.strings.1].color)
    }

    /// The same drawing reflected: every sign flipped.
    pub fn mirrored(&self) -> Arrangement {
        let mut m = self.clone();
        for c in &mut m.crossings {
            c.sign = -c.sign;
        }
        m
    }
}

/// Partition by connectivity of the union of strings.
pub fn split_components(arr: &Arrangement) -> Vec<Arrangement> {
    let n = arr.strings.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in &arr.crossings {
        let (a, b) = (
            find(&mut parent, c.strings.0),
            find(&mut parent, c.strings.1),
        );
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for s in 0..n {
        let r = find(&mut parent, s);
        groups.entry(r).or_default().push(s);
    }
    groups
        .into_values()
        .map(|members| {
            let mut string_map = vec![usize::MAX; n];
            for (i, &s) in members.iter().enumerate() {
                string_map[s] = i;
            }
            let mut crossing_map = vec![usize::MAX; arr.crossings.len()];
            let mut crossings = Vec::new();
            for (ci, c) in arr.crossings.iter().enumerate() {
                if string_map[c.strings.0] != usize::MAX {
                    crossing_map[ci] = crossings.len();
                    crossings.push(Crossing {
                        id: c.id,
                        strings: (string_map[c.strings.0], string_map[c.strings.1]),
                        sign: c.sign,
                    });
                }
            }
            let strings = members
                .iter()
                .map(|&s| {
                    let src = &arr.strings[s];
                    StringCurve {
                        id: src.id,
                        color: src.color,
                        crossings: src.crossings.iter().map(|&c| crossing_map[c]).collect(),
                        closed: src.closed,
                    }
                })
                .collect();
            Arrangement { strings, crossings }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Crossing(usize),
    /// `end` is 0 for the start of the string, 1 for its end.
    Endpoint {
        string: usize,
        end: u8,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcInfo {
    pub string: usize,
    /// Position of the arc along its string.
    pub index: usize,
}

/// The plane map obtained by turning crossings into degree-4 vertices.
#[derive(Debug, Clone)]
pub struct Planarization {
    pub arrangement: Arrangement,
    pub map: HalfEdgeMap,
    pub vertex_kind: Vec<VertexKind>,
    pub arcs: Vec<ArcInfo>,
    pub string_arcs: Vec<Vec<usize>>,
    pub components: usize,
}

impl Planarization {
    pub fn num_vertices(&self) -> usize {
        self.map.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.map.num_edges()
    }

    pub fn num_faces(&self) -> usize {
        self.map.num_faces()
    }

    pub fn is_endpoint(&self, v: usize) -> bool {
        matches!(self.vertex_kind[v], VertexKind::Endpoint { .. })
    }

    /// Crossing vertex index of crossing `c` (crossings are numbered first).
    pub fn crossing_vertex(&self, c: usize) -> usize {
        c
    }

    /// An arc is an end-arc when it touches a string endpoint.
    pub fn is_end_arc(&self, arc: usize) -> bool {
        self.is_endpoint(self.map.origin(2 * arc)) || self.is_endpoint(self.map.head(2 * arc))
    }

    pub fn arc_color(&self, arc: usize) -> Option<Color> {
        self.arrangement.strings[self.arcs[arc].string].color
    }
}

/// Builds the planarization and checks it is a sphere embedding.
pub fn build_planarization(arr: &Arrangement) -> Result<Planarization> {
    let nc = arr.crossings.len();
    let mut vertex_kind: Vec<VertexKind> = (0..nc).map(VertexKind::Crossing).collect();
    let mut arcs = Vec::new();
    let mut string_arcs = Vec::with_capacity(arr.strings.len());
    for (si, s) in arr.strings.iter().enumerate() {
        let count = s.crossings.len() + usize::from(!s.closed);
        let ids: Vec<usize> = (arcs.len()..arcs.len() + count).collect();
        for index in 0..count {
            arcs.push(ArcInfo { string: si, index });
        }
        string_arcs.push(ids);
    }

    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); nc];
    // (in, out) half-edges leaving each crossing, per occurrence along a string.
    let mut ports: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); nc];
    for (si, s) in arr.strings.iter().enumerate() {
        let ids = &string_arcs[si];
        let k = s.crossings.len();
        if !s.closed {
            let start = vertex_kind.len();
            vertex_kind.push(VertexKind::Endpoint { string: si, end: 0 });
            vertex_kind.push(VertexKind::Endpoint { string: si, end: 1 });
            rotation.push(vec![2 * ids[0]]);
            rotation.push(vec![2 * ids[k] + 1]);
            debug_assert_eq!(rotation.len(), start + 2);
        }
        for (j, &c) in s.crossings.iter().enumerate() {
            let (arc_in, arc_out) = if s.closed {
                (ids[(j + k - 1) % k], ids[j])
            } else {
                (ids[j], ids[j + 1])
            };
            ports[c].push((si, 2 * arc_in + 1, 2 * arc_out));
        }
    }
    for (c, crossing) in arr.crossings.iter().enumerate() {
        let p = &ports[c];
        debug_assert_eq!(p.len(), 2);
        // ports are in string order; pick the occurrence belonging to `a` first
        let (pa, pb) = if crossing.strings.0 == crossing.strings.1 || p[0].0 == crossing.strings.0 {
            (p[0], p[1])
        } else {
            (p[1], p[0])
        };
        rotation[c] = if crossing.sign > 0 {
            vec![pa.1, pb.1, pa.2, pb.2]
        } else {
            vec![pa.1, pb.2, pa.2, pb.1]
        };
    }
    // Self-crossings visited twice along one string: keep the sequence order.
    let map = HalfEdgeMap::from_rotations(rotation);
    let (components, _) = map.components();
    let euler = map.euler_characteristic();
    let expected = 2 * components as i64;
    if euler != expected {
        return Err(Error::Euler { euler, expected });
    }
    Ok(Planarization {
        arrangement: arr.clone(),
        map,
        vertex_kind,
        arcs,
        string_arcs,
        components,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A string passing through one crossing twice.
    SelfCrossing {
        string: i64,
        crossing: i64,
    },
    /// Two strings sharing two or more crossings.
    DoubleCrossing {
        strings: (i64, i64),
        crossings: Vec<i64>,
    },
    ClosedString {
        string: i64,
    },
    /// Forbidden configuration found in the dual net.
    NetPattern(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the pseudosegment conditions that are visible on the strings alone.
pub fn validate_pseudosegments(p: &Planarization) -> ValidationReport {
    let arr = &p.arrangement;
    let mut violations = Vec::new();
    let mut shared: BTreeMap<(usize, usize), Vec<i64>> = BTreeMap::new();
    for c in &arr.crossings {
        let (a, b) = c.strings;
        if a == b {
            violations.push(Violation::SelfCrossing {
                string: arr.strings[a].id,
                crossing: c.id,
            });
        } else {
            shared.entry((a.min(b), a.max(b))).or_default().push(c.id);
        }
    }
    for ((a, b), crossings) in shared {
        if crossings.len() >= 2 {
            violations.push(Violation::DoubleCrossing {
                strings: (arr.strings[a].id, arr.strings[b].id),
                crossings,
            });
        }
    }
    for s in &arr.strings {
        if s.closed {
            violations.push(Violation::ClosedString { string: s.id });
        }
    }
    ValidationReport { violations }
}

/// Boundary curve through the endpoints lying in one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryCurve {
    pub face: usize,
    /// Endpoint vertices in boundary-walk order.
    pub endpoints: Vec<usize>,
    /// Half-edge of the planarization arriving at each endpoint.
    pub arriving: Vec<usize>,
}

/// A planarization together with one boundary curve per face holding endpoints.
#[derive(Debug, Clone)]
pub struct GroundedArrangement {
    pub planarization: Planarization,
    pub curves: Vec<BoundaryCurve>,
    /// Curve index per face, if any.
    pub face_curve: Vec<Option<usize>>,
}

pub fn ground(p: &Planarization) -> Result<GroundedArrangement> {
    if p.components != 1 {
        return Err(Error::Disconnected(p.components));
    }
    let mut curves = Vec::new();
    let mut face_curve = vec![None; p.num_faces()];
    for (f, walk) in p.map.faces().iter().enumerate() {
        let mut endpoints = Vec::new();
        let mut arriving = Vec::new();
        for &h in walk {
            let v = p.map.head(h);
            if p.is_endpoint(v) {
                endpoints.push(v);
                arriving.push(h);
            }
        }
        if !endpoints.is_empty() {
            face_curve[f] = Some(curves.len());
            curves.push(BoundaryCurve {
                face: f,
                endpoints,
                arriving,
            });
        }
    }
    Ok(GroundedArrangement {
        planarization: p.clone(),
        curves,
        face_curve,
    })
}

impl GroundedArrangement {
    /// Grounding an already grounded arrangement reproduces it.
    pub fn reground(&self) -> Result<GroundedArrangement> {
        ground(&self.planarization)
    }

    /// Number of string endpoints on each boundary curve.
    pub fn curve_sizes(&self) -> Vec<usize> {
        self.curves.iter().map(|c| c.endpoints.len()).collect()
    }
}

/// Convenience: parse, split, and planarize every component.
pub fn planarize_components(arr: &Arrangement) -> Result<Vec<Planarization>> {
    split_components(arr)
        .iter()
        .map(build_planarization)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const PLUS: &str = r#"{"strings":[{"id":0,"color":"blue","crossings":[0]},{"id":1,"color":"red","crossings":[0]}],"crossings":[{"id":0,"strings":[0,1],"sign":1}]}"#;

    #[test]
    fn parse_plus_sign() {
        let arr = Arrangement::parse(PLUS).unwrap();
        assert_eq!(arr.strings.len(), 2);
        assert_eq!(arr.crossings.len(), 1);
        assert_eq!(arr.to_json(), PLUS);
    }

    #[test]
    fn parse_errors() {
        let bad = r#"{"strings":[{"id":0,"color":null,"crossings":[0]}],"crossings":[{"id":0,"strings":[0,1,2],"sign":1}]}"#;
        let err = Arrangement::parse(bad).unwrap_err();
        assert!(err.to_string().contains("crossing arity"), "{err}");

        let dangling = r#"{"strings":[{"id":0,"color":null,"crossings":[7]}],"crossings":[]}"#;
        assert!(matches!(
            Arrangement::parse(dangling),
            Err(Error::DanglingCrossing {
                string: 0,
                crossing: 7
            })
        ));

        let syntax = "{\"strings\": [\n  {\"id\": 0,, }]}";
        match Arrangement::parse(syntax) {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uncrossed_strings_are_dropped() {
        let text = r#"{"strings":[{"id":0,"color":null,"crossings":[0]},{"id":1,"color":null,"crossings":[0]},{"id":2,"color":null,"crossings":[]}],"crossings":[{"id":0,"strings":[0,1],"sign":-1}]}"#;
        let arr = Arrangement::parse(text).unwrap();
        assert_eq!(arr.strings.len(), 2);
    }

    #[test]
    fn plus_sign_planarization() {
        let p = build_planarization(&Arrangement::parse(PLUS).unwrap()).unwrap();
        assert_eq!((p.num_vertices(), p.num_edges(), p.num_faces()), (5, 4, 1));
        let g = ground(&p).unwrap();
        assert_eq!(g.curve_sizes(), vec![4]);
        assert!(validate_pseudosegments(&p).is_empty());
    }

    #[test]
    fn rotation_alternates_at_crossings() {
        let p = build_planarization(&Arrangement::parse(PLUS).unwrap()).unwrap();
        let strings: Vec<usize> = p
            .map
            .rotation(0)
            .iter()
            .map(|&h| p.arcs[h / 2].string)
            .collect();
        assert_eq!(strings, vec![0, 1, 0, 1]);
        assert_eq!(crate::map::twin(p.map.rotation(0)[0]) % 2, 0);
    }

    #[test]
    fn two_components() {
        let text = r#"{"strings":[{"id":0,"color":null,"crossings":[0]},{"id":1,"color":null,"crossings":[0]},{"id":2,"color":null,"crossings":[1]},{"id":3,"color":null,"crossings":[1]}],"crossings":[{"id":0,"strings":[0,1],"sign":1},{"id":1,"strings":[2,3],"sign":1}]}"#;
        let arr = Arrangement::parse(text).unwrap();
        let parts = split_components(&arr);
        assert_eq!(parts.len(), 2);
        let p = build_planarization(&arr).unwrap();
        assert_eq!(p.components, 2);
        assert!(matches!(ground(&p), Err(Error::Disconnected(2))));
        for part in parts {
            assert_eq!(build_planarization(&part).unwrap().components, 1);
        }
    }

    #[test]
    fn double_crossing_is_reported() {
        let text = r#"{"strings":[{"id":0,"color":null,"crossings":[1,2]},{"id":1,"color":null,"crossings":[1,2]}],"crossings":[{"id":1,"strings":[0,1],"sign":1},{"id":2,"strings":[0,1],"sign":-1}]}"#;
        let p = build_planarization(&Arrangement::parse(text).unwrap()).unwrap();
        let r = validate_pseudosegments(&p);
        assert_eq!(
            r.violations,
            vec![Violation::DoubleCrossing {
                strings: (0, 1),
                crossings: vec![1, 2]
            }]
        );
    }
}
