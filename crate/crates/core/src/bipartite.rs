//! Two-colored nets: weak and strong vertices, the gain graph, marginal
//! gains, and the seeded greedy.

use std::collections::HashMap;

use crate::arrangement::Color;
use crate::error::{Error, Result};
use crate::map::{edge_of, twin};
use crate::net::{DualNet, VertexClass};
use crate::rectangulation::{
    extract_rectangulation, greedy_rectangulate, CutSet, Rectangulation, Segment, VertexOrder,
};

/// Checks that every crossing joins a blue and a red string.
pub fn require_bipartite(net: &DualNet) -> Result<()> {
    let arr = &net.planarization().arrangement;
    for c in &arr.crossings {
        let a = arr.strings[c.strings.0].color;
        let b = arr.strings[c.strings.1].color;
        match (a, b) {
            (Some(x), Some(y)) if x != y => {}
            _ => {
                return Err(Error::NotBipartite(format!(
                    "crossing {} joins strings colored {:?} and {:?}",
                    c.id, a, b
                )))
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strength {
    Weak,
    Strong,
}

/// Class of every positive-exponent vertex relative to `color`.
pub fn classify_weak_strong(net: &DualNet, color: Color) -> Vec<Option<Strength>> {
    (0..net.num_vertices())
        .map(|v| {
            if net.exponent(v) == 0 {
                return None;
            }
            let weak = net.class[v] == VertexClass::Border
                && net.degree(v) % 2 == 1
                && net
                    .map
                    .rotation(v)
                    .iter()
                    .map(|&h| edge_of(h))
                    .filter(|&e| net.is_border_edge(e))
                    .all(|e| net.edge_color[e] == Some(color.other()));
            Some(if weak {
                Strength::Weak
            } else {
                Strength::Strong
            })
        })
        .collect()
}

/// Maximal straight paths of interior edges of one color.
pub fn blue_segments(net: &DualNet, color: Color) -> Vec<Segment> {
    let usable = |e: usize| !net.is_border_edge(e) && net.edge_color[e] == Some(color);
    let mut seen = vec![false; net.num_edges()];
    let mut out = Vec::new();
    for e in 0..net.num_edges() {
        if seen[e] || !usable(e) {
            continue;
        }
        seen[e] = true;
        let extend = |start: usize, seen: &mut Vec<bool>| {
            let mut path = vec![start];
            while let Some(next) = net.straight_continuation(*path.last().unwrap()) {
                let ne = edge_of(next);
                if seen[ne] || !usable(ne) {
                    break;
                }
                seen[ne] = true;
                path.push(next);
            }
            path
        };
        let forward = extend(2 * e, &mut seen);
        let backward = extend(2 * e + 1, &mut seen);
        let mut path: Vec<usize> = backward[1..].iter().rev().map(|&h| twin(h)).collect();
        path.extend(forward);
        out.push(Segment::new(net, path));
    }
    out
}

/// Marginal gain split into its parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GainValue {
    pub g: i64,
    /// Total exponent drop.
    pub drop: i64,
    pub count: usize,
}

/// Gain by definition: exponent drop minus the number of segments.
pub fn gain_def(net: &DualNet, segments: &[Segment]) -> GainValue {
    let mut mask = vec![false; net.num_edges()];
    for e in segments.iter().flat_map(Segment::edges) {
        mask[e] = true;
    }
    let drop: i64 = (0..net.num_vertices())
        .map(|v| net.exponent(v) as i64 - net.relative_exponent_mask(v, &mask) as i64)
        .sum();
    GainValue {
        g: drop - segments.len() as i64,
        drop,
        count: segments.len(),
    }
}

/// Multigraph on the positive-exponent vertices with one edge per element
/// of `B` and one loop per strong vertex. Segment ends at exponent-0
/// vertices get private leaf vertices.
#[derive(Debug, Clone)]
pub struct GainGraph {
    pub color: Color,
    pub b: Vec<Segment>,
    /// Net vertex of every gain-graph vertex; `None` for private leaves.
    pub net_vertex: Vec<Option<usize>>,
    pub strong: Vec<bool>,
    /// Endpoints of the element `i` of `B`.
    pub ends: Vec<(usize, usize)>,
    /// Gain-graph vertex of every loop.
    pub loops: Vec<usize>,
    loop_at: HashMap<usize, usize>,
}

impl GainGraph {
    pub fn build(net: &DualNet, color: Color) -> GainGraph {
        let classes = classify_weak_strong(net, color);
        let mut net_vertex = Vec::new();
        let mut strong = Vec::new();
        let mut index = HashMap::new();
        for (v, c) in classes.iter().enumerate() {
            if let Some(s) = c {
                index.insert(v, net_vertex.len());
                net_vertex.push(Some(v));
                strong.push(*s == Strength::Strong);
            }
        }
        let b = blue_segments(net, color);
        let mut ends = Vec::with_capacity(b.len());
        for s in &b {
            let mut end = |v: usize| {
                *index.get(&v).unwrap_or(&{
                    net_vertex.push(None);
                    strong.push(false);
                    net_vertex.len() - 1
                })
            };
            let (x, y) = (end(s.start), end(s.end));
            ends.push((x, y));
        }
        let loops: Vec<usize> = (0..strong.len()).filter(|&u| strong[u]).collect();
        let loop_at = loops
            .iter()
            .enumerate()
            .map(|(i, &u)| (u, b.len() + i))
            .collect();
        GainGraph {
            color,
            b,
            net_vertex,
            strong,
            ends,
            loops,
            loop_at,
        }
    }

    /// Gain graph without an underlying net, for reasoning about shapes.
    pub fn from_parts(color: Color, strong: Vec<bool>, ends: Vec<(usize, usize)>) -> GainGraph {
        let loops: Vec<usize> = (0..strong.len()).filter(|&u| strong[u]).collect();
        let loop_at = loops
            .iter()
            .enumerate()
            .map(|(i, &u)| (u, ends.len() + i))
            .collect();
        GainGraph {
            color,
            b: Vec::new(),
            net_vertex: (0..strong.len()).map(Some).collect(),
            strong,
            ends,
            loops,
            loop_at,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.net_vertex.len()
    }

    /// Edges of `E_B`: elements of `B` first, then the loops.
    pub fn num_edges(&self) -> usize {
        self.ends.len() + self.loops.len()
    }

    pub fn edge_ends(&self, i: usize) -> (usize, usize) {
        if i < self.ends.len() {
            self.ends[i]
        } else {
            let u = self.loops[i - self.ends.len()];
            (u, u)
        }
    }

    /// `S` plus the loops at the strong vertices it touches.
    pub fn hat(&self, subset: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = subset.to_vec();
        let mut touched: Vec<usize> = subset
            .iter()
            .flat_map(|&i| {
                let (a, b) = self.edge_ends(i);
                [a, b]
            })
            .collect();
        touched.sort_unstable();
        touched.dedup();
        for u in touched {
            if let Some(&l) = self.loop_at.get(&u) {
                if !out.contains(&l) {
                    out.push(l);
                }
            }
        }
        out
    }

    /// Vertices, edges, and tree components of the subgraph spanned by `edges`.
    pub fn shape(&self, edges: &[usize]) -> ComponentShape {
        let mut parent: HashMap<usize, usize> = HashMap::new();
        fn find(p: &mut HashMap<usize, usize>, x: usize) -> usize {
            let mut r = x;
            while p[&r] != r {
                r = p[&r];
            }
            let mut y = x;
            while p[&y] != r {
                let n = p[&y];
                p.insert(y, r);
                y = n;
            }
            r
        }
        for &i in edges {
            let (a, b) = self.edge_ends(i);
            parent.entry(a).or_insert(a);
            parent.entry(b).or_insert(b);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
        let vertices: Vec<usize> = parent.keys().copied().collect();
        let mut comp_v: HashMap<usize, usize> = HashMap::new();
        for v in &vertices {
            *comp_v.entry(find(&mut parent, *v)).or_default() += 1;
        }
        let mut comp_e: HashMap<usize, usize> = HashMap::new();
        for &i in edges {
            let r = find(&mut parent, self.edge_ends(i).0);
            *comp_e.entry(r).or_default() += 1;
        }
        let tree_components = comp_v
            .iter()
            .filter(|(r, &nv)| comp_e.get(r).copied().unwrap_or(0) + 1 == nv)
            .count();
        ComponentShape {
            vertices: vertices.len(),
            edges: edges.len(),
            components: comp_v.len(),
            tree_components,
        }
    }

    /// Published closed form `|S^| - |V(S)| - tc(S^)` for `S` a subset of `B`.
    /// Undercounts by one for every tree component; see [`Self::gain_identity`].
    pub fn gain_formula(&self, subset: &[usize]) -> i64 {
        let hat = self.hat(subset);
        let sh = self.shape(&hat);
        sh.edges as i64 - sh.vertices as i64 - sh.tree_components as i64
    }

    /// `|S^| - |V(S)|`, which equals [`gain_def`] on every subset.
    pub fn gain_identity(&self, subset: &[usize]) -> i64 {
        let sh = self.shape(&self.hat(subset));
        sh.edges as i64 - sh.vertices as i64
    }

    /// Tree components of `S^` that are one segment with no strong end.
    pub fn isolated_weak_segments(&self, subset: &[usize]) -> usize {
        let hat = self.hat(subset);
        hat.iter()
            .filter(|&&i| {
                let (a, b) = self.edge_ends(i);
                a != b
                    && !self.strong[a]
                    && !self.strong[b]
                    && hat
                        .iter()
                        .filter(|&&j| {
                            let (x, y) = self.edge_ends(j);
                            x == a || y == a || x == b || y == b
                        })
                        .count()
                        == 1
            })
            .count()
    }

    /// Bicircular rank and nullity of an edge set.
    pub fn bicircular(&self, edges: &[usize]) -> (usize, usize) {
        let sh = self.shape(edges);
        let rank = sh.vertices - sh.tree_components;
        (rank, sh.edges - rank)
    }

    pub fn segments_of(&self, subset: &[usize]) -> Vec<Segment> {
        subset
            .iter()
            .filter(|&&i| i < self.b.len())
            .map(|&i| self.b[i].clone())
            .collect()
    }

    /// Prunes leaf edges to a fixed point, then drops cycle components.
    /// Returns the surviving elements of `B`.
    pub fn max_gain_set(&self) -> Vec<usize> {
        let n = self.num_vertices();
        let m = self.num_edges();
        let mut alive = vec![true; m];
        let mut degree = vec![0usize; n];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..m {
            let (a, b) = self.edge_ends(i);
            degree[a] += 1;
            degree[b] += 1;
            incident[a].push(i);
            if a != b {
                incident[b].push(i);
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        while let Some(v) = stack.pop() {
            if degree[v] != 1 {
                continue;
            }
            let Some(&i) = incident[v].iter().find(|&&i| alive[i]) else {
                continue;
            };
            alive[i] = false;
            let (a, b) = self.edge_ends(i);
            degree[a] -= 1;
            degree[b] -= 1;
            for w in [a, b] {
                if degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
        // drop components in which every vertex has degree 2 (cycles)
        let rest: Vec<usize> = (0..m).filter(|&i| alive[i]).collect();
        let mut comp = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for &i in &rest {
            let (a, _) = self.edge_ends(i);
            if comp[a] != usize::MAX {
                continue;
            }
            let id = members.len();
            members.push(Vec::new());
            comp[a] = id;
            let mut st = vec![a];
            while let Some(u) = st.pop() {
                members[id].push(u);
                for &j in &incident[u] {
                    if !alive[j] {
                        continue;
                    }
                    let (x, y) = self.edge_ends(j);
                    let w = if x == u { y } else { x };
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        st.push(w);
                    }
                }
            }
        }
        let cycle: Vec<bool> = members
            .iter()
            .map(|vs| vs.iter().all(|&u| degree[u] == 2))
            .collect();
        rest.into_iter()
            .filter(|&i| i < self.ends.len() && !cycle[comp[self.edge_ends(i).0]])
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentShape {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub tree_components: usize,
}

/// Outcome of the two-color seeded greedy.
#[derive(Debug, Clone)]
pub struct BipartiteResult {
    pub color: Color,
    /// Gain of the seed set.
    pub gain: i64,
    /// Size of the seed set.
    pub seed_size: usize,
    pub cutset: CutSet,
    pub rectangulation: Rectangulation,
}

/// Seeds the greedy with the maximizer of the better color.
pub fn bipartite_pipeline(net: &DualNet, order: VertexOrder) -> Result<BipartiteResult> {
    require_bipartite(net)?;
    let mut best: Option<(Color, i64, Vec<Segment>)> = None;
    for color in [Color::Blue, Color::Red] {
        let gb = GainGraph::build(net, color);
        let a = gb.segments_of(&gb.max_gain_set());
        let g = gain_def(net, &a).g;
        if best.as_ref().is_none_or(|(_, bg, _)| g > *bg) {
            best = Some((color, g, a));
        }
    }
    let (color, gain, seed) = best.expect("two colors tried");
    let seed_size = seed.len();
    let cutset = greedy_rectangulate(net, &CutSet::new(seed), order);
    let rectangulation = extract_rectangulation(net, &cutset)?;
    Ok(BipartiteResult {
        color,
        gain,
        seed_size,
        cutset,
        rectangulation,
    })
}

/// Element of `B` (for the segment's color) that contains `s`.
pub fn extend_to_maximal(net: &DualNet, s: &Segment) -> Option<Segment> {
    let color = s.color(net)?;
    let e = s.edges().next()?;
    blue_segments(net, color)
        .into_iter()
        .find(|b| b.edges().any(|x| x == e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitGain {
    pub g: i64,
    pub g_blue: i64,
    pub g_red: i64,
}

impl SplitGain {
    pub fn holds(&self) -> bool {
        self.g_blue + self.g_red >= self.g
    }
}

/// Gains of a saturating cut-set and of its blue and red parts, each part
/// extended to full elements of `B`.
pub fn split_gain_check(net: &DualNet, cutset: &CutSet) -> SplitGain {
    let g = gain_def(net, &cutset.segments).g;
    let part = |color: Color| {
        let mut chosen: Vec<Segment> = Vec::new();
        for s in &cutset.segments {
            if s.color(net) != Some(color) {
                continue;
            }
            if let Some(m) = extend_to_maximal(net, s) {
                if !chosen.contains(&m) {
                    chosen.push(m);
                }
            }
        }
        gain_def(net, &chosen).g
    };
    SplitGain {
        g,
        g_blue: part(Color::Blue),
        g_red: part(Color::Red),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::build_planarization;
    use crate::generate::grid;
    use crate::net::net_of;

    #[test]
    fn grid_has_column_paths() {
        let net = net_of(&build_planarization(&grid(4, 4).unwrap()).unwrap()).unwrap();
        require_bipartite(&net).unwrap();
        let b = blue_segments(&net, Color::Blue);
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|s| s.len() == 4));
        assert_eq!(gain_def(&net, &[]).g, 0);
        let res = bipartite_pipeline(&net, VertexOrder::ById).unwrap();
        assert_eq!((res.rectangulation.r, res.seed_size), (1, 0));
    }

    #[test]
    fn uncolored_input_is_rejected() {
        let net =
            net_of(&build_planarization(&crate::generate::toothed(1).unwrap()).unwrap()).unwrap();
        assert!(matches!(
            require_bipartite(&net),
            Err(Error::NotBipartite(_))
        ));
    }

    fn best_by_identity(gb: &GainGraph) -> (i64, Vec<usize>) {
        let m = gb.ends.len();
        let mut best = (0, Vec::new());
        for mask in 1u32..1 << m {
            let sub: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            let g = gb.gain_identity(&sub);
            if g > best.0 || (g == best.0 && sub.len() < best.1.len()) {
                best = (g, sub);
            }
        }
        best
    }

    #[test]
    fn weak_theta_gains_one() {
        // two weak vertices joined by three paths of two segments each
        let strong = vec![false; 5];
        let ends = vec![(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)];
        let gb = GainGraph::from_parts(Color::Blue, strong, ends);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(gb.gain_identity(&all), 1);
        assert_eq!(gb.gain_formula(&all), 1);
        assert_eq!(gb.max_gain_set(), all);
        assert_eq!(best_by_identity(&gb), (1, all));
    }

    #[test]
    fn small_shapes() {
        let path = GainGraph::from_parts(Color::Blue, vec![false; 3], vec![(0, 1), (1, 2)]);
        assert!(path.max_gain_set().is_empty());
        assert_eq!(best_by_identity(&path), (0, vec![]));

        let strong_pair = GainGraph::from_parts(Color::Blue, vec![true, true], vec![(0, 1)]);
        assert_eq!(strong_pair.gain_identity(&[0]), 1);
        assert_eq!(strong_pair.max_gain_set(), vec![0]);

        let cycle =
            GainGraph::from_parts(Color::Blue, vec![false; 3], vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(cycle.gain_identity(&[0, 1, 2]), 0);
        assert!(cycle.max_gain_set().is_empty());

        // the isolated weak-weak segment is where the closed form slips
        let lone = GainGraph::from_parts(Color::Blue, vec![false; 2], vec![(0, 1)]);
        assert_eq!(lone.gain_identity(&[0]), -1);
        assert_eq!(lone.gain_formula(&[0]), -2);
        assert_eq!(lone.isolated_weak_segments(&[0]), 1);
        assert_eq!(lone.bicircular(&[0]), (1, 0));
    }
}
