//! SVG drawings of instances, rectangulations and bundlings.
//!
//! Crossings are placed by a barycentric (Tutte) embedding of the
//! planarization with the longest face pinned to a circle; string ends are
//! extended straight past their last crossing. Output depends only on the
//! input, so equal inputs give byte-identical documents.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::arrangement::{Color, Planarization, VertexKind};
use crate::map::edge_of;
use crate::net::DualNet;
use crate::rectangulation::{Bundling, Rectangulation};

const SIZE: f64 = 600.0;
const RADIUS: f64 = 240.0;

/// Position of every planarization vertex.
#[derive(Debug, Clone)]
pub struct Layout {
    pub points: Vec<(f64, f64)>,
}

impl Layout {
    pub fn of(p: &Planarization) -> Layout {
        let n = p.num_vertices();
        let is_crossing: Vec<bool> = p
            .vertex_kind
            .iter()
            .map(|k| matches!(k, VertexKind::Crossing(_)))
            .collect();
        let mut points = vec![(0.0, 0.0); n];
        let mut fixed = vec![false; n];

        // outer face: the walk with most distinct crossings
        let outer: Vec<usize> = p
            .map
            .faces()
            .iter()
            .map(|walk| {
                let mut seen = BTreeSet::new();
                walk.iter()
                    .map(|&h| p.map.origin(h))
                    .filter(|&v| is_crossing[v] && seen.insert(v))
                    .collect::<Vec<_>>()
            })
            .max_by_key(Vec::len)
            .unwrap_or_default();
        let k = outer.len().max(1) as f64;
        for (i, &v) in outer.iter().enumerate() {
            let a = std::f64::consts::TAU * i as f64 / k;
            points[v] = (RADIUS * a.cos(), RADIUS * a.sin());
            fixed[v] = true;
        }

        let nbrs: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                p.map
                    .rotation(v)
                    .iter()
                    .map(|&h| p.map.head(h))
                    .filter(|&w| w != v && is_crossing[w])
                    .collect()
            })
            .collect();
        for _ in 0..2000 {
            let mut moved: f64 = 0.0;
            for v in 0..n {
                if fixed[v] || !is_crossing[v] || nbrs[v].is_empty() {
                    continue;
                }
                let m = nbrs[v].len() as f64;
                let x = nbrs[v].iter().map(|&w| points[w].0).sum::<f64>() / m;
                let y = nbrs[v].iter().map(|&w| points[w].1).sum::<f64>() / m;
                moved = moved.max((x - points[v].0).abs() + (y - points[v].1).abs());
                points[v] = (x, y);
            }
            if moved < 1e-9 {
                break;
            }
        }

        // string ends continue the direction of their last arc
        let cv = crossing_vertex(p);
        for (v, kind) in p.vertex_kind.iter().enumerate() {
            let VertexKind::Endpoint { string, end } = *kind else {
                continue;
            };
            let s = &p.arrangement.strings[string];
            let (last, prev) = if end == 0 {
                (s.crossings.first(), s.crossings.get(1))
            } else {
                let l = s.crossings.len();
                (
                    s.crossings.last(),
                    l.checked_sub(2).and_then(|i| s.crossings.get(i)),
                )
            };
            let Some(&c) = last else { continue };
            let at = points[cv[c]];
            let dir = match prev {
                Some(&q) if q != c => (at.0 - points[cv[q]].0, at.1 - points[cv[q]].1),
                _ => (1.0, if end == 0 { 0.5 } else { -0.5 }),
            };
            let len = (dir.0 * dir.0 + dir.1 * dir.1).sqrt().max(1e-9);
            points[v] = (at.0 + 30.0 * dir.0 / len, at.1 + 30.0 * dir.1 / len);
        }
        Layout { points }
    }

    /// Midpoint of a planarization edge.
    pub fn midpoint(&self, p: &Planarization, e: usize) -> (f64, f64) {
        let (a, b) = (
            self.points[p.map.origin(2 * e)],
            self.points[p.map.head(2 * e)],
        );
        ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
    }
}

fn xy(p: (f64, f64)) -> (f64, f64) {
    (p.0 + SIZE / 2.0, p.1 + SIZE / 2.0)
}

fn stroke(c: Option<Color>) -> &'static str {
    match c {
        Some(Color::Blue) => "#1f5fbf",
        Some(Color::Red) => "#c0392b",
        None => "#333333",
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    out.push_str(
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#222"/></marker></defs>"##,
    );
    out.push('\n');
}

fn strings(out: &mut String, p: &Planarization, lay: &Layout) {
    for (si, s) in p.arrangement.strings.iter().enumerate() {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for &a in &p.string_arcs[si] {
            let (u, v) = (p.map.origin(2 * a), p.map.head(2 * a));
            if pts.is_empty() {
                pts.push(xy(lay.points[u]));
            }
            pts.push(xy(lay.points[v]));
        }
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            out,
            r#"<polyline class="string" data-id="{}" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            s.id,
            path.join(" "),
            stroke(s.color)
        );
    }
}

fn crossings(out: &mut String, p: &Planarization, lay: &Layout) {
    for (v, kind) in p.vertex_kind.iter().enumerate() {
        if let VertexKind::Crossing(c) = kind {
            let (x, y) = xy(lay.points[v]);
            let _ = writeln!(
                out,
                r##"<circle class="crossing" data-id="{}" cx="{x:.2}" cy="{y:.2}" r="3" fill="#000"/>"##,
                p.arrangement.crossings[*c].id
            );
        }
    }
}

/// Crossing vertex of every crossing index.
fn crossing_vertex(p: &Planarization) -> Vec<usize> {
    let mut at = vec![0; p.arrangement.crossings.len()];
    for (v, kind) in p.vertex_kind.iter().enumerate() {
        if let VertexKind::Crossing(c) = kind {
            at[*c] = v;
        }
    }
    at
}

/// The arrangement alone.
pub fn render_instance(p: &Planarization) -> String {
    let lay = Layout::of(p);
    let mut out = String::new();
    header(&mut out);
    strings(&mut out, p, &lay);
    crossings(&mut out, p, &lay);
    out.push_str("</svg>\n");
    out
}

/// The arrangement with toothed holes marked, plus optional segments and bundles.
pub fn render_net(
    net: &DualNet,
    rect: Option<&Rectangulation>,
    bundling: Option<&Bundling>,
) -> String {
    let p = net.planarization();
    let lay = Layout::of(p);
    let at = crossing_vertex(p);
    let mut out = String::new();
    header(&mut out);
    if let Some(b) = bundling {
        let count = b.count().max(1);
        for k in 0..b.count() {
            let hue = 360.0 * k as f64 / count as f64;
            let _ = writeln!(
                out,
                r#"<g class="bundle" data-id="{k}" fill="hsl({hue:.0},70%,75%)" fill-opacity="0.6">"#
            );
            for (c, &bk) in b.bundle_of.iter().enumerate() {
                if bk == k {
                    let (x, y) = xy(lay.points[at[c]]);
                    let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="12"/>"#);
                }
            }
            out.push_str("</g>\n");
        }
    }
    strings(&mut out, p, &lay);
    crossings(&mut out, p, &lay);
    for f in net.toothed_holes() {
        let mids: Vec<(f64, f64)> = net
            .map
            .face(f)
            .iter()
            .map(|&h| lay.midpoint(p, edge_of(h)))
            .collect();
        let m = mids.len().max(1) as f64;
        let (x, y) = xy((
            mids.iter().map(|q| q.0).sum::<f64>() / m,
            mids.iter().map(|q| q.1).sum::<f64>() / m,
        ));
        let _ = writeln!(
            out,
            r##"<rect class="tooth" x="{:.2}" y="{:.2}" width="8" height="8" fill="none" stroke="#8e44ad"/>"##,
            x - 4.0,
            y - 4.0
        );
    }
    if let Some(r) = rect {
        for s in &r.cutset.segments {
            let pts: Vec<String> = s
                .edges()
                .map(|e| {
                    let (x, y) = xy(lay.midpoint(p, e));
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                r##"<polyline class="segment" points="{}" fill="none" stroke="#222" stroke-width="1.5" stroke-dasharray="4 2" marker-end="url(#arrow)"/>"##,
                pts.join(" ")
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::build_planarization;
    use crate::generate::{grid, toothed};
    use crate::net::net_of;
    use crate::rectangulation::{extract_rectangulation, to_bundling, CutSet};

    #[test]
    fn plus_sign_has_one_bundle() {
        let net = net_of(&build_planarization(&grid(1, 1).unwrap()).unwrap()).unwrap();
        let rect = extract_rectangulation(&net, &CutSet::default()).unwrap();
        let b = to_bundling(&net, &rect).unwrap();
        let svg = render_net(&net, Some(&rect), Some(&b));
        assert_eq!(svg.matches(r#"<g class="bundle""#).count(), 1);
        assert_eq!(svg, render_net(&net, Some(&rect), Some(&b)));
    }

    #[test]
    fn toothed_shows_teeth() {
        let net = net_of(&build_planarization(&toothed(5).unwrap()).unwrap()).unwrap();
        let svg = render_net(&net, None, None);
        assert_eq!(svg.matches(r#"class="tooth""#).count(), 5);
        assert!(!svg.contains("NaN"));
    }
}
