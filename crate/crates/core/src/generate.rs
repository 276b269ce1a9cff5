//! Instance generators.
//!
//! Everything geometric is done on integer polylines with exact rational
//! comparisons, so generated instances are reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{Arrangement, Color, CrossingRecord, InstanceFile, StringRecord};
use crate::error::{Error, Result};
use crate::oracle::ortho::OrthoPolygon;

type Point = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    pub color: Option<Color>,
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn open(color: Option<Color>, points: Vec<Point>) -> Self {
        Polyline {
            color,
            points,
            closed: false,
        }
    }

    fn pieces(&self) -> Vec<(Point, Point)> {
        let n = self.points.len();
        let mut out: Vec<(Point, Point)> = self.points.windows(2).map(|w| (w[0], w[1])).collect();
        if self.closed && n > 2 {
            out.push((self.points[n - 1], self.points[0]));
        }
        out
    }
}

fn cross(a: Point, b: Point) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

fn sub(a: Point, b: Point) -> Point {
    (a.0 - b.0, a.1 - b.1)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Parameter `num / den` along a piece, `den > 0`.
#[derive(Debug, Clone, Copy)]
struct Param {
    num: i128,
    den: i128,
}

impl Param {
    fn cmp(&self, other: &Param) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

enum Meet {
    None,
    Proper(Param, Param, (i128, i128, i128)),
    Degenerate,
}

/// Intersection of closed pieces `p0p1` and `q0q1`.
fn meet(p: (Point, Point), q: (Point, Point)) -> Meet {
    let r = sub(p.1, p.0);
    let s = sub(q.1, q.0);
    let qp = sub(q.0, p.0);
    let mut den = cross(r, s);
    let mut tn = cross(qp, s);
    let mut un = cross(qp, r);
    if den == 0 {
        if cross(qp, r) != 0 {
            return Meet::None;
        }
        // collinear: overlapping projections are degenerate
        let dot = |a: Point, b: Point| a.0 as i128 * b.0 as i128 + a.1 as i128 * b.1 as i128;
        let rr = dot(r, r);
        let t0 = dot(qp, r);
        let t1 = dot(sub(q.1, p.0), r);
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        return if hi < 0 || lo > rr {
            Meet::None
        } else {
            Meet::Degenerate
        };
    }
    if den < 0 {
        den = -den;
        tn = -tn;
        un = -un;
    }
    if tn < 0 || tn > den || un < 0 || un > den {
        return Meet::None;
    }
    if tn == 0 || tn == den || un == 0 || un == den {
        return Meet::Degenerate;
    }
    let x = p.0 .0 as i128 * den + tn * r.0 as i128;
    let y = p.0 .1 as i128 * den + tn * r.1 as i128;
    let g = gcd(gcd(x, y), den);
    Meet::Proper(
        Param { num: tn, den },
        Param { num: un, den },
        (x / g, y / g, den / g),
    )
}

/// Builds the combinatorial instance of a family of polylines.
///
/// Rejects touching pieces, crossings through polyline vertices, and
/// triple points.
pub fn arrangement_from_polylines(lines: &[Polyline]) -> Result<Arrangement> {
    struct Hit {
        strings: (usize, usize),
        pos: [(usize, Param); 2],
        sign: i8,
    }
    let pieces: Vec<Vec<(Point, Point)>> = lines.iter().map(Polyline::pieces).collect();
    let mut hits: Vec<Hit> = Vec::new();
    let mut points: HashMap<(i128, i128, i128), usize> = HashMap::new();
    for a in 0..lines.len() {
        for b in a..lines.len() {
            for (i, &pa) in pieces[a].iter().enumerate() {
                for (j, &pb) in pieces[b].iter().enumerate() {
                    if a == b {
                        let n = pieces[a].len();
                        let adjacent = j == i + 1 || (lines[a].closed && i == 0 && j + 1 == n);
                        if j <= i || adjacent {
                            continue;
                        }
                    }
                    match meet(pa, pb) {
                        Meet::None => {}
                        Meet::Degenerate => {
                            return Err(Error::InvalidSpec(format!(
                                "polylines {a} and {b} touch or meet at a vertex"
                            )))
                        }
                        Meet::Proper(t, u, at) => {
                            if points.insert(at, hits.len()).is_some() {
                                return Err(Error::InvalidSpec("triple point".into()));
                            }
                            let c = cross(sub(pa.1, pa.0), sub(pb.1, pb.0));
                            hits.push(Hit {
                                strings: (a, b),
                                pos: [(i, t), (j, u)],
                                sign: if c > 0 { 1 } else { -1 },
                            });
                        }
                    }
                }
            }
        }
    }
    let mut along: Vec<Vec<(usize, Param, usize)>> = vec![Vec::new(); lines.len()];
    for (k, h) in hits.iter().enumerate() {
        along[h.strings.0].push((h.pos[0].0, h.pos[0].1, k));
        along[h.strings.1].push((h.pos[1].0, h.pos[1].1, k));
    }
    let strings = lines
        .iter()
        .enumerate()
        .map(|(s, line)| {
            let list = &mut along[s];
            list.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
            StringRecord {
                id: s as i64,
                color: line.color,
                crossings: list.iter().map(|x| x.2 as i64).collect(),
                closed: line.closed,
            }
        })
        .collect();
    let crossings = hits
        .iter()
        .enumerate()
        .map(|(k, h)| CrossingRecord {
            id: k as i64,
            strings: vec![h.strings.0 as i64, h.strings.1 as i64],
            sign: h.sign as i64,
        })
        .collect();
    Arrangement::from_file(&InstanceFile { strings, crossings })
}

/// Generator families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Random chords of points in convex position.
    Circular { n: usize },
    /// Circular chords whose crossing graph is bipartite, two-colored.
    CircularBipartite { n: usize },
    /// Row and column chords of a random orthogonal polygon.
    Bilaminar { cells: usize },
    /// `rows` red horizontals crossing `cols` blue verticals.
    Grid { rows: usize, cols: usize },
    /// Two horizontals, `k + 1` verticals, and `k` teeth.
    Toothed { k: usize },
    /// The 16-crossing single-bundle core.
    C4xC4,
    /// A closed curve crossed by `m` spokes.
    Ring { m: usize },
    /// A self-crossing curve whose loop is crossed by `m` spokes.
    Loop { m: usize },
    /// Two strings crossing twice.
    Lens,
    /// Random straight segments.
    Segments { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Circular { n } => write!(f, "circular:{n}"),
            Family::CircularBipartite { n } => write!(f, "circular-bipartite:{n}"),
            Family::Bilaminar { cells } => write!(f, "bilaminar:{cells}"),
            Family::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}"),
            Family::Toothed { k } => write!(f, "toothed:{k}"),
            Family::C4xC4 => write!(f, "c4xc4"),
            Family::Ring { m } => write!(f, "ring:{m}"),
            Family::Loop { m } => write!(f, "loop:{m}"),
            Family::Lens => write!(f, "lens"),
            Family::Segments { n } => write!(f, "segments:{n}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `name[:size]`, e.g. `circular:8`, `grid:4x4`, `c4xc4`.
    fn from_str(s: &str) -> Result<Family> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = |default: usize| -> Result<usize> {
            if arg.is_empty() {
                Ok(default)
            } else {
                arg.parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad size {arg:?}")))
            }
        };
        Ok(match name {
            "circular" => Family::Circular { n: num(6)? },
            "circular-bipartite" => Family::CircularBipartite { n: num(6)? },
            "bilaminar" => Family::Bilaminar { cells: num(12)? },
            "grid" => {
                let (r, c) = if arg.is_empty() {
                    ("4", "4")
                } else {
                    arg.split_once('x').unwrap_or((arg, arg))
                };
                let p = |x: &str| {
                    x.parse()
                        .map_err(|_| Error::InvalidSpec(format!("bad grid size {arg:?}")))
                };
                Family::Grid {
                    rows: p(r)?,
                    cols: p(c)?,
                }
            }
            "toothed" => Family::Toothed { k: num(3)? },
            "c4xc4" => Family::C4xC4,
            "ring" => Family::Ring { m: num(6)? },
            "loop" => Family::Loop { m: num(4)? },
            "lens" => Family::Lens,
            "segments" => Family::Segments { n: num(8)? },
            other => return Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        })
    }
}

/// The polygon behind a bilaminar spec, drawn from the same random stream.
pub fn bilaminar_polygon(spec: &GeneratorSpec) -> Option<OrthoPolygon> {
    match spec.family {
        Family::Bilaminar { cells } if cells > 0 => Some(OrthoPolygon::random(
            cells,
            &mut ChaCha8Rng::seed_from_u64(spec.seed),
        )),
        _ => None,
    }
}

/// Deterministic instance for a spec.
pub fn generate(spec: &GeneratorSpec) -> Result<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::Circular { n } => circular(n, None, &mut rng),
        Family::CircularBipartite { n } => circular_bipartite(n, &mut rng),
        Family::Bilaminar { cells } => {
            if cells == 0 {
                return Err(Error::InvalidSpec(
                    "bilaminar needs at least one cell".into(),
                ));
            }
            bilaminar(&OrthoPolygon::random(cells, &mut rng))
        }
        Family::Grid { rows, cols } => grid(rows, cols),
        Family::Toothed { k } => toothed(k),
        Family::C4xC4 => grid(4, 4),
        Family::Ring { m } => ring(m),
        Family::Loop { m } => loop_curve(m),
        Family::Lens => lens(),
        Family::Segments { n } => segments(n, &mut rng),
    }
}

const RETRIES: usize = 1000;

/// Chord endpoints on the parabola `y = x^2`, which is in convex position.
fn circular(n: usize, colors: Option<&[Color]>, rng: &mut ChaCha8Rng) -> Result<Arrangement> {
    if n == 0 {
        return Err(Error::InvalidSpec(
            "circular needs at least one chord".into(),
        ));
    }
    for _ in 0..RETRIES {
        let mut xs: Vec<i64> = (-(4 * n as i64)..=(4 * n as i64)).collect();
        xs.shuffle(rng);
        let pts: Vec<i64> = xs[..2 * n].to_vec();
        let lines: Vec<Polyline> = (0..n)
            .map(|i| {
                let (a, b) = (pts[2 * i], pts[2 * i + 1]);
                Polyline::open(colors.map(|c| c[i]), vec![(a, a * a), (b, b * b)])
            })
            .collect();
        if let Ok(arr) = arrangement_from_polylines(&lines) {
            return Ok(arr);
        }
    }
    Err(Error::InvalidSpec("no generic chord set found".into()))
}

/// Whether chords `(a, b)` and `(c, d)` of a convex point set cross.
fn interleave(p: (i64, i64), q: (i64, i64)) -> bool {
    let inside = |x: i64, (a, b): (i64, i64)| a.min(b) < x && x < a.max(b);
    inside(q.0, p) != inside(q.1, p)
}

fn circular_bipartite(n: usize, rng: &mut ChaCha8Rng) -> Result<Arrangement> {
    if n == 0 {
        return Err(Error::InvalidSpec(
            "circular needs at least one chord".into(),
        ));
    }
    for _ in 0..RETRIES {
        let mut order: Vec<i64> = (0..2 * n as i64).collect();
        order.shuffle(rng);
        let chords: Vec<(i64, i64)> = (0..n).map(|i| (order[2 * i], order[2 * i + 1])).collect();
        let mut color: Vec<Option<Color>> = vec![None; n];
        let mut ok = true;
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(Color::Blue);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for w in 0..n {
                    if w == u || !interleave(chords[u], chords[w]) {
                        continue;
                    }
                    let want = color[u].unwrap().other();
                    match color[w] {
                        None => {
                            color[w] = Some(want);
                            stack.push(w);
                        }
                        Some(c) if c != want => ok = false,
                        _ => {}
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        let colors: Vec<Color> = color.into_iter().map(Option::unwrap).collect();
        // place the chosen cyclic order on the parabola with spread-out x
        let mut sub = ChaCha8Rng::seed_from_u64(rng.gen());
        for _ in 0..RETRIES {
            let mut xs: Vec<i64> = (0..8 * n as i64).collect();
            xs.shuffle(&mut sub);
            let mut xs = xs[..2 * n].to_vec();
            xs.sort_unstable();
            let lines: Vec<Polyline> = chords
                .iter()
                .zip(&colors)
                .map(|(&(a, b), &c)| {
                    let (xa, xb) = (xs[a as usize], xs[b as usize]);
                    Polyline::open(Some(c), vec![(xa, xa * xa), (xb, xb * xb)])
                })
                .collect();
            if let Ok(arr) = arrangement_from_polylines(&lines) {
                return Ok(arr);
            }
        }
    }
    Err(Error::InvalidSpec("no bipartite chord set found".into()))
}

/// Row runs (red) and column runs (blue) through cell centers.
pub fn bilaminar(poly: &OrthoPolygon) -> Result<Arrangement> {
    let mut lines = Vec::new();
    for (y, x0, x1) in poly.row_runs() {
        lines.push(Polyline::open(
            Some(Color::Red),
            vec![(2 * x0, 2 * y + 1), (2 * x1 + 2, 2 * y + 1)],
        ));
    }
    for (x, y0, y1) in poly.column_runs() {
        lines.push(Polyline::open(
            Some(Color::Blue),
            vec![(2 * x + 1, 2 * y0), (2 * x + 1, 2 * y1 + 2)],
        ));
    }
    arrangement_from_polylines(&lines)
}

pub fn grid(rows: usize, cols: usize) -> Result<Arrangement> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidSpec("grid needs positive sizes".into()));
    }
    let poly = OrthoPolygon::rectangle(cols as i64, rows as i64);
    bilaminar(&poly)
}

/// Horizontals `a` (top) and `b` (bottom), verticals `v_0..v_k`, and a
/// tooth between consecutive verticals hanging down through `a`.
pub fn toothed(k: usize) -> Result<Arrangement> {
    if k == 0 {
        return Err(Error::InvalidSpec("toothed needs k >= 1".into()));
    }
    let w = 2 * k as i64;
    let mut lines = vec![
        Polyline::open(None, vec![(-1, 10), (w + 1, 10)]),
        Polyline::open(None, vec![(-1, 0), (w + 1, 0)]),
    ];
    for i in 0..=k as i64 {
        lines.push(Polyline::open(None, vec![(2 * i, -1), (2 * i, 11)]));
    }
    for i in 0..k as i64 {
        lines.push(Polyline::open(None, vec![(2 * i + 1, 11), (2 * i + 1, 5)]));
    }
    arrangement_from_polylines(&lines)
}

/// Closed square curve with `m` outward spokes.
pub fn ring(m: usize) -> Result<Arrangement> {
    if m < 2 {
        return Err(Error::InvalidSpec("ring needs m >= 2".into()));
    }
    let s = 4 * m as i64;
    let mut lines = vec![Polyline {
        color: None,
        points: vec![(0, 0), (s, 0), (s, s), (0, s)],
        closed: true,
    }];
    for i in 0..m as i64 {
        let x = 2 + 4 * i;
        lines.push(Polyline::open(None, vec![(x, 2), (x, -2)]));
    }
    arrangement_from_polylines(&lines)
}

/// A curve that runs right, loops around counterclockwise, and crosses
/// itself; `m` spokes cross the loop.
pub fn loop_curve(m: usize) -> Result<Arrangement> {
    if m < 1 {
        return Err(Error::InvalidSpec("loop needs m >= 1".into()));
    }
    let s = 4 * m as i64;
    let lines = {
        let mut v = vec![Polyline::open(
            None,
            vec![(-4, 1), (s, 1), (s, s), (1, s), (1, -4)],
        )];
        for i in 0..m as i64 {
            let x = 3 + 4 * i;
            v.push(Polyline::open(None, vec![(x, 2), (x, -2)]));
        }
        v
    };
    arrangement_from_polylines(&lines)
}

/// Two strings crossing twice.
pub fn lens() -> Result<Arrangement> {
    arrangement_from_polylines(&[
        Polyline::open(None, vec![(0, 0), (10, 0)]),
        Polyline::open(None, vec![(1, -2), (3, 2), (7, 2), (9, -2)]),
    ])
}

fn segments(n: usize, rng: &mut ChaCha8Rng) -> Result<Arrangement> {
    if n == 0 {
        return Err(Error::InvalidSpec("segments needs n >= 1".into()));
    }
    let range = 8 * n as i64;
    for _ in 0..RETRIES {
        let lines: Vec<Polyline> = (0..n)
            .map(|_| {
                let mut p = || (rng.gen_range(0..range), rng.gen_range(0..range));
                let (a, b) = (p(), p());
                Polyline::open(None, vec![a, b])
            })
            .collect();
        if lines.iter().any(|l| l.points[0] == l.points[1]) {
            continue;
        }
        if let Ok(arr) = arrangement_from_polylines(&lines) {
            return Ok(arr);
        }
    }
    Err(Error::InvalidSpec("no generic segment set found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_sign_sign_convention() {
        // horizontal left-to-right, vertical bottom-to-top: counterclockwise turn
        let arr = arrangement_from_polylines(&[
            Polyline::open(None, vec![(0, 0), (2, 0)]),
            Polyline::open(None, vec![(1, -1), (1, 1)]),
        ])
        .unwrap();
        assert_eq!(arr.crossings.len(), 1);
        assert_eq!(arr.crossings[0].sign, 1);
    }

    #[test]
    fn touching_and_triple_points_rejected() {
        let touch = arrangement_from_polylines(&[
            Polyline::open(None, vec![(0, 0), (2, 0)]),
            Polyline::open(None, vec![(1, 0), (1, 1)]),
        ]);
        assert!(touch.is_err());
        let triple = arrangement_from_polylines(&[
            Polyline::open(None, vec![(-1, 0), (1, 0)]),
            Polyline::open(None, vec![(0, -1), (0, 1)]),
            Polyline::open(None, vec![(-1, -1), (1, 1)]),
        ]);
        assert!(triple.is_err());
    }

    #[test]
    fn crossing_order_along_strings() {
        let arr = grid(2, 3).unwrap();
        assert_eq!(arr.crossings.len(), 6);
        for s in &arr.strings {
            assert!(!s.crossings.is_empty());
        }
        assert_eq!(arr.num_arcs(), 2 * 4 + 3 * 3);
    }

    #[test]
    fn family_parsing_round_trips() {
        for s in [
            "circular:7",
            "grid:3x5",
            "toothed:4",
            "c4xc4",
            "ring:6",
            "lens",
            "segments:5",
        ] {
            assert_eq!(s.parse::<Family>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GeneratorSpec {
            family: Family::Circular { n: 8 },
            seed: 7,
        };
        assert_eq!(
            generate(&spec).unwrap().to_json(),
            generate(&spec).unwrap().to_json()
        );
    }
}
