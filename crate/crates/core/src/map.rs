//! Combinatorial maps given by a rotation system.
//!
//! Half-edges come in twin pairs `2e` / `2e + 1` for edge `e`. Every vertex
//! stores its outgoing half-edges in counterclockwise order. Faces are traced
//! with the face on the left of each half-edge, so the corner between
//! `rotation[v][i]` and `rotation[v][i + 1]` belongs to the face of
//! `rotation[v][i]`.

/// Twin of a half-edge.
#[inline]
pub fn twin(h: usize) -> usize {
    h ^ 1
}

/// Edge carrying a half-edge.
#[inline]
pub fn edge_of(h: usize) -> usize {
    h >> 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgeMap {
    origin: Vec<usize>,
    rotation: Vec<Vec<usize>>,
    position: Vec<usize>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
}

impl HalfEdgeMap {
    /// Builds a map from per-vertex counterclockwise rotations.
    ///
    /// Every half-edge `0..2E` must occur in exactly one rotation.
    pub fn from_rotations(rotation: Vec<Vec<usize>>) -> Self {
        let half_edges: usize = rotation.iter().map(Vec::len).sum();
        assert!(half_edges.is_multiple_of(2), "odd number of half-edges");
        let mut origin = vec![usize::MAX; half_edges];
        let mut position = vec![usize::MAX; half_edges];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                assert!(origin[h] == usize::MAX, "half-edge {h} listed twice");
                origin[h] = v;
                position[h] = i;
            }
        }
        assert!(origin.iter().all(|&o| o != usize::MAX), "missing half-edge");
        let mut map = HalfEdgeMap {
            origin,
            rotation,
            position,
            face_of: vec![usize::MAX; half_edges],
            faces: Vec::new(),
        };
        map.trace_faces();
        map
    }

    fn trace_faces(&mut self) {
        for start in 0..self.origin.len() {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut walk = Vec::new();
            let mut h = start;
            loop {
                self.face_of[h] = f;
                walk.push(h);
                h = self.face_next(h);
                if h == start {
                    break;
                }
            }
            self.faces.push(walk);
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_edges(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn num_half_edges(&self) -> usize {
        self.origin.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn origin(&self, h: usize) -> usize {
        self.origin[h]
    }

    pub fn head(&self, h: usize) -> usize {
        self.origin[twin(h)]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Index of `h` in the rotation at its origin.
    pub fn position(&self, h: usize) -> usize {
        self.position[h]
    }

    pub fn ccw_next(&self, h: usize) -> usize {
        let rot = &self.rotation[self.origin[h]];
        rot[(self.position[h] + 1) % rot.len()]
    }

    pub fn cw_next(&self, h: usize) -> usize {
        let rot = &self.rotation[self.origin[h]];
        rot[(self.position[h] + rot.len() - 1) % rot.len()]
    }

    /// Successor of `h` along the boundary walk of its face.
    pub fn face_next(&self, h: usize) -> usize {
        self.cw_next(twin(h))
    }

    pub fn face_of(&self, h: usize) -> usize {
        self.face_of[h]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    /// Face owning the corner after position `i` at `v`.
    pub fn corner_face(&self, v: usize, i: usize) -> usize {
        self.face_of[self.rotation[v][i]]
    }

    /// Connected components over vertices; returns component id per vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.num_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &h in &self.rotation[v] {
                    let w = self.head(h);
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }
}
