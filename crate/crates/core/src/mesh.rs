//! Combinatorial Δ-complex triangulations of connected closed orientable surfaces.
//!
//! Edges are identified by the pairing of face sides, never by their vertex
//! pair, so loop edges and parallel edges (one-vertex tori, minimal genus-2
//! triangulations) are first-class. Side `k` of a face runs from slot `k` to
//! slot `k + 1 (mod 3)`; the corner at slot `a` is opposite side `a + 1`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub usize);

/// Handle into the edge table. A flip keeps the slot index but the handle
/// then names the new diagonal; every other handle is untouched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

/// Corner `3 * face + slot`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerId(pub usize);

impl CornerId {
    pub fn new(face: FaceId, slot: usize) -> Self {
        CornerId(3 * face.0 + slot)
    }
    pub fn face(self) -> FaceId {
        FaceId(self.0 / 3)
    }
    pub fn slot(self) -> usize {
        self.0 % 3
    }
}

/// One side of one face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub face: FaceId,
    pub side: usize,
}

impl Side {
    pub fn new(face: usize, side: usize) -> Self {
        Side {
            face: FaceId(face),
            side,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRecord {
    pub sides: [Side; 2],
}

/// The quadrilateral around an interior edge, in the labelling used by flips:
/// faces `ijk` and `jil`, with `i -> j` the edge as seen from the first face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeQuad {
    pub edge: EdgeId,
    pub faces: [FaceId; 2],
    /// slot of `i` in the first face (its side `k0` is the edge)
    pub k0: usize,
    /// slot of `j` in the second face (its side `k1` is the edge)
    pub k1: usize,
    pub vertices: [usize; 4], // i, j, k, l
}

impl EdgeQuad {
    pub fn corner_i_first(&self) -> CornerId {
        CornerId::new(self.faces[0], self.k0)
    }
    pub fn corner_j_first(&self) -> CornerId {
        CornerId::new(self.faces[0], (self.k0 + 1) % 3)
    }
    pub fn corner_k(&self) -> CornerId {
        CornerId::new(self.faces[0], (self.k0 + 2) % 3)
    }
    pub fn corner_j_second(&self) -> CornerId {
        CornerId::new(self.faces[1], self.k1)
    }
    pub fn corner_i_second(&self) -> CornerId {
        CornerId::new(self.faces[1], (self.k1 + 1) % 3)
    }
    pub fn corner_l(&self) -> CornerId {
        CornerId::new(self.faces[1], (self.k1 + 2) % 3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangulatedSurface {
    num_vertices: usize,
    faces: Vec<[usize; 3]>,
    face_edges: Vec<[EdgeId; 3]>,
    edges: Vec<EdgeRecord>,
}

/// Builds a simplicial-style mesh, pairing sides by reversed vertex pairs and
/// taking `N = max index + 1`. Use [`TriangulatedSurface::from_gluing`] for
/// complexes whose gluing is not determined by vertex labels.
pub fn build_mesh(faces: &[[usize; 3]]) -> Result<TriangulatedSurface> {
    let n = faces.iter().flatten().copied().max().map_or(0, |m| m + 1);
    TriangulatedSurface::from_faces(n, faces)
}

impl TriangulatedSurface {
    pub fn from_faces(num_vertices: usize, faces: &[[usize; 3]]) -> Result<Self> {
        check_faces(num_vertices, faces)?;
        let mut by_pair: HashMap<(usize, usize), Vec<Side>> = HashMap::new();
        for (f, tri) in faces.iter().enumerate() {
            for k in 0..3 {
                by_pair
                    .entry((tri[k], tri[(k + 1) % 3]))
                    .or_default()
                    .push(Side::new(f, k));
            }
        }
        let mut gluing = Vec::new();
        for (&(a, b), sides) in &by_pair {
            if a == b || sides.len() > 1 {
                return Err(Error::NonManifold(format!(
                    "sides {a}->{b} cannot be paired from vertex labels alone ({} candidates); \
                     supply an explicit gluing",
                    sides.len()
                )));
            }
            match by_pair.get(&(b, a)) {
                Some(partner) if partner.len() == 1 => {
                    if (a, b) < (b, a) {
                        gluing.push((sides[0], partner[0]));
                    }
                }
                Some(partner) => {
                    return Err(Error::NonManifold(format!(
                        "edge {a}-{b} has {} incidences",
                        1 + partner.len()
                    )))
                }
                None => {
                    return Err(Error::NonManifold(format!(
                        "side {a}->{b} of face {} has no partner",
                        sides[0].face.0
                    )))
                }
            }
        }
        gluing.sort();
        Self::from_gluing(num_vertices, faces, &gluing)
    }

    /// Builds a Δ-complex from faces plus an explicit pairing of face sides.
    /// Each pair is glued orientation-reversingly: side `a -> b` must meet a
    /// side `b -> a`.
    pub fn from_gluing(
        num_vertices: usize,
        faces: &[[usize; 3]],
        gluing: &[(Side, Side)],
    ) -> Result<Self> {
        check_faces(num_vertices, faces)?;
        let nf = faces.len();
        let mut face_edges = vec![[EdgeId(usize::MAX); 3]; nf];
        let mut edges = Vec::with_capacity(gluing.len());
        for &(s0, s1) in gluing {
            for s in [s0, s1] {
                if s.face.0 >= nf || s.side >= 3 {
                    return Err(Error::NonManifold(format!(
                        "gluing references missing side {}:{}",
                        s.face.0, s.side
                    )));
                }
                if face_edges[s.face.0][s.side].0 != usize::MAX {
                    return Err(Error::NonManifold(format!(
                        "side {}:{} is glued more than once",
                        s.face.0, s.side
                    )));
                }
                face_edges[s.face.0][s.side] = EdgeId(edges.len());
            }
            if s0 == s1 {
                return Err(Error::NonManifold(format!(
                    "side {}:{} glued to itself",
                    s0.face.0, s0.side
                )));
            }
            let (a0, b0) = side_vertices(faces, s0);
            let (a1, b1) = side_vertices(faces, s1);
            if !(a0 == b1 && b0 == a1) {
                if a0 == a1 && b0 == b1 {
                    return Err(Error::NonOrientable {
                        face: s0.face.0,
                        side: s0.side,
                    });
                }
                return Err(Error::NonManifold(format!(
                    "sides {}:{} ({a0}->{b0}) and {}:{} ({a1}->{b1}) do not match",
                    s0.face.0, s0.side, s1.face.0, s1.side
                )));
            }
            edges.push(EdgeRecord { sides: [s0, s1] });
        }
        for (f, fe) in face_edges.iter().enumerate() {
            for (k, e) in fe.iter().enumerate() {
                if e.0 == usize::MAX {
                    return Err(Error::NonManifold(format!("side {f}:{k} has no partner")));
                }
            }
        }
        let mesh = TriangulatedSurface {
            num_vertices,
            faces: faces.to_vec(),
            face_edges,
            edges,
        };
        mesh.check_connected()?;
        mesh.check_vertex_links()?;
        Ok(mesh)
    }

    fn check_connected(&self) -> Result<()> {
        let nf = self.faces.len();
        let mut seen = vec![false; nf];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(f) = queue.pop_front() {
            for e in self.face_edges[f] {
                for s in self.edges[e.0].sides {
                    if !seen[s.face.0] {
                        seen[s.face.0] = true;
                        queue.push_back(s.face.0);
                    }
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Every vertex label must own exactly one cycle of corners under the
    /// rotation around it; otherwise the label names a pinched point.
    fn check_vertex_links(&self) -> Result<()> {
        let nc = 3 * self.faces.len();
        let mut cycle_of = vec![usize::MAX; nc];
        let mut cycles_per_vertex = vec![0usize; self.num_vertices];
        for start in 0..nc {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let v = self.corner_vertex(CornerId(start));
            let mut c = CornerId(start);
            loop {
                cycle_of[c.0] = start;
                c = self.next_corner_around_vertex(c);
                if c.0 == start {
                    break;
                }
            }
            cycles_per_vertex[v] += 1;
        }
        for (v, &count) in cycles_per_vertex.iter().enumerate() {
            match count {
                1 => {}
                0 => return Err(Error::NonManifold(format!("vertex {v} has no corners"))),
                _ => {
                    return Err(Error::NonManifold(format!(
                        "vertex {v} has a disconnected link ({count} cycles)"
                    )))
                }
            }
        }
        Ok(())
    }

    /// The corner that follows `c` when rotating around its vertex across
    /// the side that leaves the corner.
    pub fn next_corner_around_vertex(&self, c: CornerId) -> CornerId {
        let (f, a) = (c.face(), c.slot());
        let e = self.face_edges[f.0][a];
        let other = self.other_side(e, Side { face: f, side: a });
        CornerId::new(other.face, (other.side + 1) % 3)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }
    pub fn face(&self, f: FaceId) -> [usize; 3] {
        self.faces[f.0]
    }
    pub fn face_edges(&self, f: FaceId) -> [EdgeId; 3] {
        self.face_edges[f.0]
    }
    pub fn edge(&self, e: EdgeId) -> EdgeRecord {
        self.edges[e.0]
    }
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }
    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }
    pub fn corner_vertex(&self, c: CornerId) -> usize {
        self.faces[c.face().0][c.slot()]
    }

    /// Endpoints as seen from the edge's first side.
    pub fn edge_endpoints(&self, e: EdgeId) -> (usize, usize) {
        side_vertices(&self.faces, self.edges[e.0].sides[0])
    }

    /// The explicit side pairing, one entry per edge.
    pub fn gluing(&self) -> Vec<(Side, Side)> {
        self.edges.iter().map(|r| (r.sides[0], r.sides[1])).collect()
    }

    fn other_side(&self, e: EdgeId, s: Side) -> Side {
        let [a, b] = self.edges[e.0].sides;
        if a == s {
            b
        } else {
            a
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Every corner whose slot carries `v`, with multiplicity.
    pub fn corners_at_vertex(&self, v: usize) -> Vec<CornerId> {
        let mut out = Vec::new();
        for (f, tri) in self.faces.iter().enumerate() {
            for (a, &w) in tri.iter().enumerate() {
                if w == v {
                    out.push(CornerId::new(FaceId(f), a));
                }
            }
        }
        out
    }

    pub fn quad(&self, e: EdgeId) -> Result<EdgeQuad> {
        let [s0, s1] = self.edges[e.0].sides;
        if s0.face == s1.face {
            return Err(Error::DegenerateFlip(e));
        }
        let t0 = self.faces[s0.face.0];
        let t1 = self.faces[s1.face.0];
        let (k0, k1) = (s0.side, s1.side);
        Ok(EdgeQuad {
            edge: e,
            faces: [s0.face, s1.face],
            k0,
            k1,
            vertices: [t0[k0], t0[(k0 + 1) % 3], t0[(k0 + 2) % 3], t1[(k1 + 2) % 3]],
        })
    }

    /// Combinatorial flip: faces `ijk`, `jil` become `kil`, `ljk`. The edge
    /// slot is reused for the new diagonal `kl`; both face slots are reused.
    pub fn flip_edge(&mut self, e: EdgeId) -> Result<EdgeId> {
        let q = self.quad(e)?;
        let [f0, f1] = q.faces;
        let (k0, k1) = (q.k0, q.k1);
        let [i, j, k, l] = q.vertices;
        let e_jk = self.face_edges[f0.0][(k0 + 1) % 3];
        let e_ki = self.face_edges[f0.0][(k0 + 2) % 3];
        let e_il = self.face_edges[f1.0][(k1 + 1) % 3];
        let e_lj = self.face_edges[f1.0][(k1 + 2) % 3];

        // rewrite the boundary sides first, keyed on their exact old side
        let moves = [
            (e_ki, Side { face: f0, side: (k0 + 2) % 3 }, Side { face: f0, side: 0 }),
            (e_il, Side { face: f1, side: (k1 + 1) % 3 }, Side { face: f0, side: 1 }),
            (e_lj, Side { face: f1, side: (k1 + 2) % 3 }, Side { face: f1, side: 0 }),
            (e_jk, Side { face: f0, side: (k0 + 1) % 3 }, Side { face: f1, side: 1 }),
        ];
        let mut records: Vec<(EdgeId, usize)> = Vec::with_capacity(4);
        for (edge, old, _) in moves {
            let rec = &self.edges[edge.0];
            // a loop may appear twice among the moves; resolve each side once
            let slot = (0..2)
                .find(|&t| rec.sides[t] == old && !records.contains(&(edge, t)))
                .expect("flip bookkeeping: side not found on edge");
            records.push((edge, slot));
        }
        for ((edge, slot), (_, _, new)) in records.into_iter().zip(moves) {
            self.edges[edge.0].sides[slot] = new;
        }

        self.faces[f0.0] = [k, i, l];
        self.faces[f1.0] = [l, j, k];
        self.face_edges[f0.0] = [e_ki, e_il, e];
        self.face_edges[f1.0] = [e_lj, e_jk, e];
        self.edges[e.0].sides = [Side { face: f0, side: 2 }, Side { face: f1, side: 2 }];
        Ok(e)
    }

    pub fn flipped(&self, e: EdgeId) -> Result<(Self, EdgeId)> {
        let mut m = self.clone();
        let e2 = m.flip_edge(e)?;
        Ok((m, e2))
    }

    /// Relabeling-invariant form for comparing incidence structures that share
    /// edge handles: each face becomes its cyclic (vertex, edge) sequence at the
    /// least rotation; faces are then sorted.
    pub fn canonical_form(&self) -> Vec<[(usize, usize); 3]> {
        let mut out: Vec<[(usize, usize); 3]> = self
            .faces
            .iter()
            .zip(&self.face_edges)
            .map(|(tri, fe)| {
                let rot = |r: usize| {
                    [0, 1, 2].map(|t| (tri[(t + r) % 3], fe[(t + r) % 3].0))
                };
                (0..3).map(rot).min().unwrap()
            })
            .collect();
        out.sort();
        out
    }

    /// Text form: `format=1`, `N F`, `F` vertex triples, then a `gluing E`
    /// block listing `face side face side` per edge.
    pub fn to_text(&self) -> String {
        let mut s = String::from("format=1\n");
        let _ = writeln!(s, "{} {}", self.num_vertices, self.faces.len());
        for t in &self.faces {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(s, "gluing {}", self.edges.len());
        for r in &self.edges {
            let [a, b] = r.sides;
            let _ = writeln!(s, "{} {} {} {}", a.face.0, a.side, b.face.0, b.side);
        }
        s
    }

    /// Parses the text form. The `format=1` line and the gluing block are both
    /// optional; without a gluing block, sides are paired by vertex labels.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();
        if let Some(&(lineno, l)) = lines.peek() {
            if let Some(v) = l.strip_prefix("format=") {
                if v.trim() != "1" {
                    return Err(parse_err(lineno, 1, format!("unsupported format `{v}`")));
                }
                lines.next();
            }
        }
        let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, 1, "missing `N F` header"))?;
        let hv = parse_usizes(lineno, header, 2)?;
        let (n, nf) = (hv[0], hv[1]);
        let mut faces = Vec::with_capacity(nf);
        for _ in 0..nf {
            let (lineno, l) = lines
                .next()
                .ok_or_else(|| parse_err(lineno + 1, 1, "unexpected end of face list"))?;
            let v = parse_usizes(lineno, l, 3)?;
            faces.push([v[0], v[1], v[2]]);
        }
        match lines.next() {
            None => Self::from_faces(n, &faces),
            Some((lineno, l)) => {
                let count = l
                    .strip_prefix("gluing")
                    .ok_or_else(|| parse_err(lineno, 1, "expected `gluing <count>`"))?;
                let ne = parse_usizes(lineno, count, 1)
                    .map_err(|_| parse_err(lineno, 8, "bad gluing count"))?[0];
                let mut gluing = Vec::with_capacity(ne);
                for _ in 0..ne {
                    let (lineno, l) = lines
                        .next()
                        .ok_or_else(|| parse_err(lineno + 1, 1, "unexpected end of gluing"))?;
                    let v = parse_usizes(lineno, l, 4)?;
                    gluing.push((Side::new(v[0], v[1]), Side::new(v[2], v[3])));
                }
                if let Some((lineno, _)) = lines.next() {
                    return Err(parse_err(lineno, 1, "trailing content"));
                }
                Self::from_gluing(n, &faces, &gluing)
            }
        }
    }
}

fn side_vertices(faces: &[[usize; 3]], s: Side) -> (usize, usize) {
    let t = faces[s.face.0];
    (t[s.side], t[(s.side + 1) % 3])
}

fn check_faces(num_vertices: usize, faces: &[[usize; 3]]) -> Result<()> {
    if faces.is_empty() {
        return Err(Error::EmptyMesh);
    }
    for &v in faces.iter().flatten() {
        if v >= num_vertices {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                num_vertices,
            });
        }
    }
    Ok(())
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_usizes(line: usize, text: &str, expected: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(expected);
    let mut col = 1;
    for tok in text.split_whitespace() {
        col = text.find(tok).map_or(col, |p| p + 1);
        out.push(
            tok.parse::<usize>()
                .map_err(|_| parse_err(line, col, format!("expected integer, found `{tok}`")))?,
        );
    }
    if out.len() != expected {
        return Err(parse_err(
            line,
            col,
            format!("expected {expected} integers, found {}", out.len()),
        ));
    }
    Ok(out)
}
