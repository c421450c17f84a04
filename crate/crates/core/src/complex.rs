//! 2-cell decompositions of closed oriented surfaces.
//!
//! A [`CellComplex`] stores a connected multigraph (loops and parallel edges
//! allowed) together with the boundary walks of its faces. Walks are
//! sequences of directed edge traversals, not vertex sequences; with loops
//! and multi-edges a vertex sequence is ambiguous. Construction validates
//! the closed-surface invariants: every edge is traversed exactly twice over
//! all walks, the walks can be oriented consistently, and the rotation
//! system derived from the walks has a single cycle of edge-ends at every
//! vertex. Orientation is implicit in rotation order: stored walks run
//! counterclockwise.

use serde::Serialize;
use thiserror::Error;

use crate::iso::{canonical_bytes, maps_isomorphic, MapView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceId(pub usize);

/// A cell of a 2-complex, tagged with its dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Cell {
    Vertex(VertexId),
    Edge(EdgeId),
    Face(FaceId),
}

impl Cell {
    pub fn dimension(self) -> usize {
        match self {
            Cell::Vertex(_) => 0,
            Cell::Edge(_) => 1,
            Cell::Face(_) => 2,
        }
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Vertex(v) => write!(f, "v{}", v.0),
            Cell::Edge(e) => write!(f, "e{}", e.0),
            Cell::Face(c) => write!(f, "f{}", c.0),
        }
    }
}

/// A directed traversal of an edge: forward runs from the first endpoint to
/// the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A directed edge side. Dart `2e` is edge `e` forward, `2e+1` backward;
/// reversal is xor with 1. Each edge-end of the rotation system is the dart
/// leaving that end. Serializes as `{"edge": e, "reversed": bool}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(pub usize);

impl Serialize for Dart {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Dart", 2)?;
        s.serialize_field("edge", &self.edge().0)?;
        s.serialize_field("reversed", &(self.direction() == Direction::Backward))?;
        s.end()
    }
}

impl Dart {
    pub fn new(edge: EdgeId, dir: Direction) -> Self {
        match dir {
            Direction::Forward => Dart(2 * edge.0),
            Direction::Backward => Dart(2 * edge.0 + 1),
        }
    }

    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 / 2)
    }

    pub fn direction(self) -> Direction {
        if self.0 % 2 == 0 {
            Direction::Forward
        } else {
            Direction::Backward
        }
    }

    /// The opposite side of the same edge.
    pub fn reversed(self) -> Self {
        Dart(self.0 ^ 1)
    }
}

/// Closed boundary walk of a face, as directed edge traversals in cyclic
/// order. Stored rotated to its lexicographically least phase so that equal
/// cyclic walks compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryWalk(Vec<Dart>);

impl BoundaryWalk {
    pub fn new(traversals: Vec<(EdgeId, Direction)>) -> Self {
        BoundaryWalk(
            traversals
                .into_iter()
                .map(|(e, d)| Dart::new(e, d))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn darts(&self) -> &[Dart] {
        &self.0
    }

    pub fn traversals(&self) -> impl Iterator<Item = (EdgeId, Direction)> + '_ {
        self.0.iter().map(|d| (d.edge(), d.direction()))
    }

    fn canonicalize(&mut self) {
        if self.0.is_empty() {
            return;
        }
        let n = self.0.len();
        let best = (0..n)
            .min_by_key(|&s| (0..n).map(|i| self.0[(s + i) % n]).collect::<Vec<_>>())
            .unwrap();
        self.0.rotate_left(best);
    }

    fn reversed(&self) -> Self {
        BoundaryWalk(self.0.iter().rev().map(|d| d.reversed()).collect())
    }
}

/// Cyclic order of edge-ends around each vertex. A loop contributes two
/// ends; a degree-1 vertex has a single end that acts as its own successor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationSystem {
    at: Vec<Vec<Dart>>,
}

impl RotationSystem {
    pub fn new(at: Vec<Vec<Dart>>) -> Self {
        RotationSystem { at }
    }

    pub fn num_vertices(&self) -> usize {
        self.at.len()
    }

    pub fn cycle_at(&self, v: VertexId) -> &[Dart] {
        &self.at[v.0]
    }

    /// Rotation with every cyclic order reversed (the mirror embedding).
    pub fn mirrored(&self) -> Self {
        RotationSystem {
            at: self
                .at
                .iter()
                .map(|c| c.iter().rev().copied().collect())
                .collect(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("complex has no vertices")]
    EmptyComplex,
    #[error("complex has no faces")]
    NoFaces,
    #[error("vertex v{} out of range", (.0).0)]
    UnknownVertex(VertexId),
    #[error("edge e{} out of range", (.0).0)]
    UnknownEdge(EdgeId),
    #[error("walk of face f{} is not closed at position {position}", face.0)]
    NonClosedWalk { face: FaceId, position: usize },
    #[error("edge e{} is traversed more than twice (excess in face f{})", edge.0, face.0)]
    EdgeSideReused { edge: EdgeId, face: FaceId },
    #[error("edge e{} is traversed fewer than two times", (.0).0)]
    EdgeSideMissing(EdgeId),
    #[error("underlying graph is not connected")]
    DisconnectedGraph,
    #[error("walks cannot be oriented consistently (edge e{})", (.0).0)]
    OrientationInconsistent(EdgeId),
    #[error("edge-ends at vertex v{} split into several rotation cycles", (.0).0)]
    PinchedVertex(VertexId),
    #[error("rotation system does not list each edge-end exactly once (near e{})", (.0).0)]
    IncompleteRotation(EdgeId),
}

/// A validated 2-cell decomposition `K = (V, E, F)` of a closed oriented
/// surface. Immutable after construction; ids are dense.
#[derive(Clone, Debug, Serialize)]
pub struct CellComplex {
    num_vertices: usize,
    edges: Vec<(VertexId, VertexId)>,
    faces: Vec<BoundaryWalk>,
    rotation: RotationSystem,
    #[serde(skip)]
    sigma: Vec<Dart>,
    #[serde(skip)]
    sigma_inv: Vec<Dart>,
    #[serde(skip)]
    dart_face: Vec<FaceId>,
    #[serde(skip)]
    dart_pos: Vec<usize>,
}

impl PartialEq for CellComplex {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices
            && self.edges == other.edges
            && self.faces == other.faces
            && self.rotation == other.rotation
    }
}

impl Eq for CellComplex {}

impl CellComplex {
    /// Builds and validates a complex from face boundary walks. The rotation
    /// system is derived from the walks; walks may be given in mixed
    /// orientations and are normalized so that all run counterclockwise
    /// (face 0 keeps its input orientation).
    pub fn build(
        num_vertices: usize,
        edges: Vec<(VertexId, VertexId)>,
        face_walks: Vec<BoundaryWalk>,
    ) -> Result<Self, ComplexError> {
        if num_vertices == 0 {
            return Err(ComplexError::EmptyComplex);
        }
        for &(a, b) in &edges {
            for v in [a, b] {
                if v.0 >= num_vertices {
                    return Err(ComplexError::UnknownVertex(v));
                }
            }
        }
        if face_walks.is_empty() {
            return Err(ComplexError::NoFaces);
        }
        let origin = |d: Dart| -> VertexId {
            let (a, b) = edges[d.edge().0];
            match d.direction() {
                Direction::Forward => a,
                Direction::Backward => b,
            }
        };
        let target = |d: Dart| origin(d.reversed());

        // Walk sanity: known edges, nonempty, closed.
        for (fi, walk) in face_walks.iter().enumerate() {
            let face = FaceId(fi);
            if walk.is_empty() {
                return Err(ComplexError::NonClosedWalk { face, position: 0 });
            }
            for d in walk.darts() {
                if d.edge().0 >= edges.len() {
                    return Err(ComplexError::UnknownEdge(d.edge()));
                }
            }
            for (i, &d) in walk.darts().iter().enumerate() {
                let next = walk.darts()[(i + 1) % walk.len()];
                if target(d) != origin(next) {
                    return Err(ComplexError::NonClosedWalk { face, position: i });
                }
            }
        }

        // Every edge has two sides; each side is used exactly once overall.
        let mut uses: Vec<Vec<FaceId>> = vec![Vec::new(); edges.len()];
        for (fi, walk) in face_walks.iter().enumerate() {
            for d in walk.darts() {
                let e = d.edge().0;
                if uses[e].len() == 2 {
                    return Err(ComplexError::EdgeSideReused {
                        edge: EdgeId(e),
                        face: FaceId(fi),
                    });
                }
                uses[e].push(FaceId(fi));
            }
        }
        if let Some(e) = uses.iter().position(|u| u.len() < 2) {
            return Err(ComplexError::EdgeSideMissing(EdgeId(e)));
        }

        connectivity_check(num_vertices, &edges)?;

        let faces = orient_walks(&edges, face_walks)?;
        Self::assemble(num_vertices, edges, faces)
    }

    /// Traces the faces induced by a rotation system (next traversal is the
    /// rotation successor of the arriving edge-end) and returns the
    /// resulting complex. The traced surface is always closed and oriented.
    pub fn from_rotation(
        num_vertices: usize,
        edges: Vec<(VertexId, VertexId)>,
        rotation: &RotationSystem,
    ) -> Result<Self, ComplexError> {
        if num_vertices == 0 {
            return Err(ComplexError::EmptyComplex);
        }
        if edges.is_empty() {
            return Err(ComplexError::NoFaces);
        }
        for &(a, b) in &edges {
            for v in [a, b] {
                if v.0 >= num_vertices {
                    return Err(ComplexError::UnknownVertex(v));
                }
            }
        }
        if rotation.num_vertices() != num_vertices {
            return Err(ComplexError::IncompleteRotation(EdgeId(0)));
        }
        let n_darts = 2 * edges.len();
        let origin = |d: Dart| -> VertexId {
            let (a, b) = edges[d.edge().0];
            match d.direction() {
                Direction::Forward => a,
                Direction::Backward => b,
            }
        };
        let mut sigma = vec![usize::MAX; n_darts];
        for v in 0..num_vertices {
            let cycle = rotation.cycle_at(VertexId(v));
            for (i, &d) in cycle.iter().enumerate() {
                if d.0 >= n_darts || origin(d) != VertexId(v) || sigma[d.0] != usize::MAX {
                    return Err(ComplexError::IncompleteRotation(d.edge()));
                }
                sigma[d.0] = cycle[(i + 1) % cycle.len()].0;
            }
        }
        if let Some(d) = sigma.iter().position(|&s| s == usize::MAX) {
            return Err(ComplexError::IncompleteRotation(Dart(d).edge()));
        }

        connectivity_check(num_vertices, &edges)?;

        // Faces are the orbits of phi = sigma . alpha.
        let mut seen = vec![false; n_darts];
        let mut faces = Vec::new();
        for start in 0..n_darts {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                seen[d] = true;
                walk.push(Dart(d));
                d = sigma[d ^ 1];
                if d == start {
                    break;
                }
            }
            faces.push(BoundaryWalk(walk));
        }
        Self::assemble(num_vertices, edges, faces)
    }

    /// Shared final assembly: derives the rotation system from consistently
    /// oriented walks and checks that the ends at each vertex form a single
    /// cycle.
    fn assemble(
        num_vertices: usize,
        edges: Vec<(VertexId, VertexId)>,
        mut faces: Vec<BoundaryWalk>,
    ) -> Result<Self, ComplexError> {
        let n_darts = 2 * edges.len();
        let origin = |d: Dart| -> VertexId {
            let (a, b) = edges[d.edge().0];
            match d.direction() {
                Direction::Forward => a,
                Direction::Backward => b,
            }
        };

        // phi: walk successor of each dart.
        let mut phi = vec![usize::MAX; n_darts];
        for walk in &faces {
            for (i, &d) in walk.darts().iter().enumerate() {
                debug_assert_eq!(phi[d.0], usize::MAX);
                phi[d.0] = walk.darts()[(i + 1) % walk.len()].0;
            }
        }

        // sigma = phi . alpha; its orbits automatically stay within the
        // ends at a common vertex, but must form a single cycle there.
        let mut sigma = vec![0usize; n_darts];
        for d in 0..n_darts {
            sigma[d] = phi[d ^ 1];
        }
        let mut sigma_inv = vec![0usize; n_darts];
        for (d, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = d;
        }
        let mut rotation_at: Vec<Vec<Dart>> = vec![Vec::new(); num_vertices];
        let mut placed = vec![false; n_darts];
        for start in 0..n_darts {
            if placed[start] {
                continue;
            }
            let v = origin(Dart(start));
            if !rotation_at[v.0].is_empty() {
                return Err(ComplexError::PinchedVertex(v));
            }
            let mut d = start;
            loop {
                placed[d] = true;
                debug_assert_eq!(origin(Dart(d)), v);
                rotation_at[v.0].push(Dart(d));
                d = sigma[d];
                if d == start {
                    break;
                }
            }
        }

        for walk in &mut faces {
            walk.canonicalize();
        }
        let mut dart_face = vec![FaceId(0); n_darts];
        let mut dart_pos = vec![0usize; n_darts];
        for (fi, walk) in faces.iter().enumerate() {
            for (pos, &d) in walk.darts().iter().enumerate() {
                dart_face[d.0] = FaceId(fi);
                dart_pos[d.0] = pos;
            }
        }
        Ok(CellComplex {
            num_vertices,
            edges,
            faces,
            rotation: RotationSystem::new(rotation_at),
            sigma: sigma.into_iter().map(Dart).collect(),
            sigma_inv: sigma_inv.into_iter().map(Dart).collect(),
            dart_face,
            dart_pos,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.num_vertices).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e.0]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn face_walk(&self, f: FaceId) -> &BoundaryWalk {
        &self.faces[f.0]
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn num_darts(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn origin(&self, d: Dart) -> VertexId {
        let (a, b) = self.edges[d.edge().0];
        match d.direction() {
            Direction::Forward => a,
            Direction::Backward => b,
        }
    }

    pub fn target(&self, d: Dart) -> VertexId {
        self.origin(d.reversed())
    }

    /// Rotation successor at the origin of `d`.
    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[d.0]
    }

    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma_inv[d.0]
    }

    /// The face whose boundary walk contains `d`.
    pub fn face_of_dart(&self, d: Dart) -> FaceId {
        self.dart_face[d.0]
    }

    /// Face and walk position of a dart's unique traversal.
    pub fn walk_position(&self, d: Dart) -> (FaceId, usize) {
        (self.dart_face[d.0], self.dart_pos[d.0])
    }

    pub fn vertex_degree(&self, v: VertexId) -> usize {
        self.rotation.cycle_at(v).len()
    }

    /// The complex re-traced with every rotation cycle reversed.
    pub fn mirrored(&self) -> CellComplex {
        CellComplex::from_rotation(self.num_vertices, self.edges.clone(), &self.rotation.mirrored())
            .expect("mirror of a valid complex is valid")
    }

    /// The same embedding with vertices, edges and faces renamed by the
    /// given permutations (`perm[old] = new`).
    pub fn relabeled(&self, vertex_perm: &[usize], edge_perm: &[usize]) -> CellComplex {
        assert_eq!(vertex_perm.len(), self.num_vertices);
        assert_eq!(edge_perm.len(), self.edges.len());
        let mut edges = vec![(VertexId(0), VertexId(0)); self.edges.len()];
        for (old, &(a, b)) in self.edges.iter().enumerate() {
            edges[edge_perm[old]] = (VertexId(vertex_perm[a.0]), VertexId(vertex_perm[b.0]));
        }
        let map_dart =
            |d: Dart| -> Dart { Dart::new(EdgeId(edge_perm[d.edge().0]), d.direction()) };
        let mut at = vec![Vec::new(); self.num_vertices];
        for v in 0..self.num_vertices {
            at[vertex_perm[v]] = self
                .rotation
                .cycle_at(VertexId(v))
                .iter()
                .map(|&d| map_dart(d))
                .collect();
        }
        CellComplex::from_rotation(self.num_vertices, edges, &RotationSystem::new(at))
            .expect("relabeling of a valid complex is valid")
    }

    fn map_view(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        (
            self.sigma.iter().map(|d| d.0).collect(),
            self.sigma_inv.iter().map(|d| d.0).collect(),
            vec![0; self.num_darts()],
        )
    }

    /// True iff some graph isomorphism carries the rotation system of `self`
    /// to that of `other`, preserving all cyclic orders or reversing all of
    /// them.
    pub fn equivalent_embeddings(&self, other: &CellComplex) -> bool {
        let (sa, sia, la) = self.map_view();
        let (sb, sib, lb) = other.map_view();
        maps_isomorphic(
            &MapView {
                sigma: &sa,
                sigma_inv: &sia,
                labels: &la,
            },
            &MapView {
                sigma: &sb,
                sigma_inv: &sib,
                labels: &lb,
            },
        )
    }

    /// Equivalence-class representative: equal byte strings exactly when
    /// `equivalent_embeddings` holds.
    pub fn canonical_form(&self) -> Vec<u8> {
        let (s, si, l) = self.map_view();
        canonical_bytes(&MapView {
            sigma: &s,
            sigma_inv: &si,
            labels: &l,
        })
    }
}

fn connectivity_check(
    num_vertices: usize,
    edges: &[(VertexId, VertexId)],
) -> Result<(), ComplexError> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
    for &(a, b) in edges {
        adj[a.0].push(b.0);
        adj[b.0].push(a.0);
    }
    let mut seen = vec![false; num_vertices];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(ComplexError::DisconnectedGraph)
    }
}

/// Flips a subset of walks so that every edge is traversed once per
/// direction. Two faces sharing an edge side in the same direction must
/// flip relative to each other; parity conflicts mean the walks describe a
/// non-orientable identification.
fn orient_walks(
    edges: &[(VertexId, VertexId)],
    walks: Vec<BoundaryWalk>,
) -> Result<Vec<BoundaryWalk>, ComplexError> {
    let mut traversals: Vec<Vec<(usize, Direction)>> = vec![Vec::new(); edges.len()];
    for (fi, walk) in walks.iter().enumerate() {
        for (e, dir) in walk.traversals() {
            traversals[e.0].push((fi, dir));
        }
    }
    // Union-find with flip parity relative to the root.
    let mut parent: Vec<usize> = (0..walks.len()).collect();
    let mut parity: Vec<bool> = vec![false; walks.len()];
    fn find(parent: &mut Vec<usize>, parity: &mut Vec<bool>, x: usize) -> (usize, bool) {
        if parent[x] == x {
            return (x, false);
        }
        let (root, p) = find(parent, parity, parent[x]);
        parent[x] = root;
        parity[x] ^= p;
        (root, parity[x])
    }
    for (e, ts) in traversals.iter().enumerate() {
        let [(f1, d1), (f2, d2)] = ts.as_slice() else {
            unreachable!("traversal counts were validated");
        };
        // Same direction twice: the faces must flip relative to each other.
        let need_flip = d1 == d2;
        if f1 == f2 {
            if need_flip {
                return Err(ComplexError::OrientationInconsistent(EdgeId(e)));
            }
            continue;
        }
        let (r1, p1) = find(&mut parent, &mut parity, *f1);
        let (r2, p2) = find(&mut parent, &mut parity, *f2);
        if r1 == r2 {
            if (p1 ^ p2) != need_flip {
                return Err(ComplexError::OrientationInconsistent(EdgeId(e)));
            }
        } else {
            parent[r1] = r2;
            parity[r1] = p1 ^ p2 ^ need_flip;
        }
    }
    // Anchor: the component of face 0 keeps its orientation; other
    // components (none for connected surfaces) keep their roots.
    Ok(walks
        .into_iter()
        .enumerate()
        .map(|(fi, walk)| {
            let (_, p) = find(&mut parent, &mut parity, fi);
            if p {
                walk.reversed()
            } else {
                walk
            }
        })
        .collect())
}
