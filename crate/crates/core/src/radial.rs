//! Radial graphs and rotation-system equivalence of reduced fields.
//!
//! The radial graph of a decomposition is the embedded bipartite graph on
//! its vertices and faces with one edge per vertex occurrence on a face
//! boundary (one per dart). Its traced faces are quadrilaterals, one per
//! edge of the decomposition — except for the two-node sphere graph, whose
//! single traced face walks its one edge twice. Two line fields are in the
//! same class exactly when the radial graphs of their reductions are
//! isomorphic as rotation systems, globally preserving or reversing all
//! cyclic orders; the class representative is a canonical byte string.

use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    BoundaryWalk, Cell, CellComplex, Dart, Direction, EdgeId, FaceId, VertexId,
};
use crate::field::LineField;
use crate::homotopy::{build_aux_graph, detect_degenerate, HomotopyError};
use crate::iso::{canonical_bytes, maps_isomorphic, MapView};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RadialError {
    #[error("edge e{} does not join the two parts", (.0).0)]
    NotBipartite(EdgeId),
    #[error("traced face f{} is not a quadrilateral", (.0).0)]
    NotQuadFaces(FaceId),
}

/// An embedded bipartite graph: nodes `0..num_a` form part A (vertex
/// cells), the rest part B (face cells). The embedding and its traced
/// faces live in the underlying [`CellComplex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddedBipartiteGraph {
    graph: CellComplex,
    num_a: usize,
    /// Provenance of each part-A node in the source complex.
    a_cells: Vec<Cell>,
    /// Provenance of each part-B node.
    b_cells: Vec<Cell>,
}

impl EmbeddedBipartiteGraph {
    pub fn new(
        graph: CellComplex,
        num_a: usize,
        a_cells: Vec<Cell>,
        b_cells: Vec<Cell>,
    ) -> Result<Self, RadialError> {
        assert_eq!(num_a, a_cells.len());
        assert_eq!(graph.num_vertices() - num_a, b_cells.len());
        for e in graph.edge_ids() {
            let (x, y) = graph.edge_endpoints(e);
            if (x.0 < num_a) == (y.0 < num_a) {
                return Err(RadialError::NotBipartite(e));
            }
        }
        Ok(EmbeddedBipartiteGraph {
            graph,
            num_a,
            a_cells,
            b_cells,
        })
    }

    pub fn graph(&self) -> &CellComplex {
        &self.graph
    }

    pub fn num_a(&self) -> usize {
        self.num_a
    }

    pub fn num_b(&self) -> usize {
        self.graph.num_vertices() - self.num_a
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn a_cells(&self) -> &[Cell] {
        &self.a_cells
    }

    pub fn b_cells(&self) -> &[Cell] {
        &self.b_cells
    }

    pub fn is_part_a(&self, v: VertexId) -> bool {
        v.0 < self.num_a
    }

    /// Either all traced faces are quadrilaterals, or the graph is the
    /// two-node sphere graph whose single face walks one edge twice.
    pub fn quad_invariant_holds(&self) -> bool {
        let all_quads = self
            .graph
            .face_ids()
            .all(|f| self.graph.face_walk(f).len() == 4);
        let sphere_case = self.graph.num_edges() == 1
            && self.graph.num_faces() == 1
            && self.graph.face_walk(FaceId(0)).len() == 2;
        all_quads || sphere_case
    }

    fn map_parts(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let sigma: Vec<usize> = (0..self.graph.num_darts())
            .map(|d| self.graph.sigma(Dart(d)).0)
            .collect();
        let sigma_inv: Vec<usize> = (0..self.graph.num_darts())
            .map(|d| self.graph.sigma_inv(Dart(d)).0)
            .collect();
        let labels: Vec<usize> = (0..self.graph.num_darts())
            .map(|d| usize::from(!self.is_part_a(self.graph.origin(Dart(d)))))
            .collect();
        (sigma, sigma_inv, labels)
    }

    /// Part-preserving rotation-system isomorphism, all cyclic orders
    /// preserved or all reversed.
    pub fn equivalent(&self, other: &EmbeddedBipartiteGraph) -> bool {
        let (sa, sia, la) = self.map_parts();
        let (sb, sib, lb) = other.map_parts();
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

    /// Minimal flag-walk encoding; equal strings exactly on equivalence
    /// classes.
    pub fn canonical_form(&self) -> Vec<u8> {
        let (s, si, l) = self.map_parts();
        canonical_bytes(&MapView {
            sigma: &s,
            sigma_inv: &si,
            labels: &l,
        })
    }

    /// The same embedded graph with the two parts exchanged (nodes
    /// renumbered so the former part B comes first). The radial graph of a
    /// dual decomposition matches the original's with parts swapped.
    pub fn swap_parts(&self) -> EmbeddedBipartiteGraph {
        let num_b = self.num_b();
        let perm: Vec<usize> = (0..self.graph.num_vertices())
            .map(|v| if v < self.num_a { v + num_b } else { v - self.num_a })
            .collect();
        let edge_perm: Vec<usize> = (0..self.graph.num_edges()).collect();
        EmbeddedBipartiteGraph::new(
            self.graph.relabeled(&perm, &edge_perm),
            num_b,
            self.b_cells.clone(),
            self.a_cells.clone(),
        )
        .expect("swapping parts preserves bipartiteness")
    }
}

/// True iff a part-preserving isomorphism carries one rotation system to
/// the other, globally preserving or reversing cyclic orders.
pub fn radial_equivalent(a: &EmbeddedBipartiteGraph, b: &EmbeddedBipartiteGraph) -> bool {
    a.equivalent(b)
}

/// The radial graph of a decomposition: one edge per dart, rotation
/// inherited at vertex nodes from the complex and at face nodes from the
/// boundary-walk order.
pub fn radial_graph(k: &CellComplex) -> EmbeddedBipartiteGraph {
    let num_a = k.num_vertices();
    let edges: Vec<(VertexId, VertexId)> = (0..k.num_darts())
        .map(|d| {
            let dart = Dart(d);
            (
                k.origin(dart),
                VertexId(num_a + k.face_of_dart(dart).0),
            )
        })
        .collect();
    let mut rotation: Vec<Vec<Dart>> = Vec::with_capacity(num_a + k.num_faces());
    for v in k.vertices() {
        rotation.push(
            k.rotation()
                .cycle_at(v)
                .iter()
                .map(|d| Dart::new(EdgeId(d.0), Direction::Forward))
                .collect(),
        );
    }
    for f in k.face_ids() {
        // Reversed walk order: the walk runs against the rotation sense
        // around the face's interior point, and the traced quads per edge
        // need both node parts consistently oriented.
        rotation.push(
            k.face_walk(f)
                .darts()
                .iter()
                .rev()
                .map(|d| Dart::new(EdgeId(d.0), Direction::Backward))
                .collect(),
        );
    }
    let graph = CellComplex::from_rotation(
        num_a + k.num_faces(),
        edges,
        &crate::complex::RotationSystem::new(rotation),
    )
    .expect("radial rotation is complete");
    let g = EmbeddedBipartiteGraph::new(
        graph,
        num_a,
        k.vertices().map(Cell::Vertex).collect(),
        k.face_ids().map(Cell::Face).collect(),
    )
    .expect("radial edges join vertex cells to face cells");
    debug_assert!(g.quad_invariant_holds());
    g
}

/// The two-node, one-edge radial graph of the minimal sphere: the class
/// representative of every degenerate field.
pub fn canonical_sphere_radial() -> EmbeddedBipartiteGraph {
    let graph = CellComplex::build(
        2,
        vec![(VertexId(0), VertexId(1))],
        vec![BoundaryWalk::new(vec![
            (EdgeId(0), Direction::Forward),
            (EdgeId(0), Direction::Backward),
        ])],
    )
    .expect("two-node sphere graph is valid");
    EmbeddedBipartiteGraph::new(
        graph,
        1,
        vec![Cell::Vertex(VertexId(0))],
        vec![Cell::Face(FaceId(0))],
    )
    .expect("single edge joins the parts")
}

/// The radial graph of the reduced decomposition, built directly from the
/// field: reduced boundary walks come from transporting each unmatched
/// traversal along its dimension-1 gradient path to a critical edge, and
/// vertex nodes are the flow terminals. Degenerate fields yield the
/// canonical sphere graph.
pub fn radial_of_reduced(field: &LineField) -> Result<EmbeddedBipartiteGraph, HomotopyError> {
    if detect_degenerate(field)?.is_some() {
        return Ok(canonical_sphere_radial());
    }
    let k = field.complex();
    let g = build_aux_graph(field);
    let mut roots: Vec<EdgeId> = g.components.iter().map(|c| c[0]).collect();
    roots.sort_unstable();
    let is_root = |e: EdgeId| roots.binary_search(&e).is_ok();

    let critical_vertices = field.critical_vertices();
    let critical_faces = field.critical_faces();
    let vmap: std::collections::BTreeMap<VertexId, usize> = critical_vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let emap: std::collections::BTreeMap<EdgeId, usize> =
        roots.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    // Slide a traversal across C = 2 faces until it lies on a critical
    // edge: the other side of a non-root unmatched edge is its matched
    // face, whose second unmatched traversal continues the path.
    let transport = |start: Dart| -> Dart {
        let mut d = start;
        while !is_root(d.edge()) {
            let (link_face, pos) = k.walk_position(d.reversed());
            let walk = k.face_walk(link_face);
            debug_assert_eq!(field.face_c_value(link_face).unwrap(), 2);
            let len = walk.len();
            let mut i = (pos + 1) % len;
            loop {
                let cand = walk.darts()[i];
                if !field.is_edge_matched(cand.edge()) {
                    debug_assert_ne!(i, pos, "self-loop in G is degenerate");
                    d = cand;
                    break;
                }
                i = (i + 1) % len;
            }
        }
        d
    };

    let edges: Vec<(VertexId, VertexId)> = roots
        .iter()
        .map(|&e| {
            let (a, b) = k.edge_endpoints(e);
            (
                VertexId(vmap[&field.terminal(a)]),
                VertexId(vmap[&field.terminal(b)]),
            )
        })
        .collect();
    let walks: Vec<BoundaryWalk> = critical_faces
        .iter()
        .map(|&f| {
            BoundaryWalk::new(
                k.face_walk(f)
                    .darts()
                    .iter()
                    .filter(|d| !field.is_edge_matched(d.edge()))
                    .map(|&d| {
                        let t = transport(d);
                        (EdgeId(emap[&t.edge()]), t.direction())
                    })
                    .collect(),
            )
        })
        .collect();
    let kbar = CellComplex::build(critical_vertices.len(), edges, walks)
        .expect("gradient-path transport yields a valid decomposition");

    let mut g = radial_graph(&kbar);
    g.a_cells = critical_vertices.into_iter().map(Cell::Vertex).collect();
    g.b_cells = critical_faces.into_iter().map(Cell::Face).collect();
    Ok(g)
}

/// A decomposition recovered from a radial graph. The minimal sphere (one
/// vertex, one face, no edges) is not representable as a `CellComplex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Decomposition {
    MinimalSphere,
    Complex(CellComplex),
}

/// Recovers the two decompositions whose radial graphs are isomorphic to
/// `g`: one on part A (edges are the A-diagonals of the traced quads,
/// faces are the part-B nodes) and its dual on part B.
pub fn derive_decompositions(
    g: &EmbeddedBipartiteGraph,
) -> Result<(Decomposition, Decomposition), RadialError> {
    if g.graph().num_edges() == 1 {
        if g.quad_invariant_holds() {
            return Ok((Decomposition::MinimalSphere, Decomposition::MinimalSphere));
        }
        return Err(RadialError::NotQuadFaces(FaceId(0)));
    }
    for f in g.graph().face_ids() {
        if g.graph().face_walk(f).len() != 4 {
            return Err(RadialError::NotQuadFaces(f));
        }
    }
    let k1 = diagonal_complex(g, true)?;
    let k2 = diagonal_complex(g, false)?;
    Ok((Decomposition::Complex(k1), Decomposition::Complex(k2)))
}

/// The decomposition on one part: vertices are that part's nodes, edges
/// the diagonals of the traced quads between them, faces the other part's
/// nodes with walks read off the rotation around each.
fn diagonal_complex(
    g: &EmbeddedBipartiteGraph,
    on_part_a: bool,
) -> Result<CellComplex, RadialError> {
    let graph = g.graph();
    let in_part = |v: VertexId| g.is_part_a(v) == on_part_a;
    let vertex_of = |v: VertexId| {
        if on_part_a {
            v.0
        } else {
            v.0 - g.num_a()
        }
    };
    let num_vertices = if on_part_a { g.num_a() } else { g.num_b() };

    // One diagonal per quad, joining the two corners in the chosen part.
    // `ends[q] = (prev corner, next corner)` seen from the other part's
    // corner at walk position `r+1`.
    let mut edges = Vec::with_capacity(graph.num_faces());
    let mut diag_dir: Vec<(Dart, Dart)> = Vec::with_capacity(graph.num_faces());
    for q in graph.face_ids() {
        let darts = graph.face_walk(q).darts();
        let r = if in_part(graph.origin(darts[0])) { 0 } else { 1 };
        let a1 = graph.origin(darts[r]);
        let a2 = graph.origin(darts[(r + 2) % 4]);
        debug_assert!(in_part(a1) && in_part(a2));
        edges.push((VertexId(vertex_of(a1)), VertexId(vertex_of(a2))));
        // Walking the quad from a1: positions r+1 and r+3 are the other
        // part's corners; entering the quad at r+1 crosses the diagonal
        // forward, at r+3 backward.
        diag_dir.push((darts[(r + 1) % 4], darts[(r + 3) % 4]));
    }

    // Face walk around each other-part node: its rotation cycle visits the
    // incident quads in cyclic order; each contributes its diagonal,
    // forward when the corner follows the quad-walk direction.
    let mut walks = Vec::new();
    for b in graph.vertices().filter(|&v| !in_part(v)) {
        let mut traversals = Vec::new();
        for &rd in graph.rotation().cycle_at(b) {
            // Corner between sigma^{-1}(rd) and rd lies in the traced face
            // of rd.
            let q = graph.face_of_dart(rd);
            let (fwd, _) = diag_dir[q.0];
            let dir = if fwd == rd {
                Direction::Forward
            } else {
                debug_assert_eq!(diag_dir[q.0].1, rd);
                Direction::Backward
            };
            traversals.push((EdgeId(q.0), dir));
        }
        walks.push(BoundaryWalk::new(traversals));
    }
    Ok(CellComplex::build(num_vertices, edges, walks)
        .expect("quadrangulation diagonals form a valid decomposition"))
}
