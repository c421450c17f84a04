//! Homotopy reduction of a line field to a minimal decomposition.
//!
//! The auxiliary graph `G` has the edges unmatched in `M_V` as nodes and
//! the non-critical faces (`C = 2`) as links, each joining the two edges
//! under its unmatched traversals. Since every edge has exactly two
//! traversals, nodes have degree at most two, so the non-degenerate `G` is
//! a disjoint union of paths. Spanning trees on its components induce a
//! face-level matching `M_F`; the full matching `M = M_V + M_F` reduces
//! `K` to a decomposition whose 0- and 2-cells are the critical cells of
//! the field, with indices preserved.
//!
//! Two degenerate shapes are split off first, both forcing the sphere: a
//! face with `C = 0`, and a cycle in `G` (a self-loop counts).

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{BoundaryWalk, CellComplex, Dart, EdgeId, FaceId, VertexId};
use crate::field::{HalfInt, LineField};
use crate::hasse::{
    forman_reduce, hasse_diagram, is_morse_matching, HasseDiagram, Matching,
};

/// A link of the auxiliary graph: a face with exactly two unmatched
/// traversals, joining the edges underneath them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GLink {
    pub face: FaceId,
    pub nodes: (EdgeId, EdgeId),
    pub positions: (usize, usize),
}

/// The auxiliary graph `G` with its connected components (ordered by
/// smallest node id, singletons included).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuxGraphG {
    pub nodes: Vec<EdgeId>,
    pub links: Vec<GLink>,
    pub components: Vec<Vec<EdgeId>>,
}

impl AuxGraphG {
    pub fn component_of(&self, e: EdgeId) -> Option<usize> {
        self.components.iter().position(|c| c.contains(&e))
    }

    fn links_in_component(&self, component: &[EdgeId]) -> usize {
        self.links
            .iter()
            .filter(|l| component.contains(&l.nodes.0))
            .count()
    }
}

/// A degenerate witness; by the sphere lemmas its presence forces chi = 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Degeneracy {
    /// A face with `C = 0`: its boundary edges form a tree fully matched
    /// into the face, so the decomposition is a sphere.
    IndexOneFace(FaceId),
    /// A component of `G` containing a cycle of edges and `C = 2` faces.
    CycleInG(Vec<EdgeId>),
}

impl std::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degeneracy::IndexOneFace(face) => write!(f, "face f{} has C = 0", face.0),
            Degeneracy::CycleInG(nodes) => {
                write!(f, "cycle in G through edges ")?;
                for (i, e) in nodes.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "e{}", e.0)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("field is degenerate ({0}); the surface is a sphere")]
    Degenerate(Degeneracy),
    #[error("degenerate witness on a surface with chi = {chi}: input is corrupt")]
    DegenerateOnNonSphere { chi: i64, witness: Degeneracy },
}

/// Builds `G` for a field.
pub fn build_aux_graph(field: &LineField) -> AuxGraphG {
    let k = field.complex();
    let nodes: Vec<EdgeId> = k.edge_ids().filter(|&e| !field.is_edge_matched(e)).collect();
    let mut links = Vec::new();
    for f in k.face_ids() {
        let unmatched: Vec<(usize, EdgeId)> = k
            .face_walk(f)
            .traversals()
            .enumerate()
            .filter(|&(_, (e, _))| !field.is_edge_matched(e))
            .map(|(pos, (e, _))| (pos, e))
            .collect();
        if let [(p1, e1), (p2, e2)] = unmatched.as_slice() {
            links.push(GLink {
                face: f,
                nodes: (*e1, *e2),
                positions: (*p1, *p2),
            });
        }
    }
    // Union-find over nodes.
    let index: BTreeMap<EdgeId, usize> = nodes.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            parent[x] = find(parent, parent[x]);
        }
        parent[x]
    }
    for l in &links {
        let a = find(&mut parent, index[&l.nodes.0]);
        let b = find(&mut parent, index[&l.nodes.1]);
        parent[a] = b;
    }
    let mut groups: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for (i, &e) in nodes.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(e);
    }
    let mut components: Vec<Vec<EdgeId>> = groups.into_values().collect();
    components.sort_by_key(|c| c[0]);
    AuxGraphG {
        nodes,
        links,
        components,
    }
}

/// Reports the first degenerate witness: the smallest-id face with `C = 0`,
/// else the first component of `G` containing a cycle. A witness on a
/// surface with chi != 2 contradicts the sphere lemmas and is reported as
/// corruption.
pub fn detect_degenerate(field: &LineField) -> Result<Option<Degeneracy>, HomotopyError> {
    let k = field.complex();
    let mut witness = None;
    for f in k.face_ids() {
        if field.face_c_value(f).unwrap() == 0 {
            witness = Some(Degeneracy::IndexOneFace(f));
            break;
        }
    }
    if witness.is_none() {
        let g = build_aux_graph(field);
        for component in &g.components {
            if g.links_in_component(component) >= component.len() {
                witness = Some(Degeneracy::CycleInG(component.clone()));
                break;
            }
        }
    }
    match witness {
        None => Ok(None),
        Some(w) => {
            let chi = k.euler_characteristic();
            if chi != 2 {
                Err(HomotopyError::DegenerateOnNonSphere { chi, witness: w })
            } else {
                Ok(Some(w))
            }
        }
    }
}

/// Spanning-tree rule used when inducing `M_F`. Different rules give
/// different matchings but identical critical data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreePolicy {
    /// Breadth-first from the smallest-id node (the default).
    BfsSmallest,
    /// Depth-first from the largest-id node.
    DfsLargest,
}

/// The induced Morse matching `M = M_V + M_F` on the full Hasse diagram,
/// with the per-component data needed by the reduction.
#[derive(Clone, Debug)]
pub struct InducedMatching {
    pub hasse: HasseDiagram,
    pub matching: Matching,
    /// One critical edge per component of `G`: the tree root.
    pub roots: Vec<EdgeId>,
    /// Face-level pairs `(edge, face, link position of the edge, depth)`.
    mf_pairs: Vec<(EdgeId, FaceId, usize, usize)>,
}

pub fn induced_matching(field: &LineField) -> Result<InducedMatching, HomotopyError> {
    induced_matching_with_policy(field, TreePolicy::BfsSmallest)
}

pub fn induced_matching_with_policy(
    field: &LineField,
    policy: TreePolicy,
) -> Result<InducedMatching, HomotopyError> {
    if let Some(w) = detect_degenerate(field)? {
        return Err(HomotopyError::Degenerate(w));
    }
    let k = field.complex();
    let g = build_aux_graph(field);
    let h = hasse_diagram(k);

    // Hasse-edge index layout: vertex-edge incidences first (2e + end),
    // then walk positions face by face.
    let mut face_offset = vec![0usize; k.num_faces()];
    let mut acc = 2 * k.num_edges();
    for f in k.face_ids() {
        face_offset[f.0] = acc;
        acc += k.face_walk(f).len();
    }

    let mut indices: Vec<usize> = field.pairs().iter().map(|p| 2 * p.edge.0 + p.end).collect();
    let mut mf_pairs = Vec::new();
    let mut roots = Vec::new();

    // Adjacency of G: node -> (neighbor, link index).
    let mut adj: BTreeMap<EdgeId, Vec<(EdgeId, usize)>> = BTreeMap::new();
    for (li, l) in g.links.iter().enumerate() {
        adj.entry(l.nodes.0).or_default().push((l.nodes.1, li));
        adj.entry(l.nodes.1).or_default().push((l.nodes.0, li));
    }

    for component in &g.components {
        let root = match policy {
            TreePolicy::BfsSmallest => *component.iter().min().unwrap(),
            TreePolicy::DfsLargest => *component.iter().max().unwrap(),
        };
        roots.push(root);
        let mut depth: BTreeMap<EdgeId, usize> = BTreeMap::new();
        depth.insert(root, 0);
        let mut frontier = std::collections::VecDeque::from([root]);
        while let Some(node) = match policy {
            TreePolicy::BfsSmallest => frontier.pop_front(),
            TreePolicy::DfsLargest => frontier.pop_back(),
        } {
            let mut neighbors = adj.get(&node).cloned().unwrap_or_default();
            match policy {
                TreePolicy::BfsSmallest => neighbors.sort_unstable(),
                TreePolicy::DfsLargest => neighbors.sort_unstable_by(|a, b| b.cmp(a)),
            }
            for (next, li) in neighbors {
                if depth.contains_key(&next) {
                    continue;
                }
                let d = depth[&node] + 1;
                depth.insert(next, d);
                let link = g.links[li];
                let position = if link.nodes.0 == next {
                    link.positions.0
                } else {
                    link.positions.1
                };
                mf_pairs.push((next, link.face, position, d));
                indices.push(face_offset[link.face.0] + position);
                frontier.push_back(next);
            }
        }
    }

    let matching = Matching::new(&h, indices).expect("induced pairs are disjoint");
    assert!(
        is_morse_matching(&h, &matching),
        "induced matching must be Morse on non-degenerate fields"
    );
    Ok(InducedMatching {
        hasse: h,
        matching,
        roots,
        mf_pairs,
    })
}

/// One row of the dimension-0 gradient-path table: the corner vertex at a
/// walk position of a critical face, its path, and the terminal critical
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dim0Entry {
    pub face: FaceId,
    pub position: usize,
    pub corner: VertexId,
    pub terminal: VertexId,
    pub path: Vec<VertexId>,
}

/// For every critical face and every vertex occurrence on its boundary
/// walk, the dimension-0 gradient path to its terminal critical vertex.
pub fn dimension0_paths(field: &LineField) -> Vec<Dim0Entry> {
    let k = field.complex();
    let mut out = Vec::new();
    for f in k.face_ids() {
        if !field.is_critical_face(f).unwrap() {
            continue;
        }
        for (position, &d) in k.face_walk(f).darts().iter().enumerate() {
            let corner = k.origin(d);
            let path = field.flow_path(corner);
            out.push(Dim0Entry {
                face: f,
                position,
                corner,
                terminal: *path.last().unwrap(),
                path,
            });
        }
    }
    out
}

/// The reduced field: the decomposition on the critical cells, the
/// matching-level reduced Hasse diagram, and the carried-over index data.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedField {
    /// The reduced decomposition, with dense ids.
    pub complex: CellComplex,
    /// Original id of each reduced vertex/edge/face.
    pub vertex_ids: Vec<VertexId>,
    pub edge_ids: Vec<EdgeId>,
    pub face_ids: Vec<FaceId>,
    /// `forman_reduce` of the induced matching, in original ids.
    pub reduced_hasse: HasseDiagram,
    pub critical_vertices: Vec<VertexId>,
    /// `(face, C, index)` of each critical face.
    pub critical_faces: Vec<(FaceId, usize, HalfInt)>,
    /// The critical edges of the induced matching (component roots).
    pub critical_edges: Vec<EdgeId>,
    pub dim0: Vec<Dim0Entry>,
}

pub fn reduce(field: &LineField) -> Result<ReducedField, HomotopyError> {
    reduce_with_policy(field, TreePolicy::BfsSmallest)
}

pub fn reduce_with_policy(
    field: &LineField,
    policy: TreePolicy,
) -> Result<ReducedField, HomotopyError> {
    let im = induced_matching_with_policy(field, policy)?;
    let k = field.complex();
    let reduced_hasse =
        forman_reduce(&im.hasse, &im.matching).expect("induced matching is Morse");

    // Surgery: contract matched vertex-edge pairs, then delete matched
    // edge-face pairs leaf-to-root, merging each deleted face into the
    // critical face across the deleted edge.
    let critical_faces: Vec<FaceId> = field.critical_faces();
    let is_critical_face = |f: FaceId| critical_faces.binary_search(&f).is_ok();

    let mut walks: BTreeMap<FaceId, Vec<Dart>> = k
        .face_ids()
        .map(|f| {
            let w: Vec<Dart> = k
                .face_walk(f)
                .darts()
                .iter()
                .copied()
                .filter(|d| !field.is_edge_matched(d.edge()))
                .collect();
            (f, w)
        })
        .collect();

    let mut deletions = im.mf_pairs.clone();
    deletions.sort_by_key(|&(_, _, _, depth)| std::cmp::Reverse(depth));
    for (sigma, _, _, _) in deletions {
        let locate = |walks: &BTreeMap<FaceId, Vec<Dart>>, d: Dart| {
            walks
                .iter()
                .find_map(|(&f, w)| w.iter().position(|&x| x == d).map(|i| (f, i)))
                .expect("unmatched edge dart present in walks")
        };
        let (fa, ia) = locate(&walks, Dart::new(sigma, crate::complex::Direction::Forward));
        let (fb, ib) = locate(&walks, Dart::new(sigma, crate::complex::Direction::Backward));
        assert_ne!(fa, fb, "deleted edge must separate two distinct faces");
        let (survivor, si, other, oi) = if is_critical_face(fa) {
            (fa, ia, fb, ib)
        } else {
            (fb, ib, fa, ia)
        };
        assert!(
            is_critical_face(survivor) && !is_critical_face(other),
            "leaf-to-root deletion always absorbs into a critical face"
        );
        let other_walk = walks.remove(&other).unwrap();
        let insert: Vec<Dart> = other_walk[oi + 1..]
            .iter()
            .chain(other_walk[..oi].iter())
            .copied()
            .collect();
        let s_walk = walks.get_mut(&survivor).unwrap();
        s_walk.splice(si..=si, insert);
    }

    let surviving: Vec<FaceId> = walks.keys().copied().collect();
    assert_eq!(surviving, critical_faces, "deletions consume exactly the C = 2 faces");

    // Dense relabeling of the reduced cells.
    let vertex_ids = field.critical_vertices();
    let edge_ids: Vec<EdgeId> = {
        let mut r = im.roots.clone();
        r.sort_unstable();
        r
    };
    let face_ids = critical_faces.clone();
    let vmap: BTreeMap<VertexId, usize> =
        vertex_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let emap: BTreeMap<EdgeId, usize> = edge_ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    let edges: Vec<(VertexId, VertexId)> = edge_ids
        .iter()
        .map(|&e| {
            let (a, b) = k.edge_endpoints(e);
            (
                VertexId(vmap[&field.terminal(a)]),
                VertexId(vmap[&field.terminal(b)]),
            )
        })
        .collect();
    let face_walks: Vec<BoundaryWalk> = face_ids
        .iter()
        .map(|f| {
            let w = &walks[f];
            let c = field.face_c_value(*f).unwrap();
            assert_eq!(w.len(), c, "reduced walk length equals C: index is preserved");
            BoundaryWalk::new(
                w.iter()
                    .map(|d| {
                        let e = *emap
                            .get(&d.edge())
                            .expect("reduced walks traverse only critical edges");
                        (EdgeId(e), d.direction())
                    })
                    .collect(),
            )
        })
        .collect();
    let complex = CellComplex::build(vertex_ids.len(), edges, face_walks)
        .expect("surgery yields a valid decomposition");

    let critical_faces_data = face_ids
        .iter()
        .map(|&f| {
            let c = field.face_c_value(f).unwrap();
            (f, c, HalfInt::from_doubled(2 - c as i64))
        })
        .collect();
    Ok(ReducedField {
        complex,
        vertex_ids,
        edge_ids: edge_ids.clone(),
        face_ids,
        reduced_hasse,
        critical_vertices: field.critical_vertices(),
        critical_faces: critical_faces_data,
        critical_edges: edge_ids,
        dim0: dimension0_paths(field),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Cell;
    use crate::field::{random_field, spanning_tree_field, LineField};
    use crate::gen;
    use crate::hasse::forman_euler_check;

    #[test]
    fn aux_graph_of_empty_matching_on_tetrahedron() {
        let field = LineField::new(gen::tetrahedron(), vec![]).unwrap();
        let g = build_aux_graph(&field);
        assert_eq!(g.nodes.len(), 6);
        assert!(g.links.is_empty());
        assert_eq!(g.components.len(), 6);
    }

    #[test]
    fn aux_graph_of_spanning_tree_field() {
        let field = spanning_tree_field(&gen::tetrahedron(), VertexId(0)).unwrap();
        let g = build_aux_graph(&field);
        // Tree edges e0,e1,e2 are matched; e3,e4,e5 remain.
        assert_eq!(g.nodes, vec![EdgeId(3), EdgeId(4), EdgeId(5)]);
        // All four faces have C = 1 or 3: no links.
        assert!(g.links.is_empty());
    }

    #[test]
    fn degenerate_c0_face_on_path_sphere() {
        // Path sphere a-b-c with both edges matched into the face: C = 0.
        let k = gen::path_sphere(3);
        let field = LineField::new(
            k,
            vec![(VertexId(1), EdgeId(0)), (VertexId(2), EdgeId(1))],
        )
        .unwrap();
        let w = detect_degenerate(&field).unwrap();
        assert_eq!(w, Some(Degeneracy::IndexOneFace(FaceId(0))));
        assert_eq!(field.complex().euler_characteristic(), 2);
    }

    #[test]
    fn path_component_matches_toward_smallest_root() {
        // Matching one pole of the three-slice orange to a meridian leaves
        // G a path m1 - f12 - m2; the smallest node m1 becomes the root
        // and m2 is matched with the link face.
        let k = gen::orange(3);
        let field = LineField::new(k, vec![(VertexId(0), EdgeId(0))]).unwrap();
        assert_eq!(detect_degenerate(&field).unwrap(), None);
        let g = build_aux_graph(&field);
        assert_eq!(g.nodes, vec![EdgeId(1), EdgeId(2)]);
        assert_eq!(g.links.len(), 1);
        assert_eq!(g.components.len(), 1);
        let im = induced_matching(&field).unwrap();
        assert_eq!(im.roots, vec![EdgeId(1)]);
        // M = one vertex pair + one face pair.
        assert_eq!(im.matching.len(), 2);
        assert!(is_morse_matching(&im.hasse, &im.matching));
    }

    #[test]
    fn index_one_face_has_index_one() {
        let k = gen::path_sphere(3);
        let field = LineField::new(
            k,
            vec![(VertexId(1), EdgeId(0)), (VertexId(2), EdgeId(1))],
        )
        .unwrap();
        assert_eq!(field.face_c_value(FaceId(0)).unwrap(), 0);
        assert!(field.is_critical_face(FaceId(0)).unwrap());
        assert_eq!(
            field.face_index(FaceId(0)).unwrap(),
            crate::field::HalfInt::from_int(1)
        );
    }

    #[test]
    fn degenerate_cycle_on_orange() {
        // An equatorial band of C = 2 bigons closes a cycle in G.
        let field = LineField::new(gen::orange(3), vec![]).unwrap();
        let w = detect_degenerate(&field).unwrap();
        assert!(matches!(w, Some(Degeneracy::CycleInG(_))));
    }

    #[test]
    fn degenerate_self_loop_on_single_edge_sphere() {
        // The one face traverses the single unmatched edge twice: a
        // self-loop in G.
        let field = LineField::new(gen::single_edge_sphere(), vec![]).unwrap();
        let w = detect_degenerate(&field).unwrap();
        assert_eq!(w, Some(Degeneracy::CycleInG(vec![EdgeId(0)])));
    }

    #[test]
    fn spanning_tree_field_is_not_degenerate() {
        let field = spanning_tree_field(&gen::tetrahedron(), VertexId(0)).unwrap();
        assert_eq!(detect_degenerate(&field).unwrap(), None);
    }

    #[test]
    fn induced_matching_is_morse_and_counts_roots() {
        let field = spanning_tree_field(&gen::tetrahedron(), VertexId(0)).unwrap();
        let im = induced_matching(&field).unwrap();
        assert!(is_morse_matching(&im.hasse, &im.matching));
        assert!(forman_euler_check(&im.hasse, &im.matching).unwrap().holds);
        let g = build_aux_graph(&field);
        assert_eq!(im.roots.len(), g.components.len());
    }

    #[test]
    fn induced_matching_on_degenerate_field_errors() {
        let field = LineField::new(gen::orange(3), vec![]).unwrap();
        let err = induced_matching(&field).unwrap_err();
        assert!(matches!(err, HomotopyError::Degenerate(_)));
    }

    #[test]
    fn singleton_components_give_m_equal_mv() {
        let field = spanning_tree_field(&gen::tetrahedron(), VertexId(0)).unwrap();
        let im = induced_matching(&field).unwrap();
        // No C = 2 faces: M_F is empty, M = M_V.
        assert_eq!(im.matching.len(), field.pairs().len());
        assert_eq!(im.roots, vec![EdgeId(3), EdgeId(4), EdgeId(5)]);
    }

    #[test]
    fn reduce_spanning_tree_tetrahedron() {
        let field = spanning_tree_field(&gen::tetrahedron(), VertexId(0)).unwrap();
        let r = reduce(&field).unwrap();
        assert_eq!(r.critical_vertices, vec![VertexId(0)]);
        assert_eq!(r.critical_faces.len(), 4);
        let index_sum: HalfInt = r.critical_faces.iter().map(|&(_, _, i)| i).sum();
        assert_eq!(index_sum, HalfInt::from_int(1));
        assert_eq!(r.complex.euler_characteristic(), 2);
        // Reduced diagram: 1 + 3 + 4 nodes.
        assert_eq!(r.reduced_hasse.num_nodes(), 8);
        assert_eq!(r.reduced_hasse.euler_count(), 2);
        // The reduced complex is a bouquet of three loops with four faces.
        assert_eq!(
            (r.complex.num_vertices(), r.complex.num_edges(), r.complex.num_faces()),
            (1, 3, 4)
        );
    }

    #[test]
    fn reduce_without_c2_faces_returns_k_itself() {
        let k = gen::tetrahedron();
        let field = LineField::new(k.clone(), vec![]).unwrap();
        let r = reduce(&field).unwrap();
        assert_eq!(r.complex, k);
    }

    #[test]
    fn reduced_hasse_matches_surgery_hasse() {
        // The matching-level reduction and the walk-level surgery must
        // produce the same incidence multiset.
        for (k, seeds) in [
            (gen::tetrahedron(), 0..40),
            (gen::cube(), 0..40),
            (gen::torus_square(), 0..40),
            (gen::genus2_octagon(), 0..40),
        ] {
            for seed in seeds {
                let field = random_field(&k, seed);
                let r = match reduce(&field) {
                    Ok(r) => r,
                    Err(HomotopyError::Degenerate(_)) => continue,
                    Err(e) => panic!("unexpected error: {e}"),
                };
                let surgery_h = crate::hasse::hasse_diagram(&r.complex);
                let mut surgery_pairs: Vec<(Cell, Cell)> = surgery_h
                    .edges()
                    .iter()
                    .map(|e| {
                        let lower = match e.lower {
                            Cell::Vertex(v) => Cell::Vertex(r.vertex_ids[v.0]),
                            Cell::Edge(x) => Cell::Edge(r.edge_ids[x.0]),
                            Cell::Face(f) => Cell::Face(r.face_ids[f.0]),
                        };
                        let upper = match e.upper {
                            Cell::Vertex(v) => Cell::Vertex(r.vertex_ids[v.0]),
                            Cell::Edge(x) => Cell::Edge(r.edge_ids[x.0]),
                            Cell::Face(f) => Cell::Face(r.face_ids[f.0]),
                        };
                        (lower, upper)
                    })
                    .collect();
                let mut reduced_pairs: Vec<(Cell, Cell)> = r
                    .reduced_hasse
                    .edges()
                    .iter()
                    .map(|e| (e.lower, e.upper))
                    .collect();
                surgery_pairs.sort_unstable();
                reduced_pairs.sort_unstable();
                assert_eq!(surgery_pairs, reduced_pairs);
            }
        }
    }

    #[test]
    fn reduce_preserves_critical_data_and_chi() {
        for (k, n) in [
            (gen::tetrahedron(), 100),
            (gen::cube(), 60),
            (gen::octahedron(), 60),
            (gen::torus_square(), 60),
            (gen::genus2_octagon(), 60),
        ] {
            for seed in 0..n {
                let field = random_field(&k, seed);
                let r = match reduce(&field) {
                    Ok(r) => r,
                    Err(HomotopyError::Degenerate(_)) => {
                        assert_eq!(k.euler_characteristic(), 2);
                        continue;
                    }
                    Err(e) => panic!("unexpected error: {e}"),
                };
                assert_eq!(r.critical_vertices, field.critical_vertices());
                assert_eq!(
                    r.critical_faces.iter().map(|&(f, _, _)| f).collect::<Vec<_>>(),
                    field.critical_faces()
                );
                for &(f, c, idx) in &r.critical_faces {
                    assert_eq!(field.face_c_value(f).unwrap(), c);
                    assert_eq!(field.face_index(f).unwrap(), idx);
                }
                assert_eq!(r.complex.euler_characteristic(), k.euler_characteristic());
                // Euler identity on the reduced object with the empty field.
                let reduced_field = LineField::new(r.complex.clone(), vec![]).unwrap();
                assert!(reduced_field.euler_check().holds);
                // Number of critical edges = number of components of G.
                let g = build_aux_graph(&field);
                assert_eq!(r.critical_edges.len(), g.components.len());
            }
        }
    }

    #[test]
    fn tree_policies_agree_on_critical_data() {
        for (k, n) in [(gen::tetrahedron(), 60), (gen::cube(), 40)] {
            for seed in 0..n {
                let field = random_field(&k, seed);
                let a = match reduce_with_policy(&field, TreePolicy::BfsSmallest) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                let b = reduce_with_policy(&field, TreePolicy::DfsLargest).unwrap();
                assert_eq!(a.critical_vertices, b.critical_vertices);
                assert_eq!(a.critical_faces, b.critical_faces);
                assert_eq!(a.critical_edges.len(), b.critical_edges.len());
                assert!(a.complex.equivalent_embeddings(&b.complex));
            }
        }
    }

    #[test]
    fn dim0_paths_with_empty_matching_are_identities() {
        let field = LineField::new(gen::tetrahedron(), vec![]).unwrap();
        for entry in dimension0_paths(&field) {
            assert_eq!(entry.corner, entry.terminal);
            assert_eq!(entry.path, vec![entry.corner]);
        }
    }

    #[test]
    fn dim0_paths_of_spanning_tree_field_end_at_root() {
        let field = spanning_tree_field(&gen::cube(), VertexId(0)).unwrap();
        let entries = dimension0_paths(&field);
        assert!(!entries.is_empty());
        for entry in &entries {
            assert_eq!(entry.terminal, VertexId(0));
            assert!(entry.path.len() <= field.complex().num_vertices());
        }
    }

    #[test]
    fn dim0_paths_terminate_at_critical_vertices() {
        let k = gen::cube();
        for seed in 0..30 {
            let field = random_field(&k, seed);
            for entry in dimension0_paths(&field) {
                assert!(!field.is_vertex_matched(entry.terminal));
                assert!(entry.path.len() <= k.num_vertices());
            }
        }
    }
}
