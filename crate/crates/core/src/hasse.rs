//! Hasse diagrams and Morse matchings.
//!
//! The Hasse diagram of a complex has one node per cell and one edge per
//! incidence, with multiplicity: a loop meets its vertex through two edges,
//! and a face traversing an edge twice meets it through two edges. Without
//! multiplicity the one-face torus loses incidences and the Euler counts
//! break. A matching is a set of Hasse edges disjoint on cells; it is Morse
//! when orienting matched edges upward and the rest downward leaves both
//! the vertex level and the face level acyclic.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Cell, CellComplex};

/// One incidence between a cell and a cofacet of dimension one higher.
/// `slot` separates parallel incidences: for vertex-edge incidences it is
/// the edge end (0 or 1), for edge-face incidences the boundary-walk
/// position, and for reduced diagrams a per-pair counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HasseEdge {
    pub lower: Cell,
    pub upper: Cell,
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HasseDiagram {
    nodes: Vec<Cell>,
    edges: Vec<HasseEdge>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HasseError {
    #[error("edges {0} and {1} of the matching share a cell")]
    NotAMatching(usize, usize),
    #[error("hasse edge index {0} out of range")]
    EdgeIndexOutOfRange(usize),
    #[error("matching is not Morse (alternating cycle exists)")]
    NotMorse,
    #[error("cell {0} does not have dimension {1}")]
    DimensionMismatch(Cell, usize),
    #[error("cell {0} is not a node of the diagram")]
    UnknownCell(Cell),
}

impl HasseDiagram {
    pub fn new(nodes: Vec<Cell>, edges: Vec<HasseEdge>) -> Self {
        HasseDiagram { nodes, edges }
    }

    pub fn nodes(&self) -> &[Cell] {
        &self.nodes
    }

    pub fn edges(&self) -> &[HasseEdge] {
        &self.edges
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.nodes.binary_search(&cell).is_ok()
    }

    /// Count of nodes per dimension `(n0, n1, n2)`.
    pub fn dimension_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for node in &self.nodes {
            match node.dimension() {
                0 => counts.0 += 1,
                1 => counts.1 += 1,
                _ => counts.2 += 1,
            }
        }
        counts
    }

    /// Alternating node-count sum; equals the Euler characteristic of the
    /// underlying complex.
    pub fn euler_count(&self) -> i64 {
        let (n0, n1, n2) = self.dimension_counts();
        n0 as i64 - n1 as i64 + n2 as i64
    }
}

/// The Hasse diagram of a complex: `|V|+|E|+|F|` nodes and `2|E| + 2|E|`
/// incidence edges.
pub fn hasse_diagram(k: &CellComplex) -> HasseDiagram {
    let mut nodes = Vec::with_capacity(k.num_vertices() + k.num_edges() + k.num_faces());
    nodes.extend(k.vertices().map(Cell::Vertex));
    nodes.extend(k.edge_ids().map(Cell::Edge));
    nodes.extend(k.face_ids().map(Cell::Face));
    nodes.sort_unstable();
    let mut edges = Vec::with_capacity(4 * k.num_edges());
    for e in k.edge_ids() {
        let (a, b) = k.edge_endpoints(e);
        edges.push(HasseEdge {
            lower: Cell::Vertex(a),
            upper: Cell::Edge(e),
            slot: 0,
        });
        edges.push(HasseEdge {
            lower: Cell::Vertex(b),
            upper: Cell::Edge(e),
            slot: 1,
        });
    }
    for f in k.face_ids() {
        for (pos, (e, _)) in k.face_walk(f).traversals().enumerate() {
            edges.push(HasseEdge {
                lower: Cell::Edge(e),
                upper: Cell::Face(f),
                slot: pos,
            });
        }
    }
    HasseDiagram::new(nodes, edges)
}

/// A matching: Hasse edges pairwise disjoint on cells. Tied to the diagram
/// it was built on through edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    indices: Vec<usize>,
    #[serde(skip)]
    by_cell: BTreeMap<Cell, usize>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching {
            indices: Vec::new(),
            by_cell: BTreeMap::new(),
        }
    }

    pub fn new(h: &HasseDiagram, mut indices: Vec<usize>) -> Result<Self, HasseError> {
        indices.sort_unstable();
        indices.dedup();
        let mut by_cell = BTreeMap::new();
        for &i in &indices {
            let edge = *h
                .edges()
                .get(i)
                .ok_or(HasseError::EdgeIndexOutOfRange(i))?;
            for cell in [edge.lower, edge.upper] {
                if let Some(&other) = by_cell.get(&cell) {
                    return Err(HasseError::NotAMatching(other, i));
                }
                by_cell.insert(cell, i);
            }
        }
        Ok(Matching { indices, by_cell })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_matched(&self, cell: Cell) -> bool {
        self.by_cell.contains_key(&cell)
    }

    /// The Hasse-edge index through which `cell` is matched.
    pub fn matched_edge_of(&self, cell: Cell) -> Option<usize> {
        self.by_cell.get(&cell).copied()
    }

    pub fn partner(&self, h: &HasseDiagram, cell: Cell) -> Option<Cell> {
        self.matched_edge_of(cell).map(|i| {
            let e = h.edges()[i];
            if e.lower == cell {
                e.upper
            } else {
                e.lower
            }
        })
    }

    /// The matched pairs as `(lower, upper)` cells.
    pub fn pairs(&self, h: &HasseDiagram) -> Vec<(Cell, Cell)> {
        self.indices
            .iter()
            .map(|&i| (h.edges()[i].lower, h.edges()[i].upper))
            .collect()
    }
}

/// Directed view of one level of the diagram: matched edges point upward,
/// unmatched downward. Returns true when acyclic.
fn level_acyclic(h: &HasseDiagram, m: &Matching, lower_dim: usize) -> bool {
    let mut index: BTreeMap<Cell, usize> = BTreeMap::new();
    for &node in h.nodes() {
        if node.dimension() == lower_dim || node.dimension() == lower_dim + 1 {
            let next = index.len();
            index.entry(node).or_insert(next);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); index.len()];
    for (i, edge) in h.edges().iter().enumerate() {
        if edge.lower.dimension() != lower_dim {
            continue;
        }
        let lo = index[&edge.lower];
        let hi = index[&edge.upper];
        if m.contains_index(i) {
            adj[lo].push(hi);
        } else {
            adj[hi].push(lo);
        }
    }
    // Iterative three-color DFS.
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color = vec![WHITE; index.len()];
    for start in 0..index.len() {
        if color[start] != WHITE {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        color[start] = GRAY;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < adj[node].len() {
                let child = adj[node][*next];
                *next += 1;
                match color[child] {
                    WHITE => {
                        color[child] = GRAY;
                        stack.push((child, 0));
                    }
                    GRAY => return false,
                    _ => {}
                }
            } else {
                color[node] = BLACK;
                stack.pop();
            }
        }
    }
    true
}

/// True iff neither the vertex level nor the face level contains an
/// alternating closed cycle.
pub fn is_morse_matching(h: &HasseDiagram, m: &Matching) -> bool {
    level_acyclic(h, m, 0) && level_acyclic(h, m, 1)
}

fn ensure_morse(h: &HasseDiagram, m: &Matching) -> Result<(), HasseError> {
    if is_morse_matching(h, m) {
        Ok(())
    } else {
        Err(HasseError::NotMorse)
    }
}

/// The unmatched cells with their index (= dimension).
pub fn critical_cells(h: &HasseDiagram, m: &Matching) -> Result<Vec<(Cell, usize)>, HasseError> {
    ensure_morse(h, m)?;
    Ok(h.nodes()
        .iter()
        .filter(|&&c| !m.is_matched(c))
        .map(|&c| (c, c.dimension()))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormanCount {
    pub m0: usize,
    pub m1: usize,
    pub m2: usize,
    pub chi: i64,
    pub holds: bool,
}

/// Counts unmatched cells per dimension and checks the discrete
/// Euler-Poincare identity `m0 - m1 + m2 = chi`. This holds for every Morse
/// matching; the operation exists as a self-check.
pub fn forman_euler_check(h: &HasseDiagram, m: &Matching) -> Result<FormanCount, HasseError> {
    ensure_morse(h, m)?;
    let mut counts = [0usize; 3];
    for &node in h.nodes() {
        if !m.is_matched(node) {
            counts[node.dimension()] += 1;
        }
    }
    let chi = h.euler_count();
    let (m0, m1, m2) = (counts[0], counts[1], counts[2]);
    Ok(FormanCount {
        m0,
        m1,
        m2,
        chi,
        holds: m0 as i64 - m1 as i64 + m2 as i64 == chi,
    })
}

/// A gradient path of dimension `p`: consecutive `p`-cells share a matched
/// `(p+1)`-cell witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradientPath {
    pub dimension: usize,
    pub cells: Vec<Cell>,
    pub witnesses: Vec<Cell>,
    pub ends_critical: bool,
}

/// All maximal gradient paths of dimension `p` starting at `from`.
/// Depth-first, smallest continuation first, so the output order is
/// deterministic.
pub fn gradient_paths(
    h: &HasseDiagram,
    m: &Matching,
    p: usize,
    from: Cell,
) -> Result<Vec<GradientPath>, HasseError> {
    ensure_morse(h, m)?;
    if from.dimension() != p {
        return Err(HasseError::DimensionMismatch(from, p));
    }
    if !h.contains(from) {
        return Err(HasseError::UnknownCell(from));
    }
    // Boundary incidences of each (p+1)-cell, sorted for determinism.
    let mut cofacet_boundary: BTreeMap<Cell, Vec<(usize, Cell)>> = BTreeMap::new();
    for (i, e) in h.edges().iter().enumerate() {
        if e.lower.dimension() == p {
            cofacet_boundary.entry(e.upper).or_default().push((i, e.lower));
        }
    }

    let mut out = Vec::new();
    let mut cells = vec![from];
    let mut witnesses: Vec<Cell> = Vec::new();
    extend_paths(h, m, &cofacet_boundary, &mut cells, &mut witnesses, &mut out);
    Ok(out)
}

fn extend_paths(
    h: &HasseDiagram,
    m: &Matching,
    cofacet_boundary: &BTreeMap<Cell, Vec<(usize, Cell)>>,
    cells: &mut Vec<Cell>,
    witnesses: &mut Vec<Cell>,
    out: &mut Vec<GradientPath>,
) {
    let current = *cells.last().unwrap();
    let upward = m.matched_edge_of(current).filter(|&i| {
        let e = h.edges()[i];
        e.lower == current
    });
    match upward {
        None => out.push(GradientPath {
            dimension: current.dimension(),
            cells: cells.clone(),
            witnesses: witnesses.clone(),
            ends_critical: !m.is_matched(current),
        }),
        Some(matched_idx) => {
            let witness = h.edges()[matched_idx].upper;
            for &(i, next) in &cofacet_boundary[&witness] {
                if i == matched_idx {
                    continue;
                }
                cells.push(next);
                witnesses.push(witness);
                extend_paths(h, m, cofacet_boundary, cells, witnesses, out);
                cells.pop();
                witnesses.pop();
            }
        }
    }
}

/// Forman reduction: the Hasse diagram whose nodes are the critical cells,
/// with one edge for every gradient path that starts in the boundary of a
/// critical cell and ends at a critical cell.
pub fn forman_reduce(h: &HasseDiagram, m: &Matching) -> Result<HasseDiagram, HasseError> {
    ensure_morse(h, m)?;
    let nodes: Vec<Cell> = h
        .nodes()
        .iter()
        .copied()
        .filter(|&c| !m.is_matched(c))
        .collect();
    let mut edges = Vec::new();
    let mut slots: BTreeMap<(Cell, Cell), usize> = BTreeMap::new();
    for &upper in &nodes {
        let p = match upper.dimension() {
            0 => continue,
            d => d - 1,
        };
        for e in h.edges().iter().filter(|e| e.upper == upper) {
            debug_assert_eq!(e.lower.dimension(), p);
            for path in gradient_paths(h, m, p, e.lower)? {
                if !path.ends_critical {
                    continue;
                }
                let lower = *path.cells.last().unwrap();
                let slot = slots.entry((lower, upper)).or_insert(0);
                edges.push(HasseEdge {
                    lower,
                    upper,
                    slot: *slot,
                });
                *slot += 1;
            }
        }
    }
    Ok(HasseDiagram::new(nodes, edges))
}

/// Which levels a random matching may touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchingLevel {
    VertexLevel,
    FaceLevel,
    Both,
}

impl MatchingLevel {
    fn allows(self, e: &HasseEdge) -> bool {
        match self {
            MatchingLevel::VertexLevel => e.lower.dimension() == 0,
            MatchingLevel::FaceLevel => e.lower.dimension() == 1,
            MatchingLevel::Both => true,
        }
    }
}

/// Samples a random matching and repairs it to a Morse matching by greedy
/// removal of cycle-closing matches, smallest index first. Deterministic
/// per seed.
pub fn random_morse_matching(h: &HasseDiagram, seed: u64, level: MatchingLevel) -> Matching {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<usize> = (0..h.num_edges())
        .filter(|&i| level.allows(&h.edges()[i]))
        .collect();
    candidates.shuffle(&mut rng);
    // Uniform subset first, so sparse matchings occur too; greedy keeps
    // it disjoint.
    let density = rng.gen_range(0.3..=1.0);
    let mut chosen: Vec<usize> = Vec::new();
    let mut used: BTreeMap<Cell, ()> = BTreeMap::new();
    for i in candidates {
        if !rng.gen_bool(density) {
            continue;
        }
        let e = h.edges()[i];
        if used.contains_key(&e.lower) || used.contains_key(&e.upper) {
            continue;
        }
        used.insert(e.lower, ());
        used.insert(e.upper, ());
        chosen.push(i);
    }
    let mut m = Matching::new(h, chosen).expect("greedy selection is a matching");
    while !is_morse_matching(h, &m) {
        let victim = some_cycle_matched_indices(h, &m)
            .into_iter()
            .min()
            .expect("a non-Morse matching has a cycle with matched edges");
        let indices: Vec<usize> = m.indices().iter().copied().filter(|&i| i != victim).collect();
        m = Matching::new(h, indices).expect("subset of a matching is a matching");
    }
    m
}

/// Matched Hasse-edge indices lying on some directed cycle of a level
/// digraph. Empty only if the matching is Morse.
fn some_cycle_matched_indices(h: &HasseDiagram, m: &Matching) -> Vec<usize> {
    for lower_dim in [0usize, 1] {
        let mut index: BTreeMap<Cell, usize> = BTreeMap::new();
        for &node in h.nodes() {
            if node.dimension() == lower_dim || node.dimension() == lower_dim + 1 {
                let next = index.len();
                index.entry(node).or_insert(next);
            }
        }
        // Arcs remember the Hasse edge they came from.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); index.len()];
        for (i, edge) in h.edges().iter().enumerate() {
            if edge.lower.dimension() != lower_dim {
                continue;
            }
            let lo = index[&edge.lower];
            let hi = index[&edge.upper];
            if m.contains_index(i) {
                adj[lo].push((hi, i));
            } else {
                adj[hi].push((lo, i));
            }
        }
        let n = index.len();
        let mut color = vec![0u8; n];
        let mut arc_taken: Vec<(usize, usize)> = Vec::new();
        for start in 0..n {
            if color[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            color[start] = 1;
            while let Some(&mut (node, ref mut next)) = stack.last_mut() {
                if *next < adj[node].len() {
                    let (child, hedge) = adj[node][*next];
                    *next += 1;
                    match color[child] {
                        0 => {
                            color[child] = 1;
                            arc_taken.push((child, hedge));
                            stack.push((child, 0));
                        }
                        1 => {
                            // Cycle: collect matched arcs along the stack
                            // from `child` to `node`, plus this closing arc.
                            let mut cycle = vec![hedge];
                            let pos = stack.iter().position(|&(c, _)| c == child).unwrap();
                            for (on_stack, _) in &stack[pos + 1..] {
                                if let Some(&(_, he)) =
                                    arc_taken.iter().rev().find(|&&(c, _)| c == *on_stack)
                                {
                                    cycle.push(he);
                                }
                            }
                            return cycle
                                .into_iter()
                                .filter(|&i| m.contains_index(i))
                                .collect();
                        }
                        _ => {}
                    }
                } else {
                    color[node] = 2;
                    stack.pop();
                }
            }
        }
    }
    Vec::new()
}
