//! Brute-force oracles, independent of the library's implementation paths.
//!
//! These recompute answers from first principles (exhaustive enumeration,
//! direct definition-following) and are compared against the optimized
//! operations.

// Shared by several test targets; not every target uses every oracle.
#![allow(dead_code)]

use std::collections::BTreeMap;

use linefield::complex::{Cell, CellComplex, EdgeId, VertexId};
use linefield::hasse::{HasseDiagram, Matching};

/// Exhaustively enumerates simple closed cycles of one Hasse level
/// (including two-cycles through parallel incidences) and reports whether
/// any has all of its alternate edges in the matching.
pub fn has_alternating_cycle(h: &HasseDiagram, m: &Matching) -> bool {
    for lower_dim in [0usize, 1] {
        let mut index: BTreeMap<Cell, usize> = BTreeMap::new();
        for &n in h.nodes() {
            if n.dimension() == lower_dim || n.dimension() == lower_dim + 1 {
                let next = index.len();
                index.entry(n).or_insert(next);
            }
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); index.len()];
        for (i, e) in h.edges().iter().enumerate() {
            if e.lower.dimension() != lower_dim {
                continue;
            }
            let a = index[&e.lower];
            let b = index[&e.upper];
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        if level_has_alternating_cycle(&adj, m) {
            return true;
        }
    }
    false
}

fn level_has_alternating_cycle(adj: &[Vec<(usize, usize)>], m: &Matching) -> bool {
    // Cycles are canonicalized by their smallest node: the search from
    // `start` only passes through larger nodes.
    fn dfs(
        adj: &[Vec<(usize, usize)>],
        m: &Matching,
        start: usize,
        node: usize,
        visited: &mut Vec<bool>,
        edges: &mut Vec<usize>,
    ) -> bool {
        for &(next, edge) in &adj[node] {
            if edges.contains(&edge) {
                continue;
            }
            if next == start && edges.len() >= 1 {
                edges.push(edge);
                let alternating = alternate_edges_in_matching(edges, m);
                edges.pop();
                if alternating {
                    return true;
                }
                continue;
            }
            if next <= start || visited[next] {
                continue;
            }
            visited[next] = true;
            edges.push(edge);
            if dfs(adj, m, start, next, visited, edges) {
                return true;
            }
            edges.pop();
            visited[next] = false;
        }
        false
    }

    let n = adj.len();
    for start in 0..n {
        let mut visited = vec![false; n];
        let mut edges = Vec::new();
        if dfs(adj, m, start, start, &mut visited, &mut edges) {
            return true;
        }
    }
    false
}

fn alternate_edges_in_matching(cycle: &[usize], m: &Matching) -> bool {
    if cycle.len() < 2 || cycle.len() % 2 != 0 {
        return false;
    }
    let evens = cycle.iter().step_by(2).all(|&i| m.contains_index(i));
    let odds = cycle.iter().skip(1).step_by(2).all(|&i| m.contains_index(i));
    evens || odds
}

/// Enumerates every matching of the diagram (independent subsets of Hasse
/// edges) and calls `check` on each.
pub fn for_each_matching(h: &HasseDiagram, mut check: impl FnMut(&Matching)) {
    fn recurse(
        h: &HasseDiagram,
        i: usize,
        used: &mut Vec<Cell>,
        chosen: &mut Vec<usize>,
        check: &mut impl FnMut(&Matching),
    ) {
        if i == h.num_edges() {
            let m = Matching::new(h, chosen.clone()).expect("construction keeps disjointness");
            check(&m);
            return;
        }
        recurse(h, i + 1, used, chosen, check);
        let e = h.edges()[i];
        if !used.contains(&e.lower) && !used.contains(&e.upper) {
            used.push(e.lower);
            used.push(e.upper);
            chosen.push(i);
            recurse(h, i + 1, used, chosen, check);
            chosen.pop();
            used.pop();
            used.pop();
        }
    }
    let mut used = Vec::new();
    let mut chosen = Vec::new();
    recurse(h, 0, &mut used, &mut chosen, &mut check);
}

/// Face tracing straight from the definition: arrive at a vertex, find the
/// arriving end in its rotation list, leave through the next end. Returns
/// the traced walk lengths, sorted.
pub fn traced_face_lengths(k: &CellComplex) -> Vec<usize> {
    // An edge-end is (edge, end); the dart leaving through (e, s) arrives
    // at the end (e, 1-s).
    let mut rotation_pos: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    let mut cycles: Vec<Vec<(usize, usize)>> = Vec::new();
    for v in k.vertices() {
        let cycle: Vec<(usize, usize)> = k
            .rotation()
            .cycle_at(v)
            .iter()
            .map(|d| {
                let end = usize::from(
                    d.direction() == linefield::complex::Direction::Backward,
                );
                (d.edge().0, end)
            })
            .collect();
        let ci = cycles.len();
        for (i, &end) in cycle.iter().enumerate() {
            rotation_pos.insert(end, (ci, i));
        }
        cycles.push(cycle);
    }
    let mut seen: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let mut lengths = Vec::new();
    for e in 0..k.num_edges() {
        for s in 0..2 {
            if seen.contains_key(&(e, s)) {
                continue;
            }
            let mut len = 0;
            let mut leave = (e, s);
            loop {
                if seen.insert(leave, true).is_some() {
                    panic!("tracing revisited an end");
                }
                len += 1;
                let arrive = (leave.0, 1 - leave.1);
                let (ci, pos) = rotation_pos[&arrive];
                let cycle = &cycles[ci];
                leave = cycle[(pos + 1) % cycle.len()];
                if leave == (e, s) {
                    break;
                }
            }
            lengths.push(len);
        }
    }
    lengths.sort_unstable();
    lengths
}

/// The reduced incidence multiset computed straight from the paper's
/// construction: for each critical cell of dimension p+1 and each of its
/// boundary incidences, enumerate all gradient paths by following matched
/// pairs, and record one `(endpoint, cofacet)` pair per path ending at a
/// critical p-cell.
pub fn reduced_pairs_oracle(h: &HasseDiagram, m: &Matching) -> Vec<(Cell, Cell)> {
    let matched_pairs: Vec<(Cell, Cell)> = m.pairs(h);
    let is_matched = |c: Cell| matched_pairs.iter().any(|&(a, b)| a == c || b == c);
    let upward_partner = |c: Cell| {
        matched_pairs
            .iter()
            .find(|&&(lo, _)| lo == c)
            .map(|&(_, up)| up)
    };
    let boundary = |upper: Cell| -> Vec<Cell> {
        h.edges()
            .iter()
            .filter(|e| e.upper == upper)
            .map(|e| e.lower)
            .collect()
    };

    fn paths_from(
        start: Cell,
        upward_partner: &dyn Fn(Cell) -> Option<Cell>,
        boundary: &dyn Fn(Cell) -> Vec<Cell>,
        is_matched: &dyn Fn(Cell) -> bool,
        out: &mut Vec<(Cell, bool)>,
    ) {
        match upward_partner(start) {
            None => out.push((start, !is_matched(start))),
            Some(witness) => {
                let mut skipped_own = false;
                for lower in boundary(witness) {
                    if lower == start && !skipped_own {
                        skipped_own = true;
                        continue;
                    }
                    paths_from(lower, upward_partner, boundary, is_matched, out);
                }
            }
        }
    }

    let mut pairs = Vec::new();
    for &upper in h.nodes() {
        if upper.dimension() == 0 || is_matched(upper) {
            continue;
        }
        for start in boundary(upper) {
            let mut terminals = Vec::new();
            paths_from(
                start,
                &upward_partner,
                &boundary,
                &is_matched,
                &mut terminals,
            );
            for (terminal, critical) in terminals {
                if critical {
                    pairs.push((terminal, upper));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Follows the matched-pair flow from a vertex by hand.
pub fn flow_terminal_oracle(
    k: &CellComplex,
    pairs: &[(VertexId, EdgeId)],
    mut v: VertexId,
) -> VertexId {
    let mut steps = 0;
    loop {
        let next = pairs.iter().find_map(|&(w, e)| {
            if w == v {
                let (a, b) = k.edge_endpoints(e);
                Some(if a == v { b } else { a })
            } else {
                None
            }
        });
        match next {
            Some(w) => v = w,
            None => return v,
        }
        steps += 1;
        assert!(steps <= k.num_vertices(), "flow must terminate");
    }
}
