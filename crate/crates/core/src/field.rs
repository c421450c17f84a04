//! Discrete gradient line fields: a complex together with a Morse matching
//! on the vertex level of its Hasse diagram.
//!
//! A vertex is critical (index 1) when unmatched. A face is critical when
//! the number `C` of unmatched-edge traversals on its boundary walk differs
//! from 2; its index is `1 - C/2`. `C` counts traversals, not distinct
//! edges: the proof of the Euler identity sums `C/2` over faces and needs
//! each edge counted exactly twice globally, which distinct-edge counting
//! breaks on the one-face torus. Indices are exact half-integers, stored
//! doubled.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Cell, CellComplex, EdgeId, FaceId, VertexId};
use crate::hasse::{hasse_diagram, random_morse_matching, HasseDiagram, Matching, MatchingLevel};

/// Exact half-integer, stored as its doubled value. Serializes as its
/// display string ("2", "-3/2") to stay exact in JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl HalfInt {
    pub fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        HalfInt(iter.map(|h| h.0).sum())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("v{} is not an endpoint of e{}: not a vertex-level Hasse edge", vertex.0, edge.0)]
    NotVertexLevel { vertex: VertexId, edge: EdgeId },
    #[error("{0} is matched twice")]
    NotAMatching(Cell),
    #[error("vertex-level matching has an alternating cycle")]
    NotAcyclic,
    #[error("unknown vertex v{}", (.0).0)]
    UnknownVertex(VertexId),
    #[error("unknown face f{}", (.0).0)]
    UnknownFace(FaceId),
}

/// One matched vertex-edge pair; `end` records which end of the edge sits
/// at the vertex (relevant for parallel incidences).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MatchedPair {
    pub vertex: VertexId,
    pub edge: EdgeId,
    pub end: usize,
}

/// A discrete gradient line field `(K, M_V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineField {
    complex: CellComplex,
    pairs: Vec<MatchedPair>,
    #[serde(skip)]
    vertex_match: Vec<Option<usize>>,
    #[serde(skip)]
    edge_match: Vec<Option<usize>>,
}

/// Per-cell index data of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub vertex_indices: Vec<usize>,
    pub face_indices: Vec<HalfInt>,
    pub c_values: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub vertex_sum: i64,
    pub face_sum: HalfInt,
    pub chi: i64,
    pub holds: bool,
}

impl LineField {
    /// Validates that the pairs form an acyclic matching on the vertex level.
    pub fn new(complex: CellComplex, pairs: Vec<(VertexId, EdgeId)>) -> Result<Self, FieldError> {
        let resolved = pairs
            .into_iter()
            .map(|(v, e)| {
                if v.0 >= complex.num_vertices() {
                    return Err(FieldError::UnknownVertex(v));
                }
                if e.0 >= complex.num_edges() {
                    return Err(FieldError::NotVertexLevel { vertex: v, edge: e });
                }
                let (a, b) = complex.edge_endpoints(e);
                let end = if a == v {
                    0
                } else if b == v {
                    1
                } else {
                    return Err(FieldError::NotVertexLevel { vertex: v, edge: e });
                };
                Ok(MatchedPair { vertex: v, edge: e, end })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_pairs(complex, resolved)
    }

    pub fn from_pairs(complex: CellComplex, pairs: Vec<MatchedPair>) -> Result<Self, FieldError> {
        let mut vertex_match = vec![None; complex.num_vertices()];
        let mut edge_match = vec![None; complex.num_edges()];
        for (i, p) in pairs.iter().enumerate() {
            let (a, b) = complex.edge_endpoints(p.edge);
            let at_end = if p.end == 0 { a } else { b };
            if p.end > 1 || at_end != p.vertex {
                return Err(FieldError::NotVertexLevel {
                    vertex: p.vertex,
                    edge: p.edge,
                });
            }
            if vertex_match[p.vertex.0].is_some() {
                return Err(FieldError::NotAMatching(Cell::Vertex(p.vertex)));
            }
            if edge_match[p.edge.0].is_some() {
                return Err(FieldError::NotAMatching(Cell::Edge(p.edge)));
            }
            vertex_match[p.vertex.0] = Some(i);
            edge_match[p.edge.0] = Some(i);
        }
        let field = LineField {
            complex,
            pairs,
            vertex_match,
            edge_match,
        };
        if !field.is_acyclic() {
            return Err(FieldError::NotAcyclic);
        }
        Ok(field)
    }

    /// Gradient flow on vertices: each matched vertex steps to the other
    /// endpoint of its matched edge. Acyclic iff this functional graph has
    /// no cycle (a matched loop is the one-step cycle).
    fn is_acyclic(&self) -> bool {
        let n = self.complex.num_vertices();
        let mut state = vec![0u8; n]; // 0 unseen, 1 on path, 2 done
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut v = start;
            loop {
                if state[v] == 1 {
                    return false;
                }
                if state[v] == 2 {
                    break;
                }
                state[v] = 1;
                path.push(v);
                match self.flow_step(VertexId(v)) {
                    Some(next) => v = next.0,
                    None => break,
                }
            }
            for p in path {
                state[p] = 2;
            }
        }
        true
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn pairs(&self) -> &[MatchedPair] {
        &self.pairs
    }

    pub fn is_vertex_matched(&self, v: VertexId) -> bool {
        self.vertex_match[v.0].is_some()
    }

    pub fn is_edge_matched(&self, e: EdgeId) -> bool {
        self.edge_match[e.0].is_some()
    }

    pub fn matched_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.vertex_match[v.0].map(|i| self.pairs[i].edge)
    }

    pub fn matched_vertex(&self, e: EdgeId) -> Option<VertexId> {
        self.edge_match[e.0].map(|i| self.pairs[i].vertex)
    }

    /// One step of the vertex flow: to the other endpoint of the matched
    /// edge.
    pub fn flow_step(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_match[v.0].map(|i| {
            let p = &self.pairs[i];
            let (a, b) = self.complex.edge_endpoints(p.edge);
            if p.end == 0 {
                b
            } else {
                a
            }
        })
    }

    /// The unique dimension-0 gradient path from `v` to its terminal
    /// critical vertex.
    pub fn flow_path(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(next) = self.flow_step(cur) {
            path.push(next);
            cur = next;
        }
        path
    }

    /// Terminal critical vertex of the flow from `v`.
    pub fn terminal(&self, v: VertexId) -> VertexId {
        *self.flow_path(v).last().unwrap()
    }

    pub fn vertex_index(&self, v: VertexId) -> Result<usize, FieldError> {
        if v.0 >= self.complex.num_vertices() {
            return Err(FieldError::UnknownVertex(v));
        }
        Ok(if self.is_vertex_matched(v) { 0 } else { 1 })
    }

    /// Number of unmatched-edge traversals on the boundary walk
    /// (multiplicity counted).
    pub fn face_c_value(&self, f: FaceId) -> Result<usize, FieldError> {
        if f.0 >= self.complex.num_faces() {
            return Err(FieldError::UnknownFace(f));
        }
        Ok(self
            .complex
            .face_walk(f)
            .traversals()
            .filter(|&(e, _)| !self.is_edge_matched(e))
            .count())
    }

    /// `1 - C/2`.
    pub fn face_index(&self, f: FaceId) -> Result<HalfInt, FieldError> {
        Ok(HalfInt::from_doubled(2 - self.face_c_value(f)? as i64))
    }

    /// Critical iff `C != 2`.
    pub fn is_critical_face(&self, f: FaceId) -> Result<bool, FieldError> {
        Ok(self.face_c_value(f)? != 2)
    }

    pub fn critical_vertices(&self) -> Vec<VertexId> {
        self.complex
            .vertices()
            .filter(|&v| !self.is_vertex_matched(v))
            .collect()
    }

    pub fn critical_faces(&self) -> Vec<FaceId> {
        self.complex
            .face_ids()
            .filter(|&f| self.face_c_value(f).unwrap() != 2)
            .collect()
    }

    pub fn index_report(&self) -> IndexReport {
        let vertex_indices = self
            .complex
            .vertices()
            .map(|v| self.vertex_index(v).unwrap())
            .collect();
        let c_values: Vec<usize> = self
            .complex
            .face_ids()
            .map(|f| self.face_c_value(f).unwrap())
            .collect();
        let face_indices = c_values
            .iter()
            .map(|&c| HalfInt::from_doubled(2 - c as i64))
            .collect();
        IndexReport {
            vertex_indices,
            face_indices,
            c_values,
        }
    }

    /// The Euler identity for line fields: index sums equal the Euler
    /// characteristic. Holds for every valid field.
    pub fn euler_check(&self) -> EulerCheck {
        let report = self.index_report();
        let vertex_sum: i64 = report.vertex_indices.iter().map(|&i| i as i64).sum();
        let face_sum: HalfInt = report.face_indices.iter().copied().sum();
        let chi = self.complex.euler_characteristic();
        EulerCheck {
            vertex_sum,
            face_sum,
            chi,
            holds: HalfInt::from_int(vertex_sum) + face_sum == HalfInt::from_int(chi),
        }
    }

    /// The matching as vertex-level Hasse edges of `hasse_diagram(K)`.
    /// Vertex-edge Hasse edges come first, two per edge, so the index of
    /// end `s` of edge `e` is `2e + s`.
    pub fn matching(&self, h: &HasseDiagram) -> Matching {
        let indices = self.pairs.iter().map(|p| 2 * p.edge.0 + p.end).collect();
        Matching::new(h, indices).expect("field pairs form a matching")
    }
}

/// The field induced by a breadth-first spanning tree: every non-root
/// vertex is matched with its tree edge toward the root, leaving the root
/// as the single critical vertex.
pub fn spanning_tree_field(k: &CellComplex, root: VertexId) -> Result<LineField, FieldError> {
    if root.0 >= k.num_vertices() {
        return Err(FieldError::UnknownVertex(root));
    }
    let mut adj: Vec<Vec<(EdgeId, VertexId)>> = vec![Vec::new(); k.num_vertices()];
    for e in k.edge_ids() {
        let (a, b) = k.edge_endpoints(e);
        if a != b {
            adj[a.0].push((e, b));
            adj[b.0].push((e, a));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut pairs = Vec::new();
    let mut seen = vec![false; k.num_vertices()];
    seen[root.0] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(e, w) in &adj[v.0] {
            if !seen[w.0] {
                seen[w.0] = true;
                pairs.push((w, e));
                queue.push_back(w);
            }
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "complex graphs are connected");
    LineField::new(k.clone(), pairs)
}

/// A uniformly-sampled-then-repaired random field; deterministic per seed.
pub fn random_field(k: &CellComplex, seed: u64) -> LineField {
    let h = hasse_diagram(k);
    let m = random_morse_matching(&h, seed, MatchingLevel::VertexLevel);
    let pairs = m
        .indices()
        .iter()
        .map(|&i| {
            // Vertex-level Hasse edges are laid out as 2e + end.
            let edge = EdgeId(i / 2);
            let end = i % 2;
            let (a, b) = k.edge_endpoints(edge);
            MatchedPair {
                vertex: if end == 0 { a } else { b },
                edge,
                end,
            }
        })
        .collect();
    LineField::from_pairs(k.clone(), pairs).expect("repaired matching is a valid field")
}
