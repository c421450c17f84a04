//! Named example complexes and seeded random generators.
//!
//! Everything here is deterministic: the random constructions take an
//! explicit seed and use a counter-based RNG, so fixtures are reproducible
//! across runs and platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{BoundaryWalk, CellComplex, Direction, EdgeId, FaceId, RotationSystem, VertexId};
use crate::complex::Dart;

fn walk(traversals: &[(usize, Direction)]) -> BoundaryWalk {
    BoundaryWalk::new(
        traversals
            .iter()
            .map(|&(e, d)| (EdgeId(e), d))
            .collect(),
    )
}

use Direction::{Backward as B, Forward as F};

pub fn tetrahedron() -> CellComplex {
    let v = |i| VertexId(i);
    CellComplex::build(
        4,
        vec![
            (v(0), v(1)),
            (v(0), v(2)),
            (v(0), v(3)),
            (v(1), v(2)),
            (v(1), v(3)),
            (v(2), v(3)),
        ],
        vec![
            walk(&[(0, F), (3, F), (1, B)]),
            walk(&[(1, F), (5, F), (2, B)]),
            walk(&[(2, F), (4, B), (0, B)]),
            walk(&[(4, F), (5, B), (3, B)]),
        ],
    )
    .expect("tetrahedron is valid")
}

pub fn cube() -> CellComplex {
    let v = |i| VertexId(i);
    CellComplex::build(
        8,
        vec![
            (v(0), v(1)),
            (v(1), v(2)),
            (v(2), v(3)),
            (v(3), v(0)),
            (v(4), v(5)),
            (v(5), v(6)),
            (v(6), v(7)),
            (v(7), v(4)),
            (v(0), v(4)),
            (v(1), v(5)),
            (v(2), v(6)),
            (v(3), v(7)),
        ],
        vec![
            walk(&[(3, B), (2, B), (1, B), (0, B)]),
            walk(&[(4, F), (5, F), (6, F), (7, F)]),
            walk(&[(0, F), (9, F), (4, B), (8, B)]),
            walk(&[(1, F), (10, F), (5, B), (9, B)]),
            walk(&[(2, F), (11, F), (6, B), (10, B)]),
            walk(&[(3, F), (8, F), (7, B), (11, B)]),
        ],
    )
    .expect("cube is valid")
}

pub fn octahedron() -> CellComplex {
    let v = |i| VertexId(i);
    CellComplex::build(
        6,
        vec![
            (v(0), v(1)),
            (v(0), v(2)),
            (v(0), v(3)),
            (v(0), v(4)),
            (v(1), v(2)),
            (v(2), v(3)),
            (v(3), v(4)),
            (v(4), v(1)),
            (v(1), v(5)),
            (v(2), v(5)),
            (v(3), v(5)),
            (v(4), v(5)),
        ],
        vec![
            walk(&[(0, F), (4, F), (1, B)]),
            walk(&[(1, F), (5, F), (2, B)]),
            walk(&[(2, F), (6, F), (3, B)]),
            walk(&[(3, F), (7, F), (0, B)]),
            walk(&[(8, F), (9, B), (4, B)]),
            walk(&[(9, F), (10, B), (5, B)]),
            walk(&[(10, F), (11, B), (6, B)]),
            walk(&[(11, F), (8, B), (7, B)]),
        ],
    )
    .expect("octahedron is valid")
}

/// The torus as a square with identified sides: one vertex, two loops, one
/// face `a b a- b-`.
pub fn torus_square() -> CellComplex {
    let v = VertexId(0);
    CellComplex::build(
        1,
        vec![(v, v), (v, v)],
        vec![walk(&[(0, F), (1, F), (0, B), (1, B)])],
    )
    .expect("torus square is valid")
}

/// The genus-2 surface as an octagon `a b a- b- c d c- d-`.
pub fn genus2_octagon() -> CellComplex {
    let v = VertexId(0);
    CellComplex::build(
        1,
        vec![(v, v), (v, v), (v, v), (v, v)],
        vec![walk(&[
            (0, F),
            (1, F),
            (0, B),
            (1, B),
            (2, F),
            (3, F),
            (2, B),
            (3, B),
        ])],
    )
    .expect("genus-2 octagon is valid")
}

/// Sphere made of an n-cycle with its two sides as faces (n >= 2).
pub fn cycle_sphere(n: usize) -> CellComplex {
    assert!(n >= 2);
    let edges = (0..n)
        .map(|i| (VertexId(i), VertexId((i + 1) % n)))
        .collect();
    let front: Vec<(usize, Direction)> = (0..n).map(|e| (e, F)).collect();
    let mut back: Vec<(usize, Direction)> = vec![(0, B)];
    back.extend((1..n).rev().map(|e| (e, B)));
    CellComplex::build(n, edges, vec![walk(&front), walk(&back)]).expect("cycle sphere is valid")
}

/// Two triangles glued along all three edges.
pub fn doubled_triangle() -> CellComplex {
    cycle_sphere(3)
}

/// Sphere whose graph is a path on n vertices; the single face walks the
/// path out and back (n >= 2).
pub fn path_sphere(n: usize) -> CellComplex {
    assert!(n >= 2);
    let edges = (0..n - 1)
        .map(|i| (VertexId(i), VertexId(i + 1)))
        .collect();
    let mut w: Vec<(usize, Direction)> = (0..n - 1).map(|e| (e, F)).collect();
    w.extend((0..n - 1).rev().map(|e| (e, B)));
    CellComplex::build(n, edges, vec![walk(&w)]).expect("path sphere is valid")
}

/// Two vertices, one edge, one face: the smallest sphere decomposition.
pub fn single_edge_sphere() -> CellComplex {
    path_sphere(2)
}

/// Sphere sliced by k meridians between two poles (k >= 2): all faces are
/// bigons.
pub fn orange(k: usize) -> CellComplex {
    assert!(k >= 2);
    let edges = (0..k).map(|_| (VertexId(0), VertexId(1))).collect();
    let faces = (0..k)
        .map(|i| walk(&[(i, F), ((i + 1) % k, B)]))
        .collect();
    CellComplex::build(2, edges, faces).expect("orange is valid")
}

/// K4 with its planar rotation: vertex 0 in the center of triangle 1,2,3.
pub fn k4_planar() -> CellComplex {
    let d = |e: usize, dir: Direction| Dart::new(EdgeId(e), dir);
    let rot = RotationSystem::new(vec![
        vec![d(0, F), d(1, F), d(2, F)],
        vec![d(3, F), d(0, B), d(4, F)],
        vec![d(5, F), d(1, B), d(3, B)],
        vec![d(4, B), d(2, B), d(5, B)],
    ]);
    let v = |i| VertexId(i);
    CellComplex::from_rotation(
        4,
        vec![
            (v(0), v(1)),
            (v(0), v(2)),
            (v(0), v(3)),
            (v(1), v(2)),
            (v(1), v(3)),
            (v(2), v(3)),
        ],
        &rot,
    )
    .expect("planar K4 is valid")
}

fn k5_edges() -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::new();
    for a in 0..5 {
        for b in (a + 1)..5 {
            edges.push((VertexId(a), VertexId(b)));
        }
    }
    edges
}

/// Two embeddings of K5 with different genus: the first on the torus, the
/// second on the genus-2 surface. Found by seeded search over rotations.
pub fn k5_two_embeddings() -> (CellComplex, CellComplex) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let edges = k5_edges();
    let mut torus = None;
    let mut genus2 = None;
    while torus.is_none() || genus2.is_none() {
        let k = random_rotation_of(5, &edges, &mut rng);
        match k.euler_characteristic() {
            0 if torus.is_none() => torus = Some(k),
            -2 if genus2.is_none() => genus2 = Some(k),
            _ => {}
        }
    }
    (torus.unwrap(), genus2.unwrap())
}

fn random_rotation_of(
    num_vertices: usize,
    edges: &[(VertexId, VertexId)],
    rng: &mut ChaCha8Rng,
) -> CellComplex {
    let mut at: Vec<Vec<Dart>> = vec![Vec::new(); num_vertices];
    for (e, &(a, b)) in edges.iter().enumerate() {
        at[a.0].push(Dart::new(EdgeId(e), F));
        at[b.0].push(Dart::new(EdgeId(e), B));
    }
    for cycle in &mut at {
        cycle.shuffle(rng);
    }
    CellComplex::from_rotation(num_vertices, edges.to_vec(), &RotationSystem::new(at))
        .expect("rotation of a connected graph is valid")
}

/// Random connected multigraph (loops and parallels allowed) with a random
/// rotation system, traced to a complex. At most `max_vertices` vertices.
pub fn random_rotation_complex(seed: u64, max_vertices: usize) -> CellComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(1..=max_vertices.max(1));
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    // Random spanning tree keeps the graph connected.
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        edges.push((VertexId(j), VertexId(i)));
    }
    let extra = rng.gen_range(1..=4);
    for _ in 0..extra {
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        edges.push((VertexId(a), VertexId(b)));
    }
    random_rotation_of(nv, &edges, &mut rng)
}

/// Random sphere triangulation grown from the tetrahedron by repeated
/// face splits; `extra_splits` of them, so 4 + 2*extra_splits faces.
pub fn random_sphere_triangulation(seed: u64, extra_splits: usize) -> CellComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k = tetrahedron();
    for _ in 0..extra_splits {
        let f = FaceId(rng.gen_range(0..k.num_faces()));
        k = split_face(&k, f);
    }
    k
}

/// Splits a triangular face into three by a new interior vertex.
fn split_face(k: &CellComplex, f: FaceId) -> CellComplex {
    let darts = k.face_walk(f).darts().to_vec();
    assert_eq!(darts.len(), 3, "split_face needs a triangle");
    let nv = k.num_vertices();
    let w = VertexId(nv);
    let mut edges = k.edges().to_vec();
    let corner: Vec<VertexId> = darts.iter().map(|&d| k.origin(d)).collect();
    let spoke_base = edges.len();
    for &c in &corner {
        edges.push((c, w));
    }
    let mut walks: Vec<BoundaryWalk> = k
        .face_ids()
        .filter(|&g| g != f)
        .map(|g| k.face_walk(g).clone())
        .collect();
    for i in 0..3 {
        let j = (i + 1) % 3;
        walks.push(BoundaryWalk::new(vec![
            (darts[i].edge(), darts[i].direction()),
            (EdgeId(spoke_base + j), Direction::Forward),
            (EdgeId(spoke_base + i), Direction::Backward),
        ]));
    }
    CellComplex::build(nv + 1, edges, walks).expect("face split preserves validity")
}

/// The complexes exercised by the acceptance suite.
pub fn acceptance_complexes() -> Vec<(String, CellComplex)> {
    let mut out = vec![
        ("tetrahedron".to_string(), tetrahedron()),
        ("cube".to_string(), cube()),
        ("octahedron".to_string(), octahedron()),
        ("torus-square".to_string(), torus_square()),
        ("genus2-octagon".to_string(), genus2_octagon()),
    ];
    for (i, seed) in [11u64, 22, 33].iter().enumerate() {
        let k = random_sphere_triangulation(*seed, 4 + i * 2);
        out.push((format!("sphere-triangulation-{}", i), k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_expected_characteristics() {
        assert_eq!(tetrahedron().euler_characteristic(), 2);
        assert_eq!(cube().euler_characteristic(), 2);
        assert_eq!(octahedron().euler_characteristic(), 2);
        assert_eq!(torus_square().euler_characteristic(), 0);
        assert_eq!(genus2_octagon().euler_characteristic(), -2);
        assert_eq!(cycle_sphere(5).euler_characteristic(), 2);
        assert_eq!(path_sphere(4).euler_characteristic(), 2);
        assert_eq!(orange(6).euler_characteristic(), 2);
    }

    #[test]
    fn sphere_triangulations_are_spheres() {
        for seed in 0..5 {
            let k = random_sphere_triangulation(seed, 8);
            assert_eq!(k.euler_characteristic(), 2);
            assert_eq!(k.num_faces(), 20);
            for f in k.face_ids() {
                assert_eq!(k.face_walk(f).len(), 3);
            }
        }
    }

    #[test]
    fn random_rotation_complex_is_deterministic() {
        let a = random_rotation_complex(7, 10);
        let b = random_rotation_complex(7, 10);
        assert_eq!(a, b);
    }
}
