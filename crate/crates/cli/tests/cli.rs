//! End-to-end tests of the `linefield` binary.

use std::path::Path;
use std::process::{Command, Output};

use linefield::complex::VertexId;
use linefield::field::spanning_tree_field;
use linefield::gen;
use linefield_cli::format::{serialize_complex, serialize_field};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linefield"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, text: String| {
            std::fs::write(dir.path().join(name), text).unwrap();
        };
        write("tetra.cplx", serialize_complex(&gen::tetrahedron(), Some("tetrahedron")));
        write("torus.cplx", serialize_complex(&gen::torus_square(), None));
        write("orange.cplx", serialize_complex(&gen::orange(3), None));
        let empty = linefield::field::LineField::new(gen::tetrahedron(), vec![]).unwrap();
        write("tetra-empty.fld", serialize_field(&empty, None));
        let tree = spanning_tree_field(&gen::tetrahedron(), VertexId(0)).unwrap();
        write("tetra-tree.fld", serialize_field(&tree, None));
        // A relabeled copy of the same tree field.
        let vp = [2usize, 3, 1, 0];
        let ep = [4usize, 2, 5, 0, 3, 1];
        let relabeled = gen::tetrahedron().relabeled(&vp, &ep);
        let pairs = tree
            .pairs()
            .iter()
            .map(|p| {
                (
                    VertexId(vp[p.vertex.0]),
                    linefield::complex::EdgeId(ep[p.edge.0]),
                )
            })
            .collect();
        let relabeled_field = linefield::field::LineField::new(relabeled, pairs).unwrap();
        write("tetra-tree-relabeled.fld", serialize_field(&relabeled_field, None));
        // Degenerate: empty field on the three-slice orange.
        let degen = linefield::field::LineField::new(gen::orange(3), vec![]).unwrap();
        write("degen.fld", serialize_field(&degen, None));
        // A field referencing its complex by path.
        write(
            "byref.fld",
            "fld 1\ncomplex tetra.cplx\nm 1 0\nm 2 1\nm 3 2\n".to_string(),
        );
        // Rotation-only file for tracing: one edge, trivial rotation.
        write(
            "edge.cplx",
            "cplx 1\nvertices 2\ne 0 1\nr 0 1\nr 1 -1\n".to_string(),
        );
        // Parse error: bad token on line 3, column 5.
        write("broken.cplx", "cplx 1\nvertices 2\ne 0 x\n".to_string());
        // Validation error: an edge side used three times.
        write(
            "reused.cplx",
            "cplx 1\nvertices 2\ne 0 1\nf 1 -1\nf 1 -1\n".to_string(),
        );
        Fixtures { dir }
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }
}

#[test]
fn validate_complex_and_field() {
    let fx = Fixtures::new();
    let out = run(&["validate", "tetra.cplx"], fx.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out), "ok complex V=4 E=6 F=4 chi=2\n");

    let out = run(&["validate", "tetra-tree.fld"], fx.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out), "ok field V=4 E=6 F=4 chi=2 matched=3\n");
}

#[test]
fn euler_prints_both_identities() {
    let fx = Fixtures::new();
    let out = run(&["euler", "tetra-empty.fld"], fx.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("chi = V - E + F = 4 - 6 + 4 = 2"));
    assert!(text.contains("vertex_sum=4 face_sum=-2 chi=2 OK"));

    // A bare complex is the empty field.
    let out = run(&["euler", "tetra.cplx"], fx.path());
    assert!(text.contains("vertex_sum=4"));
    assert!(out.status.success());
}

#[test]
fn euler_json_output() {
    let fx = Fixtures::new();
    let out = run(&["euler", "torus.cplx", "--json"], fx.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["chi"], 0);
    assert_eq!(v["vertex_sum"], 1);
    assert_eq!(v["face_sum"], "-1");
    assert_eq!(v["holds"], true);
}

#[test]
fn critical_lists_cells_and_flags_unstable() {
    let fx = Fixtures::new();
    let out = run(&["critical", "tetra-tree.fld", "--warn-unstable"], fx.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("v0 index 1"));
    assert!(text.contains("C=1 index 1/2 (unstable)"));
    assert!(text.contains("C=3 index -1/2 (unstable)"));
    assert!(text.contains("OK"));
}

#[test]
fn reduce_reports_critical_data() {
    let fx = Fixtures::new();
    let out = run(&["reduce", "tetra-tree.fld"], fx.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("critical: 1 vertices, 3 edges, 4 faces"));
    assert!(text.contains("reduced: V=1 E=3 F=4 chi=2"));
}

#[test]
fn reduce_degenerate_notices_and_exits_3() {
    let fx = Fixtures::new();
    let out = run(&["reduce", "degen.fld"], fx.path());
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("degenerate:"));
    assert!(text.contains("sphere"));
}

#[test]
fn radial_and_canon_and_iso() {
    let fx = Fixtures::new();
    let out = run(&["radial", "tetra.cplx"], fx.path());
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "radial: A=4 B=4 edges=12 traced-faces=6 quad-invariant=ok\n"
    );

    let out = run(&["iso", "tetra-tree.fld", "tetra-tree-relabeled.fld"], fx.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out), "equivalent\n");

    let out = run(&["iso", "tetra-tree.fld", "tetra-empty.fld"], fx.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "inequivalent\n");

    let a = run(&["canon", "tetra-tree.fld"], fx.path());
    let b = run(&["canon", "tetra-tree-relabeled.fld"], fx.path());
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn gen_emits_valid_field_files() {
    let fx = Fixtures::new();
    let out = run(&["gen", "tetra.cplx", "--tree", "0"], fx.path());
    assert!(out.status.success());
    let text = stdout(&out);
    let parsed = linefield_cli::format::FieldFile::parse(&text).unwrap();
    let field = parsed.to_field(None).unwrap();
    assert_eq!(field.critical_vertices(), vec![VertexId(0)]);

    let a = run(&["gen", "tetra.cplx", "--random", "7"], fx.path());
    let b = run(&["gen", "tetra.cplx", "--random", "7"], fx.path());
    assert_eq!(stdout(&a), stdout(&b), "gen --random is deterministic");
}

#[test]
fn trace_emits_the_traced_complex() {
    let fx = Fixtures::new();
    let out = run(&["trace", "edge.cplx"], fx.path());
    assert!(out.status.success());
    let parsed = linefield_cli::format::ComplexFile::parse(&stdout(&out)).unwrap();
    let k = parsed.to_complex().unwrap();
    assert_eq!((k.num_vertices(), k.num_edges(), k.num_faces()), (2, 1, 1));
    assert_eq!(k.euler_characteristic(), 2);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let fx = Fixtures::new();
    let out = run(&["validate", "broken.cplx"], fx.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line 3"), "stderr: {err}");
    assert!(err.contains("column 5"), "stderr: {err}");

    let out = run(&["validate", "broken.cplx", "--json"], fx.path());
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 3);
    assert_eq!(v["error"]["column"], 5);
}

#[test]
fn validation_errors_exit_1_with_cell_id() {
    let fx = Fixtures::new();
    let out = run(&["validate", "reused.cplx"], fx.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("e0"), "stderr: {err}");
    assert!(err.contains("f1"), "stderr: {err}");
}

#[test]
fn dot_outputs_are_well_formed() {
    let fx = Fixtures::new();
    let out = run(&["radial", "tetra.cplx", "--dot"], fx.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("graph radial {"));
    assert!(text.contains("shape=circle"));
    assert!(text.contains("shape=box"));

    let out = run(&["critical", "tetra-tree.fld", "--dot"], fx.path());
    let text = stdout(&out);
    assert!(text.starts_with("graph hasse {"));
    assert!(text.contains("penwidth=3"));

    let out = run(&["reduce", "tetra-tree.fld", "--dot"], fx.path());
    let text = stdout(&out);
    assert!(text.starts_with("graph reduced {"));
    assert!(text.contains("index 1/2"));
}

#[test]
fn field_files_can_reference_complex_files() {
    let fx = Fixtures::new();
    let out = run(&["validate", "byref.fld"], fx.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "ok field V=4 E=6 F=4 chi=2 matched=3\n");
}

#[test]
fn complex_serialization_round_trips_many_complexes() {
    for seed in 0..20u64 {
        let k = gen::random_sphere_triangulation(seed, (seed % 9) as usize);
        let text = serialize_complex(&k, None);
        let back = linefield_cli::format::ComplexFile::parse(&text)
            .unwrap()
            .to_complex()
            .unwrap();
        assert_eq!(k, back);
    }
}
