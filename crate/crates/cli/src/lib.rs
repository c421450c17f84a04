//! Command-line surface for the line-field library.
//!
//! Exit codes: 0 ok, 1 validation failure (or a negative `iso` answer),
//! 2 parse failure, 3 degenerate-input notice (`reduce` only; output is
//! still emitted).

pub mod export;
pub mod format;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use linefield::complex::{CellComplex, VertexId};
use linefield::field::{random_field, spanning_tree_field, LineField};
use linefield::hasse::hasse_diagram;
use linefield::homotopy::{reduce, HomotopyError};
use linefield::radial::{radial_graph, radial_of_reduced, EmbeddedBipartiteGraph};

use format::{ComplexFile, FieldFile, FormatError};

#[derive(Parser)]
#[command(
    name = "linefield",
    version,
    about = "Discrete gradient line fields on closed oriented surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Emit Graphviz DOT where applicable (critical, reduce, radial).
    #[arg(long, global = true)]
    dot: bool,
    /// Flag odd-C faces (not structurally stable critical points).
    #[arg(long = "warn-unstable", global = true)]
    warn_unstable: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check all invariants of a .cplx or .fld file.
    Validate { file: PathBuf },
    /// Print both Euler identities (cell counts and index sums).
    Euler { file: PathBuf },
    /// List critical cells with their indices.
    Critical { file: PathBuf },
    /// Reduce a field to its minimal decomposition.
    Reduce { file: PathBuf },
    /// Radial graph of a complex, or of a field's reduction.
    Radial { file: PathBuf },
    /// Compare the equivalence classes of two fields.
    Iso { a: PathBuf, b: PathBuf },
    /// Print the canonical form of the radial graph as hex.
    Canon { file: PathBuf },
    /// Generate a field over a complex (spanning tree or random).
    Gen {
        file: PathBuf,
        /// Spanning-tree field rooted at this vertex.
        #[arg(long, conflicts_with = "random")]
        tree: Option<usize>,
        /// Random field from this seed.
        #[arg(long)]
        random: Option<u64>,
    },
    /// Trace the faces induced by a rotation block.
    Trace { file: PathBuf },
}

pub fn run_from_env() -> i32 {
    run(std::env::args())
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/usage; usage problems are parse
            // failures.
            let _ = e.print();
            return if e.exit_code() == 0 { 0 } else { 2 };
        }
    };
    let json = cli.json;
    match dispatch(cli) {
        Ok((output, code)) => {
            print!("{output}");
            code
        }
        Err(e) => {
            if json {
                let kind = match &e {
                    FormatError::Parse { .. } => "parse",
                    FormatError::Io(_) => "io",
                    _ => "validation",
                };
                let mut obj = serde_json::json!({ "kind": kind, "message": e.to_string() });
                if let FormatError::Parse { line, column, .. } = &e {
                    obj["line"] = (*line).into();
                    obj["column"] = (*column).into();
                }
                println!("{}", serde_json::json!({ "error": obj }));
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

/// Either input kind, normalized: a bare complex is treated as the field
/// with the empty matching where a field is needed.
enum Input {
    Complex(CellComplex),
    Field(LineField),
}

impl Input {
    fn field(self) -> Result<LineField, FormatError> {
        match self {
            Input::Field(f) => Ok(f),
            Input::Complex(k) => Ok(LineField::new(k, vec![])?),
        }
    }
}

fn load(path: &Path) -> Result<Input, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FormatError::Io(format!("{}: {e}", path.display())))?;
    let is_field = match path.extension().and_then(|s| s.to_str()) {
        Some("fld") => true,
        Some("cplx") => false,
        _ => text.lines().next().map_or(false, |l| l.trim_start().starts_with("fld")),
    };
    if is_field {
        let parsed = FieldFile::parse(&text)?;
        Ok(Input::Field(parsed.to_field(path.parent())?))
    } else {
        Ok(Input::Complex(ComplexFile::parse(&text)?.to_complex()?))
    }
}

fn dispatch(cli: Cli) -> Result<(String, i32), FormatError> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(file, &cli),
        Command::Euler { file } => cmd_euler(file, &cli),
        Command::Critical { file } => cmd_critical(file, &cli),
        Command::Reduce { file } => cmd_reduce(file, &cli),
        Command::Radial { file } => cmd_radial(file, &cli),
        Command::Iso { a, b } => cmd_iso(a, b, &cli),
        Command::Canon { file } => cmd_canon(file, &cli),
        Command::Gen { file, tree, random } => cmd_gen(file, *tree, *random),
        Command::Trace { file } => cmd_trace(file, &cli),
    }
}

fn cmd_validate(path: &Path, cli: &Cli) -> Result<(String, i32), FormatError> {
    let out = match load(path)? {
        Input::Complex(k) => {
            if cli.json {
                serde_json::json!({
                    "ok": true,
                    "kind": "complex",
                    "vertices": k.num_vertices(),
                    "edges": k.num_edges(),
                    "faces": k.num_faces(),
                    "chi": k.euler_characteristic(),
                })
                .to_string()
                    + "\n"
            } else {
                format!(
                    "ok complex V={} E={} F={} chi={}\n",
                    k.num_vertices(),
                    k.num_edges(),
                    k.num_faces(),
                    k.euler_characteristic()
                )
            }
        }
        Input::Field(f) => {
            let k = f.complex();
            if cli.json {
                serde_json::json!({
                    "ok": true,
                    "kind": "field",
                    "vertices": k.num_vertices(),
                    "edges": k.num_edges(),
                    "faces": k.num_faces(),
                    "chi": k.euler_characteristic(),
                    "matched": f.pairs().len(),
                    "matching": export::field_pairs_json(&f),
                })
                .to_string()
                    + "\n"
            } else {
                format!(
                    "ok field V={} E={} F={} chi={} matched={}\n",
                    k.num_vertices(),
                    k.num_edges(),
                    k.num_faces(),
                    k.euler_characteristic(),
                    f.pairs().len()
                )
            }
        }
    };
    Ok((out, 0))
}

fn cmd_euler(path: &Path, cli: &Cli) -> Result<(String, i32), FormatError> {
    let field = load(path)?.field()?;
    let k = field.complex();
    let ec = field.euler_check();
    let out = if cli.json {
        serde_json::json!({
            "vertices": k.num_vertices(),
            "edges": k.num_edges(),
            "faces": k.num_faces(),
            "chi": ec.chi,
            "vertex_sum": ec.vertex_sum,
            "face_sum": ec.face_sum,
            "holds": ec.holds,
        })
        .to_string()
            + "\n"
    } else {
        format!(
            "chi = V - E + F = {} - {} + {} = {}\nvertex_sum={} face_sum={} chi={} {}\n",
            k.num_vertices(),
            k.num_edges(),
            k.num_faces(),
            ec.chi,
            ec.vertex_sum,
            ec.face_sum,
            ec.chi,
            if ec.holds { "OK" } else { "FAIL" }
        )
    };
    Ok((out, if ec.holds { 0 } else { 1 }))
}

fn cmd_critical(path: &Path, cli: &Cli) -> Result<(String, i32), FormatError> {
    let field = load(path)?.field()?;
    if cli.dot {
        let h = hasse_diagram(field.complex());
        let m = field.matching(&h);
        return Ok((export::dot_hasse(&h, Some(&m)), 0));
    }
    let report = field.index_report();
    if cli.json {
        let mut faces = Vec::new();
        for f in field.complex().face_ids() {
            let c = report.c_values[f.0];
            if c != 2 {
                faces.push(serde_json::json!({
                    "face": f.0,
                    "c": c,
                    "index": report.face_indices[f.0],
                    "unstable": c % 2 == 1,
                }));
            }
        }
        let h = hasse_diagram(field.complex());
        let m = field.matching(&h);
        let out = serde_json::json!({
            "critical_vertices": field.critical_vertices().iter().map(|v| v.0).collect::<Vec<_>>(),
            "critical_faces": faces,
            "matching": export::matching_pairs_json(&h, &m),
            "chi": field.complex().euler_characteristic(),
        });
        return Ok((out.to_string() + "\n", 0));
    }
    let mut out = String::new();
    for v in field.critical_vertices() {
        out.push_str(&format!("v{} index 1\n", v.0));
    }
    for f in field.critical_faces() {
        let c = report.c_values[f.0];
        let mut line = format!("f{} C={} index {}", f.0, c, report.face_indices[f.0]);
        if cli.warn_unstable && c % 2 == 1 {
            line.push_str(" (unstable)");
        }
        out.push_str(&line);
        out.push('\n');
    }
    let ec = field.euler_check();
    out.push_str(&format!(
        "index sum = {} + {} = {} (chi = {}) {}\n",
        ec.vertex_sum,
        ec.face_sum,
        ec.chi,
        ec.chi,
        if ec.holds { "OK" } else { "FAIL" }
    ));
    Ok((out, 0))
}

fn cmd_reduce(path: &Path, cli: &Cli) -> Result<(String, i32), FormatError> {
    let field = load(path)?.field()?;
    match reduce(&field) {
        Ok(r) => {
            if cli.dot {
                return Ok((export::dot_reduced(&r), 0));
            }
            if cli.json {
                return Ok((serde_json::to_string(&r).unwrap() + "\n", 0));
            }
            let mut out = format!(
                "critical: {} vertices, {} edges, {} faces\n",
                r.critical_vertices.len(),
                r.critical_edges.len(),
                r.critical_faces.len()
            );
            out.push_str(&format!(
                "reduced: V={} E={} F={} chi={}\n",
                r.complex.num_vertices(),
                r.complex.num_edges(),
                r.complex.num_faces(),
                r.complex.euler_characteristic()
            ));
            for &(f, c, idx) in &r.critical_faces {
                let mut line = format!("f{} C={} index {}", f.0, c, idx);
                if cli.warn_unstable && c % 2 == 1 {
                    line.push_str(" (unstable)");
                }
                out.push_str(&line);
                out.push('\n');
            }
            Ok((out, 0))
        }
        Err(HomotopyError::Degenerate(w)) => {
            let out = if cli.json {
                serde_json::json!({
                    "degenerate": w.to_string(),
                    "class": "sphere",
                    "critical": { "vertex_index": 1, "face_index": 1 },
                })
                .to_string()
                    + "\n"
            } else {
                format!(
                    "degenerate: {w}\nclass: sphere (one critical vertex index 1, one critical face index 1)\n"
                )
            };
            Ok((out, 3))
        }
        Err(e @ HomotopyError::DegenerateOnNonSphere { .. }) => {
            Err(FormatError::Io(e.to_string()))
        }
    }
}

fn radial_of(path: &Path) -> Result<EmbeddedBipartiteGraph, FormatError> {
    Ok(match load(path)? {
        Input::Complex(k) => radial_graph(&k),
        Input::Field(f) => radial_of_reduced(&f)
            .map_err(|e| FormatError::Io(e.to_string()))?,
    })
}

fn cmd_radial(path: &Path, cli: &Cli) -> Result<(String, i32), FormatError> {
    let g = radial_of(path)?;
    if cli.dot {
        return Ok((export::dot_radial(&g), 0));
    }
    if cli.json {
        return Ok((serde_json::to_string(&g).unwrap() + "\n", 0));
    }
    let out = format!(
        "radial: A={} B={} edges={} traced-faces={} quad-invariant={}\n",
        g.num_a(),
        g.num_b(),
        g.num_edges(),
        g.graph().num_faces(),
        if g.quad_invariant_holds() { "ok" } else { "violated" }
    );
    Ok((out, if g.quad_invariant_holds() { 0 } else { 1 }))
}

fn cmd_iso(a: &Path, b: &Path, cli: &Cli) -> Result<(String, i32), FormatError> {
    let ga = radial_of(a)?;
    let gb = radial_of(b)?;
    let eq = linefield::radial::radial_equivalent(&ga, &gb);
    let out = if cli.json {
        serde_json::json!({ "equivalent": eq }).to_string() + "\n"
    } else if eq {
        "equivalent\n".to_string()
    } else {
        "inequivalent\n".to_string()
    };
    Ok((out, if eq { 0 } else { 1 }))
}

fn cmd_canon(path: &Path, cli: &Cli) -> Result<(String, i32), FormatError> {
    let g = radial_of(path)?;
    let hex: String = g
        .canonical_form()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let out = if cli.json {
        serde_json::json!({ "canonical": hex }).to_string() + "\n"
    } else {
        hex + "\n"
    };
    Ok((out, 0))
}

fn cmd_gen(path: &Path, tree: Option<usize>, random: Option<u64>) -> Result<(String, i32), FormatError> {
    let Input::Complex(k) = load(path)? else {
        return Err(FormatError::Io("gen needs a .cplx input".into()));
    };
    let field = match (tree, random) {
        (Some(root), None) => spanning_tree_field(&k, VertexId(root))?,
        (None, Some(seed)) => random_field(&k, seed),
        _ => {
            return Err(FormatError::Io(
                "gen needs exactly one of --tree <root> or --random <seed>".into(),
            ))
        }
    };
    Ok((format::serialize_field(&field, None), 0))
}

fn cmd_trace(path: &Path, cli: &Cli) -> Result<(String, i32), FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FormatError::Io(format!("{}: {e}", path.display())))?;
    let parsed = ComplexFile::parse(&text)?;
    let k = parsed.to_traced()?;
    if cli.json {
        return Ok((serde_json::to_string(&k).unwrap() + "\n", 0));
    }
    Ok((format::serialize_complex(&k, parsed.name.as_deref()), 0))
}
