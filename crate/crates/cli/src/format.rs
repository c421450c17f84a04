//! Line-oriented text formats for complexes (`.cplx`) and fields (`.fld`).
//!
//! The grammar is documented in `docs/formats.md`. Parse failures carry a
//! line and column; validation failures wrap the library error, which
//! names the offending cell.

use std::fmt;
use std::path::Path;

use linefield::complex::{
    BoundaryWalk, CellComplex, ComplexError, Dart, Direction, EdgeId, RotationSystem, VertexId,
};
use linefield::field::{FieldError, LineField};

#[derive(Debug)]
pub enum FormatError {
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Complex(ComplexError),
    Field(FieldError),
    Io(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Parse {
                line,
                column,
                message,
            } => write!(f, "parse error at line {line}, column {column}: {message}"),
            FormatError::Complex(e) => write!(f, "validation error: {e}"),
            FormatError::Field(e) => write!(f, "validation error: {e}"),
            FormatError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<ComplexError> for FormatError {
    fn from(e: ComplexError) -> Self {
        FormatError::Complex(e)
    }
}

impl From<FieldError> for FormatError {
    fn from(e: FieldError) -> Self {
        FormatError::Field(e)
    }
}

impl FormatError {
    /// Exit code class: 2 for parse errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            FormatError::Parse { .. } => 2,
            _ => 1,
        }
    }
}

struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn tokenize(line: &str, line_no: usize) -> Vec<Tok<'_>> {
    let mut toks = Vec::new();
    let mut col = 0;
    for part in line.split_inclusive(char::is_whitespace) {
        let trimmed = part.trim_end_matches(char::is_whitespace);
        if !trimmed.is_empty() {
            if trimmed.starts_with('#') {
                break;
            }
            toks.push(Tok {
                text: trimmed,
                line: line_no,
                col: col + 1,
            });
        }
        col += part.chars().count();
    }
    toks
}

fn err(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_usize(tok: &Tok) -> Result<usize, FormatError> {
    tok.text
        .parse()
        .map_err(|_| err(tok.line, tok.col, format!("expected a number, got `{}`", tok.text)))
}

/// Signed 1-based edge reference: `k` is edge `k-1` forward (or end 0),
/// `-k` backward (or end 1).
fn parse_signed_edge(tok: &Tok) -> Result<(usize, bool), FormatError> {
    let raw: i64 = tok.text.parse().map_err(|_| {
        err(
            tok.line,
            tok.col,
            format!("expected a signed edge index, got `{}`", tok.text),
        )
    })?;
    if raw == 0 {
        return Err(err(tok.line, tok.col, "edge indexes are 1-based; 0 is invalid"));
    }
    Ok(((raw.unsigned_abs() as usize) - 1, raw < 0))
}

/// Raw contents of a `.cplx` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexFile {
    pub name: Option<String>,
    pub num_vertices: Option<usize>,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<Vec<(usize, Direction)>>,
    /// `(vertex, [(edge, end)])` lines of the optional rotation block.
    pub rotation: Vec<(usize, Vec<(usize, usize)>)>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        let mut body = lines.iter().map(|&(n, l)| (n, l));
        expect_header(&mut body, "cplx")?;
        Self::parse_body(body.collect::<Vec<_>>().into_iter())
    }

    /// Parses directives after the header; also used for inline blocks in
    /// `.fld` files.
    fn parse_body<'a>(
        lines: impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<Self, FormatError> {
        let mut file = ComplexFile {
            name: None,
            num_vertices: None,
            edges: Vec::new(),
            faces: Vec::new(),
            rotation: Vec::new(),
        };
        for (line_no, line) in lines {
            let toks = tokenize(line, line_no);
            let Some(head) = toks.first() else { continue };
            match head.text {
                "name" => {
                    let tok = toks
                        .get(1)
                        .ok_or_else(|| err(head.line, head.col, "name needs a value"))?;
                    file.name = Some(tok.text.to_string());
                }
                "vertices" => {
                    let tok = toks
                        .get(1)
                        .ok_or_else(|| err(head.line, head.col, "vertices needs a count"))?;
                    file.num_vertices = Some(parse_usize(tok)?);
                }
                "e" => {
                    let u = toks
                        .get(1)
                        .ok_or_else(|| err(head.line, head.col, "e needs two endpoints"))?;
                    let v = toks
                        .get(2)
                        .ok_or_else(|| err(head.line, head.col, "e needs two endpoints"))?;
                    file.edges.push((parse_usize(u)?, parse_usize(v)?));
                }
                "f" => {
                    if toks.len() < 2 {
                        return Err(err(head.line, head.col, "face walk must be nonempty"));
                    }
                    let mut walk = Vec::new();
                    for tok in &toks[1..] {
                        let (e, rev) = parse_signed_edge(tok)?;
                        walk.push((
                            e,
                            if rev {
                                Direction::Backward
                            } else {
                                Direction::Forward
                            },
                        ));
                    }
                    file.faces.push(walk);
                }
                "r" => {
                    if toks.len() < 2 {
                        return Err(err(head.line, head.col, "rotation line needs a vertex"));
                    }
                    let v = parse_usize(&toks[1])?;
                    let mut ends = Vec::new();
                    for tok in &toks[2..] {
                        let (e, second_end) = parse_signed_edge(tok)?;
                        ends.push((e, usize::from(second_end)));
                    }
                    file.rotation.push((v, ends));
                }
                other => {
                    return Err(err(
                        head.line,
                        head.col,
                        format!("unknown directive `{other}`"),
                    ))
                }
            }
        }
        Ok(file)
    }

    fn vertex_count(&self) -> Result<usize, FormatError> {
        self.num_vertices
            .ok_or_else(|| err(1, 1, "missing `vertices` directive"))
    }

    fn edge_list(&self) -> Result<Vec<(VertexId, VertexId)>, FormatError> {
        Ok(self
            .edges
            .iter()
            .map(|&(u, v)| (VertexId(u), VertexId(v)))
            .collect())
    }

    /// Builds and validates the complex from the face walks. When a
    /// rotation block is present it must agree with the derived rotation.
    pub fn to_complex(&self) -> Result<CellComplex, FormatError> {
        let n = self.vertex_count()?;
        let walks = self
            .faces
            .iter()
            .map(|w| BoundaryWalk::new(w.iter().map(|&(e, d)| (EdgeId(e), d)).collect()))
            .collect();
        let k = CellComplex::build(n, self.edge_list()?, walks)?;
        if !self.rotation.is_empty() {
            let given = self.rotation_system(n, k.num_edges())?;
            let derived = k.rotation();
            for v in k.vertices() {
                if !cyclic_eq(given.cycle_at(v), derived.cycle_at(v))
                    && !cyclic_eq_rev(given.cycle_at(v), derived.cycle_at(v))
                {
                    return Err(FormatError::Complex(ComplexError::PinchedVertex(v)));
                }
            }
        }
        Ok(k)
    }

    fn rotation_system(&self, n: usize, num_edges: usize) -> Result<RotationSystem, FormatError> {
        let mut at: Vec<Vec<Dart>> = vec![Vec::new(); n];
        for (v, ends) in &self.rotation {
            if *v >= n {
                return Err(err(1, 1, format!("rotation vertex {v} out of range")));
            }
            at[*v] = ends
                .iter()
                .map(|&(e, end)| {
                    if e >= num_edges {
                        Err(err(1, 1, format!("rotation edge {e} out of range")))
                    } else {
                        Ok(Dart::new(
                            EdgeId(e),
                            if end == 0 {
                                Direction::Forward
                            } else {
                                Direction::Backward
                            },
                        ))
                    }
                })
                .collect::<Result<_, _>>()?;
        }
        Ok(RotationSystem::new(at))
    }

    /// Traces the faces induced by the rotation block.
    pub fn to_traced(&self) -> Result<CellComplex, FormatError> {
        let n = self.vertex_count()?;
        if self.rotation.is_empty() {
            return Err(err(1, 1, "tracing needs a rotation block"));
        }
        let rot = self.rotation_system(n, self.edges.len())?;
        Ok(CellComplex::from_rotation(n, self.edge_list()?, &rot)?)
    }
}

fn cyclic_eq(a: &[Dart], b: &[Dart]) -> bool {
    a.len() == b.len()
        && (a.is_empty()
            || (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i])))
}

fn cyclic_eq_rev(a: &[Dart], b: &[Dart]) -> bool {
    let rev: Vec<Dart> = a.iter().rev().copied().collect();
    cyclic_eq(&rev, b)
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    kind: &str,
) -> Result<(), FormatError> {
    for (line_no, line) in lines {
        let toks = tokenize(line, line_no);
        if toks.is_empty() {
            continue;
        }
        if toks[0].text != kind {
            return Err(err(
                toks[0].line,
                toks[0].col,
                format!("expected `{kind} 1` header, got `{}`", toks[0].text),
            ));
        }
        match toks.get(1) {
            Some(t) if t.text == "1" => return Ok(()),
            Some(t) => {
                return Err(err(t.line, t.col, format!("unsupported version `{}`", t.text)))
            }
            None => return Err(err(toks[0].line, toks[0].col, "missing format version")),
        }
    }
    Err(err(1, 1, format!("empty file: expected `{kind} 1` header")))
}

/// Raw contents of a `.fld` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldFile {
    pub name: Option<String>,
    pub complex: ComplexRef,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexRef {
    Path(String),
    Inline(ComplexFile),
}

impl FieldFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let all: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        let mut iter = all.iter().copied();
        expect_header(&mut iter, "fld")?;
        let rest: Vec<(usize, &str)> = iter.collect();

        let mut name = None;
        let mut complex: Option<ComplexRef> = None;
        let mut pairs = Vec::new();
        let mut i = 0;
        while i < rest.len() {
            let (line_no, line) = rest[i];
            i += 1;
            let toks = tokenize(line, line_no);
            let Some(head) = toks.first() else { continue };
            match head.text {
                "name" => {
                    let tok = toks
                        .get(1)
                        .ok_or_else(|| err(head.line, head.col, "name needs a value"))?;
                    name = Some(tok.text.to_string());
                }
                "complex" => {
                    let tok = toks
                        .get(1)
                        .ok_or_else(|| err(head.line, head.col, "complex needs a path"))?;
                    complex = Some(ComplexRef::Path(tok.text.to_string()));
                }
                "begin" if toks.get(1).map(|t| t.text) == Some("complex") => {
                    let mut block = Vec::new();
                    let mut closed = false;
                    while i < rest.len() {
                        let (n, l) = rest[i];
                        i += 1;
                        let t = tokenize(l, n);
                        if t.first().map(|t| t.text) == Some("end") {
                            closed = true;
                            break;
                        }
                        block.push((n, l));
                    }
                    if !closed {
                        return Err(err(head.line, head.col, "unterminated `begin complex` block"));
                    }
                    complex = Some(ComplexRef::Inline(ComplexFile::parse_body(
                        block.into_iter(),
                    )?));
                }
                "m" => {
                    let v = toks
                        .get(1)
                        .ok_or_else(|| err(head.line, head.col, "m needs vertex and edge"))?;
                    let e = toks
                        .get(2)
                        .ok_or_else(|| err(head.line, head.col, "m needs vertex and edge"))?;
                    pairs.push((parse_usize(v)?, parse_usize(e)?));
                }
                other => {
                    return Err(err(
                        head.line,
                        head.col,
                        format!("unknown directive `{other}`"),
                    ))
                }
            }
        }
        let complex = complex.ok_or_else(|| err(1, 1, "field file names no complex"))?;
        Ok(FieldFile {
            name,
            complex,
            pairs,
        })
    }

    /// Resolves the complex (loading a referenced file relative to
    /// `base_dir`) and validates the field.
    pub fn to_field(&self, base_dir: Option<&Path>) -> Result<LineField, FormatError> {
        let k = match &self.complex {
            ComplexRef::Inline(c) => c.to_complex()?,
            ComplexRef::Path(p) => {
                let path = match base_dir {
                    Some(dir) => dir.join(p),
                    None => Path::new(p).to_path_buf(),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| FormatError::Io(format!("{}: {e}", path.display())))?;
                ComplexFile::parse(&text)?.to_complex()?
            }
        };
        let pairs = self
            .pairs
            .iter()
            .map(|&(v, e)| (VertexId(v), EdgeId(e)))
            .collect();
        Ok(LineField::new(k, pairs)?)
    }
}

/// Serializes a complex; `parse` of the result reproduces it field for
/// field.
pub fn serialize_complex(k: &CellComplex, name: Option<&str>) -> String {
    let mut out = String::from("cplx 1\n");
    if let Some(n) = name {
        out.push_str(&format!("name {n}\n"));
    }
    out.push_str(&format!("vertices {}\n", k.num_vertices()));
    for e in k.edge_ids() {
        let (u, v) = k.edge_endpoints(e);
        out.push_str(&format!("e {} {}\n", u.0, v.0));
    }
    for f in k.face_ids() {
        out.push('f');
        for (e, d) in k.face_walk(f).traversals() {
            let signed = match d {
                Direction::Forward => (e.0 + 1) as i64,
                Direction::Backward => -((e.0 + 1) as i64),
            };
            out.push_str(&format!(" {signed}"));
        }
        out.push('\n');
    }
    out
}

/// Serializes a field with its complex inline.
pub fn serialize_field(field: &LineField, name: Option<&str>) -> String {
    let mut out = String::from("fld 1\n");
    if let Some(n) = name {
        out.push_str(&format!("name {n}\n"));
    }
    out.push_str("begin complex\n");
    let complex = serialize_complex(field.complex(), None);
    let body = complex.strip_prefix("cplx 1\n").unwrap_or(&complex);
    out.push_str(body);
    out.push_str("end complex\n");
    for p in field.pairs() {
        out.push_str(&format!("m {} {}\n", p.vertex.0, p.edge.0));
    }
    out
}
