//! ASCII OFF reading and writing.
//!
//! Accepted headers are `OFF` (three coordinates per vertex) and `nOFF`
//! followed by a line holding the coordinate dimension. A comment line
//! `# ambient unit_sphere` or `# ambient euclidean` selects the ambient tag;
//! an explicit hint passed by the caller takes precedence.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::mesh::{Ambient, TriangleMesh};
use crate::error::{Error, Result};

/// Caller-side ambient override for OFF input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientHint {
    Euclidean,
    UnitSphere,
}

struct Lines<R> {
    inner: std::io::Lines<BufReader<R>>,
    line: usize,
    ambient: Option<AmbientHint>,
}

impl<R: Read> Lines<R> {
    /// Next non-empty, non-comment line, split into tokens.
    fn next_tokens(&mut self) -> Result<Option<Vec<String>>> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            let trimmed = l.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                let words: Vec<&str> = comment.split_whitespace().collect();
                if words.first() == Some(&"ambient") {
                    self.ambient = match words.get(1) {
                        Some(&"unit_sphere") => Some(AmbientHint::UnitSphere),
                        Some(&"euclidean") => Some(AmbientHint::Euclidean),
                        other => {
                            return Err(Error::Parse {
                                line: self.line,
                                msg: format!("unknown ambient tag {other:?}"),
                            })
                        }
                    };
                }
                continue;
            }
            let body = trimmed.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            return Ok(Some(body.split_whitespace().map(str::to_owned).collect()));
        }
        Ok(None)
    }

    fn expect_tokens(&mut self, what: &str) -> Result<Vec<String>> {
        self.next_tokens()?.ok_or_else(|| Error::Parse {
            line: self.line + 1,
            msg: format!("unexpected end of file, expected {what}"),
        })
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, msg: msg.into() }
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::Parse { line, msg: format!("invalid {what} `{tok}`") })
}

/// Parses an OFF stream.
pub fn read_off<R: Read>(reader: R, hint: Option<AmbientHint>) -> Result<TriangleMesh> {
    let mut lines = Lines { inner: BufReader::new(reader).lines(), line: 0, ambient: None };
    let header = lines.expect_tokens("OFF header")?;
    let mut rest: &[String] = &header[1..];
    let dim = match header[0].as_str() {
        "OFF" => 3,
        "nOFF" => {
            let tokens;
            let d = if rest.is_empty() {
                tokens = lines.expect_tokens("dimension")?;
                rest = &[];
                parse_num::<usize>(&tokens[0], lines.line, "dimension")?
            } else {
                let d = parse_num::<usize>(&rest[0], lines.line, "dimension")?;
                rest = &rest[1..];
                d
            };
            if d < 2 {
                return Err(lines.err(format!("dimension must be at least 2, got {d}")));
            }
            d
        }
        other => return Err(lines.err(format!("expected `OFF` or `nOFF` header, found `{other}`"))),
    };
    let counts = if rest.is_empty() { lines.expect_tokens("vertex/face counts")? } else { rest.to_vec() };
    if counts.len() < 2 {
        return Err(lines.err("expected `<vertices> <faces> [<edges>]`"));
    }
    let nv: usize = parse_num(&counts[0], lines.line, "vertex count")?;
    let nf: usize = parse_num(&counts[1], lines.line, "face count")?;

    let mut coords = Vec::with_capacity(nv * dim);
    for _ in 0..nv {
        let t = lines.expect_tokens("vertex")?;
        if t.len() != dim {
            return Err(lines.err(format!("expected {dim} coordinates, found {}", t.len())));
        }
        for tok in &t {
            let x: f64 = parse_num(tok, lines.line, "coordinate")?;
            if !x.is_finite() {
                return Err(lines.err("non-finite coordinate"));
            }
            coords.push(x);
        }
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let t = lines.expect_tokens("face")?;
        let k: usize = parse_num(&t[0], lines.line, "face size")?;
        if k != 3 {
            return Err(lines.err(format!("only triangles are supported, found a {k}-gon")));
        }
        if t.len() < 4 {
            return Err(lines.err("face line is missing vertex indices"));
        }
        let mut f = [0usize; 3];
        for j in 0..3 {
            f[j] = parse_num(&t[1 + j], lines.line, "vertex index")?;
            if f[j] >= nv {
                return Err(lines.err(format!("vertex index {} out of range (0..{nv})", f[j])));
            }
        }
        faces.push(f);
    }
    let ambient = match hint.or(lines.ambient).unwrap_or(AmbientHint::Euclidean) {
        AmbientHint::Euclidean => Ambient::Euclidean(dim),
        AmbientHint::UnitSphere => Ambient::UnitSphere(dim - 1),
    };
    TriangleMesh::new(coords, faces, ambient)
}

pub fn load_mesh(path: impl AsRef<Path>, hint: Option<AmbientHint>) -> Result<TriangleMesh> {
    read_off(fs::File::open(path)?, hint)
}

/// Writes the mesh as OFF; coordinates use shortest round-trip formatting.
pub fn write_off<W: Write>(mesh: &TriangleMesh, mut w: W) -> Result<()> {
    let d = mesh.dim();
    let tag = match mesh.ambient() {
        Ambient::Euclidean(_) => "euclidean",
        Ambient::UnitSphere(_) => "unit_sphere",
        Ambient::Abstract => return Err(Error::NoAmbientCoordinates),
    };
    if d == 3 {
        writeln!(w, "OFF")?;
    } else {
        writeln!(w, "nOFF")?;
        writeln!(w, "{d}")?;
    }
    writeln!(w, "# ambient {tag}")?;
    writeln!(w, "{} {} {}", mesh.n_vertices(), mesh.n_faces(), mesh.n_edges())?;
    for i in 0..mesh.n_vertices() {
        let p: Vec<String> = mesh.vertex(i).iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", p.join(" "))?;
    }
    for f in mesh.faces() {
        writeln!(w, "3 {} {} {}", f[0], f[1], f[2])?;
    }
    Ok(())
}

pub fn save_mesh(mesh: &TriangleMesh, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_off(mesh, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}
