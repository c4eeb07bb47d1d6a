//! Line-oriented text format for modal fields.
//!
//! ```text
//! SIACFIELD v1 nx ny k xmin xmax ymin ymax
//! <(k+1)^2 coefficients of element (0,0), x-mode fastest>
//! <element (1,0)>
//! ...
//! ```
//!
//! Elements are written row-major with `j` outer; values carry 17 significant
//! digits so a round trip is bit-exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::field::ModalField2D;
use super::mesh::{Domain, UniformMesh2D};
use super::DgError;

const MAGIC: &str = "SIACFIELD";
const VERSION: &str = "v1";

pub fn write_field<W: Write>(field: &ModalField2D, mut out: W) -> Result<(), DgError> {
    let mesh = field.mesh();
    let d = mesh.domain();
    writeln!(
        out,
        "{MAGIC} {VERSION} {} {} {} {:.16e} {:.16e} {:.16e} {:.16e}",
        mesh.nx(),
        mesh.ny(),
        field.degree(),
        d.xmin,
        d.xmax,
        d.ymin,
        d.ymax
    )?;
    let mut line = String::new();
    for elem in field.coeffs().chunks(field.modes_per_element()) {
        line.clear();
        for (idx, c) in elem.iter().enumerate() {
            if idx > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{c:.16e}"));
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_field<R: BufRead>(input: R) -> Result<ModalField2D, DgError> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or(DgError::UnexpectedEof { line: 1 })?;
    let header = header?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 9 || tokens[0] != MAGIC || tokens[1] != VERSION {
        return Err(DgError::Parse {
            line: 1,
            message: format!("expected `{MAGIC} {VERSION} nx ny k xmin xmax ymin ymax`, found `{header}`"),
        });
    }
    let int = |idx: usize, name: &str| -> Result<usize, DgError> {
        tokens[idx].parse().map_err(|_| DgError::Parse {
            line: 1,
            message: format!("invalid {name} `{}`", tokens[idx]),
        })
    };
    let real = |idx: usize| -> Result<f64, DgError> {
        let v: f64 = tokens[idx].parse().map_err(|_| DgError::Parse {
            line: 1,
            message: format!("invalid bound `{}`", tokens[idx]),
        })?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DgError::NonFinite("header line 1".into()))
        }
    };
    let (nx, ny, degree) = (int(2, "nx")?, int(3, "ny")?, int(4, "k")?);
    let domain = Domain::new(real(5)?, real(6)?, real(7)?, real(8)?);
    let mesh = UniformMesh2D::new(nx, ny, domain).map_err(|e| DgError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if degree > super::basis::MAX_DEGREE {
        return Err(DgError::InvalidDegree(degree));
    }
    let m = (degree + 1) * (degree + 1);
    let mut coeffs = Vec::with_capacity(mesh.num_elements() * m);
    for e in 0..mesh.num_elements() {
        let line_no = e + 2;
        let (_, text) = lines.next().ok_or(DgError::UnexpectedEof { line: line_no })?;
        let text = text?;
        let before = coeffs.len();
        for tok in text.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| DgError::Parse {
                line: line_no,
                message: format!("invalid coefficient `{tok}`"),
            })?;
            if !v.is_finite() {
                return Err(DgError::NonFinite(format!("line {line_no}")));
            }
            coeffs.push(v);
        }
        let count = coeffs.len() - before;
        if count != m {
            return Err(DgError::Parse {
                line: line_no,
                message: format!("expected {m} coefficients, found {count}"),
            });
        }
    }
    for (idx, rest) in lines {
        if !rest?.trim().is_empty() {
            return Err(DgError::Parse {
                line: idx + 1,
                message: "trailing data after last element".into(),
            });
        }
    }
    ModalField2D::new(mesh, degree, coeffs)
}

pub fn save_field(field: &ModalField2D, path: impl AsRef<Path>) -> Result<(), DgError> {
    let file = File::create(path)?;
    write_field(field, BufWriter::new(file))
}

pub fn load_field(path: impl AsRef<Path>) -> Result<ModalField2D, DgError> {
    let file = File::open(path)?;
    read_field(BufReader::new(file))
}
