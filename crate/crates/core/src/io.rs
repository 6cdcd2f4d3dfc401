//! Algebra files: JSON with a field fragment and sparse structure constants.
//!
//! ```json
//! {"field":{"p":3,"m":1,"modulus":[0,1]},"dim":3,"name":"sl2",
//!  "brackets":[[0,1,[[1],[0],[0]]],[0,2,[[0],[1],[0]]],[1,2,[[0],[0],[1]]]]}
//! ```
//!
//! Each bracket entry `[i, j, coords]` has `i < j`; `coords[k]` is the
//! coordinate of `b_k` as a length-`m` residue list. Serialization is
//! canonical: pairs in ascending order, zero brackets omitted, no whitespace.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Fe, Field, FieldError};
use crate::liealg::{LieAlgebra, LieError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed algebra file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid field: {0}")]
    Field(#[from] FieldError),
    #[error("bracket ({i}, {j}) has {got} coordinates, expected {expected}")]
    Coordinates { i: usize, j: usize, expected: usize, got: usize },
    #[error("bracket ({i}, {j}) coordinate {k}: {source}")]
    Element { i: usize, j: usize, k: usize, source: FieldError },
    #[error("invalid algebra: {0}")]
    Lie(#[from] LieError),
    #[error("{0}")]
    Read(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn of(f: &Field) -> FieldSpec {
        FieldSpec { p: f.p(), m: f.m(), modulus: f.modulus().to_vec() }
    }

    pub fn to_field(&self) -> Result<Field, FieldError> {
        Field::new(self.p, self.m, Some(&self.modulus))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    field: FieldSpec,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    brackets: Vec<(usize, usize, Vec<Vec<u32>>)>,
}

/// Canonical one-line serialization, without a trailing newline.
pub fn to_json(l: &LieAlgebra) -> String {
    let f = l.field();
    let file = AlgebraFile {
        field: FieldSpec::of(f),
        dim: l.dim(),
        name: l.name().map(str::to_owned),
        brackets: l
            .nonzero_brackets()
            .into_iter()
            .map(|(i, j, v)| (i, j, v.iter().map(|&a| f.coeffs(a)).collect()))
            .collect(),
    };
    serde_json::to_string(&file).expect("algebra files always serialize")
}

/// Parses and validates an algebra file; Jacobi failures name the triple.
pub fn from_json(text: &str) -> Result<LieAlgebra, IoError> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    let f = file.field.to_field()?;
    let n = file.dim;
    let mut brackets = Vec::with_capacity(file.brackets.len());
    for (i, j, coords) in file.brackets {
        if coords.len() != n {
            return Err(IoError::Coordinates { i, j, expected: n, got: coords.len() });
        }
        let v = coords
            .iter()
            .enumerate()
            .map(|(k, c)| parse_coeffs(&f, c).map_err(|source| IoError::Element { i, j, k, source }))
            .collect::<Result<Vec<Fe>, _>>()?;
        brackets.push((i, j, v));
    }
    let l = LieAlgebra::new(&f, n, &brackets)?;
    Ok(match file.name {
        Some(name) => l.with_name(name),
        None => l,
    })
}

fn parse_coeffs(f: &Field, c: &[u32]) -> Result<Fe, FieldError> {
    if c.len() != f.m() as usize {
        return Err(FieldError::Parse(format!("{c:?} has {} residues, expected {}", c.len(), f.m())));
    }
    f.from_coeffs(c)
}

/// Reads an algebra from a path, or from stdin when the path is `-`.
pub fn read_algebra(path: &str) -> Result<LieAlgebra, IoError> {
    let text = if path == "-" { std::io::read_to_string(std::io::stdin())? } else { std::fs::read_to_string(path)? };
    from_json(&text)
}
