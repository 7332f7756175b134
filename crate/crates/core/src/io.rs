//! Form files.
//!
//! ```text
//! # comments run to the end of a line
//! GF 2            field spec: `GF p`, `GF p^k c0,...,ck` or `F2T`
//! 4               dimension d
//! 0,1,0,0         d rows of Q, each either all d entries
//! 0,0,0           or only the d - i entries from the diagonal on
//! 0,1
//! 0
//! ```
//!
//! Entries are integers over `GF p`, coefficient tuples `a0:a1:...` over
//! `GF p^k`, and binary coefficient strings (constant term first) with an
//! optional `/denominator` over `F2T`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, GaloisField, RationalFunctionField};
use crate::forms::{gaps, GapReport, QuadraticForm};

/// A parsed form whose field is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyForm {
    Finite(QuadraticForm<GaloisField>),
    RationalFunction(QuadraticForm<RationalFunctionField>),
}

impl AnyForm {
    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyForm::Finite(f) => FieldSpec::Galois(f.field().clone()),
            AnyForm::RationalFunction(f) => FieldSpec::RationalFunction(f.field().clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyForm::Finite(f) => f.dim(),
            AnyForm::RationalFunction(f) => f.dim(),
        }
    }

    pub fn gaps(&self) -> Result<GapReport> {
        match self {
            AnyForm::Finite(f) => gaps(f),
            AnyForm::RationalFunction(f) => gaps(f),
        }
    }

    /// `[K:K^2]` of the field, in characteristic two.
    pub fn square_class_degree(&self) -> Result<usize> {
        self.field_spec().square_class_degree()
    }

    pub fn to_file_text(&self) -> String {
        match self {
            AnyForm::Finite(f) => format_form(f),
            AnyForm::RationalFunction(f) => format_form(f),
        }
    }
}

impl fmt::Display for AnyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyForm::Finite(q) => write!(f, "{q}"),
            AnyForm::RationalFunction(q) => write!(f, "{q}"),
        }
    }
}

/// Canonical file text: field, dimension, then the upper-triangular rows
/// from the diagonal on.
pub fn format_form<F: Field>(form: &QuadraticForm<F>) -> String {
    let f = form.field();
    let mut out = format!("{f}\n{}\n", form.dim());
    for (i, row) in form.coeffs().iter().enumerate() {
        let cells: Vec<String> = row[i..].iter().map(|x| f.format_elem(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_form(text: &str) -> Result<AnyForm> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let (field_line, spec) = lines.first().ok_or_else(|| Error::parse(1, "empty form file"))?;
    let field: FieldSpec = spec
        .parse()
        .map_err(|e: Error| Error::parse(*field_line, e.to_string()))?;
    let (dim_line, dim) = lines
        .get(1)
        .ok_or_else(|| Error::parse(field_line + 1, "missing dimension"))?;
    let d: usize = dim
        .parse()
        .ok()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::parse(*dim_line, format!("dimension must be a positive integer, got {dim:?}")))?;
    let rows = &lines[2..];
    if rows.len() != d {
        let line = rows.get(d).map_or(dim_line + 1, |r| r.0);
        return Err(Error::parse(line, format!("expected {d} coefficient rows, found {}", rows.len())));
    }
    Ok(match field {
        FieldSpec::Galois(f) => AnyForm::Finite(parse_rows(&f, d, rows)?),
        FieldSpec::RationalFunction(f) => AnyForm::RationalFunction(parse_rows(&f, d, rows)?),
    })
}

fn parse_rows<F: Field>(field: &F, d: usize, rows: &[(usize, &str)]) -> Result<QuadraticForm<F>> {
    let mut coeffs = Vec::with_capacity(d);
    for (i, &(line, text)) in rows.iter().enumerate() {
        let cells: Vec<F::Elem> = text
            .split(',')
            .map(|c| field.parse_elem(c.trim()).map_err(|e| Error::parse(line, e)))
            .collect::<Result<_>>()?;
        let row = if cells.len() == d {
            if let Some(j) = (0..i).find(|&j| !field.is_zero(&cells[j])) {
                return Err(Error::parse(line, format!("entry ({i},{j}) lies below the diagonal and must be 0")));
            }
            cells
        } else if cells.len() == d - i {
            let mut row = vec![field.zero(); i];
            row.extend(cells);
            row
        } else {
            return Err(Error::parse(
                line,
                format!("row {i} needs {d} or {} entries, found {}", d - i, cells.len()),
            ));
        };
        coeffs.push(row);
    }
    QuadraticForm::new(field, coeffs)
}
