//! Matrix Market exchange format.
//!
//! Reads `coordinate` files with `real`, `integer`, `complex` or `pattern`
//! fields and `general`, `symmetric`, `skew-symmetric` or `hermitian`
//! symmetry. Indices are 1-based on disk. Symmetric storage is expanded on
//! load and duplicate coordinates are summed.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Result, SparseError, SparseMatrix};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MmField {
    Real,
    Integer,
    Complex,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MmSymmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

/// Header facts and entry counts recorded while loading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmMetadata {
    pub field: MmField,
    pub symmetry: MmSymmetry,
    /// Entries listed in the file.
    pub file_entries: usize,
    /// Stored nonzeros after symmetric expansion and duplicate summation.
    pub stored_nnz: usize,
}

#[derive(Debug, Clone)]
pub struct MatrixMarket {
    pub matrix: SparseMatrix,
    pub meta: MmMetadata,
}

pub fn mm_read(path: impl AsRef<Path>) -> Result<MatrixMarket> {
    let f = File::open(path)?;
    read_matrix_market(BufReader::new(f))
}

fn parse_err(line: usize, msg: impl Into<String>) -> SparseError {
    SparseError::Parse { line, msg: msg.into() }
}

struct Header {
    format: String,
    field: MmField,
    symmetry: MmSymmetry,
}

fn parse_header(line: &str, lineno: usize) -> Result<Header> {
    let toks: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(parse_err(lineno, format!("malformed header {line:?}")));
    }
    let field = match toks[3].as_str() {
        "real" | "double" => MmField::Real,
        "integer" => MmField::Integer,
        "complex" => MmField::Complex,
        "pattern" => MmField::Pattern,
        other => return Err(parse_err(lineno, format!("unsupported field {other:?}"))),
    };
    let symmetry = match toks[4].as_str() {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        "skew-symmetric" => MmSymmetry::SkewSymmetric,
        "hermitian" => MmSymmetry::Hermitian,
        other => return Err(parse_err(lineno, format!("unsupported symmetry {other:?}"))),
    };
    Ok(Header { format: toks[2].clone(), field, symmetry })
}

fn parse_num(tok: Option<&str>, lineno: usize) -> Result<f64> {
    let tok = tok.ok_or_else(|| parse_err(lineno, "missing value"))?;
    tok.parse::<f64>().map_err(|_| parse_err(lineno, format!("non-numeric entry {tok:?}")))
}

fn parse_index(tok: Option<&str>, lineno: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(lineno, "missing index"))?;
    tok.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad index {tok:?}")))
}

fn parse_value(it: &mut std::str::SplitWhitespace<'_>, field: MmField, lineno: usize) -> Result<C64> {
    Ok(match field {
        MmField::Pattern => C64::new(1.0, 0.0),
        MmField::Real | MmField::Integer => C64::new(parse_num(it.next(), lineno)?, 0.0),
        MmField::Complex => {
            let re = parse_num(it.next(), lineno)?;
            C64::new(re, parse_num(it.next(), lineno)?)
        }
    })
}

/// Iterator over non-comment, non-blank lines with 1-based line numbers.
fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|s| (i + 1, s)).map_err(SparseError::from))
        .filter(|r| match r {
            Ok((_, s)) => {
                let t = s.trim();
                !t.is_empty() && !t.starts_with('%')
            }
            Err(_) => true,
        })
}

pub fn read_matrix_market<R: BufRead>(mut reader: R) -> Result<MatrixMarket> {
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let header = parse_header(first.trim(), 1)?;
    if header.format != "coordinate" {
        return Err(parse_err(1, format!("expected coordinate format, got {:?}", header.format)));
    }
    let mut lines = data_lines(reader).map(|r| r.map(|(n, s)| (n + 1, s)));
    let (size_line, size) = lines.next().ok_or_else(|| parse_err(2, "missing size line"))??;
    let mut it = size.split_whitespace();
    let nrows = parse_index(it.next(), size_line)?;
    let ncols = parse_index(it.next(), size_line)?;
    let nentries = parse_index(it.next(), size_line)?;
    if header.symmetry != MmSymmetry::General && nrows != ncols {
        return Err(parse_err(size_line, "symmetric storage requires a square matrix"));
    }

    let mut triplets = Vec::with_capacity(2 * nentries);
    let mut seen = 0usize;
    for line in lines {
        let (lineno, text) = line?;
        seen += 1;
        if seen > nentries {
            return Err(parse_err(lineno, format!("more than the declared {nentries} entries")));
        }
        let mut it = text.split_whitespace();
        let i = parse_index(it.next(), lineno)?;
        let j = parse_index(it.next(), lineno)?;
        if i == 0 || j == 0 || i > nrows || j > ncols {
            return Err(parse_err(lineno, format!("index ({i}, {j}) outside {nrows}x{ncols}")));
        }
        let v = parse_value(&mut it, header.field, lineno)?;
        let (r, c) = (i - 1, j - 1);
        triplets.push((r, c, v));
        if r != c {
            match header.symmetry {
                MmSymmetry::General => {}
                MmSymmetry::Symmetric => triplets.push((c, r, v)),
                MmSymmetry::SkewSymmetric => triplets.push((c, r, -v)),
                MmSymmetry::Hermitian => triplets.push((c, r, v.conj())),
            }
        }
    }
    if seen < nentries {
        return Err(parse_err(size_line, format!("declared {nentries} entries, found {seen}")));
    }
    let matrix = SparseMatrix::from_triplets(nrows, ncols, &triplets)?;
    let meta = MmMetadata {
        field: header.field,
        symmetry: header.symmetry,
        file_entries: nentries,
        stored_nnz: matrix.nnz(),
    };
    Ok(MatrixMarket { matrix, meta })
}

/// Read a vector stored either in `array` format or as an `N x 1` coordinate matrix.
pub fn mm_read_vector(path: impl AsRef<Path>) -> Result<Vec<C64>> {
    read_vector(BufReader::new(File::open(path)?))
}

pub fn read_vector<R: BufRead>(mut reader: R) -> Result<Vec<C64>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let header = parse_header(text.lines().next().unwrap_or("").trim(), 1)?;
    if header.format == "coordinate" {
        let mm = read_matrix_market(text.as_bytes())?;
        if mm.matrix.ncols() != 1 {
            return Err(parse_err(2, "vector file must have exactly one column"));
        }
        return Ok((0..mm.matrix.nrows()).map(|i| mm.matrix.get(i, 0)).collect());
    }
    if header.format != "array" {
        return Err(parse_err(1, format!("unsupported format {:?}", header.format)));
    }
    let mut lines = data_lines(text.as_bytes());
    let (size_line, size) = lines.next().ok_or_else(|| parse_err(2, "missing size line"))??;
    let mut it = size.split_whitespace();
    let nrows = parse_index(it.next(), size_line)?;
    let ncols = parse_index(it.next(), size_line)?;
    if ncols != 1 {
        return Err(parse_err(size_line, "vector file must have exactly one column"));
    }
    let mut out = Vec::with_capacity(nrows);
    for line in lines {
        let (lineno, text) = line?;
        if out.len() == nrows {
            return Err(parse_err(lineno, "more values than declared"));
        }
        out.push(parse_value(&mut text.split_whitespace(), header.field, lineno)?);
    }
    if out.len() != nrows {
        return Err(parse_err(size_line, format!("declared {nrows} values, found {}", out.len())));
    }
    Ok(out)
}

/// Write in `coordinate general` form, `real` when every value is real.
pub fn mm_write<W: Write>(a: &SparseMatrix, mut w: W) -> Result<()> {
    let real = a.is_real();
    writeln!(w, "%%MatrixMarket matrix coordinate {} general", if real { "real" } else { "complex" })?;
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&c, v) in cols.iter().zip(vals) {
            if real {
                writeln!(w, "{} {} {:e}", i + 1, c + 1, v.re)?;
            } else {
                writeln!(w, "{} {} {:e} {:e}", i + 1, c + 1, v.re, v.im)?;
            }
        }
    }
    Ok(())
}

/// Write a vector in `array general` form.
pub fn mm_write_vector<W: Write>(v: &[C64], mut w: W) -> Result<()> {
    let real = v.iter().all(|x| x.im == 0.0);
    writeln!(w, "%%MatrixMarket matrix array {} general", if real { "real" } else { "complex" })?;
    writeln!(w, "{} 1", v.len())?;
    for x in v {
        if real {
            writeln!(w, "{:e}", x.re)?;
        } else {
            writeln!(w, "{:e} {:e}", x.re, x.im)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn read(s: &str) -> Result<MatrixMarket> {
        read_matrix_market(Cursor::new(s.to_string()))
    }

    #[test]
    fn symmetric_expansion() {
        let mm = read("%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2\n2 1 3\n2 2 2\n").unwrap();
        let d = mm.matrix.to_dense();
        assert_eq!(d, crate::DenseMatrix::from_real_rows(&[&[2.0, 3.0], &[3.0, 2.0]]));
        assert_eq!(mm.meta.file_entries, 3);
        assert_eq!(mm.meta.stored_nnz, 4);
    }

    #[test]
    fn skew_and_complex() {
        let mm = read("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 1.0\n").unwrap();
        assert_eq!(mm.matrix.get(0, 1), C64::new(-1.0, 0.0));
        assert_eq!(mm.matrix.get(1, 0), C64::new(1.0, 0.0));
        let mm = read("%%MatrixMarket matrix coordinate complex general\n% note\n1 1 1\n1 1 1.5 -2\n").unwrap();
        assert_eq!(mm.matrix.get(0, 0), C64::new(1.5, -2.0));
    }

    #[test]
    fn duplicates_summed_and_rows_sorted() {
        let mm = read("%%MatrixMarket matrix coordinate real general\n2 3 4\n1 3 1\n1 1 1\n1 3 2\n2 2 5\n").unwrap();
        assert_eq!(mm.matrix.row(0).0, &[0, 2]);
        assert_eq!(mm.matrix.get(0, 2), C64::new(3.0, 0.0));
    }

    #[test]
    fn errors_name_the_line() {
        let bad_header = read("%%MatrixMarket tensor coordinate real general\n1 1 1\n1 1 1\n").unwrap_err();
        assert!(matches!(bad_header, SparseError::Parse { line: 1, .. }));
        let out_of_bounds = read("%%MatrixMarket matrix coordinate real general\n% c\n2 2 1\n3 1 1.0\n").unwrap_err();
        assert!(matches!(out_of_bounds, SparseError::Parse { line: 4, .. }), "{out_of_bounds}");
        let non_numeric = read("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 abc\n").unwrap_err();
        assert!(matches!(non_numeric, SparseError::Parse { line: 4, .. }), "{non_numeric}");
        let short = read("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n").unwrap_err();
        assert!(matches!(short, SparseError::Parse { .. }));
    }

    #[test]
    fn write_then_read_is_identity() {
        let mm = read("%%MatrixMarket matrix coordinate complex hermitian\n3 3 3\n1 1 2 0\n3 1 0.1 0.3\n2 2 1e-3 0\n").unwrap();
        let mut buf = Vec::new();
        mm_write(&mm.matrix, &mut buf).unwrap();
        let again = read_matrix_market(Cursor::new(buf)).unwrap();
        assert_eq!(again.matrix.to_dense(), mm.matrix.to_dense());
    }

    #[test]
    fn vectors_in_both_layouts() {
        let v = vec![C64::new(1.0, 0.0), C64::new(-0.25, 0.0)];
        let mut buf = Vec::new();
        mm_write_vector(&v, &mut buf).unwrap();
        assert_eq!(read_vector(Cursor::new(buf)).unwrap(), v);
        let coo = "%%MatrixMarket matrix coordinate real general\n2 1 1\n2 1 4\n";
        assert_eq!(read_vector(Cursor::new(coo.to_string())).unwrap(), vec![C64::new(0.0, 0.0), C64::new(4.0, 0.0)]);
    }
}
