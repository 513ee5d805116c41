//! Plain-text generator matrices.
//!
//! ```text
//! n m
//! b11 b12 ... b1m
//! ...
//! bn1 bn2 ... bnm
//! ```
//!
//! Numbers are whitespace separated. Blank lines and lines starting with
//! `#` are ignored. Export writes 17 significant digits so every `f64`
//! survives a round trip.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::Matrix;

pub fn format_generator(basis: &Matrix) -> String {
    let mut out = format!("{} {}\n", basis.rows(), basis.cols());
    for i in 0..basis.rows() {
        let line: Vec<String> = basis.row(i).iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn parse_generator(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |s: &str| s.parse::<usize>().ok().filter(|&d| d > 0);
    let (n, m) = match dims.as_slice() {
        [a, b] => match (parse_dim(a), parse_dim(b)) {
            (Some(n), Some(m)) => (n, m),
            _ => return Err(Error::Parse { line: hline, msg: format!("bad header `{header}`") }),
        },
        _ => return Err(Error::Parse { line: hline, msg: "header must be `n m`".into() }),
    };
    let mut data = Vec::with_capacity(n * m);
    let mut last = hline;
    for _ in 0..n {
        let (line, text) = lines
            .next()
            .ok_or(Error::Parse { line: last + 1, msg: format!("expected {n} rows") })?;
        last = line;
        let row: Vec<f64> = text
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or(Error::Parse { line, msg: format!("bad number `{t}`") })
            })
            .collect::<Result<_>>()?;
        if row.len() != m {
            return Err(Error::Parse { line, msg: format!("expected {m} numbers, found {}", row.len()) });
        }
        data.extend(row);
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, msg: "unexpected trailing data".into() });
    }
    Matrix::from_vec(n, m, data)
}

pub fn read_lattice(path: &Path) -> Result<Lattice> {
    let text = std::fs::read_to_string(path)?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("imported").to_string();
    Lattice::with_label(parse_generator(&text)?, label)
}

pub fn write_lattice(path: &Path, lattice: &Lattice) -> Result<()> {
    std::fs::write(path, format_generator(lattice.basis()))?;
    Ok(())
}
