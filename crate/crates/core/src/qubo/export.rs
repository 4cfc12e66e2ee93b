//! Plain-text sparse QUBO exchange format.
//!
//! ```text
//! n nnz
//! i j value      (one line per nonzero, i ≤ j)
//! ```
//!
//! Off-diagonal values are doubled so that reading the file as an upper
//! triangle, `Σ_{i≤j} value·z_i·z_j`, reproduces `z⊤Qz`.

use std::fmt::Write as _;
use std::io::{self, BufRead};

use ndarray::Array2;

use super::instance::QuboInstance;
use crate::error::{Error, Result};

pub fn write_sparse(q: &QuboInstance) -> String {
    let m = q.matrix();
    let n = q.n();
    let mut lines = Vec::new();
    for i in 0..n {
        for j in i..n {
            let v = if i == j { m[[i, i]] } else { m[[i, j]] + m[[j, i]] };
            if v != 0.0 {
                lines.push((i, j, v));
            }
        }
    }
    let mut out = format!("{n} {}\n", lines.len());
    for (i, j, v) in lines {
        writeln!(out, "{i} {j} {v:?}").expect("writing to a String");
    }
    out
}

/// Parses [`write_sparse`] output back into a symmetric matrix.
pub fn read_sparse<R: BufRead>(reader: R) -> Result<QuboInstance> {
    let mut lines = reader.lines().enumerate();
    let io_err = |e: io::Error| Error::input(format!("read error: {e}"));
    let (n, nnz) = match lines.next() {
        Some((_, line)) => {
            let line = line.map_err(io_err)?;
            let mut it = line.split_whitespace();
            let n = parse_field::<usize>(it.next(), 1, "n")?;
            let nnz = parse_field::<usize>(it.next(), 1, "nnz")?;
            (n, nnz)
        }
        None => return Err(Error::input("empty QUBO file")),
    };
    let mut m = Array2::zeros((n, n));
    let mut seen = 0;
    for (idx, line) in lines {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let row = idx + 1;
        let mut it = line.split_whitespace();
        let i = parse_field::<usize>(it.next(), row, "i")?;
        let j = parse_field::<usize>(it.next(), row, "j")?;
        let v = parse_field::<f64>(it.next(), row, "value")?;
        if i > j || j >= n {
            return Err(Error::input(format!("line {row}: entry ({i}, {j}) outside the upper triangle of {n}x{n}")));
        }
        if i == j {
            m[[i, i]] += v;
        } else {
            m[[i, j]] += v / 2.0;
            m[[j, i]] += v / 2.0;
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(Error::input(format!("header declares {nnz} entries, found {seen}")));
    }
    QuboInstance::new(m)
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, name: &str) -> Result<T> {
    field
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::input(format!("line {line}: missing or malformed {name}")))
}
