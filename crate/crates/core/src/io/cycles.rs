use std::io::{BufRead, Write};

use crate::complex::VertexId;
use crate::error::{Error, Result};

use super::{data_lines, parse_num, write_err};

/// One cycle: its dimension, birth value and simplices as sorted vertex tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    pub dim: u8,
    pub birth: f64,
    pub simplices: Vec<Vec<VertexId>>,
}

/// Lines of `dim birth v0-v1 v1-v2 ...`.
pub fn write_cycles<'a>(records: impl IntoIterator<Item = &'a CycleRecord>, mut w: impl Write) -> Result<()> {
    for rec in records {
        write!(w, "{} {}", rec.dim, rec.birth).map_err(write_err)?;
        for s in &rec.simplices {
            let t: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            write!(w, " {}", t.join("-")).map_err(write_err)?;
        }
        writeln!(w).map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}

pub fn read_cycles(r: impl BufRead) -> Result<Vec<CycleRecord>> {
    let mut out = Vec::new();
    for item in data_lines(r) {
        let (no, line) = item?;
        let mut f = line.split_whitespace();
        let dim: u8 = parse_num(no, f.next().unwrap_or(""), "dimension")?;
        if !(1..=3).contains(&dim) {
            return Err(Error::parse(no, format!("cycle dimension {dim} out of range")));
        }
        let birth: f64 = parse_num(no, f.next().unwrap_or(""), "birth")?;
        if birth.is_nan() {
            return Err(Error::parse(no, "birth is NaN"));
        }
        let mut simplices = Vec::new();
        for tok in f {
            let s: Vec<VertexId> = tok
                .split('-')
                .map(|v| parse_num(no, v, "vertex"))
                .collect::<Result<_>>()?;
            if s.len() != dim as usize + 1 {
                return Err(Error::parse(
                    no,
                    format!("simplex {tok:?} does not have {} vertices", dim + 1),
                ));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(no, format!("simplex {tok:?} is not strictly increasing")));
            }
            simplices.push(s);
        }
        out.push(CycleRecord { dim, birth, simplices });
    }
    Ok(out)
}
