use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::persistence::{Bar, PersistenceDiagram};

use super::{data_lines, parse_num, write_err};

const HEADER: &str = "dim\tbirth\tdeath";

/// TSV with a `dim birth death` header; essential classes die at `inf`.
pub fn write_diagram(pd: &PersistenceDiagram, mut w: impl Write) -> Result<()> {
    writeln!(w, "{HEADER}").map_err(write_err)?;
    for b in &pd.bars {
        writeln!(w, "{}\t{}\t{}", b.dim, b.birth, b.death).map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}

pub fn read_diagram(r: impl BufRead) -> Result<PersistenceDiagram> {
    let mut bars = Vec::new();
    let mut header = false;
    for item in data_lines(r) {
        let (no, line) = item?;
        if !header {
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols != ["dim", "birth", "death"] {
                return Err(Error::parse(no, format!("expected header {HEADER:?}")));
            }
            header = true;
            continue;
        }
        let f: Vec<&str> = line.split('\t').map(str::trim).collect();
        if f.len() != 3 {
            return Err(Error::parse(no, format!("expected 3 fields, got {}", f.len())));
        }
        let dim: u8 = parse_num(no, f[0], "dimension")?;
        let birth: f64 = parse_num(no, f[1], "birth")?;
        let death: f64 = parse_num(no, f[2], "death")?;
        if !birth.is_finite() || death.is_nan() || death == f64::NEG_INFINITY || death < birth {
            return Err(Error::parse(no, format!("invalid bar ({birth}, {death})")));
        }
        bars.push(Bar { dim, birth, death });
    }
    Ok(PersistenceDiagram::new(bars))
}
