use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::Embedding;

use super::{data_lines, write_err};

/// Reads `x,y[,z]` rows (commas or whitespace). A first line that does not
/// parse as numbers is taken as a column header.
pub fn read_points(r: impl BufRead) -> Result<Embedding> {
    let mut coords = Vec::new();
    let mut width = None;
    for item in data_lines(r) {
        let (no, line) = item?;
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let vals = match parsed {
            Ok(v) => v,
            Err(_) if width.is_none() && coords.is_empty() => {
                width = Some(0);
                continue;
            }
            Err(_) => return Err(Error::parse(no, "non-numeric coordinate")),
        };
        if vals.len() != 2 && vals.len() != 3 {
            return Err(Error::parse(
                no,
                format!("expected 2 or 3 coordinates, got {}", vals.len()),
            ));
        }
        match width {
            Some(w) if w != 0 && w != vals.len() => {
                return Err(Error::parse(
                    no,
                    format!("expected {w} coordinates, got {}", vals.len()),
                ));
            }
            _ => width = Some(vals.len()),
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::parse(no, "non-finite coordinate"));
        }
        coords.push([vals[0], vals[1], vals.get(2).copied().unwrap_or(0.0)]);
    }
    Embedding::new(width.filter(|&w| w != 0).unwrap_or(3), coords)
}

pub fn write_points(e: &Embedding, mut w: impl Write) -> Result<()> {
    for p in e.coords() {
        if e.dim() == 2 {
            writeln!(w, "{},{}", p[0], p[1]).map_err(write_err)?;
        } else {
            writeln!(w, "{},{},{}", p[0], p[1], p[2]).map_err(write_err)?;
        }
    }
    w.flush().map_err(write_err)
}
