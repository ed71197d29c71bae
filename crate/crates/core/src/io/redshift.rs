use std::io::BufRead;

use crate::error::{Error, Result};
use crate::geometry::Embedding;

use super::{data_lines, parse_num};

/// Hubble constant in km/s/Mpc.
pub const H0_DEFAULT: f64 = 72.1;

#[derive(Debug, Clone, PartialEq)]
pub struct RedshiftRow {
    /// Recession velocity in km/s.
    pub cz: f64,
    /// Galactic latitude in radians.
    pub b: f64,
    /// Galactic longitude in radians.
    pub l: f64,
    pub class: String,
}

#[derive(Debug, Clone, Default)]
pub struct RedshiftCatalog {
    pub rows: Vec<RedshiftRow>,
    /// Rows dropped for a non-positive or non-finite velocity or angle.
    pub rejected: usize,
}

/// Reads `cz b l [class]` rows.
pub fn read_redshift(r: impl BufRead) -> Result<RedshiftCatalog> {
    let mut cat = RedshiftCatalog::default();
    for item in data_lines(r) {
        let (no, line) = item?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 3 || f.len() > 4 {
            return Err(Error::parse(no, format!("expected 3 or 4 fields, got {}", f.len())));
        }
        let row = RedshiftRow {
            cz: parse_num(no, f[0], "cz")?,
            b: parse_num(no, f[1], "latitude")?,
            l: parse_num(no, f[2], "longitude")?,
            class: f.get(3).unwrap_or(&"").to_string(),
        };
        if row.cz > 0.0 && row.cz.is_finite() && row.b.is_finite() && row.l.is_finite() {
            cat.rows.push(row);
        } else {
            cat.rejected += 1;
        }
    }
    Ok(cat)
}

/// Cartesian positions in Mpc from Hubble distances `cz / h0`, with polar
/// angle `pi/2 - b` and azimuth `l`.
pub fn embed_redshift(rows: &[RedshiftRow], h0: f64) -> Result<Embedding> {
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::InvalidInput(format!("Hubble constant {h0} must be positive")));
    }
    let coords = rows
        .iter()
        .map(|row| {
            let rho = row.cz / h0;
            let theta = row.l;
            let phi = std::f64::consts::FRAC_PI_2 - row.b;
            [
                rho * phi.sin() * theta.cos(),
                rho * phi.sin() * theta.sin(),
                rho * phi.cos(),
            ]
        })
        .collect();
    Embedding::from_points3(coords)
}
