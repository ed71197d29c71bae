use std::io::{BufRead, Write};

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::geometry::BoundingBox;

use super::{data_lines, parse_num, write_err};

const HEADER: &str = "id\tlo_x\tlo_y\tlo_z\thi_x\thi_y\thi_z\tmembers\tn_sig";

/// A cover as stored on disk: the box and its counts, without member ids.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverRecord {
    pub id: usize,
    pub bbox: BoundingBox,
    pub members: usize,
    pub n_sig: usize,
}

impl From<&Cover> for CoverRecord {
    fn from(c: &Cover) -> Self {
        CoverRecord {
            id: c.id,
            bbox: c.bbox,
            members: c.len(),
            n_sig: c.n_sig,
        }
    }
}

pub fn write_covers<'a>(covers: impl IntoIterator<Item = &'a CoverRecord>, mut w: impl Write) -> Result<()> {
    writeln!(w, "{HEADER}").map_err(write_err)?;
    for c in covers {
        let (lo, hi) = (c.bbox.lo, c.bbox.hi);
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            c.id, lo[0], lo[1], lo[2], hi[0], hi[1], hi[2], c.members, c.n_sig
        )
        .map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}

pub fn read_covers(r: impl BufRead) -> Result<Vec<CoverRecord>> {
    let mut out = Vec::new();
    let mut header = false;
    for item in data_lines(r) {
        let (no, line) = item?;
        let f: Vec<&str> = line.split('\t').map(str::trim).collect();
        if !header {
            if f.join("\t") != HEADER {
                return Err(Error::parse(no, format!("expected header {HEADER:?}")));
            }
            header = true;
            continue;
        }
        if f.len() != 9 {
            return Err(Error::parse(no, format!("expected 9 fields, got {}", f.len())));
        }
        let mut coord = [0.0f64; 6];
        for (k, c) in coord.iter_mut().enumerate() {
            *c = parse_num(no, f[1 + k], "coordinate")?;
            if !c.is_finite() {
                return Err(Error::parse(no, "non-finite coordinate"));
            }
        }
        let bbox = BoundingBox {
            lo: [coord[0], coord[1], coord[2]],
            hi: [coord[3], coord[4], coord[5]],
        };
        if (0..3).any(|k| bbox.lo[k] > bbox.hi[k]) {
            return Err(Error::parse(no, "box corner lo exceeds hi"));
        }
        out.push(CoverRecord {
            id: parse_num(no, f[0], "id")?,
            bbox,
            members: parse_num(no, f[7], "member count")?,
            n_sig: parse_num(no, f[8], "significant count")?,
        });
    }
    Ok(out)
}
