//! Text formats: edge lists, contact triples, redshift catalogs, point
//! clouds, cycle files, cover tables and diagrams. Files ending in `.gz`
//! are read and written through gzip.

mod contact;
mod covers;
mod cycles;
mod diagram;
mod edges;
mod genome;
mod points;
mod redshift;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{Error, Result};

pub use contact::{read_contacts, ContactLoad};
pub use covers::{read_covers, write_covers, CoverRecord};
pub use cycles::{read_cycles, write_cycles, CycleRecord};
pub use diagram::{read_diagram, write_diagram};
pub use edges::{read_edge_list, write_edge_list};
pub use genome::{classify_cis_trans, read_bin_map, BinMap, CycleKind, TransCounts};
pub use points::{read_points, write_points};
pub use redshift::{embed_redshift, read_redshift, RedshiftCatalog, RedshiftRow, H0_DEFAULT};

fn is_gz(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

/// Buffered reader over a file, gunzipped when the name ends in `.gz`.
pub fn open_input(path: impl AsRef<Path>) -> Result<Box<dyn BufRead>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(if is_gz(path) {
        Box::new(BufReader::new(MultiGzDecoder::new(file)))
    } else {
        Box::new(BufReader::new(file))
    })
}

/// Buffered writer to a file, gzipped when the name ends in `.gz`. Call
/// `flush` before dropping to see write errors.
pub fn create_output(path: impl AsRef<Path>) -> Result<Box<dyn Write>> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(if is_gz(path) {
        Box::new(GzEncoder::new(BufWriter::new(file), Compression::default()))
    } else {
        Box::new(BufWriter::new(file))
    })
}

/// Numbered lines (1-based) with surrounding whitespace trimmed; blank lines
/// and `#` comments are skipped.
pub(crate) fn data_lines(r: impl BufRead) -> impl Iterator<Item = Result<(usize, String)>> {
    r.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(Error::parse(i + 1, e.to_string()))),
        Ok(l) => {
            let t = l.trim();
            (!t.is_empty() && !t.starts_with('#')).then(|| Ok((i + 1, t.to_string())))
        }
    })
}

pub(crate) fn parse_num<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {field:?}")))
}

pub(crate) fn write_err(e: std::io::Error) -> Error {
    Error::io("<output>", e)
}
