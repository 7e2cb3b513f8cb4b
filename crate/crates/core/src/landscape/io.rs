//! `.lsc` binary landscape files and plain CSV grids.
//!
//! Layout of an `.lsc` file:
//!
//! ```text
//! b"OSCAR\0" | u32 version | u64 header length | JSON header | f64 values
//! ```
//!
//! Integers and floats are little-endian; values are column-major.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GridDim, GridSpec, Landscape, LandscapeMeta};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 6] = b"OSCAR\0";
pub const FORMAT_VERSION: u32 = 1;

/// Refuse to allocate for absurd header lengths in corrupt files.
const MAX_HEADER_LEN: u64 = 64 << 20;

#[derive(Serialize, Deserialize)]
struct Header {
    version: u32,
    count: usize,
    spec: GridSpec,
    meta: LandscapeMeta,
}

pub fn write_lsc<W: Write>(landscape: &Landscape, mut out: W) -> Result<()> {
    let header = serde_json::to_vec(&Header {
        version: FORMAT_VERSION,
        count: landscape.len(),
        spec: landscape.spec().clone(),
        meta: landscape.meta.clone(),
    })?;
    let mut buf = Vec::with_capacity(18 + header.len() + 8 * landscape.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(header.len() as u64).to_le_bytes());
    buf.extend_from_slice(&header);
    for v in landscape.values() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)
        .map_err(|e| Error::Format(format!("write failed: {e}")))
}

pub fn read_lsc<R: Read>(mut input: R) -> Result<Landscape> {
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|e| Error::Format(format!("read failed: {e}")))?;
    decode(&bytes)
}

fn take<'a>(bytes: &mut &'a [u8], n: usize, what: &str) -> Result<&'a [u8]> {
    if bytes.len() < n {
        return Err(Error::Format(format!("truncated file while reading {what}")));
    }
    let (head, rest) = bytes.split_at(n);
    *bytes = rest;
    Ok(head)
}

fn decode(mut bytes: &[u8]) -> Result<Landscape> {
    let magic = take(&mut bytes, MAGIC.len(), "magic")?;
    if magic != MAGIC {
        return Err(Error::Format("not a landscape file (bad magic bytes)".into()));
    }
    let version = u32::from_le_bytes(take(&mut bytes, 4, "version")?.try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::Version {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let header_len = u64::from_le_bytes(take(&mut bytes, 8, "header length")?.try_into().unwrap());
    if header_len > MAX_HEADER_LEN {
        return Err(Error::Format(format!("header length {header_len} is implausible")));
    }
    let header: Header = serde_json::from_slice(take(&mut bytes, header_len as usize, "header")?)
        .map_err(|e| Error::Format(format!("bad header: {e}")))?;
    if header.version != version {
        return Err(Error::Format("header version disagrees with file version".into()));
    }
    if header.count != header.spec.len() {
        return Err(Error::Format(format!(
            "header declares {} values for a {}-point grid",
            header.count,
            header.spec.len()
        )));
    }
    let expected = header.count * 8;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "value block has {} bytes, expected {expected}",
            bytes.len()
        )));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Format(format!("non-finite value at index {i}")));
    }
    Landscape::new(header.spec, values, header.meta)
}

pub fn save(landscape: &Landscape, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_lsc(landscape, std::io::BufWriter::new(file))
}

pub fn load(path: impl AsRef<Path>) -> Result<Landscape> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

/// Reads a 2-D grid from CSV: one row per point of the first dimension,
/// one column per point of the second. A non-numeric first line is
/// treated as a header and skipped.
pub fn import_csv(path: impl AsRef<Path>, row_dim: (&str, f64, f64), col_dim: (&str, f64, f64)) -> Result<Landscape> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if line == 0 => continue,
            Err(e) => {
                return Err(Error::Format(format!("{}: line {}: {e}", path.display(), line + 1)));
            }
        }
    }
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n_cols) {
        return Err(Error::Format("CSV rows have unequal lengths".into()));
    }
    let spec = GridSpec::new(vec![
        GridDim::new(row_dim.0, row_dim.1, row_dim.2, n_rows),
        GridDim::new(col_dim.0, col_dim.1, col_dim.2, n_cols),
    ])?;
    let mut values = vec![0.0; n_rows * n_cols];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            values[i + n_rows * j] = *v;
        }
    }
    let meta = LandscapeMeta {
        source: Some(format!("csv:{}", path.display())),
        ..Default::default()
    };
    Landscape::new(spec, values, meta)
}

/// Writes a 2-D landscape as CSV, rows along the first dimension.
pub fn export_csv(landscape: &Landscape, path: impl AsRef<Path>) -> Result<()> {
    let shape = landscape.shape();
    if shape.len() != 2 {
        return Err(Error::invalid("CSV export needs a 2-D landscape"));
    }
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    for i in 0..shape[0] {
        let row: Vec<String> = (0..shape[1]).map(|j| landscape.at(&[i, j]).to_string()).collect();
        writer.write_record(&row)?;
    }
    writer.flush().map_err(|e| Error::io(path.as_ref(), e))?;
    Ok(())
}
