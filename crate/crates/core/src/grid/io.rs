//! `.gfn` files: one JSON header line `{"N", "geometry", "L", "n"}` followed
//! by the values as little-endian `f64`.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::function::GridFunction;
use super::spec::{Geometry, GridSpec};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Header {
    #[serde(rename = "N")]
    dim: usize,
    geometry: Geometry,
    #[serde(rename = "L")]
    half_width: f64,
    n: usize,
}

pub fn write_gfn<W: Write>(u: &GridFunction, mut out: W) -> Result<()> {
    let s = u.spec();
    let header = Header { dim: s.dim(), geometry: s.geometry(), half_width: s.half_width(), n: s.points_per_axis() };
    let line = serde_json::to_string(&header).map_err(|e| Error::Format(e.to_string()))?;
    out.write_all(line.as_bytes())?;
    out.write_all(b"\n")?;
    let mut bytes = Vec::with_capacity(8 * u.len());
    for v in u.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&bytes)?;
    out.flush()?;
    Ok(())
}

pub fn read_gfn<R: Read>(input: R) -> Result<GridFunction> {
    let mut reader = BufReader::new(input);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    if !line.ends_with('\n') {
        return Err(Error::Format("missing header line".into()));
    }
    let h: Header = serde_json::from_str(line.trim_end()).map_err(|e| Error::Format(format!("header: {e}")))?;
    let spec = GridSpec::new(h.dim, h.geometry, h.half_width, h.n)?;
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() != 8 * spec.len() {
        return Err(Error::Format(format!("expected {} payload bytes, found {}", 8 * spec.len(), bytes.len())));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    GridFunction::new(spec, values)
}

pub fn save_gfn(u: &GridFunction, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_gfn(u, std::io::BufWriter::new(file))
}

pub fn load_gfn(path: impl AsRef<Path>) -> Result<GridFunction> {
    read_gfn(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let spec = GridSpec::radial(3, 5.0, 32).unwrap();
        let u = GridFunction::from_radial_fn(spec, |r| (-r).exp() - 0.25).unwrap();
        let mut buf = Vec::new();
        write_gfn(&u, &mut buf).unwrap();
        let first = buf.iter().position(|b| *b == b'\n').unwrap();
        let header: serde_json::Value = serde_json::from_slice(&buf[..first]).unwrap();
        assert_eq!(header["N"], 3);
        assert_eq!(header["geometry"], "radial");
        let back = read_gfn(&buf[..]).unwrap();
        assert_eq!(back.values(), u.values());
        assert_eq!(back.spec(), u.spec());
    }

    #[test]
    fn truncated_payload_rejected() {
        let spec = GridSpec::full(1, 1.0, 16).unwrap();
        let mut buf = Vec::new();
        write_gfn(&GridFunction::zeros(spec), &mut buf).unwrap();
        buf.pop();
        assert!(matches!(read_gfn(&buf[..]), Err(Error::Format(_))));
        assert!(matches!(read_gfn(&b"{\"N\":1}"[..]), Err(Error::Format(_))));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.gfn");
        let u = GridFunction::from_radial_fn(GridSpec::full(2, 1.0, 16).unwrap(), |r| r).unwrap();
        save_gfn(&u, &path).unwrap();
        assert_eq!(load_gfn(&path).unwrap(), u);
    }
}
