//! The SFNS1 binary field format.
//!
//! Layout: `b"SFNS"`, `u8` version (1), `u8` dim, `u8` components, `u32` n,
//! `f64` L, then `components · n^dim` samples. All multi-byte values are
//! little-endian.

use std::io::{Read, Write};
use std::path::Path;

use super::{Grid, GridField};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"SFNS";
const VERSION: u8 = 1;

pub fn write_field<W: Write>(mut w: W, field: &GridField) -> Result<()> {
    let grid = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION, grid.dim() as u8, field.components() as u8])?;
    w.write_all(&(grid.n() as u32).to_le_bytes())?;
    w.write_all(&grid.length().to_le_bytes())?;
    let mut buf = Vec::with_capacity(8 * field.data().len());
    for v in field.data() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_field<R: Read>(mut r: R) -> Result<GridField> {
    let mut head = [0u8; 19];
    r.read_exact(&mut head)?;
    if &head[..4] != MAGIC {
        return Err(Error::Format("missing SFNS magic".into()));
    }
    if head[4] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", head[4])));
    }
    let dim = head[5] as usize;
    let comps = head[6] as usize;
    let n = u32::from_le_bytes(head[7..11].try_into().unwrap()) as usize;
    let length = f64::from_le_bytes(head[11..19].try_into().unwrap());
    let grid = Grid::new(dim, n, length)?;
    let count = comps * grid.len();
    let mut raw = vec![0u8; 8 * count];
    r.read_exact(&mut raw)?;
    let data = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    GridField::new(grid, comps, data)
}

pub fn save(path: &Path, field: &GridField) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_field(std::io::BufWriter::new(f), field)
}

pub fn load(path: &Path) -> Result<GridField> {
    let f = std::fs::File::open(path)?;
    read_field(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bytes() {
        let grid = Grid::new(2, 8, 1.5).unwrap();
        let f = GridField::vector_from_fn(grid, |x| [x[0] * 3.0, x[1] - 0.25, 0.0]);
        let mut buf = Vec::new();
        write_field(&mut buf, &f).unwrap();
        assert_eq!(buf.len(), 19 + 8 * 2 * 64);
        assert_eq!(&buf[..4], b"SFNS");
        let back = read_field(buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_magic() {
        let buf = b"XXXX\x01\x02\x01\x08\x00\x00\x00\x00\x00\x00\x00\x00\x00\xf0\x3f";
        assert!(matches!(read_field(&buf[..]), Err(Error::Format(_))));
    }
}
