use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use crate::export::write_atomic;
use crate::linalg::C64;

use super::{LatticeError, SpinorField, Trajectory};

const MAGIC: &str = "qca-field v1";

/// CSV with columns `t, x1..xd, norm, overlap, p_error, wrapped`; the
/// overlap columns are empty when no target was evolved.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let d = traj.rows.first().map(|r| r.centroid.len()).unwrap_or(0);
    let mut out = String::from("t");
    for j in 1..=d {
        let _ = write!(out, ",x{j}");
    }
    out.push_str(",norm,overlap,p_error,wrapped\n");
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.15e}")).unwrap_or_default();
    for r in &traj.rows {
        let _ = write!(out, "{}", r.t);
        for x in &r.centroid {
            let _ = write!(out, ",{x:.15e}");
        }
        let _ = writeln!(
            out,
            ",{:.15e},{},{},{}",
            r.norm,
            opt(r.overlap),
            opt(r.p_error),
            u8::from(r.wrapped)
        );
    }
    out
}

/// Writes a field as a text header followed by little-endian `f64` pairs
/// `(re, im)` in storage order:
///
/// ```text
/// qca-field v1
/// shape 8 8
/// s 2
/// endian little
///
/// ```
pub fn write_snapshot(path: &Path, field: &SpinorField) -> Result<(), LatticeError> {
    let shape: Vec<String> = field.shape.iter().map(|l| l.to_string()).collect();
    let mut bytes = format!(
        "{MAGIC}\nshape {}\ns {}\nendian little\n\n",
        shape.join(" "),
        field.s
    )
    .into_bytes();
    bytes.reserve(field.data.len() * 16);
    for z in &field.data {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    write_atomic(path, &bytes)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<SpinorField, LatticeError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let end = bytes
        .windows(2)
        .position(|w| w == b"\n\n")
        .ok_or_else(|| LatticeError::Format("missing header terminator".into()))?;
    let header = std::str::from_utf8(&bytes[..end])
        .map_err(|_| LatticeError::Format("header is not UTF-8".into()))?;
    let mut lines = header.lines();
    if lines.next() != Some(MAGIC) {
        return Err(LatticeError::Format("bad magic line".into()));
    }
    let (mut shape, mut s, mut endian) = (None, None, None);
    for line in lines {
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or("");
        let rest: Vec<&str> = parts.collect();
        let bad = |_| LatticeError::Format(format!("bad header line `{line}`"));
        match key {
            "shape" => {
                shape = Some(
                    rest.iter()
                        .map(|x| x.parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(bad)?,
                )
            }
            "s" => s = Some(rest.first().copied().unwrap_or("").parse::<usize>().map_err(bad)?),
            "endian" => endian = rest.first().map(|e| e.to_string()),
            _ => return Err(LatticeError::Format(format!("unknown header key `{key}`"))),
        }
    }
    let (Some(shape), Some(s)) = (shape, s) else {
        return Err(LatticeError::Format("header lacks shape or s".into()));
    };
    if endian.as_deref() != Some("little") {
        return Err(LatticeError::Format("only little-endian data is supported".into()));
    }
    let payload = &bytes[end + 2..];
    let count = shape.iter().product::<usize>() * s;
    if payload.len() != count * 16 {
        return Err(LatticeError::Format(format!(
            "expected {} data bytes, found {}",
            count * 16,
            payload.len()
        )));
    }
    let f = |b: &[u8]| f64::from_le_bytes(b.try_into().expect("8 bytes"));
    let data = payload
        .chunks_exact(16)
        .map(|c| C64::new(f(&c[..8]), f(&c[8..])))
        .collect();
    Ok(SpinorField { shape, s, data })
}
