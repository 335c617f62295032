//! Field persistence.
//!
//! Binary layout, all little-endian: `n` as `u64`, `L` as `f64`, a space tag
//! byte (0 physical, 1 frequency), then `n * n` pairs `(re, im)` of `f64` in
//! row-major order. A JSON sidecar `<path>.json` repeats the header.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Field, GridSpec, Space};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub n: usize,
    #[serde(rename = "L")]
    pub period: f64,
    pub space: Space,
    pub layout: String,
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn write_field(path: impl AsRef<Path>, field: &Field) -> Result<()> {
    let path = path.as_ref();
    let grid = field.grid();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&(grid.n() as u64).to_le_bytes())?;
    w.write_all(&grid.period().to_le_bytes())?;
    w.write_all(&[match field.space() {
        Space::Physical => 0u8,
        Space::Frequency => 1u8,
    }])?;
    for v in field.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    let header = FieldHeader {
        n: grid.n(),
        period: grid.period(),
        space: field.space(),
        layout: "u64 n, f64 L, u8 space, row-major (re, im) f64 pairs, little-endian".into(),
    };
    let text = serde_json::to_string_pretty(&header).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(sidecar(path), text)?;
    Ok(())
}

pub fn read_field(path: impl AsRef<Path>) -> Result<Field> {
    let path = path.as_ref();
    let mut r = BufReader::new(File::open(path)?);
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let period = f64::from_le_bytes(b8);
    let mut tag = [0u8; 1];
    r.read_exact(&mut tag)?;
    let space = match tag[0] {
        0 => Space::Physical,
        1 => Space::Frequency,
        t => {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 0,
                column: 16,
                message: format!("unknown space tag {t}"),
            })
        }
    };
    let grid = GridSpec::new(n, period)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        values.push(Complex64::new(re, im));
    }
    Field::from_values(grid, space, values)
}

/// Profile along the `x` axis through the origin: `x,re,im,abs` rows over
/// `[-L/2, L/2)` in physical space.
pub fn profile_csv(field: &Field) -> String {
    let phys = field.in_space(Space::Physical);
    let grid = field.grid();
    let n = grid.n();
    let mut out = String::from("x,re,im,abs\n");
    for i in 0..n {
        let ix = (i + n / 2) % n;
        let v = phys.at(ix, 0);
        out.push_str(&format!("{},{},{},{}\n", grid.coord(ix), v.re, v.im, v.norm()));
    }
    out
}

/// Radial profile: mean of `|f|` over annuli of one cell width about the
/// origin, rows `r,mean_abs,max_abs`.
pub fn radial_profile_csv(field: &Field) -> String {
    let phys = field.in_space(Space::Physical);
    let grid = field.grid();
    let n = grid.n();
    let bins = n / 2;
    let mut sum = vec![0.0; bins];
    let mut max = vec![0.0f64; bins];
    let mut count = vec![0usize; bins];
    for iy in 0..n {
        for ix in 0..n {
            let r = grid.coord(ix).hypot(grid.coord(iy)) / grid.cell();
            let b = r.round() as usize;
            if b < bins {
                let v = phys.at(ix, iy).norm();
                sum[b] += v;
                max[b] = max[b].max(v);
                count[b] += 1;
            }
        }
    }
    let mut out = String::from("r,mean_abs,max_abs\n");
    for b in 0..bins {
        if count[b] > 0 {
            out.push_str(&format!(
                "{},{},{}\n",
                b as f64 * grid.cell(),
                sum[b] / count[b] as f64,
                max[b]
            ));
        }
    }
    out
}
