//! Artifact formats.
//!
//! Grid functions use the little-endian `BRGF` layout:
//!
//! | offset | type      | content                                   |
//! |--------|-----------|-------------------------------------------|
//! | 0      | `[u8; 4]` | magic `BRGF`                              |
//! | 4      | `u32`     | format version, currently 1               |
//! | 8      | `u32`     | dimension `n`                             |
//! | 12     | `u32`     | points per axis `N`                       |
//! | 16     | `u32`     | space: 0 physical, 1 frequency            |
//! | 20     | `f64`     | box half width `L`                        |
//! | 28     | `f64` × 2 | `N^n` complex values `(re, im)`, row-major |
//!
//! Curves, profiles and fields are CSV with a header row; reports are JSON.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use brlab_core::kernels::RadialProfile;
use num_complex::Complex64;
use serde::Serialize;

use crate::grid::{Grid, GridFunction, Space};
use crate::operators::MaximalField;
use crate::{LabError, Result};

pub const MAGIC: &[u8; 4] = b"BRGF";
pub const VERSION: u32 = 1;

pub fn write_grid_function(mut w: impl Write, f: &GridFunction) -> Result<()> {
    let grid = f.grid();
    w.write_all(MAGIC)?;
    for word in [VERSION, grid.dim() as u32, grid.points_per_axis() as u32, space_code(f.space())] {
        w.write_all(&word.to_le_bytes())?;
    }
    w.write_all(&grid.half_width().to_le_bytes())?;
    for c in f.values() {
        w.write_all(&c.re.to_le_bytes())?;
        w.write_all(&c.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid_function(mut r: impl Read) -> Result<GridFunction> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(LabError::Format(format!("magic {magic:?} is not BRGF")));
    }
    let mut word = || -> Result<u32> {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    };
    let version = word()?;
    if version != VERSION {
        return Err(LabError::Format(format!("unsupported version {version}")));
    }
    let (dim, points, space) = (word()? as usize, word()? as usize, word()?);
    let space = match space {
        0 => Space::Physical,
        1 => Space::Frequency,
        other => return Err(LabError::Format(format!("unknown space code {other}"))),
    };
    let mut read_f64 = || -> Result<f64> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        Ok(f64::from_le_bytes(b))
    };
    let half_width = read_f64()?;
    let grid = Grid::new(dim, points, half_width)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64()?;
        values.push(Complex64::new(re, read_f64()?));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(LabError::Format("trailing bytes after the last value".into()));
    }
    GridFunction::new(grid, values, space)
}

pub fn save_grid_function(path: impl AsRef<Path>, f: &GridFunction) -> Result<()> {
    write_grid_function(BufWriter::new(File::create(path)?), f)
}

pub fn load_grid_function(path: impl AsRef<Path>) -> Result<GridFunction> {
    read_grid_function(BufReader::new(File::open(path)?))
}

fn space_code(space: Space) -> u32 {
    match space {
        Space::Physical => 0,
        Space::Frequency => 1,
    }
}

/// Two-column CSV of `(x, y)` pairs.
pub fn write_curve_csv(path: impl AsRef<Path>, header: [&str; 2], points: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for (x, y) in points {
        w.write_record([x.to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `r, value, kernel, n, delta, gamma, lambda, p, order`.
pub fn write_profile_csv(path: impl AsRef<Path>, profile: &RadialProfile) -> Result<()> {
    let meta = &profile.meta;
    let spec = &meta.spec;
    let p = spec.p().map(|p| p.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["r", "value", "kernel", "n", "delta", "gamma", "lambda", "p", "order"])?;
    for (r, v) in profile.radii().iter().zip(profile.values()) {
        w.write_record([
            r.to_string(),
            v.to_string(),
            meta.kernel.id().to_string(),
            spec.dim().to_string(),
            spec.delta().to_string(),
            spec.gamma().to_string(),
            spec.lambda().to_string(),
            p.clone(),
            meta.order.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `x1..xn, value`.
pub fn write_field_csv(path: impl AsRef<Path>, field: &MaximalField) -> Result<()> {
    let dim = field.grid.dim();
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=dim).map(|a| format!("x{a}")).collect();
    header.push("value".into());
    w.write_record(&header)?;
    for (i, v) in field.values.iter().enumerate() {
        let x = field.grid.point(i);
        let mut row: Vec<String> = x[..dim].iter().map(|c| c.to_string()).collect();
        row.push(v.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(path: impl AsRef<Path>, value: &impl Serialize) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
