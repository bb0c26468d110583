//! Plain-text field snapshots.
//!
//! ```text
//! # bec-metrology field v1
//! kind line
//! dimension 1
//! points 512
//! extent 2.29e1
//! spacing 8.94e-2
//! length_unit_m 1.0e-4
//! n_atoms 1.0e3
//! data
//! <re> <im>
//! ...
//! ```
//!
//! Lengths (`extent`, `spacing`) are in units of `length_unit_m`, and so are
//! the amplitudes: multiply by `length_unit_m^{−d/2}` for SI. Rows run over
//! the stored array in order (row-major for planes, the odd extension
//! `u = rψ` for radial grids).

use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;

use super::grid::{Field, Grid, GridKind};
use crate::error::{Error, Result};

const MAGIC: &str = "# bec-metrology field v1";

fn kind_name(k: GridKind) -> &'static str {
    match k {
        GridKind::Line => "line",
        GridKind::Plane => "plane",
        GridKind::Radial => "radial",
    }
}

pub fn write_field<W: Write>(field: &Field, mut w: W) -> Result<()> {
    let g = &field.grid;
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "kind {}", kind_name(g.kind))?;
    writeln!(w, "dimension {}", g.dimension())?;
    writeln!(w, "points {}", g.points)?;
    writeln!(w, "extent {:e}", g.extent)?;
    writeln!(w, "spacing {:e}", g.spacing)?;
    writeln!(w, "length_unit_m {:e}", g.length_unit)?;
    writeln!(w, "n_atoms {:e}", field.n_atoms)?;
    writeln!(w, "data")?;
    for v in &field.values {
        writeln!(w, "{:e} {:e}", v.re, v.im)?;
    }
    Ok(())
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Io(format!("malformed field snapshot: {}", msg.into()))
}

pub fn read_field<R: BufRead>(r: R) -> Result<Field> {
    let mut lines = r.lines();
    let mut next = || -> Result<String> { lines.next().ok_or_else(|| bad("unexpected end"))?.map_err(Error::from) };
    if next()?.trim() != MAGIC {
        return Err(bad("missing header"));
    }
    let mut header = |key: &str| -> Result<String> {
        let line = next()?;
        let (k, v) = line.split_once(' ').ok_or_else(|| bad(format!("expected {key}")))?;
        if k != key {
            return Err(bad(format!("expected {key}, found {k}")));
        }
        Ok(v.trim().to_string())
    };
    let num = |s: String| s.parse::<f64>().map_err(|e| bad(e.to_string()));
    let kind = match header("kind")?.as_str() {
        "line" => GridKind::Line,
        "plane" => GridKind::Plane,
        "radial" => GridKind::Radial,
        other => return Err(bad(format!("unknown kind {other}"))),
    };
    let _dimension = header("dimension")?;
    let points: usize = header("points")?.parse().map_err(|_| bad("points"))?;
    let extent = num(header("extent")?)?;
    let _spacing = header("spacing")?;
    let length_unit = num(header("length_unit_m")?)?;
    let n_atoms = num(header("n_atoms")?)?;
    if next()?.trim() != "data" {
        return Err(bad("expected data"));
    }
    let grid = Grid::new(kind, points, extent, length_unit)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let line = next()?;
        let mut it = line.split_whitespace();
        let re = num(it.next().ok_or_else(|| bad("missing re"))?.to_string())?;
        let im = num(it.next().ok_or_else(|| bad("missing im"))?.to_string())?;
        values.push(C64::new(re, im));
    }
    Ok(Field { grid, values, n_atoms })
}
