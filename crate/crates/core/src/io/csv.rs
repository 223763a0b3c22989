//! Plain-text grids: a `# width,height[,h,extent]` header followed by one
//! comma-separated line per row.
//!
//! Values are written in Rust's shortest round-trip form, so reading a file
//! back reproduces every `f64` bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::clt::DensityGrid;
use crate::error::{Error, Result};
use crate::grid::ScalarGrid;
use crate::kernel::KernelGrid;

/// A grid with optional sample spacing and half-extent metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvGrid {
    pub grid: ScalarGrid,
    pub h: Option<f64>,
    pub extent: Option<f64>,
}

impl From<ScalarGrid> for CsvGrid {
    fn from(grid: ScalarGrid) -> Self {
        CsvGrid {
            grid,
            h: None,
            extent: None,
        }
    }
}

impl From<&KernelGrid> for CsvGrid {
    fn from(k: &KernelGrid) -> Self {
        CsvGrid {
            grid: k.grid.clone(),
            h: Some(k.h),
            extent: Some(k.extent()),
        }
    }
}

/// Writes the normalized layer; `h` is the cell width.
impl From<&DensityGrid> for CsvGrid {
    fn from(d: &DensityGrid) -> Self {
        CsvGrid {
            grid: ScalarGrid::from_raw(d.bins, d.bins, d.normalized.clone()),
            h: Some(d.cell_width()),
            extent: Some(d.extent),
        }
    }
}

fn push_value(out: &mut String, v: f64) {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        write!(out, "{v}").unwrap();
    } else {
        write!(out, "{v:e}").unwrap();
    }
}

pub fn format_csv_grid(g: &CsvGrid) -> String {
    let (w, h) = g.grid.dims();
    let mut out = format!("# {w},{h}");
    if let (Some(spacing), Some(extent)) = (g.h, g.extent) {
        out.push(',');
        push_value(&mut out, spacing);
        out.push(',');
        push_value(&mut out, extent);
    }
    out.push('\n');
    for row in g.grid.as_slice().chunks(w) {
        for (i, &v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            push_value(&mut out, v);
        }
        out.push('\n');
    }
    out
}

pub fn write_csv_grid(g: &CsvGrid, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_csv_grid(g))?;
    Ok(())
}

pub fn read_csv_grid(path: impl AsRef<Path>) -> Result<CsvGrid> {
    parse_csv_grid(&fs::read_to_string(path)?)
}

fn csv_error<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Csv {
        line,
        message: message.into(),
    })
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .or_else(|_| csv_error(line, format!("invalid {what} {:?}", s.trim())))
}

pub fn parse_csv_grid(text: &str) -> Result<CsvGrid> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let Some((_, header)) = lines.next() else {
        return csv_error(1, "empty file");
    };
    let Some(fields) = header.trim().strip_prefix('#') else {
        return csv_error(1, "missing '# width,height' header");
    };
    let fields: Vec<&str> = fields.split(',').collect();
    if fields.len() != 2 && fields.len() != 4 {
        return csv_error(
            1,
            format!("header has {} fields, expected 2 or 4", fields.len()),
        );
    }
    let width: usize = parse_field(fields[0], 1, "width")?;
    let height: usize = parse_field(fields[1], 1, "height")?;
    if width == 0 || height == 0 {
        return csv_error(1, format!("zero dimension {width}x{height}"));
    }
    let (h, extent) = if fields.len() == 4 {
        (
            Some(parse_field::<f64>(fields[2], 1, "spacing")?),
            Some(parse_field::<f64>(fields[3], 1, "extent")?),
        )
    } else {
        (None, None)
    };

    let mut data = Vec::new();
    let mut rows = 0;
    let mut last_line = 1;
    for (n, line) in lines {
        last_line = n;
        if line.trim().is_empty() {
            continue;
        }
        if rows == height {
            return csv_error(n, format!("more than {height} rows"));
        }
        let before = data.len();
        for field in line.split(',') {
            let v: f64 = parse_field(field, n, "value")?;
            if !v.is_finite() {
                return csv_error(n, format!("non-finite value {v}"));
            }
            data.push(v);
        }
        if data.len() - before != width {
            return csv_error(
                n,
                format!("row has {} values, expected {width}", data.len() - before),
            );
        }
        rows += 1;
    }
    if rows != height {
        return csv_error(last_line, format!("found {rows} rows, expected {height}"));
    }
    Ok(CsvGrid {
        grid: ScalarGrid::new(width, height, data)?,
        h,
        extent,
    })
}
