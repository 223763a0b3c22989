//! File formats: PGM greymaps for images and CSV for real-valued grids.

mod csv;
mod pgm;

pub use csv::{format_csv_grid, parse_csv_grid, read_csv_grid, write_csv_grid, CsvGrid};
pub use pgm::{encode_pgm, parse_pgm, read_pgm, write_pgm, RangePolicy};
