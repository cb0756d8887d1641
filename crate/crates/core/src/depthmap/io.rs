//! Plain-text map files.
//!
//! Format `DMAP1`: a header line `DMAP1 <width_cells> <height_cells>
//! <cell_size_m>` followed by `height_cells` lines of `width_cells`
//! space-separated depth values in metres, row y = 0 first, LF line endings.
//! Values are written with shortest round-trip formatting, so a load/save
//! cycle reproduces the file byte for byte.

use super::{DepthGrid, DepthMapError};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

const MAGIC: &str = "DMAP1";

/// Serialises the grid into the `DMAP1` text form.
pub fn format_dmap(grid: &DepthGrid) -> String {
    let (w, h) = (grid.width_cells(), grid.height_cells());
    // Preallocate roughly: ~8 chars per value.
    let mut out = String::with_capacity(w * h * 8 + 64);
    let _ = writeln!(out, "{MAGIC} {w} {h} {}", grid.cell_size());
    for iy in 0..h {
        for ix in 0..w {
            if ix > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", grid.node(ix, iy));
        }
        out.push('\n');
    }
    out
}

pub fn write_dmap(path: &Path, grid: &DepthGrid) -> Result<(), DepthMapError> {
    fs::write(path, format_dmap(grid))?;
    Ok(())
}

/// Parses the `DMAP1` text form.
pub fn parse_dmap(text: &str) -> Result<DepthGrid, DepthMapError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(DepthMapError::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let mut fields = header.split_ascii_whitespace();
    if fields.next() != Some(MAGIC) {
        return Err(DepthMapError::Parse {
            line: 1,
            message: format!("expected `{MAGIC}` header"),
        });
    }
    let parse_usize = |tok: Option<&str>, what: &str| {
        tok.ok_or_else(|| DepthMapError::Parse {
            line: 1,
            message: format!("missing {what}"),
        })?
        .parse::<usize>()
        .map_err(|e| DepthMapError::Parse {
            line: 1,
            message: format!("bad {what}: {e}"),
        })
    };
    let width = parse_usize(fields.next(), "width")?;
    let height = parse_usize(fields.next(), "height")?;
    let cell_size = fields
        .next()
        .ok_or_else(|| DepthMapError::Parse {
            line: 1,
            message: "missing cell size".into(),
        })?
        .parse::<f64>()
        .map_err(|e| DepthMapError::Parse {
            line: 1,
            message: format!("bad cell size: {e}"),
        })?;
    if fields.next().is_some() {
        return Err(DepthMapError::Parse {
            line: 1,
            message: "trailing tokens after header".into(),
        });
    }

    let mut depths = Vec::with_capacity(width.saturating_mul(height));
    let mut rows = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        rows += 1;
        if rows > height {
            return Err(DepthMapError::Parse {
                line: line_no,
                message: format!("more than {height} data rows"),
            });
        }
        let mut count = 0usize;
        for tok in line.split_ascii_whitespace() {
            let value: f64 = tok.parse().map_err(|e| DepthMapError::Parse {
                line: line_no,
                message: format!("bad depth value `{tok}`: {e}"),
            })?;
            if !value.is_finite() {
                return Err(DepthMapError::Parse {
                    line: line_no,
                    message: format!("non-finite depth value `{tok}`"),
                });
            }
            depths.push(value);
            count += 1;
        }
        if count != width {
            return Err(DepthMapError::Parse {
                line: line_no,
                message: format!("expected {width} values per row, got {count}"),
            });
        }
    }
    if rows != height {
        return Err(DepthMapError::Parse {
            line: text.lines().count(),
            message: format!("expected {height} data rows, got {rows}"),
        });
    }
    DepthGrid::new(width, height, cell_size, depths)
}

pub fn read_dmap(path: &Path) -> Result<DepthGrid, DepthMapError> {
    let text = fs::read_to_string(path)?;
    parse_dmap(&text)
}
