//! Board geometry: cell addressing and the lines through each cell.
//!
//! Cells are addressed as `(row, pos)` where `row` counts from the top (row `a`
//! holds `a` cells) and `pos` counts from the right-hand edge. Every row, column
//! and standard diagonal is identified by its length, so a cell lies on row `i`,
//! column `j` and diagonal `k` with
//!
//! ```text
//! (i, j, k) = (row, n - pos + 1, n - row + pos),    i + j + k = 2n + 1.
//! ```
//!
//! The map is a bijection between cells and the triples `1 <= i, j, k <= n`
//! summing to `2n + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side length of the triangle, in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u32")]
pub struct TriangleSize(u32);

impl TriangleSize {
    pub fn new(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain(format!("triangle size must be >= 1, got {n}")));
        }
        u32::try_from(n)
            .map(Self)
            .map_err(|_| Error::Domain(format!("triangle size {n} too large")))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn num_cells(self) -> usize {
        let n = self.0 as usize;
        n * (n + 1) / 2
    }

    /// Whether `cell` lies on this board.
    pub fn contains(self, cell: Cell) -> bool {
        1 <= cell.pos && cell.pos <= cell.row && cell.row <= self.0
    }

    fn check_cell(self, cell: Cell) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(Error::Domain(format!("cell {cell} is not on the board of size {}", self.0)))
        }
    }

    fn check_index(self, family: LineFamily, index: u32) -> Result<()> {
        if 1 <= index && index <= self.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{family} index {index} out of range 1..={}",
                self.0
            )))
        }
    }
}

impl TryFrom<i64> for TriangleSize {
    type Error = Error;
    fn try_from(n: i64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<TriangleSize> for u32 {
    fn from(size: TriangleSize) -> u32 {
        size.0
    }
}

impl fmt::Display for TriangleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One square of the board. Ordered row-major, then by `pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, u32)", into = "(u32, u32)")]
pub struct Cell {
    pub row: u32,
    pub pos: u32,
}

impl Cell {
    pub const fn new(row: u32, pos: u32) -> Self {
        Self { row, pos }
    }
}

impl From<(u32, u32)> for Cell {
    fn from((row, pos): (u32, u32)) -> Self {
        Self { row, pos }
    }
}

impl From<Cell> for (u32, u32) {
    fn from(cell: Cell) -> Self {
        (cell.row, cell.pos)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.pos)
    }
}

/// Lengths of the row, column and diagonal through a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineIndices {
    pub row_len: u32,
    pub col_len: u32,
    pub diag_len: u32,
}

impl LineIndices {
    pub fn get(self, family: LineFamily) -> u32 {
        match family {
            LineFamily::Row => self.row_len,
            LineFamily::Column => self.col_len,
            LineFamily::Diagonal => self.diag_len,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineFamily {
    Row,
    Column,
    Diagonal,
}

impl LineFamily {
    pub const ALL: [LineFamily; 3] = [LineFamily::Row, LineFamily::Column, LineFamily::Diagonal];

    /// Single-letter prefix used for LP names: `r`, `c`, `d`.
    pub fn prefix(self) -> char {
        match self {
            LineFamily::Row => 'r',
            LineFamily::Column => 'c',
            LineFamily::Diagonal => 'd',
        }
    }
}

impl fmt::Display for LineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineFamily::Row => "row",
            LineFamily::Column => "column",
            LineFamily::Diagonal => "diagonal",
        })
    }
}

/// Every cell of the board, row-major with `pos` ascending.
pub fn all_cells(size: TriangleSize) -> Vec<Cell> {
    let n = size.get();
    (1..=n)
        .flat_map(|row| (1..=row).map(move |pos| Cell::new(row, pos)))
        .collect()
}

pub fn line_indices(cell: Cell, size: TriangleSize) -> Result<LineIndices> {
    size.check_cell(cell)?;
    Ok(line_indices_unchecked(cell, size))
}

/// [`line_indices`] for a cell already known to be on the board.
pub(crate) fn line_indices_unchecked(cell: Cell, size: TriangleSize) -> LineIndices {
    let n = size.get();
    LineIndices {
        row_len: cell.row,
        col_len: n - cell.pos + 1,
        diag_len: n - cell.row + cell.pos,
    }
}

/// Inverse of [`line_indices`]: the unique cell on row `i` and column `j`,
/// provided diagonal `k` completes the triple.
pub fn cell_at(indices: LineIndices, size: TriangleSize) -> Result<Cell> {
    let n = size.get();
    let LineIndices { row_len: i, col_len: j, diag_len: k } = indices;
    for (family, idx) in LineFamily::ALL.into_iter().zip([i, j, k]) {
        size.check_index(family, idx)?;
    }
    if u64::from(i) + u64::from(j) + u64::from(k) != 2 * u64::from(n) + 1 {
        return Err(Error::Domain(format!(
            "line indices ({i}, {j}, {k}) do not sum to 2n+1 = {}",
            2 * n + 1
        )));
    }
    Ok(Cell::new(i, n - j + 1))
}

pub fn cells_of_row(i: u32, size: TriangleSize) -> Result<Vec<Cell>> {
    size.check_index(LineFamily::Row, i)?;
    Ok((1..=i).map(|pos| Cell::new(i, pos)).collect())
}

pub fn cells_of_col(j: u32, size: TriangleSize) -> Result<Vec<Cell>> {
    size.check_index(LineFamily::Column, j)?;
    let n = size.get();
    let pos = n - j + 1;
    Ok((pos..=n).map(|row| Cell::new(row, pos)).collect())
}

pub fn cells_of_diag(k: u32, size: TriangleSize) -> Result<Vec<Cell>> {
    size.check_index(LineFamily::Diagonal, k)?;
    let n = size.get();
    // row - pos is constant along a diagonal.
    let offset = n - k;
    Ok((offset + 1..=n).map(|row| Cell::new(row, row - offset)).collect())
}

pub fn cells_of_line(family: LineFamily, index: u32, size: TriangleSize) -> Result<Vec<Cell>> {
    match family {
        LineFamily::Row => cells_of_row(index, size),
        LineFamily::Column => cells_of_col(index, size),
        LineFamily::Diagonal => cells_of_diag(index, size),
    }
}
