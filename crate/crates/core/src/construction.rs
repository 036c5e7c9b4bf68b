//! Explicit maximum placements and a placement validator.
//!
//! For `n = 3t+1` the placement is two chains of dots, each step moving one row
//! up and two cells to the right (`(row, pos) -> (row-1, pos-2)`):
//!
//! - chain 1 starts at the leftmost cell of row `2t+1` and has `t+1` dots;
//! - chain 2 starts at the `(t+2)`nd cell from the left of the bottom row and
//!   has `t` dots.
//!
//! Size `3t+2` reuses the `3t+1` dots unchanged (an extra empty bottom row), and
//! size `3t` drops the single bottom-row dot of the `3t+1` placement.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::closed_forms::ResidueParam;
use crate::error::{Error, Result};
use crate::geometry::{line_indices_unchecked, Cell, LineFamily, TriangleSize};

/// A set of dots on a board. Every dot is on the board; line conflicts are
/// allowed here and reported by [`validate_placement`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlacementRepr", into = "PlacementRepr")]
pub struct Placement {
    size: TriangleSize,
    dots: BTreeSet<Cell>,
}

#[derive(Serialize, Deserialize)]
struct PlacementRepr {
    n: TriangleSize,
    dots: Vec<Cell>,
}

impl TryFrom<PlacementRepr> for Placement {
    type Error = Error;
    fn try_from(repr: PlacementRepr) -> Result<Self> {
        Placement::new(repr.n, repr.dots)
    }
}

impl From<Placement> for PlacementRepr {
    fn from(p: Placement) -> Self {
        PlacementRepr { n: p.size, dots: p.dots.into_iter().collect() }
    }
}

impl Placement {
    pub fn new(size: TriangleSize, dots: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let dots: BTreeSet<Cell> = dots.into_iter().collect();
        if let Some(bad) = dots.iter().find(|c| !size.contains(**c)) {
            return Err(Error::Domain(format!("dot {bad} is not on the board of size {size}")));
        }
        Ok(Self { size, dots })
    }

    pub fn empty(size: TriangleSize) -> Self {
        Self { size, dots: BTreeSet::new() }
    }

    pub fn size(&self) -> TriangleSize {
        self.size
    }

    pub fn dots(&self) -> &BTreeSet<Cell> {
        &self.dots
    }

    pub fn len(&self) -> usize {
        self.dots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dots.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.dots.contains(&cell)
    }

    /// `{"n": .., "dots": [[row, pos], ..]}` with dots in lexicographic order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("placement serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Domain(format!("bad placement JSON: {e}")))
    }
}

/// A line holding more than one dot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineViolation {
    pub family: LineFamily,
    pub index: u32,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PlacementReport {
    pub violations: Vec<LineViolation>,
}

impl PlacementReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every row, column and diagonal that holds two or more dots, ordered by
/// family then index.
pub fn validate_placement(p: &Placement) -> PlacementReport {
    let mut by_line: BTreeMap<(LineFamily, u32), Vec<Cell>> = BTreeMap::new();
    for &cell in &p.dots {
        let idx = line_indices_unchecked(cell, p.size);
        for family in LineFamily::ALL {
            by_line.entry((family, idx.get(family))).or_default().push(cell);
        }
    }
    let violations = by_line
        .into_iter()
        .filter(|(_, cells)| cells.len() > 1)
        .map(|((family, index), cells)| LineViolation { family, index, cells })
        .collect();
    PlacementReport { violations }
}

/// Dots of the canonical placement for `n = 3t+1`.
fn chains(t: u32) -> Vec<Cell> {
    let mut dots = Vec::with_capacity(2 * t as usize + 1);
    let first = Cell::new(2 * t + 1, 2 * t + 1);
    dots.extend((0..=t).map(|s| Cell::new(first.row - s, first.pos - 2 * s)));
    if t >= 1 {
        let second = Cell::new(3 * t + 1, 2 * t);
        dots.extend((0..t).map(|s| Cell::new(second.row - s, second.pos - 2 * s)));
    }
    dots
}

/// The canonical placement with `nf(n)` dots.
pub fn build_placement(size: TriangleSize) -> Placement {
    let ResidueParam { t, residue } = ResidueParam::of(size);
    let t = t as u32;
    let mut dots = chains(t);
    if residue == 0 {
        // Row 3t+1 holds exactly one dot (the start of chain 2).
        let bottom = 3 * t + 1;
        dots.retain(|c| c.row != bottom);
    }
    Placement::new(size, dots).expect("canonical placement lies on the board")
}
