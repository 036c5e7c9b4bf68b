//! Backtracking search for `N(n)`, independent of any LP machinery.
//!
//! Rows are visited top to bottom; each row takes at most one dot. Columns and
//! diagonals are tracked as bitsets indexed by line length. Within a row, dots
//! are tried left-to-right in `pos` order before the "leave the row empty"
//! branch, so the first optimum found is reproducible.

use crate::error::{Error, Result};
use crate::geometry::{Cell, TriangleSize};
use crate::construction::Placement;

/// Default size cap for the exponential searches.
pub const DEFAULT_SEARCH_CAP: u32 = 25;

/// Hard limit imposed by the 128-bit occupancy sets.
pub const MAX_SEARCH_SIZE: u32 = 127;

#[derive(Debug, Clone)]
struct SearchState {
    n: u32,
    row: u32,
    cols: u128,
    diags: u128,
    dots: Vec<Cell>,
}

impl SearchState {
    fn new(n: u32) -> Self {
        Self { n, row: 1, cols: 0, diags: 0, dots: Vec::new() }
    }

    /// Rows not yet decided, including the current one.
    fn rows_left(&self) -> u32 {
        self.n + 1 - self.row
    }

    fn lines(&self, pos: u32) -> (u128, u128) {
        let col = self.n - pos + 1;
        let diag = self.n - self.row + pos;
        (1u128 << col, 1u128 << diag)
    }

    fn place(&mut self, pos: u32) -> bool {
        let (c, d) = self.lines(pos);
        if self.cols & c != 0 || self.diags & d != 0 {
            return false;
        }
        self.cols |= c;
        self.diags |= d;
        self.dots.push(Cell::new(self.row, pos));
        true
    }

    fn unplace(&mut self, pos: u32) {
        let (c, d) = self.lines(pos);
        self.cols &= !c;
        self.diags &= !d;
        self.dots.pop();
    }
}

fn check_cap(size: TriangleSize, cap: u32) -> Result<()> {
    let cap = cap.min(MAX_SEARCH_SIZE);
    if size.get() > cap {
        return Err(Error::CapExceeded {
            what: "backtracking search",
            n: size.get().into(),
            cap: cap.into(),
        });
    }
    Ok(())
}

/// `N(n)` and a witness placement, refusing sizes above [`DEFAULT_SEARCH_CAP`].
pub fn max_dots(size: TriangleSize) -> Result<(usize, Placement)> {
    max_dots_with_cap(size, DEFAULT_SEARCH_CAP)
}

pub fn max_dots_with_cap(size: TriangleSize, cap: u32) -> Result<(usize, Placement)> {
    check_cap(size, cap)?;
    let mut state = SearchState::new(size.get());
    let mut best: Vec<Cell> = Vec::new();
    search_max(&mut state, &mut best);
    let witness = Placement::new(size, best)?;
    Ok((witness.len(), witness))
}

fn search_max(state: &mut SearchState, best: &mut Vec<Cell>) {
    if state.dots.len() as u32 + state.rows_left() <= best.len() as u32 {
        return;
    }
    if state.row > state.n {
        // Strictly better, guaranteed by the bound above.
        *best = state.dots.clone();
        return;
    }
    let row = state.row;
    for pos in 1..=row {
        if state.place(pos) {
            state.row += 1;
            search_max(state, best);
            state.row -= 1;
            state.unplace(pos);
        }
    }
    state.row += 1;
    search_max(state, best);
    state.row -= 1;
}

/// Number of distinct placements with `N(n)` dots.
pub fn count_optima(size: TriangleSize) -> Result<u64> {
    count_optima_with_cap(size, DEFAULT_SEARCH_CAP)
}

pub fn count_optima_with_cap(size: TriangleSize, cap: u32) -> Result<u64> {
    let (target, _) = max_dots_with_cap(size, cap)?;
    let mut state = SearchState::new(size.get());
    let mut count = 0;
    count_with(&mut state, target as u32, &mut count);
    Ok(count)
}

fn count_with(state: &mut SearchState, target: u32, count: &mut u64) {
    if (state.dots.len() as u32) + state.rows_left() < target {
        return;
    }
    if state.dots.len() as u32 == target {
        // Remaining rows must stay empty.
        *count += 1;
        return;
    }
    let row = state.row;
    for pos in 1..=row {
        if state.place(pos) {
            state.row += 1;
            count_with(state, target, count);
            state.row -= 1;
            state.unplace(pos);
        }
    }
    state.row += 1;
    count_with(state, target, count);
    state.row -= 1;
}
