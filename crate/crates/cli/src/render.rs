//! Text rendering of boards and tables.

use tridots_core::{Cell, TriangleSize};

/// Draws the board with its right angle at the bottom right: row 1 is a single
/// cell at the top right, and each row lists its cells left to right
/// (`pos = row` down to `pos = 1`). Every cell is padded to the widest label.
pub fn triangle(size: TriangleSize, label: impl Fn(Cell) -> String) -> String {
    let n = size.get();
    let labels: Vec<Vec<String>> = (1..=n)
        .map(|row| (1..=row).rev().map(|pos| label(Cell::new(row, pos))).collect())
        .collect();
    let width = labels.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    let mut out = String::new();
    for (idx, row) in labels.iter().enumerate() {
        let indent = (n as usize - idx - 1) * (width + 1);
        let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        out.push_str(&" ".repeat(indent));
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Left-aligned columns separated by ` | `, with a rule under the header.
pub fn ascii_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join(" | ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&rule.join("-+-"));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
