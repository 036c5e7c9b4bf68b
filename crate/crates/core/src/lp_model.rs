//! The LP relaxation of the dot problem and its dual, in standard form.
//!
//! Primal: one variable `x_a_b` per cell, maximize the sum subject to one `<= 1`
//! constraint per line, ordered rows `r_1..r_n`, columns `c_1..c_n`, diagonals
//! `d_1..d_n` (each indexed by line length). Upper bounds `x <= 1` are implied by
//! the line constraints and are left out.
//!
//! Dual: one variable per line, named and ordered the same way, minimize the sum
//! subject to `r_i + c_j + d_k >= 1` for every cell, in board order. Its
//! constraint matrix is exactly the transpose of the primal one.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{all_cells, cells_of_line, line_indices_unchecked, Cell, LineFamily, TriangleSize};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub name: String,
    /// Sparse row, `(variable index, coefficient)`, sorted by index.
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &point[*j]).sum()
    }
}

/// A linear program over nonnegative variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpProblem {
    pub name: String,
    pub sense: Sense,
    pub var_names: Vec<String>,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    /// Checks that names are unique, the objective has one entry per variable,
    /// and every constraint refers to valid variables in increasing order.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(format!("malformed LP {:?}: {msg}", self.name)));
        if self.objective.len() != self.num_vars() {
            return bad(format!(
                "{} objective coefficients for {} variables",
                self.objective.len(),
                self.num_vars()
            ));
        }
        let mut names = BTreeSet::new();
        for name in &self.var_names {
            if !names.insert(name.as_str()) {
                return bad(format!("duplicate variable name {name}"));
            }
        }
        let mut cnames = BTreeSet::new();
        for con in &self.constraints {
            if !cnames.insert(con.name.as_str()) {
                return bad(format!("duplicate constraint name {}", con.name));
            }
            let mut last = None;
            for (j, _) in &con.coeffs {
                if *j >= self.num_vars() {
                    return bad(format!("constraint {} references variable {j}", con.name));
                }
                if last.is_some_and(|l| l >= *j) {
                    return bad(format!("constraint {} has unsorted or repeated indices", con.name));
                }
                last = Some(*j);
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    /// Names of the constraints (and `var >= 0` bounds) that `point` violates,
    /// using exact comparisons.
    pub fn violations(&self, point: &[Rational]) -> Vec<String> {
        let mut out = Vec::new();
        if point.len() != self.num_vars() {
            out.push(format!("point has {} entries, expected {}", point.len(), self.num_vars()));
            return out;
        }
        for (name, x) in self.var_names.iter().zip(point) {
            if x.is_negative() {
                out.push(format!("{name} >= 0"));
            }
        }
        for con in &self.constraints {
            if !con.relation.holds(&con.lhs(point), &con.rhs) {
                out.push(con.name.clone());
            }
        }
        out
    }

    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        self.violations(point).is_empty()
    }

    /// Dense constraint matrix, one row per constraint.
    pub fn dense_matrix(&self) -> Vec<Vec<Rational>> {
        self.constraints
            .iter()
            .map(|con| {
                let mut row = vec![Rational::zero(); self.num_vars()];
                for (j, a) in &con.coeffs {
                    row[*j] = a.clone();
                }
                row
            })
            .collect()
    }

    /// The textbook dual of `maximize cᵀx, Ax <= b, x >= 0`:
    /// `minimize bᵀy, Aᵀy >= c, y >= 0`. Dual variables take the primal
    /// constraint names and dual constraints the primal variable names.
    pub fn transpose_dual(&self) -> Result<LpProblem> {
        self.validate()?;
        if self.sense != Sense::Maximize
            || self.constraints.iter().any(|c| c.relation != Relation::Le)
        {
            return Err(Error::Domain("transpose_dual expects maximize with <= rows".into()));
        }
        let mut columns: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.num_vars()];
        for (i, con) in self.constraints.iter().enumerate() {
            for (j, a) in &con.coeffs {
                columns[*j].push((i, a.clone()));
            }
        }
        Ok(LpProblem {
            name: format!("{}_dual", self.name),
            sense: Sense::Minimize,
            var_names: self.constraints.iter().map(|c| c.name.clone()).collect(),
            objective: self.constraints.iter().map(|c| c.rhs.clone()).collect(),
            constraints: columns
                .into_iter()
                .zip(&self.var_names)
                .zip(&self.objective)
                .map(|((coeffs, name), c)| Constraint {
                    name: name.clone(),
                    coeffs,
                    relation: Relation::Ge,
                    rhs: c.clone(),
                })
                .collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Empty unless the status is optimal.
    pub values: Vec<Rational>,
    pub objective: Rational,
}

/// Index of `cell` among [`all_cells`], i.e. its primal variable.
pub fn cell_var_index(cell: Cell) -> usize {
    let row = cell.row as usize;
    row * (row - 1) / 2 + cell.pos as usize - 1
}

/// Index of a line among the dual variables (rows, then columns, then diagonals).
pub fn line_var_index(family: LineFamily, index: u32, size: TriangleSize) -> usize {
    let n = size.get() as usize;
    let base = match family {
        LineFamily::Row => 0,
        LineFamily::Column => n,
        LineFamily::Diagonal => 2 * n,
    };
    base + index as usize - 1
}

fn cell_name(cell: Cell) -> String {
    format!("x_{}_{}", cell.row, cell.pos)
}

fn line_names(size: TriangleSize) -> Vec<String> {
    LineFamily::ALL
        .into_iter()
        .flat_map(|f| (1..=size.get()).map(move |i| format!("{}_{i}", f.prefix())))
        .collect()
}

pub fn build_primal(size: TriangleSize) -> LpProblem {
    let cells = all_cells(size);
    let names = line_names(size);
    let constraints = LineFamily::ALL
        .into_iter()
        .flat_map(|f| (1..=size.get()).map(move |i| (f, i)))
        .zip(names)
        .map(|((family, index), name)| {
            let mut coeffs: Vec<(usize, Rational)> = cells_of_line(family, index, size)
                .expect("index in range")
                .into_iter()
                .map(|c| (cell_var_index(c), Rational::one()))
                .collect();
            coeffs.sort_by_key(|(j, _)| *j);
            Constraint { name, coeffs, relation: Relation::Le, rhs: Rational::one() }
        })
        .collect();
    LpProblem {
        name: format!("triangle_primal_{size}"),
        sense: Sense::Maximize,
        var_names: cells.iter().copied().map(cell_name).collect(),
        objective: vec![Rational::one(); cells.len()],
        constraints,
    }
}

pub fn build_dual(size: TriangleSize) -> LpProblem {
    let constraints = all_cells(size)
        .into_iter()
        .map(|cell| {
            let li = line_indices_unchecked(cell, size);
            let coeffs = LineFamily::ALL
                .into_iter()
                .map(|f| (line_var_index(f, li.get(f), size), Rational::one()))
                .collect();
            Constraint {
                name: cell_name(cell),
                coeffs,
                relation: Relation::Ge,
                rhs: Rational::one(),
            }
        })
        .collect();
    LpProblem {
        name: format!("triangle_dual_{size}"),
        sense: Sense::Minimize,
        var_names: line_names(size),
        objective: vec![Rational::one(); 3 * size.get() as usize],
        constraints,
    }
}

/// Terms per line before wrapping.
const TERMS_PER_LINE: usize = 8;

/// Significant digits used when a coefficient has no finite decimal expansion.
const ROUNDED_DIGITS: usize = 17;

struct NumberText {
    text: String,
    exact: bool,
}

fn number_text(value: &Rational) -> NumberText {
    match value.to_terminating_decimal() {
        Some(text) => NumberText { text, exact: true },
        None => NumberText { text: format!("{:.*e}", ROUNDED_DIGITS - 1, value.to_f64()), exact: false },
    }
}

/// Renders `coeffs` as LP-format terms. Returns the wrapped lines and whether
/// any coefficient was rounded.
fn render_terms(p: &LpProblem, coeffs: &[(usize, Rational)]) -> (Vec<String>, bool) {
    let mut exact = true;
    let mut terms = Vec::with_capacity(coeffs.len());
    for (k, (j, a)) in coeffs.iter().filter(|(_, a)| !a.is_zero()).enumerate() {
        let name = &p.var_names[*j];
        let sign = if a.is_negative() { "-" } else { "+" };
        let mag = a.abs();
        let body = if mag == Rational::one() {
            name.clone()
        } else {
            let num = number_text(&mag);
            exact &= num.exact;
            format!("{} {name}", num.text)
        };
        terms.push(if k == 0 && sign == "+" { body } else { format!("{sign} {body}") });
    }
    if terms.is_empty() {
        terms.push("0".to_string());
    }
    let lines = terms.chunks(TERMS_PER_LINE).map(|chunk| chunk.join(" ")).collect();
    (lines, exact)
}

fn exact_comment(p: &LpProblem, coeffs: &[(usize, Rational)]) -> String {
    coeffs
        .iter()
        .map(|(j, a)| format!("{a} {}", p.var_names[*j]))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn write_block(out: &mut String, label: &str, lines: &[String], suffix: &str) {
    for (idx, line) in lines.iter().enumerate() {
        let lead = if idx == 0 { format!(" {label}: ") } else { "   ".to_string() };
        let tail = if idx + 1 == lines.len() { suffix } else { "" };
        let _ = writeln!(out, "{lead}{line}{tail}");
    }
}

/// Writes `p` in the CPLEX-style LP text format.
///
/// Coefficients with a finite decimal expansion are written exactly. Any other
/// value is rounded to 17 significant digits, a header comment says so, and the
/// exact fractions are repeated in a comment just above the affected row.
/// The output depends only on `p`.
pub fn export_lp_text(p: &LpProblem) -> String {
    let (obj_lines, obj_exact) = render_terms(p, &p.objective.iter().cloned().enumerate().collect::<Vec<_>>());
    let rows: Vec<(Vec<String>, bool, NumberText)> = p
        .constraints
        .iter()
        .map(|con| {
            let (lines, exact) = render_terms(p, &con.coeffs);
            (lines, exact, number_text(&con.rhs))
        })
        .collect();
    let all_exact = obj_exact && rows.iter().all(|(_, e, rhs)| *e && rhs.exact);

    let mut out = String::new();
    let _ = writeln!(out, "\\ Problem: {}", p.name);
    let _ = writeln!(
        out,
        "\\ {} variables, {} constraints",
        p.num_vars(),
        p.constraints.len()
    );
    if !all_exact {
        let _ = writeln!(
            out,
            "\\ WARNING: some values have no finite decimal form and are rounded to {ROUNDED_DIGITS} significant digits; exact fractions are given in comments"
        );
    }
    out.push_str(match p.sense {
        Sense::Maximize => "Maximize\n",
        Sense::Minimize => "Minimize\n",
    });
    if !obj_exact {
        let dense: Vec<_> = p.objective.iter().cloned().enumerate().collect();
        let _ = writeln!(out, "\\ exact obj: {}", exact_comment(p, &dense));
    }
    write_block(&mut out, "obj", &obj_lines, "");
    out.push_str("Subject To\n");
    for (con, (lines, exact, rhs)) in p.constraints.iter().zip(&rows) {
        if !*exact || !rhs.exact {
            let _ = writeln!(
                out,
                "\\ exact {}: {} {} {}",
                con.name,
                exact_comment(p, &con.coeffs),
                con.relation.symbol(),
                con.rhs
            );
        }
        write_block(&mut out, &con.name, lines, &format!(" {} {}", con.relation.symbol(), rhs.text));
    }
    out.push_str("Bounds\n");
    for name in &p.var_names {
        let _ = writeln!(out, " {name} >= 0");
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::lpf;

    fn size(n: i64) -> TriangleSize {
        TriangleSize::new(n).unwrap()
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    /// The labelled optimal point for n = 6, bottom row first, each row listed
    /// left to right as drawn (so `pos` descending).
    fn drawn_six() -> Vec<Rational> {
        let drawn: [&[(i64, i64)]; 6] = [
            &[(0, 1), (0, 1), (2, 7), (4, 7), (1, 7), (0, 1)],
            &[(2, 7), (0, 1), (3, 7), (1, 7), (1, 7)],
            &[(5, 7), (0, 1), (0, 1), (2, 7)],
            &[(0, 1), (5, 7), (2, 7)],
            &[(0, 1), (2, 7)],
            &[(0, 1)],
        ];
        let mut point = vec![Rational::zero(); 21];
        for (k, row_vals) in drawn.iter().enumerate() {
            let row = 6 - k as u32;
            for (m, &(p, q)) in row_vals.iter().enumerate() {
                let pos = row - m as u32;
                point[cell_var_index(Cell::new(row, pos))] = r(p, q);
            }
        }
        point
    }

    #[test]
    fn cell_index_matches_board_order() {
        for (k, cell) in all_cells(size(12)).into_iter().enumerate() {
            assert_eq!(cell_var_index(cell), k);
        }
    }

    #[test]
    fn primal_shapes() {
        let one = build_primal(size(1));
        assert_eq!(one.num_vars(), 1);
        assert_eq!(one.constraints.len(), 3);
        assert!(one.constraints.iter().all(|c| c.coeffs == vec![(0, Rational::one())]));

        let six = build_primal(size(6));
        assert_eq!(six.num_vars(), 21);
        assert_eq!(six.constraints.len(), 18);
        six.validate().unwrap();
    }

    #[test]
    fn dual_shapes() {
        let one = build_dual(size(1));
        assert_eq!(one.var_names, vec!["r_1", "c_1", "d_1"]);
        assert_eq!(one.constraints.len(), 1);
        assert_eq!(one.constraints[0].coeffs.len(), 3);
        assert_eq!(one.constraints[0].relation, Relation::Ge);

        let six = build_dual(size(6));
        assert_eq!(six.num_vars(), 18);
        assert_eq!(six.constraints.len(), 21);
        six.validate().unwrap();
    }

    #[test]
    fn drawn_six_point_is_optimal_value() {
        let p = build_primal(size(6));
        let point = drawn_six();
        assert!(p.is_feasible(&point), "{:?}", p.violations(&point));
        assert_eq!(p.objective_value(&point), r(30, 7));
        assert_eq!(p.objective_value(&point), lpf(size(6)));
    }

    #[test]
    fn dual_is_transpose_of_primal() {
        for n in 1..=25 {
            let s = size(n);
            let primal = build_primal(s);
            let dual = build_dual(s);
            let mech = primal.transpose_dual().unwrap();
            assert_eq!(dual.sense, mech.sense);
            assert_eq!(dual.var_names, mech.var_names);
            assert_eq!(dual.objective, mech.objective);
            assert_eq!(dual.constraints, mech.constraints);

            let a = primal.dense_matrix();
            let at = dual.dense_matrix();
            for (i, row) in a.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert_eq!(v, &at[j][i]);
                }
            }
        }
    }

    #[test]
    fn coefficient_sums_match_line_lengths() {
        let n = 11;
        let s = size(n);
        let primal = build_primal(s);
        for (k, con) in primal.constraints.iter().enumerate() {
            let len = (k % n as usize) as i64 + 1;
            let total: Rational = con.coeffs.iter().map(|(_, a)| a.clone()).sum();
            assert_eq!(total, Rational::from(len), "{}", con.name);
        }
        for con in build_dual(s).constraints {
            assert_eq!(con.coeffs.len(), 3);
            let total: Rational = con.coeffs.iter().map(|(_, a)| a.clone()).sum();
            assert_eq!(total, Rational::from(3));
        }
    }

    #[test]
    fn validate_rejects_malformed() {
        let mut p = build_primal(size(2));
        p.constraints[0].coeffs.push((99, Rational::one()));
        assert!(p.validate().is_err());

        let mut p = build_primal(size(2));
        p.var_names[1] = p.var_names[0].clone();
        assert!(p.validate().is_err());

        let mut p = build_primal(size(2));
        p.objective.pop();
        assert!(p.validate().is_err());
    }

    #[test]
    fn export_small_primal() {
        let text = export_lp_text(&build_primal(size(1)));
        let expected = "\\ Problem: triangle_primal_1\n\
                        \\ 1 variables, 3 constraints\n\
                        Maximize\n obj: x_1_1\n\
                        Subject To\n r_1: x_1_1 <= 1\n c_1: x_1_1 <= 1\n d_1: x_1_1 <= 1\n\
                        Bounds\n x_1_1 >= 0\nEnd\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn export_is_deterministic_and_complete() {
        let p = build_primal(size(6));
        let a = export_lp_text(&p);
        assert_eq!(a, export_lp_text(&p));
        assert!(!a.contains("WARNING"));
        assert_eq!(a.lines().filter(|l| l.ends_with("<= 1")).count(), 18);
        assert_eq!(a.lines().filter(|l| l.ends_with(">= 0")).count(), 21);

        let d = export_lp_text(&build_dual(size(6)));
        assert!(d.contains("Minimize\n"));
        assert_eq!(d.lines().filter(|l| l.ends_with(">= 1")).count(), 21);
        assert_eq!(d.lines().filter(|l| l.ends_with(">= 0")).count(), 18);
    }

    #[test]
    fn export_flags_rounded_values() {
        let p = LpProblem {
            name: "frac".into(),
            sense: Sense::Maximize,
            var_names: vec!["x".into(), "y".into()],
            objective: vec![r(1, 3), r(-1, 2)],
            constraints: vec![Constraint {
                name: "c1".into(),
                coeffs: vec![(0, r(5, 4)), (1, Rational::one())],
                relation: Relation::Le,
                rhs: r(2, 3),
            }],
        };
        let text = export_lp_text(&p);
        assert!(text.contains("\\ WARNING"));
        assert!(text.contains("\\ exact obj: 1/3 x + -1/2 y"));
        assert!(text.contains(" obj: 3.3333333333333331e-1 x - 0.5 y\n"), "{text}");
        assert!(text.contains("\\ exact c1: 5/4 x + 1 y <= 2/3\n"));
        assert!(text.contains(" c1: 1.25 x + y <= 6.6666666666666663e-1\n"), "{text}");
    }
}
