//! Dense two-phase simplex over exact rationals.
//!
//! `<=` rows start with their slack in the basis. `>=` and `=` rows get an
//! artificial variable, and phase 1 minimizes the artificial sum before phase 2
//! optimizes the real objective. Both phases use Bland's rule (lowest-index
//! entering column, ratio ties broken by lowest-index basic variable), which
//! rules out cycling. No tolerances are involved anywhere.
//!
//! Two tableau representations share the same driver:
//!
//! - [`IntegerTableau`] keeps integer entries over one common denominator and
//!   pivots fraction-free: `a'_ij = (a_pq a_ij - a_iq a_pj) / d`, where the
//!   division is always exact. Entries are `i128` and every operation is
//!   checked.
//! - [`RationalTableau`] stores reduced fractions. It is used when the integer
//!   tableau overflows, and is otherwise slower but simpler.
//!
//! Both follow the same pivot sequence, so they report the same point.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::geometry::TriangleSize;
use crate::lp_model::{build_primal, LpProblem, LpSolution, LpStatus, Relation, Sense};
use crate::rational::Rational;

/// Default size cap for [`lp_value`].
pub const DEFAULT_LP_CAP: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    /// Fraction-free `i128` tableau, retrying with rationals on overflow.
    Auto,
    /// Always use the rational tableau.
    Rational,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Pivots allowed per phase.
    pub pivot_limit: usize,
    pub arithmetic: Arithmetic,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { pivot_limit: 200_000, arithmetic: Arithmetic::Auto }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

/// The problem after slack/artificial columns are added and right-hand sides
/// are made nonnegative.
struct StandardForm {
    num_structural: usize,
    kinds: Vec<ColumnKind>,
    /// Sparse rows `(column, coefficient)` and their right-hand sides.
    rows: Vec<(Vec<(usize, Rational)>, Rational)>,
    basis: Vec<usize>,
    /// Phase-2 cost per column, oriented for maximization.
    cost: Vec<Rational>,
}

impl StandardForm {
    fn new(p: &LpProblem) -> Self {
        let n = p.num_vars();
        let normalized: Vec<(Vec<(usize, Rational)>, Relation, Rational)> = p
            .constraints
            .iter()
            .map(|con| {
                if con.rhs.is_negative() {
                    let flipped = match con.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    let coeffs = con.coeffs.iter().map(|(j, a)| (*j, -a)).collect();
                    (coeffs, flipped, -&con.rhs)
                } else {
                    (con.coeffs.clone(), con.relation, con.rhs.clone())
                }
            })
            .collect();

        let mut kinds = vec![ColumnKind::Structural; n];
        let mut slack_of = Vec::with_capacity(normalized.len());
        for (_, rel, _) in &normalized {
            slack_of.push((*rel != Relation::Eq).then(|| {
                kinds.push(ColumnKind::Slack);
                kinds.len() - 1
            }));
        }
        let mut artificial_of = Vec::with_capacity(normalized.len());
        for (_, rel, _) in &normalized {
            artificial_of.push((*rel != Relation::Le).then(|| {
                kinds.push(ColumnKind::Artificial);
                kinds.len() - 1
            }));
        }

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        for (i, (mut coeffs, rel, rhs)) in normalized.into_iter().enumerate() {
            coeffs.retain(|(_, a)| !a.is_zero());
            if let Some(s) = slack_of[i] {
                let sign = if rel == Relation::Le { Rational::one() } else { -Rational::one() };
                coeffs.push((s, sign));
            }
            match artificial_of[i] {
                Some(a) => {
                    coeffs.push((a, Rational::one()));
                    basis.push(a);
                }
                None => basis.push(slack_of[i].expect("<= rows have a slack")),
            }
            rows.push((coeffs, rhs));
        }

        let mut cost: Vec<Rational> = match p.sense {
            Sense::Maximize => p.objective.clone(),
            Sense::Minimize => p.objective.iter().map(|c| -c).collect(),
        };
        cost.resize(kinds.len(), Rational::zero());
        Self { num_structural: n, kinds, rows, basis, cost }
    }

    fn has_artificials(&self) -> bool {
        self.kinds.contains(&ColumnKind::Artificial)
    }

    fn phase_one_cost(&self) -> Vec<Rational> {
        self.kinds
            .iter()
            .map(|k| if *k == ColumnKind::Artificial { -Rational::one() } else { Rational::zero() })
            .collect()
    }
}

/// Raised by the integer tableau when a value leaves the `i128` range or a
/// division that should be exact is not.
#[derive(Debug)]
struct Overflow;

type Step<T> = std::result::Result<T, Overflow>;

trait Tableau {
    fn width(&self) -> usize;
    fn num_rows(&self) -> usize;
    fn basis(&self) -> &[usize];
    fn kind(&self, col: usize) -> ColumnKind;
    fn pivots(&self) -> usize;
    /// Sign of the reduced profit of `col`.
    fn profit_sign(&self, col: usize) -> Ordering;
    /// Sign of the entry in `row`, `col`.
    fn entry_sign(&self, row: usize, col: usize) -> Ordering;
    /// Compares `rhs_a / entry(a, col)` with `rhs_b / entry(b, col)`; both
    /// entries are positive.
    fn compare_ratios(&self, a: usize, b: usize, col: usize) -> Step<Ordering>;
    fn pivot(&mut self, row: usize, col: usize) -> Step<()>;
    fn set_objective(&mut self, cost: &[Rational]) -> Step<()>;
    /// Whether the current objective value is zero.
    fn objective_is_zero(&self) -> bool;
    fn remove_row(&mut self, row: usize);
    fn basic_value(&self, row: usize) -> Rational;
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

#[derive(Debug)]
enum Abort {
    Overflow,
    Error(Error),
}

impl From<Overflow> for Abort {
    fn from(_: Overflow) -> Self {
        Abort::Overflow
    }
}

/// Bland's rule until no allowed column has positive reduced profit.
fn optimize<T: Tableau>(
    t: &mut T,
    allowed: impl Fn(ColumnKind) -> bool,
    options: &SimplexOptions,
) -> std::result::Result<PhaseEnd, Abort> {
    let start = t.pivots();
    loop {
        let Some(enter) = (0..t.width())
            .find(|&j| allowed(t.kind(j)) && t.profit_sign(j) == Ordering::Greater)
        else {
            return Ok(PhaseEnd::Optimal);
        };

        let mut leave: Option<usize> = None;
        for i in 0..t.num_rows() {
            if t.entry_sign(i, enter) != Ordering::Greater {
                continue;
            }
            leave = Some(match leave {
                None => i,
                Some(l) => match t.compare_ratios(i, l, enter)? {
                    Ordering::Less => i,
                    Ordering::Equal if t.basis()[i] < t.basis()[l] => i,
                    _ => l,
                },
            });
        }
        let Some(leave_row) = leave else {
            return Ok(PhaseEnd::Unbounded);
        };
        if t.pivots() - start >= options.pivot_limit {
            return Err(Abort::Error(Error::PivotLimit(options.pivot_limit)));
        }
        t.pivot(leave_row, enter)?;
    }
}

/// Pivots zero-level artificials out of the basis, dropping rows that are
/// combinations of the others.
fn expel_artificials<T: Tableau>(t: &mut T) -> Step<()> {
    let mut i = 0;
    while i < t.num_rows() {
        if t.kind(t.basis()[i]) != ColumnKind::Artificial {
            i += 1;
            continue;
        }
        let replacement = (0..t.width())
            .find(|&j| t.kind(j) != ColumnKind::Artificial && t.entry_sign(i, j) != Ordering::Equal);
        match replacement {
            Some(j) => {
                t.pivot(i, j)?;
                i += 1;
            }
            None => t.remove_row(i),
        }
    }
    Ok(())
}

enum Outcome {
    Optimal(Vec<Rational>),
    Infeasible,
    Unbounded,
}

fn run<T: Tableau>(
    mut t: T,
    form: &StandardForm,
    options: &SimplexOptions,
) -> std::result::Result<Outcome, Abort> {
    if form.has_artificials() {
        t.set_objective(&form.phase_one_cost())?;
        if let PhaseEnd::Unbounded = optimize(&mut t, |_| true, options)? {
            return Err(Abort::Error(Error::Internal("phase 1 reported unbounded".into())));
        }
        if !t.objective_is_zero() {
            return Ok(Outcome::Infeasible);
        }
        expel_artificials(&mut t)?;
    }
    t.set_objective(&form.cost)?;
    if let PhaseEnd::Unbounded = optimize(&mut t, |k| k != ColumnKind::Artificial, options)? {
        return Ok(Outcome::Unbounded);
    }
    let mut values = vec![Rational::zero(); form.num_structural];
    for (i, &b) in t.basis().iter().enumerate() {
        if b < form.num_structural {
            values[b] = t.basic_value(i);
        }
    }
    Ok(Outcome::Optimal(values))
}

/// Reduced-fraction tableau.
struct RationalTableau {
    /// Row coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    /// Reduced profits `c_j - c_Bᵀ B⁻¹ a_j`; the last entry is `-c_Bᵀ B⁻¹ b`.
    profit: Vec<Rational>,
    pivots: usize,
}

impl RationalTableau {
    fn new(form: &StandardForm) -> Self {
        let width = form.kinds.len();
        let rows = form
            .rows
            .iter()
            .map(|(coeffs, rhs)| {
                let mut row = vec![Rational::zero(); width + 1];
                for (j, a) in coeffs {
                    row[*j] = a.clone();
                }
                row[width] = rhs.clone();
                row
            })
            .collect();
        Self { rows, basis: form.basis.clone(), kinds: form.kinds.clone(), profit: Vec::new(), pivots: 0 }
    }
}

impl Tableau for RationalTableau {
    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn basis(&self) -> &[usize] {
        &self.basis
    }

    fn kind(&self, col: usize) -> ColumnKind {
        self.kinds[col]
    }

    fn pivots(&self) -> usize {
        self.pivots
    }

    fn profit_sign(&self, col: usize) -> Ordering {
        self.profit[col].cmp(&Rational::zero())
    }

    fn entry_sign(&self, row: usize, col: usize) -> Ordering {
        self.rows[row][col].cmp(&Rational::zero())
    }

    fn compare_ratios(&self, a: usize, b: usize, col: usize) -> Step<Ordering> {
        let w = self.width();
        let ra = &self.rows[a][w] / &self.rows[a][col];
        let rb = &self.rows[b][w] / &self.rows[b][col];
        Ok(ra.cmp(&rb))
    }

    fn pivot(&mut self, leave_row: usize, enter: usize) -> Step<()> {
        let pivot = self.rows[leave_row][enter].clone();
        let row = &mut self.rows[leave_row];
        if pivot != Rational::one() {
            for a in row.iter_mut().filter(|a| !a.is_zero()) {
                *a = &*a / &pivot;
            }
        }
        let nonzero: Vec<usize> = (0..row.len()).filter(|&j| !row[j].is_zero()).collect();
        let pivot_row = row.clone();

        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[enter].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &nonzero {
                target[j] -= &(&factor * &pivot_row[j]);
            }
        };
        for (i, target) in self.rows.iter_mut().enumerate() {
            if i != leave_row {
                eliminate(target);
            }
        }
        eliminate(&mut self.profit);
        self.basis[leave_row] = enter;
        self.pivots += 1;
        Ok(())
    }

    fn set_objective(&mut self, cost: &[Rational]) -> Step<()> {
        let mut profit: Vec<Rational> = cost.to_vec();
        profit.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (p, a) in profit.iter_mut().zip(row) {
                if !a.is_zero() {
                    *p -= &(cb * a);
                }
            }
        }
        self.profit = profit;
        Ok(())
    }

    fn objective_is_zero(&self) -> bool {
        self.profit[self.width()].is_zero()
    }

    fn remove_row(&mut self, row: usize) {
        self.rows.remove(row);
        self.basis.remove(row);
    }

    fn basic_value(&self, row: usize) -> Rational {
        self.rows[row][self.width()].clone()
    }
}

/// Fraction-free tableau: the true entries are `rows[i][j] / denom`, the
/// reduced profits `profit[j] / (denom * cost_scale)`.
struct IntegerTableau {
    rows: Vec<Vec<i128>>,
    profit: Vec<i128>,
    denom: i128,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    pivots: usize,
}

fn to_i128(x: &BigInt) -> Step<i128> {
    x.to_i128().ok_or(Overflow)
}

/// Scales rationals by the lcm of their denominators into integers.
fn scale_to_integers<'a>(values: impl Iterator<Item = &'a Rational> + Clone) -> Step<Vec<i128>> {
    let lcm = values.clone().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values.map(|v| to_i128(&(v.numer() * (&lcm / v.denom())))).collect()
}

fn mul(a: i128, b: i128) -> Step<i128> {
    a.checked_mul(b).ok_or(Overflow)
}

fn sub(a: i128, b: i128) -> Step<i128> {
    a.checked_sub(b).ok_or(Overflow)
}

fn exact_div(a: i128, b: i128) -> Step<i128> {
    if b == 1 {
        return Ok(a);
    }
    if a % b != 0 {
        return Err(Overflow);
    }
    Ok(a / b)
}

impl IntegerTableau {
    /// Each row is scaled to integers independently. The scaling only changes
    /// the units of that row's slack or artificial, which are never reported.
    fn new(form: &StandardForm) -> Step<Self> {
        let width = form.kinds.len();
        let mut rows = Vec::with_capacity(form.rows.len());
        for ((coeffs, rhs), &basic) in form.rows.iter().zip(&form.basis) {
            let scaled = scale_to_integers(coeffs.iter().map(|(_, a)| a).chain([rhs]))?;
            let mut row = vec![0i128; width + 1];
            for ((j, _), v) in coeffs.iter().zip(&scaled) {
                row[*j] = *v;
            }
            row[width] = scaled[coeffs.len()];
            // Keep the basis column a unit vector.
            let unit = row[basic];
            if unit != 1 {
                if unit <= 0 {
                    return Err(Overflow);
                }
                for (j, &(col, _)) in coeffs.iter().enumerate() {
                    if col != basic && matches!(form.kinds[col], ColumnKind::Slack | ColumnKind::Artificial) {
                        // Auxiliary columns other than the basic one keep their sign.
                        row[col] = scaled[j].signum();
                    }
                }
                row[basic] = 1;
            }
            rows.push(row);
        }
        Ok(Self {
            rows,
            profit: Vec::new(),
            denom: 1,
            basis: form.basis.clone(),
            kinds: form.kinds.clone(),
            pivots: 0,
        })
    }
}

impl Tableau for IntegerTableau {
    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn basis(&self) -> &[usize] {
        &self.basis
    }

    fn kind(&self, col: usize) -> ColumnKind {
        self.kinds[col]
    }

    fn pivots(&self) -> usize {
        self.pivots
    }

    fn profit_sign(&self, col: usize) -> Ordering {
        self.profit[col].cmp(&0)
    }

    fn entry_sign(&self, row: usize, col: usize) -> Ordering {
        self.rows[row][col].cmp(&0)
    }

    fn compare_ratios(&self, a: usize, b: usize, col: usize) -> Step<Ordering> {
        let w = self.width();
        let lhs = mul(self.rows[a][w], self.rows[b][col])?;
        let rhs = mul(self.rows[b][w], self.rows[a][col])?;
        Ok(lhs.cmp(&rhs))
    }

    fn pivot(&mut self, leave_row: usize, enter: usize) -> Step<()> {
        let pivot = self.rows[leave_row][enter];
        let prev = self.denom;
        let pivot_row = self.rows[leave_row].clone();

        let update = |target: &mut Vec<i128>| -> Step<()> {
            let factor = target[enter];
            for (x, &p) in target.iter_mut().zip(&pivot_row) {
                if *x == 0 && (p == 0 || factor == 0) {
                    continue;
                }
                let v = if factor == 0 || p == 0 {
                    mul(pivot, *x)?
                } else {
                    sub(mul(pivot, *x)?, mul(factor, p)?)?
                };
                *x = exact_div(v, prev)?;
            }
            Ok(())
        };
        for i in 0..self.rows.len() {
            if i != leave_row {
                update(&mut self.rows[i])?;
            }
        }
        update(&mut self.profit)?;
        self.denom = pivot;
        if self.denom < 0 {
            // (T, d) and (-T, -d) represent the same tableau.
            for x in self.rows.iter_mut().flatten().chain(self.profit.iter_mut()) {
                *x = -*x;
            }
            self.denom = -self.denom;
        }
        self.basis[leave_row] = enter;
        self.pivots += 1;
        Ok(())
    }

    fn set_objective(&mut self, cost: &[Rational]) -> Step<()> {
        let cost = scale_to_integers(cost.iter())?;
        let mut profit: Vec<i128> = cost.iter().map(|c| mul(*c, self.denom)).collect::<Step<_>>()?;
        profit.push(0);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b];
            if cb == 0 {
                continue;
            }
            for (p, a) in profit.iter_mut().zip(row) {
                if *a != 0 {
                    *p = sub(*p, mul(cb, *a)?)?;
                }
            }
        }
        self.profit = profit;
        Ok(())
    }

    fn objective_is_zero(&self) -> bool {
        self.profit[self.width()] == 0
    }

    fn remove_row(&mut self, row: usize) {
        self.rows.remove(row);
        self.basis.remove(row);
    }

    fn basic_value(&self, row: usize) -> Rational {
        Rational::new(self.rows[row][self.width()], self.denom).expect("denominator is positive")
    }
}

/// Solves `p` exactly. The returned point of an optimal solution is checked
/// against every constraint before it is handed back.
pub fn solve(p: &LpProblem) -> Result<LpSolution> {
    solve_with(p, &SimplexOptions::default())
}

pub fn solve_with(p: &LpProblem, options: &SimplexOptions) -> Result<LpSolution> {
    p.validate()?;
    let form = StandardForm::new(p);

    let integer = match options.arithmetic {
        Arithmetic::Auto => match IntegerTableau::new(&form) {
            Ok(t) => run(t, &form, options),
            Err(Overflow) => Err(Abort::Overflow),
        },
        Arithmetic::Rational => Err(Abort::Overflow),
    };
    let outcome = match integer {
        Ok(outcome) => outcome,
        Err(Abort::Error(e)) => return Err(e),
        Err(Abort::Overflow) => match run(RationalTableau::new(&form), &form, options) {
            Ok(outcome) => outcome,
            Err(Abort::Error(e)) => return Err(e),
            Err(Abort::Overflow) => unreachable!("rational tableau never overflows"),
        },
    };

    let values = match outcome {
        Outcome::Optimal(values) => values,
        Outcome::Infeasible => {
            return Ok(LpSolution { status: LpStatus::Infeasible, values: Vec::new(), objective: Rational::zero() })
        }
        Outcome::Unbounded => {
            return Ok(LpSolution { status: LpStatus::Unbounded, values: Vec::new(), objective: Rational::zero() })
        }
    };
    let violated = p.violations(&values);
    if !violated.is_empty() {
        return Err(Error::Internal(format!("simplex point violates {}", violated.join(", "))));
    }
    let objective = p.objective_value(&values);
    Ok(LpSolution { status: LpStatus::Optimal, values, objective })
}

/// `LP(n)`, the optimum of the relaxation, refusing sizes above
/// [`DEFAULT_LP_CAP`].
pub fn lp_value(size: TriangleSize) -> Result<Rational> {
    lp_value_with_cap(size, DEFAULT_LP_CAP)
}

pub fn lp_value_with_cap(size: TriangleSize, cap: u32) -> Result<Rational> {
    if size.get() > cap {
        return Err(Error::CapExceeded { what: "exact simplex", n: size.get().into(), cap: cap.into() });
    }
    let solution = solve(&build_primal(size))?;
    match solution.status {
        LpStatus::Optimal => Ok(solution.objective),
        other => Err(Error::Internal(format!("relaxation reported {other:?}"))),
    }
}
