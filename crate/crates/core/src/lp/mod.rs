//! Covering LPs `min 1.x, A x >= b, 0 <= x <= 1` with dual values, and a
//! branch-and-bound solver for their binary versions.
//!
//! The LP is solved through its packing dual `max b.y - 1.z, A'y - z <= 1`,
//! whose origin is always feasible. Upper-bound duals `z` are only added for
//! variables that exceed one without them.

mod bb;
mod exact;
mod format;
mod scalar;
mod simplex;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::number::{self, Rational};
use scalar::Scalar;
use simplex::{Outcome, Tableau};

pub use bb::{solve_ip, solve_ip_until};
pub use format::write_lp;

/// Pivot budget per solve, as a multiple of the tableau size.
const PIVOT_FACTOR: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Exact,
    Float,
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arithmetic::Exact => "exact",
            Arithmetic::Float => "float",
        })
    }
}

impl std::str::FromStr for Arithmetic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Arithmetic::Exact),
            "float" => Ok(Arithmetic::Float),
            _ => Err(format!("unknown arithmetic {s:?} (expected exact or float)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    Witness,
    ScCut,
    EcCut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub id: u64,
    pub kind: RowKind,
    /// (column position, coefficient), sorted by position.
    pub coefs: Vec<(usize, u32)>,
    pub rhs: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("column id {0} already exists")]
    DuplicateColumn(u64),
    #[error("row id {0} already exists")]
    DuplicateRow(u64),
    #[error("unknown column id {0}")]
    UnknownColumn(u64),
    #[error("unknown row id {0}")]
    UnknownRow(u64),
    #[error("coefficient {0} outside {{1, 2}}")]
    BadCoefficient(u32),
    #[error("right-hand side must be positive")]
    BadRhs,
    #[error("model has no rows and no columns")]
    Empty,
    #[error("simplex pivot limit reached")]
    IterationLimit,
    #[error("deadline passed during branch and bound")]
    Deadline,
}

/// Minimization of the column sum subject to covering rows.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LpModel {
    col_ids: Vec<u64>,
    col_pos: HashMap<u64, usize>,
    rows: Vec<LpRow>,
    row_pos: HashMap<u64, usize>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with its coefficients in existing rows.
    pub fn add_column(&mut self, id: u64, entries: &[(u64, u32)]) -> Result<usize, LpError> {
        if self.col_pos.contains_key(&id) {
            return Err(LpError::DuplicateColumn(id));
        }
        for &(rid, c) in entries {
            if !self.row_pos.contains_key(&rid) {
                return Err(LpError::UnknownRow(rid));
            }
            check_coef(c)?;
        }
        let pos = self.col_ids.len();
        self.col_ids.push(id);
        self.col_pos.insert(id, pos);
        for &(rid, c) in entries {
            let row = &mut self.rows[self.row_pos[&rid]];
            if let Some(e) = row.coefs.iter_mut().find(|e| e.0 == pos) {
                e.1 = c;
            } else {
                row.coefs.push((pos, c));
            }
        }
        Ok(pos)
    }

    /// Adds a row `sum coef * x >= rhs` over existing columns.
    pub fn add_row(
        &mut self,
        id: u64,
        kind: RowKind,
        entries: &[(u64, u32)],
        rhs: u32,
    ) -> Result<usize, LpError> {
        if self.row_pos.contains_key(&id) {
            return Err(LpError::DuplicateRow(id));
        }
        if rhs == 0 {
            return Err(LpError::BadRhs);
        }
        let mut coefs = Vec::with_capacity(entries.len());
        for &(cid, c) in entries {
            let pos = *self.col_pos.get(&cid).ok_or(LpError::UnknownColumn(cid))?;
            check_coef(c)?;
            coefs.push((pos, c));
        }
        coefs.sort_unstable();
        coefs.dedup_by_key(|e| e.0);
        let pos = self.rows.len();
        self.rows.push(LpRow { id, kind, coefs, rhs });
        self.row_pos.insert(id, pos);
        Ok(pos)
    }

    pub fn num_columns(&self) -> usize {
        self.col_ids.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_ids(&self) -> &[u64] {
        &self.col_ids
    }

    pub fn column_position(&self, id: u64) -> Option<usize> {
        self.col_pos.get(&id).copied()
    }

    pub fn row_position(&self, id: u64) -> Option<usize> {
        self.row_pos.get(&id).copied()
    }

    pub fn rows(&self) -> &[LpRow] {
        &self.rows
    }

    /// Left-hand side of every row at `x`.
    pub fn activities(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| {
                r.coefs.iter().fold(Rational::zero(), |acc, &(p, c)| {
                    acc + &x[p] * Rational::from_integer(c.into())
                })
            })
            .collect()
    }

    /// Column-wise view: for each column, (row position, coefficient).
    pub(crate) fn column_entries(&self) -> Vec<Vec<(usize, u32)>> {
        let mut cols = vec![Vec::new(); self.col_ids.len()];
        for (ri, r) in self.rows.iter().enumerate() {
            for &(p, c) in &r.coefs {
                cols[p].push((ri, c));
            }
        }
        cols
    }
}

fn check_coef(c: u32) -> Result<(), LpError> {
    if c == 1 || c == 2 {
        Ok(())
    } else {
        Err(LpError::BadCoefficient(c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub arithmetic: Arithmetic,
    /// Value of each column, by position.
    pub primal: Vec<Rational>,
    /// Value of each row's dual, by position.
    pub dual: Vec<Rational>,
    /// Duals of the upper bounds `x <= 1`, by column position.
    pub bound_dual: Vec<Rational>,
    pub objective: Rational,
    /// Unrounded objective; equals `objective` in exact mode.
    pub objective_approx: f64,
    pub pivots: usize,
    /// For infeasible models: rows no column can satisfy.
    pub infeasible_rows: Vec<u64>,
}

impl LpSolution {
    fn infeasible(model: &LpModel, arithmetic: Arithmetic, rows: Vec<u64>) -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            arithmetic,
            primal: vec![Rational::zero(); model.num_columns()],
            dual: vec![Rational::zero(); model.num_rows()],
            bound_dual: vec![Rational::zero(); model.num_columns()],
            objective: Rational::zero(),
            objective_approx: f64::NAN,
            pivots: 0,
            infeasible_rows: rows,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Whether every primal value is 0 or 1 (within 1e-6 in float mode).
    pub fn is_integral(&self) -> bool {
        self.primal.iter().all(|v| match self.arithmetic {
            Arithmetic::Exact => v.is_integer(),
            Arithmetic::Float => {
                let f = number::to_f64(v);
                (f - f.round()).abs() <= 1e-6
            }
        })
    }

    pub fn primal_of(&self, model: &LpModel, id: u64) -> Option<&Rational> {
        model.column_position(id).map(|p| &self.primal[p])
    }

    pub fn dual_of(&self, model: &LpModel, id: u64) -> Option<&Rational> {
        model.row_position(id).map(|p| &self.dual[p])
    }

    /// `b.y - 1.z`, the dual objective.
    pub fn dual_objective(&self, model: &LpModel) -> Rational {
        let by = model
            .rows()
            .iter()
            .zip(&self.dual)
            .fold(Rational::zero(), |acc, (r, y)| acc + y * Rational::from_integer(r.rhs.into()));
        self.bound_dual.iter().fold(by, |acc, z| acc - z)
    }
}

/// Solves the LP relaxation of `model`.
pub fn solve_lp(model: &LpModel, arithmetic: Arithmetic) -> Result<LpSolution, LpError> {
    if model.num_columns() == 0 && model.num_rows() == 0 {
        return Err(LpError::Empty);
    }
    let unsupported = infeasible_rows(model);
    if !unsupported.is_empty() {
        return Ok(LpSolution::infeasible(model, arithmetic, unsupported));
    }
    match arithmetic {
        Arithmetic::Exact => solve_with::<Rational>(model, arithmetic),
        Arithmetic::Float => solve_with::<f64>(model, arithmetic),
    }
}

/// Exact solve: optimize in floating point, then certify the final basis in
/// rational arithmetic. Falls back to an exact simplex when certification
/// fails.
fn solve_exact(model: &LpModel) -> Result<LpSolution, LpError> {
    let run = run_simplex::<f64>(model)?;
    if let Some(run) = &run {
        let n = model.num_columns();
        let mut col_var: HashMap<usize, exact::BasicVar> = HashMap::new();
        for (r, &j) in run.row_col.iter().enumerate() {
            col_var.insert(j, exact::BasicVar::Row(r));
        }
        for (g, j) in run.bound_col.iter().enumerate() {
            if let Some(j) = j {
                col_var.insert(*j, exact::BasicVar::Bound(g));
            }
        }
        let basis = run.tableau.basis();
        let slack_basic: Vec<bool> = {
            let mut v = vec![false; n];
            for &j in basis {
                if j < n {
                    v[j] = true;
                }
            }
            v
        };
        let tight: Vec<usize> = (0..n).filter(|&g| !slack_basic[g]).collect();
        let basic: Vec<exact::BasicVar> = basis.iter().filter_map(|j| col_var.get(j).copied()).collect();
        if let Some(mut sol) = exact::certify(model, &tight, &basic) {
            sol.pivots = run.tableau.pivots;
            return Ok(sol);
        }
        log::debug!("floating-point basis not certified; running exact simplex");
    }
    match run_simplex::<Rational>(model)? {
        Some(run) => Ok(run.extract(model, Arithmetic::Exact)),
        None => Ok(LpSolution::infeasible(model, Arithmetic::Exact, infeasible_rows(model))),
    }
}

fn solve_with<T: Scalar>(model: &LpModel, arithmetic: Arithmetic) -> Result<LpSolution, LpError> {
    if arithmetic == Arithmetic::Exact {
        return solve_exact(model);
    }
    match run_simplex::<T>(model)? {
        Some(run) => Ok(run.extract(model, arithmetic)),
        None => Ok(LpSolution::infeasible(model, arithmetic, infeasible_rows(model))),
    }
}

struct Run<T> {
    tableau: Tableau<T>,
    row_col: Vec<usize>,
    bound_col: Vec<Option<usize>>,
}

/// Optimizes the packing dual, adding upper-bound columns as needed. `None`
/// when the packing problem is unbounded.
fn run_simplex<T: Scalar>(model: &LpModel) -> Result<Option<Run<T>>, LpError> {
    let n = model.num_columns();
    let mut t: Tableau<T> = Tableau::new(n);
    let mut row_col = Vec::with_capacity(model.num_rows());
    for r in model.rows() {
        let entries: Vec<(usize, i64)> = r.coefs.iter().map(|&(p, c)| (p, c as i64)).collect();
        row_col.push(t.add_column(&entries, r.rhs as i64));
    }
    let mut bound_col: Vec<Option<usize>> = vec![None; n];
    loop {
        let budget = PIVOT_FACTOR * (t.num_cols() + n + 10);
        match t.solve(budget) {
            Outcome::Optimal => {}
            Outcome::Unbounded => return Ok(None),
            Outcome::IterationLimit => return Err(LpError::IterationLimit),
        }
        let mut added = false;
        for g in 0..n {
            if bound_col[g].is_none()
                && t.constraint_dual(g).sub(&T::unit()).sign() == std::cmp::Ordering::Greater
            {
                bound_col[g] = Some(t.add_column(&[(g, -1)], -1));
                added = true;
            }
        }
        if !added {
            return Ok(Some(Run { tableau: t, row_col, bound_col }));
        }
    }
}

impl<T: Scalar> Run<T> {
    fn extract(&self, model: &LpModel, arithmetic: Arithmetic) -> LpSolution {
        let t = &self.tableau;
        let n = model.num_columns();
        let clamp = |v: Rational| if v.is_negative() { Rational::zero() } else { v };
        let primal: Vec<Rational> = (0..n)
            .map(|g| {
                let v = clamp(t.constraint_dual(g).to_rational());
                if v > Rational::one() {
                    Rational::one()
                } else {
                    v
                }
            })
            .collect();
        let dual: Vec<Rational> = self.row_col.iter().map(|&j| clamp(t.value(j).to_rational())).collect();
        let bound_dual: Vec<Rational> = self
            .bound_col
            .iter()
            .map(|c| c.map_or_else(Rational::zero, |j| clamp(t.value(j).to_rational())))
            .collect();
        let objective_approx = t.objective().approx();
        let objective = match arithmetic {
            Arithmetic::Exact => t.objective().to_rational(),
            Arithmetic::Float => primal.iter().fold(Rational::zero(), |a, v| a + v),
        };
        LpSolution {
            status: LpStatus::Optimal,
            arithmetic,
            primal,
            dual,
            bound_dual,
            objective,
            objective_approx,
            pivots: t.pivots,
            infeasible_rows: Vec::new(),
        }
    }
}

/// Checks an optimal solution against its own certificate: primal and dual
/// feasibility, equal objectives, and complementary slackness, all exactly.
/// Returns a description of every violation found.
pub fn optimality_violations(model: &LpModel, sol: &LpSolution) -> Vec<String> {
    let mut out = Vec::new();
    let zero = Rational::zero();
    let one = Rational::one();
    let x = &sol.primal;
    for (j, v) in x.iter().enumerate() {
        if *v < zero || *v > one {
            out.push(format!("x[{j}] = {v} outside [0, 1]"));
        }
    }
    let act = model.activities(x);
    let mut reduced = vec![one.clone(); model.num_columns()];
    for (i, r) in model.rows().iter().enumerate() {
        let rhs = Rational::from_integer(r.rhs.into());
        let y = &sol.dual[i];
        if act[i] < rhs {
            out.push(format!("row {} covered {} < {}", r.id, act[i], rhs));
        }
        if *y < zero {
            out.push(format!("row {} dual {} negative", r.id, y));
        }
        if !y.is_zero() && act[i] != rhs {
            out.push(format!("row {} has dual {} but slack {}", r.id, y, &act[i] - &rhs));
        }
        for &(j, c) in &r.coefs {
            reduced[j] -= y * Rational::from_integer(c.into());
        }
    }
    for (j, z) in sol.bound_dual.iter().enumerate() {
        reduced[j] += z;
        if *z < zero {
            out.push(format!("bound dual of column {j} negative"));
        }
        if !z.is_zero() && x[j] != one {
            out.push(format!("column {j} below its bound with bound dual {z}"));
        }
        if reduced[j] < zero {
            out.push(format!("column {j} has negative reduced cost {}", reduced[j]));
        }
        if !x[j].is_zero() && !reduced[j].is_zero() {
            out.push(format!("column {j} positive with reduced cost {}", reduced[j]));
        }
    }
    let primal_obj = x.iter().fold(Rational::zero(), |a, v| a + v);
    let dual_obj = sol.dual_objective(model);
    if primal_obj != dual_obj {
        out.push(format!("objectives differ: primal {primal_obj}, dual {dual_obj}"));
    }
    if sol.objective != primal_obj {
        out.push(format!("reported objective {} differs from 1.x = {primal_obj}", sol.objective));
    }
    out
}

/// Rows whose requirement exceeds what all columns at value one provide. A
/// covering model is infeasible exactly when this is non-empty.
fn infeasible_rows(model: &LpModel) -> Vec<u64> {
    model
        .rows()
        .iter()
        .filter(|r| r.coefs.iter().map(|&(_, c)| c).sum::<u32>() < r.rhs)
        .map(|r| r.id)
        .collect()
}
