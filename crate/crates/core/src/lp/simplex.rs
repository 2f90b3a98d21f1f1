//! Dense tableau simplex for packing problems `max c.y, M y <= 1, y >= 0`.

use std::cmp::Ordering;

use super::scalar::Scalar;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

pub(crate) struct Tableau<T> {
    m: usize,
    /// Row-major constraint rows; columns are structurals then slacks mixed
    /// in insertion order (see `slack_col`).
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    /// Reduced costs.
    obj: Vec<T>,
    /// Negated objective value.
    obj_rhs: T,
    basis: Vec<usize>,
    slack_col: Vec<usize>,
    pub pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    /// `m` packing constraints with slack basis and no structural columns.
    pub fn new(m: usize) -> Self {
        let mut rows = vec![Vec::with_capacity(2 * m); m];
        for (i, row) in rows.iter_mut().enumerate() {
            for k in 0..m {
                row.push(if i == k { T::unit() } else { T::nil() });
            }
        }
        Tableau {
            m,
            rows,
            rhs: vec![T::unit(); m],
            obj: vec![T::nil(); m],
            obj_rhs: T::nil(),
            basis: (0..m).collect(),
            slack_col: (0..m).collect(),
            pivots: 0,
        }
    }

    pub fn num_cols(&self) -> usize {
        self.obj.len()
    }

    /// Appends a column with original entries `entries` (constraint index,
    /// coefficient) and objective `cost`, expressed in the current basis.
    /// Returns its column index.
    pub fn add_column(&mut self, entries: &[(usize, i64)], cost: i64) -> usize {
        let mut col = vec![T::nil(); self.m];
        let mut red = if cost >= 0 {
            T::from_u32(cost as u32)
        } else {
            T::from_u32((-cost) as u32).neg()
        };
        for &(g, a) in entries {
            let s = self.slack_col[g];
            let a = if a >= 0 {
                T::from_u32(a as u32)
            } else {
                T::from_u32((-a) as u32).neg()
            };
            for (i, c) in col.iter_mut().enumerate() {
                let t = &self.rows[i][s];
                if !t.is_zero_exact() {
                    *c = c.add(&a.mul(t));
                }
            }
            let o = &self.obj[s];
            if !o.is_zero_exact() {
                red = red.add(&a.mul(o));
            }
        }
        for (row, c) in self.rows.iter_mut().zip(col) {
            row.push(c);
        }
        self.obj.push(red);
        self.obj.len() - 1
    }

    pub fn solve(&mut self, max_pivots: usize) -> Outcome {
        let mut degenerate_run = 0usize;
        loop {
            if self.pivots >= max_pivots {
                return Outcome::IterationLimit;
            }
            let bland = degenerate_run >= DEGENERATE_LIMIT;
            let Some(j) = self.entering(bland) else {
                return Outcome::Optimal;
            };
            let Some(r) = self.leaving(j) else {
                return Outcome::Unbounded;
            };
            if self.rhs[r].sign() == Ordering::Equal {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, j);
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (j, r) in self.obj.iter().enumerate() {
            if r.sign() != Ordering::Greater {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.map_or(true, |b| r.cmp_val(&self.obj[b]) == Ordering::Greater) {
                best = Some(j);
            }
        }
        best
    }

    fn leaving(&self, j: usize) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.m {
            let a = &self.rows[i][j];
            if a.sign() != Ordering::Greater {
                continue;
            }
            let ratio = self.rhs[i].div(a);
            let better = match &best {
                None => true,
                Some((bi, br)) => match ratio.cmp_val(br) {
                    Ordering::Less => true,
                    Ordering::Equal => self.basis[i] < self.basis[*bi],
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, j: usize) {
        self.pivots += 1;
        let p = self.rows[r][j].clone();
        let nz: Vec<usize> = {
            let row = &mut self.rows[r];
            let mut nz = Vec::new();
            for (k, v) in row.iter_mut().enumerate() {
                if !v.is_zero_exact() {
                    *v = v.div(&p);
                    nz.push(k);
                }
            }
            nz
        };
        self.rhs[r] = self.rhs[r].div(&p);
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.rows[i][j].clone();
            if f.is_zero_exact() {
                continue;
            }
            let row = &mut self.rows[i];
            for &k in &nz {
                row[k] = row[k].sub(&f.mul(&prow[k]));
            }
            row[j] = T::nil();
            self.rhs[i] = self.rhs[i].sub(&f.mul(&prhs));
        }
        let f = self.obj[j].clone();
        if !f.is_zero_exact() {
            for &k in &nz {
                self.obj[k] = self.obj[k].sub(&f.mul(&prow[k]));
            }
            self.obj[j] = T::nil();
            self.obj_rhs = self.obj_rhs.sub(&f.mul(&prhs));
        }
        self.rows[r] = prow;
        self.basis[r] = j;
    }

    /// Basic column of each constraint row.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Objective value of the packing problem.
    pub fn objective(&self) -> T {
        self.obj_rhs.neg()
    }

    /// Value of column `j` in the current basic solution.
    pub fn value(&self, j: usize) -> T {
        self.basis
            .iter()
            .position(|&b| b == j)
            .map_or_else(T::nil, |i| self.rhs[i].clone())
    }

    /// Dual value of packing constraint `g`, i.e. the covering variable.
    pub fn constraint_dual(&self, g: usize) -> T {
        self.obj[self.slack_col[g]].neg()
    }
}
