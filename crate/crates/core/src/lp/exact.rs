//! Exact reconstruction and certification of a basis found in floating
//! point.

use num_traits::{One, Signed, Zero};

use super::{Arithmetic, LpModel, LpSolution, LpStatus};
use crate::geom::number::Rational;

/// Basic structural columns of the packing problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BasicVar {
    /// Dual of primal row `r`.
    Row(usize),
    /// Dual of the upper bound of column `g`.
    Bound(usize),
}

/// Given which packing constraints are tight (nonbasic slack) and which
/// structurals are basic, solves for the exact primal and dual values and
/// checks optimality. `None` if the basis is singular or not optimal.
pub(crate) fn certify(model: &LpModel, tight: &[usize], basic: &[BasicVar]) -> Option<LpSolution> {
    let n = model.num_columns();
    let k = tight.len();
    if basic.len() != k {
        return None;
    }
    let mut row_of = vec![usize::MAX; n];
    for (i, &g) in tight.iter().enumerate() {
        row_of[g] = i;
    }
    // K[i][j]: coefficient of basic var j in tight constraint i
    let mut kmat = vec![vec![Rational::zero(); k]; k];
    let mut cost = vec![Rational::zero(); k];
    for (j, v) in basic.iter().enumerate() {
        match *v {
            BasicVar::Row(r) => {
                let row = &model.rows()[r];
                for &(g, c) in &row.coefs {
                    if row_of[g] != usize::MAX {
                        kmat[row_of[g]][j] = Rational::from_integer(c.into());
                    }
                }
                cost[j] = Rational::from_integer(row.rhs.into());
            }
            BasicVar::Bound(g) => {
                if row_of[g] != usize::MAX {
                    kmat[row_of[g]][j] = -Rational::one();
                }
                cost[j] = -Rational::one();
            }
        }
    }
    let ones = vec![Rational::one(); k];
    let vals = gauss(kmat.clone(), ones)?;
    let kt: Vec<Vec<Rational>> = (0..k).map(|j| (0..k).map(|i| kmat[i][j].clone()).collect()).collect();
    let xt = gauss(kt, cost)?;

    let mut x = vec![Rational::zero(); n];
    for (i, &g) in tight.iter().enumerate() {
        x[g] = xt[i].clone();
    }
    let mut y = vec![Rational::zero(); model.num_rows()];
    let mut z = vec![Rational::zero(); n];
    for (j, v) in basic.iter().enumerate() {
        match *v {
            BasicVar::Row(r) => y[r] = vals[j].clone(),
            BasicVar::Bound(g) => z[g] = vals[j].clone(),
        }
    }
    // packing feasibility
    if y.iter().chain(&z).any(|v| v.is_negative()) {
        return None;
    }
    let mut load = vec![Rational::zero(); n];
    for (r, row) in model.rows().iter().enumerate() {
        if y[r].is_zero() {
            continue;
        }
        for &(g, c) in &row.coefs {
            load[g] += &y[r] * Rational::from_integer(c.into());
        }
    }
    for g in 0..n {
        if &load[g] - &z[g] > Rational::one() {
            return None;
        }
    }
    // covering feasibility, which is packing optimality
    if x.iter().any(|v| v.is_negative() || *v > Rational::one()) {
        return None;
    }
    let act = model.activities(&x);
    if act
        .iter()
        .zip(model.rows())
        .any(|(a, r)| *a < Rational::from_integer(r.rhs.into()))
    {
        return None;
    }
    let objective = x.iter().fold(Rational::zero(), |a, v| a + v);
    let approx = crate::geom::number::to_f64(&objective);
    Some(LpSolution {
        status: LpStatus::Optimal,
        arithmetic: Arithmetic::Exact,
        primal: x,
        dual: y,
        bound_dual: z,
        objective,
        objective_approx: approx,
        pivots: 0,
        infeasible_rows: Vec::new(),
    })
}

/// Solves the square system `a x = b` by Gauss-Jordan elimination.
fn gauss(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = b.len();
    for col in 0..k {
        // sparsest nonzero pivot keeps fill-in down
        let piv = (col..k)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col..].iter().filter(|v| !v.is_zero()).count())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        let nz: Vec<usize> = (col..k).filter(|&c| !a[col][c].is_zero()).collect();
        for &c in &nz {
            a[col][c] = &a[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        let prow: Vec<(usize, Rational)> = nz.iter().map(|&c| (c, a[col][c].clone())).collect();
        let pb = b[col].clone();
        for r in 0..k {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for (c, v) in &prow {
                a[r][*c] = &a[r][*c] - &f * v;
            }
            b[r] = &b[r] - &f * &pb;
        }
    }
    Some(b)
}
