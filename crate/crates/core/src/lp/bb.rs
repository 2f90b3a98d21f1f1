//! Depth-first branch and bound over LP relaxations.

use std::time::Instant;

use num_traits::{One, Zero};

use super::{infeasible_rows, solve_lp, Arithmetic, LpError, LpModel, LpSolution, LpStatus, RowKind};
use crate::geom::number::{self, Rational};

/// Minimum binary solution of `model`. With `incumbent_limit`, only
/// solutions of value at most the limit are sought; the result is
/// infeasible if none exists.
pub fn solve_ip(
    model: &LpModel,
    arithmetic: Arithmetic,
    incumbent_limit: Option<u32>,
) -> Result<LpSolution, LpError> {
    solve_ip_until(model, arithmetic, incumbent_limit, None)
}

/// [`solve_ip`] that gives up with [`LpError::Deadline`] once `deadline`
/// passes.
pub fn solve_ip_until(
    model: &LpModel,
    arithmetic: Arithmetic,
    incumbent_limit: Option<u32>,
    deadline: Option<Instant>,
) -> Result<LpSolution, LpError> {
    if model.num_columns() == 0 && model.num_rows() == 0 {
        return Err(LpError::Empty);
    }
    let bad = infeasible_rows(model);
    if !bad.is_empty() {
        return Ok(LpSolution::infeasible(model, arithmetic, bad));
    }
    let n = model.num_columns();
    let mut search = Search {
        model,
        arithmetic,
        limit: incumbent_limit.unwrap_or(u32::MAX),
        deadline,
        best: None,
        nodes: 0,
        pivots: 0,
    };
    if let Some(x) = greedy(model) {
        let v = x.iter().filter(|&&b| b).count() as u32;
        if v <= search.limit {
            search.best = Some((v, x));
        }
    }
    let mut fixed = vec![None; n];
    search.node(&mut fixed)?;
    log::debug!("branch and bound: {} nodes, {} pivots", search.nodes, search.pivots);
    let Some((value, x)) = search.best else {
        return Ok(LpSolution::infeasible(model, arithmetic, Vec::new()));
    };
    Ok(LpSolution {
        status: LpStatus::Optimal,
        arithmetic,
        primal: x
            .iter()
            .map(|&b| if b { Rational::one() } else { Rational::zero() })
            .collect(),
        dual: vec![Rational::zero(); model.num_rows()],
        bound_dual: vec![Rational::zero(); n],
        objective: Rational::from_integer(value.into()),
        objective_approx: value as f64,
        pivots: search.pivots,
        infeasible_rows: Vec::new(),
    })
}

struct Search<'a> {
    model: &'a LpModel,
    arithmetic: Arithmetic,
    limit: u32,
    deadline: Option<Instant>,
    best: Option<(u32, Vec<bool>)>,
    nodes: usize,
    pivots: usize,
}

impl Search<'_> {
    /// Value a node must reach to be worth exploring.
    fn cutoff(&self) -> u32 {
        match &self.best {
            Some((v, _)) => v.saturating_sub(1).min(self.limit),
            None => self.limit,
        }
    }

    fn node(&mut self, fixed: &mut Vec<Option<bool>>) -> Result<(), LpError> {
        self.nodes += 1;
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(LpError::Deadline);
        }
        let ones = fixed.iter().filter(|f| **f == Some(true)).count() as u32;
        if self.best.is_some() && ones > self.cutoff() {
            return Ok(());
        }
        let free: Vec<usize> = (0..fixed.len()).filter(|&p| fixed[p].is_none()).collect();
        let mut sub = LpModel::new();
        for &p in &free {
            sub.add_column(p as u64, &[])?;
        }
        for (ri, r) in self.model.rows().iter().enumerate() {
            let done: u32 = r
                .coefs
                .iter()
                .filter(|&&(p, _)| fixed[p] == Some(true))
                .map(|&(_, c)| c)
                .sum();
            if done >= r.rhs {
                continue;
            }
            let entries: Vec<(u64, u32)> = r
                .coefs
                .iter()
                .filter(|&&(p, _)| fixed[p].is_none())
                .map(|&(p, c)| (p as u64, c))
                .collect();
            if entries.iter().map(|e| e.1).sum::<u32>() < r.rhs - done {
                return Ok(());
            }
            sub.add_row(ri as u64, RowKind::Witness, &entries, r.rhs - done)?;
        }
        if sub.num_rows() == 0 {
            let x: Vec<bool> = fixed.iter().map(|f| *f == Some(true)).collect();
            self.offer(ones, x);
            return Ok(());
        }
        let lp = solve_lp(&sub, self.arithmetic)?;
        self.pivots += lp.pivots;
        if lp.status != LpStatus::Optimal {
            return Ok(());
        }
        let bound = match self.arithmetic {
            Arithmetic::Exact => number::ceil(&lp.objective),
            Arithmetic::Float => number::ceil(&number::from_f64(lp.objective_approx - 1e-6)),
        };
        let bound: u32 = u32::try_from(bound).unwrap_or(u32::MAX).saturating_add(ones);
        if bound > self.cutoff() || (self.best.is_none() && bound > self.limit) {
            return Ok(());
        }
        if lp.is_integral() {
            let mut x: Vec<bool> = fixed.iter().map(|f| *f == Some(true)).collect();
            for (k, &p) in free.iter().enumerate() {
                x[p] = lp.primal[k] > number::half();
            }
            let v = x.iter().filter(|&&b| b).count() as u32;
            self.offer(v, x);
            return Ok(());
        }
        // most fractional free variable, lowest id on ties
        let ids = self.model.column_ids();
        let mut pick: Option<(f64, usize)> = None;
        for (k, &p) in free.iter().enumerate() {
            let v = number::to_f64(&lp.primal[k]);
            let frac = v.min(1.0 - v);
            if frac <= 1e-9 {
                continue;
            }
            let better = match pick {
                None => true,
                Some((bf, bp)) => frac > bf + 1e-12 || ((frac - bf).abs() <= 1e-12 && ids[p] < ids[bp]),
            };
            if better {
                pick = Some((frac, p));
            }
        }
        let (_, p) = pick.expect("fractional solution has a fractional variable");
        for choice in [true, false] {
            fixed[p] = Some(choice);
            self.node(fixed)?;
        }
        fixed[p] = None;
        Ok(())
    }

    fn offer(&mut self, v: u32, x: Vec<bool>) {
        if v > self.limit {
            return;
        }
        if self.best.as_ref().map_or(true, |(b, _)| v < *b) {
            self.best = Some((v, x));
        }
    }
}

/// Greedy cover: repeatedly take the column that reduces the total
/// residual requirement most.
fn greedy(model: &LpModel) -> Option<Vec<bool>> {
    let cols = model.column_entries();
    let mut residual: Vec<u32> = model.rows().iter().map(|r| r.rhs).collect();
    let mut x = vec![false; model.num_columns()];
    while residual.iter().any(|&r| r > 0) {
        let mut best: Option<(u32, usize)> = None;
        for (p, entries) in cols.iter().enumerate() {
            if x[p] {
                continue;
            }
            let gain: u32 = entries.iter().map(|&(ri, c)| c.min(residual[ri])).sum();
            if gain > 0 && best.map_or(true, |(g, _)| gain > g) {
                best = Some((gain, p));
            }
        }
        let (_, p) = best?;
        x[p] = true;
        for &(ri, c) in &cols[p] {
            residual[ri] = residual[ri].saturating_sub(c);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{circulant, covering};
    use super::*;
    use crate::geom::number::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(matrix: &[Vec<bool>]) -> Option<u32> {
        let n = matrix[0].len();
        (0u32..(1 << n))
            .filter(|mask| matrix.iter().all(|row| (0..n).any(|c| row[c] && mask & (1 << c) != 0)))
            .map(|mask| mask.count_ones())
            .min()
    }

    #[test]
    fn circulant_needs_two() {
        let s = solve_ip(&circulant(3), Arithmetic::Exact, None).unwrap();
        assert_eq!(s.objective, int(2));
        assert!(s.is_integral());
    }

    #[test]
    fn random_matrices_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let mat: Vec<Vec<bool>> = (0..8)
                .map(|_| {
                    let mut row: Vec<bool> = (0..12).map(|_| rng.gen_bool(0.3)).collect();
                    let c = rng.gen_range(0..12);
                    row[c] = true;
                    row
                })
                .collect();
            let expect = brute_force(&mat).unwrap();
            for a in [Arithmetic::Exact, Arithmetic::Float] {
                let s = solve_ip(&covering(&mat), a, None).unwrap();
                assert_eq!(s.objective, int(expect as i64));
                let lp = solve_lp(&covering(&mat), a).unwrap();
                assert!(lp.objective <= s.objective);
            }
        }
    }

    #[test]
    fn limit_excludes_worse_solutions() {
        let s = solve_ip(&circulant(3), Arithmetic::Exact, Some(1)).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        let s = solve_ip(&circulant(3), Arithmetic::Exact, Some(2)).unwrap();
        assert_eq!(s.objective, int(2));
    }
}
