//! Exhaustive face dimensions for small guard sets: enumerate every binary
//! cover and take the affine rank of those tight at an inequality.

use num_integer::Integer;

use crate::model::VisibilityMatrix;

/// Largest guard count the oracle accepts.
pub const MAX_GUARDS: usize = 20;

/// Every binary cover of the witnesses, as guard bitmasks.
pub fn feasible_covers(m: &VisibilityMatrix) -> Vec<u32> {
    let ng = m.num_guards();
    assert!(ng <= MAX_GUARDS, "oracle limited to {MAX_GUARDS} guards");
    let masks: Vec<u32> = (0..m.num_witnesses())
        .map(|w| (0..ng).filter(|&g| m.sees(w, g)).fold(0, |a, g| a | 1 << g))
        .collect();
    (0..1u32 << ng)
        .filter(|x| masks.iter().all(|mw| mw & x != 0))
        .collect()
}

/// Affine dimension of a set of 0/1 points in `n` dimensions; -1 if empty.
pub fn affine_dimension(points: &[u32], n: usize) -> i64 {
    let Some(&base) = points.first() else {
        return -1;
    };
    let mut basis: Vec<(usize, Vec<i128>)> = Vec::new();
    for &p in &points[1..] {
        if basis.len() == n {
            break;
        }
        let mut v: Vec<i128> = (0..n)
            .map(|i| i128::from((p >> i) & 1) - i128::from((base >> i) & 1))
            .collect();
        for (col, row) in &basis {
            let f = v[*col];
            if f != 0 {
                let piv = row[*col];
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = *vi * piv - ri * f;
                }
                let g = v.iter().fold(0i128, |a, &b| a.gcd(&b));
                if g > 1 {
                    v.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        if let Some(col) = v.iter().position(|&x| x != 0) {
            basis.push((col, v));
        }
    }
    basis.len() as i64
}

/// Dimension of the cover polytope.
pub fn polytope_dimension(m: &VisibilityMatrix) -> i64 {
    affine_dimension(&feasible_covers(m), m.num_guards())
}

fn activity(coefs: &[u32], x: u32) -> u32 {
    coefs
        .iter()
        .enumerate()
        .filter(|(g, _)| x >> g & 1 == 1)
        .map(|(_, c)| c)
        .sum()
}

/// Dimension of the face where `coefs . x >= rhs` holds with equality.
/// Panics if some binary cover violates the inequality.
pub fn face_dimension(m: &VisibilityMatrix, coefs: &[u32], rhs: u32) -> i64 {
    let covers = feasible_covers(m);
    assert!(
        covers.iter().all(|&x| activity(coefs, x) >= rhs),
        "inequality cuts off a binary cover"
    );
    let tight: Vec<u32> = covers.into_iter().filter(|&x| activity(coefs, x) == rhs).collect();
    affine_dimension(&tight, m.num_guards())
}

/// Whether the face of a valid inequality has dimension one less than the
/// polytope's.
pub fn is_facet(m: &VisibilityMatrix, coefs: &[u32], rhs: u32) -> bool {
    let dim = polytope_dimension(m);
    dim >= 0 && face_dimension(m, coefs, rhs) == dim - 1
}

/// Facet status of `x_g >= 0`.
pub fn lower_bound_is_facet(m: &VisibilityMatrix, g: usize) -> bool {
    face_of(m, |x| x >> g & 1 == 0)
}

/// Facet status of `x_g <= 1`.
pub fn upper_bound_is_facet(m: &VisibilityMatrix, g: usize) -> bool {
    face_of(m, |x| x >> g & 1 == 1)
}

fn face_of(m: &VisibilityMatrix, tight: impl Fn(u32) -> bool) -> bool {
    let covers = feasible_covers(m);
    let dim = affine_dimension(&covers, m.num_guards());
    let face: Vec<u32> = covers.into_iter().filter(|&x| tight(x)).collect();
    dim >= 0 && affine_dimension(&face, m.num_guards()) == dim - 1
}

/// Coefficients of the covering row of witness `w`.
pub fn witness_coefficients(m: &VisibilityMatrix, w: usize) -> Vec<u32> {
    (0..m.num_guards()).map(|g| u32::from(m.sees(w, g))).collect()
}

/// Coefficients and right-hand side of the edge-cover inequality of `wbar`.
pub fn ec_inequality(m: &VisibilityMatrix, wbar: &[usize]) -> (Vec<u32>, u32) {
    let coefs = (0..m.num_guards())
        .map(|g| u32::from(wbar.iter().any(|&w| m.sees(w, g))))
        .collect();
    (coefs, wbar.len().div_ceil(2) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_dimension_of_simplex() {
        // 0, e1, e2, e3 in three dimensions
        assert_eq!(affine_dimension(&[0, 1, 2, 4], 3), 3);
        assert_eq!(affine_dimension(&[1, 2, 4], 3), 2);
        assert_eq!(affine_dimension(&[3], 3), 0);
        assert_eq!(affine_dimension(&[], 3), -1);
        // collinear: 000, 011, and again 000
        assert_eq!(affine_dimension(&[0, 3, 0], 3), 1);
    }

    #[test]
    fn unit_cube_is_full() {
        let m = VisibilityMatrix::from_rows(vec![vec![true, true, true]]);
        assert_eq!(feasible_covers(&m).len(), 7);
        assert_eq!(polytope_dimension(&m), 3);
    }

    #[test]
    fn forced_guard_drops_dimension() {
        let m = VisibilityMatrix::from_rows(vec![vec![true, false, false], vec![true, true, true]]);
        assert_eq!(polytope_dimension(&m), 2);
    }
}
