//! Exact phase-one simplex for `find lambda >= 0 with A lambda = b`.
//! Bland's rule guarantees termination.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::RatVec;

/// Returns a nonnegative solution of `sum_j lambda_j * columns[j] = target`,
/// or `None` when the system is infeasible.
pub(crate) fn nonneg_solve(columns: &[RatVec], target: &[BigRational]) -> Option<RatVec> {
    let m = target.len();
    let n = columns.len();
    // tableau rows: [A | I | b], with b made nonnegative
    let width = n + m + 1;
    let mut t: Vec<RatVec> = (0..m)
        .map(|i| {
            let flip = target[i].is_negative();
            let mut row = Vec::with_capacity(width);
            for c in columns {
                row.push(if flip { -c[i].clone() } else { c[i].clone() });
            }
            for k in 0..m {
                row.push(if k == i { BigRational::one() } else { BigRational::zero() });
            }
            row.push(target[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs for minimizing the sum of artificials
    loop {
        let mut cost = vec![BigRational::zero(); n + m];
        for c in cost.iter_mut().skip(n) {
            *c = BigRational::one();
        }
        let mut reduced = cost.clone();
        for (i, &bi) in basis.iter().enumerate() {
            let cb = &cost[bi];
            if cb.is_zero() {
                continue;
            }
            for (j, r) in reduced.iter_mut().enumerate() {
                *r -= cb * &t[i][j];
            }
        }
        let Some(enter) = (0..n + m).find(|&j| reduced[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase one objective is bounded below");
        pivot(&mut t, r, enter);
        basis[r] = enter;
    }

    let infeasible = basis
        .iter()
        .enumerate()
        .any(|(i, &bi)| bi >= n && !t[i][width - 1].is_zero());
    if infeasible {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [RatVec], r: usize, c: usize) {
    let inv = BigRational::one() / &t[r][c];
    for x in t[r].iter_mut() {
        *x = &*x * &inv;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, p) in row.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
    }
}
