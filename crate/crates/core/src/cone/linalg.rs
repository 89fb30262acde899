use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{dot_rat, primitive_rat, primitive_unsigned, to_rat, IntVec, RatVec};

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RatVec], d: usize) -> (Vec<RatVec>, Vec<usize>) {
    let mut m: Vec<RatVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..d {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[IntVec], d: usize) -> usize {
    let rat: Vec<RatVec> = rows.iter().map(|r| to_rat(r)).collect();
    rref(&rat, d).0.len()
}

/// Canonical integer basis of the span of `rows`: the RREF rows scaled to
/// primitive integer vectors (pivot entries positive), sorted.
pub fn canonical_basis(rows: &[IntVec], d: usize) -> Vec<IntVec> {
    let rat: Vec<RatVec> = rows.iter().map(|r| to_rat(r)).collect();
    let (reduced, _) = rref(&rat, d);
    let mut out: Vec<IntVec> = reduced
        .iter()
        .map(|r| primitive_unsigned(&primitive_rat(r)))
        .collect();
    out.sort();
    out
}

/// Basis of `{x : <row, x> = 0 for every row}`.
pub fn nullspace(rows: &[IntVec], d: usize) -> Vec<IntVec> {
    let rat: Vec<RatVec> = rows.iter().map(|r| to_rat(r)).collect();
    let (reduced, pivots) = rref(&rat, d);
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); d];
            v[f] = BigRational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            primitive_rat(&v)
        })
        .collect()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`,
/// rescaled to a primitive integer vector.
pub fn project_out(v: &[BigInt], basis: &[IntVec]) -> IntVec {
    if basis.is_empty() {
        return v.to_vec();
    }
    let ortho = gram_schmidt(basis);
    let mut w = to_rat(v);
    for u in &ortho {
        let coeff = dot_rat(&w, u) / dot_rat(u, u);
        for (wi, ui) in w.iter_mut().zip(u) {
            *wi -= &coeff * ui;
        }
    }
    primitive_rat(&w)
}

fn gram_schmidt(basis: &[IntVec]) -> Vec<RatVec> {
    let mut out: Vec<RatVec> = Vec::with_capacity(basis.len());
    for b in basis {
        let mut w = to_rat(b);
        for u in &out {
            let coeff = dot_rat(&w, u) / dot_rat(u, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= &coeff * ui;
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            out.push(w);
        }
    }
    out
}

/// Solves `sum_j coeffs[j] * cols[j] = target` when `cols` are linearly
/// independent and the target lies in their span.
pub fn solve_in_span(cols: &[IntVec], target: &[BigRational]) -> Option<RatVec> {
    let d = target.len();
    let k = cols.len();
    // augmented system: d rows, k unknowns
    let mut m: Vec<RatVec> = (0..d)
        .map(|i| {
            let mut row: RatVec = cols
                .iter()
                .map(|c| BigRational::from_integer(c[i].clone()))
                .collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref(&m, k + 1);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    m = reduced;
    let mut x = vec![BigRational::zero(); k];
    for (row, &p) in m.iter().zip(&pivots) {
        x[p] = row[k].clone();
    }
    Some(x)
}
