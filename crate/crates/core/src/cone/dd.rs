//! Double description: extreme rays and lineality of `{x : <a, x> >= 0}`.
//!
//! Starts from the whole space (lineality = identity) and intersects with one
//! half-space per constraint. While the constraint is not orthogonal to the
//! current lineality space, one lineality direction is turned into a ray;
//! otherwise the rays are split by sign and adjacent pairs across the
//! hyperplane are combined. Adjacency is decided combinatorially from zero
//! sets, which is exact because every ray list is irredundant.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{dot, is_zero_vec, primitive_int, IntVec};

#[derive(Debug, Clone)]
struct Ray {
    coords: IntVec,
    zeros: ZeroSet,
}

/// Bit set over constraint indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(m: usize) -> Self {
        ZeroSet(vec![0; m.div_ceil(64).max(1)])
    }

    fn full(m: usize, upto: usize) -> Self {
        let mut s = Self::new(m);
        for i in 0..upto {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &Self) -> Self {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Output of a double-description run, not yet canonicalized.
pub(crate) struct DdOutput {
    pub lineality: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

/// Computes lineality and extreme rays of `{x in Q^d : <a, x> >= 0 for all a}`.
/// Constraints are processed in sorted order; zero constraints are ignored.
pub(crate) fn double_description(constraints: &[IntVec], d: usize) -> DdOutput {
    let mut rows: Vec<IntVec> = constraints
        .iter()
        .filter(|a| !is_zero_vec(a))
        .map(|a| primitive_int(a))
        .collect();
    rows.sort();
    rows.dedup();
    let m = rows.len();

    let mut lineality: Vec<IntVec> = (0..d).map(|i| crate::arith::unit_vec(d, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in rows.iter().enumerate() {
        let pivot = lineality
            .iter()
            .position(|l| !dot(a, l).is_zero());
        if let Some(p) = pivot {
            let mut l0 = lineality.swap_remove(p);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let s = dot(a, l);
                if !s.is_zero() {
                    *l = primitive_int(&combine(&s0, l, &s, &l0));
                }
            }
            for r in rays.iter_mut() {
                let s = dot(a, &r.coords);
                if !s.is_zero() {
                    r.coords = primitive_int(&combine(&s0, &r.coords, &s, &l0));
                }
                r.zeros.insert(k);
            }
            rays.push(Ray {
                coords: l0,
                zeros: ZeroSet::full(m, k),
            });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.coords)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if minus.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }

        let mut next: Vec<Ray> = Vec::new();
        for &i in &plus {
            let pi = &rays[i];
            for &j in &minus {
                let nj = &rays[j];
                let common = pi.zeros.intersect(&nj.zeros);
                let adjacent = (0..rays.len())
                    .filter(|&t| t != i && t != j)
                    .all(|t| !common.is_subset(&rays[t].zeros));
                if !adjacent {
                    continue;
                }
                // <a, new> = v_i * v_j - v_j * v_i = 0 with positive weights
                let coords = primitive_int(&combine(&values[i], &nj.coords, &values[j], &pi.coords));
                let mut zeros = common;
                zeros.insert(k);
                next.push(Ray { coords, zeros });
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if values[i].is_positive() {
                next.push(r.clone());
            } else if values[i].is_zero() {
                let mut r = r.clone();
                r.zeros.insert(k);
                next.push(r);
            }
        }
        rays = next;
    }

    DdOutput {
        lineality,
        rays: rays.into_iter().map(|r| r.coords).collect(),
    }
}

/// `s0 * v - s * w`.
fn combine(s0: &BigInt, v: &[BigInt], s: &BigInt, w: &[BigInt]) -> IntVec {
    v.iter().zip(w).map(|(x, y)| s0 * x - s * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int_vec;

    fn sorted(mut v: Vec<IntVec>) -> Vec<IntVec> {
        v.sort();
        v
    }

    #[test]
    fn quadrant() {
        let out = double_description(&[int_vec(&[1, 0]), int_vec(&[0, 1])], 2);
        assert!(out.lineality.is_empty());
        assert_eq!(sorted(out.rays), vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn wedge_with_pairing() {
        let out = double_description(&[int_vec(&[1, 0]), int_vec(&[1, 1])], 2);
        assert!(out.lineality.is_empty());
        assert_eq!(sorted(out.rays), vec![int_vec(&[0, 1]), int_vec(&[1, -1])]);
    }

    #[test]
    fn square_pyramid() {
        // cone over the square [-1,1]^2 at height 1
        let rows = [
            int_vec(&[1, 0, 1]),
            int_vec(&[-1, 0, 1]),
            int_vec(&[0, 1, 1]),
            int_vec(&[0, -1, 1]),
        ];
        let out = double_description(&rows, 3);
        assert!(out.lineality.is_empty());
        assert_eq!(
            sorted(out.rays),
            vec![
                int_vec(&[-1, -1, 1]),
                int_vec(&[-1, 1, 1]),
                int_vec(&[1, -1, 1]),
                int_vec(&[1, 1, 1]),
            ]
        );
    }

    #[test]
    fn empty_constraints_whole_space() {
        let out = double_description(&[], 3);
        assert_eq!(out.lineality.len(), 3);
        assert!(out.rays.is_empty());
    }

    #[test]
    fn opposite_constraints_give_hyperplane() {
        let out = double_description(&[int_vec(&[1, 0]), int_vec(&[-1, 0])], 2);
        assert_eq!(out.lineality.len(), 1);
        assert!(out.rays.is_empty());
    }
}
