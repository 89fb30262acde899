//! Exact polyhedral cones with both representations.
//!
//! A [`Cone`] stores
//! - `lineality`: a canonical basis of its largest linear subspace,
//! - `generators`: its extreme rays modulo lineality, projected onto the
//!   orthogonal complement of the lineality space,
//! - `equalities`: a canonical basis of the orthogonal complement of its span,
//! - `facets`: its facet normals modulo equalities, projected onto its span.
//!
//! All vectors are primitive integer vectors and every list is sorted, so two
//! cones are equal as point sets iff they compare equal. Dualizing swaps
//! generators with facets and lineality with equalities.

mod dd;
pub mod linalg;
mod lp;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    dot, dot_int_rat, fmt_int_vec, is_zero_vec, neg_vec, primitive_rat, to_rat, IntVec,
    RatVec,
};

/// Soft cap on the ambient dimension.
pub const DEFAULT_MAX_RANK: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("vector has length {got}, expected rank {expected}")]
    BadRank { expected: usize, got: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("zero vector in input")]
    ZeroVectorInput,
    #[error("cone has empty interior")]
    DegenerateInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Generators,
    Inequalities,
    Dualized,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cone {
    pub rank: usize,
    #[serde(with = "crate::arith::serde_exact::int_vecs")]
    pub generators: Vec<IntVec>,
    #[serde(with = "crate::arith::serde_exact::int_vecs")]
    pub lineality: Vec<IntVec>,
    #[serde(with = "crate::arith::serde_exact::int_vecs")]
    pub facets: Vec<IntVec>,
    #[serde(with = "crate::arith::serde_exact::int_vecs")]
    pub equalities: Vec<IntVec>,
    pub provenance: Provenance,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.generators == other.generators
            && self.lineality == other.lineality
            && self.facets == other.facets
            && self.equalities == other.equalities
    }
}

impl Eq for Cone {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Checkable evidence for a duality claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `x = sum generator_coeffs[i] * generators[i] + sum lineality_coeffs[j] * lineality[j]`
    /// with nonnegative generator coefficients.
    MembershipCombo {
        #[serde(with = "crate::arith::serde_exact::rat_vec")]
        generator_coeffs: RatVec,
        #[serde(with = "crate::arith::serde_exact::rat_vec")]
        lineality_coeffs: RatVec,
    },
    /// `<normal, .>` is nonnegative on the cone and negative on the query.
    SeparatingFunctional {
        #[serde(with = "crate::arith::serde_exact::int_vec")]
        normal: IntVec,
    },
    /// Nonnegative coefficients, not all zero, combining the given vectors to zero.
    GordanDual {
        #[serde(with = "crate::arith::serde_exact::rat_vec")]
        coeffs: RatVec,
    },
}

impl Certificate {
    /// Re-verifies a membership or separation certificate for `x` against `cone`.
    pub fn verify_membership(&self, cone: &Cone, x: &[BigRational]) -> bool {
        match self {
            Certificate::MembershipCombo {
                generator_coeffs,
                lineality_coeffs,
            } => {
                if generator_coeffs.len() != cone.generators.len()
                    || lineality_coeffs.len() != cone.lineality.len()
                    || generator_coeffs.iter().any(Signed::is_negative)
                {
                    return false;
                }
                let mut sum = vec![BigRational::zero(); cone.rank];
                let pairs = cone
                    .generators
                    .iter()
                    .zip(generator_coeffs)
                    .chain(cone.lineality.iter().zip(lineality_coeffs));
                for (v, c) in pairs {
                    for (s, vi) in sum.iter_mut().zip(v) {
                        *s += c * BigRational::from_integer(vi.clone());
                    }
                }
                sum == x
            }
            Certificate::SeparatingFunctional { normal } => {
                normal.len() == cone.rank
                    && dot_int_rat(normal, x).is_negative()
                    && cone.generators.iter().all(|g| !dot(normal, g).is_negative())
                    && cone.lineality.iter().all(|l| dot(normal, l).is_zero())
            }
            Certificate::GordanDual { .. } => false,
        }
    }

    /// Re-verifies a Gordan certificate against the vectors it combines.
    pub fn verify_gordan(&self, vecs: &[IntVec]) -> bool {
        let Certificate::GordanDual { coeffs } = self else {
            return false;
        };
        if coeffs.len() != vecs.len()
            || coeffs.iter().any(Signed::is_negative)
            || coeffs.iter().all(Zero::is_zero)
        {
            return false;
        }
        let d = vecs.first().map_or(0, Vec::len);
        (0..d).all(|i| {
            vecs.iter()
                .zip(coeffs)
                .fold(BigRational::zero(), |acc, (v, c)| {
                    acc + c * BigRational::from_integer(v[i].clone())
                })
                .is_zero()
        })
    }
}

/// Outcome of the strict-positivity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositivityResult {
    /// `<v, y> > 0` for every input vector.
    Witness(RatVec),
    /// A [`Certificate::GordanDual`] over the input vectors.
    Infeasible(Certificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OverlapVerdict {
    SharedInterior {
        #[serde(with = "crate::arith::serde_exact::rat_vec")]
        witness: RatVec,
    },
    DisjointInteriors {
        /// Facet normals of both cones; the certificate combines these to zero.
        #[serde(with = "crate::arith::serde_exact::int_vecs")]
        normals: Vec<IntVec>,
        certificate: Certificate,
    },
}

impl OverlapVerdict {
    pub fn is_shared(&self) -> bool {
        matches!(self, OverlapVerdict::SharedInterior { .. })
    }

    /// Re-checks the verdict against both cones with exact arithmetic.
    pub fn verify(&self, a: &Cone, b: &Cone) -> bool {
        match self {
            OverlapVerdict::SharedInterior { witness } => {
                witness.len() == a.rank && a.contains_interior(witness) && b.contains_interior(witness)
            }
            OverlapVerdict::DisjointInteriors {
                normals,
                certificate,
            } => {
                normals
                    .iter()
                    .all(|n| a.facets.contains(n) || b.facets.contains(n))
                    && certificate.verify_gordan(normals)
            }
        }
    }
}

fn check_rank(vecs: &[IntVec], d: usize) -> Result<(), ConeError> {
    match vecs.iter().find(|v| v.len() != d) {
        Some(v) => Err(ConeError::BadRank {
            expected: d,
            got: v.len(),
        }),
        None => Ok(()),
    }
}

/// Canonical (lineality basis, rays projected off it) for a DD output.
fn canonicalize(lineality: &[IntVec], rays: &[IntVec], d: usize) -> (Vec<IntVec>, Vec<IntVec>) {
    let basis = linalg::canonical_basis(lineality, d);
    let mut projected: Vec<IntVec> = rays
        .iter()
        .map(|r| linalg::project_out(r, &basis))
        .filter(|r| !is_zero_vec(r))
        .collect();
    projected.sort();
    projected.dedup();
    (basis, projected)
}

/// Lineality and extreme rays of `{x : <a, x> >= 0}` in canonical form.
fn solve_h(constraints: &[IntVec], d: usize) -> (Vec<IntVec>, Vec<IntVec>) {
    let out = dd::double_description(constraints, d);
    canonicalize(&out.lineality, &out.rays, d)
}

fn with_negations(rays: &[IntVec], lineality: &[IntVec]) -> Vec<IntVec> {
    rays.iter()
        .cloned()
        .chain(lineality.iter().cloned())
        .chain(lineality.iter().map(|l| neg_vec(l)))
        .collect()
}

/// The cone of nonnegative combinations of `vecs`.
pub fn cone_from_generators(vecs: &[IntVec], d: usize) -> Result<Cone, ConeError> {
    check_rank(vecs, d)?;
    let (equalities, facets) = solve_h(vecs, d);
    let (lineality, generators) = solve_h(&with_negations(&facets, &equalities), d);
    Ok(Cone {
        rank: d,
        generators,
        lineality,
        facets,
        equalities,
        provenance: Provenance::Generators,
    })
}

/// The cone `{x : <f, x> >= 0 for every f in normals}`.
pub fn cone_from_inequalities(normals: &[IntVec], d: usize) -> Result<Cone, ConeError> {
    check_rank(normals, d)?;
    let (lineality, generators) = solve_h(normals, d);
    let (equalities, facets) = solve_h(&with_negations(&generators, &lineality), d);
    Ok(Cone {
        rank: d,
        generators,
        lineality,
        facets,
        equalities,
        provenance: Provenance::Inequalities,
    })
}

/// The dual cone `{y : <y, x> >= 0 for all x in c}`.
pub fn dualize(c: &Cone) -> Cone {
    Cone {
        rank: c.rank,
        generators: c.facets.clone(),
        lineality: c.equalities.clone(),
        facets: c.generators.clone(),
        equalities: c.lineality.clone(),
        provenance: Provenance::Dualized,
    }
}

impl Cone {
    pub fn zero(d: usize) -> Cone {
        cone_from_generators(&[], d).expect("empty generator list has no rank errors")
    }

    pub fn whole_space(d: usize) -> Cone {
        cone_from_inequalities(&[], d).expect("empty inequality list has no rank errors")
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty() && self.lineality.is_empty()
    }

    pub fn is_whole_space(&self) -> bool {
        self.lineality.len() == self.rank
    }

    /// Nonempty interior in the ambient space.
    pub fn is_full_dimensional(&self) -> bool {
        self.equalities.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.rank - self.equalities.len()
    }

    /// The complete inequality description: facets plus both signs of every
    /// equality, sorted.
    pub fn inequality_normals(&self) -> Vec<IntVec> {
        let mut all = with_negations(&self.facets, &self.equalities);
        all.sort();
        all
    }

    /// Pairing of every inequality normal with `x`, in [`Self::inequality_normals`] order.
    pub fn pairings(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.inequality_normals()
            .iter()
            .map(|f| dot_int_rat(f, x))
            .collect()
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.pairings(x).iter().all(|p| !p.is_negative())
    }

    pub fn contains_interior(&self, x: &[BigRational]) -> bool {
        self.pairings(x).iter().all(Signed::is_positive)
    }

    /// Whether `other` is a subset of this cone.
    pub fn contains_cone(&self, other: &Cone) -> bool {
        self.rank == other.rank
            && other.generators.iter().all(|g| self.contains(&to_rat(g)))
            && other
                .lineality
                .iter()
                .all(|l| self.contains(&to_rat(l)) && self.contains(&to_rat(&neg_vec(l))))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[IntVec]| -> String {
            let parts: Vec<String> = v.iter().map(|x| fmt_int_vec(x)).collect();
            format!("{{{}}}", parts.join(", "))
        };
        write!(
            f,
            "rank {}: generators {} lineality {} facets {} equalities {}",
            self.rank,
            list(&self.generators),
            list(&self.lineality),
            list(&self.facets),
            list(&self.equalities)
        )
    }
}

/// Classifies `x` against `c` and returns a certificate for the verdict.
pub fn membership(c: &Cone, x: &[BigRational]) -> Result<(Membership, Certificate), ConeError> {
    if x.len() != c.rank {
        return Err(ConeError::BadRank {
            expected: c.rank,
            got: x.len(),
        });
    }
    let normals = c.inequality_normals();
    let pairings: Vec<BigRational> = normals.iter().map(|f| dot_int_rat(f, x)).collect();
    if let Some(i) = pairings.iter().position(Signed::is_negative) {
        return Ok((
            Membership::Outside,
            Certificate::SeparatingFunctional {
                normal: normals[i].clone(),
            },
        ));
    }
    let verdict = if pairings.iter().all(Signed::is_positive) {
        Membership::Interior
    } else {
        Membership::Boundary
    };
    let columns: Vec<RatVec> = with_negations(&c.generators, &c.lineality)
        .iter()
        .map(|v| to_rat(v))
        .collect();
    let lambda = lp::nonneg_solve(&columns, x).expect("point satisfying every inequality is a combination");
    let k = c.generators.len();
    let l = c.lineality.len();
    let generator_coeffs = lambda[..k].to_vec();
    let lineality_coeffs = (0..l)
        .map(|j| &lambda[k + j] - &lambda[k + l + j])
        .collect();
    Ok((
        verdict,
        Certificate::MembershipCombo {
            generator_coeffs,
            lineality_coeffs,
        },
    ))
}

/// Gordan alternative: either some `y` is strictly positive on every vector,
/// or a nonnegative nonzero combination of the vectors vanishes.
pub fn strictly_positive_functional(vecs: &[IntVec], d: usize) -> Result<PositivityResult, ConeError> {
    check_rank(vecs, d)?;
    if vecs.iter().any(|v| is_zero_vec(v)) {
        return Err(ConeError::ZeroVectorInput);
    }
    let cone = cone_from_generators(vecs, d)?;
    if cone.is_pointed() {
        // the sum of the facet normals is positive off the (trivial) lineality
        let mut y = vec![BigInt::zero(); d];
        for f in &cone.facets {
            for (yi, fi) in y.iter_mut().zip(f) {
                *yi += fi;
            }
        }
        let witness: RatVec = to_rat(&y);
        debug_assert!(vecs.iter().all(|v| dot_int_rat(v, &witness).is_positive()));
        return Ok(PositivityResult::Witness(witness));
    }
    let mut columns: Vec<RatVec> = vecs.iter().map(|v| to_rat(v)).collect();
    for c in columns.iter_mut() {
        c.push(BigRational::from_integer(BigInt::from(1)));
    }
    let mut target = vec![BigRational::zero(); d];
    target.push(BigRational::from_integer(BigInt::from(1)));
    let coeffs = lp::nonneg_solve(&columns, &target).expect("a cone with lineality has a vanishing combination");
    Ok(PositivityResult::Infeasible(Certificate::GordanDual { coeffs }))
}

/// Decides whether two full-dimensional cones share interior points.
pub fn interiors_overlap(a: &Cone, b: &Cone) -> Result<OverlapVerdict, ConeError> {
    if a.rank != b.rank {
        return Err(ConeError::RankMismatch(a.rank, b.rank));
    }
    if !a.is_full_dimensional() || !b.is_full_dimensional() {
        return Err(ConeError::DegenerateInput);
    }
    let normals: Vec<IntVec> = a.facets.iter().chain(&b.facets).cloned().collect();
    match strictly_positive_functional(&normals, a.rank)? {
        PositivityResult::Witness(witness) => Ok(OverlapVerdict::SharedInterior { witness }),
        PositivityResult::Infeasible(certificate) => Ok(OverlapVerdict::DisjointInteriors {
            normals,
            certificate,
        }),
    }
}

/// Reduces a rational vector to its primitive integer representative.
pub fn primitive_representative(x: &[BigRational]) -> IntVec {
    primitive_rat(x)
}

/// The nonnegative orthant of the given rank.
pub fn orthant(d: usize) -> Cone {
    let gens: Vec<IntVec> = (0..d).map(|i| crate::arith::unit_vec(d, i)).collect();
    cone_from_generators(&gens, d).expect("unit vectors have the right rank")
}
