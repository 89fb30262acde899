//! Homology cone of a Markov system, its dual foliation cone, ray
//! classification, disk-decomposition subcones, and cone families.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{dot, is_zero_vec, primitive_int, to_rat, IntVec, RatVec};
use crate::cone::{
    self, cone_from_generators, dualize, interiors_overlap, membership, Certificate, Cone,
    ConeError, Membership, OverlapVerdict, PositivityResult,
};
use crate::markov::{minimal_loops, MarkovSystem, MinimalLoop};

/// Default max-norm bound for facet lattice scans.
pub const DEFAULT_FACET_HEIGHT: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoliationError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("no cohomology class is positive on every minimal loop")]
    NoTransverseClass { certificate: Certificate, classes: Vec<IntVec> },
    #[error("the zero vector is not a ray of this cone")]
    ZeroVector,
    #[error("facet index {index} out of range ({count} facets)")]
    BadFacet { index: usize, count: usize },
    #[error("height must be at least 1")]
    BadHeight,
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
}

/// One facet of the foliation cone: the inequality `<class, x> >= 0` of the
/// minimal loops whose classes are positive multiples of `normal`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetEntry {
    #[serde(with = "crate::arith::serde_exact::int_vec")]
    pub normal: IntVec,
    pub loops: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoliationConeReport {
    pub system: String,
    pub letters: Vec<String>,
    pub loops: Vec<MinimalLoop>,
    pub homology_cone: Cone,
    pub foliation_cone: Cone,
    #[serde(with = "crate::arith::serde_exact::rat_vec")]
    pub salience_witness: RatVec,
    pub facets: Vec<FacetEntry>,
}

impl FoliationConeReport {
    pub fn rank(&self) -> usize {
        self.foliation_cone.rank
    }

    pub fn loop_classes(&self) -> Vec<IntVec> {
        self.loops.iter().map(|l| l.class.to_int_vec()).collect()
    }

    /// Human-readable rendering of a loop word.
    pub fn word_names(&self, word: &[usize]) -> String {
        let names: Vec<&str> = word.iter().map(|&i| self.letters[i].as_str()).collect();
        format!("({})", names.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RayVerdict {
    ProperFoliatedRay,
    BoundaryRay,
    OutsideRay,
    DegenerateProductRay,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayClassification {
    #[serde(with = "crate::arith::serde_exact::rat_vec")]
    pub input: RatVec,
    #[serde(with = "crate::arith::serde_exact::int_vec")]
    pub primitive: IntVec,
    pub verdict: RayVerdict,
    pub certificate: Certificate,
    /// `<class(loop_i), primitive>` for every minimal loop, in loop order.
    #[serde(with = "crate::arith::serde_exact::int_vec")]
    pub pairings: IntVec,
}

/// Expression of the minimal-loop classes in the basis dual to the disks:
/// `rows[i][j]` is the pairing of loop `i` with disk `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskBasis {
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
}

impl DiskBasis {
    /// The supported mode: the ambient basis is the disk-dual basis, so each
    /// row is the loop class itself.
    pub fn from_system(system: &MarkovSystem) -> DiskBasis {
        DiskBasis {
            n: system.rank(),
            rows: minimal_loops(system).into_iter().map(|l| l.class.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DiskVerdict {
    /// Every loop pairs nonnegatively with every disk: the orthant is a subcone.
    Subcone,
    /// Loop `loop_index` has a negative coordinate in column `column` (0-based).
    NotSubcone { loop_index: usize, column: usize, value: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFamilyReport {
    pub reports: Vec<FoliationConeReport>,
    /// `overlaps[i][j]` compares the foliation cones of systems `i` and `j`.
    pub overlaps: Vec<Vec<OverlapVerdict>>,
    /// Off-diagonal pairs with shared interior but different cones.
    pub violations: Vec<(usize, usize)>,
    /// Off-diagonal pairs whose cones coincide.
    pub coincident: Vec<(usize, usize)>,
}

/// Cone spanned by the minimal-loop classes.
pub fn homology_cone(system: &MarkovSystem) -> Cone {
    let classes: Vec<IntVec> = minimal_loops(system)
        .iter()
        .map(|l| l.class.to_int_vec())
        .collect();
    cone_from_generators(&classes, system.rank()).expect("loop classes have the system rank")
}

/// Dual of the homology cone, with a class positive on every minimal loop.
pub fn foliation_cone(system: &MarkovSystem) -> Result<FoliationConeReport, FoliationError> {
    let loops = minimal_loops(system);
    let classes: Vec<IntVec> = loops.iter().map(|l| l.class.to_int_vec()).collect();
    let d = system.rank();
    let salience_witness = match cone::strictly_positive_functional(&classes, d)? {
        PositivityResult::Witness(y) => y,
        PositivityResult::Infeasible(certificate) => {
            return Err(FoliationError::NoTransverseClass { certificate, classes });
        }
    };
    let homology = cone_from_generators(&classes, d)?;
    let fol = dualize(&homology);
    let facets = fol
        .facets
        .iter()
        .map(|normal| FacetEntry {
            normal: normal.clone(),
            loops: classes
                .iter()
                .enumerate()
                .filter(|(_, c)| &primitive_int(c) == normal)
                .map(|(i, _)| i)
                .collect(),
        })
        .collect();
    Ok(FoliationConeReport {
        system: system.name().to_string(),
        letters: system.letters().iter().map(|l| l.name.clone()).collect(),
        loops,
        homology_cone: homology,
        foliation_cone: fol,
        salience_witness,
        facets,
    })
}

/// Classifies the rational ray through `x` against the foliation cone.
pub fn classify_ray(
    report: &FoliationConeReport,
    x: &[BigRational],
) -> Result<RayClassification, FoliationError> {
    let fol = &report.foliation_cone;
    if x.len() != fol.rank {
        return Err(ConeError::BadRank {
            expected: fol.rank,
            got: x.len(),
        }
        .into());
    }
    let primitive = cone::primitive_representative(x);
    let zero = is_zero_vec(&primitive);
    if zero && !fol.is_whole_space() {
        return Err(FoliationError::ZeroVector);
    }
    let (member, certificate) = membership(fol, &to_rat(&primitive))?;
    let pairings: IntVec = report
        .loop_classes()
        .iter()
        .map(|c| dot(c, &primitive))
        .collect();
    let verdict = match member {
        Membership::Interior if zero => RayVerdict::DegenerateProductRay,
        Membership::Interior => RayVerdict::ProperFoliatedRay,
        Membership::Boundary => RayVerdict::BoundaryRay,
        Membership::Outside => RayVerdict::OutsideRay,
    };
    Ok(RayClassification {
        input: x.to_vec(),
        primitive,
        verdict,
        certificate,
        pairings,
    })
}

/// Convenience wrapper: builds the foliation cone and classifies `x`.
pub fn classify_ray_in(
    system: &MarkovSystem,
    x: &[BigRational],
) -> Result<RayClassification, FoliationError> {
    classify_ray(&foliation_cone(system)?, x)
}

/// Simplicial cone spanned by `n` disk classes in their own dual basis.
pub fn disk_decomposition_cone(n: usize) -> Cone {
    cone::orthant(n)
}

/// Checks that the disk orthant lies in the foliation cone, i.e. every loop
/// pairs nonnegatively with every disk.
pub fn verify_disk_subcone(
    system: &MarkovSystem,
    basis: &DiskBasis,
) -> Result<DiskVerdict, FoliationError> {
    let loops = minimal_loops(system);
    if basis.n != system.rank() {
        return Err(FoliationError::RankMismatch(format!(
            "{} disks for rank {}",
            basis.n,
            system.rank()
        )));
    }
    if basis.rows.len() != loops.len() {
        return Err(FoliationError::RankMismatch(format!(
            "{} rows for {} minimal loops",
            basis.rows.len(),
            loops.len()
        )));
    }
    for (i, row) in basis.rows.iter().enumerate() {
        if row.len() != basis.n {
            return Err(FoliationError::RankMismatch(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                basis.n
            )));
        }
        if let Some(column) = row.iter().position(|&v| v < 0) {
            return Ok(DiskVerdict::NotSubcone {
                loop_index: i,
                column,
                value: row[column],
            });
        }
    }
    Ok(DiskVerdict::Subcone)
}

/// Pairwise interior-overlap verdicts for the foliation cones of a family.
pub fn family_report(systems: &[MarkovSystem]) -> Result<ConeFamilyReport, FoliationError> {
    if let Some(first) = systems.first() {
        if let Some(bad) = systems.iter().find(|s| s.rank() != first.rank()) {
            return Err(FoliationError::RankMismatch(format!(
                "{} has rank {}, {} has rank {}",
                first.name(),
                first.rank(),
                bad.name(),
                bad.rank()
            )));
        }
    }
    let reports = systems
        .iter()
        .map(foliation_cone)
        .collect::<Result<Vec<_>, _>>()?;
    let n = reports.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j)| interiors_overlap(&reports[i].foliation_cone, &reports[j].foliation_cone))
        .collect::<Result<Vec<_>, _>>()?;

    let mut overlaps: Vec<Vec<Option<OverlapVerdict>>> = vec![vec![None; n]; n];
    for (&(i, j), v) in pairs.iter().zip(verdicts) {
        overlaps[j][i] = Some(v.clone());
        overlaps[i][j] = Some(v);
    }
    let overlaps: Vec<Vec<OverlapVerdict>> = overlaps
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.expect("every pair evaluated")).collect())
        .collect();

    let mut violations = Vec::new();
    let mut coincident = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if overlaps[i][j].is_shared() {
                if reports[i].foliation_cone == reports[j].foliation_cone {
                    coincident.push((i, j));
                } else {
                    violations.push((i, j));
                }
            }
        }
    }
    Ok(ConeFamilyReport {
        reports,
        overlaps,
        violations,
        coincident,
    })
}

/// Primitive lattice vectors of max-norm at most `height` in the relative
/// interior of facet `facet_index`: pairing zero with the loops defining the
/// facet and positive with every other minimal loop.
pub fn facet_lattice_rays(
    report: &FoliationConeReport,
    facet_index: usize,
    height: u32,
) -> Result<Vec<IntVec>, FoliationError> {
    if height < 1 {
        return Err(FoliationError::BadHeight);
    }
    let facet = report.facets.get(facet_index).ok_or(FoliationError::BadFacet {
        index: facet_index,
        count: report.facets.len(),
    })?;
    let on_facet: BTreeSet<usize> = facet.loops.iter().copied().collect();
    let classes: Vec<Vec<i64>> = report.loops.iter().map(|l| l.class.0.clone()).collect();
    let d = report.rank();
    let h = height as i64;
    let mut out = Vec::new();
    let mut x = vec![-h; d];
    loop {
        let g = x.iter().fold(0i64, |g, &c| gcd(g, c));
        if g == 1 {
            let ok = classes.iter().enumerate().all(|(i, c)| {
                let p: i64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
                if on_facet.contains(&i) {
                    p == 0
                } else {
                    p > 0
                }
            });
            if ok {
                out.push(crate::arith::int_vec(&x));
            }
        }
        // odometer over the box [-h, h]^d
        let mut k = 0;
        while k < d && x[k] == h {
            x[k] = -h;
            k += 1;
        }
        if k == d {
            break;
        }
        x[k] += 1;
    }
    out.sort();
    Ok(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// For every subset of the loops, the cone cut out by that subset contains
/// the foliation cone. Exhaustive over subsets; intended for small systems.
pub fn check_maximality(report: &FoliationConeReport) -> bool {
    let classes = report.loop_classes();
    let r = classes.len().min(16);
    (0u32..(1 << r)).all(|mask| {
        let subset: Vec<IntVec> = (0..r)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| classes[i].clone())
            .collect();
        let hull = cone_from_generators(&subset, report.rank()).expect("rank checked");
        dualize(&hull).contains_cone(&report.foliation_cone)
    })
}

/// Duality consistency: every foliation-cone generator pairs nonnegatively
/// with every loop class, and the salience witness pairs positively.
pub fn check_duality(report: &FoliationConeReport) -> bool {
    let classes = report.loop_classes();
    let gens_ok = report
        .foliation_cone
        .generators
        .iter()
        .all(|g| classes.iter().all(|c| !dot(c, g).is_negative()));
    let lin_ok = report
        .foliation_cone
        .lineality
        .iter()
        .all(|l| classes.iter().all(|c| dot(c, l).is_zero()));
    let witness_ok = classes
        .iter()
        .all(|c| crate::arith::dot_int_rat(c, &report.salience_witness).is_positive());
    gens_ok && lin_ok && witness_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int_vec, rat_vec};
    use crate::fixtures;

    fn vs(rows: &[&[i64]]) -> Vec<IntVec> {
        rows.iter().map(|r| int_vec(r)).collect()
    }

    #[test]
    fn homology_cones() {
        assert_eq!(homology_cone(&fixtures::gm()).generators, vs(&[&[1, 0], &[1, 1]]));
        let ray = homology_cone(&fixtures::self_loop());
        assert_eq!(ray.generators, vs(&[&[1, 0]]));
        assert_eq!(ray.dimension(), 1);
        assert!(homology_cone(&fixtures::product(2)).is_zero());
    }

    #[test]
    fn gm_foliation_cone() {
        let r = foliation_cone(&fixtures::gm()).unwrap();
        assert_eq!(r.foliation_cone.generators, vs(&[&[0, 1], &[1, -1]]));
        assert_eq!(r.foliation_cone.facets, vs(&[&[1, 0], &[1, 1]]));
        assert_eq!(r.facets[0].loops, vec![0]);
        assert_eq!(r.facets[1].loops, vec![1]);
        assert!(check_duality(&r));
        assert!(check_maximality(&r));
    }

    #[test]
    fn half_space_and_whole_space() {
        let r = foliation_cone(&fixtures::self_loop()).unwrap();
        assert_eq!(r.foliation_cone.lineality, vs(&[&[0, 1]]));
        assert_eq!(r.foliation_cone.facets, vs(&[&[1, 0]]));
        let p = foliation_cone(&fixtures::product(2)).unwrap();
        assert!(p.foliation_cone.is_whole_space());
        assert!(p.facets.is_empty());
    }

    #[test]
    fn gordan_pair_has_no_transverse_class() {
        match foliation_cone(&fixtures::gordan_pair()) {
            Err(FoliationError::NoTransverseClass { certificate, classes }) => {
                assert!(certificate.verify_gordan(&classes));
            }
            other => panic!("expected NoTransverseClass, got {other:?}"),
        }
    }

    #[test]
    fn gm_rays() {
        let r = foliation_cone(&fixtures::gm()).unwrap();
        let c = classify_ray(&r, &rat_vec(&[2, 2])).unwrap();
        assert_eq!(c.primitive, int_vec(&[1, 1]));
        assert_eq!(c.verdict, RayVerdict::ProperFoliatedRay);
        assert_eq!(c.pairings, int_vec(&[1, 2]));
        let c = classify_ray(&r, &rat_vec(&[1, -1])).unwrap();
        assert_eq!(c.verdict, RayVerdict::BoundaryRay);
        assert_eq!(c.pairings, int_vec(&[1, 0]));
        let c = classify_ray(&r, &rat_vec(&[-1, 0])).unwrap();
        assert_eq!(c.verdict, RayVerdict::OutsideRay);
        assert!(c.certificate.verify_membership(&r.foliation_cone, &to_rat(&c.primitive)));
        assert_eq!(classify_ray(&r, &rat_vec(&[0, 0])), Err(FoliationError::ZeroVector));
        assert!(classify_ray(&r, &rat_vec(&[1])).is_err());
    }

    #[test]
    fn product_zero_ray() {
        let c = classify_ray_in(&fixtures::product(2), &rat_vec(&[0, 0])).unwrap();
        assert_eq!(c.verdict, RayVerdict::DegenerateProductRay);
        let c = classify_ray_in(&fixtures::product(2), &rat_vec(&[3, -1])).unwrap();
        assert_eq!(c.verdict, RayVerdict::ProperFoliatedRay);
    }

    #[test]
    fn disk_cones() {
        let c = disk_decomposition_cone(2);
        assert_eq!(c.generators, vs(&[&[0, 1], &[1, 0]]));
        assert_eq!(c.facets, vs(&[&[0, 1], &[1, 0]]));
        assert_eq!(disk_decomposition_cone(1).generators, vs(&[&[1]]));
        assert_eq!(disk_decomposition_cone(3).facets.len(), 3);
    }

    #[test]
    fn disk_subcone_checks() {
        let gm = fixtures::gm();
        assert_eq!(
            verify_disk_subcone(&gm, &DiskBasis::from_system(&gm)).unwrap(),
            DiskVerdict::Subcone
        );
        let bad = DiskBasis {
            n: 2,
            rows: vec![vec![1, 0], vec![1, -1]],
        };
        assert_eq!(
            verify_disk_subcone(&gm, &bad).unwrap(),
            DiskVerdict::NotSubcone {
                loop_index: 1,
                column: 1,
                value: -1
            }
        );
        let p = fixtures::product(2);
        assert_eq!(
            verify_disk_subcone(&p, &DiskBasis::from_system(&p)).unwrap(),
            DiskVerdict::Subcone
        );
        let short = DiskBasis { n: 3, rows: vec![] };
        assert!(matches!(
            verify_disk_subcone(&p, &short),
            Err(FoliationError::RankMismatch(_))
        ));
    }

    #[test]
    fn families() {
        let gm = fixtures::gm();
        let solo = family_report(std::slice::from_ref(&gm)).unwrap();
        assert!(solo.overlaps[0][0].is_shared());
        let pair = family_report(&[gm.clone(), fixtures::gm_negated()]).unwrap();
        assert!(!pair.overlaps[0][1].is_shared());
        assert!(pair.overlaps[0][1].verify(
            &pair.reports[0].foliation_cone,
            &pair.reports[1].foliation_cone
        ));
        assert_eq!(pair.overlaps[0][1], pair.overlaps[1][0]);
        assert!(pair.violations.is_empty());
        let dup = family_report(&[gm.clone(), gm]).unwrap();
        assert!(dup.overlaps[0][1].is_shared());
        assert_eq!(dup.coincident, vec![(0, 1)]);
        assert!(dup.violations.is_empty());
        assert!(matches!(
            family_report(&[fixtures::gm(), fixtures::three_cycle()]),
            Err(FoliationError::RankMismatch(_))
        ));
    }

    #[test]
    fn gm_facet_rays() {
        let r = foliation_cone(&fixtures::gm()).unwrap();
        assert_eq!(facet_lattice_rays(&r, 0, 3).unwrap(), vs(&[&[0, 1]]));
        assert_eq!(facet_lattice_rays(&r, 1, 3).unwrap(), vs(&[&[1, -1]]));
        assert_eq!(facet_lattice_rays(&r, 0, 0), Err(FoliationError::BadHeight));
        assert!(matches!(
            facet_lattice_rays(&r, 2, 3),
            Err(FoliationError::BadFacet { .. })
        ));
    }

    #[test]
    fn three_dimensional_facets_are_dense() {
        // orthant in rank 3: each facet is a 2D wedge with many rays
        let r = foliation_cone(&fixtures::three_self_loops()).unwrap();
        for i in 0..r.facets.len() {
            let rays = facet_lattice_rays(&r, i, 6).unwrap();
            assert!(rays.len() >= 10, "facet {i}: {} rays", rays.len());
        }
    }
}
