//! Kleiman-Mori cone computations for the standard rational-surface
//! examples.
//!
//! - exact extremality certificates over finite ray samples (rational
//!   linear feasibility, no floating point);
//! - the cone of a Hirzebruch surface `F_n`: the fibre and the section of
//!   self-intersection `-n`;
//! - the blow-up of the plane at three collinear points: four extremal rays
//!   spanned by the strict transform of the line and the three exceptional
//!   curves, with the Diophantine exclusions that rule out further negative
//!   or K-trivial classes;
//! - enumeration of all (-1)-classes on the blow-up at `n <= 8` general
//!   points (the degree of the image in the plane is at most 3 for
//!   `n <= 7`; for `n = 8` every (-1)-curve sits inside a bianticanonical
//!   sextic with eight double points, so its degree is at most 6);
//! - the nef-cone membership test on a product of two elliptic curves in
//!   the basis (fibre, fibre, diagonal) with its determinant-2 pairing.

use serde::Serialize;
use thiserror::Error;

use crate::cremona::{reduce_to_exceptional, CremonaError};
use crate::exact::nonneg_combination;
use crate::lattice::{canonical_class, DivisorClass};
use crate::par;
use crate::points::{PointConfig, PointId};

/// Errors from cone computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("extremality test requires C^2 < 0, got {0}")]
    NonNegativeSquare(i64),
    #[error("point count must lie in 1..=8, got {0}")]
    PointCountOutOfRange(usize),
    #[error(transparent)]
    Cremona(#[from] CremonaError),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

/// A finitely generated cone of curve classes on a blown-up plane.
#[derive(Debug, Clone, Serialize)]
pub struct ConeDescription {
    pub rays: Vec<DivisorClass>,
    pub polyhedral: bool,
}

/// Certifies over the finite `sample` that the negative curve `c` spans an
/// extremal ray: `c` must not be a non-negative rational combination of the
/// other sample classes.
pub fn neg_curve_is_extremal(
    c: &DivisorClass,
    sample: &[DivisorClass],
) -> Result<bool, ConeError> {
    let sq = c.self_intersection();
    if sq >= 0 {
        return Err(ConeError::NonNegativeSquare(sq));
    }
    let generators: Vec<Vec<i64>> = sample
        .iter()
        .filter(|r| *r != c)
        .map(|r| r.coordinates())
        .collect();
    Ok(!nonneg_combination(&generators, &c.coordinates()))
}

/// The cone of the Hirzebruch surface `F_n` in its intrinsic rank-2 lattice
/// with basis (fibre, section): `f^2 = 0`, `s^2 = -n`, `f.s = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HirzebruchCone {
    pub n: i64,
    /// Ray generators as `(fibre, section)` coordinates.
    pub rays: [ScrollClass; 2],
    pub polyhedral: bool,
}

/// A class `a f + b s` on `F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScrollClass {
    pub fibre: i64,
    pub section: i64,
}

impl ScrollClass {
    pub fn intersect(&self, other: &ScrollClass, n: i64) -> i64 {
        // (a f + b s).(a' f + b' s) = a b' + a' b - n b b'
        self.fibre * other.section + other.fibre * self.section
            - n * self.section * other.section
    }

    pub fn self_intersection(&self, n: i64) -> i64 {
        self.intersect(self, n)
    }
}

/// The Kleiman-Mori cone of `F_n`: the fibre and the section with
/// self-intersection `-n` (for `n = 0`, the two rulings).
pub fn hirzebruch_cone(n: i64) -> HirzebruchCone {
    assert!(n >= 0, "F_n requires n >= 0");
    HirzebruchCone {
        n,
        rays: [
            ScrollClass { fibre: 1, section: 0 },
            ScrollClass { fibre: 0, section: 1 },
        ],
        polyhedral: true,
    }
}

/// Report of the three-collinear-points example.
#[derive(Debug, Clone, Serialize)]
pub struct CollinearBlowupReport {
    pub cone: ConeDescription,
    /// `(-K)^2` of the surface.
    pub anticanonical_square: i64,
    /// `-K . R` for each ray, all non-negative.
    pub anticanonical_degrees: Vec<i64>,
    /// The line transform is the unique ray with `C . K = 0`.
    pub k_trivial_ray_unique: bool,
    /// No further irreducible K-trivial class exists up to the bound.
    pub no_other_k_trivial: bool,
    /// No (-1)-class other than the three exceptional ones exists up to the
    /// bound.
    pub no_other_minus_one: bool,
    /// Each ray is extremal against the full ray sample.
    pub rays_extremal: bool,
}

/// The blow-up of the plane at three collinear points: the cone is spanned
/// by the strict transform `C = (1; 1,1,1)` of the line (`C^2 = -2`,
/// `C.K = 0`) and the three exceptional curves.
///
/// Besides listing the rays, the report verifies `(-K)^2 = 6`, nefness of
/// `-K` on the rays, and the arithmetic exclusions: a class
/// `(d; m_1, m_2, m_3)` with `0 <= C.D <= 1` cannot satisfy
/// `3d - sum m = 0` (K-trivial) or `= 1` ((-1)-class) for `d >= 1` within
/// the search bound.
pub fn collinear_blowup_cone() -> CollinearBlowupReport {
    let config = PointConfig::new(
        (0..3).map(|i| crate::points::PointNode::proper(PointId(i))).collect(),
        vec![[PointId(0), PointId(1), PointId(2)]],
    )
    .expect("three collinear proper points are valid");
    let line_transform = DivisorClass::over(&config, 1, vec![1, 1, 1]).unwrap();
    let rays = vec![
        line_transform.clone(),
        DivisorClass::exceptional(&config, 0),
        DivisorClass::exceptional(&config, 1),
        DivisorClass::exceptional(&config, 2),
    ];
    let k = canonical_class(&config);
    let anticanonical_square = k.dot(&k);
    let anticanonical_degrees: Vec<i64> = rays.iter().map(|r| -k.dot(r)).collect();
    let k_trivial_ray_unique = rays
        .iter()
        .filter(|r| k.dot(r) == 0)
        .collect::<Vec<_>>()
        == vec![&line_transform];

    // arithmetic exclusions within degree bound 12: any irreducible class
    // meeting the contracted line in 0 or 1 points satisfies
    // 0 <= d - sum m <= 1, which is incompatible with 3d - sum m = 0 and
    // with 3d - sum m = 1 as soon as d >= 1
    let bound = 12i64;
    let mut no_other_k_trivial = true;
    let mut no_other_minus_one = true;
    for d in 1..=bound {
        for m1 in 0..=d {
            for m2 in 0..=d {
                for m3 in 0..=d {
                    let sum = m1 + m2 + m3;
                    let meets_line = d - sum;
                    if !(0..=1).contains(&meets_line) {
                        continue;
                    }
                    if 3 * d - sum == 0 {
                        no_other_k_trivial = false;
                    }
                    if 3 * d - sum == 1 {
                        no_other_minus_one = false;
                    }
                }
            }
        }
    }

    let rays_extremal = rays
        .iter()
        .all(|r| neg_curve_is_extremal(r, &rays).unwrap_or(false));

    CollinearBlowupReport {
        cone: ConeDescription {
            rays,
            polyhedral: true,
        },
        anticanonical_square,
        anticanonical_degrees,
        k_trivial_ray_unique,
        no_other_k_trivial,
        no_other_minus_one,
        rays_extremal,
    }
}

/// Degree bound for (-1)-classes on `n <= 8` general points.
fn minus_one_degree_bound(n: usize) -> i64 {
    if n <= 7 {
        3
    } else {
        6
    }
}

/// Non-increasing multiplicity vectors of length `n` with the prescribed
/// sum and sum of squares.
fn multiplicity_solutions(n: usize, deg: i64, sum: i64, sq: i64) -> Vec<Vec<i64>> {
    fn rec(
        out: &mut Vec<Vec<i64>>,
        acc: &mut Vec<i64>,
        left: usize,
        max: i64,
        sum: i64,
        sq: i64,
    ) {
        if left == 0 {
            if sum == 0 && sq == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let left_i = left as i64;
        for v in (0..=max.min(sum)).rev() {
            if v * v > sq {
                continue;
            }
            // remaining sum must be achievable with at most v per slot;
            // shrinking v only makes this worse
            if sum - v > v * (left_i - 1) {
                break;
            }
            acc.push(v);
            rec(out, acc, left - 1, v, sum - v, sq - v * v);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut out, &mut Vec::new(), n, deg, sum, sq);
    out
}

fn distinct_permutations(sorted_desc: &[i64]) -> Vec<Vec<i64>> {
    let mut perm = sorted_desc.to_vec();
    perm.sort();
    let mut out = Vec::new();
    loop {
        out.push(perm.clone());
        // next_permutation
        let n = perm.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}

/// All (-1)-classes on the blow-up of the plane at `n` general points,
/// `1 <= n <= 8`: the exceptional classes together with every solution of
/// `d^2 - sum m^2 = -1`, `3d - sum m = 1` with `d >= 1`, `m_i >= 0` and `d`
/// within the degree bound. Sorted by degree, then multiplicities.
pub fn enumerate_minus_one_classes(
    config: &PointConfig,
) -> Result<Vec<DivisorClass>, ConeError> {
    enumerate_impl(config, true)
}

/// Sequential reference path of [`enumerate_minus_one_classes`].
pub fn enumerate_minus_one_classes_seq(
    config: &PointConfig,
) -> Result<Vec<DivisorClass>, ConeError> {
    enumerate_impl(config, false)
}

fn enumerate_impl(config: &PointConfig, parallel: bool) -> Result<Vec<DivisorClass>, ConeError> {
    let n = config.len();
    if !(1..=8).contains(&n) {
        return Err(ConeError::PointCountOutOfRange(n));
    }
    if !config.all_proper() {
        return Err(ConeError::Internal(
            "enumeration assumes points in general position".into(),
        ));
    }
    let bound = minus_one_degree_bound(n);
    let mut classes: Vec<DivisorClass> = (0..n)
        .map(|s| DivisorClass::exceptional(config, s))
        .collect();
    let degrees: Vec<i64> = (1..=bound).collect();
    let solve = |d: i64| -> Vec<Vec<i64>> {
        multiplicity_solutions(n, d, 3 * d - 1, d * d + 1)
            .into_iter()
            .flat_map(|sorted| distinct_permutations(&sorted))
            .collect()
    };
    let found: Vec<Vec<i64>> = if parallel {
        let mut per_degree: Vec<(i64, Vec<Vec<i64>>)> =
            par::map_vec(degrees, |d| (d, solve(d)));
        per_degree.sort_by_key(|(d, _)| *d);
        per_degree.into_iter().flat_map(|(_, v)| v).collect()
    } else {
        degrees.into_iter().flat_map(solve).collect()
    };
    // safety margin on the bound for the eight-point case: no solutions may
    // exist just above it
    if n == 8 {
        for d in 7..=9 {
            if !multiplicity_solutions(n, d, 3 * d - 1, d * d + 1).is_empty() {
                return Err(ConeError::Internal(format!(
                    "(-1)-class of degree {d} found beyond the degree bound"
                )));
            }
        }
    }
    let mut with_degree: Vec<(i64, Vec<i64>)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for m in found {
        let key = m.clone();
        if seen.insert(key) {
            // recover the degree from the sum relation
            let d = (m.iter().sum::<i64>() + 1) / 3;
            with_degree.push((d, m));
        }
    }
    with_degree.sort();
    for (d, m) in with_degree {
        classes.push(DivisorClass::over(config, d, m).map_err(CremonaError::from)?);
    }
    Ok(classes)
}

/// Checks that a class is a (-1)-class and reduces to an exceptional class.
pub fn verify_minus_one_class(
    class: &DivisorClass,
    config: &PointConfig,
) -> Result<(), ConeError> {
    let k = canonical_class(config);
    if class.self_intersection() != -1 || class.dot(&k) != -1 {
        return Err(ConeError::Internal(format!(
            "{class} is not a (-1)-class"
        )));
    }
    reduce_to_exceptional(class, config)?;
    Ok(())
}

/// A class `a f1 + b f2 + c delta` on a product of two elliptic curves,
/// in the basis of the two fibres and the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExeClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ExeClass {
    /// Pairing with `f1.f2 = f1.delta = f2.delta = 1` and zero squares
    /// (Gram determinant 2).
    pub fn intersect(&self, other: &ExeClass) -> i64 {
        self.a * other.b + self.b * other.a + self.a * other.c + self.c * other.a
            + self.b * other.c
            + self.c * other.b
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self)
    }

    /// Degree against the ample class `H = f1 + f2`.
    pub fn h_degree(&self) -> i64 {
        self.a + self.b + 2 * self.c
    }
}

/// Membership in the cone of curves of a product of two elliptic curves:
/// the zero class, or `C.H > 0` and `C^2 >= 0`.
pub fn exe_cone_membership(a: i64, b: i64, c: i64) -> bool {
    let cls = ExeClass { a, b, c };
    if (a, b, c) == (0, 0, 0) {
        return true;
    }
    cls.h_degree() > 0 && cls.self_intersection() >= 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hirzebruch_examples() {
        let cone = hirzebruch_cone(2);
        let squares: Vec<i64> = cone.rays.iter().map(|r| r.self_intersection(2)).collect();
        assert_eq!(squares, vec![0, -2]);

        let cone = hirzebruch_cone(0);
        let squares: Vec<i64> = cone.rays.iter().map(|r| r.self_intersection(0)).collect();
        assert_eq!(squares, vec![0, 0]);

        let cone = hirzebruch_cone(1);
        assert_eq!(cone.rays[1].self_intersection(1), -1);
        assert_eq!(cone.rays[0].intersect(&cone.rays[1], 1), 1);
    }

    #[test]
    fn collinear_example_checks() {
        let report = collinear_blowup_cone();
        assert_eq!(report.anticanonical_square, 6);
        assert_eq!(report.cone.rays.len(), 4);
        assert!(report.anticanonical_degrees.iter().all(|&d| d >= 0));
        assert_eq!(report.anticanonical_degrees[0], 0); // the line transform
        assert_eq!(report.anticanonical_degrees[1..], [1, 1, 1]);
        assert!(report.k_trivial_ray_unique);
        assert!(report.no_other_k_trivial);
        assert!(report.no_other_minus_one);
        assert!(report.rays_extremal);
        // C^2 = -2 on the line transform
        assert_eq!(report.cone.rays[0].self_intersection(), -2);
    }

    #[test]
    fn extremality_certificates() {
        let cfg = PointConfig::proper_points(3);
        let e1 = DivisorClass::exceptional(&cfg, 0);
        let e2 = DivisorClass::exceptional(&cfg, 1);
        let e3 = DivisorClass::exceptional(&cfg, 2);
        let line = DivisorClass::line(&cfg);
        let sample = vec![line.clone(), e1.clone(), e2.clone(), e3.clone()];
        assert!(neg_curve_is_extremal(&e1, &sample).unwrap());

        // the fibre class has square 0: precondition fails
        let fibre = DivisorClass::over(&cfg, 1, vec![1, 0, 0]).unwrap();
        assert!(neg_curve_is_extremal(&fibre, &sample).is_err());

        // a decomposable class is rejected: E_1 + E_2 is in the cone
        let sum = e1.plus(&e2);
        let sample2 = vec![e1, e2, e3, sum.clone()];
        assert!(!neg_curve_is_extremal(&sum, &sample2).unwrap());
    }

    #[test]
    fn minus_one_counts() {
        let expected = [1usize, 3, 6, 10, 16, 27, 56, 240];
        for (n, want) in (1..=8).zip(expected) {
            let cfg = PointConfig::proper_points(n);
            let classes = enumerate_minus_one_classes(&cfg).unwrap();
            assert_eq!(classes.len(), want, "count at n = {n}");
            let seq = enumerate_minus_one_classes_seq(&cfg).unwrap();
            assert_eq!(classes, seq);
        }
    }

    #[test]
    fn minus_one_classes_are_minus_one_and_reduce() {
        let cfg = PointConfig::proper_points(6);
        let classes = enumerate_minus_one_classes(&cfg).unwrap();
        let k = canonical_class(&cfg);
        for c in &classes {
            assert_eq!(c.self_intersection(), -1);
            assert_eq!(c.dot(&k), -1);
            verify_minus_one_class(c, &cfg).unwrap();
        }
    }

    #[test]
    fn minus_one_enumeration_closed_under_permutation() {
        let cfg = PointConfig::proper_points(5);
        let classes = enumerate_minus_one_classes(&cfg).unwrap();
        let set: std::collections::BTreeSet<(i64, Vec<i64>)> = classes
            .iter()
            .map(|c| (c.degree(), c.mults().to_vec()))
            .collect();
        for c in &classes {
            let mut m = c.mults().to_vec();
            m.reverse();
            assert!(set.contains(&(c.degree(), m)));
            m = c.mults().to_vec();
            m.swap(0, 1);
            assert!(set.contains(&(c.degree(), m)));
        }
    }

    #[test]
    fn exe_membership_examples() {
        assert!(exe_cone_membership(1, 0, 0));
        assert!(exe_cone_membership(0, 0, 1));
        assert!(!exe_cone_membership(1, -1, 0));
        assert!(exe_cone_membership(0, 0, 0));
        assert!(exe_cone_membership(1, 1, 0));
        // determinant of the pairing is 2
        let g = [[0, 1, 1], [1, 0, 1], [1, 1, 0]];
        let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
        assert_eq!(det, 2);
    }
}
