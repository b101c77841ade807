//! Numerical theory of fibrations.
//!
//! - Zariski's lemma: the intersection matrix of the components of a
//!   connected fibre is negative semidefinite, with radical spanned by the
//!   fibre itself; a matrix with `k` connected components has a
//!   `k`-dimensional radical.
//! - Exact lattice signatures by rational symmetric elimination.
//! - The canonical bundle formula for a minimal elliptic fibration
//!   `f: S -> C` with `chi = deg (R^1 f_* O)^dual` and multiple fibres
//!   `m_i F_i`: `K_S = f^*(K_C + chi) + sum (m_i - 1) F_i`, which yields the
//!   plurigenus lower bound
//!   `P_n >= max(0, n(2g - 2 + chi) + 1 - g + sum floor(n(m_i - 1)/m_i))`.
//! - Riemann-Hurwitz arithmetic for branched covers and the degree
//!   `l_n = -2n + sum floor(n(1 - 1/r_p))` of invariant n-tensor forms on a
//!   rational quotient.
//! - The Bagnera-De Franchis table: the seven bielliptic types and the
//!   order of their first trivial pluricanonical bundle.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{inertia, kernel_basis, parallel_to_integral, Rat};
use crate::par;

/// Errors from fibration-level computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("off-diagonal entries must be non-negative")]
    NegativeOffDiagonal,
    #[error("weights must be positive and match the matrix size")]
    BadWeights,
    #[error("gram * weights must vanish (the full fibre is orthogonal to each component)")]
    WeightsNotInRadical,
    #[error("multiple-fibre multiplicities must all be at least 2")]
    BadMultiplicity,
    #[error("branch indices must all be at least 2")]
    BadBranchIndex,
    #[error("group order must be divisible by every branch index")]
    OrderNotDivisible,
    #[error("Riemann-Hurwitz total is odd; no integral genus exists")]
    OddTotal,
    #[error("Riemann-Hurwitz genus is negative")]
    NegativeGenus,
    #[error("invariant degree requires a rational base")]
    NotRationalBase,
    #[error("bielliptic case (ii) excludes the full 2-torsion translation group")]
    ExcludedTranslationGroup,
    #[error("translation data does not match the bielliptic case")]
    BadTranslationData,
}

/// Intersection data of the components of one fibre: the Gram matrix
/// `F_i . F_j` and the positive weights with `F = sum n_i F_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreMatrix {
    pub gram: Vec<Vec<i64>>,
    pub weights: Vec<i64>,
}

impl FibreMatrix {
    pub fn new(gram: Vec<Vec<i64>>, weights: Vec<i64>) -> Result<Self, FibrationError> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(FibrationError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(FibrationError::NotSymmetric);
                }
                if i != j && gram[i][j] < 0 {
                    return Err(FibrationError::NegativeOffDiagonal);
                }
            }
        }
        if weights.len() != n || weights.iter().any(|&w| w <= 0) {
            return Err(FibrationError::BadWeights);
        }
        for row in &gram {
            let s: i64 = row.iter().zip(&weights).map(|(a, w)| a * w).sum();
            if s != 0 {
                return Err(FibrationError::WeightsNotInRadical);
            }
        }
        Ok(FibreMatrix { gram, weights })
    }
}

/// Verdict of the Zariski check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZariskiVerdict {
    pub semidefinite: bool,
    pub kernel_dim: usize,
    pub kernel_is_span_of_weights: bool,
}

/// Checks negative semidefiniteness and computes the radical, exactly.
///
/// For a connected component graph the radical is one-dimensional and
/// spanned by the weight vector; a block matrix with `k` components yields
/// `kernel_dim = k`.
pub fn zariski_check(m: &FibreMatrix) -> ZariskiVerdict {
    let (pos, _neg, _zero) = inertia(&m.gram);
    let kernel = kernel_basis(&m.gram);
    let span = kernel.len() == 1 && parallel_to_integral(&kernel[0], &m.weights);
    ZariskiVerdict {
        semidefinite: pos == 0,
        kernel_dim: kernel.len(),
        kernel_is_span_of_weights: span,
    }
}

/// Batch form of [`zariski_check`]; parallel with the `parallel` feature.
pub fn zariski_check_batch(ms: Vec<FibreMatrix>) -> Vec<ZariskiVerdict> {
    par::map_vec(ms, |m| zariski_check(&m))
}

/// Sequential batch form, kept as the reference path for benches and
/// determinism cross-checks.
pub fn zariski_check_batch_seq(ms: Vec<FibreMatrix>) -> Vec<ZariskiVerdict> {
    ms.iter().map(zariski_check).collect()
}

/// Inertia `(positive, negative, zero)` of a symmetric integer matrix by
/// exact rational diagonalization.
pub fn lattice_signature(m: &[Vec<i64>]) -> (usize, usize, usize) {
    inertia(m)
}

/// A minimal elliptic fibration: base genus, `chi`, and the multiplicities
/// of the multiple fibres.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticFibration {
    pub base_genus: i64,
    pub chi: i64,
    pub mults: Vec<i64>,
}

impl EllipticFibration {
    pub fn new(base_genus: i64, chi: i64, mults: Vec<i64>) -> Result<Self, FibrationError> {
        if base_genus < 0 || chi < 0 {
            return Err(FibrationError::BadWeights);
        }
        if mults.iter().any(|&m| m < 2) {
            return Err(FibrationError::BadMultiplicity);
        }
        Ok(EllipticFibration {
            base_genus,
            chi,
            mults,
        })
    }

    /// Marks the two isotrivial quotient families for which the plurigenus
    /// bound is an equality.
    pub fn exact_for_isotrivial(&self) -> bool {
        if self.base_genus != 0 || self.chi != 0 {
            return false;
        }
        let mut m = self.mults.clone();
        m.sort();
        m == [2, 6, 6] || m == [2, 5, 10]
    }
}

/// Lower bound for the n-th plurigenus of a minimal surface carrying the
/// fibration:
/// `max(0, n(2g - 2 + chi) + 1 - g + sum floor(n(m_i - 1)/m_i))`.
pub fn plurigenus_bound(f: &EllipticFibration, n: i64) -> i64 {
    assert!(n >= 1, "plurigenus index must be positive");
    let g = f.base_genus;
    let base = n * (2 * g - 2 + f.chi) + 1 - g;
    let frac: i64 = f.mults.iter().map(|&m| (n * (m - 1)).div_euclid(m)).sum();
    (base + frac).max(0)
}

/// Branch data of a quotient map: group order, base genus and branching
/// indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchData {
    pub group_order: i64,
    pub base_genus: i64,
    pub branch: Vec<i64>,
}

impl BranchData {
    pub fn new(group_order: i64, base_genus: i64, branch: Vec<i64>) -> Result<Self, FibrationError> {
        if group_order < 1 || base_genus < 0 {
            return Err(FibrationError::BadWeights);
        }
        if branch.iter().any(|&r| r < 2) {
            return Err(FibrationError::BadBranchIndex);
        }
        Ok(BranchData {
            group_order,
            base_genus,
            branch,
        })
    }
}

/// Solves `2g - 2 = nu (2b - 2) + sum nu (1 - 1/r_i)` for the genus of the
/// covering curve.
pub fn riemann_hurwitz_genus(b: &BranchData) -> Result<i64, FibrationError> {
    let nu = b.group_order;
    for &r in &b.branch {
        if nu % r != 0 {
            return Err(FibrationError::OrderNotDivisible);
        }
    }
    let ram: i64 = b.branch.iter().map(|&r| nu - nu / r).sum();
    let total = nu * (2 * b.base_genus - 2) + ram + 2;
    if total % 2 != 0 {
        return Err(FibrationError::OddTotal);
    }
    let g = total / 2;
    if g < 0 {
        return Err(FibrationError::NegativeGenus);
    }
    Ok(g)
}

/// Degree `l_n = -2n + sum floor(n (1 - 1/r_p))` of the bundle of
/// G-invariant n-tensor forms on a rational quotient; the invariant forms
/// have dimension `max(0, l_n + 1)`.
pub fn invariant_degree(b: &BranchData, n: i64) -> Result<i64, FibrationError> {
    if b.base_genus != 0 {
        return Err(FibrationError::NotRationalBase);
    }
    assert!(n >= 1);
    let sum: i64 = b.branch.iter().map(|&r| (n * (r - 1)).div_euclid(r)).sum();
    Ok(-2 * n + sum)
}

/// Whether the branch data covers an elliptic curve over the line:
/// `sum (1 - 1/r_i) = 2` exactly. The solutions are `(2,2,2,2)`, `(3,3,3)`,
/// `(2,4,4)` and `(2,3,6)`.
pub fn elliptic_branch_consistency(b: &BranchData) -> bool {
    let total: Rat = b
        .branch
        .iter()
        .map(|&r| Rat::new(r - 1, r))
        .fold(Rat::zero(), |acc, x| acc + x);
    total == Rat::from_integer(2)
}

/// The seven Bagnera-De Franchis types of bielliptic surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BdfType {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl BdfType {
    pub const ALL: [BdfType; 7] = [
        BdfType::I,
        BdfType::II,
        BdfType::III,
        BdfType::IV,
        BdfType::V,
        BdfType::VI,
        BdfType::VII,
    ];
}

/// A bielliptic surface `E x F / G`, described by its Bagnera-De Franchis
/// case with the derived group data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BdFCase {
    pub case: BdfType,
    /// Cyclic factors of the acting group `G`.
    pub group: Vec<i64>,
    /// Order of the root of unity by which `G` acts on the 1-form of `F`.
    pub rotation_order: i64,
}

impl BdFCase {
    /// Canonical data of a case.
    pub fn new(case: BdfType) -> Self {
        let (group, rotation_order) = match case {
            BdfType::I => (vec![2], 2),
            BdfType::II => (vec![2, 2], 2),
            BdfType::III => (vec![4], 4),
            BdfType::IV => (vec![4, 2], 4),
            BdfType::V => (vec![3], 3),
            BdfType::VI => (vec![3, 3], 3),
            BdfType::VII => (vec![6], 6),
        };
        BdFCase {
            case,
            group,
            rotation_order,
        }
    }

    /// Builds a case with an explicit extra translation subgroup, rejecting
    /// the excluded configuration of case (ii): the translations must form
    /// at most one cyclic factor, never the full 2-torsion of `F`.
    pub fn with_translations(case: BdfType, translations: &[i64]) -> Result<Self, FibrationError> {
        let canonical = BdFCase::new(case);
        let expected: &[i64] = match case {
            BdfType::I | BdfType::III | BdfType::V | BdfType::VII => &[],
            BdfType::II => &[2],
            BdfType::IV => &[2],
            BdfType::VI => &[3],
        };
        if case == BdfType::II && translations == [2, 2] {
            return Err(FibrationError::ExcludedTranslationGroup);
        }
        if translations != expected {
            return Err(FibrationError::BadTranslationData);
        }
        Ok(canonical)
    }
}

/// Order of the first trivial pluricanonical bundle of a bielliptic surface:
/// 2 in cases (i)-(ii), 4 in (iii)-(iv), 3 in (v)-(vi), 6 in (vii).
pub fn bdf_minimal_power(c: &BdFCase) -> i64 {
    c.rotation_order
}

/// Summary of the canonical bundle formula for an elliptic fibration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalFormulaSummary {
    /// `deg(K_C) + chi = 2g - 2 + chi`.
    pub base_bundle_degree: i64,
    /// The fractional multiple-fibre contributions `(m_i - 1)/m_i`.
    #[serde(serialize_with = "crate::exact::serialize_rats")]
    pub fractional_parts: Vec<Rat>,
    /// Smallest `n` with `n K_S` a pullback from the base: `lcm(m_i)`.
    pub pullback_power: i64,
    /// Degree of the base bundle `K` with `n K_S = f^*(K)` at that `n`.
    pub bundle_degree_at_power: i64,
    /// The plurigenus bound is exact for the marked isotrivial families.
    pub exact_for_isotrivial: bool,
}

/// The canonical bundle formula data for a fibration.
pub fn canonical_formula_summary(f: &EllipticFibration) -> CanonicalFormulaSummary {
    let base_bundle_degree = 2 * f.base_genus - 2 + f.chi;
    let fractional_parts: Vec<Rat> = f.mults.iter().map(|&m| Rat::new(m - 1, m)).collect();
    let pullback_power = f
        .mults
        .iter()
        .fold(1i64, |acc, &m| num_integer::lcm(acc, m));
    let bundle_degree_at_power = pullback_power * base_bundle_degree
        + f.mults
            .iter()
            .map(|&m| pullback_power * (m - 1) / m)
            .sum::<i64>();
    CanonicalFormulaSummary {
        base_bundle_degree,
        fractional_parts,
        pullback_power,
        bundle_degree_at_power,
        exact_for_isotrivial: f.exact_for_isotrivial(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zariski_small_examples() {
        let m = FibreMatrix::new(vec![vec![-2, 2], vec![2, -2]], vec![1, 1]).unwrap();
        let v = zariski_check(&m);
        assert!(v.semidefinite);
        assert_eq!(v.kernel_dim, 1);
        assert!(v.kernel_is_span_of_weights);

        let m = FibreMatrix::new(vec![vec![0]], vec![1]).unwrap();
        let v = zariski_check(&m);
        assert!(v.semidefinite);
        assert_eq!(v.kernel_dim, 1);
        assert!(v.kernel_is_span_of_weights);

        // two disconnected blocks: radical of dimension 2
        let m = FibreMatrix::new(
            vec![
                vec![-2, 2, 0, 0],
                vec![2, -2, 0, 0],
                vec![0, 0, -3, 3],
                vec![0, 0, 3, -3],
            ],
            vec![1, 1, 1, 1],
        )
        .unwrap();
        let v = zariski_check(&m);
        assert!(v.semidefinite);
        assert_eq!(v.kernel_dim, 2);
        assert!(!v.kernel_is_span_of_weights);
    }

    #[test]
    fn fibre_matrix_validation() {
        assert!(FibreMatrix::new(vec![vec![-2, -1], vec![-1, -2]], vec![1, 1]).is_err());
        assert!(FibreMatrix::new(vec![vec![-2, 2], vec![2, -2]], vec![1, 2]).is_err());
        assert!(FibreMatrix::new(vec![vec![-2, 2], vec![2, -2]], vec![1, -1]).is_err());
    }

    #[test]
    fn signature_examples() {
        // blown-up plane: (1, n, 0)
        let g = crate::lattice::gram_matrix(&crate::points::PointConfig::proper_points(4));
        assert_eq!(lattice_signature(&g), (1, 4, 0));
        assert_eq!(lattice_signature(&[vec![0]]), (0, 0, 1));
        let exe = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        assert_eq!(lattice_signature(&exe), (1, 2, 0));
    }

    #[test]
    fn plurigenus_tables_from_the_isotrivial_families() {
        let f = EllipticFibration::new(0, 0, vec![2, 6, 6]).unwrap();
        let p: Vec<i64> = (1..=6).map(|n| plurigenus_bound(&f, n)).collect();
        assert_eq!(p, vec![0, 0, 0, 1, 1, 2]);
        assert_eq!(plurigenus_bound(&f, 12), 3);
        assert_eq!(plurigenus_bound(&f, 13), 1);
        assert!(f.exact_for_isotrivial());

        let f = EllipticFibration::new(0, 0, vec![2, 5, 10]).unwrap();
        let p: Vec<i64> = (8..=13).map(|n| plurigenus_bound(&f, n)).collect();
        assert_eq!(p, vec![2, 2, 3, 1, 2, 2]);

        // monotone in chi and in each multiplicity
        let base = EllipticFibration::new(0, 0, vec![2, 6, 6]).unwrap();
        let bigger_chi = EllipticFibration::new(0, 1, vec![2, 6, 6]).unwrap();
        let bigger_mult = EllipticFibration::new(0, 0, vec![3, 6, 6]).unwrap();
        for n in 1..=14 {
            assert!(plurigenus_bound(&bigger_chi, n) >= plurigenus_bound(&base, n));
            assert!(plurigenus_bound(&bigger_mult, n) >= plurigenus_bound(&base, n));
        }
    }

    #[test]
    fn riemann_hurwitz_examples() {
        let b = BranchData::new(12, 0, vec![2, 6, 6]).unwrap();
        assert_eq!(riemann_hurwitz_genus(&b).unwrap(), 2);
        let b = BranchData::new(10, 0, vec![2, 5, 10]).unwrap();
        assert_eq!(riemann_hurwitz_genus(&b).unwrap(), 2);
        let b = BranchData::new(2, 1, vec![]).unwrap();
        assert_eq!(riemann_hurwitz_genus(&b).unwrap(), 1);
        let b = BranchData::new(4, 0, vec![2, 2]).unwrap();
        // 2g - 2 = -8 + 2 + 2 = -4: negative genus
        assert!(riemann_hurwitz_genus(&b).is_err());
        let b = BranchData::new(5, 0, vec![2]).unwrap();
        assert!(matches!(
            riemann_hurwitz_genus(&b),
            Err(FibrationError::OrderNotDivisible)
        ));
    }

    #[test]
    fn invariant_degree_examples() {
        let b = BranchData::new(3, 0, vec![3, 3, 3]).unwrap();
        assert_eq!(invariant_degree(&b, 3).unwrap(), 0);
        let b = BranchData::new(6, 0, vec![2, 3, 6]).unwrap();
        assert_eq!(invariant_degree(&b, 6).unwrap(), 0);
        let b = BranchData::new(2, 0, vec![2, 2, 2, 2]).unwrap();
        assert_eq!(invariant_degree(&b, 2).unwrap(), 0);
        let b = BranchData::new(4, 0, vec![2, 4, 4]).unwrap();
        assert_eq!(invariant_degree(&b, 4).unwrap(), 0);

        // at n = lcm(r_i) the degree of an elliptic solution is nonnegative
        for branch in [vec![2, 2, 2, 2], vec![3, 3, 3], vec![2, 4, 4], vec![2, 3, 6]] {
            let lcm = branch.iter().fold(1i64, |a, &b| num_integer::lcm(a, b));
            let b = BranchData::new(lcm, 0, branch).unwrap();
            assert!(elliptic_branch_consistency(&b));
            assert!(invariant_degree(&b, lcm).unwrap() >= 0);
        }
    }

    #[test]
    fn elliptic_branch_solutions() {
        let yes = [vec![2, 2, 2, 2], vec![3, 3, 3], vec![2, 4, 4], vec![2, 3, 6]];
        for branch in yes {
            let b = BranchData::new(12, 0, branch).unwrap();
            assert!(elliptic_branch_consistency(&b));
        }
        let b = BranchData::new(12, 0, vec![2, 2, 3]).unwrap();
        assert!(!elliptic_branch_consistency(&b));
    }

    #[test]
    fn bdf_minimal_powers() {
        let want = [2, 2, 4, 4, 3, 3, 6];
        for (case, w) in BdfType::ALL.into_iter().zip(want) {
            assert_eq!(bdf_minimal_power(&BdFCase::new(case)), w);
        }
        // the excluded full 2-torsion translation group of case (ii)
        assert!(matches!(
            BdFCase::with_translations(BdfType::II, &[2, 2]),
            Err(FibrationError::ExcludedTranslationGroup)
        ));
        assert!(BdFCase::with_translations(BdfType::II, &[2]).is_ok());
        assert!(BdFCase::with_translations(BdfType::VII, &[]).is_ok());
    }

    #[test]
    fn canonical_formula_examples() {
        // elliptic fibration over an elliptic base with no multiple fibres:
        // K is numerically trivial
        let f = EllipticFibration::new(1, 0, vec![]).unwrap();
        let s = canonical_formula_summary(&f);
        assert_eq!(s.base_bundle_degree, 0);
        assert_eq!(s.pullback_power, 1);
        assert_eq!(s.bundle_degree_at_power, 0);

        let f = EllipticFibration::new(0, 0, vec![2, 6, 6]).unwrap();
        let s = canonical_formula_summary(&f);
        assert_eq!(s.pullback_power, 6);
        assert_eq!(s.bundle_degree_at_power, 1);
        assert!(s.exact_for_isotrivial);

        let f = EllipticFibration::new(0, 2, vec![]).unwrap();
        let s = canonical_formula_summary(&f);
        assert_eq!(s.base_bundle_degree, 0);
        assert_eq!(s.pullback_power, 1);
    }
}
