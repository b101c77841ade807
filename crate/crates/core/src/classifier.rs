//! The Enriques-Kodaira classification oracle driven by the twelfth
//! plurigenus.
//!
//! For a surface with minimal model data:
//!
//! - `P12 = 0` iff the Kodaira dimension is `-infinity` (rational when
//!   `q = 0` by Castelnuovo's criterion, otherwise an irrational scroll);
//! - `P12 = 1` iff `kappa = 0`, with the four subcases cut out by
//!   `(p_g, q)`: K3 `(1,0)`, Enriques `(0,0)`, abelian `(1,2)`, bielliptic
//!   `(0,1)`; the pair `(1,1)` does not occur;
//! - `P12 >= 2` with `K^2 = 0` iff properly elliptic;
//! - `P12 >= 2` with `K^2 > 0` iff general type, where
//!   `P_n = chi + n(n-1)/2 K^2` for `n >= 2`.
//!
//! The oracle consumes invariant records, never surfaces: missing fields
//! yield "insufficient data" outcomes naming the clause that could not be
//! discharged, and contradictory fields are reported as violations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fibration::BdFCase;

/// A record of numerical invariants of a surface.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    #[serde(default)]
    pub q: Option<i64>,
    #[serde(default)]
    pub p_g: Option<i64>,
    /// Self-intersection of the canonical class on a minimal model.
    #[serde(default, rename = "K2")]
    pub k2: Option<i64>,
    #[serde(default)]
    pub e: Option<i64>,
    #[serde(default)]
    pub chi: Option<i64>,
    /// Partial plurigenus table `n -> P_n`.
    #[serde(default)]
    pub plurigenera: BTreeMap<u32, i64>,
    #[serde(default)]
    pub minimal: bool,
}

impl SurfaceInvariants {
    pub fn plurigenus(&self, n: u32) -> Option<i64> {
        self.plurigenera.get(&n).copied()
    }
}

/// A violated consistency identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `chi != 1 - q + p_g`.
    ChiIdentity { chi: i64, q: i64, p_g: i64 },
    /// Noether's formula `12 chi != K^2 + e`.
    NoetherFormula { chi: i64, k2: i64, e: i64 },
    /// Some `P_n < 0`.
    NegativePlurigenus { n: u32, value: i64 },
    /// `P_1` disagrees with `p_g`.
    FirstPlurigenus { p1: i64, p_g: i64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::ChiIdentity { chi, q, p_g } => {
                write!(f, "chi = {chi} but 1 - q + p_g = {}", 1 - q + p_g)
            }
            Violation::NoetherFormula { chi, k2, e } => {
                write!(f, "12 chi = {} but K2 + e = {}", 12 * chi, k2 + e)
            }
            Violation::NegativePlurigenus { n, value } => {
                write!(f, "P_{n} = {value} is negative")
            }
            Violation::FirstPlurigenus { p1, p_g } => {
                write!(f, "P_1 = {p1} but p_g = {p_g}")
            }
        }
    }
}

/// Checks the numeric identities that the provided fields must satisfy:
/// `chi = 1 - q + p_g`, Noether's formula `12 chi = K^2 + e`, `P_n >= 0`
/// and `P_1 = p_g`. Returns the empty list when everything holds.
pub fn consistency_check(s: &SurfaceInvariants) -> Vec<Violation> {
    let mut v = Vec::new();
    if let (Some(chi), Some(q), Some(p_g)) = (s.chi, s.q, s.p_g) {
        if chi != 1 - q + p_g {
            v.push(Violation::ChiIdentity { chi, q, p_g });
        }
    }
    if let (Some(chi), Some(k2), Some(e)) = (s.chi, s.k2, s.e) {
        if 12 * chi != k2 + e {
            v.push(Violation::NoetherFormula { chi, k2, e });
        }
    }
    for (&n, &p) in &s.plurigenera {
        if p < 0 {
            v.push(Violation::NegativePlurigenus { n, value: p });
        }
    }
    if let (Some(&p1), Some(p_g)) = (s.plurigenera.get(&1), s.p_g) {
        if p1 != p_g {
            v.push(Violation::FirstPlurigenus { p1, p_g });
        }
    }
    v
}

/// Castelnuovo's rationality criterion: rational iff `q = P_2 = 0`.
pub fn castelnuovo_rational(q: i64, p2: i64) -> bool {
    q == 0 && p2 == 0
}

/// Kodaira dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kappa {
    MinusInfinity,
    Zero,
    One,
    Two,
}

impl std::fmt::Display for Kappa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kappa::MinusInfinity => write!(f, "-inf"),
            Kappa::Zero => write!(f, "0"),
            Kappa::One => write!(f, "1"),
            Kappa::Two => write!(f, "2"),
        }
    }
}

/// Fine class within a Kodaira dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subclass {
    Rational,
    IrrationalRuled,
    K3,
    Enriques,
    Abelian,
    Bielliptic,
    ProperlyElliptic,
    GeneralType,
}

/// Result of the classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub kappa: Kappa,
    pub subclass: Option<Subclass>,
    /// Order of the canonical class when `kappa = 0` and determined.
    pub canonical_order: Option<i64>,
    /// Admissible orders when only the bielliptic type is unknown.
    pub admissible_orders: Option<Vec<i64>>,
}

/// Errors of the classification oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("inconsistent record: {0}")]
    Inconsistent(String),
    #[error("impossible case: {0}")]
    Impossible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Classifies an invariant record by the clauses of the `P_12` theorem.
///
/// Requires `P_12`; requires `K^2` of a minimal model when `P_12 >= 2`, and
/// `(p_g, q)` for the `kappa = 0` subcases. A bielliptic record without its
/// Bagnera-De Franchis case receives the admissible canonical orders
/// `{2, 3, 4, 6}` instead of a single value.
pub fn classify(s: &SurfaceInvariants) -> Result<Classification, ClassifyError> {
    classify_with(s, None)
}

/// [`classify`], with optional Bagnera-De Franchis data for bielliptic
/// records.
pub fn classify_with(
    s: &SurfaceInvariants,
    bdf: Option<&BdFCase>,
) -> Result<Classification, ClassifyError> {
    let violations = consistency_check(s);
    if let Some(v) = violations.first() {
        return Err(ClassifyError::Inconsistent(v.to_string()));
    }
    let p12 = s
        .plurigenus(12)
        .ok_or_else(|| ClassifyError::InsufficientData("P_12 is required".into()))?;
    if p12 < 0 {
        return Err(ClassifyError::Inconsistent("P_12 is negative".into()));
    }
    if p12 == 0 {
        if let Some(p_g) = s.p_g {
            if p_g != 0 {
                return Err(ClassifyError::Inconsistent(
                    "P_12 = 0 forces p_g = 0".into(),
                ));
            }
        }
        let subclass = match (s.q, s.plurigenus(2)) {
            (Some(q), Some(p2)) => Some(if castelnuovo_rational(q, p2) {
                Subclass::Rational
            } else {
                Subclass::IrrationalRuled
            }),
            (Some(q), None) => {
                // P_12 = 0 forces P_2 = 0
                Some(if castelnuovo_rational(q, 0) {
                    Subclass::Rational
                } else {
                    Subclass::IrrationalRuled
                })
            }
            _ => None,
        };
        return Ok(Classification {
            kappa: Kappa::MinusInfinity,
            subclass,
            canonical_order: None,
            admissible_orders: None,
        });
    }
    if p12 == 1 {
        if s.minimal {
            if let Some(k2) = s.k2 {
                if k2 != 0 {
                    return Err(ClassifyError::Inconsistent(
                        "kappa = 0 forces K^2 = 0 on a minimal model".into(),
                    ));
                }
            }
        }
        let (Some(p_g), Some(q)) = (s.p_g, s.q) else {
            return Err(ClassifyError::InsufficientData(
                "kappa = 0 subcases need p_g and q".into(),
            ));
        };
        let (subclass, order, admissible) = match (p_g, q) {
            (1, 0) => (Subclass::K3, Some(1), None),
            (0, 0) => (Subclass::Enriques, Some(2), None),
            (1, 2) => (Subclass::Abelian, Some(1), None),
            (0, 1) => match bdf {
                Some(case) => (
                    Subclass::Bielliptic,
                    Some(crate::fibration::bdf_minimal_power(case)),
                    None,
                ),
                None => (Subclass::Bielliptic, None, Some(vec![2, 3, 4, 6])),
            },
            (1, 1) => {
                return Err(ClassifyError::Impossible(
                    "p_g = q = 1 with kappa = 0 does not occur".into(),
                ))
            }
            _ => {
                return Err(ClassifyError::Inconsistent(format!(
                    "kappa = 0 admits no surface with p_g = {p_g}, q = {q}"
                )))
            }
        };
        return Ok(Classification {
            kappa: Kappa::Zero,
            subclass: Some(subclass),
            canonical_order: order,
            admissible_orders: admissible,
        });
    }
    // P12 >= 2
    if !s.minimal {
        return Err(ClassifyError::InsufficientData(
            "P_12 >= 2 needs K^2 of a minimal model".into(),
        ));
    }
    let k2 = s.k2.ok_or_else(|| {
        ClassifyError::InsufficientData("P_12 >= 2 needs K^2 of a minimal model".into())
    })?;
    if k2 == 0 {
        Ok(Classification {
            kappa: Kappa::One,
            subclass: Some(Subclass::ProperlyElliptic),
            canonical_order: None,
            admissible_orders: None,
        })
    } else if k2 > 0 {
        Ok(Classification {
            kappa: Kappa::Two,
            subclass: Some(Subclass::GeneralType),
            canonical_order: None,
            admissible_orders: None,
        })
    } else {
        Err(ClassifyError::Inconsistent(
            "a minimal model with P_12 >= 2 has K^2 >= 0".into(),
        ))
    }
}

/// Plurigenus table of a `kappa = 0` surface with canonical order `k`:
/// `P_n = 1` when `k` divides `n`, otherwise 0.
pub fn canonical_order_plurigenus(order: i64, n: i64) -> i64 {
    assert!(order >= 1 && n >= 1);
    if n % order == 0 {
        1
    } else {
        0
    }
}

/// `P_n = chi + n(n-1)/2 K^2` for a minimal surface of general type,
/// `n >= 2`.
pub fn general_type_plurigenus(chi: i64, k2: i64, n: i64) -> Result<i64, ClassifyError> {
    if k2 < 1 || chi < 1 {
        return Err(ClassifyError::Precondition(
            "minimal general type needs chi >= 1 and K^2 >= 1".into(),
        ));
    }
    if n < 2 {
        return Err(ClassifyError::Precondition(
            "the plurigenus formula applies for n >= 2".into(),
        ));
    }
    Ok(chi + n * (n - 1) / 2 * k2)
}

/// Behaviour of the n-canonical map of a minimal surface of general type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PluricanonicalBehavior {
    BasePointFree,
    BirationalMorphism,
    Exception,
}

/// The n-canonical map for `n >= 3`: birational onto its image except for
/// `n in {3, 4}` with `(p_g, K^2) = (2, 1)` and `n = 3` with `(3, 2)`;
/// base point free from `n = 5` on, birational from `n = 6` on.
pub fn pluricanonical_behavior(
    n: i64,
    p_g: i64,
    k2: i64,
) -> Result<PluricanonicalBehavior, ClassifyError> {
    if n <= 2 {
        return Err(ClassifyError::Precondition(
            "only n >= 3 is supported (the bicanonical map needs pencil data)".into(),
        ));
    }
    if (n == 3 || n == 4) && p_g == 2 && k2 == 1 {
        return Ok(PluricanonicalBehavior::Exception);
    }
    if n == 3 && p_g == 3 && k2 == 2 {
        return Ok(PluricanonicalBehavior::Exception);
    }
    if n >= 6 {
        return Ok(PluricanonicalBehavior::BirationalMorphism);
    }
    if n == 5 {
        return Ok(PluricanonicalBehavior::BasePointFree);
    }
    Ok(PluricanonicalBehavior::BirationalMorphism)
}
