//! Intersection arithmetic on the Picard lattice of a blown-up plane.
//!
//! A divisor class on the plane blown up at points `p_1, ..., p_n` is written
//! `(d; m_1, ..., m_n)`, meaning `d L - m_1 E_1 - ... - m_n E_n` where `L` is
//! the pullback of a line and `E_i` is the total transform of the exceptional
//! divisor over `p_i`. In this basis the intersection form is
//! `diag(1, -1, ..., -1)`:
//!
//! ```text
//! a · b = d_a d_b - sum_i m_{a,i} m_{b,i}
//! ```
//!
//! The canonical class is `K = (-3; -1, ..., -1)`, the self-intersection of a
//! class is `nu = d^2 - sum m_i^2` and its arithmetic genus is
//! `g = C(d-1, 2) - sum C(m_i, 2)`, with the convention `C(k, 2) = k(k-1)/2`
//! for every integer `k` (so `C(-1, 2) = 1`). That convention keeps the genus
//! formula total and the adjunction identity `L·(L+K) = 2g - 2` exact for
//! non-effective classes as well.
//!
//! Classes are value objects keyed by the identifier of the configuration
//! they live over; pairing classes over different configurations is a hard
//! error rather than a silent truncation.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::points::{ConfigId, PointConfig};

/// Binomial coefficient `C(k, 2) = k(k-1)/2`, defined for all integers.
#[inline]
pub fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// Errors from lattice-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    /// The two classes do not live over the same point configuration.
    #[error("classes live over different configurations")]
    ConfigMismatch,
    /// The multiplicity vector does not match the configuration size.
    #[error("class has {got} multiplicities but the configuration has {want} points")]
    LengthMismatch { got: usize, want: usize },
    /// An arithmetic identity that must hold by construction failed.
    #[error("internal invariant failure: {0}")]
    InternalInvariant(&'static str),
}

/// A divisor class `(d; m_1, ..., m_n)` on a blown-up plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    degree: i64,
    mults: Vec<i64>,
    config: ConfigId,
}

impl DivisorClass {
    /// Builds the class `(degree; mults)` over `config`.
    pub fn over(
        config: &PointConfig,
        degree: i64,
        mults: Vec<i64>,
    ) -> Result<Self, LatticeError> {
        if mults.len() != config.len() {
            return Err(LatticeError::LengthMismatch {
                got: mults.len(),
                want: config.len(),
            });
        }
        Ok(DivisorClass {
            degree,
            mults,
            config: config.id(),
        })
    }

    /// The zero class over `config`.
    pub fn zero(config: &PointConfig) -> Self {
        DivisorClass {
            degree: 0,
            mults: vec![0; config.len()],
            config: config.id(),
        }
    }

    /// The class of a general line, `(1; 0, ..., 0)`.
    pub fn line(config: &PointConfig) -> Self {
        DivisorClass {
            degree: 1,
            mults: vec![0; config.len()],
            config: config.id(),
        }
    }

    /// The class of the exceptional curve over the point at `slot`,
    /// i.e. `(0; ..., -1, ...)` with `-1` in position `slot`.
    pub fn exceptional(config: &PointConfig, slot: usize) -> Self {
        let mut mults = vec![0; config.len()];
        mults[slot] = -1;
        DivisorClass {
            degree: 0,
            mults,
            config: config.id(),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    pub fn mult(&self, slot: usize) -> i64 {
        self.mults[slot]
    }

    pub fn config_id(&self) -> ConfigId {
        self.config
    }

    pub fn n_points(&self) -> usize {
        self.mults.len()
    }

    /// Intersection number `a · b = d_a d_b - sum m_{a,i} m_{b,i}`.
    ///
    /// Symmetric and bilinear. Fails if the classes live over different
    /// configurations.
    pub fn intersect(&self, other: &DivisorClass) -> Result<i64, LatticeError> {
        if self.config != other.config {
            return Err(LatticeError::ConfigMismatch);
        }
        if self.mults.len() != other.mults.len() {
            return Err(LatticeError::LengthMismatch {
                got: other.mults.len(),
                want: self.mults.len(),
            });
        }
        Ok(self.dot_unchecked(other))
    }

    /// Pairing for classes known to share a configuration.
    ///
    /// Panics on mismatch; internal callers uphold the invariant.
    pub(crate) fn dot(&self, other: &DivisorClass) -> i64 {
        assert_eq!(
            self.config, other.config,
            "internal pairing of classes over different configurations"
        );
        self.dot_unchecked(other)
    }

    fn dot_unchecked(&self, other: &DivisorClass) -> i64 {
        self.degree * other.degree
            - self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a * b)
                .sum::<i64>()
    }

    /// Self-intersection `nu = d^2 - sum m_i^2`.
    pub fn self_intersection(&self) -> i64 {
        self.dot_unchecked(self)
    }

    /// Arithmetic genus `g = C(d-1, 2) - sum C(m_i, 2)`.
    pub fn arithmetic_genus(&self) -> i64 {
        binom2(self.degree - 1) - self.mults.iter().map(|&m| binom2(m)).sum::<i64>()
    }

    /// Self-intersection and arithmetic genus in one record.
    pub fn numerical_record(&self) -> NumericalRecord {
        NumericalRecord {
            nu: self.self_intersection(),
            genus: self.arithmetic_genus(),
        }
    }

    /// Euler characteristic `chi(L) = chi_O + L·(L - K) / 2` by Riemann-Roch.
    ///
    /// `L·(L - K)` is even for every class (adjunction parity); an odd value
    /// is reported as an internal invariant failure.
    pub fn riemann_roch_chi(&self, config: &PointConfig, chi_o: i64) -> Result<i64, LatticeError> {
        let k = canonical_class(config);
        if k.config != self.config {
            return Err(LatticeError::ConfigMismatch);
        }
        let t = self.dot(self) - self.dot(&k);
        if t % 2 != 0 {
            return Err(LatticeError::InternalInvariant(
                "L·(L-K) must be even by adjunction parity",
            ));
        }
        Ok(chi_o + t / 2)
    }

    pub(crate) fn plus(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.config, other.config);
        DivisorClass {
            degree: self.degree + other.degree,
            mults: self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a + b)
                .collect(),
            config: self.config,
        }
    }

    pub(crate) fn minus(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.config, other.config);
        DivisorClass {
            degree: self.degree - other.degree,
            mults: self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a - b)
                .collect(),
            config: self.config,
        }
    }

    /// Rebinds the class to a configuration that extends the current one by
    /// fresh points; the new slots get multiplicity zero.
    pub(crate) fn zero_extended(&self, extended: &PointConfig) -> DivisorClass {
        assert!(extended.len() >= self.mults.len());
        let mut mults = self.mults.clone();
        mults.resize(extended.len(), 0);
        DivisorClass {
            degree: self.degree,
            mults,
            config: extended.id(),
        }
    }

    /// Coordinates `(degree, m_1, ..., m_n)` as one vector, the form used
    /// by lattice actions.
    pub fn coordinates(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(1 + self.mults.len());
        v.push(self.degree);
        v.extend_from_slice(&self.mults);
        v
    }

    pub(crate) fn from_coordinates(config: &PointConfig, coords: &[i64]) -> DivisorClass {
        assert_eq!(coords.len(), config.len() + 1);
        DivisorClass {
            degree: coords[0],
            mults: coords[1..].to_vec(),
            config: config.id(),
        }
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DivisorClass", 2)?;
        s.serialize_field("degree", &self.degree)?;
        s.serialize_field("mults", &self.mults)?;
        s.end()
    }
}

impl std::fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({};", self.degree)?;
        for (i, m) in self.mults.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Self-intersection and arithmetic genus of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NumericalRecord {
    /// `nu = d^2 - sum m_i^2`
    pub nu: i64,
    /// `g = C(d-1, 2) - sum C(m_i, 2)`
    pub genus: i64,
}

/// Canonical class `K = (-3; -1, ..., -1)` of the blow-up.
pub fn canonical_class(config: &PointConfig) -> DivisorClass {
    DivisorClass {
        degree: -3,
        mults: vec![-1; config.len()],
        config: config.id(),
    }
}

/// Gram matrix of the standard basis `(L, E_1, ..., E_n)`,
/// i.e. `diag(1, -1, ..., -1)`.
pub fn gram_matrix(config: &PointConfig) -> Vec<Vec<i64>> {
    let n = config.len() + 1;
    let mut g = vec![vec![0i64; n]; n];
    g[0][0] = 1;
    for (i, row) in g.iter_mut().enumerate().skip(1) {
        row[i] = -1;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::PointConfig;
    use proptest::prelude::*;

    fn proper(n: usize) -> PointConfig {
        PointConfig::proper_points(n)
    }

    #[test]
    fn pairing_examples() {
        let cfg = proper(3);
        let quad = DivisorClass::over(&cfg, 2, vec![1, 1, 1]).unwrap();
        assert_eq!(quad.intersect(&quad).unwrap(), 1);

        let line = DivisorClass::line(&cfg);
        let e1 = DivisorClass::exceptional(&cfg, 0);
        assert_eq!(line.intersect(&e1).unwrap(), 0);

        let cfg5 = proper(5);
        let a = DivisorClass::over(&cfg5, 3, vec![1, 1, 1, 1, 1]).unwrap();
        let b = DivisorClass::over(&cfg5, 3, vec![2, 1, 1, 1, 0]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), 4);
    }

    #[test]
    fn canonical_class_examples() {
        let empty = proper(0);
        let k = canonical_class(&empty);
        assert_eq!(k.degree(), -3);
        assert!(k.mults().is_empty());

        let cfg = proper(3);
        let k = canonical_class(&cfg);
        assert_eq!(k.mults(), &[-1, -1, -1]);
        let line = DivisorClass::line(&cfg);
        assert_eq!(k.intersect(&line).unwrap(), -3);
    }

    #[test]
    fn numerical_record_examples() {
        let cfg = proper(3);
        let quad = DivisorClass::over(&cfg, 2, vec![1, 1, 1]).unwrap();
        let rec = quad.numerical_record();
        assert_eq!(rec, NumericalRecord { nu: 1, genus: 0 });

        // C(-1, 2) = 1, so the zero class has genus 1.
        let zero = DivisorClass::zero(&cfg);
        assert_eq!(zero.numerical_record(), NumericalRecord { nu: 0, genus: 1 });

        let cfg8 = proper(8);
        let sext = DivisorClass::over(&cfg8, 6, vec![2; 8]).unwrap();
        assert_eq!(sext.numerical_record(), NumericalRecord { nu: 4, genus: 2 });
    }

    #[test]
    fn riemann_roch_examples() {
        let cfg = proper(3);
        let zero = DivisorClass::zero(&cfg);
        assert_eq!(zero.riemann_roch_chi(&cfg, 1).unwrap(), 1);

        let line = DivisorClass::line(&cfg);
        assert_eq!(line.riemann_roch_chi(&cfg, 1).unwrap(), 3);

        let quad = DivisorClass::over(&cfg, 2, vec![1, 1, 1]).unwrap();
        assert_eq!(quad.riemann_roch_chi(&cfg, 1).unwrap(), 3);
    }

    #[test]
    fn config_mismatch_is_an_error() {
        let a = DivisorClass::line(&proper(3));
        let b = DivisorClass::line(&proper(4));
        assert_eq!(a.intersect(&b), Err(LatticeError::ConfigMismatch));
    }

    #[test]
    fn signature_of_the_form() {
        for n in 0..6 {
            let cfg = proper(n);
            let g = gram_matrix(&cfg);
            assert_eq!(crate::exact::inertia(&g), (1, n, 0));
        }
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_and_bilinear(
            da in -6i64..7, db in -6i64..7, dc in -6i64..7,
            ma in proptest::collection::vec(-5i64..6, 4),
            mb in proptest::collection::vec(-5i64..6, 4),
            mc in proptest::collection::vec(-5i64..6, 4),
        ) {
            let cfg = proper(4);
            let a = DivisorClass::over(&cfg, da, ma).unwrap();
            let b = DivisorClass::over(&cfg, db, mb).unwrap();
            let c = DivisorClass::over(&cfg, dc, mc).unwrap();
            prop_assert_eq!(a.dot(&b), b.dot(&a));
            prop_assert_eq!(a.plus(&b).dot(&c), a.dot(&c) + b.dot(&c));
        }

        #[test]
        fn adjunction_identity(
            d in -6i64..7,
            m in proptest::collection::vec(-5i64..6, 5),
        ) {
            let cfg = proper(5);
            let l = DivisorClass::over(&cfg, d, m).unwrap();
            let k = canonical_class(&cfg);
            let lhs = l.dot(&l.plus(&k));
            prop_assert_eq!(lhs, 2 * l.arithmetic_genus() - 2);
        }
    }
}
