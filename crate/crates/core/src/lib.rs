//! Exact-arithmetic birational geometry of rational surfaces.
//!
//! This crate computes with the numerical side of the birational geometry of
//! the projective plane and of ruled surfaces. Everything is integer or
//! rational arithmetic; there is no floating point anywhere.
//!
//! The main pieces:
//!
//! - [`lattice`] — the Picard lattice of a blown-up plane: classes
//!   `(d; m_1, ..., m_n)`, the intersection pairing, canonical class, genus
//!   and Riemann-Roch.
//! - [`points`] — point configurations with infinitely near points,
//!   proximity and satellite relations.
//! - [`cremona`] — quadratic Cremona transformations acting on divisor
//!   classes, homaloidal-net validation, degree reduction and orbit tests.
//! - [`factorization`] — the classical Noether-Castelnuovo descent: every
//!   plane Cremona map factors through quadratic transformations, driven by
//!   the simplicity triple `(k, h, s)`.
//! - [`sarkisov`] — the Sarkisov untwisting algorithm through links I-IV,
//!   tracking the degree `(mu, lambda, ell)` on plane and scroll models.
//! - [`fibration`] — Zariski's lemma for fibre matrices, exact lattice
//!   signatures, the canonical bundle formula for elliptic fibrations,
//!   plurigenus bounds, Riemann-Hurwitz arithmetic and the Bagnera-De
//!   Franchis pluricanonical orders.
//! - [`classifier`] — the Enriques-Kodaira / P12 decision oracle over
//!   surface invariant records.
//! - [`cone`] — Kleiman-Mori cone examples: Hirzebruch surfaces, the
//!   three-collinear-points blow-up, (-1)-curve enumeration, and the
//!   product-of-elliptic-curves membership test.
//!
//! With the default `parallel` feature, bulk enumerations and batch checks
//! use rayon; disabling the feature yields a fully sequential build with the
//! same results.

#![forbid(unsafe_code)]

pub mod classifier;
pub mod cone;
pub mod cremona;
pub(crate) mod exact;
pub mod factorization;
pub mod fibration;
pub mod lattice;
pub(crate) mod par;
pub mod points;
pub mod sarkisov;

pub use lattice::{DivisorClass, NumericalRecord};
pub use points::{PointConfig, PointId, PointNode};
