//! Quadratic Cremona transformations acting on divisor classes.
//!
//! A quadratic transformation is determined by a net of conics through three
//! base points. Depending on the proximity structure of the base triple it is
//! of one of three kinds:
//!
//! - type I: three distinct proper points;
//! - type II: two proper points and a point in the first neighbourhood of
//!   one of them;
//! - type III: a chain `p2 >1 p1 >1 p0` with `p2` not satellite.
//!
//! On the lattice, the transformation based at slots `i, j, k` acts by
//!
//! ```text
//! d'   = 2d - m_i - m_j - m_k
//! m_i' = d - m_j - m_k     (and cyclically)
//! ```
//!
//! with every other multiplicity unchanged. The action is an involution and
//! an isometry of the intersection form, so it preserves self-intersection,
//! genus and the homaloidal conditions `d^2 - sum m^2 = 1`,
//! `3(d-1) = sum m`. After a transformation the three base slots hold fresh
//! points (the images of the three contracted curves) and proximity data at
//! the base is consumed.

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{canonical_class, DivisorClass, LatticeError};
use crate::points::{proximity_check, ConfigError, PointConfig, PointId, PointNode};

/// Proximity shape of the base triple of a quadratic map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuadraticMapKind {
    /// Three distinct proper points.
    TypeI,
    /// `p1` in the first neighbourhood of `p0`, third point proper.
    TypeII,
    /// Chain `p2 >1 p1 >1 p0` with `p2` free (not satellite).
    TypeIII,
}

/// A quadratic transformation, identified by its base triple.
///
/// For type II the base is stored as `(root, child, proper)`; for type III
/// as the chain `(root, middle, top)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticMap {
    pub base: [PointId; 3],
    pub kind: QuadraticMapKind,
}

/// Errors from the Cremona layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CremonaError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("base triple is not a valid quadratic map: {0}")]
    InvalidBase(String),
    #[error("class is not homaloidal: {0}")]
    NotHomaloidal(HomaloidalViolation),
    #[error("class is not a (-1)-class (needs E^2 = E.K = -1)")]
    NotMinusOneClass,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported proximity structure: {0}")]
    UnsupportedProximity(String),
}

impl QuadraticMap {
    /// Classifies the triple `ids` against the configuration and returns the
    /// map with its base in canonical order, or an error when the triple is
    /// not one of the three admissible shapes (or is declared collinear).
    pub fn based_at(
        config: &PointConfig,
        ids: [PointId; 3],
    ) -> Result<QuadraticMap, CremonaError> {
        if ids[0] == ids[1] || ids[1] == ids[2] || ids[0] == ids[2] {
            return Err(CremonaError::InvalidBase("base points must be distinct".into()));
        }
        for id in ids {
            config.node(id)?;
        }
        let in_triple = |p: Option<PointId>| p.is_some_and(|p| ids.contains(&p));
        // points of the triple whose parent is inside the triple
        let children: Vec<PointId> = ids
            .iter()
            .copied()
            .filter(|&id| in_triple(config.node(id).unwrap().parent))
            .collect();
        let proper: Vec<PointId> = ids
            .iter()
            .copied()
            .filter(|&id| config.node(id).unwrap().parent.is_none())
            .collect();
        if proper.len() + children.len() != 3 {
            return Err(CremonaError::InvalidBase(
                "base points must be proper or infinitely near another base point".into(),
            ));
        }
        match (proper.len(), children.len()) {
            (3, 0) => {
                if config.is_declared_collinear(ids[0], ids[1], ids[2]) {
                    return Err(CremonaError::InvalidBase(
                        "base triple is declared collinear".into(),
                    ));
                }
                Ok(QuadraticMap {
                    base: ids,
                    kind: QuadraticMapKind::TypeI,
                })
            }
            (2, 1) => {
                let child = children[0];
                let root = config.node(child)?.parent.unwrap();
                if config.is_satellite(child)? {
                    return Err(CremonaError::InvalidBase(
                        "infinitely near base point may not be satellite".into(),
                    ));
                }
                let other = ids
                    .into_iter()
                    .find(|&id| id != child && id != root)
                    .unwrap();
                Ok(QuadraticMap {
                    base: [root, child, other],
                    kind: QuadraticMapKind::TypeII,
                })
            }
            (1, 2) => {
                let root = proper[0];
                let mid = children
                    .iter()
                    .copied()
                    .find(|&id| config.node(id).unwrap().parent == Some(root))
                    .ok_or_else(|| {
                        CremonaError::InvalidBase(
                            "two base points share the same parent".into(),
                        )
                    })?;
                let top = children.iter().copied().find(|&id| id != mid).unwrap();
                if config.node(top)?.parent != Some(mid) {
                    return Err(CremonaError::InvalidBase(
                        "two base points share the same parent".into(),
                    ));
                }
                if config.is_satellite(top)? {
                    return Err(CremonaError::InvalidBase(
                        "top of the chain may not be satellite".into(),
                    ));
                }
                Ok(QuadraticMap {
                    base: [root, mid, top],
                    kind: QuadraticMapKind::TypeIII,
                })
            }
            _ => unreachable!(),
        }
    }

    /// Root of the base (the proper point), for types II and III.
    fn root(&self) -> PointId {
        self.base[0]
    }
}

/// Integer matrix acting on class coordinates `(d, m_1, ..., m_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeAction {
    dim: usize,
    entries: Vec<i64>, // row-major, dim x dim
}

impl LatticeAction {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        LatticeAction { dim, entries }
    }

    /// The action of a quadratic map based at the given coordinate slots
    /// (`1 + slot` in class coordinates, slot 0 being the degree).
    pub fn quadratic(dim: usize, slots: [usize; 3]) -> Self {
        let mut m = Self::identity(dim);
        let [i, j, k] = [slots[0] + 1, slots[1] + 1, slots[2] + 1];
        let set = |m: &mut LatticeAction, r: usize, c: usize, v: i64| {
            m.entries[r * dim + c] = v;
        };
        set(&mut m, 0, 0, 2);
        set(&mut m, 0, i, -1);
        set(&mut m, 0, j, -1);
        set(&mut m, 0, k, -1);
        set(&mut m, i, 0, 1);
        set(&mut m, i, i, 0);
        set(&mut m, i, j, -1);
        set(&mut m, i, k, -1);
        set(&mut m, j, 0, 1);
        set(&mut m, j, i, -1);
        set(&mut m, j, j, 0);
        set(&mut m, j, k, -1);
        set(&mut m, k, 0, 1);
        set(&mut m, k, i, -1);
        set(&mut m, k, j, -1);
        set(&mut m, k, k, 0);
        m
    }

    /// Permutation matrix exchanging two multiplicity slots.
    pub fn swap(dim: usize, a: usize, b: usize) -> Self {
        let mut m = Self::identity(dim);
        let (a, b) = (a + 1, b + 1);
        m.entries[a * dim + a] = 0;
        m.entries[b * dim + b] = 0;
        m.entries[a * dim + b] = 1;
        m.entries[b * dim + a] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply_coords(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| self.entries[r * self.dim + c] * v[c])
                    .sum()
            })
            .collect()
    }

    /// `self ∘ rhs` (first `rhs`, then `self`).
    pub fn compose(&self, rhs: &LatticeAction) -> LatticeAction {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut entries = vec![0i64; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[r * d + c] = (0..d)
                    .map(|t| self.entries[r * d + t] * rhs.entries[t * d + c])
                    .sum();
            }
        }
        LatticeAction { dim: d, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// Embeds the action into a larger lattice, acting as the identity on
    /// the appended slots.
    pub fn embedded(&self, dim: usize) -> LatticeAction {
        assert!(dim >= self.dim);
        let mut m = Self::identity(dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.entries[r * dim + c] = self.entries[r * self.dim + c];
            }
        }
        m
    }
}

/// Applies the quadratic map to a class, returning the transformed
/// configuration and class.
///
/// The class need not be homaloidal: the same lattice action moves any
/// divisor class. The three base slots of the new configuration hold fresh
/// points; proximity through the base is rewired as the contracted curves
/// dictate and declared collinearities involving base points are dropped.
pub fn quadratic_transform(
    class: &DivisorClass,
    config: &PointConfig,
    map: &QuadraticMap,
) -> Result<(PointConfig, DivisorClass), CremonaError> {
    if class.config_id() != config.id() {
        return Err(CremonaError::Lattice(LatticeError::ConfigMismatch));
    }
    let new_config = transform_config(config, map)?;
    let action = lattice_action(config, map)?;
    let coords = action.apply_coords(&class.coordinates());
    Ok((
        new_config.clone(),
        DivisorClass::from_coordinates(&new_config, &coords),
    ))
}

/// Lattice action matrix of a quadratic map over `config`.
pub fn lattice_action(
    config: &PointConfig,
    map: &QuadraticMap,
) -> Result<LatticeAction, CremonaError> {
    let slots = [
        config.position(map.base[0])?,
        config.position(map.base[1])?,
        config.position(map.base[2])?,
    ];
    Ok(LatticeAction::quadratic(config.len() + 1, slots))
}

/// Rewires the configuration across a quadratic transformation.
fn transform_config(
    config: &PointConfig,
    map: &QuadraticMap,
) -> Result<PointConfig, CremonaError> {
    use QuadraticMapKind::*;
    let base = map.base;
    let in_base = |id: PointId| base.contains(&id);
    let root = map.root();
    let mut nodes = Vec::with_capacity(config.len());
    for node in config.points() {
        if in_base(node.id) {
            // fresh points at the base slots, shaped like the inverse map;
            // only the free auxiliary slot of type II is generic, the
            // root/chain slots carry proximity structure
            let fresh = match map.kind {
                TypeI => PointNode::generic(node.id),
                TypeII => {
                    if node.id == base[0] {
                        PointNode::proper(base[0])
                    } else if node.id == base[1] {
                        PointNode::first_neighborhood(base[1], base[0])
                    } else {
                        PointNode::generic(node.id)
                    }
                }
                TypeIII => {
                    if node.id == base[0] {
                        PointNode::proper(base[0])
                    } else if node.id == base[1] {
                        PointNode::first_neighborhood(base[1], base[0])
                    } else {
                        PointNode::first_neighborhood(base[2], base[1])
                    }
                }
            };
            nodes.push(fresh);
            continue;
        }
        let mut parent = node.parent;
        let mut prox = node.proximate_to.clone();
        if let Some(p) = node.parent {
            if in_base(p) {
                let satellite_of_root = prox.contains(&root) && root != p;
                match map.kind {
                    TypeI => {
                        // exceptional curves become lines: children of a base
                        // point turn proper
                        parent = None;
                        prox.clear();
                    }
                    TypeII => {
                        if p == root {
                            // the root's exceptional curve is contracted to
                            // the fresh root
                            parent = Some(root);
                            prox = [root].into();
                        } else if p == base[1] {
                            if satellite_of_root {
                                // satellite to the root through the chain:
                                // lands in the first neighbourhood of the
                                // fresh root
                                parent = Some(root);
                                prox = [root].into();
                            } else {
                                parent = None;
                                prox.clear();
                            }
                        } else {
                            // child of the auxiliary proper point
                            parent = None;
                            prox.clear();
                        }
                    }
                    TypeIII => {
                        if p == root {
                            parent = Some(root);
                            prox = [root].into();
                        } else if p == base[1] {
                            // first neighbourhood of the middle point maps
                            // over the fresh middle point; a satellite to the
                            // root stays satellite
                            parent = Some(base[1]);
                            prox = if satellite_of_root {
                                [base[1], root].into()
                            } else {
                                [base[1]].into()
                            };
                        } else {
                            // children of the top point: its exceptional
                            // curve becomes a line, except that a satellite
                            // to the middle point lands over the fresh middle
                            if prox.contains(&base[1]) {
                                parent = Some(base[1]);
                                prox = [base[1]].into();
                            } else {
                                parent = None;
                                prox.clear();
                            }
                        }
                    }
                }
            } else {
                // parent survives; second proximities into the base resolve
                // as the contracted curves dictate
                for b in base {
                    if b == p || !prox.contains(&b) {
                        continue;
                    }
                    let keep = match map.kind {
                        // every exceptional curve of the base becomes a line
                        TypeI => false,
                        // the root's exceptional curve is the fresh root's
                        // exceptional curve, so satellites to the root stay;
                        // the other exceptional curves become lines
                        TypeII => b == root,
                        TypeIII => {
                            if b == base[1] {
                                // satellite into the middle of the chain with
                                // an external parent: the image is not
                                // expressible with the data we track
                                return Err(CremonaError::UnsupportedProximity(format!(
                                    "point {} is satellite to base point {} with an external parent",
                                    node.id, b
                                )));
                            }
                            b == root
                        }
                    };
                    if !keep {
                        prox.remove(&b);
                    }
                }
            }
        }
        nodes.push(PointNode {
            id: node.id,
            parent,
            proximate_to: prox,
            generic: node.generic,
        });
    }
    let collinear: Vec<[PointId; 3]> = config
        .collinear_triples()
        .filter(|t| t.iter().all(|id| !in_base(*id)))
        .copied()
        .collect();
    Ok(config.replace_nodes(nodes, collinear)?)
}

// -------------------------------------------------------------------------
// homaloidal nets
// -------------------------------------------------------------------------

/// First failed homaloidal condition, in check order.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum HomaloidalViolation {
    #[error("d^2 - sum m_i^2 = {0}, expected 1")]
    SelfIntersection(i64),
    #[error("3(d-1) = {expected} but sum m_i = {got}")]
    DegreeSum { expected: i64, got: i64 },
    #[error("negative multiplicity at slot {0}")]
    NegativeMultiplicity(usize),
    #[error("proximity inequality fails")]
    Proximity,
    #[error("largest multiplicity m0 = {m0} violates 3 m0 > d = {d}")]
    MaxMultiplicity { m0: i64, d: i64 },
}

/// Checks the homaloidal-net conditions, naming the first failure.
pub fn homaloidal_diagnostics(
    class: &DivisorClass,
    config: &PointConfig,
) -> Result<(), HomaloidalViolation> {
    let nu = class.self_intersection();
    if nu != 1 {
        return Err(HomaloidalViolation::SelfIntersection(nu));
    }
    let sum: i64 = class.mults().iter().sum();
    let expected = 3 * (class.degree() - 1);
    if sum != expected {
        return Err(HomaloidalViolation::DegreeSum { expected, got: sum });
    }
    if let Some(slot) = class.mults().iter().position(|&m| m < 0) {
        return Err(HomaloidalViolation::NegativeMultiplicity(slot));
    }
    if !proximity_check(class, config).unwrap_or(false) {
        return Err(HomaloidalViolation::Proximity);
    }
    let d = class.degree();
    if d >= 2 {
        let m0 = class.mults().iter().copied().max().unwrap_or(0);
        if 3 * m0 <= d {
            return Err(HomaloidalViolation::MaxMultiplicity { m0, d });
        }
    }
    Ok(())
}

/// True iff the class satisfies every homaloidal-net condition.
pub fn is_homaloidal(class: &DivisorClass, config: &PointConfig) -> bool {
    homaloidal_diagnostics(class, config).is_ok()
}

/// A validated homaloidal net: `d^2 - sum m^2 = 1`, `3(d-1) = sum m`,
/// non-negative multiplicities satisfying the proximity inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomaloidalNet {
    pub cls: DivisorClass,
    pub config: PointConfig,
}

impl HomaloidalNet {
    pub fn new(cls: DivisorClass, config: PointConfig) -> Result<Self, CremonaError> {
        if cls.config_id() != config.id() {
            return Err(CremonaError::Lattice(LatticeError::ConfigMismatch));
        }
        homaloidal_diagnostics(&cls, &config).map_err(CremonaError::NotHomaloidal)?;
        Ok(HomaloidalNet { cls, config })
    }

    pub fn degree(&self) -> i64 {
        self.cls.degree()
    }
}

/// The De Jonquieres net `(d; d-1, 1^(2d-2))` over a configuration with
/// exactly `2d - 1` points (the first carrying the big multiplicity).
pub fn de_jonquieres(d: i64, config: &PointConfig) -> Result<HomaloidalNet, CremonaError> {
    if d < 2 {
        return Err(CremonaError::Precondition("degree must be at least 2".into()));
    }
    let want = (2 * d - 1) as usize;
    if config.len() != want {
        return Err(CremonaError::Precondition(format!(
            "degree {d} needs exactly {want} points, configuration has {}",
            config.len()
        )));
    }
    let mut mults = vec![d - 1];
    mults.extend(std::iter::repeat_n(1, (2 * d - 2) as usize));
    let cls = DivisorClass::over(config, d, mults)?;
    HomaloidalNet::new(cls, config.clone())
}

// -------------------------------------------------------------------------
// degree descent on (-1)-classes and orbit growth
// -------------------------------------------------------------------------

/// Slots of the three largest multiplicities, sorted by multiplicity
/// descending with ties broken by slot order.
fn top_three_slots(class: &DivisorClass) -> Vec<usize> {
    let mut slots: Vec<usize> = (0..class.n_points()).collect();
    slots.sort_by_key(|&s| (-class.mult(s), s));
    slots.truncate(3);
    slots
}

/// One degree-lowering step: when `(m3 - 1) nu >= 2 m3 (g - 1)` holds with
/// the required side conditions, the quadratic map based at the three points
/// of largest multiplicity lowers the degree.
///
/// Returns the base slots and the transformed class, or `None` when the
/// criterion does not apply (in particular for `(3m; m^9)`).
pub fn degree_reduction_step(
    class: &DivisorClass,
    config: &PointConfig,
) -> Result<Option<([PointId; 3], PointConfig, DivisorClass)>, CremonaError> {
    if class.n_points() < 3 {
        return Ok(None);
    }
    let slots = top_three_slots(class);
    let (m1, m3) = (class.mult(slots[0]), class.mult(slots[2]));
    if m3 < 1 {
        return Ok(None);
    }
    let rec = class.numerical_record();
    let lhs = (m3 - 1) * rec.nu;
    let rhs = 2 * m3 * (rec.genus - 1);
    let applies = if lhs > rhs {
        true
    } else if lhs == rhs {
        // equality: need m3 < m1, or all three equal and d != 3m
        m3 < m1 || class.degree() != 3 * m3
    } else {
        false
    };
    if !applies {
        return Ok(None);
    }
    let ids = [
        config.id_at(slots[0]),
        config.id_at(slots[1]),
        config.id_at(slots[2]),
    ];
    let map = QuadraticMap::based_at(config, ids)?;
    let (cfg, out) = quadratic_transform(class, config, &map)?;
    debug_assert!(out.degree() < class.degree());
    Ok(Some((ids, cfg, out)))
}

/// The move sequence bringing a (-1)-class to an exceptional class.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub moves: Vec<QuadraticMap>,
    pub final_config: PointConfig,
    pub final_class: DivisorClass,
}

/// Reduces a `(-1)`-class (`E^2 = E.K = -1`) to an exceptional class by
/// degree-lowering quadratic maps.
///
/// Terminates because the degree strictly decreases. At degree 1 (a line
/// through two points) one more quadratic map finishes the job; when no
/// third point is available a fresh generic point is appended first.
pub fn reduce_to_exceptional(
    class: &DivisorClass,
    config: &PointConfig,
) -> Result<ReductionTrace, CremonaError> {
    let k = canonical_class(config);
    if class.self_intersection() != -1 || class.intersect(&k)? != -1 {
        return Err(CremonaError::NotMinusOneClass);
    }
    let mut cur = class.clone();
    let mut cfg = config.clone();
    let mut moves = Vec::new();
    while cur.degree() > 1 {
        match degree_reduction_step(&cur, &cfg)? {
            Some((ids, ncfg, ncls)) => {
                moves.push(QuadraticMap::based_at(&cfg, ids)?);
                cfg = ncfg;
                cur = ncls;
            }
            None => {
                return Err(CremonaError::Precondition(
                    "degree descent stalled on a (-1)-class".into(),
                ))
            }
        }
    }
    if cur.degree() == 1 {
        // a line through two points: close with a map through a third point
        let through: Vec<usize> = (0..cur.n_points()).filter(|&s| cur.mult(s) == 1).collect();
        if through.len() != 2 {
            return Err(CremonaError::Precondition(
                "degree-one (-1)-class is not a line through two points".into(),
            ));
        }
        let third = (0..cur.n_points()).find(|s| !through.contains(s));
        let (cfg3, third_id) = match third {
            Some(s) => (cfg.clone(), cfg.id_at(s)),
            None => {
                let (ext, id) = cfg.with_appended_generic();
                cur = cur.zero_extended(&ext);
                (ext, id)
            }
        };
        cfg = cfg3;
        let ids = [cfg.id_at(through[0]), cfg.id_at(through[1]), third_id];
        let map = QuadraticMap::based_at(&cfg, ids)?;
        let (ncfg, ncls) = quadratic_transform(&cur, &cfg, &map)?;
        moves.push(map);
        cfg = ncfg;
        cur = ncls;
    }
    debug_assert_eq!(cur.degree(), 0);
    Ok(ReductionTrace {
        moves,
        final_config: cfg,
        final_class: cur,
    })
}

/// Whether the orbit of the class under quadratic maps and permutations is
/// infinite, for `n >= 9` points and `nu >= 2g - 2`.
///
/// Returns the degree-raising quadratic map based at the three smallest
/// multiplicities as a witness (`m_n + m_(n-1) + m_(n-2) < d`), except in the
/// single bounded case `n = 9`, `d = 3m`, all multiplicities equal.
pub fn orbit_unbounded(
    class: &DivisorClass,
    config: &PointConfig,
) -> Result<(bool, Option<QuadraticMap>), CremonaError> {
    let n = class.n_points();
    if n < 9 {
        return Err(CremonaError::Precondition("need at least 9 points".into()));
    }
    let rec = class.numerical_record();
    if rec.nu < 2 * rec.genus - 2 {
        return Err(CremonaError::Precondition("need nu >= 2g - 2".into()));
    }
    let mut slots: Vec<usize> = (0..n).collect();
    slots.sort_by_key(|&s| (class.mult(s), s));
    let smallest_sum: i64 = slots[..3].iter().map(|&s| class.mult(s)).sum();
    if smallest_sum >= class.degree() {
        // forces n = 9, d = 3m, all multiplicities equal: bounded orbit
        return Ok((false, None));
    }
    let ids = [
        config.id_at(slots[0]),
        config.id_at(slots[1]),
        config.id_at(slots[2]),
    ];
    let map = QuadraticMap::based_at(config, ids)?;
    Ok((true, Some(map)))
}
