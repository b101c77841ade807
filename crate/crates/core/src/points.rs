//! Point configurations with infinitely near structure.
//!
//! A configuration is an ordered forest of points. A point is *proper* when
//! it has no parent, and *infinitely near* otherwise: it lives on the
//! exceptional divisor of the blow-up at its parent. A point `q` is
//! *proximate* to `p` (written `q -> p`) when it lies on the strict transform
//! of the exceptional divisor over `p`; the parent is always proximate, and a
//! point proximate to two points is *satellite*. A planar point can be
//! proximate to at most two others, which is enforced as a validity rule.
//!
//! For a class with multiplicities `m_p` the *proximity inequality* requires
//! `m_p >= sum of m_q over q -> p` at every point.
//!
//! Collinearity of proper points is optional side data (declared triples);
//! absent declarations mean general position. Fresh points introduced by
//! transformations are flagged `generic`: they are proper, non-proximate and
//! non-collinear with everything else.

use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{DivisorClass, LatticeError};

/// Identifier of a point inside a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointId(pub u32);

impl std::fmt::Display for PointId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Structural identity of a configuration, derived from its content.
///
/// Classes remember the identifier of the configuration they were built
/// over; operations on classes from different configurations fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConfigId(u64);

/// One point of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointNode {
    pub id: PointId,
    /// Absent for a proper point.
    #[serde(default)]
    pub parent: Option<PointId>,
    /// Points this one is proximate to; contains the parent when present.
    #[serde(default)]
    pub proximate_to: BTreeSet<PointId>,
    /// Fresh general-position point introduced by a transformation.
    #[serde(default)]
    pub generic: bool,
}

impl PointNode {
    pub fn proper(id: PointId) -> Self {
        PointNode {
            id,
            parent: None,
            proximate_to: BTreeSet::new(),
            generic: false,
        }
    }

    pub fn generic(id: PointId) -> Self {
        PointNode {
            id,
            parent: None,
            proximate_to: BTreeSet::new(),
            generic: true,
        }
    }

    /// First-order infinitely near point: `id > parent`, proximate to it.
    pub fn first_neighborhood(id: PointId, parent: PointId) -> Self {
        PointNode {
            id,
            parent: Some(parent),
            proximate_to: [parent].into(),
            generic: false,
        }
    }

    /// Satellite point: proximate to its parent and to one more point.
    pub fn satellite(id: PointId, parent: PointId, other: PointId) -> Self {
        PointNode {
            id,
            parent: Some(parent),
            proximate_to: [parent, other].into(),
            generic: false,
        }
    }
}

/// Errors raised when building or querying a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("duplicate point id {0}")]
    DuplicateId(PointId),
    #[error("unknown point id {0}")]
    UnknownId(PointId),
    #[error("point {0}: parent must precede the point")]
    ParentOrder(PointId),
    #[error("point {0}: parent must belong to proximate_to")]
    ParentNotProximate(PointId),
    #[error("point {0}: a proper point cannot be proximate to anything")]
    ProperWithProximity(PointId),
    #[error("point {0}: a point is proximate to at most two points")]
    TooManyProximities(PointId),
    #[error("point {0}: proximate points must precede the point")]
    ProximityOrder(PointId),
    #[error("point {0}: may only be proximate to ancestors")]
    ProximityNotAncestor(PointId),
    #[error("point {0}: second proximity target must be proximate to the parent")]
    InconsistentSatellite(PointId),
    #[error("collinear triple must consist of three distinct proper points")]
    BadCollinearTriple,
    #[error("point {0}: generic points must be proper, free and non-collinear")]
    BadGenericPoint(PointId),
}

/// An ordered configuration of proper and infinitely near points, plus
/// optional collinearity declarations among proper points.
#[derive(Debug, Clone)]
pub struct PointConfig {
    points: Vec<PointNode>,
    collinear: BTreeSet<[PointId; 3]>,
    index: BTreeMap<PointId, usize>,
    id: ConfigId,
}

impl PartialEq for PointConfig {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.collinear == other.collinear
    }
}
impl Eq for PointConfig {}

impl PointConfig {
    /// Builds and validates a configuration.
    pub fn new(
        points: Vec<PointNode>,
        collinear: Vec<[PointId; 3]>,
    ) -> Result<Self, ConfigError> {
        let mut index = BTreeMap::new();
        for (pos, node) in points.iter().enumerate() {
            if index.insert(node.id, pos).is_some() {
                return Err(ConfigError::DuplicateId(node.id));
            }
        }
        for (pos, node) in points.iter().enumerate() {
            match node.parent {
                None => {
                    if !node.proximate_to.is_empty() {
                        return Err(ConfigError::ProperWithProximity(node.id));
                    }
                }
                Some(parent) => {
                    let ppos = *index
                        .get(&parent)
                        .ok_or(ConfigError::UnknownId(parent))?;
                    if ppos >= pos {
                        return Err(ConfigError::ParentOrder(node.id));
                    }
                    if !node.proximate_to.contains(&parent) {
                        return Err(ConfigError::ParentNotProximate(node.id));
                    }
                    if node.proximate_to.len() > 2 {
                        return Err(ConfigError::TooManyProximities(node.id));
                    }
                    // ancestors of the node via the parent chain
                    let mut ancestors = BTreeSet::new();
                    let mut cur = node.parent;
                    while let Some(a) = cur {
                        ancestors.insert(a);
                        cur = points[index[&a]].parent;
                    }
                    for &t in &node.proximate_to {
                        let tpos = *index.get(&t).ok_or(ConfigError::UnknownId(t))?;
                        if tpos >= pos {
                            return Err(ConfigError::ProximityOrder(node.id));
                        }
                        if !ancestors.contains(&t) {
                            return Err(ConfigError::ProximityNotAncestor(node.id));
                        }
                        if t != parent {
                            // the satellite target must be visible from the
                            // parent: on the strict transform of E_t through
                            // the parent's neighbourhood
                            let pnode = &points[ppos];
                            let visible = pnode.proximate_to.contains(&t)
                                || pnode.parent == Some(t);
                            if !visible {
                                return Err(ConfigError::InconsistentSatellite(node.id));
                            }
                        }
                    }
                }
            }
        }
        let mut triples = BTreeSet::new();
        for t in collinear {
            let mut t = t;
            t.sort();
            if t[0] == t[1] || t[1] == t[2] {
                return Err(ConfigError::BadCollinearTriple);
            }
            for idp in t {
                let pos = *index.get(&idp).ok_or(ConfigError::UnknownId(idp))?;
                if points[pos].parent.is_some() {
                    return Err(ConfigError::BadCollinearTriple);
                }
            }
            triples.insert(t);
        }
        // generic points: proper, nothing proximate to them, non-collinear
        for node in &points {
            if node.generic {
                let free = node.parent.is_none()
                    && points.iter().all(|q| !q.proximate_to.contains(&node.id))
                    && triples.iter().all(|t| !t.contains(&node.id));
                if !free {
                    return Err(ConfigError::BadGenericPoint(node.id));
                }
            }
        }
        let id = Self::content_id(&points, &triples);
        Ok(PointConfig {
            points,
            collinear: triples,
            index,
            id,
        })
    }

    /// A configuration of `n` proper points in general position, ids `0..n`.
    pub fn proper_points(n: usize) -> Self {
        let points = (0..n).map(|i| PointNode::proper(PointId(i as u32))).collect();
        PointConfig::new(points, vec![]).expect("proper points are always valid")
    }

    fn content_id(points: &[PointNode], collinear: &BTreeSet<[PointId; 3]>) -> ConfigId {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for p in points {
            p.id.hash(&mut h);
            p.parent.hash(&mut h);
            for t in &p.proximate_to {
                t.hash(&mut h);
            }
            p.generic.hash(&mut h);
        }
        for t in collinear {
            t.hash(&mut h);
        }
        ConfigId(h.finish())
    }

    pub fn id(&self) -> ConfigId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointNode] {
        &self.points
    }

    pub fn collinear_triples(&self) -> impl Iterator<Item = &[PointId; 3]> {
        self.collinear.iter()
    }

    pub fn position(&self, id: PointId) -> Result<usize, ConfigError> {
        self.index.get(&id).copied().ok_or(ConfigError::UnknownId(id))
    }

    pub fn node(&self, id: PointId) -> Result<&PointNode, ConfigError> {
        Ok(&self.points[self.position(id)?])
    }

    pub fn id_at(&self, slot: usize) -> PointId {
        self.points[slot].id
    }

    /// True when the point is proximate to two points.
    pub fn is_satellite(&self, id: PointId) -> Result<bool, ConfigError> {
        Ok(self.node(id)?.proximate_to.len() == 2)
    }

    /// True when every point is proper.
    pub fn all_proper(&self) -> bool {
        self.points.iter().all(|p| p.parent.is_none())
    }

    /// The points proximate to `id` (its children and satellites).
    pub fn proximate_of(&self, id: PointId) -> Vec<PointId> {
        self.points
            .iter()
            .filter(|q| q.proximate_to.contains(&id))
            .map(|q| q.id)
            .collect()
    }

    pub fn is_declared_collinear(&self, a: PointId, b: PointId, c: PointId) -> bool {
        let mut t = [a, b, c];
        t.sort();
        self.collinear.contains(&t)
    }

    /// Appends a fresh generic proper point, returning the extended
    /// configuration and the new id.
    pub fn with_appended_generic(&self) -> (PointConfig, PointId) {
        let next = self
            .points
            .iter()
            .map(|p| p.id.0)
            .max()
            .map_or(0, |m| m + 1);
        let id = PointId(next);
        let mut points = self.points.clone();
        points.push(PointNode::generic(id));
        let cfg = PointConfig::new(points, self.collinear.iter().copied().collect())
            .expect("appending a generic point preserves validity");
        (cfg, id)
    }

    pub(crate) fn replace_nodes(
        &self,
        new_nodes: Vec<PointNode>,
        collinear: Vec<[PointId; 3]>,
    ) -> Result<PointConfig, ConfigError> {
        PointConfig::new(new_nodes, collinear)
    }
}

/// Proximity inequality: at every point `p`, `m_p >= sum of m_q, q -> p`.
pub fn proximity_check(class: &DivisorClass, config: &PointConfig) -> Result<bool, LatticeError> {
    if class.config_id() != config.id() {
        return Err(LatticeError::ConfigMismatch);
    }
    for (slot, node) in config.points().iter().enumerate() {
        let m_p = class.mult(slot);
        let incoming: i64 = config
            .points()
            .iter()
            .enumerate()
            .filter(|(_, q)| q.proximate_to.contains(&node.id))
            .map(|(qslot, _)| class.mult(qslot))
            .sum();
        if m_p < incoming {
            return Ok(false);
        }
    }
    Ok(true)
}

// -------------------------------------------------------------------------
// serde: the wire form is {"points": [...], "collinear": [[i,j,k], ...]}
// -------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RawConfig {
    points: Vec<PointNode>,
    #[serde(default)]
    collinear: Vec<[PointId; 3]>,
}

impl Serialize for PointConfig {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawConfig {
            points: self.points.clone(),
            collinear: self.collinear.iter().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointConfig {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawConfig::deserialize(deserializer)?;
        PointConfig::new(raw.points, raw.collinear).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_with_satellite() -> PointConfig {
        // p0 proper, p1 >1 p0, p2 >1 p1 with p2 satellite to p0
        PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::satellite(PointId(2), PointId(1), PointId(0)),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn satellite_detection() {
        let cfg = chain_with_satellite();
        assert!(!cfg.is_satellite(PointId(0)).unwrap());
        assert!(!cfg.is_satellite(PointId(1)).unwrap());
        assert!(cfg.is_satellite(PointId(2)).unwrap());
        assert!(cfg.is_satellite(PointId(7)).is_err());
    }

    #[test]
    fn proper_points_are_never_satellite() {
        let cfg = PointConfig::proper_points(4);
        for p in cfg.points() {
            assert!(!cfg.is_satellite(p.id).unwrap());
        }
    }

    #[test]
    fn proximity_inequality() {
        let cfg = PointConfig::proper_points(3);
        let quad = DivisorClass::over(&cfg, 2, vec![1, 1, 1]).unwrap();
        assert!(proximity_check(&quad, &cfg).unwrap());

        // two multiplicity-1 points proximate to a multiplicity-1 point fail
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::satellite(PointId(2), PointId(1), PointId(0)),
            ],
            vec![],
        )
        .unwrap();
        let c = DivisorClass::over(&cfg, 2, vec![1, 1, 1]).unwrap();
        assert!(!proximity_check(&c, &cfg).unwrap());
    }

    #[test]
    fn de_jonquieres_proximity() {
        // (d; d-1, 1^(2d-2)): with s points proximate to the big point the
        // inequality at that point reads d-1 >= s.
        let d = 4i64;
        let mut nodes = vec![PointNode::proper(PointId(0))];
        for i in 1..=(2 * d - 2) as u32 {
            if i <= (d - 1) as u32 {
                nodes.push(PointNode::first_neighborhood(PointId(i), PointId(0)));
            } else {
                nodes.push(PointNode::proper(PointId(i)));
            }
        }
        let cfg = PointConfig::new(nodes, vec![]).unwrap();
        let mut mults = vec![d - 1];
        mults.extend(std::iter::repeat_n(1, (2 * d - 2) as usize));
        let net = DivisorClass::over(&cfg, d, mults).unwrap();
        assert!(proximity_check(&net, &cfg).unwrap());
    }

    #[test]
    fn validation_rejects_bad_data() {
        // parent after the point
        let err = PointConfig::new(
            vec![
                PointNode::first_neighborhood(PointId(0), PointId(1)),
                PointNode::proper(PointId(1)),
            ],
            vec![],
        );
        assert!(err.is_err());

        // three proximities
        let mut node = PointNode::first_neighborhood(PointId(3), PointId(2));
        node.proximate_to.insert(PointId(0));
        node.proximate_to.insert(PointId(1));
        let err = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::satellite(PointId(2), PointId(1), PointId(0)),
                node,
            ],
            vec![],
        );
        assert!(matches!(err, Err(ConfigError::TooManyProximities(_))));

        // collinear triple with an infinitely near point
        let err = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::proper(PointId(2)),
            ],
            vec![[PointId(0), PointId(1), PointId(2)]],
        );
        assert!(matches!(err, Err(ConfigError::BadCollinearTriple)));
    }

    #[test]
    fn proximity_check_is_monotone() {
        use proptest::prelude::*;
        // the inequality at a point is monotone: raising the multiplicity
        // there preserves it, raising the multiplicity of a point proximate
        // to it can only break it
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::satellite(PointId(2), PointId(1), PointId(0)),
                PointNode::proper(PointId(3)),
            ],
            vec![],
        )
        .unwrap();
        let holds_at = |cls: &DivisorClass, target: usize| {
            let id = cfg.id_at(target);
            let incoming: i64 = cfg
                .points()
                .iter()
                .enumerate()
                .filter(|(_, q)| q.proximate_to.contains(&id))
                .map(|(s, _)| cls.mult(s))
                .sum();
            cls.mult(target) >= incoming
        };
        proptest!(|(m in proptest::collection::vec(0i64..5, 4), target in 0usize..4)| {
            let cls = DivisorClass::over(&cfg, 6, m.clone()).unwrap();
            let before = holds_at(&cls, target);

            // raise at the target itself
            let mut up = m.clone();
            up[target] += 1;
            let up_cls = DivisorClass::over(&cfg, 6, up).unwrap();
            if before {
                prop_assert!(holds_at(&up_cls, target));
            }

            // raise at every point proximate to the target
            let id = cfg.id_at(target);
            for (slot, q) in cfg.points().iter().enumerate() {
                if q.proximate_to.contains(&id) {
                    let mut up = m.clone();
                    up[slot] += 1;
                    let up_cls = DivisorClass::over(&cfg, 6, up).unwrap();
                    if !before {
                        prop_assert!(!holds_at(&up_cls, target));
                    }
                }
            }
        });
    }

    #[test]
    fn json_round_trip() {
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::proper(PointId(5)),
            ],
            vec![],
        )
        .unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: PointConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.id(), back.id());
    }
}
