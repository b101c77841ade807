//! The classical Noether-Castelnuovo descent.
//!
//! Every plane Cremona transformation is a composition of projective
//! transformations and quadratic transformations. The descent is driven by
//! the *simplicity* of the homaloidal net `(d; m_0 >= m_1 >= ... >= m_r)`:
//!
//! - `k = d - m_0`;
//! - `h` = the largest index with `m_h > k/2` (with `m_{-1}` read as
//!   infinity, so `h = -1` when no multiplicity clears the threshold);
//! - `s` = the number of satellite points among `p_0, ..., p_h`.
//!
//! One step composes with a quadratic map that strictly lowers `(k, h, s)`
//! lexicographically. There are two cases. When two of the top points
//! support an irreducible conic together with `p_0` (combinatorially: the
//! triple is an admissible quadratic base and is not declared collinear),
//! the map based there drops `k` or `h`. Otherwise all top points are
//! infinitely near `p_0` in satellite chains; the map based at `p_0`, a
//! first-neighbourhood point and a fresh generic point frees one satellite
//! and drops `s`.

use serde::Serialize;

use crate::cremona::{
    lattice_action, quadratic_transform, CremonaError, HomaloidalNet, LatticeAction,
    QuadraticMap, QuadraticMapKind,
};
use crate::lattice::DivisorClass;
use crate::points::{PointConfig, PointId};

/// The simplicity triple of a homaloidal net, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Simplicity {
    /// `k = d - m_0`, at least 1 for degree >= 2.
    pub k: i64,
    /// Largest sorted index with `m_h > k/2`; `-1` when none.
    pub h: i64,
    /// Satellite count among the points of sorted index `0..=h`.
    pub s: i64,
}

impl std::fmt::Display for Simplicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.k, self.h, self.s)
    }
}

/// Point slots sorted by multiplicity descending, ties by slot order.
fn sorted_slots(class: &DivisorClass) -> Vec<usize> {
    let mut slots: Vec<usize> = (0..class.n_points()).collect();
    slots.sort_by_key(|&s| (-class.mult(s), s));
    slots
}

/// The simplicity of a homaloidal net.
pub fn simplicity(net: &HomaloidalNet) -> Simplicity {
    let class = &net.cls;
    let order = sorted_slots(class);
    let m0 = order.first().map_or(0, |&s| class.mult(s));
    let k = class.degree() - m0;
    // m_h > k/2  <=>  2 m_h > k
    let mut h: i64 = -1;
    for (idx, &slot) in order.iter().enumerate() {
        if 2 * class.mult(slot) > k {
            h = idx as i64;
        } else {
            break;
        }
    }
    let mut s = 0;
    for &slot in order.iter().take((h + 1).max(0) as usize) {
        if net.config.is_satellite(net.config.id_at(slot)).unwrap() {
            s += 1;
        }
    }
    Simplicity { k, h, s }
}

/// Which case of the descent produced a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepCase {
    /// Quadratic map based at `p_0` and two admissible top points.
    ConicThroughTop,
    /// Satellite chain: map based at `p_0`, a first-neighbourhood point and
    /// a fresh generic point.
    SatelliteChain,
}

impl std::fmt::Display for StepCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepCase::ConicThroughTop => write!(f, "case 1"),
            StepCase::SatelliteChain => write!(f, "case 2"),
        }
    }
}

/// One descent step.
#[derive(Debug, Clone, Serialize)]
pub struct FactorStep {
    pub case: StepCase,
    pub map: QuadraticMap,
    /// Configuration the map acted over (extended by a fresh point for
    /// satellite-chain steps).
    pub over_config: PointConfig,
    pub net_after: HomaloidalNet,
    pub simplicity_after: Simplicity,
}

/// How the descent ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Terminal {
    /// Degree 1: the net of lines, a projectivity.
    Linear,
    /// Degree 2: a quadratic net.
    Quadratic,
}

/// The full factorization record.
#[derive(Debug, Clone)]
pub struct FactorizationTrace {
    pub initial_simplicity: Simplicity,
    pub steps: Vec<FactorStep>,
    pub terminal: Terminal,
    pub final_net: HomaloidalNet,
}

impl FactorizationTrace {
    /// Composed lattice action of the recorded steps, later steps applied
    /// last, embedded into the lattice of the final configuration.
    ///
    /// Fresh points are only ever appended, so embedding earlier actions as
    /// the identity on later slots is exact.
    pub fn composed_action(&self) -> LatticeAction {
        let dim = self.final_net.config.len() + 1;
        let mut act = LatticeAction::identity(dim);
        for step in &self.steps {
            let local =
                lattice_action(&step.over_config, &step.map).expect("recorded step is valid");
            act = local.embedded(dim).compose(&act);
        }
        act
    }
}

/// One Noether-Castelnuovo step on a homaloidal net of degree at least 3.
///
/// Returns the case, the quadratic map, the configuration the map acted
/// over, and the transformed net; the simplicity of the result is strictly
/// smaller lexicographically.
pub fn nc_step(
    net: &HomaloidalNet,
) -> Result<(StepCase, QuadraticMap, PointConfig, HomaloidalNet), CremonaError> {
    let d = net.degree();
    if d <= 2 {
        return Err(CremonaError::Precondition(format!(
            "net of degree {d} is already {}",
            if d == 2 { "quadratic" } else { "linear" }
        )));
    }
    let class = &net.cls;
    let config = &net.config;
    let order = sorted_slots(class);
    let simp = simplicity(net);
    let h = simp.h;
    debug_assert!(h >= 2, "a homaloidal net of degree >= 3 has h >= 2");
    let p0 = config.id_at(order[0]);

    // case 1: the lexicographically smallest admissible pair of top points
    for i in 1..=h as usize {
        for j in (i + 1)..=h as usize {
            let pi = config.id_at(order[i]);
            let pj = config.id_at(order[j]);
            let Ok(map) = QuadraticMap::based_at(config, [p0, pi, pj]) else {
                continue;
            };
            let Ok((cfg, cls)) = quadratic_transform(class, config, &map) else {
                continue;
            };
            let out = HomaloidalNet::new(cls, cfg)?;
            let after = simplicity(&out);
            if after >= simp {
                return Err(CremonaError::Precondition(format!(
                    "descent failed to lower the simplicity: {simp} -> {after}"
                )));
            }
            return Ok((StepCase::ConicThroughTop, map, config.clone(), out));
        }
    }

    // case 2: every top point is infinitely near p0 in a satellite chain
    if let Some((pi, _pj)) = satellite_chain_pair(config, &order, h, p0) {
        // base p0, p_i and a fresh generic point
        let (ext_cfg, fresh) = config.with_appended_generic();
        let ext_cls = class.zero_extended(&ext_cfg);
        let map = QuadraticMap::based_at(&ext_cfg, [p0, pi, fresh])?;
        let (cfg, cls) = quadratic_transform(&ext_cls, &ext_cfg, &map)?;
        let out = HomaloidalNet::new(cls, cfg)?;
        let after = simplicity(&out);
        if after >= simp {
            return Err(CremonaError::Precondition(format!(
                "descent failed to lower the simplicity: {simp} -> {after}"
            )));
        }
        return Ok((StepCase::SatelliteChain, map, ext_cfg, out));
    }

    Err(CremonaError::Precondition(
        "no descent case applies; the input data is not a homaloidal net of a Cremona map".into(),
    ))
}

/// The smallest sorted-index pair `p_j >1 p_i >1 p0` with `p_j` satellite
/// to `p0`, both among the top block.
fn satellite_chain_pair(
    config: &PointConfig,
    order: &[usize],
    h: i64,
    p0: PointId,
) -> Option<(PointId, PointId)> {
    for j in 1..=h.max(0) as usize {
        let pj = config.id_at(order[j]);
        let Ok(node_j) = config.node(pj) else { continue };
        let Some(pi) = node_j.parent else { continue };
        if pi == p0 || !node_j.proximate_to.contains(&p0) {
            continue;
        }
        let Ok(node_i) = config.node(pi) else { continue };
        if node_i.parent == Some(p0) {
            return Some((pi, pj));
        }
    }
    None
}

/// Runs the descent until the net is quadratic or linear.
pub fn factor(net: &HomaloidalNet) -> Result<FactorizationTrace, CremonaError> {
    let initial = simplicity(net);
    let mut steps = Vec::new();
    let mut current = net.clone();
    let bound = (current.degree() + current.config.len() as i64 + 8).pow(2) as usize * 4;
    let mut guard = bound;
    while current.degree() > 2 {
        let (case, map, over_config, next) = nc_step(&current)?;
        let simp = simplicity(&next);
        steps.push(FactorStep {
            case,
            map,
            over_config,
            net_after: next.clone(),
            simplicity_after: simp,
        });
        current = next;
        guard -= 1;
        if guard == 0 {
            return Err(CremonaError::Precondition(
                "descent did not terminate within the expected bound".into(),
            ));
        }
    }
    let terminal = if current.degree() == 2 {
        Terminal::Quadratic
    } else {
        Terminal::Linear
    };
    Ok(FactorizationTrace {
        initial_simplicity: initial,
        steps,
        terminal,
        final_net: current,
    })
}

/// One move of a decomposition into type I maps: either a quadratic map or
/// a relabeling swap of two slots (a projectivity of the bookkeeping).
#[derive(Debug, Clone, Serialize)]
pub enum DecompositionMove {
    Quadratic(QuadraticMap),
    SwapSlots(PointId, PointId),
}

/// A quadratic map of type II or III rewritten as a word in type I maps.
#[derive(Debug, Clone)]
pub struct QuadraticDecomposition {
    /// Configuration over which the word starts (the original one extended
    /// by the auxiliary generic points).
    pub config: PointConfig,
    /// Auxiliary generic points introduced by the rewriting.
    pub auxiliaries: Vec<PointId>,
    /// The word; quadratic moves are all of type I.
    pub moves: Vec<DecompositionMove>,
}

impl QuadraticDecomposition {
    pub fn type_i_maps(&self) -> Vec<&QuadraticMap> {
        self.moves
            .iter()
            .filter_map(|m| match m {
                DecompositionMove::Quadratic(q) => Some(q),
                DecompositionMove::SwapSlots(..) => None,
            })
            .collect()
    }

    /// Composed action of the word on the extended lattice.
    pub fn composed_action(&self) -> LatticeAction {
        let dim = self.config.len() + 1;
        let mut act = LatticeAction::identity(dim);
        let mut cfg = self.config.clone();
        for mv in &self.moves {
            match mv {
                DecompositionMove::Quadratic(q) => {
                    let local = lattice_action(&cfg, q).expect("move is valid");
                    act = local.compose(&act);
                    let zero = DivisorClass::zero(&cfg);
                    let (ncfg, _) = quadratic_transform(&zero, &cfg, q).expect("move is valid");
                    cfg = ncfg;
                }
                DecompositionMove::SwapSlots(a, b) => {
                    let sa = cfg.position(*a).expect("slot exists");
                    let sb = cfg.position(*b).expect("slot exists");
                    act = LatticeAction::swap(dim, sa, sb).compose(&act);
                }
            }
        }
        act
    }
}

/// Rewrites a type II map as two type I maps, and a type III map as four,
/// with auxiliary generic points.
///
/// The composed action of the word, followed by the recorded slot swaps,
/// agrees with the action of the original map on every class supported away
/// from the auxiliaries.
pub fn decompose_quadratic(
    config: &PointConfig,
    map: &QuadraticMap,
) -> Result<QuadraticDecomposition, CremonaError> {
    match map.kind {
        QuadraticMapKind::TypeI => Err(CremonaError::Precondition(
            "map is already of type I".into(),
        )),
        QuadraticMapKind::TypeII => {
            let [p0, p1, p2] = map.base;
            let (cfg, aux) = config.with_appended_generic();
            // gamma = I(p0, p2, aux) turns p1 into a proper point, then
            // beta = I(p0, p1, p2); the bookkeeping swap p1 <-> aux matches
            // the slots of the composite with those of the original map
            let moves = vec![
                DecompositionMove::Quadratic(QuadraticMap {
                    base: [p0, p2, aux],
                    kind: QuadraticMapKind::TypeI,
                }),
                DecompositionMove::Quadratic(QuadraticMap {
                    base: [p0, p1, p2],
                    kind: QuadraticMapKind::TypeI,
                }),
                DecompositionMove::SwapSlots(p1, aux),
            ];
            Ok(QuadraticDecomposition {
                config: cfg,
                auxiliaries: vec![aux],
                moves,
            })
        }
        QuadraticMapKind::TypeIII => {
            let [p0, p1, p2] = map.base;
            let (cfg1, aux1) = config.with_appended_generic();
            let (cfg2, aux2) = cfg1.with_appended_generic();
            let (cfg3, aux3) = cfg2.with_appended_generic();
            // alpha = beta . gamma with gamma = II(p0, p1, aux1) and
            // beta = II(p0, p1, p2); each type II factor is itself two
            // type I maps, and the swaps commute out to the end
            let moves = vec![
                DecompositionMove::Quadratic(QuadraticMap {
                    base: [p0, aux1, aux2],
                    kind: QuadraticMapKind::TypeI,
                }),
                DecompositionMove::Quadratic(QuadraticMap {
                    base: [p0, p1, aux1],
                    kind: QuadraticMapKind::TypeI,
                }),
                DecompositionMove::Quadratic(QuadraticMap {
                    base: [p0, p2, aux3],
                    kind: QuadraticMapKind::TypeI,
                }),
                DecompositionMove::Quadratic(QuadraticMap {
                    base: [p0, aux2, p2],
                    kind: QuadraticMapKind::TypeI,
                }),
                DecompositionMove::SwapSlots(p1, aux2),
                DecompositionMove::SwapSlots(p1, aux3),
                DecompositionMove::SwapSlots(p2, aux1),
            ];
            Ok(QuadraticDecomposition {
                config: cfg3,
                auxiliaries: vec![aux1, aux2, aux3],
                moves,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cremona::is_homaloidal;
    use crate::points::{PointNode, PointConfig};

    fn proper_net(d: i64, mults: &[i64]) -> HomaloidalNet {
        let cfg = PointConfig::proper_points(mults.len());
        let cls = DivisorClass::over(&cfg, d, mults.to_vec()).unwrap();
        HomaloidalNet::new(cls, cfg).unwrap()
    }

    #[test]
    fn simplicity_examples() {
        // De Jonquieres (d; d-1, 1^(2d-2)) has simplicity (1, 2d-2, s)
        for d in 2..=6 {
            let mut m = vec![d - 1];
            m.extend(std::iter::repeat_n(1, (2 * d - 2) as usize));
            let net = proper_net(d, &m);
            let s = simplicity(&net);
            assert_eq!((s.k, s.h, s.s), (1, 2 * d - 2, 0));
        }
        let quad = proper_net(2, &[1, 1, 1]);
        assert_eq!(simplicity(&quad), Simplicity { k: 1, h: 2, s: 0 });

        let big = proper_net(5, &[2; 6]);
        assert_eq!(simplicity(&big), Simplicity { k: 3, h: 5, s: 0 });
    }

    #[test]
    fn nc_step_on_de_jonquieres() {
        let net = proper_net(3, &[2, 1, 1, 1, 1]);
        let before = simplicity(&net);
        let (case, map, _over, out) = nc_step(&net).unwrap();
        assert_eq!(case, StepCase::ConicThroughTop);
        assert_eq!(map.kind, QuadraticMapKind::TypeI);
        assert_eq!(out.degree(), 2);
        assert!(simplicity(&out) < before);
        assert!(is_homaloidal(&out.cls, &out.config));
    }

    #[test]
    fn nc_step_rejects_quadratic() {
        let net = proper_net(2, &[1, 1, 1]);
        assert!(nc_step(&net).is_err());
    }

    #[test]
    fn nc_step_prefers_conic_case_when_available() {
        // p1 >1 p0, p2 >1 p1 satellite to p0, plus proper simple points:
        // (4; 3, 1, 1, 1, 1, 1, 1) is homaloidal and a proper pair exists.
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::satellite(PointId(2), PointId(1), PointId(0)),
                PointNode::proper(PointId(3)),
                PointNode::proper(PointId(4)),
                PointNode::proper(PointId(5)),
                PointNode::proper(PointId(6)),
            ],
            vec![],
        )
        .unwrap();
        let cls = DivisorClass::over(&cfg, 4, vec![3, 1, 1, 1, 1, 1, 1]).unwrap();
        let net = HomaloidalNet::new(cls, cfg).unwrap();
        let before = simplicity(&net);
        assert_eq!(before.s, 1);
        let (case, _map, _over, out) = nc_step(&net).unwrap();
        assert_eq!(case, StepCase::ConicThroughTop);
        assert!(simplicity(&out) < before);
    }

    #[test]
    fn satellite_chain_pair_selection() {
        // p2 >1 p1 >1 p0 with p2 satellite to p0: the selector finds the
        // pair (p1, p2) whenever the chain sits in the top block
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::satellite(PointId(2), PointId(1), PointId(0)),
            ],
            vec![],
        )
        .unwrap();
        let order = vec![0usize, 1, 2];
        let pair = satellite_chain_pair(&cfg, &order, 2, PointId(0));
        assert_eq!(pair, Some((PointId(1), PointId(2))));

        // a free chain (no satellite) yields nothing
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::first_neighborhood(PointId(2), PointId(1)),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(satellite_chain_pair(&cfg, &order, 2, PointId(0)), None);
    }

    #[test]
    fn satellite_chain_surgery_frees_the_satellite() {
        // the case-2 move is based at p0, p1 and a fresh generic point; it
        // must turn the satellite p2 into a free first-neighbourhood point
        // of the fresh root (the simplicity bookkeeping relies on this)
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::satellite(PointId(2), PointId(1), PointId(0)),
            ],
            vec![],
        )
        .unwrap();
        let (ext, fresh) = cfg.with_appended_generic();
        let map = QuadraticMap::based_at(&ext, [PointId(0), PointId(1), fresh]).unwrap();
        assert_eq!(map.kind, QuadraticMapKind::TypeII);
        let cls = DivisorClass::zero(&ext);
        let (out_cfg, _) = crate::cremona::quadratic_transform(&cls, &ext, &map).unwrap();
        let p2 = out_cfg.node(PointId(2)).unwrap();
        assert_eq!(p2.parent, Some(PointId(0)));
        assert!(!out_cfg.is_satellite(PointId(2)).unwrap());
    }

    #[test]
    fn factor_terminates_and_descends() {
        let net = proper_net(5, &[2; 6]);
        let trace = factor(&net).unwrap();
        assert_eq!(trace.terminal, Terminal::Quadratic);
        assert!(trace.steps.len() >= 2);
        let mut last = trace.initial_simplicity;
        for step in &trace.steps {
            assert!(step.simplicity_after < last);
            last = step.simplicity_after;
            assert!(is_homaloidal(&step.net_after.cls, &step.net_after.config));
        }

        let quad = proper_net(2, &[1, 1, 1]);
        let trace = factor(&quad).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.terminal, Terminal::Quadratic);
    }

    #[test]
    fn decompose_type_ii_matches_action() {
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::proper(PointId(2)),
            ],
            vec![],
        )
        .unwrap();
        let map = QuadraticMap::based_at(&cfg, [PointId(0), PointId(1), PointId(2)]).unwrap();
        assert_eq!(map.kind, QuadraticMapKind::TypeII);
        let dec = decompose_quadratic(&cfg, &map).unwrap();
        assert_eq!(dec.type_i_maps().len(), 2);

        let dim = dec.config.len() + 1;
        let word = dec.composed_action();
        let original = lattice_action(&cfg, &map).unwrap().embedded(dim);
        assert_eq!(word, original);
    }

    #[test]
    fn decompose_type_iii_matches_action() {
        let cfg = PointConfig::new(
            vec![
                PointNode::proper(PointId(0)),
                PointNode::first_neighborhood(PointId(1), PointId(0)),
                PointNode::first_neighborhood(PointId(2), PointId(1)),
            ],
            vec![],
        )
        .unwrap();
        let map = QuadraticMap::based_at(&cfg, [PointId(0), PointId(1), PointId(2)]).unwrap();
        assert_eq!(map.kind, QuadraticMapKind::TypeIII);
        let dec = decompose_quadratic(&cfg, &map).unwrap();
        assert_eq!(dec.type_i_maps().len(), 4);

        let dim = dec.config.len() + 1;
        let word = dec.composed_action();
        let original = lattice_action(&cfg, &map).unwrap().embedded(dim);
        assert_eq!(word, original);
    }

    #[test]
    fn decompose_rejects_type_i() {
        let cfg = PointConfig::proper_points(3);
        let map = QuadraticMap::based_at(&cfg, [PointId(0), PointId(1), PointId(2)]).unwrap();
        assert!(decompose_quadratic(&cfg, &map).is_err());
    }
}
