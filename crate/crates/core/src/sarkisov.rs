//! The Sarkisov untwisting algorithm for plane Cremona maps.
//!
//! A homaloidal net on the plane is untwisted through a chain of links
//! between Mori fibre spaces: the plane over a point, Hirzebruch scrolls
//! `F_e` over a line, and the quadric `F_0` with its two rulings. The four
//! links are
//!
//! - type I: blow up a point of the plane, landing on `F_1`;
//! - type II: an elementary transformation of a scroll (blow up a point,
//!   contract the fibre through it);
//! - type III: blow down the (-1)-section of `F_1`, landing on the plane;
//! - type IV: exchange the two rulings of `F_0`.
//!
//! Progress is measured by the Sarkisov degree `(mu, lambda, ell)`: the
//! quasi-effective threshold `mu` (with `(mu K + L).F = 0` against the fibre
//! class, so `mu` is rational with denominator dividing 6), the maximal base
//! multiplicity `lambda`, and the number `ell` of points attaining it
//! (undetermined when `lambda = 0`). Links of type I, III and IV strictly
//! lower `mu`; a type II link preserves `mu` and lowers `(lambda, ell)`,
//! replacing the multiplicity-`lambda` centre by a point of multiplicity
//! `2 mu - lambda`. The run stops when `lambda <= mu` and the adjoint class
//! `K + (1/mu) L` is non-negative against both extremal rays of the current
//! model, which certifies an isomorphism onto the target.
//!
//! Internally every model is tracked on the lattice of the original blown-up
//! plane: the fibre, section and line classes are markers, and each active
//! base point carries the class of its exceptional divisor: a coordinate
//! vector for an original point, `F - e` for the point created by an
//! elementary transformation with centre `e`. The net class itself never
//! changes; only the markers and the active set move.

use num_traits::Zero;
use serde::Serialize;

use crate::cremona::{homaloidal_diagnostics, CremonaError};
use crate::exact::Rat;
use crate::lattice::{canonical_class, DivisorClass};
use crate::points::{PointConfig, PointId};

/// The Mori fibre space a run currently sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MoriFibreSpace {
    /// The plane over a point.
    PlaneOverPoint,
    /// The Hirzebruch scroll `F_e` over a line, `e >= 1`.
    ScrollOverLine { e: i64 },
    /// `F_0` fibred by the original ruling.
    QuadricRulingA,
    /// `F_0` fibred by the other ruling (after a type IV link).
    QuadricRulingB,
}

impl std::fmt::Display for MoriFibreSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MoriFibreSpace::PlaneOverPoint => write!(f, "P2"),
            MoriFibreSpace::ScrollOverLine { e } => write!(f, "F{e}"),
            MoriFibreSpace::QuadricRulingA => write!(f, "F0"),
            MoriFibreSpace::QuadricRulingB => write!(f, "F0*"),
        }
    }
}

/// The Sarkisov degree `(mu, lambda, ell)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SarkisovDegree {
    /// Quasi-effective threshold; rational with denominator dividing 6.
    #[serde(serialize_with = "crate::exact::serialize_rat")]
    pub mu: Rat,
    /// Maximal base-point multiplicity of the net (0 when base point free).
    pub lambda: i64,
    /// Number of points attaining `lambda`; undetermined when `lambda = 0`.
    pub ell: Option<i64>,
}

impl SarkisovDegree {
    /// Strict lexicographic descent, with `ell` compared only when both
    /// degrees share a positive `lambda`.
    pub fn descends_to(&self, next: &SarkisovDegree) -> bool {
        if next.mu < self.mu {
            return true;
        }
        if next.mu > self.mu {
            return false;
        }
        if next.lambda < self.lambda {
            return true;
        }
        if next.lambda > self.lambda {
            return false;
        }
        match (self.ell, next.ell) {
            (Some(a), Some(b)) => b < a,
            _ => false,
        }
    }
}

impl std::fmt::Display for SarkisovDegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, ", self.mu, self.lambda)?;
        match self.ell {
            Some(l) => write!(f, "{l})"),
            None => write!(f, "*)"),
        }
    }
}

/// The four Sarkisov links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkKind {
    I,
    II,
    III,
    IV,
}

impl std::fmt::Display for LinkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinkKind::I => write!(f, "I"),
            LinkKind::II => write!(f, "II"),
            LinkKind::III => write!(f, "III"),
            LinkKind::IV => write!(f, "IV"),
        }
    }
}

/// One performed link.
#[derive(Debug, Clone, Serialize)]
pub struct SarkisovLink {
    pub kind: LinkKind,
    /// Centre of a type I or II link (blown-up point), if any.
    pub center: Option<String>,
    /// Model reached after the link.
    pub model: MoriFibreSpace,
    /// Degree after the link.
    pub degree: SarkisovDegree,
}

/// An active base point of the net on the current model.
#[derive(Debug, Clone)]
struct ActivePoint {
    label: String,
    /// Original configuration point, when the active is not virtual.
    slot_id: Option<PointId>,
    /// Class of the exceptional divisor over the point.
    exc: DivisorClass,
    /// Net multiplicity at the point (constant along the run).
    mult: i64,
    consumed: bool,
    /// Some(i): not yet a point of the model; it is infinitely near the
    /// active point with index i.
    blocked_by: Option<usize>,
    /// Lies on the marked section curve.
    on_section: bool,
    /// Shares a known curve of the fibre class with equal-tagged actives.
    fgroup: Option<u32>,
    /// Shares a known curve of the section class (quadric bookkeeping).
    sgroup: Option<u32>,
}

/// State of an untwisting run.
#[derive(Debug, Clone)]
pub struct SarkisovState {
    config: PointConfig,
    net: DivisorClass,
    model: MoriFibreSpace,
    /// Pullback of the line class (plane models).
    line: Option<DivisorClass>,
    /// Pullback of the fibre class (scroll and quadric models).
    fibre: Option<DivisorClass>,
    /// Pullback of the section class (scroll and quadric models).
    section: Option<DivisorClass>,
    /// Active index whose exceptional curve is the marked section.
    section_owner: Option<usize>,
    actives: Vec<ActivePoint>,
    next_virtual: u32,
    next_group: u32,
}

/// Errors from the Sarkisov layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SarkisovError {
    #[error(transparent)]
    Cremona(#[from] CremonaError),
    #[error("the run has already terminated (lambda <= mu and nef adjoint)")]
    AlreadyTerminated,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl SarkisovState {
    /// Starts a run from a homaloidal net on the plane.
    pub fn from_plane_net(
        net: &DivisorClass,
        config: &PointConfig,
    ) -> Result<SarkisovState, SarkisovError> {
        if net.config_id() != config.id() {
            return Err(SarkisovError::InvalidInput(
                "net does not live over the configuration".into(),
            ));
        }
        homaloidal_diagnostics(net, config)
            .map_err(|v| SarkisovError::InvalidInput(format!("net is not homaloidal: {v}")))?;
        let mut actives = Vec::new();
        let mut index_of: std::collections::BTreeMap<PointId, usize> = Default::default();
        for (slot, node) in config.points().iter().enumerate() {
            let m = net.mult(slot);
            if m == 0 {
                continue;
            }
            if let Some(parent) = node.parent {
                if !index_of.contains_key(&parent) {
                    return Err(SarkisovError::InvalidInput(format!(
                        "base point {} is infinitely near a point that is not a base point",
                        node.id
                    )));
                }
            }
            let idx = actives.len();
            index_of.insert(node.id, idx);
            actives.push(ActivePoint {
                label: node.id.to_string(),
                slot_id: Some(node.id),
                exc: DivisorClass::exceptional(config, slot),
                mult: m,
                consumed: false,
                blocked_by: node.parent.map(|p| index_of[&p]),
                on_section: false,
                fgroup: None,
                sgroup: None,
            });
        }
        Ok(SarkisovState {
            config: config.clone(),
            net: net.clone(),
            model: MoriFibreSpace::PlaneOverPoint,
            line: Some(DivisorClass::line(config)),
            fibre: None,
            section: None,
            section_owner: None,
            actives,
            next_virtual: 1,
            next_group: 1,
        })
    }

    pub fn model(&self) -> MoriFibreSpace {
        self.model
    }

    pub fn net(&self) -> &DivisorClass {
        &self.net
    }

    pub fn fibre_class(&self) -> Option<&DivisorClass> {
        self.fibre.as_ref()
    }

    pub fn section_class(&self) -> Option<&DivisorClass> {
        self.section.as_ref()
    }

    /// The Sarkisov degree of the current state.
    pub fn degree(&self) -> SarkisovDegree {
        let canon = canonical_class(&self.config);
        let ray = match self.model {
            MoriFibreSpace::PlaneOverPoint => {
                self.line.as_ref().expect("plane model carries a line")
            }
            _ => self.fibre.as_ref().expect("scroll model carries a fibre"),
        };
        // cross-check: the contracted extremal ray is a smooth rational
        // curve with -3 <= K.ray <= -2
        debug_assert!((-3..=-2).contains(&canon.dot(ray)));
        let mu = Rat::new(self.net.dot(ray), -canon.dot(ray));
        // mu lies in (1/6) Z
        debug_assert_eq!(6 % mu.denom(), 0);
        let lambda = self
            .actives
            .iter()
            .filter(|a| !a.consumed)
            .map(|a| a.mult)
            .max()
            .unwrap_or(0)
            .max(0);
        let ell = if lambda > 0 {
            Some(
                self.actives
                    .iter()
                    .filter(|a| !a.consumed && a.mult == lambda)
                    .count() as i64,
            )
        } else {
            None
        };
        SarkisovDegree { mu, lambda, ell }
    }

    /// Evaluates `(K + (1/mu) L) . R >= 0` against the extremal rays of the
    /// current model (the line class on the plane; fibre and section on
    /// scrolls and quadrics).
    pub fn nef_adjoint_check(&self) -> bool {
        let deg = self.degree();
        let canon = canonical_class(&self.config);
        let rays: Vec<&DivisorClass> = match self.model {
            MoriFibreSpace::PlaneOverPoint => vec![self.line.as_ref().unwrap()],
            _ => vec![self.fibre.as_ref().unwrap(), self.section.as_ref().unwrap()],
        };
        rays.into_iter().all(|r| {
            let v = Rat::from_integer(canon.dot(r)) + Rat::from_integer(self.net.dot(r)) / deg.mu;
            v >= Rat::zero()
        })
    }

    /// Termination test: `lambda <= mu` and the adjoint is nef.
    pub fn terminated(&self) -> bool {
        let deg = self.degree();
        Rat::from_integer(deg.lambda) <= deg.mu && self.nef_adjoint_check()
    }

    /// Index of the centre for the next I/II link: the earliest active model
    /// point attaining the maximal multiplicity.
    fn max_centre(&self) -> Result<usize, SarkisovError> {
        let lambda = self.degree().lambda;
        let best = self
            .actives
            .iter()
            .position(|a| !a.consumed && a.blocked_by.is_none() && a.mult == lambda);
        match best {
            Some(i) => Ok(i),
            None => Err(SarkisovError::Internal(
                "maximal multiplicity is attained only at points that are not on the model; \
                 the input multiplicities violate proximity monotonicity"
                    .into(),
            )),
        }
    }

    fn e_invariant(&self) -> i64 {
        self.section
            .as_ref()
            .map(|s| -s.self_intersection())
            .unwrap_or(0)
    }

    fn assert_markers(&self) -> Result<(), SarkisovError> {
        let canon = canonical_class(&self.config);
        match self.model {
            MoriFibreSpace::PlaneOverPoint => {
                let l = self.line.as_ref().unwrap();
                if l.self_intersection() != 1 || canon.dot(l) != -3 {
                    return Err(SarkisovError::Internal("line marker corrupted".into()));
                }
            }
            m => {
                let f = self.fibre.as_ref().unwrap();
                let s = self.section.as_ref().unwrap();
                let e = self.e_invariant();
                let ok = f.self_intersection() == 0
                    && canon.dot(f) == -2
                    && f.dot(s) == 1
                    && match m {
                        MoriFibreSpace::ScrollOverLine { e: tag } => e == tag && e >= 1,
                        _ => e == 0,
                    };
                if !ok {
                    return Err(SarkisovError::Internal("scroll markers corrupted".into()));
                }
            }
        }
        Ok(())
    }

    /// Performs one link, returning its record. Errors when the run has
    /// already terminated.
    pub fn untwist_step(&mut self) -> Result<SarkisovLink, SarkisovError> {
        if self.terminated() {
            return Err(SarkisovError::AlreadyTerminated);
        }
        self.assert_markers()?;
        let deg = self.degree();
        let link = if Rat::from_integer(deg.lambda) > deg.mu {
            match self.model {
                MoriFibreSpace::PlaneOverPoint => self.link_i()?,
                _ => self.link_ii()?,
            }
        } else {
            // adjoint not nef: the second extremal contraction decides
            let section = self.section.as_ref().ok_or_else(|| {
                SarkisovError::Internal("non-nef adjoint on a plane model".into())
            })?;
            let ssq = section.self_intersection();
            if ssq == -1 {
                self.link_iii()?
            } else if ssq == 0
                && matches!(
                    self.model,
                    MoriFibreSpace::QuadricRulingA | MoriFibreSpace::QuadricRulingB
                )
            {
                self.link_iv()?
            } else {
                return Err(SarkisovError::Internal(format!(
                    "no link applies on {} with section self-intersection {ssq}",
                    self.model
                )));
            }
        };
        if !deg.descends_to(&link.degree) {
            return Err(SarkisovError::Internal(format!(
                "degree failed to descend: {deg} -> {}",
                link.degree
            )));
        }
        Ok(link)
    }

    /// Type I: blow up a maximal point of the plane.
    fn link_i(&mut self) -> Result<SarkisovLink, SarkisovError> {
        let x = self.max_centre()?;
        let line = self.line.take().expect("plane model carries a line");
        let exc = self.actives[x].exc.clone();
        self.fibre = Some(line.minus(&exc));
        self.section = Some(exc);
        self.section_owner = Some(x);
        self.model = MoriFibreSpace::ScrollOverLine { e: 1 };
        let label = self.actives[x].label.clone();
        self.actives[x].consumed = true;
        // children of the centre sit on the exceptional section; declared
        // collinearities through the centre become common fibres
        let mut released = Vec::new();
        for (i, a) in self.actives.iter().enumerate() {
            if !a.consumed && a.blocked_by == Some(x) {
                released.push(i);
            }
        }
        for i in released {
            self.actives[i].blocked_by = None;
            self.actives[i].on_section = true;
        }
        if let Some(center_id) = self.actives[x].slot_id {
            let triples: Vec<[PointId; 3]> = self
                .config
                .collinear_triples()
                .filter(|t| t.contains(&center_id))
                .copied()
                .collect();
            for t in triples {
                let gid = self.next_group;
                self.next_group += 1;
                for a in self.actives.iter_mut() {
                    if a.consumed {
                        continue;
                    }
                    let on_line = a.slot_id.is_some_and(|id| t.contains(&id));
                    if on_line {
                        a.fgroup = Some(gid);
                    }
                }
            }
        }
        Ok(SarkisovLink {
            kind: LinkKind::I,
            center: Some(label),
            model: self.model,
            degree: self.degree(),
        })
    }

    /// Type II: elementary transformation at a maximal point of a scroll.
    fn link_ii(&mut self) -> Result<SarkisovLink, SarkisovError> {
        let x = self.max_centre()?;
        let fibre = self.fibre.clone().expect("scroll model carries a fibre");
        let section = self.section.take().expect("scroll model carries a section");
        let exc = self.actives[x].exc.clone();
        let contracted = fibre.minus(&exc);
        if contracted.self_intersection() != -1 {
            return Err(SarkisovError::Internal(
                "contracted fibre transform is not a (-1)-class".into(),
            ));
        }
        let on_marked_section = self.actives[x].on_section;
        let was_quadric = matches!(
            self.model,
            MoriFibreSpace::QuadricRulingA | MoriFibreSpace::QuadricRulingB
        );
        // section update and new model
        let new_section = if was_quadric || on_marked_section {
            // the centre lies on a curve of the section class; its strict
            // transform is the next negative section
            section.minus(&exc)
        } else {
            section.plus(&contracted)
        };
        let e_new = -new_section.self_intersection();
        self.section = Some(new_section);
        if was_quadric {
            if !on_marked_section {
                self.section_owner = None;
                for a in self.actives.iter_mut() {
                    a.on_section = false;
                }
            }
            // actives sharing a section-class curve with the centre now sit
            // on the marked section
            if let Some(sg) = self.actives[x].sgroup {
                for a in self.actives.iter_mut() {
                    if !a.consumed && a.sgroup == Some(sg) {
                        a.on_section = true;
                    }
                }
            }
        }
        self.model = match e_new {
            0 => match self.model {
                MoriFibreSpace::QuadricRulingB => MoriFibreSpace::QuadricRulingB,
                _ => MoriFibreSpace::QuadricRulingA,
            },
            e if e >= 1 => MoriFibreSpace::ScrollOverLine { e },
            e => {
                return Err(SarkisovError::Internal(format!(
                    "section self-intersection rose above zero (e = {e})"
                )))
            }
        };
        let label = self.actives[x].label.clone();
        self.actives[x].consumed = true;
        self.actives[x].on_section = false;

        // the image of the contracted curve is a point of multiplicity
        // 2 mu - lambda on the new model
        let new_mult = self.net.dot(&contracted);
        let group_members: Vec<usize> = self
            .actives
            .iter()
            .enumerate()
            .filter(|(i, a)| {
                !a.consumed
                    && *i != x
                    && a.fgroup.is_some()
                    && a.fgroup == self.actives[x].fgroup
            })
            .map(|(i, _)| i)
            .collect();
        let released: Vec<usize> = self
            .actives
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.consumed && a.blocked_by == Some(x))
            .map(|(i, _)| i)
            .collect();
        let gid = self.next_group;
        self.next_group += 1;
        if new_mult > 0 {
            let vid = self.next_virtual;
            self.next_virtual += 1;
            let new_index = self.actives.len();
            self.actives.push(ActivePoint {
                label: format!("v{vid}"),
                slot_id: None,
                exc: contracted,
                mult: new_mult,
                consumed: false,
                blocked_by: None,
                on_section: false,
                fgroup: Some(gid),
                sgroup: None,
            });
            // other actives on the contracted fibre become infinitely near
            // the new point
            for i in &group_members {
                self.actives[*i].blocked_by = Some(new_index);
                self.actives[*i].fgroup = None;
            }
        } else if !group_members.is_empty() {
            return Err(SarkisovError::InvalidInput(
                "active base points sit on a contracted fibre of multiplicity zero".into(),
            ));
        }
        // children of the centre reappear on the fibre through the new point;
        // a satellite also proximate to the section owner sits on the section
        for i in released {
            self.actives[i].blocked_by = None;
            let owner_id = self
                .section_owner
                .and_then(|owner| self.actives[owner].slot_id);
            self.actives[i].on_section = match (owner_id, self.actives[i].slot_id) {
                (Some(owner_id), Some(me)) => self
                    .config
                    .node(me)
                    .map(|n| n.proximate_to.contains(&owner_id))
                    .unwrap_or(false),
                _ => false,
            };
            self.actives[i].fgroup = Some(gid);
        }
        Ok(SarkisovLink {
            kind: LinkKind::II,
            center: Some(label),
            model: self.model,
            degree: self.degree(),
        })
    }

    /// Type III: contract the (-1)-section of `F_1`, landing on the plane.
    fn link_iii(&mut self) -> Result<SarkisovLink, SarkisovError> {
        let fibre = self.fibre.take().expect("scroll model carries a fibre");
        let section = self.section.take().expect("scroll model carries a section");
        let canon = canonical_class(&self.config);
        if section.self_intersection() != -1 || canon.dot(&section) != -1 {
            return Err(SarkisovError::Internal(
                "type III requires a (-1)-section".into(),
            ));
        }
        let on_section: Vec<usize> = self
            .actives
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.consumed && a.on_section)
            .map(|(i, _)| i)
            .collect();
        let sec_mult = self.net.dot(&section);
        if sec_mult > 0 {
            // the blown-down section leaves a base point on the plane
            let vid = self.next_virtual;
            self.next_virtual += 1;
            let new_index = self.actives.len();
            self.actives.push(ActivePoint {
                label: format!("v{vid}"),
                slot_id: None,
                exc: section.clone(),
                mult: sec_mult,
                consumed: false,
                blocked_by: None,
                on_section: false,
                fgroup: None,
                sgroup: None,
            });
            for i in on_section {
                self.actives[i].blocked_by = Some(new_index);
                self.actives[i].on_section = false;
            }
        } else if !on_section.is_empty() {
            return Err(SarkisovError::InvalidInput(
                "active base points sit on a contracted section of multiplicity zero".into(),
            ));
        }
        self.line = Some(fibre.plus(&section));
        self.section_owner = None;
        self.model = MoriFibreSpace::PlaneOverPoint;
        for a in self.actives.iter_mut() {
            a.fgroup = None;
            a.sgroup = None;
            a.on_section = false;
        }
        Ok(SarkisovLink {
            kind: LinkKind::III,
            center: None,
            model: self.model,
            degree: self.degree(),
        })
    }

    /// Type IV: exchange the rulings of `F_0`.
    fn link_iv(&mut self) -> Result<SarkisovLink, SarkisovError> {
        let fibre = self.fibre.take().expect("quadric carries a fibre");
        let section = self.section.take().expect("quadric carries a section");
        self.fibre = Some(section);
        self.section = Some(fibre);
        self.model = match self.model {
            MoriFibreSpace::QuadricRulingA => MoriFibreSpace::QuadricRulingB,
            MoriFibreSpace::QuadricRulingB => MoriFibreSpace::QuadricRulingA,
            _ => return Err(SarkisovError::Internal("type IV off a quadric".into())),
        };
        // fibre-class curves and section-class curves trade places; the
        // marked section curve becomes one fibre
        let marked: Vec<usize> = self
            .actives
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.consumed && a.on_section)
            .map(|(i, _)| i)
            .collect();
        for a in self.actives.iter_mut() {
            std::mem::swap(&mut a.fgroup, &mut a.sgroup);
            a.on_section = false;
        }
        if !marked.is_empty() {
            let gid = self.next_group;
            self.next_group += 1;
            for i in marked {
                self.actives[i].fgroup = Some(gid);
            }
        }
        self.section_owner = None;
        Ok(SarkisovLink {
            kind: LinkKind::IV,
            center: None,
            model: self.model,
            degree: self.degree(),
        })
    }
}

/// A full untwisting run.
#[derive(Debug, Clone, Serialize)]
pub struct SarkisovTrace {
    /// Degree of the input net on the plane.
    pub initial_degree: SarkisovDegree,
    pub links: Vec<SarkisovLink>,
}

/// The Sarkisov degree of a plane net (without running the algorithm).
pub fn sarkisov_degree(
    net: &DivisorClass,
    config: &PointConfig,
) -> Result<SarkisovDegree, SarkisovError> {
    Ok(SarkisovState::from_plane_net(net, config)?.degree())
}

/// Runs the untwisting algorithm on a homaloidal net of the plane and
/// returns the link sequence with the degree after every link.
pub fn run_sarkisov(
    net: &DivisorClass,
    config: &PointConfig,
) -> Result<SarkisovTrace, SarkisovError> {
    let mut state = SarkisovState::from_plane_net(net, config)?;
    let initial = state.degree();
    let mut links = Vec::new();
    let bound = (net.degree().unsigned_abs() as usize + config.len() + 8) * 8;
    while !state.terminated() {
        let link = state.untwist_step()?;
        links.push(link);
        if links.len() > bound {
            return Err(SarkisovError::Internal(
                "link sequence exceeded the termination bound".into(),
            ));
        }
    }
    // a plane Cremona map untwists back onto the plane
    if state.model() != MoriFibreSpace::PlaneOverPoint {
        return Err(SarkisovError::Internal(format!(
            "run terminated on {}, not on the plane",
            state.model()
        )));
    }
    Ok(SarkisovTrace {
        initial_degree: initial,
        links,
    })
}
