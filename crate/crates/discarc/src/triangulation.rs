//! Finite descriptions of fan triangulations: a fountain base plus finite
//! removed/added deltas, with membership, flips, exchange triangles, rigidity
//! and windowed validation.
//!
//! The represented arc set is `(fountain arcs at base ∖ removed) ∪ added`.
//! Fountains are fan triangulations and flips preserve both the fan property
//! and rigidity, so everything reachable here stays inside the class the
//! approximation machinery needs.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::oracle::{enumerate_arcs, Window};
use crate::surface::{in_interval, Arc, MarkedPoint, ModelParams};
use crate::triangles::{extension_triangle, Triangle};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("NotInTriangulation: the arc is not a member")]
    NotInTriangulation,
    #[error("NoFlipAvailable: no finite flanking quadrilateral exists")]
    NoFlipAvailable,
    #[error("InvalidDescription: {0}")]
    InvalidDescription(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DescriptionError {
    #[error("PointOutOfRange: interval index exceeds the model parameter")]
    PointOutOfRange,
    #[error("RemovedNotFountainArc: removed arcs must be incident with the base")]
    RemovedNotFountainArc,
    #[error("AddedIncidentToBase: added arcs must not be fountain arcs")]
    AddedIncidentToBase,
}

/// One flip: which arc left the triangulation and which replaced it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FlipRecord {
    pub removed: Arc,
    pub added: Arc,
}

/// The flip quadrilateral around a diagonal `x`, with `y` the other diagonal.
///
/// Corners are `x0 < x1` (the endpoints of `x`), `y0` in the open side
/// `(x0, x1)` and `y1` in `(x1, x0)`. Sides are `s1 = {y0, x1}`,
/// `s2 = {x0, y1}`, `t1 = {x1, y1}`, `t2 = {y0, x0}`; a side is `None` when
/// its endpoints neighbour, i.e. it is an unmarked boundary segment.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Quadrilateral {
    pub x: Arc,
    pub y: Arc,
    pub s1: Option<Arc>,
    pub s2: Option<Arc>,
    pub t1: Option<Arc>,
    pub t2: Option<Arc>,
}

/// Anticlockwise interval `(start, end]` of marked points.
#[derive(Clone, Copy, Debug)]
pub(crate) struct HalfOpenInterval {
    pub start: MarkedPoint,
    pub end: MarkedPoint,
}

impl HalfOpenInterval {
    pub(crate) fn contains(&self, x: MarkedPoint) -> bool {
        in_interval(x, self.start, self.end, false, true)
    }

    /// The points of the interval, or `None` when there are infinitely many.
    /// Finite exactly when both bounds are regular points of one interval
    /// with the end ahead of the start.
    pub(crate) fn points(&self) -> Option<Vec<MarkedPoint>> {
        match (self.start, self.end) {
            (
                MarkedPoint::Regular { interval: i, position: ks },
                MarkedPoint::Regular { interval: j, position: ke },
            ) if i == j && ks < ke => {
                Some(((ks + 1)..=ke).map(|k| MarkedPoint::reg(i, k)).collect())
            }
            _ => None,
        }
    }
}

/// A fan triangulation described as fountain arcs at a base point, minus a
/// finite removed set, plus a finite added set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FanTriangulation {
    params: ModelParams,
    base: MarkedPoint,
    removed: BTreeSet<Arc>,
    added: BTreeSet<Arc>,
    flip_log: Vec<FlipRecord>,
}

/// The fountain at `base`: every arc incident with the base point. For an
/// accumulation base this is the one-sided fan converging to it; for a
/// regular base it includes the limit arcs to every accumulation point and
/// the represented set is rigid.
pub fn fountain_triangulation(params: ModelParams, base: MarkedPoint) -> FanTriangulation {
    assert!(params.contains_point(base), "base point outside the model");
    FanTriangulation {
        params,
        base,
        removed: BTreeSet::new(),
        added: BTreeSet::new(),
        flip_log: Vec::new(),
    }
}

impl FanTriangulation {
    /// Assemble a description from raw parts. Only well-formedness is
    /// checked; whether the result is a genuine triangulation is a windowed
    /// question answered by [`FanTriangulation::validate_window`].
    pub fn from_parts(
        params: ModelParams,
        base: MarkedPoint,
        removed: Vec<Arc>,
        added: Vec<Arc>,
    ) -> Result<Self, DescriptionError> {
        if !params.contains_point(base) {
            return Err(DescriptionError::PointOutOfRange);
        }
        for arc in removed.iter().chain(added.iter()) {
            if !params.contains_arc(arc) {
                return Err(DescriptionError::PointOutOfRange);
            }
        }
        if removed.iter().any(|a| !a.has_endpoint(base)) {
            return Err(DescriptionError::RemovedNotFountainArc);
        }
        if added.iter().any(|a| a.has_endpoint(base)) {
            return Err(DescriptionError::AddedIncidentToBase);
        }
        Ok(FanTriangulation {
            params,
            base,
            removed: removed.into_iter().collect(),
            added: added.into_iter().collect(),
            flip_log: Vec::new(),
        })
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn base(&self) -> MarkedPoint {
        self.base
    }

    pub fn removed(&self) -> impl Iterator<Item = &Arc> {
        self.removed.iter()
    }

    pub fn added(&self) -> impl Iterator<Item = &Arc> {
        self.added.iter()
    }

    pub fn flip_log(&self) -> &[FlipRecord] {
        &self.flip_log
    }

    /// Membership in the represented infinite arc set; constant-time in the
    /// description size.
    pub fn contains(&self, arc: &Arc) -> bool {
        if arc.has_endpoint(self.base) {
            !self.removed.contains(arc)
        } else {
            self.added.contains(arc)
        }
    }

    /// Two descriptions represent the same arc set exactly when their
    /// normalized parts agree; flip histories are ignored.
    pub fn same_arc_set(&self, other: &FanTriangulation) -> bool {
        self.params == other.params
            && self.base == other.base
            && self.removed == other.removed
            && self.added == other.added
    }

    /// Does the triangulation contain an arc with one endpoint in `i` and the
    /// other in `j`? Both intervals are taken half-open `(start, end]`.
    pub(crate) fn meets_hammock(
        &self,
        i: (MarkedPoint, MarkedPoint),
        j: (MarkedPoint, MarkedPoint),
    ) -> bool {
        let i = HalfOpenInterval { start: i.0, end: i.1 };
        let j = HalfOpenInterval { start: j.0, end: j.1 };
        for arc in &self.added {
            let (p, q) = arc.endpoints();
            if (i.contains(p) && j.contains(q)) || (i.contains(q) && j.contains(p)) {
                return true;
            }
        }
        self.fountain_meets(&i, &j) || self.fountain_meets(&j, &i)
    }

    fn fountain_meets(&self, base_side: &HalfOpenInterval, partner_side: &HalfOpenInterval) -> bool {
        if !base_side.contains(self.base) {
            return false;
        }
        match partner_side.points() {
            // Infinitely many candidate partners against finitely many
            // exclusions (removed arcs and the base's neighbours).
            None => true,
            Some(pts) => pts.into_iter().any(|x| {
                Arc::new(self.base, x).is_ok_and(|arc| !self.removed.contains(&arc))
            }),
        }
    }

    /// Members with both endpoints inside the window, in canonical order.
    pub fn members_in_window(&self, window: Window) -> Vec<Arc> {
        enumerate_arcs(self.params, window)
            .into_iter()
            .filter(|a| self.contains(a))
            .collect()
    }

    /// A side of a flanking triangle: `None` for a boundary segment between
    /// neighbouring points, `Some` member arc otherwise.
    fn side_between(&self, p: MarkedPoint, q: MarkedPoint) -> Option<Option<Arc>> {
        if p.is_neighbour_of(&q) {
            return Some(None);
        }
        match Arc::new(p, q) {
            Ok(arc) if self.contains(&arc) => Some(Some(arc)),
            _ => None,
        }
    }

    /// The third corner of the triangle flanking the member arc `{p, q}` on
    /// the open side `(p, q)`. Candidates are the immediate neighbours of the
    /// endpoints, the base, and added-arc partners; a valid triangulation
    /// admits exactly one.
    fn third_corner(&self, p: MarkedPoint, q: MarkedPoint) -> Result<MarkedPoint, TriangulationError> {
        let mut candidates: BTreeSet<MarkedPoint> = BTreeSet::new();
        candidates.insert(p.successor());
        candidates.insert(q.predecessor());
        candidates.insert(self.base);
        for arc in &self.added {
            if let Some(o) = arc.other_endpoint(p) {
                candidates.insert(o);
            }
            if let Some(o) = arc.other_endpoint(q) {
                candidates.insert(o);
            }
        }
        let hits: Vec<MarkedPoint> = candidates
            .into_iter()
            .filter(|w| in_interval(*w, p, q, false, false))
            .filter(|w| self.side_between(p, *w).is_some() && self.side_between(*w, q).is_some())
            .collect();
        match hits.len() {
            0 => Err(TriangulationError::NoFlipAvailable),
            1 => Ok(hits[0]),
            _ => Err(TriangulationError::InvalidDescription(format!(
                "side ({p}, {q}) has {} flanking corners",
                hits.len()
            ))),
        }
    }

    /// The two triangulation triangles flanking a member arc, assembled into
    /// the flip quadrilateral. Limit arcs flanked by an infinite fan on
    /// either side have no finite quadrilateral.
    pub fn adjacent_triangles(&self, arc: &Arc) -> Result<Quadrilateral, TriangulationError> {
        if !self.contains(arc) {
            return Err(TriangulationError::NotInTriangulation);
        }
        let (x0, x1) = arc.endpoints();
        let y0 = self.third_corner(x0, x1)?;
        let y1 = self.third_corner(x1, x0)?;
        let y = Arc::new(y0, y1).expect("opposite corners are separated by the diagonal");
        let side = |p, q| self.side_between(p, q).expect("flank side checked");
        Ok(Quadrilateral {
            x: *arc,
            y,
            s1: side(y0, x1),
            s2: side(x0, y1),
            t1: side(x1, y1),
            t2: side(y0, x0),
        })
    }

    /// Replace a member diagonal by the other diagonal of its quadrilateral.
    pub fn flip(&self, arc: &Arc) -> Result<(FanTriangulation, Quadrilateral), TriangulationError> {
        let quad = self.adjacent_triangles(arc)?;
        let mut next = self.clone();
        if !next.added.remove(arc) {
            next.removed.insert(*arc);
        }
        if !next.removed.remove(&quad.y) {
            debug_assert!(!quad.y.has_endpoint(next.base));
            next.added.insert(quad.y);
        }
        next.flip_log.push(FlipRecord { removed: *arc, added: quad.y });
        Ok((next, quad))
    }

    /// No member pair carries an extension. Decidable from the description:
    /// extensions inside a triangulation only arise from members sharing an
    /// accumulation endpoint or a member with two accumulation endpoints.
    pub fn is_rigid(&self) -> bool {
        if self.base.is_accumulation() {
            // Infinitely many members share the accumulation base.
            return false;
        }
        if self.added.iter().any(|a| a.both_endpoints_accumulation()) {
            return false;
        }
        for j in 0..self.params.n() {
            let p = MarkedPoint::acc(j);
            let mut incident = 0usize;
            if let Ok(limb) = Arc::new(self.base, p) {
                if !self.removed.contains(&limb) {
                    incident += 1;
                }
            }
            incident += self.added.iter().filter(|a| a.has_endpoint(p)).count();
            if incident >= 2 {
                return false;
            }
        }
        true
    }

    /// Windowed check that the represented set is a triangulation: members
    /// pairwise non-crossing, and every non-member window arc crossed by some
    /// member of the enlarged window.
    pub fn validate_window(&self, window: Window) -> ValidationReport {
        let mut report = ValidationReport::default();
        let members = self.members_in_window(window);
        for (i, a) in members.iter().enumerate() {
            for b in members.iter().skip(i + 1) {
                if a.crosses_transversely(b) {
                    report.crossings.push((*a, *b));
                }
            }
        }
        let enlarged = self.members_in_window(Window(window.0 + 2));
        for arc in enumerate_arcs(self.params, window) {
            if self.contains(&arc) {
                continue;
            }
            if !enlarged.iter().any(|m| m.crosses_transversely(&arc)) {
                report.not_maximal.push(arc);
            }
        }
        report
    }
}

impl fmt::Display for FanTriangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fountain({})", self.base)?;
        if !self.removed.is_empty() {
            write!(f, " minus {{")?;
            for (i, a) in self.removed.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "}}")?;
        }
        if !self.added.is_empty() {
            write!(f, " plus {{")?;
            for (i, a) in self.added.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Violations found by [`FanTriangulation::validate_window`].
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub crossings: Vec<(Arc, Arc)>,
    pub not_maximal: Vec<Arc>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.crossings.is_empty() && self.not_maximal.is_empty()
    }
}

/// The exchange triangles `X → S1 ⊕ S2 → Y → ΣX` and `Y → T1 ⊕ T2 → X → ΣY`
/// of a flip quadrilateral; boundary sides contribute zero summands.
pub fn exchange_triangles(q: &Quadrilateral) -> (Triangle, Triangle) {
    let s_triangle = extension_triangle(&q.y, &q.x).expect("diagonals cross transversely");
    let t_triangle = extension_triangle(&q.x, &q.y).expect("diagonals cross transversely");
    let expect_sides = |t: &Triangle, sides: [Option<Arc>; 2]| {
        let want: Vec<Arc> = sides.into_iter().flatten().collect();
        debug_assert_eq!(
            t.middle(),
            &crate::surface::Obj::from_arcs(want),
            "exchange middle disagrees with the quadrilateral sides"
        );
    };
    expect_sides(&s_triangle, [q.s1, q.s2]);
    expect_sides(&t_triangle, [q.t1, q.t2]);
    (s_triangle.retag_exchange(), t_triangle.retag_exchange())
}
