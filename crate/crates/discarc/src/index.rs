//! Minimal right approximations against a fan triangulation, index vectors in
//! the split Grothendieck group of the triangulation, rigidity of objects,
//! sign-coherence and linear independence, additivity defects with their
//! windowed image surrogates, and the behaviour of the index under flips.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::homext::{composite_nonzero_relaxed, ext_dim, hom_dim, killed_by_triangulation};
use crate::oracle::Window;
use crate::rank::integer_matrix_rank;
use crate::surface::{in_interval, Arc, MarkedPoint, Obj};
use crate::triangles::{Triangle, TriangleKind};
use crate::triangulation::{FanTriangulation, Quadrilateral, TriangulationError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("ApproximationFailure: {0}")]
    ApproximationFailure(String),
    #[error("MixedTriangulations: vectors relative to different triangulations")]
    MixedTriangulations,
    #[error("NotRigidTriangulation: the mutation formula needs a rigid triangulation")]
    NotRigidTriangulation,
    #[error("NotRigidObject: the mutation formula needs a rigid object")]
    NotRigidObject,
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// A finitely supported integer vector on the member arcs of a fixed fan
/// triangulation. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct IndexVector {
    triangulation: FanTriangulation,
    coeffs: BTreeMap<Arc, i64>,
}

impl IndexVector {
    pub fn zero(triangulation: &FanTriangulation) -> Self {
        IndexVector { triangulation: triangulation.clone(), coeffs: BTreeMap::new() }
    }

    pub fn unit(triangulation: &FanTriangulation, arc: Arc) -> Self {
        let mut v = IndexVector::zero(triangulation);
        v.add_coefficient(arc, 1);
        v
    }

    /// Build from explicit coefficient entries; every basis arc must be a
    /// member of the triangulation.
    pub fn from_entries(
        triangulation: &FanTriangulation,
        entries: impl IntoIterator<Item = (Arc, i64)>,
    ) -> Result<Self, IndexError> {
        let mut v = IndexVector::zero(triangulation);
        for (arc, coeff) in entries {
            if !triangulation.contains(&arc) {
                return Err(IndexError::MixedTriangulations);
            }
            v.add_coefficient(arc, coeff);
        }
        Ok(v)
    }

    pub fn triangulation(&self) -> &FanTriangulation {
        &self.triangulation
    }

    /// The stored coefficient at a basis arc, zero when absent.
    pub fn coefficient(&self, arc: &Arc) -> i64 {
        self.coeffs.get(arc).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Arc, i64)> {
        self.coeffs.iter().map(|(a, &v)| (a, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<Arc> {
        self.coeffs.keys().copied().collect()
    }

    fn add_coefficient(&mut self, arc: Arc, delta: i64) {
        debug_assert!(self.triangulation.contains(&arc), "basis arc outside triangulation");
        let entry = self.coeffs.entry(arc).or_insert(0);
        *entry += delta;
        if *entry == 0 {
            self.coeffs.remove(&arc);
        }
    }

    fn accumulate(&mut self, other: &IndexVector, sign: i64) {
        for (arc, v) in other.coefficients() {
            self.add_coefficient(*arc, sign * v);
        }
    }

    /// Equality of coefficient data regardless of triangulation identity;
    /// full `==` also requires the same arc set.
    pub fn same_coefficients(&self, other: &IndexVector) -> bool {
        self.coeffs == other.coeffs
    }

    /// Coefficient-wise sum of two vectors over the same triangulation.
    pub fn plus(&self, other: &IndexVector) -> Result<IndexVector, IndexError> {
        if !self.triangulation.same_arc_set(&other.triangulation) {
            return Err(IndexError::MixedTriangulations);
        }
        let mut out = self.clone();
        out.accumulate(other, 1);
        Ok(out)
    }

    /// Coefficient-wise difference of two vectors over the same triangulation.
    pub fn minus(&self, other: &IndexVector) -> Result<IndexVector, IndexError> {
        if !self.triangulation.same_arc_set(&other.triangulation) {
            return Err(IndexError::MixedTriangulations);
        }
        let mut out = self.clone();
        out.accumulate(other, -1);
        Ok(out)
    }
}

impl PartialEq for IndexVector {
    fn eq(&self, other: &Self) -> bool {
        self.triangulation.same_arc_set(&other.triangulation) && self.coeffs == other.coeffs
    }
}

impl Eq for IndexVector {}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (arc, v)) in self.coefficients().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{arc}: {v}")?;
        }
        write!(f, "}}")
    }
}

/// The Hom hammock of `c` relative to a chosen labeling: arcs admitting a
/// nonzero map to `c` are those with one endpoint in each half interval.
struct Hammock {
    c0: MarkedPoint,
    c1: MarkedPoint,
}

impl Hammock {
    fn new(c: &Arc) -> Self {
        let (c0, c1) = c.endpoints();
        Hammock { c0, c1 }
    }

    /// First half interval `(c0⁺, c1]`.
    fn in_first(&self, x: MarkedPoint) -> bool {
        in_interval(x, self.c0.successor(), self.c1, false, true)
    }

    /// Second half interval `(c1⁺, c0]`.
    fn in_second(&self, x: MarkedPoint) -> bool {
        in_interval(x, self.c1.successor(), self.c0, false, true)
    }

    /// Coordinates of a member of the hammock: its endpoint in the first
    /// interval, then its endpoint in the second.
    fn coords(&self, arc: &Arc) -> Option<(MarkedPoint, MarkedPoint)> {
        let (p, q) = arc.endpoints();
        if self.in_first(p) && self.in_second(q) {
            Some((p, q))
        } else if self.in_first(q) && self.in_second(p) {
            Some((q, p))
        } else {
            None
        }
    }

    /// Order along the first interval: `x ≤ y` when the sweep from `x` to the
    /// interval end passes `y`.
    fn le_first(&self, x: MarkedPoint, y: MarkedPoint) -> bool {
        in_interval(y, x, self.c1, true, true)
    }

    fn le_second(&self, x: MarkedPoint, y: MarkedPoint) -> bool {
        in_interval(y, x, self.c0, true, true)
    }
}

/// Best fountain partner: the largest point of the half interval whose arc to
/// the base survives the removed set. Descending past an accumulation bound
/// is impossible, which only arises for descriptions no flip can produce.
fn best_fountain_partner(
    tri: &FanTriangulation,
    interval_end: MarkedPoint,
    still_inside: impl Fn(MarkedPoint) -> bool,
) -> Option<Arc> {
    let mut candidate = interval_end;
    loop {
        if !still_inside(candidate) {
            return None;
        }
        if let Ok(arc) = Arc::new(tri.base(), candidate) {
            if !tri.contains(&arc) {
                // Removed: step down within the interval.
            } else {
                return Some(arc);
            }
        }
        if candidate.is_accumulation() {
            return None;
        }
        candidate = candidate.predecessor();
    }
}

/// The maximal members of `{B ∈ X : Hom(B, c) ≠ 0}` under the factorization
/// order, as hammock coordinates sorted with strictly descending first
/// component. This is the Pareto frontier of a product of two linear orders.
fn hammock_frontier(tri: &FanTriangulation, c: &Arc) -> Vec<(Arc, (MarkedPoint, MarkedPoint))> {
    let h = Hammock::new(c);
    let mut candidates: Vec<(Arc, (MarkedPoint, MarkedPoint))> = Vec::new();
    let base = tri.base();
    if h.in_second(base) {
        if let Some(arc) = best_fountain_partner(tri, h.c1, |x| h.in_first(x)) {
            let coords = h.coords(&arc).expect("fountain candidate lies in the hammock");
            candidates.push((arc, coords));
        }
    } else if h.in_first(base) {
        if let Some(arc) = best_fountain_partner(tri, h.c0, |x| h.in_second(x)) {
            let coords = h.coords(&arc).expect("fountain candidate lies in the hammock");
            candidates.push((arc, coords));
        }
    }
    for arc in tri.added() {
        if let Some(coords) = h.coords(arc) {
            candidates.push((*arc, coords));
        }
    }
    let dominated = |x: &(MarkedPoint, MarkedPoint), y: &(MarkedPoint, MarkedPoint)| {
        h.le_first(x.0, y.0) && h.le_second(x.1, y.1)
    };
    let mut frontier: Vec<(Arc, (MarkedPoint, MarkedPoint))> = candidates
        .iter()
        .filter(|(arc, coords)| {
            !candidates
                .iter()
                .any(|(other, oc)| other != arc && dominated(coords, oc) && !dominated(oc, coords))
        })
        .cloned()
        .collect();
    // Strictly descending first coordinate; the frontier is an antichain so
    // the second coordinate then ascends.
    frontier.sort_by(|a, b| {
        if a.1 .0 == b.1 .0 {
            std::cmp::Ordering::Equal
        } else if h.le_first(a.1 .0, b.1 .0) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        }
    });
    frontier
}

/// The minimal right approximation of an arc: the direct sum of the maximal
/// members of its Hom hammock inside the triangulation. Zero exactly when no
/// member admits a nonzero map to `c`.
pub fn min_right_approximation(tri: &FanTriangulation, c: &Arc) -> Obj {
    Obj::from_arcs(hammock_frontier(tri, c).into_iter().map(|(a, _)| a).collect())
}

/// The approximation triangle `X1 → X0 → C → ΣX1` of an arc.
///
/// `X1` is assembled from the gaps of the frontier zigzag: with the frontier
/// sorted as `B1, …, Bm` (first coordinates descending), the cocone summands
/// are `{c1⁺, b0(B1)}`, the links `{b1(Bi), b0(Bi+1)}`, and `{b1(Bm), c0⁺}`,
/// with end summands dropped when their endpoints neighbour or coincide. For
/// an empty frontier the triangle degenerates to `Σ⁻¹C → 0 → C`.
pub fn approximation_triangle(tri: &FanTriangulation, c: &Arc) -> Result<Triangle, IndexError> {
    let frontier = hammock_frontier(tri, c);
    let h = Hammock::new(c);
    let fail = |msg: String| Err(IndexError::ApproximationFailure(msg));

    if frontier.is_empty() {
        let x1 = c.suspend(-1);
        if !tri.contains(&x1) {
            return fail(format!(
                "empty hammock but desuspension {x1} is not a member; description is not a fan triangulation"
            ));
        }
        let t = Triangle::assemble(
            vec![x1],
            vec![],
            vec![*c],
            vec![],
            vec![],
            vec![(0, 0)],
            TriangleKind::Approximation,
        );
        return Ok(t);
    }

    let x0: Vec<Arc> = frontier.iter().map(|(a, _)| *a).collect();
    // Zigzag cocone: slot i sits between B_i and B_{i+1}, with virtual
    // sentinels carrying the interval ends.
    let m = frontier.len();
    let mut slots: Vec<(Option<Arc>, Vec<usize>)> = Vec::new();
    for i in 0..=m {
        let left = if i == 0 { h.c1.successor() } else { frontier[i - 1].1 .1 };
        let right = if i == m { h.c0.successor() } else { frontier[i].1 .0 };
        let arc = Arc::new(left, right).ok();
        if (i == 0 || i == m) && arc.is_none() {
            // Degenerate end slot: the frontier touches the interval end.
            slots.push((None, vec![]));
            continue;
        }
        let Some(arc) = arc else {
            return fail(format!("zigzag link between frontier members of {c} collapsed"));
        };
        // Each slot maps to its flanking approximation summands.
        let mut targets = Vec::new();
        if i > 0 {
            targets.push(i - 1);
        }
        if i < m {
            targets.push(i);
        }
        slots.push((Some(arc), targets));
    }

    let mut x1: Vec<Arc> = Vec::new();
    let mut map_ab: Vec<(usize, usize)> = Vec::new();
    for (arc, targets) in slots.iter() {
        let Some(arc) = arc else { continue };
        if !tri.contains(arc) {
            return fail(format!("cocone summand {arc} is not a member of the triangulation"));
        }
        let src = x1.len();
        x1.push(*arc);
        for &t in targets {
            if hom_dim(arc, &x0[t]) != 1 {
                return fail(format!("cocone component {arc} -> {} vanishes", x0[t]));
            }
            map_ab.push((src, t));
        }
    }
    let map_bc: Vec<(usize, usize)> = (0..m).map(|i| (i, 0)).collect();
    let connecting: Vec<(usize, usize)> = (0..x1.len()).map(|j| (0, j)).collect();
    for (j, z) in x1.iter().enumerate() {
        if hom_dim(c, &z.suspend(1)) != 1 {
            return fail(format!("connecting component {c} -> S{z} vanishes (slot {j})"));
        }
    }
    let t = Triangle::assemble(
        x1,
        x0,
        vec![*c],
        map_ab,
        map_bc,
        connecting,
        TriangleKind::Approximation,
    );
    if !triangle_connecting_killed(&t, tri) {
        return fail(format!("connecting map of the approximation of {c} is not annihilated"));
    }
    Ok(t)
}

/// Whether every component of a triangle's connecting map is annihilated by
/// all morphisms out of the triangulation.
pub fn triangle_connecting_killed(t: &Triangle, tri: &FanTriangulation) -> bool {
    t.connecting_components()
        .iter()
        .all(|(src, dst)| killed_by_triangulation(src, dst, tri))
}

/// The index of an object: summand-wise `[X0] − [X1]` of the approximation
/// triangles. Additive over direct sums; the zero object has index zero.
pub fn index(tri: &FanTriangulation, m: &Obj) -> Result<IndexVector, IndexError> {
    let mut v = IndexVector::zero(tri);
    for arc in m.summands() {
        let t = approximation_triangle(tri, arc)?;
        for s in t.middle().summands() {
            v.add_coefficient(*s, 1);
        }
        for s in t.first().summands() {
            v.add_coefficient(*s, -1);
        }
    }
    Ok(v)
}

/// No ordered pair of summands (including equal ones) carries an extension.
pub fn is_rigid_object(m: &Obj) -> bool {
    m.summands()
        .iter()
        .all(|u| m.summands().iter().all(|v| ext_dim(u, v) == 0))
}

/// Sign-coherence of a set of index vectors: at every basis arc the stored
/// coefficients never take strictly opposite signs.
pub fn sign_coherent(vs: &[IndexVector]) -> Result<bool, IndexError> {
    check_same_triangulation(vs)?;
    let mut signs: BTreeMap<Arc, i64> = BTreeMap::new();
    for v in vs {
        for (arc, coeff) in v.coefficients() {
            let s = signs.entry(*arc).or_insert(0);
            if *s == 0 {
                *s = coeff.signum();
            } else if coeff.signum() != 0 && coeff.signum() != *s {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact linear independence over the rationals on the union of supports.
pub fn linearly_independent(vs: &[IndexVector]) -> Result<bool, IndexError> {
    check_same_triangulation(vs)?;
    let mut support: Vec<Arc> = Vec::new();
    for v in vs {
        for (arc, _) in v.coefficients() {
            if !support.contains(arc) {
                support.push(*arc);
            }
        }
    }
    let matrix: Vec<Vec<i128>> = vs
        .iter()
        .map(|v| support.iter().map(|a| v.coefficient(a) as i128).collect())
        .collect();
    Ok(integer_matrix_rank(&matrix) == vs.len())
}

fn check_same_triangulation(vs: &[IndexVector]) -> Result<(), IndexError> {
    if let Some(first) = vs.first() {
        if !vs.iter().all(|v| v.triangulation().same_arc_set(first.triangulation())) {
            return Err(IndexError::MixedTriangulations);
        }
    }
    Ok(())
}

/// The additivity defect `ind(A) − ind(B) + ind(C)` of a triangle. Vanishes
/// whenever the connecting map is annihilated by the triangulation; in
/// general it depends only on the image of the connecting map.
pub fn additivity_defect(tri: &FanTriangulation, t: &Triangle) -> Result<IndexVector, IndexError> {
    let mut v = index(tri, t.first())?;
    v.accumulate(&index(tri, t.middle())?, -1);
    v.accumulate(&index(tri, t.last())?, 1);
    Ok(v)
}

/// The dimensions of the image of `Hom(W, C) → Hom(W, ΣA)` over the members
/// `W` of the triangulation inside a window. Since each connecting component
/// leaves an indecomposable summand, the per-summand contribution is 0 or 1;
/// contributions add over direct sums.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ImageDimVector {
    dims: BTreeMap<Arc, u32>,
    window: Window,
}

impl ImageDimVector {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self, arc: &Arc) -> u32 {
        self.dims.get(arc).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Arc, u32)> {
        self.dims.iter().map(|(a, &v)| (a, v))
    }
}

/// Windowed surrogate of the image of the connecting map under the restricted
/// Yoneda functor.
pub fn image_dim_vector(tri: &FanTriangulation, t: &Triangle, window: Window) -> ImageDimVector {
    let mut dims = BTreeMap::new();
    let comps = t.connecting_indices();
    let sources = t.last().summands();
    let targets = t.first().summands();
    for w in tri.members_in_window(window) {
        let mut total = 0u32;
        for (i, source) in sources.iter().enumerate() {
            let hit = comps.iter().any(|&(ci, aj)| {
                ci == i && composite_nonzero_relaxed(&w, source, &targets[aj].suspend(1))
            });
            if hit {
                total += 1;
            }
        }
        if total > 0 {
            dims.insert(w, total);
        }
    }
    ImageDimVector { dims, window }
}

/// Basis substitution along the second exchange triangle: the coefficient at
/// the flipped diagonal is rerouted through `[T1] + [T2] − [Y]`.
pub fn phi(q: &Quadrilateral, v: &IndexVector) -> Result<IndexVector, IndexError> {
    reroute(q, v, [q.t1, q.t2])
}

/// Basis substitution along the first exchange triangle: the coefficient at
/// the flipped diagonal is rerouted through `[S1] + [S2] − [Y]`.
pub fn psi(q: &Quadrilateral, v: &IndexVector) -> Result<IndexVector, IndexError> {
    reroute(q, v, [q.s1, q.s2])
}

fn reroute(
    q: &Quadrilateral,
    v: &IndexVector,
    sides: [Option<Arc>; 2],
) -> Result<IndexVector, IndexError> {
    if !v.triangulation().contains(&q.x) {
        return Err(IndexError::MixedTriangulations);
    }
    let (flipped, _) = v.triangulation().flip(&q.x)?;
    let coef = v.coefficient(&q.x);
    let mut out = IndexVector::zero(&flipped);
    for (arc, value) in v.coefficients() {
        if *arc != q.x {
            out.add_coefficient(*arc, value);
        }
    }
    if coef != 0 {
        for side in sides.into_iter().flatten() {
            out.add_coefficient(side, coef);
        }
        out.add_coefficient(q.y, -coef);
    }
    Ok(out)
}

/// The index of a rigid object after one flip of a rigid triangulation,
/// computed by the sign-driven reroute and checked against the direct
/// recomputation in debug builds.
pub fn index_after_flip(
    tri: &FanTriangulation,
    arc: &Arc,
    m: &Obj,
) -> Result<IndexVector, IndexError> {
    if !tri.is_rigid() {
        return Err(IndexError::NotRigidTriangulation);
    }
    if !is_rigid_object(m) {
        return Err(IndexError::NotRigidObject);
    }
    let (flipped, quad) = tri.flip(arc)?;
    let v = index(tri, m)?;
    let rerouted = if v.coefficient(arc) >= 0 { phi(&quad, &v)? } else { psi(&quad, &v)? };
    if cfg!(debug_assertions) {
        let direct = index(&flipped, m)?;
        assert!(
            rerouted.same_coefficients(&direct),
            "flip formula disagrees with direct recomputation for {m}: {rerouted} vs {direct}"
        );
    }
    Ok(rerouted)
}
