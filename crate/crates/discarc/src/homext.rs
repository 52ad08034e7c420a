//! Hom and Ext dimensions between indecomposables, factorization of the
//! (unique up to scalar) nonzero morphisms, and the test for a map being
//! annihilated by every morphism out of a fan triangulation.
//!
//! All morphism spaces between arcs have dimension 0 or 1, so everything here
//! is a predicate. Target-side and source-side hammock rules are implemented
//! independently; their agreement is a tested invariant.

use thiserror::Error;

use crate::surface::{in_interval, Arc, MarkedPoint};
use crate::triangulation::FanTriangulation;
use crate::oracle::Window;

#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomError {
    #[error("PreconditionViolated: the required nonzero morphism does not exist")]
    PreconditionViolated,
}

fn labelings(arc: &Arc) -> [(MarkedPoint, MarkedPoint); 2] {
    let (lo, hi) = arc.endpoints();
    [(lo, hi), (hi, lo)]
}

/// A labeling of `b = {b0, b1}` against `c = {c0, c1}` witnessing the
/// existence of the nonzero morphism `b → c`: `b0 ∈ (c0⁺, c1]` and
/// `b1 ∈ (c1⁺, c0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomWitness {
    pub b0: MarkedPoint,
    pub b1: MarkedPoint,
    pub c0: MarkedPoint,
    pub c1: MarkedPoint,
}

/// Witness for `dim Hom(b, c) = 1`, unique up to swapping both labelings at
/// once.
pub fn hom_witness(b: &Arc, c: &Arc) -> Option<HomWitness> {
    for (c0, c1) in labelings(c) {
        for (b0, b1) in labelings(b) {
            if in_interval(b0, c0.successor(), c1, false, true)
                && in_interval(b1, c1.successor(), c0, false, true)
            {
                return Some(HomWitness { b0, b1, c0, c1 });
            }
        }
    }
    None
}

/// dim Hom(b, c) via the target-side hammock rule.
pub fn hom_dim(b: &Arc, c: &Arc) -> u8 {
    hom_witness(b, c).is_some() as u8
}

/// dim Hom(c, d) via the source-side hammock rule: some labeling satisfies
/// `d0 ∈ [c0, c1⁻)` and `d1 ∈ [c1, c0⁻)`. Kept as a separate code path so the
/// two rules can be checked against each other.
pub fn hom_dim_source_rule(c: &Arc, d: &Arc) -> u8 {
    for (c0, c1) in labelings(c) {
        for (d0, d1) in labelings(d) {
            if in_interval(d0, c0, c1.predecessor(), true, false)
                && in_interval(d1, c1, c0.predecessor(), true, false)
            {
                return 1;
            }
        }
    }
    0
}

/// dim Ext¹(c, a) = dim Hom(c, Σa).
///
/// Nonzero exactly when the arcs cross transversely, or are distinct with one
/// shared accumulation endpoint `p` such that the free endpoint of `c` sweeps
/// anticlockwise to the free endpoint of `a` without passing `p`, or are equal
/// with both endpoints accumulation points.
pub fn ext_dim(c: &Arc, a: &Arc) -> u8 {
    if a.crosses_transversely(c) {
        return 1;
    }
    if a == c {
        return a.both_endpoints_accumulation() as u8;
    }
    if let Some(p) = a.shared_endpoint(c) {
        if p.is_accumulation() {
            let c0 = c.other_endpoint(p).expect("shared endpoint of c");
            let a0 = a.other_endpoint(p).expect("shared endpoint of a");
            if in_interval(a0, c0, p, false, false) {
                return 1;
            }
        }
    }
    0
}

/// Whether the nonzero morphism `b → c` factors through `s`: under the
/// witnessing labeling, `s` has one endpoint in `[b0, c1]` and the other in
/// `[b1, c0]`.
pub fn factors_through(b: &Arc, c: &Arc, s: &Arc) -> Result<bool, HomError> {
    let w = hom_witness(b, c).ok_or(HomError::PreconditionViolated)?;
    let (s0, s1) = s.endpoints();
    let first = |x| in_interval(x, w.b0, w.c1, true, true);
    let second = |x| in_interval(x, w.b1, w.c0, true, true);
    Ok((first(s0) && second(s1)) || (first(s1) && second(s0)))
}

/// Whether the composite of the nonzero maps `a → b → c` is nonzero. Since
/// all Hom spaces are at most one-dimensional, this holds exactly when the
/// nonzero map `a → c` exists and factors through `b`.
pub fn composite_nonzero(a: &Arc, b: &Arc, c: &Arc) -> Result<bool, HomError> {
    if hom_dim(a, b) == 0 || hom_dim(b, c) == 0 {
        return Err(HomError::PreconditionViolated);
    }
    if hom_dim(a, c) == 0 {
        return Ok(false);
    }
    factors_through(a, c, b)
}

/// Like [`composite_nonzero`] but treating missing morphisms as a zero
/// composite. Used for rank bookkeeping where a vanishing Hom space simply
/// contributes a zero entry.
pub(crate) fn composite_nonzero_relaxed(a: &Arc, b: &Arc, c: &Arc) -> bool {
    composite_nonzero(a, b, c).unwrap_or(false)
}

/// Structural test for the nonzero map `source → target` being annihilated by
/// every map out of the triangulation.
///
/// The arcs `w` with nonzero composite `w → source → target` are exactly those
/// with one endpoint in `(c0⁺, b0]` and the other in `(c1⁺, b1]`, where
/// `(b0, b1, c0, c1)` is the witnessing labeling of `source` against `target`.
/// The map is killed exactly when the triangulation avoids that hammock,
/// which is decidable from its finite description.
pub fn killed_by_triangulation(source: &Arc, target: &Arc, tri: &FanTriangulation) -> bool {
    let Some(w) = hom_witness(source, target) else {
        // Zero map: trivially annihilated.
        return true;
    };
    !tri.meets_hammock((w.c0.successor(), w.b0), (w.c1.successor(), w.b1))
}

/// Windowed fallback for [`killed_by_triangulation`]: enumerates the members
/// of the triangulation inside the window and checks the composites directly.
/// A `false` here is conclusive; a `true` only covers the window.
pub fn killed_by_triangulation_in_window(
    source: &Arc,
    target: &Arc,
    tri: &FanTriangulation,
    window: Window,
) -> bool {
    if hom_dim(source, target) == 0 {
        return true;
    }
    tri.members_in_window(window)
        .iter()
        .all(|member| !composite_nonzero_relaxed(member, source, target))
}
