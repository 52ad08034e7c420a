//! Distinguished triangles with their nonzero-component patterns, and the
//! windowed exactness verification that keeps every construction honest.
//!
//! A triangle records the three objects together with the nonzero-component
//! patterns of all three maps. Scalars are irrelevant: every Hom space in
//! sight is at most one-dimensional and the component patterns of the
//! constructed maps are staircases, so ranks are determined by which
//! components vanish.

use std::fmt;

use thiserror::Error;

use crate::homext::{composite_nonzero_relaxed, ext_dim, hom_dim};
use crate::oracle::{enumerate_arcs, Window};
use crate::rank::integer_matrix_rank;
use crate::surface::{Arc, MarkedPoint, ModelParams, Obj};

#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleError {
    #[error("NoExtension: no nonzero extension class exists for this ordered pair")]
    NoExtension,
}

/// How the triangle arose; stored for display and reporting.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriangleKind {
    /// Transversely crossing end terms, quadrilateral middle term.
    Transverse,
    /// End terms sharing one accumulation endpoint, single middle arc.
    SharedAccumulation,
    /// An arc with two accumulation endpoints extending itself.
    SelfExtension,
    /// Approximation triangle of an object against a fan triangulation.
    Approximation,
    /// Exchange triangle of a flip quadrilateral.
    Exchange,
    /// Split triangle with zero connecting map.
    Split,
    /// Summand-wise direct sum of two triangles.
    DirectSum,
}

impl fmt::Display for TriangleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            TriangleKind::Transverse => "transverse",
            TriangleKind::SharedAccumulation => "shared-accumulation",
            TriangleKind::SelfExtension => "self-extension",
            TriangleKind::Approximation => "approximation",
            TriangleKind::Exchange => "exchange",
            TriangleKind::Split => "split",
            TriangleKind::DirectSum => "direct-sum",
        };
        write!(f, "{tag}")
    }
}

/// Sort a summand list into canonical order and return the old-to-new index
/// map, so component patterns can be carried across canonicalization.
fn canonicalize(arcs: Vec<Arc>) -> (Obj, Vec<usize>) {
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_by_key(|&i| arcs[i]);
    let mut old_to_new = vec![0usize; arcs.len()];
    for (new_pos, &old) in order.iter().enumerate() {
        old_to_new[old] = new_pos;
    }
    let sorted: Vec<Arc> = order.iter().map(|&i| arcs[i]).collect();
    (Obj::from_arcs(sorted), old_to_new)
}

/// A distinguished triangle `A → B → C → ΣA`.
///
/// Component lists hold index pairs into the summand vectors of the adjacent
/// objects; a pair records that the corresponding component of the map is the
/// nonzero morphism. `connecting` pairs `(i, j)` mean the component
/// `C_i → Σ A_j` is nonzero; an empty list is the zero connecting map. Values
/// are only produced by the constructors here and in the index module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triangle {
    a: Obj,
    b: Obj,
    c: Obj,
    map_ab: Vec<(usize, usize)>,
    map_bc: Vec<(usize, usize)>,
    connecting: Vec<(usize, usize)>,
    kind: TriangleKind,
}

impl Triangle {
    /// Build from summand lists in construction order; objects are
    /// canonicalized and the component indices remapped accordingly. Every
    /// recorded component must be a nonzero morphism.
    pub(crate) fn assemble(
        a: Vec<Arc>,
        b: Vec<Arc>,
        c: Vec<Arc>,
        map_ab: Vec<(usize, usize)>,
        map_bc: Vec<(usize, usize)>,
        connecting: Vec<(usize, usize)>,
        kind: TriangleKind,
    ) -> Triangle {
        let (a, pa) = canonicalize(a);
        let (b, pb) = canonicalize(b);
        let (c, pc) = canonicalize(c);
        let map_ab: Vec<_> = map_ab.into_iter().map(|(i, j)| (pa[i], pb[j])).collect();
        let map_bc: Vec<_> = map_bc.into_iter().map(|(i, j)| (pb[i], pc[j])).collect();
        let connecting: Vec<_> = connecting.into_iter().map(|(i, j)| (pc[i], pa[j])).collect();
        for &(i, j) in &map_ab {
            debug_assert_eq!(hom_dim(&a.summands()[i], &b.summands()[j]), 1);
        }
        for &(i, j) in &map_bc {
            debug_assert_eq!(hom_dim(&b.summands()[i], &c.summands()[j]), 1);
        }
        for &(i, j) in &connecting {
            debug_assert_eq!(hom_dim(&c.summands()[i], &a.summands()[j].suspend(1)), 1);
        }
        Triangle { a, b, c, map_ab, map_bc, connecting, kind }
    }

    pub fn first(&self) -> &Obj {
        &self.a
    }

    pub fn middle(&self) -> &Obj {
        &self.b
    }

    pub fn last(&self) -> &Obj {
        &self.c
    }

    pub fn kind(&self) -> TriangleKind {
        self.kind
    }

    /// Nonzero components of the connecting map as `(summand of C, summand of ΣA)`.
    pub fn connecting_components(&self) -> Vec<(Arc, Arc)> {
        self.connecting
            .iter()
            .map(|&(i, j)| (self.c.summands()[i], self.a.summands()[j].suspend(1)))
            .collect()
    }

    pub(crate) fn connecting_indices(&self) -> &[(usize, usize)] {
        &self.connecting
    }

    pub fn has_zero_connecting_map(&self) -> bool {
        self.connecting.is_empty()
    }

    /// Summand-wise direct sum.
    pub fn direct_sum(&self, other: &Triangle) -> Triangle {
        let (na, nb, nc) = (
            self.a.summands().len(),
            self.b.summands().len(),
            self.c.summands().len(),
        );
        let cat = |x: &Obj, y: &Obj| {
            let mut v = x.summands().to_vec();
            v.extend_from_slice(y.summands());
            v
        };
        let shift = |pairs: &[(usize, usize)], di: usize, dj: usize| {
            pairs.iter().map(|&(i, j)| (i + di, j + dj)).collect::<Vec<_>>()
        };
        let mut map_ab = self.map_ab.clone();
        map_ab.extend(shift(&other.map_ab, na, nb));
        let mut map_bc = self.map_bc.clone();
        map_bc.extend(shift(&other.map_bc, nb, nc));
        let mut connecting = self.connecting.clone();
        connecting.extend(shift(&other.connecting, nc, na));
        Triangle::assemble(
            cat(&self.a, &other.a),
            cat(&self.b, &other.b),
            cat(&self.c, &other.c),
            map_ab,
            map_bc,
            connecting,
            TriangleKind::DirectSum,
        )
    }

    /// The triangle translated by a power of the suspension. Suspension is an
    /// autoequivalence, so the component patterns transport unchanged.
    pub fn suspend(&self, power: i64) -> Triangle {
        let shift = |o: &Obj| o.summands().iter().map(|x| x.suspend(power)).collect();
        Triangle::assemble(
            shift(&self.a),
            shift(&self.b),
            shift(&self.c),
            self.map_ab.clone(),
            self.map_bc.clone(),
            self.connecting.clone(),
            self.kind,
        )
    }

    pub(crate) fn retag_exchange(mut self) -> Triangle {
        self.kind = TriangleKind::Exchange;
        self
    }

    #[cfg(test)]
    pub(crate) fn corrupt_middle_for_tests(&self, index: usize) -> Triangle {
        let mut arcs = self.b.summands().to_vec();
        arcs[index] = arcs[index].suspend(1);
        let (b, _) = canonicalize(arcs);
        Triangle { b, ..self.clone() }
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} -> {} -> S{} ({})",
            self.a, self.b, self.c, self.a, self.kind
        )
    }
}

/// Canonical labeling of a transversely crossing pair: endpoints read
/// `a0, c0, a1, c1` anticlockwise starting from the smaller endpoint of `a`.
pub(crate) fn crossing_labels(
    a: &Arc,
    c: &Arc,
) -> (MarkedPoint, MarkedPoint, MarkedPoint, MarkedPoint) {
    debug_assert!(a.crosses_transversely(c));
    let (a0, a1) = a.endpoints();
    let (p, q) = c.endpoints();
    let c0 = if crate::surface::in_interval(p, a0, a1, false, false) { p } else { q };
    let c1 = c.other_endpoint(c0).expect("c has two endpoints");
    (a0, c0, a1, c1)
}

/// The triangle `A → B → C → ΣA` realizing the unique nonzero extension class
/// of `C` by `A`. Middle-term summands whose endpoint pairs bound no arc are
/// dropped.
pub fn extension_triangle(c: &Arc, a: &Arc) -> Result<Triangle, TriangleError> {
    if ext_dim(c, a) == 0 {
        return Err(TriangleError::NoExtension);
    }
    if a == c {
        // Both endpoints accumulation: C → 0 → C with identity connecting map.
        return Ok(Triangle::assemble(
            vec![*c],
            vec![],
            vec![*c],
            vec![],
            vec![],
            vec![(0, 0)],
            TriangleKind::SelfExtension,
        ));
    }
    if a.crosses_transversely(c) {
        let (a0, c0, a1, c1) = crossing_labels(a, c);
        let kept: Vec<Arc> = [Arc::new(c0, a1), Arc::new(c1, a0)]
            .into_iter()
            .filter_map(|m| m.ok())
            .collect();
        let map_ab = (0..kept.len()).map(|j| (0, j)).collect();
        let map_bc = (0..kept.len()).map(|i| (i, 0)).collect();
        return Ok(Triangle::assemble(
            vec![*a],
            kept,
            vec![*c],
            map_ab,
            map_bc,
            vec![(0, 0)],
            TriangleKind::Transverse,
        ));
    }
    // Shared accumulation endpoint: A → E → C with E joining the free
    // endpoints, zero exactly when they neighbour (equivalently ΣA = C).
    let p = a.shared_endpoint(c).expect("ext class forces a shared endpoint");
    let c0 = c.other_endpoint(p).expect("free endpoint of c");
    let a0 = a.other_endpoint(p).expect("free endpoint of a");
    let (b, map_ab, map_bc) = match Arc::new(a0, c0) {
        Ok(e) => (vec![e], vec![(0, 0)], vec![(0, 0)]),
        Err(_) => {
            debug_assert_eq!(a.suspend(1), *c);
            (vec![], vec![], vec![])
        }
    };
    Ok(Triangle::assemble(
        vec![*a],
        b,
        vec![*c],
        map_ab,
        map_bc,
        vec![(0, 0)],
        TriangleKind::SharedAccumulation,
    ))
}

/// The companion triangle `C → D1 ⊕ D2 → A → ΣC` of a transversely crossing
/// pair, under the same labeling as [`extension_triangle`]. Pairs meeting in
/// an accumulation point have no such triangle.
pub fn dual_extension_triangle(a: &Arc, c: &Arc) -> Result<Triangle, TriangleError> {
    if !a.crosses_transversely(c) {
        return Err(TriangleError::NoExtension);
    }
    let (a0, c0, a1, c1) = crossing_labels(a, c);
    let kept: Vec<Arc> = [Arc::new(a1, c1), Arc::new(a0, c0)]
        .into_iter()
        .filter_map(|m| m.ok())
        .collect();
    let map_ab = (0..kept.len()).map(|j| (0, j)).collect();
    let map_bc = (0..kept.len()).map(|i| (i, 0)).collect();
    Ok(Triangle::assemble(
        vec![*c],
        kept,
        vec![*a],
        map_ab,
        map_bc,
        vec![(0, 0)],
        TriangleKind::Transverse,
    ))
}

/// The split triangle `X → X → 0 → ΣX`.
pub fn split_triangle(x: &Arc) -> Triangle {
    Triangle::assemble(
        vec![*x],
        vec![*x],
        vec![],
        vec![(0, 0)],
        vec![],
        vec![],
        TriangleKind::Split,
    )
}

/// One failed exactness position of the windowed check.
#[derive(Clone, Debug)]
pub struct ExactnessFailure {
    pub witness: Arc,
    pub position: &'static str,
    pub expected: usize,
    pub got: usize,
}

/// Result of checking a triangle against every probe arc in a window.
#[derive(Clone, Debug, Default)]
pub struct TriangleReport {
    pub failures: Vec<ExactnessFailure>,
    pub probes: usize,
}

impl TriangleReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn dim_total(w: &Arc, summands: &[Arc]) -> usize {
    summands.iter().map(|s| hom_dim(w, s) as usize).sum()
}

/// Rank of `Hom(w, ⊕src) → Hom(w, ⊕dst)` for the map with the given nonzero
/// component pattern.
fn probe_rank(w: &Arc, src: &[Arc], dst: &[Arc], components: &[(usize, usize)]) -> usize {
    let cols: Vec<usize> = (0..src.len()).filter(|&i| hom_dim(w, &src[i]) == 1).collect();
    let rows: Vec<usize> = (0..dst.len()).filter(|&j| hom_dim(w, &dst[j]) == 1).collect();
    if cols.is_empty() || rows.is_empty() {
        return 0;
    }
    let mut matrix = vec![vec![0i128; cols.len()]; rows.len()];
    for &(i, j) in components {
        let (Some(ci), Some(rj)) = (
            cols.iter().position(|&x| x == i),
            rows.iter().position(|&x| x == j),
        ) else {
            continue;
        };
        if composite_nonzero_relaxed(w, &src[i], &dst[j]) {
            matrix[rj][ci] = 1;
        }
    }
    integer_matrix_rank(&matrix)
}

/// Exactness of the induced dimension counts
/// `Hom(W,A) → Hom(W,B) → Hom(W,C) → Hom(W,ΣA) → Hom(W,ΣB)` at the three
/// interior positions, for every arc `W` with endpoints in the window.
pub fn verify_triangle_window(t: &Triangle, params: ModelParams, window: Window) -> TriangleReport {
    let mut report = TriangleReport::default();
    let a: Vec<Arc> = t.a.summands().to_vec();
    let b: Vec<Arc> = t.b.summands().to_vec();
    let c: Vec<Arc> = t.c.summands().to_vec();
    let sa: Vec<Arc> = a.iter().map(|x| x.suspend(1)).collect();
    let sb: Vec<Arc> = b.iter().map(|x| x.suspend(1)).collect();
    for w in enumerate_arcs(params, window) {
        report.probes += 1;
        let rank_ab = probe_rank(&w, &a, &b, &t.map_ab);
        let rank_bc = probe_rank(&w, &b, &c, &t.map_bc);
        let rank_conn = probe_rank(&w, &c, &sa, &t.connecting);
        let rank_sab = probe_rank(&w, &sa, &sb, &t.map_ab);
        let checks = [
            ("B", rank_ab + rank_bc, dim_total(&w, &b)),
            ("C", rank_bc + rank_conn, dim_total(&w, &c)),
            ("SA", rank_conn + rank_sab, dim_total(&w, &sa)),
        ];
        for (position, got, expected) in checks {
            if got != expected {
                report.failures.push(ExactnessFailure { witness: w, position, expected, got });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::MarkedPoint;

    fn a(j: u32) -> MarkedPoint {
        MarkedPoint::acc(j)
    }

    fn r(j: u32, k: i64) -> MarkedPoint {
        MarkedPoint::reg(j, k)
    }

    fn arc(p: MarkedPoint, q: MarkedPoint) -> Arc {
        Arc::new(p, q).unwrap()
    }

    #[test]
    fn transverse_with_one_dropped_summand() {
        let c = arc(r(0, 1), r(0, 3));
        let av = arc(r(0, 0), r(0, 2));
        let t = extension_triangle(&c, &av).unwrap();
        assert_eq!(t.middle(), &Obj::single(arc(r(0, 0), r(0, 3))));
        assert_eq!(t.kind(), TriangleKind::Transverse);
    }

    #[test]
    fn shared_accumulation_backward_extension() {
        // n = 1 fountain arc X = {a0, r0:0}; the middle term joins the free
        // endpoints of X and its double desuspension.
        let x = arc(a(0), r(0, 0));
        let s2 = x.suspend(-2);
        let t = extension_triangle(&x, &s2).unwrap();
        assert_eq!(t.middle(), &Obj::single(arc(r(0, 0), r(0, 2))));
        assert_eq!(t.kind(), TriangleKind::SharedAccumulation);
    }

    #[test]
    fn shared_accumulation_degenerate_middle() {
        // ΣA = C: the connecting class is realized with zero middle term.
        let c = arc(a(0), r(0, 0));
        let av = c.suspend(-1);
        let t = extension_triangle(&c, &av).unwrap();
        assert!(t.middle().is_zero());
    }

    #[test]
    fn self_extension_triangle() {
        let c = arc(a(0), a(1));
        let t = extension_triangle(&c, &c).unwrap();
        assert!(t.middle().is_zero());
        assert_eq!(t.connecting_components(), vec![(c, c)]);
    }

    #[test]
    fn dual_extension_rules() {
        let c = arc(r(0, 1), r(0, 3));
        let av = arc(r(0, 0), r(0, 2));
        let t = dual_extension_triangle(&av, &c).unwrap();
        assert_eq!(t.first(), &Obj::single(c));
        assert_eq!(t.last(), &Obj::single(av));
        // No reverse triangle for a shared-accumulation pair.
        let cc = arc(r(0, 0), a(0));
        let aa = arc(r(0, 2), a(0));
        assert_eq!(ext_dim(&cc, &aa), 1);
        assert_eq!(dual_extension_triangle(&aa, &cc), Err(TriangleError::NoExtension));
        // Equal double-accumulation arcs are handled by the self case only.
        let d = arc(a(0), a(1));
        assert_eq!(dual_extension_triangle(&d, &d), Err(TriangleError::NoExtension));
    }

    #[test]
    fn window_verification_accepts_constructions() {
        let params = ModelParams::new(1).unwrap();
        let cases = [
            (arc(r(0, 1), r(0, 3)), arc(r(0, 0), r(0, 2))),
            (arc(r(0, 0), r(0, 4)), arc(r(0, 2), r(0, 6))),
            (arc(a(0), r(0, 0)), arc(a(0), r(0, 2))),
        ];
        for (c, av) in cases {
            if ext_dim(&c, &av) == 1 {
                let t = extension_triangle(&c, &av).unwrap();
                let rep = verify_triangle_window(&t, params, Window(8));
                assert!(rep.pass(), "{t} failed: {:?}", rep.failures.first());
            }
            if ext_dim(&av, &c) == 1 {
                let t = extension_triangle(&av, &c).unwrap();
                let rep = verify_triangle_window(&t, params, Window(8));
                assert!(rep.pass(), "{t} failed: {:?}", rep.failures.first());
            }
        }
        let params2 = ModelParams::new(2).unwrap();
        let t = extension_triangle(&arc(a(0), a(1)), &arc(a(0), a(1))).unwrap();
        assert!(verify_triangle_window(&t, params2, Window(6)).pass());
    }

    #[test]
    fn window_verification_rejects_corruption() {
        let params = ModelParams::new(1).unwrap();
        let c = arc(r(0, 0), r(0, 4));
        let av = arc(r(0, 2), r(0, 6));
        let t = extension_triangle(&c, &av).unwrap();
        assert!(verify_triangle_window(&t, params, Window(8)).pass());
        let bad = t.corrupt_middle_for_tests(0);
        let rep = verify_triangle_window(&bad, params, Window(8));
        assert!(!rep.pass(), "corrupted middle term must fail somewhere");
    }

    #[test]
    fn rotation_pair_both_exact() {
        let params = ModelParams::new(1).unwrap();
        let c = arc(r(0, 0), r(0, 4));
        let av = arc(r(0, 2), r(0, 6));
        let t1 = extension_triangle(&c, &av).unwrap();
        let t2 = dual_extension_triangle(&av, &c).unwrap();
        assert!(verify_triangle_window(&t1, params, Window(8)).pass());
        assert!(verify_triangle_window(&t2, params, Window(8)).pass());
    }

    #[test]
    fn direct_sum_and_suspension() {
        let t1 = extension_triangle(&arc(r(0, 1), r(0, 3)), &arc(r(0, 0), r(0, 2))).unwrap();
        let t2 = split_triangle(&arc(a(0), r(0, 5)));
        let s = t1.direct_sum(&t2);
        assert_eq!(s.first().summands().len(), 2);
        let params = ModelParams::new(1).unwrap();
        assert!(verify_triangle_window(&s, params, Window(8)).pass());
        assert!(verify_triangle_window(&t1.suspend(1), params, Window(8)).pass());
    }
}
