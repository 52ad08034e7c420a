//! The geometric model: a disc whose boundary circle carries, for each of the
//! `n` intervals, a bi-infinite discrete family of regular marked points
//! converging to accumulation points at both ends. Marked points come with an
//! exact cyclic order; arcs join non-neighbouring marked points.
//!
//! All comparisons are order-theoretic on integer coordinates. The cyclic
//! order is anchored at `Accumulation(0)`; the anchor is unobservable except
//! in serialized interval indices.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Parameters of the disc model: the number of accumulation points.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ModelParams {
    n: u32,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("InvalidParams: the model needs at least one accumulation point")]
pub struct InvalidParams;

impl ModelParams {
    pub fn new(n: u32) -> Result<Self, InvalidParams> {
        if n == 0 {
            return Err(InvalidParams);
        }
        Ok(ModelParams { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Whether the point's interval index is in range for this model.
    pub fn contains_point(&self, p: MarkedPoint) -> bool {
        p.interval() < self.n
    }

    pub fn contains_arc(&self, a: &Arc) -> bool {
        self.contains_point(a.lo()) && self.contains_point(a.hi())
    }
}

/// A marked point on the boundary circle.
///
/// Interval `j` is the anticlockwise boundary segment from `Accumulation(j)`
/// to `Accumulation((j+1) mod n)`. Within it, `Regular(j, k)` precedes
/// `Regular(j, k+1)` anticlockwise; `k → −∞` approaches `Accumulation(j)` and
/// `k → +∞` approaches the next accumulation point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MarkedPoint {
    Accumulation { interval: u32 },
    Regular { interval: u32, position: i64 },
}

impl MarkedPoint {
    pub fn acc(interval: u32) -> Self {
        MarkedPoint::Accumulation { interval }
    }

    pub fn reg(interval: u32, position: i64) -> Self {
        MarkedPoint::Regular { interval, position }
    }

    pub fn interval(&self) -> u32 {
        match *self {
            MarkedPoint::Accumulation { interval } => interval,
            MarkedPoint::Regular { interval, .. } => interval,
        }
    }

    pub fn is_accumulation(&self) -> bool {
        matches!(self, MarkedPoint::Accumulation { .. })
    }

    /// The next marked point anticlockwise; accumulation points are fixed.
    pub fn successor(&self) -> Self {
        match *self {
            MarkedPoint::Accumulation { .. } => *self,
            MarkedPoint::Regular { interval, position } => MarkedPoint::Regular {
                interval,
                position: position + 1,
            },
        }
    }

    /// The next marked point clockwise; accumulation points are fixed.
    pub fn predecessor(&self) -> Self {
        match *self {
            MarkedPoint::Accumulation { .. } => *self,
            MarkedPoint::Regular { interval, position } => MarkedPoint::Regular {
                interval,
                position: position - 1,
            },
        }
    }

    /// Apply `steps` clockwise steps (negative counts move anticlockwise).
    pub fn clockwise(&self, steps: i64) -> Self {
        match *self {
            MarkedPoint::Accumulation { .. } => *self,
            MarkedPoint::Regular { interval, position } => MarkedPoint::Regular {
                interval,
                position: position - steps,
            },
        }
    }

    /// Immediate neighbours are consecutive regular points of one interval;
    /// accumulation points have none.
    pub fn is_neighbour_of(&self, other: &MarkedPoint) -> bool {
        match (*self, *other) {
            (
                MarkedPoint::Regular { interval: i, position: p },
                MarkedPoint::Regular { interval: j, position: q },
            ) => i == j && (p - q).abs() == 1,
            _ => false,
        }
    }

    fn order_key(&self) -> (u32, u8, i64) {
        match *self {
            MarkedPoint::Accumulation { interval } => (interval, 0, 0),
            MarkedPoint::Regular { interval, position } => (interval, 1, position),
        }
    }
}

/// Total order anchored at `Accumulation(0)`: within each interval the
/// accumulation point comes first, then the regular points in ascending
/// position.
impl Ord for MarkedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for MarkedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MarkedPoint::Accumulation { interval } => write!(f, "a{interval}"),
            MarkedPoint::Regular { interval, position } => write!(f, "r{interval}:{position}"),
        }
    }
}

/// `x` strictly inside the anticlockwise sweep from `a` to `b`, for pairwise
/// distinct points. This is the three-point orientation predicate on the
/// anchored total order.
fn strictly_between(a: MarkedPoint, x: MarkedPoint, b: MarkedPoint) -> bool {
    debug_assert!(a != x && x != b && a != b);
    (a < x && x < b) || (b < a && a < x) || (x < b && b < a)
}

/// Membership of `x` in the anticlockwise interval from `a` to `b` with the
/// given endpoint closures.
///
/// When `a == b` the sweep convention applies: `[a,a] = {a}`, `(a,a)` is the
/// whole circle minus `a`, and the half-open variants cover the whole circle.
pub fn in_interval(
    x: MarkedPoint,
    a: MarkedPoint,
    b: MarkedPoint,
    left_closed: bool,
    right_closed: bool,
) -> bool {
    if a == b {
        if x == a {
            left_closed || right_closed
        } else {
            !(left_closed && right_closed)
        }
    } else if x == a {
        left_closed
    } else if x == b {
        right_closed
    } else {
        strictly_between(a, x, b)
    }
}

#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcError {
    #[error("EqualEndpoints: an arc needs two distinct marked points")]
    EqualEndpoints,
    #[error("NeighbouringEndpoints: consecutive marked points bound no arc")]
    NeighbouringEndpoints,
}

/// An arc between two non-neighbouring marked points, stored with its
/// endpoints in canonical order so equal arcs compare equal.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Arc {
    lo: MarkedPoint,
    hi: MarkedPoint,
}

impl Arc {
    pub fn new(a: MarkedPoint, b: MarkedPoint) -> Result<Self, ArcError> {
        if a == b {
            return Err(ArcError::EqualEndpoints);
        }
        if a.is_neighbour_of(&b) {
            return Err(ArcError::NeighbouringEndpoints);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Ok(Arc { lo, hi })
    }

    pub fn lo(&self) -> MarkedPoint {
        self.lo
    }

    pub fn hi(&self) -> MarkedPoint {
        self.hi
    }

    pub fn endpoints(&self) -> (MarkedPoint, MarkedPoint) {
        (self.lo, self.hi)
    }

    pub fn has_endpoint(&self, p: MarkedPoint) -> bool {
        self.lo == p || self.hi == p
    }

    /// The endpoint other than `p`, if `p` is an endpoint.
    pub fn other_endpoint(&self, p: MarkedPoint) -> Option<MarkedPoint> {
        if self.lo == p {
            Some(self.hi)
        } else if self.hi == p {
            Some(self.lo)
        } else {
            None
        }
    }

    /// The unique shared endpoint of two distinct arcs, if any.
    pub fn shared_endpoint(&self, other: &Arc) -> Option<MarkedPoint> {
        if self == other {
            return None;
        }
        [self.lo, self.hi]
            .into_iter()
            .find(|p| other.has_endpoint(*p))
    }

    /// At least one endpoint is an accumulation point.
    pub fn is_limit(&self) -> bool {
        self.lo.is_accumulation() || self.hi.is_accumulation()
    }

    pub fn both_endpoints_accumulation(&self) -> bool {
        self.lo.is_accumulation() && self.hi.is_accumulation()
    }

    /// Move both endpoints `power` clockwise steps (negative powers move
    /// anticlockwise); accumulation endpoints stay put. Valid arcs stay valid.
    pub fn suspend(&self, power: i64) -> Arc {
        Arc::new(self.lo.clockwise(power), self.hi.clockwise(power))
            .expect("shifting both endpoints preserves arc validity")
    }

    /// Transverse crossing: the four endpoints are pairwise distinct and
    /// strictly interleave in the cyclic order.
    pub fn crosses_transversely(&self, other: &Arc) -> bool {
        let (a0, a1) = self.endpoints();
        let (c0, c1) = other.endpoints();
        if a0 == c0 || a0 == c1 || a1 == c0 || a1 == c1 {
            return false;
        }
        strictly_between(a0, c0, a1) != strictly_between(a0, c1, a1)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A finite multiset of arcs: a general object. The empty multiset is the
/// zero object.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Obj {
    summands: Vec<Arc>,
}

impl Obj {
    pub fn zero() -> Self {
        Obj { summands: Vec::new() }
    }

    pub fn from_arcs(mut arcs: Vec<Arc>) -> Self {
        arcs.sort();
        Obj { summands: arcs }
    }

    pub fn single(arc: Arc) -> Self {
        Obj { summands: vec![arc] }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> &[Arc] {
        &self.summands
    }

    pub fn direct_sum(&self, other: &Obj) -> Obj {
        let mut arcs = self.summands.clone();
        arcs.extend_from_slice(&other.summands);
        Obj::from_arcs(arcs)
    }

    pub fn suspend(&self, power: i64) -> Obj {
        Obj::from_arcs(self.summands.iter().map(|a| a.suspend(power)).collect())
    }

    pub fn contains_summand(&self, arc: &Arc) -> bool {
        self.summands.contains(arc)
    }

    /// Multiset intersection with another object is non-empty.
    pub fn shares_summand_with(&self, other: &Obj) -> bool {
        self.summands.iter().any(|a| other.contains_summand(a))
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, arc) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{arc}")?;
        }
        write!(f, "]")
    }
}
