//! Exact planar predicates.
//!
//! Everything here is sign arithmetic on integer coordinates. The scalar type is
//! generic through [`Coordinate`], which pairs a storage type with a wider type
//! large enough to hold a 2x2 determinant of coordinate differences. `i64`
//! coordinates are widened to `i128`; `BigInt` widens to itself.

use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest absolute coordinate accepted for fixed-width scalars.
pub const COORD_LIMIT: i64 = 1 << 30;

/// Radius used for integer regular-polygon placements.
pub const POLYGON_RADIUS: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("coordinate ({x}, {y}) exceeds the supported range ±2^30")]
    CoordinateOutOfRange { x: String, y: String },
    #[error("segments share an endpoint")]
    SharedEndpoint,
    #[error("label {label} outside 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("edge endpoints coincide")]
    DegenerateEdge,
}

/// A scalar usable as an exact planar coordinate.
pub trait Coordinate: Clone + Ord + fmt::Debug {
    type Wide: Clone + Ord + Zero + Signed + Sub<Output = Self::Wide> + Mul<Output = Self::Wide>;

    fn widen(&self) -> Self::Wide;

    /// Whether the value is inside the range where determinants are exact.
    fn in_range(&self) -> bool;
}

impl Coordinate for i32 {
    type Wide = i64;

    fn widen(&self) -> i64 {
        i64::from(*self)
    }

    fn in_range(&self) -> bool {
        true
    }
}

impl Coordinate for i64 {
    type Wide = i128;

    fn widen(&self) -> i128 {
        i128::from(*self)
    }

    fn in_range(&self) -> bool {
        (-COORD_LIMIT..=COORD_LIMIT).contains(self)
    }
}

impl Coordinate for BigInt {
    type Wide = BigInt;

    fn widen(&self) -> BigInt {
        self.clone()
    }

    fn in_range(&self) -> bool {
        true
    }
}

/// A point with exact coordinates. Defaults to `i64` storage.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point<T = i64> {
    pub x: T,
    pub y: T,
}

impl<T: Coordinate> Point<T> {
    pub fn new(x: T, y: T) -> Result<Self, GeometryError> {
        if x.in_range() && y.in_range() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::CoordinateOutOfRange { x: format!("{x:?}"), y: format!("{y:?}") })
        }
    }
}

impl<T: Copy> Point<T> {
    pub fn xy(&self) -> (T, T) {
        (self.x, self.y)
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Sign of the signed area of the triangle `(p, q, r)`.
pub fn orientation<T: Coordinate>(p: &Point<T>, q: &Point<T>, r: &Point<T>) -> Orientation {
    let (px, py) = (p.x.widen(), p.y.widen());
    let det = (q.x.widen() - px.clone()) * (r.y.widen() - py.clone()) - (q.y.widen() - py) * (r.x.widen() - px);
    if det.is_positive() {
        Orientation::CounterClockwise
    } else if det.is_negative() {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// Proper-crossing test without the endpoint distinctness check.
pub(crate) fn crosses_properly<T: Coordinate>(a1: &Point<T>, a2: &Point<T>, b1: &Point<T>, b2: &Point<T>) -> bool {
    let o1 = orientation(a1, a2, b1);
    let o2 = orientation(a1, a2, b2);
    let o3 = orientation(b1, b2, a1);
    let o4 = orientation(b1, b2, a2);
    if [o1, o2, o3, o4].contains(&Orientation::Collinear) {
        return false;
    }
    o1 != o2 && o3 != o4
}

/// True iff the open segments `a1a2` and `b1b2` meet in exactly one interior point.
///
/// Touching and collinear-overlap configurations return `false`. The four
/// endpoints must be pairwise distinct.
pub fn segments_cross<T: Coordinate>(
    a1: &Point<T>,
    a2: &Point<T>,
    b1: &Point<T>,
    b2: &Point<T>,
) -> Result<bool, GeometryError> {
    let pts = [a1, a2, b1, b2];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pts[i] == pts[j] {
                return Err(GeometryError::SharedEndpoint);
            }
        }
    }
    Ok(crosses_properly(a1, a2, b1, b2))
}

/// Distinct points with no three collinear.
pub fn is_general_position<T: Coordinate>(points: &[Point<T>]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i] == points[j] {
                return false;
            }
            for k in (j + 1)..n {
                if orientation(&points[i], &points[j], &points[k]) == Orientation::Collinear {
                    return false;
                }
            }
        }
    }
    true
}

/// Crossing rule for a convex clique whose vertices are labelled `1..=n` in hull order.
///
/// Two disjoint chords cross iff their endpoints alternate around the hull.
pub fn convex_crossing_rule(n: usize, e1: (usize, usize), e2: (usize, usize)) -> Result<bool, GeometryError> {
    for label in [e1.0, e1.1, e2.0, e2.1] {
        if label == 0 || label > n {
            return Err(GeometryError::LabelOutOfRange { label, n });
        }
    }
    if e1.0 == e1.1 || e2.0 == e2.1 {
        return Err(GeometryError::DegenerateEdge);
    }
    if e1.0 == e2.0 || e1.0 == e2.1 || e1.1 == e2.0 || e1.1 == e2.1 {
        return Err(GeometryError::SharedEndpoint);
    }
    let a = (e1.0.min(e1.1), e1.0.max(e1.1));
    let b = (e2.0.min(e2.1), e2.0.max(e2.1));
    let (a, b) = if a.0 < b.0 { (a, b) } else { (b, a) };
    Ok(a.0 < b.0 && b.0 < a.1 && a.1 < b.1)
}

/// Integer points on a circle of radius `radius`, `count` of them equally spaced,
/// starting at angle 0 and proceeding counter-clockwise.
pub(crate) fn circle_points(count: usize, radius: i64) -> Vec<Point> {
    (0..count)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
            let r = radius as f64;
            Point { x: (r * theta.cos()).round() as i64, y: (r * theta.sin()).round() as i64 }
        })
        .collect()
}

/// Regular `n`-gon with integer vertices in general position, counter-clockwise
/// from angle 0. The radius starts at [`POLYGON_RADIUS`] and grows until the
/// rounded points pass the general-position check.
pub fn regular_polygon(n: usize) -> Vec<Point> {
    let mut radius = POLYGON_RADIUS;
    loop {
        let pts = circle_points(n, radius);
        if is_general_position(&pts) {
            return pts;
        }
        radius += 1;
    }
}
