//! Planar geometry for sensor layouts: points, the deployment rectangle,
//! exact predicates, the Delaunay neighbor graph and its clipped Voronoi dual.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

mod delaunay;
pub mod predicates;
mod voronoi;

pub use delaunay::{delaunay, Triangulation};
pub use voronoi::{voronoi, Segment, VoronoiDiagram};

/// Index of a sensor within its [`SensorLayout`].
pub type NodeId = usize;

/// A finite point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    x: f64,
    y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point2 { x, y })
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Caller guarantees finiteness.
    pub(crate) const fn raw(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn distance2(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn midpoint(&self, other: &Point2) -> Point2 {
        Point2::raw(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Lexicographic (x, then y) total order.
    pub fn lex_cmp(&self, other: &Point2) -> Ordering {
        self.x.total_cmp(&other.x).then_with(|| self.y.total_cmp(&other.y))
    }
}

/// Axis-aligned rectangle with strictly positive area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    min: Point2,
    max: Point2,
}

impl BoundingBox {
    /// Points within this distance of the border count as on it.
    pub const CLIP_TOLERANCE: f64 = 1e-12;

    pub fn new(min: Point2, max: Point2) -> Result<Self> {
        if min.x < max.x && min.y < max.y {
            Ok(BoundingBox { min, max })
        } else {
            Err(Error::InvalidBoundingBox)
        }
    }

    pub fn from_coords(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        BoundingBox::new(Point2::new(min_x, min_y)?, Point2::new(max_x, max_y)?)
    }

    pub fn unit() -> Self {
        BoundingBox {
            min: Point2::raw(0.0, 0.0),
            max: Point2::raw(1.0, 1.0),
        }
    }

    pub fn min(&self) -> Point2 {
        self.min
    }

    pub fn max(&self) -> Point2 {
        self.max
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Moves coordinates within [`Self::CLIP_TOLERANCE`] of a border (or
    /// beyond it) exactly onto that border.
    pub(crate) fn snap(&self, p: Point2) -> Point2 {
        let tol = Self::CLIP_TOLERANCE;
        let snap1 = |v: f64, lo: f64, hi: f64| {
            if v <= lo + tol {
                lo
            } else if v >= hi - tol {
                hi
            } else {
                v
            }
        };
        Point2::raw(snap1(p.x, self.min.x, self.max.x), snap1(p.y, self.min.y, self.max.y))
    }

    /// Corners in counter-clockwise order starting at `min`.
    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::raw(self.max.x, self.min.y),
            self.max,
            Point2::raw(self.min.x, self.max.y),
        ]
    }
}

/// Immutable sensor positions inside a deployment rectangle. The index of a
/// point is its [`NodeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct SensorLayout {
    points: Vec<Point2>,
    bbox: BoundingBox,
}

impl SensorLayout {
    /// Validates containment and rejects coincident sites.
    pub fn new(points: Vec<Point2>, bbox: BoundingBox) -> Result<Self> {
        for (index, p) in points.iter().enumerate() {
            if !bbox.contains(p) {
                return Err(Error::OutsideBoundingBox { index });
            }
        }
        let mut order: Vec<NodeId> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].lex_cmp(&points[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                let (first, second) = if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
                return Err(Error::DuplicateSite { first, second });
            }
        }
        Ok(SensorLayout { points, bbox })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn point(&self, id: NodeId) -> Point2 {
        self.points[id]
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when every site lies on one line (or there are fewer than 3).
    pub fn is_collinear(&self) -> bool {
        let pts = &self.points;
        if pts.len() < 3 {
            return true;
        }
        let a = pts[0];
        let Some(b) = pts.iter().skip(1).find(|p| **p != a) else {
            return true;
        };
        pts.iter()
            .all(|c| predicates::orient2d(&a, b, c) == predicates::Sign::Zero)
    }
}

/// Unordered node pair stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub lo: NodeId,
    pub hi: NodeId,
}

impl EdgeKey {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            EdgeKey { lo: a, hi: b }
        } else {
            EdgeKey { lo: b, hi: a }
        }
    }
}
