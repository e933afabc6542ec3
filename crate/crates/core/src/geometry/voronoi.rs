use alloc::vec;
use alloc::vec::Vec;

use super::predicates::circumcenter;
use super::{BoundingBox, EdgeKey, NodeId, Point2, Triangulation};

/// A closed line segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn midpoint(&self) -> Point2 {
        self.a.midpoint(&self.b)
    }

    pub fn length(&self) -> f64 {
        self.a.distance(&self.b)
    }
}

/// Voronoi dual of a [`Triangulation`], clipped to the layout's bounding box.
///
/// `segments[k]` belongs to the Delaunay edge `edges[k]` and is `None` when
/// the clipped bisector piece is empty or degenerates to a point.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiDiagram {
    bbox: BoundingBox,
    edges: Vec<EdgeKey>,
    segments: Vec<Option<Segment>>,
    cells: Vec<Vec<Point2>>,
}

impl VoronoiDiagram {
    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    /// Delaunay edges this diagram was built from, in triangulation order.
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    /// Segment for the edge at `index` in [`Self::edges`].
    pub fn segment_at(&self, index: usize) -> Option<&Segment> {
        self.segments[index].as_ref()
    }

    pub fn segment(&self, a: NodeId, b: NodeId) -> Option<&Segment> {
        if a == b {
            return None;
        }
        let k = self.edges.binary_search(&EdgeKey::new(a, b)).ok()?;
        self.segment_at(k)
    }

    /// Present segments keyed by their node pair, in key order.
    pub fn segments(&self) -> impl Iterator<Item = (EdgeKey, &Segment)> + '_ {
        self.edges
            .iter()
            .zip(&self.segments)
            .filter_map(|(k, s)| s.as_ref().map(|s| (*k, s)))
    }

    pub fn segment_count(&self) -> usize {
        self.segments.iter().filter(|s| s.is_some()).count()
    }

    /// Counter-clockwise convex polygon of points nearer to `site` than to any
    /// other site, clipped to the bounding box.
    pub fn cell(&self, site: NodeId) -> &[Point2] {
        &self.cells[site]
    }

    pub fn cells(&self) -> &[Vec<Point2>] {
        &self.cells
    }
}

/// Builds the clipped Voronoi dual.
///
/// Each segment is computed on the perpendicular bisector of its edge,
/// parametrised from the edge midpoint, so that every emitted point is
/// equidistant from the two sites up to rounding of that single evaluation.
/// Interior edges span the two adjacent circumcenters; hull edges run from
/// the single circumcenter outwards, away from the triangulation.
pub fn voronoi(tri: &Triangulation) -> VoronoiDiagram {
    let layout = tri.layout();
    let pts = layout.points();
    let bbox = *layout.bbox();
    let centers: Vec<Point2> = tri
        .triangles()
        .iter()
        .map(|t| circumcenter(&pts[t[0]], &pts[t[1]], &pts[t[2]]))
        .collect();

    let segments = tri
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let (pa, pb) = (pts[e.lo], pts[e.hi]);
            let mid = pa.midpoint(&pb);
            // Left normal of lo -> hi.
            let dir = (-(pb.y() - pa.y()), pb.x() - pa.x());
            let param =
                |c: &Point2| ((c.x() - mid.x()) * dir.0 + (c.y() - mid.y()) * dir.1) / (dir.0 * dir.0 + dir.1 * dir.1);
            let (f0, f1) = tri.edge_faces(k);
            let t0 = param(&centers[f0]);
            let (lo, hi) = match f1 {
                Some(f1) => {
                    let t1 = param(&centers[f1]);
                    (t0.min(t1), t0.max(t1))
                }
                None => {
                    let face = tri.triangles()[f0];
                    let left_of_lo_hi = (0..3).any(|m| face[m] == e.lo && face[(m + 1) % 3] == e.hi);
                    if left_of_lo_hi {
                        (f64::NEG_INFINITY, t0)
                    } else {
                        (t0, f64::INFINITY)
                    }
                }
            };
            clip_to_box(&bbox, mid, dir, lo, hi)
        })
        .collect();

    let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); pts.len()];
    for e in tri.edges() {
        adjacency[e.lo].push(e.hi);
        adjacency[e.hi].push(e.lo);
    }
    let cells = adjacency
        .iter()
        .enumerate()
        .map(|(i, nbrs)| {
            let mut poly: Vec<Point2> = bbox.corners().to_vec();
            for &j in nbrs {
                poly = clip_half_plane(&poly, &pts[i], &pts[j]);
            }
            poly
        })
        .collect();

    VoronoiDiagram {
        bbox,
        edges: tri.edges().to_vec(),
        segments,
        cells,
    }
}

/// Clips `origin + t * dir`, `t` in `[lo, hi]`, to the box.
fn clip_to_box(bbox: &BoundingBox, origin: Point2, dir: (f64, f64), mut lo: f64, mut hi: f64) -> Option<Segment> {
    let axes = [
        (origin.x(), dir.0, bbox.min().x(), bbox.max().x()),
        (origin.y(), dir.1, bbox.min().y(), bbox.max().y()),
    ];
    for (o, d, min, max) in axes {
        if d == 0.0 {
            if o < min - BoundingBox::CLIP_TOLERANCE || o > max + BoundingBox::CLIP_TOLERANCE {
                return None;
            }
            continue;
        }
        let (t0, t1) = ((min - o) / d, (max - o) / d);
        lo = lo.max(t0.min(t1));
        hi = hi.min(t0.max(t1));
    }
    if lo >= hi {
        return None;
    }
    let at = |t: f64| bbox.snap(Point2::raw(origin.x() + t * dir.0, origin.y() + t * dir.1));
    let seg = Segment { a: at(lo), b: at(hi) };
    if seg.length() <= BoundingBox::CLIP_TOLERANCE {
        return None;
    }
    Some(seg)
}

/// Sutherland-Hodgman step keeping the part of `poly` closer to `site` than
/// to `other`.
fn clip_half_plane(poly: &[Point2], site: &Point2, other: &Point2) -> Vec<Point2> {
    let (nx, ny) = (other.x() - site.x(), other.y() - site.y());
    let mid = site.midpoint(other);
    let side = |p: &Point2| (p.x() - mid.x()) * nx + (p.y() - mid.y()) * ny;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let (sp, sq) = (side(&p), side(&q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push(Point2::raw(p.x() + t * (q.x() - p.x()), p.y() + t * (q.y() - p.y())));
        }
    }
    out
}
