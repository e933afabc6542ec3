use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::predicates::{in_circumcircle, orient2d, Sign};
use super::{EdgeKey, NodeId, Point2, SensorLayout};
use crate::error::{Error, Result};

/// Distance of the super-triangle vertices from the box center, in multiples
/// of the box extent.
const SUPER_SCALE: f64 = 1.0e4;

/// Delaunay triangulation of a [`SensorLayout`].
///
/// Triangles are stored counter-clockwise. The edge list is sorted by
/// [`EdgeKey`] and each edge records the one or two triangles it borders; for
/// hull edges the single triangle lies to the left of `lo -> hi` or of
/// `hi -> lo`, see [`Triangulation::edge_faces`].
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    layout: SensorLayout,
    triangles: Vec<[NodeId; 3]>,
    edges: Vec<EdgeKey>,
    faces: Vec<(usize, Option<usize>)>,
    hull_len: usize,
}

impl Triangulation {
    pub fn layout(&self) -> &SensorLayout {
        &self.layout
    }

    pub fn triangles(&self) -> &[[NodeId; 3]] {
        &self.triangles
    }

    /// Sorted, deduplicated neighbor pairs.
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn edge_index(&self, a: NodeId, b: NodeId) -> Option<usize> {
        if a == b {
            return None;
        }
        self.edges.binary_search(&EdgeKey::new(a, b)).ok()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.edge_index(a, b).is_some()
    }

    /// Triangles adjacent to edge `index`; the second is `None` on the hull.
    pub fn edge_faces(&self, index: usize) -> (usize, Option<usize>) {
        self.faces[index]
    }

    pub fn is_hull_edge(&self, index: usize) -> bool {
        self.faces[index].1.is_none()
    }

    /// Number of sites on the convex hull boundary, collinear ones included.
    pub fn hull_len(&self) -> usize {
        self.hull_len
    }

    pub fn neighbors(&self, id: NodeId) -> Vec<NodeId> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.lo == id {
                    Some(e.hi)
                } else if e.hi == id {
                    Some(e.lo)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Builds the Delaunay triangulation by incremental Bowyer-Watson insertion in
/// node order, inside a super-triangle that is discarded afterwards.
///
/// Cocircular configurations are resolved deterministically: of the two
/// diagonals of a cocircular quadrilateral, the one whose smaller endpoint id
/// is smaller is kept.
pub fn delaunay(layout: &SensorLayout) -> Result<Triangulation> {
    let n = layout.len();
    if n < 3 {
        return Err(Error::DegenerateInput("fewer than 3 sites"));
    }
    if layout.is_collinear() {
        return Err(Error::DegenerateInput("all sites are collinear"));
    }
    let pts = layout.points();
    let hull = convex_hull(pts);

    let mut triangles = bowyer_watson(layout);
    if !covers_hull(n, &triangles, &hull) {
        log::debug!("super-triangle clipped the hull of {n} sites; using sweep triangulation");
        triangles = sweep_triangulation(pts);
    }
    legalize(pts, &mut triangles);

    let mut map: BTreeMap<EdgeKey, (usize, Option<usize>)> = BTreeMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let key = EdgeKey::new(tri[k], tri[(k + 1) % 3]);
            map.entry(key).and_modify(|f| f.1 = Some(t)).or_insert((t, None));
        }
    }
    let (edges, faces) = map.into_iter().unzip();
    Ok(Triangulation {
        layout: layout.clone(),
        triangles,
        edges,
        faces,
        hull_len: hull.len(),
    })
}

fn bowyer_watson(layout: &SensorLayout) -> Vec<[NodeId; 3]> {
    let n = layout.len();
    let bbox = layout.bbox();
    let cx = 0.5 * (bbox.min().x() + bbox.max().x());
    let cy = 0.5 * (bbox.min().y() + bbox.max().y());
    let r = SUPER_SCALE * bbox.width().max(bbox.height());
    let mut pts: Vec<Point2> = layout.points().to_vec();
    pts.push(Point2::raw(cx - 2.0 * r, cy - r));
    pts.push(Point2::raw(cx + 2.0 * r, cy - r));
    pts.push(Point2::raw(cx, cy + 2.0 * r));

    let mut tris: Vec<[NodeId; 3]> = vec![[n, n + 1, n + 2]];
    let mut bad: Vec<usize> = Vec::new();
    let mut rim: Vec<(NodeId, NodeId)> = Vec::new();
    for (id, p) in layout.points().iter().enumerate() {
        bad.clear();
        for (t, tri) in tris.iter().enumerate() {
            if in_circumcircle(&pts[tri[0]], &pts[tri[1]], &pts[tri[2]], p) == Sign::Positive {
                bad.push(t);
            }
        }
        rim.clear();
        for &t in &bad {
            let tri = tris[t];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let shared = bad.iter().any(|&u| {
                    let o = tris[u];
                    (0..3).any(|m| o[m] == b && o[(m + 1) % 3] == a)
                });
                if !shared {
                    rim.push((a, b));
                }
            }
        }
        // `bad` is ascending; remove from the back so indices stay valid.
        for &t in bad.iter().rev() {
            tris.swap_remove(t);
        }
        for &(a, b) in &rim {
            debug_assert_eq!(orient2d(&pts[a], &pts[b], p), Sign::Positive);
            tris.push([a, b, id]);
        }
    }
    tris.retain(|t| t.iter().all(|&v| v < n));
    tris
}

/// Convex hull in counter-clockwise order, including sites that lie on hull
/// edges. Requires at least 3 non-collinear points.
pub(crate) fn convex_hull(pts: &[Point2]) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a].lex_cmp(&pts[b]));

    let mut strict: Vec<NodeId> = Vec::with_capacity(pts.len());
    for pass in 0..2 {
        let start = strict.len();
        let seq: &mut dyn Iterator<Item = &NodeId> = if pass == 0 {
            &mut order.iter()
        } else {
            &mut order.iter().rev()
        };
        for &i in seq {
            while strict.len() >= start + 2
                && orient2d(&pts[strict[strict.len() - 2]], &pts[strict[strict.len() - 1]], &pts[i]) != Sign::Positive
            {
                strict.pop();
            }
            strict.push(i);
        }
        strict.pop();
    }

    let mut hull = Vec::with_capacity(strict.len());
    let mut on_edge: Vec<NodeId> = Vec::new();
    for k in 0..strict.len() {
        let (a, b) = (strict[k], strict[(k + 1) % strict.len()]);
        hull.push(a);
        on_edge.clear();
        on_edge.extend((0..pts.len()).filter(|&i| {
            i != a && i != b && orient2d(&pts[a], &pts[b], &pts[i]) == Sign::Zero && between(&pts[a], &pts[b], &pts[i])
        }));
        on_edge.sort_by(|&i, &j| pts[a].distance2(&pts[i]).total_cmp(&pts[a].distance2(&pts[j])));
        hull.extend_from_slice(&on_edge);
    }
    hull
}

/// For collinear `a, b, c`: whether `c` lies strictly between `a` and `b`.
fn between(a: &Point2, b: &Point2, c: &Point2) -> bool {
    let in_range = |lo: f64, hi: f64, v: f64| (lo < v && v < hi) || (hi < v && v < lo);
    if a.x() != b.x() {
        in_range(a.x(), b.x(), c.x())
    } else {
        in_range(a.y(), b.y(), c.y())
    }
}

/// Whether `tris` is a triangulation of the hull polygon using every site.
fn covers_hull(n: usize, tris: &[[NodeId; 3]], hull: &[NodeId]) -> bool {
    if tris.len() + 2 + hull.len() != 2 * n {
        return false;
    }
    let mut used = vec![false; n];
    let mut directed: BTreeMap<(NodeId, NodeId), ()> = BTreeMap::new();
    for t in tris {
        for k in 0..3 {
            used[t[k]] = true;
            directed.insert((t[k], t[(k + 1) % 3]), ());
        }
    }
    if used.iter().any(|u| !u) {
        return false;
    }
    let boundary: Vec<(NodeId, NodeId)> = directed
        .keys()
        .filter(|&&(a, b)| !directed.contains_key(&(b, a)))
        .copied()
        .collect();
    boundary.len() == hull.len()
        && (0..hull.len()).all(|k| directed.contains_key(&(hull[k], hull[(k + 1) % hull.len()])))
}

/// Triangulates by sweeping sites in lexicographic order and fanning each new
/// site to the hull edges it sees. Used when Bowyer-Watson with a finite
/// super-triangle loses part of the hull.
fn sweep_triangulation(pts: &[Point2]) -> Vec<[NodeId; 3]> {
    let mut order: Vec<NodeId> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a].lex_cmp(&pts[b]));
    let (p0, p1) = (order[0], order[1]);
    let first_off = (2..order.len())
        .find(|&i| orient2d(&pts[p0], &pts[p1], &pts[order[i]]) != Sign::Zero)
        .expect("layout is not collinear");
    let apex = order[first_off];

    let mut tris = Vec::with_capacity(2 * pts.len());
    let line = &order[..first_off];
    let mut hull: Vec<NodeId>;
    if orient2d(&pts[p0], &pts[p1], &pts[apex]) == Sign::Positive {
        for w in line.windows(2) {
            tris.push([w[0], w[1], apex]);
        }
        hull = line.to_vec();
    } else {
        for w in line.windows(2) {
            tris.push([w[1], w[0], apex]);
        }
        hull = line.iter().rev().copied().collect();
    }
    hull.push(apex);

    let mut visible: Vec<bool> = Vec::new();
    for &q in &order[first_off + 1..] {
        let m = hull.len();
        visible.clear();
        visible.extend((0..m).map(|i| orient2d(&pts[hull[i]], &pts[hull[(i + 1) % m]], &pts[q]) == Sign::Negative));
        let start = (0..m)
            .find(|&i| visible[i] && !visible[(i + m - 1) % m])
            .expect("a site outside the hull sees at least one edge");
        let mut end = start;
        while visible[end % m] {
            let (u, v) = (hull[end % m], hull[(end + 1) % m]);
            tris.push([u, q, v]);
            end += 1;
        }
        let mut next = Vec::with_capacity(m + 1);
        next.push(q);
        let mut k = end % m;
        loop {
            next.push(hull[k]);
            if k == start {
                break;
            }
            k = (k + 1) % m;
        }
        hull = next;
    }
    tris
}

/// Lawson edge flipping until every interior edge is locally Delaunay and
/// every cocircular quadrilateral uses the preferred diagonal.
fn legalize(pts: &[Point2], tris: &mut [[NodeId; 3]]) {
    loop {
        let mut owner: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
        for (t, tri) in tris.iter().enumerate() {
            for k in 0..3 {
                owner.insert((tri[k], tri[(k + 1) % 3]), t);
            }
        }
        let mut touched = vec![false; tris.len()];
        let mut flipped = false;
        for t in 0..tris.len() {
            for k in 0..3 {
                if touched[t] {
                    break;
                }
                let tri = tris[t];
                let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                if a > b {
                    continue;
                }
                let Some(&u) = owner.get(&(b, a)) else {
                    continue;
                };
                if touched[u] {
                    continue;
                }
                let other = tris[u];
                let d = other.iter().copied().find(|&v| v != a && v != b).unwrap();
                let flip = match in_circumcircle(&pts[a], &pts[b], &pts[c], &pts[d]) {
                    Sign::Positive => true,
                    Sign::Zero => c.min(d) < a.min(b),
                    Sign::Negative => false,
                };
                if flip {
                    tris[t] = [a, d, c];
                    tris[u] = [d, b, c];
                    touched[t] = true;
                    touched[u] = true;
                    flipped = true;
                }
            }
        }
        if !flipped {
            break;
        }
    }
}
