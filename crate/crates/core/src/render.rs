//! SVG output: layout scenes and Monte Carlo scatter plots.
//!
//! Output is byte-for-byte reproducible: elements follow layer order and every
//! number is written with six decimals.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::field::PhenomenonField;
use crate::geometry::{BoundingBox, Point2, Segment, Triangulation, VoronoiDiagram};
use crate::montecarlo::TrialRecord;
use crate::protocol::{approximate_boundary_polyline, BoundaryResult};

const CIRCLE_STEPS: usize = 256;

const SITE_FILL: &str = "#000000";
const DELAUNAY_STROKE: &str = "#9a9a9a";
const VORONOI_STROKE: &str = "#4d4d4d";
const SHADING_FILL: &str = "#d0d0d0";
const TRUE_STROKE: &str = "#000000";
const APPROX_STROKE: &str = "#000000";
const APPROX_DASH: &str = "6 4";
const MARKER_FILL: &str = "#808080";

/// One drawable layer. Geometric phenomena are drawn from their field
/// description; activation sets have no spatial extent and draw nothing.
#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    Sites(Vec<Point2>),
    DelaunayEdges(Vec<Segment>),
    VoronoiSegments(Vec<Segment>),
    FieldShading(PhenomenonField),
    TrueBoundary(PhenomenonField),
    ApproxBoundary(Vec<Segment>),
}

impl Layer {
    pub fn sites(tri: &Triangulation) -> Layer {
        Layer::Sites(tri.layout().points().to_vec())
    }

    pub fn delaunay_edges(tri: &Triangulation) -> Layer {
        let pts = tri.layout().points();
        Layer::DelaunayEdges(
            tri.edges()
                .iter()
                .map(|e| Segment {
                    a: pts[e.lo],
                    b: pts[e.hi],
                })
                .collect(),
        )
    }

    pub fn voronoi_segments(vor: &VoronoiDiagram) -> Layer {
        Layer::VoronoiSegments(vor.segments().map(|(_, s)| *s).collect())
    }

    pub fn approx_boundary(result: &BoundaryResult) -> Layer {
        Layer::ApproxBoundary(approximate_boundary_polyline(result))
    }
}

/// A set of layers drawn over a bounding box, bottom layer first.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub bbox: BoundingBox,
    pub layers: Vec<Layer>,
}

impl Scene {
    pub fn new(bbox: BoundingBox) -> Self {
        Scene {
            bbox,
            layers: Vec::new(),
        }
    }

    pub fn with(mut self, layer: Layer) -> Self {
        self.layers.push(layer);
        self
    }

    /// Phenomenon, Voronoi diagram, true boundary, the reported approximation
    /// and the sensors, in that order.
    pub fn boundary_figure(
        tri: &Triangulation,
        vor: &VoronoiDiagram,
        field: &PhenomenonField,
        result: &BoundaryResult,
    ) -> Self {
        Scene::new(*tri.layout().bbox())
            .with(Layer::FieldShading(field.clone()))
            .with(Layer::voronoi_segments(vor))
            .with(Layer::TrueBoundary(field.clone()))
            .with(Layer::approx_boundary(result))
            .with(Layer::sites(tri))
    }
}

fn num(v: f64) -> f64 {
    // Avoid printing "-0.000000".
    if v.abs() < 5e-7 {
        0.0
    } else {
        v
    }
}

struct Viewport {
    bbox: BoundingBox,
    scale: f64,
    width: f64,
    height: f64,
}

impl Viewport {
    fn new(bbox: BoundingBox, width_px: u32) -> Self {
        let width = f64::from(width_px.max(1));
        let scale = width / bbox.width();
        Viewport {
            bbox,
            scale,
            width,
            height: bbox.height() * scale,
        }
    }

    fn map(&self, p: &Point2) -> (f64, f64) {
        let x = (p.x() - self.bbox.min().x()) * self.scale;
        let y = (self.bbox.max().y() - p.y()) * self.scale;
        (num(x.clamp(0.0, self.width)), num(y.clamp(0.0, self.height)))
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.6}" height="{h:.6}" viewBox="0 0 {w:.6} {h:.6}">"#,
        w = width,
        h = height
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{width:.6}" height="{height:.6}" fill="#ffffff"/>"##
    );
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64, dash: Option<&str>) {
    let _ = write!(
        out,
        r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{stroke}" stroke-width="{width:.6}""#,
        a.0, a.1, b.0, b.1
    );
    if let Some(d) = dash {
        let _ = write!(out, r#" stroke-dasharray="{d}""#);
    }
    let _ = writeln!(out, "/>");
}

/// Liang-Barsky clip of a segment to the box.
fn clip_segment(bbox: &BoundingBox, a: Point2, b: Point2) -> Option<Segment> {
    let (dx, dy) = (b.x() - a.x(), b.y() - a.y());
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let checks = [
        (-dx, a.x() - bbox.min().x()),
        (dx, bbox.max().x() - a.x()),
        (-dy, a.y() - bbox.min().y()),
        (dy, bbox.max().y() - a.y()),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
        }
    }
    if lo > hi {
        return None;
    }
    let at = |t: f64| Point2::raw(a.x() + t * dx, a.y() + t * dy);
    Some(Segment { a: at(lo), b: at(hi) })
}

/// Sutherland-Hodgman clip of a polygon to `normal . p >= offset`.
fn clip_polygon(poly: &[Point2], normal: (f64, f64), offset: f64) -> Vec<Point2> {
    let side = |p: &Point2| normal.0 * p.x() + normal.1 * p.y() - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let (sp, sq) = (side(&p), side(&q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
            let t = sp / (sp - sq);
            out.push(Point2::raw(p.x() + t * (q.x() - p.x()), p.y() + t * (q.y() - p.y())));
        }
    }
    out
}

fn circle_points(center: &Point2, radius: f64) -> Vec<Point2> {
    (0..CIRCLE_STEPS)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / CIRCLE_STEPS as f64;
            Point2::raw(center.x() + radius * libm::cos(a), center.y() + radius * libm::sin(a))
        })
        .collect()
}

/// Region of the box covered by a geometric phenomenon.
fn shading_polygon(bbox: &BoundingBox, field: &PhenomenonField) -> Vec<Point2> {
    match field {
        PhenomenonField::HalfPlane { normal, offset, .. } => clip_polygon(&bbox.corners(), *normal, *offset),
        PhenomenonField::Disk { center, radius, .. } => {
            // Clip the disk polygon by the four box sides.
            let mut poly = circle_points(center, *radius);
            let (min, max) = (bbox.min(), bbox.max());
            for (normal, offset) in [
                ((1.0, 0.0), min.x()),
                ((-1.0, 0.0), -max.x()),
                ((0.0, 1.0), min.y()),
                ((0.0, -1.0), -max.y()),
            ] {
                poly = clip_polygon(&poly, normal, offset);
            }
            poly
        }
        PhenomenonField::ScaledGray { base, .. } => shading_polygon(bbox, base),
        PhenomenonField::BinaryActivation { .. } => Vec::new(),
    }
}

/// Pieces of the phenomenon's outline inside the box.
fn outline(bbox: &BoundingBox, field: &PhenomenonField) -> Vec<Segment> {
    match field {
        PhenomenonField::HalfPlane { normal, offset, .. } => {
            // Line through the foot point, long enough to cross the box.
            let foot = Point2::raw(normal.0 * offset, normal.1 * offset);
            let c = bbox.min().midpoint(&bbox.max());
            let reach = foot.distance(&c) + bbox.width() + bbox.height();
            let dir = (-normal.1, normal.0);
            let a = Point2::raw(foot.x() - reach * dir.0, foot.y() - reach * dir.1);
            let b = Point2::raw(foot.x() + reach * dir.0, foot.y() + reach * dir.1);
            clip_segment(bbox, a, b).into_iter().collect()
        }
        PhenomenonField::Disk { center, radius, .. } => {
            let pts = circle_points(center, *radius);
            (0..pts.len())
                .filter_map(|k| clip_segment(bbox, pts[k], pts[(k + 1) % pts.len()]))
                .collect()
        }
        PhenomenonField::ScaledGray { base, .. } => outline(bbox, base),
        PhenomenonField::BinaryActivation { .. } => Vec::new(),
    }
}

fn path(out: &mut String, view: &Viewport, segments: &[Segment], stroke: &str, width: f64) {
    if segments.is_empty() {
        return;
    }
    let mut d = String::new();
    for s in segments {
        let (a, b) = (view.map(&s.a), view.map(&s.b));
        let _ = write!(d, "M{:.6} {:.6}L{:.6} {:.6}", a.0, a.1, b.0, b.1);
    }
    let _ = writeln!(
        out,
        r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width:.6}"/>"#
    );
}

/// Renders a scene as a standalone SVG 1.1 document, `width_px` wide, with
/// the box mapped onto the viewport at its own aspect ratio.
pub fn scene_to_svg(scene: &Scene, width_px: u32) -> String {
    let view = Viewport::new(scene.bbox, width_px);
    let mut out = String::new();
    header(&mut out, view.width, view.height);
    for layer in &scene.layers {
        match layer {
            Layer::Sites(points) => {
                let _ = writeln!(out, r#"<g class="sites" fill="{SITE_FILL}">"#);
                for p in points {
                    let (x, y) = view.map(p);
                    let _ = writeln!(out, r#"<circle cx="{x:.6}" cy="{y:.6}" r="2.000000"/>"#);
                }
                let _ = writeln!(out, "</g>");
            }
            Layer::DelaunayEdges(segments) | Layer::VoronoiSegments(segments) | Layer::ApproxBoundary(segments) => {
                let (class, stroke, width, dash) = match layer {
                    Layer::DelaunayEdges(_) => ("delaunay", DELAUNAY_STROKE, 0.75, None),
                    Layer::VoronoiSegments(_) => ("voronoi", VORONOI_STROKE, 1.0, None),
                    _ => ("approx-boundary", APPROX_STROKE, 2.0, Some(APPROX_DASH)),
                };
                let _ = writeln!(out, r#"<g class="{class}">"#);
                for s in segments {
                    if let Some(s) = clip_segment(&scene.bbox, s.a, s.b) {
                        line(&mut out, view.map(&s.a), view.map(&s.b), stroke, width, dash);
                    }
                }
                let _ = writeln!(out, "</g>");
            }
            Layer::FieldShading(field) => {
                let poly = shading_polygon(&scene.bbox, field);
                if poly.len() >= 3 {
                    let mut pts = String::new();
                    for (k, p) in poly.iter().enumerate() {
                        let (x, y) = view.map(p);
                        let sep = if k == 0 { "" } else { " " };
                        let _ = write!(pts, "{sep}{x:.6},{y:.6}");
                    }
                    let _ = writeln!(
                        out,
                        r#"<polygon class="phenomenon" points="{pts}" fill="{SHADING_FILL}"/>"#
                    );
                }
            }
            Layer::TrueBoundary(field) => {
                path(&mut out, &view, &outline(&scene.bbox, field), TRUE_STROKE, 1.5);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

const MARGIN_LEFT: f64 = 50.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;

/// Scatter of observing vs. reporting percentage for networks of `n_filter`
/// nodes, with the two baselines as reference lines: everyone reports (the
/// horizontal line at 100) and only observers report (the diagonal).
///
/// Markers are drawn in data coordinates (percent) inside a transformed
/// group, so `cx`/`cy` are the plotted percentages.
pub fn scatter_to_svg(records: &[TrialRecord], n_filter: usize, width_px: u32) -> Result<String> {
    let selected: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n_filter).collect();
    if selected.is_empty() {
        return Err(Error::EmptyAfterFilter { n: n_filter });
    }
    let width = f64::from(width_px).max(MARGIN_LEFT + MARGIN_RIGHT + 100.0);
    let plot = width - MARGIN_LEFT - MARGIN_RIGHT;
    let height = plot + MARGIN_TOP + MARGIN_BOTTOM;
    let s = plot / 100.0;
    let to_px = |x: f64, y: f64| (num(MARGIN_LEFT + x * s), num(MARGIN_TOP + (100.0 - y) * s));

    let mut out = String::new();
    header(&mut out, width, height);
    // Axes and ticks.
    let _ = writeln!(out, r#"<g class="axes" font-family="sans-serif" font-size="10">"#);
    line(&mut out, to_px(0.0, 0.0), to_px(100.0, 0.0), "#000000", 1.0, None);
    line(&mut out, to_px(0.0, 0.0), to_px(0.0, 100.0), "#000000", 1.0, None);
    for tick in (0..=100).step_by(20) {
        let t = tick as f64;
        let (x, y) = to_px(t, 0.0);
        let _ = writeln!(
            out,
            r#"<text x="{x:.6}" y="{:.6}" text-anchor="middle">{tick}</text>"#,
            y + 14.0
        );
        let (x, y) = to_px(0.0, t);
        let _ = writeln!(
            out,
            r#"<text x="{:.6}" y="{:.6}" text-anchor="end">{tick}</text>"#,
            x - 4.0,
            y + 3.0
        );
    }
    let (x, y) = to_px(50.0, 0.0);
    let _ = writeln!(
        out,
        r#"<text x="{x:.6}" y="{:.6}" text-anchor="middle">observing (%)</text>"#,
        y + 32.0
    );
    let (x, y) = to_px(0.0, 50.0);
    let _ = writeln!(
        out,
        r#"<text x="{:.6}" y="{y:.6}" text-anchor="middle" transform="rotate(-90 {:.6} {y:.6})">reporting (%), n = {n_filter}</text>"#,
        x - 34.0,
        x - 34.0
    );
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g class="baselines">"#);
    line(&mut out, to_px(0.0, 100.0), to_px(100.0, 100.0), "#000000", 1.5, None);
    line(&mut out, to_px(0.0, 0.0), to_px(100.0, 100.0), "#000000", 1.5, None);
    let _ = writeln!(out, "</g>");

    let max = selected.iter().map(|r| r.reporting_fraction).fold(0.0, f64::max) * 100.0;
    let _ = writeln!(out, r#"<g class="max-reporting">"#);
    line(
        &mut out,
        to_px(0.0, max),
        to_px(100.0, max),
        "#404040",
        0.75,
        Some("2 3"),
    );
    let _ = writeln!(out, "</g>");

    let (ox, oy) = to_px(0.0, 0.0);
    let _ = writeln!(
        out,
        r#"<g class="trials" fill="{MARKER_FILL}" fill-opacity="0.35" transform="translate({ox:.6} {oy:.6}) scale({s:.6} {:.6})">"#,
        -s
    );
    let r = 1.5 / s;
    for rec in selected {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{r:.6}"/>"#,
            num(rec.observing_fraction * 100.0),
            num(rec.reporting_fraction * 100.0)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}
