//! Boundary approximation for locally linked sensor networks.
//!
//! Sensors are connected along the edges of their Delaunay triangulation.
//! Neighbors whose readings differ by more than a threshold report the
//! Voronoi segment between them to a remote station, and the union of those
//! segments approximates the boundary of the sensed phenomenon. This crate
//! holds the geometry, the phenomenon fields, the detection protocol with its
//! two naive baselines, the Monte Carlo kernel and SVG scene generation. It
//! is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod error;
pub mod field;
pub mod geometry;
pub mod montecarlo;
pub mod protocol;
pub mod render;

pub use error::{Error, Result};
pub use geometry::{
    delaunay, voronoi, BoundingBox, EdgeKey, NodeId, Point2, Segment, SensorLayout, Triangulation, VoronoiDiagram,
};
