//! Local boundary detection and the cost of reporting it.
//!
//! Every sensor sends its reading to each Delaunay neighbor. A neighbor pair
//! whose readings differ by more than the threshold is a boundary pair; the
//! endpoint with the larger reading transmits the pair's Voronoi segment to
//! the remote station. A transmitter batches all of its segments into one
//! remote message.
//!
//! The two baselines have every sensor report (`n` remote messages) or only
//! the sensors whose reading exceeds a sensing threshold (`m` messages).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Readings;
use crate::geometry::{EdgeKey, NodeId, Segment, Triangulation, VoronoiDiagram};

/// Sensing threshold of the second baseline unless configured otherwise.
pub const DEFAULT_SENSE_THRESHOLD: f64 = 0.5;

/// Cost of one remote message (`beta`) and of one neighbor message
/// (`epsilon_unit`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    beta: f64,
    epsilon_unit: f64,
}

impl CostModel {
    pub fn new(beta: f64, epsilon_unit: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter("beta must be positive"));
        }
        if !(epsilon_unit >= 0.0 && epsilon_unit.is_finite()) {
            return Err(Error::InvalidParameter("epsilon_unit must be non-negative"));
        }
        Ok(CostModel { beta, epsilon_unit })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn epsilon_unit(&self) -> f64 {
        self.epsilon_unit
    }
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            beta: 1.0,
            epsilon_unit: 0.0,
        }
    }
}

/// A reported Voronoi segment and the node that sends it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySegment {
    pub pair: EdgeKey,
    pub geometry: Segment,
    pub transmitter: NodeId,
}

/// Outcome of one detection round.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryResult {
    segments: Vec<BoundarySegment>,
    local_messages: usize,
    incident_nodes: Vec<NodeId>,
    transmitters: Vec<NodeId>,
}

impl BoundaryResult {
    /// Boundary segments sorted by pair.
    pub fn segments(&self) -> &[BoundarySegment] {
        &self.segments
    }

    pub fn local_messages(&self) -> usize {
        self.local_messages
    }

    /// One message per distinct transmitter.
    pub fn remote_messages(&self) -> usize {
        self.transmitters.len()
    }

    /// Sorted endpoints of all boundary pairs.
    pub fn incident_nodes(&self) -> &[NodeId] {
        &self.incident_nodes
    }

    /// Sorted distinct transmitters.
    pub fn transmitters(&self) -> &[NodeId] {
        &self.transmitters
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Runs the threshold rule on every Delaunay edge.
///
/// A pair `(i, j)` is reported when `|psi_i - psi_j| > theta` and the pair has
/// a Voronoi segment inside the bounding box. The larger reading transmits,
/// ties going to the smaller id.
pub fn detect_boundary(
    tri: &Triangulation,
    vor: &VoronoiDiagram,
    readings: &Readings,
    theta: f64,
) -> Result<BoundaryResult> {
    let n = tri.layout().len();
    if readings.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: readings.len(),
        });
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter("theta must lie in [0, 1]"));
    }
    if vor.edges() != tri.edges() {
        return Err(Error::InvalidParameter(
            "Voronoi diagram does not belong to this triangulation",
        ));
    }
    let psi = readings.values();
    let mut segments = Vec::new();
    let mut incident = vec![false; n];
    let mut sends = vec![false; n];
    for (k, pair) in tri.edges().iter().enumerate() {
        let (a, b) = (psi[pair.lo], psi[pair.hi]);
        if (a - b).abs() <= theta {
            continue;
        }
        let Some(geometry) = vor.segment_at(k) else {
            continue;
        };
        let transmitter = if b > a { pair.hi } else { pair.lo };
        incident[pair.lo] = true;
        incident[pair.hi] = true;
        sends[transmitter] = true;
        segments.push(BoundarySegment {
            pair: *pair,
            geometry: *geometry,
            transmitter,
        });
    }
    let collect = |mask: Vec<bool>| mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
    Ok(BoundaryResult {
        segments,
        local_messages: 2 * tri.edges().len(),
        incident_nodes: collect(incident),
        transmitters: collect(sends),
    })
}

/// What the station assembles: the reported segments in pair order.
pub fn approximate_boundary_polyline(result: &BoundaryResult) -> Vec<Segment> {
    result.segments.iter().map(|s| s.geometry).collect()
}

/// Every sensor reports: `n * beta`.
pub fn cost_naive_full(n: usize, cost: &CostModel) -> f64 {
    n as f64 * cost.beta
}

/// Sensors reading strictly above `sense_threshold` report. Returns the
/// number of such sensors and their cost.
pub fn cost_naive_sensing(readings: &Readings, sense_threshold: f64, cost: &CostModel) -> (usize, f64) {
    let m = readings.values().iter().filter(|&&v| v > sense_threshold).count();
    (m, m as f64 * cost.beta)
}

/// Remote messages at `beta` plus all neighbor messages at `epsilon_unit`.
pub fn cost_proposed(result: &BoundaryResult, cost: &CostModel) -> f64 {
    result.remote_messages() as f64 * cost.beta + result.local_messages as f64 * cost.epsilon_unit
}

/// The three algorithms' costs for one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostComparison {
    pub naive_full: f64,
    pub sensing_nodes: usize,
    pub naive_sensing: f64,
    pub proposed: f64,
}

pub fn compare_costs(
    result: &BoundaryResult,
    readings: &Readings,
    sense_threshold: f64,
    cost: &CostModel,
) -> CostComparison {
    let (sensing_nodes, naive_sensing) = cost_naive_sensing(readings, sense_threshold, cost);
    CostComparison {
        naive_full: cost_naive_full(readings.len(), cost),
        sensing_nodes,
        naive_sensing,
        proposed: cost_proposed(result, cost),
    }
}
