//! Monte Carlo sweep over network sizes and random activation patterns.
//!
//! For every network size, random layouts are triangulated once; for every
//! activation size `k = 1..=n` a number of uniform random `k`-subsets are
//! activated and the nodes reporting to the station are counted.
//!
//! All randomness comes from counter-based substreams: each layout draw and
//! each activation pattern gets its own generator derived from the root seed
//! and the trial coordinates. Trials can therefore be evaluated in any order,
//! or in parallel, and merged by index.

use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Readings;
use crate::geometry::{delaunay, voronoi, BoundingBox, Point2, SensorLayout};
use crate::protocol::{cost_naive_sensing, detect_boundary, CostModel, DEFAULT_SENSE_THRESHOLD};

/// Network sizes of the reference experiment.
pub const REFERENCE_NODE_COUNTS: [usize; 9] = [3, 4, 5, 10, 25, 100, 200, 500, 1000];

const TAG_LAYOUT: u64 = 0x4c41_594f_5554;
const TAG_PATTERN: u64 = 0x5041_5454_4552;
/// Upper bound on consecutive degenerate layout draws before giving up.
const MAX_REDRAWS: u32 = 1000;

/// Which nodes count as reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportingMetric {
    /// Only the nodes that send segments.
    Transmitters,
    /// Both endpoints of every boundary pair.
    IncidentNodes,
}

/// Lighter sampling for large networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedSampling {
    /// Applies to networks with more nodes than this.
    pub above_n: usize,
    pub layouts: usize,
    pub patterns: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub node_counts: Vec<usize>,
    pub layouts_per_count: usize,
    pub patterns_per_activation_size: usize,
    pub theta: f64,
    pub seed: u64,
    pub bbox: BoundingBox,
    pub reporting_metric: ReportingMetric,
    pub reduced: Option<ReducedSampling>,
}

impl SweepConfig {
    /// The reference sweep: 100 layouts and 100 patterns per activation
    /// size, reduced to 20 x 20 above 100 nodes.
    pub fn reference(seed: u64) -> Self {
        SweepConfig {
            node_counts: REFERENCE_NODE_COUNTS.to_vec(),
            layouts_per_count: 100,
            patterns_per_activation_size: 100,
            theta: 0.5,
            seed,
            bbox: BoundingBox::unit(),
            reporting_metric: ReportingMetric::IncidentNodes,
            reduced: Some(ReducedSampling {
                above_n: 100,
                layouts: 20,
                patterns: 20,
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_counts.is_empty() {
            return Err(Error::InvalidParameter("node_counts must not be empty"));
        }
        if self.node_counts.iter().any(|&n| n < 3) {
            return Err(Error::InvalidParameter("every node count must be at least 3"));
        }
        if self.layouts_per_count == 0 || self.patterns_per_activation_size == 0 {
            return Err(Error::InvalidParameter("sampling counts must be at least 1"));
        }
        if let Some(r) = self.reduced {
            if r.layouts == 0 || r.patterns == 0 {
                return Err(Error::InvalidParameter("sampling counts must be at least 1"));
            }
        }
        if !(0.0..1.0).contains(&self.theta) {
            return Err(Error::InvalidParameter("theta must lie in [0, 1)"));
        }
        Ok(())
    }

    /// `(layouts, patterns)` used for networks of `n` nodes.
    pub fn sampling_for(&self, n: usize) -> (usize, usize) {
        match self.reduced {
            Some(r) if n > r.above_n => (r.layouts, r.patterns),
            _ => (self.layouts_per_count, self.patterns_per_activation_size),
        }
    }
}

/// One activation pattern on one layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub n: usize,
    pub layout_index: usize,
    pub activation_size: usize,
    pub pattern_index: usize,
    pub observing_fraction: f64,
    pub reporting_fraction: f64,
    pub reporters_naive_sensing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeCountSummary {
    pub n: usize,
    pub trials: usize,
    pub max_reporting: f64,
    pub mean_reporting: f64,
    /// `(observing_fraction, reporting_fraction)` per trial.
    pub scatter: Vec<(f64, f64)>,
}

/// Per network size statistics, ascending in `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub rows: Vec<NodeCountSummary>,
}

impl SweepSummary {
    pub fn row(&self, n: usize) -> Option<&NodeCountSummary> {
        self.rows.iter().find(|r| r.n == n)
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for the trial at the given coordinates.
pub fn substream(seed: u64, coords: &[u64]) -> ChaCha8Rng {
    let mut h = mix(seed ^ 0x9e37_79b9_7f4a_7c15);
    for &c in coords {
        h = mix(h.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ c);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// A drawn layout and how many degenerate draws preceded it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedLayout {
    pub layout: SensorLayout,
    pub redraws: u32,
}

/// Uniform random layout of `n` sensors, number `index` of its size.
/// Collinear or coincident draws are replaced by the next substream.
pub fn random_layout(seed: u64, n: usize, index: usize, bbox: &BoundingBox) -> Result<GeneratedLayout> {
    if n < 3 {
        return Err(Error::DegenerateInput("fewer than 3 sites"));
    }
    let (min, w, h) = (bbox.min(), bbox.width(), bbox.height());
    for attempt in 0..=MAX_REDRAWS {
        let mut rng = substream(seed, &[TAG_LAYOUT, n as u64, index as u64, attempt as u64]);
        let points = (0..n)
            .map(|_| {
                let x = min.x() + w * rng.gen::<f64>();
                let y = min.y() + h * rng.gen::<f64>();
                Point2::new(x, y)
            })
            .collect::<Result<Vec<_>>>()?;
        match SensorLayout::new(points, *bbox) {
            Ok(layout) if !layout.is_collinear() => {
                return Ok(GeneratedLayout {
                    layout,
                    redraws: attempt,
                });
            }
            Ok(_) | Err(Error::DuplicateSite { .. }) => {
                log::warn!("degenerate layout (n = {n}, index = {index}, attempt = {attempt}); redrawing");
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateInput("no valid layout within the redraw limit"))
}

/// Supplies layouts to a sweep.
pub trait LayoutSource {
    fn layout(&self, n: usize, index: usize) -> Result<GeneratedLayout>;
}

/// Uniform random layouts in the configured box, from the configured seed.
#[derive(Debug, Clone, Copy)]
pub struct SeededLayouts {
    pub seed: u64,
    pub bbox: BoundingBox,
}

impl SeededLayouts {
    pub fn for_config(config: &SweepConfig) -> Self {
        SeededLayouts {
            seed: config.seed,
            bbox: config.bbox,
        }
    }
}

impl LayoutSource for SeededLayouts {
    fn layout(&self, n: usize, index: usize) -> Result<GeneratedLayout> {
        random_layout(self.seed, n, index, &self.bbox)
    }
}

/// Records of all trials on one layout, in `(activation_size, pattern)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutTrials {
    pub records: Vec<TrialRecord>,
    pub redraws: u32,
}

/// Evaluates every activation pattern on layout `index` of size `n`.
pub fn run_layout(
    config: &SweepConfig,
    source: &dyn LayoutSource,
    n: usize,
    layout_index: usize,
) -> Result<LayoutTrials> {
    let generated = source.layout(n, layout_index)?;
    let layout = generated.layout;
    if layout.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: layout.len(),
        });
    }
    let tri = delaunay(&layout)?;
    let vor = voronoi(&tri);
    let cost = CostModel::default();
    let (_, patterns) = config.sampling_for(n);
    let nf = n as f64;
    let mut records = Vec::with_capacity(n * patterns);
    for k in 1..=n {
        for pattern in 0..patterns {
            let mut rng = substream(
                config.seed,
                &[TAG_PATTERN, n as u64, layout_index as u64, k as u64, pattern as u64],
            );
            let active = index::sample(&mut rng, n, k).into_vec();
            let readings = Readings::binary(n, &active)?;
            let result = detect_boundary(&tri, &vor, &readings, config.theta)?;
            let reporters = match config.reporting_metric {
                ReportingMetric::Transmitters => result.transmitters().len(),
                ReportingMetric::IncidentNodes => result.incident_nodes().len(),
            };
            let (m, _) = cost_naive_sensing(&readings, DEFAULT_SENSE_THRESHOLD, &cost);
            records.push(TrialRecord {
                n,
                layout_index,
                activation_size: k,
                pattern_index: pattern,
                observing_fraction: k as f64 / nf,
                reporting_fraction: reporters as f64 / nf,
                reporters_naive_sensing: m as f64 / nf,
            });
        }
    }
    Ok(LayoutTrials {
        records,
        redraws: generated.redraws,
    })
}

/// Records and summary of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<TrialRecord>,
    pub summary: SweepSummary,
    pub redraws: u32,
}

/// Runs the full sweep sequentially.
pub fn run_sweep(config: &SweepConfig, source: &dyn LayoutSource) -> Result<SweepOutput> {
    config.validate()?;
    let mut records = Vec::new();
    let mut redraws = 0;
    for &n in &config.node_counts {
        let (layouts, _) = config.sampling_for(n);
        for layout_index in 0..layouts {
            let trials = run_layout(config, source, n, layout_index)?;
            redraws += trials.redraws;
            records.extend(trials.records);
        }
    }
    let summary = summarize(&records)?;
    Ok(SweepOutput {
        records,
        summary,
        redraws,
    })
}

/// Per network size maximum and mean of the reporting fraction.
pub fn summarize(records: &[TrialRecord]) -> Result<SweepSummary> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let rows = sizes
        .into_iter()
        .map(|n| {
            let scatter: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| r.n == n)
                .map(|r| (r.observing_fraction, r.reporting_fraction))
                .collect();
            let max_reporting = scatter.iter().map(|s| s.1).fold(0.0, f64::max);
            let mean_reporting = scatter.iter().map(|s| s.1).sum::<f64>() / scatter.len() as f64;
            NodeCountSummary {
                n,
                trials: scatter.len(),
                max_reporting,
                mean_reporting,
                scatter,
            }
        })
        .collect();
    Ok(SweepSummary { rows })
}
