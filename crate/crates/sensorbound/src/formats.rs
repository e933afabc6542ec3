//! JSON and CSV file formats.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sensorbound_core::field::{PhenomenonField, DEFAULT_INSIDE, DEFAULT_OUTSIDE};
use sensorbound_core::montecarlo::{
    ReducedSampling, ReportingMetric, SweepConfig, SweepSummary, TrialRecord, REFERENCE_NODE_COUNTS,
};
use sensorbound_core::protocol::{BoundaryResult, CostComparison, CostModel, DEFAULT_SENSE_THRESHOLD};
use sensorbound_core::{BoundingBox, Point2, SensorLayout, Triangulation, VoronoiDiagram};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{file}: {path}: {message}")]
    Schema {
        file: String,
        path: String,
        message: String,
    },
    #[error("{file}: {message}")]
    Invalid { file: String, message: String },
    #[error("{file}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}")]
    Csv {
        file: String,
        #[source]
        source: csv::Error,
    },
}

impl FormatError {
    pub fn invalid(file: &Path, message: impl ToString) -> Self {
        FormatError::Invalid {
            file: file.display().to_string(),
            message: message.to_string(),
        }
    }

    fn io(file: &Path, source: std::io::Error) -> Self {
        FormatError::Io {
            file: file.display().to_string(),
            source,
        }
    }

    /// Whether the input itself is at fault, as opposed to the environment.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            FormatError::Schema { .. } | FormatError::Invalid { .. } | FormatError::Csv { .. }
        )
    }
}

/// Parses JSON, reporting the field path of the first schema violation.
pub fn parse_json<T: DeserializeOwned>(text: &str, file: &Path) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| FormatError::Schema {
        file: file.display().to_string(),
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(file: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(file).map_err(|e| FormatError::io(file, e))?;
    parse_json(&text, file)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Writes every file to a temporary sibling first and renames them into
/// place only once all temporaries are complete.
pub fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<(), FormatError> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir).map_err(|e| FormatError::io(&dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| FormatError::io(path, e))?;
        tmp.write_all(bytes).map_err(|e| FormatError::io(path, e))?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| FormatError::io(path, e.error))?;
    }
    Ok(())
}

/// `{ "bbox": [minx, miny, maxx, maxy], "points": [[x, y], ...] }`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    pub bbox: [f64; 4],
    pub points: Vec<[f64; 2]>,
}

impl LayoutFile {
    pub fn from_layout(layout: &SensorLayout) -> Self {
        LayoutFile {
            bbox: bbox_array(layout.bbox()),
            points: layout.points().iter().map(|p| [p.x(), p.y()]).collect(),
        }
    }

    pub fn to_layout(&self) -> sensorbound_core::Result<SensorLayout> {
        let bbox = parse_bbox(self.bbox)?;
        let points = self
            .points
            .iter()
            .map(|&[x, y]| Point2::new(x, y))
            .collect::<sensorbound_core::Result<Vec<_>>>()?;
        SensorLayout::new(points, bbox)
    }
}

pub fn bbox_array(b: &BoundingBox) -> [f64; 4] {
    [b.min().x(), b.min().y(), b.max().x(), b.max().y()]
}

pub fn parse_bbox(b: [f64; 4]) -> sensorbound_core::Result<BoundingBox> {
    BoundingBox::from_coords(b[0], b[1], b[2], b[3])
}

fn pair_key(lo: usize, hi: usize) -> String {
    format!("{lo}-{hi}")
}

/// `{ "triangles": [[i, j, k], ...], "segments": { "i-j": [[x1, y1], [x2, y2]] } }`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangulationExport {
    pub triangles: Vec<[usize; 3]>,
    pub segments: BTreeMap<String, [[f64; 2]; 2]>,
}

impl TriangulationExport {
    pub fn new(tri: &Triangulation, vor: &VoronoiDiagram) -> Self {
        TriangulationExport {
            triangles: tri.triangles().to_vec(),
            segments: vor
                .segments()
                .map(|(k, s)| (pair_key(k.lo, k.hi), [[s.a.x(), s.a.y()], [s.b.x(), s.b.y()]]))
                .collect(),
        }
    }
}

fn default_inside() -> f64 {
    DEFAULT_INSIDE
}

fn default_outside() -> f64 {
    DEFAULT_OUTSIDE
}

/// Phenomenon description, tagged by `"type"`. Half-plane normals need not
/// be unit length; `normal · p >= offset` is the inside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
#[serde(try_from = "serde_json::Value")]
pub enum FieldSpec {
    Halfplane {
        normal: [f64; 2],
        offset: f64,
        #[serde(default = "default_inside")]
        inside: f64,
        #[serde(default = "default_outside")]
        outside: f64,
    },
    Disk {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "default_inside")]
        inside: f64,
        #[serde(default = "default_outside")]
        outside: f64,
    },
    Scaledgray {
        base: Box<FieldSpec>,
        brightness: f64,
    },
    Activation {
        active: Vec<usize>,
    },
}

/// Deserializes `value`, prefixing errors with the path inside it. Internally
/// tagged and untagged enums buffer their input, which would otherwise drop
/// the location of a nested error.
fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, String> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.into_inner().to_string()
        } else {
            format!("{path}: {}", e.into_inner())
        }
    })
}

mod tagged {
    use super::*;

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Halfplane {
        pub normal: [f64; 2],
        pub offset: f64,
        #[serde(default = "default_inside")]
        pub inside: f64,
        #[serde(default = "default_outside")]
        pub outside: f64,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Disk {
        pub center: [f64; 2],
        pub radius: f64,
        #[serde(default = "default_inside")]
        pub inside: f64,
        #[serde(default = "default_outside")]
        pub outside: f64,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Scaledgray {
        pub base: Box<FieldSpec>,
        pub brightness: f64,
    }

    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Activation {
        pub active: Vec<usize>,
    }
}

impl TryFrom<serde_json::Value> for FieldSpec {
    type Error = String;

    fn try_from(value: serde_json::Value) -> Result<Self, String> {
        let serde_json::Value::Object(mut map) = value else {
            return Err("expected a field object".into());
        };
        let tag = match map.remove("type") {
            Some(serde_json::Value::String(t)) => t,
            Some(_) => return Err("type: expected a string".into()),
            None => return Err("missing field `type`".into()),
        };
        let body = serde_json::Value::Object(map);
        Ok(match tag.as_str() {
            "halfplane" => {
                let f: tagged::Halfplane = from_value(body)?;
                FieldSpec::Halfplane {
                    normal: f.normal,
                    offset: f.offset,
                    inside: f.inside,
                    outside: f.outside,
                }
            }
            "disk" => {
                let f: tagged::Disk = from_value(body)?;
                FieldSpec::Disk {
                    center: f.center,
                    radius: f.radius,
                    inside: f.inside,
                    outside: f.outside,
                }
            }
            "scaledgray" => {
                let f: tagged::Scaledgray = from_value(body)?;
                FieldSpec::Scaledgray {
                    base: f.base,
                    brightness: f.brightness,
                }
            }
            "activation" => {
                let f: tagged::Activation = from_value(body)?;
                FieldSpec::Activation { active: f.active }
            }
            other => {
                return Err(format!(
                    "type: unknown variant `{other}`, expected one of `halfplane`, `disk`, `scaledgray`, `activation`"
                ))
            }
        })
    }
}

impl FieldSpec {
    pub fn to_field(&self) -> sensorbound_core::Result<PhenomenonField> {
        let field = match self {
            FieldSpec::Halfplane {
                normal,
                offset,
                inside,
                outside,
            } => {
                let len = normal[0].hypot(normal[1]);
                if !(len > 0.0 && len.is_finite()) {
                    return Err(sensorbound_core::Error::InvalidParameter(
                        "half-plane normal must be non-zero",
                    ));
                }
                PhenomenonField::HalfPlane {
                    normal: (normal[0] / len, normal[1] / len),
                    offset: offset / len,
                    inside: *inside,
                    outside: *outside,
                }
            }
            FieldSpec::Disk {
                center,
                radius,
                inside,
                outside,
            } => PhenomenonField::Disk {
                center: Point2::new(center[0], center[1])?,
                radius: *radius,
                inside: *inside,
                outside: *outside,
            },
            FieldSpec::Scaledgray { base, brightness } => PhenomenonField::ScaledGray {
                base: Box::new(base.to_field()?),
                brightness: *brightness,
            },
            FieldSpec::Activation { active } => PhenomenonField::BinaryActivation { active: active.clone() },
        };
        field.validate()?;
        Ok(field)
    }
}

/// Where a scenario's layout comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[serde(try_from = "serde_json::Value")]
pub enum LayoutRef {
    /// Path to a layout file, relative to the scenario file.
    File(PathBuf),
    Inline(LayoutFile),
    /// Seeded uniform random layout; needs the scenario seed.
    Random {
        random: RandomLayoutSpec,
    },
}

impl TryFrom<serde_json::Value> for LayoutRef {
    type Error = String;

    fn try_from(value: serde_json::Value) -> Result<Self, String> {
        match value {
            serde_json::Value::String(path) => Ok(LayoutRef::File(PathBuf::from(path))),
            serde_json::Value::Object(mut map) if map.contains_key("random") => {
                if map.len() > 1 {
                    return Err("a random layout takes no other keys".into());
                }
                let spec = map.remove("random").expect("checked");
                from_value(spec)
                    .map(|random| LayoutRef::Random { random })
                    .map_err(|e| format!("random: {e}"))
            }
            serde_json::Value::Object(_) => from_value(value).map(LayoutRef::Inline),
            _ => Err("expected a path, a layout object or {\"random\": {...}}".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomLayoutSpec {
    pub n: usize,
    #[serde(default = "unit_bbox")]
    pub bbox: [f64; 4],
}

fn unit_bbox() -> [f64; 4] {
    [0.0, 0.0, 1.0, 1.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSpec {
    pub beta: f64,
    #[serde(default)]
    pub epsilon_unit: f64,
}

impl Default for CostSpec {
    fn default() -> Self {
        CostSpec {
            beta: 1.0,
            epsilon_unit: 0.0,
        }
    }
}

impl CostSpec {
    pub fn to_model(self) -> sensorbound_core::Result<CostModel> {
        CostModel::new(self.beta, self.epsilon_unit)
    }
}

fn default_sense_threshold() -> f64 {
    DEFAULT_SENSE_THRESHOLD
}

/// Inputs of a single simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub layout: LayoutRef,
    pub field: FieldSpec,
    pub theta: f64,
    #[serde(default)]
    pub cost: CostSpec,
    #[serde(default = "default_sense_threshold")]
    pub sense_threshold: f64,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentExport {
    pub pair: [usize; 2],
    pub geom: [[f64; 2]; 2],
    pub tx: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostsExport {
    pub naive_full: f64,
    pub naive_sensing: f64,
    pub proposed: f64,
}

/// Detection result with the three algorithms' costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultExport {
    pub segments: Vec<SegmentExport>,
    pub local_messages: usize,
    pub remote_messages: usize,
    pub costs: CostsExport,
}

impl ResultExport {
    pub fn new(result: &BoundaryResult, costs: &CostComparison) -> Self {
        ResultExport {
            segments: result
                .segments()
                .iter()
                .map(|s| SegmentExport {
                    pair: [s.pair.lo, s.pair.hi],
                    geom: [
                        [s.geometry.a.x(), s.geometry.a.y()],
                        [s.geometry.b.x(), s.geometry.b.y()],
                    ],
                    tx: s.transmitter,
                })
                .collect(),
            local_messages: result.local_messages(),
            remote_messages: result.remote_messages(),
            costs: CostsExport {
                naive_full: costs.naive_full,
                naive_sensing: costs.naive_sensing,
                proposed: costs.proposed,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MetricSpec {
    Transmitters,
    Incident,
}

impl From<MetricSpec> for ReportingMetric {
    fn from(m: MetricSpec) -> Self {
        match m {
            MetricSpec::Transmitters => ReportingMetric::Transmitters,
            MetricSpec::Incident => ReportingMetric::IncidentNodes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedSpec {
    pub above_n: usize,
    pub layouts: usize,
    pub patterns: usize,
}

fn default_node_counts() -> Vec<usize> {
    REFERENCE_NODE_COUNTS.to_vec()
}

fn default_hundred() -> usize {
    100
}

fn default_theta() -> f64 {
    0.5
}

fn default_metric() -> MetricSpec {
    MetricSpec::Incident
}

fn default_reduced() -> Option<ReducedSpec> {
    Some(ReducedSpec {
        above_n: 100,
        layouts: 20,
        patterns: 20,
    })
}

/// Monte Carlo configuration. Every field has a default matching the
/// reference sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfigFile {
    #[serde(default = "default_node_counts")]
    pub node_counts: Vec<usize>,
    #[serde(default = "default_hundred")]
    pub layouts_per_count: usize,
    #[serde(default = "default_hundred")]
    pub patterns_per_activation_size: usize,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "unit_bbox")]
    pub bbox: [f64; 4],
    #[serde(default = "default_metric")]
    pub reporting_metric: MetricSpec,
    #[serde(default = "default_reduced")]
    pub reduced: Option<ReducedSpec>,
}

impl Default for SweepConfigFile {
    fn default() -> Self {
        parse_json("{}", Path::new("<defaults>")).expect("defaults parse")
    }
}

impl SweepConfigFile {
    pub fn to_config(&self) -> sensorbound_core::Result<SweepConfig> {
        let config = SweepConfig {
            node_counts: self.node_counts.clone(),
            layouts_per_count: self.layouts_per_count,
            patterns_per_activation_size: self.patterns_per_activation_size,
            theta: self.theta,
            seed: self.seed,
            bbox: parse_bbox(self.bbox)?,
            reporting_metric: self.reporting_metric.into(),
            reduced: self.reduced.map(|r| ReducedSampling {
                above_n: r.above_n,
                layouts: r.layouts,
                patterns: r.patterns,
            }),
        };
        config.validate()?;
        Ok(config)
    }
}

/// One row of the records CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub n: usize,
    pub layout: usize,
    pub activation_size: usize,
    pub pattern: usize,
    pub observing_frac: f64,
    pub reporting_frac: f64,
    pub naive_sensing_frac: f64,
}

impl From<&TrialRecord> for RecordRow {
    fn from(r: &TrialRecord) -> Self {
        RecordRow {
            n: r.n,
            layout: r.layout_index,
            activation_size: r.activation_size,
            pattern: r.pattern_index,
            observing_frac: r.observing_fraction,
            reporting_frac: r.reporting_fraction,
            naive_sensing_frac: r.reporters_naive_sensing,
        }
    }
}

impl From<RecordRow> for TrialRecord {
    fn from(r: RecordRow) -> Self {
        TrialRecord {
            n: r.n,
            layout_index: r.layout,
            activation_size: r.activation_size,
            pattern_index: r.pattern,
            observing_fraction: r.observing_frac,
            reporting_fraction: r.reporting_frac,
            reporters_naive_sensing: r.naive_sensing_frac,
        }
    }
}

pub fn records_csv(records: &[TrialRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(RecordRow::from(r)).expect("in-memory CSV");
    }
    w.into_inner().expect("in-memory CSV")
}

pub fn read_records_csv(file: &Path) -> Result<Vec<TrialRecord>, FormatError> {
    let mut rdr = csv::Reader::from_path(file).map_err(|e| FormatError::Csv {
        file: file.display().to_string(),
        source: e,
    })?;
    rdr.deserialize::<RecordRow>()
        .map(|row| {
            row.map(TrialRecord::from).map_err(|e| FormatError::Csv {
                file: file.display().to_string(),
                source: e,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
struct SummaryRow {
    n: usize,
    max_reporting_pct: String,
    mean_reporting_pct: String,
}

/// `n,max_reporting_pct,mean_reporting_pct`, percentages with four decimals.
pub fn summary_csv(summary: &SweepSummary) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &summary.rows {
        w.serialize(SummaryRow {
            n: row.n,
            max_reporting_pct: format!("{:.4}", 100.0 * row.max_reporting),
            mean_reporting_pct: format!("{:.4}", 100.0 * row.mean_reporting),
        })
        .expect("in-memory CSV");
    }
    w.into_inner().expect("in-memory CSV")
}
