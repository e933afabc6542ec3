//! Command-line interface.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use sensorbound_core::field::sample;
use sensorbound_core::montecarlo::{random_layout, SeededLayouts};
use sensorbound_core::protocol::{compare_costs, detect_boundary};
use sensorbound_core::render::{scatter_to_svg, scene_to_svg, Layer, Scene};
use sensorbound_core::{delaunay, voronoi, SensorLayout};

use crate::formats::{
    parse_bbox, read_json, read_records_csv, records_csv, summary_csv, to_json, write_all_atomic, FormatError,
    LayoutFile, LayoutRef, MetricSpec, ResultExport, ScenarioFile, SweepConfigFile, TriangulationExport,
};
use crate::sweep::run_sweep_parallel;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sensorbound", version, about = "Boundary approximation in sensor networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a uniform random layout.
    Generate(GenerateArgs),
    /// Delaunay triangles and clipped Voronoi segments of a layout.
    Triangulate(TriangulateArgs),
    /// Run boundary detection on a scenario and compare costs.
    Simulate(SimulateArgs),
    /// Reporting-fraction sweep over random layouts and activation patterns.
    Montecarlo(MontecarloArgs),
    /// Scatter plot of sweep records for one network size.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `minx,miny,maxx,maxy`
    #[arg(long, value_parser = bbox_arg, allow_hyphen_values = true, default_value = "0,0,1,1")]
    pub bbox: [f64; 4],
    #[arg(long)]
    pub out: PathBuf,
}

fn bbox_arg(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected minx,miny,maxx,maxy".to_string())
}

#[derive(Debug, Args)]
pub struct TriangulateArgs {
    /// Layout JSON.
    pub layout: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario JSON.
    pub scenario: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Overrides the scenario seed for random layouts.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MontecarloArgs {
    /// Sweep configuration JSON; defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory receiving `records.csv` and `summary.csv`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub metric: Option<MetricSpec>,
    /// Full sampling at every size, no reduction for large networks.
    #[arg(long)]
    pub paper_faithful: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Records CSV written by `montecarlo`.
    pub records: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 600)]
    pub width: u32,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Input(anyhow::Error),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            CliError::Input(e) | CliError::Runtime(e) => e,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.into())
        } else {
            CliError::Runtime(e.into())
        }
    }
}

fn input<E: Into<anyhow::Error>>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Input(e.into().context(ctx.to_string()))
}

fn runtime<E: Into<anyhow::Error>>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Runtime(e.into().context(ctx.to_string()))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Triangulate(a) => triangulate(a),
        Command::Simulate(a) => simulate(a),
        Command::Montecarlo(a) => montecarlo(a),
        Command::Render(a) => render(a),
    }
}

fn generate(a: GenerateArgs) -> Result<(), CliError> {
    let bbox = parse_bbox(a.bbox).map_err(input("--bbox"))?;
    let n = usize::try_from(a.n).map_err(input("--n"))?;
    let generated = random_layout(a.seed, n, 0, &bbox).map_err(runtime("generating layout"))?;
    let json = to_json(&LayoutFile::from_layout(&generated.layout));
    Ok(write_all_atomic(&[(a.out, json.into_bytes())])?)
}

fn load_layout(path: &Path) -> Result<SensorLayout, CliError> {
    let file: LayoutFile = read_json(path)?;
    file.to_layout().map_err(input(path.display()))
}

const FIGURE_WIDTH: u32 = 600;

fn triangulate(a: TriangulateArgs) -> Result<(), CliError> {
    let layout = load_layout(&a.layout)?;
    let tri = delaunay(&layout).map_err(input(a.layout.display()))?;
    let vor = voronoi(&tri);
    let mut files = vec![(a.out, to_json(&TriangulationExport::new(&tri, &vor)).into_bytes())];
    if let Some(svg) = a.svg {
        let scene = Scene::new(*layout.bbox())
            .with(Layer::delaunay_edges(&tri))
            .with(Layer::voronoi_segments(&vor))
            .with(Layer::sites(&tri));
        files.push((svg, scene_to_svg(&scene, FIGURE_WIDTH).into_bytes()));
    }
    Ok(write_all_atomic(&files)?)
}

fn scenario_layout(scenario: &ScenarioFile, path: &Path, seed: Option<u64>) -> Result<SensorLayout, CliError> {
    match &scenario.layout {
        LayoutRef::Inline(file) => file.to_layout().map_err(input(format!("{}: layout", path.display()))),
        LayoutRef::File(rel) => {
            let base = path.parent().unwrap_or(Path::new(""));
            load_layout(&base.join(rel))
        }
        LayoutRef::Random { random } => {
            let seed = seed
                .or(scenario.seed)
                .ok_or_else(|| CliError::Input(anyhow!("{}: a random layout needs a seed", path.display())))?;
            let bbox = parse_bbox(random.bbox).map_err(input(format!("{}: layout.random.bbox", path.display())))?;
            random_layout(seed, random.n, 0, &bbox)
                .map(|g| g.layout)
                .map_err(input(format!("{}: layout.random", path.display())))
        }
    }
}

fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let scenario: ScenarioFile = read_json(&a.scenario)?;
    let ctx = |field: &str| format!("{}: {field}", a.scenario.display());
    let layout = scenario_layout(&scenario, &a.scenario, a.seed)?;
    let field = scenario.field.to_field().map_err(input(ctx("field")))?;
    let cost = scenario.cost.to_model().map_err(input(ctx("cost")))?;
    if !(0.0..=1.0).contains(&scenario.sense_threshold) {
        return Err(CliError::Input(anyhow!(
            "{}",
            ctx("sense_threshold must lie in [0, 1]")
        )));
    }
    let tri = delaunay(&layout).map_err(input(ctx("layout")))?;
    let vor = voronoi(&tri);
    let readings = sample(&field, &layout).map_err(input(ctx("field")))?;
    let result = detect_boundary(&tri, &vor, &readings, scenario.theta).map_err(input(ctx("theta")))?;
    let costs = compare_costs(&result, &readings, scenario.sense_threshold, &cost);
    log::info!(
        "{} boundary segments, {} remote messages, {} sensing nodes",
        result.segments().len(),
        result.remote_messages(),
        costs.sensing_nodes
    );
    let mut files = vec![(a.out, to_json(&ResultExport::new(&result, &costs)).into_bytes())];
    if let Some(svg) = a.svg {
        let scene = Scene::boundary_figure(&tri, &vor, &field, &result);
        files.push((svg, scene_to_svg(&scene, FIGURE_WIDTH).into_bytes()));
    }
    Ok(write_all_atomic(&files)?)
}

fn montecarlo(a: MontecarloArgs) -> Result<(), CliError> {
    let mut file = match &a.config {
        Some(path) => read_json(path)?,
        None => SweepConfigFile::default(),
    };
    if let Some(seed) = a.seed {
        file.seed = seed;
    }
    if let Some(metric) = a.metric {
        file.reporting_metric = metric;
    }
    if a.paper_faithful {
        file.reduced = None;
    }
    let config = file.to_config().map_err(input("sweep configuration"))?;
    let source = SeededLayouts::for_config(&config);
    let output = run_sweep_parallel(&config, &source).map_err(runtime("Monte Carlo sweep"))?;
    for row in &output.summary.rows {
        log::info!(
            "n = {}: max reporting {:.2}%, mean {:.2}% over {} trials",
            row.n,
            100.0 * row.max_reporting,
            100.0 * row.mean_reporting,
            row.trials
        );
    }
    write_all_atomic(&[
        (a.out.join("records.csv"), records_csv(&output.records)),
        (a.out.join("summary.csv"), summary_csv(&output.summary)),
    ])
    .context("writing sweep output")
    .map_err(CliError::Runtime)
}

fn render(a: RenderArgs) -> Result<(), CliError> {
    let records = read_records_csv(&a.records)?;
    if a.width == 0 {
        return Err(CliError::Input(anyhow!("--width must be positive")));
    }
    let svg = scatter_to_svg(&records, a.n, a.width).map_err(input(a.records.display()))?;
    Ok(write_all_atomic(&[(a.out, svg.into_bytes())])?)
}
