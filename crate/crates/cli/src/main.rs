//! `tda` — topological summaries of point clouds from the command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 input-validation error,
//! 4 numeric-domain error (e.g. comparing diagrams with mismatched
//! essential classes).

mod manifest;
mod plots;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use manifest::RunManifest;
use tda_core::clustering::{cluster_tree, DensityKind};
use tda_core::filtration::{build_grid_filtration, build_rips_filtration, RipsInput};
use tda_core::io;
use tda_core::metrics;
use tda_core::persistence::{grid_diag_from_field, rips_diag};
use tda_core::rng::rng_from_seed;
use tda_core::sample::circle_uniform;
use tda_core::statistics::{bootstrap_band, max_persistence, multip_bootstrap};
use tda_core::summaries::{landscape, linspace, silhouette, SummaryCurve};
use tda_core::{Estimator, EvaluationGrid, PersistenceDiagram, PointCloud, ScalarField};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(String),
    Numeric(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<tda_core::Error> for CliError {
    fn from(e: tda_core::Error) -> Self {
        match e {
            tda_core::Error::NonFinite { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "tda",
    version,
    about = "Topological summaries of point-cloud data: estimators, persistence diagrams, diagram metrics, landscapes, bootstrap bands, cluster trees, SVG plots."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample points uniformly from a circle.
    SampleCircle(SampleCircleArgs),
    /// Evaluate a distance/density estimator over a grid.
    Estimate(EstimateArgs),
    /// Persistence diagram of estimator sublevel/superlevel sets on a grid.
    GridDiag(GridDiagArgs),
    /// Persistence diagram of the Vietoris-Rips filtration.
    RipsDiag(RipsDiagArgs),
    /// Bottleneck or Wasserstein distance between two diagrams.
    Distance(DistanceArgs),
    /// Persistence landscape of a diagram.
    Landscape(LandscapeArgs),
    /// Power-weighted silhouette of a diagram.
    Silhouette(SilhouetteArgs),
    /// Bootstrap confidence band for an estimator.
    BootstrapBand(BootstrapBandArgs),
    /// Multiplier-bootstrap band for a mean summary curve.
    MultipBootstrap(MultipBootstrapArgs),
    /// Scan smoothing parameters by significant persistence.
    MaxPersistence(MaxPersistenceArgs),
    /// Density cluster tree over a k-nearest-neighbor graph.
    ClusterTree(ClusterTreeArgs),
    /// Render a stored artifact as a static SVG figure.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FnKind {
    Dist,
    Dtm,
    Knn,
    Kde,
    Kdist,
}

#[derive(Args)]
struct EstimatorOpts {
    /// Estimator to evaluate.
    #[arg(long = "fn", value_enum)]
    function: FnKind,
    /// Smoothing mass for dtm.
    #[arg(long)]
    m0: Option<f64>,
    /// Neighbor count for knn.
    #[arg(long)]
    k: Option<usize>,
    /// Bandwidth for kde / kdist.
    #[arg(long)]
    h: Option<f64>,
}

impl EstimatorOpts {
    fn build(&self) -> CliResult<Estimator> {
        match self.function {
            FnKind::Dist => Ok(Estimator::Distance),
            FnKind::Dtm => self
                .m0
                .map(|m0| Estimator::Dtm { m0 })
                .ok_or_else(|| CliError::usage("--m0 is required for --fn dtm")),
            FnKind::Knn => self
                .k
                .map(|k| Estimator::Knn { k })
                .ok_or_else(|| CliError::usage("--k is required for --fn knn")),
            FnKind::Kde => self
                .h
                .map(|h| Estimator::Kde { h })
                .ok_or_else(|| CliError::usage("--h is required for --fn kde")),
            FnKind::Kdist => self
                .h
                .map(|h| Estimator::KernelDist { h })
                .ok_or_else(|| CliError::usage("--h is required for --fn kdist")),
        }
    }

    /// For parameter scans the smoothing value comes from the scan list, so
    /// a missing flag falls back to `first_param` as a placeholder.
    fn build_base(&self, first_param: f64) -> CliResult<Estimator> {
        match self.function {
            FnKind::Dist => Err(CliError::usage(
                "--fn dist has no smoothing parameter to scan",
            )),
            FnKind::Dtm => Ok(Estimator::Dtm {
                m0: self.m0.unwrap_or(first_param),
            }),
            FnKind::Knn => Ok(Estimator::Knn {
                k: self.k.unwrap_or(first_param.max(1.0) as usize),
            }),
            FnKind::Kde => Ok(Estimator::Kde {
                h: self.h.unwrap_or(first_param),
            }),
            FnKind::Kdist => Ok(Estimator::KernelDist {
                h: self.h.unwrap_or(first_param),
            }),
        }
    }

    fn record(&self, mut m: RunManifest) -> RunManifest {
        m = m.param("fn", format!("{:?}", self.function).to_lowercase());
        if let Some(m0) = self.m0 {
            m = m.param("m0", io::fmt_f64(m0));
        }
        if let Some(k) = self.k {
            m = m.param("k", k);
        }
        if let Some(h) = self.h {
            m = m.param("h", io::fmt_f64(h));
        }
        m
    }
}

#[derive(Args)]
struct GridOpts {
    /// Per-axis limits as lo1,hi1,lo2,hi2,...
    #[arg(
        long,
        allow_hyphen_values = true,
        value_delimiter = ',',
        required = true
    )]
    lim: Vec<f64>,
    /// Common grid step.
    #[arg(long)]
    by: f64,
}

impl GridOpts {
    fn limits(&self) -> CliResult<Vec<(f64, f64)>> {
        if self.lim.is_empty() || !self.lim.len().is_multiple_of(2) {
            return Err(CliError::usage(
                "--lim needs an even number of values: lo1,hi1,lo2,hi2,...",
            ));
        }
        Ok(self.lim.chunks_exact(2).map(|c| (c[0], c[1])).collect())
    }

    fn record(&self, m: RunManifest) -> RunManifest {
        let lims: Vec<String> = self.lim.iter().map(|&v| io::fmt_f64(v)).collect();
        m.param("lim", lims.join(","))
            .param("by", io::fmt_f64(self.by))
    }
}

#[derive(Args)]
struct ThreadOpts {
    /// Worker-thread cap for parallel stages (identical output regardless).
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl ThreadOpts {
    fn apply(&self) {
        // Ignore failure: the global pool can only be installed once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads.max(1))
            .build_global();
    }
}

#[derive(Args)]
struct SampleCircleArgs {
    /// Number of points.
    #[arg(long)]
    n: usize,
    /// Circle radius.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Center offset as x,y.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    offset: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    estimator: EstimatorOpts,
    /// Input point cloud CSV.
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    grid: GridOpts,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    threads: ThreadOpts,
}

#[derive(Args)]
struct GridDiagArgs {
    #[command(flatten)]
    estimator: EstimatorOpts,
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    grid: GridOpts,
    /// Sublevel-set filtration; pass `--sublevel false` for superlevel.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    sublevel: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the filtration, one `value;v0,v1,...` line per simplex.
    #[arg(long)]
    dump_filtration: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    threads: ThreadOpts,
}

#[derive(Args)]
struct RipsDiagArgs {
    /// Input point cloud CSV, or a distance matrix with --dist-matrix.
    #[arg(long = "in")]
    input: PathBuf,
    /// Interpret the input as an n x n distance matrix.
    #[arg(long)]
    dist_matrix: bool,
    /// Largest homological dimension to report.
    #[arg(long)]
    maxdim: usize,
    /// Filtration scale cap.
    #[arg(long)]
    maxscale: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    dump_filtration: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricKind {
    Bottleneck,
    Wasserstein,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long, value_enum)]
    metric: MetricKind,
    /// Wasserstein power.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Homological dimension to compare.
    #[arg(long)]
    dim: usize,
    /// First diagram (CSV or JSON).
    d1: PathBuf,
    /// Second diagram (CSV or JSON).
    d2: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TseqOpts {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    tmin: f64,
    #[arg(long)]
    tmax: f64,
    #[arg(long, default_value_t = 500)]
    tcount: usize,
}

impl TseqOpts {
    fn build(&self) -> CliResult<Vec<f64>> {
        Ok(linspace(self.tmin, self.tmax, self.tcount)?)
    }

    fn record(&self, m: RunManifest) -> RunManifest {
        m.param("tmin", io::fmt_f64(self.tmin))
            .param("tmax", io::fmt_f64(self.tmax))
            .param("tcount", self.tcount)
    }
}

#[derive(Args)]
struct LandscapeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    dim: usize,
    /// Landscape level (1 = the maximum envelope).
    #[arg(long, default_value_t = 1)]
    kk: usize,
    #[command(flatten)]
    tseq: TseqOpts,
    /// Drop capped essential classes instead of tenting them.
    #[arg(long)]
    exclude_essential: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also render a line plot.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SilhouetteArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    dim: usize,
    /// Persistence weight power.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[command(flatten)]
    tseq: TseqOpts,
    #[arg(long)]
    exclude_essential: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BootstrapBandArgs {
    #[command(flatten)]
    estimator: EstimatorOpts,
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    grid: GridOpts,
    /// Bootstrap replicates.
    #[arg(long)]
    b: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    threads: ThreadOpts,
}

#[derive(Args)]
struct MultipBootstrapArgs {
    /// CSV matrix of curves, one curve per row.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    b: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    threads: ThreadOpts,
}

#[derive(Args)]
struct MaxPersistenceArgs {
    #[command(flatten)]
    estimator: EstimatorOpts,
    /// Candidate smoothing parameters, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    params: Vec<f64>,
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    grid: GridOpts,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    sublevel: bool,
    #[arg(long)]
    b: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Per-parameter persistence figure with the significance band.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    threads: ThreadOpts,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DensityArg {
    Knn,
    Kde,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TreeAxis {
    Lambda,
    Alpha,
    Kappa,
}

#[derive(Args)]
struct ClusterTreeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Neighbor count for the connectivity graph (and the knn density).
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum)]
    density: DensityArg,
    /// Bandwidth, required when --density kde.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also render a dendrogram.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Dendrogram axis.
    #[arg(long = "type", value_enum, default_value_t = TreeAxis::Lambda)]
    axis: TreeAxis,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    threads: ThreadOpts,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlotKind {
    Diagram,
    Barcode,
    Rotated,
    Landscape,
    Silhouette,
    Band,
    Dendrogram,
    Field,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, value_enum)]
    kind: PlotKind,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Vertical thickness of the confidence strip for diagram/rotated plots.
    #[arg(long)]
    band: Option<f64>,
    /// Dendrogram axis.
    #[arg(long = "type", value_enum, default_value_t = TreeAxis::Lambda)]
    axis: TreeAxis,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::SampleCircle(args) => run_sample_circle(args),
        Command::Estimate(args) => run_estimate(args),
        Command::GridDiag(args) => run_grid_diag(args),
        Command::RipsDiag(args) => run_rips_diag(args),
        Command::Distance(args) => run_distance(args),
        Command::Landscape(args) => run_landscape(args),
        Command::Silhouette(args) => run_silhouette(args),
        Command::BootstrapBand(args) => run_bootstrap_band(args),
        Command::MultipBootstrap(args) => run_multip_bootstrap(args),
        Command::MaxPersistence(args) => run_max_persistence(args),
        Command::ClusterTree(args) => run_cluster_tree(args),
        Command::Plot(args) => run_plot(args),
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn json_doc(manifest: &RunManifest, mut body: serde_json::Value) -> String {
    if let serde_json::Value::Object(map) = &mut body {
        map.insert("manifest".to_string(), manifest.to_value());
    }
    let mut text = serde_json::to_string_pretty(&body).expect("serializable");
    text.push('\n');
    text
}

fn read_diagram(path: &Path) -> CliResult<PersistenceDiagram> {
    let text = read_input(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("bad JSON in {}: {e}", path.display())))?;
        let inner = value.get("diagram").unwrap_or(&value);
        Ok(io::read_diagram_json(inner)?)
    } else {
        Ok(io::read_diagram_csv(&text)?)
    }
}

fn run_sample_circle(args: SampleCircleArgs) -> CliResult<()> {
    let offset_parts: Vec<&str> = args.offset.split(',').collect();
    if offset_parts.len() != 2 {
        return Err(CliError::usage("--offset must be x,y"));
    }
    let offset = (
        io::parse_f64(offset_parts[0])?,
        io::parse_f64(offset_parts[1])?,
    );
    let mut rng = rng_from_seed(args.seed);
    let cloud = circle_uniform(args.n, args.r, offset, &mut rng)?;
    let manifest = RunManifest::new("sample-circle")
        .param("n", args.n)
        .param("r", io::fmt_f64(args.r))
        .param("offset", &args.offset)
        .seed(args.seed);
    match args.format {
        Format::Csv => write_output(&args.out, &io::write_points_csv(&cloud)),
        Format::Json => {
            let points: Vec<Vec<f64>> = cloud.iter().map(|p| p.to_vec()).collect();
            write_output(
                &args.out,
                &json_doc(&manifest, serde_json::json!({ "points": points })),
            )
        }
    }
}

fn evaluate_field(
    estimator: Estimator,
    input: &Path,
    grid_opts: &GridOpts,
) -> CliResult<(PointCloud, EvaluationGrid, Vec<f64>, String)> {
    let text = read_input(input)?;
    let cloud = io::read_points_csv(&text)?;
    let grid = EvaluationGrid::new(&grid_opts.limits()?, grid_opts.by)?;
    let queries = grid.to_point_cloud();
    let values = estimator.evaluate(&cloud, &queries)?;
    Ok((cloud, grid, values, text))
}

fn run_estimate(args: EstimateArgs) -> CliResult<()> {
    args.threads.apply();
    let estimator = args.estimator.build()?;
    let (_, grid, values, raw) = evaluate_field(estimator, &args.input, &args.grid)?;
    let mut manifest = RunManifest::new("estimate").input(&args.input, raw.as_bytes());
    manifest = args.estimator.record(manifest);
    manifest = args.grid.record(manifest);
    if let Some(seed) = args.seed {
        manifest = manifest.seed(seed);
    }
    match args.format {
        Format::Csv => {
            // Infinities (knn density at coincident points) are legal here,
            // so rows are written directly rather than through ScalarField.
            let mut out = String::new();
            let mut header: Vec<String> = (0..grid.dim()).map(|k| format!("x{k}")).collect();
            header.push("value".into());
            out.push_str(&header.join(","));
            out.push('\n');
            for (i, &v) in values.iter().enumerate() {
                for c in grid.point(i) {
                    out.push_str(&io::fmt_f64(c));
                    out.push(',');
                }
                out.push_str(&io::fmt_f64(v));
                out.push('\n');
            }
            write_output(&args.out, &out)
        }
        Format::Json => write_output(
            &args.out,
            &json_doc(&manifest, io::field_json_parts(&grid, &values)),
        ),
    }
}

fn write_diagram_output(
    out: &Path,
    format: Format,
    manifest: &RunManifest,
    diagram: &PersistenceDiagram,
) -> CliResult<()> {
    match format {
        Format::Csv => write_output(out, &io::write_diagram_csv(diagram)),
        Format::Json => write_output(
            out,
            &json_doc(
                manifest,
                serde_json::json!({ "diagram": io::write_diagram_json(diagram) }),
            ),
        ),
    }
}

fn run_grid_diag(args: GridDiagArgs) -> CliResult<()> {
    args.threads.apply();
    let estimator = args.estimator.build()?;
    let (_, grid, values, raw) = evaluate_field(estimator, &args.input, &args.grid)?;
    let field = ScalarField::new(grid, values)?;
    let diagram = grid_diag_from_field(&field, args.sublevel)?;
    if let Some(dump) = &args.dump_filtration {
        let filtration = build_grid_filtration(&field, args.sublevel)?;
        write_output(dump, &filtration.dump())?;
    }
    let mut manifest = RunManifest::new("grid-diag")
        .input(&args.input, raw.as_bytes())
        .param("sublevel", args.sublevel);
    manifest = args.estimator.record(manifest);
    manifest = args.grid.record(manifest);
    if let Some(seed) = args.seed {
        manifest = manifest.seed(seed);
    }
    write_diagram_output(&args.out, args.format, &manifest, &diagram)
}

fn run_rips_diag(args: RipsDiagArgs) -> CliResult<()> {
    let raw = read_input(&args.input)?;
    let (diagram, dump) = if args.dist_matrix {
        let matrix = io::read_distance_matrix_csv(&raw)?;
        let d = rips_diag(RipsInput::Distances(&matrix), args.maxdim, args.maxscale)?;
        let dump = args
            .dump_filtration
            .is_some()
            .then(|| {
                build_rips_filtration(RipsInput::Distances(&matrix), args.maxdim, args.maxscale)
                    .map(|f| f.dump())
            })
            .transpose()?;
        (d, dump)
    } else {
        let cloud = io::read_points_csv(&raw)?;
        let d = rips_diag(RipsInput::Points(&cloud), args.maxdim, args.maxscale)?;
        let dump = args
            .dump_filtration
            .is_some()
            .then(|| {
                build_rips_filtration(RipsInput::Points(&cloud), args.maxdim, args.maxscale)
                    .map(|f| f.dump())
            })
            .transpose()?;
        (d, dump)
    };
    if let (Some(path), Some(text)) = (&args.dump_filtration, dump) {
        write_output(path, &text)?;
    }
    let mut manifest = RunManifest::new("rips-diag")
        .input(&args.input, raw.as_bytes())
        .param("maxdim", args.maxdim)
        .param("maxscale", io::fmt_f64(args.maxscale))
        .param("dist_matrix", args.dist_matrix);
    if let Some(seed) = args.seed {
        manifest = manifest.seed(seed);
    }
    write_diagram_output(&args.out, args.format, &manifest, &diagram)
}

fn run_distance(args: DistanceArgs) -> CliResult<()> {
    let raw1 = read_input(&args.d1)?;
    let raw2 = read_input(&args.d2)?;
    let d1 = read_diagram(&args.d1)?;
    let d2 = read_diagram(&args.d2)?;
    let value = match args.metric {
        MetricKind::Bottleneck => metrics::bottleneck(&d1, &d2, args.dim)?,
        MetricKind::Wasserstein => metrics::wasserstein(&d1, &d2, args.p, args.dim)?,
    };
    if value.is_infinite() {
        return Err(CliError::Numeric(
            "diagrams have mismatched essential-class counts in this dimension".into(),
        ));
    }
    match args.format {
        Format::Csv => println!("{value:.6}"),
        Format::Json => {
            let manifest = RunManifest::new("distance")
                .param("metric", format!("{:?}", args.metric).to_lowercase())
                .param("p", io::fmt_f64(args.p))
                .param("dim", args.dim)
                .input(&args.d1, raw1.as_bytes())
                .input(&args.d2, raw2.as_bytes());
            print!(
                "{}",
                json_doc(&manifest, serde_json::json!({ "value": value }))
            );
        }
    }
    Ok(())
}

fn write_curve_output(
    out: &Path,
    format: Format,
    manifest: &RunManifest,
    curve: &SummaryCurve,
    svg_path: Option<&Path>,
    label: &str,
) -> CliResult<()> {
    match format {
        Format::Csv => write_output(out, &io::write_curve_csv(curve))?,
        Format::Json => write_output(
            out,
            &json_doc(manifest, serde_json::to_value(curve).expect("finite curve")),
        )?,
    }
    if let Some(path) = svg_path {
        write_output(path, &plots::plot_curve(curve, label))?;
    }
    Ok(())
}

fn run_landscape(args: LandscapeArgs) -> CliResult<()> {
    let raw = read_input(&args.input)?;
    let diagram = read_diagram(&args.input)?;
    let tseq = args.tseq.build()?;
    let curve = landscape(&diagram, args.dim, args.kk, &tseq, !args.exclude_essential)?;
    let mut manifest = RunManifest::new("landscape")
        .input(&args.input, raw.as_bytes())
        .param("dim", args.dim)
        .param("kk", args.kk)
        .param("exclude_essential", args.exclude_essential);
    manifest = args.tseq.record(manifest);
    if let Some(seed) = args.seed {
        manifest = manifest.seed(seed);
    }
    write_curve_output(
        &args.out,
        args.format,
        &manifest,
        &curve,
        args.svg.as_deref(),
        "landscape",
    )
}

fn run_silhouette(args: SilhouetteArgs) -> CliResult<()> {
    let raw = read_input(&args.input)?;
    let diagram = read_diagram(&args.input)?;
    let tseq = args.tseq.build()?;
    let curve = silhouette(&diagram, args.p, args.dim, &tseq, !args.exclude_essential)?;
    let mut manifest = RunManifest::new("silhouette")
        .input(&args.input, raw.as_bytes())
        .param("dim", args.dim)
        .param("p", io::fmt_f64(args.p))
        .param("exclude_essential", args.exclude_essential);
    manifest = args.tseq.record(manifest);
    if let Some(seed) = args.seed {
        manifest = manifest.seed(seed);
    }
    write_curve_output(
        &args.out,
        args.format,
        &manifest,
        &curve,
        args.svg.as_deref(),
        "silhouette",
    )
}

fn run_bootstrap_band(args: BootstrapBandArgs) -> CliResult<()> {
    args.threads.apply();
    let estimator = args.estimator.build()?;
    let raw = read_input(&args.input)?;
    let cloud = io::read_points_csv(&raw)?;
    let grid = EvaluationGrid::new(&args.grid.limits()?, args.grid.by)?;
    let band = bootstrap_band(&cloud, estimator, &grid, args.b, args.alpha, args.seed)?;
    let mut manifest = RunManifest::new("bootstrap-band")
        .input(&args.input, raw.as_bytes())
        .param("b", args.b)
        .param("alpha", io::fmt_f64(args.alpha))
        .seed(args.seed);
    manifest = args.estimator.record(manifest);
    manifest = args.grid.record(manifest);
    match args.format {
        Format::Json => {
            let body = serde_json::json!({
                "alpha": band.alpha,
                "b": band.replicates,
                "seed": band.seed,
                "width": band.width,
                "grid": { "limits": grid.limits(), "by": grid.by() },
                "center": band.center,
                "lower": band.lower,
                "upper": band.upper,
            });
            write_output(&args.out, &json_doc(&manifest, body))
        }
        Format::Csv => {
            let mut out = String::new();
            let mut header: Vec<String> = (0..grid.dim()).map(|k| format!("x{k}")).collect();
            header.extend(["center".into(), "lower".into(), "upper".into()]);
            out.push_str(&header.join(","));
            out.push('\n');
            for i in 0..grid.num_points() {
                for c in grid.point(i) {
                    out.push_str(&io::fmt_f64(c));
                    out.push(',');
                }
                out.push_str(&format!(
                    "{},{},{}\n",
                    io::fmt_f64(band.center[i]),
                    io::fmt_f64(band.lower[i]),
                    io::fmt_f64(band.upper[i])
                ));
            }
            write_output(&args.out, &out)
        }
    }
}

fn run_multip_bootstrap(args: MultipBootstrapArgs) -> CliResult<()> {
    args.threads.apply();
    let raw = read_input(&args.input)?;
    let curves = io::read_curve_matrix_csv(&raw)?;
    let band = multip_bootstrap(&curves, args.b, args.alpha, args.seed)?;
    let manifest = RunManifest::new("multip-bootstrap")
        .input(&args.input, raw.as_bytes())
        .param("b", args.b)
        .param("alpha", io::fmt_f64(args.alpha))
        .param("curves", curves.len())
        .seed(args.seed);
    match args.format {
        Format::Json => {
            let body = serde_json::json!({
                "alpha": band.alpha,
                "b": band.replicates,
                "seed": band.seed,
                "width": band.width,
                "mean": band.mean,
                "lower": band.lower,
                "upper": band.upper,
            });
            write_output(&args.out, &json_doc(&manifest, body))
        }
        Format::Csv => {
            let mut out = String::from("index,mean,lower,upper\n");
            for i in 0..band.mean.len() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i,
                    io::fmt_f64(band.mean[i]),
                    io::fmt_f64(band.lower[i]),
                    io::fmt_f64(band.upper[i])
                ));
            }
            write_output(&args.out, &out)
        }
    }
}

fn run_max_persistence(args: MaxPersistenceArgs) -> CliResult<()> {
    args.threads.apply();
    let first = *args
        .params
        .first()
        .ok_or_else(|| CliError::usage("--params must list at least one value"))?;
    let base = args.estimator.build_base(first)?;
    let raw = read_input(&args.input)?;
    let cloud = io::read_points_csv(&raw)?;
    let limits = args.grid.limits()?;
    let result = max_persistence(
        base,
        &args.params,
        &cloud,
        &limits,
        args.grid.by,
        args.sublevel,
        args.b,
        args.alpha,
        args.seed,
    )?;
    let mut manifest = RunManifest::new("max-persistence")
        .input(&args.input, raw.as_bytes())
        .param(
            "params",
            args.params
                .iter()
                .map(|&p| io::fmt_f64(p))
                .collect::<Vec<_>>()
                .join(","),
        )
        .param("sublevel", args.sublevel)
        .param("b", args.b)
        .param("alpha", io::fmt_f64(args.alpha))
        .seed(args.seed);
    manifest = args.estimator.record(manifest);
    manifest = args.grid.record(manifest);

    if let Some(path) = &args.svg {
        write_output(path, &plots::plot_max_persistence(&result))?;
    }

    match args.format {
        Format::Json => {
            let per_parameter: Vec<serde_json::Value> = result
                .per_parameter
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "parameter": p.parameter,
                        "band_width": p.band_width,
                        "num_significant": p.num_significant,
                        "total_significant": p.total_significant,
                        "diagram": io::write_diagram_json(&p.diagram),
                    })
                })
                .collect();
            let body = serde_json::json!({
                "alpha": result.alpha,
                "b": result.replicates,
                "seed": result.seed,
                "per_parameter": per_parameter,
                "argmax_count": result.argmax_count,
                "argmax_total": result.argmax_total,
            });
            write_output(&args.out, &json_doc(&manifest, body))
        }
        Format::Csv => {
            let mut out = String::from("parameter,band_width,num_significant,total_significant\n");
            for p in &result.per_parameter {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    io::fmt_f64(p.parameter),
                    io::fmt_f64(p.band_width),
                    p.num_significant,
                    io::fmt_f64(p.total_significant)
                ));
            }
            write_output(&args.out, &out)
        }
    }
}

fn run_cluster_tree(args: ClusterTreeArgs) -> CliResult<()> {
    args.threads.apply();
    let raw = read_input(&args.input)?;
    let cloud = io::read_points_csv(&raw)?;
    let density = match args.density {
        DensityArg::Knn => DensityKind::Knn,
        DensityArg::Kde => DensityKind::Kde,
    };
    if density == DensityKind::Kde && args.h.is_none() {
        return Err(CliError::usage("--h is required when --density kde"));
    }
    let tree = cluster_tree(&cloud, args.k, density, args.h)?;
    let mut manifest = RunManifest::new("cluster-tree")
        .input(&args.input, raw.as_bytes())
        .param("k", args.k)
        .param("density", format!("{:?}", args.density).to_lowercase());
    if let Some(h) = args.h {
        manifest = manifest.param("h", io::fmt_f64(h));
    }
    if let Some(seed) = args.seed {
        manifest = manifest.seed(seed);
    }

    if let Some(path) = &args.svg {
        let axis = tree_axis(args.axis);
        write_output(path, &plots::plot_dendrogram(&tree, axis))?;
    }

    match args.format {
        Format::Json => {
            let body = serde_json::json!({
                "branches": tree.branches,
                "leaves": tree.leaves,
                "densities": tree.densities,
            });
            write_output(&args.out, &json_doc(&manifest, body))
        }
        Format::Csv => {
            let mut out = String::from(
                "id,parent,lambda_birth,lambda_death,alpha_birth,alpha_death,kappa_birth,kappa_death,members\n",
            );
            for b in &tree.branches {
                let members: Vec<String> = b.members.iter().map(|m| m.to_string()).collect();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    b.id,
                    b.parent.map_or("none".to_string(), |p| p.to_string()),
                    io::fmt_f64(b.lambda_birth),
                    io::fmt_f64(b.lambda_death),
                    io::fmt_f64(b.alpha_birth),
                    io::fmt_f64(b.alpha_death),
                    io::fmt_f64(b.kappa_birth),
                    io::fmt_f64(b.kappa_death),
                    members.join(";")
                ));
            }
            write_output(&args.out, &out)
        }
    }
}

fn tree_axis(axis: TreeAxis) -> plots::DendrogramAxis {
    match axis {
        TreeAxis::Lambda => plots::DendrogramAxis::Lambda,
        TreeAxis::Alpha => plots::DendrogramAxis::Alpha,
        TreeAxis::Kappa => plots::DendrogramAxis::Kappa,
    }
}

fn run_plot(args: PlotArgs) -> CliResult<()> {
    let raw = read_input(&args.input)?;
    let svg = match args.kind {
        PlotKind::Diagram => plots::plot_diagram(&read_diagram(&args.input)?, args.band),
        PlotKind::Barcode => plots::plot_barcode(&read_diagram(&args.input)?),
        PlotKind::Rotated => plots::plot_rotated(&read_diagram(&args.input)?, args.band),
        PlotKind::Landscape => plots::plot_curve(&io::read_curve_csv(&raw)?, "landscape"),
        PlotKind::Silhouette => plots::plot_curve(&io::read_curve_csv(&raw)?, "silhouette"),
        PlotKind::Band => {
            let value: serde_json::Value = serde_json::from_str(&raw)
                .map_err(|e| CliError::Invalid(format!("bad band JSON: {e}")))?;
            plot_band_from_json(&value)?
        }
        PlotKind::Dendrogram => {
            let value: serde_json::Value = serde_json::from_str(&raw)
                .map_err(|e| CliError::Invalid(format!("bad tree JSON: {e}")))?;
            let branches: Vec<tda_core::clustering::Branch> =
                serde_json::from_value(value["branches"].clone())
                    .map_err(|e| CliError::Invalid(format!("bad branches: {e}")))?;
            let leaves: Vec<usize> = serde_json::from_value(value["leaves"].clone())
                .map_err(|e| CliError::Invalid(format!("bad leaves: {e}")))?;
            let densities: Vec<f64> = serde_json::from_value(value["densities"].clone())
                .map_err(|e| CliError::Invalid(format!("bad densities: {e}")))?;
            let tree = tda_core::clustering::ClusterTree {
                branches,
                leaves,
                densities,
            };
            plots::plot_dendrogram(&tree, tree_axis(args.axis))
        }
        PlotKind::Field => {
            let (coords, values) = io::read_field_csv(&raw)?;
            plots::plot_field(&coords, &values).map_err(CliError::Invalid)?
        }
    };
    write_output(&args.out, &svg)
}

fn plot_band_from_json(value: &serde_json::Value) -> CliResult<String> {
    let bad = |what: &str| CliError::Invalid(format!("band JSON missing {what}"));
    let grid = value.get("grid").ok_or_else(|| bad("grid"))?;
    let limits: Vec<(f64, f64)> = serde_json::from_value(
        grid.get("limits")
            .ok_or_else(|| bad("grid.limits"))?
            .clone(),
    )
    .map_err(|e| CliError::Invalid(format!("bad limits: {e}")))?;
    let by = grid
        .get("by")
        .and_then(serde_json::Value::as_f64)
        .ok_or_else(|| bad("grid.by"))?;
    if limits.len() != 1 {
        return Err(CliError::Invalid(
            "band plots support 1-dimensional grids only".into(),
        ));
    }
    let grid = EvaluationGrid::new(&limits, by)?;
    let axis: Vec<f64> = grid.axis(0).to_vec();
    let arr = |key: &str| -> CliResult<Vec<f64>> {
        serde_json::from_value(value.get(key).ok_or_else(|| bad(key))?.clone())
            .map_err(|e| CliError::Invalid(format!("bad {key}: {e}")))
    };
    let center = arr("center")?;
    let lower = arr("lower")?;
    let upper = arr("upper")?;
    Ok(plots::plot_band(&axis, &center, &lower, &upper))
}
