//! Command-line surface for the clustering toolkit: benchmark generation,
//! topology-aware clustering, baseline clusterers, partition scoring, and
//! station time-series preparation.
//!
//! Exit codes: 0 success, 2 invalid flags, 3 input that cannot be parsed,
//! 4 algorithm or output failure.

use cbn::baselines::{dbscan, hierarchical, kmeans, Cut, DbscanLabel, KMeansConfig, Linkage};
use cbn::distance::{build_distance_matrix, DistanceSpec};
use cbn::graph::ComponentMode;
use cbn::homology::{betti_dynamics_summary, ThresholdGrid};
use cbn::ingest::{
    imputation_report_csv, impute_from_neighbors, load_observations, monthly_average,
    point_cloud_csv, to_point_cloud, zscale, LoadSpec, MonthWindow,
};
use cbn::pipeline::{run_cbn, CbnConfig};
use cbn::refine::{Tau, TuningParams};
use cbn::synth::{benchmark13, to_csv};
use cbn::{jaccard_index, pair_counts, rand_index, Partition, PointCloud};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "cbn",
    version,
    about = "Topology-aware clustering toolkit",
    long_about = "Clusters point clouds by the topology of each point's neighborhood, \
                  with baseline clusterers, pair-counting evaluation, a synthetic \
                  benchmark generator, and a station time-series ingestion pipeline."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic labeled 2-D dataset as CSV (x,y,label,is_noise).
    Generate(GenerateArgs),
    /// Cluster a point CSV and write a partition file (id,label).
    Cluster(ClusterArgs),
    /// Run a baseline clusterer and write a partition file (id,label).
    Baseline(BaselineArgs),
    /// Score a candidate partition against a reference partition.
    Evaluate(EvaluateArgs),
    /// Turn a station observation log into standardized monthly vectors.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Use the stock benchmark: 13 shapes, 3800 points, uniform density.
    #[arg(long)]
    benchmark13: bool,
    /// Seed of the sampling stream.
    #[arg(long, default_value_t = cbn::synth::BENCHMARK13_SEED)]
    seed: u64,
    /// Uniform background points appended after the shapes (label -1).
    #[arg(long, default_value_t = 0)]
    noise: usize,
    /// Destination CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClusterArgs {
    /// Point CSV: every column is a numeric feature except `label` and
    /// `is_noise` (ignored) and the optional `--col-id` column.
    #[arg(long)]
    input: PathBuf,
    /// Neighborhood size, at least 2.
    #[arg(long)]
    k: usize,
    /// Tolerance on relative beta0 change: `auto` or a number >= 0.
    #[arg(long, default_value = "auto", value_parser = parse_tau)]
    tau0: Tau,
    /// Tolerance on relative beta1 change: `auto` or a number >= 0.
    #[arg(long, default_value = "auto", value_parser = parse_tau)]
    tau1: Tau,
    /// Component notion used to read clusters off the refined graph.
    #[arg(long, value_enum, default_value_t = ModeArg::Strong)]
    mode: ModeArg,
    /// Dissolve clusters smaller than this into the deepest remaining one.
    #[arg(long)]
    min_cluster_size: Option<usize>,
    /// Number of thresholds on the uniform grid (j-1)/size, j = 1..=size.
    #[arg(long, default_value_t = 100)]
    grid_size: usize,
    /// Distance between points.
    #[arg(long, value_enum, default_value_t = DistanceArg::Euclidean)]
    distance: DistanceArg,
    /// Worker threads for the parallel stages; 0 keeps the library default.
    #[arg(long, env = "CBN_THREADS", default_value_t = 0)]
    threads: usize,
    /// Name of an identifier column in the input.
    #[arg(long)]
    col_id: Option<String>,
    /// Partition CSV destination.
    #[arg(long)]
    out: PathBuf,
    /// Optional Betti profile dump (id,eps,beta0,beta1 per point and
    /// threshold); large.
    #[arg(long)]
    betti_profiles: Option<PathBuf>,
    /// Optional per-threshold quartile table of beta0/beta1 across points.
    #[arg(long)]
    betti_summary: Option<PathBuf>,
}

#[derive(Args)]
struct BaselineArgs {
    /// Point CSV, same layout rules as `cluster`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Number of clusters (k-means).
    #[arg(long)]
    k: Option<usize>,
    /// Seed for center initialization (k-means).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration cap (k-means).
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Cluster-distance rule (hierarchical).
    #[arg(long, value_enum, default_value_t = LinkageArg::Single)]
    linkage: LinkageArg,
    /// Apply every merge of height strictly below this (hierarchical);
    /// default is the widest-gap cut.
    #[arg(long, conflicts_with = "clusters")]
    cut_height: Option<f64>,
    /// Stop merging at exactly this many clusters (hierarchical).
    #[arg(long)]
    clusters: Option<usize>,
    /// Neighborhood radius (dbscan).
    #[arg(long)]
    eps: Option<f64>,
    /// Neighbors within eps (self included) that make a core point (dbscan).
    #[arg(long, default_value_t = 5)]
    min_pts: usize,
    /// Distance between points.
    #[arg(long, value_enum, default_value_t = DistanceArg::Euclidean)]
    distance: DistanceArg,
    /// Name of an identifier column in the input.
    #[arg(long)]
    col_id: Option<String>,
    /// Partition CSV destination; dbscan noise points get label -1.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Reference partition CSV (column `label`; ids from `id`, `station`,
    /// or row order).
    #[arg(long)]
    reference: PathBuf,
    /// Candidate partition CSV with the same ids.
    #[arg(long)]
    candidate: PathBuf,
    /// Output format for the pair counts and indices on stdout.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct IngestArgs {
    /// Observation CSV: one row per measurement.
    #[arg(long)]
    input: PathBuf,
    /// Month window `YYYY-MM:YYYY-MM` defining the feature columns.
    #[arg(long, value_parser = parse_window)]
    window: MonthWindow,
    /// Destination for the station-by-month cloud CSV.
    #[arg(long)]
    out: PathBuf,
    /// Destination for the imputation report (station,month,donor).
    #[arg(long)]
    impute_report: Option<PathBuf>,
    /// Column holding the station identifier.
    #[arg(long, default_value = "station")]
    col_station: String,
    /// Column holding the observation date (ISO `YYYY-MM-DD` or
    /// `MM/DD/YYYY`).
    #[arg(long, default_value = "date")]
    col_date: String,
    /// Column holding the measured value.
    #[arg(long, default_value = "value")]
    col_value: String,
    /// Latitude column; with --col-lon, enables nearest-station imputation.
    #[arg(long, requires = "col_lon")]
    col_lat: Option<String>,
    /// Longitude column.
    #[arg(long, requires = "col_lat")]
    col_lon: Option<String>,
    /// Field delimiter: a single character, or `tab`.
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strong,
    Weak,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistanceArg {
    Euclidean,
    Manhattan,
    Chebyshev,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Kmeans,
    Hierarchical,
    Dbscan,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkageArg {
    Single,
    Complete,
    Average,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<ModeArg> for ComponentMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strong => ComponentMode::Strong,
            ModeArg::Weak => ComponentMode::Weak,
        }
    }
}

impl From<DistanceArg> for DistanceSpec {
    fn from(d: DistanceArg) -> Self {
        match d {
            DistanceArg::Euclidean => DistanceSpec::Euclidean,
            DistanceArg::Manhattan => DistanceSpec::Manhattan,
            DistanceArg::Chebyshev => DistanceSpec::Chebyshev,
        }
    }
}

impl From<LinkageArg> for Linkage {
    fn from(l: LinkageArg) -> Self {
        match l {
            LinkageArg::Single => Linkage::Single,
            LinkageArg::Complete => Linkage::Complete,
            LinkageArg::Average => Linkage::Average,
        }
    }
}

fn parse_tau(s: &str) -> Result<Tau, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Tau::Auto);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("expected `auto` or a number, got `{s}`"))?;
    if v.is_nan() || v < 0.0 {
        return Err(format!("tolerance must be >= 0, got {v}"));
    }
    Ok(Tau::Fixed(v))
}

fn parse_window(s: &str) -> Result<MonthWindow, String> {
    MonthWindow::parse(s).map_err(|e| e.to_string())
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    if s.eq_ignore_ascii_case("tab") || s == "\\t" {
        return Ok(b'\t');
    }
    match s.as_bytes() {
        [b] => Ok(*b),
        _ => Err(format!("expected one character or `tab`, got `{s}`")),
    }
}

/// A failure carrying its process exit code.
struct Failure {
    code: i32,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn usage_err(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn input_err(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 3,
        message: message.to_string(),
    }
}

fn algo_err(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 4,
        message: message.to_string(),
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => run_generate(args),
        Command::Cluster(args) => run_cluster(args),
        Command::Baseline(args) => run_baseline(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Ingest(args) => run_ingest(args),
    };
    if let Err(f) = result {
        eprintln!("error: {}", f.message);
        std::process::exit(f.code);
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("reports serialize")
    );
}

fn run_generate(args: GenerateArgs) -> CliResult<()> {
    if !args.benchmark13 {
        return Err(usage_err("pass --benchmark13; no other layout is built in"));
    }
    let dataset = benchmark13(args.seed, args.noise);
    fs::write(&args.out, to_csv(&dataset))
        .map_err(|e| algo_err(format!("cannot write {}: {e}", args.out.display())))?;

    #[derive(Serialize)]
    struct Report {
        points: usize,
        shapes: usize,
        noise: usize,
        seed: u64,
    }
    print_json(&Report {
        points: dataset.cloud.len(),
        shapes: dataset.shapes.len(),
        noise: args.noise,
        seed: args.seed,
    });
    Ok(())
}

/// Reads a point CSV. Columns named `label` and `is_noise` are annotations
/// and skipped; `col_id`, when given, names the identifier column; every
/// remaining column must parse as a finite number.
fn read_point_cloud(path: &Path, col_id: Option<&str>) -> CliResult<PointCloud> {
    let mut reader = csv::ReaderBuilder::new()
        .from_path(path)
        .map_err(|e| input_err(format!("cannot open {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| input_err(format!("{}: {e}", path.display())))?
        .clone();

    let mut id_col = None;
    let mut feature_cols = Vec::new();
    for (i, name) in headers.iter().enumerate() {
        let name = name.trim();
        if col_id == Some(name) {
            id_col = Some(i);
        } else if name != "label" && name != "is_noise" {
            feature_cols.push(i);
        }
    }
    if let (Some(name), None) = (col_id, id_col) {
        return Err(input_err(format!(
            "{}: id column `{name}` not found",
            path.display()
        )));
    }
    if feature_cols.is_empty() {
        return Err(input_err(format!("{}: no feature columns", path.display())));
    }

    let mut points = Vec::new();
    let mut ids = Vec::new();
    for (row_idx, row) in reader.records().enumerate() {
        let row = row.map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        let mut point = Vec::with_capacity(feature_cols.len());
        for &c in &feature_cols {
            let field = row.get(c).unwrap_or("").trim();
            let v: f64 = field.parse().map_err(|_| {
                input_err(format!(
                    "{} row {}: `{}` is not a number",
                    path.display(),
                    row_idx + 2,
                    field
                ))
            })?;
            point.push(v);
        }
        points.push(point);
        if let Some(c) = id_col {
            ids.push(row.get(c).unwrap_or("").trim().to_string());
        }
    }

    let cloud = if id_col.is_some() {
        PointCloud::with_ids(points, ids)
    } else {
        PointCloud::new(points)
    };
    cloud.map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn write_partition(path: &Path, cloud: &PointCloud, labels: &[i64]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| algo_err(format!("cannot write {}: {e}", path.display())))?;
    let io_err = |e| algo_err(format!("cannot write {}: {e}", path.display()));
    w.write_record(["id", "label"]).map_err(io_err)?;
    for (i, label) in labels.iter().enumerate() {
        let id = cloud
            .id_of(i)
            .map(str::to_string)
            .unwrap_or_else(|| i.to_string());
        w.write_record([id, label.to_string()]).map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| algo_err(format!("cannot write {}: {e}", path.display())))
}

fn run_cluster(args: ClusterArgs) -> CliResult<()> {
    let cloud = read_point_cloud(&args.input, args.col_id.as_deref())?;
    let grid = ThresholdGrid::uniform(args.grid_size)
        .map_err(|e| usage_err(format!("--grid-size: {e}")))?;
    let config = CbnConfig {
        k: args.k,
        params: TuningParams {
            tau0: args.tau0,
            tau1: args.tau1,
            mode: args.mode.into(),
            min_cluster_size: args.min_cluster_size,
        },
        grid,
        threads: args.threads,
    };
    let output = run_cbn(&cloud, &args.distance.into(), &config).map_err(algo_err)?;

    let labels: Vec<i64> = output
        .partition
        .labels()
        .iter()
        .map(|&l| l as i64)
        .collect();
    write_partition(&args.out, &cloud, &labels)?;

    if let Some(path) = &args.betti_profiles {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| algo_err(format!("cannot write {}: {e}", path.display())))?;
        let io_err = |e| algo_err(format!("cannot write {}: {e}", path.display()));
        w.write_record(["id", "eps", "beta0", "beta1"])
            .map_err(io_err)?;
        let thresholds = config.grid.thresholds();
        for (i, profile) in output.profiles.iter().enumerate() {
            let id = cloud
                .id_of(i)
                .map(str::to_string)
                .unwrap_or_else(|| i.to_string());
            for (j, &eps) in thresholds.iter().enumerate() {
                w.write_record([
                    id.as_str(),
                    &eps.to_string(),
                    &profile.beta0[j].to_string(),
                    &profile.beta1[j].to_string(),
                ])
                .map_err(io_err)?;
            }
        }
        w.flush()
            .map_err(|e| algo_err(format!("cannot write {}: {e}", path.display())))?;
    }

    if let Some(path) = &args.betti_summary {
        let summary = betti_dynamics_summary(&output.profiles).map_err(algo_err)?;
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| algo_err(format!("cannot write {}: {e}", path.display())))?;
        let io_err = |e| algo_err(format!("cannot write {}: {e}", path.display()));
        w.write_record([
            "eps",
            "beta0_min",
            "beta0_q1",
            "beta0_median",
            "beta0_q3",
            "beta0_max",
            "beta1_min",
            "beta1_q1",
            "beta1_median",
            "beta1_q3",
            "beta1_max",
        ])
        .map_err(io_err)?;
        for (j, &eps) in config.grid.thresholds().iter().enumerate() {
            let (b0, b1) = (&summary.beta0[j], &summary.beta1[j]);
            w.write_record([
                eps.to_string(),
                b0.min.to_string(),
                b0.q1.to_string(),
                b0.median.to_string(),
                b0.q3.to_string(),
                b0.max.to_string(),
                b1.min.to_string(),
                b1.q1.to_string(),
                b1.median.to_string(),
                b1.q3.to_string(),
                b1.max.to_string(),
            ])
            .map_err(io_err)?;
        }
        w.flush()
            .map_err(|e| algo_err(format!("cannot write {}: {e}", path.display())))?;
    }

    #[derive(Serialize)]
    struct Report<'a> {
        points: usize,
        k: usize,
        grid_size: usize,
        mode: &'a str,
        tau0: f64,
        tau1: f64,
        tau_rule: &'a str,
        clusters: usize,
    }
    print_json(&Report {
        points: cloud.len(),
        k: args.k,
        grid_size: args.grid_size,
        mode: match args.mode {
            ModeArg::Strong => "strong",
            ModeArg::Weak => "weak",
        },
        tau0: output.tau0,
        tau1: output.tau1,
        tau_rule: "auto tolerances take the largest pooled relative Betti change \
                   not exceeding Q3 + 1.5*IQR, with type 7 quartiles",
        clusters: output.partition.cluster_count(),
    });
    Ok(())
}

fn run_baseline(args: BaselineArgs) -> CliResult<()> {
    let cloud = read_point_cloud(&args.input, args.col_id.as_deref())?;

    let mut objective = None;
    let (name, labels): (&str, Vec<i64>) = match args.algorithm {
        AlgorithmArg::Kmeans => {
            let k = args
                .k
                .ok_or_else(|| usage_err("--k is required for kmeans"))?;
            let result = kmeans(
                &cloud,
                &KMeansConfig {
                    k,
                    seed: args.seed,
                    max_iter: args.max_iter,
                },
            )
            .map_err(algo_err)?;
            objective = Some(result.objective);
            (
                "kmeans",
                result
                    .partition
                    .labels()
                    .iter()
                    .map(|&l| l as i64)
                    .collect(),
            )
        }
        AlgorithmArg::Hierarchical => {
            let matrix = build_distance_matrix(&cloud, &args.distance.into()).map_err(algo_err)?;
            let cut = match (args.cut_height, args.clusters) {
                (Some(h), None) => Cut::Height(h),
                (None, Some(c)) => Cut::Count(c),
                (None, None) => Cut::MaxGap,
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let result = hierarchical(&matrix, args.linkage.into(), cut).map_err(algo_err)?;
            (
                "hierarchical",
                result
                    .partition
                    .labels()
                    .iter()
                    .map(|&l| l as i64)
                    .collect(),
            )
        }
        AlgorithmArg::Dbscan => {
            let eps = args
                .eps
                .ok_or_else(|| usage_err("--eps is required for dbscan"))?;
            let matrix = build_distance_matrix(&cloud, &args.distance.into()).map_err(algo_err)?;
            let result = dbscan(&matrix, eps, args.min_pts).map_err(algo_err)?;
            (
                "dbscan",
                result
                    .iter()
                    .map(|l| match l {
                        DbscanLabel::Cluster(c) => *c as i64,
                        DbscanLabel::Noise => -1,
                    })
                    .collect(),
            )
        }
    };
    write_partition(&args.out, &cloud, &labels)?;

    let mut distinct: Vec<i64> = labels.iter().copied().filter(|&l| l >= 0).collect();
    distinct.sort_unstable();
    distinct.dedup();

    #[derive(Serialize)]
    struct Report<'a> {
        algorithm: &'a str,
        points: usize,
        clusters: usize,
        noise_points: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        objective: Option<f64>,
    }
    print_json(&Report {
        algorithm: name,
        points: cloud.len(),
        clusters: distinct.len(),
        noise_points: labels.iter().filter(|&&l| l < 0).count(),
        objective,
    });
    Ok(())
}

/// Reads ids and integer labels from a partition-like CSV: the `label`
/// column holds the labels, ids come from an `id` or `station` column or
/// fall back to the row index.
fn read_labels(path: &Path) -> CliResult<(Vec<String>, Vec<i64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .from_path(path)
        .map_err(|e| input_err(format!("cannot open {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| input_err(format!("{}: {e}", path.display())))?
        .clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let label_col =
        find("label").ok_or_else(|| input_err(format!("{}: no `label` column", path.display())))?;
    let id_col = find("id").or_else(|| find("station"));

    let mut ids = Vec::new();
    let mut labels = Vec::new();
    for (row_idx, row) in reader.records().enumerate() {
        let row = row.map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        let field = row.get(label_col).unwrap_or("").trim();
        let label: i64 = field.parse().map_err(|_| {
            input_err(format!(
                "{} row {}: label `{}` is not an integer",
                path.display(),
                row_idx + 2,
                field
            ))
        })?;
        if label < -1 {
            return Err(input_err(format!(
                "{} row {}: labels must be >= -1",
                path.display(),
                row_idx + 2
            )));
        }
        labels.push(label);
        ids.push(match id_col {
            Some(c) => row.get(c).unwrap_or("").trim().to_string(),
            None => row_idx.to_string(),
        });
    }
    if ids.is_empty() {
        return Err(input_err(format!("{}: no rows", path.display())));
    }
    Ok((ids, labels))
}

/// Turns integer labels into a partition; each -1 becomes its own
/// singleton cluster.
fn to_partition(labels: &[i64]) -> CliResult<Partition> {
    let mut dense: HashMap<i64, usize> = HashMap::new();
    let mut raw = Vec::with_capacity(labels.len());
    for &l in labels {
        if l >= 0 {
            let next = dense.len();
            raw.push(*dense.entry(l).or_insert(next));
        } else {
            raw.push(usize::MAX);
        }
    }
    let mut next = dense.len();
    for slot in &mut raw {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    Partition::canonicalize(&raw).map_err(algo_err)
}

fn run_evaluate(args: EvaluateArgs) -> CliResult<()> {
    let (ref_ids, ref_labels) = read_labels(&args.reference)?;
    let (cand_ids, cand_labels) = read_labels(&args.candidate)?;

    let mut cand_by_id: HashMap<&str, i64> = HashMap::with_capacity(cand_ids.len());
    for (id, &label) in cand_ids.iter().zip(&cand_labels) {
        if cand_by_id.insert(id, label).is_some() {
            return Err(input_err(format!(
                "{}: duplicate id `{id}`",
                args.candidate.display()
            )));
        }
    }
    if cand_ids.len() != ref_ids.len() {
        return Err(input_err(format!(
            "id mismatch: {} has {} rows, {} has {}",
            args.reference.display(),
            ref_ids.len(),
            args.candidate.display(),
            cand_ids.len()
        )));
    }
    let mut aligned = Vec::with_capacity(ref_ids.len());
    let mut seen_ref: HashSet<&str> = HashSet::with_capacity(ref_ids.len());
    for id in &ref_ids {
        if !seen_ref.insert(id) {
            return Err(input_err(format!(
                "{}: duplicate id `{id}`",
                args.reference.display()
            )));
        }
        match cand_by_id.get(id.as_str()) {
            Some(&label) => aligned.push(label),
            None => {
                return Err(input_err(format!(
                    "id mismatch: `{id}` is missing from {}",
                    args.candidate.display()
                )))
            }
        }
    }

    let reference = to_partition(&ref_labels)?;
    let candidate = to_partition(&aligned)?;
    let counts = pair_counts(&reference, &candidate).map_err(algo_err)?;
    let rand = rand_index(&counts);
    let jaccard = jaccard_index(&counts);

    match args.format {
        FormatArg::Json => {
            #[derive(Serialize)]
            struct Report {
                true_positive: u64,
                true_negative: u64,
                false_positive: u64,
                false_negative: u64,
                rand_index: f64,
                jaccard_index: f64,
            }
            print_json(&Report {
                true_positive: counts.true_positive,
                true_negative: counts.true_negative,
                false_positive: counts.false_positive,
                false_negative: counts.false_negative,
                rand_index: rand,
                jaccard_index: jaccard,
            });
        }
        FormatArg::Csv => {
            println!(
                "true_positive,true_negative,false_positive,false_negative,rand_index,jaccard_index"
            );
            println!(
                "{},{},{},{},{},{}",
                counts.true_positive,
                counts.true_negative,
                counts.false_positive,
                counts.false_negative,
                rand,
                jaccard
            );
        }
    }
    Ok(())
}

fn run_ingest(args: IngestArgs) -> CliResult<()> {
    let file = fs::File::open(&args.input)
        .map_err(|e| input_err(format!("cannot open {}: {e}", args.input.display())))?;
    let spec = LoadSpec {
        delimiter: args.delimiter,
        col_station: args.col_station.clone(),
        col_date: args.col_date.clone(),
        col_value: args.col_value.clone(),
        col_lat: args.col_lat.clone(),
        col_lon: args.col_lon.clone(),
    };
    let loaded = load_observations(file, &spec)
        .map_err(|e| input_err(format!("{}: {e}", args.input.display())))?;
    if loaded.skipped_rows > 0 {
        eprintln!(
            "warning: skipped {} unparseable row(s) in {}",
            loaded.skipped_rows,
            args.input.display()
        );
    }

    let series = monthly_average(&loaded.records, &args.window);
    let (filled, imputations) = impute_from_neighbors(&series).map_err(algo_err)?;
    let scaled = zscale(&filled).map_err(algo_err)?;
    let cloud = to_point_cloud(&scaled).map_err(algo_err)?;

    let cloud_csv = point_cloud_csv(&cloud, &args.window).map_err(algo_err)?;
    fs::write(&args.out, cloud_csv)
        .map_err(|e| algo_err(format!("cannot write {}: {e}", args.out.display())))?;
    if let Some(path) = &args.impute_report {
        let report_csv = imputation_report_csv(&imputations, &args.window).map_err(algo_err)?;
        fs::write(path, report_csv)
            .map_err(|e| algo_err(format!("cannot write {}: {e}", path.display())))?;
    }

    #[derive(Serialize)]
    struct Report {
        stations: usize,
        months: usize,
        imputed_cells: usize,
        skipped_rows: usize,
    }
    print_json(&Report {
        stations: cloud.len(),
        months: args.window.len(),
        imputed_cells: imputations.len(),
        skipped_rows: loaded.skipped_rows,
    });
    Ok(())
}
