//! `coranking` command-line tool.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coranking::datasets::{gen_random_points, gen_swapped_row, gen_swiss_roll, MappingPair, SwissRollParams};
use coranking::io::{self as cio, DenseMatrix};
use coranking::{
    block_counts, colorize, coranking_matrix, lcmc_curve, min_error_histogram, pairwise_distances, pointwise_quality,
    pointwise_quality_naive, qnx_curve, quality_map, random_baseline, rank_matrix, scalar_summary, split_summary,
    BaselineSpec, ColorScheme, DistanceMatrix, Error, Metric, Normalization, PointSet, RankMatrix, ToleranceComparison,
};

#[derive(Debug, Parser)]
#[command(name = "coranking", version, about = "Co-ranking quality assessment of dimensionality-reduction embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic mapping (high- and low-dimensional point files).
    Gen(GenArgs),
    /// Co-ranking matrix of a mapping.
    Coranking(CorankingArgs),
    /// Q_NX and LCMC curves over all neighborhood sizes.
    Qnx(QnxArgs),
    /// Quality map over (kappa_s, kappa_t).
    Qmap(QmapArgs),
    /// Per-point quality contributions and colors.
    Local(LocalArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, global = true, default_value = "high.csv")]
    out_high: PathBuf,
    #[arg(long, global = true, default_value = "low.csv")]
    out_low: PathBuf,
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Row of equidistant points with adjacent pairs swapped.
    Swaps {
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Swiss roll in 3-D with its unrolled 2-D ground truth.
    Swissroll {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.5 * std::f64::consts::PI)]
        t_min: f64,
        #[arg(long, default_value_t = 4.5 * std::f64::consts::PI)]
        t_max: f64,
        #[arg(long, default_value_t = 21.0)]
        height: f64,
    },
    /// Independent uniform points on both sides (the low side uses seed + 1).
    Random {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        dim_high: usize,
        #[arg(long, default_value_t = 2)]
        dim_low: usize,
    },
}

#[derive(Debug, Args)]
struct Inputs {
    /// High-dimensional points, or a distance matrix with `--metric-high precomputed`.
    #[arg(long)]
    high: PathBuf,
    /// Low-dimensional points, or a distance matrix with `--metric-low precomputed`.
    #[arg(long)]
    low: PathBuf,
    /// euclidean, precomputed or geodesic:K
    #[arg(long, default_value = "euclidean", value_parser = parse_metric)]
    metric_high: Metric,
    #[arg(long, default_value = "euclidean", value_parser = parse_metric)]
    metric_low: Metric,
}

#[derive(Debug, Args)]
struct CorankingArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Binary PGM heatmap; zero is white, the largest count black.
    #[arg(long)]
    heatmap: Option<PathBuf>,
    /// Print intrusion/extrusion block counts for this neighborhood size.
    #[arg(long)]
    blocks: Option<usize>,
}

#[derive(Debug, Args)]
struct QnxArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Write `K,Q_NX,LCMC` rows here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print k_max, q_local and q_global.
    #[arg(long)]
    split: bool,
}

#[derive(Debug, Args)]
struct Modes {
    #[arg(long, default_value = "region", value_parser = parse_normalization)]
    normalization: Normalization,
    #[arg(long, default_value = "strict", value_parser = parse_tolerance)]
    tolerance: ToleranceComparison,
}

#[derive(Debug, Args)]
struct QmapArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    modes: Modes,
    /// Number of random mappings averaged into a baseline.
    #[arg(long)]
    baseline: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Map as CSV, rows kappa_s and columns kappa_t.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    heatmap: Option<PathBuf>,
    #[arg(long, requires = "baseline")]
    baseline_csv: Option<PathBuf>,
    /// Map minus baseline as CSV.
    #[arg(long, requires = "baseline")]
    centered_csv: Option<PathBuf>,
    /// Print the mean map value over cells above the baseline.
    #[arg(long, requires = "baseline")]
    scalar: bool,
}

#[derive(Debug, Args)]
struct LocalArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Rank-significance cut-off; defaults to k_max of the Q_NX curve.
    #[arg(long)]
    ks: Option<usize>,
    /// Error-tolerance cut-off.
    #[arg(long, default_value_t = 1)]
    kt: usize,
    #[arg(long, default_value = "strict", value_parser = parse_tolerance)]
    tolerance: ToleranceComparison,
    #[arg(long, default_value = "red_green", value_parser = parse_scheme)]
    scheme: ColorScheme,
    /// Use the one-sided per-point sum instead of the symmetric one.
    #[arg(long)]
    naive: bool,
    /// Write `index,value,r,g,b` rows here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Scatter plot of the (2-D) low-dimensional points.
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_normalization(s: &str) -> Result<Normalization, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_tolerance(s: &str) -> Result<ToleranceComparison, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scheme(s: &str) -> Result<ColorScheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// One side of the mapping, kept as points when it was given as points.
struct Side {
    points: Option<PointSet>,
    distances: DistanceMatrix,
}

fn load_side(path: &Path, metric: Metric) -> coranking::Result<Side> {
    if metric == Metric::Precomputed {
        return Ok(Side { points: None, distances: cio::read_distance_matrix(path)? });
    }
    let points = cio::read_points(path)?;
    let distances = pairwise_distances(&points, metric)?;
    Ok(Side { points: Some(points), distances })
}

struct Loaded {
    low: Side,
    rho: RankMatrix,
    r: RankMatrix,
}

fn load(inputs: &Inputs) -> coranking::Result<Loaded> {
    let high = load_side(&inputs.high, inputs.metric_high)?;
    let low = load_side(&inputs.low, inputs.metric_low)?;
    if high.distances.len() != low.distances.len() {
        return Err(Error::Mismatch(format!(
            "{} has {} points but {} has {}",
            inputs.high.display(),
            high.distances.len(),
            inputs.low.display(),
            low.distances.len()
        )));
    }
    let rho = rank_matrix(&high.distances);
    let r = rank_matrix(&low.distances);
    Ok(Loaded { low, rho, r })
}

fn write_pair(pair: &MappingPair, args: &GenArgs) -> coranking::Result<()> {
    cio::write_matrix_csv(&pair.high, &args.out_high)?;
    cio::write_matrix_csv(&pair.low, &args.out_low)?;
    eprintln!("{}: wrote {} and {}", pair.description, args.out_high.display(), args.out_low.display());
    Ok(())
}

fn run_gen(args: &GenArgs) -> coranking::Result<()> {
    let pair = match args.kind {
        GenKind::Swaps { n } => gen_swapped_row(n)?,
        GenKind::Swissroll { n, seed, t_min, t_max, height } => {
            gen_swiss_roll(n, seed, SwissRollParams { t_min, t_max, height })?
        }
        GenKind::Random { n, seed, dim_high, dim_low } => MappingPair::new(
            gen_random_points(n, dim_high, seed)?,
            gen_random_points(n, dim_low, seed.wrapping_add(1))?,
            format!("random points, {n} in {dim_high}-D and {dim_low}-D, seed {seed}"),
        )?,
    };
    write_pair(&pair, args)
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::Io { path: "<stdout>".into(), source: e }
}

fn run_coranking(args: &CorankingArgs) -> coranking::Result<()> {
    let data = load(&args.inputs)?;
    let q = coranking_matrix(&data.rho, &data.r)?;
    if let Some(path) = &args.csv {
        cio::write_matrix_csv(&q, path)?;
    }
    if let Some(path) = &args.heatmap {
        cio::write_pgm(&q, path)?;
    }
    if let Some(k) = args.blocks {
        let b = block_counts(&q, k)?;
        println!("K={}", b.k);
        println!("preserved={}", b.preserved);
        println!("mild_intrusions={}", b.mild_intrusions);
        println!("mild_extrusions={}", b.mild_extrusions);
        println!("hard_intrusions={}", b.hard_intrusions);
        println!("hard_extrusions={}", b.hard_extrusions);
        println!("outside={}", b.outside);
        println!("outside_diagonal={}", b.outside_diagonal);
    }
    if args.csv.is_none() && args.heatmap.is_none() && args.blocks.is_none() {
        cio::write_matrix_csv_to(&mut std::io::stdout().lock(), &q).map_err(stdout_err)?;
    }
    Ok(())
}

fn run_qnx(args: &QnxArgs) -> coranking::Result<()> {
    let data = load(&args.inputs)?;
    let qnx = qnx_curve(&coranking_matrix(&data.rho, &data.r)?);
    let lcmc = lcmc_curve(&qnx)?;
    let mut table = String::from("K,Q_NX,LCMC\n");
    for (k, (a, b)) in qnx.values().iter().zip(lcmc.values()).enumerate() {
        table.push_str(&format!("{},{a},{b}\n", k + 1));
    }
    match &args.csv {
        Some(path) => std::fs::write(path, table).map_err(|source| Error::Io { path: path.clone(), source })?,
        None => std::io::stdout().lock().write_all(table.as_bytes()).map_err(stdout_err)?,
    }
    if args.split {
        let s = split_summary(&qnx)?;
        println!("k_max={}", s.k_max);
        println!("q_local={}", s.q_local);
        println!("q_global={}", s.q_global);
    }
    Ok(())
}

fn run_qmap(args: &QmapArgs) -> coranking::Result<()> {
    let data = load(&args.inputs)?;
    let Modes { normalization, tolerance } = args.modes;
    let map = quality_map(&min_error_histogram(&data.rho, &data.r)?, normalization, tolerance);
    if let Some(path) = &args.csv {
        cio::write_matrix_csv(&map, path)?;
    }
    if let Some(path) = &args.heatmap {
        cio::write_pgm(&map, path)?;
    }
    if let Some(samples) = args.baseline {
        let spec = BaselineSpec { samples, seed: args.seed };
        let baseline = random_baseline(&data.rho, &data.low.distances, spec, normalization, tolerance)?;
        if let Some(path) = &args.baseline_csv {
            cio::write_matrix_csv(&baseline, path)?;
        }
        if let Some(path) = &args.centered_csv {
            let centered = DenseMatrix { rows: map.size(), cols: map.size(), data: map.centered(&baseline)? };
            cio::write_matrix_csv(&centered, path)?;
        }
        if args.scalar {
            println!("scalar={}", scalar_summary(&map, &baseline)?);
        }
    }
    if args.csv.is_none() && args.heatmap.is_none() && !args.scalar {
        cio::write_matrix_csv_to(&mut std::io::stdout().lock(), &map).map_err(stdout_err)?;
    }
    Ok(())
}

fn run_local(args: &LocalArgs) -> coranking::Result<()> {
    let data = load(&args.inputs)?;
    let kappa_s = match args.ks {
        Some(k) => k,
        None => split_summary(&qnx_curve(&coranking_matrix(&data.rho, &data.r)?))?.k_max,
    };
    let local = if args.naive {
        pointwise_quality_naive(&data.rho, &data.r, kappa_s, args.kt, args.tolerance)?
    } else {
        pointwise_quality(&data.rho, &data.r, kappa_s, args.kt, args.tolerance)?
    };
    let colors = colorize(&local.values, args.scheme);
    if let Some(path) = &args.svg {
        let points = data
            .low
            .points
            .as_ref()
            .ok_or_else(|| Error::Input("--svg needs low-dimensional points, not a distance matrix".into()))?;
        cio::write_svg_scatter(points, &colors, path)?;
    }
    let mut table = String::from("index,value,r,g,b\n");
    for (i, (v, c)) in local.values.iter().zip(&colors).enumerate() {
        table.push_str(&format!("{i},{v},{},{},{}\n", c.0, c.1, c.2));
    }
    match &args.csv {
        Some(path) => std::fs::write(path, table).map_err(|source| Error::Io { path: path.clone(), source })?,
        None if args.svg.is_none() => std::io::stdout().lock().write_all(table.as_bytes()).map_err(stdout_err)?,
        None => {}
    }
    eprintln!("kappa_s={} kappa_t={} tolerance={}", local.kappa_s, local.kappa_t, local.tolerance);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Coranking(args) => run_coranking(args),
        Command::Qnx(args) => run_qnx(args),
        Command::Qmap(args) => run_qmap(args),
        Command::Local(args) => run_local(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
