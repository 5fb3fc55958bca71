use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cadepth::catalog::{self, Composition, CompositionReport};
use cadepth::config::{Aggregation, GroundTruthFill, RunConfig};
use cadepth::{evaluate_dataset, io, rank_scenes, Error, EvaluationReport, Result};
use cadepth_core::{densify, fit_scale_shift_many, DensifyMethod, FeatureKind};
use clap::{Parser, Subcommand};

/// Class-aware evaluation of metric depth predictions.
#[derive(Parser)]
#[command(name = "cadepth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one or more models on a dataset.
    Eval(EvalArgs),
    /// List scenes of a report by divergence from the global MAE.
    Rank {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Frames per class for a catalog of training datasets.
    AnalyzeDatasets {
        #[arg(long)]
        catalog: PathBuf,
        /// Write the full composition as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Accept an additional top-level class name. Repeatable.
        #[arg(long = "extra-class")]
        extra_class: Vec<String>,
    },
    /// Fit `gt = scale * pred + shift` over one or more frames.
    FitAffine {
        #[arg(long, required = true, num_args = 1..)]
        pred: Vec<PathBuf>,
        #[arg(long, required = true, num_args = 1..)]
        gt: Vec<PathBuf>,
        /// Densify the ground truth before fitting.
        #[arg(long, default_value = "none", value_parser = parse_fill)]
        densify: GroundTruthFill,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fill a sparse depth map.
    Densify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "linear", value_parser = parse_method)]
        method: DensifyMethod,
    },
}

#[derive(clap::Args)]
struct EvalArgs {
    /// TOML run configuration; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    root: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    /// per-image-mean or pixel-pooled.
    #[arg(long, value_parser = parse_agg)]
    agg: Option<Aggregation>,
    /// Directory receiving report.json and scenes.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// none, nearest or linear.
    #[arg(long, value_parser = parse_fill)]
    densify: Option<GroundTruthFill>,
    /// edge, corner or union.
    #[arg(long, value_parser = parse_kind)]
    feature_kind: Option<FeatureKind>,
    /// Restrict the class term to these super-classes.
    #[arg(long, value_delimiter = ',')]
    focus: Option<Vec<String>>,
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_agg(s: &str) -> std::result::Result<Aggregation, String> {
    Aggregation::parse(s).ok_or_else(|| format!("expected per-image-mean or pixel-pooled, got `{s}`"))
}

fn parse_fill(s: &str) -> std::result::Result<GroundTruthFill, String> {
    GroundTruthFill::parse(s).ok_or_else(|| format!("expected none, nearest or linear, got `{s}`"))
}

fn parse_method(s: &str) -> std::result::Result<DensifyMethod, String> {
    match s {
        "nearest" => Ok(DensifyMethod::Nearest),
        "linear" => Ok(DensifyMethod::Linear),
        _ => Err(format!("expected nearest or linear, got `{s}`")),
    }
}

fn parse_kind(s: &str) -> std::result::Result<FeatureKind, String> {
    match s {
        "edge" => Ok(FeatureKind::Edge),
        "corner" => Ok(FeatureKind::Corner),
        "union" => Ok(FeatureKind::Union),
        _ => Err(format!("expected edge, corner or union, got `{s}`")),
    }
}

fn build_config(args: EvalArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::read(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = args.root {
        cfg.root = v;
    }
    if let Some(v) = args.models {
        cfg.models = v;
    }
    if let Some(v) = args.weights {
        cfg.weights = Some(v);
    }
    if let Some(v) = args.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = args.agg {
        cfg.aggregation = v;
    }
    if let Some(v) = args.out {
        cfg.out = Some(v);
    }
    if let Some(v) = args.densify {
        cfg.densify = v;
    }
    if let Some(v) = args.feature_kind {
        cfg.feature_kind = v;
    }
    if let Some(v) = args.focus {
        cfg.focus = Some(v);
    }
    if let Some(v) = args.workers {
        cfg.workers = v;
    }
    Ok(cfg)
}

fn eval(args: EvalArgs) -> Result<ExitCode> {
    let cfg = build_config(args)?;
    let report = evaluate_dataset(&cfg)?;
    if let Some(out) = &cfg.out {
        fs::create_dir_all(out).map_err(|e| Error::Config(format!("{}: {e}", out.display())))?;
        report.write_json(&out.join("report.json"))?;
        report.write_scenes_csv(&out.join("scenes.csv"))?;
    }
    print!("{}", report.render_table());
    for m in &report.models {
        for f in &m.failures {
            eprintln!("{}: {}: {}", m.name, f.scene, f.reason);
        }
    }
    Ok(if report.failure_count() > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn rank(report: &Path, model: &str, top: usize) -> Result<ExitCode> {
    let report = EvaluationReport::read(report)?;
    println!(
        "{:<40} {:>12} {:>12} {:>12}",
        "scene", "divergence", "combined", "e_global"
    );
    for r in rank_scenes(&report, model)?.iter().take(top) {
        println!(
            "{:<40} {:>12.4} {:>12.4} {:>12.4}",
            r.scene, r.divergence, r.combined, r.e_global
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn print_composition(title: &str, c: &Composition) {
    println!("{title}: {} datasets, {} frames", c.datasets.len(), c.total_frames);
    for row in &c.top_level {
        println!("  {:<12} {:>14.1} {:>7.2}%", row.class, row.frames, 100.0 * row.share);
        for sub in c
            .classes
            .iter()
            .filter(|s| s.class != row.class && catalog::top_level(&s.class) == row.class)
        {
            println!("    {:<10} {:>14.1} {:>7.2}%", sub.class, sub.frames, 100.0 * sub.share);
        }
    }
}

fn analyze(path: &Path, json: Option<&Path>, extra: &[String]) -> Result<ExitCode> {
    let cat = catalog::read_catalog(path, extra)?;
    let report: CompositionReport = catalog::analyze(&cat)?;
    print_composition("all", &report.overall);
    for (model, c) in &report.models {
        println!();
        print_composition(model, c);
    }
    if let Some(out) = json {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        fs::write(out, text).map_err(|e| Error::Config(format!("{}: {e}", out.display())))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn fit_affine(preds: &[PathBuf], gts: &[PathBuf], fill: GroundTruthFill, out: Option<&Path>) -> Result<ExitCode> {
    if preds.len() != gts.len() {
        return Err(Error::Config("--pred and --gt need the same number of files".into()));
    }
    let mut pairs = Vec::with_capacity(preds.len());
    for (p, g) in preds.iter().zip(gts) {
        let gt = io::read_depth(g)?;
        let gt = match fill.method() {
            Some(m) => densify(&gt, m)?,
            None => gt,
        };
        pairs.push((io::read_depth(p)?, gt));
    }
    let refs: Vec<_> = pairs.iter().map(|(p, g)| (p, g)).collect();
    let fit = fit_scale_shift_many(&refs)?;
    let mut text = serde_json::to_string_pretty(&fit)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, &text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval(args) => eval(args),
        Command::Rank { report, model, top } => rank(&report, &model, top),
        Command::AnalyzeDatasets {
            catalog,
            json,
            extra_class,
        } => analyze(&catalog, json.as_deref(), &extra_class),
        Command::FitAffine { pred, gt, densify, out } => fit_affine(&pred, &gt, densify, out.as_deref()),
        Command::Densify { input, output, method } => {
            let sparse = io::read_depth(&input)?;
            io::write_depth(&output, &densify(&sparse, method)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
