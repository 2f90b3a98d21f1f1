mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gallery_core::bench::{generate, run_batch, Class, GenSpec};
use gallery_core::engine::{self, CutSet, Mode, Reason, RunRecord, SolveConfig};
use gallery_core::facets::{facet_report, facet_report_with_circulant};
use gallery_core::geom::{parse_instance, write_polygon, Instance, Polygon};
use gallery_core::lp::{solve_lp, Arithmetic, LpStatus};
use gallery_core::model::{Model, PointSet};
use gallery_core::separation::{separate_ec, separate_sc};
use gallery_core::Rational;
use num_traits::Zero;

use render::{render_svg, Scene};

#[derive(Parser)]
#[command(name = "gallery", version, about = "Minimum guard covers for polygons with holes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write its run record.
    Solve(SolveArgs),
    /// Write a random instance of one of the benchmark classes.
    Generate(GenerateArgs),
    /// Report facet properties of an instance's covering model.
    Verify(VerifyArgs),
    /// Draw a run record over its instance as SVG.
    Render(RenderArgs),
    /// Solve generated instances under several configurations and report
    /// solved fractions, gaps and gap quartiles over time.
    Batch(BatchArgs),
}

#[derive(Args, Clone)]
struct EngineArgs {
    #[arg(long, default_value = "lp")]
    mode: Mode,
    #[arg(long, default_value = "sc3+ec")]
    cuts: CutSet,
    /// Seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long, default_value = "exact")]
    arithmetic: Arithmetic,
    /// Check the optimality certificate of every exact LP solve.
    #[arg(long)]
    check_duality: bool,
}

impl EngineArgs {
    fn config(&self) -> SolveConfig {
        SolveConfig {
            mode: self.mode,
            cuts: self.cuts,
            time_limit: self.time_limit,
            arithmetic: self.arithmetic,
            check_duality: self.check_duality,
            ..SolveConfig::default()
        }
    }
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct SourceArgs {
    /// Instance file in the polygon text format.
    #[arg(group = "source")]
    input: Option<PathBuf>,
    /// Generate the instance instead of reading it.
    #[arg(long, group = "source", requires = "size")]
    class: Option<Class>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Vertex count for `--class`.
    #[arg(long)]
    size: Option<usize>,
    /// Seed for `--class`.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    engine: EngineArgs,
    /// Run record destination; printed to stdout when absent.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    class: Class,
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Destination; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    /// Separate cuts on the model and check every row and cut.
    #[arg(long)]
    facets: bool,
    /// Test whether the designated guards and witnesses are full circulant.
    #[arg(long)]
    full_circulant: bool,
    /// Skip the exhaustive enumeration oracle.
    #[arg(long)]
    no_oracle: bool,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    record: PathBuf,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    /// Shade visibility regions by guard value.
    #[arg(long)]
    coverage: bool,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long = "class", required = true)]
    classes: Vec<Class>,
    #[arg(long = "size", required = true)]
    sizes: Vec<usize>,
    /// Instances per class and size, seeded 1, 2, ...
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value = "lp")]
    mode: Mode,
    /// Cut sets to compare; repeat the flag for several.
    #[arg(long = "cuts", default_values = ["none", "sc3+ec"])]
    cuts: Vec<CutSet>,
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long, default_value = "exact")]
    arithmetic: Arithmetic,
    /// Per-instance rows.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Summary and gap quartile series.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Sample times in the quartile series.
    #[arg(long, default_value_t = 20)]
    samples: usize,
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("in {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    let (name, poly) = match (&args.source.input, args.source.class) {
        (Some(path), _) => (path.display().to_string(), read_instance(path)?.polygon),
        (None, Some(class)) => {
            let size = args.size.context("--class needs --size")?;
            let poly = generate(&GenSpec::new(class, size, args.seed))?;
            (format!("{class}-{size}-{}", args.seed), poly)
        }
        (None, None) => bail!("no instance given"),
    };
    let cfg = args.engine.config();
    let solve = engine::solve(&poly, &cfg)?;
    let record = RunRecord::new(name, &cfg, &solve);
    let r = &record.result;
    log::info!(
        "lb {} ub {:?} after {:.3}s ({} guards, {} witnesses, {} cuts)",
        r.lb,
        r.ub,
        r.time_s,
        r.num_guards,
        r.num_witnesses,
        r.num_cuts
    );
    if let Some(path) = &args.svg {
        let scene = Scene::from_record(&record, &poly)?;
        write_or_print(Some(path), &render_svg(&poly, &scene)?)?;
    }
    write_or_print(args.json.as_deref(), &(record.to_json() + "\n"))?;
    Ok(match r.reason {
        Reason::Optimal => ExitCode::SUCCESS,
        Reason::TimeLimit => ExitCode::from(2),
        Reason::Stalled => ExitCode::from(3),
    })
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode> {
    let poly = generate(&GenSpec::new(args.class, args.size, args.seed))?;
    write_or_print(args.output.as_deref(), &write_polygon(&poly))?;
    Ok(ExitCode::SUCCESS)
}

/// Adds cuts separated from successive LP optima until none is violated.
fn separate_all(model: &mut Model, cfg: &SolveConfig) -> Result<()> {
    let tol = Rational::zero();
    for _ in 0..20 {
        let sol = solve_lp(&model.lp_model()?, Arithmetic::Exact)?;
        if sol.status != LpStatus::Optimal {
            bail!("covering LP is {:?}", sol.status);
        }
        let mut cuts = Vec::new();
        if let Some(k) = cfg.cuts.sc_size() {
            cuts.extend(separate_sc(model, &sol.primal, k, &tol).new_cuts);
        }
        if cfg.cuts.ec() {
            cuts.extend(separate_ec(model, &sol.primal, &tol)?.new_cuts);
        }
        let mut added = false;
        for c in cuts {
            added |= model.add_cut(c);
        }
        if !added {
            break;
        }
    }
    Ok(())
}

fn verify_model(inst: Instance, cfg: &SolveConfig) -> Result<Model> {
    if inst.guards.is_empty() != inst.witnesses.is_empty() {
        bail!("an instance must list both guards and witnesses, or neither");
    }
    if inst.guards.is_empty() {
        return Ok(engine::solve(&inst.polygon, cfg)?.state.model);
    }
    Ok(Model::with_sets(
        inst.polygon,
        PointSet::from_points(inst.guards),
        PointSet::from_points(inst.witnesses),
    )?)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let inst = read_instance(&args.input)?;
    let explicit = !inst.guards.is_empty();
    let cfg = args.engine.config();
    let mut model = verify_model(inst, &cfg)?;
    if args.facets && explicit {
        separate_all(&mut model, &cfg)?;
    }
    let oracle = !args.no_oracle;
    let report = if args.full_circulant {
        facet_report_with_circulant(&model, oracle)?
    } else {
        facet_report(&model, oracle)
    };
    let json = serde_json::to_string_pretty(&report)? + "\n";
    write_or_print(args.json.as_deref(), &json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_render(args: &RenderArgs) -> Result<ExitCode> {
    let poly: Polygon = read_instance(&args.instance)?.polygon;
    let text = fs::read_to_string(&args.record).with_context(|| format!("reading {}", args.record.display()))?;
    let record = RunRecord::from_json(&text).with_context(|| format!("in {}", args.record.display()))?;
    let mut scene = Scene::from_record(&record, &poly)?;
    scene.coverage = args.coverage;
    write_or_print(Some(&args.svg), &render_svg(&poly, &scene)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_batch(args: &BatchArgs) -> Result<ExitCode> {
    let mut specs = Vec::new();
    for &class in &args.classes {
        for &size in &args.sizes {
            specs.extend((1..=args.seeds).map(|seed| GenSpec::new(class, size, seed)));
        }
    }
    let configs: Vec<SolveConfig> = args
        .cuts
        .iter()
        .map(|&cuts| SolveConfig {
            mode: args.mode,
            cuts,
            time_limit: args.time_limit,
            arithmetic: args.arithmetic,
            ..SolveConfig::default()
        })
        .collect();
    let batch = run_batch(&specs, &configs);
    if let Some(path) = &args.csv {
        write_or_print(Some(path), &batch.to_csv())?;
    }
    let summary = batch.summary();
    if let Some(path) = &args.json {
        let doc = serde_json::json!({
            "summary": summary,
            "series": batch.series(args.time_limit, args.samples),
        });
        write_or_print(Some(path), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }
    println!("{:<12} {:>5} {:<10} {:>9} {:>8} {:>10}", "class", "size", "config", "instances", "solved", "median gap");
    for s in &summary {
        let gap = s.median_gap.map_or("-".to_string(), |g| format!("{:.1}%", 100.0 * g));
        println!(
            "{:<12} {:>5} {:<10} {:>9} {:>7.0}% {:>10}",
            s.class.to_string(),
            s.size,
            s.config,
            s.instances,
            s.solved_percent,
            gap
        );
    }
    let failed: Vec<&str> = batch.rows.iter().filter_map(|r| r.error.as_deref()).collect();
    if !failed.is_empty() {
        bail!("{} solves failed, first: {}", failed.len(), failed[0]);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GALLERY_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Render(a) => cmd_render(a),
        Command::Batch(a) => cmd_batch(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::FAILURE
    })
}
