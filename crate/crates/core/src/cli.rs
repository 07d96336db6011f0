//! Command-line front end shared by the `richclub-sim` binary and tests.
//!
//! Every subcommand reads an optional `--config FILE` of `key = value` lines
//! (the same keys as [`ExperimentConfig`]); explicit flags override it.
//! Exit statuses: 0 success, 1 usage error, 2 runtime failure.

use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::charts::emit_charts;
use crate::error::{Error, Result};
use crate::experiment::{
    build_instances, degree_sequence_for, instance_seed, run_experiment, ExperimentConfig,
};
use crate::graph::Graph;
use crate::metrics::snapshot;
use crate::netgen::configuration_model;
use crate::resilience::{format_sig6, removal_order, run_removal, Strategy};
use crate::richclub::{apply_scenario, rich_nodes, DensityTarget, RichSet, ScenarioSpec, ThickeningMode};
use crate::seed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "richclub-sim", version, about = "Rich-club manipulation and node-removal resilience")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a power-law degree sequence and realize network instances from it.
    Generate(GenerateArgs),
    /// Retarget the core density (or spend the equivalent budget in the periphery).
    Thicken(ThickenArgs),
    /// Print diameter, APL, efficiency, clustering and degree variance.
    Measure(MeasureArgs),
    /// Single simultaneous degree-targeted attack trace.
    Attack(RemovalArgs),
    /// Single random-failure trace.
    Error(RemovalArgs),
    /// Run the full scenario × mode × strategy grid.
    ScenarioRun(ScenarioRunArgs),
    /// Render SVG charts from averaged trace CSVs.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed (required for stochastic commands unless set in the config).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Default)]
struct GenFlags {
    /// Number of nodes.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    mean_degree: Option<f64>,
    /// Power-law exponent of the degree distribution.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    k_min: Option<usize>,
    /// Share of nodes (by degree) forming the rich set.
    #[arg(long)]
    rich_fraction: Option<f64>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    gen: GenFlags,
    #[arg(long)]
    instances: Option<usize>,
    /// Directory receiving `degree_sequence.txt` and `instance_<i>.edges`.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ThickenArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    gen: GenFlags,
    /// Edge list to modify; without it instance 0 of the configured generator is used.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(long, default_value = "core")]
    mode: ThickeningMode,
    /// Core density target in [0, 1], or `default` to leave the network untouched.
    #[arg(long)]
    target_density: String,
    /// Write the modified edge list here.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the mutation report (key = value text) here.
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Edge list to measure.
    input: PathBuf,
    /// Treat nodes of degree < 2 as absent from the clustering average.
    #[arg(long)]
    exclude_low_degree: bool,
}

#[derive(Args, Debug)]
struct RemovalArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    gen: GenFlags,
    /// Edge list to degrade; without it instance 0 of the configured generator is used.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Measure every this many removals.
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    stop_fraction: Option<f64>,
    /// Scenario label written into the CSV.
    #[arg(long, default_value = "custom")]
    label: String,
    /// CSV destination; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScenarioRunArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    gen: GenFlags,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    stop_fraction: Option<f64>,
    /// Worker threads (0 = automatic).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Run directory (or directory of averaged CSVs).
    #[arg(long, value_name = "DIR")]
    input: PathBuf,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.master_seed = Some(s);
    }
    Ok(cfg)
}

fn apply_gen(cfg: &mut ExperimentConfig, g: &GenFlags) {
    if let Some(v) = g.n {
        cfg.gen.n = v;
    }
    if let Some(v) = g.mean_degree {
        cfg.gen.target_mean_degree = v;
    }
    if let Some(v) = g.gamma {
        cfg.gen.gamma = v;
    }
    if let Some(v) = g.k_min {
        cfg.gen.k_min = v;
    }
    if let Some(v) = g.rich_fraction {
        cfg.rich_fraction = v;
    }
}

fn require_seed(cfg: &ExperimentConfig) -> Result<u64> {
    cfg.master_seed
        .ok_or_else(|| Error::Config("--seed is required (or set master_seed in --config)".into()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Graph::read_edge_list(BufReader::new(f), &path.display().to_string())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// The graph from `--input`, or instance 0 of the configured generator.
fn input_or_instance(input: &Option<PathBuf>, cfg: &ExperimentConfig) -> Result<(Graph, u64)> {
    let master = require_seed(cfg)?;
    match input {
        Some(path) => Ok((read_graph(path)?, master)),
        None => {
            let one = ExperimentConfig {
                instances: 1,
                ..cfg.clone()
            };
            let inst = build_instances(&one)?.remove(0);
            Ok((inst.graph, inst.seed))
        }
    }
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    apply_gen(&mut cfg, &a.gen);
    if let Some(k) = a.instances {
        cfg.instances = k;
    }
    let master = require_seed(&cfg)?;
    cfg.validate()?;
    let shared = degree_sequence_for(&cfg, None)?;
    write_text(&a.out.join("degree_sequence.txt"), &shared.to_text())?;
    for i in 0..cfg.instances {
        let seq = if cfg.fresh_sequence_per_instance {
            degree_sequence_for(&cfg, Some(i))?
        } else {
            shared.clone()
        };
        let inst_seed = instance_seed(master, i);
        let real = configuration_model(&seq, inst_seed)?;
        let g = &real.graph;
        write_text(&a.out.join(format!("instance_{i}.edges")), &g.to_edge_list())?;
        let core = match rich_nodes(g, cfg.rich_fraction, inst_seed) {
            Ok(rs) => format!(" rich_size={} core_density={}", rs.len(), format_sig6(rs.density())),
            Err(_) => String::new(),
        };
        writeln_out(
            out,
            format_args!(
                "instance {i}: seed={inst_seed} links={} mean_degree={} erased_stubs={}{core}",
                g.link_count(),
                format_sig6(2.0 * g.link_count() as f64 / g.n() as f64),
                real.erased_stubs,
            ),
        )?;
    }
    writeln_out(
        out,
        format_args!("degree sequence: n={} mean={}", shared.len(), format_sig6(shared.mean())),
    )
}

fn writeln_out(out: &mut dyn Write, args: std::fmt::Arguments<'_>) -> Result<()> {
    writeln!(out, "{args}").map_err(|e| Error::io("<stdout>", e))
}

fn parse_target(raw: &str) -> Result<DensityTarget> {
    if raw.eq_ignore_ascii_case("default") {
        return Ok(DensityTarget::Default);
    }
    raw.parse::<f64>()
        .map(DensityTarget::Density)
        .map_err(|_| Error::Config(format!("--target-density: expected a number or `default`, got {raw:?}")))
}

fn cmd_thicken(a: &ThickenArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    apply_gen(&mut cfg, &a.gen);
    let target = parse_target(&a.target_density)?;
    let (mut g, base_seed) = input_or_instance(&a.input, &cfg)?;
    let rich: RichSet = rich_nodes(&g, cfg.rich_fraction, base_seed)?;
    let spec = ScenarioSpec::new("cli", target);
    let before = rich.density();
    let report = apply_scenario(
        &mut g,
        &rich,
        &spec,
        a.mode,
        seed::derive(base_seed, "cli-thicken", &[a.mode as u64]),
    )?;
    let text = format!(
        "mode = {}\nrich_size = {}\ninitial_density = {}\nbudget = {}\nlinks_added = {}\nlinks_removed = {}\nachieved_density = {}\nlinks = {}\n",
        report.mode,
        rich.len(),
        format_sig6(before),
        report.budget,
        report.added,
        report.removed,
        format_sig6(report.achieved_density),
        g.link_count()
    );
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    if let Some(path) = &a.report {
        write_text(path, &text)?;
    }
    if let Some(path) = &a.out {
        write_text(path, &g.to_edge_list())?;
    }
    Ok(())
}

fn show(x: Option<f64>) -> String {
    x.map(format_sig6).unwrap_or_else(|| "NA".into())
}

fn cmd_measure(a: &MeasureArgs, out: &mut dyn Write) -> Result<()> {
    let g = read_graph(&a.input)?;
    let conv = if a.exclude_low_degree {
        crate::metrics::ClusteringConvention::ExcludeLowDegree
    } else {
        crate::metrics::ClusteringConvention::ZeroForLowDegree
    };
    let m = snapshot(&g, conv);
    let text = format!(
        "N={}\nlinks={}\nD={}\nAPL={}\nE={}\nC={}\nvar={}\nreachable_pair_fraction={}\n",
        m.alive_n,
        g.link_count(),
        show(m.diameter),
        show(m.apl),
        show(m.efficiency),
        show(m.clustering),
        show(m.degree_variance),
        show(m.reachable_pair_fraction),
    );
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn cmd_removal(a: &RemovalArgs, strategy: Strategy, out: &mut dyn Write) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    apply_gen(&mut cfg, &a.gen);
    if let Some(s) = a.stride {
        cfg.stride = Some(s);
    }
    if let Some(f) = a.stop_fraction {
        cfg.stop_fraction = f;
    }
    let (g, base_seed) = input_or_instance(&a.input, &cfg)?;
    let stride = cfg
        .stride
        .unwrap_or_else(|| crate::resilience::default_stride(g.alive_count()));
    let plan = removal_order(&g, strategy, base_seed)?
        .with_stride(stride)
        .with_stop_fraction(cfg.stop_fraction);
    let mut trace = run_removal(&g, &plan, cfg.clustering)?;
    trace.meta.scenario = a.label.clone();
    trace.meta.replica_seeds = vec![base_seed];
    let csv = trace.to_csv();
    match &a.out {
        Some(path) => write_text(path, &csv),
        None => out
            .write_all(csv.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn cmd_scenario_run(a: &ScenarioRunArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    apply_gen(&mut cfg, &a.gen);
    if let Some(v) = a.instances {
        cfg.instances = v;
    }
    if let Some(v) = a.replicas {
        cfg.replicas = v;
    }
    if let Some(v) = a.stride {
        cfg.stride = Some(v);
    }
    if let Some(v) = a.stop_fraction {
        cfg.stop_fraction = v;
    }
    if let Some(v) = a.workers {
        cfg.workers = v;
    }
    if let Some(v) = &a.output_dir {
        cfg.output_dir = v.clone();
    }
    require_seed(&cfg)?;
    let manifest = run_experiment(&cfg)?;
    writeln_out(
        out,
        format_args!(
            "{} raw traces, {} averaged traces written to {}",
            manifest.traces.len(),
            manifest.averaged_files.len(),
            cfg.output_dir.display()
        ),
    )?;
    for ((label, mode), budget) in manifest.mean_budgets() {
        writeln_out(out, format_args!("mean budget {label} {mode}: {}", format_sig6(budget)))?;
    }
    Ok(())
}

fn cmd_plot(a: &PlotArgs, out: &mut dyn Write) -> Result<()> {
    for path in emit_charts(&a.input, &a.out)? {
        writeln_out(out, format_args!("{}", path.display()))?;
    }
    Ok(())
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn cli_dispatch<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a, stdout),
        Command::Thicken(a) => cmd_thicken(a, stdout),
        Command::Measure(a) => cmd_measure(a, stdout),
        Command::Attack(a) => cmd_removal(a, Strategy::AttackSimultaneous, stdout),
        Command::Error(a) => cmd_removal(a, Strategy::Error, stdout),
        Command::ScenarioRun(a) => cmd_scenario_run(a, stdout),
        Command::Plot(a) => cmd_plot(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_RUNTIME
        }
    }
}
