//! Batch runner for the scenario grid: instances × scenarios × thickening
//! modes × removal strategies × replicas.
//!
//! Seeds are derived from the master seed with [`seed::derive`]:
//!
//! | stream                    | seed                                            |
//! |---------------------------|-------------------------------------------------|
//! | shared degree sequence    | `derive(master, "sequence", [])`                |
//! | per-instance sequence     | `derive(master, "sequence", [i])` (fresh mode)  |
//! | instance `i`              | `derive(master, "instance", [i])`               |
//! | thickening                | `derive(instance, "thicken", [scenario, mode])` |
//! | replica `r`               | `derive(instance, "replica", [r])`              |
//!
//! The instance seed drives the configuration model and rich-set tie breaks;
//! the replica seed drives the removal order. With `reshuffle_attack_ties`
//! off, attacks use the instance seed so every replica shares one tie order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::ClusteringConvention;
use crate::netgen::{configuration_model, powerlaw_degree_sequence, DegreeSequence, GenConfig};
use crate::resilience::{
    average_traces, default_stride, removal_order, run_removal, Strategy, Trace,
};
use crate::richclub::{
    apply_scenario, rich_nodes, DensityTarget, MutationReport, RichSet, ScenarioSpec,
    ThickeningMode, DEFAULT_RICH_FRACTION,
};
use crate::seed;

/// The six core densities of the scenario table; the second is the
/// unmodified network.
pub fn default_scenarios() -> Vec<ScenarioSpec> {
    [
        DensityTarget::Density(0.0),
        DensityTarget::Default,
        DensityTarget::Density(0.25),
        DensityTarget::Density(0.5),
        DensityTarget::Density(0.75),
        DensityTarget::Density(1.0),
    ]
    .into_iter()
    .enumerate()
    .map(|(i, t)| ScenarioSpec::new(format!("s{}", i + 1), t))
    .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub gen: GenConfig,
    pub rich_fraction: f64,
    pub scenarios: Vec<ScenarioSpec>,
    pub modes: Vec<ThickeningMode>,
    pub strategies: Vec<Strategy>,
    pub instances: usize,
    pub replicas: usize,
    /// `None` picks [`default_stride`] for the network size.
    pub stride: Option<usize>,
    pub stop_fraction: f64,
    pub master_seed: Option<u64>,
    pub output_dir: PathBuf,
    /// Worker threads; 0 lets the pool choose.
    pub workers: usize,
    pub fresh_sequence_per_instance: bool,
    pub reshuffle_attack_ties: bool,
    pub clustering: ClusteringConvention,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            gen: GenConfig::default(),
            rich_fraction: DEFAULT_RICH_FRACTION,
            scenarios: default_scenarios(),
            modes: vec![ThickeningMode::Core, ThickeningMode::Periphery],
            strategies: vec![Strategy::Error, Strategy::AttackSimultaneous],
            instances: 10,
            replicas: 10,
            stride: None,
            stop_fraction: 1.0,
            master_seed: None,
            output_dir: PathBuf::from("out"),
            workers: 0,
            fresh_sequence_per_instance: false,
            reshuffle_attack_ties: true,
            clustering: ClusteringConvention::ZeroForLowDegree,
        }
    }
}

/// Keys accepted in config files (and echoed into the manifest).
pub const CONFIG_KEYS: &[&str] = &[
    "n",
    "mean_degree",
    "gamma",
    "k_min",
    "rich_fraction",
    "scenarios",
    "modes",
    "strategies",
    "instances",
    "replicas",
    "stride",
    "stop_fraction",
    "master_seed",
    "output_dir",
    "workers",
    "fresh_sequence_per_instance",
    "reshuffle_attack_ties",
    "clustering_low_degree",
];

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("{key}: cannot parse {value:?}: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Splits `key = value` text into pairs, skipping blanks and `#` comments.
pub fn parse_key_values(text: &str, source_name: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t.split_once('=').ok_or_else(|| Error::Parse {
            path: source_name.to_string(),
            line: idx + 1,
            reason: "expected `key = value`".into(),
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn format_target(t: &DensityTarget) -> String {
    match t {
        DensityTarget::Default => "default".into(),
        DensityTarget::Density(d) => format!("{d}"),
    }
}

impl ExperimentConfig {
    /// Sets one field from its config-file spelling.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n" => self.gen.n = parse_value(key, value)?,
            "mean_degree" => self.gen.target_mean_degree = parse_value(key, value)?,
            "gamma" => self.gen.gamma = parse_value(key, value)?,
            "k_min" => self.gen.k_min = parse_value(key, value)?,
            "rich_fraction" => self.rich_fraction = parse_value(key, value)?,
            "scenarios" => {
                self.scenarios = list(value)
                    .enumerate()
                    .map(|(i, item)| {
                        // optional `label:target`
                        let (label, target) = match item.split_once(':') {
                            Some((l, t)) => (l.trim().to_string(), t.trim()),
                            None => (format!("s{}", i + 1), item),
                        };
                        let target = if target.eq_ignore_ascii_case("default") {
                            DensityTarget::Default
                        } else {
                            DensityTarget::Density(parse_value(key, target)?)
                        };
                        Ok(ScenarioSpec::new(label, target))
                    })
                    .collect::<Result<_>>()?
            }
            "modes" => self.modes = list(value).map(str::parse).collect::<Result<_>>()?,
            "strategies" => {
                self.strategies = list(value).map(str::parse).collect::<Result<_>>()?
            }
            "instances" => self.instances = parse_value(key, value)?,
            "replicas" => self.replicas = parse_value(key, value)?,
            "stride" => {
                self.stride = if value.trim().eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(parse_value(key, value)?)
                }
            }
            "stop_fraction" => self.stop_fraction = parse_value(key, value)?,
            "master_seed" | "seed" => self.master_seed = Some(parse_value(key, value)?),
            "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "workers" => self.workers = parse_value(key, value)?,
            "fresh_sequence_per_instance" => {
                self.fresh_sequence_per_instance = parse_bool(key, value)?
            }
            "reshuffle_attack_ties" => self.reshuffle_attack_ties = parse_bool(key, value)?,
            "clustering_low_degree" => {
                self.clustering = match value.trim() {
                    "zero" => ClusteringConvention::ZeroForLowDegree,
                    "exclude" => ClusteringConvention::ExcludeLowDegree,
                    other => {
                        return Err(Error::Config(format!(
                            "clustering_low_degree: expected `zero` or `exclude`, got {other:?}"
                        )))
                    }
                }
            }
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    pub fn from_text(text: &str, source_name: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (k, v) in parse_key_values(text, source_name)? {
            cfg.set(&k, &v)
                .map_err(|e| Error::Config(format!("{source_name}: {e}")))?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        self.gen.validate()?;
        if self.master_seed.is_none() {
            return Err(Error::Config("master_seed is required".into()));
        }
        if self.instances < 1 || self.replicas < 1 {
            return Err(Error::Config("instances and replicas must be at least 1".into()));
        }
        if self.scenarios.is_empty() || self.modes.is_empty() || self.strategies.is_empty() {
            return Err(Error::Config(
                "scenarios, modes and strategies must be non-empty".into(),
            ));
        }
        for s in &self.scenarios {
            if let Some(d) = s.target_density() {
                if !(0.0..=1.0).contains(&d) {
                    return Err(Error::Config(format!(
                        "scenario {}: target density {d} outside [0, 1]",
                        s.label
                    )));
                }
            }
            if s.label.is_empty() || s.label.contains([',', '/', '\\']) {
                return Err(Error::Config(format!("bad scenario label {:?}", s.label)));
            }
        }
        if self.stride == Some(0) {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if !(self.stop_fraction > 0.0 && self.stop_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "stop_fraction must lie in (0, 1], got {}",
                self.stop_fraction
            )));
        }
        if !(self.rich_fraction > 0.0 && self.rich_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "rich_fraction must lie in (0, 1], got {}",
                self.rich_fraction
            )));
        }
        Ok(())
    }

    pub fn effective_stride(&self) -> usize {
        self.stride.unwrap_or_else(|| default_stride(self.gen.n))
    }

    /// The config as `key = value` lines, readable by [`ExperimentConfig::from_text`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |items: Vec<String>| items.join(",");
        let _ = writeln!(s, "n = {}", self.gen.n);
        let _ = writeln!(s, "mean_degree = {}", self.gen.target_mean_degree);
        let _ = writeln!(s, "gamma = {}", self.gen.gamma);
        let _ = writeln!(s, "k_min = {}", self.gen.k_min);
        let _ = writeln!(s, "rich_fraction = {}", self.rich_fraction);
        let _ = writeln!(
            s,
            "scenarios = {}",
            join(
                self.scenarios
                    .iter()
                    .map(|sc| format!("{}:{}", sc.label, format_target(&sc.target)))
                    .collect()
            )
        );
        let _ = writeln!(s, "modes = {}", join(self.modes.iter().map(|m| m.to_string()).collect()));
        let _ = writeln!(
            s,
            "strategies = {}",
            join(self.strategies.iter().map(|m| m.to_string()).collect())
        );
        let _ = writeln!(s, "instances = {}", self.instances);
        let _ = writeln!(s, "replicas = {}", self.replicas);
        match self.stride {
            Some(st) => {
                let _ = writeln!(s, "stride = {st}");
            }
            None => {
                let _ = writeln!(s, "stride = auto");
            }
        }
        let _ = writeln!(s, "stop_fraction = {}", self.stop_fraction);
        if let Some(seed) = self.master_seed {
            let _ = writeln!(s, "master_seed = {seed}");
        }
        let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        let _ = writeln!(s, "workers = {}", self.workers);
        let _ = writeln!(s, "fresh_sequence_per_instance = {}", self.fresh_sequence_per_instance);
        let _ = writeln!(s, "reshuffle_attack_ties = {}", self.reshuffle_attack_ties);
        let _ = writeln!(
            s,
            "clustering_low_degree = {}",
            match self.clustering {
                ClusteringConvention::ZeroForLowDegree => "zero",
                ClusteringConvention::ExcludeLowDegree => "exclude",
            }
        );
        s
    }
}

/// One generated network with its rich set before any manipulation.
#[derive(Clone, Debug)]
pub struct Instance {
    pub index: usize,
    pub seed: u64,
    pub graph: Graph,
    pub rich: RichSet,
    pub erased_stubs: usize,
}

pub fn sequence_seed(master: u64, instance: Option<usize>) -> u64 {
    match instance {
        None => seed::derive(master, "sequence", &[]),
        Some(i) => seed::derive(master, "sequence", &[i as u64]),
    }
}

pub fn instance_seed(master: u64, index: usize) -> u64 {
    seed::derive(master, "instance", &[index as u64])
}

pub fn replica_seed(instance_seed: u64, replica: usize) -> u64 {
    seed::derive(instance_seed, "replica", &[replica as u64])
}

pub fn thicken_seed(instance_seed: u64, scenario: usize, mode: ThickeningMode) -> u64 {
    seed::derive(instance_seed, "thicken", &[scenario as u64, mode as u64])
}

/// The degree sequence used for `instance` (`None` = the shared sequence).
pub fn degree_sequence_for(cfg: &ExperimentConfig, instance: Option<usize>) -> Result<DegreeSequence> {
    let master = cfg.master_seed.expect("validated");
    powerlaw_degree_sequence(&GenConfig {
        seed: sequence_seed(master, instance),
        ..cfg.gen.clone()
    })
}

/// Realizes the configured instances (one shared degree sequence unless
/// `fresh_sequence_per_instance`) and identifies each rich set.
pub fn build_instances(cfg: &ExperimentConfig) -> Result<Vec<Instance>> {
    cfg.validate()?;
    let master = cfg.master_seed.expect("validated");
    let shared = if cfg.fresh_sequence_per_instance {
        None
    } else {
        Some(degree_sequence_for(cfg, None)?)
    };
    (0..cfg.instances)
        .map(|i| {
            let seq = match &shared {
                Some(s) => s.clone(),
                None => degree_sequence_for(cfg, Some(i))?,
            };
            let seed_i = instance_seed(master, i);
            let real = configuration_model(&seq, seed_i)?;
            let rich = rich_nodes(&real.graph, cfg.rich_fraction, seed_i)?;
            Ok(Instance {
                index: i,
                seed: seed_i,
                graph: real.graph,
                rich,
                erased_stubs: real.erased_stubs,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MutationRecord {
    pub scenario: String,
    pub instance: usize,
    pub report: MutationReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub scenario: String,
    pub mode: ThickeningMode,
    pub strategy: Strategy,
    pub instance_seed: u64,
    pub replica_seed: u64,
    pub file: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRecord {
    pub index: usize,
    pub seed: u64,
    pub rich_size: usize,
    pub internal_links: usize,
    pub default_density: f64,
    pub links: usize,
    pub erased_stubs: usize,
}

#[derive(Clone, Debug)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub version: String,
    pub instances: Vec<InstanceRecord>,
    pub mutations: Vec<MutationRecord>,
    pub traces: Vec<TraceRecord>,
    pub averaged_files: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# richclub-sim run manifest");
        let _ = writeln!(s, "version = {}", self.version);
        let _ = writeln!(s, "wall_clock_seconds = {:.3}", self.wall_clock_seconds);
        let _ = writeln!(s, "\n# config");
        s.push_str(&self.config.to_text());
        let _ = writeln!(s, "\n# instances: index, seed, rich size, internal links, default density, links, erased stubs");
        for r in &self.instances {
            let _ = writeln!(
                s,
                "instance = {},{},{},{},{},{},{}",
                r.index, r.seed, r.rich_size, r.internal_links, r.default_density, r.links, r.erased_stubs
            );
        }
        let _ = writeln!(s, "\n# mutations: scenario, mode, instance, budget, added, removed, achieved density");
        for m in &self.mutations {
            let _ = writeln!(
                s,
                "mutation = {},{},{},{},{},{},{}",
                m.scenario,
                m.report.mode,
                m.instance,
                m.report.budget,
                m.report.added,
                m.report.removed,
                m.report.achieved_density
            );
        }
        let _ = writeln!(s, "\n# traces: scenario, mode, strategy, instance seed, replica seed, file");
        for t in &self.traces {
            let _ = writeln!(
                s,
                "trace = {},{},{},{},{},{}",
                t.scenario, t.mode, t.strategy, t.instance_seed, t.replica_seed, t.file
            );
        }
        for f in &self.averaged_files {
            let _ = writeln!(s, "averaged = {f}");
        }
        s
    }

    /// Mean signed budget per scenario label and mode across instances.
    pub fn mean_budgets(&self) -> BTreeMap<(String, ThickeningMode), f64> {
        let mut acc: BTreeMap<(String, ThickeningMode), (i64, usize)> = BTreeMap::new();
        for m in &self.mutations {
            let e = acc.entry((m.scenario.clone(), m.report.mode)).or_default();
            e.0 += m.report.budget;
            e.1 += 1;
        }
        acc.into_iter()
            .map(|(k, (sum, c))| (k, sum as f64 / c as f64))
            .collect()
    }
}

/// File stem for a raw trace.
pub fn raw_trace_name(scenario: &str, mode: ThickeningMode, strategy: Strategy, inst: usize, rep: usize) -> String {
    format!("{scenario}_{mode}_{strategy}_i{inst}_r{rep}.csv")
}

pub fn averaged_trace_name(scenario: &str, mode: ThickeningMode, strategy: Strategy) -> String {
    format!("{scenario}_{mode}_{strategy}.csv")
}

struct Job<'a> {
    instance: &'a Instance,
    scenario: usize,
    mode: ThickeningMode,
    graph: &'a Graph,
    strategy: Strategy,
    replica: usize,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Runs the whole grid and writes `raw/`, `avg/` and `manifest.txt` under
/// the output directory. CSV bytes depend only on the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunManifest> {
    cfg.validate()?;
    let started = Instant::now();
    let raw_dir = cfg.output_dir.join("raw");
    let avg_dir = cfg.output_dir.join("avg");
    for d in [&cfg.output_dir, &raw_dir, &avg_dir] {
        std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_in_pool(cfg, &raw_dir, &avg_dir, started))
}

fn run_in_pool(
    cfg: &ExperimentConfig,
    raw_dir: &Path,
    avg_dir: &Path,
    started: Instant,
) -> Result<RunManifest> {
    let instances = build_instances(cfg)?;
    let mut mutations = Vec::new();
    // variants[instance][scenario][mode]
    let mut variants: Vec<Vec<Vec<Graph>>> = Vec::with_capacity(instances.len());
    for inst in &instances {
        let mut per_scenario = Vec::with_capacity(cfg.scenarios.len());
        for (si, sc) in cfg.scenarios.iter().enumerate() {
            let mut per_mode = Vec::with_capacity(cfg.modes.len());
            for &mode in &cfg.modes {
                let mut g = inst.graph.clone();
                let report = apply_scenario(&mut g, &inst.rich, sc, mode, thicken_seed(inst.seed, si, mode))?;
                mutations.push(MutationRecord {
                    scenario: sc.label.clone(),
                    instance: inst.index,
                    report,
                });
                per_mode.push(g);
            }
            per_scenario.push(per_mode);
        }
        variants.push(per_scenario);
    }

    let mut jobs = Vec::new();
    for (inst, per_scenario) in instances.iter().zip(&variants) {
        for (si, per_mode) in per_scenario.iter().enumerate() {
            for (graph, &mode) in per_mode.iter().zip(&cfg.modes) {
                for &strategy in &cfg.strategies {
                    for replica in 0..cfg.replicas {
                        jobs.push(Job {
                            instance: inst,
                            scenario: si,
                            mode,
                            graph,
                            strategy,
                            replica,
                        });
                    }
                }
            }
        }
    }

    let stride = cfg.effective_stride();
    let traces: Vec<Trace> = jobs
        .par_iter()
        .map(|job| {
            let rep_seed = replica_seed(job.instance.seed, job.replica);
            let order_seed = match job.strategy {
                Strategy::AttackSimultaneous if !cfg.reshuffle_attack_ties => job.instance.seed,
                _ => rep_seed,
            };
            let plan = removal_order(job.graph, job.strategy, order_seed)?
                .with_stride(stride)
                .with_stop_fraction(cfg.stop_fraction);
            let mut trace = run_removal(job.graph, &plan, cfg.clustering)?;
            trace.meta.scenario = cfg.scenarios[job.scenario].label.clone();
            trace.meta.mode = Some(job.mode);
            trace.meta.instance_seeds = vec![job.instance.seed];
            trace.meta.replica_seeds = vec![rep_seed];
            Ok(trace)
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(traces.len());
    let mut groups: BTreeMap<(usize, ThickeningMode, Strategy), Vec<&Trace>> = BTreeMap::new();
    for (job, trace) in jobs.iter().zip(&traces) {
        let label = &cfg.scenarios[job.scenario].label;
        let name = raw_trace_name(label, job.mode, job.strategy, job.instance.index, job.replica);
        write_file(&raw_dir.join(&name), &trace.to_csv())?;
        records.push(TraceRecord {
            scenario: label.clone(),
            mode: job.mode,
            strategy: job.strategy,
            instance_seed: job.instance.seed,
            replica_seed: trace.meta.replica_seeds[0],
            file: format!("raw/{name}"),
        });
        groups
            .entry((job.scenario, job.mode, job.strategy))
            .or_default()
            .push(trace);
    }

    let mut averaged_files = Vec::new();
    for ((si, mode, strategy), members) in &groups {
        let owned: Vec<Trace> = members.iter().map(|t| (*t).clone()).collect();
        let avg = average_traces(&owned)?;
        let name = averaged_trace_name(&cfg.scenarios[*si].label, *mode, *strategy);
        write_file(&avg_dir.join(&name), &avg.to_csv())?;
        averaged_files.push(format!("avg/{name}"));
    }

    let manifest = RunManifest {
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        instances: instances
            .iter()
            .map(|inst| InstanceRecord {
                index: inst.index,
                seed: inst.seed,
                rich_size: inst.rich.len(),
                internal_links: inst.rich.internal_links,
                default_density: inst.rich.density(),
                links: inst.graph.link_count(),
                erased_stubs: inst.erased_stubs,
            })
            .collect(),
        mutations,
        traces: records,
        averaged_files,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    write_file(&cfg.output_dir.join("manifest.txt"), &manifest.to_text())?;
    Ok(manifest)
}
