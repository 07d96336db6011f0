//! Scale-free network resilience under rich-club manipulation.
//!
//! The crate generates power-law networks with the configuration model,
//! rewires the links among the highest-degree nodes (core thickening) or
//! spends the same link budget elsewhere (periphery thickening), then
//! removes nodes at random or by initial degree and tracks diameter,
//! average path length, efficiency, clustering and degree variance.
//!
//! Runnable walkthroughs live in `examples/`; the `richclub-sim` binary
//! wraps the same API for batch use.

pub mod charts;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod netgen;
pub mod resilience;
pub mod richclub;
pub mod seed;

pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, RunManifest};
pub use graph::{DistanceRow, Graph, NodeId, Subgraph, UNREACHABLE};
pub use metrics::{ClusteringConvention, MetricVector};
pub use netgen::{DegreeSequence, GenConfig};
pub use richclub::{DensityTarget, MutationReport, RichSet, ScenarioSpec, ThickeningMode};
pub use resilience::{RemovalPlan, Strategy, Trace, TraceMeta, TracePoint};
