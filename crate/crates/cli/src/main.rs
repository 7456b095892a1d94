//! `lks`: command-line access to generators, verifiers and pipelines.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lks_core::generate::GeneratorKind;
use lks_core::Rational;

use io::{knob_arg, rational_arg, vertex_list};

#[derive(Parser)]
#[command(name = "lks", version, about = "Sparse-decomposition toolkit for graphs with many high-degree vertices")]
pub struct Cli {
    /// Seed for generators and randomised certification.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print the full machine-readable report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print nothing; the exit code carries the verdict.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    #[value(name = "randomLKS")]
    RandomLks,
    #[value(name = "spotCross")]
    SpotCross,
    #[value(name = "figure2Family")]
    Figure2Family,
    #[value(name = "clusterPlant")]
    ClusterPlant,
}

impl From<KindArg> for GeneratorKind {
    fn from(k: KindArg) -> GeneratorKind {
        match k {
            KindArg::RandomLks => GeneratorKind::RandomLks,
            KindArg::SpotCross => GeneratorKind::SpotCross,
            KindArg::Figure2Family => GeneratorKind::Figure2Family,
            KindArg::ClusterPlant => GeneratorKind::ClusterPlant,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a seeded instance and audit it.
    Gen {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_parser = rational_arg)]
        eta: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        gamma: Option<Rational>,
        /// Kind-specific value such as `c=4`; repeatable.
        #[arg(long = "knob", value_parser = knob_arg)]
        knobs: Vec<(String, Rational)>,
        /// Graph text output.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        /// Decomposition JSON output.
        #[arg(long)]
        nabla_out: Option<PathBuf>,
        /// Instance JSON output (spotCross).
        #[arg(long)]
        instance_out: Option<PathBuf>,
    },
    /// Regularity certification and partitioning.
    #[command(subcommand)]
    Regularity(RegularityCmd),
    /// Decomposition verifiers.
    #[command(subcommand)]
    Decomp(DecompCmd),
    /// Maximum matchings, Gallai–Edmonds and regularized matchings.
    #[command(subcommand)]
    Match(MatchCmd),
    /// Pair extraction, matching growth, the path dichotomy and separation.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
    /// The rough-structure pipeline and its verifier.
    #[command(subcommand)]
    Structure(StructureCmd),
    /// Exact parameter schedules.
    #[command(subcommand)]
    Params(ParamsCmd),
    /// Run a batch configuration.
    Batch {
        #[arg(long)]
        config: PathBuf,
        /// Full report JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum RegularityCmd {
    /// Decide eps-regularity of (U, W).
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = vertex_list)]
        u: lks_core::VertexSet,
        #[arg(long, value_parser = vertex_list)]
        w: lks_core::VertexSet,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        /// Exhaustive search up to this smaller-side size.
        #[arg(long)]
        size_cap: Option<usize>,
    },
    /// Compute and verify a regularity partition.
    Partition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, default_value_t = 1)]
        ell_min: usize,
        /// JSON list of vertex sets to refine.
        #[arg(long)]
        prepartition: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum DecompCmd {
    /// Verify a sparse (or bounded) decomposition.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        nabla: PathBuf,
        /// Use the prepartition [L, S] at this eta.
        #[arg(long, value_parser = rational_arg)]
        eta: Option<Rational>,
        /// Check only the bounded-decomposition properties.
        #[arg(long)]
        bounded: bool,
    },
}

#[derive(Subcommand)]
pub enum MatchCmd {
    /// Maximum matching by the blossom algorithm.
    Max {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Gallai–Edmonds pair (Q, M) with its re-verification.
    Ge {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check a regularized matching.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, value_parser = rational_arg, default_value = "0")]
        d: Rational,
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
}

#[derive(Subcommand)]
pub enum PipelineCmd {
    /// One regular pair from a dense spot of an instance.
    Extract {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = rational_arg, default_value = "1/4")]
        eps: Rational,
        #[arg(long, value_parser = rational_arg, default_value = "1/8")]
        alpha: Rational,
    },
    /// Greedy growth of a regularized matching in an instance.
    Grow {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = rational_arg, default_value = "1/4")]
        eps: Rational,
        #[arg(long, value_parser = rational_arg, default_value = "1/8")]
        alpha: Rational,
    },
    /// Augmenting path or sparse separation for a matching in an instance.
    Dichotomy {
        #[arg(long)]
        instance: PathBuf,
        /// Regularized matching JSON; empty when absent.
        #[arg(long)]
        matching: Option<PathBuf>,
    },
    /// Separation on the lifted cluster-graph matching of a decomposition.
    Separate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        nabla: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        eta: Rational,
        #[arg(long, value_parser = rational_arg)]
        epsilon: Option<Rational>,
        #[arg(long)]
        omega: Option<usize>,
    },
}

#[derive(Subcommand)]
pub enum StructureCmd {
    /// Run the pipeline and verify its output.
    Run {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        nabla: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        eta: Rational,
        /// Defaults to the decomposition's epsilon.
        #[arg(long, value_parser = rational_arg)]
        epsilon: Option<Rational>,
        #[arg(long)]
        omega: Option<usize>,
        /// Skip the hypothesis checks.
        #[arg(long)]
        no_hypotheses: bool,
        /// Output JSON for later verification.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a stored output against its graph and decomposition.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        nabla: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum ParamsCmd {
    /// Regular-pair finder constants.
    PairConstants {
        #[arg(long, value_parser = rational_arg)]
        omega: Rational,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, value_parser = rational_arg)]
        rho: Rational,
        #[arg(long, value_parser = rational_arg)]
        tau: Rational,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Level schedule of one augmentation step.
    StepSchedule {
        #[arg(long, value_parser = rational_arg)]
        omega: Rational,
        #[arg(long, value_parser = rational_arg)]
        tau: Rational,
        #[arg(long, value_parser = rational_arg)]
        rho: Rational,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Cascade of the iterated separation.
    SeparationSchedule {
        #[arg(long, value_parser = rational_arg)]
        omega: Rational,
        #[arg(long, value_parser = rational_arg)]
        rho: Rational,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Explicit growth target; derived from the step schedule when absent.
        #[arg(long, value_parser = rational_arg)]
        tau_prime: Option<Rational>,
    },
    /// The epsilon cascade (eps/2)^(3^(L - l)).
    EpsilonLevels {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long)]
        levels: usize,
    },
}

/// Result of one command: a verdict, a one-line summary and the report.
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
    pub report: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            if !cli.quiet {
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&outcome.report).expect("report serialises"));
                } else {
                    println!("{}", outcome.summary);
                }
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            if !cli.quiet {
                eprintln!("lks: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
