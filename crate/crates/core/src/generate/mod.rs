//! Seeded instance generators.

pub mod figure2;
pub mod plant;
pub mod random;
pub mod wiring;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{InstanceFile, SparseDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{int, rat, serde_rational, to_f64, Rational};

pub use figure2::{figure2_family, Figure2Audit, Figure2Spec};
pub use plant::{cluster_plant, PlantAudit, PlantSpec};
pub use random::{random_lks, spot_cross, RandomLksAudit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorKind {
    #[serde(rename = "randomLKS")]
    RandomLks,
    #[serde(rename = "spotCross")]
    SpotCross,
    #[serde(rename = "figure2Family")]
    Figure2Family,
    #[serde(rename = "clusterPlant")]
    ClusterPlant,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub eta: Rational,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    pub seed: u64,
    /// Kind-specific values: `c` (cluster size) for figure2Family; `a`,
    /// `b`, `e`, `c` (group counts and size) for clusterPlant; `blocks`,
    /// `side`, `density` for spotCross.
    #[serde(default, with = "serde_rational::map")]
    pub knobs: BTreeMap<String, Rational>,
}

impl GeneratorSpec {
    /// Documented defaults of each kind.
    pub fn defaults(kind: GeneratorKind, seed: u64) -> GeneratorSpec {
        let (n, k, eta, gamma) = match kind {
            GeneratorKind::RandomLks => (20, 4, int(0), rat(1, 4)),
            GeneratorKind::SpotCross => (0, 0, int(0), rat(1, 4)),
            GeneratorKind::Figure2Family => (200, 20, rat(1, 20), rat(1, 5)),
            GeneratorKind::ClusterPlant => (80, 10, rat(1, 5), rat(1, 4)),
        };
        GeneratorSpec { kind, n, k, eta, gamma, seed, knobs: BTreeMap::new() }
    }

    fn count(&self, name: &str) -> Result<Option<usize>> {
        match self.knobs.get(name) {
            None => Ok(None),
            Some(v) if v.is_integer() && v >= &int(0) => {
                Ok(Some(v.to_integer().try_into().map_err(|_| Error::Input(format!("knob {name} is too large")))?))
            }
            Some(v) => Err(Error::Input(format!("knob {name} must be a non-negative integer, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum GeneratorAudit {
    RandomLks(RandomLksAudit),
    SpotCross { blocks: usize, n: usize },
    Figure2Family(Figure2Audit),
    ClusterPlant(PlantAudit),
}

impl GeneratorAudit {
    /// Whether the output passed its target verifier.
    pub fn passed(&self) -> bool {
        match self {
            GeneratorAudit::RandomLks(a) => a.lks,
            GeneratorAudit::SpotCross { .. } => true,
            GeneratorAudit::Figure2Family(a) => a.within_tolerance && a.classes_match,
            GeneratorAudit::ClusterPlant(a) => a.lks_small,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Generated {
    #[serde(skip)]
    pub graph: Graph,
    pub nabla: Option<SparseDecomposition>,
    pub instance: Option<InstanceFile>,
    pub audit: GeneratorAudit,
}

/// Runs the generator named by `spec`; the output depends only on the spec.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        GeneratorKind::RandomLks => {
            let (graph, audit) = random_lks(spec.n, spec.k, &spec.eta, &mut rng)?;
            Ok(Generated { graph, nabla: None, instance: None, audit: GeneratorAudit::RandomLks(audit) })
        }
        GeneratorKind::SpotCross => {
            let blocks = spec.count("blocks")?.unwrap_or(2);
            let side = spec.count("side")?.unwrap_or(8);
            let density = spec.knobs.get("density").map(to_f64).unwrap_or(0.8);
            let instance = spot_cross(blocks, side, density, &mut rng)?;
            let graph = instance.graph()?;
            let audit = GeneratorAudit::SpotCross { blocks, n: instance.n };
            Ok(Generated { graph, nabla: None, instance: Some(instance), audit })
        }
        GeneratorKind::Figure2Family => {
            let fs = Figure2Spec {
                n: spec.n,
                k: spec.k,
                cluster_size: spec.count("c")?.unwrap_or(4),
                eta: spec.eta.clone(),
                gamma: spec.gamma.clone(),
            };
            let (graph, nabla, audit) = figure2_family(&fs, &mut rng)?;
            Ok(Generated { graph, nabla: Some(nabla), instance: None, audit: GeneratorAudit::Figure2Family(audit) })
        }
        GeneratorKind::ClusterPlant => {
            let ps = PlantSpec {
                n: spec.n,
                k: spec.k,
                eta: spec.eta.clone(),
                gamma: spec.gamma.clone(),
                group_size: spec.count("c")?.unwrap_or(4),
                large_clusters: spec.count("a")?,
                small_clusters: spec.count("b")?,
                avoiding_groups: spec.count("e")?,
            };
            let (graph, nabla, audit) = cluster_plant(&ps, &mut rng)?;
            Ok(Generated { graph, nabla: Some(nabla), instance: None, audit: GeneratorAudit::ClusterPlant(audit) })
        }
    }
}
