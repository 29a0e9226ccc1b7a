//! Experiment configuration files (TOML).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use kernelbench_core::datasets;
use kernelbench_core::evaluation::{Statistic, DATASET_GRID, DEFAULT_GRID};
use kernelbench_core::generators::{six_class_spec, two_class_unequal_spec, BlockModelSpec};
use kernelbench_core::{Family, Scaling};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Default number of graphs per generated task.
pub const DEFAULT_GRAPHS: usize = 50;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    /// ARI over the grid per task and family.
    Sweep,
    /// Copeland tournament across generated tasks.
    Tournament,
    /// Averaged reject curves at the best (or given) parameters.
    Reject,
    /// Copeland tournament across real datasets.
    Datasets,
}

/// `"all"` or an explicit list of family names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySelection {
    Keyword(String),
    List(Vec<String>),
}

impl Default for FamilySelection {
    fn default() -> Self {
        FamilySelection::Keyword("all".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskConfig {
    /// `m` equal classes with uniform in/out probabilities.
    Block {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        nodes: usize,
        classes: usize,
        p_in: f64,
        p_out: f64,
    },
    /// Two classes of sizes `first` and `nodes - first`.
    TwoClass {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        first: usize,
        nodes: usize,
        p_in: f64,
        p_out: f64,
    },
    /// The fixed six-class heterogeneous model (150 nodes).
    SixClass {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    /// Arbitrary class sizes and probability matrix.
    Custom {
        name: String,
        sizes: Vec<usize>,
        probabilities: Vec<Vec<f64>>,
    },
    /// A dataset from the registry, loaded from the data root.
    Dataset { name: String },
}

impl TaskConfig {
    pub fn label(&self) -> String {
        match self {
            TaskConfig::Block {
                name: Some(n), ..
            }
            | TaskConfig::TwoClass {
                name: Some(n), ..
            }
            | TaskConfig::SixClass { name: Some(n) }
            | TaskConfig::Custom { name: n, .. }
            | TaskConfig::Dataset { name: n } => n.clone(),
            TaskConfig::Block {
                nodes,
                classes,
                p_in,
                p_out,
                ..
            } => format!("G({nodes},({classes}){p_in},{p_out})"),
            TaskConfig::TwoClass {
                first,
                nodes,
                p_in,
                p_out,
                ..
            } => format!("G({nodes},[{first}|{}]{p_in},{p_out})", nodes - first.min(nodes)),
            TaskConfig::SixClass { name: None } => "six-class".into(),
        }
    }

    pub fn is_dataset(&self) -> bool {
        matches!(self, TaskConfig::Dataset { .. })
    }

    /// Block model for a generated task, seeded with `seed`.
    pub fn block_model(&self, seed: u64) -> Option<kernelbench_core::Result<BlockModelSpec>> {
        let spec = match self {
            TaskConfig::Block {
                nodes,
                classes,
                p_in,
                p_out,
                ..
            } => BlockModelSpec::uniform(*nodes, *classes, *p_in, *p_out, seed),
            TaskConfig::TwoClass {
                first,
                nodes,
                p_in,
                p_out,
                ..
            } => two_class_unequal_spec(*first, *nodes, *p_in, *p_out),
            TaskConfig::SixClass { .. } => Ok(six_class_spec()),
            TaskConfig::Custom {
                sizes, probabilities, ..
            } => {
                let s = BlockModelSpec {
                    sizes: sizes.clone(),
                    probabilities: probabilities.clone(),
                    seed,
                };
                s.validate().map(|_| s)
            }
            TaskConfig::Dataset { .. } => return None,
        };
        Some(spec.map(|s| BlockModelSpec { seed, ..s }))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RejectConfig {
    /// Fixed normalized parameter per family; other families use their best grid value.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub families: FamilySelection,
    /// Grid size; 50 by default, 55 for `datasets`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Graphs per generated task.
    #[serde(default = "default_graphs")]
    pub graphs: usize,
    /// `"max"` or `"p<q>"`, e.g. `"p90"`.
    #[serde(default = "default_statistic")]
    pub statistic: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Worker threads, 0 for one per core. Not recorded in the manifest.
    #[serde(default, skip_serializing)]
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Per-family constant `c` of the `t = c·p/(1−p)` map.
    #[serde(default)]
    pub scaling: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reject: Option<RejectConfig>,
    pub tasks: Vec<TaskConfig>,
}

fn default_graphs() -> usize {
    DEFAULT_GRAPHS
}

fn default_statistic() -> String {
    "max".into()
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub grid: Option<usize>,
    pub graphs: Option<usize>,
}

/// A config after validation, with names resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub families: Vec<Family>,
    pub grid_size: usize,
    pub statistic: Statistic,
    pub scaling: Scaling,
    pub reject_params: BTreeMap<Family, f64>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::ConfigInvalid(msg.into())
}

pub fn parse_statistic(s: &str) -> Result<Statistic, CliError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("max") {
        return Ok(Statistic::Max);
    }
    let q = s
        .strip_prefix('p')
        .and_then(|q| q.parse::<f64>().ok())
        .ok_or_else(|| invalid(format!("statistic {s:?} must be \"max\" or \"p<q>\" such as \"p90\"")))?;
    Statistic::Percentile(q)
        .validate()
        .map_err(|_| invalid(format!("percentile {q} is outside [0, 100]")))
}

fn parse_family(name: &str) -> Result<Family, CliError> {
    name.parse().map_err(|_| invalid(format!("unknown family {name:?}")))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(w) = o.workers {
            self.workers = w;
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        if let Some(g) = o.grid {
            self.grid = Some(g);
        }
        if let Some(g) = o.graphs {
            self.graphs = g;
        }
    }

    /// Checks everything that can be checked without touching the data root.
    pub fn resolve(self) -> Result<Resolved, CliError> {
        let families = match &self.families {
            FamilySelection::Keyword(k) if k.eq_ignore_ascii_case("all") => Family::ALL.to_vec(),
            FamilySelection::Keyword(k) => vec![parse_family(k)?],
            FamilySelection::List(names) => names.iter().map(|n| parse_family(n)).collect::<Result<_, _>>()?,
        };
        if families.is_empty() {
            return Err(invalid("family list is empty"));
        }
        for (i, f) in families.iter().enumerate() {
            if families[..i].contains(f) {
                return Err(invalid(format!("family {f} listed twice")));
            }
        }
        let tournament = matches!(self.kind, ExperimentKind::Tournament | ExperimentKind::Datasets);
        if tournament && families.len() < 2 {
            return Err(invalid("a tournament needs at least two families"));
        }

        let grid_size = self.grid.unwrap_or(match self.kind {
            ExperimentKind::Datasets => DATASET_GRID,
            _ => DEFAULT_GRID,
        });
        if grid_size == 0 {
            return Err(invalid("grid must have at least one point"));
        }
        if self.graphs == 0 {
            return Err(invalid("graphs must be at least 1"));
        }
        let statistic = parse_statistic(&self.statistic)?;

        let mut scaling = Scaling::default();
        for (name, &c) in &self.scaling {
            let f = parse_family(name)?;
            if !(c.is_finite() && c > 0.0) {
                return Err(invalid(format!("scaling constant for {f} must be positive, got {c}")));
            }
            scaling = scaling.with(f, c);
        }

        if self.tasks.is_empty() {
            return Err(invalid("no tasks"));
        }
        let mut labels: Vec<String> = Vec::new();
        for (i, task) in self.tasks.iter().enumerate() {
            let label = task.label();
            if labels.contains(&label) {
                return Err(invalid(format!("task name {label:?} is used twice; set `name`")));
            }
            labels.push(label.clone());
            match task.block_model(0) {
                Some(Err(e)) => return Err(invalid(format!("task {} ({label}): {e}", i + 1))),
                Some(Ok(_)) if self.kind == ExperimentKind::Datasets => {
                    return Err(invalid(format!("task {label} is not a dataset")));
                }
                None => {
                    datasets::find(&label).map_err(|_| invalid(format!("unknown dataset {label:?}")))?;
                }
                _ => {}
            }
        }
        if self.kind == ExperimentKind::Reject && self.tasks.len() != 1 {
            return Err(invalid("a reject experiment takes exactly one task"));
        }

        let mut reject_params = BTreeMap::new();
        if let Some(r) = &self.reject {
            if self.kind != ExperimentKind::Reject {
                return Err(invalid("[reject] is only valid with kind = \"reject\""));
            }
            for (name, &p) in &r.params {
                let f = parse_family(name)?;
                if !families.contains(&f) {
                    return Err(invalid(format!("reject parameter for {f}, which is not in the family list")));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(invalid(format!("reject parameter {p} for {f} is outside [0, 1]")));
                }
                reject_params.insert(f, p);
            }
        }

        Ok(Resolved {
            config: self,
            families,
            grid_size,
            statistic,
            scaling,
            reject_params,
        })
    }
}
