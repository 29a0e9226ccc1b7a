//! Runs a resolved config and writes the run directory.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use kernelbench_core::datasets;
use kernelbench_core::evaluation::{self, Cell, Harness, RejectSummary, SweepResult, TournamentResult};
use kernelbench_core::generators::generate;
use kernelbench_core::{Error, Family, Graph};

use crate::config::{ExperimentKind, Resolved, TaskConfig};
use crate::svg::{Chart, Series};
use crate::{io_err, CliError};

/// Graphs of one task; generation failures stay in place as errors.
struct TaskGraphs {
    name: String,
    graphs: Vec<Result<Graph, Error>>,
}

fn load_task(task: &TaskConfig, index: usize, r: &Resolved) -> Result<TaskGraphs, CliError> {
    let name = task.label();
    let graphs = match task.block_model(r.config.seed.wrapping_add(index as u64)) {
        Some(spec) => {
            let spec = spec.map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
            (0..r.config.graphs as u64).map(|j| generate(&spec, j)).collect()
        }
        None => {
            let desc = datasets::find(&name).map_err(|_| CliError::ConfigInvalid(format!("unknown dataset {name:?}")))?;
            let root = datasets::data_root();
            if !datasets::is_available(&desc, &root) {
                return Err(CliError::DatasetMissing(format!(
                    "{name}: {} not found under {} (set {} or run scripts/fetch_datasets.sh)",
                    desc.file,
                    root.display(),
                    datasets::DATA_ENV
                )));
            }
            let g = datasets::load_dataset(&desc, &root).map_err(|e| CliError::Dataset(name.clone(), e))?;
            vec![Ok(g)]
        }
    };
    Ok(TaskGraphs { name, graphs })
}

/// Sweeps the generated graphs; a graph that failed to generate gets a row of error cells.
fn sweep_task(harness: &Harness, task: &TaskGraphs, families: &[Family], grid: &[f64]) -> Result<Vec<SweepResult>, CliError> {
    let ok: Vec<Graph> = task.graphs.iter().filter_map(|g| g.as_ref().ok().cloned()).collect();
    let done = if ok.is_empty() {
        families
            .iter()
            .map(|&family| SweepResult {
                family,
                grid: grid.to_vec(),
                cells: Vec::new(),
            })
            .collect()
    } else {
        harness.sweep_graphs(&ok, families, grid)?
    };
    Ok(done
        .into_iter()
        .map(|s| {
            let mut rows = s.cells.into_iter();
            let cells = task
                .graphs
                .iter()
                .map(|g| match g {
                    Ok(_) => rows.next().expect("one row per generated graph"),
                    Err(e) => vec![
                        Cell {
                            ari: -1.0,
                            error: Some(e.to_string()),
                        };
                        grid.len()
                    ],
                })
                .collect();
            SweepResult { cells, ..s }
        })
        .collect())
}

struct Writer {
    dir: PathBuf,
    files: Vec<String>,
}

impl Writer {
    fn csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
        w.write_record(header).map_err(|e| io_err(&path, e))?;
        for row in rows {
            w.write_record(&row).map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, body).map_err(|e| io_err(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }
}

fn sweep_rows(names: &[String], sweeps: &[Vec<SweepResult>]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (task, per_family) in names.iter().zip(sweeps) {
        let graphs = per_family.first().map_or(0, |s| s.graphs());
        for g in 0..graphs {
            for s in per_family {
                for (p, cell) in s.grid.iter().zip(&s.cells[g]) {
                    rows.push(vec![
                        task.clone(),
                        s.family.to_string(),
                        p.to_string(),
                        g.to_string(),
                        cell.ari.to_string(),
                        cell.error.clone().unwrap_or_default(),
                    ]);
                }
            }
        }
    }
    rows
}

fn best_rows(names: &[String], sweeps: &[Vec<SweepResult>]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (task, per_family) in names.iter().zip(sweeps) {
        for b in evaluation::best_params_table(per_family) {
            rows.push(vec![task.clone(), b.family.to_string(), b.param.to_string(), b.ari.to_string()]);
        }
    }
    rows
}

fn tournament_rows(t: &TournamentResult) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (f, family) in t.families.iter().enumerate() {
        for (k, task) in t.tasks.iter().enumerate() {
            rows.push(vec![family.to_string(), task.clone(), t.scores[f][k].to_string()]);
        }
    }
    for (family, total) in t.families.iter().zip(t.totals()) {
        rows.push(vec![family.to_string(), "total".into(), total.to_string()]);
    }
    rows
}

/// Wide layout: one row per family, one column per task, then the total; best total first.
fn tournament_table(t: &TournamentResult) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["family".to_string()];
    header.extend(t.tasks.iter().cloned());
    header.push("total".into());
    let rows = t
        .ranking()
        .into_iter()
        .map(|(family, total)| {
            let f = t.families.iter().position(|&x| x == family).expect("ranked family");
            let mut row = vec![family.to_string()];
            row.extend(t.scores[f].iter().map(i64::to_string));
            row.push(total.to_string());
            row
        })
        .collect();
    (header, rows)
}

fn sweep_chart(task: &str, per_family: &[SweepResult]) -> String {
    Chart {
        title: &format!("Mean ARI on {task}"),
        x_label: "normalized parameter p",
        y_label: "ARI",
        x_range: (0.0, 1.0),
        y_min: 0.0,
        series: per_family
            .iter()
            .map(|s| Series {
                name: s.family.to_string(),
                points: s.grid.iter().copied().zip(s.mean_by_param()).collect(),
            })
            .collect(),
    }
    .render()
}

/// ARI against the rank of the parameter value, best first, on a single graph.
fn ranked_chart(task: &str, per_family: &[SweepResult]) -> String {
    Chart {
        title: &format!("ARI by parameter rank on {task}"),
        x_label: "rank / grid size",
        y_label: "ARI",
        x_range: (0.0, 1.0),
        y_min: 0.0,
        series: per_family
            .iter()
            .map(|s| {
                let mut v = s.mean_by_param();
                v.sort_by(|a, b| b.total_cmp(a));
                let n = v.len() as f64;
                Series {
                    name: s.family.to_string(),
                    points: v.into_iter().enumerate().map(|(i, y)| ((i + 1) as f64 / n, y)).collect(),
                }
            })
            .collect(),
    }
    .render()
}

fn reject_chart(task: &str, summaries: &[RejectSummary]) -> String {
    Chart {
        title: &format!("Averaged reject curves on {task}"),
        x_label: "share of inter-class pairs",
        y_label: "share of intra-class pairs",
        x_range: (0.0, 1.0),
        y_min: 0.0,
        series: summaries
            .iter()
            .filter_map(|s| {
                s.curve.as_ref().map(|c| Series {
                    name: format!("{} (p={})", s.family, s.param),
                    points: c.points.clone(),
                })
            })
            .collect(),
    }
    .render()
}

/// Runs the experiment and returns the run directory.
pub fn run(r: &Resolved, default_out: &Path, mut progress: impl FnMut(&str)) -> Result<PathBuf, CliError> {
    let cfg = &r.config;
    let dir = cfg.out.clone().unwrap_or_else(|| default_out.to_path_buf());
    std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let grid = evaluation::grid(r.grid_size);
    let harness = Harness::new(r.scaling.clone(), cfg.workers);

    // Load everything first so a missing dataset aborts before any computation.
    let tasks: Vec<TaskGraphs> = cfg
        .tasks
        .iter()
        .enumerate()
        .map(|(i, t)| load_task(t, i, r))
        .collect::<Result<_, _>>()?;
    let names: Vec<String> = tasks.iter().map(|t| t.name.clone()).collect();

    let need_sweep = cfg.kind != ExperimentKind::Reject || r.families.iter().any(|f| !r.reject_params.contains_key(f));
    let mut sweeps = Vec::new();
    if need_sweep {
        for (i, task) in tasks.iter().enumerate() {
            progress(&format!(
                "task {}/{} {}: {} graphs x {} families x {} parameters",
                i + 1,
                tasks.len(),
                task.name,
                task.graphs.len(),
                r.families.len(),
                grid.len()
            ));
            let start = Instant::now();
            let s = sweep_task(&harness, task, &r.families, &grid)?;
            let errors: usize = s.iter().map(SweepResult::error_count).sum();
            progress(&format!(
                "task {}/{} done in {:.1}s ({errors} error cells)",
                i + 1,
                tasks.len(),
                start.elapsed().as_secs_f64()
            ));
            sweeps.push(s);
        }
    }

    let mut w = Writer { dir: dir.clone(), files: Vec::new() };
    if need_sweep {
        w.csv(
            "sweep.csv",
            &["task", "family", "param", "graph_index", "ari", "error"],
            sweep_rows(&names, &sweeps),
        )?;
        w.csv("best.csv", &["task", "family", "param", "ari"], best_rows(&names, &sweeps))?;
        for (i, (name, s)) in names.iter().zip(&sweeps).enumerate() {
            w.text(&format!("sweep_{}.svg", i + 1), &sweep_chart(name, s))?;
            if cfg.kind == ExperimentKind::Datasets {
                w.text(&format!("ranked_{}.svg", i + 1), &ranked_chart(name, s))?;
            }
        }
    }

    if matches!(cfg.kind, ExperimentKind::Tournament | ExperimentKind::Datasets) {
        let t = evaluation::tournament_from_sweeps(&names, &sweeps, r.statistic)?;
        w.csv("tournament.csv", &["family", "task", "score"], tournament_rows(&t))?;
        let (header, rows) = tournament_table(&t);
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        w.csv("tournament_table.csv", &header, rows)?;
        for (family, total) in t.ranking() {
            progress(&format!("{:>8} {total:>6}", family.name()));
        }
    }

    if cfg.kind == ExperimentKind::Reject {
        let task = &tasks[0];
        let mut settings = Vec::new();
        for (k, &family) in r.families.iter().enumerate() {
            let p = match r.reject_params.get(&family) {
                Some(&p) => Some(p),
                None => sweeps.first().and_then(|s| s[k].best()).map(|b| b.0),
            };
            if let Some(p) = p {
                settings.push((family, p));
            }
        }
        let graphs: Vec<Graph> = task.graphs.iter().filter_map(|g| g.as_ref().ok().cloned()).collect();
        progress(&format!("reject curves for {} families on {} graphs", settings.len(), graphs.len()));
        let summaries = if graphs.is_empty() {
            settings
                .iter()
                .map(|&(family, param)| RejectSummary {
                    family,
                    param,
                    curve: None,
                    failures: task.graphs.len(),
                })
                .collect()
        } else {
            harness.reject(&graphs, &settings)?
        };
        let mut rows = Vec::new();
        for s in &summaries {
            if let Some(c) = &s.curve {
                rows.extend(
                    c.points
                        .iter()
                        .map(|(x, y)| vec![s.family.to_string(), x.to_string(), y.to_string()]),
                );
            }
        }
        w.csv("reject.csv", &["family", "x", "y_mean"], rows)?;
        w.csv(
            "reject_auc.csv",
            &["family", "param", "auc", "failures"],
            summaries.iter().map(|s| {
                vec![
                    s.family.to_string(),
                    s.param.to_string(),
                    s.curve.as_ref().map(|c| c.auc.to_string()).unwrap_or_default(),
                    s.failures.to_string(),
                ]
            }),
        )?;
        w.text("reject.svg", &reject_chart(&task.name, &summaries))?;
    }

    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let manifest = serde_json::json!({
        "tool": "kernelbench",
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": timestamp,
        "seed": cfg.seed,
        "grid_size": r.grid_size,
        "families": r.families.iter().map(|f| f.name()).collect::<Vec<_>>(),
        "tasks": names,
        "config": cfg,
        "files": w.files,
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    w.text("manifest.json", &(text + "\n"))?;
    Ok(dir)
}
