//! Benchmark protocols: ARI sweeps over a parameter grid, Copeland
//! tournaments and reject curves.

use serde::{Deserialize, Serialize};

use crate::clustering::{adjusted_rand_index, ward_cluster, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kernels::{Family, PreparedGraph, Scaling};
use crate::transforms::{reject_distance, ward_input};
use crate::Matrix;

/// Grid size for block-model experiments.
pub const DEFAULT_GRID: usize = 50;
/// Grid size for dataset experiments.
pub const DATASET_GRID: usize = 55;
/// Points on the x axis of averaged reject curves.
pub const REJECT_GRID: usize = 1001;

/// `size` evenly spaced normalized parameters on `[0.02, 0.98]`.
///
/// A one-point grid is `[0.5]`.
pub fn grid(size: usize) -> Vec<f64> {
    match size {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..size)
            .map(|i| 0.02 + 0.96 * i as f64 / (size - 1) as f64)
            .collect(),
    }
}

/// Outcome of one (graph, family, parameter) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub ari: f64,
    pub error: Option<String>,
}

impl Cell {
    fn failed(e: Error) -> Self {
        Cell {
            ari: -1.0,
            error: Some(e.to_string()),
        }
    }
}

/// ARIs of one family on a set of graphs over a parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: Family,
    pub grid: Vec<f64>,
    /// `cells[graph][param]`.
    pub cells: Vec<Vec<Cell>>,
}

impl SweepResult {
    pub fn graphs(&self) -> usize {
        self.cells.len()
    }

    pub fn ari(&self, graph: usize) -> Vec<f64> {
        self.cells[graph].iter().map(|c| c.ari).collect()
    }

    /// Graph-averaged ARI at every grid point.
    pub fn mean_by_param(&self) -> Vec<f64> {
        let n = self.cells.len().max(1) as f64;
        (0..self.grid.len())
            .map(|j| self.cells.iter().map(|row| row[j].ari).sum::<f64>() / n)
            .collect()
    }

    /// Grid parameter with the highest graph-averaged ARI; ties go to the smaller parameter.
    pub fn best(&self) -> Option<(f64, f64)> {
        let means = self.mean_by_param();
        let mut best: Option<(f64, f64)> = None;
        for (&p, &m) in self.grid.iter().zip(&means) {
            if best.is_none_or(|(_, b)| m > b) {
                best = Some((p, m));
            }
        }
        best
    }

    /// Mean over graphs of each graph's best-of-grid ARI.
    pub fn mean_of_graph_max(&self) -> f64 {
        let n = self.cells.len().max(1) as f64;
        self.cells
            .iter()
            .map(|row| Statistic::Max.apply(&row.iter().map(|c| c.ari).collect::<Vec<_>>()))
            .sum::<f64>()
            / n
    }

    pub fn error_count(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.error.is_some()).count()
    }
}

/// Evaluates one cell: family matrix, Ward on the induced squared distance, ARI.
pub fn evaluate_cell(
    prepared: &PreparedGraph,
    truth: &Partition,
    family: Family,
    p: f64,
    scaling: &Scaling,
) -> Cell {
    let run = || -> Result<f64> {
        let m = prepared.evaluate(family, p, scaling)?;
        let sq = ward_input(&m)?;
        let part = ward_cluster(&sq, truth.k())?;
        adjusted_rand_index(&part, truth)
    };
    match run() {
        Ok(ari) => Cell { ari, error: None },
        Err(e) => Cell::failed(e),
    }
}

fn truth_of(g: &Graph) -> Result<Partition> {
    let labels = g.labels().ok_or(Error::MissingLabels)?;
    Ok(Partition::from_labels(labels))
}

/// Sweeps one family over `grid` on a labelled, connected graph, clustering into `k` groups.
///
/// Failed cells get ARI −1 and an error message.
pub fn sweep(g: &Graph, family: Family, grid: &[f64], k: usize) -> Result<Vec<Cell>> {
    let truth = truth_of(g)?;
    if k != truth.k() {
        return Err(Error::InvalidK { k, n: g.n() });
    }
    let prepared = PreparedGraph::new(g.clone())?;
    Ok(sweep_prepared(&prepared, &truth, family, grid, &Scaling::default()))
}

pub fn sweep_prepared(
    prepared: &PreparedGraph,
    truth: &Partition,
    family: Family,
    grid: &[f64],
    scaling: &Scaling,
) -> Vec<Cell> {
    grid.iter()
        .map(|&p| evaluate_cell(prepared, truth, family, p, scaling))
        .collect()
}

/// Per-graph summary of a row of grid ARIs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "q", rename_all = "lowercase")]
pub enum Statistic {
    Max,
    /// Percentile `q ∈ [0, 100]` with linear interpolation between order statistics.
    Percentile(f64),
}

impl Statistic {
    pub fn validate(self) -> Result<Self> {
        if let Statistic::Percentile(q) = self {
            if !(0.0..=100.0).contains(&q) {
                return Err(Error::ParameterOutOfRange {
                    name: "percentile",
                    value: q,
                    range: "[0, 100]",
                });
            }
        }
        Ok(self)
    }

    pub fn apply(self, values: &[f64]) -> f64 {
        match self {
            Statistic::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Statistic::Percentile(q) => percentile(values, q),
        }
    }
}

fn percentile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q / 100.0 * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    if lo + 1 >= v.len() {
        return v[v.len() - 1];
    }
    let frac = pos - lo as f64;
    if frac == 0.0 {
        v[lo]
    } else {
        v[lo] + frac * (v[lo + 1] - v[lo])
    }
}

/// Copeland scores of families from per-graph statistics `stats[family][graph]`.
///
/// On every graph each family pair is compared: strictly greater gains +1,
/// the other −1; exact ties score nothing.
pub fn copeland_scores(stats: &[Vec<f64>]) -> Vec<i64> {
    let f = stats.len();
    let graphs = stats.first().map_or(0, Vec::len);
    let mut scores = vec![0i64; f];
    for g in 0..graphs {
        for a in 0..f {
            for b in (a + 1)..f {
                let (x, y) = (stats[a][g], stats[b][g]);
                if x > y {
                    scores[a] += 1;
                    scores[b] -= 1;
                } else if y > x {
                    scores[a] -= 1;
                    scores[b] += 1;
                }
            }
        }
    }
    scores
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentResult {
    pub families: Vec<Family>,
    pub tasks: Vec<String>,
    /// `scores[family][task]`.
    pub scores: Vec<Vec<i64>>,
}

impl TournamentResult {
    pub fn totals(&self) -> Vec<i64> {
        self.scores.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn total_of(&self, family: Family) -> Option<i64> {
        let i = self.families.iter().position(|&f| f == family)?;
        Some(self.scores[i].iter().sum())
    }

    /// Families ordered by total score, best first; ties keep input order.
    pub fn ranking(&self) -> Vec<(Family, i64)> {
        let mut r: Vec<_> = self.families.iter().copied().zip(self.totals()).collect();
        r.sort_by_key(|&(_, s)| std::cmp::Reverse(s));
        r
    }
}

/// Builds a tournament from sweeps: `sweeps[task][family]`, all over the same graphs per task.
pub fn tournament_from_sweeps(
    task_names: &[String],
    sweeps: &[Vec<SweepResult>],
    statistic: Statistic,
) -> Result<TournamentResult> {
    statistic.validate()?;
    if task_names.len() != sweeps.len() {
        return Err(Error::LengthMismatch(task_names.len(), sweeps.len()));
    }
    let families: Vec<Family> = sweeps
        .first()
        .map(|s| s.iter().map(|r| r.family).collect())
        .unwrap_or_default();
    if families.len() < 2 {
        return Err(Error::InvalidSpec("a tournament needs at least two families".into()));
    }
    let mut scores = vec![vec![0i64; sweeps.len()]; families.len()];
    for (t, task) in sweeps.iter().enumerate() {
        if task.iter().map(|r| r.family).ne(families.iter().copied()) {
            return Err(Error::InvalidSpec("every task must list the same families".into()));
        }
        let stats: Vec<Vec<f64>> = task
            .iter()
            .map(|r| (0..r.graphs()).map(|g| statistic.apply(&r.ari(g))).collect())
            .collect();
        for (f, s) in copeland_scores(&stats).into_iter().enumerate() {
            scores[f][t] = s;
        }
    }
    Ok(TournamentResult {
        families,
        tasks: task_names.to_vec(),
        scores,
    })
}

/// Optimal grid parameter of a family and the graph-averaged ARI there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestParam {
    pub family: Family,
    pub param: f64,
    pub ari: f64,
}

/// Argmax of the graph-averaged ARI per family; ties go to the smaller parameter.
pub fn best_params_table(sweeps: &[SweepResult]) -> Vec<BestParam> {
    sweeps
        .iter()
        .filter_map(|s| {
            s.best().map(|(param, ari)| BestParam {
                family: s.family,
                param,
                ari,
            })
        })
        .collect()
}

/// Share of inter-class (x) against intra-class (y) distances at or below a sweeping threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectCurve {
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

/// Reject curve of a distance matrix over all unordered node pairs.
///
/// Pairs with equal distance enter at a single point, so the trapezoid AUC
/// equals `P(intra < inter) + ½ P(intra = inter)`.
pub fn reject_curve(d: &Matrix, labels: &[usize]) -> Result<RejectCurve> {
    let n = d.nrows();
    if labels.len() != n {
        return Err(Error::LengthMismatch(labels.len(), n));
    }
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((d[(i, j)], labels[i] == labels[j]));
        }
    }
    let intra_total = pairs.iter().filter(|p| p.1).count();
    let inter_total = pairs.len() - intra_total;
    if intra_total == 0 || inter_total == 0 {
        return Err(Error::DegenerateLabels(format!(
            "{intra_total} intra-class and {inter_total} inter-class pairs"
        )));
    }
    if let Some(&(v, _)) = pairs.iter().find(|p| !p.0.is_finite()) {
        return Err(Error::MalformedDistance(format!("non-finite distance {v}")));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut points = vec![(0.0, 0.0)];
    let (mut inter, mut intra) = (0usize, 0usize);
    let mut k = 0;
    while k < pairs.len() {
        let v = pairs[k].0;
        while k < pairs.len() && pairs[k].0 == v {
            if pairs[k].1 {
                intra += 1;
            } else {
                inter += 1;
            }
            k += 1;
        }
        points.push((inter as f64 / inter_total as f64, intra as f64 / intra_total as f64));
    }
    let auc = trapezoid(&points);
    Ok(RejectCurve { points, auc })
}

/// `y` of a monotone polygonal curve at `x`; at a vertical segment the highest point.
fn curve_at(points: &[(f64, f64)], x: f64) -> f64 {
    // Index of the last point with abscissa <= x.
    let idx = points.partition_point(|p| p.0 <= x);
    if idx == 0 {
        return points[0].1;
    }
    let (x0, y0) = points[idx - 1];
    if x0 == x || idx == points.len() {
        return y0;
    }
    let (x1, y1) = points[idx];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Vertical average of curves on a [`REJECT_GRID`]-point x grid.
pub fn average_reject_curves(curves: &[RejectCurve]) -> Result<RejectCurve> {
    if curves.is_empty() {
        return Err(Error::InvalidSpec("no curves to average".into()));
    }
    let m = curves.len() as f64;
    let points: Vec<(f64, f64)> = (0..REJECT_GRID)
        .map(|i| {
            let x = i as f64 / (REJECT_GRID - 1) as f64;
            let y = curves.iter().map(|c| curve_at(&c.points, x)).sum::<f64>() / m;
            (x, y)
        })
        .collect();
    let auc = trapezoid(&points);
    Ok(RejectCurve { points, auc })
}

/// Reject curve of one family at one parameter on a graph.
pub fn reject_curve_for(prepared: &PreparedGraph, family: Family, p: f64, scaling: &Scaling) -> Result<RejectCurve> {
    let labels = prepared.graph().labels().ok_or(Error::MissingLabels)?;
    let m = prepared.evaluate(family, p, scaling)?;
    let d = reject_distance(&m)?;
    reject_curve(&d.matrix, labels)
}

/// Averaged reject curve of a family and how many graphs failed to produce one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectSummary {
    pub family: Family,
    pub param: f64,
    pub curve: Option<RejectCurve>,
    pub failures: usize,
}

/// Runs experiment cells, optionally on a worker pool.
///
/// Results are gathered by cell index, so they do not depend on the number
/// of workers.
#[derive(Debug, Clone, Default)]
pub struct Harness {
    pub scaling: Scaling,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
}

impl Harness {
    pub fn new(scaling: Scaling, workers: usize) -> Self {
        Harness { scaling, workers }
    }

    fn map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            if self.workers != 1 {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(self.workers).build();
                if let Ok(pool) = pool {
                    return pool.install(|| items.par_iter().map(&f).collect());
                }
            }
        }
        items.iter().map(f).collect()
    }

    pub fn prepare(&self, graphs: &[Graph]) -> Result<Vec<PreparedGraph>> {
        self.map(graphs, |g| PreparedGraph::new(g.clone()))
            .into_iter()
            .collect()
    }

    /// One [`SweepResult`] per family over the same labelled graphs.
    pub fn sweep_graphs(&self, graphs: &[Graph], families: &[Family], grid: &[f64]) -> Result<Vec<SweepResult>> {
        let truths: Vec<Partition> = graphs.iter().map(truth_of).collect::<Result<_>>()?;
        let prepared = self.prepare(graphs)?;
        let jobs: Vec<(usize, usize)> = (0..families.len())
            .flat_map(|f| (0..graphs.len()).map(move |g| (f, g)))
            .collect();
        let mut rows = self
            .map(&jobs, |&(f, g)| {
                sweep_prepared(&prepared[g], &truths[g], families[f], grid, &self.scaling)
            })
            .into_iter();
        Ok(families
            .iter()
            .map(|&family| SweepResult {
                family,
                grid: grid.to_vec(),
                cells: rows.by_ref().take(graphs.len()).collect(),
            })
            .collect())
    }

    /// Sweeps every task and scores the Copeland tournament.
    pub fn tournament(
        &self,
        tasks: &[(String, Vec<Graph>)],
        families: &[Family],
        grid: &[f64],
        statistic: Statistic,
    ) -> Result<(TournamentResult, Vec<Vec<SweepResult>>)> {
        statistic.validate()?;
        if families.len() < 2 {
            return Err(Error::InvalidSpec("a tournament needs at least two families".into()));
        }
        let sweeps = tasks
            .iter()
            .map(|(_, graphs)| self.sweep_graphs(graphs, families, grid))
            .collect::<Result<Vec<_>>>()?;
        let names: Vec<String> = tasks.iter().map(|(n, _)| n.clone()).collect();
        Ok((tournament_from_sweeps(&names, &sweeps, statistic)?, sweeps))
    }

    /// Averaged reject curve of each `(family, parameter)` over the graphs.
    pub fn reject(&self, graphs: &[Graph], settings: &[(Family, f64)]) -> Result<Vec<RejectSummary>> {
        let prepared = self.prepare(graphs)?;
        let jobs: Vec<(usize, usize)> = (0..settings.len())
            .flat_map(|s| (0..graphs.len()).map(move |g| (s, g)))
            .collect();
        let mut results = self
            .map(&jobs, |&(s, g)| {
                let (family, p) = settings[s];
                reject_curve_for(&prepared[g], family, p, &self.scaling)
            })
            .into_iter();
        settings
            .iter()
            .map(|&(family, param)| {
                let mut curves = Vec::new();
                let mut failures = 0;
                for r in results.by_ref().take(graphs.len()) {
                    match r {
                        Ok(c) => curves.push(c),
                        Err(_) => failures += 1,
                    }
                }
                let curve = if curves.is_empty() {
                    None
                } else {
                    Some(average_reject_curves(&curves)?)
                };
                Ok(RejectSummary {
                    family,
                    param,
                    curve,
                    failures,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = grid(50);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.02);
        assert!((g[49] - 0.98).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(grid(1), vec![0.5]);
    }

    #[test]
    fn three_family_scores() {
        let stats = vec![vec![0.9], vec![0.5], vec![0.1]];
        assert_eq!(copeland_scores(&stats), vec![2, 0, -2]);
        let same = vec![vec![0.4, 0.7], vec![0.4, 0.7]];
        assert_eq!(copeland_scores(&same), vec![0, 0]);
    }

    #[test]
    fn percentile_interpolates() {
        let v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(percentile(&v, 0.0), 1.0);
        assert_eq!(percentile(&v, 100.0), 4.0);
        assert!((percentile(&v, 50.0) - 2.5).abs() < 1e-15);
        assert!((percentile(&v, 90.0) - 3.7).abs() < 1e-12);
        assert_eq!(Statistic::Percentile(100.0).apply(&v), Statistic::Max.apply(&v));
        assert!(Statistic::Percentile(101.0).validate().is_err());
    }

    #[test]
    fn separated_reject_curve() {
        let labels = [0, 0, 1, 1];
        let d = Matrix::from_fn(4, 4, |i, j| {
            if i == j {
                0.0
            } else if labels[i] == labels[j] {
                1.0
            } else {
                5.0
            }
        });
        let c = reject_curve(&d, &labels).unwrap();
        assert_eq!(c.auc, 1.0);
        assert_eq!(c.points, vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
    }

    #[test]
    fn tied_reject_curve() {
        let d = Matrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 2.0 });
        let c = reject_curve(&d, &[0, 0, 1, 1]).unwrap();
        assert_eq!(c.points, vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(c.auc, 0.5);
    }

    #[test]
    fn degenerate_labels() {
        let d = Matrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!(matches!(reject_curve(&d, &[0, 0, 0]), Err(Error::DegenerateLabels(_))));
        assert!(matches!(reject_curve(&d, &[0, 1, 2]), Err(Error::DegenerateLabels(_))));
    }

    #[test]
    fn averaging_a_single_curve() {
        let labels = [0, 0, 1, 1, 1];
        let d = Matrix::from_fn(5, 5, |i, j| ((i * 7 + j * 7) % 5) as f64 + (i as f64 - j as f64).abs());
        let c = reject_curve(&d, &labels).unwrap();
        let avg = average_reject_curves(std::slice::from_ref(&c)).unwrap();
        assert_eq!(avg.points.len(), REJECT_GRID);
        assert!((avg.auc - c.auc).abs() < 1e-3);
        let twice = average_reject_curves(&[c.clone(), c]).unwrap();
        assert_eq!(twice, avg);
    }

    #[test]
    fn vertical_jump_takes_the_top() {
        let pts = [(0.0, 0.0), (0.0, 0.6), (0.5, 0.8), (0.5, 0.9), (1.0, 1.0)];
        assert_eq!(curve_at(&pts, 0.0), 0.6);
        assert_eq!(curve_at(&pts, 0.5), 0.9);
        assert!((curve_at(&pts, 0.25) - 0.7).abs() < 1e-15);
        assert_eq!(curve_at(&pts, 1.0), 1.0);
    }

    #[test]
    fn best_param_ties_go_low() {
        let cell = |ari| Cell { ari, error: None };
        let s = SweepResult {
            family: Family::For,
            grid: vec![0.1, 0.2, 0.3],
            cells: vec![vec![cell(0.5), cell(0.7), cell(0.7)]],
        };
        let t = best_params_table(&[s]);
        assert_eq!((t[0].param, t[0].ari), (0.2, 0.7));
        let single = SweepResult {
            family: Family::Heat,
            grid: vec![0.4],
            cells: vec![vec![cell(0.1)]],
        };
        assert_eq!(single.best(), Some((0.4, 0.1)));
    }
}
