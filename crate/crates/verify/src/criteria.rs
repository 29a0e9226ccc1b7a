use kernelbench_core::clustering::{adjusted_rand_index, ward_cluster, Partition};
use kernelbench_core::datasets::{find, is_available, load_dataset};
use kernelbench_core::evaluation::{
    best_params_table, grid, reject_curve, sweep, Harness, Statistic, DATASET_GRID, DEFAULT_GRID,
};
use kernelbench_core::generators::{generate, stream, uniform01, BlockModelSpec};
use kernelbench_core::graph::named::{complete, cycle, path};
use kernelbench_core::graph::shortest_path_matrix;
use kernelbench_core::kernels::{
    comm_kernel, ct_kernel, family_matrix, forest_kernel, heat_kernel, log_kernel, pwalk_kernel, resistance_distance,
    rsp_fe_distance, DistanceMatrix, PathVariant,
};
use kernelbench_core::transforms::{distance_to_kernel, proximity_to_distance};
use kernelbench_core::{Family, Graph, Matrix, Scaling};
use rand_pcg::Pcg64Mcg;

use crate::oracles;
use crate::{Options, Outcome, Report};

fn report(id: &'static str, title: &'static str, ok: bool, detail: String) -> Report {
    Report {
        id,
        title,
        outcome: if ok { Outcome::Pass } else { Outcome::Fail },
        detail,
    }
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

fn block_graphs(n: usize, p_in: f64, p_out: f64, seed: u64, count: u64) -> kernelbench_core::Result<Vec<Graph>> {
    let spec = BlockModelSpec::uniform(n, 2, p_in, p_out, seed)?;
    (0..count).map(|i| generate(&spec, i)).collect()
}

fn best_by_family(graphs: &[Graph], options: &Options) -> kernelbench_core::Result<Vec<(Family, f64, f64)>> {
    let h = Harness::new(Scaling::default(), options.workers);
    let sweeps = h.sweep_graphs(graphs, &Family::ALL, &grid(DEFAULT_GRID))?;
    Ok(best_params_table(&sweeps)
        .into_iter()
        .map(|b| (b.family, b.param, b.ari))
        .collect())
}

fn lookup(table: &[(Family, f64, f64)], f: Family) -> f64 {
    table.iter().find(|r| r.0 == f).map_or(f64::NAN, |r| r.2)
}

/// logComm's best graph-averaged ARI on G(100,(2)0.3,0.1) is 0.9466 ± 0.06 and the best of all families.
pub fn a1_log_comm_optimum(options: &Options) -> Report {
    const ID: &str = "A1";
    const TITLE: &str = "logComm optimum on G(100,(2)0.3,0.1)";
    let table = match block_graphs(100, 0.3, 0.1, options.seed, 50).and_then(|g| best_by_family(&g, options)) {
        Ok(t) => t,
        Err(e) => return report(ID, TITLE, false, e.to_string()),
    };
    let lc = lookup(&table, Family::LogComm);
    let (rival, rival_ari) = table
        .iter()
        .filter(|r| r.0 != Family::LogComm)
        .map(|r| (r.0, r.2))
        .fold((Family::For, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let ok = (lc - 0.9466).abs() <= 0.06 && lc > rival_ari;
    let summary: Vec<String> = table.iter().map(|(f, p, a)| format!("{f}={a:.4}@{p:.2}")).collect();
    report(
        ID,
        TITLE,
        ok,
        format!("logComm {lc:.4} (target 0.9466 ± 0.06), runner-up {rival} {rival_ari:.4}; {}", summary.join(" ")),
    )
}

/// logFor beats For and logHeat beats Heat by at least 0.05 on G(100,(2)0.2,0.05).
pub fn a2_log_beats_plain(options: &Options) -> Report {
    const ID: &str = "A2";
    const TITLE: &str = "log measures beat plain ones on G(100,(2)0.2,0.05)";
    let graphs = match block_graphs(100, 0.2, 0.05, options.seed, 50) {
        Ok(g) => g,
        Err(e) => return report(ID, TITLE, false, e.to_string()),
    };
    let families = [Family::For, Family::LogFor, Family::Heat, Family::LogHeat];
    let h = Harness::new(Scaling::default(), options.workers);
    let sweeps = match h.sweep_graphs(&graphs, &families, &grid(DEFAULT_GRID)) {
        Ok(s) => s,
        Err(e) => return report(ID, TITLE, false, e.to_string()),
    };
    let best: Vec<f64> = sweeps.iter().map(|s| s.best().map_or(f64::NAN, |b| b.1)).collect();
    let (gap_for, gap_heat) = (best[1] - best[0], best[3] - best[2]);
    report(
        ID,
        TITLE,
        gap_for >= 0.05 && gap_heat >= 0.05,
        format!(
            "For {:.4} logFor {:.4} (gap {gap_for:.4}); Heat {:.4} logHeat {:.4} (gap {gap_heat:.4}); need >= 0.05",
            best[0], best[1], best[2], best[3]
        ),
    )
}

/// Copeland totals over p_out ∈ {0.1, 0.15}: logComm and SCCT lead, For is last.
pub fn a3_tournament_order(options: &Options) -> Report {
    const ID: &str = "A3";
    const TITLE: &str = "Copeland tournament order";
    let mut tasks = Vec::new();
    for (k, p_out) in [0.1, 0.15].into_iter().enumerate() {
        match block_graphs(100, 0.3, p_out, options.seed + k as u64, 20) {
            Ok(g) => tasks.push((format!("G(100,(2)0.3,{p_out})"), g)),
            Err(e) => return report(ID, TITLE, false, e.to_string()),
        }
    }
    let h = Harness::new(Scaling::default(), options.workers);
    let result = match h.tournament(&tasks, &Family::ALL, &grid(DEFAULT_GRID), Statistic::Max) {
        Ok((r, _)) => r,
        Err(e) => return report(ID, TITLE, false, e.to_string()),
    };
    let ranking = result.ranking();
    let top: Vec<Family> = ranking.iter().take(2).map(|r| r.0).collect();
    let top_ok = top.contains(&Family::LogComm) && top.contains(&Family::Scct) && ranking[2].1 < ranking[1].1;
    let (last, last_score) = ranking[ranking.len() - 1];
    let last_ok = last == Family::For && ranking[ranking.len() - 2].1 > last_score;
    let listing: Vec<String> = ranking.iter().map(|(f, s)| format!("{f}={s}")).collect();
    report(ID, TITLE, top_ok && last_ok, listing.join(" "))
}

/// Every family except For reaches ARI 1 on Zachary's karate club for some parameter.
pub fn a4_zachary(options: &Options) -> Report {
    const ID: &str = "A4";
    const TITLE: &str = "Zachary: all families but For reach ARI 1";
    let desc = find("zachary").expect("zachary is registered");
    if !is_available(&desc, &options.data_root) {
        return Report {
            id: ID,
            title: TITLE,
            outcome: Outcome::Skipped,
            detail: "dataset files missing".into(),
        };
    }
    let g = match load_dataset(&desc, &options.data_root) {
        Ok(g) => g,
        Err(e) => return report(ID, TITLE, false, e.to_string()),
    };
    let params = grid(DATASET_GRID);
    let mut missing = Vec::new();
    let mut for_best = f64::NAN;
    for family in Family::ALL {
        let best = match sweep(&g, family, &params, 2) {
            Ok(cells) => cells.iter().map(|c| c.ari).fold(f64::NEG_INFINITY, f64::max),
            Err(e) => return report(ID, TITLE, false, format!("{family}: {e}")),
        };
        if family == Family::For {
            for_best = best;
        } else if best != 1.0 {
            missing.push(format!("{family} (best {best:.4})"));
        }
    }
    let detail = if missing.is_empty() {
        format!("all 12 reach 1.0; For best {for_best:.4}")
    } else {
        format!(
            "not reaching 1.0: {}; For best {for_best:.4}; tolerated failures <= 1; {}",
            missing.join(", "),
            label_disagreement(&g)
        )
    };
    report(ID, TITLE, missing.len() <= 1, detail)
}

/// Nodes (1-based) where logComm's mid-grid Ward split disagrees with the labels.
fn label_disagreement(g: &Graph) -> String {
    let run = || -> kernelbench_core::Result<Vec<usize>> {
        let prepared = kernelbench_core::PreparedGraph::new(g.clone())?;
        let m = prepared.evaluate(Family::LogComm, 0.5, &Scaling::default())?;
        let part = ward_cluster(&kernelbench_core::transforms::ward_input(&m)?, 2)?;
        let labels = g.labels().ok_or(kernelbench_core::Error::MissingLabels)?;
        let differ: Vec<usize> = (0..g.n()).filter(|&i| part.labels()[i] != labels[i]).collect();
        let same: Vec<usize> = (0..g.n()).filter(|&i| part.labels()[i] == labels[i]).collect();
        let fewer = if differ.len() <= same.len() { differ } else { same };
        Ok(fewer.into_iter().map(|i| i + 1).collect())
    };
    match run() {
        Ok(nodes) => format!("the Ward split at logComm p=0.5 differs from the labels at nodes {nodes:?}"),
        Err(e) => format!("diagnostic failed: {e}"),
    }
}

fn rng(options: &Options, salt: u64) -> Pcg64Mcg {
    stream(options.seed, salt, 0)
}

fn below(rng: &mut Pcg64Mcg, n: usize) -> usize {
    ((uniform01(rng) * n as f64) as usize).min(n - 1)
}

fn random_points(rng: &mut Pcg64Mcg, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| uniform01(rng) * 10.0 - 5.0).collect())
        .collect()
}

fn squared_euclidean(points: &[Vec<f64>]) -> Matrix {
    let n = points.len();
    Matrix::from_fn(n, n, |i, j| {
        points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum()
    })
}

/// Library routines agree with the independent oracles.
pub fn a5_oracles(options: &Options) -> Report {
    let mut failures = Vec::new();
    let mut rng = rng(options, 5);

    // Adjusted Rand index against pair counting.
    let mut worst_ari = 0.0_f64;
    for _ in 0..500 {
        let n = 2 + below(&mut rng, 11);
        let (ka, kb) = (1 + below(&mut rng, 4), 1 + below(&mut rng, 4));
        let a: Vec<usize> = (0..n).map(|_| below(&mut rng, ka)).collect();
        let b: Vec<usize> = (0..n).map(|_| below(&mut rng, kb)).collect();
        let got = adjusted_rand_index(&Partition::from_labels(&a), &Partition::from_labels(&b)).unwrap();
        worst_ari = worst_ari.max((got - oracles::ari_pair_counting(&a, &b)).abs());
    }
    if worst_ari > 1e-12 {
        failures.push(format!("ARI deviates by {worst_ari:e}"));
    }

    // Ward against exhaustive merging.
    let mut ward_mismatch = 0;
    for _ in 0..100 {
        let n = 3 + below(&mut rng, 6);
        let dim = 1 + below(&mut rng, 3);
        let d = squared_euclidean(&random_points(&mut rng, n, dim));
        let k = 1 + below(&mut rng, n);
        let got = ward_cluster(&d, k).unwrap();
        if got != Partition::from_labels(&oracles::ward_brute_force(&d, k)) {
            ward_mismatch += 1;
        }
    }
    if ward_mismatch > 0 {
        failures.push(format!("Ward differs on {ward_mismatch}/100 inputs"));
    }

    // Reject-curve AUC against Mann-Whitney.
    let mut worst_auc = 0.0_f64;
    for trial in 0..200 {
        let n = 4 + below(&mut rng, 17);
        let mut labels: Vec<usize> = (0..n).map(|_| below(&mut rng, 3)).collect();
        labels[0] = 0;
        labels[1] = 0;
        labels[2] = 1;
        let coarse = trial % 2 == 0;
        let mut d = Matrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = uniform01(&mut rng) * 4.0;
                d[(i, j)] = if coarse { v.round() } else { v };
                d[(j, i)] = d[(i, j)];
            }
        }
        let got = reject_curve(&d, &labels).unwrap().auc;
        worst_auc = worst_auc.max((got - oracles::mann_whitney_auc(&d, &labels)).abs());
    }
    if worst_auc > 1e-12 {
        failures.push(format!("AUC deviates by {worst_auc:e}"));
    }

    // pWalk against the Neumann series, communicability against Taylor.
    let sbm = generate(&BlockModelSpec::uniform(14, 2, 0.5, 0.15, options.seed).unwrap(), 0).unwrap();
    let mut worst_series = 0.0_f64;
    for g in [cycle(6), path(5), sbm.clone()] {
        let rho = g.adjacency().symmetric_eigenvalues().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for p in [0.2, 0.5, 0.8] {
            let t = p / rho;
            let got = pwalk_kernel(&g, t).unwrap().matrix;
            let want = oracles::neumann_series(g.adjacency(), t);
            worst_series = worst_series.max(max_abs(&(got - &want)) / max_abs(&want));
        }
        for t in [0.1, 1.0, 3.0] {
            let got = comm_kernel(&g, t).unwrap().matrix;
            let want = oracles::exp_taylor(&(g.adjacency() * t));
            worst_series = worst_series.max(max_abs(&(got - &want)) / max_abs(&want));
        }
    }
    if worst_series > 1e-9 {
        failures.push(format!("series oracles deviate by {worst_series:e}"));
    }

    // Resistances from series and parallel rules.
    let diamond = Graph::from_edges(4, &[(0, 1), (1, 3), (0, 2), (2, 3)], None).unwrap();
    let hand = [
        (complete(3), 0, 1, 2.0 / 3.0),
        (path(3), 0, 2, 2.0),
        (path(5), 0, 4, 4.0),
        (diamond, 0, 3, 1.0),
        (cycle(5), 0, 2, 2.0 * 3.0 / 5.0),
    ];
    for (g, i, j, want) in hand {
        let got = resistance_distance(&g).unwrap().matrix[(i, j)];
        if (got - want).abs() > 1e-12 {
            failures.push(format!("resistance {got} != {want}"));
        }
    }

    let ok = failures.is_empty();
    let detail = if ok {
        format!(
            "ARI max dev {worst_ari:.1e}; Ward 100/100; AUC max dev {worst_auc:.1e}; series rel dev {worst_series:.1e}; resistances exact"
        )
    } else {
        failures.join("; ")
    };
    report("A5", "oracle equivalence", ok, detail)
}

/// Resistance through grounded-Laplacian inverses, independent of the pseudoinverse.
fn grounded_resistance(g: &Graph) -> Matrix {
    let n = g.n();
    let l = g.laplacian().matrix().clone();
    let mut r = Matrix::zeros(n, n);
    for j in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let sub = Matrix::from_fn(n - 1, n - 1, |a, b| l[(keep[a], keep[b])]);
        let inv = sub.try_inverse().expect("grounded Laplacian is invertible");
        for (a, &i) in keep.iter().enumerate() {
            r[(i, j)] = inv[(a, a)];
        }
    }
    r
}

/// Structural invariants of kernels, transforms and tournaments.
pub fn a6_invariants(options: &Options) -> Report {
    let mut failures = Vec::new();
    let g = generate(&BlockModelSpec::uniform(30, 2, 0.4, 0.1, options.seed).unwrap(), 0).unwrap();

    for family in Family::ALL {
        for p in [0.1, 0.5, 0.9] {
            if let Ok(m) = family_matrix(&g, family, p) {
                let m = m.matrix();
                if max_abs(&(m - m.transpose())) > 1e-10 * max_abs(m).max(1.0) {
                    failures.push(format!("{family} asymmetric at {p}"));
                }
            }
        }
    }

    for t in [0.1, 1.0, 10.0] {
        for k in [heat_kernel(&g, t).unwrap(), forest_kernel(&g, t).unwrap()] {
            let worst = (0..g.n()).map(|i| (k.matrix.row(i).sum() - 1.0).abs()).fold(0.0, f64::max);
            if worst > 1e-10 {
                failures.push(format!("{} row sums off by {worst:e}", k.name));
            }
        }
    }

    let induced = proximity_to_distance(&ct_kernel(&g).unwrap()).unwrap().matrix;
    let ct_dev = max_abs(&(induced - grounded_resistance(&g)));
    if ct_dev > 1e-10 {
        failures.push(format!("CT distance vs resistance {ct_dev:e}"));
    }

    let p3 = path(3);
    let mut cut_dev = 0.0_f64;
    for i in 1..=10 {
        let t = 0.05 * (i * i) as f64;
        let d = proximity_to_distance(&log_kernel(&forest_kernel(&p3, t).unwrap()).unwrap())
            .unwrap()
            .matrix;
        cut_dev = cut_dev.max((d[(0, 1)] + d[(1, 2)] - d[(0, 2)]).abs());
    }
    if cut_dev > 1e-8 {
        failures.push(format!("logFor cutpoint additivity off by {cut_dev:e}"));
    }

    let mut rng = rng(options, 6);
    let pts = random_points(&mut rng, 12, 3);
    let sq = squared_euclidean(&pts);
    let dm = DistanceMatrix::new(sq.map(f64::sqrt), "points", 0.0).unwrap();
    let roundtrip = max_abs(&(proximity_to_distance(&distance_to_kernel(&dm)).unwrap().matrix - &sq)) / max_abs(&sq);
    if roundtrip > 1e-12 {
        failures.push(format!("double-centering roundtrip off by {roundtrip:e}"));
    }

    let tasks: Vec<(String, Vec<Graph>)> = (0..2)
        .map(|k| {
            let spec = BlockModelSpec::uniform(40, 2, 0.4, 0.12, options.seed + 10 + k).unwrap();
            (format!("task{k}"), (0..4).map(|i| generate(&spec, i).unwrap()).collect())
        })
        .collect();
    let families = [Family::For, Family::LogFor, Family::LogComm, Family::Sct, Family::Fe];
    let params = grid(8);
    let serial = Harness::new(Scaling::default(), 1).tournament(&tasks, &families, &params, Statistic::Max);
    let pooled = Harness::new(Scaling::default(), 4).tournament(&tasks, &families, &params, Statistic::Max);
    match (serial, pooled) {
        (Ok(a), Ok(b)) => {
            for t in 0..tasks.len() {
                if a.0.scores.iter().map(|r| r[t]).sum::<i64>() != 0 {
                    failures.push(format!("task {t} not zero-sum"));
                }
            }
            if a != b {
                failures.push("tournament depends on worker count".into());
            }
        }
        (a, b) => failures.push(format!("tournament failed: {:?} {:?}", a.err(), b.err())),
    }

    let ok = failures.is_empty();
    let detail = if ok {
        format!("symmetry, row sums, CT=resistance ({ct_dev:.1e}), cutpoint ({cut_dev:.1e}), roundtrip ({roundtrip:.1e}), zero-sum, worker determinism")
    } else {
        failures.join("; ")
    };
    report("A6", "invariants", ok, detail)
}

/// RSP and FE approach shortest paths at β = 20 and never undercut them.
pub fn a7_rsp_fe_limit(options: &Options) -> Report {
    let random = match generate(&BlockModelSpec::uniform(10, 1, 0.35, 0.35, options.seed).unwrap(), 0) {
        Ok(g) => g,
        Err(e) => return report("A7", "RSP/FE low-temperature limit", false, e.to_string()),
    };
    let betas: Vec<f64> = grid(DEFAULT_GRID).iter().map(|p| p / (1.0 - p)).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g) in [("P3", path(3)), ("random n=10", random)] {
        let sp = oracles::hop_distances(g.adjacency());
        debug_assert_eq!(sp, shortest_path_matrix(&g).unwrap());
        for variant in [PathVariant::Rsp, PathVariant::Fe] {
            let at20 = rsp_fe_distance(&g, 20.0, variant).unwrap().matrix;
            let dev = max_abs(&(at20 - &sp));
            let mut undercut = 0.0_f64;
            for &beta in &betas {
                let d = rsp_fe_distance(&g, beta, variant).unwrap().matrix;
                undercut = undercut.max((&sp - d).iter().fold(0.0_f64, |m, &v| m.max(v)));
            }
            let pass = dev <= 1e-2 && undercut <= 1e-8;
            ok &= pass;
            parts.push(format!(
                "{name} {variant:?}: |Δ−D^s| at β=20 {dev:.2e} (need <= 1e-2), max undercut {undercut:.1e}{}",
                if pass { "" } else { " FAIL" }
            ));
        }
    }
    report("A7", "RSP/FE low-temperature limit", ok, parts.join("; "))
}
