//! Slow reference implementations, written without reusing the library's
//! numerical routines.

use kernelbench_core::Matrix;

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

/// ARI from the four pair counts: together in both (a), only in the first (b),
/// only in the second (c), apart in both (d).
pub fn ari_pair_counting(x: &[usize], y: &[usize]) -> f64 {
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    for (i, j) in pairs(x.len()) {
        match (x[i] == x[j], y[i] == y[j]) {
            (true, true) => a += 1.0,
            (true, false) => b += 1.0,
            (false, true) => c += 1.0,
            (false, false) => d += 1.0,
        }
    }
    let denom = (a + b) * (b + d) + (a + c) * (c + d);
    if denom == 0.0 {
        return 1.0;
    }
    2.0 * (a * d - b * c) / denom
}

/// Within-cluster scatter from squared distances: `Σ_{i,j∈S} d_ij / (2|S|)`.
fn scatter(d: &Matrix, s: &[usize]) -> f64 {
    let mut total = 0.0;
    for &i in s {
        for &j in s {
            total += d[(i, j)];
        }
    }
    total / (2.0 * s.len() as f64)
}

/// Ward clustering by exhaustive search: every step merges the pair of
/// clusters whose union increases total scatter least.
pub fn ward_brute_force(d: &Matrix, k: usize) -> Vec<usize> {
    let n = d.nrows();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while clusters.len() > k {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let mut union = clusters[a].clone();
                union.extend(&clusters[b]);
                let cost = scatter(d, &union) - scatter(d, &clusters[a]) - scatter(d, &clusters[b]);
                if cost < best.0 {
                    best = (cost, a, b);
                }
            }
        }
        let (_, a, b) = best;
        let moved = clusters.remove(b);
        clusters[a].extend(moved);
    }
    let mut labels = vec![0; n];
    for (c, members) in clusters.iter().enumerate() {
        for &i in members {
            labels[i] = c;
        }
    }
    labels
}

/// `P(intra < inter) + ½ P(intra = inter)` over all intra/inter pair combinations.
pub fn mann_whitney_auc(d: &Matrix, labels: &[usize]) -> f64 {
    let n = d.nrows();
    let intra: Vec<f64> = pairs(n).filter(|&(i, j)| labels[i] == labels[j]).map(|(i, j)| d[(i, j)]).collect();
    let inter: Vec<f64> = pairs(n).filter(|&(i, j)| labels[i] != labels[j]).map(|(i, j)| d[(i, j)]).collect();
    let mut score = 0.0;
    for &x in &intra {
        for &y in &inter {
            if x < y {
                score += 1.0;
            } else if x == y {
                score += 0.5;
            }
        }
    }
    score / (intra.len() * inter.len()) as f64
}

/// `Σ_k (tA)^k`, summed until the terms stop mattering.
pub fn neumann_series(a: &Matrix, t: f64) -> Matrix {
    let n = a.nrows();
    let step = a * t;
    let mut term = Matrix::identity(n, n);
    let mut sum = term.clone();
    for _ in 0..100_000 {
        term = &term * &step;
        sum += &term;
        if term.iter().all(|v| v.abs() < 1e-17) {
            break;
        }
    }
    sum
}

/// Matrix exponential by scaling and squaring around a 30-term Taylor series.
pub fn exp_taylor(m: &Matrix) -> Matrix {
    let n = m.nrows();
    let norm = m.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0;
    while norm / f64::from(1u32 << squarings.min(30)) > 0.5 {
        squarings += 1;
    }
    let scaled = m / f64::from(1u32 << squarings);
    let mut term = Matrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Breadth-first hop distances.
pub fn hop_distances(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut d = Matrix::from_element(n, n, f64::INFINITY);
    for s in 0..n {
        d[(s, s)] = 0.0;
        let mut frontier = vec![s];
        let mut level = 0.0;
        while !frontier.is_empty() {
            level += 1.0;
            let mut next = Vec::new();
            for &u in &frontier {
                for v in 0..n {
                    if a[(u, v)] != 0.0 && d[(s, v)].is_infinite() {
                        d[(s, v)] = level;
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
    }
    d
}
