//! Ward agglomerative clustering on squared distances, and (adjusted) Rand indices.

use crate::error::{Error, Result};
use crate::Matrix;

/// Relative tolerance under which two merge costs count as tied.
pub const TIE_TOL: f64 = 1e-12;
/// Negative input entries above `-NEGATIVE_CLAMP * scale` are clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-10;

/// A hard assignment of points to `k` nonempty clusters labelled `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Relabels arbitrary cluster ids to `0..k` in order of first appearance.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition { labels, k: map.len() }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// One agglomeration step: clusters `a < b` (named by their smallest member)
/// merge into `a` at `cost`, giving a cluster of `size` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub cost: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub n: usize,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    /// Applies the first `n − k` merges.
    pub fn cut(&self, k: usize) -> Result<Partition> {
        if k == 0 || k > self.n {
            return Err(Error::InvalidK { k, n: self.n });
        }
        let mut owner: Vec<usize> = (0..self.n).collect();
        for m in &self.merges[..self.n - k] {
            for o in owner.iter_mut() {
                if *o == m.b {
                    *o = m.a;
                }
            }
        }
        Ok(Partition::from_labels(&owner))
    }

    /// Number of merges whose cost drops below its predecessor by more than
    /// `1e-9` relative. Zero for squared-Euclidean input.
    pub fn inversions(&self) -> usize {
        let scale = self.merges.iter().fold(1.0_f64, |s, m| s.max(m.cost.abs()));
        self.merges
            .windows(2)
            .filter(|w| w[1].cost < w[0].cost - 1e-9 * scale)
            .count()
    }
}

fn validate(sqdist: &Matrix) -> Result<Matrix> {
    let n = sqdist.nrows();
    if sqdist.ncols() != n {
        return Err(Error::MalformedDistance(format!("{}x{} is not square", n, sqdist.ncols())));
    }
    let scale = sqdist.iter().fold(1.0_f64, |s, v| s.max(v.abs()));
    let mut d = sqdist.clone();
    for i in 0..n {
        for j in 0..n {
            let v = d[(i, j)];
            if !v.is_finite() {
                return Err(Error::MalformedDistance(format!("entry ({i}, {j}) is not finite")));
            }
            if (v - d[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::MalformedDistance(format!("asymmetric at ({i}, {j})")));
            }
            if i == j && v.abs() > 1e-12 * scale {
                return Err(Error::MalformedDistance(format!("diagonal entry {i} is {v}")));
            }
            if v < 0.0 {
                if v < -NEGATIVE_CLAMP * scale {
                    return Err(Error::MalformedDistance(format!("negative entry {v} at ({i}, {j})")));
                }
                d[(i, j)] = 0.0;
            }
        }
    }
    Ok(d)
}

/// Full Ward dendrogram via the Lance–Williams update
/// `d(k, i∪j) = ((n_i+n_k) d_ik + (n_j+n_k) d_jk − n_k d_ij) / (n_i+n_j+n_k)`.
///
/// Each step merges the lexicographically first closest pair: the smallest
/// row whose nearest-neighbour cost is within [`TIE_TOL`] of the global
/// minimum, paired with its smallest near-tied column.
pub fn ward_dendrogram(sqdist: &Matrix) -> Result<Dendrogram> {
    let d0 = validate(sqdist)?;
    let n = d0.nrows();
    let tie = TIE_TOL * d0.iter().fold(0.0_f64, |s, &v| s.max(v));
    let mut d: Vec<f64> = (0..n * n).map(|k| d0[(k / n, k % n)]).collect();
    let at = |i: usize, j: usize| i * n + j;
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut nn = vec![usize::MAX; n];
    let mut nn_cost = vec![f64::INFINITY; n];

    let nearest = |d: &[f64], active: &[bool], i: usize| -> (usize, f64) {
        let row = &d[i * n..(i + 1) * n];
        let mut best = f64::INFINITY;
        for j in (i + 1)..n {
            if active[j] && row[j] < best {
                best = row[j];
            }
        }
        let j = ((i + 1)..n)
            .find(|&j| active[j] && row[j] <= best + tie)
            .unwrap_or(usize::MAX);
        (j, best)
    };

    for i in 0..n {
        (nn[i], nn_cost[i]) = nearest(&d, &active, i);
    }

    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for _ in 1..n {
        let global = (0..n)
            .filter(|&i| active[i])
            .fold(f64::INFINITY, |m, i| m.min(nn_cost[i]));
        let i = (0..n)
            .find(|&i| active[i] && nn[i] != usize::MAX && nn_cost[i] <= global + tie)
            .expect("at least two active clusters");
        let j = nn[i];
        let cost = d[at(i, j)];
        let (si, sj) = (size[i] as f64, size[j] as f64);
        for k in 0..n {
            if !active[k] || k == i || k == j {
                continue;
            }
            let sk = size[k] as f64;
            let v = ((si + sk) * d[at(i, k)] + (sj + sk) * d[at(j, k)] - sk * cost) / (si + sj + sk);
            d[at(i, k)] = v;
            d[at(k, i)] = v;
        }
        active[j] = false;
        size[i] += size[j];
        merges.push(Merge {
            a: i,
            b: j,
            cost,
            size: size[i],
        });

        (nn[i], nn_cost[i]) = nearest(&d, &active, i);
        for k in 0..n {
            if !active[k] || k == i || k > j {
                continue;
            }
            let stale = nn[k] == i || nn[k] == j || (k < i && d[at(k, i)] <= nn_cost[k] + tie);
            if stale {
                (nn[k], nn_cost[k]) = nearest(&d, &active, k);
            }
        }
    }
    let dendrogram = Dendrogram { n, merges };
    debug_assert!(dendrogram.merges.len() == n.saturating_sub(1));
    Ok(dendrogram)
}

/// Ward clustering cut at `k` clusters.
pub fn ward_cluster(sqdist: &Matrix, k: usize) -> Result<Partition> {
    let n = sqdist.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    ward_dendrogram(sqdist)?.cut(k)
}

fn choose2(x: f64) -> f64 {
    x * (x - 1.0) / 2.0
}

struct PairCounts {
    index: f64,
    rows: f64,
    cols: f64,
    total: f64,
}

fn pair_counts(a: &Partition, b: &Partition) -> Result<PairCounts> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let mut table = vec![0usize; a.k() * b.k()];
    for (&x, &y) in a.labels().iter().zip(b.labels()) {
        table[x * b.k() + y] += 1;
    }
    let mut row = vec![0usize; a.k()];
    let mut col = vec![0usize; b.k()];
    for x in 0..a.k() {
        for y in 0..b.k() {
            row[x] += table[x * b.k() + y];
            col[y] += table[x * b.k() + y];
        }
    }
    Ok(PairCounts {
        index: table.iter().map(|&c| choose2(c as f64)).sum(),
        rows: row.iter().map(|&c| choose2(c as f64)).sum(),
        cols: col.iter().map(|&c| choose2(c as f64)).sum(),
        total: choose2(a.len() as f64),
    })
}

/// Share of point pairs on which the two partitions agree.
pub fn rand_index(a: &Partition, b: &Partition) -> Result<f64> {
    let c = pair_counts(a, b)?;
    if c.total == 0.0 {
        return Ok(1.0);
    }
    // agreements = pairs together in both + pairs apart in both
    let apart_both = c.total - c.rows - c.cols + c.index;
    Ok((c.index + apart_both) / c.total)
}

/// Hubert–Arabie adjusted Rand index.
///
/// Returns 1 when the chance-corrected denominator vanishes, which happens
/// only when both partitions are trivial in the same way.
pub fn adjusted_rand_index(a: &Partition, b: &Partition) -> Result<f64> {
    let c = pair_counts(a, b)?;
    if c.total == 0.0 {
        return Ok(1.0);
    }
    let expected = c.rows * c.cols / c.total;
    let max = 0.5 * (c.rows + c.cols);
    if max == expected {
        return Ok(1.0);
    }
    Ok((c.index - expected) / (max - expected))
}
