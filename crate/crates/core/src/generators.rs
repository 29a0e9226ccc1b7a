//! Block-model random graphs.
//!
//! Graph `index` of a spec is drawn from its own PCG stream, seeded by mixing
//! `(seed, index, attempt)` through splitmix64, so any graph can be
//! regenerated without drawing its predecessors.

use rand_core::Rng;
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph};
use crate::Matrix;

/// Resampling budget for [`generate`].
pub const MAX_ATTEMPTS: usize = 100;

/// Class sizes and the class-to-class edge probability matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockModelSpec {
    pub sizes: Vec<usize>,
    pub probabilities: Vec<Vec<f64>>,
    pub seed: u64,
}

impl BlockModelSpec {
    /// `G(N, (m) p_in, p_out)`: `m` classes of (near-)equal size.
    ///
    /// When `m` does not divide `N` the first `N mod m` classes get one extra node.
    pub fn uniform(n: usize, m: usize, p_in: f64, p_out: f64, seed: u64) -> Result<Self> {
        if m == 0 || n < m {
            return Err(Error::InvalidSpec(format!("cannot split {n} nodes into {m} classes")));
        }
        let sizes = (0..m).map(|k| n / m + usize::from(k < n % m)).collect();
        let spec = BlockModelSpec {
            sizes,
            probabilities: uniform_matrix(m, p_in, p_out),
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.sizes.len();
        if m == 0 || self.sizes.contains(&0) {
            return Err(Error::InvalidSpec("every class needs at least one node".into()));
        }
        if self.probabilities.len() != m || self.probabilities.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidSpec(format!("probability matrix must be {m}x{m}")));
        }
        for k in 0..m {
            for l in 0..m {
                let p = self.probabilities[k][l];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidSpec(format!("probability {p} at ({k}, {l})")));
                }
                if p != self.probabilities[l][k] {
                    return Err(Error::InvalidSpec(format!("probability matrix asymmetric at ({k}, {l})")));
                }
            }
        }
        Ok(())
    }

    /// Class index of every node; classes occupy contiguous node ranges.
    pub fn labels(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
            .collect()
    }
}

fn uniform_matrix(m: usize, p_in: f64, p_out: f64) -> Vec<Vec<f64>> {
    (0..m)
        .map(|k| (0..m).map(|l| if k == l { p_in } else { p_out }).collect())
        .collect()
}

/// Six heterogeneous classes of sizes 65, 35, 25, 13, 8 and 4 (150 nodes).
pub fn six_class_spec() -> BlockModelSpec {
    BlockModelSpec {
        sizes: vec![65, 35, 25, 13, 8, 4],
        probabilities: vec![
            vec![0.30, 0.20, 0.10, 0.15, 0.07, 0.25],
            vec![0.20, 0.24, 0.08, 0.13, 0.05, 0.17],
            vec![0.10, 0.08, 0.16, 0.09, 0.04, 0.12],
            vec![0.15, 0.13, 0.09, 0.20, 0.02, 0.14],
            vec![0.07, 0.05, 0.04, 0.02, 0.12, 0.04],
            vec![0.25, 0.17, 0.12, 0.14, 0.04, 0.40],
        ],
        seed: 0,
    }
}

/// Two classes of sizes `n1` and `n − n1` with uniform in/out probabilities.
pub fn two_class_unequal_spec(n1: usize, n: usize, p_in: f64, p_out: f64) -> Result<BlockModelSpec> {
    if n1 == 0 || n1 >= n {
        return Err(Error::InvalidSpec(format!("first class size {n1} must lie in 1..{n}")));
    }
    let spec = BlockModelSpec {
        sizes: vec![n1, n - n1],
        probabilities: uniform_matrix(2, p_in, p_out),
        seed: 0,
    };
    spec.validate()?;
    Ok(spec)
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The PCG stream for `(seed, index, attempt)`.
pub fn stream(seed: u64, index: u64, attempt: u64) -> Pcg64Mcg {
    let a = splitmix64(seed ^ splitmix64(index ^ splitmix64(attempt)));
    let b = splitmix64(a ^ 0xD1B5_4A32_D192_ED03);
    Pcg64Mcg::new((u128::from(a) << 64) | u128::from(b))
}

/// Uniform double in `[0, 1)` from the top 53 bits.
pub fn uniform01(rng: &mut impl Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws one graph without the connectivity requirement.
pub fn sample(spec: &BlockModelSpec, rng: &mut impl Rng) -> Graph {
    let labels = spec.labels();
    let n = labels.len();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if uniform01(rng) < spec.probabilities[labels[i]][labels[j]] {
                a[(i, j)] = 1.0;
                a[(j, i)] = 1.0;
            }
        }
    }
    Graph::new(a, Some(labels)).expect("sampled adjacency is valid")
}

/// Graph `index` of the spec: the first connected sample among up to
/// [`MAX_ATTEMPTS`] substreams.
pub fn generate(spec: &BlockModelSpec, index: u64) -> Result<Graph> {
    spec.validate()?;
    for attempt in 0..MAX_ATTEMPTS as u64 {
        let g = sample(spec, &mut stream(spec.seed, index, attempt));
        if is_connected(&g) {
            return Ok(g);
        }
    }
    Err(Error::CannotConnect {
        attempts: MAX_ATTEMPTS,
    })
}
