//! Acceptance criteria for the benchmark library, checked against
//! independent oracles and reference numbers.

pub mod criteria;
pub mod oracles;

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub id: &'static str,
    pub title: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:<7} {}: {}", self.id, self.outcome, self.title, self.detail)
    }
}

/// Groups of criteria selectable with `--only`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Monte-Carlo experiments on generated graphs (A1-A3).
    MonteCarlo,
    /// Dataset experiments (A4).
    Datasets,
    /// Oracle, invariant and limit checks (A5-A7).
    Properties,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "montecarlo" | "monte-carlo" => Ok(Suite::MonteCarlo),
            "datasets" => Ok(Suite::Datasets),
            "properties" => Ok(Suite::Properties),
            _ => Err(format!("unknown suite {s:?} (expected montecarlo, datasets or properties)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    pub workers: usize,
    pub data_root: std::path::PathBuf,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 1,
            workers: 0,
            data_root: kernelbench_core::datasets::data_root(),
        }
    }
}

pub type Criterion = fn(&Options) -> Report;

/// Every criterion with its suite, in order.
pub fn all() -> Vec<(&'static str, Suite, Criterion)> {
    vec![
        ("A1", Suite::MonteCarlo, criteria::a1_log_comm_optimum as Criterion),
        ("A2", Suite::MonteCarlo, criteria::a2_log_beats_plain),
        ("A3", Suite::MonteCarlo, criteria::a3_tournament_order),
        ("A4", Suite::Datasets, criteria::a4_zachary),
        ("A5", Suite::Properties, criteria::a5_oracles),
        ("A6", Suite::Properties, criteria::a6_invariants),
        ("A7", Suite::Properties, criteria::a7_rsp_fe_limit),
    ]
}

/// Runs the selected criteria; `only` filters by suite or criterion id.
pub fn run(options: &Options, only: Option<&str>, mut on_report: impl FnMut(&Report)) -> Vec<Report> {
    let suite = only.and_then(|s| s.parse::<Suite>().ok());
    all()
        .into_iter()
        .filter(|(id, s, _)| match (only, suite) {
            (None, _) => true,
            (Some(_), Some(want)) => *s == want,
            (Some(name), None) => id.eq_ignore_ascii_case(name),
        })
        .map(|(_, _, f)| {
            let r = f(options);
            on_report(&r);
            r
        })
        .collect()
}
