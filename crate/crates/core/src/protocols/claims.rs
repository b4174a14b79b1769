//! Summary statistics of a fable transcript and the checks run against them.

use serde::{Deserialize, Serialize};

use super::fable::{CarolRecord, CarolStrategy, FableConfig, FableOrdering, Transcript};
use super::Axis;

pub const FABLE_SCHEMA: &str = "fable-v1";

/// Statistical tolerance used when none is given: 0.01 at 10⁵ pairs and
/// above, widened as 1/√N below that.
pub fn default_stat_tol(n_pairs: usize) -> f64 {
    const FULL: f64 = 1e5;
    if n_pairs as f64 >= FULL {
        0.01
    } else {
        0.01 * (FULL / n_pairs.max(1) as f64).sqrt()
    }
}

/// Outcome counts for the runs along one axis, cells ordered
/// `[++, +−, −+, −−]` as (Alice, Bob).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisHistogram {
    pub axis: Axis,
    pub runs: usize,
    pub counts: [usize; 4],
    pub joint: [f64; 4],
    pub alice_up: Option<f64>,
    pub bob_up: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub schema: String,
    pub n_pairs: usize,
    pub zz_runs: usize,
    pub zz_fraction: Option<f64>,
    /// Case I: fraction of z runs where Carol's predictions are both right.
    pub zz_prediction_match_rate: Option<f64>,
    /// Case II: fraction of pairs Carol flags as singlets.
    pub flagged_fraction: Option<f64>,
    /// Case II: fraction of flagged pairs with opposite results.
    pub flagged_anticorrelation_rate: Option<f64>,
    pub anticorrelated_fraction: Option<f64>,
    /// Case II: flagged pairs over anticorrelated pairs.
    pub flagged_to_anticorrelated_ratio: Option<f64>,
    /// Case II with Carol going last: fraction she reports as triplets.
    pub carol_triplet_rejection_fraction: Option<f64>,
    pub histograms: Vec<AxisHistogram>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn cell(a: i8, b: i8) -> usize {
    (usize::from(a < 0) << 1) | usize::from(b < 0)
}

/// Tallies a transcript. Fractions over an empty set are `None`.
pub fn verify_claims(t: &Transcript) -> ClaimReport {
    let n = t.records.len();
    let mut counts = [[0usize; 4]; 3];
    let mut zz_hits = 0;
    let mut flagged = 0;
    let mut flagged_anti = 0;
    let mut anti = 0;
    let mut case_ii = false;
    for r in &t.records {
        counts[r.axis.index()][cell(r.alice_outcome, r.bob_outcome)] += 1;
        anti += usize::from(r.anticorrelated());
        match r.carol {
            CarolRecord::CaseI { predicted, .. } => {
                if r.axis == Axis::Z && predicted == (r.alice_outcome, r.bob_outcome) {
                    zz_hits += 1;
                }
            }
            CarolRecord::CaseII { singlet_flag, .. } => {
                case_ii = true;
                if singlet_flag {
                    flagged += 1;
                    flagged_anti += usize::from(r.anticorrelated());
                }
            }
        }
    }
    let zz_runs: usize = counts[Axis::Z.index()].iter().sum();
    let histograms = Axis::ALL
        .iter()
        .map(|&axis| {
            let c = counts[axis.index()];
            let runs: usize = c.iter().sum();
            AxisHistogram {
                axis,
                runs,
                counts: c,
                joint: c.map(|k| ratio(k, runs).unwrap_or(0.0)),
                alice_up: ratio(c[0] + c[1], runs),
                bob_up: ratio(c[0] + c[2], runs),
            }
        })
        .collect();
    let carol_last_ii = case_ii && t.config.ordering == FableOrdering::CarolLast;
    ClaimReport {
        schema: FABLE_SCHEMA.into(),
        n_pairs: n,
        zz_runs,
        zz_fraction: ratio(zz_runs, n),
        zz_prediction_match_rate: if case_ii { None } else { ratio(zz_hits, zz_runs) },
        flagged_fraction: if case_ii { ratio(flagged, n) } else { None },
        flagged_anticorrelation_rate: if case_ii { ratio(flagged_anti, flagged) } else { None },
        anticorrelated_fraction: ratio(anti, n),
        flagged_to_anticorrelated_ratio: if case_ii { ratio(flagged, anti) } else { None },
        carol_triplet_rejection_fraction: if carol_last_ii { ratio(n - flagged, n) } else { None },
        histograms,
    }
}

/// Largest difference between the two reports' joint (axis, Alice, Bob)
/// frequencies over all twelve cells.
pub fn histogram_distance(a: &ClaimReport, b: &ClaimReport) -> f64 {
    let freq = |r: &ClaimReport, h: usize, k: usize| {
        ratio(r.histograms[h].counts[k], r.n_pairs).unwrap_or(0.0)
    };
    (0..3)
        .flat_map(|h| (0..4).map(move |k| (h, k)))
        .map(|(h, k)| (freq(a, h, k) - freq(b, h, k)).abs())
        .fold(0.0, f64::max)
}

/// One claim compared against its expected value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub name: String,
    pub expected: f64,
    pub observed: Option<f64>,
    /// Zero for claims that must hold exactly.
    pub tolerance: f64,
    pub pass: bool,
}

/// A claim that must hold without exception; vacuously true when there is
/// nothing to check.
pub(crate) fn check_exact(name: &str, expected: f64, observed: Option<f64>) -> ClaimCheck {
    ClaimCheck {
        name: name.into(),
        expected,
        observed,
        tolerance: 0.0,
        pass: observed.is_none_or(|o| o == expected),
    }
}

pub(crate) fn check_within(name: &str, expected: f64, observed: Option<f64>, tol: f64) -> ClaimCheck {
    ClaimCheck {
        name: name.into(),
        expected,
        observed,
        tolerance: tol,
        pass: observed.is_some_and(|o| (o - expected).abs() <= tol),
    }
}

/// Checks for a fable run: uniform marginals and joint cells on every axis,
/// plus the exact and statistical claims of Carol's chosen case.
pub fn fable_checks(report: &ClaimReport, cfg: &FableConfig, stat_tol: f64) -> Vec<ClaimCheck> {
    let mut checks = Vec::new();
    for h in &report.histograms {
        let s = h.axis.symbol();
        checks.push(check_within(
            &format!("axis_{s}_fraction"),
            1.0 / 3.0,
            ratio(h.runs, report.n_pairs),
            stat_tol,
        ));
        checks.push(check_within(&format!("alice_up_{s}"), 0.5, h.alice_up, stat_tol));
        checks.push(check_within(&format!("bob_up_{s}"), 0.5, h.bob_up, stat_tol));
        for (k, name) in ["pp", "pm", "mp", "mm"].iter().enumerate() {
            let observed = (h.runs > 0).then_some(h.joint[k]);
            checks.push(check_within(&format!("joint_{s}_{name}"), 0.25, observed, stat_tol));
        }
    }
    match cfg.carol_strategy {
        CarolStrategy::CaseITrick => {
            checks.push(check_exact("zz_prediction_match_rate", 1.0, report.zz_prediction_match_rate));
        }
        CarolStrategy::CaseIITrick => {
            checks.push(check_exact(
                "flagged_anticorrelation_rate",
                1.0,
                report.flagged_anticorrelation_rate,
            ));
            checks.push(check_within("flagged_fraction", 0.25, report.flagged_fraction, stat_tol));
            checks.push(check_within(
                "flagged_to_anticorrelated_ratio",
                0.5,
                report.flagged_to_anticorrelated_ratio,
                2.0 * stat_tol,
            ));
            if cfg.ordering == FableOrdering::CarolLast {
                checks.push(check_within(
                    "carol_triplet_rejection_fraction",
                    0.75,
                    report.carol_triplet_rejection_fraction,
                    stat_tol,
                ));
            }
        }
    }
    checks
}
