//! Seeded Monte Carlo estimation with Wilson score intervals — the
//! independent cross-check for every exact interval-measure probability.
//!
//! Trials are counted in fixed-size chunks, each driven by its own ChaCha
//! substream derived from the master seed, so a given (inputs, seed) pair
//! produces bit-identical estimates regardless of how chunks are scheduled
//! across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::{CounterexampleModel, HVValue};
use crate::oracle::{Angle, Outcome};

/// Confidence level used by the audit-facing estimators.
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Trials per substream chunk.
const CHUNK: u64 = 1 << 16;

// ---------------------------------------------------------------------------
// Estimate
// ---------------------------------------------------------------------------

/// A binomial Monte Carlo estimate with its Wilson confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub seed: u64,
}

impl Estimate {
    fn from_counts(successes: u64, trials: u64, confidence: f64, seed: u64) -> Result<Self> {
        let (ci_low, ci_high) = wilson_interval(successes, trials, confidence)?;
        Ok(Estimate {
            successes,
            trials,
            p_hat: successes as f64 / trials as f64,
            ci_low,
            ci_high,
            confidence,
            seed,
        })
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Wilson score interval for `successes` out of `trials` at the given
/// two-sided confidence level.
///
/// Chosen over the normal-approximation interval for its correct behavior
/// at proportions near 0 and 1, which deterministic indicators hit exactly;
/// those edge cases return exact 0/1 bounds.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidConfidence(confidence));
    }
    let n = trials as f64;
    let p_hat = successes as f64 / n;
    let z = Normal::standard().inverse_cdf(0.5 * (1.0 + confidence));
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / denom;
    let half = z * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the bounds are exactly 0 / 1 at the edges; pin them against round-off
    let low = if successes == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, 1.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        (center + half).clamp(0.0, 1.0)
    };
    Ok((low, high))
}

// ---------------------------------------------------------------------------
// Substreams
// ---------------------------------------------------------------------------

/// ChaCha substream `index` of the master `seed`. Distinct indices give
/// independent streams; the same (seed, index) always gives the same one.
pub fn substream(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Splits `n` trials into CHUNK-sized pieces, counts each on its own
/// substream in parallel, and sums. The outcome is a pure function of
/// (n, seed, count_chunk), independent of scheduling.
fn chunked_counts<T, F>(n: u64, seed: u64, zero: T, count_chunk: F) -> T
where
    T: Send,
    F: Fn(&mut ChaCha12Rng, u64) -> T + Sync,
    T: std::ops::Add<Output = T>,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            let trials = CHUNK.min(n - i * CHUNK);
            count_chunk(&mut rng, trials)
        })
        .reduce_with(|a, b| a + b)
        .unwrap_or(zero)
}

// ---------------------------------------------------------------------------
// Joint-outcome counting
// ---------------------------------------------------------------------------

/// Counts of the four outcome pairs over one batch of sampled runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointCounts {
    /// Indexed `[x][y]` with +1 at 0 and -1 at 1.
    pub counts: [[u64; 2]; 2],
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Copy)]
struct PairCounts([[u64; 2]; 2]);

impl std::ops::Add for PairCounts {
    type Output = PairCounts;
    fn add(self, other: PairCounts) -> PairCounts {
        let mut out = self.0;
        for (row, other_row) in out.iter_mut().zip(other.0) {
            for (cell, o) in row.iter_mut().zip(other_row) {
                *cell += o;
            }
        }
        PairCounts(out)
    }
}

fn outcome_index(o: Outcome) -> usize {
    match o {
        Outcome::Plus => 0,
        Outcome::Minus => 1,
    }
}

impl JointCounts {
    pub fn count(&self, x: Outcome, y: Outcome) -> u64 {
        self.counts[outcome_index(x)][outcome_index(y)]
    }

    /// Estimate of P[X = x, Y = y] at [`DEFAULT_CONFIDENCE`].
    pub fn estimate(&self, x: Outcome, y: Outcome) -> Estimate {
        Estimate::from_counts(self.count(x, y), self.trials, DEFAULT_CONFIDENCE, self.seed)
            .expect("trials >= 1 by construction")
    }

    /// Estimate of the agreement probability P[X = Y].
    pub fn agreement_estimate(&self) -> Estimate {
        let same = self.count(Outcome::Plus, Outcome::Plus)
            + self.count(Outcome::Minus, Outcome::Minus);
        Estimate::from_counts(same, self.trials, DEFAULT_CONFIDENCE, self.seed)
            .expect("trials >= 1 by construction")
    }

    /// Empirical correlation (N_same - N_diff) / N.
    pub fn correlation(&self) -> f64 {
        let same = self.count(Outcome::Plus, Outcome::Plus)
            + self.count(Outcome::Minus, Outcome::Minus);
        let diff = self.trials - same;
        (same as f64 - diff as f64) / self.trials as f64
    }
}

/// Runs `n` seeded trials of the model and tallies all four outcome pairs.
///
/// Each trial consumes two uniform draws (u then v), exactly as
/// [`CounterexampleModel::sample_run`] does, so per-pair estimates share
/// one underlying trial sequence and sum to `n`.
pub fn sample_joint_counts(
    model: &CounterexampleModel,
    theta: Angle,
    phi: Angle,
    n: u64,
    seed: u64,
) -> Result<JointCounts> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    let sets = model.response_sets(theta, phi);
    let total = chunked_counts(n, seed, PairCounts([[0; 2]; 2]), |rng, trials| {
        let mut counts = [[0u64; 2]; 2];
        for _ in 0..trials {
            let u = HVValue::from_unit(rng.random::<f64>());
            let v = HVValue::from_unit(rng.random::<f64>());
            let x = model.eval_x(theta, u);
            let y = sets.eval(v, x);
            counts[outcome_index(x)][outcome_index(y)] += 1;
        }
        PairCounts(counts)
    });
    Ok(JointCounts {
        counts: total.0,
        trials: n,
        seed,
    })
}

/// Estimate of one joint outcome probability P[X = x, Y = y].
pub fn estimate_joint(
    model: &CounterexampleModel,
    theta: Angle,
    phi: Angle,
    x: Outcome,
    y: Outcome,
    n: u64,
    seed: u64,
) -> Result<Estimate> {
    Ok(sample_joint_counts(model, theta, phi, n, seed)?.estimate(x, y))
}

/// Empirical form of the X-averaged conditional at fixed v: per trial,
/// X is sampled uniformly from {+1, -1} (one draw), Bob's outcome is
/// evaluated at the held-fixed v, and hits of Y = y are counted.
pub fn estimate_averaged_conditional(
    model: &CounterexampleModel,
    theta: Angle,
    phi: Angle,
    v: HVValue,
    y: Outcome,
    n: u64,
    seed: u64,
) -> Result<Estimate> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    let sets = model.response_sets(theta, phi);
    let hit_if_plus = sets.eval(v, Outcome::Plus) == y;
    let hit_if_minus = sets.eval(v, Outcome::Minus) == y;
    let successes = chunked_counts(n, seed, 0u64, |rng, trials| {
        let mut hits = 0u64;
        for _ in 0..trials {
            let x_plus = rng.random::<f64>() < 0.5;
            if (x_plus && hit_if_plus) || (!x_plus && hit_if_minus) {
                hits += 1;
            }
        }
        hits
    });
    Estimate::from_counts(successes, n, DEFAULT_CONFIDENCE, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn hv(p: f64) -> HVValue {
        HVValue::new(p).unwrap()
    }

    #[test]
    fn wilson_edges() {
        let (lo, _) = wilson_interval(0, 500, 0.99).unwrap();
        assert_eq!(lo, 0.0);
        let (_, hi) = wilson_interval(500, 500, 0.99).unwrap();
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn wilson_frozen_value() {
        // z = 1.959964 for 95%; interval from independent arithmetic
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        assert!((lo - 0.4038315303659957).abs() < 1e-8, "lo = {lo}");
        assert!((hi - 0.5961684696340044).abs() < 1e-8, "hi = {hi}");
    }

    #[test]
    fn wilson_errors() {
        assert_eq!(wilson_interval(0, 0, 0.99).unwrap_err(), Error::ZeroTrials);
        assert_eq!(
            wilson_interval(1, 2, 1.0).unwrap_err(),
            Error::InvalidConfidence(1.0)
        );
    }

    #[test]
    fn wilson_contains_p_hat() {
        for &(s, n) in &[(0u64, 7u64), (3, 7), (7, 7), (250, 1000)] {
            let (lo, hi) = wilson_interval(s, n, 0.99).unwrap();
            let p = s as f64 / n as f64;
            assert!(lo <= p && p <= hi);
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn joint_estimate_impossible_event() {
        // disagreement cannot happen at equal settings
        let d = CounterexampleModel::disjoint();
        let e = estimate_joint(
            &d,
            Angle::new(0.0),
            Angle::new(0.0),
            Outcome::Plus,
            Outcome::Minus,
            1000,
            42,
        )
        .unwrap();
        assert_eq!(e.p_hat, 0.0);
        assert_eq!(e.ci_low, 0.0);
    }

    #[test]
    fn joint_estimate_covers_exact_value() {
        // P[+1, +1] = 0.125 at (0, pi/3)
        for model in [
            CounterexampleModel::disjoint(),
            CounterexampleModel::maximal_overlap(),
        ] {
            let e = estimate_joint(
                &model,
                Angle::new(0.0),
                Angle::new(FRAC_PI_3),
                Outcome::Plus,
                Outcome::Plus,
                1_000_000,
                7,
            )
            .unwrap();
            assert!(e.contains(0.125), "CI [{}, {}]", e.ci_low, e.ci_high);
        }
    }

    #[test]
    fn estimates_are_reproducible() {
        let d = CounterexampleModel::disjoint();
        let a = estimate_joint(
            &d,
            Angle::new(0.3),
            Angle::new(1.1),
            Outcome::Plus,
            Outcome::Plus,
            200_000,
            0xDEADBEEF,
        )
        .unwrap();
        let b = estimate_joint(
            &d,
            Angle::new(0.3),
            Angle::new(1.1),
            Outcome::Plus,
            Outcome::Plus,
            200_000,
            0xDEADBEEF,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_seeds_differ() {
        let d = CounterexampleModel::disjoint();
        let a = sample_joint_counts(&d, Angle::new(0.3), Angle::new(1.1), 100_000, 1).unwrap();
        let b = sample_joint_counts(&d, Angle::new(0.3), Angle::new(1.1), 100_000, 2).unwrap();
        assert_ne!(a.counts, b.counts);
    }

    #[test]
    fn chunked_counting_matches_sample_run() {
        // the chunked fast path must consume draws exactly like sample_run
        let model = CounterexampleModel::maximal_overlap();
        let (theta, phi) = (Angle::new(0.2), Angle::new(1.3));
        let n = 3 * (CHUNK / 2) + 17; // straddles chunk boundaries
        let fast = sample_joint_counts(&model, theta, phi, n, 99).unwrap();
        let mut slow = [[0u64; 2]; 2];
        let chunks = n.div_ceil(CHUNK);
        for i in 0..chunks {
            let mut rng = substream(99, i);
            for _ in 0..CHUNK.min(n - i * CHUNK) {
                let (x, y) = model.sample_run(theta, phi, &mut rng);
                slow[outcome_index(x)][outcome_index(y)] += 1;
            }
        }
        assert_eq!(fast.counts, slow);
    }

    #[test]
    fn averaged_conditional_estimates() {
        let d = CounterexampleModel::disjoint();
        let e = estimate_averaged_conditional(
            &d,
            Angle::new(0.7),
            Angle::new(2.0),
            hv(0.3),
            Outcome::Plus,
            100_000,
            5,
        )
        .unwrap();
        assert!(e.contains(0.5));

        let o = CounterexampleModel::maximal_overlap();
        let sure = estimate_averaged_conditional(
            &o,
            Angle::new(0.0),
            Angle::new(FRAC_PI_3),
            hv(0.1),
            Outcome::Plus,
            10_000,
            5,
        )
        .unwrap();
        assert_eq!(sure.p_hat, 1.0);
        assert!(sure.contains(1.0));
        let never = estimate_averaged_conditional(
            &o,
            Angle::new(0.0),
            Angle::new(FRAC_PI_3),
            hv(0.9),
            Outcome::Plus,
            10_000,
            5,
        )
        .unwrap();
        assert_eq!(never.p_hat, 0.0);
    }

    #[test]
    fn zero_trials_error() {
        let d = CounterexampleModel::disjoint();
        assert_eq!(
            estimate_joint(
                &d,
                Angle::new(0.0),
                Angle::new(0.0),
                Outcome::Plus,
                Outcome::Plus,
                0,
                1
            )
            .unwrap_err(),
            Error::ZeroTrials
        );
        assert_eq!(
            estimate_averaged_conditional(
                &d,
                Angle::new(0.0),
                Angle::new(0.0),
                hv(0.5),
                Outcome::Plus,
                0,
                1
            )
            .unwrap_err()
            .to_string(),
            "zero trials"
        );
    }

    #[test]
    fn coverage_sanity() {
        // 200 independent seeds against the exact p = 0.125; a 99% interval
        // should miss about twice, and certainly not more than 10 times
        let o = CounterexampleModel::maximal_overlap();
        let exact = 0.125;
        let mut misses = 0;
        for seed in 0..200 {
            let e = estimate_joint(
                &o,
                Angle::new(0.0),
                Angle::new(FRAC_PI_3),
                Outcome::Plus,
                Outcome::Plus,
                10_000,
                seed,
            )
            .unwrap();
            if !e.contains(exact) {
                misses += 1;
            }
        }
        assert!(misses <= 10, "{misses} misses out of 200");
    }
}
