//! Monte Carlo engine for classical self-avoiding random walks on a line.
//!
//! Each neighbor is weighted `exp(-g * n)` by its visit count `n` (or
//! `n mod 2` in the variant mirroring the flip-flop unitary memory), so `g`
//! tunes continuously from an ordinary random walk at `g = 0` to a fully
//! self-avoiding one. `g` around 46 already pushes the revisit probability
//! below 1e-20, which is indistinguishable from the `g = infinity` limit;
//! there is no special infinity handling.
//!
//! Replicates draw from ChaCha substreams keyed by `(seed, replicate
//! index)` and aggregate through exact integer sums, so an ensemble is
//! bit-reproducible no matter how the replicates are scheduled.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{fit_power, PowerFit, VariancePoint, VarianceSeries};
use crate::error::{Error, Result};

/// Configuration of one classical ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SawConfig {
    /// Self-avoidance strength, `>= 0`.
    pub g: f64,
    pub steps: usize,
    pub replicates: usize,
    /// Count visits modulo 2 instead of cumulatively.
    pub mod2: bool,
    pub seed: u64,
}

impl SawConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.g.is_finite() || self.g < 0.0 {
            return Err(Error::InvalidSawConfig(format!(
                "g must be finite and >= 0, got {}",
                self.g
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidSawConfig("steps must be >= 1".into()));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidSawConfig("replicates must be >= 1".into()));
        }
        Ok(())
    }
}

/// Visit counts of a single walk, on an unbounded line. The origin counts
/// as visited before the first step.
#[derive(Debug, Clone, Default)]
pub struct VisitLedger {
    counts: HashMap<i64, u64>,
    current: i64,
}

impl VisitLedger {
    pub fn new() -> Self {
        let mut ledger = VisitLedger {
            counts: HashMap::new(),
            current: 0,
        };
        ledger.counts.insert(0, 1);
        ledger
    }

    pub fn current(&self) -> i64 {
        self.current
    }

    pub fn visits(&self, site: i64) -> u64 {
        self.counts.get(&site).copied().unwrap_or(0)
    }

    /// Moves the walker to an adjacent site, recording the visit.
    pub fn step_to(&mut self, site: i64) {
        debug_assert_eq!((site - self.current).abs(), 1, "steps move one site");
        *self.counts.entry(site).or_insert(0) += 1;
        self.current = site;
    }
}

/// Probabilities `(q_left, q_right)` of stepping to the two neighbors:
/// `q_i = exp(-g m_i) / sum_j exp(-g m_j)` with `m_i` the neighbor's visit
/// count (mod 2 if requested). Weights are shifted by the smaller exponent
/// before exponentiating, so the split stays exact even when both counts
/// are huge.
pub fn step_probabilities(ledger: &VisitLedger, g: f64, mod2: bool) -> (f64, f64) {
    let count = |site: i64| {
        let n = ledger.visits(site);
        if mod2 {
            n % 2
        } else {
            n
        }
    };
    let m_left = count(ledger.current() - 1) as f64;
    let m_right = count(ledger.current() + 1) as f64;
    let base = m_left.min(m_right);
    let w_left = (-g * (m_left - base)).exp();
    let w_right = (-g * (m_right - base)).exp();
    let total = w_left + w_right;
    (w_left / total, w_right / total)
}

fn walk_positions(config: &SawConfig, replicate: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(replicate);
    let mut ledger = VisitLedger::new();
    let mut positions = Vec::with_capacity(config.steps + 1);
    positions.push(0);
    for _ in 0..config.steps {
        let (q_left, _) = step_probabilities(&ledger, config.g, config.mod2);
        let u: f64 = rng.random();
        let next = if u < q_left {
            ledger.current() - 1
        } else {
            ledger.current() + 1
        };
        ledger.step_to(next);
        positions.push(next);
    }
    positions
}

/// Runs `replicates` independent walks and records the ensemble mean and
/// (population) variance of the position at every step. Deterministic for
/// a fixed seed: replicates use independent RNG substreams and are reduced
/// in replicate-index order over exact integer accumulators.
pub fn simulate_saw(config: &SawConfig) -> Result<VarianceSeries> {
    config.validate()?;
    let len = config.steps + 1;

    let per_replicate: Vec<Vec<i64>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| walk_positions(config, r as u64))
        .collect();

    let mut sum = vec![0i64; len];
    let mut sum_sq = vec![0i64; len];
    for positions in &per_replicate {
        for (t, &x) in positions.iter().enumerate() {
            sum[t] += x;
            sum_sq[t] += x * x;
        }
    }

    let n = config.replicates as f64;
    let entries = (0..len)
        .map(|t| {
            let mu = sum[t] as f64 / n;
            let var = (sum_sq[t] as f64 / n - mu * mu).max(0.0);
            VariancePoint { t, mu, var }
        })
        .collect();
    VarianceSeries::new(entries)
}

/// Derives the per-point seed for grid entry `index` from the base seed
/// (splitmix64 of the xored pair).
fn grid_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Simulates one ensemble per `g` value and fits the variance exponent for
/// each; per-g seeds are derived deterministically from the base seed and
/// the grid index.
pub fn beta_vs_g(
    g_grid: &[f64],
    steps: usize,
    replicates: usize,
    mod2: bool,
    seed: u64,
) -> Result<Vec<(f64, PowerFit)>> {
    if g_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    g_grid
        .iter()
        .enumerate()
        .map(|(index, &g)| {
            let config = SawConfig {
                g,
                steps,
                replicates,
                mod2,
                seed: grid_seed(seed, index as u64),
            };
            let series = simulate_saw(&config)?;
            let fit = fit_power(&series)?;
            Ok((g, fit))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_neighbors_split_evenly() {
        let ledger = VisitLedger::new();
        assert_eq!(step_probabilities(&ledger, 0.0, false), (0.5, 0.5));
        assert_eq!(step_probabilities(&ledger, 7.3, false), (0.5, 0.5));
    }

    #[test]
    fn ln2_penalty_gives_one_third_two_thirds() {
        // left visited once, right never
        let mut ledger = VisitLedger::new();
        ledger.step_to(-1);
        ledger.step_to(0);
        for mod2 in [false, true] {
            let (q_left, q_right) = step_probabilities(&ledger, 2f64.ln(), mod2);
            assert!((q_left - 1.0 / 3.0).abs() < 1e-15, "mod2 = {mod2}");
            assert!((q_right - 2.0 / 3.0).abs() < 1e-15, "mod2 = {mod2}");
        }
    }

    #[test]
    fn mod2_counting_forgets_even_visit_counts() {
        // left visited twice: mod-2 count is 0, so the split is even again
        let mut ledger = VisitLedger::new();
        ledger.step_to(-1);
        ledger.step_to(0);
        ledger.step_to(-1);
        ledger.step_to(0);
        assert_eq!(ledger.visits(-1), 2);
        let (q_left, q_right) = step_probabilities(&ledger, 5.0, true);
        assert_eq!((q_left, q_right), (0.5, 0.5));
        let (q_left, _) = step_probabilities(&ledger, 5.0, false);
        assert!(q_left < 1e-4);
    }

    #[test]
    fn probabilities_stay_normalized_for_huge_counts() {
        let mut ledger = VisitLedger::new();
        // both neighbors visited many times: shifted weights avoid 0/0
        for _ in 0..50 {
            ledger.step_to(1);
            ledger.step_to(0);
            ledger.step_to(-1);
            ledger.step_to(0);
        }
        for g in [0.0, 1.0, 100.0, 700.0] {
            let (q_left, q_right) = step_probabilities(&ledger, g, false);
            assert!((q_left + q_right - 1.0).abs() < 1e-15, "g = {g}");
            assert!(q_left > 0.0 && q_right > 0.0);
        }
    }

    #[test]
    fn free_walk_variance_is_linear_in_time() {
        let config = SawConfig {
            g: 0.0,
            steps: 200,
            replicates: 1000,
            mod2: false,
            seed: 42,
        };
        let series = simulate_saw(&config).unwrap();
        let last = series.entries().last().unwrap();
        assert_eq!(last.t, 200);
        assert!((last.var - 200.0).abs() < 20.0, "var(200) = {}", last.var);
    }

    #[test]
    fn free_walk_mean_stays_within_three_standard_errors() {
        let config = SawConfig {
            g: 0.0,
            steps: 200,
            replicates: 1000,
            mod2: false,
            seed: 42,
        };
        let series = simulate_saw(&config).unwrap();
        for point in series.entries().iter().skip(1) {
            let se = (point.t as f64 / 1000.0).sqrt();
            assert!(
                point.mu.abs() <= 3.0 * se,
                "t = {}, mu = {}, 3se = {}",
                point.t,
                point.mu,
                3.0 * se
            );
        }
    }

    #[test]
    fn capped_g_mod2_walks_are_straight_lines() {
        let config = SawConfig {
            g: 50.0,
            steps: 100,
            replicates: 400,
            mod2: true,
            seed: 7,
        };
        let series = simulate_saw(&config).unwrap();
        for point in series.entries() {
            // every replicate satisfies x(t) = +-t, so E[x^2] = t^2 exactly
            let second_moment = point.var + point.mu * point.mu;
            let t2 = (point.t * point.t) as f64;
            assert!(
                (second_moment - t2).abs() < 1e-6 * t2.max(1.0),
                "t = {}",
                point.t
            );
        }
        let beta = fit_power(&series).unwrap();
        assert!((beta.beta - 2.0).abs() < 0.02);
    }

    #[test]
    fn large_g_first_visits_agree_across_counting_modes() {
        // until a site is revisited the counts are 0/1 in both modes, and
        // at large g revisits essentially never happen
        let base = SawConfig {
            g: 50.0,
            steps: 12,
            replicates: 64,
            mod2: false,
            seed: 99,
        };
        let cumulative = simulate_saw(&base).unwrap();
        let mod2 = simulate_saw(&SawConfig { mod2: true, ..base }).unwrap();
        assert_eq!(cumulative, mod2);
    }

    #[test]
    fn fixed_seed_reproduces_the_series_bit_for_bit() {
        let config = SawConfig {
            g: 1.3,
            steps: 64,
            replicates: 128,
            mod2: true,
            seed: 123,
        };
        let a = simulate_saw(&config).unwrap();
        let b = simulate_saw(&config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn beta_rises_from_diffusive_to_ballistic() {
        let grid = [0.0, 1.0, 50.0];
        let fits = beta_vs_g(&grid, 200, 1000, true, 1).unwrap();
        assert!((fits[0].1.beta - 1.0).abs() < 0.05, "beta(0) = {}", fits[0].1.beta);
        assert!(fits[1].1.beta > 1.0 && fits[1].1.beta < 2.0);
        assert!((fits[2].1.beta - 2.0).abs() < 0.02, "beta(50) = {}", fits[2].1.beta);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let ok = SawConfig {
            g: 0.0,
            steps: 1,
            replicates: 1,
            mod2: false,
            seed: 0,
        };
        assert!(ok.validate().is_ok());
        assert!(SawConfig { g: -1.0, ..ok }.validate().is_err());
        assert!(SawConfig { g: f64::INFINITY, ..ok }.validate().is_err());
        assert!(SawConfig { steps: 0, ..ok }.validate().is_err());
        assert!(SawConfig { replicates: 0, ..ok }.validate().is_err());
    }
}
