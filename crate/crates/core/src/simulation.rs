//! Seeded Monte Carlo sampling of the two-stage current-state experiment.
//!
//! Each trial draws the coin first (Bernoulli with the spec's bias), then,
//! on Tails only, one uniform integer in `1..=n` for the current-state day.
//! Heads consumes no second draw since its only awakening is day 1.
//!
//! Trials are split into fixed-size chunks. Chunk `i` owns a `ChaCha8Rng`
//! seeded with [`chunk_seed`]`(seed, i)`, so results depend only on
//! `(spec, n_trials, seed, chunk_size)` and not on thread scheduling.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{
    awakening_schedule, build_sbre, heads_awakening_share, ExperimentSpec,
};
use crate::prob::{Coin, Rational};

pub const DEFAULT_SEED: u64 = 20_000_143;
pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;
pub const GENERATOR: &str = "rand_chacha::ChaCha8Rng; chunk seed = splitmix64(splitmix64(seed) ^ chunk_index)";

pub const HEADS_AMONG_ALL_AWAKENINGS: &str = "heads_among_all_awakenings";
pub const HEADS_AMONG_CURRENT_STATES: &str = "heads_among_current_states";
pub const DAY1_CURRENT_FRACTION: &str = "day1_current_fraction";
pub const HEADS_GIVEN_DAY1_CURRENT: &str = "heads_given_day1_current";
pub const DAY1_SELECTED_AMONG_MONDAY_AWAKENINGS: &str = "day1_selected_among_monday_awakenings";
pub const DAY1_GIVEN_TAILS: &str = "day1_given_tails";

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1334_11EB);
    z ^ (z >> 31)
}

pub fn chunk_seed(seed: u64, chunk_index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ chunk_index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_trials: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl SimConfig {
    pub fn new(n_trials: u64, seed: u64) -> Self {
        SimConfig {
            n_trials,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::InvalidSpec("n_trials must be at least 1".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidSpec("chunk_size must be at least 1".into()));
        }
        Ok(())
    }

    pub fn n_chunks(&self) -> u64 {
        self.n_trials.div_ceil(self.chunk_size)
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig::new(1_000_000, DEFAULT_SEED)
    }
}

/// Bernoulli draw for the coin. Biases whose parts fit in `u64` are drawn
/// exactly as `U{0..den} < num`; anything larger falls back to `f64`.
#[derive(Debug, Clone, Copy)]
enum CoinSampler {
    Exact { num: u64, den: u64 },
    Approx(f64),
}

impl CoinSampler {
    fn new(p_heads: &Rational) -> Self {
        match p_heads.to_u64_parts() {
            Some((num, den)) => CoinSampler::Exact { num, den },
            None => CoinSampler::Approx(p_heads.to_f64()),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Coin {
        let heads = match *self {
            CoinSampler::Exact { num, den } => rng.random_range(0..den) < num,
            CoinSampler::Approx(p) => rng.random_bool(p),
        };
        if heads {
            Coin::Heads
        } else {
            Coin::Tails
        }
    }
}

#[inline]
fn draw_state<R: Rng + ?Sized>(rng: &mut R, coin: &CoinSampler, tails_days: u32) -> (Coin, u32) {
    match coin.draw(rng) {
        Coin::Heads => (Coin::Heads, 1),
        Coin::Tails => (Coin::Tails, rng.random_range(1..=tails_days)),
    }
}

/// One simulated run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub coin: Coin,
    pub awakenings: Vec<u32>,
    /// The awakening selected as the current state; `None` for coin-only
    /// (ERE) trials.
    pub current_state_day: Option<u32>,
}

/// Draws one two-stage trial (coin, then current state).
pub fn sample_trial<R: Rng + ?Sized>(rng: &mut R, spec: &ExperimentSpec) -> TrialRecord {
    let (coin, day) = draw_state(rng, &CoinSampler::new(&spec.p_heads), spec.tails_days);
    TrialRecord {
        coin,
        awakenings: awakening_schedule(coin, spec).days,
        current_state_day: Some(day),
    }
}

/// Draws only the coin and its awakening schedule.
pub fn sample_ere_trial<R: Rng + ?Sized>(rng: &mut R, spec: &ExperimentSpec) -> TrialRecord {
    let coin = CoinSampler::new(&spec.p_heads).draw(rng);
    TrialRecord {
        coin,
        awakenings: awakening_schedule(coin, spec).days,
        current_state_day: None,
    }
}

/// Raw tallies over a trial stream. Merging is plain addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialCounts {
    pub trials: u64,
    pub heads_trials: u64,
    pub awakenings: u64,
    pub heads_awakenings: u64,
    pub day1_current: u64,
    pub heads_day1_current: u64,
    pub tails_day1_current: u64,
}

impl TrialCounts {
    pub fn tails_trials(&self) -> u64 {
        self.trials - self.heads_trials
    }

    pub fn record(&mut self, coin: Coin, current_day: u32, tails_days: u32) {
        self.trials += 1;
        let wakes = match coin {
            Coin::Heads => 1,
            Coin::Tails => tails_days as u64,
        };
        self.awakenings += wakes;
        if coin == Coin::Heads {
            self.heads_trials += 1;
            self.heads_awakenings += wakes;
        }
        if current_day == 1 {
            self.day1_current += 1;
            match coin {
                Coin::Heads => self.heads_day1_current += 1,
                Coin::Tails => self.tails_day1_current += 1,
            }
        }
    }

    pub fn merge(self, o: TrialCounts) -> TrialCounts {
        TrialCounts {
            trials: self.trials + o.trials,
            heads_trials: self.heads_trials + o.heads_trials,
            awakenings: self.awakenings + o.awakenings,
            heads_awakenings: self.heads_awakenings + o.heads_awakenings,
            day1_current: self.day1_current + o.day1_current,
            heads_day1_current: self.heads_day1_current + o.heads_day1_current,
            tails_day1_current: self.tails_day1_current + o.tails_day1_current,
        }
    }
}

fn run_chunk(spec: &ExperimentSpec, coin: &CoinSampler, cfg: &SimConfig, index: u64) -> TrialCounts {
    let start = index * cfg.chunk_size;
    let len = cfg.chunk_size.min(cfg.n_trials - start);
    let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(cfg.seed, index));
    let mut counts = TrialCounts::default();
    for _ in 0..len {
        let (c, day) = draw_state(&mut rng, coin, spec.tails_days);
        counts.record(c, day, spec.tails_days);
    }
    counts
}

/// Runs all chunks in parallel and sums their tallies.
pub fn run_counts(spec: &ExperimentSpec, cfg: &SimConfig) -> Result<TrialCounts> {
    spec.validate()?;
    cfg.validate()?;
    let coin = CoinSampler::new(&spec.p_heads);
    Ok((0..cfg.n_chunks())
        .into_par_iter()
        .map(|i| run_chunk(spec, &coin, cfg, i))
        .reduce(TrialCounts::default, TrialCounts::merge))
}

/// Same stream as [`run_counts`], one chunk after another on the calling
/// thread.
pub fn run_counts_sequential(spec: &ExperimentSpec, cfg: &SimConfig) -> Result<TrialCounts> {
    spec.validate()?;
    cfg.validate()?;
    let coin = CoinSampler::new(&spec.p_heads);
    Ok((0..cfg.n_chunks())
        .map(|i| run_chunk(spec, &coin, cfg, i))
        .fold(TrialCounts::default(), TrialCounts::merge))
}

/// Proportion estimate with a normal-approximation 95% interval clamped
/// to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEstimate {
    pub hits: u64,
    pub total: u64,
    pub point: f64,
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl FrequencyEstimate {
    /// `None` when `total` is zero.
    pub fn new(hits: u64, total: u64) -> Option<Self> {
        if total == 0 {
            return None;
        }
        assert!(hits <= total, "hits {hits} exceed total {total}");
        let point = hits as f64 / total as f64;
        let std_error = (point * (1.0 - point) / total as f64).sqrt();
        Some(FrequencyEstimate {
            hits,
            total,
            point,
            std_error,
            ci95_low: (point - 1.96 * std_error).max(0.0),
            ci95_high: (point + 1.96 * std_error).min(1.0),
        })
    }

    /// The exact ratio `hits / total`.
    pub fn ratio(&self) -> Rational {
        Rational::new(self.hits, self.total).expect("total > 0")
    }

    /// Distance from `target` in standard errors. A zero standard error
    /// gives 0 on an exact hit and infinity otherwise.
    pub fn sigmas_from(&self, target: f64) -> f64 {
        let d = (self.point - target).abs();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub spec: ExperimentSpec,
    pub config: SimConfig,
    pub generator: String,
    pub counts: TrialCounts,
    pub estimates: IndexMap<String, FrequencyEstimate>,
    pub exact: IndexMap<String, Rational>,
}

impl SimulationReport {
    pub fn estimate(&self, name: &str) -> Option<&FrequencyEstimate> {
        self.estimates.get(name)
    }

    pub fn exact(&self, name: &str) -> Option<&Rational> {
        self.exact.get(name)
    }
}

/// Exact long-run value of every estimator. Undefined ones (conditioning
/// on a null event) are left out.
pub fn exact_targets(spec: &ExperimentSpec) -> Result<IndexMap<String, Rational>> {
    let sbre = build_sbre(spec)?;
    let day1 = sbre.day_star(1).expect("day 1 always exists");
    let mut out = IndexMap::new();
    out.insert(HEADS_AMONG_ALL_AWAKENINGS.to_string(), heads_awakening_share(spec)?);
    out.insert(HEADS_AMONG_CURRENT_STATES.to_string(), sbre.probability(sbre.heads())?);
    let p_day1 = sbre.probability(day1)?;
    out.insert(DAY1_CURRENT_FRACTION.to_string(), p_day1.clone());
    if let Ok(v) = sbre.conditional(sbre.heads(), day1) {
        out.insert(HEADS_GIVEN_DAY1_CURRENT.to_string(), v);
    }
    // Every run has exactly one day-1 awakening, so this is P(day1*) / 1.
    out.insert(DAY1_SELECTED_AMONG_MONDAY_AWAKENINGS.to_string(), p_day1);
    if let Ok(v) = sbre.conditional(day1, sbre.tails()) {
        out.insert(DAY1_GIVEN_TAILS.to_string(), v);
    }
    Ok(out)
}

pub fn estimates_from_counts(c: &TrialCounts) -> IndexMap<String, FrequencyEstimate> {
    let rows = [
        (HEADS_AMONG_ALL_AWAKENINGS, c.heads_awakenings, c.awakenings),
        (HEADS_AMONG_CURRENT_STATES, c.heads_trials, c.trials),
        (DAY1_CURRENT_FRACTION, c.day1_current, c.trials),
        (HEADS_GIVEN_DAY1_CURRENT, c.heads_day1_current, c.day1_current),
        // One day-1 awakening per trial: denominator is the trial count.
        (DAY1_SELECTED_AMONG_MONDAY_AWAKENINGS, c.day1_current, c.trials),
        (DAY1_GIVEN_TAILS, c.tails_day1_current, c.tails_trials()),
    ];
    rows.into_iter()
        .filter_map(|(name, hits, total)| {
            FrequencyEstimate::new(hits, total).map(|e| (name.to_string(), e))
        })
        .collect()
}

pub fn run_simulation(spec: &ExperimentSpec, cfg: &SimConfig) -> Result<SimulationReport> {
    let counts = run_counts(spec, cfg)?;
    Ok(SimulationReport {
        spec: spec.clone(),
        config: *cfg,
        generator: GENERATOR.to_string(),
        counts,
        estimates: estimates_from_counts(&counts),
        exact: exact_targets(spec)?,
    })
}
