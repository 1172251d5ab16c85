//! Expected gain of betting on Heads at every awakening.
//!
//! Two closed forms are offered. The per-trial form weighs each coin face by
//! its probability and multiplies the Tails loss by the number of bets
//! offered on that branch. The per-awakening form instead weighs each face
//! by its share of awakenings and settles a single bet. Both are exact; they
//! answer different questions, and the simulation shows which long-run
//! average each one predicts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::ExperimentSpec;
use crate::prob::Rational;
use crate::simulation::{run_counts, SimConfig, TrialCounts, GENERATOR};

/// The payoff ratio is gross payoff over stake. Because the same bet is
/// offered more than once after Tails, it is not an odds ratio.
pub const PAYOFF_RATIO_CAVEAT: &str =
    "payoff ratio is not betting odds: the bet is repeated at every Tails awakening";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetSpec {
    /// Stake paid for each offered bet.
    pub cost: Rational,
    /// Gross amount returned on a winning bet.
    pub payoff: Rational,
}

impl BetSpec {
    pub fn new(cost: Rational, payoff: Rational) -> Result<Self> {
        let bet = BetSpec { cost, payoff };
        bet.validate()?;
        Ok(bet)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.cost.is_positive() {
            return Err(Error::InvalidSpec(format!("bet cost {} must be positive", self.cost)));
        }
        if self.payoff.is_negative() {
            return Err(Error::InvalidSpec(format!(
                "bet payoff {} must be non-negative",
                self.payoff
            )));
        }
        Ok(())
    }

    pub fn net_win(&self) -> Rational {
        &self.payoff - &self.cost
    }

    pub fn payoff_ratio(&self) -> Rational {
        &self.payoff / &self.cost
    }
}

fn check(spec: &ExperimentSpec, bet: &BetSpec) -> Result<()> {
    spec.validate()?;
    bet.validate()
}

/// Per-trial expectation: `p (payoff - cost) - (1 - p) n cost`.
pub fn halfer_expected_gain(spec: &ExperimentSpec, bet: &BetSpec) -> Result<Rational> {
    check(spec, bet)?;
    let n = Rational::from(spec.tails_days);
    Ok(&spec.p_heads * bet.net_win() - spec.p_tails() * n * &bet.cost)
}

/// Per-awakening expectation with heads weight `q = p / (p + (1 - p) n)`:
/// `q (payoff - cost) - (1 - q) cost`.
pub fn thirder_expected_gain(spec: &ExperimentSpec, bet: &BetSpec) -> Result<Rational> {
    check(spec, bet)?;
    let q = &spec.p_heads / spec.expected_awakenings();
    let not_q = Rational::one() - &q;
    Ok(q * bet.net_win() - not_q * &bet.cost)
}

/// The payoff at which the per-trial expectation is zero, for the given
/// cost. `None` when the coin never lands Heads.
pub fn zero_gain_payoff(spec: &ExperimentSpec, cost: &Rational) -> Result<Option<Rational>> {
    spec.validate()?;
    Ok((cost * spec.expected_awakenings()).checked_div(&spec.p_heads))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettingReport {
    pub spec: ExperimentSpec,
    pub bet: BetSpec,
    pub config: SimConfig,
    pub generator: String,
    pub payoff_ratio: Rational,
    pub payoff_ratio_caveat: String,
    pub zero_gain_payoff: Option<Rational>,
    pub expected_awakenings: Rational,
    pub halfer_expectation: Rational,
    pub thirder_expectation: Rational,
    pub counts: TrialCounts,
    /// Exact sum of all settled bets.
    pub total_gain: Rational,
    pub empirical_per_trial_mean: f64,
    pub per_trial_std_error: f64,
    pub empirical_per_awakening_mean: f64,
    pub per_awakening_std_error: f64,
}

impl BettingReport {
    pub fn n_trials(&self) -> u64 {
        self.config.n_trials
    }

    pub fn seed(&self) -> u64 {
        self.config.seed
    }
}

/// Settles one bet per awakening over a simulated trial stream. A Heads
/// trial wins once; a Tails trial loses `n` stakes.
pub fn simulate_betting(
    spec: &ExperimentSpec,
    bet: &BetSpec,
    cfg: &SimConfig,
) -> Result<BettingReport> {
    check(spec, bet)?;
    let counts = run_counts(spec, cfg)?;
    let n = Rational::from(spec.tails_days);
    let win = bet.net_win();
    let loss = -(&n * &bet.cost);
    let heads = Rational::from(counts.heads_trials);
    let tails = Rational::from(counts.tails_trials());
    let total_gain = &heads * &win + &tails * &loss;

    let trials = counts.trials as f64;
    let awakenings = counts.awakenings as f64;
    let per_trial = (&total_gain / Rational::from(counts.trials)).to_f64();
    let per_awakening = (&total_gain / Rational::from(counts.awakenings)).to_f64();
    let (h, t) = (counts.heads_trials as f64, counts.tails_trials() as f64);
    let (w, l) = (win.to_f64(), loss.to_f64());
    let dof = (trials - 1.0).max(1.0);

    let var_trial = (h * (w - per_trial).powi(2) + t * (l - per_trial).powi(2)) / dof;
    // Delta method for the ratio of total gain to total awakenings.
    let nf = spec.tails_days as f64;
    let var_ratio = (h * (w - per_awakening).powi(2) + t * (l - per_awakening * nf).powi(2)) / dof;
    let mean_awake = awakenings / trials;

    Ok(BettingReport {
        spec: spec.clone(),
        bet: bet.clone(),
        config: *cfg,
        generator: GENERATOR.to_string(),
        payoff_ratio: bet.payoff_ratio(),
        payoff_ratio_caveat: PAYOFF_RATIO_CAVEAT.to_string(),
        zero_gain_payoff: zero_gain_payoff(spec, &bet.cost)?,
        expected_awakenings: spec.expected_awakenings(),
        halfer_expectation: halfer_expected_gain(spec, bet)?,
        thirder_expectation: thirder_expected_gain(spec, bet)?,
        counts,
        total_gain,
        empirical_per_trial_mean: per_trial,
        per_trial_std_error: (var_trial / trials).sqrt(),
        empirical_per_awakening_mean: per_awakening,
        per_awakening_std_error: (var_ratio / trials).sqrt() / mean_awake,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bet(cost: i64, payoff: i64) -> BetSpec {
        BetSpec::new(cost.into(), payoff.into()).unwrap()
    }

    fn spec(p: (i64, i64), n: u32) -> ExperimentSpec {
        ExperimentSpec::new(Rational::frac(p.0, p.1), n).unwrap()
    }

    #[test]
    fn closed_forms_at_fair_coin() {
        let s = ExperimentSpec::paper();
        assert_eq!(halfer_expected_gain(&s, &bet(10, 30)).unwrap(), Rational::zero());
        assert_eq!(thirder_expected_gain(&s, &bet(10, 30)).unwrap(), Rational::zero());
        assert_eq!(halfer_expected_gain(&s, &bet(10, 60)).unwrap(), Rational::from(15i64));
        assert_eq!(thirder_expected_gain(&s, &bet(10, 60)).unwrap(), Rational::from(10i64));
        assert_eq!(halfer_expected_gain(&s, &bet(10, 0)).unwrap(), Rational::from(-15i64));
    }

    #[test]
    fn always_heads() {
        let s = spec((1, 1), 2);
        assert_eq!(halfer_expected_gain(&s, &bet(10, 30)).unwrap(), Rational::from(20i64));
    }

    #[test]
    fn one_awakening_formulas_coincide() {
        let s = spec((1, 2), 1);
        for (c, p) in [(10, 30), (3, 0), (7, 100)] {
            assert_eq!(
                halfer_expected_gain(&s, &bet(c, p)).unwrap(),
                thirder_expected_gain(&s, &bet(c, p)).unwrap()
            );
        }
    }

    #[test]
    fn zero_gain_point() {
        let s = ExperimentSpec::paper();
        assert_eq!(
            zero_gain_payoff(&s, &Rational::from(10i64)).unwrap(),
            Some(Rational::from(30i64))
        );
        assert_eq!(zero_gain_payoff(&spec((0, 1), 2), &Rational::one()).unwrap(), None);
    }

    #[test]
    fn invalid_bets() {
        assert!(BetSpec::new(Rational::zero(), Rational::one()).is_err());
        assert!(BetSpec::new(Rational::one(), Rational::from(-1i64)).is_err());
        let bad = BetSpec {
            cost: Rational::zero(),
            payoff: Rational::one(),
        };
        assert!(halfer_expected_gain(&ExperimentSpec::paper(), &bad).is_err());
        assert!(thirder_expected_gain(&ExperimentSpec::paper(), &bad).is_err());
    }

    #[test]
    fn always_tails_loses_exactly() {
        let r = simulate_betting(&spec((0, 1), 2), &bet(10, 60), &SimConfig::new(1000, 5)).unwrap();
        assert_eq!(r.empirical_per_trial_mean, -20.0);
        assert_eq!(r.total_gain, Rational::from(-20_000i64));
        assert_eq!(r.empirical_per_awakening_mean, -10.0);
    }

    #[test]
    fn payoff_ratio_carries_caveat() {
        let r = simulate_betting(&ExperimentSpec::paper(), &bet(10, 60), &SimConfig::new(10, 5)).unwrap();
        assert_eq!(r.payoff_ratio, Rational::from(6i64));
        assert!(!r.payoff_ratio_caveat.is_empty());
    }
}
