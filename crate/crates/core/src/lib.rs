//! Exact and simulated analysis of the Sleeping Beauty coin-toss setup.
//!
//! Two random experiments are modelled side by side: the experimenter's
//! single coin toss (ERE, outcomes `{H, T}`) and the awakened subject's
//! current-state experiment (SBRE, outcomes `{H1, T1, .., Tn}`). Events
//! carry the tag of the experiment that produced them, so conditioning one
//! experiment's event on another's evidence fails with
//! [`Error::TagMismatch`].

pub mod betting;
pub mod error;
pub mod experiments;
pub mod prob;
pub mod report;
pub mod simulation;

pub use betting::{
    halfer_expected_gain, simulate_betting, thirder_expected_gain, zero_gain_payoff, BetSpec,
    BettingReport,
};
pub use error::{Error, Result};
pub use experiments::{
    awakening_schedule, build_ere, build_sbre, paper_table, AwakeningSchedule, BuiltExperiment,
    ExperimentSpec, PaperTable,
};
pub use prob::{Coin, Event, Experiment, ExperimentTag, Outcome, Rational};
pub use simulation::{
    run_simulation, sample_trial, FrequencyEstimate, SimConfig, SimulationReport, TrialCounts,
    TrialRecord,
};
