//! Exact finite probability spaces.

mod rational;
mod space;

pub use rational::Rational;
pub use space::{Coin, Event, Experiment, ExperimentTag, Outcome};
