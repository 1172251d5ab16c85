use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

static NEXT_TAG: AtomicU64 = AtomicU64::new(1);

/// Identity of one constructed random experiment.
///
/// Every call that builds an [`Experiment`] mints a fresh id, so two
/// experiments with identical outcomes and measure are still distinct and
/// their events cannot be mixed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExperimentTag {
    id: u64,
    name: Arc<str>,
}

impl ExperimentTag {
    fn mint(name: &str) -> Self {
        ExperimentTag {
            id: NEXT_TAG.fetch_add(1, Ordering::Relaxed),
            name: Arc::from(name),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for ExperimentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.name, self.id)
    }
}

impl fmt::Debug for ExperimentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coin {
    Heads,
    Tails,
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coin::Heads => "Heads",
            Coin::Tails => "Tails",
        })
    }
}

/// One elementary outcome. `day` is the selected awakening, and is only
/// set for outcomes of experiments that model the current state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub label: String,
    pub coin: Coin,
    pub day: Option<u32>,
}

impl Outcome {
    pub fn new(label: impl Into<String>, coin: Coin, day: Option<u32>) -> Self {
        Outcome {
            label: label.into(),
            coin,
            day,
        }
    }
}

/// A finite sample space with an exact probability measure.
///
/// Outcome order is fixed at construction and drives all iteration.
#[derive(Debug, Clone)]
pub struct Experiment {
    tag: ExperimentTag,
    outcomes: Vec<Outcome>,
    measure: Vec<Rational>,
}

impl Experiment {
    /// Validates that labels are unique, every mass lies in [0, 1] and the
    /// masses sum to exactly one.
    pub fn new(name: &str, weighted: Vec<(Outcome, Rational)>) -> Result<Self> {
        if weighted.is_empty() {
            return Err(Error::InvalidMeasure("empty sample space".into()));
        }
        let mut seen = BTreeSet::new();
        for (o, p) in &weighted {
            if !seen.insert(o.label.as_str()) {
                return Err(Error::InvalidMeasure(format!("duplicate outcome {:?}", o.label)));
            }
            if !p.is_probability() {
                return Err(Error::InvalidMeasure(format!(
                    "P({}) = {p} is outside [0, 1]",
                    o.label
                )));
            }
        }
        let total: Rational = weighted.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("masses sum to {total}, not 1")));
        }
        let (outcomes, measure) = weighted.into_iter().unzip();
        Ok(Experiment {
            tag: ExperimentTag::mint(name),
            outcomes,
            measure,
        })
    }

    pub fn tag(&self) -> &ExperimentTag {
        &self.tag
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    /// Outcomes paired with their probability, in construction order.
    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, &Rational)> {
        self.outcomes.iter().zip(&self.measure)
    }

    pub fn outcome(&self, label: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.label == label)
    }

    /// Mass of a single outcome.
    pub fn mass(&self, label: &str) -> Option<&Rational> {
        self.iter().find(|(o, _)| o.label == label).map(|(_, p)| p)
    }

    /// Builds an event from outcome labels, rejecting labels this experiment
    /// does not have.
    pub fn event<I, S>(&self, labels: I) -> Result<Event>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut members = BTreeSet::new();
        for label in labels {
            let label = label.into();
            if self.outcome(&label).is_none() {
                return Err(Error::UnknownOutcome {
                    label,
                    experiment: self.tag.clone(),
                });
            }
            members.insert(label);
        }
        Ok(Event {
            tag: self.tag.clone(),
            members,
        })
    }

    /// The event of all outcomes satisfying `pred`.
    pub fn event_where(&self, pred: impl Fn(&Outcome) -> bool) -> Event {
        Event {
            tag: self.tag.clone(),
            members: self
                .outcomes
                .iter()
                .filter(|o| pred(o))
                .map(|o| o.label.clone())
                .collect(),
        }
    }

    pub fn full_event(&self) -> Event {
        self.event_where(|_| true)
    }

    pub fn empty_event(&self) -> Event {
        self.event_where(|_| false)
    }

    pub fn complement(&self, e: &Event) -> Result<Event> {
        self.check(e)?;
        Ok(self.event_where(|o| !e.contains(&o.label)))
    }

    /// Sum of the outcome masses in `e`.
    pub fn probability(&self, e: &Event) -> Result<Rational> {
        self.check(e)?;
        Ok(self
            .iter()
            .filter(|(o, _)| e.contains(&o.label))
            .map(|(_, p)| p)
            .sum())
    }

    /// `P(a | given) = P(a ∩ given) / P(given)`.
    ///
    /// Both events must come from this experiment. Conditioning on an event
    /// of another experiment is a [`Error::TagMismatch`], never a number.
    pub fn conditional(&self, a: &Event, given: &Event) -> Result<Rational> {
        self.check(a)?;
        self.check(given)?;
        let joint = self.probability(&a.intersect(given)?)?;
        let denom = self.probability(given)?;
        joint.checked_div(&denom).ok_or(Error::ZeroCondition)
    }

    fn check(&self, e: &Event) -> Result<()> {
        if e.tag != self.tag {
            return Err(Error::TagMismatch {
                expected: self.tag.clone(),
                found: e.tag.clone(),
            });
        }
        Ok(())
    }
}

/// A set of outcome labels belonging to one experiment.
///
/// Only an [`Experiment`] can create events, so members are always a
/// subset of that experiment's outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    tag: ExperimentTag,
    members: BTreeSet<String>,
}

impl Event {
    pub fn tag(&self) -> &ExperimentTag {
        &self.tag
    }

    pub fn members(&self) -> &BTreeSet<String> {
        &self.members
    }

    pub fn contains(&self, label: &str) -> bool {
        self.members.contains(label)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_subset(&self, other: &Event) -> Result<bool> {
        self.same_tag(other)?;
        Ok(self.members.is_subset(&other.members))
    }

    pub fn intersect(&self, other: &Event) -> Result<Event> {
        self.same_tag(other)?;
        Ok(Event {
            tag: self.tag.clone(),
            members: self.members.intersection(&other.members).cloned().collect(),
        })
    }

    pub fn union(&self, other: &Event) -> Result<Event> {
        self.same_tag(other)?;
        Ok(Event {
            tag: self.tag.clone(),
            members: self.members.union(&other.members).cloned().collect(),
        })
    }

    fn same_tag(&self, other: &Event) -> Result<()> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch {
                expected: self.tag.clone(),
                found: other.tag.clone(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin(p: Rational) -> Experiment {
        let q = Rational::one() - &p;
        Experiment::new(
            "coin",
            vec![
                (Outcome::new("H", Coin::Heads, None), p),
                (Outcome::new("T", Coin::Tails, None), q),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_measures() {
        let h = Outcome::new("H", Coin::Heads, None);
        let t = Outcome::new("T", Coin::Tails, None);
        let err = Experiment::new(
            "x",
            vec![(h.clone(), Rational::frac(1, 2)), (t.clone(), Rational::frac(1, 3))],
        );
        assert!(matches!(err, Err(Error::InvalidMeasure(_))));
        let err = Experiment::new(
            "x",
            vec![(h.clone(), Rational::frac(3, 2)), (t, Rational::frac(-1, 2))],
        );
        assert!(matches!(err, Err(Error::InvalidMeasure(_))));
        let err = Experiment::new(
            "x",
            vec![(h.clone(), Rational::frac(1, 2)), (h, Rational::frac(1, 2))],
        );
        assert!(matches!(err, Err(Error::InvalidMeasure(_))));
        assert!(Experiment::new("x", vec![]).is_err());
    }

    #[test]
    fn tags_distinct_for_identical_builds() {
        let a = coin(Rational::frac(1, 2));
        let b = coin(Rational::frac(1, 2));
        assert_ne!(a.tag(), b.tag());
        assert_eq!(a.tag().name(), b.tag().name());
    }

    #[test]
    fn empty_event_has_probability_zero() {
        let e = coin(Rational::frac(1, 3));
        assert_eq!(e.probability(&e.empty_event()).unwrap(), Rational::zero());
        assert_eq!(e.probability(&e.full_event()).unwrap(), Rational::one());
    }

    #[test]
    fn unknown_label_rejected() {
        let e = coin(Rational::frac(1, 2));
        assert!(matches!(e.event(["X"]), Err(Error::UnknownOutcome { .. })));
    }

    #[test]
    fn zero_condition() {
        let e = coin(Rational::one());
        let tails = e.event(["T"]).unwrap();
        let heads = e.event(["H"]).unwrap();
        assert_eq!(e.conditional(&heads, &tails), Err(Error::ZeroCondition));
    }

    #[test]
    fn cross_experiment_operations_fail() {
        let a = coin(Rational::frac(1, 2));
        let b = coin(Rational::frac(1, 2));
        let ha = a.event(["H"]).unwrap();
        let hb = b.event(["H"]).unwrap();
        assert!(matches!(a.probability(&hb), Err(Error::TagMismatch { .. })));
        assert!(matches!(a.conditional(&ha, &hb), Err(Error::TagMismatch { .. })));
        assert!(matches!(a.conditional(&hb, &ha), Err(Error::TagMismatch { .. })));
        assert!(matches!(ha.union(&hb), Err(Error::TagMismatch { .. })));
        assert!(matches!(ha.intersect(&hb), Err(Error::TagMismatch { .. })));
        assert!(matches!(a.complement(&hb), Err(Error::TagMismatch { .. })));
    }

    #[test]
    fn idempotent_intersection() {
        let e = coin(Rational::frac(1, 2));
        let h = e.event(["H"]).unwrap();
        assert_eq!(h.intersect(&h).unwrap(), h);
        assert_eq!(h.union(&h).unwrap(), h);
    }
}
