//! Builders for the experimenter's coin-toss experiment (ERE) and the
//! two-stage current-state experiment (SBRE).
//!
//! Both are generalized over the coin bias `p_heads` and the number of
//! awakenings after Tails. Heads always yields exactly one awakening, on
//! day 1. Days are plain indices; "Monday" and "Tuesday" are display names
//! for days 1 and 2.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Coin, Event, Experiment, Outcome, Rational};

pub const HEADS_DAYS: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub p_heads: Rational,
    pub tails_days: u32,
}

impl ExperimentSpec {
    pub fn new(p_heads: Rational, tails_days: u32) -> Result<Self> {
        let spec = ExperimentSpec {
            p_heads,
            tails_days,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Fair coin, two awakenings after Tails.
    pub fn paper() -> Self {
        ExperimentSpec {
            p_heads: Rational::frac(1, 2),
            tails_days: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p_heads.is_probability() {
            return Err(Error::InvalidSpec(format!(
                "p_heads = {} must lie in [0, 1]",
                self.p_heads
            )));
        }
        if self.tails_days < 1 {
            return Err(Error::InvalidSpec("tails_days must be at least 1".into()));
        }
        Ok(())
    }

    pub fn p_tails(&self) -> Rational {
        Rational::one() - &self.p_heads
    }

    /// Expected number of awakenings in one run: `p + (1 - p) n`.
    pub fn expected_awakenings(&self) -> Rational {
        &self.p_heads + self.p_tails() * Rational::from(self.tails_days)
    }
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self::paper()
    }
}

/// Human name for a day index.
pub fn day_name(day: u32) -> String {
    match day {
        1 => "Monday".into(),
        2 => "Tuesday".into(),
        k => format!("day{k}"),
    }
}

/// An experiment together with its canonical named events.
#[derive(Debug, Clone)]
pub struct BuiltExperiment {
    pub experiment: Experiment,
    pub named_events: IndexMap<String, Event>,
}

impl BuiltExperiment {
    pub fn event(&self, name: &str) -> Option<&Event> {
        self.named_events.get(name)
    }

    pub fn heads(&self) -> &Event {
        &self.named_events["heads"]
    }

    pub fn tails(&self) -> &Event {
        &self.named_events["tails"]
    }

    /// SBRE only: "day `k` is the current state".
    pub fn day_star(&self, k: u32) -> Option<&Event> {
        self.named_events.get(&format!("day_star_{k}"))
    }

    /// ERE only: "an awakening on day `k` occurs".
    pub fn day_occurs(&self, k: u32) -> Option<&Event> {
        match k {
            1 => self.named_events.get("monday_occurs"),
            2 => self.named_events.get("tuesday_occurs"),
            k => self.named_events.get(&format!("day{k}_occurs")),
        }
    }

    pub fn probability(&self, e: &Event) -> Result<Rational> {
        self.experiment.probability(e)
    }

    pub fn conditional(&self, a: &Event, given: &Event) -> Result<Rational> {
        self.experiment.conditional(a, given)
    }
}

/// The experimenter's experiment: one coin toss, sample space `{H, T}`.
///
/// The day-1 awakening occurs on both outcomes; every later awakening
/// occurs only on Tails.
pub fn build_ere(spec: &ExperimentSpec) -> Result<BuiltExperiment> {
    spec.validate()?;
    let experiment = Experiment::new(
        "ERE",
        vec![
            (Outcome::new("H", Coin::Heads, None), spec.p_heads.clone()),
            (Outcome::new("T", Coin::Tails, None), spec.p_tails()),
        ],
    )?;
    let mut named_events = IndexMap::new();
    named_events.insert("heads".into(), experiment.event_where(|o| o.coin == Coin::Heads));
    named_events.insert("tails".into(), experiment.event_where(|o| o.coin == Coin::Tails));
    for day in 1..=spec.tails_days.max(2) {
        let occurs = experiment
            .event_where(|o| awakening_schedule(o.coin, spec).days.contains(&day));
        let name = match day {
            1 => "monday_occurs".to_string(),
            2 => "tuesday_occurs".to_string(),
            k => format!("day{k}_occurs"),
        };
        named_events.insert(name, occurs);
    }
    Ok(BuiltExperiment {
        experiment,
        named_events,
    })
}

/// The current-state experiment. Stage one tosses the coin; stage two
/// selects one awakening of that branch uniformly as the current state.
///
/// Outcomes are `H1` and `T1..Tn`, with `P(H1) = p` and `P(Tk) = (1 - p)/n`.
pub fn build_sbre(spec: &ExperimentSpec) -> Result<BuiltExperiment> {
    spec.validate()?;
    let n = spec.tails_days;
    let per_tail_day = spec.p_tails() / Rational::from(n);
    let mut weighted = vec![(Outcome::new("H1", Coin::Heads, Some(1)), spec.p_heads.clone())];
    for k in 1..=n {
        weighted.push((
            Outcome::new(format!("T{k}"), Coin::Tails, Some(k)),
            per_tail_day.clone(),
        ));
    }
    let experiment = Experiment::new("SBRE", weighted)?;
    let mut named_events = IndexMap::new();
    named_events.insert("heads".into(), experiment.event_where(|o| o.coin == Coin::Heads));
    named_events.insert("tails".into(), experiment.event_where(|o| o.coin == Coin::Tails));
    for k in 1..=n {
        named_events.insert(
            format!("day_star_{k}"),
            experiment.event_where(|o| o.day == Some(k)),
        );
    }
    Ok(BuiltExperiment {
        experiment,
        named_events,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AwakeningSchedule {
    pub coin: Coin,
    pub days: Vec<u32>,
}

impl AwakeningSchedule {
    pub fn len(&self) -> u32 {
        self.days.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }
}

pub fn awakening_schedule(coin: Coin, spec: &ExperimentSpec) -> AwakeningSchedule {
    let last = match coin {
        Coin::Heads => HEADS_DAYS,
        Coin::Tails => spec.tails_days,
    };
    AwakeningSchedule {
        coin,
        days: (1..=last).collect(),
    }
}

/// Long-run share of all awakenings (counted across runs, several per run)
/// that happen after Heads: expected heads awakenings over expected
/// awakenings, summed over the ERE outcomes.
pub fn heads_awakening_share(spec: &ExperimentSpec) -> Result<Rational> {
    let ere = build_ere(spec)?;
    let mut heads = Rational::zero();
    let mut all = Rational::zero();
    for (o, p) in ere.experiment.iter() {
        let count = Rational::from(awakening_schedule(o.coin, spec).len());
        if o.coin == Coin::Heads {
            heads = heads + p * &count;
        }
        all = all + p * count;
    }
    heads
        .checked_div(&all)
        .ok_or_else(|| Error::InvalidSpec("no awakenings".into()))
}

/// One exact quantity with a machine key and a display label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub key: String,
    pub label: String,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PaperTable {
    pub entries: Vec<TableEntry>,
}

impl PaperTable {
    pub fn get(&self, key: &str) -> Option<&Rational> {
        self.entries.iter().find(|e| e.key == key).map(|e| &e.value)
    }

    fn push(&mut self, key: impl Into<String>, label: impl Into<String>, value: Rational) {
        self.entries.push(TableEntry {
            key: key.into(),
            label: label.into(),
            value,
        });
    }
}

/// Every headline conditional probability, computed from the two built
/// experiments.
pub fn paper_table(spec: &ExperimentSpec) -> Result<PaperTable> {
    let ere = build_ere(spec)?;
    let sbre = build_sbre(spec)?;
    let monday = ere.day_occurs(1).expect("ERE always has day 1");
    let monday_star = sbre.day_star(1).expect("SBRE always has day 1");
    let day1 = format!("{}*", day_name(1));

    let mut t = PaperTable::default();
    t.push("P_heads_ere", "P(Heads) [ERE]", ere.probability(ere.heads())?);
    t.push(
        "P_monday_ere",
        format!("P({}) [ERE]", day_name(1)),
        ere.probability(monday)?,
    );
    t.push(
        "P_heads_given_monday_ere",
        format!("P(Heads|{}) [ERE]", day_name(1)),
        ere.conditional(ere.heads(), monday)?,
    );
    t.push("P_heads_sbre", "P(Heads) [SBRE]", sbre.probability(sbre.heads())?);
    for o in sbre.experiment.outcomes() {
        let p = sbre.experiment.mass(&o.label).expect("own outcome").clone();
        t.push(format!("P_{}", o.label), format!("P({})", o.label), p);
    }
    t.push("P_monday_star", format!("P({day1})"), sbre.probability(monday_star)?);
    t.push(
        "P_heads_given_monday_star",
        format!("P(Heads|{day1})"),
        sbre.conditional(sbre.heads(), monday_star)?,
    );
    t.push(
        "P_tails_given_monday_star",
        format!("P(Tails|{day1})"),
        sbre.conditional(sbre.tails(), monday_star)?,
    );
    // Undefined when the coin never lands Tails.
    if let Ok(v) = sbre.conditional(monday_star, sbre.tails()) {
        t.push("P_monday_star_given_tails", format!("P({day1}|Tails)"), v);
    }
    Ok(t)
}
