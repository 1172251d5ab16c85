//! Machine-readable (JSON, CSV) and human-readable (table) renderings.
//!
//! JSON layout:
//!
//! ```text
//! {
//!   "meta": {"command", "spec": {"p_heads", "tails_days", "heads_days"},
//!            "seed", "n_trials", "chunk_size", "generator", "float_format", "bet"?},
//!   "exact": {name: "num/den", ...},
//!   "empirical": {name: {"hits"?, "total", "point", "std_error", "ci95": [lo, hi]}, ...}
//! }
//! ```
//!
//! Exact values are strings in lowest terms (`"2/3"`, or `"15"` for
//! integers). Empirical values are JSON numbers printed as the shortest
//! decimal that round-trips to the same `f64`. CSV has one row per quantity
//! under the header [`CSV_HEADER`].

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::betting::BettingReport;
use crate::experiments::{ExperimentSpec, PaperTable, HEADS_DAYS};
use crate::prob::Rational;
use crate::simulation::{FrequencyEstimate, SimulationReport};

pub const CSV_HEADER: &str = "name,kind,exact,point,std_error,ci_low,ci_high";
pub const FLOAT_FORMAT: &str = "f64, shortest round-trip decimal";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub meta: Meta,
    pub exact: IndexMap<String, Rational>,
    pub empirical: IndexMap<String, EmpiricalEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub spec: SpecMeta,
    pub seed: Option<u64>,
    pub n_trials: Option<u64>,
    pub chunk_size: Option<u64>,
    pub generator: Option<String>,
    pub float_format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bet: Option<BetMeta>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecMeta {
    pub p_heads: Rational,
    pub tails_days: u32,
    pub heads_days: u32,
}

impl From<&ExperimentSpec> for SpecMeta {
    fn from(s: &ExperimentSpec) -> Self {
        SpecMeta {
            p_heads: s.p_heads.clone(),
            tails_days: s.tails_days,
            heads_days: HEADS_DAYS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetMeta {
    pub cost: Rational,
    pub payoff: Rational,
    pub payoff_ratio_caveat: String,
}

/// `hits` is absent for means that are not proportions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hits: Option<u64>,
    pub total: u64,
    pub point: f64,
    pub std_error: f64,
    pub ci95: [f64; 2],
}

impl From<&FrequencyEstimate> for EmpiricalEntry {
    fn from(e: &FrequencyEstimate) -> Self {
        EmpiricalEntry {
            hits: Some(e.hits),
            total: e.total,
            point: e.point,
            std_error: e.std_error,
            ci95: [e.ci95_low, e.ci95_high],
        }
    }
}

impl EmpiricalEntry {
    fn mean(total: u64, point: f64, std_error: f64) -> Self {
        EmpiricalEntry {
            hits: None,
            total,
            point,
            std_error,
            ci95: [point - 1.96 * std_error, point + 1.96 * std_error],
        }
    }
}

fn meta(command: &str, spec: &ExperimentSpec) -> Meta {
    Meta {
        command: command.to_string(),
        spec: spec.into(),
        seed: None,
        n_trials: None,
        chunk_size: None,
        generator: None,
        float_format: FLOAT_FORMAT.to_string(),
        bet: None,
    }
}

pub fn analyze_json(spec: &ExperimentSpec, table: &PaperTable) -> JsonReport {
    JsonReport {
        meta: meta("analyze", spec),
        exact: table
            .entries
            .iter()
            .map(|e| (e.key.clone(), e.value.clone()))
            .collect(),
        empirical: IndexMap::new(),
    }
}

pub fn simulation_json(r: &SimulationReport) -> JsonReport {
    let mut m = meta("simulate", &r.spec);
    m.seed = Some(r.config.seed);
    m.n_trials = Some(r.config.n_trials);
    m.chunk_size = Some(r.config.chunk_size);
    m.generator = Some(r.generator.clone());
    JsonReport {
        meta: m,
        exact: r.exact.clone(),
        empirical: r
            .estimates
            .iter()
            .map(|(k, v)| (k.clone(), v.into()))
            .collect(),
    }
}

pub fn betting_json(r: &BettingReport) -> JsonReport {
    let mut m = meta("bet", &r.spec);
    m.seed = Some(r.config.seed);
    m.n_trials = Some(r.config.n_trials);
    m.chunk_size = Some(r.config.chunk_size);
    m.generator = Some(r.generator.clone());
    m.bet = Some(BetMeta {
        cost: r.bet.cost.clone(),
        payoff: r.bet.payoff.clone(),
        payoff_ratio_caveat: r.payoff_ratio_caveat.clone(),
    });
    let mut exact = IndexMap::new();
    exact.insert("halfer_expectation".to_string(), r.halfer_expectation.clone());
    exact.insert("thirder_expectation".to_string(), r.thirder_expectation.clone());
    exact.insert("expected_awakenings".to_string(), r.expected_awakenings.clone());
    exact.insert("payoff_ratio".to_string(), r.payoff_ratio.clone());
    if let Some(z) = &r.zero_gain_payoff {
        exact.insert("zero_gain_payoff".to_string(), z.clone());
    }
    exact.insert("total_gain".to_string(), r.total_gain.clone());
    let mut empirical = IndexMap::new();
    empirical.insert(
        "per_trial_mean".to_string(),
        EmpiricalEntry::mean(r.counts.trials, r.empirical_per_trial_mean, r.per_trial_std_error),
    );
    empirical.insert(
        "per_awakening_mean".to_string(),
        EmpiricalEntry::mean(
            r.counts.awakenings,
            r.empirical_per_awakening_mean,
            r.per_awakening_std_error,
        ),
    );
    JsonReport {
        meta: m,
        exact,
        empirical,
    }
}

impl JsonReport {
    /// Pretty-printed with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Empirical rows first (with their exact target when one has the same
    /// name), then exact-only rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
        for (name, e) in &self.empirical {
            let exact = self.exact.get(name).map(|r| r.to_string()).unwrap_or_default();
            w.write_record([
                name.as_str(),
                "empirical",
                &exact,
                &e.point.to_string(),
                &e.std_error.to_string(),
                &e.ci95[0].to_string(),
                &e.ci95[1].to_string(),
            ])
            .expect("in-memory write");
        }
        for (name, r) in &self.exact {
            if self.empirical.contains_key(name) {
                continue;
            }
            w.write_record([name.as_str(), "exact", &r.to_string(), "", "", "", ""])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// `"2/3 (0.666667)"`.
pub fn fraction_with_hint(r: &Rational) -> String {
    format!("{r} ({:.6})", r.to_f64())
}

fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (label, value) in rows {
        let _ = writeln!(out, "  {label:<width$}  {value}");
    }
    out
}

fn spec_line(spec: &ExperimentSpec) -> String {
    format!(
        "p_heads = {}, heads awakenings = {HEADS_DAYS}, tails awakenings = {}",
        spec.p_heads, spec.tails_days
    )
}

pub fn analyze_table(spec: &ExperimentSpec, t: &PaperTable) -> String {
    let rows: Vec<_> = t
        .entries
        .iter()
        .map(|e| (e.label.clone(), fraction_with_hint(&e.value)))
        .collect();
    format!("Exact probabilities ({})\n{}", spec_line(spec), table(&rows))
}

pub fn simulation_table(r: &SimulationReport) -> String {
    let mut out = format!(
        "Monte Carlo ({}; n_trials = {}, seed = {}, chunk_size = {})\n",
        spec_line(&r.spec),
        r.config.n_trials,
        r.config.seed,
        r.config.chunk_size
    );
    let rows: Vec<_> = r
        .estimates
        .iter()
        .map(|(name, e)| {
            let exact = r
                .exact
                .get(name)
                .map(fraction_with_hint)
                .unwrap_or_else(|| "-".into());
            (
                name.clone(),
                format!(
                    "{:.6} ± {:.6}  [{}/{}]  exact {exact}",
                    e.point, e.std_error, e.hits, e.total
                ),
            )
        })
        .collect();
    out.push_str(&table(&rows));
    let _ = writeln!(out, "  generator: {}", r.generator);
    out
}

pub fn betting_table(r: &BettingReport) -> String {
    let mut out = format!(
        "Betting on Heads at every awakening ({}; cost = {}, payoff = {}, n_trials = {}, seed = {})\n",
        spec_line(&r.spec),
        r.bet.cost,
        r.bet.payoff,
        r.config.n_trials,
        r.config.seed
    );
    let mut rows = vec![
        ("halfer expectation (per trial)".to_string(), fraction_with_hint(&r.halfer_expectation)),
        (
            "thirder expectation (per awakening)".to_string(),
            fraction_with_hint(&r.thirder_expectation),
        ),
        (
            "empirical mean per trial".to_string(),
            format!("{:.6} ± {:.6}", r.empirical_per_trial_mean, r.per_trial_std_error),
        ),
        (
            "empirical mean per awakening".to_string(),
            format!("{:.6} ± {:.6}", r.empirical_per_awakening_mean, r.per_awakening_std_error),
        ),
        ("expected awakenings".to_string(), fraction_with_hint(&r.expected_awakenings)),
        ("payoff ratio".to_string(), fraction_with_hint(&r.payoff_ratio)),
    ];
    if let Some(z) = &r.zero_gain_payoff {
        rows.push(("zero-gain payoff".to_string(), fraction_with_hint(z)));
    }
    out.push_str(&table(&rows));
    let _ = writeln!(out, "  note: {}", r.payoff_ratio_caveat);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betting::{simulate_betting, BetSpec};
    use crate::experiments::paper_table;
    use crate::simulation::{run_simulation, SimConfig};

    #[test]
    fn hint_format() {
        assert_eq!(fraction_with_hint(&Rational::frac(2, 3)), "2/3 (0.666667)");
        assert_eq!(fraction_with_hint(&Rational::from(15i64)), "15 (15.000000)");
    }

    #[test]
    fn analyze_json_shape() {
        let s = ExperimentSpec::paper();
        let j = analyze_json(&s, &paper_table(&s).unwrap());
        let v: serde_json::Value = serde_json::from_str(&j.to_json()).unwrap();
        assert_eq!(v["exact"]["P_heads_given_monday_star"], "2/3");
        assert_eq!(v["meta"]["spec"]["p_heads"], "1/2");
        assert!(v["meta"]["seed"].is_null());
        assert!(v["empirical"].as_object().unwrap().is_empty());
    }

    #[test]
    fn simulation_json_round_trip() {
        let s = ExperimentSpec::paper();
        let r = run_simulation(&s, &SimConfig::new(2000, 42)).unwrap();
        let text = simulation_json(&r).to_json();
        let back = JsonReport::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let e = &v["empirical"]["heads_among_all_awakenings"];
        for key in ["hits", "total", "point", "std_error", "ci95"] {
            assert!(!e[key].is_null(), "missing {key}");
        }
        assert_eq!(v["exact"]["heads_among_all_awakenings"], "1/3");
    }

    #[test]
    fn betting_json_has_integer_strings() {
        let bet = BetSpec::new(10i64.into(), 60i64.into()).unwrap();
        let r = simulate_betting(&ExperimentSpec::paper(), &bet, &SimConfig::new(100, 1)).unwrap();
        let text = betting_json(&r).to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["exact"]["halfer_expectation"], "15");
        assert_eq!(v["exact"]["thirder_expectation"], "10");
        assert!(v["empirical"]["per_trial_mean"]["hits"].is_null());
        assert_eq!(JsonReport::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn csv_layout() {
        let s = ExperimentSpec::paper();
        let r = run_simulation(&s, &SimConfig::new(500, 3)).unwrap();
        let csv = simulation_json(&r).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row = lines.next().unwrap();
        assert!(row.starts_with("heads_among_all_awakenings,empirical,1/3,"));
        assert_eq!(row.split(',').count(), 7);

        let csv = analyze_json(&s, &paper_table(&s).unwrap()).to_csv();
        assert!(csv.contains("\nP_monday_star,exact,3/4,,,,\n"));
    }
}
