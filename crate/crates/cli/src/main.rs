mod args;

use std::io::Write;
use std::process::ExitCode;

use beautylab::experiments::day_name;
use beautylab::report::{self, JsonReport};
use beautylab::{
    build_ere, build_sbre, halfer_expected_gain, paper_table, run_simulation, simulate_betting,
    thirder_expected_gain, BetSpec, Error, ExperimentSpec, Rational, SimConfig,
};
use clap::Parser;

use args::{BetArgs, Cli, Command, OutputFormat, RunArgs};

const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn spec_of(run: &RunArgs) -> Result<ExperimentSpec, Error> {
    if run.paper {
        return Ok(ExperimentSpec::paper());
    }
    ExperimentSpec::new(run.p_heads.clone(), run.tails_days)
}

fn config_of(run: &RunArgs) -> Result<SimConfig, Error> {
    let cfg = SimConfig {
        n_trials: run.n_trials,
        seed: run.seed,
        chunk_size: run.chunk_size,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn bet_of(run: &RunArgs, args: &BetArgs) -> Result<BetSpec, Error> {
    if run.paper {
        return BetSpec::new(10i64.into(), 60i64.into());
    }
    BetSpec::new(args.cost.clone(), args.payoff.clone())
}

fn render(json: JsonReport, table: impl FnOnce() -> String, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json.to_json(),
        OutputFormat::Csv => json.to_csv(),
        OutputFormat::Table => table(),
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    let run = &cli.run;
    let spec = spec_of(run)?;
    match &cli.command {
        Command::Analyze => analyze(&spec, run),
        Command::Simulate => {
            let cfg = config_of(run)?;
            let r = run_simulation(&spec, &cfg)?;
            Ok(render(report::simulation_json(&r), || report::simulation_table(&r), run.format))
        }
        Command::Bet(args) => {
            let bet = bet_of(run, args)?;
            let cfg = config_of(run)?;
            let r = simulate_betting(&spec, &bet, &cfg)?;
            Ok(render(report::betting_json(&r), || report::betting_table(&r), run.format))
        }
    }
}

/// Reference values for the fair-coin, two-awakening setup.
fn reference_values() -> Vec<(&'static str, Rational)> {
    vec![
        ("P_heads_ere", Rational::frac(1, 2)),
        ("P_monday_ere", Rational::one()),
        ("P_heads_given_monday_ere", Rational::frac(1, 2)),
        ("P_heads_sbre", Rational::frac(1, 2)),
        ("P_H1", Rational::frac(1, 2)),
        ("P_T1", Rational::frac(1, 4)),
        ("P_T2", Rational::frac(1, 4)),
        ("P_monday_star", Rational::frac(3, 4)),
        ("P_heads_given_monday_star", Rational::frac(2, 3)),
        ("P_tails_given_monday_star", Rational::frac(1, 3)),
        ("P_monday_star_given_tails", Rational::frac(1, 2)),
        ("bet_cost10_payoff30_halfer", Rational::zero()),
        ("bet_cost10_payoff30_thirder", Rational::zero()),
        ("bet_cost10_payoff60_halfer", Rational::from(15i64)),
        ("bet_cost10_payoff60_thirder", Rational::from(10i64)),
    ]
}

fn analyze(spec: &ExperimentSpec, run: &RunArgs) -> Result<String, Error> {
    let table = paper_table(spec)?;
    let mut json = report::analyze_json(spec, &table);
    if run.paper {
        for (cost, payoff) in [(10i64, 30i64), (10, 60)] {
            let bet = BetSpec::new(cost.into(), payoff.into())?;
            json.exact.insert(
                format!("bet_cost{cost}_payoff{payoff}_halfer"),
                halfer_expected_gain(spec, &bet)?,
            );
            json.exact.insert(
                format!("bet_cost{cost}_payoff{payoff}_thirder"),
                thirder_expected_gain(spec, &bet)?,
            );
        }
    }
    let text = || {
        let mut out = report::analyze_table(spec, &table);
        out.push_str(&cross_experiment_note(spec));
        if run.paper {
            out.push_str(&conformance(&json));
        }
        out
    };
    Ok(render(json.clone(), text, run.format))
}

/// Shows that conditioning a current-state event on the experimenter's
/// day-1 event is refused.
fn cross_experiment_note(spec: &ExperimentSpec) -> String {
    let (Ok(ere), Ok(sbre)) = (build_ere(spec), build_sbre(spec)) else {
        return String::new();
    };
    let monday = ere.day_occurs(1).expect("day 1");
    let verdict = match sbre.conditional(sbre.heads(), monday) {
        Ok(v) => format!("unexpectedly computed {v}"),
        Err(e) => format!("refused ({e})"),
    };
    format!(
        "\nP_SBRE(Heads | {} [ERE]): {verdict}\n",
        day_name(1)
    )
}

fn conformance(json: &JsonReport) -> String {
    let mut out = String::from("\nConformance check\n");
    let mut failures = 0;
    for (key, want) in reference_values() {
        let got = json.exact.get(key);
        let ok = got == Some(&want);
        if !ok {
            failures += 1;
        }
        let got = got.map(|r| r.to_string()).unwrap_or_else(|| "missing".into());
        out.push_str(&format!(
            "  [{}] {key} = {got} (expected {want})\n",
            if ok { "PASS" } else { "FAIL" }
        ));
    }
    out.push_str(&format!(
        "  {} of {} reference values match\n",
        reference_values().len() - failures,
        reference_values().len()
    ));
    out
}
