use beautylab::simulation::{DEFAULT_CHUNK_SIZE, DEFAULT_SEED};
use beautylab::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "beautylab", version, about = "Exact and Monte Carlo analysis of the Sleeping Beauty experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact probabilities in both experiments
    Analyze,
    /// Monte Carlo frequency estimators
    Simulate,
    /// Betting on Heads at every awakening: closed forms and simulation
    Bet(BetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Coin bias as N/D
    #[arg(long, global = true, default_value = "1/2", value_parser = parse_rational)]
    pub p_heads: Rational,

    /// Awakenings after Tails
    #[arg(long, global = true, default_value_t = 2)]
    pub tails_days: u32,

    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub n_trials: u64,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Trials per independently seeded chunk
    #[arg(long, global = true, default_value_t = DEFAULT_CHUNK_SIZE)]
    pub chunk_size: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,

    /// Use the fair-coin, two-awakening setup and check the headline numbers
    #[arg(long, global = true)]
    pub paper: bool,
}

#[derive(Debug, Args)]
pub struct BetArgs {
    /// Stake per offered bet, N/D
    #[arg(long, default_value = "10", value_parser = parse_rational)]
    pub cost: Rational,

    /// Gross payoff of a winning bet, N/D
    #[arg(long, default_value = "60", value_parser = parse_rational)]
    pub payoff: Rational,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: beautylab::Error| e.to_string())
}
