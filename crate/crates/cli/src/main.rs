//! Command-line front end for the hierarchical quantum communication
//! simulator.
//!
//! Exit codes: 0 on success, 1 if any table-verification row failed,
//! 2 on invalid configuration.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use hiqs::channels::ChannelSpec;
use hiqs::harness::{
    run_scenario, verdict, write_report, AdversaryKind, LambdaChoice, Protocol, Report,
    ReportFormat, ScenarioConfig, ScenarioVerdict,
};
use hiqs::hqis::Receiver;
use hiqs::Error;

#[derive(Parser)]
#[command(
    name = "hiqs",
    version,
    about = "Hierarchical quantum communication simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a protocol scenario (perfect/probabilistic splitting, secret
    /// sharing, or one of the verification modes).
    Simulate(SimulateArgs),
    /// Enumerate every correction-table row deterministically and report
    /// per-row pass/fail.
    VerifyTables(CommonArgs),
    /// Check the receiver-marginal and branch-decomposition properties of
    /// a maximal channel.
    VerifyEncryption(VerifyEncryptionArgs),
    /// Compare the capture adversary against the bare and hardened schemes.
    AttackStudy(AttackStudyArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Root seed for all random streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Output format: json, csv or human.
    #[arg(long, default_value = "human")]
    format: String,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Protocol: hqis-perfect, hqis-probabilistic, hqss, attack-study,
    /// verify-tables or verify-encryption.
    #[arg(long)]
    protocol: Option<String>,
    /// Channel kind: omega, cluster4 or omega-prime (generic channels are
    /// config-file only).
    #[arg(long)]
    channel: Option<String>,
    /// Receiving agent: bob, charlie or diana.
    #[arg(long)]
    receiver: Option<String>,
    /// Real part of the secret parameter (omit both parts for a fresh
    /// random draw per trial).
    #[arg(long)]
    lambda_re: Option<f64>,
    /// Imaginary part of the secret parameter.
    #[arg(long)]
    lambda_im: Option<f64>,
    /// Channel coefficient a (probabilistic protocol).
    #[arg(long)]
    a: Option<f64>,
    /// Channel coefficient b (probabilistic protocol).
    #[arg(long)]
    b: Option<f64>,
    /// Channel copies per secret-sharing session.
    #[arg(long)]
    n: Option<usize>,
    /// Adversary: none, intercept-resend or dishonest-bob.
    #[arg(long)]
    adversary: Option<String>,
    /// Per-qubit intercept probability for intercept-resend.
    #[arg(long)]
    intercept_prob: Option<f64>,
    /// Abort threshold on the matched-basis decoy error rate.
    #[arg(long)]
    threshold: Option<f64>,
    /// Number of Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyEncryptionArgs {
    /// Channel kind: omega or cluster4.
    #[arg(long)]
    channel: Option<String>,
    /// Number of random secret parameters to check.
    #[arg(long)]
    trials: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct AttackStudyArgs {
    /// Channel copies per session.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda_re: Option<f64>,
    #[arg(long)]
    lambda_im: Option<f64>,
    /// Number of blind-capture sessions.
    #[arg(long)]
    trials: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

fn parse_channel(name: &str) -> Result<ChannelSpec, Error> {
    match name {
        "omega" => Ok(ChannelSpec::Omega),
        "cluster4" => Ok(ChannelSpec::Cluster4),
        "omega-prime" => Err(Error::InvalidConfig {
            field: "channel".to_string(),
            message: "omega-prime takes its coefficients from --a/--b".to_string(),
        }),
        "generic" => Err(Error::InvalidConfig {
            field: "channel".to_string(),
            message: "generic channels need component states; use --config".to_string(),
        }),
        other => Err(Error::InvalidConfig {
            field: "channel".to_string(),
            message: format!("unknown channel `{other}`"),
        }),
    }
}

fn parse_receiver(name: &str) -> Result<Receiver, Error> {
    match name {
        "bob" => Ok(Receiver::Bob),
        "charlie" => Ok(Receiver::Charlie),
        "diana" => Ok(Receiver::Diana),
        other => Err(Error::InvalidConfig {
            field: "receiver".to_string(),
            message: format!("unknown receiver `{other}`"),
        }),
    }
}

fn load_config_file(path: &PathBuf) -> Result<ScenarioConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig {
        field: "config".to_string(),
        message: e.to_string(),
    })
}

fn build_simulate_config(args: &SimulateArgs) -> Result<ScenarioConfig, Error> {
    let mut config = match &args.config {
        Some(path) => load_config_file(path)?,
        None => {
            let protocol = args
                .protocol
                .as_deref()
                .ok_or_else(|| Error::InvalidConfig {
                    field: "protocol".to_string(),
                    message: "required unless --config is given".to_string(),
                })?;
            ScenarioConfig::new(Protocol::from_str(protocol)?)
        }
    };

    // Flags override file fields.
    if args.config.is_some() {
        if let Some(protocol) = &args.protocol {
            config.protocol = Protocol::from_str(protocol)?;
        }
    }
    if let Some(channel) = &args.channel {
        config.channel = Some(parse_channel(channel)?);
    }
    if let Some(receiver) = &args.receiver {
        config.receiver = Some(parse_receiver(receiver)?);
    }
    match (args.lambda_re, args.lambda_im) {
        (None, None) => {}
        (re, im) => {
            config.lambda = LambdaChoice::fixed(re.unwrap_or(0.0), im.unwrap_or(0.0));
        }
    }
    if args.a.is_some() {
        config.a = args.a;
    }
    if args.b.is_some() {
        config.b = args.b;
    }
    if args.n.is_some() {
        config.n = args.n;
    }
    if let Some(adversary) = &args.adversary {
        config.adversary = AdversaryKind::from_str(adversary)?;
    }
    if args.intercept_prob.is_some() {
        config.intercept_prob = args.intercept_prob;
    }
    if let Some(threshold) = args.threshold {
        config.threshold = threshold;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(seed) = args.common.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn emit(report: &Report, common: &CommonArgs) -> Result<ScenarioVerdict, Error> {
    let format = ReportFormat::from_str(&common.format)?;
    write_report(report, format, common.out.as_deref())?;
    Ok(verdict(report))
}

fn run(cli: Cli) -> Result<ScenarioVerdict, Error> {
    match cli.command {
        Command::Simulate(args) => {
            let config = build_simulate_config(&args)?;
            let report = run_scenario(&config)?;
            emit(&report, &args.common)
        }
        Command::VerifyTables(common) => {
            let mut config = ScenarioConfig::new(Protocol::VerifyTables);
            if let Some(seed) = common.seed {
                config.seed = seed;
            }
            let report = run_scenario(&config)?;
            emit(&report, &common)
        }
        Command::VerifyEncryption(args) => {
            let mut config = ScenarioConfig::new(Protocol::VerifyEncryption);
            if let Some(channel) = &args.channel {
                config.channel = Some(parse_channel(channel)?);
            }
            if let Some(trials) = args.trials {
                config.trials = trials;
            }
            if let Some(seed) = args.common.seed {
                config.seed = seed;
            }
            let report = run_scenario(&config)?;
            emit(&report, &args.common)
        }
        Command::AttackStudy(args) => {
            let mut config = ScenarioConfig::new(Protocol::AttackStudy);
            if args.n.is_some() {
                config.n = args.n;
            }
            match (args.lambda_re, args.lambda_im) {
                (None, None) => {}
                (re, im) => {
                    config.lambda = LambdaChoice::fixed(re.unwrap_or(0.0), im.unwrap_or(0.0));
                }
            }
            if let Some(trials) = args.trials {
                config.trials = trials;
            }
            if let Some(seed) = args.common.seed {
                config.seed = seed;
            }
            let report = run_scenario(&config)?;
            emit(&report, &args.common)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(ScenarioVerdict::Ok) => ExitCode::SUCCESS,
        Ok(ScenarioVerdict::TableFailure) => {
            eprintln!("error: table verification failed");
            ExitCode::from(1)
        }
        Err(err @ Error::InvalidConfig { .. }) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
