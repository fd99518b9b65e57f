use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use propertime::UnitSystem;
use ptcli::error::CliError;
use ptcli::table::write_atomic;
use ptcli::verify::{self, DEFAULT_SEED};
use ptcli::{scenarios, Config, ResultTable};

#[derive(Parser)]
#[command(
    name = "ptcli",
    version,
    about = "Proper-time electrodynamics scenario runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Boost a source event, velocity, acceleration and densities.
    Transform(RunArgs),
    /// Retarded E and B fields along a line of points.
    Fields(RunArgs),
    /// Single-particle orbit in proper time.
    Orbit(RunArgs),
    /// Free many-particle evolution on the global clock.
    Nbody(RunArgs),
    /// Square-root operator on a Gaussian: kernel sum and momentum oracle.
    Spectral(RunArgs),
    /// Doppler redshift from observer or proper velocity.
    Redshift(RunArgs),
    /// Muon range on the proper and observer clocks.
    Muon(RunArgs),
    /// Light speed and proper velocity of a rest-frame source seen from a moving frame.
    RestSource(RunArgs),
    /// Run the invariant suite and print the residual table.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    Natural,
    Si,
}

impl Units {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "natural" => Some(Self::Natural),
            "si" => Some(Self::Si),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Natural => "natural",
            Self::Si => "si",
        }
    }

    fn system(self) -> UnitSystem {
        match self {
            Self::Natural => UnitSystem::natural(),
            Self::Si => UnitSystem::si_lightspeed(),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Scenario configuration (flat JSON object).
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Unit system; overrides the config's `units` key.
    #[arg(long, value_enum)]
    units: Option<Units>,
    /// Evaluate independent points on several threads.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Optional configuration holding `seed`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the residual table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run check groups on separate threads.
    #[arg(long)]
    parallel: bool,
}

fn resolve_units(cfg: &Config, flag: Option<Units>) -> Result<Units, CliError> {
    if let Some(u) = flag {
        return Ok(u);
    }
    let named = cfg.choice("units", &["natural", "si"])?;
    Ok(Units::parse(named).expect("choice restricts the unit names"))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn header(table: &mut ResultTable, scenario: &str, units: &str, echo: &str) {
    let mut meta = vec![
        ("generator", format!("ptcli {}", env!("CARGO_PKG_VERSION"))),
        ("library", format!("propertime {}", propertime::VERSION)),
        ("scenario", scenario.to_string()),
        ("units", units.to_string()),
        ("config", echo.to_string()),
    ];
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    meta.push(("generated_unix", stamp.to_string()));
    let rest = std::mem::take(&mut table.metadata);
    table.metadata = meta
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .chain(rest)
        .collect();
}

fn run_scenario(name: &str, args: &RunArgs) -> Result<(), CliError> {
    let cfg = Config::load(&args.config)?;
    let units = resolve_units(&cfg, args.units)?;
    let mut table = scenarios::run(name, &cfg, &units.system(), args.parallel)?;
    header(&mut table, name, units.name(), &cfg.echo());
    emit(&table.to_csv(), args.out.as_deref())
}

fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::empty(),
    };
    cfg.validate("verify", &["seed"])?;
    let seed = cfg.seed_or("seed", DEFAULT_SEED)?;
    let checks = verify::run_suite(seed, args.parallel)?;
    let text = format!(
        "# seed: {seed}\n# units: natural\n{}",
        verify::render(&checks)
    );
    emit(&text, args.out.as_deref())?;
    match checks.iter().filter(|c| !c.passed()).count() {
        0 => Ok(()),
        n => Err(CliError::VerifyFailed(n)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Transform(a) => run_scenario("transform", a),
        Command::Fields(a) => run_scenario("fields", a),
        Command::Orbit(a) => run_scenario("orbit", a),
        Command::Nbody(a) => run_scenario("nbody", a),
        Command::Spectral(a) => run_scenario("spectral", a),
        Command::Redshift(a) => run_scenario("redshift", a),
        Command::Muon(a) => run_scenario("muon", a),
        Command::RestSource(a) => run_scenario("rest-source", a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ptcli: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
