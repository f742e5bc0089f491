//! `rotor`: command-line access to the rigid-rotor library.
//!
//! Exit codes: 0 success, 1 failed check or numerical error, 2 usage
//! error, 3 invalid configuration.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod states;
pub mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{ScanArgs, Section, SimulateArgs, StateKind};
use config::{Overrides, RunConfig};
use error::CliError;
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "rotor", version, about = "Rigid rotor geometry, dynamics and phase-space distributions")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    hbar: Option<f64>,

    /// Principal moments I1,I2,I3.
    #[arg(long, global = true, value_parser = parse_triple, allow_hyphen_values = true)]
    inertia: Option<[f64; 3]>,

    #[arg(long, global = true)]
    jmax: Option<usize>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory for artifacts without an explicit --output.
    #[arg(long = "out-dir", global = true)]
    out_dir: Option<PathBuf>,

    /// Output file of the subcommand.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    show_config: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Curvature and frame identities.
    #[command(subcommand)]
    Geometry(GeometryCmd),
    /// Classical trajectories.
    #[command(subcommand)]
    Dynamics(DynamicsCmd),
    /// Wave-function files.
    #[command(subcommand)]
    State(StateCmd),
    /// Wigner distribution on T*SO(3).
    #[command(subcommand)]
    Wigner(WignerCmd),
    /// Liouville residual of f̃_W.
    #[command(subcommand)]
    Coherence(CoherenceCmd),
    /// Reduction from the extended space.
    #[command(subcommand)]
    Su2(Su2Cmd),
    /// Invariant suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
enum GeometryCmd {
    Check {
        /// Number of random chart points.
        #[arg(long)]
        points: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum DynamicsCmd {
    Simulate {
        /// Principal moments I1,I2,I3 (overrides the configuration).
        #[arg(long = "I", value_parser = parse_triple, allow_hyphen_values = true)]
        inertia: Option<[f64; 3]>,
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, default_value = "1,0.5,0.2")]
        rho: [f64; 3],
        /// Initial Euler angles phi,theta,psi.
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, default_value = "0,0,0")]
        euler: [f64; 3],
        #[arg(long, default_value_t = 10.0)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Write every n-th step (the last step is always written).
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Basis,
    Random,
}

#[derive(Debug, Subcommand)]
enum StateCmd {
    Make {
        #[arg(long, value_enum, default_value_t = Kind::Basis)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k: i64,
    },
    Evolve {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        t: f64,
    },
}

#[derive(Debug, Subcommand)]
enum WignerCmd {
    Eval {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        euler: [f64; 3],
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        rho: [f64; 3],
    },
    Expect {
        #[arg(long)]
        state: PathBuf,
    },
    Overlap {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    Limit {
        /// one, rho1, rho2, rho3 or h.
        #[arg(long, default_value = "rho3")]
        observable: String,
        /// Comma-separated ħ values; the configured sequence when absent.
        #[arg(long, value_delimiter = ',')]
        hbars: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum CoherenceCmd {
    Scan {
        /// State file; a seeded random state when absent.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.025, 0.05, 0.1, 0.2, 0.4])]
        gammas: Vec<f64>,
        #[arg(long, default_value_t = 0.3)]
        t: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SectionArg {
    Angles,
    Momenta,
}

#[derive(Debug, Subcommand)]
enum Su2Cmd {
    Reduce {
        #[arg(long, value_enum, default_value_t = SectionArg::Angles)]
        section: SectionArg,
        /// Samples per axis.
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0.08)]
        sigma: f64,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    All {
        /// Restrict to these suites.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(v).map_err(|v| format!("expected three comma-separated numbers, got {}", v.len()))
}

/// Caps the global rayon pool at `ROTOR_THREADS` workers.
fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("ROTOR_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("ROTOR_THREADS must be a positive integer, got {value:?}")))?;
    // A second initialization in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let g = &cli.global;
    let overrides = Overrides {
        hbar: g.hbar,
        inertia: g.inertia,
        jmax: g.jmax,
        seed: g.seed,
        output_dir: g.out_dir.clone(),
    };
    let cfg = RunConfig::load(g.config.as_deref(), &overrides)?;
    if g.show_config {
        println!("{}", cfg.to_pretty_json());
        return Ok(());
    }
    let out = g.output.as_deref();
    let Some(command) = cli.command else {
        return Err(CliError::Usage("a subcommand is required; see --help".into()));
    };
    let written = match command {
        Command::Geometry(GeometryCmd::Check { points }) => vec![commands::geometry_check(&cfg, points, out)?],
        Command::Dynamics(DynamicsCmd::Simulate {
            inertia,
            rho,
            euler,
            t,
            dt,
            every,
        }) => {
            let args = SimulateArgs {
                inertia,
                rho,
                euler,
                t,
                dt,
                every,
            };
            vec![commands::dynamics_simulate(&cfg, &args, out)?]
        }
        Command::State(StateCmd::Make { kind, j, m, k }) => {
            let kind = match kind {
                Kind::Basis => StateKind::Basis { j, m, k },
                Kind::Random => StateKind::Random,
            };
            vec![commands::state_make(&cfg, &kind, out)?]
        }
        Command::State(StateCmd::Evolve { state, t }) => vec![commands::state_evolve(&cfg, &state, t, out)?],
        Command::Wigner(WignerCmd::Eval { state, euler, rho }) => {
            vec![commands::wigner_eval(&cfg, &state, euler, rho, out)?]
        }
        Command::Wigner(WignerCmd::Expect { state }) => vec![commands::wigner_expect(&cfg, &state, out)?],
        Command::Wigner(WignerCmd::Overlap { a, b }) => vec![commands::wigner_overlap(&cfg, &a, &b, out)?],
        Command::Wigner(WignerCmd::Limit { observable, hbars }) => {
            vec![commands::wigner_limit(&cfg, &observable, &hbars, out)?]
        }
        Command::Coherence(CoherenceCmd::Scan { state, gammas, t }) => {
            vec![commands::coherence_scan_cmd(&cfg, &ScanArgs { state, gammas, t }, out)?]
        }
        Command::Su2(Su2Cmd::Reduce { section, n, sigma }) => {
            let section = match section {
                SectionArg::Angles => Section::Angles,
                SectionArg::Momenta => Section::Momenta,
            };
            vec![commands::su2_reduce(&cfg, section, n, sigma, out)?]
        }
        Command::Verify(VerifyCmd::All { only }) => commands::verify_all(&cfg, &only)?,
    };
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("rotor: {e}");
            e.exit_code()
        }
    }
}
