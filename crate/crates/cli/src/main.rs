//! Command-line driver: run the protocol once, sweep the entanglement
//! parameter, sample timing jitter, or tabulate the timing solutions.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cavity_gbs::config::PartialConfig;
use cavity_gbs::protocol::{
    default_eta_grid, find_timing, run_protocol, sweep_eta, sweep_timing_jitter,
    JitterDistribution, JitterOptions, ProtocolConfig, RunOutcome,
};
use cavity_gbs::sweep::{format_f64, write_timing_csv, SweepResult, SweepRow};
use cavity_gbs::Result;

#[derive(Parser)]
#[command(
    name = "cavity-gbs",
    version,
    about = "Simulate conditional generation of entangled two-photon binomial states in two cavities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the protocol once and report the figures of merit
    Run(RunArgs),
    /// Run the protocol across a grid of entanglement parameters
    SweepEta(SweepEtaArgs),
    /// Sample relative timing errors and report fidelity statistics
    SweepJitter(SweepJitterArgs),
    /// Tabulate the discrete interaction-time solutions by residual
    FindTiming(FindTimingArgs),
}

/// Parameters shared by every protocol-running subcommand. Flags override
/// values from `--config`, which override the built-in defaults.
#[derive(Args)]
struct ProtocolArgs {
    /// Flat key-value config file (see protocol.conf.example)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Single-photon probability of cavity 1, in ]0,1[ [default: 0.3]
    #[arg(long)]
    p1: Option<f64>,
    /// Single-photon probability of cavity 2, in ]0,1[ [default: 0.7]
    #[arg(long)]
    p2: Option<f64>,
    /// Shared mean phase of both cavities, radians [default: 0.4]
    #[arg(long)]
    theta: Option<f64>,
    /// Entanglement parameter of the initial state [default: 1]
    #[arg(long)]
    eta: Option<f64>,
    /// Timing index in [0,16]; T = (pi/4 + 2m*pi)/g [default: 5]
    #[arg(long)]
    m: Option<u32>,
    /// Atom-field coupling, rad/s [default: 1]
    #[arg(long)]
    g: Option<f64>,
    /// Fock cutoff per cavity; top level is a leakage sentinel [default: 3]
    #[arg(long)]
    cutoff: Option<usize>,
    /// Base seed for jitter sampling [default: 0]
    #[arg(long)]
    seed: Option<u64>,
}

impl ProtocolArgs {
    fn resolve(&self) -> Result<ProtocolConfig> {
        let mut layered = match &self.config {
            Some(path) => PartialConfig::load(path)?,
            None => PartialConfig::default(),
        };
        let flags = PartialConfig {
            p1: self.p1,
            p2: self.p2,
            theta: self.theta,
            eta: self.eta,
            m: self.m,
            g: self.g,
            cutoff: self.cutoff,
            seed: self.seed,
        };
        layered = layered.merged_with(&flags);
        let config = layered.apply(ProtocolConfig::default());
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Write the run as a one-row CSV
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepEtaArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Comma-separated eta values; defaults to 0 plus a log grid 0.01..100
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    etas: Option<Vec<f64>>,
    /// Write the sweep table as CSV
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepJitterArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Relative timing spread sigma = dT/T
    #[arg(long, default_value_t = 1e-2)]
    rel_sigma: f64,
    /// Number of sampled runs
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Draw from a normal distribution instead of uniform [-sigma, sigma]
    #[arg(long)]
    gaussian: bool,
    /// Draw an independent error per cavity instead of one shared error
    #[arg(long)]
    independent: bool,
    /// Write the per-sample table as CSV
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FindTimingArgs {
    /// Smallest timing index to scan
    #[arg(long, default_value_t = 0)]
    m_min: u32,
    /// Largest timing index to scan
    #[arg(long, default_value_t = 16)]
    m_max: u32,
    /// Allow scanning beyond the experimentally sensible m = 16
    #[arg(long)]
    extend: bool,
    /// Write the table as CSV (columns m, g_t, delta)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn print_outcome(config: &ProtocolConfig, outcome: &RunOutcome) {
    let c = &outcome.condition;
    let e = &outcome.entanglement;
    let d = &outcome.diagnostics;
    println!(
        "parameters        p1 = {}, p2 = {}, theta = {}, eta = {}, m = {}, g = {}",
        config.p1, config.p2, config.theta, config.eta, config.m, config.g
    );
    println!(
        "interaction time  g*T = {:.15} (delta = {:.6e})",
        d.timing.g_t, d.timing.delta
    );
    println!(
        "success prob      {:.12}   (analytic {:.12})",
        c.success_prob, e.p_succ_analytic
    );
    println!("target fidelity   {:.12}", c.fidelity_to_target);
    println!("entanglement g_e  {:.12}", e.g_e);
    println!(
        "branch probs      up,up = {:.3e}  up,down = {:.6}  down,up = {:.6}",
        d.branches.prob_up_up, d.branches.prob_up_down, d.branches.prob_down_up
    );
    println!("leakage           {:.3e}", d.leakage);
}

fn run_row(config: &ProtocolConfig, outcome: &RunOutcome) -> SweepRow {
    let t = config.interaction_time();
    SweepRow {
        p1: config.p1,
        p2: config.p2,
        theta: config.theta,
        eta: config.eta,
        m: config.m,
        g: config.g,
        t1: t,
        t2: t,
        success_prob_sim: outcome.condition.success_prob,
        success_prob_analytic: outcome.entanglement.p_succ_analytic,
        fidelity: outcome.condition.fidelity_to_target,
        fidelity_zero_jitter: outcome.condition.fidelity_to_target,
        g_e: outcome.entanglement.g_e,
        leakage: outcome.diagnostics.leakage,
        prob_up_up: outcome.diagnostics.branches.prob_up_up,
        prob_up_down: outcome.diagnostics.branches.prob_up_down,
        prob_down_up: outcome.diagnostics.branches.prob_down_up,
    }
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let config = args.protocol.resolve()?;
    let outcome = run_protocol(&config)?;
    print_outcome(&config, &outcome);
    if let Some(path) = &args.out {
        let table = SweepResult {
            rows: vec![run_row(&config, &outcome)],
        };
        table.write_csv(path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_sweep_eta(args: &SweepEtaArgs) -> Result<()> {
    let config = args.protocol.resolve()?;
    let grid = match &args.etas {
        Some(values) => values.clone(),
        None => default_eta_grid(),
    };
    let result = sweep_eta(&config, &grid)?;
    let min_row = result
        .rows
        .iter()
        .min_by(|a, b| a.success_prob_sim.partial_cmp(&b.success_prob_sim).unwrap())
        .expect("nonempty sweep");
    println!(
        "swept {} eta values; min success prob {:.6} at eta = {}",
        result.len(),
        min_row.success_prob_sim,
        min_row.eta
    );
    if let Some(path) = &args.out {
        result.write_csv(path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_sweep_jitter(args: &SweepJitterArgs) -> Result<()> {
    let config = args.protocol.resolve()?;
    let opts = JitterOptions {
        rel_sigma: args.rel_sigma,
        samples: args.samples,
        distribution: if args.gaussian {
            JitterDistribution::Gaussian
        } else {
            JitterDistribution::Uniform
        },
        independent: args.independent,
    };
    let (result, summary) = sweep_timing_jitter(&config, &opts)?;
    println!(
        "sampled {} runs at dT/T = {} (seed {})",
        result.len(),
        args.rel_sigma,
        config.seed
    );
    println!(
        "fidelity          mean {:.9}  min {:.9}  zero-jitter {:.9}",
        summary.mean_fidelity, summary.min_fidelity, summary.baseline_fidelity
    );
    println!(
        "success prob      mean {:.9}  min {:.9}  zero-jitter {:.9}",
        summary.mean_success_prob, summary.min_success_prob, summary.baseline_success_prob
    );
    println!(
        "fidelity loss     jitter {:.3e}  vs timing residual alone {:.3e}",
        1.0 - summary.mean_fidelity,
        1.0 - summary.baseline_fidelity
    );
    if let Some(path) = &args.out {
        result.write_csv(path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_find_timing(args: &FindTimingArgs) -> Result<()> {
    let table = find_timing(args.m_min..=args.m_max, args.extend)?;
    println!("{:>4}  {:>22}  {:>24}", "m", "g*T", "delta");
    for sol in &table {
        println!(
            "{:>4}  {:>22.16}  {:>24}",
            sol.m,
            sol.g_t,
            format_f64(sol.delta)
        );
    }
    if let Some(path) = &args.out {
        write_timing_csv(&table, path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Die silently on a closed pipe (e.g. `cavity-gbs find-timing | head`)
/// instead of panicking mid-print.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::SweepEta(args) => cmd_sweep_eta(args),
        Command::SweepJitter(args) => cmd_sweep_jitter(args),
        Command::FindTiming(args) => cmd_find_timing(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
