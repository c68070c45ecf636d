//! End-to-end protocol pipeline and parameter sweeps.
//!
//! One run prepares the entangled atom pair and the entangled one-photon
//! cavity state, rotates each atom in its Ramsey zone, propagates both
//! atom-cavity pairs for the discrete interaction time, and conditions on
//! finding both atoms in the ground state.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use std::ops::RangeInclusive;

use crate::dynamics::{
    evolve_protocol_step, interaction_time, ramsey_unitary, solve_timing, Arm, RamseyParams,
    TimingSolution,
};
use crate::error::{Error, Result};
use crate::hilbert::{apply_on_factors, ATOM1, ATOM2};
use crate::measurement::{
    condition_on_ground_ground, entanglement_report, leakage_probability, residual_branch_check,
    BranchReport, ConditionResult, EntanglementReport,
};
use crate::states::{full_initial_state, EntangledInitSpec};
use crate::sweep::{SweepResult, SweepRow};

/// All physical parameters of one protocol run.
///
/// The interaction time is never set directly: it derives from the timing
/// index as T = (π/4 + 2mπ)/g, except inside the jitter sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolConfig {
    /// Single-photon probability of cavity 1, in ]0, 1[.
    pub p1: f64,
    /// Single-photon probability of cavity 2, in ]0, 1[.
    pub p2: f64,
    /// Shared mean phase ϑ of both cavities.
    pub theta: f64,
    /// Entanglement parameter of the initial state.
    pub eta: f64,
    /// Timing index, 0 ≤ m ≤ 16; m = 5 gives the smallest residual.
    pub m: u32,
    /// Atom-field coupling in rad/s; 1 in natural units.
    pub g: f64,
    /// Fock cutoff per cavity; the top level is a leakage sentinel.
    pub cutoff: usize,
    /// Base seed for jitter sampling.
    pub seed: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            p1: 0.3,
            p2: 0.7,
            theta: 0.4,
            eta: 1.0,
            m: 5,
            g: 1.0,
            cutoff: 3,
            seed: 0,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("p1", self.p1), ("p2", self.p2)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::ParameterRange {
                    name,
                    value,
                    range: "]0, 1[",
                });
            }
        }
        if !self.theta.is_finite() {
            return Err(Error::ParameterRange {
                name: "theta",
                value: self.theta,
                range: "finite",
            });
        }
        if !self.eta.is_finite() {
            return Err(Error::ParameterRange {
                name: "eta",
                value: self.eta,
                range: "finite",
            });
        }
        if self.m > 16 {
            return Err(Error::ParameterRange {
                name: "m",
                value: self.m as f64,
                range: "[0, 16]",
            });
        }
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::ParameterRange {
                name: "g",
                value: self.g,
                range: "(0, ∞)",
            });
        }
        if self.cutoff < 3 {
            return Err(Error::ParameterRange {
                name: "cutoff",
                value: self.cutoff as f64,
                range: "[3, ∞)",
            });
        }
        Ok(())
    }

    /// Nominal interaction time T = (π/4 + 2mπ)/g.
    pub fn interaction_time(&self) -> f64 {
        interaction_time(self.m, self.g)
    }

    pub fn init_spec(&self) -> Result<EntangledInitSpec> {
        EntangledInitSpec::new(self.p1, self.p2, self.theta, self.theta, self.eta)
    }
}

/// Leakage and branch structure recorded alongside each run.
#[derive(Clone, Copy, Debug)]
pub struct Diagnostics {
    /// Population at the sentinel Fock level across both cavities.
    pub leakage: f64,
    pub branches: BranchReport,
    /// The timing solution the nominal interaction time came from.
    pub timing: TimingSolution,
}

/// Everything one protocol run produces.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub condition: ConditionResult,
    pub entanglement: EntanglementReport,
    pub diagnostics: Diagnostics,
}

/// Run the full pipeline at the nominal interaction time.
pub fn run_protocol(config: &ProtocolConfig) -> Result<RunOutcome> {
    let t = config.interaction_time();
    run_with_times(config, t, t)
}

/// Run the pipeline with explicit per-cavity interaction times. Everything
/// else (state preparation, Ramsey binding, conditioning) is the nominal
/// protocol; only the jitter sweep passes perturbed times here.
pub fn run_with_times(config: &ProtocolConfig, t1: f64, t2: f64) -> Result<RunOutcome> {
    config.validate()?;
    let spec = config.init_spec()?;
    let cutoff = config.cutoff;

    let mut state = full_initial_state(&spec, cutoff)?;
    let r1 = ramsey_unitary(&RamseyParams::for_binomial(config.p1, config.theta)?);
    let r2 = ramsey_unitary(&RamseyParams::for_binomial(config.p2, config.theta)?);
    state = apply_on_factors(&state, &[ATOM1], &r1)?;
    state = apply_on_factors(&state, &[ATOM2], &r2)?;
    state = evolve_protocol_step(&state, config.g, t1, Arm::One)?;
    state = evolve_protocol_step(&state, config.g, t2, Arm::Two)?;

    let condition = condition_on_ground_ground(&state, &spec, cutoff)?;
    let branches = residual_branch_check(&state, &spec, cutoff)?;
    let leakage = leakage_probability(&state, cutoff)?;
    Ok(RunOutcome {
        condition,
        entanglement: entanglement_report(config.eta),
        diagnostics: Diagnostics {
            leakage,
            branches,
            timing: TimingSolution::for_m(config.m),
        },
    })
}

fn row_from_outcome(
    config: &ProtocolConfig,
    t1: f64,
    t2: f64,
    outcome: &RunOutcome,
    fidelity_zero_jitter: f64,
) -> SweepRow {
    SweepRow {
        p1: config.p1,
        p2: config.p2,
        theta: config.theta,
        eta: config.eta,
        m: config.m,
        g: config.g,
        t1,
        t2,
        success_prob_sim: outcome.condition.success_prob,
        success_prob_analytic: outcome.entanglement.p_succ_analytic,
        fidelity: outcome.condition.fidelity_to_target,
        fidelity_zero_jitter,
        g_e: outcome.entanglement.g_e,
        leakage: outcome.diagnostics.leakage,
        prob_up_up: outcome.diagnostics.branches.prob_up_up,
        prob_up_down: outcome.diagnostics.branches.prob_up_down,
        prob_down_up: outcome.diagnostics.branches.prob_down_up,
    }
}

/// A grid for sweeping the entanglement parameter: zero plus a logarithmic
/// ladder from 10⁻² to 10², centered on the |η| = 1 minimum.
pub fn default_eta_grid() -> Vec<f64> {
    let mut grid = vec![0.0];
    grid.extend((0..=40).map(|k| 10f64.powf(-2.0 + 0.1 * k as f64)));
    grid
}

/// Run the protocol at each η in the grid. Points are independent and run
/// in parallel; row order follows the grid.
pub fn sweep_eta(config: &ProtocolConfig, eta_grid: &[f64]) -> Result<SweepResult> {
    if eta_grid.is_empty() {
        return Err(Error::EmptyRange);
    }
    for &eta in eta_grid {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::ParameterRange {
                name: "eta",
                value: eta,
                range: "[0, ∞)",
            });
        }
    }
    let t = config.interaction_time();
    let rows: Vec<SweepRow> = eta_grid
        .par_iter()
        .map(|&eta| {
            let point = ProtocolConfig { eta, ..*config };
            let outcome = run_protocol(&point)?;
            let fidelity = outcome.condition.fidelity_to_target;
            Ok(row_from_outcome(&point, t, t, &outcome, fidelity))
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult { rows })
}

/// Shape of the timing-error distribution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum JitterDistribution {
    /// Uniform on [−σ, +σ]: worst-case bounds are read off directly.
    #[default]
    Uniform,
    /// Normal with standard deviation σ.
    Gaussian,
}

/// Options for the timing-jitter sweep.
#[derive(Clone, Copy, Debug)]
pub struct JitterOptions {
    /// Relative spread σ of the interaction time, ΔT/T.
    pub rel_sigma: f64,
    pub samples: usize,
    pub distribution: JitterDistribution,
    /// Draw ε separately per cavity instead of one shared velocity error.
    pub independent: bool,
}

impl Default for JitterOptions {
    fn default() -> Self {
        Self {
            rel_sigma: 1e-2,
            samples: 100,
            distribution: JitterDistribution::Uniform,
            independent: false,
        }
    }
}

/// Aggregates of a jitter sweep, alongside the zero-jitter reference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JitterSummary {
    pub baseline_fidelity: f64,
    pub baseline_success_prob: f64,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    pub mean_success_prob: f64,
    pub min_success_prob: f64,
}

fn draw_epsilon(rng: &mut ChaCha12Rng, opts: &JitterOptions) -> f64 {
    if opts.rel_sigma == 0.0 {
        return 0.0;
    }
    match opts.distribution {
        JitterDistribution::Uniform => rng.random_range(-opts.rel_sigma..=opts.rel_sigma),
        JitterDistribution::Gaussian => Normal::new(0.0, opts.rel_sigma)
            .expect("finite nonnegative sigma")
            .sample(rng),
    }
}

/// Sample perturbed interaction times T(1+ε) and rerun the protocol.
///
/// Each sample seeds its own generator from `config.seed + index`, so the
/// result is deterministic for a given config and identical under any
/// parallel schedule.
pub fn sweep_timing_jitter(
    config: &ProtocolConfig,
    opts: &JitterOptions,
) -> Result<(SweepResult, JitterSummary)> {
    if !(opts.rel_sigma >= 0.0 && opts.rel_sigma.is_finite()) {
        return Err(Error::ParameterRange {
            name: "rel_sigma",
            value: opts.rel_sigma,
            range: "[0, ∞)",
        });
    }
    if opts.samples == 0 {
        return Err(Error::EmptyRange);
    }
    let t_nominal = config.interaction_time();
    let baseline = run_protocol(config)?;
    let baseline_fidelity = baseline.condition.fidelity_to_target;
    let baseline_success_prob = baseline.condition.success_prob;

    let rows: Vec<SweepRow> = (0..opts.samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha12Rng::seed_from_u64(config.seed.wrapping_add(index as u64));
            let eps1 = draw_epsilon(&mut rng, opts);
            let eps2 = if opts.independent {
                draw_epsilon(&mut rng, opts)
            } else {
                eps1
            };
            let t1 = t_nominal * (1.0 + eps1);
            let t2 = t_nominal * (1.0 + eps2);
            let outcome = run_with_times(config, t1, t2)?;
            Ok(row_from_outcome(
                config,
                t1,
                t2,
                &outcome,
                baseline_fidelity,
            ))
        })
        .collect::<Result<_>>()?;

    let n = rows.len() as f64;
    let summary = JitterSummary {
        baseline_fidelity,
        baseline_success_prob,
        mean_fidelity: rows.iter().map(|r| r.fidelity).sum::<f64>() / n,
        min_fidelity: rows
            .iter()
            .map(|r| r.fidelity)
            .fold(f64::INFINITY, f64::min),
        mean_success_prob: rows.iter().map(|r| r.success_prob_sim).sum::<f64>() / n,
        min_success_prob: rows
            .iter()
            .map(|r| r.success_prob_sim)
            .fold(f64::INFINITY, f64::min),
    };
    Ok((SweepResult { rows }, summary))
}

/// The timing-condition table: every m in the range, sorted by residual.
pub fn find_timing(
    m_range: RangeInclusive<u32>,
    allow_extended: bool,
) -> Result<Vec<TimingSolution>> {
    solve_timing(m_range, allow_extended)
}
