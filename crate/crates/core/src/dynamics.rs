//! Exact resonant Jaynes-Cummings propagation on an (atom, cavity) pair,
//! Ramsey-zone rotations, and the discrete interaction-time search.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::hilbert::{apply_on_factors, StateVector, ATOM1, ATOM2, CAV1, CAV2};

/// Coupling and interaction time of one atom-cavity passage. Only the
/// product g·t enters the propagator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JCParams {
    pub g: f64,
    pub t: f64,
}

impl JCParams {
    pub fn new(g: f64, t: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::ParameterRange {
                name: "g",
                value: g,
                range: "(0, ∞)",
            });
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::ParameterRange {
                name: "t",
                value: t,
                range: "[0, ∞)",
            });
        }
        Ok(Self { g, t })
    }
}

/// Ramsey pulse angle and phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamseyParams {
    pub theta: f64,
    pub phi: f64,
}

impl RamseyParams {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Protocol binding: cos(θ/2) = √p, φ = −ϑ, so the rotated atomic basis
    /// tracks the binomial parameters of the cavity it is about to enter.
    pub fn for_binomial(p: f64, mean_phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ParameterRange {
                name: "p",
                value: p,
                range: "[0, 1]",
            });
        }
        Ok(Self {
            theta: 2.0 * p.sqrt().acos(),
            phi: -mean_phase,
        })
    }
}

/// One discrete solution of the interaction-time conditions.
///
/// `g_t = π/4 + 2mπ` solves sin(gT) + cos(gT) = √2 in closed form; `delta`
/// is the residual 1 − sin(√2·gT) left in the second condition, which the
/// discrete family cannot satisfy simultaneously.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingSolution {
    pub m: u32,
    pub g_t: f64,
    pub delta: f64,
}

impl TimingSolution {
    pub fn for_m(m: u32) -> Self {
        let g_t = FRAC_PI_4 + 2.0 * m as f64 * std::f64::consts::PI;
        let delta = 1.0 - (SQRT_2 * g_t).sin();
        Self { m, g_t, delta }
    }
}

/// Dimensionless interaction time g·T of the m-th solution, divided by g.
pub fn interaction_time(m: u32, g: f64) -> f64 {
    TimingSolution::for_m(m).g_t / g
}

/// Scan `m_range` and return solutions sorted by ascending residual `delta`.
///
/// The default search window is the experimentally sensible 0 ≤ m ≤ 16
/// (gT ∼ 10⁻¹..10²); pass `allow_extended` to look beyond it.
pub fn solve_timing(
    m_range: RangeInclusive<u32>,
    allow_extended: bool,
) -> Result<Vec<TimingSolution>> {
    if m_range.is_empty() {
        return Err(Error::EmptyRange);
    }
    let (lo, hi) = (*m_range.start(), *m_range.end());
    if hi > 16 && !allow_extended {
        return Err(Error::RangeBeyondDefault { lo, hi });
    }
    let mut solutions: Vec<TimingSolution> = m_range.map(TimingSolution::for_m).collect();
    solutions.sort_by(|a, b| {
        a.delta
            .partial_cmp(&b.delta)
            .expect("delta is finite")
            .then(a.m.cmp(&b.m))
    });
    Ok(solutions)
}

fn c(re: f64) -> Complex64 {
    Complex64::from(re)
}

/// Resonant Jaynes-Cummings propagator on one (atom ⊗ cavity) pair, in the
/// basis |a, n⟩ with a ∈ {↑, ↓} first and row-major index a·(cutoff+1) + n.
///
/// Each doublet {|↑,n⟩, |↓,n+1⟩} rotates by the Rabi angle g√(n+1)·t:
///
/// ```text
/// |↑,n⟩   → cos(g√(n+1)t)|↑,n⟩ − sin(g√(n+1)t)|↓,n+1⟩
/// |↓,n+1⟩ → sin(g√(n+1)t)|↑,n⟩ + cos(g√(n+1)t)|↓,n+1⟩
/// ```
///
/// |↓,0⟩ is stationary. |↑,cutoff⟩ has no partner inside the cutoff and is
/// held fixed rather than truncated, keeping the matrix exactly unitary;
/// population there is leakage and flags a truncation or indexing bug.
pub fn jc_propagator(params: &JCParams, cutoff: usize) -> Array2<Complex64> {
    let dim_cav = cutoff + 1;
    let mut u = Array2::<Complex64>::eye(2 * dim_cav);
    let idx_up = |n: usize| n;
    let idx_down = |n: usize| dim_cav + n;
    for n in 0..cutoff {
        let angle = params.g * ((n + 1) as f64).sqrt() * params.t;
        let (sin, cos) = angle.sin_cos();
        let iu = idx_up(n);
        let id = idx_down(n + 1);
        u[[iu, iu]] = c(cos);
        u[[id, iu]] = c(-sin);
        u[[iu, id]] = c(sin);
        u[[id, id]] = c(cos);
    }
    u
}

/// Ramsey-zone rotation of a single atom, in the (↑, ↓) basis:
///
/// ```text
/// |↑⟩ → cos(θ/2)|↑⟩ − e^(iφ) sin(θ/2)|↓⟩
/// |↓⟩ → e^(−iφ) sin(θ/2)|↑⟩ + cos(θ/2)|↓⟩
/// ```
pub fn ramsey_unitary(params: &RamseyParams) -> Array2<Complex64> {
    let (sin, cos) = (params.theta / 2.0).sin_cos();
    let mut u = Array2::<Complex64>::zeros((2, 2));
    u[[0, 0]] = c(cos);
    u[[0, 1]] = Complex64::from_polar(sin, -params.phi);
    u[[1, 0]] = -Complex64::from_polar(sin, params.phi);
    u[[1, 1]] = c(cos);
    u
}

/// One of the two independent atom+cavity subsystems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arm {
    One,
    Two,
}

impl Arm {
    pub fn atom_label(self) -> &'static str {
        match self {
            Arm::One => ATOM1,
            Arm::Two => ATOM2,
        }
    }

    pub fn cavity_label(self) -> &'static str {
        match self {
            Arm::One => CAV1,
            Arm::Two => CAV2,
        }
    }
}

/// Propagate one arm of the canonical-layout state through its cavity for
/// time `t`. The two arms act on disjoint factors, so the order in which
/// they are applied is irrelevant.
pub fn evolve_protocol_step(state: &StateVector, g: f64, t: f64, arm: Arm) -> Result<StateVector> {
    let cutoff = state.layout().dim_of(arm.cavity_label())? - 1;
    let u = jc_propagator(&JCParams::new(g, t)?, cutoff);
    apply_on_factors(state, &[arm.atom_label(), arm.cavity_label()], &u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{inner, unitarity_deviation, SpaceLayout};
    use crate::states::{full_initial_state, EntangledInitSpec};
    use ndarray::Array2;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    const CUT: usize = 3;

    /// Matrix exponential by scaling-and-squaring with a Taylor series;
    /// independent of the analytic block construction it checks.
    fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
        let n = a.nrows();
        let max_abs = a.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let squarings = (max_abs.log2().ceil().max(0.0) as u32) + 4;
        let scaled = a.mapv(|z| z / 2.0f64.powi(squarings as i32));
        let mut result = Array2::<Complex64>::eye(n);
        let mut term = Array2::<Complex64>::eye(n);
        for k in 1..=24 {
            term = term.dot(&scaled) / Complex64::from(k as f64);
            result += &term;
        }
        for _ in 0..squarings {
            result = result.dot(&result);
        }
        result
    }

    /// Generator g·t(σ₊a − σ₋a†) on the truncated (atom ⊗ cavity) space,
    /// whose exponential is the interaction-picture propagator.
    fn jc_generator(gt: f64, cutoff: usize) -> Array2<Complex64> {
        let dim_cav = cutoff + 1;
        let mut k = Array2::<Complex64>::zeros((2 * dim_cav, 2 * dim_cav));
        for n in 0..cutoff {
            let coupling = gt * ((n + 1) as f64).sqrt();
            let iu = n;
            let id = dim_cav + n + 1;
            // σ₊a |↓,n+1⟩ = √(n+1)|↑,n⟩ ; σ₋a† |↑,n⟩ = √(n+1)|↓,n+1⟩
            k[[iu, id]] = Complex64::from(coupling);
            k[[id, iu]] = Complex64::from(-coupling);
        }
        k
    }

    fn max_entry_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max)
    }

    #[test]
    fn zero_time_gives_identity() {
        let u = jc_propagator(&JCParams::new(1.0, 0.0).unwrap(), CUT);
        assert_eq!(u, Array2::<Complex64>::eye(2 * (CUT + 1)));
    }

    #[test]
    fn ground_vacuum_is_stationary() {
        let mut rng = ChaCha12Rng::seed_from_u64(14);
        for _ in 0..10 {
            let t = rng.random_range(0.0..50.0);
            let u = jc_propagator(&JCParams::new(1.0, t).unwrap(), CUT);
            let col = CUT + 1; // |↓,0⟩
            for row in 0..2 * (CUT + 1) {
                let expect = if row == col { 1.0 } else { 0.0 };
                assert!((u[[row, col]] - Complex64::from(expect)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn half_pi_pulse_swaps_excitation() {
        // g·t = π/2 on the n = 0 doublet: |↑,0⟩ → −|↓,1⟩.
        let u = jc_propagator(
            &JCParams::new(1.0, std::f64::consts::FRAC_PI_2).unwrap(),
            CUT,
        );
        let col = 0; // |↑,0⟩
        let target = CUT + 1 + 1; // |↓,1⟩
        for row in 0..2 * (CUT + 1) {
            let expect = if row == target {
                Complex64::from(-1.0)
            } else {
                Complex64::ZERO
            };
            assert!((u[[row, col]] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn propagator_matches_matrix_exponential_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(15);
        for _ in 0..20 {
            let gt = rng.random_range(0.0..30.0);
            let cutoff = rng.random_range(1..=5usize);
            let analytic = jc_propagator(&JCParams::new(1.0, gt).unwrap(), cutoff);
            let numeric = expm(&jc_generator(gt, cutoff));
            let diff = max_entry_diff(&analytic, &numeric);
            assert!(diff < 1e-8, "gt={gt} cutoff={cutoff}: diff {diff:e}");
        }
    }

    #[test]
    fn propagator_is_unitary_over_full_gt_range() {
        let mut rng = ChaCha12Rng::seed_from_u64(16);
        for _ in 0..25 {
            let gt = rng.random_range(0.0..100.0);
            let u = jc_propagator(&JCParams::new(1.0, gt).unwrap(), CUT);
            assert!(unitarity_deviation(&u) < 1e-12);
        }
    }

    #[test]
    fn propagator_composes_as_one_parameter_group() {
        let mut rng = ChaCha12Rng::seed_from_u64(18);
        for _ in 0..10 {
            let t1 = rng.random_range(0.0..20.0);
            let t2 = rng.random_range(0.0..20.0);
            let g = 1.3;
            let whole = jc_propagator(&JCParams::new(g, t1 + t2).unwrap(), CUT);
            let first = jc_propagator(&JCParams::new(g, t1).unwrap(), CUT);
            let second = jc_propagator(&JCParams::new(g, t2).unwrap(), CUT);
            let composed = second.dot(&first);
            assert!(max_entry_diff(&whole, &composed) < 1e-12);
        }
    }

    #[test]
    fn ramsey_zero_angle_is_identity() {
        let u = ramsey_unitary(&RamseyParams::new(0.0, 1.1));
        assert_eq!(u, Array2::<Complex64>::eye(2));
    }

    #[test]
    fn ramsey_pi_pulse_flips_with_sign() {
        let u = ramsey_unitary(&RamseyParams::new(std::f64::consts::PI, 0.0));
        // |↑⟩ → −|↓⟩, |↓⟩ → |↑⟩
        assert!((u[[1, 0]] - Complex64::from(-1.0)).norm() < 1e-15);
        assert!((u[[0, 1]] - Complex64::ONE).norm() < 1e-15);
        assert!(u[[0, 0]].norm() < 1e-15);
        assert!(u[[1, 1]].norm() < 1e-15);
    }

    #[test]
    fn protocol_binding_with_p_one_is_identity() {
        let params = RamseyParams::for_binomial(1.0, 2.2).unwrap();
        let u = ramsey_unitary(&params);
        assert!(max_entry_diff(&u, &Array2::eye(2)) < 1e-15);
    }

    #[test]
    fn ramsey_inverse_angle_undoes_rotation() {
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        for _ in 0..10 {
            let theta = rng.random_range(-3.0..3.0);
            let phi = rng.random_range(-3.0..3.0);
            let u = ramsey_unitary(&RamseyParams::new(theta, phi));
            let v = ramsey_unitary(&RamseyParams::new(-theta, phi));
            let prod = v.dot(&u);
            assert!(max_entry_diff(&prod, &Array2::eye(2)) < 1e-14);
        }
    }

    #[test]
    fn timing_solution_m5_matches_frozen_residual() {
        let sol = TimingSolution::for_m(5);
        assert!((sol.g_t - 41.0 * std::f64::consts::PI / 4.0).abs() < 1e-12);
        // frozen from a direct double-precision evaluation of 1 − sin(41√2π/4)
        assert!((sol.delta - 9.170991080431623e-5).abs() < 1e-15);
    }

    #[test]
    fn timing_solution_m0_residual_is_large() {
        let sol = TimingSolution::for_m(0);
        assert!((sol.delta - 0.10398106407319341).abs() < 1e-15);
    }

    #[test]
    fn exhaustive_search_confirms_best_m() {
        let solutions = solve_timing(0..=16, false).unwrap();
        // independent exhaustive scan
        let best = (0..=16u32)
            .map(|m| {
                (
                    m,
                    1.0 - (SQRT_2 * (FRAC_PI_4 + 2.0 * m as f64 * std::f64::consts::PI)).sin(),
                )
            })
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert_eq!(best.0, 5);
        assert_eq!(solutions[0].m, 5);
        assert_eq!(solutions.len(), 17);
        for w in solutions.windows(2) {
            assert!(w[0].delta <= w[1].delta);
        }
    }

    #[test]
    fn first_condition_holds_for_every_solution() {
        for sol in solve_timing(0..=16, false).unwrap() {
            let lhs = sol.g_t.sin() + sol.g_t.cos();
            assert!(
                (lhs - SQRT_2).abs() < 1e-12,
                "m={}: {:e}",
                sol.m,
                lhs - SQRT_2
            );
            assert!(sol.delta >= 0.0 && sol.delta <= 2.0);
        }
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn range_checks() {
        assert!(matches!(solve_timing(3..=2, false), Err(Error::EmptyRange)));
        assert!(matches!(
            solve_timing(0..=32, false),
            Err(Error::RangeBeyondDefault { .. })
        ));
        assert!(solve_timing(0..=32, true).is_ok());
    }

    #[test]
    fn evolve_with_zero_time_is_identity() {
        let spec = EntangledInitSpec::new(0.3, 0.7, 0.4, 0.4, 1.0).unwrap();
        let state = full_initial_state(&spec, CUT).unwrap();
        let out = evolve_protocol_step(&state, 1.0, 0.0, Arm::One).unwrap();
        assert_eq!(out.amplitudes(), state.amplitudes());
    }

    #[test]
    fn arm_order_is_irrelevant() {
        let mut rng = ChaCha12Rng::seed_from_u64(20);
        for _ in 0..5 {
            let spec = EntangledInitSpec::new(
                rng.random_range(0.1..0.9),
                rng.random_range(0.1..0.9),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(0.0..2.0),
            )
            .unwrap();
            let state = full_initial_state(&spec, CUT).unwrap();
            let t = rng.random_range(0.0..40.0);
            let a = evolve_protocol_step(
                &evolve_protocol_step(&state, 1.0, t, Arm::One).unwrap(),
                1.0,
                t,
                Arm::Two,
            )
            .unwrap();
            let b = evolve_protocol_step(
                &evolve_protocol_step(&state, 1.0, t, Arm::Two).unwrap(),
                1.0,
                t,
                Arm::One,
            )
            .unwrap();
            let worst = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0f64, f64::max);
            assert!(worst < 1e-12);
        }
    }

    /// Drive each of the four Ramsey-prepared product inputs through the
    /// cavity at the m = 5 interaction time and compare with the closed-form
    /// output it should approximate.
    #[test]
    fn four_conditioned_evolutions_reach_their_closed_forms() {
        use crate::hilbert::tensor;
        use crate::states::{binomial_state, gamma_state, BinomialSpec};

        let pi = std::f64::consts::PI;
        let (p, theta): (f64, f64) = (0.3, 0.4);
        let t = interaction_time(5, 1.0);
        let delta = TimingSolution::for_m(5).delta;

        let atom_layout = SpaceLayout::single("atom", 2).unwrap();
        let atom = |up: Complex64, down: Complex64| {
            StateVector::new(atom_layout.clone(), vec![up, down]).unwrap()
        };
        let sp = p.sqrt();
        let sq = (1.0 - p).sqrt();
        let up_rot = atom(Complex64::from(sp), -Complex64::from_polar(sq, -theta));
        let down_rot = atom(Complex64::from_polar(sq, theta), Complex64::from(sp));
        let gbs = |pp: f64, th: f64| {
            binomial_state(&BinomialSpec::new(1, pp, th).unwrap(), CUT, "cav").unwrap()
        };
        let gbs2 = |pp: f64, th: f64| {
            binomial_state(&BinomialSpec::new(2, pp, th).unwrap(), CUT, "cav").unwrap()
        };
        let down = atom(Complex64::ZERO, Complex64::ONE);
        let up = atom(Complex64::ONE, Complex64::ZERO);
        let gamma = gamma_state(p, theta, CUT, "cav").unwrap();
        let vac = StateVector::basis(SpaceLayout::single("cav", CUT + 1).unwrap(), &[0]).unwrap();
        let r = Complex64::from(1.0 / 2.0f64.sqrt());

        let cases: Vec<(StateVector, StateVector)> = vec![
            (
                tensor(&up_rot, &gbs(p, theta)).unwrap(),
                tensor(&down, &gbs2(p, theta))
                    .unwrap()
                    .scaled(-Complex64::from_polar(1.0, -theta)),
            ),
            (
                tensor(&down_rot, &gbs(p, theta)).unwrap(),
                tensor(&up, &vac)
                    .unwrap()
                    .scaled(r * Complex64::from_polar(1.0, theta))
                    .add(&tensor(&down, &gamma).unwrap().scaled(r))
                    .unwrap(),
            ),
            (
                tensor(&up_rot, &gbs(1.0 - p, pi + theta)).unwrap(),
                tensor(&up, &vac)
                    .unwrap()
                    .scaled(r)
                    .add(
                        &tensor(&down, &gamma)
                            .unwrap()
                            .scaled(-r * Complex64::from_polar(1.0, -theta)),
                    )
                    .unwrap(),
            ),
            (
                tensor(&down_rot, &gbs(1.0 - p, pi + theta)).unwrap(),
                tensor(&down, &gbs2(1.0 - p, pi + theta)).unwrap(),
            ),
        ];

        let u = jc_propagator(&JCParams::new(1.0, t).unwrap(), CUT);
        for (k, (input, expect)) in cases.iter().enumerate() {
            let evolved = apply_on_factors(input, &["atom", "cav"], &u).unwrap();
            let fidelity = inner(expect, &evolved).unwrap().norm_sqr();
            assert!(
                fidelity >= 1.0 - 10.0 * delta,
                "case {k}: fidelity {fidelity}"
            );
        }
    }
}
