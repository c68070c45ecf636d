//! Constructors for the protocol's field and atom states: generalized
//! binomial states, the residual Γ states, and the entangled initial
//! conditions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{tensor, SpaceLayout, StateVector, ATOM1, ATOM2, CAV1, CAV2};

/// Parameters of a generalized binomial state |N, p, ϑ⟩.
///
/// The photon-number distribution is binomial with `max_photons` trials and
/// single-photon probability `p`; the n-photon component carries phase
/// `e^(i n theta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinomialSpec {
    pub max_photons: u32,
    pub p: f64,
    pub theta: f64,
}

impl BinomialSpec {
    /// The endpoints p = 0 and p = 1 are allowed; they give the number
    /// states |0⟩ and |N⟩ (up to phase).
    pub fn new(max_photons: u32, p: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ParameterRange {
                name: "p",
                value: p,
                range: "[0, 1]",
            });
        }
        if !theta.is_finite() {
            return Err(Error::ParameterRange {
                name: "theta",
                value: theta,
                range: "finite",
            });
        }
        Ok(Self {
            max_photons,
            p,
            theta,
        })
    }
}

/// Parameters of the entangled two-cavity initial condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntangledInitSpec {
    pub p1: f64,
    pub p2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub eta: f64,
}

impl EntangledInitSpec {
    pub fn new(p1: f64, p2: f64, theta1: f64, theta2: f64, eta: f64) -> Result<Self> {
        for (name, value) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParameterRange {
                    name,
                    value,
                    range: "[0, 1]",
                });
            }
        }
        for (name, value) in [("theta1", theta1), ("theta2", theta2), ("eta", eta)] {
            if !value.is_finite() {
                return Err(Error::ParameterRange {
                    name,
                    value,
                    range: "finite",
                });
            }
        }
        Ok(Self {
            p1,
            p2,
            theta1,
            theta2,
            eta,
        })
    }

    /// Normalization 1/√(1 + |η|²) shared by the cavity and atom pairs.
    pub fn norm_const(&self) -> f64 {
        1.0 / (1.0 + self.eta * self.eta).sqrt()
    }

    /// The shared mean phase, required by the two-cavity target state.
    pub fn shared_theta(&self) -> Result<f64> {
        if (self.theta1 - self.theta2).abs() > 1e-12 {
            return Err(Error::PhaseMismatch {
                theta1: self.theta1,
                theta2: self.theta2,
            });
        }
        Ok(self.theta1)
    }
}

fn binomial_coeff(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn phase(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

/// Generalized binomial state on a single mode:
/// c_n = [C(N,n) pⁿ (1−p)^(N−n)]^(1/2) e^(inϑ) for n ≤ N, zero above.
///
/// Unit norm by the binomial theorem. Errors if N exceeds the Fock cutoff.
pub fn binomial_state(spec: &BinomialSpec, cutoff: usize, label: &str) -> Result<StateVector> {
    if spec.max_photons as usize > cutoff {
        return Err(Error::PhotonAboveCutoff {
            n: spec.max_photons,
            cutoff,
        });
    }
    let layout = SpaceLayout::single(label, cutoff + 1)?;
    let n_max = spec.max_photons;
    let mut amps = vec![Complex64::ZERO; cutoff + 1];
    for (n, amp) in amps.iter_mut().enumerate().take(n_max as usize + 1) {
        let n_u32 = n as u32;
        // powi(0) = 1 even for a zero base, which carries the p = 0, 1 limits
        let weight = binomial_coeff(n_max, n_u32)
            * spec.p.powi(n_u32 as i32)
            * (1.0 - spec.p).powi((n_max - n_u32) as i32);
        *amp = phase(n as f64 * spec.theta) * weight.sqrt();
    }
    StateVector::new(layout, amps)
}

/// Residual three-level state left in a cavity when its atom escapes
/// un-measured in the excited branch:
/// √(2p(1−p))|0⟩ − (1−2p)e^(iϑ)|1⟩ − √(2p(1−p))e^(2iϑ)|2⟩.
///
/// Unit norm: 2p(1−p) + (1−2p)² + 2p(1−p) = 1.
pub fn gamma_state(p: f64, theta: f64, cutoff: usize, label: &str) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    if cutoff < 2 {
        return Err(Error::PhotonAboveCutoff { n: 2, cutoff });
    }
    let layout = SpaceLayout::single(label, cutoff + 1)?;
    let cross = (2.0 * p * (1.0 - p)).sqrt();
    let mut amps = vec![Complex64::ZERO; cutoff + 1];
    amps[0] = Complex64::from(cross);
    amps[1] = -phase(theta) * (1.0 - 2.0 * p);
    amps[2] = -phase(2.0 * theta) * cross;
    StateVector::new(layout, amps)
}

/// Entangled orthogonal one-photon binomial states of the two cavities:
/// N_η [ |p₁,ϑ₁⟩₁|1−p₂,π+ϑ₂⟩₂ + η |1−p₁,π+ϑ₁⟩₁|p₂,ϑ₂⟩₂ ].
///
/// Unit norm because ⟨p,ϑ|1−p,π+ϑ⟩ = 0 for one-photon states.
pub fn psi1_initial(spec: &EntangledInitSpec, cutoff: usize) -> Result<StateVector> {
    let one = |p, theta, label| -> Result<StateVector> {
        binomial_state(&BinomialSpec::new(1, p, theta)?, cutoff, label)
    };
    let pi = std::f64::consts::PI;
    let direct = tensor(
        &one(spec.p1, spec.theta1, CAV1)?,
        &one(1.0 - spec.p2, pi + spec.theta2, CAV2)?,
    )?;
    let swapped = tensor(
        &one(1.0 - spec.p1, pi + spec.theta1, CAV1)?,
        &one(spec.p2, spec.theta2, CAV2)?,
    )?;
    let sum = direct.add(&swapped.scaled(Complex64::from(spec.eta)))?;
    Ok(sum.scaled(Complex64::from(spec.norm_const())))
}

/// Entangled atom pair N_η (|↑₁↓₂⟩ − η|↓₁↑₂⟩).
pub fn atom_pair_initial(eta: f64) -> StateVector {
    let layout = SpaceLayout::new([(ATOM1, 2), (ATOM2, 2)]).expect("atom pair layout");
    let n_eta = 1.0 / (1.0 + eta * eta).sqrt();
    // basis order (↑↑, ↑↓, ↓↑, ↓↓)
    let amps = vec![
        Complex64::ZERO,
        Complex64::from(n_eta),
        Complex64::from(-eta * n_eta),
        Complex64::ZERO,
    ];
    StateVector::new(layout, amps).expect("atom pair amplitudes")
}

/// The full pre-Ramsey state on the canonical layout: the entangled atom
/// pair tensored with the entangled one-photon cavity state.
pub fn full_initial_state(spec: &EntangledInitSpec, cutoff: usize) -> Result<StateVector> {
    tensor(&atom_pair_initial(spec.eta), &psi1_initial(spec, cutoff)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::inner;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    const CUT: usize = 3;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn binomial_p_zero_is_vacuum() {
        let s = binomial_state(&BinomialSpec::new(2, 0.0, 1.3).unwrap(), CUT, "m").unwrap();
        assert!(close(s.amplitudes()[0], Complex64::ONE));
        assert!(s.amplitudes()[1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn binomial_p_one_is_top_number_state_with_phase() {
        let theta = 0.7;
        let s = binomial_state(&BinomialSpec::new(2, 1.0, theta).unwrap(), CUT, "m").unwrap();
        assert!(s.amplitudes()[0].norm() < 1e-15);
        assert!(s.amplitudes()[1].norm() < 1e-15);
        assert!(close(
            s.amplitudes()[2],
            Complex64::from_polar(1.0, 2.0 * theta)
        ));
        assert!(s.amplitudes()[3].norm() < 1e-15);
    }

    #[test]
    fn one_photon_state_at_symmetric_point() {
        let s = binomial_state(&BinomialSpec::new(1, 0.5, 0.0).unwrap(), CUT, "m").unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        assert!(close(s.amplitudes()[0], Complex64::from(r)));
        assert!(close(s.amplitudes()[1], Complex64::from(r)));
    }

    #[test]
    fn binomial_norm_is_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for n in 0..=CUT as u32 {
            for _ in 0..10 {
                let spec =
                    BinomialSpec::new(n, rng.random_range(0.0..=1.0), rng.random_range(-6.0..6.0))
                        .unwrap();
                let s = binomial_state(&spec, CUT, "m").unwrap();
                assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn binomial_rejects_n_above_cutoff() {
        let spec = BinomialSpec::new(4, 0.5, 0.0).unwrap();
        assert!(matches!(
            binomial_state(&spec, CUT, "m"),
            Err(Error::PhotonAboveCutoff { .. })
        ));
    }

    #[test]
    fn orthogonality_of_complementary_states() {
        // ⟨N,p,ϑ | N,1−p,π+ϑ⟩ = 0 for N = 1 and N = 2 across a (p, ϑ) grid.
        let pi = std::f64::consts::PI;
        for n in [1u32, 2] {
            for i in 1..=9 {
                let p = 0.1 * i as f64;
                for theta in [0.0, pi / 3.0, 1.7] {
                    let a =
                        binomial_state(&BinomialSpec::new(n, p, theta).unwrap(), CUT, "m").unwrap();
                    let b = binomial_state(
                        &BinomialSpec::new(n, 1.0 - p, pi + theta).unwrap(),
                        CUT,
                        "m",
                    )
                    .unwrap();
                    let overlap = inner(&a, &b).unwrap().norm();
                    assert!(overlap < 1e-12, "N={n} p={p} theta={theta}: {overlap:e}");
                }
            }
        }
    }

    #[test]
    fn gamma_state_at_midpoint() {
        let s = gamma_state(0.5, 0.0, CUT, "m").unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        assert!(close(s.amplitudes()[0], Complex64::from(r)));
        assert!(s.amplitudes()[1].norm() < 1e-15);
        assert!(close(s.amplitudes()[2], Complex64::from(-r)));
        assert!(s.amplitudes()[3].norm() < 1e-15);
    }

    #[test]
    fn gamma_state_at_p_zero() {
        let theta = 0.9;
        let s = gamma_state(0.0, theta, CUT, "m").unwrap();
        assert!(s.amplitudes()[0].norm() < 1e-15);
        assert!(close(s.amplitudes()[1], -Complex64::from_polar(1.0, theta)));
        assert!(s.amplitudes()[2].norm() < 1e-15);
    }

    #[test]
    fn gamma_norm_is_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..25 {
            let s = gamma_state(
                rng.random_range(0.0..=1.0),
                rng.random_range(-6.0..6.0),
                CUT,
                "m",
            )
            .unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn psi1_with_eta_zero_is_a_product() {
        let spec = EntangledInitSpec::new(0.3, 0.7, 0.4, 0.4, 0.0).unwrap();
        let s = psi1_initial(&spec, CUT).unwrap();
        let pi = std::f64::consts::PI;
        let a = binomial_state(&BinomialSpec::new(1, 0.3, 0.4).unwrap(), CUT, CAV1).unwrap();
        let b = binomial_state(&BinomialSpec::new(1, 0.3, pi + 0.4).unwrap(), CUT, CAV2).unwrap();
        let prod = tensor(&a, &b).unwrap();
        for (x, y) in s.amplitudes().iter().zip(prod.amplitudes()) {
            assert!(close(*x, *y));
        }
    }

    #[test]
    fn psi1_norm_is_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        for _ in 0..20 {
            let spec = EntangledInitSpec::new(
                rng.random_range(0.05..0.95),
                rng.random_range(0.05..0.95),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-2.0..2.0),
            )
            .unwrap();
            let s = psi1_initial(&spec, CUT).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn psi1_hand_expansion_at_symmetric_point() {
        // η = 1, p₁ = p₂ = 1/2, ϑ₁ = ϑ₂ = 0 collapses to (|00⟩ − |11⟩)/√2.
        let spec = EntangledInitSpec::new(0.5, 0.5, 0.0, 0.0, 1.0).unwrap();
        let s = psi1_initial(&spec, CUT).unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        assert!(close(s.amplitude(&[0, 0]), Complex64::from(r)));
        assert!(close(s.amplitude(&[1, 1]), Complex64::from(-r)));
        assert!(s.amplitude(&[0, 1]).norm() < 1e-12);
        assert!(s.amplitude(&[1, 0]).norm() < 1e-12);
    }

    #[test]
    fn atom_pair_at_eta_zero_and_one() {
        let s0 = atom_pair_initial(0.0);
        assert!(close(s0.amplitude(&[0, 1]), Complex64::ONE));
        let s1 = atom_pair_initial(1.0);
        let r = 1.0 / 2.0_f64.sqrt();
        assert!(close(s1.amplitude(&[0, 0]), Complex64::ZERO));
        assert!(close(s1.amplitude(&[0, 1]), Complex64::from(r)));
        assert!(close(s1.amplitude(&[1, 0]), Complex64::from(-r)));
        assert!(close(s1.amplitude(&[1, 1]), Complex64::ZERO));
    }

    #[test]
    fn atom_pair_norm_is_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        for _ in 0..20 {
            let s = atom_pair_initial(rng.random_range(-3.0..3.0));
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn full_initial_state_is_normalized_and_canonical() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..10 {
            let spec = EntangledInitSpec::new(
                rng.random_range(0.05..0.95),
                rng.random_range(0.05..0.95),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-2.0..2.0),
            )
            .unwrap();
            let s = full_initial_state(&spec, CUT).unwrap();
            assert_eq!(s.layout(), &SpaceLayout::canonical(CUT));
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn full_initial_state_number_state_limit() {
        // η = 0, p₁ = 1, p₂ = 0: atoms in |↑↓⟩, both cavities in the
        // one-photon state, total phase −e^(i(ϑ₁+ϑ₂)).
        let (t1, t2) = (0.3, 0.5);
        let spec = EntangledInitSpec::new(1.0, 0.0, t1, t2, 0.0).unwrap();
        let s = full_initial_state(&spec, CUT).unwrap();
        let expect = -Complex64::from_polar(1.0, t1 + t2);
        assert!(close(s.amplitude(&[0, 1, 1, 1]), expect));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_initial_state_has_no_two_photon_support() {
        let spec = EntangledInitSpec::new(0.4, 0.6, 0.2, 0.9, 1.5).unwrap();
        let s = full_initial_state(&spec, CUT).unwrap();
        let layout = s.layout().clone();
        for flat in 0..layout.total_dim() {
            let multi = layout.unflatten(flat);
            if multi[2] >= 2 || multi[3] >= 2 {
                assert!(s.amplitudes()[flat].norm() < 1e-15);
            }
        }
    }
}
