//! Two-party signaling game: Alice encodes a bit by choosing a channel, Bob
//! guesses it from `n_pairs` measurement outcomes with a maximum-likelihood test.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{nonselective_measure, outcome_probabilities, selective_measure};
use crate::qcore::random::rng_from_seed;
use crate::qcore::{Observable, Operator};
use crate::seed::derive_indexed;

/// One primitive step of a channel, acting on the listed factors.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelStep {
    Unitary { op: Operator, factors: Vec<usize> },
    Nonselective { obs: Observable, factors: Vec<usize> },
    /// Collapse onto one outcome, each with its Born probability.
    Selective { obs: Observable, factors: Vec<usize> },
}

/// Composition of primitive steps, applied in order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Channel {
    pub steps: Vec<ChannelStep>,
}

impl Channel {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn unitary(mut self, op: Operator, factors: &[usize]) -> Self {
        self.steps.push(ChannelStep::Unitary { op, factors: factors.to_vec() });
        self
    }

    pub fn nonselective(mut self, obs: Observable, factors: &[usize]) -> Self {
        self.steps.push(ChannelStep::Nonselective { obs, factors: factors.to_vec() });
        self
    }

    pub fn selective(mut self, obs: Observable, factors: &[usize]) -> Self {
        self.steps.push(ChannelStep::Selective { obs, factors: factors.to_vec() });
        self
    }

    /// Weighted branch ensemble produced from `rho`; weights sum to one.
    pub fn branches(&self, rho: &Operator) -> Result<Vec<(f64, Operator)>> {
        let space = rho.space().clone();
        let mut ensemble = vec![(1.0, rho.clone())];
        for step in &self.steps {
            ensemble = match step {
                ChannelStep::Unitary { op, factors } => {
                    let full = op.embed(&space, factors)?;
                    ensemble.into_iter().map(|(w, r)| Ok((w, r.conjugate_by(&full)?))).collect::<Result<_>>()?
                }
                ChannelStep::Nonselective { obs, factors } => {
                    let lifted = obs.embed(&space, factors)?;
                    ensemble.into_iter().map(|(w, r)| Ok((w, nonselective_measure(&r, &lifted)?))).collect::<Result<_>>()?
                }
                ChannelStep::Selective { obs, factors } => {
                    let lifted = obs.embed(&space, factors)?;
                    let mut next = Vec::new();
                    for (w, r) in ensemble {
                        for c in lifted.spectrum() {
                            match selective_measure(&r, &lifted, c.eigenvalue) {
                                Ok((post, p)) => next.push((w * p, post)),
                                Err(Error::ImpossibleOutcome { .. }) => {}
                                Err(e) => return Err(e),
                            }
                        }
                    }
                    next
                }
            };
        }
        Ok(ensemble)
    }

    /// Average state `Σ w ρ_w`.
    pub fn apply(&self, rho: &Operator) -> Result<Operator> {
        let mut acc = Operator::zeros(rho.space().clone());
        for (w, r) in self.branches(rho)? {
            acc = &acc + &r.scale(w.into());
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalingOutcome {
    pub tv_distance: f64,
    /// Fraction of rounds in which Bob's guess was wrong.
    pub empirical_error: f64,
    /// Standard error of `empirical_error` if Bob were guessing at random.
    pub chance_sigma: f64,
    /// Bob's outcome distribution under each bit, over `bob_obs` eigenvalues.
    pub bob_distributions: [Vec<f64>; 2],
    pub n_pairs: usize,
    pub n_rounds: usize,
}

struct BobModel {
    /// (weight, outcome distribution) per branch.
    branches: Vec<(f64, Vec<f64>)>,
    marginal: Vec<f64>,
}

fn bob_model(channel: &Channel, rho0: &Operator, bob_obs: &Observable, bob_factors: &[usize]) -> Result<BobModel> {
    let traced = rho0.space().complement(bob_factors);
    if traced.is_empty() {
        return Err(Error::InvalidFactors("Bob cannot hold every factor".into()));
    }
    let mut branches = Vec::new();
    let mut marginal = vec![0.0; bob_obs.spectrum().len()];
    for (w, r) in channel.branches(rho0)? {
        let rb = r.partial_trace(bob_factors)?;
        let dist: Vec<f64> = outcome_probabilities(&rb, bob_obs)?.into_iter().map(|(_, p)| p.max(0.0)).collect();
        for (m, p) in marginal.iter_mut().zip(&dist) {
            *m += w * p;
        }
        branches.push((w, dist));
    }
    Ok(BobModel { branches, marginal })
}

fn sample_index<R: Rng + ?Sized>(weights: impl Iterator<Item = f64>, rng: &mut R) -> usize {
    let x: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        acc += w;
        last = i;
        if x < acc {
            return i;
        }
    }
    last
}

/// Plays `n_rounds` rounds; in each Alice picks a uniform bit and prepares
/// `n_pairs` copies of `rho0` through the corresponding channel, Bob measures
/// `bob_obs` on `bob_factors` of every copy and guesses the bit by maximum
/// likelihood (ties broken by a fair coin).
#[allow(clippy::too_many_arguments)]
pub fn signaling_game(
    channel_bit0: &Channel,
    channel_bit1: &Channel,
    bob_obs: &Observable,
    bob_factors: &[usize],
    rho0: &Operator,
    n_pairs: usize,
    n_rounds: usize,
    seed: u64,
) -> Result<SignalingOutcome> {
    if n_pairs == 0 || n_rounds == 0 {
        return Err(Error::InvalidParameter("n_pairs and n_rounds must be positive".into()));
    }
    let models = [
        bob_model(channel_bit0, rho0, bob_obs, bob_factors)?,
        bob_model(channel_bit1, rho0, bob_obs, bob_factors)?,
    ];
    let tv_distance = 0.5 * models[0].marginal.iter().zip(&models[1].marginal).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let logs: Vec<Vec<f64>> = models.iter().map(|m| m.marginal.iter().map(|p| p.ln()).collect()).collect();

    let mut errors = 0usize;
    for round in 0..n_rounds {
        let mut rng = rng_from_seed(derive_indexed(seed, "signaling_game", round as u64));
        let bit = usize::from(rng.random::<bool>());
        let model = &models[bit];
        let mut ll = [0.0f64; 2];
        for _ in 0..n_pairs {
            let b = sample_index(model.branches.iter().map(|(w, _)| *w), &mut rng);
            let k = sample_index(model.branches[b].1.iter().copied(), &mut rng);
            ll[0] += logs[0][k];
            ll[1] += logs[1][k];
        }
        let guess = if ll[0] > ll[1] {
            0
        } else if ll[1] > ll[0] {
            1
        } else {
            usize::from(rng.random::<bool>())
        };
        if guess != bit {
            errors += 1;
        }
    }
    let [m0, m1] = models;
    Ok(SignalingOutcome {
        tv_distance,
        empirical_error: errors as f64 / n_rounds as f64,
        chance_sigma: (0.25 / n_rounds as f64).sqrt(),
        bob_distributions: [m0.marginal, m1.marginal],
        n_pairs,
        n_rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{sigma_x, sigma_z, up};
    use crate::qcore::{spectral_decomposition, DEFAULT_CLUSTER_TOL};

    #[test]
    fn equal_channels_carry_nothing() {
        let rho = up().tensor(&up()).unwrap().density();
        let sz = spectral_decomposition(&sigma_z(), DEFAULT_CLUSTER_TOL).unwrap();
        let out = signaling_game(&Channel::identity(), &Channel::identity(), &sz, &[1], &rho, 10, 400, 3).unwrap();
        assert_eq!(out.tv_distance, 0.0);
        assert!((out.empirical_error - 0.5).abs() < 3.0 * out.chance_sigma);
    }

    #[test]
    fn bob_side_flip_is_perfectly_readable() {
        let rho = up().tensor(&up()).unwrap().density();
        let sz = spectral_decomposition(&sigma_z(), DEFAULT_CLUSTER_TOL).unwrap();
        let flip = Channel::identity().unitary(sigma_x(), &[1]);
        let out = signaling_game(&Channel::identity(), &flip, &sz, &[1], &rho, 1, 200, 3).unwrap();
        assert!((out.tv_distance - 1.0).abs() < 1e-15);
        assert_eq!(out.empirical_error, 0.0);
    }

    #[test]
    fn selective_branches_average_to_nonselective() {
        let rho = crate::qcore::random_density(crate::qcore::CompositeSpace::qubits(2), 3, 8).unwrap();
        let sz = spectral_decomposition(&sigma_z(), DEFAULT_CLUSTER_TOL).unwrap();
        let a = Channel::identity().selective(sz.clone(), &[0]).apply(&rho).unwrap();
        let b = Channel::identity().nonselective(sz, &[0]).apply(&rho).unwrap();
        assert!((&a - &b).max_abs() < 1e-14);
    }
}
