//! Seeded Monte Carlo simulation of the two-dimensional chain
//! (queue length, late customers).
//!
//! Per unit slot: the newly scheduled customer survives thinning with
//! probability rho and joins the pool of late customers; every late customer
//! then arrives independently with probability p = 1 - q; if the queue was
//! nonempty one customer is served. Arrivals are therefore binomial in the
//! candidate count, and the chain is Markov in the pair (n, l).
//!
//! All randomness flows through a fixed, named generator (ChaCha8 seeded
//! from a 64-bit value) so runs are reproducible across platforms; the
//! platform default RNG is never used.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::params::ModelParamsFloat;

/// Name of the generator, echoed into machine-readable outputs.
pub const RNG_NAME: &str = "chacha8";

/// The deterministic simulation generator.
pub type SimRng = ChaCha8Rng;

/// Builds the simulation generator for a seed.
pub fn sim_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Chain state: current queue length and the number of scheduled, surviving
/// customers that have not arrived yet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QueueState {
    pub queue_len: u32,
    pub late: u32,
}

impl QueueState {
    pub fn empty() -> Self {
        QueueState { queue_len: 0, late: 0 }
    }
}

/// Binomial draws switch from candidate-wise Bernoulli to CDF inversion at
/// this trial count. The late pool is geometrically small in q, so the
/// Bernoulli path dominates in practice.
const BINOMIAL_INVERSION_CUTOFF: u32 = 32;

fn sample_binomial(trials: u32, p: f64, rng: &mut impl Rng) -> u32 {
    if trials == 0 {
        return 0;
    }
    if trials < BINOMIAL_INVERSION_CUTOFF {
        return (0..trials).filter(|_| rng.gen_bool(p)).count() as u32;
    }
    let q = 1.0 - p;
    let mut pmf = q.powi(trials as i32);
    let mut cdf = pmf;
    let u: f64 = rng.gen();
    let mut j = 0u32;
    while u > cdf && j < trials {
        j += 1;
        pmf *= (trials - j + 1) as f64 / j as f64 * (p / q);
        cdf += pmf;
    }
    j
}

/// One slot of the chain.
pub fn step(state: QueueState, params: &ModelParamsFloat, rng: &mut impl Rng) -> QueueState {
    let keep = u32::from(rng.gen_bool(params.rho));
    let candidates = state.late + keep;
    let arrivals = sample_binomial(candidates, params.p, rng);
    let served = u32::from(state.queue_len > 0);
    QueueState {
        queue_len: state.queue_len + arrivals - served,
        late: candidates - arrivals,
    }
}

/// Joint visit counts over (queue length, late customers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDist {
    counts: BTreeMap<(u32, u32), u64>,
    total: u64,
    burn_in: u64,
}

impl EmpiricalDist {
    /// Runs the chain from (0, 0) for `burn_in + steps` slots, counting the
    /// post-transition states after the burn-in. Fully deterministic given
    /// the seed.
    pub fn run(params: &ModelParamsFloat, steps: u64, burn_in: u64, seed: u64) -> Self {
        let mut rng = sim_rng(seed);
        let mut state = QueueState::empty();
        let mut counts = BTreeMap::new();
        for _ in 0..burn_in {
            state = step(state, params, &mut rng);
        }
        for _ in 0..steps {
            state = step(state, params, &mut rng);
            *counts.entry((state.queue_len, state.late)).or_insert(0) += 1;
        }
        EmpiricalDist { counts, total: steps, burn_in }
    }

    /// Merges counts from an independent replica. Associative and
    /// order-independent, so replicas may run in parallel and be folded in
    /// any order.
    pub fn merge(&mut self, other: &EmpiricalDist) {
        for (state, count) in &other.counts {
            *self.counts.entry(*state).or_insert(0) += count;
        }
        self.total += other.total;
    }

    pub fn counts(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn burn_in(&self) -> u64 {
        self.burn_in
    }

    /// Queue-length marginal, normalized.
    pub fn marginal_n(&self) -> Result<BTreeMap<u32, f64>, Error> {
        self.marginal(|(n, _)| n)
    }

    /// Late-customer marginal, normalized.
    pub fn marginal_l(&self) -> Result<BTreeMap<u32, f64>, Error> {
        self.marginal(|(_, l)| l)
    }

    fn marginal(&self, pick: impl Fn((u32, u32)) -> u32) -> Result<BTreeMap<u32, f64>, Error> {
        if self.total == 0 {
            return Err(Error::EmptyDistribution);
        }
        let mut acc: BTreeMap<u32, u64> = BTreeMap::new();
        for (state, count) in &self.counts {
            *acc.entry(pick(*state)).or_insert(0) += count;
        }
        Ok(acc
            .into_iter()
            .map(|(k, c)| (k, c as f64 / self.total as f64))
            .collect())
    }

    /// Empirical mean queue length.
    pub fn mean_queue_len(&self) -> Result<f64, Error> {
        if self.total == 0 {
            return Err(Error::EmptyDistribution);
        }
        let sum: f64 = self
            .counts
            .iter()
            .map(|(&(n, _), &c)| n as f64 * c as f64)
            .sum();
        Ok(sum / self.total as f64)
    }

    /// Empirical probability generating function of the late-customer
    /// marginal at a point.
    pub fn late_pgf(&self, y: f64) -> Result<f64, Error> {
        if self.total == 0 {
            return Err(Error::EmptyDistribution);
        }
        let sum: f64 = self
            .counts
            .iter()
            .map(|(&(_, l), &c)| y.powi(l as i32) * c as f64)
            .sum();
        Ok(sum / self.total as f64)
    }
}
