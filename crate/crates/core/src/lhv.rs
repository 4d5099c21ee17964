//! Local hidden-variable models.
//!
//! A model is a finite weighted set of hidden states. Each state fixes the
//! single-side responses `E(a|λ), E(a′|λ), E(b|λ), E(b′|λ)` in `[−1, 1]`, and
//! pair expectations factorize: `E(ab|λ) = E(a|λ)E(b|λ)`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ P(λ) = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Samples per independently seeded Monte Carlo chunk.
pub const MC_CHUNK: usize = 4096;

/// Single-side responses for one hidden state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Responses {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Responses {
    pub const fn new(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        Self {
            a,
            a_prime,
            b,
            b_prime,
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }

    fn is_bounded(&self) -> bool {
        self.to_array().iter().all(|r| r.is_finite() && r.abs() <= 1.0)
    }

    /// Factorized pair products `(ab, ab′, a′b, a′b′)`.
    pub fn products(&self) -> CorrelationSet {
        CorrelationSet {
            ab: self.a * self.b,
            ab_prime: self.a * self.b_prime,
            a_prime_b: self.a_prime * self.b,
            a_prime_b_prime: self.a_prime * self.b_prime,
        }
    }
}

impl From<[f64; 4]> for Responses {
    fn from([a, a_prime, b, b_prime]: [f64; 4]) -> Self {
        Self::new(a, a_prime, b, b_prime)
    }
}

impl From<Responses> for [f64; 4] {
    fn from(r: Responses) -> Self {
        r.to_array()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HiddenState {
    pub weight: f64,
    pub responses: Responses,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct LhvModel {
    states: Vec<HiddenState>,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    states: Vec<HiddenState>,
}

impl TryFrom<RawModel> for LhvModel {
    type Error = Error;
    fn try_from(raw: RawModel) -> Result<Self> {
        LhvModel::new(raw.states)
    }
}

impl From<LhvModel> for RawModel {
    fn from(m: LhvModel) -> Self {
        RawModel { states: m.states }
    }
}

impl LhvModel {
    pub fn new(states: Vec<HiddenState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidModel("no hidden states".into()));
        }
        for (i, s) in states.iter().enumerate() {
            if !(s.weight.is_finite() && s.weight >= 0.0) {
                return Err(Error::InvalidModel(format!("state {i}: weight {} is negative", s.weight)));
            }
            if !s.responses.is_bounded() {
                return Err(Error::InvalidModel(format!(
                    "state {i}: responses {:?} leave [-1, 1]",
                    s.responses.to_array()
                )));
            }
        }
        let total: f64 = states.iter().map(|s| s.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidModel(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { states })
    }

    pub fn deterministic(responses: Responses) -> Result<Self> {
        Self::new(vec![HiddenState {
            weight: 1.0,
            responses,
        }])
    }

    /// Mixture with the given weights; weights are normalized to sum to 1.
    pub fn mixture(weights: &[f64], responses: &[Responses]) -> Result<Self> {
        if weights.len() != responses.len() {
            return Err(Error::InvalidModel("weights and responses differ in length".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidModel(format!("weights sum to {total}")));
        }
        Self::new(
            weights
                .iter()
                .zip(responses)
                .map(|(&w, &r)| HiddenState {
                    weight: w / total,
                    responses: r,
                })
                .collect(),
        )
    }

    pub fn states(&self) -> &[HiddenState] {
        &self.states
    }
}

/// All 16 deterministic ±1 strategies, `a` varying slowest.
pub fn deterministic_strategies() -> Vec<Responses> {
    (0..16u8)
        .map(|bits| {
            let s = |k: u8| if bits >> (3 - k) & 1 == 0 { 1.0 } else { -1.0 };
            Responses::new(s(0), s(1), s(2), s(3))
        })
        .collect()
}

/// The four correlations `c(a,b), c(a,b′), c(a′,b), c(a′,b′)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrelationSet {
    pub ab: f64,
    pub ab_prime: f64,
    pub a_prime_b: f64,
    pub a_prime_b_prime: f64,
}

impl CorrelationSet {
    pub fn to_array(self) -> [f64; 4] {
        [self.ab, self.ab_prime, self.a_prime_b, self.a_prime_b_prime]
    }

    /// `c(a,b) + c(a,b′) + c(a′,b) − c(a′,b′)`.
    pub fn chsh_signed(&self) -> f64 {
        self.ab + self.ab_prime + self.a_prime_b - self.a_prime_b_prime
    }
}

/// Weight-averaged factorized products.
pub fn classical_correlations(model: &LhvModel) -> CorrelationSet {
    model.states.iter().fold(CorrelationSet::default(), |acc, s| {
        let p = s.responses.products();
        CorrelationSet {
            ab: acc.ab + s.weight * p.ab,
            ab_prime: acc.ab_prime + s.weight * p.ab_prime,
            a_prime_b: acc.a_prime_b + s.weight * p.a_prime_b,
            a_prime_b_prime: acc.a_prime_b_prime + s.weight * p.a_prime_b_prime,
        }
    })
}

pub fn chsh_classical_value(cs: &CorrelationSet) -> f64 {
    cs.chsh_signed().abs()
}

/// `S(λ) = |E(ab) + E(ab′)| + |E(a′b) − E(a′b′)|` under factorization.
pub fn s_lambda(r: &Responses) -> f64 {
    let p = r.products();
    (p.ab + p.ab_prime).abs() + (p.a_prime_b - p.a_prime_b_prime).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicFact {
    /// `|x + y| + |x − y|`.
    pub value: f64,
    pub holds: bool,
}

/// Checks `|x + y| + |x − y| ≤ 2` for `x, y ∈ [−1, 1]`.
pub fn algebraic_fact_check(x: f64, y: f64) -> Result<AlgebraicFact> {
    for v in [x, y] {
        if !(v.is_finite() && v.abs() <= 1.0) {
            return Err(Error::InvalidArgument(format!("{v} outside [-1, 1]")));
        }
    }
    let value = (x + y).abs() + (x - y).abs();
    Ok(AlgebraicFact {
        value,
        holds: value <= 2.0,
    })
}

/// Running mean and second central moment (Welford / Chan).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let frac = other.n as f64 / n as f64;
        Self {
            n,
            mean: self.mean + delta * frac,
            m2: self.m2 + other.m2 + delta * delta * self.n as f64 * frac,
        }
    }

    fn standard_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let var = (self.m2 / (self.n - 1) as f64).max(0.0);
        (var / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub correlations: CorrelationSet,
    pub standard_errors: CorrelationSet,
    /// Sample mean of the signed per-λ CHSH combination.
    pub chsh_signed: f64,
    pub chsh_standard_error: f64,
}

/// Estimates the correlations by sampling hidden states from `P(λ)`.
///
/// Samples are split into fixed chunks of [`MC_CHUNK`]; chunk `k` draws from
/// ChaCha8 stream `k` of the seed, so the result does not depend on how
/// chunks are scheduled across threads.
pub fn monte_carlo_lhv(model: &LhvModel, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let weights: Vec<f64> = model.states.iter().map(|s| s.weight).collect();
    let index = WeightedIndex::new(&weights).map_err(|e| Error::InvalidModel(e.to_string()))?;
    let products: Vec<(CorrelationSet, f64)> = model
        .states
        .iter()
        .map(|s| {
            let p = s.responses.products();
            (p, p.chsh_signed())
        })
        .collect();

    let chunk = MC_CHUNK as u64;
    let n_chunks = samples.div_ceil(chunk);
    let partials: Vec<[Moments; 5]> = (0..n_chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let len = chunk.min(samples - k * chunk);
            let mut m = [Moments::default(); 5];
            for _ in 0..len {
                let (p, s) = products[index.sample(&mut rng)];
                for (acc, x) in m.iter_mut().zip([p.ab, p.ab_prime, p.a_prime_b, p.a_prime_b_prime, s]) {
                    acc.push(x);
                }
            }
            m
        })
        .collect();

    let total = partials.into_iter().fold([Moments::default(); 5], |acc, part| {
        let mut out = acc;
        for (o, p) in out.iter_mut().zip(part) {
            *o = o.merge(p);
        }
        out
    });
    let set = |f: &dyn Fn(&Moments) -> f64| CorrelationSet {
        ab: f(&total[0]),
        ab_prime: f(&total[1]),
        a_prime_b: f(&total[2]),
        a_prime_b_prime: f(&total[3]),
    };
    Ok(MonteCarloEstimate {
        samples,
        correlations: set(&|m| m.mean),
        standard_errors: set(&|m| m.standard_error()),
        chsh_signed: total[4].mean,
        chsh_standard_error: total[4].standard_error(),
    })
}
