//! Maximization of the three CHSH-type expressions.
//!
//! The classical track is settled by enumerating the 16 deterministic
//! strategies. The quantum and vector-valued tracks use a derivative-free
//! coordinate search over spherical angles (plus clamped coefficients for the
//! vector-valued track), restarted from seeded random points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::ga::{UnitVector3, Vector3};
use crate::ga_values::{s_prime, FCoefficients};
use crate::lhv::{chsh_classical_value, deterministic_strategies, Responses};
use crate::quantum::{chsh_qm_signed, chsh_qm_value};

pub const INITIAL_STEP: f64 = 0.3;
pub const STEP_SHRINK: f64 = 0.5;
pub const MIN_STEP: f64 = 1e-8;
pub const DEFAULT_RESTARTS: usize = 32;

/// Polar/azimuthal angle pairs `(θ, φ)` for `a, a′, b, b′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleParameterization {
    pub angles: [(f64, f64); 4],
}

impl AngleParameterization {
    fn from_slice(x: &[f64]) -> Self {
        Self {
            angles: [(x[0], x[1]), (x[2], x[3]), (x[4], x[5]), (x[6], x[7])],
        }
    }

    pub fn configuration(&self) -> Configuration {
        let [a, ap, b, bp] = self.angles.map(|(t, p)| UnitVector3::from_spherical(t, p));
        Configuration::new(a, ap, b, bp)
    }
}

#[allow(clippy::large_enum_variant)] // one value per search result
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BestPoint {
    Strategy {
        responses: Responses,
    },
    Setup {
        configuration: Configuration,
        angles: AngleParameterization,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        coefficients: Option<FCoefficients>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub restart: usize,
    pub iteration: u64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_value: f64,
    pub best_point: BestPoint,
    /// Coordinate passes summed over restarts.
    pub iterations: u64,
    pub evaluations: u64,
    /// Largest objective value seen at any evaluation.
    pub max_evaluated: f64,
    /// Accepted improvements, in restart order.
    pub history: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyValue {
    pub responses: Responses,
    pub signed: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvMaximum {
    pub result: OptimizationResult,
    pub strategies: Vec<StrategyValue>,
    /// Strategies attaining the maximum of the signed combination.
    pub signed_maximizers: usize,
    /// Strategies attaining the maximum of its absolute value.
    pub absolute_maximizers: usize,
    pub note: String,
}

/// Exhaustive maximum over the 16 deterministic ±1 strategies.
pub fn maximize_lhv() -> LhvMaximum {
    let strategies: Vec<StrategyValue> = deterministic_strategies()
        .into_iter()
        .map(|responses| {
            let c = responses.products();
            StrategyValue {
                responses,
                signed: c.chsh_signed(),
                value: chsh_classical_value(&c),
            }
        })
        .collect();

    let best_value = strategies.iter().map(|s| s.value).fold(f64::MIN, f64::max);
    let best_signed = strategies.iter().map(|s| s.signed).fold(f64::MIN, f64::max);
    let best = strategies.iter().find(|s| s.value == best_value).expect("16 strategies");

    let mut history = Vec::new();
    let mut running = f64::MIN;
    for (i, s) in strategies.iter().enumerate() {
        if s.value > running {
            running = s.value;
            history.push(HistoryEntry {
                restart: 0,
                iteration: i as u64,
                value: s.value,
            });
        }
    }

    LhvMaximum {
        result: OptimizationResult {
            best_value,
            best_point: BestPoint::Strategy {
                responses: best.responses,
            },
            iterations: strategies.len() as u64,
            evaluations: strategies.len() as u64,
            max_evaluated: best_value,
            history,
        },
        signed_maximizers: strategies.iter().filter(|s| s.signed == best_signed).count(),
        absolute_maximizers: strategies.iter().filter(|s| s.value == best_value).count(),
        strategies,
        note: "mixed models are convex combinations of deterministic strategies, \
               so their value cannot exceed the deterministic maximum"
            .into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Coordinate {
    Periodic,
    /// Clamped to `[−1, 1]`.
    Coefficient,
}

struct SearchOutcome {
    x: Vec<f64>,
    value: f64,
    iterations: u64,
    evaluations: u64,
    max_evaluated: f64,
    history: Vec<(u64, f64)>,
}

/// Compass search along coordinate axes: accept the first improving `±step`
/// move, shrink the step after a full pass without improvement.
fn coordinate_search<F>(objective: &F, start: Vec<f64>, kinds: &[Coordinate]) -> Result<SearchOutcome>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut x = start;
    let mut value = objective(&x)?;
    let mut out = SearchOutcome {
        x: Vec::new(),
        value,
        iterations: 0,
        evaluations: 1,
        max_evaluated: value,
        history: vec![(0, value)],
    };
    let mut step = INITIAL_STEP;
    while step >= MIN_STEP {
        out.iterations += 1;
        let mut improved = false;
        for (i, kind) in kinds.iter().enumerate() {
            for dir in [1.0, -1.0] {
                let old = x[i];
                let mut trial = old + dir * step;
                if *kind == Coordinate::Coefficient {
                    trial = trial.clamp(-1.0, 1.0);
                }
                if trial == old {
                    continue;
                }
                x[i] = trial;
                let v = objective(&x)?;
                out.evaluations += 1;
                out.max_evaluated = out.max_evaluated.max(v);
                if v > value {
                    value = v;
                    improved = true;
                    out.history.push((out.iterations, v));
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            step *= STEP_SHRINK;
        }
    }
    out.x = x;
    out.value = value;
    Ok(out)
}

fn random_start(rng: &mut ChaCha8Rng, kinds: &[Coordinate]) -> Vec<f64> {
    kinds
        .iter()
        .enumerate()
        .map(|(i, k)| match k {
            Coordinate::Periodic if i % 2 == 0 => rng.random_range(0.0..PI),
            Coordinate::Periodic => rng.random_range(0.0..TAU),
            Coordinate::Coefficient => rng.random_range(-1.0..=1.0),
        })
        .collect()
}

fn multi_start<F, P>(restarts: usize, seed: u64, kinds: &[Coordinate], objective: F, point: P) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
    P: Fn(&[f64]) -> BestPoint,
{
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let runs: Vec<SearchOutcome> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            coordinate_search(&objective, random_start(&mut rng, kinds), kinds)
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = i;
        }
    }
    let history = runs
        .iter()
        .enumerate()
        .flat_map(|(restart, run)| {
            run.history.iter().map(move |&(iteration, value)| HistoryEntry {
                restart,
                iteration,
                value,
            })
        })
        .collect();
    Ok(OptimizationResult {
        best_value: runs[best].value,
        best_point: point(&runs[best].x),
        iterations: runs.iter().map(|r| r.iterations).sum(),
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
        max_evaluated: runs.iter().map(|r| r.max_evaluated).fold(f64::MIN, f64::max),
        history,
    })
}

const QM_KINDS: [Coordinate; 8] = [Coordinate::Periodic; 8];

const GA_KINDS: [Coordinate; 12] = [
    Coordinate::Periodic,
    Coordinate::Periodic,
    Coordinate::Periodic,
    Coordinate::Periodic,
    Coordinate::Periodic,
    Coordinate::Periodic,
    Coordinate::Periodic,
    Coordinate::Periodic,
    Coordinate::Coefficient,
    Coordinate::Coefficient,
    Coordinate::Coefficient,
    Coordinate::Coefficient,
];

/// Maximizes the singlet CHSH value over all four measurement directions.
pub fn maximize_qm(restarts: usize, seed: u64) -> Result<OptimizationResult> {
    multi_start(
        restarts,
        seed,
        &QM_KINDS,
        |x| chsh_qm_value(&AngleParameterization::from_slice(x).configuration()),
        |x| {
            let angles = AngleParameterization::from_slice(x);
            BestPoint::Setup {
                configuration: angles.configuration(),
                angles,
                coefficients: None,
            }
        },
    )
}

fn ga_coefficients(x: &[f64]) -> FCoefficients {
    FCoefficients::new(x[8], x[9], x[10], x[11]).expect("search keeps coefficients clamped")
}

/// Maximizes `S′` over directions and all four coefficients.
pub fn maximize_ga(restarts: usize, seed: u64) -> Result<OptimizationResult> {
    multi_start(
        restarts,
        seed,
        &GA_KINDS,
        |x| Ok(s_prime(&AngleParameterization::from_slice(x).configuration(), &ga_coefficients(x))),
        |x| {
            let angles = AngleParameterization::from_slice(x);
            BestPoint::Setup {
                configuration: angles.configuration(),
                angles,
                coefficients: Some(ga_coefficients(x)),
            }
        },
    )
}

/// Re-evaluates the objective matching `point`.
pub fn evaluate_point(point: &BestPoint) -> Result<f64> {
    match point {
        BestPoint::Strategy { responses } => Ok(chsh_classical_value(&responses.products())),
        BestPoint::Setup {
            configuration,
            coefficients: None,
            ..
        } => chsh_qm_value(configuration),
        BestPoint::Setup {
            configuration,
            coefficients: Some(co),
            ..
        } => Ok(s_prime(configuration, co)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub theta: f64,
    pub value: f64,
}

/// The coplanar family `a` at 0, `a′` at π/2, `b` at θ, `b′` at −θ over
/// `θ ∈ [0, π]` on a uniform grid.
pub fn sweep_qm_family(steps: usize) -> Result<Vec<SweepPoint>> {
    if steps < 2 {
        return Err(Error::InvalidArgument("sweep needs at least 2 steps".into()));
    }
    (0..steps)
        .map(|i| {
            let theta = PI * i as f64 / (steps - 1) as f64;
            let cfg = Configuration::coplanar(0.0, FRAC_PI_2, theta, -theta);
            Ok(SweepPoint {
                theta,
                value: chsh_qm_value(&cfg)?,
            })
        })
        .collect()
}

/// Closed form of [`sweep_qm_family`]: `2√2·|sin(θ + π/4)|`.
pub fn sweep_closed_form(theta: f64) -> f64 {
    2.0 * SQRT_2 * (theta + FRAC_PI_4).sin().abs()
}

/// Brings a setup into a standard frame: flips `a, a′` if needed so the
/// signed singlet combination is non-negative, then rotates `a` onto e1 and
/// `a′` into the e1–e2 plane with positive e2 component.
pub fn canonicalize(cfg: &Configuration) -> Result<Configuration> {
    let (mut a, mut a_prime) = (cfg.a, cfg.a_prime);
    if chsh_qm_signed(cfg)? < 0.0 {
        a = a.flipped();
        a_prime = a_prime.flipped();
    }
    let x = a.vector();
    let y = UnitVector3::normalize(a_prime.vector() - x.scale(x.dot(&a_prime)))
        .map_err(|_| Error::InvalidArgument("a and a′ are parallel; frame is undefined".into()))?;
    let z = x.cross(&y);
    let project = |v: &UnitVector3| -> Result<UnitVector3> {
        UnitVector3::normalize(Vector3::new(v.dot(&x), v.dot(&y), v.dot(&z)))
    };
    Ok(Configuration::new(project(&a)?, project(&a_prime)?, project(&cfg.b)?, project(&cfg.b_prime)?))
}

/// Largest deviation of the canonicalized setup's angles from the maximizing
/// relations `∠(a,a′) = ∠(b,b′) = π/2`, `∠(a′,b′) = π/4`.
pub fn maximizing_angle_deviation(cfg: &Configuration) -> Result<f64> {
    let c = canonicalize(cfg)?;
    let ang = c.angles();
    Ok([
        (ang.a_a_prime - FRAC_PI_2).abs(),
        (ang.b_b_prime - FRAC_PI_2).abs(),
        (ang.a_prime_b_prime - FRAC_PI_4).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}
