use std::path::PathBuf;

use crate::configuration::Configuration;
use crate::ga_values::{case_inequality_check, equality_condition_check, ga_bound_expression, s_prime, FCoefficients};
use crate::lhv::{classical_correlations, chsh_classical_value, monte_carlo_lhv, LhvModel};
use crate::optimizer::{maximize_ga, maximize_lhv, maximize_qm, sweep_qm_family};
use crate::quantum::{chsh_operator, chsh_qm_value, commutator_product, operator_norm, qm_correlations, verify_b_squared_identity};
use crate::{CLASSICAL_BOUND, TSIRELSON_BOUND};

use super::report::{
    BoundReport, InputsEcho, MaximizerCounts, OptimizeDocument, Quantity, SweepRow, VerifyDocument, ATTAINED_TOL,
    TOOL_NAME, TOOL_VERSION,
};
use super::{CliError, OutputFormat, RunConfig, Track, VerifyArgs, DEFAULT_SAMPLES, DEFAULT_SEED};

/// Flags merged over the configuration file; flags win.
#[derive(Debug, Clone)]
pub struct VerifySettings {
    pub tracks: Vec<Track>,
    pub configuration: Configuration,
    pub coefficients: FCoefficients,
    pub lhv_model: Option<LhvModel>,
    pub seed: u64,
    pub samples: u64,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl VerifySettings {
    pub fn resolve(args: &VerifyArgs, file: RunConfig) -> Result<Self, CliError> {
        let selection = args
            .track
            .or(file.track)
            .ok_or_else(|| CliError::Config("no track selected (use --track or `track` in the config)".into()))?;
        let configuration = match (&file.configuration, args.canonical) {
            (_, true) | (None, false) => Configuration::canonical(),
            (Some(spec), false) => spec.resolve()?,
        };
        let samples = args.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        Ok(Self {
            tracks: selection.tracks(),
            configuration,
            coefficients: file.coefficients.unwrap_or_default(),
            lhv_model: file.lhv_model,
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            samples,
            output_path: args.out.clone().or(file.output_path),
            format: args.format.or(file.output_format).unwrap_or_default(),
        })
    }

    /// Canonical setup, default coefficients and seed, chosen tracks.
    pub fn canonical(tracks: Vec<Track>, seed: u64) -> Self {
        Self {
            tracks,
            configuration: Configuration::canonical(),
            coefficients: FCoefficients::default(),
            lhv_model: None,
            seed,
            samples: DEFAULT_SAMPLES,
            output_path: None,
            format: OutputFormat::Json,
        }
    }
}

fn classical_reports(s: &VerifySettings) -> Result<Vec<BoundReport>, CliError> {
    let model = match &s.lhv_model {
        Some(m) => m.clone(),
        None => {
            let best = maximize_lhv();
            match best.result.best_point {
                crate::optimizer::BestPoint::Strategy { responses } => LhvModel::deterministic(responses)?,
                _ => unreachable!("classical maximum is a strategy"),
            }
        }
    };
    let exact = classical_correlations(&model);
    let mc = monte_carlo_lhv(&model, s.samples, s.seed)?;
    let inputs = InputsEcho {
        lhv_model: Some(model),
        samples: Some(s.samples),
        ..InputsEcho::default()
    };
    let report = BoundReport::new(Track::Classical, Quantity::ChshClassicalValue, chsh_classical_value(&exact), inputs, s.seed)
        .with_detail("c_ab", exact.ab)
        .with_detail("c_ab_prime", exact.ab_prime)
        .with_detail("c_a_prime_b", exact.a_prime_b)
        .with_detail("c_a_prime_b_prime", exact.a_prime_b_prime)
        .with_detail("monte_carlo_value", mc.chsh_signed.abs())
        .with_detail("monte_carlo_standard_error", mc.chsh_standard_error);
    Ok(vec![report])
}

fn quantum_reports(s: &VerifySettings) -> Result<Vec<BoundReport>, CliError> {
    let cfg = &s.configuration;
    let inputs = InputsEcho {
        configuration: Some(*cfg),
        ..InputsEcho::default()
    };
    let [ab, ab_p, a_pb, a_pb_p] = qm_correlations(cfg)?;
    let value = BoundReport::new(Track::Quantum, Quantity::ChshQmValue, chsh_qm_value(cfg)?, inputs.clone(), s.seed)
        .with_detail("correlation_ab", ab)
        .with_detail("correlation_ab_prime", ab_p)
        .with_detail("correlation_a_prime_b", a_pb)
        .with_detail("correlation_a_prime_b_prime", a_pb_p);

    let identity = verify_b_squared_identity(cfg)?;
    let norm = BoundReport::new(Track::Quantum, Quantity::ChshOperatorNorm, operator_norm(&chsh_operator(cfg))?, inputs, s.seed)
        .with_detail("b_squared_identity_deviation", identity.deviation)
        .with_detail("max_cross_commutator", identity.max_cross_commutator)
        .with_detail("commutator_product_norm", operator_norm(&commutator_product(cfg))?);
    Ok(vec![value, norm])
}

fn ga_reports(s: &VerifySettings) -> Vec<BoundReport> {
    let cfg = &s.configuration;
    let co = &s.coefficients;
    let inputs = InputsEcho {
        configuration: Some(*cfg),
        coefficients: Some(*co),
        ..InputsEcho::default()
    };
    let (alpha, beta) = (co.alpha_b(), co.alpha_b_prime());
    let bound_expr = ga_bound_expression(&cfg.b, &cfg.b_prime, alpha, beta);
    let case = case_inequality_check(&cfg.b, &cfg.b_prime, alpha, beta);
    let equality = equality_condition_check(&cfg.b, &cfg.b_prime);

    let s_prime_report = BoundReport::new(Track::Ga, Quantity::SPrime, s_prime(cfg, co), inputs.clone(), s.seed)
        .with_detail("dominating_bound_expression", bound_expr);
    let expr_report = BoundReport::new(Track::Ga, Quantity::GaBoundExpression, bound_expr, inputs, s.seed)
        .with_detail("case_inequality_lhs", case.lhs)
        .with_detail("case_inequality_rhs", case.rhs)
        .with_detail("coefficient_free_expression", equality.value);
    vec![s_prime_report, expr_report]
}

/// Runs the selected tracks at the configured setup.
pub fn cmd_verify(s: &VerifySettings) -> Result<VerifyDocument, CliError> {
    let mut reports = Vec::new();
    for track in &s.tracks {
        match track {
            Track::Classical => reports.extend(classical_reports(s)?),
            Track::Quantum => reports.extend(quantum_reports(s)?),
            Track::Ga => reports.extend(ga_reports(s)),
        }
    }
    Ok(VerifyDocument::new(reports))
}

pub fn cmd_optimize(track: Track, restarts: usize, seed: u64) -> Result<OptimizeDocument, CliError> {
    let (result, bound, maximizers, note) = match track {
        Track::Classical => {
            let m = maximize_lhv();
            let counts = MaximizerCounts {
                signed: m.signed_maximizers,
                absolute: m.absolute_maximizers,
            };
            (m.result, CLASSICAL_BOUND, Some(counts), Some(m.note))
        }
        Track::Quantum => (maximize_qm(restarts, seed)?, TSIRELSON_BOUND, None, None),
        Track::Ga => (maximize_ga(restarts, seed)?, TSIRELSON_BOUND, None, None),
    };
    let margin = bound - result.best_value;
    Ok(OptimizeDocument {
        tool: TOOL_NAME.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        command: "optimize".to_string(),
        track,
        seed,
        restarts,
        bound,
        margin,
        attained: margin <= ATTAINED_TOL,
        maximizers,
        note,
        result,
    })
}

pub fn cmd_sweep(steps: usize) -> Result<Vec<SweepRow>, CliError> {
    Ok(sweep_qm_family(steps)?.into_iter().map(SweepRow::from).collect())
}
