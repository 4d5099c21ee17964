//! Vector-valued response functions and the S′ bound chain.
//!
//! Single-side values are vectors on the measurement axis, `F(x) = αx` with
//! `α ∈ [−1, 1]`, and the local pair value is the scalar `F(x, y) = αβ x·y`.
//! The CHSH-shaped combination
//!
//! ```text
//! S′ = |F(a,b) + F(a,b′)| + |F(a′,b) − F(a′,b′)|
//! ```
//!
//! is dominated by `|αb + βb′| + |αb − βb′|`, which never exceeds 2√2.

use serde::{Deserialize, Serialize};

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::ga::{vector_magnitude, UnitVector3, Vector3};

/// Tolerance used when comparing the two sides of a bound.
pub const BOUND_TOL: f64 = 1e-12;

/// `|value − 2|` at or below this counts as attaining 2.
pub const EQUALITY_VALUE_TOL: f64 = 1e-9;

/// Angular distance from 0 or π at or below this counts as parallel.
pub const PARALLEL_ANGLE_TOL: f64 = 1e-6;

fn check_coefficient(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value.abs() <= 1.0 {
        Ok(value)
    } else {
        Err(Error::CoefficientOutOfRange { name, value })
    }
}

/// Scale factors for `F(a), F(a′), F(b), F(b′)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoefficients", into = "RawCoefficients")]
pub struct FCoefficients {
    alpha_a: f64,
    alpha_a_prime: f64,
    alpha_b: f64,
    alpha_b_prime: f64,
}

#[derive(Serialize, Deserialize)]
struct RawCoefficients {
    alpha_a: f64,
    alpha_a_prime: f64,
    alpha_b: f64,
    alpha_b_prime: f64,
}

impl TryFrom<RawCoefficients> for FCoefficients {
    type Error = Error;
    fn try_from(r: RawCoefficients) -> Result<Self> {
        FCoefficients::new(r.alpha_a, r.alpha_a_prime, r.alpha_b, r.alpha_b_prime)
    }
}

impl From<FCoefficients> for RawCoefficients {
    fn from(c: FCoefficients) -> Self {
        RawCoefficients {
            alpha_a: c.alpha_a,
            alpha_a_prime: c.alpha_a_prime,
            alpha_b: c.alpha_b,
            alpha_b_prime: c.alpha_b_prime,
        }
    }
}

impl Default for FCoefficients {
    fn default() -> Self {
        Self::UNIT
    }
}

impl FCoefficients {
    pub const UNIT: FCoefficients = FCoefficients {
        alpha_a: 1.0,
        alpha_a_prime: 1.0,
        alpha_b: 1.0,
        alpha_b_prime: 1.0,
    };

    pub fn new(alpha_a: f64, alpha_a_prime: f64, alpha_b: f64, alpha_b_prime: f64) -> Result<Self> {
        Ok(Self {
            alpha_a: check_coefficient("alpha_a", alpha_a)?,
            alpha_a_prime: check_coefficient("alpha_a_prime", alpha_a_prime)?,
            alpha_b: check_coefficient("alpha_b", alpha_b)?,
            alpha_b_prime: check_coefficient("alpha_b_prime", alpha_b_prime)?,
        })
    }

    pub fn alpha_a(&self) -> f64 {
        self.alpha_a
    }

    pub fn alpha_a_prime(&self) -> f64 {
        self.alpha_a_prime
    }

    pub fn alpha_b(&self) -> f64 {
        self.alpha_b
    }

    pub fn alpha_b_prime(&self) -> f64 {
        self.alpha_b_prime
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha_a, self.alpha_a_prime, self.alpha_b, self.alpha_b_prime]
    }
}

pub fn canonical_configuration() -> Configuration {
    Configuration::canonical()
}

/// `F(x) = αx`.
pub fn f_single(x: &UnitVector3, alpha: f64) -> Result<Vector3> {
    Ok(x.scale(check_coefficient("alpha", alpha)?))
}

/// `F(x, y) = αβ x·y`.
pub fn f_pair(x: &UnitVector3, y: &UnitVector3, alpha: f64, beta: f64) -> Result<f64> {
    let alpha = check_coefficient("alpha", alpha)?;
    let beta = check_coefficient("beta", beta)?;
    Ok(pair_value(x, y, alpha, beta))
}

fn pair_value(x: &UnitVector3, y: &UnitVector3, alpha: f64, beta: f64) -> f64 {
    alpha * beta * x.dot(y)
}

pub fn s_prime(cfg: &Configuration, co: &FCoefficients) -> f64 {
    let ab = pair_value(&cfg.a, &cfg.b, co.alpha_a, co.alpha_b);
    let ab_p = pair_value(&cfg.a, &cfg.b_prime, co.alpha_a, co.alpha_b_prime);
    let a_pb = pair_value(&cfg.a_prime, &cfg.b, co.alpha_a_prime, co.alpha_b);
    let a_pb_p = pair_value(&cfg.a_prime, &cfg.b_prime, co.alpha_a_prime, co.alpha_b_prime);
    (ab + ab_p).abs() + (a_pb - a_pb_p).abs()
}

/// `|αb + βb′| + |αb − βb′|`.
pub fn ga_bound_expression(b: &UnitVector3, b_prime: &UnitVector3, alpha: f64, beta: f64) -> f64 {
    let fb = b.scale(alpha);
    let fb_p = b_prime.scale(beta);
    vector_magnitude(&(fb + fb_p)) + vector_magnitude(&(fb - fb_p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignCase {
    /// `αβ > 0`
    SameSign,
    /// `αβ < 0`
    OppositeSign,
    /// `αβ = 0`
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseCheck {
    pub case: SignCase,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Whether each magnitude is individually dominated by its paired
    /// coefficient-free magnitude. Not implied by the summed inequality:
    /// `α = 1, β = 0.1, b′ = −b` gives `|αb + βb′| = 0.9 > |b + b′| = 0`.
    pub termwise: bool,
}

/// Checks `|αb + βb′| + |αb − βb′| ≤ |b + b′| + |b − b′|` by sign case.
///
/// For `αβ ≠ 0` the summed inequality is checked against the coefficient-free
/// expression; for `αβ = 0` the left side collapses to `2·max(|α|, |β|)` and is
/// checked against 2.
pub fn case_inequality_check(b: &UnitVector3, b_prime: &UnitVector3, alpha: f64, beta: f64) -> CaseCheck {
    let plus = vector_magnitude(&(b.scale(alpha) + b_prime.scale(beta)));
    let minus = vector_magnitude(&(b.scale(alpha) - b_prime.scale(beta)));
    let free_plus = vector_magnitude(&(b.vector() + b_prime.vector()));
    let free_minus = vector_magnitude(&(b.vector() - b_prime.vector()));
    let lhs = plus + minus;
    let product = alpha * beta;

    let (case, rhs, termwise) = if product > 0.0 {
        (
            SignCase::SameSign,
            free_plus + free_minus,
            plus <= free_plus + BOUND_TOL && minus <= free_minus + BOUND_TOL,
        )
    } else if product < 0.0 {
        (
            SignCase::OppositeSign,
            free_plus + free_minus,
            plus <= free_minus + BOUND_TOL && minus <= free_plus + BOUND_TOL,
        )
    } else {
        let collapsed = 2.0 * alpha.abs().max(beta.abs());
        (SignCase::Degenerate, 2.0, (lhs - collapsed).abs() <= BOUND_TOL)
    };
    CaseCheck {
        case,
        lhs,
        rhs,
        holds: lhs <= rhs + BOUND_TOL,
        termwise,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualityCheck {
    /// `|b + b′| + |b − b′|`.
    pub value: f64,
    pub is_two: bool,
    pub is_parallel: bool,
}

/// `|b + b′| + |b − b′| = 2` exactly when `b = ±b′`.
///
/// The value rises like the angular distance δ from {0, π}, so the two bands
/// only disagree for `δ` between roughly [`EQUALITY_VALUE_TOL`] and
/// [`PARALLEL_ANGLE_TOL`].
pub fn equality_condition_check(b: &UnitVector3, b_prime: &UnitVector3) -> EqualityCheck {
    let value = ga_bound_expression(b, b_prime, 1.0, 1.0);
    let angle = b.angle_to(b_prime);
    let distance = angle.min(std::f64::consts::PI - angle);
    EqualityCheck {
        value,
        is_two: (value - 2.0).abs() <= EQUALITY_VALUE_TOL,
        is_parallel: distance <= PARALLEL_ANGLE_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::Multivector;
    use crate::quantum::qm_correlation;
    use crate::TSIRELSON_BOUND;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn arb_unit() -> impl Strategy<Value = UnitVector3> {
        (0.0f64..PI, 0.0f64..std::f64::consts::TAU).prop_map(|(t, p)| UnitVector3::from_spherical(t, p))
    }

    fn arb_coeffs() -> impl Strategy<Value = FCoefficients> {
        prop::array::uniform4(-1.0f64..=1.0).prop_map(|[a, ap, b, bp]| FCoefficients::new(a, ap, b, bp).unwrap())
    }

    /// `|v|` via the scalar part of the geometric square `vv`.
    fn geometric_magnitude(v: Vector3) -> f64 {
        let m = Multivector::from(v);
        (m * m).scalar_part().sqrt()
    }

    #[test]
    fn canonical_configuration_geometry() {
        let cfg = canonical_configuration();
        let a = cfg.angles();
        assert!((a.a_a_prime - FRAC_PI_2).abs() < 1e-12);
        assert!((a.b_b_prime - FRAC_PI_2).abs() < 1e-12);
        assert!((a.a_prime_b_prime - FRAC_PI_4).abs() < 1e-12);
        let sum = cfg.b.vector() + cfg.b_prime.vector();
        let diff = cfg.b.vector() - cfg.b_prime.vector();
        assert!((sum - Vector3::new(-SQRT_2, 0.0, 0.0)).norm() < 1e-15);
        assert!((diff - Vector3::new(0.0, -SQRT_2, 0.0)).norm() < 1e-15);
        assert!((geometric_magnitude(sum) - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn f_single_examples() {
        let e1 = UnitVector3::e1();
        assert_eq!(f_single(&e1, 1.0).unwrap(), e1.vector());
        assert_eq!(f_single(&e1, 0.0).unwrap(), Vector3::ZERO);
        let b = canonical_configuration().b;
        let expected = Vector3::new(1.0, 1.0, 0.0).scale(0.5 / SQRT_2);
        assert!((f_single(&b, -0.5).unwrap() - expected).norm() < 1e-15);
        assert!(matches!(f_single(&e1, 1.01), Err(Error::CoefficientOutOfRange { .. })));
    }

    #[test]
    fn f_pair_examples() {
        let cfg = canonical_configuration();
        assert!((f_pair(&cfg.a, &cfg.b, 1.0, 1.0).unwrap() + FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(f_pair(&cfg.a, &cfg.b, 0.0, 0.7).unwrap(), 0.0);
        let qm = qm_correlation(&cfg.a, &cfg.b).unwrap();
        assert!((f_pair(&cfg.a, &cfg.b, 1.0, -1.0).unwrap() - qm).abs() < 1e-12);
        assert!(f_pair(&cfg.a, &cfg.b, 1.0, -2.0).is_err());
    }

    #[test]
    fn s_prime_examples() {
        let cfg = canonical_configuration();
        let qm_signature = FCoefficients::new(-1.0, -1.0, 1.0, 1.0).unwrap();
        assert!((s_prime(&cfg, &qm_signature) - TSIRELSON_BOUND).abs() < 1e-12);
        assert!((s_prime(&cfg, &FCoefficients::UNIT) - TSIRELSON_BOUND).abs() < 1e-12);
        for (sa, sap) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let co = FCoefficients::new(sa, sap, 1.0, 1.0).unwrap();
            assert!(s_prime(&cfg, &co) <= TSIRELSON_BOUND + 1e-12);
        }
        let silent_b = FCoefficients::new(0.4, -0.9, 0.0, 0.0).unwrap();
        assert_eq!(s_prime(&cfg, &silent_b), 0.0);
    }

    #[test]
    fn coefficient_validation_and_serde() {
        assert!(FCoefficients::new(1.0, 1.0, 1.0, 1.5).is_err());
        assert!(FCoefficients::new(f64::NAN, 1.0, 1.0, 1.0).is_err());
        let bad = "alpha_a = 1.0\nalpha_a_prime = 1.0\nalpha_b = -3.0\nalpha_b_prime = 1.0\n";
        assert!(toml::from_str::<FCoefficients>(bad).is_err());
    }

    #[test]
    fn bound_expression_examples() {
        let cfg = canonical_configuration();
        assert!((ga_bound_expression(&cfg.b, &cfg.b_prime, 1.0, 1.0) - TSIRELSON_BOUND).abs() < 1e-12);
        assert!((ga_bound_expression(&cfg.b, &cfg.b, 1.0, 1.0) - 2.0).abs() < 1e-15);
        for beta in [-1.0, -0.3, 0.0, 0.6, 1.0] {
            let v = ga_bound_expression(&cfg.b, &cfg.b_prime, 0.0, beta);
            assert!((v - 2.0 * f64::abs(beta)).abs() < 1e-15);
        }
    }

    #[test]
    fn case_examples() {
        let cfg = canonical_configuration();
        let same = case_inequality_check(&cfg.b, &cfg.b_prime, 1.0, 1.0);
        assert_eq!(same.case, SignCase::SameSign);
        assert_eq!(same.lhs, same.rhs);
        assert!(same.holds && same.termwise);

        let b = UnitVector3::from_spherical(1.1, 0.4);
        let bp = UnitVector3::from_spherical(2.0, -2.3);
        let opposite = case_inequality_check(&b, &bp, 0.5, -0.5);
        assert_eq!(opposite.case, SignCase::OppositeSign);
        assert!(opposite.holds);

        let zero = case_inequality_check(&b, &bp, 0.0, 0.0);
        assert_eq!(zero.case, SignCase::Degenerate);
        assert_eq!(zero.lhs, 0.0);
        assert!(zero.holds && zero.termwise);
    }

    #[test]
    fn termwise_pairing_can_fail_while_sum_holds() {
        let b = UnitVector3::e1();
        let check = case_inequality_check(&b, &b.flipped(), 1.0, 0.1);
        assert_eq!(check.case, SignCase::SameSign);
        assert!(!check.termwise);
        assert!(check.holds);
        assert!((check.lhs - 2.0).abs() < 1e-15 && (check.rhs - 2.0).abs() < 1e-15);
    }

    #[test]
    fn equality_condition_examples() {
        let b = UnitVector3::from_spherical(0.7, 2.1);
        let same = equality_condition_check(&b, &b);
        assert!((same.value - 2.0).abs() < 1e-15 && same.is_two && same.is_parallel);
        let anti = equality_condition_check(&b, &b.flipped());
        assert!((anti.value - 2.0).abs() < 1e-15 && anti.is_two && anti.is_parallel);
        let ortho = equality_condition_check(&UnitVector3::e1(), &UnitVector3::e3());
        assert!((ortho.value - TSIRELSON_BOUND).abs() < 1e-15);
        assert!(!ortho.is_two && !ortho.is_parallel);
    }

    proptest! {
        #[test]
        fn boundedness_of_single_values(x in arb_unit(), alpha in -1.0f64..=1.0) {
            let v = f_single(&x, alpha).unwrap();
            prop_assert!((v.norm() - alpha.abs()).abs() <= 1e-15);
        }

        #[test]
        fn s_prime_chain(a in arb_unit(), ap in arb_unit(), b in arb_unit(), bp in arb_unit(), co in arb_coeffs()) {
            let cfg = Configuration::new(a, ap, b, bp);
            let s = s_prime(&cfg, &co);
            let bound = ga_bound_expression(&b, &bp, co.alpha_b(), co.alpha_b_prime());
            prop_assert!(s <= bound + BOUND_TOL);
            prop_assert!(bound <= TSIRELSON_BOUND + BOUND_TOL);
        }

        #[test]
        fn unit_coefficient_expression_range(b in arb_unit(), bp in arb_unit()) {
            let v = ga_bound_expression(&b, &bp, 1.0, 1.0);
            prop_assert!((2.0 - 1e-12..=TSIRELSON_BOUND + 1e-12).contains(&v));
            // closed form: √(2 + 2c) + √(2 − 2c)
            let c = b.dot(&bp);
            let closed = (2.0 + 2.0 * c).max(0.0).sqrt() + (2.0 - 2.0 * c).max(0.0).sqrt();
            prop_assert!((v - closed).abs() <= 1e-7);
        }

        #[test]
        fn summed_case_inequality(b in arb_unit(), bp in arb_unit(), alpha in -1.0f64..=1.0, beta in -1.0f64..=1.0) {
            prop_assert!(case_inequality_check(&b, &bp, alpha, beta).holds);
        }

        #[test]
        fn qm_correspondence(x in arb_unit(), y in arb_unit()) {
            let f = f_pair(&x, &y, 1.0, -1.0).unwrap();
            prop_assert!((f - qm_correlation(&x, &y).unwrap()).abs() <= 1e-12);
        }
    }
}
