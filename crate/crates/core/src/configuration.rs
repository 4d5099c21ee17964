//! Measurement setups: four unit directions `a, a′` (left) and `b, b′` (right).

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::ga::{UnitVector3, Vector3};

/// Pairwise angles between the four directions, in radians.
///
/// Computed as `arccos` of the clamped dot product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub a_a_prime: f64,
    pub b_b_prime: f64,
    pub a_prime_b_prime: f64,
    pub a_b: f64,
    pub a_b_prime: f64,
    pub a_prime_b: f64,
}

fn arccos_angle(u: &UnitVector3, v: &UnitVector3) -> f64 {
    u.dot(v).clamp(-1.0, 1.0).acos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawConfiguration", into = "RawConfiguration")]
pub struct Configuration {
    pub a: UnitVector3,
    pub a_prime: UnitVector3,
    pub b: UnitVector3,
    pub b_prime: UnitVector3,
    angles: Angles,
}

#[derive(Serialize, Deserialize)]
struct RawConfiguration {
    a: UnitVector3,
    a_prime: UnitVector3,
    b: UnitVector3,
    b_prime: UnitVector3,
}

impl From<RawConfiguration> for Configuration {
    fn from(r: RawConfiguration) -> Self {
        Configuration::new(r.a, r.a_prime, r.b, r.b_prime)
    }
}

impl From<Configuration> for RawConfiguration {
    fn from(c: Configuration) -> Self {
        RawConfiguration {
            a: c.a,
            a_prime: c.a_prime,
            b: c.b,
            b_prime: c.b_prime,
        }
    }
}

impl Configuration {
    pub fn new(a: UnitVector3, a_prime: UnitVector3, b: UnitVector3, b_prime: UnitVector3) -> Self {
        let angles = Angles {
            a_a_prime: arccos_angle(&a, &a_prime),
            b_b_prime: arccos_angle(&b, &b_prime),
            a_prime_b_prime: arccos_angle(&a_prime, &b_prime),
            a_b: arccos_angle(&a, &b),
            a_b_prime: arccos_angle(&a, &b_prime),
            a_prime_b: arccos_angle(&a_prime, &b),
        };
        Self {
            a,
            a_prime,
            b,
            b_prime,
            angles,
        }
    }

    /// The maximizing setup `a = e1`, `a′ = e2`, `b = −(e1 + e2)/√2`,
    /// `b′ = (−e1 + e2)/√2`.
    pub fn canonical() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::new(
            UnitVector3::e1(),
            UnitVector3::e2(),
            UnitVector3::try_new(Vector3::new(-h, -h, 0.0)).expect("unit"),
            UnitVector3::try_new(Vector3::new(-h, h, 0.0)).expect("unit"),
        )
    }

    /// Coplanar setup in the e1–e2 plane, each direction given by its angle
    /// from e1 in radians.
    pub fn coplanar(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        Self::new(
            UnitVector3::in_plane(a),
            UnitVector3::in_plane(a_prime),
            UnitVector3::in_plane(b),
            UnitVector3::in_plane(b_prime),
        )
    }

    pub fn angles(&self) -> &Angles {
        &self.angles
    }

    pub fn vectors(&self) -> [UnitVector3; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }
}
