//! The geometric algebra G³ over R³.
//!
//! A [`Multivector`] stores eight coefficients in the fixed order
//! `(1, e1, e2, e3, e12, e13, e23, e123)`. The geometric product is driven by
//! a sign-and-index table computed at compile time from the blade bitmasks,
//! so every sign is an exact integer.

use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|x² + y² + z² − 1|` for a stored unit vector.
pub const UNIT_INVARIANT_TOL: f64 = 1e-12;

/// Inputs whose norm deviates from 1 by more than this are rejected.
pub const UNIT_INPUT_TOL: f64 = 1e-9;

/// Blade bitmask for each coefficient slot (bit 0 = e1, bit 1 = e2, bit 2 = e3).
const BLADE_MASK: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

/// Inverse of [`BLADE_MASK`].
const MASK_SLOT: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

/// Grade of each coefficient slot.
const SLOT_GRADE: [usize; 8] = [0, 1, 1, 1, 2, 2, 2, 3];

/// Sign picked up when reordering the concatenated basis vectors of two
/// blades into canonical order. Every basis vector squares to +1.
const fn reorder_sign(a: u8, b: u8) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

const fn build_product_table() -> [[(usize, i8); 8]; 8] {
    let mut table = [[(0usize, 0i8); 8]; 8];
    let mut i = 0;
    while i < 8 {
        let mut j = 0;
        while j < 8 {
            let (a, b) = (BLADE_MASK[i], BLADE_MASK[j]);
            table[i][j] = (MASK_SLOT[(a ^ b) as usize], reorder_sign(a, b));
            j += 1;
        }
        i += 1;
    }
    table
}

/// `PRODUCT[i][j] = (k, s)` means `basis[i] * basis[j] = s * basis[k]`.
const PRODUCT: [[(usize, i8); 8]; 8] = build_product_table();

/// An element of G³.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Multivector {
    coefficients: [f64; 8],
}

impl Multivector {
    pub const ZERO: Multivector = Multivector { coefficients: [0.0; 8] };

    pub fn new(coefficients: [f64; 8]) -> Result<Self> {
        if coefficients.iter().all(|c| c.is_finite()) {
            Ok(Self { coefficients })
        } else {
            Err(Error::NonFinite("multivector"))
        }
    }

    pub fn scalar(s: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = s;
        Self { coefficients: c }
    }

    /// The basis blade stored in `slot` (0 = scalar, 1..=3 = e1..e3, ...).
    pub fn basis(slot: usize) -> Self {
        let mut c = [0.0; 8];
        c[slot] = 1.0;
        Self { coefficients: c }
    }

    pub fn e1() -> Self {
        Self::basis(1)
    }

    pub fn e2() -> Self {
        Self::basis(2)
    }

    pub fn e3() -> Self {
        Self::basis(3)
    }

    pub fn coefficients(&self) -> &[f64; 8] {
        &self.coefficients
    }

    pub fn scalar_part(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn vector_part(&self) -> Vector3 {
        let c = &self.coefficients;
        Vector3::new(c[1], c[2], c[3])
    }

    /// Bivector coefficients `(e12, e13, e23)`.
    pub fn bivector_part(&self) -> [f64; 3] {
        let c = &self.coefficients;
        [c[4], c[5], c[6]]
    }

    pub fn pseudoscalar_part(&self) -> f64 {
        self.coefficients[7]
    }

    /// Projection onto a single grade; grades above 3 project to zero.
    pub fn grade(&self, k: usize) -> Self {
        let mut c = [0.0; 8];
        for (slot, &g) in SLOT_GRADE.iter().enumerate() {
            if g == k {
                c[slot] = self.coefficients[slot];
            }
        }
        Self { coefficients: c }
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coefficients: self.coefficients.map(|c| c * s),
        }
    }
}

impl From<Vector3> for Multivector {
    fn from(v: Vector3) -> Self {
        Self {
            coefficients: [0.0, v.x, v.y, v.z, 0.0, 0.0, 0.0, 0.0],
        }
    }
}

impl From<UnitVector3> for Multivector {
    fn from(v: UnitVector3) -> Self {
        Self::from(v.0)
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.coefficients;
        for (x, y) in c.iter_mut().zip(rhs.coefficients) {
            *x += y;
        }
        Self { coefficients: c }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut c = self.coefficients;
        for (x, y) in c.iter_mut().zip(rhs.coefficients) {
            *x -= y;
        }
        Self { coefficients: c }
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        geometric_product(&self, &rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 8] = ["", "e1", "e2", "e3", "e12", "e13", "e23", "e123"];
        let mut first = true;
        for (c, name) in self.coefficients.iter().zip(NAMES) {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}{name}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The geometric product `uv`.
pub fn geometric_product(u: &Multivector, v: &Multivector) -> Multivector {
    let mut out = [0.0; 8];
    for (i, &ui) in u.coefficients.iter().enumerate() {
        if ui == 0.0 {
            continue;
        }
        for (j, &vj) in v.coefficients.iter().enumerate() {
            if vj == 0.0 {
                continue;
            }
            let (k, sign) = PRODUCT[i][j];
            out[k] += f64::from(sign) * ui * vj;
        }
    }
    Multivector { coefficients: out }
}

/// `uv − vu`.
pub fn commutator(u: &Multivector, v: &Multivector) -> Multivector {
    geometric_product(u, v) - geometric_product(v, u)
}

/// Euclidean length of a 3-vector.
pub fn vector_magnitude(v: &Vector3) -> f64 {
    v.norm()
}

/// A direction or displacement in R³.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vector3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self::new(x, y, z)
    }
}

impl Add for Vector3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vector3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// A [`Vector3`] of unit length.
///
/// Construction rejects inputs more than [`UNIT_INPUT_TOL`] away from unit
/// norm and divides out the remaining rounding, so the stored vector meets
/// [`UNIT_INVARIANT_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 3]")]
pub struct UnitVector3(Vector3);

impl UnitVector3 {
    pub fn try_new(v: Vector3) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite("unit vector"));
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_INPUT_TOL {
            return Err(Error::NonUnitVector {
                x: v.x,
                y: v.y,
                z: v.z,
                norm,
            });
        }
        if (v.dot(&v) - 1.0).abs() <= UNIT_INVARIANT_TOL {
            // already meets the stored invariant; keep the bits so that
            // serialized vectors read back unchanged
            return Ok(Self(v));
        }
        Ok(Self(v.scale(1.0 / norm)))
    }

    /// Normalizes any finite nonzero vector.
    pub fn normalize(v: Vector3) -> Result<Self> {
        let norm = v.norm();
        if !v.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize ({}, {}, {})",
                v.x, v.y, v.z
            )));
        }
        Ok(Self(v.scale(1.0 / norm)))
    }

    /// Point on the sphere at polar angle `theta` and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self(Vector3::new(st * cp, st * sp, ct))
    }

    /// Unit vector in the e1–e2 plane at `angle` radians from e1.
    pub fn in_plane(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self(Vector3::new(c, s, 0.0))
    }

    pub fn e1() -> Self {
        Self(Vector3::new(1.0, 0.0, 0.0))
    }

    pub fn e2() -> Self {
        Self(Vector3::new(0.0, 1.0, 0.0))
    }

    pub fn e3() -> Self {
        Self(Vector3::new(0.0, 0.0, 1.0))
    }

    pub fn vector(&self) -> Vector3 {
        self.0
    }

    pub fn flipped(&self) -> Self {
        Self(-self.0)
    }

    /// Angle to `other` in `[0, π]`, computed via `atan2` so it stays
    /// accurate for nearly parallel and antiparallel pairs.
    pub fn angle_to(&self, other: &Self) -> f64 {
        self.0.cross(&other.0).norm().atan2(self.0.dot(&other.0))
    }
}

impl Deref for UnitVector3 {
    type Target = Vector3;
    fn deref(&self) -> &Vector3 {
        &self.0
    }
}

impl From<UnitVector3> for [f64; 3] {
    fn from(v: UnitVector3) -> Self {
        v.0.to_array()
    }
}

impl TryFrom<[f64; 3]> for UnitVector3 {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::try_new(a.into())
    }
}

impl<'de> Deserialize<'de> for UnitVector3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[f64; 3]>::deserialize(d)?;
        Self::try_from(raw).map_err(serde::de::Error::custom)
    }
}
