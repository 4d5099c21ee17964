//! Two-qubit spin correlations in the singlet state.
//!
//! Basis ordering is `|00⟩, |01⟩, |10⟩, |11⟩` with the left tensor factor
//! belonging to system A. Pauli matrices follow the usual convention
//! `σx = [[0,1],[1,0]]`, `σy = [[0,−i],[i,0]]`, `σz = [[1,0],[0,−1]]`.

mod eigen;
mod matrix;

pub use eigen::{hermitian_eigenvalues, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{ComplexMatrix, ComplexScalar};

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::ga::{UnitVector3, Vector3};

/// Hermiticity tolerance for the spectral-norm fast path.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Imaginary parts of expectation values above this are an error.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-9;

/// Maximum tolerated deviation in `B² = 4·1 − [A,A′][B,B′]`.
pub const IDENTITY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]])
}

/// `σ·a = a₁σx + a₂σy + a₃σz`.
pub fn spin_operator(a: &UnitVector3) -> ComplexMatrix {
    let (x, y, z) = (a.x, a.y, a.z);
    ComplexMatrix::from_rows([
        [Complex64::new(z, 0.0), Complex64::new(x, -y)],
        [Complex64::new(x, y), Complex64::new(-z, 0.0)],
    ])
}

/// Like [`spin_operator`] but validates a raw vector first.
pub fn spin_operator_checked(a: Vector3) -> Result<ComplexMatrix> {
    Ok(spin_operator(&UnitVector3::try_new(a)?))
}

/// Kronecker product of two single-qubit operators.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dim(2)?;
    b.check_dim(2)?;
    Ok(a.kron(b))
}

/// Two-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    amplitudes: [ComplexScalar; 4],
}

impl StateVector {
    pub fn new(amplitudes: [ComplexScalar; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[ComplexScalar; 4] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<ComplexScalar> {
        m.check_dim(4)?;
        let psi = &self.amplitudes;
        let mut acc = ZERO;
        for i in 0..4 {
            let row: Complex64 = (0..4).map(|j| m[(i, j)] * psi[j]).sum();
            acc += psi[i].conj() * row;
        }
        Ok(acc)
    }
}

/// `(|01⟩ − |10⟩)/√2`.
pub fn singlet_state() -> StateVector {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    StateVector {
        amplitudes: [ZERO, h, -h, ZERO],
    }
}

/// `⟨ψ|(σ·a)⊗(σ·b)|ψ⟩` in the singlet, by full matrix contraction.
pub fn qm_correlation(a: &UnitVector3, b: &UnitVector3) -> Result<f64> {
    let op = spin_operator(a).kron(&spin_operator(b));
    real_expectation(&singlet_state(), &op)
}

fn real_expectation(psi: &StateVector, op: &ComplexMatrix) -> Result<f64> {
    let e = psi.expectation(op)?;
    if e.im.abs() > IMAGINARY_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue(e.im));
    }
    Ok(e.re)
}

/// `−a·b`, the closed-form singlet correlation.
pub fn singlet_expectation_closed_form(a: &UnitVector3, b: &UnitVector3) -> f64 {
    -a.dot(b)
}

/// `B = A⊗B + A⊗B′ + A′⊗B − A′⊗B′`.
pub fn chsh_operator(cfg: &Configuration) -> ComplexMatrix {
    let a = spin_operator(&cfg.a);
    let a_prime = spin_operator(&cfg.a_prime);
    let b = spin_operator(&cfg.b);
    let b_prime = spin_operator(&cfg.b_prime);
    let sum = &a.kron(&b) + &a.kron(&b_prime);
    let sum = &sum + &a_prime.kron(&b);
    &sum - &a_prime.kron(&b_prime)
}

/// `C = [A, A′][B, B′]` with both commutators lifted to the two-qubit space.
pub fn commutator_product(cfg: &Configuration) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let left = spin_operator(&cfg.a).commutator(&spin_operator(&cfg.a_prime));
    let right = spin_operator(&cfg.b).commutator(&spin_operator(&cfg.b_prime));
    &left.kron(&id) * &id.kron(&right)
}

/// Outcome of checking `B² = 4·1 − C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    /// Max elementwise `|B² − (4·1 − C)|`.
    pub deviation: f64,
    /// Max elementwise norm over `[A,B], [A,B′], [A′,B], [A′,B′]`.
    pub max_cross_commutator: f64,
}

pub fn verify_b_squared_identity(cfg: &Configuration) -> Result<IdentityCheck> {
    let id = ComplexMatrix::identity(2);
    let lift_left = |v: &UnitVector3| spin_operator(v).kron(&id);
    let lift_right = |v: &UnitVector3| id.kron(&spin_operator(v));

    let bell = chsh_operator(cfg);
    let lhs = &bell * &bell;
    let rhs = &ComplexMatrix::identity(4).scale(4.0) - &commutator_product(cfg);
    let deviation = lhs.max_abs_diff(&rhs);

    let mut max_cross: f64 = 0.0;
    for left in [&cfg.a, &cfg.a_prime] {
        for right in [&cfg.b, &cfg.b_prime] {
            let c = lift_left(left).commutator(&lift_right(right));
            max_cross = max_cross.max(c.max_abs());
        }
    }

    if deviation > IDENTITY_TOL || max_cross > IDENTITY_TOL {
        return Err(Error::IdentityViolated {
            deviation,
            cross: max_cross,
        });
    }
    Ok(IdentityCheck {
        deviation,
        max_cross_commutator: max_cross,
    })
}

/// Spectral norm. Hermitian input uses the largest absolute eigenvalue,
/// anything else the square root of the largest eigenvalue of `M†M`.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_hermitian(HERMITIAN_TOL) {
        let e = hermitian_eigenvalues(m)?;
        Ok(e.iter().fold(0.0, |acc: f64, x| acc.max(x.abs())))
    } else {
        let gram = &m.adjoint() * m;
        let e = hermitian_eigenvalues(&gram)?;
        Ok(e.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    }
}

/// The four singlet correlations `(⟨A,B⟩, ⟨A,B′⟩, ⟨A′,B⟩, ⟨A′,B′⟩)`.
pub fn qm_correlations(cfg: &Configuration) -> Result<[f64; 4]> {
    Ok([
        qm_correlation(&cfg.a, &cfg.b)?,
        qm_correlation(&cfg.a, &cfg.b_prime)?,
        qm_correlation(&cfg.a_prime, &cfg.b)?,
        qm_correlation(&cfg.a_prime, &cfg.b_prime)?,
    ])
}

/// `⟨A,B⟩ + ⟨A,B′⟩ + ⟨A′,B⟩ − ⟨A′,B′⟩` without the absolute value.
pub fn chsh_qm_signed(cfg: &Configuration) -> Result<f64> {
    let [ab, ab_p, a_pb, a_pb_p] = qm_correlations(cfg)?;
    Ok(ab + ab_p + a_pb - a_pb_p)
}

pub fn chsh_qm_value(cfg: &Configuration) -> Result<f64> {
    Ok(chsh_qm_signed(cfg)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::{commutator, Multivector};
    use crate::TSIRELSON_BOUND;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn arb_unit() -> impl Strategy<Value = UnitVector3> {
        (0.0f64..PI, 0.0f64..std::f64::consts::TAU).prop_map(|(t, p)| UnitVector3::from_spherical(t, p))
    }

    fn arb_config() -> impl Strategy<Value = Configuration> {
        (arb_unit(), arb_unit(), arb_unit(), arb_unit()).prop_map(|(a, ap, b, bp)| Configuration::new(a, ap, b, bp))
    }

    #[test]
    fn spin_operator_along_axes() {
        assert_eq!(spin_operator(&UnitVector3::e3()), ComplexMatrix::from_real_diagonal(&[1.0, -1.0]));
        assert_eq!(spin_operator(&UnitVector3::e1()), pauli_x());
        assert_eq!(spin_operator(&UnitVector3::e2()), pauli_y());
    }

    #[test]
    fn spin_operator_on_diagonal_axis_has_eigenvalues_pm_one() {
        let a = UnitVector3::normalize(Vector3::new(1.0, 1.0, 1.0)).unwrap();
        let s = spin_operator(&a);
        assert!(s.is_hermitian(0.0));
        assert!(s.trace().norm() < 1e-15);
        let e = hermitian_eigenvalues(&s).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
        assert!((operator_norm(&s).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spin_operator_rejects_non_unit_input() {
        assert!(spin_operator_checked(Vector3::new(1.0, 1.0, 0.0)).is_err());
        assert!(spin_operator_checked(Vector3::new(0.0, 0.0, 1.0 + 1e-10)).is_ok());
    }

    #[test]
    fn tensor_product_examples() {
        let id2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&id2, &id2).unwrap(), ComplexMatrix::identity(4));
        assert_eq!(
            tensor_product(&pauli_z(), &pauli_z()).unwrap(),
            ComplexMatrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
        let four = ComplexMatrix::identity(4);
        assert_eq!(
            tensor_product(&four, &id2),
            Err(Error::DimensionMismatch { expected: 2, found: 4 })
        );
    }

    #[test]
    fn singlet_amplitudes() {
        let psi = singlet_state();
        let h = FRAC_1_SQRT_2;
        assert_eq!(psi.amplitudes(), &[c(0.0), c(h), c(-h), c(0.0)]);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        assert!(StateVector::new([c(1.0), c(1.0), c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn correlation_examples() {
        let e1 = UnitVector3::e1();
        assert!((qm_correlation(&e1, &e1).unwrap() + 1.0).abs() < 1e-15);
        assert!(qm_correlation(&e1, &UnitVector3::e2()).unwrap().abs() < 1e-15);
        let at_45 = UnitVector3::in_plane(FRAC_PI_4);
        assert!((singlet_expectation_closed_form(&e1, &at_45) + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn canonical_correlations_and_violation() {
        let cfg = Configuration::canonical();
        let corr = qm_correlations(&cfg).unwrap();
        let h = FRAC_1_SQRT_2;
        for (got, want) in corr.iter().zip([h, h, h, -h]) {
            assert!((got - want).abs() < 1e-15, "{corr:?}");
        }
        assert!((chsh_qm_value(&cfg).unwrap() - TSIRELSON_BOUND).abs() < 1e-12);
        let bell = chsh_operator(&cfg);
        let expect = singlet_state().expectation(&bell).unwrap();
        assert!((expect.re - TSIRELSON_BOUND).abs() < 1e-12 && expect.im.abs() < 1e-15);
        assert!((operator_norm(&bell).unwrap() - TSIRELSON_BOUND).abs() < 1e-9);
        assert!(operator_norm(&commutator_product(&cfg)).unwrap() <= 4.0 + 1e-12);
    }

    #[test]
    fn degenerate_operator_collapses() {
        let a = UnitVector3::e1();
        let b = UnitVector3::in_plane(0.3);
        let cfg = Configuration::new(a, a, b, b);
        let expected = spin_operator(&a).kron(&spin_operator(&b)).scale(2.0);
        assert!(chsh_operator(&cfg).max_abs_diff(&expected) < 1e-15);
        assert!((operator_norm(&chsh_operator(&cfg)).unwrap() - 2.0).abs() < 1e-12);
        assert!(commutator_product(&cfg).max_abs() < 1e-15);
        let bell = chsh_operator(&cfg);
        assert!((&bell * &bell).max_abs_diff(&ComplexMatrix::identity(4).scale(4.0)) < 1e-12);
    }

    #[test]
    fn identity_holds_at_canonical() {
        let check = verify_b_squared_identity(&Configuration::canonical()).unwrap();
        assert!(check.deviation <= 1e-12, "{check:?}");
        assert!(check.max_cross_commutator <= 1e-12);
    }

    #[test]
    fn qm_value_vanishes_for_orthogonal_collapsed_setup() {
        let cfg = Configuration::new(UnitVector3::e1(), UnitVector3::e1(), UnitVector3::e2(), UnitVector3::e2());
        assert!(chsh_qm_value(&cfg).unwrap() < 1e-15);
    }

    #[test]
    fn coplanar_family_closed_form() {
        // a at 0, a′ at π/2, b at θ, b′ at −θ: −2cos θ − 2 sin θ = −2√2 sin(θ + π/4)
        for k in 0..=40 {
            let theta = PI * k as f64 / 40.0;
            let cfg = Configuration::coplanar(0.0, FRAC_PI_2, theta, -theta);
            let expected = 2.0 * SQRT_2 * (theta + FRAC_PI_4).sin().abs();
            assert!((chsh_qm_value(&cfg).unwrap() - expected).abs() < 1e-12);
        }
        let at = |t: f64| chsh_qm_value(&Configuration::coplanar(0.0, FRAC_PI_2, t, -t)).unwrap();
        assert!((at(0.0) - 2.0).abs() < 1e-15);
        assert!((at(FRAC_PI_4) - TSIRELSON_BOUND).abs() < 1e-15);
    }

    #[test]
    fn operator_norm_of_identity_and_non_hermitian() {
        assert!((operator_norm(&ComplexMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-15);
        // [[0, 2], [0, 0]] has singular values 2 and 0.
        let m = ComplexMatrix::from_rows([[c(0.0), c(2.0)], [c(0.0), c(0.0)]]);
        assert!((operator_norm(&m).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_commutators_mirror_basis_commutators() {
        let paulis = [pauli_x(), pauli_y(), pauli_z()];
        let basis = [Multivector::e1(), Multivector::e2(), Multivector::e3()];
        for i in 0..3 {
            for j in 0..3 {
                let sigma_nonzero = paulis[i].commutator(&paulis[j]).max_abs() > 0.0;
                let ga_nonzero = commutator(&basis[i], &basis[j]).max_abs() > 0.0;
                assert_eq!(sigma_nonzero, ga_nonzero, "pair ({i},{j})");
                assert_eq!(sigma_nonzero, i != j);
            }
        }
    }

    proptest! {
        #[test]
        fn spin_operator_squares_to_identity(a in arb_unit()) {
            let s = spin_operator(&a);
            prop_assert!((&s * &s).max_abs_diff(&ComplexMatrix::identity(2)) <= 1e-12);
        }

        #[test]
        fn matrix_and_closed_form_correlations_agree(a in arb_unit(), b in arb_unit()) {
            let m = qm_correlation(&a, &b).unwrap();
            prop_assert!((m - singlet_expectation_closed_form(&a, &b)).abs() <= 1e-12);
        }

        #[test]
        fn perfect_anticorrelation(a in arb_unit()) {
            prop_assert!((qm_correlation(&a, &a).unwrap() + 1.0).abs() <= 1e-12);
        }

        #[test]
        fn tsirelson_chain(cfg in arb_config()) {
            let check = verify_b_squared_identity(&cfg).unwrap();
            prop_assert!(check.deviation <= 1e-10);
            prop_assert!(check.max_cross_commutator <= 1e-12);
            let bell = chsh_operator(&cfg);
            prop_assert!(bell.is_hermitian(1e-12));
            let norm_b = operator_norm(&bell).unwrap();
            let norm_c = operator_norm(&commutator_product(&cfg)).unwrap();
            prop_assert!(norm_c <= 4.0 + 1e-9);
            prop_assert!(norm_b <= TSIRELSON_BOUND + 1e-9);
            let value = chsh_qm_value(&cfg).unwrap();
            prop_assert!(value <= norm_b + 1e-9);
        }
    }
}
