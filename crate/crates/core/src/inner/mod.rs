//! Blaschke factors, Blaschke products and atomic singular inner functions.

mod certificate;
mod function;
mod zeros;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{unimodular, Complex64, DomainError};
use crate::disc::poisson_ratio;

pub use certificate::{
    blaschke_lower_certificate, certify_theta, theta_lower_certificate, BoundCertificate,
    CertificateError, CertificateKind,
};
pub use function::DiscFunction;
pub use zeros::{
    eval_blaschke, interpolating_check, BlaschkeValue, InterpolationVerdict, MasterSequence, Ray,
    RhoRule, ZeroSet,
};

/// Distance below which a point counts as sitting on a pole or a zero.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InnerError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("tail of the zero set cannot be bounded below {requested:e} (best {achieved:e})")]
    Truncation { requested: f64, achieved: f64 },
}

/// `b_λ(z) = (|λ|/λ)(λ − z)/(1 − λ̄z)`.
pub fn blaschke_factor(lambda: Complex64, z: Complex64) -> Result<Complex64, DomainError> {
    let m = lambda.norm();
    if m == 0.0 {
        return Err(DomainError::Parameter(
            "b_0 is undefined; the factor at the origin is z itself".into(),
        ));
    }
    if m >= 1.0 {
        return Err(DomainError::OutsideDisc(lambda));
    }
    if z.norm() >= 1.0 {
        return Err(DomainError::OutsideDisc(z));
    }
    Ok(factor_unchecked(lambda, m, z))
}

#[inline]
pub(crate) fn factor_unchecked(lambda: Complex64, modulus: f64, z: Complex64) -> Complex64 {
    (lambda - z) / (Complex64::new(1.0, 0.0) - lambda.conj() * z) * (modulus / lambda)
}

/// `β_λ(z) = (z − λ)/(1 − λ̄z)`, the disc automorphism taking `λ` to 0.
pub fn beta_factor(lambda: Complex64, z: Complex64) -> Result<Complex64, DomainError> {
    if lambda.norm() >= 1.0 {
        return Err(DomainError::OutsideDisc(lambda));
    }
    if z.norm() >= 1.0 {
        return Err(DomainError::OutsideDisc(z));
    }
    Ok((z - lambda) / (Complex64::new(1.0, 0.0) - lambda.conj() * z))
}

/// One point mass `a·δ_ζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub point: Complex64,
    pub mass: f64,
}

/// A finite positive atomic measure on the unit circle.
///
/// Serialised as a list of `[[re, im], mass]` pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<([f64; 2], f64)>", into = "Vec<([f64; 2], f64)>")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(atoms: impl IntoIterator<Item = (Complex64, f64)>) -> Result<Self, DomainError> {
        let mut out: Vec<Atom> = Vec::new();
        for (point, mass) in atoms {
            let point = unimodular(point)?;
            if !(mass > 0.0 && mass.is_finite()) {
                return Err(DomainError::Parameter(format!(
                    "atom masses must be positive and finite, got {mass}"
                )));
            }
            if out.iter().any(|a| (a.point - point).norm() <= POLE_TOL) {
                return Err(DomainError::Parameter(format!("repeated atom at {point}")));
            }
            out.push(Atom { point, mass });
        }
        Ok(Self { atoms: out })
    }

    pub fn dirac(point: Complex64, mass: f64) -> Result<Self, DomainError> {
        Self::new([(point, mass)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// `μ₁ + μ₂`, merging atoms at the same point.
    pub fn sum(&self, other: &AtomicMeasure) -> AtomicMeasure {
        let mut atoms = self.atoms.clone();
        for b in &other.atoms {
            match atoms.iter_mut().find(|a| (a.point - b.point).norm() <= POLE_TOL) {
                Some(a) => a.mass += b.mass,
                None => atoms.push(*b),
            }
        }
        AtomicMeasure { atoms }
    }
}

impl TryFrom<Vec<([f64; 2], f64)>> for AtomicMeasure {
    type Error = DomainError;
    fn try_from(v: Vec<([f64; 2], f64)>) -> Result<Self, Self::Error> {
        Self::new(v.into_iter().map(|([re, im], m)| (Complex64::new(re, im), m)))
    }
}

impl From<AtomicMeasure> for Vec<([f64; 2], f64)> {
    fn from(m: AtomicMeasure) -> Self {
        m.atoms
            .iter()
            .map(|a| ([a.point.re, a.point.im], a.mass))
            .collect()
    }
}

fn check_off_atoms(mu: &AtomicMeasure, z: Complex64) -> Result<(), DomainError> {
    for a in &mu.atoms {
        if (z - a.point).norm() <= POLE_TOL {
            return Err(DomainError::NearPole {
                point: z,
                pole: a.point,
                tol: POLE_TOL,
            });
        }
    }
    Ok(())
}

/// `Σ aₙ (z + ζₙ)/(z − ζₙ)`, the exponent of `θ_μ`. Valid off the atoms on the
/// whole plane.
pub fn theta_exponent(mu: &AtomicMeasure, z: Complex64) -> Result<Complex64, DomainError> {
    check_off_atoms(mu, z)?;
    Ok(mu
        .atoms
        .iter()
        .map(|a| (z + a.point) / (z - a.point) * a.mass)
        .sum())
}

/// `θ_μ(z) = exp Σ aₙ (z + ζₙ)/(z − ζₙ)` for `z` in the open disc.
pub fn eval_theta(mu: &AtomicMeasure, z: Complex64) -> Result<Complex64, DomainError> {
    if z.norm() >= 1.0 {
        return Err(DomainError::OutsideDisc(z));
    }
    Ok(theta_exponent(mu, z)?.exp())
}

/// `log|θ_μ(z)| = −Σ aₙ (1 − |z|²)/|ζₙ − z|²`, computed from the Poisson kernel.
pub fn theta_log_modulus(mu: &AtomicMeasure, z: Complex64) -> Result<f64, DomainError> {
    check_off_atoms(mu, z)?;
    let mut acc = 0.0;
    for a in &mu.atoms {
        acc -= a.mass * poisson_ratio(z, a.point)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn blaschke_factor_examples() {
        assert_eq!(blaschke_factor(c(0.5, 0.0), c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
        assert_relative_eq!(blaschke_factor(c(0.5, 0.0), c(0.0, 0.0)).unwrap().re, 0.5);
        // |λ − z|/|1 − λ̄z| = 1/1.25
        let v = blaschke_factor(c(0.0, 0.5), c(0.0, -0.5)).unwrap();
        assert_relative_eq!(v.norm(), 0.8, epsilon = 1e-15);
        assert!(blaschke_factor(c(0.0, 0.0), c(0.1, 0.0)).is_err());
        assert!(blaschke_factor(c(0.5, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn beta_factor_examples() {
        let z = c(0.3, -0.2);
        assert_eq!(beta_factor(c(0.0, 0.0), z).unwrap(), z);
        assert_eq!(beta_factor(z, z).unwrap(), c(0.0, 0.0));
        assert_relative_eq!(beta_factor(c(0.5, 0.0), c(0.0, 0.0)).unwrap().re, -0.5);
        assert!(beta_factor(c(1.0, 0.0), z).is_err());
    }

    #[test]
    fn theta_examples() {
        let mu = AtomicMeasure::dirac(c(1.0, 0.0), 1.0).unwrap();
        let v = eval_theta(&mu, c(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, (-1.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(v.re, 0.367_879_441, epsilon = 1e-9);

        let (a, r) = (0.7, 0.6);
        let zeta = Complex64::from_polar(1.0, 2.0);
        let mu = AtomicMeasure::dirac(zeta, a).unwrap();
        let v = eval_theta(&mu, zeta * r).unwrap();
        assert_relative_eq!(v.norm(), (-a * (1.0 + r) / (1.0 - r)).exp(), max_relative = 1e-12);

        let mu = AtomicMeasure::dirac(c(1.0, 0.0), a).unwrap();
        let v = eval_theta(&mu, c(-r, 0.0)).unwrap();
        assert_relative_eq!(v.re, (-a * (1.0 - r) / (1.0 + r)).exp(), max_relative = 1e-12);
    }

    #[test]
    fn theta_errors_near_atoms() {
        let mu = AtomicMeasure::dirac(c(0.0, 1.0), 1.0).unwrap();
        assert!(matches!(
            theta_exponent(&mu, c(0.0, 1.0 - 1e-13)),
            Err(DomainError::NearPole { .. })
        ));
        assert!(eval_theta(&mu, c(0.0, 1.0)).is_err());
    }

    #[test]
    fn measure_validation() {
        let one = c(1.0, 0.0);
        assert!(AtomicMeasure::new([(one, 0.0)]).is_err());
        assert!(AtomicMeasure::new([(one, 1.0), (one, 2.0)]).is_err());
        assert!(AtomicMeasure::new([(c(0.5, 0.0), 1.0)]).is_err());
        let m = AtomicMeasure::new([(one, 1.0), (-one, 2.0)]).unwrap();
        assert_eq!(m.total_mass(), 3.0);
        let s = m.sum(&AtomicMeasure::dirac(one, 0.5).unwrap());
        assert_eq!(s.atoms().len(), 2);
        assert_eq!(s.total_mass(), 3.5);
    }

    #[test]
    fn measure_serde() {
        let m = AtomicMeasure::new([(c(1.0, 0.0), 0.3), (c(0.0, 1.0), 0.7)]).unwrap();
        let wire: Vec<([f64; 2], f64)> = m.clone().into();
        assert_eq!(wire[1], ([0.0, 1.0], 0.7));
        assert_eq!(AtomicMeasure::try_from(wire).unwrap(), m);
    }
}
