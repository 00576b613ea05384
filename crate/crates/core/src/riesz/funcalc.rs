//! Functional calculus for disc functions on matrices and the resolvent
//! bound on sublevel sets of `|φ|`.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{self, CMatrix};
use super::{MatrixOperator, RieszError};
use crate::complex::{serde_pair, Complex64, DomainError};
use crate::inner::DiscFunction;

/// `‖(T − λI)⁻¹‖ = 1/σ_min(T − λI)`, infinite at eigenvalues.
pub fn resolvent_norm(t: &MatrixOperator, lambda: Complex64) -> f64 {
    let s = linalg::min_singular_value(&t.shifted(lambda));
    if s <= 1e-14 * t.norm().max(1.0) {
        f64::INFINITY
    } else {
        1.0 / s
    }
}

/// `V·diag(φ(λᵢ))·V⁻¹`.
pub fn matrix_function_eigen(t: &MatrixOperator, phi: &DiscFunction) -> Result<CMatrix, RieszError> {
    let v = t
        .eigenvectors()
        .ok_or_else(|| DomainError::Parameter("matrix is not diagonalizable".into()))?;
    let values = t
        .eigenvalues()
        .iter()
        .map(|&l| if l.norm() < 1.0 { phi.eval(l) } else { phi.eval_closed(l) })
        .collect::<Result<Vec<_>, _>>()?;
    let v_inv = linalg::inverse(v).ok_or_else(|| DomainError::Parameter("singular eigenvector basis".into()))?;
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(values));
    Ok(v * d * v_inv)
}

/// `(1/2πi)∮ φ(λ)(λI − T)⁻¹ dλ` over the circle halfway between the spectral
/// radius and 1, with the trapezoid rule doubled until it settles.
pub fn matrix_function_contour(t: &MatrixOperator, phi: &DiscFunction) -> Result<CMatrix, RieszError> {
    let rho = t.eigenvalues().iter().map(|l| l.norm()).fold(0.0, f64::max);
    if rho >= 1.0 {
        return Err(DomainError::Parameter(format!("spectral radius {rho} is not below 1")).into());
    }
    let radius = 0.5 * (rho + 1.0);
    let n = t.dim();
    let trapezoid = |m: usize| -> Result<CMatrix, RieszError> {
        let mut sum = CMatrix::zeros(n, n);
        for j in 0..m {
            let z = Complex64::from_polar(radius, TAU * j as f64 / m as f64);
            let r = (-t.shifted(z)).lu().solve(&linalg::identity(n)).ok_or_else(|| {
                RieszError::Conditioning { eigenvalue: z, distance: 0.0 }
            })?;
            sum += r * (phi.eval(z)? * z);
        }
        Ok(sum / Complex64::new(m as f64, 0.0))
    };
    let mut m = 64;
    let mut prev = trapezoid(m)?;
    while m < 1 << 18 {
        m *= 2;
        let cur = trapezoid(m)?;
        if (&cur - &prev).norm() <= 1e-13 * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    let spacing = TAU * radius / m as f64;
    Err(RieszError::Accuracy { point: Complex64::new(radius, 0.0), distance: 1.0 - radius, spacing })
}

/// `φ(T)`: through eigenvalues when `T` is diagonalizable, otherwise through a
/// contour when the spectrum lies inside the disc.
pub fn matrix_function(t: &MatrixOperator, phi: &DiscFunction) -> Result<CMatrix, RieszError> {
    if t.eigenvectors().is_some() {
        matrix_function_eigen(t, phi)
    } else {
        matrix_function_contour(t, phi)
    }
}

/// `C = M(‖φ‖∞ + c)/(c(1 − c‖φ(T)⁻¹‖))`.
pub fn lemma47_constant(m: f64, phi_sup: f64, c: f64, inv_norm: f64) -> Result<f64, DomainError> {
    if !(m > 0.0 && phi_sup > 0.0 && inv_norm > 0.0 && m.is_finite() && phi_sup.is_finite() && inv_norm.is_finite()) {
        return Err(DomainError::Parameter(format!(
            "need positive finite M, ‖φ‖∞ and ‖φ(T)⁻¹‖, got {m}, {phi_sup}, {inv_norm}"
        )));
    }
    if !(c > 0.0 && c * inv_norm < 1.0) {
        return Err(DomainError::Parameter(format!("c = {c} must lie in (0, {})", 1.0 / inv_norm)));
    }
    Ok(m * (phi_sup + c) / (c * (1.0 - c * inv_norm)))
}

/// Relative gap between `(T − λI)⁻¹` and `β_λ(T)⁻¹(I − λ̄T)⁻¹`, where
/// `β_λ(T) = (T − λI)(I − λ̄T)⁻¹`.
pub fn resolvent_factorization_error(t: &MatrixOperator, lambda: Complex64) -> Result<f64, RieszError> {
    let n = t.dim();
    let singular = || RieszError::Conditioning { eigenvalue: lambda, distance: 0.0 };
    let resolvent = linalg::inverse(&t.shifted(lambda)).ok_or_else(singular)?;
    let mut cayley = -t.matrix() * lambda.conj();
    for i in 0..n {
        cayley[(i, i)] += Complex64::new(1.0, 0.0);
    }
    let cayley_inv = linalg::inverse(&cayley).ok_or_else(singular)?;
    let beta = t.shifted(lambda) * &cayley_inv;
    let beta_inv = linalg::inverse(&beta).ok_or_else(singular)?;
    let rhs = beta_inv * cayley_inv;
    Ok(linalg::spectral_norm(&(&rhs - &resolvent)) / linalg::spectral_norm(&resolvent))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventCheck {
    pub m: f64,
    pub inv_norm: f64,
    pub constant: f64,
    pub samples: usize,
    /// Largest `‖(T − λI)⁻¹‖(1 − |λ|)/(C·M)` seen; the bound holds below 1.
    pub worst_ratio: f64,
    #[serde(with = "serde_pair")]
    pub worst_point: Complex64,
    pub holds: bool,
}

/// Samples `λ` with `|φ(λ)| ≤ c` and compares `‖(T − λI)⁻¹‖` against
/// `C·M/(1 − |λ|)`.
pub fn check_resolvent_bound(
    t: &MatrixOperator,
    phi: &DiscFunction,
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<ResolventCheck, RieszError> {
    let m = t
        .polynomial_bound()
        .ok_or_else(|| RieszError::HypothesisNotMet("no polynomial bound is known for T".into()))?;
    let phi_t = matrix_function(t, phi)?;
    let inv_norm = linalg::inverse(&phi_t)
        .map(|inv| linalg::spectral_norm(&inv))
        .ok_or_else(|| RieszError::HypothesisNotMet("φ(T) is not invertible".into()))?;
    let constant = lemma47_constant(m, phi.sup_norm(), c, inv_norm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0, Complex64::new(0.0, 0.0));
    let mut found = 0;
    let mut attempts = 0;
    while found < samples && attempts < 1000 * samples.max(1) {
        attempts += 1;
        let radius = if attempts % 2 == 0 {
            rng.random::<f64>().sqrt()
        } else {
            1.0 - 10f64.powf(-rng.random_range(0.5..6.0))
        };
        let lambda = Complex64::from_polar(radius, rng.random_range(0.0..TAU));
        if phi.eval(lambda)?.norm() > c {
            continue;
        }
        found += 1;
        let ratio = resolvent_norm(t, lambda) * (1.0 - radius) / (constant * m);
        if ratio > worst.0 {
            worst = (ratio, lambda);
        }
    }
    Ok(ResolventCheck {
        m,
        inv_norm,
        constant,
        samples: found,
        worst_ratio: worst.0,
        worst_point: worst.1,
        holds: worst.0 <= 1.0,
    })
}
