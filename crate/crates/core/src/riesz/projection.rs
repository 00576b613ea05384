//! Weighted Riesz projections `A = (1/2πi)∮_Γ p(λ)(T − λI)⁻¹ dλ` and the
//! kernel splitting they induce.

use serde::{Deserialize, Serialize};

use super::linalg::{self, CMatrix};
use super::quadrature::GL_ORDER;
use super::{contour_integral, serde_matrix, ContourCurve, MatrixOperator, RieszError, H_MIN};
use crate::complex::{serde_pair, Complex64};

/// Relative self-consistency target for adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// Closest a spectral point may sit to a contour.
fn min_resolvable() -> f64 {
    10.0 * H_MIN / GL_ORDER as f64
}

/// `(1/2πi)∮_Γ p(λ)/(ξ − λ) dλ`, which is `−p(ξ)` inside `Ω_Γ` and 0 outside.
pub fn scalar_cauchy(curve: &ContourCurve, k: u32, xi: Complex64) -> Result<Complex64, RieszError> {
    let dist = curve.distance(xi);
    let integral = contour_integral(curve, dist, xi, QUAD_TOL, |z| {
        CMatrix::from_element(1, 1, curve.weight(k, z) / (xi - z))
    })?;
    Ok(integral.value[(0, 0)])
}

fn nearest_eigenvalue(t: &MatrixOperator, curve: &ContourCurve) -> (Complex64, f64) {
    t.eigenvalues()
        .iter()
        .map(|&l| (l, curve.distance(l)))
        .fold((Complex64::new(f64::NAN, 0.0), f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}

fn weighted_integral(t: &MatrixOperator, curve: &ContourCurve, k: u32) -> Result<(CMatrix, f64), RieszError> {
    let (eigenvalue, distance) = nearest_eigenvalue(t, curve);
    let conditioning = RieszError::Conditioning { eigenvalue, distance };
    if distance <= min_resolvable() {
        return Err(conditioning);
    }
    let n = t.dim();
    let integral = contour_integral(curve, distance, eigenvalue, QUAD_TOL, |z| {
        let r = t.shifted(z).lu().solve(&linalg::identity(n));
        r.unwrap_or_else(|| CMatrix::from_element(n, n, Complex64::new(f64::NAN, 0.0))) * curve.weight(k, z)
    })
    .map_err(|_| conditioning.clone())?;
    if integral.value.iter().any(|z| !z.is_finite()) {
        return Err(conditioning);
    }
    Ok((integral.value, integral.change))
}

/// `A = (1/2πi)∮_Γ p(λ)(T − λI)⁻¹ dλ` with `p(λ) = (λ − ζ_{Γ1})^k (λ − ζ_{Γ2})^k`.
pub fn riesz_weighted(t: &MatrixOperator, curve: &ContourCurve, k: u32) -> Result<CMatrix, RieszError> {
    weighted_integral(t, curve, k).map(|(a, _)| a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitOptions {
    pub tau_split: f64,
    /// Singular values below this fraction of the largest count as zero.
    pub kernel_tol: f64,
    /// Slack allowed when testing restricted eigenvalues against `Ω`.
    pub eig_tol: f64,
}

impl Default for SplitOptions {
    fn default() -> Self {
        Self { tau_split: 1e-8, kernel_tol: 1e-10, eig_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDiagnostics {
    pub norm_a: f64,
    pub norm_a_prime: f64,
    /// `‖AA′‖/(‖A‖‖A′‖)`, and likewise below.
    pub aa_prime: f64,
    pub a_prime_a: f64,
    /// `‖AT − TA‖/(‖A‖‖T‖)`.
    pub commutator: f64,
    pub commutator_prime: f64,
    pub quadrature_change: f64,
    pub invariance_residual: f64,
    pub invariance_residual_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitResult {
    #[serde(with = "serde_matrix")]
    pub a: CMatrix,
    #[serde(with = "serde_matrix")]
    pub a_prime: CMatrix,
    /// Orthonormal basis of `M = ker A`, as columns.
    #[serde(with = "serde_matrix")]
    pub kernel: CMatrix,
    #[serde(with = "serde_matrix")]
    pub kernel_prime: CMatrix,
    #[serde(with = "serde_pair::vec")]
    pub spectrum: Vec<Complex64>,
    #[serde(with = "serde_pair::vec")]
    pub spectrum_prime: Vec<Complex64>,
    pub diagnostics: SplitDiagnostics,
}

/// Points of `a` away from every contact point of either curve that fail to
/// lie outside `b` and `Ω_b`.
fn overlap(a: &ContourCurve, b: &ContourCurve) -> Option<Complex64> {
    let contacts: Vec<Complex64> = a.contacts().into_iter().chain(b.contacts()).collect();
    a.sample(0.01)
        .into_iter()
        .filter(|z| contacts.iter().all(|c| (z - c).norm() > 1e-3))
        .find(|&z| b.winding_number(z) != Some(0))
}

fn relative(x: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        x / scale
    } else {
        0.0
    }
}

fn restricted_spectrum(t: &MatrixOperator, basis: &CMatrix) -> Vec<Complex64> {
    if basis.ncols() == 0 {
        return Vec::new();
    }
    linalg::eigenvalues(&(basis.adjoint() * t.matrix() * basis))
}

/// Splits `T` with the curves `Γ`, `Γ′`: computes `A`, `A′`, their kernels and
/// the spectra of `T` restricted to them.
pub fn split(
    t: &MatrixOperator,
    gamma: &ContourCurve,
    gamma_prime: &ContourCurve,
    k: u32,
    opts: &SplitOptions,
) -> Result<SplitResult, RieszError> {
    for (a, b) in [(gamma, gamma_prime), (gamma_prime, gamma)] {
        if let Some(z) = overlap(a, b) {
            return Err(RieszError::SeparationViolation(format!(
                "{z} on one curve lies on or inside the other"
            )));
        }
    }
    for (name, curve) in [("Γ", gamma), ("Γ′", gamma_prime)] {
        let (eigenvalue, distance) = nearest_eigenvalue(t, curve);
        if distance <= min_resolvable() {
            return Err(RieszError::Conditioning { eigenvalue, distance });
        }
        if !t.eigenvalues().iter().any(|&l| curve.encloses(l)) {
            return Err(RieszError::HypothesisNotMet(format!("no eigenvalue of T lies inside {name}")));
        }
    }
    let (a, change) = weighted_integral(t, gamma, k)?;
    let (a_prime, change_prime) = weighted_integral(t, gamma_prime, k)?;
    let tm = t.matrix();
    let (na, nap) = (linalg::spectral_norm(&a), linalg::spectral_norm(&a_prime));
    let diagnostics = SplitDiagnostics {
        norm_a: na,
        norm_a_prime: nap,
        aa_prime: relative(linalg::spectral_norm(&(&a * &a_prime)), na * nap),
        a_prime_a: relative(linalg::spectral_norm(&(&a_prime * &a)), na * nap),
        commutator: relative(linalg::spectral_norm(&(&a * tm - tm * &a)), na * t.norm()),
        commutator_prime: relative(linalg::spectral_norm(&(&a_prime * tm - tm * &a_prime)), nap * t.norm()),
        quadrature_change: change.max(change_prime),
        invariance_residual: 0.0,
        invariance_residual_prime: 0.0,
    };
    let worst = [diagnostics.aa_prime, diagnostics.a_prime_a, diagnostics.commutator, diagnostics.commutator_prime]
        .into_iter()
        .fold(0.0, f64::max);
    if worst > opts.tau_split {
        return Err(RieszError::SeparationViolation(format!(
            "relative product or commutator norm {worst:e} exceeds {:e}",
            opts.tau_split
        )));
    }
    let kernel = linalg::kernel_basis(&a, opts.kernel_tol);
    let kernel_prime = linalg::kernel_basis(&a_prime, opts.kernel_tol);
    let spectrum = restricted_spectrum(t, &kernel);
    let spectrum_prime = restricted_spectrum(t, &kernel_prime);
    for (name, spec, curve) in [("M", &spectrum, gamma), ("M′", &spectrum_prime, gamma_prime)] {
        if let Some(l) = spec.iter().find(|&&l| curve.encloses(l) && curve.distance(l) > opts.eig_tol) {
            return Err(RieszError::SeparationViolation(format!(
                "restricted spectrum on {name} contains {l}, inside its curve"
            )));
        }
    }
    let diagnostics = SplitDiagnostics {
        invariance_residual: linalg::invariance_residual(tm, &kernel),
        invariance_residual_prime: linalg::invariance_residual(tm, &kernel_prime),
        ..diagnostics
    };
    Ok(SplitResult { a, a_prime, kernel, kernel_prime, spectrum, spectrum_prime, diagnostics })
}
