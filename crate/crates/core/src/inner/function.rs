use serde::{Deserialize, Serialize};

use super::{eval_blaschke, eval_theta, factor_unchecked, theta_exponent, AtomicMeasure, InnerError, ZeroSet};
use crate::complex::{serde_pair, Complex64, DomainError};

fn default_tol() -> f64 {
    1e-12
}

/// A bounded analytic function on the disc, chosen from the inner functions
/// this crate evaluates, plus the disc automorphism `β_λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DiscFunction {
    Theta { measure: AtomicMeasure },
    Blaschke {
        zeros: ZeroSet,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    BlaschkeFactor {
        #[serde(with = "serde_pair")]
        lambda: Complex64,
    },
    Beta {
        #[serde(with = "serde_pair")]
        lambda: Complex64,
    },
}

impl DiscFunction {
    pub fn theta(measure: AtomicMeasure) -> Self {
        DiscFunction::Theta { measure }
    }

    pub fn blaschke(zeros: ZeroSet) -> Self {
        DiscFunction::Blaschke { zeros, tol: default_tol() }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        match self {
            DiscFunction::Theta { .. } => Ok(()),
            DiscFunction::Blaschke { zeros, tol } => {
                if !(*tol > 0.0) {
                    return Err(DomainError::Parameter(format!("tolerance must be positive, got {tol}")));
                }
                zeros.validate()
            }
            DiscFunction::BlaschkeFactor { lambda } => {
                if lambda.norm() == 0.0 {
                    return Err(DomainError::Parameter("b_0 is undefined".into()));
                }
                if lambda.norm() >= 1.0 {
                    return Err(DomainError::OutsideDisc(*lambda));
                }
                Ok(())
            }
            DiscFunction::Beta { lambda } => {
                if lambda.norm() >= 1.0 {
                    return Err(DomainError::OutsideDisc(*lambda));
                }
                Ok(())
            }
        }
    }

    /// Value at `z` in the open disc.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, InnerError> {
        self.validate()?;
        match self {
            DiscFunction::Theta { measure } => Ok(eval_theta(measure, z)?),
            DiscFunction::Blaschke { zeros, tol } => Ok(eval_blaschke(zeros, z, *tol)?.value),
            _ => {
                if z.norm() >= 1.0 {
                    return Err(DomainError::OutsideDisc(z).into());
                }
                self.eval_closed(z)
            }
        }
    }

    /// Value at `z` in the closed disc, off the singular support.
    ///
    /// Blaschke products with infinitely many zeros are only evaluated inside.
    pub fn eval_closed(&self, z: Complex64) -> Result<Complex64, InnerError> {
        self.validate()?;
        if z.norm() > 1.0 + 1e-12 {
            return Err(DomainError::OutsideDisc(z).into());
        }
        match self {
            DiscFunction::Theta { measure } => Ok(theta_exponent(measure, z)?.exp()),
            DiscFunction::Blaschke { zeros, tol } => {
                if z.norm() < 1.0 {
                    return Ok(eval_blaschke(zeros, z, *tol)?.value);
                }
                if zeros.rays.iter().any(|r| !r.is_finite()) {
                    return Err(DomainError::OutsideDisc(z).into());
                }
                let finite = zeros.zeros.iter().copied().chain(zeros.rays.iter().flat_map(|r| r.zeros().collect::<Vec<_>>()));
                Ok(finite.map(|l| factor_unchecked(l, l.norm(), z)).product())
            }
            DiscFunction::BlaschkeFactor { lambda } => Ok(factor_unchecked(*lambda, lambda.norm(), z)),
            DiscFunction::Beta { lambda } => {
                Ok((z - lambda) / (Complex64::new(1.0, 0.0) - lambda.conj() * z))
            }
        }
    }

    /// `sup_D |φ|`.
    pub fn sup_norm(&self) -> f64 {
        1.0
    }

    /// Zeros of `φ` in the disc in increasing modulus, at most `limit` of them.
    pub fn zeros(&self, limit: usize) -> Vec<Complex64> {
        match self {
            DiscFunction::Theta { .. } => Vec::new(),
            DiscFunction::BlaschkeFactor { lambda } | DiscFunction::Beta { lambda } => vec![*lambda],
            DiscFunction::Blaschke { zeros, .. } => {
                let mut all: Vec<Complex64> = zeros.zeros.clone();
                for ray in &zeros.rays {
                    all.extend(ray.zeros().take(limit));
                }
                all.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
                all.truncate(limit);
                all
            }
        }
    }
}
