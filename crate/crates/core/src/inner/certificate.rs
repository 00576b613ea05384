use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{eval_blaschke, theta_log_modulus, AtomicMeasure, InnerError, ZeroSet};
use crate::audit::{argmin, evaluate, sample_region, AuditConfig, AuditSummary};
use crate::complex::{Complex64, DomainError};
use crate::disc::{Horodisc, RegionSpec};

/// Relative accuracy requested from truncated Blaschke products during audits.
const AUDIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    /// `|θ_μ| ≥ exp(rμ(E)/(r−1))` with one `r` for every excluded horodisc.
    ThetaLemma12,
    /// `|θ_μ| ≥ exp(−Σ aₙrₙ/(1−rₙ))` with the parameter of each atom's own horodisc.
    ThetaPerAtom,
    /// `|B| ≥ c/3` off the horodiscs `D(λ)`.
    BlaschkeEinterb,
}

/// A lower bound for `|f|` on a region, backed by a sampling audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub kind: CertificateKind,
    pub region: RegionSpec,
    pub lower_bound: f64,
    pub audit: AuditSummary,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error("{kind:?} refuted at {witness}: modulus {modulus:e} below bound {lower_bound:e}")]
    Refuted {
        kind: CertificateKind,
        lower_bound: f64,
        witness: Complex64,
        modulus: f64,
    },
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Inner(#[from] InnerError),
}

impl CertificateError {
    pub fn witness(&self) -> Option<Complex64> {
        match self {
            CertificateError::Refuted { witness, .. } => Some(*witness),
            _ => None,
        }
    }
}

/// Samples the region (plus injected points) and checks `|f| ≥ bound − τ`.
///
/// `f` returns a modulus and an error bound on it; a point refutes only when
/// the bound is missed even after the error is added back.
fn audit<F>(
    kind: CertificateKind,
    region: &RegionSpec,
    bound: f64,
    cfg: &AuditConfig,
    f: F,
) -> Result<BoundCertificate, CertificateError>
where
    F: Fn(Complex64) -> Result<(f64, f64), CertificateError> + Sync,
{
    let mut points = sample_region(region, cfg.samples, &mut cfg.rng());
    let sample_count = points.len();
    points.extend_from_slice(&cfg.injected);
    if points.is_empty() {
        return Err(CertificateError::Precondition("no audit points in the region".into()));
    }
    let values = evaluate(&points, &f)?;
    for (z, &(m, err)) in points.iter().zip(&values) {
        if m + err < bound - cfg.tau_cert {
            return Err(CertificateError::Refuted {
                kind,
                lower_bound: bound,
                witness: *z,
                modulus: m,
            });
        }
    }
    let moduli: Vec<f64> = values.iter().map(|v| v.0).collect();
    let i = argmin(&moduli).expect("nonempty");
    Ok(BoundCertificate {
        kind,
        region: region.clone(),
        lower_bound: bound,
        audit: AuditSummary {
            min_modulus: moduli[i],
            argmin: points[i],
            sample_count,
            injected_count: cfg.injected.len(),
        },
    })
}

/// The common-parameter bound `exp(rμ(E)/(r−1))` on the complement of the
/// given horodiscs.
pub fn theta_lower_certificate(
    mu: &AtomicMeasure,
    horodiscs: &[Horodisc],
    cfg: &AuditConfig,
) -> Result<BoundCertificate, CertificateError> {
    if let Some(h) = horodiscs.first() {
        if horodiscs.iter().any(|g| (g.r() - h.r()).abs() > 1e-15) {
            return Err(CertificateError::Precondition(
                "horodiscs must share one parameter r".into(),
            ));
        }
    }
    let region = RegionSpec::horodisc_complement(horodiscs.to_vec())?;
    let mut cert = certify_theta(mu, &region, cfg)?;
    cert.kind = CertificateKind::ThetaLemma12;
    Ok(cert)
}

/// The per-atom bound `exp(−Σ aₙrₙ/(1−rₙ))`, where `rₙ` is the parameter of the
/// excluded horodisc touching the circle at the atom `ζₙ`.
///
/// Every atom must be the contact point of an excluded horodisc.
pub fn certify_theta(
    mu: &AtomicMeasure,
    region: &RegionSpec,
    cfg: &AuditConfig,
) -> Result<BoundCertificate, CertificateError> {
    let excluded = region.excluded();
    let mut exponent = 0.0;
    for atom in mu.atoms() {
        let h = excluded
            .iter()
            .find(|h| (h.contact() - atom.point).norm() <= 1e-12)
            .ok_or_else(|| {
                CertificateError::Precondition(format!(
                    "atom at {} has no excluded horodisc",
                    atom.point
                ))
            })?;
        exponent += atom.mass * h.threshold();
    }
    let bound = (-exponent).exp();
    let common = excluded.windows(2).all(|w| w[0].r() == w[1].r());
    let kind = if common {
        CertificateKind::ThetaLemma12
    } else {
        CertificateKind::ThetaPerAtom
    };
    audit(kind, region, bound, cfg, |z| {
        let log = theta_log_modulus(mu, z)?;
        // The log-domain value is accurate to a few ulps of the exponent.
        Ok((log.exp(), log.exp() * 1e-13 * log.abs().max(1.0)))
    })
}

/// `|B_Λ| ≥ c/3` on the region, where `c` is the caller's separation constant.
///
/// Every `D(λ)` must lie inside one of the excluded horodiscs.
pub fn blaschke_lower_certificate(
    zeros: &ZeroSet,
    c: f64,
    region: &RegionSpec,
    cfg: &AuditConfig,
) -> Result<BoundCertificate, CertificateError> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(DomainError::Parameter(format!("separation constant must lie in (0,1], got {c}")).into());
    }
    zeros.validate()?;
    let excluded = region.excluded();
    let covered = |lambda: Complex64| excluded.iter().any(|h| h.contains_disc_of(lambda));
    let firsts = zeros.zeros.iter().copied().chain(zeros.rays.iter().filter_map(|r| r.first_zero()));
    for lambda in firsts {
        if !covered(lambda) {
            return Err(CertificateError::Precondition(format!(
                "D({lambda}) is not inside an excluded horodisc"
            )));
        }
    }
    audit(CertificateKind::BlaschkeEinterb, region, c / 3.0, cfg, |z| {
        let v = eval_blaschke(zeros, z, AUDIT_TOL)?;
        Ok((v.value.norm(), v.abs_error))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::{Ray, RhoRule};

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn theta_bound_values() {
        let mu = AtomicMeasure::dirac(ONE, 1.0).unwrap();
        let h = Horodisc::new(ONE, 0.5).unwrap();
        let cert = theta_lower_certificate(&mu, &[h], &AuditConfig::new(2000, 1)).unwrap();
        assert!((cert.lower_bound - (-1.0f64).exp()).abs() < 1e-15);
        assert!(cert.audit.min_modulus >= cert.lower_bound - 1e-9);

        let empty = AtomicMeasure::default();
        let cert = theta_lower_certificate(&empty, &[h], &AuditConfig::new(100, 1)).unwrap();
        assert_eq!(cert.lower_bound, 1.0);
    }

    #[test]
    fn theta_two_atoms() {
        let mu = AtomicMeasure::new([(ONE, 0.3), (Complex64::i(), 0.7)]).unwrap();
        let hs = [Horodisc::new(ONE, 0.9).unwrap(), Horodisc::new(Complex64::i(), 0.9).unwrap()];
        let cert = theta_lower_certificate(&mu, &hs, &AuditConfig::new(10_000, 5)).unwrap();
        assert_eq!(cert.audit.sample_count, 10_000);
        assert!((cert.lower_bound - (-9.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn injected_point_inside_horodisc_refutes() {
        let mu = AtomicMeasure::dirac(ONE, 1.0).unwrap();
        let h = Horodisc::new(ONE, 0.5).unwrap();
        let cfg = AuditConfig::new(100, 1).with_injected(vec![Complex64::new(0.95, 0.0)]);
        let err = theta_lower_certificate(&mu, &[h], &cfg).unwrap_err();
        assert_eq!(err.witness(), Some(Complex64::new(0.95, 0.0)));
    }

    #[test]
    fn theta_precondition() {
        let mu = AtomicMeasure::dirac(Complex64::i(), 1.0).unwrap();
        let h = Horodisc::new(ONE, 0.5).unwrap();
        assert!(matches!(
            theta_lower_certificate(&mu, &[h], &AuditConfig::new(10, 1)),
            Err(CertificateError::Precondition(_))
        ));
    }

    #[test]
    fn blaschke_single_zero() {
        let zeros = ZeroSet::finite(vec![Complex64::new(0.5, 0.0)]).unwrap();
        let region = RegionSpec::horodisc_complement(vec![Horodisc::new(ONE, 0.5).unwrap()]).unwrap();
        let cert = blaschke_lower_certificate(&zeros, 1.0, &region, &AuditConfig::new(5000, 2)).unwrap();
        assert!((cert.lower_bound - 1.0 / 3.0).abs() < 1e-15);
        assert!(cert.audit.min_modulus >= 1.0 / 3.0 - 1e-12);

        let cert = blaschke_lower_certificate(&ZeroSet::default(), 0.6, &region, &AuditConfig::new(50, 2)).unwrap();
        assert_eq!(cert.audit.min_modulus, 1.0);
        assert!((cert.lower_bound - 0.2).abs() < 1e-15);
    }

    #[test]
    fn blaschke_ray_inside_horodisc() {
        let ray = Ray::new(ONE, RhoRule::Geometric { q: 0.5 }, 1, 0, 0.9).unwrap();
        let zeros = ZeroSet::from_rays(vec![ray]).unwrap();
        let region = RegionSpec::horodisc_complement(vec![Horodisc::new(ONE, 0.9).unwrap()]).unwrap();
        let cert = blaschke_lower_certificate(&zeros, 0.5, &region, &AuditConfig::new(10_000, 3)).unwrap();
        assert!((cert.lower_bound - 1.0 / 6.0).abs() < 1e-15);

        let loose = ZeroSet::finite(vec![Complex64::new(0.5, 0.0)]).unwrap();
        assert!(matches!(
            blaschke_lower_certificate(&loose, 0.5, &region, &AuditConfig::new(10, 3)),
            Err(CertificateError::Precondition(_))
        ));
    }
}
