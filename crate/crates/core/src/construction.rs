//! Disjoint horodiscs, summable weights and a ray-structured zero set
//! accumulating at every prescribed boundary point.

use serde::{Deserialize, Serialize};

use crate::audit::AuditConfig;
use crate::complex::{serde_pair, unimodular, Complex64, DomainError};
use crate::disc::{Horodisc, RegionSpec};
use crate::inner::{
    blaschke_lower_certificate, certify_theta, AtomicMeasure, BoundCertificate, CertificateError,
    Ray, RhoRule, ZeroSet,
};

/// Relative inflation applied to the minimal disjointness parameter.
pub const INFLATION: f64 = 1e-6;

/// Lower bounds `r_{1,n}` for the horodisc parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum FloorRule {
    /// `r_{1,n} = 1 − 2^{−n}s`.
    Geometric { s: f64 },
    Explicit { radii: Vec<f64> },
}

impl Default for FloorRule {
    fn default() -> Self {
        FloorRule::Geometric { s: 1.0 }
    }
}

impl FloorRule {
    /// `r_{1,n}` for `n ≥ 1`.
    pub fn floor(&self, n: usize) -> Option<f64> {
        match self {
            FloorRule::Geometric { s } => Some(1.0 - 0.5f64.powi(n as i32) * s),
            FloorRule::Explicit { radii } => radii.get(n - 1).copied(),
        }
    }

    /// `Σ_{n ≤ n_max} (1 − r_{1,n})`; the full series is at most `s` for the
    /// geometric rule.
    pub fn deficit(&self, n_max: usize) -> f64 {
        match self {
            FloorRule::Geometric { s } => s * (1.0 - 0.5f64.powi(n_max as i32)),
            FloorRule::Explicit { radii } => radii.iter().take(n_max).map(|r| 1.0 - r).sum(),
        }
    }

    fn validate(&self, n_max: usize) -> Result<(), DomainError> {
        match self {
            FloorRule::Geometric { s } if !(*s > 0.0 && *s < 2.0) => Err(DomainError::Parameter(
                format!("floor scale s must lie in (0,2), got {s}"),
            )),
            FloorRule::Explicit { radii } => {
                if radii.len() < n_max {
                    return Err(DomainError::Parameter(format!(
                        "{} floor radii for {n_max} contact points",
                        radii.len()
                    )));
                }
                if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                    return Err(DomainError::Parameter("floor radii must lie in (0,1)".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn default_q() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionInput {
    #[serde(with = "serde_pair::vec")]
    pub contact_points: Vec<Complex64>,
    #[serde(default)]
    pub floor: FloorRule,
    /// Ratio `q` of the master sequence `ρ_m = 1 − q^m`.
    #[serde(default = "default_q")]
    pub rho_base: f64,
}

impl ConstructionInput {
    pub fn new(contact_points: Vec<Complex64>, floor: FloorRule, rho_base: f64) -> Self {
        Self { contact_points, floor, rho_base }
    }

    fn validated_points(&self, n_max: usize) -> Result<Vec<Complex64>, DomainError> {
        if n_max == 0 || n_max > self.contact_points.len() {
            return Err(DomainError::Parameter(format!(
                "n_max must lie in 1..={}, got {n_max}",
                self.contact_points.len()
            )));
        }
        if !(self.rho_base > 0.0 && self.rho_base < 1.0) {
            return Err(DomainError::Parameter(format!(
                "rho_base must lie in (0,1), got {}",
                self.rho_base
            )));
        }
        self.floor.validate(n_max)?;
        let pts = self.contact_points[..n_max]
            .iter()
            .map(|&z| unimodular(z))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, a) in pts.iter().enumerate() {
            if pts[..i].iter().any(|b| (a - b).norm() <= 1e-12) {
                return Err(DomainError::Parameter(format!("repeated contact point {a}")));
            }
        }
        Ok(pts)
    }
}

/// Smallest `r` with `clos D(rζ)` disjoint from `clos D(r_l ζ_l)`; values at
/// or below it touch or overlap.
pub fn disjointness_radius(zeta: Complex64, other: &Horodisc) -> f64 {
    let rl = other.r();
    let cos = (zeta * other.contact().conj()).re;
    2.0 * (1.0 - rl) / (2.0 - rl * (1.0 + cos))
}

fn inflate(r: f64) -> f64 {
    (r * (1.0 + INFLATION)).min(0.5 * (r + 1.0))
}

/// Greedy parameters `rₙ = max(r_{1,n}, inflated disjointness radius)` in
/// input order.
pub fn build_radii(input: &ConstructionInput, n_max: usize) -> Result<Vec<f64>, DomainError> {
    let pts = input.validated_points(n_max)?;
    let mut discs: Vec<Horodisc> = Vec::with_capacity(n_max);
    for (i, &zeta) in pts.iter().enumerate() {
        let floor = input.floor.floor(i + 1).expect("validated length");
        let needed = discs
            .iter()
            .map(|h| disjointness_radius(zeta, h))
            .fold(f64::NEG_INFINITY, f64::max);
        let mut r = if needed.is_finite() { floor.max(inflate(needed)) } else { floor };
        // Guard against rounding in the closed form.
        loop {
            let h = Horodisc::new(zeta, r)?;
            if discs.iter().all(|d| d.closures_disjoint(&h)) {
                discs.push(h);
                break;
            }
            r = inflate(r);
        }
    }
    Ok(discs.iter().map(Horodisc::r).collect())
}

/// `aₙ = 2^{−n}(1−rₙ)/rₙ`, so that `Σ aₙrₙ/(1−rₙ) = Σ 2^{−n} < 1`.
pub fn build_weights(radii: &[f64]) -> Vec<f64> {
    radii
        .iter()
        .enumerate()
        .map(|(i, r)| 0.5f64.powi(i as i32 + 1) * (1.0 - r) / r)
        .collect()
}

/// Deals the master sequence round-robin over the contact points and keeps
/// `ρ ≥ rₙ` on the n-th ray.
pub fn build_zero_set(input: &ConstructionInput, radii: &[f64]) -> Result<ZeroSet, DomainError> {
    let pts = input.validated_points(radii.len())?;
    let rule = RhoRule::Geometric { q: input.rho_base };
    let rays = pts
        .iter()
        .zip(radii)
        .enumerate()
        .map(|(i, (&zeta, &r))| Ray::new(zeta, rule.clone(), pts.len(), i, r))
        .collect::<Result<Vec<_>, _>>()?;
    ZeroSet::from_rays(rays)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionOutput {
    pub radii: Vec<f64>,
    pub weights: Vec<f64>,
    pub measure: AtomicMeasure,
    pub zeros: ZeroSet,
    pub region: RegionSpec,
    /// `Σ aₙrₙ/(1−rₙ)`.
    pub weighted_sum: f64,
    /// `Σ (1 − r_{1,n})` over the floors used.
    pub floor_deficit: f64,
    /// `Σ (1 − rₙ)`.
    pub deficit: f64,
}

impl ConstructionOutput {
    pub fn horodiscs(&self) -> Vec<Horodisc> {
        self.region.excluded()
    }
}

/// Runs the three builders on the first `n_max` contact points.
pub fn construct(input: &ConstructionInput, n_max: usize) -> Result<ConstructionOutput, DomainError> {
    let radii = build_radii(input, n_max)?;
    let weights = build_weights(&radii);
    let pts = input.validated_points(n_max)?;
    let measure = AtomicMeasure::new(pts.iter().copied().zip(weights.iter().copied()))?;
    let zeros = build_zero_set(input, &radii)?;
    let discs = pts
        .iter()
        .zip(&radii)
        .map(|(&z, &r)| Horodisc::new(z, r))
        .collect::<Result<Vec<_>, _>>()?;
    let region = RegionSpec::horodisc_complement(discs)?;
    let weighted_sum = weights.iter().zip(&radii).map(|(a, r)| a * r / (1.0 - r)).sum();
    Ok(ConstructionOutput {
        deficit: radii.iter().map(|r| 1.0 - r).sum(),
        floor_deficit: input.floor.deficit(n_max),
        radii,
        weights,
        measure,
        zeros,
        region,
        weighted_sum,
    })
}

/// Certificates for `inf_G |θ_μ|` and `inf_G |B|`, the latter with the
/// caller's separation constant `c`.
pub fn certify_construction(
    out: &ConstructionOutput,
    c: f64,
    cfg: &AuditConfig,
) -> Result<(BoundCertificate, BoundCertificate), CertificateError> {
    let theta = certify_theta(&out.measure, &out.region, cfg)?;
    let blaschke = blaschke_lower_certificate(&out.zeros, c, &out.region, cfg)?;
    Ok((theta, blaschke))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::cis;
    use crate::inner::interpolating_check;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    fn explicit(radii: &[f64]) -> FloorRule {
        FloorRule::Explicit { radii: radii.to_vec() }
    }

    #[test]
    fn radii_examples() {
        let input = ConstructionInput::new(vec![ONE, Complex64::i()], explicit(&[0.9, 0.9]), 0.5);
        assert_eq!(build_radii(&input, 2).unwrap(), vec![0.9, 0.9]);

        let input = ConstructionInput::new(vec![ONE], explicit(&[0.3]), 0.5);
        assert_eq!(build_radii(&input, 1).unwrap(), vec![0.3]);

        let input = ConstructionInput::new(vec![ONE, cis(0.01)], explicit(&[0.5, 0.5]), 0.5);
        let r = build_radii(&input, 2).unwrap();
        assert!(r[1] > 0.5);
        let (a, b) = (Horodisc::new(ONE, r[0]).unwrap(), Horodisc::new(cis(0.01), r[1]).unwrap());
        assert!(a.closures_disjoint(&b));
        let exact = disjointness_radius(cis(0.01), &a);
        assert!(r[1] > exact && r[1] <= exact * (1.0 + 2.0 * INFLATION));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(build_weights(&[0.5]), vec![0.5]);
        let w = build_weights(&[0.9, 0.9]);
        assert!((w[0] - 1.0 / 18.0).abs() < 1e-15 && (w[1] - 1.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn zero_set_examples() {
        let input = ConstructionInput::new(vec![ONE], explicit(&[0.5]), 0.5);
        let zs = build_zero_set(&input, &[0.5]).unwrap();
        let first: Vec<f64> = zs.rays[0].radii().take(3).map(|(_, r)| r).collect();
        assert_eq!(first, vec![0.5, 0.75, 0.875]);

        let input = ConstructionInput::new(vec![ONE, -ONE], explicit(&[0.1, 0.1]), 0.5);
        let zs = build_zero_set(&input, &[0.1, 0.1]).unwrap();
        let m0: Vec<usize> = zs.rays[0].radii().take(3).map(|(m, _)| m).collect();
        let m1: Vec<usize> = zs.rays[1].radii().take(3).map(|(m, _)| m).collect();
        assert_eq!((m0, m1), (vec![1, 3, 5], vec![2, 4, 6]));
        assert!(interpolating_check(&zs).holds());

        let input = ConstructionInput::new(vec![ONE], explicit(&[0.99]), 0.5);
        let zs = build_zero_set(&input, &[0.99]).unwrap();
        assert_eq!(zs.rays[0].first_index(), Some(7));
    }

    #[test]
    fn construction_and_certificates() {
        let input = ConstructionInput::new(vec![ONE, Complex64::i()], explicit(&[0.9, 0.9]), 0.5);
        let out = construct(&input, 2).unwrap();
        assert!(out.weighted_sum <= 1.0);
        let (theta, blaschke) = certify_construction(&out, 0.5, &AuditConfig::new(10_000, 9)).unwrap();
        assert!((theta.lower_bound - (-0.75f64).exp()).abs() < 1e-12);
        assert!(blaschke.audit.min_modulus >= blaschke.lower_bound);
    }

    #[test]
    fn single_atom_certificate() {
        let input = ConstructionInput::new(vec![ONE], explicit(&[0.5]), 0.5);
        let out = construct(&input, 1).unwrap();
        assert_eq!(out.weights, vec![0.5]);
        let (theta, _) = certify_construction(&out, 0.1, &AuditConfig::new(2000, 1)).unwrap();
        assert!((theta.lower_bound - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let input = ConstructionInput::new(vec![ONE, ONE], FloorRule::default(), 0.5);
        assert!(build_radii(&input, 2).is_err());
        let input = ConstructionInput::new(vec![ONE], FloorRule::default(), 1.0);
        assert!(build_radii(&input, 1).is_err());
        assert!(build_radii(&input, 0).is_err());
    }
}
