use serde::{Deserialize, Serialize};

use super::{factor_unchecked, InnerError, POLE_TOL};
use crate::complex::{serde_pair, unimodular, Complex64, DomainError};

/// Hard cap on the number of factors taken from a single ray.
const MAX_RAY_TERMS: usize = 10_000_000;

/// Radii `ρ_m` (m = 1, 2, …) of a master sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RhoRule {
    /// `ρ_m = 1 − q^m`.
    Geometric { q: f64 },
    /// `ρ_m = 1 − 1/(m+1)`. Not a Blaschke sequence.
    Harmonic,
    /// A finite nondecreasing list.
    Explicit { radii: Vec<f64> },
}

impl RhoRule {
    fn validate(&self) -> Result<(), DomainError> {
        match self {
            RhoRule::Geometric { q } if !(*q > 0.0 && *q < 1.0) => Err(DomainError::Parameter(
                format!("geometric ratio must lie in (0,1), got {q}"),
            )),
            RhoRule::Explicit { radii } => {
                if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                    return Err(DomainError::Parameter("explicit radii must lie in (0,1)".into()));
                }
                if radii.windows(2).any(|w| w[1] < w[0]) {
                    return Err(DomainError::Parameter("explicit radii must be nondecreasing".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `ρ_m` for `m ≥ 1`, or `None` past the end of a finite list.
    pub fn rho(&self, m: usize) -> Option<f64> {
        match self {
            RhoRule::Geometric { q } => Some(1.0 - q.powi(m as i32)),
            RhoRule::Harmonic => Some(1.0 - 1.0 / (m as f64 + 1.0)),
            RhoRule::Explicit { radii } => radii.get(m - 1).copied(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RhoRule::Explicit { .. })
    }
}

/// The master sequence shared by the rays of a construction.
pub type MasterSequence = RhoRule;

fn one() -> usize {
    1
}

/// Zeros `ρ_m ζ` for the master indices `m` of one round-robin class, keeping
/// only `ρ_m ≥ floor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    #[serde(with = "serde_pair")]
    pub contact_point: Complex64,
    pub rho_rule: RhoRule,
    #[serde(default = "one")]
    pub classes: usize,
    #[serde(default)]
    pub class: usize,
    #[serde(default)]
    pub floor: f64,
}

impl Ray {
    /// Every master index on the ray.
    pub fn full(contact: Complex64, rule: RhoRule) -> Result<Self, DomainError> {
        Self::new(contact, rule, 1, 0, 0.0)
    }

    pub fn new(
        contact: Complex64,
        rule: RhoRule,
        classes: usize,
        class: usize,
        floor: f64,
    ) -> Result<Self, DomainError> {
        let ray = Ray {
            contact_point: unimodular(contact)?,
            rho_rule: rule,
            classes,
            class,
            floor,
        };
        ray.validate()?;
        Ok(ray)
    }

    fn validate(&self) -> Result<(), DomainError> {
        unimodular(self.contact_point)?;
        self.rho_rule.validate()?;
        if self.classes == 0 || self.class >= self.classes {
            return Err(DomainError::Parameter(format!(
                "class {} out of range for {} classes",
                self.class, self.classes
            )));
        }
        if !(0.0..1.0).contains(&self.floor) {
            return Err(DomainError::Parameter(format!("floor {} outside [0,1)", self.floor)));
        }
        Ok(())
    }

    /// First master index of this class with `ρ_m ≥ floor`.
    pub fn first_index(&self) -> Option<usize> {
        let mut m = self.class + 1;
        if let RhoRule::Geometric { q } = self.rho_rule {
            // Jump close to the solution of 1 − q^m ≥ floor before stepping.
            if self.floor > 0.0 {
                let target = ((1.0 - self.floor).ln() / q.ln()).floor() as usize;
                let step = self.classes;
                if target > m + step {
                    m += ((target - m) / step).saturating_sub(1) * step;
                }
            }
        }
        loop {
            let rho = self.rho_rule.rho(m)?;
            if rho >= self.floor {
                return Some(m);
            }
            m += self.classes;
        }
    }

    /// Retained `(m, ρ_m)` pairs in increasing order.
    pub fn radii(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let start = self.first_index();
        let step = self.classes;
        std::iter::successors(start, move |&m| Some(m + step))
            .map_while(move |m| self.rho_rule.rho(m).map(|r| (m, r)))
    }

    pub fn zeros(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.radii().map(move |(_, r)| self.contact_point * r)
    }

    pub fn first_zero(&self) -> Option<Complex64> {
        self.zeros().next()
    }

    pub fn is_finite(&self) -> bool {
        self.rho_rule.is_finite()
    }

    /// `Σ (1 − ρ_m)` over retained indices `m > after` (all of them for `None`).
    /// Infinite for a harmonic ray.
    fn tail_mass(&self, after: Option<usize>) -> f64 {
        let next = match after {
            Some(m) => Some(m + self.classes),
            None => self.first_index(),
        };
        let Some(next) = next else { return 0.0 };
        match &self.rho_rule {
            RhoRule::Geometric { q } => q.powi(next as i32) / (1.0 - q.powi(self.classes as i32)),
            RhoRule::Harmonic => f64::INFINITY,
            RhoRule::Explicit { radii } => (next..=radii.len())
                .step_by(self.classes)
                .map(|m| 1.0 - radii[m - 1])
                .sum(),
        }
    }
}

/// A Blaschke zero configuration: finitely many explicit zeros plus rays.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ZeroSet {
    #[serde(default, with = "serde_pair::vec")]
    pub zeros: Vec<Complex64>,
    #[serde(default)]
    pub rays: Vec<Ray>,
}

impl ZeroSet {
    pub fn finite(zeros: Vec<Complex64>) -> Result<Self, DomainError> {
        let set = ZeroSet { zeros, rays: Vec::new() };
        set.validate()?;
        Ok(set)
    }

    pub fn from_rays(rays: Vec<Ray>) -> Result<Self, DomainError> {
        let set = ZeroSet { zeros: Vec::new(), rays };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        for &z in &self.zeros {
            if z.norm() == 0.0 {
                return Err(DomainError::Parameter("0 is not an admissible zero".into()));
            }
            if z.norm() >= 1.0 {
                return Err(DomainError::OutsideDisc(z));
            }
        }
        self.rays.iter().try_for_each(Ray::validate)
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty() && self.rays.iter().all(|r| r.first_index().is_none())
    }

    /// Whether `Σ(1−|λ|) < ∞`.
    pub fn is_blaschke(&self) -> bool {
        self.rays.iter().all(|r| r.tail_mass(None).is_finite())
    }

    /// Union as a multiset.
    pub fn union(&self, other: &ZeroSet) -> ZeroSet {
        let mut out = self.clone();
        out.zeros.extend_from_slice(&other.zeros);
        out.rays.extend(other.rays.iter().cloned());
        out
    }
}

/// A truncated Blaschke product value with rigorous truncation bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeValue {
    #[serde(with = "serde_pair")]
    pub value: Complex64,
    /// Bound on `|log|B(z)| − log|value||`.
    pub log_error: f64,
    /// Bound on `|B(z) − value|`.
    pub abs_error: f64,
    pub terms: usize,
}

/// `B_Λ(z)` with the omitted tail perturbing `log|B|` by less than `tol`.
///
/// Each omitted factor satisfies `|1 − b_λ(z)| ≤ (1−|λ|)(1+|z|)/(1−|z|)`, so
/// with `S` the sum of these and `δ = e^S − 1` the tail product `P` obeys
/// `|P − 1| ≤ δ` and `|log|P|| ≤ δ/(1−δ)`.
pub fn eval_blaschke(set: &ZeroSet, z: Complex64, tol: f64) -> Result<BlaschkeValue, InnerError> {
    if !(tol > 0.0) {
        return Err(DomainError::Parameter(format!("tolerance must be positive, got {tol}")).into());
    }
    if z.norm() >= 1.0 {
        return Err(DomainError::OutsideDisc(z).into());
    }
    let factor = |lambda: Complex64| -> Result<Complex64, DomainError> {
        if (z - lambda).norm() <= POLE_TOL {
            return Err(DomainError::NearPole { point: z, pole: lambda, tol: POLE_TOL });
        }
        Ok(factor_unchecked(lambda, lambda.norm(), z))
    };

    let mut value = Complex64::new(1.0, 0.0);
    let mut terms = 0;
    for &lambda in &set.zeros {
        value *= factor(lambda)?;
        terms += 1;
    }

    let scale = (1.0 + z.norm()) / (1.0 - z.norm());
    let infinite: Vec<&Ray> = set.rays.iter().filter(|r| !r.is_finite()).collect();
    let budget = (tol / (1.0 + tol)).ln_1p();
    let per_ray = budget / infinite.len().max(1) as f64;

    let mut spent = 0.0;
    for ray in &set.rays {
        if ray.is_finite() {
            for lambda in ray.zeros() {
                value *= factor(lambda)?;
                terms += 1;
            }
            continue;
        }
        let mut used = 0;
        let mut tail = scale * ray.tail_mass(None);
        if tail.is_infinite() {
            return Err(InnerError::Truncation { requested: tol, achieved: f64::INFINITY });
        }
        for (m, rho) in ray.radii() {
            if tail <= per_ray {
                break;
            }
            if used == MAX_RAY_TERMS {
                let delta = (spent + tail).exp_m1();
                return Err(InnerError::Truncation {
                    requested: tol,
                    achieved: delta / (1.0 - delta).max(0.0),
                });
            }
            value *= factor(ray.contact_point * rho)?;
            used += 1;
            tail = scale * ray.tail_mass(Some(m));
        }
        spent += tail;
        terms += used;
    }

    let delta = spent.exp_m1();
    Ok(BlaschkeValue {
        value,
        log_error: delta / (1.0 - delta),
        abs_error: value.norm() * delta,
        terms,
    })
}

/// Result of the ratio test `sup (1−ρ_{n+1})/(1−ρ_n) < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InterpolationVerdict {
    RatioCriterionHolds { sup: f64 },
    Inconclusive { sup: Option<f64> },
}

impl InterpolationVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, InterpolationVerdict::RatioCriterionHolds { .. })
    }

    fn from_sup(sup: f64) -> Self {
        if sup < 1.0 {
            InterpolationVerdict::RatioCriterionHolds { sup }
        } else {
            InterpolationVerdict::Inconclusive { sup: Some(sup) }
        }
    }
}

fn max_ratio(sorted: &[f64]) -> f64 {
    sorted
        .windows(2)
        .map(|w| (1.0 - w[1]) / (1.0 - w[0]))
        .fold(0.0, f64::max)
}

/// Ratio criterion on the global ordering of radii.
///
/// Rays cut from one master sequence (same rule and class count, distinct
/// classes) form a subset of it, so the sup of the master decides. A finite
/// list is ordered by modulus. Anything else is inconclusive.
pub fn interpolating_check(set: &ZeroSet) -> InterpolationVerdict {
    if set.rays.is_empty() {
        let mut moduli: Vec<f64> = set.zeros.iter().map(|z| z.norm()).collect();
        moduli.sort_by(f64::total_cmp);
        return InterpolationVerdict::from_sup(max_ratio(&moduli));
    }
    if !set.zeros.is_empty() {
        return InterpolationVerdict::Inconclusive { sup: None };
    }
    let first = &set.rays[0];
    let shared = set.rays.iter().all(|r| r.rho_rule == first.rho_rule && r.classes == first.classes);
    let mut seen: Vec<usize> = set.rays.iter().map(|r| r.class).collect();
    seen.sort_unstable();
    seen.dedup();
    if !shared || seen.len() != set.rays.len() {
        return InterpolationVerdict::Inconclusive { sup: None };
    }
    match &first.rho_rule {
        RhoRule::Geometric { q } => InterpolationVerdict::from_sup(*q),
        RhoRule::Harmonic => InterpolationVerdict::Inconclusive { sup: Some(1.0) },
        RhoRule::Explicit { radii } => InterpolationVerdict::from_sup(max_ratio(radii)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    fn geometric_ray(q: f64) -> Ray {
        Ray::full(ONE, RhoRule::Geometric { q }).unwrap()
    }

    #[test]
    fn finite_products() {
        let s = ZeroSet::finite(vec![Complex64::new(0.5, 0.0)]).unwrap();
        let v = eval_blaschke(&s, Complex64::new(0.0, 0.0), 1e-12).unwrap();
        assert_relative_eq!(v.value.re, 0.5);
        assert_eq!(v.abs_error, 0.0);
        let s = ZeroSet::finite(vec![Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)]).unwrap();
        let v = eval_blaschke(&s, Complex64::new(0.0, 0.0), 1e-12).unwrap();
        assert_relative_eq!(v.value.norm(), 0.25);
        assert!(ZeroSet::finite(vec![Complex64::new(0.0, 0.0)]).is_err());
        assert!(eval_blaschke(&s, Complex64::new(0.5, 0.0), 1e-6).is_err());
    }

    #[test]
    fn geometric_ray_matches_long_product() {
        let s = ZeroSet::from_rays(vec![geometric_ray(0.5)]).unwrap();
        let v = eval_blaschke(&s, Complex64::new(0.0, 0.0), 1e-6).unwrap();
        let oracle: f64 = (1..=60).map(|k| 1.0 - 0.5f64.powi(k)).product();
        assert!((v.value.re.ln() - oracle.ln()).abs() < 1e-6);
        assert!(v.log_error < 1e-6);
        assert!((v.value.re - oracle).abs() <= v.abs_error + 1e-15);
    }

    #[test]
    fn harmonic_ray_cannot_be_truncated() {
        let s = ZeroSet::from_rays(vec![Ray::full(ONE, RhoRule::Harmonic).unwrap()]).unwrap();
        assert!(!s.is_blaschke());
        assert!(matches!(
            eval_blaschke(&s, Complex64::new(0.0, 0.0), 1e-6),
            Err(InnerError::Truncation { .. })
        ));
    }

    #[test]
    fn round_robin_and_floor() {
        let ray = Ray::new(ONE, RhoRule::Geometric { q: 0.5 }, 1, 0, 0.99).unwrap();
        assert_eq!(ray.first_index(), Some(7));
        let even = Ray::new(ONE, RhoRule::Geometric { q: 0.5 }, 2, 1, 0.0).unwrap();
        let idx: Vec<usize> = even.radii().take(3).map(|(m, _)| m).collect();
        assert_eq!(idx, vec![2, 4, 6]);
        let far = Ray::new(ONE, RhoRule::Geometric { q: 0.9 }, 3, 2, 1.0 - 1e-9).unwrap();
        let m = far.first_index().unwrap();
        assert_eq!((m - 3) % 3, 0);
        assert!(far.rho_rule.rho(m).unwrap() >= far.floor);
        assert!(far.rho_rule.rho(m - 3).unwrap() < far.floor);
    }

    #[test]
    fn ratio_criterion() {
        let s = ZeroSet::from_rays(vec![geometric_ray(0.5)]).unwrap();
        assert_eq!(interpolating_check(&s), InterpolationVerdict::RatioCriterionHolds { sup: 0.5 });
        let h = ZeroSet::from_rays(vec![Ray::full(ONE, RhoRule::Harmonic).unwrap()]).unwrap();
        assert_eq!(interpolating_check(&h), InterpolationVerdict::Inconclusive { sup: Some(1.0) });
        let single = ZeroSet::finite(vec![Complex64::new(0.3, 0.4)]).unwrap();
        assert_eq!(interpolating_check(&single), InterpolationVerdict::RatioCriterionHolds { sup: 0.0 });
        let dup = ZeroSet::from_rays(vec![geometric_ray(0.5), geometric_ray(0.5)]).unwrap();
        assert!(!interpolating_check(&dup).holds());
    }

    #[test]
    fn ray_serde_shape() {
        let ray = Ray::new(ONE, RhoRule::Geometric { q: 0.25 }, 2, 1, 0.5).unwrap();
        let json = serde_json::to_value(&ray).unwrap();
        assert_eq!(json["contact_point"], serde_json::json!([1.0, 0.0]));
        assert_eq!(json["rho_rule"]["rule"], "geometric");
        let back: Ray = serde_json::from_value(json).unwrap();
        assert_eq!(back, ray);
        let minimal: Ray =
            serde_json::from_str(r#"{"contact_point":[0,1],"rho_rule":{"rule":"harmonic"}}"#).unwrap();
        assert_eq!((minimal.classes, minimal.class, minimal.floor), (1, 0, 0.0));
    }
}
