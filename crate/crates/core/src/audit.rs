//! Deterministic sampling used to audit lower-bound certificates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{serde_pair, Complex64};
use crate::disc::RegionSpec;

/// Slack allowed between a sampled modulus and a certified lower bound.
pub const TAU_CERT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub samples: usize,
    pub seed: u64,
    #[serde(default = "default_tau")]
    pub tau_cert: f64,
    /// Extra points audited as-is, without the region membership filter.
    #[serde(default, with = "serde_pair::vec")]
    pub injected: Vec<Complex64>,
}

fn default_tau() -> f64 {
    TAU_CERT
}

impl AuditConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            tau_cert: TAU_CERT,
            injected: Vec::new(),
        }
    }

    pub fn with_injected(mut self, pts: Vec<Complex64>) -> Self {
        self.injected = pts;
        self
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Outcome of evaluating a modulus over the audit points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub min_modulus: f64,
    #[serde(with = "serde_pair")]
    pub argmin: Complex64,
    pub sample_count: usize,
    pub injected_count: usize,
}

/// Draws up to `n` points of `region`.
///
/// A third of the proposals are area-uniform, a third hug the boundaries of
/// the excluded horodiscs from outside and a third sit close to the unit
/// circle, where the bounds are tight.
pub fn sample_region<R: Rng>(region: &RegionSpec, n: usize, rng: &mut R) -> Vec<Complex64> {
    let excluded = region.excluded();
    let sector = match region {
        RegionSpec::SectorPocket { arc, r } => Some((arc.start().arg(), arc.span(), (2.0 * r - 1.0).max(0.0))),
        RegionSpec::LensPocket { arc, .. } => Some((arc.start().arg(), arc.span(), 0.0)),
        RegionSpec::HorodiscComplement(_) => None,
    };
    let mut out = Vec::with_capacity(n);
    let max_attempts = 200 * n.max(1);
    let mut attempts = 0;
    while out.len() < n && attempts < max_attempts {
        attempts += 1;
        let z = match attempts % 3 {
            0 if !excluded.is_empty() => {
                let h = &excluded[rng.random_range(0..excluded.len())];
                let push = 10f64.powf(-rng.random_range(2.0..10.0));
                h.center()
                    + Complex64::from_polar(h.radius() * (1.0 + push), rng.random_range(0.0..std::f64::consts::TAU))
            }
            1 => {
                let depth = 10f64.powf(-rng.random_range(1.0..6.0));
                Complex64::from_polar(1.0 - depth, angle(sector, rng))
            }
            _ => match sector {
                Some((_, _, inner)) => {
                    let rad = rng.random_range(inner..1.0);
                    Complex64::from_polar(rad, angle(sector, rng))
                }
                None => Complex64::from_polar(rng.random::<f64>().sqrt(), angle(None, rng)),
            },
        };
        if region.contains(z) {
            out.push(z);
        }
    }
    out
}

fn angle<R: Rng>(sector: Option<(f64, f64, f64)>, rng: &mut R) -> f64 {
    match sector {
        Some((start, span, _)) => start + rng.random_range(0.0..1.0) * span,
        None => rng.random_range(0.0..std::f64::consts::TAU),
    }
}

/// Evaluates `f` on every point in parallel and returns the values in input order.
pub fn evaluate<T, E, F>(points: &[Complex64], f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(Complex64) -> Result<T, E> + Sync,
{
    points.par_iter().map(|&z| f(z)).collect()
}

/// Index of the smallest value; ties go to the earliest index.
pub fn argmin(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if b <= v => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i)
}
