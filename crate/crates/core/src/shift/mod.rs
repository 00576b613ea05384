//! Bilateral weighted shifts `(S_ω u)(n) = u(n−1)` on `ℓ²_ω` for weights given
//! in closed form.

mod detect;
mod series;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{serde_real, DomainError};

pub use detect::{
    lemmaomega_detect, tshift_report, Evidence, OmegaReport, TshiftReport, Witness,
};
pub use series::{lemmar_falsify, resolvent_series, LemmaROutcome, Sequence, SeriesReport, Tail};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShiftError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("no sublevel points found: {0}")]
    SearchFailure(String),
}

/// A weight `ω: ℤ → (0,∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum WeightFamily {
    Constant { c: f64 },
    /// `left` for `n < 0`, `right` for `n ≥ 0`.
    TwoSided { left: f64, right: f64 },
    /// `table` on `[−N, N]`; `ω(n−1) = q_minus·ω(n)` for `n ≤ −N` and
    /// `ω(n+1) = q_plus·ω(n)` for `n ≥ N`.
    GeometricTail { table: Vec<f64>, q_minus: f64, q_plus: f64 },
    /// `values` on `[start, start + len)`, extended by constants.
    Table { start: i64, values: Vec<f64> },
}

impl WeightFamily {
    /// `ω(n) = base^n`.
    pub fn exponential(base: f64) -> Self {
        WeightFamily::GeometricTail { table: vec![1.0], q_minus: 1.0 / base, q_plus: base }
    }

    pub fn canonical(&self) -> Result<Weight, DomainError> {
        let (lo, values, left, right) = match self {
            WeightFamily::Constant { c } => (0, vec![*c], 1.0, 1.0),
            WeightFamily::TwoSided { left, right } => (-1, vec![*left, *right], 1.0, 1.0),
            WeightFamily::GeometricTail { table, q_minus, q_plus } => {
                if table.len() % 2 == 0 {
                    return Err(DomainError::Parameter(format!(
                        "geometric-tail table must cover [-N, N], got {} entries",
                        table.len()
                    )));
                }
                (-((table.len() / 2) as i64), table.clone(), *q_minus, *q_plus)
            }
            WeightFamily::Table { start, values } => (*start, values.clone(), 1.0, 1.0),
        };
        Weight::new(lo, values, left, right)
    }
}

/// Canonical form: a table on `[lo, hi]` with geometric tails. Going one step
/// left of `lo` multiplies by `left`; one step right of `hi` by `right`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    lo: i64,
    values: Vec<f64>,
    left: f64,
    right: f64,
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

impl Weight {
    pub fn new(lo: i64, values: Vec<f64>, left: f64, right: f64) -> Result<Self, DomainError> {
        if values.is_empty() {
            return Err(DomainError::Parameter("weight table is empty".into()));
        }
        if !values.iter().all(|&v| positive(v)) {
            return Err(DomainError::Parameter("weights must be positive and finite".into()));
        }
        if !positive(left) || !positive(right) {
            return Err(DomainError::Parameter("tail ratios must be positive and finite".into()));
        }
        Ok(Self { lo, values, left, right })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn left_ratio(&self) -> f64 {
        self.left
    }

    pub fn right_ratio(&self) -> f64 {
        self.right
    }

    pub fn ln_omega(&self, n: i64) -> f64 {
        let (lo, hi) = (self.lo, self.hi());
        if n < lo {
            self.values[0].ln() + (lo - n) as f64 * self.left.ln()
        } else if n > hi {
            self.values[self.values.len() - 1].ln() + (n - hi) as f64 * self.right.ln()
        } else {
            self.values[(n - lo) as usize].ln()
        }
    }

    pub fn omega(&self, n: i64) -> f64 {
        let (lo, hi) = (self.lo, self.hi());
        let v = if n < lo {
            self.values[0] * self.left.powf((lo - n) as f64)
        } else if n > hi {
            self.values[self.values.len() - 1] * self.right.powf((n - hi) as f64)
        } else {
            return self.values[(n - lo) as usize];
        };
        if v > 0.0 && v.is_finite() {
            v
        } else {
            self.ln_omega(n).exp()
        }
    }
}

/// `‖S_ω^k‖ = sup_n ω(n+k)/ω(n)`.
///
/// Once both indices sit in one tail the ratio is `right^k` or `left^{−k}`;
/// the remaining `n` form the finite window `[lo−k, hi]`.
pub fn power_norm(w: &Weight, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let k = k as i64;
    let kf = k as f64;
    let mut best = (kf * w.right.ln()).max(-kf * w.left.ln());
    for n in w.lo - k..=w.hi() {
        best = best.max(w.ln_omega(n + k) - w.ln_omega(n));
    }
    best.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBound {
    pub bounded: bool,
    /// `sup_k ‖S_ω^k‖`, infinite when unbounded.
    #[serde(with = "serde_real")]
    pub sup: f64,
}

/// `sup_{k≥0} sup_n ω(n+k)/ω(n)`.
///
/// Bounded exactly when neither tail grows outward; the double sup is then
/// attained on the table.
pub fn is_power_bounded(w: &Weight) -> PowerBound {
    if w.right > 1.0 || w.left < 1.0 {
        return PowerBound { bounded: false, sup: f64::INFINITY };
    }
    let mut best = 0.0f64;
    let mut min_ln = f64::INFINITY;
    for v in &w.values {
        min_ln = min_ln.min(v.ln());
        best = best.max(v.ln() - min_ln);
    }
    PowerBound { bounded: true, sup: best.exp() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotSimilarReason {
    InfZero,
    SupInfinite,
    DivergentResolvent,
    RatioGrowth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Similarity {
    SimilarToSimpleShift,
    NotSimilar { reasons: Vec<NotSimilarReason> },
    Unknown,
}

impl Similarity {
    pub fn is_similar(&self) -> bool {
        matches!(self, Similarity::SimilarToSimpleShift)
    }
}

/// `(inf_n ω(n), sup_n ω(n))`.
pub fn weight_bounds(w: &Weight) -> (f64, f64) {
    let min = w.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = w.values.iter().copied().fold(0.0, f64::max);
    let inf = if w.right < 1.0 || w.left < 1.0 { 0.0 } else { min };
    let sup = if w.right > 1.0 || w.left > 1.0 { f64::INFINITY } else { max };
    (inf, sup)
}

/// Exact test of `0 < inf ω ≤ sup ω < ∞`.
pub fn similarity_check(w: &Weight) -> Similarity {
    let (inf, sup) = weight_bounds(w);
    let mut reasons = Vec::new();
    if inf == 0.0 {
        reasons.push(NotSimilarReason::InfZero);
    }
    if sup == f64::INFINITY {
        reasons.push(NotSimilarReason::SupInfinite);
    }
    if reasons.is_empty() {
        Similarity::SimilarToSimpleShift
    } else {
        Similarity::NotSimilar { reasons }
    }
}

/// Radii `lim ‖S^{−k}‖^{−1/k}` and `lim ‖S^k‖^{1/k}` bounding the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralAnnulus {
    pub inner: f64,
    pub outer: f64,
}

impl SpectralAnnulus {
    pub fn contains_circle(&self) -> bool {
        self.inner <= 1.0 && 1.0 <= self.outer
    }
}

pub fn spectral_annulus(w: &Weight) -> SpectralAnnulus {
    SpectralAnnulus {
        inner: w.right.min(1.0 / w.left),
        outer: w.right.max(1.0 / w.left),
    }
}
