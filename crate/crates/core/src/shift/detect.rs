use serde::{Deserialize, Serialize};

use super::{
    is_power_bounded, similarity_check, NotSimilarReason, PowerBound, ShiftError, Similarity,
    Weight,
};
use crate::complex::{serde_pair, serde_real, Complex64, DomainError};
use crate::inner::{theta_log_modulus, DiscFunction};

const SERIES_TOL: f64 = 1e-14;
/// Relative slack in the `lhs ≤ rhs` comparison; equality is attained when
/// `C = sup ω / inf ω` and both sides are only good to a few ulps.
const COMPARE_TOL: f64 = 1e-12;

/// One row of the `(r_j, lhs, rhs)` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub r: f64,
    #[serde(with = "serde_real")]
    pub lhs: f64,
    #[serde(with = "serde_real")]
    pub rhs: f64,
    #[serde(with = "serde_real")]
    pub ratio: f64,
    pub holds: bool,
}

impl Evidence {
    fn new(r: f64, lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs.is_infinite() { f64::INFINITY } else { lhs / rhs };
        Evidence { r, lhs, rhs, ratio, holds: lhs.is_finite() && rhs.is_finite() && lhs <= rhs * (1.0 + COMPARE_TOL) }
    }

    pub fn verdict_flag(&self) -> &'static str {
        if self.lhs.is_infinite() {
            "divergent"
        } else if self.holds {
            "holds"
        } else {
            "fails"
        }
    }
}

/// `ω(−n−1) ≤ Cω(n) + ε` at index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub j: usize,
    pub n: u64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub power_bound: PowerBound,
    pub evidence: Vec<Evidence>,
    /// `Σ ω(−n−1)² r_jⁿ ≤ C² Σ ω(n)² r_jⁿ` at every listed `r_j`.
    pub series_holds: bool,
    pub witnesses: Vec<Witness>,
    pub similarity: Similarity,
    /// False only if the series inequality held everywhere while the weight is
    /// not bounded above and below.
    pub consistent: bool,
}

fn check_rs(rs: &[f64]) -> Result<(), ShiftError> {
    if rs.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(DomainError::Parameter("every r_j must lie in (0,1)".into()).into());
    }
    Ok(())
}

fn require_power_bounded(w: &Weight) -> Result<PowerBound, ShiftError> {
    let pb = is_power_bounded(w);
    if !pb.bounded {
        return Err(ShiftError::HypothesisNotMet(
            "the shift is not power bounded".into(),
        ));
    }
    Ok(pb)
}

/// Series inequality with `C²`, evaluated at `x` (`r_j` or `|λ_j|²`).
fn evidence(w: &Weight, c: f64, x: f64) -> Evidence {
    let lhs = w.left_squares().sum(x, SERIES_TOL).value();
    let rhs = c * c * w.right_squares().sum(x, SERIES_TOL).value();
    Evidence::new(x, lhs, rhs)
}

/// Largest `n ≤ 4/(1−r)` with `ω(−n−1) ≤ Cω(n) + ε`, `ε = 1e−9 + 1e−6·Cω(n)`.
fn witness(w: &Weight, c: f64, j: usize, r: f64) -> Option<Witness> {
    let horizon = (4.0 / (1.0 - r)).ceil() as u64;
    (0..=horizon).rev().find_map(|n| {
        let rhs = c * w.omega(n as i64);
        let eps = 1e-9 + 1e-6 * rhs;
        (w.omega(-(n as i64) - 1) <= rhs + eps).then_some(Witness { j, n, eps })
    })
}

/// Evaluates the series inequality at each `r_j`, extracts index witnesses when
/// it holds throughout, and compares with the exact similarity test.
pub fn lemmaomega_detect(w: &Weight, c: f64, rs: &[f64]) -> Result<OmegaReport, ShiftError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(DomainError::Parameter(format!("C must be positive, got {c}")).into());
    }
    check_rs(rs)?;
    let power_bound = require_power_bounded(w)?;
    let evidence: Vec<Evidence> = rs.iter().map(|&r| evidence(w, c, r)).collect();
    let series_holds = evidence.iter().all(|e| e.holds);
    let witnesses = if series_holds {
        rs.iter().enumerate().filter_map(|(j, &r)| witness(w, c, j, r)).collect()
    } else {
        Vec::new()
    };
    let similarity = similarity_check(w);
    Ok(OmegaReport {
        power_bound,
        consistent: !(series_holds && !similarity.is_similar()),
        evidence,
        series_holds,
        witnesses,
        similarity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TshiftReport {
    pub power_bound: PowerBound,
    #[serde(with = "serde_pair::vec")]
    pub points: Vec<Complex64>,
    /// Rows use `r = |λ_j|²`.
    pub evidence: Vec<Evidence>,
    pub exact: Similarity,
    pub similarity: Similarity,
}

/// Points `λ_j` with `|φ(λ_j)| ≤ c` and `|λ_j| → 1`: radial points
/// `1 − 2^{−j}`, `j ≤ 36`, toward the first atom of a singular factor, the zeros otherwise.
fn sublevel_points(phi: &DiscFunction, c: f64, budget: usize) -> Result<Vec<Complex64>, ShiftError> {
    match phi {
        DiscFunction::Theta { measure } => {
            let Some(atom) = measure.atoms().first() else {
                return Ok(Vec::new());
            };
            let mut out = Vec::new();
            // Beyond 2^{-36} the points fall inside the pole tolerance of the atom.
            for j in 1..=budget.min(36) {
                let z = atom.point * (1.0 - 0.5f64.powi(j as i32));
                if theta_log_modulus(measure, z)? <= c.ln() {
                    out.push(z);
                }
            }
            Ok(out)
        }
        _ => Ok(phi.zeros(budget)),
    }
}

/// Compares `Σ|λ_j|^{2n}ω(−n−1)²` with `Σ|λ_j|^{2n}ω(n)²` along sublevel points of `φ`.
pub fn tshift_report(
    w: &Weight,
    phi: &DiscFunction,
    c: f64,
    budget: usize,
) -> Result<TshiftReport, ShiftError> {
    if !(c > 0.0) {
        return Err(DomainError::Parameter(format!("c must be positive, got {c}")).into());
    }
    phi.validate()?;
    let power_bound = require_power_bounded(w)?;
    let points = sublevel_points(phi, c, budget)?;
    if points.is_empty() {
        return Err(ShiftError::SearchFailure(format!(
            "no point with |phi| <= {c} among {budget} candidates"
        )));
    }
    let evidence: Vec<Evidence> = points.iter().map(|z| evidence(w, 1.0, z.norm_sqr())).collect();
    let exact = similarity_check(w);
    let similarity = if exact.is_similar() {
        Similarity::SimilarToSimpleShift
    } else if evidence.iter().any(|e| e.lhs.is_infinite()) {
        Similarity::NotSimilar { reasons: vec![NotSimilarReason::DivergentResolvent] }
    } else if ratios_grow(&evidence) {
        Similarity::NotSimilar { reasons: vec![NotSimilarReason::RatioGrowth] }
    } else {
        Similarity::Unknown
    };
    Ok(TshiftReport { power_bound, points, evidence, exact, similarity })
}

/// Nondecreasing over the second half and at least a thousandfold overall.
fn ratios_grow(ev: &[Evidence]) -> bool {
    let ratios: Vec<f64> = ev.iter().map(|e| e.ratio).collect();
    let (Some(first), Some(last)) = (ratios.first(), ratios.last()) else {
        return false;
    };
    let half = &ratios[ratios.len() / 2..];
    half.windows(2).all(|p| p[1] >= p[0]) && *last >= 1e3 * first
}
