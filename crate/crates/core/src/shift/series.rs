use serde::{Deserialize, Serialize};

use super::{ShiftError, Weight};
use crate::complex::{serde_real, Complex64, DomainError};

/// Outcome of summing a nonnegative power series with a geometric tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SeriesReport {
    /// `value` includes the closed-form tail; the terms past `terms_used`
    /// contribute at most `tail_bound`.
    Convergent { value: f64, terms_used: u64, tail_bound: f64 },
    /// The tail ratio reached 1.
    Divergent { ratio: f64 },
}

impl SeriesReport {
    /// The sum, `+∞` when divergent.
    pub fn value(&self) -> f64 {
        match self {
            SeriesReport::Convergent { value, .. } => *value,
            SeriesReport::Divergent { .. } => f64::INFINITY,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, SeriesReport::Divergent { .. })
    }
}

/// `s(n)` given on `0..n0` and as `anchor·ratio^{n−n0}` from `n0` on.
#[derive(Debug, Clone, PartialEq)]
pub(super) struct OneSided {
    prefix: Vec<f64>,
    anchor: f64,
    ratio: f64,
}

impl OneSided {
    fn n0(&self) -> usize {
        self.prefix.len()
    }

    pub(super) fn term(&self, n: usize) -> f64 {
        match self.prefix.get(n) {
            Some(&v) => v,
            None if self.anchor == 0.0 => 0.0,
            None => self.anchor * self.ratio.powf((n - self.n0()) as f64),
        }
    }

    /// `Σ_{n≥0} s(n) x^n` for `x ≥ 0`.
    pub(super) fn sum(&self, x: f64, tol: f64) -> SeriesReport {
        let n0 = self.n0();
        let head: f64 = self
            .prefix
            .iter()
            .enumerate()
            .map(|(n, v)| v * x.powi(n as i32))
            .sum();
        let scale = self.anchor * x.powi(n0 as i32);
        if scale == 0.0 {
            return SeriesReport::Convergent { value: head, terms_used: n0 as u64, tail_bound: 0.0 };
        }
        let t = x * self.ratio;
        if t >= 1.0 {
            return SeriesReport::Divergent { ratio: t };
        }
        let tail = scale / (1.0 - t);
        // Smallest N ≥ n0 with scale·t^{N−n0}/(1−t) < tol.
        let extra = if tail < tol {
            0
        } else if t == 0.0 {
            1
        } else {
            ((tol / tail).ln() / t.ln()).floor() as u64 + 1
        };
        SeriesReport::Convergent {
            value: head + tail,
            terms_used: n0 as u64 + extra,
            tail_bound: tail * t.powf(extra as f64),
        }
    }
}

impl Weight {
    /// `s(n) = ω(n)²` for `n ≥ 0`.
    pub(super) fn right_squares(&self) -> OneSided {
        let n0 = self.hi().max(0);
        OneSided {
            prefix: (0..n0).map(|n| self.omega(n).powi(2)).collect(),
            anchor: self.omega(n0).powi(2),
            ratio: self.right_ratio().powi(2),
        }
    }

    /// `s(n) = ω(−n−1)²` for `n ≥ 0`.
    pub(super) fn left_squares(&self) -> OneSided {
        let n0 = (-self.lo() - 1).max(0);
        OneSided {
            prefix: (0..n0).map(|n| self.omega(-n - 1).powi(2)).collect(),
            anchor: self.omega(-n0 - 1).powi(2),
            ratio: self.left_ratio().powi(2),
        }
    }
}

/// `(‖(S_ω−λ)^{−1}u₀‖², ‖(I−λ̄S_ω)^{−1}u₀‖²) = (Σ|λ|^{2n}ω(−n−1)², Σ|λ|^{2n}ω(n)²)`.
pub fn resolvent_series(
    w: &Weight,
    lambda: Complex64,
    tol: f64,
) -> Result<(SeriesReport, SeriesReport), ShiftError> {
    if lambda.norm() >= 1.0 {
        return Err(DomainError::OutsideDisc(lambda).into());
    }
    if !(tol > 0.0) {
        return Err(DomainError::Parameter(format!("tolerance must be positive, got {tol}")).into());
    }
    let x = lambda.norm_sqr();
    Ok((w.left_squares().sum(x, tol), w.right_squares().sum(x, tol)))
}

/// Behaviour of a sequence past its listed prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "ratio", rename_all = "snake_case")]
pub enum Tail {
    Zero,
    /// Continues from the last listed term with this ratio.
    Geometric(f64),
    Unknown,
}

/// A nonnegative sequence `{s_n}_{n≥0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sequence {
    pub prefix: Vec<f64>,
    pub tail: Tail,
}

impl Sequence {
    pub fn new(prefix: Vec<f64>, tail: Tail) -> Self {
        Self { prefix, tail }
    }

    fn one_sided(&self) -> Result<OneSided, ShiftError> {
        if self.prefix.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(DomainError::Parameter("sequence terms must be nonnegative".into()).into());
        }
        match self.tail {
            Tail::Zero => Ok(OneSided { prefix: self.prefix.clone(), anchor: 0.0, ratio: 0.0 }),
            Tail::Geometric(ratio) => {
                let (&last, head) = self.prefix.split_last().ok_or_else(|| {
                    ShiftError::Inconclusive("a geometric tail needs at least one listed term".into())
                })?;
                if !(ratio >= 0.0 && ratio.is_finite()) {
                    return Err(DomainError::Parameter(format!("tail ratio {ratio} is invalid")).into());
                }
                Ok(OneSided { prefix: head.to_vec(), anchor: last, ratio })
            }
            Tail::Unknown => Err(ShiftError::Inconclusive(
                "the tail is unknown, so the series cannot be bounded".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LemmaROutcome {
    /// `max (Cβₙ − αₙ)` over the second half of the horizon `n` is `margin ≥ 0`.
    ConsistentUpTo { n: usize, margin: f64 },
    /// `Σαr_jⁿ ≤ CΣβr_jⁿ < ∞` fails at `r_j`.
    HypothesisViolatedAt {
        j: usize,
        #[serde(with = "serde_real")]
        lhs: f64,
        #[serde(with = "serde_real")]
        rhs: f64,
    },
    /// The hypothesis holds at every listed `r_j`, yet `Cβₙ − αₙ < −eps` for
    /// every `n` from `from_index` to the horizon. Finitely many `r_j` cannot
    /// contradict the limit statement.
    Tension { from_index: usize, eps: f64 },
}

/// Probes `limsup (Cβₙ − αₙ) ≥ 0` under `Σαr_jⁿ ≤ CΣβr_jⁿ < ∞`.
pub fn lemmar_falsify(
    alpha: &Sequence,
    beta: &Sequence,
    c: f64,
    rs: &[f64],
) -> Result<LemmaROutcome, ShiftError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(DomainError::Parameter(format!("C must be positive, got {c}")).into());
    }
    if rs.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(DomainError::Parameter("every r_j must lie in (0,1)".into()).into());
    }
    let (a, b) = (alpha.one_sided()?, beta.one_sided()?);
    for (j, &r) in rs.iter().enumerate() {
        let lhs = a.sum(r, 1e-15).value();
        let rhs = c * b.sum(r, 1e-15).value();
        if rhs.is_infinite() || lhs > rhs * (1.0 + 1e-12) {
            return Ok(LemmaROutcome::HypothesisViolatedAt { j, lhs, rhs });
        }
    }
    let horizon = 2 * alpha.prefix.len().max(beta.prefix.len()) + 64;
    let d: Vec<f64> = (0..horizon).map(|n| c * b.term(n) - a.term(n)).collect();
    let window = &d[horizon / 2..];
    let scale = (horizon / 2..horizon)
        .map(|n| (c * b.term(n)).max(a.term(n)))
        .fold(f64::MIN_POSITIVE, f64::max);
    let margin = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let eps = 1e-12 * scale;
    if margin >= -eps {
        return Ok(LemmaROutcome::ConsistentUpTo { n: horizon, margin });
    }
    let from_index = d.iter().rposition(|&v| v >= -eps).map_or(0, |i| i + 1);
    Ok(LemmaROutcome::Tension { from_index, eps: -margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::WeightFamily;

    fn w(f: WeightFamily) -> Weight {
        f.canonical().unwrap()
    }

    #[test]
    fn constant_weight_series() {
        let one = w(WeightFamily::Constant { c: 1.0 });
        let (l, r) = resolvent_series(&one, Complex64::new(0.0, 0.0), 1e-12).unwrap();
        assert_eq!((l.value(), r.value()), (1.0, 1.0));
        let lambda = Complex64::from_polar(0.7, 1.1);
        let (l, r) = resolvent_series(&one, lambda, 1e-12).unwrap();
        let exact = 1.0 / (1.0 - 0.49);
        assert!((l.value() - exact).abs() < 1e-12 * exact);
        assert!((r.value() - exact).abs() < 1e-12 * exact);
        if let SeriesReport::Convergent { tail_bound, terms_used, .. } = l {
            assert!(tail_bound < 1e-12);
            let remainder = 0.49f64.powi(terms_used as i32) / 0.51;
            assert!((remainder - tail_bound).abs() <= 1e-3 * remainder + 1e-30);
        } else {
            panic!("convergent series reported divergent");
        }
    }

    #[test]
    fn divergence_on_the_left() {
        let geo = w(WeightFamily::exponential(0.5));
        let (l, r) = resolvent_series(&geo, Complex64::new(0.6, 0.0), 1e-10).unwrap();
        assert!(l.is_divergent());
        assert!(!r.is_divergent());
        // Σ 0.36ⁿ 4^{−n}
        assert!((r.value() - 1.0 / (1.0 - 0.09)).abs() < 1e-14);
        assert!(resolvent_series(&geo, Complex64::new(1.0, 0.0), 1e-10).is_err());
    }

    #[test]
    fn prefix_before_tail() {
        let t = w(WeightFamily::TwoSided { left: 0.5, right: 1.0 });
        let (l, r) = resolvent_series(&t, Complex64::new(0.0, 0.9f64.sqrt()), 1e-12).unwrap();
        assert!((l.value() / r.value() - 0.25).abs() < 1e-14);
        let table = w(WeightFamily::Table { start: -3, values: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0] });
        let x: f64 = 0.3;
        let (l, r) = resolvent_series(&table, Complex64::new(x.sqrt(), 0.0), 1e-14).unwrap();
        let direct_r: f64 = (0..200).map(|n| table.omega(n).powi(2) * x.powi(n as i32)).sum();
        let direct_l: f64 = (0..200).map(|n| table.omega(-n - 1).powi(2) * x.powi(n as i32)).sum();
        assert!((r.value() - direct_r).abs() < 1e-12 * direct_r);
        assert!((l.value() - direct_l).abs() < 1e-12 * direct_l);
    }

    #[test]
    fn lemma_r_examples() {
        let beta = Sequence::new(vec![1.0, 0.5], Tail::Geometric(0.5));
        let same = lemmar_falsify(&beta, &beta, 1.0, &[0.9, 0.99]).unwrap();
        assert!(matches!(same, LemmaROutcome::ConsistentUpTo { margin, .. } if margin == 0.0));

        let half = Sequence::new(vec![0.5, 0.25], Tail::Geometric(0.5));
        let out = lemmar_falsify(&half, &beta, 1.0, &[0.9]).unwrap();
        assert!(matches!(out, LemmaROutcome::ConsistentUpTo { margin, .. } if margin > 0.0));

        // α from ω(n)=2^{−n} on the left, β on the right.
        let alpha = Sequence::new(vec![4.0], Tail::Geometric(4.0));
        let beta = Sequence::new(vec![1.0], Tail::Geometric(0.25));
        let out = lemmar_falsify(&alpha, &beta, 1.0, &[0.9]).unwrap();
        assert!(matches!(out, LemmaROutcome::HypothesisViolatedAt { j: 0, lhs, .. } if lhs.is_infinite()));

        let unknown = Sequence::new(vec![1.0], Tail::Unknown);
        assert!(matches!(lemmar_falsify(&unknown, &beta, 1.0, &[0.5]), Err(ShiftError::Inconclusive(_))));
    }

    #[test]
    fn lemma_r_tension_window() {
        // Σαrⁿ ≤ CΣβrⁿ at r = 0.1 only because of the first term, while
        // α eventually dominates.
        let alpha = Sequence::new(vec![0.0, 1.0], Tail::Geometric(1.0));
        let beta = Sequence::new(vec![10.0], Tail::Zero);
        match lemmar_falsify(&alpha, &beta, 1.0, &[0.1]).unwrap() {
            LemmaROutcome::Tension { from_index, eps } => {
                assert_eq!(from_index, 1);
                assert!((eps - 1.0).abs() < 1e-15);
            }
            other => panic!("expected tension, got {other:?}"),
        }
    }
}
