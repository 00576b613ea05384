//! Test-side oracles built only from definitions, independent of the library's
//! own evaluation paths.
#![allow(dead_code)]

use dsk_core::riesz::{ContourCurve, Piece};
use dsk_core::Complex64;
use nalgebra::DMatrix;
use rand::Rng;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense polyline through the curve, from the raw piece parameters.
pub fn polygon(curve: &ContourCurve, h: f64) -> Vec<Complex64> {
    let mut pts = Vec::new();
    for p in curve.pieces() {
        match *p {
            Piece::Segment { a, b } => {
                let m = ((b - a).norm() / h).ceil().max(1.0) as usize;
                pts.extend((0..m).map(|i| a + (b - a) * (i as f64 / m as f64)));
            }
            Piece::Arc { center, radius, start, sweep } => {
                let m = (radius * sweep.abs() / h).ceil().max(1.0) as usize;
                pts.extend(
                    (0..m).map(|i| center + Complex64::from_polar(radius, start + sweep * i as f64 / m as f64)),
                );
            }
        }
    }
    pts
}

/// Even-odd ray casting.
pub fn inside(poly: &[Complex64], z: Complex64) -> bool {
    let mut odd = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if x > z.re {
                odd = !odd;
            }
        }
    }
    odd
}

/// Distance to the polyline vertices; accurate to the vertex spacing.
pub fn vertex_distance(poly: &[Complex64], z: Complex64) -> f64 {
    poly.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
}

pub fn spectral_norm(m: &CMat) -> f64 {
    m.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

pub fn min_singular(m: &CMat) -> f64 {
    m.clone().svd(false, false).singular_values.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    g.qr().q()
}

/// `ln ω(n)` straight from a family's definition.
#[derive(Debug, Clone)]
pub enum Family {
    Constant(f64),
    TwoSided(f64, f64),
    /// table on `[−N, N]`, `ω(n−1) = q_minus·ω(n)` left of `−N`, `ω(n+1) = q_plus·ω(n)` right of `N`.
    GeometricTail(Vec<f64>, f64, f64),
    Table(i64, Vec<f64>),
    Exponential(f64),
}

impl Family {
    pub fn ln_omega(&self, n: i64) -> f64 {
        match self {
            Family::Constant(c) => c.ln(),
            Family::TwoSided(l, r) => if n < 0 { l.ln() } else { r.ln() },
            Family::GeometricTail(t, qm, qp) => {
                let big = (t.len() / 2) as i64;
                if n > big {
                    t[t.len() - 1].ln() + (n - big) as f64 * qp.ln()
                } else if n < -big {
                    t[0].ln() + (-big - n) as f64 * qm.ln()
                } else {
                    t[(n + big) as usize].ln()
                }
            }
            Family::Table(start, v) => {
                let i = (n - start).clamp(0, v.len() as i64 - 1);
                v[i as usize].ln()
            }
            Family::Exponential(b) => n as f64 * b.ln(),
        }
    }

    pub fn to_weight(&self) -> dsk_core::shift::WeightFamily {
        use dsk_core::shift::WeightFamily as W;
        match self.clone() {
            Family::Constant(c) => W::Constant { c },
            Family::TwoSided(left, right) => W::TwoSided { left, right },
            Family::GeometricTail(table, q_minus, q_plus) => W::GeometricTail { table, q_minus, q_plus },
            Family::Table(start, values) => W::Table { start, values },
            Family::Exponential(b) => W::exponential(b),
        }
    }

    /// Bounded above and below: every tail multiplier is 1.
    pub fn bounded_above_and_below(&self) -> bool {
        match self {
            Family::GeometricTail(_, qm, qp) => *qm == 1.0 && *qp == 1.0,
            Family::Exponential(b) => *b == 1.0,
            _ => true,
        }
    }
}

/// Norm of `S^k` truncated to indices `[lo, lo + n)`: power iteration on
/// `MᵀM` for the sparse matrix with entries `ω(j+k)/ω(j)` at `(j+k, j)`.
pub fn truncated_shift_norm(f: &Family, k: i64, lo: i64, n: usize, iters: usize) -> f64 {
    let entries: Vec<(usize, usize, f64)> = (0..n)
        .filter(|&j| j + (k as usize) < n)
        .map(|j| {
            let idx = lo + j as i64;
            (j + k as usize, j, (f.ln_omega(idx + k) - f.ln_omega(idx)).exp())
        })
        .collect();
    let mut x = vec![1.0; n];
    let mut est = 0.0;
    for _ in 0..iters {
        let mut y = vec![0.0; n];
        for &(r, c, v) in &entries {
            y[r] += v * x[c];
        }
        let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        est = ny / nx;
        let mut z = vec![0.0; n];
        for &(r, c, v) in &entries {
            z[c] += v * y[r];
        }
        let nz = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = z.into_iter().map(|v| v / nz).collect();
    }
    est
}

/// The same truncated matrix, dense, for small `n`.
pub fn truncated_shift_dense(f: &Family, k: i64, lo: i64, n: usize) -> f64 {
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        if j + (k as usize) < n {
            let idx = lo + j as i64;
            m[(j + k as usize, j)] = (f.ln_omega(idx + k) - f.ln_omega(idx)).exp();
        }
    }
    m.svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}
