//! Sampled resolvent level sets `Λ = σ(T) ∪ {λ ∈ D : ‖(T − λI)⁻¹‖ ≥ CM/(1 − |λ|)^k}`
//! and the boundary set `Z` of spectral directions the set does not reach.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{resolvent_norm, MatrixOperator};
use crate::complex::Complex64;

/// Polar grid: radii `i/radial` for `i < radial` and angles `2πj/angular`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
}

impl GridSpec {
    pub fn radii(&self) -> Vec<f64> {
        (0..self.radial).map(|i| i as f64 / self.radial as f64).collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.angular).map(|j| TAU * j as f64 / self.angular as f64).collect()
    }
}

/// Membership of `λ` in `Λ`.
pub fn lambda_indicator(t: &MatrixOperator, c: f64, m: f64, k: u32, lambda: Complex64) -> bool {
    let norm = resolvent_norm(t, lambda);
    if norm.is_infinite() {
        return true;
    }
    let gap = 1.0 - lambda.norm();
    gap > 0.0 && norm >= c * m / gap.powi(k as i32) * (1.0 - 1e-12)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionSup {
    pub angle: f64,
    /// Largest grid radius in `Λ` along this direction.
    pub sup: Option<f64>,
    /// Whether an eigenvalue of modulus one sits within half an angular step.
    pub on_spectrum: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetScan {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    /// `in_lambda[j][i]` for angle `j` and radius `i`.
    pub in_lambda: Vec<Vec<bool>>,
    pub directions: Vec<DirectionSup>,
    /// Angles of the estimated `Z`.
    pub z_set: Vec<f64>,
}

pub fn level_set_scan(t: &MatrixOperator, c: f64, m: f64, k: u32, grid: &GridSpec) -> LevelSetScan {
    let radii = grid.radii();
    let angles = grid.angles();
    let half_step = 0.5 * TAU / grid.angular.max(1) as f64;
    let unimodular: Vec<f64> = t
        .eigenvalues()
        .iter()
        .filter(|l| (l.norm() - 1.0).abs() <= 1e-9)
        .map(|l| l.arg())
        .collect();
    let in_lambda: Vec<Vec<bool>> = angles
        .par_iter()
        .map(|&a| {
            radii
                .iter()
                .map(|&r| lambda_indicator(t, c, m, k, Complex64::from_polar(r, a)))
                .collect()
        })
        .collect();
    let step = 1.0 / grid.radial.max(1) as f64;
    let directions: Vec<DirectionSup> = angles
        .iter()
        .zip(&in_lambda)
        .map(|(&angle, row)| DirectionSup {
            angle,
            sup: row.iter().zip(&radii).filter(|(&b, _)| b).map(|(_, &r)| r).reduce(f64::max),
            on_spectrum: unimodular.iter().any(|&u| {
                let d = (u - angle).rem_euclid(TAU);
                d.min(TAU - d) <= half_step
            }),
        })
        .collect();
    let z_set = directions
        .iter()
        .filter(|d| d.on_spectrum && d.sup.unwrap_or(0.0) < 1.0 - step)
        .map(|d| d.angle)
        .collect();
    LevelSetScan { radii, angles, in_lambda, directions, z_set }
}
