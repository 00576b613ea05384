//! Contour-integral projections, resolvent level sets and functional calculus
//! on finite matrices standing in for operators.

mod curve;
mod funcalc;
mod level_set;
pub mod linalg;
mod projection;
pub mod quadrature;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Complex64, DomainError};
use crate::inner::InnerError;
use linalg::CMatrix;

pub use curve::{build_curve, ContourCurve, CurveShape, CurveSpec, Piece, CLOSURE_TOL};
pub use funcalc::{
    check_resolvent_bound, lemma47_constant, matrix_function, matrix_function_contour,
    matrix_function_eigen, resolvent_factorization_error, resolvent_norm, ResolventCheck,
};
pub use level_set::{lambda_indicator, level_set_scan, DirectionSup, GridSpec, LevelSetScan};
pub use projection::{riesz_weighted, scalar_cauchy, split, SplitOptions, SplitResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RieszError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Inner(#[from] InnerError),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("{point} is {distance:e} from the contour; quadrature spacing {spacing:e} cannot resolve it")]
    Accuracy {
        point: Complex64,
        distance: f64,
        spacing: f64,
    },
    #[error("eigenvalue {eigenvalue} lies {distance:e} from the contour")]
    Conditioning { eigenvalue: Complex64, distance: f64 },
    #[error("separation violated: {0}")]
    SeparationViolation(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
}

/// A square matrix with cached spectral data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct MatrixOperator {
    matrix: CMatrix,
    eigenvalues: Vec<Complex64>,
    eigenvectors: Option<CMatrix>,
    norm: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct MatrixRepr(#[serde(with = "serde_matrix")] CMatrix);

impl TryFrom<MatrixRepr> for MatrixOperator {
    type Error = DomainError;
    fn try_from(r: MatrixRepr) -> Result<Self, DomainError> {
        MatrixOperator::new(r.0)
    }
}

impl From<MatrixOperator> for MatrixRepr {
    fn from(t: MatrixOperator) -> Self {
        MatrixRepr(t.matrix)
    }
}

impl MatrixOperator {
    pub fn new(matrix: CMatrix) -> Result<Self, DomainError> {
        if matrix.nrows() != matrix.ncols() || matrix.is_empty() {
            return Err(DomainError::Parameter(format!(
                "expected a nonempty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.is_finite()) {
            return Err(DomainError::Parameter("matrix has non-finite entries".into()));
        }
        let (eigenvalues, eigenvectors) = linalg::eigen_decomposition(&matrix);
        let norm = linalg::spectral_norm(&matrix);
        Ok(Self { matrix, eigenvalues, eigenvectors, norm })
    }

    pub fn diagonal(values: &[Complex64]) -> Result<Self, DomainError> {
        Self::new(CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values)))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, DomainError> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(DomainError::Parameter("ragged matrix rows".into()));
        }
        Self::new(CMatrix::from_fn(n, m, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Unit eigenvectors as columns, when the matrix is diagonalizable.
    pub fn eigenvectors(&self) -> Option<&CMatrix> {
        self.eigenvectors.as_ref()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// A constant `M` with `‖p(T)‖ ≤ M·sup_D |p|` for every polynomial: 1 for
    /// contractions, `κ(V)` for diagonalizable matrices with spectrum in the
    /// closed disc, unknown otherwise.
    pub fn polynomial_bound(&self) -> Option<f64> {
        if self.norm <= 1.0 + 1e-12 {
            return Some(1.0);
        }
        let v = self.eigenvectors.as_ref()?;
        if self.eigenvalues.iter().all(|l| l.norm() <= 1.0 + 1e-12) {
            Some(linalg::condition_number(v))
        } else {
            None
        }
    }

    /// `max ‖Tv − λv‖` over the cached eigenpairs.
    pub fn eigen_residual(&self) -> Option<f64> {
        let v = self.eigenvectors.as_ref()?;
        let tv = &self.matrix * v;
        Some(
            (0..self.dim())
                .map(|j| (tv.column(j) - v.column(j) * self.eigenvalues[j]).norm())
                .fold(0.0, f64::max),
        )
    }

    /// `T − λI`.
    pub fn shifted(&self, lambda: Complex64) -> CMatrix {
        let mut m = self.matrix.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= lambda;
        }
        m
    }
}

/// Serde adapter writing a complex matrix as rows of `[re, im]` pairs.
pub mod serde_matrix {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::CMatrix;
    use crate::complex::Complex64;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = m
            .row_iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(CMatrix::from_fn(n, m, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}

/// Initial panel length and the finest one tried.
const H_START: f64 = 0.25;
const H_MIN: f64 = 1.0 / 1024.0;

/// Result of an adaptive contour integral.
#[derive(Debug, Clone)]
pub(crate) struct Integral {
    pub value: CMatrix,
    /// Change between the last two refinements.
    pub change: f64,
}

/// `(1/2πi)∮_Γ f(λ) dλ`, halving panels until successive values agree to
/// `tol` (relative to the larger of the value and the integral of `‖f‖`)
/// and the nodes resolve a singularity at distance `dist`.
pub(crate) fn contour_integral<F>(
    curve: &ContourCurve,
    dist: f64,
    probe: Complex64,
    tol: f64,
    f: F,
) -> Result<Integral, RieszError>
where
    F: Fn(Complex64) -> CMatrix + Sync,
{
    let eval = |h: f64| {
        let (nodes, spacing) = curve.nodes(h);
        let terms: Vec<(CMatrix, f64)> = nodes
            .par_iter()
            .map(|&(z, w)| {
                let v = f(z) * w;
                let mass = v.norm();
                (v, mass)
            })
            .collect();
        let mut it = terms.into_iter();
        let (mut sum, mut mass) = it.next().expect("curve has nodes");
        for (v, m) in it {
            sum += v;
            mass += m;
        }
        let scale = Complex64::new(0.0, -1.0 / std::f64::consts::TAU);
        (sum * scale, mass / std::f64::consts::TAU, spacing)
    };
    let mut h = H_START;
    let (mut prev, _, _) = eval(h);
    loop {
        h *= 0.5;
        let (cur, mass, spacing) = eval(h);
        let change = (&cur - &prev).norm();
        if change <= tol * cur.norm().max(mass) && dist > 10.0 * spacing {
            return Ok(Integral { value: cur, change });
        }
        if h < H_MIN {
            return Err(RieszError::Accuracy { point: probe, distance: dist, spacing });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_json_round_trip() {
        let t: MatrixOperator = serde_json::from_str("[[[0.5,0],[1,0]],[[0,0],[-0.5,0]]]").unwrap();
        assert_eq!(t.dim(), 2);
        assert!(t.eigen_residual().unwrap() < 1e-12);
        let back: MatrixOperator = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back.matrix(), t.matrix());
        assert!(serde_json::from_str::<MatrixOperator>("[[[1,0]],[[1,0],[2,0]]]").is_err());
    }

    #[test]
    fn polynomial_bounds() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(MatrixOperator::diagonal(&[c(0.5), c(-1.0)]).unwrap().polynomial_bound(), Some(1.0));
        let t = MatrixOperator::from_real_rows(&[&[0.5, 1.0], &[0.0, -0.5]]).unwrap();
        let m = t.polynomial_bound().unwrap();
        assert!(m > 1.0 && m.is_finite());
        let jordan = MatrixOperator::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(jordan.polynomial_bound(), None);
        assert_eq!(MatrixOperator::diagonal(&[c(2.0)]).unwrap().polynomial_bound(), None);
    }
}
