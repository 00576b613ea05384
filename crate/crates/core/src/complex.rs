//! Small helpers around [`Complex64`] shared by every module.

use thiserror::Error;

pub use num_complex::Complex64;

/// Distance from the unit circle within which a point is snapped onto it.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("{0} is not on the unit circle")]
    NotUnimodular(Complex64),
    #[error("{0} is not in the open unit disc")]
    OutsideDisc(Complex64),
    #[error("{point} is within {tol:e} of the boundary point {pole}")]
    NearPole {
        point: Complex64,
        pole: Complex64,
        tol: f64,
    },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// Renormalises `z` onto the unit circle, rejecting points further than
/// [`UNIT_TOL`] from it.
pub fn unimodular(z: Complex64) -> Result<Complex64, DomainError> {
    let m = z.norm();
    if !m.is_finite() || (m - 1.0).abs() > UNIT_TOL {
        return Err(DomainError::NotUnimodular(z));
    }
    Ok(z / m)
}

pub fn in_disc(z: Complex64) -> Result<Complex64, DomainError> {
    if z.norm() < 1.0 {
        Ok(z)
    } else {
        Err(DomainError::OutsideDisc(z))
    }
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Counter-clockwise angle from `from` to `to`, both unimodular, in `[0, 2π)`.
pub fn ccw_angle(from: Complex64, to: Complex64) -> f64 {
    let a = (to * from.conj()).arg();
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Serde adapter writing complex numbers as `[re, im]`.
pub mod serde_pair {
    use super::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }

    /// Same encoding for a list of points.
    pub mod vec {
        use super::Complex64;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|z| [z.re, z.im])
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
            let raw = Vec::<[f64; 2]>::deserialize(d)?;
            Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
        }
    }
}

/// Serde adapter for reals that may be `+∞`, written as the string `"inf"`.
pub mod serde_real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *x == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(de::Error::custom(format!("expected a number or \"inf\", got {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unimodular_snaps_and_rejects() {
        let z = Complex64::new(1.0 + 5e-13, 0.0);
        assert_eq!(unimodular(z).unwrap(), Complex64::new(1.0, 0.0));
        assert!(unimodular(Complex64::new(1.0 + 1e-9, 0.0)).is_err());
        assert!(unimodular(Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn ccw_angle_wraps() {
        let a = ccw_angle(Complex64::i(), Complex64::new(1.0, 0.0));
        assert!((a - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(ccw_angle(Complex64::i(), Complex64::i()), 0.0);
    }

    #[derive(serde::Serialize, serde::Deserialize, PartialEq, Debug)]
    struct R(#[serde(with = "serde_real")] f64);

    #[test]
    fn infinite_reals_round_trip() {
        assert_eq!(serde_json::to_string(&R(f64::INFINITY)).unwrap(), r#""inf""#);
        assert_eq!(serde_json::from_str::<R>(r#""inf""#).unwrap(), R(f64::INFINITY));
        assert_eq!(serde_json::from_str::<R>("2.5").unwrap(), R(2.5));
        assert!(serde_json::from_str::<R>(r#""nan""#).is_err());
    }
}
