//! Closed piecewise-smooth contours crossing the unit circle at two points.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::quadrature::{composite, GL_ORDER};
use super::RieszError;
use crate::complex::{ccw_angle, serde_pair, unimodular, Complex64, DomainError};

/// Gap allowed between consecutive pieces.
pub const CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Piece {
    Segment {
        #[serde(with = "serde_pair")]
        a: Complex64,
        #[serde(with = "serde_pair")]
        b: Complex64,
    },
    /// `center + radius·e^{i(start + t·sweep)}`, `t ∈ [0,1]`; negative sweeps run clockwise.
    Arc {
        #[serde(with = "serde_pair")]
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Piece {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Segment { a, b } => a + (b - a) * t,
            Piece::Arc { center, radius, start, sweep } => {
                center + Complex64::from_polar(radius, start + t * sweep)
            }
        }
    }

    /// `dz/dt`.
    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Segment { a, b } => b - a,
            Piece::Arc { radius, start, sweep, .. } => {
                Complex64::i() * Complex64::from_polar(radius * sweep, start + t * sweep)
            }
        }
    }

    pub fn start_point(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end_point(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::Segment { a, b } => (b - a).norm(),
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        match *self {
            Piece::Segment { a, b } => {
                let d = b - a;
                let len2 = d.norm_sqr();
                let t = if len2 == 0.0 { 0.0 } else { ((z - a) * d.conj()).re / len2 };
                (z - self.point(t.clamp(0.0, 1.0))).norm()
            }
            Piece::Arc { center, radius, start, sweep } => {
                let w = z - center;
                let ends = (z - self.start_point()).norm().min((z - self.end_point()).norm());
                if w.norm() == 0.0 {
                    return radius;
                }
                let rel = if sweep >= 0.0 {
                    (w.arg() - start).rem_euclid(TAU)
                } else {
                    (start - w.arg()).rem_euclid(TAU)
                };
                if rel <= sweep.abs() {
                    (w.norm() - radius).abs()
                } else {
                    ends
                }
            }
        }
    }

    fn validate(&self) -> Result<(), DomainError> {
        let ok = match *self {
            Piece::Segment { a, b } => a.is_finite() && b.is_finite() && a != b,
            Piece::Arc { center, radius, start, sweep } => {
                center.is_finite() && radius > 0.0 && radius.is_finite() && start.is_finite()
                    && sweep != 0.0 && sweep.abs() <= TAU
            }
        };
        if ok {
            Ok(())
        } else {
            Err(DomainError::Parameter(format!("degenerate contour piece {self:?}")))
        }
    }
}

/// A closed contour made of segments and circular arcs, with the two points
/// `ζ_{Γ1}, ζ_{Γ2}` where it meets the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr", into = "CurveRepr")]
pub struct ContourCurve {
    pieces: Vec<Piece>,
    contacts: [Complex64; 2],
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    pieces: Vec<Piece>,
    #[serde(with = "serde_pair::vec")]
    contact_points: Vec<Complex64>,
}

impl TryFrom<CurveRepr> for ContourCurve {
    type Error = RieszError;
    fn try_from(r: CurveRepr) -> Result<Self, RieszError> {
        let [a, b]: [Complex64; 2] = r.contact_points.try_into().map_err(|v: Vec<Complex64>| {
            RieszError::InvalidCurve(format!("expected two contact points, got {}", v.len()))
        })?;
        ContourCurve::new(r.pieces, [a, b])
    }
}

impl From<ContourCurve> for CurveRepr {
    fn from(c: ContourCurve) -> Self {
        CurveRepr { pieces: c.pieces, contact_points: c.contacts.to_vec() }
    }
}

impl ContourCurve {
    pub fn new(pieces: Vec<Piece>, contacts: [Complex64; 2]) -> Result<Self, RieszError> {
        if pieces.is_empty() {
            return Err(RieszError::InvalidCurve("no pieces".into()));
        }
        for p in &pieces {
            p.validate()?;
        }
        for (i, p) in pieces.iter().enumerate() {
            let next = &pieces[(i + 1) % pieces.len()];
            let gap = (p.end_point() - next.start_point()).norm();
            if gap > CLOSURE_TOL {
                return Err(RieszError::InvalidCurve(format!(
                    "piece {i} ends {gap:e} away from the start of the next piece"
                )));
            }
        }
        let contacts = [unimodular(contacts[0])?, unimodular(contacts[1])?];
        if (contacts[0] - contacts[1]).norm() <= CLOSURE_TOL {
            return Err(DomainError::Parameter("contact points coincide".into()).into());
        }
        let curve = ContourCurve { pieces, contacts };
        for c in contacts {
            if curve.distance(c) > 1e-9 {
                return Err(RieszError::InvalidCurve(format!("contact point {c} is not on the curve")));
            }
        }
        Ok(curve)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn contacts(&self) -> [Complex64; 2] {
        self.contacts
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        self.pieces.iter().map(|p| p.distance(z)).fold(f64::INFINITY, f64::min)
    }

    /// `p(λ) = (λ − ζ_{Γ1})^k (λ − ζ_{Γ2})^k`.
    pub fn weight(&self, k: u32, z: Complex64) -> Complex64 {
        ((z - self.contacts[0]) * (z - self.contacts[1])).powu(k)
    }

    /// Winding number about `z`, or `None` when `z` lies on the curve.
    ///
    /// Arcs are cut into pieces no longer than the distance to `z`, so each
    /// piece turns by less than one radian and principal arguments add up exactly.
    pub fn winding_number(&self, z: Complex64) -> Option<i64> {
        let d = self.distance(z);
        if d <= 1e-14 {
            return None;
        }
        let mut total = 0.0;
        for p in &self.pieces {
            let m = match p {
                Piece::Segment { .. } => 1,
                Piece::Arc { .. } => (p.length() / d).ceil().max(1.0) as usize,
            };
            let mut prev = p.start_point() - z;
            for i in 1..=m {
                let cur = p.point(i as f64 / m as f64) - z;
                total += (cur / prev).arg();
                prev = cur;
            }
        }
        Some((total / TAU).round() as i64)
    }

    /// Whether `z` lies in the bounded component `Ω_Γ`.
    pub fn encloses(&self, z: Complex64) -> bool {
        self.winding_number(z).is_some_and(|w| w != 0)
    }

    /// Quadrature nodes `(λ, w·dλ/dt)` with panels no longer than `h`, and the
    /// largest gap between consecutive nodes of a panel.
    pub fn nodes(&self, h: f64) -> (Vec<(Complex64, Complex64)>, f64) {
        let mut out = Vec::new();
        let mut spacing = 0.0f64;
        for p in &self.pieces {
            let panels = (p.length() / h).ceil().max(1.0) as usize;
            spacing = spacing.max(p.length() / (panels * GL_ORDER) as f64);
            out.extend(
                composite(panels)
                    .into_iter()
                    .map(|(t, w)| (p.point(t), p.velocity(t) * w)),
            );
        }
        (out, spacing)
    }

    /// Points along the curve at most `h` apart.
    pub fn sample(&self, h: f64) -> Vec<Complex64> {
        self.pieces
            .iter()
            .flat_map(|p| {
                let m = (p.length() / h).ceil().max(1.0) as usize;
                (0..m).map(move |i| p.point(i as f64 / m as f64))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CurveShape {
    /// The annular sector `r_in < |z| < r_out` over the arc from `ζ₁` to `ζ₂`.
    Sector,
    /// The sector joined with the disc `|z| < r_in`.
    Cap,
    /// Crosses the circle along segments tilted by `tilt` toward the arc, with
    /// inner boundary `ζ₂ → r_in·u → ζ₁` where `u` is the arc midpoint.
    /// Two lenses over complementary arcs meet only at the contact points.
    Lens {
        #[serde(default)]
        tilt: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(with = "serde_pair")]
    pub zeta1: Complex64,
    #[serde(with = "serde_pair")]
    pub zeta2: Complex64,
    pub r_in: f64,
    pub r_out: f64,
    pub shape: CurveShape,
}

/// Positively oriented contour around the region over the counter-clockwise
/// arc from `ζ₁` to `ζ₂`.
pub fn build_curve(spec: &CurveSpec) -> Result<ContourCurve, RieszError> {
    let z1 = unimodular(spec.zeta1)?;
    let z2 = unimodular(spec.zeta2)?;
    if (z1 - z2).norm() <= CLOSURE_TOL {
        return Err(DomainError::Parameter("contact points coincide".into()).into());
    }
    let (r_in, r_out) = (spec.r_in, spec.r_out);
    if !(r_in > 0.0 && r_in < 1.0 && r_out > 1.0 && r_out.is_finite()) {
        return Err(DomainError::Parameter(format!(
            "need 0 < r_in < 1 < r_out, got r_in = {r_in}, r_out = {r_out}"
        ))
        .into());
    }
    let span = ccw_angle(z1, z2);
    let (a1, a2) = (z1.arg(), z1.arg() + span);
    let origin = Complex64::new(0.0, 0.0);
    let pieces = match spec.shape {
        CurveShape::Sector | CurveShape::Cap => {
            let inner_sweep = if spec.shape == CurveShape::Sector { -span } else { TAU - span };
            vec![
                Piece::Segment { a: z1 * r_in, b: z1 * r_out },
                Piece::Arc { center: origin, radius: r_out, start: a1, sweep: span },
                Piece::Segment { a: z2 * r_out, b: z2 * r_in },
                Piece::Arc { center: origin, radius: r_in, start: a2, sweep: inner_sweep },
            ]
        }
        CurveShape::Lens { tilt } => {
            let max_tilt = (1.0 / r_out).acos();
            let tau = tilt.unwrap_or(0.5 * max_tilt);
            if !(tau >= 0.0 && tau < max_tilt && 2.0 * tau < span) {
                return Err(DomainError::Parameter(format!(
                    "tilt {tau} must lie in [0, {max_tilt}) and below half the arc"
                ))
                .into());
            }
            if r_in <= (0.5 * span).cos().abs() {
                return Err(DomainError::Parameter(format!(
                    "r_in must exceed {} so the inner vertex lies beyond the chord",
                    (0.5 * span).cos().abs()
                ))
                .into());
            }
            let w = Complex64::from_polar(r_in, a1 + 0.5 * span);
            let pa = Complex64::from_polar(r_out, a1 + tau);
            let pb = Complex64::from_polar(r_out, a2 - tau);
            vec![
                Piece::Segment { a: z1, b: pa },
                Piece::Arc { center: origin, radius: r_out, start: a1 + tau, sweep: span - 2.0 * tau },
                Piece::Segment { a: pb, b: z2 },
                Piece::Segment { a: z2, b: w },
                Piece::Segment { a: w, b: z1 },
            ]
        }
    };
    ContourCurve::new(pieces, [z1, z2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::cis;
    use std::f64::consts::PI;

    fn spec(z1: Complex64, z2: Complex64, r_in: f64, r_out: f64, shape: CurveShape) -> CurveSpec {
        CurveSpec { zeta1: z1, zeta2: z2, r_in, r_out, shape }
    }

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn sector_winding() {
        let c = build_curve(&spec(ONE, Complex64::i(), 0.9, 1.1, CurveShape::Sector)).unwrap();
        assert_eq!(c.pieces().len(), 4);
        assert_eq!(c.winding_number(cis(PI / 4.0)), Some(1));
        assert_eq!(c.winding_number(-ONE), Some(0));
        assert_eq!(c.winding_number(ONE), None);
    }

    #[test]
    fn cap_contains_origin() {
        let c = build_curve(&spec(ONE, -ONE, 0.5, 1.5, CurveShape::Cap)).unwrap();
        assert_eq!(c.pieces().len(), 4);
        assert_eq!(c.winding_number(Complex64::new(0.0, 0.0)), Some(1));
        assert_eq!(c.winding_number(Complex64::new(0.0, 1.0)), Some(1));
        assert_eq!(c.winding_number(Complex64::new(0.0, -0.8)), Some(0));
        assert_eq!(c.winding_number(Complex64::new(0.0, -0.3)), Some(1));
    }

    #[test]
    fn lens_pair_shares_only_contacts() {
        let a = build_curve(&spec(-Complex64::i(), Complex64::i(), 0.25, 1.5, CurveShape::Lens { tilt: None })).unwrap();
        let b = build_curve(&spec(Complex64::i(), -Complex64::i(), 0.25, 1.5, CurveShape::Lens { tilt: None })).unwrap();
        assert!(a.encloses(Complex64::new(0.5, 0.0)));
        assert!(!a.encloses(Complex64::new(-0.5, 0.0)));
        assert!(b.encloses(Complex64::new(-0.5, 0.0)));
        assert!(!a.encloses(Complex64::new(0.0, 0.0)) && !b.encloses(Complex64::new(0.0, 0.0)));
        for z in a.sample(0.01) {
            if (z - Complex64::i()).norm() > 1e-3 && (z + Complex64::i()).norm() > 1e-3 {
                assert_eq!(b.winding_number(z), Some(0), "{z}");
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(build_curve(&spec(ONE, ONE, 0.5, 1.5, CurveShape::Sector)).is_err());
        assert!(build_curve(&spec(ONE, -ONE, 1.2, 1.5, CurveShape::Sector)).is_err());
        // Quarter arc: the chord sits at distance cos(π/4) from the origin.
        assert!(build_curve(&spec(ONE, Complex64::i(), 0.5, 1.5, CurveShape::Lens { tilt: None })).is_err());
        let open = vec![Piece::Segment { a: ONE, b: -ONE }];
        assert!(ContourCurve::new(open, [ONE, -ONE]).is_err());
    }

    #[test]
    fn distances() {
        let arc = Piece::Arc { center: Complex64::new(0.0, 0.0), radius: 1.0, start: 0.0, sweep: -PI / 2.0 };
        assert!((arc.distance(Complex64::new(0.0, -2.0)) - 1.0).abs() < 1e-15);
        assert!((arc.distance(Complex64::new(0.0, 2.0)) - 5f64.sqrt()).abs() < 1e-12 || arc.distance(Complex64::new(0.0, 2.0)) > 2.0);
        let seg = Piece::Segment { a: ONE, b: -ONE };
        assert!((seg.distance(Complex64::new(0.3, 0.4)) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn serde_round_trip() {
        let c = build_curve(&spec(ONE, -ONE, 0.5, 1.5, CurveShape::Cap)).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: ContourCurve = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        let s: CurveSpec = serde_json::from_str(
            r#"{"zeta1":[1,0],"zeta2":[0,1],"r_in":0.9,"r_out":1.1,"shape":{"type":"lens"}}"#,
        )
        .unwrap();
        assert_eq!(s.shape, CurveShape::Lens { tilt: None });
    }
}
