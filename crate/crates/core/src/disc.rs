//! Horodiscs, boundary arcs and the regions of the disc they cut out.
//!
//! A horodisc `D(rζ) = {z : |z − rζ| < 1 − r}` is internally tangent to the
//! unit circle at `ζ`. Outside it the Poisson kernel at `ζ` is at most
//! `r/(1−r)`, which is the estimate every certificate in [`crate::inner`] is
//! built on.

use serde::{Deserialize, Serialize};

use crate::complex::{ccw_angle, serde_pair, unimodular, Complex64, DomainError};

/// Absolute tolerance for boundary classification.
pub const TAU_GEO: f64 = 1e-10;

/// `(1 − |z|²) / |ζ − z|²`, the Poisson kernel of the disc at `ζ`.
pub fn poisson_ratio(z: Complex64, zeta: Complex64) -> Result<f64, DomainError> {
    let zeta = unimodular(zeta)?;
    let m2 = z.norm_sqr();
    if m2 >= 1.0 {
        return Err(DomainError::OutsideDisc(z));
    }
    let d2 = (zeta - z).norm_sqr();
    if d2 == 0.0 {
        return Err(DomainError::NearPole {
            point: z,
            pole: zeta,
            tol: 0.0,
        });
    }
    Ok((1.0 - m2) / d2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Inside,
    Boundary,
    Outside,
}

/// The horodisc `D(rζ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HorodiscRepr", into = "HorodiscRepr")]
pub struct Horodisc {
    contact: Complex64,
    r: f64,
}

#[derive(Serialize, Deserialize)]
struct HorodiscRepr {
    #[serde(with = "serde_pair")]
    contact_point: Complex64,
    r: f64,
}

impl TryFrom<HorodiscRepr> for Horodisc {
    type Error = DomainError;
    fn try_from(h: HorodiscRepr) -> Result<Self, Self::Error> {
        Horodisc::new(h.contact_point, h.r)
    }
}

impl From<Horodisc> for HorodiscRepr {
    fn from(h: Horodisc) -> Self {
        HorodiscRepr {
            contact_point: h.contact,
            r: h.r,
        }
    }
}

impl Horodisc {
    pub fn new(contact: Complex64, r: f64) -> Result<Self, DomainError> {
        let contact = unimodular(contact)?;
        if !(r > 0.0 && r < 1.0) {
            return Err(DomainError::Parameter(format!(
                "horodisc parameter must lie in (0,1), got {r}"
            )));
        }
        Ok(Self { contact, r })
    }

    /// The horodisc `D(λ)` attached to a nonzero point of the disc.
    pub fn at(lambda: Complex64) -> Result<Self, DomainError> {
        let m = lambda.norm();
        if m == 0.0 {
            return Err(DomainError::Parameter("D(0) is the whole disc".into()));
        }
        Self::new(lambda / m, m)
    }

    pub fn contact(&self) -> Complex64 {
        self.contact
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn center(&self) -> Complex64 {
        self.contact * self.r
    }

    pub fn radius(&self) -> f64 {
        1.0 - self.r
    }

    /// `r/(1−r)`, the Poisson-kernel threshold of this horodisc.
    pub fn threshold(&self) -> f64 {
        self.r / (1.0 - self.r)
    }

    pub fn classify(&self, z: Complex64) -> Position {
        let d = (z - self.center()).norm();
        let rad = self.radius();
        if (d - rad).abs() <= TAU_GEO {
            Position::Boundary
        } else if d < rad {
            Position::Inside
        } else {
            Position::Outside
        }
    }

    /// Membership in the closed disc, without tolerance.
    pub fn closure_contains(&self, z: Complex64) -> bool {
        (z - self.center()).norm() <= self.radius()
    }

    /// Point of the boundary circle at angle `phi` measured from the center.
    pub fn boundary_point(&self, phi: f64) -> Complex64 {
        self.center() + Complex64::from_polar(self.radius(), phi)
    }

    /// Strict disjointness of the closed discs: `|c₁ − c₂| > R₁ + R₂`.
    pub fn closures_disjoint(&self, other: &Horodisc) -> bool {
        (self.center() - other.center()).norm() > self.radius() + other.radius()
    }

    /// `D(λ) ⊂ D(rζ)` up to rounding.
    pub fn contains_disc_of(&self, lambda: Complex64) -> bool {
        let m = lambda.norm();
        (lambda - self.center()).norm() + (1.0 - m) <= self.radius() + 1e-12
    }
}

pub fn classify_horodisc(h: &Horodisc, z: Complex64) -> Result<Position, DomainError> {
    if z.norm() >= 1.0 {
        return Err(DomainError::OutsideDisc(z));
    }
    Ok(h.classify(z))
}

/// The arc of the unit circle traversed counter-clockwise from `start` to
/// `end`. Closed unless `open` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: Complex64,
    end: Complex64,
    open: bool,
}

impl Arc {
    pub fn closed(start: Complex64, end: Complex64) -> Result<Self, DomainError> {
        Self::build(start, end, false)
    }

    pub fn open(start: Complex64, end: Complex64) -> Result<Self, DomainError> {
        Self::build(start, end, true)
    }

    fn build(start: Complex64, end: Complex64, open: bool) -> Result<Self, DomainError> {
        let start = unimodular(start)?;
        let end = unimodular(end)?;
        if (start - end).norm() <= crate::complex::UNIT_TOL {
            return Err(DomainError::Parameter("arc endpoints coincide".into()));
        }
        Ok(Self { start, end, open })
    }

    pub fn start(&self) -> Complex64 {
        self.start
    }

    pub fn end(&self) -> Complex64 {
        self.end
    }

    pub fn is_open(&self) -> bool {
        self.open
    }

    /// Angular length in `(0, 2π)`.
    pub fn span(&self) -> f64 {
        ccw_angle(self.start, self.end)
    }

    pub fn midpoint(&self) -> Complex64 {
        self.start * Complex64::from_polar(1.0, 0.5 * self.span())
    }

    pub fn contains(&self, zeta: Complex64) -> Result<bool, DomainError> {
        let zeta = unimodular(zeta)?;
        Ok(self.contains_direction(zeta))
    }

    /// Membership test for a direction already known to be unimodular.
    fn contains_direction(&self, zeta: Complex64) -> bool {
        let at_end = (zeta - self.start).norm() <= crate::complex::UNIT_TOL
            || (zeta - self.end).norm() <= crate::complex::UNIT_TOL;
        if at_end {
            return !self.open;
        }
        ccw_angle(self.start, zeta) <= self.span()
    }
}

pub fn arc_contains(a: &Arc, zeta: Complex64) -> Result<bool, DomainError> {
    a.contains(zeta)
}

/// Subsets of the disc used as domains for lower-bound certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionRepr", into = "RegionRepr")]
pub enum RegionSpec {
    /// `D ∖ ∪ clos D(rₙζₙ)` for pairwise disjoint closed horodiscs.
    HorodiscComplement(Vec<Horodisc>),
    /// `{2r−1 < |z| < 1, z/|z| ∈ J} ∖ (clos D(rζ₁) ∪ clos D(rζ₂))` where `J` is
    /// the open arc from `ζ₁` to `ζ₂`.
    SectorPocket { arc: Arc, r: f64 },
    /// The component of `D ∖ (clos D(rζ₁) ∪ clos D(rζ₂))` adjacent to the open
    /// arc from `ζ₁` to `ζ₂`, for horodiscs whose closures meet.
    LensPocket { arc: Arc, r: f64 },
}

impl RegionSpec {
    pub fn horodisc_complement(discs: Vec<Horodisc>) -> Result<Self, DomainError> {
        for (i, a) in discs.iter().enumerate() {
            for b in &discs[i + 1..] {
                if !a.closures_disjoint(b) {
                    return Err(DomainError::Parameter(format!(
                        "closed horodiscs at {} and {} intersect",
                        a.contact, b.contact
                    )));
                }
            }
        }
        Ok(Self::HorodiscComplement(discs))
    }

    pub fn sector_pocket(start: Complex64, end: Complex64, r: f64) -> Result<Self, DomainError> {
        let arc = Arc::open(start, end)?;
        Horodisc::new(arc.start, r)?;
        Ok(Self::SectorPocket { arc, r })
    }

    pub fn lens_pocket(start: Complex64, end: Complex64, r: f64) -> Result<Self, DomainError> {
        let arc = Arc::open(start, end)?;
        let a = Horodisc::new(arc.start, r)?;
        let b = Horodisc::new(arc.end, r)?;
        if a.closures_disjoint(&b) {
            return Err(DomainError::Parameter(
                "lens pocket needs intersecting horodiscs; use a sector pocket".into(),
            ));
        }
        Ok(Self::LensPocket { arc, r })
    }

    /// Horodiscs removed from the disc to form this region.
    pub fn excluded(&self) -> Vec<Horodisc> {
        match self {
            Self::HorodiscComplement(v) => v.clone(),
            Self::SectorPocket { arc, r } | Self::LensPocket { arc, r } => vec![
                Horodisc { contact: arc.start, r: *r },
                Horodisc { contact: arc.end, r: *r },
            ],
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let m = z.norm();
        if !(m < 1.0) {
            return false;
        }
        let outside_all = |discs: &[Horodisc]| discs.iter().all(|h| !h.closure_contains(z));
        match self {
            Self::HorodiscComplement(v) => outside_all(v),
            Self::SectorPocket { arc, r } => {
                m > 2.0 * r - 1.0
                    && m > 0.0
                    && arc.contains_direction(z / m)
                    && outside_all(&self.excluded())
            }
            Self::LensPocket { arc, .. } => {
                if m == 0.0 || !arc.contains_direction(z / m) {
                    return false;
                }
                let discs = self.excluded();
                if !outside_all(&discs) {
                    return false;
                }
                // The outer boundary of the two-disc union is a radial graph over
                // the arc, so the pocket is what sees the arc along its own ray.
                let tip = z / m;
                discs
                    .iter()
                    .all(|h| segment_distance(h.center(), z, tip) > h.radius())
            }
        }
    }
}

pub fn region_contains(s: &RegionSpec, z: Complex64) -> bool {
    s.contains(z)
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - a) * ab.conj()).re / len2
    };
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// Either one parameter shared by all contact points or one per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiusSpec {
    Common(f64),
    PerPoint(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    HorodiscComplement,
    SectorPocket,
    LensPocket,
}

/// Wire form of [`RegionSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionRepr {
    pub kind: RegionKind,
    #[serde(with = "serde_pair::vec")]
    pub contact_points: Vec<Complex64>,
    pub r: RadiusSpec,
}

impl TryFrom<RegionRepr> for RegionSpec {
    type Error = DomainError;

    fn try_from(w: RegionRepr) -> Result<Self, Self::Error> {
        match w.kind {
            RegionKind::HorodiscComplement => {
                let radii = match w.r {
                    RadiusSpec::Common(r) => vec![r; w.contact_points.len()],
                    RadiusSpec::PerPoint(v) => v,
                };
                if radii.len() != w.contact_points.len() {
                    return Err(DomainError::Parameter(format!(
                        "{} contact points but {} radii",
                        w.contact_points.len(),
                        radii.len()
                    )));
                }
                let discs = w
                    .contact_points
                    .iter()
                    .zip(radii)
                    .map(|(&z, r)| Horodisc::new(z, r))
                    .collect::<Result<Vec<_>, _>>()?;
                RegionSpec::horodisc_complement(discs)
            }
            RegionKind::SectorPocket | RegionKind::LensPocket => {
                let [a, b] = w.contact_points[..] else {
                    return Err(DomainError::Parameter(
                        "a pocket takes exactly two contact points".into(),
                    ));
                };
                let RadiusSpec::Common(r) = w.r else {
                    return Err(DomainError::Parameter("a pocket takes a single r".into()));
                };
                if w.kind == RegionKind::SectorPocket {
                    RegionSpec::sector_pocket(a, b, r)
                } else {
                    RegionSpec::lens_pocket(a, b, r)
                }
            }
        }
    }
}

impl From<RegionSpec> for RegionRepr {
    fn from(s: RegionSpec) -> Self {
        match s {
            RegionSpec::HorodiscComplement(v) => RegionRepr {
                kind: RegionKind::HorodiscComplement,
                contact_points: v.iter().map(|h| h.contact).collect(),
                r: RadiusSpec::PerPoint(v.iter().map(|h| h.r).collect()),
            },
            RegionSpec::SectorPocket { arc, r } => RegionRepr {
                kind: RegionKind::SectorPocket,
                contact_points: vec![arc.start, arc.end],
                r: RadiusSpec::Common(r),
            },
            RegionSpec::LensPocket { arc, r } => RegionRepr {
                kind: RegionKind::LensPocket,
                contact_points: vec![arc.start, arc.end],
                r: RadiusSpec::Common(r),
            },
        }
    }
}
