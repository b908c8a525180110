use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use super::{BoundaryPoint, H3PointHalf, MobiusMap};
use crate::error::{GeoError, Result};
use crate::euclid::Vec3;

/// Unoriented geodesic of H³, stored by its two boundary endpoints.
///
/// Endpoints are kept in a normal order: a finite endpoint precedes ∞, and
/// two finite endpoints are ordered by real then imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Geodesic {
    u: BoundaryPoint,
    v: BoundaryPoint,
}

impl H3Geodesic {
    pub fn new(u: BoundaryPoint, v: BoundaryPoint) -> Result<Self> {
        use BoundaryPoint::*;
        match (u, v) {
            (Infinity, Infinity) => Err(GeoError::EqualEndpoints),
            (Finite(a), Finite(b)) if a == b => Err(GeoError::EqualEndpoints),
            (Infinity, Finite(_)) => Ok(Self { u: v, v: u }),
            (Finite(a), Finite(b)) if (b.re, b.im) < (a.re, a.im) => Ok(Self { u: v, v: u }),
            _ => Ok(Self { u, v }),
        }
    }

    /// Vertical line `{z} × ℝ⁺`.
    pub fn vertical(z: Complex64) -> Self {
        Self {
            u: BoundaryPoint::Finite(z),
            v: BoundaryPoint::Infinity,
        }
    }

    pub fn endpoints(&self) -> (BoundaryPoint, BoundaryPoint) {
        (self.u, self.v)
    }

    pub fn is_vertical(&self) -> bool {
        self.v.is_infinite()
    }

    /// Centre and radius of the semicircle; `None` for vertical lines.
    pub fn center_radius(&self) -> Option<(Complex64, f64)> {
        match (self.u, self.v) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => Some(((a + b) * 0.5, (b - a).norm() * 0.5)),
            _ => None,
        }
    }

    /// Point at parameter `s ∈ (0, 1)`. Semicircles are swept by the angle
    /// `sπ` from the first endpoint; vertical lines use height `tan(sπ/2)`.
    pub fn point_at(&self, s: f64) -> Result<H3PointHalf> {
        if !(s > 0.0 && s < 1.0) {
            return Err(GeoError::OutOfDomain {
                value: s,
                domain: "geodesic parameter in (0, 1)",
            });
        }
        match (self.u, self.v) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                let r = (b - a).norm() * 0.5;
                let e = (b - a) / (2.0 * r);
                let theta = s * PI;
                H3PointHalf::new((a + b) * 0.5 - e * (r * theta.cos()), r * theta.sin())
            }
            (BoundaryPoint::Finite(a), BoundaryPoint::Infinity) => H3PointHalf::new(a, (s * FRAC_PI_2).tan()),
            _ => unreachable!("normalized geodesic"),
        }
    }

    /// Hyperbolic distance from `p` to the geodesic. For endpoints `u, v`
    /// and `p = (w, h)`: `sinh d = |(w-u)·conj(w-v) + h²| / (h |u-v|)`.
    pub fn distance_to_point(&self, p: &H3PointHalf) -> f64 {
        match (self.u, self.v) {
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
                let num = ((p.z - u) * (p.z - v).conj() + p.x * p.x).norm();
                (num / (p.x * (u - v).norm())).asinh()
            }
            (BoundaryPoint::Finite(u), BoundaryPoint::Infinity) => ((p.z - u).norm() / p.x).asinh(),
            _ => unreachable!("normalized geodesic"),
        }
    }

    /// Unit tangent at a point of the geodesic, in `(Re z, Im z, x)`
    /// coordinates. Orientation is arbitrary.
    pub fn tangent_at(&self, p: &H3PointHalf) -> Vec3 {
        match self.center_radius() {
            None => Vec3::z(),
            Some((c, _)) => {
                let (a, b) = (self.u.as_finite().unwrap(), self.v.as_finite().unwrap());
                let e = (b - a) / (b - a).norm();
                let sigma = ((p.z - c) * e.conj()).re;
                let t = Vec3::new(-p.x * e.re, -p.x * e.im, sigma);
                t / t.norm()
            }
        }
    }

    /// Endpoint-set discrepancy: the smaller, over both pairings, of the
    /// larger endpoint distance. Infinite if exactly one side is vertical.
    pub fn mismatch(&self, other: &H3Geodesic) -> f64 {
        let direct = self.u.distance(&other.u).max(self.v.distance(&other.v));
        let swapped = self.u.distance(&other.v).max(self.v.distance(&other.u));
        direct.min(swapped)
    }

    pub fn image(&self, m: &MobiusMap) -> H3Geodesic {
        H3Geodesic::new(m.apply(&self.u), m.apply(&self.v)).expect("Möbius maps are injective")
    }

    /// Möbius map sending this geodesic to the vertical line over 0
    /// (first endpoint to 0, second to ∞).
    pub fn to_standard_axis(&self) -> MobiusMap {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match (self.u, self.v) {
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => MobiusMap {
                a: one,
                b: -u,
                c: one,
                d: -v,
            },
            (BoundaryPoint::Finite(u), BoundaryPoint::Infinity) => MobiusMap {
                a: one,
                b: -u,
                c: zero,
                d: one,
            },
            _ => unreachable!("normalized geodesic"),
        }
    }
}

pub fn geodesic_from_endpoints(u: BoundaryPoint, v: BoundaryPoint) -> Result<H3Geodesic> {
    H3Geodesic::new(u, v)
}

pub fn point_on_geodesic(g: &H3Geodesic, s: f64) -> Result<H3PointHalf> {
    g.point_at(s)
}

/// Geodesic through `p` with tangent `tangent` (Cartesian `(Re z, Im z, x)`).
pub fn geodesic_through(p: &H3PointHalf, tangent: &Vec3) -> Result<H3Geodesic> {
    let horizontal = Complex64::new(tangent.x, tangent.y);
    let hn = horizontal.norm();
    if !(tangent.norm() > 0.0) || !tangent.norm().is_finite() {
        return Err(GeoError::InvalidParameter("tangent must be nonzero".into()));
    }
    if hn <= 1e-15 * tangent.norm() {
        return Ok(H3Geodesic::vertical(p.z));
    }
    // The semicircle lies in the vertical plane along `e`; its centre sits at
    // signed offset `x · t_x / |t_h|` from `p` along `e`.
    let e = horizontal / hn;
    let offset = p.x * tangent.z / hn;
    let radius = p.x.hypot(offset);
    let centre = p.z + e * offset;
    H3Geodesic::new(
        BoundaryPoint::Finite(centre - e * radius),
        BoundaryPoint::Finite(centre + e * radius),
    )
}

/// Relative position of two geodesics: the infimum distance between their
/// point sets, and the angle between them along the common perpendicular
/// (the crossing angle when they meet).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSeparation {
    pub distance: f64,
    pub angle: f64,
    /// The geodesics share exactly one endpoint: the infimum 0 is
    /// approached at the boundary but never attained.
    pub asymptotic: bool,
}

/// Computes the separation from the complex distance δ,
/// `cosh δ = (p + q) / (p - q)`, where `p, q` are the endpoints of `g2`
/// after `g1` is moved to the vertical axis over 0.
pub fn separation(g1: &H3Geodesic, g2: &H3Geodesic, endpoint_tol: f64) -> GeodesicSeparation {
    let shared = [g1.u, g1.v]
        .iter()
        .any(|a| [g2.u, g2.v].iter().any(|b| a.distance(b) < endpoint_tol));
    if shared {
        return GeodesicSeparation {
            distance: 0.0,
            angle: 0.0,
            asymptotic: true,
        };
    }
    let m = g1.to_standard_axis();
    let (p, q) = match (m.apply(&g2.u), m.apply(&g2.v)) {
        (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => (p, q),
        _ => {
            return GeodesicSeparation {
                distance: 0.0,
                angle: 0.0,
                asymptotic: true,
            }
        }
    };
    let delta = ((p + q) / (p - q)).acosh();
    let mut angle = delta.im.abs() % PI;
    if angle > FRAC_PI_2 {
        angle = PI - angle;
    }
    GeodesicSeparation {
        distance: delta.re.abs(),
        angle,
        asymptotic: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicRelation {
    Equal,
    Intersecting,
    Disjoint,
}

/// `Equal` when the endpoint sets agree within `tol`; `Intersecting` when
/// the geodesics meet at an interior point (attained distance below `tol`);
/// otherwise `Disjoint`, including asymptotic pairs.
pub fn geodesic_relation(g1: &H3Geodesic, g2: &H3Geodesic, tol: f64) -> GeodesicRelation {
    if g1.mismatch(g2) < tol {
        return GeodesicRelation::Equal;
    }
    let sep = separation(g1, g2, tol);
    if !sep.asymptotic && sep.distance < tol {
        GeodesicRelation::Intersecting
    } else {
        GeodesicRelation::Disjoint
    }
}
