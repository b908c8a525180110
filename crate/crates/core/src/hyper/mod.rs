//! Hyperbolic 3-space in the upper half-space model `ℂ × ℝ⁺`, with the
//! Poincaré ball as an alternative chart.

mod catalog;
mod geodesic;
mod mobius;

pub use catalog::{catalog_h3, H3Group, MobiusFamily, Sl2Element, SubgroupSpecH3};
pub use geodesic::{
    geodesic_from_endpoints, geodesic_relation, geodesic_through, point_on_geodesic, separation, GeodesicRelation,
    GeodesicSeparation, H3Geodesic,
};
pub use mobius::{BoundaryPoint, MobiusMap};

use num_complex::Complex64;

use crate::error::{GeoError, Result};
use crate::euclid::Vec3;

/// Point `(z, x)` of the upper half-space, `x > 0` the height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3PointHalf {
    pub z: Complex64,
    pub x: f64,
}

impl H3PointHalf {
    pub fn new(z: Complex64, x: f64) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(GeoError::OutOfDomain {
                value: x,
                domain: "height x > 0",
            });
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(GeoError::InvalidParameter("non-finite horizontal coordinate".into()));
        }
        Ok(Self { z, x })
    }

    /// The basepoint `(0, 1)`, centre of the ball under [`to_ball`].
    pub fn basepoint() -> Self {
        Self {
            z: Complex64::new(0.0, 0.0),
            x: 1.0,
        }
    }

    /// Cartesian coordinates `(Re z, Im z, x)`.
    pub fn to_vec3(&self) -> Vec3 {
        Vec3::new(self.z.re, self.z.im, self.x)
    }

    pub fn from_vec3(v: &Vec3) -> Result<Self> {
        Self::new(Complex64::new(v.x, v.y), v.z)
    }
}

/// Point of the Poincaré ball, `‖v‖ < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3PointBall {
    pub v: Vec3,
}

impl H3PointBall {
    pub fn new(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !(n < 1.0) {
            return Err(GeoError::OutOfDomain {
                value: n,
                domain: "ball norm < 1",
            });
        }
        Ok(Self { v })
    }
}

/// Hyperbolic distance in the half-space model,
/// `cosh d = 1 + (|Δz|² + Δx²) / (2 x_p x_q)`, evaluated in the
/// cancellation-free form `d = 2 asinh(‖Δ‖ / (2 √(x_p x_q)))`.
pub fn hyperbolic_distance(p: &H3PointHalf, q: &H3PointHalf) -> f64 {
    let dz = p.z - q.z;
    let chord = (dz.norm_sqr() + (p.x - q.x).powi(2)).sqrt();
    2.0 * (chord / (2.0 * (p.x * q.x).sqrt())).asinh()
}

pub fn ball_distance(p: &H3PointBall, q: &H3PointBall) -> f64 {
    let num = 2.0 * (p.v - q.v).norm_squared();
    let den = (1.0 - p.v.norm_squared()) * (1.0 - q.v.norm_squared());
    (1.0 + num / den).acosh()
}

/// Inversion in the sphere of radius √2 about `(0,0,-1)`; swaps the
/// half-space and the unit ball and is its own inverse.
fn cayley_inversion(y: &Vec3) -> Vec3 {
    let d = y.x * y.x + y.y * y.y + (y.z + 1.0).powi(2);
    Vec3::new(2.0 * y.x, 2.0 * y.y, 1.0 - y.norm_squared()) / d
}

/// Half-space to ball. `(0,1)` goes to the origin and the vertical plane
/// over the real axis goes to the equatorial plane `z = 0`.
pub fn to_ball(p: &H3PointHalf) -> H3PointBall {
    let w = cayley_inversion(&p.to_vec3());
    H3PointBall {
        v: Vec3::new(w.x, w.z, w.y),
    }
}

pub fn to_half(b: &H3PointBall) -> H3PointHalf {
    let w = Vec3::new(b.v.x, b.v.z, b.v.y);
    let y = cayley_inversion(&w);
    H3PointHalf {
        z: Complex64::new(y.x, y.y),
        x: y.z,
    }
}
