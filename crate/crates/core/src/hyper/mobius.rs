use num_complex::Complex64;
use std::fmt;

use super::H3PointHalf;
use crate::error::{GeoError, Result};

const POLE_EPS: f64 = 1e-14;

/// Point of the Riemann sphere `ℂ ∪ {∞}`, the boundary of the half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(re: f64, im: f64) -> Self {
        BoundaryPoint::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            BoundaryPoint::Finite(z) => Some(*z),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Euclidean distance between finite points; 0 between two infinities
    /// and `+∞` between a finite point and ∞.
    pub fn distance(&self, other: &BoundaryPoint) -> f64 {
        match (self, other) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => (a - b).norm(),
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }

    pub fn conj(&self) -> BoundaryPoint {
        match self {
            BoundaryPoint::Finite(z) => BoundaryPoint::Finite(z.conj()),
            BoundaryPoint::Infinity => BoundaryPoint::Infinity,
        }
    }
}

impl From<Complex64> for BoundaryPoint {
    fn from(z: Complex64) -> Self {
        BoundaryPoint::Finite(z)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            BoundaryPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// Fractional linear map `w ↦ (a w + b) / (c w + d)`, defined up to a
/// common nonzero scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        let det = m.det();
        if !(det.norm() > 0.0) || !det.norm().is_finite() {
            return Err(GeoError::SingularMobius);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// Similitude `w ↦ scale · w + shift`.
    pub fn affine(scale: Complex64, shift: Complex64) -> Result<Self> {
        Self::new(scale, shift, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Representative with `ad - bc = 1`.
    pub fn normalized(&self) -> Self {
        let k = self.det().sqrt().inv();
        self.scaled(k)
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
            d: self.d * k,
        }
    }

    pub fn apply(&self, p: &BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Finite(w) => {
                let den = self.c * w + self.d;
                // Relative cutoff so a rounded pole still lands on ∞.
                if den.norm() <= POLE_EPS * ((self.c * w).norm() + self.d.norm()) {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * w + self.b) / den)
                }
            }
            BoundaryPoint::Infinity => {
                if self.c == Complex64::new(0.0, 0.0) {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
        }
    }

    /// Poincaré extension to the half-space interior:
    /// `z' = ((a z + b)·conj(c z + d) + a·conj(c)·x²) / D`,
    /// `x' = |ad - bc| x / D`, `D = |c z + d|² + |c|² x²`.
    pub fn extend(&self, p: &H3PointHalf) -> H3PointHalf {
        let czd = self.c * p.z + self.d;
        let x2 = p.x * p.x;
        let den = czd.norm_sqr() + self.c.norm_sqr() * x2;
        let z = ((self.a * p.z + self.b) * czd.conj() + self.a * self.c.conj() * x2) / den;
        H3PointHalf {
            z,
            x: self.det().norm() * p.x / den,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
        .rescaled()
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Map with conjugated coefficients, `w ↦ conj(m(conj w))`.
    pub fn conj_coefficients(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: self.b.conj(),
            c: self.c.conj(),
            d: self.d.conj(),
        }
    }

    /// Equality as maps: the coefficient vectors are proportional.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let p = self.normalized();
        let q = other.normalized();
        let diff = |s: f64| {
            [(p.a, q.a), (p.b, q.b), (p.c, q.c), (p.d, q.d)]
                .iter()
                .map(|(x, y)| (x - y * s).norm())
                .fold(0.0, f64::max)
        };
        diff(1.0).min(diff(-1.0)) < tol
    }

    // Keep coefficients O(1) so long products do not overflow.
    fn rescaled(self) -> Self {
        let m = [self.a, self.b, self.c, self.d]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if m > 1e100 || (m > 0.0 && m < 1e-100) {
            self.scaled(Complex64::new(1.0 / m, 0.0))
        } else {
            self
        }
    }
}
