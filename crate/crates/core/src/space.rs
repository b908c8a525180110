//! Space-agnostic wrappers so checks can treat E³ and H³ uniformly.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{GeoError, Result};
use crate::euclid::{line_angle, lines_relation, EucLine, EuclideanIsometry, LineRelation, Vec3};
use crate::fibration::BoundaryTransform;
use crate::hyper::{geodesic_relation, hyperbolic_distance, separation, GeodesicRelation, H3Geodesic, H3PointHalf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    E3,
    H3,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::E3 => "E3",
            Space::H3 => "H3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    E3(Vec3),
    H3(H3PointHalf),
}

impl Point {
    pub fn space(&self) -> Space {
        match self {
            Point::E3(_) => Space::E3,
            Point::H3(_) => Space::H3,
        }
    }

    /// Cartesian coordinates; `(Re z, Im z, x)` in the half-space.
    pub fn to_vec3(&self) -> Vec3 {
        match self {
            Point::E3(v) => *v,
            Point::H3(p) => p.to_vec3(),
        }
    }

    pub fn distance(&self, other: &Point) -> Result<f64> {
        match (self, other) {
            (Point::E3(a), Point::E3(b)) => Ok((a - b).norm()),
            (Point::H3(a), Point::H3(b)) => Ok(hyperbolic_distance(a, b)),
            _ => Err(mismatch_err()),
        }
    }
}

fn mismatch_err() -> GeoError {
    GeoError::SpaceMismatch("E3 and H3 objects cannot be mixed".into())
}

/// A fiber: a line of E³ or a geodesic of H³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fiber {
    Line(EucLine),
    Geodesic(H3Geodesic),
}

/// How two fibers sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FiberRelation {
    Equal,
    /// Meet at an interior point, at the given angle in `(0, π/2]`.
    Intersecting {
        angle: f64,
    },
    /// Parallel, skew, disjoint or asymptotic.
    Apart,
}

impl Fiber {
    pub fn space(&self) -> Space {
        match self {
            Fiber::Line(_) => Space::E3,
            Fiber::Geodesic(_) => Space::H3,
        }
    }

    /// Point at parameter `u ∈ (0, 1)`. Lines are covered through
    /// `base + tan((u - ½)π) · direction`.
    pub fn point_at(&self, u: f64) -> Result<Point> {
        if !(u > 0.0 && u < 1.0) {
            return Err(GeoError::OutOfDomain {
                value: u,
                domain: "fiber parameter in (0, 1)",
            });
        }
        match self {
            Fiber::Line(l) => Ok(Point::E3(l.point_at(((u - 0.5) * PI).tan()))),
            Fiber::Geodesic(g) => g.point_at(u).map(Point::H3),
        }
    }

    pub fn distance_to(&self, p: &Point) -> Result<f64> {
        match (self, p) {
            (Fiber::Line(l), Point::E3(v)) => Ok(l.distance_to_point(v)),
            (Fiber::Geodesic(g), Point::H3(q)) => Ok(g.distance_to_point(q)),
            _ => Err(mismatch_err()),
        }
    }

    /// Unit tangent at a point of the fiber, in Cartesian coordinates.
    pub fn tangent_at(&self, p: &Point) -> Result<Vec3> {
        match (self, p) {
            (Fiber::Line(l), Point::E3(_)) => Ok(l.direction),
            (Fiber::Geodesic(g), Point::H3(q)) => Ok(g.tangent_at(q)),
            _ => Err(mismatch_err()),
        }
    }

    /// Zero iff the fibers coincide; `+∞` across spaces.
    pub fn mismatch(&self, other: &Fiber) -> f64 {
        match (self, other) {
            (Fiber::Line(a), Fiber::Line(b)) => a.mismatch(b).max(b.mismatch(a)),
            (Fiber::Geodesic(a), Fiber::Geodesic(b)) => a.mismatch(b),
            _ => f64::INFINITY,
        }
    }

    pub fn relation(&self, other: &Fiber, tol: f64) -> Result<FiberRelation> {
        match (self, other) {
            (Fiber::Line(a), Fiber::Line(b)) => Ok(match lines_relation(a, b, tol) {
                LineRelation::Equal => FiberRelation::Equal,
                LineRelation::Intersecting => FiberRelation::Intersecting {
                    angle: line_angle(a, b),
                },
                _ => FiberRelation::Apart,
            }),
            (Fiber::Geodesic(a), Fiber::Geodesic(b)) => Ok(match geodesic_relation(a, b, tol) {
                GeodesicRelation::Equal => FiberRelation::Equal,
                GeodesicRelation::Intersecting => FiberRelation::Intersecting {
                    angle: separation(a, b, tol).angle,
                },
                GeodesicRelation::Disjoint => FiberRelation::Apart,
            }),
            _ => Err(mismatch_err()),
        }
    }
}

/// Isometry of E³ or H³ (the latter given by its boundary action).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Isometry {
    Euclidean(EuclideanIsometry),
    Boundary(BoundaryTransform),
}

impl Isometry {
    pub fn space(&self) -> Space {
        match self {
            Isometry::Euclidean(_) => Space::E3,
            Isometry::Boundary(_) => Space::H3,
        }
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        match (self, p) {
            (Isometry::Euclidean(g), Point::E3(v)) => Ok(Point::E3(g.apply(v))),
            (Isometry::Boundary(g), Point::H3(q)) => Ok(Point::H3(g.extend(q))),
            _ => Err(mismatch_err()),
        }
    }

    pub fn image(&self, fiber: &Fiber) -> Result<Fiber> {
        match (self, fiber) {
            (Isometry::Euclidean(g), Fiber::Line(l)) => Ok(Fiber::Line(g.image_of_line(l))),
            (Isometry::Boundary(g), Fiber::Geodesic(h)) => Ok(Fiber::Geodesic(g.image_of_geodesic(h))),
            _ => Err(mismatch_err()),
        }
    }

    pub fn inverse(&self) -> Isometry {
        match self {
            Isometry::Euclidean(g) => Isometry::Euclidean(g.inverse()),
            Isometry::Boundary(g) => Isometry::Boundary(g.inverse()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        match (self, other) {
            (Isometry::Euclidean(a), Isometry::Euclidean(b)) => Ok(Isometry::Euclidean(a.compose(b))),
            (Isometry::Boundary(a), Isometry::Boundary(b)) => Ok(Isometry::Boundary(a.compose(b))),
            _ => Err(mismatch_err()),
        }
    }
}

impl From<EuclideanIsometry> for Isometry {
    fn from(g: EuclideanIsometry) -> Self {
        Isometry::Euclidean(g)
    }
}

impl From<BoundaryTransform> for Isometry {
    fn from(g: BoundaryTransform) -> Self {
        Isometry::Boundary(g)
    }
}

impl From<crate::hyper::MobiusMap> for Isometry {
    fn from(m: crate::hyper::MobiusMap) -> Self {
        Isometry::Boundary(BoundaryTransform::mobius(m))
    }
}
