//! Euclidean 3-space: rigid motions, lines and screw-motion exponentials.

mod catalog;

pub use catalog::{catalog_e3, E3Group, SubgroupSpecE3};

use nalgebra::{Matrix3, Vector3};
use std::f64::consts::PI;
use std::ops::{Add, Mul};

use crate::error::{GeoError, Result};

pub type Vec3 = Vector3<f64>;

const ORTHO_TOL: f64 = 1e-12;

fn skew(v: &Vec3) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Rotation matrix by `angle` about the unit vector `axis` (Rodrigues).
pub fn rotation_matrix(axis: &Vec3, angle: f64) -> Matrix3<f64> {
    let k = skew(axis);
    Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos())
}

/// Orientation-preserving rigid motion `p ↦ R p + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanIsometry {
    rotation: Matrix3<f64>,
    translation: Vec3,
}

impl EuclideanIsometry {
    pub fn new(rotation: Matrix3<f64>, translation: Vec3) -> Result<Self> {
        let ortho_err = (rotation.transpose() * rotation - Matrix3::identity()).amax();
        if ortho_err > ORTHO_TOL * 10.0 {
            return Err(GeoError::InvalidParameter(format!(
                "rotation is not orthogonal (error {ortho_err:e})"
            )));
        }
        if rotation.determinant() < 0.0 {
            return Err(GeoError::InvalidParameter("rotation must have determinant +1".into()));
        }
        if !translation.iter().all(|c| c.is_finite()) {
            return Err(GeoError::InvalidParameter("non-finite translation".into()));
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn from_translation(v: Vec3) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: v,
        }
    }

    /// Rotation by `angle` about the line through `point` with direction `axis`.
    pub fn from_rotation(point: Vec3, axis: Vec3, angle: f64) -> Self {
        let r = rotation_matrix(&axis.normalize(), angle);
        Self {
            rotation: r,
            translation: point - r * point,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vec3 {
        &self.translation
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    /// Action on free vectors (directions).
    pub fn apply_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn image_of_line(&self, line: &EucLine) -> EucLine {
        EucLine {
            base: self.apply(&line.base),
            direction: self.apply_vector(&line.direction),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rotation - other.rotation).amax() < tol && (self.translation - other.translation).amax() < tol
    }

    /// Largest deviation from `RᵀR = I` and `det R = 1`.
    pub fn orthogonality_error(&self) -> f64 {
        let o = (self.rotation.transpose() * self.rotation - Matrix3::identity()).amax();
        o.max((self.rotation.determinant() - 1.0).abs())
    }
}

/// Which one-parameter motion a generator produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionKind {
    Rotation,
    Translation,
    Screw,
}

/// One-parameter group of screw motions about a fixed axis.
///
/// At parameter `s` the flow rotates by `rotation_rate * s` about the axis
/// and translates by `translation_rate * s` along it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScrewGenerator {
    pub axis_point: Vec3,
    pub axis_direction: Vec3,
    pub rotation_rate: f64,
    pub translation_rate: f64,
}

impl ScrewGenerator {
    pub fn new(axis_point: Vec3, axis_direction: Vec3, rotation_rate: f64, translation_rate: f64) -> Result<Self> {
        let n = axis_direction.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(GeoError::InvalidParameter("axis direction must be nonzero".into()));
        }
        if rotation_rate == 0.0 && translation_rate == 0.0 {
            return Err(GeoError::InvalidParameter(
                "screw generator needs a nonzero rate".into(),
            ));
        }
        Ok(Self {
            axis_point,
            axis_direction: axis_direction / n,
            rotation_rate,
            translation_rate,
        })
    }

    pub fn translation(direction: Vec3) -> Self {
        Self::new(Vec3::zeros(), direction, 0.0, 1.0).expect("nonzero direction")
    }

    pub fn rotation(axis_point: Vec3, axis_direction: Vec3) -> Self {
        Self::new(axis_point, axis_direction, 1.0, 0.0).expect("nonzero direction")
    }

    pub fn kind(&self) -> MotionKind {
        match (self.rotation_rate != 0.0, self.translation_rate != 0.0) {
            (true, true) => MotionKind::Screw,
            (true, false) => MotionKind::Rotation,
            _ => MotionKind::Translation,
        }
    }

    /// Killing field of the flow, evaluated at `p`.
    pub fn velocity(&self, p: &Vec3) -> Vec3 {
        self.twist().velocity(p)
    }

    pub fn twist(&self) -> Twist {
        let omega = self.axis_direction * self.rotation_rate;
        Twist {
            omega,
            v: -omega.cross(&self.axis_point) + self.axis_direction * self.translation_rate,
        }
    }

    /// Parameter at which the flow has turned by π, if it rotates at all.
    pub fn half_turn(&self) -> Option<f64> {
        (self.rotation_rate != 0.0).then(|| PI / self.rotation_rate.abs())
    }
}

/// Closed-form exponential of a screw generator (Rodrigues rotation about
/// the axis plus translation along it).
pub fn exp_screw(g: &ScrewGenerator, s: f64) -> EuclideanIsometry {
    let r = rotation_matrix(&g.axis_direction, g.rotation_rate * s);
    let q = g.axis_point;
    EuclideanIsometry {
        rotation: r,
        translation: q - r * q + g.axis_direction * (g.translation_rate * s),
    }
}

/// Element of the Lie algebra of E(3): the Killing field `p ↦ ω × p + v`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Twist {
    pub omega: Vec3,
    pub v: Vec3,
}

impl Twist {
    pub fn velocity(&self, p: &Vec3) -> Vec3 {
        self.omega.cross(p) + self.v
    }

    /// Screw axis of the twist; `None` for the zero twist.
    pub fn to_screw(&self) -> Option<ScrewGenerator> {
        let w = self.omega.norm();
        if w < 1e-14 {
            let vn = self.v.norm();
            return (vn > 0.0).then(|| ScrewGenerator {
                axis_point: Vec3::zeros(),
                axis_direction: self.v / vn,
                rotation_rate: 0.0,
                translation_rate: vn,
            });
        }
        let n = self.omega / w;
        Some(ScrewGenerator {
            axis_point: self.omega.cross(&self.v) / (w * w),
            axis_direction: n,
            rotation_rate: w,
            translation_rate: n.dot(&self.v),
        })
    }

    pub fn exp(&self, s: f64) -> EuclideanIsometry {
        match self.to_screw() {
            Some(g) => exp_screw(&g, s),
            None => EuclideanIsometry::identity(),
        }
    }
}

impl Add for Twist {
    type Output = Twist;
    fn add(self, rhs: Twist) -> Twist {
        Twist {
            omega: self.omega + rhs.omega,
            v: self.v + rhs.v,
        }
    }
}

impl Mul<f64> for Twist {
    type Output = Twist;
    fn mul(self, rhs: f64) -> Twist {
        Twist {
            omega: self.omega * rhs,
            v: self.v * rhs,
        }
    }
}

/// An unoriented line in E³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EucLine {
    pub base: Vec3,
    pub direction: Vec3,
}

impl EucLine {
    pub fn new(base: Vec3, direction: Vec3) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(GeoError::InvalidParameter("line direction must be nonzero".into()));
        }
        Ok(Self {
            base,
            direction: direction / n,
        })
    }

    pub fn through(a: Vec3, b: Vec3) -> Result<Self> {
        Self::new(a, b - a)
    }

    pub fn point_at(&self, s: f64) -> Vec3 {
        self.base + self.direction * s
    }

    pub fn distance_to_point(&self, p: &Vec3) -> f64 {
        let d = p - self.base;
        (d - self.direction * d.dot(&self.direction)).norm()
    }

    /// Point-set discrepancy: sine of the angle between the lines plus
    /// the offset of `other.base` from `self`. Zero iff the lines coincide.
    pub fn mismatch(&self, other: &EucLine) -> f64 {
        self.direction.cross(&other.direction).norm() + self.distance_to_point(&other.base)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineRelation {
    Equal,
    Parallel,
    Intersecting,
    Skew,
}

pub fn lines_relation(l1: &EucLine, l2: &EucLine, tol: f64) -> LineRelation {
    let cross = l1.direction.cross(&l2.direction);
    let sin = cross.norm();
    let offset = l2.base - l1.base;
    if sin < tol {
        if l1.distance_to_point(&l2.base).max(l2.distance_to_point(&l1.base)) < tol {
            LineRelation::Equal
        } else {
            LineRelation::Parallel
        }
    } else if (offset.dot(&cross) / sin).abs() < tol {
        LineRelation::Intersecting
    } else {
        LineRelation::Skew
    }
}

/// Acute angle between the directions of two lines, in `[0, π/2]`.
pub fn line_angle(l1: &EucLine, l2: &EucLine) -> f64 {
    let c = l1.direction.cross(&l2.direction).norm();
    c.atan2(l1.direction.dot(&l2.direction).abs())
}
