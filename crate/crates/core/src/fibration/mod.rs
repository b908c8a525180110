//! The fiberwise homogeneous fibrations `F_t` of E³ and `F_z`, `F_∞` of H³.

mod boundary;
mod canonical;
mod solver;

pub use boundary::BoundaryTransform;
pub use canonical::{canonicalize_z, flip_z, in_s, reflect_imaginary_z, CanonStep, CanonicalZ};
pub use solver::{fiber_h3_z, fiber_h3_z_bracketed, offset_for, LAMBDA_RANGE, SOLVER_RESIDUAL};

use std::fmt;

use num_complex::Complex64;

use crate::error::{GeoError, Result};
use crate::euclid::{EucLine, EuclideanIsometry, Vec3};
use crate::hyper::{BoundaryPoint, H3Geodesic, H3PointHalf, MobiusMap};
use crate::space::{Fiber, Isometry, Point, Space};

/// Mismatch below which a line or geodesic is accepted as a fiber.
pub const FIBER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fibration {
    /// Integral lines of `(cos tz, sin tz, 0)`, `t ≥ 0`.
    EuclideanFt { t: f64 },
    /// `⟨Hyp,Par⟩`-orbit of the geodesic from `-i` to `z`, `Im z > 0`.
    HyperbolicFz { z: Complex64 },
    /// Vertical lines of the upper half-space.
    HyperbolicFInf,
}

/// Isometry relating an unnormalized parameter to the stored one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParameterWitness {
    Identity,
    /// `(x, y, z) ↦ (x, -y, z)` carries `F_{-t}` onto `F_t`.
    MirrorY,
}

impl Fibration {
    pub fn euclidean(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(GeoError::InvalidParameter(format!("t must be finite, got {t}")));
        }
        if t < 0.0 {
            return Err(GeoError::InvalidParameter(format!(
                "t must be ≥ 0; F_{t} is the mirror image of F_{}",
                -t
            )));
        }
        Ok(Fibration::EuclideanFt { t })
    }

    /// Accepts any finite `t`, storing `|t|` and the mirror used.
    pub fn euclidean_normalized(t: f64) -> Result<(Self, ParameterWitness)> {
        let f = Self::euclidean(t.abs())?;
        let w = if t < 0.0 {
            ParameterWitness::MirrorY
        } else {
            ParameterWitness::Identity
        };
        Ok((f, w))
    }

    pub fn hyperbolic(z: Complex64) -> Result<Self> {
        if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(GeoError::InvalidParameter(format!(
                "F_z needs Im z > 0, got {z}; canonical representatives satisfy Re z ≥ 0, Im z ≥ 1"
            )));
        }
        Ok(Fibration::HyperbolicFz { z })
    }

    pub fn hyperbolic_infinity() -> Self {
        Fibration::HyperbolicFInf
    }

    pub fn space(&self) -> Space {
        match self {
            Fibration::EuclideanFt { .. } => Space::E3,
            _ => Space::H3,
        }
    }

    pub fn fiber_through(&self, p: &Point) -> Result<Fiber> {
        match (self, p) {
            (Fibration::EuclideanFt { t }, Point::E3(v)) => Ok(Fiber::Line(fiber_e3(*t, v))),
            (Fibration::HyperbolicFz { z }, Point::H3(q)) => Ok(Fiber::Geodesic(fiber_h3_z(*z, q)?.0)),
            (Fibration::HyperbolicFInf, Point::H3(q)) => Ok(Fiber::Geodesic(fiber_h3_inf(q))),
            _ => Err(GeoError::SpaceMismatch(format!("{self} lives in {}", self.space()))),
        }
    }

    pub fn equivalence_invariant(&self) -> EquivalenceTag {
        match self {
            Fibration::EuclideanFt { t } => EquivalenceTag::Euclidean(t.abs()),
            Fibration::HyperbolicFz { z } => {
                EquivalenceTag::Hyperbolic(canonicalize_z(*z).expect("validated at construction").z)
            }
            Fibration::HyperbolicFInf => EquivalenceTag::Infinity,
        }
    }
}

impl fmt::Display for Fibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fibration::EuclideanFt { t } => write!(f, "F_t(t={t})"),
            Fibration::HyperbolicFz { z } => write!(f, "F_z(z={})", fmt_complex(*z)),
            Fibration::HyperbolicFInf => f.write_str("F_inf"),
        }
    }
}

/// `a+bi` / `a-bi`, the form accepted by the command line.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Complete invariant of a fibration up to isometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquivalenceTag {
    Euclidean(f64),
    Hyperbolic(Complex64),
    Infinity,
}

impl EquivalenceTag {
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (Self::Euclidean(a), Self::Euclidean(b)) => (a - b).abs() <= tol,
            (Self::Hyperbolic(a), Self::Hyperbolic(b)) => (a - b).norm() <= tol,
            (Self::Infinity, Self::Infinity) => true,
            _ => false,
        }
    }
}

impl fmt::Display for EquivalenceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Euclidean(t) => write!(f, "{t}"),
            Self::Hyperbolic(z) => f.write_str(&fmt_complex(*z)),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// Line through `p` with direction `(cos(t p_z), sin(t p_z), 0)`.
pub fn fiber_e3(t: f64, p: &Vec3) -> EucLine {
    let (s, c) = (t * p.z).sin_cos();
    EucLine {
        base: *p,
        direction: Vec3::new(c, s, 0.0),
    }
}

pub fn fiber_h3_inf(p: &H3PointHalf) -> H3Geodesic {
    H3Geodesic::vertical(p.z)
}

/// Position of a fiber of `F_z`: endpoints `(a - λi, a + λz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypFiberCoords {
    pub lambda: f64,
    pub a: f64,
}

impl HypFiberCoords {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() || !a.is_finite() {
            return Err(GeoError::InvalidParameter(format!(
                "fiber coordinates need λ > 0 and finite a, got ({lambda}, {a})"
            )));
        }
        Ok(Self { lambda, a })
    }

    pub fn geodesic(&self, z: Complex64) -> Result<H3Geodesic> {
        let a = Complex64::new(self.a, 0.0);
        H3Geodesic::new(
            BoundaryPoint::Finite(a - Complex64::i() * self.lambda),
            BoundaryPoint::Finite(a + z * self.lambda),
        )
    }

    /// Element of `⟨Hyp,Par⟩` taking the fiber `self` to `other`.
    pub fn mapping_to(&self, other: &Self) -> MobiusMap {
        let k = other.lambda / self.lambda;
        MobiusMap::affine(Complex64::new(k, 0.0), Complex64::new(other.a - k * self.a, 0.0)).expect("positive scale")
    }
}

/// A partition of E³ or H³ into geodesics, queried pointwise.
pub trait FiberField {
    fn space(&self) -> Space;

    fn fiber_through(&self, p: &Point) -> Result<Fiber>;

    fn equivalence_invariant(&self) -> EquivalenceTag;

    /// Distance of `fiber` from the fiber through its own midpoint.
    fn fiber_mismatch(&self, fiber: &Fiber) -> Result<f64> {
        let p = fiber.point_at(0.5)?;
        Ok(self.fiber_through(&p)?.mismatch(fiber))
    }
}

impl FiberField for Fibration {
    fn space(&self) -> Space {
        Fibration::space(self)
    }

    fn fiber_through(&self, p: &Point) -> Result<Fiber> {
        Fibration::fiber_through(self, p)
    }

    fn equivalence_invariant(&self) -> EquivalenceTag {
        Fibration::equivalence_invariant(self)
    }
}

/// Image of a fibration under an isometry `T`: fibers `T(F)`.
#[derive(Debug, Clone)]
pub struct Conjugated<F> {
    inner: F,
    forward: Isometry,
    backward: Isometry,
}

impl<F: FiberField> Conjugated<F> {
    pub fn inner(&self) -> &F {
        &self.inner
    }

    pub fn isometry(&self) -> &Isometry {
        &self.forward
    }
}

impl<F: FiberField> FiberField for Conjugated<F> {
    fn space(&self) -> Space {
        self.inner.space()
    }

    fn fiber_through(&self, p: &Point) -> Result<Fiber> {
        let q = self.backward.apply(p)?;
        self.forward.image(&self.inner.fiber_through(&q)?)
    }

    fn equivalence_invariant(&self) -> EquivalenceTag {
        self.inner.equivalence_invariant()
    }
}

pub fn conjugate_fibration<F: FiberField>(f: F, t: Isometry) -> Result<Conjugated<F>> {
    if f.space() != t.space() {
        return Err(GeoError::SpaceMismatch(format!(
            "fibration of {} conjugated by an isometry of {}",
            f.space(),
            t.space()
        )));
    }
    Ok(Conjugated {
        inner: f,
        backward: t.inverse(),
        forward: t,
    })
}

fn require_fiber(f: &Fibration, fiber: &Fiber) -> Result<()> {
    let mismatch = f.fiber_mismatch(fiber)?;
    if mismatch > FIBER_TOL {
        return Err(GeoError::NotAFiber { mismatch });
    }
    Ok(())
}

/// Isometry preserving `f` and taking fiber `a` onto fiber `b`.
///
/// `F_t`: a screw along the z-axis by the height difference, then a
/// horizontal translation. `F_z`: a real affine map. `F_∞`: a horizontal
/// translation.
pub fn transitivity_witness(f: &Fibration, a: &Fiber, b: &Fiber) -> Result<Isometry> {
    require_fiber(f, a)?;
    require_fiber(f, b)?;
    match (f, a, b) {
        (Fibration::EuclideanFt { t }, Fiber::Line(la), Fiber::Line(lb)) => {
            let dz = lb.base.z - la.base.z;
            let screw = if dz == 0.0 {
                EuclideanIsometry::identity()
            } else {
                EuclideanIsometry::from_rotation(Vec3::zeros(), Vec3::z(), t * dz)
                    .compose(&EuclideanIsometry::from_translation(Vec3::new(0.0, 0.0, dz)))
            };
            let moved = screw.image_of_line(la);
            let gap = lb.base - moved.base;
            let shift = gap - moved.direction * gap.dot(&moved.direction);
            Ok(Isometry::Euclidean(
                EuclideanIsometry::from_translation(shift).compose(&screw),
            ))
        }
        (Fibration::HyperbolicFz { z }, Fiber::Geodesic(ga), Fiber::Geodesic(gb)) => {
            let ca = coords_of(*z, ga)?;
            let cb = coords_of(*z, gb)?;
            Ok(Isometry::from(ca.mapping_to(&cb)))
        }
        (Fibration::HyperbolicFInf, Fiber::Geodesic(ga), Fiber::Geodesic(gb)) => {
            let base = |g: &H3Geodesic| g.endpoints().0.as_finite().expect("vertical fiber");
            let shift = base(gb) - base(ga);
            Ok(Isometry::from(
                MobiusMap::affine(Complex64::new(1.0, 0.0), shift).expect("unit scale"),
            ))
        }
        _ => Err(GeoError::SpaceMismatch(format!("fibers do not belong to {f}"))),
    }
}

fn coords_of(z: Complex64, g: &H3Geodesic) -> Result<HypFiberCoords> {
    Ok(fiber_h3_z(z, &g.point_at(0.5)?)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e3(x: f64, y: f64, z: f64) -> Point {
        Point::E3(Vec3::new(x, y, z))
    }

    fn h3(re: f64, im: f64, x: f64) -> Point {
        Point::H3(H3PointHalf::new(c(re, im), x).unwrap())
    }

    #[test]
    fn fiber_e3_examples() {
        assert!((fiber_e3(0.0, &Vec3::new(5.0, 7.0, 9.0)).direction - Vec3::x()).norm() < 1e-15);
        assert!((fiber_e3(1.0, &Vec3::new(0.0, 0.0, FRAC_PI_2)).direction - Vec3::y()).norm() < 1e-15);
        let d = fiber_e3(2.0, &Vec3::new(1.0, 1.0, PI / 8.0)).direction;
        let h = FRAC_PI_4.cos();
        assert!((d - Vec3::new(h, h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn vertical_fibers() {
        let g = fiber_h3_inf(&H3PointHalf::new(c(3.0, 4.0), 0.1).unwrap());
        assert_eq!(
            g.endpoints(),
            (BoundaryPoint::finite(3.0, 4.0), BoundaryPoint::Infinity)
        );
        let f = Fibration::HyperbolicFInf;
        assert_eq!(
            f.fiber_through(&h3(1.0, 2.0, 0.3)).unwrap(),
            f.fiber_through(&h3(1.0, 2.0, 5.0)).unwrap()
        );
    }

    #[test]
    fn constructors_validate() {
        assert!(Fibration::euclidean(-1.0).is_err());
        assert!(Fibration::euclidean(f64::NAN).is_err());
        assert_eq!(
            Fibration::euclidean_normalized(-2.0).unwrap(),
            (Fibration::EuclideanFt { t: 2.0 }, ParameterWitness::MirrorY)
        );
        assert!(Fibration::hyperbolic(c(1.0, 0.0)).is_err());
        assert!(Fibration::hyperbolic(c(0.0, 1.0)).is_ok());
    }

    #[test]
    fn mirror_carries_negative_pitch() {
        for p in [Vec3::new(0.3, -1.0, 0.7), Vec3::new(2.0, 1.0, -1.3)] {
            let m = Vec3::new(p.x, -p.y, p.z);
            let d = fiber_e3(-1.5, &p).direction;
            let want = fiber_e3(1.5, &m).direction;
            assert!((Vec3::new(d.x, -d.y, d.z) - want).norm() < 1e-15);
        }
    }

    #[test]
    fn witness_translation_example() {
        let f = Fibration::euclidean(0.0).unwrap();
        let a = Fiber::Line(EucLine::new(Vec3::zeros(), Vec3::x()).unwrap());
        let b = Fiber::Line(EucLine::new(Vec3::new(0.0, 1.0, 1.0), Vec3::x()).unwrap());
        let Isometry::Euclidean(w) = transitivity_witness(&f, &a, &b).unwrap() else {
            panic!("expected a Euclidean witness");
        };
        assert!(w.approx_eq(&EuclideanIsometry::from_translation(Vec3::new(0.0, 1.0, 1.0)), 1e-15));
    }

    #[test]
    fn witness_affine_example() {
        let z = c(1.0, 1.0);
        let f = Fibration::hyperbolic(z).unwrap();
        let a = Fiber::Geodesic(HypFiberCoords::new(1.0, 0.0).unwrap().geodesic(z).unwrap());
        let b = Fiber::Geodesic(HypFiberCoords::new(2.0, 3.0).unwrap().geodesic(z).unwrap());
        let Isometry::Boundary(w) = transitivity_witness(&f, &a, &b).unwrap() else {
            panic!("expected a boundary witness");
        };
        let want = MobiusMap::affine(c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!(!w.reflect && w.mobius.approx_eq(&want, 1e-9));
    }

    #[test]
    fn witness_screw_example() {
        let f = Fibration::euclidean(1.0).unwrap();
        for h in [0.4, -1.3, 2.0] {
            let a = f.fiber_through(&e3(0.0, 0.0, 0.0)).unwrap();
            let b = f.fiber_through(&e3(0.0, 0.0, h)).unwrap();
            let w = transitivity_witness(&f, &a, &b).unwrap();
            let Isometry::Euclidean(g) = w else { panic!() };
            let screw = EuclideanIsometry::from_rotation(Vec3::zeros(), Vec3::z(), h)
                .compose(&EuclideanIsometry::from_translation(Vec3::new(0.0, 0.0, h)));
            assert!(g.approx_eq(&screw, 1e-14));
            assert!(w.image(&a).unwrap().mismatch(&b) < 1e-14);
        }
    }

    #[test]
    fn witness_rejects_non_fibers() {
        let f = Fibration::euclidean(1.0).unwrap();
        let a = Fiber::Line(EucLine::new(Vec3::zeros(), Vec3::y()).unwrap());
        let b = f.fiber_through(&e3(0.0, 0.0, 1.0)).unwrap();
        assert!(matches!(
            transitivity_witness(&f, &a, &b),
            Err(GeoError::NotAFiber { .. })
        ));
        let g = Fibration::HyperbolicFInf;
        let bad = Fiber::Geodesic(HypFiberCoords::new(1.0, 0.0).unwrap().geodesic(Complex64::i()).unwrap());
        let ok = g.fiber_through(&h3(0.0, 0.0, 1.0)).unwrap();
        assert!(matches!(
            transitivity_witness(&g, &bad, &ok),
            Err(GeoError::NotAFiber { .. })
        ));
    }

    #[test]
    fn conjugation_by_identity_and_rotation() {
        let f = Fibration::euclidean(0.0).unwrap();
        let same = conjugate_fibration(f, EuclideanIsometry::identity().into()).unwrap();
        let p = e3(0.2, -0.4, 3.0);
        assert_eq!(same.fiber_through(&p).unwrap(), f.fiber_through(&p).unwrap());
        let rot = EuclideanIsometry::from_rotation(Vec3::zeros(), Vec3::z(), FRAC_PI_2);
        let turned = conjugate_fibration(f, rot.into()).unwrap();
        let Fiber::Line(l) = turned.fiber_through(&p).unwrap() else {
            panic!()
        };
        assert!(l.direction.cross(&Vec3::y()).norm() < 1e-15);
        assert!(l.distance_to_point(&p.to_vec3()) < 1e-15);
    }

    #[test]
    fn imaginary_reflection_gives_minus_conj_z() {
        let z = c(0.7, 1.4);
        let conj = conjugate_fibration(
            Fibration::hyperbolic(z).unwrap(),
            BoundaryTransform::reflect_imaginary().into(),
        )
        .unwrap();
        let target = Fibration::hyperbolic(reflect_imaginary_z(z)).unwrap();
        for p in [h3(0.1, 0.2, 0.9), h3(-1.5, 1.0, 0.2), h3(1.9, -1.7, 3.3)] {
            let m = conj
                .fiber_through(&p)
                .unwrap()
                .mismatch(&target.fiber_through(&p).unwrap());
            assert!(m < 1e-9, "{m}");
        }
    }

    #[test]
    fn tags() {
        assert_eq!(
            Fibration::hyperbolic(c(0.5, 0.5)).unwrap().equivalence_invariant(),
            EquivalenceTag::Hyperbolic(c(1.0, 2.0))
        );
        assert_eq!(
            Fibration::euclidean(1.5).unwrap().equivalence_invariant(),
            EquivalenceTag::Euclidean(1.5)
        );
        let inf = Fibration::HyperbolicFInf.equivalence_invariant();
        assert!(!inf.approx_eq(&EquivalenceTag::Hyperbolic(c(0.0, 1.0)), 1e9));
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(fmt_complex(c(1.0, 2.0)), "1+2i");
        assert_eq!(fmt_complex(c(-0.5, -1.5)), "-0.5-1.5i");
    }
}
