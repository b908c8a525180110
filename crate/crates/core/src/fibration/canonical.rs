use std::fmt;

use num_complex::Complex64;

use super::BoundaryTransform;
use crate::error::{GeoError, Result};

/// One boundary transformation used to move `z` into `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonStep {
    /// `w ↦ -conj(w)`, taking `F_z` to `F_{-conj z}`.
    ReflectImaginary,
    /// `w ↦ -w`, taking `F_z` to `F_{flip(z)}`.
    Flip,
    /// `w ↦ conj(w)`, taking `F_z` to `F_{(-Re z + i)/Im z}`.
    ReflectReal,
}

impl CanonStep {
    pub fn boundary_map(self) -> BoundaryTransform {
        match self {
            CanonStep::ReflectImaginary => BoundaryTransform::reflect_imaginary(),
            CanonStep::Flip => BoundaryTransform::rotation_pi(),
            CanonStep::ReflectReal => BoundaryTransform::reflect_real(),
        }
    }

    pub fn apply(self, z: Complex64) -> Complex64 {
        match self {
            CanonStep::ReflectImaginary => reflect_imaginary_z(z),
            CanonStep::Flip => flip_z(z),
            CanonStep::ReflectReal => reflect_imaginary_z(flip_z(z)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CanonStep::ReflectImaginary => "reflect-imaginary",
            CanonStep::Flip => "flip",
            CanonStep::ReflectReal => "reflect-real",
        }
    }
}

impl fmt::Display for CanonStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Representative of `z` in `S = {Re z ≥ 0, Im z ≥ 1}` with the steps used.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalZ {
    pub z: Complex64,
    pub steps: Vec<CanonStep>,
}

impl CanonicalZ {
    /// Boundary map taking every fiber of `F_input` to a fiber of `F_z`.
    pub fn witness(&self) -> BoundaryTransform {
        self.steps
            .iter()
            .fold(BoundaryTransform::identity(), |acc, s| s.boundary_map().compose(&acc))
    }

    /// `identity`, a single step name, or steps joined by ` then `.
    pub fn witness_label(&self) -> String {
        if self.steps.is_empty() {
            return "identity".to_owned();
        }
        self.steps.iter().map(|s| s.name()).collect::<Vec<_>>().join(" then ")
    }
}

/// `z ↦ (Re z + i) / Im z`. Satisfies `Im flip(z) · Im z = 1`.
pub fn flip_z(z: Complex64) -> Complex64 {
    Complex64::new(z.re / z.im, 1.0 / z.im)
}

/// `z ↦ -conj(z)`
pub fn reflect_imaginary_z(z: Complex64) -> Complex64 {
    Complex64::new(-z.re, z.im)
}

pub fn in_s(z: Complex64) -> bool {
    z.re >= 0.0 && z.im >= 1.0
}

pub fn canonicalize_z(z: Complex64) -> Result<CanonicalZ> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(GeoError::OutOfDomain {
            value: z.im,
            domain: "Im z > 0",
        });
    }
    let mut cur = z;
    let mut steps = Vec::new();
    let mut push = |step: CanonStep, cur: &mut Complex64| {
        *cur = step.apply(*cur);
        steps.push(step);
    };
    if cur.re < 0.0 {
        push(CanonStep::ReflectImaginary, &mut cur);
    }
    if cur.im < 1.0 {
        push(CanonStep::Flip, &mut cur);
    }
    if cur.re < 0.0 {
        push(CanonStep::ReflectImaginary, &mut cur);
    }
    Ok(CanonicalZ { z: cur, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::solver::fiber_h3_z;
    use crate::hyper::H3PointHalf;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Pushes 50 sampled fibers of `F_from` through `map` and returns the
    /// worst residual as fibers of `F_to`.
    fn sampled_fiber_residual(from: Complex64, to: Complex64, map: &BoundaryTransform) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let p = H3PointHalf::new(
                c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                rng.gen_range(0.1..4.0),
            )
            .unwrap();
            let (g, _) = fiber_h3_z(from, &p).unwrap();
            let img = map.image_of_geodesic(&g);
            let q = map.extend(&g.point_at(0.5).unwrap());
            let (h, _) = fiber_h3_z(to, &q).unwrap();
            worst = worst.max(img.mismatch(&h));
        }
        worst
    }

    #[test]
    fn already_canonical() {
        let r = canonicalize_z(c(1.0, 2.0)).unwrap();
        assert_eq!(r.z, c(1.0, 2.0));
        assert_eq!(r.witness_label(), "identity");
    }

    #[test]
    fn flip_example_and_oracle() {
        let r = canonicalize_z(c(0.5, 0.5)).unwrap();
        assert!((r.z - c(1.0, 2.0)).norm() < 1e-15);
        assert_eq!(r.steps, vec![CanonStep::Flip]);
        assert!(sampled_fiber_residual(c(0.5, 0.5), r.z, &BoundaryTransform::rotation_pi()) < 1e-8);
    }

    #[test]
    fn reflect_example_and_oracle() {
        let r = canonicalize_z(c(-1.0, 2.0)).unwrap();
        assert_eq!(r.z, c(1.0, 2.0));
        assert_eq!(r.witness_label(), "reflect-imaginary");
        assert!(sampled_fiber_residual(c(-1.0, 2.0), r.z, &BoundaryTransform::reflect_imaginary()) < 1e-8);
    }

    #[test]
    fn every_step_is_realized_by_its_map() {
        for z in [c(0.3, 0.4), c(-1.2, 2.5), c(2.0, 1.0), c(-0.5, 0.25)] {
            for step in [CanonStep::ReflectImaginary, CanonStep::Flip, CanonStep::ReflectReal] {
                let res = sampled_fiber_residual(z, step.apply(z), &step.boundary_map());
                assert!(res < 1e-8, "{step} at {z}: {res}");
            }
        }
    }

    #[test]
    fn composed_witness_carries_fibers() {
        for z in [c(-0.5, 0.25), c(-3.0, 0.9), c(0.2, 0.1)] {
            let r = canonicalize_z(z).unwrap();
            assert!(in_s(r.z));
            assert!(sampled_fiber_residual(z, r.z, &r.witness()) < 1e-8);
        }
    }

    #[test]
    fn boundary_cases_take_no_op() {
        assert!(canonicalize_z(c(0.0, 1.0)).unwrap().steps.is_empty());
        assert!(canonicalize_z(c(3.0, 1.0)).unwrap().steps.is_empty());
        assert!(canonicalize_z(c(0.0, 7.0)).unwrap().steps.is_empty());
    }

    #[test]
    fn rejects_non_upper() {
        assert!(canonicalize_z(c(1.0, 0.0)).is_err());
        assert!(canonicalize_z(c(1.0, -2.0)).is_err());
        assert!(canonicalize_z(c(f64::NAN, 1.0)).is_err());
    }
}
