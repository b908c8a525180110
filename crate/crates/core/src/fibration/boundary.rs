use num_complex::Complex64;

use crate::hyper::{BoundaryPoint, H3Geodesic, H3PointHalf, MobiusMap};

/// Boundary map `w ↦ m(w)` or, when `reflect` is set, the
/// orientation-reversing `w ↦ m(conj w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryTransform {
    pub mobius: MobiusMap,
    pub reflect: bool,
}

impl BoundaryTransform {
    pub fn mobius(m: MobiusMap) -> Self {
        Self {
            mobius: m,
            reflect: false,
        }
    }

    pub fn identity() -> Self {
        Self::mobius(MobiusMap::identity())
    }

    /// `w ↦ -w`
    pub fn rotation_pi() -> Self {
        Self::mobius(negation())
    }

    /// `w ↦ -conj(w)`
    pub fn reflect_imaginary() -> Self {
        Self {
            mobius: negation(),
            reflect: true,
        }
    }

    /// `w ↦ conj(w)`
    pub fn reflect_real() -> Self {
        Self {
            mobius: MobiusMap::identity(),
            reflect: true,
        }
    }

    pub fn apply(&self, p: &BoundaryPoint) -> BoundaryPoint {
        if self.reflect {
            self.mobius.apply(&p.conj())
        } else {
            self.mobius.apply(p)
        }
    }

    pub fn extend(&self, p: &H3PointHalf) -> H3PointHalf {
        if self.reflect {
            self.mobius.extend(&H3PointHalf { z: p.z.conj(), x: p.x })
        } else {
            self.mobius.extend(p)
        }
    }

    pub fn image_of_geodesic(&self, g: &H3Geodesic) -> H3Geodesic {
        let (u, v) = g.endpoints();
        H3Geodesic::new(self.apply(&u), self.apply(&v)).expect("boundary maps are injective")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let inner = if self.reflect {
            other.mobius.conj_coefficients()
        } else {
            other.mobius
        };
        Self {
            mobius: self.mobius.compose(&inner),
            reflect: self.reflect ^ other.reflect,
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.mobius.inverse();
        Self {
            mobius: if self.reflect { inv.conj_coefficients() } else { inv },
            reflect: self.reflect,
        }
    }
}

fn negation() -> MobiusMap {
    MobiusMap {
        a: Complex64::new(-1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    }
}
