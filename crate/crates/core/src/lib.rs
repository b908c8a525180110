//! Fiberwise homogeneous fibrations of Euclidean and hyperbolic 3-space by
//! geodesics.
//!
//! * [`euclid`]: rigid motions of E³, lines, screw exponentials and the
//!   catalog of connected isometry subgroups.
//! * [`hyper`]: the upper half-space and ball models of H³, Möbius maps
//!   and their Poincaré extension, geodesics, and the subgroup catalog.
//! * [`fibration`]: the fibrations `F_t`, `F_z` and `F_∞` with fiber
//!   solvers, transitivity witnesses, conjugation and canonical parameters.
//! * [`verify`]: sampled checks and the replay of the classification.
//! * [`export`]: JSON and OBJ polyline export for renderers.
//!
//! ```
//! use geofib::{Complex64, Fibration, Point, H3PointHalf};
//!
//! let f = Fibration::hyperbolic(Complex64::new(0.0, 1.0)).unwrap();
//! let fiber = f.fiber_through(&Point::H3(H3PointHalf::basepoint())).unwrap();
//! assert!(fiber.distance_to(&Point::H3(H3PointHalf::basepoint())).unwrap() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod euclid;
pub mod export;
pub mod fibration;
pub mod hyper;
pub mod roots;
pub mod space;
pub mod verify;

pub use error::{GeoError, Result};
pub use euclid::{E3Group, EucLine, EuclideanIsometry, ScrewGenerator, SubgroupSpecE3, Vec3};
pub use export::{ExportDocument, Model, SampleGrid};
pub use fibration::{
    canonicalize_z, conjugate_fibration, transitivity_witness, BoundaryTransform, CanonicalZ, EquivalenceTag,
    FiberField, Fibration, HypFiberCoords,
};
pub use hyper::{BoundaryPoint, H3Geodesic, H3Group, H3PointBall, H3PointHalf, MobiusMap, SubgroupSpecH3};
pub use num_complex::Complex64;
pub use space::{Fiber, FiberRelation, Isometry, Point, Space};
pub use verify::{CheckReport, SubgroupSpec};
