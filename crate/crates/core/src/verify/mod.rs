//! Sampled numerical checks: partition, preservation under a group, the
//! curl eigenfield property, orbit dimension, and the classification replay.

mod classify;
mod search;

pub use classify::{
    classification_demo, classify_group, golden_table, CandidateReport, CandidateResult, CaseVerdict, Expected, Outcome,
};
pub use search::{isotropy_elements, transport};

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GeoError, Result};
use crate::euclid::{E3Group, SubgroupSpecE3, Twist, Vec3};
use crate::fibration::{FiberField, Fibration};
use crate::hyper::{H3Group, H3PointHalf, Sl2Element, SubgroupSpecH3};
use crate::space::{Fiber, FiberRelation, Isometry, Point, Space};
use crate::Complex64;

/// Angle above which an intersection counts as transversal.
pub const TRANSVERSAL_ANGLE: f64 = 1e-3;
/// Singular values above this count towards orbit dimension.
pub const RANK_THRESHOLD: f64 = 1e-6;
/// Half-width of the E³ sampling box.
pub const E3_BOX: f64 = 3.0;
/// Fibers sampled per preservation check.
pub const PRESERVATION_FIBERS: usize = 100;

/// Outcome of one sampled check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    /// Human-readable description of the worst offender, if any.
    pub evidence: Option<String>,
}

impl CheckReport {
    fn new(
        name: impl Into<String>,
        max_residual: f64,
        samples: usize,
        tolerance: f64,
        evidence: Option<String>,
    ) -> Self {
        Self {
            name: name.into(),
            passed: max_residual < tolerance,
            max_residual,
            samples,
            tolerance,
            evidence,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max residual {:.3e} (tol {:.1e}, {} samples)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_residual,
            self.tolerance,
            self.samples
        )?;
        if let Some(e) = &self.evidence {
            write!(f, "; {e}")?;
        }
        Ok(())
    }
}

/// Catalog entry of either geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum SubgroupSpec {
    E3(SubgroupSpecE3),
    H3(SubgroupSpecH3),
}

impl SubgroupSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SubgroupSpec::E3(g) => g.name,
            SubgroupSpec::H3(g) => g.name,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            SubgroupSpec::E3(g) => g.dimension,
            SubgroupSpec::H3(g) => g.dimension,
        }
    }

    pub fn space(&self) -> Space {
        match self {
            SubgroupSpec::E3(_) => Space::E3,
            SubgroupSpec::H3(_) => Space::H3,
        }
    }

    pub fn flow(&self, index: usize, s: f64) -> Isometry {
        match self {
            SubgroupSpec::E3(g) => g.flow(index, s).into(),
            SubgroupSpec::H3(g) => g.flow(index, s).into(),
        }
    }

    /// Parameter at which generator `index` has turned by π, if it rotates.
    pub fn half_turn(&self, index: usize) -> Option<f64> {
        match self {
            SubgroupSpec::E3(g) => g.generators[index].half_turn(),
            SubgroupSpec::H3(g) => g.generators[index].half_turn,
        }
    }

    /// Generator velocities at `p`, in Cartesian coordinates.
    pub fn velocities(&self, p: &Point) -> Result<Vec<Vec3>> {
        match (self, p) {
            (SubgroupSpec::E3(g), Point::E3(v)) => Ok(g.generators.iter().map(|s| s.velocity(v)).collect()),
            (SubgroupSpec::H3(g), Point::H3(q)) => Ok(g.generators.iter().map(|f| f.generator.velocity(q)).collect()),
            _ => Err(GeoError::SpaceMismatch(format!(
                "{} acts on {}",
                self.name(),
                self.space()
            ))),
        }
    }

    /// `exp(Σ cᵢ Xᵢ)` for generators `Xᵢ`.
    pub fn exp_combination(&self, coeffs: &[f64]) -> Isometry {
        match self {
            SubgroupSpec::E3(g) => g
                .generators
                .iter()
                .zip(coeffs)
                .fold(Twist::default(), |acc, (s, &c)| acc + s.twist() * c)
                .exp(1.0)
                .into(),
            SubgroupSpec::H3(g) => g
                .generators
                .iter()
                .zip(coeffs)
                .fold(Sl2Element::zero(), |acc, (f, &c)| acc + f.generator * c)
                .exp(1.0)
                .into(),
        }
    }

    pub fn lookup(space: Space, name: &str, parameter: Option<f64>) -> Result<Self> {
        match space {
            Space::E3 => {
                let g = E3Group::parse(name)?;
                let p = if g.is_parametrized() { parameter } else { None };
                SubgroupSpecE3::new(g, p).map(SubgroupSpec::E3)
            }
            Space::H3 => {
                let g = H3Group::parse(name)?;
                let p = if g.is_parametrized() { parameter } else { None };
                SubgroupSpecH3::new(g, p).map(SubgroupSpec::H3)
            }
        }
    }

    /// Whole catalog of `space`, with the family parameter where needed.
    pub fn catalog(space: Space, parameter: f64) -> Result<Vec<Self>> {
        match space {
            Space::E3 => Ok(crate::euclid::catalog_e3(parameter)?
                .into_iter()
                .map(SubgroupSpec::E3)
                .collect()),
            Space::H3 => Ok(crate::hyper::catalog_h3(parameter)?
                .into_iter()
                .map(SubgroupSpec::H3)
                .collect()),
        }
    }
}

/// Uniform point in the check region: the box `[-3, 3]³` in E³, and
/// `|Re z|, |Im z| ≤ 2`, `x ∈ [0.1, 4]` in H³.
pub fn sample_point<R: Rng>(space: Space, rng: &mut R) -> Point {
    match space {
        Space::E3 => Point::E3(Vec3::new(
            rng.gen_range(-E3_BOX..E3_BOX),
            rng.gen_range(-E3_BOX..E3_BOX),
            rng.gen_range(-E3_BOX..E3_BOX),
        )),
        Space::H3 => Point::H3(H3PointHalf {
            z: Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            x: rng.gen_range(0.1..4.0),
        }),
    }
}

/// Samples `n` point pairs and checks that fibers through points of one
/// fiber coincide and that fibers never cross transversally.
pub fn check_partition<F: FiberField>(f: &F, n_samples: usize, tol: f64, seed: u64) -> Result<CheckReport> {
    check_positive(n_samples, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    let mut evidence = None;
    for _ in 0..n_samples {
        let p = sample_point(f.space(), &mut rng);
        let fp = f.fiber_through(&p)?;

        let q_on = fp.point_at(rng.gen_range(0.05..0.95))?;
        let m = f.fiber_through(&q_on)?.mismatch(&fp);
        if m > worst {
            worst = m;
            if m >= tol {
                evidence = Some(format!("fiber through {q_on:?} differs from fiber through {p:?}"));
            }
        }

        let q = sample_point(f.space(), &mut rng);
        if fp.distance_to(&q)? <= 1e-9 {
            worst = worst.max(f.fiber_through(&q)?.mismatch(&fp));
            continue;
        }
        let fq = f.fiber_through(&q)?;
        if let FiberRelation::Intersecting { angle } = fp.relation(&fq, 1e-9)? {
            worst = f64::INFINITY;
            evidence = Some(format!("fibers through {p:?} and {q:?} cross at angle {angle:.3e}"));
        }
    }
    Ok(CheckReport::new("partition", worst, n_samples, tol, evidence))
}

fn check_positive(n: usize, tol: f64) -> Result<()> {
    if n == 0 {
        return Err(GeoError::InvalidParameter("n_samples must be positive".into()));
    }
    if !(tol > 0.0) {
        return Err(GeoError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Why a group element failed to preserve a fibration.
#[derive(Debug, Clone, PartialEq)]
pub enum PreservationFailure {
    /// The image crosses the fiber through one of its points at `angle`.
    Transversal {
        generator: usize,
        s: f64,
        fiber: Fiber,
        image: Fiber,
        angle: f64,
    },
    /// The image is not a fiber but meets none transversally at the probe.
    NotAFiber {
        generator: usize,
        s: f64,
        fiber: Fiber,
        mismatch: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub report: CheckReport,
    pub failure: Option<PreservationFailure>,
}

/// Flow parameters used when no grid is supplied.
pub fn default_grid() -> Vec<f64> {
    vec![-2.0, -0.75, -0.3, 0.3, 0.75, 2.0]
}

/// Checks that every generator flow at every grid value maps sampled
/// fibers of `f` to fibers of `f`.
pub fn check_preservation(
    f: &Fibration,
    g: &SubgroupSpec,
    grid: &[f64],
    tol: f64,
    seed: u64,
) -> Result<PreservationReport> {
    if f.space() != g.space() {
        return Err(GeoError::SpaceMismatch(format!(
            "{f} cannot be acted on by {}",
            g.name()
        )));
    }
    check_positive(PRESERVATION_FIBERS, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fibers = (0..PRESERVATION_FIBERS)
        .map(|_| f.fiber_through(&sample_point(f.space(), &mut rng)))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0_f64;
    let mut failure: Option<PreservationFailure> = None;
    let mut samples = 0;
    for i in 0..g.dimension() {
        for &s in grid {
            let iso = g.flow(i, s);
            for fiber in &fibers {
                samples += 1;
                let image = iso.image(fiber)?;
                let m = f.fiber_mismatch(&image)?;
                worst = worst.max(m);
                if m < tol || matches!(failure, Some(PreservationFailure::Transversal { .. })) {
                    continue;
                }
                failure = Some(match transversal_at_midpoint(f, &image)? {
                    Some(angle) => PreservationFailure::Transversal {
                        generator: i,
                        s,
                        fiber: *fiber,
                        image,
                        angle,
                    },
                    None => PreservationFailure::NotAFiber {
                        generator: i,
                        s,
                        fiber: *fiber,
                        mismatch: m,
                    },
                });
            }
        }
    }
    let evidence = failure.as_ref().map(|e| match e {
        PreservationFailure::Transversal {
            generator, s, angle, ..
        } => format!(
            "generator {generator} at s = {s} maps a fiber to a line crossing another fiber at angle {angle:.4}"
        ),
        PreservationFailure::NotAFiber {
            generator, s, mismatch, ..
        } => {
            format!("generator {generator} at s = {s} maps a fiber to a non-fiber (mismatch {mismatch:.3e})")
        }
    });
    Ok(PreservationReport {
        report: CheckReport::new(format!("preservation by {}", g.name()), worst, samples, tol, evidence),
        failure,
    })
}

/// Angle between `image` and the fiber through its midpoint, if transversal.
fn transversal_at_midpoint(f: &Fibration, image: &Fiber) -> Result<Option<f64>> {
    let mid = image.point_at(0.5)?;
    let fiber = f.fiber_through(&mid)?;
    let a = image.tangent_at(&mid)?;
    let b = fiber.tangent_at(&mid)?;
    let angle = a.cross(&b).norm().atan2(a.dot(&b).abs());
    Ok((angle > TRANSVERSAL_ANGLE).then_some(angle))
}

/// The unit field `v_t = (cos tz, sin tz, 0)`.
pub fn v_t(t: f64) -> impl Fn(&Vec3) -> Vec3 {
    move |p: &Vec3| {
        let (s, c) = (t * p.z).sin_cos();
        Vec3::new(c, s, 0.0)
    }
}

/// Central-difference curl with step `h` (right-handed convention).
pub fn curl_fd<F: Fn(&Vec3) -> Vec3>(field: F, p: &Vec3, h: f64) -> Vec3 {
    let d = |axis: usize| {
        let mut e = Vec3::zeros();
        e[axis] = h;
        (field(&(p + e)) - field(&(p - e))) / (2.0 * h)
    };
    let (dx, dy, dz) = (d(0), d(1), d(2));
    Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x)
}

/// Signed eigenvalue `⟨curl v_t, v_t⟩ / |v_t|²` measured at `p`.
pub fn measured_curl_eigenvalue(t: f64, p: &Vec3, h: f64) -> f64 {
    let field = v_t(t);
    let v = field(p);
    curl_fd(&field, p, h).dot(&v) / v.norm_squared()
}

/// Numerical rank of `vectors` after normalizing each nonzero column.
pub fn numerical_rank(vectors: &[Vec3]) -> usize {
    let cols: Vec<Vec3> = vectors
        .iter()
        .filter(|v| v.norm() > RANK_THRESHOLD)
        .map(|v| v / v.norm())
        .collect();
    if cols.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(3, cols.len(), |r, c| cols[c][r]);
    m.singular_values().iter().filter(|&&s| s > RANK_THRESHOLD).count()
}

/// Dimension of the set swept by `fiber` under `g`: the largest rank of
/// the generator velocities together with the fiber tangent at a probe.
pub fn orbit_dimension(g: &SubgroupSpec, fiber: &Fiber, probes: &[Point]) -> Result<usize> {
    let mut best = 0;
    for p in probes {
        let mut vs = g.velocities(p)?;
        vs.push(fiber.tangent_at(p)?);
        best = best.max(numerical_rank(&vs));
    }
    Ok(best)
}

/// Probe points spread along a fiber.
pub fn probes_on(fiber: &Fiber) -> Result<Vec<Point>> {
    [0.2, 0.35, 0.5, 0.65, 0.8].iter().map(|&u| fiber.point_at(u)).collect()
}
