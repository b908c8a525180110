//! Polyline export of sampled fibers, as JSON or Wavefront OBJ.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::euclid::{EucLine, Vec3};
use crate::fibration::{Fibration, HypFiberCoords};
use crate::hyper::{to_ball, to_half, H3Geodesic, H3PointBall, H3PointHalf};
use crate::space::{Fiber, Point};
use crate::Complex64;

/// Residual allowed when re-validating exported points.
pub const EXPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExportSpace {
    #[serde(rename = "E3")]
    E3,
    #[serde(rename = "H3-halfspace")]
    H3Halfspace,
    #[serde(rename = "H3-ball")]
    H3Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum FibrationRecord {
    EuclideanFt { t: f64 },
    HyperbolicFz { z: [f64; 2] },
    HyperbolicFInf,
}

impl From<&Fibration> for FibrationRecord {
    fn from(f: &Fibration) -> Self {
        match *f {
            Fibration::EuclideanFt { t } => FibrationRecord::EuclideanFt { t },
            Fibration::HyperbolicFz { z } => FibrationRecord::HyperbolicFz { z: [z.re, z.im] },
            Fibration::HyperbolicFInf => FibrationRecord::HyperbolicFInf,
        }
    }
}

impl FibrationRecord {
    pub fn to_fibration(&self) -> Result<Fibration> {
        match *self {
            FibrationRecord::EuclideanFt { t } => Fibration::euclidean(t),
            FibrationRecord::HyperbolicFz { z } => Fibration::hyperbolic(Complex64::new(z[0], z[1])),
            FibrationRecord::HyperbolicFInf => Ok(Fibration::HyperbolicFInf),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportFiber {
    pub id: usize,
    /// Fiber coordinates: `base_x, base_y, base_z, dir_x, dir_y` for lines,
    /// `lambda, a` for `F_z`, `re, im` for vertical lines.
    pub params: BTreeMap<String, f64>,
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportDocument {
    pub space: ExportSpace,
    pub fibration: FibrationRecord,
    pub fibers: Vec<ExportFiber>,
}

/// Which H³ chart to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Model {
    #[default]
    HalfSpace,
    Ball,
}

/// Layout of the sampled fibers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    /// Half-width of the E³ clipping box and of the H³ base region.
    pub half_width: f64,
    /// Fibers per grid side: `grid × grid` fibers in total.
    pub grid: usize,
    pub points_per_fiber: usize,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self {
            half_width: 4.0,
            grid: 8,
            points_per_fiber: 32,
        }
    }
}

fn lattice(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Samples `grid × grid` fibers of `f`.
///
/// E³: at each of `grid` heights, `grid` parallel lines clipped to the box.
/// `F_z`: fibers with `λ` spread geometrically over `[1/4, 2]` and offsets
/// `a` across the base region. `F_∞`: vertical lines over a square lattice.
pub fn sample_document(f: &Fibration, grid: &SampleGrid, model: Model) -> Result<ExportDocument> {
    if grid.grid == 0 || grid.points_per_fiber < 2 || !(grid.half_width > 0.0) {
        return Err(GeoError::InvalidParameter(
            "sampling grid needs grid ≥ 1, at least 2 points per fiber and a positive half-width".into(),
        ));
    }
    let b = grid.half_width;
    let n = grid.points_per_fiber;
    let interior: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
    let mut fibers = Vec::new();
    let space = match (f, model) {
        (Fibration::EuclideanFt { .. }, _) => ExportSpace::E3,
        (_, Model::HalfSpace) => ExportSpace::H3Halfspace,
        (_, Model::Ball) => ExportSpace::H3Ball,
    };
    let emit = |p: &H3PointHalf| -> [f64; 3] {
        let v = match model {
            Model::HalfSpace => p.to_vec3(),
            Model::Ball => to_ball(p).v,
        };
        [v.x, v.y, v.z]
    };
    match *f {
        Fibration::EuclideanFt { t } => {
            for z in lattice(grid.grid, -b, b) {
                let (s, c) = (t * z).sin_cos();
                let dir = Vec3::new(c, s, 0.0);
                let normal = Vec3::new(-s, c, 0.0);
                for o in lattice(grid.grid, -0.9 * b, 0.9 * b) {
                    let base = normal * o + Vec3::new(0.0, 0.0, z);
                    let (lo, hi) = clip_to_box(&base, &dir, b);
                    let points = (0..n)
                        .map(|k| {
                            let p = base + dir * (lo + (hi - lo) * k as f64 / (n - 1) as f64);
                            [p.x, p.y, p.z]
                        })
                        .collect();
                    let params = BTreeMap::from([
                        ("base_x".to_owned(), base.x),
                        ("base_y".to_owned(), base.y),
                        ("base_z".to_owned(), base.z),
                        ("dir_x".to_owned(), dir.x),
                        ("dir_y".to_owned(), dir.y),
                    ]);
                    fibers.push(ExportFiber {
                        id: fibers.len(),
                        params,
                        points,
                    });
                }
            }
        }
        Fibration::HyperbolicFz { z } => {
            let lambdas: Vec<f64> = lattice(grid.grid, 0.25f64.ln(), 2f64.ln())
                .into_iter()
                .map(f64::exp)
                .collect();
            for &lambda in &lambdas {
                for a in lattice(grid.grid, -b, b) {
                    let g = HypFiberCoords::new(lambda, a)?.geodesic(z)?;
                    let points = interior
                        .iter()
                        .map(|&u| g.point_at(u).map(|p| emit(&p)))
                        .collect::<Result<Vec<_>>>()?;
                    let params = BTreeMap::from([("lambda".to_owned(), lambda), ("a".to_owned(), a)]);
                    fibers.push(ExportFiber {
                        id: fibers.len(),
                        params,
                        points,
                    });
                }
            }
        }
        Fibration::HyperbolicFInf => {
            for re in lattice(grid.grid, -b, b) {
                for im in lattice(grid.grid, -b, b) {
                    let g = H3Geodesic::vertical(Complex64::new(re, im));
                    let points = interior
                        .iter()
                        .map(|&u| g.point_at(u).map(|p| emit(&p)))
                        .collect::<Result<Vec<_>>>()?;
                    let params = BTreeMap::from([("re".to_owned(), re), ("im".to_owned(), im)]);
                    fibers.push(ExportFiber {
                        id: fibers.len(),
                        params,
                        points,
                    });
                }
            }
        }
    }
    Ok(ExportDocument {
        space,
        fibration: f.into(),
        fibers,
    })
}

/// Parameter interval of `base + s·dir` inside `[-b, b]³` (horizontal `dir`).
fn clip_to_box(base: &Vec3, dir: &Vec3, b: f64) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for axis in 0..2 {
        if dir[axis].abs() > 1e-15 {
            let s1 = (-b - base[axis]) / dir[axis];
            let s2 = (b - base[axis]) / dir[axis];
            lo = lo.max(s1.min(s2));
            hi = hi.min(s1.max(s2));
        }
    }
    (lo, hi)
}

fn param(f: &ExportFiber, key: &str) -> Result<f64> {
    f.params
        .get(key)
        .copied()
        .ok_or_else(|| GeoError::InvalidParameter(format!("fiber {} lacks parameter `{key}`", f.id)))
}

fn claimed_fiber(fib: &Fibration, f: &ExportFiber) -> Result<Fiber> {
    Ok(match fib {
        Fibration::EuclideanFt { .. } => Fiber::Line(EucLine::new(
            Vec3::new(param(f, "base_x")?, param(f, "base_y")?, param(f, "base_z")?),
            Vec3::new(param(f, "dir_x")?, param(f, "dir_y")?, 0.0),
        )?),
        Fibration::HyperbolicFz { z } => {
            Fiber::Geodesic(HypFiberCoords::new(param(f, "lambda")?, param(f, "a")?)?.geodesic(*z)?)
        }
        Fibration::HyperbolicFInf => {
            Fiber::Geodesic(H3Geodesic::vertical(Complex64::new(param(f, "re")?, param(f, "im")?)))
        }
    })
}

/// Checks the document's structural invariants and that every point lies
/// on its claimed fiber, and that the claimed fiber is a fiber of the
/// document's fibration. Returns the largest residual.
pub fn validate(doc: &ExportDocument) -> Result<f64> {
    let fib = doc.fibration.to_fibration()?;
    let expected_e3 = matches!(fib, Fibration::EuclideanFt { .. });
    if expected_e3 != (doc.space == ExportSpace::E3) {
        return Err(GeoError::SpaceMismatch(format!("{fib} exported as {:?}", doc.space)));
    }
    let mut worst = 0.0_f64;
    for f in &doc.fibers {
        if f.points.len() < 2 {
            return Err(GeoError::InvalidParameter(format!(
                "fiber {} has fewer than 2 points",
                f.id
            )));
        }
        let claimed = claimed_fiber(&fib, f)?;
        for raw in &f.points {
            if raw.iter().any(|c| !c.is_finite()) {
                return Err(GeoError::InvalidParameter(format!(
                    "fiber {} has a non-finite point",
                    f.id
                )));
            }
            let v = Vec3::new(raw[0], raw[1], raw[2]);
            let p = match doc.space {
                ExportSpace::E3 => Point::E3(v),
                ExportSpace::H3Halfspace => Point::H3(H3PointHalf::from_vec3(&v)?),
                ExportSpace::H3Ball => Point::H3(to_half(&H3PointBall::new(v)?)),
            };
            worst = worst.max(fib.fiber_through(&p)?.mismatch(&claimed));
        }
    }
    if worst >= EXPORT_TOL {
        return Err(GeoError::NotAFiber { mismatch: worst });
    }
    Ok(worst)
}

impl ExportDocument {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| GeoError::InvalidParameter(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| GeoError::InvalidParameter(format!("malformed document: {e}")))
    }

    /// One `v` line per point and one `l` polyline per fiber.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} fibers", self.fibers.len());
        let mut next = 1;
        for f in &self.fibers {
            let _ = writeln!(out, "o fiber_{}", f.id);
            for p in &f.points {
                let _ = writeln!(out, "v {} {} {}", p[0], p[1], p[2]);
            }
            let idx: Vec<String> = (next..next + f.points.len()).map(|i| i.to_string()).collect();
            let _ = writeln!(out, "l {}", idx.join(" "));
            next += f.points.len();
        }
        out
    }
}
