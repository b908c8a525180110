//! Replay of the case analysis: every catalog group is run against a set
//! of candidate fibers and either eliminated or matched to the fibration
//! it produces.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::search::{least_squares, transport, SOLVE_TOL};
use super::{isotropy_elements, orbit_dimension, probes_on, SubgroupSpec, TRANSVERSAL_ANGLE};
use crate::error::Result;
use crate::euclid::{EucLine, Vec3};
use crate::fibration::{canonicalize_z, EquivalenceTag, FiberField, Fibration};
use crate::hyper::{geodesic_through, H3Geodesic, H3PointHalf};
use crate::space::{Fiber, FiberRelation, Isometry, Point, Space};
use crate::Complex64;

const FIX_GRID: [f64; 4] = [-1.3, -0.4, 0.5, 2.2];
const FLOW_GRID: [f64; 6] = [-2.4, -1.2, -0.45, 0.45, 1.2, 2.4];
const ISOTROPY_GRID: [f64; 3] = [0.4, 1.1, 2.3];
const RELATION_TOL: f64 = 1e-9;
const CURL_STEP: f64 = 1e-3;
const IMAGE_SAMPLES: usize = 12;
const RANDOM_DIRECTIONS: usize = 3;
/// Tags closer than this are reported once.
const TAG_MERGE: f64 = 1e-4;

/// What a single candidate fiber reveals about a group.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateResult {
    /// Every generator maps the candidate to itself.
    Fixed,
    /// The candidate sweeps out less than three dimensions.
    TooSmall,
    /// A group element maps the candidate to a line crossing it.
    Transversal { angle: f64, via: &'static str },
    /// The orbit is the fibration with this tag.
    Produces(EquivalenceTag),
    /// The orbit fills space but is not one of the known fibrations.
    NotTransitive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateReport {
    pub label: String,
    pub fiber: Fiber,
    pub orbit_dimension: usize,
    pub result: CandidateResult,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    TooSmall,
    FixesFiber,
    TransversalImage,
    ProducesFibration(Vec<EquivalenceTag>),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::TooSmall => f.write_str("TooSmall"),
            Outcome::FixesFiber => f.write_str("FixesFiber"),
            Outcome::TransversalImage => f.write_str("TransversalImage"),
            Outcome::ProducesFibration(tags) => {
                let list: Vec<String> = tags.iter().map(|t| t.to_string()).collect();
                write!(f, "ProducesFibration({})", list.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseVerdict {
    pub group_name: &'static str,
    pub outcome: Outcome,
    pub candidates: Vec<CandidateReport>,
}

impl CaseVerdict {
    /// One-line description of the deciding evidence.
    pub fn evidence_summary(&self) -> String {
        let dims: Vec<String> = self.candidates.iter().map(|c| c.orbit_dimension.to_string()).collect();
        let pick = |pred: &dyn Fn(&CandidateResult) -> bool| self.candidates.iter().find(|c| pred(&c.result));
        match &self.outcome {
            Outcome::TooSmall => format!("orbit dimensions [{}]", dims.join(",")),
            Outcome::FixesFiber => match pick(&|r| *r == CandidateResult::Fixed) {
                Some(c) => format!("fixes the {} candidate", c.label),
                None => String::new(),
            },
            Outcome::TransversalImage => match pick(&|r| matches!(r, CandidateResult::Transversal { .. })) {
                Some(CandidateReport {
                    label,
                    result: CandidateResult::Transversal { angle, via },
                    ..
                }) => format!("{label} candidate crossed at angle {angle:.3} ({via})"),
                _ => String::new(),
            },
            Outcome::ProducesFibration(_) => {
                let labels: Vec<&str> = self
                    .candidates
                    .iter()
                    .filter(|c| matches!(c.result, CandidateResult::Produces(_)))
                    .map(|c| c.label.as_str())
                    .collect();
                format!("orbits of [{}]", labels.join(", "))
            }
        }
    }
}

/// Expected row of the golden table.
#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    TooSmall,
    FixesFiber,
    TransversalImage,
    Produces(Vec<EquivalenceTag>),
    /// Some nonempty set of `F_z` tags, all in `S`.
    ProducesFzFamily,
}

impl Expected {
    pub fn matches(&self, outcome: &Outcome, tol: f64) -> bool {
        match (self, outcome) {
            (Expected::TooSmall, Outcome::TooSmall)
            | (Expected::FixesFiber, Outcome::FixesFiber)
            | (Expected::TransversalImage, Outcome::TransversalImage) => true,
            (Expected::Produces(want), Outcome::ProducesFibration(got)) => {
                want.iter().all(|w| got.iter().any(|g| g.approx_eq(w, tol)))
                    && got.iter().all(|g| want.iter().any(|w| g.approx_eq(w, tol)))
            }
            (Expected::ProducesFzFamily, Outcome::ProducesFibration(got)) => {
                !got.is_empty()
                    && got.iter().all(|t| match t {
                        EquivalenceTag::Hyperbolic(z) => z.re >= -tol && z.im >= 1.0 - tol,
                        _ => false,
                    })
            }
            _ => false,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Produces(tags) => fmt::Display::fmt(&Outcome::ProducesFibration(tags.clone()), f),
            Expected::ProducesFzFamily => f.write_str("ProducesFibration(F_z family)"),
            Expected::TooSmall => f.write_str("TooSmall"),
            Expected::FixesFiber => f.write_str("FixesFiber"),
            Expected::TransversalImage => f.write_str("TransversalImage"),
        }
    }
}

/// Expected verdicts in catalog order. `parameter` is the pitch in E³
/// (it appears as a tag of `E(2)_t-bar`) and is irrelevant in H³.
pub fn golden_table(space: Space, parameter: f64) -> Vec<(&'static str, Expected)> {
    use Expected::*;
    let zero = || Produces(vec![EquivalenceTag::Euclidean(0.0)]);
    let inf = || Produces(vec![EquivalenceTag::Infinity]);
    match space {
        Space::E3 => vec![
            ("{1}", TooSmall),
            ("T(1)", TooSmall),
            ("SO(2)", TooSmall),
            ("SO(2)_t-bar", TooSmall),
            ("SO(2)×T(1)", FixesFiber),
            ("T(2)", zero()),
            (
                "E(2)_t-bar",
                Produces(vec![
                    EquivalenceTag::Euclidean(0.0),
                    EquivalenceTag::Euclidean(parameter.abs()),
                ]),
            ),
            ("T(3)", zero()),
            ("E(2)", zero()),
            ("SO(3)", TransversalImage),
            ("E(2)×T(1)", zero()),
            ("E(3)", TransversalImage),
        ],
        Space::H3 => vec![
            ("{1}", TooSmall),
            ("Hyp", TooSmall),
            ("Par", TooSmall),
            ("Ell", TooSmall),
            ("Lox", TooSmall),
            ("T(2)", inf()),
            ("⟨Hyp,Par⟩", ProducesFzFamily),
            ("⟨Ell,Hyp⟩", FixesFiber),
            ("Hom", inf()),
            ("ScrewHom", inf()),
            ("E(2)", inf()),
            (
                "H(2)",
                Produces(vec![EquivalenceTag::Hyperbolic(Complex64::new(0.0, 1.0))]),
            ),
            ("SO(3)", TransversalImage),
            ("Sim", inf()),
            ("H(3)", TransversalImage),
        ],
    }
}

/// Runs every catalog group of `space` (family parameter 1).
pub fn classification_demo(space: Space, tol: f64, seed: u64) -> Result<Vec<CaseVerdict>> {
    SubgroupSpec::catalog(space, 1.0)?
        .iter()
        .map(|g| classify_group(g, tol, seed))
        .collect()
}

/// Base point through which all candidates pass.
fn base_point(space: Space) -> Point {
    match space {
        Space::E3 => Point::E3(Vec3::zeros()),
        Space::H3 => Point::H3(H3PointHalf::basepoint()),
    }
}

fn candidates(space: Space, seed: u64) -> Result<Vec<(String, Fiber)>> {
    let mut dirs: Vec<(String, Vec3)> = vec![
        ("vertical".into(), Vec3::z()),
        ("x-direction".into(), Vec3::x()),
        ("y-direction".into(), Vec3::y()),
        ("diagonal".into(), Vec3::new(1.0, 0.0, 1.0)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..RANDOM_DIRECTIONS {
        let v = loop {
            let v = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if v.norm() > 0.2 && v.norm() <= 1.0 {
                break v;
            }
        };
        dirs.push((format!("random-{i}"), v));
    }
    let base = base_point(space);
    dirs.into_iter()
        .map(|(label, d)| {
            let fiber = match &base {
                Point::E3(p) => Fiber::Line(EucLine::new(*p, d)?),
                Point::H3(p) => Fiber::Geodesic(geodesic_through(p, &d)?),
            };
            Ok((label, fiber))
        })
        .collect()
}

/// Runs the elimination battery for one group.
pub fn classify_group(g: &SubgroupSpec, tol: f64, seed: u64) -> Result<CaseVerdict> {
    let mut reports = Vec::new();
    for (label, fiber) in candidates(g.space(), seed)? {
        reports.push(examine(g, label, fiber, tol, seed)?);
    }
    let outcome = if reports.iter().all(|r| r.orbit_dimension < 3) {
        Outcome::TooSmall
    } else {
        let mut tags: Vec<EquivalenceTag> = Vec::new();
        for r in &reports {
            if let CandidateResult::Produces(t) = r.result {
                if !tags.iter().any(|u| u.approx_eq(&t, TAG_MERGE)) {
                    tags.push(t);
                }
            }
        }
        let any = |pred: fn(&CandidateResult) -> bool| reports.iter().any(|r| pred(&r.result));
        if !tags.is_empty() {
            Outcome::ProducesFibration(tags)
        } else if any(|r| *r == CandidateResult::Fixed) {
            Outcome::FixesFiber
        } else if any(|r| matches!(r, CandidateResult::Transversal { .. })) {
            Outcome::TransversalImage
        } else {
            Outcome::TooSmall
        }
    };
    Ok(CaseVerdict {
        group_name: g.name(),
        outcome,
        candidates: reports,
    })
}

fn examine(g: &SubgroupSpec, label: String, fiber: Fiber, tol: f64, seed: u64) -> Result<CandidateReport> {
    let mut probes = vec![base_point(g.space())];
    probes.extend(probes_on(&fiber)?);
    let orbit_dim = orbit_dimension(g, &fiber, &probes)?;
    let result = if fixes(g, &fiber, tol)? {
        CandidateResult::Fixed
    } else if orbit_dim < 3 {
        CandidateResult::TooSmall
    } else if let Some((angle, via)) = find_transversal(g, &fiber, &probes)? {
        CandidateResult::Transversal { angle, via }
    } else {
        match identify(g, &fiber, tol, seed)? {
            Some(tag) => CandidateResult::Produces(tag),
            None => CandidateResult::NotTransitive,
        }
    };
    Ok(CandidateReport {
        label,
        fiber,
        orbit_dimension: orbit_dim,
        result,
    })
}

fn fixes(g: &SubgroupSpec, fiber: &Fiber, tol: f64) -> Result<bool> {
    for i in 0..g.dimension() {
        for s in FIX_GRID {
            if g.flow(i, s).image(fiber)?.mismatch(fiber) >= tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn crossing_angle(fiber: &Fiber, iso: &Isometry) -> Result<Option<f64>> {
    Ok(match fiber.relation(&iso.image(fiber)?, RELATION_TOL)? {
        FiberRelation::Intersecting { angle } if angle > TRANSVERSAL_ANGLE => Some(angle),
        _ => None,
    })
}

/// Searches single flows, point stabilizers, and elements moving one
/// probe of the fiber onto another for an image crossing the fiber.
fn find_transversal(g: &SubgroupSpec, fiber: &Fiber, probes: &[Point]) -> Result<Option<(f64, &'static str)>> {
    for i in 0..g.dimension() {
        let turns = g.half_turn(i).into_iter().flat_map(|h| [0.5 * h, h]);
        for s in FLOW_GRID.into_iter().chain(turns) {
            if let Some(a) = crossing_angle(fiber, &g.flow(i, s))? {
                return Ok(Some((a, "generator flow")));
            }
        }
    }
    for p in probes {
        for n in isotropy_elements(g, p)? {
            for s in ISOTROPY_GRID {
                let c: Vec<f64> = n.iter().map(|x| x * s).collect();
                if let Some(a) = crossing_angle(fiber, &g.exp_combination(&c))? {
                    return Ok(Some((a, "stabilizer of a point")));
                }
            }
        }
    }
    for (i, p) in probes.iter().enumerate() {
        for (j, q) in probes.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(iso) = transport(g, q, p) {
                if let Some(a) = crossing_angle(fiber, &iso)? {
                    return Ok(Some((a, "element moving the fiber along itself")));
                }
            }
        }
    }
    Ok(None)
}

fn identify(g: &SubgroupSpec, fiber: &Fiber, tol: f64, seed: u64) -> Result<Option<EquivalenceTag>> {
    match fiber {
        Fiber::Line(line) => Ok(euclidean_tag(g, line)),
        Fiber::Geodesic(geo) => hyperbolic_tag(g, geo, tol, seed),
    }
}

/// Direction of the orbit field at `q`: solves `h(F(u)) = q` over group
/// elements `h` and positions `u` along the candidate.
fn orbit_direction(g: &SubgroupSpec, line: &EucLine, q: &Vec3) -> Option<Vec3> {
    let k = g.dimension();
    let residual = |x: &[f64]| {
        let start = line.point_at(x[k]);
        g.exp_combination(&x[..k])
            .apply(&Point::E3(start))
            .expect("E3 group")
            .to_vec3()
            - q
    };
    let (x, r) = least_squares(residual, vec![0.0; k + 1]);
    if r > SOLVE_TOL * (1.0 + q.norm()) {
        return None;
    }
    match g.exp_combination(&x[..k]) {
        Isometry::Euclidean(e) => Some(e.apply_vector(&line.direction)),
        Isometry::Boundary(_) => None,
    }
}

/// `|u · curl u|` of the orbit direction field at the candidate's base.
fn euclidean_tag(g: &SubgroupSpec, line: &EucLine) -> Option<EquivalenceTag> {
    let p = line.base;
    let d0 = line.direction;
    let field = |q: &Vec3| -> Option<Vec3> {
        let d = orbit_direction(g, line, q)?;
        Some(if d.dot(&d0) < 0.0 { -d } else { d })
    };
    let mut partial = [Vec3::zeros(); 3];
    for (axis, slot) in partial.iter_mut().enumerate() {
        let mut e = Vec3::zeros();
        e[axis] = CURL_STEP;
        *slot = (field(&(p + e))? - field(&(p - e))?) / (2.0 * CURL_STEP);
    }
    let [dx, dy, dz] = partial;
    let curl = Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x);
    let tag = curl.dot(&d0).abs();
    Some(EquivalenceTag::Euclidean(if tag < TAG_MERGE { 0.0 } else { tag }))
}

/// Matches the orbit of `geo` against `F_∞` (vertical candidates) or the
/// `F_z` containing it (candidates crossing the real axis), checked on
/// sampled group images.
fn hyperbolic_tag(g: &SubgroupSpec, geo: &H3Geodesic, tol: f64, seed: u64) -> Result<Option<EquivalenceTag>> {
    let (u, v) = geo.endpoints();
    let fibration = if geo.is_vertical() {
        Fibration::HyperbolicFInf
    } else {
        let (a, b) = (u.as_finite().expect("finite"), v.as_finite().expect("finite"));
        let (lower, upper) = if a.im < b.im { (a, b) } else { (b, a) };
        if !(lower.im < 0.0 && upper.im > 0.0) {
            return Ok(None);
        }
        let lambda = -lower.im;
        let z = (upper - Complex64::new(lower.re, 0.0)) / lambda;
        Fibration::hyperbolic(z)?
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let fiber = Fiber::Geodesic(*geo);
    for _ in 0..IMAGE_SAMPLES {
        let c: Vec<f64> = (0..g.dimension()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let image = g.exp_combination(&c).image(&fiber)?;
        if fibration.fiber_mismatch(&image)? >= tol {
            return Ok(None);
        }
    }
    Ok(Some(match fibration {
        Fibration::HyperbolicFz { z } => EquivalenceTag::Hyperbolic(canonicalize_z(z)?.z),
        _ => EquivalenceTag::Infinity,
    }))
}
