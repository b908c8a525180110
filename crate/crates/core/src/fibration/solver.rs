use num_complex::Complex64;

use super::HypFiberCoords;
use crate::error::{GeoError, Result};
use crate::hyper::{H3Geodesic, H3PointHalf};
use crate::roots::solve_positive;

/// Lower and upper bounds of the `λ` bracket search.
pub const LAMBDA_RANGE: (f64, f64) = (1e-8, 1e8);
/// Hyperbolic distance below which a solved fiber counts as passing through the point.
pub const SOLVER_RESIDUAL: f64 = 1e-10;

const GRID: usize = 65;

fn check_z(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(GeoError::OutOfDomain {
            value: z.im,
            domain: "Im z > 0",
        });
    }
    Ok(())
}

/// Signed fiber equation in `λ`: positive exactly when the geodesic with
/// parameters `(λ, a(λ))` passes above `p`.
fn height_defect(z: Complex64, p: &H3PointHalf, lambda: f64) -> f64 {
    let k = z.im;
    let wi = p.z.im;
    let scale = (z + Complex64::i()).norm_sqr() / ((k + 1.0) * (k + 1.0));
    (lambda + wi) * (lambda * k - wi) * scale - p.x * p.x
}

/// Real offset of the fiber with scale `λ` whose vertical plane contains `p`.
pub fn offset_for(z: Complex64, p: &H3PointHalf, lambda: f64) -> f64 {
    p.z.re - (lambda + p.z.im) * z.re / (z.im + 1.0)
}

/// Fiber of `F_z` through `p`, with endpoints `(a - λi, a + λz)`.
pub fn fiber_h3_z(z: Complex64, p: &H3PointHalf) -> Result<(H3Geodesic, HypFiberCoords)> {
    fiber_h3_z_bracketed(z, p, LAMBDA_RANGE.0, LAMBDA_RANGE.1)
}

/// As [`fiber_h3_z`], searching for `λ` in `[lo, hi]` only.
pub fn fiber_h3_z_bracketed(z: Complex64, p: &H3PointHalf, lo: f64, hi: f64) -> Result<(H3Geodesic, HypFiberCoords)> {
    check_z(z)?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(GeoError::InvalidParameter(format!(
            "λ bracket [{lo}, {hi}] must satisfy 0 < lo < hi"
        )));
    }
    let f = |lambda: f64| height_defect(z, p, lambda);
    let lambda = solve_positive(f, lo, hi, GRID).map_err(|_| GeoError::SolverFailure {
        residual: f64::INFINITY,
    })?;
    let coords = HypFiberCoords {
        lambda,
        a: offset_for(z, p, lambda),
    };
    let g = coords.geodesic(z)?;
    let residual = g.distance_to_point(p);
    if !(residual < SOLVER_RESIDUAL) {
        return Err(GeoError::SolverFailure { residual });
    }
    Ok((g, coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::BoundaryPoint;

    fn pt(re: f64, im: f64, x: f64) -> H3PointHalf {
        H3PointHalf::new(Complex64::new(re, im), x).unwrap()
    }

    /// Positive root of `kλ² + wi(k-1)λ - C = 0`, `C = wi² + h²(k+1)²/|z+i|²`.
    fn quadratic_lambda(z: Complex64, p: &H3PointHalf) -> f64 {
        let k = z.im;
        let wi = p.z.im;
        let c = wi * wi + p.x * p.x * (k + 1.0).powi(2) / (z + Complex64::i()).norm_sqr();
        let b = wi * (k - 1.0);
        (-b + (b * b + 4.0 * k * c).sqrt()) / (2.0 * k)
    }

    #[test]
    fn apex_of_gamma_i() {
        let (g, c) = fiber_h3_z(Complex64::i(), &pt(0.0, 0.0, 1.0)).unwrap();
        assert!((c.lambda - 1.0).abs() < 1e-12 && c.a.abs() < 1e-12);
        let want = H3Geodesic::new(BoundaryPoint::finite(0.0, -1.0), BoundaryPoint::finite(0.0, 1.0)).unwrap();
        assert!(g.mismatch(&want) < 1e-12);
    }

    #[test]
    fn apex_of_gamma_2i() {
        let (g, c) = fiber_h3_z(Complex64::new(0.0, 2.0), &pt(0.0, 0.5, 1.5)).unwrap();
        assert!((c.lambda - 1.0).abs() < 1e-12 && c.a.abs() < 1e-12);
        let want = H3Geodesic::new(BoundaryPoint::finite(0.0, -1.0), BoundaryPoint::finite(0.0, 2.0)).unwrap();
        assert!(g.mismatch(&want) < 1e-12);
    }

    #[test]
    fn matches_closed_form_root() {
        let zs = [
            Complex64::new(1.0, 1.0),
            Complex64::new(-0.7, 0.3),
            Complex64::new(2.5, 4.0),
        ];
        let ps = [
            pt(0.3, 0.2, 0.7),
            pt(-1.9, 1.8, 0.1),
            pt(1.2, -2.0, 3.9),
            pt(0.0, 0.0, 0.01),
        ];
        for z in zs {
            for p in &ps {
                let (_, c) = fiber_h3_z(z, p).unwrap();
                let want = quadratic_lambda(z, p);
                assert!((c.lambda / want - 1.0).abs() < 1e-12, "{z} {p:?}");
            }
        }
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(fiber_h3_z(Complex64::new(1.0, 0.0), &pt(0.0, 0.0, 1.0)).is_err());
        assert!(fiber_h3_z(Complex64::new(1.0, -1.0), &pt(0.0, 0.0, 1.0)).is_err());
    }
}
