//! Group-element searches used by the elimination battery.

use nalgebra::{DMatrix, DVector};

use super::SubgroupSpec;
use crate::error::Result;
use crate::euclid::Vec3;
use crate::space::{Isometry, Point};

const LM_MAX_ITER: usize = 200;
const LM_JACOBIAN_STEP: f64 = 1e-6;
/// Residual accepted as an exact solve.
pub(crate) const SOLVE_TOL: f64 = 1e-11;

/// Levenberg-Marquardt for `r: ℝⁿ → ℝ³`, started at `x0`. Returns the
/// final point and residual norm.
pub(crate) fn least_squares<F>(r: F, x0: Vec<f64>) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> Vec3,
{
    let n = x0.len();
    let mut x = x0;
    let mut res = r(&x);
    let mut mu = 1e-3;
    for _ in 0..LM_MAX_ITER {
        if res.norm() < SOLVE_TOL * 0.1 || n == 0 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(3, n);
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += LM_JACOBIAN_STEP;
            xm[j] -= LM_JACOBIAN_STEP;
            let col = (r(&xp) - r(&xm)) / (2.0 * LM_JACOBIAN_STEP);
            jac.set_column(j, &col);
        }
        let rv = DVector::from_column_slice(res.as_slice());
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * rv;
        let mut improved = false;
        for _ in 0..12 {
            let a = &jtj + DMatrix::<f64>::identity(n, n) * mu;
            let Some(step) = a.lu().solve(&(-&jtr)) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let trial_res = r(&trial);
            if trial_res.norm().is_finite() && trial_res.norm() < res.norm() {
                x = trial;
                res = trial_res;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (x, res.norm())
}

/// Chart used for residuals: Cartesian in E³, `(Re z, Im z, ln x)` in H³.
pub(crate) fn chart(p: &Point) -> Vec3 {
    match p {
        Point::E3(v) => *v,
        Point::H3(q) => Vec3::new(q.z.re, q.z.im, q.x.ln()),
    }
}

/// Element `exp(Σ cᵢXᵢ)` of `g` taking `from` to `to`, if the search
/// converges to an exact solution.
pub fn transport(g: &SubgroupSpec, from: &Point, to: &Point) -> Option<Isometry> {
    let target = chart(to);
    let residual = |c: &[f64]| match g.exp_combination(c).apply(from) {
        Ok(p) => chart(&p) - target,
        Err(_) => Vec3::repeat(f64::INFINITY),
    };
    let (c, r) = least_squares(residual, vec![0.0; g.dimension()]);
    (r < SOLVE_TOL * (1.0 + target.norm())).then(|| g.exp_combination(&c))
}

/// Unit coefficient vectors spanning the Lie algebra of the stabilizer
/// of `p`: the nullspace of the generator velocities at `p`.
pub fn isotropy_elements(g: &SubgroupSpec, p: &Point) -> Result<Vec<Vec<f64>>> {
    let vel = g.velocities(p)?;
    let k = vel.len();
    if k == 0 {
        return Ok(vec![]);
    }
    let scale = vel.iter().map(|v| v.norm()).fold(1.0, f64::max);
    // Square padding keeps the full right-singular basis.
    let m = DMatrix::from_fn(k.max(3), k, |r, c| if r < 3 { vel[c][r] / scale } else { 0.0 });
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    Ok(svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < 1e-10)
        .map(|(i, _)| vt.row(i).iter().copied().collect())
        .collect())
}
