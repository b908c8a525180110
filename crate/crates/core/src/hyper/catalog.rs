//! Conjugacy-class representatives of the closed connected subgroups of
//! Isom⁺(H³), each generated by one-parameter families of Möbius maps.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul};

use super::{H3PointHalf, MobiusMap};
use crate::error::{GeoError, Result};
use crate::euclid::Vec3;

/// Traceless matrix `[[a, b], [c, -a]]` in sl(2, ℂ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Element {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl Sl2Element {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Self { a, b, c }
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self { a: z, b: z, c: z }
    }

    /// Killing field of the flow at `p`, in `(Re z, Im z, x)` coordinates:
    /// horizontal part `b + 2az - cz² + conj(c)x²`, vertical part `2x Re(a - cz)`.
    pub fn velocity(&self, p: &H3PointHalf) -> Vec3 {
        let z = p.z;
        let h = self.b + self.a * z * 2.0 - self.c * z * z + self.c.conj() * (p.x * p.x);
        Vec3::new(h.re, h.im, 2.0 * p.x * (self.a - self.c * z).re)
    }

    /// `exp(sA) = cosh(sμ) I + (sinh(sμ)/μ) A` with `μ² = a² + bc`.
    pub fn exp(&self, s: f64) -> MobiusMap {
        let mu = (self.a * self.a + self.b * self.c).sqrt();
        let x = mu * s;
        let (ch, sh_over_mu) = if x.norm() < 1e-4 {
            let x2 = x * x;
            (
                Complex64::new(1.0, 0.0) + x2 * 0.5 + x2 * x2 / 24.0,
                (Complex64::new(1.0, 0.0) + x2 / 6.0 + x2 * x2 / 120.0) * s,
            )
        } else {
            (x.cosh(), x.sinh() / mu)
        };
        MobiusMap {
            a: ch + sh_over_mu * self.a,
            b: sh_over_mu * self.b,
            c: sh_over_mu * self.c,
            d: ch - sh_over_mu * self.a,
        }
    }
}

impl Add for Sl2Element {
    type Output = Sl2Element;
    fn add(self, rhs: Self) -> Self {
        Self {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c + rhs.c,
        }
    }
}

impl Mul<f64> for Sl2Element {
    type Output = Sl2Element;
    fn mul(self, rhs: f64) -> Self {
        Self {
            a: self.a * rhs,
            b: self.b * rhs,
            c: self.c * rhs,
        }
    }
}

/// One-parameter group `s ↦ exp(s · generator)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusFamily {
    pub label: &'static str,
    pub generator: Sl2Element,
    /// Parameter of the half-turn for families that rotate.
    pub half_turn: Option<f64>,
}

impl MobiusFamily {
    pub fn at(&self, s: f64) -> MobiusMap {
        self.generator.exp(s)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn family(label: &'static str, a: Complex64, b: Complex64, cc: Complex64, rotates: bool) -> MobiusFamily {
    MobiusFamily {
        label,
        generator: Sl2Element::new(a, b, cc),
        half_turn: rotates.then_some(PI),
    }
}

mod families {
    use super::*;
    const O: Complex64 = Complex64::new(0.0, 0.0);

    /// `w ↦ w + s`
    pub fn real_translation() -> MobiusFamily {
        family("w+s", O, c(1.0, 0.0), O, false)
    }
    /// `w ↦ w + is`
    pub fn imaginary_translation() -> MobiusFamily {
        family("w+is", O, c(0.0, 1.0), O, false)
    }
    /// `w ↦ eˢ w`
    pub fn dilation() -> MobiusFamily {
        family("e^s w", c(0.5, 0.0), O, O, false)
    }
    /// `w ↦ e^{is} w`
    pub fn rotation() -> MobiusFamily {
        family("e^{is} w", c(0.0, 0.5), O, O, true)
    }
    /// `w ↦ e^{(ρ+i)s} w`
    pub fn loxodromic(ratio: f64) -> MobiusFamily {
        family("e^{(ρ+i)s} w", c(0.5 * ratio, 0.5), O, O, true)
    }
    /// Real rotation `[[cos s/2, sin s/2], [-sin s/2, cos s/2]]` about the
    /// geodesic from -i to i.
    pub fn real_elliptic() -> MobiusFamily {
        family("SO(2,ℝ)", O, c(0.5, 0.0), c(-0.5, 0.0), true)
    }
    /// Unitary rotation `[[cos s/2, i sin s/2], [i sin s/2, cos s/2]]`.
    pub fn unitary_elliptic() -> MobiusFamily {
        family("SU(2) i-rotation", O, c(0.0, 0.5), c(0.0, 0.5), true)
    }
    /// `w ↦ w / (s w + 1)`
    pub fn real_lower_parabolic() -> MobiusFamily {
        family("w/(sw+1)", O, O, c(1.0, 0.0), false)
    }
    /// `w ↦ w / (i s w + 1)`
    pub fn imaginary_lower_parabolic() -> MobiusFamily {
        family("w/(isw+1)", O, O, c(0.0, 1.0), false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum H3Group {
    Trivial,
    Hyp,
    Par,
    Ell,
    Lox,
    T2,
    HypPar,
    EllHyp,
    Hom,
    ScrewHom,
    E2,
    H2,
    SO3,
    Sim,
    H3,
}

impl H3Group {
    pub const ALL: [H3Group; 15] = [
        H3Group::Trivial,
        H3Group::Hyp,
        H3Group::Par,
        H3Group::Ell,
        H3Group::Lox,
        H3Group::T2,
        H3Group::HypPar,
        H3Group::EllHyp,
        H3Group::Hom,
        H3Group::ScrewHom,
        H3Group::E2,
        H3Group::H2,
        H3Group::SO3,
        H3Group::Sim,
        H3Group::H3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            H3Group::Trivial => "{1}",
            H3Group::Hyp => "Hyp",
            H3Group::Par => "Par",
            H3Group::Ell => "Ell",
            H3Group::Lox => "Lox",
            H3Group::T2 => "T(2)",
            H3Group::HypPar => "⟨Hyp,Par⟩",
            H3Group::EllHyp => "⟨Ell,Hyp⟩",
            H3Group::Hom => "Hom",
            H3Group::ScrewHom => "ScrewHom",
            H3Group::E2 => "E(2)",
            H3Group::H2 => "H(2)",
            H3Group::SO3 => "SO(3)",
            H3Group::Sim => "Sim",
            H3Group::H3 => "H(3)",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            H3Group::Trivial => 0,
            H3Group::Hyp | H3Group::Par | H3Group::Ell | H3Group::Lox => 1,
            H3Group::T2 | H3Group::HypPar | H3Group::EllHyp => 2,
            H3Group::Hom | H3Group::ScrewHom | H3Group::E2 | H3Group::H2 | H3Group::SO3 => 3,
            H3Group::Sim => 4,
            H3Group::H3 => 6,
        }
    }

    /// Families indexed by the loxodromic ratio.
    pub fn is_parametrized(self) -> bool {
        matches!(self, H3Group::Lox | H3Group::ScrewHom)
    }

    pub fn parse(name: &str) -> Result<Self> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let group = match key.as_str() {
            "1" | "trivial" | "id" => H3Group::Trivial,
            "hyp" => H3Group::Hyp,
            "par" => H3Group::Par,
            "ell" => H3Group::Ell,
            "lox" => H3Group::Lox,
            "t2" => H3Group::T2,
            "hyppar" => H3Group::HypPar,
            "ellhyp" => H3Group::EllHyp,
            "hom" => H3Group::Hom,
            "screwhom" => H3Group::ScrewHom,
            "e2" => H3Group::E2,
            "h2" => H3Group::H2,
            "so3" => H3Group::SO3,
            "sim" => H3Group::Sim,
            "h3" => H3Group::H3,
            _ => return Err(GeoError::UnknownGroup(name.to_string())),
        };
        Ok(group)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupSpecH3 {
    pub group: H3Group,
    pub name: &'static str,
    pub dimension: usize,
    pub generators: Vec<MobiusFamily>,
    /// Loxodromic ratio: dilation rate per unit rotation rate.
    pub parameter: Option<f64>,
}

impl SubgroupSpecH3 {
    /// Builds the representative of `group`; `ratio` is required for `Lox`
    /// and `ScrewHom` and ignored otherwise.
    pub fn new(group: H3Group, ratio: Option<f64>) -> Result<Self> {
        use families::*;
        let parameter = if group.is_parametrized() {
            Some(validate_ratio(group, ratio)?)
        } else {
            None
        };
        let lox = || loxodromic(parameter.expect("validated ratio"));
        let generators = match group {
            H3Group::Trivial => vec![],
            H3Group::Hyp => vec![dilation()],
            H3Group::Par => vec![real_translation()],
            H3Group::Ell => vec![rotation()],
            H3Group::Lox => vec![lox()],
            H3Group::T2 => vec![real_translation(), imaginary_translation()],
            H3Group::HypPar => vec![real_translation(), dilation()],
            H3Group::EllHyp => vec![rotation(), dilation()],
            H3Group::Hom => vec![real_translation(), imaginary_translation(), dilation()],
            H3Group::ScrewHom => vec![real_translation(), imaginary_translation(), lox()],
            H3Group::E2 => vec![real_translation(), imaginary_translation(), rotation()],
            H3Group::H2 => vec![real_translation(), dilation(), real_elliptic()],
            H3Group::SO3 => vec![rotation(), real_elliptic(), unitary_elliptic()],
            H3Group::Sim => vec![real_translation(), imaginary_translation(), dilation(), rotation()],
            H3Group::H3 => vec![
                real_translation(),
                imaginary_translation(),
                dilation(),
                rotation(),
                real_lower_parabolic(),
                imaginary_lower_parabolic(),
            ],
        };
        debug_assert_eq!(generators.len(), group.dimension());
        Ok(Self {
            group,
            name: group.name(),
            dimension: group.dimension(),
            generators,
            parameter,
        })
    }

    pub fn lookup(name: &str, ratio: Option<f64>) -> Result<Self> {
        Self::new(H3Group::parse(name)?, ratio)
    }

    pub fn flow(&self, index: usize, s: f64) -> MobiusMap {
        self.generators[index].at(s)
    }
}

fn validate_ratio(group: H3Group, ratio: Option<f64>) -> Result<f64> {
    let r = ratio.ok_or_else(|| GeoError::InvalidParameter(format!("{} requires a loxodromic ratio", group.name())))?;
    if r == 0.0 {
        return Err(GeoError::DegenerateParameter {
            group: group.name().to_string(),
            reason: "ratio 0 is a pure rotation (Ell)".to_string(),
        });
    }
    if !r.is_finite() {
        return Err(GeoError::DegenerateParameter {
            group: group.name().to_string(),
            reason: "infinite ratio is a pure dilation (Hyp)".to_string(),
        });
    }
    Ok(r)
}

/// All fifteen catalog entries, with `Lox`/`ScrewHom` at ratio `ratio`.
pub fn catalog_h3(ratio: f64) -> Result<Vec<SubgroupSpecH3>> {
    H3Group::ALL
        .iter()
        .map(|&g| SubgroupSpecH3::new(g, Some(ratio)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::{to_ball, BoundaryPoint, H3PointHalf};

    #[test]
    fn fifteen_entries() {
        let cat = catalog_h3(1.0).unwrap();
        let names: Vec<_> = cat.iter().map(|g| g.name).collect();
        assert_eq!(
            names,
            [
                "{1}",
                "Hyp",
                "Par",
                "Ell",
                "Lox",
                "T(2)",
                "⟨Hyp,Par⟩",
                "⟨Ell,Hyp⟩",
                "Hom",
                "ScrewHom",
                "E(2)",
                "H(2)",
                "SO(3)",
                "Sim",
                "H(3)"
            ]
        );
        let dims: Vec<_> = cat.iter().map(|g| g.dimension).collect();
        assert_eq!(dims, [0, 1, 1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 4, 6]);
    }

    #[test]
    fn hyp_par_generators() {
        let g = SubgroupSpecH3::lookup("⟨Hyp,Par⟩", None).unwrap();
        assert_eq!(g.dimension, 2);
        let w = BoundaryPoint::finite(0.3, -1.2);
        let s = 0.7;
        let shifted = g.flow(0, s).apply(&w).as_finite().unwrap();
        assert!((shifted - c(1.0, -1.2)).norm() < 1e-15);
        let dilated = g.flow(1, s).apply(&w).as_finite().unwrap();
        assert!((dilated - c(0.3, -1.2) * s.exp()).norm() < 1e-14);
        assert_eq!(SubgroupSpecH3::lookup("Sim", None).unwrap().dimension, 4);
    }

    #[test]
    fn so3_fixes_ball_centre() {
        let g = SubgroupSpecH3::lookup("SO(3)", None).unwrap();
        assert_eq!(g.dimension, 3);
        let o = H3PointHalf::basepoint();
        for i in 0..3 {
            for s in [-2.0, 0.4, 1.9] {
                let q = g.flow(i, s).extend(&o);
                assert!(to_ball(&q).v.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn h2_preserves_real_plane() {
        let g = SubgroupSpecH3::lookup("H(2)", None).unwrap();
        let p = H3PointHalf::new(c(0.7, 0.0), 0.3).unwrap();
        for i in 0..3 {
            let q = g.flow(i, 0.9).extend(&p);
            assert!(q.z.im.abs() < 1e-15);
            assert!(to_ball(&q).v.z.abs() < 1e-14);
        }
    }

    #[test]
    fn families_are_homomorphisms() {
        for g in catalog_h3(0.6).unwrap() {
            for fam in &g.generators {
                let (s1, s2) = (0.37, -1.21);
                let lhs = fam.at(s1).compose(&fam.at(s2));
                assert!(lhs.approx_eq(&fam.at(s1 + s2), 1e-12), "{}", fam.label);
                assert!(fam.at(0.0).approx_eq(&MobiusMap::identity(), 1e-15));
            }
        }
    }

    #[test]
    fn ratio_validation() {
        assert!(matches!(
            SubgroupSpecH3::lookup("Lox", Some(0.0)),
            Err(GeoError::DegenerateParameter { .. })
        ));
        assert!(matches!(
            SubgroupSpecH3::lookup("ScrewHom", Some(f64::INFINITY)),
            Err(GeoError::DegenerateParameter { .. })
        ));
        assert!(SubgroupSpecH3::lookup("Lox", Some(-0.5)).is_ok());
        for g in H3Group::ALL {
            assert_eq!(H3Group::parse(g.name()).unwrap(), g);
        }
        assert_eq!(H3Group::parse("HypPar").unwrap(), H3Group::HypPar);
    }

    #[test]
    fn exp_series_branch_is_consistent() {
        let a = Sl2Element::new(c(0.3, 0.2), c(-0.1, 0.5), c(0.2, 0.0));
        // |μ s| straddles the series cutoff on either side of the product.
        let (small, large) = (1.5e-4, 0.8);
        let lhs = a.exp(small).compose(&a.exp(large));
        assert!(lhs.approx_eq(&a.exp(small + large), 1e-14));
        assert!((a.exp(small).det() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn velocity_matches_flow_derivative() {
        let p = H3PointHalf::new(Complex64::new(0.4, -0.7), 1.3).unwrap();
        let gens = [
            families::real_elliptic().generator,
            families::unitary_elliptic().generator,
            families::imaginary_lower_parabolic().generator,
            families::loxodromic(0.6).generator,
            Sl2Element::new(c(0.2, -0.1), c(0.3, 0.5), c(-0.7, 0.4)),
        ];
        let h = 1e-5;
        for g in gens {
            let fwd = g.exp(h).extend(&p).to_vec3();
            let back = g.exp(-h).extend(&p).to_vec3();
            let fd = (fwd - back) / (2.0 * h);
            assert!((fd - g.velocity(&p)).norm() < 1e-8, "{g:?}");
        }
    }
}
