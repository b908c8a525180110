//! Conjugacy-class representatives of the closed connected subgroups of
//! Isom⁺(E³), each given by generating one-parameter flows.

use super::{exp_screw, EuclideanIsometry, ScrewGenerator, Vec3};
use crate::error::{GeoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum E3Group {
    Trivial,
    T1,
    SO2,
    ScrewSO2,
    SO2xT1,
    T2,
    ScrewE2,
    T3,
    E2,
    SO3,
    E2xT1,
    E3,
}

impl E3Group {
    pub const ALL: [E3Group; 12] = [
        E3Group::Trivial,
        E3Group::T1,
        E3Group::SO2,
        E3Group::ScrewSO2,
        E3Group::SO2xT1,
        E3Group::T2,
        E3Group::ScrewE2,
        E3Group::T3,
        E3Group::E2,
        E3Group::SO3,
        E3Group::E2xT1,
        E3Group::E3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            E3Group::Trivial => "{1}",
            E3Group::T1 => "T(1)",
            E3Group::SO2 => "SO(2)",
            E3Group::ScrewSO2 => "SO(2)_t-bar",
            E3Group::SO2xT1 => "SO(2)×T(1)",
            E3Group::T2 => "T(2)",
            E3Group::ScrewE2 => "E(2)_t-bar",
            E3Group::T3 => "T(3)",
            E3Group::E2 => "E(2)",
            E3Group::SO3 => "SO(3)",
            E3Group::E2xT1 => "E(2)×T(1)",
            E3Group::E3 => "E(3)",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            E3Group::Trivial => 0,
            E3Group::T1 | E3Group::SO2 | E3Group::ScrewSO2 => 1,
            E3Group::SO2xT1 | E3Group::T2 => 2,
            E3Group::ScrewE2 | E3Group::T3 | E3Group::E2 | E3Group::SO3 => 3,
            E3Group::E2xT1 => 4,
            E3Group::E3 => 6,
        }
    }

    /// Families indexed by a pitch `t > 0`.
    pub fn is_parametrized(self) -> bool {
        matches!(self, E3Group::ScrewSO2 | E3Group::ScrewE2)
    }

    /// Accepts the display name or an ASCII alias such as `SO3`, `T2`,
    /// `E2bar`, `SO2xT1`.
    pub fn parse(name: &str) -> Result<Self> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let group = match key.as_str() {
            "1" | "trivial" | "id" => E3Group::Trivial,
            "t1" => E3Group::T1,
            "so2" => E3Group::SO2,
            "so2tbar" | "so2t" | "so2bar" | "screwso2" => E3Group::ScrewSO2,
            "so2t1" | "so2xt1" => E3Group::SO2xT1,
            "t2" => E3Group::T2,
            "e2tbar" | "e2t" | "e2bar" | "screwe2" => E3Group::ScrewE2,
            "t3" => E3Group::T3,
            "e2" => E3Group::E2,
            "so3" => E3Group::SO3,
            "e2t1" | "e2xt1" => E3Group::E2xT1,
            "e3" => E3Group::E3,
            _ => return Err(GeoError::UnknownGroup(name.to_string())),
        };
        Ok(group)
    }
}

/// A catalog entry: the group, its generating flows and its pitch if any.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupSpecE3 {
    pub group: E3Group,
    pub name: &'static str,
    pub dimension: usize,
    pub generators: Vec<ScrewGenerator>,
    pub parameter: Option<f64>,
}

impl SubgroupSpecE3 {
    /// Builds the representative of `group`. `pitch` is required for the
    /// screw families and ignored otherwise.
    pub fn new(group: E3Group, pitch: Option<f64>) -> Result<Self> {
        let tx = ScrewGenerator::translation(Vec3::x());
        let ty = ScrewGenerator::translation(Vec3::y());
        let tz = ScrewGenerator::translation(Vec3::z());
        let rx = ScrewGenerator::rotation(Vec3::zeros(), Vec3::x());
        let ry = ScrewGenerator::rotation(Vec3::zeros(), Vec3::y());
        let rz = ScrewGenerator::rotation(Vec3::zeros(), Vec3::z());

        let parameter = if group.is_parametrized() {
            Some(validate_pitch(group, pitch)?)
        } else {
            None
        };
        let screw = || {
            let t = parameter.expect("validated pitch");
            ScrewGenerator::new(Vec3::zeros(), Vec3::z(), t, 1.0).expect("valid screw")
        };

        let generators = match group {
            E3Group::Trivial => vec![],
            E3Group::T1 => vec![tz],
            E3Group::SO2 => vec![rz],
            E3Group::ScrewSO2 => vec![screw()],
            E3Group::SO2xT1 => vec![rz, tz],
            E3Group::T2 => vec![tx, ty],
            E3Group::ScrewE2 => vec![tx, ty, screw()],
            E3Group::T3 => vec![tx, ty, tz],
            E3Group::E2 => vec![tx, ty, rz],
            E3Group::SO3 => vec![rx, ry, rz],
            E3Group::E2xT1 => vec![tx, ty, tz, rz],
            E3Group::E3 => vec![tx, ty, tz, rx, ry, rz],
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

    pub fn lookup(name: &str, pitch: Option<f64>) -> Result<Self> {
        Self::new(E3Group::parse(name)?, pitch)
    }

    /// Flow of generator `index` at parameter `s`.
    pub fn flow(&self, index: usize, s: f64) -> EuclideanIsometry {
        exp_screw(&self.generators[index], s)
    }
}

fn validate_pitch(group: E3Group, pitch: Option<f64>) -> Result<f64> {
    let t = pitch.ok_or_else(|| GeoError::InvalidParameter(format!("{} requires a pitch t > 0", group.name())))?;
    if !t.is_finite() {
        return Err(GeoError::InvalidParameter(format!("pitch must be finite, got {t}")));
    }
    if t == 0.0 {
        let reason = match group {
            E3Group::ScrewSO2 => "pitch 0 degenerates to T(1)",
            _ => "pitch 0 degenerates to T(3)",
        };
        return Err(GeoError::DegenerateParameter {
            group: group.name().to_string(),
            reason: reason.to_string(),
        });
    }
    if t < 0.0 {
        return Err(GeoError::InvalidParameter(format!(
            "negative pitch {t}: the group with pitch {} is its mirror image; use t = {}",
            t, -t
        )));
    }
    Ok(t)
}

/// All twelve catalog entries, with the screw families at pitch `pitch`.
pub fn catalog_e3(pitch: f64) -> Result<Vec<SubgroupSpecE3>> {
    E3Group::ALL
        .iter()
        .map(|&g| SubgroupSpecE3::new(g, Some(pitch)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::MotionKind;

    #[test]
    fn twelve_entries_with_expected_dimensions() {
        let cat = catalog_e3(1.0).unwrap();
        let names: Vec<_> = cat.iter().map(|g| g.name).collect();
        assert_eq!(
            names,
            [
                "{1}",
                "T(1)",
                "SO(2)",
                "SO(2)_t-bar",
                "SO(2)×T(1)",
                "T(2)",
                "E(2)_t-bar",
                "T(3)",
                "E(2)",
                "SO(3)",
                "E(2)×T(1)",
                "E(3)"
            ]
        );
        let dims: Vec<_> = cat.iter().map(|g| g.dimension).collect();
        assert_eq!(dims, [0, 1, 1, 1, 2, 2, 3, 3, 3, 3, 4, 6]);
        for g in &cat {
            assert_eq!(g.generators.len(), g.dimension);
        }
    }

    #[test]
    fn lookups() {
        assert_eq!(SubgroupSpecE3::lookup("E(3)", None).unwrap().dimension, 6);

        let t2 = SubgroupSpecE3::lookup("T2", None).unwrap();
        assert_eq!(t2.dimension, 2);
        for g in &t2.generators {
            assert_eq!(g.kind(), MotionKind::Translation);
            assert!(g.axis_direction.z.abs() < 1e-15);
        }
        let span = t2.generators[0].axis_direction.cross(&t2.generators[1].axis_direction);
        assert!((span.norm() - 1.0).abs() < 1e-15);

        let e2t = SubgroupSpecE3::lookup("E(2)_t-bar", Some(1.0)).unwrap();
        let kinds: Vec<_> = e2t.generators.iter().map(|g| g.kind()).collect();
        assert_eq!(
            kinds,
            [MotionKind::Translation, MotionKind::Translation, MotionKind::Screw]
        );
        assert_eq!(e2t.generators[2].rotation_rate, 1.0);
        assert_eq!(e2t.parameter, Some(1.0));
    }

    #[test]
    fn pitch_validation() {
        assert!(matches!(
            SubgroupSpecE3::lookup("SO(2)_t-bar", Some(0.0)),
            Err(GeoError::DegenerateParameter { .. })
        ));
        assert!(matches!(
            SubgroupSpecE3::lookup("SO(2)_t-bar", Some(-1.0)),
            Err(GeoError::InvalidParameter(_))
        ));
        assert!(SubgroupSpecE3::lookup("SO(2)_t-bar", None).is_err());
        assert!(matches!(
            SubgroupSpecE3::lookup("nope", None),
            Err(GeoError::UnknownGroup(_))
        ));
    }

    #[test]
    fn aliases_resolve() {
        for g in E3Group::ALL {
            assert_eq!(E3Group::parse(g.name()).unwrap(), g);
        }
        assert_eq!(E3Group::parse("SO2xT1").unwrap(), E3Group::SO2xT1);
        assert_eq!(E3Group::parse("E2bar").unwrap(), E3Group::ScrewE2);
        assert_eq!(E3Group::parse("SO2t").unwrap(), E3Group::ScrewSO2);
    }
}
