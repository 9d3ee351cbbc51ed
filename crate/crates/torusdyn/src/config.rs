//! Structured records for configs and reports.
//!
//! Rationals cross the boundary as canonical "p/q" strings and reals as
//! 17-significant-digit decimal strings, so serialized output round-trips
//! exactly and reruns are byte-identical.

use crate::cones::{Decomposition, FunctionalSet, OffsetTag};
use crate::error::{Error, Result};
use crate::polytopes::HPolytope;
use crate::rat::{fmt_rat, parse_rat, Rat};
use crate::weights::{Character, WeightSystem};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// f64 wrapper serializing as a 17-significant-digit decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

pub fn fmt_real(x: f64) -> String {
    format!("{:.16e}", x)
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_real(self.0))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(Real(x)),
            Repr::Str(s) => s
                .parse::<f64>()
                .map(Real)
                .map_err(|_| D::Error::custom(format!("bad real: {s}"))),
        }
    }
}

/// Rational wrapper serializing as "p/q".
#[derive(Debug, Clone, PartialEq)]
pub struct RatStr(pub Rat);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s)
            .map(RatStr)
            .ok_or_else(|| D::Error::custom(format!("bad rational: {s}")))
    }
}

fn rats(v: &[Rat]) -> Vec<RatStr> {
    v.iter().map(|x| RatStr(x.clone())).collect()
}

fn unrats(v: Vec<RatStr>) -> Vec<Rat> {
    v.into_iter().map(|x| x.0).collect()
}

/// {rank, [[coords...], multiplicity]...}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightSystemRecord {
    pub rank: usize,
    pub weights: Vec<(Vec<i64>, u64)>,
}

impl WeightSystemRecord {
    pub fn from_system(ws: &WeightSystem) -> Self {
        WeightSystemRecord {
            rank: ws.rank(),
            weights: ws
                .entries()
                .map(|(c, m)| (c.coords().to_vec(), m))
                .collect(),
        }
    }

    pub fn into_system(self) -> Result<WeightSystem> {
        WeightSystem::new(
            self.rank,
            self.weights
                .into_iter()
                .map(|(c, m)| (Character::new(c), m)),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionalSetRecord {
    pub dim: usize,
    pub functionals: Vec<Vec<RatStr>>,
}

impl FunctionalSetRecord {
    pub fn from_set(fs: &FunctionalSet) -> Self {
        FunctionalSetRecord {
            dim: fs.dim(),
            functionals: fs.functionals().iter().map(|f| rats(f)).collect(),
        }
    }

    pub fn into_set(self) -> Result<FunctionalSet> {
        FunctionalSet::new(self.dim, self.functionals.into_iter().map(unrats).collect())
    }
}

/// Per-index offset tag: {"diverges": true} or {"constant": "p/q"}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OffsetTagRecord {
    Diverges { diverges: bool },
    Constant { constant: RatStr },
}

impl OffsetTagRecord {
    pub fn into_tag(self) -> Result<OffsetTag> {
        match self {
            OffsetTagRecord::Diverges { diverges: true } => Ok(OffsetTag::Diverges),
            OffsetTagRecord::Diverges { diverges: false } => Err(Error::InvalidInput(
                "diverges flag must be true; use constant otherwise".into(),
            )),
            OffsetTagRecord::Constant { constant } => Ok(OffsetTag::Constant(constant.0)),
        }
    }

    pub fn from_tag(tag: &OffsetTag) -> Self {
        match tag {
            OffsetTag::Diverges => OffsetTagRecord::Diverges { diverges: true },
            OffsetTag::Constant(c) => OffsetTagRecord::Constant {
                constant: RatStr(c.clone()),
            },
        }
    }
}

/// Index lists plus exact bases, the emitted decomposition report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub phi_inf: Vec<usize>,
    pub phi_1: Vec<usize>,
    pub phi_0: Vec<usize>,
    pub w_basis: Vec<Vec<RatStr>>,
    pub u_basis: Vec<Vec<RatStr>>,
}

impl DecompositionReport {
    pub fn from_decomposition(dec: &Decomposition) -> Self {
        DecompositionReport {
            phi_inf: dec.phi_inf.iter().copied().collect(),
            phi_1: dec.phi1.iter().copied().collect(),
            phi_0: dec.phi0.iter().copied().collect(),
            w_basis: dec.w_basis.iter().map(|v| rats(v)).collect(),
            u_basis: dec.u_basis.iter().map(|v| rats(v)).collect(),
        }
    }
}

/// Constraint list of rational pairs: alpha . v >= b.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeRecord {
    pub dim: usize,
    pub constraints: Vec<(Vec<RatStr>, RatStr)>,
}

impl PolytopeRecord {
    pub fn from_polytope(p: &HPolytope) -> Self {
        PolytopeRecord {
            dim: p.dim(),
            constraints: p
                .constraints()
                .iter()
                .map(|(a, b)| (rats(a), RatStr(b.clone())))
                .collect(),
        }
    }

    pub fn into_polytope(self) -> Result<HPolytope> {
        HPolytope::new(
            self.dim,
            self.constraints
                .into_iter()
                .map(|(a, b)| (unrats(a), b.0))
                .collect(),
        )
    }
}
