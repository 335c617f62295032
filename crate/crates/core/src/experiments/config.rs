//! Run configuration documents.
//!
//! ```json
//! {
//!   "name": "s2_knapp",
//!   "family": "knapp",
//!   "set": { "kind": "cantor", "alpha": 1, "L": 16 },
//!   "p": "5/2", "q": 5,
//!   "j_range": [4, 7],
//!   "grid": { "n": 2048, "period": 8 },
//!   "tolerance": 0.15,
//!   "seed": 7
//! }
//! ```
//!
//! Exponents accept an integer, a `"a/b"` or decimal string, or `[num, den]`.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponents::{fraction, int, parse_rational, rat, Q};
use crate::extremizers::{Constants, Family};
use crate::fractal_sets::{TimeSet, DEFAULT_CANTOR_L};
use crate::grid::GridSpec;

pub const DEFAULT_TOLERANCE: f64 = 0.15;
/// Fits with an RMS residual above this are inconclusive.
pub const RESIDUAL_LIMIT: f64 = 0.25;

/// Rational fields written as `"a/b"` strings.
pub mod rational_text {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fraction(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match x {
                Some(x) => s.serialize_str(&fraction(*x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
            #[derive(Deserialize)]
            struct Wrap(#[serde(deserialize_with = "super::deserialize")] Q);
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational: integer, \"a/b\" or decimal string, or [num, den]")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
        Ok(int(v as i128))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
        Ok(int(v as i128))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Q, E> {
        parse_rational(&v.to_string()).map_err(E::custom)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
        parse_rational(v).map_err(E::custom)
    }

    fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Q, A::Error> {
        let num: i64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let den: i64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if den == 0 {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(rat(num as i128, den as i128))
    }
}

/// Rule producing the time set at each scale `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetRule {
    /// `{1 + L 2^-j}`.
    Single {
        #[serde(rename = "L", default = "default_l")]
        l: f64,
    },
    /// The Cantor-type set at scale `2^-j`.
    Cantor {
        #[serde(with = "rational_text")]
        alpha: Q,
        #[serde(rename = "L", default = "default_l")]
        l: f64,
    },
    /// A fixed set, discretized at `2^-j`.
    Explicit { points: TimeSet },
}

fn default_l() -> f64 {
    DEFAULT_CANTOR_L
}

impl SetRule {
    /// Dimension parameter implied by the rule, if any.
    pub fn alpha(&self) -> Option<Q> {
        match self {
            SetRule::Single { .. } => Some(int(0)),
            SetRule::Cantor { alpha, .. } => Some(*alpha),
            SetRule::Explicit { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub family: Family,
    pub set: SetRule,
    #[serde(with = "rational_text")]
    pub p: Q,
    #[serde(with = "rational_text")]
    pub q: Q,
    /// Defaults to the set rule's exponent.
    #[serde(default, with = "rational_text::option", skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Q>,
    pub j_range: (i32, i32),
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// Also measure ratios for fields with the same coefficient moduli and
    /// random phases drawn from `seed`.
    #[serde(default)]
    pub sanity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputPaths>,
}

fn default_name() -> String {
    "run".into()
}

fn default_grid() -> GridSpec {
    GridSpec::new(2048, 8.0).expect("valid default")
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl RunConfig {
    pub fn new(family: Family, set: SetRule, p: Q, q: Q, j_range: (i32, i32)) -> Self {
        Self {
            name: default_name(),
            family,
            set,
            p,
            q,
            alpha: None,
            j_range,
            grid: default_grid(),
            constants: Constants::default(),
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            sanity: false,
            output: None,
        }
    }

    pub fn effective_alpha(&self) -> Result<Q> {
        self.alpha.or_else(|| self.set.alpha()).ok_or_else(|| {
            Error::Config("alpha is required for an explicit time set".into())
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 0.5) {
            return Err(Error::Config(format!(
                "tolerance must lie in (0, 0.5), got {}",
                self.tolerance
            )));
        }
        let one = int(1);
        if !(self.p >= one && self.q >= self.p) {
            return Err(Error::Config(format!(
                "need 1 <= p <= q, got p = {}, q = {}",
                fraction(self.p),
                fraction(self.q)
            )));
        }
        let (lo, hi) = self.j_range;
        if lo > hi || hi - lo < 2 {
            return Err(Error::Config(format!(
                "j_range [{lo}, {hi}] must contain at least three scales"
            )));
        }
        if matches!(self.family, Family::BilinearCapPair | Family::SquashedPair) {
            return Err(Error::Config(
                "cap pairs are studied by the bilinear verification suite".into(),
            ));
        }
        let alpha = self.effective_alpha()?;
        if alpha < int(0) || alpha > one {
            return Err(Error::Config(format!("alpha must lie in [0, 1], got {}", fraction(alpha))));
        }
        let c = self.constants;
        if !(c.c1 > 0.0 && c.c0 > 0.0 && c.l > 0.0) {
            return Err(Error::Config("extremizer constants must be positive".into()));
        }
        let max = crate::extremizers::max_j(&self.grid);
        if lo < 1 || hi > max {
            return Err(Error::Resolution { j: if lo < 1 { lo } else { hi }, max_j: max });
        }
        Ok(())
    }

    pub fn from_json(text: &str, path: impl AsRef<Path>) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::parse_json(path.as_ref(), &e))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text, path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
