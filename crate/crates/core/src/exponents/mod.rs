//! Exact exponent calculus on the `(1/p, 1/q)` square.
//!
//! Everything here is rational: points, exponents, thresholds and region
//! vertices are `Ratio<i128>` values. Conversion to decimals happens only when
//! data is rendered for output.

mod plot;
mod region;

use std::fmt;
use std::ops::{BitOr, BitOrAssign};

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use plot::{region_plot_data, Figure, PlotData, PlotItem, PlotKind};
pub use region::{convex_hull, q_points, region_membership, Membership, QPoints, RegionClass};

/// Exact rational scalar.
pub type Q = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Q {
    Q::new(num, den)
}

pub fn int(n: i128) -> Q {
    Q::from_integer(n)
}

/// Parses `"a/b"`, an integer, or a terminating decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let s = text.trim();
    let bad = || Error::param(format!("cannot parse {text:?} as a rational number"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().map_err(|_| bad())?;
        let b: i128 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(Error::param(format!("zero denominator in {text:?}")));
        }
        return Ok(Q::new(a, b));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_val: i128 = match whole {
            "" | "-" | "+" => 0,
            w => w.parse().map_err(|_| bad())?,
        };
        let den = 10i128.pow(frac.len() as u32);
        let frac_val: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let magnitude = whole_val.abs() * den + frac_val;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Q::new(num, den));
    }
    Ok(Q::from_integer(s.parse().map_err(|_| bad())?))
}

pub fn to_f64(x: Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
pub fn decimal(x: Q) -> String {
    let v = to_f64(x);
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// `num/den` when the value is not an integer.
pub fn fraction(x: Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde helpers writing a rational as `[num, den]`.
pub mod serde_rational {
    use super::Q;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        let num = i64::try_from(*x.numer()).map_err(serde::ser::Error::custom)?;
        let den = i64::try_from(*x.denom()).map_err(serde::ser::Error::custom)?;
        [num, den].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let [num, den] = <[i64; 2]>::deserialize(d)?;
        if den == 0 {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Q::new(num as i128, den as i128))
    }

    pub mod option {
        use super::Q;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super")] Q);

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            x.map(Wrap).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }
}

/// A point `(1/p, 1/q)` of the closed unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct PQPoint {
    pub inv_p: Q,
    pub inv_q: Q,
}

#[derive(Serialize, Deserialize)]
struct RawPoint(
    #[serde(with = "serde_rational")] Q,
    #[serde(with = "serde_rational")] Q,
);

impl TryFrom<RawPoint> for PQPoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        PQPoint::new(raw.0, raw.1)
    }
}

impl From<PQPoint> for RawPoint {
    fn from(p: PQPoint) -> Self {
        RawPoint(p.inv_p, p.inv_q)
    }
}

impl PQPoint {
    pub fn new(inv_p: Q, inv_q: Q) -> Result<Self> {
        let unit = |x: Q| x >= Q::zero() && x <= Q::one();
        if !unit(inv_p) || !unit(inv_q) {
            return Err(Error::param(format!(
                "({}, {}) is outside the unit square",
                fraction(inv_p),
                fraction(inv_q)
            )));
        }
        Ok(Self { inv_p, inv_q })
    }

    /// Point for exponents `p`, `q`, both at least 1.
    pub fn from_exponents(p: Q, q: Q) -> Result<Self> {
        if p < Q::one() || q < Q::one() {
            return Err(Error::param("exponents p, q must be at least 1"));
        }
        Self::new(p.recip(), q.recip())
    }

    pub(crate) fn raw(inv_p: Q, inv_q: Q) -> Self {
        Self { inv_p, inv_q }
    }

    pub fn midpoint(self, other: PQPoint) -> PQPoint {
        let half = rat(1, 2);
        PQPoint::raw((self.inv_p + other.inv_p) * half, (self.inv_q + other.inv_q) * half)
    }

    pub fn to_f64(self) -> (f64, f64) {
        (to_f64(self.inv_p), to_f64(self.inv_q))
    }
}

impl fmt::Display for PQPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fraction(self.inv_p), fraction(self.inv_q))
    }
}

/// Dimension and fractal parameters `mu <= alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub d: u32,
    #[serde(with = "serde_rational::option", default)]
    pub mu: Option<Q>,
    #[serde(with = "serde_rational")]
    pub alpha: Q,
}

impl RegionSpec {
    pub fn new(d: u32, mu: Option<Q>, alpha: Q) -> Result<Self> {
        let spec = Self { d, mu, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_d(self.d)?;
        check_alpha(self.alpha)?;
        if let Some(mu) = self.mu {
            if mu < Q::zero() || mu > self.alpha {
                return Err(Error::param(format!(
                    "need 0 <= mu <= alpha, got mu = {}, alpha = {}",
                    fraction(mu),
                    fraction(self.alpha)
                )));
            }
        }
        Ok(())
    }

    pub fn require_mu(&self) -> Result<Q> {
        self.mu
            .ok_or_else(|| Error::param("this operation needs mu (the Minkowski dimension)"))
    }
}

fn check_d(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::param(format!("dimension d must be at least 2, got {d}")));
    }
    Ok(())
}

fn check_alpha(alpha: Q) -> Result<()> {
    if alpha < Q::zero() || alpha > Q::one() {
        return Err(Error::param(format!(
            "alpha must lie in [0, 1], got {}",
            fraction(alpha)
        )));
    }
    Ok(())
}

/// True when formulas are evaluated at `alpha = 0`, outside `0 < alpha <= 1`
/// where the smoothing estimates are stated.
pub fn alpha_flagged(alpha: Q) -> bool {
    alpha.is_zero()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    S1,
    S2,
    S3,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::S1, Regime::S2, Regime::S3];

    fn bit(self) -> u8 {
        match self {
            Regime::S1 => 1,
            Regime::S2 => 2,
            Regime::S3 => 4,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::S1 => "s1",
            Regime::S2 => "s2",
            Regime::S3 => "s3",
        })
    }
}

/// A nonempty-or-empty set of regimes, used to report ties explicitly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Regime>", from = "Vec<Regime>")]
pub struct RegimeSet(u8);

impl RegimeSet {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn single(r: Regime) -> Self {
        Self(r.bit())
    }

    pub fn insert(&mut self, r: Regime) {
        self.0 |= r.bit();
    }

    pub fn contains(self, r: Regime) -> bool {
        self.0 & r.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_tie(self) -> bool {
        self.len() > 1
    }

    pub fn iter(self) -> impl Iterator<Item = Regime> {
        Regime::ALL.into_iter().filter(move |r| self.contains(*r))
    }
}

impl BitOr for RegimeSet {
    type Output = Self;

    fn bitor(self, rhs: Self) -> Self {
        Self(self.0 | rhs.0)
    }
}

impl BitOrAssign for RegimeSet {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl From<RegimeSet> for Vec<Regime> {
    fn from(set: RegimeSet) -> Self {
        set.iter().collect()
    }
}

impl From<Vec<Regime>> for RegimeSet {
    fn from(v: Vec<Regime>) -> Self {
        let mut set = RegimeSet::empty();
        for r in v {
            set.insert(r);
        }
        set
    }
}

impl fmt::Display for RegimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.iter().map(|r| r.to_string()).collect();
        f.write_str(&names.join("="))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SExponents {
    #[serde(with = "serde_rational")]
    pub s1: Q,
    #[serde(with = "serde_rational")]
    pub s2: Q,
    #[serde(with = "serde_rational")]
    pub s3: Q,
    #[serde(with = "serde_rational")]
    pub sc: Q,
}

impl SExponents {
    pub fn get(&self, r: Regime) -> Q {
        match r {
            Regime::S1 => self.s1,
            Regime::S2 => self.s2,
            Regime::S3 => self.s3,
        }
    }

    /// Regimes attaining the maximum.
    pub fn argmax(&self) -> RegimeSet {
        let mut set = RegimeSet::empty();
        for r in Regime::ALL {
            if self.get(r) == self.sc {
                set.insert(r);
            }
        }
        set
    }
}

/// The three affine exponents and their maximum.
pub fn s_exponents(point: PQPoint, d: u32, alpha: Q) -> Result<SExponents> {
    check_d(d)?;
    check_alpha(alpha)?;
    let dq = int(d as i128);
    let half = rat(1, 2);
    let (x, y) = (point.inv_p, point.inv_q);
    let s1 = (dq - 1) * half + x - dq * y;
    let s2 = (dq + 1) * half * (x - y) + alpha * y;
    let s3 = dq * x - (Q::one() - alpha) * y - (dq - 1) * half;
    let sc = s1.max(s2).max(s3);
    Ok(SExponents { s1, s2, s3, sc })
}

/// Which of `s1, s2, s3` attains `s_c` at the point; ties are all reported.
pub fn regime(point: PQPoint, d: u32, alpha: Q) -> Result<RegimeSet> {
    Ok(s_exponents(point, d, alpha)?.argmax())
}

/// `1/p` on the line where `s1 = s2`, for a given `q > 0`.
pub fn critical_line(q: Q, d: u32, alpha: Q) -> Result<Q> {
    check_d(d)?;
    check_alpha(alpha)?;
    if q <= Q::zero() {
        return Err(Error::param("q must be positive"));
    }
    critical_line_at(q.recip(), d, alpha)
}

/// `1/p` on the critical line as a function of `1/q`; `inv_q = 0` is the
/// `q -> infinity` limit.
pub fn critical_line_at(inv_q: Q, d: u32, alpha: Q) -> Result<Q> {
    let dq = int(d as i128);
    let inv_p = Q::one() - (dq - 1 + alpha * 2) / (dq - 1) * inv_q;
    if inv_p < Q::zero() || inv_p > Q::one() {
        return Err(Error::OutOfRange(format!(
            "critical line gives 1/p = {} outside [0, 1]",
            fraction(inv_p)
        )));
    }
    Ok(inv_p)
}

/// Closed-form threshold exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdTable {
    pub d: u32,
    #[serde(with = "serde_rational")]
    pub alpha: Q,
    /// `2(d+3)/(d+1)`
    #[serde(with = "serde_rational")]
    pub q_circ: Q,
    /// `2(d^2+(alpha+1)d+alpha-2)/(d^2-1)`
    #[serde(with = "serde_rational")]
    pub q_star: Q,
    /// `2 q_star / q_circ`
    #[serde(with = "serde_rational")]
    pub p_star: Q,
    /// `2(d-1+4alpha)/(d-1+2alpha)`
    #[serde(with = "serde_rational")]
    pub q_tilde_circ: Q,
    /// `(2(d-1+2alpha)^2-4alpha^2)/((d-1)(d-1+2alpha))`
    #[serde(with = "serde_rational")]
    pub q_tilde_star: Q,
    /// `(d^2+2alpha-1)/(d-1)`
    #[serde(with = "serde_rational")]
    pub q_alpha: Q,
    /// `(d^2+2alpha-1)/(d(d-1))`
    #[serde(with = "serde_rational")]
    pub p_alpha: Q,
    #[serde(with = "serde_rational::option", default)]
    pub r: Option<Q>,
    /// The bilinear threshold for a given local smoothing exponent `r`.
    #[serde(with = "serde_rational::option", default)]
    pub q_star_r: Option<Q>,
    /// `1/p` on the critical line at `q_star_r`.
    #[serde(with = "serde_rational::option", default)]
    pub inv_p_star_r: Option<Q>,
    /// Necessary condition from the angular cap pair: `2(d-1+2alpha)/(d-1)`.
    #[serde(with = "serde_rational")]
    pub q_necessary_angular: Q,
    /// Necessary condition from the squashed cap pair: `2(d+1+2alpha)/(d+1)`.
    #[serde(with = "serde_rational")]
    pub q_necessary_squashed: Q,
    /// `p = q = 2(alpha+d-1)/(d-1)`, where the estimate at `s = alpha/q` fails.
    #[serde(with = "serde_rational")]
    pub q_marginal: Q,
}

/// Evaluates every closed form exactly.
pub fn thresholds(d: u32, alpha: Q, r: Option<Q>) -> Result<ThresholdTable> {
    check_d(d)?;
    if alpha <= Q::zero() || alpha > Q::one() {
        return Err(Error::param(format!(
            "alpha must lie in (0, 1], got {}",
            fraction(alpha)
        )));
    }
    let dq = int(d as i128);
    let a = alpha;
    let two = int(2);
    let q_circ = two * (dq + 3) / (dq + 1);
    let q_star = two * (dq * dq + (a + 1) * dq + a - 2) / (dq * dq - 1);
    let p_star = two * q_star / q_circ;
    let q_tilde_circ = two * (dq - 1 + a * 4) / (dq - 1 + a * 2);
    let q_tilde_star =
        (two * (dq - 1 + a * 2) * (dq - 1 + a * 2) - a * a * 4) / ((dq - 1) * (dq - 1 + a * 2));
    let q_alpha = (dq * dq + a * 2 - 1) / (dq - 1);
    let p_alpha = (dq * dq + a * 2 - 1) / (dq * (dq - 1));
    let (q_star_r, inv_p_star_r) = match r {
        None => (None, None),
        Some(r) => {
            let q = q_star_of_r(d, a, r)?;
            (Some(q), Some(critical_line(q, d, a)?))
        }
    };
    Ok(ThresholdTable {
        d,
        alpha,
        q_circ,
        q_star,
        p_star,
        q_tilde_circ,
        q_tilde_star,
        q_alpha,
        p_alpha,
        r,
        q_star_r,
        inv_p_star_r,
        q_necessary_angular: two * (dq - 1 + a * 2) / (dq - 1),
        q_necessary_squashed: two * (dq + 1 + a * 2) / (dq + 1),
        q_marginal: two * (a + dq - 1) / (dq - 1),
    })
}

/// Coefficients `(A, B, C, D)` with `q_*(alpha, r) = (A r - B)/(C r - D)`.
fn q_star_r_coefficients(d: u32, alpha: Q) -> (Q, Q, Q, Q) {
    let dm = int(d as i128 - 1);
    let a = alpha;
    let big_a = int(2) * (dm + a * 2) * (dm + a * 2) - a * a * 4;
    let big_b = int(4) * (a * a * 4 + dm * dm + a * dm * 5);
    let big_c = dm * (a * 2 + dm);
    let big_d = int(2) * dm * (a * 3 + dm);
    (big_a, big_b, big_c, big_d)
}

fn q_star_of_r(d: u32, alpha: Q, r: Q) -> Result<Q> {
    if r <= int(2) {
        return Err(Error::param(format!("r must exceed 2, got {}", fraction(r))));
    }
    let (a, b, c, dd) = q_star_r_coefficients(d, alpha);
    let den = c * r - dd;
    if den <= Q::zero() {
        return Err(Error::param(format!(
            "r = {} is too small: the threshold needs r > {}",
            fraction(r),
            fraction(dd / c)
        )));
    }
    Ok((a * r - b) / den)
}

/// `lim_{r -> infinity} q_*(alpha, r)`, the ratio of leading coefficients.
pub fn q_star_r_limit(d: u32, alpha: Q) -> Result<Q> {
    check_d(d)?;
    check_alpha(alpha)?;
    let (a, _, c, _) = q_star_r_coefficients(d, alpha);
    if c.is_zero() {
        return Err(Error::param("degenerate limit"));
    }
    Ok(a / c)
}

/// `1/p = 1/q = (d-1)/(2(alpha+d-1))`, where `s_c = alpha/q` is not enough.
pub fn marginal_point(d: u32, alpha: Q) -> Result<PQPoint> {
    check_d(d)?;
    check_alpha(alpha)?;
    let dm = int(d as i128 - 1);
    let c = dm / (int(2) * (alpha + dm));
    PQPoint::new(c, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "regimes", rename_all = "snake_case")]
pub enum Necessity {
    Admissible,
    /// `s` lies below each listed exponent.
    Violates(RegimeSet),
    /// `s = alpha/q` at the marginal point, where strict inequality is needed.
    MarginalPoint,
}

impl fmt::Display for Necessity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Necessity::Admissible => f.write_str("admissible"),
            Necessity::Violates(set) => {
                let names: Vec<String> = set.iter().map(|r| format!("violates_{r}")).collect();
                f.write_str(&names.join(","))
            }
            Necessity::MarginalPoint => f.write_str("marginal_point"),
        }
    }
}

/// Tests `s` against the necessary conditions `s >= s_i` for all `i`, and
/// `s > alpha/q` at the marginal point.
pub fn necessary_check(point: PQPoint, d: u32, alpha: Q, s: Q) -> Result<Necessity> {
    let ex = s_exponents(point, d, alpha)?;
    let mut violated = RegimeSet::empty();
    for r in Regime::ALL {
        if s < ex.get(r) {
            violated.insert(r);
        }
    }
    if !violated.is_empty() {
        return Ok(Necessity::Violates(violated));
    }
    if point == marginal_point(d, alpha)? && s <= alpha * point.inv_q {
        return Ok(Necessity::MarginalPoint);
    }
    Ok(Necessity::Admissible)
}

pub(crate) fn cross(o: PQPoint, a: PQPoint, b: PQPoint) -> Q {
    (a.inv_p - o.inv_p) * (b.inv_q - o.inv_q) - (a.inv_q - o.inv_q) * (b.inv_p - o.inv_p)
}

pub(crate) fn on_segment(p: PQPoint, a: PQPoint, b: PQPoint) -> bool {
    cross(a, b, p).is_zero()
        && p.inv_p >= a.inv_p.min(b.inv_p)
        && p.inv_p <= a.inv_p.max(b.inv_p)
        && p.inv_q >= a.inv_q.min(b.inv_q)
        && p.inv_q <= a.inv_q.max(b.inv_q)
}
