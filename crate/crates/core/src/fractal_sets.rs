//! Finite dilation sets in `[1, 2]`: Cantor-type generators, covering numbers,
//! Assouad characteristics and the rescaled interval families built from them.
//!
//! All comparisons between point positions use the absolute tolerance
//! [`EPS`]. Covering numbers count *open* intervals of length `delta`, so two
//! points at distance exactly `delta` always need two intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::least_squares;

/// Absolute tolerance for point comparisons.
pub const EPS: f64 = 1e-9;

/// Calibration constant for [`build_cantor`] used throughout the crate.
pub const DEFAULT_CANTOR_L: f64 = 16.0;

/// A finite, strictly increasing set of dilation times in `[1, 2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeSet {
    points: Vec<f64>,
    min_gap: f64,
}

impl TimeSet {
    /// Builds a set from strictly increasing points inside `[1, 2]`.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        for (i, &p) in points.iter().enumerate() {
            if !(1.0 - EPS..=2.0 + EPS).contains(&p) {
                return Err(Error::param(format!("point {p} is outside [1, 2]")));
            }
            if i > 0 && p <= points[i - 1] {
                return Err(Error::param(format!(
                    "points must be strictly increasing ({} then {p})",
                    points[i - 1]
                )));
            }
        }
        let min_gap = points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let min_gap = if points.len() < 2 { 0.0 } else { min_gap };
        Ok(Self { points, min_gap })
    }

    /// Sorts and deduplicates (within [`EPS`]) before validating.
    pub fn from_unsorted(mut points: Vec<f64>) -> Result<Self> {
        points.sort_by(f64::total_cmp);
        points.dedup_by(|b, a| (*b - *a).abs() <= EPS);
        Self::new(points)
    }

    pub fn empty() -> Self {
        Self {
            points: Vec::new(),
            min_gap: 0.0,
        }
    }

    pub fn singleton(t: f64) -> Result<Self> {
        Self::new(vec![t])
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest consecutive gap, `0` for fewer than two points.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    pub fn max(&self) -> Option<f64> {
        self.points.last().copied()
    }

    /// True when every pair of distinct points is at least `delta` apart.
    pub fn is_separated(&self, delta: f64) -> bool {
        self.len() < 2 || self.min_gap >= delta - EPS
    }

    /// Points lying in the closed interval `[a, b]`.
    pub fn slice(&self, a: f64, b: f64) -> &[f64] {
        let lo = self.points.partition_point(|&p| p < a - EPS);
        let hi = self.points.partition_point(|&p| p <= b + EPS);
        &self.points[lo..hi.max(lo)]
    }

    pub fn is_subset_of(&self, other: &TimeSet) -> bool {
        self.points
            .iter()
            .all(|&p| other.points.iter().any(|&q| (p - q).abs() <= EPS))
    }
}

impl TryFrom<Vec<f64>> for TimeSet {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<TimeSet> for Vec<f64> {
    fn from(set: TimeSet) -> Self {
        set.points
    }
}

/// Parameters of the Cantor-type construction with ratio `mu = 2^(-1/alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorSpec {
    pub alpha: f64,
    pub j: u32,
    #[serde(rename = "L")]
    pub l: f64,
    pub k: u32,
    pub mu: f64,
}

impl CantorSpec {
    /// Picks the stage count for separation scale `2^-j`: the largest `k`
    /// with `mu^k >= l * 2^-j`, clamped at zero.
    pub fn from_scale(alpha: f64, j: u32, l: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if j < 1 {
            return Err(Error::param("j must be at least 1"));
        }
        if !(l >= 1.0) || !l.is_finite() {
            return Err(Error::param(format!("L must be >= 1, got {l}")));
        }
        let mu = mu_for(alpha);
        let target = l * 2f64.powi(-(j as i32));
        let ratio = target.ln() / mu.ln();
        // round-off guard so exact powers land on the right integer
        let mut k = if ratio <= 0.0 {
            0
        } else {
            (ratio + 1e-9).floor() as i64
        };
        while k > 0 && mu.powi(k as i32) < 2f64.powi(-(j as i32)) {
            k -= 1;
        }
        Ok(Self {
            alpha,
            j,
            l,
            k: k as u32,
            mu,
        })
    }

    /// A spec with a prescribed stage count. `j` becomes the smallest scale
    /// for which the set is still `2^-j`-separated, and `l = mu^k 2^j`.
    pub fn with_stages(alpha: f64, k: u32) -> Result<Self> {
        check_alpha(alpha)?;
        let mu = mu_for(alpha);
        let j = ((k as f64 / alpha) - 1e-9).ceil().max(1.0) as u32;
        let l = mu.powi(k as i32) * 2f64.powi(j as i32);
        Ok(Self {
            alpha,
            j,
            l,
            k,
            mu,
        })
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if (self.mu - mu_for(self.alpha)).abs() > 1e-12 {
            return Err(Error::param("mu must equal 2^(-1/alpha)"));
        }
        if self.k > 0 && self.mu.powi(self.k as i32) < 2f64.powi(-(self.j as i32)) * (1.0 - 1e-12) {
            return Err(Error::param("mu^k must be at least 2^-j"));
        }
        Ok(())
    }

    pub fn cardinality(&self) -> usize {
        1usize << self.k
    }

    /// The set `{1 + mu^k + sum_m (1 - mu) mu^m P_m : P_m in {0, 1}}`.
    pub fn build(&self) -> TimeSet {
        let mut points = vec![1.0 + self.mu.powi(self.k as i32)];
        for m in 0..self.k {
            let step = (1.0 - self.mu) * self.mu.powi(m as i32);
            let shifted: Vec<f64> = points.iter().map(|p| p + step).collect();
            points.extend(shifted);
        }
        points.sort_by(f64::total_cmp);
        TimeSet::new(points).expect("Cantor points are distinct and inside [1, 2]")
    }
}

fn mu_for(alpha: f64) -> f64 {
    2f64.powf(-1.0 / alpha)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

/// Right endpoints of the `2^k` stage-`k` intervals, `k` calibrated from `(j, l)`.
pub fn build_cantor(alpha: f64, j: u32, l: f64) -> Result<TimeSet> {
    Ok(CantorSpec::from_scale(alpha, j, l)?.build())
}

/// Splits the Cantor set by the position of its lowest nonzero digit.
///
/// Level `l < k` holds the points with `P_l = 1` and `P_m = 0` for `m < l`
/// (`2^(k-l-1)` points, all with `t - 1` in `[(1 - mu) mu^l, mu^l]`). Level
/// `k` is the single point `1 + mu^k`.
pub fn decompose_cantor_levels(spec: &CantorSpec) -> Result<Vec<TimeSet>> {
    spec.validate()?;
    let k = spec.k;
    let mu = spec.mu;
    let base = 1.0 + mu.powi(k as i32);
    let mut levels = Vec::with_capacity(k as usize + 1);
    for l in 0..k {
        let mut points = vec![base + (1.0 - mu) * mu.powi(l as i32)];
        for m in (l + 1)..k {
            let step = (1.0 - mu) * mu.powi(m as i32);
            let shifted: Vec<f64> = points.iter().map(|p| p + step).collect();
            points.extend(shifted);
        }
        points.sort_by(f64::total_cmp);
        levels.push(TimeSet::new(points)?);
    }
    levels.push(TimeSet::singleton(base)?);
    Ok(levels)
}

/// Greedy cover count of a sorted slice by open intervals of length `delta`.
fn greedy_cover(points: &[f64], delta: f64) -> usize {
    let mut count = 0;
    let mut start = f64::NEG_INFINITY;
    for &p in points {
        if p >= start + delta - EPS {
            count += 1;
            start = p;
        }
    }
    count
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::param(format!("delta must be positive, got {delta}")));
    }
    Ok(())
}

/// Minimal number of open length-`delta` intervals covering `set ∩ [a, b]`.
pub fn covering_number(set: &TimeSet, a: f64, b: f64, delta: f64) -> Result<usize> {
    check_delta(delta)?;
    if a > b {
        return Err(Error::param(format!("empty interval [{a}, {b}]")));
    }
    Ok(greedy_cover(set.slice(a, b), delta))
}

/// `sup (delta/|I|)^alpha N(set ∩ I, delta)` over subintervals `I` of `[1, 2]`
/// with `delta <= |I| <= 1`.
///
/// Candidates are the intervals spanned by pairs of set points (widened to
/// length `delta` when shorter) together with `[1, 2]`; the objective only
/// changes when an endpoint crosses a set point.
pub fn assouad_characteristic(set: &TimeSet, delta: f64, alpha: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    Ok(characteristic_unchecked(set.points(), delta, alpha))
}

fn characteristic_unchecked(p: &[f64], delta: f64, alpha: f64) -> f64 {
    let n = p.len();
    let mut best = delta.powf(alpha) * greedy_cover(p, delta) as f64;
    let mut prefix = vec![0usize; n];
    for i in 0..n {
        // greedy counts for p[i..=jj], extending to the right
        let mut count = 0;
        let mut start = f64::NEG_INFINITY;
        for jj in i..n {
            if p[jj] >= start + delta - EPS {
                count += 1;
                start = p[jj];
            }
            prefix[jj] = count;
        }
        let reach = p.partition_point(|&x| x <= p[i] + delta + EPS);
        let last_short = reach.saturating_sub(1).max(i);
        for jj in i..n {
            let len = p[jj] - p[i];
            let value = if len < delta {
                prefix[last_short.max(jj)] as f64
            } else {
                (delta / len).powf(alpha) * prefix[jj] as f64
            };
            best = best.max(value);
        }
    }
    best
}

/// `sup_{delta <= delta' < 1} A_alpha(set; delta')`, evaluated on the dyadic
/// multiples of `delta` together with every consecutive gap in `[delta, 1)`.
pub fn assouad_characteristic_sup(set: &TimeSet, delta: f64, alpha: f64) -> Result<f64> {
    let mut best = assouad_characteristic(set, delta, alpha)?;
    let mut scales = Vec::new();
    let mut d = delta * 2.0;
    while d < 1.0 {
        scales.push(d);
        d *= 2.0;
    }
    scales.extend(
        set.points()
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|&g| g >= delta && g < 1.0),
    );
    scales.sort_by(f64::total_cmp);
    scales.dedup_by(|b, a| (*b - *a).abs() <= EPS * 1e-3);
    for s in scales {
        best = best.max(characteristic_unchecked(set.points(), s, alpha));
    }
    Ok(best)
}

/// Greedy maximal `delta`-separated subset, scanning left to right.
pub fn discretize(set: &TimeSet, delta: f64) -> TimeSet {
    let mut kept: Vec<f64> = Vec::with_capacity(set.len());
    for &p in set.points() {
        match kept.last() {
            Some(&last) if p < last + delta - EPS => {}
            _ => kept.push(p),
        }
    }
    TimeSet::new(kept).expect("subset of a valid set")
}

/// Slope of `log N(set, delta)` against `log(1/delta)`.
pub fn minkowski_estimate(set: &TimeSet, deltas: &[f64]) -> Result<f64> {
    let mut distinct: Vec<f64> = deltas.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::param("minkowski_estimate needs at least 3 distinct deltas"));
    }
    if set.is_empty() {
        return Err(Error::param("cannot estimate the dimension of an empty set"));
    }
    let samples = distinct
        .iter()
        .map(|&d| {
            let n = covering_number(set, 1.0, 2.0, d)?;
            Ok(((1.0 / d).ln(), (n as f64).ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(least_squares(&samples)?.slope)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalSum {
    /// `sum_{t} (t - 1)^(-alpha)` over the Cantor set.
    pub sum: f64,
    /// `sum / (k 2^k)`.
    pub ratio: f64,
    /// False for `k < 2`, where the normalisation is degenerate.
    pub reliable: bool,
}

/// The weighted sum that diverges like `k 2^k` near the marginal point.
pub fn marginal_sum(spec: &CantorSpec) -> Result<MarginalSum> {
    spec.validate()?;
    let set = spec.build();
    let sum: f64 = set.points().iter().map(|t| (t - 1.0).powf(-spec.alpha)).sum();
    let k = spec.k as f64;
    let norm = k.max(1.0) * 2f64.powi(spec.k as i32);
    Ok(MarginalSum {
        sum,
        ratio: sum / norm,
        reliable: spec.k >= 2,
    })
}

/// A family of unit intervals `(s, s + 1)` with 1-separated left endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalFamily {
    pub starts: Vec<f64>,
    pub alpha: f64,
    /// Smallest `C` with `#{I : I ∩ (t, t + r) != ∅} <= C r^alpha` for all
    /// `t` and `r >= 1`.
    pub constant: f64,
}

impl IntervalFamily {
    pub fn new(starts: Vec<f64>, alpha: f64) -> Result<Self> {
        if starts.windows(2).any(|w| w[1] - w[0] < 1.0 - EPS) {
            return Err(Error::param("interval starts must be 1-separated"));
        }
        let constant = growth_constant(&starts, alpha);
        Ok(Self {
            starts,
            alpha,
            constant,
        })
    }

    /// Number of intervals `(s, s + 1)` meeting the open window `(t, t + r)`.
    pub fn count_meeting(&self, t: f64, r: f64) -> usize {
        let lo = self.starts.partition_point(|&s| s <= t - 1.0);
        let hi = self.starts.partition_point(|&s| s < t + r);
        hi.saturating_sub(lo)
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }
}

// The window (t, t + r) meets (s, s + 1) iff s lies in (t - 1, t + r), an
// open window of length r + 1, so the supremum over t for fixed r is attained
// by windows starting just left of some s_i. The ratio count / r^alpha is
// largest right where the count steps up, i.e. r -> s_m - s_i - 1.
fn growth_constant(starts: &[f64], alpha: f64) -> f64 {
    let mut best = if starts.is_empty() { 0.0 } else { 1.0 };
    for i in 0..starts.len() {
        for m in i..starts.len() {
            let r = (starts[m] - starts[i] - 1.0).max(1.0);
            best = f64::max(best, (m - i + 1) as f64 / r.powf(alpha));
        }
    }
    best
}

/// Rescales the Cantor set into unit-separated interval starts.
///
/// With `scale = 2^-j theta^-2`, the set is discretised at `scale` and mapped
/// by `t -> (t - 1) / scale`; `theta = 1` gives `{2^j (t - 1)}`.
pub fn build_interval_family(spec: &CantorSpec, theta: f64) -> Result<IntervalFamily> {
    spec.validate()?;
    let lo = 2f64.powf(-(spec.j as f64) / 2.0);
    if !(theta >= lo * (1.0 - 1e-12) && theta <= 1.0 + 1e-12) {
        return Err(Error::param(format!(
            "theta must lie in [2^(-j/2), 1] = [{lo}, 1], got {theta}"
        )));
    }
    let scale = 2f64.powi(-(spec.j as i32)) / (theta * theta);
    let set = discretize(&spec.build(), scale);
    let starts = set.points().iter().map(|t| (t - 1.0) / scale).collect();
    IntervalFamily::new(starts, spec.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter_set() -> TimeSet {
        TimeSet::new(vec![1.25, 1.5, 1.75, 2.0]).unwrap()
    }

    /// Cover search over candidate left ends: a fine grid around every point
    /// plus the placements just inside each end of a point's window.
    fn brute_cover(points: &[f64], delta: f64) -> usize {
        if points.is_empty() {
            return 0;
        }
        let mut cands: Vec<f64> = Vec::new();
        for &p in points {
            for s in 0..=40 {
                cands.push(p - delta + (s as f64) * delta / 40.0);
            }
            cands.push(p - 1e-10);
            cands.push(p - delta + 1e-10);
        }
        let covered = |a: f64, p: f64| p > a + 1e-12 && p < a + delta - 1e-12;
        // minimal number by BFS over how many leftmost points are covered
        let n = points.len();
        let mut best = vec![usize::MAX; n + 1];
        best[0] = 0;
        for i in 0..n {
            if best[i] == usize::MAX {
                continue;
            }
            for &a in &cands {
                if !covered(a, points[i]) {
                    continue;
                }
                let mut e = i;
                while e < n && covered(a, points[e]) {
                    e += 1;
                }
                best[e] = best[e].min(best[i] + 1);
            }
        }
        best[n]
    }

    #[test]
    fn cantor_alpha_one_two_stages() {
        // mu = 1/2; L in (2, 4] gives k = 2 at j = 4
        let spec = CantorSpec::from_scale(1.0, 4, 3.0).unwrap();
        assert_eq!(spec.k, 2);
        let set = spec.build();
        assert_eq!(set.points(), &[1.25, 1.5, 1.75, 2.0]);
        assert!((set.min_gap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cantor_alpha_half_one_stage() {
        let spec = CantorSpec::with_stages(0.5, 1).unwrap();
        assert!((spec.mu - 0.25).abs() < 1e-15);
        let set = spec.build();
        assert_eq!(set.points(), &[1.25, 2.0]);
    }

    #[test]
    fn cantor_zero_stages_is_two() {
        let set = build_cantor(1.0, 4, 16.0).unwrap();
        assert_eq!(set.points(), &[2.0]);
        assert!(build_cantor(0.0, 4, 16.0).is_err());
        assert!(build_cantor(1.5, 4, 16.0).is_err());
        assert!(build_cantor(1.0, 4, 0.5).is_err());
    }

    #[test]
    fn cantor_cardinality_and_gap() {
        for &alpha in &[0.25, 0.5, 2.0 / 3.0, 1.0] {
            for j in 4..=12 {
                let spec = CantorSpec::from_scale(alpha, j, 16.0).unwrap();
                let set = spec.build();
                assert_eq!(set.len(), 1 << spec.k);
                if spec.k >= 1 {
                    let gap = (1.0 - spec.mu) * spec.mu.powi(spec.k as i32 - 1);
                    assert!((set.min_gap() - gap).abs() < 1e-12);
                }
                assert!(set.is_separated(2f64.powi(-(j as i32))));
                assert!(set.points()[0] > 1.0);
            }
        }
    }

    #[test]
    fn levels_small_case() {
        let spec = CantorSpec::with_stages(1.0, 2).unwrap();
        let levels = decompose_cantor_levels(&spec).unwrap();
        assert_eq!(levels[2].points(), &[1.25]);
        assert_eq!(levels[1].points(), &[1.5]);
        assert_eq!(levels[0].points(), &[1.75, 2.0]);
        let spec0 = CantorSpec::with_stages(1.0, 0).unwrap();
        let levels0 = decompose_cantor_levels(&spec0).unwrap();
        assert_eq!(levels0.len(), 1);
        assert_eq!(levels0[0].points(), &[2.0]);
    }

    #[test]
    fn levels_partition_and_sizes() {
        for &alpha in &[0.5, 1.0] {
            let spec = CantorSpec::with_stages(alpha, 4).unwrap();
            let levels = decompose_cantor_levels(&spec).unwrap();
            let sizes: Vec<usize> = levels.iter().map(TimeSet::len).collect();
            assert_eq!(sizes, vec![8, 4, 2, 1, 1]);
            let mut all: Vec<f64> = levels.iter().flat_map(|l| l.points().to_vec()).collect();
            all.sort_by(f64::total_cmp);
            let full = spec.build();
            assert_eq!(all.len(), full.len());
            for (a, b) in all.iter().zip(full.points()) {
                assert!((a - b).abs() < 1e-12);
            }
            for (l, level) in levels.iter().enumerate() {
                let scale = spec.mu.powi(l as i32);
                for t in level.points() {
                    let x = t - 1.0;
                    assert!(x >= (1.0 - spec.mu) * scale - 1e-12 && x <= scale + 1e-12);
                }
            }
        }
    }

    #[test]
    fn covering_examples_match_brute_force() {
        let set = quarter_set();
        assert_eq!(covering_number(&set, 1.0, 2.0, 0.3).unwrap(), 2);
        assert_eq!(brute_cover(set.points(), 0.3), 2);
        assert_eq!(covering_number(&set, 1.0, 2.0, 0.25).unwrap(), 4);
        assert_eq!(brute_cover(set.points(), 0.25), 4);
        assert_eq!(covering_number(&set, 1.0, 1.2, 0.1).unwrap(), 0);
        assert!(covering_number(&set, 1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn greedy_is_optimal_on_small_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..=12);
            let pts: Vec<f64> = (0..n).map(|_| 1.0 + rng.random::<f64>()).collect();
            let set = TimeSet::from_unsorted(pts).unwrap();
            let delta = rng.random_range(0.02..0.5);
            assert_eq!(
                covering_number(&set, 1.0, 2.0, delta).unwrap(),
                brute_cover(set.points(), delta)
            );
        }
    }

    #[test]
    fn characteristic_quarter_set() {
        // [1.25, 1.5] has length delta and needs two open intervals
        let v = assouad_characteristic(&quarter_set(), 0.25, 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
        let single = TimeSet::singleton(1.5).unwrap();
        for &(d, a) in &[(0.1, 0.3), (0.01, 1.0), (0.5, 0.0)] {
            assert!((assouad_characteristic(&single, d, a).unwrap() - 1.0).abs() < 1e-12);
            assert!((assouad_characteristic_sup(&single, d, a).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(assouad_characteristic(&single, 1.0, 0.5).is_err());
        assert!(assouad_characteristic(&single, 0.1, 1.5).is_err());
    }

    #[test]
    fn sup_characteristic_detects_coarse_arithmetic_progression() {
        // {1 + m delta^beta}: A_alpha = 1 but the sup grows like delta^(beta(alpha - 1))
        let (alpha, beta) = (0.9, 0.5);
        for &delta in &[1e-2, 1e-3, 1e-4] {
            let step = f64::powf(delta, beta);
            let count = (1.0 / step).floor() as usize;
            let pts: Vec<f64> = (1..=count).map(|m| 1.0 + m as f64 * step).collect();
            let set = TimeSet::new(pts).unwrap();
            let a = assouad_characteristic(&set, delta, alpha).unwrap();
            let s = assouad_characteristic_sup(&set, delta, alpha).unwrap();
            assert!((a - 1.0).abs() < 1e-9, "A = {a}");
            assert!(s >= 0.99 * delta.powf(beta * (alpha - 1.0)), "sup = {s}");
        }
    }

    #[test]
    fn discretize_examples() {
        let d = discretize(&quarter_set(), 0.3);
        assert_eq!(d.points(), &[1.25, 1.75]);
        assert_eq!(discretize(&quarter_set(), 0.2), quarter_set());
        assert!(discretize(&TimeSet::empty(), 0.1).is_empty());
    }

    #[test]
    fn minkowski_examples() {
        for &(alpha, k) in &[(1.0, 10u32), (0.5, 6)] {
            let spec = CantorSpec::with_stages(alpha, k).unwrap();
            let set = spec.build();
            let deltas: Vec<f64> = (2..=k).map(|m| spec.mu.powi(m as i32)).collect();
            let slope = minkowski_estimate(&set, &deltas).unwrap();
            assert!((slope - alpha).abs() < 0.05, "alpha {alpha}: slope {slope}");
        }
        let single = TimeSet::singleton(1.3).unwrap();
        let slope = minkowski_estimate(&single, &[0.1, 0.01, 0.001]).unwrap();
        assert!(slope.abs() < 1e-12);
        assert!(minkowski_estimate(&single, &[0.1, 0.01]).is_err());
    }

    #[test]
    fn marginal_sum_examples() {
        let spec = CantorSpec::with_stages(1.0, 2).unwrap();
        let m = marginal_sum(&spec).unwrap();
        assert!((m.sum - 25.0 / 3.0).abs() < 1e-12);
        assert!((m.ratio - 25.0 / 24.0).abs() < 1e-12);
        assert!(m.reliable);
        let small = marginal_sum(&CantorSpec::with_stages(1.0, 1).unwrap()).unwrap();
        assert!(!small.reliable);

        let r2 = marginal_sum(&CantorSpec::with_stages(1.0, 2).unwrap()).unwrap().ratio;
        let r12 = marginal_sum(&CantorSpec::with_stages(1.0, 12).unwrap()).unwrap().ratio;
        assert!(r2.max(r12) / r2.min(r12) < 2.0);

        // direct summation for alpha = 1/2, k = 4: mu = 1/4
        let spec = CantorSpec::with_stages(0.5, 4).unwrap();
        let mut direct = 0.0;
        for bits in 0..16u32 {
            let mut t = 1.0 + 0.25f64.powi(4);
            for m in 0..4 {
                if bits >> m & 1 == 1 {
                    t += 0.75 * 0.25f64.powi(m);
                }
            }
            direct += (t - 1.0).powf(-0.5);
        }
        let m = marginal_sum(&spec).unwrap();
        assert!((m.sum - direct).abs() < 1e-9 * direct);
        assert!((0.25..=4.0).contains(&m.ratio));
    }

    #[test]
    fn interval_family_examples() {
        let spec = CantorSpec::from_scale(1.0, 4, 3.0).unwrap();
        let fam = build_interval_family(&spec, 1.0).unwrap();
        assert_eq!(fam.starts, vec![4.0, 8.0, 12.0, 16.0]);
        assert!((fam.constant - 1.0).abs() < 1e-12);

        let single = CantorSpec::from_scale(1.0, 4, 16.0).unwrap();
        let fam = build_interval_family(&single, 1.0).unwrap();
        assert_eq!(fam.len(), 1);
        assert!((fam.constant - 1.0).abs() < 1e-12);

        assert!(build_interval_family(&spec, 0.1).is_err());
        assert!(build_interval_family(&spec, 1.5).is_err());
    }

    #[test]
    fn interval_family_counts_respect_constant() {
        let spec = CantorSpec::from_scale(0.5, 12, 16.0).unwrap();
        for &theta in &[1.0, 0.5, 2f64.powi(-6)] {
            let fam = build_interval_family(&spec, theta).unwrap();
            assert!(fam.starts.windows(2).all(|w| w[1] - w[0] >= 1.0 - 1e-9));
            for ti in 0..200 {
                let t = -2.0 + ti as f64 * 0.37;
                for &r in &[1.0, 1.5, 3.0, 10.0, 40.0, 200.0] {
                    let c = fam.count_meeting(t, r) as f64;
                    assert!(c <= fam.constant * r.powf(fam.alpha) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn json_shapes() {
        let set = quarter_set();
        assert_eq!(serde_json::to_string(&set).unwrap(), "[1.25,1.5,1.75,2.0]");
        let back: TimeSet = serde_json::from_str("[1.25,1.5]").unwrap();
        assert_eq!(back.len(), 2);
        assert!(serde_json::from_str::<TimeSet>("[1.5,1.25]").is_err());
        let spec = CantorSpec::from_scale(1.0, 6, 16.0).unwrap();
        let v: serde_json::Value = serde_json::to_value(spec).unwrap();
        for key in ["alpha", "j", "L", "k", "mu"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
