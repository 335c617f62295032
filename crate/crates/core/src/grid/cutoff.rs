//! Smooth cutoffs built from the `e^{-1/s}` step.

use serde::{Deserialize, Serialize};

/// `0` for `s <= 0`, `1` for `s >= 1`, smooth and monotone in between.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    a / (a + b)
}

/// `1` on `t <= 1`, `0` on `t >= 2`.
pub fn psi(t: f64) -> f64 {
    smooth_step(2.0 - t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffKind {
    /// Littlewood–Paley bump, supported in `(1/2, 2)`.
    Beta,
    /// Even bump, `1` on `[-2, 2]`, supported in `(-4, 4)`.
    Beta0,
    /// Annular bump, `1` on `[1/2, 2]`, supported in `(1/4, 4)`.
    Beta1,
}

pub fn cutoff(kind: CutoffKind, t: f64) -> f64 {
    match kind {
        CutoffKind::Beta => {
            if t <= 0.0 {
                0.0
            } else {
                psi(t) - psi(2.0 * t)
            }
        }
        CutoffKind::Beta0 => psi(t.abs() / 2.0),
        CutoffKind::Beta1 => {
            if t <= 0.0 {
                0.0
            } else {
                psi(t / 2.0) - psi(4.0 * t)
            }
        }
    }
}

/// A cutoff together with its support and plateau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub kind: CutoffKind,
}

impl CutoffProfile {
    pub fn new(kind: CutoffKind) -> Self {
        Self { kind }
    }

    pub fn eval(&self, t: f64) -> f64 {
        cutoff(self.kind, t)
    }

    /// Open interval outside of which the profile vanishes.
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            CutoffKind::Beta => (0.5, 2.0),
            CutoffKind::Beta0 => (-4.0, 4.0),
            CutoffKind::Beta1 => (0.25, 4.0),
        }
    }

    /// Closed interval on which the profile is identically one. The
    /// Littlewood–Paley bump has none.
    pub fn plateau(&self) -> Option<(f64, f64)> {
        match self.kind {
            CutoffKind::Beta => None,
            CutoffKind::Beta0 => Some((-2.0, 2.0)),
            CutoffKind::Beta1 => Some((0.5, 2.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert_eq!(cutoff(CutoffKind::Beta1, 1.0), 1.0);
        assert_eq!(cutoff(CutoffKind::Beta, 3.0), 0.0);
        let s: f64 = (0..=10).map(|j| cutoff(CutoffKind::Beta, 7.3 / 2f64.powi(j))).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partition_of_unity() {
        let big_j = 12;
        for i in 0..=4000 {
            let t = 2f64.powf(big_j as f64 * i as f64 / 4000.0);
            let s: f64 = (0..=big_j).map(|j| cutoff(CutoffKind::Beta, t / 2f64.powi(j))).sum();
            assert!((s - 1.0).abs() <= 1e-12, "t = {t}: {s}");
        }
    }

    #[test]
    fn supports_and_plateaus() {
        for kind in [CutoffKind::Beta, CutoffKind::Beta0, CutoffKind::Beta1] {
            let prof = CutoffProfile::new(kind);
            let (a, b) = prof.support();
            for i in 0..=20000 {
                let t = -6.0 + 12.0 * i as f64 / 20000.0;
                let v = prof.eval(t);
                assert!((0.0..=1.0).contains(&v));
                if t <= a || t >= b {
                    assert_eq!(v, 0.0, "{kind:?} at {t}");
                }
                if let Some((c, d)) = prof.plateau() {
                    if t >= c && t <= d {
                        assert_eq!(v, 1.0, "{kind:?} at {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn step_is_monotone() {
        let mut last = 0.0;
        for i in 0..=1000 {
            let v = smooth_step(i as f64 / 1000.0);
            assert!(v >= last);
            last = v;
        }
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }
}
