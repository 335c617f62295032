//! Exact plot data for the three type-set diagrams.
//!
//! Rendering is left to external tools; this module only emits labelled
//! points, segments and polygons as exact rationals with a CSV variant.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{critical_line_at, decimal, fraction, int, rat, thresholds, PQPoint, Q, RegionSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// Regime partition of the square by `s1`, `s2`, `s3`.
    Fig1,
    /// The restricted weak type point `(1/p_*, 1/q_*)`.
    Fig2,
    /// Extended range using an `L^r` local smoothing estimate.
    Fig3,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" | "1" => Ok(Figure::Fig1),
            "fig2" | "2" => Ok(Figure::Fig2),
            "fig3" | "3" => Ok(Figure::Fig3),
            other => Err(Error::Usage(format!("unknown figure {other:?} (fig1, fig2, fig3)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    Point,
    Segment,
    Dotted,
    Polygon,
}

impl PlotKind {
    fn name(self) -> &'static str {
        match self {
            PlotKind::Point => "point",
            PlotKind::Segment => "segment",
            PlotKind::Dotted => "dotted",
            PlotKind::Polygon => "polygon",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotItem {
    pub label: String,
    pub kind: PlotKind,
    pub points: Vec<PQPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotData {
    pub figure: Figure,
    pub d: u32,
    #[serde(with = "super::serde_rational")]
    pub alpha: Q,
    #[serde(with = "super::serde_rational::option", default)]
    pub r: Option<Q>,
    pub items: Vec<PlotItem>,
}

impl PlotData {
    pub fn item(&self, label: &str) -> Option<&PlotItem> {
        self.items.iter().find(|i| i.label == label)
    }

    /// Every marked point (items of kind `point`).
    pub fn marked_points(&self) -> Vec<PQPoint> {
        self.items
            .iter()
            .filter(|i| i.kind == PlotKind::Point)
            .flat_map(|i| i.points.iter().copied())
            .collect()
    }

    /// One row per vertex: `label,kind,index,inv_p,inv_q,inv_p_exact,inv_q_exact`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,kind,index,inv_p,inv_q,inv_p_exact,inv_q_exact\n");
        for item in &self.items {
            for (i, p) in item.points.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    item.label,
                    item.kind.name(),
                    i,
                    decimal(p.inv_p),
                    decimal(p.inv_q),
                    fraction(p.inv_p),
                    fraction(p.inv_q)
                );
            }
        }
        out
    }
}

fn item(label: &str, kind: PlotKind, points: Vec<PQPoint>) -> PlotItem {
    PlotItem {
        label: label.to_string(),
        kind,
        points,
    }
}

fn p(x: Q, y: Q) -> PQPoint {
    PQPoint::raw(x, y)
}

/// Labelled geometry for one of the figures. `fig3` uses `r = 4` when no
/// exponent is supplied.
pub fn region_plot_data(spec: &RegionSpec, figure: Figure, r: Option<Q>) -> Result<PlotData> {
    spec.validate()?;
    let d = spec.d;
    let a = spec.alpha;
    let dm = int(d as i128 - 1);
    let c = dm / (int(2) * (dm + a));
    let (zero, one, half) = (Q::zero(), Q::one(), rat(1, 2));
    let corner = p(c, c);
    let mid = p(half, half);
    let origin = p(zero, zero);
    let right = p(one, zero);
    // the critical line reaches 1/q = 0 at 1/p = 1
    let crit_end = p(critical_line_at(Q::zero(), d, a)?, zero);

    let mut items = Vec::new();
    let r_used = match figure {
        Figure::Fig1 => {
            items.push(item("s1", PlotKind::Polygon, vec![origin, right, corner]));
            items.push(item("s2", PlotKind::Polygon, vec![corner, right, mid]));
            items.push(item("s3", PlotKind::Polygon, vec![mid, right, p(one, one)]));
            items.push(item("diagonal", PlotKind::Segment, vec![origin, p(one, one)]));
            items.push(item("s2_s3_boundary", PlotKind::Segment, vec![mid, right]));
            items.push(item("inv_p_one", PlotKind::Segment, vec![right, p(one, one)]));
            items.push(item("critical_line", PlotKind::Segment, vec![corner, crit_end]));
            items.push(item("corner", PlotKind::Point, vec![corner]));
            items.push(item("half", PlotKind::Point, vec![mid]));
            items.push(item("one", PlotKind::Point, vec![p(one, one)]));
            None
        }
        Figure::Fig2 => {
            let t = thresholds(d, a, None)?;
            let circ = p(half, t.q_circ.recip());
            let star = p(t.p_star.recip(), t.q_star.recip());
            items.push(item("diagonal", PlotKind::Segment, vec![origin, mid]));
            items.push(item("bilinear_line", PlotKind::Dotted, vec![origin, circ]));
            items.push(item("critical_line", PlotKind::Segment, vec![corner, crit_end]));
            items.push(item("q_circ", PlotKind::Point, vec![circ]));
            items.push(item("half", PlotKind::Point, vec![mid]));
            items.push(item("p_star_q_star", PlotKind::Point, vec![star]));
            items.push(item("corner", PlotKind::Point, vec![corner]));
            None
        }
        Figure::Fig3 => {
            let r = r.unwrap_or_else(|| int(4));
            let t = thresholds(d, a, Some(r))?;
            let tilde = p(half, t.q_tilde_circ.recip());
            let star = p(t.inv_p_star_r.expect("r supplied"), t.q_star_r.expect("r supplied").recip());
            let r_point = p(r.recip(), r.recip());
            items.push(item("diagonal", PlotKind::Segment, vec![origin, mid]));
            items.push(item(
                "q_tilde_circ_level",
                PlotKind::Dotted,
                vec![p(zero, t.q_tilde_circ.recip()), tilde],
            ));
            items.push(item("r_level", PlotKind::Dotted, vec![p(zero, r.recip()), r_point]));
            items.push(item("interpolation_line", PlotKind::Dotted, vec![r_point, tilde]));
            items.push(item("critical_line", PlotKind::Segment, vec![corner, crit_end]));
            items.push(item("q_tilde_circ", PlotKind::Point, vec![tilde]));
            items.push(item("half", PlotKind::Point, vec![mid]));
            items.push(item("p_star_q_star_r", PlotKind::Point, vec![star]));
            items.push(item("corner", PlotKind::Point, vec![corner]));
            items.push(item("r_tick", PlotKind::Point, vec![r_point]));
            Some(r)
        }
    };
    Ok(PlotData {
        figure,
        d,
        alpha: a,
        r: r_used,
        items,
    })
}
