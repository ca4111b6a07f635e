//! Rate pairs and the upper-right concave boundary of a union of rectangles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::TAU_NUM;

/// A rate pair `(R, R')` in bits per channel use: `R` is decodable without
/// the entanglement resource, `R'` is the extra rate when it is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub guaranteed: f64,
    pub excess: f64,
}

impl RatePoint {
    pub fn new(guaranteed: f64, excess: f64) -> Self {
        debug_assert!(guaranteed >= -TAU_NUM && excess >= -TAU_NUM, "negative rate ({guaranteed}, {excess})");
        Self { guaranteed, excess }
    }

    pub fn lerp(self, other: RatePoint, lam: f64) -> RatePoint {
        RatePoint {
            guaranteed: (1.0 - lam) * self.guaranteed + lam * other.guaranteed,
            excess: (1.0 - lam) * self.excess + lam * other.excess,
        }
    }

    /// Componentwise `self >= other - tol`.
    pub fn weakly_dominates(self, other: RatePoint, tol: f64) -> bool {
        self.guaranteed >= other.guaranteed - tol && self.excess >= other.excess - tol
    }
}

/// Vertices of the upper-right boundary ordered by increasing `R`
/// (and strictly decreasing `R'`).
///
/// Read as a region: flat at the first vertex's `R'` for smaller `R`,
/// piecewise linear between vertices, vertical drop at the last vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperHull {
    vertices: Vec<RatePoint>,
}

impl UpperHull {
    pub fn vertices(&self) -> &[RatePoint] {
        &self.vertices
    }

    pub fn max_guaranteed(&self) -> f64 {
        self.vertices.last().map_or(0.0, |v| v.guaranteed)
    }

    pub fn max_excess(&self) -> f64 {
        self.vertices.first().map_or(0.0, |v| v.excess)
    }

    /// Largest `R'` on the boundary at guaranteed rate `r`, `None` past the
    /// last vertex.
    pub fn value_at(&self, r: f64) -> Option<f64> {
        let first = self.vertices.first()?;
        let last = self.vertices.last()?;
        if r <= first.guaranteed {
            return Some(first.excess);
        }
        if r > last.guaranteed + TAU_NUM {
            return None;
        }
        if r >= last.guaranteed {
            return Some(last.excess);
        }
        let k = self.vertices.partition_point(|v| v.guaranteed < r);
        let (a, b) = (self.vertices[k - 1], self.vertices[k]);
        let t = (r - a.guaranteed) / (b.guaranteed - a.guaranteed);
        Some(a.excess + t * (b.excess - a.excess))
    }

    /// Whether `p` lies in the convex region bounded by the hull, within `tol`.
    pub fn dominates(&self, p: RatePoint, tol: f64) -> bool {
        if p.guaranteed > self.max_guaranteed() + tol {
            return false;
        }
        self.value_at(p.guaranteed.min(self.max_guaranteed()))
            .is_some_and(|v| v >= p.excess - tol)
    }
}

fn cross(o: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    (a.guaranteed - o.guaranteed) * (b.excess - o.excess) - (a.excess - o.excess) * (b.guaranteed - o.guaranteed)
}

/// Indices of the hull vertices, in hull order.
pub(crate) fn upper_hull_indices(points: &[RatePoint]) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    // lexicographic (R, then R') with ties by index
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a], points[b]);
        pb.guaranteed
            .total_cmp(&pa.guaranteed)
            .then(pb.excess.total_cmp(&pa.excess))
            .then(a.cmp(&b))
    });

    // staircase: scanning R downwards, keep points that raise R'
    let mut pareto: Vec<usize> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for &i in &order {
        if points[i].excess > best + TAU_NUM {
            pareto.push(i);
            best = points[i].excess;
        }
    }
    pareto.reverse();

    let mut hull: Vec<usize> = Vec::with_capacity(pareto.len());
    for &i in &pareto {
        while hull.len() >= 2 {
            let (a, b) = (points[hull[hull.len() - 2]], points[hull[hull.len() - 1]]);
            if cross(a, b, points[i]) >= -TAU_NUM * TAU_NUM {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    Ok(hull)
}

/// Upper-right concave boundary of the union of rectangles `[0,R] x [0,R']`.
pub fn convex_hull_upper(points: &[RatePoint]) -> Result<UpperHull> {
    let idx = upper_hull_indices(points)?;
    Ok(UpperHull {
        vertices: idx.into_iter().map(|i| points[i]).collect(),
    })
}

/// Where a frontier point came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    ClosedForm { alpha: f64 },
    TimeDivision { lambda: f64 },
    Grid { index: u64 },
    Restart { index: u64 },
    Given { index: u64 },
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::ClosedForm { alpha } => write!(f, "closed_form:alpha={alpha}"),
            Source::TimeDivision { lambda } => write!(f, "time_division:lambda={lambda}"),
            Source::Grid { index } => write!(f, "grid:{index}"),
            Source::Restart { index } => write!(f, "restart:{index}"),
            Source::Given { index } => write!(f, "given:{index}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub rate: RatePoint,
    pub source: Source,
}

/// A set of achievable rate pairs together with their upper-right hull.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFrontier {
    points: Vec<FrontierPoint>,
    hull_idx: Vec<usize>,
    hull: UpperHull,
}

impl RateFrontier {
    pub fn new(points: Vec<FrontierPoint>) -> Result<Self> {
        let rates: Vec<RatePoint> = points.iter().map(|p| p.rate).collect();
        let hull_idx = upper_hull_indices(&rates)?;
        let hull = UpperHull {
            vertices: hull_idx.iter().map(|&i| rates[i]).collect(),
        };
        Ok(Self { points, hull_idx, hull })
    }

    pub fn from_rates(rates: &[RatePoint]) -> Result<Self> {
        Self::new(
            rates
                .iter()
                .enumerate()
                .map(|(i, &rate)| FrontierPoint {
                    rate,
                    source: Source::Given { index: i as u64 },
                })
                .collect(),
        )
    }

    pub fn points(&self) -> &[FrontierPoint] {
        &self.points
    }

    pub fn hull(&self) -> &UpperHull {
        &self.hull
    }

    /// Indices into `points()` of the hull vertices, in hull order.
    pub fn hull_indices(&self) -> &[usize] {
        &self.hull_idx
    }

    pub fn hull_points(&self) -> impl Iterator<Item = &FrontierPoint> {
        self.hull_idx.iter().map(|&i| &self.points[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(r: f64, e: f64) -> RatePoint {
        RatePoint::new(r, e)
    }

    #[test]
    fn single_point() {
        let h = convex_hull_upper(&[rp(0.3, 0.4)]).unwrap();
        assert_eq!(h.vertices(), &[rp(0.3, 0.4)]);
        assert_eq!(h.value_at(0.1), Some(0.4));
        assert_eq!(h.value_at(0.5), None);
    }

    #[test]
    fn interior_point_is_dropped() {
        let pts = [rp(1.0, 0.0), rp(0.0, 1.0), rp(0.2, 0.2)];
        let h = convex_hull_upper(&pts).unwrap();
        assert_eq!(h.vertices(), &[rp(0.0, 1.0), rp(1.0, 0.0)]);
        assert!(h.dominates(rp(0.2, 0.2), 0.0));
        assert!(h.dominates(rp(0.5, 0.5), 1e-12));
        assert!(!h.dominates(rp(0.5, 0.6), 1e-9));
    }

    #[test]
    fn collinear_and_duplicate_points_collapse() {
        let pts = [rp(0.0, 1.0), rp(0.5, 0.5), rp(1.0, 0.0), rp(0.5, 0.5), rp(1.0, 0.0)];
        let h = convex_hull_upper(&pts).unwrap();
        assert_eq!(h.vertices(), &[rp(0.0, 1.0), rp(1.0, 0.0)]);
        let zeros = [rp(0.0, 0.0); 5];
        assert_eq!(convex_hull_upper(&zeros).unwrap().vertices().len(), 1);
    }

    #[test]
    fn dominated_staircase_points_are_removed() {
        let pts = [rp(0.1, 1.0), rp(0.05, 0.9), rp(0.8, 0.3), rp(0.7, 0.2)];
        let h = convex_hull_upper(&pts).unwrap();
        assert_eq!(h.vertices(), &[rp(0.1, 1.0), rp(0.8, 0.3)]);
        assert_eq!(h.value_at(0.0), Some(1.0));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(convex_hull_upper(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn frontier_tracks_sources() {
        let f = RateFrontier::from_rates(&[rp(0.2, 0.2), rp(1.0, 0.0), rp(0.0, 1.0)]).unwrap();
        assert_eq!(f.hull_indices(), &[2, 1]);
        let srcs: Vec<_> = f.hull_points().map(|p| p.source).collect();
        assert_eq!(srcs, vec![Source::Given { index: 2 }, Source::Given { index: 1 }]);
    }
}
