//! Subregions (axis-aligned boxes), widths, midpoints and bisection.
//!
//! A [`Subregion`] is the node of the branch-and-bound tree: the box bounds
//! plus the identity and elite flag that the bookkeeping of the solver relies
//! on. All operations are pure; id generation is the only shared state and is
//! owned by the engine through [`IdSource`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalVector};

/// Identity of a subregion, unique within one solver run.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct SubregionId(pub u64);

impl std::fmt::Display for SubregionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Monotone id counter. Children receive fresh ids from here; the engine owns
/// one source per run and hands out ids during the sequential bisection phase.
#[derive(Debug, Default)]
pub struct IdSource(u64);

impl IdSource {
    pub fn new() -> Self {
        IdSource(0)
    }

    pub fn next_id(&mut self) -> SubregionId {
        let id = SubregionId(self.0);
        self.0 += 1;
        id
    }
}

/// An axis-aligned subregion of the variable domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subregion {
    pub id: SubregionId,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Elite marker; children inherit it on bisection.
    pub flag: bool,
}

/// Widths of a subregion with respect to the three norms used by the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthSummary {
    /// l1 width: sum of side lengths.
    pub w1: f64,
    /// l-infinity width: longest side.
    pub winf: f64,
    /// Euclidean width.
    pub w2: f64,
}

impl Subregion {
    /// Builds a subregion, validating `lo[i] <= hi[i]` and finiteness.
    pub fn new(id: SubregionId, lo: Vec<f64>, hi: Vec<f64>, flag: bool) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        for (l, h) in lo.iter().zip(&hi) {
            if !l.is_finite() || !h.is_finite() {
                return Err(Error::NonFinite("subregion bounds"));
            }
            if l > h {
                return Err(Error::Domain(format!("subregion with lo {l} > hi {h}")));
            }
        }
        Ok(Subregion { id, lo, hi, flag })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Midpoint `c(B) = (lo + hi) / 2`.
    pub fn midpoint(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| 0.5 * (l + h))
            .collect()
    }

    /// Componentwise width vector `hi - lo`.
    pub fn width_vector(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).collect()
    }

    /// Widths with respect to the l1, l-infinity and Euclidean norms.
    pub fn widths(&self) -> WidthSummary {
        let mut w1 = 0.0;
        let mut winf: f64 = 0.0;
        let mut sq = 0.0;
        for w in self.width_vector() {
            w1 += w;
            winf = winf.max(w);
            sq += w * w;
        }
        WidthSummary {
            w1,
            winf,
            w2: sq.sqrt(),
        }
    }

    pub fn volume(&self) -> f64 {
        self.width_vector().iter().product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| *v >= *l && *v <= *h)
    }

    /// The coordinate a bisection will split: lowest index of maximal width.
    pub fn split_coordinate(&self) -> usize {
        let w = self.width_vector();
        let mut best = 0;
        for (i, wi) in w.iter().enumerate().skip(1) {
            if *wi > w[best] {
                best = i;
            }
        }
        best
    }

    /// Bisects at the midpoint of the lowest-index widest coordinate. Both
    /// children carry the parent's flag and fresh ids.
    pub fn bisect(&self, ids: &mut IdSource) -> Result<(Subregion, Subregion)> {
        if self.widths().winf <= 0.0 {
            return Err(Error::DegenerateBox);
        }
        self.bisect_along(self.split_coordinate(), ids)
    }

    /// Bisects along an explicit coordinate. The engine uses this so that all
    /// subregions of one iteration split along the same coordinate even when
    /// their widths differ in the last ulp.
    pub fn bisect_along(&self, coord: usize, ids: &mut IdSource) -> Result<(Subregion, Subregion)> {
        if coord >= self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coord,
            });
        }
        if self.hi[coord] - self.lo[coord] <= 0.0 {
            return Err(Error::DegenerateBox);
        }
        let mid = 0.5 * (self.lo[coord] + self.hi[coord]);
        let mut left = self.clone();
        left.id = ids.next_id();
        left.hi[coord] = mid;
        let mut right = self.clone();
        right.id = ids.next_id();
        right.lo[coord] = mid;
        Ok((left, right))
    }

    /// Natural interval enclosure of the subregion, one interval per variable.
    pub fn to_intervals(&self) -> IntervalVector {
        IntervalVector::new(
            self.lo
                .iter()
                .zip(&self.hi)
                .map(|(l, h)| Interval::new(*l, *h))
                .collect(),
        )
    }

    /// Uniform sample inside the subregion.
    pub fn sample_uniform<R: rand::Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| {
                if h > l {
                    l + rng.gen::<f64>() * (h - l)
                } else {
                    *l
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn boxed(lo: &[f64], hi: &[f64]) -> Subregion {
        Subregion::new(SubregionId(0), lo.to_vec(), hi.to_vec(), false).unwrap()
    }

    #[test]
    fn midpoint_examples() {
        assert_eq!(boxed(&[0.0, 0.0], &[2.0, 1.0]).midpoint(), vec![1.0, 0.5]);
        assert_eq!(boxed(&[3.5, 3.5], &[3.5, 3.5]).midpoint(), vec![3.5, 3.5]);
        assert_eq!(
            boxed(&[-2.0, -2.0, -2.0], &[2.0, 2.0, 2.0]).midpoint(),
            vec![0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn width_examples() {
        let w = boxed(&[0.0, 0.0], &[1.0, 1.0]).widths();
        assert_eq!((w.w1, w.winf), (2.0, 1.0));
        assert_relative_eq!(w.w2, 2f64.sqrt());

        let w = boxed(&[0.0], &[2.0]).widths();
        assert_eq!((w.w1, w.winf, w.w2), (2.0, 2.0, 2.0));

        let w = boxed(&[0.0, 0.0], &[1.0, 3.0]).widths();
        assert_eq!((w.w1, w.winf), (4.0, 3.0));
        assert_relative_eq!(w.w2, 10f64.sqrt());
        assert!(w.winf <= w.w2 && w.w2 <= w.w1);
    }

    #[test]
    fn bisect_splits_widest_coordinate() {
        let mut ids = IdSource::new();
        ids.next_id();
        let (a, b) = boxed(&[0.0, 0.0], &[2.0, 1.0]).bisect(&mut ids).unwrap();
        assert_eq!((a.lo.clone(), a.hi.clone()), (vec![0.0, 0.0], vec![1.0, 1.0]));
        assert_eq!((b.lo.clone(), b.hi.clone()), (vec![1.0, 0.0], vec![2.0, 1.0]));
        assert_ne!(a.id, b.id);
    }

    #[test]
    fn bisect_tie_picks_lowest_index() {
        let mut ids = IdSource::new();
        let (a, _b) = boxed(&[0.0, 0.0], &[1.0, 1.0]).bisect(&mut ids).unwrap();
        assert_eq!(a.hi, vec![0.5, 1.0]);
    }

    #[test]
    fn children_inherit_flag() {
        let mut ids = IdSource::new();
        let mut parent = boxed(&[0.0, 0.0], &[1.0, 1.0]);
        parent.flag = true;
        let (a, b) = parent.bisect(&mut ids).unwrap();
        assert!(a.flag && b.flag);
    }

    #[test]
    fn bisect_rejects_degenerate() {
        let mut ids = IdSource::new();
        let err = boxed(&[1.0, 1.0], &[1.0, 1.0]).bisect(&mut ids).unwrap_err();
        assert!(matches!(err, Error::DegenerateBox));
    }

    #[test]
    fn bisection_preserves_volume() {
        let mut ids = IdSource::new();
        let parent = boxed(&[0.3, -1.7, 2.0], &[0.9, 2.1, 2.5]);
        let (a, b) = parent.bisect(&mut ids).unwrap();
        assert_relative_eq!(
            a.volume() + b.volume(),
            parent.volume(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn hypercube_bisection_cycles_coordinates() {
        let mut ids = IdSource::new();
        let mut region = boxed(&[0.0; 4], &[1.0; 4]);
        let mut split = Vec::new();
        for _ in 0..4 {
            let coord = region.split_coordinate();
            split.push(coord);
            let (a, _) = region.bisect(&mut ids).unwrap();
            region = a;
        }
        assert_eq!(split, vec![0, 1, 2, 3]);
    }
}
