//! Pareto order predicates, the nondominated archive with index backtracking,
//! and Hausdorff set distances.
//!
//! Comparisons are exact floating point: epsilon-dominance would silently
//! change the discarding behavior of the solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SubregionId;

/// A point in objective space, optionally carrying its preimage and the
/// subregion it was produced from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub values: Vec<f64>,
    pub origin_box: Option<SubregionId>,
    pub preimage: Option<Vec<f64>>,
}

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        ObjectiveVector {
            values,
            origin_box: None,
            preimage: None,
        }
    }

    pub fn with_origin(values: Vec<f64>, origin: SubregionId, preimage: Vec<f64>) -> Self {
        ObjectiveVector {
            values,
            origin_box: Some(origin),
            preimage: Some(preimage),
        }
    }
}

/// `a` weakly dominates `b`: `a_i <= b_i` for all `i`.
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `a` dominates `b`: weak dominance with `a != b`.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    weakly_dominates(a, b) && a != b
}

/// `a` strictly dominates `b`: `a_i < b_i` for all `i`.
pub fn strictly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x < y)
}

/// Mutually exclusive classification of a pair of objective vectors; the
/// strongest applicable relation wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomRelation {
    Equal,
    StrictlyDominates,
    Dominates,
    StrictlyDominatedBy,
    DominatedBy,
    Indifferent,
}

pub fn compare(a: &[f64], b: &[f64]) -> Result<DomRelation> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(if a == b {
        DomRelation::Equal
    } else if strictly_dominates(a, b) {
        DomRelation::StrictlyDominates
    } else if weakly_dominates(a, b) {
        DomRelation::Dominates
    } else if strictly_dominates(b, a) {
        DomRelation::StrictlyDominatedBy
    } else if weakly_dominates(b, a) {
        DomRelation::DominatedBy
    } else {
        DomRelation::Indifferent
    })
}

/// Outcome of an archive insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The point entered the archive; `removed` entries it dominated left.
    Inserted { removed: usize },
    /// Some entry already weakly dominates the point (or equals it).
    Rejected,
}

/// The provisional nondominated upper bound set: pairwise nondominated, no
/// duplicate value vectors, first-inserted representative kept on ties.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NondominatedArchive {
    entries: Vec<ObjectiveVector>,
}

impl NondominatedArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ObjectiveVector] {
        &self.entries
    }

    pub fn values(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|e| e.values.clone()).collect()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Inserts `u` unless an existing entry weakly dominates it; dominated
    /// entries are removed.
    pub fn insert(&mut self, u: ObjectiveVector) -> InsertOutcome {
        for e in &self.entries {
            if weakly_dominates(&e.values, &u.values) {
                return InsertOutcome::Rejected;
            }
        }
        let before = self.entries.len();
        self.entries.retain(|e| !dominates(&u.values, &e.values));
        let removed = before - self.entries.len();
        self.entries.push(u);
        InsertOutcome::Inserted { removed }
    }
}

/// Maximal antichain of the input under dominance: duplicates collapsed to
/// the first occurrence, stable with respect to input order.
pub fn nondominated_filter<I>(points: I) -> NondominatedArchive
where
    I: IntoIterator<Item = ObjectiveVector>,
{
    let mut archive = NondominatedArchive::new();
    for p in points {
        archive.insert(p);
    }
    archive
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Directed Hausdorff distance `max_a min_c d(a, c)`.
pub fn directed_hausdorff<A, C>(a: &[A], c: &[C]) -> Result<f64>
where
    A: AsRef<[f64]>,
    C: AsRef<[f64]>,
{
    if a.is_empty() || c.is_empty() {
        return Err(Error::EmptySet("hausdorff distance"));
    }
    let mut worst: f64 = 0.0;
    for p in a {
        let mut best = f64::INFINITY;
        for q in c {
            best = best.min(euclidean(p.as_ref(), q.as_ref()));
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

/// Symmetric Hausdorff distance between two nonempty finite sets.
pub fn hausdorff<A, C>(a: &[A], c: &[C]) -> Result<f64>
where
    A: AsRef<[f64]>,
    C: AsRef<[f64]>,
{
    Ok(directed_hausdorff(a, c)?.max(directed_hausdorff(c, a)?))
}
