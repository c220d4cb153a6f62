//! The two solver loops: the basic branch-and-bound baseline (midpoint upper
//! bounds) and the hybrid loop that bounds with mini MOEAs, improves lower
//! bounds, and restricts solver calls to elite subregions.
//!
//! Each iteration is a barrier-synchronized fan-out over subregions (bound,
//! mini MOEA, improve) followed by a sequential merge phase that owns the
//! archive and the flags. Per-box seeds make results identical for any
//! worker count.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounding::{
    improve_lower_bound, verify_partial_lower_bound, BoundingContext, LowerBoundSet, VerifyBudget,
};
use crate::dominance::{dominates, hausdorff, NondominatedArchive, ObjectiveVector};
use crate::error::{Error, Result};
use crate::expr::{feasibility_test, Feasibility};
use crate::geometry::{IdSource, Subregion, SubregionId};
use crate::minimoea::{run_mini_moea, MiniMoeaConfig, MiniMoeaResult};
use crate::problems::ProblemDefinition;
use crate::seed::{mix_seed, SeedRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    BasicBb,
    Pbb,
}

/// Solver loop configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Termination accuracy for the archive/lower-bound Hausdorff gap,
    /// in (0, 0.02].
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Every positive multiple of this iteration count triggers the repair
    /// operation (all flags reset to 1, full bounding).
    pub repair_period: usize,
    /// Safety cap on the number of live subregions.
    pub max_boxes: usize,
    pub threads: usize,
    pub seed: u64,
    /// Reset the archive at the start of every iteration. `None` resolves to
    /// true for box-constrained problems and false for constrained ones.
    pub reset_archive_each_iteration: Option<bool>,
    /// Record every subregion ever created plus per-iteration archive
    /// snapshots (for soundness audits; memory-heavy).
    pub record_audit: bool,
}

impl SolverConfig {
    /// Defaults for dimension `n`: accuracy 0.02, `6n` iterations, repair
    /// period `3n` (clamped to the iteration budget).
    pub fn defaults(algorithm: Algorithm, n: usize) -> Self {
        let max_iterations = 6 * n.max(1);
        SolverConfig {
            algorithm,
            epsilon: 0.02,
            max_iterations,
            repair_period: (3 * n.max(1)).min(max_iterations),
            max_boxes: 200_000,
            threads: std::thread::available_parallelism()
                .map(|v| v.get())
                .unwrap_or(1),
            seed: 0,
            reset_archive_each_iteration: None,
            record_audit: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.02) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 0.02], got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be >= 1".into()));
        }
        if self.repair_period == 0 || self.repair_period > self.max_iterations {
            return Err(Error::InvalidConfig(format!(
                "repair_period must lie in 1..=max_iterations, got {}",
                self.repair_period
            )));
        }
        if self.max_boxes < 2 {
            return Err(Error::InvalidConfig("max_boxes must be >= 2".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidConfig("threads must be >= 1".into()));
        }
        Ok(())
    }

    fn reset_archive(&self, problem: &ProblemDefinition) -> bool {
        self.reset_archive_each_iteration
            .unwrap_or(!problem.is_constrained())
    }
}

/// Per-iteration record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub k: usize,
    /// Number of live subregions after the discarding test.
    pub bnv: usize,
    pub archive_size: usize,
    /// Hausdorff gap between the archive and the lower bound set;
    /// infinite while either side is empty.
    pub gap: f64,
    pub wall_ms: u64,
}

/// Snapshot of the solver state after the final iteration.
#[derive(Debug, Clone)]
pub struct IterationState {
    pub k: usize,
    pub boxes: Vec<Subregion>,
    pub lower_bounds: BTreeMap<SubregionId, LowerBoundSet>,
    pub archive: NondominatedArchive,
    /// The iteration's raw upper bound set (before nondominated filtering).
    pub upper_bounds_all: Vec<ObjectiveVector>,
    /// Ideal points of the per-box upper bound sets used for improvement.
    pub ideal_points: BTreeMap<SubregionId, ObjectiveVector>,
    pub stats: IterationStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    GapReached,
    MaxIterations,
    BoxBudget,
    Exhausted,
}

/// What happened to an audited subregion in the iteration that created it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxFate {
    Kept,
    Discarded,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct AuditRecord {
    pub region: Subregion,
    pub iteration: usize,
    /// Final (possibly improved) lower bound set; absent for subregions
    /// dropped by the feasibility test.
    pub bounds: Option<LowerBoundSet>,
    pub fate: BoxFate,
}

#[derive(Debug, Default)]
pub struct RunAudit {
    pub boxes: Vec<AuditRecord>,
    /// Archive values at the end of iteration `k` (index `k - 1`).
    pub archives: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug)]
pub struct RunResult {
    pub state: IterationState,
    pub history: Vec<IterationStats>,
    pub termination: Termination,
    pub audit: Option<RunAudit>,
}

/// Hausdorff distance between the archive and the flattened lower bound set;
/// infinite while either side is empty, so it never triggers termination.
pub fn termination_gap(
    archive: &NondominatedArchive,
    lower_bounds: &BTreeMap<SubregionId, LowerBoundSet>,
) -> f64 {
    let lows: Vec<&[f64]> = lower_bounds
        .values()
        .flat_map(|lb| lb.points.iter().map(|p| p.as_slice()))
        .collect();
    if archive.is_empty() || lows.is_empty() {
        return f64::INFINITY;
    }
    let ups = archive.values();
    hausdorff(&ups, &lows).expect("both sides nonempty")
}

/// Removes every subregion whose lower bound set is entirely dominated by the
/// archive; returns the discarded ids.
pub fn discarding_test(
    lower_bounds: &mut BTreeMap<SubregionId, LowerBoundSet>,
    archive: &NondominatedArchive,
    boxes: &mut Vec<Subregion>,
) -> Vec<SubregionId> {
    let mut discarded = Vec::new();
    boxes.retain(|b| {
        let Some(lb) = lower_bounds.get(&b.id) else {
            return true;
        };
        let all_dominated = lb.points.iter().all(|l| {
            archive
                .entries()
                .iter()
                .any(|u| dominates(&u.values, l))
        });
        if all_dominated {
            discarded.push(b.id);
            false
        } else {
            true
        }
    });
    for id in &discarded {
        lower_bounds.remove(id);
    }
    discarded
}

/// The elite selection of one iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliteSelection {
    /// Flagged subregions: targets of upper-bounding mini MOEA runs.
    pub upper_elites: Vec<SubregionId>,
    /// Subregions whose singleton lower bounds form the componentwise-maximal
    /// antichain (the bounds closest to the archive); targets of improvement.
    pub lower_frontier: Vec<SubregionId>,
}

/// Selects the elite subregions: flagged boxes for upper bounding, and the
/// boxes whose lower bounds are not weakly dominated from above by any other
/// bound for lower-bound improvement.
pub fn select_elites(
    boxes: &[Subregion],
    lower_bounds: &BTreeMap<SubregionId, LowerBoundSet>,
) -> EliteSelection {
    let upper_elites = boxes.iter().filter(|b| b.flag).map(|b| b.id).collect();
    let bounds: Vec<(SubregionId, &[f64])> = boxes
        .iter()
        .filter_map(|b| {
            lower_bounds
                .get(&b.id)
                .map(|lb| (b.id, lb.points[0].as_slice()))
        })
        .collect();
    let lower_frontier = bounds
        .iter()
        .filter(|(_, l)| {
            !bounds.iter().any(|(_, other)| {
                *other != *l && other.iter().zip(l.iter()).all(|(o, v)| o >= v)
            })
        })
        .map(|(id, _)| *id)
        .collect();
    EliteSelection {
        upper_elites,
        lower_frontier,
    }
}

/// Sets each subregion's flag to whether some archive entry originated from
/// it; flagged boxes whose upper bounds were all displaced lose the flag.
pub fn update_flags(boxes: &mut [Subregion], archive: &NondominatedArchive) {
    let origins: BTreeSet<SubregionId> = archive
        .entries()
        .iter()
        .filter_map(|e| e.origin_box)
        .collect();
    for b in boxes.iter_mut() {
        b.flag = origins.contains(&b.id);
    }
}

/// Runs the basic branch-and-bound loop (midpoint upper bounds).
pub fn run_basic_bb(problem: &ProblemDefinition, config: &SolverConfig) -> Result<RunResult> {
    Engine::new(problem, config, None)?.run()
}

/// Runs the hybrid loop with the given mini-MOEA configuration.
pub fn run_pbb(
    problem: &ProblemDefinition,
    config: &SolverConfig,
    mini: &MiniMoeaConfig,
) -> Result<RunResult> {
    let mut mini = mini.clone();
    // resolve the weight vectors once: they are global for the whole run
    mini.weight_vectors = Some(mini.resolved_weights(problem.m)?);
    Engine::new(problem, config, Some(mini))?.run()
}

struct Engine<'a> {
    problem: &'a ProblemDefinition,
    config: &'a SolverConfig,
    mini: Option<MiniMoeaConfig>,
    bounding: BoundingContext,
    pool: rayon::ThreadPool,
    ids: IdSource,
    reset_archive: bool,
}

impl<'a> Engine<'a> {
    fn new(
        problem: &'a ProblemDefinition,
        config: &'a SolverConfig,
        mini: Option<MiniMoeaConfig>,
    ) -> Result<Self> {
        config.validate()?;
        problem.check_consistent()?;
        if let Some(m) = &mini {
            m.validate(problem.m)?;
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        Ok(Engine {
            problem,
            config,
            mini,
            bounding: BoundingContext::new(problem),
            pool,
            ids: IdSource::new(),
            reset_archive: config.reset_archive(problem),
        })
    }

    fn run(&mut self) -> Result<RunResult> {
        let root = Subregion::new(
            self.ids.next_id(),
            self.problem.domain.lo.clone(),
            self.problem.domain.hi.clone(),
            true,
        )?;
        let mut audit = self.config.record_audit.then(RunAudit::default);

        if root.widths().winf == 0.0 {
            return self.degenerate_run(root, audit);
        }

        let mut boxes = vec![root];
        let mut archive = NondominatedArchive::new();
        let mut history: Vec<IterationStats> = Vec::new();
        let mut state: Option<IterationState> = None;
        let mut k = 0usize;

        let termination = loop {
            if k >= self.config.max_iterations {
                break Termination::MaxIterations;
            }
            if boxes.is_empty() {
                break Termination::Exhausted;
            }
            if boxes.len() * 2 > self.config.max_boxes {
                break Termination::BoxBudget;
            }
            k += 1;
            let started = Instant::now();

            let next = match self.mini {
                Some(_) => self.pbb_iteration(k, boxes, &mut archive, audit.as_mut())?,
                None => self.basic_iteration(k, boxes, &mut archive, audit.as_mut())?,
            };
            boxes = next.boxes.clone();

            let gap = termination_gap(&archive, &next.lower_bounds);
            let stats = IterationStats {
                k,
                bnv: boxes.len(),
                archive_size: archive.len(),
                gap,
                wall_ms: started.elapsed().as_millis() as u64,
            };
            history.push(stats);
            if let Some(a) = audit.as_mut() {
                a.archives.push(archive.values());
            }
            state = Some(IterationState {
                k,
                boxes: next.boxes,
                lower_bounds: next.lower_bounds,
                archive: archive.clone(),
                upper_bounds_all: next.upper_bounds_all,
                ideal_points: next.ideal_points,
                stats,
            });
            if gap <= self.config.epsilon {
                break Termination::GapReached;
            }
        };

        let state = state.expect("at least one iteration ran");
        Ok(RunResult {
            state,
            history,
            termination,
            audit,
        })
    }

    /// Width-zero domain: the single point's image is the whole answer.
    fn degenerate_run(
        &mut self,
        root: Subregion,
        mut audit: Option<RunAudit>,
    ) -> Result<RunResult> {
        let started = Instant::now();
        let mut archive = NondominatedArchive::new();
        let lb = self.bounding.lower_bound(self.problem, &root)?;
        let point = root.midpoint();
        if self.problem.is_feasible(&point, 0.0)? {
            let f = self.problem.evaluate(&point)?;
            archive.insert(ObjectiveVector::with_origin(f, root.id, point));
        }
        let mut lower_bounds = BTreeMap::new();
        lower_bounds.insert(root.id, lb.clone());
        let gap = termination_gap(&archive, &lower_bounds);
        let stats = IterationStats {
            k: 1,
            bnv: 1,
            archive_size: archive.len(),
            gap,
            wall_ms: started.elapsed().as_millis() as u64,
        };
        if let Some(a) = audit.as_mut() {
            a.boxes.push(AuditRecord {
                region: root.clone(),
                iteration: 1,
                bounds: Some(lb),
                fate: BoxFate::Kept,
            });
            a.archives.push(archive.values());
        }
        let termination = if gap <= self.config.epsilon {
            Termination::GapReached
        } else {
            Termination::MaxIterations
        };
        Ok(RunResult {
            state: IterationState {
                k: 1,
                boxes: vec![root],
                lower_bounds,
                archive,
                upper_bounds_all: Vec::new(),
                ideal_points: BTreeMap::new(),
                stats,
            },
            history: vec![stats],
            termination,
            audit,
        })
    }

    /// Bisects every subregion along one shared coordinate, after asserting
    /// that the level is width-synchronized.
    fn bisect_all(&mut self, boxes: &[Subregion]) -> Result<Vec<Subregion>> {
        let reference = boxes[0].width_vector();
        for b in &boxes[1..] {
            for (w, r) in b.width_vector().iter().zip(&reference) {
                assert!(
                    (w - r).abs() <= 1e-9 * r.abs().max(1.0),
                    "subregion widths out of sync: {w} vs {r}"
                );
            }
        }
        let coord = boxes[0].split_coordinate();
        let mut children = Vec::with_capacity(boxes.len() * 2);
        for b in boxes {
            let (a, c) = b.bisect_along(coord, &mut self.ids)?;
            children.push(a);
            children.push(c);
        }
        Ok(children)
    }

    /// Drops provably infeasible children; records them in the audit.
    fn feasibility_filter(
        &self,
        children: Vec<Subregion>,
        iteration: usize,
        audit: Option<&mut RunAudit>,
    ) -> Result<Vec<Subregion>> {
        if !self.problem.is_constrained() {
            return Ok(children);
        }
        let constraints = &self.problem.constraints;
        let verdicts: Vec<Feasibility> = self.pool.install(|| {
            children
                .par_iter()
                .map(|c| feasibility_test(constraints, c))
                .collect::<Result<Vec<_>>>()
        })?;
        let mut kept = Vec::with_capacity(children.len());
        let mut dropped = Vec::new();
        for (child, verdict) in children.into_iter().zip(verdicts) {
            if verdict == Feasibility::Infeasible {
                dropped.push(child);
            } else {
                kept.push(child);
            }
        }
        if let Some(a) = audit {
            for region in dropped {
                a.boxes.push(AuditRecord {
                    region,
                    iteration,
                    bounds: None,
                    fate: BoxFate::Infeasible,
                });
            }
        }
        Ok(kept)
    }

    fn lower_bounds_for(
        &self,
        children: &[Subregion],
    ) -> Result<BTreeMap<SubregionId, LowerBoundSet>> {
        let problem = self.problem;
        let bounding = &self.bounding;
        let bounds: Vec<LowerBoundSet> = self.pool.install(|| {
            children
                .par_iter()
                .map(|c| bounding.lower_bound(problem, c))
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(bounds.into_iter().map(|lb| (lb.box_id, lb)).collect())
    }

    fn basic_iteration(
        &mut self,
        k: usize,
        boxes: Vec<Subregion>,
        archive: &mut NondominatedArchive,
        mut audit: Option<&mut RunAudit>,
    ) -> Result<IterationOutcome> {
        let children = self.bisect_all(&boxes)?;
        let children = self.feasibility_filter(children, k, audit.as_deref_mut())?;
        let mut lower_bounds = self.lower_bounds_for(&children)?;

        // midpoint images; only feasible midpoints become upper bounds
        let problem = self.problem;
        let uppers: Vec<Option<ObjectiveVector>> = self.pool.install(|| {
            children
                .par_iter()
                .map(|c| {
                    let x = c.midpoint();
                    if problem.is_feasible(&x, 0.0)? {
                        Ok(Some(ObjectiveVector::with_origin(
                            problem.evaluate(&x)?,
                            c.id,
                            x,
                        )))
                    } else {
                        Ok(None)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })?;

        // sequential merge in id order: test against the archive built so
        // far, then store the survivor's own upper bound
        let mut kept = Vec::with_capacity(children.len());
        let mut upper_bounds_all = Vec::new();
        for (child, upper) in children.into_iter().zip(uppers) {
            let lb = &lower_bounds[&child.id];
            let discarded = lb.points.iter().all(|l| {
                archive
                    .entries()
                    .iter()
                    .any(|u| dominates(&u.values, l))
            });
            if let Some(a) = audit.as_deref_mut() {
                a.boxes.push(AuditRecord {
                    region: child.clone(),
                    iteration: k,
                    bounds: Some(lb.clone()),
                    fate: if discarded {
                        BoxFate::Discarded
                    } else {
                        BoxFate::Kept
                    },
                });
            }
            if discarded {
                lower_bounds.remove(&child.id);
                continue;
            }
            if let Some(u) = upper {
                upper_bounds_all.push(u.clone());
                archive.insert(u);
            }
            kept.push(child);
        }

        Ok(IterationOutcome {
            boxes: kept,
            lower_bounds,
            upper_bounds_all,
            ideal_points: BTreeMap::new(),
        })
    }

    fn pbb_iteration(
        &mut self,
        k: usize,
        boxes: Vec<Subregion>,
        archive: &mut NondominatedArchive,
        mut audit: Option<&mut RunAudit>,
    ) -> Result<IterationOutcome> {
        let mini = self.mini.clone().expect("pbb has a mini-MOEA config");
        if self.reset_archive {
            archive.clear();
        }
        let children = self.bisect_all(&boxes)?;
        let mut children = self.feasibility_filter(children, k, audit.as_deref_mut())?;
        let mut lower_bounds = self.lower_bounds_for(&children)?;

        // elite selection; the repair operation promotes everything
        let repair = k.is_multiple_of(self.config.repair_period);
        let any_flagged = children.iter().any(|c| c.flag);
        let (upper_ids, improve_ids) = if repair || !any_flagged {
            for c in children.iter_mut() {
                c.flag = true;
            }
            let all: Vec<SubregionId> = children.iter().map(|c| c.id).collect();
            (all.clone(), all)
        } else {
            let selection = select_elites(&children, &lower_bounds);
            (selection.upper_elites, selection.lower_frontier)
        };

        // one mini-MOEA run per subregion in either elite set
        let run_ids: BTreeSet<SubregionId> = upper_ids
            .iter()
            .chain(improve_ids.iter())
            .copied()
            .collect();
        let by_id: BTreeMap<SubregionId, &Subregion> =
            children.iter().map(|c| (c.id, c)).collect();
        let problem = self.problem;
        let run_seed = self.config.seed;
        let run_list: Vec<&Subregion> = run_ids.iter().map(|id| by_id[id]).collect();
        let results: Vec<MiniMoeaResult> = self.pool.install(|| {
            run_list
                .par_iter()
                .map(|region| {
                    let seed = mix_seed(run_seed, region.id.0, k as u64, SeedRole::MiniMoea);
                    run_mini_moea(problem, region, &mini, seed)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let results: BTreeMap<SubregionId, MiniMoeaResult> = run_ids
            .iter()
            .copied()
            .zip(results)
            .collect();

        // U_k: upper bounds harvested from the upper-elite runs, in id order
        let mut upper_bounds_all = Vec::new();
        let mut sorted_upper_ids = upper_ids.clone();
        sorted_upper_ids.sort_unstable();
        for id in &sorted_upper_ids {
            upper_bounds_all.extend(results[id].upper_bounds.iter().cloned());
        }

        // Z*_k: ideal points of the improvement candidates
        let mut ideal_points: BTreeMap<SubregionId, ObjectiveVector> = BTreeMap::new();
        for id in &improve_ids {
            if let Some(ideal) = &results[id].ideal {
                let mut tagged = ideal.clone();
                tagged.origin_box = Some(*id);
                ideal_points.insert(*id, tagged);
            }
        }

        // improve the selected lower bounds via the verification program
        let improvement_jobs: Vec<(SubregionId, &Subregion, &ObjectiveVector, LowerBoundSet)> =
            ideal_points
                .iter()
                .map(|(id, z)| (*id, by_id[id], z, lower_bounds[id].clone()))
                .collect();
        let budget = VerifyBudget::default();
        let improved: Vec<(SubregionId, LowerBoundSet)> = self.pool.install(|| {
            improvement_jobs
                .par_iter()
                .map(|(id, region, z_hat, lb)| {
                    let seed = mix_seed(run_seed, id.0, k as u64, SeedRole::VerifyBound);
                    let verdict =
                        verify_partial_lower_bound(problem, region, &z_hat.values, &budget, seed)?;
                    Ok((*id, improve_lower_bound(lb, &z_hat.values, &verdict)))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for (id, lb) in improved {
            lower_bounds.insert(id, lb);
        }

        // merge the iteration's upper bounds into the archive
        for u in &upper_bounds_all {
            archive.insert(u.clone());
        }

        update_flags(&mut children, archive);
        let snapshot: Option<(Vec<Subregion>, BTreeMap<SubregionId, LowerBoundSet>)> = audit
            .as_deref_mut()
            .map(|_| (children.clone(), lower_bounds.clone()));
        let discarded = discarding_test(&mut lower_bounds, archive, &mut children);
        if let Some(a) = audit {
            let (regions, bounds_before) = snapshot.expect("snapshot taken in audit mode");
            let discarded: BTreeSet<SubregionId> = discarded.iter().copied().collect();
            for region in regions {
                let fate = if discarded.contains(&region.id) {
                    BoxFate::Discarded
                } else {
                    BoxFate::Kept
                };
                a.boxes.push(AuditRecord {
                    bounds: bounds_before.get(&region.id).cloned(),
                    region,
                    iteration: k,
                    fate,
                });
            }
        }

        Ok(IterationOutcome {
            boxes: children,
            lower_bounds,
            upper_bounds_all,
            ideal_points,
        })
    }
}

struct IterationOutcome {
    boxes: Vec<Subregion>,
    lower_bounds: BTreeMap<SubregionId, LowerBoundSet>,
    upper_bounds_all: Vec<ObjectiveVector>,
    ideal_points: BTreeMap<SubregionId, ObjectiveVector>,
}
