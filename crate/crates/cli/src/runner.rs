//! Runs one algorithm spec to completion and normalizes the outputs.

use std::time::Instant;

use paretobb::engine::{
    run_basic_bb, run_pbb, Algorithm, IterationStats, SolverConfig, Termination,
};
use paretobb::geometry::{Subregion, SubregionId};
use paretobb::minimoea::{run_mini_moea, MiniMoeaConfig};
use paretobb::problems::ProblemDefinition;

use crate::artifacts::RunArtifacts;
use crate::manifest::{AlgoSpec, RunManifest};

pub fn solver_config(manifest: &RunManifest, algorithm: Algorithm) -> SolverConfig {
    SolverConfig {
        algorithm,
        epsilon: manifest.epsilon,
        max_iterations: manifest.max_iterations,
        repair_period: manifest.repair_period,
        max_boxes: manifest.max_boxes,
        threads: manifest.threads,
        seed: manifest.seed,
        reset_archive_each_iteration: None,
        record_audit: false,
    }
}

pub fn mini_config(manifest: &RunManifest, full: bool) -> MiniMoeaConfig {
    let variant = manifest
        .algo
        .variant()
        .expect("mini config only for evolutionary specs");
    let mut config = if full {
        MiniMoeaConfig::full(variant)
    } else {
        MiniMoeaConfig::mini(variant)
    };
    config.population = manifest.population;
    config.generations = manifest.generations;
    config.penalty_rho = manifest.rho;
    config
}

fn feasible_count(
    problem: &ProblemDefinition,
    archive: &[paretobb::dominance::ObjectiveVector],
) -> paretobb::Result<usize> {
    let mut count = 0;
    for e in archive {
        match &e.preimage {
            Some(x) if problem.is_feasible(x, 1e-9)? => count += 1,
            _ => {}
        }
    }
    Ok(count)
}

pub fn execute(manifest: &RunManifest, problem: &ProblemDefinition) -> anyhow::Result<RunArtifacts> {
    let started = Instant::now();
    let artifacts = match manifest.algo {
        AlgoSpec::BasicBb | AlgoSpec::PbbNsga2 | AlgoSpec::PbbMoead => {
            let result = if manifest.algo == AlgoSpec::BasicBb {
                let config = solver_config(manifest, Algorithm::BasicBb);
                run_basic_bb(problem, &config)?
            } else {
                let config = solver_config(manifest, Algorithm::Pbb);
                let mini = mini_config(manifest, false);
                run_pbb(problem, &config, &mini)?
            };
            let archive = result.state.archive.entries().to_vec();
            let feasible = feasible_count(problem, &archive)?;
            RunArtifacts {
                history: result.history,
                archive,
                boxes: result.state.boxes,
                lower_bounds: result.state.lower_bounds.into_values().collect(),
                termination: result.termination,
                feasible_count: feasible,
                total_wall_ms: started.elapsed().as_millis() as u64,
            }
        }
        AlgoSpec::Nsga2Full | AlgoSpec::MoeadFull => {
            // standalone evolutionary baseline on the whole domain
            let region = Subregion::new(
                SubregionId(0),
                problem.domain.lo.clone(),
                problem.domain.hi.clone(),
                true,
            )?;
            let mini = mini_config(manifest, true);
            let result = run_mini_moea(problem, &region, &mini, manifest.seed)?;
            let feasible = feasible_count(problem, &result.upper_bounds)?;
            let history = vec![IterationStats {
                k: 1,
                bnv: 1,
                archive_size: result.upper_bounds.len(),
                gap: f64::INFINITY,
                wall_ms: started.elapsed().as_millis() as u64,
            }];
            RunArtifacts {
                history,
                archive: result.upper_bounds,
                boxes: vec![region],
                lower_bounds: Vec::new(),
                termination: Termination::MaxIterations,
                feasible_count: feasible,
                total_wall_ms: started.elapsed().as_millis() as u64,
            }
        }
    };
    Ok(artifacts)
}
