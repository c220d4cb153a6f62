//! Cross-module solver behavior: covering of known Pareto sets, gap
//! monotonicity under bound improvement, and the constrained fallbacks.

use paretobb::bounding::BoundingContext;
use paretobb::engine::{run_basic_bb, run_pbb, Algorithm, BoxFate, SolverConfig};
use paretobb::minimoea::{MiniMoeaConfig, MiniMoeaVariant};
use paretobb::problems::builtin;

fn pbb_defaults(n: usize, seed: u64, audit: bool) -> SolverConfig {
    let mut config = SolverConfig::defaults(Algorithm::Pbb, n);
    config.seed = seed;
    config.record_audit = audit;
    config
}

#[test]
fn covering_holds_on_known_pareto_sets() {
    for (name, n) in [("t51", None), ("zdt2", Some(2usize))] {
        let p = builtin(name, n).unwrap();
        let samples = p.known_front.as_ref().unwrap().pareto_set_samples(150);
        let config = pbb_defaults(p.n, 11, true);
        let out = run_pbb(&p, &config, &MiniMoeaConfig::mini(MiniMoeaVariant::MoeadDe)).unwrap();
        let audit = out.audit.unwrap();
        let mut previous_union: Option<Vec<paretobb::Subregion>> = None;
        for k in 1..=out.state.k {
            let live: Vec<paretobb::Subregion> = audit
                .boxes
                .iter()
                .filter(|r| r.iteration == k && r.fate == BoxFate::Kept)
                .map(|r| r.region.clone())
                .collect();
            for x in &samples {
                assert!(
                    live.iter().any(|b| b.contains(x)),
                    "{name}: Pareto sample {x:?} uncovered at iteration {k}"
                );
            }
            // nested unions: every live box lies inside some previous box
            if let Some(prev) = &previous_union {
                for b in &live {
                    assert!(
                        prev.iter().any(|pb| pb.contains(&b.lo) && pb.contains(&b.hi)),
                        "{name}: box {:?} escapes the previous union",
                        b.id
                    );
                }
            }
            previous_union = Some(live);
        }
    }
}

#[test]
fn improvement_never_loosens_the_gap() {
    // per iteration: with the same archive, replacing the plain singleton
    // bounds by the (possibly improved) bound sets must not increase the gap
    let p = builtin("t51", None).unwrap();
    let config = pbb_defaults(p.n, 3, true);
    let out = run_pbb(&p, &config, &MiniMoeaConfig::mini(MiniMoeaVariant::MoeadDe)).unwrap();
    let audit = out.audit.unwrap();
    let context = BoundingContext::new(&p);
    let mut improved_iterations = 0;
    for k in 1..=out.state.k {
        let kept: Vec<_> = audit
            .boxes
            .iter()
            .filter(|r| r.iteration == k && r.fate == BoxFate::Kept)
            .collect();
        if !kept.iter().any(|r| r.bounds.as_ref().is_some_and(|b| b.improved)) {
            continue;
        }
        improved_iterations += 1;
        let archive = &audit.archives[k - 1];
        let as_used: Vec<&[f64]> = kept
            .iter()
            .flat_map(|r| r.bounds.as_ref().unwrap().points.iter().map(|p| p.as_slice()))
            .collect();
        let singles: Vec<Vec<f64>> = kept
            .iter()
            .map(|r| {
                context
                    .lower_bound(&p, &r.region)
                    .unwrap()
                    .points
                    .remove(0)
            })
            .collect();
        let improved_gap = paretobb::hausdorff(archive, &as_used).unwrap();
        let singleton_gap = paretobb::hausdorff(archive, &singles).unwrap();
        assert!(
            improved_gap <= singleton_gap + 1e-12,
            "iteration {k}: improved gap {improved_gap} exceeds singleton gap {singleton_gap}"
        );
    }
    assert!(improved_iterations > 0, "no iteration applied an improvement");
}

#[test]
fn archive_entries_always_carry_feasible_preimages() {
    // the precondition of the discarding test: upper bounds are images of
    // feasible points
    for (name, algo) in [("t56", Algorithm::Pbb), ("t56", Algorithm::BasicBb)] {
        let p = builtin(name, None).unwrap();
        let mut config = SolverConfig::defaults(algo, p.n);
        config.seed = 5;
        let out = match algo {
            Algorithm::Pbb => {
                run_pbb(&p, &config, &MiniMoeaConfig::mini(MiniMoeaVariant::MoeadDe)).unwrap()
            }
            Algorithm::BasicBb => run_basic_bb(&p, &config).unwrap(),
        };
        for e in out.state.archive.entries() {
            let x = e.preimage.as_ref().expect("archive entry has a preimage");
            assert!(p.is_feasible(x, 0.0).unwrap());
            let f = p.evaluate(x).unwrap();
            for (a, b) in f.iter().zip(&e.values) {
                assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
            }
        }
    }
}

#[test]
fn constrained_runs_survive_empty_archives() {
    // tiny budgets: early iterations of the disk-constrained instance may
    // produce no feasible upper bounds at all; the solver must not discard
    // or terminate on the empty archive
    let p = builtin("t56", None).unwrap();
    let mut config = SolverConfig::defaults(Algorithm::Pbb, 2);
    config.max_iterations = 3;
    config.repair_period = 3;
    config.seed = 1;
    let mut mini = MiniMoeaConfig::mini(MiniMoeaVariant::Nsga2);
    mini.population = 2;
    mini.generations = 1;
    let out = run_pbb(&p, &config, &mini).unwrap();
    assert!(!out.state.boxes.is_empty());
    // gap stays infinite while the archive is empty
    for s in &out.history {
        if s.archive_size == 0 {
            assert!(!s.gap.is_finite());
        }
    }
}

#[test]
fn every_builtin_runs_both_loops() {
    // short budgets; exercises the real-exponent weight of t54 and the
    // three-objective weights of t55 end to end
    for (name, variant) in [
        ("t51", MiniMoeaVariant::Nsga2),
        ("t52", MiniMoeaVariant::MoeadDe),
        ("zdt2", MiniMoeaVariant::MoeadDe),
        ("t54", MiniMoeaVariant::MoeadDe),
        ("t55", MiniMoeaVariant::Nsga2),
        ("t56", MiniMoeaVariant::MoeadDe),
    ] {
        let p = builtin(name, None).unwrap();
        let mut config = SolverConfig::defaults(Algorithm::Pbb, p.n);
        config.max_iterations = 6.min(config.max_iterations);
        config.repair_period = config.repair_period.min(config.max_iterations);
        config.seed = 2;
        let mini = MiniMoeaConfig::mini(variant);
        let pbb = run_pbb(&p, &config, &mini)
            .unwrap_or_else(|e| panic!("{name} hybrid run failed: {e}"));
        assert!(!pbb.state.boxes.is_empty(), "{name}: no live subregions");
        assert!(!pbb.state.archive.is_empty(), "{name}: empty hybrid archive");
        for lb in pbb.state.lower_bounds.values() {
            for point in &lb.points {
                assert!(point.iter().all(|v| v.is_finite()), "{name}: {point:?}");
            }
        }
        config.algorithm = Algorithm::BasicBb;
        let basic = run_basic_bb(&p, &config)
            .unwrap_or_else(|e| panic!("{name} basic run failed: {e}"));
        assert!(!basic.state.boxes.is_empty());
    }
}

#[test]
fn lower_bounds_sound_on_nonlinear_instances() {
    // spot-check Eq.-style soundness on the remaining two-variable
    // instances: a sample of all audited subregions against in-box grids
    for (name, variant) in [
        ("t55", MiniMoeaVariant::MoeadDe),
        ("t56", MiniMoeaVariant::MoeadDe),
        ("t54", MiniMoeaVariant::Nsga2),
    ] {
        let p = builtin(name, None).unwrap();
        let mut config = pbb_defaults(p.n, 9, true);
        config.max_iterations = config.max_iterations.min(8);
        config.repair_period = config.repair_period.min(config.max_iterations);
        let out = run_pbb(&p, &config, &MiniMoeaConfig::mini(variant)).unwrap();
        let audit = out.audit.unwrap();
        let mut checked = 0;
        for (idx, rec) in audit.boxes.iter().enumerate() {
            if idx % 3 != 0 {
                continue;
            }
            let Some(lb) = &rec.bounds else { continue };
            checked += 1;
            let per_dim = 12usize;
            let n = rec.region.dim();
            for flat in 0..per_dim.pow(n as u32) {
                let mut x = Vec::with_capacity(n);
                let mut rest = flat;
                for d in 0..n {
                    let t = (rest % per_dim) as f64 / (per_dim - 1) as f64;
                    rest /= per_dim;
                    x.push(rec.region.lo[d] + t * (rec.region.hi[d] - rec.region.lo[d]));
                }
                let f = p.evaluate(&x).unwrap();
                assert!(
                    lb.points
                        .iter()
                        .any(|l| paretobb::weakly_dominates(l, &f)),
                    "{name}: bound {:?} fails at {x:?} -> {f:?}",
                    lb.points
                );
            }
        }
        assert!(checked > 10, "{name}: only {checked} boxes sampled");
    }
}

#[test]
fn synchronized_widths_each_iteration() {
    let p = builtin("t56", None).unwrap();
    let mut config = SolverConfig::defaults(Algorithm::BasicBb, 2);
    config.max_iterations = 8;
    config.record_audit = true;
    let out = run_basic_bb(&p, &config).unwrap();
    let audit = out.audit.unwrap();
    for k in 1..=out.state.k {
        let widths: Vec<Vec<f64>> = audit
            .boxes
            .iter()
            .filter(|r| r.iteration == k && r.fate != BoxFate::Infeasible)
            .map(|r| r.region.width_vector())
            .collect();
        let first = &widths[0];
        for w in &widths {
            for (a, b) in w.iter().zip(first) {
                assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
            }
        }
    }
}
