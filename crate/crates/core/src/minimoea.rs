//! Budgeted evolutionary upper-bounding engines confined to a subregion: a
//! mini NSGA-II and a mini MOEA/D-DE, with l1 exact-penalty constraint
//! handling and infeasible-point filtering.
//!
//! One run is single-threaded and fully determined by its seed; the engine
//! fans runs out over subregions. Upper bounds are harvested from every
//! evaluated point, not only the final population.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dominance::{dominates, nondominated_filter, ObjectiveVector};
use crate::error::{Error, Result};
use crate::geometry::Subregion;
use crate::problems::ProblemDefinition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MiniMoeaVariant {
    Nsga2,
    MoeadDe,
}

impl std::fmt::Display for MiniMoeaVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MiniMoeaVariant::Nsga2 => write!(f, "nsga2"),
            MiniMoeaVariant::MoeadDe => write!(f, "moead-de"),
        }
    }
}

/// Configuration of one evolutionary bounding run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiniMoeaConfig {
    pub variant: MiniMoeaVariant,
    pub population: usize,
    pub generations: usize,
    /// SBX crossover probability (NSGA-II).
    pub crossover_probability: f64,
    /// SBX distribution index.
    pub crossover_eta: f64,
    /// Polynomial mutation distribution index.
    pub mutation_eta: f64,
    /// Differential weight F (MOEA/D-DE).
    pub de_scale: f64,
    /// Binomial crossover rate CR (MOEA/D-DE).
    pub de_crossover: f64,
    /// l1 exact penalty coefficient for constrained problems.
    pub penalty_rho: f64,
    /// Fixed global weight vectors for MOEA/D; generated once per run when
    /// absent (uniform simplex lattice).
    pub weight_vectors: Option<Vec<Vec<f64>>>,
}

impl MiniMoeaConfig {
    /// Bounding defaults: population 10, 20 generations.
    pub fn mini(variant: MiniMoeaVariant) -> Self {
        MiniMoeaConfig {
            variant,
            population: 10,
            generations: 20,
            crossover_probability: 0.9,
            crossover_eta: 20.0,
            mutation_eta: 20.0,
            de_scale: 0.5,
            de_crossover: 1.0,
            penalty_rho: 1.0,
            weight_vectors: None,
        }
    }

    /// Standalone baseline defaults: population 200, 300 generations.
    pub fn full(variant: MiniMoeaVariant) -> Self {
        MiniMoeaConfig {
            population: 200,
            generations: 300,
            ..Self::mini(variant)
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if self.population < 2 {
            return Err(Error::InvalidConfig("population must be >= 2".into()));
        }
        if self.generations == 0 {
            return Err(Error::InvalidConfig("generations must be >= 1".into()));
        }
        if self.penalty_rho < 0.0 {
            return Err(Error::InvalidConfig("penalty rho must be >= 0".into()));
        }
        if let Some(w) = &self.weight_vectors {
            if w.len() != self.population {
                return Err(Error::InvalidConfig(format!(
                    "weight count {} must equal population {}",
                    w.len(),
                    self.population
                )));
            }
            for lam in w {
                if lam.len() != m {
                    return Err(Error::InvalidConfig("weight vector length != m".into()));
                }
                if lam.iter().any(|v| *v < 0.0)
                    || (lam.iter().sum::<f64>() - 1.0).abs() > 1e-9
                {
                    return Err(Error::InvalidConfig(
                        "weights must be nonnegative and sum to 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Returns the configured weight vectors, or the uniform simplex lattice
    /// with `population` entries.
    pub fn resolved_weights(&self, m: usize) -> Result<Vec<Vec<f64>>> {
        self.validate(m)?;
        match &self.weight_vectors {
            Some(w) => Ok(w.clone()),
            None => Ok(simplex_lattice(m, self.population)),
        }
    }
}

/// Uniform simplex-lattice weights: the smallest lattice with at least
/// `count` points, thinned evenly when it overshoots.
pub fn simplex_lattice(m: usize, count: usize) -> Vec<Vec<f64>> {
    assert!(m >= 1 && count >= 1);
    if m == 1 {
        return vec![vec![1.0]; count];
    }
    let mut h = 1usize;
    loop {
        let full = compositions(m, h);
        if full.len() >= count {
            if full.len() == count {
                return full;
            }
            // evenly strided subset keeps the spread
            return (0..count)
                .map(|i| {
                    let idx = (i * (full.len() - 1)) / (count - 1).max(1);
                    full[idx].clone()
                })
                .collect();
        }
        h += 1;
    }
}

fn compositions(m: usize, h: usize) -> Vec<Vec<f64>> {
    fn rec(m: usize, h: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>, total: usize) {
        if m == 1 {
            let mut w: Vec<f64> = prefix.iter().map(|v| *v as f64 / total as f64).collect();
            w.push(h as f64 / total as f64);
            out.push(w);
            return;
        }
        for k in 0..=h {
            prefix.push(k);
            rec(m - 1, h - k, prefix, out, total);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, h, &mut Vec::new(), &mut out, h);
    out
}

/// Result of one bounding run: feasible nondominated upper bounds with their
/// preimages, the ideal point of that set (absent when no feasible point was
/// found), and the evaluation count.
#[derive(Debug, Clone, PartialEq)]
pub struct MiniMoeaResult {
    pub upper_bounds: Vec<ObjectiveVector>,
    pub ideal: Option<ObjectiveVector>,
    pub evaluations_used: usize,
}

/// Tchebycheff fitness with l1 exact penalty:
/// `max_i lambda_i |f_i(x) - z_i*| + rho * sum_j |min(g_j(x), 0)|`.
pub fn fitness_penalized(
    x: &[f64],
    lambda: &[f64],
    z_star: &[f64],
    problem: &ProblemDefinition,
    rho: f64,
) -> Result<f64> {
    let f = problem.evaluate(x)?;
    let viol = problem.violation(x)?;
    Ok(fitness_from_values(&f, viol, lambda, z_star, rho))
}

fn fitness_from_values(f: &[f64], viol: f64, lambda: &[f64], z_star: &[f64], rho: f64) -> f64 {
    let tche = f
        .iter()
        .zip(lambda)
        .zip(z_star)
        .map(|((fi, li), zi)| li * (fi - zi).abs())
        .fold(f64::NEG_INFINITY, f64::max);
    tche + rho * viol
}

/// Drops points whose preimages violate some constraint by more than `tol`.
pub fn filter_infeasible(
    points: Vec<ObjectiveVector>,
    problem: &ProblemDefinition,
    tol: f64,
) -> Result<Vec<ObjectiveVector>> {
    if !problem.is_constrained() {
        return Ok(points);
    }
    let mut kept = Vec::with_capacity(points.len());
    for p in points {
        let x = p.preimage.as_ref().ok_or(Error::MissingPreimage)?;
        if problem.is_feasible(x, tol)? {
            kept.push(p);
        }
    }
    Ok(kept)
}

struct Individual {
    x: Vec<f64>,
    f: Vec<f64>,
    viol: f64,
}

struct EvalRecorder<'a> {
    problem: &'a ProblemDefinition,
    region: &'a Subregion,
    evals: Vec<ObjectiveVector>,
}

impl<'a> EvalRecorder<'a> {
    fn evaluate(&mut self, x: Vec<f64>) -> Result<Individual> {
        debug_assert!(self.region.contains(&x));
        let f = self.problem.evaluate(&x)?;
        let viol = self.problem.violation(&x)?;
        self.evals.push(ObjectiveVector::with_origin(
            f.clone(),
            self.region.id,
            x.clone(),
        ));
        Ok(Individual { x, f, viol })
    }
}

/// Runs the configured mini MOEA inside `region` and harvests the feasible
/// nondominated upper bounds from all evaluated points.
pub fn run_mini_moea(
    problem: &ProblemDefinition,
    region: &Subregion,
    config: &MiniMoeaConfig,
    seed: u64,
) -> Result<MiniMoeaResult> {
    config.validate(problem.m)?;
    if region.dim() != problem.n {
        return Err(Error::DimensionMismatch {
            expected: problem.n,
            got: region.dim(),
        });
    }
    let mut recorder = EvalRecorder {
        problem,
        region,
        evals: Vec::with_capacity(config.population * (config.generations + 1)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match config.variant {
        MiniMoeaVariant::Nsga2 => evolve_nsga2(region, config, &mut rng, &mut recorder)?,
        MiniMoeaVariant::MoeadDe => {
            evolve_moead(problem, region, config, &mut rng, &mut recorder)?
        }
    }
    let evaluations_used = recorder.evals.len();
    let feasible = filter_infeasible(recorder.evals, problem, 0.0)?;
    let archive = nondominated_filter(feasible);
    let upper_bounds = archive.entries().to_vec();
    let ideal = if upper_bounds.is_empty() {
        None
    } else {
        Some(ObjectiveVector::new(
            crate::bounding::ideal_point(&upper_bounds)?,
        ))
    };
    Ok(MiniMoeaResult {
        upper_bounds,
        ideal,
        evaluations_used,
    })
}

fn clamp_to(region: &Subregion, x: &mut [f64]) {
    for (v, (l, h)) in x.iter_mut().zip(region.lo.iter().zip(&region.hi)) {
        *v = v.clamp(*l, *h);
    }
}

fn polynomial_mutation<R: Rng>(region: &Subregion, x: &mut [f64], eta: f64, rng: &mut R) {
    let pm = 1.0 / x.len() as f64;
    for (v, (lo, hi)) in x.iter_mut().zip(region.lo.iter().zip(&region.hi)) {
        if rng.gen::<f64>() >= pm {
            continue;
        }
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        let u: f64 = rng.gen();
        let delta = if u < 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0)) - 1.0
        } else {
            1.0 - (2.0 * (1.0 - u)).powf(1.0 / (eta + 1.0))
        };
        *v = (*v + delta * span).clamp(*lo, *hi);
    }
}

fn sbx_crossover<R: Rng>(
    region: &Subregion,
    p1: &[f64],
    p2: &[f64],
    eta: f64,
    probability: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.gen::<f64>() < probability {
        for d in 0..p1.len() {
            if rng.gen::<f64>() >= 0.5 || (p1[d] - p2[d]).abs() < 1e-14 {
                continue;
            }
            let u: f64 = rng.gen();
            let beta = if u <= 0.5 {
                (2.0 * u).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
            };
            let (y1, y2) = (p1[d].min(p2[d]), p1[d].max(p2[d]));
            c1[d] = 0.5 * ((1.0 + beta) * y1 + (1.0 - beta) * y2);
            c2[d] = 0.5 * ((1.0 - beta) * y1 + (1.0 + beta) * y2);
        }
    }
    clamp_to(region, &mut c1);
    clamp_to(region, &mut c2);
    (c1, c2)
}

/// Objective values used for ranking: the raw objectives for box-constrained
/// problems, each objective shifted by the l1 exact penalty otherwise.
fn ranked_values(ind: &Individual, rho: f64) -> Vec<f64> {
    if ind.viol == 0.0 {
        ind.f.clone()
    } else {
        ind.f.iter().map(|v| v + rho * ind.viol).collect()
    }
}

fn fast_nondominated_sort(values: &[Vec<f64>]) -> Vec<usize> {
    let n = values.len();
    let mut rank = vec![0usize; n];
    let mut dominated_by = vec![0usize; n];
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut front: Vec<usize> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if dominates(&values[i], &values[j]) {
                dominated[i].push(j);
            } else if dominates(&values[j], &values[i]) {
                dominated_by[i] += 1;
            }
        }
        if dominated_by[i] == 0 {
            front.push(i);
        }
    }
    let mut level = 0usize;
    while !front.is_empty() {
        let mut next = Vec::new();
        for &i in &front {
            rank[i] = level;
            for &j in &dominated[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        front = next;
        level += 1;
    }
    rank
}

fn crowding_distance(values: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let l = members.len();
    let mut dist = vec![0.0f64; l];
    if l == 0 {
        return dist;
    }
    let m = values[members[0]].len();
    let mut order: Vec<usize> = (0..l).collect();
    #[allow(clippy::needless_range_loop)]
    for obj in 0..m {
        order.sort_by(|a, b| values[members[*a]][obj].total_cmp(&values[members[*b]][obj]));
        dist[order[0]] = f64::INFINITY;
        dist[order[l - 1]] = f64::INFINITY;
        let lo = values[members[order[0]]][obj];
        let hi = values[members[order[l - 1]]][obj];
        if hi > lo {
            for w in 1..l - 1 {
                let prev = values[members[order[w - 1]]][obj];
                let next = values[members[order[w + 1]]][obj];
                dist[order[w]] += (next - prev) / (hi - lo);
            }
        }
    }
    dist
}

fn evolve_nsga2(
    region: &Subregion,
    config: &MiniMoeaConfig,
    rng: &mut ChaCha8Rng,
    recorder: &mut EvalRecorder,
) -> Result<()> {
    let np = config.population;
    let mut pop: Vec<Individual> = (0..np)
        .map(|_| recorder.evaluate(region.sample_uniform(rng)))
        .collect::<Result<Vec<_>>>()?;

    for _ in 0..config.generations {
        let values: Vec<Vec<f64>> = pop
            .iter()
            .map(|ind| ranked_values(ind, config.penalty_rho))
            .collect();
        let rank = fast_nondominated_sort(&values);
        let all: Vec<usize> = (0..pop.len()).collect();
        let crowd = crowding_distance(&values, &all);

        let tournament = |rng: &mut ChaCha8Rng| -> usize {
            let a = rng.gen_range(0..pop.len());
            let b = rng.gen_range(0..pop.len());
            if rank[a] < rank[b] || (rank[a] == rank[b] && crowd[a] > crowd[b]) {
                a
            } else {
                b
            }
        };

        let mut offspring: Vec<Individual> = Vec::with_capacity(np);
        while offspring.len() < np {
            let p1 = tournament(rng);
            let p2 = tournament(rng);
            let (mut c1, mut c2) = sbx_crossover(
                region,
                &pop[p1].x,
                &pop[p2].x,
                config.crossover_eta,
                config.crossover_probability,
                rng,
            );
            polynomial_mutation(region, &mut c1, config.mutation_eta, rng);
            polynomial_mutation(region, &mut c2, config.mutation_eta, rng);
            offspring.push(recorder.evaluate(c1)?);
            if offspring.len() < np {
                offspring.push(recorder.evaluate(c2)?);
            }
        }

        // environmental selection on parents + offspring
        pop.extend(offspring);
        let values: Vec<Vec<f64>> = pop
            .iter()
            .map(|ind| ranked_values(ind, config.penalty_rho))
            .collect();
        let rank = fast_nondominated_sort(&values);
        let max_rank = rank.iter().copied().max().unwrap_or(0);
        let mut survivors: Vec<usize> = Vec::with_capacity(np);
        for level in 0..=max_rank {
            let mut members: Vec<usize> = (0..pop.len()).filter(|i| rank[*i] == level).collect();
            if survivors.len() + members.len() <= np {
                survivors.extend(&members);
            } else {
                let crowd = crowding_distance(&values, &members);
                let mut order: Vec<usize> = (0..members.len()).collect();
                order.sort_by(|a, b| crowd[*b].total_cmp(&crowd[*a]).then(a.cmp(b)));
                members = order.into_iter().map(|k| members[k]).collect();
                survivors.extend(members.into_iter().take(np - survivors.len()));
            }
            if survivors.len() == np {
                break;
            }
        }
        survivors.sort_unstable();
        let mut keep = survivors.into_iter();
        let mut next_index = keep.next();
        let mut next_pop = Vec::with_capacity(np);
        for (i, ind) in pop.into_iter().enumerate() {
            if Some(i) == next_index {
                next_pop.push(ind);
                next_index = keep.next();
            }
        }
        pop = next_pop;
    }
    Ok(())
}

fn evolve_moead(
    problem: &ProblemDefinition,
    region: &Subregion,
    config: &MiniMoeaConfig,
    rng: &mut ChaCha8Rng,
    recorder: &mut EvalRecorder,
) -> Result<()> {
    const NEIGHBOR_SELECT_PROB: f64 = 0.9;
    const MAX_REPLACEMENTS: usize = 2;
    let np = config.population;
    let weights = config.resolved_weights(problem.m)?;
    let t = np.min(5);

    // neighborhoods: T nearest weight vectors
    let mut neighborhoods: Vec<Vec<usize>> = Vec::with_capacity(np);
    for i in 0..np {
        let mut order: Vec<usize> = (0..np).collect();
        order.sort_by(|a, b| {
            let da: f64 = weights[i]
                .iter()
                .zip(&weights[*a])
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            let db: f64 = weights[i]
                .iter()
                .zip(&weights[*b])
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            da.total_cmp(&db).then(a.cmp(b))
        });
        neighborhoods.push(order.into_iter().take(t).collect());
    }

    let mut pop: Vec<Individual> = (0..np)
        .map(|_| recorder.evaluate(region.sample_uniform(rng)))
        .collect::<Result<Vec<_>>>()?;
    // reference point: running componentwise minimum of images in the box
    let mut z_star = pop[0].f.clone();
    for ind in &pop[1..] {
        for (z, v) in z_star.iter_mut().zip(&ind.f) {
            *z = z.min(*v);
        }
    }

    for _ in 0..config.generations {
        for i in 0..np {
            let pool: &[usize] = if rng.gen::<f64>() < NEIGHBOR_SELECT_PROB {
                &neighborhoods[i]
            } else {
                // whole population
                &[]
            };
            let pick = |rng: &mut ChaCha8Rng| -> usize {
                if pool.is_empty() {
                    rng.gen_range(0..np)
                } else {
                    pool[rng.gen_range(0..pool.len())]
                }
            };
            let r1 = pick(rng);
            let pool_size = if pool.is_empty() { np } else { pool.len() };
            // tiny pools cannot supply three distinct parents; repeats then
            // degenerate the difference vector to zero, which is harmless
            let (r2, r3) = if pool_size >= 3 {
                loop {
                    let a = pick(rng);
                    let b = pick(rng);
                    if a != r1 && b != r1 && a != b {
                        break (a, b);
                    }
                }
            } else {
                (pick(rng), pick(rng))
            };

            // DE rand/1/bin
            let n = problem.n;
            let jrand = rng.gen_range(0..n);
            let mut child = pop[i].x.clone();
            for (d, v) in child.iter_mut().enumerate() {
                if d == jrand || rng.gen::<f64>() < config.de_crossover {
                    *v = pop[r1].x[d] + config.de_scale * (pop[r2].x[d] - pop[r3].x[d]);
                }
            }
            clamp_to(region, &mut child);
            polynomial_mutation(region, &mut child, config.mutation_eta, rng);
            let child = recorder.evaluate(child)?;
            for (z, v) in z_star.iter_mut().zip(&child.f) {
                *z = z.min(*v);
            }

            // update at most MAX_REPLACEMENTS neighbors, visited in random order
            let mut candidates: Vec<usize> = if pool.is_empty() {
                (0..np).collect()
            } else {
                pool.to_vec()
            };
            for k in (1..candidates.len()).rev() {
                candidates.swap(k, rng.gen_range(0..=k));
            }
            let mut replaced = 0;
            for j in candidates {
                let child_fv = fitness_from_values(
                    &child.f,
                    child.viol,
                    &weights[j],
                    &z_star,
                    config.penalty_rho,
                );
                let incumbent_fv = fitness_from_values(
                    &pop[j].f,
                    pop[j].viol,
                    &weights[j],
                    &z_star,
                    config.penalty_rho,
                );
                if child_fv <= incumbent_fv {
                    pop[j] = Individual {
                        x: child.x.clone(),
                        f: child.f.clone(),
                        viol: child.viol,
                    };
                    replaced += 1;
                    if replaced == MAX_REPLACEMENTS {
                        break;
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SubregionId;
    use crate::problems::{builtin, grid_oracle, load_problem_str};

    fn region(id: u64, lo: &[f64], hi: &[f64]) -> Subregion {
        Subregion::new(SubregionId(id), lo.to_vec(), hi.to_vec(), false).unwrap()
    }

    fn identity_2d() -> ProblemDefinition {
        load_problem_str(
            "[problem] name=id2, n=2, m=2\n\
             [objective 1] expr=x1\n\
             [objective 2] expr=x2\n\
             [domain] lo=0 0, hi=1 1\n",
        )
        .unwrap()
    }

    #[test]
    fn zero_width_box_yields_midpoint_image() {
        let p = identity_2d();
        let reg = region(3, &[0.25, 0.5], &[0.25, 0.5]);
        for variant in [MiniMoeaVariant::Nsga2, MiniMoeaVariant::MoeadDe] {
            let out = run_mini_moea(&p, &reg, &MiniMoeaConfig::mini(variant), 9).unwrap();
            assert_eq!(out.upper_bounds.len(), 1);
            assert_eq!(out.upper_bounds[0].values, vec![0.25, 0.5]);
            assert_eq!(out.upper_bounds[0].origin_box, Some(SubregionId(3)));
            assert_eq!(
                out.ideal.as_ref().unwrap().values,
                vec![0.25, 0.5]
            );
        }
    }

    #[test]
    fn identity_contract_containment_and_nondominance() {
        let p = identity_2d();
        let reg = region(1, &[0.0, 0.0], &[1.0, 1.0]);
        for variant in [MiniMoeaVariant::Nsga2, MiniMoeaVariant::MoeadDe] {
            let out = run_mini_moea(&p, &reg, &MiniMoeaConfig::mini(variant), 4).unwrap();
            assert!(!out.upper_bounds.is_empty());
            for u in &out.upper_bounds {
                let x = u.preimage.as_ref().unwrap();
                assert!(reg.contains(x));
                assert_eq!(&u.values, x);
            }
            // pairwise nondominated: the filter is idempotent on the result
            let again = nondominated_filter(out.upper_bounds.clone());
            assert_eq!(again.entries().len(), out.upper_bounds.len());
            // ideal = componentwise min
            let ideal = out.ideal.unwrap().values;
            for (k, z) in ideal.iter().enumerate() {
                let min = out
                    .upper_bounds
                    .iter()
                    .map(|u| u.values[k])
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(*z, min);
            }
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = builtin("t51", None).unwrap();
        let reg = region(5, &[0.0, 0.0], &[2.0, 2.0]);
        for variant in [MiniMoeaVariant::Nsga2, MiniMoeaVariant::MoeadDe] {
            let cfg = MiniMoeaConfig::mini(variant);
            let a = run_mini_moea(&p, &reg, &cfg, 1234).unwrap();
            let b = run_mini_moea(&p, &reg, &cfg, 1234).unwrap();
            assert_eq!(a, b);
            let c = run_mini_moea(&p, &reg, &cfg, 1235).unwrap();
            assert_ne!(a.upper_bounds, c.upper_bounds);
        }
    }

    #[test]
    fn near_front_on_disconnected_instance() {
        // every harvested upper bound is dominated by no grid-front point by
        // more than one grid step
        let p = builtin("t51", None).unwrap();
        let oracle = grid_oracle(&p, 201).unwrap();
        let front = oracle.front_values();
        let step = 2.0 / 200.0;
        let reg = region(2, &[0.0, 0.0], &[2.0, 2.0]);
        let out = run_mini_moea(
            &p,
            &reg,
            &MiniMoeaConfig::mini(MiniMoeaVariant::MoeadDe),
            14,
        )
        .unwrap();
        for u in &out.upper_bounds {
            let worst_margin = front
                .iter()
                .map(|pf| {
                    u.values
                        .iter()
                        .zip(pf)
                        .map(|(a, b)| a - b)
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                worst_margin <= step,
                "upper bound {:?} dominated with margin {worst_margin}",
                u.values
            );
        }
    }

    #[test]
    fn fitness_penalized_examples() {
        let p = builtin("t56", None).unwrap();
        // feasible point: penalty vanishes, Tchebycheff term remains
        let x = [1.0, 0.6];
        assert!(p.is_feasible(&x, 0.0).unwrap());
        let fv = fitness_penalized(&x, &[0.5, 0.5], &[0.0, 0.0], &p, 1.0).unwrap();
        assert!((fv - 0.5).abs() < 1e-12);

        // single violated constraint contributes rho * |g|
        let q = load_problem_str(
            "[problem] name=c1, n=1, m=2\n\
             [objective 1] expr=x1\n\
             [objective 2] expr=(- 1 x1)\n\
             [constraint 1] expr=(- x1 1)\n\
             [domain] lo=0, hi=2\n",
        )
        .unwrap();
        let fv = fitness_penalized(&[0.5, 0.0][..1], &[1.0, 0.0], &[0.5, 0.0], &q, 1.0).unwrap();
        assert!((fv - 0.5).abs() < 1e-12, "penalty 0.5 expected, got {fv}");

        // lambda = (1, 0), f = (3, 9), z* = (1, 1), feasible -> 2
        let id = identity_2d();
        let fv = fitness_penalized(&[3.0, 9.0], &[1.0, 0.0], &[1.0, 1.0], &id, 1.0);
        // point lies outside the domain box but evaluation is still defined
        assert!((fv.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn filter_infeasible_examples() {
        let unconstrained = identity_2d();
        let pts = vec![ObjectiveVector::new(vec![0.5, 0.5])];
        assert_eq!(
            filter_infeasible(pts.clone(), &unconstrained, 0.0).unwrap(),
            pts
        );

        let q = load_problem_str(
            "[problem] name=c1, n=1, m=2\n\
             [objective 1] expr=x1\n\
             [objective 2] expr=(- 1 x1)\n\
             [constraint 1] expr=x1\n\
             [domain] lo=-1, hi=1\n",
        )
        .unwrap();
        let at = |x: f64| ObjectiveVector {
            values: vec![x, 1.0 - x],
            origin_box: None,
            preimage: Some(vec![x]),
        };
        let kept = filter_infeasible(vec![at(-1e-3), at(0.0), at(0.5)], &q, 0.0).unwrap();
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0].preimage.as_ref().unwrap()[0], 0.0);

        let missing = vec![ObjectiveVector::new(vec![0.0, 1.0])];
        assert!(matches!(
            filter_infeasible(missing, &q, 0.0),
            Err(Error::MissingPreimage)
        ));
    }

    #[test]
    fn constrained_run_keeps_only_feasible_points() {
        let p = builtin("t56", None).unwrap();
        let pi = std::f64::consts::PI;
        let reg = region(8, &[0.0, 0.0], &[pi, pi]);
        let out = run_mini_moea(
            &p,
            &reg,
            &MiniMoeaConfig::mini(MiniMoeaVariant::MoeadDe),
            21,
        )
        .unwrap();
        assert!(!out.upper_bounds.is_empty());
        for u in &out.upper_bounds {
            assert!(p.is_feasible(u.preimage.as_ref().unwrap(), 0.0).unwrap());
        }
    }

    #[test]
    fn infeasible_box_returns_empty_result() {
        let p = builtin("t56", None).unwrap();
        // deep inside the excluded disk around the origin
        let reg = region(9, &[0.05, 0.05], &[0.1, 0.1]);
        let out = run_mini_moea(
            &p,
            &reg,
            &MiniMoeaConfig::mini(MiniMoeaVariant::Nsga2),
            3,
        )
        .unwrap();
        assert!(out.upper_bounds.is_empty());
        assert!(out.ideal.is_none());
        assert!(out.evaluations_used > 0);
    }

    #[test]
    fn minimal_population_does_not_hang() {
        let p = identity_2d();
        let reg = region(4, &[0.0, 0.0], &[1.0, 1.0]);
        for variant in [MiniMoeaVariant::Nsga2, MiniMoeaVariant::MoeadDe] {
            let mut cfg = MiniMoeaConfig::mini(variant);
            cfg.population = 2;
            cfg.generations = 3;
            let out = run_mini_moea(&p, &reg, &cfg, 1).unwrap();
            assert!(!out.upper_bounds.is_empty());
        }
    }

    #[test]
    fn simplex_lattice_counts() {
        let w = simplex_lattice(2, 10);
        assert_eq!(w.len(), 10);
        assert_eq!(w[0], vec![0.0, 1.0]);
        assert_eq!(w[9], vec![1.0, 0.0]);
        let w = simplex_lattice(3, 10);
        assert_eq!(w.len(), 10);
        for lam in &w {
            assert!((lam.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        // non-exact lattice sizes are thinned, not padded
        let w = simplex_lattice(3, 200);
        assert_eq!(w.len(), 200);
    }
}
