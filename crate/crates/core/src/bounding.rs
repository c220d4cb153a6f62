//! Lower bounds for the local Pareto front of a subregion: the Lipschitz
//! midpoint bound, verification of candidate partial lower bounds by a
//! budgeted penalized solver, and the coordinate-exchange improvement that
//! turns a totally dominating point into an m-point overall lower bound set.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dominance::{dominates, ObjectiveVector};
use crate::error::{Error, Result};
use crate::expr::{lipschitz_from_grads, Expr};
use crate::geometry::{Subregion, SubregionId};
use crate::problems::ProblemDefinition;

/// A subregion's lower bound set: a singleton totally dominating point, or
/// the m-point overall set produced by improvement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundSet {
    pub box_id: SubregionId,
    pub points: Vec<Vec<f64>>,
    pub improved: bool,
}

impl LowerBoundSet {
    pub fn singleton(box_id: SubregionId, point: Vec<f64>) -> Self {
        LowerBoundSet {
            box_id,
            points: vec![point],
            improved: false,
        }
    }
}

/// Precomputed symbolic gradients of the objectives; differentiate once per
/// run instead of once per box.
#[derive(Debug, Clone)]
pub struct BoundingContext {
    grads: Vec<Vec<Expr>>,
}

impl BoundingContext {
    pub fn new(problem: &ProblemDefinition) -> Self {
        BoundingContext {
            grads: problem
                .objectives
                .iter()
                .map(|f| f.grad(problem.n))
                .collect(),
        }
    }

    /// Midpoint Lipschitz lower bound:
    /// `l_i = f_i(c(B)) - min(L_{i,1} w_inf, L_{i,inf} w_1) / 2`.
    pub fn lower_bound(
        &self,
        problem: &ProblemDefinition,
        region: &Subregion,
    ) -> Result<LowerBoundSet> {
        let widths = region.widths();
        let center = region.midpoint();
        let mut point = Vec::with_capacity(problem.m);
        for (f, grads) in problem.objectives.iter().zip(&self.grads) {
            let fc = f.eval(&center)?;
            let slack = if widths.winf == 0.0 {
                0.0
            } else {
                let lip = lipschitz_from_grads(grads, region)?;
                0.5 * (lip.l1 * widths.winf).min(lip.linf * widths.w1)
            };
            let v = fc - slack;
            if !v.is_finite() {
                return Err(Error::NonFinite("lower bound"));
            }
            point.push(v);
        }
        Ok(LowerBoundSet::singleton(region.id, point))
    }
}

/// Convenience wrapper constructing the gradient context on the fly.
pub fn lipschitz_lower_bound(
    problem: &ProblemDefinition,
    region: &Subregion,
) -> Result<LowerBoundSet> {
    BoundingContext::new(problem).lower_bound(problem, region)
}

/// Componentwise minimum of a nonempty set of objective vectors.
pub fn ideal_point(upper_bounds: &[ObjectiveVector]) -> Result<Vec<f64>> {
    let first = upper_bounds.first().ok_or(Error::EmptySet("ideal point"))?;
    let mut ideal = first.values.clone();
    for u in &upper_bounds[1..] {
        if u.values.len() != ideal.len() {
            return Err(Error::DimensionMismatch {
                expected: ideal.len(),
                got: u.values.len(),
            });
        }
        for (z, v) in ideal.iter_mut().zip(&u.values) {
            *z = z.min(*v);
        }
    }
    Ok(ideal)
}

/// Budget of the penalized scalar solver used by the verification program.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyBudget {
    pub population: usize,
    pub generations: usize,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget {
            population: 15,
            generations: 30,
        }
    }
}

/// Outcome of checking whether the ideal point of a subregion's upper bound
/// set is a partial lower bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Verification {
    /// No point of the subregion was found whose image dominates the
    /// candidate: it can be used for improvement.
    Accepted,
    /// The witness's image dominates the candidate, so the candidate sits
    /// above attainable points.
    Rejected { witness: Vec<f64> },
}

const CONSTRAINT_PENALTY: f64 = 1e3;

/// Solves `min sum_j f_j(x)` subject to `F(x)` dominating `z_hat`, `x` in the
/// subregion, by penalized differential evolution, then classifies `z_hat`
/// by the dominance relation of the returned minimizer's image.
pub fn verify_partial_lower_bound(
    problem: &ProblemDefinition,
    region: &Subregion,
    z_hat: &[f64],
    budget: &VerifyBudget,
    seed: u64,
) -> Result<Verification> {
    if z_hat.len() != problem.m {
        return Err(Error::DimensionMismatch {
            expected: problem.m,
            got: z_hat.len(),
        });
    }
    let penalized = |x: &[f64]| -> Result<f64> {
        let f = problem.evaluate(x)?;
        let mut val: f64 = f.iter().sum();
        for (fi, zi) in f.iter().zip(z_hat) {
            val += CONSTRAINT_PENALTY * (fi - zi).max(0.0);
        }
        Ok(val)
    };
    let witness = de_minimize(&penalized, region, budget, seed)?;
    let image = problem.evaluate(&witness)?;
    if dominates(&image, z_hat) {
        Ok(Verification::Rejected { witness })
    } else {
        Ok(Verification::Accepted)
    }
}

/// rand/1/bin differential evolution confined to a subregion.
fn de_minimize(
    objective: &dyn Fn(&[f64]) -> Result<f64>,
    region: &Subregion,
    budget: &VerifyBudget,
    seed: u64,
) -> Result<Vec<f64>> {
    const F_WEIGHT: f64 = 0.5;
    const CROSSOVER: f64 = 0.9;
    let np = budget.population.max(4);
    let n = region.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut pop: Vec<Vec<f64>> = (0..np).map(|_| region.sample_uniform(&mut rng)).collect();
    let mut cost: Vec<f64> = pop
        .iter()
        .map(|x| objective(x))
        .collect::<Result<Vec<_>>>()?;

    for _ in 0..budget.generations {
        for i in 0..np {
            let mut pick = || loop {
                let r = rng.gen_range(0..np);
                if r != i {
                    return r;
                }
            };
            let (r1, r2, r3) = {
                let a = pick();
                let b = loop {
                    let v = pick();
                    if v != a {
                        break v;
                    }
                };
                let c = loop {
                    let v = pick();
                    if v != a && v != b {
                        break v;
                    }
                };
                (a, b, c)
            };
            let jrand = rng.gen_range(0..n);
            let mut trial = pop[i].clone();
            for (d, t) in trial.iter_mut().enumerate() {
                if d == jrand || rng.gen::<f64>() < CROSSOVER {
                    let v = pop[r1][d] + F_WEIGHT * (pop[r2][d] - pop[r3][d]);
                    *t = v.clamp(region.lo[d], region.hi[d]);
                }
            }
            let trial_cost = objective(&trial)?;
            if trial_cost <= cost[i] {
                pop[i] = trial;
                cost[i] = trial_cost;
            }
        }
    }

    let best = cost
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(pop[best].clone())
}

/// Improves a singleton totally dominating point to the m-point overall lower
/// bound set by coordinate exchange with the verified candidate, provided no
/// coordinate of the candidate coincides with the current bound.
pub fn improve_lower_bound(
    lower: &LowerBoundSet,
    z_hat: &[f64],
    verification: &Verification,
) -> LowerBoundSet {
    debug_assert!(!lower.improved && lower.points.len() == 1);
    let l = &lower.points[0];
    let tau_empty = l.iter().zip(z_hat).all(|(a, b)| a != b);
    if matches!(verification, Verification::Accepted) && tau_empty {
        let points = (0..l.len())
            .map(|i| {
                let mut p = l.clone();
                p[i] = z_hat[i];
                p
            })
            .collect();
        LowerBoundSet {
            box_id: lower.box_id,
            points,
            improved: true,
        }
    } else {
        lower.clone()
    }
}
