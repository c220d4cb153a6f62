//! Global solver for nonconvex multiobjective optimization.
//!
//! The solver encloses the Pareto front of a box- or inequality-constrained
//! problem between a nondominated archive of feasible upper bounds and a
//! Lipschitz lower bound set, subdividing the variable domain level by level.
//! Two loops are provided: a basic branch-and-bound baseline that bounds with
//! midpoint images, and a hybrid loop that runs small evolutionary searches
//! (NSGA-II or MOEA/D-DE) inside elite subregions to obtain tight upper
//! bounds and to improve lower bounds by coordinate exchange with verified
//! ideal points.
//!
//! Modules follow the pipeline: [`expr`] and [`interval`] supply natural
//! interval extensions and gradient enclosures, [`geometry`] the subregion
//! tree, [`dominance`] the Pareto order and archive, [`bounding`] the lower
//! bounds, [`minimoea`] the evolutionary upper bounds, [`engine`] the solver
//! loops, and [`problems`] the built-in instances and file format.

pub mod bounding;
pub mod dominance;
pub mod engine;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod interval;
pub mod minimoea;
pub mod problems;
pub mod seed;

pub use bounding::{
    ideal_point, improve_lower_bound, lipschitz_lower_bound, verify_partial_lower_bound,
    BoundingContext, LowerBoundSet, Verification, VerifyBudget,
};
pub use dominance::{
    compare, dominates, hausdorff, nondominated_filter, strictly_dominates, weakly_dominates,
    DomRelation, InsertOutcome, NondominatedArchive, ObjectiveVector,
};
pub use engine::{
    discarding_test, run_basic_bb, run_pbb, select_elites, termination_gap, update_flags,
    Algorithm, IterationState, IterationStats, RunResult, SolverConfig, Termination,
};
pub use error::{Error, Result};
pub use expr::{
    feasibility_test, lipschitz_constants, parse_expr, Expr, Feasibility, LipschitzPair,
};
pub use geometry::{IdSource, Subregion, SubregionId, WidthSummary};
pub use interval::{Interval, IntervalVector};
pub use minimoea::{
    filter_infeasible, fitness_penalized, run_mini_moea, MiniMoeaConfig, MiniMoeaResult,
    MiniMoeaVariant,
};
pub use problems::{
    builtin, builtin_names, grid_oracle, load_problem, load_problem_str, GridParetoOracle,
    KnownFront, ProblemDefinition,
};
