//! Built-in test instances, the problem-definition text format, and the
//! brute-force grid oracle used by tests against instances with known fronts.

use crate::dominance::{nondominated_filter, ObjectiveVector};
use crate::error::{Error, Result};
use crate::expr::{parse_expr_at, Expr};
use crate::geometry::{Subregion, SubregionId};

/// A multiobjective problem: minimize `objectives` over the domain box
/// subject to `constraints[j] >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDefinition {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub objectives: Vec<Expr>,
    /// Feasibility means `g_j(x) >= 0`.
    pub constraints: Vec<Expr>,
    pub domain: Subregion,
    /// Analytic Pareto-set description when one is known, for test oracles.
    pub known_front: Option<KnownFront>,
}

/// The Pareto set as a union of straight segments in decision space; images
/// of dense samples under `F` describe the front.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownFront {
    pub set_segments: Vec<(Vec<f64>, Vec<f64>)>,
}

impl KnownFront {
    /// `count` evenly spaced points per segment, endpoints included.
    pub fn pareto_set_samples(&self, count: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for (a, b) in &self.set_segments {
            for k in 0..count {
                let t = if count == 1 {
                    0.0
                } else {
                    k as f64 / (count - 1) as f64
                };
                out.push(a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect());
            }
        }
        out
    }
}

impl ProblemDefinition {
    pub fn is_constrained(&self) -> bool {
        !self.constraints.is_empty()
    }

    /// Evaluates all objectives at a point.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.objectives.iter().map(|f| f.eval(x)).collect()
    }

    /// Total constraint violation `sum_j |min(g_j(x), 0)|`.
    pub fn violation(&self, x: &[f64]) -> Result<f64> {
        let mut v = 0.0;
        for g in &self.constraints {
            v += g.eval(x)?.min(0.0).abs();
        }
        Ok(v)
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> Result<bool> {
        for g in &self.constraints {
            if g.eval(x)? < -tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Images of dense Pareto-set samples, when the set is known.
    pub fn front_samples(&self, count: usize) -> Result<Option<Vec<Vec<f64>>>> {
        match &self.known_front {
            None => Ok(None),
            Some(kf) => {
                let mut out = Vec::new();
                for x in kf.pareto_set_samples(count) {
                    out.push(self.evaluate(&x)?);
                }
                Ok(Some(out))
            }
        }
    }

    /// Consistency checks shared by the loader and the engine; unlike
    /// [`validate`](Self::validate) this allows a degenerate (single-point)
    /// domain, which the engine resolves without bisection.
    pub fn check_consistent(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidProblem(format!(
                "need at least 2 objectives, got {}",
                self.m
            )));
        }
        if self.objectives.len() != self.m {
            return Err(Error::InvalidProblem(format!(
                "m = {} but {} objective(s) defined",
                self.m,
                self.objectives.len()
            )));
        }
        if self.domain.dim() != self.n {
            return Err(Error::InvalidProblem(format!(
                "domain dimension {} does not match n = {}",
                self.domain.dim(),
                self.n
            )));
        }
        for e in self.objectives.iter().chain(&self.constraints) {
            if let Some(i) = e.max_var() {
                if i >= self.n {
                    return Err(Error::InvalidProblem(format!(
                        "expression references x{} but n = {}",
                        i + 1,
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_consistent()?;
        for (l, h) in self.domain.lo.iter().zip(&self.domain.hi) {
            if l >= h {
                return Err(Error::InvalidProblem("degenerate domain".into()));
            }
        }
        Ok(())
    }

    /// Canonical text form, re-loadable by [`load_problem_str`].
    pub fn to_problem_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "[problem] name={}, n={}, m={}\n",
            self.name, self.n, self.m
        ));
        for (i, f) in self.objectives.iter().enumerate() {
            out.push_str(&format!("[objective {}] expr={}\n", i + 1, f));
        }
        for (j, g) in self.constraints.iter().enumerate() {
            out.push_str(&format!("[constraint {}] expr={}\n", j + 1, g));
        }
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!(
            "[domain] lo={}, hi={}\n",
            join(&self.domain.lo),
            join(&self.domain.hi)
        ));
        out
    }
}

const BUILTIN_NAMES: [&str; 6] = ["t51", "t52", "zdt2", "t54", "t55", "t56"];

/// Names of the built-in instances.
pub fn builtin_names() -> &'static [&'static str] {
    &BUILTIN_NAMES
}

/// Builds a built-in instance. `n` selects the dimension for the scalable
/// instances (`zdt2`, `t54`) and must be omitted or matching for the rest.
pub fn builtin(name: &str, n: Option<usize>) -> Result<ProblemDefinition> {
    let fixed = |want: usize| -> Result<()> {
        match n {
            None => Ok(()),
            Some(v) if v == want => Ok(()),
            Some(v) => Err(Error::InvalidConfig(format!(
                "{name} has fixed dimension {want}, got n = {v}"
            ))),
        }
    };
    let problem = match name {
        "t51" => {
            fixed(2)?;
            let text = "\
[problem] name=t51, n=2, m=2
[objective 1] expr=x1
[objective 2] expr=(+ (+ (min (abs (- x1 1)) (- 1.5 x1)) x2) 1)
[domain] lo=0 0, hi=2 2
";
            let mut p = load_problem_str(text)?;
            p.known_front = Some(KnownFront {
                set_segments: vec![
                    (vec![0.0, 0.0], vec![1.0, 0.0]),
                    (vec![1.5, 0.0], vec![2.0, 0.0]),
                ],
            });
            p
        }
        "t52" => {
            fixed(3)?;
            let c = 1.0 / 3f64.sqrt();
            let sq = |sign: &str| {
                (1..=3)
                    .map(|i| format!("(pow ({sign} x{i} {c}) 2)"))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let text = format!(
                "[problem] name=t52, n=3, m=2\n\
                 [objective 1] expr=(- 1 (exp (neg (+ {}))))\n\
                 [objective 2] expr=(- 1 (exp (neg (+ {}))))\n\
                 [domain] lo=-2 -2 -2, hi=2 2 2\n",
                sq("-"),
                sq("+"),
            );
            let mut p = load_problem_str(&text)?;
            p.known_front = Some(KnownFront {
                set_segments: vec![(vec![-c, -c, -c], vec![c, c, c])],
            });
            p
        }
        "zdt2" => {
            let n = n.unwrap_or(10);
            if n < 2 {
                return Err(Error::InvalidConfig("zdt2 needs n >= 2".into()));
            }
            let tail = (2..=n)
                .map(|i| format!("x{i}"))
                .collect::<Vec<_>>()
                .join(" ");
            let sum_tail = if n == 2 {
                tail
            } else {
                format!("(+ {tail})")
            };
            let g = format!("(+ 1 (/ (* 9 {sum_tail}) {}))", n - 1);
            // f2 = g * (1 - (x1/g)^2), written as g - x1^2/g: the same
            // function with a much tighter natural-extension gradient
            // enclosure (no repeated g dependency)
            let text = format!(
                "[problem] name=zdt2, n={n}, m=2\n\
                 [objective 1] expr=x1\n\
                 [objective 2] expr=(- {g} (/ (pow x1 2) {g}))\n\
                 [domain] lo={}, hi={}\n",
                vec!["0"; n].join(" "),
                vec!["1"; n].join(" "),
            );
            let mut p = load_problem_str(&text)?;
            let mut a = vec![0.0; n];
            let mut b = vec![0.0; n];
            a[0] = 0.0;
            b[0] = 1.0;
            p.known_front = Some(KnownFront {
                set_segments: vec![(a, b)],
            });
            p
        }
        "t54" => {
            let n = n.unwrap_or(3);
            if n < 1 {
                return Err(Error::InvalidConfig("t54 needs n >= 1".into()));
            }
            // piecewise weight: index <= 3 takes the slow-decay branch
            let w = |j: usize| -> String {
                if j <= 3 {
                    format!("(* 0.01 (exp (neg (powf (/ x{j} 20) 2.5))))")
                } else {
                    format!("(* 0.01 (exp (neg (/ x{j} 15))))")
                }
            };
            let f1 = if n == 1 {
                "x1".to_string()
            } else {
                format!(
                    "(+ {})",
                    (1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>().join(" ")
                )
            };
            let deficits = (1..=n)
                .map(|j| format!("(- 1 {})", w(j)))
                .collect::<Vec<_>>()
                .join(" ");
            let sum_deficits = if n == 1 {
                deficits
            } else {
                format!("(+ {deficits})")
            };
            let text = format!(
                "[problem] name=t54, n={n}, m=2\n\
                 [objective 1] expr={f1}\n\
                 [objective 2] expr=(- 1 {sum_deficits})\n\
                 [domain] lo={}, hi={}\n",
                vec!["0"; n].join(" "),
                vec!["40"; n].join(" "),
            );
            load_problem_str(&text)?
        }
        "t55" => {
            fixed(2)?;
            let text = "\
[problem] name=t55, n=2, m=3
[objective 1] expr=(+ (* 0.5 (+ (pow x1 2) (pow x2 2))) (sin (+ (pow x1 2) (pow x2 2))))
[objective 2] expr=(+ (+ (/ (pow (+ (- (* 3 x1) (* 2 x2)) 4) 2) 8) (/ (pow (+ (- x1 x2) 1) 2) 27)) 15)
[objective 3] expr=(- (/ 1 (+ (+ (pow x1 2) (pow x2 2)) 1)) (* 1.1 (exp (- (neg (pow x1 2)) (pow x2 2)))))
[domain] lo=-3 -3, hi=3 3
";
            load_problem_str(text)?
        }
        "t56" => {
            fixed(2)?;
            let pi = std::f64::consts::PI;
            let text = format!(
                "[problem] name=t56, n=2, m=2\n\
                 [objective 1] expr=x1\n\
                 [objective 2] expr=x2\n\
                 [constraint 1] expr=(- (- (+ (pow x1 2) (pow x2 2)) 1) (* 0.1 (cos (* 16 (atan (/ x1 x2))))))\n\
                 [constraint 2] expr=(- (- 0.5 (pow (- x1 0.5) 2)) (pow (- x2 0.5) 2))\n\
                 [domain] lo=0 0, hi={pi} {pi}\n"
            );
            load_problem_str(&text)?
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown problem `{other}`; valid names: {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    Ok(problem)
}

/// Splits a section tail like `name=t51, n=2, m=2` into key/value pairs.
/// Values may contain spaces, commas and parentheses; a new pair starts at
/// every `ident=` occurring at paren depth zero.
fn split_pairs(tail: &str, line: usize, column0: usize) -> Result<Vec<(String, String, usize)>> {
    let chars: Vec<char> = tail.chars().collect();
    let mut pairs: Vec<(String, String, usize)> = Vec::new();
    let mut depth = 0usize;
    let mut i = 0usize;
    let mut current_key: Option<(String, usize)> = None;
    let mut value_start = 0usize;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if depth == 0 && (c.is_alphanumeric() || c == '_') {
            // possible start of `ident=`
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            if j < chars.len() && chars[j] == '=' {
                let boundary = start == 0
                    || chars[..start]
                        .iter()
                        .rev()
                        .find(|c| !c.is_whitespace())
                        .map(|c| *c == ',')
                        .unwrap_or(true);
                if boundary {
                    if let Some((key, key_col)) = current_key.take() {
                        let val: String = chars[value_start..start].iter().collect();
                        pairs.push((key, val, key_col));
                    }
                    let key: String = chars[start..j].iter().collect();
                    current_key = Some((key, column0 + start));
                    value_start = j + 1;
                    i = j + 1;
                    continue;
                }
            }
        }
        i += 1;
    }
    if let Some((key, key_col)) = current_key.take() {
        let val: String = chars[value_start..].iter().collect();
        pairs.push((key, val, key_col));
    } else if !tail.trim().is_empty() {
        return Err(Error::Parse {
            line,
            column: column0,
            message: format!("expected key=value pairs, got `{}`", tail.trim()),
        });
    }
    Ok(pairs
        .into_iter()
        .map(|(k, v, col)| (k, v.trim().trim_end_matches(',').trim().to_string(), col))
        .collect())
}

fn parse_vector(s: &str, line: usize, column: usize) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(|c: char| c == ',' || c.is_whitespace()) {
        if part.is_empty() {
            continue;
        }
        match part.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("invalid number `{part}` in vector"),
                })
            }
        }
    }
    Ok(out)
}

/// Loads a problem definition from the documented text format.
pub fn load_problem_str(text: &str) -> Result<ProblemDefinition> {
    let mut name = None;
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut objectives: Vec<(usize, Expr)> = Vec::new();
    let mut constraints: Vec<(usize, Expr)> = Vec::new();
    let mut lo: Option<Vec<f64>> = None;
    let mut hi: Option<Vec<f64>> = None;

    for (line_idx, raw) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !line.starts_with('[') {
            return Err(Error::Parse {
                line: line_no,
                column: 1,
                message: "expected a `[section]` header".into(),
            });
        }
        let close = line.find(']').ok_or(Error::Parse {
            line: line_no,
            column: 1,
            message: "unterminated section header".into(),
        })?;
        let header = line[1..close].trim();
        let tail_col = raw.find(']').unwrap_or(close) + 2;
        let tail = &line[close + 1..];
        let pairs = split_pairs(tail, line_no, tail_col)?;
        let get = |key: &str| -> Option<&(String, String, usize)> {
            pairs.iter().find(|(k, _, _)| k == key)
        };
        let want_expr = |label: &str| -> Result<(usize, Expr)> {
            let idx: usize = header
                .strip_prefix(label)
                .and_then(|s| s.trim().parse().ok())
                .ok_or(Error::Parse {
                    line: line_no,
                    column: 2,
                    message: format!("expected `[{label} <index>]`"),
                })?;
            let dim = n.ok_or(Error::Parse {
                line: line_no,
                column: 1,
                message: "the [problem] section must come first".into(),
            })?;
            let (_, src, col) = get("expr").ok_or(Error::Parse {
                line: line_no,
                column: tail_col,
                message: format!("[{label}] needs expr=..."),
            })?;
            let expr = parse_expr_at(src, dim, line_no, col + 5)?;
            Ok((idx, expr))
        };

        if header == "problem" {
            for (key, value, col) in &pairs {
                match key.as_str() {
                    "name" => name = Some(value.clone()),
                    "n" => {
                        n = Some(value.parse().map_err(|_| Error::Parse {
                            line: line_no,
                            column: *col,
                            message: format!("invalid n `{value}`"),
                        })?)
                    }
                    "m" => {
                        m = Some(value.parse().map_err(|_| Error::Parse {
                            line: line_no,
                            column: *col,
                            message: format!("invalid m `{value}`"),
                        })?)
                    }
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            column: *col,
                            message: format!("unknown key `{other}` in [problem]"),
                        })
                    }
                }
            }
        } else if header.starts_with("objective") {
            objectives.push(want_expr("objective")?);
        } else if header.starts_with("constraint") {
            constraints.push(want_expr("constraint")?);
        } else if header == "domain" {
            for (key, value, col) in &pairs {
                match key.as_str() {
                    "lo" => lo = Some(parse_vector(value, line_no, *col)?),
                    "hi" => hi = Some(parse_vector(value, line_no, *col)?),
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            column: *col,
                            message: format!("unknown key `{other}` in [domain]"),
                        })
                    }
                }
            }
        } else {
            return Err(Error::Parse {
                line: line_no,
                column: 2,
                message: format!("unknown section `{header}`"),
            });
        }
    }

    let n = n.ok_or(Error::InvalidProblem("missing n".into()))?;
    let m = m.ok_or(Error::InvalidProblem("missing m".into()))?;
    if objectives.is_empty() {
        return Err(Error::InvalidProblem("no objectives defined".into()));
    }
    objectives.sort_by_key(|(i, _)| *i);
    constraints.sort_by_key(|(i, _)| *i);
    for (k, (i, _)) in objectives.iter().enumerate() {
        if *i != k + 1 {
            return Err(Error::InvalidProblem(format!(
                "objective indices must be 1..{m} without gaps"
            )));
        }
    }
    let lo = lo.ok_or(Error::InvalidProblem("missing domain lo".into()))?;
    let hi = hi.ok_or(Error::InvalidProblem("missing domain hi".into()))?;
    if lo.len() != n || hi.len() != n {
        return Err(Error::InvalidProblem(format!(
            "domain vectors must have length n = {n}"
        )));
    }
    let problem = ProblemDefinition {
        name: name.unwrap_or_else(|| "unnamed".into()),
        n,
        m,
        objectives: objectives.into_iter().map(|(_, e)| e).collect(),
        constraints: constraints.into_iter().map(|(_, e)| e).collect(),
        domain: Subregion::new(SubregionId(0), lo, hi, true)?,
        known_front: None,
    };
    problem.validate()?;
    Ok(problem)
}

/// Loads a problem definition from a file.
pub fn load_problem(path: &std::path::Path) -> Result<ProblemDefinition> {
    let text = std::fs::read_to_string(path)?;
    load_problem_str(&text)
}

/// Brute-force nondominated set of the feasible grid of a low-dimensional
/// problem, used as a test oracle for the Pareto front.
#[derive(Debug, Clone)]
pub struct GridParetoOracle {
    pub resolution: usize,
    /// Nondominated grid images with their preimages.
    pub front: Vec<ObjectiveVector>,
}

impl GridParetoOracle {
    pub fn front_values(&self) -> Vec<Vec<f64>> {
        self.front.iter().map(|e| e.values.clone()).collect()
    }
}

/// Evaluates `F` on the full grid of feasible points and keeps the
/// nondominated subset. Guarded to `n <= 3`.
pub fn grid_oracle(problem: &ProblemDefinition, resolution: usize) -> Result<GridParetoOracle> {
    if problem.n > 3 {
        return Err(Error::ResourceGuard(format!(
            "grid oracle supports n <= 3, problem has n = {}",
            problem.n
        )));
    }
    if resolution < 2 {
        return Err(Error::InvalidConfig("grid resolution must be >= 2".into()));
    }
    let n = problem.n;
    let lo = &problem.domain.lo;
    let hi = &problem.domain.hi;
    let mut points = Vec::new();
    let mut index = vec![0usize; n];
    loop {
        let x: Vec<f64> = (0..n)
            .map(|i| lo[i] + (hi[i] - lo[i]) * index[i] as f64 / (resolution - 1) as f64)
            .collect();
        if problem.is_feasible(&x, 0.0)? {
            let f = problem.evaluate(&x)?;
            points.push(ObjectiveVector {
                values: f,
                origin_box: None,
                preimage: Some(x),
            });
        }
        // advance the mixed-radix counter
        let mut dim = 0;
        loop {
            if dim == n {
                let archive = nondominated_filter(points);
                return Ok(GridParetoOracle {
                    resolution,
                    front: archive.entries().to_vec(),
                });
            }
            index[dim] += 1;
            if index[dim] < resolution {
                break;
            }
            index[dim] = 0;
            dim += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn builtin_t51_shape() {
        let p = builtin("t51", None).unwrap();
        assert_eq!((p.n, p.m), (2, 2));
        assert_eq!(p.domain.lo, vec![0.0, 0.0]);
        assert_eq!(p.domain.hi, vec![2.0, 2.0]);
        assert!(p.constraints.is_empty());
    }

    #[test]
    fn builtin_zdt2_shape() {
        let p = builtin("zdt2", Some(10)).unwrap();
        assert_eq!((p.n, p.m), (10, 2));
        // Pareto set slice: x1 free, the rest zero; there g = 1 and the
        // front is f2 = 1 - f1^2
        for t in [0.0, 0.25, 0.5, 1.0] {
            let mut x = vec![0.0; 10];
            x[0] = t;
            let f = p.evaluate(&x).unwrap();
            assert_relative_eq!(f[0], t);
            assert_relative_eq!(f[1], 1.0 - t * t, max_relative = 1e-12);
        }
    }

    #[test]
    fn builtin_t56_shape() {
        let p = builtin("t56", None).unwrap();
        assert_eq!((p.n, p.m), (2, 2));
        assert_eq!(p.constraints.len(), 2);
        // F is the identity
        assert_relative_eq!(p.evaluate(&[0.3, 0.9]).unwrap()[0], 0.3);
        assert_relative_eq!(p.evaluate(&[0.3, 0.9]).unwrap()[1], 0.9);
    }

    #[test]
    fn t52_individual_minimizers() {
        let p = builtin("t52", None).unwrap();
        let c = 1.0 / 3f64.sqrt();
        assert_eq!(p.objectives[0].eval(&[c, c, c]).unwrap(), 0.0);
        assert_eq!(p.objectives[1].eval(&[-c, -c, -c]).unwrap(), 0.0);
    }

    #[test]
    fn t54_objectives_evaluate() {
        let p = builtin("t54", Some(4)).unwrap();
        let f = p.evaluate(&[0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(f[0], 0.0);
        // at zero: w_j = 0.01 for j <= 3 and 0.01 for the exp(-z/15) branch
        assert_relative_eq!(f[1], 1.0 - 4.0 * (1.0 - 0.01), max_relative = 1e-12);
    }

    #[test]
    fn unknown_name_is_rejected() {
        let err = builtin("t99", None).unwrap_err();
        assert!(err.to_string().contains("t51"));
    }

    #[test]
    fn round_trip_serialization() {
        for name in builtin_names() {
            let p = builtin(name, None).unwrap();
            let text = p.to_problem_text();
            let q = load_problem_str(&text).unwrap();
            assert_eq!(p.objectives, q.objectives, "{name}");
            assert_eq!(p.constraints, q.constraints, "{name}");
            assert_eq!(p.domain.lo, q.domain.lo, "{name}");
            assert_eq!(p.domain.hi, q.domain.hi, "{name}");
            assert_eq!(p.name, q.name);
        }
    }

    #[test]
    fn out_of_range_variable_is_an_error() {
        let text = "\
[problem] name=bad, n=2, m=2
[objective 1] expr=x1
[objective 2] expr=x5
[domain] lo=0 0, hi=1 1
";
        let err = load_problem_str(text).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_objectives_is_an_error() {
        let text = "\
[problem] name=bad, n=2, m=2
[domain] lo=0 0, hi=1 1
";
        assert!(matches!(
            load_problem_str(text),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn grid_oracle_line_front() {
        // F = (x, 1-x) on [0,1]: every grid image is nondominated
        let text = "\
[problem] name=line, n=1, m=2
[objective 1] expr=x1
[objective 2] expr=(- 1 x1)
[domain] lo=0, hi=1
";
        let p = load_problem_str(text).unwrap();
        let oracle = grid_oracle(&p, 101).unwrap();
        assert_eq!(oracle.front.len(), 101);
        for f in oracle.front_values() {
            assert_relative_eq!(f[0] + f[1], 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn grid_oracle_t51_two_segments() {
        let p = builtin("t51", None).unwrap();
        let oracle = grid_oracle(&p, 201).unwrap();
        let front = oracle.front_values();
        // one segment joins (0,2)-(1,1), the other approaches (1.5,1)-(2,0.5)
        for f in &front {
            let on_first = f[0] <= 1.0 + 1e-9 && (f[1] - (2.0 - f[0])).abs() < 1e-9;
            let on_second = f[0] > 1.5 && (f[1] - (2.5 - f[0])).abs() < 1e-9;
            assert!(on_first || on_second, "front point {f:?} off both segments");
        }
        assert!(front.iter().any(|f| f[0] == 0.0 && f[1] == 2.0));
        assert!(front.iter().any(|f| f[0] == 1.0 && f[1] == 1.0));
        assert!(front.iter().any(|f| f[0] == 2.0 && (f[1] - 0.5).abs() < 1e-9));
    }

    #[test]
    fn grid_oracle_t56_front_is_feasible() {
        let p = builtin("t56", None).unwrap();
        let oracle = grid_oracle(&p, 101).unwrap();
        assert!(!oracle.front.is_empty());
        for e in &oracle.front {
            let x = e.preimage.as_ref().unwrap();
            assert!(p.is_feasible(x, 0.0).unwrap());
        }
    }

    #[test]
    fn grid_oracle_resolution_consistency() {
        let p = builtin("t51", None).unwrap();
        let coarse = grid_oracle(&p, 51).unwrap();
        let fine = grid_oracle(&p, 101).unwrap();
        let d = crate::dominance::hausdorff(&coarse.front_values(), &fine.front_values()).unwrap();
        let cell = 2.0 / 50.0;
        let diameter = (2.0f64 * cell * cell).sqrt();
        assert!(d < diameter, "hausdorff {d} vs diameter {diameter}");
    }

    #[test]
    fn grid_oracle_guards_dimension() {
        let p = builtin("zdt2", Some(10)).unwrap();
        assert!(matches!(
            grid_oracle(&p, 11),
            Err(Error::ResourceGuard(_))
        ));
    }
}
