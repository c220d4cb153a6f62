//! Expression trees for objectives and constraints: exact evaluation, natural
//! interval extension, symbolic differentiation, Lipschitz constant
//! estimation, and the interval feasibility test.
//!
//! Nonsmooth nodes (`Abs`, `Min`, `Max`) differentiate to sign/selector forms
//! whose interval extensions enclose the generalized gradient, so the
//! Lipschitz machinery stays valid on nonsmooth instances.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::Subregion;
use crate::interval::{Interval, IntervalVector};

/// A differentiable-almost-everywhere scalar expression over variables
/// `x1..xn` (0-based indices internally).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power with the tight even-power interval rule.
    Pow(Box<Expr>, i32),
    /// Real power for nonnegative bases (e.g. exponent 2.5); differentiating
    /// it keeps gradient enclosures finite on boxes touching zero, which an
    /// exp/log or sqrt composition cannot do.
    Powf(Box<Expr>, f64),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Atan(Box<Expr>),
    Sqrt(Box<Expr>),
    Abs(Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Generalized derivative of `Abs`: -1 / 0 / +1, hulled to `[-1, 1]` on
    /// intervals straddling zero.
    Sign(Box<Expr>),
    /// Branch selector produced by differentiating `Min`/`Max`: evaluates
    /// `on_lt` where `lhs < rhs` and `on_gt` where `lhs > rhs`; the interval
    /// extension hulls both branches when the comparison is undecided.
    Select {
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        on_lt: Box<Expr>,
        on_gt: Box<Expr>,
    },
}

fn finite(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

impl Expr {
    /// Exact arithmetic evaluation at a point.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => {
                if *i >= x.len() {
                    return Err(Error::DimensionMismatch {
                        expected: i + 1,
                        got: x.len(),
                    });
                }
                x[*i]
            }
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let d = b.eval(x)?;
                if d == 0.0 {
                    return Err(Error::Domain("division by zero".into()));
                }
                a.eval(x)? / d
            }
            Expr::Pow(a, k) => {
                let base = a.eval(x)?;
                if *k < 0 && base == 0.0 {
                    return Err(Error::Domain("negative power of zero".into()));
                }
                base.powi(*k)
            }
            Expr::Powf(a, r) => {
                let base = a.eval(x)?;
                if base < 0.0 {
                    return Err(Error::Domain(format!("powf of negative base {base}")));
                }
                base.powf(*r)
            }
            Expr::Exp(a) => a.eval(x)?.exp(),
            Expr::Sin(a) => a.eval(x)?.sin(),
            Expr::Cos(a) => a.eval(x)?.cos(),
            Expr::Atan(a) => {
                // atan(u/v) takes its limit value when v = 0: the enclosure
                // used on intervals is the matching [-pi/2, pi/2] hull.
                if let Expr::Div(u, v) = a.as_ref() {
                    let den = v.eval(x)?;
                    if den == 0.0 {
                        let num = u.eval(x)?;
                        return Ok(if num > 0.0 {
                            FRAC_PI_2
                        } else if num < 0.0 {
                            -FRAC_PI_2
                        } else {
                            0.0
                        });
                    }
                }
                a.eval(x)?.atan()
            }
            Expr::Sqrt(a) => {
                let v = a.eval(x)?;
                if v < 0.0 {
                    return Err(Error::Domain(format!("sqrt of negative value {v}")));
                }
                v.sqrt()
            }
            Expr::Abs(a) => a.eval(x)?.abs(),
            Expr::Min(a, b) => a.eval(x)?.min(b.eval(x)?),
            Expr::Max(a, b) => a.eval(x)?.max(b.eval(x)?),
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Sign(a) => {
                let v = a.eval(x)?;
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Expr::Select {
                lhs,
                rhs,
                on_lt,
                on_gt,
            } => {
                if lhs.eval(x)? <= rhs.eval(x)? {
                    on_lt.eval(x)?
                } else {
                    on_gt.eval(x)?
                }
            }
        };
        finite(v, "expression evaluation")
    }

    /// Natural interval extension, node by node. Inclusion isotonic: the
    /// result encloses `f(x)` for every `x` in the domain vector.
    pub fn eval_interval(&self, domains: &IntervalVector) -> Result<Interval> {
        let v = match self {
            Expr::Const(c) => Interval::point(*c),
            Expr::Var(i) => {
                if *i >= domains.len() {
                    return Err(Error::DimensionMismatch {
                        expected: i + 1,
                        got: domains.len(),
                    });
                }
                domains.component(*i)
            }
            Expr::Add(a, b) => a.eval_interval(domains)? + b.eval_interval(domains)?,
            Expr::Sub(a, b) => a.eval_interval(domains)? - b.eval_interval(domains)?,
            Expr::Mul(a, b) => a.eval_interval(domains)? * b.eval_interval(domains)?,
            Expr::Div(a, b) => a.eval_interval(domains)?.div(b.eval_interval(domains)?)?,
            Expr::Pow(a, k) => a.eval_interval(domains)?.powi(*k)?,
            Expr::Powf(a, r) => a.eval_interval(domains)?.powf(*r)?,
            Expr::Exp(a) => a.eval_interval(domains)?.exp(),
            Expr::Sin(a) => a.eval_interval(domains)?.sin(),
            Expr::Cos(a) => a.eval_interval(domains)?.cos(),
            Expr::Atan(a) => {
                if let Expr::Div(u, v) = a.as_ref() {
                    let den = v.eval_interval(domains)?;
                    if den.contains(0.0) {
                        // Unbounded quotient: atan still lands in the full
                        // [-pi/2, pi/2] range, which keeps the enclosure sound.
                        let _ = u.eval_interval(domains)?;
                        return Ok(Interval::new(-FRAC_PI_2, FRAC_PI_2));
                    }
                }
                a.eval_interval(domains)?.atan()
            }
            Expr::Sqrt(a) => a.eval_interval(domains)?.sqrt()?,
            Expr::Abs(a) => a.eval_interval(domains)?.abs(),
            Expr::Min(a, b) => a.eval_interval(domains)?.min_i(b.eval_interval(domains)?),
            Expr::Max(a, b) => a.eval_interval(domains)?.max_i(b.eval_interval(domains)?),
            Expr::Neg(a) => -a.eval_interval(domains)?,
            Expr::Sign(a) => a.eval_interval(domains)?.sign(),
            Expr::Select {
                lhs,
                rhs,
                on_lt,
                on_gt,
            } => {
                let l = lhs.eval_interval(domains)?;
                let r = rhs.eval_interval(domains)?;
                if l.hi < r.lo {
                    on_lt.eval_interval(domains)?
                } else if r.hi < l.lo {
                    on_gt.eval_interval(domains)?
                } else {
                    on_lt
                        .eval_interval(domains)?
                        .hull(on_gt.eval_interval(domains)?)
                }
            }
        };
        if !v.is_finite() {
            return Err(Error::NonFinite("interval evaluation"));
        }
        Ok(v)
    }

    /// Natural interval extension padded by `factor * width` on each side.
    /// No outward rounding is performed anywhere; this knob (default 0
    /// throughout the solver) buys a safety margin when one is wanted.
    pub fn eval_interval_inflated(
        &self,
        domains: &IntervalVector,
        factor: f64,
    ) -> Result<Interval> {
        Ok(self.eval_interval(domains)?.inflate(factor))
    }

    /// Partial derivative with respect to variable `i`, with light constant
    /// folding to keep gradient trees small.
    pub fn derivative(&self, i: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(j) => Expr::Const(if *j == i { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => add(a.derivative(i), b.derivative(i)),
            Expr::Sub(a, b) => sub(a.derivative(i), b.derivative(i)),
            Expr::Mul(a, b) => add(
                mul(a.derivative(i), (**b).clone()),
                mul((**a).clone(), b.derivative(i)),
            ),
            Expr::Div(a, b) => {
                // (a'b - ab') / b^2
                let num = sub(
                    mul(a.derivative(i), (**b).clone()),
                    mul((**a).clone(), b.derivative(i)),
                );
                div(num, Expr::Pow(b.clone(), 2))
            }
            Expr::Pow(a, k) => mul(
                mul(Expr::Const(f64::from(*k)), Expr::Pow(a.clone(), k - 1)),
                a.derivative(i),
            ),
            Expr::Powf(a, r) => mul(
                mul(Expr::Const(*r), Expr::Powf(a.clone(), r - 1.0)),
                a.derivative(i),
            ),
            Expr::Exp(a) => mul(Expr::Exp(a.clone()), a.derivative(i)),
            Expr::Sin(a) => mul(Expr::Cos(a.clone()), a.derivative(i)),
            Expr::Cos(a) => neg(mul(Expr::Sin(a.clone()), a.derivative(i))),
            Expr::Atan(a) => div(
                a.derivative(i),
                add(Expr::Const(1.0), Expr::Pow(a.clone(), 2)),
            ),
            Expr::Sqrt(a) => div(
                a.derivative(i),
                mul(Expr::Const(2.0), Expr::Sqrt(a.clone())),
            ),
            Expr::Abs(a) => mul(Expr::Sign(a.clone()), a.derivative(i)),
            Expr::Min(a, b) => select((**a).clone(), (**b).clone(), a.derivative(i), b.derivative(i)),
            Expr::Max(a, b) => select((**a).clone(), (**b).clone(), b.derivative(i), a.derivative(i)),
            Expr::Neg(a) => neg(a.derivative(i)),
            // Zero almost everywhere; only reachable through second-order use.
            Expr::Sign(_) => Expr::Const(0.0),
            Expr::Select {
                lhs,
                rhs,
                on_lt,
                on_gt,
            } => select(
                (**lhs).clone(),
                (**rhs).clone(),
                on_lt.derivative(i),
                on_gt.derivative(i),
            ),
        }
    }

    /// Gradient as `n` expressions.
    pub fn grad(&self, n: usize) -> Vec<Expr> {
        (0..n).map(|i| self.derivative(i)).collect()
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Min(a, b)
            | Expr::Max(a, b) => opt_max(a.max_var(), b.max_var()),
            Expr::Pow(a, _)
            | Expr::Powf(a, _)
            | Expr::Exp(a)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Atan(a)
            | Expr::Sqrt(a)
            | Expr::Abs(a)
            | Expr::Neg(a)
            | Expr::Sign(a) => a.max_var(),
            Expr::Select {
                lhs,
                rhs,
                on_lt,
                on_gt,
            } => opt_max(
                opt_max(lhs.max_var(), rhs.max_var()),
                opt_max(on_lt.max_var(), on_gt.max_var()),
            ),
        }
    }

    /// True when `x` sits at distance > `margin` from every kink or domain
    /// edge of the expression, so finite differences are trustworthy there.
    pub fn smooth_at(&self, x: &[f64], margin: f64) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.smooth_at(x, margin) && b.smooth_at(x, margin)
            }
            Expr::Div(a, b) => {
                a.smooth_at(x, margin)
                    && b.smooth_at(x, margin)
                    && b.eval(x).map(|v| v.abs() > margin).unwrap_or(false)
            }
            Expr::Pow(a, k) => {
                a.smooth_at(x, margin)
                    && (*k >= 0 || a.eval(x).map(|v| v.abs() > margin).unwrap_or(false))
            }
            Expr::Powf(a, r) => {
                a.smooth_at(x, margin)
                    && (*r >= 2.0 || a.eval(x).map(|v| v > margin).unwrap_or(false))
            }
            Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Atan(a) | Expr::Neg(a) => {
                a.smooth_at(x, margin)
            }
            Expr::Sqrt(a) => {
                a.smooth_at(x, margin) && a.eval(x).map(|v| v > margin).unwrap_or(false)
            }
            Expr::Abs(a) | Expr::Sign(a) => {
                a.smooth_at(x, margin) && a.eval(x).map(|v| v.abs() > margin).unwrap_or(false)
            }
            Expr::Min(a, b) | Expr::Max(a, b) => {
                a.smooth_at(x, margin)
                    && b.smooth_at(x, margin)
                    && match (a.eval(x), b.eval(x)) {
                        (Ok(u), Ok(v)) => (u - v).abs() > margin,
                        _ => false,
                    }
            }
            Expr::Select {
                lhs,
                rhs,
                on_lt,
                on_gt,
            } => {
                lhs.smooth_at(x, margin)
                    && rhs.smooth_at(x, margin)
                    && on_lt.smooth_at(x, margin)
                    && on_gt.smooth_at(x, margin)
                    && match (lhs.eval(x), rhs.eval(x)) {
                        (Ok(u), Ok(v)) => (u - v).abs() > margin,
                        _ => false,
                    }
            }
        }
    }
}

fn opt_max(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

// Smart constructors used by differentiation: fold additive/multiplicative
// identities without reassociating anything.
fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == 1.0)
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        b
    } else if is_zero(&b) {
        a
    } else {
        Expr::Add(Box::new(a), Box::new(b))
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        a
    } else if is_zero(&a) {
        neg(b)
    } else {
        Expr::Sub(Box::new(a), Box::new(b))
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        Expr::Const(0.0)
    } else if is_one(&a) {
        b
    } else if is_one(&b) {
        a
    } else {
        Expr::Mul(Box::new(a), Box::new(b))
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        Expr::Const(0.0)
    } else if is_one(&b) {
        a
    } else {
        Expr::Div(Box::new(a), Box::new(b))
    }
}

fn neg(a: Expr) -> Expr {
    if is_zero(&a) {
        a
    } else {
        Expr::Neg(Box::new(a))
    }
}

fn select(lhs: Expr, rhs: Expr, on_lt: Expr, on_gt: Expr) -> Expr {
    if on_lt == on_gt {
        on_lt
    } else {
        Expr::Select {
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            on_lt: Box::new(on_lt),
            on_gt: Box::new(on_gt),
        }
    }
}

/// Lipschitz constants of an expression on a subregion with respect to the l1
/// and l-infinity norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzPair {
    /// Upper bound on `sup ||grad f||_1`.
    pub l1: f64,
    /// Upper bound on `sup ||grad f||_inf`.
    pub linf: f64,
}

/// Estimates Lipschitz constants from the natural interval extension of the
/// gradient on the subregion: `m_i = mag(grad_i(B))`, `l1 = sum m_i`,
/// `linf = max m_i`.
pub fn lipschitz_constants(expr: &Expr, region: &Subregion) -> Result<LipschitzPair> {
    let grads = expr.grad(region.dim());
    lipschitz_from_grads(&grads, region)
}

/// Same as [`lipschitz_constants`] with a precomputed gradient (the engine
/// differentiates each objective once per run).
pub fn lipschitz_from_grads(grads: &[Expr], region: &Subregion) -> Result<LipschitzPair> {
    let domains = region.to_intervals();
    let mut l1 = 0.0;
    let mut linf: f64 = 0.0;
    for g in grads {
        let m = g.eval_interval(&domains)?.mag();
        l1 += m;
        linf = linf.max(m);
    }
    Ok(LipschitzPair { l1, linf })
}

/// Outcome of the interval feasibility test on a subregion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// Some constraint is provably violated everywhere in the subregion.
    Infeasible,
    /// Every constraint provably holds everywhere in the subregion.
    Feasible,
    Undetermined,
}

/// Interval feasibility test for constraints `g_j(x) >= 0`.
pub fn feasibility_test(constraints: &[Expr], region: &Subregion) -> Result<Feasibility> {
    let domains = region.to_intervals();
    let mut all_feasible = true;
    for g in constraints {
        let range = g.eval_interval(&domains)?;
        if range.hi < 0.0 {
            return Ok(Feasibility::Infeasible);
        }
        if range.lo < 0.0 {
            all_feasible = false;
        }
    }
    Ok(if all_feasible {
        Feasibility::Feasible
    } else {
        Feasibility::Undetermined
    })
}

impl fmt::Display for Expr {
    /// Prefix notation accepted back by [`parse_expr`], e.g. `(+ (* x1 x2) 1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Add(a, b) => write!(f, "(+ {a} {b})"),
            Expr::Sub(a, b) => write!(f, "(- {a} {b})"),
            Expr::Mul(a, b) => write!(f, "(* {a} {b})"),
            Expr::Div(a, b) => write!(f, "(/ {a} {b})"),
            Expr::Pow(a, k) => write!(f, "(pow {a} {k})"),
            Expr::Powf(a, r) => write!(f, "(powf {a} {r})"),
            Expr::Exp(a) => write!(f, "(exp {a})"),
            Expr::Sin(a) => write!(f, "(sin {a})"),
            Expr::Cos(a) => write!(f, "(cos {a})"),
            Expr::Atan(a) => write!(f, "(atan {a})"),
            Expr::Sqrt(a) => write!(f, "(sqrt {a})"),
            Expr::Abs(a) => write!(f, "(abs {a})"),
            Expr::Min(a, b) => write!(f, "(min {a} {b})"),
            Expr::Max(a, b) => write!(f, "(max {a} {b})"),
            Expr::Neg(a) => write!(f, "(neg {a})"),
            Expr::Sign(a) => write!(f, "(sign {a})"),
            Expr::Select {
                lhs,
                rhs,
                on_lt,
                on_gt,
            } => write!(f, "(select {lhs} {rhs} {on_lt} {on_gt})"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

fn tokenize(src: &str, base_line: usize, base_column: usize) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut line = base_line;
    let mut column = base_column;
    let mut current = String::new();
    let mut start = (line, column);
    for ch in src.chars() {
        let is_paren = ch == '(' || ch == ')';
        if ch.is_whitespace() || is_paren {
            if !current.is_empty() {
                tokens.push(Token {
                    text: std::mem::take(&mut current),
                    line: start.0,
                    column: start.1,
                });
            }
            if is_paren {
                tokens.push(Token {
                    text: ch.to_string(),
                    line,
                    column,
                });
            }
        } else {
            if current.is_empty() {
                start = (line, column);
            }
            current.push(ch);
        }
        if ch == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    if !current.is_empty() {
        tokens.push(Token {
            text: current,
            line: start.0,
            column: start.1,
        });
    }
    tokens
}

fn parse_err<T>(tok: &Token, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: tok.line,
        column: tok.column,
        message: message.into(),
    })
}

struct ExprParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    n: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn atom(&mut self, tok: &Token) -> Result<Expr> {
        if let Some(rest) = tok.text.strip_prefix('x') {
            if let Ok(idx) = rest.parse::<usize>() {
                if idx == 0 {
                    return parse_err(tok, "variable indices start at x1");
                }
                if idx > self.n {
                    return parse_err(
                        tok,
                        format!("variable x{idx} out of range for dimension {}", self.n),
                    );
                }
                return Ok(Expr::Var(idx - 1));
            }
        }
        match tok.text.parse::<f64>() {
            Ok(v) => Ok(Expr::Const(v)),
            Err(_) => parse_err(tok, format!("expected number or variable, got `{}`", tok.text)),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let tok = match self.next() {
            Some(t) => t,
            None => {
                return Err(Error::Parse {
                    line: 0,
                    column: 0,
                    message: "unexpected end of expression".into(),
                })
            }
        };
        if tok.text == ")" {
            return parse_err(tok, "unexpected `)`");
        }
        if tok.text != "(" {
            return self.atom(tok);
        }
        let op = match self.next() {
            Some(t) => t,
            None => return parse_err(tok, "unterminated `(`"),
        };
        let mut args = Vec::new();
        while let Some(t) = self.peek() {
            if t.text == ")" {
                break;
            }
            args.push(self.expr()?);
        }
        match self.next() {
            Some(t) if t.text == ")" => {}
            _ => return parse_err(op, "missing `)`"),
        }
        self.combine(op, args)
    }

    fn combine(&mut self, op: &Token, mut args: Vec<Expr>) -> Result<Expr> {
        let need = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                parse_err(op, format!("`{}` takes {k} argument(s), got {}", op.text, args.len()))
            }
        };
        let fold = |args: Vec<Expr>, f: fn(Expr, Expr) -> Expr| {
            let mut it = args.into_iter();
            let first = it.next().unwrap();
            it.fold(first, f)
        };
        match op.text.as_str() {
            "+" => {
                if args.len() < 2 {
                    return parse_err(op, "`+` takes at least 2 arguments");
                }
                Ok(fold(args, |a, b| Expr::Add(Box::new(a), Box::new(b))))
            }
            "*" => {
                if args.len() < 2 {
                    return parse_err(op, "`*` takes at least 2 arguments");
                }
                Ok(fold(args, |a, b| Expr::Mul(Box::new(a), Box::new(b))))
            }
            "-" => match args.len() {
                1 => Ok(Expr::Neg(Box::new(args.remove(0)))),
                0 => parse_err(op, "`-` needs arguments"),
                _ => Ok(fold(args, |a, b| Expr::Sub(Box::new(a), Box::new(b)))),
            },
            "/" => {
                need(2)?;
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                Ok(Expr::Div(Box::new(a), Box::new(b)))
            }
            "pow" => {
                need(2)?;
                let e = args.pop().unwrap();
                let base = args.pop().unwrap();
                match e {
                    Expr::Const(c) if c.fract() == 0.0 && c.abs() <= f64::from(i32::MAX) => {
                        Ok(Expr::Pow(Box::new(base), c as i32))
                    }
                    _ => parse_err(op, "`pow` needs an integer exponent (use `powf` otherwise)"),
                }
            }
            "powf" => {
                need(2)?;
                let e = args.pop().unwrap();
                let base = args.pop().unwrap();
                match e {
                    Expr::Const(c) => Ok(Expr::Powf(Box::new(base), c)),
                    _ => parse_err(op, "`powf` needs a numeric exponent"),
                }
            }
            "min" => {
                need(2)?;
                let b = args.pop().unwrap();
                Ok(Expr::Min(Box::new(args.pop().unwrap()), Box::new(b)))
            }
            "max" => {
                need(2)?;
                let b = args.pop().unwrap();
                Ok(Expr::Max(Box::new(args.pop().unwrap()), Box::new(b)))
            }
            "exp" | "sin" | "cos" | "atan" | "sqrt" | "abs" | "neg" | "sign" => {
                need(1)?;
                let a = Box::new(args.pop().unwrap());
                Ok(match op.text.as_str() {
                    "exp" => Expr::Exp(a),
                    "sin" => Expr::Sin(a),
                    "cos" => Expr::Cos(a),
                    "atan" => Expr::Atan(a),
                    "sqrt" => Expr::Sqrt(a),
                    "abs" => Expr::Abs(a),
                    "neg" => Expr::Neg(a),
                    _ => Expr::Sign(a),
                })
            }
            other => parse_err(op, format!("unknown operator `{other}`")),
        }
    }
}

/// Parses a prefix-notation expression over variables `x1..x<n>`.
pub fn parse_expr(src: &str, n: usize) -> Result<Expr> {
    parse_expr_at(src, n, 1, 1)
}

/// Like [`parse_expr`] with an explicit source position for error reports
/// (used by the problem-file loader).
pub fn parse_expr_at(src: &str, n: usize, base_line: usize, base_column: usize) -> Result<Expr> {
    let tokens = tokenize(src, base_line, base_column);
    if tokens.is_empty() {
        return Err(Error::Parse {
            line: base_line,
            column: base_column,
            message: "empty expression".into(),
        });
    }
    let mut parser = ExprParser {
        tokens: &tokens,
        pos: 0,
        n,
    };
    let expr = parser.expr()?;
    if let Some(extra) = parser.peek() {
        return parse_err(extra, format!("trailing input `{}`", extra.text));
    }
    Ok(expr)
}
