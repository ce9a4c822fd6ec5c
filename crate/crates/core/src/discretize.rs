//! Assembly of the collocation pencil `(A, B)` and boundary handling.
//!
//! The operator is collocated in the expanded form `-p u'' - p' u' + q u`,
//! optionally multiplied through by `m(x)`. On a logarithmic grid each row is
//! additionally multiplied by `x²`, which keeps the entries bounded near a
//! small left endpoint.

use faer::Mat;

use crate::error::{invalid, Result, SlError};
use crate::grid::{cheb_diff, log_graded, map_matrices, sinc_d2_points, AffineMap};
use crate::problem::{BoundaryCondition, SLProblem, Side};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Chebyshev,
    Sinc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// Chebyshev points mapped affinely onto the domain.
    Linear,
    /// Chebyshev points in `s = ln x`; needs `0 < a`.
    Logarithmic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcStrategy {
    /// Delete the boundary row and column (homogeneous Dirichlet).
    Remove,
    /// Overwrite the boundary row with `f u + g u'`, zero `B` row.
    ReplaceRow,
    /// Collocate the degenerate equation at an endpoint where `p = 0`.
    CollocateEndpoint,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DiscretizationPlan<T> {
    pub method: Method,
    /// Chebyshev point count, or total sinc point count.
    pub n: usize,
    /// Sinc step; `None` for Chebyshev plans.
    pub h: Option<T>,
    /// Effective interval. For sinc plans, the span of the nodes.
    pub domain: (T, T),
    pub grading: Grading,
    pub bc_left: BcStrategy,
    pub bc_right: BcStrategy,
}

impl<T: Scalar> DiscretizationPlan<T> {
    /// Chebyshev plan on `domain` with Dirichlet removal at both ends.
    pub fn chebyshev(n: usize, domain: (T, T)) -> Self {
        Self {
            method: Method::Chebyshev,
            n,
            h: None,
            domain,
            grading: Grading::Linear,
            bc_left: BcStrategy::Remove,
            bc_right: BcStrategy::Remove,
        }
    }

    /// Sinc plan with `n` points of spacing `h` centred at `center`.
    pub fn sinc(n: usize, h: T, center: T) -> Self {
        let half = T::from_count(n.saturating_sub(1)) * h / T::lit(2.0);
        Self {
            method: Method::Sinc,
            n,
            h: Some(h),
            domain: (center - half, center + half),
            grading: Grading::Linear,
            bc_left: BcStrategy::Remove,
            bc_right: BcStrategy::Remove,
        }
    }

    pub fn with_strategies(mut self, left: BcStrategy, right: BcStrategy) -> Self {
        self.bc_left = left;
        self.bc_right = right;
        self
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        if self.method == Method::Sinc {
            let h = self.h.unwrap_or(T::one());
            return Self::sinc(n, h, self.center());
        }
        self.n = n;
        self
    }

    pub fn with_domain(mut self, a: T, b: T) -> Self {
        self.domain = (a, b);
        self
    }

    pub fn strategy(&self, side: Side) -> BcStrategy {
        match side {
            Side::Left => self.bc_left,
            Side::Right => self.bc_right,
        }
    }

    pub fn center(&self) -> T {
        (self.domain.0 + self.domain.1) / T::lit(2.0)
    }

    fn check(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return invalid(format!("plan domain [{a}, {b}] must be finite with a < b"));
        }
        match self.method {
            Method::Chebyshev => {
                if self.h.is_some() {
                    return invalid("Chebyshev plans take no sinc step");
                }
                if self.n < 3 {
                    return invalid(format!("Chebyshev plan needs n >= 3, got {}", self.n));
                }
                if self.grading == Grading::Logarithmic && !(a > T::zero()) {
                    return invalid("logarithmic grading needs a positive left end");
                }
            }
            Method::Sinc => {
                match self.h {
                    Some(h) if h > T::zero() => {}
                    _ => return invalid("sinc plans need a positive step h"),
                }
                if self.n < 2 {
                    return invalid("sinc plan needs at least 2 points");
                }
                if self.bc_left != BcStrategy::Remove || self.bc_right != BcStrategy::Remove {
                    return invalid("sinc plans only support implicit Dirichlet conditions (Remove)");
                }
                if self.grading != Grading::Linear {
                    return invalid("sinc plans are uniform");
                }
            }
        }
        Ok(())
    }
}

/// Discrete pencil with its node bookkeeping.
#[derive(Clone, Debug)]
pub struct Pencil<T: Scalar> {
    pub a: Mat<T>,
    pub b: Mat<T>,
    /// Nodes of the retained unknowns (pencil order).
    pub nodes: Vec<T>,
    /// All grid nodes, descending for Chebyshev plans.
    pub full_nodes: Vec<T>,
    /// Full-grid index of each pencil unknown.
    pub retained: Vec<usize>,
    pub removed_indices: Vec<usize>,
    /// `(pencil row, description)` of rows overwritten by a boundary condition.
    pub replaced_rows: Vec<(usize, String)>,
    pub method: Method,
    pub grading: Grading,
}

impl<T: Scalar> Pencil<T> {
    pub fn size(&self) -> usize {
        self.a.nrows()
    }

    pub fn b_is_diagonal(&self) -> bool {
        let m = self.size();
        (0..m).all(|i| (0..m).all(|j| i == j || self.b[(i, j)] == T::zero()))
    }
}

/// Collocation row at a degenerate endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointRow<T> {
    /// Full-grid index of the endpoint.
    pub index: usize,
    /// Row of `A` over the full grid.
    pub a_row: Vec<T>,
    /// Diagonal entry of `B` (`r(e)`).
    pub b_diag: T,
}

struct Operators<T: Scalar> {
    nodes: Vec<T>,
    /// Row form of the second and first derivative terms: `x^k d^k/dx^k` on a
    /// logarithmic grid, plain `d^k/dx^k` otherwise.
    e2: Mat<T>,
    e1: Mat<T>,
    /// `x` on a logarithmic grid (so that `e1 / x = d/dx`), otherwise `1`.
    scale1: Vec<T>,
}

fn operators<T: Scalar>(plan: &DiscretizationPlan<T>) -> Result<Operators<T>> {
    let (a, b) = plan.domain;
    match plan.grading {
        Grading::Linear => {
            let g = map_matrices(&cheb_diff::<T>(plan.n, 2)?, &AffineMap::new(a, b)?)?;
            let n = g.n_points();
            Ok(Operators {
                nodes: g.nodes().to_vec(),
                e2: g.d2().expect("order 2").clone(),
                e1: g.d1().clone(),
                scale1: vec![T::one(); n],
            })
        }
        Grading::Logarithmic => {
            let g = log_graded::<T>(plan.n, a, b)?;
            let e2 = &g.ds2 - &g.ds1;
            Ok(Operators {
                scale1: g.nodes.clone(),
                nodes: g.nodes,
                e2,
                e1: g.ds1,
            })
        }
    }
}

fn side_index(n: usize, side: Side) -> usize {
    match side {
        Side::Right => 0,
        Side::Left => n - 1,
    }
}

fn eval_at<T: Scalar>(f: &(dyn Fn(T) -> T + Send + Sync), x: T, what: &str) -> Result<T> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SlError::SingularNode {
            x: x.to_f64().unwrap_or(f64::NAN),
            what: what.to_string(),
        })
    }
}

/// `p' ` at every node, obtained spectrally from samples of `p`.
fn p_prime<T: Scalar>(ops: &Operators<T>, p: &[T]) -> Vec<T> {
    let n = p.len();
    (0..n)
        .map(|i| {
            let s = (0..n).fold(T::zero(), |acc, j| acc + ops.e1[(i, j)] * p[j]);
            s / ops.scale1[i]
        })
        .collect()
}

fn sample_p<T: Scalar>(problem: &SLProblem<T>, nodes: &[T]) -> Result<Vec<T>> {
    nodes
        .iter()
        .map(|&x| eval_at(problem.p.as_ref(), x, "p"))
        .collect()
}

/// The degenerate-equation row `-p'(e) u'(e) + q(e) u(e)` at a Chebyshev
/// endpoint where `p(e) = 0`, with `B` entry `r(e)`.
pub fn endpoint_expand<T: Scalar>(
    problem: &SLProblem<T>,
    plan: &DiscretizationPlan<T>,
    endpoint: Side,
) -> Result<EndpointRow<T>> {
    plan.check()?;
    if plan.method != Method::Chebyshev {
        return invalid("endpoint collocation needs a Chebyshev plan");
    }
    let ops = operators(plan)?;
    let p = sample_p(problem, &ops.nodes)?;
    let dp = p_prime(&ops, &p);
    endpoint_row(problem, &ops, &p, &dp, endpoint)
}

fn endpoint_row<T: Scalar>(
    problem: &SLProblem<T>,
    ops: &Operators<T>,
    p: &[T],
    dp: &[T],
    side: Side,
) -> Result<EndpointRow<T>> {
    let n = ops.nodes.len();
    let i = side_index(n, side);
    let x = ops.nodes[i];
    if p[i].abs() > T::lit(1e-12) {
        return Err(SlError::NotDegenerate {
            side: side.to_string(),
            p_value: p[i].to_f64().unwrap_or(f64::NAN),
        });
    }
    if !dp[i].is_finite() {
        return Err(SlError::SingularNode {
            x: x.to_f64().unwrap_or(f64::NAN),
            what: "p' at a degenerate endpoint".into(),
        });
    }
    let (m, mq) = weights(problem, x)?;
    let rho = row_weight(ops, i);
    let a_row = (0..n)
        .map(|j| {
            let mut v = -m * dp[i] * ops.scale1[i] * ops.e1[(i, j)];
            if j == i {
                v = v + rho * mq;
            }
            v
        })
        .collect();
    let r = eval_at(problem.r.as_ref(), x, "r")?;
    Ok(EndpointRow {
        index: i,
        a_row,
        b_diag: rho * m * r,
    })
}

/// `(m(x), m(x) q(x))`; `(1, q(x))` without a multiplier.
fn weights<T: Scalar>(problem: &SLProblem<T>, x: T) -> Result<(T, T)> {
    match &problem.multiplier {
        Some(mul) => Ok((eval_at(mul.m.as_ref(), x, "m")?, eval_at(mul.mq.as_ref(), x, "m q")?)),
        None => Ok((T::one(), eval_at(problem.q.as_ref(), x, "q")?)),
    }
}

/// Extra row factor `x²` on a logarithmic grid.
fn row_weight<T: Scalar>(ops: &Operators<T>, i: usize) -> T {
    ops.scale1[i] * ops.scale1[i]
}

/// Assembles the pencil for `problem` under `plan`.
pub fn assemble<T: Scalar>(problem: &SLProblem<T>, plan: &DiscretizationPlan<T>) -> Result<Pencil<T>> {
    plan.check()?;
    match plan.method {
        Method::Chebyshev => assemble_cheb(problem, plan),
        Method::Sinc => assemble_sinc(problem, plan),
    }
}

fn assemble_sinc<T: Scalar>(problem: &SLProblem<T>, plan: &DiscretizationPlan<T>) -> Result<Pencil<T>> {
    if problem.multiplier.is_some() {
        return invalid("sinc plans do not support multiplied equations");
    }
    let h = plan.h.expect("checked");
    let grid = sinc_d2_points(plan.n, h, plan.center())?;
    let n = grid.n_points();
    let nodes = grid.nodes().to_vec();
    let mut q = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for &x in &nodes {
        let p = eval_at(problem.p.as_ref(), x, "p")?;
        if (p - T::one()).abs() > T::lit(1e-14) {
            return invalid(format!("sinc plans need p = 1, got p({x}) = {p}"));
        }
        q.push(eval_at(problem.q.as_ref(), x, "q")?);
        r.push(eval_at(problem.r.as_ref(), x, "r")?);
    }
    let d2 = grid.d2();
    let a = Mat::from_fn(n, n, |i, j| if i == j { q[i] - d2[(i, j)] } else { -d2[(i, j)] });
    let b = Mat::from_fn(n, n, |i, j| if i == j { r[i] } else { T::zero() });
    Ok(Pencil {
        a,
        b,
        nodes: nodes.clone(),
        full_nodes: nodes,
        retained: (0..n).collect(),
        removed_indices: vec![],
        replaced_rows: vec![],
        method: Method::Sinc,
        grading: Grading::Linear,
    })
}

fn assemble_cheb<T: Scalar>(problem: &SLProblem<T>, plan: &DiscretizationPlan<T>) -> Result<Pencil<T>> {
    let (a, b) = plan.domain;
    if !(a >= problem.a && b <= problem.b) {
        return invalid(format!(
            "plan domain [{a}, {b}] not inside the problem interval [{}, {}]",
            problem.a, problem.b
        ));
    }
    let ops = operators(plan)?;
    let n = ops.nodes.len();

    let mut removed = Vec::new();
    for side in [Side::Right, Side::Left] {
        if plan.strategy(side) == BcStrategy::Remove {
            match problem.bc(side) {
                BoundaryCondition::Dirichlet | BoundaryCondition::TruncatedDirichlet { .. } => {}
                BoundaryCondition::Robin { beta, .. } if *beta == T::zero() => {}
                other => {
                    return invalid(format!(
                        "Remove at the {side} end needs a Dirichlet condition, got '{}'",
                        other.describe()
                    ))
                }
            }
            removed.push(side_index(n, side));
        }
    }

    // p is needed at every node for the spectral derivative
    let p = sample_p(problem, &ops.nodes)?;
    let dp = p_prime(&ops, &p);

    let mut full_a = Mat::<T>::zeros(n, n);
    let mut b_diag = vec![T::zero(); n];
    let mut replaced = Vec::new();
    for i in 0..n {
        if removed.contains(&i) {
            continue;
        }
        let side = if i == 0 {
            Some(Side::Right)
        } else if i == n - 1 {
            Some(Side::Left)
        } else {
            None
        };
        match side.map(|s| (s, plan.strategy(s))) {
            Some((s, BcStrategy::CollocateEndpoint)) => {
                let row = endpoint_row(problem, &ops, &p, &dp, s)?;
                for j in 0..n {
                    full_a[(i, j)] = row.a_row[j];
                }
                b_diag[i] = row.b_diag;
            }
            Some((s, BcStrategy::ReplaceRow)) => {
                let bc = problem.bc(s);
                let x = ops.nodes[i];
                let (f, g) = bc.row_coefficients(x).ok_or_else(|| {
                    SlError::InvalidArgument(format!("ReplaceRow at the {s} end needs an explicit boundary condition"))
                })?;
                if !(f.is_finite() && g.is_finite()) {
                    return Err(SlError::SingularNode {
                        x: x.to_f64().unwrap_or(f64::NAN),
                        what: "boundary-condition coefficients".into(),
                    });
                }
                if f == T::zero() && g == T::zero() {
                    return Err(SlError::DegenerateBc { side: s.to_string() });
                }
                let gs = g / ops.scale1[i];
                for j in 0..n {
                    full_a[(i, j)] = gs * ops.e1[(i, j)];
                }
                full_a[(i, i)] = full_a[(i, i)] + f;
                replaced.push((i, bc.describe()));
            }
            _ => {
                let x = ops.nodes[i];
                let (m, mq) = weights(problem, x)?;
                let rho = row_weight(&ops, i);
                let c2 = -m * p[i];
                let c1 = -m * dp[i] * ops.scale1[i];
                for j in 0..n {
                    full_a[(i, j)] = c2 * ops.e2[(i, j)] + c1 * ops.e1[(i, j)];
                }
                full_a[(i, i)] = full_a[(i, i)] + rho * mq;
                let r = eval_at(problem.r.as_ref(), x, "r")?;
                b_diag[i] = rho * m * r;
            }
        }
    }

    let retained: Vec<usize> = (0..n).filter(|i| !removed.contains(i)).collect();
    let m = retained.len();
    let a_mat = Mat::from_fn(m, m, |i, j| full_a[(retained[i], retained[j])]);
    let b_mat = Mat::from_fn(m, m, |i, j| if i == j { b_diag[retained[i]] } else { T::zero() });
    let replaced_rows = replaced
        .into_iter()
        .map(|(i, d)| (retained.iter().position(|&k| k == i).expect("retained"), d))
        .collect();
    removed.sort_unstable();
    Ok(Pencil {
        a: a_mat,
        b: b_mat,
        nodes: retained.iter().map(|&i| ops.nodes[i]).collect(),
        full_nodes: ops.nodes,
        retained,
        removed_indices: removed,
        replaced_rows,
        method: Method::Chebyshev,
        grading: plan.grading,
    })
}

/// Expands a pencil-sized vector to the full grid: zeros at removed nodes,
/// boundary values at replaced rows re-solved from their condition row.
pub fn reinstate_boundary<T: Scalar>(vector: &[T], pencil: &Pencil<T>) -> Result<Vec<T>> {
    let m = pencil.size();
    if vector.len() != m {
        return invalid(format!("vector of length {} for a pencil of size {m}", vector.len()));
    }
    let mut v = vector.to_vec();
    for &(row, _) in &pencil.replaced_rows {
        let diag = pencil.a[(row, row)];
        if diag != T::zero() {
            let s = (0..m)
                .filter(|&j| j != row)
                .fold(T::zero(), |acc, j| acc + pencil.a[(row, j)] * v[j]);
            v[row] = -s / diag;
        }
    }
    let mut full = vec![T::zero(); pencil.full_nodes.len()];
    for (k, &i) in pencil.retained.iter().enumerate() {
        full[i] = v[k];
    }
    Ok(full)
}
