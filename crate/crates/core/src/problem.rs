//! Sturm–Liouville problem description: coefficients, interval, boundary
//! conditions, reference spectra and the hardness classifier.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result, SlError};
use crate::grid::{integrate_interpolant, ChebGrid};
use crate::scalar::Scalar;

/// Pure coefficient function of `x`.
pub type Coefficient<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

pub fn coefficient<T: Scalar>(f: impl Fn(T) -> T + Send + Sync + 'static) -> Coefficient<T> {
    Arc::new(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone)]
pub enum BoundaryCondition<T: Scalar> {
    /// `u(e) = 0`.
    Dirichlet,
    /// `alpha u(e) + beta u'(e) = 0`.
    Robin { alpha: T, beta: T },
    /// `lim_{x -> e} [f(x) u + g(x) u'] = 0`, imposed at the effective endpoint.
    LimitForm {
        f: Coefficient<T>,
        g: Coefficient<T>,
        label: String,
    },
    /// Dirichlet condition moved to the interior point `at`.
    TruncatedDirichlet { at: T },
    /// No condition; the equation itself is collocated at the endpoint.
    EndpointCollocation,
}

impl<T: Scalar> BoundaryCondition<T> {
    pub fn limit_form(
        f: impl Fn(T) -> T + Send + Sync + 'static,
        g: impl Fn(T) -> T + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Self {
        BoundaryCondition::LimitForm {
            f: coefficient(f),
            g: coefficient(g),
            label: label.into(),
        }
    }

    /// `(f(x), g(x))` of the row `f u + g u'` that realizes this condition at `x`.
    pub fn row_coefficients(&self, x: T) -> Option<(T, T)> {
        match self {
            BoundaryCondition::Dirichlet | BoundaryCondition::TruncatedDirichlet { .. } => Some((T::one(), T::zero())),
            BoundaryCondition::Robin { alpha, beta } => Some((*alpha, *beta)),
            BoundaryCondition::LimitForm { f, g, .. } => Some((f(x), g(x))),
            BoundaryCondition::EndpointCollocation => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BoundaryCondition::Dirichlet => "u = 0".into(),
            BoundaryCondition::Robin { alpha, beta } => format!("{alpha} u + {beta} u' = 0"),
            BoundaryCondition::LimitForm { label, .. } => label.clone(),
            BoundaryCondition::TruncatedDirichlet { at } => format!("u({at}) = 0"),
            BoundaryCondition::EndpointCollocation => "equation collocated at endpoint".into(),
        }
    }
}

impl<T: Scalar> fmt::Debug for BoundaryCondition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReferenceValue<T> {
    pub index: usize,
    pub value: T,
    pub provenance: String,
}

#[derive(Clone, Default)]
pub struct ReferenceSpectrum<T: Scalar> {
    values: Vec<ReferenceValue<T>>,
    closed_form: Option<Arc<dyn Fn(usize) -> T + Send + Sync>>,
}

impl<T: Scalar> ReferenceSpectrum<T> {
    pub fn from_values(values: Vec<ReferenceValue<T>>) -> Result<Self> {
        if values.windows(2).any(|w| w[1].index <= w[0].index) {
            return invalid("reference indices must be strictly increasing");
        }
        Ok(Self {
            values,
            closed_form: None,
        })
    }

    pub fn with_closed_form(mut self, f: impl Fn(usize) -> T + Send + Sync + 'static) -> Self {
        self.closed_form = Some(Arc::new(f));
        self
    }

    pub fn values(&self) -> &[ReferenceValue<T>] {
        &self.values
    }

    pub fn closed_form(&self, index: usize) -> Option<T> {
        self.closed_form.as_ref().map(|f| f(index))
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed_form.is_some()
    }

    /// Listed value at `index`, falling back to the closed form.
    pub fn value(&self, index: usize) -> Option<T> {
        self.values
            .iter()
            .find(|v| v.index == index)
            .map(|v| v.value)
            .or_else(|| self.closed_form(index))
    }
}

impl<T: Scalar> fmt::Debug for ReferenceSpectrum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReferenceSpectrum")
            .field("values", &self.values)
            .field("closed_form", &self.closed_form.is_some())
            .finish()
    }
}

/// Equation multiplied through by `m(x)`, with `m q` supplied in closed form
/// so that it stays finite where `q` has a pole.
#[derive(Clone)]
pub struct Multiplier<T: Scalar> {
    pub m: Coefficient<T>,
    pub mq: Coefficient<T>,
}

/// `-(p u')' + q u = lambda r u` on `(a, b)`.
#[derive(Clone)]
pub struct SLProblem<T: Scalar> {
    pub name: String,
    pub p: Coefficient<T>,
    pub q: Coefficient<T>,
    pub r: Coefficient<T>,
    pub a: T,
    pub b: T,
    pub bc_left: BoundaryCondition<T>,
    pub bc_right: BoundaryCondition<T>,
    /// Interval actually discretized by default (truncation of `(a, b)`).
    pub domain: (T, T),
    pub multiplier: Option<Multiplier<T>>,
    pub reference: Option<ReferenceSpectrum<T>>,
    /// A-priori lower bound of the spectrum; computed eigenvalues below it are spurious.
    pub lower_bound: Option<T>,
    /// Endpoint classification recorded as metadata (regular, LCNO, LP, ...).
    pub classification: (String, String),
}

impl<T: Scalar> fmt::Debug for SLProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SLProblem")
            .field("name", &self.name)
            .field("interval", &(self.a, self.b))
            .field("domain", &self.domain)
            .field("bc_left", &self.bc_left)
            .field("bc_right", &self.bc_right)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> SLProblem<T> {
    pub fn new(
        name: impl Into<String>,
        p: impl Fn(T) -> T + Send + Sync + 'static,
        q: impl Fn(T) -> T + Send + Sync + 'static,
        r: impl Fn(T) -> T + Send + Sync + 'static,
        interval: (T, T),
    ) -> Self {
        let (a, b) = interval;
        Self {
            name: name.into(),
            p: coefficient(p),
            q: coefficient(q),
            r: coefficient(r),
            a,
            b,
            bc_left: BoundaryCondition::Dirichlet,
            bc_right: BoundaryCondition::Dirichlet,
            domain: (a, b),
            multiplier: None,
            reference: None,
            lower_bound: None,
            classification: ("regular".into(), "regular".into()),
        }
    }

    pub fn with_bcs(mut self, left: BoundaryCondition<T>, right: BoundaryCondition<T>) -> Self {
        self.bc_left = left;
        self.bc_right = right;
        self
    }

    pub fn with_domain(mut self, a: T, b: T) -> Self {
        self.domain = (a, b);
        self
    }

    pub fn with_multiplier(
        mut self,
        m: impl Fn(T) -> T + Send + Sync + 'static,
        mq: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        self.multiplier = Some(Multiplier {
            m: coefficient(m),
            mq: coefficient(mq),
        });
        self
    }

    pub fn with_reference(mut self, reference: ReferenceSpectrum<T>) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn with_lower_bound(mut self, bound: T) -> Self {
        self.lower_bound = Some(bound);
        self
    }

    pub fn with_classification(mut self, left: &str, right: &str) -> Self {
        self.classification = (left.into(), right.into());
        self
    }

    pub fn bc(&self, side: Side) -> &BoundaryCondition<T> {
        match side {
            Side::Left => &self.bc_left,
            Side::Right => &self.bc_right,
        }
    }

    pub fn endpoint(&self, side: Side) -> T {
        match side {
            Side::Left => self.a,
            Side::Right => self.b,
        }
    }

    /// Checks the structural invariants and probes coefficients on 1000
    /// interior points of the default domain.
    pub fn validate(&self) -> Result<()> {
        if !(self.a < self.b) {
            return invalid(format!("{}: need a < b", self.name));
        }
        let (d0, d1) = self.domain;
        if !(d0 >= self.a && d1 <= self.b && d0 < d1 && d0.is_finite() && d1.is_finite()) {
            return invalid(format!("{}: domain [{d0}, {d1}] not a finite subinterval", self.name));
        }
        for (side, bc) in [(Side::Left, &self.bc_left), (Side::Right, &self.bc_right)] {
            match bc {
                BoundaryCondition::Robin { alpha, beta } if alpha.abs() + beta.abs() == T::zero() => {
                    return invalid(format!("{}: Robin condition at {side} needs |alpha| + |beta| > 0", self.name));
                }
                BoundaryCondition::TruncatedDirichlet { at } if !(*at > self.a && *at < self.b) => {
                    return invalid(format!("{}: truncation point {at} not inside the interval", self.name));
                }
                _ => {}
            }
        }
        let probes = 1000;
        for k in 0..probes {
            let x = d0 + (d1 - d0) * (T::from_count(k) + T::lit(0.5)) / T::from_count(probes);
            let p = (self.p)(x);
            if !(p > T::zero()) || !p.is_finite() {
                return Err(SlError::SingularNode {
                    x: x.to_f64().unwrap_or(f64::NAN),
                    what: format!("{}: p(x) = {p} is not positive", self.name),
                });
            }
            for (name, v) in [("q", (self.q)(x)), ("r", (self.r)(x))] {
                if !v.is_finite() {
                    return Err(SlError::SingularNode {
                        x: x.to_f64().unwrap_or(f64::NAN),
                        what: format!("{}: {name}(x) not finite", self.name),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Outcome of the hardness test at one endpoint.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HardnessVerdict<T> {
    pub endpoint: Side,
    pub lambda: T,
    pub probe_points: Vec<T>,
    pub tau_samples: Vec<T>,
    pub hard: bool,
}

/// `tau(x) = (lambda r(x) - q(x)) / p(x)` at an interior point.
pub fn tau<T: Scalar>(problem: &SLProblem<T>, lambda: T, x: T) -> Result<T> {
    if !(x > problem.a && x < problem.b) {
        return invalid(format!("tau: x = {x} not strictly inside ({}, {})", problem.a, problem.b));
    }
    let p = (problem.p)(x);
    if p == T::zero() || !p.is_finite() {
        return Err(SlError::SingularNode {
            x: x.to_f64().unwrap_or(f64::NAN),
            what: "p(x) vanishes".into(),
        });
    }
    Ok((lambda * (problem.r)(x) - (problem.q)(x)) / p)
}

/// Threshold on the last tau probe above which an endpoint counts as hard.
pub const HARD_TAU_THRESHOLD: f64 = 1e6;

/// Probes `tau` at distances `10^-1 .. 10^-8` (relative to the interval
/// length) from a finite endpoint. Hard iff the last sample exceeds
/// [`HARD_TAU_THRESHOLD`] and the last four samples increase strictly.
pub fn classify_hard<T: Scalar>(problem: &SLProblem<T>, lambda: T, endpoint: Side) -> Result<HardnessVerdict<T>> {
    let e = problem.endpoint(endpoint);
    if !e.is_finite() {
        return Err(SlError::NotApplicable(format!(
            "{}: {endpoint} endpoint is infinite; hardness needs a finite endpoint",
            problem.name
        )));
    }
    let length = if (problem.b - problem.a).is_finite() {
        problem.b - problem.a
    } else {
        problem.domain.1 - problem.domain.0
    };
    let dir = match endpoint {
        Side::Left => T::one(),
        Side::Right => -T::one(),
    };
    let mut probe_points = Vec::with_capacity(8);
    let mut tau_samples = Vec::with_capacity(8);
    for k in 1..=8 {
        let d = T::lit(10f64.powi(-k)) * length;
        let x = e + dir * d;
        probe_points.push(x);
        tau_samples.push(tau(problem, lambda, x)?);
    }
    let tail = &tau_samples[4..];
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    let hard = increasing && tau_samples[7] > T::lit(HARD_TAU_THRESHOLD);
    Ok(HardnessVerdict {
        endpoint,
        lambda,
        probe_points,
        tau_samples,
        hard,
    })
}

/// Boyd's regularized interior-singular potential `x / (x² + eps²)`.
pub fn boyd_regularized_q<T: Scalar>(epsilon: T) -> Result<Coefficient<T>> {
    if !(epsilon > T::zero()) {
        return invalid(format!("regularization epsilon must be positive, got {epsilon}"));
    }
    let e2 = epsilon * epsilon;
    Ok(coefficient(move |x: T| x / (x * x + e2)))
}

/// Quadrature of `(1 - x²) |u'(x)|²` over `[-1 + delta, 1 - delta]` from
/// nodal values on a reference CGL grid.
///
/// `u_values` only takes part in the conformity check; the integrand is built
/// from `u_deriv_values`.
pub fn symmetric_restriction<T: Scalar>(
    u_values: &[T],
    u_deriv_values: &[T],
    grid: &ChebGrid<T>,
    delta: T,
) -> Result<T> {
    let n = grid.n_points();
    if u_values.len() != n || u_deriv_values.len() != n {
        return invalid(format!(
            "symmetric restriction: vectors of length {} / {} on a {n}-point grid",
            u_values.len(),
            u_deriv_values.len()
        ));
    }
    if !(delta > T::zero() && delta < T::one()) {
        return invalid("symmetric restriction: delta must lie in (0, 1)");
    }
    let nodes = grid.nodes();
    let tol = T::lit(1e-12);
    if (nodes[0] - T::one()).abs() > tol || (nodes[n - 1] + T::one()).abs() > tol {
        return invalid("symmetric restriction needs a grid on [-1, 1]");
    }
    let integrand: Vec<T> = nodes
        .iter()
        .zip(u_deriv_values)
        .map(|(&x, &du)| (T::one() - x * x) * du * du)
        .collect();
    integrate_interpolant(&integrand, -T::one() + delta, T::one() - delta)
}
