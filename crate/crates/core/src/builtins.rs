//! The nine built-in benchmark problems, their reference values and default
//! discretization plans.

use crate::discretize::{BcStrategy, DiscretizationPlan, Grading};
use crate::error::{Result, SlError};
use crate::problem::{BoundaryCondition, ReferenceSpectrum, ReferenceValue, SLProblem};
use crate::scalar::Scalar;

pub const NAMES: [&str; 9] = [
    "legendre",
    "latzko_fichera",
    "rod",
    "boyd",
    "fokker_planck",
    "dunford_schwartz",
    "nasty",
    "bessel",
    "bessel_generalized",
];

pub const LATZKO_FICHERA_TABLE: [f64; 6] = [
    8.727470352650549e+00,
    1.524230708786303e+02,
    4.350633321758573e+02,
    8.556857252681226e+02,
    1.414142820954995e+03,
    2.110387972308661e+03,
];

pub const ROD_TABLE: [f64; 6] = [
    1.063402823775151e+00,
    9.757849576315739e+00,
    2.575153869531348e+01,
    4.890432732322349e+01,
    7.920090041934151e+01,
    1.166360305002941e+02,
];

pub const BOYD_SINC: [f64; 6] = [
    -9.606833569044633e-01,
    -1.095983388802928e-01,
    -2.965096161409372e-02,
    4.851960256747148e-02,
    9.064724518382954e-02,
    1.630157312824040e-01,
];

pub const BOYD_CHEBFUN: [f64; 6] = [
    -9.794200447802075e-01,
    -7.751928355451891e-02,
    2.732439098153830e-01,
    3.092576560488862e-01,
    6.754139419849143e-01,
    8.403112262426201e-01,
];

/// Values obtained with `eps = 1e-3` by the shooting code of the original study.
pub const BOYD_SLEIGN: [f64; 6] = [-0.9841, -0.0778, 0.2727, 0.3092, 0.6754, 0.8396];

/// `(index, value)` pairs of the Fokker–Planck table, `l = 4`.
pub const FOKKER_PLANCK_TABLE: [(usize, f64); 7] = [
    (1, 1.368592520979542e+00),
    (2, 4.453709163213802e+00),
    (4, 1.275806953296428e+01),
    (6, 2.349440842267923e+01),
    (10, 5.061402223182223e+01),
    (20, 1.432321465884990e+02),
    (30, 2.631594491758098e+02),
];

/// Chebfun values for Dunford–Schwartz, indices 0..9.
pub const DUNFORD_SCHWARTZ_CHEBFUN: [f64; 10] = [
    -2.493732084634685e+01,
    -1.572675883354506e+01,
    -8.878700805769942e+00,
    -3.934516542596402e+00,
    -8.976614614351384e-01,
    1.578606493636769e-02,
    2.297844931237520e-01,
    6.369715876528872e-01,
    1.133491876230128e+00,
    1.761853804586405e+00,
];

/// `(index, ChC, Chebfun, Pryce)` for the `ln x` problem.
pub const NASTY_TABLE: [(usize, f64, f64, f64); 2] = [
    (0, 1.124816809695236e+00, 1.124816818756614e+00, 1.1248168097),
    (23, 3.557030079371902e+02, 3.557030097207584e+02, 385.92821596),
];

/// Chebfun's printed Bessel values (`nu = 0`) at indices 0, 1, 8.
pub const BESSEL_PRINTED: [(usize, f64); 3] = [
    (0, 2.404996056333427e+00),
    (1, 5.520251599508041e+00),
    (8, 2.749367004065968e+01),
];

/// Positive zeros `j_{0,k}`, `k = 1..9`.
pub const J0_ZEROS: [f64; 9] = [
    2.404825557695773,
    5.520078110286311,
    8.653727912911013,
    11.79153443901428,
    14.93091770848779,
    18.07106396791092,
    21.21163662987926,
    24.35247153074930,
    27.49347913204025,
];

pub const CROSS_CHEBFUN_TAU0: [f64; 8] = [
    8.427067009456547e+00,
    8.571978456544725e+00,
    3.640104840502095e+01,
    3.689758359379723e+01,
    8.411229915649267e+01,
    8.511762862999629e+01,
    1.515639240123626e+02,
    1.532164600154869e+02,
];

pub const CROSS_CHEBFUN_TAU_QUARTER: [f64; 8] = [
    5.400563866142070e+00,
    1.503383426547553e+01,
    2.332141941007685e+01,
    5.388134332882591e+01,
    6.489190302110852e+01,
    9.708229958053987e+01,
    1.498879163534515e+02,
    1.529282181428597e+02,
];

pub const CROSS_CHC_TAU0: [f64; 8] = [
    8.427945713285165e+00,
    8.661777916480734e+00,
    3.640525136075537e+01,
    3.720851434888583e+01,
    8.412057813169606e+01,
    8.575213457278441e+01,
    1.515775098405456e+02,
    1.542668794303226e+02,
];

fn listed<T: Scalar>(values: impl IntoIterator<Item = (usize, f64)>, provenance: &str) -> ReferenceSpectrum<T> {
    let values = values
        .into_iter()
        .map(|(index, v)| ReferenceValue {
            index,
            value: T::lit(v),
            provenance: provenance.to_string(),
        })
        .collect();
    ReferenceSpectrum::from_values(values).expect("tables are listed in index order")
}

fn enumerate(table: &[f64]) -> impl Iterator<Item = (usize, f64)> + '_ {
    table.iter().copied().enumerate()
}

/// `-((1-x²) u')' + u/4 = lambda u` on `(-1, 1)`, Friedrichs conditions at both ends.
pub fn legendre<T: Scalar>() -> SLProblem<T> {
    let quarter = T::lit(0.25);
    let friedrichs = || BoundaryCondition::limit_form(|_: T| T::zero(), |x: T| T::one() - x * x, "lim (1-x^2) u' = 0");
    let reference = ReferenceSpectrum::from_values(vec![])
        .expect("empty")
        .with_closed_form(move |n| T::from_count(n * (n + 1)) + quarter);
    SLProblem::new("legendre", |x: T| T::one() - x * x, move |_| quarter, |_| T::one(), (-T::one(), T::one()))
        .with_bcs(friedrichs(), friedrichs())
        .with_reference(reference)
        .with_classification("LCNO", "LCNO")
}

/// `-((1-x⁷) u')' = lambda x⁷ u` on `(0, 1)`.
pub fn latzko_fichera<T: Scalar>() -> SLProblem<T> {
    let x7 = |x: T| x.powi(7);
    SLProblem::new("latzko_fichera", move |x: T| T::one() - x7(x), |_| T::zero(), x7, (T::zero(), T::one()))
        .with_bcs(
            BoundaryCondition::Dirichlet,
            BoundaryCondition::limit_form(|_: T| T::zero(), move |x: T| T::one() - x7(x), "lim (1-x^7) u' = 0"),
        )
        .with_reference(listed(enumerate(&LATZKO_FICHERA_TABLE), "Latzko-Fichera table, Chebfun"))
        .with_classification("regular", "LCNO")
}

/// Tapered rod `-(A u')' + gamma u = lambda u`, `A = ln(1 + sin 3x)`, on `(0, 1]`.
pub fn rod<T: Scalar>(gamma: T) -> SLProblem<T> {
    let area = |x: T| (T::one() + (T::lit(3.0) * x).sin()).ln();
    let mut problem = SLProblem::new("rod", area, move |_| gamma, |_| T::one(), (T::zero(), T::one()))
        .with_bcs(
            BoundaryCondition::limit_form(|_: T| T::zero(), area, "lim A(x) u' = 0"),
            BoundaryCondition::Dirichlet,
        )
        .with_classification("LCNO", "regular");
    if gamma == T::zero() {
        problem = problem.with_reference(listed(enumerate(&ROD_TABLE), "rod table, Chebfun, gamma = 0"));
    }
    problem
}

/// `-u'' + x/(x² + eps²) u = lambda u` on `[-10, 10]` with Dirichlet ends.
pub fn boyd<T: Scalar>(epsilon: T) -> Result<SLProblem<T>> {
    let q = crate::problem::boyd_regularized_q(epsilon)?;
    let ten = T::lit(10.0);
    let mut problem = SLProblem::new("boyd", |_: T| T::one(), move |x| q(x), |_| T::one(), (-ten, ten));
    if epsilon == T::lit(1e-6) {
        problem = problem.with_reference(listed(enumerate(&BOYD_CHEBFUN), "Boyd table, Chebfun, eps = 1e-6"));
    }
    Ok(problem)
}

/// `-u'' + (x⁶/4 - 3x²/2) u = lambda u`, truncated to `[-l, l]`.
pub fn fokker_planck<T: Scalar>(l: T) -> SLProblem<T> {
    let q = |x: T| {
        let x2 = x * x;
        x2 * x2 * x2 / T::lit(4.0) - T::lit(1.5) * x2
    };
    let inf = T::infinity();
    let mut problem = SLProblem::new("fokker_planck", |_: T| T::one(), q, |_| T::one(), (-inf, inf))
        .with_bcs(
            BoundaryCondition::TruncatedDirichlet { at: -l },
            BoundaryCondition::TruncatedDirichlet { at: l },
        )
        .with_domain(-l, l)
        .with_classification("LP", "LP");
    let mut values = vec![ReferenceValue {
        index: 0,
        value: T::zero(),
        provenance: "exact ground state".into(),
    }];
    values.extend(FOKKER_PLANCK_TABLE.iter().map(|&(index, v)| ReferenceValue {
        index,
        value: T::lit(v),
        provenance: "Fokker-Planck table, Chebfun, l = 4".into(),
    }));
    if l == T::lit(4.0) {
        problem = problem.with_reference(ReferenceSpectrum::from_values(values).expect("sorted"));
    }
    problem
}

/// `-u'' + (241 - 242 cosh x)/(4 sinh² x) u = lambda u` on `(0, inf)`, truncated to `[1e-8, 15]`.
///
/// Near `0` the potential behaves like `-1/(4x²)`, so the Frobenius exponents
/// coincide at `1/2`. The left condition `x u' - u/2 = 0` annihilates the
/// principal solution `x^{1/2}` exactly and rejects `x^{1/2} ln x`.
pub fn dunford_schwartz<T: Scalar>() -> SLProblem<T> {
    let q = |x: T| (T::lit(241.0) - T::lit(242.0) * x.cosh()) / (T::lit(4.0) * x.sinh().powi(2));
    let values = (0..5usize)
        .map(|n| ReferenceValue {
            index: n,
            value: -T::from_count((5 - n) * (5 - n)),
            provenance: "exact, -(5-n)^2".into(),
        })
        .collect();
    SLProblem::new("dunford_schwartz", |_: T| T::one(), q, |_| T::one(), (T::zero(), T::infinity()))
        .with_bcs(
            BoundaryCondition::limit_form(|_: T| -T::lit(0.5), |x: T| x, "lim [x u' - u/2] = 0"),
            BoundaryCondition::TruncatedDirichlet { at: T::lit(15.0) },
        )
        .with_domain(T::lit(1e-8), T::lit(15.0))
        .with_reference(ReferenceSpectrum::from_values(values).expect("sorted"))
        .with_classification("LCNO", "LP")
}

/// `-u'' + ln(x) u = lambda u` on `(0, 4)` with Dirichlet ends.
pub fn nasty<T: Scalar>() -> SLProblem<T> {
    SLProblem::new("nasty", |_: T| T::one(), |x: T| x.ln(), |_| T::one(), (T::zero(), T::lit(4.0)))
        .with_domain(T::lit(1e-8), T::lit(4.0))
        .with_reference(listed(
            NASTY_TABLE.iter().map(|&(i, chc, _, _)| (i, chc)),
            "ln x table, ChC N = 512",
        ))
        .with_classification("regular", "regular")
}

/// `-u'' + (nu² - 1/4)/x² u = lambda u` on `(0, 1]`, `u(1) = 0`, principal
/// solution `x^{nu + 1/2}` selected at the left end.
pub fn bessel<T: Scalar>(nu: T) -> Result<SLProblem<T>> {
    if !(nu >= T::zero() && nu < T::one()) {
        return Err(SlError::InvalidArgument(format!(
            "bessel: nu must lie in [0, 1) for the nonoscillatory case, got {nu}"
        )));
    }
    let c = nu * nu - T::lit(0.25);
    let half = T::lit(0.5);
    let label = format!("lim [x u' - ({nu} + 1/2) u] = 0");
    let mut problem = SLProblem::new("bessel", |_: T| T::one(), move |x: T| c / (x * x), |_| T::one(), (T::zero(), T::one()))
        .with_bcs(
            BoundaryCondition::limit_form(move |_: T| -(nu + half), |x: T| x, label),
            BoundaryCondition::Dirichlet,
        )
        .with_domain(T::lit(1e-4), T::one())
        .with_classification(if c == T::zero() { "regular" } else { "LCNO" }, "regular");
    if nu == T::zero() {
        problem = problem.with_reference(listed(
            [0usize, 1, 8].into_iter().map(|k| (k, J0_ZEROS[k] * J0_ZEROS[k])),
            "squared zeros of J_0",
        ));
    }
    Ok(problem)
}

/// Second left condition of the Bessel family (selects `J_{-nu}`); registered only.
pub fn bessel_log_condition<T: Scalar>() -> BoundaryCondition<T> {
    BoundaryCondition::limit_form(
        |x: T| T::one() + T::lit(0.5) * x.ln(),
        |x: T| -(x * x.ln()),
        "lim [(1 + ln(x)/2) u - x ln(x) u'] = 0",
    )
}

/// `u'' + [lambda + (1/4 - nu²)/(x - tau)²] u = 0` on `(-1, 1)`, `u(±1) = 0`,
/// assembled in the multiplied form `-(x-tau)² u'' + c u = lambda (x-tau)² u`.
pub fn bessel_generalized<T: Scalar>(nu: T, tau: T) -> SLProblem<T> {
    let c = nu * nu - T::lit(0.25);
    let mut problem = SLProblem::new(
        "bessel_generalized",
        |_: T| T::one(),
        move |x: T| c / ((x - tau) * (x - tau)),
        |_| T::one(),
        (-T::one(), T::one()),
    )
    .with_multiplier(move |x: T| (x - tau) * (x - tau), move |_| c)
    .with_lower_bound(T::zero())
    .with_classification("regular", "regular");
    if nu == T::lit(1.0 / 3.0) {
        if tau == T::zero() {
            problem = problem.with_reference(listed(
                enumerate(&CROSS_CHC_TAU0),
                "crossing table, ChC N = 2028, tau = 0",
            ));
        } else if tau == T::lit(0.25) {
            problem = problem.with_reference(listed(
                enumerate(&CROSS_CHEBFUN_TAU_QUARTER),
                "crossing table, Chebfun, tau = 1/4",
            ));
        }
    }
    problem
}

/// All nine problems with their default parameters, in registry order.
pub fn builtin_problems<T: Scalar>() -> Vec<SLProblem<T>> {
    NAMES.iter().map(|n| lookup(n).expect("registered")).collect()
}

pub fn lookup<T: Scalar>(name: &str) -> Result<SLProblem<T>> {
    Ok(match name {
        "legendre" => legendre(),
        "latzko_fichera" => latzko_fichera(),
        "rod" => rod(T::zero()),
        "boyd" => boyd(T::lit(1e-6))?,
        "fokker_planck" => fokker_planck(T::lit(4.0)),
        "dunford_schwartz" => dunford_schwartz(),
        "nasty" => nasty(),
        "bessel" => bessel(T::zero())?,
        "bessel_generalized" => bessel_generalized(T::lit(1.0 / 3.0), T::zero()),
        other => return Err(SlError::NotFound(format!("no built-in problem named '{other}'"))),
    })
}

/// Default plan for a registered problem.
pub fn default_plan<T: Scalar>(problem: &SLProblem<T>) -> Result<DiscretizationPlan<T>> {
    use BcStrategy::*;
    let (a, b) = problem.domain;
    let cheb = |n, left, right| DiscretizationPlan::chebyshev(n, (a, b)).with_strategies(left, right);
    Ok(match problem.name.as_str() {
        "legendre" => cheb(128, CollocateEndpoint, CollocateEndpoint),
        "latzko_fichera" => cheb(128, Remove, CollocateEndpoint),
        "rod" => cheb(128, CollocateEndpoint, Remove),
        "boyd" => cheb(1024, Remove, Remove),
        "fokker_planck" => cheb(512, Remove, Remove),
        "dunford_schwartz" => cheb(256, ReplaceRow, Remove).with_grading(Grading::Logarithmic),
        "nasty" => DiscretizationPlan::chebyshev(512, (problem.a, problem.b)),
        "bessel" => cheb(1024, ReplaceRow, Remove),
        "bessel_generalized" => cheb(2048, Remove, Remove),
        other => return Err(SlError::NotFound(format!("no default plan for '{other}'"))),
    })
}

/// Sinc plan used for the Boyd comparison: 500 points, `h = 0.1`, centred at 0.
pub fn boyd_sinc_plan<T: Scalar>() -> DiscretizationPlan<T> {
    DiscretizationPlan::sinc(500, T::lit(0.1), T::zero())
}
