//! Benchmark cases: the built-in problems bound to their reference tables,
//! default plans and tolerances, plus scoring.

use std::time::Instant;

use serde::Serialize;

use crate::builtins::{self, BESSEL_PRINTED, BOYD_CHEBFUN, BOYD_SINC, CROSS_CHEBFUN_TAU0, NASTY_TABLE};
use crate::discretize::{DiscretizationPlan, Method};
use crate::eig::{coeff_decay_report, solve_problem, spectrum_partition, SolveOptions};
use crate::error::{invalid, Result, SlError};
use crate::problem::{classify_hard, SLProblem, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|computed - reference| / |reference| <= tol`.
    Relative,
    /// `|computed - reference| <= tol`.
    Absolute,
    /// Relative error of `sqrt(computed)` against `sqrt(reference)`.
    SqrtRelative,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReferenceCheck {
    pub label: String,
    pub index: usize,
    pub reference: f64,
    pub provenance: String,
    pub tol: f64,
    pub kind: CheckKind,
}

impl ReferenceCheck {
    fn rel(label: &str, index: usize, reference: f64, provenance: &str, tol: f64) -> Self {
        Self {
            label: label.to_string(),
            index,
            reference,
            provenance: provenance.to_string(),
            tol,
            kind: CheckKind::Relative,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkCase {
    pub name: String,
    pub tags: Vec<String>,
    pub problem: SLProblem<f64>,
    pub plan: DiscretizationPlan<f64>,
    pub checks: Vec<ReferenceCheck>,
    /// Second discretization scored against its own column (Boyd sinc run).
    pub secondary: Option<(DiscretizationPlan<f64>, Vec<ReferenceCheck>)>,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreEntry {
    pub label: String,
    pub index: usize,
    pub computed: Option<f64>,
    pub reference: f64,
    /// Relative error, or absolute error for absolute checks; `None` if the index was not computed.
    pub error: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardnessNote {
    pub index: usize,
    pub lambda: f64,
    pub endpoint: Side,
    pub hard: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScoreCard {
    pub name: String,
    pub entries: Vec<ScoreEntry>,
    pub pass: bool,
    pub notes: Vec<String>,
    pub hardness: Vec<HardnessNote>,
    pub eigenvalues: Vec<f64>,
    pub wall_time_s: f64,
}

/// Optional replacements for plan fields.
#[derive(Clone, Debug, Default)]
pub struct PlanOverrides {
    pub method: Option<Method>,
    pub n: Option<usize>,
    pub h: Option<f64>,
    pub domain: Option<(f64, f64)>,
}

impl PlanOverrides {
    pub fn apply(&self, plan: &DiscretizationPlan<f64>) -> Result<DiscretizationPlan<f64>> {
        let method = self.method.unwrap_or(plan.method);
        let mut out = match (method, plan.method) {
            (Method::Sinc, Method::Chebyshev) => {
                let center = self.domain.map_or(plan.center(), |(a, b)| (a + b) / 2.0);
                DiscretizationPlan::sinc(self.n.unwrap_or(500), self.h.unwrap_or(0.1), center)
            }
            (Method::Chebyshev, Method::Sinc) => {
                if self.h.is_some() {
                    return invalid("--h only applies to sinc plans");
                }
                DiscretizationPlan::chebyshev(self.n.unwrap_or(plan.n), plan.domain)
            }
            _ => plan.clone(),
        };
        if method == Method::Chebyshev {
            if let Some(n) = self.n {
                out = out.with_n(n);
            }
            if self.h.is_some() {
                return invalid("--h only applies to sinc plans");
            }
            if let Some((a, b)) = self.domain {
                out = out.with_domain(a, b);
            }
        } else if plan.method == Method::Sinc {
            let h = self.h.or(plan.h).unwrap_or(0.1);
            let center = self.domain.map_or(plan.center(), |(a, b)| (a + b) / 2.0);
            out = DiscretizationPlan::sinc(self.n.unwrap_or(plan.n), h, center);
        }
        Ok(out)
    }
}

fn table_checks(problem: &SLProblem<f64>, tol: f64) -> Vec<ReferenceCheck> {
    problem
        .reference
        .as_ref()
        .map(|r| {
            r.values()
                .iter()
                .map(|v| ReferenceCheck::rel("lambda", v.index, v.value, &v.provenance, tol))
                .collect()
        })
        .unwrap_or_default()
}

fn build_case(name: &str) -> Result<BenchmarkCase> {
    let problem = builtins::lookup::<f64>(name)?;
    let plan = builtins::default_plan(&problem)?;
    let mut secondary = None;
    let mut count = 10;
    let checks = match name {
        "legendre" => (0..10)
            .map(|n| {
                ReferenceCheck::rel(
                    "lambda",
                    n,
                    (n * (n + 1)) as f64 + 0.25,
                    "closed form n(n+1) + 1/4",
                    1e-9,
                )
            })
            .collect(),
        "latzko_fichera" | "rod" => {
            count = 6;
            table_checks(&problem, 1e-6)
        }
        "boyd" => {
            count = 6;
            let sinc_checks = BOYD_SINC
                .iter()
                .enumerate()
                .map(|(i, &v)| ReferenceCheck::rel("sinc", i, v, "Boyd table, SiC column", 1e-3))
                .collect();
            secondary = Some((builtins::boyd_sinc_plan(), sinc_checks));
            table_checks(&problem, 1e-2)
        }
        "fokker_planck" => {
            count = 32;
            let mut c = table_checks(&problem, 1e-6);
            c[0].kind = CheckKind::Absolute;
            c[0].tol = 1e-10;
            c
        }
        "dunford_schwartz" => table_checks(&problem, 1e-2),
        "nasty" => {
            count = 24;
            table_checks(&problem, 1e-6)
        }
        "bessel" => {
            count = 9;
            let mut c = table_checks(&problem, 1e-4);
            for check in &mut c {
                check.kind = CheckKind::SqrtRelative;
            }
            c
        }
        "bessel_generalized" => {
            count = 8;
            table_checks(&problem, 1e-3)
        }
        other => return Err(SlError::NotFound(format!("no benchmark case named '{other}'"))),
    };
    let mut tags = vec![name.to_string()];
    if problem.multiplier.is_some() {
        tags.push("generalized".into());
    }
    if secondary.is_some() {
        tags.push("sinc".into());
    }
    if hardness_notes(&problem, &checks).iter().any(|h| h.hard) {
        tags.push("hard".into());
    }
    Ok(BenchmarkCase {
        name: name.to_string(),
        tags,
        problem,
        plan,
        checks,
        secondary,
        count,
    })
}

pub fn case(name: &str) -> Result<BenchmarkCase> {
    build_case(name)
}

/// All cases in registry order.
pub fn cases() -> Vec<BenchmarkCase> {
    builtins::NAMES.iter().map(|n| build_case(n).expect("registered")).collect()
}

/// Hardness verdicts for each reference eigenvalue at each finite endpoint.
fn hardness_notes(problem: &SLProblem<f64>, checks: &[ReferenceCheck]) -> Vec<HardnessNote> {
    let mut out = Vec::new();
    for check in checks {
        for side in [Side::Left, Side::Right] {
            if let Ok(v) = classify_hard(problem, check.reference, side) {
                out.push(HardnessNote {
                    index: check.index,
                    lambda: check.reference,
                    endpoint: side,
                    hard: v.hard,
                });
            }
        }
    }
    out
}

fn score(check: &ReferenceCheck, eigenvalues: &[f64]) -> ScoreEntry {
    let computed = eigenvalues.get(check.index).copied();
    let error = computed.map(|c| match check.kind {
        CheckKind::Relative => (c - check.reference).abs() / check.reference.abs(),
        CheckKind::Absolute => (c - check.reference).abs(),
        CheckKind::SqrtRelative => {
            let r = check.reference.sqrt();
            (c.max(0.0).sqrt() - r).abs() / r
        }
    });
    ScoreEntry {
        label: check.label.clone(),
        index: check.index,
        computed,
        reference: check.reference,
        error,
        tol: check.tol,
        pass: error.is_some_and(|e| e <= check.tol),
        provenance: check.provenance.clone(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn run_case(name: &str, overrides: &PlanOverrides) -> Result<ScoreCard> {
    let case = build_case(name)?;
    run_built(&case, overrides)
}

fn run_built(case: &BenchmarkCase, overrides: &PlanOverrides) -> Result<ScoreCard> {
    let start = Instant::now();
    let plan = overrides.apply(&case.plan)?;
    let options = SolveOptions::default().with_count(case.count);
    let (_, spectrum) = solve_problem(&case.problem, &plan, &options)?;
    let ev = spectrum.eigenvalues.clone();
    let mut entries: Vec<ScoreEntry> = case.checks.iter().map(|c| score(c, &ev)).collect();
    let mut notes = Vec::new();

    match case.name.as_str() {
        "rod" => {
            let decay = coeff_decay_report(&spectrum);
            let resolved = decay.iter().take(4).filter(|d| d.resolved).count();
            notes.push(format!("coefficient decay: {resolved} of the first 4 vectors resolved"));
        }
        "boyd" => {
            if let Some((sinc_plan, checks)) = &case.secondary {
                let (_, sinc) = solve_problem(&case.problem, sinc_plan, &options)?;
                entries.extend(checks.iter().map(|c| score(c, &sinc.eigenvalues)));
                let gap = ev
                    .iter()
                    .zip(&sinc.eigenvalues)
                    .map(|(c, s)| rel(*s, *c))
                    .fold(0.0, f64::max);
                notes.push(format!(
                    "cross-method discrepancy: max relative difference Chebyshev vs sinc = {gap:.3e}"
                ));
                let sleign = BOYD_CHEBFUN
                    .iter()
                    .zip(builtins::BOYD_SLEIGN)
                    .map(|(c, s)| rel(s, *c))
                    .fold(0.0, f64::max);
                notes.push(format!(
                    "published spreads: Chebfun vs SLEIGN {sleign:.1e}; SiC vs Chebfun {:.1e}",
                    BOYD_SINC.iter().zip(BOYD_CHEBFUN).map(|(s, c)| rel(*s, c)).fold(0.0, f64::max)
                ));
            }
        }
        "dunford_schwartz" => {
            if let Some(reference) = &case.problem.reference {
                let part = spectrum_partition(&ev, reference);
                notes.push(format!(
                    "matched {} discrete eigenvalues; tail starts at {:?}",
                    part.matched.len(),
                    part.tail.first()
                ));
            }
            if let Some(&first) = ev.get(5) {
                notes.push(format!(
                    "first continuous-spectrum value {first:.6e} (Chebfun table: {:.6e})",
                    builtins::DUNFORD_SCHWARTZ_CHEBFUN[5]
                ));
            }
        }
        "nasty" => {
            let (idx, chc, chebfun, pryce) = NASTY_TABLE[1];
            if let Some(&v) = ev.get(idx) {
                notes.push(format!(
                    "index {idx}: computed {v:.12e}; ChC {chc:.12e}; Chebfun {chebfun:.12e}; \
                     standard-set value {pryce} differs by {:.2e} relative and is not matched",
                    rel(pryce, v)
                ));
            }
        }
        "bessel" => {
            for &(i, printed) in &BESSEL_PRINTED {
                if let Some(&v) = ev.get(i) {
                    notes.push(format!(
                        "index {i}: sqrt(lambda) = {:.12e}; printed Chebfun value {printed:.12e} (gap {:.2e})",
                        v.sqrt(),
                        rel(printed, v.sqrt())
                    ));
                }
            }
        }
        "bessel_generalized" => {
            if ev.len() >= 2 {
                notes.push(format!("near-degeneracy (l1 - l0)/l0 = {:.4e}", (ev[1] - ev[0]) / ev[0].abs()));
            }
            let spread = ev
                .iter()
                .zip(CROSS_CHEBFUN_TAU0)
                .map(|(c, r)| rel(*c, r))
                .fold(0.0, f64::max);
            notes.push(format!("max relative difference to the Chebfun tau = 0 column: {spread:.3e}"));
        }
        _ => {}
    }
    if spectrum.discarded_count > 0 {
        notes.push(format!("{} eigenvalues discarded as infinite or spurious", spectrum.discarded_count));
    }

    let pass = entries.iter().all(|e| e.pass);
    Ok(ScoreCard {
        name: case.name.clone(),
        entries,
        pass,
        notes,
        hardness: hardness_notes(&case.problem, &case.checks),
        eigenvalues: ev,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Runs every case whose name or tags contain `filter`, in registry order.
pub fn run_all(filter: Option<&str>) -> Result<Vec<ScoreCard>> {
    cases()
        .iter()
        .filter(|c| filter.is_none_or(|f| c.tags.iter().any(|t| t == f)))
        .map(|c| run_built(c, &PlanOverrides::default()))
        .collect()
}

/// Names of the cases selected by `filter`, without running them.
pub fn select(filter: Option<&str>) -> Vec<String> {
    cases()
        .into_iter()
        .filter(|c| filter.is_none_or(|f| c.tags.iter().any(|t| t == f)))
        .map(|c| c.name)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_reference_has_provenance() {
        for c in cases() {
            assert!(!c.checks.is_empty(), "{}", c.name);
            for check in c.checks.iter().chain(c.secondary.iter().flat_map(|s| s.1.iter())) {
                assert!(!check.provenance.is_empty());
                assert!(check.tol > 0.0);
            }
        }
    }

    #[test]
    fn filters() {
        assert_eq!(select(None).len(), 9);
        assert_eq!(select(Some("generalized")), vec!["bessel_generalized".to_string()]);
        let hard = select(Some("hard"));
        for name in ["legendre", "latzko_fichera", "rod", "dunford_schwartz", "bessel"] {
            assert!(hard.contains(&name.to_string()), "{name}");
        }
        assert!(!hard.contains(&"fokker_planck".to_string()));
        assert!(matches!(run_case("missing", &PlanOverrides::default()), Err(SlError::NotFound(_))));
    }

    #[test]
    fn legendre_hardness_metadata() {
        let c = case("legendre").unwrap();
        let notes = hardness_notes(&c.problem, &c.checks);
        assert!(notes.iter().filter(|n| n.index == 0).all(|n| !n.hard));
        assert!(notes.iter().filter(|n| n.index == 1).all(|n| n.hard));
    }

    #[test]
    fn legendre_card() {
        let card = run_case("legendre", &PlanOverrides::default()).unwrap();
        assert!(card.pass, "{card:?}");
        assert_eq!(card.entries.len(), 10);
        let again = run_case("legendre", &PlanOverrides::default()).unwrap();
        assert_eq!(card.entries, again.entries);
    }

    #[test]
    fn overrides() {
        let plan = builtins::default_plan(&builtins::boyd::<f64>(1e-6).unwrap()).unwrap();
        let o = PlanOverrides {
            method: Some(Method::Sinc),
            n: Some(100),
            h: Some(0.2),
            domain: None,
        };
        let s = o.apply(&plan).unwrap();
        assert_eq!(s.method, Method::Sinc);
        assert_eq!(s.n, 100);
        let bad = PlanOverrides {
            h: Some(0.2),
            ..Default::default()
        };
        assert!(bad.apply(&plan).is_err());
    }
}
