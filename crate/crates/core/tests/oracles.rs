//! Reference values checked against independently computed oracles.

use std::f64::consts::PI;

use slcoll::builtins;
use slcoll::{solve_problem, SolveOptions};

/// `J_0` from its power series below 8 and the Hankel asymptotic expansion above.
fn bessel_j0(x: f64) -> f64 {
    if x.abs() < 8.0 {
        let y = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= -y / (k as f64 * k as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    // P = t0 - t2 + t4 - ..., Q = t1 - t3 + ..., t_k the Hankel terms for nu = 0
    let z = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    for k in 1..30 {
        let a = (2 * k - 1) as f64;
        let next = term * -a * a / (k as f64 * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
    }
    let chi = x - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn j0_zeros(count: usize) -> Vec<f64> {
    let mut zeros = Vec::new();
    let mut lo = 0.5;
    while zeros.len() < count {
        let hi = lo + 0.05;
        if bessel_j0(lo).signum() != bessel_j0(hi).signum() {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if bessel_j0(a).signum() == bessel_j0(m).signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        lo = hi;
    }
    zeros
}

#[test]
fn j0_oracle_sanity() {
    assert!((bessel_j0(0.0) - 1.0).abs() < 1e-15);
    // both branches agree where they meet
    let below = {
        let y: f64 = 16.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..80 {
            term *= -y / (k as f64 * k as f64);
            sum += term;
        }
        sum
    };
    assert!((below - bessel_j0(8.0)).abs() < 1e-9);
    // asymptotic zeros follow McMahon's leading term
    let z = j0_zeros(9);
    for (k, v) in z.iter().enumerate().skip(4) {
        let beta = (k as f64 + 0.75) * PI;
        assert!((v - (beta + 1.0 / (8.0 * beta))).abs() < 1e-3);
    }
}

#[test]
fn registry_j0_zeros_match_oracle() {
    let z = j0_zeros(9);
    for (k, (a, b)) in z.iter().zip(builtins::J0_ZEROS).enumerate() {
        assert!((a - b).abs() <= 1e-9 * b, "zero {k}: oracle {a} registry {b}");
    }
}

#[test]
fn bessel_sqrt_eigenvalues_hit_j0_zeros() {
    let problem = builtins::bessel::<f64>(0.0).unwrap();
    let plan = builtins::default_plan(&problem).unwrap();
    assert_eq!(plan.n, 1024);
    let (_, s) = solve_problem(&problem, &plan, &SolveOptions::default().with_count(9)).unwrap();
    let z = j0_zeros(9);
    for k in [0, 1, 8] {
        let err = (s.eigenvalues[k].sqrt() - z[k]).abs() / z[k];
        assert!(err <= 1e-4, "index {k}: sqrt(lambda) = {} vs {} ({err:e})", s.eigenvalues[k].sqrt(), z[k]);
    }
}

#[test]
fn legendre_closed_form() {
    let problem = builtins::legendre::<f64>();
    let plan = builtins::default_plan(&problem).unwrap();
    let (_, s) = solve_problem(&problem, &plan, &SolveOptions::default().with_count(10)).unwrap();
    for (n, v) in s.eigenvalues.iter().enumerate() {
        let exact = (n * (n + 1)) as f64 + 0.25;
        assert!((v - exact).abs() <= 1e-9 * exact, "{n}: {v}");
    }
}

/// Clenshaw–Curtis weights on descending Chebyshev–Gauss–Lobatto nodes of `[-1, 1]`.
fn clenshaw_curtis(n_points: usize) -> Vec<f64> {
    let n = n_points - 1;
    let nf = n as f64;
    let mut w = vec![0.0; n_points];
    let mut v = vec![1.0; n.saturating_sub(1)];
    let theta = |j: usize| j as f64 * PI / nf;
    if n % 2 == 0 {
        w[0] = 1.0 / (nf * nf - 1.0);
        w[n] = w[0];
        for k in 1..n / 2 {
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * k as f64 * theta(i + 1)).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
        }
        for (i, vi) in v.iter_mut().enumerate() {
            *vi -= (nf * theta(i + 1)).cos() / (nf * nf - 1.0);
        }
    } else {
        w[0] = 1.0 / (nf * nf);
        w[n] = w[0];
        for k in 1..=(n - 1) / 2 {
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * k as f64 * theta(i + 1)).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
        }
    }
    for (i, vi) in v.iter().enumerate() {
        w[i + 1] = 2.0 * vi / nf;
    }
    w
}

#[test]
fn clenshaw_curtis_integrates_polynomials() {
    let w = clenshaw_curtis(17);
    let x: Vec<f64> = (0..17).map(|j| (j as f64 * PI / 16.0).cos()).collect();
    let q = |f: &dyn Fn(f64) -> f64| w.iter().zip(&x).map(|(wi, xi)| wi * f(*xi)).sum::<f64>();
    assert!((q(&|_| 1.0) - 2.0).abs() < 1e-14);
    assert!((q(&|t| t * t) - 2.0 / 3.0).abs() < 1e-14);
    assert!((q(&|t| t.powi(10)) - 2.0 / 11.0).abs() < 1e-14);
}

#[test]
fn boyd_vectors_are_orthogonal() {
    let problem = builtins::boyd::<f64>(1e-6).unwrap();
    let plan = builtins::default_plan(&problem).unwrap();
    let (_, s) = solve_problem(&problem, &plan, &SolveOptions::default().with_count(4)).unwrap();
    let half = (plan.domain.1 - plan.domain.0) / 2.0;
    let w: Vec<f64> = clenshaw_curtis(plan.n).into_iter().map(|v| v * half).collect();
    let inner = |u: &[f64], v: &[f64]| u.iter().zip(v).zip(&w).map(|((a, b), c)| a * b * c).sum::<f64>();
    let unit: Vec<Vec<f64>> = s
        .vectors
        .iter()
        .map(|u| {
            let norm = inner(u, u).sqrt();
            u.iter().map(|v| v / norm).collect()
        })
        .collect();
    for i in 0..4 {
        for j in 0..i {
            let ip = inner(&unit[i], &unit[j]);
            assert!(ip.abs() <= 1e-6, "<u{i}, u{j}> = {ip:e}");
        }
    }
}
