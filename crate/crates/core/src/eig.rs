//! Dense solution of the pencil and the spectral diagnostics built on it.
//!
//! Pencils with a diagonal `B` are first reduced by eliminating the unknowns
//! whose `B` row vanishes (boundary-condition rows). When the remaining
//! diagonal is well conditioned the problem becomes the standard eigenproblem
//! of `diag(1/b) S`, balanced before the Hessenberg QR. Otherwise, and for
//! non-diagonal `B`, the QZ algorithm is applied to the pencil itself.

use faer::linalg::solvers::Solve;
use faer::Mat;
use rayon::prelude::*;

use crate::discretize::{assemble, reinstate_boundary, DiscretizationPlan, Method, Pencil};
use crate::error::{invalid, Result, SlError};
use crate::grid::cheb_coeffs;
use crate::interp::Pchip;
use crate::problem::{ReferenceSpectrum, SLProblem};
use crate::scalar::Scalar;

/// Eigenvalues whose `|beta|` falls below this fraction of `||B||_inf` are infinite.
pub const INFINITE_BETA_TOL: f64 = 1e-10;
/// Largest `max|b| / min|b|` for which `B` is inverted explicitly.
pub const DIAGONAL_COND_LIMIT: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverPath {
    /// Standard eigenproblem of the balanced `diag(1/b) S`.
    Standard,
    /// Generalized Schur (QZ) decomposition of the pencil.
    Qz,
}

#[derive(Clone, Debug)]
pub struct SolveOptions<T> {
    /// Eigenvalues with `|Im| > imag_tol (1 + |Re|)` are discarded.
    pub imag_tol: T,
    /// Number of eigenpairs kept; `None` keeps all.
    pub count: Option<usize>,
    /// Eigenvalues below this bound are discarded as spurious.
    pub lower_bound: Option<T>,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            imag_tol: T::lit(1e-8),
            count: None,
            lower_bound: None,
        }
    }
}

impl<T: Scalar> SolveOptions<T> {
    pub fn with_count(mut self, count: usize) -> Self {
        self.count = Some(count);
        self
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum<T: Scalar> {
    /// Ascending real parts of the retained eigenvalues.
    pub eigenvalues: Vec<T>,
    /// `|Im lambda|` of each retained eigenvalue.
    pub residual_imag: Vec<T>,
    /// Eigenvectors on the full grid, unit max-norm, first significant entry positive.
    pub vectors: Vec<Vec<T>>,
    pub nodes: Vec<T>,
    /// Per-vector coefficient magnitudes: Chebyshev coefficients, or nodal
    /// values for sinc bases.
    pub coeff_decay: Vec<Vec<T>>,
    /// Eigenvalues dropped as infinite, complex, or below the lower bound.
    pub discarded_count: usize,
    pub basis: Method,
    pub solver: SolverPath,
}

impl<T: Scalar> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `||A v - lambda B v||_inf / (||A||_inf + |lambda| ||B||_inf)` for pair `k`.
    pub fn residual(&self, pencil: &Pencil<T>, k: usize) -> T {
        let v: Vec<T> = pencil.retained.iter().map(|&i| self.vectors[k][i]).collect();
        let lam = self.eigenvalues[k];
        let m = pencil.size();
        let mut worst = T::zero();
        for i in 0..m {
            let mut s = T::zero();
            for j in 0..m {
                s = s + (pencil.a[(i, j)] - lam * pencil.b[(i, j)]) * v[j];
            }
            worst = worst.max(s.abs());
        }
        worst / (inf_norm(&pencil.a) + lam.abs() * inf_norm(&pencil.b))
    }
}

pub(crate) fn inf_norm<T: Scalar>(m: &Mat<T>) -> T {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).fold(T::zero(), |acc, j| acc + m[(i, j)].abs()))
        .fold(T::zero(), |a, b| a.max(b))
}

/// Solves with default options apart from `imag_tol` and `count`.
pub fn solve_pencil<T: Scalar>(pencil: &Pencil<T>, imag_tol: T, count: usize) -> Result<Spectrum<T>> {
    solve_pencil_with(
        pencil,
        &SolveOptions {
            imag_tol,
            count: Some(count),
            lower_bound: None,
        },
    )
}

/// Assembles and solves, applying the problem's own lower bound when the
/// options do not set one.
pub fn solve_problem<T: Scalar>(
    problem: &SLProblem<T>,
    plan: &DiscretizationPlan<T>,
    options: &SolveOptions<T>,
) -> Result<(Pencil<T>, Spectrum<T>)> {
    let pencil = assemble(problem, plan)?;
    let mut opts = options.clone();
    if opts.lower_bound.is_none() {
        opts.lower_bound = problem.lower_bound;
    }
    if let Some(c) = opts.count {
        opts.count = Some(c.min(pencil.size()));
    }
    let spectrum = solve_pencil_with(&pencil, &opts)?;
    Ok((pencil, spectrum))
}

struct RawPair<T> {
    re: T,
    im: T,
    /// Pencil-sized real vector.
    vector: Vec<T>,
}

pub fn solve_pencil_with<T: Scalar>(pencil: &Pencil<T>, options: &SolveOptions<T>) -> Result<Spectrum<T>> {
    let m = pencil.size();
    if pencil.a.ncols() != m || pencil.b.nrows() != m || pencil.b.ncols() != m {
        return invalid("pencil matrices must be square and of equal size");
    }
    if m == 0 {
        return invalid("empty pencil");
    }
    if let Some(c) = options.count {
        if c > m {
            return invalid(format!("requested {c} eigenpairs from a pencil of size {m}"));
        }
    }
    let finite = |mat: &Mat<T>| (0..m).all(|i| (0..m).all(|j| mat[(i, j)].is_finite()));
    if !finite(&pencil.a) || !finite(&pencil.b) {
        return invalid("pencil has non-finite entries");
    }

    let (raw, infinite, solver) = if pencil.b_is_diagonal() {
        solve_diagonal(pencil)?
    } else {
        let (raw, inf) = qz(&pencil.a, &pencil.b)?;
        (raw, inf, SolverPath::Qz)
    };

    let mut discarded = infinite;
    let mut kept: Vec<RawPair<T>> = Vec::with_capacity(raw.len());
    for pair in raw {
        let ok_imag = pair.im.abs() <= options.imag_tol * (T::one() + pair.re.abs());
        let ok_bound = options
            .lower_bound
            .map_or(true, |lb| pair.re >= lb - options.imag_tol * (T::one() + lb.abs()));
        if pair.re.is_finite() && ok_imag && ok_bound {
            kept.push(pair);
        } else {
            discarded += 1;
        }
    }
    kept.sort_by(|x, y| x.re.partial_cmp(&y.re).expect("finite"));
    if let Some(c) = options.count {
        kept.truncate(c);
    }

    let mut spectrum = Spectrum {
        eigenvalues: Vec::with_capacity(kept.len()),
        residual_imag: Vec::with_capacity(kept.len()),
        vectors: Vec::with_capacity(kept.len()),
        nodes: pencil.full_nodes.clone(),
        coeff_decay: Vec::with_capacity(kept.len()),
        discarded_count: discarded,
        basis: pencil.method,
        solver,
    };
    for pair in kept {
        let mut full = reinstate_boundary(&pair.vector, pencil)?;
        normalize(&mut full);
        let decay = match pencil.method {
            Method::Chebyshev => cheb_coeffs(&full)?.into_iter().map(|c| c.abs()).collect(),
            Method::Sinc => full.iter().map(|v| v.abs()).collect(),
        };
        spectrum.eigenvalues.push(pair.re);
        spectrum.residual_imag.push(pair.im.abs());
        spectrum.vectors.push(full);
        spectrum.coeff_decay.push(decay);
    }
    Ok(spectrum)
}

/// Unit max-norm, first significant component positive.
fn normalize<T: Scalar>(v: &mut [T]) {
    let max = v.iter().fold(T::zero(), |a, x| a.max(x.abs()));
    if max == T::zero() {
        return;
    }
    let cut = T::epsilon().sqrt() * max;
    let sign = v
        .iter()
        .find(|x| x.abs() > cut)
        .map_or(T::one(), |x| if *x < T::zero() { -T::one() } else { T::one() });
    for x in v.iter_mut() {
        *x = *x * sign / max;
    }
}

fn solve_diagonal<T: Scalar>(pencil: &Pencil<T>) -> Result<(Vec<RawPair<T>>, usize, SolverPath)> {
    let m = pencil.size();
    let b: Vec<T> = (0..m).map(|i| pencil.b[(i, i)]).collect();
    let bnorm = b.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    let tiny = T::lit(INFINITE_BETA_TOL) * bnorm;
    let zero_rows: Vec<usize> = (0..m).filter(|&i| b[i].abs() <= tiny).collect();
    let keep: Vec<usize> = (0..m).filter(|&i| b[i].abs() > tiny).collect();
    if keep.is_empty() {
        return Ok((vec![], m, SolverPath::Standard));
    }
    let k = keep.len();
    let z = zero_rows.len();

    // eliminate the constraint unknowns: u_z = -X u_k with X = A_zz^{-1} A_zk
    let a = &pencil.a;
    let a_kk = Mat::from_fn(k, k, |i, j| a[(keep[i], keep[j])]);
    let (s, x) = if z == 0 {
        (a_kk, None)
    } else {
        let a_zz = Mat::from_fn(z, z, |i, j| a[(zero_rows[i], zero_rows[j])]);
        let a_zk = Mat::from_fn(z, k, |i, j| a[(zero_rows[i], keep[j])]);
        let a_kz = Mat::from_fn(k, z, |i, j| a[(keep[i], zero_rows[j])]);
        let x = a_zz.partial_piv_lu().solve(&a_zk);
        if !(0..z).all(|i| (0..k).all(|j| x[(i, j)].is_finite())) {
            // singular constraint block: fall back to QZ on the whole pencil
            let (raw, inf) = qz(&pencil.a, &pencil.b)?;
            return Ok((raw, inf, SolverPath::Qz));
        }
        let s = &a_kk - &a_kz * &x;
        (s, Some(x))
    };

    let bk: Vec<T> = keep.iter().map(|&i| b[i]).collect();
    let bmax = bk.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    let bmin = bk.iter().fold(T::infinity(), |acc, v| acc.min(v.abs()));
    let (reduced, extra_inf, path) = if bmax / bmin <= T::lit(DIAGONAL_COND_LIMIT) {
        (standard(&s, &bk)?, 0, SolverPath::Standard)
    } else {
        let bmat = Mat::from_fn(k, k, |i, j| if i == j { bk[i] } else { T::zero() });
        let (raw, inf) = qz(&s, &bmat)?;
        (raw, inf, SolverPath::Qz)
    };

    let raw = reduced
        .into_iter()
        .map(|pair| {
            let mut full = vec![T::zero(); m];
            for (idx, &i) in keep.iter().enumerate() {
                full[i] = pair.vector[idx];
            }
            if let Some(x) = &x {
                for (r, &i) in zero_rows.iter().enumerate() {
                    let s = (0..k).fold(T::zero(), |acc, j| acc + x[(r, j)] * pair.vector[j]);
                    full[i] = -s;
                }
            }
            RawPair {
                re: pair.re,
                im: pair.im,
                vector: full,
            }
        })
        .collect();
    Ok((raw, z + extra_inf, path))
}

fn standard<T: Scalar>(s: &Mat<T>, b: &[T]) -> Result<Vec<RawPair<T>>> {
    let k = s.nrows();
    let mut mat = Mat::from_fn(k, k, |i, j| s[(i, j)] / b[i]);
    let d = balance(&mut mat);
    let evd = faer::linalg::solvers::Eigen::new_from_real(mat.as_ref())
        .map_err(|_| SlError::NumericalFailure { size: k })?;
    let u = evd.U();
    let vals = evd.S();
    Ok((0..k)
        .map(|c| {
            let lam = vals[c];
            let col: Vec<(T, T)> = (0..k).map(|i| (u[(i, c)].re * d[i], u[(i, c)].im * d[i])).collect();
            RawPair {
                re: lam.re,
                im: lam.im,
                vector: realify(&col),
            }
        })
        .collect())
}

/// Returns the finite pairs and the number of infinite eigenvalues.
fn qz<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Result<(Vec<RawPair<T>>, usize)> {
    let k = a.nrows();
    let gevd = faer::linalg::solvers::GeneralizedEigen::new_from_real(a.as_ref(), b.as_ref())
        .map_err(|_| SlError::NumericalFailure { size: k })?;
    let u = gevd.U();
    let alpha = gevd.S_a();
    let beta = gevd.S_b();
    let tiny = T::lit(INFINITE_BETA_TOL) * inf_norm(b);
    let mut out = Vec::with_capacity(k);
    let mut infinite = 0;
    for c in 0..k {
        let be = beta[c].re;
        if be.abs() <= tiny || !be.is_finite() {
            infinite += 1;
            continue;
        }
        let col: Vec<(T, T)> = (0..k).map(|i| (u[(i, c)].re, u[(i, c)].im)).collect();
        out.push(RawPair {
            re: alpha[c].re / be,
            im: alpha[c].im / be,
            vector: realify(&col),
        });
    }
    Ok((out, infinite))
}

/// Rotates a complex vector so its largest entry is real, then keeps the real part.
fn realify<T: Scalar>(v: &[(T, T)]) -> Vec<T> {
    let (mut best, mut big) = (0, T::zero());
    for (i, &(re, im)) in v.iter().enumerate() {
        let mag = re.hypot(im);
        if mag > big {
            best = i;
            big = mag;
        }
    }
    if big == T::zero() {
        return vec![T::zero(); v.len()];
    }
    let (cr, ci) = (v[best].0 / big, -v[best].1 / big);
    v.iter().map(|&(re, im)| re * cr - im * ci).collect()
}

/// Radix-2 diagonal similarity scaling in place; returns the scaling `d` with
/// `balanced = D^{-1} M D`.
fn balance<T: Scalar>(m: &mut Mat<T>) -> Vec<T> {
    let n = m.nrows();
    let radix = T::lit(2.0);
    let sq = radix * radix;
    let mut d = vec![T::one(); n];
    for _sweep in 0..100 {
        let mut done = true;
        for i in 0..n {
            let mut c = T::zero();
            let mut r = T::zero();
            for j in 0..n {
                if j != i {
                    c = c + m[(j, i)].abs();
                    r = r + m[(i, j)].abs();
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut g = r / radix;
            while c < g {
                f = f * radix;
                c = c * sq;
            }
            g = r * radix;
            while c > g {
                f = f / radix;
                c = c / sq;
            }
            if (c + r) / f < T::lit(0.95) * s {
                done = false;
                d[i] = d[i] * f;
                for j in 0..n {
                    m[(i, j)] = m[(i, j)] / f;
                    m[(j, i)] = m[(j, i)] * f;
                }
            }
        }
        if done {
            break;
        }
    }
    d
}

/// Per-index relative drift between two sorted spectra.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DriftReport<T> {
    pub alpha_name: String,
    pub alpha1: T,
    pub alpha2: T,
    pub drifts: Vec<T>,
    /// `true` where `lambda^{alpha1}` is numerically zero and the entry is an absolute difference.
    pub absolute: Vec<bool>,
    pub threshold: T,
    pub good_indices: Vec<usize>,
}

/// Eigenvalues below this fraction of the largest compared magnitude are
/// treated as zero by the drift.
pub const DRIFT_ZERO_GUARD: f64 = 1e-10;

/// `|l1_j - l2_j| / |l1_j|` over the first `min(len)` indices.
pub fn relative_drift<T: Scalar>(
    l1: &[T],
    l2: &[T],
    alpha_name: &str,
    alpha1: T,
    alpha2: T,
    threshold: T,
) -> Result<DriftReport<T>> {
    let n = l1.len().min(l2.len());
    if n == 0 {
        return invalid("relative drift needs two non-empty spectra");
    }
    let scale = l1[..n].iter().fold(T::zero(), |a, v| a.max(v.abs()));
    let guard = T::lit(DRIFT_ZERO_GUARD) * scale;
    let mut drifts = Vec::with_capacity(n);
    let mut absolute = Vec::with_capacity(n);
    for j in 0..n {
        let diff = (l1[j] - l2[j]).abs();
        if l1[j].abs() <= guard || l1[j] == T::zero() {
            drifts.push(diff);
            absolute.push(true);
        } else {
            drifts.push(diff / l1[j].abs());
            absolute.push(false);
        }
    }
    let good_indices = (0..n).filter(|&j| drifts[j] <= threshold).collect();
    Ok(DriftReport {
        alpha_name: alpha_name.to_string(),
        alpha1,
        alpha2,
        drifts,
        absolute,
        threshold,
        good_indices,
    })
}

#[derive(Clone, Debug)]
pub struct SweepResult<T: Scalar> {
    pub grid: Vec<T>,
    /// `tracks[n][i]` is the `n`-th sorted eigenvalue at `grid[i]`.
    pub tracks: Vec<Vec<Option<T>>>,
    /// Shape-preserving interpolant through the available samples of each track.
    pub interpolants: Vec<Option<Pchip<T>>>,
    /// Error message for grid points whose solve failed.
    pub failures: Vec<Option<String>>,
    /// Smallest `(lambda_1 - lambda_0) / |lambda_0|` over the grid.
    pub min_gap: Option<T>,
    pub min_gap_at: Option<T>,
}

/// Solves the family at each grid value (in parallel) and forms
/// sorted-index tracks.
pub fn sweep<T, F>(
    family: F,
    tau_grid: &[T],
    plan: &DiscretizationPlan<T>,
    track_count: usize,
    options: &SolveOptions<T>,
) -> Result<SweepResult<T>>
where
    T: Scalar,
    F: Fn(T) -> Result<SLProblem<T>> + Sync,
{
    if tau_grid.is_empty() {
        return invalid("sweep needs at least one parameter value");
    }
    if tau_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("sweep grid must be strictly increasing");
    }
    if track_count == 0 {
        return invalid("sweep needs at least one track");
    }
    let opts = SolveOptions {
        count: Some(track_count),
        ..options.clone()
    };
    let runs: Vec<Result<Vec<T>>> = tau_grid
        .par_iter()
        .map(|&t| {
            let problem = family(t)?;
            solve_problem(&problem, plan, &opts).map(|(_, s)| s.eigenvalues)
        })
        .collect();

    let g = tau_grid.len();
    let mut tracks = vec![vec![None; g]; track_count];
    let mut failures = vec![None; g];
    for (i, run) in runs.into_iter().enumerate() {
        match run {
            Ok(vals) => {
                for (n, v) in vals.into_iter().enumerate() {
                    tracks[n][i] = Some(v);
                }
            }
            Err(e) => failures[i] = Some(e.to_string()),
        }
    }
    let interpolants = tracks
        .iter()
        .map(|track| {
            let (xs, ys): (Vec<T>, Vec<T>) = tau_grid
                .iter()
                .zip(track)
                .filter_map(|(&t, v)| v.map(|v| (t, v)))
                .unzip();
            if xs.is_empty() {
                None
            } else {
                Pchip::new(xs, ys).ok()
            }
        })
        .collect();
    let mut min_gap: Option<(T, T)> = None;
    if track_count >= 2 {
        for i in 0..g {
            if let (Some(l0), Some(l1)) = (tracks[0][i], tracks[1][i]) {
                if l0 != T::zero() {
                    let gap = (l1 - l0) / l0.abs();
                    if min_gap.map_or(true, |(best, _)| gap < best) {
                        min_gap = Some((gap, tau_grid[i]));
                    }
                }
            }
        }
    }
    Ok(SweepResult {
        grid: tau_grid.to_vec(),
        tracks,
        interpolants,
        failures,
        min_gap: min_gap.map(|m| m.0),
        min_gap_at: min_gap.map(|m| m.1),
    })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DecaySummary<T> {
    pub vector_index: usize,
    pub max: T,
    /// Median magnitude of the trailing 5% of coefficients.
    pub plateau: T,
    /// `plateau <= 1e-10 max`.
    pub resolved: bool,
}

pub const RESOLVED_RATIO: f64 = 1e-10;

pub fn decay_summary<T: Scalar>(vector_index: usize, coeffs: &[T]) -> DecaySummary<T> {
    let max = coeffs.iter().fold(T::zero(), |a, c| a.max(c.abs()));
    let len = coeffs.len();
    let tail_len = ((len as f64) * 0.05).ceil().max(1.0) as usize;
    let mut tail: Vec<T> = coeffs[len.saturating_sub(tail_len)..].iter().map(|c| c.abs()).collect();
    tail.sort_by(|a, b| a.partial_cmp(b).expect("finite coefficients"));
    let plateau = match tail.len() {
        0 => T::zero(),
        t if t % 2 == 1 => tail[t / 2],
        t => (tail[t / 2 - 1] + tail[t / 2]) / T::lit(2.0),
    };
    DecaySummary {
        vector_index,
        max,
        plateau,
        resolved: plateau <= T::lit(RESOLVED_RATIO) * max,
    }
}

pub fn coeff_decay_report<T: Scalar>(spectrum: &Spectrum<T>) -> Vec<DecaySummary<T>> {
    spectrum
        .coeff_decay
        .iter()
        .enumerate()
        .map(|(k, c)| decay_summary(k, c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MatchedValue<T> {
    pub reference_index: usize,
    pub computed: T,
    pub reference: T,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Partition<T> {
    pub matched: Vec<MatchedValue<T>>,
    /// Computed values with no reference within 5%.
    pub tail: Vec<T>,
    /// Consecutive differences of `tail`.
    pub tail_spacing: Vec<T>,
}

pub const PARTITION_REL_TOL: f64 = 0.05;

/// Splits computed eigenvalues into those within 5% of a reference value and the rest.
pub fn spectrum_partition<T: Scalar>(eigenvalues: &[T], reference: &ReferenceSpectrum<T>) -> Partition<T> {
    let mut candidates: Vec<(usize, T)> = reference.values().iter().map(|v| (v.index, v.value)).collect();
    if reference.has_closed_form() {
        for i in 0..eigenvalues.len() {
            if !candidates.iter().any(|c| c.0 == i) {
                candidates.push((i, reference.closed_form(i).expect("closed form")));
            }
        }
    }
    let mut used = vec![false; candidates.len()];
    let mut matched = Vec::new();
    let mut tail = Vec::new();
    let tol = T::lit(PARTITION_REL_TOL);
    for &lam in eigenvalues {
        let best = candidates
            .iter()
            .enumerate()
            .filter(|(k, (_, r))| !used[*k] && (lam - *r).abs() <= tol * r.abs().max(T::epsilon()))
            .min_by(|a, b| {
                (lam - a.1 .1)
                    .abs()
                    .partial_cmp(&(lam - b.1 .1).abs())
                    .expect("finite")
            })
            .map(|(k, _)| k);
        match best {
            Some(k) => {
                used[k] = true;
                matched.push(MatchedValue {
                    reference_index: candidates[k].0,
                    computed: lam,
                    reference: candidates[k].1,
                });
            }
            None => tail.push(lam),
        }
    }
    let tail_spacing = tail.windows(2).map(|w| w[1] - w[0]).collect();
    Partition {
        matched,
        tail,
        tail_spacing,
    }
}
