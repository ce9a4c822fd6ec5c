//! Spectral collocation eigensolvers for singular second-order
//! Sturm–Liouville problems
//!
//! ```text
//! -(p u')' + q u = lambda r u,   a < x < b
//! ```
//!
//! The crate builds Chebyshev (Gauss–Lobatto) and sinc collocation
//! discretizations, assembles the resulting matrix pencil `(A, B)` with the
//! requested boundary treatment, solves it densely, filters infinite and
//! spurious eigenvalues, and offers the validation tools used to decide which
//! eigenvalues can be trusted: relative drift between two runs, Chebyshev
//! coefficient decay, and partitions against reference spectra.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! built-in benchmark registry and the command-line tool use.

pub mod bench;
pub mod builtins;
pub mod discretize;
pub mod eig;
mod error;
pub mod grid;
pub mod interp;
pub mod problem;
pub mod report;
mod scalar;

pub use error::{Result, SlError};
pub use scalar::Scalar;

pub use discretize::{assemble, reinstate_boundary, BcStrategy, DiscretizationPlan, Grading, Method, Pencil};
pub use eig::{
    coeff_decay_report, relative_drift, solve_pencil, solve_pencil_with, solve_problem, spectrum_partition, sweep, DecaySummary,
    DriftReport, Partition, SolveOptions, SolverPath, Spectrum, SweepResult,
};
pub use grid::{cgl_nodes, cheb_coeffs, cheb_diff, cheb_values, map_matrices, sinc_d2, AffineMap, ChebGrid, SincGrid};
pub use problem::{BoundaryCondition, HardnessVerdict, ReferenceSpectrum, SLProblem, Side};

pub type ChebGrid64 = ChebGrid<f64>;
pub type SincGrid64 = SincGrid<f64>;
pub type AffineMap64 = AffineMap<f64>;
pub type Problem64 = SLProblem<f64>;
pub type Plan64 = DiscretizationPlan<f64>;
pub type Pencil64 = Pencil<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type DriftReport64 = DriftReport<f64>;
pub type SweepResult64 = SweepResult<f64>;

pub type ChebGrid32 = ChebGrid<f32>;
pub type Pencil32 = Pencil<f32>;
pub type Spectrum32 = Spectrum<f32>;
