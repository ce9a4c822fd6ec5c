//! Run records: the JSON document written by `slcoll solve` and friends, and
//! the coefficient-decay CSV.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::discretize::{DiscretizationPlan, Method, Pencil};
use crate::eig::{coeff_decay_report, DecaySummary, DriftReport, SolverPath, Spectrum, SweepResult};
use crate::error::Result;
use crate::problem::{SLProblem, Side};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub grid: Vec<f64>,
    pub tracks: Vec<Vec<Option<f64>>>,
    pub failures: Vec<Option<String>>,
    pub min_gap: Option<f64>,
    pub min_gap_at: Option<f64>,
}

impl From<&SweepResult<f64>> for SweepRecord {
    fn from(s: &SweepResult<f64>) -> Self {
        Self {
            grid: s.grid.clone(),
            tracks: s.tracks.clone(),
            failures: s.failures.clone(),
            min_gap: s.min_gap,
            min_gap_at: s.min_gap_at,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub tool_version: String,
    pub problem: String,
    pub bc_left: String,
    pub bc_right: String,
    pub plan: DiscretizationPlan<f64>,
    pub basis: Method,
    pub solver: SolverPath,
    pub pencil_size: usize,
    pub removed_indices: Vec<usize>,
    pub replaced_rows: Vec<(usize, String)>,
    pub eigenvalues: Vec<f64>,
    pub residual_imag: Vec<f64>,
    pub discarded_count: usize,
    pub decay: Vec<DecaySummary<f64>>,
    /// `|c_k|` per retained eigenvector.
    pub coefficients: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftReport<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepRecord>,
    pub created_unix: u64,
}

impl RunRecord {
    pub fn new(
        problem: &SLProblem<f64>,
        plan: &DiscretizationPlan<f64>,
        pencil: &Pencil<f64>,
        spectrum: &Spectrum<f64>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            problem: problem.name.clone(),
            bc_left: problem.bc(Side::Left).describe(),
            bc_right: problem.bc(Side::Right).describe(),
            plan: plan.clone(),
            basis: spectrum.basis,
            solver: spectrum.solver,
            pencil_size: pencil.size(),
            removed_indices: pencil.removed_indices.clone(),
            replaced_rows: pencil.replaced_rows.clone(),
            eigenvalues: spectrum.eigenvalues.clone(),
            residual_imag: spectrum.residual_imag.clone(),
            discarded_count: spectrum.discarded_count,
            decay: coeff_decay_report(spectrum),
            coefficients: spectrum
                .coeff_decay
                .iter()
                .map(|c| c.iter().map(|v| v.abs()).collect())
                .collect(),
            drift: None,
            sweep: None,
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    /// `index,eigenvalue,residual_imag` rows.
    pub fn eigenvalue_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,residual_imag\n");
        for (i, (v, r)) in self.eigenvalues.iter().zip(&self.residual_imag).enumerate() {
            out.push_str(&format!("{i},{v:e},{r:e}\n"));
        }
        out
    }
}

/// Writes `vector_index,coeff_index,magnitude` rows with LF line endings.
pub fn emit_decay_csv(record: &RunRecord, path: &Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    w.write_all(b"vector_index,coeff_index,magnitude\n")?;
    for (v, coeffs) in record.coefficients.iter().enumerate() {
        for (k, m) in coeffs.iter().enumerate() {
            writeln!(w, "{v},{k},{m:e}")?;
        }
    }
    w.flush()?;
    Ok(())
}
