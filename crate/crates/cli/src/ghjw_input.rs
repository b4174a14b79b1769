//! Input file for `steerlab ghjw`.
//!
//! ```json
//! {
//!   "density": [[[0.7, 0], [0, 0]], [[0, 0], [0.3, 0]]],
//!   "ensembles": [
//!     [{"weight": 0.7, "state": [[1, 0], [0, 0]]},
//!      {"weight": 0.3, "state": [[0, 0], [1, 0]]}]
//!   ]
//! }
//! ```
//!
//! Instead of `density`, `"from_first_ensemble": true` takes the density of
//! the first ensemble.

use std::path::Path;

use serde::{Deserialize, Serialize};
use steerlab::ghjw::{certify, CandidateReport, CertificationReport};
use steerlab::states::json::{ensemble_from_wire, matrix_from_wire, matrix_to_wire, WireEnsemble, WireMatrix};
use steerlab::states::{ensemble_density, DensityMatrix, Ensemble};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GhjwInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<WireMatrix>,
    #[serde(default)]
    pub from_first_ensemble: bool,
    pub ensembles: Vec<WireEnsemble>,
}

impl GhjwInput {
    pub fn parse(text: &str, origin: &Path) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let input: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            CliError::Parse {
                path: origin.display().to_string(),
                line: inner.line(),
                column: inner.column(),
                field: e.path().to_string(),
                message: inner.to_string(),
            }
        })?;
        if input.ensembles.is_empty() {
            return Err(CliError::Config("\"ensembles\" must list at least one candidate".into()));
        }
        match (&input.density, input.from_first_ensemble) {
            (Some(_), true) => Err(CliError::Config(
                "give either \"density\" or \"from_first_ensemble\", not both".into(),
            )),
            (None, false) => Err(CliError::Config(
                "missing \"density\" (or set \"from_first_ensemble\": true)".into(),
            )),
            _ => Ok(input),
        }
    }

    /// The density matrix every candidate is checked against.
    pub fn resolve_density(&self, tol: f64) -> Result<DensityMatrix<f64>, CliError> {
        match &self.density {
            Some(m) => {
                let mat = matrix_from_wire(m).map_err(|e| CliError::Config(format!("density: {e}")))?;
                DensityMatrix::new(mat, tol).map_err(|e| CliError::Config(format!("density: {e}")))
            }
            None => ensemble_from_wire(&self.ensembles[0])
                .map(|e| ensemble_density(&e))
                .map_err(|e| CliError::Config(format!("ensembles[0] cannot define the density: {e}"))),
        }
    }
}

/// Certifies every candidate that parses as an ensemble; those that do not
/// are reported invalid with their construction error.
pub fn certify_input(w: &DensityMatrix<f64>, input: &GhjwInput, tol: f64) -> CertificationReport {
    let mut parsed: Vec<(usize, Ensemble<f64>)> = Vec::new();
    let mut rejected: Vec<CandidateReport> = Vec::new();
    for (index, wire) in input.ensembles.iter().enumerate() {
        match ensemble_from_wire(wire) {
            Ok(e) => parsed.push((index, e)),
            Err(err) => rejected.push(CandidateReport {
                index,
                valid: false,
                error: Some(err.to_string()),
                decomposition_residual: None,
                outcome_table: Vec::new(),
                residual_probability: None,
                bob_basis: Vec::new(),
            }),
        }
    }
    let ensembles: Vec<_> = parsed.iter().map(|(_, e)| e.clone()).collect();
    let mut report = certify(w, &ensembles, tol);
    report.purification_source = report.purification_source.map(|i| parsed[i].0);
    for c in &mut report.candidates {
        c.index = parsed[c.index].0;
    }
    report.candidates.extend(rejected);
    report.candidates.sort_by_key(|c| c.index);
    report
}

/// Echo of the input as resolved, for the report envelope.
pub fn resolved_density_wire(w: &DensityMatrix<f64>) -> WireMatrix {
    matrix_to_wire(w.matrix())
}
