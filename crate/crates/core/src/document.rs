//! JSON state documents: a subsystem list with roles plus a state
//! description, either a named family or explicit amplitudes / matrix.
//!
//! ```json
//! {
//!   "subsystems": [
//!     {"label": "C", "dim": 2, "role": "transfer"},
//!     {"label": "B1", "dim": 2, "role": "bob_qsi"},
//!     {"label": "R", "dim": 2, "role": "reference"}
//!   ],
//!   "state": {"kind": "ghz"}
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Explicit `matrix` entries are a
//! list of rows.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::costs::PartitionSpec;
use crate::error::{QsiError, Result};
use crate::hilbert::{factory, MultipartiteState, PureState, Role, StateKind, Subsystem, SubsystemLayout};
use crate::matrix::{ComplexMatrix, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsystemEntry {
    pub label: String,
    pub dim: usize,
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Bell,
    Ghz,
    W,
    Werner,
    Pure,
    Density,
    RandomPure,
    RandomMixed,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub kind: DocumentKind,
    #[serde(default)]
    pub params: StateParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub subsystems: Vec<SubsystemEntry>,
    pub state: StateSpec,
}

fn doc_err(msg: impl Into<String>) -> QsiError {
    QsiError::Document(msg.into())
}

impl StateDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    fn layout(&self) -> Result<SubsystemLayout> {
        if self.subsystems.is_empty() {
            return Err(doc_err("subsystems: at least one subsystem is required"));
        }
        for (k, s) in self.subsystems.iter().enumerate() {
            if s.dim < 2 {
                return Err(doc_err(format!(
                    "subsystems[{k}].dim: dim must be >= 2 (got {} for `{}`)",
                    s.dim, s.label
                )));
            }
        }
        let transfers = self.subsystems.iter().filter(|s| s.role == Role::Transfer).count();
        if transfers != 1 {
            return Err(doc_err(format!(
                "subsystems[].role: exactly one subsystem must have role transfer, found {transfers}"
            )));
        }
        SubsystemLayout::new(
            self.subsystems
                .iter()
                .map(|s| Subsystem::new(s.label.clone(), s.dim, s.role))
                .collect(),
        )
        .map_err(|e| doc_err(format!("subsystems: {e}")))
    }

    /// Builds the state and its partition. `default_seed` is used by random
    /// kinds whose `params.seed` is absent.
    pub fn build(&self, default_seed: u64) -> Result<(MultipartiteState, PartitionSpec)> {
        let layout = self.layout()?;
        let dims = layout.dims();
        let all_qubits = dims.iter().all(|&d| d == 2);
        let params = &self.state.params;
        let seed = params.seed.unwrap_or(default_seed);

        let require_qubits = |kind: &str, count: Option<usize>| -> Result<()> {
            if !all_qubits {
                return Err(doc_err(format!("state.kind: `{kind}` requires every subsystem to have dim 2")));
            }
            if let Some(c) = count {
                if dims.len() != c {
                    return Err(doc_err(format!(
                        "state.kind: `{kind}` requires {c} subsystems, document lists {}",
                        dims.len()
                    )));
                }
            }
            Ok(())
        };
        let check_n = |n: Option<usize>| -> Result<usize> {
            match n {
                Some(n) if n != dims.len() => Err(doc_err(format!(
                    "state.params.n: n = {n} does not match the {} listed subsystems",
                    dims.len()
                ))),
                _ => Ok(dims.len()),
            }
        };

        let raw = match self.state.kind {
            DocumentKind::Bell => {
                require_qubits("bell", Some(2))?;
                factory(&StateKind::Bell)?
            }
            DocumentKind::Ghz => {
                let n = check_n(params.n)?;
                require_qubits("ghz", None)?;
                factory(&StateKind::Ghz(n))?
            }
            DocumentKind::W => {
                let n = check_n(params.n)?;
                require_qubits("w", None)?;
                factory(&StateKind::W(n))?
            }
            DocumentKind::Werner => {
                require_qubits("werner", Some(2))?;
                let p = params.p.ok_or_else(|| doc_err("state.params.p: required for werner"))?;
                factory(&StateKind::Werner(p)).map_err(|e| doc_err(format!("state.params.p: {e}")))?
            }
            DocumentKind::RandomPure => factory(&StateKind::RandomPure { dims: dims.clone(), seed })?,
            DocumentKind::RandomMixed => {
                let rank = params.rank.ok_or_else(|| doc_err("state.params.rank: required for random_mixed"))?;
                factory(&StateKind::RandomMixed {
                    dims: dims.clone(),
                    rank,
                    seed,
                })
                .map_err(|e| doc_err(format!("state.params.rank: {e}")))?
            }
            DocumentKind::Pure => {
                let amps = self
                    .state
                    .amplitudes
                    .as_ref()
                    .ok_or_else(|| doc_err("state.amplitudes: required for kind `pure`"))?;
                if amps.len() != layout.total_dim() {
                    return Err(doc_err(format!(
                        "state.amplitudes: {} entries, product of dims is {}",
                        amps.len(),
                        layout.total_dim()
                    )));
                }
                let amps = amps.iter().map(|&[re, im]| C64::new(re, im)).collect();
                let psi = PureState::new(layout.clone(), amps).map_err(|e| doc_err(format!("state.amplitudes: {e}")))?;
                psi.density()
            }
            DocumentKind::Density => {
                let rows = self
                    .state
                    .matrix
                    .as_ref()
                    .ok_or_else(|| doc_err("state.matrix: required for kind `density`"))?;
                let d = layout.total_dim();
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(doc_err(format!(
                        "state.matrix: must be {d}x{d} (product of dims)"
                    )));
                }
                let data = rows
                    .iter()
                    .flat_map(|r| r.iter().map(|&[re, im]| C64::new(re, im)))
                    .collect();
                let rho = ComplexMatrix::new(d, d, data).map_err(|e| doc_err(format!("state.matrix: {e}")))?;
                MultipartiteState::new(layout.clone(), rho).map_err(|e| doc_err(format!("state.matrix: {e}")))?
            }
        };

        let state = raw.with_layout(layout)?;
        let partition = PartitionSpec::from_state(&state)?;
        Ok((state, partition))
    }
}

/// Parses document text and builds the state with its partition.
pub fn parse_state_document(text: &str, default_seed: u64) -> Result<(MultipartiteState, PartitionSpec)> {
    StateDocument::from_json(text)?.build(default_seed)
}

/// `sha256:<hex>` of the canonical form of a JSON document (keys sorted,
/// no insignificant whitespace).
pub fn input_digest(text: &str) -> Result<String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
    let canonical = serde_json::to_string(&value).expect("value serializes");
    let hash = Sha256::digest(canonical.as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    Ok(format!("sha256:{hex}"))
}
