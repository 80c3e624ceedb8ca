//! Petz recovery of `S_2` from `S_1`, quantum Markov chain detection, and the
//! fidelity bound `F(rho, R(rho_{C S_1})) >= 2^{-I(C;S_2|S_1)/2}`.
//!
//! The plain Petz map is used. The bound is known to hold for some recovery
//! map, not necessarily this one, so reports record whether it is met
//! instead of assuming it.

use std::collections::HashSet;

use serde::Serialize;

use crate::entropy::{fidelity, qcmi};
use crate::error::{QsiError, Result};
use crate::hilbert::MultipartiteState;
use crate::matrix::{ComplexMatrix, DEFAULT_ZERO_CUTOFF};

/// Trace lost to the support projection above which a report is flagged.
pub const TRACE_DEFICIENCY_FLAG: f64 = 1e-6;

/// Slack for comparing the achieved fidelity with the bound.
pub const BOUND_SLACK: f64 = 1e-8;

/// Labels of the three parties, in output order `C, S_1, S_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoverySplit {
    pub c: Vec<String>,
    pub s1: Vec<String>,
    pub s2: Vec<String>,
}

impl RecoverySplit {
    pub fn new<S: AsRef<str>>(c: &[S], s1: &[S], s2: &[S]) -> Self {
        let own = |v: &[S]| v.iter().map(|s| s.as_ref().to_string()).collect();
        Self {
            c: own(c),
            s1: own(s1),
            s2: own(s2),
        }
    }

    fn ordered(&self) -> Vec<String> {
        self.c.iter().chain(&self.s1).chain(&self.s2).cloned().collect()
    }

    fn validate(&self, state: &MultipartiteState) -> Result<()> {
        if self.c.is_empty() || self.s1.is_empty() || self.s2.is_empty() {
            return Err(QsiError::InvalidParameter("C, S1 and S2 must all be non-empty".into()));
        }
        let mut seen = HashSet::new();
        for l in self.ordered() {
            state.layout().position(&l)?;
            if !seen.insert(l.clone()) {
                return Err(QsiError::OverlappingLabels(l));
            }
        }
        if seen.len() != state.layout().len() {
            let missing = state
                .layout()
                .labels()
                .into_iter()
                .find(|l| !seen.contains(*l))
                .unwrap_or_default();
            return Err(QsiError::InvalidPartition(format!(
                "C, S1, S2 must cover the layout; `{missing}` is unassigned (trace it out first)"
            )));
        }
        Ok(())
    }
}

/// Output of [`petz_recover`].
#[derive(Clone, Debug)]
pub struct Recovered {
    /// Recovered state on `C S_1 S_2`, trace 1.
    pub state: MultipartiteState,
    /// `1 - Tr` of the raw map output after support projection.
    pub trace_deficiency: f64,
}

/// Applies `X -> rho_{S1S2}^{1/2} (rho_{S1}^{-1/2} X rho_{S1}^{-1/2} (x) I_{S2}) rho_{S1S2}^{1/2}`
/// to `rho_{C S1}`, each operator extended by the identity on `C`. The
/// inverse square root is taken on the support of `rho_{S1}`.
pub fn petz_recover(state: &MultipartiteState, split: &RecoverySplit) -> Result<Recovered> {
    split.validate(state)?;
    let ordered = state.permute(&split.ordered())?;
    let c_s1: Vec<String> = split.c.iter().chain(&split.s1).cloned().collect();
    let s1_s2: Vec<String> = split.s1.iter().chain(&split.s2).cloned().collect();

    let layout = ordered.layout();
    let d_c = layout.dim_of(&split.c)?;
    let d_s2 = layout.dim_of(&split.s2)?;

    let rho_c_s1 = ordered.partial_trace(&c_s1)?;
    let rho_s1 = ordered.partial_trace(&split.s1)?;
    let rho_s1_s2 = ordered.partial_trace(&s1_s2)?;

    let id_c = ComplexMatrix::identity(d_c);
    let id_s2 = ComplexMatrix::identity(d_s2);
    let sqrt_s1_s2 = id_c.tensor(&rho_s1_s2.rho().sqrt_psd()?);
    let inv_sqrt_s1 = id_c.tensor(&rho_s1.rho().pinv_sqrt()?).tensor(&id_s2);
    let k = &sqrt_s1_s2 * &inv_sqrt_s1;
    let input = rho_c_s1.rho().tensor(&id_s2);
    let raw = (&(&k * &input) * &k.adjoint()).hermitian_part();

    let eig = raw.eig_hermitian()?;
    let cutoff = eig.support_cutoff(DEFAULT_ZERO_CUTOFF);
    let projected = eig.map_spectrum(|l| if l > cutoff { l } else { 0.0 });
    let kept_trace = projected.trace()?.re;
    let trace_deficiency = 1.0 - kept_trace;
    if kept_trace <= 0.0 {
        return Err(QsiError::InvalidDensity {
            check: "recovered operator has no positive support",
            measured: kept_trace,
        });
    }
    let normalized = projected.scale_real(1.0 / kept_trace);
    Ok(Recovered {
        state: ordered.with_rho_unchecked(normalized),
        trace_deficiency,
    })
}

/// Recovery fidelity against the bound `2^{-I(C;S2|S1)/2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryReport {
    /// `I(C; S2 | S1)`
    pub qcmi: f64,
    pub achieved_fidelity: f64,
    pub bound: f64,
    pub bound_satisfied: bool,
    pub trace_deficiency: f64,
    /// Trace deficiency exceeded [`TRACE_DEFICIENCY_FLAG`].
    pub flagged: bool,
}

pub fn recovery_report(state: &MultipartiteState, split: &RecoverySplit) -> Result<RecoveryReport> {
    split.validate(state)?;
    let qcmi = qcmi(state, &split.c, &split.s2, &split.s1)?.0;
    let recovered = petz_recover(state, split)?;
    let target = state.permute(&split.ordered())?;
    let achieved_fidelity = fidelity(&target, &recovered.state)?;
    let bound = 2f64.powf(-qcmi.max(0.0) / 2.0);
    Ok(RecoveryReport {
        qcmi,
        achieved_fidelity,
        bound,
        bound_satisfied: achieved_fidelity >= bound - BOUND_SLACK,
        trace_deficiency: recovered.trace_deficiency,
        flagged: recovered.trace_deficiency.abs() > TRACE_DEFICIENCY_FLAG,
    })
}

/// `I(C; S2 | S1) <= tol`.
pub fn is_markov(state: &MultipartiteState, split: &RecoverySplit, tol: f64) -> Result<bool> {
    split.validate(state)?;
    Ok(qcmi(state, &split.c, &split.s2, &split.s1)?.0 <= tol)
}
