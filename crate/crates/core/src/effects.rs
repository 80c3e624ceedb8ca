//! Effects of quantum side information on the optimal costs.
//!
//! The effect of using `A_1..A_i` and `B_1..B_j` on a cost `O` is the
//! reduction `O_{0,0} - O_{i,j}`. It splits into an Alice part `O_{0,0} -
//! O_{i,0}` and a Bob part `O_{0,0} - O_{0,j}`, each of which has a closed
//! form in terms of `I(C_A; A_1..A_i)` and `I(C_A; B_1..B_j)`:
//!
//! | cost | Alice part   | Bob part   |
//! |------|--------------|------------|
//! | Q    | `I_A / 2`    | `I_B / 2`  |
//! | E    | `-I_A / 2`   | `I_B / 2`  |
//! | c    | `I_A`        | `I_B`      |
//! | e    | `0`          | `I_B`      |
//!
//! Additional effects (enlarging the used QSI from `(i1, j1)` to `(i2, j2)`)
//! follow the same table with the mutual informations replaced by
//! `I(C_A; A_{i1+1}..A_{i2} | A_1..A_{i1})` and its Bob analogue.
//!
//! Every report carries both the value computed from two cost evaluations
//! and the closed form, so the two can be compared.

use std::fmt;

use serde::Serialize;

use crate::costs::{cost_terms, transfer_information, PartitionSpec, UsageSelection};
use crate::entropy::conditional_mutual_information_or_zero;
use crate::error::{QsiError, Result};
use crate::hilbert::MultipartiteState;

/// Tolerance for effect identities.
pub const EFFECT_TOL: f64 = 1e-8;

/// Which optimal cost an effect refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ResourceType {
    /// `Q`, qubits of redistribution.
    #[serde(rename = "Q")]
    Qubits,
    /// `E`, ebits of redistribution.
    #[serde(rename = "E")]
    RedistributionEbits,
    /// `c`, bits of merging.
    #[serde(rename = "c")]
    Bits,
    /// `e`, ebits of merging.
    #[serde(rename = "e")]
    MergingEbits,
}

impl ResourceType {
    pub const ALL: [ResourceType; 4] = [
        ResourceType::Qubits,
        ResourceType::RedistributionEbits,
        ResourceType::Bits,
        ResourceType::MergingEbits,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            ResourceType::Qubits => "Q",
            ResourceType::RedistributionEbits => "E",
            ResourceType::Bits => "c",
            ResourceType::MergingEbits => "e",
        }
    }

    pub fn from_symbol(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.symbol() == s)
            .ok_or_else(|| QsiError::InvalidParameter(format!("unknown resource type `{s}`")))
    }

    fn cost(self, state: &MultipartiteState, partition: &PartitionSpec, i: usize, j: usize) -> Result<f64> {
        let terms = cost_terms(state, partition, UsageSelection { i, j })?;
        Ok(match self {
            ResourceType::Qubits => terms.redistribution().channel_rate,
            ResourceType::RedistributionEbits => terms.redistribution().ebit_rate,
            ResourceType::Bits => terms.merging().channel_rate,
            ResourceType::MergingEbits => terms.merging().ebit_rate,
        })
    }

    /// Coefficient of the Alice-side (conditional) mutual information in
    /// the closed form.
    pub fn alice_coefficient(self) -> f64 {
        match self {
            ResourceType::Qubits => 0.5,
            ResourceType::RedistributionEbits => -0.5,
            ResourceType::Bits => 1.0,
            ResourceType::MergingEbits => 0.0,
        }
    }

    pub fn bob_coefficient(self) -> f64 {
        match self {
            ResourceType::Qubits | ResourceType::RedistributionEbits => 0.5,
            ResourceType::Bits | ResourceType::MergingEbits => 1.0,
        }
    }

    fn closed_form(self, alice_info: f64, bob_info: f64) -> f64 {
        self.alice_coefficient() * alice_info + self.bob_coefficient() * bob_info
    }
}

impl fmt::Display for ResourceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// An effect computed both from costs and from its closed form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EffectReport {
    pub resource_type: ResourceType,
    pub by_definition: f64,
    pub closed_form: f64,
    pub alice_part: f64,
    pub bob_part: f64,
}

impl EffectReport {
    pub fn closed_form_residual(&self) -> f64 {
        (self.by_definition - self.closed_form).abs()
    }

    pub fn decomposition_residual(&self) -> f64 {
        (self.by_definition - (self.alice_part + self.bob_part)).abs()
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        self.closed_form_residual() <= tol && self.decomposition_residual() <= tol
    }
}

/// Effect `E[O]_{i,j}` of using `A_1..A_i`, `B_1..B_j`.
pub fn effect(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    resource: ResourceType,
    usage: UsageSelection,
) -> Result<EffectReport> {
    additional_effect(state, partition, resource, UsageSelection { i: 0, j: 0 }, usage)
}

/// Additional effect `E[O]_{i1,j1}^{i2,j2} = E[O]_{i2,j2} - E[O]_{i1,j1}`.
pub fn additional_effect(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    resource: ResourceType,
    from: UsageSelection,
    to: UsageSelection,
) -> Result<EffectReport> {
    partition.validate(state.layout())?;
    partition.usage(to.i, to.j)?;
    partition.usage(from.i, from.j)?;
    if from.i > to.i || from.j > to.j {
        return Err(QsiError::InvalidParameter(format!(
            "additional effect needs ({}, {}) <= ({}, {}) componentwise",
            from.i, from.j, to.i, to.j
        )));
    }
    let cost = |i, j| resource.cost(state, partition, i, j);
    let by_definition = cost(from.i, from.j)? - cost(to.i, to.j)?;
    let alice_part = cost(from.i, 0)? - cost(to.i, 0)?;
    let bob_part = cost(0, from.j)? - cost(0, to.j)?;

    let transfer = std::slice::from_ref(&partition.transfer);
    let alice_info = conditional_mutual_information_or_zero(
        state,
        transfer,
        &partition.alice_qsi[from.i..to.i],
        partition.alice_prefix(from.i),
    )?
    .0;
    let bob_info = conditional_mutual_information_or_zero(
        state,
        transfer,
        &partition.bob_qsi[from.j..to.j],
        partition.bob_prefix(from.j),
    )?
    .0;

    Ok(EffectReport {
        resource_type: resource,
        by_definition,
        closed_form: resource.closed_form(alice_info, bob_info),
        alice_part,
        bob_part,
    })
}

/// One asserted identity with its residual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(identity: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = (lhs - rhs).abs();
        Self {
            identity: identity.into(),
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

/// Per-identity results of the closed-form effect identities at `(i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffectIdentityReport {
    pub i: usize,
    pub j: usize,
    pub alice_information: f64,
    pub bob_information: f64,
    pub checks: Vec<IdentityCheck>,
}

impl EffectIdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Checks `A[e]_i = 0`, `A[c]_i = 2A[Q]_i = -2A[E]_i = I(C_A;A_1..A_i)` and
/// `B[c]_j = B[e]_j = 2B[Q]_j = 2B[E]_j = I(C_A;B_1..B_j)`.
pub fn effect_identities(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    i: usize,
    j: usize,
    tol: f64,
) -> Result<EffectIdentityReport> {
    partition.validate(state.layout())?;
    partition.usage(i, j)?;
    let alice_information = transfer_information(state, partition, partition.alice_prefix(i))?;
    let bob_information = transfer_information(state, partition, partition.bob_prefix(j))?;

    let a = |r: ResourceType| -> Result<f64> { Ok(r.cost(state, partition, 0, 0)? - r.cost(state, partition, i, 0)?) };
    let b = |r: ResourceType| -> Result<f64> { Ok(r.cost(state, partition, 0, 0)? - r.cost(state, partition, 0, j)?) };
    use ResourceType::*;

    let checks = vec![
        IdentityCheck::new(format!("A[e]_{i} = 0"), a(MergingEbits)?, 0.0, tol),
        IdentityCheck::new(format!("A[c]_{i} = I(C_A;A_1..A_{i})"), a(Bits)?, alice_information, tol),
        IdentityCheck::new(format!("2A[Q]_{i} = I(C_A;A_1..A_{i})"), 2.0 * a(Qubits)?, alice_information, tol),
        IdentityCheck::new(
            format!("-2A[E]_{i} = I(C_A;A_1..A_{i})"),
            -2.0 * a(RedistributionEbits)?,
            alice_information,
            tol,
        ),
        IdentityCheck::new(format!("B[c]_{j} = I(C_A;B_1..B_{j})"), b(Bits)?, bob_information, tol),
        IdentityCheck::new(format!("B[e]_{j} = I(C_A;B_1..B_{j})"), b(MergingEbits)?, bob_information, tol),
        IdentityCheck::new(format!("2B[Q]_{j} = I(C_A;B_1..B_{j})"), 2.0 * b(Qubits)?, bob_information, tol),
        IdentityCheck::new(
            format!("2B[E]_{j} = I(C_A;B_1..B_{j})"),
            2.0 * b(RedistributionEbits)?,
            bob_information,
            tol,
        ),
    ];
    Ok(EffectIdentityReport {
        i,
        j,
        alice_information,
        bob_information,
        checks,
    })
}

/// The three sides of the mutual-information chain rule.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRuleAudit {
    /// `I(C; S_1..S_n)`
    pub whole: f64,
    /// `I(C;S_1) + sum_k I(C; S_k | S_1..S_{k-1})`
    pub telescoped: f64,
    /// `I(C; S_1..S_i) + I(C; S_{i+1}..S_n | S_1..S_i)`
    pub split_sum: f64,
    pub split: usize,
    /// The individual telescoped terms.
    pub terms: Vec<f64>,
}

impl ChainRuleAudit {
    pub fn max_residual(&self) -> f64 {
        (self.whole - self.telescoped)
            .abs()
            .max((self.whole - self.split_sum).abs())
            .max((self.telescoped - self.split_sum).abs())
    }
}

/// Evaluates the chain rule for `target` against the ordered `chain` of
/// label groups, splitting after group `split` (`1 <= split <= n`).
pub fn chain_rule_audit<S: AsRef<str>, T: AsRef<str>>(
    state: &MultipartiteState,
    target: &[S],
    chain: &[Vec<T>],
    split: usize,
) -> Result<ChainRuleAudit> {
    if target.is_empty() || chain.is_empty() || chain.iter().any(|g| g.is_empty()) {
        return Err(QsiError::InvalidParameter("chain rule needs a non-empty target and non-empty groups".into()));
    }
    if split == 0 || split > chain.len() {
        return Err(QsiError::InvalidParameter(format!(
            "split must lie in 1..={}, got {split}",
            chain.len()
        )));
    }
    let target: Vec<&str> = target.iter().map(|s| s.as_ref()).collect();
    let groups: Vec<Vec<&str>> = chain
        .iter()
        .map(|g| g.iter().map(|s| s.as_ref()).collect())
        .collect();
    let flat = |range: std::ops::Range<usize>| -> Vec<&str> {
        groups[range].iter().flatten().copied().collect()
    };
    let cmi = |y: &[&str], z: &[&str]| -> Result<f64> {
        Ok(conditional_mutual_information_or_zero(state, &target, y, z)?.0)
    };

    let n = groups.len();
    let whole = cmi(&flat(0..n), &[])?;
    let terms: Vec<f64> = (0..n)
        .map(|k| cmi(&groups[k], &flat(0..k)))
        .collect::<Result<_>>()?;
    let telescoped = terms.iter().sum();
    let split_sum = cmi(&flat(0..split), &[])? + cmi(&flat(split..n), &flat(0..split))?;
    Ok(ChainRuleAudit {
        whole,
        telescoped,
        split_sum,
        split,
        terms,
    })
}
