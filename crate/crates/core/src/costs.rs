//! Optimal resource costs of state redistribution and state merging with
//! quantum side information, and the conversions between qubit-channel and
//! bit-channel accounting.
//!
//! With `Ã = A_1..A_i` and `B̃ = B_1..B_j` in use,
//!
//! ```text
//! Q = H(C_A) - I(C_A;Ã)/2 - I(C_A;B̃)/2      E = I(C_A;Ã)/2 - I(C_A;B̃)/2
//! c = 2H(C_A) - I(C_A;Ã) - I(C_A;B̃)         e = H(C_A) - I(C_A;B̃)
//! ```
//!
//! An empty `Ã` or `B̃` contributes zero mutual information.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entropy::{conditional_mutual_information_or_zero, von_neumann};
use crate::error::{QsiError, Result};
use crate::hilbert::{MultipartiteState, Role, SubsystemLayout};

/// Assignment of layout labels to `C_A`, `A_1..A_m`, `B_1..B_n` and `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub transfer: String,
    pub alice_qsi: Vec<String>,
    pub bob_qsi: Vec<String>,
    pub reference: Vec<String>,
}

impl PartitionSpec {
    pub fn new<S: Into<String>>(
        transfer: S,
        alice_qsi: Vec<String>,
        bob_qsi: Vec<String>,
        reference: Vec<String>,
    ) -> Self {
        Self {
            transfer: transfer.into(),
            alice_qsi,
            bob_qsi,
            reference,
        }
    }

    /// Reads the partition off the layout's roles, QSI systems in layout
    /// order.
    pub fn from_layout(layout: &SubsystemLayout) -> Result<Self> {
        let transfer = layout.labels_with_role(Role::Transfer);
        let [transfer] = transfer.as_slice() else {
            return Err(QsiError::InvalidPartition(format!(
                "exactly one subsystem must have role transfer, found {}",
                transfer.len()
            )));
        };
        Ok(Self {
            transfer: transfer.clone(),
            alice_qsi: layout.labels_with_role(Role::AliceQsi),
            bob_qsi: layout.labels_with_role(Role::BobQsi),
            reference: layout.labels_with_role(Role::Reference),
        })
    }

    pub fn from_state(state: &MultipartiteState) -> Result<Self> {
        Self::from_layout(state.layout())
    }

    pub fn m(&self) -> usize {
        self.alice_qsi.len()
    }

    pub fn n(&self) -> usize {
        self.bob_qsi.len()
    }

    fn all_labels(&self) -> impl Iterator<Item = &String> {
        std::iter::once(&self.transfer)
            .chain(&self.alice_qsi)
            .chain(&self.bob_qsi)
            .chain(&self.reference)
    }

    /// Every label distinct, present in `layout`, and every layout label
    /// covered exactly once.
    pub fn validate(&self, layout: &SubsystemLayout) -> Result<()> {
        let mut seen = HashSet::new();
        for l in self.all_labels() {
            if !seen.insert(l.as_str()) {
                return Err(QsiError::InvalidPartition(format!("label `{l}` assigned twice")));
            }
            if !layout.contains(l) {
                return Err(QsiError::UnknownLabel(l.clone()));
            }
        }
        if let Some(missing) = layout.labels().into_iter().find(|l| !seen.contains(l)) {
            return Err(QsiError::InvalidPartition(format!(
                "layout label `{missing}` is not assigned to any role"
            )));
        }
        Ok(())
    }

    /// Checks `usage` against `m` and `n`.
    pub fn usage(&self, i: usize, j: usize) -> Result<UsageSelection> {
        if i > self.m() || j > self.n() {
            return Err(QsiError::UsageOutOfBounds {
                i,
                j,
                m: self.m(),
                n: self.n(),
            });
        }
        Ok(UsageSelection { i, j })
    }

    pub fn alice_prefix(&self, i: usize) -> &[String] {
        &self.alice_qsi[..i]
    }

    pub fn bob_prefix(&self, j: usize) -> &[String] {
        &self.bob_qsi[..j]
    }

    /// Labels left unused at `usage`: `A_{i+1}..A_m B_{j+1}..B_n R`.
    pub fn unused(&self, usage: UsageSelection) -> Vec<String> {
        self.alice_qsi[usage.i..]
            .iter()
            .chain(&self.bob_qsi[usage.j..])
            .chain(&self.reference)
            .cloned()
            .collect()
    }
}

/// Alice uses `A_1..A_i`, Bob uses `B_1..B_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UsageSelection {
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Quantum,
    Classical,
}

impl ChannelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::Quantum => "quantum",
            ChannelKind::Classical => "classical",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ChannelKind {
    type Err = QsiError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum" => Ok(ChannelKind::Quantum),
            "classical" => Ok(ChannelKind::Classical),
            other => Err(QsiError::InvalidParameter(format!(
                "channel must be `quantum` or `classical`, got `{other}`"
            ))),
        }
    }
}

/// Channel rate plus ebit rate per copy. A negative ebit rate is a net gain
/// of entanglement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceVector {
    pub channel_kind: ChannelKind,
    pub channel_rate: f64,
    pub ebit_rate: f64,
}

impl ResourceVector {
    pub fn new(channel_kind: ChannelKind, channel_rate: f64, ebit_rate: f64) -> Result<Self> {
        if !channel_rate.is_finite() || !ebit_rate.is_finite() {
            return Err(QsiError::InvalidParameter("resource rates must be finite".into()));
        }
        Ok(Self {
            channel_kind,
            channel_rate,
            ebit_rate,
        })
    }

    pub fn quantum(channel_rate: f64, ebit_rate: f64) -> Self {
        Self {
            channel_kind: ChannelKind::Quantum,
            channel_rate,
            ebit_rate,
        }
    }

    pub fn classical(channel_rate: f64, ebit_rate: f64) -> Self {
        Self {
            channel_kind: ChannelKind::Classical,
            channel_rate,
            ebit_rate,
        }
    }

    pub fn is_net_entanglement_gain(&self) -> bool {
        self.ebit_rate < 0.0
    }
}

/// Teleportation accounting: one qubit becomes two bits plus one ebit.
pub fn convert_quantum_to_classical(v: ResourceVector) -> Result<ResourceVector> {
    if v.channel_kind != ChannelKind::Quantum {
        return Err(QsiError::WrongChannelKind {
            expected: "quantum",
            found: v.channel_kind.as_str(),
        });
    }
    Ok(ResourceVector::classical(2.0 * v.channel_rate, v.ebit_rate + v.channel_rate))
}

/// Coherent-bit accounting: two bits become one qubit and return one ebit.
pub fn convert_classical_to_quantum(v: ResourceVector) -> Result<ResourceVector> {
    if v.channel_kind != ChannelKind::Classical {
        return Err(QsiError::WrongChannelKind {
            expected: "classical",
            found: v.channel_kind.as_str(),
        });
    }
    let half = v.channel_rate / 2.0;
    Ok(ResourceVector::quantum(half, v.ebit_rate - half))
}

/// The entropic ingredients shared by every cost at one usage selection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostTerms {
    pub h_transfer: f64,
    /// `I(C_A; A_1..A_i)`
    pub alice_information: f64,
    /// `I(C_A; B_1..B_j)`
    pub bob_information: f64,
}

impl CostTerms {
    pub fn redistribution(&self) -> ResourceVector {
        ResourceVector::quantum(
            self.h_transfer - 0.5 * self.alice_information - 0.5 * self.bob_information,
            0.5 * self.alice_information - 0.5 * self.bob_information,
        )
    }

    pub fn merging(&self) -> ResourceVector {
        ResourceVector::classical(
            2.0 * self.h_transfer - self.alice_information - self.bob_information,
            self.h_transfer - self.bob_information,
        )
    }
}

fn checked(state: &MultipartiteState, partition: &PartitionSpec) -> Result<()> {
    partition.validate(state.layout())
}

/// `I(C_A; labels)`, zero for an empty set.
pub(crate) fn transfer_information(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    labels: &[String],
) -> Result<f64> {
    Ok(conditional_mutual_information_or_zero::<_, _, &str>(
        state,
        std::slice::from_ref(&partition.transfer),
        labels,
        &[],
    )?
    .0)
}

pub fn cost_terms(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    usage: UsageSelection,
) -> Result<CostTerms> {
    checked(state, partition)?;
    let usage = partition.usage(usage.i, usage.j)?;
    Ok(CostTerms {
        h_transfer: von_neumann(state, std::slice::from_ref(&partition.transfer))?.0,
        alice_information: transfer_information(state, partition, partition.alice_prefix(usage.i))?,
        bob_information: transfer_information(state, partition, partition.bob_prefix(usage.j))?,
    })
}

/// Optimal `(Q, E)` of state redistribution with QSI.
pub fn redistribution_costs(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    usage: UsageSelection,
) -> Result<ResourceVector> {
    Ok(cost_terms(state, partition, usage)?.redistribution())
}

/// Optimal `(c, e)` of state merging with QSI.
pub fn merging_costs(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    usage: UsageSelection,
) -> Result<ResourceVector> {
    Ok(cost_terms(state, partition, usage)?.merging())
}

/// Costs for the given channel kind.
pub fn transfer_costs(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    usage: UsageSelection,
    channel: ChannelKind,
) -> Result<ResourceVector> {
    match channel {
        ChannelKind::Quantum => redistribution_costs(state, partition, usage),
        ChannelKind::Classical => merging_costs(state, partition, usage),
    }
}

/// Purifies a mixed instance, appending the fresh purifying system to the
/// partition's reference. States built from a state vector are returned
/// unchanged.
pub fn purified_instance(
    state: &MultipartiteState,
    partition: &PartitionSpec,
) -> Result<(MultipartiteState, PartitionSpec)> {
    checked(state, partition)?;
    if state.is_known_pure() {
        return Ok((state.clone(), partition.clone()));
    }
    let label = state.fresh_label("R_purifier");
    let pure = state.purify(&label)?.density();
    let mut partition = partition.clone();
    partition.reference.push(label);
    Ok((pure, partition))
}

/// `Q = I(C_A; R̃ | B̃)/2` evaluated on a purification, where `R̃` is every
/// system left unused. Agrees with [`redistribution_costs`] and is
/// manifestly non-negative.
pub fn quantum_cost_from_reference(
    state: &MultipartiteState,
    partition: &PartitionSpec,
    usage: UsageSelection,
) -> Result<f64> {
    let usage = partition.usage(usage.i, usage.j)?;
    let (pure, partition) = purified_instance(state, partition)?;
    let unused = partition.unused(usage);
    let value = conditional_mutual_information_or_zero(
        &pure,
        std::slice::from_ref(&partition.transfer),
        &unused,
        partition.bob_prefix(usage.j),
    )?;
    Ok(0.5 * value.0)
}

/// All four costs at one `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostCell {
    pub i: usize,
    pub j: usize,
    /// Qubit rate of redistribution.
    pub q: f64,
    /// Ebit rate of redistribution.
    pub e_redistribution: f64,
    /// Bit rate of merging.
    pub c: f64,
    /// Ebit rate of merging.
    pub e_merging: f64,
}

impl CostCell {
    fn from_terms(i: usize, j: usize, terms: &CostTerms) -> Self {
        let r = terms.redistribution();
        let m = terms.merging();
        Self {
            i,
            j,
            q: r.channel_rate,
            e_redistribution: r.ebit_rate,
            c: m.channel_rate,
            e_merging: m.ebit_rate,
        }
    }

    /// `|c - 2Q|` and `|e - (Q + E)|`.
    pub fn conversion_residuals(&self) -> (f64, f64) {
        (
            (self.c - 2.0 * self.q).abs(),
            (self.e_merging - (self.q + self.e_redistribution)).abs(),
        )
    }
}

/// Costs over every usage selection, `(m + 1) x (n + 1)` cells.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostGrid {
    pub m: usize,
    pub n: usize,
    pub cells: Vec<CostCell>,
}

impl CostGrid {
    pub fn get(&self, i: usize, j: usize) -> Option<&CostCell> {
        if i > self.m || j > self.n {
            return None;
        }
        self.cells.get(i * (self.n + 1) + j)
    }

    /// Largest deviation of `c = 2Q` and `e = Q + E` over all cells.
    pub fn max_conversion_residual(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| {
                let (a, b) = c.conversion_residuals();
                a.max(b)
            })
            .fold(0.0, f64::max)
    }

    /// Largest violation of: `Q`, `c` non-increasing in `i` and `j`; `e`
    /// non-increasing in `j` and constant in `i`. Zero when all hold.
    pub fn monotonicity_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..=self.m {
            for j in 0..=self.n {
                let here = self.get(i, j).expect("in range");
                if i < self.m {
                    let next = self.get(i + 1, j).expect("in range");
                    worst = worst.max(next.q - here.q).max(next.c - here.c);
                    worst = worst.max((next.e_merging - here.e_merging).abs());
                }
                if j < self.n {
                    let next = self.get(i, j + 1).expect("in range");
                    worst = worst
                        .max(next.q - here.q)
                        .max(next.c - here.c)
                        .max(next.e_merging - here.e_merging);
                }
            }
        }
        worst
    }
}

pub fn cost_grid(state: &MultipartiteState, partition: &PartitionSpec) -> Result<CostGrid> {
    checked(state, partition)?;
    let h_transfer = von_neumann(state, std::slice::from_ref(&partition.transfer))?.0;
    let alice: Vec<f64> = (0..=partition.m())
        .map(|i| transfer_information(state, partition, partition.alice_prefix(i)))
        .collect::<Result<_>>()?;
    let bob: Vec<f64> = (0..=partition.n())
        .map(|j| transfer_information(state, partition, partition.bob_prefix(j)))
        .collect::<Result<_>>()?;
    let mut cells = Vec::with_capacity(alice.len() * bob.len());
    for (i, &alice_information) in alice.iter().enumerate() {
        for (j, &bob_information) in bob.iter().enumerate() {
            let terms = CostTerms {
                h_transfer,
                alice_information,
                bob_information,
            };
            cells.push(CostCell::from_terms(i, j, &terms));
        }
    }
    Ok(CostGrid {
        m: partition.m(),
        n: partition.n(),
        cells,
    })
}
