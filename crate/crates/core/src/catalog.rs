//! The eight named protocols obtained by fixing the channel kind and which
//! parties use their side information.
//!
//! | channel   | no QSI | Bob only | Alice only | both |
//! |-----------|--------|----------|------------|------|
//! | quantum   | SC     | FQSW     | FQRS       | SR   |
//! | classical | QT     | SM       | GQT        | GSM  |

use std::fmt;

use serde::Serialize;

use crate::costs::{transfer_costs, ChannelKind, PartitionSpec, ResourceVector, UsageSelection};
use crate::error::Result;
use crate::hilbert::MultipartiteState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProtocolName {
    /// Schumacher compression.
    SC,
    /// Quantum teleportation.
    QT,
    /// Fully quantum Slepian-Wolf.
    FQSW,
    /// State merging.
    SM,
    /// Fully quantum reverse Shannon.
    FQRS,
    /// Generalized quantum teleportation.
    GQT,
    /// State redistribution.
    SR,
    /// Generalized state merging.
    GSM,
}

impl ProtocolName {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolName::SC => "SC",
            ProtocolName::QT => "QT",
            ProtocolName::FQSW => "FQSW",
            ProtocolName::SM => "SM",
            ProtocolName::FQRS => "FQRS",
            ProtocolName::GQT => "GQT",
            ProtocolName::SR => "SR",
            ProtocolName::GSM => "GSM",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            ProtocolName::SC => "Schumacher compression",
            ProtocolName::QT => "quantum teleportation",
            ProtocolName::FQSW => "fully quantum Slepian-Wolf",
            ProtocolName::SM => "state merging",
            ProtocolName::FQRS => "fully quantum reverse Shannon",
            ProtocolName::GQT => "generalized quantum teleportation",
            ProtocolName::SR => "state redistribution",
            ProtocolName::GSM => "generalized state merging",
        }
    }
}

impl fmt::Display for ProtocolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProtocolTag {
    pub name: ProtocolName,
    pub channel_kind: ChannelKind,
    pub alice_uses: bool,
    pub bob_uses: bool,
}

/// Names the protocol for a usage selection and channel kind.
pub fn classify(usage: UsageSelection, channel_kind: ChannelKind) -> ProtocolTag {
    let alice_uses = usage.i >= 1;
    let bob_uses = usage.j >= 1;
    use ProtocolName::*;
    let name = match (channel_kind, alice_uses, bob_uses) {
        (ChannelKind::Quantum, false, false) => SC,
        (ChannelKind::Quantum, false, true) => FQSW,
        (ChannelKind::Quantum, true, false) => FQRS,
        (ChannelKind::Quantum, true, true) => SR,
        (ChannelKind::Classical, false, false) => QT,
        (ChannelKind::Classical, false, true) => SM,
        (ChannelKind::Classical, true, false) => GQT,
        (ChannelKind::Classical, true, true) => GSM,
    };
    ProtocolTag {
        name,
        channel_kind,
        alice_uses,
        bob_uses,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogRow {
    pub tag: ProtocolTag,
    pub usage: UsageSelection,
    pub costs: ResourceVector,
    /// Set when the row uses only part of the available side information.
    pub note: Option<String>,
}

/// Every protocol applicable to the instance. Rows needing Alice's (Bob's)
/// QSI appear only when `m >= 1` (`n >= 1`). Single-QSI protocols use only
/// `A_1` / `B_1`; SR and GSM use all of it.
pub fn catalog_report(state: &MultipartiteState, partition: &PartitionSpec) -> Result<Vec<CatalogRow>> {
    partition.validate(state.layout())?;
    let (m, n) = (partition.m(), partition.n());
    let mut usages = vec![(0, 0)];
    if n >= 1 {
        usages.push((0, 1));
    }
    if m >= 1 {
        usages.push((1, 0));
    }
    if m >= 1 && n >= 1 {
        usages.push((m, n));
    }

    let mut rows = Vec::with_capacity(2 * usages.len());
    for (i, j) in usages {
        let usage = partition.usage(i, j)?;
        let note = restriction_note(i, j, m, n);
        for channel in [ChannelKind::Quantum, ChannelKind::Classical] {
            rows.push(CatalogRow {
                tag: classify(usage, channel),
                usage,
                costs: transfer_costs(state, partition, usage, channel)?,
                note: note.clone(),
            });
        }
    }
    Ok(rows)
}

fn restriction_note(i: usize, j: usize, m: usize, n: usize) -> Option<String> {
    let partial = (i == 1 && j == 0 && m > 1) || (i == 0 && j == 1 && n > 1);
    partial.then(|| {
        let (party, total) = if i == 1 { ("A", m) } else { ("B", n) };
        format!("uses only {party}_1 of {total} available {party} systems")
    })
}
