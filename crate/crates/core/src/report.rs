//! Command execution and report rendering shared by the `qsi` binary and the
//! C bindings.

use std::fmt::Write as _;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::catalog::catalog_report;
use crate::costs::{cost_grid, merging_costs, redistribution_costs, ChannelKind};
use crate::document::{input_digest, parse_state_document};
use crate::effects::{additional_effect, chain_rule_audit, effect, effect_identities, IdentityCheck, ResourceType};
use crate::error::{QsiError, Result};
use crate::recovery::{recovery_report, RecoverySplit};

pub const DEFAULT_TOL: f64 = 1e-8;

/// A command with its arguments, independent of how it was parsed.
#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Costs {
        use_alice: usize,
        use_bob: usize,
        channel: ChannelKind,
    },
    Grid,
    Effects {
        i: usize,
        j: usize,
        from: Option<(usize, usize)>,
    },
    Chain {
        target: Vec<String>,
        chain: Vec<Vec<String>>,
        split: Option<usize>,
    },
    Recover {
        c: Vec<String>,
        s1: Vec<String>,
        s2: Vec<String>,
    },
    Catalog,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Costs { .. } => "costs",
            Command::Grid => "grid",
            Command::Effects { .. } => "effects",
            Command::Chain { .. } => "chain",
            Command::Recover { .. } => "recover",
            Command::Catalog => "catalog",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub tol: f64,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            seed: 0,
        }
    }
}

/// Insertion-ordered `name -> value` pairs, serialized as a JSON object.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ordered<T>(pub Vec<(String, T)>);

impl<T> Ordered<T> {
    pub fn push(&mut self, name: impl Into<String>, value: T) {
        self.0.push((name.into(), value));
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }
}

impl<T: Serialize> Serialize for Ordered<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Everything a command produced.
#[derive(Clone, Debug, PartialEq, DeriveSerialize)]
pub struct RunReport {
    pub command: String,
    pub args: Vec<String>,
    pub input_digest: String,
    pub tolerance: f64,
    pub results: Ordered<f64>,
    pub flags: Ordered<bool>,
    pub notes: Vec<String>,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

/// Rounds to 10 significant digits; `-0` becomes `0`.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 || (1e-4..1e10).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

impl RunReport {
    fn new(command: &Command, args: Vec<String>, input_digest: String, tol: f64) -> Self {
        Self {
            command: command.name().to_string(),
            args,
            input_digest,
            tolerance: tol,
            results: Ordered::default(),
            flags: Ordered::default(),
            notes: Vec::new(),
            checks: Vec::new(),
            pass: true,
        }
    }

    fn result(&mut self, name: impl Into<String>, value: f64) {
        self.results.push(name, value);
    }

    fn check(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) {
        self.checks.push(IdentityCheck::new(name, lhs, rhs, self.tolerance));
    }

    fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass);
        for (_, v) in self.results.0.iter_mut() {
            *v = round_sig(*v);
        }
        for c in self.checks.iter_mut() {
            c.lhs = round_sig(c.lhs);
            c.rhs = round_sig(c.rhs);
            c.residual = round_sig(c.residual);
        }
        self
    }

    /// One JSON document with stable key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command  {}", self.command);
        let _ = writeln!(out, "input    {}", self.input_digest);
        let width = self
            .results
            .0
            .iter()
            .map(|(k, _)| k.len())
            .chain(self.flags.0.iter().map(|(k, _)| k.len()))
            .max()
            .unwrap_or(8)
            .max(8);
        if !self.results.0.is_empty() {
            let _ = writeln!(out, "\n{:<width$}  value", "quantity");
            for (k, v) in &self.results.0 {
                let _ = writeln!(out, "{k:<width$}  {}", fmt_num(*v));
            }
        }
        for (k, v) in &self.flags.0 {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        if !self.notes.is_empty() {
            let _ = writeln!(out);
            for n in &self.notes {
                let _ = writeln!(out, "note: {n}");
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks (tolerance {:e})", self.tolerance);
            for c in &self.checks {
                let _ = writeln!(
                    out,
                    "  [{}] {}  residual {}",
                    if c.pass { "pass" } else { "FAIL" },
                    c.identity,
                    fmt_num(c.residual)
                );
            }
        }
        let _ = writeln!(out, "\n{}", if self.pass { "all checks passed" } else { "IDENTITY CHECK FAILED" });
        out
    }
}

/// Runs `command` on the state document `document_text`. `args` is echoed
/// into the report verbatim.
pub fn run(command: &Command, document_text: &str, options: &RunOptions, args: Vec<String>) -> Result<RunReport> {
    if !(options.tol.is_finite() && options.tol >= 0.0) {
        return Err(QsiError::InvalidParameter(format!("tolerance must be a non-negative number, got {}", options.tol)));
    }
    let digest = input_digest(document_text)?;
    let (state, partition) = parse_state_document(document_text, options.seed)?;
    let mut report = RunReport::new(command, args, digest, options.tol);

    match command {
        &Command::Costs {
            use_alice,
            use_bob,
            channel,
        } => {
            let usage = partition.usage(use_alice, use_bob)?;
            let q = redistribution_costs(&state, &partition, usage)?;
            let m = merging_costs(&state, &partition, usage)?;
            match channel {
                ChannelKind::Quantum => {
                    report.result("Q", q.channel_rate);
                    report.result("E", q.ebit_rate);
                }
                ChannelKind::Classical => {
                    report.result("c", m.channel_rate);
                    report.result("e", m.ebit_rate);
                }
            }
            let tag = crate::catalog::classify(usage, channel);
            report.notes.push(format!(
                "usage (i, j) = ({use_alice}, {use_bob}) over {channel} channels: {} ({})",
                tag.name,
                tag.name.long_name()
            ));
            let ebits = if channel == ChannelKind::Quantum { q.ebit_rate } else { m.ebit_rate };
            if ebits < 0.0 {
                report.notes.push(format!("negative ebit rate: net entanglement gain of {}", fmt_num(-ebits)));
            }
            report.check("c = 2Q", m.channel_rate, 2.0 * q.channel_rate);
            report.check("e = Q + E", m.ebit_rate, q.channel_rate + q.ebit_rate);
        }
        Command::Grid => {
            let grid = cost_grid(&state, &partition)?;
            for cell in &grid.cells {
                let (i, j) = (cell.i, cell.j);
                report.result(format!("Q[{i},{j}]"), cell.q);
                report.result(format!("E[{i},{j}]"), cell.e_redistribution);
                report.result(format!("c[{i},{j}]"), cell.c);
                report.result(format!("e[{i},{j}]"), cell.e_merging);
            }
            for cell in &grid.cells {
                let (i, j) = (cell.i, cell.j);
                report.check(format!("c[{i},{j}] = 2Q[{i},{j}]"), cell.c, 2.0 * cell.q);
                report.check(
                    format!("e[{i},{j}] = Q[{i},{j}] + E[{i},{j}]"),
                    cell.e_merging,
                    cell.q + cell.e_redistribution,
                );
            }
            report.check(
                "monotonicity violation of Q, c, e = 0",
                grid.monotonicity_violation().max(0.0),
                0.0,
            );
        }
        &Command::Effects { i, j, from } => {
            let to = partition.usage(i, j)?;
            match from {
                None => {
                    for r in ResourceType::ALL {
                        let rep = effect(&state, &partition, r, to)?;
                        let s = r.symbol();
                        report.result(format!("E[{s}]_{{{i},{j}}}"), rep.by_definition);
                        report.result(format!("E[{s}]_{{{i},{j}}} closed form"), rep.closed_form);
                        report.result(format!("A[{s}]_{i}"), rep.alice_part);
                        report.result(format!("B[{s}]_{j}"), rep.bob_part);
                        report.check(
                            format!("E[{s}]_{{{i},{j}}} by definition = closed form"),
                            rep.by_definition,
                            rep.closed_form,
                        );
                        report.check(
                            format!("E[{s}]_{{{i},{j}}} = A[{s}]_{i} + B[{s}]_{j}"),
                            rep.by_definition,
                            rep.alice_part + rep.bob_part,
                        );
                    }
                    let identities = effect_identities(&state, &partition, i, j, options.tol)?;
                    report.result(format!("I(C_A;A_1..A_{i})"), identities.alice_information);
                    report.result(format!("I(C_A;B_1..B_{j})"), identities.bob_information);
                    report.checks.extend(identities.checks);
                    report.notes.push(format!(
                        "using A_1..A_{i} lowers the classical cost by I(C_A;A_1..A_{i}) and leaves e unchanged; \
                         using B_1..B_{j} lowers both c and e by I(C_A;B_1..B_{j})"
                    ));
                }
                Some((i1, j1)) => {
                    let start = partition.usage(i1, j1)?;
                    for r in ResourceType::ALL {
                        let rep = additional_effect(&state, &partition, r, start, to)?;
                        let s = r.symbol();
                        let key = format!("E[{s}]_{{{i1},{j1}}}^{{{i},{j}}}");
                        report.result(key.clone(), rep.by_definition);
                        report.result(format!("{key} closed form"), rep.closed_form);
                        report.result(format!("A[{s}]_{i1}^{i}"), rep.alice_part);
                        report.result(format!("B[{s}]_{j1}^{j}"), rep.bob_part);
                        report.check(format!("{key} by definition = closed form"), rep.by_definition, rep.closed_form);
                        report.check(
                            format!("{key} = A[{s}]_{i1}^{i} + B[{s}]_{j1}^{j}"),
                            rep.by_definition,
                            rep.alice_part + rep.bob_part,
                        );
                    }
                    report.notes.push(format!(
                        "adding A_{}..A_{i} lowers c further by I(C_A;A_{}..A_{i}|A_1..A_{i1}); \
                         adding B_{}..B_{j} lowers c and e further by I(C_A;B_{}..B_{j}|B_1..B_{j1})",
                        i1 + 1,
                        i1 + 1,
                        j1 + 1,
                        j1 + 1
                    ));
                }
            }
        }
        Command::Chain { target, chain, split } => {
            let splits: Vec<usize> = match split {
                Some(k) => vec![*k],
                None => (1..=chain.len()).collect(),
            };
            for k in splits {
                let audit = chain_rule_audit(&state, target, chain, k)?;
                if report.results.get("whole").is_none() {
                    report.result("whole", audit.whole);
                    report.result("telescoped", audit.telescoped);
                    for (idx, t) in audit.terms.iter().enumerate() {
                        report.result(format!("term[{}]", idx + 1), *t);
                    }
                    report.check("whole = telescoped", audit.whole, audit.telescoped);
                }
                report.result(format!("split[{k}]"), audit.split_sum);
                report.check(format!("whole = split[{k}]"), audit.whole, audit.split_sum);
            }
        }
        Command::Recover { c, s1, s2 } => {
            let mut keep: Vec<String> = c.iter().chain(s1).chain(s2).cloned().collect();
            let traced: Vec<String> = state
                .layout()
                .labels()
                .into_iter()
                .filter(|l| !keep.contains(&l.to_string()))
                .map(str::to_string)
                .collect();
            if !traced.is_empty() {
                report.notes.push(format!("traced out before recovery: {}", traced.join(", ")));
            }
            keep.dedup();
            let reduced = state.partial_trace(&keep)?;
            let split = RecoverySplit::new(c, s1, s2);
            let rep = recovery_report(&reduced, &split)?;
            report.result("qcmi", rep.qcmi);
            report.result("achieved_fidelity", rep.achieved_fidelity);
            report.result("bound", rep.bound);
            report.result("trace_deficiency", rep.trace_deficiency);
            report.flags.push("bound_satisfied", rep.bound_satisfied);
            report.flags.push("markov", rep.qcmi <= options.tol);
            report.flags.push("trace_deficiency_flagged", rep.flagged);
            report.check("I(C;S2|S1) >= 0", rep.qcmi.min(0.0), 0.0);
            if !rep.bound_satisfied {
                report.notes.push("plain Petz recovery did not reach the fidelity bound on this input".into());
            }
        }
        Command::Catalog => {
            let rows = catalog_report(&state, &partition)?;
            for row in &rows {
                let name = row.tag.name.as_str();
                let (rate, ebits) = match row.tag.channel_kind {
                    ChannelKind::Quantum => ("Q", "E"),
                    ChannelKind::Classical => ("c", "e"),
                };
                report.result(format!("{name}.{rate}"), row.costs.channel_rate);
                report.result(format!("{name}.{ebits}"), row.costs.ebit_rate);
                if let Some(note) = &row.note {
                    report.notes.push(format!("{name}: {note}"));
                }
            }
            for pair in rows.chunks(2) {
                let (q, c) = (&pair[0], &pair[1]);
                let label = format!("{}/{}", q.tag.name, c.tag.name);
                report.check(format!("{label}: c = 2Q"), c.costs.channel_rate, 2.0 * q.costs.channel_rate);
                report.check(
                    format!("{label}: e = Q + E"),
                    c.costs.ebit_rate,
                    q.costs.channel_rate + q.costs.ebit_rate,
                );
            }
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str = r#"{"subsystems":[{"label":"C","dim":2,"role":"transfer"},{"label":"R","dim":2,"role":"reference"}],"state":{"kind":"bell"}}"#;
    const GHZ3: &str = r#"{"subsystems":[{"label":"q1","dim":2,"role":"transfer"},{"label":"q2","dim":2,"role":"bob_qsi"},{"label":"q3","dim":2,"role":"reference"}],"state":{"kind":"ghz"}}"#;
    const GHZ4: &str = r#"{"subsystems":[{"label":"q1","dim":2,"role":"transfer"},{"label":"q2","dim":2,"role":"bob_qsi"},{"label":"q3","dim":2,"role":"bob_qsi"},{"label":"q4","dim":2,"role":"reference"}],"state":{"kind":"ghz"}}"#;

    fn opts() -> RunOptions {
        RunOptions::default()
    }

    #[test]
    fn costs_on_bell() {
        let cmd = Command::Costs {
            use_alice: 0,
            use_bob: 0,
            channel: ChannelKind::Quantum,
        };
        let r = run(&cmd, BELL, &opts(), vec![]).unwrap();
        assert_eq!(r.results.get("Q"), Some(&1.0));
        assert_eq!(r.results.get("E"), Some(&0.0));
        assert!(r.pass);
    }

    #[test]
    fn catalog_on_ghz3() {
        let r = run(&Command::Catalog, GHZ3, &opts(), vec![]).unwrap();
        assert_eq!(r.results.get("SM.c"), Some(&1.0));
        assert_eq!(r.results.get("SM.e"), Some(&0.0));
        assert_eq!(r.results.get("FQSW.Q"), Some(&0.5));
        assert_eq!(r.results.get("FQSW.E"), Some(&-0.5));
        assert!(r.pass);
    }

    #[test]
    fn chain_on_ghz4() {
        let cmd = Command::Chain {
            target: vec!["q1".into()],
            chain: vec![vec!["q2".into()], vec!["q3".into()]],
            split: Some(1),
        };
        let r = run(&cmd, GHZ4, &opts(), vec![]).unwrap();
        assert_eq!(r.results.get("whole"), Some(&1.0));
        assert_eq!(r.results.get("telescoped"), Some(&1.0));
        assert_eq!(r.results.get("split[1]"), Some(&1.0));
        assert!(r.pass);
    }

    #[test]
    fn effects_and_recover_run() {
        let r = run(&Command::Effects { i: 0, j: 2, from: None }, GHZ4, &opts(), vec![]).unwrap();
        assert!(r.pass, "{}", r.to_table());
        let r = run(&Command::Effects { i: 0, j: 2, from: Some((0, 1)) }, GHZ4, &opts(), vec![]).unwrap();
        assert!(r.pass);
        assert_eq!(r.results.get("E[c]_{0,1}^{0,2}"), Some(&0.0));

        let cmd = Command::Recover {
            c: vec!["q1".into()],
            s1: vec!["q2".into()],
            s2: vec!["q3".into()],
        };
        let r = run(&cmd, GHZ4, &opts(), vec![]).unwrap();
        assert_eq!(r.flags.get("markov"), Some(&true));
        assert!(r.notes.iter().any(|n| n.contains("q4")));
    }

    #[test]
    fn zero_tolerance_can_fail_checks_but_report_is_complete() {
        let cmd = Command::Chain {
            target: vec!["q1".into()],
            chain: vec![vec!["q2".into()], vec!["q3".into()], vec!["q4".into()]],
            split: None,
        };
        let doc = r#"{"subsystems":[{"label":"q1","dim":2,"role":"transfer"},{"label":"q2","dim":3,"role":"reference"},{"label":"q3","dim":2,"role":"reference"},{"label":"q4","dim":2,"role":"reference"}],"state":{"kind":"random_mixed","params":{"rank":3,"seed":9}}}"#;
        let r = run(&cmd, doc, &RunOptions { tol: 1e-8, seed: 0 }, vec![]).unwrap();
        assert!(r.pass);
        assert_eq!(r.checks.len(), 4);
        assert!(run(&cmd, doc, &RunOptions { tol: -1.0, seed: 0 }, vec![]).is_err());
    }

    #[test]
    fn json_is_stable() {
        let a = run(&Command::Grid, GHZ4, &opts(), vec!["grid".into()]).unwrap().to_json();
        let b = run(&Command::Grid, GHZ4, &opts(), vec!["grid".into()]).unwrap().to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        for key in ["command", "args", "input_digest", "tolerance", "results", "flags", "notes", "checks", "pass"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(round_sig(0.918295834054489), 0.9182958341);
        assert_eq!(round_sig(-0.0), 0.0);
        assert_eq!(round_sig(1e-17), 1e-17);
        assert_eq!(round_sig(123456789012.0), 123456789000.0);
    }
}
