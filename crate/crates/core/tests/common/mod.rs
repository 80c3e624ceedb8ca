#![allow(dead_code)]

pub mod oracle;

use qsi_core::costs::PartitionSpec;
use qsi_core::hilbert::{factory, MultipartiteState, Role, StateKind};

pub struct Instance {
    pub name: String,
    pub state: MultipartiteState,
    pub partition: PartitionSpec,
}

fn role(c: char) -> Role {
    match c {
        'A' => Role::AliceQsi,
        'B' => Role::BobQsi,
        'R' => Role::Reference,
        _ => panic!("unknown role code {c}"),
    }
}

/// `roles` assigns q2, q3, ... in order; q1 is the transfer system.
pub fn instance(name: impl Into<String>, kind: StateKind, roles: &str) -> Instance {
    let state = factory(&kind).unwrap();
    let labels: Vec<String> = (2..=roles.len() + 1).map(|k| format!("q{k}")).collect();
    let assignments: Vec<(&str, Role)> = labels.iter().map(String::as_str).zip(roles.chars().map(role)).collect();
    let state = state.with_roles(&assignments).unwrap();
    let partition = PartitionSpec::from_state(&state).unwrap();
    Instance {
        name: name.into(),
        state,
        partition,
    }
}

pub const WERNER_PS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// The named states listed alongside the random corpus.
pub fn named_states() -> Vec<Instance> {
    let mut v = vec![
        instance("bell", StateKind::Bell, "R"),
        instance("ghz3/B", StateKind::Ghz(3), "BR"),
        instance("ghz3/A", StateKind::Ghz(3), "AR"),
        instance("ghz4/BB", StateKind::Ghz(4), "BBR"),
        instance("ghz4/AB", StateKind::Ghz(4), "ABR"),
        instance("w3/B", StateKind::W(3), "BR"),
        instance("w3/AB", StateKind::W(3), "AB"),
    ];
    for p in WERNER_PS {
        v.push(instance(format!("werner({p})/B"), StateKind::Werner(p), "B"));
        v.push(instance(format!("werner({p})/R"), StateKind::Werner(p), "R"));
    }
    v
}

const FOUR_PARTY_ROLES: [&str; 6] = ["AAR", "BBR", "ABR", "AAB", "ABB", "BBB"];

/// Seeded random instances covering m, n in 0..=2, pure and mixed.
pub fn random_corpus() -> Vec<Instance> {
    let mut v = Vec::new();
    for (k, roles) in FOUR_PARTY_ROLES.iter().enumerate() {
        let seed = 100 + k as u64;
        v.push(instance(
            format!("pure 2222/{roles} seed {seed}"),
            StateKind::RandomPure { dims: vec![2, 2, 2, 2], seed },
            roles,
        ));
        for rank in [2, 3] {
            let seed = 200 + 10 * k as u64 + rank as u64;
            v.push(instance(
                format!("mixed 2222 rank {rank}/{roles} seed {seed}"),
                StateKind::RandomMixed { dims: vec![2, 2, 2, 2], rank, seed },
                roles,
            ));
        }
    }
    for (seed, roles) in [(300, "AB"), (301, "BR"), (302, "AR")] {
        v.push(instance(
            format!("pure 232/{roles} seed {seed}"),
            StateKind::RandomPure { dims: vec![2, 3, 2], seed },
            roles,
        ));
    }
    v.push(instance(
        "mixed 322 rank 4/AB seed 310",
        StateKind::RandomMixed { dims: vec![3, 2, 2], rank: 4, seed: 310 },
        "AB",
    ));
    v.push(instance(
        "pure 22222/AABB seed 400",
        StateKind::RandomPure { dims: vec![2, 2, 2, 2, 2], seed: 400 },
        "AABB",
    ));
    v.push(instance(
        "mixed 22222 rank 2/ABBR seed 401",
        StateKind::RandomMixed { dims: vec![2, 2, 2, 2, 2], rank: 2, seed: 401 },
        "ABBR",
    ));
    v
}

/// Named states followed by the random corpus.
pub fn full_corpus() -> Vec<Instance> {
    let mut v = named_states();
    v.extend(random_corpus());
    v
}
