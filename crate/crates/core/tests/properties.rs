use proptest::prelude::*;

use qsi_core::costs::{cost_grid, quantum_cost_from_reference, PartitionSpec, UsageSelection};
use qsi_core::document::{input_digest, parse_state_document, StateDocument};
use qsi_core::entropy::{fidelity, qcmi, von_neumann};
use qsi_core::hilbert::{factory, MultipartiteState, Role, StateKind};

fn state(dims: Vec<usize>, rank: usize, seed: u64) -> MultipartiteState {
    let kind = if rank == 1 {
        StateKind::RandomPure { dims, seed }
    } else {
        StateKind::RandomMixed { dims, rank, seed }
    };
    factory(&kind).unwrap()
}

fn small_state() -> impl Strategy<Value = MultipartiteState> {
    (prop::collection::vec(2usize..=3, 2..=4), 1usize..=4, any::<u64>())
        .prop_filter("total dimension", |(d, _, _)| d.iter().product::<usize>() <= 36)
        .prop_map(|(d, r, s)| state(d, r, s))
}

fn labels(s: &MultipartiteState) -> Vec<String> {
    s.layout().labels().iter().map(|l| l.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_is_bounded_by_log_dimension(s in small_state(), mask in 1u32..16) {
        let l = labels(&s);
        let set: Vec<&String> = l.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, x)| x).collect();
        prop_assume!(!set.is_empty());
        let v = von_neumann(&s, &set).unwrap().0;
        let d = s.layout().dim_of(&set).unwrap() as f64;
        prop_assert!(v >= -1e-12);
        prop_assert!(v <= d.log2() + 1e-9);
    }

    #[test]
    fn subadditivity_and_araki_lieb(s in small_state()) {
        let l = labels(&s);
        let (x, y) = (&l[..1], &l[1..2]);
        let sx = von_neumann(&s, x).unwrap().0;
        let sy = von_neumann(&s, y).unwrap().0;
        let xy: Vec<&String> = x.iter().chain(y).collect();
        let sxy = von_neumann(&s, &xy).unwrap().0;
        prop_assert!(sxy <= sx + sy + 1e-9);
        prop_assert!(sxy >= (sx - sy).abs() - 1e-9);
    }

    #[test]
    fn strong_subadditivity_any_grouping(s in small_state()) {
        let l = labels(&s);
        prop_assume!(l.len() >= 3);
        let v = qcmi(&s, &l[..1], &l[2..], &l[1..2]).unwrap().0;
        prop_assert!(v >= -1e-8);
    }

    #[test]
    fn partial_trace_composes(s in small_state()) {
        let l = labels(&s);
        let keep = &l[..l.len() - 1];
        let once = s.partial_trace(&l[..1]).unwrap();
        let twice = s.partial_trace(keep).unwrap().partial_trace(&l[..1]).unwrap();
        prop_assert!(once.rho().max_abs_diff(twice.rho()).unwrap() < 1e-12);
        prop_assert!((once.rho().trace().unwrap().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn permutation_preserves_marginal_entropies(s in small_state()) {
        let l = labels(&s);
        let mut order = l.clone();
        order.reverse();
        let p = s.permute(&order).unwrap();
        for x in &l {
            let a = von_neumann(&s, std::slice::from_ref(x)).unwrap().0;
            let b = von_neumann(&p, std::slice::from_ref(x)).unwrap().0;
            prop_assert!((a - b).abs() < 1e-10);
        }
        let back = p.permute(&l).unwrap();
        prop_assert!(back.rho().max_abs_diff(s.rho()).unwrap() < 1e-14);
    }

    #[test]
    fn purification_round_trip(s in small_state()) {
        let l = labels(&s);
        let back = s.purify("P").unwrap().density().partial_trace(&l).unwrap();
        prop_assert!(back.rho().max_abs_diff(s.rho()).unwrap() <= 1e-10);
    }

    #[test]
    fn fidelity_properties(a in small_state(), seed in any::<u64>(), rank in 1usize..=4) {
        let b = state(a.layout().dims(), rank, seed);
        let f = fidelity(&a, &b).unwrap();
        let g = fidelity(&b, &a).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f - g).abs() < 1e-8);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn quantum_cost_is_non_negative_and_matches_reference(
        s in small_state(),
        roles in prop::collection::vec(0u8..3, 3),
    ) {
        let l = labels(&s);
        let mut assignments = Vec::new();
        for (k, x) in l.iter().enumerate().skip(1) {
            let role = match roles[k - 1] {
                0 => Role::AliceQsi,
                1 => Role::BobQsi,
                _ => Role::Reference,
            };
            assignments.push((x.as_str(), role));
        }
        let s = s.with_roles(&assignments).unwrap();
        let p = PartitionSpec::from_state(&s).unwrap();
        let grid = cost_grid(&s, &p).unwrap();
        prop_assert!(grid.monotonicity_violation() <= 1e-9);
        for cell in &grid.cells {
            prop_assert!(cell.q >= -1e-9);
            prop_assert!(cell.c >= -1e-9);
            let q = quantum_cost_from_reference(&s, &p, UsageSelection { i: cell.i, j: cell.j }).unwrap();
            prop_assert!((q - cell.q).abs() < 1e-9);
        }
    }

    #[test]
    fn document_round_trip_and_digest(seed in any::<u64>(), rank in 1usize..=4) {
        let text = format!(
            r#"{{"subsystems":[{{"label":"C","dim":2,"role":"transfer"}},{{"label":"B","dim":3,"role":"bob_qsi"}}],
                "state":{{"kind":"random_mixed","params":{{"rank":{rank},"seed":{seed}}}}}}}"#
        );
        let doc = StateDocument::from_json(&text).unwrap();
        let again = StateDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&doc, &again);
        prop_assert_eq!(input_digest(&text).unwrap(), input_digest(&doc.to_json()).unwrap());
        let (a, _) = parse_state_document(&text, 0).unwrap();
        let (b, _) = parse_state_document(&doc.to_json(), 99).unwrap();
        prop_assert!(a.rho().max_abs_diff(b.rho()).unwrap() == 0.0);
    }
}
