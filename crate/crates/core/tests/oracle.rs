mod common;

use common::oracle::{self, from_library};
use common::{full_corpus, random_corpus};
use qsi_core::costs::{cost_grid, quantum_cost_from_reference, UsageSelection};
use qsi_core::entropy::{qcmi, von_neumann};

/// Worked catalog values computed only from raw amplitudes.
#[test]
fn worked_values_from_brute_force_entropies() {
    let ghz3 = oracle::ghz(3);
    let sm_fqsw = oracle::reference_costs(&ghz3, &[2, 2, 2], 0, &[], &[1]);
    assert!((sm_fqsw.c - 1.0).abs() < 1e-9);
    assert!(sm_fqsw.e_merging.abs() < 1e-9);
    assert!((sm_fqsw.q - 0.5).abs() < 1e-9);
    assert!((sm_fqsw.e_redistribution + 0.5).abs() < 1e-9);

    let bell = oracle::bell();
    let sc_qt = oracle::reference_costs(&bell, &[2, 2], 0, &[], &[]);
    assert!((sc_qt.q - 1.0).abs() < 1e-9);
    assert!(sc_qt.e_redistribution.abs() < 1e-9);
    assert!((sc_qt.c - 2.0).abs() < 1e-9);
    assert!((sc_qt.e_merging - 1.0).abs() < 1e-9);
}

#[test]
fn subsystem_entropies_match_oracle() {
    for inst in full_corpus() {
        let rho = from_library(&inst.state);
        let dims = inst.state.layout().dims();
        let labels = inst.state.layout().labels();
        let n = labels.len();
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
            let names: Vec<&str> = set.iter().map(|&k| labels[k]).collect();
            let lib = von_neumann(&inst.state, &names).unwrap().0;
            let want = oracle::s(&rho, &dims, &set);
            assert!((lib - want).abs() < 1e-9, "{}: S({names:?}) {lib} vs {want}", inst.name);
        }
    }
}

#[test]
fn conditional_information_matches_oracle() {
    for inst in random_corpus() {
        let rho = from_library(&inst.state);
        let dims = inst.state.layout().dims();
        let labels = inst.state.layout().labels();
        let lib = qcmi(&inst.state, &[labels[0]], &[labels[2]], &[labels[1]]).unwrap().0;
        let want = oracle::cmi(&rho, &dims, &[0], &[2], &[1]);
        assert!((lib - want).abs() < 1e-9, "{}", inst.name);
    }
}

/// On pure instances every grid cell agrees with the reference-form costs.
#[test]
fn pure_grid_matches_reference_form() {
    for inst in full_corpus().into_iter().filter(|i| i.state.is_known_pure()) {
        let rho = from_library(&inst.state);
        let dims = inst.state.layout().dims();
        let pos = |l: &String| inst.state.layout().position(l).unwrap();
        let c = pos(&inst.partition.transfer);
        let grid = cost_grid(&inst.state, &inst.partition).unwrap();
        for cell in &grid.cells {
            let a: Vec<usize> = inst.partition.alice_prefix(cell.i).iter().map(pos).collect();
            let b: Vec<usize> = inst.partition.bob_prefix(cell.j).iter().map(pos).collect();
            let want = oracle::reference_costs(&rho, &dims, c, &a, &b);
            let ctx = format!("{} ({}, {})", inst.name, cell.i, cell.j);
            assert!((cell.q - want.q).abs() < 1e-9, "{ctx}: Q");
            assert!((cell.e_redistribution - want.e_redistribution).abs() < 1e-9, "{ctx}: E");
            assert!((cell.c - want.c).abs() < 1e-9, "{ctx}: c");
            assert!((cell.e_merging - want.e_merging).abs() < 1e-9, "{ctx}: e");
        }
    }
}

/// Mixed instances: the library's purified reference form agrees with the
/// direct cost.
#[test]
fn mixed_quantum_cost_via_purification() {
    for inst in random_corpus().into_iter().filter(|i| !i.state.is_known_pure()) {
        let grid = cost_grid(&inst.state, &inst.partition).unwrap();
        for cell in &grid.cells {
            let q = quantum_cost_from_reference(&inst.state, &inst.partition, UsageSelection { i: cell.i, j: cell.j })
                .unwrap();
            assert!((q - cell.q).abs() < 1e-9, "{} ({}, {})", inst.name, cell.i, cell.j);
        }
    }
}
