//! Evaluator and verifier semantics: pinned edge values, agreement between
//! the basis and exhaustive strategies, canonical counterexamples, witness
//! replay, and determinism across seeds and worker counts.

use ncnet_core::algebra::Alphabet;
use ncnet_core::build::families::{build_n0, build_n1, build_n3};
use ncnet_core::codes::linear::{n0_scalar_linear, n1_scalar_linear, n3_scalar_linear};
use ncnet_core::codes::nonlinear::n3_nonlinear;
use ncnet_core::net::code::{Code, EdgeFunction, LinearForm};
use ncnet_core::net::eval::Evaluator;
use ncnet_core::net::network::NetworkSpec;
use ncnet_core::net::structure::block_structure;
use ncnet_core::net::verify::{
    confirm_witness, verify_exhaustive, verify_linear_basis, verify_random, Verdict,
    VerifyOptions, Witness,
};

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

/// Overwrite the decoder for `(receiver, message)` with the all-zero linear
/// form, which keeps the code well-typed but decodes 0 everywhere.
fn zero_decoder(code: &mut Code, receiver: &str, message: &str) {
    let d = code
        .decoders
        .iter_mut()
        .find(|d| d.receiver == receiver && d.message == message)
        .expect("decoder exists");
    d.function = EdgeFunction::Linear(LinearForm::default());
}

fn exhaustive_witness(net: &NetworkSpec, code: &Code, options: &VerifyOptions) -> (Witness, u64) {
    match verify_exhaustive(net, code, options).unwrap() {
        Verdict::CounterExample { witness, assignments_checked } => (*witness, assignments_checked),
        other => panic!("expected a counterexample, got {other:?}"),
    }
}

#[test]
fn bottleneck_values_are_modular_sums() {
    let net = build_n0(2).unwrap();
    let structure = block_structure(&net).unwrap();
    let block = &structure.blocks[0];
    let code = n0_scalar_linear(2, Alphabet::ring(3)).unwrap();
    let ev = Evaluator::new(&net, &code).unwrap();
    let mut scratch = ev.scratch();

    let assign = |values: [u64; 3]| -> Vec<Vec<u64>> {
        let mut msgs = vec![vec![0u64]; 3];
        for (pos, input) in block.inputs.iter().enumerate() {
            msgs[ev.index.message_index[input]] = vec![values[pos]];
        }
        msgs
    };

    // All-ones: the full bottleneck carries 1+1+1 = 0 mod 3 and each partial
    // bottleneck carries the sum of the other two inputs, 2.
    let msgs = assign([1, 1, 1]);
    ev.eval_edges(&msgs, &mut scratch);
    assert_eq!(ev.edge_value(&scratch, &block.full_edge).unwrap(), &[0]);
    for e in &block.partial_edges {
        assert_eq!(ev.edge_value(&scratch, e).unwrap(), &[2]);
    }

    // A mixed assignment pins each partial sum separately.
    let msgs = assign([1, 2, 0]);
    ev.eval_edges(&msgs, &mut scratch);
    assert_eq!(ev.edge_value(&scratch, &block.full_edge).unwrap(), &[0]);
    assert_eq!(ev.edge_value(&scratch, &block.partial_edges[0]).unwrap(), &[2]);
    assert_eq!(ev.edge_value(&scratch, &block.partial_edges[1]).unwrap(), &[1]);
    assert_eq!(ev.edge_value(&scratch, &block.partial_edges[2]).unwrap(), &[0]);
}

#[test]
fn basis_and_exhaustive_agree_and_certify() {
    // Both strategies must certify the same linear solutions, the basis one
    // after #messages assignments and the exhaustive one after n^#messages.
    let net = build_n1(2).unwrap();
    let code = n1_scalar_linear(2, Alphabet::ring(3)).unwrap();
    assert_eq!(
        verify_linear_basis(&net, &code).unwrap(),
        Verdict::Solution { assignments_checked: 3 }
    );
    assert_eq!(
        verify_exhaustive(&net, &code, &opts()).unwrap(),
        Verdict::Solution { assignments_checked: 27 }
    );

    let net = build_n3(2, 3).unwrap();
    let code = n3_scalar_linear(2, 3, Alphabet::ring(5)).unwrap();
    assert_eq!(
        verify_linear_basis(&net, &code).unwrap(),
        Verdict::Solution { assignments_checked: 6 }
    );
    assert_eq!(
        verify_exhaustive(&net, &code, &opts()).unwrap(),
        Verdict::Solution { assignments_checked: 15625 }
    );
}

#[test]
fn corrupted_decoders_fail_both_verifiers() {
    let net = build_n1(2).unwrap();
    let pristine = n1_scalar_linear(2, Alphabet::ring(3)).unwrap();
    let structure = block_structure(&net).unwrap();
    let (tap_receiver, tap_message) = {
        let (r, demands) = &structure.extra_receivers[0];
        (r.clone(), demands[0].clone())
    };

    let mut corrupted = pristine.clone();
    zero_decoder(&mut corrupted, &tap_receiver, &tap_message);

    let basis = verify_linear_basis(&net, &corrupted).unwrap();
    assert!(basis.is_counterexample());
    if let Verdict::CounterExample { witness, .. } = &basis {
        assert!(confirm_witness(&net, &corrupted, witness).unwrap());
    }

    let (witness, _) = exhaustive_witness(&net, &corrupted, &opts());
    assert_eq!(witness.receiver, tap_receiver);
    assert_eq!(witness.message, tap_message);
    assert!(confirm_witness(&net, &corrupted, &witness).unwrap());
    // The pristine code decodes that same assignment fine.
    assert!(!confirm_witness(&net, &pristine, &witness).unwrap());
}

#[test]
fn counterexamples_are_canonical_and_replay() {
    // Zero out every decoder of the two-input gadget over bits. The zero
    // assignment still decodes, so the first failure in canonical order is
    // the assignment (0, 1) at the second positional receiver.
    let net = build_n0(1).unwrap();
    let structure = block_structure(&net).unwrap();
    let block = &structure.blocks[0];
    let mut code = n0_scalar_linear(1, Alphabet::ring(2)).unwrap();
    for (receiver, input) in block.receivers.iter().zip(&block.inputs) {
        zero_decoder(&mut code, receiver, input);
    }

    let (witness, checked) = exhaustive_witness(&net, &code, &opts());
    assert_eq!(checked, 2);
    assert_eq!(witness.receiver, block.receivers[1]);
    assert_eq!(witness.message, block.inputs[1]);
    assert_eq!(witness.decoded, vec![0]);
    assert_eq!(witness.expected, vec![1]);
    assert_eq!(witness.assignment[&block.inputs[0]], vec![0]);
    assert_eq!(witness.assignment[&block.inputs[1]], vec![1]);

    // Parallel sweeps report the identical canonical witness.
    for workers in [2usize, 4] {
        let parallel = VerifyOptions { workers, ..opts() };
        let (w, c) = exhaustive_witness(&net, &code, &parallel);
        assert_eq!(w, witness);
        assert_eq!(c, checked);
    }
    assert!(confirm_witness(&net, &code, &witness).unwrap());
}

#[test]
fn random_sampling_is_seed_deterministic() {
    let net = build_n1(2).unwrap();
    let pristine = n1_scalar_linear(2, Alphabet::ring(3)).unwrap();
    let structure = block_structure(&net).unwrap();
    let (tap_receiver, tap_message) = {
        let (r, demands) = &structure.extra_receivers[0];
        (r.clone(), demands[0].clone())
    };
    let mut corrupted = pristine.clone();
    zero_decoder(&mut corrupted, &tap_receiver, &tap_message);

    let serial = verify_random(&net, &corrupted, 300, 7, &opts()).unwrap();
    assert!(serial.is_counterexample());
    let repeat = verify_random(&net, &corrupted, 300, 7, &opts()).unwrap();
    assert_eq!(serial, repeat);
    let parallel =
        verify_random(&net, &corrupted, 300, 7, &VerifyOptions { workers: 3, ..opts() }).unwrap();
    assert_eq!(serial, parallel);
    if let Verdict::CounterExample { witness, .. } = &serial {
        assert!(confirm_witness(&net, &corrupted, witness).unwrap());
    }

    assert_eq!(
        verify_random(&net, &pristine, 300, 7, &opts()).unwrap(),
        Verdict::NoCounterexampleFound { assignments_checked: 300 }
    );
}

#[test]
fn oversized_spaces_are_capped_and_solutions_are_worker_independent() {
    let net = build_n0(2).unwrap();
    let code = n0_scalar_linear(2, Alphabet::ring(3)).unwrap();
    let tiny = VerifyOptions { cap: 10, workers: 1 };
    assert_eq!(
        verify_exhaustive(&net, &code, &tiny).unwrap(),
        Verdict::Capped { space: 27, cap: 10 }
    );

    let net = build_n3(2, 2).unwrap();
    let code = n3_nonlinear(2, 2).unwrap();
    let serial = verify_exhaustive(&net, &code, &opts()).unwrap();
    assert_eq!(serial, Verdict::Solution { assignments_checked: 1024 });
    let parallel =
        verify_exhaustive(&net, &code, &VerifyOptions { workers: 4, ..opts() }).unwrap();
    assert_eq!(serial, parallel);
}
