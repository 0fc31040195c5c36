use std::f64::consts::FRAC_1_SQRT_2;

use qcplx::bounds::{
    min_over_candidates, CandidateGenerator, CandidateOutcome, EmptyCircuit, GenericPreparation,
    GraphPreparation, ProductPreparation,
};
use qcplx::circuit::{expand, graph_basis, Circuit};
use qcplx::compress::{compressor_by_id, DEFAULT_COMPRESSOR};
use qcplx::encode::{decode, encode, translate, Code, EncodedString};
use qcplx::sources::{quantum_message_estimate, sample_sentence, WordSource};
use qcplx::statevec::{StateVector, C64};
use qcplx::synth::{compile_state, graph_state_circuit, Compiler, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(n: usize, amps: &[(usize, f64)]) -> StateVector {
    let mut v = vec![C64::new(0.0, 0.0); 1 << n];
    for &(i, a) in amps {
        v[i] = C64::new(a, 0.0);
    }
    StateVector::normalized(n, v).unwrap()
}

#[test]
fn compiled_state_survives_both_codes_and_text() {
    let phi = StateVector::random(2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let compiled = compile_state(&phi, &Compiler::standard(), 0.01).unwrap();
    let basis = compiled.circuit.basis().clone();
    let (a, b) = (Code::one_symbol(basis.clone()), Code::two_symbol(basis));

    let sa = encode(&compiled.circuit, &a).unwrap();
    let (sb, _) = translate(&sa, &a, &b).unwrap();
    assert_eq!(decode(&sb, &b).unwrap(), compiled.circuit);
    let reread = EncodedString::from_ascii(&sa.to_ascii(&a), &a).unwrap();
    assert_eq!(reread.symbols(), sa.symbols());

    let from_text = Circuit::parse(&compiled.circuit.to_text()).unwrap();
    assert!(from_text.run().unwrap().fidelity(&phi).unwrap() >= 0.99);
}

#[test]
fn graph_circuit_expands_to_the_same_state() {
    let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let coarse = graph_state_circuit(&g, false).unwrap();
    let (_, dict) = graph_basis();
    let fine = expand(&coarse, &dict).unwrap();
    assert!(fine.len() > coarse.len());
    let f = fine.run().unwrap().fidelity(&coarse.run().unwrap()).unwrap();
    assert!((f - 1.0).abs() < 1e-12);
}

#[test]
fn structure_is_found_by_the_cheapest_candidate() {
    let compiler = Compiler::standard();
    let comp = compressor_by_id(DEFAULT_COMPRESSOR).unwrap();
    let generic = GenericPreparation(compiler.clone());
    let product = ProductPreparation(compiler.clone());
    let graph = GraphPreparation { max_vertices: 5 };
    let gens: [&dyn CandidateGenerator; 4] = [&EmptyCircuit, &generic, &product, &graph];

    let zero = StateVector::zero_state(3).unwrap();
    assert_eq!(min_over_candidates(&zero, 0.01, &gens, "A", comp.as_ref()).unwrap().winner_id, "empty");

    // |+⟩|0⟩|+⟩: isolated vertices with and without a Hadamard
    let plus0plus = state(3, &[(0, 1.0), (1, 1.0), (4, 1.0), (5, 1.0)]);
    let r = min_over_candidates(&plus0plus, 0.01, &gens, "A", comp.as_ref()).unwrap();
    assert!(r.circuit.run().unwrap().fidelity(&plus0plus).unwrap() >= 0.99);

    let ghz = state(4, &[(0, FRAC_1_SQRT_2), (15, FRAC_1_SQRT_2)]);
    let r = min_over_candidates(&ghz, 0.01, &gens, "A", comp.as_ref()).unwrap();
    let generic_bits = match &r.outcomes[1].1 {
        CandidateOutcome::Accepted { bits } => *bits,
        other => panic!("generic: {other:?}"),
    };
    assert!(r.estimate.bits <= generic_bits);
    assert!(matches!(r.outcomes[2].1, CandidateOutcome::Failed(_)), "GHZ does not factor");
}

#[test]
fn quantum_message_splits_into_index_and_dictionary() {
    let compiler = Compiler::standard();
    let comp = compressor_by_id(DEFAULT_COMPRESSOR).unwrap();
    let generic = GenericPreparation(compiler);
    let gens: [&dyn CandidateGenerator; 2] = [&EmptyCircuit, &generic];
    let src = WordSource::quantum(
        vec![state(1, &[(0, 1.0)]), state(1, &[(0, 1.0), (1, 1.0)])],
        vec![0.5, 0.5],
    )
    .unwrap();
    let idx = sample_sentence(&src, 2000, 4).unwrap();
    let est = quantum_message_estimate(&src, &idx, 0.1, &gens, "A", comp.as_ref()).unwrap();
    assert_eq!(est.states.len(), 2);
    assert_eq!(est.states[0].winner_id, "empty");
    // a fair binary source needs about one bit per emission
    let per = est.index_bits / 2000.0;
    assert!((0.95..1.1).contains(&per), "{per}");
    assert!((est.total() - est.index_bits - est.dictionary_bits).abs() < 1e-9);
}
