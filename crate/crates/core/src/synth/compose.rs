//! Circuits for repeated copies and product states, built from per-register parts.

use super::compile::{check_epsilon, compile_state, compile_to_basis, Compiled, Compiler};
use super::continuous::ContinuousCircuit;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::statevec::{StateVector, DEFAULT_MAX_QUBITS};

fn check_register(total: usize) -> Result<()> {
    if total > DEFAULT_MAX_QUBITS {
        return Err(Error::Size {
            requested: total,
            max: DEFAULT_MAX_QUBITS,
        });
    }
    Ok(())
}

/// `m` copies of `base` on disjoint registers, each compiled at `ε/(4m)`.
/// The reported fidelity is against `run(base)^{⊗m}`.
pub fn copies_circuit(
    base: &ContinuousCircuit,
    m: usize,
    epsilon: f64,
    compiler: &Compiler,
) -> Result<Compiled> {
    check_epsilon(epsilon)?;
    if m == 0 {
        return Err(Error::Domain("copy count must be at least 1".into()));
    }
    let n = base.num_qubits();
    check_register(n * m)?;
    let one = compile_to_basis(base, compiler, epsilon / (4.0 * m as f64))?;
    let mut circuit = Circuit::new(n * m, compiler.basis().clone());
    for k in 0..m {
        circuit.append_shifted(&one.circuit, k * n)?;
    }
    let phi = base.run()?;
    let mut target = phi.clone();
    for _ in 1..m {
        target = target.tensor(&phi)?;
    }
    let fidelity = circuit.run()?.fidelity(&target)?;
    Ok(Compiled {
        circuit,
        fidelity: Some(fidelity),
        ..one
    })
}

/// Product state `φ₁ ⊗ … ⊗ φ_J`, each factor compiled at `ε/J` on its own
/// register.
pub fn separable_circuit(parts: &[StateVector], epsilon: f64, compiler: &Compiler) -> Result<Compiled> {
    check_epsilon(epsilon)?;
    if parts.is_empty() {
        return Err(Error::Domain("need at least one factor".into()));
    }
    let total: usize = parts.iter().map(StateVector::num_qubits).sum();
    check_register(total)?;
    let per = epsilon / parts.len() as f64;
    let mut circuit = Circuit::new(total, compiler.basis().clone());
    let mut offset = 0;
    let mut budget = f64::INFINITY;
    let mut continuous_gates = 0;
    let mut max_depth_used = 0;
    for phi in parts {
        let c = compile_state(phi, compiler, per)?;
        circuit.append_shifted(&c.circuit, offset)?;
        offset += phi.num_qubits();
        budget = budget.min(c.per_gate_budget);
        continuous_gates += c.continuous_gates;
        max_depth_used = max_depth_used.max(c.max_depth_used);
    }
    let mut target = parts[0].clone();
    for phi in &parts[1..] {
        target = target.tensor(phi)?;
    }
    let fidelity = circuit.run()?.fidelity(&target)?;
    Ok(Compiled {
        circuit,
        fidelity: Some(fidelity),
        per_gate_budget: budget,
        continuous_gates,
        max_depth_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::c;
    use crate::synth::stateprep::prepare_state_exact;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn compiler() -> std::sync::Arc<Compiler> {
        Compiler::standard()
    }

    #[test]
    fn single_copy() {
        let mut plus = ContinuousCircuit::new(1);
        plus.ry(PI / 2.0, 0).unwrap();
        let out = copies_circuit(&plus, 1, 0.1, &compiler()).unwrap();
        assert!(out.fidelity.unwrap() >= 0.9);
        assert_eq!(out.circuit.num_qubits(), 1);
    }

    #[test]
    fn three_plus_copies() {
        let mut plus = ContinuousCircuit::new(1);
        plus.ry(PI / 2.0, 0).unwrap();
        let out = copies_circuit(&plus, 3, 0.06, &compiler()).unwrap();
        assert_eq!(out.circuit.num_qubits(), 3);
        assert!(out.fidelity.unwrap() >= 0.94);
        // each copy gets ε/(4m) = 0.005, so the per-gate budget is √0.005/2 or tighter
        assert!(out.per_gate_budget <= 0.005f64.sqrt() / 2.0 + 1e-15);
    }

    #[test]
    fn two_bell_copies() {
        let s = FRAC_1_SQRT_2;
        let bell = StateVector::new(2, vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap();
        let base = prepare_state_exact(&bell);
        let out = copies_circuit(&base, 2, 0.05, &compiler()).unwrap();
        assert!(out.fidelity.unwrap() >= 0.95);
    }

    #[test]
    fn oversized_copies_are_rejected() {
        let base = ContinuousCircuit::new(7);
        assert!(matches!(
            copies_circuit(&base, 3, 0.1, &compiler()),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn single_factor_matches_direct_compilation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let phi = StateVector::random(2, &mut rng).unwrap();
        let sep = separable_circuit(std::slice::from_ref(&phi), 0.05, &compiler()).unwrap();
        let direct = compile_state(&phi, &compiler(), 0.05).unwrap();
        assert_eq!(sep.circuit, direct.circuit);
    }

    #[test]
    fn four_single_qubit_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let parts: Vec<StateVector> = (0..4).map(|_| StateVector::random(1, &mut rng).unwrap()).collect();
        let sep = separable_circuit(&parts, 0.04, &compiler()).unwrap();
        assert!(sep.fidelity.unwrap() >= 0.96);
        assert_eq!(sep.circuit.num_qubits(), 4);
    }

    #[test]
    fn product_structure_saves_gates() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let parts: Vec<StateVector> = (0..4).map(|_| StateVector::random(1, &mut rng).unwrap()).collect();
        let sep = separable_circuit(&parts, 0.04, &compiler()).unwrap();
        let generic = StateVector::random(4, &mut rng).unwrap();
        let gen = compile_state(&generic, &compiler(), 0.04).unwrap();
        assert!(sep.continuous_gates < gen.continuous_gates);
        assert!(sep.circuit.len() < gen.circuit.len());
    }
}
