//! Lowering continuous circuits to a finite basis with Solovay–Kitaev words.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::continuous::{rotation_matrix, Axis, ContinuousCircuit, ContinuousOp};
use super::net::Net;
use super::sk::{SkApprox, SkParams, DEFAULT_L0, DEFAULT_MAX_DEPTH};
use crate::circuit::{standard_basis, Circuit, GateBasis};
use crate::error::{Error, Result};
use crate::statevec::{StateVector, UnitaryMatrix};

/// Times the per-gate budget is halved before giving up on the fidelity target.
const MAX_TIGHTENINGS: usize = 6;

/// A shared net plus the deepest recursion compile calls may use.
#[derive(Debug, Clone)]
pub struct Compiler {
    net: Arc<Net>,
    max_depth: usize,
}

impl Compiler {
    pub fn new(net: Arc<Net>, max_depth: usize) -> Self {
        Compiler { net, max_depth }
    }

    /// Builds a net over `basis`; `params.depth` is the depth ceiling.
    pub fn from_params(basis: Arc<GateBasis>, params: &SkParams) -> Result<Self> {
        Ok(Compiler::new(Arc::new(Net::build(basis, params.l0)?), params.depth))
    }

    /// Default compiler over the standard basis, built once per process.
    pub fn standard() -> Arc<Compiler> {
        static STANDARD: OnceLock<Arc<Compiler>> = OnceLock::new();
        STANDARD
            .get_or_init(|| {
                let net = Net::build(standard_basis(), DEFAULT_L0).expect("default net fits the cap");
                Arc::new(Compiler::new(Arc::new(net), DEFAULT_MAX_DEPTH))
            })
            .clone()
    }

    pub fn net(&self) -> &Arc<Net> {
        &self.net
    }

    pub fn basis(&self) -> &Arc<GateBasis> {
        self.net.basis()
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub circuit: Circuit,
    /// Simulated fidelity against the exact state, when simulated.
    pub fidelity: Option<f64>,
    /// Per-gate distance budget that met the target.
    pub per_gate_budget: f64,
    /// Continuous single-qubit gates replaced by words.
    pub continuous_gates: usize,
    /// Deepest recursion used by any word.
    pub max_depth_used: usize,
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::Precision(epsilon))
    }
}

type RotationKey = (Axis, u64);

fn is_trivial(axis: Axis, angle: f64) -> bool {
    rotation_matrix(axis, angle)
        .phase_insensitive_distance(&UnitaryMatrix::identity(2))
        .map(|d| d < 1e-12)
        .unwrap_or(false)
}

/// Replaces every rotation of `cc` by a basis word within `δ = √ε/(2m)` and
/// checks `fidelity(run(compiled), run(cc)) ≥ 1 − ε` by simulation, halving
/// `δ` until it holds.
pub fn compile_to_basis(cc: &ContinuousCircuit, compiler: &Compiler, epsilon: f64) -> Result<Compiled> {
    check_epsilon(epsilon)?;
    let lowered = cc.lower_cphase();
    let basis = compiler.basis().clone();
    let cnot = basis
        .index_of("CNOT")
        .ok_or_else(|| Error::InvalidBasis(format!("basis `{}` has no CNOT", basis.id())))?;

    let rotations: Vec<RotationKey> = lowered
        .ops()
        .iter()
        .filter_map(|op| match *op {
            ContinuousOp::Rotation { axis, angle, .. } if !is_trivial(axis, angle) => {
                Some((axis, angle.to_bits()))
            }
            _ => None,
        })
        .collect();
    let m = rotations.len();
    let mut unique = rotations.clone();
    unique.sort_by_key(|&(axis, bits)| (axis as u8, bits));
    unique.dedup();

    let reference = cc.run()?;
    let mut budget = if m == 0 { 1.0 } else { epsilon.sqrt() / (2.0 * m as f64) };
    let mut last_fidelity = 0.0;
    for _ in 0..=MAX_TIGHTENINGS {
        let words: HashMap<RotationKey, SkApprox> = unique
            .par_iter()
            .map(|&(axis, bits)| {
                let target = rotation_matrix(axis, f64::from_bits(bits));
                compiler
                    .net
                    .sk_within(&target, budget, compiler.max_depth)
                    .map(|a| ((axis, bits), a))
            })
            .collect::<Result<_>>()?;
        let mut circuit = Circuit::new(cc.num_qubits(), basis.clone());
        for op in lowered.ops() {
            match *op {
                ContinuousOp::Rotation { axis, angle, target } => {
                    if let Some(a) = words.get(&(axis, angle.to_bits())) {
                        for &g in &a.word {
                            circuit.push_index(g, &[target])?;
                        }
                    }
                }
                ContinuousOp::Cnot { control, target } => {
                    circuit.push_index(cnot, &[control, target])?;
                }
                ContinuousOp::CPhase { .. } => unreachable!("lowered above"),
            }
        }
        let fidelity = circuit.run()?.fidelity(&reference)?;
        if fidelity >= 1.0 - epsilon {
            return Ok(Compiled {
                circuit,
                fidelity: Some(fidelity),
                per_gate_budget: budget,
                continuous_gates: m,
                max_depth_used: words.values().map(|a| a.depth).max().unwrap_or(0),
            });
        }
        last_fidelity = fidelity;
        budget /= 2.0;
    }
    Err(Error::FidelityShortfall {
        fidelity: last_fidelity,
        required: 1.0 - epsilon,
    })
}

/// Compiles a preparation of `phi` to the basis at precision `ε`. One-qubit
/// states go through [`compile_one_qubit_state`], larger ones through the
/// exact preparation and [`compile_to_basis`].
pub fn compile_state(phi: &StateVector, compiler: &Compiler, epsilon: f64) -> Result<Compiled> {
    if phi.num_qubits() == 1 {
        return compile_one_qubit_state(phi, compiler, epsilon);
    }
    compile_to_basis(&super::stateprep::prepare_state_exact(phi), compiler, epsilon)
}

fn overlap_with_zero_column(phi: &StateVector, u: &UnitaryMatrix) -> f64 {
    let a = phi.amplitudes();
    (a[0].conj() * u.get(0, 0) + a[1].conj() * u.get(1, 0)).norm_sqr()
}

/// Only `W|0⟩` has to match, so the search runs over the net's images of
/// `|0⟩` and keeps the shortest word with `|⟨φ|W|0⟩|² ≥ 1 − ε`. When no net
/// word is close enough, SK refines the unitary whose first column is `φ`,
/// and past the recursion cap the two-rotation preparation is compiled.
pub fn compile_one_qubit_state(phi: &StateVector, compiler: &Compiler, epsilon: f64) -> Result<Compiled> {
    check_epsilon(epsilon)?;
    if phi.num_qubits() != 1 {
        return Err(Error::Domain(format!("expected one qubit, got {}", phi.num_qubits())));
    }
    let done = |word: &[usize], depth: usize| -> Result<Compiled> {
        let mut circuit = Circuit::new(1, compiler.basis().clone());
        for &g in word {
            circuit.push_index(g, &[0])?;
        }
        let fidelity = circuit.run()?.fidelity(phi)?;
        Ok(Compiled {
            circuit,
            fidelity: Some(fidelity),
            per_gate_budget: epsilon,
            continuous_gates: 1,
            max_depth_used: depth,
        })
    };
    let net = compiler.net();
    let best = (0..net.len())
        .map(|i| (i, overlap_with_zero_column(phi, &net.matrix(i))))
        .filter(|&(_, f)| f >= 1.0 - epsilon)
        .min_by(|a, b| {
            let (la, lb) = (net.word(a.0).len(), net.word(b.0).len());
            la.cmp(&lb).then(b.1.total_cmp(&a.1))
        });
    if let Some((i, _)) = best {
        return done(&net.word(i), 0);
    }
    let a = phi.amplitudes();
    let u = UnitaryMatrix::new(2, vec![a[0], -a[1].conj(), a[1], a[0].conj()])?;
    for depth in 1..=compiler.max_depth {
        let approx = net.sk_approximate(&u, depth)?;
        let c = done(&approx.word, depth)?;
        if c.fidelity.unwrap_or(0.0) >= 1.0 - epsilon {
            return Ok(c);
        }
    }
    compile_to_basis(&super::stateprep::prepare_state_exact(phi), compiler, epsilon)
}
