//! Exact preparation of an arbitrary state with uniformly controlled rotations.
//!
//! A magnitude pass sets qubit `k` with a y-rotation multiplexed over qubits
//! `0..k`; a phase pass then fixes relative phases with z-rotations from the
//! last qubit up. Each multiplexor with `k` controls lowers to `2^k`
//! rotations and `2^k` CNOTs along a Gray-code cycle, so the whole circuit
//! has at most `4·2^N` gates.

use std::f64::consts::PI;

use super::continuous::{Axis, ContinuousCircuit, ContinuousOp};
use crate::statevec::StateVector;

/// Angles below this are treated as zero and skipped.
const ANGLE_EPS: f64 = 1e-12;

/// Upper bound on gate count of [`prepare_state_exact`] for `n` qubits.
pub fn prepare_state_gate_bound(n: usize) -> usize {
    4 << n
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Multiplexed rotation on `target` controlled by qubits `0..k` (qubit 0 is
/// the most significant bit of the angle index).
fn uniformly_controlled(out: &mut ContinuousCircuit, axis: Axis, angles: &[f64], target: usize) {
    let n = angles.len();
    let k = n.trailing_zeros() as usize;
    if angles.iter().all(|a| a.abs() < ANGLE_EPS) {
        return;
    }
    if k == 0 {
        out.push(ContinuousOp::Rotation {
            axis,
            angle: angles[0],
            target,
        })
        .expect("valid target");
        return;
    }
    // α_j = Σ_i (−1)^{popcount(j & g(i))} θ_i, inverted with the transpose
    let thetas: Vec<f64> = (0..n)
        .map(|i| {
            let g = gray(i);
            let sum: f64 = angles
                .iter()
                .enumerate()
                .map(|(j, a)| if (j & g).count_ones() % 2 == 0 { *a } else { -*a })
                .sum();
            sum / n as f64
        })
        .collect();
    for (i, &theta) in thetas.iter().enumerate() {
        if theta.abs() >= ANGLE_EPS {
            out.push(ContinuousOp::Rotation {
                axis,
                angle: theta,
                target,
            })
            .expect("valid target");
        }
        let flipped = gray(i) ^ gray((i + 1) % n);
        let bit = flipped.trailing_zeros() as usize;
        out.cnot(k - 1 - bit, target).expect("valid target");
    }
}

/// Magnitude multiplexor acting on a fresh `|0⟩` target. Angle patterns in
/// `{0, π}` collapse to a copy (CNOT), a negated copy, or a constant flip.
/// `None` marks a prefix with zero weight, whose angle is irrelevant.
fn magnitude_stage(out: &mut ContinuousCircuit, angles: &[Option<f64>], target: usize) {
    let k = angles.len().trailing_zeros() as usize;
    let classify = |a: f64| {
        if a.abs() < ANGLE_EPS {
            Some(false)
        } else if (a - PI).abs() < ANGLE_EPS {
            Some(true)
        } else {
            None
        }
    };
    let bits: Option<Vec<Option<bool>>> = angles
        .iter()
        .map(|a| match a {
            None => Some(None),
            Some(x) => classify(*x).map(Some),
        })
        .collect();
    if let Some(bits) = bits {
        let fits = |f: &dyn Fn(usize) -> bool| {
            bits.iter()
                .enumerate()
                .all(|(j, b)| b.is_none_or(|b| b == f(j)))
        };
        if fits(&|_| false) {
            return;
        }
        if fits(&|_| true) {
            out.ry(PI, target).expect("valid target");
            return;
        }
        for control in 0..k {
            let bit = |j: usize| (j >> (k - 1 - control)) & 1 == 1;
            if fits(&bit) {
                out.cnot(control, target).expect("valid target");
                return;
            }
            if fits(&|j| !bit(j)) {
                out.ry(PI, target).expect("valid target");
                out.cnot(control, target).expect("valid target");
                return;
            }
        }
    }
    let dense: Vec<f64> = angles.iter().map(|a| a.unwrap_or(0.0)).collect();
    uniformly_controlled(out, Axis::Y, &dense, target);
}

/// Circuit of y/z rotations and CNOTs mapping `|0…0⟩` to `φ` up to global phase.
pub fn prepare_state_exact(phi: &StateVector) -> ContinuousCircuit {
    let n = phi.num_qubits();
    let amps = phi.amplitudes();
    let mut out = ContinuousCircuit::new(n);

    // weights[k][p]: squared norm of the amplitudes whose first k bits are p
    let mut weights: Vec<Vec<f64>> = vec![amps.iter().map(|a| a.norm_sqr()).collect()];
    for _ in 0..n {
        let last = weights.last().unwrap();
        let next = last.chunks(2).map(|c| c[0] + c[1]).collect();
        weights.push(next);
    }
    weights.reverse();
    for k in 0..n {
        let angles: Vec<Option<f64>> = (0..1usize << k)
            .map(|p| {
                let w0 = weights[k + 1][2 * p];
                let w1 = weights[k + 1][2 * p + 1];
                (w0 + w1 > 0.0).then(|| 2.0 * w1.sqrt().atan2(w0.sqrt()))
            })
            .collect();
        magnitude_stage(&mut out, &angles, k);
    }

    let mut phases: Vec<f64> = amps
        .iter()
        .map(|a| if a.norm() > 0.0 { a.arg() } else { 0.0 })
        .collect();
    for target in (0..n).rev() {
        let deltas: Vec<f64> = phases.chunks(2).map(|c| c[1] - c[0]).collect();
        uniformly_controlled(&mut out, Axis::Z, &deltas, target);
        phases = phases.chunks(2).map(|c| (c[0] + c[1]) / 2.0).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn zero_state_needs_nothing() {
        for n in 1..4 {
            assert!(prepare_state_exact(&StateVector::zero_state(n).unwrap()).is_empty());
        }
    }

    #[test]
    fn one_is_a_single_flip() {
        let one = StateVector::basis_state(1, 1).unwrap();
        let cc = prepare_state_exact(&one);
        assert_eq!(
            cc.ops(),
            &[ContinuousOp::Rotation {
                axis: Axis::Y,
                angle: PI,
                target: 0
            }]
        );
    }

    #[test]
    fn bell_pair() {
        let s = FRAC_1_SQRT_2;
        let bell = StateVector::new(2, vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap();
        let cc = prepare_state_exact(&bell);
        assert_eq!(cc.len(), 2);
        match cc.ops()[0] {
            ContinuousOp::Rotation {
                axis: Axis::Y,
                angle,
                target: 0,
            } => assert!((angle - PI / 2.0).abs() < 1e-12),
            ref other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            cc.ops()[1],
            ContinuousOp::Cnot {
                control: 0,
                target: 1
            }
        );
        assert!((cc.run().unwrap().fidelity(&bell).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_states_are_prepared_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..20 {
                let phi = StateVector::random(n, &mut rng).unwrap();
                let cc = prepare_state_exact(&phi);
                assert!(cc.len() <= prepare_state_gate_bound(n));
                let f = cc.run().unwrap().fidelity(&phi).unwrap();
                assert!(f >= 1.0 - 1e-9, "n={n} fidelity {f}");
            }
        }
    }

    #[test]
    fn sparse_states_are_prepared_exactly() {
        // GHZ, W and a basis state exercise the zero-weight prefixes
        let s3 = 1.0 / 3f64.sqrt();
        let z = c(0., 0.);
        let ghz = StateVector::normalized(3, vec![c(1., 0.), z, z, z, z, z, z, c(0., 1.)]).unwrap();
        let w = StateVector::new(3, vec![z, c(s3, 0.), c(s3, 0.), z, c(s3, 0.), z, z, z]).unwrap();
        let b = StateVector::basis_state(3, 5).unwrap();
        for phi in [ghz, w, b] {
            let cc = prepare_state_exact(&phi);
            assert!(cc.run().unwrap().fidelity(&phi).unwrap() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn multiplexor_matches_block_diagonal() {
        // two controls, y-rotations: compare against the explicit block matrix
        let angles = [0.3, -1.2, 2.0, 0.7];
        let mut cc = ContinuousCircuit::new(3);
        uniformly_controlled(&mut cc, Axis::Y, &angles, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let psi = StateVector::random(3, &mut rng).unwrap();
        let got = cc.apply_to(psi.clone()).unwrap();
        let mut want = psi.into_amplitudes();
        for (p, &a) in angles.iter().enumerate() {
            let m = super::super::continuous::rotation_matrix(Axis::Y, a);
            let (x0, x1) = (want[2 * p], want[2 * p + 1]);
            want[2 * p] = m.get(0, 0) * x0 + m.get(0, 1) * x1;
            want[2 * p + 1] = m.get(1, 0) * x0 + m.get(1, 1) * x1;
        }
        for (g, w) in got.amplitudes().iter().zip(&want) {
            assert!((g - w).norm() < 1e-12);
        }
    }
}
