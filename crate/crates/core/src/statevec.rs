//! Dense N-qubit pure states and small unitary matrices.
//!
//! Amplitudes are stored big-endian: qubit 0 is the most significant bit of
//! the basis index, so `|10⟩` on two qubits lives at index 2.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Global numerical tolerance for normalization and unitarity checks.
pub const TOLERANCE: f64 = 1e-10;

/// Largest register the dense simulator accepts.
pub const DEFAULT_MAX_QUBITS: usize = 20;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps an amplitude vector, checking length and normalization.
    pub fn new(num_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_size(num_qubits, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let state = StateVector {
            num_qubits,
            amplitudes,
        };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Like [`StateVector::new`] but rescales a nonzero vector to unit norm.
    pub fn normalized(num_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= f64::MIN_POSITIVE || !norm_sqr.is_finite() {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let scale = norm_sqr.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Self::new(num_qubits, amplitudes)
    }

    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::zero_state_with_limit(num_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_state_with_limit(num_qubits: usize, max_qubits: usize) -> Result<Self> {
        check_size(num_qubits, max_qubits)?;
        Self::basis_state(num_qubits, 0)
    }

    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Dimension {
                expected: dim,
                actual: index,
            });
        }
        let mut amplitudes = vec![C64::default(); dim];
        amplitudes[index] = c(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Haar-random state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random(num_qubits: usize, rng: &mut impl rand::Rng) -> Result<Self> {
        check_size(num_qubits, DEFAULT_MAX_QUBITS)?;
        let amplitudes = (0..1usize << num_qubits)
            .map(|_| {
                c(
                    rng.sample(rand_distr::StandardNormal),
                    rng.sample(rand_distr::StandardNormal),
                )
            })
            .collect();
        Self::normalized(num_qubits, amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Returns a new state with `u` applied to `targets` (first target is the
    /// most significant bit of `u`'s index).
    pub fn apply_gate(&self, u: &UnitaryMatrix, targets: &[usize]) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_gate_in_place(u, targets)?;
        Ok(out)
    }

    pub(crate) fn apply_gate_in_place(&mut self, u: &UnitaryMatrix, targets: &[usize]) -> Result<()> {
        check_targets(targets, self.num_qubits)?;
        let k = targets.len();
        if u.dim() != 1 << k {
            return Err(Error::Dimension {
                expected: 1 << k,
                actual: u.dim(),
            });
        }
        let n = self.num_qubits;
        // bit masks of the targets inside a basis index, most significant target first
        let masks: Vec<usize> = targets.iter().map(|&t| 1usize << (n - 1 - t)).collect();
        let target_mask: usize = masks.iter().sum();
        let sub = 1usize << k;
        let offsets: Vec<usize> = (0..sub)
            .map(|a| {
                (0..k)
                    .filter(|j| a >> (k - 1 - j) & 1 == 1)
                    .map(|j| masks[j])
                    .sum()
            })
            .collect();
        let mut buf = vec![C64::default(); sub];
        for base in 0..self.amplitudes.len() {
            if base & target_mask != 0 {
                continue;
            }
            for (slot, off) in buf.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base | off];
            }
            for (row, off) in offsets.iter().enumerate() {
                let r = &u.data[row * sub..(row + 1) * sub];
                self.amplitudes[base | off] = r.iter().zip(&buf).map(|(x, y)| x * y).sum();
            }
        }
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|², clamped into [0, 1].
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Kronecker product with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_size(n, DEFAULT_MAX_QUBITS)?;
        let mut amplitudes = Vec::with_capacity(1 << n);
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(StateVector {
            num_qubits: n,
            amplitudes,
        })
    }

    /// One line per amplitude: `index re im`.
    pub fn dump(&self) -> String {
        let mut s = String::with_capacity(self.dim() * 48);
        for (i, a) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(s, "{} {:.17e} {:.17e}", i, a.re, a.im);
        }
        s
    }
}

fn check_size(num_qubits: usize, max: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > max {
        return Err(Error::Size {
            requested: num_qubits,
            max,
        });
    }
    Ok(())
}

pub(crate) fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    let bad = targets.is_empty()
        || targets.iter().any(|&t| t >= num_qubits)
        || targets
            .iter()
            .enumerate()
            .any(|(i, t)| targets[..i].contains(t));
    if bad {
        return Err(Error::Target {
            targets: targets.to_vec(),
            num_qubits,
        });
    }
    Ok(())
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl UnitaryMatrix {
    /// Builds a matrix and checks `U·U† = I` entrywise within [`TOLERANCE`].
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(dim, data, TOLERANCE)
    }

    pub fn with_tolerance(dim: usize, data: Vec<C64>, tol: f64) -> Result<Self> {
        let m = Self::from_raw(dim, data)?;
        let deviation = m.unitarity_deviation();
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(m)
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(UnitaryMatrix { dim, data })
    }

    pub(crate) fn from_raw_unchecked(dim: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        UnitaryMatrix { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![C64::default(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c(1.0, 0.0);
        }
        UnitaryMatrix { dim, data }
    }

    pub fn diagonal(entries: &[C64]) -> Result<Self> {
        let dim = entries.len();
        let mut data = vec![C64::default(); dim * dim];
        for (i, e) in entries.iter().enumerate() {
            data[i * dim + i] = *e;
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    /// Number of qubits the matrix acts on, if the dimension is a power of two.
    pub fn arity(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        let d = self.dim;
        let mut data = vec![C64::default(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == C64::default() {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        Ok(UnitaryMatrix { dim: d, data })
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let d = self.dim;
        let mut data = vec![C64::default(); d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        UnitaryMatrix { dim: d, data }
    }

    /// Kronecker product with `self` on the leading qubits.
    pub fn kron(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        let (a, b) = (self.dim, rhs.dim);
        let d = a * b;
        let mut data = vec![C64::default(); d * d];
        for i in 0..a {
            for j in 0..a {
                let x = self.data[i * a + j];
                for k in 0..b {
                    for l in 0..b {
                        data[(i * b + k) * d + j * b + l] = x * rhs.data[k * b + l];
                    }
                }
            }
        }
        UnitaryMatrix { dim: d, data }
    }

    pub fn scaled(&self, factor: C64) -> UnitaryMatrix {
        UnitaryMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// Largest entrywise deviation of `U·U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = C64::default();
                for k in 0..d {
                    acc += self.data[i * d + k] * self.data[j * d + k].conj();
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn determinant(&self) -> C64 {
        self.to_nalgebra().determinant()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    /// Spectral norm of `self − other` (largest singular value).
    pub fn distance(&self, other: &UnitaryMatrix) -> Result<f64> {
        operator_distance(self, other)
    }

    /// `min_θ ‖self − e^{iθ} other‖₂`.
    pub fn phase_insensitive_distance(&self, other: &UnitaryMatrix) -> Result<f64> {
        phase_insensitive_distance(self, other)
    }
}

/// Spectral-norm distance `‖u − v‖₂`.
pub fn operator_distance(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.dim != v.dim {
        return Err(Error::Dimension {
            expected: u.dim,
            actual: v.dim,
        });
    }
    let diff = u.to_nalgebra() - v.to_nalgebra();
    let sv = diff.singular_values();
    Ok(sv.iter().cloned().fold(0.0, f64::max))
}

/// Spectral distance minimized over a global phase of `v`.
///
/// With `W = u†v` unitary and eigenphases `φ_j`, `‖u − e^{iθ}v‖ = max_j |1 − e^{i(φ_j+θ)}|`.
/// The optimum centres the shortest arc holding every eigenphase, giving
/// `2·sin(arc/4)`.
pub fn phase_insensitive_distance(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.dim != v.dim {
        return Err(Error::Dimension {
            expected: u.dim,
            actual: v.dim,
        });
    }
    let w = u.adjoint().mul(v)?;
    let phases = eigenphases(&w);
    Ok(2.0 * (minimal_arc(&phases) / 4.0).sin())
}

fn eigenphases(w: &UnitaryMatrix) -> Vec<f64> {
    if w.dim == 1 {
        return vec![w.data[0].arg()];
    }
    if w.dim == 2 {
        // closed form for 2×2
        let tr = w.data[0] + w.data[3];
        let det = w.data[0] * w.data[3] - w.data[1] * w.data[2];
        let disc = (tr * tr - det * 4.0).sqrt();
        return vec![((tr + disc) / 2.0).arg(), ((tr - disc) / 2.0).arg()];
    }
    let schur = nalgebra::linalg::Schur::new(w.to_nalgebra());
    let (_, t) = schur.unpack();
    (0..w.dim).map(|i| t[(i, i)].arg()).collect()
}

/// Length of the shortest arc of the unit circle containing all `phases`.
fn minimal_arc(phases: &[f64]) -> f64 {
    let mut p: Vec<f64> = phases.iter().map(|x| x.rem_euclid(2.0 * PI)).collect();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut largest_gap = p[0] + 2.0 * PI - p[p.len() - 1];
    for w in p.windows(2) {
        largest_gap = largest_gap.max(w[1] - w[0]);
    }
    (2.0 * PI - largest_gap).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hadamard() -> UnitaryMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        UnitaryMatrix::new(2, vec![c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]).unwrap()
    }

    fn cnot() -> UnitaryMatrix {
        let o = c(1., 0.);
        let z = C64::default();
        UnitaryMatrix::new(
            4,
            vec![o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z],
        )
        .unwrap()
    }

    pub(crate) fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
        let amps = (0..1 << n)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        StateVector::normalized(n, amps).unwrap()
    }

    fn random_unitary(dim: usize, rng: &mut impl Rng) -> UnitaryMatrix {
        let m = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let q = m.qr().q();
        let data = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| q[(i, j)])
            .collect();
        UnitaryMatrix::new(dim, data).unwrap()
    }

    #[test]
    fn zero_state_examples() {
        assert_eq!(
            StateVector::zero_state(1).unwrap().amplitudes(),
            &[c(1., 0.), c(0., 0.)]
        );
        let z2 = StateVector::zero_state(2).unwrap();
        assert_eq!(z2.amplitudes(), &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let z3 = StateVector::zero_state(3).unwrap();
        assert_eq!(z3.dim(), 8);
        assert_eq!(z3.amplitudes()[0], c(1., 0.));
        assert!(z3.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn zero_state_rejects_bad_sizes() {
        assert!(matches!(StateVector::zero_state(0), Err(Error::Size { .. })));
        assert!(matches!(StateVector::zero_state(21), Err(Error::Size { .. })));
        assert!(StateVector::zero_state_with_limit(5, 4).is_err());
    }

    #[test]
    fn hadamard_on_zero() {
        let out = StateVector::zero_state(1)
            .unwrap()
            .apply_gate(&hadamard(), &[0])
            .unwrap();
        for a in out.amplitudes() {
            assert!((a.re - 0.5f64.sqrt()).abs() < 1e-12);
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let s = StateVector::basis_state(2, 0b10).unwrap();
        let out = s.apply_gate(&cnot(), &[0, 1]).unwrap();
        assert_eq!(out, StateVector::basis_state(2, 0b11).unwrap());
        // input untouched
        assert_eq!(s, StateVector::basis_state(2, 0b10).unwrap());
    }

    #[test]
    fn identity_is_a_no_op() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_state(3, &mut rng);
        let out = s.apply_gate(&UnitaryMatrix::identity(4), &[2, 0]).unwrap();
        for (a, b) in s.amplitudes().iter().zip(out.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_gate_rejects_bad_input() {
        let s = StateVector::zero_state(2).unwrap();
        assert!(matches!(
            s.apply_gate(&hadamard(), &[0, 1]),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(s.apply_gate(&cnot(), &[1, 1]), Err(Error::Target { .. })));
        assert!(matches!(s.apply_gate(&hadamard(), &[2]), Err(Error::Target { .. })));
    }

    #[test]
    fn target_order_is_respected() {
        // CNOT with control 1, target 0 on |01⟩ gives |11⟩
        let s = StateVector::basis_state(2, 0b01).unwrap();
        let out = s.apply_gate(&cnot(), &[1, 0]).unwrap();
        assert!((out.amplitudes()[0b11].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::zero_state(1).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        let plus = zero.apply_gate(&hadamard(), &[0]).unwrap();
        assert!((zero.fidelity(&zero).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(zero.fidelity(&one).unwrap(), 0.0);
        assert!((zero.fidelity(&plus).unwrap() - 0.5).abs() < 1e-15);
        let two = StateVector::zero_state(2).unwrap();
        assert!(matches!(zero.fidelity(&two), Err(Error::Dimension { .. })));
    }

    #[test]
    fn tensor_examples() {
        let zero = StateVector::zero_state(1).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        assert_eq!(zero.tensor(&zero).unwrap(), StateVector::zero_state(2).unwrap());
        assert_eq!(one.tensor(&zero).unwrap(), StateVector::basis_state(2, 2).unwrap());
        let plus = zero.apply_gate(&hadamard(), &[0]).unwrap();
        let pp = plus.tensor(&plus).unwrap();
        for a in pp.amplitudes() {
            assert!((a.re - 0.5).abs() < 1e-15);
        }
        let big = StateVector::zero_state(11).unwrap();
        assert!(matches!(big.tensor(&big), Err(Error::Size { .. })));
    }

    #[test]
    fn operator_distance_examples() {
        let i2 = UnitaryMatrix::identity(2);
        let z = UnitaryMatrix::diagonal(&[c(1., 0.), c(-1., 0.)]).unwrap();
        assert!(operator_distance(&i2, &i2).unwrap() < 1e-15);
        assert!((operator_distance(&i2, &z).unwrap() - 2.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in [2, 4, 8] {
            let u = random_unitary(dim, &mut rng);
            let v = u.scaled(C64::from_polar(1.0, 0.83));
            assert!(phase_insensitive_distance(&u, &v).unwrap() < 1e-7);
            assert!(operator_distance(&u, &v).unwrap() > 0.5);
        }
        assert!(matches!(
            operator_distance(&i2, &UnitaryMatrix::identity(4)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn phase_insensitive_distance_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for dim in [2, 4] {
            for _ in 0..10 {
                let u = random_unitary(dim, &mut rng);
                let v = random_unitary(dim, &mut rng);
                let brute = (0..20000)
                    .map(|k| {
                        let th = k as f64 * 2.0 * PI / 20000.0;
                        operator_distance(&u, &v.scaled(C64::from_polar(1.0, th))).unwrap()
                    })
                    .fold(f64::INFINITY, f64::min);
                let fast = phase_insensitive_distance(&u, &v).unwrap();
                assert!(fast <= brute + 1e-9, "{fast} > {brute}");
                assert!(brute - fast < 1e-3, "{fast} vs {brute}");
            }
        }
    }

    #[test]
    fn norm_is_preserved_and_composition_distributes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let s = random_state(2, &mut rng);
            let u = random_unitary(4, &mut rng);
            let v = random_unitary(4, &mut rng);
            let step = s.apply_gate(&u, &[0, 1]).unwrap().apply_gate(&v, &[0, 1]).unwrap();
            assert!((step.norm_sqr() - 1.0).abs() <= 1e-10);
            let once = s.apply_gate(&v.mul(&u).unwrap(), &[0, 1]).unwrap();
            for (a, b) in step.amplitudes().iter().zip(once.amplitudes()) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn fidelity_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let a = random_state(3, &mut rng);
            let b = random_state(3, &mut rng);
            assert!((a.fidelity(&b).unwrap() - b.fidelity(&a).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn non_unitary_matrix_is_rejected() {
        let err = UnitaryMatrix::new(2, vec![c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(err, Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn dump_format() {
        let s = StateVector::basis_state(1, 1).unwrap();
        let d = s.dump();
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("1 1.00000000000000000e0 "));
    }
}
