//! Circuits over continuous rotations, CNOT and controlled phases.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::statevec::{c, check_targets, StateVector, UnitaryMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn keyword(self) -> &'static str {
        match self {
            Axis::X => "rx",
            Axis::Y => "ry",
            Axis::Z => "rz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuousOp {
    Rotation { axis: Axis, angle: f64, target: usize },
    Cnot { control: usize, target: usize },
    /// `diag(1, 1, 1, e^{−iφ})`, i.e. `exp(−i φ/4 (1−σz)⊗(1−σz))`.
    CPhase { angle: f64, a: usize, b: usize },
}

/// `exp(−i θ σ/2)` for the given Pauli axis.
pub fn rotation_matrix(axis: Axis, angle: f64) -> UnitaryMatrix {
    let (s, co) = (angle / 2.0).sin_cos();
    let data = match axis {
        Axis::X => vec![c(co, 0.), c(0., -s), c(0., -s), c(co, 0.)],
        Axis::Y => vec![c(co, 0.), c(-s, 0.), c(s, 0.), c(co, 0.)],
        Axis::Z => vec![
            C64::from_polar(1.0, -angle / 2.0),
            c(0., 0.),
            c(0., 0.),
            C64::from_polar(1.0, angle / 2.0),
        ],
    };
    UnitaryMatrix::from_raw_unchecked(2, data)
}

pub fn cphase_matrix(angle: f64) -> UnitaryMatrix {
    let one = c(1., 0.);
    UnitaryMatrix::diagonal(&[one, one, one, C64::from_polar(1.0, -angle)])
        .expect("unit-modulus diagonal")
}

fn cnot_matrix() -> UnitaryMatrix {
    let (o, z) = (c(1., 0.), c(0., 0.));
    UnitaryMatrix::from_raw_unchecked(4, vec![o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousCircuit {
    num_qubits: usize,
    ops: Vec<ContinuousOp>,
}

impl ContinuousCircuit {
    pub fn new(num_qubits: usize) -> Self {
        ContinuousCircuit {
            num_qubits,
            ops: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[ContinuousOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Number of ops other than CNOT.
    pub fn continuous_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| !matches!(op, ContinuousOp::Cnot { .. }))
            .count()
    }

    pub fn push(&mut self, op: ContinuousOp) -> Result<()> {
        match op {
            ContinuousOp::Rotation { angle, target, .. } => {
                check_angle(angle)?;
                check_targets(&[target], self.num_qubits)?;
            }
            ContinuousOp::Cnot { control, target } => {
                check_targets(&[control, target], self.num_qubits)?
            }
            ContinuousOp::CPhase { angle, a, b } => {
                check_angle(angle)?;
                check_targets(&[a, b], self.num_qubits)?;
            }
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn ry(&mut self, angle: f64, target: usize) -> Result<()> {
        self.push(ContinuousOp::Rotation {
            axis: Axis::Y,
            angle,
            target,
        })
    }

    pub fn rz(&mut self, angle: f64, target: usize) -> Result<()> {
        self.push(ContinuousOp::Rotation {
            axis: Axis::Z,
            angle,
            target,
        })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(ContinuousOp::Cnot { control, target })
    }

    pub fn cphase(&mut self, angle: f64, a: usize, b: usize) -> Result<()> {
        self.push(ContinuousOp::CPhase { angle, a, b })
    }

    /// Appends `other` with qubit `q` placed at `offset + q`.
    pub fn append_shifted(&mut self, other: &ContinuousCircuit, offset: usize) -> Result<()> {
        for &op in &other.ops {
            self.push(match op {
                ContinuousOp::Rotation { axis, angle, target } => ContinuousOp::Rotation {
                    axis,
                    angle,
                    target: target + offset,
                },
                ContinuousOp::Cnot { control, target } => ContinuousOp::Cnot {
                    control: control + offset,
                    target: target + offset,
                },
                ContinuousOp::CPhase { angle, a, b } => ContinuousOp::CPhase {
                    angle,
                    a: a + offset,
                    b: b + offset,
                },
            })?;
        }
        Ok(())
    }

    /// Rewrites each controlled phase as z-rotations around a CNOT pair,
    /// exact up to global phase.
    pub fn lower_cphase(&self) -> ContinuousCircuit {
        let mut out = ContinuousCircuit::new(self.num_qubits);
        for &op in &self.ops {
            match op {
                ContinuousOp::CPhase { angle, a, b } => {
                    out.ops.extend([
                        rot(Axis::Z, -angle / 2.0, a),
                        rot(Axis::Z, -angle / 2.0, b),
                        ContinuousOp::Cnot { control: a, target: b },
                        rot(Axis::Z, angle / 2.0, b),
                        ContinuousOp::Cnot { control: a, target: b },
                    ]);
                }
                other => out.ops.push(other),
            }
        }
        out
    }

    pub fn apply_to(&self, mut state: StateVector) -> Result<StateVector> {
        let cnot = cnot_matrix();
        for &op in &self.ops {
            match op {
                ContinuousOp::Rotation { axis, angle, target } => {
                    state.apply_gate_in_place(&rotation_matrix(axis, angle), &[target])?
                }
                ContinuousOp::Cnot { control, target } => {
                    state.apply_gate_in_place(&cnot, &[control, target])?
                }
                ContinuousOp::CPhase { angle, a, b } => {
                    state.apply_gate_in_place(&cphase_matrix(angle), &[a, b])?
                }
            }
        }
        Ok(state)
    }

    pub fn run(&self) -> Result<StateVector> {
        self.apply_to(StateVector::zero_state(self.num_qubits)?)
    }

    /// Text form: `qubits N`, `basis continuous`, then one op per line with
    /// angles to 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\nbasis {}\n", self.num_qubits, CONTINUOUS_BASIS_ID);
        for op in &self.ops {
            let _ = match *op {
                ContinuousOp::Rotation { axis, angle, target } => {
                    writeln!(s, "{} {angle:.16e} {target}", axis.keyword())
                }
                ContinuousOp::Cnot { control, target } => writeln!(s, "CNOT {control} {target}"),
                ContinuousOp::CPhase { angle, a, b } => writeln!(s, "cphase {angle:.16e} {a} {b}"),
            };
        }
        s
    }

    pub fn parse(text: &str) -> Result<ContinuousCircuit> {
        let mut circuit: Option<ContinuousCircuit> = None;
        let mut num_qubits = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |k: usize| -> Result<f64> {
                words
                    .get(k)
                    .and_then(|w| w.parse::<f64>().ok())
                    .ok_or_else(|| perr(format!("expected a number in field {}", k + 1)))
            };
            let idx = |k: usize| -> Result<usize> {
                words
                    .get(k)
                    .and_then(|w| w.parse::<usize>().ok())
                    .ok_or_else(|| perr(format!("expected a qubit index in field {}", k + 1)))
            };
            match (words[0], num_qubits, circuit.as_mut()) {
                ("qubits", None, None) => {
                    let n = idx(1)?;
                    if n == 0 {
                        return Err(perr("qubit count must be positive".into()));
                    }
                    num_qubits = Some(n);
                }
                ("basis", Some(n), None) => {
                    if words.get(1) != Some(&CONTINUOUS_BASIS_ID) {
                        return Err(perr(format!("expected `basis {CONTINUOUS_BASIS_ID}`")));
                    }
                    circuit = Some(ContinuousCircuit::new(n));
                }
                (kw, Some(_), Some(circ)) => {
                    let op = match kw {
                        "rx" | "ry" | "rz" => ContinuousOp::Rotation {
                            axis: match kw {
                                "rx" => Axis::X,
                                "ry" => Axis::Y,
                                _ => Axis::Z,
                            },
                            angle: num(1)?,
                            target: idx(2)?,
                        },
                        "CNOT" => ContinuousOp::Cnot {
                            control: idx(1)?,
                            target: idx(2)?,
                        },
                        "cphase" => ContinuousOp::CPhase {
                            angle: num(1)?,
                            a: idx(2)?,
                            b: idx(3)?,
                        },
                        _ => return Err(perr(format!("unknown op `{kw}`"))),
                    };
                    circ.push(op).map_err(|e| perr(e.to_string()))?;
                }
                (kw, _, _) => return Err(perr(format!("unexpected `{kw}`"))),
            }
        }
        circuit.ok_or(Error::Parse {
            line: text.lines().count(),
            message: "missing `qubits`/`basis` header".into(),
        })
    }
}

pub const CONTINUOUS_BASIS_ID: &str = "continuous";

fn rot(axis: Axis, angle: f64, target: usize) -> ContinuousOp {
    ContinuousOp::Rotation {
        axis,
        angle,
        target,
    }
}

fn check_angle(angle: f64) -> Result<()> {
    if angle.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite angle {angle}")))
    }
}

impl fmt::Display for ContinuousCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
