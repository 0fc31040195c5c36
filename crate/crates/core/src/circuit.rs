//! Circuits over named finite gate bases, their text format, and basis
//! coarsening through composite-gate dictionaries.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::{self, Write as _};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::statevec::{c, check_targets, StateVector, UnitaryMatrix, C64};

/// Tolerance for composite gates, which chain several products.
pub const COMPOSITE_TOLERANCE: f64 = 1e-8;

pub const STANDARD_BASIS_ID: &str = "standard";
pub const GRAPH_BASIS_ID: &str = "standard+CZ";
pub const CLASSICAL_BASIS_ID: &str = "classical";

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    name: String,
    matrix: UnitaryMatrix,
}

impl Gate {
    pub fn new(name: impl Into<String>, matrix: UnitaryMatrix) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|ch| ch.is_whitespace() || ch == '#') {
            return Err(Error::InvalidBasis(format!("bad gate name `{name}`")));
        }
        match matrix.arity() {
            Some(1..=3) => {}
            _ => {
                return Err(Error::InvalidBasis(format!(
                    "gate `{name}` has unsupported dimension {}",
                    matrix.dim()
                )))
            }
        }
        let deviation = matrix.unitarity_deviation();
        if deviation > COMPOSITE_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Gate { name, matrix })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.matrix.arity().expect("checked at construction")
    }

    pub fn matrix(&self) -> &UnitaryMatrix {
        &self.matrix
    }
}

#[derive(Debug, Clone)]
pub struct GateBasis {
    id: String,
    gates: Vec<Gate>,
    index: HashMap<String, usize>,
}

impl PartialEq for GateBasis {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.gates == other.gates
    }
}

impl GateBasis {
    pub fn new(id: impl Into<String>, gates: Vec<Gate>) -> Result<Self> {
        let id = id.into();
        if gates.is_empty() {
            return Err(Error::InvalidBasis(format!("basis `{id}` is empty")));
        }
        let mut index = HashMap::new();
        for (i, g) in gates.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidBasis(format!(
                    "duplicate gate `{}` in basis `{id}`",
                    g.name
                )));
            }
        }
        Ok(GateBasis { id, gates, index })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, index: usize) -> &Gate {
        &self.gates[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Option<&Gate> {
        self.index_of(name).map(|i| &self.gates[i])
    }
}

fn hadamard_matrix() -> UnitaryMatrix {
    let s = FRAC_1_SQRT_2;
    UnitaryMatrix::new(2, vec![c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]).unwrap()
}

fn permutation_matrix(dim: usize, image: impl Fn(usize) -> usize) -> UnitaryMatrix {
    let mut data = vec![C64::default(); dim * dim];
    for col in 0..dim {
        data[image(col) * dim + col] = c(1., 0.);
    }
    UnitaryMatrix::new(dim, data).unwrap()
}

fn cnot_matrix() -> UnitaryMatrix {
    // |c t⟩ → |c, t ⊕ c⟩, control is the leading qubit
    permutation_matrix(4, |i| if i & 0b10 != 0 { i ^ 1 } else { i })
}

/// `{H, S, T, CNOT}` with `T = diag(e^{−iπ/8}, e^{iπ/8})`.
pub fn standard_basis() -> Arc<GateBasis> {
    static BASIS: OnceLock<Arc<GateBasis>> = OnceLock::new();
    BASIS
        .get_or_init(|| {
            let s = UnitaryMatrix::diagonal(&[c(1., 0.), c(0., 1.)]).unwrap();
            let t = UnitaryMatrix::diagonal(&[
                C64::from_polar(1.0, -PI / 8.0),
                C64::from_polar(1.0, PI / 8.0),
            ])
            .unwrap();
            let gates = vec![
                Gate::new("H", hadamard_matrix()).unwrap(),
                Gate::new("S", s).unwrap(),
                Gate::new("T", t).unwrap(),
                Gate::new("CNOT", cnot_matrix()).unwrap(),
            ];
            Arc::new(GateBasis::new(STANDARD_BASIS_ID, gates).unwrap())
        })
        .clone()
}

/// Identity marker `I` and `N` (NOT), enough to write any classical string.
pub fn classical_basis() -> Arc<GateBasis> {
    static BASIS: OnceLock<Arc<GateBasis>> = OnceLock::new();
    BASIS
        .get_or_init(|| {
            let gates = vec![
                Gate::new("I", UnitaryMatrix::identity(2)).unwrap(),
                Gate::new("N", permutation_matrix(2, |i| i ^ 1)).unwrap(),
            ];
            Arc::new(GateBasis::new(CLASSICAL_BASIS_ID, gates).unwrap())
        })
        .clone()
}

/// `CZ := (I⊗H)·CNOT·(I⊗H)` over the standard basis.
pub fn cz_definition() -> CompositeDef {
    let mut fragment = Circuit::new(2, standard_basis());
    fragment.push("H", &[1]).unwrap();
    fragment.push("CNOT", &[0, 1]).unwrap();
    fragment.push("H", &[1]).unwrap();
    let expected =
        UnitaryMatrix::diagonal(&[c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.)]).unwrap();
    CompositeDef::new("CZ", fragment).with_expected(expected)
}

/// Textbook Toffoli network with each `T†` written as `T⁷`.
pub fn toffoli_definition() -> CompositeDef {
    const TDG: &str = "TDG";
    let (a, b, t) = (0, 1, 2);
    let seq: [(&str, &[usize]); 15] = [
        ("H", &[t]),
        ("CNOT", &[b, t]),
        (TDG, &[t]),
        ("CNOT", &[a, t]),
        ("T", &[t]),
        ("CNOT", &[b, t]),
        (TDG, &[t]),
        ("CNOT", &[a, t]),
        ("T", &[b]),
        ("T", &[t]),
        ("H", &[t]),
        ("CNOT", &[a, b]),
        ("T", &[a]),
        (TDG, &[b]),
        ("CNOT", &[a, b]),
    ];
    let mut fragment = Circuit::new(3, standard_basis());
    for (g, q) in seq {
        if g == TDG {
            for _ in 0..7 {
                fragment.push("T", q).unwrap();
            }
        } else {
            fragment.push(g, q).unwrap();
        }
    }
    let expected = permutation_matrix(8, |i| if i & 0b110 == 0b110 { i ^ 1 } else { i });
    CompositeDef::new("TOFFOLI", fragment).with_expected(expected)
}

/// Standard basis coarsened with `CZ`, the natural basis for graph states.
pub fn graph_basis() -> (Arc<GateBasis>, Arc<CoarseningDictionary>) {
    static CELL: OnceLock<(Arc<GateBasis>, Arc<CoarseningDictionary>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let (b, d) = coarsen(&standard_basis(), vec![cz_definition()]).unwrap();
        (b, Arc::new(d))
    })
    .clone()
}

/// Resolves the built-in basis ids.
pub fn basis_by_id(id: &str) -> Result<Arc<GateBasis>> {
    match id {
        STANDARD_BASIS_ID => Ok(standard_basis()),
        GRAPH_BASIS_ID => Ok(graph_basis().0),
        CLASSICAL_BASIS_ID => Ok(classical_basis()),
        _ => Err(Error::UnknownBasis(id.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Op {
    pub gate: usize,
    pub targets: Vec<usize>,
}

/// Ordered gate applications on `num_qubits` qubits, validated against the
/// attached basis when ops are added.
#[derive(Debug, Clone)]
pub struct Circuit {
    num_qubits: usize,
    basis: Arc<GateBasis>,
    ops: Vec<Op>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits
            && self.basis.id == other.basis.id
            && self.ops == other.ops
    }
}

impl Circuit {
    pub fn new(num_qubits: usize, basis: Arc<GateBasis>) -> Self {
        Circuit {
            num_qubits,
            basis,
            ops: Vec::new(),
        }
    }

    pub fn from_ops<'a>(
        num_qubits: usize,
        basis: Arc<GateBasis>,
        ops: impl IntoIterator<Item = (&'a str, &'a [usize])>,
    ) -> Result<Self> {
        let mut circuit = Circuit::new(num_qubits, basis);
        for (g, t) in ops {
            circuit.push(g, t)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: &str, targets: &[usize]) -> Result<()> {
        let idx = self
            .basis
            .index_of(gate)
            .ok_or_else(|| Error::UnknownGate(gate.to_string()))?;
        self.push_index(idx, targets)
    }

    pub fn push_index(&mut self, gate: usize, targets: &[usize]) -> Result<()> {
        let g = self
            .basis
            .gates
            .get(gate)
            .ok_or_else(|| Error::UnknownGate(format!("#{gate}")))?;
        if g.arity() != targets.len() {
            return Err(Error::Target {
                targets: targets.to_vec(),
                num_qubits: self.num_qubits,
            });
        }
        check_targets(targets, self.num_qubits)?;
        self.ops.push(Op {
            gate,
            targets: targets.to_vec(),
        });
        Ok(())
    }

    /// Appends `other` (same basis) with its qubit `q` mapped to `offset + q`.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        if other.basis.id != self.basis.id {
            return Err(Error::BasisMismatch {
                expected: self.basis.id.clone(),
                found: other.basis.id.clone(),
            });
        }
        if offset + other.num_qubits > self.num_qubits {
            return Err(Error::Target {
                targets: vec![offset + other.num_qubits - 1],
                num_qubits: self.num_qubits,
            });
        }
        self.ops.extend(other.ops.iter().map(|op| Op {
            gate: op.gate,
            targets: op.targets.iter().map(|t| t + offset).collect(),
        }));
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn basis(&self) -> &Arc<GateBasis> {
        &self.basis
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn gate_name(&self, op: &Op) -> &str {
        &self.basis.gates[op.gate].name
    }

    /// Applies the ops in order to `|0…0⟩`.
    pub fn run(&self) -> Result<StateVector> {
        self.apply_to(StateVector::zero_state(self.num_qubits)?)
    }

    pub fn apply_to(&self, mut state: StateVector) -> Result<StateVector> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::Dimension {
                expected: 1 << self.num_qubits,
                actual: state.dim(),
            });
        }
        for op in &self.ops {
            state.apply_gate_in_place(&self.basis.gates[op.gate].matrix, &op.targets)?;
        }
        Ok(state)
    }

    /// The full unitary, built column by column (small registers only).
    pub fn unitary(&self) -> Result<UnitaryMatrix> {
        let n = self.num_qubits;
        let dim = 1usize << n;
        let mut data = vec![C64::default(); dim * dim];
        for col in 0..dim {
            let out = self.apply_to(StateVector::basis_state(n, col)?)?;
            for (row, a) in out.amplitudes().iter().enumerate() {
                data[row * dim + col] = *a;
            }
        }
        UnitaryMatrix::from_raw(dim, data)
    }

    /// True iff `|⟨target|C|0⟩|² ≥ 1 − ε`.
    pub fn prepares_with_precision(&self, target: &StateVector, epsilon: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Precision(epsilon));
        }
        Ok(self.run()?.fidelity(target)? >= 1.0 - epsilon)
    }

    /// Canonical text form: `qubits N`, `basis <id>`, then `<gate> <t1> [t2]`.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\nbasis {}\n", self.num_qubits, self.basis.id);
        self.write_ops(&mut s);
        s
    }

    fn write_ops(&self, s: &mut String) {
        for op in &self.ops {
            s.push_str(self.gate_name(op));
            for t in &op.targets {
                let _ = write!(s, " {t}");
            }
            s.push('\n');
        }
    }

    /// Parses the text form, resolving the basis through [`basis_by_id`].
    pub fn parse(text: &str) -> Result<Circuit> {
        Self::parse_with(text, basis_by_id)
    }

    pub fn parse_with(
        text: &str,
        resolve: impl Fn(&str) -> Result<Arc<GateBasis>>,
    ) -> Result<Circuit> {
        let mut num_qubits = None;
        let mut circuit: Option<Circuit> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let line_no = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            match (head, num_qubits, &mut circuit) {
                ("qubits", None, None) => {
                    let n: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| perr("expected a positive qubit count".into()))?;
                    num_qubits = Some(n);
                }
                ("basis", Some(n), None) => {
                    let id = words
                        .next()
                        .ok_or_else(|| perr("expected a basis id".into()))?;
                    let basis = resolve(id).map_err(|e| perr(e.to_string()))?;
                    circuit = Some(Circuit::new(n, basis));
                }
                (_, Some(_), Some(circ)) => {
                    let targets = words
                        .map(|w| w.parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| perr(format!("bad qubit index: {e}")))?;
                    circ.push(head, &targets).map_err(|e| perr(e.to_string()))?;
                }
                _ => return Err(perr(format!("unexpected `{head}`"))),
            }
        }
        circuit.ok_or(Error::Parse {
            line: text.lines().count(),
            message: "missing `qubits`/`basis` header".into(),
        })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Applies `circuit`, which must be over `basis`, to `|0…0⟩`.
pub fn run(circuit: &Circuit, basis: &GateBasis) -> Result<StateVector> {
    if circuit.basis.id != basis.id {
        return Err(Error::BasisMismatch {
            expected: basis.id.clone(),
            found: circuit.basis.id.clone(),
        });
    }
    circuit.run()
}

/// A composite gate written as a fragment over a finer basis.
#[derive(Debug, Clone)]
pub struct CompositeDef {
    pub name: String,
    pub fragment: Circuit,
    pub expected: Option<UnitaryMatrix>,
}

impl CompositeDef {
    pub fn new(name: impl Into<String>, fragment: Circuit) -> Self {
        CompositeDef {
            name: name.into(),
            fragment,
            expected: None,
        }
    }

    pub fn with_expected(mut self, matrix: UnitaryMatrix) -> Self {
        self.expected = Some(matrix);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseningDictionary {
    fine: Arc<GateBasis>,
    coarse_id: String,
    entries: BTreeMap<String, Circuit>,
    encoded_size_bits: usize,
}

impl CoarseningDictionary {
    pub fn fine_basis(&self) -> &Arc<GateBasis> {
        &self.fine
    }

    pub fn coarse_id(&self) -> &str {
        &self.coarse_id
    }

    pub fn entries(&self) -> &BTreeMap<String, Circuit> {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Circuit> {
        self.entries.get(name)
    }

    /// Size of [`CoarseningDictionary::to_text`] in bits.
    pub fn encoded_size_bits(&self) -> usize {
        self.encoded_size_bits
    }

    pub fn max_fragment_len(&self) -> usize {
        self.entries.values().map(Circuit::len).max().unwrap_or(1)
    }

    /// Each entry as `def <name> <arity>`, its ops in circuit text form, `end`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, frag) in &self.entries {
            let _ = writeln!(s, "def {name} {}", frag.num_qubits);
            frag.write_ops(&mut s);
            s.push_str("end\n");
        }
        s
    }
}

/// Adds composite gates built from `fine` and returns the enlarged basis with
/// the dictionary that expands them back.
pub fn coarsen(
    fine: &Arc<GateBasis>,
    defs: Vec<CompositeDef>,
) -> Result<(Arc<GateBasis>, CoarseningDictionary)> {
    if defs.is_empty() {
        let dict = CoarseningDictionary {
            fine: fine.clone(),
            coarse_id: fine.id.clone(),
            entries: BTreeMap::new(),
            encoded_size_bits: 0,
        };
        return Ok((fine.clone(), dict));
    }
    let mut gates = fine.gates.clone();
    let mut coarse_id = fine.id.clone();
    let mut entries = BTreeMap::new();
    for def in defs {
        if def.fragment.basis.id != fine.id {
            return Err(Error::BasisMismatch {
                expected: fine.id.clone(),
                found: def.fragment.basis.id.clone(),
            });
        }
        let matrix = def.fragment.unitary()?;
        let deviation = matrix.unitarity_deviation();
        if deviation > COMPOSITE_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        if let Some(expected) = &def.expected {
            let distance = matrix.phase_insensitive_distance(expected)?;
            if distance > COMPOSITE_TOLERANCE {
                return Err(Error::CompositeMismatch {
                    name: def.name,
                    distance,
                });
            }
        }
        coarse_id.push('+');
        coarse_id.push_str(&def.name);
        gates.push(Gate::new(def.name.clone(), matrix)?);
        entries.insert(def.name, def.fragment);
    }
    let basis = Arc::new(GateBasis::new(coarse_id.clone(), gates)?);
    let mut dict = CoarseningDictionary {
        fine: fine.clone(),
        coarse_id,
        entries,
        encoded_size_bits: 0,
    };
    dict.encoded_size_bits = dict.to_text().len() * 8;
    Ok((basis, dict))
}

/// Rewrites every composite gate of `circuit` through `dict`; fine gates pass through.
pub fn expand(circuit: &Circuit, dict: &CoarseningDictionary) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.num_qubits, dict.fine.clone());
    for op in &circuit.ops {
        let name = circuit.gate_name(op);
        if let Some(frag) = dict.entries.get(name) {
            for fop in &frag.ops {
                let targets: Vec<usize> = fop.targets.iter().map(|&t| op.targets[t]).collect();
                out.push_index(fop.gate, &targets)?;
            }
        } else if let Some(idx) = dict.fine.index_of(name) {
            out.push_index(idx, &op.targets)?;
        } else {
            return Err(Error::MissingEntry(name.to_string()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> StateVector {
        let s = FRAC_1_SQRT_2;
        StateVector::new(2, vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap()
    }

    #[test]
    fn standard_basis_matrices() {
        let b = standard_basis();
        let s = FRAC_1_SQRT_2;
        let h = b.get("H").unwrap().matrix();
        assert_eq!(h.data(), &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]);
        let sg = b.get("S").unwrap().matrix();
        assert_eq!(sg.data(), &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]);
        assert_eq!(b.get("CNOT").unwrap().arity(), 2);
        assert_eq!(b.len(), 4);
    }

    #[test]
    fn hth_is_a_quarter_turn_about_x() {
        let b = standard_basis();
        let h = b.get("H").unwrap().matrix();
        let t = b.get("T").unwrap().matrix();
        let hth = h.mul(t).unwrap().mul(h).unwrap();
        let (co, si) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        let rx = UnitaryMatrix::new(2, vec![c(co, 0.), c(0., -si), c(0., -si), c(co, 0.)]).unwrap();
        assert!(hth.phase_insensitive_distance(&rx).unwrap() <= 1e-10);
    }

    #[test]
    fn run_examples() {
        let b = standard_basis();
        let empty = Circuit::new(2, b.clone());
        assert_eq!(run(&empty, &b).unwrap(), StateVector::zero_state(2).unwrap());

        let bell_c = Circuit::from_ops(2, b.clone(), [("H", &[0][..]), ("CNOT", &[0, 1][..])]).unwrap();
        assert!((bell_c.run().unwrap().fidelity(&bell()).unwrap() - 1.0).abs() < 1e-12);

        let t = Circuit::from_ops(1, b.clone(), [("T", &[0][..])]).unwrap();
        let z = StateVector::zero_state(1).unwrap();
        assert!((t.run().unwrap().fidelity(&z).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            run(&t, &classical_basis()),
            Err(Error::BasisMismatch { .. })
        ));
    }

    #[test]
    fn construction_validates_ops() {
        let mut circ = Circuit::new(2, standard_basis());
        assert!(matches!(circ.push("X", &[0]), Err(Error::UnknownGate(_))));
        assert!(matches!(circ.push("H", &[2]), Err(Error::Target { .. })));
        assert!(matches!(circ.push("CNOT", &[0]), Err(Error::Target { .. })));
        assert!(matches!(circ.push("CNOT", &[1, 1]), Err(Error::Target { .. })));
        assert!(circ.is_empty());
    }

    #[test]
    fn precision_examples() {
        let b = standard_basis();
        let bell_c = Circuit::from_ops(2, b.clone(), [("H", &[0][..]), ("CNOT", &[0, 1][..])]).unwrap();
        assert!(bell_c.prepares_with_precision(&bell(), 0.0).unwrap());
        let h = Circuit::from_ops(1, b, [("H", &[0][..])]).unwrap();
        let z = StateVector::zero_state(1).unwrap();
        assert!(!h.prepares_with_precision(&z, 0.4).unwrap());
        assert!(h.prepares_with_precision(&z, 0.6).unwrap());
        assert!(matches!(
            h.prepares_with_precision(&z, 1.5),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn cz_coarsening() {
        let (coarse, dict) = coarsen(&standard_basis(), vec![cz_definition()]).unwrap();
        assert_eq!(coarse.id(), GRAPH_BASIS_ID);
        assert_eq!(dict.get("CZ").unwrap().len(), 3);
        let cz = coarse.get("CZ").unwrap().matrix();
        let want = UnitaryMatrix::diagonal(&[c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.)]).unwrap();
        assert!(cz.distance(&want).unwrap() < 1e-12);
        assert!(dict.encoded_size_bits() > 0);
        assert_eq!(dict.encoded_size_bits(), dict.to_text().len() * 8);
    }

    #[test]
    fn toffoli_coarsening() {
        let def = toffoli_definition();
        assert_eq!(def.fragment.len(), 15 + 3 * 6);
        let (coarse, dict) = coarsen(&standard_basis(), vec![def]).unwrap();
        assert_eq!(coarse.get("TOFFOLI").unwrap().arity(), 3);
        assert!(dict.get("TOFFOLI").is_some());
    }

    #[test]
    fn mismatched_composite_is_rejected() {
        let mut frag = Circuit::new(2, standard_basis());
        frag.push("CNOT", &[0, 1]).unwrap();
        let wrong = CompositeDef::new("CZ", frag).with_expected(
            UnitaryMatrix::diagonal(&[c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.)]).unwrap(),
        );
        assert!(matches!(
            coarsen(&standard_basis(), vec![wrong]),
            Err(Error::CompositeMismatch { .. })
        ));
    }

    #[test]
    fn empty_coarsening_is_identity() {
        let fine = standard_basis();
        let (coarse, dict) = coarsen(&fine, vec![]).unwrap();
        assert_eq!(*coarse, *fine);
        assert!(dict.entries().is_empty());
        assert_eq!(dict.encoded_size_bits(), 0);
    }

    #[test]
    fn expand_examples() {
        let (coarse, dict) = graph_basis();
        let single = Circuit::from_ops(2, coarse.clone(), [("CZ", &[0, 1][..])]).unwrap();
        let expanded = expand(&single, &dict).unwrap();
        let want = Circuit::from_ops(
            2,
            standard_basis(),
            [("H", &[1][..]), ("CNOT", &[0, 1][..]), ("H", &[1][..])],
        )
        .unwrap();
        assert_eq!(expanded, want);

        let empty = Circuit::new(3, coarse.clone());
        assert!(expand(&empty, &dict).unwrap().is_empty());

        let mut tri = Circuit::new(3, coarse);
        for q in 0..3 {
            tri.push("H", &[q]).unwrap();
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            tri.push("CZ", &[a, b]).unwrap();
        }
        assert_eq!(expand(&tri, &dict).unwrap().len(), 3 + 3 * 3);
    }

    #[test]
    fn expand_reports_missing_entries() {
        let (coarse, _) = graph_basis();
        let (_, empty_dict) = coarsen(&standard_basis(), vec![]).unwrap();
        let single = Circuit::from_ops(2, coarse, [("CZ", &[0, 1][..])]).unwrap();
        assert!(matches!(
            expand(&single, &empty_dict),
            Err(Error::MissingEntry(name)) if name == "CZ"
        ));
    }

    #[test]
    fn text_format_round_trip() {
        let b = standard_basis();
        let circ = Circuit::from_ops(2, b, [("H", &[0][..]), ("CNOT", &[0, 1][..])]).unwrap();
        let text = circ.to_text();
        assert_eq!(text, "qubits 2\nbasis standard\nH 0\nCNOT 0 1\n");
        let with_comments = format!("# bell pair\n{text}\n# done\n");
        assert_eq!(Circuit::parse(&with_comments).unwrap(), circ);
    }

    #[test]
    fn text_format_errors_carry_line_numbers() {
        let err = Circuit::parse("qubits 2\nbasis standard\nH 0\nFOO 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = Circuit::parse("qubits 2\nbasis nope\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Circuit::parse("H 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
