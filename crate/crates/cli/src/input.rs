//! What to prepare: a state file, a graph file, a bit string or a named family.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use qcplx::encode::parse_bits;
use qcplx::statevec::{StateVector, C64};
use qcplx::synth::{graph_state_circuit, weighted_graph_state_circuit, Graph};
use qcplx::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::read;

pub enum Input {
    State(StateVector),
    Graph(Graph),
    Bits(Vec<bool>),
}

impl Input {
    /// Target state of the input.
    pub fn state(&self) -> Result<StateVector> {
        match self {
            Input::State(s) => Ok(s.clone()),
            Input::Graph(g) if g.is_weighted() => weighted_graph_state_circuit(g)?.run(),
            Input::Graph(g) => graph_state_circuit(g, false)?.run(),
            Input::Bits(x) => {
                let index = x.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                StateVector::basis_state(x.len(), index)
            }
        }
    }
}

/// `qubits N`, then `index re im` lines; missing amplitudes are zero.
pub fn parse_state(text: &str) -> Result<StateVector> {
    let mut n: Option<usize> = None;
    let mut amps: Vec<C64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |m: &str| Error::Parse {
            line: i + 1,
            message: m.to_string(),
        };
        let w: Vec<&str> = line.split_whitespace().collect();
        match (w.as_slice(), n) {
            (["qubits", k], None) => {
                let k: usize = k.parse().map_err(|_| perr("bad qubit count"))?;
                StateVector::zero_state(k)?;
                n = Some(k);
                amps = vec![C64::new(0.0, 0.0); 1 << k];
            }
            ([idx, re, im], Some(_)) => {
                let idx: usize = idx.parse().map_err(|_| perr("bad index"))?;
                let re: f64 = re.parse().map_err(|_| perr("bad real part"))?;
                let im: f64 = im.parse().map_err(|_| perr("bad imaginary part"))?;
                let slot = amps.get_mut(idx).ok_or_else(|| perr("index out of range"))?;
                *slot = C64::new(re, im);
            }
            (_, None) => return Err(perr("expected `qubits N` first")),
            _ => return Err(perr("expected `index re im`")),
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 1,
        message: "missing `qubits N`".into(),
    })?;
    StateVector::new(n, amps)
}

/// `zero:N`, `plus:N`, `ghz:N`, `w:N`, `bell`, or `random:N` drawn from `seed`.
pub fn family(spec: &str, seed: u64) -> Result<StateVector> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let n = || -> Result<usize> {
        arg.parse()
            .map_err(|_| Error::Domain(format!("family `{name}` needs a qubit count, e.g. `{name}:3`")))
    };
    let from = |n: usize, f: &dyn Fn(usize) -> f64| {
        StateVector::normalized(n, (0..1usize << n).map(|i| C64::new(f(i), 0.0)).collect())
    };
    match name {
        "zero" => StateVector::zero_state(n()?),
        "plus" => from(n()?, &|_| 1.0),
        "ghz" => {
            let k = n()?;
            from(k, &|i| if i == 0 || i == (1 << k) - 1 { 1.0 } else { 0.0 })
        }
        "w" => from(n()?, &|i| if i.count_ones() == 1 { 1.0 } else { 0.0 }),
        "bell" => from(2, &|i| if i == 0 || i == 3 { FRAC_1_SQRT_2 } else { 0.0 }),
        "random" => StateVector::random(n()?, &mut ChaCha8Rng::seed_from_u64(seed)),
        _ => Err(Error::Domain(format!("unknown family `{name}`"))),
    }
}

pub fn load(
    state: Option<&Path>,
    graph: Option<&Path>,
    bits: Option<&str>,
    fam: Option<&str>,
    seed: u64,
) -> Result<(Input, String)> {
    let stem = |p: &Path| {
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".into())
    };
    match (state, graph, bits, fam) {
        (Some(p), None, None, None) => Ok((Input::State(parse_state(&read(p)?)?), stem(p))),
        (None, Some(p), None, None) => Ok((Input::Graph(Graph::parse(&read(p)?)?), stem(p))),
        (None, None, Some(b), None) => Ok((Input::Bits(parse_bits(b)?), format!("bits{}", b.len()))),
        (None, None, None, Some(f)) => Ok((Input::State(family(f, seed)?), f.replace(':', "_"))),
        _ => Err(Error::Domain(
            "give exactly one of --state, --graph, --bits, --family".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_file() {
        let s = parse_state("qubits 2\n0 0.7071067811865476 0\n3 0.7071067811865476 0\n").unwrap();
        assert_eq!(s.num_qubits(), 2);
        assert!(matches!(
            parse_state("qubits 1\n0 1 0\n5 0 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_state("qubits 1\n0 0.5 0\n"), Err(Error::NotNormalized { .. })));
        assert!(parse_state("0 1 0\n").is_err());
    }

    #[test]
    fn families() {
        assert!((family("ghz:3", 0).unwrap().amplitudes()[7].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((family("w:3", 0).unwrap().amplitudes()[4].re - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(family("random:2", 4).unwrap(), family("random:2", 4).unwrap());
        assert!(family("ghz", 0).is_err());
        assert!(family("nope:2", 0).is_err());
    }

    #[test]
    fn bits_are_basis_states() {
        let s = Input::Bits(parse_bits("101").unwrap()).state().unwrap();
        assert_eq!(s.amplitudes()[5].re, 1.0);
    }
}
