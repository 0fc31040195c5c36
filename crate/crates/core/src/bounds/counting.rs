//! Counting arguments: how few strings and states admit short descriptions.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::statevec::StateVector;

/// `(2^c − 1)/2^n`: the largest fraction of `n`-bit strings that can have a
/// description shorter than `c` bits.
pub fn incompressible_fraction(n: usize, c: f64) -> Result<f64> {
    if n == 0 || !(c > 0.0) {
        return Err(Error::Domain(format!("need n ≥ 1 and c > 0, got n={n}, c={c}")));
    }
    Ok((c.exp2() - 1.0) / (n as f64).exp2())
}

/// One toy-machine instruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instruction {
    Literal(Vec<bool>),
    Repeat { times: usize, payload: Vec<bool> },
}

/// A two-instruction machine over `{0,1}`. An instruction is an opcode bit
/// (0 literal, 1 repeat), the Elias-gamma payload length `k ≥ 1`, for
/// repeats the Elias-gamma count `r ≥ 1`, then `k` payload bits. A
/// description is one or more instructions and must be consumed exactly;
/// the empty description is invalid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyMachine {
    pub max_len: usize,
}

fn gamma(out: &mut Vec<bool>, k: usize) {
    debug_assert!(k >= 1);
    let width = usize::BITS - k.leading_zeros();
    out.extend(std::iter::repeat_n(false, width as usize - 1));
    out.extend((0..width).rev().map(|i| (k >> i) & 1 == 1));
}

fn read_gamma(bits: &[bool], pos: &mut usize) -> Option<usize> {
    let mut zeros = 0;
    while !*bits.get(*pos)? {
        zeros += 1;
        *pos += 1;
    }
    if zeros >= usize::BITS as usize {
        return None;
    }
    let mut k = 0usize;
    for _ in 0..=zeros {
        k = (k << 1) | *bits.get(*pos)? as usize;
        *pos += 1;
    }
    Some(k)
}

impl ToyMachine {
    pub fn new(max_len: usize) -> Self {
        ToyMachine { max_len }
    }

    pub fn assemble(program: &[Instruction]) -> Vec<bool> {
        let mut out = Vec::new();
        for ins in program {
            match ins {
                Instruction::Literal(p) => {
                    out.push(false);
                    gamma(&mut out, p.len());
                    out.extend(p);
                }
                Instruction::Repeat { times, payload } => {
                    out.push(true);
                    gamma(&mut out, payload.len());
                    gamma(&mut out, *times);
                    out.extend(payload);
                }
            }
        }
        out
    }

    /// Output of `desc`, or `None` when it is not a valid description or
    /// exceeds `max_len`.
    pub fn run(&self, desc: &[bool]) -> Option<Vec<bool>> {
        if desc.is_empty() || desc.len() > self.max_len {
            return None;
        }
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < desc.len() {
            let repeat = desc[pos];
            pos += 1;
            let k = read_gamma(desc, &mut pos)?;
            let times = if repeat { read_gamma(desc, &mut pos)? } else { 1 };
            let payload = desc.get(pos..pos + k)?;
            pos += k;
            for _ in 0..times {
                out.extend_from_slice(payload);
            }
        }
        Some(out)
    }

    /// Shorter of the plain literal and the best single repeat of a period
    /// of `x`.
    pub fn describe(x: &[bool]) -> Vec<bool> {
        let mut best = ToyMachine::assemble(&[Instruction::Literal(x.to_vec())]);
        for p in 1..x.len() {
            if x.len() % p == 0 && (p..x.len()).all(|i| x[i] == x[i - p]) {
                let d = ToyMachine::assemble(&[Instruction::Repeat {
                    times: x.len() / p,
                    payload: x[..p].to_vec(),
                }]);
                if d.len() < best.len() {
                    best = d;
                }
                break;
            }
        }
        best
    }
}

/// Largest `c` [`toy_machine_census`] will enumerate.
pub const TOY_CENSUS_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyCensus {
    pub c: usize,
    /// Descriptions of length `< c`, valid or not.
    pub descriptions: u64,
    pub valid: u64,
    pub distinct_outputs: u64,
    /// `2^c − 1`.
    pub bound: u64,
    pub holds: bool,
}

/// Runs every description shorter than `c` bits and counts distinct outputs.
pub fn toy_machine_census(c: usize) -> Result<ToyCensus> {
    if c > TOY_CENSUS_CAP {
        return Err(Error::Cap {
            requested: c,
            cap: TOY_CENSUS_CAP,
        });
    }
    let machine = ToyMachine::new(c.saturating_sub(1));
    let mut outputs: HashSet<Vec<bool>> = HashSet::new();
    let mut valid = 0;
    let mut desc = Vec::with_capacity(c);
    for len in 0..c {
        for value in 0u64..1 << len {
            desc.clear();
            desc.extend((0..len).rev().map(|i| (value >> i) & 1 == 1));
            if let Some(out) = machine.run(&desc) {
                valid += 1;
                outputs.insert(out);
            }
        }
    }
    let bound = (1u64 << c) - 1;
    let distinct_outputs = outputs.len() as u64;
    Ok(ToyCensus {
        c,
        descriptions: bound,
        valid,
        distinct_outputs,
        bound,
        holds: distinct_outputs <= bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncomplexFraction {
    /// `N² 2^N log ε + c`.
    pub exponent: f64,
    /// `2^exponent`, unclamped.
    pub fraction: f64,
    /// `min(fraction, 1)`.
    pub clamped: f64,
}

/// Fraction of states whose complexity could fall below `c` bits.
pub fn noncomplex_fraction(n: usize, epsilon: f64, c: f64) -> Result<NoncomplexFraction> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Precision(epsilon));
    }
    if !c.is_finite() {
        return Err(Error::Domain(format!("c = {c} is not finite")));
    }
    let nf = n as f64;
    let exponent = nf * nf * nf.exp2() * epsilon.log2() + c;
    let fraction = exponent.exp2();
    Ok(NoncomplexFraction {
        exponent,
        fraction,
        clamped: fraction.min(1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VitanyiBound {
    /// Computational basis index with the largest overlap.
    pub index: usize,
    pub overlap: f64,
    /// `N` bits name the basis vector.
    pub description_bits: usize,
    /// `⌈−log₂ overlap⌉`.
    pub penalty_bits: usize,
    pub total: usize,
    /// `1 − 1/2^N`.
    pub epsilon_vit: f64,
}

/// Describes `phi` by its best computational basis vector plus the fidelity
/// penalty. The largest overlap is at least `2^{−N}`, so the total never
/// exceeds `2N`.
pub fn vitanyi_bound(phi: &StateVector) -> VitanyiBound {
    let n = phi.num_qubits();
    let (index, overlap) = phi
        .amplitudes()
        .iter()
        .map(|a| a.norm_sqr())
        .enumerate()
        .fold((0, -1.0), |best, (i, p)| if p > best.1 { (i, p) } else { best });
    // absorb rounding so that overlaps of exactly 2^{−k} cost k bits
    let penalty_bits = (-overlap.log2() - 1e-9).ceil().max(0.0) as usize;
    VitanyiBound {
        index,
        overlap,
        description_bits: n,
        penalty_bits,
        total: n + penalty_bits,
        epsilon_vit: 1.0 - (-(n as f64)).exp2(),
    }
}
