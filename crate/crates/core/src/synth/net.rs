//! Breadth-first ε-net of short single-qubit words over a finite basis.

use std::collections::HashSet;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::su2::Su2;
use crate::circuit::GateBasis;
use crate::error::{Error, Result};
use crate::statevec::UnitaryMatrix;

pub const DEFAULT_NET_CAP: usize = 2_000_000;

/// Grid used to merge words whose products agree up to global phase.
const DEDUP_SCALE: f64 = 1e8;
const COVERAGE_SAMPLES: usize = 512;
const COVERAGE_SEED: u64 = 0x5eed_0f_c0de;

#[derive(Debug, Clone, Copy)]
struct Entry {
    parent: u32,
    gate: u8,
    len: u8,
}

#[derive(Debug)]
pub struct Net {
    basis: Arc<GateBasis>,
    l0: usize,
    /// Basis indices of the single-qubit gates, by local gate number.
    gates: Vec<usize>,
    gate_su2: Vec<Su2>,
    points: Vec<Su2>,
    entries: Vec<Entry>,
    /// Shortest local word equal to each gate's inverse.
    inverses: Vec<Vec<u8>>,
    /// `cancels[i][j]`: gate `j` right after gate `i` is the identity.
    cancels: Vec<Vec<bool>>,
    coverage: f64,
}

fn dedup_key(q: Su2) -> [i64; 4] {
    let lead = q.0.iter().find(|x| x.abs() > 1e-6).copied().unwrap_or(1.0);
    let sign = lead.signum();
    q.0.map(|x| (x * sign * DEDUP_SCALE).round() as i64)
}

type Bfs = (Vec<Su2>, Vec<Entry>);

/// All products of length `≤ max_len`, deduplicated up to phase, shortest first.
fn breadth_first(gate_su2: &[Su2], max_len: usize, cap: usize) -> Result<Bfs> {
    let mut points = vec![Su2::IDENTITY];
    let mut entries = vec![Entry {
        parent: u32::MAX,
        gate: 0,
        len: 0,
    }];
    let mut seen = HashSet::new();
    seen.insert(dedup_key(Su2::IDENTITY));
    let mut frontier = 0..1;
    for len in 1..=max_len {
        let start = points.len();
        for parent in frontier.clone() {
            for (g, &gq) in gate_su2.iter().enumerate() {
                let q = gq.mul(points[parent]);
                if !seen.insert(dedup_key(q)) {
                    continue;
                }
                if points.len() >= cap {
                    return Err(Error::NetTooLarge { cap });
                }
                points.push(q);
                entries.push(Entry {
                    parent: parent as u32,
                    gate: g as u8,
                    len: len as u8,
                });
            }
        }
        frontier = start..points.len();
    }
    Ok((points, entries))
}

fn walk(entries: &[Entry], index: usize) -> Vec<u8> {
    let mut word = Vec::with_capacity(entries[index].len as usize);
    let mut i = index;
    while entries[i].len > 0 {
        word.push(entries[i].gate);
        i = entries[i].parent as usize;
    }
    word.reverse();
    word
}

const INVERSE_SEARCH_LEN: usize = 8;

fn shortest_word(gate_su2: &[Su2], target: Su2) -> Option<Vec<u8>> {
    let (points, entries) = breadth_first(gate_su2, INVERSE_SEARCH_LEN, DEFAULT_NET_CAP).ok()?;
    points
        .iter()
        .position(|p| p.distance(target) < 1e-9)
        .map(|i| walk(&entries, i))
}

impl Net {
    pub fn build(basis: Arc<GateBasis>, l0: usize) -> Result<Net> {
        Self::build_with_cap(basis, l0, DEFAULT_NET_CAP)
    }

    pub fn build_with_cap(basis: Arc<GateBasis>, l0: usize, cap: usize) -> Result<Net> {
        if l0 == 0 {
            return Err(Error::Domain("net word length l0 must be at least 1".into()));
        }
        let gates: Vec<usize> = (0..basis.len())
            .filter(|&i| basis.gate(i).arity() == 1)
            .collect();
        if gates.is_empty() || gates.len() > u8::MAX as usize {
            return Err(Error::InvalidBasis(format!(
                "basis `{}` has {} single-qubit gates",
                basis.id(),
                gates.len()
            )));
        }
        let gate_su2 = gates
            .iter()
            .map(|&i| Su2::from_matrix(basis.gate(i).matrix()))
            .collect::<Result<Vec<_>>>()?;

        let (points, entries) = breadth_first(&gate_su2, l0, cap)?;
        let mut net = Net {
            basis,
            l0,
            gates,
            gate_su2,
            points,
            entries,
            inverses: Vec::new(),
            cancels: Vec::new(),
            coverage: 0.0,
        };
        net.inverses = (0..net.gates.len())
            .map(|g| {
                shortest_word(&net.gate_su2, net.gate_su2[g].adjoint()).ok_or_else(|| {
                    Error::InvalidBasis(format!(
                        "inverse of `{}` is not a short word over the basis",
                        net.basis.gate(net.gates[g]).name()
                    ))
                })
            })
            .collect::<Result<_>>()?;
        net.cancels = net
            .gate_su2
            .iter()
            .map(|&a| {
                net.gate_su2
                    .iter()
                    .map(|&b| b.mul(a).distance(Su2::IDENTITY) < 1e-9)
                    .collect()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(COVERAGE_SEED);
        let samples: Vec<Su2> = (0..COVERAGE_SAMPLES).map(|_| Su2::random(&mut rng)).collect();
        net.coverage = samples
            .par_iter()
            .map(|&q| net.nearest(q).1)
            .reduce(|| 0.0, f64::max);
        Ok(net)
    }

    pub fn basis(&self) -> &Arc<GateBasis> {
        &self.basis
    }

    pub fn l0(&self) -> usize {
        self.l0
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest nearest-entry distance seen over a fixed sample of random
    /// SU(2) targets: an estimate of the net's coarseness ε₀.
    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    pub(crate) fn point(&self, index: usize) -> Su2 {
        self.points[index]
    }

    #[cfg(test)]
    pub(crate) fn gate_su2(&self, local: u8) -> Su2 {
        self.gate_su2[local as usize]
    }

    pub(crate) fn inverse_word(&self, local: u8) -> &[u8] {
        &self.inverses[local as usize]
    }

    pub(crate) fn cancels(&self, first: u8, second: u8) -> bool {
        self.cancels[first as usize][second as usize]
    }

    pub(crate) fn basis_gate(&self, local: u8) -> usize {
        self.gates[local as usize]
    }

    /// Word of entry `index` in circuit order, as local gate numbers.
    pub(crate) fn local_word(&self, index: usize) -> Vec<u8> {
        walk(&self.entries, index)
    }

    /// Word of entry `index` in circuit order, as basis gate indices.
    pub fn word(&self, index: usize) -> Vec<usize> {
        self.local_word(index)
            .into_iter()
            .map(|g| self.basis_gate(g))
            .collect()
    }

    pub fn matrix(&self, index: usize) -> UnitaryMatrix {
        self.points[index].to_matrix()
    }

    /// All `(word, matrix)` pairs, identity (empty word) first.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, UnitaryMatrix)> + '_ {
        (0..self.len()).map(|i| (self.word(i), self.matrix(i)))
    }

    /// Closest entry by phase-insensitive distance; lowest index wins ties.
    pub(crate) fn nearest(&self, q: Su2) -> (usize, f64) {
        let mut best = 0;
        let mut best_dot = -1.0;
        for (i, p) in self.points.iter().enumerate() {
            let d = p.dot(q).abs();
            if d > best_dot {
                best_dot = d;
                best = i;
            }
        }
        (best, self.points[best].distance(q))
    }

    pub fn nearest_entry(&self, target: &UnitaryMatrix) -> Result<(usize, f64)> {
        Ok(self.nearest(Su2::from_matrix(target)?))
    }
}
