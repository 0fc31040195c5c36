//! Solovay–Kitaev approximation of single-qubit unitaries by basis words.

use super::net::Net;
use super::su2::Su2;
use crate::error::{Error, Result};
use crate::statevec::UnitaryMatrix;

/// Largest net coarseness (and group-commutator input distance) for which
/// the recursion is expected to contract.
pub const CONTRACTION_THRESHOLD: f64 = 0.2;

pub const DEFAULT_L0: usize = 16;
pub const DEFAULT_MAX_DEPTH: usize = 6;

/// Rotations of the commutator factors about Δ's axis tried per level.
const COMMUTATOR_TWISTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkParams {
    pub l0: usize,
    pub depth: usize,
    /// Fitted polylog exponent of word length, filled in by measurements.
    pub c_observed: Option<f64>,
}

impl Default for SkParams {
    fn default() -> Self {
        SkParams {
            l0: DEFAULT_L0,
            depth: 3,
            c_observed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkApprox {
    /// Basis gate indices in circuit order.
    pub word: Vec<usize>,
    /// Phase-insensitive distance to the target.
    pub distance: f64,
    pub depth: usize,
    /// Length counted with each adjoint gate as one letter, before lowering.
    pub literal_len: usize,
}

/// A gate of the net, possibly adjointed.
type Literal = (u8, bool);

#[derive(Clone)]
struct Approx {
    lits: Vec<Literal>,
    q: Su2,
}

fn push_literal(out: &mut Vec<Literal>, lit: Literal) {
    match out.last() {
        Some(&(g, adj)) if g == lit.0 && adj != lit.1 => {
            out.pop();
        }
        _ => out.push(lit),
    }
}

fn adjoint_literals(lits: &[Literal]) -> impl Iterator<Item = Literal> + '_ {
    lits.iter().rev().map(|&(g, a)| (g, !a))
}

/// Balanced commutator factors for a unit quaternion: `V·W·V†·W† = Δ`.
pub(crate) fn commutator_factors(delta: Su2) -> (Su2, Su2) {
    let (theta, n) = delta.angle_axis();
    if theta < 1e-15 {
        return (Su2::IDENTITY, Su2::IDENTITY);
    }
    let phi = 2.0 * (theta / 4.0).sin().sqrt().asin();
    let v = Su2::rotation([1.0, 0.0, 0.0], phi);
    let w = Su2::rotation([0.0, 1.0, 0.0], phi);
    let comm = v.mul(w).mul(v.adjoint()).mul(w.adjoint());
    let (_, m) = comm.angle_axis();
    let cross = [
        m[1] * n[2] - m[2] * n[1],
        m[2] * n[0] - m[0] * n[2],
        m[0] * n[1] - m[1] * n[0],
    ];
    let sin = cross.iter().map(|x| x * x).sum::<f64>().sqrt();
    let cos = m[0] * n[0] + m[1] * n[1] + m[2] * n[2];
    let s = if sin > 1e-12 {
        Su2::rotation(cross.map(|x| x / sin), sin.atan2(cos))
    } else if cos > 0.0 {
        Su2::IDENTITY
    } else {
        // antiparallel: half turn about any axis perpendicular to m
        let p = if m[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let d = p[0] * m[0] + p[1] * m[1] + p[2] * m[2];
        let perp = [p[0] - d * m[0], p[1] - d * m[1], p[2] - d * m[2]];
        let len = perp.iter().map(|x| x * x).sum::<f64>().sqrt();
        Su2::rotation(perp.map(|x| x / len), std::f64::consts::PI)
    };
    (s.mul(v).mul(s.adjoint()), s.mul(w).mul(s.adjoint()))
}

/// Splits `Δ` near the identity into `V`, `W` with `V·W·V†·W† = Δ` up to
/// global phase, each at distance `O(√dist(Δ, I))` from the identity.
pub fn group_commutator_decompose(delta: &UnitaryMatrix) -> Result<(UnitaryMatrix, UnitaryMatrix)> {
    let q = Su2::from_matrix(delta)?;
    let distance = q.distance(Su2::IDENTITY);
    if distance > CONTRACTION_THRESHOLD {
        return Err(Error::FarFromIdentity {
            distance,
            limit: CONTRACTION_THRESHOLD,
        });
    }
    let (v, w) = commutator_factors(q);
    Ok((v.to_matrix(), w.to_matrix()))
}

impl Net {
    fn basic(&self, u: Su2) -> Approx {
        let (idx, _) = self.nearest(u);
        Approx {
            lits: self.local_word(idx).into_iter().map(|g| (g, false)).collect(),
            q: self.point(idx),
        }
    }

    /// One recursion level on top of `prev`, an approximation of `u` at `level − 1`.
    fn refine(&self, u: Su2, prev: Approx, level: usize) -> Approx {
        let delta = u.mul(prev.q.adjoint());
        let (v, w) = commutator_factors(delta);
        let (_, axis) = delta.angle_axis();
        // conjugating V and W by a rotation about Δ's axis leaves the
        // commutator unchanged, so keep the twist whose words land closest
        let mut best: Option<(f64, Approx, Approx, Su2)> = None;
        for t in 0..COMMUTATOR_TWISTS {
            let r = Su2::rotation(axis, 2.0 * std::f64::consts::PI * t as f64 / COMMUTATOR_TWISTS as f64);
            let av = self.approximate_su2(r.mul(v).mul(r.adjoint()), level - 1);
            let aw = self.approximate_su2(r.mul(w).mul(r.adjoint()), level - 1);
            let q = av
                .q
                .mul(aw.q)
                .mul(av.q.adjoint())
                .mul(aw.q.adjoint())
                .mul(prev.q);
            let d = q.distance(u);
            if best.as_ref().is_none_or(|b| d < b.0) {
                best = Some((d, av, aw, q));
            }
        }
        let (_, av, aw, q) = best.expect("at least one twist");
        let mut lits = prev.lits;
        let tail = adjoint_literals(&aw.lits)
            .chain(adjoint_literals(&av.lits))
            .chain(aw.lits.iter().copied())
            .chain(av.lits.iter().copied());
        for lit in tail {
            push_literal(&mut lits, lit);
        }
        Approx { lits, q }
    }

    fn approximate_su2(&self, u: Su2, depth: usize) -> Approx {
        let mut a = self.basic(u);
        for level in 1..=depth {
            a = self.refine(u, a, level);
        }
        a
    }

    fn lower(&self, a: &Approx, target: Su2, depth: usize) -> SkApprox {
        let mut word: Vec<u8> = Vec::with_capacity(a.lits.len());
        for &(g, adj) in &a.lits {
            let expansion: &[u8] = if adj { self.inverse_word(g) } else { std::slice::from_ref(&g) };
            for &x in expansion {
                match word.last() {
                    Some(&prev) if self.cancels(prev, x) => {
                        word.pop();
                    }
                    _ => word.push(x),
                }
            }
        }
        SkApprox {
            word: word.into_iter().map(|g| self.basis_gate(g)).collect(),
            distance: a.q.distance(target),
            depth,
            literal_len: a.lits.len(),
        }
    }

    fn check_contracts(&self, depth: usize) -> Result<()> {
        if depth > 0 && self.coverage() > CONTRACTION_THRESHOLD {
            return Err(Error::NetTooCoarse {
                distance: self.coverage(),
                threshold: CONTRACTION_THRESHOLD,
            });
        }
        Ok(())
    }

    /// Recursion at exactly `depth` levels.
    pub fn sk_approximate(&self, target: &UnitaryMatrix, depth: usize) -> Result<SkApprox> {
        self.check_contracts(depth)?;
        let u = Su2::from_matrix(target)?;
        Ok(self.lower(&self.approximate_su2(u, depth), u, depth))
    }

    /// Smallest depth `≤ max_depth` whose distance is within `budget`.
    pub fn sk_within(&self, target: &UnitaryMatrix, budget: f64, max_depth: usize) -> Result<SkApprox> {
        let u = Su2::from_matrix(target)?;
        let mut a = self.basic(u);
        let mut best = (a.q.distance(u), 0, a.clone());
        let mut depth = 0;
        while best.0 > budget && depth < max_depth {
            self.check_contracts(depth + 1)?;
            depth += 1;
            a = self.refine(u, a, depth);
            let d = a.q.distance(u);
            if d < best.0 {
                best = (d, depth, a.clone());
            }
        }
        if best.0 > budget {
            return Err(Error::BudgetInfeasible {
                budget,
                max_depth,
                achieved: best.0,
            });
        }
        Ok(self.lower(&best.2, u, best.1))
    }

    /// Every level `0..=depth` of one recursion, sharing the work.
    pub fn sk_levels(&self, target: &UnitaryMatrix, depth: usize) -> Result<Vec<SkApprox>> {
        self.check_contracts(depth)?;
        let u = Su2::from_matrix(target)?;
        let mut a = self.basic(u);
        let mut out = vec![self.lower(&a, u, 0)];
        for level in 1..=depth {
            a = self.refine(u, a, level);
            out.push(self.lower(&a, u, level));
        }
        Ok(out)
    }
}

/// `sk_approximate` over a freshly built net.
pub fn sk_approximate(
    target: &UnitaryMatrix,
    basis: std::sync::Arc<crate::circuit::GateBasis>,
    params: &SkParams,
) -> Result<SkApprox> {
    Net::build(basis, params.l0)?.sk_approximate(target, params.depth)
}
