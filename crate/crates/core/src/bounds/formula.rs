//! Closed-form upper bounds, evaluated in bits.

use super::{ComplexityEstimate, Method};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    /// `−2^N log ε`, plus `N` when `linear` is set.
    Preliminary { n: usize, epsilon: f64, linear: bool },
    /// `−log(2^{−N} ε^{2^N})`.
    BallVolume { n: usize, epsilon: f64 },
    /// `−N² 2^N log ε`.
    General { n: usize, epsilon: f64 },
    /// `N + N(N−1)/2`.
    GraphExact { n: usize },
    /// `N² − log(ε/N²)`.
    GraphSk { n: usize, epsilon: f64 },
    /// `−N² log(ε/N²)`.
    WeightedGraph { n: usize, epsilon: f64 },
    /// `−N² 2^N log(ε/m)`.
    Copies { n: usize, m: usize, epsilon: f64 },
    /// `−N² 2^N log ε + log m`; the `log m` term is also reported on its own.
    PerCopy { n: usize, m: usize, epsilon: f64 },
    /// `−Σ N_j² 2^{N_j} log(ε/J)`.
    Separable { parts: Vec<usize>, epsilon: f64 },
    /// `−2N log(ε/N)`.
    FullySeparable { n: usize, epsilon: f64 },
    /// `−#D (N·S)² 2^{N·S} log ε`.
    Schumacher {
        n: usize,
        entropy: f64,
        epsilon: f64,
        dictionary: usize,
    },
    /// `K_index + l·#D`.
    Sentence {
        index_bits: f64,
        word_len: usize,
        dictionary: usize,
    },
}

/// Names accepted by [`Formula::parse`], in a stable order.
pub fn formula_kinds() -> &'static [&'static str] {
    &[
        "preliminary",
        "preliminary_nolinear",
        "ball_volume",
        "general",
        "graph_exact",
        "graph_sk",
        "weighted_graph",
        "copies",
        "per_copy",
        "separable",
        "fully_separable",
        "schumacher",
        "sentence",
    ]
}

impl Formula {
    pub fn name(&self) -> &'static str {
        match self {
            Formula::Preliminary { linear: true, .. } => "preliminary",
            Formula::Preliminary { linear: false, .. } => "preliminary_nolinear",
            Formula::BallVolume { .. } => "ball_volume",
            Formula::General { .. } => "general",
            Formula::GraphExact { .. } => "graph_exact",
            Formula::GraphSk { .. } => "graph_sk",
            Formula::WeightedGraph { .. } => "weighted_graph",
            Formula::Copies { .. } => "copies",
            Formula::PerCopy { .. } => "per_copy",
            Formula::Separable { .. } => "separable",
            Formula::FullySeparable { .. } => "fully_separable",
            Formula::Schumacher { .. } => "schumacher",
            Formula::Sentence { .. } => "sentence",
        }
    }

    fn epsilon(&self) -> Option<f64> {
        match *self {
            Formula::Preliminary { epsilon, .. }
            | Formula::BallVolume { epsilon, .. }
            | Formula::General { epsilon, .. }
            | Formula::GraphSk { epsilon, .. }
            | Formula::WeightedGraph { epsilon, .. }
            | Formula::Copies { epsilon, .. }
            | Formula::PerCopy { epsilon, .. }
            | Formula::Separable { epsilon, .. }
            | Formula::FullySeparable { epsilon, .. }
            | Formula::Schumacher { epsilon, .. } => Some(epsilon),
            Formula::GraphExact { .. } | Formula::Sentence { .. } => None,
        }
    }

    /// Builds a formula from its kind name and positional numeric
    /// parameters. `separable` takes ε first, then the part sizes.
    pub fn parse(kind: &str, params: &[f64]) -> Result<Formula> {
        let want = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::Domain(format!("`{kind}` takes {k} parameters, got {}", params.len())))
            }
        };
        let count = |x: f64| {
            if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                Ok(x as usize)
            } else {
                Err(Error::Domain(format!("`{x}` is not a nonnegative integer")))
            }
        };
        Ok(match kind {
            "preliminary" | "preliminary_nolinear" => {
                want(2)?;
                Formula::Preliminary {
                    n: count(params[0])?,
                    epsilon: params[1],
                    linear: kind == "preliminary",
                }
            }
            "ball_volume" => {
                want(2)?;
                Formula::BallVolume { n: count(params[0])?, epsilon: params[1] }
            }
            "general" => {
                want(2)?;
                Formula::General { n: count(params[0])?, epsilon: params[1] }
            }
            "graph_exact" => {
                want(1)?;
                Formula::GraphExact { n: count(params[0])? }
            }
            "graph_sk" => {
                want(2)?;
                Formula::GraphSk { n: count(params[0])?, epsilon: params[1] }
            }
            "weighted_graph" => {
                want(2)?;
                Formula::WeightedGraph { n: count(params[0])?, epsilon: params[1] }
            }
            "copies" | "per_copy" => {
                want(3)?;
                let (n, m, epsilon) = (count(params[0])?, count(params[1])?, params[2]);
                if kind == "copies" {
                    Formula::Copies { n, m, epsilon }
                } else {
                    Formula::PerCopy { n, m, epsilon }
                }
            }
            "separable" => {
                if params.len() < 2 {
                    return Err(Error::Domain("`separable` takes ε and at least one part".into()));
                }
                Formula::Separable {
                    epsilon: params[0],
                    parts: params[1..].iter().map(|&x| count(x)).collect::<Result<_>>()?,
                }
            }
            "fully_separable" => {
                want(2)?;
                Formula::FullySeparable { n: count(params[0])?, epsilon: params[1] }
            }
            "schumacher" => {
                want(4)?;
                Formula::Schumacher {
                    n: count(params[0])?,
                    entropy: params[1],
                    epsilon: params[2],
                    dictionary: count(params[3])?,
                }
            }
            "sentence" => {
                want(3)?;
                Formula::Sentence {
                    index_bits: params[0],
                    word_len: count(params[1])?,
                    dictionary: count(params[2])?,
                }
            }
            _ => return Err(Error::Domain(format!("unknown formula `{kind}`"))),
        })
    }
}

fn check_n(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    Ok(n as f64)
}

fn check_eps(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::Precision(epsilon))
    }
}

/// `N² 2^N`.
fn volume(n: f64) -> f64 {
    n * n * n.exp2()
}

/// Evaluates `f`. Results carry `Method::Formula(name)` and the named terms
/// that sum to the total.
pub fn formula_bounds(f: &Formula) -> Result<ComplexityEstimate> {
    if let Some(e) = f.epsilon() {
        check_eps(e)?;
    }
    let terms: Vec<(&'static str, f64)> = match *f {
        Formula::Preliminary { n, epsilon, linear } => {
            let nf = check_n(n)?;
            let mut t = vec![("counting", -nf.exp2() * epsilon.log2())];
            if linear {
                t.push(("linear", nf));
            }
            t
        }
        Formula::BallVolume { n, epsilon } => {
            let nf = check_n(n)?;
            // −log(2^{−N} ε^{2^N}), expanded so large N does not underflow
            vec![("ball", nf - nf.exp2() * epsilon.log2())]
        }
        Formula::General { n, epsilon } => vec![("general", -volume(check_n(n)?) * epsilon.log2())],
        Formula::GraphExact { n } => {
            check_n(n)?;
            vec![("hadamards", n as f64), ("cz", (n * (n - 1) / 2) as f64)]
        }
        Formula::GraphSk { n, epsilon } => {
            let n2 = check_n(n)?.powi(2);
            vec![("gates", n2), ("precision", -(epsilon / n2).log2())]
        }
        Formula::WeightedGraph { n, epsilon } => {
            let n2 = check_n(n)?.powi(2);
            vec![("weighted", -n2 * (epsilon / n2).log2())]
        }
        Formula::Copies { n, m, epsilon } => {
            let nf = check_n(n)?;
            check_m(m)?;
            vec![("copies", -volume(nf) * (epsilon / m as f64).log2())]
        }
        Formula::PerCopy { n, m, epsilon } => {
            let nf = check_n(n)?;
            check_m(m)?;
            vec![("single", -volume(nf) * epsilon.log2()), ("log_m", (m as f64).log2())]
        }
        Formula::Separable { ref parts, epsilon } => {
            if parts.is_empty() {
                return Err(Error::Domain("partition is empty".into()));
            }
            let j = parts.len() as f64;
            let mut sum = 0.0;
            for &p in parts {
                sum += volume(check_n(p)?);
            }
            vec![("separable", -sum * (epsilon / j).log2())]
        }
        Formula::FullySeparable { n, epsilon } => {
            let nf = check_n(n)?;
            vec![("separable", -2.0 * nf * (epsilon / nf).log2())]
        }
        Formula::Schumacher { n, entropy, epsilon, dictionary } => {
            let nf = check_n(n)?;
            if !(0.0..=1.0).contains(&entropy) {
                return Err(Error::Domain(format!("entropy per qubit {entropy} outside [0, 1]")));
            }
            let ns = nf * entropy;
            vec![("dictionary", -(dictionary as f64) * ns * ns * ns.exp2() * epsilon.log2())]
        }
        Formula::Sentence { index_bits, word_len, dictionary } => {
            if !(index_bits >= 0.0) || !index_bits.is_finite() {
                return Err(Error::Domain(format!("index bits {index_bits} must be finite and ≥ 0")));
            }
            vec![("index", index_bits), ("dictionary", (word_len * dictionary) as f64)]
        }
    };
    Ok(ComplexityEstimate {
        bits: terms.iter().map(|&(_, v)| v).sum(),
        method: Method::Formula(f.name()),
        epsilon: f.epsilon(),
        basis_id: String::new(),
        code_id: String::new(),
        candidate_count: 0,
        compressor_id: None,
        header_bits: 0,
        terms,
    })
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("copy count must be at least 1".into()));
    }
    Ok(())
}
