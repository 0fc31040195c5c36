//! Memoryless sources of letters, words and pure states, and the
//! entropy/complexity experiments run on them.

use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{formula_bounds, min_over_candidates, CandidateGenerator, CandidateReport, Formula};
use crate::compress::Compressor;
use crate::encode::address_width;
use crate::error::{Error, Result};
use crate::statevec::{c, StateVector, C64, TOLERANCE};

const PROB_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_TRIALS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    ClassicalLetters,
    ClassicalWords,
    QuantumStates,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dictionary {
    /// Words of equal length over the characters they use.
    Classical(Vec<String>),
    States(Vec<StateVector>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordSource {
    pub id: String,
    kind: SourceKind,
    dictionary: Dictionary,
    probs: Vec<f64>,
}

fn check_probs(probs: &[f64], entries: usize) -> Result<()> {
    if probs.len() != entries {
        return Err(Error::Distribution(format!(
            "{} probabilities for {entries} entries",
            probs.len()
        )));
    }
    if probs.is_empty() {
        return Err(Error::Distribution("empty distribution".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(**p >= 0.0)) {
        return Err(Error::Distribution(format!("negative or NaN probability {p}")));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > PROB_TOLERANCE {
        return Err(Error::Distribution(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

impl WordSource {
    /// Single-character letters `0`, `1`, … with the given probabilities.
    pub fn letters(probs: Vec<f64>) -> Result<Self> {
        if probs.len() > 36 {
            return Err(Error::Distribution("at most 36 letters".into()));
        }
        let letters = (0..probs.len())
            .map(|i| char::from_digit(i as u32, 36).unwrap().to_string())
            .collect();
        let mut s = WordSource::classical(letters, probs)?;
        s.kind = SourceKind::ClassicalLetters;
        Ok(s)
    }

    /// Letters `0` and `1` with `P(1) = p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        let mut s = WordSource::letters(vec![1.0 - p, p])?;
        s.id = format!("bernoulli({p})");
        Ok(s)
    }

    /// Words of a common length; length-1 words make a letter source.
    pub fn classical(words: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        check_probs(&probs, words.len())?;
        let l = words[0].chars().count();
        if l == 0 || words.iter().any(|w| w.chars().count() != l) {
            return Err(Error::Distribution("words must share a nonzero length".into()));
        }
        if words.iter().any(|w| w.chars().any(char::is_whitespace)) {
            return Err(Error::Distribution("words may not contain whitespace".into()));
        }
        Ok(WordSource {
            id: format!("words({})", words.len()),
            kind: if l == 1 {
                SourceKind::ClassicalLetters
            } else {
                SourceKind::ClassicalWords
            },
            dictionary: Dictionary::Classical(words),
            probs,
        })
    }

    pub fn quantum(states: Vec<StateVector>, probs: Vec<f64>) -> Result<Self> {
        check_probs(&probs, states.len())?;
        let n = states[0].num_qubits();
        if let Some(s) = states.iter().find(|s| s.num_qubits() != n) {
            return Err(Error::Dimension {
                expected: n,
                actual: s.num_qubits(),
            });
        }
        Ok(WordSource {
            id: format!("states({})", states.len()),
            kind: SourceKind::QuantumStates,
            dictionary: Dictionary::States(states),
            probs,
        })
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `#D`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Word length `l`; `None` for state sources.
    pub fn word_len(&self) -> Option<usize> {
        match &self.dictionary {
            Dictionary::Classical(w) => Some(w[0].chars().count()),
            Dictionary::States(_) => None,
        }
    }

    /// Distinct characters across the dictionary, sorted.
    fn alphabet(&self) -> Vec<char> {
        let mut a: Vec<char> = match &self.dictionary {
            Dictionary::Classical(w) => w.iter().flat_map(|w| w.chars()).collect(),
            Dictionary::States(_) => Vec::new(),
        };
        a.sort_unstable();
        a.dedup();
        a
    }

    /// `⌈log₂ |alphabet|⌉`, at least 1.
    pub fn bits_per_letter(&self) -> usize {
        address_width(self.alphabet().len()).max(1)
    }

    /// `⌈log₂ #D⌉`; zero for a one-entry dictionary.
    pub fn bits_per_index(&self) -> usize {
        address_width(self.len())
    }

    /// Parses a source file. Either a single `bernoulli p` line, or `kind
    /// letters|words|states` followed by `word <text> <prob>` lines, or by
    /// `qubits N` and `state <prob>` blocks of `index re im` amplitude lines.
    pub fn parse(text: &str) -> Result<WordSource> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, m: &str| Error::Parse {
            line,
            message: m.to_string(),
        };
        let num = |line: usize, w: Option<&str>| -> Result<f64> {
            w.and_then(|w| w.parse::<f64>().ok())
                .ok_or_else(|| perr(line, "expected a number"))
        };
        let (first_line, first) = lines.next().ok_or_else(|| perr(1, "empty source file"))?;
        let head: Vec<&str> = first.split_whitespace().collect();
        match head.as_slice() {
            ["bernoulli", p] => {
                let p = num(first_line, Some(p))?;
                if let Some((l, _)) = lines.next() {
                    return Err(perr(l, "unexpected content after `bernoulli`"));
                }
                WordSource::bernoulli(p)
            }
            ["kind", "letters" | "words"] => {
                let (mut words, mut probs) = (Vec::new(), Vec::new());
                for (l, line) in lines {
                    let w: Vec<&str> = line.split_whitespace().collect();
                    match w.as_slice() {
                        ["word", text, p] => {
                            words.push(text.to_string());
                            probs.push(num(l, Some(p))?);
                        }
                        _ => return Err(perr(l, "expected `word <text> <prob>`")),
                    }
                }
                WordSource::classical(words, probs)
            }
            ["kind", "states"] => {
                let mut n = None;
                let mut states: Vec<(f64, Vec<C64>)> = Vec::new();
                for (l, line) in lines {
                    let w: Vec<&str> = line.split_whitespace().collect();
                    match (w.as_slice(), n) {
                        (["qubits", k], None) => {
                            let k: usize = k.parse().map_err(|_| perr(l, "bad qubit count"))?;
                            crate::statevec::StateVector::zero_state(k)?;
                            n = Some(k);
                        }
                        (["state", p], Some(k)) => {
                            states.push((num(l, Some(p))?, vec![c(0., 0.); 1 << k]))
                        }
                        ([idx, re, im], Some(k)) => {
                            let (_, amps) = states
                                .last_mut()
                                .ok_or_else(|| perr(l, "amplitude before any `state`"))?;
                            let i: usize = idx.parse().map_err(|_| perr(l, "bad index"))?;
                            if i >= 1 << k {
                                return Err(perr(l, "index out of range"));
                            }
                            amps[i] = c(num(l, Some(re))?, num(l, Some(im))?);
                        }
                        _ => return Err(perr(l, &format!("unexpected `{line}`"))),
                    }
                }
                let n = n.ok_or_else(|| perr(first_line, "missing `qubits` line"))?;
                let (probs, amps): (Vec<f64>, Vec<Vec<C64>>) = states.into_iter().unzip();
                let states = amps
                    .into_iter()
                    .map(|a| StateVector::new(n, a))
                    .collect::<Result<_>>()?;
                WordSource::quantum(states, probs)
            }
            _ => Err(perr(first_line, "expected `bernoulli p` or `kind letters|words|states`")),
        }
    }
}

/// `−Σ p log₂ p`, with `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    check_probs(probs, probs.len())?;
    Ok(probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0))
}

fn sample_with(src: &WordSource, m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if src.len() == 1 {
        return vec![0; m];
    }
    let dist = WeightedIndex::new(&src.probs).expect("validated distribution");
    (0..m).map(|_| dist.sample(rng)).collect()
}

/// `m` i.i.d. dictionary indices.
pub fn sample_sentence(src: &WordSource, m: usize, seed: u64) -> Result<Vec<usize>> {
    if m == 0 {
        return Err(Error::Domain("sentence length must be at least 1".into()));
    }
    Ok(sample_with(src, m, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn pack(values: impl Iterator<Item = usize>, width: usize) -> Vec<u8> {
    let mut w = crate::encode::BitWriter::default();
    for v in values {
        w.push(v as u64, width);
    }
    w.finish()
}

/// Indices at `⌈log₂ #D⌉` bits each, packed.
pub fn serialize_indices(indices: &[usize], src: &WordSource) -> Result<Vec<u8>> {
    if let Some(&i) = indices.iter().find(|&&i| i >= src.len()) {
        return Err(Error::Domain(format!("index {i} outside a dictionary of {}", src.len())));
    }
    Ok(pack(indices.iter().copied(), src.bits_per_index()))
}

fn letters_of<'a>(word: &'a str, alphabet: &'a [char]) -> impl Iterator<Item = usize> + 'a {
    word.chars()
        .map(|ch| alphabet.iter().position(|&a| a == ch).expect("letter in alphabet"))
}

/// The sentence written out word after word, each letter at
/// `bits_per_letter` bits.
pub fn serialize_sentence(indices: &[usize], src: &WordSource) -> Result<Vec<u8>> {
    let Dictionary::Classical(words) = &src.dictionary else {
        return Err(Error::Domain("only classical sentences can be written out".into()));
    };
    serialize_indices(indices, src)?;
    let alphabet = src.alphabet();
    let letters: Vec<usize> = indices
        .iter()
        .flat_map(|&i| letters_of(&words[i], &alphabet).collect::<Vec<_>>())
        .collect();
    Ok(pack(letters.into_iter(), src.bits_per_letter()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceEstimate {
    /// Compressed index sequence.
    pub index_bits: f64,
    /// Σ compressed words.
    pub dictionary_compressed: f64,
    /// `l · #D · bits_per_letter`.
    pub dictionary_cap: f64,
    /// `min(dictionary_compressed, dictionary_cap)`.
    pub dictionary_bits: f64,
    pub compressor_id: String,
}

impl SentenceEstimate {
    pub fn total(&self) -> f64 {
        self.index_bits + self.dictionary_bits
    }
}

/// Two-part description of a classical sentence: its index sequence plus
/// the dictionary it draws from.
pub fn sentence_estimate(
    indices: &[usize],
    src: &WordSource,
    compressor: &dyn Compressor,
) -> Result<SentenceEstimate> {
    let Dictionary::Classical(words) = &src.dictionary else {
        return Err(Error::Domain("use quantum_message_estimate for state sources".into()));
    };
    let index_bits = compressor.compressed_bits(&serialize_indices(indices, src)?) as f64;
    let alphabet = src.alphabet();
    let bpl = src.bits_per_letter();
    let dictionary_compressed: f64 = words
        .iter()
        .map(|w| compressor.compressed_bits(&pack(letters_of(w, &alphabet), bpl)) as f64)
        .sum();
    let dictionary_cap = (src.word_len().unwrap() * src.len() * bpl) as f64;
    Ok(SentenceEstimate {
        index_bits,
        dictionary_compressed,
        dictionary_cap,
        dictionary_bits: dictionary_compressed.min(dictionary_cap),
        compressor_id: compressor.id().to_string(),
    })
}

#[derive(Debug, Clone)]
pub struct QuantumMessageEstimate {
    pub index_bits: f64,
    /// Best candidate per dictionary state.
    pub states: Vec<CandidateReport>,
    /// Σ of the per-state estimates.
    pub dictionary_bits: f64,
    /// `−#D N² 2^N log ε`.
    pub cap: f64,
    pub epsilon: f64,
    pub compressor_id: String,
}

impl QuantumMessageEstimate {
    pub fn total(&self) -> f64 {
        self.index_bits + self.dictionary_bits
    }
}

/// Description of a message of product states: the index sequence plus a
/// circuit estimate for every dictionary state.
pub fn quantum_message_estimate(
    src: &WordSource,
    indices: &[usize],
    epsilon: f64,
    generators: &[&dyn CandidateGenerator],
    code_id: &str,
    compressor: &dyn Compressor,
) -> Result<QuantumMessageEstimate> {
    let Dictionary::States(states) = &src.dictionary else {
        return Err(Error::Domain("source does not emit states".into()));
    };
    crate::synth::check_epsilon(epsilon)?;
    let index_bits = compressor.compressed_bits(&serialize_indices(indices, src)?) as f64;
    let reports = states
        .iter()
        .map(|phi| min_over_candidates(phi, epsilon, generators, code_id, compressor))
        .collect::<Result<Vec<_>>>()?;
    let n = states[0].num_qubits();
    let general = formula_bounds(&Formula::General { n, epsilon })?.bits;
    Ok(QuantumMessageEstimate {
        index_bits,
        dictionary_bits: reports.iter().map(|r| r.estimate.bits).sum(),
        states: reports,
        cap: src.len() as f64 * general,
        epsilon,
        compressor_id: compressor.id().to_string(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub m: usize,
    pub trial: usize,
    pub bits: usize,
}

impl TrialRow {
    pub fn bits_per_emission(&self) -> f64 {
        self.bits as f64 / self.m as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRateTable {
    pub source_id: String,
    pub seed: u64,
    pub entropy: f64,
    pub compressor_id: String,
    pub rows: Vec<TrialRow>,
}

impl EntropyRateTable {
    pub const CSV_HEADER: &'static str = "m,trial,bits,bits_per_emission,H,source_id,seed";

    /// `(m, mean bits per emission)` in the order the `m` values were given.
    pub fn means(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64, usize)> = Vec::new();
        for r in &self.rows {
            match out.last_mut() {
                Some((m, sum, k)) if *m == r.m => {
                    *sum += r.bits_per_emission();
                    *k += 1;
                }
                _ => out.push((r.m, r.bits_per_emission(), 1)),
            }
        }
        out.into_iter().map(|(m, s, k)| (m, s / k as f64)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.m,
                r.trial,
                r.bits,
                r.bits_per_emission(),
                self.entropy,
                self.source_id,
                self.seed
            ));
        }
        s
    }
}

/// For every `m`, compresses `trials` sampled sentences of the source (its
/// indices for letter sources, the written-out words otherwise) and records
/// bits per emission. Trial `t` of the `k`-th `m` draws from ChaCha stream
/// `k·trials + t` of the master seed.
pub fn entropy_rate_experiment(
    src: &WordSource,
    ms: &[usize],
    trials: usize,
    seed: u64,
    compressor: &dyn Compressor,
) -> Result<EntropyRateTable> {
    if ms.is_empty() || ms[0] == 0 || ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("m values must be positive and increasing".into()));
    }
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let jobs: Vec<(usize, usize, usize)> = ms
        .iter()
        .enumerate()
        .flat_map(|(k, &m)| (0..trials).map(move |t| (k, m, t)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(k, m, trial)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((k * trials + trial) as u64);
            let indices = sample_with(src, m, &mut rng);
            let bytes = match src.kind {
                SourceKind::ClassicalWords => serialize_sentence(&indices, src)?,
                _ => serialize_indices(&indices, src)?,
            };
            Ok(TrialRow {
                m,
                trial,
                bits: compressor.compressed_bits(&bytes),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyRateTable {
        source_id: src.id.clone(),
        seed,
        entropy: shannon_entropy(&src.probs)?,
        compressor_id: compressor.id().to_string(),
        rows,
    })
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                actual: matrix.ncols(),
            });
        }
        if (&matrix - matrix.adjoint()).iter().any(|z| z.norm() > TOLERANCE) {
            return Err(Error::Domain("density matrix is not Hermitian".into()));
        }
        if (matrix.trace().re - 1.0).abs() > TOLERANCE {
            return Err(Error::Domain(format!("trace {} is not 1", matrix.trace().re)));
        }
        let rho = DensityOperator { matrix };
        if rho.eigenvalues().iter().any(|&l| l < -TOLERANCE) {
            return Err(Error::Domain("density matrix has a negative eigenvalue".into()));
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.clone().symmetric_eigenvalues().iter().copied().collect()
    }
}

/// `Σ p_j |φ_j⟩⟨φ_j|`.
pub fn density_operator(src: &WordSource) -> Result<DensityOperator> {
    let Dictionary::States(states) = &src.dictionary else {
        return Err(Error::Domain("source does not emit states".into()));
    };
    let dim = states[0].dim();
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for (phi, &p) in states.iter().zip(&src.probs) {
        let v = nalgebra::DVector::from_column_slice(phi.amplitudes());
        rho += (&v * v.adjoint()) * c(p, 0.0);
    }
    DensityOperator::new(rho)
}

/// `−Σ λ log₂ λ` over the eigenvalues, in bits per emitted block.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > 1e-15)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}
