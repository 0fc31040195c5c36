//! Codes turning circuits into classical symbol strings, and back.
//!
//! An explicit-address code writes a header (the qubit count in binary
//! digits, then a newline) and one line per op: the gate word, each target
//! as `⌈log₂ N⌉` binary digits, and a newline. A positional code omits the
//! header and the addresses; op `i` acts on qubit `i`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::circuit::{basis_by_id, classical_basis, Circuit, GateBasis, CLASSICAL_BASIS_ID};
use crate::error::{Error, Result};

pub const CODE_ONE_SYMBOL: &str = "A";
pub const CODE_TWO_SYMBOL: &str = "B";
pub const CODE_CLASSICAL: &str = "INL";

const NEWLINE: &str = "L";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Addressing {
    FixedWidthBinary,
    Positional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Code {
    id: String,
    basis: Arc<GateBasis>,
    alphabet: Vec<String>,
    /// Symbol indices per basis gate, in basis order.
    gate_words: Vec<Vec<usize>>,
    newline: usize,
    digits: Option<[usize; 2]>,
    addressing: Addressing,
}

/// Number of binary digits for a qubit index on `n` qubits.
pub fn address_width(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

impl Code {
    /// Explicit-address code from gate words over extra letters; adds the
    /// digit and newline symbols. Checks that the gate words are prefix-free.
    pub fn new(
        id: impl Into<String>,
        basis: Arc<GateBasis>,
        letters: Vec<String>,
        words: BTreeMap<String, Vec<String>>,
    ) -> Result<Code> {
        let id = id.into();
        let mut alphabet = letters;
        for s in ["0", "1", NEWLINE] {
            if alphabet.iter().any(|a| a == s) {
                return Err(Error::InvalidBasis(format!("letter `{s}` is reserved")));
            }
            alphabet.push(s.to_string());
        }
        let n = alphabet.len();
        let index_of = |s: &str| {
            alphabet[..n - 3]
                .iter()
                .position(|a| a == s)
                .ok_or_else(|| Error::UnknownCode(format!("{id}: symbol `{s}` not a letter")))
        };
        let mut gate_words = Vec::with_capacity(basis.len());
        for g in basis.gates() {
            let w = words.get(g.name()).ok_or_else(|| Error::Unrepresentable {
                code: id.clone(),
                reason: format!("gate `{}` has no word", g.name()),
            })?;
            if w.is_empty() {
                return Err(Error::UnknownCode(format!("{id}: empty word for `{}`", g.name())));
            }
            gate_words.push(w.iter().map(|s| index_of(s)).collect::<Result<Vec<_>>>()?);
        }
        for (i, a) in gate_words.iter().enumerate() {
            for (j, b) in gate_words.iter().enumerate() {
                if i != j && b.starts_with(a) {
                    return Err(Error::UnknownCode(format!("{id}: gate words are not prefix-free")));
                }
            }
        }
        Ok(Code {
            id,
            basis,
            alphabet,
            gate_words,
            newline: n - 1,
            digits: Some([n - 3, n - 2]),
            addressing: Addressing::FixedWidthBinary,
        })
    }

    /// One symbol per gate: the gate name itself.
    pub fn one_symbol(basis: Arc<GateBasis>) -> Code {
        let letters: Vec<String> = basis.gates().iter().map(|g| g.name().to_string()).collect();
        let words = letters.iter().map(|l| (l.clone(), vec![l.clone()])).collect();
        Code::new(CODE_ONE_SYMBOL, basis, letters, words).expect("gate names are distinct")
    }

    /// Two symbols per gate over `⌈√k⌉` lowercase letters, assigned in
    /// lexicographic order.
    pub fn two_symbol(basis: Arc<GateBasis>) -> Code {
        let k = basis.len();
        let q = (1..).find(|q| q * q >= k).unwrap();
        let letters: Vec<String> = (0..q).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let words = basis
            .gates()
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name().to_string(), vec![letters[i / q].clone(), letters[i % q].clone()]))
            .collect();
        Code::new(CODE_TWO_SYMBOL, basis, letters, words).expect("fixed-length words are prefix-free")
    }

    /// `{I, N, L}` over the classical basis, positional addressing.
    pub fn classical() -> Code {
        Code {
            id: CODE_CLASSICAL.to_string(),
            basis: classical_basis(),
            alphabet: vec!["I".into(), "N".into(), NEWLINE.into()],
            gate_words: vec![vec![0], vec![1]],
            newline: 2,
            digits: None,
            addressing: Addressing::Positional,
        }
    }

    /// Built-in code `id` for the basis `basis_id`.
    pub fn by_id(id: &str, basis_id: &str) -> Result<Code> {
        match id {
            CODE_ONE_SYMBOL => Ok(Code::one_symbol(basis_by_id(basis_id)?)),
            CODE_TWO_SYMBOL => Ok(Code::two_symbol(basis_by_id(basis_id)?)),
            CODE_CLASSICAL if basis_id == CLASSICAL_BASIS_ID => Ok(Code::classical()),
            CODE_CLASSICAL => Err(Error::BasisMismatch {
                expected: CLASSICAL_BASIS_ID.into(),
                found: basis_id.into(),
            }),
            _ => Err(Error::UnknownCode(id.to_string())),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn basis(&self) -> &Arc<GateBasis> {
        &self.basis
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn addressing(&self) -> Addressing {
        self.addressing
    }

    pub fn gate_word(&self, gate: &str) -> Option<Vec<&str>> {
        let i = self.basis.index_of(gate)?;
        Some(self.gate_words[i].iter().map(|&s| self.alphabet[s].as_str()).collect())
    }

    /// `⌈log₂ |alphabet|⌉`.
    pub fn bits_per_symbol(&self) -> usize {
        address_width(self.alphabet.len()).max(1)
    }

    fn word_text(&self, word: &[usize]) -> String {
        word.iter()
            .map(|&s| self.alphabet[s].as_str())
            .collect::<Vec<_>>()
            .join("")
    }

    /// Structural entries (`NEWLINE`, digits) followed by gate words, each as
    /// `(name, word)`.
    fn dictionary_entries(&self) -> Vec<(String, String)> {
        let mut out = vec![("NEWLINE".to_string(), self.alphabet[self.newline].clone())];
        if let Some([d0, d1]) = self.digits {
            out.push(("DIGIT0".into(), self.alphabet[d0].clone()));
            out.push(("DIGIT1".into(), self.alphabet[d1].clone()));
        }
        for (g, w) in self.basis.gates().iter().zip(&self.gate_words) {
            out.push((g.name().to_string(), self.word_text(w)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedString {
    code_id: String,
    basis_id: String,
    symbols: Vec<usize>,
    bits_per_symbol: usize,
    /// Free-form provenance label of the circuit this string came from.
    pub source_circuit_id: String,
}

impl EncodedString {
    pub fn code_id(&self) -> &str {
        &self.code_id
    }

    pub fn basis_id(&self) -> &str {
        &self.basis_id
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Symbol count × bits per symbol.
    pub fn raw_bits(&self) -> usize {
        self.symbols.len() * self.bits_per_symbol
    }

    /// Symbol indices packed most significant bit first, zero padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = BitWriter::default();
        for &s in &self.symbols {
            w.push(s as u64, self.bits_per_symbol);
        }
        w.finish()
    }

    /// Space-separated symbol tokens.
    pub fn to_ascii(&self, code: &Code) -> String {
        self.symbols
            .iter()
            .map(|&s| code.alphabet[s].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn from_ascii(text: &str, code: &Code) -> Result<EncodedString> {
        let symbols = text
            .split_whitespace()
            .enumerate()
            .map(|(i, tok)| {
                code.alphabet
                    .iter()
                    .position(|a| a == tok)
                    .ok_or_else(|| Error::Decode {
                        index: i,
                        message: format!("`{tok}` is not in the alphabet of code `{}`", code.id),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EncodedString {
            code_id: code.id.clone(),
            basis_id: code.basis.id().to_string(),
            symbols,
            bits_per_symbol: code.bits_per_symbol(),
            source_circuit_id: String::new(),
        })
    }
}

#[derive(Default)]
pub(crate) struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    filled: usize,
}

impl BitWriter {
    pub(crate) fn push(&mut self, value: u64, width: usize) {
        for i in (0..width).rev() {
            self.acc = (self.acc << 1) | ((value >> i) & 1);
            self.filled += 1;
            if self.filled == 8 {
                self.bytes.push(self.acc as u8);
                self.acc = 0;
                self.filled = 0;
            }
        }
    }

    pub(crate) fn finish(mut self) -> Vec<u8> {
        if self.filled > 0 {
            self.bytes.push((self.acc << (8 - self.filled)) as u8);
        }
        self.bytes
    }
}

fn binary_digits(value: usize, width: usize) -> impl Iterator<Item = usize> {
    (0..width).rev().map(move |i| (value >> i) & 1)
}

/// Encodes `c` under `code`; every gate must have a word.
pub fn encode(c: &Circuit, code: &Code) -> Result<EncodedString> {
    if c.basis().id() != code.basis.id() {
        return Err(Error::BasisMismatch {
            expected: code.basis.id().to_string(),
            found: c.basis().id().to_string(),
        });
    }
    let mut symbols = Vec::new();
    match (code.addressing, code.digits) {
        (Addressing::FixedWidthBinary, Some(digits)) => {
            let n = c.num_qubits();
            let header = usize::BITS as usize - n.leading_zeros() as usize;
            symbols.extend(binary_digits(n, header).map(|b| digits[b]));
            symbols.push(code.newline);
            let width = address_width(n);
            for op in c.ops() {
                symbols.extend(&code.gate_words[op.gate]);
                for &t in &op.targets {
                    symbols.extend(binary_digits(t, width).map(|b| digits[b]));
                }
                symbols.push(code.newline);
            }
        }
        _ => {
            if c.len() != c.num_qubits()
                || c.ops().iter().enumerate().any(|(i, op)| op.targets != [i])
            {
                return Err(Error::Unrepresentable {
                    code: code.id.clone(),
                    reason: "positional code needs exactly one op on each qubit, in order".into(),
                });
            }
            for op in c.ops() {
                symbols.extend(&code.gate_words[op.gate]);
                symbols.push(code.newline);
            }
        }
    }
    Ok(EncodedString {
        code_id: code.id.clone(),
        basis_id: code.basis.id().to_string(),
        symbols,
        bits_per_symbol: code.bits_per_symbol(),
        source_circuit_id: String::new(),
    })
}

struct Reader<'a> {
    symbols: &'a [usize],
    pos: usize,
}

impl Reader<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Decode {
            index: self.pos,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<usize> {
        let s = *self
            .symbols
            .get(self.pos)
            .ok_or_else(|| self.err("unexpected end of string"))?;
        self.pos += 1;
        Ok(s)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.symbols.len()
    }

    fn gate(&mut self, code: &Code) -> Result<usize> {
        let start = self.pos;
        let mut word = Vec::new();
        loop {
            word.push(self.next()?);
            if let Some(g) = code.gate_words.iter().position(|w| *w == word) {
                return Ok(g);
            }
            if !code.gate_words.iter().any(|w| w.starts_with(&word)) {
                self.pos = start;
                return Err(self.err("no gate word starts here"));
            }
        }
    }

    fn digit(&mut self, digits: [usize; 2]) -> Result<usize> {
        let s = self.next()?;
        digits.iter().position(|&d| d == s).ok_or_else(|| {
            self.pos -= 1;
            self.err("expected a binary digit")
        })
    }

    fn newline(&mut self, code: &Code) -> Result<()> {
        if self.next()? != code.newline {
            self.pos -= 1;
            return Err(self.err("expected a newline symbol"));
        }
        Ok(())
    }
}

/// Inverse of [`encode`]; errors carry the offending symbol index.
pub fn decode(s: &EncodedString, code: &Code) -> Result<Circuit> {
    if s.code_id != code.id {
        return Err(Error::BasisMismatch {
            expected: code.id.clone(),
            found: s.code_id.clone(),
        });
    }
    if let Some(&bad) = s.symbols.iter().find(|&&x| x >= code.alphabet.len()) {
        return Err(Error::Decode {
            index: s.symbols.iter().position(|&x| x == bad).unwrap(),
            message: format!("symbol {bad} outside the alphabet"),
        });
    }
    let mut r = Reader {
        symbols: &s.symbols,
        pos: 0,
    };
    match (code.addressing, code.digits) {
        (Addressing::FixedWidthBinary, Some(digits)) => {
            let mut n = 0usize;
            let mut any = false;
            while !r.at_end() && r.symbols[r.pos] != code.newline {
                let d = r.digit(digits)?;
                n = n
                    .checked_mul(2)
                    .map(|n| n + d)
                    .ok_or_else(|| r.err("qubit count overflows"))?;
                any = true;
            }
            r.newline(code)?;
            if !any || n == 0 {
                return Err(Error::Decode {
                    index: 0,
                    message: "missing qubit count".into(),
                });
            }
            let width = address_width(n);
            let mut c = Circuit::new(n, code.basis.clone());
            while !r.at_end() {
                let op_start = r.pos;
                let g = r.gate(code)?;
                let arity = code.basis.gate(g).arity();
                let mut targets = Vec::with_capacity(arity);
                for _ in 0..arity {
                    let mut t = 0;
                    for _ in 0..width {
                        t = 2 * t + r.digit(digits)?;
                    }
                    targets.push(t);
                }
                r.newline(code)?;
                c.push_index(g, &targets).map_err(|e| Error::Decode {
                    index: op_start,
                    message: e.to_string(),
                })?;
            }
            Ok(c)
        }
        _ => {
            let mut gates = Vec::new();
            while !r.at_end() {
                gates.push(r.gate(code)?);
                r.newline(code)?;
            }
            if gates.is_empty() {
                return Err(r.err("empty string"));
            }
            let mut c = Circuit::new(gates.len(), code.basis.clone());
            for (q, g) in gates.into_iter().enumerate() {
                c.push_index(g, &[q])?;
            }
            Ok(c)
        }
    }
}

/// Word-by-word correspondence between two codes over one basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationDictionary {
    pub pairs: Vec<(String, String)>,
    pub size_bits: usize,
}

impl TranslationDictionary {
    /// Between `from` and `to`; empty when the codes are identical.
    pub fn between(from: &Code, to: &Code) -> TranslationDictionary {
        if from == to {
            return TranslationDictionary {
                pairs: Vec::new(),
                size_bits: 0,
            };
        }
        let to_entries: BTreeMap<String, String> = to.dictionary_entries().into_iter().collect();
        let pairs: Vec<(String, String)> = from
            .dictionary_entries()
            .into_iter()
            .filter_map(|(name, w)| to_entries.get(&name).map(|tw| (w, tw.clone())))
            .collect();
        let mut d = TranslationDictionary {
            pairs,
            size_bits: 0,
        };
        d.size_bits = d.to_text().len() * 8;
        d
    }

    /// One `fromWord toWord` pair per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (a, b) in &self.pairs {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }
}

/// Re-expresses `s` from one code in another over the same basis.
pub fn translate(
    s: &EncodedString,
    from: &Code,
    to: &Code,
) -> Result<(EncodedString, TranslationDictionary)> {
    if from.basis.id() != to.basis.id() {
        return Err(Error::BasisMismatch {
            expected: from.basis.id().to_string(),
            found: to.basis.id().to_string(),
        });
    }
    let circuit = decode(s, from)?;
    let mut out = encode(&circuit, to)?;
    out.source_circuit_id = s.source_circuit_id.clone();
    Ok((out, TranslationDictionary::between(from, to)))
}

/// Circuit of `N` on qubits where `x` has a 1 and `I` elsewhere, written in
/// the `{I, N, L}` code.
pub fn embed_classical(x: &[bool]) -> Result<(Circuit, EncodedString)> {
    if x.is_empty() {
        return Err(Error::Domain("cannot embed an empty string".into()));
    }
    let mut c = Circuit::new(x.len(), classical_basis());
    for (q, &bit) in x.iter().enumerate() {
        c.push(if bit { "N" } else { "I" }, &[q])?;
    }
    let mut s = encode(&c, &Code::classical())?;
    s.source_circuit_id = format!("embed:{}", x.len());
    Ok((c, s))
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.trim()
        .chars()
        .enumerate()
        .map(|(i, ch)| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse {
                line: 1,
                message: format!("character {i} is not a bit: `{ch}`"),
            }),
        })
        .collect()
}

/// Bits packed most significant first, zero padded.
pub fn pack_bits(x: &[bool]) -> Vec<u8> {
    let mut w = BitWriter::default();
    for &b in x {
        w.push(b as u64, 1);
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{graph_basis, standard_basis};
    use crate::statevec::StateVector;
    use proptest::prelude::*;

    #[test]
    fn classical_embedding_string() {
        let x = parse_bits("10110100").unwrap();
        let (c, s) = embed_classical(&x).unwrap();
        assert_eq!(s.to_ascii(&Code::classical()), "N L I L N L N L I L N L I L I L");
        assert_eq!(s.len(), 16);
        assert_eq!(s.raw_bits(), 32);
        let state = c.run().unwrap();
        assert_eq!(state, StateVector::basis_state(8, 180).unwrap());
        assert_eq!(decode(&s, &Code::classical()).unwrap(), c);
        // I = 00, N = 01, L = 10
        assert_eq!(s.to_bytes()[0], 0b0110_0010);
    }

    #[test]
    fn all_zero_embedding() {
        let (c, s) = embed_classical(&[false, false]).unwrap();
        assert_eq!(s.to_ascii(&Code::classical()), "I L I L");
        assert_eq!(c.run().unwrap(), StateVector::zero_state(2).unwrap());
        assert!(embed_classical(&[]).is_err());
    }

    #[test]
    fn empty_circuit_is_header_only() {
        let code = Code::one_symbol(standard_basis());
        let s = encode(&Circuit::new(3, standard_basis()), &code).unwrap();
        assert_eq!(s.to_ascii(&code), "1 1 L");
        assert_eq!(decode(&s, &code).unwrap(), Circuit::new(3, standard_basis()));
    }

    #[test]
    fn triangle_word_count() {
        let (b, _) = graph_basis();
        let mut c = Circuit::new(3, b.clone());
        for q in 0..3 {
            c.push("H", &[q]).unwrap();
        }
        for (a, t) in [(0, 1), (0, 2), (1, 2)] {
            c.push("CZ", &[a, t]).unwrap();
        }
        let code = Code::one_symbol(b);
        let s = encode(&c, &code).unwrap();
        let gate_symbols = s
            .symbols()
            .iter()
            .filter(|&&x| matches!(code.alphabet()[x].as_str(), "H" | "CZ"))
            .count();
        assert_eq!(gate_symbols, 6);
        // header "11 L"; each op: word, 2 digits per target, newline
        assert_eq!(s.len(), 3 + 3 * (1 + 2 + 1) + 3 * (1 + 4 + 1));
    }

    #[test]
    fn code_layouts() {
        let a = Code::one_symbol(standard_basis());
        let b = Code::two_symbol(standard_basis());
        assert_eq!(a.bits_per_symbol(), 3);
        assert_eq!(b.bits_per_symbol(), 3);
        assert_eq!(b.gate_word("H").unwrap(), ["a", "a"]);
        assert_eq!(b.gate_word("CNOT").unwrap(), ["b", "b"]);
        assert_eq!(Code::classical().bits_per_symbol(), 2);
        assert_eq!(address_width(1), 0);
        assert_eq!(address_width(2), 1);
        assert_eq!(address_width(5), 3);
    }

    #[test]
    fn truncated_string_reports_position() {
        let code = Code::one_symbol(standard_basis());
        let c = Circuit::from_ops(2, standard_basis(), [("H", &[0][..]), ("CNOT", &[0, 1][..])])
            .unwrap();
        let s = encode(&c, &code).unwrap();
        let cut = EncodedString {
            symbols: s.symbols()[..s.len() - 2].to_vec(),
            ..s.clone()
        };
        match decode(&cut, &code) {
            Err(Error::Decode { index, .. }) => assert_eq!(index, s.len() - 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn translation() {
        let a = Code::one_symbol(standard_basis());
        let b = Code::two_symbol(standard_basis());
        let (s, d) = translate(
            &encode(&Circuit::new(1, standard_basis()), &a).unwrap(),
            &a,
            &a,
        )
        .unwrap();
        assert_eq!(d.size_bits, 0);
        assert_eq!(decode(&s, &a).unwrap(), Circuit::new(1, standard_basis()));

        let mut sizes = Vec::new();
        for len in [5, 50] {
            let mut c = Circuit::new(2, standard_basis());
            for i in 0..len {
                match i % 3 {
                    0 => c.push("H", &[i % 2]).unwrap(),
                    1 => c.push("T", &[0]).unwrap(),
                    _ => c.push("CNOT", &[1, 0]).unwrap(),
                }
            }
            let (t, d) = translate(&encode(&c, &a).unwrap(), &a, &b).unwrap();
            assert_eq!(decode(&t, &b).unwrap(), c);
            sizes.push(d.size_bits);
        }
        assert_eq!(sizes[0], sizes[1]);
        assert!(sizes[0] > 0);
        assert!(matches!(
            translate(
                &encode(&Circuit::new(1, standard_basis()), &a).unwrap(),
                &a,
                &Code::classical()
            ),
            Err(Error::BasisMismatch { .. })
        ));
    }

    #[test]
    fn ascii_round_trip() {
        let code = Code::two_symbol(standard_basis());
        let c = Circuit::from_ops(3, standard_basis(), [("T", &[2][..]), ("CNOT", &[2, 0][..])])
            .unwrap();
        let s = encode(&c, &code).unwrap();
        let text = s.to_ascii(&code);
        let back = EncodedString::from_ascii(&text, &code).unwrap();
        assert_eq!(decode(&back, &code).unwrap(), c);
        assert!(EncodedString::from_ascii("1 1 L x", &code).is_err());
    }

    fn arb_circuit() -> impl Strategy<Value = Circuit> {
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec((0usize..4, 0..n, 0..n), 0..=50).prop_map(move |ops| {
                let mut c = Circuit::new(n, standard_basis());
                for (g, a, t) in ops {
                    if g == 3 {
                        if n > 1 {
                            let t = if a == t { (t + 1) % n } else { t };
                            c.push_index(3, &[a, t]).unwrap();
                        }
                    } else {
                        c.push_index(g, &[a]).unwrap();
                    }
                }
                c
            })
        })
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(c in arb_circuit()) {
            for code in [Code::one_symbol(standard_basis()), Code::two_symbol(standard_basis())] {
                let s = encode(&c, &code).unwrap();
                prop_assert_eq!(decode(&s, &code).unwrap(), c.clone());
            }
        }

        #[test]
        fn embedding_is_exact(x in proptest::collection::vec(any::<bool>(), 1..=16)) {
            let (c, s) = embed_classical(&x).unwrap();
            prop_assert_eq!(s.len(), 2 * x.len());
            let idx = x.iter().fold(0usize, |acc, &b| 2 * acc + b as usize);
            let got = c.run().unwrap();
            prop_assert_eq!(got.fidelity(&StateVector::basis_state(x.len(), idx).unwrap()).unwrap(), 1.0);
        }
    }
}
