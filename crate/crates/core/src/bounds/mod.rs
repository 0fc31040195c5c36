//! Computable upper bounds on preparation complexity.
//!
//! Every number here bounds the true description length from above; none of
//! them is the (uncomputable) complexity itself. Bits throughout, logs base 2.

mod candidates;
mod counting;
mod formula;

pub use candidates::{
    min_over_candidates, CandidateGenerator, CandidateOutcome, CandidateReport, EmptyCircuit,
    GenericPreparation, GraphPreparation, ProductPreparation,
};
pub use counting::{
    incompressible_fraction, noncomplex_fraction, toy_machine_census, vitanyi_bound, Instruction,
    NoncomplexFraction, ToyCensus, ToyMachine, VitanyiBound, TOY_CENSUS_CAP,
};
pub use formula::{formula_bounds, formula_kinds, Formula};

use std::fmt;

use crate::compress::Compressor;
use crate::encode::EncodedString;

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    RawLength,
    Compressed,
    MinOverCandidates,
    /// Closed-form bound; carries the formula name.
    Formula(&'static str),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::RawLength => f.write_str("raw_length"),
            Method::Compressed => f.write_str("compressed"),
            Method::MinOverCandidates => f.write_str("min_over_candidates"),
            Method::Formula(name) => write!(f, "formula:{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityEstimate {
    pub bits: f64,
    pub method: Method,
    pub epsilon: Option<f64>,
    pub basis_id: String,
    pub code_id: String,
    pub candidate_count: usize,
    pub compressor_id: Option<String>,
    /// Compressed size of the empty input; reported, never subtracted.
    pub header_bits: usize,
    /// Named parts of the total, for formulas and split estimates.
    pub terms: Vec<(&'static str, f64)>,
}

impl ComplexityEstimate {
    fn from_string(s: &EncodedString, bits: f64, method: Method) -> Self {
        ComplexityEstimate {
            bits,
            method,
            epsilon: None,
            basis_id: s.basis_id().to_string(),
            code_id: s.code_id().to_string(),
            candidate_count: 1,
            compressor_id: None,
            header_bits: 0,
            terms: Vec::new(),
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }

    pub const CSV_HEADER: &'static str =
        "state_id,N,epsilon,method,bits,basis,code,candidate_count,compressor_id";

    pub fn csv_row(&self, state_id: &str, num_qubits: usize) -> String {
        format!(
            "{state_id},{num_qubits},{},{},{},{},{},{},{}",
            self.epsilon.map(|e| e.to_string()).unwrap_or_default(),
            self.method,
            self.bits,
            self.basis_id,
            self.code_id,
            self.candidate_count,
            self.compressor_id.as_deref().unwrap_or(""),
        )
    }
}

/// Symbol count × bits per symbol.
pub fn raw_length_bound(s: &EncodedString) -> ComplexityEstimate {
    ComplexityEstimate::from_string(s, s.raw_bits() as f64, Method::RawLength)
}

/// Compressed size of an empty input under `compressor`, in bits.
pub fn header_constant(compressor: &dyn Compressor) -> usize {
    compressor.compressed_bits(&[])
}

/// 8 × compressed length of the packed string.
pub fn compressed_bound(s: &EncodedString, compressor: &dyn Compressor) -> ComplexityEstimate {
    let bits = compressor.compressed_bits(&s.to_bytes());
    ComplexityEstimate {
        compressor_id: Some(compressor.id().to_string()),
        header_bits: header_constant(compressor),
        ..ComplexityEstimate::from_string(s, bits as f64, Method::Compressed)
    }
}
