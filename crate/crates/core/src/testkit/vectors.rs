//! JSON test-vector format: an array of `{"name", "input", "expected_output"}`
//! objects. Bit lists are 0/1 integers; amplitudes are `[re, im]` pairs (a
//! bare number is accepted as a real amplitude).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::sim::{render_amplitudes, SimError, StateVector};

/// Renormalization beyond this deviation is logged as a warning.
pub const NORM_WARN_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Pair([f64; 2]),
    Real(f64),
}

impl Amplitude {
    pub fn value(self) -> Complex64 {
        match self {
            Amplitude::Pair([re, im]) => Complex64::new(re, im),
            Amplitude::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CaseData {
    Bits(Vec<u8>),
    Amplitudes(Vec<Amplitude>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCase {
    pub name: String,
    pub input: CaseData,
    pub expected_output: CaseData,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VectorError {
    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl CaseData {
    pub fn from_state(state: &StateVector) -> Self {
        CaseData::Amplitudes(
            state
                .amplitudes()
                .iter()
                .map(|a| Amplitude::Pair([a.re, a.im]))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        match self {
            CaseData::Bits(b) => b.len(),
            CaseData::Amplitudes(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The bit list, if this is one.
    pub fn bits(&self) -> Option<&[u8]> {
        match self {
            CaseData::Bits(b) => Some(b),
            CaseData::Amplitudes(_) => None,
        }
    }

    /// Interprets the data as a statevector. With `num_qubits` known, an
    /// integer list of that length is a basis state and one of length
    /// `2^num_qubits` is a real amplitude vector; without it integer lists are
    /// basis states. Amplitudes are renormalized.
    pub fn to_state(&self, num_qubits: Option<usize>) -> Result<StateVector, VectorError> {
        let amps: Vec<Complex64> = match self {
            CaseData::Bits(bits) => {
                let as_amplitudes = num_qubits
                    .is_some_and(|n| bits.len() != n && bits.len() == 1usize << n);
                if !as_amplitudes {
                    return Ok(StateVector::from_bits(bits)?);
                }
                bits.iter().map(|&b| Complex64::new(b as f64, 0.0)).collect()
            }
            CaseData::Amplitudes(amps) => amps.iter().map(|a| a.value()).collect(),
        };
        let mut state = StateVector::from_amplitudes(amps)?;
        let norm = state.normalize()?;
        if (norm - 1.0).abs() > NORM_WARN_THRESHOLD {
            log::warn!("test vector norm {norm:.4} renormalized to 1");
        }
        Ok(state)
    }

    /// `[1, 0, 1]` for bit lists, `a|bits> + …` for amplitudes.
    pub fn render(&self) -> String {
        match self {
            CaseData::Bits(bits) => render_bits(bits),
            CaseData::Amplitudes(_) => match self.to_state(None) {
                Ok(state) => render_amplitudes(state.amplitudes(), state.num_qubits()),
                Err(e) => format!("<{e}>"),
            },
        }
    }
}

pub fn render_bits(bits: &[u8]) -> String {
    let parts: Vec<String> = bits.iter().map(u8::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub fn load_vectors(text: &str) -> Result<Vec<TestCase>, VectorError> {
    serde_json::from_str(text).map_err(|e| {
        // serde_json appends its own " at line L column C"
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        VectorError::Json {
            line: e.line(),
            column: e.column(),
            message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        }
    })
}

pub fn vectors_to_json(cases: &[TestCase]) -> String {
    serde_json::to_string_pretty(cases).expect("test cases always serialize")
}
