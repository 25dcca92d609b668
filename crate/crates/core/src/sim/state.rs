use std::fmt;

use num_complex::Complex64;

use super::SimError;

/// Dense amplitude vector of length `2^n`. Basis index bit `q` holds the
/// value of qubit `q` (qubit 0 is least significant).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, SimError> {
        if index >= 1 << num_qubits {
            return Err(SimError::BasisOutOfRange { index, num_qubits });
        }
        let mut state = Self::zero(num_qubits);
        state.amps.swap(0, index);
        Ok(state)
    }

    /// Basis state from a bit list where `bits[q]` is the value of qubit `q`.
    pub fn from_bits(bits: &[u8]) -> Result<Self, SimError> {
        Self::basis(bits.len(), bits_to_index(bits)?)
    }

    /// Wraps raw amplitudes. The length must be a power of two (at least 2);
    /// no normalization is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo(len));
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// The product state `|s⟩^{⊗n}` for a single-qubit state `s`.
    pub fn uniform_product(num_qubits: usize, single: [Complex64; 2]) -> Self {
        let amps = (0..1usize << num_qubits)
            .map(|i| {
                (0..num_qubits).fold(Complex64::new(1.0, 0.0), |acc, q| {
                    acc * single[(i >> q) & 1]
                })
            })
            .collect();
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rescales to unit norm and returns the norm found beforehand.
    pub fn normalize(&mut self) -> Result<f64, SimError> {
        let norm = self.norm();
        if norm < 1e-300 {
            return Err(SimError::ZeroNorm);
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(norm)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, SimError> {
        if self.dim() != other.dim() {
            return Err(SimError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `high ⊗ self`: `self` occupies the low qubits, `high` the qubits above.
    pub fn tensor(&self, high: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * high.dim());
        for h in &high.amps {
            amps.extend(self.amps.iter().map(|l| l * h));
        }
        StateVector {
            num_qubits: self.num_qubits + high.num_qubits,
            amps,
        }
    }

    /// The basis index this state equals (up to phase) when all but one
    /// amplitude vanish within `tol` in probability.
    pub fn as_basis_state(&self, tol: f64) -> Option<usize> {
        let (index, p) = self
            .amps
            .iter()
            .map(|a| a.norm_sqr())
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        (p >= 1.0 - tol).then_some(index)
    }

    /// Max elementwise distance.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(if self.dim() == other.dim() { 0.0 } else { f64::INFINITY }, f64::max)
    }
}

/// `|⟨a|b⟩|²`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, SimError> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

pub fn bits_to_index(bits: &[u8]) -> Result<usize, SimError> {
    bits.iter().enumerate().try_fold(0usize, |acc, (q, &b)| match b {
        0 => Ok(acc),
        1 => Ok(acc | 1 << q),
        other => Err(SimError::InvalidBit(other)),
    })
}

/// Bit list (`bits[q]` = qubit `q`) of a basis index.
pub fn index_to_bits(index: usize, num_qubits: usize) -> Vec<u8> {
    (0..num_qubits).map(|q| ((index >> q) & 1) as u8).collect()
}

/// Ket label with qubit 0 as the rightmost character.
pub fn bitstring(index: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for StateVector {
    /// `a|bits⟩ + …` over amplitudes that survive rounding to two decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_amplitudes(&self.amps, self.num_qubits))
    }
}

fn round2(x: f64) -> f64 {
    let r = (x * 100.0).round() / 100.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub(crate) fn render_amplitude(a: Complex64) -> String {
    let (re, im) = (round2(a.re), round2(a.im));
    if im == 0.0 {
        format!("{re:.2}")
    } else if re == 0.0 {
        format!("{im:.2}j")
    } else {
        format!("({re:.2}{im:+.2}j)")
    }
}

/// Renders amplitudes in the `0.71|011> + -0.71|101>` style used by test
/// reports. Terms that round to zero are omitted.
pub fn render_amplitudes(amps: &[Complex64], num_qubits: usize) -> String {
    let terms: Vec<String> = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| round2(a.re) != 0.0 || round2(a.im) != 0.0)
        .map(|(i, a)| format!("{}|{}>", render_amplitude(*a), bitstring(i, num_qubits)))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bits_little_endian() {
        assert_eq!(bits_to_index(&[1, 0, 0]).unwrap(), 1);
        assert_eq!(bits_to_index(&[1, 1, 1, 0]).unwrap(), 7);
        assert_eq!(index_to_bits(6, 3), vec![0, 1, 1]);
        assert_eq!(bitstring(1, 3), "001");
        assert!(bits_to_index(&[2]).is_err());
    }

    #[test]
    fn fidelity_cases() {
        let zero = StateVector::zero(1);
        let one = StateVector::basis(1, 1).unwrap();
        assert_eq!(fidelity(&zero, &zero).unwrap(), 1.0);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        let plus = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let phase = Complex64::from_polar(FRAC_1_SQRT_2, std::f64::consts::FRAC_PI_3);
        let shifted = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), phase]).unwrap();
        // ½ + ½cos(π/3)
        assert!((fidelity(&plus, &shifted).unwrap() - 0.75).abs() < 1e-12);
        assert!(fidelity(&zero, &StateVector::zero(2)).is_err());
    }

    #[test]
    fn global_phase_invariant() {
        let a = StateVector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let phase = Complex64::from_polar(1.0, 1.234);
        let b = StateVector::from_amplitudes(a.amplitudes().iter().map(|x| x * phase).collect())
            .unwrap();
        assert!((fidelity(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rendering() {
        let bell = StateVector::from_amplitudes(vec![
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        assert_eq!(bell.to_string(), "0.71|00> + -0.71|11>");
        assert_eq!(StateVector::zero(3).to_string(), "1.00|000>");
        assert_eq!(render_amplitude(c(0.0, 0.5)), "0.50j");
        assert_eq!(render_amplitude(c(0.35, -0.35)), "(0.35-0.35j)");
    }

    #[test]
    fn tensor_places_high() {
        let low = StateVector::basis(1, 1).unwrap();
        let high = StateVector::basis(2, 2).unwrap();
        assert_eq!(low.tensor(&high).as_basis_state(1e-12), Some(0b101));
    }

    #[test]
    fn uniform_product_plus() {
        let h = FRAC_1_SQRT_2;
        let s = StateVector::uniform_product(3, [c(h, 0.0), c(h, 0.0)]);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(s.amplitudes().iter().all(|a| (a.re - 0.125f64.sqrt()).abs() < 1e-12));
    }
}
