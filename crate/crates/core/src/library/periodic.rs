use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LibraryError;
use crate::sim::StateVector;

/// `ψ(n, r, l)`: uniform superposition over the indices `k` with
/// `k ≡ l (mod r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicStateSpec {
    pub n: usize,
    pub r: usize,
    pub l: usize,
}

impl PeriodicStateSpec {
    pub fn new(n: usize, r: usize, l: usize) -> Self {
        Self { n, r, l }
    }

    /// Basis indices carrying amplitude.
    pub fn support(&self) -> impl Iterator<Item = usize> {
        let r = self.r.max(1);
        (self.l..1usize << self.n).step_by(r)
    }
}

pub fn make_periodic_state(spec: &PeriodicStateSpec) -> Result<StateVector, LibraryError> {
    if spec.l >= spec.r {
        return Err(LibraryError::ShiftOutOfRange {
            shift: spec.l,
            period: spec.r,
        });
    }
    if spec.n < 1 {
        return Err(LibraryError::InvalidParameters {
            spec: format!("ψ({}, {}, {})", spec.n, spec.r, spec.l),
            reason: "needs at least one qubit".into(),
        });
    }
    let support: Vec<usize> = spec.support().collect();
    if support.is_empty() {
        return Err(LibraryError::InvalidParameters {
            spec: format!("ψ({}, {}, {})", spec.n, spec.r, spec.l),
            reason: "shift lies outside the register".into(),
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << spec.n];
    let amp = Complex64::new(1.0 / (support.len() as f64).sqrt(), 0.0);
    for k in support {
        amps[k] = amp;
    }
    Ok(StateVector::from_amplitudes(amps)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support_of(state: &StateVector) -> Vec<usize> {
        (0..state.dim())
            .filter(|&i| state.amplitudes()[i].norm() > 1e-12)
            .collect()
    }

    #[test]
    fn examples() {
        let s = make_periodic_state(&PeriodicStateSpec::new(3, 2, 1)).unwrap();
        assert_eq!(support_of(&s), vec![1, 3, 5, 7]);
        assert!((s.amplitudes()[3].re - 0.5).abs() < 1e-15);

        let s = make_periodic_state(&PeriodicStateSpec::new(3, 4, 2)).unwrap();
        assert_eq!(support_of(&s), vec![2, 6]);
        assert!((s.amplitudes()[6].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        let s = make_periodic_state(&PeriodicStateSpec::new(4, 1, 0)).unwrap();
        assert_eq!(support_of(&s).len(), 16);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_shift() {
        assert!(matches!(
            make_periodic_state(&PeriodicStateSpec::new(3, 2, 2)),
            Err(LibraryError::ShiftOutOfRange { shift: 2, period: 2 })
        ));
        assert!(make_periodic_state(&PeriodicStateSpec::new(2, 8, 5)).is_err());
    }
}
