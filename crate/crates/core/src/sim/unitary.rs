use num_complex::Complex64;

use super::StateVector;

/// Dense `2^n × 2^n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    num_qubits: usize,
    data: Vec<Complex64>,
}

/// Column-wise monomial structure: column `c` has its single nonzero entry
/// `phases[c]` at row `rows[c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub rows: Vec<usize>,
    pub phases: Vec<Complex64>,
}

impl Monomial {
    /// True when every nonzero entry carries the same phase within `tol`.
    pub fn has_common_phase(&self, tol: f64) -> bool {
        let first = self.phases[0];
        self.phases.iter().all(|p| (p - first).norm() <= tol)
    }
}

impl Unitary {
    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1 << num_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { num_qubits, data }
    }

    /// Builds a matrix from its columns.
    pub(crate) fn from_columns(num_qubits: usize, columns: Vec<StateVector>) -> Self {
        let dim = 1 << num_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.amplitudes().iter().enumerate() {
                data[r * dim + c] = *v;
            }
        }
        Self { num_qubits, data }
    }

    /// Row-major data; panics unless `data.len() == 4^num_qubits`.
    pub fn from_row_major(num_qubits: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), 1 << (2 * num_qubits));
        Self { num_qubits, data }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Unitary {
        let dim = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        Unitary {
            num_qubits: self.num_qubits,
            data,
        }
    }

    /// `self · other`.
    pub fn matmul(&self, other: &Unitary) -> Unitary {
        assert_eq!(self.num_qubits, other.num_qubits);
        let dim = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * dim..(k + 1) * dim];
                for (out, b) in data[r * dim..(r + 1) * dim].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        Unitary {
            num_qubits: self.num_qubits,
            data,
        }
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        let dim = self.dim();
        assert_eq!(state.dim(), dim);
        let amps = (0..dim)
            .map(|r| {
                self.data[r * dim..(r + 1) * dim]
                    .iter()
                    .zip(state.amplitudes())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        StateVector::from_amplitudes(amps).expect("power-of-two length")
    }

    pub fn max_abs_diff(&self, other: &Unitary) -> f64 {
        if self.num_qubits != other.num_qubits {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `U†U = I` elementwise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Unitary::identity(self.num_qubits))
            <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|r| (0..dim).all(|c| r == c || self.data[r * dim + c].norm() <= tol))
    }

    /// Exactly one unit-modulus entry per row and column, everything else
    /// zero within `tol`.
    pub fn monomial(&self, tol: f64) -> Option<Monomial> {
        let dim = self.dim();
        let mut rows = Vec::with_capacity(dim);
        let mut phases = Vec::with_capacity(dim);
        let mut seen = vec![false; dim];
        for c in 0..dim {
            let mut hit = None;
            for r in 0..dim {
                let v = self.data[r * dim + c];
                if v.norm() > tol {
                    if hit.is_some() || (v.norm() - 1.0).abs() > tol {
                        return None;
                    }
                    hit = Some((r, v));
                }
            }
            let (r, v) = hit?;
            if std::mem::replace(&mut seen[r], true) {
                return None;
            }
            rows.push(r);
            phases.push(v);
        }
        Some(Monomial { rows, phases })
    }

    /// A plain 0/1 permutation matrix within `tol`.
    pub fn is_permutation(&self, tol: f64) -> bool {
        self.monomial(tol).is_some_and(|m| {
            m.phases
                .iter()
                .all(|p| (p - Complex64::new(1.0, 0.0)).norm() <= tol)
        })
    }

    /// `self = e^{iγ} other` for some γ, elementwise within `tol`.
    pub fn equals_up_to_phase(&self, other: &Unitary, tol: f64) -> bool {
        if self.num_qubits != other.num_qubits {
            return false;
        }
        let Some((k, pivot)) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        else {
            return true;
        };
        if pivot.norm() < tol {
            return self.max_abs_diff(other) <= tol;
        }
        let phase = self.data[k] / pivot;
        let phase = phase / phase.norm();
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| (a - phase * b).norm() <= tol)
    }
}
