use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::StateVector;

/// Probability below which a basis state is left off the sphere.
pub const QSPHERE_CUTOFF: f64 = 1e-12;

/// One basis state placed on the Q-sphere. Field names are the JSON export
/// schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QSphereNode {
    pub index: usize,
    pub probability: f64,
    /// Amplitude phase in `(−π, π]`.
    pub phase: f64,
    /// Hamming weight of the basis index.
    pub weight: usize,
    /// Latitude `1 − 2·weight/n`: `+1` at `|0…0⟩`, `−1` at `|1…1⟩`.
    pub z: f64,
    /// Position within the latitude ring in `[0, 2π)`.
    pub longitude: f64,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of indices below `index` sharing its Hamming weight (combinadic
/// rank).
fn rank_in_ring(index: usize) -> u128 {
    let mut rank = 0;
    let mut ones = 0;
    let mut bit = 0;
    let mut rest = index;
    while rest != 0 {
        if rest & 1 == 1 {
            ones += 1;
            rank += binomial(bit, ones);
        }
        rest >>= 1;
        bit += 1;
    }
    rank
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase % (2.0 * PI);
    if p <= -PI {
        p += 2.0 * PI;
    } else if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Projects a state onto the Q-sphere. States of equal Hamming weight sit on
/// one latitude ring, evenly spaced by ascending basis index among all
/// indices of that weight.
pub fn qsphere(state: &StateVector) -> Vec<QSphereNode> {
    let n = state.num_qubits();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() >= QSPHERE_CUTOFF)
        .map(|(index, a)| {
            let weight = index.count_ones() as usize;
            let ring = binomial(n, weight);
            QSphereNode {
                index,
                probability: a.norm_sqr(),
                phase: wrap_phase(a.im.atan2(a.re)),
                weight,
                z: if n == 0 { 1.0 } else { 1.0 - 2.0 * weight as f64 / n as f64 },
                longitude: 2.0 * PI * rank_in_ring(index) as f64 / ring as f64,
            }
        })
        .collect()
}
