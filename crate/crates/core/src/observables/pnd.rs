//! Photon-number distribution of the cavity field.
//!
//! [`pnd`] reads the distribution off a simulated [`JointState`]. The
//! `pnd_closed_*` functions are independent closed forms for the quadratic
//! k = 4 model at `tau = pi/4`, `pi/8` and `pi/4 + delta`. They only see the
//! coherent moduli `|C_n|`, never the evolved state.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use serde::Serialize;

use crate::dynamics::JointState;
use crate::io::fmt_f64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pnd {
    pub probabilities: Vec<f64>,
    pub tau: f64,
}

impl Pnd {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn get(&self, n: usize) -> f64 {
        self.probabilities.get(n).copied().unwrap_or(0.0)
    }

    /// Largest entrywise deviation, padding the shorter vector with zeros.
    pub fn max_abs_diff(&self, other: &Pnd) -> f64 {
        let len = self.probabilities.len().max(other.probabilities.len());
        (0..len).map(|n| (self.get(n) - other.get(n)).abs()).fold(0.0, f64::max)
    }

    /// CSV with header `n,p`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p\n");
        for (n, p) in self.probabilities.iter().enumerate() {
            out.push_str(&format!("{n},{}\n", fmt_f64(*p)));
        }
        out
    }
}

/// `P_n = |excited_n|^2 + |ground_n|^2`.
pub fn pnd(state: &JointState) -> Pnd {
    Pnd {
        probabilities: state.excited().iter().zip(state.ground()).map(|(e, g)| e.norm_sqr() + g.norm_sqr()).collect(),
        tau: state.tau().value(),
    }
}

fn modulus_sqr(moduli: &[f64], n: isize) -> f64 {
    if n < 0 {
        return 0.0;
    }
    moduli.get(n as usize).map_or(0.0, |c| c * c)
}

/// `(n^2 - 3n + 1) pi / 4` reduced modulo `pi`: `+pi/4` for `n = 0, 3 (mod 4)`
/// and `-pi/4` for `n = 1, 2 (mod 4)`.
pub fn quarter_residue(n: usize) -> f64 {
    match n % 4 {
        0 | 3 => FRAC_PI_4,
        _ => -FRAC_PI_4,
    }
}

/// PND at `tau = pi/4` from the residue of `W_{n-4} pi / 4` modulo `pi`.
pub fn pnd_closed_quarter(n_max: usize, moduli: &[f64]) -> Pnd {
    let probabilities = (0..=n_max)
        .map(|n| {
            let r = quarter_residue(n);
            let (s, c) = r.sin_cos();
            modulus_sqr(moduli, n as isize) * c * c + modulus_sqr(moduli, n as isize - 4) * s * s
        })
        .collect();
    Pnd { probabilities, tau: FRAC_PI_4 }
}

/// `sin^2((n^2 - 3n + 1) pi / 8)`: `(2 - sqrt 2)/4` for `n mod 8` in `0..4`,
/// `(2 + sqrt 2)/4` otherwise.
pub fn eighth_factor(n: usize) -> f64 {
    if n % 8 < 4 {
        (2.0 - SQRT_2) / 4.0
    } else {
        (2.0 + SQRT_2) / 4.0
    }
}

/// PND at `tau = pi/8`: strongly oscillating in blocks of four.
pub fn pnd_closed_eighth(n_max: usize, moduli: &[f64]) -> Pnd {
    let probabilities = (0..=n_max)
        .map(|n| {
            let mass = modulus_sqr(moduli, n as isize) + modulus_sqr(moduli, n as isize - 4);
            mass * eighth_factor(n)
        })
        .collect();
    Pnd { probabilities, tau: PI / 8.0 }
}

/// Approximate PND at `tau = pi/4 + delta`,
/// `(|C_n|^2 + |C_{n-4}|^2) sin^2((n^2 - 3n + 1)(pi/4 + delta))`.
pub fn pnd_closed_near_quarter(n_max: usize, moduli: &[f64], delta: f64) -> Pnd {
    let tau = FRAC_PI_4 + delta;
    let probabilities = (0..=n_max)
        .map(|n| {
            let nf = n as f64;
            let mass = modulus_sqr(moduli, n as isize) + modulus_sqr(moduli, n as isize - 4);
            // Reduce the integer part of the quarter-turn phase before adding delta.
            let w = (n * n + 1) as i64 - 3 * n as i64;
            let quarter = (w.rem_euclid(8)) as f64 * FRAC_PI_4;
            let angle = quarter + (nf * nf - 3.0 * nf + 1.0) * delta;
            mass * angle.sin().powi(2)
        })
        .collect();
    Pnd { probabilities, tau }
}
