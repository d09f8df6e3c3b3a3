//! Brute-force propagation of the full atom-field Hamiltonian
//! `H = a^k sigma_+ + (a^dagger)^k sigma_-`, shared by the oracle tests.
#![allow(dead_code)]

use jcm_core::dynamics::{atom_density, evolve, ModelParams, RabiMode};
use jcm_core::fock::coherent_state;
use jcm_core::observables::{entropy, pnd, von_neumann};
use jcm_core::{Tau, C64};
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub struct DenseModel {
    /// Fock cutoff of the model under test.
    pub n: usize,
    pub k: usize,
    /// Fock states kept by the dense model: enough that every `|n <= N, e>` has its partner.
    pub d: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
    psi0: DVector<C64>,
}

/// Largest discrepancies between the model and dense propagation at one time.
#[derive(Clone, Copy, Debug, Default)]
pub struct Discrepancy {
    pub amplitude: f64,
    pub pnd: f64,
    pub entropy: f64,
}

impl Discrepancy {
    pub fn max(self, other: Self) -> Self {
        Self {
            amplitude: self.amplitude.max(other.amplitude),
            pnd: self.pnd.max(other.pnd),
            entropy: self.entropy.max(other.entropy),
        }
    }
}

impl DenseModel {
    /// Basis ordering: index `n` is `|n, e>`, index `d + n` is `|n, g>`.
    pub fn new(alpha: C64, n: usize, k: usize) -> Self {
        let d = n + k + 1;
        let mut h = DMatrix::<f64>::zeros(2 * d, 2 * d);
        for m in 0..d - k {
            let coupling = ((m + 1)..=(m + k)).map(|j| j as f64).product::<f64>().sqrt();
            h[(m, d + m + k)] = coupling;
            h[(d + m + k, m)] = coupling;
        }
        let eig = h.symmetric_eigen();
        let (coherent, _) = coherent_state(alpha, n, 1e-9).unwrap();
        let mut psi0 = DVector::zeros(2 * d);
        for (m, c) in coherent.amplitudes().iter().enumerate() {
            psi0[m] = *c;
        }
        Self { n, k, d, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors.map(|x| C64::new(x, 0.0)), psi0 }
    }

    pub fn propagate(&self, tau: f64) -> DVector<C64> {
        let v = &self.eigenvectors;
        let phases = DMatrix::from_diagonal(&self.eigenvalues.map(|l| C64::from_polar(1.0, -l * tau)));
        v * phases * v.transpose() * &self.psi0
    }

    /// `rho_F = Tr_atom |psi><psi|`.
    pub fn field_density(&self, psi: &DVector<C64>) -> DMatrix<C64> {
        let e = psi.rows(0, self.d).into_owned();
        let g = psi.rows(self.d, self.d).into_owned();
        &e * e.adjoint() + &g * g.adjoint()
    }

    pub fn compare(&self, params: &ModelParams, tau: f64) -> Discrepancy {
        let dense = self.propagate(tau);
        let state = evolve(params, Tau::new(tau)).unwrap();
        let mut out = Discrepancy::default();
        for m in 0..=self.n {
            out.amplitude = out
                .amplitude
                .max((state.excited()[m] - dense[m]).norm())
                .max((state.ground()[m] - dense[self.d + m]).norm());
        }
        let rho_f = self.field_density(&dense);
        let p = pnd(&state);
        for m in 0..=self.n {
            out.pnd = out.pnd.max((p.get(m) - rho_f[(m, m)].re).abs());
        }
        let eigs: Vec<f64> = rho_f.symmetric_eigen().eigenvalues.iter().copied().collect();
        out.entropy = (von_neumann(&eigs) - entropy(&atom_density(&state))).abs();
        out
    }
}

pub fn small_params() -> ModelParams {
    ModelParams::new(4, C64::new(2.0, 0.0), 32, RabiMode::Exact, 1e-9).unwrap()
}

pub fn random_taus(count: usize) -> Vec<f64> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    (0..count).map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI)).collect()
}
