//! Closed-form dynamics of the resonant k-photon Jaynes-Cummings model.
//!
//! Starting from `|alpha> (x) |e>`, the joint state at scaled time `tau` is
//!
//! ```text
//! |Psi(tau)> = sum_n C_n ( cos(W_n tau) |n, e> - i sin(W_n tau) |n + k, g> )
//! ```
//!
//! with `W_n` the generalized Rabi frequency. Both reduced density operators
//! follow from the two amplitude vectors without forming any dense matrix.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{coherent_state, norm_sqr, FieldState, TailReport};
use crate::tau::Tau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RabiMode {
    /// `sqrt((n+1)(n+2)...(n+k))`.
    Exact,
    /// `n^2 + 5n + 5`, the large-n expansion for k = 4 kept to O(1).
    Quadratic,
}

impl fmt::Display for RabiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RabiMode::Exact => "exact",
            RabiMode::Quadratic => "quadratic",
        })
    }
}

impl FromStr for RabiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(RabiMode::Exact),
            "quadratic" => Ok(RabiMode::Quadratic),
            _ => Err(Error::parse(s, "expected 'exact' or 'quadratic'")),
        }
    }
}

/// Generalized Rabi frequency of the `n`-photon sector.
pub fn rabi_frequency(n: usize, k: u32, mode: RabiMode) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    match mode {
        RabiMode::Exact => {
            let product: f64 = (1..=k as usize).map(|j| (n + j) as f64).product();
            Ok(product.sqrt())
        }
        RabiMode::Quadratic if k == 4 => {
            let n = n as f64;
            Ok(n * n + 5.0 * n + 5.0)
        }
        RabiMode::Quadratic => Err(Error::QuadraticRequiresK4(k)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub k: u32,
    pub alpha: C64,
    pub cutoff: usize,
    pub mode: RabiMode,
    pub tail_tol: f64,
}

impl ModelParams {
    pub fn new(k: u32, alpha: C64, cutoff: usize, mode: RabiMode, tail_tol: f64) -> Result<Self> {
        let params = Self { k, alpha, cutoff, mode, tail_tol };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if self.cutoff < self.k as usize {
            return Err(Error::InvalidParams(format!("cutoff {} must be at least k = {}", self.cutoff, self.k)));
        }
        if self.mode == RabiMode::Quadratic && self.k != 4 {
            return Err(Error::QuadraticRequiresK4(self.k));
        }
        if self.tail_tol.is_nan() || self.tail_tol <= 0.0 {
            return Err(Error::NonPositiveTolerance(self.tail_tol));
        }
        Ok(())
    }

    pub fn nbar(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

/// Model parameters together with the precomputed `C_n` and `W_n`.
#[derive(Clone, Debug)]
pub struct Model {
    params: ModelParams,
    coefficients: FieldState,
    tail: TailReport,
    frequencies: Vec<f64>,
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let (coefficients, tail) = coherent_state(params.alpha, params.cutoff, params.tail_tol)?;
        let frequencies =
            (0..=params.cutoff).map(|n| rabi_frequency(n, params.k, params.mode)).collect::<Result<_>>()?;
        Ok(Self { params, coefficients, tail, frequencies })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// The initial coherent amplitudes `C_n`.
    pub fn coefficients(&self) -> &FieldState {
        &self.coefficients
    }

    pub fn tail_report(&self) -> TailReport {
        self.tail
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Quadratic frequencies are integers and allow exact phase reduction.
    pub(crate) fn integral_frequencies(&self) -> bool {
        self.params.mode == RabiMode::Quadratic
    }

    pub fn evolve(&self, tau: impl Into<Tau>) -> JointState {
        let tau = tau.into();
        let k = self.params.k as usize;
        let len = self.params.cutoff + 1;
        let integral = self.integral_frequencies();
        let mut excited = Vec::with_capacity(len);
        let mut ground = vec![C64::default(); len];
        for (n, (c, &w)) in self.coefficients.amplitudes().iter().zip(&self.frequencies).enumerate() {
            let (cos, sin) = tau.cos_sin(w, integral);
            excited.push(c * cos);
            if n + k < len {
                ground[n + k] = c * C64::new(0.0, -sin);
            }
        }
        JointState { excited, ground, tau, k }
    }
}

/// Joint atom-field state `Psi(tau)`: amplitudes of `|n, e>` and `|n, g>`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    excited: Vec<C64>,
    ground: Vec<C64>,
    tau: Tau,
    k: usize,
}

impl JointState {
    /// Validates the invariants: equal lengths, unit norm, no ground population below `k`.
    pub fn from_parts(excited: Vec<C64>, ground: Vec<C64>, tau: Tau, k: usize) -> Result<Self> {
        if excited.len() != ground.len() || excited.is_empty() {
            return Err(Error::CutoffMismatch {
                left: excited.len().saturating_sub(1),
                right: ground.len().saturating_sub(1),
            });
        }
        let norm = norm_sqr(&excited) + norm_sqr(&ground);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        if ground.iter().take(k).any(|g| g.norm_sqr() > 0.0) {
            return Err(Error::InvalidParams(format!("ground amplitudes below k = {k} must vanish")));
        }
        Ok(Self { excited, ground, tau, k })
    }

    pub fn excited(&self) -> &[C64] {
        &self.excited
    }

    pub fn ground(&self) -> &[C64] {
        &self.ground
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cutoff(&self) -> usize {
        self.excited.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.excited) + norm_sqr(&self.ground)
    }
}

/// Convenience wrapper building a [`Model`] for a single evaluation.
pub fn evolve(params: &ModelParams, tau: impl Into<Tau>) -> Result<JointState> {
    let tau = tau.into();
    if !tau.is_finite() {
        return Err(Error::InvalidParams("tau must be finite".into()));
    }
    Ok(Model::new(*params)?.evolve(tau))
}

/// Reduced atomic density matrix in the basis `(|g>, |e>)`.
///
/// `rho12` is the coefficient of `|g><e|`, i.e. `sum_n g_n conj(e_n)` with the
/// `-i` of the ground amplitudes kept. The same sum without that factor is
/// [`AtomDensity::rho12_unphased`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomDensity {
    /// Ground-state population.
    pub rho11: f64,
    /// Excited-state population.
    pub rho22: f64,
    pub rho12: C64,
}

impl AtomDensity {
    pub fn rho21(&self) -> C64 {
        self.rho12.conj()
    }

    /// `i * rho12`: the coherence with the ground-branch `-i` removed.
    pub fn rho12_unphased(&self) -> C64 {
        C64::new(0.0, 1.0) * self.rho12
    }

    /// Eigenvalues `(pi_+, pi_-)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let d = self.rho22 - self.rho11;
        let root = (d * d + 4.0 * self.rho12.norm_sqr()).sqrt();
        let trace = self.rho11 + self.rho22;
        (0.5 * (trace + root), 0.5 * (trace - root))
    }

    /// `rho22 - rho11`.
    pub fn inversion(&self) -> f64 {
        self.rho22 - self.rho11
    }
}

pub fn atom_density(state: &JointState) -> AtomDensity {
    AtomDensity {
        rho11: norm_sqr(&state.ground),
        rho22: norm_sqr(&state.excited),
        rho12: state.ground.iter().zip(&state.excited).map(|(g, e)| g * e.conj()).sum(),
    }
}

/// Field density operator as the sum of two dyads, `|u><u| + |v><v|`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldRank2 {
    u: Vec<C64>,
    v: Vec<C64>,
}

impl FieldRank2 {
    pub fn from_vectors(u: Vec<C64>, v: Vec<C64>) -> Result<Self> {
        if u.len() != v.len() || u.is_empty() {
            return Err(Error::CutoffMismatch { left: u.len().saturating_sub(1), right: v.len().saturating_sub(1) });
        }
        let norm = norm_sqr(&u) + norm_sqr(&v);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { u, v })
    }

    /// `u_n = C_n cos(W_n tau)`.
    pub fn u(&self) -> &[C64] {
        &self.u
    }

    /// `v_{n+k} = C_n sin(W_n tau)`.
    pub fn v(&self) -> &[C64] {
        &self.v
    }

    pub fn cutoff(&self) -> usize {
        self.u.len() - 1
    }

    /// Gram matrix `[[<u|u>, <u|v>], [<v|u>, <v|v>]]`; its eigenvalues are
    /// the nonzero eigenvalues of the field density operator.
    pub fn gram(&self) -> [[C64; 2]; 2] {
        let uv: C64 = self.u.iter().zip(&self.v).map(|(a, b)| a.conj() * b).sum();
        [[C64::new(norm_sqr(&self.u), 0.0), uv], [uv.conj(), C64::new(norm_sqr(&self.v), 0.0)]]
    }

    /// `Tr(rho_F^2)`.
    pub fn purity(&self) -> f64 {
        let g = self.gram();
        g[0][0].re.powi(2) + g[1][1].re.powi(2) + 2.0 * g[0][1].norm_sqr()
    }

    /// Diagonal `<n|rho_F|n>`.
    pub fn diagonal(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect()
    }
}

/// The field dyads of `state`; the `-i` on the ground branch is dropped since
/// it does not change `|v><v|`.
pub fn field_rank2(state: &JointState) -> FieldRank2 {
    let i = C64::new(0.0, 1.0);
    FieldRank2 { u: state.excited.clone(), v: state.ground.iter().map(|g| g * i).collect() }
}
