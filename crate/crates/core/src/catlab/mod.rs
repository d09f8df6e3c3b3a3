//! Special interaction times of the four-photon model and the pure field
//! states that appear at them.
//!
//! - `tau = m pi`: the field returns to the coherent state.
//! - `tau = pi/2`: the atom is in `|g>` and the field is the Kerr state
//!   `|-alpha, pi>` (on the ground branch, i.e. shifted up by four photons).
//! - `tau = pi/4 + delta_r`, `delta_r = r pi / (16 nbar)`, `r` odd: the
//!   entanglement nearly vanishes and the field is a superposition of two Kerr
//!   states.
//!
//! With `W_n = n^2 + 5n + 5` the ground-branch field at `theta = pi/4 + delta`
//! satisfies the exact identity
//!
//! ```text
//! sum_n C_n sin(W_n theta) |n>
//!   = (1/2i) [ e^{5i theta} |-i alpha e^{+6i delta},  pi/2 + 2 delta>
//!            - e^{-5i theta} | i alpha e^{-6i delta}, -pi/2 - 2 delta> ]
//! ```
//!
//! which is what [`expected_cat_state`] builds.

mod components;

pub use components::{count_components, ComponentReport};

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{atom_density, field_rank2, AtomDensity, JointState, Model, ModelParams};
use crate::error::{Error, Result};
use crate::fock::{fidelity, kerr_state, norm_sqr, overlap, FieldState};
use crate::observables::entropy;
use crate::tau::{linspace, Tau};

/// Offset `delta_r = r pi / (16 nbar)` of an entropy dip from `pi/4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DipOffset {
    pub r: i64,
    pub delta: f64,
    pub nbar: f64,
}

pub fn dip_offset(r: i64, nbar: f64) -> Result<DipOffset> {
    if r % 2 == 0 {
        return Err(Error::EvenR(r));
    }
    if !(nbar.is_finite() && nbar > 0.0) {
        return Err(Error::NonPositiveNbar(nbar));
    }
    Ok(DipOffset { r, delta: r as f64 * PI / (16.0 * nbar), nbar })
}

impl DipOffset {
    /// `pi/4 + delta_r`, exact when `nbar` is an integer.
    pub fn tau(&self) -> Tau {
        quarter_offset_tau(self.r, self.nbar)
    }
}

/// `pi/4 + m pi / (16 nbar)` for any integer `m` (gridlines, scan edges),
/// exact when `nbar` is an integer.
pub fn quarter_offset_tau(m: i64, nbar: f64) -> Tau {
    if nbar > 0.0 && nbar.fract() == 0.0 && nbar <= 1e12 {
        let nbar = nbar as i64;
        if let (Some(num), Some(den)) = (nbar.checked_mul(4).and_then(|x| x.checked_add(m)), nbar.checked_mul(16)) {
            return Tau::from_pi_multiple(Rational64::new(num, den));
        }
    }
    Tau::new(FRAC_PI_4 + m as f64 * PI / (16.0 * nbar))
}

/// Distance of `(W_n - W_{n-4})(pi/4 + delta_r)` from `pi/2` modulo `pi`,
/// using the quadratic frequencies `W_n - W_{n-4} = 8n + 4`.
pub fn dip_phase_residual(n: usize, offset: &DipOffset) -> f64 {
    // (8n + 4) pi / 4 = (2n + 1) pi vanishes modulo pi.
    let drift = (8 * n + 4) as f64 * offset.delta;
    (drift.rem_euclid(PI) - FRAC_PI_2).abs()
}

/// The Kerr state `|-alpha, pi>` expected on the ground branch at `tau = pi/2`,
/// written over unshifted Fock indices.
pub fn expected_kerr_state(alpha: C64, cutoff: usize, tail_tol: f64) -> Result<FieldState> {
    kerr_state(-alpha, PI, cutoff, tail_tol)
}

#[derive(Clone, Debug)]
pub struct CatState {
    pub state: FieldState,
    /// Squared norm of the superposition before renormalizing; differs from
    /// one by the overlap of the two Kerr branches.
    pub norm_before: f64,
}

impl CatState {
    pub fn norm_deviation(&self) -> f64 {
        (self.norm_before - 1.0).abs()
    }
}

/// Equal-weight superposition of the Kerr states
/// `|-i alpha e^{6i delta}, pi/2 + 2 delta>` and `|i alpha e^{-6i delta}, -pi/2 - 2 delta>`
/// with relative phases `e^{+-5i (pi/4 + delta)}`.
pub fn expected_cat_state(alpha: C64, offset: &DipOffset, cutoff: usize, tail_tol: f64) -> Result<CatState> {
    let delta = offset.delta;
    let theta = FRAC_PI_4 + delta;
    let gamma = FRAC_PI_2 + 2.0 * delta;
    let i = C64::new(0.0, 1.0);
    let first = kerr_state(-i * alpha * C64::from_polar(1.0, 6.0 * delta), gamma, cutoff, tail_tol)?;
    let second = kerr_state(i * alpha * C64::from_polar(1.0, -6.0 * delta), -gamma, cutoff, tail_tol)?;
    let w1 = C64::from_polar(FRAC_1_SQRT_2, 5.0 * theta);
    let w2 = C64::from_polar(FRAC_1_SQRT_2, -5.0 * theta);
    let amps: Vec<C64> = first.amplitudes().iter().zip(second.amplitudes()).map(|(a, b)| w1 * a - w2 * b).collect();
    let norm_before = norm_sqr(&amps);
    Ok(CatState { state: FieldState::normalized(amps)?, norm_before })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Excited,
    Ground,
}

impl Outcome {
    fn name(self) -> &'static str {
        match self {
            Outcome::Excited => "excited",
            Outcome::Ground => "ground",
        }
    }
}

/// How the ground branch is indexed after post-selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Indexing {
    /// Keep `|n + k>` labels as produced by the dynamics.
    Native,
    /// Relabel `|n + k> -> |n>` for comparison with states written over `|n>`.
    /// Has no effect on the excited branch.
    Downshifted,
}

/// Field state left after detecting the atom in `outcome`.
pub fn post_selected_field(state: &JointState, outcome: Outcome, indexing: Indexing) -> Result<FieldState> {
    let branch = match outcome {
        Outcome::Excited => state.excited(),
        Outcome::Ground => state.ground(),
    };
    let probability = norm_sqr(branch);
    if probability <= 1e-12 {
        return Err(Error::NegligibleBranch { outcome: outcome.name(), probability });
    }
    let field = FieldState::normalized(branch.to_vec())?;
    match (outcome, indexing) {
        (Outcome::Ground, Indexing::Downshifted) => field.shift_down(state.k()),
        _ => Ok(field),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanSample {
    pub tau: f64,
    pub entropy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyScan {
    pub samples: Vec<ScanSample>,
    /// Indices of strict interior local minima.
    pub minima: Vec<usize>,
}

impl EntropyScan {
    pub fn step(&self) -> f64 {
        self.samples[1].tau - self.samples[0].tau
    }

    pub fn minimum_samples(&self) -> impl Iterator<Item = &ScanSample> {
        self.minima.iter().map(|&i| &self.samples[i])
    }

    /// Local minimum closest to `tau`.
    pub fn nearest_minimum(&self, tau: f64) -> Option<ScanSample> {
        self.minimum_samples().min_by(|a, b| (a.tau - tau).abs().total_cmp(&(b.tau - tau).abs())).copied()
    }

    pub fn to_csv(&self) -> String {
        crate::io::csv_table(&["tau", "entropy"], self.samples.iter().map(|s| vec![s.tau, s.entropy]))
    }
}

/// Entropy sampled at `steps` evenly spaced times over `[start, end]`.
pub fn entropy_scan(model: &Model, start: impl Into<Tau>, end: impl Into<Tau>, steps: usize) -> Result<EntropyScan> {
    let (start, end) = (start.into(), end.into());
    if steps < 2 || !start.is_finite() || !end.is_finite() || end.value() <= start.value() {
        return Err(Error::InvalidScan(format!("[{start}, {end}] with {steps} steps")));
    }
    let samples: Vec<ScanSample> = linspace(start, end, steps)
        .into_par_iter()
        .map(|tau| ScanSample { tau: tau.value(), entropy: entropy(&atom_density(&model.evolve(tau))) })
        .collect();
    let minima = (1..steps - 1)
        .filter(|&i| samples[i].entropy < samples[i - 1].entropy && samples[i].entropy < samples[i + 1].entropy)
        .collect();
    Ok(EntropyScan { samples, minima })
}

/// Entropy over `[center - halfwidth, center + halfwidth]` with local minima marked.
pub fn entropy_dip_scan(params: &ModelParams, center: f64, halfwidth: f64, steps: usize) -> Result<EntropyScan> {
    if steps < 3 || halfwidth.is_nan() || halfwidth <= 0.0 {
        return Err(Error::InvalidScan(format!("halfwidth {halfwidth} with {steps} steps")));
    }
    let model = Model::new(*params)?;
    entropy_scan(&model, center - halfwidth, center + halfwidth, steps)
}

/// Everything that characterizes the field at a dip `pi/4 + delta_r`.
#[derive(Clone, Debug, Serialize)]
pub struct CatDiagnostics {
    pub r: i64,
    pub tau: f64,
    pub entropy: f64,
    pub rho: AtomDensity,
    /// Deviation of the unnormalized superposition's norm from one.
    pub cat_norm_deviation: f64,
    /// Ground outcome, downshifted by k, against the cat.
    pub fidelity_ground: f64,
    /// Excited outcome against the cat placed on the ground-branch indices.
    pub fidelity_excited: f64,
    /// Overlap of the two post-selected fields on common indices; one for a product state.
    pub branch_fidelity: f64,
    /// `<cat|rho_F|cat>` with the cat on the ground-branch indices.
    pub field_fidelity: f64,
}

impl CatDiagnostics {
    /// Worst case over the two measurement outcomes.
    pub fn fidelity_either_outcome(&self) -> f64 {
        self.fidelity_ground.min(self.fidelity_excited)
    }
}

pub fn diagnose_cat(model: &Model, offset: &DipOffset) -> Result<CatDiagnostics> {
    let params = model.params();
    let tau = offset.tau();
    let state = model.evolve(tau);
    let rho = atom_density(&state);
    let cat = expected_cat_state(params.alpha, offset, params.cutoff, params.tail_tol)?;
    let k = state.k();
    let ground = post_selected_field(&state, Outcome::Ground, Indexing::Downshifted)?;
    let ground_native = post_selected_field(&state, Outcome::Ground, Indexing::Native)?;
    let excited = post_selected_field(&state, Outcome::Excited, Indexing::Native)?;
    let cat_up = cat.state.shift_up(k)?;
    let field = field_rank2(&state);
    let project =
        |v: &[C64]| -> f64 { cat_up.amplitudes().iter().zip(v).map(|(c, x)| c.conj() * x).sum::<C64>().norm_sqr() };
    Ok(CatDiagnostics {
        r: offset.r,
        tau: tau.value(),
        entropy: entropy(&rho),
        rho,
        cat_norm_deviation: cat.norm_deviation(),
        fidelity_ground: fidelity(&ground, &cat.state)?,
        fidelity_excited: fidelity(&excited, &cat_up)?,
        branch_fidelity: overlap(&excited, &ground_native)?.norm_sqr().clamp(0.0, 1.0),
        field_fidelity: (project(field.u()) + project(field.v())).clamp(0.0, 1.0),
    })
}
