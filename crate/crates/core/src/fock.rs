//! Truncated Fock-space field states.
//!
//! Amplitudes are stored densely over `|0>, ..., |N>`. Constructors build the
//! coherent and Kerr amplitudes by the ratio recurrence
//! `a_{n+1} = a_n * alpha / sqrt(n + 1)`, so no factorial is ever formed.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum deviation of `sum |a_n|^2` from one accepted by [`FieldState::from_amplitudes`].
pub const NORM_TOL: f64 = 1e-10;

/// Default bound on the probability mass discarded by truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-9;

/// `|alpha|^2` beyond which `exp(-|alpha|^2 / 2)` loses the normal range.
const MAX_NBAR: f64 = 1400.0;

#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    amplitudes: Vec<C64>,
}

/// Probability mass that truncation at `cutoff_used` removed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub tail_mass: f64,
    pub cutoff_used: usize,
}

impl FieldState {
    /// Wraps already-normalized amplitudes.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm_sqr(&amplitudes);
        if amplitudes.is_empty() || !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm_sqr(&amplitudes);
        if amplitudes.is_empty() || !norm.is_finite() || norm <= 0.0 {
            return Err(Error::NotNormalized(norm));
        }
        let scale = norm.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(Self { amplitudes })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// Amplitude of `|n>`; zero above the cutoff.
    pub fn amplitude(&self, n: usize) -> C64 {
        self.amplitudes.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum()
    }

    /// `e^{i theta} |psi>`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = C64::from_polar(1.0, theta);
        Self { amplitudes: self.amplitudes.iter().map(|a| a * phase).collect() }
    }

    /// Relabels `|n> -> |n - shift>` keeping the cutoff. Fails if the dropped
    /// low entries carry more than `1e-12` probability.
    pub fn shift_down(&self, shift: usize) -> Result<Self> {
        let keep = shift.min(self.amplitudes.len());
        let lost = norm_sqr(&self.amplitudes[..keep]);
        if lost > 1e-12 {
            return Err(Error::ShiftDiscardsMass { shift, lost });
        }
        let mut out = vec![C64::default(); self.amplitudes.len()];
        for (n, a) in self.amplitudes.iter().enumerate().skip(shift) {
            out[n - shift] = *a;
        }
        Self::normalized(out)
    }

    /// Relabels `|n> -> |n + shift>` keeping the cutoff. Fails if the entries
    /// pushed past the cutoff carry more than `1e-12` probability.
    pub fn shift_up(&self, shift: usize) -> Result<Self> {
        let len = self.amplitudes.len();
        let keep = len.saturating_sub(shift);
        let lost = norm_sqr(&self.amplitudes[keep..]);
        if lost > 1e-12 {
            return Err(Error::ShiftDiscardsMass { shift, lost });
        }
        let mut out = vec![C64::default(); len];
        for (n, a) in self.amplitudes.iter().take(keep).enumerate() {
            out[n + shift] = *a;
        }
        Self::normalized(out)
    }
}

pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// Unnormalized truncated coherent amplitudes and the Poisson mass beyond the cutoff.
fn truncated_coherent(alpha: C64, cutoff: usize) -> Result<(Vec<C64>, f64)> {
    let nbar = alpha.norm_sqr();
    if !nbar.is_finite() || nbar > MAX_NBAR {
        return Err(Error::AlphaOutOfRange(alpha.to_string()));
    }
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut a = C64::new((-0.5 * nbar).exp(), 0.0);
    amps.push(a);
    for n in 0..cutoff {
        a = a * alpha / ((n + 1) as f64).sqrt();
        amps.push(a);
    }

    // Poisson terms beyond the cutoff, summed forward until they stop mattering.
    let mut p = amps[cutoff].norm_sqr();
    let mut tail = 0.0;
    let mut n = cutoff;
    loop {
        p *= nbar / (n + 1) as f64;
        n += 1;
        tail += p;
        let decaying = n as f64 > nbar;
        if decaying && (p == 0.0 || p <= tail * 1e-18) {
            break;
        }
    }
    Ok((amps, tail.clamp(0.0, 1.0)))
}

fn check_tol(tail_tol: f64) -> Result<()> {
    if tail_tol.is_nan() || tail_tol <= 0.0 {
        return Err(Error::NonPositiveTolerance(tail_tol));
    }
    Ok(())
}

/// Coherent state `|alpha>` truncated at `cutoff`.
///
/// The returned [`TailReport`] carries the exact Poisson mass above the cutoff;
/// if it exceeds `tail_tol` the call fails instead of renormalizing.
pub fn coherent_state(alpha: C64, cutoff: usize, tail_tol: f64) -> Result<(FieldState, TailReport)> {
    check_tol(tail_tol)?;
    let (amps, tail_mass) = truncated_coherent(alpha, cutoff)?;
    if tail_mass > tail_tol {
        return Err(Error::TailTooHeavy { tail_mass, tail_tol, cutoff });
    }
    let state = FieldState::normalized(amps)?;
    Ok((state, TailReport { tail_mass, cutoff_used: cutoff }))
}

/// Kerr state `|alpha, gamma>`: coherent amplitudes dressed with `e^{i gamma n(n-1)/2}`.
pub fn kerr_state(alpha: C64, gamma: f64, cutoff: usize, tail_tol: f64) -> Result<FieldState> {
    let (coherent, _) = coherent_state(alpha, cutoff, tail_tol)?;
    let amplitudes = coherent
        .amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let pairs = (n as u64 * n.saturating_sub(1) as u64 / 2) as f64;
            c * C64::from_polar(1.0, gamma * pairs)
        })
        .collect();
    Ok(FieldState { amplitudes })
}

/// `<a|b>`.
pub fn overlap(a: &FieldState, b: &FieldState) -> Result<C64> {
    if a.cutoff() != b.cutoff() {
        return Err(Error::CutoffMismatch { left: a.cutoff(), right: b.cutoff() });
    }
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum())
}

/// `|<a|b>|^2`, clamped into `[0, 1]`.
pub fn fidelity(a: &FieldState, b: &FieldState) -> Result<f64> {
    Ok(overlap(a, b)?.norm_sqr().clamp(0.0, 1.0))
}

#[derive(Serialize, Deserialize)]
struct FieldStateJson {
    cutoff: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for FieldState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FieldStateJson {
            cutoff: self.cutoff(),
            re: self.amplitudes.iter().map(|a| a.re).collect(),
            im: self.amplitudes.iter().map(|a| a.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FieldStateJson::deserialize(deserializer)?;
        if raw.re.len() != raw.cutoff + 1 || raw.im.len() != raw.cutoff + 1 {
            return Err(D::Error::custom("re/im length must equal cutoff + 1"));
        }
        let amps = raw.re.into_iter().zip(raw.im).map(|(re, im)| C64::new(re, im)).collect();
        FieldState::from_amplitudes(amps).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn coherent(alpha: C64, cutoff: usize) -> FieldState {
        coherent_state(alpha, cutoff, DEFAULT_TAIL_TOL).unwrap().0
    }

    #[test]
    fn vacuum() {
        let (s, tail) = coherent_state(C64::new(0.0, 0.0), 10, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(s.amplitude(0), C64::new(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == C64::default()));
        assert_eq!(tail.tail_mass, 0.0);
        assert_eq!(tail.cutoff_used, 10);
    }

    #[test]
    fn unit_amplitude_ground_entry() {
        let s = coherent(C64::new(1.0, 0.0), 40);
        let a0 = s.amplitude(0);
        assert!((a0.re - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(a0.im, 0.0);
        assert!((a0.re - 0.606531).abs() < 1e-6);
    }

    #[test]
    fn heavy_tail_is_rejected() {
        let err = coherent_state(C64::new(50f64.sqrt(), 0.0), 40, DEFAULT_TAIL_TOL).unwrap_err();
        match err {
            Error::TailTooHeavy { tail_mass, cutoff, .. } => {
                assert_eq!(cutoff, 40);
                assert!(tail_mass > 0.1);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn tolerance_must_be_positive() {
        for tol in [0.0, -1.0, f64::NAN] {
            assert!(matches!(coherent_state(C64::new(1.0, 0.0), 10, tol), Err(Error::NonPositiveTolerance(_))));
        }
    }

    #[test]
    fn huge_alpha_is_rejected() {
        assert!(matches!(coherent_state(C64::new(40.0, 0.0), 4000, 1.0), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn kerr_trivial_phases() {
        let alpha = C64::new(3.0, 1.5);
        let c = coherent(alpha, 80);
        for gamma in [0.0, 2.0 * PI] {
            let k = kerr_state(alpha, gamma, 80, DEFAULT_TAIL_TOL).unwrap();
            for (x, y) in c.amplitudes().iter().zip(k.amplitudes()) {
                assert!((x - y).norm() < 1e-10);
            }
            assert!((overlap(&c, &k).unwrap() - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn overlap_of_distant_coherent_states() {
        let a = 50f64.sqrt();
        let plus = coherent(C64::new(a, 0.0), 256);
        let minus = coherent(C64::new(-a, 0.0), 256);
        assert!(overlap(&plus, &minus).unwrap().norm_sqr() < 1e-12);
        assert!((overlap(&plus, &plus).unwrap() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn cutoff_mismatch() {
        let a = coherent(C64::new(1.0, 0.0), 30);
        let b = coherent(C64::new(1.0, 0.0), 31);
        assert!(matches!(overlap(&a, &b), Err(Error::CutoffMismatch { left: 30, right: 31 })));
        assert!(fidelity(&a, &b).is_err());
    }

    #[test]
    fn global_phase_invariance() {
        let s = kerr_state(C64::new(2.0, -1.0), 0.3, 60, DEFAULT_TAIL_TOL).unwrap();
        for theta in [0.1, 1.0, PI, 5.0] {
            let f = fidelity(&s, &s.with_global_phase(theta)).unwrap();
            assert!((f - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn shifts() {
        let s = coherent(C64::new(2.0, 0.0), 40);
        let up = s.shift_up(4).unwrap();
        assert_eq!(up.amplitude(4), s.amplitude(0));
        assert_eq!(up.amplitude(3), C64::default());
        let back = up.shift_down(4).unwrap();
        assert!((fidelity(&back, &s).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(s.shift_down(1), Err(Error::ShiftDiscardsMass { shift: 1, .. })));
    }

    #[test]
    fn json_schema() {
        let s = coherent_state(C64::new(0.5, 0.25), 3, 1e-2).unwrap().0;
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["cutoff"], 3);
        assert_eq!(json["re"].as_array().unwrap().len(), 4);
        assert_eq!(json["im"].as_array().unwrap().len(), 4);
        let back: FieldState = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
        let bad = serde_json::json!({"cutoff": 1, "re": [1.0, 1.0], "im": [0.0, 0.0]});
        assert!(serde_json::from_value::<FieldState>(bad).is_err());
    }
}
