use crate::dynamics::AtomDensity;

/// `-sum p ln p` with `0 ln 0 = 0`; entries are clamped into `[0, 1]` first.
pub fn von_neumann(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|p| p.clamp(0.0, 1.0)).filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
}

/// Entanglement entropy of atom and field, from the two atomic eigenvalues.
pub fn entropy(rho: &AtomDensity) -> f64 {
    let (plus, minus) = rho.eigenvalues();
    von_neumann(&[plus, minus])
}
