//! Husimi Q-function of the rank-2 field operator.
//!
//! `Q(beta) = (1/pi) (|<beta|u>|^2 + |<beta|v>|^2)`. The coherent-state
//! projections use the term recurrence `t_{n+1} = t_n conj(beta) / sqrt(n+1)`
//! seeded with `exp(-|beta|^2 / 2)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::FieldRank2;
use crate::error::{Error, Result};
use crate::io::fmt_f64;

/// Rectangular region of the complex `beta` plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl PhaseWindow {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let w = Self { re_min, re_max, im_min, im_max };
        w.validate()?;
        Ok(w)
    }

    /// `[-half, half]^2`.
    pub fn square(half: f64) -> Result<Self> {
        Self::new(-half, half, -half, half)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|x| x.is_finite());
        if !all_finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::DegenerateWindow(format!(
                "re [{}, {}], im [{}, {}]",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        Ok(())
    }
}

/// Q values on a grid; `values[iy * nx + ix]` sits at
/// `beta = re_min + ix * dre + i (im_min + iy * dim)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub window: PhaseWindow,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl PhaseGrid {
    pub fn spacing(&self) -> (f64, f64) {
        (
            (self.window.re_max - self.window.re_min) / (self.nx - 1) as f64,
            (self.window.im_max - self.window.im_min) / (self.ny - 1) as f64,
        )
    }

    pub fn beta(&self, ix: usize, iy: usize) -> C64 {
        let (dre, dim) = self.spacing();
        C64::new(self.window.re_min + ix as f64 * dre, self.window.im_min + iy as f64 * dim)
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn cell_area(&self) -> f64 {
        let (dre, dim) = self.spacing();
        dre * dim
    }

    /// `sum Q * dre * dim`, which approximates the normalization integral.
    pub fn riemann_sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with header `re,im,q`, rows ordered by `iy` then `ix`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 72 + 8);
        out.push_str("re,im,q\n");
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let b = self.beta(ix, iy);
                out.push_str(&fmt_f64(b.re));
                out.push(',');
                out.push_str(&fmt_f64(b.im));
                out.push(',');
                out.push_str(&fmt_f64(self.value(ix, iy)));
                out.push('\n');
            }
        }
        out
    }

    /// Window metadata for the JSON sidecar (no values).
    pub fn metadata(&self) -> GridMetadata {
        let (dre, dim) = self.spacing();
        GridMetadata {
            window: self.window,
            nx: self.nx,
            ny: self.ny,
            dre,
            dim,
            riemann_sum: self.riemann_sum(),
            max_value: self.max_value(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridMetadata {
    pub window: PhaseWindow,
    pub nx: usize,
    pub ny: usize,
    pub dre: f64,
    pub dim: f64,
    pub riemann_sum: f64,
    pub max_value: f64,
}

struct QEvaluator<'a> {
    field: &'a FieldRank2,
    inv_sqrt: Vec<f64>,
}

impl<'a> QEvaluator<'a> {
    fn new(field: &'a FieldRank2) -> Self {
        let inv_sqrt = (1..=field.u().len()).map(|n| (n as f64).sqrt().recip()).collect();
        Self { field, inv_sqrt }
    }

    fn eval(&self, beta: C64) -> f64 {
        let bc = beta.conj();
        let mut term = C64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
        let mut su = C64::default();
        let mut sv = C64::default();
        for ((u, v), s) in self.field.u().iter().zip(self.field.v()).zip(&self.inv_sqrt) {
            su += term * u;
            sv += term * v;
            term *= bc * s;
        }
        (su.norm_sqr() + sv.norm_sqr()) / PI
    }
}

/// `Q(beta)` for the field operator `|u><u| + |v><v|`.
pub fn q_point(field: &FieldRank2, beta: C64) -> f64 {
    QEvaluator::new(field).eval(beta)
}

/// Q over an `nx x ny` grid spanning `window`, evaluated in parallel by rows.
pub fn q_grid(field: &FieldRank2, window: PhaseWindow, nx: usize, ny: usize) -> Result<PhaseGrid> {
    window.validate()?;
    if nx < 2 || ny < 2 {
        return Err(Error::DegenerateWindow(format!("grid needs at least 2x2 points, got {nx}x{ny}")));
    }
    let evaluator = QEvaluator::new(field);
    let dre = (window.re_max - window.re_min) / (nx - 1) as f64;
    let dim = (window.im_max - window.im_min) / (ny - 1) as f64;
    let mut values = vec![0.0; nx * ny];
    values.par_chunks_mut(nx).enumerate().for_each(|(iy, row)| {
        let im = window.im_min + iy as f64 * dim;
        for (ix, q) in row.iter_mut().enumerate() {
            *q = evaluator.eval(C64::new(window.re_min + ix as f64 * dre, im));
        }
    });
    Ok(PhaseGrid { window, nx, ny, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, DEFAULT_TAIL_TOL};

    fn coherent_field(alpha: C64, cutoff: usize) -> FieldRank2 {
        let (c, _) = coherent_state(alpha, cutoff, DEFAULT_TAIL_TOL).unwrap();
        FieldRank2::from_vectors(c.into_amplitudes(), vec![C64::default(); cutoff + 1]).unwrap()
    }

    #[test]
    fn peak_of_coherent_state() {
        let alpha = C64::new(3.0, -1.0);
        let field = coherent_field(alpha, 80);
        assert!((q_point(&field, alpha) - 1.0 / PI).abs() < 1e-12);
        let far = alpha + C64::new(6.0, 0.0);
        assert!(q_point(&field, far) <= (-36.0f64).exp() / PI * (1.0 + 1e-9));
    }

    #[test]
    fn matches_gaussian_overlap() {
        let alpha = C64::new(2.0, 1.0);
        let field = coherent_field(alpha, 60);
        for beta in [C64::new(0.0, 0.0), C64::new(1.0, 2.0), C64::new(-1.5, 0.3)] {
            let expected = (-(alpha - beta).norm_sqr()).exp() / PI;
            assert!((q_point(&field, beta) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_windows() {
        assert!(PhaseWindow::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(PhaseWindow::new(0.0, 1.0, 2.0, -1.0).is_err());
        assert!(PhaseWindow::new(0.0, f64::NAN, 0.0, 1.0).is_err());
        let field = coherent_field(C64::new(1.0, 0.0), 20);
        let w = PhaseWindow::square(3.0).unwrap();
        assert!(matches!(q_grid(&field, w, 1, 5), Err(Error::DegenerateWindow(_))));
    }

    #[test]
    fn grid_layout_and_normalization() {
        let alpha = C64::new(1.0, 0.5);
        let field = coherent_field(alpha, 40);
        let grid = q_grid(&field, PhaseWindow::new(-6.0, 7.0, -5.0, 6.0).unwrap(), 131, 111).unwrap();
        assert_eq!(grid.values.len(), 131 * 111);
        assert_eq!(grid.beta(0, 0), C64::new(-6.0, -5.0));
        assert!((grid.beta(130, 110) - C64::new(7.0, 6.0)).norm() < 1e-12);
        assert!((grid.value(70, 55) - q_point(&field, grid.beta(70, 55))).abs() < 1e-15);
        assert!((grid.riemann_sum() - 1.0).abs() < 1e-3);
        let csv = grid.to_csv();
        assert!(csv.starts_with("re,im,q\n"));
        assert_eq!(csv.lines().count(), 1 + 131 * 111);
    }
}
