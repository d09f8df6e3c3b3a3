//! Counting the separated lobes of a Q-function.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::observables::PhaseGrid;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub count: usize,
    pub threshold_fraction: f64,
    pub threshold: f64,
    /// Riemann mass of each component, in discovery (row-major) order.
    pub component_masses: Vec<f64>,
    /// Grid index `(ix, iy)` of each component's peak.
    pub component_peaks: Vec<(usize, usize)>,
}

/// 4-connected components of the cells with `Q > threshold_fraction * max Q`.
pub fn count_components(grid: &PhaseGrid, threshold_fraction: f64) -> Result<ComponentReport> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::InvalidThreshold(threshold_fraction));
    }
    let (nx, ny) = (grid.nx, grid.ny);
    if grid.values.is_empty() || grid.values.len() != nx * ny {
        return Err(Error::EmptyGrid);
    }
    let max = grid.max_value();
    if !(max.is_finite() && max > 0.0) {
        return Err(Error::EmptyGrid);
    }
    let threshold = threshold_fraction * max;
    let area = grid.cell_area();

    let mut label = vec![usize::MAX; nx * ny];
    let mut masses = Vec::new();
    let mut peaks = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..nx * ny {
        if label[start] != usize::MAX || grid.values[start] <= threshold {
            continue;
        }
        let id = masses.len();
        label[start] = id;
        queue.push_back(start);
        let mut mass = 0.0;
        let mut peak = start;
        while let Some(cell) = queue.pop_front() {
            mass += grid.values[cell] * area;
            if grid.values[cell] > grid.values[peak] {
                peak = cell;
            }
            let (ix, iy) = (cell % nx, cell / nx);
            let neighbours = [
                (ix > 0).then(|| cell - 1),
                (ix + 1 < nx).then(|| cell + 1),
                (iy > 0).then(|| cell - nx),
                (iy + 1 < ny).then(|| cell + nx),
            ];
            for next in neighbours.into_iter().flatten() {
                if label[next] == usize::MAX && grid.values[next] > threshold {
                    label[next] = id;
                    queue.push_back(next);
                }
            }
        }
        masses.push(mass);
        peaks.push((peak % nx, peak / nx));
    }
    Ok(ComponentReport {
        count: masses.len(),
        threshold_fraction,
        threshold,
        component_masses: masses,
        component_peaks: peaks,
    })
}
