//! Subcommand bodies. Each writes its files under the configured output
//! directory and returns the paths it wrote.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::Serialize;

use super::config::RunConfig;
use crate::catlab::{
    count_components, diagnose_cat, dip_offset, entropy_scan, expected_kerr_state, post_selected_field,
    quarter_offset_tau, CatDiagnostics, ComponentReport, Indexing, Outcome, ScanSample,
};
use crate::dynamics::{atom_density, field_rank2, Model};
use crate::error::Result;
use crate::fock::fidelity;
use crate::io::{csv_table, write_json, write_text, SCHEMA_VERSION};
use crate::observables::{
    atomic_inversion_with, entropy, pnd, pnd_closed_near_quarter, q_grid, GridMetadata, PhaseWindow,
};
use crate::tau::{linspace, Tau};

fn model(config: &RunConfig) -> Result<Model> {
    Model::new(config.params()?)
}

pub fn cmd_pnd(config: &RunConfig, taus: &[Tau]) -> Result<Vec<PathBuf>> {
    let model = model(config)?;
    taus.iter()
        .map(|tau| {
            let dist = pnd(&model.evolve(*tau));
            write_text(&config.output_dir, &format!("pnd_tau_{}.csv", tau.slug()), &dist.to_csv())
        })
        .collect()
}

#[derive(Serialize)]
struct ScanSidecar<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    from: String,
    to: String,
    steps: usize,
    minima: Vec<ScanSample>,
}

pub fn cmd_entropy(config: &RunConfig, from: Tau, to: Tau, steps: usize) -> Result<Vec<PathBuf>> {
    let model = model(config)?;
    let scan = entropy_scan(&model, from, to, steps)?;
    let csv = write_text(&config.output_dir, "entropy.csv", &scan.to_csv())?;
    let sidecar = ScanSidecar {
        schema_version: SCHEMA_VERSION,
        config,
        from: from.to_string(),
        to: to.to_string(),
        steps,
        minima: scan.minimum_samples().copied().collect(),
    };
    let json = write_json(&config.output_dir, "entropy.json", &sidecar)?;
    Ok(vec![csv, json])
}

#[derive(Serialize)]
struct Gridline {
    r: i64,
    tau: f64,
    entropy: f64,
    nearest_minimum: Option<ScanSample>,
    /// Distance from the gridline to the nearest minimum, in scan steps.
    offset_steps: Option<f64>,
}

#[derive(Serialize)]
struct DipSidecar<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    delta_1: f64,
    halfwidth_in_delta_1: i64,
    steps: usize,
    gridlines: Vec<Gridline>,
    minima: Vec<ScanSample>,
}

/// Entropy around `pi/4` over `+-halfwidth * delta_1`, annotated with the
/// `r = +-1, +-3, ...` gridlines inside the window.
pub fn cmd_entropy_dip(config: &RunConfig, halfwidth: i64, steps: usize) -> Result<Vec<PathBuf>> {
    let model = model(config)?;
    let d1 = dip_offset(1, config.nbar)?;
    let start = quarter_offset_tau(-halfwidth, config.nbar);
    let end = quarter_offset_tau(halfwidth, config.nbar);
    let scan = entropy_scan(&model, start, end, steps)?;
    let step = scan.step();
    let gridlines = (-halfwidth..=halfwidth)
        .filter(|r| r % 2 != 0)
        .map(|r| {
            let tau = quarter_offset_tau(r, config.nbar);
            let nearest = scan.nearest_minimum(tau.value());
            Gridline {
                r,
                tau: tau.value(),
                entropy: entropy(&atom_density(&model.evolve(tau))),
                nearest_minimum: nearest,
                offset_steps: nearest.map(|m| (m.tau - tau.value()) / step),
            }
        })
        .collect();
    let csv = write_text(&config.output_dir, "entropy_dip.csv", &scan.to_csv())?;
    let sidecar = DipSidecar {
        schema_version: SCHEMA_VERSION,
        config,
        delta_1: d1.delta,
        halfwidth_in_delta_1: halfwidth,
        steps,
        gridlines,
        minima: scan.minimum_samples().copied().collect(),
    };
    let json = write_json(&config.output_dir, "entropy_dip.json", &sidecar)?;
    Ok(vec![csv, json])
}

#[derive(Serialize)]
struct QSidecar<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    tau: f64,
    tau_expr: String,
    grid: GridMetadata,
    components: ComponentReport,
}

pub struct QfuncResult {
    pub files: Vec<PathBuf>,
    pub components: ComponentReport,
    pub riemann_sum: f64,
}

pub fn cmd_qfunc(
    config: &RunConfig,
    tau: Tau,
    window: PhaseWindow,
    resolution: usize,
    threshold: f64,
) -> Result<QfuncResult> {
    let model = model(config)?;
    let field = field_rank2(&model.evolve(tau));
    let grid = q_grid(&field, window, resolution, resolution)?;
    let components = count_components(&grid, threshold)?;
    let stem = format!("qfunc_tau_{}", tau.slug());
    let csv = write_text(&config.output_dir, &format!("{stem}.csv"), &grid.to_csv())?;
    let sidecar = QSidecar {
        schema_version: SCHEMA_VERSION,
        config,
        tau: tau.value(),
        tau_expr: tau.to_string(),
        grid: grid.metadata(),
        components: components.clone(),
    };
    let json = write_json(&config.output_dir, &format!("{stem}.json"), &sidecar)?;
    Ok(QfuncResult { files: vec![csv, json], components, riemann_sum: grid.riemann_sum() })
}

pub fn cmd_inversion(config: &RunConfig, from: Tau, to: Tau, steps: usize) -> Result<Vec<PathBuf>> {
    if steps < 2 || to.value() <= from.value() {
        return Err(crate::Error::InvalidScan(format!("[{from}, {to}] with {steps} steps")));
    }
    let model = model(config)?;
    let rows = linspace(from, to, steps).into_iter().map(|tau| vec![tau.value(), atomic_inversion_with(&model, tau)]);
    let csv = write_text(&config.output_dir, "inversion.csv", &csv_table(&["tau", "w"], rows))?;
    Ok(vec![csv])
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialTimeCheck {
    pub tau: f64,
    pub entropy: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DipCheck {
    #[serde(flatten)]
    pub diagnostics: CatDiagnostics,
    pub fidelity_either_outcome: f64,
    /// `|rho12 + e^{4i phi}/2|` with `rho12` in the unphased convention.
    pub coherence_error: f64,
    /// Largest entrywise gap between the simulated PND and the near-quarter closed form.
    pub pnd_closed_form_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatcheckReport {
    pub schema_version: u32,
    pub config: RunConfig,
    /// Field after `tau = pi` against the initial coherent state.
    pub coherent_recurrence: SpecialTimeCheck,
    /// Downshifted ground branch at `tau = pi/2` against `|-alpha, pi>`.
    pub kerr_half_period: SpecialTimeCheck,
    /// Requested dip first, then `r = 1` for reference when different.
    pub dips: Vec<DipCheck>,
}

pub fn dip_check(model: &Model, r: i64) -> Result<DipCheck> {
    let params = model.params();
    let offset = dip_offset(r, params.nbar())?;
    let diagnostics = diagnose_cat(model, &offset)?;
    let phase4 = num_complex::Complex64::from_polar(0.5, 4.0 * params.alpha.arg());
    let coherence_error = (diagnostics.rho.rho12_unphased() + phase4).norm();
    let simulated = pnd(&model.evolve(offset.tau()));
    let moduli: Vec<f64> = model.coefficients().amplitudes().iter().map(|c| c.norm()).collect();
    let closed = pnd_closed_near_quarter(params.cutoff, &moduli, offset.delta);
    Ok(DipCheck {
        fidelity_either_outcome: diagnostics.fidelity_either_outcome(),
        coherence_error,
        pnd_closed_form_error: simulated.max_abs_diff(&closed),
        diagnostics,
    })
}

pub fn catcheck_report(config: &RunConfig, r: i64) -> Result<CatcheckReport> {
    let model = model(config)?;
    let params = model.params();

    let full = model.evolve(Tau::pi_fraction(1, 1));
    let returned = post_selected_field(&full, Outcome::Excited, Indexing::Native)?;
    let coherent_recurrence = SpecialTimeCheck {
        tau: PI,
        entropy: entropy(&atom_density(&full)),
        fidelity: fidelity(&returned, model.coefficients())?,
    };

    let half = model.evolve(Tau::pi_fraction(1, 2));
    let kerr = post_selected_field(&half, Outcome::Ground, Indexing::Downshifted)?;
    let expected = expected_kerr_state(params.alpha, params.cutoff, params.tail_tol)?;
    let kerr_half_period = SpecialTimeCheck {
        tau: PI / 2.0,
        entropy: entropy(&atom_density(&half)),
        fidelity: fidelity(&kerr, &expected)?,
    };

    let mut dips = vec![dip_check(&model, r)?];
    if r != 1 {
        dips.push(dip_check(&model, 1)?);
    }
    Ok(CatcheckReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        coherent_recurrence,
        kerr_half_period,
        dips,
    })
}

pub fn cmd_catcheck(config: &RunConfig, r: i64) -> Result<(PathBuf, CatcheckReport)> {
    let report = catcheck_report(config, r)?;
    let path = write_json(&config.output_dir, &format!("catcheck_r{r}.json"), &report)?;
    Ok((path, report))
}
