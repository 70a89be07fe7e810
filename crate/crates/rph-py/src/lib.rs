//! Python bindings: generate patches, inspect statistics and windows, and
//! run flip Monte Carlo from Python.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rph_core::flips::{find_flips, monte_carlo_flips};
use rph_core::gpsp::{run_sequence, RuleSource, Schedule};
use rph_core::io::{export_json, import_json};
use rph_core::stats::{density_report, tile_frequencies, DEFAULT_CLIP};
use rph_core::symmetry::{classify_wheel as classify, empirical_symmetry};
use rph_core::tiling::FaceKind;
use rph_core::window::{box_dimension, perp_cloud, window_area as area};
use rph_core::WheelDiagram;
use std::str::FromStr;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_schedule(entries: &[String]) -> PyResult<Schedule> {
    let mut rules = Vec::with_capacity(entries.len());
    for s in entries {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("RANDOM(").and_then(|r| r.strip_suffix(')')) {
            let ws: Result<Vec<f64>, _> =
                rest.split(',').map(|p| p.trim().parse::<f64>()).collect();
            let ws = ws.map_err(err)?;
            let weights: [f64; 4] = ws
                .try_into()
                .map_err(|_| err(format!("RANDOM entry needs 4 weights: {s:?}")))?;
            rules.push(RuleSource::Random { weights });
        } else {
            rules.push(RuleSource::Wheel(WheelDiagram::from_str(t).map_err(err)?));
        }
    }
    Schedule::new(rules).map_err(err).map(|s| s)
}

/// A patch of an RPH tiling.
#[pyclass]
struct Tiling {
    inner: rph_core::Tiling,
}

#[pymethods]
impl Tiling {
    /// Grow a patch from the single-rhombus seed.
    #[staticmethod]
    #[pyo3(signature = (schedule=vec!["LLLLLLLLLL".to_string()], depth=4, master_seed=0))]
    fn generate(schedule: Vec<String>, depth: usize, master_seed: u64) -> PyResult<Tiling> {
        let sched = parse_schedule(&schedule)?;
        let seed = rph_core::Tiling::seed_rhombus();
        let (t, _) = run_sequence(&seed, &sched, depth, master_seed).map_err(err)?;
        Ok(Tiling { inner: t })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Tiling> {
        Ok(Tiling { inner: import_json(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        export_json(&self.inner, None).map_err(err)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertices.len()
    }

    /// Face counts by kind as a dict {"r": .., "p": .., "h": ..}.
    fn face_counts<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        let count = |k| self.inner.faces_of_kind(k).count();
        d.set_item("r", count(FaceKind::R))?;
        d.set_item("p", count(FaceKind::P))?;
        d.set_item("h", count(FaceKind::H))?;
        Ok(d)
    }

    /// Interior tile frequencies relative to R: (P/R, H/R).
    #[pyo3(signature = (clip=DEFAULT_CLIP))]
    fn ratios(&self, clip: f64) -> PyResult<(f64, f64)> {
        let (_, [pr, hr]) = tile_frequencies(&self.inner, clip).map_err(err)?;
        Ok((pr, hr))
    }

    /// Density report as a dict (vertex density v, per-tile densities and
    /// the balance-equation residuals).
    #[pyo3(signature = (clip=DEFAULT_CLIP))]
    fn density<'py>(&self, py: Python<'py>, clip: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = density_report(&self.inner, clip).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("v", r.v)?;
        d.set_item("n_r", r.n_r)?;
        d.set_item("n_p", r.n_p)?;
        d.set_item("n_h", r.n_h)?;
        d.set_item("area_closure", r.area_closure)?;
        d.set_item(
            "residuals",
            (r.eq_vertex_residual, r.eq_plane_a_residual, r.eq_plane_b_residual),
        )?;
        Ok(d)
    }

    /// Grid estimate of the perpendicular window area.
    #[pyo3(signature = (grid_step=0.02))]
    fn window_area(&self, grid_step: f64) -> f64 {
        area(&perp_cloud(&self.inner, 0), grid_step)
    }

    /// Box-counting slope and r-squared of the window boundary.
    #[pyo3(signature = (scales=vec![0.015, 0.02, 0.03, 0.04, 0.06, 0.08]))]
    fn boundary_dimension(&self, scales: Vec<f64>) -> PyResult<(f64, f64)> {
        let fit = box_dimension(&perp_cloud(&self.inner, 0), &scales).map_err(err)?;
        Ok((fit.slope, fit.r2))
    }

    /// Point-group label of the window cloud under the dihedral action.
    #[pyo3(signature = (tolerance=0.04))]
    fn symmetry(&self, tolerance: f64) -> String {
        let c = perp_cloud(&self.inner, 0);
        empirical_symmetry(&c, tolerance * c.diameter()).label()
    }

    /// Number of simpleton flips available on the patch.
    fn flip_count(&self) -> usize {
        find_flips(&self.inner).len()
    }

    /// Run flip Monte Carlo; returns the final patch and the number of
    /// completed steps.
    #[pyo3(signature = (steps, seed=0))]
    fn monte_carlo(&self, steps: usize, seed: u64) -> PyResult<(Tiling, usize)> {
        let out = monte_carlo_flips(&self.inner, steps, seed).map_err(err)?;
        Ok((Tiling { inner: out.tiling }, out.completed_steps))
    }

    fn __repr__(&self) -> String {
        format!(
            "Tiling({} vertices, {} faces)",
            self.inner.vertices.len(),
            self.inner.faces.len()
        )
    }
}

/// Point-group label of one wheel diagram (10-character L/R string).
#[pyfunction]
fn classify_wheel(wheel: &str) -> PyResult<String> {
    let w = WheelDiagram::from_str(wheel).map_err(err)?;
    Ok(classify(&w).label())
}

/// Census of point groups over all 1024 wheel diagrams.
#[pyfunction]
fn wheel_census(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let d = PyDict::new(py);
    for w in WheelDiagram::enumerate() {
        let label = classify(&w).label();
        let prev: usize = d.get_item(&label)?.map_or(Ok(0), |v| v.extract())?;
        d.set_item(label, prev + 1)?;
    }
    Ok(d)
}

#[pymodule]
fn rph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tiling>()?;
    m.add_function(wrap_pyfunction!(classify_wheel, m)?)?;
    m.add_function(wrap_pyfunction!(wheel_census, m)?)?;
    Ok(())
}
