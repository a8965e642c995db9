//! Von Neumann pointer model of a weak measurement on a pre/post-selected
//! ensemble.
//!
//! A pointer with Gaussian wavefunction `G_σ(x)` is coupled to the observable
//! `Σ_a λ_a P_a` with strength ε. After post-selection the pointer is left in
//!
//! ```text
//! Φ(x) = Σ_a ⟨post|P_a|pre⟩ · G_σ(x - ε λ_a)
//! ```
//!
//! and its mean position divided by ε approaches `Re⟨post|A|pre⟩/⟨post|pre⟩`
//! with an O(ε²) error. Integrals are midpoint sums on a uniform grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pps::{PrePostEnsemble, ProjectorDecomposition, SELECTION_EPS};

pub const MIN_GRID_POINTS: usize = 256;

/// Pointer half-widths required beyond the largest shift, in units of σ.
pub const GRID_COVERAGE_SIGMAS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerGrid {
    half_width: f64,
    points: usize,
}

impl Default for PointerGrid {
    fn default() -> Self {
        Self { half_width: 10.0, points: 4096 }
    }
}

impl PointerGrid {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidPointer(format!("half width must be positive, got {half_width}")));
        }
        if points < MIN_GRID_POINTS {
            return Err(Error::InvalidPointer(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {points}"
            )));
        }
        Ok(Self { half_width, points })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Cell midpoints.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let dx = self.spacing();
        (0..self.points).map(move |k| -self.half_width + (k as f64 + 0.5) * dx)
    }

    fn check_covers(&self, sigma: f64, max_shift: f64) -> Result<()> {
        let required = GRID_COVERAGE_SIGMAS * sigma + max_shift;
        if self.half_width < required {
            return Err(Error::GridTooNarrow { half_width: self.half_width, required });
        }
        let limit = sigma / 4.0;
        if self.spacing() > limit {
            return Err(Error::GridTooCoarse { spacing: self.spacing(), limit });
        }
        Ok(())
    }
}

/// Discretized pointer wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerState {
    grid: PointerGrid,
    amps: Vec<Complex64>,
}

impl PointerState {
    /// Unit-norm Gaussian `(2πσ²)^(-1/4) exp(-(x - center)² / 4σ²)`.
    pub fn gaussian(grid: PointerGrid, sigma: f64, center: f64) -> Self {
        let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
        let amps = grid
            .nodes()
            .map(|x| {
                let d = x - center;
                Complex64::new(norm * (-d * d / (4.0 * sigma * sigma)).exp(), 0.0)
            })
            .collect();
        Self { grid, amps }
    }

    pub fn grid(&self) -> &PointerGrid {
        &self.grid
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// `∫|Φ|² dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    /// `∫x|Φ|² dx / ∫|Φ|² dx`.
    pub fn mean_position(&self) -> f64 {
        let dx = self.grid.spacing();
        let first: f64 = self.grid.nodes().zip(&self.amps).map(|(x, z)| x * z.norm_sqr()).sum::<f64>() * dx;
        first / self.norm_sqr()
    }

    fn accumulate(&mut self, weight: Complex64, other: &PointerState) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += weight * b;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakMeasurementReport {
    pub coupling: f64,
    pub pointer_mean: f64,
    pub postselection_probability: f64,
    pub inferred_weak_value_re: f64,
}

/// Builds the post-selected pointer state and reads out its mean shift.
pub fn post_selected_pointer(
    ens: &PrePostEnsemble,
    obs: &ProjectorDecomposition,
    coupling: f64,
    sigma: f64,
    grid: PointerGrid,
) -> Result<PointerState> {
    if !coupling.is_finite() || coupling == 0.0 {
        return Err(Error::InvalidPointer(format!("coupling must be non-zero and finite, got {coupling}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidPointer(format!("sigma must be positive, got {sigma}")));
    }
    if ens.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: obs.dim(), actual: ens.dim() });
    }
    if ens.overlap().norm() <= SELECTION_EPS {
        return Err(Error::OrthogonalSelection);
    }
    grid.check_covers(sigma, coupling.abs() * obs.max_abs_eigenvalue())?;

    let mut phi = PointerState { grid, amps: vec![Complex64::new(0.0, 0.0); grid.points()] };
    for b in obs.branches() {
        let weight = b.projector.sandwich(ens.post(), ens.pre())?;
        if weight == Complex64::new(0.0, 0.0) {
            continue;
        }
        phi.accumulate(weight, &PointerState::gaussian(grid, sigma, coupling * b.eigenvalue));
    }
    Ok(phi)
}

pub fn simulate_pointer(
    ens: &PrePostEnsemble,
    obs: &ProjectorDecomposition,
    coupling: f64,
    sigma: f64,
    grid: PointerGrid,
) -> Result<WeakMeasurementReport> {
    let phi = post_selected_pointer(ens, obs, coupling, sigma, grid)?;
    let pointer_mean = phi.mean_position();
    Ok(WeakMeasurementReport {
        coupling,
        pointer_mean,
        postselection_probability: phi.norm_sqr().clamp(0.0, 1.0),
        inferred_weak_value_re: pointer_mean / coupling,
    })
}
