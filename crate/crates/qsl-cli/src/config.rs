//! Run configuration: one optional TOML file with every knob defaulted.
//!
//! Units follow the library convention: `hbar = 1`, frequencies angular (the
//! default resonator frequency is `2 pi x 4` per microsecond), times in the
//! inverse units.

use num_complex::Complex64;
use serde::Deserialize;
use std::f64::consts::PI;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Resonator angular frequency.
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default)]
    pub p_grid: PGridConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub state: StateConfig,
    #[serde(default)]
    pub tomo: TomoConfig,
    #[serde(default)]
    pub regime_map: RegimeMapConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            nu: default_nu(),
            p_grid: PGridConfig::default(),
            time: TimeConfig::default(),
            state: StateConfig::default(),
            tomo: TomoConfig::default(),
            regime_map: RegimeMapConfig::default(),
        }
    }
}

fn default_nu() -> f64 {
    2.0 * PI * 4.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PGridConfig {
    #[serde(default = "default_p_min")]
    pub min: f64,
    #[serde(default = "default_p_max")]
    pub max: f64,
    #[serde(default = "default_p_count")]
    pub count: usize,
}

impl Default for PGridConfig {
    fn default() -> Self {
        PGridConfig {
            min: default_p_min(),
            max: default_p_max(),
            count: default_p_count(),
        }
    }
}

fn default_p_min() -> f64 {
    0.1
}
fn default_p_max() -> f64 {
    10.0
}
fn default_p_count() -> usize {
    61
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    /// Sample count of every time (or reduced-time) grid.
    #[serde(default = "default_time_count")]
    pub count: usize,
    /// Evolution span in revival periods `2 pi / nu`.
    #[serde(default = "default_periods")]
    pub periods: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        TimeConfig {
            count: default_time_count(),
            periods: default_periods(),
        }
    }
}

fn default_time_count() -> usize {
    401
}
fn default_periods() -> f64 {
    1.0
}

/// Which state the evolve and tomo commands prepare.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    /// One of `coherent`, `squeezed`, `squeezed-coherent`, `superposition`.
    #[serde(default = "default_family")]
    pub family: String,
    /// Coherent amplitude as `[re, im]`.
    #[serde(default = "default_alpha")]
    pub alpha: [f64; 2],
    /// Squeezing amplitude `r` (zeta = r e^{i phi}).
    #[serde(default)]
    pub zeta_r: f64,
    /// Squeezing phase `phi`.
    #[serde(default)]
    pub zeta_phi: f64,
    /// Photon-number amplitudes for `superposition`, as `[re, im]` pairs.
    #[serde(default)]
    pub amplitudes: Vec<[f64; 2]>,
    /// Fock cutoff override. When absent the family default applies and the
    /// basis grows automatically until the truncated tail passes.
    #[serde(default)]
    pub cutoff: Option<usize>,
}

impl Default for StateConfig {
    fn default() -> Self {
        StateConfig {
            family: default_family(),
            alpha: default_alpha(),
            zeta_r: 0.0,
            zeta_phi: 0.0,
            amplitudes: Vec::new(),
            cutoff: None,
        }
    }
}

fn default_family() -> String {
    "coherent".into()
}
fn default_alpha() -> [f64; 2] {
    [1.0, 0.0]
}

impl StateConfig {
    pub fn alpha_complex(&self) -> Complex64 {
        Complex64::new(self.alpha[0], self.alpha[1])
    }

    pub fn zeta_complex(&self) -> Complex64 {
        Complex64::from_polar(self.zeta_r, self.zeta_phi)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TomoConfig {
    /// Reconstruction cutoff. Defaults per state family (7 for
    /// superpositions, 10 for squeezed families, 20 for coherent).
    #[serde(default)]
    pub n_prime: Option<usize>,
    /// Qubit-resonator coupling (angular).
    #[serde(default = "default_omega")]
    pub omega: f64,
    /// Swap-duration samples per signal.
    #[serde(default = "default_swap_samples")]
    pub swap_samples: usize,
    /// Gaussian readout noise on each excitation probability.
    #[serde(default)]
    pub noise_sigma: f64,
    /// When positive, each probability is binomially sampled at this many
    /// shots.
    #[serde(default)]
    pub shots: u64,
    /// Displacement-ring radii override; the default scales with the
    /// state's mean photon number.
    #[serde(default)]
    pub ring_radii: Option<[f64; 2]>,
    /// Phases per displacement ring; default `4 (n_prime + 1)`.
    #[serde(default)]
    pub phases_per_ring: Option<usize>,
    /// Reconstruct from a previously written record set instead of
    /// synthesizing one.
    #[serde(default)]
    pub records_path: Option<String>,
}

impl Default for TomoConfig {
    fn default() -> Self {
        TomoConfig {
            n_prime: None,
            omega: default_omega(),
            swap_samples: default_swap_samples(),
            noise_sigma: 0.0,
            shots: 0,
            ring_radii: None,
            phases_per_ring: None,
            records_path: None,
        }
    }
}

fn default_omega() -> f64 {
    2.0 * PI * 13.5
}
fn default_swap_samples() -> usize {
    64
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeMapConfig {
    /// Cells per axis of the moment diagram; at least 16.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    /// Moment orders used by the dominance scan.
    #[serde(default = "default_map_p_count")]
    pub p_count: usize,
    /// Time samples per dominance scan.
    #[serde(default = "default_map_t_count")]
    pub t_count: usize,
}

impl Default for RegimeMapConfig {
    fn default() -> Self {
        RegimeMapConfig {
            resolution: default_resolution(),
            p_count: default_map_p_count(),
            t_count: default_map_t_count(),
        }
    }
}

fn default_resolution() -> usize {
    32
}
fn default_map_p_count() -> usize {
    15
}
fn default_map_t_count() -> usize {
    96
}

/// Load the configuration, or defaults when no path is given.
pub fn load(path: Option<&Path>) -> Result<RunConfig, String> {
    let config = match path {
        None => RunConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", p.display()))?
        }
    };
    validate(&config)?;
    Ok(config)
}

fn validate(config: &RunConfig) -> Result<(), String> {
    if !(config.nu > 0.0) {
        return Err(format!("nu = {} must be positive", config.nu));
    }
    let grid = &config.p_grid;
    if !(grid.min > 0.0 && grid.max > grid.min && grid.count >= 2) {
        return Err(format!(
            "p_grid must satisfy 0 < min < max with count >= 2, got [{}, {}] x {}",
            grid.min, grid.max, grid.count
        ));
    }
    if config.time.count < 2 || !(config.time.periods > 0.0) {
        return Err("time grid needs count >= 2 and positive periods".into());
    }
    match config.state.family.as_str() {
        "coherent" | "squeezed" | "squeezed-coherent" => {}
        "superposition" => {
            if config.state.amplitudes.is_empty() {
                return Err("superposition state needs amplitudes".into());
            }
        }
        other => {
            return Err(format!(
                "unknown state family {other:?} (expected coherent, squeezed, \
                 squeezed-coherent, or superposition)"
            ));
        }
    }
    if config.state.zeta_r < 0.0 {
        return Err(format!("zeta_r = {} must be >= 0", config.state.zeta_r));
    }
    if config.regime_map.resolution < 16 {
        return Err(format!(
            "regime_map.resolution = {} must be at least 16",
            config.regime_map.resolution
        ));
    }
    if config.tomo.noise_sigma < 0.0 {
        return Err("tomo.noise_sigma must be >= 0".into());
    }
    if config.tomo.swap_samples < 2 {
        return Err("tomo.swap_samples must be at least 2".into());
    }
    Ok(())
}
