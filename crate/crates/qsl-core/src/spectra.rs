//! Energy spectra of pure states, their moments and dual moments, the
//! orthogonality times of each bound family, and the classification of the
//! moment plane into ML, dual-ML, and MT regimes.

use crate::bounds::{GmlFamily, UnifiedBoundSet};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Normalization slack allowed on the population sum.
const POPULATION_TOL: f64 = 1e-12;
/// A GML bound must exceed the MT bound by more than this before a
/// crossover is declared.
const DOMINANCE_SLACK: f64 = 1e-9;

/// Discrete energy levels with occupation probabilities, plus the
/// Hamiltonian's ground energy and, when bounded above, its maximum energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    levels: Vec<(f64, f64)>,
    ground_energy: f64,
    max_energy: Option<f64>,
}

impl EnergySpectrum {
    /// Levels are `(energy, population)` pairs. Populations must be
    /// non-negative and sum to 1; `ground_energy` must not exceed any level
    /// and `max_energy`, when given, must not be below any level.
    pub fn new(
        levels: Vec<(f64, f64)>,
        ground_energy: f64,
        max_energy: Option<f64>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSpectrum("no levels".into()));
        }
        let mut total = 0.0;
        for &(energy, population) in &levels {
            if !energy.is_finite() || !population.is_finite() {
                return Err(Error::InvalidSpectrum(format!(
                    "non-finite level ({energy}, {population})"
                )));
            }
            if population < 0.0 {
                return Err(Error::InvalidSpectrum(format!(
                    "negative population {population} at energy {energy}"
                )));
            }
            if energy < ground_energy {
                return Err(Error::InvalidSpectrum(format!(
                    "level energy {energy} below ground energy {ground_energy}"
                )));
            }
            if let Some(emax) = max_energy {
                if energy > emax {
                    return Err(Error::InvalidSpectrum(format!(
                        "level energy {energy} above maximum energy {emax}"
                    )));
                }
            }
            total += population;
        }
        if (total - 1.0).abs() > POPULATION_TOL {
            return Err(Error::InvalidSpectrum(format!(
                "populations sum to {total}, expected 1"
            )));
        }
        Ok(EnergySpectrum {
            levels,
            ground_energy,
            max_energy,
        })
    }

    /// Two levels at energies `0` and `eps1` with excited population `rho1`.
    pub fn two_level(rho1: f64, eps1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho1) {
            return Err(Error::InvalidSpectrum(format!(
                "rho1 = {rho1} outside [0, 1]"
            )));
        }
        if !(eps1 > 0.0) {
            return Err(Error::InvalidSpectrum(format!("eps1 = {eps1} must be > 0")));
        }
        EnergySpectrum::new(vec![(0.0, 1.0 - rho1), (eps1, rho1)], 0.0, Some(eps1))
    }

    pub fn levels(&self) -> &[(f64, f64)] {
        &self.levels
    }

    pub fn ground_energy(&self) -> f64 {
        self.ground_energy
    }

    pub fn max_energy(&self) -> Option<f64> {
        self.max_energy
    }

    /// True when every occupied level sits at one energy, so the state never
    /// evolves and no orthogonality time exists.
    pub fn is_stationary(&self) -> bool {
        let occupied: Vec<f64> = self
            .levels
            .iter()
            .filter(|&&(_, rho)| rho > 0.0)
            .map(|&(e, _)| e)
            .collect();
        occupied
            .iter()
            .all(|&e| e == *occupied.first().unwrap_or(&0.0))
    }

    /// `p`-th order moment of the energy above the ground level,
    /// `(sum_n rho_n (e_n - e0)^p)^(1/p)`. Non-decreasing in `p`.
    pub fn moment_ep(&self, p: f64) -> Result<f64> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain {
                what: "moment order p",
                value: p,
                domain: "(0, inf)",
            });
        }
        let sum: f64 = self
            .levels
            .iter()
            .map(|&(e, rho)| rho * (e - self.ground_energy).powf(p))
            .sum();
        Ok(sum.powf(1.0 / p))
    }

    /// Dual moment `(sum_n rho_n (e_max - e_n)^p)^(1/p)`; requires a maximum
    /// energy.
    pub fn dual_moment_ep(&self, p: f64) -> Result<f64> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain {
                what: "moment order p",
                value: p,
                domain: "(0, inf)",
            });
        }
        let emax = self.max_energy.ok_or(Error::MissingMaxEnergy)?;
        let sum: f64 = self
            .levels
            .iter()
            .map(|&(e, rho)| rho * (emax - e).powf(p))
            .sum();
        Ok(sum.powf(1.0 / p))
    }

    /// Mean, standard deviation, ground energy, and maximum energy.
    pub fn moments(&self) -> MomentSummary {
        let mean: f64 = self.levels.iter().map(|&(e, rho)| rho * e).sum();
        let var: f64 = self
            .levels
            .iter()
            .map(|&(e, rho)| rho * (e - mean) * (e - mean))
            .sum();
        MomentSummary {
            mean,
            std: var.max(0.0).sqrt(),
            e0: self.ground_energy,
            emax: self.max_energy,
        }
    }

    /// Orthogonality times of the MT bound, the order-`p` bound, and (when a
    /// maximum energy exists) its dual. Errors for stationary states, whose
    /// orthogonality times are unbounded.
    pub fn orthogonality_times(&self, p: f64) -> Result<OrthogonalityTimes> {
        let summary = self.moments();
        if summary.std <= 0.0 {
            return Err(Error::StationaryState("energy spread"));
        }
        let ep = self.moment_ep(p)?;
        if ep <= 0.0 {
            return Err(Error::StationaryState("energy moment"));
        }
        let tau_mt = PI / (2.0 * summary.std);
        let tau_p = PI / (2.0_f64.powf(1.0 / p) * ep);
        let tau_p_star = match self.max_energy {
            Some(_) => {
                let ep_star = self.dual_moment_ep(p)?;
                if ep_star <= 0.0 {
                    return Err(Error::StationaryState("dual energy moment"));
                }
                Some(PI / (2.0_f64.powf(1.0 / p) * ep_star))
            }
            None => None,
        };
        Ok(OrthogonalityTimes {
            tau_mt,
            tau_p,
            tau_p_star,
        })
    }
}

/// First and second moments of a spectrum, the inputs to the regime diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    /// Mean energy (absolute, not above-ground).
    pub mean: f64,
    /// Energy standard deviation.
    pub std: f64,
    /// Ground energy of the Hamiltonian.
    pub e0: f64,
    /// Maximum energy, when the Hamiltonian is bounded above.
    pub emax: Option<f64>,
}

impl MomentSummary {
    /// Which bound family governs these moments.
    ///
    /// ML when the above-ground mean is below the spread, dual ML when the
    /// below-maximum mean is, MT when neither; ties within `tol` (relative)
    /// are Critical.
    pub fn regime(&self, tol: f64) -> Regime {
        let above = self.mean - self.e0;
        let spread = self.std;
        let scale = above.abs().max(spread.abs()).max(f64::MIN_POSITIVE);
        if (above - spread).abs() <= tol * scale {
            return Regime::Critical;
        }
        if let Some(emax) = self.emax {
            let below = emax - self.mean;
            let dual_scale = below.abs().max(spread.abs()).max(f64::MIN_POSITIVE);
            if (below - spread).abs() <= tol * dual_scale {
                return Regime::Critical;
            }
            if below < spread {
                return Regime::DualMl;
            }
        }
        if above < spread {
            Regime::Ml
        } else {
            Regime::Mt
        }
    }
}

/// Orthogonality times for one moment order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityTimes {
    pub tau_mt: f64,
    pub tau_p: f64,
    pub tau_p_star: Option<f64>,
}

/// The bound family governing a spectrum's speed limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Ml,
    DualMl,
    Mt,
    Critical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Ml => write!(f, "ML"),
            Regime::DualMl => write!(f, "DualML"),
            Regime::Mt => write!(f, "MT"),
            Regime::Critical => write!(f, "Critical"),
        }
    }
}

/// Default relative tolerance for declaring a spectrum Critical.
pub const REGIME_TOL: f64 = 1e-9;

/// Classify a spectrum into the ML / dual-ML / MT / Critical regimes.
pub fn classify_regime(spectrum: &EnergySpectrum, tol: f64) -> Regime {
    spectrum.moments().regime(tol)
}

/// Moments of a coherent state of a free resonator at frequency `nu`:
/// mean `nu |alpha|^2`, spread `nu |alpha|`, no maximum energy.
pub fn coherent_moments(alpha: Complex64, nu: f64) -> MomentSummary {
    let a2 = alpha.norm_sqr();
    MomentSummary {
        mean: nu * a2,
        std: nu * a2.sqrt(),
        e0: 0.0,
        emax: None,
    }
}

/// Moments of a squeezed vacuum state with squeezing amplitude `r`:
/// mean `nu sinh^2 r`, spread `sqrt(2) nu sinh r cosh r`. Always in the ML
/// regime for `r > 0`.
pub fn squeezed_moments(r: f64, nu: f64) -> Result<MomentSummary> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            what: "squeezing amplitude r",
            value: r,
            domain: "[0, inf)",
        });
    }
    Ok(MomentSummary {
        mean: nu * r.sinh() * r.sinh(),
        std: 2.0_f64.sqrt() * nu * r.sinh() * r.cosh(),
        e0: 0.0,
        emax: None,
    })
}

/// Whether the MT bound dominates every GML and dual GML bound across
/// `t_grid`: `true` when no bound ever exceeds it, `false` when a
/// generalized crossover exists. Past the MT window the MT bound is spent,
/// so any still-open positive bound there also ends dominance.
pub fn mt_dominance_scan(
    spectrum: &EnergySpectrum,
    p_grid: &[f64],
    t_grid: &[f64],
) -> Result<bool> {
    if t_grid.is_empty() {
        return Err(Error::Domain {
            what: "t grid size",
            value: 0.0,
            domain: "nonempty",
        });
    }
    let family = GmlFamily::new(p_grid)?;
    let set = UnifiedBoundSet::new(&family, spectrum)?;
    for &t in t_grid {
        if !(t >= 0.0) {
            return Err(Error::Domain {
                what: "t",
                value: t,
                domain: "[0, inf)",
            });
        }
        let mt = set.mt_at(t).unwrap_or(0.0);
        let gml = set.gml_envelope_at(t).unwrap_or(0.0);
        let dual = set.dual_envelope_at(t).unwrap_or(0.0);
        if gml.max(dual) > mt + DOMINANCE_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::default_p_grid;

    fn three_level(pops: [f64; 3]) -> EnergySpectrum {
        EnergySpectrum::new(
            vec![(0.0, pops[0]), (1.0, pops[1]), (2.0, pops[2])],
            0.0,
            Some(2.0),
        )
        .unwrap()
    }

    #[test]
    fn spectrum_validation() {
        assert!(EnergySpectrum::new(vec![], 0.0, None).is_err());
        assert!(EnergySpectrum::new(vec![(0.0, 0.5), (1.0, 0.4)], 0.0, None).is_err());
        assert!(EnergySpectrum::new(vec![(0.0, 1.5), (1.0, -0.5)], 0.0, None).is_err());
        assert!(EnergySpectrum::new(vec![(-1.0, 1.0)], 0.0, None).is_err());
        assert!(EnergySpectrum::new(vec![(3.0, 1.0)], 0.0, Some(2.0)).is_err());
        assert!(EnergySpectrum::new(vec![(1.0, 1.0)], 0.0, Some(2.0)).is_ok());
    }

    #[test]
    fn moment_of_ground_state_vanishes() {
        let s = EnergySpectrum::new(vec![(0.0, 1.0)], 0.0, Some(0.0)).unwrap();
        for &p in &[0.3, 1.0, 2.0, 7.5] {
            assert_eq!(s.moment_ep(p).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_moment_is_mean_above_ground() {
        let s = EnergySpectrum::new(vec![(1.0, 0.25), (3.0, 0.75)], 0.5, None).unwrap();
        let mean = 0.25 * 1.0 + 0.75 * 3.0;
        assert!((s.moment_ep(1.0).unwrap() - (mean - 0.5)).abs() < 1e-15);
        assert!((s.moments().mean - mean).abs() < 1e-15);
    }

    #[test]
    fn two_level_moments_match_closed_forms() {
        let z: f64 = 0.3;
        let eps1 = 2.0;
        let s = EnergySpectrum::two_level(z, eps1).unwrap();
        for &p in &[0.5, 1.0, 2.0, 5.0] {
            let ep = s.moment_ep(p).unwrap();
            assert!((ep - z.powf(1.0 / p) * eps1).abs() < 1e-12, "p={p}");
            let dual = s.dual_moment_ep(p).unwrap();
            assert!((dual - eps1 * (1.0 - z).powf(1.0 / p)).abs() < 1e-12, "p={p}");
        }
        assert!((s.dual_moment_ep(1.0).unwrap() - eps1 * 0.7).abs() < 1e-15);
    }

    #[test]
    fn dual_moment_requires_max_energy() {
        let s = EnergySpectrum::new(vec![(0.0, 0.5), (1.0, 0.5)], 0.0, None).unwrap();
        assert!(matches!(
            s.dual_moment_ep(2.0),
            Err(Error::MissingMaxEnergy)
        ));
    }

    #[test]
    fn dual_moment_of_top_level_state_vanishes() {
        let s = EnergySpectrum::new(vec![(2.0, 1.0)], 0.0, Some(2.0)).unwrap();
        assert_eq!(s.dual_moment_ep(3.0).unwrap(), 0.0);
    }

    #[test]
    fn orthogonality_times_two_level() {
        let nu = 1.0;
        let equal = EnergySpectrum::two_level(0.5, nu).unwrap();
        let times = equal.orthogonality_times(1.0).unwrap();
        assert!((times.tau_mt - PI / nu).abs() < 1e-12);
        assert!((times.tau_p - PI / nu).abs() < 1e-12);
        assert!((times.tau_p_star.unwrap() - PI / nu).abs() < 1e-12);

        let skew = EnergySpectrum::two_level(0.2, nu).unwrap();
        let times = skew.orthogonality_times(1.0).unwrap();
        assert!((times.tau_mt - 1.25 * PI / nu).abs() < 1e-12);
        assert!((times.tau_p - 2.5 * PI / nu).abs() < 1e-12);

        let eigen = EnergySpectrum::new(vec![(1.0, 1.0)], 0.0, Some(1.0)).unwrap();
        assert!(matches!(
            eigen.orthogonality_times(1.0),
            Err(Error::StationaryState(_))
        ));
    }

    #[test]
    fn power_mean_monotone_in_p() {
        let s = three_level([0.2, 0.5, 0.3]);
        let orders = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
        let mut prev = 0.0;
        for &p in &orders {
            let ep = s.moment_ep(p).unwrap();
            assert!(ep + 1e-12 >= prev, "p={p}: {ep} < {prev}");
            prev = ep;
        }
    }

    #[test]
    fn bhatia_davis_holds() {
        let s = three_level([0.2, 0.5, 0.3]);
        let m = s.moments();
        let emax = m.emax.unwrap();
        assert!(m.std * m.std <= (m.mean - m.e0) * (emax - m.mean) + 1e-12);
    }

    #[test]
    fn regimes_of_reference_two_level_states() {
        // (2|0> + |1>)/sqrt(5), (|0> + 2|1>)/sqrt(5), (|0> + |1>)/sqrt(2)
        let ml = EnergySpectrum::two_level(0.2, 1.0).unwrap();
        let dual = EnergySpectrum::two_level(0.8, 1.0).unwrap();
        let critical = EnergySpectrum::two_level(0.5, 1.0).unwrap();
        assert_eq!(classify_regime(&ml, REGIME_TOL), Regime::Ml);
        assert_eq!(classify_regime(&dual, REGIME_TOL), Regime::DualMl);
        assert_eq!(classify_regime(&critical, REGIME_TOL), Regime::Critical);
    }

    #[test]
    fn regimes_of_reference_three_level_states() {
        let dual = three_level([7.0 / 162.0, 40.0 / 162.0, 115.0 / 162.0]);
        let ml = three_level([7.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0]);
        let mt = three_level([2.0 / 9.0, 5.0 / 9.0, 2.0 / 9.0]);
        assert_eq!(classify_regime(&dual, REGIME_TOL), Regime::DualMl);
        assert_eq!(classify_regime(&ml, REGIME_TOL), Regime::Ml);
        assert_eq!(classify_regime(&mt, REGIME_TOL), Regime::Mt);
    }

    #[test]
    fn regime_invariant_under_energy_shift() {
        let base = three_level([0.3, 0.45, 0.25]);
        let shift = 1.7;
        let shifted = EnergySpectrum::new(
            base.levels()
                .iter()
                .map(|&(e, rho)| (e + shift, rho))
                .collect(),
            base.ground_energy() + shift,
            base.max_energy().map(|e| e + shift),
        )
        .unwrap();
        assert_eq!(
            classify_regime(&base, REGIME_TOL),
            classify_regime(&shifted, REGIME_TOL)
        );
    }

    #[test]
    fn coherent_moments_and_regimes() {
        let nu = 3.0;
        let zero = coherent_moments(Complex64::new(0.0, 0.0), nu);
        assert_eq!((zero.mean, zero.std), (0.0, 0.0));
        let unit = coherent_moments(Complex64::new(0.6, 0.8), nu);
        assert!((unit.mean - nu).abs() < 1e-12 && (unit.std - nu).abs() < 1e-12);
        assert_eq!(unit.regime(REGIME_TOL), Regime::Critical);
        let small = coherent_moments(Complex64::new(0.4, 0.0), nu);
        assert_eq!(small.regime(REGIME_TOL), Regime::Ml);
        let large = coherent_moments(Complex64::new(2.0, 0.0), nu);
        assert_eq!(large.regime(REGIME_TOL), Regime::Mt);
    }

    #[test]
    fn squeezed_moments_always_ml() {
        let nu = 1.0;
        let vac = squeezed_moments(0.0, nu).unwrap();
        assert_eq!((vac.mean, vac.std), (0.0, 0.0));
        for &r in &[0.1, 0.25, 0.5, 1.5] {
            let m = squeezed_moments(r, nu).unwrap();
            assert!(m.std > m.mean, "r={r}");
            assert_eq!(m.regime(REGIME_TOL), Regime::Ml);
        }
        let half = squeezed_moments(0.5, nu).unwrap();
        let ratio = half.std / half.mean;
        let expect = 2.0_f64.sqrt() / 0.5_f64.tanh();
        assert!((ratio - expect).abs() < 1e-12);
        assert!(squeezed_moments(-0.1, nu).is_err());
    }

    #[test]
    fn dominance_scan_reference_states() {
        let p_grid = default_p_grid();
        let grid_over = |tau: f64| -> Vec<f64> {
            (1..=512).map(|k| tau * k as f64 / 512.0).collect()
        };

        let mt_state = three_level([2.0 / 9.0, 5.0 / 9.0, 2.0 / 9.0]);
        let tau_mt = mt_state.orthogonality_times(1.0).unwrap().tau_mt;
        assert!(mt_dominance_scan(&mt_state, &p_grid, &grid_over(tau_mt)).unwrap());

        let amps = [5.0, 4.5, 3.8, 2.0, 1.0];
        let norm: f64 = amps.iter().map(|a| a * a).sum();
        let five = EnergySpectrum::new(
            amps.iter()
                .enumerate()
                .map(|(n, a)| (n as f64, a * a / norm))
                .collect(),
            0.0,
            Some(4.0),
        )
        .unwrap();
        let tau_mt = five.orthogonality_times(1.0).unwrap().tau_mt;
        assert!(!mt_dominance_scan(&five, &p_grid, &grid_over(tau_mt)).unwrap());

        let two = EnergySpectrum::two_level(0.2, 1.0).unwrap();
        let tau_mt = two.orthogonality_times(1.0).unwrap().tau_mt;
        assert!(!mt_dominance_scan(&two, &p_grid, &grid_over(tau_mt)).unwrap());
    }
}
