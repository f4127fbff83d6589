//! Quantum speed limits for arbitrary energy spectra, truncated Fock-space
//! simulation of bosonic states, and a simulated tomography pipeline.
//!
//! The crate computes the Mandelstam-Tamm bound, the generalized
//! Margolus-Levitin bounds of any positive moment order, and their duals for
//! up-bounded spectra; classifies spectra into the regimes where each family
//! governs the speed limit; simulates the free evolution of photonic states
//! against those bounds; and reconstructs density matrices from simulated
//! displaced-diagonal measurements.
//!
//! Units: `hbar = 1`, energies and frequencies in angular-frequency units,
//! times in the matching inverse units.

pub mod bounds;
pub mod error;
pub mod fock;
pub mod spectra;
pub mod tomography;

pub use bounds::{
    default_p_grid, dual_gml_overlap_bound, geometric_grid, gml_constraint_residual,
    gml_overlap_bound, inverse_gml_bound, mt_overlap_bound, quadratic_gml_closed_form, tight_p,
    two_level_first_hit_time, two_level_overlap, unified_bound_time, unified_overlap_envelope,
    BoundCurve, BoundFamily, BoundKind, GmlBound, GmlFamily, ReducedTime, TwoLevelState,
    UnifiedBoundSet,
};
pub use error::{Error, Result};
pub use fock::{
    coherent_state, coherent_state_auto, density_overlap, displacement_matrix, overlap,
    spectrum_of_state, squeezed_coherent_state, squeezed_coherent_state_auto,
    squeezed_vacuum_state, squeezed_vacuum_state_auto, wigner, wigner_at, DensityMatrix,
    FockState, WignerGrid, WignerSpec,
};
pub use spectra::{
    classify_regime, coherent_moments, mt_dominance_scan, squeezed_moments, EnergySpectrum,
    MomentSummary, OrthogonalityTimes, Regime, REGIME_TOL,
};
pub use tomography::{
    default_displacement_grid, displaced_diagonals, fidelity, fit_diagonals, reconstruct_density,
    simulate_swap_signal, synthesize_measurements, DisplacedRecord, MeasurementSet, SwapSignal,
};
