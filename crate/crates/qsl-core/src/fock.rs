//! Bosonic states in a truncated photon-number basis: construction of
//! coherent and squeezed states, free evolution, overlaps, density matrices,
//! displacement operators, and Wigner functions.
//!
//! Conventions: `hbar = 1`; the free Hamiltonian is `nu a^dag a`; Wigner
//! functions are sampled on the complex-amplitude plane `alpha = x + i p`
//! and normalized so the full-plane integral is 1.

use crate::error::{Error, Result};
use crate::spectra::EnergySpectrum;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest truncated tail mass a constructed state may lose.
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;
/// Levels added above the requested cutoff when exponentiating the
/// displacement generator.
pub const DISPLACEMENT_PADDING: usize = 10;
/// Population threshold below which trailing levels are dropped when a state
/// is converted into an energy spectrum.
const OCCUPIED_TOL: f64 = 1e-12;

const NORM_TOL: f64 = 1e-10;
const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const EIGENVALUE_TOL: f64 = 1e-8;

/// A normalized pure state over the photon-number basis `|0> .. |cutoff>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amps: Vec<Complex64>,
}

impl FockState {
    /// Amplitudes must already be normalized to within 1e-10.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let norm2: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "squared norm {norm2} differs from 1 by more than {NORM_TOL:.0e}"
            )));
        }
        Ok(FockState { amps })
    }

    /// Normalize an arbitrary nonzero amplitude vector.
    pub fn from_unnormalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidState(format!(
                "cannot normalize vector with squared norm {norm2}"
            )));
        }
        let scale = norm2.sqrt();
        Ok(FockState {
            amps: amps.into_iter().map(|c| c / scale).collect(),
        })
    }

    pub fn vacuum(cutoff: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; cutoff + 1];
        amps[0] = Complex64::ONE;
        FockState { amps }
    }

    pub fn number_state(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::DimensionMismatch {
                left: n,
                right: cutoff,
            });
        }
        let mut amps = vec![Complex64::ZERO; cutoff + 1];
        amps[n] = Complex64::ONE;
        Ok(FockState { amps })
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn mean_photon(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// The same state embedded in a larger basis.
    pub fn zero_padded(&self, cutoff: usize) -> Result<Self> {
        if cutoff < self.cutoff() {
            return Err(Error::DimensionMismatch {
                left: self.cutoff(),
                right: cutoff,
            });
        }
        let mut amps = self.amps.clone();
        amps.resize(cutoff + 1, Complex64::ZERO);
        Ok(FockState { amps })
    }

    /// Free evolution under `nu a^dag a` for time `t`: each amplitude picks
    /// up the phase `exp(-i n nu t)`, magnitudes unchanged.
    pub fn evolved(&self, nu: f64, t: f64) -> FockState {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64) * nu * t))
            .collect();
        FockState { amps }
    }

    /// Energy spectrum induced by the photon-number populations under the
    /// free Hamiltonian: level energies `n nu`, ground energy 0, maximum
    /// energy at the highest level still occupied above 1e-12. Trailing
    /// unoccupied levels are dropped and the rest renormalized.
    pub fn spectrum(&self, nu: f64) -> EnergySpectrum {
        assert!(nu > 0.0, "resonator frequency must be positive");
        let pops = self.populations();
        let n_max = pops
            .iter()
            .rposition(|&p| p > OCCUPIED_TOL)
            .unwrap_or(0);
        let total: f64 = pops[..=n_max].iter().sum();
        let levels = pops[..=n_max]
            .iter()
            .enumerate()
            .map(|(n, &p)| (n as f64 * nu, p / total))
            .collect();
        EnergySpectrum::new(levels, 0.0, Some(n_max as f64 * nu))
            .expect("populations of a normalized state form a valid spectrum")
    }
}

/// Truncated coherent state `|alpha>`, renormalized after truncation.
/// Errors when the truncated tail mass exceeds 1e-8.
pub fn coherent_state(alpha: Complex64, cutoff: usize) -> Result<FockState> {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 0..cutoff {
        c *= alpha / ((n + 1) as f64).sqrt();
        amps.push(c);
    }
    finish_truncated(amps, cutoff)
}

/// Truncated squeezed vacuum `S(zeta)|0>` with
/// `S(zeta) = exp[(zeta^* a^2 - zeta a^dag^2)/2]`. Only even levels are
/// populated.
pub fn squeezed_vacuum_state(zeta: Complex64, cutoff: usize) -> Result<FockState> {
    let r = zeta.norm();
    if r == 0.0 {
        return Ok(FockState::vacuum(cutoff));
    }
    let phase = zeta / r;
    let mut amps = vec![Complex64::ZERO; cutoff + 1];
    let mut c = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    amps[0] = c;
    let mut m = 0usize;
    while m + 2 <= cutoff {
        let k = m as f64;
        c *= -phase * r.tanh() * ((k + 1.0) * (k + 2.0)).sqrt() / (k + 2.0);
        amps[m + 2] = c;
        m += 2;
    }
    finish_truncated(amps, cutoff)
}

/// Truncated squeezed coherent state `D(alpha) S(zeta) |0>`: displacement
/// applied after squeezing.
pub fn squeezed_coherent_state(
    zeta: Complex64,
    alpha: Complex64,
    cutoff: usize,
) -> Result<FockState> {
    if alpha == Complex64::ZERO {
        return squeezed_vacuum_state(zeta, cutoff);
    }
    let work = cutoff + DISPLACEMENT_PADDING;
    let squeezed = squeezed_vacuum_state(zeta, work)?;
    let d = displacement_matrix(alpha, work);
    let displaced = &d * DVector::from_column_slice(squeezed.amplitudes());
    finish_truncated(displaced.as_slice()[..=cutoff].to_vec(), cutoff)
}

fn finish_truncated(amps: Vec<Complex64>, cutoff: usize) -> Result<FockState> {
    let norm2: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    let tail = 1.0 - norm2;
    if tail > DEFAULT_TAIL_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail,
            limit: DEFAULT_TAIL_TOL,
        });
    }
    FockState::from_unnormalized(amps)
}

/// Ceiling on the automatic cutoff search.
const MAX_AUTO_CUTOFF: usize = 1024;

fn grow_cutoff(
    mut cutoff: usize,
    build: impl Fn(usize) -> Result<FockState>,
) -> Result<FockState> {
    loop {
        match build(cutoff) {
            Err(Error::CutoffTooSmall { .. }) if cutoff < MAX_AUTO_CUTOFF => {
                cutoff = (cutoff * 2).clamp(cutoff + 4, MAX_AUTO_CUTOFF);
            }
            other => return other,
        }
    }
}

/// Coherent state with the cutoff grown from `min_cutoff` until the
/// truncated tail passes the 1e-8 limit.
pub fn coherent_state_auto(alpha: Complex64, min_cutoff: usize) -> Result<FockState> {
    grow_cutoff(min_cutoff, |c| coherent_state(alpha, c))
}

/// Squeezed vacuum with an automatically grown cutoff.
pub fn squeezed_vacuum_state_auto(zeta: Complex64, min_cutoff: usize) -> Result<FockState> {
    grow_cutoff(min_cutoff, |c| squeezed_vacuum_state(zeta, c))
}

/// Squeezed coherent state with an automatically grown cutoff.
pub fn squeezed_coherent_state_auto(
    zeta: Complex64,
    alpha: Complex64,
    min_cutoff: usize,
) -> Result<FockState> {
    grow_cutoff(min_cutoff, |c| squeezed_coherent_state(zeta, alpha, c))
}

/// Magnitude of the inner product of two equal-cutoff states.
pub fn overlap(a: &FockState, b: &FockState) -> Result<f64> {
    if a.amps.len() != b.amps.len() {
        return Err(Error::DimensionMismatch {
            left: a.amps.len(),
            right: b.amps.len(),
        });
    }
    let inner: Complex64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(inner.norm().clamp(0.0, 1.0))
}

/// A Hermitian, unit-trace, positive-semidefinite matrix over the truncated
/// photon-number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10), and eigenvalues
    /// above -1e-8. The stored matrix is the Hermitian part of the input.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::InvalidDensityMatrix(format!(
                "matrix is {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_gap = (&mat - mat.adjoint()).map(|c| c.norm()).max();
        if herm_gap > HERMITICITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "Hermiticity violated by {herm_gap:.3e}"
            )));
        }
        let mat = (&mat + mat.adjoint()).map(|c| c / 2.0);
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {trace} differs from 1"
            )));
        }
        let min_eig = mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -EIGENVALUE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn from_pure(state: &FockState) -> Self {
        let v = DVector::from_column_slice(state.amplitudes());
        DensityMatrix {
            mat: &v * v.adjoint(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.mat.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn diagonals(&self) -> Vec<f64> {
        (0..self.mat.nrows()).map(|n| self.mat[(n, n)].re).collect()
    }

    pub fn mean_photon(&self) -> f64 {
        (0..self.mat.nrows())
            .map(|n| n as f64 * self.mat[(n, n)].re)
            .sum()
    }

    /// The same operator embedded in a larger basis.
    pub fn zero_padded(&self, cutoff: usize) -> Result<Self> {
        if cutoff < self.cutoff() {
            return Err(Error::DimensionMismatch {
                left: self.cutoff(),
                right: cutoff,
            });
        }
        let mut mat = DMatrix::zeros(cutoff + 1, cutoff + 1);
        mat.view_mut((0, 0), (self.mat.nrows(), self.mat.ncols()))
            .copy_from(&self.mat);
        Ok(DensityMatrix { mat })
    }
}

/// Overlap magnitude `sqrt(Tr(rho0 rho_t))` between two density matrices.
pub fn density_overlap(rho0: &DensityMatrix, rho_t: &DensityMatrix) -> Result<f64> {
    if rho0.mat.nrows() != rho_t.mat.nrows() {
        return Err(Error::DimensionMismatch {
            left: rho0.mat.nrows(),
            right: rho_t.mat.nrows(),
        });
    }
    let product: f64 = rho0
        .mat
        .iter()
        .zip(rho_t.mat.iter())
        .map(|(a, b)| (a.conj() * b).re)
        .sum();
    Ok(product.clamp(0.0, 1.0).sqrt())
}

/// `exp(alpha a^dag - alpha^* a)` on exactly `dim` levels.
fn displacement_unitary(alpha: Complex64, dim: usize) -> DMatrix<Complex64> {
    // i K is Hermitian for the anti-Hermitian generator K, so the
    // exponential comes from one Hermitian eigendecomposition.
    let mut m = DMatrix::zeros(dim, dim);
    let i = Complex64::I;
    for n in 0..dim - 1 {
        let s = ((n + 1) as f64).sqrt();
        m[(n + 1, n)] = i * alpha * s;
        m[(n, n + 1)] = -i * (-alpha.conj()) * s;
    }
    let eig = m.symmetric_eigen();
    let phases = DVector::from_iterator(
        dim,
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -l)),
    );
    let mut scaled = eig.eigenvectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    &scaled * eig.eigenvectors.adjoint()
}

/// Matrix elements `<n|D(alpha)|n1>` for `n, n1 <= cutoff`, computed by
/// exponentiating the generator on a basis enlarged by ten levels and
/// truncating back. Column 0 holds the coherent-state amplitudes.
pub fn displacement_matrix(alpha: Complex64, cutoff: usize) -> DMatrix<Complex64> {
    let dim = cutoff + 1 + DISPLACEMENT_PADDING;
    let full = displacement_unitary(alpha, dim);
    full.view((0, 0), (cutoff + 1, cutoff + 1)).into_owned()
}

/// Rectangular sampling window for a Wigner function, on the plane
/// `alpha = x + i p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl WignerSpec {
    pub fn square(half_width: f64, n: usize) -> Self {
        WignerSpec {
            x_min: -half_width,
            x_max: half_width,
            p_min: -half_width,
            p_max: half_width,
            nx: n,
            np: n,
        }
    }

    /// A window centered on the state's phase-space mean and extending
    /// `n_sigma` quadrature standard deviations in each direction.
    pub fn covering(rho: &DensityMatrix, n_sigma: f64, n: usize) -> Self {
        let d = rho.matrix().nrows();
        let mut a_mean = Complex64::ZERO;
        let mut a2_mean = Complex64::ZERO;
        for n1 in 0..d - 1 {
            let s = ((n1 + 1) as f64).sqrt();
            a_mean += s * rho.matrix()[(n1, n1 + 1)];
            if n1 + 2 < d {
                let s2 = (((n1 + 1) * (n1 + 2)) as f64).sqrt();
                a2_mean += s2 * rho.matrix()[(n1, n1 + 2)];
            }
        }
        let n_mean = rho.mean_photon();
        let x0 = a_mean.re;
        let p0 = a_mean.im;
        let var_x = ((2.0 * a2_mean.re + 2.0 * n_mean + 1.0) / 4.0 - x0 * x0).max(0.01);
        let var_p = ((-2.0 * a2_mean.re + 2.0 * n_mean + 1.0) / 4.0 - p0 * p0).max(0.01);
        WignerSpec {
            x_min: x0 - n_sigma * var_x.sqrt(),
            x_max: x0 + n_sigma * var_x.sqrt(),
            p_min: p0 - n_sigma * var_p.sqrt(),
            p_max: p0 + n_sigma * var_p.sqrt(),
            nx: n,
            np: n,
        }
    }
}

/// Sampled Wigner function; `values[i][j]` belongs to `alpha = xs[i] + i ps[j]`.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Trapezoidal integral over the sampled window.
    pub fn integral(&self) -> f64 {
        let wx = trapezoid_weights(&self.xs);
        let wp = trapezoid_weights(&self.ps);
        self.values
            .iter()
            .zip(&wx)
            .map(|(row, wxi)| {
                wxi * row
                    .iter()
                    .zip(&wp)
                    .map(|(v, wpj)| v * wpj)
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    if xs.len() < 2 {
        return vec![0.0; xs.len()];
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let mut w = vec![h; xs.len()];
    w[0] = h / 2.0;
    *w.last_mut().unwrap() = h / 2.0;
    w
}

/// One displaced-parity sample of the Wigner function,
/// `W(alpha) = (2/pi) Tr[D(-alpha) rho D(alpha) Pi]`.
///
/// The displacement is exponentiated on a basis padded past the matrix
/// cutoff by an amount growing with `|alpha|`, so far-field samples stay
/// accurate.
pub fn wigner_at(rho: &DensityMatrix, alpha: Complex64) -> f64 {
    let d = rho.matrix().nrows();
    let mag = alpha.norm();
    let pad = DISPLACEMENT_PADDING + (mag * mag + 6.0 * mag).ceil() as usize;
    let dim = d + pad;
    let b = displacement_unitary(-alpha, dim);
    let block = b.view((0, 0), (dim, d));
    let shifted = &block * rho.matrix();
    let mut trace = 0.0;
    let mut sign = 1.0;
    for k in 0..dim {
        let mut row_sum = 0.0;
        for j in 0..d {
            row_sum += (shifted[(k, j)] * block[(k, j)].conj()).re;
        }
        trace += sign * row_sum;
        sign = -sign;
    }
    2.0 / PI * trace
}

/// Sample the Wigner function over a rectangular window.
pub fn wigner(rho: &DensityMatrix, spec: &WignerSpec) -> WignerGrid {
    assert!(
        spec.nx >= 2 && spec.np >= 2 && spec.x_max > spec.x_min && spec.p_max > spec.p_min,
        "degenerate Wigner window"
    );
    let xs: Vec<f64> = (0..spec.nx)
        .map(|i| spec.x_min + (spec.x_max - spec.x_min) * i as f64 / (spec.nx - 1) as f64)
        .collect();
    let ps: Vec<f64> = (0..spec.np)
        .map(|j| spec.p_min + (spec.p_max - spec.p_min) * j as f64 / (spec.np - 1) as f64)
        .collect();
    let values = xs
        .iter()
        .map(|&x| {
            ps.iter()
                .map(|&p| wigner_at(rho, Complex64::new(x, p)))
                .collect()
        })
        .collect();
    WignerGrid { xs, ps, values }
}

/// Energy spectrum of a state under the free Hamiltonian `nu a^dag a`.
pub fn spectrum_of_state(state: &FockState, nu: f64) -> EnergySpectrum {
    state.spectrum(nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{classify_regime, Regime, REGIME_TOL};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_and_number_states() {
        let v = FockState::vacuum(4);
        assert_eq!(v.populations()[0], 1.0);
        assert_eq!(v.mean_photon(), 0.0);
        let one = FockState::number_state(1, 4).unwrap();
        assert_eq!(overlap(&v, &one).unwrap(), 0.0);
        assert!(FockState::number_state(5, 4).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(FockState::new(vec![]).is_err());
        assert!(FockState::new(vec![c(0.9, 0.0)]).is_err());
        assert!(FockState::from_unnormalized(vec![c(0.0, 0.0)]).is_err());
        let s = FockState::from_unnormalized(vec![c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((s.populations()[0] - 0.36).abs() < 1e-15);
    }

    #[test]
    fn coherent_state_matches_poisson() {
        let alpha = c(1.0, 0.0);
        let s = coherent_state(alpha, 20).unwrap();
        assert!((s.mean_photon() - 1.0).abs() < 1e-6);
        assert_eq!(overlap(&s, &s).unwrap(), 1.0);
        let vac = coherent_state(c(0.0, 0.0), 3).unwrap();
        assert_eq!(vac.populations()[0], 1.0);
    }

    #[test]
    fn coherent_state_cutoff_guard() {
        match coherent_state(c(3.0, 0.0), 5) {
            Err(Error::CutoffTooSmall { tail, .. }) => assert!(tail > 1e-8),
            other => panic!("expected cutoff error, got {other:?}"),
        }
    }

    #[test]
    fn squeezed_vacuum_parity_and_moments() {
        let zeta = Complex64::from_polar(0.5, 3.0 * PI / 2.0);
        // Amplitude 0.5 squeezing carries more than 1e-8 of mass past level
        // 10; the automatic mode must grow the basis.
        assert!(matches!(
            squeezed_vacuum_state(zeta, 10),
            Err(Error::CutoffTooSmall { .. })
        ));
        let s = squeezed_vacuum_state_auto(zeta, 10).unwrap();
        assert!(s.cutoff() > 10);
        for n in (1..s.cutoff()).step_by(2) {
            assert_eq!(s.populations()[n], 0.0, "odd level {n} populated");
        }
        let r = 0.5_f64;
        assert!((s.mean_photon() - r.sinh().powi(2)).abs() < 1e-6);
        let vac = squeezed_coherent_state(c(0.0, 0.0), c(0.0, 0.0), 6).unwrap();
        assert_eq!(vac.populations()[0], 1.0);
    }

    #[test]
    fn squeezed_coherent_mean_photon() {
        // D(alpha) S(zeta) |0> has mean photon number |alpha|^2 + sinh^2 r.
        let zeta = Complex64::from_polar(0.4, 3.0 * PI / 2.0);
        let alpha = c(0.5, 0.3);
        let s = squeezed_coherent_state(zeta, alpha, 30).unwrap();
        let expect = alpha.norm_sqr() + 0.4_f64.sinh().powi(2);
        assert!(
            (s.mean_photon() - expect).abs() < 1e-6,
            "{} vs {expect}",
            s.mean_photon()
        );
    }

    #[test]
    fn evolution_preserves_populations_and_revives() {
        let nu = 2.0;
        let s = FockState::from_unnormalized(vec![c(1.0, 0.0), c(1.0, 0.5), c(0.3, 0.0)]).unwrap();
        let t0 = s.evolved(nu, 0.0);
        assert!((overlap(&s, &t0).unwrap() - 1.0).abs() < 1e-15);
        let evolved = s.evolved(nu, 0.37);
        for (a, b) in evolved.populations().iter().zip(s.populations()) {
            assert!((a - b).abs() < 1e-15);
        }
        let revived = s.evolved(nu, 2.0 * PI / nu);
        assert!((overlap(&s, &revived).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolved_coherent_state_stays_coherent() {
        let nu = 1.0;
        let alpha = c(1.0, 0.0);
        let s = coherent_state(alpha, 25).unwrap();
        let t = 0.83;
        let evolved = s.evolved(nu, t);
        let rotated = coherent_state(alpha * Complex64::from_polar(1.0, -nu * t), 25).unwrap();
        assert!((overlap(&evolved, &rotated).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn coherent_overlap_closed_form() {
        let nu = 1.0;
        let a2 = 1.0;
        let s = coherent_state(c(1.0, 0.0), 20).unwrap();
        for k in 0..12 {
            let t = 2.0 * PI * k as f64 / 12.0;
            let got = overlap(&s, &s.evolved(nu, t)).unwrap();
            let expect = (-a2 * (1.0 - (nu * t).cos())).exp();
            assert!((got - expect).abs() < 1e-6, "t={t}: {got} vs {expect}");
        }
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let a = FockState::vacuum(3);
        let b = FockState::vacuum(4);
        assert!(overlap(&a, &b).is_err());
        assert_eq!(overlap(&a.zero_padded(4).unwrap(), &b).unwrap(), 1.0);
    }

    #[test]
    fn density_matrix_validation() {
        let pure = DensityMatrix::from_pure(&FockState::vacuum(2));
        assert!(DensityMatrix::new(pure.matrix().clone()).is_ok());
        let mut bad_trace = pure.matrix().clone();
        bad_trace[(0, 0)] = c(0.9, 0.0);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let mut non_herm = pure.matrix().clone();
        non_herm[(0, 1)] = c(0.5, 0.0);
        assert!(DensityMatrix::new(non_herm).is_err());
        let mut indefinite = DMatrix::<Complex64>::zeros(2, 2);
        indefinite[(0, 0)] = c(1.5, 0.0);
        indefinite[(1, 1)] = c(-0.5, 0.0);
        assert!(DensityMatrix::new(indefinite).is_err());
    }

    #[test]
    fn density_overlap_matches_pure_overlap() {
        let a = FockState::from_unnormalized(vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.5)]).unwrap();
        let b = FockState::from_unnormalized(vec![c(0.3, 0.1), c(1.0, 0.0), c(0.8, 0.0)]).unwrap();
        let direct = overlap(&a, &b).unwrap();
        let via_density =
            density_overlap(&DensityMatrix::from_pure(&a), &DensityMatrix::from_pure(&b)).unwrap();
        assert!((via_density - direct).abs() < 1e-10);
        let v = DensityMatrix::from_pure(&FockState::vacuum(2));
        let one = DensityMatrix::from_pure(&FockState::number_state(1, 2).unwrap());
        assert_eq!(density_overlap(&v, &one).unwrap(), 0.0);
        assert_eq!(density_overlap(&v, &v).unwrap(), 1.0);
    }

    #[test]
    fn displacement_identity_at_zero() {
        let d = displacement_matrix(c(0.0, 0.0), 4);
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d[(i, j)] - c(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn displacement_first_column_is_coherent() {
        let alpha = c(0.8, -0.4);
        let d = displacement_matrix(alpha, 15);
        let coherent = coherent_state(alpha, 15).unwrap();
        for n in 0..=15 {
            assert!(
                (d[(n, 0)] - coherent.amplitudes()[n]).norm() < 1e-8,
                "element {n}"
            );
        }
    }

    #[test]
    fn displacement_matches_laguerre_form() {
        // <m|D(alpha)|n> = sqrt(n!/m!) alpha^(m-n) e^(-|alpha|^2/2)
        //                  L_n^(m-n)(|alpha|^2)   for m >= n.
        let alpha = c(0.6, 0.3);
        let x = alpha.norm_sqr();
        let d = displacement_matrix(alpha, 8);
        let gauss = (-x / 2.0).exp();
        for m in 0..=8_usize {
            for n in 0..=m {
                let k = (m - n) as i32;
                let lag = laguerre(n, k, x);
                let mut ratio = 1.0;
                for j in n + 1..=m {
                    ratio /= j as f64;
                }
                let expect = ratio.sqrt() * alpha.powi(k) * gauss * lag;
                assert!(
                    (d[(m, n)] - expect).norm() < 1e-10,
                    "m={m} n={n}: {} vs {expect}",
                    d[(m, n)]
                );
            }
        }
    }

    fn laguerre(n: usize, k: i32, x: f64) -> f64 {
        // Three-term recurrence for the associated Laguerre polynomial.
        let kf = k as f64;
        let mut prev = 1.0;
        if n == 0 {
            return prev;
        }
        let mut cur = 1.0 + kf - x;
        for m in 1..n {
            let mf = m as f64;
            let next = ((2.0 * mf + 1.0 + kf - x) * cur - (mf + kf) * prev) / (mf + 1.0);
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn displacement_block_unitary_on_low_levels() {
        // Columns whose displaced support stays far from the truncation edge
        // keep unit norm; the returned block is only the top-left corner of
        // the padded-space unitary.
        let d = displacement_matrix(c(0.3, -0.1), 20);
        let gram = d.adjoint() * &d;
        for j in 0..8 {
            assert!((gram[(j, j)].re - 1.0).abs() < 1e-10, "column {j}");
        }
    }

    #[test]
    fn wigner_reference_values() {
        let vac = DensityMatrix::from_pure(&FockState::vacuum(3));
        let spec = WignerSpec::square(3.0, 61);
        let grid = wigner(&vac, &spec);
        let center = grid.values[30][30];
        assert!((center - 2.0 / PI).abs() < 1e-6, "vacuum W(0) = {center}");
        assert!((grid.integral() - 1.0).abs() < 1e-2);
        assert!(grid.max_abs() <= 2.0 / PI + 1e-6);

        let one = DensityMatrix::from_pure(&FockState::number_state(1, 3).unwrap());
        let grid = wigner(&one, &spec);
        assert!((grid.values[30][30] + 2.0 / PI).abs() < 1e-6);
        assert!((grid.integral() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn wigner_of_displaced_vacuum_peaks_at_alpha() {
        let alpha = c(1.0, 0.5);
        let s = coherent_state(alpha, 12).unwrap();
        let rho = DensityMatrix::from_pure(&s);
        // Grid aligned so that the exact peak location is a sample point.
        let spec = WignerSpec {
            x_min: 0.0,
            x_max: 2.0,
            p_min: -0.5,
            p_max: 1.5,
            nx: 41,
            np: 41,
        };
        let grid = wigner(&rho, &spec);
        let (mut best, mut best_xy) = (f64::MIN, (0.0, 0.0));
        for (i, row) in grid.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > best {
                    best = v;
                    best_xy = (grid.xs[i], grid.ps[j]);
                }
            }
        }
        assert!((best - 2.0 / PI).abs() < 1e-6, "peak {best}");
        assert!((best_xy.0 - 1.0).abs() < 1e-12 && (best_xy.1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn spectrum_from_states() {
        let nu = 1.0;
        let vac = FockState::vacuum(5).spectrum(nu);
        assert_eq!(vac.levels().len(), 1);
        assert_eq!(vac.max_energy(), Some(0.0));

        let two = FockState::from_unnormalized(vec![c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        let spectrum = two.spectrum(nu);
        assert!((spectrum.levels()[0].1 - 0.8).abs() < 1e-15);
        assert!((spectrum.levels()[1].1 - 0.2).abs() < 1e-15);
        assert_eq!(classify_regime(&spectrum, REGIME_TOL), Regime::Ml);

        let coherent = coherent_state(c(1.0, 0.0), 20).unwrap().spectrum(nu);
        let mean = coherent.moments().mean;
        assert!((mean - nu).abs() < 1e-6);
    }
}
