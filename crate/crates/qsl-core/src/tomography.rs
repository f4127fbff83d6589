//! Simulated measurement chain of a resonator probed by an ancilla qubit:
//! swap signals exposing photon-number populations, displaced diagonal
//! records, and least-squares reconstruction of the full density matrix.

use crate::error::{Error, Result};
use crate::fock::{displacement_matrix, DensityMatrix, FockState};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Slack on population sums and non-negativity checks.
const POPULATION_SLACK: f64 = 1e-9;
/// Ridge regularization added to the reconstruction normal equations.
const RIDGE: f64 = 1e-10;
/// Relative singular-value threshold below which the design matrix is
/// declared rank-deficient.
const RANK_TOL: f64 = 1e-8;

/// Qubit excitation probabilities after resonant swaps of varying duration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapSignal {
    pub omega: f64,
    pub taus: Vec<f64>,
    pub pe: Vec<f64>,
    pub noise_sigma: f64,
}

/// Photon-number populations seen after displacing the resonator by `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacedRecord {
    pub alpha: Complex64,
    pub diagonals: Vec<f64>,
}

/// Excitation signal `P_e(tau) = sum_n rho_nn (1 - cos(2 sqrt(n) omega tau)) / 2`
/// for the given populations, with optional seeded Gaussian readout noise.
/// Probabilities are clamped to `[0, 1]` after the noise is added.
pub fn simulate_swap_signal(
    diag: &[f64],
    omega: f64,
    taus: &[f64],
    noise_sigma: f64,
    seed: u64,
) -> Result<SwapSignal> {
    validate_populations(diag)?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain {
            what: "omega",
            value: omega,
            domain: "(0, inf)",
        });
    }
    if !(noise_sigma >= 0.0) || !noise_sigma.is_finite() {
        return Err(Error::Domain {
            what: "noise_sigma",
            value: noise_sigma,
            domain: "[0, inf)",
        });
    }
    for w in taus.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Domain {
                what: "tau",
                value: w[1],
                domain: "strictly increasing",
            });
        }
    }
    let mut pe: Vec<f64> = taus
        .iter()
        .map(|&tau| {
            diag.iter()
                .enumerate()
                .map(|(n, &rho)| rho * 0.5 * (1.0 - (2.0 * (n as f64).sqrt() * omega * tau).cos()))
                .sum()
        })
        .collect();
    if noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise_sigma).expect("finite non-negative sigma");
        for v in &mut pe {
            *v += normal.sample(&mut rng);
        }
    }
    for v in &mut pe {
        *v = v.clamp(0.0, 1.0);
    }
    Ok(SwapSignal {
        omega,
        taus: taus.to_vec(),
        pe,
        noise_sigma,
    })
}

fn validate_populations(diag: &[f64]) -> Result<()> {
    if diag.is_empty() {
        return Err(Error::InvalidPopulations("empty population vector".into()));
    }
    let mut total = 0.0;
    for &d in diag {
        if !d.is_finite() || d < -POPULATION_SLACK {
            return Err(Error::InvalidPopulations(format!("population {d}")));
        }
        total += d.max(0.0);
    }
    if total > 1.0 + POPULATION_SLACK {
        return Err(Error::InvalidPopulations(format!(
            "populations sum to {total} > 1"
        )));
    }
    Ok(())
}

/// Least-squares fit of `n_levels` populations to a swap signal.
///
/// The vacuum never excites the qubit, so its population is fixed by
/// completeness rather than fitted; the result is clipped to `[0, 1]` and
/// renormalized to unit sum.
pub fn fit_diagonals(signal: &SwapSignal, n_levels: usize) -> Result<Vec<f64>> {
    if n_levels == 0 {
        return Err(Error::Domain {
            what: "n_levels",
            value: 0.0,
            domain: "positive",
        });
    }
    let samples = signal.taus.len();
    if samples < n_levels + 1 {
        return Err(Error::UnderdeterminedSystem {
            samples,
            unknowns: n_levels,
        });
    }
    let unknowns = n_levels - 1;
    let mut diag = vec![0.0_f64; n_levels];
    if unknowns > 0 {
        let design = DMatrix::from_fn(samples, unknowns, |i, j| {
            let n = (j + 1) as f64;
            0.5 * (1.0 - (2.0 * n.sqrt() * signal.omega * signal.taus[i]).cos())
        });
        let rhs = DVector::from_column_slice(&signal.pe);
        let svd = design.svd(true, true);
        let max_sv = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > RANK_TOL * max_sv)
            .count();
        if rank < unknowns {
            return Err(Error::UnderdeterminedSystem {
                samples,
                unknowns: n_levels,
            });
        }
        let solution = svd.solve(&rhs, RANK_TOL * max_sv).expect("svd computed");
        diag[1..].copy_from_slice(solution.as_slice());
    }
    diag[0] = 1.0 - diag[1..].iter().sum::<f64>();
    for v in &mut diag {
        *v = v.clamp(0.0, 1.0);
    }
    let total: f64 = diag.iter().sum();
    if total > 0.0 {
        for v in &mut diag {
            *v /= total;
        }
    }
    Ok(diag)
}

/// Diagonal of `D(alpha) rho D(alpha)^dag` over the same truncated basis.
pub fn displaced_diagonals(rho: &DensityMatrix, alpha: Complex64) -> DisplacedRecord {
    let d = displacement_matrix(alpha, rho.cutoff());
    let transformed = &d * rho.matrix() * d.adjoint();
    let diagonals = (0..transformed.nrows())
        .map(|n| transformed[(n, n)].re)
        .collect();
    DisplacedRecord { alpha, diagonals }
}

/// Least-squares reconstruction of a density matrix from displaced diagonal
/// records, followed by projection onto the physical (PSD, unit-trace) set.
pub fn reconstruct_density(records: &[DisplacedRecord], n_prime: usize) -> Result<DensityMatrix> {
    let dim = n_prime + 1;
    let params = dim * dim;
    if records.is_empty() {
        return Err(Error::InsufficientData("no displacement records".into()));
    }
    for r in records {
        if r.diagonals.len() != dim {
            return Err(Error::DimensionMismatch {
                left: r.diagonals.len(),
                right: dim,
            });
        }
    }

    // Real parameterization: dim diagonals, then the real and imaginary
    // parts of the upper-triangle entries.
    let off_diag = dim * (dim - 1) / 2;
    let rows = records.len() * dim + 1;
    let mut design = DMatrix::zeros(rows, params);
    let mut rhs = DVector::zeros(rows);
    let mut row = 0;
    for record in records {
        let d = displacement_matrix(record.alpha, n_prime);
        for n in 0..dim {
            for n1 in 0..dim {
                design[(row, n1)] = d[(n, n1)].norm_sqr();
            }
            let mut col = dim;
            for n1 in 0..dim {
                for n2 in n1 + 1..dim {
                    let coeff = d[(n, n1)] * d[(n, n2)].conj();
                    design[(row, col)] = 2.0 * coeff.re;
                    design[(row, col + off_diag)] = -2.0 * coeff.im;
                    col += 1;
                }
            }
            rhs[row] = record.diagonals[n];
            row += 1;
        }
    }
    for n in 0..dim {
        design[(row, n)] = 1.0;
    }
    rhs[row] = 1.0;

    let svd = design.svd(true, true);
    let max_sv = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL * max_sv)
        .count();
    if rank < params {
        return Err(Error::InsufficientData(format!(
            "design matrix rank {rank} < {params}; add displacement amplitudes or phases"
        )));
    }
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let mut projected = u.transpose() * rhs;
    for (k, v) in projected.iter_mut().enumerate() {
        let s = svd.singular_values[k];
        *v *= s / (s * s + RIDGE);
    }
    let x = v_t.transpose() * projected;

    let mut est = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        est[(n, n)] = Complex64::new(x[n], 0.0);
    }
    let mut col = dim;
    for n1 in 0..dim {
        for n2 in n1 + 1..dim {
            let value = Complex64::new(x[col], x[col + off_diag]);
            est[(n1, n2)] = value;
            est[(n2, n1)] = value.conj();
            col += 1;
        }
    }
    project_to_physical(est)
}

/// Clip negative eigenvalues to zero and renormalize the trace.
fn project_to_physical(est: DMatrix<Complex64>) -> Result<DensityMatrix> {
    let dim = est.nrows();
    let eig = est.symmetric_eigen();
    let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::InsufficientData(
            "estimate collapsed to the zero matrix".into(),
        ));
    }
    let mut rho = DMatrix::zeros(dim, dim);
    for (k, &l) in clipped.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        rho += &v * v.adjoint() * Complex64::new(l / total, 0.0);
    }
    DensityMatrix::new(rho)
}

/// State-preparation fidelity `<psi| rho |psi>`; the target is zero-padded up
/// to the matrix cutoff.
pub fn fidelity(rho: &DensityMatrix, target: &FockState) -> Result<f64> {
    if target.cutoff() > rho.cutoff() {
        return Err(Error::DimensionMismatch {
            left: target.cutoff(),
            right: rho.cutoff(),
        });
    }
    let padded = target.zero_padded(rho.cutoff())?;
    let v = DVector::from_column_slice(padded.amplitudes());
    Ok((v.adjoint() * rho.matrix() * &v)[(0, 0)].re)
}

/// The displacement amplitudes used when none are configured: the identity
/// plus two rings of `4 (n_prime + 1)` phases whose radii scale with the
/// state's photon content (floored for near-vacuum states).
pub fn default_displacement_grid(n_prime: usize, mean_photon: f64) -> Vec<Complex64> {
    let phases = 4 * (n_prime + 1);
    let a1 = mean_photon.max(0.0).sqrt().max(0.5);
    let a2 = (2.0 * mean_photon.max(0.0).sqrt()).max(1.0);
    let mut grid = vec![Complex64::ZERO];
    for &radius in &[a1, a2] {
        for k in 0..phases {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / phases as f64;
            grid.push(Complex64::from_polar(radius, angle));
        }
    }
    grid
}

/// One complete synthetic measurement run: the swap-time grid, the raw
/// excitation signal of the first displacement, and the fitted displaced
/// diagonals for every displacement amplitude.
///
/// Serializes to `{omega, taus[], pe[], alphas[], diagonals[][]}` with
/// `alphas` as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSet {
    pub omega: f64,
    pub taus: Vec<f64>,
    pub pe: Vec<f64>,
    pub alphas: Vec<[f64; 2]>,
    pub diagonals: Vec<Vec<f64>>,
}

impl MeasurementSet {
    pub fn records(&self) -> Result<Vec<DisplacedRecord>> {
        if self.alphas.len() != self.diagonals.len() {
            return Err(Error::DimensionMismatch {
                left: self.alphas.len(),
                right: self.diagonals.len(),
            });
        }
        Ok(self
            .alphas
            .iter()
            .zip(&self.diagonals)
            .map(|(&[re, im], diag)| DisplacedRecord {
                alpha: Complex64::new(re, im),
                diagonals: diag.clone(),
            })
            .collect())
    }
}

/// Binomially resample each probability at a finite shot count, seeded.
pub fn binomial_sample(signal: &SwapSignal, shots: u64, seed: u64) -> Result<SwapSignal> {
    if shots == 0 {
        return Err(Error::Domain {
            what: "shots",
            value: 0.0,
            domain: "positive",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pe = signal
        .pe
        .iter()
        .map(|&p| {
            let binomial = rand_distr::Binomial::new(shots, p).expect("probability in [0, 1]");
            binomial.sample(&mut rng) as f64 / shots as f64
        })
        .collect();
    Ok(SwapSignal {
        omega: signal.omega,
        taus: signal.taus.clone(),
        pe,
        noise_sigma: signal.noise_sigma,
    })
}

/// Run the full forward chain for every displacement: displace, generate the
/// swap signal (noise seeded per displacement), and fit the diagonals back
/// out of the signal.
pub fn synthesize_measurements(
    rho: &DensityMatrix,
    alphas: &[Complex64],
    omega: f64,
    taus: &[f64],
    noise_sigma: f64,
    seed: u64,
) -> Result<MeasurementSet> {
    synthesize_measurements_at(rho, rho.cutoff() + 1, alphas, omega, taus, noise_sigma, 0, seed)
}

/// As `synthesize_measurements`, but fitting only `n_levels` populations out
/// of each signal (the reconstruction cutoff may sit below the state's) and
/// optionally resampling every probability at `shots` shots.
#[allow(clippy::too_many_arguments)]
pub fn synthesize_measurements_at(
    rho: &DensityMatrix,
    n_levels: usize,
    alphas: &[Complex64],
    omega: f64,
    taus: &[f64],
    noise_sigma: f64,
    shots: u64,
    seed: u64,
) -> Result<MeasurementSet> {
    if alphas.is_empty() {
        return Err(Error::InsufficientData("no displacement amplitudes".into()));
    }
    if n_levels > rho.cutoff() + 1 {
        return Err(Error::DimensionMismatch {
            left: n_levels,
            right: rho.cutoff() + 1,
        });
    }
    let mut first_pe = Vec::new();
    let mut diagonals = Vec::with_capacity(alphas.len());
    for (k, &alpha) in alphas.iter().enumerate() {
        let displaced = displaced_diagonals(rho, alpha);
        let mut signal = simulate_swap_signal(
            &displaced.diagonals,
            omega,
            taus,
            noise_sigma,
            seed.wrapping_add(k as u64),
        )?;
        if shots > 0 {
            signal = binomial_sample(&signal, shots, seed.wrapping_add(0x5151).wrapping_add(k as u64))?;
        }
        if k == 0 {
            first_pe = signal.pe.clone();
        }
        diagonals.push(fit_diagonals(&signal, n_levels)?);
    }
    Ok(MeasurementSet {
        omega,
        taus: taus.to_vec(),
        pe: first_pe,
        alphas: alphas.iter().map(|a| [a.re, a.im]).collect(),
        diagonals,
    })
}
