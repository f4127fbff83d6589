//! The bound families limiting how fast a state's overlap with its initial
//! state can decay: the Mandelstam-Tamm (MT) bound, the generalized
//! Margolus-Levitin (GML) bounds of arbitrary positive moment order `p`, their
//! duals for spectra with a maximum energy, the quadratic closed form, and the
//! unified envelope over all families.
//!
//! Conventions: `hbar = 1`, energies in angular-frequency units. Every bound
//! function lives on the reduced time `t / tau`, where `tau` is the family's
//! orthogonality time, and is defined only on `[0, 1]`.

use crate::error::{Error, Result};
use crate::spectra::EnergySpectrum;
use serde::Serialize;
use std::f64::consts::PI;

/// Number of uniform scan points on `(0, 0.5]` used by the minimizer.
pub const DEFAULT_SCAN_POINTS: usize = 4096;
/// Geometric tail points appended below the uniform grid, down to `SCAN_FLOOR`.
const SCAN_LOG_TAIL_POINTS: usize = 256;
/// Smallest scanned `z`; below this the objective is within 4e-10 of 1.
const SCAN_FLOOR: f64 = 1e-10;
/// Golden-section refinement stops when the bracket is narrower than this.
const REFINE_TOL_Z: f64 = 1e-12;
/// Bisection tolerance in the function value for inversions.
const INVERT_TOL_VALUE: f64 = 1e-10;

/// Dimensionless time `t / tau` measured against an orthogonality time.
///
/// Bound functions are defined and queried only for values in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ReducedTime(f64);

impl ReducedTime {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Domain {
                what: "reduced time",
                value,
                domain: "[0, 1]",
            });
        }
        Ok(ReducedTime(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which family a bound value or curve belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundFamily {
    Mt,
    Gml,
    DualGml,
    QuadraticGmlClosedForm,
}

/// A bound family together with its moment order, where one applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundKind {
    pub family: BoundFamily,
    pub p: Option<f64>,
}

impl BoundKind {
    pub fn mt() -> Self {
        BoundKind {
            family: BoundFamily::Mt,
            p: None,
        }
    }

    pub fn quadratic_closed_form() -> Self {
        BoundKind {
            family: BoundFamily::QuadraticGmlClosedForm,
            p: None,
        }
    }

    pub fn gml(p: f64) -> Result<Self> {
        check_order(p)?;
        Ok(BoundKind {
            family: BoundFamily::Gml,
            p: Some(p),
        })
    }

    pub fn dual_gml(p: f64) -> Result<Self> {
        check_order(p)?;
        Ok(BoundKind {
            family: BoundFamily::DualGml,
            p: Some(p),
        })
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.family, self.p) {
            (BoundFamily::Mt, _) => write!(f, "MT"),
            (BoundFamily::QuadraticGmlClosedForm, _) => write!(f, "O2-closed-form"),
            (BoundFamily::Gml, Some(p)) => write!(f, "GML(p={p})"),
            (BoundFamily::DualGml, Some(p)) => write!(f, "dual-GML(p={p})"),
            (BoundFamily::Gml, None) | (BoundFamily::DualGml, None) => write!(f, "GML(?)"),
        }
    }
}

/// A sampled lower-bound curve: `(time, bound)` pairs, strictly increasing in
/// time, bound values in `[0, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub samples: Vec<(f64, f64)>,
}

impl BoundCurve {
    pub fn new(kind: BoundKind, samples: Vec<(f64, f64)>) -> Result<Self> {
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Domain {
                    what: "curve time sample",
                    value: w[1].0,
                    domain: "strictly increasing",
                });
            }
        }
        if let Some(&(t, v)) = samples.iter().find(|(_, v)| !(0.0..=1.0).contains(v)) {
            let _ = t;
            return Err(Error::Domain {
                what: "bound value",
                value: v,
                domain: "[0, 1]",
            });
        }
        Ok(BoundCurve { kind, samples })
    }
}

/// A two-level state: excited population `rho1` at energy `eps1`, ground
/// energy fixed at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    rho1: f64,
    eps1: f64,
}

impl TwoLevelState {
    pub fn new(rho1: f64, eps1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho1) {
            return Err(Error::Domain {
                what: "rho1",
                value: rho1,
                domain: "[0, 1]",
            });
        }
        if !(eps1 > 0.0) || !eps1.is_finite() {
            return Err(Error::Domain {
                what: "eps1",
                value: eps1,
                domain: "(0, inf)",
            });
        }
        Ok(TwoLevelState { rho1, eps1 })
    }

    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    /// Revival time `pi / eps1` after which the overlap increases again.
    pub fn revival_time(&self) -> f64 {
        PI / self.eps1
    }
}

fn check_order(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain {
            what: "moment order p",
            value: p,
            domain: "(0, inf)",
        });
    }
    Ok(())
}

/// Geometric grid of `n` points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "invalid geometric grid spec");
    let ratio = (hi / lo).ln();
    let mut grid: Vec<f64> = (0..n)
        .map(|k| lo * (ratio * k as f64 / (n - 1) as f64).exp())
        .collect();
    grid[n - 1] = hi;
    grid
}

/// The default moment-order grid: 61 geometric points on `[0.1, 10]`.
pub fn default_p_grid() -> Vec<f64> {
    geometric_grid(0.1, 10.0, 61)
}

/// Stationarity residual of the order-`p` overlap-bound minimization at the
/// candidate minimizer `z`. Zero where `z` is a stationary point of the
/// objective.
pub fn gml_constraint_residual(z: f64, p: f64, t_tilde: ReducedTime) -> Result<f64> {
    check_order(p)?;
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain {
            what: "z",
            value: z,
            domain: "(0, 1)",
        });
    }
    let tt = t_tilde.value();
    if tt <= 0.0 {
        return Err(Error::Domain {
            what: "reduced time",
            value: tt,
            domain: "(0, 1]",
        });
    }
    let w = (2.0 * z).powf(-1.0 / p);
    let arg = PI * tt * w;
    Ok((1.0 - 2.0 * z) * (1.0 - arg.cos()) - (1.0 - z) * PI * tt * w / p * arg.sin())
}

/// Evaluator for the order-`p` overlap bound, with the scan grid's
/// `z`-dependent factors precomputed so repeated queries are cheap.
#[derive(Debug, Clone)]
pub struct GmlBound {
    p: f64,
    /// Scan points in descending order starting from `z = 0.5`.
    zs: Vec<f64>,
    /// `(2 z)^{-1/p}` per scan point; may overflow to `inf` at tiny `z`.
    ws: Vec<f64>,
    /// `2 z (1 - z)` per scan point; descending along the grid.
    amps: Vec<f64>,
}

impl GmlBound {
    pub fn new(p: f64) -> Result<Self> {
        Self::with_scan_points(p, DEFAULT_SCAN_POINTS)
    }

    pub fn with_scan_points(p: f64, n: usize) -> Result<Self> {
        check_order(p)?;
        assert!(n >= 16, "scan grid too coarse");
        let mut zs: Vec<f64> = (1..=n).rev().map(|k| 0.5 * k as f64 / n as f64).collect();
        // Geometric tail below the uniform grid; resolves the narrow
        // small-z minima that matter when t_tilde^p is not small.
        let top = 0.5 / n as f64;
        let step = (SCAN_FLOOR / top).ln() / SCAN_LOG_TAIL_POINTS as f64;
        zs.extend((1..=SCAN_LOG_TAIL_POINTS).map(|j| top * (step * j as f64).exp()));
        let ws = zs.iter().map(|&z| (2.0 * z).powf(-1.0 / p)).collect();
        let amps = zs.iter().map(|&z| 2.0 * z * (1.0 - z)).collect();
        Ok(GmlBound { p, zs, ws, amps })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn objective(&self, z: f64, tt: f64) -> f64 {
        let w = (2.0 * z).powf(-1.0 / self.p);
        let half = (PI * tt * w / 2.0).sin();
        1.0 - 4.0 * z * (1.0 - z) * half * half
    }

    /// The overlap bound at reduced time `t_tilde`: the square root of the
    /// two-level objective minimized over the excited population `z`.
    ///
    /// The minimum on `[0.5, 1]` is never below the value at `z = 0.5`, so
    /// only `(0, 0.5]` is scanned. Entries whose envelope `4 z (1 - z)` cannot
    /// beat the running best are pruned; the best sampled basins are then
    /// refined by golden-section search.
    pub fn overlap_bound(&self, t_tilde: ReducedTime) -> f64 {
        let tt = t_tilde.value();
        if tt == 0.0 {
            return 1.0;
        }
        let half_c = PI * tt / 2.0;

        let mut best = f64::INFINITY;
        let mut evaluated = 0usize;
        let mut values = Vec::with_capacity(64);
        for i in 0..self.zs.len() {
            // All later z are smaller, so their objective cannot go below
            // 1 - 2 * amps[i]; stop once that floor exceeds the best value.
            if 1.0 - 2.0 * self.amps[i] > best {
                break;
            }
            let half = (half_c * self.ws[i]).sin();
            let f = 1.0 - 2.0 * self.amps[i] * half * half;
            values.push(f);
            if f < best {
                best = f;
            }
            evaluated = i + 1;
        }

        // Collect local minima of the sampled values (NaN from overflowed
        // phases never satisfies the comparisons and is skipped).
        let mut minima: Vec<(f64, usize)> = Vec::new();
        for i in 0..evaluated {
            let left_ok = i == 0 || !(values[i - 1] <= values[i]);
            let right_ok = i + 1 >= evaluated || !(values[i + 1] < values[i]);
            if left_ok && right_ok && values[i].is_finite() {
                minima.push((values[i], i));
            }
        }
        minima.sort_by(|a, b| a.0.total_cmp(&b.0));
        minima.truncate(3);

        let mut best = best.min(1.0);
        for &(_, i) in &minima {
            let lo = if i + 1 < self.zs.len() {
                self.zs[i + 1]
            } else {
                SCAN_FLOOR
            };
            let hi = if i == 0 { 0.5 } else { self.zs[i - 1] };
            let refined = golden_min(|z| self.objective(z, tt), lo, hi);
            if refined < best {
                best = refined;
            }
        }
        best.clamp(0.0, 1.0).sqrt()
    }

    /// Cross-validation path: locate the stationarity-residual root closest
    /// to (and below) `z = 0.5` and evaluate the objective there. `None` when
    /// no sign change exists on `(0, 0.5)`.
    pub fn overlap_bound_via_constraint(&self, t_tilde: ReducedTime) -> Option<f64> {
        let tt = t_tilde.value();
        if tt == 0.0 {
            return Some(1.0);
        }
        let t = ReducedTime(tt);
        let n = DEFAULT_SCAN_POINTS;
        let residual = |z: f64| gml_constraint_residual(z, self.p, t).unwrap_or(f64::NAN);
        let mut prev_z = 0.5 * (n as f64 - 0.5) / n as f64;
        let mut prev_r = residual(prev_z);
        // Descend from just below 0.5; the first bracketed root is the one
        // closest to 0.5.
        for k in (1..n).rev() {
            let z = 0.5 * k as f64 / n as f64;
            let r = residual(z);
            if prev_r == 0.0 {
                return Some(self.objective(prev_z, tt).clamp(0.0, 1.0).sqrt());
            }
            if r * prev_r < 0.0 {
                let (mut lo, mut hi) = (z, prev_z);
                for _ in 0..200 {
                    if hi - lo < REFINE_TOL_Z {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    let rm = residual(mid);
                    if rm == 0.0 {
                        lo = mid;
                        hi = mid;
                    } else if rm * residual(lo) < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let root = 0.5 * (lo + hi);
                return Some(self.objective(root, tt).clamp(0.0, 1.0).sqrt());
            }
            prev_z = z;
            prev_r = r;
        }
        None
    }

    /// Smallest reduced time at which the bound equals `sqrt_delta`.
    ///
    /// Bisection runs on `ln t` so the answer carries relative precision:
    /// for small orders the root can sit hundreds of decades below 1 and
    /// still has to multiply an orthogonality time of the inverse scale.
    pub fn inverse(&self, sqrt_delta: f64) -> Result<ReducedTime> {
        if !(0.0..=1.0).contains(&sqrt_delta) {
            return Err(Error::Domain {
                what: "sqrt_delta",
                value: sqrt_delta,
                domain: "[0, 1]",
            });
        }
        if sqrt_delta == 1.0 {
            return Ok(ReducedTime(0.0));
        }
        let (mut lo, mut hi) = (-709.0_f64, 0.0_f64);
        if self.overlap_bound(ReducedTime(lo.exp())) <= sqrt_delta {
            return Ok(ReducedTime(lo.exp()));
        }
        while hi - lo > REFINE_TOL_Z {
            let mid = 0.5 * (lo + hi);
            let v = self.overlap_bound(ReducedTime(mid.exp()));
            if (v - sqrt_delta).abs() < INVERT_TOL_VALUE {
                hi = mid;
                break;
            }
            if v > sqrt_delta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(ReducedTime(hi.exp()))
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = f1.min(f2);
    for _ in 0..200 {
        if b - a < REFINE_TOL_Z {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        if f1 < best {
            best = f1;
        }
        if f2 < best {
            best = f2;
        }
    }
    best
}

/// One-shot order-`p` overlap bound at reduced time `t_tilde`.
pub fn gml_overlap_bound(p: f64, t_tilde: ReducedTime) -> Result<f64> {
    Ok(GmlBound::new(p)?.overlap_bound(t_tilde))
}

/// The dual bound reuses the same function of the dual reduced time
/// `t / tau_p_star`.
pub fn dual_gml_overlap_bound(p: f64, t_tilde_dual: ReducedTime) -> Result<f64> {
    gml_overlap_bound(p, t_tilde_dual)
}

/// Closed-form approximation to the order-2 overlap bound; its error stays
/// below 5e-4 across `[0, 1]`.
pub fn quadratic_gml_closed_form(t_tilde: ReducedTime) -> f64 {
    let tt = t_tilde.value();
    let shape = 1.0 + 0.162 * (1.0 - tt) + 0.0743 * (1.0 - tt) * (1.0 - tt);
    (PI / 2.0 * shape * tt.powf(0.9521)).cos()
}

/// MT bound `cos(delta_e * t)`, defined for `0 <= t <= pi / (2 delta_e)`.
pub fn mt_overlap_bound(t: f64, delta_e: f64) -> Result<f64> {
    if !(delta_e > 0.0) || !delta_e.is_finite() {
        return Err(Error::Domain {
            what: "delta_e",
            value: delta_e,
            domain: "(0, inf)",
        });
    }
    let tau_mt = PI / (2.0 * delta_e);
    if !(0.0..=tau_mt).contains(&t) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            domain: "[0, tau_MT]",
        });
    }
    Ok((delta_e * t).cos())
}

/// Smallest reduced time at which the order-`p` bound reaches `sqrt_delta`.
pub fn inverse_gml_bound(p: f64, sqrt_delta: f64) -> Result<ReducedTime> {
    GmlBound::new(p)?.inverse(sqrt_delta)
}

/// Exact evolving overlap of a freely evolving two-level state.
pub fn two_level_overlap(state: &TwoLevelState, t: f64) -> f64 {
    let amp = 2.0 * state.rho1 * (1.0 - state.rho1);
    let half = (state.eps1 * t / 2.0).sin();
    (1.0 - 2.0 * amp * half * half).max(0.0).sqrt()
}

/// First time the squared overlap of a two-level state reaches `delta`.
pub fn two_level_first_hit_time(state: &TwoLevelState, delta: f64) -> Result<f64> {
    if state.rho1 == 0.0 || state.rho1 == 1.0 {
        return Err(Error::DegenerateState(
            "population confined to one level never moves",
        ));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
            domain: "[0, 1]",
        });
    }
    let amp = 2.0 * state.rho1 * (1.0 - state.rho1);
    let min_delta = 1.0 - 2.0 * amp;
    if delta < min_delta {
        return Err(Error::UnreachableOverlap { delta, min_delta });
    }
    let arg = ((delta - 1.0 + amp) / amp).clamp(-1.0, 1.0);
    Ok(arg.acos() / state.eps1)
}

/// The moment order whose bound touches the two-level overlap at time `t`.
///
/// Decreases monotonically from `p0 = 2 (1 - rho1) / (1 - 2 rho1)` at `t = 0`
/// to zero at the revival time.
pub fn tight_p(state: &TwoLevelState, t: f64) -> Result<f64> {
    if state.rho1 >= 0.5 {
        return Err(Error::Domain {
            what: "rho1",
            value: state.rho1,
            domain: "[0, 0.5)",
        });
    }
    let t_re = state.revival_time();
    if !(t > 0.0 && t < t_re) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            domain: "(0, t_re)",
        });
    }
    let x = state.eps1 * t;
    let half = (x / 2.0).sin();
    Ok((1.0 - state.rho1) * x * x.sin() / ((1.0 - 2.0 * state.rho1) * 2.0 * half * half))
}

/// A set of order-`p` bound evaluators shared across spectra.
#[derive(Debug, Clone)]
pub struct GmlFamily {
    evaluators: Vec<GmlBound>,
}

impl GmlFamily {
    pub fn new(p_grid: &[f64]) -> Result<Self> {
        if p_grid.is_empty() {
            return Err(Error::Domain {
                what: "p grid size",
                value: 0.0,
                domain: "nonempty",
            });
        }
        let evaluators = p_grid
            .iter()
            .map(|&p| GmlBound::new(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(GmlFamily { evaluators })
    }

    pub fn evaluators(&self) -> &[GmlBound] {
        &self.evaluators
    }
}

/// Every applicable bound for one spectrum: MT, the GML family, and (when the
/// spectrum has a maximum energy) the dual family.
///
/// Families whose governing moment vanishes have an unbounded orthogonality
/// time; their reduced time is zero at every `t` and the bound is the
/// constant 1, matching the physics of a stationary state.
#[derive(Debug, Clone)]
pub struct UnifiedBoundSet<'a> {
    family: &'a GmlFamily,
    delta_e: f64,
    tau_mt: f64,
    tau_p: Vec<f64>,
    tau_p_star: Option<Vec<f64>>,
}

impl<'a> UnifiedBoundSet<'a> {
    pub fn new(family: &'a GmlFamily, spectrum: &EnergySpectrum) -> Result<Self> {
        let summary = spectrum.moments();
        let delta_e = summary.std;
        let tau_mt = if delta_e > 0.0 {
            PI / (2.0 * delta_e)
        } else {
            f64::INFINITY
        };
        let stationary = spectrum.is_stationary();
        let mut tau_p = Vec::with_capacity(family.evaluators.len());
        for b in &family.evaluators {
            let ep = spectrum.moment_ep(b.p())?;
            tau_p.push(orthogonality_time(b.p(), ep, stationary));
        }
        let tau_p_star = if spectrum.max_energy().is_some() {
            let mut taus = Vec::with_capacity(family.evaluators.len());
            for b in &family.evaluators {
                let ep = spectrum.dual_moment_ep(b.p())?;
                taus.push(orthogonality_time(b.p(), ep, stationary));
            }
            Some(taus)
        } else {
            None
        };
        Ok(UnifiedBoundSet {
            family,
            delta_e,
            tau_mt,
            tau_p,
            tau_p_star,
        })
    }

    pub fn tau_mt(&self) -> f64 {
        self.tau_mt
    }

    /// MT bound value, `None` past its validity window.
    pub fn mt_at(&self, t: f64) -> Option<f64> {
        if t <= self.tau_mt {
            Some(if self.delta_e > 0.0 {
                (self.delta_e * t).cos()
            } else {
                1.0
            })
        } else {
            None
        }
    }

    fn family_envelope(&self, t: f64, taus: &[f64]) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (b, &tau) in self.family.evaluators.iter().zip(taus) {
            let tt = if tau.is_infinite() { 0.0 } else { t / tau };
            if tt <= 1.0 {
                let v = b.overlap_bound(ReducedTime(tt));
                if best.is_none_or(|cur| v > cur) {
                    best = Some(v);
                }
            }
        }
        best
    }

    /// Largest applicable GML bound at `t`, `None` when every window has
    /// closed.
    pub fn gml_envelope_at(&self, t: f64) -> Option<f64> {
        self.family_envelope(t, &self.tau_p)
    }

    /// Largest applicable dual bound at `t`; `None` when the spectrum has no
    /// maximum energy or every dual window has closed.
    pub fn dual_envelope_at(&self, t: f64) -> Option<f64> {
        self.tau_p_star
            .as_deref()
            .and_then(|taus| self.family_envelope(t, taus))
    }

    /// Pointwise maximum of every applicable bound; zero when none applies.
    pub fn envelope(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain {
                what: "t",
                value: t,
                domain: "[0, inf)",
            });
        }
        let mut best = 0.0_f64;
        if let Some(v) = self.mt_at(t) {
            best = best.max(v);
        }
        if let Some(v) = self.gml_envelope_at(t) {
            best = best.max(v);
        }
        if let Some(v) = self.dual_envelope_at(t) {
            best = best.max(v);
        }
        Ok(best)
    }

    /// Best lower bound on the time needed to bring the squared overlap down
    /// to `delta`: the maximum over all families of `tau * gamma(delta)`.
    ///
    /// Infinite for stationary spectra with `delta < 1`; monotone
    /// non-increasing in `delta`.
    pub fn min_time_to(&self, delta: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::Domain {
                what: "delta",
                value: delta,
                domain: "[0, 1]",
            });
        }
        let sqrt_delta = delta.sqrt();
        let mut best = if self.delta_e > 0.0 {
            sqrt_delta.acos() / self.delta_e
        } else if delta < 1.0 {
            f64::INFINITY
        } else {
            0.0
        };
        let mut fold = |taus: &[f64]| -> Result<()> {
            for (b, &tau) in self.family.evaluators.iter().zip(taus) {
                if tau.is_nan() {
                    continue;
                }
                let gamma = b.inverse(sqrt_delta)?.value();
                let t = if gamma == 0.0 { 0.0 } else { tau * gamma };
                if t > best {
                    best = t;
                }
            }
            Ok(())
        };
        fold(&self.tau_p)?;
        if let Some(taus) = self.tau_p_star.clone() {
            fold(&taus)?;
        }
        Ok(best)
    }
}

/// NaN marks a moment that underflowed for a non-stationary spectrum: that
/// order contributes no valid bound and is skipped, which only loosens the
/// envelope. A structurally stationary spectrum has an unbounded
/// orthogonality time and its bound is the constant 1.
fn orthogonality_time(p: f64, ep: f64, stationary: bool) -> f64 {
    if ep > 0.0 {
        PI / (2.0_f64.powf(1.0 / p) * ep)
    } else if stationary {
        f64::INFINITY
    } else {
        f64::NAN
    }
}

/// Pointwise-in-time unified envelope over MT, GML, and dual GML bounds.
pub fn unified_overlap_envelope(spectrum: &EnergySpectrum, t: f64, p_grid: &[f64]) -> Result<f64> {
    let family = GmlFamily::new(p_grid)?;
    UnifiedBoundSet::new(&family, spectrum)?.envelope(t)
}

/// Unified lower bound on the time to reach squared overlap `delta`.
pub fn unified_bound_time(spectrum: &EnergySpectrum, delta: f64, p_grid: &[f64]) -> Result<f64> {
    let family = GmlFamily::new(p_grid)?;
    UnifiedBoundSet::new(&family, spectrum)?.min_time_to(delta)
}
