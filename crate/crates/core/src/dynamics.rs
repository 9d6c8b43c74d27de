//! Evolution equations on the clique complex.
//!
//! The linear flows (heat, wave, Schrödinger) and the Poisson solve all go
//! through the spectral calculus of `L_k` or `D`. The nonlinear part is the
//! Lax deformation `D' = [B, D]`, `B = d − d*`, integrated on the pair
//! `(d, b)` with `D = d + d* + b`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hodge::{Cochain, Hodge};
use crate::linalg::{SymEigen, DEFAULT_KERNEL_TOL};
use crate::operators::DiracMatrix;

/// Relative roundoff allowance when checking that `tr(M)` never increases.
/// Near convergence `tr(M)` sits at the `1e-15` level and jitters.
pub const MONOTONICITY_SLACK: f64 = 1e-12;

/// Default relative tolerance on the kernel component of a Poisson source.
pub const DEFAULT_POISSON_TOL: f64 = 1e-8;

fn eigen_for<'a>(h: &'a Hodge, f: &Cochain) -> Result<&'a SymEigen> {
    let e = h
        .eigen(f.degree)
        .ok_or(Error::Degree { k: f.degree, top: h.degree_count().saturating_sub(1) })?;
    if e.dim() != f.values.len() {
        return Err(Error::Shape(format!(
            "{}-cochain of length {} (expected {})",
            f.degree,
            f.values.len(),
            e.dim()
        )));
    }
    Ok(e)
}

/// Minimum-norm solution of `L_k A = j` for `j` orthogonal to `ker L_k`.
///
/// A kernel component larger than `tol·max(1, ‖j‖)` makes the system
/// unsolvable and is reported with its norm.
pub fn poisson_solve(h: &Hodge, j: &Cochain, tol: f64) -> Result<Cochain> {
    let (a, residual) = poisson_least_squares(h, j)?;
    let kernel_norm = residual.norm();
    if kernel_norm > tol * j.norm().max(1.0) {
        return Err(Error::Unsolvable { kernel_norm });
    }
    Ok(a)
}

/// Minimum-norm least-squares solution and its residual `j − L_k A`, which
/// is exactly the kernel projection of `j`.
pub fn poisson_least_squares(h: &Hodge, j: &Cochain) -> Result<(Cochain, Cochain)> {
    let e = eigen_for(h, j)?;
    let thr = e.threshold(h.tolerance());
    let mut a = DVector::zeros(j.values.len());
    let mut kernel = DVector::zeros(j.values.len());
    for i in 0..e.dim() {
        let v = e.vectors.column(i);
        let c = v.dot(&j.values);
        if e.values[i].abs() < thr {
            kernel += v * c;
        } else {
            a += v * (c / e.values[i]);
        }
    }
    Ok((Cochain::new(j.degree, a), Cochain::new(j.degree, kernel)))
}

/// `e^{-tL_k} u_0`.
pub fn heat_evolve(h: &Hodge, u0: &Cochain, t: f64) -> Result<Cochain> {
    if t < 0.0 {
        return Err(Error::Argument(format!("heat flow needs t >= 0, got {t}")));
    }
    let e = eigen_for(h, u0)?;
    let coeffs = e.vectors.transpose() * &u0.values;
    let scaled = DVector::from_fn(e.dim(), |i, _| coeffs[i] * (-t * e.values[i].max(0.0)).exp());
    Ok(Cochain::new(u0.degree, &e.vectors * scaled))
}

/// Position and velocity of a wave `u'' = −L_k u`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    pub u: Cochain,
    pub v: Cochain,
}

impl WaveState {
    pub fn new(u: Cochain, v: Cochain) -> Result<Self> {
        if u.degree != v.degree || u.values.len() != v.values.len() {
            return Err(Error::Shape("position and velocity must share a degree".into()));
        }
        Ok(Self { u, v })
    }

    /// `‖v‖² + ⟨u, L_k u⟩`.
    pub fn energy(&self, h: &Hodge) -> Result<f64> {
        let l = h
            .laplacian_block(self.u.degree)
            .ok_or(Error::Degree { k: self.u.degree, top: h.degree_count().saturating_sub(1) })?;
        Ok(self.v.values.norm_squared() + self.u.values.dot(&(l * &self.u.values)))
    }
}

/// `u(t) = cos(√L t) u_0 + sin(√L t) (√L)⁺ v_0 + t·P_ker v_0`, with its time
/// derivative. The kernel drift extends the flow to velocities with harmonic parts.
pub fn wave_evolve(h: &Hodge, w: &WaveState, t: f64) -> Result<WaveState> {
    let e = eigen_for(h, &w.u)?;
    let thr = e.threshold(h.tolerance());
    let a = e.vectors.transpose() * &w.u.values;
    let b = e.vectors.transpose() * &w.v.values;
    let mut pos = DVector::zeros(e.dim());
    let mut vel = DVector::zeros(e.dim());
    for i in 0..e.dim() {
        if e.values[i].abs() < thr {
            pos[i] = a[i] + t * b[i];
            vel[i] = b[i];
        } else {
            let omega = e.values[i].sqrt();
            let (s, c) = (omega * t).sin_cos();
            pos[i] = c * a[i] + s / omega * b[i];
            vel[i] = -omega * s * a[i] + c * b[i];
        }
    }
    WaveState::new(
        Cochain::new(w.u.degree, &e.vectors * pos),
        Cochain::new(w.u.degree, &e.vectors * vel),
    )
}

/// `e^{iDt} ψ_0`.
pub fn schrodinger_evolve(d: &DiracMatrix, psi0: &DVector<Complex64>, t: f64) -> Result<DVector<Complex64>> {
    if psi0.len() != d.dim() {
        return Err(Error::Shape(format!("state of length {} for {} simplices", psi0.len(), d.dim())));
    }
    let e = SymEigen::new(&d.to_f64());
    let v = e.vectors.map(|x| Complex64::new(x, 0.0));
    let coeffs = v.transpose() * psi0;
    let phased =
        DVector::from_fn(e.dim(), |i, _| coeffs[i] * Complex64::from_polar(1.0, e.values[i] * t));
    Ok(v * phased)
}

/// The wave flow written as a Schrödinger flow of `D`: with
/// `ψ = u_0 − i·D⁺v_0` on the full complex, `u(t) = Re(e^{iDt}ψ)` and
/// `u'(t) = Re(iD e^{iDt}ψ)` on the degree of `u_0`, plus the kernel drift.
pub fn wave_via_dirac(d: &DiracMatrix, h: &Hodge, w: &WaveState, t: f64) -> Result<WaveState> {
    let k = w.u.degree;
    eigen_for(h, &w.u)?;
    let offset: usize = d.counts()[..k].iter().sum();
    let n = w.u.values.len();
    let e = SymEigen::new(&d.to_f64());
    let pinv = e.apply_fn(|x| if x.abs() < e.threshold(DEFAULT_KERNEL_TOL) { 0.0 } else { 1.0 / x });
    let mut u_full = DVector::zeros(d.dim());
    let mut v_full = DVector::zeros(d.dim());
    u_full.rows_mut(offset, n).copy_from(&w.u.values);
    v_full.rows_mut(offset, n).copy_from(&w.v.values);
    let dv = &pinv * &v_full;
    let psi = DVector::from_fn(d.dim(), |i, _| Complex64::new(u_full[i], -dv[i]));
    let evolved = schrodinger_evolve(d, &psi, t)?;
    let dc = d.to_f64().map(|x| Complex64::new(x, 0.0));
    let deriv = (dc * &evolved) * Complex64::new(0.0, 1.0);
    let (_, kernel) = poisson_least_squares(h, &w.v)?;
    let u = DVector::from_fn(n, |i, _| evolved[offset + i].re + t * kernel.values[i]);
    let v = DVector::from_fn(n, |i, _| deriv[offset + i].re + kernel.values[i]);
    WaveState::new(Cochain::new(k, u), Cochain::new(k, v))
}

/// Which generator drives the Lax flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LaxVariant {
    /// `B = d − d*`.
    #[default]
    Real,
    /// `B = d − d* + i·b`.
    Complexified,
}

#[derive(Clone, Debug)]
pub struct LaxConfig {
    pub t_end: f64,
    pub h: f64,
    pub variant: LaxVariant,
    /// Keep a full `(d, b)` snapshot every this many accepted steps.
    pub snapshot_every: Option<usize>,
    /// Step-size halvings allowed per step before giving up.
    pub max_halvings: u32,
    pub spectrum_tol: f64,
    pub nilpotency_tol: f64,
}

impl Default for LaxConfig {
    fn default() -> Self {
        Self {
            t_end: 10.0,
            h: 0.01,
            variant: LaxVariant::Real,
            snapshot_every: None,
            max_halvings: 8,
            spectrum_tol: 1e-6,
            nilpotency_tol: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    /// `tr((d + d*)²)`.
    pub tr_m: f64,
    /// Largest sorted-eigenvalue deviation of `D(t)` from `D(0)`.
    pub spectrum_error: f64,
    /// Largest entry of `d(t)²`.
    pub nilpotency_error: f64,
    /// Largest entry of `D(t)² − L(0)`.
    pub laplacian_error: f64,
    /// Largest entry of `d b + b d`.
    pub anticommutator_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationState {
    pub t: f64,
    pub d: DMatrix<Complex64>,
    pub b: DMatrix<Complex64>,
    pub diagnostics: Diagnostics,
}

impl DeformationState {
    /// `D(t) = d + d* + b`.
    pub fn dirac(&self) -> DMatrix<Complex64> {
        &self.d + self.d.adjoint() + &self.b
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub h: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<StepRecord>,
    pub snapshots: Vec<DeformationState>,
    pub last: DeformationState,
    /// Co-integrated vector `f' = b f`, when one was supplied.
    pub transported: Option<DVector<Complex64>>,
}

impl Trajectory {
    /// Indices of steps where `tr(M)` increased by more than
    /// [`MONOTONICITY_SLACK`]`·tr(M(0))`.
    pub fn monotonicity_violations(&self) -> Vec<usize> {
        let slack = MONOTONICITY_SLACK * self.records.first().map_or(0.0, |r| r.diagnostics.tr_m.abs());
        self.records
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1].diagnostics.tr_m > w[0].diagnostics.tr_m + slack)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn max_spectrum_error(&self) -> f64 {
        self.records.iter().map(|r| r.diagnostics.spectrum_error).fold(0.0, f64::max)
    }

    pub fn max_nilpotency_error(&self) -> f64 {
        self.records.iter().map(|r| r.diagnostics.nilpotency_error).fold(0.0, f64::max)
    }

    pub fn max_laplacian_error(&self) -> f64 {
        self.records.iter().map(|r| r.diagnostics.laplacian_error).fold(0.0, f64::max)
    }

    pub fn max_anticommutator_error(&self) -> f64 {
        self.records.iter().map(|r| r.diagnostics.anticommutator_error).fold(0.0, f64::max)
    }

    /// CSV with header `t,trM,spectrumError,nilpotencyError`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,trM,spectrumError,nilpotencyError\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                crate::report::format_float(r.t),
                crate::report::format_float(r.diagnostics.tr_m),
                crate::report::format_float(r.diagnostics.spectrum_error),
                crate::report::format_float(r.diagnostics.nilpotency_error),
            );
        }
        out
    }

    /// Snapshots as JSON objects with real parts (and imaginary parts for the
    /// complexified flow).
    pub fn snapshots_json(&self) -> serde_json::Value {
        let mat = |m: &DMatrix<Complex64>, f: fn(&Complex64) -> f64| -> serde_json::Value {
            (0..m.nrows())
                .map(|r| {
                    (0..m.ncols())
                        .map(|c| crate::report::rounded(f(&m[(r, c)])))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
                .into()
        };
        self.snapshots
            .iter()
            .map(|s| {
                let mut obj = json!({
                    "t": crate::report::rounded(s.t),
                    "d": mat(&s.d, |z| z.re),
                    "b": mat(&s.b, |z| z.re),
                });
                if s.d.iter().chain(s.b.iter()).any(|z| z.im != 0.0) {
                    obj["dIm"] = mat(&s.d, |z| z.im);
                    obj["bIm"] = mat(&s.b, |z| z.im);
                }
                obj
            })
            .collect::<Vec<_>>()
            .into()
    }
}

struct LaxSystem {
    /// `1` where the entry links stratum `k` to `k + 1` (row above column).
    lower_mask: DMatrix<bool>,
    diag_mask: DMatrix<bool>,
    variant: LaxVariant,
    spectrum0: Vec<f64>,
    l0: DMatrix<Complex64>,
}

impl LaxSystem {
    fn new(d: &DiracMatrix, variant: LaxVariant) -> Self {
        let s = d.stratum_of_each();
        let n = d.dim();
        let lower_mask = DMatrix::from_fn(n, n, |r, c| s[r] == s[c] + 1);
        let diag_mask = DMatrix::from_fn(n, n, |r, c| s[r] == s[c]);
        let l = d.to_f64() * d.to_f64();
        Self {
            lower_mask,
            diag_mask,
            variant,
            spectrum0: SymEigen::new(&d.to_f64()).values,
            l0: l.map(|x| Complex64::new(x, 0.0)),
        }
    }

    fn rhs(&self, d: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let dirac = d + d.adjoint() + b;
        let mut gen = d - d.adjoint();
        if self.variant == LaxVariant::Complexified {
            gen += b * Complex64::new(0.0, 1.0);
        }
        let r = &gen * &dirac - &dirac * &gen;
        let zero = Complex64::new(0.0, 0.0);
        let dd = r.zip_map(&self.lower_mask, |x, m| if m { x } else { zero });
        let db = r.zip_map(&self.diag_mask, |x, m| if m { x } else { zero });
        (dd, db)
    }

    fn diagnostics(&self, d: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Diagnostics {
        let c = d + d.adjoint();
        let tr_m = (&c * &c).trace().re;
        let dirac = &c + b;
        let spectrum = hermitian_spectrum(&dirac);
        let spectrum_error = spectrum
            .iter()
            .zip(&self.spectrum0)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let max_abs = |m: DMatrix<Complex64>| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Diagnostics {
            tr_m,
            spectrum_error,
            nilpotency_error: max_abs(d * d),
            laplacian_error: max_abs(&dirac * &dirac - &self.l0),
            anticommutator_error: max_abs(d * b + b * d),
        }
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = nalgebra::SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

type Stage = (DMatrix<Complex64>, DMatrix<Complex64>, Option<DVector<Complex64>>);

/// Integrates the Lax flow from `d(0)` = the exterior derivative, `b(0) = 0`.
///
/// Classical RK4 with fixed step `h`; a step whose diagnostics exceed the
/// spectrum or nilpotency tolerance is retried with half the step, up to
/// `max_halvings` times. Diagnostics are recorded after every accepted step.
pub fn lax_deform(d: &DiracMatrix, config: &LaxConfig) -> Result<Trajectory> {
    lax_deform_transport(d, config, None)
}

/// As [`lax_deform`], additionally co-integrating `f' = b(t) f` from `f0`.
pub fn lax_deform_transport(
    d: &DiracMatrix,
    config: &LaxConfig,
    f0: Option<&DVector<f64>>,
) -> Result<Trajectory> {
    if !(config.t_end > 0.0) || !(config.h > 0.0) {
        return Err(Error::Argument("deformation needs T > 0 and h > 0".into()));
    }
    if let Some(f) = f0 {
        if f.len() != d.dim() {
            return Err(Error::Shape(format!("transported vector of length {}", f.len())));
        }
    }
    let sys = LaxSystem::new(d, config.variant);
    let to_c = |m: &DMatrix<i64>| m.map(|x| Complex64::new(x as f64, 0.0));
    let n = d.dim();
    let mut state: Stage = (
        to_c(&d.lower()),
        DMatrix::zeros(n, n),
        f0.map(|f| f.map(|x| Complex64::new(x, 0.0))),
    );
    let diag0 = sys.diagnostics(&state.0, &state.1);
    let mut t = 0.0;
    let mut records = vec![StepRecord { t, h: 0.0, diagnostics: diag0 }];
    let mut snapshots = Vec::new();
    let snapshot = |t: f64, s: &Stage, diag: Diagnostics| DeformationState {
        t,
        d: s.0.clone(),
        b: s.1.clone(),
        diagnostics: diag,
    };
    if config.snapshot_every.is_some() {
        snapshots.push(snapshot(t, &state, diag0));
    }
    let mut accepted = 0usize;
    let eps = 1e-12 * config.t_end;
    while t < config.t_end - eps {
        let mut h = config.h.min(config.t_end - t);
        let mut halvings = 0;
        let (next, diag) = loop {
            let next = rk4_step(&sys, &state, h);
            let diag = sys.diagnostics(&next.0, &next.1);
            if diag.spectrum_error <= config.spectrum_tol && diag.nilpotency_error <= config.nilpotency_tol {
                break (next, diag);
            }
            if halvings >= config.max_halvings {
                return Err(Error::Integration {
                    t,
                    reason: format!(
                        "spectrum error {:.3e}, nilpotency error {:.3e} at h = {h:.3e}",
                        diag.spectrum_error, diag.nilpotency_error
                    ),
                });
            }
            halvings += 1;
            h /= 2.0;
        };
        state = next;
        t += h;
        accepted += 1;
        records.push(StepRecord { t, h, diagnostics: diag });
        if let Some(every) = config.snapshot_every {
            if every > 0 && accepted % every == 0 {
                snapshots.push(snapshot(t, &state, diag));
            }
        }
    }
    let diag = records.last().expect("initial record").diagnostics;
    let transported = state.2.clone();
    Ok(Trajectory { records, snapshots, last: snapshot(t, &state, diag), transported })
}

fn rk4_step(sys: &LaxSystem, s: &Stage, h: f64) -> Stage {
    let f = |st: &Stage| -> Stage {
        let (dd, db) = sys.rhs(&st.0, &st.1);
        let df = st.2.as_ref().map(|v| &st.1 * v);
        (dd, db, df)
    };
    let axpy = |a: &Stage, k: &Stage, c: f64| -> Stage {
        let c = Complex64::new(c, 0.0);
        (
            &a.0 + &k.0 * c,
            &a.1 + &k.1 * c,
            a.2.as_ref().zip(k.2.as_ref()).map(|(x, y)| x + y * c),
        )
    };
    let k1 = f(s);
    let k2 = f(&axpy(s, &k1, h / 2.0));
    let k3 = f(&axpy(s, &k2, h / 2.0));
    let k4 = f(&axpy(s, &k3, h));
    let w = Complex64::new(h / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    (
        &s.0 + (&k1.0 + &k2.0 * two + &k3.0 * two + &k4.0) * w,
        &s.1 + (&k1.1 + &k2.1 * two + &k3.1 * two + &k4.1) * w,
        s.2.as_ref().map(|v| {
            v + (k1.2.as_ref().unwrap() + k2.2.as_ref().unwrap() * two + k3.2.as_ref().unwrap() * two
                + k4.2.as_ref().unwrap())
                * w
        }),
    )
}
