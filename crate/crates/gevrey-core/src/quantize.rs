//! The h-parametrized quantization
//! `op_h(a)u(x) = integral e^{i(x-y).eta} a(x - h(x-y), eta) u(y) dy deta`
//! on the periodic grid: a slow direct-quadrature realization, Fourier-side
//! fast paths, and empirical operator-norm estimation on exponentially
//! weighted classes. `h = 0` is the Kohn-Nirenberg quantization, `h = 1/2`
//! the Weyl one.
//!
//! Discrete model: the symbol is identified with its trigonometric
//! interpolant in `x`, integer mode differences are reduced cyclically into
//! the principal window `-N/2..N/2`, and every integral is a finite lattice
//! sum, so no oscillatory-integral regularization is needed. For rational
//! `h = p/q` the spatial argument `(1-h)x_j + h y_k` lives on the q-refined
//! grid and the double sum is evaluated there exactly.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{GevreyError, Result};
use crate::gevrey::{check_overflow, embedding_constant, fourier_gevrey_norm};
use crate::grid::{GridSpec, SampledFunction, MAX_DIM};
use crate::inequalities::complex_gaussian;
use crate::symbol::{estimate_seminorm, SampledSymbol, SupportBox, SymbolClassParams};

/// Largest denominator probed when recognizing a rational time-share `h`.
const MAX_DENOMINATOR: u64 = 1 << 12;

/// Writes `h` as an exact fraction `p/q` in lowest terms, if it is one with
/// a denominator up to [`MAX_DENOMINATOR`].
pub fn rational_h(h: f64) -> Option<(u64, u64)> {
    if !(0.0..=1.0).contains(&h) {
        return None;
    }
    let mut q = 1u64;
    while q <= MAX_DENOMINATOR {
        let p = h * q as f64;
        if p == p.round() && (p / q as f64) == h {
            return Some((p as u64, q));
        }
        q += 1;
    }
    None
}

/// Dyadic fraction `p / 2^r` in lowest terms with `2^r` dividing `n`; this
/// is the compatibility condition of the Fourier-side fast path.
pub fn dyadic_h(h: f64, n: usize) -> Option<(u64, u64)> {
    let (p, q) = rational_h(h)?;
    if q.is_power_of_two() && (q as usize) <= n {
        Some((p, q))
    } else {
        None
    }
}

fn check_pair(a: &SampledSymbol, u: &SampledFunction) -> Result<()> {
    if a.grid() != u.grid() {
        return Err(GevreyError::GridMismatch);
    }
    Ok(())
}

/// Unit roots `e^{2 pi i t / m}` for `t = 0..m`.
fn roots(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|t| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / m as f64))
        .collect()
}

/// Synthesizes the symbol's x-interpolant on the q-refined grid, one column
/// per lattice `eta`. Entry layout: `[eta_flat * refined_total + r_flat]`.
fn refined_symbol_columns(a: &SampledSymbol, q: usize) -> Vec<Complex64> {
    let grid = *a.grid();
    let d = grid.dim();
    let n = grid.points_per_axis();
    let total = grid.total_points();
    let rn = q * n;
    let refined_total = rn.pow(d as u32);
    let w = roots(rn);
    let a_hat = a.x_spectrum();
    let mut out = vec![Complex64::default(); total * refined_total];
    // refined multi-index decode
    let mut r_axes = vec![[0usize; MAX_DIM]; refined_total];
    for (r_flat, slot) in r_axes.iter_mut().enumerate() {
        let mut rest = r_flat;
        for axis in (0..d).rev() {
            slot[axis] = rest % rn;
            rest /= rn;
        }
    }
    for eta_flat in 0..total {
        let col = &a_hat[eta_flat * total..(eta_flat + 1) * total];
        let dst = &mut out[eta_flat * refined_total..(eta_flat + 1) * refined_total];
        for (mu_flat, &coef) in col.iter().enumerate() {
            if coef == Complex64::default() {
                continue;
            }
            let modes = grid.modes_at(mu_flat);
            // e^{i mu . w_r} = prod_axis e^{2 pi i mu_a r_a / (qN)}
            for (r_flat, axes) in r_axes.iter().enumerate() {
                let mut t = 0i64;
                for axis in 0..d {
                    t += modes[axis] * axes[axis] as i64;
                }
                dst[r_flat] += coef * w[t.rem_euclid(rn as i64) as usize];
            }
        }
    }
    out
}

/// Direct double-sum quadrature of `op_h(a) u`: for each grid point `x_j`,
/// sums over lattice `eta` and grid `y` with the symbol read at
/// `(1-h) x_j + h y`. Serves as the slow oracle for the Fourier-side paths.
/// Any `h` in `[0, 1]` is accepted; irrational `h` falls back to per-point
/// interpolant evaluation.
pub fn quantize_direct(
    a: &SampledSymbol,
    u: &SampledFunction,
    h: f64,
) -> Result<SampledFunction> {
    check_pair(a, u)?;
    if !(0.0..=1.0).contains(&h) {
        return Err(GevreyError::bad_param(format!("h must lie in [0,1], got {h}")));
    }
    let grid = *u.grid();
    let d = grid.dim();
    let n = grid.points_per_axis();
    let total = grid.total_points();

    // the refined table holds (qN)^d values per lattice column; beyond the
    // cap the per-point path is slower but memory-light
    let refined_fits = |q: u64| {
        let rn = (q as usize).saturating_mul(n);
        rn.checked_pow(d as u32)
            .and_then(|rt| rt.checked_mul(total))
            .is_some_and(|cells| cells <= 1 << 26)
    };
    match rational_h(h).filter(|&(_, q)| refined_fits(q)) {
        Some((p, q)) => {
            let q = q as usize;
            let p = p as usize;
            let rn = q * n;
            let refined = refined_symbol_columns(a, q);
            let refined_total = rn.pow(d as u32);
            let w_n = roots(n);
            let inv_total = 1.0 / total as f64;
            let mut out = vec![Complex64::default(); total];
            // per-axis index caches
            let split: Vec<[usize; MAX_DIM]> = (0..total).map(|f| grid.split_index(f)).collect();
            let modes: Vec<[i64; MAX_DIM]> = (0..total).map(|f| grid.modes_at(f)).collect();
            for (x_flat, out_slot) in out.iter_mut().enumerate() {
                let xj = split[x_flat];
                for eta_flat in 0..total {
                    let eta = modes[eta_flat];
                    let col = &refined[eta_flat * refined_total..(eta_flat + 1) * refined_total];
                    let mut inner = Complex64::default();
                    for (y_flat, uy) in u.values().iter().enumerate() {
                        let yk = split[y_flat];
                        // refined index of (1-h) x + h y, axis by axis
                        let mut r_flat = 0usize;
                        let mut phase = 0i64;
                        for axis in 0..d {
                            let r = ((q - p) * xj[axis] + p * yk[axis]) % rn;
                            r_flat = r_flat * rn + r;
                            phase -= yk[axis] as i64 * eta[axis];
                        }
                        inner += w_n[phase.rem_euclid(n as i64) as usize] * col[r_flat] * uy;
                    }
                    let mut phase = 0i64;
                    for axis in 0..d {
                        phase += xj[axis] as i64 * eta[axis];
                    }
                    *out_slot += w_n[phase.rem_euclid(n as i64) as usize] * inner * inv_total;
                }
            }
            SampledFunction::from_values(grid, out)
        }
        None => {
            // irrational h: evaluate the interpolant mode sum pointwise
            let a_hat = a.x_spectrum();
            let w_n = roots(n);
            let inv_total = 1.0 / total as f64;
            let spacing = grid.spacing();
            let freq_step = grid.freq_step();
            let mut out = vec![Complex64::default(); total];
            for (x_flat, out_slot) in out.iter_mut().enumerate() {
                let xj = grid.split_index(x_flat);
                for eta_flat in 0..total {
                    let eta = grid.modes_at(eta_flat);
                    let col = &a_hat[eta_flat * total..(eta_flat + 1) * total];
                    let mut inner = Complex64::default();
                    for (y_flat, uy) in u.values().iter().enumerate() {
                        let yk = grid.split_index(y_flat);
                        // w = (1-h) x + h y, then A(w) = sum_mu a_hat e^{i mu w}
                        let mut aval = Complex64::default();
                        for (mu_flat, &coef) in col.iter().enumerate() {
                            if coef == Complex64::default() {
                                continue;
                            }
                            let mu = grid.modes_at(mu_flat);
                            let mut arg = 0.0;
                            for axis in 0..d {
                                let w_axis = (1.0 - h) * xj[axis] as f64 * spacing
                                    + h * yk[axis] as f64 * spacing;
                                arg += freq_step * mu[axis] as f64 * w_axis;
                            }
                            aval += coef * Complex64::from_polar(1.0, arg);
                        }
                        let mut phase = 0i64;
                        for axis in 0..d {
                            phase -= yk[axis] as i64 * eta[axis];
                        }
                        inner += w_n[phase.rem_euclid(n as i64) as usize] * aval * uy;
                    }
                    let mut phase = 0i64;
                    for axis in 0..d {
                        phase += xj[axis] as i64 * eta[axis];
                    }
                    *out_slot += w_n[phase.rem_euclid(n as i64) as usize] * inner * inv_total;
                }
            }
            SampledFunction::from_values(grid, out)
        }
    }
}

/// Kohn-Nirenberg fast path: the output spectrum is the twisted convolution
/// `F(op_0(a) u)(xi) = sum_eta a_hat(xi - eta, eta) u_hat(eta)` with the
/// mode difference reduced cyclically. Agrees with `quantize_direct(.., 0)`
/// to rounding.
pub fn quantize_fourier_h0(a: &SampledSymbol, u: &SampledFunction) -> Result<SampledFunction> {
    check_pair(a, u)?;
    twisted_convolution(a, u, SymbolFrequencyArg::Input)
}

/// Falsifiable variant reading the symbol's frequency argument at the
/// output frequency `xi` instead of the input frequency `eta`. It does not
/// match the direct quadrature for genuinely (x, xi)-coupled symbols; the
/// discrepancy test is part of the suite.
pub fn quantize_fourier_h0_xi_variant(
    a: &SampledSymbol,
    u: &SampledFunction,
) -> Result<SampledFunction> {
    check_pair(a, u)?;
    twisted_convolution(a, u, SymbolFrequencyArg::Output)
}

enum SymbolFrequencyArg {
    Input,
    Output,
}

fn twisted_convolution(
    a: &SampledSymbol,
    u: &SampledFunction,
    arg: SymbolFrequencyArg,
) -> Result<SampledFunction> {
    let grid = *u.grid();
    let d = grid.dim();
    let total = grid.total_points();
    let a_hat = a.x_spectrum();
    let u_hat = u.spectrum();
    let mut out = vec![Complex64::default(); total];
    for (xi_flat, out_slot) in out.iter_mut().enumerate() {
        let xi = grid.modes_at(xi_flat);
        let mut acc = Complex64::default();
        for (eta_flat, &ue) in u_hat.iter().enumerate() {
            if ue == Complex64::default() {
                continue;
            }
            let eta = grid.modes_at(eta_flat);
            let mut diff = [0i64; MAX_DIM];
            for axis in 0..d {
                diff[axis] = xi[axis] - eta[axis];
            }
            let mu_flat = grid.flat_of_modes(&diff[..d]);
            let col = match arg {
                SymbolFrequencyArg::Input => eta_flat,
                SymbolFrequencyArg::Output => xi_flat,
            };
            acc += a_hat[col * total + mu_flat] * ue;
        }
        *out_slot = acc;
    }
    SampledFunction::from_spectrum(grid, out)
}

/// Fourier-side fast path for `h in (0,1)`: on the lattice, the phase-space
/// change of variables constrains the sum to input modes `zeta` with
/// `q | (xi - zeta)` per axis (for `h = p/q` dyadic in lowest terms), and
/// reads the symbol at the intermediate frequency
/// `eta = zeta + h (xi - zeta)`, which then is lattice-valued:
/// `F(op_h(a) u)(xi) = sum_zeta a_hat(xi - zeta, zeta + h(xi - zeta)) u_hat(zeta)`.
/// Mode differences use the principal window, matching the direct path.
/// Errors on `h` outside `(0,1)` or not dyadic-compatible with the grid.
pub fn quantize_fourier_h(
    a: &SampledSymbol,
    u: &SampledFunction,
    h: f64,
) -> Result<SampledFunction> {
    check_pair(a, u)?;
    if !(h > 0.0 && h < 1.0) {
        return Err(GevreyError::bad_param(format!(
            "the Fourier-side path needs h in (0,1), got {h}"
        )));
    }
    let grid = *u.grid();
    let (p, q) = dyadic_h(h, grid.points_per_axis()).ok_or(GevreyError::IncommensurableH(h))?;
    let (p, q) = (p as i64, q as i64);
    let d = grid.dim();
    let total = grid.total_points();
    let a_hat = a.x_spectrum();
    let u_hat = u.spectrum();
    let mut out = vec![Complex64::default(); total];
    for (xi_flat, out_slot) in out.iter_mut().enumerate() {
        let xi = grid.modes_at(xi_flat);
        let mut acc = Complex64::default();
        'zeta: for (zeta_flat, &uz) in u_hat.iter().enumerate() {
            if uz == Complex64::default() {
                continue;
            }
            let zeta = grid.modes_at(zeta_flat);
            let mut mu = [0i64; MAX_DIM];
            let mut eta = [0i64; MAX_DIM];
            for axis in 0..d {
                // principal-window representative of the mode difference
                let n = grid.points_per_axis() as i64;
                let mut w = (xi[axis] - zeta[axis]).rem_euclid(n);
                if w >= n / 2 {
                    w -= n;
                }
                if w.rem_euclid(q) != 0 {
                    continue 'zeta;
                }
                mu[axis] = w;
                eta[axis] = zeta[axis] + p * w / q;
            }
            let mu_flat = grid.flat_of_modes(&mu[..d]);
            let eta_flat = grid.flat_of_modes(&eta[..d]);
            acc += a_hat[eta_flat * total + mu_flat] * uz;
        }
        *out_slot = acc;
    }
    SampledFunction::from_spectrum(grid, out)
}

/// Random function with Gevrey-decaying spectrum: coefficients
/// `e^{-tau <xi>^sigma} * gaussian` on modes with `|mode|_inf <= band`.
/// These are dense enough in the weighted-class unit ball to probe operator
/// norms at desk scale.
pub fn random_gevrey_sample(
    grid: &GridSpec,
    sigma: f64,
    tau: f64,
    band: usize,
    rng: &mut impl Rng,
) -> SampledFunction {
    let total = grid.total_points();
    let mut spec = vec![Complex64::default(); total];
    for (flat, slot) in spec.iter_mut().enumerate() {
        let modes = grid.modes_at(flat);
        if (0..grid.dim()).any(|a| modes[a].unsigned_abs() as usize > band) {
            continue;
        }
        let b = grid.frequency_at(flat).bracket();
        *slot = complex_gaussian(rng) * (-tau * b.powf(sigma)).exp();
    }
    SampledFunction::from_spectrum(*grid, spec).expect("spectrum length matches grid")
}

/// Random band-limited function with flat gaussian coefficients on
/// `|mode|_inf <= band`.
pub fn random_band_function(grid: &GridSpec, band: usize, rng: &mut impl Rng) -> SampledFunction {
    let total = grid.total_points();
    let mut spec = vec![Complex64::default(); total];
    for (flat, slot) in spec.iter_mut().enumerate() {
        let modes = grid.modes_at(flat);
        if (0..grid.dim()).any(|a| modes[a].unsigned_abs() as usize > band) {
            continue;
        }
        *slot = complex_gaussian(rng);
    }
    SampledFunction::from_spectrum(*grid, spec).expect("spectrum length matches grid")
}

/// Random symbol whose x-modes lie on the q-sublattice with `|mode| <= band`
/// per axis, so the phase-space change of variables closes on the lattice
/// for `h = p/q` and the two quantization paths agree to rounding.
pub fn random_compatible_symbol(
    grid: &GridSpec,
    q: usize,
    x_band: usize,
    rng: &mut impl Rng,
) -> Result<SampledSymbol> {
    let total = grid.total_points();
    let d = grid.dim();
    let mut hat = vec![Complex64::default(); total * total];
    for xi_flat in 0..total {
        for mu_flat in 0..total {
            let mu = grid.modes_at(mu_flat);
            let ok = (0..d).all(|a| {
                mu[a].rem_euclid(q as i64) == 0 && mu[a].unsigned_abs() as usize <= x_band
            });
            if ok {
                // smooth xi dependence keeps the symbol class-like
                let b = grid.frequency_at(xi_flat).bracket();
                hat[xi_flat * total + mu_flat] = complex_gaussian(rng) / b.powf(0.5);
            }
        }
    }
    // synthesize columns back to x samples
    let mut values = vec![Complex64::default(); total * total];
    for xi_flat in 0..total {
        let col = crate::grid::multi_fft(
            grid,
            &hat[xi_flat * total..(xi_flat + 1) * total],
            crate::grid::Direction::Inverse,
        );
        values[xi_flat * total..(xi_flat + 1) * total].copy_from_slice(&col);
    }
    let lo: Vec<f64> = vec![0.0; d];
    let hi: Vec<f64> = vec![grid.period(); d];
    SampledSymbol::from_values(
        *grid,
        values,
        SymbolClassParams::new(0.0, 1.0, 0.0, 2.0, 1.0)?,
        SupportBox::new(&lo, &hi)?,
    )
}

/// Report of an empirical operator-norm probe on the weighted classes.
#[derive(Debug, Clone, Copy)]
pub struct OperatorNormReport {
    pub empirical_norm: f64,
    pub bound: f64,
    pub sample_count: usize,
    pub sigma: f64,
    pub tau: f64,
    pub tau_prime: f64,
}

/// Derivative orders included in `sup_alpha |a|_{alpha,0}` for the reported
/// bound.
pub const ACTION_SUP_ALPHA_MAX: usize = 4;

/// Estimates the norm of `op_0(a)` from the tau-weighted class into the
/// tau'-weighted class by maximizing the norm ratio over random inputs with
/// Gevrey-decaying spectra. The report carries the a-priori bound
/// `|B|^(1/2) C(s, R, tau) sup_alpha |a|_{alpha,0}` for comparison.
///
/// Hypotheses checked: `tau' < tau < s R^(-1/s)`, `sigma <= (1 - delta)/s`,
/// and the overflow guard for both weights on this grid.
pub fn estimate_action_norm(
    a: &SampledSymbol,
    sigma: f64,
    tau: f64,
    tau_prime: f64,
    n_samples: usize,
    band: usize,
    rng: &mut impl Rng,
) -> Result<OperatorNormReport> {
    let p = *a.params();
    if !(tau_prime < tau) {
        return Err(GevreyError::hypothesis(format!(
            "radius loss requires tau' < tau, got tau' = {tau_prime}, tau = {tau}"
        )));
    }
    let critical = p.s * p.r_scale.powf(-1.0 / p.s);
    if !(tau < critical) {
        return Err(GevreyError::hypothesis(format!(
            "tau = {tau} must stay below the critical radius s R^(-1/s) = {critical}"
        )));
    }
    if !(sigma > 0.0 && sigma <= (1.0 - p.delta) / p.s) {
        return Err(GevreyError::hypothesis(format!(
            "need 0 < sigma <= (1 - delta)/s = {}, got {sigma}",
            (1.0 - p.delta) / p.s
        )));
    }
    if !(tau_prime >= 0.0) {
        return Err(GevreyError::hypothesis(format!("tau' must be >= 0, got {tau_prime}")));
    }
    check_overflow(a.grid(), sigma, tau)?;
    check_overflow(a.grid(), sigma, tau_prime)?;

    let mut empirical: f64 = 0.0;
    for _ in 0..n_samples {
        let u = random_gevrey_sample(a.grid(), sigma, tau, band, rng);
        let denom = fourier_gevrey_norm(&u, sigma, tau)?;
        if denom == 0.0 {
            continue;
        }
        let w = quantize_fourier_h0(a, &u)?;
        let num = fourier_gevrey_norm(&w, sigma, tau_prime)?;
        empirical = empirical.max(num / denom);
    }

    let mut sup_alpha0: f64 = 0.0;
    for k in 0..=ACTION_SUP_ALPHA_MAX {
        let mut alpha = [0usize; MAX_DIM];
        alpha[0] = k; // isotropic construction: axis sweeps suffice at desk scale
        sup_alpha0 = sup_alpha0.max(estimate_seminorm(a, &alpha[..a.grid().dim()], &vec![0; a.grid().dim()])?);
    }
    let bound =
        a.support().measure().sqrt() * embedding_constant(p.s, p.r_scale, tau)? * sup_alpha0;
    Ok(OperatorNormReport {
        empirical_norm: empirical,
        bound,
        sample_count: n_samples,
        sigma,
        tau,
        tau_prime,
    })
}

/// Diagnostic for the necessity of `tau' < tau`: with the inequality
/// reversed, the norm ratio grows without bound in the input band limit.
/// Returns `(band, max ratio)` pairs over annulus-supported random inputs.
pub fn action_growth_diagnostic(
    a: &SampledSymbol,
    sigma: f64,
    tau: f64,
    tau_prime: f64,
    bands: &[usize],
    samples_per_band: usize,
    rng: &mut impl Rng,
) -> Result<Vec<(usize, f64)>> {
    check_overflow(a.grid(), sigma, tau.max(tau_prime))?;
    let grid = *a.grid();
    let total = grid.total_points();
    let mut out = Vec::with_capacity(bands.len());
    for &band in bands {
        let mut worst: f64 = 0.0;
        for _ in 0..samples_per_band {
            // annulus band/2 < |mode| <= band concentrates the probe at the
            // band limit, where the reversed weights diverge
            let mut spec = vec![Complex64::default(); total];
            for (flat, slot) in spec.iter_mut().enumerate() {
                let modes = grid.modes_at(flat);
                let mag = (0..grid.dim()).map(|a| modes[a].unsigned_abs() as usize).max().unwrap();
                if mag > band / 2 && mag <= band {
                    *slot = complex_gaussian(rng);
                }
            }
            let u = SampledFunction::from_spectrum(grid, spec)?;
            let denom = fourier_gevrey_norm(&u, sigma, tau)?;
            if denom == 0.0 {
                continue;
            }
            let w = quantize_fourier_h0(a, &u)?;
            worst = worst.max(fourier_gevrey_norm(&w, sigma, tau_prime)? / denom);
        }
        out.push((band, worst));
    }
    Ok(out)
}
