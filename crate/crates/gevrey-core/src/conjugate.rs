//! Gevrey conjugation: the operator `F^(tau) = e^{tau D^sigma} F
//! e^{-tau D^sigma}` with `D = op(<.>)`, its paraproduct region machinery,
//! the weight controlling the loss of Gevrey radius, and the conjugated
//! symbol `a~` of `e^{tau D^sigma} op(a) e^{-tau D^sigma}` with its seminorm
//! envelope and asymptotic expansion.

use num_complex::Complex64;
use rand::Rng;

use crate::calculus::{central_stencil, log_log_slope, multi_indices, total_order};
use crate::error::{GevreyError, Result};
use crate::gevrey::{
    check_overflow, embedding_constant, fourier_gevrey_norm, sobolev_norm,
    weighted_spectrum_norm, OVERFLOW_EXPONENT,
};
use crate::grid::{multi_fft, Direction, FrequencyPoint, GridSpec, SampledFunction, MAX_DIM};
use crate::inequalities::{tri1_constant, tri2_constant};
use crate::jet::multi_factorial;
use crate::quantize::random_gevrey_sample;
use crate::symbol::{estimate_seminorm, SampledSymbol, SymbolClassParams};

/// The three paraproduct frequency regions of a pair `(xi, eta)`:
/// output-dominant `R1` (`|xi - eta| <= |eta|/K`), input-dominant `R2`
/// (`|eta| <= |xi - eta|/K`) and comparable `R3`. Shared boundaries go to
/// the lower-numbered region so the partition is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    R1,
    R2,
    R3,
}

/// Raw region predicates without precedence, for partition cross-checks.
pub fn region_predicates(xi: &FrequencyPoint, eta: &FrequencyPoint, k_ratio: f64) -> (bool, bool, bool) {
    let w = xi.sub(eta).norm();
    let e = eta.norm();
    (w <= e / k_ratio, e <= w / k_ratio, w / k_ratio < e && e < k_ratio * w)
}

/// Classifies `(xi, eta)` into exactly one region under the documented
/// boundary precedence R1 > R2 > R3.
pub fn classify_region(
    xi: &FrequencyPoint,
    eta: &FrequencyPoint,
    k_ratio: f64,
) -> Result<RegionLabel> {
    if !(k_ratio > 1.0) {
        return Err(GevreyError::bad_param(format!("K must exceed 1, got {k_ratio}")));
    }
    let w = xi.sub(eta).norm();
    let e = eta.norm();
    if w <= e / k_ratio {
        Ok(RegionLabel::R1)
    } else if e <= w / k_ratio {
        Ok(RegionLabel::R2)
    } else {
        Ok(RegionLabel::R3)
    }
}

/// Parameters of one conjugation: Fourier index, radius and the Sobolev
/// order the two-term bound is measured at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugationParams {
    pub sigma: f64,
    pub tau: f64,
    pub sobolev_order: f64,
}

impl ConjugationParams {
    pub fn new(sigma: f64, tau: f64, sobolev_order: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(GevreyError::bad_param(format!(
                "sigma must lie strictly in (0,1), got {sigma}"
            )));
        }
        if !(tau >= 0.0) {
            return Err(GevreyError::bad_param(format!("tau must be >= 0, got {tau}")));
        }
        if !(sobolev_order >= 0.0) {
            return Err(GevreyError::bad_param(format!(
                "Sobolev order must be >= 0, got {sobolev_order}"
            )));
        }
        Ok(ConjugationParams { sigma, tau, sobolev_order })
    }
}

/// Multiplies the spectrum pointwise by `e^{tau <xi>^sigma}`. Negative `tau`
/// damps; `apply_weight(apply_weight(f, s, t), s, -t)` is the identity to
/// rounding.
pub fn apply_weight(f: &SampledFunction, sigma: f64, tau: f64) -> Result<SampledFunction> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(GevreyError::bad_param(format!("sigma must lie in (0,1], got {sigma}")));
    }
    check_overflow(f.grid(), sigma, tau)?;
    let grid = *f.grid();
    let spec = f
        .spectrum()
        .iter()
        .enumerate()
        .map(|(flat, c)| c * (tau * grid.frequency_at(flat).bracket().powf(sigma)).exp())
        .collect();
    SampledFunction::from_spectrum(grid, spec)
}

/// The conjugated multiplication `F^(tau) v = e^{tau D^sigma} (F .
/// (e^{-tau D^sigma} v))`, computed through the grid product.
pub fn conjugated_multiply(
    f_mult: &SampledFunction,
    v: &SampledFunction,
    params: &ConjugationParams,
) -> Result<SampledFunction> {
    let damped = apply_weight(v, params.sigma, -params.tau)?;
    let prod = f_mult.pointwise_mul(&damped)?;
    apply_weight(&prod, params.sigma, params.tau)
}

/// Independent realization of the same operator straight from its Fourier
/// kernel: `out_hat(xi) = sum_eta e^{tau <xi>^sigma - tau <eta>^sigma}
/// F_hat(xi - eta) v_hat(eta)` with cyclic mode differences.
pub fn conjugated_multiply_kernel(
    f_mult: &SampledFunction,
    v: &SampledFunction,
    params: &ConjugationParams,
) -> Result<SampledFunction> {
    if f_mult.grid() != v.grid() {
        return Err(GevreyError::GridMismatch);
    }
    check_overflow(v.grid(), params.sigma, params.tau)?;
    let grid = *v.grid();
    let d = grid.dim();
    let total = grid.total_points();
    let f_hat = f_mult.spectrum();
    let v_hat = v.spectrum();
    let brackets: Vec<f64> =
        (0..total).map(|flat| grid.frequency_at(flat).bracket().powf(params.sigma)).collect();
    let mut out = vec![Complex64::default(); total];
    for (xi_flat, slot) in out.iter_mut().enumerate() {
        let xi = grid.modes_at(xi_flat);
        let mut acc = Complex64::default();
        for (eta_flat, &ve) in v_hat.iter().enumerate() {
            if ve == Complex64::default() {
                continue;
            }
            let eta = grid.modes_at(eta_flat);
            let mut diff = [0i64; MAX_DIM];
            for axis in 0..d {
                diff[axis] = xi[axis] - eta[axis];
            }
            let w = (params.tau * (brackets[xi_flat] - brackets[eta_flat])).exp();
            acc += f_hat[grid.flat_of_modes(&diff[..d])] * ve * w;
        }
        *slot = acc;
    }
    SampledFunction::from_spectrum(grid, out)
}

/// The pieces of the two-term conjugated-multiplication bound
/// `|F^(tau) v|_{H^m} <= C (|D^m F|_{sigma,tau} |v|_{L^2}
/// + |F|_{sigma,tau} |v|_{H^m})`.
#[derive(Debug, Clone, Copy)]
pub struct ConjugationBoundReport {
    pub lhs: f64,
    pub dm_f_norm: f64,
    pub f_norm: f64,
    pub v_l2: f64,
    pub v_hm: f64,
    /// `lhs / (dm_f_norm * v_l2 + f_norm * v_hm)`; its sup over a corpus is
    /// the fitted constant.
    pub ratio: f64,
}

pub fn conjugation_bound_report(
    f_mult: &SampledFunction,
    v: &SampledFunction,
    params: &ConjugationParams,
) -> Result<ConjugationBoundReport> {
    let m = params.sobolev_order;
    let grid = *f_mult.grid();
    let out = conjugated_multiply(f_mult, v, params)?;
    let lhs = sobolev_norm(&out, m)?;
    let dm_f_norm = {
        check_overflow(&grid, params.sigma, params.tau)?;
        weighted_spectrum_norm(f_mult, |flat| {
            let b = grid.frequency_at(flat).bracket();
            b.powf(m) * (params.tau * b.powf(params.sigma)).exp()
        })
    };
    let f_norm = fourier_gevrey_norm(f_mult, params.sigma, params.tau)?;
    let v_l2 = v.l2_norm();
    let v_hm = sobolev_norm(v, m)?;
    let denom = dm_f_norm * v_l2 + f_norm * v_hm;
    Ok(ConjugationBoundReport {
        lhs,
        dm_f_norm,
        f_norm,
        v_l2,
        v_hm,
        ratio: if denom > 0.0 { lhs / denom } else { 0.0 },
    })
}

/// Random corpus entry for the two-term bound: `F` with Gevrey-decaying
/// spectrum softened by `<k>^-(m+1)` and `v` with an `H^m`-type spectrum,
/// both band-limited.
pub fn conjugation_corpus_pair(
    grid: &GridSpec,
    params: &ConjugationParams,
    band: usize,
    rng: &mut impl Rng,
) -> (SampledFunction, SampledFunction) {
    let total = grid.total_points();
    let mut f_spec = vec![Complex64::default(); total];
    let mut v_spec = vec![Complex64::default(); total];
    for flat in 0..total {
        let modes = grid.modes_at(flat);
        if (0..grid.dim()).any(|a| modes[a].unsigned_abs() as usize > band) {
            continue;
        }
        let b = grid.frequency_at(flat).bracket();
        f_spec[flat] = crate::inequalities::complex_gaussian(rng)
            * (-params.tau * b.powf(params.sigma)).exp()
            * b.powf(-(params.sobolev_order + 1.0));
        v_spec[flat] =
            crate::inequalities::complex_gaussian(rng) * b.powf(-(params.sobolev_order + 0.5));
    }
    (
        SampledFunction::from_spectrum(*grid, f_spec).expect("length matches"),
        SampledFunction::from_spectrum(*grid, v_spec).expect("length matches"),
    )
}

/// Parameters of the radius-loss weight.
#[derive(Debug, Clone, Copy)]
pub struct WeightParams {
    pub sigma: f64,
    pub tau: f64,
    pub tau_prime: f64,
    pub delta: f64,
    pub s: f64,
}

impl WeightParams {
    pub fn new(sigma: f64, tau: f64, tau_prime: f64, delta: f64, s: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(GevreyError::bad_param(format!(
                "sigma must lie strictly in (0,1), got {sigma}"
            )));
        }
        if !(s > 1.0) {
            return Err(GevreyError::bad_param(format!("s must exceed 1, got {s}")));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(GevreyError::bad_param(format!("delta must lie in [0,1), got {delta}")));
        }
        if !(tau >= 0.0 && tau_prime >= 0.0) {
            return Err(GevreyError::bad_param("radii must be >= 0"));
        }
        if !(sigma <= (1.0 - delta) / s + 1e-12) {
            return Err(GevreyError::hypothesis(format!(
                "need sigma <= (1 - delta)/s, got sigma = {sigma} > {}",
                (1.0 - delta) / s
            )));
        }
        Ok(WeightParams { sigma, tau, tau_prime, delta, s })
    }
}

/// The exponential factor `W(tau'; tau) = exp(tau' <xi>^sigma -
/// tau <eta>^sigma - tau <xi>^(-delta/s) <xi - eta>^(1/s))`, carried in
/// log scale so overflowing exponents stay reportable.
#[derive(Debug, Clone, Copy)]
pub struct WeightW {
    pub exponent: f64,
}

impl WeightW {
    /// The weight itself, unless the exponent overflows double precision.
    pub fn value(&self) -> Option<f64> {
        if self.exponent > OVERFLOW_EXPONENT {
            None
        } else {
            Some(self.exponent.exp())
        }
    }
}

pub fn weight_w(xi: &FrequencyPoint, eta: &FrequencyPoint, p: &WeightParams) -> WeightW {
    let bx = xi.bracket();
    let be = eta.bracket();
    let bd = xi.sub(eta).bracket();
    WeightW {
        exponent: p.tau_prime * bx.powf(p.sigma)
            - p.tau * be.powf(p.sigma)
            - p.tau * bx.powf(-p.delta / p.s) * bd.powf(1.0 / p.s),
    }
}

/// The per-region exponent bounds used to control `W`:
/// * R1: `-(tau - (1 + phi) tau') <eta>^sigma`
/// * R2: `-(tau - phi tau') <eta>^sigma` minus
///   `(tau (1 + 1/K)^(-delta/s) - tau') <xi - eta>^((1-delta)/s)`
/// * R3: `-(tau - tau') <eta>^sigma` minus
///   `(tau (1 + K)^(-delta/s) - c' tau') <xi - eta>^((1-delta)/s)`
///
/// with `phi = K^sigma - (K-1)^sigma` and `c'` the comparable-region
/// constant. Each is a valid upper bound for the exponent of `W` pointwise
/// in its region (the coefficients may lose their sign for extreme `K`; the
/// bound inequality itself is unconditional).
pub fn weight_w_region_bound(
    xi: &FrequencyPoint,
    eta: &FrequencyPoint,
    k_ratio: f64,
    p: &WeightParams,
) -> Result<(RegionLabel, f64)> {
    let region = classify_region(xi, eta, k_ratio)?;
    let phi = tri1_constant(k_ratio, p.sigma)?;
    let be = eta.bracket().powf(p.sigma);
    let bd = xi.sub(eta).bracket().powf((1.0 - p.delta) / p.s);
    let exponent = match region {
        RegionLabel::R1 => -(p.tau - (1.0 + phi) * p.tau_prime) * be,
        RegionLabel::R2 => {
            -(p.tau - phi * p.tau_prime) * be
                - (p.tau * (1.0 + 1.0 / k_ratio).powf(-p.delta / p.s) - p.tau_prime) * bd
        }
        RegionLabel::R3 => {
            let c_prime = tri2_constant(k_ratio, p.sigma)?;
            -(p.tau - p.tau_prime) * be
                - (p.tau * (1.0 + k_ratio).powf(-p.delta / p.s) - c_prime * p.tau_prime) * bd
        }
    };
    Ok((region, exponent))
}

/// Smallest dyadic `K = 2^j` making the output- and input-dominant region
/// coefficients positive with margin at least `1e-6`:
/// `tau - (1 + K^sigma - (K-1)^sigma) tau' > 0` and
/// `tau (1 + 1/K)^(-delta/s) - tau' > 0`.
pub fn choose_k(tau: f64, tau_prime: f64, sigma: f64, delta: f64, s: f64) -> Result<f64> {
    if !(tau_prime < tau) {
        return Err(GevreyError::hypothesis(format!(
            "radius loss requires tau' < tau, got tau' = {tau_prime}, tau = {tau}"
        )));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(GevreyError::bad_param(format!("sigma must lie in (0,1), got {sigma}")));
    }
    const MARGIN: f64 = 1e-6;
    let mut k = 2.0f64;
    for _ in 0..40 {
        let phi = tri1_constant(k, sigma)?;
        let c1 = tau - (1.0 + phi) * tau_prime;
        let c2 = tau * (1.0 + 1.0 / k).powf(-delta / s) - tau_prime;
        if c1 >= MARGIN && c2 >= MARGIN {
            return Ok(k);
        }
        k *= 2.0;
    }
    Err(GevreyError::hypothesis(format!(
        "no dyadic K <= 2^41 achieves the region margins for tau = {tau}, tau' = {tau_prime}"
    )))
}

/// The conjugated symbol `a~` of `e^{tau D^sigma} op_0(a) e^{-tau D^sigma}`:
/// per lattice `xi`, the column of `a~` is the inverse spatial transform of
/// `eta -> e^{tau(<xi + eta>^sigma - <xi>^sigma)} a_hat(eta, xi)`, with
/// `eta` read in the principal mode window. At `tau = 0` this returns `a`
/// itself to rounding. The result is declared in the `rho = 1, delta = 0`
/// class, and keeps the original support box as the seminorm window.
pub fn conjugated_symbol(a: &SampledSymbol, sigma: f64, tau: f64) -> Result<SampledSymbol> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(GevreyError::bad_param(format!(
            "sigma must lie strictly in (0,1), got {sigma}"
        )));
    }
    let grid = *a.grid();
    let total = grid.total_points();
    let a_hat = a.x_spectrum();
    let mut values = vec![Complex64::default(); total * total];
    for xi_flat in 0..total {
        let xi = grid.frequency_at(xi_flat);
        let base = xi.bracket().powf(sigma);
        let mut col = a_hat[xi_flat * total..(xi_flat + 1) * total].to_vec();
        for (eta_flat, c) in col.iter_mut().enumerate() {
            let eta = grid.frequency_at(eta_flat);
            let exponent = tau * (xi.add(&eta).bracket().powf(sigma) - base);
            if exponent.abs() > OVERFLOW_EXPONENT {
                return Err(GevreyError::WeightOverflow {
                    exponent,
                    tau_max: tau.abs() * OVERFLOW_EXPONENT / exponent.abs(),
                });
            }
            *c *= exponent.exp();
        }
        let spatial = multi_fft(&grid, &col, Direction::Inverse);
        values[xi_flat * total..(xi_flat + 1) * total].copy_from_slice(&spatial);
    }
    let p = a.params();
    let out_params = SymbolClassParams::new(p.m, 1.0, 0.0, p.s, p.r_scale)?;
    SampledSymbol::from_values(grid, values, out_params, *a.support())
}

/// Envelope report for the conjugated-symbol seminorm bound
/// `sup_{x in B, xi} |<xi>^{-m+|beta|} d_x^alpha d_xi^beta a~|
///   <= C |B|^(1/2) C_emb(tau_bar) sup_a |a|_{a,beta}
///      (tau_bar - |tau|)^(-(2|beta| + |alpha|)/sigma)`
/// with `sigma = 1/s`.
#[derive(Debug, Clone, Copy)]
pub struct SeminormEnvelopeReport {
    pub measured: f64,
    /// Everything on the right side except the fitted constant.
    pub envelope: f64,
    pub ratio: f64,
    pub gap: f64,
}

/// Orders included in `sup_alpha |a|_{alpha,beta}` for the envelope.
const ENVELOPE_SUP_ALPHA_MAX: usize = 4;

pub fn conjugated_seminorm_report(
    a: &SampledSymbol,
    alpha: &[usize],
    beta: &[usize],
    tau: f64,
    tau_bar: f64,
) -> Result<SeminormEnvelopeReport> {
    let p = *a.params();
    let critical = p.s * p.r_scale.powf(-1.0 / p.s);
    if !(tau.abs() < tau_bar && tau_bar < critical) {
        return Err(GevreyError::hypothesis(format!(
            "need |tau| < tau_bar < s R^(-1/s) = {critical}, got tau = {tau}, tau_bar = {tau_bar}"
        )));
    }
    let sigma = 1.0 / p.s;
    let grid = *a.grid();
    let d = grid.dim();
    let total = grid.total_points();
    let na = total_order(alpha);
    let nb = total_order(beta);

    let tilde = conjugated_symbol(a, sigma, tau)?;

    // d_x^alpha by spectral multiplier per column
    let tilde_hat = tilde.x_spectrum();
    let mut dx_cols = vec![Complex64::default(); total * total];
    for xi_flat in 0..total {
        let mut col = tilde_hat[xi_flat * total..(xi_flat + 1) * total].to_vec();
        for (mu_flat, c) in col.iter_mut().enumerate() {
            let mu = grid.frequency_at(mu_flat);
            let mut f = Complex64::new(1.0, 0.0);
            for (axis, &k) in alpha.iter().enumerate() {
                if k > 0 {
                    f *= Complex64::new(0.0, mu.coords()[axis]).powu(k as u32);
                }
            }
            *c *= f;
        }
        let spatial = multi_fft(&grid, &col, Direction::Inverse);
        dx_cols[xi_flat * total..(xi_flat + 1) * total].copy_from_slice(&spatial);
    }

    // d_xi^beta by lattice finite differences, interior modes only
    let stencils: Vec<Vec<(i64, f64)>> = beta.iter().map(|&k| central_stencil(k)).collect();
    let h = grid.freq_step();
    let half = grid.points_per_axis() as i64 / 2;
    let support = a.support();
    let mut measured: f64 = 0.0;
    for xi_flat in 0..total {
        let modes = grid.modes_at(xi_flat);
        let mut in_range = true;
        for axis in 0..d {
            let reach = stencils[axis].iter().map(|&(o, _)| o.abs()).max().unwrap_or(0);
            if modes[axis] - reach < -half || modes[axis] + reach > half - 1 {
                in_range = false;
            }
        }
        if !in_range {
            continue;
        }
        let weight = grid.frequency_at(xi_flat).bracket().powf(-p.m + nb as f64);
        for x_flat in 0..total {
            let x = grid.point_at(x_flat);
            if !support.contains(&x[..d]) {
                continue;
            }
            let mut acc = Complex64::default();
            let mut idx = vec![0usize; d];
            'stencil: loop {
                let mut coeff = 1.0;
                let mut probe = [0i64; MAX_DIM];
                probe[..d].copy_from_slice(&modes[..d]);
                for axis in 0..d {
                    let (off, cc) = stencils[axis][idx[axis]];
                    coeff *= cc;
                    probe[axis] += off;
                }
                let col_flat = grid.flat_of_modes(&probe[..d]);
                acc += coeff * dx_cols[col_flat * total + x_flat];
                for axis in 0..d {
                    idx[axis] += 1;
                    if idx[axis] < stencils[axis].len() {
                        continue 'stencil;
                    }
                    idx[axis] = 0;
                }
                break;
            }
            measured = measured.max(acc.norm() / h.powi(nb as i32) * weight);
        }
    }

    let mut sup_ab: f64 = 0.0;
    for k in 0..=ENVELOPE_SUP_ALPHA_MAX {
        let mut a_idx = [0usize; MAX_DIM];
        a_idx[0] = k;
        sup_ab = sup_ab.max(estimate_seminorm(a, &a_idx[..d], beta)?);
    }
    let gap = tau_bar - tau.abs();
    let envelope = support.measure().sqrt()
        * embedding_constant(p.s, p.r_scale, tau_bar)?
        * sup_ab
        * gap.powf(-((2 * nb + na) as f64) / sigma);
    Ok(SeminormEnvelopeReport {
        measured,
        envelope,
        ratio: if envelope > 0.0 { measured / envelope } else { f64::INFINITY },
        gap,
    })
}

/// Report of the asymptotic expansion check: remainder magnitudes per
/// lattice frequency, fitted high-frequency order and the predicted order
/// `max(m - (k+1)(1 - sigma), m - 2 + sigma)`.
#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub k: usize,
    pub remainder_samples: Vec<(f64, f64)>,
    pub fitted_order: f64,
    pub predicted_order: f64,
}

/// Truncation orders accepted by the expansion check.
pub const EXPANSION_K_MAX: usize = 3;
/// Dyadic octaves of lattice frequency the order fit requires.
pub const EXPANSION_MIN_OCTAVES: f64 = 3.0;

/// Computes the remainder `R = a~ - sum_{|alpha| <= k} ((-i)^{|alpha|} /
/// alpha!) d_x^alpha a (tau d_xi <.>^sigma)^alpha` on the grid and fits
/// `sup_x |R(., xi)| ~ <xi>^p` over the top three dyadic octaves. The
/// gradient power is componentwise, `d_{xi_i} <xi>^sigma = sigma xi_i
/// <xi>^(sigma-2)` evaluated in closed form; the `(-i)^{|alpha|}` sign is the
/// one the first-order term of the weight's Taylor expansion forces under
/// this crate's transform convention.
pub fn expansion_remainder(
    a: &SampledSymbol,
    k: usize,
    sigma: f64,
    tau: f64,
) -> Result<ExpansionReport> {
    if k > EXPANSION_K_MAX {
        return Err(GevreyError::OrderLimit { order: k, limit: EXPANSION_K_MAX });
    }
    let grid = *a.grid();
    let d = grid.dim();
    let total = grid.total_points();
    let max_b = grid.max_bracket();
    if max_b.log2() < EXPANSION_MIN_OCTAVES {
        return Err(GevreyError::FitRangeTooShort {
            got: max_b.log2(),
            need: EXPANSION_MIN_OCTAVES,
        });
    }
    let tilde = conjugated_symbol(a, sigma, tau)?;

    // spatial derivative columns of a for each |alpha| <= k
    let a_hat = a.x_spectrum();
    let alphas = multi_indices(d, k);
    let mut partial = vec![Complex64::default(); total * total];
    for alpha in &alphas {
        let na = total_order(&alpha[..d]);
        // (-i)^{|alpha|} / alpha!
        let coeff = Complex64::new(0.0, -1.0).powu(na as u32) / multi_factorial(&alpha[..d]);
        for xi_flat in 0..total {
            let xi = grid.frequency_at(xi_flat);
            let bracket = xi.bracket();
            // (tau d_xi <xi>^sigma)^alpha, componentwise
            let mut grad_pow = 1.0;
            for (axis, &p) in alpha[..d].iter().enumerate() {
                if p > 0 {
                    grad_pow *=
                        (tau * sigma * xi.coords()[axis] * bracket.powf(sigma - 2.0)).powi(p as i32);
                }
            }
            if grad_pow == 0.0 && na > 0 {
                continue;
            }
            let mut col = a_hat[xi_flat * total..(xi_flat + 1) * total].to_vec();
            for (mu_flat, c) in col.iter_mut().enumerate() {
                let mu = grid.frequency_at(mu_flat);
                let mut f = Complex64::new(1.0, 0.0);
                for (axis, &p) in alpha[..d].iter().enumerate() {
                    if p > 0 {
                        f *= Complex64::new(0.0, mu.coords()[axis]).powu(p as u32);
                    }
                }
                *c *= f;
            }
            let dx_col = multi_fft(&grid, &col, Direction::Inverse);
            let dst = &mut partial[xi_flat * total..(xi_flat + 1) * total];
            for (slot, v) in dst.iter_mut().zip(&dx_col) {
                *slot += coeff * grad_pow * v;
            }
        }
    }

    // remainder sup per lattice frequency
    let mut samples = Vec::with_capacity(total);
    for xi_flat in 0..total {
        let b = grid.frequency_at(xi_flat).bracket();
        let sup = tilde.column(xi_flat)
            .iter()
            .zip(&partial[xi_flat * total..(xi_flat + 1) * total])
            .map(|(t, p)| (t - p).norm())
            .fold(0.0, f64::max);
        samples.push((b, sup));
    }
    let lo = max_b / 8.0;
    let fit_points: Vec<(f64, f64)> =
        samples.iter().copied().filter(|&(b, _)| b >= lo).collect();
    // an identically vanishing remainder has no order to fit
    let fitted_order = log_log_slope(&fit_points).unwrap_or(f64::NEG_INFINITY);
    let p = a.params();
    let predicted_order =
        (p.m - (k as f64 + 1.0) * (1.0 - sigma)).max(p.m - 2.0 + sigma);
    Ok(ExpansionReport { k, remainder_samples: samples, fitted_order, predicted_order })
}

/// Finite-difference probe of the weight-derivative inequality
/// `|d_xi^b e^{tau(<xi+eta>^sigma - <xi>^sigma)}| <= C <xi>^-b <eta>^(2b)
/// e^{tau(<xi+eta>^sigma - <xi>^sigma)}` in one dimension: returns the ratio
/// of the left side to everything explicit on the right.
pub fn weight_derivative_ratio(xi: f64, eta: f64, sigma: f64, tau: f64, order: usize) -> f64 {
    let g = |x: f64| {
        let bx = (1.0 + x * x).sqrt();
        let bxe = (1.0 + (x + eta) * (x + eta)).sqrt();
        (tau * (bxe.powf(sigma) - bx.powf(sigma))).exp()
    };
    let bx = (1.0 + xi * xi).sqrt();
    let h = f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) * bx;
    let stencil = central_stencil(order);
    let mut acc = 0.0;
    for &(off, c) in &stencil {
        acc += c * g(xi + off as f64 * h);
    }
    let derivative = (acc / h.powi(order as i32)).abs();
    let be = (1.0 + eta * eta).sqrt();
    derivative * bx.powi(order as i32) / (be.powi(2 * order as i32) * g(xi))
}

/// Ratio probe used by the action suites: draws Gevrey-decaying random
/// inputs and returns the largest measured norm ratio of the conjugated
/// multiplication against its two-term bound.
pub fn fitted_conjugation_constant(
    grid: &GridSpec,
    params: &ConjugationParams,
    band: usize,
    corpus: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..corpus {
        let (f_mult, v) = conjugation_corpus_pair(grid, params, band, rng);
        worst = worst.max(conjugation_bound_report(&f_mult, &v, params)?.ratio);
    }
    Ok(worst)
}

/// Gevrey-decaying random input, re-exported shape used by several suites.
pub fn random_weighted_input(
    grid: &GridSpec,
    sigma: f64,
    tau: f64,
    band: usize,
    rng: &mut impl Rng,
) -> SampledFunction {
    random_gevrey_sample(grid, sigma, tau, band, rng)
}
