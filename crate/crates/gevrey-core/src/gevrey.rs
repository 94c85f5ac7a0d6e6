//! Gevrey norms on both sides of the Fourier transform, and the quantitative
//! embedding of compactly supported spatial-Gevrey functions into the
//! exponentially weighted Fourier class.
//!
//! Spatial side: `G^s_R(B)` carries `|f|_{s,R} = sup_alpha sup_B |d^alpha f| /
//! (R^|alpha| |alpha|!^s)`. Fourier side: `|f|_{sigma,tau} = |e^{tau <.>^sigma}
//! f_hat|_{L^2}`. For `sigma = 1/s` and `tau < s R^(-1/s)` the first space
//! embeds in the second with an explicit constant computed here.

use crate::calculus::{self, fd_step, multi_indices, spectral_partial, total_order, FD_MAX_ORDER};
use crate::error::{GevreyError, Result};
use crate::grid::{GridSpec, SampledFunction};
use crate::jet::factorial;

/// Exponents above this overflow `exp` in double precision (with headroom);
/// weighted norms fail loudly instead of returning infinities.
pub const OVERFLOW_EXPONENT: f64 = 700.0;

/// Parameter bundle `(s, R, sigma, tau)` tying the two Gevrey viewpoints
/// together. For the embedding one needs `sigma = 1/s` and `tau < s R^(-1/s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevreyParams {
    pub s: f64,
    pub r_scale: f64,
    pub sigma: f64,
    pub tau: f64,
}

impl GevreyParams {
    pub fn new(s: f64, r_scale: f64, sigma: f64, tau: f64) -> Result<Self> {
        if !(s > 1.0) {
            return Err(GevreyError::bad_param(format!("Gevrey index s must exceed 1, got {s}")));
        }
        if !(r_scale > 0.0) {
            return Err(GevreyError::bad_param(format!("scale R must be positive, got {r_scale}")));
        }
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(GevreyError::bad_param(format!("sigma must lie in (0,1], got {sigma}")));
        }
        if !(tau >= 0.0) {
            return Err(GevreyError::bad_param(format!("radius tau must be >= 0, got {tau}")));
        }
        Ok(GevreyParams { s, r_scale, sigma, tau })
    }

    /// Critical Fourier radius `s R^(-1/s)` of the embedding.
    pub fn critical_tau(&self) -> f64 {
        self.s * self.r_scale.powf(-1.0 / self.s)
    }

    /// Checks the embedding constraints `sigma = 1/s`, `tau < s R^(-1/s)`.
    pub fn embedding_consistent(&self) -> bool {
        (self.sigma - 1.0 / self.s).abs() <= 1e-12 && self.tau < self.critical_tau()
    }
}

fn check_weight_domain(sigma: f64, tau_like: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(GevreyError::bad_param(format!("sigma must lie in (0,1], got {sigma}")));
    }
    if !tau_like.is_finite() {
        return Err(GevreyError::bad_param(format!("tau must be finite, got {tau_like}")));
    }
    Ok(())
}

/// Guards `tau <xi_max>^sigma <= 700` for a grid, reporting the largest
/// admissible `tau` on failure.
pub fn check_overflow(grid: &GridSpec, sigma: f64, tau: f64) -> Result<()> {
    let top = grid.max_bracket().powf(sigma);
    let exponent = tau * top;
    if exponent > OVERFLOW_EXPONENT {
        return Err(GevreyError::WeightOverflow { exponent, tau_max: OVERFLOW_EXPONENT / top });
    }
    Ok(())
}

/// Weighted spectral L2 norm `sqrt(L^d sum_k w(xi_k)^2 |f_hat_k|^2)`.
pub fn weighted_spectrum_norm(f: &SampledFunction, weight: impl Fn(usize) -> f64) -> f64 {
    let grid = f.grid();
    let mut acc = 0.0;
    for (flat, c) in f.spectrum().iter().enumerate() {
        let w = weight(flat);
        acc += w * w * c.norm_sqr();
    }
    (grid.mode_weight() * acc).sqrt()
}

/// The Fourier-Gevrey norm `|e^{tau <.>^sigma} f_hat|_{L^2}` by lattice
/// quadrature. At `tau = 0` this is the plain `L^2` norm (same quadrature).
pub fn fourier_gevrey_norm(f: &SampledFunction, sigma: f64, tau: f64) -> Result<f64> {
    check_weight_domain(sigma, tau)?;
    if tau < 0.0 {
        return Err(GevreyError::bad_param(format!("radius tau must be >= 0, got {tau}")));
    }
    check_overflow(f.grid(), sigma, tau)?;
    let grid = *f.grid();
    Ok(weighted_spectrum_norm(f, |flat| {
        (tau * grid.frequency_at(flat).bracket().powf(sigma)).exp()
    }))
}

/// Sobolev norm `|<.>^m f_hat|_{L^2}` by lattice quadrature.
pub fn sobolev_norm(f: &SampledFunction, m: f64) -> Result<f64> {
    if !(m >= 0.0) {
        return Err(GevreyError::bad_param(format!("Sobolev order must be >= 0, got {m}")));
    }
    let grid = *f.grid();
    Ok(weighted_spectrum_norm(f, |flat| grid.frequency_at(flat).bracket().powf(m)))
}

/// How a spatial seminorm estimate obtained its derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeminormMethod {
    /// Closed-form or trigonometric-interpolant derivatives.
    AnalyticDerivatives,
    /// Central finite differences with the order-tuned step rule.
    FiniteDifferences,
}

/// Value of `max_{|alpha| <= orders_checked} sup_x |d^alpha f| / (R^|alpha|
/// |alpha|!^s)`, monotone nondecreasing in `orders_checked`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormEstimate {
    pub value: f64,
    pub orders_checked: usize,
    pub method: SeminormMethod,
}

/// A scalar field that can be probed anywhere, optionally with closed-form
/// partial derivatives.
pub trait SpatialField {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
    /// Closed-form mixed partial, when the field knows one.
    fn partial(&self, _alpha: &[usize], _x: &[f64]) -> Option<f64> {
        None
    }
}

fn seminorm_domain_checks(s: f64, r_scale: f64) -> Result<()> {
    if !(s > 1.0) {
        return Err(GevreyError::bad_param(format!("Gevrey index s must exceed 1, got {s}")));
    }
    if !(r_scale > 0.0) {
        return Err(GevreyError::bad_param(format!("scale R must be positive, got {r_scale}")));
    }
    Ok(())
}

fn normalizer(s: f64, r_scale: f64, order: usize) -> f64 {
    r_scale.powi(order as i32) * factorial(order).powf(s)
}

/// Spatial Gevrey seminorm of a sampled grid function. Derivatives are those
/// of the trigonometric interpolant (spectral multipliers), which are exact
/// for band-limited data; the sup runs over grid points only.
pub fn spatial_gevrey_seminorm(
    f: &SampledFunction,
    s: f64,
    r_scale: f64,
    alpha_max: usize,
) -> Result<SeminormEstimate> {
    seminorm_domain_checks(s, r_scale)?;
    let dim = f.grid().dim();
    let mut best = 0.0f64;
    for alpha in multi_indices(dim, alpha_max) {
        let order = total_order(&alpha[..dim]);
        let df = spectral_partial(f, &alpha[..dim])?;
        let sup = df.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        best = best.max(sup / normalizer(s, r_scale, order));
    }
    Ok(SeminormEstimate {
        value: best,
        orders_checked: alpha_max,
        method: SeminormMethod::AnalyticDerivatives,
    })
}

/// Spatial Gevrey seminorm of an arbitrary field, probed at the points of
/// `grid`. Uses the field's closed-form partials when it has them, otherwise
/// central finite differences with step `h_k = eps^(1/(k+2)) * L`; orders
/// above [`FD_MAX_ORDER`] are rejected under finite differences.
pub fn spatial_gevrey_seminorm_field(
    field: &dyn SpatialField,
    grid: &GridSpec,
    s: f64,
    r_scale: f64,
    alpha_max: usize,
) -> Result<SeminormEstimate> {
    seminorm_domain_checks(s, r_scale)?;
    if field.dim() != grid.dim() {
        return Err(GevreyError::GridMismatch);
    }
    let dim = grid.dim();
    let analytic = {
        let alpha0 = multi_indices(dim, alpha_max);
        let x0 = grid.point_at(0);
        alpha0.iter().all(|a| field.partial(&a[..dim], &x0[..dim]).is_some())
    };
    if !analytic && alpha_max > FD_MAX_ORDER {
        return Err(GevreyError::OrderLimit { order: alpha_max, limit: FD_MAX_ORDER });
    }
    let mut best = 0.0f64;
    for alpha in multi_indices(dim, alpha_max) {
        let order = total_order(&alpha[..dim]);
        let h = fd_step(order.max(1), grid.period());
        let mut sup = 0.0f64;
        for flat in 0..grid.total_points() {
            let x = grid.point_at(flat);
            let v = match field.partial(&alpha[..dim], &x[..dim]) {
                Some(v) => v,
                None => {
                    calculus::fd_partial(&|p| field.eval(p), &x[..dim], &alpha[..dim], h)?
                }
            };
            sup = sup.max(v.abs());
        }
        best = best.max(sup / normalizer(s, r_scale, order));
    }
    Ok(SeminormEstimate {
        value: best,
        orders_checked: alpha_max,
        method: if analytic {
            SeminormMethod::AnalyticDerivatives
        } else {
            SeminormMethod::FiniteDifferences
        },
    })
}

/// The explicit series factor of the embedding `G^s_R(B) -> G^{1/s}_tau`:
/// tracing the factorial bounds
/// `n! <= e n^(n+1/2) e^(-n) <= 1.09 sqrt(2 pi n) (n/e)^n` (upper) and
/// `n! >= sqrt(2 pi n) (n/e)^n` (lower) through
/// `ceil(n sigma)!^s / n! <= c_s sigma^n n^((3s-1)/2)` gives
/// `c_s = 1.09^(2s) (2 pi)^((s-1)/2) 2^(3s/2)`,
/// where `(n sigma + 1) <= 2n` absorbed the shifted Stirling argument.
pub fn embedding_series_constant(s: f64) -> f64 {
    1.09f64.powf(2.0 * s)
        * (2.0 * std::f64::consts::PI).powf((s - 1.0) / 2.0)
        * 2.0f64.powf(1.5 * s)
}

/// Embedding constant `C(s, R, tau) = e^tau c_s max(1, R) sum_{n>=0}
/// max(n,1)^((3s-1)/2) y^n` with `y = tau R^(1/s) / s`, evaluated by partial
/// sums with a certified geometric tail bound below `1e-12` of the total.
/// The `max(1, R)` factor absorbs `R^ceil(n sigma) <= max(1,R) R^(n sigma)`.
///
/// Errors with "outside embedding range" when `tau >= s R^(-1/s)` (`y >= 1`).
pub fn embedding_constant(s: f64, r_scale: f64, tau: f64) -> Result<f64> {
    seminorm_domain_checks(s, r_scale)?;
    if !(tau >= 0.0) {
        return Err(GevreyError::bad_param(format!("radius tau must be >= 0, got {tau}")));
    }
    let threshold = s * r_scale.powf(-1.0 / s);
    if tau >= threshold {
        return Err(GevreyError::OutsideEmbeddingRange { tau, threshold });
    }
    let y = tau * r_scale.powf(1.0 / s) / s;
    let p = (3.0 * s - 1.0) / 2.0;
    let mut sum = 1.0; // n = 0 term
    let mut n = 1u64;
    let mut term = y; // max(1,1)^p y^1
    loop {
        sum += term;
        // ratio of successive terms is bounded by y (1 + 1/n)^p, decreasing
        let ratio = y * (1.0 + 1.0 / n as f64).powf(p);
        if ratio < 1.0 {
            let tail = term * ratio / (1.0 - ratio);
            if tail <= 0.5e-12 * sum {
                break;
            }
        }
        n += 1;
        term = y.powi(n as i32) * (n as f64).powf(p);
        if n > 20_000_000 {
            return Err(GevreyError::bad_param(format!(
                "embedding series did not certify convergence at y = {y}"
            )));
        }
    }
    Ok(tau.exp() * embedding_series_constant(s) * r_scale.max(1.0) * sum)
}

/// Two-sided report for the embedding inequality
/// `|u|_{1/s, tau} <= |B|^(1/2) C(s, R, tau) |u|_{s,R}`.
#[derive(Debug, Clone, Copy)]
pub struct EmbeddingReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub constant: f64,
    pub seminorm: f64,
}

/// Derivative orders examined when `verify_embedding` measures the spatial
/// seminorm of its input.
pub const EMBEDDING_ALPHA_MAX: usize = 6;

/// Evaluates both sides of the embedding inequality for a compactly
/// supported grid function with support measure `b_measure`. The spatial
/// seminorm is measured over `|alpha| <= EMBEDDING_ALPHA_MAX`.
pub fn verify_embedding(
    f: &SampledFunction,
    s: f64,
    r_scale: f64,
    tau: f64,
    b_measure: f64,
) -> Result<EmbeddingReport> {
    if !(b_measure > 0.0) {
        return Err(GevreyError::bad_param(format!(
            "support measure must be positive, got {b_measure}"
        )));
    }
    let constant = embedding_constant(s, r_scale, tau)?;
    let seminorm = spatial_gevrey_seminorm(f, s, r_scale, EMBEDDING_ALPHA_MAX)?.value;
    let lhs = fourier_gevrey_norm(f, 1.0 / s, tau)?;
    let rhs = b_measure.sqrt() * constant * seminorm;
    Ok(EmbeddingReport { lhs, rhs, margin: rhs - lhs, constant, seminorm })
}
