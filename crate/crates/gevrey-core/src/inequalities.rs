//! Executable forms of the sharp bracket inequalities with their explicit
//! constants, plus the comparison against the competing constants from the
//! Landau-damping literature.
//!
//! Throughout, `phi(t) = t^sigma - (t-1)^sigma` is strictly decreasing on
//! `t > 1` for `sigma in (0,1)`, with `phi(1) = 1`; every constant below is
//! built from `phi`.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{GevreyError, Result};
use crate::grid::FrequencyPoint;

/// Relative violation tolerance protecting genuinely tight samples against
/// floating-point rounding.
pub const INEQ_REL_TOL: f64 = 1e-12;

/// A frequency pair with the parameters of one inequality check.
#[derive(Debug, Clone, Copy)]
pub struct IneqSample {
    pub xi: FrequencyPoint,
    pub eta: FrequencyPoint,
    pub sigma: f64,
    pub k_ratio: f64,
}

impl IneqSample {
    pub fn new(xi: FrequencyPoint, eta: FrequencyPoint, sigma: f64, k_ratio: f64) -> Result<Self> {
        check_sigma_k(k_ratio, sigma)?;
        if xi.dim() != eta.dim() {
            return Err(GevreyError::bad_param("xi and eta have different dimensions"));
        }
        Ok(IneqSample { xi, eta, sigma, k_ratio })
    }
}

/// Evaluated inequality: `holds` iff `defect = rhs - lhs >= -tol * max(1, rhs)`.
#[derive(Debug, Clone, Copy)]
pub struct IneqReport {
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    pub holds: bool,
    pub defect: f64,
}

impl IneqReport {
    fn from_sides(lhs: f64, rhs: f64, constant_used: f64) -> Self {
        let defect = rhs - lhs;
        IneqReport {
            lhs,
            rhs,
            constant_used,
            holds: defect >= -INEQ_REL_TOL * rhs.max(1.0),
            defect,
        }
    }
}

fn check_sigma_k(k_ratio: f64, sigma: f64) -> Result<()> {
    if !(k_ratio > 1.0) {
        return Err(GevreyError::bad_param(format!("K must exceed 1, got {k_ratio}")));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(GevreyError::bad_param(format!(
            "sigma must lie strictly in (0,1), got {sigma}"
        )));
    }
    Ok(())
}

fn phi(t: f64, sigma: f64) -> f64 {
    t.powf(sigma) - (t - 1.0).powf(sigma)
}

/// Constant `K^sigma - (K-1)^sigma` of the output-dominant triangle
/// inequality; lies in (0,1) for every `K > 1`, `sigma in (0,1)`.
pub fn tri1_constant(k_ratio: f64, sigma: f64) -> Result<f64> {
    check_sigma_k(k_ratio, sigma)?;
    Ok(phi(k_ratio, sigma))
}

/// Checks `| <xi>^sigma - <eta>^sigma | <= (K^sigma - (K-1)^sigma)
/// <xi - eta>^sigma` on the region `|xi - eta| <= |eta| / K`.
pub fn check_tri1(sample: &IneqSample) -> Result<IneqReport> {
    let diff = sample.xi.sub(&sample.eta);
    // tiny relative slack so constructed boundary samples survive rounding
    if diff.norm() > sample.eta.norm() / sample.k_ratio * (1.0 + 1e-9) {
        return Err(GevreyError::bad_param(
            "sample not in region: |xi - eta| <= |eta|/K fails",
        ));
    }
    let c = tri1_constant(sample.k_ratio, sample.sigma)?;
    let lhs =
        (sample.xi.bracket().powf(sample.sigma) - sample.eta.bracket().powf(sample.sigma)).abs();
    let rhs = c * diff.bracket().powf(sample.sigma);
    Ok(IneqReport::from_sides(lhs, rhs, c))
}

/// Constructive constant `c'` of the comparable-frequency inequality
/// `<xi>^sigma <= <eta>^sigma + c' <xi - eta>^sigma` on
/// `|xi - eta|/K <= |eta| <= K |xi - eta|`.
///
/// Split samples by `r = |xi| / |xi - eta|` at `c = sqrt(c~)`, where
/// `c~ = (1 + K^-sigma)^(1/sigma)`:
/// * `r <= c`: from `<eta>^sigma >= K^-sigma <xi-eta>^sigma` one gets
///   `<xi>^sigma <= c^sigma (1 + K^-sigma)^-1 (<eta>^sigma + <xi-eta>^sigma)`,
///   coefficient `c^sigma / (1 + K^-sigma) = (1 + K^-sigma)^(-1/2) < 1`;
/// * `r >= c`: the output-dominant inequality at ratio `r` gives coefficient
///   `phi(r) <= phi(c) < 1` since `phi` is decreasing.
///
/// Both branches are < 1, so `c' = max(phi(c), c^sigma / (1 + K^-sigma))`.
pub fn tri2_constant(k_ratio: f64, sigma: f64) -> Result<f64> {
    check_sigma_k(k_ratio, sigma)?;
    let c_tilde = (1.0 + k_ratio.powf(-sigma)).powf(1.0 / sigma);
    let c = c_tilde.sqrt();
    let branch_small_r = c.powf(sigma) / (1.0 + k_ratio.powf(-sigma));
    let branch_large_r = phi(c, sigma);
    Ok(branch_small_r.max(branch_large_r))
}

/// Checks `<xi>^sigma <= <eta>^sigma + c' <xi - eta>^sigma` on the
/// comparable region `|xi - eta|/K <= |eta| <= K |xi - eta|`.
pub fn check_tri2(sample: &IneqSample) -> Result<IneqReport> {
    let diff = sample.xi.sub(&sample.eta);
    let w = diff.norm();
    let e = sample.eta.norm();
    let slack = 1.0 + 1e-9;
    if !(w / sample.k_ratio <= e * slack && e <= sample.k_ratio * w * slack) {
        return Err(GevreyError::bad_param(
            "sample not in region: |xi-eta|/K <= |eta| <= K|xi-eta| fails",
        ));
    }
    let c = tri2_constant(sample.k_ratio, sample.sigma)?;
    let lhs = sample.xi.bracket().powf(sample.sigma);
    let rhs = sample.eta.bracket().powf(sample.sigma) + c * diff.bracket().powf(sample.sigma);
    Ok(IneqReport::from_sides(lhs, rhs, c))
}

/// Optimal constant of `<xi>^m <= C(m, sigma) tau^(-m/sigma)
/// e^(tau <xi>^sigma)`: maximizing `x^m e^(-tau x^sigma)` over `x > 0` gives
/// `C = (m / (sigma e))^(m/sigma)` for `m > 0` and `C = 1` at `m = 0`.
pub fn poly_gevrey_constant(m: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(GevreyError::bad_param(format!(
            "sigma must lie strictly in (0,1), got {sigma}"
        )));
    }
    if !(m >= 0.0) {
        return Err(GevreyError::bad_param(format!("order m must be >= 0, got {m}")));
    }
    if m == 0.0 {
        return Ok(1.0);
    }
    Ok((m / (sigma * std::f64::consts::E)).powf(m / sigma))
}

/// Checks the polynomial-versus-exponential trade
/// `<xi>^m <= C(m, sigma) tau^(-m/sigma) e^(tau <xi>^sigma)`.
pub fn check_poly_gevrey(
    xi: &FrequencyPoint,
    sigma: f64,
    tau: f64,
    m: f64,
) -> Result<IneqReport> {
    if !(tau > 0.0) {
        return Err(GevreyError::bad_param(format!("tau must be positive, got {tau}")));
    }
    let c = poly_gevrey_constant(m, sigma)?;
    let b = xi.bracket();
    let exponent = tau * b.powf(sigma);
    if exponent > crate::gevrey::OVERFLOW_EXPONENT {
        return Err(GevreyError::WeightOverflow {
            exponent,
            tau_max: crate::gevrey::OVERFLOW_EXPONENT / b.powf(sigma),
        });
    }
    let lhs = b.powf(m);
    let rhs = c * tau.powf(-m / sigma) * exponent.exp();
    Ok(IneqReport::from_sides(lhs, rhs, c))
}

/// The two candidate constants of the output-dominant inequality: ours
/// (`K^sigma - (K-1)^sigma`, always < 1) and the competing
/// `sigma / (K-1)^(1-sigma)`, which may exceed 1.
#[derive(Debug, Clone, Copy)]
pub struct RemarkComparison {
    pub our_constant: f64,
    pub competing_constant: f64,
    pub ours_smaller: bool,
}

pub fn compare_remark_constants(k_ratio: f64, sigma: f64) -> Result<RemarkComparison> {
    check_sigma_k(k_ratio, sigma)?;
    let our_constant = phi(k_ratio, sigma);
    let competing_constant = sigma / (k_ratio - 1.0).powf(1.0 - sigma);
    Ok(RemarkComparison {
        our_constant,
        competing_constant,
        ours_smaller: our_constant < competing_constant,
    })
}

/// Witness that the output-dominant inequality fails in the analytic case
/// `sigma = 1` for any constant `c < 1`: searches aligned pairs
/// `eta = K M`, `xi = (K+1) M` with growing `M` until
/// `<xi> - <eta> > c <xi - eta>`. Returns the witnessing pair.
pub fn tri1_sigma1_counterexample(
    c: f64,
    k_ratio: f64,
) -> Result<Option<(FrequencyPoint, FrequencyPoint, f64)>> {
    if !(k_ratio > 1.0) {
        return Err(GevreyError::bad_param(format!("K must exceed 1, got {k_ratio}")));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(GevreyError::bad_param(format!("witness needs c in (0,1), got {c}")));
    }
    let mut m = 1.0f64;
    for _ in 0..256 {
        let eta = FrequencyPoint::new(&[k_ratio * m]);
        let xi = FrequencyPoint::new(&[(k_ratio + 1.0) * m]);
        // in-region: |xi - eta| = M <= |eta| / K
        let lhs = xi.bracket() - eta.bracket();
        let rhs = c * xi.sub(&eta).bracket();
        if lhs > rhs {
            return Ok(Some((xi, eta, rhs - lhs)));
        }
        m *= 2.0;
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Randomized in-region samplers used by the sweeps.

fn random_direction(rng: &mut impl Rng, dim: usize) -> FrequencyPoint {
    loop {
        let mut c = [0.0f64; 3];
        let mut sq = 0.0;
        for slot in c.iter_mut().take(dim) {
            let g: f64 = rng.sample(rand_distr::StandardNormal);
            *slot = g;
            sq += g * g;
        }
        if sq > 1e-12 {
            let inv = sq.sqrt().recip();
            for slot in c.iter_mut().take(dim) {
                *slot *= inv;
            }
            return FrequencyPoint::new(&c[..dim]);
        }
    }
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Magnitude range of the randomized sweeps.
pub const SWEEP_MAG_RANGE: (f64, f64) = (1e-2, 1e6);

/// Draws `(xi, eta)` with `|xi - eta| <= |eta| / K`.
pub fn sample_tri1_region(
    rng: &mut impl Rng,
    dim: usize,
    sigma: f64,
    k_ratio: f64,
) -> IneqSample {
    let eta_mag = log_uniform(rng, SWEEP_MAG_RANGE.0, SWEEP_MAG_RANGE.1);
    let eta = random_direction(rng, dim).scale(eta_mag);
    let diff_mag = rng.random_range(0.0..=eta_mag / k_ratio);
    let diff = random_direction(rng, dim).scale(diff_mag);
    let xi = eta.add(&diff);
    IneqSample { xi, eta, sigma, k_ratio }
}

/// Draws `(xi, eta)` with `|xi - eta| / K <= |eta| <= K |xi - eta|`; the
/// ratio `|eta| / |xi - eta|` is log-uniform over `[1/K, K]` so boundary
/// neighborhoods are well represented.
pub fn sample_tri2_region(
    rng: &mut impl Rng,
    dim: usize,
    sigma: f64,
    k_ratio: f64,
) -> IneqSample {
    let diff_mag = log_uniform(rng, SWEEP_MAG_RANGE.0, SWEEP_MAG_RANGE.1);
    let diff = random_direction(rng, dim).scale(diff_mag);
    let t = log_uniform(rng, 1.0 / k_ratio, k_ratio);
    let eta = random_direction(rng, dim).scale(t * diff_mag);
    let xi = eta.add(&diff);
    IneqSample { xi, eta, sigma, k_ratio }
}

/// Draws `xi` for the polynomial trade check, capped so the exponential
/// weight cannot overflow for the given `tau` and `sigma`.
pub fn sample_poly_frequency(
    rng: &mut impl Rng,
    dim: usize,
    sigma: f64,
    tau: f64,
) -> FrequencyPoint {
    let cap = (0.9 * crate::gevrey::OVERFLOW_EXPONENT / tau).powf(1.0 / sigma);
    let mag = log_uniform(rng, SWEEP_MAG_RANGE.0, cap.min(SWEEP_MAG_RANGE.1));
    random_direction(rng, dim).scale(mag)
}

/// Complex-amplitude helper shared by test corpora: a standard complex
/// gaussian.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(rand_distr::StandardNormal);
    let im: f64 = rng.sample(rand_distr::StandardNormal);
    Complex64::new(re, im) / 2.0f64.sqrt()
}
