//! Symbols `a(x, xi)` with spatial Gevrey regularity: canonical
//! constructors, seminorm estimation and class-membership validation.
//!
//! The class `S^m_{rho,delta} G^s_R` asks for
//! `|d_x^alpha d_xi^beta a| <= C R^{|alpha+beta|} |alpha|!^s |beta|!
//! <xi>^{m - rho|beta| + delta|alpha|}`; the seminorm `|a|_{alpha,beta}` is
//! the sup of the left side divided by everything explicit on the right.
//! A positive `delta` shrinks the spatial Gevrey radius like `<xi>^-delta`,
//! which is exactly the mechanism the canonical family below exercises.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::calculus::{central_stencil, log_log_slope, multi_indices, total_order};
use crate::error::{GevreyError, Result};
use crate::gevrey::SpatialField;
use crate::grid::{multi_fft, Direction, FrequencyPoint, GridSpec, MAX_DIM};
use crate::jet::{factorial, Jet};

/// Class parameters `(m, rho, delta, s, R)`. `delta = 0` is admitted
/// alongside `0 < delta < rho <= 1` because the conjugation results use it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolClassParams {
    pub m: f64,
    pub rho: f64,
    pub delta: f64,
    pub s: f64,
    pub r_scale: f64,
}

impl SymbolClassParams {
    pub fn new(m: f64, rho: f64, delta: f64, s: f64, r_scale: f64) -> Result<Self> {
        if !(0.0 <= delta && delta < rho && rho <= 1.0) {
            return Err(GevreyError::bad_param(format!(
                "need 0 <= delta < rho <= 1, got delta = {delta}, rho = {rho}"
            )));
        }
        if !(s > 1.0) {
            return Err(GevreyError::bad_param(format!("Gevrey index s must exceed 1, got {s}")));
        }
        if !(r_scale > 0.0) {
            return Err(GevreyError::bad_param(format!("scale R must be positive, got {r_scale}")));
        }
        if !m.is_finite() {
            return Err(GevreyError::bad_param(format!("order m must be finite, got {m}")));
        }
        Ok(SymbolClassParams { m, rho, delta, s, r_scale })
    }
}

/// Axis-aligned spatial box; the symbol is constant (here: zero) outside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBox {
    lo: [f64; MAX_DIM],
    hi: [f64; MAX_DIM],
    dim: usize,
}

impl SupportBox {
    pub fn new(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.len() > MAX_DIM {
            return Err(GevreyError::bad_param("support box dimension must be 1..=3"));
        }
        if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
            return Err(GevreyError::bad_param("support box must have positive extent"));
        }
        let mut l = [0.0; MAX_DIM];
        let mut h = [0.0; MAX_DIM];
        l[..lo.len()].copy_from_slice(lo);
        h[..hi.len()].copy_from_slice(hi);
        Ok(SupportBox { lo: l, hi: h, dim: lo.len() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo[..self.dim]
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi[..self.dim]
    }

    pub fn measure(&self) -> f64 {
        (0..self.dim).map(|i| self.hi[i] - self.lo[i]).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (0..self.dim).all(|i| self.lo[i] <= x[i] && x[i] <= self.hi[i])
    }
}

/// Smooth compactly supported cutoff
/// `psi_s(x) = exp(-(1 - |(x - center)/width|^2)^(-1/(s-1)))` inside the
/// ball, zero outside; Gevrey of order `s`. The analytic class `s <= 1` has
/// no compactly supported members and is rejected.
#[derive(Debug, Clone)]
pub struct GevreyBump {
    s: f64,
    center: [f64; MAX_DIM],
    width: f64,
    dim: usize,
}

/// Constructor for [`GevreyBump`].
pub fn gevrey_bump(s: f64, center: &[f64], width: f64) -> Result<GevreyBump> {
    if !(s > 1.0) {
        return Err(GevreyError::bad_param(format!(
            "compactly supported Gevrey bumps need s > 1, got {s}"
        )));
    }
    if !(width > 0.0) {
        return Err(GevreyError::bad_param(format!("width must be positive, got {width}")));
    }
    if center.is_empty() || center.len() > MAX_DIM {
        return Err(GevreyError::bad_param("bump dimension must be 1..=3"));
    }
    let mut c = [0.0; MAX_DIM];
    c[..center.len()].copy_from_slice(center);
    Ok(GevreyBump { s, center: c, width, dim: center.len() })
}

impl GevreyBump {
    fn rho_sq(&self, x: &[f64]) -> f64 {
        (0..self.dim)
            .map(|i| {
                let t = (x[i] - self.center[i]) / self.width;
                t * t
            })
            .sum()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let r2 = self.rho_sq(x);
        if r2 >= 1.0 {
            return 0.0;
        }
        let q = 1.0 / (self.s - 1.0);
        (-(1.0 - r2).powf(-q)).exp()
    }

    /// Exact k-th derivative at a 1-d point, by Taylor-jet propagation
    /// through `exp(-(1 - t^2)^(-q))`.
    pub fn derivative_1d(&self, k: usize, x: f64) -> f64 {
        assert_eq!(self.dim, 1, "derivative_1d needs a 1-d bump");
        let t0 = (x - self.center[0]) / self.width;
        // outside or too close to the edge every derivative underflows to 0
        let u0 = 1.0 - t0 * t0;
        let q = 1.0 / (self.s - 1.0);
        if u0 <= 1e-12 || u0.powf(-q) > 709.0 {
            return 0.0;
        }
        let t = Jet::variable(t0, k);
        let u = Jet::constant(1.0, k).sub(&t.mul(&t));
        let psi = u.powf(-q).scale(-1.0).exp();
        // chain rule for the x -> t rescaling
        psi.derivative(k) / self.width.powi(k as i32)
    }
}

impl SpatialField for GevreyBump {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.value(x)
    }

    fn partial(&self, alpha: &[usize], x: &[f64]) -> Option<f64> {
        if self.dim == 1 {
            Some(self.derivative_1d(alpha[0], x[0]))
        } else {
            None
        }
    }
}

/// Closed-form evaluation rule for off-grid probes of a symbol.
pub trait SymbolEvaluator: Send + Sync {
    fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64;
    /// Closed-form spatial partial, when available.
    fn x_partial(&self, _alpha: &[usize], _x: &[f64], _xi: &[f64]) -> Option<Complex64> {
        None
    }
}

/// Samples `a(x_j, xi_k)` of a symbol on grid x lattice, with class
/// parameters, support box and optional analytic evaluator. Column for a
/// fixed `xi` is contiguous in memory.
#[derive(Clone)]
pub struct SampledSymbol {
    grid: GridSpec,
    values: Arc<Vec<Complex64>>,
    params: SymbolClassParams,
    support: SupportBox,
    evaluator: Option<Arc<dyn SymbolEvaluator>>,
    x_spectrum: OnceLock<Arc<Vec<Complex64>>>,
}

impl std::fmt::Debug for SampledSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SampledSymbol")
            .field("grid", &self.grid)
            .field("params", &self.params)
            .field("support", &self.support)
            .field("has_evaluator", &self.evaluator.is_some())
            .finish()
    }
}

impl SampledSymbol {
    pub fn from_values(
        grid: GridSpec,
        values: Vec<Complex64>,
        params: SymbolClassParams,
        support: SupportBox,
    ) -> Result<Self> {
        let total = grid.total_points();
        if values.len() != total * total {
            return Err(GevreyError::LengthMismatch {
                got: values.len(),
                expected: total * total,
            });
        }
        if support.dim() != grid.dim() {
            return Err(GevreyError::GridMismatch);
        }
        Ok(SampledSymbol {
            grid,
            values: Arc::new(values),
            params,
            support,
            evaluator: None,
            x_spectrum: OnceLock::new(),
        })
    }

    /// Samples an evaluation rule on grid x lattice and keeps the rule for
    /// off-grid probes.
    pub fn from_evaluator(
        grid: GridSpec,
        params: SymbolClassParams,
        support: SupportBox,
        evaluator: Arc<dyn SymbolEvaluator>,
    ) -> Result<Self> {
        let total = grid.total_points();
        let mut values = vec![Complex64::default(); total * total];
        for xi_flat in 0..total {
            let xi = grid.frequency_at(xi_flat);
            for x_flat in 0..total {
                let x = grid.point_at(x_flat);
                values[xi_flat * total + x_flat] =
                    evaluator.eval(&x[..grid.dim()], xi.coords());
            }
        }
        let mut sym = Self::from_values(grid, values, params, support)?;
        sym.evaluator = Some(evaluator);
        Ok(sym)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn params(&self) -> &SymbolClassParams {
        &self.params
    }

    pub fn support(&self) -> &SupportBox {
        &self.support
    }

    pub fn evaluator(&self) -> Option<&Arc<dyn SymbolEvaluator>> {
        self.evaluator.as_ref()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Column `a(., xi)` for a flat lattice index.
    pub fn column(&self, xi_flat: usize) -> &[Complex64] {
        let total = self.grid.total_points();
        &self.values[xi_flat * total..(xi_flat + 1) * total]
    }

    /// Spatial Fourier coefficients `a_hat(mu, xi)`, one column per lattice
    /// `xi`, cached on first use.
    pub fn x_spectrum(&self) -> &[Complex64] {
        self.x_spectrum.get_or_init(|| {
            let total = self.grid.total_points();
            let mut out = vec![Complex64::default(); total * total];
            for xi_flat in 0..total {
                let col = multi_fft(&self.grid, self.column(xi_flat), Direction::Forward);
                out[xi_flat * total..(xi_flat + 1) * total].copy_from_slice(&col);
            }
            Arc::new(out)
        })
    }

    /// Scales the symbol by a constant; drops the evaluator so both copies
    /// follow the sampled-value code paths.
    pub fn scaled(&self, lambda: f64) -> SampledSymbol {
        SampledSymbol {
            grid: self.grid,
            values: Arc::new(self.values.iter().map(|v| v * lambda).collect()),
            params: self.params,
            support: self.support,
            evaluator: None,
            x_spectrum: OnceLock::new(),
        }
    }

    /// Same samples without the analytic evaluation rule.
    pub fn without_evaluator(&self) -> SampledSymbol {
        let mut s = self.clone();
        s.evaluator = None;
        s.x_spectrum = OnceLock::new();
        s
    }

    /// Replaces the sampled values (same grid and metadata).
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<SampledSymbol> {
        let mut s = Self::from_values(self.grid, values, self.params, self.support)?;
        s.evaluator = None;
        Ok(s)
    }
}

struct CanonicalEvaluator {
    unit_bump: GevreyBump,
    center: [f64; MAX_DIM],
    m: f64,
    delta: f64,
    dim: usize,
}

impl CanonicalEvaluator {
    fn scaled_arg(&self, x: &[f64], xi: &[f64]) -> ([f64; MAX_DIM], f64) {
        let bracket = FrequencyPoint::new(xi).bracket();
        let scale = bracket.powf(self.delta);
        let mut y = [0.0; MAX_DIM];
        for i in 0..self.dim {
            y[i] = scale * (x[i] - self.center[i]);
        }
        (y, bracket)
    }
}

impl SymbolEvaluator for CanonicalEvaluator {
    fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        let (y, bracket) = self.scaled_arg(x, xi);
        Complex64::new(bracket.powf(self.m) * self.unit_bump.value(&y[..self.dim]), 0.0)
    }

    fn x_partial(&self, alpha: &[usize], x: &[f64], xi: &[f64]) -> Option<Complex64> {
        if self.dim != 1 {
            return None;
        }
        let (y, bracket) = self.scaled_arg(x, xi);
        let k = alpha[0];
        // d^k/dx^k psi(<xi>^delta (x - c) / r)
        //   = (<xi>^delta)^k psi^(k) evaluated at the scaled argument
        let inner = self.unit_bump.derivative_1d(k, y[0]);
        Some(Complex64::new(
            bracket.powf(self.m) * bracket.powf(self.delta).powi(k as i32) * inner,
            0.0,
        ))
    }
}

/// Canonical member of the class on a grid:
/// `a(x, xi) = <xi>^m psi_s(<xi>^delta (x - c) / radius)` centered at the
/// middle of the period. Its spatial Gevrey radius shrinks like
/// `<xi>^-delta`; for `delta = 0` the symbol is separable. The support box
/// is the `delta = 0` ball's bounding box, which contains every slice.
pub fn canonical_symbol(
    params: SymbolClassParams,
    grid: &GridSpec,
    radius: f64,
) -> Result<SampledSymbol> {
    if !(radius > 0.0) || 2.0 * radius >= grid.period() {
        return Err(GevreyError::SupportExceedsPeriod { radius, period: grid.period() });
    }
    let c = grid.period() / 2.0;
    let dim = grid.dim();
    let center = [c; MAX_DIM];
    let unit_bump = gevrey_bump(params.s, &vec![0.0; dim], radius)?;
    let evaluator = Arc::new(CanonicalEvaluator {
        unit_bump,
        center,
        m: params.m,
        delta: params.delta,
        dim,
    });
    let lo: Vec<f64> = (0..dim).map(|_| c - radius).collect();
    let hi: Vec<f64> = (0..dim).map(|_| c + radius).collect();
    let support = SupportBox::new(&lo, &hi)?;
    SampledSymbol::from_evaluator(*grid, params, support, evaluator)
}

const ALPHA_LIMIT: usize = 8;
const BETA_LIMIT: usize = 4;

/// Per-`xi` sup over grid `x` of the normalized derivative
/// `|d_x^alpha d_xi^beta a| R^{-|alpha+beta|} |alpha|!^{-s} |beta|!^{-1}
/// <xi>^{-m + rho|beta| - delta|alpha|}`. Lattice slots whose `xi`-stencil
/// leaves the lattice hold NaN and are skipped by callers.
fn per_xi_normalized_sup(a: &SampledSymbol, alpha: &[usize], beta: &[usize]) -> Result<Vec<f64>> {
    let grid = *a.grid();
    let dim = grid.dim();
    if alpha.len() != dim || beta.len() != dim {
        return Err(GevreyError::bad_param("multi-index dimension mismatch"));
    }
    let na = total_order(alpha);
    let nb = total_order(beta);
    if na > ALPHA_LIMIT {
        return Err(GevreyError::OrderLimit { order: na, limit: ALPHA_LIMIT });
    }
    if nb > BETA_LIMIT {
        return Err(GevreyError::OrderLimit { order: nb, limit: BETA_LIMIT });
    }
    let p = a.params();
    let total = grid.total_points();
    let norm_const = p.r_scale.powi((na + nb) as i32)
        * factorial(na).powf(p.s)
        * factorial(nb);

    // spatial derivative of one sampled column via the spectral multiplier
    let x_derivative_column = |col_spec: &[Complex64]| -> Vec<Complex64> {
        let mut weighted = col_spec.to_vec();
        for (flat, v) in weighted.iter_mut().enumerate() {
            let mu = grid.frequency_at(flat);
            let mut f = Complex64::new(1.0, 0.0);
            for (axis, &k) in alpha.iter().enumerate() {
                if k > 0 {
                    f *= Complex64::new(0.0, mu.coords()[axis]).powu(k as u32);
                }
            }
            *v *= f;
        }
        multi_fft(&grid, &weighted, Direction::Inverse)
    };

    // sup over x of |column| with the analytic route when the evaluator has
    // closed-form spatial partials
    let analytic_sup = |xi: &FrequencyPoint| -> Option<f64> {
        let ev = a.evaluator()?;
        let mut sup: f64 = 0.0;
        for x_flat in 0..total {
            let x = grid.point_at(x_flat);
            let v = ev.x_partial(alpha, &x[..dim], xi.coords())?;
            sup = sup.max(v.norm());
        }
        Some(sup)
    };

    let mut out = vec![f64::NAN; total];
    if nb == 0 {
        let spec = a.x_spectrum();
        for xi_flat in 0..total {
            let xi = grid.frequency_at(xi_flat);
            let sup = match analytic_sup(&xi) {
                Some(s) => s,
                None => {
                    let col = x_derivative_column(&spec[xi_flat * total..(xi_flat + 1) * total]);
                    col.iter().map(|v| v.norm()).fold(0.0, f64::max)
                }
            };
            let weight = xi.bracket().powf(-p.m + p.rho * nb as f64 - p.delta * na as f64);
            out[xi_flat] = sup * weight / norm_const;
        }
        return Ok(out);
    }

    // beta > 0: finite differences in xi. With an evaluator the probes sit
    // off-lattice with an order-tuned step; otherwise they are lattice
    // columns one frequency step apart and edge slots are skipped.
    let stencils: Vec<Vec<(i64, f64)>> = beta.iter().map(|&k| central_stencil(k)).collect();
    let spec = a.x_spectrum();
    for xi_flat in 0..total {
        let xi = grid.frequency_at(xi_flat);
        let weight = xi.bracket().powf(-p.m + p.rho * nb as f64 - p.delta * na as f64);

        let sup = if let Some(ev) = a.evaluator() {
            let h = f64::EPSILON.powf(1.0 / (nb as f64 + 2.0)) * xi.bracket();
            // accumulate the finite-difference combination column by column
            let mut acc = vec![Complex64::default(); total];
            let mut idx = vec![0usize; dim];
            'outer: loop {
                let mut coeff = 1.0;
                let mut probe = [0.0f64; MAX_DIM];
                probe[..dim].copy_from_slice(xi.coords());
                for axis in 0..dim {
                    let (off, cc) = stencils[axis][idx[axis]];
                    coeff *= cc;
                    probe[axis] += off as f64 * h;
                }
                for x_flat in 0..total {
                    let x = grid.point_at(x_flat);
                    let v = match ev.x_partial(alpha, &x[..dim], &probe[..dim]) {
                        Some(v) => v,
                        None => {
                            // sample the probe column and differentiate it
                            // spectrally; cost is one FFT per stencil node
                            return per_xi_sup_eval_fallback(
                                a, alpha, beta, &stencils, norm_const,
                            );
                        }
                    };
                    acc[x_flat] += coeff * v;
                }
                for axis in 0..dim {
                    idx[axis] += 1;
                    if idx[axis] < stencils[axis].len() {
                        continue 'outer;
                    }
                    idx[axis] = 0;
                }
                break;
            }
            let scale = h.powi(nb as i32).recip();
            acc.iter().map(|v| v.norm() * scale).fold(0.0, f64::max)
        } else {
            // lattice finite differences across stored columns
            let h = grid.freq_step();
            let modes = grid.modes_at(xi_flat);
            let half = grid.points_per_axis() as i64 / 2;
            let mut in_range = true;
            for axis in 0..dim {
                let reach = stencils[axis].iter().map(|&(o, _)| o.abs()).max().unwrap_or(0);
                if modes[axis] - reach < -half || modes[axis] + reach > half - 1 {
                    in_range = false;
                }
            }
            if !in_range {
                continue;
            }
            let mut acc = vec![Complex64::default(); total];
            let mut idx = vec![0usize; dim];
            'outer2: loop {
                let mut coeff = 1.0;
                let mut probe_modes = [0i64; MAX_DIM];
                probe_modes[..dim].copy_from_slice(&modes[..dim]);
                for axis in 0..dim {
                    let (off, cc) = stencils[axis][idx[axis]];
                    coeff *= cc;
                    probe_modes[axis] += off;
                }
                let col_flat = grid.flat_of_modes(&probe_modes[..dim]);
                let col = x_derivative_column(&spec[col_flat * total..(col_flat + 1) * total]);
                for (slot, v) in acc.iter_mut().zip(&col) {
                    *slot += coeff * v;
                }
                for axis in 0..dim {
                    idx[axis] += 1;
                    if idx[axis] < stencils[axis].len() {
                        continue 'outer2;
                    }
                    idx[axis] = 0;
                }
                break;
            }
            let scale = h.powi(nb as i32).recip();
            acc.iter().map(|v| v.norm() * scale).fold(0.0, f64::max)
        };
        out[xi_flat] = sup * weight / norm_const;
    }
    Ok(out)
}

// Fallback when an evaluator exists but lacks closed-form spatial partials:
// handled by sampling probe columns; kept separate to keep the main loop flat.
fn per_xi_sup_eval_fallback(
    a: &SampledSymbol,
    alpha: &[usize],
    beta: &[usize],
    stencils: &[Vec<(i64, f64)>],
    norm_const: f64,
) -> Result<Vec<f64>> {
    let grid = *a.grid();
    let dim = grid.dim();
    let total = grid.total_points();
    let p = a.params();
    let nb = total_order(beta);
    let ev = a.evaluator().ok_or(GevreyError::MissingEvaluator)?.clone();
    let mut out = vec![f64::NAN; total];
    for xi_flat in 0..total {
        let xi = grid.frequency_at(xi_flat);
        let h = f64::EPSILON.powf(1.0 / (nb as f64 + 2.0)) * xi.bracket();
        let mut acc = vec![Complex64::default(); total];
        let mut idx = vec![0usize; dim];
        'outer: loop {
            let mut coeff = 1.0;
            let mut probe = [0.0f64; MAX_DIM];
            probe[..dim].copy_from_slice(xi.coords());
            for axis in 0..dim {
                let (off, cc) = stencils[axis][idx[axis]];
                coeff *= cc;
                probe[axis] += off as f64 * h;
            }
            // sample the probe column, then spatial spectral derivative
            let mut col = vec![Complex64::default(); total];
            for (x_flat, slot) in col.iter_mut().enumerate() {
                let x = grid.point_at(x_flat);
                *slot = ev.eval(&x[..dim], &probe[..dim]);
            }
            let mut col_spec = multi_fft(&grid, &col, Direction::Forward);
            for (flat, v) in col_spec.iter_mut().enumerate() {
                let mu = grid.frequency_at(flat);
                let mut f = Complex64::new(1.0, 0.0);
                for (axis, &k) in alpha.iter().enumerate() {
                    if k > 0 {
                        f *= Complex64::new(0.0, mu.coords()[axis]).powu(k as u32);
                    }
                }
                *v *= f;
            }
            let dcol = multi_fft(&grid, &col_spec, Direction::Inverse);
            for (slot, v) in acc.iter_mut().zip(&dcol) {
                *slot += coeff * v;
            }
            for axis in 0..dim {
                idx[axis] += 1;
                if idx[axis] < stencils[axis].len() {
                    continue 'outer;
                }
                idx[axis] = 0;
            }
            break;
        }
        let na = total_order(alpha);
        let weight = xi.bracket().powf(-p.m + p.rho * nb as f64 - p.delta * na as f64);
        let scale = h.powi(nb as i32).recip();
        let sup = acc.iter().map(|v| v.norm() * scale).fold(0.0, f64::max);
        out[xi_flat] = sup * weight / norm_const;
    }
    Ok(out)
}

/// Seminorm `|a|_{alpha,beta}` over the grid: sup over `(x, xi)` of the
/// normalized mixed derivative. Orders limited to `|alpha| <= 8`,
/// `|beta| <= 4` by the finite-difference noise rule.
pub fn estimate_seminorm(a: &SampledSymbol, alpha: &[usize], beta: &[usize]) -> Result<f64> {
    let per_xi = per_xi_normalized_sup(a, alpha, beta)?;
    Ok(per_xi.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max))
}

/// One row of a seminorm table.
#[derive(Debug, Clone, Copy)]
pub struct SeminormEntry {
    pub alpha: [usize; MAX_DIM],
    pub beta: [usize; MAX_DIM],
    pub value: f64,
    /// Fitted `<xi>`-exponent of the per-shell sup of the normalized
    /// derivative; near zero for genuine class members.
    pub shell_slope: f64,
}

/// Table of `|a|_{alpha,beta}` over all multi-indices up to the given
/// orders, plus a boundedness verdict.
#[derive(Debug, Clone)]
pub struct SeminormTable {
    pub entries: Vec<SeminormEntry>,
    pub alpha_max: usize,
    pub beta_max: usize,
}

impl SeminormTable {
    /// `sup_alpha |a|_{alpha,0}`, the quantity the action bounds need.
    pub fn sup_alpha0(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| total_order(&e.beta) == 0)
            .map(|e| e.value)
            .fold(0.0, f64::max)
    }

    pub fn max_value(&self) -> f64 {
        self.entries.iter().map(|e| e.value).fold(0.0, f64::max)
    }
}

/// Verdict of the membership check. A declared class member must have all
/// normalized entries finite with shell slopes near zero; residual growth in
/// `<xi>` flags an order violation the finite lattice would otherwise hide.
#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub bounded: bool,
    pub worst_shell_slope: f64,
    pub flagged: Vec<([usize; MAX_DIM], [usize; MAX_DIM])>,
}

/// Admissible residual slope: lattice sups of a true member drift only by
/// quadrature effects, far below this.
pub const MEMBERSHIP_SLOPE_CAP: f64 = 0.25;

/// Builds the seminorm table over `|alpha| <= alpha_max`, `|beta| <= beta_max`
/// and judges boundedness by per-shell growth of the normalized sups.
pub fn validate_class_membership(
    a: &SampledSymbol,
    alpha_max: usize,
    beta_max: usize,
) -> Result<(SeminormTable, MembershipVerdict)> {
    let grid = *a.grid();
    let dim = grid.dim();
    let mut entries = Vec::new();
    let mut flagged = Vec::new();
    let mut worst: f64 = 0.0;
    for alpha in multi_indices(dim, alpha_max) {
        for beta in multi_indices(dim, beta_max) {
            let per_xi = per_xi_normalized_sup(a, &alpha[..dim], &beta[..dim])?;
            let value = per_xi.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
            // dyadic shells in <xi>
            let mut shells: std::collections::BTreeMap<i32, f64> = Default::default();
            for (xi_flat, &v) in per_xi.iter().enumerate() {
                if !v.is_finite() {
                    continue;
                }
                let b = grid.frequency_at(xi_flat).bracket();
                let shell = b.log2().floor() as i32;
                let slot = shells.entry(shell).or_insert(0.0);
                *slot = slot.max(v);
            }
            let pts: Vec<(f64, f64)> = shells
                .iter()
                .filter(|&(_, &v)| v > 0.0)
                .map(|(&j, &v)| (2.0f64.powi(j), v))
                .collect();
            let slope = log_log_slope(&pts).unwrap_or(0.0);
            if !value.is_finite() || slope > MEMBERSHIP_SLOPE_CAP {
                flagged.push((alpha, beta));
            }
            worst = worst.max(slope);
            entries.push(SeminormEntry { alpha, beta, value, shell_slope: slope });
        }
    }
    let bounded = flagged.is_empty();
    Ok((
        SeminormTable { entries, alpha_max, beta_max },
        MembershipVerdict { bounded, worst_shell_slope: worst, flagged },
    ))
}

// ---------------------------------------------------------------------------
// Symbol import/export: a self-describing textual array file.
//
//   gevrey-symbol v1
//   dim = 1
//   points_per_axis = 64
//   period = <float>
//   order_m = <float>
//   rho = <float>
//   delta = <float>
//   gevrey_s = <float>
//   r_scale = <float>
//   support_lo = <float>[,<float>...]
//   support_hi = <float>[,<float>...]
//   values
//   <re> <im>          one line per entry, x fastest then xi, 17 significant
//   ...                digits so f64 roundtrips exactly
//   end

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a symbol to the textual schema above. Evaluators are not
/// serialized; loaded symbols carry samples only.
pub fn write_symbol(a: &SampledSymbol) -> String {
    let mut out = String::new();
    let g = a.grid();
    let p = a.params();
    out.push_str("gevrey-symbol v1\n");
    let _ = writeln!(out, "dim = {}", g.dim());
    let _ = writeln!(out, "points_per_axis = {}", g.points_per_axis());
    let _ = writeln!(out, "period = {}", fmt_f64(g.period()));
    let _ = writeln!(out, "order_m = {}", fmt_f64(p.m));
    let _ = writeln!(out, "rho = {}", fmt_f64(p.rho));
    let _ = writeln!(out, "delta = {}", fmt_f64(p.delta));
    let _ = writeln!(out, "gevrey_s = {}", fmt_f64(p.s));
    let _ = writeln!(out, "r_scale = {}", fmt_f64(p.r_scale));
    let join = |v: &[f64]| v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(",");
    let _ = writeln!(out, "support_lo = {}", join(a.support().lo()));
    let _ = writeln!(out, "support_hi = {}", join(a.support().hi()));
    out.push_str("values\n");
    for v in a.values() {
        let _ = writeln!(out, "{} {}", fmt_f64(v.re), fmt_f64(v.im));
    }
    out.push_str("end\n");
    out
}

pub fn save_symbol(a: &SampledSymbol, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, write_symbol(a))
        .map_err(|e| GevreyError::bad_param(format!("cannot write {}: {e}", path.display())))
}

/// Parses the textual schema produced by [`write_symbol`].
pub fn parse_symbol(text: &str) -> Result<SampledSymbol> {
    let bad = |msg: &str| GevreyError::bad_param(format!("symbol file: {msg}"));
    let mut lines = text.lines();
    if lines.next() != Some("gevrey-symbol v1") {
        return Err(bad("missing 'gevrey-symbol v1' header"));
    }
    let mut fields = std::collections::HashMap::new();
    for line in lines.by_ref() {
        if line == "values" {
            break;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| bad("malformed header line"))?;
        fields.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |k: &str| fields.get(k).ok_or_else(|| bad(&format!("missing field {k}")));
    let f = |k: &str| -> Result<f64> {
        get(k)?.parse().map_err(|_| bad(&format!("field {k} is not a float")))
    };
    let dim: usize = get("dim")?.parse().map_err(|_| bad("dim is not an integer"))?;
    let n: usize =
        get("points_per_axis")?.parse().map_err(|_| bad("points_per_axis is not an integer"))?;
    let grid = GridSpec::new(dim, n, f("period")?)?;
    let params =
        SymbolClassParams::new(f("order_m")?, f("rho")?, f("delta")?, f("gevrey_s")?, f("r_scale")?)?;
    let parse_vec = |k: &str| -> Result<Vec<f64>> {
        get(k)?
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| bad(&format!("bad float in {k}"))))
            .collect()
    };
    let support = SupportBox::new(&parse_vec("support_lo")?, &parse_vec("support_hi")?)?;
    let total = grid.total_points();
    let mut values = Vec::with_capacity(total * total);
    for line in lines {
        if line == "end" {
            break;
        }
        let mut it = line.split_whitespace();
        let re: f64 = it
            .next()
            .ok_or_else(|| bad("short value line"))?
            .parse()
            .map_err(|_| bad("bad value"))?;
        let im: f64 = it
            .next()
            .ok_or_else(|| bad("short value line"))?
            .parse()
            .map_err(|_| bad("bad value"))?;
        values.push(Complex64::new(re, im));
    }
    SampledSymbol::from_values(grid, values, params, support)
}

pub fn load_symbol(path: &std::path::Path) -> Result<SampledSymbol> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GevreyError::bad_param(format!("cannot read {}: {e}", path.display())))?;
    parse_symbol(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use approx::assert_relative_eq;

    #[test]
    fn bump_point_values() {
        let b = gevrey_bump(2.0, &[0.0], 1.0).unwrap();
        assert_relative_eq!(b.value(&[0.0]), (-1.0f64).exp(), epsilon = 1e-15);
        assert_eq!(b.value(&[1.0]), 0.0);
        assert_eq!(b.value(&[-3.0]), 0.0);
        // s=2, width 1, x=0.6: exp(-1/0.64)
        assert_relative_eq!(b.value(&[0.6]), (-1.0f64 / 0.64).exp(), epsilon = 1e-15);
        assert!((b.value(&[0.6]) - 0.209611).abs() < 1e-6);
        assert!(gevrey_bump(1.0, &[0.0], 1.0).is_err());
        assert!(gevrey_bump(2.0, &[0.0], 0.0).is_err());
    }

    #[test]
    fn bump_jet_derivatives_match_symbolic_recursion() {
        // independent oracle for s = 2: with u = (1 - x^2)^(-1),
        // psi^(k) = P_k(x, u) psi where P_{k+1} = dP_k/dx + 2 x u^2 dP_k/du
        //           - 2 x u^2 P_k, P_0 = 1. Polynomials kept exactly.
        use std::collections::BTreeMap;
        type Poly = BTreeMap<(u32, u32), f64>; // (x power, u power) -> coeff
        fn step(p: &Poly) -> Poly {
            let mut out: Poly = BTreeMap::new();
            let mut add = |k: (u32, u32), c: f64| {
                let e = out.entry(k).or_insert(0.0);
                *e += c;
            };
            for (&(i, j), &c) in p {
                if i > 0 {
                    add((i - 1, j), c * i as f64); // d/dx
                }
                if j > 0 {
                    add((i + 1, j + 1), 2.0 * c * j as f64); // u' = 2 x u^2
                }
                add((i + 1, j + 2), -2.0 * c); // from psi' = -2 x u^2 psi
            }
            out
        }
        fn eval(p: &Poly, x: f64, u: f64) -> f64 {
            p.iter().map(|(&(i, j), &c)| c * x.powi(i as i32) * u.powi(j as i32)).sum()
        }
        let b = gevrey_bump(2.0, &[0.0], 1.0).unwrap();
        for &x in &[0.0, 0.3, -0.55, 0.8] {
            let u: f64 = 1.0 / (1.0 - x * x);
            let psi = (-u).exp();
            let mut p: Poly = BTreeMap::new();
            p.insert((0, 0), 1.0);
            for k in 0..=4 {
                let expect = eval(&p, x, u) * psi;
                let got = b.derivative_1d(k, x);
                assert_relative_eq!(got, expect, epsilon = 1e-10, max_relative = 1e-10);
                p = step(&p);
            }
        }
    }

    #[test]
    fn bump_derivatives_vanish_outside_support() {
        let b = gevrey_bump(1.5, &[0.0], 1.0).unwrap();
        for k in 0..=6 {
            assert_eq!(b.derivative_1d(k, 1.0), 0.0);
            assert_eq!(b.derivative_1d(k, 1.2), 0.0);
            assert_eq!(b.derivative_1d(k, -0.999_999_999_9), 0.0);
        }
    }

    #[test]
    fn canonical_symbol_shapes() {
        let g = make_grid(1, 32, 2.0 * std::f64::consts::PI).unwrap();
        let params = SymbolClassParams::new(0.0, 1.0, 0.0, 2.0, 1.0).unwrap();
        let a = canonical_symbol(params, &g, g.period() / 4.0).unwrap();
        // delta = 0, m = 0: xi-independent columns
        let total = g.total_points();
        for xi_flat in 1..total {
            for (u, v) in a.column(0).iter().zip(a.column(xi_flat)) {
                assert_relative_eq!(u.re, v.re, epsilon = 1e-15);
            }
        }
        // center value is e^{-1} at x = L/2 (a grid point)
        let center_flat = total / 2;
        assert_relative_eq!(a.column(0)[center_flat].re, (-1.0f64).exp(), epsilon = 1e-14);
        // zero outside the support box, exactly
        for xi_flat in 0..total {
            for (x_flat, v) in a.column(xi_flat).iter().enumerate() {
                let x = g.point_at(x_flat);
                if !a.support().contains(&x[..1]) {
                    assert_eq!(v.norm(), 0.0);
                }
            }
        }
        // support must fit in the period
        assert!(canonical_symbol(params, &g, g.period()).is_err());
    }

    #[test]
    fn canonical_center_value_is_xi_independent_for_positive_delta() {
        let g = make_grid(1, 64, 2.0 * std::f64::consts::PI).unwrap();
        let params = SymbolClassParams::new(0.0, 0.75, 0.25, 2.0, 1.0).unwrap();
        let a = canonical_symbol(params, &g, 1.0).unwrap();
        let total = g.total_points();
        let center_flat = total / 2;
        for xi_flat in 0..total {
            assert_relative_eq!(a.column(xi_flat)[center_flat].re, (-1.0f64).exp(), epsilon = 1e-13);
        }
    }

    #[test]
    fn seminorm_trivial_cases() {
        let g = make_grid(1, 32, 2.0 * std::f64::consts::PI).unwrap();
        let params = SymbolClassParams::new(0.0, 1.0, 0.0, 2.0, 1.0).unwrap();
        let a = canonical_symbol(params, &g, g.period() / 4.0).unwrap();
        // alpha = beta = 0 on the m = 0 canonical symbol: sup |a| = e^{-1}
        let v = estimate_seminorm(&a, &[0], &[0]).unwrap();
        assert_relative_eq!(v, (-1.0f64).exp(), epsilon = 1e-12);
        // x-independent symbol: first x-derivative vanishes
        let m_params = SymbolClassParams::new(1.5, 1.0, 0.0, 2.0, 1.0).unwrap();
        let total = g.total_points();
        let mut values = vec![Complex64::default(); total * total];
        for xi_flat in 0..total {
            let b = g.frequency_at(xi_flat).bracket().powf(1.5);
            for x_flat in 0..total {
                values[xi_flat * total + x_flat] = Complex64::new(b, 0.0);
            }
        }
        let support = SupportBox::new(&[0.0], &[1.0]).unwrap();
        let mult = SampledSymbol::from_values(g, values, m_params, support).unwrap();
        assert_relative_eq!(estimate_seminorm(&mult, &[1], &[0]).unwrap(), 0.0, epsilon = 1e-9);
        // order limits enforced
        assert!(estimate_seminorm(&a, &[9], &[0]).is_err());
        assert!(estimate_seminorm(&a, &[0], &[5]).is_err());
    }

    #[test]
    fn seminorm_scales_linearly() {
        let g = make_grid(1, 32, 2.0 * std::f64::consts::PI).unwrap();
        let params = SymbolClassParams::new(0.0, 1.0, 0.0, 2.0, 1.0).unwrap();
        let a = canonical_symbol(params, &g, g.period() / 4.0).unwrap().without_evaluator();
        let b = a.scaled(3.5);
        for (alpha, beta) in [([0], [0]), ([1], [0]), ([2], [1])] {
            let va = estimate_seminorm(&a, &alpha, &beta).unwrap();
            let vb = estimate_seminorm(&b, &alpha, &beta).unwrap();
            assert_relative_eq!(vb, 3.5 * va, epsilon = 1e-12 * vb.max(1e-300));
        }
    }

    #[test]
    fn membership_flags_wrong_order() {
        let g = make_grid(1, 64, 2.0 * std::f64::consts::PI).unwrap();
        let params = SymbolClassParams::new(0.0, 1.0, 0.0, 2.0, 2.0).unwrap();
        let a = canonical_symbol(params, &g, g.period() / 4.0).unwrap();
        let (table, verdict) = validate_class_membership(&a, 2, 1).unwrap();
        assert!(verdict.bounded, "canonical symbol must pass, slopes {:?}", verdict.worst_shell_slope);
        assert!(table.sup_alpha0() > 0.0);
        // negative control: multiply by <xi> without declaring it
        let total = g.total_points();
        let mut values = a.values().to_vec();
        for xi_flat in 0..total {
            let b = g.frequency_at(xi_flat).bracket();
            for v in &mut values[xi_flat * total..(xi_flat + 1) * total] {
                *v *= b;
            }
        }
        let cheat = a.with_values(values).unwrap();
        let (_, verdict2) = validate_class_membership(&cheat, 1, 0).unwrap();
        assert!(!verdict2.bounded, "undeclared <xi> growth must be flagged");
        // zero symbol: all entries zero, bounded
        let zero = a.with_values(vec![Complex64::default(); total * total]).unwrap();
        let (t3, v3) = validate_class_membership(&zero, 1, 1).unwrap();
        assert!(v3.bounded);
        assert_eq!(t3.max_value(), 0.0);
    }

    #[test]
    fn symbol_io_roundtrip_is_bit_exact() {
        let g = make_grid(1, 8, 2.0 * std::f64::consts::PI).unwrap();
        let params = SymbolClassParams::new(0.5, 0.9, 0.1, 1.7, 0.8).unwrap();
        let a = canonical_symbol(params, &g, 1.0).unwrap();
        let text = write_symbol(&a);
        let back = parse_symbol(&text).unwrap();
        assert_eq!(back.grid(), a.grid());
        assert_eq!(back.params(), a.params());
        assert_eq!(back.support(), a.support());
        for (u, v) in a.values().iter().zip(back.values()) {
            assert_eq!(u.re.to_bits(), v.re.to_bits());
            assert_eq!(u.im.to_bits(), v.im.to_bits());
        }
        assert!(parse_symbol("not a symbol").is_err());
    }
}
