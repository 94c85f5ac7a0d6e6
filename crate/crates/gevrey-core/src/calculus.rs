//! Multi-index bookkeeping, central finite-difference stencils and spectral
//! differentiation of grid functions.

use num_complex::Complex64;

use crate::error::{GevreyError, Result};
use crate::grid::{SampledFunction, MAX_DIM};

/// All multi-indices `alpha` in `d` variables with `|alpha| <= max_total`,
/// in lexicographic order.
pub fn multi_indices(dim: usize, max_total: usize) -> Vec<[usize; MAX_DIM]> {
    let mut out = Vec::new();
    let mut cur = [0usize; MAX_DIM];
    fn rec(
        axis: usize,
        dim: usize,
        left: usize,
        cur: &mut [usize; MAX_DIM],
        out: &mut Vec<[usize; MAX_DIM]>,
    ) {
        if axis == dim {
            out.push(*cur);
            return;
        }
        for a in 0..=left {
            cur[axis] = a;
            rec(axis + 1, dim, left - a, cur, out);
        }
        cur[axis] = 0;
    }
    rec(0, dim, max_total, &mut cur, &mut out);
    out.sort();
    out.dedup();
    out
}

pub fn total_order(alpha: &[usize]) -> usize {
    alpha.iter().sum()
}

/// Central finite-difference stencil for the k-th derivative, second-order
/// accurate, on integer offsets. Built by convolving the elementary stencils
/// D1 = (-1/2, 0, 1/2) and D2 = (1, -2, 1).
pub fn central_stencil(k: usize) -> Vec<(i64, f64)> {
    if k == 0 {
        return vec![(0, 1.0)];
    }
    let d1 = vec![(-1i64, -0.5), (1i64, 0.5)];
    let d2 = vec![(-1i64, 1.0), (0i64, -2.0), (1i64, 1.0)];
    let mut acc = if k % 2 == 1 { d1 } else { d2.clone() };
    let mut left = k - if k % 2 == 1 { 1 } else { 2 };
    while left > 0 {
        acc = convolve(&acc, &d2);
        left -= 2;
    }
    acc
}

fn convolve(a: &[(i64, f64)], b: &[(i64, f64)]) -> Vec<(i64, f64)> {
    let mut map = std::collections::BTreeMap::new();
    for &(oa, ca) in a {
        for &(ob, cb) in b {
            *map.entry(oa + ob).or_insert(0.0) += ca * cb;
        }
    }
    map.into_iter().filter(|&(_, c)| c != 0.0).collect()
}

/// Step-size rule for order-k central differences on a domain of size `scale`:
/// `h_k = eps^(1/(k+2)) * scale`, balancing rounding against truncation.
pub fn fd_step(order: usize, scale: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) * scale
}

/// Largest derivative order the finite-difference path accepts before
/// rounding noise dominates.
pub const FD_MAX_ORDER: usize = 8;

/// Mixed partial `d^alpha f(x)` of a scalar field by tensorized central
/// differences with per-axis steps `h`.
pub fn fd_partial(
    f: &dyn Fn(&[f64]) -> f64,
    x: &[f64],
    alpha: &[usize],
    h: f64,
) -> Result<f64> {
    let order = total_order(alpha);
    if order > FD_MAX_ORDER {
        return Err(GevreyError::OrderLimit { order, limit: FD_MAX_ORDER });
    }
    let dim = x.len();
    let stencils: Vec<Vec<(i64, f64)>> = alpha.iter().map(|&k| central_stencil(k)).collect();
    let mut acc = 0.0;
    let mut idx = vec![0usize; dim];
    'outer: loop {
        let mut coeff = 1.0;
        let mut probe = [0.0f64; MAX_DIM];
        probe[..dim].copy_from_slice(x);
        for axis in 0..dim {
            let (offset, c) = stencils[axis][idx[axis]];
            coeff *= c;
            probe[axis] += offset as f64 * h;
        }
        acc += coeff * f(&probe[..dim]);
        for axis in 0..dim {
            idx[axis] += 1;
            if idx[axis] < stencils[axis].len() {
                continue 'outer;
            }
            idx[axis] = 0;
        }
        break;
    }
    Ok(acc / h.powi(order as i32))
}

/// Spectral partial derivative: multiplies the spectrum by `(i xi)^alpha`.
/// Exact for the trigonometric interpolant the samples define.
pub fn spectral_partial(f: &SampledFunction, alpha: &[usize]) -> Result<SampledFunction> {
    let grid = *f.grid();
    if alpha.len() != grid.dim() {
        return Err(GevreyError::bad_param(format!(
            "multi-index has {} components for a {}-d grid",
            alpha.len(),
            grid.dim()
        )));
    }
    let spec = f.spectrum();
    let mut out = vec![Complex64::default(); spec.len()];
    for (flat, c) in spec.iter().enumerate() {
        let xi = grid.frequency_at(flat);
        let mut factor = Complex64::new(1.0, 0.0);
        for (axis, &a) in alpha.iter().enumerate() {
            if a > 0 {
                factor *= Complex64::new(0.0, xi.coords()[axis]).powu(a as u32);
            }
        }
        out[flat] = factor * c;
    }
    SampledFunction::from_spectrum(grid, out)
}

/// Least-squares slope of `ln y` against `ln x`; used by the power-law fits.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if data.len() < 2 {
        return None;
    }
    let n = data.len() as f64;
    let sx: f64 = data.iter().map(|p| p.0).sum();
    let sy: f64 = data.iter().map(|p| p.1).sum();
    let sxx: f64 = data.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = data.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stencils_match_classical_tables() {
        assert_eq!(central_stencil(1), vec![(-1, -0.5), (1, 0.5)]);
        assert_eq!(central_stencil(2), vec![(-1, 1.0), (0, -2.0), (1, 1.0)]);
        let d3 = central_stencil(3);
        assert_eq!(d3, vec![(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)]);
        let d4 = central_stencil(4);
        assert_eq!(d4, vec![(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)]);
    }

    #[test]
    fn fd_matches_polynomial_derivatives() {
        // f(x, y) = x^3 y^2, d^(2,1) f = 6x * 2y
        let f = |x: &[f64]| x[0].powi(3) * x[1].powi(2);
        let got = fd_partial(&f, &[1.2, -0.7], &[2, 1], 1e-3).unwrap();
        assert_relative_eq!(got, 6.0 * 1.2 * 2.0 * -0.7, epsilon = 1e-6);
    }

    #[test]
    fn fd_rejects_high_orders() {
        let f = |x: &[f64]| x[0];
        assert!(matches!(
            fd_partial(&f, &[0.0], &[9], 0.1),
            Err(GevreyError::OrderLimit { .. })
        ));
    }

    #[test]
    fn spectral_derivative_of_single_mode() {
        let g = crate::grid::make_grid(1, 32, 2.0 * std::f64::consts::PI).unwrap();
        let f = SampledFunction::single_mode(g, &[5]);
        let df = spectral_partial(&f, &[1]).unwrap();
        // d/dx e^{i5x} = 5i e^{i5x}
        for (a, b) in df.values().iter().zip(f.values()) {
            let expect = Complex64::new(0.0, 5.0) * b;
            assert_relative_eq!(a.re, expect.re, epsilon = 1e-10);
            assert_relative_eq!(a.im, expect.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn multi_index_enumeration_counts() {
        // d = 2, |alpha| <= 3: C(3+2,2) = 10 indices
        assert_eq!(multi_indices(2, 3).len(), 10);
        assert_eq!(multi_indices(3, 2).len(), 10);
        assert_eq!(multi_indices(1, 4).len(), 5);
    }
}
