//! Periodic grids, their dual frequency lattices, the Japanese bracket and
//! the discrete Fourier transform contract used by every other module.
//!
//! Conventions, fixed once for the whole crate:
//! * spatial grid: `x_j = j * L / N` per axis, `j = 0..N`;
//! * frequency lattice: `(2*pi/L) * k` with integer modes `k in -N/2..N/2`;
//! * forward transform carries the `1/N^d` factor, so the constant function
//!   has spectrum value 1 at `xi = 0` and `u(x) = sum_k u_hat(k) e^(i xi_k.x)`.
//!
//! With these choices Plancherel reads
//! `sum_j |u_j|^2 (L/N)^d = L^d sum_k |u_hat_k|^2`, and a weighted spectral
//! norm `|w(xi) u_hat|` is discretized as `sqrt(L^d sum_k w(xi_k)^2 |u_hat_k|^2)`.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{GevreyError, Result};

/// Maximum spatial dimension supported by the lattice machinery.
pub const MAX_DIM: usize = 3;

/// A point on the frequency side, stored as physical frequency
/// (radians per length). Works for any `d <= 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    coords: [f64; MAX_DIM],
    dim: usize,
}

impl FrequencyPoint {
    pub fn new(coords: &[f64]) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&coords.len()),
            "frequency point dimension must be 1..=3"
        );
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        FrequencyPoint { coords: c, dim: coords.len() }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(&[0.0; MAX_DIM][..dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords().iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Japanese bracket `<xi> = (1 + |xi|^2)^(1/2)`.
    pub fn bracket(&self) -> f64 {
        (1.0 + self.norm_sq()).sqrt()
    }

    pub fn sub(&self, other: &FrequencyPoint) -> FrequencyPoint {
        assert_eq!(self.dim, other.dim);
        let mut c = self.coords;
        for i in 0..self.dim {
            c[i] -= other.coords[i];
        }
        FrequencyPoint { coords: c, dim: self.dim }
    }

    pub fn add(&self, other: &FrequencyPoint) -> FrequencyPoint {
        assert_eq!(self.dim, other.dim);
        let mut c = self.coords;
        for i in 0..self.dim {
            c[i] += other.coords[i];
        }
        FrequencyPoint { coords: c, dim: self.dim }
    }

    pub fn scale(&self, t: f64) -> FrequencyPoint {
        let mut c = self.coords;
        for x in &mut c[..self.dim] {
            *x *= t;
        }
        FrequencyPoint { coords: c, dim: self.dim }
    }
}

/// Japanese bracket `<xi> = (1 + |xi|^2)^(1/2) >= max(1, |xi|)`.
pub fn bracket(xi: &FrequencyPoint) -> f64 {
    xi.bracket()
}

/// A periodic grid of `N^d` points with period `L` per axis, together with
/// its dual lattice `(2*pi/L) * {-N/2, .., N/2 - 1}^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    n: usize,
    len: f64,
}

/// Validated constructor for [`GridSpec`]; rejects non-power-of-two point
/// counts, dimensions outside 1..=3 and non-positive periods.
pub fn make_grid(dim: usize, n: usize, len: f64) -> Result<GridSpec> {
    GridSpec::new(dim, n, len)
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, len: f64) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(GevreyError::BadDimension(dim));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(GevreyError::BadPointCount(n));
        }
        if !(len > 0.0) || !len.is_finite() {
            return Err(GevreyError::BadPeriod(len));
        }
        Ok(GridSpec { dim, n, len })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.len
    }

    /// Grid spacing `L / N`.
    pub fn spacing(&self) -> f64 {
        self.len / self.n as f64
    }

    /// Dual lattice spacing `2*pi / L`.
    pub fn freq_step(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.len
    }

    /// Total point count `N^d`.
    pub fn total_points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Integer mode of a per-axis storage index (0..N), in -N/2..N/2.
    pub fn axis_mode(&self, idx: usize) -> i64 {
        debug_assert!(idx < self.n);
        if idx < self.n / 2 {
            idx as i64
        } else {
            idx as i64 - self.n as i64
        }
    }

    /// Storage index of an integer mode, reduced cyclically into the lattice.
    pub fn mode_to_axis_index(&self, mode: i64) -> usize {
        let n = self.n as i64;
        (mode.rem_euclid(n)) as usize
    }

    /// Decomposes a flat storage index into per-axis indices (row major,
    /// last axis fastest).
    pub fn split_index(&self, flat: usize) -> [usize; MAX_DIM] {
        debug_assert!(flat < self.total_points());
        let mut out = [0usize; MAX_DIM];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = rest % self.n;
            rest /= self.n;
        }
        out
    }

    /// Flat storage index of per-axis indices.
    pub fn flat_index(&self, per_axis: &[usize]) -> usize {
        debug_assert_eq!(per_axis.len(), self.dim);
        let mut flat = 0;
        for axis in 0..self.dim {
            debug_assert!(per_axis[axis] < self.n);
            flat = flat * self.n + per_axis[axis];
        }
        flat
    }

    /// Integer modes of a flat spectral index.
    pub fn modes_at(&self, flat: usize) -> [i64; MAX_DIM] {
        let idx = self.split_index(flat);
        let mut m = [0i64; MAX_DIM];
        for axis in 0..self.dim {
            m[axis] = self.axis_mode(idx[axis]);
        }
        m
    }

    /// Physical frequency of a flat spectral index.
    pub fn frequency_at(&self, flat: usize) -> FrequencyPoint {
        let modes = self.modes_at(flat);
        let step = self.freq_step();
        let mut c = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            c[axis] = step * modes[axis] as f64;
        }
        FrequencyPoint { coords: c, dim: self.dim }
    }

    /// Spatial coordinates of a flat grid index.
    pub fn point_at(&self, flat: usize) -> [f64; MAX_DIM] {
        let idx = self.split_index(flat);
        let h = self.spacing();
        let mut x = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            x[axis] = h * idx[axis] as f64;
        }
        x
    }

    /// Flat spectral index of a mode vector, reduced cyclically.
    pub fn flat_of_modes(&self, modes: &[i64]) -> usize {
        debug_assert_eq!(modes.len(), self.dim);
        let mut per_axis = [0usize; MAX_DIM];
        for axis in 0..self.dim {
            per_axis[axis] = self.mode_to_axis_index(modes[axis]);
        }
        self.flat_index(&per_axis[..self.dim])
    }

    /// Largest bracket on the lattice, attained at the corner mode -N/2
    /// on every axis.
    pub fn max_bracket(&self) -> f64 {
        let corner = self.freq_step() * (self.n as f64 / 2.0);
        (1.0 + self.dim as f64 * corner * corner).sqrt()
    }

    /// Quadrature weight of a single grid point, `(L/N)^d`.
    pub fn point_weight(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Quadrature weight of a single lattice coefficient, `L^d`.
    pub fn mode_weight(&self) -> f64 {
        self.len.powi(self.dim as i32)
    }
}

/// Complex samples of a function on a [`GridSpec`], with lazily cached
/// spectrum. Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: GridSpec,
    values: Arc<Vec<Complex64>>,
    spectrum: OnceLock<Arc<Vec<Complex64>>>,
}

impl SampledFunction {
    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.total_points() {
            return Err(GevreyError::LengthMismatch {
                got: values.len(),
                expected: grid.total_points(),
            });
        }
        Ok(SampledFunction { grid, values: Arc::new(values), spectrum: OnceLock::new() })
    }

    /// Builds the function from lattice coefficients; the spectrum cache is
    /// seeded so the roundtrip is exact by construction.
    pub fn from_spectrum(grid: GridSpec, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.total_points() {
            return Err(GevreyError::LengthMismatch {
                got: spectrum.len(),
                expected: grid.total_points(),
            });
        }
        let values = multi_fft(&grid, &spectrum, Direction::Inverse);
        let f = SampledFunction { grid, values: Arc::new(values), spectrum: OnceLock::new() };
        let _ = f.spectrum.set(Arc::new(spectrum));
        Ok(f)
    }

    /// Samples a scalar field at the grid points.
    pub fn sample(grid: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = (0..grid.total_points())
            .map(|j| {
                let x = grid.point_at(j);
                f(&x[..grid.dim()])
            })
            .collect();
        SampledFunction { grid, values: Arc::new(values), spectrum: OnceLock::new() }
    }

    /// The pure mode `e^(i xi_k . x)` for an integer mode vector.
    pub fn single_mode(grid: GridSpec, modes: &[i64]) -> Self {
        let step = grid.freq_step();
        let m: Vec<f64> = modes.iter().map(|&k| step * k as f64).collect();
        Self::sample(grid, |x| {
            let phase: f64 = x.iter().zip(&m).map(|(xi, ki)| xi * ki).sum();
            Complex64::new(0.0, phase).exp()
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Lattice coefficients, computed once and cached.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| Arc::new(multi_fft(&self.grid, &self.values, Direction::Forward)))
    }

    /// Physical `L^2` norm by grid quadrature.
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.point_weight();
        (w * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Pointwise product on the grid.
    pub fn pointwise_mul(&self, other: &SampledFunction) -> Result<SampledFunction> {
        if self.grid != other.grid {
            return Err(GevreyError::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b)
            .collect();
        SampledFunction::from_values(self.grid, values)
    }

    pub fn linear_combination(
        a: Complex64,
        f: &SampledFunction,
        b: Complex64,
        g: &SampledFunction,
    ) -> Result<SampledFunction> {
        if f.grid != g.grid {
            return Err(GevreyError::GridMismatch);
        }
        let values = f
            .values
            .iter()
            .zip(g.values.iter())
            .map(|(x, y)| a * x + b * y)
            .collect();
        SampledFunction::from_values(f.grid, values)
    }

    /// Relative L2 distance `|f - g| / max(|f|, tiny)`.
    pub fn relative_l2_distance(&self, other: &SampledFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(GevreyError::GridMismatch);
        }
        let mut diff = 0.0;
        let mut base = 0.0;
        for (a, b) in self.values.iter().zip(other.values.iter()) {
            diff += (a - b).norm_sqr();
            base += a.norm_sqr();
        }
        Ok(diff.sqrt() / base.sqrt().max(f64::MIN_POSITIVE))
    }
}

/// Lattice coefficients of `f` (the crate-wide normalization: the constant
/// function has a single coefficient 1 at `xi = 0`).
pub fn forward_transform(f: &SampledFunction) -> Vec<Complex64> {
    f.spectrum().to_vec()
}

/// Rebuilds grid samples from lattice coefficients.
pub fn inverse_transform(spectrum: &[Complex64], grid: &GridSpec) -> Result<SampledFunction> {
    SampledFunction::from_spectrum(*grid, spectrum.to_vec())
}

#[derive(Clone, Copy, PartialEq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// Separable d-dimensional FFT in the crate normalization. Forward divides
/// by `N^d`; inverse is the plain unnormalized synthesis sum.
pub(crate) fn multi_fft(grid: &GridSpec, data: &[Complex64], dir: Direction) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let d = grid.dim();
    let total = grid.total_points();
    debug_assert_eq!(data.len(), total);

    let mut planner = FftPlanner::new();
    let plan = match dir {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };

    let mut out = data.to_vec();
    let mut line = vec![Complex64::default(); n];
    // Transform along each axis in turn; stride of the last axis is 1.
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        let block = stride * n;
        for base in 0..total / block {
            for offset in 0..stride {
                let start = base * block + offset;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = out[start + i * stride];
                }
                plan.process(&mut line);
                for (i, slot) in line.iter().enumerate() {
                    out[start + i * stride] = *slot;
                }
            }
        }
    }
    if dir == Direction::Forward {
        let scale = 1.0 / total as f64;
        for v in &mut out {
            *v *= scale;
        }
    }
    out
}
