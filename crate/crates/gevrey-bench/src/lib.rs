//! Shared fixtures for the kernel benchmarks.

use gevrey_core::grid::{make_grid, GridSpec, SampledFunction};
use gevrey_core::quantize::{random_band_function, random_compatible_symbol};
use gevrey_core::streams::derive_case_rng;
use gevrey_core::symbol::{canonical_symbol, SampledSymbol, SymbolClassParams};

pub fn grid(n: usize) -> GridSpec {
    make_grid(1, n, 2.0 * std::f64::consts::PI).expect("benchmark grid")
}

pub fn band_function(g: &GridSpec, band: usize) -> SampledFunction {
    let mut rng = derive_case_rng(1, "bench/function", band as u64);
    random_band_function(g, band, &mut rng)
}

pub fn compatible_symbol(g: &GridSpec, q: usize, band: usize) -> SampledSymbol {
    let mut rng = derive_case_rng(1, "bench/symbol", q as u64);
    random_compatible_symbol(g, q, band, &mut rng).expect("benchmark symbol")
}

pub fn bump_symbol(g: &GridSpec) -> SampledSymbol {
    let params = SymbolClassParams::new(0.0, 1.0, 0.0, 2.0, 1.0).expect("params");
    canonical_symbol(params, g, g.period() / 4.0).expect("benchmark symbol")
}
