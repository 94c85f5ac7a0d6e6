//! Oracle equivalence of the quantization paths at integration scale, the
//! h-independence of multiplier symbols, and the action-norm probes.

use gevrey_core::grid::{make_grid, SampledFunction};
use gevrey_core::quantize::{
    action_growth_diagnostic, estimate_action_norm, quantize_direct, quantize_fourier_h,
    quantize_fourier_h0, random_band_function, random_compatible_symbol,
};
use gevrey_core::streams::derive_case_rng;
use gevrey_core::symbol::{canonical_symbol, SampledSymbol, SupportBox, SymbolClassParams};
use num_complex::Complex64;

#[test]
fn oracle_equivalence_sample() {
    let grid = make_grid(1, 64, 2.0 * std::f64::consts::PI).unwrap();
    for (case, (h, q)) in [(0.0f64, 1usize), (0.25, 4), (0.5, 2)].into_iter().enumerate() {
        let mut rng = derive_case_rng(23, "oracle-eq", case as u64);
        for _ in 0..10 {
            let a = random_compatible_symbol(&grid, q, 16, &mut rng).unwrap();
            let u = random_band_function(&grid, 16, &mut rng);
            let slow = quantize_direct(&a, &u, h).unwrap();
            let fast = if h == 0.0 {
                quantize_fourier_h0(&a, &u).unwrap()
            } else {
                quantize_fourier_h(&a, &u, h).unwrap()
            };
            let err = fast.relative_l2_distance(&slow).unwrap();
            assert!(err <= 1e-8, "oracle mismatch {err} at h = {h}");
        }
    }
}

#[test]
fn multiplier_outputs_coincide_across_h() {
    let grid = make_grid(1, 32, 2.0 * std::f64::consts::PI).unwrap();
    let total = grid.total_points();
    let mut rng = derive_case_rng(29, "multiplier-h", 0);
    for _ in 0..100 {
        // random multiplier symbol: x-independent columns
        let mut values = vec![Complex64::default(); total * total];
        for xi_flat in 0..total {
            let c = gevrey_core::inequalities::complex_gaussian(&mut rng);
            for x_flat in 0..total {
                values[xi_flat * total + x_flat] = c;
            }
        }
        let a = SampledSymbol::from_values(
            grid,
            values,
            SymbolClassParams::new(0.0, 1.0, 0.0, 2.0, 1.0).unwrap(),
            SupportBox::new(&[0.0], &[grid.period()]).unwrap(),
        )
        .unwrap();
        let u = random_band_function(&grid, 10, &mut rng);
        let base = quantize_direct(&a, &u, 0.0).unwrap();
        for h in [0.25, 0.5, 0.75] {
            let out = quantize_direct(&a, &u, h).unwrap();
            let err = out.relative_l2_distance(&base).unwrap();
            assert!(err <= 1e-10, "h-dependence {err} for an x-independent symbol");
        }
    }
}

#[test]
fn action_norm_is_grid_stable_for_the_canonical_symbol() {
    // delta > 0 loses radius; the measured norm must not blow up under
    // refinement
    let (delta, s) = (0.25, 2.0);
    let sigma = (1.0 - delta) / s;
    let (tau, tau_prime) = (0.4, 0.2);
    let mut norms = Vec::new();
    for n in [64usize, 128] {
        let grid = make_grid(1, n, 2.0 * std::f64::consts::PI).unwrap();
        let params = SymbolClassParams::new(0.0, 1.0 - delta, delta, s, 1.0).unwrap();
        let a = canonical_symbol(params, &grid, grid.period() / 4.0).unwrap();
        let mut rng = derive_case_rng(31, "action-stability", 0);
        let rep = estimate_action_norm(&a, sigma, tau, tau_prime, 12, 20, &mut rng).unwrap();
        assert!(rep.empirical_norm.is_finite() && rep.empirical_norm > 0.0);
        assert!(rep.bound > rep.empirical_norm, "a-priori bound must dominate");
        norms.push(rep.empirical_norm);
    }
    let drift = (norms[1] - norms[0]).abs() / norms[0];
    assert!(drift <= 0.2, "empirical norm drifted {drift} under refinement");
}

#[test]
fn reversed_radii_blow_up_with_the_band_limit() {
    let grid = make_grid(1, 128, 2.0 * std::f64::consts::PI).unwrap();
    let (delta, s) = (0.25, 2.0);
    let sigma = (1.0 - delta) / s;
    let params = SymbolClassParams::new(0.0, 1.0 - delta, delta, s, 1.0).unwrap();
    let a = canonical_symbol(params, &grid, grid.period() / 4.0).unwrap();
    let mut rng = derive_case_rng(37, "necessity", 0);
    // tau' > tau violates the radius-loss hypothesis on purpose
    let ratios = action_growth_diagnostic(&a, sigma, 0.05, 2.0, &[15, 60], 6, &mut rng).unwrap();
    let growth = ratios[1].1 / ratios[0].1;
    assert!(
        growth >= 10.0,
        "reversed radii should grow >= 10x as the band quadruples, got {growth}"
    );
}

#[test]
fn direct_path_accepts_non_dyadic_rationals() {
    let grid = make_grid(1, 16, 2.0 * std::f64::consts::PI).unwrap();
    let mut rng = derive_case_rng(41, "non-dyadic", 0);
    // x-band on multiples of 3 closes the lattice constraint for h = 1/3
    let a = random_compatible_symbol(&grid, 3, 6, &mut rng).unwrap();
    let u = random_band_function(&grid, 6, &mut rng);
    let h = 1.0 / 3.0;
    let out = quantize_direct(&a, &u, h).unwrap();
    // reference through the constrained sum, assembled by hand
    let total = grid.total_points();
    let a_hat = a.x_spectrum();
    let u_hat = u.spectrum();
    let mut spec = vec![Complex64::default(); total];
    for (xi_flat, slot) in spec.iter_mut().enumerate() {
        let xi = grid.modes_at(xi_flat)[0];
        for (zeta_flat, &uz) in u_hat.iter().enumerate() {
            let zeta = grid.modes_at(zeta_flat)[0];
            let n = grid.points_per_axis() as i64;
            let mut w = (xi - zeta).rem_euclid(n);
            if w >= n / 2 {
                w -= n;
            }
            if w.rem_euclid(3) != 0 {
                continue;
            }
            let eta = zeta + w / 3;
            let mu_flat = grid.flat_of_modes(&[w]);
            let eta_flat = grid.flat_of_modes(&[eta]);
            *slot += a_hat[eta_flat * total + mu_flat] * uz;
        }
    }
    let reference = SampledFunction::from_spectrum(grid, spec).unwrap();
    let err = out.relative_l2_distance(&reference).unwrap();
    assert!(err <= 1e-10, "q = 3 rational path mismatch {err}");
}
