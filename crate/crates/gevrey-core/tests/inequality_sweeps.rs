//! Randomized in-region sweeps of the three bracket inequalities and the
//! structure of their constants. The full-size sweeps live in the
//! acceptance suite; these cover the same ground at integration scale.

use gevrey_core::grid::FrequencyPoint;
use gevrey_core::inequalities::{
    check_poly_gevrey, check_tri1, check_tri2, compare_remark_constants, sample_poly_frequency,
    sample_tri1_region, sample_tri2_region, tri1_constant, tri1_sigma1_counterexample,
    tri2_constant,
};
use gevrey_core::streams::derive_case_rng;
use proptest::prelude::*;

const SIGMAS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const K_RATIOS: [f64; 3] = [1.5, 2.0, 10.0];

#[test]
fn tri1_randomized_sweep_has_no_violations() {
    let mut worst = f64::INFINITY;
    for dim in 1..=3usize {
        for (i, &sigma) in SIGMAS.iter().enumerate() {
            for (j, &k) in K_RATIOS.iter().enumerate() {
                let mut rng = derive_case_rng(11, "tri1", (dim * 100 + i * 10 + j) as u64);
                for _ in 0..4000 {
                    let s = sample_tri1_region(&mut rng, dim, sigma, k);
                    let rep = check_tri1(&s).unwrap();
                    assert!(rep.holds, "tri1 violated: {rep:?} at sigma={sigma}, K={k}");
                    worst = worst.min(rep.defect / rep.rhs.max(1.0));
                }
            }
        }
    }
    // defects can approach zero but never dip beyond rounding
    assert!(worst >= -1e-12);
}

#[test]
fn tri2_randomized_sweep_has_no_violations() {
    for dim in 1..=3usize {
        for (i, &sigma) in SIGMAS.iter().enumerate() {
            for (j, &k) in K_RATIOS.iter().enumerate() {
                let mut rng = derive_case_rng(13, "tri2", (dim * 100 + i * 10 + j) as u64);
                for _ in 0..4000 {
                    let s = sample_tri2_region(&mut rng, dim, sigma, k);
                    let rep = check_tri2(&s).unwrap();
                    assert!(rep.holds, "tri2 violated: {rep:?} at sigma={sigma}, K={k}");
                }
            }
        }
    }
}

#[test]
fn tri2_worst_direction_stress() {
    // aligned pairs at the region edge |eta| = |xi - eta| / K are the
    // binding samples; sweep them over magnitudes explicitly
    for &sigma in &SIGMAS {
        for &k in &K_RATIOS {
            for exp in 0..24 {
                let w = 2.0f64.powi(exp);
                let eta = FrequencyPoint::new(&[w / k]);
                let xi = FrequencyPoint::new(&[w / k + w]);
                let sample =
                    gevrey_core::inequalities::IneqSample::new(xi, eta, sigma, k).unwrap();
                let rep = check_tri2(&sample).unwrap();
                assert!(rep.holds, "edge sample violated at sigma={sigma}, K={k}, w={w}");
            }
        }
    }
}

#[test]
fn poly_gevrey_randomized_and_lattice_sweeps() {
    let grid = gevrey_core::grid::make_grid(1, 256, 2.0 * std::f64::consts::PI).unwrap();
    for &m in &[1.0, 2.0, 4.0] {
        // exhaustive lattice sweep
        for flat in 0..grid.total_points() {
            let xi = grid.frequency_at(flat);
            let rep = check_poly_gevrey(&xi, 0.5, 0.3, m).unwrap();
            assert!(rep.holds, "lattice violation at m={m}, xi={xi:?}");
        }
        // randomized sweep over dimensions and parameters
        for dim in 1..=3usize {
            use rand::Rng;
            let mut rng = derive_case_rng(17, "poly", (dim as u64) * 31 + m as u64);
            for _ in 0..3000 {
                let sigma = SIGMAS[rng.random_range(0..SIGMAS.len())];
                let tau = rng.random_range(0.05..2.0);
                let xi = sample_poly_frequency(&mut rng, dim, sigma, tau);
                let rep = check_poly_gevrey(&xi, sigma, tau, m).unwrap();
                assert!(rep.holds, "random violation at m={m}, sigma={sigma}, tau={tau}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]
    #[test]
    fn tri1_constant_lies_in_unit_interval(
        k_log in 0.001f64..6.9, // K = e^k_log in (1.001, ~1000)
        sigma in 0.01f64..0.99,
    ) {
        let k = k_log.exp().max(1.001);
        let c = tri1_constant(k, sigma).unwrap();
        prop_assert!(c > 0.0 && c < 1.0, "constant {c} out of (0,1) at K={k}, sigma={sigma}");
    }

    #[test]
    fn tri2_constant_lies_in_unit_interval(
        k_log in 0.001f64..6.9,
        sigma in 0.01f64..0.99,
    ) {
        let k = k_log.exp().max(1.001);
        let c = tri2_constant(k, sigma).unwrap();
        prop_assert!(c > 0.0 && c < 1.0);
    }
}

#[test]
fn remark_comparison_witness() {
    // the competing constant can exceed 1 while ours cannot
    let w = compare_remark_constants(1.1, 0.9).unwrap();
    assert!(w.competing_constant > 1.0 && w.our_constant < 1.0);
    assert!(!w.ours_smaller || w.our_constant < w.competing_constant);
    let r = compare_remark_constants(2.0, 0.5).unwrap();
    assert!(r.ours_smaller);
}

#[test]
fn analytic_case_counterexample_search() {
    // at sigma = 1 no constant below 1 can work; the search must exhibit a
    // violating pair for every candidate
    for c in [0.3, 0.8, 0.99, 0.9999] {
        for k in [1.5, 2.0, 10.0] {
            let found = tri1_sigma1_counterexample(c, k).unwrap();
            assert!(found.is_some(), "no witness found for c = {c}, K = {k}");
        }
    }
}
