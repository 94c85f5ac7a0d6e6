//! Acceptance suite: every release-gating criterion runs here at its stated
//! tolerance and prints one pass/fail line. Run with
//! `cargo test -p gevrey-pdo --test acceptance -- --nocapture` to see the
//! lines for passing criteria as well.

use std::time::Instant;

use num_complex::Complex64;

use gevrey_core::conjugate::{
    classify_region, conjugated_seminorm_report, conjugated_symbol, conjugation_bound_report,
    expansion_remainder, region_predicates, ConjugationParams, RegionLabel,
};
use gevrey_core::gevrey::verify_embedding;
use gevrey_core::grid::{make_grid, FrequencyPoint, GridSpec, SampledFunction};
use gevrey_core::inequalities::{
    check_poly_gevrey, check_tri1, check_tri2, compare_remark_constants, sample_poly_frequency,
    sample_tri1_region, sample_tri2_region, tri1_constant,
};
use gevrey_core::quantize::{
    action_growth_diagnostic, estimate_action_norm, quantize_direct, quantize_fourier_h,
    quantize_fourier_h0, random_band_function, random_compatible_symbol,
};
use gevrey_core::streams::derive_case_rng;
use gevrey_core::symbol::{canonical_symbol, gevrey_bump, SymbolClassParams};
use gevrey_core::apply_weight;
use gevrey_pdo::config::default_config;
use gevrey_pdo::report::{strip_wall_ms, to_csv};
use gevrey_pdo::suites::{run_suite, Suite};
use rand::Rng;

fn verdict(number: u32, name: &str, pass: bool, detail: String) {
    println!(
        "acceptance {number:02} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {number:02} {name}: {detail}");
}

const SIGMAS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const K_RATIOS: [f64; 3] = [1.5, 2.0, 10.0];

#[test]
fn acceptance_01_inequality_sweeps() {
    // one million randomized in-region samples per check, single-threaded
    let started = Instant::now();
    let total: u64 = 1_000_000;
    let mut violations = [0u64; 3];
    let mut worst = [f64::INFINITY; 3];

    let combos = 3 * SIGMAS.len() * K_RATIOS.len();
    let per_combo = total.div_ceil(combos as u64);
    let mut rng = derive_case_rng(1, "acceptance/inequalities", 0);
    for d in 1..=3usize {
        for &sigma in &SIGMAS {
            for &k in &K_RATIOS {
                for _ in 0..per_combo {
                    let s1 = sample_tri1_region(&mut rng, d, sigma, k);
                    let r1 = check_tri1(&s1).unwrap();
                    violations[0] += u64::from(!r1.holds);
                    worst[0] = worst[0].min(r1.defect / r1.rhs.max(1.0));

                    let s2 = sample_tri2_region(&mut rng, d, sigma, k);
                    let r2 = check_tri2(&s2).unwrap();
                    violations[1] += u64::from(!r2.holds);
                    worst[1] = worst[1].min(r2.defect / r2.rhs.max(1.0));

                    let tau = rng.random_range(0.05f64..2.0);
                    let m = [0.0, 1.0, 2.0, 4.0][rng.random_range(0..4)];
                    let xi = sample_poly_frequency(&mut rng, d, sigma, tau);
                    let r3 = check_poly_gevrey(&xi, sigma, tau, m).unwrap();
                    violations[2] += u64::from(!r3.holds);
                    worst[2] = worst[2].min(r3.defect / r3.rhs.max(1.0));
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = violations == [0, 0, 0] && elapsed <= 120.0;
    verdict(
        1,
        "inequality-sweeps",
        pass,
        format!(
            "{}x3 samples, violations tri1/tri2/poly = {violations:?}, worst rel defects {worst:?}, {elapsed:.1}s",
            per_combo * combos as u64
        ),
    );
}

#[test]
fn acceptance_02_constants_and_remark() {
    let mut in_range = true;
    let mut min_c = f64::INFINITY;
    let mut max_c: f64 = 0.0;
    for i in 0..=32 {
        let k = 1.001 * (1000.0f64 / 1.001).powf(i as f64 / 32.0);
        for j in 0..=24 {
            let sigma = 0.01 + (0.99 - 0.01) * j as f64 / 24.0;
            let c = tri1_constant(k, sigma).unwrap();
            in_range &= c > 0.0 && c < 1.0;
            min_c = min_c.min(c);
            max_c = max_c.max(c);
        }
    }
    let witness = compare_remark_constants(1.1, 0.9).unwrap();
    let pass = in_range && witness.competing_constant > 1.0 && witness.our_constant < 1.0;
    verdict(
        2,
        "constants-and-remark",
        pass,
        format!(
            "constant range [{min_c:.3e}, {max_c:.6}], witness competing = {:.5} > 1 > ours = {:.5}",
            witness.competing_constant, witness.our_constant
        ),
    );
}

#[test]
fn acceptance_03_embedding_margins() {
    let started = Instant::now();
    let grid = make_grid(1, 256, 2.0 * std::f64::consts::PI).unwrap();
    let center = grid.period() / 2.0;
    let width = 1.0;
    let mut passes = 0;
    let mut cases = 0;
    let mut worst = f64::INFINITY;
    for s in [1.5, 2.0, 3.0] {
        let bump = gevrey_bump(s, &[center], width).unwrap();
        let sampled = SampledFunction::sample(grid, |x| Complex64::new(bump.value(x), 0.0));
        let r_scale = gevrey_pdo::suites::fitted_bump_scale(s, center, width, 6);
        let critical = s * r_scale.powf(-1.0 / s);
        for kappa in [0.25, 0.5, 0.75] {
            let rep = verify_embedding(&sampled, s, r_scale, kappa * critical, 2.0 * width)
                .unwrap();
            cases += 1;
            passes += i32::from(rep.margin >= 0.0);
            worst = worst.min(rep.margin / rep.rhs.max(1.0));
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = passes == 9 && cases == 9 && elapsed <= 60.0;
    verdict(
        3,
        "embedding-margins",
        pass,
        format!("{passes}/{cases} nonnegative margins, worst relative margin {worst:.3e}, {elapsed:.1}s"),
    );
}

#[test]
fn acceptance_04_quantization_oracle_equivalence() {
    let started = Instant::now();
    let grid = make_grid(1, 64, 2.0 * std::f64::consts::PI).unwrap();
    let mut rng = derive_case_rng(4, "acceptance/quantization", 0);
    let mut passes = 0usize;
    let mut worst: f64 = 0.0;
    let cases = 100;
    for _ in 0..cases {
        let mut case_ok = true;
        for (h, q) in [(0.0f64, 1usize), (0.25, 4), (0.5, 2)] {
            let a = random_compatible_symbol(&grid, q, 16, &mut rng).unwrap();
            let u = random_band_function(&grid, 16, &mut rng);
            let slow = quantize_direct(&a, &u, h).unwrap();
            let fast = if h == 0.0 {
                quantize_fourier_h0(&a, &u).unwrap()
            } else {
                quantize_fourier_h(&a, &u, h).unwrap()
            };
            let err = fast.relative_l2_distance(&slow).unwrap();
            worst = worst.max(err);
            case_ok &= err <= 1e-8;
        }
        passes += usize::from(case_ok);
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = passes == cases && elapsed <= 120.0;
    verdict(
        4,
        "quantization-oracle-equivalence",
        pass,
        format!("{passes}/{cases} cases within 1e-8 at h in (0, 1/4, 1/2), worst {worst:.3e}, {elapsed:.1}s"),
    );
}

#[test]
fn acceptance_05_conjugated_symbol_identity() {
    let started = Instant::now();
    let grid = make_grid(1, 128, 2.0 * std::f64::consts::PI).unwrap();
    let params = SymbolClassParams::new(0.0, 1.0, 0.0, 1.5, 1.0).unwrap();
    let a = canonical_symbol(params, &grid, grid.period() / 3.0).unwrap();
    let (sigma, tau) = (0.5, 0.3);
    let tilde = conjugated_symbol(&a, sigma, tau).unwrap();
    let mut rng = derive_case_rng(5, "acceptance/identity", 0);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let u = random_band_function(&grid, 20, &mut rng);
        let lhs = quantize_fourier_h0(&tilde, &u).unwrap();
        let damped = apply_weight(&u, sigma, -tau).unwrap();
        let rhs = apply_weight(&quantize_fourier_h0(&a, &damped).unwrap(), sigma, tau).unwrap();
        let disc = lhs.relative_l2_distance(&rhs).unwrap() * lhs.l2_norm()
            / u.l2_norm().max(f64::MIN_POSITIVE);
        worst = worst.max(disc);
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = worst <= 1e-6 && elapsed <= 120.0;
    verdict(
        5,
        "conjugated-symbol-identity",
        pass,
        format!("50 inputs at N = 128, worst relative discrepancy {worst:.3e} <= 1e-6, {elapsed:.1}s"),
    );
}

fn fixed_corpus_constant(n: usize, params: &ConjugationParams) -> f64 {
    let grid = make_grid(1, n, 2.0 * std::f64::consts::PI).unwrap();
    let mut worst: f64 = 0.0;
    for pair_idx in 0..16u64 {
        let mut rng = derive_case_rng(6, "acceptance/prop31-corpus", pair_idx);
        let amplitudes: Vec<(i64, Complex64, Complex64)> = (-21i64..=21)
            .map(|k| {
                (
                    k,
                    gevrey_core::inequalities::complex_gaussian(&mut rng),
                    gevrey_core::inequalities::complex_gaussian(&mut rng),
                )
            })
            .collect();
        let (f, v) = corpus_pair(&grid, params, &amplitudes);
        worst = worst.max(conjugation_bound_report(&f, &v, params).unwrap().ratio);
    }
    worst
}

fn corpus_pair(
    grid: &GridSpec,
    params: &ConjugationParams,
    amplitudes: &[(i64, Complex64, Complex64)],
) -> (SampledFunction, SampledFunction) {
    let total = grid.total_points();
    let mut f_spec = vec![Complex64::default(); total];
    let mut v_spec = vec![Complex64::default(); total];
    for &(k, cf, cv) in amplitudes {
        let flat = grid.flat_of_modes(&[k]);
        let b = grid.frequency_at(flat).bracket();
        f_spec[flat] = cf
            * (-params.tau * b.powf(params.sigma)).exp()
            * b.powf(-(params.sobolev_order + 1.0));
        v_spec[flat] = cv * b.powf(-(params.sobolev_order + 0.5));
    }
    (
        SampledFunction::from_spectrum(*grid, f_spec).unwrap(),
        SampledFunction::from_spectrum(*grid, v_spec).unwrap(),
    )
}

#[test]
fn acceptance_06_conjugation_constant_stability() {
    let params = ConjugationParams::new(0.5, 0.3, 1.0).unwrap();
    let constants: Vec<f64> =
        [64usize, 128, 256].iter().map(|&n| fixed_corpus_constant(n, &params)).collect();
    let drift = constants
        .windows(2)
        .map(|w| (w[1] - w[0]).abs() / w[0])
        .fold(0.0, f64::max);
    let pass = drift <= 0.2;
    verdict(
        6,
        "conjugation-constant-stability",
        pass,
        format!("fitted constants {constants:?} across N = 64/128/256, max drift {drift:.3}"),
    );
}

#[test]
fn acceptance_07_action_norm_stability_and_necessity() {
    let (delta, s) = (0.25, 2.0);
    let sigma = (1.0 - delta) / s;
    let (tau, tau_prime) = (0.4, 0.2); // tau' = tau / 2
    let mut norms = Vec::new();
    for n in [128usize, 256] {
        let grid = make_grid(1, n, 2.0 * std::f64::consts::PI).unwrap();
        let params = SymbolClassParams::new(0.0, 1.0 - delta, delta, s, 1.0).unwrap();
        let a = canonical_symbol(params, &grid, grid.period() / 4.0).unwrap();
        let mut rng = derive_case_rng(7, "acceptance/action", 0);
        let rep = estimate_action_norm(&a, sigma, tau, tau_prime, 12, 20, &mut rng).unwrap();
        norms.push(rep.empirical_norm);
    }
    let drift = (norms[1] - norms[0]).abs() / norms[0];

    let grid = make_grid(1, 128, 2.0 * std::f64::consts::PI).unwrap();
    let params = SymbolClassParams::new(0.0, 1.0 - delta, delta, s, 1.0).unwrap();
    let a = canonical_symbol(params, &grid, grid.period() / 4.0).unwrap();
    let mut rng = derive_case_rng(7, "acceptance/necessity", 0);
    let ratios =
        action_growth_diagnostic(&a, sigma, 0.05, 2.0, &[15, 60], 6, &mut rng).unwrap();
    let growth = ratios[1].1 / ratios[0].1;

    let pass =
        norms.iter().all(|n| n.is_finite() && *n > 0.0) && drift <= 0.2 && growth >= 10.0;
    verdict(
        7,
        "action-norm-stability-and-necessity",
        pass,
        format!("norms {norms:?}, drift {drift:.4} <= 0.2, reversed-radius growth {growth:.1}x >= 10x"),
    );
}

#[test]
fn acceptance_08_expansion_orders() {
    let grid = make_grid(1, 512, 2.0 * std::f64::consts::PI).unwrap();
    let params = SymbolClassParams::new(0.0, 1.0, 0.0, 2.0, 1.0).unwrap();
    let a = canonical_symbol(params, &grid, grid.period() / 4.0).unwrap();
    let mut all_ok = true;
    let mut detail = String::new();
    for k in [0usize, 1, 2] {
        let rep = expansion_remainder(&a, k, 0.5, 0.3).unwrap();
        let ok = rep.fitted_order <= rep.predicted_order + 0.3;
        all_ok &= ok;
        detail.push_str(&format!(
            "k={k}: fitted {:.3} vs predicted {:.2}; ",
            rep.fitted_order, rep.predicted_order
        ));
    }
    verdict(8, "expansion-orders", all_ok, detail);
}

#[test]
fn acceptance_09_seminorm_envelope() {
    let grid = make_grid(1, 128, 2.0 * std::f64::consts::PI).unwrap();
    // order-one canonical symbol keeps the beta-seminorms nondegenerate
    let params = SymbolClassParams::new(1.0, 1.0, 0.0, 2.0, 1.0).unwrap();
    let a = canonical_symbol(params, &grid, grid.period() / 4.0).unwrap();
    let tau_bar = 1.0;
    let gaps = [0.4, 0.2, 0.1, 0.05];
    let mut all_ok = true;
    let mut detail = String::new();
    for (alpha, beta) in [([0usize], [0usize]), ([1], [0]), ([0], [1])] {
        let mut ratios = Vec::new();
        for gap in gaps {
            let rep =
                conjugated_seminorm_report(&a, &alpha, &beta, tau_bar - gap, tau_bar).unwrap();
            ratios.push(rep.ratio);
        }
        // the constant fitted at the widest gap must bound the whole sweep
        let fitted = 3.0 * ratios[0];
        let ok = ratios.iter().all(|r| r.is_finite() && *r <= fitted);
        all_ok &= ok;
        detail.push_str(&format!(
            "(|a|,|b|)=({},{}): ratios {:?} vs fitted {:.3e}; ",
            alpha[0], beta[0], ratios, fitted
        ));
    }
    verdict(9, "seminorm-envelope", all_ok, detail);
}

#[test]
fn acceptance_10_region_partition_totality() {
    let mut rng = derive_case_rng(10, "acceptance/regions", 0);
    let mut bad = 0u64;
    let samples = 1_000_000u64;
    for _ in 0..samples {
        let d = rng.random_range(1..=3usize);
        let k = 1.0 + rng.random_range(0.01..9.0f64);
        let xi_coords: Vec<f64> = (0..d).map(|_| rng.random_range(-100.0..100.0)).collect();
        let eta_coords: Vec<f64> = (0..d).map(|_| rng.random_range(-100.0..100.0)).collect();
        let xi = FrequencyPoint::new(&xi_coords);
        let eta = FrequencyPoint::new(&eta_coords);
        let label = classify_region(&xi, &eta, k).unwrap();
        let (p1, p2, p3) = region_predicates(&xi, &eta, k);
        let consistent = match label {
            RegionLabel::R1 => p1,
            RegionLabel::R2 => !p1 && p2,
            RegionLabel::R3 => !p1 && !p2 && p3,
        };
        bad += u64::from(!consistent || !(p1 || p2 || p3));
    }
    verdict(
        10,
        "region-partition-totality",
        bad == 0,
        format!("{samples} random triples, {bad} multi- or no-label cases"),
    );
}

#[test]
fn acceptance_11_report_determinism() {
    let mut cfg = default_config();
    // desk-scale counts keep the rerun cheap without changing the contract
    cfg.samples.inequality_samples = 30_000;
    cfg.samples.region_samples = 20_000;
    cfg.samples.quantization_cases = 5;
    cfg.samples.conjugation_inputs = 4;
    cfg.samples.action_samples = 3;
    cfg.seed = 424242;
    let mut all_ok = true;
    let mut detail = String::new();
    for suite in [Suite::Inequalities, Suite::Quantization, Suite::Symbol5] {
        let a = to_csv(&run_suite(&cfg, suite).unwrap());
        let b = to_csv(&run_suite(&cfg, suite).unwrap());
        let same = strip_wall_ms(&a) == strip_wall_ms(&b);
        all_ok &= same;
        detail.push_str(&format!("{}: {}; ", suite.name(), if same { "identical" } else { "DIFFERS" }));
    }
    verdict(11, "report-determinism", all_ok, detail);
}
