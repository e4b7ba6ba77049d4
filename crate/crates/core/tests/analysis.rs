use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use smcs_core::analysis::grid::{largest_of, second_largest_density, GammaLaw, GridPdf};
use smcs_core::analysis::{
    pairwise_correct_probability, q_function, scser_analytic, scser_gaussian_approx, second_order_statistic_pdf,
    AnalyticParams, Metric, MomentSet, Recovery,
};
use smcs_core::channel::complex_gaussian;
use smcs_core::constellation::SignalConstellation;
use smcs_core::{Error, C64};
use statrs::function::gamma::gamma_lr;

/// Sample variances of Re/Im of `F_{m,m}` and of `F_{m,l}`, `l ≠ m`.
fn sample_moments(n_r: usize, m: usize, noise: f64, samples: usize, seed: u64) -> [f64; 4] {
    let b = SignalConstellation::psk(m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = [0.0; 4];
    let mut hm = vec![C64::new(0.0, 0.0); n_r];
    for _ in 0..samples {
        let alpha = b.point(rng.random_range(0..m));
        hm.iter_mut().for_each(|h| *h = complex_gaussian(&mut rng, 1.0));
        let (mut fmm, mut fml) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for h in &hm {
            let y = h * alpha + complex_gaussian(&mut rng, noise);
            let hl = complex_gaussian(&mut rng, 1.0);
            fmm += h.conj() * y;
            fml += hl.conj() * y;
        }
        acc[0] += fmm.re * fmm.re;
        acc[1] += fmm.im * fmm.im;
        acc[2] += fml.re * fml.re;
        acc[3] += fml.im * fml.im;
    }
    acc.map(|v| v / samples as f64)
}

#[test]
fn moments_match_sampling_oracle() {
    for (m, noise) in [(8, 0.5), (2, 0.5), (8, 0.0)] {
        let theory = MomentSet::new(16, 1.0, noise, m).unwrap();
        let s = sample_moments(16, m, noise, 200_000, m as u64);
        let rel = |a: f64, b: f64| (a / b - 1.0).abs();
        assert!(rel(s[0], theory.sigma1_sq) < 0.02, "M={m}: {} vs {}", s[0], theory.sigma1_sq);
        assert!(rel(s[1], theory.sigma2_sq) < 0.02, "M={m}: {} vs {}", s[1], theory.sigma2_sq);
        assert!(rel(s[2], theory.sigma3_sq) < 0.02);
        assert!(rel(s[3], theory.sigma3_sq) < 0.02);
    }
}

#[test]
fn bpsk_imaginary_part_is_noise_only() {
    let m = MomentSet::new(16, 1.0, 0.3, 2).unwrap();
    assert!((m.sigma2_sq - 16.0 * 0.3 / 2.0).abs() < 1e-12);
}

fn grid_for(dist: &smcs_core::analysis::MetricDistribution, cells: usize) -> f64 {
    dist.support(1e-9) / cells as f64
}

#[test]
fn metric_densities_are_normalized() {
    for (m, g, snr) in [(8, 1, 0.0), (8, 4, -5.0), (2, 3, 5.0), (2, 1, 20.0), (1, 2, 10.0)] {
        for kind in [Recovery::Gmmv, Recovery::Mmv] {
            let d = AnalyticParams::from_snr(64, 16, 1, m, g, snr).distribution(kind).unwrap();
            let cells = 1 << 14;
            let step = grid_for(&d, cells);
            for which in [Metric::Signal, Metric::Noise] {
                let pdf = d.metric_pdf(which, step, cells);
                assert!(pdf.masses().iter().all(|&v| v >= 0.0));
                assert!((pdf.total() - 1.0).abs() < 1e-6, "{kind:?} {which:?} M={m}: {}", pdf.total());
            }
            let second = second_order_statistic_pdf(&d.noise_law(), 64, 1, step, cells).unwrap();
            assert!((second.total() - 1.0).abs() < 1e-4);
        }
    }
}

#[test]
fn noise_cdf_at_mean_matches_incomplete_gamma() {
    for g in [1usize, 2, 5] {
        let d = AnalyticParams::from_snr(64, 16, 1, 8, g, 3.0).distribution(Recovery::Gmmv).unwrap();
        let law = d.noise_law();
        let mean = 2.0 * g as f64 * d.moments.sigma3_sq;
        assert!((law.mean() - mean).abs() < 1e-9 * mean);
        assert!((law.cdf(mean) - gamma_lr(g as f64, g as f64)).abs() < 1e-12);
        let cells = 1 << 15;
        let pdf = d.metric_pdf(Metric::Noise, grid_for(&d, cells), cells);
        assert!((pdf.cdf(mean) - gamma_lr(g as f64, g as f64)).abs() < 1e-4);
    }
}

#[test]
fn equal_scale_signal_is_exact_gamma() {
    let d = AnalyticParams::from_snr(64, 16, 1, 8, 3, 0.0).distribution(Recovery::Gmmv).unwrap();
    let cells = 1 << 14;
    let step = grid_for(&d, cells);
    let direct = GammaLaw::new(3.0, 2.0 * d.moments.sigma1_sq).discretize(step, cells);
    assert_eq!(d.metric_pdf(Metric::Signal, step, cells), direct);
}

/// Sup-norm gap between the CDF of a grid density and an empirical CDF.
fn kolmogorov(pdf: &GridPdf, mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    let edges = pdf.edge_cdf();
    let n = samples.len() as f64;
    let cdf = |x: f64| {
        let pos = x / pdf.step();
        let i = (pos as usize).min(pdf.len() - 1);
        edges[i] + pdf.masses()[i] * (pos - i as f64).min(1.0)
    };
    samples
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = cdf(x);
            (f - k as f64 / n).abs().max((f - (k + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn second_largest_matches_sorting_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (n, shape) in [(63usize, 1.0), (2, 4.0), (10, 2.5)] {
        let law = GammaLaw::new(shape, 3.0);
        let cells = 1 << 14;
        let step = law.upper_point(1e-10 / n as f64) / cells as f64;
        let pdf = second_order_statistic_pdf(&law, n + 1, 1, step, cells).unwrap();
        let gamma = Gamma::new(shape, 3.0).unwrap();
        let mut draws = vec![0.0; n];
        let samples: Vec<f64> = (0..200_000)
            .map(|_| {
                draws.iter_mut().for_each(|d| *d = gamma.sample(&mut rng));
                draws.sort_by(|a, b| b.total_cmp(a));
                draws[1]
            })
            .collect();
        let ks = kolmogorov(&pdf, samples);
        assert!(ks <= 1e-2, "n={n}: {ks}");
    }
}

#[test]
fn second_largest_pointwise_formula_matches_grid() {
    let law = GammaLaw::new(2.0, 1.5);
    let n = 20;
    let cells = 1 << 14;
    let step = law.upper_point(1e-12) / cells as f64;
    let pdf = second_order_statistic_pdf(&law, n + 1, 1, step, cells).unwrap();
    for i in (100..cells).step_by(997) {
        let x = pdf.center(i);
        let point = second_largest_density(law.pdf(x), law.cdf(x), n);
        assert!((pdf.density(i) - point).abs() < 1e-3 * point.max(1e-3), "x={x}");
    }
}

#[test]
fn second_largest_sits_below_largest() {
    let law = GammaLaw::new(1.0, 16.0);
    let cells = 1 << 14;
    let step = law.upper_point(1e-12) / cells as f64;
    let second = second_order_statistic_pdf(&law, 64, 1, step, cells).unwrap();
    let first = largest_of(&law, 63, step, cells);
    assert!(second.mean() < first.mean());
    assert_eq!(
        second_order_statistic_pdf(&law, 3, 2, step, cells).unwrap_err(),
        Error::TooFewCompetitors(1)
    );
}

#[test]
fn convolution_matches_sampled_sum() {
    let d = AnalyticParams::from_snr(64, 16, 1, 2, 2, 0.0).distribution(Recovery::Gmmv).unwrap();
    assert!(d.merged_signal().is_none());
    let cells = 1 << 14;
    let step = grid_for(&d, cells);
    let pdf = d.metric_pdf(Metric::Signal, step, cells);
    let [a, b] = d.signal_components();
    let (ga, gb) = (Gamma::new(a.shape, a.scale).unwrap(), Gamma::new(b.shape, b.scale).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let samples: Vec<f64> = (0..1_000_000).map(|_| ga.sample(&mut rng) + gb.sample(&mut rng)).collect();
    // Histogram on 256 coarse bins against the grid mass in the same bins.
    let bins = 256;
    let width = cells / bins;
    let mut hist = vec![0.0; bins];
    for x in &samples {
        let k = (x / (step * width as f64)) as usize;
        if k < bins {
            hist[k] += 1.0 / samples.len() as f64;
        }
    }
    let gap = (0..bins)
        .map(|k| (pdf.masses()[k * width..(k + 1) * width].iter().sum::<f64>() - hist[k]).abs())
        .fold(0.0, f64::max);
    assert!(gap <= 1e-2, "{gap}");
    assert!(kolmogorov(&pdf, samples) < 5e-3);
}

#[test]
fn signal_free_limit_is_the_guessing_plateau() {
    let p = AnalyticParams { noise_variance: 1e12, ..AnalyticParams::from_snr(64, 16, 1, 8, 1, 0.0) };
    let est = scser_analytic(Recovery::Gmmv, &p).unwrap();
    // C_m is then exchangeable with 63 competitors: it loses unless it ranks in the top two.
    assert!((est.scser - (1.0 - 2.0 / 64.0)).abs() < 1e-3, "{}", est.scser);
    let mut last = 0.0;
    for snr in [30.0, 10.0, 0.0, -10.0, -20.0, -40.0] {
        let s = scser_analytic(Recovery::Gmmv, &AnalyticParams::from_snr(64, 16, 1, 8, 1, snr)).unwrap().scser;
        assert!(s >= last);
        last = s;
    }
}

#[test]
fn analytic_is_monotone_in_snr_and_group_size() {
    for g in [1usize, 2, 3, 4, 6] {
        let mut prev = 1.0;
        for snr in [-10.0, -7.5, -5.0, -2.5, 0.0, 2.5, 5.0, 10.0] {
            let s = scser_analytic(Recovery::Gmmv, &AnalyticParams::from_snr(64, 16, 1, 8, g, snr)).unwrap().scser;
            assert!((0.0..=1.0).contains(&s));
            assert!(s <= prev + 1e-9, "G={g} snr={snr}");
            prev = s;
        }
    }
    for snr in [-10.0, -5.0, 0.0, 5.0] {
        let mut prev = 1.0;
        for g in 1..=6 {
            let s = scser_analytic(Recovery::Gmmv, &AnalyticParams::from_snr(64, 16, 1, 8, g, snr)).unwrap().scser;
            assert!(s <= prev + 1e-9, "G={g} snr={snr}");
            prev = s;
        }
    }
}

#[test]
fn gmmv_beats_mmv() {
    for snr in [-5.0, 0.0, 5.0, 10.0] {
        let p = AnalyticParams::from_snr(64, 16, 1, 8, 4, snr);
        let g = scser_analytic(Recovery::Gmmv, &p).unwrap().scser;
        let m = scser_analytic(Recovery::Mmv, &p).unwrap().scser;
        assert!(g < m, "snr={snr}: {g} vs {m}");
    }
}

#[test]
fn gaussian_approximation_at_high_snr() {
    let p = AnalyticParams::from_snr(64, 16, 1, 8, 8, 30.0);
    let exact = 1.0 - scser_analytic(Recovery::Gmmv, &p).unwrap().scser;
    let approx = 1.0 - scser_gaussian_approx(Recovery::Gmmv, &p).unwrap();
    assert!((approx - exact).abs() / exact <= 0.05, "{approx} vs {exact}");
}

#[test]
fn gaussian_pairwise_terms() {
    assert_eq!(q_function(0.0), 0.5);
    for (nr, noise) in [(1usize, 0.0), (4, 10.0), (16, 0.1)] {
        let m = MomentSet::new(nr, 1.0, noise, 8).unwrap();
        let (mu, _) = smcs_core::analysis::gaussian_moments(&m, 3);
        assert!(mu > 0.0);
        for g in 2..8 {
            assert!(
                pairwise_correct_probability(Recovery::Gmmv, &m, g)
                    >= pairwise_correct_probability(Recovery::Mmv, &m, g)
            );
        }
    }
}

#[test]
fn analysis_scope_is_enforced() {
    let p = AnalyticParams::from_snr(65, 16, 2, 8, 2, 0.0);
    assert_eq!(scser_gaussian_approx(Recovery::Gmmv, &p).unwrap_err(), Error::AnalysisScope(2));
}
