use approx::assert_relative_eq;
use xdlab_core::analytic::reference::cdf_xd_exact;
use xdlab_core::analytic::{ccdf_hd_equiv, cdf_xd, sumrate, Modulation, SeriesConfig, SumRateMode};
use xdlab_core::channel::{select_xd, SystemParams};
use xdlab_core::mcsim::*;
use xdlab_core::{db_to_linear, Error};

fn eq(pt: f64, eta: f64) -> SystemParams {
    SystemParams::equal_power(pt, eta).unwrap()
}

fn draws(n: usize, params: &SystemParams) -> Vec<xdlab_core::channel::FadingSample> {
    let mut out = Vec::with_capacity(n);
    let mut leaf = 0;
    while out.len() < n {
        let mut s = SampleStream::new(17, leaf);
        for _ in 0..LEAF_TRIALS.min((n - out.len()) as u64) {
            out.push(draw_sample(&mut s, params));
        }
        leaf += 1;
    }
    out
}

#[test]
fn gains_have_unit_mean() {
    let v = draws(1_000_000, &eq(10.0, 0.2));
    let mean = v.iter().map(|s| s.gamma1).sum::<f64>() / v.len() as f64;
    assert!((mean - 1.0).abs() < 0.003, "{mean}");
    let mean_r = v.iter().map(|s| s.gamma_r).sum::<f64>() / v.len() as f64;
    assert!((mean_r - 0.2).abs() < 0.003 * 0.2 * 3.0, "{mean_r}");
}

#[test]
fn gains_are_exponential() {
    let mut g2: Vec<f64> = draws(100_000, &eq(10.0, 0.2)).iter().map(|s| s.gamma2).collect();
    let n = g2.len() as f64;
    let d = ks_distance(&mut g2, |x| Ok(-(-x).exp_m1())).unwrap();
    assert!(d < 1.628 / n.sqrt(), "{d}");
}

#[test]
fn gains_are_uncorrelated() {
    let v = draws(1_000_000, &eq(10.0, 1.0));
    let n = v.len() as f64;
    let (m1, mr) = (
        v.iter().map(|s| s.gamma1).sum::<f64>() / n,
        v.iter().map(|s| s.gamma_r).sum::<f64>() / n,
    );
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for s in &v {
        let (a, b) = (s.gamma1 - m1, s.gamma_r - mr);
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    let r = sxy / (sxx * syy).sqrt();
    assert!(r.abs() < 0.003, "{r}");
}

#[test]
fn streams_depend_on_seed_and_leaf() {
    let p = eq(10.0, 0.2);
    let a = draw_sample(&mut SampleStream::new(1, 0), &p);
    assert_eq!(a, draw_sample(&mut SampleStream::new(1, 0), &p));
    assert_ne!(a, draw_sample(&mut SampleStream::new(1, 1), &p));
    assert_ne!(a, draw_sample(&mut SampleStream::new(2, 0), &p));
}

#[test]
fn identical_across_worker_counts() {
    let c = SimConfig::new(eq(db_to_linear(20.0), 0.05), 200_003, 42).unwrap();
    let run = |threads: usize, chunk: usize| {
        let c = c.with_chunk_size(chunk).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            (
                estimate(Metric::SumRate, SimMode::Xd, &c).unwrap(),
                estimate(Metric::Outage { r0: 2.0 }, SimMode::Hd, &c).unwrap(),
                empirical_cdf(Quantity::GammaMax, &[1.0, 3.0, 10.0], &c).unwrap(),
            )
        })
    };
    let base = run(1, 1 << 16);
    for (threads, chunk) in [(4, 1), (8, 4096), (3, 100_000)] {
        let r = run(threads, chunk);
        assert_eq!(base.0.mean.to_bits(), r.0.mean.to_bits());
        assert_eq!(base.0.stderr.to_bits(), r.0.stderr.to_bits());
        assert_eq!(base.1, r.1);
        assert_eq!(base.2, r.2);
    }
}

#[test]
fn xd_outage_dominates_per_sample() {
    let p = eq(db_to_linear(15.0), 0.05);
    let t = 3.0;
    for s in draws(100_000, &p) {
        let m = select_xd(&s, &p).unwrap();
        let out = |g: f64| g < t;
        assert!(out(m.xd) <= out(m.fd) && out(m.xd) <= out(m.hd_equiv));
    }
}

#[test]
fn half_duplex_rate_criterion_matches_threshold() {
    let p = eq(db_to_linear(20.0), 0.2);
    let samples = draws(100_000, &p);
    for r0 in [0.5f64, 1.0, 2.0, 4.0] {
        let t = r0.exp2() - 1.0;
        for s in &samples {
            let m = select_xd(s, &p).unwrap();
            assert_eq!(0.5 * m.hd.ln_1p() / std::f64::consts::LN_2 < r0, m.hd_equiv < t);
        }
    }
}

#[test]
fn outage_at_vanishing_rate() {
    let c = SimConfig::new(eq(100.0, 0.2), 100_000, 3).unwrap();
    for mode in [SimMode::Fd, SimMode::Hd, SimMode::Xd] {
        let e = estimate(Metric::Outage { r0: 1e-12 }, mode, &c).unwrap();
        assert_eq!(e.mean, 0.0);
        assert_eq!(e.stderr, 0.0);
    }
}

#[test]
fn fd_outage_brackets_floor() {
    let c = SimConfig::new(eq(db_to_linear(40.0), 0.2), 1_000_000, 5).unwrap();
    let e = estimate(Metric::Outage { r0: 2.0 }, SimMode::Fd, &c).unwrap();
    assert!((e.mean - 0.375).abs() < 0.002, "{e:?}");
    assert_relative_eq!(e.ci95_high - e.mean, 1.96 * e.stderr, max_relative = 1e-12);
}

#[test]
fn stderr_matches_replicate_spread() {
    // sum of squared standardized deviations over 30 seeds is chi-square with 29 dof
    let p = eq(db_to_linear(20.0), 0.2);
    let mut means = Vec::new();
    let mut var = 0.0;
    for seed in 0..30 {
        let c = SimConfig::new(p, 20_000, 1000 + seed).unwrap();
        let e = estimate(Metric::Outage { r0: 2.0 }, SimMode::Xd, &c).unwrap();
        means.push(e.mean);
        var += e.stderr * e.stderr;
    }
    let var = var / 30.0;
    let m = means.iter().sum::<f64>() / 30.0;
    let chi2 = means.iter().map(|x| (x - m).powi(2) / var).sum::<f64>();
    assert!((13.12..=52.34).contains(&chi2), "{chi2}");
}

#[test]
fn probability_estimates_stay_in_unit_interval() {
    let c = SimConfig::new(eq(db_to_linear(10.0), 0.05), 10_000, 9).unwrap();
    for mode in [SimMode::Fd, SimMode::Hd, SimMode::Xd] {
        let e = estimate(Metric::Outage { r0: 2.0 }, mode, &c).unwrap();
        assert!((0.0..=1.0).contains(&e.mean) && e.stderr >= 0.0);
    }
    let f = estimate(Metric::ModeFreq, SimMode::Xd, &c).unwrap();
    assert!((0.0..=1.0).contains(&f.mean));
    let ser = estimate(Metric::Ser(Modulation::BPSK), SimMode::Xd, &c).unwrap();
    assert!(ser.mean > 0.0 && ser.mean <= 0.5);
}

#[test]
fn mode_frequency_needs_xd() {
    let c = SimConfig::new(eq(100.0, 0.2), 10, 1).unwrap();
    for mode in [SimMode::Fd, SimMode::Hd, SimMode::FdPa, SimMode::HdPa] {
        assert!(matches!(
            estimate(Metric::ModeFreq, mode, &c),
            Err(Error::Precondition { .. })
        ));
    }
    let pa = SimConfig::new(SystemParams::power_allocated(1.0, 1.0, 0.2, 100.0).unwrap(), 10, 1).unwrap();
    assert!(estimate(Metric::ModeFreq, SimMode::XdPa, &pa).is_ok());
}

#[test]
fn empirical_cdf_basics() {
    let c = SimConfig::new(eq(db_to_linear(25.0), 0.2), 1_000_000, 11).unwrap();
    assert_eq!(empirical_cdf(Quantity::GammaMax, &[0.0], &c).unwrap(), vec![(0.0, 0.0)]);
    // bisect for the median on F̂
    let f = |x: f64| empirical_cdf(Quantity::GammaMax, &[x], &c).unwrap()[0].1;
    let (mut lo, mut hi) = (0.0, 1e4);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((f(hi) - 0.5).abs() < 0.002);
    let grid: Vec<f64> = (0..50).map(|i| i as f64).collect();
    let cdf = empirical_cdf(Quantity::GammaF, &grid, &c).unwrap();
    assert!(cdf.windows(2).all(|w| w[0].1 <= w[1].1));
    assert!(cdf.iter().all(|&(_, v)| (0.0..=1.0).contains(&v)));
}

#[test]
fn samples_agree_with_empirical_cdf() {
    let c = SimConfig::new(eq(db_to_linear(20.0), 0.2), 50_000, 4).unwrap();
    let s = sample_quantity(Quantity::GammaMax, &c).unwrap();
    assert_eq!(s.len(), 50_000);
    let x = 7.0;
    let count = s.iter().filter(|&&g| g <= x).count() as f64 / 50_000.0;
    assert_eq!(empirical_cdf(Quantity::GammaMax, &[x], &c).unwrap()[0].1, count);
}

#[test]
fn ks_distance_handles_ties() {
    let mut s = vec![1.0, 1.0, 1.0, 1.0];
    let d = ks_distance(&mut s, |x| Ok(if x < 1.0 { 0.0 } else { 1.0 })).unwrap();
    assert_eq!(d, 1.0);
    let mut u: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
    let d = ks_distance(&mut u, Ok).unwrap();
    assert_relative_eq!(d, 0.005, max_relative = 1e-9);
    assert!(ks_distance(&mut [], Ok).is_err());
}

#[test]
fn hd_ccdf_within_three_sigma() {
    let p = eq(10.0, 0.2);
    let c = SimConfig::new(p, 1_000_000, 21).unwrap();
    // Pr(√(γH+1) − 1 > 1) is one minus the outage at R0 = 1
    let e = estimate(Metric::Outage { r0: 1.0 }, SimMode::Hd, &c).unwrap();
    let want = ccdf_hd_equiv(1.0, &p).unwrap();
    assert!(
        ((1.0 - e.mean) - want).abs() < 3.0 * e.stderr,
        "{} vs {want}",
        1.0 - e.mean
    );
}

fn cdf_gap(db: f64, eta: f64, cdf: impl Fn(f64, &SystemParams) -> f64) -> f64 {
    let p = eq(db_to_linear(db), eta);
    let c = SimConfig::new(p, 1_000_000, 8).unwrap();
    let grid: Vec<f64> = (1..=200).map(|i| i as f64 * 0.5).collect();
    let emp = empirical_cdf(Quantity::GammaMax, &grid, &c).unwrap();
    emp.iter().map(|&(x, f)| (cdf(x, &p) - f).abs()).fold(0.0, f64::max)
}

#[test]
fn empirical_cdf_matches_exact_distribution() {
    for (db, eta) in [(20.0, 0.2), (30.0, 0.05), (40.0, 0.01)] {
        let sup = cdf_gap(db, eta, |x, p| cdf_xd_exact(x, p).unwrap());
        assert!(sup < 1.628e-3, "{db} dB, eta {eta}: {sup}");
    }
}

#[test]
#[ignore = "the asymptotic CDF is itself 0.0100 from the exact distribution at 30 dB, eta = 0.2"]
fn xd_cdf_close_to_empirical() {
    let sup = cdf_gap(30.0, 0.2, |x, p| cdf_xd(x, p).unwrap().value);
    assert!(sup <= 0.01, "{sup}");
}

#[test]
fn xd_sumrate_matches_closed_form() {
    let p = eq(100.0, 0.2);
    let c = SimConfig::new(p, 1_000_000, 6).unwrap();
    let e = estimate(Metric::SumRate, SimMode::Xd, &c).unwrap();
    let a = sumrate(SumRateMode::Xd, &p, &SeriesConfig::default()).unwrap().value;
    assert_relative_eq!(a, e.mean, max_relative = 0.05);
}
