//! Monte-Carlo estimation over Rayleigh fading.
//!
//! Trials are grouped into fixed leaves of [`LEAF_TRIALS`]; leaf `k` draws from
//! ChaCha stream `k` of the seed, so a trial's sample depends only on
//! `(seed, trial index)`. Leaf results are combined by a pairwise tree in leaf
//! order, which makes every estimate bit-identical for any worker count.

use crate::analytic::Modulation;
use crate::channel::{fd_pa_raw, fd_raw, hd_equiv, hd_pa_raw, hd_raw, FadingSample, SystemParams};
use crate::specfun::gaussian_q;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Trials per reproducibility unit.
pub const LEAF_TRIALS: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: SystemParams,
    pub trials: u64,
    pub seed: u64,
    /// Trials handed to one worker at a time. Does not affect results.
    pub chunk_size: usize,
}

impl SimConfig {
    pub fn new(params: SystemParams, trials: u64, seed: u64) -> Result<Self> {
        let c = SimConfig {
            params,
            trials,
            seed,
            chunk_size: 1 << 16,
        };
        c.check()?;
        Ok(c)
    }

    pub fn with_chunk_size(mut self, chunk_size: usize) -> Result<Self> {
        self.chunk_size = chunk_size;
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::precondition("SimConfig", "trials must be at least 1"));
        }
        if self.chunk_size == 0 {
            return Err(Error::precondition("SimConfig", "chunk_size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub trials: u64,
}

impl Estimate {
    fn new(mean: f64, stderr: f64, trials: u64) -> Self {
        Estimate {
            mean,
            stderr,
            ci95_low: mean - 1.96 * stderr,
            ci95_high: mean + 1.96 * stderr,
            trials,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimMode {
    #[serde(rename = "FD")]
    Fd,
    #[serde(rename = "HD")]
    Hd,
    #[serde(rename = "XD")]
    Xd,
    #[serde(rename = "FD_PA")]
    FdPa,
    #[serde(rename = "HD_PA")]
    HdPa,
    #[serde(rename = "XD_PA")]
    XdPa,
}

impl SimMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SimMode::Fd => "FD",
            SimMode::Hd => "HD",
            SimMode::Xd => "XD",
            SimMode::FdPa => "FD_PA",
            SimMode::HdPa => "HD_PA",
            SimMode::XdPa => "XD_PA",
        }
    }

    fn is_pa(&self) -> bool {
        matches!(self, SimMode::FdPa | SimMode::HdPa | SimMode::XdPa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    /// Probability that the mode's rate falls below `r0` bits/s/Hz.
    Outage {
        r0: f64,
    },
    Ser(Modulation),
    /// Mean rate in bits/s/Hz.
    SumRate,
    /// Probability that X-duplex selects full duplex.
    ModeFreq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// X-duplex SINR `max(γF, √(γH+1) − 1)`.
    GammaMax,
    GammaF,
    /// Rate-equivalent half-duplex SINR `√(γH+1) − 1`.
    GammaHdEquiv,
    /// X-duplex SINR with optimal power allocation.
    GammaXdPa,
}

/// Uniform source for one leaf.
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64, leaf: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(leaf);
        SampleStream { rng }
    }
}

/// Draws independent exponential channel gains with the means in `params`,
/// by inversion of uniforms on `[0, 1)`.
pub fn draw_sample(stream: &mut SampleStream, params: &SystemParams) -> FadingSample {
    let mut exp = |mean: f64| -> f64 { -mean * (-stream.rng.random::<f64>()).ln_1p() };
    let gamma1 = exp(params.lambda1);
    let gamma2 = exp(params.lambda2);
    let gamma_r = exp(params.lambda_r);
    FadingSample {
        gamma1,
        gamma2,
        gamma_r,
    }
}

// Rate-equivalent SINR of `mode` and whether X-duplex picked full duplex.
#[inline]
fn mode_sinr(mode: SimMode, s: &FadingSample, p: &SystemParams, total: f64) -> (f64, bool) {
    let (g1, g2, gr) = (s.gamma1, s.gamma2, s.gamma_r);
    match mode {
        SimMode::Fd => (fd_raw(g1, g2, gr, p.ps, p.pr), true),
        SimMode::Hd => (hd_equiv(hd_raw(g1, g2, p.ps, p.pr)), false),
        SimMode::Xd => {
            let fd = fd_raw(g1, g2, gr, p.ps, p.pr);
            let hd = hd_equiv(hd_raw(g1, g2, p.ps, p.pr));
            if fd >= hd {
                (fd, true)
            } else {
                (hd, false)
            }
        }
        SimMode::FdPa => (fd_pa_raw(g1, g2, gr, total), true),
        SimMode::HdPa => (hd_equiv(hd_pa_raw(g1, g2, total)), false),
        SimMode::XdPa => {
            let fd = fd_pa_raw(g1, g2, gr, total);
            let hd = hd_equiv(hd_pa_raw(g1, g2, total));
            if fd >= hd {
                (fd, true)
            } else {
                (hd, false)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn merge(a: Moments, b: Moments) -> Moments {
        Moments {
            n: a.n + b.n,
            sum: a.sum + b.sum,
            sum_sq: a.sum_sq + b.sum_sq,
        }
    }
}

fn pairwise<T: Copy + Default>(items: &[T], merge: fn(T, T) -> T) -> T {
    match items.len() {
        0 => T::default(),
        1 => items[0],
        n => {
            let (l, r) = items.split_at(n / 2);
            merge(pairwise(l, merge), pairwise(r, merge))
        }
    }
}

fn leaf_range(config: &SimConfig, leaf: u64) -> u64 {
    (config.trials - leaf * LEAF_TRIALS).min(LEAF_TRIALS)
}

fn leaves(config: &SimConfig) -> (u64, usize) {
    let n = config.trials.div_ceil(LEAF_TRIALS);
    let per_task = (config.chunk_size as u64 / LEAF_TRIALS).max(1) as usize;
    (n, per_task)
}

fn total_power(mode: SimMode, params: &SystemParams) -> Result<f64> {
    if mode.is_pa() {
        params.total_power()
    } else {
        Ok(f64::NAN)
    }
}

/// Estimates `metric` for `mode`. Probabilities carry binomial standard
/// errors, means the sample standard error.
pub fn estimate(metric: Metric, mode: SimMode, config: &SimConfig) -> Result<Estimate> {
    config.check()?;
    let params = config.params;
    let total = total_power(mode, &params)?;
    let value: Box<dyn Fn(f64, bool) -> f64 + Sync> = match metric {
        Metric::Outage { r0 } => {
            if !(r0 >= 0.0 && r0.is_finite()) {
                return Err(Error::precondition("estimate", "rate threshold must be non-negative"));
            }
            let t = r0.exp2() - 1.0;
            Box::new(move |g, _| if g < t { 1.0 } else { 0.0 })
        }
        Metric::Ser(m) => {
            let m = Modulation::new(m.a1, m.a2)?;
            Box::new(move |g, _| m.a1 * gaussian_q((2.0 * m.a2 * g).sqrt()))
        }
        Metric::SumRate => Box::new(|g, _| g.ln_1p() / std::f64::consts::LN_2),
        Metric::ModeFreq => {
            if !matches!(mode, SimMode::Xd | SimMode::XdPa) {
                return Err(Error::precondition(
                    "estimate",
                    "mode frequency is defined for XD and XD_PA only",
                ));
            }
            Box::new(|_, fd| if fd { 1.0 } else { 0.0 })
        }
    };
    let (n_leaves, per_task) = leaves(config);
    let parts: Vec<Moments> = (0..n_leaves as usize)
        .into_par_iter()
        .with_min_len(per_task)
        .map(|leaf| {
            let leaf = leaf as u64;
            let mut stream = SampleStream::new(config.seed, leaf);
            let mut m = Moments::default();
            for _ in 0..leaf_range(config, leaf) {
                let s = draw_sample(&mut stream, &params);
                let (g, fd) = mode_sinr(mode, &s, &params, total);
                let v = value(g, fd);
                m.n += 1;
                m.sum += v;
                m.sum_sq += v * v;
            }
            m
        })
        .collect();
    let m = pairwise(&parts, Moments::merge);
    let n = m.n as f64;
    let mean = m.sum / n;
    let stderr = match metric {
        Metric::Outage { .. } | Metric::ModeFreq => (mean * (1.0 - mean) / n).sqrt(),
        _ if m.n > 1 => ((m.sum_sq - n * mean * mean).max(0.0) / (n - 1.0) / n).sqrt(),
        _ => 0.0,
    };
    Ok(Estimate::new(mean, stderr, m.n))
}

fn quantity_sinr(q: Quantity, s: &FadingSample, p: &SystemParams, total: f64) -> f64 {
    match q {
        Quantity::GammaMax => mode_sinr(SimMode::Xd, s, p, total).0,
        Quantity::GammaF => mode_sinr(SimMode::Fd, s, p, total).0,
        Quantity::GammaHdEquiv => mode_sinr(SimMode::Hd, s, p, total).0,
        Quantity::GammaXdPa => mode_sinr(SimMode::XdPa, s, p, total).0,
    }
}

fn quantity_total(q: Quantity, p: &SystemParams) -> Result<f64> {
    match q {
        Quantity::GammaXdPa => p.total_power(),
        _ => Ok(f64::NAN),
    }
}

/// Empirical `Pr(γ ≤ x)` at each point of an ascending grid.
pub fn empirical_cdf(quantity: Quantity, grid: &[f64], config: &SimConfig) -> Result<Vec<(f64, f64)>> {
    config.check()?;
    if grid.is_empty() {
        return Err(Error::precondition("empirical_cdf", "grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::precondition("empirical_cdf", "grid must be sorted ascending"));
    }
    let params = config.params;
    let total = quantity_total(quantity, &params)?;
    let (n_leaves, per_task) = leaves(config);
    let counts = (0..n_leaves as usize)
        .into_par_iter()
        .with_min_len(per_task)
        .map(|leaf| {
            let leaf = leaf as u64;
            let mut stream = SampleStream::new(config.seed, leaf);
            // bins[i]: samples in (grid[i-1], grid[i]]; the last bin is above the grid.
            let mut bins = vec![0u64; grid.len() + 1];
            for _ in 0..leaf_range(config, leaf) {
                let s = draw_sample(&mut stream, &params);
                let g = quantity_sinr(quantity, &s, &params, total);
                bins[grid.partition_point(|&x| x < g)] += 1;
            }
            bins
        })
        .reduce(
            || vec![0u64; grid.len() + 1],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let n = config.trials as f64;
    let mut acc = 0u64;
    Ok(grid
        .iter()
        .zip(&counts)
        .map(|(&x, &c)| {
            acc += c;
            (x, acc as f64 / n)
        })
        .collect())
}

/// All samples of `quantity`, in trial order.
pub fn sample_quantity(quantity: Quantity, config: &SimConfig) -> Result<Vec<f64>> {
    config.check()?;
    let params = config.params;
    let total = quantity_total(quantity, &params)?;
    let (n_leaves, per_task) = leaves(config);
    Ok((0..n_leaves as usize)
        .into_par_iter()
        .with_min_len(per_task)
        .flat_map_iter(|leaf| {
            let leaf = leaf as u64;
            let mut stream = SampleStream::new(config.seed, leaf);
            (0..leaf_range(config, leaf))
                .map(|_| {
                    let s = draw_sample(&mut stream, &params);
                    quantity_sinr(quantity, &s, &params, total)
                })
                .collect::<Vec<_>>()
        })
        .collect())
}

/// Kolmogorov–Smirnov distance `sup |F̂ − F|` between the empirical
/// distribution of `samples` and `cdf`. Sorts `samples` in place.
pub fn ks_distance<F: Fn(f64) -> Result<f64>>(samples: &mut [f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::precondition("ks_distance", "no samples"));
    }
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < samples.len() {
        let x = samples[i];
        let mut j = i;
        while j < samples.len() && samples[j] == x {
            j += 1;
        }
        let f = cdf(x)?;
        d = d.max((f - i as f64 / n).abs()).max((f - j as f64 / n).abs());
        i = j;
    }
    Ok(d)
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn leaves_cover_trials() {
        let p = SystemParams::equal_power(100.0, 0.2).unwrap();
        let c = SimConfig::new(p, 10_000, 1).unwrap();
        let (n, _) = leaves(&c);
        assert_eq!(n, 3);
        assert_eq!((0..n).map(|l| leaf_range(&c, l)).sum::<u64>(), 10_000);
    }

    #[test]
    fn rejects_bad_config() {
        let p = SystemParams::equal_power(100.0, 0.2).unwrap();
        assert!(SimConfig::new(p, 0, 1).is_err());
        let c = SimConfig::new(p, 10, 1).unwrap();
        assert!(estimate(Metric::ModeFreq, SimMode::Fd, &c).is_err());
        assert!(estimate(Metric::SumRate, SimMode::XdPa, &c).is_err());
        assert!(empirical_cdf(Quantity::GammaMax, &[], &c).is_err());
        assert!(empirical_cdf(Quantity::GammaMax, &[2.0, 1.0], &c).is_err());
    }

    #[test]
    fn chunking_does_not_change_results() {
        let p = SystemParams::equal_power(316.0, 0.05).unwrap();
        let a = SimConfig::new(p, 50_000, 9).unwrap();
        let b = a.with_chunk_size(1).unwrap();
        let m = Metric::Outage { r0: 2.0 };
        assert_eq!(
            estimate(m, SimMode::Xd, &a).unwrap(),
            estimate(m, SimMode::Xd, &b).unwrap()
        );
    }
}
