//! Monte Carlo and exhaustive evaluation of the N-fold tau integral.

use crate::canonical::xi;
use crate::error::{Error, Result};
use crate::logval::{LogSum, LogValue};
use crate::measure::MeasureSpec;
use crate::times::TimeVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

const BATCHES: u64 = 32;

/// A tau-integral estimate with its uncertainty.
#[derive(Clone, Copy, Debug)]
pub struct McEstimate {
    pub value: LogValue,
    /// Standard error relative to |value| (batch means over 32 batches).
    /// Zero when `exact`.
    pub rel_stderr: f64,
    /// True when the measure was atomic and the sum was exhaustive.
    pub exact: bool,
}

/// ln |Delta_N(z)|^2 = sum_{i<j} 2 ln |z_i - z_j|.
fn ln_vandermonde_sq(points: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            acc += 2.0 * (points[i] - points[j]).norm().ln();
        }
    }
    acc
}

/// One configuration's weight exp(sum_l xi(t_+, z_l) - xi(t_-, conj z_l))
/// as (ln magnitude contribution, phase contribution). Under the reality
/// condition the exponent is real; the sampler asserts that and keeps the
/// sample positive by construction.
fn time_weight_exponent(t: &TimeVector, points: &[Complex64]) -> Complex64 {
    points
        .iter()
        .map(|&z| xi(&t.plus, z) - xi(&t.minus, z.conj()))
        .sum()
}

fn sample_logvalue(t: &TimeVector, points: &[Complex64], ln_base: f64) -> LogValue {
    let e = time_weight_exponent(t, points);
    if t.reality_locked {
        assert!(
            e.im.abs() <= 1e-9 * (1.0 + e.norm()),
            "reality-locked exponent has imaginary part {}",
            e.im
        );
        LogValue::from_ln(ln_base + ln_vandermonde_sq(points) + e.re)
    } else {
        LogValue::from_ln_and_phase(ln_base + ln_vandermonde_sq(points) + e.re, e.im)
    }
}

/// Importance-sampled Monte Carlo estimate of
///
/// ```text
/// tau_N = (1/N!) int |Delta_N|^2 prod_l exp(xi(t_+, z_l) - xi(t_-, conj z_l)) d_mu(z_l)
/// ```
///
/// The proposal is the Gaussian base measure for `RadialGaussian` and the
/// uniform angle for `Circle`; atomic measures are summed exhaustively (the
/// estimator degenerates to the exact finite sum, independent of
/// samples/seed). The sample count is rounded up to a multiple of 32 and
/// split into 32 batches with independent seeded streams, so the result is
/// deterministic for a fixed seed regardless of thread count.
pub fn tau_integral_mc(
    n: u32,
    measure: &MeasureSpec,
    t: &TimeVector,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::invalid("tau_integral_mc requires N >= 1"));
    }
    if samples == 0 {
        return Err(Error::invalid("tau_integral_mc requires samples >= 1"));
    }
    let ln_nfact = ln_gamma(f64::from(n) + 1.0);
    match measure {
        MeasureSpec::Discrete { points, weights } => {
            Ok(discrete_exhaustive(n, points, weights, t, ln_nfact))
        }
        MeasureSpec::RadialGaussian { c } => {
            let c = *c;
            if !(c > 0.0) {
                return Err(Error::invalid("Gaussian measure requires c > 0"));
            }
            let sigma = (0.5 / c).sqrt();
            // d_mu / proposal = pi / c per point.
            let ln_base = f64::from(n) * (std::f64::consts::PI / c).ln() - ln_nfact;
            let draw = move |rng: &mut ChaCha8Rng, buf: &mut Vec<Complex64>| {
                let normal = Normal::new(0.0, sigma).expect("valid sigma");
                buf.clear();
                for _ in 0..n {
                    let x = normal.sample(rng);
                    let y = normal.sample(rng);
                    buf.push(Complex64::new(x, y));
                }
            };
            Ok(run_batches(t, samples, seed, ln_base, draw))
        }
        MeasureSpec::Circle { radius } => {
            let radius = *radius;
            if !(radius > 0.0) {
                return Err(Error::invalid("circle measure requires radius > 0"));
            }
            // measure d_theta/(2 pi) equals the uniform proposal: ratio 1.
            let ln_base = -ln_nfact;
            let draw = move |rng: &mut ChaCha8Rng, buf: &mut Vec<Complex64>| {
                buf.clear();
                for _ in 0..n {
                    let theta: f64 = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
                    buf.push(Complex64::from_polar(radius, theta));
                }
            };
            Ok(run_batches(t, samples, seed, ln_base, draw))
        }
        MeasureSpec::RadialCustom { .. } => Err(Error::Unsupported(
            "no Monte Carlo proposal for a custom radial measure".into(),
        )),
    }
}

fn run_batches<F>(t: &TimeVector, samples: u64, seed: u64, ln_base: f64, draw: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<Complex64>) + Sync,
{
    let per_batch = samples.div_ceil(BATCHES);
    let batch_totals: Vec<LogValue> = (0..BATCHES)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let mut buf = Vec::new();
            let mut sum = LogSum::new();
            for _ in 0..per_batch {
                draw(&mut rng, &mut buf);
                sum.push(sample_logvalue(t, &buf, ln_base));
            }
            sum.total()
        })
        .collect();

    let total = batch_totals
        .iter()
        .fold(LogSum::new(), |mut acc, v| {
            acc.push(*v);
            acc
        })
        .total();
    let mean = total.div(&LogValue::from_real((per_batch * BATCHES) as f64));

    // Batch-mean standard error, taken relative to the overall mean so the
    // statistic is meaningful at any magnitude scale.
    let mut sq = 0.0;
    for bt in &batch_totals {
        let r = bt
            .div(&LogValue::from_real(per_batch as f64))
            .div(&mean)
            .to_complex();
        sq += (r - Complex64::new(1.0, 0.0)).norm_sqr();
    }
    let b = BATCHES as f64;
    let rel_stderr = (sq / (b * (b - 1.0))).sqrt();
    McEstimate {
        value: mean,
        rel_stderr,
        exact: false,
    }
}

fn discrete_exhaustive(
    n: u32,
    points: &[Complex64],
    weights: &[f64],
    t: &TimeVector,
    ln_nfact: f64,
) -> McEstimate {
    let p = points.len();
    let mut idx = vec![0usize; n as usize];
    let mut sum = LogSum::new();
    let mut buf = vec![Complex64::new(0.0, 0.0); n as usize];
    loop {
        let mut ln_w = -ln_nfact;
        for (slot, &i) in idx.iter().enumerate() {
            buf[slot] = points[i];
            ln_w += weights[i].ln();
        }
        sum.push(sample_logvalue(t, &buf, ln_w));
        // next ordered tuple
        let mut k = 0usize;
        loop {
            if k == idx.len() {
                return McEstimate {
                    value: sum.total(),
                    rel_stderr: 0.0,
                    exact: true,
                };
            }
            idx[k] += 1;
            if idx[k] < p {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Canonical partition function Z_N with background potential
/// W = -U + 2 Re xi(t_+, z), evaluated through the same estimator as
/// [`tau_integral_mc`] (identical RNG stream, hence identical output).
///
/// The two parameterizations agree only under the reality condition
/// t_{-k} = -conj(t_k); this checks the condition and asserts the pointwise
/// agreement of the weights before delegating.
pub fn partition_zn(
    n: u32,
    measure: &MeasureSpec,
    t: &TimeVector,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if !t.reality_locked || !t.satisfies_reality(1e-12) {
        return Err(Error::invalid(
            "partition_zn requires reality-locked times (t_{-k} = -conj t_k)",
        ));
    }
    // Agreement of exp(xi(t_+,z) - xi(t_-,conj z)) with exp(2 Re xi(t_+,z))
    // on a fixed probe set.
    for &z in &[
        Complex64::new(0.31, 0.47),
        Complex64::new(-1.13, 0.29),
        Complex64::new(0.71, -0.93),
    ] {
        let lhs = xi(&t.plus, z) - xi(&t.minus, z.conj());
        let rhs = Complex64::new(2.0 * xi(&t.plus, z).re, 0.0);
        if (lhs - rhs).norm() > 1e-10 * (1.0 + lhs.norm()) {
            return Err(Error::invalid(
                "tau-form and W-form weights disagree: reality condition violated",
            ));
        }
    }
    tau_integral_mc(n, measure, t, samples, seed)
}
