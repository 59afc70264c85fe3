//! Security and reliability estimators.
//!
//! Everything here is an estimate of attacker cost or decoder behaviour:
//! Monte-Carlo calibration of the error amplification caused by dividing
//! noisy streams, closed-form information-set-decoding work factors, the
//! Gilbert-Varshamov relative distance, windowed decoding-failure models,
//! and throughput/entropy bookkeeping. The outputs are modelling aids, not
//! guarantees.

use rand::Rng;
use rayon::prelude::*;

use crate::bits::BitVec;
use crate::cipher::low_quotient_bits;
use crate::convcode::HighMem;
use crate::error::{Error, Result};
use crate::keys::SystemParams;
use crate::matrix::{vec_mul, Gf2Matrix};
use crate::poly::Gf2Poly;
use crate::rng::indexed_rng;

/// Monte-Carlo estimate of the extra errors introduced by dividing a noisy
/// stream by its multiplier.
#[derive(Clone, Debug)]
pub struct AlphaEstimate {
    /// Mean, over trials, of the total extra-error count per block.
    pub alpha_mean: f64,
    /// Mean extra-error count contributed by each stream.
    pub alpha_per_stream: Vec<f64>,
    pub trials: usize,
    /// Standard error of `alpha_mean`.
    pub std_error: f64,
    pub stream_len: usize,
    pub n: usize,
}

impl AlphaEstimate {
    /// The amplification normalized per ciphertext bit: `alpha / N` with
    /// `N = n * stream_len`.
    pub fn per_bit(&self) -> f64 {
        self.alpha_mean / (self.n * self.stream_len) as f64
    }
}

/// Estimates error amplification for a multiplier set at channel rate `e`.
///
/// Each trial draws one Bernoulli(`e`) noise stream per multiplier and
/// counts the weight of the truncated quotient. A pure delay of the same
/// degree is used as the per-stream baseline, so monomial multipliers score
/// exactly zero: shifting alone neither adds nor removes errors, and only
/// the extra taps of a denser multiplier smear them.
pub fn estimate_alpha(
    multipliers: &HighMem,
    e: f64,
    stream_len: usize,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<AlphaEstimate> {
    if !e.is_finite() || !(0.0..=1.0).contains(&e) {
        return Err(Error::InvalidParams(format!(
            "error rate must lie in [0, 1], got {e}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParams("need at least one trial".into()));
    }
    let q = multipliers.max_degree();
    if stream_len <= q {
        return Err(Error::InvalidParams(format!(
            "stream length {stream_len} is too short for degree-{q} multipliers"
        )));
    }
    let n = multipliers.len();
    let out_len = stream_len - q;
    let base: u64 = rng.gen();

    let per_trial: Vec<Vec<i64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut trng = indexed_rng(base, trial as u64);
            multipliers
                .multipliers()
                .iter()
                .map(|div| {
                    let noise: BitVec =
                        (0..stream_len).map(|_| e > 0.0 && trng.gen_bool(e)).collect();
                    let full = low_quotient_bits(&noise, div, out_len).weight() as i64;
                    let delay = Gf2Poly::monomial(div.degree().expect("nonzero"));
                    let baseline =
                        low_quotient_bits(&noise, &delay, out_len).weight() as i64;
                    full - baseline
                })
                .collect()
        })
        .collect();

    let totals: Vec<f64> = per_trial.iter().map(|t| t.iter().sum::<i64>() as f64).collect();
    let alpha_mean = totals.iter().sum::<f64>() / trials as f64;
    let variance = if trials > 1 {
        totals.iter().map(|t| (t - alpha_mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    let alpha_per_stream = (0..n)
        .map(|j| per_trial.iter().map(|t| t[j] as f64).sum::<f64>() / trials as f64)
        .collect();
    Ok(AlphaEstimate {
        alpha_mean,
        alpha_per_stream,
        trials,
        std_error: (variance / trials as f64).sqrt(),
        stream_len,
        n,
    })
}

/// Channel rate seen by the trellis decoder: `(e·N + alpha) / N`, the
/// injected rate plus `alpha` division-amplification errors spread over an
/// `n_len`-bit block.
pub fn effective_error_rate(e: f64, alpha: f64, n_len: usize) -> Result<f64> {
    if n_len == 0 {
        return Err(Error::InvalidParams(
            "block length must be positive".into(),
        ));
    }
    Ok((e * n_len as f64 + alpha) / n_len as f64)
}

/// The Gilbert-Varshamov relative distance: the δ in (0, 1/2) solving
/// `H(δ) = 1 - rate`, the distance a random code of that rate attains.
pub fn gilbert_delta(rate: f64) -> Result<f64> {
    if !rate.is_finite() || !(0.0..1.0).contains(&rate) || rate == 0.0 {
        return Err(Error::InvalidParams(format!(
            "code rate must lie in (0, 1), got {rate}"
        )));
    }
    let h2 = |x: f64| -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
    let target = 1.0 - rate;
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid > 0.0 && h2(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ln_binom_ratio_sum(n: usize, k: usize, t: usize) -> f64 {
    // ln[ binom(n, k) / binom(n - t, k) ] as a stable term-by-term sum.
    (1..=k)
        .map(|i| (((n - k + i) as f64) / ((n - t - k + i) as f64)).ln())
        .sum()
}

/// Log2 work factor of plain information-set decoding against an (n, k)
/// code with t errors: `binom(n, k) / (0.29 · binom(n - t, k))`, evaluated
/// entirely in the log domain.
pub fn isd_complexity(n: usize, k: usize, t: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!(
            "need 0 < k <= n, got k = {k}, n = {n}"
        )));
    }
    if t + k > n {
        return Err(Error::InvalidParams(format!(
            "t = {t} errors leave no information set in an ({n}, {k}) code"
        )));
    }
    let ln_c = ln_binom_ratio_sum(n, k, t) - 0.29f64.ln();
    Ok(ln_c / std::f64::consts::LN_2)
}

/// Quantum (Grover-style) ISD work factor: half the classical log2 cost.
pub fn qisd_complexity(n: usize, k: usize, t: usize) -> Result<f64> {
    Ok(isd_complexity(n, k, t)? / 2.0)
}

/// Ratio of two attack costs, `2^(log2_a - log2_b)`. Both inputs are log2
/// work factors, so the difference is computed exactly before
/// exponentiating; the result overflows to infinity only past 2^1024.
pub fn security_ratio(log2_a: f64, log2_b: f64) -> f64 {
    (log2_a - log2_b).exp2()
}

/// Probability that a decoding window of `window_bits` bits sees more
/// errors than the decoder can correct: the exact binomial tail
/// `P(X >= max_correctable + 1)` for `X ~ Bin(window_bits, rate)`.
pub fn window_failure_prob(rate: f64, window_bits: usize, max_correctable: usize) -> Result<f64> {
    if !rate.is_finite() || !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidParams(format!(
            "error rate must lie in [0, 1], got {rate}"
        )));
    }
    let threshold = max_correctable + 1;
    if threshold > window_bits {
        return Ok(0.0);
    }
    if rate == 0.0 {
        return Ok(0.0);
    }
    if rate == 1.0 {
        return Ok(1.0);
    }
    let (lp, lq) = (rate.ln(), (1.0 - rate).ln());
    let mut ln_binom = 0.0; // ln binom(window_bits, i), built incrementally
    let mut tail = 0.0;
    for i in 0..=window_bits {
        if i > 0 {
            ln_binom += ((window_bits - i + 1) as f64).ln() - (i as f64).ln();
        }
        if i >= threshold {
            tail += (ln_binom + i as f64 * lp + (window_bits - i) as f64 * lq).exp();
        }
    }
    Ok(tail.min(1.0))
}

/// Probability that every one of `windows` independent decoding windows
/// stays under its error budget.
pub fn multi_window_success(failure_prob: f64, windows: usize) -> Result<f64> {
    if !failure_prob.is_finite() || !(0.0..=1.0).contains(&failure_prob) {
        return Err(Error::InvalidParams(format!(
            "failure probability must lie in [0, 1], got {failure_prob}"
        )));
    }
    Ok((1.0 - failure_prob).powf(windows as f64))
}

/// Add-compare-select operations per decoded plaintext bit: `2^p` trellis
/// states, decoded once for each of the `2^l` mask-span candidates, so
/// `2^(l + p)` in total.
pub fn acs_per_bit(l: usize, memory: usize) -> Result<u64> {
    let shift = l
        .checked_add(memory)
        .and_then(|s| u32::try_from(s).ok())
        .ok_or(Error::Overflow("acs_per_bit"))?;
    1u64.checked_shl(shift).ok_or(Error::Overflow("acs_per_bit"))
}

/// Entropy (bits) of the hidden row-mask assignment: each of `rows` rows
/// independently picks one of `patterns` masking patterns.
pub fn mask_entropy_bits(rows: usize, patterns: usize) -> f64 {
    if patterns <= 1 {
        return 0.0;
    }
    rows as f64 * (patterns as f64).log2()
}

/// Uniformity diagnostics for a public matrix.
#[derive(Clone, Debug)]
pub struct ColumnStats {
    /// Mean column weight (ideal: K/2).
    pub mean_weight: f64,
    /// Sample variance of the column weights.
    pub weight_variance: f64,
    /// Largest per-column bias `|freq(1) - 1/2|` over random-message
    /// probes (0 when no probes were requested).
    pub max_linear_bias: f64,
}

/// Measures how uniformly a public matrix spreads message bits: exact
/// column-weight statistics plus `tests` random-message probes of
/// per-column output bias.
pub fn column_stats(g: &Gf2Matrix, tests: usize, rng: &mut impl Rng) -> ColumnStats {
    let cols = g.cols();
    let weights: Vec<f64> = (0..cols).map(|c| g.column_weight(c) as f64).collect();
    let mean_weight = weights.iter().sum::<f64>() / cols.max(1) as f64;
    let weight_variance = if cols > 1 {
        weights.iter().map(|w| (w - mean_weight).powi(2)).sum::<f64>() / (cols - 1) as f64
    } else {
        0.0
    };
    let mut max_linear_bias = 0.0;
    if tests > 0 {
        let mut counts = vec![0usize; cols];
        for _ in 0..tests {
            let m: BitVec = (0..g.rows()).map(|_| rng.gen_bool(0.5)).collect();
            let c = vec_mul(&m, g).expect("row length matches");
            for i in c.iter_ones() {
                counts[i] += 1;
            }
        }
        max_linear_bias = counts
            .iter()
            .map(|&c| (c as f64 / tests as f64 - 0.5).abs())
            .fold(0.0, f64::max);
    }
    ColumnStats {
        mean_weight,
        weight_variance,
        max_linear_bias,
    }
}

/// A bundle of the closed-form security and throughput estimates for one
/// parameter set.
#[derive(Clone, Debug)]
pub struct SecurityReport {
    /// Ciphertext length N.
    pub n_len: usize,
    /// Message block length K.
    pub k: usize,
    /// Code rate K/N.
    pub rate: f64,
    /// Division error amplification per bit (caller-supplied estimate).
    pub alpha_per_bit: f64,
    /// Channel rate the decoder effectively faces.
    pub effective_rate: f64,
    /// Effective error count `round(N * effective_rate)` used for ISD.
    pub t_effective: usize,
    /// Gilbert-Varshamov relative distance at rate K/N.
    pub delta_over_n: f64,
    /// Log2 classical ISD work factor at (N, K, t_effective).
    pub log2_c_isd: f64,
    /// Log2 quantum ISD work factor.
    pub log2_c_qisd: f64,
    /// Entropy of the row-mask assignment.
    pub mask_entropy_bits: f64,
    /// Trellis add-compare-select operations per decoded bit.
    pub acs_per_bit: u64,
}

impl SecurityReport {
    /// Evaluates every closed-form estimate for `params`, given a per-bit
    /// error-amplification figure (0 for a noiseless channel, otherwise
    /// typically [`AlphaEstimate::per_bit`]).
    pub fn compute(params: &SystemParams, alpha_per_bit: f64) -> Result<SecurityReport> {
        params.validate()?;
        if !alpha_per_bit.is_finite() || alpha_per_bit < 0.0 {
            return Err(Error::InvalidParams(format!(
                "alpha per bit must be non-negative, got {alpha_per_bit}"
            )));
        }
        let n_len = params.code_len();
        let k = params.k;
        let rate = k as f64 / n_len as f64;
        let effective_rate =
            effective_error_rate(params.e, alpha_per_bit * n_len as f64, n_len)?;
        let t_effective = (n_len as f64 * effective_rate).round() as usize;
        Ok(SecurityReport {
            n_len,
            k,
            rate,
            alpha_per_bit,
            effective_rate,
            t_effective,
            delta_over_n: gilbert_delta(rate)?,
            log2_c_isd: isd_complexity(n_len, k, t_effective)?,
            log2_c_qisd: qisd_complexity(n_len, k, t_effective)?,
            mask_entropy_bits: mask_entropy_bits(k, params.l),
            acs_per_bit: acs_per_bit(params.l, params.p)?,
        })
    }

    /// One `name = value` line per estimate, for logs and the CLI.
    pub fn report_lines(&self) -> Vec<String> {
        vec![
            format!("ciphertext_bits = {}", self.n_len),
            format!("message_bits = {}", self.k),
            format!("code_rate = {:.6}", self.rate),
            format!("alpha_per_bit = {:.6}", self.alpha_per_bit),
            format!("effective_error_rate = {:.6}", self.effective_rate),
            format!("t_effective = {}", self.t_effective),
            format!("gilbert_delta = {:.6}", self.delta_over_n),
            format!("log2_isd_work = {:.4}", self.log2_c_isd),
            format!("log2_quantum_isd_work = {:.4}", self.log2_c_qisd),
            format!("mask_entropy_bits = {:.4}", self.mask_entropy_bits),
            format!("acs_per_bit = {}", self.acs_per_bit),
        ]
    }
}
