//! Encryption, decryption, and the block integrity check.
//!
//! Encryption multiplies the checked message by the public matrix and flips
//! each ciphertext bit independently with the system's error rate.
//! Decryption inverts the column permutation, walks the linear span of the
//! masking patterns, divides the high-memory multipliers back out of each
//! stream, Viterbi-decodes every candidate, and picks the best-metric
//! candidate that passes the integrity check.

use rand::Rng;
use rayon::prelude::*;

use crate::bits::{deinterleave, interleave, BitVec};
use crate::convcode::{viterbi_decode_with, DecodeOutcome, Trellis};
use crate::error::{Error, Result};
pub use crate::error::DecryptFailure;
use crate::keys::{PrivateKey, PublicKey};
use crate::matrix::vec_mul;
use crate::poly::Gf2Poly;

/// An encrypted block of `N = n(K + p + q)` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub bits: BitVec,
}

impl Ciphertext {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Appends `r = deg(crc_poly)` check bits to `m`, where the check bits are
/// the remainder of `x^r · m(x)` modulo the check polynomial. The constant
/// polynomial 1 means no check: `m` is returned unchanged.
pub fn crc_append(m: &BitVec, crc_poly: &Gf2Poly) -> Result<BitVec> {
    let r = match crc_poly.degree() {
        None => return Err(Error::DivisionByZero),
        Some(0) => return Ok(m.clone()),
        Some(r) => r,
    };
    let shifted = Gf2Poly::from_coeffs(m.clone()).mul(&Gf2Poly::monomial(r));
    let rem = shifted.rem(crc_poly)?;
    let mut out = m.clone();
    let tail = rem.to_coeff_bits(r);
    for i in 0..r {
        out.push(tail.get(i));
    }
    Ok(out)
}

/// Verifies a checked block `[m | rem]`: true iff `x^r · m(x) + rem(x)` is
/// divisible by the check polynomial. Blocks shorter than r bits are
/// malformed.
pub fn crc_check(mr: &BitVec, crc_poly: &Gf2Poly) -> Result<bool> {
    let r = match crc_poly.degree() {
        None => return Err(Error::DivisionByZero),
        Some(0) => return Ok(true),
        Some(r) => r,
    };
    if mr.len() < r {
        return Err(Error::DimensionMismatch(format!(
            "checked block of {} bits cannot carry {r} check bits",
            mr.len()
        )));
    }
    let split = mr.len() - r;
    let m = Gf2Poly::from_coeffs(mr.slice(0, split));
    let rem = Gf2Poly::from_coeffs(mr.slice(split, mr.len()));
    let sum = m.mul(&Gf2Poly::monomial(r)).add(&rem);
    Ok(sum.rem(crc_poly)?.is_zero())
}

/// Flips each bit independently with probability `rate`; returns how many
/// bits were flipped.
pub fn inject_errors(bits: &mut BitVec, rate: f64, rng: &mut impl Rng) -> Result<usize> {
    if !rate.is_finite() || !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidParams(format!(
            "error rate must lie in [0, 1], got {rate}"
        )));
    }
    if rate == 0.0 {
        return Ok(0);
    }
    let mut flips = 0;
    for i in 0..bits.len() {
        if rng.gen_bool(rate) {
            bits.set(i, !bits.get(i));
            flips += 1;
        }
    }
    Ok(flips)
}

/// Encrypts a plaintext of `message_len()` bits; the ciphertext carries the
/// noise dictated by the system error rate.
pub fn encrypt(m: &BitVec, pk: &PublicKey, rng: &mut impl Rng) -> Result<Ciphertext> {
    encrypt_detailed(m, pk, rng).map(|(ct, _)| ct)
}

/// Like [`encrypt`], also reporting how many error bits were injected.
pub fn encrypt_detailed(
    m: &BitVec,
    pk: &PublicKey,
    rng: &mut impl Rng,
) -> Result<(Ciphertext, usize)> {
    pk.params.validate()?;
    if m.len() != pk.params.message_len() {
        return Err(Error::DimensionMismatch(format!(
            "plaintext must be {} bits, got {}",
            pk.params.message_len(),
            m.len()
        )));
    }
    let mr = crc_append(m, &pk.params.crc_poly)?;
    let mut c = vec_mul(&mr, &pk.g)?;
    let flips = inject_errors(&mut c, pk.params.e, rng)?;
    Ok((Ciphertext { bits: c }, flips))
}

/// Adds every span expansion of the mask set to the (un-permuted)
/// ciphertext, producing one candidate per span element in span order.
pub fn unmask_candidates(c_tilde: &BitVec, mask: &crate::keys::MaskSet) -> Vec<BitVec> {
    mask.span_expansions(c_tilde.len())
        .into_iter()
        .map(|mut exp| {
            exp.xor_assign(c_tilde);
            exp
        })
        .collect()
}

/// Divides each deinterleaved stream of a candidate by its multiplier and
/// reinterleaves the low quotient coefficients, shrinking `n(K + p + q)`
/// bits down to the `n(K + p)` bits the trellis decoder expects.
pub fn candidate_quotients(candidate: &BitVec, multipliers: &crate::convcode::HighMem) -> Result<BitVec> {
    let n = multipliers.len();
    let q = multipliers.max_degree();
    if n == 0 || !candidate.len().is_multiple_of(n) {
        return Err(Error::DimensionMismatch(format!(
            "candidate of {} bits does not split into {n} streams",
            candidate.len()
        )));
    }
    let stream_len = candidate.len() / n;
    if stream_len <= q {
        return Err(Error::InvalidParams(format!(
            "streams of {stream_len} bits are too short for degree-{q} multipliers"
        )));
    }
    let out_len = stream_len - q;
    let streams: Vec<BitVec> = (0..n)
        .map(|j| {
            let s = deinterleave(candidate, n, j).expect("validated stream split");
            low_quotient_bits(&s, &multipliers.multipliers()[j], out_len)
        })
        .collect();
    interleave(&streams)
}

/// Low `out_len` coefficients of `stream(x) / divisor(x)`; higher quotient
/// terms carry only tail noise and are dropped.
pub(crate) fn low_quotient_bits(stream: &BitVec, divisor: &Gf2Poly, out_len: usize) -> BitVec {
    let (quot, _) = Gf2Poly::from_coeffs(stream.clone())
        .divmod(divisor)
        .expect("multipliers are nonzero");
    let mut out = BitVec::zeros(out_len);
    for i in quot.coeffs().iter_ones() {
        if i < out_len {
            out.set(i, true);
        }
    }
    out
}

/// Everything the decoder learned about one span candidate.
#[derive(Clone, Debug)]
pub struct CandidateResult {
    /// Index into the span (ascending pattern-value order).
    pub span_index: usize,
    /// The trellis decode of this candidate.
    pub outcome: DecodeOutcome,
    /// The unscrambled K-bit block (plaintext plus check bits).
    pub message: BitVec,
    /// Whether the block passes the integrity check.
    pub crc_ok: bool,
}

/// Runs the full candidate pipeline — unpermute, unmask, divide, decode,
/// unscramble, check — and returns every candidate in span order.
pub fn decrypt_candidates(
    ct: &Ciphertext,
    sk: &PrivateKey,
) -> std::result::Result<Vec<CandidateResult>, DecryptFailure> {
    let params = &sk.params;
    let nn = params.code_len();
    if ct.bits.len() != nn {
        return Err(DecryptFailure::LengthMismatch {
            expected: nn,
            got: ct.bits.len(),
        });
    }
    let c_tilde = sk
        .perm
        .apply(&ct.bits, true)
        .expect("validated ciphertext length");

    // Each candidate stream is the base stream or its complement, so two
    // divisions per stream cover the whole span.
    let n = params.n;
    let k = params.k;
    let out_len = k + params.p;
    let quotients: Vec<[BitVec; 2]> = (0..n)
        .map(|j| {
            let s = deinterleave(&c_tilde, n, j).expect("N is a multiple of n");
            let divisor = &sk.multipliers.multipliers()[j];
            let plain = low_quotient_bits(&s, divisor, out_len);
            let mut flipped = s;
            flipped.complement();
            let inverted = low_quotient_bits(&flipped, divisor, out_len);
            [plain, inverted]
        })
        .collect();

    let span = sk.mask.span();
    let inputs: Vec<BitVec> = span
        .iter()
        .map(|pattern| {
            let streams: Vec<BitVec> = (0..n)
                .map(|j| quotients[j][usize::from(pattern.get(j))].clone())
                .collect();
            interleave(&streams).expect("equal quotient lengths")
        })
        .collect();

    let trellis = Trellis::new(&sk.code).expect("validated code memory");
    let results: Vec<CandidateResult> = inputs
        .into_par_iter()
        .enumerate()
        .map(|(span_index, input)| {
            let outcome = viterbi_decode_with(&trellis, &sk.code, &input)
                .expect("input length fixed by construction");
            let scrambled = outcome.info.slice(0, k);
            let message = vec_mul(&scrambled, &sk.s_inv).expect("K-bit row");
            let crc_ok = crc_check(&message, &params.crc_poly)
                .expect("validated check polynomial");
            CandidateResult {
                span_index,
                outcome,
                message,
                crc_ok,
            }
        })
        .collect();
    Ok(results)
}

/// Decrypts one block. Candidates are ranked by decoding metric (ties by
/// span order); with an integrity check active, the best-ranked passing
/// candidate wins and an all-fail outcome reports every candidate metric.
pub fn decrypt(
    ct: &Ciphertext,
    sk: &PrivateKey,
    pk: &PublicKey,
) -> std::result::Result<BitVec, DecryptFailure> {
    debug_assert_eq!(sk.params, pk.params, "key pair parameter mismatch");
    let mut results = decrypt_candidates(ct, sk)?;
    results.sort_by_key(|c| (c.outcome.metric, c.span_index));
    let checked = sk.params.r() > 0;
    let winner = if checked {
        results.iter().find(|c| c.crc_ok)
    } else {
        results.first()
    };
    match winner {
        Some(c) => Ok(c.message.slice(0, sk.params.message_len())),
        None => {
            let mut by_span = results;
            by_span.sort_by_key(|c| c.span_index);
            Err(DecryptFailure::CrcExhausted {
                metrics: by_span.iter().map(|c| c.outcome.metric).collect(),
            })
        }
    }
}
