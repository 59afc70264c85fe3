//! System parameters, masking patterns, and key generation.
//!
//! A key pair hides a decodable convolutional code inside a public generator
//! matrix `G = S · (G_PQ + G~) · R`, where `G_PQ` is the scalar generator of
//! the products of short generators and high-memory multipliers, `G~` is a
//! row mask built from periodic expansions of a few short patterns, `S` is a
//! random invertible scrambler, and `R` is a random column permutation.

use rand::Rng;

use crate::bits::BitVec;
use crate::convcode::{build_scalar_generator, ConvCode, HighMem};
use crate::error::{Error, Result};
use crate::matrix::{Gf2Matrix, Permutation};
use crate::poly::Gf2Poly;
use crate::rng::{sub_rng, Stream};

pub use crate::format::{deserialize_key, serialize_key, Key};

/// Widest supported mask pattern (and therefore stream count n).
pub const MAX_MASK_WIDTH: usize = 16;

const SCRAMBLER_ATTEMPTS: usize = 256;
const MASK_RANK_ATTEMPTS: usize = 64;

fn binom(n: u64, k: u64) -> u64 {
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Reads a pattern as an integer with stream 0 in the most significant bit,
/// the order used to make pattern listings canonical.
fn pattern_value(p: &BitVec) -> u64 {
    let n = p.len();
    (0..n).fold(0u64, |acc, j| acc | (u64::from(p.get(j)) << (n - 1 - j)))
}

fn value_to_pattern(v: u64, n: usize) -> BitVec {
    (0..n).map(|j| v >> (n - 1 - j) & 1 == 1).collect()
}

/// Repeats a length-n pattern periodically out to `len` bits, so stream `j`
/// of an interleaved codeword sees the constant bit `pattern[j]`.
pub fn expand_pattern(pattern: &BitVec, len: usize) -> BitVec {
    let n = pattern.len();
    (0..len).map(|t| pattern.get(t % n)).collect()
}

/// All distinct sums of subsets of `patterns`, sorted ascending by pattern
/// value. The result has `2^rank` elements and always starts with the
/// all-zero pattern. Returns an empty list for empty input.
pub fn linear_span(patterns: &[BitVec]) -> Vec<BitVec> {
    let Some(first) = patterns.first() else {
        return Vec::new();
    };
    let n = first.len();
    assert!(n <= 64, "linear_span supports patterns up to 64 bits");
    let mut basis = [0u64; 64];
    for p in patterns {
        assert_eq!(p.len(), n, "patterns must share one length");
        let mut v = pattern_value(p);
        while v != 0 {
            let h = 63 - v.leading_zeros() as usize;
            if basis[h] == 0 {
                basis[h] = v;
                break;
            }
            v ^= basis[h];
        }
    }
    let rows: Vec<u64> = basis.iter().copied().filter(|&b| b != 0).collect();
    let mut values: Vec<u64> = (0..1u64 << rows.len())
        .map(|combo| {
            rows.iter()
                .enumerate()
                .filter(|(i, _)| combo >> i & 1 == 1)
                .fold(0u64, |acc, (_, &b)| acc ^ b)
        })
        .collect();
    values.sort_unstable();
    values.into_iter().map(|v| value_to_pattern(v, n)).collect()
}

/// An ordered set of masking patterns over n streams, each of weight
/// `n / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskSet {
    n: usize,
    patterns: Vec<BitVec>,
}

impl MaskSet {
    /// Draws `l` distinct weight-`n/2` patterns. When `l` equals the number
    /// of such patterns the whole family is used; otherwise a uniform
    /// subset is sampled. Either way the result is kept in descending
    /// pattern-value order, the canonical listing order.
    pub fn generate(n: usize, l: usize, rng: &mut impl Rng) -> Result<MaskSet> {
        if !(2..=MAX_MASK_WIDTH).contains(&n) {
            return Err(Error::InvalidParams(format!(
                "mask width n must be in 2..={MAX_MASK_WIDTH}, got {n}"
            )));
        }
        let w = n / 2;
        let full: Vec<u64> = (0..1u64 << n)
            .rev()
            .filter(|v| v.count_ones() as usize == w)
            .collect();
        if l == 0 || l > full.len() {
            return Err(Error::InvalidParams(format!(
                "mask count l must be in 1..={}, got {l}",
                full.len()
            )));
        }
        let chosen: Vec<u64> = if l == full.len() {
            full
        } else {
            let mut idx = rand::seq::index::sample(rng, full.len(), l).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| full[i]).collect()
        };
        Ok(MaskSet {
            n,
            patterns: chosen.into_iter().map(|v| value_to_pattern(v, n)).collect(),
        })
    }

    /// Wraps externally supplied patterns, enforcing the same shape rules
    /// `generate` guarantees: uniform length in `2..=MAX_MASK_WIDTH`, weight
    /// `n/2`, no duplicates.
    pub fn from_patterns(patterns: Vec<BitVec>) -> Result<MaskSet> {
        let Some(first) = patterns.first() else {
            return Err(Error::InvalidParams("mask set must not be empty".into()));
        };
        let n = first.len();
        if !(2..=MAX_MASK_WIDTH).contains(&n) {
            return Err(Error::InvalidParams(format!(
                "mask width n must be in 2..={MAX_MASK_WIDTH}, got {n}"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &patterns {
            if p.len() != n {
                return Err(Error::InvalidParams(
                    "mask patterns must share one length".into(),
                ));
            }
            if p.weight() != n / 2 {
                return Err(Error::InvalidParams(format!(
                    "mask patterns must have weight {}, got {}",
                    n / 2,
                    p.weight()
                )));
            }
            if !seen.insert(pattern_value(p)) {
                return Err(Error::InvalidParams(
                    "mask patterns must be distinct".into(),
                ));
            }
        }
        Ok(MaskSet { n, patterns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of base patterns l.
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[BitVec] {
        &self.patterns
    }

    /// Periodic expansions of the base patterns to `len` bits.
    pub fn expansions(&self, len: usize) -> Vec<BitVec> {
        self.patterns.iter().map(|p| expand_pattern(p, len)).collect()
    }

    /// The linear span of the base patterns (see [`linear_span`]).
    pub fn span(&self) -> Vec<BitVec> {
        linear_span(&self.patterns)
    }

    /// Periodic expansions of every span element to `len` bits.
    pub fn span_expansions(&self, len: usize) -> Vec<BitVec> {
        self.span().iter().map(|p| expand_pattern(p, len)).collect()
    }
}

/// Convenience wrapper matching the module-level op naming.
pub fn generate_mask_set(n: usize, l: usize, rng: &mut impl Rng) -> Result<MaskSet> {
    MaskSet::generate(n, l, rng)
}

/// Public system parameters shared by both keys.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    /// Number of code streams n.
    pub n: usize,
    /// Decodable code memory p.
    pub p: usize,
    /// Largest high-memory multiplier degree q.
    pub q: usize,
    /// Scrambled message length K (CRC included).
    pub k: usize,
    /// Number of masking patterns l.
    pub l: usize,
    /// Channel error rate used by encryption.
    pub e: f64,
    /// Integrity-check polynomial; degree r check bits are carried inside
    /// the K message bits. The constant polynomial 1 disables the check.
    pub crc_poly: Gf2Poly,
}

impl SystemParams {
    pub fn new(
        n: usize,
        p: usize,
        q: usize,
        k: usize,
        l: usize,
        e: f64,
        crc_poly: Gf2Poly,
    ) -> Result<SystemParams> {
        let params = SystemParams {
            n,
            p,
            q,
            k,
            l,
            e,
            crc_poly,
        };
        params.validate()?;
        Ok(params)
    }

    /// Ciphertext length N = n(K + p + q).
    pub fn code_len(&self) -> usize {
        self.n * (self.k + self.p + self.q)
    }

    /// Number of integrity-check bits r (the degree of `crc_poly`).
    pub fn r(&self) -> usize {
        self.crc_poly.degree().unwrap_or(0)
    }

    /// Plaintext bits per block: K − r.
    pub fn message_len(&self) -> usize {
        self.k - self.r()
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_MASK_WIDTH).contains(&self.n) {
            return Err(Error::InvalidParams(format!(
                "stream count n must be in 2..={MAX_MASK_WIDTH}, got {}",
                self.n
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidParams("block length K must be positive".into()));
        }
        if self.p > crate::convcode::MAX_MEMORY {
            return Err(Error::StateBudget {
                memory: self.p,
                limit: crate::convcode::MAX_MEMORY,
            });
        }
        if self.q == 0 {
            return Err(Error::InvalidParams(
                "high-memory degree q must be at least 1".into(),
            ));
        }
        let total = binom(self.n as u64, (self.n / 2) as u64);
        if self.l == 0 || self.l as u64 > total {
            return Err(Error::InvalidParams(format!(
                "mask count l must be in 1..={total}, got {}",
                self.l
            )));
        }
        if !self.e.is_finite() || !(0.0..0.5).contains(&self.e) {
            return Err(Error::InvalidParams(format!(
                "channel error rate must lie in [0, 0.5), got {}",
                self.e
            )));
        }
        match self.crc_poly.degree() {
            None => {
                return Err(Error::InvalidParams(
                    "integrity polynomial must be nonzero (use 1 to disable)".into(),
                ))
            }
            Some(r) => {
                if r > 0 && !self.crc_poly.coeff(0) {
                    return Err(Error::InvalidParams(
                        "integrity polynomial needs a nonzero constant term".into(),
                    ));
                }
                if r >= self.k {
                    return Err(Error::InvalidParams(format!(
                        "integrity degree {r} leaves no plaintext bits in K = {}",
                        self.k
                    )));
                }
            }
        }
        Ok(())
    }

    /// Non-fatal advisories about unusual parameter choices.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.e > 0.0 && self.r() == 0 {
            w.push(
                "channel noise without an integrity check: a miscorrected block \
                 cannot be detected"
                    .into(),
            );
        }
        if self.e == 0.0 {
            w.push("zero channel-noise rate: ciphertexts are deterministic given the key".into());
        }
        w
    }
}

/// The published key: parameters plus the K × N generator matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PublicKey {
    pub params: SystemParams,
    pub g: Gf2Matrix,
}

impl PublicKey {
    /// Rebuilds the public key from private components.
    pub fn from_private(sk: &PrivateKey) -> Result<PublicKey> {
        Ok(PublicKey {
            params: sk.params.clone(),
            g: reconstruct_public_matrix(sk)?,
        })
    }
}

/// The private key: every component needed to invert the public map.
#[derive(Clone, Debug)]
pub struct PrivateKey {
    pub params: SystemParams,
    /// Scrambler S and its inverse.
    pub s: Gf2Matrix,
    pub s_inv: Gf2Matrix,
    /// Column permutation R.
    pub perm: Permutation,
    /// The decodable code (generators `p_j`).
    pub code: ConvCode,
    /// High-memory multipliers (`q_j`).
    pub multipliers: HighMem,
    /// Masking patterns.
    pub mask: MaskSet,
    /// The K × N row mask added to the scalar generator.
    pub g_tilde: Gf2Matrix,
}

impl PrivateKey {
    /// Assembles and validates a private key from explicit components,
    /// deriving the scrambler inverse.
    pub fn from_parts(
        params: SystemParams,
        s: Gf2Matrix,
        perm: Permutation,
        code: ConvCode,
        multipliers: HighMem,
        mask: MaskSet,
        g_tilde: Gf2Matrix,
    ) -> Result<PrivateKey> {
        params.validate()?;
        check_inner_parts(&params, &code, &multipliers)?;
        let k = params.k;
        let nn = params.code_len();
        if s.rows() != k || s.cols() != k {
            return Err(Error::DimensionMismatch(format!(
                "scrambler must be {k} x {k}, got {} x {}",
                s.rows(),
                s.cols()
            )));
        }
        if perm.len() != nn {
            return Err(Error::DimensionMismatch(format!(
                "permutation must cover {nn} columns, got {}",
                perm.len()
            )));
        }
        if mask.n() != params.n || mask.len() != params.l {
            return Err(Error::InvalidParams(format!(
                "mask set shape ({}, {}) does not match parameters ({}, {})",
                mask.n(),
                mask.len(),
                params.n,
                params.l
            )));
        }
        if g_tilde.rows() != k || g_tilde.cols() != nn {
            return Err(Error::DimensionMismatch(format!(
                "row mask must be {k} x {nn}, got {} x {}",
                g_tilde.rows(),
                g_tilde.cols()
            )));
        }
        let expansions = mask.expansions(nn);
        for i in 0..k {
            let row = g_tilde.row(i);
            if !expansions.contains(&row) {
                return Err(Error::InvalidParams(format!(
                    "row {i} of the row mask is not an expansion of a mask pattern"
                )));
            }
        }
        let s_inv = s.inverse()?;
        Ok(PrivateKey {
            params,
            s,
            s_inv,
            perm,
            code,
            multipliers,
            mask,
            g_tilde,
        })
    }
}

/// Checks that code and multipliers fit the declared (n, p, q) and that at
/// least one product attains degree p + q, so the scalar generator spans
/// exactly N columns.
fn check_inner_parts(
    params: &SystemParams,
    code: &ConvCode,
    multipliers: &HighMem,
) -> Result<()> {
    if code.n() != params.n {
        return Err(Error::InvalidParams(format!(
            "code has {} streams, parameters say {}",
            code.n(),
            params.n
        )));
    }
    if code.memory() != params.p {
        return Err(Error::InvalidParams(format!(
            "code memory {} does not match parameter p = {}",
            code.memory(),
            params.p
        )));
    }
    if multipliers.len() != params.n {
        return Err(Error::InvalidParams(format!(
            "{} multipliers for {} streams",
            multipliers.len(),
            params.n
        )));
    }
    if multipliers.max_degree() != params.q {
        return Err(Error::InvalidParams(format!(
            "largest multiplier degree {} does not match parameter q = {}",
            multipliers.max_degree(),
            params.q
        )));
    }
    let attained = code
        .generators()
        .iter()
        .zip(multipliers.multipliers())
        .any(|(g, m)| {
            g.degree().unwrap_or(0) + m.degree().unwrap_or(0) == params.p + params.q
        });
    if !attained {
        return Err(Error::InvalidParams(
            "no generator-multiplier product attains degree p + q".into(),
        ));
    }
    Ok(())
}

/// Scalar generator of the products `p_j(x) · q_j(x)`, the hidden structure
/// behind the public matrix.
pub fn product_generator(
    code: &ConvCode,
    multipliers: &HighMem,
    k: usize,
) -> Result<Gf2Matrix> {
    let prods: Vec<Gf2Poly> = code
        .generators()
        .iter()
        .zip(multipliers.multipliers())
        .map(|(g, m)| g.mul(m))
        .collect();
    build_scalar_generator(&prods, k)
}

/// Draws a uniformly random invertible K × K matrix by rejection sampling.
pub fn generate_scrambler(k: usize, rng: &mut impl Rng) -> Result<Gf2Matrix> {
    if k == 0 {
        return Err(Error::InvalidParams("scrambler size must be positive".into()));
    }
    for _ in 0..SCRAMBLER_ATTEMPTS {
        let cand = Gf2Matrix::random(k, k, rng);
        if cand.rank() == k {
            return Ok(cand);
        }
    }
    Err(Error::InvalidParams(format!(
        "no invertible scrambler found in {SCRAMBLER_ATTEMPTS} attempts"
    )))
}

/// Generates a key pair deterministically from `seed`.
///
/// Each random component (scrambler, permutation, mask selection, mask row
/// assignment) draws from its own seed-derived stream, so any one component
/// is stable under changes to the others. If the masked matrix `G_PQ + G~`
/// loses rank, the row mask is resampled (bounded number of attempts).
pub fn keygen(
    params: &SystemParams,
    code: &ConvCode,
    multipliers: &HighMem,
    seed: u64,
) -> Result<(PublicKey, PrivateKey)> {
    params.validate()?;
    check_inner_parts(params, code, multipliers)?;
    let k = params.k;
    let nn = params.code_len();

    let s = generate_scrambler(k, &mut sub_rng(seed, Stream::Scrambler))?;
    let s_inv = s.inverse()?;
    let perm = Permutation::random(nn, &mut sub_rng(seed, Stream::Permutation));
    let mask = MaskSet::generate(params.n, params.l, &mut sub_rng(seed, Stream::MaskSelect))?;

    let gpq = product_generator(code, multipliers, k)?;
    debug_assert_eq!(gpq.cols(), nn);
    let expansions = mask.expansions(nn);
    let mut rows_rng = sub_rng(seed, Stream::MaskRows);
    let mut g_tilde = None;
    for _ in 0..MASK_RANK_ATTEMPTS {
        let mut cand = Gf2Matrix::zeros(k, nn);
        for i in 0..k {
            let idx = rows_rng.gen_range(0..expansions.len());
            cand.set_row(i, &expansions[idx]);
        }
        if gpq.add(&cand)?.rank() == k {
            g_tilde = Some(cand);
            break;
        }
    }
    let g_tilde = g_tilde.ok_or(Error::RankRestoration(MASK_RANK_ATTEMPTS))?;

    let g = s.mul(&gpq.add(&g_tilde)?)?.permute_columns(&perm)?;
    let pk = PublicKey {
        params: params.clone(),
        g,
    };
    let sk = PrivateKey {
        params: params.clone(),
        s,
        s_inv,
        perm,
        code: code.clone(),
        multipliers: multipliers.clone(),
        mask,
        g_tilde,
    };
    Ok((pk, sk))
}

/// Recomputes `S · (G_PQ + G~) · R` from private components.
pub fn reconstruct_public_matrix(sk: &PrivateKey) -> Result<Gf2Matrix> {
    let gpq = product_generator(&sk.code, &sk.multipliers, sk.params.k)?;
    let masked = gpq.add(&sk.g_tilde)?;
    sk.s.mul(&masked)?.permute_columns(&sk.perm)
}
