//! Rate-1/n convolutional codes: encoding, trellis construction,
//! hard-decision Viterbi decoding, and free-distance search.
//!
//! # Conventions
//!
//! Generators are polynomials in ascending-degree order; the code memory `p`
//! is the largest generator degree, giving a `2^p`-state trellis. The shift
//! register value packs past inputs with the newest in bit 0, so the full
//! transition register is `(state << 1) | input` and output `j` is the parity
//! of `taps_j AND register`.
//!
//! Blocks are always terminated: a length-`K` message is followed by `p`
//! zeros that drive the encoder back to the all-zero state, and the decoder
//! only considers paths that end there.

use crate::bits::{interleave, BitVec};
use crate::error::{Error, Result};
use crate::matrix::Gf2Matrix;
use crate::poly::Gf2Poly;

/// Largest supported code memory: `2^16` trellis states.
pub const MAX_MEMORY: usize = 16;

/// A rate-1/n convolutional code defined by its generator polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCode {
    gens: Vec<Gf2Poly>,
    memory: usize,
}

impl ConvCode {
    /// Validates and wraps a generator set.
    ///
    /// Requires at least two generators (rate 1/n with n ≥ 2), all nonzero,
    /// and at least one with a nonzero constant term so the code is
    /// delay-free.
    pub fn new(gens: Vec<Gf2Poly>) -> Result<Self> {
        if gens.len() < 2 {
            return Err(Error::InvalidParams(
                "a rate-1/n code needs at least two generators".into(),
            ));
        }
        if gens.iter().any(Gf2Poly::is_zero) {
            return Err(Error::InvalidParams(
                "generator polynomials must be nonzero".into(),
            ));
        }
        if !gens.iter().any(|g| g.coeff(0)) {
            return Err(Error::InvalidParams(
                "at least one generator needs a nonzero constant term".into(),
            ));
        }
        let memory = gens.iter().filter_map(Gf2Poly::degree).max().unwrap_or(0);
        Ok(ConvCode { gens, memory })
    }

    /// Builds a code from octal generator notation (see
    /// [`Gf2Poly::from_octal`]).
    pub fn from_octal(octals: &[&str]) -> Result<Self> {
        let gens = octals
            .iter()
            .map(|s| Gf2Poly::from_octal(s))
            .collect::<Result<Vec<_>>>()?;
        ConvCode::new(gens)
    }

    /// Number of output streams n.
    pub fn n(&self) -> usize {
        self.gens.len()
    }

    /// Code memory p (largest generator degree).
    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn generators(&self) -> &[Gf2Poly] {
        &self.gens
    }

    /// Encodes a message of any length K into a terminated codeword of
    /// length `n(K + p)`: the interleaving of the products `m(x) · g_j(x)`.
    pub fn encode(&self, m: &BitVec) -> BitVec {
        let k = m.len();
        let mp = Gf2Poly::from_coeffs(m.clone());
        let streams: Vec<BitVec> = self
            .gens
            .iter()
            .map(|g| mp.mul(g).to_coeff_bits(k + self.memory))
            .collect();
        interleave(&streams).expect("equal-length streams by construction")
    }

    /// The finite K-row scalar generator matrix of this code.
    pub fn scalar_generator(&self, k: usize) -> Gf2Matrix {
        build_scalar_generator(&self.gens, k).expect("validated generator set")
    }
}

/// Builds the K-row scalar generator matrix of an arbitrary polynomial set.
///
/// With `d` the largest degree, the matrix has `n(K + d)` columns; row 0
/// holds the interleaved coefficient blocks `g_0 g_1 … g_d` (block `t` is
/// the degree-`t` coefficient of each polynomial), and each later row is the
/// previous one shifted right by `n` positions.
pub fn build_scalar_generator(gens: &[Gf2Poly], k: usize) -> Result<Gf2Matrix> {
    if gens.is_empty() {
        return Err(Error::InvalidParams(
            "scalar generator needs at least one polynomial".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidParams(
            "scalar generator needs at least one row".into(),
        ));
    }
    let n = gens.len();
    let d = gens.iter().filter_map(Gf2Poly::degree).max().unwrap_or(0);
    let mut m = Gf2Matrix::zeros(k, n * (k + d));
    for r in 0..k {
        for (j, g) in gens.iter().enumerate() {
            for i in g.coeffs().iter_ones() {
                m.set(r, n * (r + i) + j, true);
            }
        }
    }
    Ok(m)
}

/// State-transition tables for a code, shared read-only by decoders.
#[derive(Clone, Debug)]
pub struct Trellis {
    n: usize,
    memory: usize,
    states: usize,
    /// Packed output bits per full register value (`2^(p+1)` entries).
    outputs: Vec<u32>,
}

impl Trellis {
    pub fn new(code: &ConvCode) -> Result<Trellis> {
        let p = code.memory();
        if p > MAX_MEMORY {
            return Err(Error::StateBudget {
                memory: p,
                limit: MAX_MEMORY,
            });
        }
        let n = code.n();
        let taps: Vec<u32> = code
            .gens
            .iter()
            .map(|g| {
                let mut t = 0u32;
                for i in g.coeffs().iter_ones() {
                    t |= 1 << i;
                }
                t
            })
            .collect();
        let regs = 1usize << (p + 1);
        let mut outputs = vec![0u32; regs];
        for (reg, out) in outputs.iter_mut().enumerate() {
            for (j, &t) in taps.iter().enumerate() {
                *out |= ((reg as u32 & t).count_ones() & 1) << j;
            }
        }
        Ok(Trellis {
            n,
            memory: p,
            states: 1 << p,
            outputs,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Transition from `state` on input bit `b`: `(next_state, outputs)`,
    /// with the n output bits packed little-endian.
    pub fn step(&self, state: u32, b: u8) -> (u32, u32) {
        let reg = ((state as usize) << 1) | b as usize;
        ((reg & (self.states - 1)) as u32, self.outputs[reg])
    }

    #[inline]
    fn branch_weight(&self, reg: usize, recv: u32) -> u32 {
        (self.outputs[reg] ^ recv).count_ones()
    }
}

/// Result of one terminated Viterbi decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Decoded input sequence of length `K + p`, including the `p` zero
    /// tail bits that terminate the trellis.
    pub info: BitVec,
    /// Re-encoded codeword of the decoded message.
    pub codeword: BitVec,
    /// Hamming distance between `codeword` and the decoder input.
    pub metric: usize,
}

/// Hard-decision maximum-likelihood decoding of a terminated block.
///
/// `received` must have length `n(K + p)` for some `K ≥ 1`. Returns the
/// message whose terminated codeword is nearest to `received`; ties prefer
/// the path whose earliest differing input bit is 0, making the outcome
/// deterministic.
pub fn viterbi_decode(received: &BitVec, code: &ConvCode) -> Result<DecodeOutcome> {
    let trellis = Trellis::new(code)?;
    viterbi_decode_with(&trellis, code, received)
}

/// Decoding against a prebuilt trellis (for running many decodes of the
/// same code, possibly concurrently).
pub fn viterbi_decode_with(
    trellis: &Trellis,
    code: &ConvCode,
    received: &BitVec,
) -> Result<DecodeOutcome> {
    let n = trellis.n;
    let p = trellis.memory;
    if !received.len().is_multiple_of(n) {
        return Err(Error::DimensionMismatch(format!(
            "received length {} is not a multiple of n = {n}",
            received.len()
        )));
    }
    let segments = received.len() / n;
    if segments <= p {
        return Err(Error::InvalidParams(format!(
            "received block of {segments} segments cannot terminate a memory-{p} code"
        )));
    }
    let k = segments - p;

    let recv_at = |t: usize| -> u32 {
        let mut r = 0u32;
        for j in 0..n {
            r |= (received.get(t * n + j) as u32) << j;
        }
        r
    };

    let mut info = BitVec::zeros(segments);
    let metric;

    if p == 0 {
        // Memoryless code: each segment is decided independently.
        let mut total = 0u32;
        for t in 0..segments {
            let recv = recv_at(t);
            let d0 = trellis.branch_weight(0, recv);
            let d1 = trellis.branch_weight(1, recv);
            if d1 < d0 {
                info.set(t, true);
                total += d1;
            } else {
                total += d0;
            }
        }
        metric = total as usize;
    } else {
        let states = trellis.states;
        let half = states >> 1;
        const INF: u32 = u32::MAX;
        let mut cur = vec![INF; states];
        let mut nxt = vec![INF; states];
        cur[0] = 0;
        // survivor decision bits, one per (segment, state)
        let mut decisions = vec![0u64; (segments * states).div_ceil(64)];

        for t in 0..segments {
            let recv = recv_at(t);
            let tail = t >= k; // termination: only input 0 from here on
            for (s, slot) in nxt.iter_mut().enumerate() {
                if tail && s & 1 == 1 {
                    *slot = INF;
                    continue;
                }
                let c0 = match cur[s >> 1] {
                    INF => INF,
                    m => m + trellis.branch_weight(s, recv),
                };
                let c1 = match cur[(s >> 1) | half] {
                    INF => INF,
                    m => m + trellis.branch_weight(s | states, recv),
                };
                if c0 <= c1 {
                    *slot = c0;
                } else {
                    *slot = c1;
                    let bit = t * states + s;
                    decisions[bit / 64] |= 1 << (bit % 64);
                }
            }
            std::mem::swap(&mut cur, &mut nxt);
        }

        metric = cur[0] as usize;
        let mut s = 0usize;
        for t in (0..segments).rev() {
            let bit = t * states + s;
            let d = decisions[bit / 64] >> (bit % 64) & 1 == 1;
            if s & 1 == 1 {
                info.set(t, true);
            }
            s = (s >> 1) | if d { half } else { 0 };
        }
        debug_assert_eq!(s, 0, "survivor path must start at the zero state");
    }

    let codeword = code.encode(&info.slice(0, k));
    debug_assert_eq!(codeword.hamming(received), metric);
    Ok(DecodeOutcome {
        info,
        codeword,
        metric,
    })
}

/// Minimum Hamming weight over all nonzero terminated codewords, found by
/// per-state shortest-path relaxation over excursions that leave the zero
/// state and later remerge with it (bounded by `4(p+1)` segments).
pub fn free_distance(code: &ConvCode) -> Result<usize> {
    let trellis = Trellis::new(code)?;
    let p = trellis.memory;
    if p == 0 {
        // No memory: segments are independent, so the lightest nonzero
        // codeword is a single input-1 segment.
        return Ok(trellis.outputs[1].count_ones() as usize);
    }
    let states = trellis.states;
    let half = states >> 1;
    let close_w = trellis.outputs[states].count_ones() as usize;
    const INF: usize = usize::MAX;

    let mut best = vec![INF; states];
    best[1] = trellis.outputs[1].count_ones() as usize; // diverge with input 1
    let mut dfree = INF;
    for _ in 1..4 * (p + 1) {
        if best[half] != INF {
            dfree = dfree.min(best[half] + close_w);
        }
        let mut nxt = vec![INF; states];
        for (s, &w) in best.iter().enumerate().skip(1) {
            if w == INF {
                continue;
            }
            for b in 0..2usize {
                let reg = (s << 1) | b;
                let ns = reg & (states - 1);
                if ns == 0 {
                    continue; // remerge handled as a closure, not a pass-through
                }
                let cand = w + trellis.branch_weight(reg, 0) as usize;
                if cand < nxt[ns] {
                    nxt[ns] = cand;
                }
            }
        }
        best = nxt;
    }
    if best[half] != INF {
        dfree = dfree.min(best[half] + close_w);
    }
    if dfree == INF {
        return Err(Error::InvalidParams(
            "no remerging path found within the segment bound".into(),
        ));
    }
    Ok(dfree)
}

/// A set of high-memory multiplier polynomials, one per code stream.
///
/// These multiply the generator polynomials during key construction and are
/// divided back out during decryption.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighMem {
    multipliers: Vec<Gf2Poly>,
    q: usize,
}

impl HighMem {
    /// Validates and wraps a multiplier set: nonempty, all nonzero.
    pub fn new(multipliers: Vec<Gf2Poly>) -> Result<Self> {
        if multipliers.is_empty() {
            return Err(Error::InvalidParams(
                "multiplier set must not be empty".into(),
            ));
        }
        if multipliers.iter().any(Gf2Poly::is_zero) {
            return Err(Error::InvalidParams(
                "multiplier polynomials must be nonzero".into(),
            ));
        }
        let q = multipliers
            .iter()
            .filter_map(Gf2Poly::degree)
            .max()
            .unwrap_or(0);
        Ok(HighMem { multipliers, q })
    }

    /// Builds a set from per-stream exponent lists, e.g. `[[193], [0, 386]]`
    /// for `[x^193, 1 + x^386]`.
    pub fn from_exponents(streams: &[Vec<usize>]) -> Result<Self> {
        HighMem::new(
            streams
                .iter()
                .map(|e| Gf2Poly::from_exponents(e))
                .collect(),
        )
    }

    pub fn multipliers(&self) -> &[Gf2Poly] {
        &self.multipliers
    }

    pub fn len(&self) -> usize {
        self.multipliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multipliers.is_empty()
    }

    /// Largest multiplier degree q.
    pub fn max_degree(&self) -> usize {
        self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walkthrough_code() -> ConvCode {
        ConvCode::new(vec![
            Gf2Poly::from_exponents(&[0, 2]),
            Gf2Poly::from_exponents(&[0, 1, 2]),
        ])
        .unwrap()
    }

    #[test]
    fn validation_rules() {
        assert!(ConvCode::new(vec![Gf2Poly::one()]).is_err());
        assert!(ConvCode::new(vec![Gf2Poly::one(), Gf2Poly::zero()]).is_err());
        // No constant term anywhere: pure delay.
        assert!(ConvCode::new(vec![
            Gf2Poly::monomial(1),
            Gf2Poly::monomial(2)
        ])
        .is_err());
        let c = walkthrough_code();
        assert_eq!(c.n(), 2);
        assert_eq!(c.memory(), 2);
    }

    #[test]
    fn scalar_generator_layout() {
        // Generators [1+x^2, 1+x+x^2]: coefficient blocks g0=[11] g1=[01] g2=[11].
        let m = walkthrough_code().scalar_generator(3);
        assert_eq!((m.rows(), m.cols()), (3, 10));
        assert_eq!(m.row(0).to_bit_string(), "1101110000");
        assert_eq!(m.row(1).to_bit_string(), "0011011100");
        assert_eq!(m.row(2).to_bit_string(), "0000110111");
    }

    #[test]
    fn encode_matches_scalar_matrix_fixture() {
        let code = walkthrough_code();
        let m = BitVec::from_bit_str("111001");
        let cw = code.encode(&m);
        assert_eq!(cw.to_bit_string(), "1110011011110111");
        let via_matrix =
            crate::matrix::vec_mul(&m, &code.scalar_generator(6)).unwrap();
        assert_eq!(cw, via_matrix);
    }

    #[test]
    fn encode_zero_is_zero() {
        let code = walkthrough_code();
        assert_eq!(code.encode(&BitVec::zeros(6)).weight(), 0);
    }

    #[test]
    fn trellis_state_counts() {
        assert_eq!(Trellis::new(&walkthrough_code()).unwrap().state_count(), 4);
        let big = ConvCode::from_octal(&["2327", "2313", "2671", "3175"]).unwrap();
        assert_eq!(Trellis::new(&big).unwrap().state_count(), 1024);
        let tiny = ConvCode::from_octal(&["1", "1"]).unwrap();
        assert_eq!(Trellis::new(&tiny).unwrap().state_count(), 1);
    }

    #[test]
    fn trellis_zero_state_emits_zero() {
        let t = Trellis::new(&walkthrough_code()).unwrap();
        assert_eq!(t.step(0, 0), (0, 0));
    }

    #[test]
    fn budget_is_enforced() {
        let mut gens = vec![Gf2Poly::from_exponents(&[0, MAX_MEMORY + 1])];
        gens.push(Gf2Poly::one());
        let code = ConvCode::new(gens).unwrap();
        assert!(matches!(
            Trellis::new(&code),
            Err(Error::StateBudget { .. })
        ));
    }

    #[test]
    fn viterbi_walkthrough_candidate() {
        let code = walkthrough_code();
        let d3 = BitVec::from_bit_str("0111100010101100");
        let out = viterbi_decode(&d3, &code).unwrap();
        assert_eq!(out.metric, 2);
        assert_eq!(out.info.to_bit_string(), "11011000");
        assert_eq!(out.codeword.hamming(&d3), 2);
    }

    #[test]
    fn viterbi_all_walkthrough_metrics() {
        let code = walkthrough_code();
        let expected = [
            ("0000011101010011", 3),
            ("0101001000000110", 3),
            ("0010110111111001", 4),
            ("0111100010101100", 2),
        ];
        for (s, want) in expected {
            let out = viterbi_decode(&BitVec::from_bit_str(s), &code).unwrap();
            assert_eq!(out.metric, want, "candidate {s}");
        }
    }

    #[test]
    fn viterbi_clean_and_single_flip() {
        let code = walkthrough_code();
        let m = BitVec::from_bit_str("101101");
        let cw = code.encode(&m);
        let out = viterbi_decode(&cw, &code).unwrap();
        assert_eq!(out.metric, 0);
        assert_eq!(out.info.slice(0, 6), m);
        for i in 0..cw.len() {
            let mut noisy = cw.clone();
            noisy.set(i, !noisy.get(i));
            let out = viterbi_decode(&noisy, &code).unwrap();
            assert_eq!(out.metric, 1, "flip at {i}");
            assert_eq!(out.info.slice(0, 6), m, "flip at {i}");
        }
    }

    #[test]
    fn viterbi_memoryless_code() {
        let code = ConvCode::from_octal(&["1", "1"]).unwrap();
        // Repetition pairs: second segment is a tie broken toward 0.
        let out = viterbi_decode(&BitVec::from_bit_str("1101"), &code).unwrap();
        assert_eq!(out.metric, 1);
        assert_eq!(out.info.to_bit_string(), "10");
    }

    #[test]
    fn viterbi_rejects_bad_lengths() {
        let code = walkthrough_code();
        assert!(viterbi_decode(&BitVec::zeros(7), &code).is_err());
        assert!(viterbi_decode(&BitVec::zeros(4), &code).is_err());
    }

    #[test]
    fn free_distances_of_known_codes() {
        assert_eq!(free_distance(&walkthrough_code()).unwrap(), 5);
        let rep = ConvCode::from_octal(&["1", "1"]).unwrap();
        assert_eq!(free_distance(&rep).unwrap(), 2);
        let classic = ConvCode::from_octal(&["133", "171"]).unwrap();
        assert_eq!(free_distance(&classic).unwrap(), 10);
    }

    #[test]
    fn free_distance_high_memory_codes() {
        // Memory-10 rate-1/4 set: its lightest codeword is the impulse
        // response, whose weight is the sum of the generator weights.
        let r4 = ConvCode::from_octal(&["2327", "2313", "2671", "3175"]).unwrap();
        assert_eq!(free_distance(&r4).unwrap(), 28);
        let w: usize = r4.generators().iter().map(Gf2Poly::weight).sum();
        assert_eq!(w, 28);
        // Memory-14 pair from the built-in catalog.
        let r2 = ConvCode::from_octal(&["44635", "53637"]).unwrap();
        assert_eq!(free_distance(&r2).unwrap(), 17);
    }

    #[test]
    fn high_mem_accessors() {
        let hm = HighMem::from_exponents(&[vec![193], vec![0, 386]]).unwrap();
        assert_eq!(hm.len(), 2);
        assert_eq!(hm.max_degree(), 386);
        assert!(HighMem::new(vec![]).is_err());
        assert!(HighMem::new(vec![Gf2Poly::zero()]).is_err());
    }
}
