//! Acceptance gate: one test per shipped claim, each printing a summary
//! line. Run `cargo test --test acceptance` for the full checklist.

use std::time::Instant;

use mcc::analysis::{
    acs_per_bit, column_stats, estimate_alpha, gilbert_delta, isd_complexity, mask_entropy_bits,
    multi_window_success, qisd_complexity, window_failure_prob,
};
use mcc::bits::{interleave, BitVec};
use mcc::catalog;
use mcc::cipher::{candidate_quotients, decrypt, encrypt, unmask_candidates};
use mcc::convcode::{build_scalar_generator, viterbi_decode, ConvCode, HighMem};
use mcc::demo::{
    run_demo, walkthrough_code, walkthrough_mask, walkthrough_multipliers, walkthrough_received,
};
use mcc::keys::{keygen, reconstruct_public_matrix, SystemParams};
use mcc::matrix::vec_mul;
use mcc::poly::Gf2Poly;
use mcc::rng::{indexed_rng, sub_rng, Stream};
use rand::Rng;

fn random_bits(len: usize, rng: &mut impl Rng) -> BitVec {
    let mut v = BitVec::zeros(len);
    for i in 0..len {
        v.set(i, rng.gen());
    }
    v
}

fn log2_of(mantissa: f64, exp10: i32) -> f64 {
    mantissa.log2() + exp10 as f64 * 10f64.log2()
}

/// Relative deviation of a log2-domain work factor from a reference value
/// given as mantissa * 10^exp10.
fn rel_dev(log2_value: f64, mantissa: f64, exp10: i32) -> f64 {
    (log2_value - log2_of(mantissa, exp10)).exp2() - 1.0
}

#[test]
fn criterion_01_worked_example_fixture() {
    let start = Instant::now();
    let code = walkthrough_code();
    let multipliers = walkthrough_multipliers();
    let mask = walkthrough_mask();
    let c_tilde = walkthrough_received();

    // The four per-stream divisions, quotient and remainder, bit-exact.
    // Stream 0 divides by 1 + x^7, stream 1 by x^7; each stream has a
    // plain and a complemented variant.
    let stream0 = mcc::bits::deinterleave(&c_tilde, 2, 0).unwrap();
    let stream1 = mcc::bits::deinterleave(&c_tilde, 2, 1).unwrap();
    let mut stream0c = stream0.clone();
    stream0c.complement();
    let mut stream1c = stream1.clone();
    stream1c.complement();
    let q0 = &multipliers.multipliers()[0];
    let q1 = &multipliers.multipliers()[1];
    let cases = [
        (&stream0, q0, "00010001", Gf2Poly::from_exponents(&[3])),
        (&stream0c, q0, "01101110", Gf2Poly::from_exponents(&[0, 3])),
        (
            &stream1,
            q1,
            "00111101",
            Gf2Poly::from_exponents(&[0, 1, 2, 3, 4, 5, 6]),
        ),
        (&stream1c, q1, "11000010", Gf2Poly::zero()),
    ];
    for (bits, divisor, want_quot, want_rem) in &cases {
        let (quot, rem) = Gf2Poly::from_coeffs((*bits).clone())
            .divmod(divisor)
            .unwrap();
        assert_eq!(quot.to_coeff_bits(8).to_bit_string(), *want_quot);
        assert_eq!(rem, *want_rem);
    }

    // The four mask-span candidates produce exactly the interleavings of
    // those quotients, in span order.
    let candidates = unmask_candidates(&c_tilde, &mask);
    assert_eq!(candidates.len(), 4);
    assert_eq!(candidates[0], c_tilde);
    let quot = |s: &str| BitVec::from_bit_str(s);
    let expected = [
        interleave(&[quot("00010001"), quot("00111101")]).unwrap(),
        interleave(&[quot("00010001"), quot("11000010")]).unwrap(),
        interleave(&[quot("01101110"), quot("00111101")]).unwrap(),
        interleave(&[quot("01101110"), quot("11000010")]).unwrap(),
    ];
    for (cand, want) in candidates.iter().zip(&expected) {
        assert_eq!(&candidate_quotients(cand, &multipliers).unwrap(), want);
    }

    // Decoding the last candidate yields the expected path and metric.
    let out = viterbi_decode(&expected[3], &code).unwrap();
    assert_eq!(out.metric, 2);
    assert_eq!(out.info.to_bit_string(), "11011000");

    // End-to-end walkthrough recovers the plaintext.
    let report = run_demo(&mut std::io::sink()).unwrap();
    assert_eq!(report.metrics, vec![3, 3, 4, 2]);
    assert_eq!(report.winner_span, 3);
    assert_eq!(report.plaintext.to_bit_string(), "111001");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 01 (worked-example fixture): PASS — divisions, candidates, \
         decode metric 2 -> 11011000, plaintext 111001, in {elapsed:?}"
    );
}

#[test]
fn criterion_02_round_trip_reliability() {
    let code = catalog::code_for(2, 2).unwrap();
    let multipliers = HighMem::from_exponents(&[vec![3], vec![0, 7]]).unwrap();
    let crc = Gf2Poly::from_exponents(&[0, 5, 12, 16]);

    // Noiseless: every block must come back, 100 of 100.
    let params = SystemParams::new(2, 2, 7, 32, 2, 0.0, crc.clone()).unwrap();
    let (pk, sk) = keygen(&params, &code, &multipliers, 801).unwrap();
    let mut rng = sub_rng(802, Stream::Errors);
    for _ in 0..100 {
        let m = random_bits(params.message_len(), &mut rng);
        let ct = encrypt(&m, &pk, &mut rng).unwrap();
        assert_eq!(decrypt(&ct, &sk, &pk).unwrap(), m);
    }

    // At 1% channel noise: at least 190 of 200, and a failed block must
    // report failure rather than return a wrong plaintext (decrypt's only
    // error type is the failure report, so any Ok must equal the input).
    let params = SystemParams::new(2, 2, 7, 32, 2, 0.01, crc).unwrap();
    let (pk, sk) = keygen(&params, &code, &multipliers, 803).unwrap();
    let mut rng = sub_rng(804, Stream::Errors);
    let mut ok = 0usize;
    let mut failures = 0usize;
    for _ in 0..200 {
        let m = random_bits(params.message_len(), &mut rng);
        let ct = encrypt(&m, &pk, &mut rng).unwrap();
        match decrypt(&ct, &sk, &pk) {
            Ok(out) => {
                assert_eq!(out, m, "a recovered block must never be wrong");
                ok += 1;
            }
            Err(_) => failures += 1,
        }
    }
    assert!(ok >= 190, "only {ok}/200 noisy blocks recovered");
    println!(
        "criterion 02 (round-trip reliability): PASS — 100/100 noiseless, \
         {ok}/200 at e=0.01 ({failures} reported failures, 0 wrong blocks)"
    );
}

#[test]
fn criterion_03_isd_work_factors() {
    let goppa = isd_complexity(4096, 3556, 45).unwrap();
    assert!((goppa - 135.6999504).abs() < 1e-4, "got {goppa}");
    let dev_goppa = rel_dev(goppa, 7.06, 40);
    assert!(
        dev_goppa.abs() <= 0.01,
        "Goppa point off by {:.2}%",
        dev_goppa * 100.0
    );
    println!(
        "criterion 03: Goppa [4096, 3556, 45] -> 2^{goppa:.4} \
         ({:+.2}% vs 7.06e40) — ok",
        dev_goppa * 100.0
    );

    let mcc = isd_complexity(5600, 2400, 400).unwrap();
    assert!((mcc - 341.2378249).abs() < 1e-4, "got {mcc}");
    assert_eq!(qisd_complexity(5600, 2400, 400).unwrap(), mcc / 2.0);
    assert_eq!(qisd_complexity(4096, 3556, 45).unwrap(), goppa / 2.0);
    println!(
        "criterion 03: [5600, 2400, 400] -> 2^{mcc:.4}; quantum work factor \
         is exactly half the classical log2 at both points — ok"
    );

    let dev = rel_dev(mcc, 5.2, 102);
    assert!(
        dev.abs() <= 0.01,
        "criterion 03 (ISD reproduction): FAIL — isd_complexity(5600, 2400, 400) \
         = 2^{mcc:.4} = 5.2823e102, {:+.2}% from the 5.2e102 reference, outside \
         the 1% gate. The recomputation is exact in the log domain and the \
         companion figures all agree (Goppa point {:+.2}%, quantum relation \
         exact), so the reference value appears truncated from 5.28e102 \
         rather than rounded; a faithful recomputation cannot land within 1% \
         of the truncated figure.",
        dev * 100.0,
        dev_goppa * 100.0
    );
    println!("criterion 03 (ISD reproduction): PASS");
}

#[test]
fn criterion_04_gilbert_bound() {
    let cases = [(0.5, 0.11), (1.0 / 3.0, 0.174), (0.25, 0.215)];
    for (rho, want) in cases {
        let delta = gilbert_delta(rho).unwrap();
        assert!(
            (delta - want).abs() <= 0.002,
            "rho = {rho}: delta {delta} vs {want}"
        );
    }
    println!(
        "criterion 04 (Gilbert bound): PASS — delta/N within 0.002 of \
         0.11 / 0.174 / 0.215 at rates 1/2, 1/3, 1/4"
    );
}

#[test]
fn criterion_05_alpha_estimation() {
    // Monomial multipliers amplify nothing — exactly, on every trial
    // (mean and standard error both identically zero).
    let mono = HighMem::from_exponents(&[vec![5], vec![11]]).unwrap();
    let est = estimate_alpha(&mono, 0.04, 2000, 50, &mut indexed_rng(901, 0)).unwrap();
    assert_eq!(est.alpha_mean, 0.0);
    assert_eq!(est.std_error, 0.0);
    assert!(est.alpha_per_stream.iter().all(|&a| a == 0.0));

    // The low-rate multiplier set at e = 0.04: within 15% of 0.0775
    // extra errors per ciphertext bit.
    let start = Instant::now();
    let mults =
        HighMem::from_exponents(&[vec![0, 495, 990], vec![247], vec![743], vec![0, 990]]).unwrap();
    let est = estimate_alpha(&mults, 0.04, 12_000, 200, &mut indexed_rng(902, 0)).unwrap();
    let per_bit = est.per_bit();
    let (lo, hi) = (0.0775 * 0.85, 0.0775 * 1.15);
    assert!(
        (lo..=hi).contains(&per_bit),
        "alpha per bit {per_bit:.4} outside [{lo:.4}, {hi:.4}]"
    );
    assert_eq!(est.alpha_per_stream[1], 0.0);
    assert_eq!(est.alpha_per_stream[2], 0.0);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 05 (alpha estimation): PASS — monomials exactly 0; \
         rate-1/4 set {per_bit:.4} vs 0.0775 +-15%, 200 trials in {elapsed:?}"
    );
}

#[test]
fn criterion_06_window_reliability_model() {
    let pf = window_failure_prob(0.1175, 44, 14).unwrap();
    let dev = pf / 8.998e-5 - 1.0;
    assert!(dev.abs() <= 0.02, "window failure {pf:e} off by {dev:.4}");
    let success = multi_window_success(pf, 500).unwrap();
    assert!(
        (success - 0.956).abs() <= 0.005,
        "multi-window success {success}"
    );
    println!(
        "criterion 06 (window reliability): PASS — P(fail) = {pf:.4e} \
         ({:+.2}% vs 8.998e-5), 500-window success {success:.4}",
        dev * 100.0
    );
}

#[test]
fn criterion_07_acs_and_mask_entropy() {
    assert_eq!(acs_per_bit(5, 10).unwrap(), 32768);
    let entropy = mask_entropy_bits(2000, 5);
    assert!((entropy - 4643.9).abs() <= 0.1, "got {entropy}");
    println!(
        "criterion 07 (ACS and entropy): PASS — acs_per_bit(5, 10) = 32768, \
         mask_entropy_bits(2000, 5) = {entropy:.4}"
    );
}

#[test]
fn criterion_08_full_scale_smoke() {
    // The recommended operating point: memory-14 catalog code, q = 386,
    // K = 2400, 2% channel noise. One key, twenty blocks.
    let start = Instant::now();
    let code = catalog::code_for(2, 14).unwrap();
    let multipliers = HighMem::new(catalog::default_multipliers(2, 386).unwrap()).unwrap();
    let crc = Gf2Poly::from_exponents(&[0, 5, 12, 16]);
    let params = SystemParams::new(2, 14, 386, 2400, 2, 0.02, crc).unwrap();
    let (pk, sk) = keygen(&params, &code, &multipliers, 3001).unwrap();

    let mut rng = sub_rng(3002, Stream::Errors);
    let mut ok = 0usize;
    for trial in 0..20 {
        let m = random_bits(params.message_len(), &mut rng);
        let ct = encrypt(&m, &pk, &mut rng).unwrap();
        match decrypt(&ct, &sk, &pk) {
            Ok(out) => {
                assert_eq!(out, m, "trial {trial} returned a wrong block");
                ok += 1;
            }
            Err(e) => eprintln!("trial {trial}: {e}"),
        }
    }
    let elapsed = start.elapsed();
    assert!(ok >= 18, "only {ok}/20 full-scale blocks recovered");
    println!(
        "criterion 08 (full-scale smoke): PASS — {ok}/20 blocks at \
         N = 5600, e = 0.02 in {elapsed:?}"
    );
}

#[test]
fn criterion_09_key_structure() {
    // Full rank and exact reconstruction across several shapes and seeds.
    let crc4 = Gf2Poly::from_exponents(&[0, 1, 4]);
    let crc16 = Gf2Poly::from_exponents(&[0, 5, 12, 16]);
    let shapes: [(SystemParams, ConvCode, HighMem, u64); 3] = [
        (
            SystemParams::new(2, 2, 7, 32, 2, 0.0, crc16.clone()).unwrap(),
            catalog::code_for(2, 2).unwrap(),
            HighMem::from_exponents(&[vec![3], vec![0, 7]]).unwrap(),
            1001,
        ),
        (
            SystemParams::new(2, 2, 9, 16, 2, 0.0, crc4).unwrap(),
            catalog::code_for(2, 2).unwrap(),
            HighMem::new(catalog::default_multipliers(2, 9).unwrap()).unwrap(),
            1002,
        ),
        (
            SystemParams::new(4, 10, 97, 40, 3, 0.0, crc16.clone()).unwrap(),
            catalog::code_for(4, 10).unwrap(),
            HighMem::new(catalog::default_multipliers(4, 97).unwrap()).unwrap(),
            1003,
        ),
    ];
    for (params, code, multipliers, seed) in &shapes {
        let (pk, sk) = keygen(params, code, multipliers, *seed).unwrap();
        assert_eq!(pk.g.rank(), params.k, "public matrix must have rank K");
        assert_eq!(
            reconstruct_public_matrix(&sk).unwrap(),
            pk.g,
            "private parts must rebuild the public matrix bit-exactly"
        );
    }

    // Column-weight concentration at K = 512: the mean column weight of
    // the public matrix stays within three standard errors of K/2.
    let params = SystemParams::new(2, 6, 101, 512, 2, 0.0, crc16).unwrap();
    let code = catalog::code_for(2, 6).unwrap();
    let multipliers = HighMem::from_exponents(&[vec![0, 100], vec![0, 101]]).unwrap();
    let (pk, _) = keygen(&params, &code, &multipliers, 1004).unwrap();
    let stats = column_stats(&pk.g, 64, &mut indexed_rng(1005, 0));
    let n_cols = params.code_len() as f64;
    let se = (params.k as f64 / 4.0 / n_cols).sqrt();
    let dev = (stats.mean_weight - params.k as f64 / 2.0).abs();
    assert!(
        dev <= 3.0 * se,
        "mean column weight {:.3} deviates {dev:.3} from K/2 (3 SE = {:.3})",
        stats.mean_weight,
        3.0 * se
    );
    println!(
        "criterion 09 (key structure): PASS — rank K and exact reconstruction \
         on 3 shapes; K = 512 mean column weight {:.2} within 3 SE ({:.2}) of 256",
        stats.mean_weight,
        3.0 * se
    );
}

#[test]
fn criterion_10_oracle_equivalences() {
    // Exhaustive divide-multiply-back identity for every dividend and
    // nonzero divisor of degree <= 10.
    let polys: Vec<Gf2Poly> = (0u32..1 << 11)
        .map(|bits| Gf2Poly::from_coeffs(BitVec::from_bytes(&bits.to_le_bytes(), 11)))
        .collect();
    for divisor in &polys[1..] {
        for dividend in &polys {
            let (q, r) = dividend.divmod(divisor).unwrap();
            assert_eq!(&q.mul(divisor).add(&r), dividend);
            assert!(r.degree() < divisor.degree() || r.is_zero());
        }
    }

    // Viterbi returns the true nearest-codeword distance (checked against
    // exhaustive search over all 2^K messages).
    let mut rng = indexed_rng(1100, 0);
    let codes = [
        ConvCode::from_octal(&["5", "7"]).unwrap(),
        ConvCode::from_octal(&["13", "17"]).unwrap(),
        ConvCode::from_octal(&["5", "7", "7"]).unwrap(),
    ];
    for code in &codes {
        let k = 10usize;
        for _ in 0..3 {
            let m = random_bits(k, &mut rng);
            let mut received = code.encode(&m);
            for _ in 0..2 {
                let i = rng.gen_range(0..received.len());
                received.set(i, !received.get(i));
            }
            let brute = (0..1u32 << k)
                .map(|w| {
                    let msg = BitVec::from_bytes(&w.to_le_bytes(), k);
                    code.encode(&msg).hamming(&received)
                })
                .min()
                .unwrap();
            let out = viterbi_decode(&received, code).unwrap();
            assert_eq!(out.metric, brute, "decoder must find the nearest codeword");
        }
    }

    // Encoding by polynomial products equals encoding by the scalar
    // generator matrix.
    for k in [8usize, 33, 64] {
        let code = ConvCode::from_octal(&["13", "17"]).unwrap();
        let g = build_scalar_generator(code.generators(), k).unwrap();
        let m = random_bits(k, &mut rng);
        assert_eq!(code.encode(&m), vec_mul(&m, &g).unwrap());
    }
    println!(
        "criterion 10 (oracle equivalences): PASS — exhaustive divmod identity \
         (deg <= 10), Viterbi = exhaustive nearest codeword, polynomial and \
         matrix encodings agree"
    );
}
