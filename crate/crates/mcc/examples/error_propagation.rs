//! How polynomial division amplifies channel noise, and what that costs.
//!
//! Decryption divides each received stream by its high-memory multiplier
//! before running the Viterbi decoder.  Division is exact on a clean
//! stream, but each channel error excites the divisor's feedback taps and
//! smears into a pattern of extra errors.  This example makes that
//! concrete:
//!
//! * a single flipped bit is pushed through division by `1 + x^q` to show
//!   the periodic burst it leaves in the quotient,
//! * the average amplification alpha is measured for several multiplier
//!   shapes (pure monomials are transparent: they only delay the stream),
//! * the decoder's failure rate is modeled per sliding window and
//!   extended to a whole block.
//!
//! Run with: cargo run --release --example error_propagation

use mcc::analysis::{estimate_alpha, multi_window_success, window_failure_prob};
use mcc::convcode::HighMem;
use mcc::poly::Gf2Poly;
use mcc::rng::{sub_rng, Stream};

fn main() -> mcc::Result<()> {
    // One error entering a division by 1 + x^25: the quotient picks up a
    // copy of the error every 25 positions below the flip.
    let q = 25usize;
    let len = 200usize;
    let divisor = Gf2Poly::from_exponents(&[0, q]);
    let noisy = Gf2Poly::monomial(160); // a single channel error at position 160
    let (quotient, _) = noisy.divmod(&divisor)?;
    let burst: Vec<usize> = quotient.to_coeff_bits(len).iter_ones().collect();
    println!("single error at 160, divided by 1 + x^{q}:");
    println!("  quotient errors at {burst:?}");
    println!(
        "  (one flip became {} — one copy every {q} positions down the stream)",
        burst.len()
    );

    // Average amplification for different multiplier sets at e = 2%.
    println!("\nmeasured alpha (extra errors per ciphertext bit, e = 0.02):");
    for (label, exps) in [
        ("monomials x^100, x^200 ", vec![vec![100], vec![200]]),
        ("x^193 and 1 + x^386    ", vec![vec![193], vec![0, 386]]),
        ("1 + x^193 and 1 + x^386", vec![vec![0, 193], vec![0, 386]]),
    ] {
        let polys: Vec<Gf2Poly> = exps.iter().map(|e| Gf2Poly::from_exponents(e)).collect();
        let mult = HighMem::new(polys)?;
        let mut rng = sub_rng(7, Stream::Analysis);
        let est = estimate_alpha(&mult, 0.02, 2800, 200, &mut rng)?;
        println!("  {label}: alpha = {:.4}", est.per_bit());
    }

    // Reliability model: a memory-14 decoder survives a 44-bit window as
    // long as at most 14 of its bits are in error.  At an effective error
    // rate of 11.75% the per-window failure probability is tiny, and even
    // 500 overlapping windows still succeed ~96% of the time.
    let pf = window_failure_prob(0.1175, 44, 14)?;
    println!("\nper-window failure probability: {pf:.3e}");
    println!(
        "success over 500 windows       : {:.4}",
        multi_window_success(pf, 500)?
    );
    Ok(())
}
