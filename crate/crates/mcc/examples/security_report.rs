//! Security and reliability estimates for the headline parameter set.
//!
//! The recommended instance uses n = 2 streams, a memory-14 decodable
//! code, degree-386 multipliers, K = 2400, and a 2% channel error rate,
//! for 5600-bit ciphertexts.  This example:
//!
//! * measures the division-amplification rate alpha by Monte Carlo
//!   (dividing noise-only streams by the multipliers and counting the
//!   extra errors that appear),
//! * derives the effective error weight an attacker must guess,
//! * prices information-set decoding (ISD) against the public code, and
//! * compares that work factor with a classic binary-Goppa instance of
//!   similar public-key size ([4096, 3556] correcting 45 errors).
//!
//! Run with: cargo run --release --example security_report

use mcc::analysis::{
    estimate_alpha, isd_complexity, qisd_complexity, security_ratio, SecurityReport,
};
use mcc::catalog;
use mcc::convcode::HighMem;
use mcc::keys::SystemParams;
use mcc::poly::Gf2Poly;
use mcc::rng::{sub_rng, Stream};

fn main() -> mcc::Result<()> {
    let crc = Gf2Poly::from_exponents(&[0, 5, 12, 16]);
    let params = SystemParams::new(2, 14, 386, 2400, 2, 0.02, crc)?;
    let multipliers = HighMem::new(catalog::default_multipliers(2, 386)?)?;

    // Alpha depends only on the multipliers and the channel rate, so it
    // can be measured without generating a full key pair.
    let mut rng = sub_rng(99, Stream::Analysis);
    let stream_len = params.k + params.p + params.q;
    let est = estimate_alpha(&multipliers, params.e, stream_len, 400, &mut rng)?;
    println!(
        "alpha estimate: {:.4} extra errors per ciphertext bit ({} trials, std err {:.4})",
        est.per_bit(),
        est.trials,
        est.std_error
    );

    let report = SecurityReport::compute(&params, est.per_bit())?;
    println!("\n-- measured amplification at this block length --");
    for line in report.report_lines() {
        println!("{line}");
    }

    // Amplification grows with the stream length (an error at position i
    // smears into roughly i/q quotient errors), so the recommended design
    // budgets a conservative allowance: enough amplification to put the
    // effective weight at t = 400 of 5600 bits.
    let design_alpha = 400.0 / params.code_len() as f64 - params.e;
    let design = SecurityReport::compute(&params, design_alpha)?;
    println!("\n-- conservative design operating point --");
    for line in design.report_lines() {
        println!("{line}");
    }

    // Head-to-head with a binary-Goppa McEliece instance of comparable
    // public-key size.  Work factors are reported as log2(bit operations).
    println!();
    let goppa = isd_complexity(4096, 3556, 45)?;
    let here = design.log2_c_isd;
    println!("log2 ISD work, Goppa [4096, 3556, 45]: {goppa:.1}");
    println!("log2 ISD work, this system at t = 400: {here:.1}");
    println!(
        "advantage: {:.2e} times more ISD work for the same-order key size",
        security_ratio(here, goppa)
    );
    println!(
        "quantum ISD (square-root regime)      : 2^{:.1} vs 2^{:.1}",
        qisd_complexity(params.code_len(), params.k, design.t_effective)?,
        qisd_complexity(4096, 3556, 45)?
    );
    Ok(())
}
