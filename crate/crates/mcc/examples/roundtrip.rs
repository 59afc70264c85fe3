//! Key generation, encryption, and decryption over a noisy channel.
//!
//! Uses a mid-size instance — the memory-6 rate-1/2 code (octal 133/171),
//! multipliers of degree 50, a 96-bit block with a 16-bit integrity
//! check — and pushes ten random plaintexts through encrypt/decrypt at a
//! 2% channel error rate.  For the first block it also prints the
//! per-candidate decoder results so you can see the ranking that picks
//! the winner.
//!
//! Run with: cargo run --example roundtrip

use mcc::bits::BitVec;
use mcc::catalog;
use mcc::cipher::{decrypt, decrypt_candidates, encrypt_detailed};
use mcc::convcode::HighMem;
use mcc::keys::{keygen, SystemParams};
use mcc::poly::Gf2Poly;
use mcc::rng::{sub_rng, Stream};
use rand::Rng;

fn random_bits(len: usize, rng: &mut impl Rng) -> BitVec {
    let mut v = BitVec::zeros(len);
    for i in 0..len {
        v.set(i, rng.gen());
    }
    v
}

fn main() -> mcc::Result<()> {
    // 16 check bits leave 80 plaintext bits out of K = 96.
    let crc = Gf2Poly::from_exponents(&[0, 5, 12, 16]);
    let params = SystemParams::new(2, 6, 50, 96, 2, 0.02, crc)?;
    let code = catalog::code_for(2, 6)?;
    let multipliers = HighMem::new(catalog::default_multipliers(2, 50)?)?;

    let seed = 20260816;
    let (pk, sk) = keygen(&params, &code, &multipliers, seed)?;
    println!(
        "key pair ready: N = {} ciphertext bits, {} plaintext bits per block",
        params.code_len(),
        params.message_len()
    );

    let mut rng = sub_rng(seed, Stream::Errors);
    let mut ok = 0usize;
    for trial in 0..10 {
        let m = random_bits(params.message_len(), &mut rng);
        let (ct, flips) = encrypt_detailed(&m, &pk, &mut rng)?;

        if trial == 0 {
            // Peek inside the decoder: one entry per mask-span element.
            println!("\nblock 0 injected {flips} channel errors; candidates:");
            let candidates = decrypt_candidates(&ct, &sk)?;
            for c in &candidates {
                println!(
                    "  span {:>2}: metric {:>3}, integrity check {}",
                    c.span_index,
                    c.outcome.metric,
                    if c.crc_ok { "ok" } else { "failed" }
                );
            }
        }

        match decrypt(&ct, &sk, &pk) {
            Ok(recovered) => {
                assert_eq!(recovered, m, "decryption must never return a wrong block");
                ok += 1;
            }
            Err(failure) => println!("block {trial}: reported failure ({failure})"),
        }
    }
    println!("\n{ok}/10 noisy blocks decrypted correctly");
    Ok(())
}
