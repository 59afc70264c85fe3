//! On-disk formats: keys, ciphertexts, and the plaintext text form.
//!
//! Every artifact starts with the magic "MCC1", a format version, and a
//! kind byte (0 public key, 1 private key, 2 ciphertext), so files can't
//! be confused for one another.  This example generates a key pair,
//! writes all three artifact kinds plus the human-readable plaintext
//! form, reads everything back, and verifies the round trips — including
//! that a reloaded private key still decrypts a ciphertext made with the
//! original public key.
//!
//! Run with: cargo run --example key_files

use mcc::bits::BitVec;
use mcc::catalog;
use mcc::cipher::{decrypt, encrypt};
use mcc::convcode::HighMem;
use mcc::format::{
    deserialize_key, load_ciphertext, load_plaintext, load_private, load_public, save_ciphertext,
    save_plaintext, save_private, save_public, Key,
};
use mcc::keys::{keygen, SystemParams};
use mcc::poly::Gf2Poly;
use mcc::rng::{sub_rng, Stream};

fn main() -> mcc::Result<()> {
    let dir = std::env::temp_dir().join(format!("mcc-key-files-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let crc = Gf2Poly::from_exponents(&[0, 1, 4]);
    let params = SystemParams::new(2, 2, 9, 16, 2, 0.0, crc)?;
    let code = catalog::code_for(2, 2)?;
    let multipliers = HighMem::new(catalog::default_multipliers(2, 9)?)?;
    let (pk, sk) = keygen(&params, &code, &multipliers, 42)?;

    // Write all three artifact kinds.
    let pub_path = dir.join("demo.pub");
    let priv_path = dir.join("demo.priv");
    let ct_path = dir.join("block.ct");
    let pt_path = dir.join("block.txt");
    save_public(&pk, &pub_path)?;
    save_private(&sk, &priv_path)?;

    let m = BitVec::from_bit_str("110100101101");
    let mut rng = sub_rng(1, Stream::Errors);
    let ct = encrypt(&m, &pk, &mut rng)?;
    save_ciphertext(&ct, &ct_path)?;
    save_plaintext(&m, &pt_path)?;

    for path in [&pub_path, &priv_path, &ct_path, &pt_path] {
        let len = std::fs::metadata(path)?.len();
        println!("{:>9} bytes  {}", len, path.display());
    }
    println!(
        "\nplaintext text form:\n{}",
        std::fs::read_to_string(&pt_path)?
    );

    // Read everything back and prove the round trip.
    let pk2 = load_public(&pub_path)?;
    let sk2 = load_private(&priv_path)?;
    let ct2 = load_ciphertext(&ct_path)?;
    let m2 = load_plaintext(&pt_path)?;
    assert_eq!(pk2.g, pk.g, "public matrix survives the round trip");
    assert_eq!(m2, m, "plaintext text form survives the round trip");
    assert_eq!(decrypt(&ct2, &sk2, &pk2)?, m, "reloaded keys still decrypt");

    // The kind byte lets one loader dispatch on whatever it is handed.
    match deserialize_key(&std::fs::read(&priv_path)?)? {
        Key::Private(k) => println!("dispatched: private key with K = {}", k.params.k),
        Key::Public(_) => unreachable!("the kind byte says this is a private key"),
    }

    std::fs::remove_dir_all(&dir)?;
    println!("round trips verified; cleaned up {}", dir.display());
    Ok(())
}
