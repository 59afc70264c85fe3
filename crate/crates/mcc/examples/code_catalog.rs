//! The built-in convolutional-code catalog and default multipliers.
//!
//! Key generation needs a decodable code with known error-correcting
//! strength.  The crate ships a small catalog of maximum-free-distance
//! codes, indexed by (streams, memory); this example rebuilds each entry,
//! recomputes its free distance from scratch with the layered
//! shortest-path search, and prints the table.  It then shows the default
//! high-memory multipliers chosen for a few degrees q: staggered
//! monomials on the first n - 1 streams and the binomial 1 + x^q on the
//! last, which keeps one stream's division trivially clean while the
//! binomial supplies the memory-q term.
//!
//! Run with: cargo run --release --example code_catalog

use mcc::catalog::{code_for, default_multipliers, CATALOG};
use mcc::convcode::free_distance;

fn main() -> mcc::Result<()> {
    println!("{:<8} {:<8} {:<28} {:<6}", "streams", "memory", "generators (octal)", "d_free");
    for entry in CATALOG {
        let code = code_for(entry.n, entry.memory)?;
        let computed = free_distance(&code)?;
        assert_eq!(
            computed, entry.free_distance,
            "catalog free distance must match the recomputed value"
        );
        println!(
            "{:<8} {:<8} {:<28} {:<6}   {}",
            entry.n,
            entry.memory,
            entry.generators_octal.join(", "),
            computed,
            entry.note
        );
    }

    println!("\ndefault multipliers:");
    for (n, q) in [(2usize, 7usize), (2, 386), (4, 388)] {
        let polys = default_multipliers(n, q)?;
        let shown: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
        println!("  n = {n}, q = {q:>3}: {}", shown.join(" | "));
    }
    Ok(())
}
