//! A small catalog of known-good rate-1/n convolutional codes, indexed by
//! (streams, memory), plus default high-memory multiplier sets.

use crate::convcode::ConvCode;
use crate::error::{Error, Result};
use crate::poly::Gf2Poly;

/// One catalog row: a generator set with its free distance.
#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub n: usize,
    pub memory: usize,
    pub generators_octal: &'static [&'static str],
    pub free_distance: usize,
    pub note: &'static str,
}

/// Built-in generator sets. Free distances are verified by the test suite
/// against [`crate::convcode::free_distance`].
pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        n: 2,
        memory: 2,
        generators_octal: &["5", "7"],
        free_distance: 5,
        note: "textbook 4-state rate-1/2 code; used by the worked example",
    },
    CatalogEntry {
        n: 2,
        memory: 6,
        generators_octal: &["133", "171"],
        free_distance: 10,
        note: "the classic 64-state rate-1/2 code from satellite telemetry",
    },
    CatalogEntry {
        n: 4,
        memory: 10,
        generators_octal: &["2327", "2313", "2671", "3175"],
        free_distance: 28,
        note: "1024-state rate-1/4 set for low-rate, high-distance operation",
    },
    CatalogEntry {
        n: 2,
        memory: 14,
        generators_octal: &["44635", "53637"],
        free_distance: 17,
        note: "16384-state rate-1/2 pair found by randomized distance search",
    },
];

/// Finds the catalog entry for a (streams, memory) pair, if one exists.
pub fn lookup(n: usize, memory: usize) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.n == n && e.memory == memory)
}

/// Builds the cataloged code for a (streams, memory) pair.
pub fn code_for(n: usize, memory: usize) -> Result<ConvCode> {
    let entry = lookup(n, memory).ok_or_else(|| {
        Error::InvalidParams(format!(
            "no cataloged generator set for n = {n}, memory = {memory}; \
             supply generators explicitly"
        ))
    })?;
    ConvCode::from_octal(entry.generators_octal)
}

/// Default multiplier set for n streams with largest degree `q`: sparse
/// monomials `x^(q(j+1)/n)` staggered across the block for the first n−1
/// streams, and the binomial `1 + x^q` on the last.
pub fn default_multipliers(n: usize, q: usize) -> Result<Vec<Gf2Poly>> {
    if n < 2 {
        return Err(Error::InvalidParams(
            "multiplier sets are defined for n >= 2 streams".into(),
        ));
    }
    if q == 0 {
        return Err(Error::InvalidParams(
            "multiplier degree q must be at least 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n - 1 {
        out.push(Gf2Poly::monomial(q * (j + 1) / n));
    }
    out.push(Gf2Poly::from_exponents(&[0, q]));
    Ok(out)
}
