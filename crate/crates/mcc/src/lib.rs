//! Masked convolutional-code public-key encryption.
//!
//! This crate implements a code-based public-key cryptosystem built from
//! rate-1/n convolutional codes. The public key is a scrambled, masked, and
//! permuted generator matrix of a code whose generators are hidden products
//! of a short polynomial (the decodable part) and a long one (the
//! high-memory part). Encryption is matrix multiplication plus deliberate
//! channel noise; decryption undoes the permutation, searches the small
//! linear span of the masking rows, divides out the high-memory part, and
//! runs a Viterbi decoder over the surviving candidates.
//!
//! Modules:
//! - [`bits`], [`poly`], [`matrix`]: GF(2) bit vectors, polynomials, and
//!   dense matrices.
//! - [`convcode`]: convolutional encoding, trellises, Viterbi decoding,
//!   free-distance search.
//! - [`catalog`]: known-good generator sets indexed by (streams, memory).
//! - [`keys`]: parameters, masking, scramblers, and key generation.
//! - [`cipher`]: encryption, decryption, and the block integrity check.
//! - [`analysis`]: security and reliability estimators.
//! - [`format`]: key, ciphertext, and plaintext file formats.
//! - [`demo`]: a fully worked single-block decryption example.
//! - [`rng`]: deterministic sub-stream derivation from a single seed.
//! - [`error`]: the crate-wide error type.

pub mod analysis;
pub mod bits;
pub mod catalog;
pub mod cipher;
pub mod convcode;
pub mod demo;
pub mod error;
pub mod format;
pub mod keys;
pub mod matrix;
pub mod poly;
pub mod rng;

pub use analysis::{
    acs_per_bit, column_stats, effective_error_rate, estimate_alpha, gilbert_delta,
    isd_complexity, mask_entropy_bits, multi_window_success, qisd_complexity,
    security_ratio, window_failure_prob, AlphaEstimate, ColumnStats, SecurityReport,
};
pub use bits::{deinterleave, interleave, BitVec};
pub use cipher::{
    candidate_quotients, crc_append, crc_check, decrypt, decrypt_candidates, encrypt,
    encrypt_detailed, inject_errors, unmask_candidates, CandidateResult, Ciphertext,
};
pub use convcode::{
    build_scalar_generator, free_distance, viterbi_decode, viterbi_decode_with,
    ConvCode, DecodeOutcome, HighMem, Trellis,
};
pub use error::{DecryptFailure, Error, Result};
pub use format::{deserialize_key, serialize_key, Key};
pub use keys::{
    expand_pattern, generate_mask_set, generate_scrambler, keygen, linear_span,
    reconstruct_public_matrix, MaskSet, PrivateKey, PublicKey, SystemParams,
};
pub use matrix::{vec_mul, Gf2Matrix, Permutation};
pub use poly::Gf2Poly;
