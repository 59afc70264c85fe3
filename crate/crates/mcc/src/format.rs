//! Binary file formats for keys and ciphertexts, and a small text format
//! for plaintext bit strings.
//!
//! Every binary file starts with the magic `MCC1`, a format version byte,
//! and a kind byte (0 public key, 1 private key, 2 ciphertext). Multi-byte
//! integers are little-endian u32; bit vectors are packed eight bits per
//! byte, least significant bit first. Loading re-validates everything: a
//! private key is rebuilt through the same checks as a freshly assembled
//! one, so a corrupt or inconsistent file is rejected rather than decoded
//! with.

use std::fs;
use std::path::Path;

use crate::bits::BitVec;
use crate::cipher::Ciphertext;
use crate::convcode::{ConvCode, HighMem};
use crate::error::{Error, Result};
use crate::keys::{MaskSet, PrivateKey, PublicKey, SystemParams};
use crate::matrix::{Gf2Matrix, Permutation};
use crate::poly::Gf2Poly;

const MAGIC: &[u8; 4] = b"MCC1";
const VERSION: u8 = 1;
const KIND_PUBLIC: u8 = 0;
const KIND_PRIVATE: u8 = 1;
const KIND_CIPHERTEXT: u8 = 2;

/// Upper bound on any single dimension read from a file, to keep corrupt
/// headers from requesting absurd allocations.
const MAX_DIM: u32 = 1 << 24;

// ---------------------------------------------------------------- writing

struct Sink {
    buf: Vec<u8>,
}

impl Sink {
    fn new(kind: u8) -> Sink {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.push(VERSION);
        buf.push(kind);
        Sink { buf }
    }

    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn bits(&mut self, v: &BitVec) {
        self.buf.extend_from_slice(&v.to_bytes());
    }

    fn poly(&mut self, p: &Gf2Poly) {
        let bits = p.coeffs();
        self.u32(bits.len() as u32);
        self.bits(bits);
    }

    fn params(&mut self, params: &SystemParams) {
        self.u32(params.n as u32);
        self.u32(params.p as u32);
        self.u32(params.q as u32);
        self.u32(params.k as u32);
        self.u32(params.code_len() as u32);
        self.u32(params.l as u32);
        self.u32(params.r() as u32);
        self.u32((params.e * 1e6).round() as u32);
        self.poly(&params.crc_poly);
    }

    fn matrix(&mut self, m: &Gf2Matrix) {
        let mut all = BitVec::zeros(0);
        for i in 0..m.rows() {
            let row = m.row(i);
            for t in 0..row.len() {
                all.push(row.get(t));
            }
        }
        self.bits(&all);
    }
}

// ---------------------------------------------------------------- reading

struct Source<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Source<'a> {
    fn new(data: &'a [u8], expected_kind: u8) -> Result<Source<'a>> {
        let mut s = Source { data, pos: 0 };
        let magic = s.take(4)?;
        if magic != MAGIC {
            return Err(Error::Format("bad magic; not a key/ciphertext file".into()));
        }
        let version = s.u8()?;
        if version != VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {version}"
            )));
        }
        let kind = s.u8()?;
        if kind != expected_kind {
            return Err(Error::Format(format!(
                "wrong file kind: expected {}, found {}",
                kind_name(expected_kind),
                kind_name(kind)
            )));
        }
        Ok(s)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.data.len() - self.pos < n {
            return Err(Error::Format("file is truncated".into()));
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn dim(&mut self) -> Result<usize> {
        let v = self.u32()?;
        if v > MAX_DIM {
            return Err(Error::Format(format!("implausible dimension {v}")));
        }
        Ok(v as usize)
    }

    fn bits(&mut self, len: usize) -> Result<BitVec> {
        let bytes = self.take(len.div_ceil(8))?;
        Ok(BitVec::from_bytes(bytes, len))
    }

    fn poly(&mut self) -> Result<Gf2Poly> {
        let len = self.dim()?;
        Ok(Gf2Poly::from_coeffs(self.bits(len)?))
    }

    fn params(&mut self) -> Result<SystemParams> {
        let n = self.dim()?;
        let p = self.dim()?;
        let q = self.dim()?;
        let k = self.dim()?;
        let n_total = self.dim()?;
        let l = self.dim()?;
        let r = self.dim()?;
        let e_micro = self.u32()?;
        let crc_poly = self.poly()?;
        let params = SystemParams {
            n,
            p,
            q,
            k,
            l,
            e: f64::from(e_micro) / 1e6,
            crc_poly,
        };
        params.validate()?;
        if params.code_len() != n_total {
            return Err(Error::Format(format!(
                "stored block length {n_total} does not match parameters ({})",
                params.code_len()
            )));
        }
        if params.r() != r {
            return Err(Error::Format(format!(
                "stored check length {r} does not match the check polynomial ({})",
                params.r()
            )));
        }
        Ok(params)
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Result<Gf2Matrix> {
        let all = self.bits(rows * cols)?;
        let mut m = Gf2Matrix::zeros(rows, cols);
        for i in 0..rows {
            m.set_row(i, &all.slice(i * cols, (i + 1) * cols));
        }
        Ok(m)
    }

    fn finish(self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(Error::Format(format!(
                "{} unexpected trailing bytes",
                self.data.len() - self.pos
            )));
        }
        Ok(())
    }
}

fn kind_name(kind: u8) -> &'static str {
    match kind {
        KIND_PUBLIC => "public key",
        KIND_PRIVATE => "private key",
        KIND_CIPHERTEXT => "ciphertext",
        _ => "unknown",
    }
}

// ----------------------------------------------------------- public API

/// Serializes a public key: parameters plus the packed generator matrix.
pub fn serialize_public(pk: &PublicKey) -> Vec<u8> {
    let mut s = Sink::new(KIND_PUBLIC);
    s.params(&pk.params);
    s.matrix(&pk.g);
    s.buf
}

pub fn deserialize_public(bytes: &[u8]) -> Result<PublicKey> {
    let mut s = Source::new(bytes, KIND_PUBLIC)?;
    let params = s.params()?;
    let g = s.matrix(params.k, params.code_len())?;
    s.finish()?;
    Ok(PublicKey { params, g })
}

/// Serializes a private key: parameters, scrambler, permutation,
/// generators, multipliers, mask patterns, and the row mask. The scrambler
/// inverse is not stored; loading re-derives it.
pub fn serialize_private(sk: &PrivateKey) -> Vec<u8> {
    let mut s = Sink::new(KIND_PRIVATE);
    s.params(&sk.params);
    s.matrix(&sk.s);
    for &t in sk.perm.targets() {
        s.u32(t);
    }
    for g in sk.code.generators() {
        s.poly(g);
    }
    for m in sk.multipliers.multipliers() {
        s.poly(m);
    }
    for p in sk.mask.patterns() {
        s.bits(p);
    }
    s.matrix(&sk.g_tilde);
    s.buf
}

pub fn deserialize_private(bytes: &[u8]) -> Result<PrivateKey> {
    let mut s = Source::new(bytes, KIND_PRIVATE)?;
    let params = s.params()?;
    let k = params.k;
    let nn = params.code_len();
    let scrambler = s.matrix(k, k)?;
    let mut targets = Vec::with_capacity(nn);
    for _ in 0..nn {
        targets.push(s.u32()?);
    }
    let perm = Permutation::from_targets(targets)?;
    let gens: Vec<Gf2Poly> = (0..params.n)
        .map(|_| s.poly())
        .collect::<Result<_>>()?;
    let code = ConvCode::new(gens)?;
    let mults: Vec<Gf2Poly> = (0..params.n)
        .map(|_| s.poly())
        .collect::<Result<_>>()?;
    let multipliers = HighMem::new(mults)?;
    let patterns: Vec<BitVec> = (0..params.l)
        .map(|_| s.bits(params.n))
        .collect::<Result<_>>()?;
    let mask = MaskSet::from_patterns(patterns)?;
    let g_tilde = s.matrix(k, nn)?;
    s.finish()?;
    PrivateKey::from_parts(params, scrambler, perm, code, multipliers, mask, g_tilde)
}

/// Serializes a ciphertext: its bit length and the packed bits.
pub fn serialize_ciphertext(ct: &Ciphertext) -> Vec<u8> {
    let mut s = Sink::new(KIND_CIPHERTEXT);
    s.u32(ct.bits.len() as u32);
    s.bits(&ct.bits);
    s.buf
}

pub fn deserialize_ciphertext(bytes: &[u8]) -> Result<Ciphertext> {
    let mut s = Source::new(bytes, KIND_CIPHERTEXT)?;
    let len = s.dim()?;
    let bits = s.bits(len)?;
    s.finish()?;
    Ok(Ciphertext { bits })
}

/// Either kind of key, for callers that handle key files generically. The
/// private variant is boxed: a private key is several times the size of a
/// public key's header-and-matrix pair.
#[derive(Clone, Debug)]
pub enum Key {
    Public(PublicKey),
    Private(Box<PrivateKey>),
}

/// Serializes either kind of key.
pub fn serialize_key(key: &Key) -> Vec<u8> {
    match key {
        Key::Public(pk) => serialize_public(pk),
        Key::Private(sk) => serialize_private(sk),
    }
}

/// Loads either kind of key, dispatching on the kind byte.
pub fn deserialize_key(bytes: &[u8]) -> Result<Key> {
    if bytes.len() < 6 {
        return Err(Error::Format("file is truncated".into()));
    }
    match bytes[5] {
        KIND_PUBLIC => Ok(Key::Public(deserialize_public(bytes)?)),
        KIND_PRIVATE => Ok(Key::Private(Box::new(deserialize_private(bytes)?))),
        other => Err(Error::Format(format!(
            "not a key file (kind byte {other})"
        ))),
    }
}

// -------------------------------------------------------------- file I/O

pub fn save_public(pk: &PublicKey, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, serialize_public(pk))?)
}

pub fn load_public(path: impl AsRef<Path>) -> Result<PublicKey> {
    deserialize_public(&fs::read(path)?)
}

pub fn save_private(sk: &PrivateKey, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, serialize_private(sk))?)
}

pub fn load_private(path: impl AsRef<Path>) -> Result<PrivateKey> {
    deserialize_private(&fs::read(path)?)
}

pub fn save_ciphertext(ct: &Ciphertext, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, serialize_ciphertext(ct))?)
}

pub fn load_ciphertext(path: impl AsRef<Path>) -> Result<Ciphertext> {
    deserialize_ciphertext(&fs::read(path)?)
}

// -------------------------------------------------------- plaintext text

/// Renders a bit string as the two-line text form `bits=<len>` followed by
/// the lowercase hex of its packed bytes.
pub fn write_plaintext_text(bits: &BitVec) -> String {
    format!("bits={}\n{}\n", bits.len(), hex::encode(bits.to_bytes()))
}

/// Parses the two-line plaintext form produced by [`write_plaintext_text`].
pub fn parse_plaintext_text(s: &str) -> Result<BitVec> {
    let mut lines = s.lines();
    let head = lines
        .next()
        .ok_or_else(|| Error::Format("empty plaintext file".into()))?;
    let len: usize = head
        .strip_prefix("bits=")
        .ok_or_else(|| Error::Format("plaintext file must start with bits=<len>".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::Format("invalid bit count".into()))?;
    let body = lines
        .next()
        .ok_or_else(|| Error::Format("missing hex payload line".into()))?
        .trim();
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Format("unexpected extra content".into()));
    }
    let bytes = hex::decode(body).map_err(|e| Error::Format(format!("bad hex: {e}")))?;
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::Format(format!(
            "hex payload holds {} bytes but {len} bits need {}",
            bytes.len(),
            len.div_ceil(8)
        )));
    }
    Ok(BitVec::from_bytes(&bytes, len))
}

pub fn save_plaintext(bits: &BitVec, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, write_plaintext_text(bits))?)
}

pub fn load_plaintext(path: impl AsRef<Path>) -> Result<BitVec> {
    parse_plaintext_text(&String::from_utf8_lossy(&fs::read(path)?))
}
