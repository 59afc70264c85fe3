//! Dense binary matrices with word-packed rows, plus coordinate permutations.
//!
//! Rank and inversion use plain Gaussian elimination on packed rows, which is
//! entirely adequate at the block sizes this system works with (a few
//! thousand rows at most).

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::BitVec;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    /// Words per row; every row is padded to a word boundary with zeros.
    wpr: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = cols.div_ceil(64);
        Gf2Matrix {
            rows,
            cols,
            wpr,
            data: vec![0; rows * wpr],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Gf2Matrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    /// Uniformly random matrix.
    pub fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for r in 0..rows {
            for w in 0..m.wpr {
                m.data[r * m.wpr + w] = rng.gen();
            }
        }
        m.mask_row_tails();
        m
    }

    fn mask_row_tails(&mut self) {
        let used = self.cols % 64;
        if used != 0 {
            let mask = (1u64 << used) - 1;
            for r in 0..self.rows {
                self.data[r * self.wpr + self.wpr - 1] &= mask;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.data[r * self.wpr + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let mask = 1u64 << (c % 64);
        let w = &mut self.data[r * self.wpr + c / 64];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    /// Copies row `r` out as a bit vector of length `cols`.
    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.row_words(r).to_vec(), self.cols)
    }

    /// Overwrites row `r` with a vector of length `cols`.
    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.data[r * self.wpr..(r + 1) * self.wpr].copy_from_slice(v.words());
    }

    /// Entrywise sum over GF(2).
    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        let mut acc = vec![0u64; out.wpr];
        for i in 0..self.rows {
            acc.fill(0);
            for k in self.row(i).iter_ones() {
                for (a, b) in acc.iter_mut().zip(other.row_words(k)) {
                    *a ^= b;
                }
            }
            out.data[i * out.wpr..(i + 1) * out.wpr].copy_from_slice(&acc);
        }
        Ok(out)
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(pivot, rank);
            for i in rank + 1..m.rows {
                if m.get(i, c) {
                    m.xor_row_into(rank, i);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Result<Gf2Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let k = self.rows;
        let mut a = self.clone();
        let mut inv = Gf2Matrix::identity(k);
        for c in 0..k {
            let Some(pivot) = (c..k).find(|&i| a.get(i, c)) else {
                return Err(Error::Singular);
            };
            a.swap_rows(pivot, c);
            inv.swap_rows(pivot, c);
            for i in 0..k {
                if i != c && a.get(i, c) {
                    a.xor_row_into(c, i);
                    inv.xor_row_into(c, i);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.wpr {
            self.data.swap(a * self.wpr + w, b * self.wpr + w);
        }
    }

    /// XORs row `src` into row `dst`.
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let wpr = self.wpr;
        let (src_row, dst_row): (&[u64], &mut [u64]) = if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * wpr);
            (&head[src * wpr..src * wpr + wpr], &mut tail[..wpr])
        } else {
            let (head, tail) = self.data.split_at_mut(src * wpr);
            (&tail[..wpr], &mut head[dst * wpr..dst * wpr + wpr])
        };
        for (d, s) in dst_row.iter_mut().zip(src_row) {
            *d ^= s;
        }
    }

    /// Applies a column permutation: column `j` moves to `perm[j]`.
    pub fn permute_columns(&self, perm: &Permutation) -> Result<Gf2Matrix> {
        if perm.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "permutation over {} positions cannot act on {} columns",
                perm.len(),
                self.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in row.iter_ones() {
                out.set(i, perm.map[j] as usize, true);
            }
        }
        Ok(out)
    }

    pub fn column_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, c)).count()
    }
}

impl std::fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(16) {
            writeln!(f, "  {}", self.row(i))?;
        }
        if self.rows > 16 {
            writeln!(f, "  …")?;
        }
        write!(f, "]")
    }
}

/// Row-vector times matrix over GF(2).
pub fn vec_mul(v: &BitVec, m: &Gf2Matrix) -> Result<BitVec> {
    if v.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} cannot multiply a {}x{} matrix",
            v.len(),
            m.rows,
            m.cols
        )));
    }
    let mut acc = BitVec::zeros(m.cols);
    for k in v.iter_ones() {
        let words = acc.words_mut();
        for (a, b) in words.iter_mut().zip(m.row_words(k)) {
            *a ^= b;
        }
    }
    Ok(acc)
}

/// A permutation of coordinate positions; stands in for the permutation
/// matrix applied on the right of the public generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    /// `map[i]` is the destination of position `i`.
    map: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n as u32).collect(),
        }
    }

    /// Uniformly random permutation.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut map: Vec<u32> = (0..n as u32).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    /// Validates and wraps an explicit destination map.
    pub fn from_targets(map: Vec<u32>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &t in &map {
            let t = t as usize;
            if t >= n || seen[t] {
                return Err(Error::InvalidParams(
                    "permutation map is not a bijection".into(),
                ));
            }
            seen[t] = true;
        }
        Ok(Permutation { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn targets(&self) -> &[u32] {
        &self.map
    }

    /// Applies the permutation to a bit vector; with `inverse` set, applies
    /// its inverse (undoing a forward application).
    pub fn apply(&self, v: &BitVec, inverse: bool) -> Result<BitVec> {
        if v.len() != self.map.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation over {} positions cannot act on {} bits",
                self.map.len(),
                v.len()
            )));
        }
        let mut out = BitVec::zeros(v.len());
        if inverse {
            for (i, &t) in self.map.iter().enumerate() {
                if v.get(t as usize) {
                    out.set(i, true);
                }
            }
        } else {
            for (i, &t) in self.map.iter().enumerate() {
                if v.get(i) {
                    out.set(t as usize, true);
                }
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.map.len()];
        for (i, &t) in self.map.iter().enumerate() {
            inv[t as usize] = i as u32;
        }
        Permutation { map: inv }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn identity_facts() {
        let i8 = Gf2Matrix::identity(8);
        assert_eq!(i8.rank(), 8);
        assert_eq!(i8.inverse().unwrap(), i8);
        let v = BitVec::from_bit_str("10110011");
        assert_eq!(vec_mul(&v, &i8).unwrap(), v);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(Gf2Matrix::zeros(5, 9).rank(), 0);
    }

    #[test]
    fn random_tall_matrices_have_full_row_rank() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = Gf2Matrix::random(32, 96, &mut rng);
            assert_eq!(m.rank(), 32);
        }
    }

    #[test]
    fn inverse_roundtrip_random() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let mut done = 0;
        while done < 10 {
            let m = Gf2Matrix::random(24, 24, &mut rng);
            let Ok(inv) = m.inverse() else { continue };
            assert_eq!(m.mul(&inv).unwrap(), Gf2Matrix::identity(24));
            assert_eq!(inv.inverse().unwrap(), m);
            done += 1;
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        // Row 2 duplicates row 0.
        let mut m = Gf2Matrix::zeros(3, 3);
        m.set(0, 0, true);
        m.set(1, 1, true);
        m.set(2, 0, true);
        assert_eq!(m.rank(), 2);
        assert!(matches!(m.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn distributivity_on_random_matrices() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let a = Gf2Matrix::random(10, 12, &mut rng);
        let b = Gf2Matrix::random(10, 12, &mut rng);
        let c = Gf2Matrix::random(12, 7, &mut rng);
        let lhs = a.add(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unscrambling_fixture() {
        // The 6x6 unscrambler used by the worked walkthrough.
        let rows = ["101110", "011011", "001000", "001110", "000010", "001011"];
        let mut s_inv = Gf2Matrix::zeros(6, 6);
        for (i, r) in rows.iter().enumerate() {
            s_inv.set_row(i, &BitVec::from_bit_str(r));
        }
        let m = vec_mul(&BitVec::from_bit_str("110110"), &s_inv).unwrap();
        assert_eq!(m.to_bit_string(), "111001");
        // It is nonsingular, so it really is an unscrambler.
        let s = s_inv.inverse().unwrap();
        assert_eq!(s.mul(&s_inv).unwrap(), Gf2Matrix::identity(6));
    }

    #[test]
    fn permutation_roundtrip_and_weight() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let p = Permutation::random(40, &mut rng);
        let v = BitVec::from_words(vec![0xDEAD_BEEF_u64], 40);
        let f = p.apply(&v, false).unwrap();
        assert_eq!(f.weight(), v.weight());
        assert_eq!(p.apply(&f, true).unwrap(), v);
        // Explicit inverse agrees with the inverse flag.
        assert_eq!(p.inverse().apply(&f, false).unwrap(), v);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::from_targets(vec![0, 2, 1]).is_ok());
        assert!(Permutation::from_targets(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_targets(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn column_permutation_moves_columns() {
        let mut m = Gf2Matrix::zeros(2, 3);
        m.set(0, 0, true);
        m.set(1, 2, true);
        let p = Permutation::from_targets(vec![1, 2, 0]).unwrap();
        let out = m.permute_columns(&p).unwrap();
        assert!(out.get(0, 1));
        assert!(out.get(1, 0));
        assert_eq!(out.column_weight(2), 0);
    }
}
