//! Polynomials over GF(2) with carry-less multiplication and long division.
//!
//! Coefficients are stored in ascending degree order: index `i` holds the
//! coefficient of `x^i`. The zero polynomial has no coefficients at all and
//! reports its degree as `None` rather than a sentinel index.

use std::fmt;

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// A binary polynomial, kept trimmed so the highest stored coefficient is 1.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    coeffs: BitVec,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Gf2Poly::from_exponents(&[0])
    }

    /// The monomial `x^d`.
    pub fn monomial(d: usize) -> Self {
        Gf2Poly::from_exponents(&[d])
    }

    /// Builds a polynomial from the exponents of its nonzero terms.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut coeffs = BitVec::zeros(exps.iter().map(|&e| e + 1).max().unwrap_or(0));
        for &e in exps {
            // A repeated exponent would cancel over GF(2); forbid it loudly.
            assert!(!coeffs.get(e), "duplicate exponent {e}");
            coeffs.set(e, true);
        }
        Gf2Poly { coeffs }
    }

    /// Builds a polynomial from a coefficient vector, trimming high zeros.
    pub fn from_coeffs(mut coeffs: BitVec) -> Self {
        let top = coeffs.iter_ones().last();
        coeffs.resize(top.map_or(0, |t| t + 1));
        Gf2Poly { coeffs }
    }

    /// Parses a coefficient string such as `"101"` (meaning `1 + x^2`).
    pub fn from_bit_str(s: &str) -> Self {
        Gf2Poly::from_coeffs(BitVec::from_bit_str(s))
    }

    /// Parses octal generator notation, most-significant digit first.
    ///
    /// Digits expand to three bits each; leading zero bits are trimmed and
    /// the leftmost remaining bit becomes the constant term. For example,
    /// `"5"` is `101` = `1 + x^2`, and `"2327"` has degree 10.
    pub fn from_octal(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidParams("empty octal string".into()));
        }
        let mut bits = Vec::with_capacity(s.len() * 3);
        for ch in s.chars() {
            let d = ch
                .to_digit(8)
                .ok_or_else(|| Error::InvalidParams(format!("invalid octal digit {ch:?}")))?;
            bits.push(d & 4 != 0);
            bits.push(d & 2 != 0);
            bits.push(d & 1 != 0);
        }
        let start = bits.iter().position(|&b| b).unwrap_or(bits.len());
        Ok(Gf2Poly::from_coeffs(bits[start..].iter().copied().collect()))
    }

    /// Renders back to octal generator notation (inverse of [`from_octal`]).
    ///
    /// [`from_octal`]: Gf2Poly::from_octal
    pub fn to_octal(&self) -> String {
        let mut value: u128 = 0;
        let d = self.degree().unwrap_or(0);
        for i in self.coeffs.iter_ones() {
            value |= 1 << (d - i);
        }
        format!("{value:o}")
    }

    /// Degree of the polynomial, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i` (zero beyond the stored degree).
    pub fn coeff(&self, i: usize) -> bool {
        i < self.coeffs.len() && self.coeffs.get(i)
    }

    /// Number of nonzero terms.
    pub fn weight(&self) -> usize {
        self.coeffs.weight()
    }

    /// The coefficient vector (length `degree + 1`, empty for zero).
    pub fn coeffs(&self) -> &BitVec {
        &self.coeffs
    }

    /// Copies the coefficients into a vector of exactly `len` bits.
    ///
    /// Panics if the polynomial does not fit.
    pub fn to_coeff_bits(&self, len: usize) -> BitVec {
        assert!(
            self.coeffs.len() <= len,
            "polynomial of degree {:?} does not fit in {len} coefficients",
            self.degree()
        );
        let mut out = self.coeffs.clone();
        out.resize(len);
        out
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut acc = self.coeffs.clone();
        acc.resize(len);
        acc.xor_shifted(&other.coeffs, 0);
        Gf2Poly::from_coeffs(acc)
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Gf2Poly::zero();
        };
        let mut acc = BitVec::zeros(da + db + 1);
        for i in self.coeffs.iter_ones() {
            acc.xor_shifted(&other.coeffs, i);
        }
        Gf2Poly::from_coeffs(acc)
    }

    /// Long division: returns `(quotient, remainder)` with
    /// `self = divisor * quotient + remainder` and
    /// `deg(remainder) < deg(divisor)`.
    pub fn divmod(&self, divisor: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let dn = match self.degree() {
            None => return Ok((Gf2Poly::zero(), Gf2Poly::zero())),
            Some(dn) if dn < dd => return Ok((Gf2Poly::zero(), self.clone())),
            Some(dn) => dn,
        };
        let mut rem = self.coeffs.clone();
        let mut quo = BitVec::zeros(dn - dd + 1);
        for d in (dd..=dn).rev() {
            if rem.get(d) {
                quo.set(d - dd, true);
                rem.xor_shifted(&divisor.coeffs, d - dd);
            }
        }
        rem.resize(dd);
        Ok((Gf2Poly::from_coeffs(quo), Gf2Poly::from_coeffs(rem)))
    }

    /// Remainder of division by `divisor`.
    pub fn rem(&self, divisor: &Gf2Poly) -> Result<Gf2Poly> {
        Ok(self.divmod(divisor)?.1)
    }
}

impl fmt::Display for Gf2Poly {
    /// Writes the familiar term form, e.g. `1 + x + x^7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for e in self.coeffs.iter_ones() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(exps: &[usize]) -> Gf2Poly {
        Gf2Poly::from_exponents(exps)
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Gf2Poly::zero().degree(), None);
        assert_eq!(Gf2Poly::from_bit_str("000").degree(), None);
        assert_eq!(p(&[0]).degree(), Some(0));
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(&[0, 3]).to_string(), "1 + x^3");
        assert_eq!(p(&[1]).to_string(), "x");
        assert_eq!(Gf2Poly::zero().to_string(), "0");
        assert_eq!(p(&[0, 1, 2, 3, 4, 5, 6]).to_string(), "1 + x + x^2 + x^3 + x^4 + x^5 + x^6");
    }

    #[test]
    fn mul_small_products() {
        // (1 + x)(1 + x) = 1 + x^2
        assert_eq!(p(&[0, 1]).mul(&p(&[0, 1])), p(&[0, 2]));
        // (1 + x + x^2 + x^5)(1 + x^2) = 1 + x + x^3 + x^4 + x^5 + x^7
        assert_eq!(p(&[0, 1, 2, 5]).mul(&p(&[0, 2])), p(&[0, 1, 3, 4, 5, 7]));
        // (1 + x + x^2 + x^5)(1 + x + x^2) = 1 + x^2 + x^4 + x^5 + x^6 + x^7
        assert_eq!(p(&[0, 1, 2, 5]).mul(&p(&[0, 1, 2])), p(&[0, 2, 4, 5, 6, 7]));
        assert!(p(&[0, 1]).mul(&Gf2Poly::zero()).is_zero());
    }

    #[test]
    fn divmod_binomial_divisor() {
        // (x^7 + x^10 + x^14) / (1 + x^7) = x^3 + x^7, remainder x^3
        let (q, r) = p(&[7, 10, 14]).divmod(&p(&[0, 7])).unwrap();
        assert_eq!(q, p(&[3, 7]));
        assert_eq!(r, p(&[3]));
    }

    #[test]
    fn divmod_dense_dividend() {
        // (1 + x + ... + x^6 + x^8 + x^9 + x^11 + x^12 + x^13) / (1 + x^7)
        //   = x + x^2 + x^4 + x^5 + x^6, remainder 1 + x^3
        let a = p(&[0, 1, 2, 3, 4, 5, 6, 8, 9, 11, 12, 13]);
        let (q, r) = a.divmod(&p(&[0, 7])).unwrap();
        assert_eq!(q, p(&[1, 2, 4, 5, 6]));
        assert_eq!(r, p(&[0, 3]));
    }

    #[test]
    fn divmod_monomial_divisor() {
        // (x^7 + x^8 + x^13) / x^7 = 1 + x + x^6, remainder 0
        let (q, r) = p(&[7, 8, 13]).divmod(&p(&[7])).unwrap();
        assert_eq!(q, p(&[0, 1, 6]));
        assert!(r.is_zero());
        // Dense dividend by x^7: low coefficients land in the remainder.
        let a = p(&[0, 1, 2, 3, 4, 5, 6, 9, 10, 11, 12, 14]);
        let (q, r) = a.divmod(&p(&[7])).unwrap();
        assert_eq!(q, p(&[2, 3, 4, 5, 7]));
        assert_eq!(r, p(&[0, 1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn divmod_identity_divisor() {
        let a = p(&[0, 4, 9]);
        let (q, r) = a.divmod(&Gf2Poly::one()).unwrap();
        assert_eq!(q, a);
        assert!(r.is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            p(&[1]).divmod(&Gf2Poly::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn octal_parsing_conventions() {
        assert_eq!(Gf2Poly::from_octal("5").unwrap(), p(&[0, 2]));
        assert_eq!(Gf2Poly::from_octal("7").unwrap(), p(&[0, 1, 2]));
        // 133 -> 001 011 011 -> trimmed 1011011
        assert_eq!(Gf2Poly::from_octal("133").unwrap(), p(&[0, 2, 3, 5, 6]));
        // 2327 -> 010 011 010 111 -> trimmed 10011010111 (degree 10)
        let g = Gf2Poly::from_octal("2327").unwrap();
        assert_eq!(g.coeffs().to_bit_string(), "10011010111");
        assert_eq!(g.degree(), Some(10));
    }

    #[test]
    fn octal_roundtrip() {
        for s in ["5", "7", "133", "171", "2327", "2313", "2671", "3175"] {
            assert_eq!(Gf2Poly::from_octal(s).unwrap().to_octal(), s);
        }
        assert!(Gf2Poly::from_octal("9").is_err());
        assert!(Gf2Poly::from_octal("").is_err());
    }

    #[test]
    fn reconstruction_exhaustive_small() {
        // divisor * quotient + remainder reproduces every dividend.
        for a_bits in 0u32..64 {
            for b_bits in 1u32..64 {
                let a = Gf2Poly::from_coeffs((0..6).map(|i| a_bits >> i & 1 == 1).collect());
                let b = Gf2Poly::from_coeffs((0..6).map(|i| b_bits >> i & 1 == 1).collect());
                let (q, r) = a.divmod(&b).unwrap();
                assert_eq!(b.mul(&q).add(&r), a, "a={a} b={b}");
                if let (Some(dr), Some(db)) = (r.degree(), b.degree()) {
                    assert!(dr < db);
                }
            }
        }
    }
}
