//! Polynomials over GF(2).
//!
//! A [`Poly2`] stores its coefficients as little-endian 64-bit limbs: bit
//! `i` of the limb vector is the coefficient of `x^i`. The zero polynomial
//! has no limbs, and every other value keeps a non-zero top limb, so
//! equality and hashing are structural.
//!
//! Polynomials are totally ordered by their numeric value
//! `sum c_i 2^i`, which is the order used whenever this crate needs a
//! canonical choice ("numerically least").

mod classify;
mod factor;
mod resultant;
mod special;

pub use classify::{classify_irr, root_order, IrrProfile};
pub use factor::{distinct_degree, equal_degree_split, factor, irreducibles_of_degree, is_irreducible, square_free};
pub use resultant::resultant_shift;
pub use special::{alpha_substitute, cyclotomic, h_poly, h_tilde};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clmul::{clmul, compact, spread};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    limbs: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { limbs: vec![1] }
    }

    pub fn x() -> Self {
        Poly2 { limbs: vec![2] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut limbs = vec![0u64; k / 64 + 1];
        limbs[k / 64] = 1 << (k % 64);
        Poly2 { limbs }
    }

    /// Polynomial whose coefficient bits are those of `bits`.
    pub fn from_u64(bits: u64) -> Self {
        Self::from_limbs(vec![bits])
    }

    pub fn from_u128(bits: u128) -> Self {
        Self::from_limbs(vec![bits as u64, (bits >> 64) as u64])
    }

    pub fn from_limbs(limbs: Vec<u64>) -> Self {
        let mut p = Poly2 { limbs };
        p.normalize();
        p
    }

    /// Polynomial with the given exponents (repeated exponents cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Poly2::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// Low 64 coefficient bits; `None` if the degree exceeds 63.
    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.limbs.last().map(|&top| 64 * (self.limbs.len() - 1) + 63 - top.leading_zeros() as usize)
    }

    /// Degree of a non-zero polynomial.
    pub fn deg(&self) -> Result<usize> {
        self.degree().ok_or(Error::ZeroPolynomial)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.limbs.get(i / 64).is_some_and(|&w| (w >> (i % 64)) & 1 == 1)
    }

    /// Toggle the coefficient of `x^i`.
    pub fn flip(&mut self, i: usize) {
        if self.limbs.len() <= i / 64 {
            self.limbs.resize(i / 64 + 1, 0);
        }
        self.limbs[i / 64] ^= 1 << (i % 64);
        self.normalize();
    }

    pub fn set_coeff(&mut self, i: usize, v: bool) {
        if self.coeff(i) != v {
            self.flip(i);
        }
    }

    /// Number of non-zero coefficients.
    pub fn weight(&self) -> u32 {
        self.limbs.iter().map(|w| w.count_ones()).sum()
    }

    /// Exponents with a non-zero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.limbs.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(64 * i + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// Value at `x = 0` or `x = 1`.
    pub fn eval_bit(&self, at_one: bool) -> bool {
        if at_one {
            self.weight() % 2 == 1
        } else {
            self.coeff(0)
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let (long, short) = if self.limbs.len() >= other.limbs.len() { (self, other) } else { (other, self) };
        let mut limbs = long.limbs.clone();
        for (a, b) in limbs.iter_mut().zip(&short.limbs) {
            *a ^= b;
        }
        Poly2::from_limbs(limbs)
    }

    pub fn add_assign(&mut self, other: &Poly2) {
        if self.limbs.len() < other.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
        self.normalize();
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() || other.is_zero() {
            return Poly2::zero();
        }
        let mut out = vec![0u64; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.limbs.iter().enumerate() {
                let c = clmul(a, b);
                out[i + j] ^= c as u64;
                out[i + j + 1] ^= (c >> 64) as u64;
            }
        }
        Poly2::from_limbs(out)
    }

    /// `self^2`, computed by spreading bits.
    pub fn square(&self) -> Poly2 {
        let mut out = Vec::with_capacity(2 * self.limbs.len());
        for &w in &self.limbs {
            out.push(spread(w as u32));
            out.push(spread((w >> 32) as u32));
        }
        Poly2::from_limbs(out)
    }

    pub fn pow(&self, mut e: u64) -> Poly2 {
        let mut base = self.clone();
        let mut acc = Poly2::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let (q, r) = (k / 64, k % 64);
        let mut out = vec![0u64; self.limbs.len() + q + 1];
        for (i, &w) in self.limbs.iter().enumerate() {
            out[i + q] ^= w << r;
            if r != 0 {
                out[i + q + 1] ^= w >> (64 - r);
            }
        }
        Poly2::from_limbs(out)
    }

    /// `floor(self / x^k)`.
    pub fn shr(&self, k: usize) -> Poly2 {
        let (q, r) = (k / 64, k % 64);
        if q >= self.limbs.len() {
            return Poly2::zero();
        }
        let src = &self.limbs[q..];
        let mut out = vec![0u64; src.len()];
        for i in 0..src.len() {
            out[i] = src[i] >> r;
            if r != 0 && i + 1 < src.len() {
                out[i] |= src[i + 1] << (64 - r);
            }
        }
        Poly2::from_limbs(out)
    }

    /// Coefficients of degree below `k`.
    pub fn truncate(&self, k: usize) -> Poly2 {
        let mut limbs: Vec<u64> = self.limbs.iter().take(k.div_ceil(64)).copied().collect();
        if !k.is_multiple_of(64) {
            if let Some(last) = limbs.get_mut(k / 64) {
                *last &= (1u64 << (k % 64)) - 1;
            }
        }
        Poly2::from_limbs(limbs)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn divrem(&self, divisor: &Poly2) -> Result<(Poly2, Poly2)> {
        let db = divisor.deg()?;
        let mut r = self.limbs.clone();
        let mut q = vec![0u64; self.limbs.len()];
        let mut top = self.degree();
        while let Some(dr) = top {
            if dr < db {
                break;
            }
            let s = dr - db;
            q[s / 64] |= 1 << (s % 64);
            xor_shifted(&mut r, &divisor.limbs, s);
            top = degree_below(&r, dr);
        }
        Ok((Poly2::from_limbs(q), Poly2::from_limbs(r)))
    }

    pub fn rem(&self, divisor: &Poly2) -> Result<Poly2> {
        let db = divisor.deg()?;
        let mut r = self.limbs.clone();
        let mut top = self.degree();
        while let Some(dr) = top {
            if dr < db {
                break;
            }
            xor_shifted(&mut r, &divisor.limbs, dr - db);
            top = degree_below(&r, dr);
        }
        Ok(Poly2::from_limbs(r))
    }

    /// `true` when `divisor` divides `self`.
    pub fn divisible_by(&self, divisor: &Poly2) -> Result<bool> {
        Ok(self.rem(divisor)?.is_zero())
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly2) -> Result<Poly2> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::NonExactDivision);
        }
        Ok(q)
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("non-zero divisor");
            a = b;
            b = r;
        }
        a
    }

    /// Formal derivative; only odd exponents survive.
    pub fn derivative(&self) -> Poly2 {
        let mut limbs: Vec<u64> = self.limbs.iter().map(|w| w & 0xAAAA_AAAA_AAAA_AAAA).collect();
        for i in 0..limbs.len() {
            limbs[i] >>= 1;
            if i + 1 < limbs.len() {
                limbs[i] |= (limbs[i + 1] & 1) << 63;
            }
        }
        Poly2::from_limbs(limbs)
    }

    /// Square root of a polynomial with only even exponents.
    pub fn sqrt(&self) -> Result<Poly2> {
        if self.limbs.iter().any(|w| w & 0xAAAA_AAAA_AAAA_AAAA != 0) {
            return Err(Error::NotASquare);
        }
        let mut out = vec![0u64; self.limbs.len().div_ceil(2)];
        for (i, &w) in self.limbs.iter().enumerate() {
            out[i / 2] |= (compact(w) as u64) << (32 * (i % 2));
        }
        Ok(Poly2::from_limbs(out))
    }

    /// `self(inner)` by Horner's rule.
    pub fn compose(&self, inner: &Poly2) -> Poly2 {
        let Some(d) = self.degree() else {
            return Poly2::zero();
        };
        let mut acc = Poly2::zero();
        for i in (0..=d).rev() {
            acc = acc.mul(inner);
            if self.coeff(i) {
                acc.flip(0);
            }
        }
        acc
    }

    /// `x^deg * self(1/x)`; the reciprocal of zero is zero.
    pub fn reciprocal(&self) -> Poly2 {
        let Some(d) = self.degree() else {
            return Poly2::zero();
        };
        let mut out = Poly2::zero();
        for e in self.exponents() {
            out.flip(d - e);
        }
        out
    }

    /// `true` when the polynomial equals its reciprocal.
    pub fn is_palindromic(&self) -> bool {
        !self.is_zero() && self.reciprocal() == *self
    }

    /// `self(x+1)`, by an in-place Taylor shift butterfly.
    pub fn conjugate(&self) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        const MASKS: [u64; 6] = [
            0x5555_5555_5555_5555,
            0x3333_3333_3333_3333,
            0x0F0F_0F0F_0F0F_0F0F,
            0x00FF_00FF_00FF_00FF,
            0x0000_FFFF_0000_FFFF,
            0x0000_0000_FFFF_FFFF,
        ];
        let n = self.limbs.len().next_power_of_two();
        let mut w = self.limbs.clone();
        w.resize(n, 0);
        for (j, &m) in MASKS.iter().enumerate() {
            for x in w.iter_mut() {
                *x ^= (*x >> (1 << j)) & m;
            }
        }
        let mut h = 1;
        while h < n {
            for block in (0..n).step_by(2 * h) {
                for i in 0..h {
                    w[block + i] ^= w[block + h + i];
                }
            }
            h *= 2;
        }
        Poly2::from_limbs(w)
    }

    /// `self(x+1) + self(x)`.
    pub fn delta(&self) -> Poly2 {
        self.conjugate().add(self)
    }

    pub fn mulmod(&self, other: &Poly2, m: &Poly2) -> Result<Poly2> {
        self.mul(other).rem(m)
    }

    pub fn sqrmod(&self, m: &Poly2) -> Result<Poly2> {
        self.square().rem(m)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, e: u128, m: &Poly2) -> Result<Poly2> {
        let mut base = self.rem(m)?;
        let mut acc = Poly2::one().rem(m)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqrmod(m)?;
            }
        }
        Ok(acc)
    }

    /// Compact form: hexadecimal value of the coefficient bitmask.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0x0".to_string();
        }
        let mut s = format!("0x{:x}", self.limbs.last().unwrap());
        for w in self.limbs.iter().rev().skip(1) {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    fn parse_hex(digits: &str) -> Result<Poly2> {
        let digits = digits.trim_start_matches('0');
        if !digits.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::MalformedPolynomial(digits.to_string()));
        }
        let bytes = digits.as_bytes();
        let mut limbs = Vec::new();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).unwrap();
            limbs.push(u64::from_str_radix(chunk, 16).unwrap());
            end = start;
        }
        Ok(Poly2::from_limbs(limbs))
    }
}

/// `r ^= b * x^s` on raw limbs; `r` must be long enough.
fn xor_shifted(r: &mut [u64], b: &[u64], s: usize) {
    let (q, k) = (s / 64, s % 64);
    for (i, &w) in b.iter().enumerate() {
        r[i + q] ^= w << k;
        if k != 0 && i + q + 1 < r.len() {
            r[i + q + 1] ^= w >> (64 - k);
        }
    }
}

/// Degree of the raw limb vector, searching only at or below `hint`.
fn degree_below(r: &[u64], hint: usize) -> Option<usize> {
    let mut i = hint / 64;
    loop {
        if r[i] != 0 {
            return Some(64 * i + 63 - r[i].leading_zeros() as usize);
        }
        if i == 0 {
            return None;
        }
        i -= 1;
    }
}

impl Ord for Poly2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs.len().cmp(&other.limbs.len()).then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for Poly2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl FromStr for Poly2 {
    type Err = Error;

    /// Accepts `x^4+x+1` style text or a `0x`-prefixed compact bitmask.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::MalformedPolynomial(s.clone());
        if s.is_empty() {
            return Err(bad());
        }
        if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            if hex.is_empty() {
                return Err(bad());
            }
            return Poly2::parse_hex(hex);
        }
        let mut p = Poly2::zero();
        for term in s.split('+') {
            match term {
                "0" => {}
                "1" => p.flip(0),
                "x" => p.flip(1),
                t => {
                    let e = t.strip_prefix("x^").ok_or_else(bad)?;
                    let e: usize = e.parse().map_err(|_| bad())?;
                    if e > 1 << 30 {
                        return Err(bad());
                    }
                    p.flip(e);
                }
            }
        }
        Ok(p)
    }
}

impl Serialize for Poly2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
