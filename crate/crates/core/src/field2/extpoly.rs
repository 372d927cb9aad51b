//! Polynomials with coefficients in a binary field, used for root finding
//! and minimal polynomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FieldCtx;
use crate::error::{Error, Result};
use crate::poly2::Poly2;

/// Dense polynomial over `F_(2^r)`, lowest coefficient first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtPoly {
    c: Vec<u64>,
}

impl ExtPoly {
    pub fn one() -> Self {
        ExtPoly { c: vec![1] }
    }

    pub fn from_coeffs(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ExtPoly { c }
    }

    pub fn from_prime_poly(p: &Poly2) -> Self {
        let n = p.degree().map_or(0, |d| d + 1);
        Self::from_coeffs((0..n).map(|i| p.coeff(i) as u64).collect())
    }

    /// Back to `F_2[x]`; fails if a coefficient lies outside `F_2`.
    pub fn to_prime_poly(&self) -> Result<Poly2> {
        let mut p = Poly2::zero();
        for (i, &a) in self.c.iter().enumerate() {
            match a {
                0 => {}
                1 => p.flip(i),
                _ => return Err(Error::Inconsistent("coefficient outside the prime field".into())),
            }
        }
        Ok(p)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn add(&self, other: &ExtPoly) -> ExtPoly {
        let n = self.c.len().max(other.c.len());
        Self::from_coeffs(
            (0..n).map(|i| self.c.get(i).copied().unwrap_or(0) ^ other.c.get(i).copied().unwrap_or(0)).collect(),
        )
    }

    pub fn mul(&self, f: &FieldCtx, other: &ExtPoly) -> ExtPoly {
        if self.c.is_empty() || other.c.is_empty() {
            return ExtPoly { c: Vec::new() };
        }
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] ^= f.mul_raw(a, b);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn sqr(&self, f: &FieldCtx) -> ExtPoly {
        let mut out = vec![0u64; (2 * self.c.len()).saturating_sub(1)];
        for (i, &a) in self.c.iter().enumerate() {
            out[2 * i] = f.sqr_raw(a);
        }
        Self::from_coeffs(out)
    }

    pub fn rem(&self, f: &FieldCtx, m: &ExtPoly) -> Result<ExtPoly> {
        let dm = m.degree().ok_or(Error::ZeroPolynomial)?;
        let lead_inv = f.inv_raw(m.c[dm])?;
        let mut r = self.c.clone();
        while r.len() > dm {
            let top = r.len() - 1;
            let k = f.mul_raw(r[top], lead_inv);
            if k != 0 {
                let s = top - dm;
                for (j, &b) in m.c.iter().enumerate() {
                    r[s + j] ^= f.mul_raw(k, b);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Ok(Self::from_coeffs(r))
    }

    pub fn monic(&self, f: &FieldCtx) -> Result<ExtPoly> {
        let lead = *self.c.last().ok_or(Error::ZeroPolynomial)?;
        let inv = f.inv_raw(lead)?;
        Ok(Self::from_coeffs(self.c.iter().map(|&a| f.mul_raw(a, inv)).collect()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, f: &FieldCtx, other: &ExtPoly) -> Result<ExtPoly> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.c.is_empty() {
            let r = a.rem(f, &b)?;
            a = b;
            b = r;
        }
        if a.c.is_empty() {
            return Ok(a);
        }
        a.monic(f)
    }

    /// Distinct roots lying in the field, numerically ascending.
    pub fn roots(&self, f: &FieldCtx) -> Result<Vec<u64>> {
        let m = self.monic(f)?;
        if m.degree() == Some(0) {
            return Ok(Vec::new());
        }
        // gcd with x^(2^r) - x keeps exactly the distinct linear factors.
        let x = ExtPoly::from_coeffs(vec![0, 1]);
        let mut h = x.rem(f, &m)?;
        for _ in 0..f.degree() {
            h = h.sqr(f).rem(f, &m)?;
        }
        let g = m.gcd(f, &h.add(&x))?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x726f_6f74);
        let mut out = Vec::new();
        split_linear(f, &g, &mut rng, &mut out)?;
        out.sort_unstable();
        Ok(out)
    }
}

fn split_linear(f: &FieldCtx, g: &ExtPoly, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) -> Result<()> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(g.c[0]);
            return Ok(());
        }
        _ => {}
    }
    let n = g.degree().unwrap();
    loop {
        let beta = rng.gen::<u64>() & f.unit_count();
        if beta == 0 {
            continue;
        }
        let mut y = ExtPoly::from_coeffs(vec![0, beta]).rem(f, g)?;
        let mut acc = y.clone();
        for _ in 1..f.degree() {
            y = y.sqr(f).rem(f, g)?;
            acc = acc.add(&y);
        }
        let h = g.gcd(f, &acc)?;
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            let q = quotient(f, g, &h)?;
            split_linear(f, &h, rng, out)?;
            split_linear(f, &q, rng, out)?;
            return Ok(());
        }
    }
}

/// Exact quotient `a / b` with `b` monic.
fn quotient(f: &FieldCtx, a: &ExtPoly, b: &ExtPoly) -> Result<ExtPoly> {
    let db = b.degree().ok_or(Error::ZeroPolynomial)?;
    let da = a.degree().ok_or(Error::ZeroPolynomial)?;
    let mut r = a.c.clone();
    let mut q = vec![0u64; da - db + 1];
    for s in (0..=da - db).rev() {
        let k = r[s + db];
        q[s] = k;
        if k != 0 {
            for (j, &c) in b.c.iter().enumerate() {
                r[s + j] ^= f.mul_raw(k, c);
            }
        }
    }
    if r.iter().any(|&v| v != 0) {
        return Err(Error::Inconsistent("inexact division".into()));
    }
    Ok(ExtPoly::from_coeffs(q))
}
