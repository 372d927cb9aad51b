//! Named polynomial families.

use super::Poly2;
use crate::error::{Error, Result};
use crate::numtheory::{divisors, mobius};

/// Cyclotomic polynomial `Φ_d` reduced mod 2, for odd `d`.
pub fn cyclotomic(d: u64) -> Result<Poly2> {
    if d == 0 {
        return Err(Error::NonPositiveIndex);
    }
    if d.is_multiple_of(2) {
        return Err(Error::EvenIndex);
    }
    if d > 1 << 20 {
        return Err(Error::InvalidArgument(format!("cyclotomic index {d} too large")));
    }
    let mut num = Poly2::one();
    let mut den = Poly2::one();
    for e in divisors(d) {
        let term = Poly2::from_exponents(&[e as usize, 0]);
        match mobius(d / e) {
            1 => num = num.mul(&term),
            -1 => den = den.mul(&term),
            _ => {}
        }
    }
    num.div_exact(&den)
}

/// `h_r = x^(2^r) + x + 1`.
pub fn h_poly(r: u32) -> Result<Poly2> {
    if r == 0 {
        return Err(Error::NonPositiveIndex);
    }
    if r > 30 {
        return Err(Error::InvalidArgument(format!("h_{r} is too large to materialise")));
    }
    Ok(Poly2::from_exponents(&[1 << r, 1, 0]))
}

/// `h̃_r = 1 + sum_(i<r) x^(2^i)`, so that `h_r(x) = h̃_r(x^2 + x)`.
pub fn h_tilde(r: u32) -> Result<Poly2> {
    h_poly(r)?;
    let exps: Vec<usize> = std::iter::once(0).chain((0..r).map(|i| 1usize << i)).collect();
    Ok(Poly2::from_exponents(&exps))
}

/// `q(x^2 + x)`.
pub fn alpha_substitute(q: &Poly2) -> Poly2 {
    q.compose(&Poly2::from_u64(0b110))
}
