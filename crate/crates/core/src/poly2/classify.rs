//! Invariants of an irreducible polynomial.

use serde::{Deserialize, Serialize};

use super::{is_irreducible, Poly2};
use crate::chebfib::fib_order;
use crate::error::{Error, Result};
use crate::numtheory::factor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrProfile {
    /// `τ` equals its reciprocal.
    pub palindrome: bool,
    /// Coefficient of `x^(deg-1)`: the trace of a root.
    pub trace_bit: bool,
    /// Multiplicative order of a root.
    pub ord: u64,
    /// Fibonacci order.
    pub ford: u64,
}

/// Multiplicative order of `x` modulo an irreducible `τ ≠ x` of degree at most 64.
pub fn root_order(tau: &Poly2) -> Result<u64> {
    let d = tau.deg()?;
    if d > 64 {
        return Err(Error::TooLarge(format!("degree {d}")));
    }
    let n = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    if n == 1 {
        return Ok(1);
    }
    let fs = factor(n);
    let mut ord = n;
    for &(p, _) in &fs {
        while ord % p == 0 && Poly2::x().powmod((ord / p) as u128, tau)?.is_one() {
            ord /= p;
        }
    }
    Ok(ord)
}

pub fn classify_irr(tau: &Poly2) -> Result<IrrProfile> {
    let d = tau.deg()?;
    if !is_irreducible(tau) {
        return Err(Error::NotIrreducible);
    }
    if *tau == Poly2::x() {
        return Err(Error::IsX);
    }
    Ok(IrrProfile {
        palindrome: tau.is_palindromic(),
        trace_bit: tau.coeff(d - 1),
        ord: root_order(tau)?,
        ford: fib_order(tau)?,
    })
}
