//! Chebyshev-Dickson polynomials over GF(2).
//!
//! All three families satisfy `p_(n+1) = x p_n + p_(n-1)`:
//!
//! | kind | `p_0` | `p_1` | degree |
//! |------|-------|-------|--------|
//! | `T`  | 0     | x     | n      |
//! | `E`  | 1     | x     | n      |
//! | `F`  | 0     | 1     | n - 1  |
//!
//! so that `T_n = x F_n = x E_(n-1)`. A root of `T_n` has the form
//! `ζ + 1/ζ` with `ζ^n = 1`, which is what ties these polynomials to
//! orders of roots of unity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field2::{make_field, QuadRoots, MAX_DEGREE};
use crate::numtheory::{self, divisors, mobius};
use crate::poly2::{self, Poly2};

/// Largest index accepted by [`cdf`].
pub const MAX_INDEX: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CdfKind {
    /// `T`
    FirstKind,
    /// `E`
    SecondKind,
    /// `F`
    Fibonacci,
}

impl CdfKind {
    fn initial(self) -> (Poly2, Poly2) {
        match self {
            CdfKind::FirstKind => (Poly2::zero(), Poly2::x()),
            CdfKind::SecondKind => (Poly2::one(), Poly2::x()),
            CdfKind::Fibonacci => (Poly2::zero(), Poly2::one()),
        }
    }
}

impl FromStr for CdfKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(CdfKind::FirstKind),
            "E" | "e" => Ok(CdfKind::SecondKind),
            "F" | "f" => Ok(CdfKind::Fibonacci),
            _ => Err(Error::InvalidArgument(format!("unknown polynomial family {s:?}"))),
        }
    }
}

impl fmt::Display for CdfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            CdfKind::FirstKind => "T",
            CdfKind::SecondKind => "E",
            CdfKind::Fibonacci => "F",
        };
        write!(f, "{c}")
    }
}

/// The `n`-th polynomial of the family, by iterating the recurrence.
pub fn cdf(kind: CdfKind, n: u64) -> Result<Poly2> {
    if n > MAX_INDEX {
        return Err(Error::TooLarge(format!("index {n} exceeds {MAX_INDEX}")));
    }
    let (mut a, mut b) = kind.initial();
    for _ in 0..n {
        let next = b.shl(1).add(&a);
        a = std::mem::replace(&mut b, next);
    }
    Ok(a)
}

/// All of `p_0, ..., p_n` for one family.
pub fn cdf_table(kind: CdfKind, n: u64) -> Result<Vec<Poly2>> {
    if n > MAX_INDEX {
        return Err(Error::TooLarge(format!("index {n} exceeds {MAX_INDEX}")));
    }
    let (a, b) = kind.initial();
    let mut out = vec![a, b];
    for i in 2..=n as usize {
        let next = out[i - 1].shl(1).add(&out[i - 2]);
        out.push(next);
    }
    out.truncate(n as usize + 1);
    Ok(out)
}

/// `p_n mod m`, using powers of `[[x, 1], [1, 0]]`, whose `n`-th power is
/// `[[F_(n+1), F_n], [F_n, F_(n-1)]]`. Suited to huge `n`.
pub fn cdf_mod(kind: CdfKind, n: u64, m: &Poly2) -> Result<Poly2> {
    m.deg()?;
    let mm = |a: &Poly2, b: &Poly2| a.mulmod(b, m);
    // Symmetric 2x2 matrices stored as (top-left, off-diagonal, bottom-right).
    let mut base = (Poly2::x().rem(m)?, Poly2::one().rem(m)?, Poly2::zero());
    let mut acc = (Poly2::one().rem(m)?, Poly2::zero(), Poly2::one().rem(m)?);
    let mul = |p: &(Poly2, Poly2, Poly2), q: &(Poly2, Poly2, Poly2)| -> Result<(Poly2, Poly2, Poly2)> {
        Ok((
            mm(&p.0, &q.0)?.add(&mm(&p.1, &q.1)?),
            mm(&p.0, &q.1)?.add(&mm(&p.1, &q.2)?),
            mm(&p.1, &q.1)?.add(&mm(&p.2, &q.2)?),
        ))
    };
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base)?;
        }
    }
    let (f_next, f_n) = (acc.0, acc.1);
    match kind {
        CdfKind::Fibonacci => Ok(f_n),
        CdfKind::SecondKind => Ok(f_next),
        CdfKind::FirstKind => f_n.shl(1).rem(m),
    }
}

fn check_irreducible_not_x(tau: &Poly2) -> Result<usize> {
    let d = tau.deg()?;
    if !poly2::is_irreducible(tau) {
        return Err(Error::NotIrreducible);
    }
    if *tau == Poly2::x() {
        return Err(Error::IsX);
    }
    Ok(d)
}

/// `ford τ`: the least `n > 0` with `τ | F_n`, equivalently the order of
/// `ζ` where a root of `τ` is `ζ + 1/ζ`.
pub fn fib_order(tau: &Poly2) -> Result<u64> {
    let d = check_irreducible_not_x(tau)?;
    if d > MAX_DEGREE as usize {
        return Err(Error::FieldTooLarge(d as u32));
    }
    if 2 * d <= MAX_DEGREE as usize {
        let f = make_field(d as u32)?;
        let z = f.roots(tau)?[0];
        return match f.unit_quadratic_roots(z)? {
            QuadRoots::Double(_) => Ok(1),
            QuadRoots::Split(a, _) => f.elem_order(a),
            QuadRoots::Conjugate(a, _) => make_field(2 * d as u32)?.elem_order(a),
        };
    }
    fib_order_by_ladder(tau)
}

/// `ford τ` via the Dickson ladder `V_(2k) = V_k^2`,
/// `V_(2k+1) = V_k V_(k+1) + z` evaluated at a root `z` of `τ`; the order
/// is the least divisor `n` of `q ± 1` with `V_n(z) = 0`.
pub fn fib_order_by_ladder(tau: &Poly2) -> Result<u64> {
    let d = check_irreducible_not_x(tau)?;
    if d > MAX_DEGREE as usize {
        return Err(Error::FieldTooLarge(d as u32));
    }
    let f = make_field(d as u32)?;
    let z = f.roots(tau)?[0].value;
    let q = 1u64 << d;
    let inv = f.inv_raw(z)?;
    let n = if f.trace_raw(inv) { q + 1 } else { q - 1 };
    let vanishes = |k: u64| -> bool {
        let (mut a, mut b) = (0u64, z);
        for bit in (0..64 - k.leading_zeros()).rev() {
            let ab = f.mul_raw(a, b) ^ z;
            if (k >> bit) & 1 == 1 {
                a = ab;
                b = f.sqr_raw(b);
            } else {
                b = ab;
                a = f.sqr_raw(a);
            }
        }
        a == 0
    };
    let mut ord = n;
    for (p, _) in numtheory::factor(n) {
        while ord % p == 0 && vanishes(ord / p) {
            ord /= p;
        }
    }
    Ok(ord)
}

/// `ρ_n = prod_(d | n) F_(n/d)^μ(d)`, the primitive part of `F_n`.
pub fn rho(n: u64) -> Result<Poly2> {
    if n == 0 {
        return Err(Error::NonPositiveIndex);
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenInput);
    }
    let mut num = Poly2::one();
    let mut den = Poly2::one();
    for d in divisors(n) {
        match mobius(d) {
            1 => num = num.mul(&cdf(CdfKind::Fibonacci, n / d)?),
            -1 => den = den.mul(&cdf(CdfKind::Fibonacci, n / d)?),
            _ => {}
        }
    }
    num.div_exact(&den)
}

/// `R_k = F_(k+1) + F_k` for `n = 2k + 1`; `R_k^2 = F_n`.
pub fn fib_sqrt(n: u64) -> Result<Poly2> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenInput);
    }
    let k = (n - 1) / 2;
    let t = cdf_table(CdfKind::Fibonacci, k + 1)?;
    Ok(t[k as usize + 1].add(&t[k as usize]))
}

/// Exponents `α_1 < ... < α_s` with `p = 1 + sum T_(α_i)`.
pub fn cheb_decompose(p: &Poly2) -> Result<Vec<u64>> {
    if !p.coeff(0) {
        return Err(Error::NonUnitConstantTerm);
    }
    let mut rest = p.add(&Poly2::one());
    let Some(top) = rest.degree() else {
        return Ok(Vec::new());
    };
    let table = cdf_table(CdfKind::FirstKind, top as u64)?;
    let mut out = Vec::new();
    while let Some(d) = rest.degree() {
        out.push(d as u64);
        rest.add_assign(&table[d]);
    }
    out.reverse();
    Ok(out)
}

/// Minimal polynomial of `ζ + 1/ζ` for a root `ζ` of `τ`.
///
/// Writing the palindrome `τ(x) τ(1/x)` (or `τ` itself when `τ` is
/// palindromic) as `x^s (c_0 + sum_j c_j (x^j + x^-j))`, the answer is
/// `c_0 + sum_j c_j T_j`.
pub fn trace_min_poly(tau: &Poly2) -> Result<Poly2> {
    let d = tau.deg()?;
    if !poly2::is_irreducible(tau) {
        return Err(Error::NotIrreducible);
    }
    if d == 1 {
        return Err(Error::DegenerateInput(tau.to_string()));
    }
    let pal = if tau.is_palindromic() { tau.clone() } else { tau.mul(&tau.reciprocal()) };
    let s = pal.deg()? / 2;
    let table = cdf_table(CdfKind::FirstKind, s as u64)?;
    let mut eta = Poly2::zero();
    if pal.coeff(s) {
        eta.flip(0);
    }
    for (j, t) in table.iter().enumerate().skip(1) {
        if pal.coeff(s + j) {
            eta.add_assign(t);
        }
    }
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field2::make_field;
    use crate::numtheory::{euler_phi, order_profile};
    use crate::poly2::{factor, irreducibles_of_degree};

    fn p(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    #[test]
    fn family_examples() {
        assert_eq!(cdf(CdfKind::FirstKind, 3).unwrap(), p("x^3+x"));
        assert_eq!(cdf(CdfKind::SecondKind, 2).unwrap(), p("x^2+1"));
        assert_eq!(cdf(CdfKind::Fibonacci, 5).unwrap(), p("x^4+x^2+1"));
        assert_eq!(cdf(CdfKind::FirstKind, 0).unwrap(), Poly2::zero());
        assert_eq!(cdf(CdfKind::SecondKind, 0).unwrap(), Poly2::one());
    }

    #[test]
    fn families_are_linked() {
        let t = cdf_table(CdfKind::FirstKind, 80).unwrap();
        let e = cdf_table(CdfKind::SecondKind, 80).unwrap();
        let f = cdf_table(CdfKind::Fibonacci, 80).unwrap();
        for n in 1..=80 {
            assert_eq!(t[n], f[n].shl(1));
            assert_eq!(t[n], e[n - 1].shl(1));
            assert_eq!(t[n].degree(), Some(n));
            assert_eq!(e[n].degree(), Some(n));
            assert_eq!(f[n].degree(), Some(n - 1));
        }
    }

    #[test]
    fn modular_evaluation_matches_recurrence() {
        let m = p("x^7+x^3+1");
        for kind in [CdfKind::FirstKind, CdfKind::SecondKind, CdfKind::Fibonacci] {
            let table = cdf_table(kind, 200).unwrap();
            for (n, poly) in table.iter().enumerate() {
                assert_eq!(cdf_mod(kind, n as u64, &m).unwrap(), poly.rem(&m).unwrap(), "{kind}{n}");
            }
        }
    }

    #[test]
    fn fibonacci_orders() {
        assert_eq!(fib_order(&p("x+1")).unwrap(), 3);
        assert_eq!(fib_order(&p("x^2+x+1")).unwrap(), 5);
        assert_eq!(fib_order(&p("x^3+x+1")).unwrap(), 9);
        assert_eq!(fib_order(&p("x^3+x^2+1")).unwrap(), 7);
        assert_eq!(fib_order(&p("x")), Err(Error::IsX));
        assert_eq!(fib_order(&p("x^2+1")), Err(Error::NotIrreducible));
    }

    #[test]
    fn fibonacci_order_is_least_divisibility_index() {
        let f = cdf_table(CdfKind::Fibonacci, 200).unwrap();
        for d in 1..=7 {
            for tau in irreducibles_of_degree(d) {
                if tau == Poly2::x() {
                    continue;
                }
                let brute = (1..f.len()).find(|&n| f[n].divisible_by(&tau).unwrap()).unwrap();
                assert_eq!(fib_order(&tau).unwrap(), brute as u64, "{tau}");
                assert_eq!(fib_order_by_ladder(&tau).unwrap(), brute as u64, "{tau}");
            }
        }
    }

    #[test]
    fn ladder_handles_large_degrees() {
        // The least irreducible of degree 40 and 63; check τ | F_ford via cdf_mod.
        for d in [33u32, 40, 63] {
            let tau = crate::field2::canonical_modulus(d);
            let n = fib_order(&tau).unwrap();
            assert!(cdf_mod(CdfKind::Fibonacci, n, &tau).unwrap().is_zero());
            let (f, f0) = order_profile(n).unwrap();
            assert_eq!(f0, d as u64, "f={f}");
        }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(1).unwrap(), Poly2::one());
        assert_eq!(rho(3).unwrap(), p("x^2+1"));
        assert_eq!(rho(5).unwrap(), p("x^4+x^2+1"));
        assert_eq!(rho(4), Err(Error::EvenInput));
    }

    #[test]
    fn rho_multiplies_back_to_fibonacci() {
        for n in (1..=63u64).step_by(2) {
            let prod = divisors(n).iter().fold(Poly2::one(), |acc, &d| acc.mul(&rho(d).unwrap()));
            assert_eq!(prod, cdf(CdfKind::Fibonacci, n).unwrap(), "n={n}");
            if n >= 3 {
                assert_eq!(rho(n).unwrap().degree(), Some(euler_phi(n) as usize), "n={n}");
            }
        }
    }

    #[test]
    fn fib_sqrt_examples() {
        assert_eq!(fib_sqrt(5).unwrap(), p("x^2+x+1"));
        assert_eq!(fib_sqrt(3).unwrap(), p("x+1"));
        assert_eq!(fib_sqrt(1).unwrap(), Poly2::one());
        assert_eq!(fib_sqrt(2), Err(Error::EvenInput));
        for n in (1..=101u64).step_by(2) {
            let r = fib_sqrt(n).unwrap();
            assert_eq!(r.square(), cdf(CdfKind::Fibonacci, n).unwrap());
            assert!(r.gcd(&r.derivative()).is_one());
            assert_eq!(r.degree(), Some((n as usize - 1) / 2));
        }
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(cheb_decompose(&Poly2::one()).unwrap(), Vec::<u64>::new());
        assert_eq!(cheb_decompose(&p("x^2+x+1")).unwrap(), vec![1, 2]);
        assert_eq!(cheb_decompose(&p("x^4+x+1")).unwrap(), vec![1, 4]);
        assert_eq!(cheb_decompose(&p("x^2")), Err(Error::NonUnitConstantTerm));
        let t = cdf_table(CdfKind::FirstKind, 20).unwrap();
        for v in (1u64..1 << 12).step_by(2) {
            let poly = Poly2::from_u64(v);
            let rebuilt = cheb_decompose(&poly).unwrap().iter().fold(Poly2::one(), |acc, &a| acc.add(&t[a as usize]));
            assert_eq!(rebuilt, poly);
        }
    }

    #[test]
    fn trace_min_poly_examples() {
        assert_eq!(trace_min_poly(&p("x^2+x+1")).unwrap(), p("x+1"));
        assert_eq!(trace_min_poly(&p("x^4+x^3+x^2+x+1")).unwrap(), p("x^2+x+1"));
        assert_eq!(trace_min_poly(&p("x^3+x+1")).unwrap(), p("x^3+x^2+1"));
        assert!(matches!(trace_min_poly(&p("x+1")), Err(Error::DegenerateInput(_))));
        assert!(matches!(trace_min_poly(&p("x")), Err(Error::DegenerateInput(_))));
        assert_eq!(trace_min_poly(&p("x^2+1")), Err(Error::NotIrreducible));
    }

    #[test]
    fn trace_min_poly_matches_field_computation() {
        for d in 2..=8usize {
            let f = make_field(2 * d as u32).unwrap();
            for tau in irreducibles_of_degree(d) {
                let zeta = f.roots(&tau).unwrap()[0];
                let z = f.add(zeta, f.inv(zeta).unwrap()).unwrap();
                assert_eq!(trace_min_poly(&tau).unwrap(), f.min_poly(z).unwrap(), "{tau}");
            }
        }
    }

    #[test]
    fn fibonacci_factor_structure() {
        // τ | F_n exactly when ford τ | n.
        let f = cdf_table(CdfKind::Fibonacci, 130).unwrap();
        for d in 1..=6 {
            for tau in irreducibles_of_degree(d).into_iter().filter(|t| *t != Poly2::x()) {
                let fo = fib_order(&tau).unwrap();
                for (n, fp) in f.iter().enumerate().skip(1) {
                    assert_eq!(fp.divisible_by(&tau).unwrap(), (n as u64).is_multiple_of(fo));
                }
            }
        }
        // Squares: F_(2k+1) has every factor to an even power.
        for n in (3..=41u64).step_by(2) {
            assert!(factor(&f[n as usize]).unwrap().iter().all(|(_, m)| m % 2 == 0));
        }
    }
}
