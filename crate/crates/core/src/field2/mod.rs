//! Binary finite fields `F_(2^r)` for `1 <= r <= 63`.
//!
//! Elements are `u64` bitmasks of polynomials modulo the canonical modulus
//! of degree `r`: the numerically least irreducible polynomial of that
//! degree (`x^3+x+1`, `x^4+x+1`, ...). Contexts are cached per degree, so
//! two contexts of the same degree are interchangeable.

mod extpoly;

pub use extpoly::ExtPoly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::clmul::clmul;
use crate::error::{Error, Result};
use crate::numtheory;
use crate::poly2::{self, Poly2};

pub use crate::numtheory::order_profile;

pub const MAX_DEGREE: u32 = 63;

/// Element of a binary field, tagged with the field degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct FieldElem {
    pub value: u64,
    pub r: u32,
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}@r={}", self.value, self.r)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Inner {
    r: u32,
    modulus: Poly2,
    /// Modulus without its leading term.
    low: u64,
    mask: u64,
    trace_mask: OnceLock<u64>,
    quad_table: OnceLock<Vec<u64>>,
    order_factors: OnceLock<Vec<(u64, u32)>>,
}

/// Handle to a cached field of degree `r`.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_2^{} mod {}", self.inner.r, self.inner.modulus)
    }
}

/// Roots of `ξ^2 + uξ + 1`, i.e. solutions of `ξ + 1/ξ = u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadRoots {
    /// `u = 0`: the double root 1.
    Double(FieldElem),
    /// Two distinct roots in the base field, numerically ascending.
    Split(FieldElem, FieldElem),
    /// Two roots in the quadratic extension, numerically ascending.
    Conjugate(FieldElem, FieldElem),
}

/// Numerically least irreducible polynomial of degree `r`.
pub fn canonical_modulus(r: u32) -> Poly2 {
    let top = 1u128 << r;
    (top..2 * top).map(Poly2::from_u128).find(poly2::is_irreducible).expect("irreducibles exist in every degree")
}

/// Cached context for `F_(2^r)`.
pub fn make_field(r: u32) -> Result<FieldCtx> {
    if r == 0 || r > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(r));
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, FieldCtx>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = cache.lock().unwrap().get(&r) {
        return Ok(ctx.clone());
    }
    let modulus = canonical_modulus(r);
    let bits = modulus.limbs()[0];
    let mask = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
    let ctx = FieldCtx {
        inner: Arc::new(Inner {
            r,
            low: bits & mask,
            mask,
            modulus,
            trace_mask: OnceLock::new(),
            quad_table: OnceLock::new(),
            order_factors: OnceLock::new(),
        }),
    };
    Ok(cache.lock().unwrap().entry(r).or_insert(ctx).clone())
}

impl FieldCtx {
    pub fn degree(&self) -> u32 {
        self.inner.r
    }

    pub fn modulus(&self) -> &Poly2 {
        &self.inner.modulus
    }

    /// `2^r - 1`.
    pub fn unit_count(&self) -> u64 {
        self.inner.mask
    }

    /// Element from its bitmask.
    pub fn elem(&self, value: u64) -> Result<FieldElem> {
        if value & !self.inner.mask != 0 {
            return Err(Error::InvalidArgument(format!("0x{value:x} is not reduced")));
        }
        Ok(FieldElem { value, r: self.inner.r })
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { value: 0, r: self.inner.r }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { value: 1, r: self.inner.r }
    }

    /// Image of a polynomial in the field.
    pub fn from_poly(&self, p: &Poly2) -> FieldElem {
        let v = p.rem(&self.inner.modulus).expect("modulus is non-zero");
        FieldElem { value: v.to_u64().expect("reduced"), r: self.inner.r }
    }

    fn check(&self, a: FieldElem) -> Result<u64> {
        if a.r != self.inner.r {
            return Err(Error::FieldMismatch);
        }
        Ok(a.value)
    }

    #[inline]
    fn reduce(&self, mut p: u128) -> u64 {
        let r = self.inner.r;
        loop {
            let hi = p >> r;
            if hi == 0 {
                return p as u64;
            }
            p = (p & self.inner.mask as u128) ^ clmul(hi as u64, self.inner.low);
        }
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        self.reduce(clmul(a, b))
    }

    #[inline]
    pub fn sqr_raw(&self, a: u64) -> u64 {
        self.reduce(clmul(a, a))
    }

    pub fn pow_raw(&self, a: u64, mut e: u128) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.sqr_raw(base);
            }
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm on bit polynomials.
    pub fn inv_raw(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let m = self.inner.low as u128 | (1u128 << self.inner.r);
        let (mut r0, mut r1) = (m, a as u128);
        let (mut s0, mut s1) = (0u128, 1u128);
        while r1 != 0 {
            let d0 = 127 - r0.leading_zeros() as i32;
            let d1 = 127 - r1.leading_zeros() as i32;
            if d0 < d1 {
                std::mem::swap(&mut r0, &mut r1);
                std::mem::swap(&mut s0, &mut s1);
                continue;
            }
            let sh = (d0 - d1) as u32;
            r0 ^= r1 << sh;
            s0 ^= s1 << sh;
        }
        // r0 is the gcd (1); s0 the cofactor, possibly unreduced.
        let mut s = s0;
        while s >> self.inner.r != 0 {
            let d = 127 - s.leading_zeros();
            s ^= m << (d - self.inner.r);
        }
        Ok(s as u64)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(FieldElem { value: self.check(a)? ^ self.check(b)?, r: self.inner.r })
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(FieldElem { value: self.mul_raw(self.check(a)?, self.check(b)?), r: self.inner.r })
    }

    pub fn pow(&self, a: FieldElem, e: u128) -> Result<FieldElem> {
        Ok(FieldElem { value: self.pow_raw(self.check(a)?, e), r: self.inner.r })
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        Ok(FieldElem { value: self.inv_raw(self.check(a)?)?, r: self.inner.r })
    }

    /// `a^(2^k)`.
    pub fn frobenius(&self, a: FieldElem, k: u32) -> Result<FieldElem> {
        let mut v = self.check(a)?;
        for _ in 0..k % self.inner.r {
            v = self.sqr_raw(v);
        }
        Ok(FieldElem { value: v, r: self.inner.r })
    }

    fn trace_mask(&self) -> u64 {
        *self.inner.trace_mask.get_or_init(|| {
            let mut mask = 0u64;
            for i in 0..self.inner.r {
                let mut v = 1u64 << i;
                let mut t = 0u64;
                for _ in 0..self.inner.r {
                    t ^= v;
                    v = self.sqr_raw(v);
                }
                debug_assert!(t <= 1);
                mask |= t << i;
            }
            mask
        })
    }

    #[inline]
    pub fn trace_raw(&self, a: u64) -> bool {
        (a & self.trace_mask()).count_ones() % 2 == 1
    }

    /// Absolute trace to `F_2`.
    pub fn trace(&self, a: FieldElem) -> Result<bool> {
        Ok(self.trace_raw(self.check(a)?))
    }

    /// Prime factorisation of `2^r - 1`, cached.
    pub fn unit_group_factors(&self) -> &[(u64, u32)] {
        self.inner.order_factors.get_or_init(|| numtheory::factor(self.inner.mask))
    }

    pub fn order_raw(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let fs = self.unit_group_factors();
        let mut ord = self.inner.mask;
        for &(p, _) in fs {
            while ord.is_multiple_of(p) && self.pow_raw(a, (ord / p) as u128) == 1 {
                ord /= p;
            }
        }
        Ok(ord)
    }

    /// Multiplicative order of a non-zero element.
    pub fn elem_order(&self, a: FieldElem) -> Result<u64> {
        self.order_raw(self.check(a)?)
    }

    /// Numerically least generator of the unit group.
    pub fn primitive_element(&self) -> FieldElem {
        let n = self.inner.mask;
        let v = (1..=n).find(|&v| self.order_raw(v).ok() == Some(n)).expect("unit group is cyclic");
        FieldElem { value: v, r: self.inner.r }
    }

    /// Particular solutions of `t^2 + t = x^i` (or `x^i + x^j0` when
    /// `x^i` has trace 1), one per basis vector.
    fn quad_table(&self) -> &[u64] {
        self.inner.quad_table.get_or_init(|| {
            let r = self.inner.r as usize;
            let tm = self.trace_mask();
            let j0 = tm.trailing_zeros() as u64;
            // Columns of L(t) = t^2 + t.
            let cols: Vec<u64> = (0..r).map(|i| self.sqr_raw(1 << i) ^ (1 << i)).collect();
            (0..r)
                .map(|i| {
                    let mut target = 1u64 << i;
                    if (tm >> i) & 1 == 1 {
                        target ^= 1 << j0;
                    }
                    solve_gf2_columns(&cols, target).expect("trace-zero targets are in the image")
                })
                .collect()
        })
    }

    /// A solution of `t^2 + t = c` with constant bit 0, or `None` when
    /// `Tr(c) = 1`.
    pub fn solve_artin_schreier_raw(&self, c: u64) -> Option<u64> {
        if self.trace_raw(c) {
            return None;
        }
        let table = self.quad_table();
        let mut t = 0u64;
        let mut bits = c;
        while bits != 0 {
            t ^= table[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        Some(t ^ (t & 1))
    }

    /// Roots of `ξ^2 + uξ + 1` for a base-field element `u`.
    pub fn unit_quadratic_roots(&self, u: FieldElem) -> Result<QuadRoots> {
        let uv = self.check(u)?;
        if uv == 0 {
            return Ok(QuadRoots::Double(self.one()));
        }
        let c = self.sqr_raw(self.inv_raw(uv)?);
        if let Some(t) = self.solve_artin_schreier_raw(c) {
            let (a, b) = (self.mul_raw(uv, t), self.mul_raw(uv, t ^ 1));
            let (a, b) = (a.min(b), a.max(b));
            let r = self.inner.r;
            return Ok(QuadRoots::Split(FieldElem { value: a, r }, FieldElem { value: b, r }));
        }
        let ext = make_field(2 * self.inner.r).map_err(|_| Error::FieldTooLarge(2 * self.inner.r))?;
        let ue = self.embed(u, &ext)?;
        match ext.unit_quadratic_roots(ue)? {
            QuadRoots::Split(a, b) => Ok(QuadRoots::Conjugate(a, b)),
            other => Err(Error::Inconsistent(format!("unexpected roots {other:?} in extension"))),
        }
    }

    /// Image of `z` under the embedding `F_(2^d) -> F_(2^R)` sending the
    /// generator to the numerically least root of the source modulus.
    pub fn embed(&self, z: FieldElem, target: &FieldCtx) -> Result<FieldElem> {
        let d = self.inner.r;
        let big = target.inner.r;
        if self.check(z).is_err() {
            return Err(Error::FieldMismatch);
        }
        if !big.is_multiple_of(d) {
            return Err(Error::IncompatibleDegrees);
        }
        let beta = embedding_root(self, target)?;
        let mut acc = 0u64;
        let mut pw = 1u64;
        for i in 0..d {
            if (z.value >> i) & 1 == 1 {
                acc ^= pw;
            }
            pw = target.mul_raw(pw, beta);
        }
        Ok(FieldElem { value: acc, r: big })
    }

    /// `p(z)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly2, z: FieldElem) -> Result<FieldElem> {
        let zv = self.check(z)?;
        let mut acc = 0u64;
        if let Some(d) = p.degree() {
            for i in (0..=d).rev() {
                acc = self.mul_raw(acc, zv) ^ p.coeff(i) as u64;
            }
        }
        Ok(FieldElem { value: acc, r: self.inner.r })
    }

    /// Size of the Frobenius orbit of `z`, i.e. its degree over `F_2`.
    pub fn degree_over_prime(&self, z: FieldElem) -> Result<u32> {
        let v = self.check(z)?;
        let mut w = self.sqr_raw(v);
        let mut k = 1;
        while w != v {
            w = self.sqr_raw(w);
            k += 1;
        }
        Ok(k)
    }

    /// Minimal polynomial of `z` over `F_2`.
    pub fn min_poly(&self, z: FieldElem) -> Result<Poly2> {
        let v = self.check(z)?;
        let mut p = ExtPoly::one();
        let mut w = v;
        loop {
            p = p.mul(self, &ExtPoly::from_coeffs(vec![w, 1]));
            w = self.sqr_raw(w);
            if w == v {
                break;
            }
        }
        p.to_prime_poly()
    }

    /// Distinct roots of `f` in this field, numerically ascending.
    pub fn roots(&self, f: &Poly2) -> Result<Vec<FieldElem>> {
        let ef = ExtPoly::from_prime_poly(f);
        Ok(ef.roots(self)?.into_iter().map(|value| FieldElem { value, r: self.inner.r }).collect())
    }
}

/// Least root of the source modulus inside the target, cached per pair.
fn embedding_root(src: &FieldCtx, target: &FieldCtx) -> Result<u64> {
    static ROOTS: OnceLock<Mutex<HashMap<(u32, u32), u64>>> = OnceLock::new();
    let key = (src.degree(), target.degree());
    let cache = ROOTS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&b) = cache.lock().unwrap().get(&key) {
        return Ok(b);
    }
    let roots = target.roots(src.modulus())?;
    let beta = roots.first().ok_or(Error::IncompatibleDegrees)?.value;
    cache.lock().unwrap().insert(key, beta);
    Ok(beta)
}

/// Solve `sum_i x_i cols[i] = target` over `F_2`; free variables are 0.
fn solve_gf2_columns(cols: &[u64], target: u64) -> Option<u64> {
    // Each row: (column vector, combination of original columns used).
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for (i, &c) in cols.iter().enumerate() {
        let mut v = c;
        let mut comb = 1u64 << i;
        for &(b, bc) in &basis {
            if v ^ b < v {
                v ^= b;
                comb ^= bc;
            }
        }
        if v != 0 {
            basis.push((v, comb));
            basis.sort_unstable_by_key(|b| std::cmp::Reverse(b.0));
        }
    }
    let mut v = target;
    let mut comb = 0u64;
    for &(b, bc) in &basis {
        if v ^ b < v {
            v ^= b;
            comb ^= bc;
        }
    }
    (v == 0).then_some(comb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(make_field(3).unwrap().modulus().to_string(), "x^3+x+1");
        assert_eq!(make_field(4).unwrap().modulus().to_string(), "x^4+x+1");
        assert_eq!(make_field(8).unwrap().modulus().to_string(), "x^8+x^4+x^3+x+1");
        assert!(make_field(63).is_ok());
        assert_eq!(make_field(64).unwrap_err(), Error::DegreeOutOfRange(64));
    }

    #[test]
    fn element_display() {
        let f = make_field(3).unwrap();
        assert_eq!(f.elem(6).unwrap().to_string(), "0x6@r=3");
        assert!(f.elem(8).is_err());
    }

    #[test]
    fn orders_and_traces() {
        let f = make_field(4).unwrap();
        assert_eq!(f.elem_order(f.elem(2).unwrap()).unwrap(), 15);
        assert_eq!(f.elem_order(f.one()).unwrap(), 1);
        assert_eq!(f.elem_order(f.zero()), Err(Error::ZeroElement));
        assert_eq!(f.primitive_element().value, 2);
        for r in 1..=12 {
            let f = make_field(r).unwrap();
            let ones = (0..1u64 << r).filter(|&a| f.trace_raw(a)).count();
            assert_eq!(ones, 1 << (r - 1), "r={r}");
        }
    }

    #[test]
    fn quadratic_roots() {
        let f = make_field(3).unwrap();
        assert_eq!(f.unit_quadratic_roots(f.zero()).unwrap(), QuadRoots::Double(f.one()));
        for u in 1..8u64 {
            let ue = f.elem(u).unwrap();
            match f.unit_quadratic_roots(ue).unwrap() {
                QuadRoots::Split(a, b) => {
                    assert_ne!(a, b);
                    assert_eq!(f.mul(a, b).unwrap(), f.one());
                    assert_eq!(f.add(a, b).unwrap(), ue);
                    assert!(!f.trace(f.inv(ue).unwrap()).unwrap());
                }
                QuadRoots::Conjugate(a, b) => {
                    let ext = make_field(6).unwrap();
                    assert_eq!(ext.mul(a, b).unwrap(), ext.one());
                    assert_eq!(ext.add(a, b).unwrap(), f.embed(ue, &ext).unwrap());
                    assert!(f.trace(f.inv(ue).unwrap()).unwrap());
                }
                QuadRoots::Double(_) => panic!("only u = 0 is double"),
            }
        }
        let big = make_field(40).unwrap();
        assert!(matches!(
            big.unit_quadratic_roots(big.elem(5).unwrap()),
            Ok(QuadRoots::Split(..)) | Err(Error::FieldTooLarge(80))
        ));
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = make_field(2).unwrap();
        let big = make_field(6).unwrap();
        for a in 0..4u64 {
            for b in 0..4u64 {
                let (ea, eb) = (small.elem(a).unwrap(), small.elem(b).unwrap());
                let lhs = small.embed(small.mul(ea, eb).unwrap(), &big).unwrap();
                let rhs = big.mul(small.embed(ea, &big).unwrap(), small.embed(eb, &big).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(small.embed(small.one(), &make_field(5).unwrap()), Err(Error::IncompatibleDegrees));
    }

    #[test]
    fn minimal_polynomials() {
        let f = make_field(4).unwrap();
        assert_eq!(f.min_poly(f.elem(2).unwrap()).unwrap().to_string(), "x^4+x+1");
        assert_eq!(f.min_poly(f.one()).unwrap().to_string(), "x+1");
        assert_eq!(f.min_poly(f.zero()).unwrap().to_string(), "x");
        for v in 0..16 {
            let z = f.elem(v).unwrap();
            let mp = f.min_poly(z).unwrap();
            assert!(crate::poly2::is_irreducible(&mp));
            assert_eq!(f.eval_poly(&mp, z).unwrap(), f.zero());
            assert_eq!(mp.degree().unwrap() as u32, f.degree_over_prime(z).unwrap());
        }
    }

    proptest! {
        #[test]
        fn field_axioms(r in 1u32..=63, a: u64, b: u64, c: u64) {
            let f = make_field(r).unwrap();
            let m = f.unit_count();
            let (a, b, c) = (a & m, b & m, c & m);
            prop_assert_eq!(f.mul_raw(a, b), f.mul_raw(b, a));
            prop_assert_eq!(f.mul_raw(f.mul_raw(a, b), c), f.mul_raw(a, f.mul_raw(b, c)));
            prop_assert_eq!(f.mul_raw(a, b ^ c), f.mul_raw(a, b) ^ f.mul_raw(a, c));
            if a != 0 {
                prop_assert_eq!(f.mul_raw(a, f.inv_raw(a).unwrap()), 1);
                prop_assert_eq!(f.pow_raw(a, m as u128), 1);
            }
            prop_assert_eq!(f.trace_raw(f.sqr_raw(a)), f.trace_raw(a));
            prop_assert_eq!(f.trace_raw(a ^ b), f.trace_raw(a) ^ f.trace_raw(b));
        }

        #[test]
        fn artin_schreier_solutions(r in 1u32..=63, c: u64) {
            let f = make_field(r).unwrap();
            let c = c & f.unit_count();
            match f.solve_artin_schreier_raw(c) {
                Some(t) => prop_assert_eq!(f.sqr_raw(t) ^ t, c),
                None => prop_assert!(f.trace_raw(c)),
            }
        }
    }
}
