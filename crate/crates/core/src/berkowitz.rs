//! Division-free characteristic polynomials (Berkowitz) over commutative
//! rings of characteristic 2.

use crate::poly2::Poly2;

/// Commutative ring of characteristic 2. Negation is the identity, so the
/// Berkowitz recurrence needs no signs.
pub trait Char2Ring: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Char2Ring for bool {
    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        self ^ other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
}

impl Char2Ring for Poly2 {
    fn zero() -> Self {
        Poly2::zero()
    }
    fn one() -> Self {
        Poly2::one()
    }
    fn add(&self, other: &Self) -> Self {
        Poly2::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly2::mul(self, other)
    }
}

/// Coefficients of `det(λI + A)`, lowest degree first (length `n + 1`).
pub fn charpoly<R: Char2Ring>(a: &[Vec<R>]) -> Vec<R> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    // Coefficients of the leading k x k block, highest degree first.
    let mut p = vec![R::one()];
    for k in 0..n {
        let mut t = Vec::with_capacity(k + 2);
        t.push(R::one());
        t.push(a[k][k].clone());
        let mut v: Vec<R> = (0..k).map(|i| a[i][k].clone()).collect();
        for _ in 0..k {
            let dot = (0..k).fold(R::zero(), |acc, j| acc.add(&a[k][j].mul(&v[j])));
            t.push(dot);
            v = (0..k).map(|i| (0..k).fold(R::zero(), |acc, j| acc.add(&a[i][j].mul(&v[j])))).collect();
        }
        let mut next = vec![R::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for j in 0..=i.min(k) {
                *slot = slot.add(&t[i - j].mul(&p[j]));
            }
        }
        p = next;
    }
    p.reverse();
    p
}

/// Determinant over a characteristic-2 ring.
pub fn determinant<R: Char2Ring>(a: &[Vec<R>]) -> R {
    if a.is_empty() {
        return R::one();
    }
    charpoly(a).swap_remove(0)
}
