//! Square-free decomposition, distinct-degree and equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly2;
use crate::error::{Error, Result};

/// Square-free decomposition: pairwise coprime square-free parts with their
/// multiplicities.
pub fn square_free(f: &Poly2) -> Result<Vec<(Poly2, u32)>> {
    f.deg()?;
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c)?;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y)?;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w)?;
    }
    if !c.is_one() {
        for (g, m) in square_free(&c.sqrt()?)? {
            out.push((g, 2 * m));
        }
    }
    Ok(out)
}

/// Split a square-free polynomial into products of irreducibles of equal
/// degree, as `(product, degree)` pairs.
pub fn distinct_degree(f: &Poly2) -> Result<Vec<(Poly2, usize)>> {
    f.deg()?;
    let x = Poly2::x();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut k = 1;
    while rest.deg()? >= 2 * k {
        h = h.sqrmod(&rest)?;
        let g = rest.gcd(&h.add(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            h = h.rem(&rest)?;
            out.push((g, k));
        }
        k += 1;
    }
    if rest.deg()? > 0 {
        let d = rest.deg()?;
        out.push((rest, d));
    }
    Ok(out)
}

/// Split a product of distinct irreducibles of degree `k` into its factors.
pub fn equal_degree_split(f: &Poly2, k: usize, rng: &mut impl Rng) -> Result<Vec<Poly2>> {
    let n = f.deg()?;
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidArgument(format!("degree {n} is not a multiple of {k}")));
    }
    if n == k {
        return Ok(vec![f.clone()]);
    }
    loop {
        let limbs: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.gen()).collect();
        let a = Poly2::from_limbs(limbs).truncate(n);
        if a.degree().unwrap_or(0) < 1 {
            continue;
        }
        let mut s = a.clone();
        let mut t = a.clone();
        for _ in 1..k {
            s = s.sqrmod(f)?;
            t.add_assign(&s);
        }
        let g = f.gcd(&t);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut parts = equal_degree_split(&g, k, rng)?;
            parts.extend(equal_degree_split(&f.div_exact(&g)?, k, rng)?);
            return Ok(parts);
        }
    }
}

/// Complete factorisation into irreducibles with multiplicities, sorted by
/// degree then numeric value.
pub fn factor(f: &Poly2) -> Result<Vec<(Poly2, u32)>> {
    f.deg()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x6172_6d6f_6e69_6361);
    let mut out = Vec::new();
    for (part, mult) in square_free(f)? {
        for (prod, k) in distinct_degree(&part)? {
            for g in equal_degree_split(&prod, k, &mut rng)? {
                out.push((g, mult));
            }
        }
    }
    out.sort();
    let mut merged: Vec<(Poly2, u32)> = Vec::with_capacity(out.len());
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, e)) if *h == g => *e += m,
            _ => merged.push((g, m)),
        }
    }
    Ok(merged)
}

/// Ben-Or test plus the closing check `x^(2^n) = x mod f`.
pub fn is_irreducible(f: &Poly2) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let x = Poly2::x();
    let Ok(mut h) = x.rem(f) else { return false };
    for k in 1..=n {
        h = h.sqrmod(f).expect("non-zero modulus");
        if k <= n / 2 && !f.gcd(&h.add(&x)).is_one() {
            return false;
        }
    }
    h == x.rem(f).expect("non-zero modulus")
}

/// All irreducible polynomials of degree `d`, ascending. Intended for small `d`.
pub fn irreducibles_of_degree(d: usize) -> Vec<Poly2> {
    assert!((1..=24).contains(&d), "degree {d} out of range");
    if d == 1 {
        return vec![Poly2::x(), Poly2::from_u64(3)];
    }
    let top = 1u64 << d;
    (0..top / 2).map(|low| Poly2::from_u64(top | (low << 1) | 1)).filter(is_irreducible).collect()
}
