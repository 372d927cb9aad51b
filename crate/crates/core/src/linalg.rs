//! Bit-packed vectors and matrices over GF(2).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::berkowitz;
use crate::error::{Error, Result};
use crate::numtheory::checked_lcm;
use crate::poly2::{self, root_order, Poly2};

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec { len, words: vec![u64::MAX; len.div_ceil(64)] };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    fn clear_tail(&mut self) {
        if !self.len.is_multiple_of(64) {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << (self.len % 64)) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        let mut v = self.clone();
        for (a, b) in v.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        v
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(64 * i + b)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Entries at the given positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        BitVec::from_bools(&positions.iter().map(|&i| self.get(i)).collect::<Vec<_>>())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "{s}")
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::MalformedPattern(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitVec::from_bools(&bits))
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// Reduced row-echelon data: the reduced rows, their pivot columns and the
/// invertible transform `P` with `P A = R` (zero rows included).
pub struct Echelon {
    pub reduced: BitMatrix,
    pub pivots: Vec<usize>,
    pub transform: BitMatrix,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v);
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        BitMatrix { cols: self.cols, rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.xor(b)).collect() }
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix { cols: other.cols, rows }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> BitMatrix {
        let mut base = self.clone();
        let mut acc = BitMatrix::identity(self.rows.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `p(A)` for a polynomial `p`.
    pub fn eval_poly(&self, p: &Poly2) -> BitMatrix {
        let n = self.rows.len();
        let mut acc = BitMatrix::zeros(n, n);
        if let Some(d) = p.degree() {
            for i in (0..=d).rev() {
                acc = acc.mul(self);
                if p.coeff(i) {
                    acc = acc.add(&BitMatrix::identity(n));
                }
            }
        }
        acc
    }

    /// Gauss-Jordan elimination with leftmost pivots.
    pub fn echelon(&self) -> Echelon {
        let m = self.rows.len();
        let mut rows = self.rows.clone();
        let mut tr: Vec<BitVec> = (0..m).map(|i| BitVec::unit(m, i)).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..m).find(|&i| rows[i].get(c)) else { continue };
            rows.swap(r, p);
            tr.swap(r, p);
            for i in 0..m {
                if i != r && rows[i].get(c) {
                    let (pr, pt) = (rows[r].clone(), tr[r].clone());
                    rows[i].xor_assign(&pr);
                    tr[i].xor_assign(&pt);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
        Echelon { reduced: BitMatrix { cols: self.cols, rows }, pivots, transform: BitMatrix { cols: m, rows: tr } }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Null-space basis in reduced row-echelon form.
    pub fn kernel(&self) -> Vec<BitVec> {
        let e = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        let basis: Vec<BitVec> = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (i, &p) in e.pivots.iter().enumerate() {
                    if e.reduced.rows[i].get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        rref_rows(self.cols, basis)
    }

    /// A solution of `A x = b` with free variables 0, if one exists.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        let e = self.echelon();
        let pb = e.transform.mul_vec(b);
        if (e.pivots.len()..self.rows.len()).any(|i| pb.get(i)) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (i, &p) in e.pivots.iter().enumerate() {
            x.set(p, pb.get(i));
        }
        Some(x)
    }

    /// Generalised inverse `κ` with `A κ A = A`; the true inverse when `A`
    /// is invertible.
    pub fn pseudo_inverse(&self) -> BitMatrix {
        let e = self.echelon();
        let mut k = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, &p) in e.pivots.iter().enumerate() {
            k.rows[p] = e.transform.rows[i].clone();
        }
        k
    }

    /// Characteristic polynomial, division free.
    pub fn charpoly(&self) -> Poly2 {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let dense: Vec<Vec<bool>> = self.rows.iter().map(BitVec::to_bools).collect();
        let coeffs = berkowitz::charpoly(&dense);
        let mut p = Poly2::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            if c {
                p.flip(i);
            }
        }
        p
    }

    /// Minimal polynomial, from the first linear dependency among `I, A, A^2, ...`.
    pub fn min_poly(&self) -> Poly2 {
        assert!(self.is_square(), "min_poly of a non-square matrix");
        let n = self.rows.len();
        let flatten = |m: &BitMatrix| {
            let mut v = BitVec::zeros(n * n);
            for (i, r) in m.rows.iter().enumerate() {
                for j in r.iter_ones() {
                    v.set(i * n + j, true);
                }
            }
            v
        };
        let mut basis: Vec<(BitVec, Poly2, usize)> = Vec::new();
        let mut power = BitMatrix::identity(n);
        for k in 0..=n {
            let mut v = flatten(&power);
            let mut comb = Poly2::monomial(k);
            for (b, bc, piv) in &basis {
                if v.get(*piv) {
                    v.xor_assign(b);
                    comb.add_assign(bc);
                }
            }
            match v.first_one() {
                None => return comb,
                Some(piv) => basis.push((v, comb, piv)),
            }
            power = power.mul(self);
        }
        unreachable!("Cayley-Hamilton bounds the degree by n")
    }

    /// Least `k > 0` with `A^k = I`; `None` when `A` is singular.
    pub fn order(&self) -> Result<Option<u64>> {
        let mu = self.min_poly();
        if !mu.coeff(0) {
            return Ok(None);
        }
        poly_order(&mu).map(Some)
    }
}

/// Least `k > 0` with `x^k = 1 mod μ`, for `μ(0) = 1`.
pub fn poly_order(mu: &Poly2) -> Result<u64> {
    if !mu.coeff(0) {
        return Err(Error::NonUnitConstantTerm);
    }
    let mut ord = 1u64;
    let mut max_mult = 1;
    for (tau, e) in poly2::factor(mu)? {
        ord = checked_lcm(ord, root_order(&tau)?).ok_or(Error::Overflow)?;
        max_mult = max_mult.max(e);
    }
    let mut t = 0;
    while (1u32 << t) < max_mult {
        t += 1;
    }
    ord.checked_mul(1 << t).ok_or(Error::Overflow)
}

/// Row-reduce a list of vectors to reduced row-echelon form, dropping zeros.
pub fn rref_rows(cols: usize, rows: Vec<BitVec>) -> Vec<BitVec> {
    if rows.is_empty() {
        return rows;
    }
    let m = BitMatrix { cols, rows };
    let e = m.echelon();
    e.reduced.rows.into_iter().take(e.pivots.len()).collect()
}
