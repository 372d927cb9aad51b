//! Grids `P_n̄`, tori `T_n̄ = C_(n_1) × ... × C_(n_s)` and their harmonic
//! patterns.
//!
//! Cycles of length 1 and 2 are the Cayley graphs of `Z/1` and `Z/2` with
//! the generators `±1`, reduced mod 2: the doubled edges cancel, so both
//! are edgeless. This keeps `χ(C_n) = T_n` valid for every `n >= 1`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chebfib::{cdf, cheb_decompose, fib_order, fib_sqrt, CdfKind};
use crate::error::{Error, Result};
use crate::field2::{make_field, MAX_DEGREE};
use crate::graph::{harmonic_kernel, is_harmonic, Graph, Pattern, Sign};
use crate::linalg::{BitMatrix, BitVec};
use crate::numtheory::{checked_lcm, gcd, order_profile};
use crate::poly2::{self, Poly2};

/// Largest vertex count for which product graphs are materialised.
pub const MAX_VERTICES: usize = 1 << 16;
/// Largest suffix-sum set kept during torus enumeration.
pub const MAX_SUMSET: usize = 1 << 22;
/// Largest odd part for which the two-factor gcd test is used.
const GCD_ROUTE_LIMIT: u64 = 1 << 13;

pub type MultiIndex = Vec<u64>;

/// A solution `(x_1, ..., x_s)` of `sum (x_i + 1/x_i) = 1` with `x_i^(n_i) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusWitness {
    /// Multiplicative orders of the `x_i`.
    pub orders: Vec<u64>,
    /// Degree of the field containing all `x_i`.
    pub field_degree: u32,
}

fn check_index(n: &[u64]) -> Result<()> {
    if n.is_empty() {
        return Err(Error::InvalidArgument("empty multi-index".into()));
    }
    if n.contains(&0) {
        return Err(Error::NonPositiveIndex);
    }
    Ok(())
}

/// `C_n` as a mod-2 Cayley graph: for `n <= 2` the generators `±1` give
/// doubled edges, which cancel.
pub fn cayley_cycle(n: usize) -> Graph {
    if n >= 3 {
        Graph::cycle(n).expect("n >= 3")
    } else {
        Graph::empty(n)
    }
}

fn product_of(parts: &[Graph]) -> Result<Graph> {
    let total = parts.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.n()));
    match total {
        Some(t) if t <= MAX_VERTICES => {}
        _ => return Err(Error::TooLarge(format!("more than {MAX_VERTICES} vertices"))),
    }
    let mut g = parts[0].clone();
    for p in &parts[1..] {
        g = Graph::product(&g, p);
    }
    Ok(g)
}

/// The torus `T_n̄` as an explicit graph.
pub fn torus_graph(n: &[u64]) -> Result<Graph> {
    check_index(n)?;
    let parts: Vec<Graph> = n.iter().map(|&k| cayley_cycle(k as usize)).collect();
    product_of(&parts)
}

/// The grid `P_(n_1) × ... × P_(n_s)`.
pub fn grid_graph(n: &[u64]) -> Result<Graph> {
    check_index(n)?;
    let parts: Vec<Graph> = n.iter().map(|&k| Graph::path(k as usize)).collect();
    product_of(&parts)
}

fn odd_part(n: u64) -> u64 {
    n >> n.trailing_zeros()
}

/// Whether `T_n̄` carries a non-zero harmonic pattern, with a witness.
pub fn torus_harmonic(n: &[u64]) -> Result<(bool, Option<TorusWitness>)> {
    check_index(n)?;
    let odd: Vec<u64> = n.iter().map(|&k| odd_part(k)).collect();
    if odd.len() == 2 && odd.iter().all(|&k| k <= GCD_ROUTE_LIMIT) {
        return torus_harmonic_gcd(odd[0], odd[1]);
    }
    match torus_harmonic_enumerate(&odd) {
        Err(Error::FieldTooLarge(_)) => torus_harmonic_chain(&odd),
        r => r,
    }
}

/// Field-free route: track the minimal polynomial `h` of a partial sum
/// through the irreducible factors of `Res_y(h(x+y), g(y))`, where `g` runs
/// over the irreducible factors of `T_(n_i)`. Harmonic iff some chain ends
/// at `x+1`.
fn torus_harmonic_chain(odd: &[u64]) -> Result<(bool, Option<TorusWitness>)> {
    let mut groups = Vec::with_capacity(odd.len());
    for &k in odd {
        let rad = Poly2::x().mul(&fib_sqrt(k)?);
        let mut gs: Vec<Poly2> = poly2::factor(&rad)?.into_iter().map(|(g, _)| g).collect();
        gs.sort();
        groups.push(gs);
    }
    let mut dead: HashSet<(usize, Poly2)> = HashSet::new();
    let mut chosen = Vec::with_capacity(odd.len());
    if !chain_search(&groups, 0, &Poly2::x(), &mut chosen, &mut dead)? {
        return Ok((false, None));
    }
    let ford = |t: &Poly2| if *t == Poly2::x() { Ok(1) } else { fib_order(t) };
    let orders = chosen.iter().map(ford).collect::<Result<Vec<u64>>>()?;
    let l = orders.iter().try_fold(1u64, |acc, &o| checked_lcm(acc, o)).ok_or(Error::Overflow)?;
    Ok((true, Some(TorusWitness { orders, field_degree: order_profile(l)?.0 as u32 })))
}

fn chain_search(
    groups: &[Vec<Poly2>],
    i: usize,
    h: &Poly2,
    chosen: &mut Vec<Poly2>,
    dead: &mut HashSet<(usize, Poly2)>,
) -> Result<bool> {
    if dead.contains(&(i, h.clone())) {
        return Ok(false);
    }
    let last = i + 1 == groups.len();
    for g in &groups[i] {
        chosen.push(g.clone());
        if last {
            // Some root of h plus some root of g equals 1.
            if !h.compose(&Poly2::from_u64(0b11)).gcd(g).is_one() {
                return Ok(true);
            }
        } else {
            let res = poly2::resultant_shift(h, g)?;
            for (next, _) in poly2::factor(&res)? {
                if chain_search(groups, i + 1, &next, chosen, dead)? {
                    return Ok(true);
                }
            }
        }
        chosen.pop();
    }
    dead.insert((i, h.clone()));
    Ok(false)
}

/// Two factors: harmonic iff `gcd(T_m, T_n(x+1)) ≠ 1`.
fn torus_harmonic_gcd(m: u64, n: u64) -> Result<(bool, Option<TorusWitness>)> {
    let tm = cdf(CdfKind::FirstKind, m)?;
    let tn = cdf(CdfKind::FirstKind, n)?.conjugate();
    let g = tm.gcd(&tn);
    if g.is_one() {
        return Ok((false, None));
    }
    let tau = poly2::factor(&g)?.swap_remove(0).0;
    let ford = |t: &Poly2| if *t == Poly2::x() { Ok(1) } else { fib_order(t) };
    let orders = vec![ford(&tau)?, ford(&tau.conjugate())?];
    let l = checked_lcm(orders[0], orders[1]).ok_or(Error::Overflow)?;
    let field_degree = order_profile(l)?.0 as u32;
    Ok((true, Some(TorusWitness { orders, field_degree })))
}

/// Search for `sum z_i = 1` over roots `z_i` of `T_(n_i)`, i.e.
/// `z_i = x_i + 1/x_i` with `x_i ∈ μ_(n_i)`. These lie in `F_(2^F)` with
/// `F = lcm f₀(n_i)`; suffix sum sets prune the search. The witness is the
/// least tuple under the compact encoding of the `z_i`.
fn torus_harmonic_enumerate(odd: &[u64]) -> Result<(bool, Option<TorusWitness>)> {
    let mut big_f = 1u64;
    for &k in odd {
        big_f = checked_lcm(big_f, order_profile(k)?.1).ok_or(Error::Overflow)?;
        if big_f > MAX_DEGREE as u64 {
            return Err(Error::FieldTooLarge(big_f.min(u32::MAX as u64) as u32));
        }
    }
    let ctx = make_field(big_f as u32)?;
    let mut groups: Vec<Vec<u64>> = Vec::with_capacity(odd.len());
    for &k in odd {
        if k > 2 * MAX_SUMSET as u64 {
            return Err(Error::TooLarge(format!("T_{k} has too many roots to enumerate")));
        }
        // Distinct roots of T_k = x R^2.
        let rad = Poly2::x().mul(&fib_sqrt(k)?);
        let mut zs: Vec<u64> = ctx.roots(&rad)?.into_iter().map(|z| z.value).collect();
        zs.sort_unstable();
        groups.push(zs);
    }
    let s = groups.len();
    let mut suffix: Vec<HashSet<u64>> = vec![HashSet::from([0u64]); s + 1];
    for i in (0..s).rev() {
        let mut next = HashSet::new();
        for &a in &groups[i] {
            for &b in &suffix[i + 1] {
                next.insert(a ^ b);
            }
            if next.len() > MAX_SUMSET {
                return Err(Error::TooLarge("partial sum sets exceed the enumeration cap".into()));
            }
        }
        suffix[i] = next;
    }
    if !suffix[0].contains(&1) {
        return Ok((false, None));
    }
    let mut target = 1u64;
    let mut orders = Vec::with_capacity(s);
    for i in 0..s {
        let z = *groups[i]
            .iter()
            .find(|&&z| suffix[i + 1].contains(&(target ^ z)))
            .expect("suffix sets guarantee a continuation");
        target ^= z;
        orders.push(if z == 0 { 1 } else { fib_order(&ctx.min_poly(ctx.elem(z)?)?)? });
    }
    let l = orders.iter().try_fold(1u64, |acc, &o| checked_lcm(acc, o)).ok_or(Error::Overflow)?;
    Ok((true, Some(TorusWitness { orders, field_degree: order_profile(l)?.0 as u32 })))
}

/// `(d⁺, d⁻)` of the grid `P_(n_1) × ... × P_(n_s)`. Two factors use
/// `d⁻ = gcd(n_1 + 1, n_2 + 1) - 1` and `d⁺ = deg gcd(E_(n_1), E_(n_2)(x+1))`;
/// other shapes use elimination, which also cross-checks small two-factor grids.
pub fn grid_kernel_dims(n: &[u64]) -> Result<(usize, usize)> {
    check_index(n)?;
    if let [a, b] = *n {
        let minus = gcd(a + 1, b + 1) as usize - 1;
        let ea = cdf(CdfKind::SecondKind, a)?;
        let eb = cdf(CdfKind::SecondKind, b)?.conjugate();
        let plus = ea.gcd(&eb).degree().unwrap_or(0);
        if a * b <= 400 {
            let g = grid_graph(n)?;
            let direct = (harmonic_kernel(&g, Sign::Plus).dimension, harmonic_kernel(&g, Sign::Minus).dimension);
            if direct != (plus, minus) {
                return Err(Error::Inconsistent(format!(
                    "grid ({a},{b}): closed form {:?}, elimination {direct:?}",
                    (plus, minus)
                )));
            }
        }
        return Ok((plus, minus));
    }
    let g = grid_graph(n)?;
    Ok((harmonic_kernel(&g, Sign::Plus).dimension, harmonic_kernel(&g, Sign::Minus).dimension))
}

/// Harmonic torus attached to a root of `p`: with `p = 1 + sum T_(α_i)` and
/// the chosen root `ζ + 1/ζ`, `n_i = ord ζ / gcd(ord ζ, α_i)`. Roots are
/// indexed through the distinct irreducible factors of `p` in ascending
/// order; conjugate roots give the same torus.
pub fn torus_from_poly(p: &Poly2, which_root: usize) -> Result<(MultiIndex, TorusWitness)> {
    if !p.coeff(0) {
        return Err(Error::NonUnitConstantTerm);
    }
    if p.is_one() {
        return Err(Error::NoRoots);
    }
    let factors = poly2::factor(p)?;
    let tau = &factors
        .get(which_root)
        .ok_or_else(|| Error::InvalidArgument(format!("root index {which_root} of {} factors", factors.len())))?
        .0;
    let n = fib_order(tau)?;
    let alphas = cheb_decompose(p)?;
    let dims: MultiIndex = alphas.iter().map(|&a| n / gcd(n, a)).collect();
    let field_degree = order_profile(n)?.0 as u32;
    Ok((dims.clone(), TorusWitness { orders: dims, field_degree }))
}

/// `J = [[0, I], [I, Δ]]`, acting on pairs `(f_(i-1), f_i)`.
pub fn transfer_matrix(g: &Graph, sign: Sign) -> BitMatrix {
    let n = g.n();
    let d = g.laplacian(sign);
    let mut j = BitMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, true);
        j.set(n + i, i, true);
        for k in d.row(i).iter_ones() {
            j.set(n + i, n + k, true);
        }
    }
    j
}

/// Least `n >= 1` with `J^n = I`.
pub fn j_order(g: &Graph, sign: Sign) -> Result<u64> {
    transfer_matrix(g, sign).order()?.ok_or_else(|| Error::Inconsistent("transfer matrix is singular".into()))
}

/// Extend `(f0, f1)` along `f_(i+1) = f_(i-1) + Δ f_i` to a pattern on
/// `g × C_n`, vertex `(v, i)` at index `v * n + i`.
pub fn extend_periodic(g: &Graph, f0: &Pattern, f1: &Pattern, n: usize, sign: Sign) -> Result<Pattern> {
    for f in [f0, f1] {
        if f.len() != g.n() {
            return Err(Error::DimensionMismatch { expected: g.n(), found: f.len() });
        }
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!("period {n} must be at least 3")));
    }
    let mut seq = vec![f0.clone(), f1.clone()];
    for i in 1..=n {
        let next = seq[i - 1].xor(&g.apply_laplacian(&seq[i], sign));
        seq.push(next);
    }
    if seq[n] != *f0 || seq[n + 1] != *f1 {
        return Err(Error::NotPeriodic);
    }
    let mut out = BitVec::zeros(g.n() * n);
    for (i, f) in seq.iter().take(n).enumerate() {
        for v in f.iter_ones() {
            out.set(v * n + i, true);
        }
    }
    let product = Graph::product(g, &cayley_cycle(n));
    if !is_harmonic(&product, &out, sign) {
        return Err(Error::Inconsistent("periodic extension is not harmonic".into()));
    }
    Ok(out)
}

/// A pattern on the torus `Z/m × Z/n`: `m` columns (horizontal axis) and
/// `n` rows (vertical axis).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TorusPatternRepr", into = "TorusPatternRepr")]
pub struct TorusPattern {
    width: usize,
    height: usize,
    rows: Vec<BitVec>,
}

#[derive(Serialize, Deserialize)]
struct TorusPatternRepr {
    dims: [usize; 2],
    rows: Vec<String>,
}

impl TryFrom<TorusPatternRepr> for TorusPattern {
    type Error = Error;
    fn try_from(r: TorusPatternRepr) -> Result<Self> {
        let rows = r.rows.iter().map(|s| s.parse()).collect::<Result<Vec<BitVec>>>()?;
        TorusPattern::from_rows(r.dims[0], r.dims[1], rows)
    }
}

impl From<TorusPattern> for TorusPatternRepr {
    fn from(p: TorusPattern) -> Self {
        TorusPatternRepr { dims: [p.width, p.height], rows: p.rows.iter().map(|r| r.to_string()).collect() }
    }
}

impl fmt::Debug for TorusPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusPattern{:?}", self.rows.iter().map(|r| r.to_string()).collect::<Vec<_>>())
    }
}

impl TorusPattern {
    pub fn zeros(width: usize, height: usize) -> Self {
        TorusPattern { width, height, rows: vec![BitVec::zeros(width); height] }
    }

    pub fn from_rows(width: usize, height: usize, rows: Vec<BitVec>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::MalformedPattern("torus dimensions must be positive".into()));
        }
        if rows.len() != height {
            return Err(Error::DimensionMismatch { expected: height, found: rows.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != width) {
            return Err(Error::DimensionMismatch { expected: width, found: r.len() });
        }
        Ok(TorusPattern { width, height, rows })
    }

    /// From a vector on `T_(m,n) = C_m × C_n`, where `(x, y)` sits at `x * n + y`.
    pub fn from_product_vector(width: usize, height: usize, v: &BitVec) -> Result<Self> {
        if v.len() != width * height {
            return Err(Error::DimensionMismatch { expected: width * height, found: v.len() });
        }
        let mut p = TorusPattern::zeros(width, height);
        for i in v.iter_ones() {
            p.set(i / height, i % height, true);
        }
        Ok(p)
    }

    pub fn to_product_vector(&self) -> BitVec {
        let mut v = BitVec::zeros(self.width * self.height);
        for (y, row) in self.rows.iter().enumerate() {
            for x in row.iter_ones() {
                v.set(x * self.height + y, true);
            }
        }
        v
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Value at column `x`, row `y`, both taken cyclically.
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.rows[y % self.height].get(x % self.width)
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.rows[y].set(x, v);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn add(&self, other: &TorusPattern) -> Result<TorusPattern> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.width * self.height,
                found: other.width * other.height,
            });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.xor(b)).collect();
        Ok(TorusPattern { width: self.width, height: self.height, rows })
    }

    /// `Δ^sign` with the four lattice neighbours counted with multiplicity.
    pub fn is_harmonic(&self, sign: Sign) -> bool {
        let (m, n) = (self.width, self.height);
        (0..m).all(|x| {
            (0..n).all(|y| {
                let mut s = self.get(x + 1, y) ^ self.get(x + m - 1, y) ^ self.get(x, y + 1) ^ self.get(x, y + n - 1);
                if sign == Sign::Plus {
                    s ^= self.get(x, y);
                }
                !s
            })
        })
    }
}

/// Period doubling on `Z/m × Z/n`: even-even sites copy `f`, sites with one
/// odd coordinate hold the sum of the two adjacent copies, odd-odd sites are 0.
pub fn double_pattern(f: &TorusPattern) -> TorusPattern {
    let (m, n) = f.dims();
    let mut d = TorusPattern::zeros(2 * m, 2 * n);
    for i in 0..m {
        for j in 0..n {
            let here = f.get(i, j);
            d.set(2 * i, 2 * j, here);
            d.set(2 * i + 1, 2 * j, here ^ f.get(i + 1, j));
            d.set(2 * i, 2 * j + 1, here ^ f.get(i, j + 1));
        }
    }
    d
}

/// Least horizontal and vertical periods.
pub fn minimal_biperiod(f: &TorusPattern) -> (usize, usize) {
    let (m, n) = f.dims();
    let px = (1..=m)
        .filter(|p| m % p == 0)
        .find(|&p| (0..m).all(|x| (0..n).all(|y| f.get(x + p, y) == f.get(x, y))))
        .unwrap_or(m);
    let py = (1..=n)
        .filter(|p| n % p == 0)
        .find(|&p| (0..m).all(|x| (0..n).all(|y| f.get(x, y + p) == f.get(x, y))))
        .unwrap_or(n);
    (px, py)
}

/// Harmonic (`+`) kernel of `T_(m,n)` as torus patterns.
pub fn torus_kernel_patterns(m: usize, n: usize, sign: Sign) -> Result<Vec<TorusPattern>> {
    let g = torus_graph(&[m as u64, n as u64])?;
    harmonic_kernel(&g, sign).basis.iter().map(|v| TorusPattern::from_product_vector(m, n, v)).collect()
}
