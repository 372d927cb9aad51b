//! Identity checks shared by the integration tests and the acceptance run.
//! Each check recomputes both sides independently and reports the first
//! counterexample.

#![allow(dead_code)]

use harmonica::chebfib::{cdf, cdf_mod, cdf_table, fib_sqrt, rho, CdfKind};
use harmonica::field2::{make_field, ExtPoly, FieldCtx, QuadRoots};
use harmonica::graph::{Graph, Sign};
use harmonica::linalg::{BitMatrix, BitVec};
use harmonica::numtheory::{euler_phi, gcd, lcm, order_profile};
use harmonica::poly2::{self, Poly2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;
pub type NamedCheck = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

use CdfKind::{Fibonacci as F, FirstKind as T, SecondKind as E};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly2 {
    let d = rng.gen_range(0..=max_deg);
    let mut p = Poly2::zero();
    for i in 0..=d {
        if rng.gen_bool(0.5) {
            p.flip(i);
        }
    }
    p
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let edges: Vec<_> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(density)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> BitMatrix {
    let rows = (0..n).map(|_| BitVec::from_bools(&(0..n).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())).collect();
    BitMatrix::from_rows(n, rows).unwrap()
}

fn c(kind: CdfKind, n: u64) -> Poly2 {
    cdf(kind, n).unwrap()
}

fn p(s: &str) -> Poly2 {
    s.parse().unwrap()
}

fn dyadic(n: u32) -> u32 {
    n.trailing_zeros()
}

/// `p ↦ p(x+1) + p(x)`: nilpotent, Frobenius-equivariant, and Leibniz.
pub fn delta_identities() -> Check {
    let mut r = rng(11);
    for _ in 0..400 {
        let (f, g) = (random_poly(&mut r, 48), random_poly(&mut r, 48));
        ensure!(f.delta().delta().is_zero(), "δ² f ≠ 0 for f = {f}");
        ensure!(f.square().delta() == f.delta().square(), "δ(f²) ≠ δ(f)² for f = {f}");
        let leibniz = f.mul(&g.delta()).add(&g.mul(&f.delta())).add(&f.delta().mul(&g.delta()));
        ensure!(f.mul(&g).delta() == leibniz, "Leibniz fails for {f}, {g}");
        let k = f.delta();
        ensure!(k.mul(&g).delta() == k.mul(&g.delta()), "kernel elements are not δ-linear: {k}, {g}");
    }
    Ok(())
}

/// `Φ_d` splits into `φ(d)/f(d)` distinct irreducibles of degree `f(d)`.
pub fn cyclotomic_splitting() -> Check {
    for d in (1..=101u64).step_by(2) {
        let (f, _) = order_profile(d).unwrap();
        let fs = poly2::factor(&poly2::cyclotomic(d).unwrap()).unwrap();
        ensure!(fs.len() as u64 == euler_phi(d) / f, "Φ_{d} has {} factors", fs.len());
        ensure!(fs.iter().all(|(t, e)| *e == 1 && t.degree() == Some(f as usize)), "Φ_{d} factor degrees");
    }
    Ok(())
}

/// `h_r(g) = g^(2^r) + g + 1`, by squaring.
fn h_apply(r: u32, g: &Poly2) -> Poly2 {
    let mut s = g.clone();
    for _ in 0..r {
        s = s.square();
    }
    s.add(g).add(&Poly2::one())
}

/// Composition, divisibility and gcd rules of `h_r = x^(2^r) + x + 1`.
pub fn h_family_identities() -> Check {
    let h = |r: u32| poly2::h_poly(r).unwrap();
    let ht = |r: u32| poly2::h_tilde(r).unwrap();
    for r in 1..=10u32 {
        ensure!(h(r) == poly2::alpha_substitute(&ht(r)), "h_{r} ≠ h̃_{r}(x² + x)");
        for s in 1..=10u32 {
            let comp = h_apply(r, &h(s));
            ensure!(comp == h(r + s).add(&h(r)).add(&h(s)), "h_{r}∘h_{s}");
            if r + s <= 8 {
                ensure!(h(r).compose(&h(s)) == comp, "Horner composition disagrees at ({r},{s})");
            }
            let divides = h(r).divisible_by(&h(s)).unwrap();
            ensure!(divides == (r % s == 0 && (r / s) % 2 == 1), "h_{s} | h_{r} is {divides}");
            let same = dyadic(r) == dyadic(s);
            let g = gcd(r as u64, s as u64) as u32;
            let want = if same { h(g) } else { Poly2::one() };
            ensure!(h(r).gcd(&h(s)) == want, "gcd(h_{r}, h_{s})");
            let want = if same { ht(g) } else { Poly2::one() };
            ensure!(ht(r).gcd(&ht(s)) == want, "gcd(h̃_{r}, h̃_{s})");
        }
    }
    Ok(())
}

/// `σ ↦ σ(x² + x)` is a bijection from trace-one irreducibles of degree
/// `d` onto self-conjugate irreducibles of degree `2d`.
pub fn alpha_correspondence() -> Check {
    for d in 1..=5usize {
        let lower: Vec<Poly2> = poly2::irreducibles_of_degree(d).into_iter().filter(|s| s.coeff(d - 1)).collect();
        let upper: Vec<Poly2> =
            poly2::irreducibles_of_degree(2 * d).into_iter().filter(|t| t.conjugate() == *t).collect();
        for t in &upper {
            let pre = lower.iter().filter(|s| poly2::alpha_substitute(s) == *t).count();
            ensure!(pre == 1, "{t} has {pre} preimages");
        }
        for s in &lower {
            let t = poly2::alpha_substitute(s);
            ensure!(poly2::is_irreducible(&t) && t.conjugate() == t, "image of {s} is {t}");
        }
        ensure!(lower.len() == upper.len(), "degree {d}: {} vs {}", lower.len(), upper.len());
    }
    Ok(())
}

/// Kronecker sum spectrum: `χ(A ⊗ 1 + 1 ⊗ B)` equals the shifted
/// resultant, and both equal `∏ (x + α + β)` over roots with multiplicity.
pub fn kronecker_sum_spectrum() -> Check {
    let mut r = rng(12);
    for _ in 0..40 {
        let (a, b) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let (ma, mb) = (random_matrix(&mut r, a), random_matrix(&mut r, b));
        let mut sum = BitMatrix::zeros(a * b, a * b);
        for i in 0..a {
            for j in 0..b {
                for k in 0..a {
                    if ma.get(i, k) {
                        sum.set(i * b + j, k * b + j, true);
                    }
                }
                for l in 0..b {
                    if mb.get(j, l) {
                        let v = sum.get(i * b + j, i * b + l);
                        sum.set(i * b + j, i * b + l, !v);
                    }
                }
            }
        }
        let (ca, cb) = (ma.charpoly(), mb.charpoly());
        let res = poly2::resultant_shift(&ca, &cb).unwrap();
        ensure!(res == sum.charpoly(), "resultant vs Kronecker sum for {ca}, {cb}");
        let (fa, fb) = (poly2::factor(&ca).unwrap(), poly2::factor(&cb).unwrap());
        let k = fa.iter().chain(&fb).fold(1u64, |acc, (t, _)| lcm(acc, t.degree().unwrap() as u64));
        let ctx = make_field(k as u32).unwrap();
        let roots = |fs: &[(Poly2, u32)]| -> Vec<u64> {
            fs.iter()
                .flat_map(|(t, e)| {
                    let rs = ctx.roots(t).unwrap();
                    (0..*e).flat_map(move |_| rs.clone().into_iter().map(|z| z.value))
                })
                .collect()
        };
        let mut prod = ExtPoly::one();
        for &al in &roots(&fa) {
            for &be in &roots(&fb) {
                prod = prod.mul(&ctx, &ExtPoly::from_coeffs(vec![al ^ be, 1]));
            }
        }
        ensure!(prod.to_prime_poly().unwrap() == res, "spectrum product for {ca}, {cb}");
    }
    Ok(())
}

/// Which of `F_(2^r ± 1)` the polynomials `x² + x + 1` and `x⁴ + x + 1` divide.
pub fn h_divides_fibonacci() -> Check {
    let (h1, h2) = (p("x^2+x+1"), p("x^4+x+1"));
    for r in 1..=24u32 {
        let q = 1u64 << r;
        let div = |n: u64, h: &Poly2| cdf_mod(F, n, h).unwrap().is_zero();
        ensure!(div(q - 1, &h1) == (r % 4 == 0), "h₁ | F_(2^{r}-1)");
        ensure!(div(q + 1, &h1) == (r % 4 == 2), "h₁ | F_(2^{r}+1)");
        ensure!(div(q - 1, &h2) == (r % 8 == 0), "h₂ | F_(2^{r}-1)");
        ensure!(div(q + 1, &h2) == (r % 8 == 4), "h₂ | F_(2^{r}+1)");
    }
    Ok(())
}

/// `(z² + xz + 1) Σ F_n z^n ≡ z mod z^(N+1)`.
pub fn fibonacci_generating_function() -> Check {
    let n = 64;
    let fs = cdf_table(F, n).unwrap();
    let zero = Poly2::zero();
    for k in 0..=n as usize {
        let term = |i: isize| if i < 0 { &zero } else { &fs[i as usize] };
        let coeff = term(k as isize - 2).add(&Poly2::x().mul(term(k as isize - 1))).add(term(k as isize));
        let want = if k == 1 { Poly2::one() } else { Poly2::zero() };
        ensure!(coeff == want, "coefficient of z^{k} is {coeff}");
    }
    Ok(())
}

/// `E_n = Σ C(n-i, i) x^(n-2i)` mod 2.
pub fn second_kind_binomial_formula() -> Check {
    for n in 0..=32usize {
        let mut e = Poly2::zero();
        for i in 0..=n / 2 {
            // Lucas: C(a, b) is odd iff b ⊆ a bitwise.
            if (n - i) & i == i {
                e.flip(n - 2 * i);
            }
        }
        ensure!(e == c(E, n as u64), "E_{n}");
    }
    Ok(())
}

/// `F_(q-1) + F_(q+1) = x^q` and `F_(q-1) F_(q+1) = (x^(q-1) + 1)²`.
pub fn fibonacci_at_powers_of_two() -> Check {
    for r in 1..=10u32 {
        let q = 1u64 << r;
        ensure!(c(F, q - 1).add(&c(F, q + 1)) == Poly2::monomial(q as usize), "sum at q = {q}");
        if r <= 8 {
            let rhs = Poly2::monomial(q as usize - 1).add(&Poly2::one()).square();
            ensure!(c(F, q - 1).mul(&c(F, q + 1)) == rhs, "product at q = {q}");
        }
    }
    Ok(())
}

/// Addition and duplication formulas for `E_n`.
pub fn second_kind_addition_formulas() -> Check {
    for m in 1..=40u64 {
        for n in 1..=40u64 {
            let lhs = c(E, m + n);
            let rhs = c(E, m).mul(&c(E, n)).add(&c(E, m - 1).mul(&c(E, n - 1)));
            ensure!(lhs == rhs, "E_{{{m}+{n}}}");
        }
        ensure!(c(E, 2 * m) == c(E, m).square().add(&c(E, m - 1).square()), "E_{{2·{m}}}");
        ensure!(c(E, 2 * m + 1) == Poly2::x().mul(&c(E, m).square()), "E_{{2·{m}+1}}");
    }
    Ok(())
}

/// Product, composition and Frobenius formulas for `T_n`.
pub fn first_kind_identities() -> Check {
    for n in 1..=24u64 {
        for t in 1..=n {
            ensure!(c(T, n + t).add(&c(T, n - t)) == c(T, n).mul(&c(T, t)), "T_{n}·T_{t}");
        }
        for m in 1..=24u64 {
            ensure!(c(T, m).compose(&c(T, n)) == c(T, m * n), "T_{m}∘T_{n}");
        }
        for r in 0..=4u32 {
            let q = 1u64 << r;
            let tq = c(T, q * n);
            ensure!(tq == c(T, n).compose(&Poly2::monomial(q as usize)), "T_{{{q}·{n}}} vs T_{n}(x^{q})");
            ensure!(tq == c(T, n).pow(q), "T_{{{q}·{n}}} vs T_{n}^{q}");
        }
    }
    Ok(())
}

/// `T_n(ξ + 1/ξ) = ξ^n + ξ^(-n)` for every unit `ξ` of `F_(2^r)`.
pub fn first_kind_evaluation() -> Check {
    for r in 1..=6u32 {
        let ctx = make_field(r).unwrap();
        let ts = cdf_table(T, 40).unwrap();
        for xi in 1..1u64 << r {
            let xinv = ctx.inv_raw(xi).unwrap();
            let z = ctx.elem(xi ^ xinv).unwrap();
            for (n, t) in ts.iter().enumerate() {
                let want = ctx.pow_raw(xi, n as u128) ^ ctx.pow_raw(xinv, n as u128);
                ensure!(ctx.eval_poly(t, z).unwrap().value == want, "T_{n} at ξ = {xi:#x} in F_(2^{r})");
            }
        }
    }
    Ok(())
}

fn primitive_root_of_unity(ctx: &FieldCtx, d: u64) -> u64 {
    ctx.pow_raw(ctx.primitive_element().value, (ctx.unit_count() / d) as u128)
}

/// `T_n = x ∏_(0<i<n/2) (x + ζ^i + ζ^(-i))²` for odd `n`.
pub fn first_kind_root_product() -> Check {
    for n in (1..=31u64).step_by(2) {
        let (f, _) = order_profile(n).unwrap();
        let ctx = make_field(f as u32).unwrap();
        let zeta = primitive_root_of_unity(&ctx, n);
        let mut prod = ExtPoly::from_coeffs(vec![0, 1]);
        for i in 1..=(n - 1) / 2 {
            let zi = ctx.pow_raw(zeta, i as u128);
            let lin = ExtPoly::from_coeffs(vec![zi ^ ctx.inv_raw(zi).unwrap(), 1]);
            prod = prod.mul(&ctx, &lin.sqr(&ctx));
        }
        ensure!(prod.to_prime_poly().unwrap() == c(T, n), "T_{n} from its roots");
    }
    Ok(())
}

/// Vanishing of `E_(n-1)` at 0, at 1, and at the roots of `x² + x + 1`.
pub fn second_kind_small_roots() -> Check {
    let h1 = p("x^2+x+1");
    for n in 1..=60u64 {
        let e = c(E, n - 1);
        ensure!(!e.coeff(0) == (n % 2 == 0), "E_{}(0)", n - 1);
        ensure!(!e.eval_bit(true) == (n % 3 == 0), "E_{}(1)", n - 1);
        ensure!(e.divisible_by(&h1).unwrap() == (n % 5 == 0), "x²+x+1 | E_{}", n - 1);
    }
    Ok(())
}

/// `τ | F_n ⟺ ford τ | n` for irreducible `τ` of degree at most 6.
pub fn fibonacci_divisibility() -> Check {
    for d in 1..=6 {
        for tau in poly2::irreducibles_of_degree(d) {
            let ford = (1..=200u64).find(|&n| cdf_mod(F, n, &tau).unwrap().is_zero());
            let ford = ford.ok_or_else(|| format!("{tau} divides no F_n, n ≤ 200"))?;
            for n in 1..=200u64 {
                ensure!(cdf_mod(F, n, &tau).unwrap().is_zero() == (n % ford == 0), "{tau} | F_{n}");
            }
            if tau != Poly2::x() {
                ensure!(harmonica::chebfib::fib_order(&tau).unwrap() == ford, "fib_order({tau})");
            }
        }
    }
    Ok(())
}

/// `R_k = F_(k+1) + F_k` is square-free with `R_k² = F_(2k+1)`, and an odd
/// number of its irreducible factors have trace bit 1.
pub fn fibonacci_square_root_traces() -> Check {
    for n in (1..=63u64).step_by(2) {
        let rk = fib_sqrt(n).unwrap();
        ensure!(rk.square() == c(F, n), "R² ≠ F_{n}");
        if rk.is_one() {
            continue;
        }
        let fs = poly2::factor(&rk).unwrap();
        ensure!(fs.iter().all(|(_, e)| *e == 1), "R for F_{n} is not square-free");
        let ones = fs.iter().filter(|(t, _)| t.coeff(t.degree().unwrap() - 1)).count();
        ensure!(ones % 2 == 1, "F_{n}: {ones} trace-one factors");
    }
    Ok(())
}

/// The minimal polynomial of the adjacency matrix of `P_n` is `E_n`.
pub fn path_minimal_polynomials() -> Check {
    for n in 1..=12usize {
        let mp = Graph::path(n).laplacian(Sign::Minus).min_poly();
        ensure!(mp == c(E, n as u64), "min poly of P_{n} is {mp}");
    }
    Ok(())
}

/// `F_5 = (x² + x + 1)²` is the only self-conjugate `F_n`, `2 <= n <= 64`.
pub fn self_conjugate_fibonacci() -> Check {
    ensure!(c(F, 5) == p("x^2+x+1").square(), "F_5 = {}", c(F, 5));
    for n in 2..=64u64 {
        let f = c(F, n);
        ensure!((f.conjugate() == f) == (n == 5), "F_{n} self-conjugacy");
    }
    Ok(())
}

/// Degrees of `ζ` and `ζ + 1/ζ` for primitive `d`-th roots: `f(d)` and
/// `f₀(d)`, read off the factors of `Φ_d` and of `ρ_d`, and directly in the
/// field when it fits.
pub fn root_of_unity_degrees() -> Check {
    for d in (3..=511u64).step_by(2) {
        let (f, f0) = order_profile(d).unwrap();
        let phi = poly2::factor(&poly2::cyclotomic(d).unwrap()).unwrap();
        ensure!(phi.iter().all(|(t, _)| t.degree() == Some(f as usize)), "Φ_{d} factor degrees ≠ {f}");
        let rd = poly2::factor(&rho(d).unwrap()).unwrap();
        ensure!(rd.iter().all(|(t, _)| t.degree() == Some(f0 as usize)), "ρ_{d} factor degrees ≠ {f0}");
        if f <= 24 {
            let ctx = make_field(f as u32).unwrap();
            let z = primitive_root_of_unity(&ctx, d);
            ensure!(ctx.degree_over_prime(ctx.elem(z).unwrap()).unwrap() == f as u32, "deg ζ_{d}");
            let w = ctx.elem(z ^ ctx.inv_raw(z).unwrap()).unwrap();
            ensure!(ctx.degree_over_prime(w).unwrap() == f0 as u32, "deg(ζ_{d} + 1/ζ_{d})");
        }
    }
    Ok(())
}

/// `n | 2^f(n) - 1`, and `f = f₀` or `f = 2 f₀` according to whether `-1`
/// is a power of 2 mod `n`.
pub fn order_profiles() -> Check {
    for n in (3..=2000u64).step_by(2) {
        let (f, f0) = order_profile(n).unwrap();
        ensure!(harmonica::numtheory::powmod(2, f, n) == 1, "2^f({n}) ≢ 1");
        let minus_one = (1..=f).any(|k| harmonica::numtheory::powmod(2, k, n) == n - 1);
        ensure!(if minus_one { f == 2 * f0 } else { f == f0 }, "f({n}) = {f}, f₀ = {f0}");
    }
    Ok(())
}

/// Trace is additive and Frobenius-invariant.
pub fn trace_linearity() -> Check {
    for r in 1..=8u32 {
        let ctx = make_field(r).unwrap();
        for a in 0..1u64 << r {
            ensure!(ctx.trace_raw(ctx.sqr_raw(a)) == ctx.trace_raw(a), "Tr(a²) at {a:#x}, r = {r}");
            for b in 0..1u64 << r {
                ensure!(ctx.trace_raw(a ^ b) == ctx.trace_raw(a) ^ ctx.trace_raw(b), "Tr additivity, r = {r}");
            }
        }
    }
    Ok(())
}

/// Roots of `ξ² + uξ + 1` multiply to 1 and sum to `u`; splitting matches search.
pub fn quadratic_roots_exhaustive() -> Check {
    for r in 1..=6u32 {
        let ctx = make_field(r).unwrap();
        let ext = make_field(2 * r).unwrap();
        for u in 0..1u64 << r {
            let splits = (1..1u64 << r).any(|x| ctx.sqr_raw(x) ^ ctx.mul_raw(u, x) == 1);
            let ue = ctx.embed(ctx.elem(u).unwrap(), &ext).unwrap().value;
            let (a, b, k) = match ctx.unit_quadratic_roots(ctx.elem(u).unwrap()).unwrap() {
                QuadRoots::Double(one) => (one.value, one.value, &ctx),
                QuadRoots::Split(a, b) => {
                    ensure!(splits, "u = {u:#x} reported split, r = {r}");
                    (a.value, b.value, &ctx)
                }
                QuadRoots::Conjugate(a, b) => {
                    ensure!(!splits, "u = {u:#x} reported conjugate, r = {r}");
                    (a.value, b.value, &ext)
                }
            };
            let uu = if std::ptr::eq(k, &ext) { ue } else { u };
            ensure!(k.mul_raw(a, b) == 1 && a ^ b == uu || (u == 0 && a == 1), "roots for u = {u:#x}, r = {r}");
        }
    }
    Ok(())
}

/// Roots of `h_r` in `F_(q²)` are exactly the `z` with `z^q = z + 1`.
pub fn h_roots() -> Check {
    for r in 1..=6u32 {
        let q = 1u64 << r;
        let ctx = make_field(2 * r).unwrap();
        let h = poly2::h_poly(r).unwrap();
        let mut count = 0;
        for z in 0..1u64 << (2 * r) {
            let root = ctx.eval_poly(&h, ctx.elem(z).unwrap()).unwrap().value == 0;
            ensure!(root == (ctx.pow_raw(z, q as u128) == z ^ 1), "z = {z:#x}, r = {r}");
            count += root as u64;
        }
        ensure!(count == q, "h_{r} has {count} roots");
    }
    Ok(())
}

/// Every check of the polynomial and Chebyshev-Dickson families.
pub fn polynomial_sweep() -> Vec<NamedCheck> {
    vec![
        ("delta identities", delta_identities),
        ("cyclotomic splitting", cyclotomic_splitting),
        ("h family composition/divisibility/gcd", h_family_identities),
        ("alpha correspondence", alpha_correspondence),
        ("Kronecker sum spectrum", kronecker_sum_spectrum),
        ("h divides F at 2^r ± 1", h_divides_fibonacci),
        ("Fibonacci generating function", fibonacci_generating_function),
        ("E binomial formula", second_kind_binomial_formula),
        ("F at powers of two", fibonacci_at_powers_of_two),
        ("E addition formulas", second_kind_addition_formulas),
        ("T product/composition/Frobenius", first_kind_identities),
        ("T evaluation at ξ + 1/ξ", first_kind_evaluation),
        ("T from roots of unity", first_kind_root_product),
        ("E small roots", second_kind_small_roots),
        ("τ | F_n iff ford τ | n", fibonacci_divisibility),
        ("R_k trace-one factors", fibonacci_square_root_traces),
        ("path minimal polynomials", path_minimal_polynomials),
        ("F_5 unique self-conjugate", self_conjugate_fibonacci),
    ]
}

/// Field-level checks.
pub fn field_sweep() -> Vec<NamedCheck> {
    vec![
        ("order profiles", order_profiles),
        ("trace linearity", trace_linearity),
        ("quadratic roots", quadratic_roots_exhaustive),
        ("root-of-unity degrees", root_of_unity_degrees),
        ("roots of h_r", h_roots),
    ]
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    gcd(a, b)
}
