//! Points of `E*: x + 1/x + y + 1/y = 1` (equivalently `(1+x+y)(1+xy) = 1`),
//! the bi-torsion set `E₀` of orders `(ord x, ord y)`, and the partnership
//! graph whose components are the levels `V_r = {n odd : f₀(n) = r}`.
//!
//! Every `z = x + 1/x` of a point with `f₀(ord x) | r` lies in `F_q`,
//! `q = 2^r`, so one pass over `u ∈ F_q` (with `z_x = u`, `z_y = u + 1`)
//! finds all points whose orders sit at levels dividing `r`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field2::{make_field, FieldCtx, FieldElem};
use crate::numtheory::{divisors, euler_phi, gcd, order_profile};

/// Largest level `r` handled by enumeration.
pub const MAX_LEVEL: u32 = 24;
pub const CACHE_SCHEMA: &str = "harmonica.partnership.component";
pub const CACHE_VERSION: u32 = 1;

fn check_level(r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::NonPositiveIndex);
    }
    if r > MAX_LEVEL {
        return Err(Error::FieldTooLarge(2 * r));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: FieldElem,
    pub y: FieldElem,
    /// `ord x`.
    pub m: u64,
    /// `ord y`.
    pub n: u64,
}

fn base_roots(ctx: &FieldCtx, u: u64) -> Result<Vec<u64>> {
    if u == 0 {
        return Ok(vec![1]);
    }
    // ξ^2 + uξ + 1 splits over F_q iff Tr(1/u) = 0.
    let ui = ctx.inv_raw(u)?;
    if ctx.trace_raw(ui) {
        return Ok(vec![]);
    }
    let t = ctx.solve_artin_schreier_raw(ctx.sqr_raw(ui)).expect("trace checked");
    Ok(vec![ctx.mul_raw(u, t), ctx.mul_raw(u, t ^ 1)])
}

/// All points of `E*(F_(2^r))`, sorted by `(x, y)`.
pub fn curve_points(r: u32) -> Result<Vec<CurvePoint>> {
    check_level(r)?;
    let ctx = make_field(r)?;
    let mut out = Vec::new();
    for u in 0..1u64 << r {
        let xs = base_roots(&ctx, u)?;
        if xs.is_empty() {
            continue;
        }
        let ys = base_roots(&ctx, u ^ 1)?;
        for &x in &xs {
            for &y in &ys {
                let (xe, ye) = (ctx.elem(x)?, ctx.elem(y)?);
                out.push(CurvePoint { x: xe, y: ye, m: ctx.elem_order(xe)?, n: ctx.elem_order(ye)? });
            }
        }
    }
    out.sort_by_key(|p| (p.x.value, p.y.value));
    Ok(out)
}

/// `c_r = β₊^r + β₋^r` for the roots `β±` of `t^2 + t + 2`.
pub fn hasse_trace(r: u32) -> i128 {
    let (mut prev, mut cur) = (2i128, -1i128);
    if r == 0 {
        return prev;
    }
    for _ in 1..r {
        (prev, cur) = (cur, -cur - 2 * prev);
    }
    cur
}

/// `(s_r, s̄_r)`: points on `E*(F_q)` and on the projective closure.
pub fn hasse_weil(r: u32) -> Result<(u64, u64)> {
    if r == 0 {
        return Err(Error::NonPositiveIndex);
    }
    if r > 62 {
        return Err(Error::Overflow);
    }
    let c = hasse_trace(r);
    let q = 1i128 << r;
    let s = q - c - 3;
    // |s̄ - q - 1| <= 2√q, i.e. c^2 <= 4q.
    if c * c > 4 * q || s < 0 {
        return Err(Error::Inconsistent(format!("Hasse bound fails at r = {r}")));
    }
    Ok((s as u64, s as u64 + 4))
}

/// Bijection from the subfield `F_q ⊂ F_(q^2)` onto `[0, q)`: projection on
/// the pivot bits of a fully reduced basis.
struct SubfieldIndex {
    tables: Vec<[u32; 256]>,
}

impl SubfieldIndex {
    fn new(ctx: &FieldCtx, gen: u64, r: u32) -> Self {
        let mut rows: Vec<u64> = Vec::with_capacity(r as usize);
        let mut x = 1u64;
        for _ in 0..r {
            let mut v = x;
            for &row in &rows {
                if v >> (63 - row.leading_zeros()) & 1 == 1 {
                    v ^= row;
                }
            }
            debug_assert_ne!(v, 0, "powers of a generator of F_q span it");
            let p = 63 - v.leading_zeros();
            for row in rows.iter_mut() {
                if *row >> p & 1 == 1 {
                    *row ^= v;
                }
            }
            rows.push(v);
            x = ctx.mul_raw(x, gen);
        }
        let mask: u64 = rows.iter().map(|row| 1u64 << (63 - row.leading_zeros())).fold(0, |a, b| a | b);
        let nbytes = (2 * r as usize).div_ceil(8);
        let tables = (0..nbytes)
            .map(|j| {
                let mut t = [0u32; 256];
                for (val, slot) in t.iter_mut().enumerate() {
                    for b in 0..8 {
                        let bit = 8 * j + b;
                        if val >> b & 1 == 1 && mask >> bit & 1 == 1 {
                            *slot |= 1 << (mask & ((1u64 << bit) - 1)).count_ones();
                        }
                    }
                }
                t
            })
            .collect();
        SubfieldIndex { tables }
    }

    #[inline]
    fn index(&self, z: u64) -> usize {
        self.tables.iter().enumerate().fold(0, |acc, (j, t)| acc | t[(z >> (8 * j)) as usize & 0xff] as usize)
    }
}

/// Aggregates over the parameters `u` of one ordered type `(ord x, ord y)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCount {
    pub parameters: u64,
    /// `|S(m, n)|`.
    pub points: u64,
    /// Choices of `x` per parameter, summed.
    pub sum_cx: u64,
    /// Choices of `y` per parameter, summed.
    pub sum_cy: u64,
}

impl TypeCount {
    fn merge(&mut self, o: &TypeCount) {
        self.parameters += o.parameters;
        self.points += o.points;
        self.sum_cx += o.sum_cx;
        self.sum_cy += o.sum_cy;
    }
}

/// All ordered types of points with `z_x, z_y ∈ F_(2^r)`, covering every
/// level dividing `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub r: u32,
    pub types: BTreeMap<(u64, u64), TypeCount>,
}

impl Census {
    pub fn get(&self, m: u64, n: u64) -> TypeCount {
        self.types.get(&(m, n)).copied().unwrap_or_default()
    }

    /// `s(m, n) = |S(m, n)| / 2`.
    pub fn label(&self, m: u64, n: u64) -> u64 {
        self.get(m, n).points / 2
    }

    /// Label directed out of `n` towards `m`: the points of type `(m, n)`
    /// counted once per `y`. Equals `s(m, n)` except for `{1, 3}`, where it
    /// gives `1 → 3: 1` and `3 → 1: 2`.
    pub fn directed_label(&self, n: u64, m: u64) -> u64 {
        self.get(m, n).sum_cy
    }
}

fn fill_orders(ctx: &FieldCtx, gen: u64, group: u64, kmax: u64, idx: &SubfieldIndex, ord: &[AtomicU32]) -> Result<()> {
    const CHUNK: u64 = 1 << 14;
    let ginv = ctx.inv_raw(gen)?;
    let chunks = kmax.div_ceil(CHUNK);
    (0..chunks).into_par_iter().for_each(|c| {
        let start = 1 + c * CHUNK;
        let end = (start + CHUNK).min(kmax + 1);
        let mut a = ctx.pow_raw(gen, start as u128);
        let mut b = ctx.pow_raw(ginv, start as u128);
        for k in start..end {
            ord[idx.index(a ^ b)].store((group / gcd(k, group)) as u32, Ordering::Relaxed);
            a = ctx.mul_raw(a, gen);
            b = ctx.mul_raw(b, ginv);
        }
    });
    Ok(())
}

/// Enumerate `u ∈ F_q` in parallel on the current rayon pool. The result
/// does not depend on the number of workers.
pub fn census(r: u32) -> Result<Census> {
    check_level(r)?;
    let q = 1u64 << r;
    let ctx = make_field(2 * r)?;
    let g = ctx.primitive_element().value;
    // F_q^* and the norm-one group μ_(q+1), both cyclic.
    let g1 = ctx.pow_raw(g, (q + 1) as u128);
    let g2 = ctx.pow_raw(g, (q - 1) as u128);
    let idx = SubfieldIndex::new(&ctx, g1, r);
    let ord: Vec<AtomicU32> = (0..q).map(|_| AtomicU32::new(0)).collect();
    ord[0].store(1, Ordering::Relaxed);
    // x and 1/x give the same z: k ranges over half of each group.
    fill_orders(&ctx, g1, q - 1, (q - 2) / 2, &idx, &ord)?;
    fill_orders(&ctx, g2, q + 1, q / 2, &idx, &ord)?;
    let ord: Vec<u32> = ord.into_iter().map(AtomicU32::into_inner).collect();
    if ord.contains(&0) {
        return Err(Error::Inconsistent("a subfield element was not reached".into()));
    }
    let one = idx.index(1);
    let types = (0..q as usize)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<(u64, u64), TypeCount>, u| {
            let (m, n) = (ord[u] as u64, ord[u ^ one] as u64);
            let cx = if m == 1 { 1 } else { 2 };
            let cy = if n == 1 { 1 } else { 2 };
            acc.entry((m, n)).or_default().merge(&TypeCount { parameters: 1, points: cx * cy, sum_cx: cx, sum_cy: cy });
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_default().merge(&v);
            }
            a
        });
    Ok(Census { r, types })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub n: u64,
    pub f: u64,
    pub f0: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub m: u64,
    pub n: u64,
    pub s: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Loop {
    pub n: u64,
    pub s: u64,
}

/// Directed labels replacing the edge `[1, 3]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exceptional {
    pub one_to_three: u64,
    pub three_to_one: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartnershipComponent {
    pub r: u32,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub loops: Vec<Loop>,
    pub exceptional: Option<Exceptional>,
}

/// `{n odd : f₀(n) = r}`, ascending.
pub fn level_vertices(r: u32) -> Result<Vec<Vertex>> {
    check_level(r)?;
    let q = 1u64 << r;
    let mut ns: Vec<u64> = divisors(q - 1).into_iter().chain(divisors(q + 1)).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut out = Vec::new();
    for n in ns {
        let (f, f0) = order_profile(n)?;
        if f0 == r as u64 {
            out.push(Vertex { n, f, f0 });
        }
    }
    Ok(out)
}

/// The level-`s` part of a census taken at a multiple of `s`.
pub fn component_from_census(c: &Census, s: u32) -> Result<PartnershipComponent> {
    if s == 0 || !c.r.is_multiple_of(s) {
        return Err(Error::InvalidArgument(format!("level {s} does not divide {}", c.r)));
    }
    let vertices = level_vertices(s)?;
    let (mut edges, mut loops) = (Vec::new(), Vec::new());
    for (&(m, n), t) in &c.types {
        let (f0m, f0n) = (order_profile(m)?.1, order_profile(n)?.1);
        if f0m != f0n {
            return Err(Error::Inconsistent(format!("type ({m},{n}) spans levels {f0m} and {f0n}")));
        }
        if f0m != s as u64 || (m, n) == (1, 3) || (m, n) == (3, 1) {
            continue;
        }
        if m == n {
            loops.push(Loop { n, s: t.points / 2 });
        } else if m < n {
            edges.push(Edge { m, n, s: t.points / 2 });
        }
    }
    let exceptional =
        (s == 1).then(|| Exceptional { one_to_three: c.directed_label(1, 3), three_to_one: c.directed_label(3, 1) });
    Ok(PartnershipComponent { r: s, vertices, edges, loops, exceptional })
}

/// The component `V_r` with its labels.
pub fn component(r: u32) -> Result<PartnershipComponent> {
    component_from_census(&census(r)?, r)
}

/// All `m` with `(m, n) ∈ E₀`, ascending.
pub fn partners_of(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::NonPositiveIndex);
    }
    let (_, f0) = order_profile(n)?;
    if f0 > MAX_LEVEL as u64 {
        return Err(Error::FieldTooLarge(2 * f0 as u32));
    }
    let c = census(f0 as u32)?;
    Ok(c.types.keys().filter(|&&(_, y)| y == n).map(|&(m, _)| m).collect())
}

impl PartnershipComponent {
    pub fn has_pair(&self, m: u64, n: u64) -> bool {
        let (a, b) = (m.min(n), m.max(n));
        if a == b {
            return self.loops.iter().any(|l| l.n == a);
        }
        self.edges.iter().any(|e| (e.m, e.n) == (a, b)) || (self.exceptional.is_some() && (a, b) == (1, 3))
    }

    /// Vertex sets of the connected components, each ascending.
    pub fn connected_components(&self) -> Vec<Vec<u64>> {
        let pos: BTreeMap<u64, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.n, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mut pairs: Vec<(u64, u64)> = self.edges.iter().map(|e| (e.m, e.n)).collect();
        if self.exceptional.is_some() {
            pairs.push((1, 3));
        }
        for (m, n) in pairs {
            if let (Some(&a), Some(&b)) = (pos.get(&m), pos.get(&n)) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(v.n);
        }
        let mut out: Vec<Vec<u64>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Graphviz rendering; vertices with `f(n) = 2r` are underlined.
    pub fn to_dot(&self) -> String {
        let mut s = format!("graph V{} {{\n", self.r);
        for v in &self.vertices {
            if v.f == 2 * v.f0 {
                let _ = writeln!(s, "  n{0} [label=<<U>{0}</U>>, underline=true];", v.n);
            } else {
                let _ = writeln!(s, "  n{0} [label=\"{0}\"];", v.n);
            }
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -- n{} [label=\"{}\"];", e.m, e.n, e.s);
        }
        for l in &self.loops {
            let _ = writeln!(s, "  n{0} -- n{0} [label=\"{1}\"];", l.n, l.s);
        }
        if let Some(x) = self.exceptional {
            let _ = writeln!(
                s,
                "  n1 -- n3 [dir=both, taillabel=\"{}\", headlabel=\"{}\"];",
                x.one_to_three, x.three_to_one
            );
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCheck {
    pub n: u64,
    pub phi: u64,
    pub label_sum: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: i64,
    pub rhs: i64,
}

/// Sums behind the Euler-function identities at level `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    pub r: u32,
    /// Per vertex: `φ(n)` against the labels directed out of `n`.
    pub vertices: Vec<VertexCheck>,
    /// `Σ φ(n)` over the level.
    pub level_phi: u64,
    /// Twice the edge labels plus the loop labels (directed labels for `{1, 3}`).
    pub level_labels: u64,
    /// Level label sums over all levels dividing `r`, plus the second `φ(1)`.
    pub total: u64,
    pub two_q: u64,
    /// Only for `r >= 3`.
    pub inequality: Option<InequalityCheck>,
}

impl EulerReport {
    pub fn vertex_identity_holds(&self) -> bool {
        self.vertices.iter().all(|v| v.phi == v.label_sum)
    }

    pub fn level_identity_holds(&self) -> bool {
        self.level_phi == self.level_labels
    }

    pub fn total_identity_holds(&self) -> bool {
        self.total == self.two_q
    }

    pub fn inequality_holds(&self) -> bool {
        self.inequality.is_none_or(|i| i.lhs >= i.rhs)
    }

    pub fn passed(&self) -> bool {
        self.vertex_identity_holds()
            && self.level_identity_holds()
            && self.total_identity_holds()
            && self.inequality_holds()
    }
}

fn level_label_sum(c: &PartnershipComponent) -> u64 {
    let edges: u64 = c.edges.iter().map(|e| 2 * e.s).sum();
    let loops: u64 = c.loops.iter().map(|l| l.s).sum();
    let exc = c.exceptional.map_or(0, |x| x.one_to_three + x.three_to_one);
    edges + loops + exc
}

pub fn euler_check(r: u32) -> Result<EulerReport> {
    let c = census(r)?;
    let comp = component_from_census(&c, r)?;
    let vertices = comp
        .vertices
        .iter()
        .map(|v| VertexCheck {
            n: v.n,
            phi: euler_phi(v.n),
            label_sum: c.types.iter().filter(|(&(_, y), _)| y == v.n).map(|(_, t)| t.sum_cy).sum(),
        })
        .collect::<Vec<_>>();
    let level_phi = vertices.iter().map(|v| v.phi).sum();
    let level_labels = level_label_sum(&comp);
    let mut total = 1;
    for s in (1..=r).filter(|s| r.is_multiple_of(*s)) {
        total += level_label_sum(&component_from_census(&c, s)?);
    }
    let q = 1u64 << r;
    let inequality = (r >= 3).then(|| {
        let lhs = c.label(q - 1, q - 1) + c.label(q + 1, q + 1) + 2 * c.label(q - 1, q + 1);
        let rhs = 2 * (euler_phi(q - 1) as i64 + euler_phi(q + 1) as i64 - q as i64);
        InequalityCheck { lhs: lhs as i64, rhs }
    });
    Ok(EulerReport { r, vertices, level_phi, level_labels, total, two_q: 2 * q, inequality })
}

/// An empirical statement checked at one level; never an assertion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub r: u32,
    pub holds: bool,
    pub detail: String,
}

/// `q ± 1` are self-partners and `(q + 1, q - 1) ∈ E₀`, for `r >= 6`.
pub fn report_self_partners(r: u32) -> Result<ConjectureReport> {
    let c = component(r)?;
    let q = 1u64 << r;
    let checks = [(q - 1, q - 1), (q + 1, q + 1), (q + 1, q - 1)];
    let found: Vec<bool> = checks.iter().map(|&(a, b)| c.has_pair(a, b)).collect();
    let detail = checks
        .iter()
        .zip(&found)
        .map(|((a, b), f)| format!("({a},{b}) {}", if *f { "present" } else { "absent" }))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(ConjectureReport { r, holds: found.iter().all(|&f| f), detail })
}

/// `V_r` is connected for `r ≠ 5`, and `V_5` has exactly two components.
pub fn report_connectivity(r: u32) -> Result<ConjectureReport> {
    let k = component(r)?.connected_components().len();
    let expected = if r == 5 { 2 } else { 1 };
    Ok(ConjectureReport { r, holds: k == expected, detail: format!("{k} component(s), expected {expected}") })
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: String,
    version: u32,
    component: serde_json::Value,
}

pub fn cache_path(dir: &Path, r: u32) -> PathBuf {
    dir.join(format!("component_r{r}.json"))
}

pub fn store_component(dir: &Path, c: &PartnershipComponent) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, c.r);
    let file = CacheFile {
        schema: CACHE_SCHEMA.into(),
        version: CACHE_VERSION,
        component: serde_json::to_value(c).map_err(|e| Error::IoError(e.to_string()))?,
    };
    let text = serde_json::to_string_pretty(&file).map_err(|e| Error::IoError(e.to_string()))?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// `None` when no file exists; unreadable contents or another schema
/// version are errors.
pub fn load_component(dir: &Path, r: u32) -> Result<Option<PartnershipComponent>> {
    let path = cache_path(dir, r);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mismatch = |why: String| Error::SchemaVersionMismatch(format!("{}: {why}", path.display()));
    let file: CacheFile = serde_json::from_str(&text).map_err(|e| mismatch(e.to_string()))?;
    if file.schema != CACHE_SCHEMA || file.version != CACHE_VERSION {
        return Err(mismatch(format!("found {} v{}", file.schema, file.version)));
    }
    let c: PartnershipComponent = serde_json::from_value(file.component).map_err(|e| mismatch(e.to_string()))?;
    if c.r != r {
        return Err(mismatch(format!("holds level {}", c.r)));
    }
    Ok(Some(c))
}

/// Read through the cache, computing and storing on a miss.
pub fn component_cached(dir: &Path, r: u32) -> Result<PartnershipComponent> {
    if let Some(c) = load_component(dir, r)? {
        return Ok(c);
    }
    let c = component(r)?;
    store_component(dir, &c)?;
    Ok(c)
}
