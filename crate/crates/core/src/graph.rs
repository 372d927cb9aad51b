//! Finite simple graphs and their GF(2) laplacians.
//!
//! `Δ⁻` is the adjacency action and `Δ⁺ = I + Δ⁻`. A pattern in `ker Δ⁺`
//! is harmonic (each value equals the sum of its neighbours) and one in
//! `ker Δ⁻` is antiharmonic (the neighbour sum vanishes).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{rref_rows, BitMatrix, BitVec};
use crate::poly2::Poly2;

/// A binary function on the vertex set.
pub type Pattern = BitVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!("unknown sign {s:?}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Sign::Plus { "plus" } else { "minus" })
    }
}

/// Simple undirected graph on vertices `0..n`, stored as adjacency bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BitVec>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

impl Graph {
    /// Edgeless graph.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![BitVec::zeros(n); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::BadEdge(format!("({u}, {v}) on {n} vertices")));
            }
            if g.adj[u].get(v) {
                return Err(Error::BadEdge(format!("duplicate edge ({u}, {v})")));
            }
            g.toggle(u, v);
        }
        Ok(g)
    }

    /// Graph whose edge set is the mod-2 reduction of an edge multiset:
    /// parallel pairs cancel and loops are dropped.
    pub fn from_edge_multiset_mod2(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::BadEdge(format!("({u}, {v}) on {n} vertices")));
            }
            if u != v {
                g.toggle(u, v);
            }
        }
        Ok(g)
    }

    fn toggle(&mut self, u: usize, v: usize) {
        self.adj[u].flip(v);
        self.adj[v].flip(u);
    }

    /// Path with `n` vertices.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    /// Cycle with `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::CycleTooSmall);
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Cartesian product; vertex `(i, j)` becomes `i * |b| + j`.
    pub fn product(a: &Graph, b: &Graph) -> Graph {
        let (na, nb) = (a.n(), b.n());
        let mut g = Graph::empty(na * nb);
        for i in 0..na {
            for (j, k) in b.edges() {
                g.toggle(i * nb + j, i * nb + k);
            }
        }
        for (i, k) in a.edges() {
            for j in 0..nb {
                g.toggle(i * nb + j, k * nb + j);
            }
        }
        g
    }

    pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
        let na = a.n();
        let mut g = Graph::empty(na + b.n());
        for (u, v) in a.edges() {
            g.toggle(u, v);
        }
        for (u, v) in b.edges() {
            g.toggle(na + u, na + v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &BitVec {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].get(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones()
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.adj.iter().enumerate() {
            out.extend(row.iter_ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitVec::count_ones).sum::<usize>() / 2
    }

    /// Induced subgraph on `keep`, relabelled in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::empty(keep.len());
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.toggle(a, b);
                }
            }
        }
        g
    }

    pub fn without_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        if g.has_edge(u, v) {
            g.toggle(u, v);
        }
        g
    }

    pub fn adjacency(&self) -> BitMatrix {
        BitMatrix::from_rows(self.n(), self.adj.clone()).expect("square")
    }

    /// `Δ⁺ = I + A` or `Δ⁻ = A`.
    pub fn laplacian(&self, sign: Sign) -> BitMatrix {
        let a = self.adjacency();
        match sign {
            Sign::Minus => a,
            Sign::Plus => a.add(&BitMatrix::identity(self.n())),
        }
    }

    pub fn apply_laplacian(&self, f: &Pattern, sign: Sign) -> Pattern {
        let mut out = self.adjacency().mul_vec(f);
        if sign == Sign::Plus {
            out.xor_assign(f);
        }
        out
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for w in self.adj[comp[i]].iter_ones() {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.n()
    }

    /// Parse the text format: `n=<count>` then one `u v` edge per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::MalformedGraph("missing header".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::MalformedGraph(format!("bad header {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::MalformedGraph(format!("bad line {line:?}")));
            if parts.len() != 2 {
                return Err(Error::MalformedGraph(format!("bad line {line:?}")));
            }
            edges.push((parse(parts[0])?, parse(parts[1])?));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.n());
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr { n: self.n(), edges: self.edges() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRepr::deserialize(d)?;
        Graph::from_edges(r.n, &r.edges).map_err(serde::de::Error::custom)
    }
}

/// Read one pattern per non-empty line.
pub fn parse_patterns(text: &str) -> Result<Vec<Pattern>> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::parse).collect()
}

/// Characteristic polynomial of the adjacency matrix.
pub fn adjacency_charpoly(g: &Graph) -> Poly2 {
    g.adjacency().charpoly()
}

pub const MATCHING_LIMIT: usize = 16;

/// `sum_i (#i-matchings mod 2) x^(n-2i)`, by dynamic programming over vertex subsets.
pub fn matching_charpoly(g: &Graph) -> Result<Poly2> {
    let n = g.n();
    if n > MATCHING_LIMIT {
        return Err(Error::TooLarge(format!("{n} vertices exceed {MATCHING_LIMIT}")));
    }
    let nbr: Vec<u32> = (0..n).map(|v| g.adj[v].iter_ones().fold(0u32, |m, u| m | 1 << u)).collect();
    // Bit i of parity[S] = number of i-matchings inside S, mod 2.
    let mut parity = vec![0u16; 1 << n];
    parity[0] = 1;
    for s in 1usize..1 << n {
        let v = s.trailing_zeros() as usize;
        let rest = s & !(1 << v);
        let mut acc = parity[rest];
        let mut partners = nbr[v] as usize & rest;
        while partners != 0 {
            let u = partners.trailing_zeros() as usize;
            acc ^= parity[rest & !(1 << u)] << 1;
            partners &= partners - 1;
        }
        parity[s] = acc;
    }
    let top = parity[(1 << n) - 1];
    let mut p = Poly2::zero();
    for i in 0..=n / 2 {
        if (top >> i) & 1 == 1 {
            p.flip(n - 2 * i);
        }
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelBasis {
    pub sign: Sign,
    pub dimension: usize,
    pub basis: Vec<Pattern>,
}

/// Basis of `ker Δ^sign` in reduced row-echelon form.
pub fn harmonic_kernel(g: &Graph, sign: Sign) -> KernelBasis {
    let basis = g.laplacian(sign).kernel();
    KernelBasis { sign, dimension: basis.len(), basis }
}

pub fn is_harmonic(g: &Graph, f: &Pattern, sign: Sign) -> bool {
    g.apply_laplacian(f, sign).is_zero()
}

/// Shape of a support: for `+`, every support vertex has an odd number of
/// support neighbours and every other vertex an even number; for `-`,
/// every vertex has an even number of support neighbours.
pub fn has_nucleus_shape(g: &Graph, f: &Pattern, sign: Sign) -> bool {
    (0..g.n()).all(|v| {
        let seen = g.adj[v].and(f).count_ones() % 2 == 1;
        match sign {
            Sign::Plus => seen == f.get(v),
            Sign::Minus => !seen,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestReduction {
    /// Original indices of the surviving vertices, ascending.
    pub remaining: Vec<usize>,
    /// Induced subgraph on `remaining`, relabelled in that order.
    pub reduced: Graph,
    pub dimension: usize,
    pub basis: KernelBasis,
}

enum Step {
    /// `-`: leaf `u` and its neighbour `v`.
    LeafPair { u: usize, v: usize },
    /// `+`: two leaves on a common neighbour `w`.
    TwinLeaves { u: usize, v: usize, w: usize },
    /// `+`: leaf `u`, its degree-2 neighbour `v`, and `v`'s other neighbour `w`.
    LeafChain { u: usize, v: usize, w: usize },
}

/// Kernel dimension and basis of a forest by iterated leaf deletion.
pub fn forest_reduce(g: &Graph, sign: Sign) -> Result<ForestReduction> {
    if !g.is_forest() {
        return Err(Error::NotAForest);
    }
    let n = g.n();
    let mut alive = BitVec::ones(n);
    let deg = |v: usize, alive: &BitVec| g.adj[v].and(alive).count_ones();
    let nbrs = |v: usize, alive: &BitVec| g.adj[v].and(alive).iter_ones().collect::<Vec<_>>();
    let mut steps = Vec::new();
    'outer: loop {
        for u in alive.iter_ones().collect::<Vec<_>>() {
            if deg(u, &alive) != 1 {
                continue;
            }
            let v = nbrs(u, &alive)[0];
            let step = match sign {
                Sign::Minus => Step::LeafPair { u, v },
                Sign::Plus => {
                    let vn = nbrs(v, &alive);
                    if let Some(&u2) = vn.iter().find(|&&x| x != u && deg(x, &alive) == 1) {
                        Step::TwinLeaves { u, v: u2, w: v }
                    } else if vn.len() == 2 {
                        let w = vn.into_iter().find(|&x| x != u).unwrap();
                        Step::LeafChain { u, v, w }
                    } else {
                        continue;
                    }
                }
            };
            match step {
                Step::LeafPair { u, v } | Step::TwinLeaves { u, v, .. } => {
                    alive.set(u, false);
                    alive.set(v, false);
                }
                Step::LeafChain { u, v, w } => {
                    alive.set(u, false);
                    alive.set(v, false);
                    alive.set(w, false);
                }
            }
            steps.push(step);
            continue 'outer;
        }
        break;
    }
    let remaining: Vec<usize> = alive.iter_ones().collect();
    let mut basis: Vec<Pattern> = match sign {
        Sign::Minus => remaining.iter().map(|&v| BitVec::unit(n, v)).collect(),
        Sign::Plus => remaining
            .iter()
            .filter_map(|&a| {
                let nb = nbrs(a, &alive);
                (nb.len() == 1 && nb[0] > a).then(|| {
                    let mut h = BitVec::unit(n, a);
                    h.set(nb[0], true);
                    h
                })
            })
            .collect(),
    };
    for step in steps.iter().rev() {
        match *step {
            Step::LeafPair { u, v } => {
                for h in &mut basis {
                    let s = g.adj[v].and(&alive).dot(h);
                    h.set(v, false);
                    h.set(u, s);
                }
                alive.set(u, true);
                alive.set(v, true);
            }
            Step::TwinLeaves { u, v, w } => {
                for h in &mut basis {
                    let hw = h.get(w);
                    h.set(u, hw);
                    h.set(v, hw);
                }
                alive.set(u, true);
                alive.set(v, true);
            }
            Step::LeafChain { u, v, w } => {
                for h in &mut basis {
                    let s = g.adj[w].and(&alive).dot(h);
                    h.set(w, false);
                    h.set(u, s);
                    h.set(v, s);
                }
                alive.set(u, true);
                alive.set(v, true);
                alive.set(w, true);
            }
        }
    }
    let basis = rref_rows(n, basis);
    let direct = harmonic_kernel(g, sign);
    if basis != direct.basis {
        return Err(Error::Inconsistent("forest reduction disagrees with elimination".into()));
    }
    Ok(ForestReduction {
        reduced: g.induced(&remaining),
        remaining,
        dimension: basis.len(),
        basis: KernelBasis { sign, dimension: basis.len(), basis },
    })
}

/// Whether every kernel pattern vanishing on `u` vanishes everywhere.
pub fn is_uniqueness_set(g: &Graph, u: &[usize], sign: Sign) -> Result<bool> {
    if let Some(&bad) = u.iter().find(|&&v| v >= g.n()) {
        return Err(Error::BadVertex(bad));
    }
    let k = harmonic_kernel(g, sign);
    let restricted: Vec<BitVec> = k.basis.iter().map(|h| h.select(u)).collect();
    Ok(rref_rows(u.len(), restricted).len() == k.dimension)
}

/// Generalised inverse `κ` of `Δ^sign` with `Δ κ Δ = Δ`.
pub fn pseudo_inverse(g: &Graph, sign: Sign) -> BitMatrix {
    g.laplacian(sign).pseudo_inverse()
}
