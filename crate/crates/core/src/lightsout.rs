//! Lights Out: pressing `v` toggles `v` and its neighbours, i.e. adds the
//! column `a_v = δ_v + Σ_(u ~ v) δ_u` of `Δ⁺`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{harmonic_kernel, Graph, Pattern, Sign};
use crate::linalg::BitVec;

/// Set of pressed vertices.
pub type MoveSet = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    /// Vertices to press, ascending.
    Press { moves: MoveSet },
    /// A harmonic `h` with `<h, pattern> = 1`, invariant under every move.
    Unsolvable { invariant: Pattern },
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Press { moves } => {
                write!(f, "PRESS:")?;
                for v in moves {
                    write!(f, " v{v}")?;
                }
                Ok(())
            }
            Outcome::Unsolvable { invariant } => write!(f, "UNSOLVABLE, invariant: {invariant}"),
        }
    }
}

/// Every pattern is solvable iff `Δ⁺` is nonsingular.
pub fn is_winning(g: &Graph) -> bool {
    g.laplacian(Sign::Plus).rank() == g.n()
}

/// Result of pressing every vertex of `moves` on the all-off board.
pub fn apply_moves(g: &Graph, moves: &[usize]) -> Result<Pattern> {
    let mut out = BitVec::zeros(g.n());
    for &v in moves {
        if v >= g.n() {
            return Err(Error::BadVertex(v));
        }
        out.flip(v);
        out.xor_assign(g.neighbors(v));
    }
    Ok(out)
}

/// Moves producing `pattern`, with free variables of the elimination set to
/// 0, or the first kernel basis vector pairing to 1 with `pattern`.
pub fn solve(g: &Graph, pattern: &Pattern) -> Result<Outcome> {
    if pattern.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: pattern.len() });
    }
    match g.laplacian(Sign::Plus).solve(pattern) {
        Some(x) => Ok(Outcome::Press { moves: x.iter_ones().collect() }),
        None => {
            let invariant = harmonic_kernel(g, Sign::Plus)
                .basis
                .into_iter()
                .find(|h| h.dot(pattern))
                .ok_or_else(|| Error::Inconsistent("no separating invariant".into()))?;
            Ok(Outcome::Unsolvable { invariant })
        }
    }
}

/// `N` with `Σ_(v ∈ N) a_v = 1`; exists on every graph.
pub fn odd_domination(g: &Graph) -> Result<MoveSet> {
    match solve(g, &BitVec::ones(g.n()))? {
        Outcome::Press { moves } => Ok(moves),
        Outcome::Unsolvable { .. } => Err(Error::Inconsistent("all-on pattern is not winning".into())),
    }
}
