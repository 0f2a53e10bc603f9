//! Exact kernels and samplers for the adjacent-move chain on 2-Dyck paths and
//! the flip chain on non-crossing spanning trees, plus the monotone coupling of
//! two adjacent-move chains and its height-gap potential.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fuss_dyck::{DyckPath, Step};
use crate::ncst::{Edge, Ncst};
use crate::rng::RngStream;

pub type Prob = BigRational;

pub(crate) fn ratio(num: i64, den: i64) -> Prob {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Paths reachable from `x` by one valid adjacent swap.
pub fn am_neighbors(x: &DyckPath) -> BTreeSet<DyckPath> {
    (1..x.len()).filter_map(|i| x.swapped(i)).collect()
}

/// Number of positions `i` in `1..3n` the chain picks from, i.e. `3n - 1`.
fn am_positions(n: usize) -> usize {
    (3 * n).saturating_sub(1)
}

/// `1/(6n-2)` per valid swap, the remainder on the diagonal.
pub fn am_transition_prob(x: &DyckPath, x_next: &DyckPath) -> Result<Prob> {
    if x.size() != x_next.size() {
        return Err(Error::SizeMismatch(x.size(), x_next.size()));
    }
    let n = x.size() as i64;
    if n == 0 {
        return Ok(Prob::one());
    }
    let denom = 6 * n - 2;
    let neighbors = am_neighbors(x);
    if x == x_next {
        Ok(Prob::one() - ratio(neighbors.len() as i64, denom))
    } else if neighbors.contains(x_next) {
        Ok(ratio(1, denom))
    } else {
        Ok(Prob::zero())
    }
}

/// One step of the adjacent-move chain: pick a position uniformly, and if the
/// swap is valid take it with probability 1/2.
pub fn am_step(x: &DyckPath, rng: &mut RngStream) -> DyckPath {
    let positions = am_positions(x.size());
    if positions == 0 {
        return x.clone();
    }
    let i = rng.below(positions) + 1;
    let flip = rng.coin();
    match x.swapped(i) {
        Some(next) if flip => next,
        _ => x.clone(),
    }
}

/// Edges that can be added back after dropping `removed` so that the result is
/// again a non-crossing spanning tree. Includes `removed` itself.
pub fn fm_candidates(t: &Ncst, removed: Edge) -> Result<BTreeSet<Edge>> {
    if !t.contains(removed) {
        return Err(Error::EdgeNotInTree(removed));
    }
    let forest: Vec<Edge> = t.edges().iter().copied().filter(|&e| e != removed).collect();
    Ok(reconnecting_edges(t.size(), &forest))
}

/// All edges joining the two components of a spanning forest with two parts
/// without crossing any forest edge.
fn reconnecting_edges(n: usize, forest: &[Edge]) -> BTreeSet<Edge> {
    let side = component_of_zero(n, forest);
    let mut out = BTreeSet::new();
    for a in 0..=n {
        for b in a + 1..=n {
            if side[a] == side[b] {
                continue;
            }
            let e = Edge(a, b);
            if forest.iter().all(|&f| !f.crosses(e)) {
                out.insert(e);
            }
        }
    }
    out
}

/// `side[v]` is true iff `v` is connected to point 0 in `forest`.
fn component_of_zero(n: usize, forest: &[Edge]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n + 1];
    for &e in forest {
        adj[e.0].push(e.1);
        adj[e.1].push(e.0);
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// The single edge of `s` missing from `t` and vice versa, when the trees differ by one flip.
pub fn flip_between(s: &Ncst, t: &Ncst) -> Result<(Edge, Edge)> {
    if s.size() != t.size() {
        return Err(Error::SizeMismatch(s.size(), t.size()));
    }
    if s.common_edges(t) + 1 != s.size() {
        return Err(Error::NotAdjacent);
    }
    let removed = s.edges().iter().copied().find(|&e| !t.contains(e)).expect("one edge differs");
    let added = t.edges().iter().copied().find(|&e| !s.contains(e)).expect("one edge differs");
    Ok((removed, added))
}

/// Number of edges completing `s ∩ t` to a tree, for trees differing by one flip.
pub fn delta(s: &Ncst, t: &Ncst) -> Result<usize> {
    let (removed, _) = flip_between(s, t)?;
    Ok(fm_candidates(s, removed)?.len())
}

/// Flip-chain kernel: `1/(n δ(S,T))` between trees sharing `n-1` edges; the
/// diagonal carries the mass of re-adding the dropped edge.
pub fn fm_transition_prob(s: &Ncst, t: &Ncst) -> Result<Prob> {
    if s.size() != t.size() {
        return Err(Error::SizeMismatch(s.size(), t.size()));
    }
    let n = s.size() as i64;
    if n == 0 {
        return Ok(Prob::one());
    }
    if s == t {
        let mut hold = Prob::zero();
        for &e in s.edges() {
            let d = fm_candidates(s, e)?.len() as i64;
            hold += ratio(1, n * d);
        }
        return Ok(hold);
    }
    match delta(s, t) {
        Ok(d) => Ok(ratio(1, n * d as i64)),
        Err(Error::NotAdjacent) => Ok(Prob::zero()),
        Err(e) => Err(e),
    }
}

/// Full row of the flip kernel: every reachable tree (including `s`) with its probability.
pub fn fm_row(s: &Ncst) -> Vec<(Ncst, Prob)> {
    let n = s.size() as i64;
    if n == 0 {
        return vec![(s.clone(), Prob::one())];
    }
    let mut hold = Prob::zero();
    let mut out = Vec::new();
    for &e in s.edges() {
        let candidates = fm_candidates(s, e).expect("edge of the tree");
        let p = ratio(1, n * candidates.len() as i64);
        for f in candidates {
            if f == e {
                hold += &p;
            } else {
                let edges = s.edges().iter().copied().filter(|&g| g != e).chain(std::iter::once(f));
                let mut edges: Vec<Edge> = edges.collect();
                edges.sort_unstable();
                out.push((Ncst::from_sorted_unchecked(s.size(), edges), p.clone()));
            }
        }
    }
    out.push((s.clone(), hold));
    out
}

/// One flip move with both trees; `removed == added` is a self-loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipTransition {
    pub before: Ncst,
    pub removed: Edge,
    pub added: Edge,
    pub after: Ncst,
}

/// One flip: drop a uniform edge, add back a uniform candidate.
pub fn fm_step(t: &Ncst, rng: &mut RngStream) -> Ncst {
    match fm_transition(t, rng) {
        Some(flip) => flip.after,
        None => t.clone(),
    }
}

/// Like [`fm_step`] but reports which edges were exchanged. `None` for the empty tree.
pub fn fm_transition(t: &Ncst, rng: &mut RngStream) -> Option<FlipTransition> {
    if t.size() == 0 {
        return None;
    }
    let removed = t.edges()[rng.below(t.size())];
    let candidates: Vec<Edge> = fm_candidates(t, removed).expect("edge of the tree").into_iter().collect();
    let added = candidates[rng.below(candidates.len())];
    let after = if added == removed {
        t.clone()
    } else {
        let mut edges: Vec<Edge> = t.edges().iter().copied().filter(|&e| e != removed).collect();
        edges.push(added);
        edges.sort_unstable();
        Ncst::from_sorted_unchecked(t.size(), edges)
    };
    Some(FlipTransition { before: t.clone(), removed, added, after })
}

/// Pointwise height comparison `height_x(i) >= height_y(i)`.
pub fn dominates(x: &DyckPath, y: &DyckPath) -> Result<bool> {
    if x.size() != y.size() {
        return Err(Error::SizeMismatch(x.size(), y.size()));
    }
    Ok(x.height_profile().iter().zip(y.height_profile()).all(|(a, b)| *a >= b))
}

/// Outcome of the randomness consumed by one coupled step, exposed so the
/// coupling can be checked exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoupledChoice {
    /// 1-based left position of the pair to swap.
    pub position: usize,
    /// For a chain moving on its own: take the swap. For the shared move: set `DU`
    /// when true, `UD` when false.
    pub coin: bool,
}

/// Monotone coupling: both chains look at the same position. A chain whose
/// pair is two equal symbols stays put while the other moves as usual; when
/// both pairs are mixed a common pattern is imposed, reverting any chain
/// where it is invalid.
pub fn coupled_am_step(x: &DyckPath, y: &DyckPath, rng: &mut RngStream) -> Result<(DyckPath, DyckPath)> {
    if !dominates(x, y)? {
        return Err(Error::DominanceViolated);
    }
    let positions = am_positions(x.size());
    if positions == 0 {
        return Ok((x.clone(), y.clone()));
    }
    let choice = CoupledChoice { position: rng.below(positions) + 1, coin: rng.coin() };
    Ok(coupled_transition(x, y, choice))
}

/// Deterministic part of [`coupled_am_step`] for a given choice.
pub fn coupled_transition(x: &DyckPath, y: &DyckPath, choice: CoupledChoice) -> (DyckPath, DyckPath) {
    let i = choice.position;
    let mixed = |p: &DyckPath| p.steps()[i - 1] != p.steps()[i];
    match (mixed(x), mixed(y)) {
        (false, false) => (x.clone(), y.clone()),
        (true, false) => (solo_move(x, i, choice.coin), y.clone()),
        (false, true) => (x.clone(), solo_move(y, i, choice.coin)),
        (true, true) => {
            let pattern = if choice.coin { [Step::Down, Step::Up] } else { [Step::Up, Step::Down] };
            (impose(x, i, pattern), impose(y, i, pattern))
        }
    }
}

fn solo_move(p: &DyckPath, i: usize, take: bool) -> DyckPath {
    match p.swapped(i) {
        Some(next) if take => next,
        _ => p.clone(),
    }
}

fn impose(p: &DyckPath, i: usize, pattern: [Step; 2]) -> DyckPath {
    if p.steps()[i - 1] == pattern[0] {
        return p.clone();
    }
    p.swapped(i).unwrap_or_else(|| p.clone())
}

/// `Φ(x, y) = Σ_{i=1}^{3n-1} (h_x(i) - h_y(i)) sin(πi/(3n))` for `x` dominating `y`.
pub fn wilson_potential(x: &DyckPath, y: &DyckPath) -> Result<f64> {
    if !dominates(x, y)? {
        return Err(Error::DominanceViolated);
    }
    let len = x.len();
    if len == 0 {
        return Ok(0.0);
    }
    let hx = x.height_profile();
    let hy = y.height_profile();
    let phi = (1..len)
        .map(|i| (hx[i - 1] - hy[i - 1]) as f64 * (PI * i as f64 / len as f64).sin())
        .sum();
    Ok(phi)
}
