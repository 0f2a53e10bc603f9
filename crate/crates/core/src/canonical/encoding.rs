//! Encoding of canonical paths through a flip transition.
//!
//! A step `Z -> Z'` of the path for `(I, F)` is labelled by the move direction,
//! the flip or shift it belongs to, and the recursion depth inside a shift.
//! [`decode`] recovers `(I, F)` from `Z -> Z'` and the label alone by undoing
//! the construction around the moved edge, then confirms the result by
//! rebuilding the path.

use serde::Serialize;

use super::{build_path, encoding_depth, Direction, EncodingTag, Work};
use crate::bijection::tree_to_path;
use crate::chains::flip_between;
use crate::error::{Error, Result};
use crate::fuss_dyck::DyckPath;
use crate::ncst::{Edge, Ncst};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EncodingTriple {
    pub direction: Direction,
    pub tag: EncodingTag,
    /// Shift recursion depth; 1 for the top-level flips.
    pub depth: usize,
}

impl std::fmt::Display for EncodingTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?}, {})", self.direction, self.tag, self.depth)
    }
}

pub fn encode(path: &super::CanonicalPath, k: usize) -> Result<EncodingTriple> {
    let step = path.steps.get(k).ok_or(Error::IndexOutOfRange { index: k, len: path.steps.len() })?;
    Ok(EncodingTriple {
        direction: path.classification.direction,
        tag: step.encoding_tag,
        depth: encoding_depth(step),
    })
}

/// The adjacent move `(I, F)` whose canonical path takes `z -> z_prime` with
/// this label.
pub fn decode(z: &Ncst, z_prime: &Ncst, triple: EncodingTriple) -> Result<(DyckPath, DyckPath)> {
    if z.size() != z_prime.size() {
        return Err(Error::SizeMismatch(z.size(), z_prime.size()));
    }
    flip_between(z, z_prime).map_err(|_| Error::NoPreimage)?;
    let trees = match triple.direction {
        Direction::Left => decode_left(z, z_prime, triple.tag, triple.depth),
        Direction::Right => decode_left(z_prime, z, triple.tag, triple.depth).map(|(i, f)| (f, i)),
    };
    let (t_i, t_f) = trees.ok_or(Error::NoPreimage)?;
    let (i, f) = (tree_to_path(&t_i), tree_to_path(&t_f));
    let path = build_path(&i, &f).map_err(|_| Error::NoPreimage)?;
    let routed = (0..path.steps.len()).any(|k| {
        let step = &path.steps[k];
        &step.before == z && &step.after == z_prime && encode(&path, k).ok() == Some(triple)
    });
    if routed {
        Ok((i, f))
    } else {
        Err(Error::NoPreimage)
    }
}

/// Initial and final trees of the leftward move whose path contains `z -> z2`.
fn decode_left(z: &Ncst, z2: &Ncst, tag: EncodingTag, depth: usize) -> Option<(Ncst, Ncst)> {
    let (removed, added) = flip_between(z, z2).ok()?;
    match tag {
        EncodingTag::M1 => {
            // e = (p, g+1) moves to (a1, g+1); the shifted part sits beneath e.
            if added.hi() != removed.hi() || added.lo() >= removed.lo() {
                return None;
            }
            let mut work = Work::of(z);
            let a = work.overarching(removed)?;
            if a.lo() != added.lo() {
                return None;
            }
            work.shift_beneath(removed, -1);
            let mut fin = Work::of(z2);
            fin.replace(a, Edge(removed.hi(), a.hi()));
            Some((work.checked_tree()?, fin.checked_tree()?))
        }
        EncodingTag::M2 => {
            // a = (a1, a2) moves to (g+1, a2); e = (a1, g+1) is still in place.
            if added.hi() != removed.hi() || added.lo() <= removed.lo() {
                return None;
            }
            let mut work = Work::of(z);
            let e = Edge(removed.lo(), added.lo());
            if !work.contains(e) {
                return None;
            }
            let p = work.gap(e);
            let e_before = Edge(p, e.hi());
            if p != e.lo() {
                work.replace(e, e_before);
            }
            work.shift_beneath(e_before, -1);
            Some((work.checked_tree()?, z2.clone()))
        }
        EncodingTag::M3 => {
            // e = (q, g+1) moves to (g_a, q).
            if added.hi() != removed.lo() {
                return None;
            }
            let g = removed.hi() - 1;
            let mut fin = Work::of(z2);
            fin.shift_beneath(added, -1);
            if added.hi() != g {
                fin.replace(added, Edge(added.lo(), g));
            }
            Some((z.clone(), fin.checked_tree()?))
        }
        EncodingTag::M4 => {
            // (g_a, q) moves to (g_a, g) after the left shift.
            if added.lo() != removed.lo() || added.hi() <= removed.hi() {
                return None;
            }
            let mut init = Work::of(z);
            init.shift_beneath(removed, 1);
            init.replace(removed, Edge(removed.hi(), added.hi() + 1));
            Some((init.checked_tree()?, z2.clone()))
        }
        EncodingTag::S1 => {
            let (start, e0) = unwind_shift(z, z2, depth)?;
            let a = start.overarching(e0)?;
            let mut fin = start.clone();
            fin.shift_beneath(e0, 1);
            let g1 = e0.hi();
            if e0.lo() != a.lo() {
                fin.replace(e0, Edge(a.lo(), g1));
            }
            fin.replace(a, Edge(g1, a.hi()));
            Some((start.checked_tree()?, fin.checked_tree()?))
        }
        EncodingTag::S2 => {
            // Inside a left shift the flips run backwards.
            let (shifted, e0) = unwind_shift(z2, z, depth)?;
            let a = shifted.overarching(e0)?;
            let g = shifted.gap(a);
            let mut fin = shifted.clone();
            if e0.hi() != g {
                fin.replace(e0, Edge(e0.lo(), g));
            }
            let mut init = shifted;
            init.shift_beneath(e0, 1);
            init.replace(e0, Edge(e0.hi(), g + 1));
            Some((init.checked_tree()?, fin.checked_tree()?))
        }
    }
}

/// Given a flip `z -> z2` performed at `depth` inside a right shift, returns
/// the state before the outermost shift call and that call's span edge.
fn unwind_shift(z: &Ncst, z2: &Ncst, depth: usize) -> Option<(Work, Edge)> {
    if depth == 0 {
        return None;
    }
    let (removed, added) = flip_between(z, z2).ok()?;
    let mut work = Work::of(z);
    // chain[i] is the span edge of the depth-(i+1) call; chain[depth] the moved edge.
    let mut chain = vec![removed; depth + 1];
    for i in (0..depth).rev() {
        chain[i] = work.overarching(chain[i + 1])?;
    }

    // Restore the segment being processed at the deepest level.
    let span = chain[depth - 1];
    let q = if removed.lo() == added.lo() {
        // M5: the segment is still untouched.
        removed.hi()
    } else if removed.hi() == added.hi() {
        // M7: both halves are already shifted.
        let (g1, q) = (removed.lo(), removed.hi() - 1);
        let p = added.lo().checked_sub(1)?;
        work.shift_beneath(removed, -1);
        work.shift_where(|f| f.is_beneath(span) && f.lo() > p && f.hi() <= g1, -1);
        work.replace(removed, Edge(p, q));
        q
    } else if removed.hi() == added.lo() {
        // M6: the left half is shifted, the right half is not.
        let (p, q) = (removed.lo(), added.hi().checked_sub(1)?);
        work.shift_beneath(removed, -1);
        work.replace(removed, Edge(p, q));
        q
    } else {
        return None;
    };
    work.shift_where(|f| f.is_beneath(span) && f.lo() > q, -1);

    // Undo the enclosing calls from the inside out.
    for level in (1..depth).rev() {
        let span = chain[level - 1];
        let pivot = chain[level];
        let gap = work.gap(span);
        let q = if gap >= pivot.hi() {
            // The inner call shifted the left half, right after M5.
            if gap != pivot.hi() {
                work.replace(pivot, Edge(pivot.lo(), gap));
            }
            gap
        } else {
            // The inner call shifted the right half, right after M6.
            let (p, g1, q) = (gap, pivot.lo(), pivot.hi() - 1);
            work.shift_where(|f| f.is_beneath(span) && f.lo() > p && f.hi() <= g1, -1);
            work.replace(pivot, Edge(p, q));
            q
        };
        work.shift_where(|f| f.is_beneath(span) && f.lo() > q, -1);
    }
    Some((work, chain[0]))
}
