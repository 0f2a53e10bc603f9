//! Shift sequences: flips moving the subtree under an edge across its gap.
//!
//! A right shift under `(s, t)` starts with `[s, t-1]` connected beneath the
//! edge and `t` attached only through it, and ends with `s` attached only
//! through the edge and the same subtree on `[s+1, t]`. Minimal segments are
//! moved right to left; each segment `(p, q)` with gap `g` uses up to three
//! flips of its pivot (`M5`, `M6`, `M7`) and recursive shifts of its two halves.

use super::{AnnotatedStep, EncodingTag, MoveTag, Recorder, Work};
use crate::error::{Error, Result};
use crate::ncst::{Edge, Ncst};

pub(crate) fn shift_right_rec(rec: &mut Recorder, s: usize, t: usize, depth: usize) {
    let pivots = rec.work.segment_pivots(Edge(s, t));
    for &Edge(p, q) in pivots.iter().rev() {
        let g = rec.work.gap(Edge(p, q));
        if q >= g + 2 {
            rec.flip(Edge(p, q), Edge(p, g + 1), MoveTag::M5, depth);
        }
        if p < g {
            shift_right_rec(rec, p, g + 1, depth + 1);
        }
        rec.flip(Edge(p, g + 1), Edge(g + 1, q + 1), MoveTag::M6, depth);
        if q >= g + 2 {
            shift_right_rec(rec, g + 1, q + 1, depth + 1);
        }
        if p < g {
            rec.flip(Edge(g + 1, q + 1), Edge(p + 1, q + 1), MoveTag::M7, depth);
        }
    }
}

/// Appends a left shift under `span` by reversing the right shift that ends in
/// the current state.
pub(crate) fn shift_left_rec(rec: &mut Recorder, span: Edge) {
    let mut source = rec.work.clone();
    source.shift_beneath(span, -1);
    let mut forward = Recorder::new(source.clone(), rec.encoding_tag);
    shift_right_rec(&mut forward, span.lo(), span.hi(), 1);
    debug_assert_eq!(forward.work, rec.work);
    rec.steps.extend(forward.steps.iter().rev().map(AnnotatedStep::reversed));
    rec.work = source;
}

fn check_right_form(tree: &Ncst, span: Edge) -> Result<()> {
    if !tree.contains(span) || tree.gap_beneath(span)? + 1 != span.hi() {
        return Err(Error::ShiftPreconditionViolated(span));
    }
    Ok(())
}

/// Flips realising a right shift under `span`, tagged as depth-1 shift steps.
pub fn shift_right(tree: &Ncst, span: Edge) -> Result<Vec<AnnotatedStep>> {
    check_right_form(tree, span)?;
    let mut rec = Recorder::new(Work::of(tree), EncodingTag::S1);
    shift_right_rec(&mut rec, span.lo(), span.hi(), 1);
    Ok(rec.steps)
}

/// Flips realising a left shift under `span`: the reverse of the right shift
/// ending in `tree`.
pub fn shift_left(tree: &Ncst, span: Edge) -> Result<Vec<AnnotatedStep>> {
    if !tree.contains(span) || tree.gap_beneath(span)? != span.lo() {
        return Err(Error::ShiftPreconditionViolated(span));
    }
    let mut rec = Recorder::new(Work::of(tree), EncodingTag::S2);
    shift_left_rec(&mut rec, span);
    Ok(rec.steps)
}
