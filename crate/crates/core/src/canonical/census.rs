//! Load of the canonical paths on each flip transition, and the congestion ratio.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::build_path;
use crate::chains::{am_neighbors, fm_transition_prob};
use crate::error::{Error, Result};
use crate::fuss_dyck::enumerate_paths_with_cap;
use crate::ncst::Ncst;

pub const DEFAULT_CENSUS_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionUsage {
    pub from: Ncst,
    pub to: Ncst,
    /// Number of adjacent-move pairs whose path contains this transition.
    pub count: usize,
    /// Sum of those paths' lengths.
    pub length_sum: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongestionReport {
    pub n: usize,
    /// Ordered adjacent-move pairs `(I, F)` with `I != F`.
    pub pairs: usize,
    pub max_path_len: usize,
    /// Transitions used twice by the same path (zero for a sound construction).
    pub repeated_transitions: usize,
    pub usage: Vec<TransitionUsage>,
    pub max_count: usize,
    pub bound_12n: usize,
    /// `max over (Z,Z') of Σ |Γ_IF| P_AM(I,F) / P_FM(Z,Z')`, exact.
    #[serde(serialize_with = "ratio_as_string")]
    pub congestion: BigRational,
}

fn ratio_as_string<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl CongestionReport {
    pub fn congestion_f64(&self) -> f64 {
        self.congestion.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `B / n^4`, the normalisation suggested by the quartic bound.
    pub fn congestion_over_n4(&self) -> f64 {
        self.congestion_f64() / (self.n as f64).powi(4)
    }
}

pub fn congestion_census(n: usize) -> Result<CongestionReport> {
    congestion_census_with_cap(n, DEFAULT_CENSUS_CAP)
}

pub fn congestion_census_with_cap(n: usize, cap: usize) -> Result<CongestionReport> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let paths = enumerate_paths_with_cap(n, cap)?;
    let per_path: Vec<(usize, Vec<(Ncst, Ncst)>)> = paths
        .par_iter()
        .flat_map_iter(|i| am_neighbors(i).into_iter().map(move |f| (i.clone(), f)))
        .map(|(i, f)| {
            let path = build_path(&i, &f).expect("neighbours differ by one adjacent move");
            let transitions: Vec<(Ncst, Ncst)> = path.steps.into_iter().map(|s| (s.before, s.after)).collect();
            (transitions.len(), transitions)
        })
        .collect();

    let mut table: BTreeMap<(Ncst, Ncst), (usize, usize)> = BTreeMap::new();
    let mut repeated_transitions = 0;
    let mut max_path_len = 0;
    for (len, transitions) in &per_path {
        max_path_len = max_path_len.max(*len);
        let mut seen = std::collections::BTreeSet::new();
        for t in transitions {
            if !seen.insert(t) {
                repeated_transitions += 1;
            }
            // Multiplicity is kept in the length sum so the ratio stays an upper bound.
            let entry = table.entry(t.clone()).or_insert((0, 0));
            entry.1 += len;
        }
        for t in seen {
            table.get_mut(t).expect("inserted above").0 += 1;
        }
    }

    let am_weight = BigRational::new(BigInt::from(1), BigInt::from(6 * n as i64 - 2));
    let mut congestion = BigRational::zero();
    let mut usage = Vec::with_capacity(table.len());
    for ((from, to), (count, length_sum)) in table {
        let p_fm = fm_transition_prob(&from, &to)?;
        let load = BigRational::from_integer(BigInt::from(length_sum)) * &am_weight / p_fm;
        if load > congestion {
            congestion = load;
        }
        usage.push(TransitionUsage { from, to, count, length_sum });
    }
    let max_count = usage.iter().map(|u| u.count).max().unwrap_or(0);
    Ok(CongestionReport {
        n,
        pairs: per_path.len(),
        max_path_len,
        repeated_transitions,
        usage,
        max_count,
        bound_12n: 12 * n,
        congestion,
    })
}
