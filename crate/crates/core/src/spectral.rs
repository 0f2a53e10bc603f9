//! Exact small-`n` analysis of the two chains: transition matrices with
//! rational entries, spectral gaps, total-variation mixing curves, Dirichlet
//! forms, and the coalescence experiment for the monotone coupling.
//!
//! Matrices are stored row-sparse. Both kernels are symmetric, so the uniform
//! distribution is stationary and every float computation works on the dense
//! symmetric copy.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bijection::path_to_tree;
use crate::chains::{am_neighbors, am_transition_prob, fm_row, Prob};
use crate::error::{Error, Result};
use crate::fuss_dyck::{enumerate_paths_with_cap, DyckPath, Step};
use crate::ncst::Ncst;
use crate::rng::RngStream;

pub const DEFAULT_MATRIX_CAP: usize = 6;
pub const DEFAULT_TV_CAP: usize = 5;
pub const COUPLING_CAP: usize = 32;

/// Largest tolerated asymmetry of the float matrix handed to the eigen solver.
const SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Am,
    Fm,
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainKind::Am => "am",
            ChainKind::Fm => "fm",
        })
    }
}

impl FromStr for ChainKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "am" => Ok(ChainKind::Am),
            "fm" => Ok(ChainKind::Fm),
            other => Err(format!("unknown chain {other:?} (expected am or fm)")),
        }
    }
}

/// Exact kernel of one chain at size `n`.
///
/// State `i` is `paths[i]` for the adjacent-move chain and `path_to_tree(paths[i])`
/// for the flip chain, so a function on states means the same thing for both.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    kind: ChainKind,
    n: usize,
    paths: Vec<DyckPath>,
    rows: Vec<Vec<(usize, Prob)>>,
}

pub fn transition_matrix(kind: ChainKind, n: usize) -> Result<TransitionMatrix> {
    transition_matrix_with_cap(kind, n, DEFAULT_MATRIX_CAP)
}

pub fn transition_matrix_with_cap(kind: ChainKind, n: usize, cap: usize) -> Result<TransitionMatrix> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let paths = enumerate_paths_with_cap(n, cap)?;
    let rows: Vec<Vec<(usize, Prob)>> = match kind {
        ChainKind::Am => {
            let index: std::collections::HashMap<&DyckPath, usize> =
                paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
            paths
                .par_iter()
                .map(|x| {
                    let mut row: Vec<(usize, Prob)> = am_neighbors(x)
                        .iter()
                        .map(|y| (index[y], am_transition_prob(x, y).expect("same size")))
                        .collect();
                    row.push((index[x], am_transition_prob(x, x).expect("same size")));
                    row
                })
                .collect()
        }
        ChainKind::Fm => {
            let trees: Vec<Ncst> = paths.iter().map(path_to_tree).collect();
            let index: std::collections::HashMap<&Ncst, usize> =
                trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
            trees
                .par_iter()
                .map(|s| fm_row(s).into_iter().map(|(t, p)| (index[&t], p)).collect())
                .collect()
        }
    };
    let rows = rows
        .into_iter()
        .map(|mut row| {
            row.retain(|(_, p)| !p.is_zero());
            row.sort_by_key(|&(j, _)| j);
            row
        })
        .collect();
    Ok(TransitionMatrix { kind, n, paths, rows })
}

impl TransitionMatrix {
    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[DyckPath] {
        &self.paths
    }

    /// Text of state `i`: the path, or the tree's edge list for the flip chain.
    pub fn state_label(&self, i: usize) -> String {
        match self.kind {
            ChainKind::Am => self.paths[i].to_string(),
            ChainKind::Fm => path_to_tree(&self.paths[i]).to_text(),
        }
    }

    /// Non-zero entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, Prob)] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> Prob {
        match self.rows[i].binary_search_by_key(&j, |&(k, _)| k) {
            Ok(pos) => self.rows[i][pos].1.clone(),
            Err(_) => Prob::zero(),
        }
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_row_stochastic(&self) -> bool {
        self.rows.iter().all(|row| {
            row.iter().all(|(_, p)| p.is_positive()) && row.iter().map(|(_, p)| p).sum::<Prob>() == Prob::one()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| row.iter().all(|(j, p)| &self.entry(*j, i) == p))
    }

    /// The all-ones vector is a left eigenvector for eigenvalue 1.
    pub fn uniform_is_stationary(&self) -> bool {
        let mut columns = vec![Prob::zero(); self.len()];
        for row in &self.rows {
            for (j, p) in row {
                columns[*j] += p;
            }
        }
        columns.iter().all(One::is_one)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let size = self.len();
        let mut m = DMatrix::zeros(size, size);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, p) in row {
                m[(i, *j)] = p.to_f64().unwrap_or(0.0);
            }
        }
        m
    }

    fn float_rows(&self) -> Vec<Vec<(usize, f64)>> {
        self.rows.iter().map(|row| row.iter().map(|(j, p)| (*j, p.to_f64().unwrap_or(0.0))).collect()).collect()
    }
}

/// Eigenvalues in decreasing order.
pub fn eigenvalues(m: &TransitionMatrix) -> Vec<f64> {
    let dense = m.to_dense();
    let residue = (&dense - dense.transpose()).abs().max();
    assert!(residue <= SYMMETRY_TOLERANCE, "kernel is not symmetric (residue {residue})");
    let mut values: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// `1 - λ₂`. `None` for a single state, where the variance is identically zero.
pub fn spectral_gap(m: &TransitionMatrix) -> Option<f64> {
    let values = eigenvalues(m);
    (values.len() > 1).then(|| 1.0 - values[1])
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub chain: ChainKind,
    pub n: usize,
    pub states: usize,
    pub gap: Option<f64>,
    pub relaxation: Option<f64>,
    pub second: Option<f64>,
    pub smallest: f64,
}

pub fn spectrum(m: &TransitionMatrix) -> SpectrumReport {
    let values = eigenvalues(m);
    let second = values.get(1).copied();
    let gap = second.map(|l| 1.0 - l);
    SpectrumReport {
        chain: m.kind(),
        n: m.n(),
        states: m.len(),
        gap,
        relaxation: gap.map(|g| 1.0 / g),
        second,
        smallest: values.last().copied().unwrap_or(1.0),
    }
}

/// `½ Σ_{x,y} (f(x) - f(y))² π(x) P(x,y)` with uniform `π`.
pub fn dirichlet_form(m: &TransitionMatrix, f: &[f64]) -> Result<f64> {
    check_dimension(m, f.len())?;
    let mut total = 0.0;
    for (x, row) in m.rows.iter().enumerate() {
        for (y, p) in row {
            let d = f[x] - f[*y];
            total += d * d * p.to_f64().unwrap_or(0.0);
        }
    }
    Ok(total / (2.0 * m.len() as f64))
}

pub fn dirichlet_form_exact(m: &TransitionMatrix, f: &[BigRational]) -> Result<BigRational> {
    check_dimension(m, f.len())?;
    let mut total = BigRational::zero();
    for (x, row) in m.rows.iter().enumerate() {
        for (y, p) in row {
            let d = &f[x] - &f[*y];
            total += &d * &d * p;
        }
    }
    Ok(total / BigRational::from_integer(BigInt::from(2 * m.len())))
}

fn check_dimension(m: &TransitionMatrix, got: usize) -> Result<()> {
    if got != m.len() {
        return Err(Error::DimensionMismatch { expected: m.len(), got });
    }
    Ok(())
}

/// Variance under the uniform distribution.
pub fn variance(f: &[f64]) -> f64 {
    if f.is_empty() {
        return 0.0;
    }
    let len = f.len() as f64;
    let mean = f.iter().sum::<f64>() / len;
    f.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / len
}

/// Seeded test function with entries uniform on `[-1, 1]`.
pub fn random_function(len: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..len).map(|_| rng.uniform(-1.0, 1.0)).collect()
}

/// Seeded test function with entries `k/1000`, `k` uniform in `-1000..=1000`.
pub fn random_rational_function(len: usize, rng: &mut RngStream) -> Vec<BigRational> {
    (0..len)
        .map(|_| BigRational::new(BigInt::from(rng.below(2001) as i64 - 1000), BigInt::from(1000)))
        .collect()
}

/// Smallest `E(f,f)/Var(f)` over `samples` random non-constant functions.
/// An upper bound on the spectral gap.
pub fn variational_gap(m: &TransitionMatrix, samples: usize, seed: u64) -> Option<f64> {
    if m.len() < 2 {
        return None;
    }
    let mut rng = RngStream::new(seed);
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let f = random_function(m.len(), &mut rng);
        let var = variance(&f);
        if var > 0.0 {
            best = best.min(dirichlet_form(m, &f).expect("dimension matches") / var);
        }
    }
    Some(best)
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingReport {
    pub chain: ChainKind,
    pub n: usize,
    pub states: usize,
    pub gap: Option<f64>,
    pub relaxation: Option<f64>,
    /// `min { t : d(t) ≤ 1/4 }`.
    pub t_mix: usize,
    /// `d(t)` for `t = 0..=t_mix`.
    pub d_curve: Vec<f64>,
    pub pi_min: f64,
    /// `(1/λ)(1 + ½ log(1/π_min))`.
    pub upper_bound: Option<f64>,
    pub upper_holds: bool,
    /// `1/λ ≤ 1 + 2 t_mix`.
    pub lower_holds: bool,
}

pub fn tv_mixing_time(m: &TransitionMatrix) -> Result<MixingReport> {
    tv_mixing_time_with_cap(m, DEFAULT_TV_CAP)
}

pub fn tv_mixing_time_with_cap(m: &TransitionMatrix, cap: usize) -> Result<MixingReport> {
    if m.n() > cap {
        return Err(Error::CapExceeded { n: m.n(), cap });
    }
    let size = m.len();
    let uniform = 1.0 / size as f64;
    let rows = m.float_rows();
    let distance = |dist: &[f64]| -> f64 {
        dist.chunks(size)
            .map(|row| 0.5 * row.iter().map(|p| (p - uniform).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };

    // Row x of `dist` is P^t(x, ·).
    let mut dist = vec![0.0; size * size];
    for x in 0..size {
        dist[x * size + x] = 1.0;
    }
    let mut d_curve = vec![distance(&dist)];
    while *d_curve.last().expect("non-empty") > 0.25 {
        let mut next = vec![0.0; size * size];
        for x in 0..size {
            let (from, to) = (&dist[x * size..(x + 1) * size], &mut next[x * size..(x + 1) * size]);
            for (z, &mass) in from.iter().enumerate() {
                if mass != 0.0 {
                    for &(y, p) in &rows[z] {
                        to[y] += mass * p;
                    }
                }
            }
        }
        dist = next;
        d_curve.push(distance(&dist));
    }

    let t_mix = d_curve.len() - 1;
    let gap = spectral_gap(m);
    let relaxation = gap.map(|g| 1.0 / g);
    let upper_bound = relaxation.map(|r| r * (1.0 + 0.5 * (size as f64).ln()));
    Ok(MixingReport {
        chain: m.kind(),
        n: m.n(),
        states: size,
        gap,
        relaxation,
        t_mix,
        d_curve,
        pi_min: uniform,
        upper_bound,
        upper_holds: upper_bound.is_none_or(|b| t_mix as f64 <= b),
        lower_holds: relaxation.is_none_or(|r| r <= 1.0 + 2.0 * t_mix as f64),
    })
}

/// Coalescence times of the monotone coupling started from the highest and
/// lowest paths.
#[derive(Debug, Clone, Serialize)]
pub struct CoalescenceStats {
    pub n: usize,
    pub seed: u64,
    pub times: Vec<u64>,
    pub mean: f64,
    pub median: f64,
    /// Domination was checked after every step of every run.
    pub domination_held: bool,
}

pub fn coalescence_experiment(n: usize, num_seeds: usize, seed: u64) -> Result<CoalescenceStats> {
    if n > COUPLING_CAP {
        return Err(Error::CapExceeded { n, cap: COUPLING_CAP });
    }
    let runs: Vec<(u64, bool)> =
        (0..num_seeds as u64).into_par_iter().map(|i| coalesce(n, &mut RngStream::replica(seed, i))).collect();
    let mut times: Vec<u64> = runs.iter().map(|r| r.0).collect();
    let domination_held = runs.iter().all(|r| r.1);
    let mean = times.iter().map(|&t| t as f64).sum::<f64>() / times.len().max(1) as f64;
    let mut sorted = times.clone();
    sorted.sort_unstable();
    let median = match sorted.len() {
        0 => 0.0,
        len if len % 2 == 1 => sorted[len / 2] as f64,
        len => (sorted[len / 2 - 1] + sorted[len / 2]) as f64 / 2.0,
    };
    times.shrink_to_fit();
    Ok(CoalescenceStats { n, seed, times, mean, median, domination_held })
}

/// Two paths of the coupled chain kept as mutable step and height arrays, so a
/// step costs O(1). Mirrors [`crate::chains::coupled_transition`].
#[derive(Debug, Clone)]
struct CoupledPair {
    steps: [Vec<Step>; 2],
    heights: [Vec<i64>; 2],
    differing: usize,
}

impl CoupledPair {
    fn new(x: &DyckPath, y: &DyckPath) -> Self {
        let heights = [x.height_profile(), y.height_profile()];
        let differing = heights[0].iter().zip(&heights[1]).filter(|(a, b)| a != b).count();
        Self { steps: [x.steps().to_vec(), y.steps().to_vec()], heights, differing }
    }

    fn mixed(&self, c: usize, i: usize) -> bool {
        self.steps[c][i - 1] != self.steps[c][i]
    }

    /// Swaps the pair at 1-based position `i` of chain `c` if the result stays valid.
    fn try_swap(&mut self, c: usize, i: usize) {
        let h = self.heights[c][i - 1];
        let new_h = if self.steps[c][i - 1] == Step::Up { h - 3 } else { h + 3 };
        if new_h < 0 {
            return;
        }
        let before = self.heights[0][i - 1] != self.heights[1][i - 1];
        self.steps[c].swap(i - 1, i);
        self.heights[c][i - 1] = new_h;
        let after = self.heights[0][i - 1] != self.heights[1][i - 1];
        match (before, after) {
            (true, false) => self.differing -= 1,
            (false, true) => self.differing += 1,
            _ => {}
        }
    }

    fn step(&mut self, i: usize, coin: bool) {
        match (self.mixed(0, i), self.mixed(1, i)) {
            (false, false) => {}
            (true, false) if coin => self.try_swap(0, i),
            (false, true) if coin => self.try_swap(1, i),
            (true, true) => {
                let first = if coin { Step::Down } else { Step::Up };
                for c in 0..2 {
                    if self.steps[c][i - 1] != first {
                        self.try_swap(c, i);
                    }
                }
            }
            _ => {}
        }
    }

    /// Only height `i` can change in a step, so checking it keeps domination.
    fn dominated_at(&self, i: usize) -> bool {
        self.heights[0][i - 1] >= self.heights[1][i - 1]
    }
}

fn coalesce(n: usize, rng: &mut RngStream) -> (u64, bool) {
    let mut pair = CoupledPair::new(&DyckPath::highest(n), &DyckPath::lowest(n));
    let positions = (3 * n).saturating_sub(1);
    let mut t = 0;
    let mut held = true;
    while pair.differing > 0 {
        let i = rng.below(positions) + 1;
        let coin = rng.coin();
        pair.step(i, coin);
        held &= pair.dominated_at(i);
        t += 1;
    }
    (t, held)
}

/// Least-squares line through `(x, y)` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(LineFit { slope, intercept: my - slope * mx })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoalescenceFit {
    /// Slope of log(mean time) against log n.
    pub log_log: Option<LineFit>,
    /// `mean / (n³ ln n)` per size.
    pub ratio_to_n3_log_n: Vec<(usize, f64)>,
}

pub fn fit_coalescence(stats: &[CoalescenceStats]) -> CoalescenceFit {
    let points: Vec<(f64, f64)> =
        stats.iter().filter(|s| s.n > 1 && s.mean > 0.0).map(|s| ((s.n as f64).ln(), s.mean.ln())).collect();
    let ratio_to_n3_log_n = stats
        .iter()
        .filter(|s| s.n > 1)
        .map(|s| {
            let n = s.n as f64;
            (s.n, s.mean / (n.powi(3) * n.ln()))
        })
        .collect();
    CoalescenceFit { log_log: fit_line(&points), ratio_to_n3_log_n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{coupled_transition, dominates, ratio, CoupledChoice};
    use crate::fuss_dyck::parse_path;
    use crate::ncst::enumerate_trees;

    #[test]
    fn am_two_matches_path_graph() {
        let m = transition_matrix(ChainKind::Am, 2).unwrap();
        let labels: Vec<String> = (0..3).map(|i| m.state_label(i)).collect();
        assert_eq!(labels, ["UUDUUD", "UUUDUD", "UUUUDD"]);
        let tenth = ratio(1, 10);
        assert_eq!(m.entry(0, 1), tenth);
        assert_eq!(m.entry(1, 2), tenth);
        assert_eq!(m.entry(0, 2), Prob::zero());
        assert_eq!(m.entry(1, 1), ratio(4, 5));
    }

    #[test]
    fn fm_two_is_complete() {
        let m = transition_matrix(ChainKind::Fm, 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { ratio(1, 2) } else { ratio(1, 4) };
                assert_eq!(m.entry(i, j), expected);
            }
        }
        let one = transition_matrix(ChainKind::Fm, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.entry(0, 0), Prob::one());
        assert_eq!(spectral_gap(&one), None);
    }

    #[test]
    fn fm_states_follow_tree_enumeration() {
        for n in 0..=4 {
            let m = transition_matrix(ChainKind::Fm, n).unwrap();
            let trees: Vec<Ncst> = m.paths().iter().map(path_to_tree).collect();
            assert_eq!(trees, enumerate_trees(n).unwrap());
        }
    }

    #[test]
    fn matrices_exact_up_to_five() {
        for n in 0..=5 {
            for kind in [ChainKind::Am, ChainKind::Fm] {
                let m = transition_matrix(kind, n).unwrap();
                assert!(m.is_row_stochastic(), "{kind} {n}");
                assert!(m.is_symmetric(), "{kind} {n}");
                assert!(m.uniform_is_stationary(), "{kind} {n}");
            }
        }
        assert_eq!(transition_matrix(ChainKind::Am, 7).unwrap_err(), Error::CapExceeded { n: 7, cap: 6 });
    }

    #[test]
    fn gaps_of_small_chains() {
        // P = I - L/10 on a three-vertex path, whose Laplacian has spectrum {0, 1, 3}.
        let am = transition_matrix(ChainKind::Am, 2).unwrap();
        let values = eigenvalues(&am);
        for (got, want) in values.iter().zip([1.0, 0.9, 0.7]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((spectral_gap(&am).unwrap() - 0.1).abs() < 1e-12);
        // J/4 + I/4 has spectrum {1, 1/4, 1/4}.
        let fm = transition_matrix(ChainKind::Fm, 2).unwrap();
        assert!((spectral_gap(&fm).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_in_range_and_aperiodic() {
        for n in 1..=5 {
            for kind in [ChainKind::Am, ChainKind::Fm] {
                let m = transition_matrix(kind, n).unwrap();
                let values = eigenvalues(&m);
                assert!((values[0] - 1.0).abs() < 1e-9);
                assert!(values.iter().all(|v| *v <= 1.0 + 1e-9 && *v > -1.0 + 1e-9), "{kind} {n}");
            }
        }
    }

    #[test]
    fn variational_quotient_bounds_gap() {
        for n in 2..=4 {
            for kind in [ChainKind::Am, ChainKind::Fm] {
                let m = transition_matrix(kind, n).unwrap();
                let gap = spectral_gap(&m).unwrap();
                let best = variational_gap(&m, 1000, 11).unwrap();
                assert!(best >= gap - 1e-9, "{kind} {n}: {best} < {gap}");
            }
        }
    }

    #[test]
    fn dirichlet_two_ways() {
        let m = transition_matrix(ChainKind::Am, 2).unwrap();
        assert_eq!(dirichlet_form(&m, &[2.0, 2.0, 2.0]).unwrap(), 0.0);
        let dense = m.to_dense();
        for x in 0..3 {
            let mut f = vec![0.0; 3];
            f[x] = 1.0;
            // Definition: off-diagonal mass of row x, counted from both ends, times π/2.
            let off: f64 = (0..3).filter(|&y| y != x).map(|y| dense[(x, y)]).sum();
            let by_definition = dirichlet_form(&m, &f).unwrap();
            assert!((by_definition - off / 3.0).abs() < 1e-15);
            // Identity: E(f,f) = π fᵀ(I - P)f.
            let v = nalgebra::DVector::from_vec(f.clone());
            let identity = (v.transpose() * (DMatrix::identity(3, 3) - &dense) * &v)[(0, 0)] / 3.0;
            assert!((by_definition - identity).abs() < 1e-15);
        }
        let exact = dirichlet_form_exact(&m, &[BigRational::one(), BigRational::zero(), BigRational::zero()]).unwrap();
        assert_eq!(exact, ratio(1, 30));
        assert_eq!(dirichlet_form(&m, &[1.0]), Err(Error::DimensionMismatch { expected: 3, got: 1 }));
    }

    #[test]
    fn tv_curves() {
        let am = transition_matrix(ChainKind::Am, 2).unwrap();
        let report = tv_mixing_time(&am).unwrap();
        assert!((report.d_curve[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!(report.d_curve.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        // Matches a direct numpy power iteration of the 3x3 kernel.
        assert_eq!(report.t_mix, 8);
        assert!(report.upper_holds && report.lower_holds);

        let mut previous = 0;
        for n in 3..=5 {
            let fm = transition_matrix(ChainKind::Fm, n).unwrap();
            let report = tv_mixing_time(&fm).unwrap();
            assert!(report.upper_holds && report.lower_holds, "fm {n}");
            assert!(report.t_mix > previous);
            previous = report.t_mix;
        }
        let six = transition_matrix(ChainKind::Fm, 6).unwrap();
        assert_eq!(tv_mixing_time(&six).unwrap_err(), Error::CapExceeded { n: 6, cap: 5 });
    }

    #[test]
    fn fast_pair_matches_coupling() {
        let mut rng = RngStream::new(3);
        for n in [3, 5, 8] {
            let (mut x, mut y) = (DyckPath::highest(n), DyckPath::lowest(n));
            let mut pair = CoupledPair::new(&x, &y);
            for _ in 0..5000 {
                let choice = CoupledChoice { position: rng.below(3 * n - 1) + 1, coin: rng.coin() };
                (x, y) = coupled_transition(&x, &y, choice);
                pair.step(choice.position, choice.coin);
                assert_eq!(pair.steps[0], x.steps());
                assert_eq!(pair.steps[1], y.steps());
                assert!(dominates(&x, &y).unwrap());
                let differing = x.height_profile().iter().zip(y.height_profile()).filter(|(a, b)| **a != *b).count();
                assert_eq!(pair.differing, differing);
            }
        }
    }

    #[test]
    fn coalescence_basics() {
        let one = coalescence_experiment(1, 5, 0).unwrap();
        assert!(one.times.iter().all(|&t| t == 0));
        let stats = coalescence_experiment(4, 50, 9).unwrap();
        assert!(stats.domination_held);
        assert!(stats.times.iter().all(|&t| t > 0));
        assert_eq!(stats.times, coalescence_experiment(4, 50, 9).unwrap().times);
        assert_eq!(coalescence_experiment(33, 1, 0).unwrap_err(), Error::CapExceeded { n: 33, cap: 32 });
        assert_eq!(parse_path("UUD").unwrap(), DyckPath::highest(1));
    }

    #[test]
    fn line_fit() {
        let fit = fit_line(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept - 1.0).abs() < 1e-12);
        assert_eq!(fit_line(&[(1.0, 1.0)]), None);
    }
}
