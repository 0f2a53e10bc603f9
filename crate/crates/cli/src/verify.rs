//! The invariant suite behind `flipmix verify`.

use std::collections::BTreeSet;

use flipmix::bijection::{path_to_tree, tree_to_path};
use flipmix::canonical::{build_path, congestion_census, decode, encode};
use flipmix::chains::{am_neighbors, fm_transition_prob};
use flipmix::fuss_dyck::{enumerate_paths, fuss_catalan};
use flipmix::ncst::enumerate_trees;
use flipmix::spectral::{
    coalescence_experiment, dirichlet_form_exact, random_rational_function, transition_matrix, tv_mixing_time,
    ChainKind,
};
use flipmix::{Ncst, RngStream};
use num_traits::Zero;

pub struct Check {
    pub name: &'static str,
    pub limit: usize,
    pub outcome: Result<String, String>,
}

type Outcome = Result<String, String>;
type CheckFn = fn(usize) -> Outcome;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn run(max_n: usize) -> Vec<Check> {
    let limits = [7, 7, 5, 5, 4, 5, 4, 5];
    let checks: [(&'static str, CheckFn); 8] = [
        ("fuss-catalan counts", counts),
        ("bijection round trip", bijection),
        ("kernels symmetric and stochastic", kernels),
        ("canonical paths valid", canonical_paths),
        ("decode inverts encode", encoding),
        ("census usage <= 12n", census),
        ("E_AM <= B E_FM", comparison),
        ("mixing-time sandwiches", sandwiches),
    ];
    let mut out: Vec<Check> = checks
        .iter()
        .zip(limits)
        .map(|(&(name, check), cap)| {
            let limit = max_n.min(cap);
            Check { name, limit, outcome: check(limit) }
        })
        .collect();
    let n = max_n.clamp(2, 8);
    out.push(Check { name: "coupling keeps domination", limit: n, outcome: coupling(n) });
    out
}

fn counts(max_n: usize) -> Outcome {
    for n in 0..=max_n {
        let want = fuss_catalan(2, n as u64);
        let paths = enumerate_paths(n).map_err(err)?.len();
        let trees = enumerate_trees(n).map_err(err)?.len();
        ensure(want == paths.into() && want == trees.into(), || format!("n={n}: {paths} paths, {trees} trees, C={want}"))?;
    }
    Ok(format!("C_2,{max_n} = {}", fuss_catalan(2, max_n as u64)))
}

fn bijection(max_n: usize) -> Outcome {
    let mut total = 0;
    for n in 0..=max_n {
        let paths = enumerate_paths(n).map_err(err)?;
        let trees = enumerate_trees(n).map_err(err)?;
        for p in &paths {
            ensure(tree_to_path(&path_to_tree(p)) == *p, || format!("path {p} does not round trip"))?;
        }
        let image: BTreeSet<Ncst> = paths.iter().map(path_to_tree).collect();
        ensure(image == trees.into_iter().collect(), || format!("n={n}: image is not the tree set"))?;
        total += paths.len();
    }
    Ok(format!("{total} structures"))
}

fn kernels(max_n: usize) -> Outcome {
    for n in 0..=max_n {
        for kind in [ChainKind::Am, ChainKind::Fm] {
            let m = transition_matrix(kind, n).map_err(err)?;
            ensure(m.is_row_stochastic(), || format!("{kind} n={n}: row sums differ from 1"))?;
            ensure(m.is_symmetric(), || format!("{kind} n={n}: not symmetric"))?;
        }
    }
    Ok("exact".into())
}

fn canonical_paths(max_n: usize) -> Outcome {
    let mut moves = 0;
    for n in 1..=max_n {
        for i in enumerate_paths(n).map_err(err)? {
            for f in am_neighbors(&i) {
                let path = build_path(&i, &f).map_err(err)?;
                let mut current = path_to_tree(&i);
                for step in &path.steps {
                    let p = fm_transition_prob(&step.before, &step.after).map_err(err)?;
                    ensure(step.before == current && !p.is_zero(), || format!("{i} -> {f}: invalid flip"))?;
                    current = step.after.clone();
                }
                ensure(current == path_to_tree(&f), || format!("{i} -> {f}: wrong endpoint"))?;
                ensure(path.len() <= 3 * n + 2, || format!("{i} -> {f}: length {}", path.len()))?;
                moves += 1;
            }
        }
    }
    Ok(format!("{moves} adjacent moves"))
}

fn encoding(max_n: usize) -> Outcome {
    let mut steps = 0;
    for n in 1..=max_n {
        for i in enumerate_paths(n).map_err(err)? {
            for f in am_neighbors(&i) {
                let path = build_path(&i, &f).map_err(err)?;
                for (k, step) in path.steps.iter().enumerate() {
                    let triple = encode(&path, k).map_err(err)?;
                    let got = decode(&step.before, &step.after, triple).map_err(err)?;
                    ensure(got == (i.clone(), f.clone()), || format!("{i} -> {f}: step {k} decodes elsewhere"))?;
                    steps += 1;
                }
            }
        }
    }
    Ok(format!("{steps} steps"))
}

fn census(max_n: usize) -> Outcome {
    let mut worst = Vec::new();
    for n in 1..=max_n {
        let report = congestion_census(n).map_err(err)?;
        ensure(report.max_count <= 12 * n, || format!("n={n}: usage {}", report.max_count))?;
        worst.push(report.max_count.to_string());
    }
    Ok(format!("max usage {}", worst.join(",")))
}

fn comparison(max_n: usize) -> Outcome {
    let mut rng = RngStream::new(0);
    for n in 1..=max_n {
        let b = congestion_census(n).map_err(err)?.congestion;
        let am = transition_matrix(ChainKind::Am, n).map_err(err)?;
        let fm = transition_matrix(ChainKind::Fm, n).map_err(err)?;
        for _ in 0..50 {
            let f = random_rational_function(am.len(), &mut rng);
            let lhs = dirichlet_form_exact(&am, &f).map_err(err)?;
            let rhs = &b * dirichlet_form_exact(&fm, &f).map_err(err)?;
            ensure(lhs <= rhs, || format!("n={n}: {lhs} > {rhs}"))?;
        }
    }
    Ok("50 exact test functions per size".into())
}

fn sandwiches(max_n: usize) -> Outcome {
    let mut table = Vec::new();
    for n in 1..=max_n {
        for kind in [ChainKind::Am, ChainKind::Fm] {
            let report = tv_mixing_time(&transition_matrix(kind, n).map_err(err)?).map_err(err)?;
            ensure(report.upper_holds && report.lower_holds, || format!("{kind} n={n}: t_mix {}", report.t_mix))?;
            table.push(format!("{kind}{n}={}", report.t_mix));
        }
    }
    Ok(format!("t_mix {}", table.join(" ")))
}

fn coupling(n: usize) -> Outcome {
    let stats = coalescence_experiment(n, 20, 0).map_err(err)?;
    ensure(stats.domination_held, || "domination lost".into())?;
    Ok(format!("mean coalescence {:.0}", stats.mean))
}
