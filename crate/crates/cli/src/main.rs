//! `flipmix`: counting, sampling and exact mixing analysis for 2-Dyck paths
//! and non-crossing spanning trees.

mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flipmix::bijection::{path_to_tree, tree_to_path};
use flipmix::canonical::{build_path, congestion_census_with_cap, encode, DEFAULT_CENSUS_CAP};
use flipmix::chains::{am_step, fm_step};
use flipmix::fuss_dyck::{enumerate_paths_with_cap, fuss_catalan, DEFAULT_ENUMERATION_CAP};
use flipmix::spectral::{
    coalescence_experiment, fit_coalescence, spectrum, transition_matrix_with_cap, tv_mixing_time_with_cap,
    ChainKind, DEFAULT_MATRIX_CAP, DEFAULT_TV_CAP,
};
use flipmix::{DyckPath, Ncst, RngStream};
use output::{open, write_csv, write_json, write_summary, Header};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "flipmix", version, about = "Fuss-Catalan structures and their Markov chains")]
struct Cli {
    /// Size cap for exhaustive work; defaults depend on the subcommand.
    #[arg(long, global = true, env = "FLIPMIX_CAP")]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Fuss-Catalan number C_{k,n}.
    Count {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        n: u64,
    },
    /// List every 2-Dyck path of size n with its tree.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Map a path to its tree, or a tree to its path.
    Bijection {
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        path: Option<DyckPath>,
        /// Edge list such as "0-1,0-2".
        #[arg(long)]
        tree: Option<Ncst>,
    },
    /// Run one chain and record its trajectory.
    Walk {
        #[arg(long)]
        chain: ChainKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record every k-th state.
        #[arg(long, default_value_t = 1)]
        every: u64,
        /// Starting path (am) or edge list (fm); defaults to the highest path or its tree.
        #[arg(long)]
        start: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Canonical flip path simulating one adjacent move.
    Path {
        #[arg(long)]
        from: DyckPath,
        #[arg(long)]
        to: DyckPath,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Per-transition usage of the canonical paths and the congestion ratio.
    Congestion {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Spectral gap and relaxation time of one chain.
    Spectrum {
        #[arg(long)]
        chain: ChainKind,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Total-variation distance curve and mixing time.
    Mix {
        #[arg(long)]
        chain: ChainKind,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Coalescence times of the monotone coupling from the extreme paths.
    Couple {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Run the invariant suite; exits 1 on any failure.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Failed checks, as opposed to bad input.
#[derive(Debug)]
struct VerificationFailed(usize);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} check(s) failed", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<VerificationFailed>().is_some() || e.downcast_ref::<std::io::Error>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn cap_or(cap: Option<usize>, default: usize) -> usize {
    match cap {
        Some(c) if c > default => {
            eprintln!("warning: cap {c} is above the default {default}; exhaustive work may be slow");
            c
        }
        Some(c) => c,
        None => default,
    }
}

#[derive(Serialize)]
struct StepRecord {
    before: String,
    after: String,
    removed: String,
    added: String,
    tag: String,
    depth: usize,
    encoding: flipmix::canonical::EncodingTriple,
}

#[derive(Serialize)]
struct PathRecord {
    from: DyckPath,
    to: DyckPath,
    classification: flipmix::canonical::MoveClassification,
    shift: Option<flipmix::canonical::ShiftSpan>,
    steps: Vec<StepRecord>,
}

#[derive(Serialize)]
struct CongestionSummary {
    n: usize,
    pairs: usize,
    transitions: usize,
    max_count: usize,
    bound_12n: usize,
    max_path_len: usize,
    #[serde(rename = "B")]
    b: String,
    b_float: f64,
    b_over_n4: f64,
}

#[derive(Serialize)]
struct MixSummary {
    chain: ChainKind,
    n: usize,
    states: usize,
    gap: Option<f64>,
    relaxation: Option<f64>,
    t_mix: usize,
    pi_min: f64,
    upper_bound: Option<f64>,
    upper_holds: bool,
    lower_holds: bool,
}

#[derive(Serialize)]
struct CoupleSummary {
    sizes: Vec<SizeSummary>,
    fit: flipmix::spectral::CoalescenceFit,
}

#[derive(Serialize)]
struct SizeSummary {
    n: usize,
    runs: usize,
    mean: f64,
    median: f64,
    domination_held: bool,
}

fn run(cli: Cli) -> Result<()> {
    let cap = cli.cap;
    match cli.command {
        Command::Count { k, n } => {
            if k == 0 {
                bail!("k must be at least 1");
            }
            println!("{}", fuss_catalan(k, n));
        }
        Command::Enumerate { n, format, out } => {
            let paths = enumerate_paths_with_cap(n, cap_or(cap, DEFAULT_ENUMERATION_CAP))?;
            let header = Header::new("enumerate", None);
            let sink = open(out.output.as_deref())?;
            match format {
                Format::Csv => write_csv(
                    sink,
                    &header,
                    &["index", "path", "tree"],
                    paths.iter().enumerate().map(|(i, p)| [i.to_string(), p.to_string(), path_to_tree(p).to_text()]),
                )?,
                Format::Json => {
                    #[derive(Serialize)]
                    struct Entry {
                        path: DyckPath,
                        tree: Ncst,
                    }
                    let entries: Vec<Entry> = paths.into_iter().map(|p| Entry { tree: path_to_tree(&p), path: p }).collect();
                    write_json(sink, &header, &entries)?;
                }
            }
        }
        Command::Bijection { path, tree } => match (path, tree) {
            (Some(p), _) => println!("{}", path_to_tree(&p).to_text()),
            (None, Some(t)) => println!("{}", tree_to_path(&t)),
            (None, None) => unreachable!("clap requires one of the two"),
        },
        Command::Walk { chain, n, steps, seed, every, start, out } => {
            if every == 0 {
                bail!("--every must be positive");
            }
            let mut rng = RngStream::new(seed);
            let start_path = match (&start, chain) {
                (None, _) => DyckPath::highest(n),
                (Some(text), ChainKind::Am) => text.parse::<DyckPath>()?,
                (Some(text), ChainKind::Fm) => tree_to_path(&text.parse::<Ncst>()?),
            };
            if start_path.size() != n {
                bail!(flipmix::Error::SizeMismatch(start_path.size(), n));
            }
            let mut rows = Vec::new();
            match chain {
                ChainKind::Am => {
                    let mut x = start_path;
                    for t in 0..=steps {
                        if t % every == 0 {
                            rows.push([t.to_string(), x.to_string()]);
                        }
                        if t < steps {
                            x = am_step(&x, &mut rng);
                        }
                    }
                }
                ChainKind::Fm => {
                    let mut s = path_to_tree(&start_path);
                    for t in 0..=steps {
                        if t % every == 0 {
                            rows.push([t.to_string(), s.to_text()]);
                        }
                        if t < steps {
                            s = fm_step(&s, &mut rng);
                        }
                    }
                }
            }
            write_csv(open(out.output.as_deref())?, &Header::new("walk", Some(seed)), &["t", "state"], rows)?;
        }
        Command::Path { from, to, out } => {
            let path = build_path(&from, &to)?;
            let steps = path
                .steps
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    Ok(StepRecord {
                        before: s.before.to_text(),
                        after: s.after.to_text(),
                        removed: s.removed.to_string(),
                        added: s.added.to_string(),
                        tag: format!("{:?}", s.tag),
                        depth: s.depth,
                        encoding: encode(&path, k)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let record = PathRecord { from, to, classification: path.classification, shift: path.shift, steps };
            write_json(open(out.output.as_deref())?, &Header::new("path", None), &record)?;
        }
        Command::Congestion { n, out, summary } => {
            let report = congestion_census_with_cap(n, cap_or(cap, DEFAULT_CENSUS_CAP))?;
            let header = Header::new("congestion", None);
            let rows = report.usage.iter().map(|u| [u.from.to_text(), u.to.to_text(), u.count.to_string()]);
            write_csv(open(out.output.as_deref())?, &header, &["z", "z_prime", "count"], rows)?;
            let body = CongestionSummary {
                n,
                pairs: report.pairs,
                transitions: report.usage.len(),
                max_count: report.max_count,
                bound_12n: report.bound_12n,
                max_path_len: report.max_path_len,
                b: report.congestion.to_string(),
                b_float: report.congestion_f64(),
                b_over_n4: report.congestion_over_n4(),
            };
            write_summary(summary.as_deref(), &header, &body)?;
        }
        Command::Spectrum { chain, n, out } => {
            let m = transition_matrix_with_cap(chain, n, cap_or(cap, DEFAULT_MATRIX_CAP))?;
            write_json(open(out.output.as_deref())?, &Header::new("spectrum", None), &spectrum(&m))?;
        }
        Command::Mix { chain, n, out, summary } => {
            let tv_cap = cap_or(cap, DEFAULT_TV_CAP);
            let m = transition_matrix_with_cap(chain, n, tv_cap.max(DEFAULT_MATRIX_CAP))?;
            let report = tv_mixing_time_with_cap(&m, tv_cap)?;
            let header = Header::new("mix", None);
            let rows = report.d_curve.iter().enumerate().map(|(t, d)| [t.to_string(), format!("{d:.12}")]);
            write_csv(open(out.output.as_deref())?, &header, &["t", "d"], rows)?;
            let body = MixSummary {
                chain,
                n,
                states: report.states,
                gap: report.gap,
                relaxation: report.relaxation,
                t_mix: report.t_mix,
                pi_min: report.pi_min,
                upper_bound: report.upper_bound,
                upper_holds: report.upper_holds,
                lower_holds: report.lower_holds,
            };
            write_summary(summary.as_deref(), &header, &body)?;
        }
        Command::Couple { n_list, seeds, seed, out, summary } => {
            if seeds == 0 {
                bail!("--seeds must be at least 1");
            }
            let stats = n_list.iter().map(|&n| coalescence_experiment(n, seeds, seed)).collect::<Result<Vec<_>, _>>()?;
            let header = Header::new("couple", Some(seed));
            let rows = stats
                .iter()
                .flat_map(|s| s.times.iter().enumerate().map(move |(i, t)| [s.n.to_string(), i.to_string(), t.to_string()]));
            write_csv(open(out.output.as_deref())?, &header, &["n", "replica", "time"], rows)?;
            let sizes = stats
                .iter()
                .map(|s| SizeSummary {
                    n: s.n,
                    runs: s.times.len(),
                    mean: s.mean,
                    median: s.median,
                    domination_held: s.domination_held,
                })
                .collect();
            write_summary(summary.as_deref(), &header, &CoupleSummary { sizes, fit: fit_coalescence(&stats) })?;
        }
        Command::Verify { max_n } => {
            let checks = verify::run(max_n);
            let mut failed = 0;
            for check in &checks {
                match &check.outcome {
                    Ok(detail) => println!("ok    {} (n<={}): {detail}", check.name, check.limit),
                    Err(detail) => {
                        failed += 1;
                        println!("FAIL  {} (n<={}): {detail}", check.name, check.limit);
                    }
                }
            }
            if failed > 0 {
                return Err(VerificationFailed(failed).into());
            }
        }
    }
    Ok(())
}
