//! Command-line surface: sampling, encoding, simulation, and experiment
//! reports. Every subcommand is a pure function of its flags; output files
//! are only written on success (exit 0). Exit codes: 0 success, 2 for
//! precondition or parse failures, 3 when an experiment's statistical test
//! fails (the report then goes to stdout and no file is written).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bipolar_maps::{
    build_map, code_hex, csv_document, csv_real, decode_map, exact_window_law,
    grow_until_certified, hill_tail_index, map_json_decode, map_json_encode, moves_text_decode,
    moves_text_encode, sample_conditioned_indexed, sample_jump_ppp, sample_unconditioned,
    scaling_experiment, assemble_pair, default_delta, Alpha, InfiniteError, Move,
    StepDistribution, Stream, WalkSpec,
};

#[derive(Parser)]
#[command(name = "bipolar-maps", version, about = "Samplers and experiments for bipolar-oriented random planar maps")]
struct Cli {
    /// Tail exponent of the face-degree law, in (1, 2).
    #[arg(long, global = true, default_value_t = 1.5)]
    alpha: f64,
    /// Master seed; identical configurations give byte-identical outputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample an unconditioned encoding walk; CSV (step,dX,dY,X,Y).
    SampleWalk {
        /// Number of steps.
        #[arg(long)]
        n: usize,
    },
    /// Build a map from a moves text file; emits the map JSON document.
    BuildMap {
        /// Moves file: one `E` or `F <i> <j>` per line.
        #[arg(long)]
        input: PathBuf,
    },
    /// Recover the move sequence from a map JSON document.
    DecodeMap {
        #[arg(long)]
        input: PathBuf,
    },
    /// Rejection-sample a conditioned map with boundary constants A, B.
    SampleMap {
        /// Walk length; the map has n+1 edges.
        #[arg(long)]
        n: usize,
        /// West boundary constant: the walk starts at height floor(A n^(1/alpha)).
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        /// East boundary constant: the walk ends at abscissa floor(B n^(1/alpha)).
        #[arg(long, default_value_t = 0.5)]
        b: f64,
        #[arg(long, default_value_t = 100_000_000)]
        max_attempts: u64,
    },
    /// Grow a certified ball of the infinite-volume map.
    SampleBall {
        /// Ball radius.
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Initial window half-width.
        #[arg(long, default_value_t = 64)]
        m0: u64,
        /// Window half-width limit (doubling).
        #[arg(long, default_value_t = 1 << 20)]
        m_max: u64,
    },
    /// Simulate the correlated jump pair; jump CSV plus grid CSV.
    SimulateLevy {
        /// Time horizon.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Jump truncation level; a horizon-scaled default when omitted.
        #[arg(long)]
        delta: Option<f64>,
        /// Points in the evaluation grid CSV.
        #[arg(long, default_value_t = 1001)]
        grid_points: usize,
        /// Grid CSV path; defaults to `<out>.grid.csv` when --out is set.
        #[arg(long)]
        grid_out: Option<PathBuf>,
    },
    /// Statistical experiments; exit 3 when the built-in test fails.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: ExperimentKind,
    /// Walk length (scaling) or ball-law map size (unused elsewhere).
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    replicas: usize,
    /// Sample count for the tail experiment.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Hill order-statistic fraction.
    #[arg(long, default_value_t = 0.01)]
    k_fraction: f64,
    /// Window sizes for the TV trend.
    #[arg(long, value_delimiter = ',', default_values_t = vec![10usize, 20, 40])]
    n_list: Vec<usize>,
    /// Seed count for the ball-frequency table.
    #[arg(long, default_value_t = 10_000)]
    seeds: usize,
    #[arg(long, default_value_t = 1)]
    r: u64,
    #[arg(long, default_value_t = 64)]
    m0: u64,
    #[arg(long, default_value_t = 1 << 20)]
    m_max: u64,
    /// Truncation override for the scaling experiment.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Tails,
    Tv,
    Scaling,
    BallFreq,
}

enum Failure {
    /// Precondition or input problem: exit 2, nothing written.
    Precondition(String),
    /// Statistical test failed: exit 3, report printed to stdout.
    Statistical(String),
}

struct Artifact {
    path: Option<PathBuf>,
    content: String,
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Precondition(format!("cannot read {}: {e}", path.display())))
}

fn dist_for(alpha: f64) -> Result<StepDistribution, Failure> {
    let a = Alpha::new(alpha).map_err(|e| Failure::Precondition(e.to_string()))?;
    StepDistribution::power_law(a).map_err(|e| Failure::Precondition(e.to_string()))
}

fn boundary_height(c: f64, n: usize, alpha: f64) -> Result<i64, Failure> {
    if !c.is_finite() || c < 0.0 {
        return Err(Failure::Precondition(format!(
            "boundary constant must be a nonnegative real, got {c}"
        )));
    }
    Ok((c * (n as f64).powf(1.0 / alpha)).floor() as i64)
}

fn run(cli: Cli) -> Result<Vec<Artifact>, Failure> {
    let dist = dist_for(cli.alpha)?;
    match cli.cmd {
        Cmd::SampleWalk { n } => {
            if n == 0 {
                return Err(Failure::Precondition("n must be positive".into()));
            }
            let mut rng = Stream::substream(cli.seed, 0);
            let path = sample_unconditioned(n, &dist, &mut rng);
            let positions = path.positions();
            let rows: Vec<Vec<String>> = path
                .moves
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let (dx, dy) = m.increment();
                    let (x, y) = positions[i + 1];
                    vec![
                        (i + 1).to_string(),
                        dx.to_string(),
                        dy.to_string(),
                        x.to_string(),
                        y.to_string(),
                    ]
                })
                .collect();
            Ok(vec![Artifact {
                path: cli.out,
                content: csv_document(&["step", "dX", "dY", "X", "Y"], &rows),
            }])
        }
        Cmd::BuildMap { input } => {
            let text = read_input(&input)?;
            let moves =
                moves_text_decode(&text).map_err(|e| Failure::Precondition(e.to_string()))?;
            let map = build_map(&moves);
            let doc =
                map_json_encode(&map).map_err(|e| Failure::Precondition(e.to_string()))?;
            Ok(vec![Artifact { path: cli.out, content: doc }])
        }
        Cmd::DecodeMap { input } => {
            let text = read_input(&input)?;
            let map =
                map_json_decode(&text).map_err(|e| Failure::Precondition(e.to_string()))?;
            let moves =
                decode_map(&map).map_err(|e| Failure::Precondition(e.to_string()))?;
            Ok(vec![Artifact {
                path: cli.out,
                content: moves_text_encode(&moves),
            }])
        }
        Cmd::SampleMap { n, a, b, max_attempts } => {
            if n == 0 {
                return Err(Failure::Precondition("n must be positive".into()));
            }
            let l_start = boundary_height(a, n, cli.alpha)?;
            let k_end = boundary_height(b, n, cli.alpha)?;
            let spec = WalkSpec::new(n, l_start, k_end, dist);
            let sample = sample_conditioned_indexed(&spec, cli.seed, max_attempts)
                .map_err(|e| Failure::Precondition(e.to_string()))?;
            let map = build_map(&sample.path.moves);
            let doc =
                map_json_encode(&map).map_err(|e| Failure::Precondition(e.to_string()))?;
            Ok(vec![Artifact { path: cli.out, content: doc }])
        }
        Cmd::SampleBall { r, m0, m_max } => {
            let (ball, m) = grow_until_certified(cli.seed, r, &dist, m0, m_max).map_err(
                |e: InfiniteError| Failure::Precondition(e.to_string()),
            )?;
            let code = ball.code();
            let doc = json!({
                "seed": cli.seed,
                "alpha": cli.alpha,
                "radius": ball.radius,
                "window_half_width": m,
                "certified": ball.certified,
                "vertex_count": ball.graph.vertex_count(),
                "root": ball.graph.root,
                "adjacency": ball.graph.adj,
                "canonical_code": code_hex(&code),
            });
            Ok(vec![Artifact {
                path: cli.out,
                content: serde_json::to_string_pretty(&doc).expect("map json") + "\n",
            }])
        }
        Cmd::SimulateLevy { t, delta, grid_points, grid_out } => {
            let alpha = dist.alpha().expect("power law has alpha");
            let c1 = dist.constants().expect("power law has constants").c1;
            let delta = delta.unwrap_or_else(|| default_delta(t, alpha));
            if grid_points < 2 {
                return Err(Failure::Precondition("grid_points must be >= 2".into()));
            }
            let mut rng = Stream::substream(cli.seed, 0);
            let jumps = sample_jump_ppp(t, delta, alpha, c1, &mut rng)
                .map_err(|e| Failure::Precondition(e.to_string()))?;
            let pair = assemble_pair(jumps, delta, t, alpha, c1);
            let jump_rows: Vec<Vec<String>> = pair
                .jumps()
                .iter()
                .map(|j| vec![csv_real(j.t), csv_real(j.j), csv_real(j.u)])
                .collect();
            let mut jump_csv = format!(
                "# horizon={} delta={} truncation_std_bound={}\n",
                csv_real(t),
                csv_real(delta),
                csv_real(pair.truncation_std_bound())
            );
            jump_csv.push_str(&csv_document(&["t", "j", "U"], &jump_rows));
            let grid_rows: Vec<Vec<String>> = pair
                .sample_grid(grid_points)
                .into_iter()
                .map(|(gt, w1, w2)| vec![csv_real(gt), csv_real(w1), csv_real(w2)])
                .collect();
            let grid_csv = csv_document(&["t", "W1", "W2"], &grid_rows);
            let grid_path = grid_out.or_else(|| {
                cli.out.as_ref().map(|p| {
                    let mut s = p.as_os_str().to_owned();
                    s.push(".grid.csv");
                    PathBuf::from(s)
                })
            });
            Ok(vec![
                Artifact { path: cli.out, content: jump_csv },
                Artifact { path: grid_path, content: grid_csv },
            ])
        }
        Cmd::Experiment(args) => run_experiment(&cli.alpha, cli.seed, cli.out, &dist, args),
    }
}

fn run_experiment(
    alpha: &f64,
    seed: u64,
    out: Option<PathBuf>,
    dist: &StepDistribution,
    args: ExperimentArgs,
) -> Result<Vec<Artifact>, Failure> {
    let (report, passed) = match args.kind {
        ExperimentKind::Tails => {
            let mut rng = Stream::substream(seed, 1);
            let mut degs = Vec::with_capacity(args.samples);
            while degs.len() < args.samples {
                if let Move::Face { i, j } = dist.sample_move(&mut rng) {
                    degs.push((i + j + 2) as f64);
                }
            }
            let (est, se) = hill_tail_index(&degs, args.k_fraction)
                .map_err(|e| Failure::Precondition(e.to_string()))?;
            let tolerance = 0.1;
            let passed = (est - alpha).abs() <= tolerance;
            (
                json!({
                    "experiment": "tails",
                    "alpha": alpha,
                    "seed": seed,
                    "samples": args.samples,
                    "k_fraction": args.k_fraction,
                    "estimate": est,
                    "std_error": se,
                    "tolerance": tolerance,
                    "passed": passed,
                }),
                passed,
            )
        }
        ExperimentKind::Tv => {
            if args.n_list.len() < 2 {
                return Err(Failure::Precondition(
                    "tv experiment needs at least two window sizes".into(),
                ));
            }
            let mut values = Vec::new();
            for &n in &args.n_list {
                let h = ((n as f64).powf(1.0 / alpha) / 2.0).floor() as i64;
                let spec = WalkSpec::new(n, h, h, dist.clone());
                let law = exact_window_law(&spec, 0, 64)
                    .map_err(|e| Failure::Precondition(e.to_string()))?;
                values.push(json!({
                    "n": n,
                    "boundary": h,
                    "tv_to_step_law": law.tv_to_step_product(dist),
                }));
            }
            let tvs: Vec<f64> = values
                .iter()
                .map(|v| v["tv_to_step_law"].as_f64().expect("tv value"))
                .collect();
            let passed = tvs.windows(2).all(|w| w[1] < w[0]);
            (
                json!({
                    "experiment": "tv",
                    "alpha": alpha,
                    "seed": seed,
                    "r": 0,
                    "values": values,
                    "strictly_decreasing": passed,
                    "passed": passed,
                }),
                passed,
            )
        }
        ExperimentKind::Scaling => {
            let report = scaling_experiment(args.n, args.replicas, dist, seed, args.delta)
                .map_err(|e| Failure::Precondition(e.to_string()))?;
            let passed = report.all_passed();
            (
                serde_json::to_value(&report).expect("report serializes"),
                passed,
            )
        }
        ExperimentKind::BallFreq => {
            let mut table: std::collections::BTreeMap<String, u64> = Default::default();
            let mut certified = 0u64;
            for k in 0..args.seeds as u64 {
                match grow_until_certified(
                    seed.wrapping_add(k),
                    args.r,
                    dist,
                    args.m0,
                    args.m_max,
                ) {
                    Ok((ball, _)) => {
                        certified += 1;
                        *table.entry(code_hex(&ball.code())).or_insert(0) += 1;
                    }
                    Err(InfiniteError::NotCertified { .. }) => {}
                    Err(e) => return Err(Failure::Precondition(e.to_string())),
                }
            }
            (
                json!({
                    "experiment": "ball-freq",
                    "alpha": alpha,
                    "seed": seed,
                    "seeds": args.seeds,
                    "r": args.r,
                    "m0": args.m0,
                    "m_max": args.m_max,
                    "certified": certified,
                    "table": table,
                }),
                true,
            )
        }
    };
    let content = serde_json::to_string_pretty(&report).expect("report json") + "\n";
    if passed {
        Ok(vec![Artifact { path: out, content }])
    } else {
        Err(Failure::Statistical(content))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(artifacts) => {
            let mut stdout_blob = String::new();
            for a in &artifacts {
                match &a.path {
                    Some(p) => {
                        if let Err(e) = std::fs::write(p, &a.content) {
                            eprintln!("error: cannot write {}: {e}", p.display());
                            return ExitCode::from(2);
                        }
                    }
                    None => {
                        let _ = write!(stdout_blob, "{}", a.content);
                    }
                }
            }
            print!("{stdout_blob}");
            ExitCode::SUCCESS
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Statistical(report)) => {
            print!("{report}");
            eprintln!("error: statistical test failed (see report above)");
            ExitCode::from(3)
        }
    }
}
