use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bucketprobe::commands::{cmd_analytic, cmd_exact, cmd_simulate, cmd_tables, cmd_validate, ExactStat};
use bucketprobe::montecarlo::{Filling, SimSpec, SimStatistic};
use bucketprobe::report::RunReport;
use bucketprobe::validate::{Scale, Suite};
use bucketprobe_core::poisson::Statistic;
use bucketprobe_core::table::Topology;

/// Distributions of linear probing hash table statistics with buckets.
#[derive(Parser, Debug)]
#[command(name = "bucketprobe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,

    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Poisson-model law and mean of one statistic.
    Analytic {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        alpha: f64,
        /// H, Q, Y, B, Bhat, U, Ukeys, D_RH, C, V or D_FCFS.
        #[arg(long)]
        stat: String,
        #[arg(long, default_value_t = 20)]
        kmax: usize,
    },
    /// Exact results for a table with m buckets and n keys.
    Exact {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        /// overflow, displacement, block, last_not_full, search_b1, fcfs_b1 or full_table.
        #[arg(long)]
        stat: String,
    },
    /// Monte Carlo simulation.
    Simulate(SimulateArgs),
    /// Built-in validation suites.
    Validate {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = ScaleArg::Small)]
        scale: ScaleArg,
    },
    /// Recompute the theoretical columns of the comparison tables.
    Tables {
        #[arg(long, default_value = "all")]
        which: String,
    },
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    b: usize,
    /// Exact number of keys.
    #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
    n: Option<usize>,
    /// Poisson filling with mean bαm keys.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = HeuristicArg::Fcfs)]
    heuristic: HeuristicArg,
    #[arg(long, value_enum, default_value_t = TopologyArg::Cyclic)]
    topology: TopologyArg,
    #[arg(long, default_value_t = 1000)]
    reps: u64,
    /// Comma-separated statistic names; defaults depend on the topology.
    #[arg(long, value_delimiter = ',')]
    stats: Vec<String>,
    #[arg(long, default_value_t = 10)]
    kmax: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeuristicArg {
    Fcfs,
    Rh,
    Lcfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyArg {
    Cyclic,
    Parking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Roots,
    Pgf,
    Exact,
    Simulation,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Small,
    Full,
}

fn simulate_spec(args: &SimulateArgs, seed: u64, threads: usize) -> anyhow::Result<SimSpec> {
    let filling = match (args.n, args.alpha) {
        (Some(n), None) => Filling::Exact(n),
        (None, Some(alpha)) => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(anyhow!("alpha must lie in (0, 1), got {alpha}"));
            }
            Filling::Poisson(alpha)
        }
        _ => return Err(anyhow!("give exactly one of --n and --alpha")),
    };
    let topology = match args.topology {
        TopologyArg::Cyclic => Topology::Cyclic,
        TopologyArg::Parking => Topology::Parking,
    };
    let displacement = match args.heuristic {
        HeuristicArg::Fcfs => SimStatistic::DFcfs,
        HeuristicArg::Rh => SimStatistic::DRh,
        HeuristicArg::Lcfs => SimStatistic::DLcfs,
    };
    let statistics = if args.stats.is_empty() {
        use SimStatistic::*;
        match topology {
            Topology::Cyclic => vec![H, Q, Y, B, Bhat, U, Ukeys, displacement],
            Topology::Parking => vec![H, Q, Y, displacement, NoOverflow],
        }
    } else {
        args.stats
            .iter()
            .map(|s| SimStatistic::from_name(s.trim()).ok_or_else(|| anyhow!("unknown statistic {s}")))
            .collect::<anyhow::Result<_>>()?
    };
    Ok(SimSpec {
        m: args.m,
        b: args.b,
        filling,
        topology,
        statistics,
        reps: args.reps,
        seed,
        threads,
    })
}

fn run(cli: &Cli) -> anyhow::Result<RunReport> {
    let report = match &cli.command {
        Command::Analytic { b, alpha, stat, kmax } => {
            let stat = Statistic::from_name(stat).ok_or_else(|| anyhow!("unknown statistic {stat}"))?;
            cmd_analytic(*b, *alpha, stat, *kmax)?
        }
        Command::Exact { m, n, b, stat } => {
            let stat = ExactStat::from_name(stat).ok_or_else(|| anyhow!("unknown exact statistic {stat}"))?;
            cmd_exact(*m, *n, *b, stat)?
        }
        Command::Simulate(args) => cmd_simulate(&simulate_spec(args, cli.seed, cli.threads)?, args.kmax)?,
        Command::Validate { suite, scale } => {
            let suite = match suite {
                SuiteArg::Roots => Suite::Roots,
                SuiteArg::Pgf => Suite::Pgf,
                SuiteArg::Exact => Suite::Exact,
                SuiteArg::Simulation => Suite::Simulation,
                SuiteArg::All => Suite::All,
            };
            let scale = match scale {
                ScaleArg::Small => Scale::Small,
                ScaleArg::Full => Scale::Full,
            };
            cmd_validate(suite, scale, cli.seed, cli.threads)?
        }
        Command::Tables { which } if which.eq_ignore_ascii_case("all") => {
            let mut all = RunReport::new("tables all");
            for id in ["t3", "t4", "t5a", "t5b"] {
                all.extend(cmd_tables(id)?.rows);
            }
            all
        }
        Command::Tables { which } => cmd_tables(which)?,
    };
    Ok(report)
}

fn render(report: &RunReport, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report.to_csv()?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli).and_then(|report| {
        let text = render(&report, cli.format)?;
        match &cli.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(report)
    });
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(report) if report.pass => ExitCode::SUCCESS,
        Ok(report) => {
            for row in report.failures() {
                eprintln!("FAIL {}", row.name);
            }
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
