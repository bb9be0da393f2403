//! `symwalk`: exact expectations of permutation statistics under random
//! walks on the symmetric group.

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use symwalk_core::arith::{format_rational, to_f64};
use symwalk_core::oracle::monte_carlo;
use symwalk_core::verify::run_suite;
use symwalk_core::{
    build_table, character, decompose, expectation, walk_distribution, GeneratorSet, Partition,
    Statistic,
};

mod render;

use render::{Format, Table};

#[derive(Parser, Debug)]
#[command(name = "symwalk", version, about = "Exact expectations of permutation statistics on random walks in S_n")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = FormatArg::Plain)]
    format: FormatArg,
    /// Suppress headers and progress output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one irreducible character χ^λ(μ).
    Char {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
    },
    /// Print the full character table of S_n.
    Table {
        #[arg(long)]
        n: usize,
    },
    /// Expand a mean statistic in irreducible characters.
    Decompose {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        stat: StatArgs,
    },
    /// Expected value of a statistic after t steps.
    Expect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: String,
        #[command(flatten)]
        stat: StatArgs,
        #[arg(long)]
        t: u32,
    },
    /// Distribution of the t-step product over conjugacy classes.
    Distribution {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        t: u32,
    },
    /// Monte Carlo estimate compared with the exact expectation.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: String,
        #[command(flatten)]
        stat: StatArgs,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail when |z| reaches this bound.
        #[arg(long, default_value_t = 5.0)]
        zmax: f64,
    },
    /// Run the exact cross-check suite.
    Verify {
        #[arg(long, default_value_t = 6)]
        nmax: usize,
    },
}

#[derive(Args, Debug)]
struct StatArgs {
    /// exc | wexc | des | maj | inv | cyc (with --k) | cyc_K
    #[arg(long)]
    stat: String,
    #[arg(long)]
    k: Option<usize>,
}

impl StatArgs {
    fn resolve(&self, n: usize) -> Result<Statistic> {
        let stat = Statistic::from_parts(&self.stat, self.k)?;
        stat.check(n)?;
        Ok(stat)
    }
}

/// Failures that map to exit code 1 rather than a usage error.
#[derive(Debug)]
struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if cli.quiet {
        "error"
    } else {
        "warn"
    }))
    .init();
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Plain => Format::Plain,
    };
    match run(cli.command, format, cli.quiet) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => match e.downcast_ref::<CheckFailed>() {
            Some(_) => ExitCode::from(1),
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

fn run(command: Command, format: Format, quiet: bool) -> Result<String> {
    match command {
        Command::Char { n, lambda, mu } => {
            for p in [&lambda, &mu] {
                if p.n() != n {
                    bail!("{p} is not a partition of {n}");
                }
            }
            let value = character(&lambda, &mu)?;
            Ok(match format {
                Format::Plain => format!("{value}\n"),
                Format::Csv => format!("lambda,mu,value\n\"{lambda}\",\"{mu}\",{value}\n"),
                Format::Json => format!(
                    "{}\n",
                    serde_json::json!({
                        "lambda": lambda.to_string(),
                        "mu": mu.to_string(),
                        "value": value.to_string().parse::<serde_json::Number>()?,
                    })
                ),
            })
        }
        Command::Table { n } => {
            if n == 0 {
                bail!("n must be positive");
            }
            let table = build_table(n);
            Ok(match format {
                Format::Json => format!("{}\n", table.to_json()),
                Format::Csv => table.to_csv(),
                Format::Plain => render::plain_char_table(&table),
            })
        }
        Command::Decompose { n, stat } => {
            let stat = stat.resolve(n)?;
            let d = decompose(stat, n)?;
            if format == Format::Json {
                return Ok(format!("{}\n", d.to_json()));
            }
            let mut t = Table::new(["lambda", "value", "float"]);
            for (lambda, c) in d.coeffs() {
                t.push([lambda.to_string(), format_rational(c), to_f64(c).to_string()]);
            }
            Ok(t.render(format, quiet))
        }
        Command::Expect { n, gamma, stat, t } => {
            let gamma = GeneratorSet::parse(n, &gamma)?;
            let stat = stat.resolve(n)?;
            let r = expectation(&gamma, stat, t)?;
            Ok(match format {
                Format::Json => format!("{}\n", r.to_json()),
                Format::Csv => {
                    let mut tab = Table::new(["n", "gamma", "stat", "t", "exact", "float"]);
                    tab.push([
                        r.n.to_string(),
                        r.gamma.clone(),
                        r.stat.to_string(),
                        r.t.to_string(),
                        format_rational(&r.exact),
                        r.float.to_string(),
                    ]);
                    tab.render(format, quiet)
                }
                Format::Plain => format!("{}\t{}\n", format_rational(&r.exact), r.float),
            })
        }
        Command::Distribution { n, gamma, t } => {
            let gamma = GeneratorSet::parse(n, &gamma)?;
            let dist = walk_distribution(&gamma, t);
            if format == Format::Json {
                let entries: Vec<_> = dist
                    .iter()
                    .map(|(nu, p)| serde_json::json!({"class": nu.to_string(), "value": format_rational(p)}))
                    .collect();
                return Ok(format!(
                    "{}\n",
                    serde_json::json!({"n": n, "gamma": gamma.to_string(), "t": t, "distribution": entries})
                ));
            }
            let mut tab = Table::new(["class", "probability", "float"]);
            for (nu, p) in &dist {
                tab.push([nu.to_string(), format_rational(p), to_f64(p).to_string()]);
            }
            Ok(tab.render(format, quiet))
        }
        Command::Simulate {
            n,
            gamma,
            stat,
            t,
            trials,
            seed,
            zmax,
        } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let gamma = GeneratorSet::parse(n, &gamma)?;
            let stat = stat.resolve(n)?;
            let report = monte_carlo(&gamma, stat, t, trials, seed)?;
            let out = match format {
                Format::Json => format!("{}\n", report.to_json()),
                _ => {
                    let z = report.z_score.map_or("inf".to_string(), |z| format!("{z:.4}"));
                    let mut tab = Table::new(["trials", "seed", "mean", "stddev", "reference", "z"]);
                    tab.push([
                        report.trials.to_string(),
                        report.seed.to_string(),
                        report.sample_mean.to_string(),
                        report.sample_stddev.to_string(),
                        format_rational(&report.reference_exact),
                        z,
                    ]);
                    tab.render(format, quiet)
                }
            };
            if report.within(zmax) {
                Ok(out)
            } else {
                print!("{out}");
                Err(CheckFailed.into())
            }
        }
        Command::Verify { nmax } => {
            if nmax < 2 {
                bail!("--nmax must be at least 2");
            }
            let outcomes = run_suite(nmax);
            let out = render::verify_report(&outcomes, nmax, format, quiet)
                .context("rendering verify report")?;
            if outcomes.iter().all(|o| o.passed()) {
                Ok(out)
            } else {
                print!("{out}");
                Err(CheckFailed.into())
            }
        }
    }
}
