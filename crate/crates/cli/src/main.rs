//! `plumbing`: invariants of negative definite plumbed 3-manifolds.
//!
//! Exit status: 0 on success, 1 if some checked identity fails, 2 on bad
//! input (unreadable or malformed graph, bad arguments, cap exceeded).

mod commands;
mod config;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use commands::{Knot, Settings, VerifySource};
use config::{Config, Format, CONFIG_ENV};

#[derive(Parser)]
#[command(name = "plumbing", version, about = "Exact invariants of negative definite plumbed 3-manifolds")]
struct Cli {
    /// TOML config file.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Largest |H| accepted without complaint.
    #[arg(long, global = true)]
    max_h: Option<u64>,

    /// Print timings to stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// |H|, λ and, per Spin^c structure, torsion, sw and the k-term.
    Invariants {
        /// Graph file (text or JSON), `-` for stdin.
        graph: PathBuf,
    },
    /// Checks the surgery formula and the component identities.
    Verify {
        #[arg(required_unless_present = "random")]
        graph: Option<PathBuf>,
        /// Draw a seeded corpus of random trees instead of reading a file.
        #[arg(long, conflicts_with = "graph")]
        random: bool,
        #[arg(long, requires = "random")]
        seed: Option<u64>,
        /// Maximal number of vertices of the random trees.
        #[arg(long, requires = "random", default_value_t = 10)]
        n: usize,
        #[arg(long, requires = "random")]
        count: Option<usize>,
        /// A vertex id or `all`.
        #[arg(long, default_value = "all")]
        vertex: String,
    },
    /// The function H_{σ,v}(t) with its polynomial part and Taylor series.
    Hilbert {
        graph: PathBuf,
        /// Vertex id; defaults to the first vertex of the file.
        #[arg(long)]
        vertex: Option<String>,
        /// Index in the enumeration of H, or a representative `E*: {v: 1/3}`.
        #[arg(long, default_value = "0")]
        spinc: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Seifert invariants and p_g of a star-shaped graph.
    Seifert {
        graph: PathBuf,
        /// Central vertex; defaults to the first vertex of maximal degree.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// The Brieskorn sphere Σ(a,b,c): graph, p_g, sw_can.
    Brieskorn { a: i64, b: i64, c: i64 },
    /// sw of every Spin^c structure on S³_{-d}(K).
    KnotSurgery {
        /// Torus knot parameters.
        #[arg(long, requires = "q", conflicts_with = "alexander")]
        p: Option<i64>,
        #[arg(long, requires = "p")]
        q: Option<i64>,
        /// Alexander polynomial coefficients, lowest degree first.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required_unless_present = "p")]
        alexander: Option<Vec<i64>>,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        d: i64,
    },
}

fn settings(cli: &Cli) -> anyhow::Result<Settings> {
    let mut config = Config::load(cli.config.as_deref())?;
    if let Some(f) = cli.format {
        config.format = f;
    }
    if let Some(m) = cli.max_h {
        config.max_h = m;
    }
    config.verbosity = config.verbosity.max(cli.verbose);
    config.validate()?;
    Ok(Settings { config })
}

fn run(cli: Cli) -> anyhow::Result<commands::Output> {
    let s = settings(&cli)?;
    match cli.command {
        Command::Invariants { graph } => commands::invariants(&graph, &s),
        Command::Verify {
            graph,
            random,
            seed,
            n,
            count,
            vertex,
        } => {
            let source = match (&graph, random) {
                (Some(path), false) => VerifySource::File(path),
                _ => VerifySource::Random {
                    seed: seed.unwrap_or(s.config.corpus_seed),
                    n,
                    count: count.unwrap_or(s.config.corpus_size),
                },
            };
            commands::verify(source, &vertex, &s)
        }
        Command::Hilbert {
            graph,
            vertex,
            spinc,
            terms,
        } => commands::hilbert(&graph, vertex.as_deref(), &spinc, terms, &s),
        Command::Seifert { graph, vertex } => commands::seifert(&graph, vertex.as_deref(), &s),
        Command::Brieskorn { a, b, c } => commands::brieskorn(a, b, c, &s),
        Command::KnotSurgery { p, q, alexander, d } => {
            let knot = match (p, q, alexander) {
                (Some(p), Some(q), _) => Knot::Torus(p, q),
                (_, _, Some(delta)) => Knot::Alexander(delta),
                _ => anyhow::bail!("give --p and --q or --alexander"),
            };
            commands::knot_surgery(knot, d, &s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = stdout.write_all(out.text.as_bytes());
            if out.violations > 0 {
                eprintln!("{} identity violations", out.violations);
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
