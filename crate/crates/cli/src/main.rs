//! `tseq`: exact, certificate-carrying experiments with candidate null
//! sequences in Prüfer groups and direct sums of finite cyclic groups.

use std::io::BufRead;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tseq_cli::commands;
use tseq_cli::config::{OutputMode, RunConfig};
use tseq_cli::records::{emit, AppError};
use tseq_cli::repro;

#[derive(Parser)]
#[command(
    name = "tseq",
    version,
    about = "Exact arithmetic for convergence experiments in torsion abelian groups",
    after_help = "All fractions print reduced as num/den. Exit codes: 0 ok, 1 reproduction failure, 2 invalid input, 3 budget or cap exceeded."
)]
struct Cli {
    /// JSON config file (also via TSEQ_CONFIG); flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    output: Option<OutputMode>,
    /// Cap on evaluated combinations per enumeration.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    subgroup_cap: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical forms of coefficient representations (stdin JSON lines or --terms).
    Canon {
        #[arg(long)]
        p: Option<u64>,
        /// Inline terms like "[[1,2],[2,2]]" (needs --p).
        #[arg(long)]
        terms: Option<String>,
    },
    /// Enumerate a windowed combination set with witnesses.
    Aset {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        l: u32,
        /// Inclusive index window, e.g. 2..6.
        #[arg(long)]
        window: String,
    },
    /// Windowed membership of one element.
    Member {
        #[arg(long)]
        g: String,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        window: String,
    },
    /// Membership persistence scan across shifted windows.
    Zpscan {
        #[arg(long)]
        g: String,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        l: u32,
        /// Window starts to test, e.g. 1..10.
        #[arg(long, default_value = "1..10")]
        m_range: String,
        #[arg(long)]
        width: Option<u64>,
    },
    /// Order-based sufficient-condition checkers.
    Criteria {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        window: Option<String>,
        /// Torsion divisor for the window separation check.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
        /// Truncation depth for direct-sum torsion.
        #[arg(long)]
        ds_depth: Option<u64>,
    },
    /// Character evaluation, block values, reports, classification, witnesses, kernels.
    Char {
        #[command(subcommand)]
        sub: CharCmd,
    },
    /// The named sequence constructions with exact leading terms.
    Gallery {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, default_value_t = 5)]
        terms: u64,
    },
    /// Run a named acceptance check (1..=10 or `all`) and print PASS/FAIL.
    Reproduce { id: String },
}

#[derive(Subcommand)]
enum CharCmd {
    /// Evaluate a character on an element.
    Eval {
        #[arg(long)]
        p: Option<u64>,
        /// JSON {"p":3,"digits":[…]} or mult:<m> with --truncation.
        #[arg(long)]
        chi: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Block value across digit positions [lo, hi).
    Rk {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        chi: String,
        #[arg(long)]
        lo: u32,
        #[arg(long)]
        hi: u32,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Exact tail-supremum report of ‖χ(a_k)‖ over a sequence.
    Report {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        chi: String,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        truncation: Option<usize>,
        /// Tolerance is p^-tol_exp.
        #[arg(long)]
        tol_exp: Option<u32>,
        /// Comma-separated checkpoint starts.
        #[arg(long)]
        checkpoints: Option<String>,
    },
    /// Classify the scaled embeddings m·χ_1 modulo a power of p.
    Classify {
        #[arg(long)]
        seq: String,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long)]
        tol_exp: Option<u32>,
        #[arg(long)]
        checkpoints: Option<String>,
    },
    /// Build the faithful witness character for a shifted sequence.
    Witness {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: String,
        /// Exponent rule: square | fib | linear:a,b | list:…
        #[arg(long)]
        exponents: String,
        /// How many exponents of the rule to use.
        #[arg(long, default_value_t = 14)]
        count: u64,
        #[arg(long)]
        truncation: usize,
        /// Override free digits, e.g. "2=1;5=2".
        #[arg(long)]
        set: Option<String>,
    },
    /// Common kernel of a character family over a finite truncation.
    Radical {
        #[arg(long)]
        p: Option<u64>,
        /// Comma-separated multipliers for scaled embeddings.
        #[arg(long)]
        multiples: Option<String>,
        /// Kernel domain: the p^exp-torsion subgroup.
        #[arg(long)]
        torsion_exp: Option<u32>,
        #[arg(long)]
        truncation: Option<usize>,
        /// Direct-sum mode: orders rule.
        #[arg(long)]
        orders: Option<String>,
        #[arg(long)]
        depth: Option<u64>,
        /// Coordinate characters to include, e.g. 2..8.
        #[arg(long)]
        units: Option<String>,
        /// JSON array of direct-sum characters.
        #[arg(long)]
        family: Option<String>,
    },
}

fn stdin_lines() -> Result<Vec<String>, AppError> {
    let stdin = std::io::stdin();
    if atty_is_tty() {
        return Ok(Vec::new());
    }
    let mut lines = Vec::new();
    for line in stdin.lock().lines() {
        lines.push(line.map_err(|e| AppError::Input(e.to_string()))?);
    }
    Ok(lines)
}

fn atty_is_tty() -> bool {
    use std::io::IsTerminal;
    std::io::stdin().is_terminal()
}

fn run(cli: Cli) -> Result<i32, AppError> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(o) = cli.output {
        cfg.output = o;
    }
    if let Some(b) = cli.budget {
        cfg.max_combinations = b;
    }
    if let Some(c) = cli.subgroup_cap {
        cfg.subgroup_cap = c;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }

    let records = match &cli.cmd {
        Cmd::Canon { p, terms } => {
            let lines = if terms.is_none() { stdin_lines()? } else { Vec::new() };
            commands::canon(*p, terms.as_deref(), &lines)?
        }
        Cmd::Aset { seq, l, window } => commands::aset(&cfg, seq, *l, window)?,
        Cmd::Member { g, seq, l, window } => commands::member(&cfg, g, seq, *l, window)?,
        Cmd::Zpscan {
            g,
            seq,
            l,
            m_range,
            width,
        } => commands::zpscan(&cfg, g, seq, *l, m_range, *width)?,
        Cmd::Criteria {
            seq,
            l,
            window,
            n,
            horizon,
            ds_depth,
        } => commands::criteria(&cfg, seq, *l, window.as_deref(), *n, *horizon, *ds_depth)?,
        Cmd::Char { sub } => match sub {
            CharCmd::Eval {
                p,
                chi,
                y,
                truncation,
            } => commands::char_eval(*p, chi, y, *truncation)?,
            CharCmd::Rk {
                p,
                chi,
                lo,
                hi,
                truncation,
            } => commands::char_block(*p, chi, *lo, *hi, *truncation)?,
            CharCmd::Report {
                seq,
                chi,
                horizon,
                truncation,
                tol_exp,
                checkpoints,
            } => commands::char_report(
                &cfg,
                seq,
                chi,
                *horizon,
                *truncation,
                *tol_exp,
                checkpoints.as_deref(),
            )?,
            CharCmd::Classify {
                seq,
                modulus,
                horizon,
                truncation,
                tol_exp,
                checkpoints,
            } => commands::char_classify(
                &cfg,
                seq,
                *modulus,
                *horizon,
                *truncation,
                *tol_exp,
                checkpoints.as_deref(),
            )?,
            CharCmd::Witness {
                p,
                x,
                exponents,
                count,
                truncation,
                set,
            } => commands::char_witness(*p, x, exponents, *count, *truncation, set.as_deref())?,
            CharCmd::Radical {
                p,
                multiples,
                torsion_exp,
                truncation,
                orders,
                depth,
                units,
                family,
            } => commands::char_radical(
                &cfg,
                *p,
                multiples.as_deref(),
                *torsion_exp,
                *truncation,
                orders.as_deref(),
                *depth,
                units.as_deref(),
                family.as_deref(),
            )?,
        },
        Cmd::Gallery { kind, terms } => commands::gallery(kind.as_deref(), *terms)?,
        Cmd::Reproduce { id } => {
            let ids: Vec<u32> = if id == "all" {
                repro::ids()
            } else {
                vec![id
                    .parse()
                    .map_err(|_| AppError::Input(format!("bad criterion id `{id}`")))?]
            };
            let mut all_pass = true;
            let mut recs = Vec::new();
            for i in ids {
                let report = repro::run(i, &cfg)?;
                eprintln!("{}", report.line());
                all_pass &= report.pass;
                recs.push(report.record());
            }
            emit(&recs, cfg.output);
            return Ok(if all_pass { 0 } else { 1 });
        }
    };
    emit(&records, cfg.output);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
